fn main() {
    std::process::exit(tgl::cli::main());
}
