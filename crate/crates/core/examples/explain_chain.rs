//! Walks the exception chain of a knowledge base read from rule-file text,
//! showing which rules fire at each depth and the resulting atom depths.

use tgl::{compile, format};

const RULES: &str = "\
# birds fly, penguins are birds that do not
bird => fly @ 1
penguin => bird @ 2
penguin => ~fly @ 1
";

fn main() {
    let kb = format::parse_kb(RULES).expect("rule file parses");
    let profile = compile(&kb).unwrap();
    for d in 0..=profile.fixpoint() {
        println!("xi({d}) = {}", profile.xi(d));
        for &i in profile.fired_at(d) {
            println!("    fired: {}", kb.rules()[i]);
        }
    }
    println!("D = {}, window = {}", profile.fixpoint(), profile.window());

    let sig = kb.signature();
    println!("atom depths:");
    for (i, depth) in profile.atom_depths().iter().enumerate() {
        println!("  {:<28} {depth}", sig.atom_label(i));
    }
}
