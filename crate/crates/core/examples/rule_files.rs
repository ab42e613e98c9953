//! The command layer as a library: rule-file text in, report and exit
//! status out, plus the machine-readable query record round trip.

use tgl::cli::{cmd_check, cmd_query, query_record, OutputFormat, QueryRecord};

const KB: &str = "t => a @ 1\n~a => b @ 1\n";

fn main() {
    let check = cmd_check(KB, OutputFormat::Text).unwrap();
    print!("{}", check.stdout);
    println!("exit {}", check.code);

    for query in ["t => a | b @ 2", "t => a | b @ 3", "false => x @ 1"] {
        let r = cmd_query(KB, query, OutputFormat::Kv).unwrap();
        print!("{query}\n{}", r.stdout);
        println!("exit {}\n", r.code);
    }

    let record = query_record(KB, "t => a | b @ 2").unwrap();
    let parsed = QueryRecord::from_kv(&record.to_kv()).unwrap();
    let again = query_record(KB, &parsed.query_text()).unwrap();
    println!("round trip reproduces the verdict: {}", again.verdict == record.verdict);

    match cmd_check("t => a @ 0\n", OutputFormat::Text) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
