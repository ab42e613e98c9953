//! Round trip between rule files and Z+ default rules, and Z+ consequence
//! answered through the depth engine.

use tgl::format;
use tgl::zplus::{from_zplus, to_zplus, zplus_consequence};
use tgl::Proposition;

fn main() {
    let kb = format::parse_kb("t => a @ 1\n~a => b @ 1\nb => c @ 3\n").unwrap();
    let rules = to_zplus(&kb).unwrap();
    print!("as Z+ rules:\n{}", format::write_zplus(&rules));
    let back = from_zplus(&rules, kb.signature()).unwrap();
    assert_eq!(back, kb);
    print!("and back:\n{}", format::write_kb(&back));

    let sig = kb.signature();
    let t = Proposition::parse("t", sig).unwrap();
    let a_or_b = Proposition::parse("a | b", sig).unwrap();
    for jz in 0..3 {
        let holds = zplus_consequence(&rules, &t, &a_or_b, jz).unwrap();
        println!("t |-{jz} a | b: {holds}");
    }

    let hard = format::parse_kb("a => b @ inf\n").unwrap();
    match to_zplus(&hard) {
        Ok(_) => unreachable!(),
        Err(e) => println!("refused: {e}"),
    }
    let (zsig, clash) = format::parse_zplus("t -> a @ 0\nt -> ~a @ 0\n").unwrap();
    let t = Proposition::parse("t", &zsig).unwrap();
    let a = Proposition::parse("a", &zsig).unwrap();
    println!("refused: {}", zplus_consequence(&clash, &t, &a, 0).unwrap_err());
}
