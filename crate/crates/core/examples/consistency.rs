//! Consistency of a few small knowledge bases, decided from the exception chain.

use tgl::{compile, KnowledgeBase, Signature};

fn report(name: &str, kb: &KnowledgeBase) {
    let profile = compile(kb).expect("compiles");
    let verdict = if profile.is_consistent() { "consistent" } else { "inconsistent" };
    println!("{name}: {verdict} (D = {})", profile.fixpoint());
    for (d, xi) in profile.chain().iter().enumerate() {
        println!("  xi({d}) = {xi}");
    }
}

fn main() {
    let sig = Signature::new(["a", "b"]).unwrap();

    let mut chain = KnowledgeBase::new(sig.clone());
    chain.add("t", "a", 1).unwrap();
    chain.add("~a", "b", 1).unwrap();
    report("t => a, ~a => b", &chain);

    let mut clash = KnowledgeBase::new(sig.clone());
    clash.add("t", "a", 1).unwrap();
    clash.add("t", "~a", 1).unwrap();
    report("t => a, t => ~a", &clash);

    // A hard rule forbids ~a outright; the default about ~a is then vacuous
    // but harmless.
    let mut hard = KnowledgeBase::new(sig);
    hard.add_hard("t", "a").unwrap();
    hard.add("~a", "b", 2).unwrap();
    report("t => a @ inf, ~a => b @ 2", &hard);
}
