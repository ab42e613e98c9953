//! Defeasible conclusions: a stronger premise wins a conflict, an equal one
//! does not, and adding a premise can retract an earlier conclusion.

use tgl::{compile, KnowledgeBase, Signature, Threshold, ThresholdedGeneralization};

fn entails(kb: &KnowledgeBase, gamma: &str, zeta: &str, j: u32) -> bool {
    let q = ThresholdedGeneralization::parse(gamma, zeta, Threshold::finite(j).unwrap(), kb.signature()).unwrap();
    compile(kb).unwrap().entails_in_probability(&q).unwrap()
}

fn main() {
    let sig = Signature::new(["a", "b", "g"]).unwrap();

    let mut strong = KnowledgeBase::new(sig.clone());
    strong.add("a", "g", 2).unwrap();
    strong.add("b", "~g", 1).unwrap();
    let mut even = KnowledgeBase::new(sig.clone());
    even.add("a", "g", 1).unwrap();
    even.add("b", "~g", 1).unwrap();
    println!("a =>2 g, b =>1 ~g   |- a & b => g: {}", entails(&strong, "a & b", "g", 1));
    println!("a =>1 g, b =>1 ~g   |- a & b => g: {}", entails(&even, "a & b", "g", 1));

    let mut kb = KnowledgeBase::new(sig);
    kb.add("a", "g", 2).unwrap();
    println!("a =>2 g             |- a & b => g: {}", entails(&kb, "a & b", "g", 1));
    kb.add("a & b", "~g", 1).unwrap();
    println!("... + a & b =>1 ~g  |- a & b => g: {}", entails(&kb, "a & b", "g", 1));
    println!("... + a & b =>1 ~g  |- a & b => ~g: {}", entails(&kb, "a & b", "~g", 1));
    println!("... + a & b =>1 ~g  |- a => g: {}", entails(&kb, "a", "g", 2));
}
