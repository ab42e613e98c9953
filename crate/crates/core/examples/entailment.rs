//! Entailment queries against one knowledge base, with the depths behind
//! each verdict and the strongest threshold that still follows.

use tgl::{compile, KnowledgeBase, Proposition, Signature, Threshold, ThresholdedGeneralization};

fn main() {
    let sig = Signature::new(["a", "b"]).unwrap();
    let mut kb = KnowledgeBase::new(sig.clone());
    kb.add("t", "a", 1).unwrap();
    kb.add("~a", "b", 1).unwrap();
    let profile = compile(&kb).unwrap();

    for j in 1..=3 {
        let q = ThresholdedGeneralization::parse("t", "a | b", Threshold::finite(j).unwrap(), &sig).unwrap();
        let o = profile.evaluate(&q).unwrap();
        println!(
            "{q}: {} (d(gamma) = {}, d(gamma & ~zeta) = {})",
            if o.entailed { "entailed" } else { "not entailed" },
            o.antecedent_depth,
            o.exception_depth
        );
    }

    let gamma = Proposition::parse("t", &sig).unwrap();
    for zeta in ["a", "b", "a | b", "a & b"] {
        let z = Proposition::parse(zeta, &sig).unwrap();
        match profile.max_entailed_threshold(&gamma, &z).unwrap() {
            Some(j) => println!("t => {zeta}: entailed up to threshold {j}"),
            None => println!("t => {zeta}: not entailed at any threshold"),
        }
    }
}
