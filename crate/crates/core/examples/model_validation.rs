//! Checks depth verdicts against sampled probability models: the upper
//! quantile of a conclusion's exception rate should shrink like delta^j
//! exactly when the conclusion is entailed at threshold j.
//!
//! Pass a sample count as the first argument to trade accuracy for time.

use tgl::semantics::{
    build_polytope, conclusion_quantile, psi_sweep, sample_uniform, ParameterAssignment,
    DEFAULT_BURN_IN, DEFAULT_DELTA_GRID, DEFAULT_PSI_SWEEP,
};
use tgl::{compile, KnowledgeBase, Signature, Threshold, ThresholdedGeneralization};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);

    let sig = Signature::new(["a"]).unwrap();
    let mut single = KnowledgeBase::new(sig.clone());
    single.add("t", "a", 1).unwrap();
    let q = ThresholdedGeneralization::parse("t", "a", Threshold::finite(1).unwrap(), &sig).unwrap();
    let params = ParameterAssignment::uniform(1, 1.0, 0.1).unwrap();
    let quantile = conclusion_quantile(&single, &params, &q, n, DEFAULT_BURN_IN, 1).unwrap();
    println!("t => a at delta 0.1: 0.9-quantile of P(~a) = {quantile:.4} (exact 0.09)");

    let system = build_polytope(&single, &params).unwrap();
    let samples = sample_uniform(&system, 5, DEFAULT_BURN_IN, 2).unwrap();
    for m in &samples.models {
        println!("  sampled model {:?}", m.probabilities());
    }

    let sig = Signature::new(["a", "b"]).unwrap();
    let mut kb = KnowledgeBase::new(sig.clone());
    kb.add("t", "a", 1).unwrap();
    kb.add("~a", "b", 1).unwrap();
    let profile = compile(&kb).unwrap();
    let template = ParameterAssignment::uniform(kb.len(), 1.0, DEFAULT_DELTA_GRID[0]).unwrap();
    for j in [2, 3] {
        let q = ThresholdedGeneralization::parse("t", "a | b", Threshold::finite(j).unwrap(), &sig).unwrap();
        let sweep = psi_sweep(&kb, &q, &DEFAULT_DELTA_GRID, &template, &DEFAULT_PSI_SWEEP, n, 7).unwrap();
        println!("{q}: depth engine says {}", profile.entails_in_probability(&q).unwrap());
        for (psi, report) in &sweep.runs {
            println!("  psi {psi}: slope {:.3} -> {}", report.fitted_exponent, report.verdict);
        }
        println!("  combined: {}", sweep.verdict);
    }
}
