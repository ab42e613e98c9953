//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test --test acceptance`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{minimal_atom_depths, random_kb, random_prop, signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tgl::format::{parse_kb, parse_kb_over};
use tgl::semantics::{
    build_polytope, empirical_quantile, is_feasible, sample_uniform, scaling_verdict, ParameterAssignment, Verdict,
    DEFAULT_BURN_IN, DEFAULT_DELTA_GRID,
};
use tgl::zplus::{to_zplus, zplus_consequence};
use tgl::{compile, Depth, DepthProfile, KnowledgeBase, Proposition, Signature, Threshold, ThresholdedGeneralization};

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    check(elapsed < limit, format!("{detail}, {elapsed:.2?} (limit {limit:?})"))
}

fn first(list: &[String]) -> &str {
    list.first().map_or("", String::as_str)
}

fn prop(kb: &KnowledgeBase, text: &str) -> Proposition {
    Proposition::parse(text, kb.signature()).unwrap()
}

fn query(kb: &KnowledgeBase, gamma: &str, zeta: &str, j: u32) -> ThresholdedGeneralization {
    ThresholdedGeneralization::parse(gamma, zeta, Threshold::finite(j).unwrap(), kb.signature()).unwrap()
}

fn entails(profile: &DepthProfile, q: &ThresholdedGeneralization) -> bool {
    profile.entails_in_probability(q).unwrap()
}

fn running_example() -> KnowledgeBase {
    parse_kb("t => a @ 1\n~a => b @ 1\n").unwrap()
}

fn threshold_table() -> Outcome {
    let start = Instant::now();
    let kb = running_example();
    let profile = compile(&kb).unwrap();
    let verdicts: Vec<bool> = (1..=3).map(|j| entails(&profile, &query(&kb, "t", "a | b", j))).collect();
    let max = profile
        .max_entailed_threshold(&prop(&kb, "t"), &prop(&kb, "a | b"))
        .unwrap();
    let elapsed = start.elapsed();
    let ok = verdicts == [true, true, false] && max == Some(Depth::Finite(2));
    check(ok, format!("j=1,2,3 -> {verdicts:?}, max threshold {}", max.map_or("none".into(), |d| d.to_string())))
        .and_then(|d| within(elapsed, Duration::from_millis(1), d))
}

fn threshold_dependence() -> Outcome {
    let strong = parse_kb("a => g @ 2\nb => ~g @ 1\n").unwrap();
    let even = parse_kb("a => g @ 1\nb => ~g @ 1\n").unwrap();
    let s = entails(&compile(&strong).unwrap(), &query(&strong, "a & b", "g", 1));
    let e = entails(&compile(&even).unwrap(), &query(&even, "a & b", "g", 1));
    check(s && !e, format!("stronger rule wins: {s}, equal strengths: {e}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    let total = 200;
    for _ in 0..total {
        let kb = random_kb(&mut rng, 3, 3, 3);
        if compile(&kb).unwrap().atom_depths() != minimal_atom_depths(&kb) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    check(mismatches == 0, format!("{mismatches}/{total} knowledge bases disagree"))
        .and_then(|d| within(elapsed, Duration::from_secs(60), d))
}

fn depth_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let triples = 10_000;
    for t in 0..triples {
        let kb = random_kb(&mut rng, 3, 3, 3);
        let profile = compile(&kb).unwrap();
        let sig = kb.signature().clone();
        let (alpha, beta) = (random_prop(&mut rng, &sig), random_prop(&mut rng, &sig));
        let d = |p: &Proposition| profile.depth_of(p).unwrap();
        if alpha.entails(&beta).unwrap() && d(&alpha) < d(&beta) {
            failures.push(format!("triple {t}: monotonicity"));
        }
        if d(&alpha.disjoin(&beta).unwrap()) != d(&alpha).min(d(&beta)) {
            failures.push(format!("triple {t}: disjunction"));
        }
        if d(&Proposition::bottom(&sig)) != Depth::Infinite {
            failures.push(format!("triple {t}: falsum"));
        }
    }
    check(
        failures.is_empty(),
        format!("{triples} triples, {} violations {}", failures.len(), first(&failures)),
    )
}

fn consistency_dichotomy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut consistent, mut inconsistent, mut bad) = (0, 0, Vec::new());
    for i in 0..200 {
        let kb = random_kb(&mut rng, 3, 3, 3);
        let profile = compile(&kb).unwrap();
        let top = profile.depth_of(&Proposition::top(kb.signature())).unwrap();
        if top != Depth::ZERO && top != Depth::Infinite {
            bad.push(format!("kb {i}: depth of t is {top}"));
        }
        let feasible: Vec<bool> = DEFAULT_DELTA_GRID
            .iter()
            .map(|&delta| {
                let params = ParameterAssignment::uniform(kb.len(), 1.0, delta).unwrap();
                is_feasible(&build_polytope(&kb, &params).unwrap()).unwrap()
            })
            .collect();
        if profile.is_consistent() {
            consistent += 1;
            if feasible.contains(&false) {
                bad.push(format!("kb {i}: consistent but infeasible {feasible:?}"));
            }
        } else {
            inconsistent += 1;
            if !feasible.contains(&false) {
                bad.push(format!("kb {i}: inconsistent but feasible on the whole grid"));
            }
        }
    }
    check(
        bad.is_empty() && inconsistent > 0,
        format!("{consistent} consistent, {inconsistent} inconsistent, {} failures {}", bad.len(), first(&bad)),
    )
}

fn nonmonotonicity() -> Outcome {
    let sig = Signature::new(["a", "b", "g"]).unwrap();
    let before = parse_kb_over("a => g @ 2\n", &sig).unwrap();
    let after = parse_kb_over("a => g @ 2\na & b => ~g @ 1\n", &sig).unwrap();
    let held = entails(&compile(&before).unwrap(), &query(&before, "a & b", "g", 1));
    let kept = entails(&compile(&after).unwrap(), &query(&after, "a & b", "g", 1));
    check(held && !kept, format!("entailed before: {held}, after adding the exception: {kept}"))
}

/// Mean and batch-means standard error of a chain of values.
fn mean_and_error(values: &[f64]) -> (f64, f64) {
    const BATCHES: usize = 50;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let size = values.len() / BATCHES;
    let batch_means: Vec<f64> = values
        .chunks_exact(size)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let b = batch_means.len() as f64;
    let var = batch_means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (b - 1.0);
    (mean, (var / b).sqrt())
}

fn sampler_calibration() -> Outcome {
    let start = Instant::now();
    let n = 100_000;
    let kb = parse_kb("t => a @ 1\n").unwrap();
    let params = ParameterAssignment::uniform(1, 1.0, 0.1).unwrap();
    let samples = sample_uniform(&build_polytope(&kb, &params).unwrap(), n, DEFAULT_BURN_IN, 7).unwrap();
    let not_a = prop(&kb, "~a");
    let rates: Vec<f64> = samples.models.iter().map(|m| m.probability(&not_a)).collect();
    let q = empirical_quantile(&rates, 0.1);
    let mut detail = format!("0.9-quantile {q:.5} (target 0.09 ± 0.005)");
    let mut ok = (q - 0.09).abs() <= 0.005;
    for r in [1, 2] {
        let empty = KnowledgeBase::new(signature(r));
        let params = ParameterAssignment::uniform(0, 1.0, 0.1).unwrap();
        let set = sample_uniform(&build_polytope(&empty, &params).unwrap(), n, DEFAULT_BURN_IN, 70 + r as u64).unwrap();
        let atoms = 1usize << r;
        let target = 1.0 / atoms as f64;
        for i in 0..atoms {
            let values: Vec<f64> = set.models.iter().map(|m| m.probabilities()[i]).collect();
            let (mean, se) = mean_and_error(&values);
            let z = (mean - target) / se;
            ok &= z.abs() <= 3.0;
            detail.push_str(&format!("; r={r} atom {i} mean {mean:.4} ({z:+.2} se)"));
        }
    }
    check(ok, detail).and_then(|d| within(start.elapsed(), Duration::from_secs(10), d))
}

fn quantile_scaling() -> Outcome {
    let start = Instant::now();
    let kb = running_example();
    let template = ParameterAssignment::uniform(kb.len(), 1.0, DEFAULT_DELTA_GRID[0]).unwrap();
    let run = |j| scaling_verdict(&kb, &query(&kb, "t", "a | b", j), &DEFAULT_DELTA_GRID, &template, 100_000, 27).unwrap();
    let two = run(2);
    let three = run(3);
    let slope = two.fitted_exponent;
    let ok = (1.7..=2.3).contains(&slope) && two.verdict == Verdict::Supports && three.verdict == Verdict::Refutes;
    check(
        ok,
        format!("slope {slope:.4}, j=2 {}, j=3 {}", two.verdict, three.verdict),
    )
    .and_then(|d| within(start.elapsed(), Duration::from_secs(120), d))
}

fn zplus_shift() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut checked, mut mismatches) = (0, 0);
    while checked < 200 {
        let kb = random_kb(&mut rng, 3, 3, 3);
        let profile = compile(&kb).unwrap();
        let sig = kb.signature().clone();
        let (gamma, zeta) = (random_prop(&mut rng, &sig), random_prop(&mut rng, &sig));
        let sides = kb
            .rules()
            .iter()
            .flat_map(|r| [r.antecedent(), r.consequent()])
            .chain([&gamma, &zeta])
            .all(Proposition::is_satisfiable);
        if !sides || profile.xi_infinity().is_satisfiable() {
            continue;
        }
        checked += 1;
        let rules = to_zplus(&kb).unwrap();
        for j in 1..=3 {
            let q = ThresholdedGeneralization::new(gamma.clone(), zeta.clone(), Threshold::finite(j).unwrap()).unwrap();
            if zplus_consequence(&rules, &gamma, &zeta, j - 1).unwrap() != entails(&profile, &q) {
                mismatches += 1;
            }
        }
    }
    check(mismatches == 0, format!("{checked} knowledge bases, {mismatches} mismatches over j=1,2,3"))
}

fn inconsistent_entails_everything() -> Outcome {
    let mut kb = KnowledgeBase::new(signature(3));
    kb.add("t", "a", 1).unwrap();
    kb.add("t", "~a", 1).unwrap();
    let profile = compile(&kb).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let sig = kb.signature().clone();
    let total = 1000;
    let refused = (0..total)
        .filter(|_| {
            let threshold = match rng.random_range(0..=5u32) {
                0 => Threshold::INFINITE,
                k => Threshold::finite(k).unwrap(),
            };
            let q = ThresholdedGeneralization::new(random_prop(&mut rng, &sig), random_prop(&mut rng, &sig), threshold)
                .unwrap();
            !entails(&profile, &q)
        })
        .count();
    check(refused == 0, format!("{total} random queries, {refused} not entailed"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("threshold table of the running example", threshold_table),
        ("stronger rule resolves a conflict", threshold_dependence),
        ("atom depths match the brute-force oracle", oracle_equivalence),
        ("depth-function axioms", depth_axioms),
        ("consistency dichotomy and feasibility", consistency_dichotomy),
        ("nonmonotonic retraction", nonmonotonicity),
        ("sampler calibration", sampler_calibration),
        ("quantile scaling", quantile_scaling),
        ("Z+ strength shift", zplus_shift),
        ("inconsistent knowledge base entails everything", inconsistent_entails_everything),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (word, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        writeln!(out, "{word} {:>2} {name}: {detail}", i + 1).unwrap();
        out.flush().unwrap();
    }
    writeln!(out, "{} of {} criteria passed", criteria.len() - failed, criteria.len()).unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
