//! Quantile scaling: how fast the upper quantiles of a conclusion's
//! exception rate shrink as `δ → 0`.

use std::fmt;

use super::sampler::{sample_uniform, DEFAULT_BURN_IN};
use super::{build_polytope, exception_rate, ParameterAssignment, SampleSet, SemanticsError};
use crate::engine::{Depth, KnowledgeBase, ThresholdedGeneralization};

/// Default `δ` grid for scaling fits.
pub const DEFAULT_DELTA_GRID: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Uniform `ψ` values tried by [`psi_sweep`].
pub const DEFAULT_PSI_SWEEP: [f64; 3] = [1.0, 0.5, 2.0];

const SUPPORT_MARGIN: f64 = 0.3;
const REFUTE_MARGIN: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Supports,
    Refutes,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Supports => "supports",
            Verdict::Refutes => "refutes",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPoint {
    pub delta: f64,
    pub quantile: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `ln q` against `ln δ`. Infinite when every
    /// quantile is zero, NaN when only some are.
    pub fitted_exponent: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub runs: Vec<(f64, ScalingReport)>,
    /// The verdict shared by every run, or inconclusive if they differ.
    pub verdict: Verdict,
}

/// Order statistic at 1-based index `⌈(1−η)·n⌉`.
pub fn empirical_quantile(values: &[f64], eta: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let rank = ((1.0 - eta) * n as f64 - 1e-9).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// `1 − π(ζ|γ)` for every sampled model.
pub fn conclusion_rates(samples: &SampleSet, query: &ThresholdedGeneralization) -> Vec<f64> {
    samples
        .models
        .iter()
        .map(|m| exception_rate(m.probabilities(), query.antecedent(), query.consequent()))
        .collect()
}

/// Empirical `(1−η)`-quantile of `1 − π(ζ|γ)` under the uniform measure on
/// the models of `kb`.
pub fn conclusion_quantile(
    kb: &KnowledgeBase,
    params: &ParameterAssignment,
    query: &ThresholdedGeneralization,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> Result<f64, SemanticsError> {
    Ok(quantile_point(kb, params, query, n, burn_in, seed)?.quantile)
}

fn quantile_point(
    kb: &KnowledgeBase,
    params: &ParameterAssignment,
    query: &ThresholdedGeneralization,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> Result<ScalingPoint, SemanticsError> {
    if query.signature() != kb.signature() {
        return Err(crate::engine::EngineError::SignatureMismatch.into());
    }
    let system = build_polytope(kb, params)?;
    let samples = match sample_uniform(&system, n, burn_in, seed) {
        Err(SemanticsError::Infeasible) => {
            return Err(SemanticsError::InfeasibleAt {
                delta: params.delta(),
            })
        }
        other => other?,
    };
    let rates = conclusion_rates(&samples, query);
    Ok(ScalingPoint {
        delta: params.delta(),
        quantile: empirical_quantile(&rates, params.eta()),
        degenerate: samples.degenerate,
    })
}

/// Fits the decay exponent of the conclusion quantile over `grid` and
/// compares it with the query threshold. Grid point `i` uses seed
/// `seed + i`.
pub fn scaling_verdict(
    kb: &KnowledgeBase,
    query: &ThresholdedGeneralization,
    grid: &[f64],
    template: &ParameterAssignment,
    n: usize,
    seed: u64,
) -> Result<ScalingReport, SemanticsError> {
    validate_grid(grid)?;
    if n == 0 {
        return Err(SemanticsError::InvalidParameter("sample count must be positive".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for (i, &delta) in grid.iter().enumerate() {
        let params = template.with_delta(delta)?;
        points.push(quantile_point(
            kb,
            &params,
            query,
            n,
            DEFAULT_BURN_IN,
            seed.wrapping_add(i as u64),
        )?);
    }
    let fitted_exponent = fit_exponent(&points);
    let verdict = classify(fitted_exponent, query.threshold().depth());
    Ok(ScalingReport {
        points,
        fitted_exponent,
        verdict,
    })
}

/// Runs [`scaling_verdict`] once per uniform `ψ` in `psis`.
pub fn psi_sweep(
    kb: &KnowledgeBase,
    query: &ThresholdedGeneralization,
    grid: &[f64],
    template: &ParameterAssignment,
    psis: &[f64],
    n: usize,
    seed: u64,
) -> Result<SweepReport, SemanticsError> {
    if psis.is_empty() {
        return Err(SemanticsError::InvalidParameter("empty ψ sweep".into()));
    }
    let mut runs = Vec::with_capacity(psis.len());
    for &psi in psis {
        let params = ParameterAssignment::new(
            vec![psi; kb.len()],
            template.delta(),
            template.query_psi(),
            template.eta(),
        )?;
        runs.push((psi, scaling_verdict(kb, query, grid, &params, n, seed)?));
    }
    let first = runs[0].1.verdict;
    let verdict = if runs.iter().all(|(_, r)| r.verdict == first) {
        first
    } else {
        Verdict::Inconclusive
    };
    Ok(SweepReport { runs, verdict })
}

fn validate_grid(grid: &[f64]) -> Result<(), SemanticsError> {
    if grid.len() < 3 {
        return Err(SemanticsError::InvalidGrid(format!(
            "need at least 3 points, got {}",
            grid.len()
        )));
    }
    if let Some(d) = grid.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
        return Err(SemanticsError::InvalidGrid(format!("δ = {d} is outside (0, 1)")));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SemanticsError::InvalidGrid("δ values must strictly decrease".into()));
    }
    Ok(())
}

fn fit_exponent(points: &[ScalingPoint]) -> f64 {
    let zeros = points.iter().filter(|p| p.quantile <= 0.0).count();
    if zeros == points.len() {
        return f64::INFINITY;
    }
    if zeros > 0 {
        return f64::NAN;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.delta.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.quantile.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn classify(slope: f64, threshold: Depth) -> Verdict {
    if slope.is_nan() {
        return Verdict::Inconclusive;
    }
    match threshold {
        Depth::Infinite if slope == f64::INFINITY => Verdict::Supports,
        Depth::Infinite => Verdict::Refutes,
        Depth::Finite(j) => {
            let j = f64::from(j);
            if slope >= j - SUPPORT_MARGIN {
                Verdict::Supports
            } else if slope <= j - REFUTE_MARGIN {
                Verdict::Refutes
            } else {
                Verdict::Inconclusive
            }
        }
    }
}
