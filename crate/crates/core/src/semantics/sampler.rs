//! Hit-and-run sampling of the uniform distribution on a model polytope.
//!
//! The chain runs inside the affine hull of the polytope: equality rows,
//! including inequalities that hold with equality at every point, are
//! factored out through an orthonormal basis of their null space. A positive
//! Chebyshev radius certifies a full-dimensional body; the chain then starts
//! at the analytic center. Step directions are drawn from a Gaussian
//! whose covariance is first the inverse Dikin matrix at the analytic center
//! and then the empirical covariance of short pilot runs. Hit-and-run with a fixed
//! direction covariance `Σ` is ordinary hit-and-run on the body mapped by
//! `Σ^{-1/2}`, so the stationary law stays uniform while thin polytopes
//! (widths of order `δ^k`) still mix quickly.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::lp::{LinearProgram, LpResult};
use super::{Model, PolytopeSystem, SemanticsError};

/// Default number of discarded steps before recording.
pub const DEFAULT_BURN_IN: usize = 1000;

const RADIUS_TOL: f64 = 1e-12;
const IMPLICIT_TOL: f64 = 1e-12;
const ADAPT_ROUNDS: usize = 3;
const REFRESH_EVERY: usize = 256;
const CENTERING_STEPS: usize = 200;
const PHASE_ONE_ROUNDS: usize = 40;

/// Samples drawn from a polytope. `degenerate` is set when the polytope is
/// a single point, which is then repeated.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub models: Vec<Model>,
    pub degenerate: bool,
}

/// Draws `n` approximately uniform models after `burn_in` discarded steps.
/// The result is a deterministic function of the arguments.
pub fn sample_uniform(
    system: &PolytopeSystem,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> Result<SampleSet, SemanticsError> {
    let mut chain = HitAndRun::new(system, seed)?;
    let mut models = Vec::with_capacity(n);
    if chain.is_degenerate() {
        let p = chain.point();
        models.resize(n, Model { probabilities: p });
        return Ok(SampleSet {
            models,
            degenerate: true,
        });
    }
    chain.run(burn_in);
    for _ in 0..n {
        chain.step();
        models.push(Model {
            probabilities: chain.point(),
        });
    }
    Ok(SampleSet {
        models,
        degenerate: false,
    })
}

/// A hit-and-run chain on one polytope.
pub struct HitAndRun {
    center: Vec<f64>,
    /// Orthonormal directions spanning the affine hull, each of full length.
    basis: Vec<Vec<f64>>,
    /// Inequalities `rows[i]·y ≤ bounds[i]` in basis coordinates.
    rows: Vec<Vec<f64>>,
    bounds: Vec<f64>,
    y: Vec<f64>,
    ay: Vec<f64>,
    scale: DMatrix<f64>,
    rng: ChaCha8Rng,
    steps: usize,
}

impl HitAndRun {
    pub fn new(system: &PolytopeSystem, seed: u64) -> Result<Self, SemanticsError> {
        let n = system.dimension();
        let start = system
            .feasible_point()?
            .ok_or(SemanticsError::Infeasible)?;
        let mut equalities: Vec<(Vec<f64>, f64)> = system
            .equalities()
            .iter()
            .map(|c| (c.coefficients.clone(), c.bound))
            .collect();
        let mut inequalities: Vec<(Vec<f64>, f64)> = system
            .inequalities()
            .iter()
            .map(|c| (c.coefficients.clone(), c.bound))
            .collect();
        for j in 0..n {
            let mut row = vec![0.0; n];
            row[j] = -1.0;
            inequalities.push((row, 0.0));
        }

        let mut frame = None;
        for attempt in 0..2 {
            let basis = null_space(&equalities, n);
            if basis.is_empty() {
                break;
            }
            let (center, radius) = chebyshev_center(&equalities, &inequalities, &basis)?;
            if radius > RADIUS_TOL {
                frame = Some((basis, center));
                break;
            }
            if attempt == 0 {
                let (tight, loose) = split_implicit_equalities(&equalities, inequalities)?;
                equalities.extend(tight);
                inequalities = loose;
            }
        }

        let rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((basis, center)) = frame else {
            return Ok(HitAndRun {
                center: start,
                basis: Vec::new(),
                rows: Vec::new(),
                bounds: Vec::new(),
                y: Vec::new(),
                ay: Vec::new(),
                scale: DMatrix::zeros(0, 0),
                rng,
                steps: 0,
            });
        };

        let p = basis.len();
        let mut rows = Vec::new();
        let mut bounds = Vec::new();
        for (g, h) in &inequalities {
            let a: Vec<f64> = basis.iter().map(|b| dot(g, b)).collect();
            if dot(&a, &a).sqrt() < 1e-13 {
                continue;
            }
            bounds.push(h - dot(g, &center));
            rows.push(a);
        }
        let mut chain = HitAndRun {
            center,
            basis,
            ay: vec![0.0; rows.len()],
            rows,
            bounds,
            y: vec![0.0; p],
            scale: DMatrix::identity(p, p),
            rng,
            steps: 0,
        };
        if !chain.enter_interior() {
            return Err(SemanticsError::Numerical(
                "no strictly interior point found in a full-dimensional polytope".into(),
            ));
        }
        chain.recenter();
        if let Some(l) = chain.dikin_scale() {
            chain.scale = l;
        }
        let pilot = 1000 + 100 * p;
        for _ in 0..ADAPT_ROUNDS {
            chain.adapt(pilot);
        }
        Ok(chain)
    }

    pub fn is_degenerate(&self) -> bool {
        self.basis.is_empty()
    }

    /// Dimension of the affine hull being sampled.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Current point as a probability vector.
    pub fn point(&self) -> Vec<f64> {
        let mut x = self.center.clone();
        for (yk, b) in self.y.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += yk * bi;
            }
        }
        for xi in x.iter_mut() {
            if *xi < 0.0 {
                *xi = 0.0;
            }
        }
        x
    }

    pub fn run(&mut self, steps: usize) {
        for _ in 0..steps {
            self.step();
        }
    }

    pub fn step(&mut self) {
        if self.is_degenerate() {
            return;
        }
        let p = self.y.len();
        let z = DVector::from_fn(p, |_, _| self.rng.sample::<f64, _>(StandardNormal));
        let d = &self.scale * z;
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        let ad: Vec<f64> = self.rows.iter().map(|a| dot(a, d.as_slice())).collect();
        for ((&adi, &b), &ayi) in ad.iter().zip(&self.bounds).zip(&self.ay) {
            let slack = (b - ayi).max(0.0);
            if adi > 0.0 {
                hi = hi.min(slack / adi);
            } else if adi < 0.0 {
                lo = lo.max(slack / adi);
            }
        }
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return;
        }
        let t = lo + (hi - lo) * self.rng.random::<f64>();
        for (yk, dk) in self.y.iter_mut().zip(d.iter()) {
            *yk += t * dk;
        }
        for (ayi, adi) in self.ay.iter_mut().zip(&ad) {
            *ayi += t * adi;
        }
        self.steps += 1;
        if self.steps.is_multiple_of(REFRESH_EVERY) {
            self.ay = self.rows.iter().map(|a| dot(a, &self.y)).collect();
        }
    }

    /// Moves the origin strictly inside every facet. The simplex solution is
    /// only accurate to roughly `1e-8`, which is the width of the thinnest
    /// bodies, so its point may sit on a facet. A barrier method minimizes
    /// the largest violation `τ` of `a·y − τ ≤ b` until `τ < 0`.
    fn enter_interior(&mut self) -> bool {
        let p = self.y.len();
        let worst = self
            .rows
            .iter()
            .zip(&self.bounds)
            .map(|(a, b)| dot(a, &self.y) - b)
            .fold(f64::NEG_INFINITY, f64::max);
        if worst < 0.0 {
            return true;
        }
        let slacks = |z: &[f64]| -> Option<Vec<f64>> {
            let (y, tau) = z.split_at(p);
            let out: Vec<f64> = self
                .rows
                .iter()
                .zip(&self.bounds)
                .map(|(a, b)| b - dot(a, y) + tau[0])
                .collect();
            out.iter().all(|s| *s > 0.0).then_some(out)
        };
        let m = self.rows.len() as f64;
        let mut z = self.y.clone();
        z.push(worst + 1e-6);
        let mut t = m / 1e-6;
        for _ in 0..PHASE_ONE_ROUNDS {
            for _ in 0..CENTERING_STEPS {
                let Some(s) = slacks(&z) else { return false };
                let mut grad = DVector::<f64>::zeros(p + 1);
                let mut hess = DMatrix::<f64>::zeros(p + 1, p + 1);
                grad[p] = t;
                for (a, si) in self.rows.iter().zip(&s) {
                    let mut c = DVector::<f64>::zeros(p + 1);
                    c.rows_mut(0, p).copy_from_slice(a);
                    c[p] = -1.0;
                    grad += &c / *si;
                    hess += &c * c.transpose() / (si * si);
                }
                let Some(chol) = hess.cholesky() else { return false };
                let step = -chol.solve(&grad);
                let decrement = -grad.dot(&step);
                if decrement < 1e-10 {
                    break;
                }
                let value = |z: &[f64], s: &[f64]| t * z[p] - s.iter().map(|v| v.ln()).sum::<f64>();
                let current = value(&z, &s);
                let mut h = 1.0;
                let mut moved = false;
                while h > 1e-12 {
                    let trial: Vec<f64> = z.iter().zip(step.iter()).map(|(zi, di)| zi + h * di).collect();
                    if let Some(ts) = slacks(&trial) {
                        if value(&trial, &ts) <= current - 0.25 * h * decrement {
                            z = trial;
                            moved = true;
                            break;
                        }
                    }
                    h *= 0.5;
                }
                if !moved || z[p] < 0.0 {
                    break;
                }
            }
            if z[p] < 0.0 {
                z.truncate(p);
                self.y = z;
                self.rebase();
                return true;
            }
            t *= 8.0;
        }
        false
    }

    /// Makes the current point the origin.
    fn rebase(&mut self) {
        for (ci, c) in self.center.iter_mut().enumerate() {
            *c += self.basis.iter().zip(&self.y).map(|(b, yk)| yk * b[ci]).sum::<f64>();
        }
        for (b, a) in self.bounds.iter_mut().zip(&self.rows) {
            *b -= dot(a, &self.y);
        }
        self.y.iter_mut().for_each(|v| *v = 0.0);
        self.ay.iter_mut().for_each(|v| *v = 0.0);
    }

    /// Moves the origin to the analytic center, the minimizer of
    /// `−Σ ln(b − a·y)`, by damped Newton steps. A Chebyshev center from a
    /// simplex solve sits at a vertex of its own program and can hug some
    /// facets far more closely than others.
    fn recenter(&mut self) {
        let p = self.y.len();
        let barrier = |y: &[f64]| -> Option<f64> {
            let mut total = 0.0;
            for (a, &b) in self.rows.iter().zip(&self.bounds) {
                let s = b - dot(a, y);
                if s <= 0.0 {
                    return None;
                }
                total -= s.ln();
            }
            Some(total)
        };
        let mut y = vec![0.0; p];
        let Some(mut value) = barrier(&y) else { return };
        for _ in 0..CENTERING_STEPS {
            let mut grad = DVector::<f64>::zeros(p);
            let mut hess = DMatrix::<f64>::zeros(p, p);
            for (a, &b) in self.rows.iter().zip(&self.bounds) {
                let s = b - dot(a, &y);
                let av = DVector::from_column_slice(a);
                grad += &av / s;
                hess += &av * av.transpose() / (s * s);
            }
            let Some(chol) = hess.cholesky() else { break };
            let step = -chol.solve(&grad);
            let decrement = -grad.dot(&step);
            if decrement < 1e-12 {
                break;
            }
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-12 {
                let trial: Vec<f64> = y.iter().zip(step.iter()).map(|(yi, di)| yi + t * di).collect();
                if let Some(v) = barrier(&trial) {
                    if v <= value - 0.25 * t * decrement {
                        y = trial;
                        value = v;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        self.y = y;
        self.rebase();
    }

    /// Inverse-Dikin direction scale at the current point.
    fn dikin_scale(&self) -> Option<DMatrix<f64>> {
        let p = self.y.len();
        let mut h = DMatrix::<f64>::zeros(p, p);
        for ((a, &b), &ayi) in self.rows.iter().zip(&self.bounds).zip(&self.ay) {
            let s = b - ayi;
            if s <= 0.0 {
                continue;
            }
            let w = 1.0 / (s * s);
            for i in 0..p {
                for j in 0..p {
                    h[(i, j)] += w * a[i] * a[j];
                }
            }
        }
        let inverse = h.cholesky()?.inverse();
        Some(inverse.cholesky()?.l())
    }

    /// Runs `steps` steps and replaces the direction scale with the
    /// Cholesky factor of the visited points' covariance.
    fn adapt(&mut self, steps: usize) {
        let p = self.y.len();
        let mut mean = DVector::<f64>::zeros(p);
        let mut second = DMatrix::<f64>::zeros(p, p);
        for _ in 0..steps {
            self.step();
            let y = DVector::from_column_slice(&self.y);
            mean += &y;
            second += &y * y.transpose();
        }
        let k = steps as f64;
        mean /= k;
        let cov = second / k - &mean * mean.transpose();
        if let Some(c) = cov.cholesky() {
            let l = c.l();
            if l.iter().all(|v| v.is_finite()) {
                self.scale = l;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    // Two passes of modified Gram-Schmidt.
    for _ in 0..2 {
        for q in against {
            let c = dot(v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
    }
}

/// Orthonormal basis of `{x : A x = 0}` for the rows of `equalities`.
fn null_space(equalities: &[(Vec<f64>, f64)], n: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    for (row, _) in equalities {
        let scale = dot(row, row).sqrt().max(1.0);
        let mut v = row.clone();
        orthogonalize(&mut v, &q);
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-9 * scale {
            v.iter_mut().for_each(|x| *x /= norm);
            q.push(v);
        }
    }
    let mut basis = Vec::new();
    let mut remaining: Vec<usize> = (0..n).collect();
    while q.len() < n {
        // Take the unit vector with the largest component outside span(q).
        let mut best: Option<(usize, Vec<f64>, f64)> = None;
        for (pos, &j) in remaining.iter().enumerate() {
            let mut v = vec![0.0; n];
            v[j] = 1.0;
            orthogonalize(&mut v, &q);
            let norm = dot(&v, &v).sqrt();
            if best.as_ref().is_none_or(|b| norm > b.2) {
                best = Some((pos, v, norm));
            }
        }
        let Some((pos, mut v, norm)) = best else { break };
        if norm < 1e-9 {
            break;
        }
        remaining.swap_remove(pos);
        v.iter_mut().for_each(|x| *x /= norm);
        q.push(v.clone());
        basis.push(v);
    }
    basis
}

/// Center and radius of the largest ball inside the polytope within its
/// affine hull.
fn chebyshev_center(
    equalities: &[(Vec<f64>, f64)],
    inequalities: &[(Vec<f64>, f64)],
    basis: &[Vec<f64>],
) -> Result<(Vec<f64>, f64), SemanticsError> {
    let n = basis[0].len();
    let widen = |row: &[f64], extra: f64| {
        let mut r = row.to_vec();
        r.push(extra);
        r
    };
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut le: Vec<(Vec<f64>, f64)> = inequalities
        .iter()
        .map(|(g, h)| {
            let projected = basis.iter().map(|b| dot(g, b).powi(2)).sum::<f64>().sqrt();
            (widen(g, projected), *h)
        })
        .collect();
    let mut cap = vec![0.0; n + 1];
    cap[n] = 1.0;
    le.push((cap, 1.0));
    let lp = LinearProgram {
        dim: n + 1,
        objective,
        equalities: equalities
            .iter()
            .map(|(a, b)| (widen(a, 0.0), *b))
            .collect(),
        inequalities: le,
    };
    match lp.solve()? {
        LpResult::Optimal { mut x, value } => {
            x.truncate(n);
            Ok((x, value))
        }
        LpResult::Infeasible => Err(SemanticsError::Infeasible),
    }
}

type Rows = Vec<(Vec<f64>, f64)>;

/// Separates inequalities that are tight on the whole polytope.
fn split_implicit_equalities(
    equalities: &[(Vec<f64>, f64)],
    inequalities: Rows,
) -> Result<(Rows, Rows), SemanticsError> {
    let n = inequalities.first().map_or(0, |(g, _)| g.len());
    let mut lp = LinearProgram::feasibility(n);
    lp.equalities = equalities.to_vec();
    lp.inequalities = inequalities.clone();
    let mut tight = Vec::new();
    let mut loose = Vec::new();
    for (g, h) in inequalities {
        lp.objective = g.iter().map(|v| -v).collect();
        let max_slack = match lp.solve()? {
            LpResult::Optimal { value, .. } => h + value,
            LpResult::Infeasible => return Err(SemanticsError::Infeasible),
        };
        if max_slack <= IMPLICIT_TOL {
            tight.push((g, h));
        } else {
            loose.push((g, h));
        }
    }
    Ok((tight, loose))
}
