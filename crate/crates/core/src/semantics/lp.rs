//! Dense two-phase simplex for the small linear programs the sampler needs.
//!
//! Problems are in the form `maximize c·x` subject to `A_eq x = b_eq`,
//! `A_le x ≤ b_le`, `x ≥ 0`.

use super::SemanticsError;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
/// Phase-one residual above which the system is declared infeasible.
const INFEASIBLE_TOL: f64 = 1e-10;
/// Consecutive degenerate pivots before switching to Bland's rule.
const BLAND_AFTER: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LinearProgram {
    pub dim: usize,
    pub objective: Vec<f64>,
    pub equalities: Vec<(Vec<f64>, f64)>,
    pub inequalities: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpResult {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f.abs() > 0.0 {
                for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.rhs[i] -= f * pivot_rhs;
                if self.rhs[i].abs() < 1e-15 {
                    self.rhs[i] = 0.0;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost·x` over columns `< allowed`, starting from the
    /// current basis.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<(), SemanticsError> {
        let max_iter = 50 * (self.rows.len() + self.cols) + 1000;
        let mut degenerate = 0usize;
        for _ in 0..max_iter {
            // Reduced costs: c_j - c_B B^-1 a_j.
            let mut entering = None;
            let mut best = COST_TOL;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j];
                for (i, &b) in self.basis.iter().enumerate() {
                    rc -= cost[b] * self.rows[i][j];
                }
                if rc > best {
                    entering = Some(j);
                    if degenerate >= BLAND_AFTER {
                        break;
                    }
                    best = rc;
                }
            }
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[i] / a;
                    let better = match leaving {
                        None => true,
                        Some((l, best_ratio)) => {
                            ratio < best_ratio - 1e-14
                                || (ratio <= best_ratio + 1e-14 && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leaving else {
                return Err(SemanticsError::Numerical(
                    "linear program is unbounded".into(),
                ));
            };
            if ratio.abs() < 1e-14 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, c);
        }
        Err(SemanticsError::Numerical(
            "simplex iteration limit reached".into(),
        ))
    }
}

impl LinearProgram {
    pub fn feasibility(dim: usize) -> Self {
        LinearProgram {
            dim,
            objective: vec![0.0; dim],
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn solve(&self) -> Result<LpResult, SemanticsError> {
        let n = self.dim;
        let n_le = self.inequalities.len();
        let n_rows = self.equalities.len() + n_le;
        // Columns: structural, slacks, then artificials.
        let slack0 = n;
        let art0 = n + n_le;
        let cols = art0 + n_rows;
        let mut rows = Vec::with_capacity(n_rows);
        let mut rhs = Vec::with_capacity(n_rows);
        let mut basis = Vec::with_capacity(n_rows);
        let all_rows = self
            .equalities
            .iter()
            .map(|(a, b)| (a, *b, None))
            .chain(
                self.inequalities
                    .iter()
                    .enumerate()
                    .map(|(i, (a, b))| (a, *b, Some(slack0 + i))),
            );
        for (coeffs, b, slack) in all_rows {
            let mut row = vec![0.0; cols];
            row[..n].copy_from_slice(coeffs);
            if let Some(s) = slack {
                row[s] = 1.0;
            }
            let mut value = b;
            if value < 0.0 {
                for v in row.iter_mut() {
                    *v = -*v;
                }
                value = -value;
            }
            let i = rows.len();
            match slack {
                // A slack with coefficient +1 is already a unit column.
                Some(s) if row[s] > 0.0 => basis.push(s),
                _ => {
                    row[art0 + i] = 1.0;
                    basis.push(art0 + i);
                }
            }
            rows.push(row);
            rhs.push(value);
        }
        let mut t = Tableau {
            rows,
            rhs,
            basis,
            cols,
        };

        let mut phase1 = vec![0.0; cols];
        for c in phase1.iter_mut().skip(art0) {
            *c = -1.0;
        }
        t.optimize(&phase1, cols)?;
        let residual: f64 = t
            .basis
            .iter()
            .zip(&t.rhs)
            .filter(|(&b, _)| b >= art0)
            .map(|(_, &v)| v)
            .sum();
        if residual > INFEASIBLE_TOL {
            return Ok(LpResult::Infeasible);
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art0 {
                let col = (0..art0).find(|&j| t.rows[i][j].abs() > 1e-9);
                match col {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        let mut phase2 = vec![0.0; cols];
        phase2[..n].copy_from_slice(&self.objective);
        t.optimize(&phase2, art0)?;
        let mut x = vec![0.0; n];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.rhs[i].max(0.0);
            }
        }
        let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpResult::Optimal { x, value })
    }

    /// Largest violation of any constraint (including `x ≥ 0`) at `x`.
    #[cfg(test)]
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let dot = |a: &[f64]| a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
        let eq = self
            .equalities
            .iter()
            .map(|(a, b)| (dot(a) - b).abs());
        let le = self.inequalities.iter().map(|(a, b)| dot(a) - b);
        let nonneg = x.iter().map(|v| -v);
        eq.chain(le).chain(nonneg).fold(0.0, f64::max)
    }
}
