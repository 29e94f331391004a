//! Dense two-phase simplex for `min c^T x  s.t.  A x = b, x >= 0`.
//!
//! Bland's rule on both phases; artificial columns are kept in the tableau so
//! that the final duals `y = c_B^T B^-1` can be read off their reduced costs.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) const PIVOT_TOL: f64 = 1e-11;
const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub x: Vec<f64>,
    /// Duals of the original (unflipped) equality rows.
    pub duals: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpFailure {
    Infeasible(f64),
    Unbounded,
    Stall(usize),
}

struct Tableau {
    m: usize,
    /// structural columns
    n: usize,
    width: usize,
    t: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
    max_pivots: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.t[row * w + col];
        for j in 0..w {
            self.t[row * w + j] /= p;
        }
        for i in 0..=self.m {
            if i == row {
                continue;
            }
            let f = self.t[i * w + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..w {
                let v = self.t[row * w + j];
                if v != 0.0 {
                    self.t[i * w + j] -= f * v;
                }
            }
            self.t[i * w + col] = 0.0;
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Runs Bland's rule with entering candidates restricted to `0..limit`.
    fn optimize(&mut self, limit: usize) -> Result<(), LpFailure> {
        let obj = self.m;
        loop {
            if self.pivots > self.max_pivots {
                return Err(LpFailure::Stall(self.pivots));
            }
            let Some(col) = (0..limit).find(|&j| self.at(obj, j) < -PIVOT_TOL) else {
                return Ok(());
            };
            let rhs = self.rhs_col();
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, col);
                if a > PIVOT_TOL {
                    let ratio = self.at(i, rhs) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-15 || (ratio <= br + 1e-15 && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Err(LpFailure::Unbounded),
            }
        }
    }

    fn set_objective(&mut self, cost: &[f64]) {
        let (m, w) = (self.m, self.width);
        for j in 0..w {
            self.t[m * w + j] = if j < cost.len() { cost[j] } else { 0.0 };
        }
        for i in 0..m {
            let cb = if self.basis[i] < cost.len() { cost[self.basis[i]] } else { 0.0 };
            if cb == 0.0 {
                continue;
            }
            for j in 0..w {
                self.t[m * w + j] -= cb * self.t[i * w + j];
            }
        }
    }
}

/// `columns[j]` is column `j` of `A`.
pub(crate) fn solve(columns: &[Vec<f64>], b: &[f64], cost: &[f64], max_pivots: usize) -> Result<LpSolution, LpFailure> {
    let m = b.len();
    let n = columns.len();
    let width = n + m + 1;
    let mut t = vec![0.0; (m + 1) * width];
    let flip: Vec<f64> = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    for i in 0..m {
        for (j, col) in columns.iter().enumerate() {
            t[i * width + j] = flip[i] * col[i];
        }
        t[i * width + n + i] = 1.0;
        t[i * width + width - 1] = flip[i] * b[i];
    }
    let mut tab = Tableau { m, n, width, t, basis: (n..n + m).collect(), pivots: 0, max_pivots };

    // phase 1: minimize the sum of artificials
    let mut phase1 = vec![0.0; n + m];
    phase1[n..].iter_mut().for_each(|c| *c = 1.0);
    tab.set_objective(&phase1);
    tab.optimize(n + m)?;
    let infeasibility = -tab.at(m, tab.rhs_col());
    if infeasibility > FEASIBILITY_TOL * (1.0 + b.iter().map(|v| v.abs()).sum::<f64>()) {
        return Err(LpFailure::Infeasible(infeasibility));
    }

    // drive zero-level artificials out of the basis where a structural pivot exists
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.at(i, j).abs() > 1e-9) {
                tab.pivot(i, j);
            }
        }
    }

    // phase 2: artificials may not re-enter
    let mut full_cost = cost.to_vec();
    full_cost.resize(n + m, 0.0);
    tab.set_objective(&full_cost);
    tab.optimize(tab.n)?;

    let rhs = tab.rhs_col();
    let mut x = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.at(i, rhs).max(0.0);
        }
    }
    // reduced cost of artificial i is 0 - y_i in the flipped system
    let duals = (0..m).map(|i| -tab.at(m, n + i) * flip[i]).collect();
    let objective = x.iter().zip(cost).map(|(a, c)| a * c).sum();
    Ok(LpSolution { x, duals, objective })
}
