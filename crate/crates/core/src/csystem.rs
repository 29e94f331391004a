//! Vector systems `{x_i, y_j}` realizing bipartite dichotomic correlations
//! `c_ij = <x_i, y_j>`, and the rank conditions they satisfy at extremal points.

use alloc::vec;
use alloc::vec::Vec;

use crate::behavior::{correlation_table, Behavior};
use crate::numkernel::{self, gram_rank, hermitian_eig, psd_project, RMatrix, RANK_TOL};
use crate::qubitmodel::observable;
use crate::{Complex64, Error, Result};

pub const NORM_TOL: f64 = 1e-9;
pub const ISOMETRY_TOL: f64 = 1e-8;
pub const MAX_SETTINGS: usize = 6;
const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CSystem {
    x: Vec<Vec<f64>>,
    y: Vec<Vec<f64>>,
    rank: usize,
}

impl CSystem {
    /// `M` vectors per side of a common dimension, norms at most `1 + 1e-9`.
    pub fn from_vectors(x: Vec<Vec<f64>>, y: Vec<Vec<f64>>) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::InvalidTable("need the same positive number of x and y vectors"));
        }
        let dim = x[0].len();
        if dim == 0 || x.iter().chain(&y).any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("c-system vectors must share one dimension"));
        }
        if x.iter().chain(&y).any(|v| numkernel::norm(v) > 1.0 + NORM_TOL) {
            return Err(Error::InvalidTable("c-system vectors must have norm at most 1"));
        }
        let union: Vec<&Vec<f64>> = x.iter().chain(&y).collect();
        let rank = gram_rank(&union, RANK_TOL)?;
        Ok(Self { x, y, rank })
    }

    /// `x_i = (A_i ⊗ 1) psi`, `y_j = (1 ⊗ B_j) psi` with
    /// `A = sin(a) sigma_1 + cos(a) sigma_3` per setting angle.
    pub fn from_representation(alice: &[f64], bob: &[f64], psi: &[Complex64]) -> Result<Self> {
        if psi.iter().any(|z| z.im.abs() > REAL_TOL) {
            return Err(Error::NonRealState);
        }
        let re: Vec<f64> = psi.iter().map(|z| z.re).collect();
        Self::from_real_representation(alice, bob, &re)
    }

    pub fn from_real_representation(alice: &[f64], bob: &[f64], psi: &[f64]) -> Result<Self> {
        if alice.is_empty() || alice.len() != bob.len() {
            return Err(Error::DimensionMismatch("one angle per setting on each side"));
        }
        if psi.len() != 4 {
            return Err(Error::DimensionMismatch("two-qubit state has dimension 4"));
        }
        let norm = numkernel::norm(psi);
        if (norm - 1.0).abs() > REAL_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let id = RMatrix::identity(2);
        let apply = |m: RMatrix| m.mul_vec(psi).expect("4x4");
        let x = alice.iter().map(|&a| apply(observable(a).kron(&id))).collect();
        let y = bob.iter().map(|&b| apply(id.kron(&observable(b)))).collect();
        Self::from_vectors(x, y)
    }

    pub fn settings(&self) -> usize {
        self.x.len()
    }

    pub fn dimension(&self) -> usize {
        self.x[0].len()
    }

    pub fn x_vectors(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn y_vectors(&self) -> &[Vec<f64>] {
        &self.y
    }

    /// Dimension of `span{x_i, y_j}`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_x(&self) -> usize {
        gram_rank(&self.x, RANK_TOL).expect("nonempty")
    }

    pub fn rank_y(&self) -> usize {
        gram_rank(&self.y, RANK_TOL).expect("nonempty")
    }

    pub fn norms(&self) -> (Vec<f64>, Vec<f64>) {
        (self.x.iter().map(|v| numkernel::norm(v)).collect(), self.y.iter().map(|v| numkernel::norm(v)).collect())
    }

    pub fn has_unit_norms(&self) -> bool {
        let (nx, ny) = self.norms();
        nx.iter().chain(&ny).all(|n| (n - 1.0).abs() <= NORM_TOL)
    }

    /// Row-major `c_ij = <x_i, y_j>`.
    pub fn correlations(&self) -> Vec<f64> {
        self.x.iter().flat_map(|xi| self.y.iter().map(move |yj| numkernel::inner(xi, yj))).collect()
    }

    /// Gram matrix of `(x_1, ..., x_M, y_1, ..., y_M)`.
    pub fn gram(&self) -> RMatrix {
        let all: Vec<&Vec<f64>> = self.x.iter().chain(&self.y).collect();
        RMatrix::from_fn(all.len(), all.len(), |i, j| numkernel::inner(all[i], all[j]))
    }

    /// Coordinates of all `2M` vectors in an orthonormal basis of their span.
    fn hull_coordinates(&self) -> Result<Vec<Vec<f64>>> {
        let d = self.dimension();
        let all: Vec<&Vec<f64>> = self.x.iter().chain(&self.y).collect();
        let frame = RMatrix::from_fn(d, d, |a, b| all.iter().map(|v| v[a] * v[b]).sum());
        let eig = hermitian_eig(&frame)?;
        let basis: Vec<Vec<f64>> = (d - self.rank..d).map(|k| eig.vector(k)).collect();
        Ok(all.iter().map(|v| basis.iter().map(|u| numkernel::inner(u, v)).collect()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletionOptions {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        Self { max_iters: 10_000, tol: 1e-9 }
    }
}

/// Finds vectors with `<x_i, y_j> = c_ij` and unit norms for a row-major
/// `M x M` table.
///
/// Alternates between the PSD cone and the affine set of `2M x 2M` matrices
/// with unit diagonal and cross block `c`. Succeeds once the PSD iterate is
/// within `tol` of the affine set; the iterate is then factored by its
/// eigendecomposition. Tables outside the quantum set leave a persistent gap,
/// reported as [`Error::DidNotConverge`] with the smallest defect seen.
pub fn complete_from_table(settings: usize, c: &[f64], opts: &CompletionOptions) -> Result<CSystem> {
    if settings == 0 || settings > MAX_SETTINGS {
        return Err(Error::InvalidTable("M must be between 1 and 6"));
    }
    if c.len() != settings * settings {
        return Err(Error::ShapeMismatch { expected: settings * settings, got: c.len() });
    }
    if c.iter().any(|v| !v.is_finite() || v.abs() > 1.0 + REAL_TOL) {
        return Err(Error::InvalidTable("correlators must lie in [-1, 1]"));
    }
    let m = settings;
    let n = 2 * m;
    let affine = |g: &RMatrix| {
        let mut a = g.clone();
        for i in 0..n {
            a[(i, i)] = 1.0;
        }
        for i in 0..m {
            for j in 0..m {
                a[(i, m + j)] = c[i * m + j];
                a[(m + j, i)] = c[i * m + j];
            }
        }
        a
    };

    let mut g = affine(&RMatrix::zeros(n, n));
    let mut best = f64::INFINITY;
    for _ in 0..opts.max_iters {
        let p = psd_project(&g)?;
        let a = affine(&p);
        let defect = p.sub(&a)?.max_abs();
        best = best.min(defect);
        if defect <= opts.tol {
            return factor(&p, m);
        }
        g = a;
    }
    Err(Error::DidNotConverge { iterations: opts.max_iters, defect: best })
}

fn factor(p: &RMatrix, m: usize) -> Result<CSystem> {
    let n = p.rows();
    let eig = hermitian_eig(p)?;
    let top = eig.eigenvalues[n - 1].max(0.0);
    let kept: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > RANK_TOL * top).collect();
    let vectors: Vec<Vec<f64>> = (0..n)
        .map(|row| {
            let v: Vec<f64> = kept.iter().map(|&k| libm::sqrt(eig.eigenvalues[k]) * eig.eigenvectors[(row, k)]).collect();
            // absorb the residual diagonal defect so norms stay within bounds
            let norm = numkernel::norm(&v);
            if norm > 1.0 {
                v.iter().map(|c| c / norm).collect()
            } else {
                v
            }
        })
        .collect();
    let (x, y) = vectors.split_at(m);
    CSystem::from_vectors(x.to_vec(), y.to_vec())
}

/// The three printed rank inequalities evaluated literally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankBounds {
    /// `r <= M`.
    pub leq_m: bool,
    /// `r <= -1/2 + sqrt(1/4 + 4M)`.
    pub quadratic: bool,
    /// `r (r + 1) / 2 <= 2M - 1`.
    pub triangular: bool,
}

impl RankBounds {
    pub fn all(&self) -> bool {
        self.leq_m && self.quadratic && self.triangular
    }
}

pub fn rank_bounds_check(rank: usize, settings: usize) -> RankBounds {
    let (r, m) = (rank as f64, settings as f64);
    RankBounds {
        leq_m: rank <= settings,
        quadratic: r <= -0.5 + libm::sqrt(0.25 + 4.0 * m),
        triangular: rank * (rank + 1) / 2 < 2 * settings,
    }
}

/// Whether `{x_i ⊗ x_i, y_j ⊗ y_j}` span the symmetric subspace of `R^r ⊗ R^r`,
/// computed in coordinates of the common hull.
pub fn symmetric_span_check(cs: &CSystem) -> Result<bool> {
    let (rank_x, rank_y, r) = (cs.rank_x(), cs.rank_y(), cs.rank());
    if rank_x != r || rank_y != r {
        return Err(Error::HullMismatch { rank_x, rank_y, rank_union: r });
    }
    if r == 0 {
        return Ok(false);
    }
    let squares: Vec<Vec<f64>> = cs
        .hull_coordinates()?
        .iter()
        .map(|v| v.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect())
        .collect();
    Ok(gram_rank(&squares, RANK_TOL)? == r * (r + 1) / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankParity {
    /// Even rank: the quantum representation is unique.
    AlgebraicallySecure,
    /// Odd rank: exactly two inequivalent representations.
    SecureTwoReps,
}

impl RankParity {
    pub fn as_str(&self) -> &'static str {
        match self {
            RankParity::AlgebraicallySecure => "AlgebraicallySecure",
            RankParity::SecureTwoReps => "SecureTwoReps",
        }
    }
}

/// Maps the rank parity of a c-system to its representation count.
///
/// The extremality preconditions (unit norms, non-deterministic table,
/// coinciding hulls, symmetric span, vanishing marginals) are checked first;
/// they are necessary conditions, so the result is evidence rather than proof.
pub fn classify_rank_parity(cs: &CSystem, marginals_zero: bool) -> Result<RankParity> {
    if !cs.has_unit_norms() {
        return Err(Error::PreconditionNotMet("c-system vectors are not unit vectors"));
    }
    if cs.correlations().iter().all(|c| c.abs() >= 1.0 - NORM_TOL) {
        return Err(Error::PreconditionNotMet("deterministic correlation table"));
    }
    match symmetric_span_check(cs) {
        Ok(true) => {}
        Ok(false) => return Err(Error::PreconditionNotMet("symmetric squares do not span the symmetric subspace")),
        Err(Error::HullMismatch { .. }) => return Err(Error::PreconditionNotMet("linear hulls of x and y differ")),
        Err(e) => return Err(e),
    }
    if !marginals_zero {
        return Err(Error::PreconditionNotMet("local marginals do not vanish"));
    }
    Ok(if cs.rank().is_multiple_of(2) { RankParity::AlgebraicallySecure } else { RankParity::SecureTwoReps })
}

/// Whether every single-party expectation of a `(2, M, 2)` behavior is within `tol` of zero.
pub fn marginals_zero_check(b: &Behavior, tol: f64) -> Result<bool> {
    let t = correlation_table(b)?;
    Ok(t.alice_marginals().iter().chain(t.bob_marginals()).all(|v| v.abs() <= tol))
}

/// Isometry of two c-systems, compared through their Gram matrices.
pub fn isometric(a: &CSystem, b: &CSystem, tol: f64) -> bool {
    a.settings() == b.settings() && a.gram().sub(&b.gram()).map(|d| d.max_abs() <= tol).unwrap_or(false)
}

/// `M = 1` c-system with perfectly correlated unit vectors, mostly useful in tests.
pub fn perfect_correlation() -> CSystem {
    CSystem::from_vectors(vec![vec![1.0]], vec![vec![1.0]]).expect("unit vectors")
}
