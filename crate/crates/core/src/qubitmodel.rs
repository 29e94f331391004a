//! Qubit representations of the `(N, 2, 2)` scenario.
//!
//! Party `i` measures `F(1|1) = (1 + sigma_3) / 2` and
//! `F(1|2) = (1 + sin(theta_i) sigma_1 + cos(theta_i) sigma_3) / 2`, with
//! `F(2|s) = 1 - F(1|s)`, on its qubit of an `N`-qubit pure state. Party 0 is
//! the most significant qubit of the state vector. All measurement operators
//! are real, so every Bell operator built here is real symmetric.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::behavior::{evaluate, BellFunctional, Behavior, Scenario};
use crate::cert222::VerificationReport;
use crate::csystem::RankParity;
use crate::lhv::{Membership, MembershipResult};
use crate::numkernel::{self, top_eigenpair, RMatrix, Scalar};
use crate::{Complex64, Error, Result};

/// Largest party count handled by the eigensolver-based routines.
pub const MAX_PARTIES: usize = 6;
/// Top-eigenvalue gaps at or below this count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-6;
/// Refined optima within this distance of the best value count as maximizers.
pub const OPTIMUM_VALUE_TOL: f64 = 1e-7;
/// Max-norm distance below which two canonical angle tuples are the same optimum.
pub const ANGLE_MATCH_TOL: f64 = 1e-3;
const NORM_TOL: f64 = 1e-12;
const SATURATION_TOL: f64 = 1e-6;

/// Angles `theta_i` and a pure state on `N` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitRepresentation {
    angles: Vec<f64>,
    state: Vec<Complex64>,
}

impl QubitRepresentation {
    pub fn new(angles: Vec<f64>, state: Vec<Complex64>) -> Result<Self> {
        if angles.is_empty() || angles.len() > MAX_PARTIES {
            return Err(Error::UnsupportedN(angles.len()));
        }
        for &a in &angles {
            check_angle(a)?;
        }
        if state.len() != 1 << angles.len() {
            return Err(Error::DimensionMismatch("state dimension must be 2^N"));
        }
        let norm = numkernel::norm(&state);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { angles, state })
    }

    pub fn from_real(angles: Vec<f64>, state: &[f64]) -> Result<Self> {
        Self::new(angles, state.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// `|0...0>` with the given angles.
    pub fn product_zero(angles: Vec<f64>) -> Result<Self> {
        let mut state = vec![Complex64::new(0.0, 0.0); 1 << angles.len()];
        state[0] = Complex64::new(1.0, 0.0);
        Self::new(angles, state)
    }

    pub fn parties(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn state(&self) -> &[Complex64] {
        &self.state
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::AngleOutOfRange(theta));
    }
    Ok(())
}

/// Real observable `sin(theta) sigma_1 + cos(theta) sigma_3`.
pub fn observable(theta: f64) -> RMatrix {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    RMatrix::from_vec(2, 2, vec![c, s, s, -c]).expect("2x2")
}

/// The four projectors, indexed `[setting][outcome]` (both zero-based).
pub fn measurement_projectors(theta: f64) -> Result<[[RMatrix; 2]; 2]> {
    check_angle(theta)?;
    let id = RMatrix::identity(2);
    let f11 = id.add(&observable(0.0)).expect("2x2").scaled(0.5);
    let f12 = id.add(&observable(theta)).expect("2x2").scaled(0.5);
    let f21 = id.sub(&f11).expect("2x2");
    let f22 = id.sub(&f12).expect("2x2");
    Ok([[f11, f21], [f12, f22]])
}

/// Applies a 2x2 operator to the qubit of `party` in an `n`-qubit state.
fn apply_local<T: Scalar>(op: &RMatrix, party: usize, n: usize, psi: &[T]) -> Vec<T> {
    let shift = n - 1 - party;
    let mut out = vec![T::zero(); psi.len()];
    for (idx, slot) in out.iter_mut().enumerate() {
        let bit = (idx >> shift) & 1;
        let base = idx & !(1 << shift);
        *slot = psi[base].scale(op[(bit, 0)]) + psi[base | (1 << shift)].scale(op[(bit, 1)]);
    }
    out
}

/// `p(x|s) = <psi| F_1(x_1|s_1) ... F_N(x_N|s_N) |psi>`.
pub fn behavior_of(rep: &QubitRepresentation) -> Behavior {
    let n = rep.parties();
    let sc = Scenario::new(n, 2, 2).expect("N <= 6");
    let projectors: Vec<[[RMatrix; 2]; 2]> =
        rep.angles.iter().map(|&a| measurement_projectors(a).expect("validated angle")).collect();
    let mut p = vec![0.0; sc.table_len()];
    for s in 0..sc.setting_strings() {
        for x in 0..sc.outcome_strings() {
            let mut phi = rep.state.clone();
            for (i, proj) in projectors.iter().enumerate() {
                let (si, xi) = (Scenario::digit(s, i, 2), Scenario::digit(x, i, 2));
                phi = apply_local(&proj[si][xi], i, n, &phi);
            }
            p[sc.index(s, x)] = numkernel::inner(&rep.state, &phi).re;
        }
    }
    Behavior::new(sc, p).expect("scenario shape")
}

fn check_qubit_functional(f: &BellFunctional) -> Result<usize> {
    let sc = f.scenario();
    if sc.settings() != 2 || sc.outcomes() != 2 {
        return Err(Error::ScenarioMismatch);
    }
    if sc.parties() > MAX_PARTIES {
        return Err(Error::UnsupportedN(sc.parties()));
    }
    Ok(sc.parties())
}

/// `C(theta) = sum_{x,s} c(x|s) F(x|s)`, a real symmetric `2^N x 2^N` matrix.
///
/// Built by contracting the coefficient tensor party by party, so the cost is
/// `O(N 4^N)` rather than one Kronecker product per table entry.
pub fn bell_operator(f: &BellFunctional, angles: &[f64]) -> Result<RMatrix> {
    let n = check_qubit_functional(f)?;
    if angles.len() != n {
        return Err(Error::DimensionMismatch("one angle per party"));
    }
    let sc = f.scenario();
    let c = f.coefficients();

    // tensor indexed by digits a_i = x_i + 2 s_i (base 4, party 0 least significant)
    let len = 1usize << (2 * n);
    let mut t = vec![0.0; len];
    for s in 0..sc.setting_strings() {
        for x in 0..sc.outcome_strings() {
            let a = (0..n).fold(0, |acc, i| acc + (Scenario::digit(x, i, 2) + 2 * Scenario::digit(s, i, 2)) * (1 << (2 * i)));
            t[a] = c[sc.index(s, x)];
        }
    }

    for (i, &theta) in angles.iter().enumerate() {
        let proj = measurement_projectors(theta)?;
        let stride = 1usize << (2 * i);
        let mut next = vec![0.0; len];
        for base in 0..len {
            if !(base / stride).is_multiple_of(4) {
                continue;
            }
            let coeffs: [f64; 4] = core::array::from_fn(|a| t[base + a * stride]);
            for rc in 0..4 {
                let (r, col) = (rc / 2, rc % 2);
                next[base + rc * stride] = (0..4).map(|a| coeffs[a] * proj[a / 2][a % 2][(r, col)]).sum();
            }
        }
        t = next;
    }

    let dim = 1usize << n;
    let mut op = RMatrix::zeros(dim, dim);
    for (idx, &v) in t.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let (mut row, mut col) = (0, 0);
        for i in 0..n {
            let rc = (idx >> (2 * i)) & 3;
            row |= (rc >> 1) << (n - 1 - i);
            col |= (rc & 1) << (n - 1 - i);
        }
        op[(row, col)] = v;
    }
    Ok(op)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxOptions {
    /// Grid steps per axis; `None` picks [`default_grid_steps`].
    pub grid_steps: Option<usize>,
    /// Golden-section iterations per coordinate line search.
    pub refine_iters: usize,
    /// Number of random starting points added to the grid maxima.
    pub seeds: usize,
    pub seed: u64,
    pub max_grid_points: u128,
    /// Grid local maxima refined.
    pub max_starts: usize,
}

impl Default for MaxOptions {
    fn default() -> Self {
        Self { grid_steps: None, refine_iters: 60, seeds: 4, seed: 42, max_grid_points: 1_000_000, max_starts: 8 }
    }
}

pub fn default_grid_steps(parties: usize) -> usize {
    match parties {
        0..=3 => 60,
        4 => 12,
        5 => 8,
        _ => 5,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleOptimum {
    pub angles: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximizationResult {
    /// `Q_c`, the largest `<psi|C(theta)|psi>` found.
    pub value: f64,
    /// Maximizing angles together with the top eigenvector.
    pub best: QubitRepresentation,
    pub eigen_gap: f64,
    /// Distinct maximizers modulo `theta -> pi - theta`, best first.
    pub angle_optima: Vec<AngleOptimum>,
    pub unique_flag: bool,
    pub grid_steps: usize,
    pub evaluations: usize,
}

/// Maximizes `<psi|C(theta)|psi>` over angles and states.
///
/// The state maximization is exact (top eigenvalue). Over the angles a
/// coarse grid on `[0, pi)^N` is refined by repeated coordinate-wise
/// golden-section searches from the best grid local maxima and from seeded
/// random points.
pub fn quantum_max(f: &BellFunctional, opts: &MaxOptions) -> Result<MaximizationResult> {
    let n = check_qubit_functional(f)?;
    let steps = opts.grid_steps.unwrap_or_else(|| default_grid_steps(n)).max(1);
    let points = (steps as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if points > opts.max_grid_points {
        return Err(Error::BudgetExceeded { points, budget: opts.max_grid_points });
    }
    let points = points as usize;
    let spacing = PI / steps as f64;
    let mut evaluations = 0usize;
    let mut eval = |angles: &[f64]| -> Result<f64> {
        evaluations += 1;
        Ok(top_eigenpair(&bell_operator(f, angles)?)?.value)
    };

    let grid_angles = |idx: usize| -> Vec<f64> { (0..n).map(|i| Scenario::digit(idx, i, steps) as f64 * spacing).collect() };
    let mut values = Vec::with_capacity(points);
    for idx in 0..points {
        values.push(eval(&grid_angles(idx))?);
    }

    let mut local: Vec<usize> = (0..points)
        .filter(|&idx| {
            (0..n).all(|i| {
                let d = Scenario::digit(idx, i, steps);
                let stride = steps.pow(i as u32);
                (d == 0 || values[idx - stride] <= values[idx]) && (d + 1 == steps || values[idx + stride] <= values[idx])
            })
        })
        .collect();
    // stable sort keeps index (lexicographic angle) order among ties
    local.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut starts: Vec<Vec<f64>> = local.iter().take(opts.max_starts.max(1)).map(|&idx| grid_angles(idx)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.seeds {
        starts.push((0..n).map(|_| rng.gen_range(0.0..=PI)).collect());
    }

    let mut refined = Vec::with_capacity(starts.len());
    for start in starts {
        refined.push(refine(&mut eval, start, spacing, opts.refine_iters)?);
    }
    refined.sort_by(|a, b| b.value.total_cmp(&a.value));
    let best_value = refined[0].value;

    let mut optima: Vec<AngleOptimum> = Vec::new();
    let mut canon: Vec<Vec<f64>> = Vec::new();
    for r in refined.into_iter().filter(|r| r.value >= best_value - OPTIMUM_VALUE_TOL) {
        let c: Vec<f64> = r.angles.iter().map(|&a| a.min(PI - a)).collect();
        let seen = canon.iter().any(|o| o.iter().zip(&c).all(|(u, v)| (u - v).abs() <= ANGLE_MATCH_TOL));
        if !seen {
            canon.push(c);
            optima.push(r);
        }
    }

    let top = top_eigenpair(&bell_operator(f, &optima[0].angles)?)?;
    let state: Vec<Complex64> = top.vector.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let norm = numkernel::norm(&state);
    let state = state.into_iter().map(|z| z / norm).collect();
    let best = QubitRepresentation::new(optima[0].angles.clone(), state)?;
    let unique_flag = top.gap > DEGENERACY_TOL && optima.len() == 1;
    Ok(MaximizationResult {
        value: top.value,
        best,
        eigen_gap: top.gap,
        angle_optima: optima,
        unique_flag,
        grid_steps: steps,
        evaluations,
    })
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const MAX_SWEEPS: usize = 60;

fn refine(
    eval: &mut impl FnMut(&[f64]) -> Result<f64>,
    mut angles: Vec<f64>,
    window: f64,
    iters: usize,
) -> Result<AngleOptimum> {
    let mut best = eval(&angles)?;
    for _ in 0..MAX_SWEEPS {
        let before = best;
        for i in 0..angles.len() {
            let center = angles[i];
            let (mut lo, mut hi) = ((center - window).max(0.0), (center + window).min(PI));
            let mut probe = angles.clone();
            let mut at = |t: f64, probe: &mut Vec<f64>| -> Result<f64> {
                probe[i] = t;
                eval(probe)
            };
            let mut x1 = hi - GOLDEN * (hi - lo);
            let mut x2 = lo + GOLDEN * (hi - lo);
            let mut f1 = at(x1, &mut probe)?;
            let mut f2 = at(x2, &mut probe)?;
            for _ in 0..iters {
                if f1 < f2 {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + GOLDEN * (hi - lo);
                    f2 = at(x2, &mut probe)?;
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - GOLDEN * (hi - lo);
                    f1 = at(x1, &mut probe)?;
                }
            }
            let (x, fx) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
            if fx > best {
                angles[i] = x;
                best = fx;
            }
        }
        if best - before <= 1e-14 {
            break;
        }
    }
    Ok(AngleOptimum { angles, value: best })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecurityClass {
    Classical,
    SecureCandidate,
    AlgebraicallySecureCandidate,
    Unknown,
}

impl SecurityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SecurityClass::Classical => "Classical",
            SecurityClass::SecureCandidate => "SecureCandidate",
            SecurityClass::AlgebraicallySecureCandidate => "AlgebraicallySecureCandidate",
            SecurityClass::Unknown => "Unknown",
        }
    }
}

/// A Tsirelson functional checked against the behavior under test.
#[derive(Debug, Clone, PartialEq)]
pub struct TsirelsonEvidence {
    pub label: String,
    pub value_on_behavior: f64,
    pub quantum_max: f64,
    pub unique_flag: bool,
}

impl TsirelsonEvidence {
    pub fn from_maximization(f: &BellFunctional, b: &Behavior, max: &MaximizationResult) -> Result<Self> {
        Ok(Self {
            label: f.label().into(),
            value_on_behavior: evaluate(f, b)?,
            quantum_max: max.value,
            unique_flag: max.unique_flag,
        })
    }

    pub fn saturated(&self) -> bool {
        (self.value_on_behavior - self.quantum_max).abs() <= SATURATION_TOL
    }
}

#[derive(Debug, Clone, Default)]
pub struct Evidence<'a> {
    pub membership: Option<&'a MembershipResult>,
    /// Verification of a certificate built for a representation of the behavior.
    pub certificate: Option<&'a VerificationReport>,
    pub tsirelson: Vec<TsirelsonEvidence>,
    pub rank_parity: Option<RankParity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class: SecurityClass,
    pub trail: Vec<String>,
}

/// Combines the available evidence into a security label.
///
/// `Classical` iff the LHV test succeeded. Outside the classical polytope a
/// verified nontrivial certificate, or a saturated Tsirelson functional whose
/// maximizer is unique, witnesses extremality (`SecureCandidate`); uniqueness
/// of the representation (unique maximizer or even c-system rank) upgrades it
/// to `AlgebraicallySecureCandidate`. Anything short of that is `Unknown`.
/// The labels are numerical evidence at finite tolerance, not proofs.
pub fn classify(e: &Evidence) -> Classification {
    let mut trail = Vec::new();
    let Some(m) = e.membership else {
        trail.push("no LHV membership result".into());
        return Classification { class: SecurityClass::Unknown, trail };
    };
    match &m.membership {
        Membership::Inside { residual, .. } => {
            trail.push(format!("LHV model found (noise ratio {:.9}, residual {:.1e})", m.noise_ratio, residual));
            return Classification { class: SecurityClass::Classical, trail };
        }
        Membership::Outside { value, .. } => {
            trail.push(format!("no LHV model: separating functional value {value:.9} > classical bound 1"));
        }
    }

    let mut witness = false;
    let mut unique = false;
    if let Some(cert) = e.certificate {
        if cert.passed() {
            trail.push(format!(
                "certificate verified: bound {:.9} saturated, classical bound {:.9}",
                cert.bound, cert.classical_bound
            ));
            witness = true;
        } else {
            trail.push("certificate present but failed verification".into());
        }
    }
    for t in &e.tsirelson {
        let status = match (t.saturated(), t.unique_flag) {
            (true, true) => {
                witness = true;
                unique = true;
                "saturated with a unique maximizer"
            }
            (true, false) => "saturated but maximizer not unique",
            (false, _) => "not saturated",
        };
        trail.push(format!(
            "Tsirelson functional {}: value {:.9} vs quantum max {:.9}, {status}",
            t.label, t.value_on_behavior, t.quantum_max
        ));
    }
    match e.rank_parity {
        Some(RankParity::AlgebraicallySecure) => {
            trail.push("c-system has even rank: representation unique".into());
            unique = true;
        }
        Some(RankParity::SecureTwoReps) => trail.push("c-system has odd rank: two inequivalent representations".into()),
        None => {}
    }

    let class = match (witness, unique) {
        (true, true) => SecurityClass::AlgebraicallySecureCandidate,
        (true, false) => SecurityClass::SecureCandidate,
        (false, _) => {
            trail.push("no extremality witness".into());
            SecurityClass::Unknown
        }
    };
    Classification { class, trail }
}
