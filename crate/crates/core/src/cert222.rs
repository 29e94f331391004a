//! Lowest-order Tsirelson inequalities for the `(2, 2, 2)` scenario.
//!
//! A real representation with a maximally entangled state
//! `phi_x^± = (cos x, ∓sin x, sin x, ±cos x) / sqrt(2)` and observables
//! `A_l = sum_j t(theta_A)_lj X_j`, `X_1 = sigma_1`, `X_2 = sigma_3`, is
//! certified extremal by operators `P_i = sum_j (alpha_ij A_j ⊗ 1 - beta_ij 1 ⊗ B_j)`
//! annihilating the state. With `alpha = diag(1, lambda)` and `beta = alpha gamma`
//! the sum `sum_i P_i^T P_i` equals `bound - sum_jk coeffs_jk A_j ⊗ B_k`, so the
//! state saturates `sum coeffs_jk <A_j B_k> <= bound` over all quantum behaviors.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::behavior::{evaluate, BellFunctional, Behavior, Scenario};
use crate::lhv::classical_max;
use crate::numkernel::{hermitian_eig, RMatrix};
use crate::qubitmodel::{behavior_of, observable, QubitRepresentation};
use crate::{Error, Result};

/// Denominators at or below this magnitude are treated as poles.
pub const DENOMINATOR_TOL: f64 = 1e-12;
/// `lambda^2` at or below this is not applicable.
pub const LAMBDA_SQ_TOL: f64 = 1e-12;
pub const ANNIHILATION_TOL: f64 = 1e-9;
pub const DIAGONALITY_TOL: f64 = 1e-10;
pub const SATURATION_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-9;
pub const SAMPLED_POSITIVITY_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 1000;
const CONDITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1.0` or `-1.0`.
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

/// State parameter `x`, state family sign and the two second-setting angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepParams222 {
    x: f64,
    sign: Sign,
    theta_a: f64,
    theta_b: f64,
}

impl RepParams222 {
    /// `x` in `[0, pi)`, `theta_A` and `theta_B` in `(0, pi)`.
    pub fn new(x: f64, sign: Sign, theta_a: f64, theta_b: f64) -> Result<Self> {
        if !(0.0..PI).contains(&x) {
            return Err(Error::AngleOutOfRange(x));
        }
        for t in [theta_a, theta_b] {
            if !(t > 0.0 && t < PI) || libm::sin(t).abs() <= DENOMINATOR_TOL {
                return Err(Error::AngleOutOfRange(t));
            }
        }
        Ok(Self { x, sign, theta_a, theta_b })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn theta_a(&self) -> f64 {
        self.theta_a
    }

    pub fn theta_b(&self) -> f64 {
        self.theta_b
    }

    pub fn state(&self) -> [f64; 4] {
        state_of(self.x, self.sign)
    }

    pub fn representation(&self) -> QubitRepresentation {
        QubitRepresentation::from_real(vec![self.theta_a, self.theta_b], &self.state()).expect("validated parameters")
    }

    pub fn behavior(&self) -> Behavior {
        behavior_of(&self.representation())
    }
}

/// `phi_x^± = (cos x, ∓sin x, sin x, ±cos x) / sqrt(2)`.
pub fn state_of(x: f64, sign: Sign) -> [f64; 4] {
    let (s, c) = (libm::sin(x), libm::cos(x));
    let k = sign.value();
    [c, -k * s, s, k * c].map(|v| v * FRAC_1_SQRT_2)
}

/// `psi_hat[a][b] = psi[2a + b]`.
pub fn psi_hat(psi: &[f64; 4]) -> RMatrix {
    RMatrix::from_vec(2, 2, psi.to_vec()).expect("2x2")
}

/// `t(theta) = [[0, 1], [sin theta, cos theta]]`, so `A_1 = sigma_3` and
/// `A_2 = sin(theta) sigma_1 + cos(theta) sigma_3`.
pub fn t_matrix(theta: f64) -> RMatrix {
    RMatrix::from_vec(2, 2, vec![0.0, 1.0, libm::sin(theta), libm::cos(theta)]).expect("2x2")
}

fn pauli_basis() -> [RMatrix; 2] {
    [
        RMatrix::from_vec(2, 2, vec![0.0, 1.0, 1.0, 0.0]).expect("2x2"),
        RMatrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, -1.0]).expect("2x2"),
    ]
}

/// Whether `psi_hat^T psi_hat` is a positive multiple of the identity within `1e-10`.
pub fn psi_hat_condition(psi: &[f64; 4]) -> bool {
    let h = psi_hat(psi);
    let g = h.transpose().matmul(&h).expect("2x2");
    g[(0, 0)] > CONDITION_TOL && (g[(0, 0)] - g[(1, 1)]).abs() <= CONDITION_TOL && g[(0, 1)].abs() <= CONDITION_TOL
}

/// `eta_ij = tr(psi_hat^-1 X_i psi_hat X_j) / 2`.
pub fn eta_of(psi: &[f64; 4]) -> Result<RMatrix> {
    let h = psi_hat(psi);
    let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)];
    if det.abs() <= DENOMINATOR_TOL {
        return Err(Error::SingularPsiHat(det));
    }
    if !psi_hat_condition(psi) {
        return Err(Error::ConditionViolated);
    }
    let inv = h.inverse()?;
    let xs = pauli_basis();
    Ok(RMatrix::from_fn(2, 2, |i, j| {
        let m = inv.matmul(&xs[i]).and_then(|m| m.matmul(&h)).and_then(|m| m.matmul(&xs[j])).expect("2x2");
        0.5 * m.trace()
    }))
}

/// `max_i |X_i psi_hat - sum_j eta_ij psi_hat X_j|`.
pub fn cond1_residual(psi: &[f64; 4], eta: &RMatrix) -> f64 {
    let h = psi_hat(psi);
    let xs = pauli_basis();
    (0..2)
        .map(|i| {
            let lhs = xs[i].matmul(&h).expect("2x2");
            let rhs = (0..2).fold(RMatrix::zeros(2, 2), |acc, j| {
                acc.add(&h.matmul(&xs[j]).expect("2x2").scaled(eta[(i, j)])).expect("2x2")
            });
            lhs.sub(&rhs).expect("2x2").max_abs()
        })
        .fold(0.0, f64::max)
}

/// `gamma = t(theta_A) eta t(theta_B)^-1`.
pub fn gamma_constructive(rep: &RepParams222) -> Result<RMatrix> {
    let eta = eta_of(&rep.state())?;
    t_matrix(rep.theta_a).matmul(&eta)?.matmul(&t_matrix(rep.theta_b).inverse()?)
}

/// Closed form of `gamma_x^±`.
pub fn gamma_of(rep: &RepParams222) -> RMatrix {
    let RepParams222 { x, sign, theta_a: ta, theta_b: tb } = *rep;
    let k = sign.value();
    let s = |v: f64| libm::sin(v);
    let d = s(tb);
    RMatrix::from_vec(
        2,
        2,
        vec![
            k * s(2.0 * x + k * tb) / d,
            -k * s(2.0 * x) / d,
            k * s(2.0 * x - ta + k * tb) / d,
            -k * s(2.0 * x - ta) / d,
        ],
    )
    .expect("2x2")
}

/// `lambda^2 = -sin(2x) sin(2x ± theta_B) / (sin(2x - theta_A) sin(2x - theta_A ± theta_B))`.
///
/// A vanishing numerator yields `0` even where the denominator also vanishes
/// (e.g. `x = 0`, `theta_A = theta_B = pi/2`): `alpha` degenerates there either way.
pub fn lambda_squared(rep: &RepParams222) -> Result<f64> {
    let RepParams222 { x, sign, theta_a: ta, theta_b: tb } = *rep;
    let k = sign.value();
    let num = libm::sin(2.0 * x) * libm::sin(2.0 * x + k * tb);
    let den = libm::sin(2.0 * x - ta) * libm::sin(2.0 * x - ta + k * tb);
    if num.abs() <= DENOMINATOR_TOL {
        return Ok(0.0);
    }
    if den.abs() <= DENOMINATOR_TOL {
        return Err(Error::DegenerateDenominator(den));
    }
    Ok(-num / den)
}

/// `lambda^2 = -gamma_11 gamma_12 / (gamma_21 gamma_22)`, which makes `beta^T beta` diagonal.
pub fn lambda_squared_from_gamma(gamma: &RMatrix) -> Result<f64> {
    let den = gamma[(1, 0)] * gamma[(1, 1)];
    if den.abs() <= DENOMINATOR_TOL {
        return Err(Error::DegenerateDenominator(den));
    }
    Ok(-gamma[(0, 0)] * gamma[(0, 1)] / den)
}

/// Closed form of `alpha^T beta + (beta^T alpha)^T` with `lambda^2` substituted.
pub fn coefficients_closed_form(rep: &RepParams222) -> Result<RMatrix> {
    let RepParams222 { x, sign, theta_a: ta, theta_b: tb } = *rep;
    let k = sign.value();
    let s = |v: f64| libm::sin(v);
    let (d1, d2) = (s(2.0 * x - ta), s(2.0 * x - ta + k * tb));
    if (d1 * d2).abs() <= DENOMINATOR_TOL {
        return Err(Error::DegenerateDenominator(d1 * d2));
    }
    let f = 2.0 / s(tb);
    let cross = s(2.0 * x) * s(2.0 * x + k * tb);
    Ok(RMatrix::from_vec(
        2,
        2,
        vec![
            f * k * s(2.0 * x + k * tb),
            -f * k * s(2.0 * x),
            -f * k * cross / d1,
            f * k * cross / d2,
        ],
    )
    .expect("2x2"))
}

/// `tr(alpha^T alpha + beta^T beta) = -2 sin(theta_A) sin(4x - theta_A ± theta_B) / (sin(2x - theta_A) sin(2x - theta_A ± theta_B))`.
pub fn bound_closed_form(rep: &RepParams222) -> Result<f64> {
    let RepParams222 { x, sign, theta_a: ta, theta_b: tb } = *rep;
    let k = sign.value();
    let den = libm::sin(2.0 * x - ta) * libm::sin(2.0 * x - ta + k * tb);
    if den.abs() <= DENOMINATOR_TOL {
        return Err(Error::DegenerateDenominator(den));
    }
    Ok(-2.0 * libm::sin(ta) * libm::sin(4.0 * x - ta + k * tb) / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate222 {
    pub rep: RepParams222,
    pub gamma: RMatrix,
    pub lambda_squared: f64,
    pub alpha: RMatrix,
    pub beta: RMatrix,
    /// `coeffs_jk` multiplies `<A_j B_k>`.
    pub coeffs: RMatrix,
    pub bound: f64,
    /// The coefficients as an outcome-level functional, `c(x, y | j, k) = (-1)^(x+y) coeffs_jk`.
    pub functional: BellFunctional,
    pub classical_bound: f64,
}

impl Certificate222 {
    pub fn ratio(&self) -> f64 {
        self.bound / self.classical_bound
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum CertificateOutcome {
    Built(Certificate222),
    NotApplicable {
        lambda_squared: f64,
        /// `lambda^2` is positive but too small to build a well-conditioned certificate.
        boundary: bool,
    },
}

/// Embeds a `2 x 2` correlator matrix as a `(2, 2, 2)` functional.
pub fn correlator_functional(coeffs: &RMatrix, label: &str) -> BellFunctional {
    // setting string s = j + 2k
    let w = [coeffs[(0, 0)], coeffs[(1, 0)], coeffs[(0, 1)], coeffs[(1, 1)]];
    BellFunctional::from_correlators(Scenario::chsh(), &w, label).expect("(2,2,2) shape")
}

pub fn build_certificate(rep: &RepParams222) -> Result<CertificateOutcome> {
    let lambda_sq = lambda_squared(rep)?;
    if lambda_sq <= 0.0 {
        return Ok(CertificateOutcome::NotApplicable { lambda_squared: lambda_sq, boundary: false });
    }
    if lambda_sq <= LAMBDA_SQ_TOL {
        return Ok(CertificateOutcome::NotApplicable { lambda_squared: lambda_sq, boundary: true });
    }
    let gamma = gamma_constructive(rep)?;
    let alpha = RMatrix::diag(&[1.0, libm::sqrt(lambda_sq)]);
    Ok(CertificateOutcome::Built(assemble(*rep, gamma, lambda_sq, alpha)?))
}

fn assemble(rep: RepParams222, gamma: RMatrix, lambda_squared: f64, alpha: RMatrix) -> Result<Certificate222> {
    let beta = alpha.matmul(&gamma)?;
    let ab = alpha.transpose().matmul(&beta)?;
    let coeffs = ab.add(&beta.transpose().matmul(&alpha)?.transpose())?;
    let bound = alpha.transpose().matmul(&alpha)?.trace() + beta.transpose().matmul(&beta)?.trace();
    let functional = correlator_functional(&coeffs, "tsirelson222");
    let (classical_bound, _) = classical_max(&functional)?;
    Ok(Certificate222 { rep, gamma, lambda_squared, alpha, beta, coeffs, bound, functional, classical_bound })
}

/// Numerical evidence that a certificate is valid for its representation.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// `||P_i psi||` at the representation's observables.
    pub annihilation: [f64; 2],
    /// Largest off-diagonal magnitude of `alpha^T alpha`.
    pub alpha_diagonality: f64,
    pub beta_diagonality: f64,
    /// The certificate functional on the representation's behavior.
    pub value: f64,
    pub saturation_defect: f64,
    /// Smallest eigenvalue of `T = sum_i P_i^T P_i` at the representation's observables.
    pub min_eigenvalue: f64,
    /// Smallest `bound - sum coeffs_jk <A'_j B'_k>` over sampled observables and states.
    pub min_sampled: f64,
    /// Largest gap between that linear form and `sum_i ||P'_i psi||^2`.
    pub sample_mismatch: f64,
    pub samples: usize,
    pub bound: f64,
    pub classical_bound: f64,
}

impl VerificationReport {
    pub fn annihilates(&self) -> bool {
        self.annihilation.iter().all(|&r| r <= ANNIHILATION_TOL)
    }

    pub fn diagonal(&self) -> bool {
        self.alpha_diagonality <= DIAGONALITY_TOL && self.beta_diagonality <= DIAGONALITY_TOL
    }

    pub fn saturated(&self) -> bool {
        self.saturation_defect <= SATURATION_TOL
    }

    pub fn positive(&self) -> bool {
        self.min_eigenvalue >= -POSITIVITY_TOL
            && self.min_sampled >= -SAMPLED_POSITIVITY_TOL
            && self.sample_mismatch <= SAMPLED_POSITIVITY_TOL
    }

    pub fn nontrivial(&self) -> bool {
        self.classical_bound < self.bound - SATURATION_TOL
    }

    pub fn passed(&self) -> bool {
        self.annihilates() && self.diagonal() && self.saturated() && self.positive() && self.nontrivial()
    }
}

fn off_diagonal(m: &RMatrix) -> f64 {
    m[(0, 1)].abs().max(m[(1, 0)].abs())
}

/// `P_i = sum_j (alpha_ij A_j ⊗ 1 - beta_ij 1 ⊗ B_j)` as `4 x 4` matrices.
fn annihilators(cert: &Certificate222, a: &[RMatrix; 2], b: &[RMatrix; 2]) -> [RMatrix; 2] {
    let id = RMatrix::identity(2);
    core::array::from_fn(|i| {
        (0..2).fold(RMatrix::zeros(4, 4), |acc, j| {
            let left = a[j].kron(&id).scaled(cert.alpha[(i, j)]);
            let right = id.kron(&b[j]).scaled(cert.beta[(i, j)]);
            acc.add(&left).and_then(|m| m.sub(&right)).expect("4x4")
        })
    })
}

fn random_unit_vector(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        let v: [f64; 4] = core::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
        let n = libm::sqrt(v.iter().map(|c| c * c).sum());
        if n > 1e-3 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

fn expectation(m: &RMatrix, psi: &[f64]) -> f64 {
    m.quadratic_form(psi).expect("matching dimension")
}

/// Checks annihilation, diagonality, saturation, positivity and nontriviality.
///
/// Positivity is probed beyond the representation itself with `samples` seeded
/// random real observables `cos(phi) sigma_3 + sin(phi) sigma_1` and random
/// real unit states.
pub fn verify_certificate(cert: &Certificate222, samples: usize, seed: u64) -> VerificationReport {
    let rep = cert.rep;
    let psi = rep.state();
    let a = [observable(0.0), observable(rep.theta_a)];
    let b = [observable(0.0), observable(rep.theta_b)];
    let p = annihilators(cert, &a, &b);
    let annihilation = [0, 1].map(|i| crate::numkernel::norm(&p[i].mul_vec(&psi).expect("4x4")));

    let t = p.iter().fold(RMatrix::zeros(4, 4), |acc, pi| acc.add(&pi.transpose().matmul(pi).expect("4x4")).expect("4x4"));
    let min_eigenvalue = hermitian_eig(&t).map(|e| e.eigenvalues[0]).unwrap_or(f64::NEG_INFINITY);

    let value = evaluate(&cert.functional, &rep.behavior()).expect("(2,2,2) functional");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_sampled = f64::INFINITY;
    let mut sample_mismatch: f64 = 0.0;
    for _ in 0..samples {
        let ap: [RMatrix; 2] = core::array::from_fn(|_| observable(rng.gen_range(0.0..2.0 * PI)));
        let bp: [RMatrix; 2] = core::array::from_fn(|_| observable(rng.gen_range(0.0..2.0 * PI)));
        let phi = random_unit_vector(&mut rng);
        let mut linear = cert.bound;
        for (j, a) in ap.iter().enumerate() {
            for (k, b) in bp.iter().enumerate() {
                linear -= cert.coeffs[(j, k)] * expectation(&a.kron(b), &phi);
            }
        }
        let squares: f64 = annihilators(cert, &ap, &bp)
            .iter()
            .map(|pi| pi.mul_vec(&phi).expect("4x4").iter().map(|v| v * v).sum::<f64>())
            .sum();
        min_sampled = min_sampled.min(linear);
        sample_mismatch = sample_mismatch.max((linear - squares).abs());
    }
    if samples == 0 {
        min_sampled = 0.0;
    }

    VerificationReport {
        annihilation,
        alpha_diagonality: off_diagonal(&cert.alpha.transpose().matmul(&cert.alpha).expect("2x2")),
        beta_diagonality: off_diagonal(&cert.beta.transpose().matmul(&cert.beta).expect("2x2")),
        value,
        saturation_defect: (value - cert.bound).abs(),
        min_eigenvalue,
        min_sampled,
        sample_mismatch,
        samples,
        bound: cert.bound,
        classical_bound: cert.classical_bound,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub theta_a: f64,
    pub sign: Sign,
    /// Half-open `[start, end)`.
    pub x_range: (f64, f64),
    pub theta_b_range: (f64, f64),
    pub x_steps: usize,
    pub theta_b_steps: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            theta_a: PI / 2.0,
            sign: Sign::Plus,
            x_range: (0.0, PI / 4.0),
            theta_b_range: (0.0, PI),
            x_steps: 50,
            theta_b_steps: 50,
        }
    }
}

impl ScanConfig {
    /// Grid abscissae `start + k (end - start) / steps`, `k = 0..steps`.
    pub fn x_values(&self) -> Vec<f64> {
        grid(self.x_range, self.x_steps)
    }

    pub fn theta_b_values(&self) -> Vec<f64> {
        grid(self.theta_b_range, self.theta_b_steps)
    }
}

fn grid((start, end): (f64, f64), steps: usize) -> Vec<f64> {
    (0..steps).map(|k| start + k as f64 * (end - start) / steps as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub theta_b: f64,
    /// Present for applicable points only.
    pub certificate: Option<Certificate222>,
}

impl ScanRow {
    pub fn applicable(&self) -> bool {
        self.certificate.is_some()
    }

    pub fn quantum_bound(&self) -> Option<f64> {
        self.certificate.as_ref().map(|c| c.bound)
    }

    pub fn classical_max(&self) -> Option<f64> {
        self.certificate.as_ref().map(|c| c.classical_bound)
    }

    pub fn ratio(&self) -> Option<f64> {
        self.certificate.as_ref().map(Certificate222::ratio)
    }
}

/// Quantum-to-classical bound ratio of the certificate over an `(x, theta_B)`
/// grid, ordered by `x` then `theta_B`. Points where the parameters are
/// invalid, `lambda^2 <= 0`, or a denominator vanishes are not applicable.
pub fn ratio_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    if cfg.x_steps < 2 || cfg.theta_b_steps < 2 {
        return Err(Error::InvalidScenario("scan needs at least two steps per axis"));
    }
    let mut rows = Vec::with_capacity(cfg.x_steps * cfg.theta_b_steps);
    for x in cfg.x_values() {
        for theta_b in cfg.theta_b_values() {
            let certificate = RepParams222::new(x, cfg.sign, cfg.theta_a, theta_b)
                .ok()
                .and_then(|rep| build_certificate(&rep).ok())
                .and_then(|out| match out {
                    CertificateOutcome::Built(c) => Some(c),
                    CertificateOutcome::NotApplicable { .. } => None,
                });
            rows.push(ScanRow { x, theta_b, certificate });
        }
    }
    Ok(rows)
}

/// Parameters of unbiased real representations reproducing `b` within `tol`.
///
/// `phi_x^+` gives correlators `cos(a_i - b_j - 2x)` and `phi_x^-` gives
/// `cos(a_i + b_j - 2x)` with `a = (0, theta_A)`, `b = (0, theta_B)`, so the
/// candidates follow from inverting three correlators.
pub fn fit_representations(b: &Behavior, tol: f64) -> Result<Vec<RepParams222>> {
    if b.scenario() != Scenario::chsh() {
        return Err(Error::WrongScenario("N = 2, M = 2, K = 2"));
    }
    let table = crate::behavior::correlation_table(b)?;
    let c = |i, j| table.correlator(i, j).clamp(-1.0, 1.0);
    let wrap = |v: f64| {
        let r = libm::fmod(v, 2.0 * PI);
        if r < 0.0 {
            r + 2.0 * PI
        } else {
            r
        }
    };
    let mut found: Vec<RepParams222> = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let k = sign.value();
        let a00 = libm::acos(c(0, 0));
        let (a10, a01) = (libm::acos(c(1, 0)), libm::acos(c(0, 1)));
        for two_x in [a00, 2.0 * PI - a00] {
            for ea in [1.0, -1.0] {
                for eb in [1.0, -1.0] {
                    let theta_a = wrap(two_x + ea * a10);
                    // plus: cos(theta_B + 2x) = c01, minus: cos(theta_B - 2x) = c01
                    let theta_b = wrap(eb * a01 + k * (-two_x));
                    let x = wrap(two_x) / 2.0;
                    let Ok(rep) = RepParams222::new(x, sign, theta_a, theta_b) else { continue };
                    let fitted = rep.behavior();
                    let err = fitted
                        .probabilities()
                        .iter()
                        .zip(b.probabilities())
                        .map(|(u, v)| (u - v).abs())
                        .fold(0.0, f64::max);
                    let dup = found.iter().any(|r| {
                        r.sign == rep.sign
                            && (r.x - rep.x).abs() < 1e-9
                            && (r.theta_a - rep.theta_a).abs() < 1e-9
                            && (r.theta_b - rep.theta_b).abs() < 1e-9
                    });
                    if err <= tol && !dup {
                        found.push(rep);
                    }
                }
            }
        }
    }
    Ok(found)
}
