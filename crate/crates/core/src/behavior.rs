//! `(N, M, K)` correlation tables and linear functionals on them.
//!
//! Layout of every table: a flat array with the setting string as the major
//! index and the outcome string as the minor index,
//! `index = s * K^N + x`, where both `s = sum_i s_i M^i` and `x = sum_i x_i K^i`
//! are mixed-radix little-endian by party (party 0 is the least significant
//! digit). Outcomes and settings are zero-based internally; for dichotomic
//! measurements outcome `x` carries the value `(-1)^x`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, BEHAVIOR_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scenario {
    parties: usize,
    settings: usize,
    outcomes: usize,
}

impl Scenario {
    pub fn new(parties: usize, settings: usize, outcomes: usize) -> Result<Self> {
        if parties < 1 {
            return Err(Error::InvalidScenario("need at least one party"));
        }
        if settings < 1 {
            return Err(Error::InvalidScenario("need at least one setting"));
        }
        if outcomes < 2 {
            return Err(Error::InvalidScenario("need at least two outcomes"));
        }
        let len = (settings as u128 * outcomes as u128).checked_pow(parties as u32);
        match len {
            Some(l) if l <= (1u128 << 26) => Ok(Self { parties, settings, outcomes }),
            _ => Err(Error::InvalidScenario("table too large")),
        }
    }

    /// The `(2, 2, 2)` CHSH scenario.
    pub fn chsh() -> Self {
        Self { parties: 2, settings: 2, outcomes: 2 }
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    /// `K^N`.
    pub fn outcome_strings(&self) -> usize {
        self.outcomes.pow(self.parties as u32)
    }

    /// `M^N`.
    pub fn setting_strings(&self) -> usize {
        self.settings.pow(self.parties as u32)
    }

    pub fn table_len(&self) -> usize {
        self.outcome_strings() * self.setting_strings()
    }

    pub fn index(&self, setting_string: usize, outcome_string: usize) -> usize {
        setting_string * self.outcome_strings() + outcome_string
    }

    /// Encodes per-party digits (`digits[i]` for party `i`) in base `radix`.
    pub fn encode(digits: &[usize], radix: usize) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * radix + d)
    }

    /// Digit of `party` in a string encoded in base `radix`.
    pub fn digit(code: usize, party: usize, radix: usize) -> usize {
        (code / radix.pow(party as u32)) % radix
    }

    pub fn decode(&self, code: usize, radix: usize) -> Vec<usize> {
        (0..self.parties).map(|i| Self::digit(code, i, radix)).collect()
    }

    /// `sum_i x_i` over the outcome string, used for the `(-1)^x` sign.
    pub fn outcome_parity(&self, outcome_string: usize) -> usize {
        (0..self.parties).map(|i| Self::digit(outcome_string, i, self.outcomes)).sum::<usize>() % 2
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.table_len() {
            return Err(Error::ShapeMismatch { expected: self.table_len(), got: len });
        }
        Ok(())
    }
}

/// A table `P(x|s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    p: Vec<f64>,
}

impl Behavior {
    pub fn new(scenario: Scenario, p: Vec<f64>) -> Result<Self> {
        scenario.check_len(p.len())?;
        Ok(Self { scenario, p })
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let v = 1.0 / scenario.outcome_strings() as f64;
        Self { scenario, p: vec![v; scenario.table_len()] }
    }

    /// `p(x, y | s, t) = 1/2` if `x xor y = s * t`, else 0.
    pub fn pr_box() -> Self {
        let sc = Scenario::chsh();
        let mut p = vec![0.0; sc.table_len()];
        for s in 0..4 {
            let (sa, sb) = (s % 2, s / 2);
            for x in 0..4 {
                let (xa, xb) = (x % 2, x / 2);
                if xa ^ xb == sa & sb {
                    p[sc.index(s, x)] = 0.5;
                }
            }
        }
        Self { scenario: sc, p }
    }

    /// Product of independent local distributions, `local[party][setting][outcome]`.
    pub fn product(scenario: Scenario, local: &[Vec<Vec<f64>>]) -> Result<Self> {
        if local.len() != scenario.parties
            || local.iter().any(|l| l.len() != scenario.settings || l.iter().any(|d| d.len() != scenario.outcomes))
        {
            return Err(Error::DimensionMismatch("local distributions do not match scenario"));
        }
        let (k, m) = (scenario.outcomes, scenario.settings);
        let mut p = vec![0.0; scenario.table_len()];
        for s in 0..scenario.setting_strings() {
            for x in 0..scenario.outcome_strings() {
                p[scenario.index(s, x)] = (0..scenario.parties)
                    .map(|i| local[i][Scenario::digit(s, i, m)][Scenario::digit(x, i, k)])
                    .product();
            }
        }
        Ok(Self { scenario, p })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, setting_string: usize, outcome_string: usize) -> f64 {
        self.p[self.scenario.index(setting_string, outcome_string)]
    }

    /// `sum_k w_k b_k`; all behaviors must share a scenario.
    pub fn mixture(parts: &[(f64, &Behavior)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyInput)?.1;
        let mut p = vec![0.0; first.p.len()];
        for &(w, b) in parts {
            if b.scenario != first.scenario {
                return Err(Error::ScenarioMismatch);
            }
            for (acc, v) in p.iter_mut().zip(&b.p) {
                *acc += w * v;
            }
        }
        Ok(Self { scenario: first.scenario, p })
    }

    /// Marginal of the parties in `mask` at the full setting string `s`,
    /// indexed by the outcome string restricted to those parties.
    fn marginal(&self, mask: usize, s: usize) -> Vec<f64> {
        let sc = self.scenario;
        let members: Vec<usize> = (0..sc.parties).filter(|i| mask >> i & 1 == 1).collect();
        let mut out = vec![0.0; sc.outcomes.pow(members.len() as u32)];
        for x in 0..sc.outcome_strings() {
            let digits: Vec<usize> = members.iter().map(|&i| Scenario::digit(x, i, sc.outcomes)).collect();
            out[Scenario::encode(&digits, sc.outcomes)] += self.get(s, x);
        }
        out
    }
}

/// Coefficients `c(x|s)` of a linear functional on behaviors.
#[derive(Debug, Clone, PartialEq)]
pub struct BellFunctional {
    scenario: Scenario,
    c: Vec<f64>,
    label: String,
}

impl BellFunctional {
    pub fn new(scenario: Scenario, c: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        scenario.check_len(c.len())?;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("non-finite coefficient"));
        }
        Ok(Self { scenario, c, label: label.into() })
    }

    pub fn zero(scenario: Scenario) -> Self {
        Self { scenario, c: vec![0.0; scenario.table_len()], label: "zero".into() }
    }

    /// Functional `sum_s w(s) <prod_i A_i^{s_i}>` for dichotomic outcomes, with
    /// `weights` indexed by setting string.
    pub fn from_correlators(scenario: Scenario, weights: &[f64], label: impl Into<String>) -> Result<Self> {
        if scenario.outcomes != 2 {
            return Err(Error::WrongScenario("K = 2"));
        }
        if weights.len() != scenario.setting_strings() {
            return Err(Error::ShapeMismatch { expected: scenario.setting_strings(), got: weights.len() });
        }
        let mut c = vec![0.0; scenario.table_len()];
        for (s, &w) in weights.iter().enumerate() {
            for x in 0..scenario.outcome_strings() {
                c[scenario.index(s, x)] = if scenario.outcome_parity(x) == 0 { w } else { -w };
            }
        }
        Self::new(scenario, c, label)
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { scenario: self.scenario, c: self.c.iter().map(|v| v * k).collect(), label: self.label.clone() }
    }

    /// Adds `t` times the functional that evaluates to one on every normalized behavior.
    pub fn shifted(&self, t: f64) -> Self {
        let u = t / self.scenario.setting_strings() as f64;
        Self { scenario: self.scenario, c: self.c.iter().map(|v| v + u).collect(), label: self.label.clone() }
    }

    /// Correlator weights `w(s)` if the functional has the pure full-correlator
    /// form produced by [`from_correlators`](Self::from_correlators).
    pub fn correlator_weights(&self, tol: f64) -> Option<Vec<f64>> {
        let sc = self.scenario;
        if sc.outcomes != 2 {
            return None;
        }
        let mut w = vec![0.0; sc.setting_strings()];
        for (s, ws) in w.iter_mut().enumerate() {
            *ws = self.c[sc.index(s, 0)];
            for x in 0..sc.outcome_strings() {
                let expect = if sc.outcome_parity(x) == 0 { *ws } else { -*ws };
                if (self.c[sc.index(s, x)] - expect).abs() > tol {
                    return None;
                }
            }
        }
        Some(w)
    }
}

/// Max-norm violations of the behavior constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub normalization_defect: f64,
    pub negativity_defect: f64,
    pub signaling_defect: f64,
}

impl ValidationReport {
    pub fn max_defect(&self) -> f64 {
        self.normalization_defect.max(self.negativity_defect).max(self.signaling_defect)
    }

    pub fn is_valid(&self) -> bool {
        self.is_valid_within(BEHAVIOR_TOL)
    }

    pub fn is_valid_within(&self, tol: f64) -> bool {
        self.max_defect() <= tol
    }
}

/// Normalization, positivity and no-signaling defects.
///
/// No-signaling is checked for the joint marginal of every proper subset of
/// parties, which for two parties is the usual single-party condition.
pub fn validate(b: &Behavior) -> ValidationReport {
    let sc = b.scenario;
    let (k, m, n) = (sc.outcomes, sc.settings, sc.parties);

    let mut normalization_defect: f64 = 0.0;
    for s in 0..sc.setting_strings() {
        let total: f64 = (0..sc.outcome_strings()).map(|x| b.get(s, x)).sum();
        normalization_defect = normalization_defect.max((total - 1.0).abs());
    }
    let negativity_defect = b.p.iter().fold(0.0f64, |d, &v| d.max(-v));

    let mut signaling_defect: f64 = 0.0;
    for mask in 1..(1usize << n) - 1 {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let local_settings = m.pow(members.len() as u32);
        let local_outcomes = k.pow(members.len() as u32);
        let mut lo = vec![f64::INFINITY; local_settings * local_outcomes];
        let mut hi = vec![f64::NEG_INFINITY; local_settings * local_outcomes];
        for s in 0..sc.setting_strings() {
            let sd: Vec<usize> = members.iter().map(|&i| Scenario::digit(s, i, m)).collect();
            let base = Scenario::encode(&sd, m) * local_outcomes;
            for (xi, v) in b.marginal(mask, s).into_iter().enumerate() {
                lo[base + xi] = lo[base + xi].min(v);
                hi[base + xi] = hi[base + xi].max(v);
            }
        }
        for (l, h) in lo.iter().zip(&hi) {
            signaling_defect = signaling_defect.max(h - l);
        }
    }

    ValidationReport { normalization_defect, negativity_defect, signaling_defect }
}

/// `sum_{x,s} c(x|s) p(x|s)`.
pub fn evaluate(f: &BellFunctional, b: &Behavior) -> Result<f64> {
    if f.scenario != b.scenario {
        return Err(Error::ScenarioMismatch);
    }
    Ok(f.c.iter().zip(&b.p).map(|(c, p)| c * p).sum())
}

/// Full correlators and single-party expectations of a `(2, M, 2)` behavior.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable {
    settings: usize,
    correlators: Vec<f64>,
    alice: Vec<f64>,
    bob: Vec<f64>,
}

impl CorrelationTable {
    /// `correlators` is row-major `M x M` (Alice's setting selects the row).
    pub fn new(settings: usize, correlators: Vec<f64>, alice: Vec<f64>, bob: Vec<f64>) -> Result<Self> {
        if settings == 0 {
            return Err(Error::InvalidTable("no settings"));
        }
        if correlators.len() != settings * settings || alice.len() != settings || bob.len() != settings {
            return Err(Error::InvalidTable("shape does not match M"));
        }
        if correlators.iter().chain(&alice).chain(&bob).any(|v| !v.is_finite() || v.abs() > 1.0 + BEHAVIOR_TOL) {
            return Err(Error::InvalidTable("entries must lie in [-1, 1]"));
        }
        Ok(Self { settings, correlators, alice, bob })
    }

    /// Correlators with vanishing marginals.
    pub fn unbiased(settings: usize, correlators: Vec<f64>) -> Result<Self> {
        Self::new(settings, correlators, vec![0.0; settings], vec![0.0; settings])
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn correlator(&self, i: usize, j: usize) -> f64 {
        self.correlators[i * self.settings + j]
    }

    pub fn correlators(&self) -> &[f64] {
        &self.correlators
    }

    pub fn alice_marginals(&self) -> &[f64] {
        &self.alice
    }

    pub fn bob_marginals(&self) -> &[f64] {
        &self.bob
    }

    /// `p(x, y | i, j) = (1 + (-1)^x a_i + (-1)^y b_j + (-1)^(x+y) c_ij) / 4`.
    pub fn to_behavior(&self) -> Behavior {
        let m = self.settings;
        let sc = Scenario { parties: 2, settings: m, outcomes: 2 };
        let mut p = vec![0.0; sc.table_len()];
        for i in 0..m {
            for j in 0..m {
                let s = i + m * j;
                for x in 0..2 {
                    for y in 0..2 {
                        let (sx, sy) = (sign(x), sign(y));
                        p[sc.index(s, x + 2 * y)] =
                            0.25 * (1.0 + sx * self.alice[i] + sy * self.bob[j] + sx * sy * self.correlator(i, j));
                    }
                }
            }
        }
        Behavior { scenario: sc, p }
    }
}

fn sign(x: usize) -> f64 {
    if x.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Correlators and marginals of a `(2, M, 2)` behavior. Marginals are averaged
/// over the other party's settings.
pub fn correlation_table(b: &Behavior) -> Result<CorrelationTable> {
    let sc = b.scenario;
    if sc.parties != 2 || sc.outcomes != 2 {
        return Err(Error::WrongScenario("N = 2, K = 2"));
    }
    let m = sc.settings;
    let mut c = vec![0.0; m * m];
    let mut alice = vec![0.0; m];
    let mut bob = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            let s = i + m * j;
            for x in 0..2 {
                for y in 0..2 {
                    let p = b.get(s, x + 2 * y);
                    c[i * m + j] += sign(x + y) * p;
                    alice[i] += sign(x) * p / m as f64;
                    bob[j] += sign(y) * p / m as f64;
                }
            }
        }
    }
    Ok(CorrelationTable { settings: m, correlators: c, alice, bob })
}

/// `A1B1 + A1B2 + A2B1 - A2B2` as outcome-level coefficients.
pub fn chsh_functional() -> BellFunctional {
    // setting string s = s_A + 2 s_B
    BellFunctional::from_correlators(Scenario::chsh(), &[1.0, 1.0, 1.0, -1.0], "chsh")
        .expect("static CHSH shape")
}

/// Full-correlator Mermin expression for `N` parties with settings `A1, A2`.
///
/// Odd `N`: `Im prod_k (A1_k + i A2_k)`, e.g. `A1B1C2 + A1B2C1 + A2B1C1 - A2B2C2`
/// for `N = 3`. Even `N`: `Re + Im` of the same product (CHSH for `N = 2`).
pub fn mermin_functional(parties: usize) -> Result<BellFunctional> {
    if !(2..=8).contains(&parties) {
        return Err(Error::UnsupportedN(parties));
    }
    let sc = Scenario::new(parties, 2, 2)?;
    let weights: Vec<f64> = (0..sc.setting_strings())
        .map(|s| {
            // each party on its second setting contributes a factor i
            let k = s.count_ones() % 4;
            let (re, im) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][k as usize];
            if parties % 2 == 1 {
                im
            } else {
                re + im
            }
        })
        .collect();
    let mut label = String::from("mermin");
    label.push(char::from(b'0' + parties as u8));
    BellFunctional::from_correlators(sc, &weights, label)
}

/// Whether `p` equals the product of its single-party marginals within `1e-9`.
pub fn is_product(b: &Behavior) -> bool {
    let sc = b.scenario;
    for s in 0..sc.setting_strings() {
        let marginals: Vec<Vec<f64>> = (0..sc.parties).map(|i| b.marginal(1 << i, s)).collect();
        for x in 0..sc.outcome_strings() {
            let prod: f64 = (0..sc.parties).map(|i| marginals[i][Scenario::digit(x, i, sc.outcomes)]).product();
            if (prod - b.get(s, x)).abs() > BEHAVIOR_TOL {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn fair_coins(sc: Scenario) -> Behavior {
        let local = vec![vec![vec![1.0 / sc.outcomes() as f64; sc.outcomes()]; sc.settings()]; sc.parties()];
        Behavior::product(sc, &local).unwrap()
    }

    #[test]
    fn index_layout_is_setting_major_little_endian() {
        let sc = Scenario::new(2, 3, 2).unwrap();
        assert_eq!(sc.table_len(), 36);
        // s = (s_A = 1, s_B = 2) -> 1 + 3*2 = 7; x = (1, 0) -> 1
        assert_eq!(sc.index(Scenario::encode(&[1, 2], 3), Scenario::encode(&[1, 0], 2)), 7 * 4 + 1);
        assert_eq!(sc.decode(7, 3), vec![1, 2]);
    }

    #[test]
    fn scenario_rejects_degenerate_shapes() {
        assert!(Scenario::new(0, 2, 2).is_err());
        assert!(Scenario::new(2, 0, 2).is_err());
        assert!(Scenario::new(2, 2, 1).is_err());
        assert!(matches!(
            Behavior::new(Scenario::chsh(), vec![0.0; 3]),
            Err(Error::ShapeMismatch { expected: 16, got: 3 })
        ));
    }

    #[test]
    fn uniform_has_no_defects() {
        for sc in [Scenario::chsh(), Scenario::new(3, 2, 3).unwrap()] {
            let r = validate(&Behavior::uniform(sc));
            assert!(r.max_defect() < 1e-15);
        }
    }

    #[test]
    fn perturbed_entry_shows_in_normalization() {
        let mut b = Behavior::uniform(Scenario::chsh());
        b.p[5] += 0.1;
        let r = validate(&b);
        assert_abs_diff_eq!(r.normalization_defect, 0.1, epsilon = 1e-12);
        assert!(!r.is_valid());
    }

    #[test]
    fn pr_box_is_no_signaling() {
        let r = validate(&Behavior::pr_box());
        assert_eq!(r.signaling_defect, 0.0);
        assert!(r.is_valid());
    }

    #[test]
    fn signaling_table_is_caught() {
        // Bob's outcome copies Alice's setting
        let sc = Scenario::chsh();
        let mut p = vec![0.0; 16];
        for s in 0..4 {
            let sa = s % 2;
            p[sc.index(s, 2 * sa)] = 1.0;
        }
        let r = validate(&Behavior::new(sc, p).unwrap());
        assert_eq!(r.normalization_defect, 0.0);
        assert_abs_diff_eq!(r.signaling_defect, 1.0);
    }

    #[test]
    fn three_party_pairwise_signaling_is_caught() {
        // single-party marginals are uniform but the (B, C) pair depends on A's setting
        let sc = Scenario::new(3, 2, 2).unwrap();
        let mut p = vec![0.0; sc.table_len()];
        for s in 0..sc.setting_strings() {
            let sa = s % 2;
            for x in 0..8 {
                let (xb, xc) = ((x >> 1) & 1, (x >> 2) & 1);
                if (xb ^ xc) == sa {
                    p[sc.index(s, x)] = 0.25;
                }
            }
        }
        let r = validate(&Behavior::new(sc, p).unwrap());
        assert!(r.signaling_defect > 0.4);
    }

    #[test]
    fn chsh_anchor_values() {
        let chsh = chsh_functional();
        assert_eq!(evaluate(&chsh, &Behavior::pr_box()).unwrap(), 4.0);
        assert_eq!(evaluate(&chsh, &Behavior::uniform(Scenario::chsh())).unwrap(), 0.0);
        // deterministic: every party always answers outcome 1 (internal 0)
        let det = Behavior::product(Scenario::chsh(), &vec![vec![vec![1.0, 0.0]; 2]; 2]).unwrap();
        assert_eq!(evaluate(&chsh, &det).unwrap(), 2.0);
        let m3 = mermin_functional(3).unwrap();
        assert!(matches!(evaluate(&m3, &det), Err(Error::ScenarioMismatch)));
    }

    #[test]
    fn mermin_weights() {
        let m3 = mermin_functional(3).unwrap();
        let w = m3.correlator_weights(0.0).unwrap();
        // s = s_A + 2 s_B + 4 s_C: A1B1C2 (4), A1B2C1 (2), A2B1C1 (1), A2B2C2 (7)
        assert_eq!(w, vec![0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, -1.0]);
        let m2 = mermin_functional(2).unwrap();
        assert_eq!(m2.coefficients(), chsh_functional().coefficients());
        assert!(matches!(mermin_functional(1), Err(Error::UnsupportedN(1))));
        assert!(matches!(mermin_functional(9), Err(Error::UnsupportedN(9))));
    }

    #[test]
    fn correlation_table_of_pr_box_and_coins() {
        let t = correlation_table(&Behavior::pr_box()).unwrap();
        assert_eq!(t.correlators(), &[1.0, 1.0, 1.0, -1.0]);
        assert_eq!(t.alice_marginals(), &[0.0, 0.0]);
        assert_eq!(t.bob_marginals(), &[0.0, 0.0]);
        let coins = correlation_table(&fair_coins(Scenario::chsh())).unwrap();
        assert!(coins.correlators().iter().all(|&c| c == 0.0));
        assert!(matches!(
            correlation_table(&Behavior::uniform(Scenario::new(3, 2, 2).unwrap())),
            Err(Error::WrongScenario(_))
        ));
    }

    #[test]
    fn product_detection() {
        assert!(is_product(&fair_coins(Scenario::new(3, 2, 2).unwrap())));
        assert!(!is_product(&Behavior::pr_box()));
    }

    proptest! {
        #[test]
        fn correlators_round_trip(c in proptest::collection::vec(-1.0f64..1.0, 9)) {
            let t = CorrelationTable::unbiased(3, c.clone()).unwrap();
            let back = correlation_table(&t.to_behavior()).unwrap();
            for (a, b) in back.correlators().iter().zip(&c) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            prop_assert!(back.alice_marginals().iter().all(|a| a.abs() < 1e-12));
        }

        #[test]
        fn evaluate_is_bilinear(
            w in 0.0f64..1.0,
            c1 in proptest::collection::vec(-3.0f64..3.0, 16),
            c2 in proptest::collection::vec(-3.0f64..3.0, 16),
            k in -2.0f64..2.0,
        ) {
            let sc = Scenario::chsh();
            let f1 = BellFunctional::new(sc, c1.clone(), "f1").unwrap();
            let f2 = BellFunctional::new(sc, c2.clone(), "f2").unwrap();
            let b1 = Behavior::pr_box();
            let b2 = fair_coins(sc);
            let mix = Behavior::mixture(&[(w, &b1), (1.0 - w, &b2)]).unwrap();
            let lhs = evaluate(&f1, &mix).unwrap();
            let rhs = w * evaluate(&f1, &b1).unwrap() + (1.0 - w) * evaluate(&f1, &b2).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
            let sum: Vec<f64> = c1.iter().zip(&c2).map(|(a, b)| a + k * b).collect();
            let fs = BellFunctional::new(sc, sum, "sum").unwrap();
            let lin = evaluate(&f1, &b1).unwrap() + k * evaluate(&f2, &b1).unwrap();
            prop_assert!((evaluate(&fs, &b1).unwrap() - lin).abs() < 1e-12);
        }
    }
}
