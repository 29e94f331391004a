//! The classical polytope: deterministic vertices, classical maxima and
//! LP membership.

mod simplex;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::behavior::{evaluate, validate, BellFunctional, Behavior, Scenario};
use crate::{Error, Result, BEHAVIOR_TOL};

/// Default cap on `(K^M)^N` for enumeration.
pub const DEFAULT_VERTEX_CAP: u128 = 1_000_000;
/// Cap on the vertex count accepted by the dense-tableau membership LP.
pub const MEMBERSHIP_VERTEX_CAP: u128 = 4096;
const MAX_PIVOTS: usize = 200_000;
/// Membership decision threshold on the white-noise ratio.
const INSIDE_TOL: f64 = 1e-8;

/// One outcome per `(party, setting)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicVertex {
    scenario: Scenario,
    index: usize,
    /// `outcomes[party * M + setting]`
    outcomes: Vec<usize>,
}

impl DeterministicVertex {
    fn from_index(scenario: Scenario, index: usize) -> Self {
        let (m, k) = (scenario.settings(), scenario.outcomes());
        let per_party = k.pow(m as u32);
        let mut outcomes = Vec::with_capacity(scenario.parties() * m);
        for party in 0..scenario.parties() {
            let local = Scenario::digit(index, party, per_party);
            for s in 0..m {
                outcomes.push(Scenario::digit(local, s, k));
            }
        }
        Self { scenario, index, outcomes }
    }

    /// Position in the enumeration order of [`vertices`].
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn outcome(&self, party: usize, setting: usize) -> usize {
        self.outcomes[party * self.scenario.settings() + setting]
    }

    /// Outcome string produced under the setting string `s`.
    pub fn outcome_string(&self, s: usize) -> usize {
        let sc = self.scenario;
        (0..sc.parties())
            .rev()
            .fold(0, |acc, i| acc * sc.outcomes() + self.outcome(i, Scenario::digit(s, i, sc.settings())))
    }

    pub fn behavior(&self) -> Behavior {
        let sc = self.scenario;
        let mut p = vec![0.0; sc.table_len()];
        for s in 0..sc.setting_strings() {
            p[sc.index(s, self.outcome_string(s))] = 1.0;
        }
        Behavior::new(sc, p).expect("vertex table has scenario shape")
    }

    /// `evaluate(f, self.behavior())` without materializing the table.
    pub fn value(&self, f: &BellFunctional) -> f64 {
        let sc = self.scenario;
        let c = f.coefficients();
        (0..sc.setting_strings()).map(|s| c[sc.index(s, self.outcome_string(s))]).sum()
    }
}

/// Enumeration of all deterministic vertices in index order.
#[derive(Debug, Clone)]
pub struct Vertices {
    scenario: Scenario,
    next: usize,
    total: usize,
}

impl Iterator for Vertices {
    type Item = DeterministicVertex;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let v = DeterministicVertex::from_index(self.scenario, self.next);
        self.next += 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Vertices {}

/// `(K^M)^N`.
pub fn vertex_count(sc: Scenario) -> u128 {
    (sc.outcomes() as u128)
        .checked_pow(sc.settings() as u32)
        .and_then(|v| v.checked_pow(sc.parties() as u32))
        .unwrap_or(u128::MAX)
}

pub fn vertices(sc: Scenario) -> Result<Vertices> {
    vertices_with_cap(sc, DEFAULT_VERTEX_CAP)
}

pub fn vertices_with_cap(sc: Scenario, cap: u128) -> Result<Vertices> {
    let count = vertex_count(sc);
    if count > cap {
        return Err(Error::TooLarge { count, cap });
    }
    Ok(Vertices { scenario: sc, next: 0, total: count as usize })
}

/// Exact maximum of `f` over the classical polytope; the first maximizing
/// vertex in enumeration order is returned.
pub fn classical_max(f: &BellFunctional) -> Result<(f64, DeterministicVertex)> {
    let mut best: Option<(f64, DeterministicVertex)> = None;
    for v in vertices(f.scenario())? {
        let val = v.value(f);
        if best.as_ref().is_none_or(|(b, _)| val > *b) {
            best = Some((val, v));
        }
    }
    Ok(best.expect("at least one vertex"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Inside {
        /// Convex weights, one per vertex in enumeration order.
        weights: Vec<f64>,
        /// `max |sum_v w_v D_v - p|`.
        residual: f64,
    },
    Outside {
        /// Bell functional with classical maximum exactly 1.
        separating: BellFunctional,
        classical_bound: f64,
        /// Value of `separating` on the tested behavior.
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipResult {
    /// Smallest `r` with `p = (1 - r) U + r q`, `q` classical, `U` uniform.
    /// `r <= 1` exactly when the behavior is classical.
    pub noise_ratio: f64,
    pub membership: Membership,
}

impl MembershipResult {
    pub fn is_inside(&self) -> bool {
        matches!(self.membership, Membership::Inside { .. })
    }
}

/// Decides whether `b` admits a local hidden variable model.
///
/// Solves `min sum_v mu_v` subject to `sum_v mu_v (D_v - U) = p - U`,
/// `mu >= 0`. The optimum `r` is the white-noise ratio: `b` is classical iff
/// `r <= 1`, in which case `w = mu + (1 - r)/V` are convex weights. Otherwise
/// the LP duals give a Bell functional which, shifted to vanish on `U` and
/// rescaled to classical bound 1, evaluates to `r` on `b`.
pub fn membership(b: &Behavior) -> Result<MembershipResult> {
    let sc = b.scenario();
    let report = validate(b);
    if !report.is_valid() {
        return Err(Error::InvalidBehavior(report.max_defect()));
    }
    let count = vertex_count(sc);
    if count > MEMBERSHIP_VERTEX_CAP {
        return Err(Error::TooLarge { count, cap: MEMBERSHIP_VERTEX_CAP });
    }
    let uniform = Behavior::uniform(sc);
    let u = uniform.probabilities();
    let p = b.probabilities();

    let verts: Vec<DeterministicVertex> = vertices(sc)?.collect();
    let n_vert = verts.len();
    let columns: Vec<Vec<f64>> = verts
        .iter()
        .map(|v| {
            let d = v.behavior();
            d.probabilities().iter().zip(u).map(|(a, b)| a - b).collect()
        })
        .collect();
    let rhs: Vec<f64> = p.iter().zip(u).map(|(a, b)| a - b).collect();
    let cost = vec![1.0; n_vert];

    let sol = simplex::solve(&columns, &rhs, &cost, MAX_PIVOTS).map_err(|e| match e {
        simplex::LpFailure::Stall(n) => Error::LpStall(n),
        simplex::LpFailure::Infeasible(d) => Error::InvalidBehavior(d),
        simplex::LpFailure::Unbounded => Error::LpStall(0),
    })?;
    let ratio = sol.objective;

    if ratio <= 1.0 + INSIDE_TOL {
        let share = (1.0 - ratio).max(0.0) / n_vert as f64;
        let mut weights: Vec<f64> = sol.x.iter().map(|mu| mu + share).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let mut recon = vec![0.0; p.len()];
        for (v, &w) in verts.iter().zip(&weights) {
            if w != 0.0 {
                for s in 0..sc.setting_strings() {
                    recon[sc.index(s, v.outcome_string(s))] += w;
                }
            }
        }
        let residual = recon.iter().zip(p).fold(0.0f64, |d, (a, b)| d.max((a - b).abs()));
        return Ok(MembershipResult { noise_ratio: ratio, membership: Membership::Inside { weights, residual } });
    }

    let raw = BellFunctional::new(sc, sol.duals, "separating")?;
    let on_uniform = evaluate(&raw, &uniform)?;
    let centered = raw.shifted(-on_uniform);
    let (bound, _) = classical_max(&centered)?;
    if bound <= BEHAVIOR_TOL {
        // a valid dual always attains 1 on some vertex; anything else is numerical breakdown
        return Err(Error::LpStall(0));
    }
    let separating = centered.scaled(1.0 / bound).with_label(format!("separating (r = {ratio:.9})"));
    let (classical_bound, _) = classical_max(&separating)?;
    let value = evaluate(&separating, b)?;
    Ok(MembershipResult {
        noise_ratio: ratio,
        membership: Membership::Outside { separating, classical_bound, value },
    })
}
