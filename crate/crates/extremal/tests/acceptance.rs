//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};
use extremal::docs::BehaviorDoc;
use extremal_core::behavior::{chsh_functional, evaluate, mermin_functional, validate, BellFunctional, Behavior, Scenario};
use extremal_core::cert222::{
    build_certificate, cond1_residual, eta_of, ratio_scan, state_of, verify_certificate, CertificateOutcome,
    RepParams222, ScanConfig, Sign,
};
use extremal_core::csystem::{
    classify_rank_parity, complete_from_table, marginals_zero_check, rank_bounds_check, symmetric_span_check, CSystem,
    CompletionOptions, RankParity,
};
use extremal_core::lhv::{membership, vertices, Membership};
use extremal_core::numkernel::{hermitian_eig, RMatrix};
use extremal_core::qubitmodel::{behavior_of, observable, QubitRepresentation};
use extremal_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let held: bool = $cond;
        if !held {
            return Err(format!($($msg)+));
        }
    };
}

fn cli_json(args: &[&str]) -> Result<(i32, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_extremal"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    let v = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("{e}: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok((out.status.code().unwrap_or(-1), v))
}

fn field(v: &Value, key: &str) -> Result<f64, String> {
    v[key].as_f64().ok_or_else(|| format!("missing `{key}` in {v}"))
}

fn chsh_point() -> RepParams222 {
    RepParams222::new(FRAC_PI_8, Sign::Plus, FRAC_PI_2, FRAC_PI_2).expect("valid")
}

fn criterion_1() -> Outcome {
    let (_, v) = cli_json(&["bounds", "chsh"])?;
    let (c, q) = (field(&v, "classical")?, field(&v, "quantum")?);
    ensure!(c == 2.0, "classical {c} != 2");
    ensure!((q - 2.0 * SQRT_2).abs() <= 1e-6, "quantum {q}");
    Ok(format!("classical={c} quantum={q:.12}"))
}

fn criterion_2() -> Outcome {
    let pr = Behavior::pr_box();
    let value = evaluate(&chsh_functional(), &pr).map_err(|e| e.to_string())?;
    ensure!(value == 4.0, "CHSH(PR) = {value}");
    let m = membership(&pr).map_err(|e| e.to_string())?;
    ensure!(!m.is_inside(), "PR box classified inside");
    Ok(format!("CHSH(PR)={value} outside (noise ratio {:.9})", m.noise_ratio))
}

fn criterion_3() -> Outcome {
    let rep = chsh_point();
    let CertificateOutcome::Built(cert) = build_certificate(&rep).map_err(|e| e.to_string())? else {
        return Err("certificate not applicable".into());
    };
    ensure!((cert.lambda_squared - 1.0).abs() <= 1e-9, "lambda^2 = {}", cert.lambda_squared);
    let expect = [SQRT_2, -SQRT_2, SQRT_2, SQRT_2];
    let coeff_err = cert.coeffs.as_slice().iter().zip(expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure!(coeff_err <= 1e-9, "coefficient error {coeff_err}");
    ensure!((cert.bound - 4.0).abs() <= 1e-9, "bound {}", cert.bound);
    let report = verify_certificate(&cert, 1000, 42);
    ensure!(report.saturation_defect <= 1e-8, "saturation {}", report.saturation_defect);
    ensure!((cert.classical_bound - 2.0 * SQRT_2).abs() <= 1e-8, "classical {}", cert.classical_bound);
    ensure!((cert.ratio() - SQRT_2).abs() <= 1e-6, "ratio {}", cert.ratio());
    Ok(format!(
        "lambda^2={} bound={} classical={:.12} ratio={:.12} saturation={:.1e}",
        cert.lambda_squared,
        cert.bound,
        cert.classical_bound,
        cert.ratio(),
        report.saturation_defect
    ))
}

fn criterion_4() -> Outcome {
    let cfg = ScanConfig { theta_a: FRAC_PI_2, ..Default::default() };
    let rows = ratio_scan(&cfg).map_err(|e| e.to_string())?;
    ensure!(rows.len() == 2500, "{} rows", rows.len());
    let nearest = |values: Vec<f64>, target: f64| {
        values.iter().map(|v| (v - target).abs()).enumerate().min_by(|a, b| a.1.total_cmp(&b.1)).map(|(i, _)| values[i])
    };
    let nx = nearest(cfg.x_values(), FRAC_PI_8).expect("grid");
    let nt = nearest(cfg.theta_b_values(), FRAC_PI_2).expect("grid");
    let (ratio, row) = rows
        .iter()
        .filter_map(|r| r.ratio().map(|q| (q, r)))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or("no applicable point")?;
    ensure!((ratio - SQRT_2).abs() <= 1e-4, "max ratio {ratio}");
    ensure!(row.x == nx && row.theta_b == nt, "max at ({}, {}), expected ({nx}, {nt})", row.x, row.theta_b);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    let ratio_at = |x: f64, tb: f64| -> Option<f64> {
        let rep = RepParams222::new(x, Sign::Plus, FRAC_PI_2, tb).ok()?;
        match build_certificate(&rep).ok()? {
            CertificateOutcome::Built(c) => Some(c.ratio()),
            CertificateOutcome::NotApplicable { .. } => None,
        }
    };
    for _ in 0..10_000 {
        if pairs == 20 {
            break;
        }
        let (x, tb) = (rng.gen_range(0.0..FRAC_PI_4), rng.gen_range(0.0..PI));
        if let (Some(a), Some(b)) = (ratio_at(x, tb), ratio_at(x + FRAC_PI_4, tb)) {
            worst = worst.max((a - b).abs());
            pairs += 1;
        }
    }
    ensure!(pairs == 20, "only {pairs} applicable pairs");
    ensure!(worst <= 1e-6, "periodicity defect {worst}");
    Ok(format!("max ratio {ratio:.12} at ({nx:.6}, {nt:.6}); periodicity defect {worst:.1e} over {pairs} pairs"))
}

fn criterion_5() -> Outcome {
    let cfg = ScanConfig { x_steps: 30, theta_b_steps: 30, ..Default::default() };
    let rows = ratio_scan(&cfg).map_err(|e| e.to_string())?;
    let mut checked = 0;
    let (mut ann, mut diag, mut pos, mut sat): (f64, f64, f64, f64) = (0.0, 0.0, f64::INFINITY, 0.0);
    for row in &rows {
        let Some(cert) = &row.certificate else { continue };
        let r = verify_certificate(cert, 1000, 42);
        ann = ann.max(r.annihilation[0]).max(r.annihilation[1]);
        diag = diag.max(r.alpha_diagonality).max(r.beta_diagonality);
        pos = pos.min(r.min_sampled).min(r.min_eigenvalue);
        sat = sat.max(r.saturation_defect);
        ensure!(
            r.annihilates() && r.diagonal() && r.min_sampled >= -1e-8 && r.saturated(),
            "failed at x={} theta_B={}: {r:?}",
            row.x,
            row.theta_b
        );
        checked += 1;
    }
    ensure!(checked > 0, "no applicable points");
    Ok(format!(
        "{checked} applicable points: max annihilation {ann:.1e}, max diagonality {diag:.1e}, min T {pos:.1e}, max saturation {sat:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut orth: f64 = 0.0;
    let mut cond: f64 = 0.0;
    for k in 0..1000 {
        let x = PI * k as f64 / 1000.0;
        for sign in [Sign::Plus, Sign::Minus] {
            let psi = state_of(x, sign);
            let eta = eta_of(&psi).map_err(|e| e.to_string())?;
            let eet = eta.matmul(&eta.transpose()).map_err(|e| e.to_string())?;
            orth = orth.max(eet.sub(&RMatrix::identity(2)).map_err(|e| e.to_string())?.max_abs());
            cond = cond.max(cond1_residual(&psi, &eta));
        }
    }
    ensure!(orth <= 1e-9 && cond <= 1e-9, "orthogonality {orth}, residual {cond}");
    Ok(format!("2000 states: |eta eta^T - 1| <= {orth:.1e}, residual <= {cond:.1e}"))
}

fn mermin3_terms() -> [([usize; 3], f64); 4] {
    [([0, 0, 1], 1.0), ([0, 1, 0], 1.0), ([1, 0, 0], 1.0), ([1, 1, 1], -1.0)]
}

fn criterion_7() -> Outcome {
    let (_, v) = cli_json(&["bounds", "mermin3"])?;
    let (c, q, gap) = (field(&v, "classical")?, field(&v, "quantum")?, field(&v, "eigen_gap")?);

    // oracle 1: all 64 deterministic assignments of the correlator form
    let mut vertex_max = f64::NEG_INFINITY;
    for bits in 0..64u32 {
        let val = |party: usize, setting: usize| if bits >> (2 * party + setting) & 1 == 0 { 1.0 } else { -1.0 };
        let total: f64 = mermin3_terms().iter().map(|(s, w)| w * val(0, s[0]) * val(1, s[1]) * val(2, s[2])).sum();
        vertex_max = vertex_max.max(total);
    }
    // oracle 2: 2-degree grid, operator assembled from Kronecker products
    let mut grid_max = f64::NEG_INFINITY;
    let deg = |d: u32| d as f64 * PI / 180.0;
    let obs: Vec<[RMatrix; 2]> = (0..=90).map(|d| [observable(0.0), observable(deg(2 * d))]).collect();
    for a in &obs {
        for b in &obs {
            for cc in &obs {
                let op = mermin3_terms().iter().fold(RMatrix::zeros(8, 8), |acc, (s, w)| {
                    acc.add(&a[s[0]].kron(&b[s[1]]).kron(&cc[s[2]]).scaled(*w)).expect("8x8")
                });
                let top = *hermitian_eig(&op).expect("symmetric").eigenvalues.last().expect("nonempty");
                grid_max = grid_max.max(top);
            }
        }
    }
    ensure!(c == 2.0 && c == vertex_max, "classical {c}, oracle {vertex_max}");
    ensure!((q - 4.0).abs() <= 1e-6 && (q - grid_max).abs() <= 1e-6, "quantum {q}, oracle {grid_max}");
    ensure!(gap > 1e-6, "eigen gap {gap}");

    // classification of the maximizing behavior through the CLI
    let angles: Vec<f64> = v["angles"].as_array().ok_or("angles")?.iter().filter_map(Value::as_f64).collect();
    let f = mermin_functional(3).map_err(|e| e.to_string())?;
    let op = extremal_core::qubitmodel::bell_operator(&f, &angles).map_err(|e| e.to_string())?;
    let top = extremal_core::numkernel::top_eigenpair(&op).map_err(|e| e.to_string())?;
    let state: Vec<f64> = top.vector;
    let rep = QubitRepresentation::from_real(angles, &state).map_err(|e| e.to_string())?;
    let b = behavior_of(&rep);
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let path = dir.path().join("mermin3.json");
    std::fs::write(&path, serde_json::to_string(&BehaviorDoc::from(&b)).expect("json")).map_err(|e| e.to_string())?;
    let (_, cls) = cli_json(&["classify", path.to_str().expect("utf-8")])?;
    ensure!(cls["class"] == "AlgebraicallySecureCandidate", "classified {}", cls);
    Ok(format!("classical={c} quantum={q:.12} (grid oracle {grid_max:.12}) gap={gap:.6} class={}", cls["class"]))
}

fn criterion_8() -> Outcome {
    let rep = chsh_point();
    let cs = CSystem::from_real_representation(&[0.0, FRAC_PI_2], &[0.0, FRAC_PI_2], &rep.state()).map_err(|e| e.to_string())?;
    ensure!(cs.rank() == 2, "rank {}", cs.rank());
    let bounds = rank_bounds_check(cs.rank(), cs.settings());
    ensure!(bounds.all(), "rank bounds {bounds:?}");
    ensure!(symmetric_span_check(&cs) == Ok(true), "symmetric span fails");
    let zero = marginals_zero_check(&rep.behavior(), 1e-10).map_err(|e| e.to_string())?;
    ensure!(zero, "marginals nonzero");
    let parity = classify_rank_parity(&cs, zero).map_err(|e| e.to_string())?;
    ensure!(parity == RankParity::AlgebraicallySecure, "parity {parity:?}");
    match complete_from_table(2, &[1.0, 1.0, 1.0, -1.0], &CompletionOptions::default()) {
        Err(Error::DidNotConverge { defect, .. }) if defect > 1e-3 => {
            Ok(format!("rank 2, bounds {bounds:?}, AlgebraicallySecure; PR completion defect {defect:.4}"))
        }
        other => Err(format!("PR-box completion: {other:?}")),
    }
}

fn random_mixture(rng: &mut ChaCha8Rng, sc: Scenario) -> Behavior {
    let verts: Vec<Behavior> = vertices(sc).expect("small").map(|v| v.behavior()).collect();
    let k = rng.gen_range(1..=6);
    let mut parts = Vec::new();
    for _ in 0..k {
        parts.push((rng.gen_range(0.05..1.0), &verts[rng.gen_range(0..verts.len())]));
    }
    let total: f64 = parts.iter().map(|p| p.0).sum();
    let parts: Vec<(f64, &Behavior)> = parts.into_iter().map(|(w, b)| (w / total, b)).collect();
    Behavior::mixture(&parts).expect("same scenario")
}

fn chsh_variants() -> Vec<BellFunctional> {
    (0..4)
        .map(|k| {
            let mut w = [1.0; 4];
            w[k] = -1.0;
            BellFunctional::from_correlators(Scenario::chsh(), &w, "chsh variant").expect("shape")
        })
        .collect()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let sc = if i % 2 == 0 { Scenario::chsh() } else { Scenario::new(3, 2, 2).expect("valid") };
        let b = random_mixture(&mut rng, sc);
        let m = membership(&b).map_err(|e| e.to_string())?;
        let Membership::Inside { weights, .. } = &m.membership else {
            return Err(format!("mixture {i} classified outside"));
        };
        let mut recon = vec![0.0; sc.table_len()];
        for (v, w) in vertices(sc).expect("small").zip(weights) {
            ensure!(*w >= -1e-12, "negative weight {w}");
            for (r, p) in recon.iter_mut().zip(v.behavior().probabilities()) {
                *r += w * p;
            }
        }
        let err = recon.iter().zip(b.probabilities()).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
        ensure!(err <= 1e-8, "reconstruction error {err} for mixture {i}");
    }

    let variants = chsh_variants();
    let mut found = 0;
    let mut min_ratio = f64::INFINITY;
    for _ in 0..100_000 {
        if found == 20 {
            break;
        }
        let angles = vec![rng.gen_range(0.0..=PI), rng.gen_range(0.0..=PI)];
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        let psi: Vec<f64> = v.iter().map(|c| c / n).collect();
        let b = behavior_of(&QubitRepresentation::from_real(angles, &psi).map_err(|e| e.to_string())?);
        let violation = variants.iter().map(|f| evaluate(f, &b).expect("shape")).fold(f64::NEG_INFINITY, f64::max);
        if violation <= 2.0 + 1e-3 {
            continue;
        }
        ensure!(validate(&b).is_valid(), "quantum behavior invalid");
        let m = membership(&b).map_err(|e| e.to_string())?;
        let Membership::Outside { separating, value, .. } = &m.membership else {
            return Err(format!("CHSH value {violation} classified inside"));
        };
        let vmax = vertices(Scenario::chsh()).expect("small").map(|v| v.value(separating)).fold(f64::NEG_INFINITY, f64::max);
        let on_b = evaluate(separating, &b).expect("shape");
        ensure!(vmax <= 1.0 + 1e-9 && on_b > 1.0 + 1e-9, "witness fails: vertex max {vmax}, value {on_b}");
        ensure!((on_b - value).abs() <= 1e-8, "reported value {value} vs {on_b}");
        min_ratio = min_ratio.min(on_b);
        found += 1;
    }
    ensure!(found == 20, "only {found} violating behaviors sampled");
    Ok(format!("200 mixtures inside (max error {worst:.1e}); 20 violating behaviors outside (min witness value {min_ratio:.6})"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "CHSH bounds", criterion_1, Duration::from_secs(10)),
        (2, "PR-box anchor", criterion_2, Duration::from_secs(1)),
        (3, "certificate at the CHSH point", criterion_3, Duration::from_secs(5)),
        (4, "ratio scan", criterion_4, Duration::from_secs(60)),
        (5, "certificate property suite", criterion_5, Duration::from_secs(300)),
        (6, "eta properties", criterion_6, Duration::from_secs(10)),
        (7, "Mermin-3 bounds and classification", criterion_7, Duration::from_secs(300)),
        (8, "c-system rank analysis", criterion_8, Duration::from_secs(30)),
        (9, "LHV round trip", criterion_9, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?} > {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {id} ({name}): PASS [{elapsed:.2?}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL [{elapsed:.2?}] {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
