use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use extremal_core::behavior::{
    chsh_functional, correlation_table, evaluate, mermin_functional, validate, Behavior, BellFunctional, Scenario,
};
use extremal_core::cert222::{
    build_certificate, fit_representations, ratio_scan, state_of, verify_certificate, CertificateOutcome,
    RepParams222, ScanConfig, Sign, VerificationReport, DEFAULT_SAMPLES,
};
use extremal_core::csystem::{
    classify_rank_parity, complete_from_table, marginals_zero_check, rank_bounds_check, symmetric_span_check, CSystem,
    CompletionOptions,
};
use extremal_core::lhv::{classical_max, membership, Membership, MembershipResult};
use extremal_core::numkernel::RMatrix;
use extremal_core::qubitmodel::{
    classify, observable, quantum_max, Evidence, MaxOptions, MaximizationResult, SecurityClass, TsirelsonEvidence,
};
use extremal_core::{Error, BEHAVIOR_TOL};

use crate::angle::{parse_angle, parse_angle_list};
use crate::docs::{read_json, BehaviorDoc, CorrelationDoc, FunctionalDoc};
use crate::format::{num, scan_csv};

#[derive(Debug, Parser)]
#[command(name = "extremal", version, about = "Classify Bell-scenario correlations: LHV membership, quantum bounds, extremality certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Tolerance override (behavior checks, c-system completion).
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tol: Option<f64>,
    /// Grid steps per axis (quantum maximization, scan).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub grid: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check normalization, positivity and no-signaling of a behavior file.
    Validate { path: PathBuf },
    /// Decide whether a behavior has a local hidden variable model.
    Lhv { path: PathBuf },
    /// Classical and quantum maxima of a functional (chsh, mermin3, mermin5 or a JSON file).
    Bounds { functional: String },
    /// Build and verify the (2,2,2) Tsirelson certificate for `x sign theta_A theta_B`.
    Certify222 {
        #[arg(allow_hyphen_values = true)]
        x: String,
        sign: SignArg,
        #[arg(allow_hyphen_values = true)]
        theta_a: String,
        #[arg(allow_hyphen_values = true)]
        theta_b: String,
    },
    /// Quantum/classical ratio of the certificate over x in [0, pi/4), theta_B in [0, pi).
    Scan {
        #[arg(long, default_value = "pi/2", allow_hyphen_values = true)]
        theta_a: String,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
    },
    /// Rank analysis of a c-system from a correlation table or a two-qubit representation.
    Csystem(CsystemArgs),
    /// Combine all available evidence into a security label.
    Classify { path: PathBuf },
}

#[derive(Debug, Clone, Args)]
pub struct CsystemArgs {
    /// Correlation-table JSON document.
    #[arg(long, conflicts_with_all = ["alice", "bob", "state_x"])]
    pub table: Option<PathBuf>,
    /// Alice's observable angles, comma separated.
    #[arg(long, allow_hyphen_values = true, requires = "bob")]
    pub alice: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "alice")]
    pub bob: Option<String>,
    /// State parameter x of phi_x.
    #[arg(long, default_value = "pi/8", allow_hyphen_values = true)]
    pub state_x: String,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(alias = "+")]
    Plus,
    #[value(alias = "-")]
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// Exit status: 0 affirmative, 1 negative or inconclusive, 2 usage or input error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub struct Output {
    pub code: i32,
    pub body: String,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_USAGE, error: e.into() }
}

fn finding(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_NEGATIVE, error: e.into() }
}

type CmdResult = Result<Output, Failure>;

struct Ctx {
    global: GlobalOpts,
    format: Format,
}

impl Ctx {
    fn emit(&self, code: i32, text: String, value: Value) -> CmdResult {
        let body = match self.format {
            Format::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
            _ => text,
        };
        Ok(Output { code, body })
    }

    fn max_options(&self) -> MaxOptions {
        MaxOptions { grid_steps: self.global.grid.map(|g| g as usize), seed: self.global.seed, ..Default::default() }
    }
}

pub fn run(cli: Cli) -> CmdResult {
    let format = match (&cli.command, cli.global.format) {
        (Command::Scan { .. }, None) => Format::Csv,
        (_, None) => Format::Text,
        (Command::Scan { .. }, Some(f)) => f,
        (_, Some(Format::Csv)) => return Err(usage(anyhow!("csv output is only available for `scan`"))),
        (_, Some(f)) => f,
    };
    let ctx = Ctx { global: cli.global, format };
    match cli.command {
        Command::Validate { path } => cmd_validate(&ctx, &path),
        Command::Lhv { path } => cmd_lhv(&ctx, &path),
        Command::Bounds { functional } => cmd_bounds(&ctx, &functional),
        Command::Certify222 { x, sign, theta_a, theta_b } => cmd_certify222(&ctx, &x, sign.into(), &theta_a, &theta_b),
        Command::Scan { theta_a, sign } => cmd_scan(&ctx, &theta_a, sign.into()),
        Command::Csystem(args) => cmd_csystem(&ctx, &args),
        Command::Classify { path } => cmd_classify(&ctx, &path),
    }
}

fn load_behavior(path: &std::path::Path) -> Result<Behavior, Failure> {
    read_json::<BehaviorDoc>(path).and_then(|d| d.to_behavior()).map_err(usage)
}

fn cmd_validate(ctx: &Ctx, path: &std::path::Path) -> CmdResult {
    let b = load_behavior(path)?;
    let r = validate(&b);
    let tol = ctx.global.tol.unwrap_or(BEHAVIOR_TOL);
    let valid = r.is_valid_within(tol);
    let text = format!(
        "{}\nnormalization_defect={}\nnegativity_defect={}\nsignaling_defect={}\n",
        if valid { "valid" } else { "invalid" },
        num(r.normalization_defect),
        num(r.negativity_defect),
        num(r.signaling_defect)
    );
    let value = json!({
        "valid": valid,
        "tolerance": tol,
        "normalization_defect": r.normalization_defect,
        "negativity_defect": r.negativity_defect,
        "signaling_defect": r.signaling_defect,
    });
    ctx.emit(if valid { EXIT_OK } else { EXIT_NEGATIVE }, text, value)
}

fn run_membership(b: &Behavior) -> Result<MembershipResult, Failure> {
    membership(b).map_err(|e| match e {
        Error::InvalidBehavior(_) => usage(anyhow!("{e}")),
        other => finding(anyhow!("{other}")),
    })
}

fn functional_lines(f: &BellFunctional, out: &mut String) {
    let sc = f.scenario();
    for s in 0..sc.setting_strings() {
        let settings: Vec<String> = sc.decode(s, sc.settings()).iter().map(|d| (d + 1).to_string()).collect();
        let coeffs: Vec<String> = (0..sc.outcome_strings()).map(|x| num(f.coefficients()[sc.index(s, x)])).collect();
        let _ = writeln!(out, "  s=({}) c=[{}]", settings.join(","), coeffs.join(", "));
    }
}

fn cmd_lhv(ctx: &Ctx, path: &std::path::Path) -> CmdResult {
    let b = load_behavior(path)?;
    let m = run_membership(&b)?;
    let verts: Vec<_> = extremal_core::lhv::vertices(b.scenario()).map_err(finding)?.collect();
    let mut text = String::new();
    match &m.membership {
        Membership::Inside { weights, residual } => {
            let _ = writeln!(text, "inside\nnoise_ratio={}\nresidual={}", num(m.noise_ratio), num(*residual));
            let _ = writeln!(text, "weights (deterministic assignments, outcomes 1-based per party and setting):");
            let mut listed = Vec::new();
            for (v, &w) in verts.iter().zip(weights) {
                if w > 1e-12 {
                    let outs: Vec<String> = (0..b.scenario().parties())
                        .map(|i| (0..b.scenario().settings()).map(|s| (v.outcome(i, s) + 1).to_string()).collect::<String>())
                        .collect();
                    let _ = writeln!(text, "  vertex {} [{}] w={}", v.index(), outs.join(" "), num(w));
                    listed.push(json!({"vertex": v.index(), "weight": w}));
                }
            }
            let value = json!({
                "inside": true,
                "noise_ratio": m.noise_ratio,
                "residual": residual,
                "weights": listed,
            });
            ctx.emit(EXIT_OK, text, value)
        }
        Membership::Outside { separating, classical_bound, value } => {
            let vertex_max = verts.iter().map(|v| v.value(separating)).fold(f64::NEG_INFINITY, f64::max);
            let _ = writeln!(
                text,
                "outside\nwitness_ratio={}\nclassical_bound={}\nvertex_max={}\nseparating functional c(x|s), outcomes in mixed-radix order:",
                num(*value),
                num(*classical_bound),
                num(vertex_max)
            );
            functional_lines(separating, &mut text);
            let json_value = json!({
                "inside": false,
                "noise_ratio": m.noise_ratio,
                "witness_ratio": value,
                "classical_bound": classical_bound,
                "vertex_max": vertex_max,
                "separating": FunctionalDoc::from(separating),
            });
            ctx.emit(EXIT_NEGATIVE, text, json_value)
        }
    }
}

pub fn builtin_functional(name: &str) -> Option<BellFunctional> {
    match name {
        "chsh" => Some(chsh_functional()),
        "mermin3" => mermin_functional(3).ok(),
        "mermin5" => mermin_functional(5).ok(),
        _ => None,
    }
}

fn cmd_bounds(ctx: &Ctx, name: &str) -> CmdResult {
    let f = match builtin_functional(name) {
        Some(f) => f,
        None => read_json::<FunctionalDoc>(std::path::Path::new(name)).and_then(|d| d.to_functional()).map_err(usage)?,
    };
    let (classical, vertex) = classical_max(&f).map_err(finding)?;
    let sc = f.scenario();
    let quantum = if sc.settings() == 2 && sc.outcomes() == 2 {
        Some(quantum_max(&f, &ctx.max_options()).map_err(finding)?)
    } else {
        None
    };
    let ratio = quantum.as_ref().filter(|_| classical > 0.0).map(|q| q.value / classical);

    let mut text = format!("functional={}\nclassical={}\nclassical_vertex={}\n", f.label(), num(classical), vertex.index());
    match &quantum {
        Some(q) => {
            let _ = writeln!(text, "quantum={}", num(q.value));
            let _ = writeln!(text, "ratio={}", ratio.map(num).unwrap_or_else(|| "undefined".into()));
            let _ = writeln!(text, "angles=[{}]", q.best.angles().iter().map(|a| num(*a)).collect::<Vec<_>>().join(", "));
            let _ = writeln!(text, "eigen_gap={}\nangle_optima={}\nunique={}", num(q.eigen_gap), q.angle_optima.len(), q.unique_flag);
            let _ = writeln!(text, "grid_steps={}", q.grid_steps);
        }
        None => text.push_str("quantum=unavailable (qubit model needs M = K = 2)\n"),
    }
    let value = json!({
        "functional": f.label(),
        "classical": classical,
        "classical_vertex": vertex.index(),
        "quantum": quantum.as_ref().map(|q| q.value),
        "ratio": ratio,
        "angles": quantum.as_ref().map(|q| q.best.angles().to_vec()),
        "eigen_gap": quantum.as_ref().map(|q| q.eigen_gap),
        "angle_optima": quantum.as_ref().map(|q| q.angle_optima.iter().map(|o| o.angles.clone()).collect::<Vec<_>>()),
        "unique": quantum.as_ref().map(|q| q.unique_flag),
    });
    ctx.emit(EXIT_OK, text, value)
}

fn matrix_text(m: &RMatrix) -> String {
    format!("[[{}, {}], [{}, {}]]", num(m[(0, 0)]), num(m[(0, 1)]), num(m[(1, 0)]), num(m[(1, 1)]))
}

fn matrix_json(m: &RMatrix) -> Value {
    json!([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]])
}

/// Whether `coeffs` is a multiple of a CHSH expression: equal magnitudes and
/// an odd number of negative entries.
fn chsh_equivalent(coeffs: &RMatrix) -> bool {
    let v = coeffs.as_slice();
    let mag = v[0].abs();
    mag > 1e-9 && v.iter().all(|c| (c.abs() - mag).abs() <= 1e-9 * mag.max(1.0)) && v.iter().filter(|c| **c < 0.0).count() % 2 == 1
}

fn report_json(r: &VerificationReport) -> Value {
    json!({
        "passed": r.passed(),
        "annihilation": r.annihilation,
        "alpha_diagonality": r.alpha_diagonality,
        "beta_diagonality": r.beta_diagonality,
        "value": r.value,
        "saturation_defect": r.saturation_defect,
        "min_eigenvalue": r.min_eigenvalue,
        "min_sampled": r.min_sampled,
        "sample_mismatch": r.sample_mismatch,
        "samples": r.samples,
    })
}

fn cmd_certify222(ctx: &Ctx, x: &str, sign: Sign, theta_a: &str, theta_b: &str) -> CmdResult {
    let (x, ta, tb) = (parse_angle(x).map_err(usage)?, parse_angle(theta_a).map_err(usage)?, parse_angle(theta_b).map_err(usage)?);
    let rep = RepParams222::new(x, sign, ta, tb).map_err(|e| usage(anyhow!("{e}")))?;
    let outcome = build_certificate(&rep).map_err(|e| finding(anyhow!("{e}")))?;
    let cert = match outcome {
        CertificateOutcome::NotApplicable { lambda_squared, boundary } => {
            let note = if boundary { " (boundary)" } else { "" };
            let text = format!("not applicable{note}\nlambda_squared={}\n", num(lambda_squared));
            let value = json!({"applicable": false, "lambda_squared": lambda_squared, "boundary": boundary});
            return ctx.emit(EXIT_NEGATIVE, text, value);
        }
        CertificateOutcome::Built(c) => c,
    };
    let report = verify_certificate(&cert, DEFAULT_SAMPLES, ctx.global.seed);
    let chsh = chsh_equivalent(&cert.coeffs);
    let mut text = String::new();
    let _ = writeln!(text, "certificate for x={} sign={} theta_A={} theta_B={}", num(x), sign.as_str(), num(ta), num(tb));
    let _ = writeln!(text, "lambda_squared={}", num(cert.lambda_squared));
    let _ = writeln!(text, "gamma={}\nalpha={}\nbeta={}", matrix_text(&cert.gamma), matrix_text(&cert.alpha), matrix_text(&cert.beta));
    let _ = writeln!(text, "coefficients={}", matrix_text(&cert.coeffs));
    let _ = writeln!(text, "bound={}\nclassical_bound={}\nratio={}", num(cert.bound), num(cert.classical_bound), num(cert.ratio()));
    if chsh {
        text.push_str("note: CHSH-equivalent inequality\n");
    }
    let _ = writeln!(text, "annihilation_residuals=[{}, {}]", num(report.annihilation[0]), num(report.annihilation[1]));
    let _ = writeln!(text, "alpha_diagonality={}\nbeta_diagonality={}", num(report.alpha_diagonality), num(report.beta_diagonality));
    let _ = writeln!(text, "saturation_defect={}", num(report.saturation_defect));
    let _ = writeln!(text, "min_eigenvalue_T={}", num(report.min_eigenvalue));
    let _ = writeln!(text, "min_sampled_T={} over {} samples", num(report.min_sampled), report.samples);
    let _ = writeln!(text, "sample_mismatch={}", num(report.sample_mismatch));
    let _ = writeln!(text, "nontrivial={}\nverified={}", report.nontrivial(), report.passed());
    let value = json!({
        "applicable": true,
        "x": x, "sign": sign.as_str(), "theta_A": ta, "theta_B": tb,
        "lambda_squared": cert.lambda_squared,
        "gamma": matrix_json(&cert.gamma),
        "alpha": matrix_json(&cert.alpha),
        "beta": matrix_json(&cert.beta),
        "coefficients": matrix_json(&cert.coeffs),
        "bound": cert.bound,
        "classical_bound": cert.classical_bound,
        "ratio": cert.ratio(),
        "chsh_equivalent": chsh,
        "verification": report_json(&report),
    });
    ctx.emit(if report.passed() { EXIT_OK } else { EXIT_NEGATIVE }, text, value)
}

fn cmd_scan(ctx: &Ctx, theta_a: &str, sign: Sign) -> CmdResult {
    let theta_a = parse_angle(theta_a).map_err(usage)?;
    let steps = ctx.global.grid.map(|g| g as usize).unwrap_or(50);
    let cfg = ScanConfig { theta_a, sign, x_steps: steps, theta_b_steps: steps, ..Default::default() };
    let rows = ratio_scan(&cfg).map_err(|e| usage(anyhow!("{e}")))?;
    let peak = rows.iter().filter_map(|r| r.ratio().map(|q| (q, r))).max_by(|a, b| a.0.total_cmp(&b.0));
    let applicable = rows.iter().filter(|r| r.applicable()).count();
    let body = match ctx.format {
        Format::Csv => scan_csv(&rows),
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "x": r.x, "theta_B": r.theta_b, "applicable": r.applicable(),
                        "quantum_bound": r.quantum_bound(), "classical_max": r.classical_max(), "ratio": r.ratio(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({"theta_A": theta_a, "sign": sign.as_str(), "rows": list})).expect("json") + "\n"
        }
        Format::Text => {
            let mut t = format!("theta_A={}\nsign={}\ngrid={steps}x{steps}\napplicable={applicable}\n", num(theta_a), sign.as_str());
            if let Some((q, r)) = peak {
                let _ = writeln!(t, "peak_ratio={} at x={} theta_B={}", num(q), num(r.x), num(r.theta_b));
            }
            t
        }
    };
    Ok(Output { code: if applicable > 0 { EXIT_OK } else { EXIT_NEGATIVE }, body })
}

fn representation_system(args: &CsystemArgs) -> Result<(CSystem, Vec<f64>), Failure> {
    let alice = parse_angle_list(args.alice.as_deref().unwrap_or("0,pi/2")).map_err(usage)?;
    let bob = parse_angle_list(args.bob.as_deref().unwrap_or("0,pi/2")).map_err(usage)?;
    let x = parse_angle(&args.state_x).map_err(usage)?;
    let psi = state_of(x, args.sign.into());
    let cs = CSystem::from_real_representation(&alice, &bob, &psi).map_err(|e| usage(anyhow!("{e}")))?;
    let id = RMatrix::identity(2);
    let marg = |op: RMatrix| op.quadratic_form(&psi).expect("4x4");
    let marginals = alice
        .iter()
        .map(|&a| marg(observable(a).kron(&id)))
        .chain(bob.iter().map(|&b| marg(id.kron(&observable(b)))))
        .collect();
    Ok((cs, marginals))
}

fn cmd_csystem(ctx: &Ctx, args: &CsystemArgs) -> CmdResult {
    let tol = ctx.global.tol.unwrap_or(1e-9);
    let (cs, marginals) = match &args.table {
        Some(path) => {
            let doc: CorrelationDoc = read_json(path).map_err(usage)?;
            let flat = doc.flat().map_err(usage)?;
            let opts = CompletionOptions { tol, ..Default::default() };
            match complete_from_table(doc.settings, &flat, &opts) {
                Ok(cs) => (cs, doc.marginals()),
                Err(Error::DidNotConverge { iterations, defect }) => {
                    let text = format!("completion failed after {iterations} iterations\npsd_defect={}\n", num(defect));
                    let value = json!({"completed": false, "iterations": iterations, "psd_defect": defect});
                    return ctx.emit(EXIT_NEGATIVE, text, value);
                }
                Err(e) => return Err(usage(anyhow!("{e}"))),
            }
        }
        None => representation_system(args)?,
    };
    let m = cs.settings();
    let r = cs.rank();
    let bounds = rank_bounds_check(r, m);
    let marginals_zero = marginals.iter().all(|v| v.abs() <= 1e-10);
    let span = symmetric_span_check(&cs);
    let parity = classify_rank_parity(&cs, marginals_zero);
    let correlations = cs.correlations();

    let mut text = String::new();
    let _ = writeln!(text, "M={m}\nrank={r}\nrank_x={}\nrank_y={}", cs.rank_x(), cs.rank_y());
    let _ = writeln!(text, "unit_norms={}", cs.has_unit_norms());
    let _ = writeln!(text, "r <= M: {}", bounds.leq_m);
    let _ = writeln!(text, "r <= -1/2 + sqrt(1/4 + 4M): {}", bounds.quadratic);
    let _ = writeln!(text, "r(r+1)/2 <= 2M - 1: {}", bounds.triangular);
    match &span {
        Ok(s) => {
            let _ = writeln!(text, "symmetric_span={s}");
        }
        Err(e) => {
            let _ = writeln!(text, "symmetric_span=unavailable ({e})");
        }
    }
    let _ = writeln!(text, "marginals_zero={marginals_zero}");
    match &parity {
        Ok(p) => {
            let _ = writeln!(text, "parity={}", p.as_str());
        }
        Err(e) => {
            let _ = writeln!(text, "parity=unavailable ({e})");
        }
    }
    let rows: Vec<Vec<f64>> = correlations.chunks(m).map(|c| c.to_vec()).collect();
    let value = json!({
        "completed": true,
        "M": m,
        "c": rows,
        "rank": r,
        "rank_x": cs.rank_x(),
        "rank_y": cs.rank_y(),
        "unit_norms": cs.has_unit_norms(),
        "rank_bounds": {"leq_M": bounds.leq_m, "quadratic": bounds.quadratic, "triangular": bounds.triangular},
        "symmetric_span": span.as_ref().ok(),
        "marginals_zero": marginals_zero,
        "parity": parity.as_ref().ok().map(|p| p.as_str()),
        "parity_error": parity.as_ref().err().map(|e| e.to_string()),
    });
    ctx.emit(if parity.is_ok() { EXIT_OK } else { EXIT_NEGATIVE }, text, value)
}

/// Functionals whose saturation by `b` is tested: the LHV separating
/// functional and the built-in expression for the scenario.
fn tsirelson_candidates(b: &Behavior, m: &MembershipResult) -> Vec<BellFunctional> {
    let sc = b.scenario();
    if sc.settings() != 2 || sc.outcomes() != 2 || sc.parties() > 6 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if let Membership::Outside { separating, .. } = &m.membership {
        out.push(separating.clone().with_label("separating"));
    }
    match sc.parties() {
        2 => out.push(chsh_functional()),
        n if n >= 3 => out.extend(mermin_functional(n).ok()),
        _ => {}
    }
    out
}

fn cmd_classify(ctx: &Ctx, path: &std::path::Path) -> CmdResult {
    let b = load_behavior(path)?;
    let sc = b.scenario();
    let mut notes: Vec<String> = Vec::new();
    let m = match membership(&b) {
        Ok(m) => Some(m),
        Err(Error::InvalidBehavior(d)) => return Err(usage(anyhow!("invalid behavior (defect {d:e})"))),
        Err(e) => {
            notes.push(format!("LHV test unavailable: {e}"));
            None
        }
    };

    let mut report = None;
    let mut tsirelson = Vec::new();
    let mut parity = None;
    if let Some(m) = m.as_ref().filter(|m| !m.is_inside()) {
        if sc == Scenario::chsh() {
            let fits = fit_representations(&b, 1e-7).unwrap_or_default();
            notes.push(format!("{} maximally entangled real representation(s) fit the behavior", fits.len()));
            for rep in fits {
                match build_certificate(&rep) {
                    Ok(CertificateOutcome::Built(cert)) => {
                        let r = verify_certificate(&cert, DEFAULT_SAMPLES, ctx.global.seed);
                        let passed = r.passed();
                        if report.is_none() || passed {
                            report = Some(r);
                        }
                        if passed {
                            break;
                        }
                    }
                    Ok(CertificateOutcome::NotApplicable { lambda_squared, .. }) => {
                        notes.push(format!("certificate not applicable (lambda^2 = {})", num(lambda_squared)))
                    }
                    Err(e) => notes.push(format!("certificate unavailable: {e}")),
                }
            }
        }
        for f in tsirelson_candidates(&b, m) {
            match quantum_max(&f, &ctx.max_options()) {
                Ok(q) => tsirelson.push(tsirelson_evidence(&f, &b, &q)),
                Err(e) => notes.push(format!("quantum maximum of {} unavailable: {e}", f.label())),
            }
        }
        if sc.parties() == 2 && sc.outcomes() == 2 {
            let table = correlation_table(&b).expect("(2, M, 2)");
            let zero = marginals_zero_check(&b, 1e-10).expect("(2, M, 2)");
            match complete_from_table(sc.settings(), table.correlators(), &CompletionOptions::default()) {
                Ok(cs) => match classify_rank_parity(&cs, zero) {
                    Ok(p) => parity = Some(p),
                    Err(e) => notes.push(format!("c-system rank {}: {e}", cs.rank())),
                },
                Err(e) => notes.push(format!("c-system completion failed: {e}")),
            }
        }
    }

    let evidence = Evidence { membership: m.as_ref(), certificate: report.as_ref(), tsirelson, rank_parity: parity };
    let c = classify(&evidence);
    let trail: Vec<String> = notes.into_iter().chain(c.trail).collect();
    let mut text = format!("{}\n", c.class.as_str());
    for t in &trail {
        let _ = writeln!(text, "  - {t}");
    }
    let value = json!({"class": c.class.as_str(), "trail": trail});
    ctx.emit(if c.class == SecurityClass::Unknown { EXIT_NEGATIVE } else { EXIT_OK }, text, value)
}

fn tsirelson_evidence(f: &BellFunctional, b: &Behavior, q: &MaximizationResult) -> TsirelsonEvidence {
    TsirelsonEvidence {
        label: f.label().into(),
        value_on_behavior: evaluate(f, b).expect("matching scenario"),
        quantum_max: q.value,
        unique_flag: q.unique_flag,
    }
}
