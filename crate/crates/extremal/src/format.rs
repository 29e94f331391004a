use extremal_core::cert222::ScanRow;

/// `v` with at most `digits` significant digits, trailing zeros removed.
pub fn sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() { "0".into() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i64;
    if !(-5..15).contains(&magnitude) {
        let s = format!("{:.*e}", digits.saturating_sub(1), v);
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        let mantissa = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Twelve significant digits, the precision used in every output format.
pub fn num(v: f64) -> String {
    sig(v, 12)
}

pub const SCAN_HEADER: &str = "x,theta_B,applicable,quantum_bound,classical_max,ratio";

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(r.x),
            num(r.theta_b),
            r.applicable(),
            opt(r.quantum_bound()),
            opt(r.classical_max()),
            opt(r.ratio())
        ));
    }
    out
}
