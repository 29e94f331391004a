//! Angle arguments: plain radians or `pi` fractions such as `pi/8`, `3pi/4`,
//! `-3*pi/2`.

use core::f64::consts::PI;

use anyhow::{bail, Context, Result};

pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.trim().chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('π', "pi");
    if s.is_empty() {
        bail!("empty angle");
    }
    let value = match s.find("pi") {
        None => s.parse::<f64>().with_context(|| format!("invalid angle `{text}`"))?,
        Some(at) => {
            let (head, tail) = (&s[..at], &s[at + 2..]);
            let head = head.strip_suffix('*').unwrap_or(head);
            let factor = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().with_context(|| format!("invalid multiplier in `{text}`"))?,
            };
            let divisor = match tail {
                "" => 1.0,
                t => {
                    let d = t.strip_prefix('/').with_context(|| format!("expected `/` after pi in `{text}`"))?;
                    d.parse::<f64>().with_context(|| format!("invalid divisor in `{text}`"))?
                }
            };
            if divisor == 0.0 {
                bail!("division by zero in `{text}`");
            }
            factor * PI / divisor
        }
    };
    if !value.is_finite() {
        bail!("angle `{text}` is not finite");
    }
    Ok(value)
}

/// Comma-separated angle list.
pub fn parse_angle_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_angle).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_8};

    #[test]
    fn pi_fractions_are_exact() {
        assert_eq!(parse_angle("pi/8").unwrap(), FRAC_PI_8);
        assert_eq!(parse_angle("pi/2").unwrap(), FRAC_PI_2);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -FRAC_PI_2);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("π/8").unwrap(), FRAC_PI_8);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("0").unwrap(), 0.0);
    }

    #[test]
    fn garbage_is_rejected() {
        for bad in ["", "pie", "pi/", "pi/0", "x", "2pi8", "nan"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
        assert_eq!(parse_angle_list("0,pi/2").unwrap(), vec![0.0, FRAC_PI_2]);
    }
}
