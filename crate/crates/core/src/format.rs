//! Line-oriented system files and float formatting shared by every export.
//!
//! ```text
//! # comment
//! map tau=0 slopes=0.8,0.2 breaks=0.5
//! map tau=0.9 slopes=0.1
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::map::PLMap;
use crate::system::Cplifs;

/// Formats like C's `%.17g`: 17 significant digits with trailing zeros
/// removed, exponent notation outside `[1e-5, 1e17)`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_g17(v)).collect::<Vec<_>>().join(",")
}

pub fn emit_system(system: &Cplifs) -> String {
    let mut out = String::new();
    for f in system.maps() {
        let _ = write!(out, "map tau={} slopes={}", fmt_g17(f.tau()), join(f.slopes()));
        if !f.breaks().is_empty() {
            let _ = write!(out, " breaks={}", join(f.breaks()));
        }
        out.push('\n');
    }
    out
}

pub fn parse_system(text: &str) -> Result<Cplifs> {
    let mut maps = Vec::new();
    let mut first_line = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        first_line.get_or_insert(line_no);
        maps.push(parse_map_line(line, line_no)?);
    }
    if maps.is_empty() {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "no map lines".into(),
        });
    }
    Cplifs::new(maps).map_err(|e| Error::Parse {
        line: first_line.unwrap_or(1),
        message: e.to_string(),
    })
}

fn parse_map_line(line: &str, line_no: usize) -> Result<PLMap> {
    let err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("map") {
        return Err(err("expected a line starting with 'map'".into()));
    }
    let (mut tau, mut slopes, mut breaks) = (None, None, None);
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, found {token:?}")))?;
        let slot = match key {
            "tau" => {
                if tau.is_some() {
                    return Err(err("duplicate key 'tau'".into()));
                }
                tau = Some(parse_float(value).map_err(err)?);
                continue;
            }
            "slopes" => &mut slopes,
            "breaks" => &mut breaks,
            other => return Err(err(format!("unknown key {other:?}"))),
        };
        if slot.is_some() {
            return Err(err(format!("duplicate key {key:?}")));
        }
        *slot = Some(
            value
                .split(',')
                .map(parse_float)
                .collect::<std::result::Result<Vec<f64>, String>>()
                .map_err(err)?,
        );
    }
    let tau = tau.ok_or_else(|| err("missing tau".into()))?;
    let slopes = slopes.ok_or_else(|| err("missing slopes".into()))?;
    PLMap::new(breaks.unwrap_or_default(), slopes, tau).map_err(|e| match e {
        Error::NonContractive { slope, .. } => err(format!("slope {slope} has modulus >= 1")),
        other => err(other.to_string()),
    })
}

fn parse_float(s: &str) -> std::result::Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("invalid number {s:?}")),
    }
}
