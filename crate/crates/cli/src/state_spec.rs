//! `--state` literals: comma-separated complex numbers such as
//! `0.5846,0.157+0.295i,-i,2e-3`.

use num_complex::Complex64;

use crate::error::{CliError, CliResult};

fn parse_part(s: &str, whole: &str) -> CliResult<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => s
            .parse()
            .map_err(|_| CliError::Config(format!("bad complex literal `{whole}`"))),
    }
}

pub fn parse_complex(literal: &str) -> CliResult<Complex64> {
    let s: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CliError::Config("empty complex literal".into()));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_part(&s, literal)?, 0.0));
    };
    // the last sign that does not belong to an exponent splits re and im
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    match split {
        Some(p) => Ok(Complex64::new(
            parse_part(&body[..p], literal)?,
            parse_part(&body[p..], literal)?,
        )),
        None => Ok(Complex64::new(0.0, parse_part(body, literal)?)),
    }
}

pub fn parse_state(spec: &str) -> CliResult<Vec<Complex64>> {
    spec.split(',').map(parse_complex).collect()
}
