//! Text serialization of rules.
//!
//! A rule file starts with `<domain> <phi> <Np>` and lists one orbit term
//! per line as `<orbit_id> <params...> <weight>`. The expanded form lists
//! `x y [z] w` per point.

use crate::domain::{DomainKind, OrbitInstance, Point};
use crate::error::{Error, Result};
use crate::real::Real;

use super::{QuadratureRule, RuleTerm};

/// Significant digits that round-trip a double.
pub const DOUBLE_DIGITS: usize = 17;

/// Significant digits written for double-double values.
pub const EXTENDED_DIGITS: usize = 34;

pub fn write_rule<T: Real>(rule: &QuadratureRule<T>, digits: usize) -> String {
    let mut out = format!(
        "{} {} {}\n",
        rule.kind.short_name(),
        rule.phi,
        rule.point_count
    );
    for t in &rule.terms {
        out.push_str(&t.orbit.orbit_id.to_string());
        for p in &t.orbit.params {
            out.push(' ');
            out.push_str(&p.format_sig(digits));
        }
        out.push(' ');
        out.push_str(&t.weight.format_sig(digits));
        out.push('\n');
    }
    out
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number<T: Real>(tok: &str, line: usize) -> Result<T> {
    T::parse_decimal(tok)
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_error(line, format!("invalid number `{tok}`")))
}

pub fn parse_rule<T: Real>(text: &str) -> Result<QuadratureRule<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_error(hline, "header must read `<domain> <phi> <Np>`"));
    }
    let kind: DomainKind = fields[0]
        .parse()
        .map_err(|e| parse_error(hline, format!("{e}")))?;
    let phi: u32 = fields[1]
        .parse()
        .map_err(|_| parse_error(hline, format!("invalid strength `{}`", fields[1])))?;
    let declared: usize = fields[2]
        .parse()
        .map_err(|_| parse_error(hline, format!("invalid point count `{}`", fields[2])))?;

    let domain = kind.domain();
    let mut terms = Vec::new();
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let id: usize = toks[0]
            .parse()
            .map_err(|_| parse_error(n, format!("invalid orbit id `{}`", toks[0])))?;
        let orbit = domain
            .orbit(id)
            .map_err(|e| parse_error(n, e.to_string()))?;
        if toks.len() != orbit.param_count + 2 {
            return Err(parse_error(
                n,
                format!(
                    "orbit {id} takes {} parameter(s) and a weight, found {} value(s)",
                    orbit.param_count,
                    toks.len() - 1
                ),
            ));
        }
        let values = toks[1..]
            .iter()
            .map(|t| parse_number::<T>(t, n))
            .collect::<Result<Vec<T>>>()?;
        let (params, weight) = values.split_at(orbit.param_count);
        terms.push(RuleTerm::new(
            OrbitInstance::new(id, params.to_vec()),
            weight[0],
        ));
    }

    QuadratureRule::with_point_count(kind, phi, terms, declared).map_err(|e| match e {
        Error::PointCountMismatch { declared, actual } => parse_error(
            hline,
            format!("header declares {declared} points but the orbits expand to {actual}"),
        ),
        other => other,
    })
}

pub fn write_expanded<T: Real>(rule: &QuadratureRule<T>, digits: usize) -> String {
    let dim = rule.kind.dimension();
    let (pts, wts) = rule.expanded();
    let mut out = String::new();
    for (p, w) in pts.iter().zip(&wts) {
        for c in &p[..dim] {
            out.push_str(&c.format_sig(digits));
            out.push(' ');
        }
        out.push_str(&w.format_sig(digits));
        out.push('\n');
    }
    out
}

pub fn parse_expanded<T: Real>(kind: DomainKind, text: &str) -> Result<(Vec<Point<T>>, Vec<T>)> {
    let dim = kind.dimension();
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals = line
            .split_whitespace()
            .map(|t| parse_number::<T>(t, i + 1))
            .collect::<Result<Vec<T>>>()?;
        if vals.len() != dim + 1 {
            return Err(parse_error(
                i + 1,
                format!("expected {} values, found {}", dim + 1, vals.len()),
            ));
        }
        let mut p = [T::zero(); 3];
        p[..dim].copy_from_slice(&vals[..dim]);
        pts.push(p);
        wts.push(vals[dim]);
    }
    Ok((pts, wts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::DoubleDouble;

    fn sample() -> QuadratureRule {
        let terms = vec![
            RuleTerm::new(OrbitInstance::new(0, vec![]), 0.225),
            RuleTerm::new(
                OrbitInstance::new(1, vec![0.1012865073234563]),
                0.1259391805448271,
            ),
            RuleTerm::new(
                OrbitInstance::new(1, vec![0.4701420641051151]),
                0.1323941527885062,
            ),
        ];
        QuadratureRule::new(DomainKind::Triangle, 5, terms).unwrap()
    }

    #[test]
    fn round_trip() {
        let rule = sample();
        let text = write_rule(&rule, DOUBLE_DIGITS);
        assert!(text.starts_with("tri 5 7\n0 2.2500000000000001e-1\n"));
        let back: QuadratureRule = parse_rule(&text).unwrap();
        assert_eq!(back, rule);
        assert_eq!(write_rule(&back, DOUBLE_DIGITS), text);
    }

    #[test]
    fn extended_round_trip() {
        let rule = sample().convert::<DoubleDouble>();
        let text = write_rule(&rule, EXTENDED_DIGITS);
        let back: QuadratureRule<DoubleDouble> = parse_rule(&text).unwrap();
        // Thirty-four digits exceed double-double resolution, so the check
        // is numeric rather than textual.
        for (a, b) in back.params().iter().zip(rule.params()) {
            assert!((*a - b).abs().to_f64() <= 1e-31 * b.abs().to_f64());
        }
        for (a, b) in back.terms.iter().zip(&rule.terms) {
            assert!((a.weight - b.weight).abs().to_f64() <= 1e-31 * b.weight.abs().to_f64());
        }
    }

    #[test]
    fn expanded_round_trip() {
        let rule = sample();
        let text = write_expanded(&rule, DOUBLE_DIGITS);
        assert_eq!(text.lines().count(), 7);
        let (pts, wts) = parse_expanded::<f64>(DomainKind::Triangle, &text).unwrap();
        let (p0, w0) = rule.expanded();
        assert_eq!(pts, p0);
        assert_eq!(wts, w0);
    }

    #[test]
    fn diagnostics() {
        let err = parse_rule::<f64>("tri 1 3\n0 2.0\n").unwrap_err();
        assert!(
            err.to_string().contains('3') && err.to_string().contains('1'),
            "{err}"
        );
        assert!(matches!(err, Error::Parse { line: 1, .. }));

        let err = parse_rule::<f64>("tri 1 1\n\n7 2.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let err = parse_rule::<f64>("tri 1 3\n1 2.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let err = parse_rule::<f64>("cube 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));

        let err = parse_rule::<f64>("tri 1 1\n0 abc\n").unwrap_err();
        assert!(err.to_string().contains("abc"));
    }
}
