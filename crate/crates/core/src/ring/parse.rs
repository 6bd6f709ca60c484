use std::sync::Arc;

use super::finite::{Factor, FiniteRing};
use super::poly::PolyRing;
use super::RingError;

/// A parsed ring description.
#[derive(Clone, Debug)]
pub enum RingSpec {
    Finite(Arc<FiniteRing>),
    Poly(Arc<PolyRing>),
}

impl RingSpec {
    pub fn describe(&self) -> String {
        match self {
            RingSpec::Finite(r) => r.name().to_string(),
            RingSpec::Poly(p) => p.describe(),
        }
    }
}

fn err(text: &str, msg: impl Into<String>) -> RingError {
    RingError::Parse(text.to_string(), msg.into())
}

/// Parses `Z/12`, `Z/4 x Z/9`, `Z/3[u]/(u^2)` or `Z[s,t,a,b] loc st`.
///
/// Polynomial variables may carry an ideal marker as `a:A`.
pub fn parse_ring(text: &str) -> Result<RingSpec, RingError> {
    let t = text.trim();
    let (body, loc) = match t.split_once(" loc ") {
        Some((b, l)) => (b.trim(), Some(l.trim())),
        None => (t, None),
    };
    let is_poly = body.contains('[') && !body.contains("]/(");
    if is_poly {
        return parse_poly(t, body, loc).map(|p| RingSpec::Poly(Arc::new(p)));
    }
    if loc.is_some() {
        return Err(err(t, "localisation is only supported for polynomial rings"));
    }
    let factors = body
        .split(" x ")
        .map(|f| parse_factor(t, f.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let ring = FiniteRing::product(&factors)?;
    Ok(RingSpec::Finite(Arc::new(ring)))
}

fn parse_modulus(text: &str, s: &str) -> Result<u64, RingError> {
    let m: u64 = s
        .trim()
        .parse()
        .map_err(|_| err(text, format!("bad modulus `{s}`")))?;
    if m < 2 {
        return Err(RingError::ZeroRing);
    }
    Ok(m)
}

fn parse_factor(text: &str, f: &str) -> Result<Factor, RingError> {
    let rest = f
        .strip_prefix("Z/")
        .ok_or_else(|| err(text, format!("factor `{f}` must start with Z/")))?;
    match rest.split_once('[') {
        None => Ok(Factor {
            modulus: parse_modulus(text, rest)?,
            nil_degree: 1,
        }),
        Some((m, tail)) => {
            // tail looks like `u]/(u^2)`
            let (var, quot) = tail
                .split_once("]/(")
                .ok_or_else(|| err(text, "expected `[u]/(u^d)`"))?;
            let quot = quot
                .strip_suffix(')')
                .ok_or_else(|| err(text, "missing `)`"))?;
            let var = var.trim();
            let degree = match quot.trim().split_once('^') {
                Some((v, d)) if v.trim() == var => d
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| err(text, format!("bad exponent `{d}`")))?,
                None if quot.trim() == var => 1,
                _ => return Err(err(text, "quotient must be a power of the adjoined variable")),
            };
            if degree == 0 {
                return Err(RingError::ZeroRing);
            }
            Ok(Factor {
                modulus: parse_modulus(text, m)?,
                nil_degree: degree,
            })
        }
    }
}

fn parse_poly(text: &str, body: &str, loc: Option<&str>) -> Result<PolyRing, RingError> {
    let (base, vars) = body
        .split_once('[')
        .ok_or_else(|| err(text, "expected `[`"))?;
    let vars = vars
        .strip_suffix(']')
        .ok_or_else(|| err(text, "expected `]`"))?;
    let modulus = match base.trim() {
        "Z" => None,
        b => Some(parse_modulus(
            text,
            b.strip_prefix("Z/")
                .ok_or_else(|| err(text, "coefficients must be Z or Z/m"))?,
        )?),
    };
    let names: Vec<&str> = vars.split(',').map(str::trim).collect();
    let plain: Vec<&str> = names
        .iter()
        .map(|n| n.split(':').next().unwrap().trim())
        .collect();
    let inverted = match loc {
        None => Vec::new(),
        Some(l) => split_monomial(text, l, &plain)?,
    };
    PolyRing::new(&names, &inverted, modulus)
        .map_err(|e| match e {
            RingError::Parse(_, m) => err(text, m),
            other => other,
        })
}

/// Splits `st` or `s*t` into variable names, longest match first.
fn split_monomial<'a>(text: &str, l: &str, names: &[&'a str]) -> Result<Vec<&'a str>, RingError> {
    let mut out = Vec::new();
    for chunk in l.split(|c: char| c == '*' || c.is_whitespace()).filter(|c| !c.is_empty()) {
        let mut rest = chunk;
        while !rest.is_empty() {
            let best = names
                .iter()
                .filter(|n| rest.starts_with(**n))
                .max_by_key(|n| n.len())
                .ok_or_else(|| err(text, format!("unknown variable in `{rest}`")))?;
            out.push(*best);
            rest = &rest[best.len()..];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_descriptions() {
        let RingSpec::Finite(r) = parse_ring("Z/12").unwrap() else {
            panic!()
        };
        assert_eq!(r.size(), 12);
        let RingSpec::Finite(r) = parse_ring("Z/4 x Z/9").unwrap() else {
            panic!()
        };
        assert_eq!(r.size(), 36);
        let RingSpec::Finite(r) = parse_ring("Z/3[u]/(u^2)").unwrap() else {
            panic!()
        };
        assert_eq!(r.size(), 9);
        assert_eq!(r.name(), "Z/3[u]/(u^2)");
    }

    #[test]
    fn polynomial_descriptions() {
        let RingSpec::Poly(p) = parse_ring("Z[s,t,a,b] loc st").unwrap() else {
            panic!()
        };
        assert_eq!(*p, PolyRing::standard());
        let RingSpec::Poly(p) = parse_ring("Z[s,t,a:A,b:B] loc s*t").unwrap() else {
            panic!()
        };
        assert_eq!(p.variables()[2].marker.as_deref(), Some("A"));
        assert_eq!(p.describe(), "Z[s,t,a:A,b:B] loc st");
    }

    #[test]
    fn malformed_descriptions_are_rejected() {
        for bad in ["Q/5", "Z/1", "Z/x", "Z/3[u]/(v^2)", "Z[s,t] loc q", "Z/6 loc s"] {
            assert!(parse_ring(bad).is_err(), "{bad}");
        }
    }
}
