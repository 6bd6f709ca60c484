use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Ring, RingError};

/// Maximum number of variables of a [`PolyRing`].
pub const MAX_VARS: usize = 8;

/// Exponent vector; negative entries are allowed only on inverted variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(pub [i16; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn var(i: usize, e: i16) -> Self {
        let mut m = Self::one();
        m.0[i] = e;
        m
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0) {
            *o += e;
        }
        out
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&e| e as i32).sum()
    }

    /// Graded-lex order with the larger monomial first.
    fn display_cmp(&self, other: &Monomial) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// A variable of a [`PolyRing`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    /// Powers of this variable may appear in denominators.
    pub inverted: bool,
    /// Ideal marker: the variable stands for an arbitrary element of this ideal.
    pub marker: Option<String>,
}

/// A Laurent polynomial in normal form: terms sorted by monomial with
/// nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LPoly {
    terms: Vec<(Monomial, i128)>,
}

impl LPoly {
    pub fn terms(&self) -> &[(Monomial, i128)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent of variable `i` over all terms (`None` for zero).
    pub fn min_exponent(&self, i: usize) -> Option<i16> {
        self.terms.iter().map(|(m, _)| m.0[i]).min()
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, m: &Monomial) -> LPoly {
        LPoly {
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), *c)).collect(),
        }
    }

    /// True if no term has a negative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.0.iter().all(|&e| e >= 0))
    }
}

/// Polynomial ring over `Z` or `Z/m` with a fixed set of inverted variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyRing {
    vars: Vec<Variable>,
    modulus: Option<u64>,
}

impl PolyRing {
    /// `names` may carry a marker suffix `name:TAG`; `inverted` lists the
    /// variables whose powers are allowed denominators.
    pub fn new(names: &[&str], inverted: &[&str], modulus: Option<u64>) -> Result<Self, RingError> {
        let described = || format!("{names:?}");
        if names.len() > MAX_VARS {
            return Err(RingError::Parse(described(), format!("at most {MAX_VARS} variables")));
        }
        let mut vars: Vec<Variable> = Vec::new();
        for raw in names {
            let (name, marker) = match raw.split_once(':') {
                Some((n, m)) => (n.trim(), Some(m.trim().to_string())),
                None => (raw.trim(), None),
            };
            if name.is_empty()
                || !name.chars().next().unwrap().is_ascii_alphabetic()
                || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(RingError::Parse(described(), format!("bad variable name `{name}`")));
            }
            if vars.iter().any(|v| v.name == name) {
                return Err(RingError::Parse(described(), format!("duplicate variable `{name}`")));
            }
            vars.push(Variable {
                name: name.to_string(),
                inverted: inverted.contains(&name),
                marker,
            });
        }
        for inv in inverted {
            if !vars.iter().any(|v| v.name == *inv) {
                return Err(RingError::Parse(described(), format!("unknown inverted variable `{inv}`")));
            }
        }
        if modulus.is_some_and(|m| m < 2) {
            return Err(RingError::ZeroRing);
        }
        Ok(PolyRing { vars, modulus })
    }

    /// `Z[s,t,a,b]` with `s` and `t` inverted.
    pub fn standard() -> Self {
        Self::new(&["s", "t", "a", "b"], &["s", "t"], None).expect("valid ring")
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// The variable as an element.
    pub fn var(&self, name: &str) -> LPoly {
        let i = self.var_index(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        self.monomial(Monomial::var(i, 1), 1)
    }

    pub fn monomial(&self, m: Monomial, c: i128) -> LPoly {
        self.normalise(vec![(m, c)])
    }

    /// `c * Π name^e`.
    pub fn term(&self, c: i128, powers: &[(&str, i16)]) -> LPoly {
        let mut m = Monomial::one();
        for (name, e) in powers {
            let i = self.var_index(name).unwrap_or_else(|| panic!("unknown variable {name}"));
            m.0[i] += e;
        }
        self.monomial(m, c)
    }

    fn reduce(&self, c: i128) -> i128 {
        match self.modulus {
            Some(m) => c.rem_euclid(m as i128),
            None => c,
        }
    }

    fn normalise(&self, mut terms: Vec<(Monomial, i128)>) -> LPoly {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(Monomial, i128)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc = lc.checked_add(c).expect("coefficient overflow");
                }
                _ => out.push((m, c)),
            }
        }
        out.retain_mut(|(_, c)| {
            *c = self.reduce(*c);
            *c != 0
        });
        LPoly { terms: out }
    }

    /// Multiplies by an integer.
    pub fn scale(&self, x: &LPoly, k: i128) -> LPoly {
        self.normalise(
            x.terms
                .iter()
                .map(|(m, c)| (*m, c.checked_mul(k).expect("coefficient overflow")))
                .collect(),
        )
    }

    /// Exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_int(&self, x: &LPoly, k: i128) -> Option<LPoly> {
        if let Some(modulus) = self.modulus {
            let inv = mod_inverse(k, modulus as i128)?;
            return Some(self.scale(x, inv));
        }
        x.terms
            .iter()
            .map(|(m, c)| (c % k == 0).then_some((*m, c / k)))
            .collect::<Option<Vec<_>>>()
            .map(|terms| LPoly { terms })
    }

    /// Normal form as a fraction: numerator free of denominators, and the
    /// exponent of each inverted variable in the denominator.
    pub fn to_fraction(&self, x: &LPoly) -> (LPoly, Monomial) {
        let mut den = Monomial::one();
        for i in 0..self.vars.len() {
            if let Some(e) = x.min_exponent(i) {
                if e < 0 {
                    den.0[i] = -e;
                }
            }
        }
        (x.shift(&den), den)
    }

    /// Index of the variable named `s` / `t`, used by the level predicates.
    fn level_vars(&self) -> (Option<usize>, Option<usize>) {
        (self.var_index("s"), self.var_index("t"))
    }

    /// True iff `x` has no denominator and lies in `s^p t^q` times the
    /// polynomial ring.
    pub fn level_membership(&self, x: &LPoly, p: u32, q: u32) -> bool {
        let (si, ti) = self.level_vars();
        x.terms.iter().all(|(m, _)| {
            m.0.iter().all(|&e| e >= 0)
                && si.map_or(p == 0, |i| m.0[i] as i64 >= p as i64)
                && ti.map_or(q == 0, |i| m.0[i] as i64 >= q as i64)
        })
    }

    /// Largest `(p, q)` pair such that `x` has level `(p, q)` in each
    /// coordinate separately; `None` if `x` has a denominator.
    pub fn level_of(&self, x: &LPoly) -> Option<(u32, u32)> {
        if !x.is_polynomial() {
            return None;
        }
        let (si, ti) = self.level_vars();
        let p = si.and_then(|i| x.min_exponent(i)).unwrap_or(0).max(0) as u32;
        let q = ti.and_then(|i| x.min_exponent(i)).unwrap_or(0).max(0) as u32;
        if x.is_zero() {
            return Some((u32::MAX, u32::MAX));
        }
        Some((p, q))
    }

    /// True iff every monomial contains, for each marker, a variable tagged
    /// with it to a positive power.
    pub fn carries_markers(&self, x: &LPoly, markers: &[&str]) -> bool {
        x.terms.iter().all(|(m, _)| {
            markers.iter().all(|tag| {
                self.vars.iter().enumerate().any(|(i, v)| {
                    v.marker.as_deref() == Some(*tag) && m.0[i] > 0
                })
            })
        })
    }

    /// Evaluates `x` at concrete ring values. `inverses[i]` must be set for
    /// every variable that occurs with a negative exponent.
    pub fn specialise<R: Ring>(
        &self,
        x: &LPoly,
        ring: &R,
        values: &[R::Elem],
        inverses: &[Option<R::Elem>],
    ) -> R::Elem {
        let mut acc = ring.zero();
        for (m, c) in &x.terms {
            let mut t = match i64::try_from(*c) {
                Ok(small) => ring.from_int(small),
                Err(_) => int_in_ring(ring, *c),
            };
            for (i, &e) in m.0.iter().enumerate().take(self.vars.len()) {
                if e > 0 {
                    t = ring.mul(&t, &ring.pow(&values[i], e as u32));
                } else if e < 0 {
                    let inv = inverses[i]
                        .as_ref()
                        .unwrap_or_else(|| panic!("no inverse supplied for {}", self.vars[i].name));
                    t = ring.mul(&t, &ring.pow(inv, (-e) as u32));
                }
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    /// Parses a polynomial expression such as `s^3*t*(a+b) - 2*a/s`.
    pub fn parse(&self, text: &str) -> Result<LPoly, RingError> {
        let mut p = ExprParser {
            ring: self,
            src: text.as_bytes(),
            pos: 0,
            text,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(v)
    }

    pub fn describe(&self) -> String {
        let names: Vec<String> = self
            .vars
            .iter()
            .map(|v| match &v.marker {
                Some(m) => format!("{}:{}", v.name, m),
                None => v.name.clone(),
            })
            .collect();
        let base = match self.modulus {
            Some(m) => format!("Z/{m}"),
            None => "Z".to_string(),
        };
        let inv: String = self
            .vars
            .iter()
            .filter(|v| v.inverted)
            .map(|v| v.name.as_str())
            .collect();
        if inv.is_empty() {
            format!("{base}[{}]", names.join(","))
        } else {
            format!("{base}[{}] loc {inv}", names.join(","))
        }
    }
}

fn int_in_ring<R: Ring>(ring: &R, c: i128) -> R::Elem {
    let big = ring.from_int(1i64 << 62);
    let hi = ring.from_int((c >> 62) as i64);
    let lo = ring.from_int((c & ((1i128 << 62) - 1)) as i64);
    ring.add(&ring.mul(&hi, &big), &lo)
}

fn mod_inverse(k: i128, m: i128) -> Option<i128> {
    let (mut a, mut b, mut x0, mut x1) = (k.rem_euclid(m), m, 1i128, 0i128);
    while b != 0 {
        let q = a / b;
        (a, b) = (b, a - q * b);
        (x0, x1) = (x1, x0 - q * x1);
    }
    (a == 1).then(|| x0.rem_euclid(m))
}

impl Ring for PolyRing {
    type Elem = LPoly;

    fn zero(&self) -> LPoly {
        LPoly::default()
    }

    fn one(&self) -> LPoly {
        self.monomial(Monomial::one(), 1)
    }

    fn add(&self, a: &LPoly, b: &LPoly) -> LPoly {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match a.terms[i].0.cmp(&b.terms[j].0) {
                Ordering::Less => {
                    out.push(a.terms[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b.terms[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.reduce(
                        a.terms[i]
                            .1
                            .checked_add(b.terms[j].1)
                            .expect("coefficient overflow"),
                    );
                    if c != 0 {
                        out.push((a.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend_from_slice(&b.terms[j..]);
        LPoly { terms: out }
    }

    fn neg(&self, a: &LPoly) -> LPoly {
        self.scale(a, -1)
    }

    fn mul(&self, a: &LPoly, b: &LPoly) -> LPoly {
        if a.is_zero() || b.is_zero() {
            return LPoly::default();
        }
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                terms.push((ma.mul(mb), ca.checked_mul(*cb).expect("coefficient overflow")));
            }
        }
        self.normalise(terms)
    }

    fn from_int(&self, n: i64) -> LPoly {
        self.monomial(Monomial::one(), n as i128)
    }

    fn is_zero(&self, a: &LPoly) -> bool {
        a.is_zero()
    }

    fn format(&self, a: &LPoly) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<&(Monomial, i128)> = a.terms.iter().collect();
        terms.sort_by(|x, y| x.0.display_cmp(&y.0));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if k == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.vars[i].name.clone()
                    } else {
                        format!("{}^{}", self.vars[i].name, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                let _ = write!(out, "{mag}");
            } else if mag == 1 {
                out.push_str(&factors.join("*"));
            } else {
                let _ = write!(out, "{mag}*{}", factors.join("*"));
            }
        }
        out
    }
}

struct ExprParser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> RingError {
        RingError::Parse(self.text.to_string(), format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LPoly, RingError> {
        let r = self.ring;
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                r.neg(&self.product()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = r.add(&acc, &self.product()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = r.sub(&acc, &self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<LPoly, RingError> {
        let r = self.ring;
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = r.mul(&acc, &self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    acc = self.divide(&acc, &d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// Division is only defined by a unit: `±` a monomial in inverted variables.
    fn divide(&self, x: &LPoly, d: &LPoly) -> Result<LPoly, RingError> {
        let r = self.ring;
        if d.terms.len() != 1 {
            return Err(self.error("can only divide by a monomial"));
        }
        let (m, c) = d.terms[0];
        let inverse_ok = m
            .0
            .iter()
            .enumerate()
            .all(|(i, &e)| e == 0 || (i < r.vars.len() && r.vars[i].inverted));
        if !inverse_ok {
            return Err(self.error("denominator is not a power of an inverted variable"));
        }
        let mut inv = Monomial::one();
        for (o, e) in inv.0.iter_mut().zip(m.0) {
            *o = -e;
        }
        let shifted = x.shift(&inv);
        r.div_int(&shifted, c)
            .ok_or_else(|| self.error("inexact integer division"))
    }

    fn power(&mut self) -> Result<LPoly, RingError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()? as u32;
            if neg {
                let one = self.ring.one();
                let p = self.ring.pow(&base, e);
                return self.divide(&one, &p);
            }
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i128, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error("integer too large"))
    }

    fn atom(&mut self) -> Result<LPoly, RingError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.ring.monomial(Monomial::one(), n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                match self.ring.var_index(name) {
                    Some(i) => Ok(self.ring.monomial(Monomial::var(i, 1), 1)),
                    None => Err(self.error(&format!("unknown variable `{name}`"))),
                }
            }
            _ => Err(self.error("expected expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let r = PolyRing::standard();
        let x = r.parse("s^3*t*(a+b)").unwrap();
        assert_eq!(r.format(&x), "s^3*t*a + s^3*t*b");
        let y = r.parse("2*a/s - 3").unwrap();
        assert_eq!(r.format(&y), "-3 + 2*s^-1*a");
        assert_eq!(r.parse(&r.format(&x)).unwrap(), x);
        assert!(r.parse("a/b").is_err());
        assert!(r.parse("a +").is_err());
    }

    #[test]
    fn level_membership_examples() {
        let r = PolyRing::standard();
        let x = r.parse("s^3*t*(a+b)").unwrap();
        assert!(r.level_membership(&x, 2, 1));
        let y = r.parse("a/s").unwrap();
        assert!(!r.level_membership(&y, 1, 0));
        assert!(!r.level_membership(&y, 0, 0));
        let z = r.parse("s^2*b - s^2*t*b").unwrap();
        assert!(r.level_membership(&z, 2, 0));
        assert!(!r.level_membership(&z, 2, 1));
    }

    #[test]
    fn fractions_have_minimal_denominators() {
        let r = PolyRing::standard();
        let x = r.parse("a/s^2 + b/(s*t)").unwrap();
        let (num, den) = r.to_fraction(&x);
        assert_eq!(r.format(&num), "s*b + t*a");
        assert_eq!(den.0[..2], [2, 1]);
    }

    #[test]
    fn markers_are_tracked_per_monomial() {
        let r = PolyRing::new(&["s", "t", "a:A", "b:B", "c"], &["s", "t"], None).unwrap();
        let ab = r.parse("s*a*b + a*b*c").unwrap();
        assert!(r.carries_markers(&ab, &["A", "B"]));
        let mixed = r.parse("a + b").unwrap();
        assert!(!r.carries_markers(&mixed, &["A"]));
        assert!(r.carries_markers(&r.zero(), &["A"]));
    }

    #[test]
    fn coefficients_reduce_modulo() {
        let r = PolyRing::new(&["x"], &[], Some(6)).unwrap();
        let x = r.parse("4*x + 5*x").unwrap();
        assert_eq!(r.format(&x), "3*x");
    }

    #[test]
    fn specialisation_into_finite_rings() {
        use crate::ring::FiniteRing;
        let r = PolyRing::standard();
        let f = FiniteRing::integers_mod(7).unwrap();
        let x = r.parse("a/s + t^2*b").unwrap();
        let vals = [f.int(3), f.int(2), f.int(5), f.int(4)];
        let invs = [Some(f.int(5)), Some(f.int(4)), None, None];
        // 5 * 3^{-1} + 4 * 4 = 5*5 + 16 = 41 = 6 mod 7
        assert_eq!(r.specialise(&x, &f, &vals, &invs), f.int(6));
    }
}
