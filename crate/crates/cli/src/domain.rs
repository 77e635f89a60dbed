//! `--domain`, `--u` and `--P` parsing.

use std::fmt;
use std::str::FromStr;

use gtm_core::{Error, Fp, Polynomial, PrimeField, Q, Qu, Result, Ring, Zu};
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Q,
    Fp(PrimeField),
    Zu,
    Qu,
}

impl Domain {
    pub fn is_symbolic(&self) -> bool {
        matches!(self, Domain::Zu | Domain::Qu)
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Q" => Ok(Domain::Q),
            "Zu" => Ok(Domain::Zu),
            "Qu" => Ok(Domain::Qu),
            _ => {
                let p = s
                    .strip_prefix("Fp:")
                    .ok_or_else(|| format!("unknown domain {s:?}; expected Q, Fp:<p>, Zu or Qu"))?;
                let p: u64 = p.parse().map_err(|_| format!("bad prime in {s:?}"))?;
                PrimeField::new(p).map(Domain::Fp).map_err(|e| e.to_string())
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Q => f.write_str("Q"),
            Domain::Fp(k) => write!(f, "Fp:{}", k.modulus()),
            Domain::Zu => f.write_str("Zu"),
            Domain::Qu => f.write_str("Qu"),
        }
    }
}

/// A coefficient type the CLI can instantiate from a domain flag.
pub trait Dom: Ring {
    /// Image of a rational constant.
    fn lift(domain: &Domain, q: &Q) -> Result<Self>;
    /// The parameter `u`: the variable on symbolic domains, else `--u`.
    fn param(domain: &Domain, u: Option<&Q>) -> Result<Option<Self>>;
}

fn numeric_param<T: Dom>(domain: &Domain, u: Option<&Q>) -> Result<Option<T>> {
    u.map(|q| T::lift(domain, q)).transpose()
}

impl Dom for Q {
    fn lift(_: &Domain, q: &Q) -> Result<Self> {
        Ok(q.clone())
    }

    fn param(domain: &Domain, u: Option<&Q>) -> Result<Option<Self>> {
        numeric_param(domain, u)
    }
}

impl Dom for Fp {
    fn lift(domain: &Domain, q: &Q) -> Result<Self> {
        let Domain::Fp(field) = domain else { unreachable!("Fp values need an Fp domain") };
        let p = field.modulus() as i64;
        let reduce = |v: &num_bigint::BigInt| {
            let r = v % p;
            field.elem(i64::try_from(r).expect("residue fits"))
        };
        let den = reduce(q.denom());
        if den.is_zero() {
            return Err(Error::UndefinedInput(format!("{q} has no image mod {p}")));
        }
        Ok(reduce(q.numer()) / den)
    }

    fn param(domain: &Domain, u: Option<&Q>) -> Result<Option<Self>> {
        numeric_param(domain, u)
    }
}

impl Dom for Zu {
    fn lift(_: &Domain, q: &Q) -> Result<Self> {
        if !q.is_integer() {
            return Err(Error::UndefinedInput(format!("{q} is not in Z[u]")));
        }
        Ok(Polynomial::constant(q.numer().clone()))
    }

    fn param(_: &Domain, _: Option<&Q>) -> Result<Option<Self>> {
        Ok(Some(Polynomial::x()))
    }
}

impl Dom for Qu {
    fn lift(_: &Domain, q: &Q) -> Result<Self> {
        Ok(Qu::from_rational(q))
    }

    fn param(_: &Domain, _: Option<&Q>) -> Result<Option<Self>> {
        Ok(Some(Qu::u()))
    }
}

pub fn parse_rational(s: &str) -> std::result::Result<Q, String> {
    s.trim().parse::<Q>().map_err(|_| format!("expected an integer or a/b, got {s:?}"))
}

/// Polynomial in `t` from an expression over `+ - * ^`, parentheses,
/// rational literals and the symbols `t` and `u`. Juxtaposition multiplies,
/// so `2t^2 + u` works.
pub fn parse_poly<T: Dom>(src: &str, domain: &Domain, u: Option<&T>) -> Result<Polynomial<T>> {
    let mut p = Parser { s: src.as_bytes(), i: 0, domain, u };
    let v = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a, T> {
    s: &'a [u8],
    i: usize,
    domain: &'a Domain,
    u: Option<&'a T>,
}

impl<T: Dom> Parser<'_, T> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in {:?}", self.i, String::from_utf8_lossy(self.s)))
    }

    fn ws(&mut self) {
        while self.s.get(self.i).is_some_and(|c| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<Polynomial<T>> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add_ref(&rhs) } else { acc.sub_ref(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial<T>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => self.i += 1,
                Some(c) if c == b'(' || c == b't' || c == b'u' || c.is_ascii_digit() => {}
                _ => return Ok(acc),
            }
            acc = acc.mul_ref(&self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Polynomial<T>> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let k = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            let k: u64 = k.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow_u(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.i;
        while self.s.get(self.i).is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        (self.i > start).then(|| String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
    }

    fn atom(&mut self) -> Result<Polynomial<T>> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(v)
            }
            Some(b't') => {
                self.i += 1;
                Ok(Polynomial::x())
            }
            Some(b'u') => {
                self.i += 1;
                let u = self.u.ok_or_else(|| self.err("u needs a value on numeric domains (pass --u)"))?;
                Ok(Polynomial::constant(u.clone()))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().unwrap();
                let mut q = parse_rational(&num).map_err(|e| self.err(&e))?;
                if self.s.get(self.i) == Some(&b'/') {
                    self.i += 1;
                    let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                    let den = parse_rational(&den).map_err(|e| self.err(&e))?;
                    if den.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    q /= den;
                }
                if q.is_one() {
                    return Ok(Polynomial::constant(T::one()));
                }
                Ok(Polynomial::constant(T::lift(self.domain, &q)?))
            }
            _ => Err(self.err("expected a number, t, u or '('")),
        }
    }
}
