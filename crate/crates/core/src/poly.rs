//! Dense univariate polynomials over a [`Ring`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};

/// Polynomial degree with a `-inf` sentinel for the zero polynomial, so that
/// `deg(fg) = deg f + deg g` holds unconditionally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::NegInfinity, Degree::NegInfinity) => Ordering::Equal,
            (Degree::NegInfinity, _) => Ordering::Less,
            (_, Degree::NegInfinity) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Ascending coefficient list with no trailing zeros; the zero polynomial is
/// the empty list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree, with the zero polynomial mapped to `None`.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Lowest-order nonzero coefficient.
    pub fn trailing(&self) -> Option<&T> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Horner evaluation at a point of the coefficient ring.
    pub fn eval(&self, at: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.mul_ref(at).add_ref(c))
    }

    /// Evaluate with coefficients mapped into another ring first.
    pub fn eval_with<S: Ring>(&self, at: &S, lift: impl Fn(&T) -> S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc.mul_ref(at).add_ref(&lift(c)))
    }

    /// Substitute `x -> x^d`.
    pub fn compose_pow(&self, d: usize) -> Self {
        assert!(d >= 1);
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); (self.coeffs.len() - 1) * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * d] = c.clone();
        }
        Self { coeffs }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Polynomial<S> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// Exact division by a polynomial whose leading coefficient divides
    /// exactly at every step; `None` if the division leaves a remainder.
    pub fn div_exact_poly(&self, divisor: &Self) -> Option<Self> {
        divisor.deg()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        T::poly_div_exact(&self.coeffs, &divisor.coeffs).map(Self::new)
    }

    /// Render with the given variable name, highest degree first, e.g.
    /// `u^3 - 2*u + 1`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut body = c.render_atom();
            let negative = body.starts_with('-');
            if negative {
                body.remove(0);
            }
            let term = match (k, body.as_str()) {
                (0, _) => body.clone(),
                (1, "1") => var.to_string(),
                (_, "1") => format!("{var}^{k}"),
                (1, _) => format!("{body}*{var}"),
                _ => format!("{body}*{var}^{k}"),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl<F: Field> Polynomial<F> {
    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.deg().ok_or(Error::DivisionByZero)?;
        let inv = divisor.leading().unwrap().inv().ok_or(Error::DivisionByZero)?;
        let Some(nd) = self.deg() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let q = top.mul_ref(&inv);
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + i] = rem[k + i].sub_ref(&q.mul_ref(dc));
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<T: Ring> Zero for Polynomial<T> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> One for Polynomial<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

fn add_slices<T: Ring>(a: &[T], b: &[T], negate_b: bool) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => {
                if negate_b {
                    x.sub_ref(y)
                } else {
                    x.add_ref(y)
                }
            }
            (Some(x), None) => x.clone(),
            (None, Some(y)) => {
                if negate_b {
                    -y.clone()
                } else {
                    y.clone()
                }
            }
            (None, None) => unreachable!(),
        })
        .collect()
}

impl<T: Ring> Add for Polynomial<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(add_slices(&self.coeffs, &rhs.coeffs, false))
    }
}

impl<T: Ring> Sub for Polynomial<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(add_slices(&self.coeffs, &rhs.coeffs, true))
    }
}

impl<T: Ring> Neg for Polynomial<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<T: Ring> Mul for Polynomial<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<T: Ring> Ring for Polynomial<T> {
    fn from_i64(n: i64) -> Self {
        Self::constant(T::from_i64(n))
    }

    fn add_ref(&self, other: &Self) -> Self {
        Self::new(add_slices(&self.coeffs, &other.coeffs, false))
    }

    fn sub_ref(&self, other: &Self) -> Self {
        Self::new(add_slices(&self.coeffs, &other.coeffs, true))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        Self::new(T::poly_mul(&self.coeffs, &other.coeffs))
    }

    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.div_exact_poly(divisor)
    }

    fn u_degree(&self) -> Option<Degree> {
        Some(self.degree())
    }

    fn u_monic(&self) -> Option<bool> {
        Some(self.leading().is_some_and(|c| c.is_one()))
    }

    fn doubly_monic(&self) -> Option<bool> {
        let unit = |c: &T| c.is_one() || (-c.clone()).is_one();
        Some(!self.is_zero() && unit(self.leading().unwrap()) && unit(self.trailing().unwrap()))
    }

    fn render_atom(&self) -> String {
        let s = self.to_string();
        if self.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 || s.contains('/') {
            format!("({s})")
        } else {
            s
        }
    }
}

impl<T: Ring> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("u"))
    }
}

impl<T: Ring> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::PrimeField;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type QPoly = Polynomial<BigRational>;

    fn qp(c: &[i64]) -> QPoly {
        Polynomial::new(c.iter().map(|&v| BigRational::from_i64(v)).collect())
    }

    fn zp(c: &[i64]) -> Polynomial<BigInt> {
        Polynomial::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn divrem_and_gcd_examples() {
        let (q, r) = qp(&[-1, 0, 1]).divrem(&qp(&[-1, 1])).unwrap();
        assert_eq!(q, qp(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(qp(&[-1, 0, 1]).gcd(&qp(&[1, -2, 1])), qp(&[-1, 1]));
        assert!(qp(&[1]).divrem(&QPoly::zero()).is_err());
    }

    #[test]
    fn compose_with_square() {
        // t + u over Z[u] with t -> t^2
        let u = zp(&[0, 1]);
        let p: Polynomial<Polynomial<BigInt>> = Polynomial::new(vec![u.clone(), Polynomial::one()]);
        let c = p.compose_pow(2);
        assert_eq!(c.coeffs(), &[u, Polynomial::zero(), Polynomial::one()]);
    }

    #[test]
    fn degree_sentinel_is_additive() {
        let z = zp(&[]);
        let a = zp(&[1, 2, 3]);
        assert_eq!(z.degree(), Degree::NegInfinity);
        assert_eq!((z.clone() * a.clone()).degree(), z.degree() + a.degree());
        assert_eq!((a.clone() * a.clone()).degree(), Degree::Finite(4));
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn rendering() {
        assert_eq!(zp(&[1, -2, 0, 1]).to_string(), "u^3 - 2*u + 1");
        assert_eq!(zp(&[0, -1]).to_string(), "-u");
        assert_eq!(zp(&[]).to_string(), "0");
        assert_eq!(qp(&[3, 1]).render("t"), "t + 3");
    }

    #[test]
    fn exact_division() {
        let a = zp(&[0, -1, 1]);
        assert_eq!(a.div_exact_poly(&zp(&[0, 1])), Some(zp(&[-1, 1])));
        assert_eq!(zp(&[1, 0, 1]).div_exact_poly(&zp(&[1, 1])), None);
        assert_eq!(zp(&[2, 2]).div_exact_poly(&zp(&[0, 2])), None);
    }

    fn arb_fp_poly(p: u64) -> impl Strategy<Value = Polynomial<crate::fp::Fp>> {
        let f = PrimeField::new(p).unwrap();
        prop::collection::vec(0..p as i64, 0..8)
            .prop_map(move |v| Polynomial::new(v.into_iter().map(|x| f.elem(x)).collect()))
    }

    proptest! {
        #[test]
        fn divrem_roundtrip_rationals(a in prop::collection::vec(-20i64..20, 0..9),
                                      b in prop::collection::vec(-20i64..20, 1..6)) {
            let (a, b) = (qp(&a), qp(&b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert!(r.degree() < b.degree());
            prop_assert_eq!(q * b + r, a);
        }

        #[test]
        fn divrem_roundtrip_f5(a in arb_fp_poly(5), b in arb_fp_poly(5)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert!(r.degree() < b.degree());
            prop_assert_eq!(q * b + r, a);
        }

        #[test]
        fn divrem_roundtrip_f7(a in arb_fp_poly(7), b in arb_fp_poly(7)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert!(r.degree() < b.degree());
            prop_assert_eq!(q * b + r, a);
        }
    }
}
