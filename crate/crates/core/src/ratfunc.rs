//! Rational functions `Q(u)` stored as reduced quotients of integer
//! polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial};
use crate::ring::{gauss_determinant, Field, Ring};
use crate::zpoly::{self, is_unit_bounded, ZPoly};

/// `num / den` with `gcd(num, den)` constant, coprime contents, and a
/// positive leading coefficient on `den`. This form is unique, so structural
/// equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: ZPoly,
    den: ZPoly,
}

/// Reduce `num / den` to canonical form.
pub fn ratfunc_normalize(num: ZPoly, den: ZPoly) -> Result<RatFunc> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(RatFunc::reduce(num, den))
}

impl RatFunc {
    fn reduce(num: ZPoly, den: ZPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = zpoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact_poly(&g).unwrap(), den.div_exact_poly(&g).unwrap())
        };
        Self::fix_sign(num, den)
    }

    fn fix_sign(num: ZPoly, den: ZPoly) -> Self {
        if den.leading().unwrap().is_negative() {
            Self { num: -num, den: -den }
        } else {
            Self { num, den }
        }
    }

    pub fn from_poly(p: ZPoly) -> Self {
        Self { num: p, den: ZPoly::one() }
    }

    /// The parameter `u`.
    pub fn u() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::reduce(
            Polynomial::constant(q.numer().clone()),
            Polynomial::constant(q.denom().clone()),
        )
    }

    pub fn numer(&self) -> &ZPoly {
        &self.num
    }

    pub fn denom(&self) -> &ZPoly {
        &self.den
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        Some(self.num.deg()? as i64 - self.den.deg().unwrap() as i64)
    }

    /// True iff the leading and lowest nonzero coefficients of numerator and
    /// denominator are all `+-1`. Errors on zero.
    pub fn is_doubly_monic(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::UndefinedInput("doubly-monic test of 0".into()));
        }
        Ok(is_unit_bounded(&self.num) && is_unit_bounded(&self.den))
    }

    /// Value at a rational point; `None` if the denominator vanishes there.
    pub fn eval(&self, at: &BigRational) -> Option<BigRational> {
        let lift = |c: &BigInt| BigRational::from_integer(c.clone());
        let d = self.den.eval_with(at, lift);
        (!d.is_zero()).then(|| self.num.eval_with(at, lift) / d)
    }

    pub fn pow_i(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow_u(e as u64)
        } else {
            self.inv().expect("negative power of zero").pow_u(e.unsigned_abs())
        }
    }
}

/// Integer-coefficient polynomials are the symbolic Hankel domain; this lifts
/// them into the fraction field.
impl From<ZPoly> for RatFunc {
    fn from(p: ZPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self { num: ZPoly::zero(), den: ZPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_poly(ZPoly::one())
    }
}

impl RatFunc {
    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let b = if negate { -other.clone() } else { other.clone() };
        if self.is_zero() {
            return b;
        }
        if b.is_zero() {
            return self.clone();
        }
        if self.den == b.den {
            if self.den.is_one() {
                return Self::from_poly(self.num.add_ref(&b.num));
            }
            return Self::reduce(self.num.add_ref(&b.num), self.den.clone());
        }
        // Henrici: with g = gcd(d1, d2) only g can share factors with the new numerator
        let g = zpoly::gcd(&self.den, &b.den);
        let d1 = self.den.div_exact_poly(&g).unwrap();
        let d2 = b.den.div_exact_poly(&g).unwrap();
        let num = self.num.mul_ref(&d2).add_ref(&b.num.mul_ref(&d1));
        if num.is_zero() {
            return Self::zero();
        }
        let den = d1.mul_ref(&b.den);
        if g.is_constant() {
            let c = g.coeff(0);
            if c.is_one() {
                // contents may still share a factor
                return Self::reduce_content(num, den);
            }
        }
        let h = zpoly::gcd(&num, &g);
        if h.is_one() {
            Self::fix_sign(num, den)
        } else {
            Self::fix_sign(num.div_exact_poly(&h).unwrap(), den.div_exact_poly(&h).unwrap())
        }
    }

    fn reduce_content(num: ZPoly, den: ZPoly) -> Self {
        let c = zpoly::content(&num).gcd(&zpoly::content(&den));
        if c.is_one() {
            Self::fix_sign(num, den)
        } else {
            let c = Polynomial::constant(c);
            Self::fix_sign(num.div_exact_poly(&c).unwrap(), den.div_exact_poly(&c).unwrap())
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul_ref(&other.num));
        }
        let g1 = zpoly::gcd(&self.num, &other.den);
        let g2 = zpoly::gcd(&other.num, &self.den);
        let div = |p: &ZPoly, g: &ZPoly| if g.is_one() { p.clone() } else { p.div_exact_poly(g).unwrap() };
        let num = div(&self.num, &g1).mul_ref(&div(&other.num, &g2));
        let den = div(&self.den, &g2).mul_ref(&div(&other.den, &g1));
        Self::fix_sign(num, den)
    }
}

impl Add for RatFunc {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_impl(&rhs, false)
    }
}

impl Sub for RatFunc {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_impl(&rhs, true)
    }
}

impl Mul for RatFunc {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(&rhs)
    }
}

impl Div for RatFunc {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.mul_impl(&rhs.inv().expect("division by zero rational function"))
    }
}

impl Neg for RatFunc {
    type Output = Self;
    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }
}

impl Ring for RatFunc {
    fn from_i64(n: i64) -> Self {
        Self::from_poly(Polynomial::constant(BigInt::from(n)))
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.add_impl(other, false)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_impl(other, true)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.mul_impl(other)
    }

    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        divisor.inv().map(|d| self.mul_impl(&d))
    }

    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        gauss_determinant(rows)
    }

    fn u_degree(&self) -> Option<Degree> {
        if self.den.is_constant() {
            Some(self.num.degree())
        } else {
            None
        }
    }

    fn doubly_monic(&self) -> Option<bool> {
        self.is_doubly_monic().ok().or(Some(false))
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::fix_sign(self.den.clone(), self.num.clone()))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &ZPoly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zp(c: &[i64]) -> ZPoly {
        Polynomial::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        ratfunc_normalize(zp(n), zp(d)).unwrap()
    }

    #[test]
    fn normalization_examples() {
        // (u^2 - u) / u = u - 1
        assert_eq!(rf(&[0, -1, 1], &[0, 1]), RatFunc::from_poly(zp(&[-1, 1])));
        assert_eq!(rf(&[0, -1, 1], &[1]).numer(), &zp(&[0, -1, 1]));
        // beta_2 / beta_2 with a minus sign gives -1
        let b2 = rf(&[0, -1, 1], &[1]);
        assert_eq!(-(b2.clone() / b2), RatFunc::from_i64(-1));
        assert!(ratfunc_normalize(zp(&[1]), zp(&[])).is_err());
        // sign lives in the numerator, contents are coprime
        let r = rf(&[2], &[0, -4]);
        assert_eq!(r.numer(), &zp(&[-1]));
        assert_eq!(r.denom(), &zp(&[0, 2]));
    }

    #[test]
    fn doubly_monic_examples() {
        assert!(rf(&[0, -1, 1], &[1]).is_doubly_monic().unwrap());
        assert!(!rf(&[1, 2], &[1]).is_doubly_monic().unwrap());
        assert!(RatFunc::one().is_doubly_monic().unwrap());
        assert!(RatFunc::zero().is_doubly_monic().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(rf(&[0, -1, 1], &[1, 1, 1]).to_string(), "(u^2 - u)/(u^2 + u + 1)");
        assert_eq!(rf(&[-1], &[0, 2]).to_string(), "-1/2*u");
    }

    fn arb_rf() -> impl Strategy<Value = RatFunc> {
        (prop::collection::vec(-4i64..5, 0..4), prop::collection::vec(-4i64..5, 1..4))
            .prop_filter_map("nonzero denominator", |(n, d)| ratfunc_normalize(zp(&n), zp(&d)).ok())
    }

    fn arb_doubly_monic() -> impl Strategy<Value = RatFunc> {
        // products of generators u, u +- 1, u^2 + u + 1, u^2 - u - 1 and their inverses
        let gens = [zp(&[0, 1]), zp(&[1, 1]), zp(&[-1, 1]), zp(&[1, 1, 1]), zp(&[-1, -1, 1]), zp(&[1, 0, -1, 1])];
        prop::collection::vec((0..gens.len(), any::<bool>()), 1..5).prop_map(move |picks| {
            picks.into_iter().fold(RatFunc::one(), |acc, (i, invert)| {
                let g = RatFunc::from_poly(gens[i].clone());
                if invert { acc / g } else { acc * g }
            })
        })
    }

    proptest! {
        #[test]
        fn field_axioms_hold(a in arb_rf(), b in arb_rf(), c in arb_rf()) {
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!((a.clone() - b.clone()) + b.clone(), a.clone());
            if !b.is_zero() {
                prop_assert_eq!((a.clone() / b.clone()) * b.clone(), a);
            }
        }

        #[test]
        fn normalization_is_idempotent_and_stable(a in arb_rf(), b in arb_rf()) {
            let again = ratfunc_normalize(a.numer().clone(), a.denom().clone()).unwrap();
            prop_assert_eq!(&again, &a);
            let raw = ratfunc_normalize(a.numer().mul_ref(b.numer()), a.denom().mul_ref(b.denom())).unwrap();
            prop_assert_eq!(raw, a * b);
        }

        #[test]
        fn doubly_monic_closed_under_products_and_quotients(a in arb_doubly_monic(), b in arb_doubly_monic()) {
            prop_assert!(a.is_doubly_monic().unwrap());
            prop_assert!((a.clone() * b.clone()).is_doubly_monic().unwrap());
            prop_assert!((a / b).is_doubly_monic().unwrap());
        }

        #[test]
        fn doubly_monic_values_are_finite_and_nonzero(a in arb_doubly_monic()) {
            for (n, d) in [(2, 1), (-2, 1), (1, 2), (3, 5)] {
                let v = a.eval(&BigRational::new(n.into(), d.into()));
                prop_assert!(v.is_some_and(|v| !v.is_zero()));
            }
        }
    }
}
