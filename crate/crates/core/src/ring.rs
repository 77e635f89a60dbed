//! Coefficient-domain traits.
//!
//! Everything downstream (series, continued fractions, Hankel determinants)
//! is generic over [`Ring`] or [`Field`]. The concrete domains are the
//! rationals, prime fields, `Z[u]` and `Q(u)`; see the aliases at the crate
//! root.

use std::fmt::{Debug, Display};
use std::ops::{Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Degree;

/// An exact commutative ring with identity.
///
/// The by-reference methods exist so hot loops can avoid clones; the defaults
/// fall back to the by-value operators.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn pow_u(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` when the division does not
    /// stay inside the ring (or the divisor is zero).
    fn div_exact(&self, divisor: &Self) -> Option<Self>;

    /// Dense schoolbook product of two ascending coefficient slices.
    /// Overridden by integer coefficients to run a machine-word fast path.
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Self::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
            }
        }
        out
    }

    /// Exact quotient of two trimmed ascending coefficient slices (`b`
    /// nonzero), or `None` if a remainder is left.
    fn poly_div_exact(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        generic_poly_div_exact(a, b)
    }

    /// Determinant of a square matrix (rows given in order). Integral domains
    /// use fraction-free elimination; fields override with Gaussian
    /// elimination.
    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        bareiss_determinant(rows)
    }

    /// Degree as a polynomial in the parameter `u`, for symbolic domains.
    fn u_degree(&self) -> Option<Degree> {
        None
    }

    /// Monic (leading coefficient +1) as a polynomial in `u`; symbolic only.
    fn u_monic(&self) -> Option<bool> {
        None
    }

    /// Doubly-monic predicate; symbolic domains only.
    fn doubly_monic(&self) -> Option<bool> {
        None
    }

    /// Wrap in parentheses when the rendering is a compound expression.
    fn render_atom(&self) -> String {
        let s = self.to_string();
        let compound = s.trim_start_matches('-').contains([' ', '/', '+']);
        if compound {
            format!("({s})")
        } else {
            s
        }
    }

    fn eq_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == -other.clone()
    }
}

pub(crate) fn generic_poly_div_exact<T: Ring>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    if a.len() < b.len() {
        return a.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let (nd, dd) = (a.len() - 1, b.len() - 1);
    let lead = &b[dd];
    let mut rem = a.to_vec();
    let mut quot = vec![T::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let top = &rem[k + dd];
        if top.is_zero() {
            continue;
        }
        let q = top.div_exact(lead)?;
        for (i, dc) in b.iter().enumerate() {
            if !dc.is_zero() {
                rem[k + i] = rem[k + i].sub_ref(&q.mul_ref(dc));
            }
        }
        quot[k] = q;
    }
    rem.iter().all(|c| c.is_zero()).then_some(quot)
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    fn inv(&self) -> Option<Self>;
}

/// Fraction-free (Bareiss) determinant. Every division is exact in an
/// integral domain; row swaps handle zero pivots.
pub fn bareiss_determinant<T: Ring>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        if k + 1 == n {
            break;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in (k + 1)..n {
                let mut v = row[j].mul_ref(pivot);
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    v = v.sub_ref(&lead.mul_ref(&pivot_row[j]));
                }
                row[j] = v
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly in an integral domain");
            }
            row[k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Gaussian elimination over a field.
pub fn gauss_determinant<F: Field>(mut m: Vec<Vec<F>>) -> F {
    let n = m.len();
    let mut det = F::one();
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return F::zero();
        };
        if r != k {
            m.swap(k, r);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det = det.mul_ref(&pivot);
        let inv = pivot.inv().expect("nonzero pivot");
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let factor = row[k].mul_ref(&inv);
            for j in (k + 1)..n {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].sub_ref(&factor.mul_ref(&pivot_row[j]));
                }
            }
            row[k] = F::zero();
        }
    }
    det
}

impl Ring for BigInt {
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        crate::zpoly::int_poly_mul(a, b)
    }

    fn poly_div_exact(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        crate::zpoly::int_poly_div_exact(a, b)
    }
}

impl Ring for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        (!divisor.is_zero()).then(|| self / divisor)
    }

    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        gauss_determinant(rows)
    }

    fn render_atom(&self) -> String {
        if self.is_integer() {
            self.to_string()
        } else if self.is_negative() {
            format!("-({})", -self)
        } else {
            format!("({self})")
        }
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(z(n), z(d))
    }

    #[test]
    fn bareiss_matches_cofactor_on_small_integer_matrices() {
        let m = vec![vec![z(2), z(-1), z(0)], vec![z(-1), z(2), z(-1)], vec![z(0), z(-1), z(2)]];
        assert_eq!(bareiss_determinant(m), z(4));
        // zero leading pivot forces a row swap
        let m = vec![vec![z(0), z(1)], vec![z(1), z(0)]];
        assert_eq!(bareiss_determinant(m), z(-1));
        let m = vec![vec![z(1), z(2)], vec![z(2), z(4)]];
        assert_eq!(bareiss_determinant(m), z(0));
        assert_eq!(bareiss_determinant::<BigInt>(vec![]), z(1));
    }

    #[test]
    fn gauss_over_rationals() {
        let m = vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]];
        assert_eq!(gauss_determinant(m), q(1, 10) - q(1, 12));
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(z(3).pow_u(5), z(243));
        assert_eq!(z(7).pow_u(0), z(1));
    }
}
