//! Prime fields `F_p` with a runtime modulus.
//!
//! Elements carry their modulus. `Zero::zero()`, `One::one()` and
//! `Ring::from_i64` have no modulus to attach to, so they produce *unbound*
//! integer constants (modulus `0`) which adopt the modulus of whatever bound
//! element they are first combined with. Mixing two different moduli panics.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{gauss_determinant, Field, Ring};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Moduli are capped at 2^62 so residues fit in `i64`.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 62 || !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp {
            p: self.p,
            r: v.rem_euclid(self.p as i64),
        }
    }
}

/// Element of `F_p`, or an unbound integer constant when `p == 0`.
#[derive(Debug, Clone, Copy)]
pub struct Fp {
    p: u64,
    r: i64,
}

impl Fp {
    pub fn modulus(&self) -> Option<u64> {
        (self.p != 0).then_some(self.p)
    }

    /// Residue in `[0, p)`; for an unbound constant, the raw integer.
    pub fn residue(&self) -> i64 {
        self.r
    }

    fn bind(self, p: u64) -> Fp {
        if self.p == p {
            self
        } else {
            assert_eq!(self.p, 0, "mixed prime moduli {} and {}", self.p, p);
            Fp {
                p,
                r: self.r.rem_euclid(p as i64),
            }
        }
    }

    fn unify(self, other: Fp) -> (Fp, Fp, u64) {
        let p = if self.p != 0 { self.p } else { other.p };
        if p == 0 {
            (self, other, 0)
        } else {
            (self.bind(p), other.bind(p), p)
        }
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut acc = Fp::one().bind_if(self.p);
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn bind_if(self, p: u64) -> Fp {
        if p == 0 {
            self
        } else {
            self.bind(p)
        }
    }
}

fn mulmod(a: i64, b: i64, p: u64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(p as i128)) as i64
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.unify(*other);
        a.r == b.r
    }
}

impl Eq for Fp {}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b, p) = self.unify(rhs);
        if p == 0 {
            return Fp { p: 0, r: a.r.checked_add(b.r).expect("unbound overflow") };
        }
        Fp { p, r: ((a.r as i128 + b.r as i128) % p as i128) as i64 }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.p == 0 {
            Fp { p: 0, r: -self.r }
        } else {
            Fp { p: self.p, r: (self.p as i64 - self.r) % self.p as i64 }
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b, p) = self.unify(rhs);
        if p == 0 {
            return Fp { p: 0, r: a.r.checked_mul(b.r).expect("unbound overflow") };
        }
        Fp { p, r: mulmod(a.r, b.r, p) }
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp { p: 0, r: 0 }
    }
    fn is_zero(&self) -> bool {
        self.r == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp { p: 0, r: 1 }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)
    }
}

impl Ring for Fp {
    fn from_i64(n: i64) -> Self {
        Fp { p: 0, r: n }
    }

    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        divisor.inv().map(|d| *self * d)
    }

    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        gauss_determinant(rows)
    }

    fn render_atom(&self) -> String {
        self.to_string()
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.p == 0 {
            // only +-1 are invertible without a modulus
            return (self.r == 1 || self.r == -1).then_some(*self);
        }
        // extended Euclid
        let (mut a, mut b) = (self.r as i128, self.p as i128);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        debug_assert_eq!(a, 1);
        Some(Fp { p: self.p, r: x0.rem_euclid(self.p as i128) as i64 })
    }
}

/// Multiplicative order of a nonzero element: least `k >= 1` with `u^k = 1`.
pub fn mult_order(u: Fp) -> Result<u64> {
    let p = u
        .modulus()
        .ok_or_else(|| Error::UndefinedInput("element has no modulus".into()))?;
    if u.is_zero() {
        return Err(Error::UndefinedInput("order of 0".into()));
    }
    // the order divides p - 1
    let n = p - 1;
    let mut divisors: Vec<u64> = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            divisors.push(d);
            divisors.push(n / d);
        }
        d += 1;
    }
    divisors.sort_unstable();
    Ok(divisors
        .into_iter()
        .find(|&k| u.pow(k) == Fp::one())
        .expect("Fermat: u^(p-1) = 1"))
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulm(acc, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
