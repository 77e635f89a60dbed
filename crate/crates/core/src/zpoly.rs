//! Integer-coefficient polynomials `Z[u]`: content, modular gcd and the
//! doubly-monic predicate.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::fp::is_prime_u64;
use crate::poly::Polynomial;

pub type ZPoly = Polynomial<BigInt>;

/// Schoolbook product with an `i128` accumulator whenever the coefficient
/// sizes guarantee no overflow.
pub(crate) fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let small = |v: &[BigInt]| -> Option<(Vec<i64>, u64)> {
        let mut out = Vec::with_capacity(v.len());
        let mut max = 0u64;
        for c in v {
            let x = c.to_i64()?;
            max = max.max(x.unsigned_abs());
            out.push(x);
        }
        Some((out, max))
    };
    if a.len().min(b.len()) < KRONECKER_MIN_LEN {
        if let (Some((sa, ma)), Some((sb, mb))) = (small(a), small(b)) {
            let terms = a.len().min(b.len()) as u128;
            if (ma as u128) * (mb as u128) * terms < (1u128 << 126) {
                let mut acc = vec![0i128; a.len() + b.len() - 1];
                for (i, &x) in sa.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in sb.iter().enumerate() {
                        acc[i + j] += x as i128 * y as i128;
                    }
                }
                return acc.into_iter().map(BigInt::from).collect();
            }
        }
    }
    if a.len().min(b.len()) >= KRONECKER_MIN_LEN {
        return kronecker_mul(a, b);
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

const KRONECKER_MIN_LEN: usize = 24;

/// Exact division with an `i128` working remainder when everything fits,
/// falling back to arbitrary precision on overflow.
pub(crate) fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let wide = |v: &[BigInt]| -> Option<Vec<i128>> { v.iter().map(|c| c.to_i128()).collect() };
    if let (Some(sa), Some(sb)) = (wide(a), wide(b)) {
        if let Ok(q) = small_div_exact(&sa, &sb) {
            return q.map(|q| q.into_iter().map(BigInt::from).collect());
        }
    }
    crate::ring::generic_poly_div_exact(a, b)
}

struct Overflow;

fn small_div_exact(a: &[i128], b: &[i128]) -> Result<Option<Vec<i128>>, Overflow> {
    if a.len() < b.len() {
        return Ok(a.iter().all(|&c| c == 0).then(Vec::new));
    }
    let dd = b.len() - 1;
    let lead = b[dd];
    let mut rem = a.to_vec();
    let mut quot = vec![0i128; a.len() - dd];
    for k in (0..quot.len()).rev() {
        let top = rem[k + dd];
        if top == 0 {
            continue;
        }
        if top % lead != 0 {
            return Ok(None);
        }
        let q = top / lead;
        for (i, &dc) in b.iter().enumerate() {
            if dc != 0 {
                let prod = q.checked_mul(dc).ok_or(Overflow)?;
                rem[k + i] = rem[k + i].checked_sub(prod).ok_or(Overflow)?;
            }
        }
        quot[k] = q;
    }
    Ok(rem.iter().all(|&c| c == 0).then_some(quot))
}

/// Product via Kronecker substitution: pack both operands into integers with
/// slots wide enough for any product coefficient, multiply once, unpack the
/// balanced digits.
fn kronecker_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let max_bits = |v: &[BigInt]| v.iter().map(|c| c.bits()).max().unwrap_or(0);
    let len_bits = 64 - (a.len().min(b.len()) as u64).leading_zeros() as u64;
    let slot_bits = max_bits(a) + max_bits(b) + len_bits + 2;
    let words = slot_bits.div_ceil(32) as usize;
    let pack = |v: &[BigInt]| -> BigInt {
        let mut pos = vec![0u32; v.len() * words];
        let mut neg = vec![0u32; v.len() * words];
        for (i, c) in v.iter().enumerate() {
            let target = if c.is_negative() { &mut neg } else { &mut pos };
            for (k, d) in c.magnitude().to_u32_digits().into_iter().enumerate() {
                target[i * words + k] = d;
            }
        }
        BigInt::from(BigUint::new(pos)) - BigInt::from(BigUint::new(neg))
    };
    let product = pack(a) * pack(b);
    let (sign, mag) = product.into_parts();
    let digits = mag.to_u32_digits();
    let modulus = BigUint::one() << (32 * words);
    let half = BigUint::one() << (32 * words - 1);
    let n = a.len() + b.len() - 1;
    let mut out = Vec::with_capacity(n);
    let mut carry = false;
    for i in 0..n {
        let lo = (i * words).min(digits.len());
        let hi = ((i + 1) * words).min(digits.len());
        let mut slot = BigUint::new(digits[lo..hi].to_vec());
        if carry {
            slot += 1u32;
        }
        let value = if slot >= half {
            carry = true;
            -BigInt::from(&modulus - slot)
        } else {
            carry = false;
            BigInt::from(slot)
        };
        out.push(if sign == Sign::Minus { -value } else { value });
    }
    out
}

/// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
pub fn content(p: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p.coeffs() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `p / content(p)` with positive leading coefficient.
pub fn primitive_part(p: &ZPoly) -> ZPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut c = content(p);
    if p.leading().unwrap().is_negative() {
        c = -c;
    }
    if c.is_one() {
        return p.clone();
    }
    Polynomial::new(p.coeffs().iter().map(|x| x / &c).collect())
}

fn reduce_mod(p: &ZPoly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut v: Vec<u64> = p
        .coeffs()
        .iter()
        .map(|c| match c.to_i64() {
            Some(x) => x.rem_euclid(m as i64) as u64,
            None => c.mod_floor(&mb).to_u64().unwrap(),
        })
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Moduli stay below 2^31 so products fit a `u64`.
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (a as i128, m as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
    }
    x0.rem_euclid(m as i128) as u64
}

/// Monic gcd of two nonzero polynomials over `F_m` (ascending, trimmed).
fn gcd_mod(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a <- a mod b
        let db = b.len() - 1;
        let inv = inv_mod(*b.last().unwrap(), m);
        while a.len() > db {
            let top = *a.last().unwrap();
            if top != 0 {
                let q = mul_mod(top, inv, m);
                let off = a.len() - 1 - db;
                for (i, &bc) in b.iter().enumerate() {
                    if bc != 0 {
                        let s = mul_mod(q, bc, m);
                        a[off + i] = if a[off + i] >= s { a[off + i] - s } else { a[off + i] + m - s };
                    }
                }
            }
            a.pop();
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    let inv = inv_mod(*a.last().unwrap(), m);
    a.iter().map(|&c| mul_mod(c, inv, m)).collect()
}

/// Primes below 2^31, descending.
fn big_primes() -> impl Iterator<Item = u64> {
    let mut candidate = (1u64 << 31) - 1;
    std::iter::from_fn(move || loop {
        let c = candidate;
        candidate -= 2;
        if is_prime_u64(c) {
            return Some(c);
        }
    })
}

/// Greatest common divisor in `Z[u]`, normalized with positive leading
/// coefficient; includes the integer content gcd.
///
/// Dense modular algorithm: gcds modulo word-size primes, lifted by CRT and
/// confirmed by exact trial division.
pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return primitive_part(b).scale(&content(b));
    }
    if b.is_zero() {
        return primitive_part(a).scale(&content(a));
    }
    let cg = content(a).gcd(&content(b));
    let (pa, pb) = (primitive_part(a), primitive_part(b));
    if pa.is_constant() || pb.is_constant() {
        return Polynomial::constant(cg);
    }
    if pa == pb {
        return pa.scale(&cg);
    }
    let gamma = pa.leading().unwrap().gcd(pb.leading().unwrap());

    let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
    for p in big_primes() {
        let pbig = BigInt::from(p);
        if (pa.leading().unwrap() % &pbig).is_zero() || (pb.leading().unwrap() % &pbig).is_zero() {
            continue;
        }
        let g = gcd_mod(&reduce_mod(&pa, p), &reduce_mod(&pb, p), p);
        if g.len() == 1 {
            return Polynomial::constant(cg);
        }
        let gm = gamma.mod_floor(&pbig).to_u64().unwrap();
        let g: Vec<u64> = g.into_iter().map(|c| mul_mod(c, gm, p)).collect();
        let (coeffs, modulus) = match acc.take() {
            Some((prev, m)) if prev.len() == g.len() => {
                let combined = crt_combine(&prev, &m, &g, p);
                let stable = combined == prev;
                let m2 = &m * &pbig;
                if stable {
                    let cand = primitive_part(&Polynomial::new(combined.clone()));
                    if pa.div_exact_poly(&cand).is_some() && pb.div_exact_poly(&cand).is_some() {
                        return cand.scale(&cg);
                    }
                }
                (combined, m2)
            }
            // unlucky prime: its gcd is too large
            Some((prev, m)) if prev.len() < g.len() => (prev, m),
            _ => (g.into_iter().map(|c| symmetric(BigInt::from(c), &pbig)).collect(), pbig),
        };
        acc = Some((coeffs, modulus));
    }
    unreachable!("prime supply is unbounded")
}

fn symmetric(c: BigInt, m: &BigInt) -> BigInt {
    let half: BigInt = m >> 1;
    if c > half {
        c - m
    } else {
        c
    }
}

/// Combine residues `prev (mod m)` and `cur (mod p)` into symmetric residues
/// modulo `m * p`.
fn crt_combine(prev: &[BigInt], m: &BigInt, cur: &[u64], p: u64) -> Vec<BigInt> {
    let pbig = BigInt::from(p);
    let m_mod_p = m.mod_floor(&pbig).to_u64().unwrap();
    let m_inv = inv_mod(m_mod_p, p);
    let mp = m * &pbig;
    prev.iter()
        .zip(cur)
        .map(|(r, &c)| {
            let r_mod_p = r.mod_floor(&pbig).to_u64().unwrap();
            let diff = (c + p - r_mod_p) % p;
            let k = mul_mod(diff, m_inv, p);
            let v = r + m * BigInt::from(k);
            symmetric(v.mod_floor(&mp), &mp)
        })
        .collect()
}

/// Leading and lowest nonzero coefficients are both `+-1`.
pub fn is_unit_bounded(p: &ZPoly) -> bool {
    let unit = |c: &BigInt| c.magnitude().is_one();
    !p.is_zero() && unit(p.leading().unwrap()) && unit(p.trailing().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use proptest::prelude::*;

    fn zp(c: &[i64]) -> ZPoly {
        Polynomial::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&zp(&[-1, 0, 1]), &zp(&[1, -2, 1])), zp(&[-1, 1]));
        assert_eq!(gcd(&zp(&[0, -1, 1]), &zp(&[0, 1])), zp(&[0, 1]));
        assert_eq!(gcd(&zp(&[2, 4]), &zp(&[6])), zp(&[2]));
        assert_eq!(gcd(&zp(&[6, 6]), &zp(&[4, 4])), zp(&[2, 2]));
        assert_eq!(gcd(&zp(&[1, 1]), &zp(&[1, -1])), zp(&[1]));
        assert_eq!(gcd(&zp(&[]), &zp(&[-3, -6])), zp(&[3, 6]));
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state
        };
        for round in 0..20 {
            let la = 24 + (next() % 50) as usize;
            let lb = 24 + (next() % 50) as usize;
            let shift = (round * 7) as u32;
            let mut gen = |l: usize| -> Vec<BigInt> {
                (0..l).map(|_| (BigInt::from(next() as i64) << shift) / BigInt::from(1 + (next() % 1000) as i64)).collect()
            };
            let (a, b) = (gen(la), gen(lb));
            let mut expected = vec![BigInt::zero(); la + lb - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    expected[i + j] += x * y;
                }
            }
            assert_eq!(kronecker_mul(&a, &b), expected, "round {round}");
        }
    }

    #[test]
    fn large_coefficient_mul_uses_bigint_path() {
        let big = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62);
        let a = Polynomial::new(vec![big.clone(), BigInt::one()]);
        let sq = a.mul_ref(&a);
        assert_eq!(sq.coeff(0), &big * &big);
        assert_eq!(sq.coeff(1), &big * 2);
    }

    fn arb_zpoly() -> impl Strategy<Value = ZPoly> {
        prop::collection::vec(-9i64..10, 0..7).prop_map(|v| zp(&v))
    }

    proptest! {
        #[test]
        fn gcd_divides_and_is_maximal(a in arb_zpoly(), b in arb_zpoly(), c in arb_zpoly()) {
            prop_assume!(!c.is_zero() && !a.is_zero() && !b.is_zero());
            let (x, y) = (a.mul_ref(&c), b.mul_ref(&c));
            let g = gcd(&x, &y);
            prop_assert!(x.div_exact_poly(&g).is_some());
            prop_assert!(y.div_exact_poly(&g).is_some());
            // c divides both, so it divides the gcd
            prop_assert!(g.div_exact_poly(&c).is_some());
        }
    }
}
