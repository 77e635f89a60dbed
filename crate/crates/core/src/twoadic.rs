//! Binary digit statistics used throughout the coefficient and degree formulas.
//!
//! `v2` is the standard 2-adic valuation (largest `k` with `2^k | n`). Formulas
//! that are usually written with a degree-style valuation are restated here in
//! terms of `v2`.

use crate::error::{Error, Result};

/// Binary digit sum and 2-adic valuation of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoAdicStats {
    pub tau2: u32,
    /// `None` for `n = 0`, where the valuation is undefined.
    pub v2: Option<u32>,
}

pub fn two_adic_stats(n: u64) -> TwoAdicStats {
    TwoAdicStats {
        tau2: tau2(n),
        v2: v2(n).ok(),
    }
}

/// Number of ones in the binary expansion of `n`.
#[inline]
pub fn tau2(n: u64) -> u32 {
    n.count_ones()
}

pub fn v2(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::UndefinedInput("2-adic valuation of 0".into()));
    }
    Ok(n.trailing_zeros())
}

/// `sigma(n) = tau2(1) + ... + tau2(n)`, and `0` for `n <= 0`.
pub fn sigma(n: i64) -> u64 {
    if n <= 0 {
        return 0;
    }
    // count ones bit by bit over 0..=n
    let n = n as u64;
    let mut total = 0u64;
    for bit in 0..64 {
        let period = 1u128 << (bit + 1);
        let count = n as u128 + 1;
        let full = count / period * (period / 2);
        let rem = (count % period).saturating_sub(period / 2);
        total += (full + rem) as u64;
        if (1u128 << bit) > n as u128 {
            break;
        }
    }
    total
}

/// `phi(m) = (m / 2^v2(m) - 1) / 2`: strips the powers of two and halves.
pub fn phi(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::UndefinedInput("phi is defined for m >= 1".into()));
    }
    let odd = m >> m.trailing_zeros();
    Ok((odd - 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sigma_brute(n: i64) -> u64 {
        (1..=n.max(0) as u64).map(|i| tau2(i) as u64).sum()
    }

    #[test]
    fn examples() {
        assert_eq!(two_adic_stats(0), TwoAdicStats { tau2: 0, v2: None });
        assert_eq!(two_adic_stats(5), TwoAdicStats { tau2: 2, v2: Some(0) });
        assert_eq!(two_adic_stats(12), TwoAdicStats { tau2: 2, v2: Some(2) });
        assert!(v2(0).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(-3), 0);
        assert_eq!(sigma(0), 0);
        assert_eq!(sigma(2), 2);
        assert_eq!(sigma(4), 5);
        assert_eq!(sigma(3), 4);
        for n in -5..3000 {
            assert_eq!(sigma(n), sigma_brute(n), "n={n}");
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(4).unwrap(), 0);
        assert_eq!(phi(3).unwrap(), 1);
        assert_eq!(phi(6).unwrap(), 1);
        assert_eq!(tau2(6), tau2(1) + 1);
        assert!(phi(0).is_err());
    }

    #[test]
    fn tau2_step_identity() {
        for n in 1..=(1u64 << 16) {
            let lhs = tau2(n) as i64;
            let rhs = tau2(n - 1) as i64 + 1 - v2(n).unwrap() as i64;
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn phi_is_a_bijection_on_upper_half() {
        for l in 0..=(1u64 << 10) {
            let mut seen = vec![false; l as usize + 1];
            for m in (l + 1)..=(2 * l + 1) {
                let image = phi(m).unwrap();
                assert!(image <= l);
                assert!(!seen[image as usize], "l={l} m={m}");
                seen[image as usize] = true;
                assert_eq!(tau2(m), tau2(image) + 1);
            }
        }
    }

    proptest! {
        #[test]
        fn sigma_is_additive_in_tau(n in 1i64..1_000_000) {
            prop_assert_eq!(sigma(n), sigma(n - 1) + tau2(n as u64) as u64);
        }
    }
}
