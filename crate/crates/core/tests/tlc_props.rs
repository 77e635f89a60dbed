use gtm_core::tlc::{certify_numeric, elc_threshold, finite_field_search, Verdict};
use gtm_core::{Polynomial, PrimeField, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// det of a Hankel block of g_u over F_p, by Gaussian elimination on residues.
fn det_mod_p(p: u64, u: u64, n: u64, l: u64) -> u64 {
    let pw = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let a = |k: u64| pw(u, (k - 1).count_ones() as u64);
    let size = (l + 1) as usize;
    let mut m: Vec<Vec<u64>> =
        (0..size).map(|i| (0..size).map(|j| a(n + i as u64 + j as u64)).collect()).collect();
    let mut det = 1u64;
    for c in 0..size {
        let Some(r) = (c..size).find(|&r| m[r][c] != 0) else { return 0 };
        if r != c {
            m.swap(r, c);
            det = (p - det) % p;
        }
        det = det * m[c][c] % p;
        let inv = pw(m[c][c], p - 2);
        for r in c + 1..size {
            let f = m[r][c] * inv % p;
            let pivot = m[c].clone();
            for (x, y) in m[r].iter_mut().zip(&pivot).skip(c) {
                *x = (*x + p - f * y % p) % p;
            }
        }
    }
    det
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn no_singular_cells_off_the_units(num in -9i64..10, den in 1i64..7) {
        let u = q(num, den);
        prop_assume!(!u.is_zero() && u != q(1, 1) && u != q(-1, 1));
        let r = certify_numeric(&u, 16).unwrap();
        prop_assert_eq!(r.counts.singular, 0);
        prop_assert_eq!(r.verdict, Verdict::CertifiedUpToBound);
    }

    #[test]
    fn finite_field_witnesses_are_singular(p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23]), uv in 1u64..23) {
        let u = uv % p;
        prop_assume!(u != 0);
        let f = PrimeField::new(p).unwrap();
        let w = finite_field_search(p, u).unwrap();
        prop_assert!(w.validated);
        prop_assert_eq!(w.order, gtm_core::fp::mult_order(f.elem(u as i64)).unwrap());
        prop_assert_eq!(det_mod_p(p, u, w.n, w.l), 0);
    }
}

#[test]
fn threshold_is_degree_over_d_minus_one() {
    let p = Polynomial::new(vec![q(1, 1), q(0, 1), q(0, 1), q(1, 1)]);
    assert_eq!(elc_threshold(&p, 3).unwrap(), q(3, 2));
    assert!(elc_threshold(&p, 1).is_err());
}

#[test]
fn u_minus_one_counterexample() {
    let r = certify_numeric(&q(-1, 1), 8).unwrap();
    assert_eq!(r.verdict, Verdict::Counterexample { n: 3, l: 1 });
    assert!(certify_numeric(&q(0, 1), 8).is_err());
}
