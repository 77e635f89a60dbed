use gtm_core::hankel::{block_factor_check, build, det_exact, grid_compute, row_determinants, Strategy};
use gtm_core::series::{expand_product, LaurentSeries, MahlerSpec};
use gtm_core::{PrimeField, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Determinant by cofactor expansion along the first row.
fn cofactor(m: &[Vec<Q>]) -> Q {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = Q::zero();
    for (j, a) in m[0].iter().enumerate() {
        let minor: Vec<Vec<Q>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = a * cofactor(&minor);
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn determinants_match_cofactor_expansion(coeffs in prop::collection::vec(-3i64..4, 12), n in 1u64..4, l in 0u64..4) {
        let s = LaurentSeries::from_coeffs(1, coeffs.into_iter().map(q).collect());
        let m = build(&s, n, l, false, &Q::zero()).unwrap();
        prop_assert!(m.is_symmetric());
        let rows: Vec<Vec<Q>> = m.entries.clone();
        prop_assert_eq!(det_exact(&m), cofactor(&rows));
    }

    #[test]
    fn row_sweep_matches_cellwise(coeffs in prop::collection::vec(-2i64..3, 14), n in 1u64..4) {
        // small entries make zero pivots common, which exercises the fallback
        let s = LaurentSeries::from_coeffs(1, coeffs.into_iter().map(q).collect());
        let l_max = (14 - n) / 2;
        let row = row_determinants(&s, n, l_max).unwrap();
        for (l, det) in row.iter().enumerate() {
            let m = build(&s, n, l as u64, false, &Q::zero()).unwrap();
            prop_assert_eq!(det, &det_exact(&m));
        }
    }

    #[test]
    fn strategies_agree_over_prime_fields(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), uv in 1i64..13) {
        let f = PrimeField::new(p).unwrap();
        let u = f.elem(uv);
        prop_assume!(!u.is_zero());
        let g = expand_product(&MahlerSpec::linear(u), 24);
        let direct = grid_compute(&g, 24, Strategy::Direct, Some(&u)).unwrap();
        let block = grid_compute(&g, 24, Strategy::BlockAccelerated, Some(&u)).unwrap();
        prop_assert_eq!(direct.to_csv(), block.to_csv());
        for ((n, l), _) in direct.cells() {
            prop_assert!(block_factor_check(&direct, n, l).unwrap());
        }
    }
}

#[test]
fn corrupted_cell_fails_block_check() {
    let g = expand_product(&MahlerSpec::linear(q(3)), 20);
    let mut grid = grid_compute(&g, 20, Strategy::Direct, Some(&q(3))).unwrap();
    assert!(block_factor_check(&grid, 5, 2).unwrap());
    let det = grid.cell(5, 2).unwrap().det.clone();
    grid.corrupt(5, 2, det + q(1)).unwrap();
    assert!(!block_factor_check(&grid, 5, 2).unwrap());
}

#[test]
fn cells_outside_coverage_are_errors() {
    let g = expand_product(&MahlerSpec::linear(q(2)), 10);
    let grid = grid_compute(&g, 10, Strategy::Direct, None).unwrap();
    assert!(grid.cell(5, 3).is_err());
    assert!(grid.cell(0, 1).is_err());
    assert!(grid.cell(4, 3).is_ok());
}
