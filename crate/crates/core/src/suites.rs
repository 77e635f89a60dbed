//! Named verification suites, one per checkable claim about `g_u`. Each run
//! reports how many instances it checked and the first failing one.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::contfrac::{beta_recurrence, cf_expand, coeffs_from_hankel, legendre_verify, shifted_recurrence, CfField, LegendreOutcome};
use crate::error::{Error, Result};
use crate::fp::PrimeField;
use crate::hankel::{
    block_factor_check, convergent_degrees, degree_formula_check, grid_compute, han_first_mismatch, row_determinants,
    twisted_degree_check, Strategy,
};
use crate::poly::{Degree, Polynomial};
use crate::ring::Ring;
use crate::series::{coeff_closed_form, expand_product, mirror_identity_check, LaurentSeries, MahlerSpec, Transform};
use crate::twoadic::{sigma, v2};
use crate::{Qu, Zu, Q};

pub const SUITES: [&str; 11] =
    ["prop2", "prop3", "prop4", "recur", "nrecur", "blocks", "degrees", "han", "legendre", "mirror", "corollary1"];

/// Optional size overrides; each suite documents which one it reads.
#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    pub n: Option<u64>,
    pub m: Option<usize>,
    pub d: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub first_failure: Option<String>,
    pub params: serde_json::Value,
}

#[derive(Default)]
struct Tally {
    checked: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    fn finish(self, name: &str, params: serde_json::Value) -> SuiteResult {
        SuiteResult {
            name: name.to_string(),
            passed: self.first_failure.is_none(),
            checked: self.checked,
            first_failure: self.first_failure,
            params,
        }
    }
}

pub fn run_suite(name: &str, p: &SuiteParams) -> Result<SuiteResult> {
    match name {
        "prop2" => prop2(p.n.unwrap_or(16384)),
        "prop3" => prop3(p.m.unwrap_or(512)),
        "prop4" => prop4(p.n.unwrap_or(24)),
        "recur" => recur(p.m.unwrap_or(200), p.n.unwrap_or(2048)),
        "nrecur" => nrecur(p.n.unwrap_or(16), p.m.unwrap_or(30)),
        "blocks" => blocks(p.n.unwrap_or(48)),
        "degrees" => degrees(p.n.unwrap_or(48)),
        "han" => han(p.n.unwrap_or(64)),
        "legendre" => legendre(p.n.unwrap_or(256)),
        "mirror" => mirror(p.d.unwrap_or(10)),
        "corollary1" => corollary1(p.n.unwrap_or(90)),
        _ => Err(Error::UndefinedInput(format!("unknown suite {name}; known: {}", SUITES.join(", ")))),
    }
}

fn zu_u() -> Zu {
    Polynomial::x()
}

fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The numeric parameters the recurrence suites sample.
pub fn sample_us() -> Vec<Q> {
    vec![q(2, 1), q(-2, 1), q(1, 2), q(3, 5)]
}

fn g<T: Ring>(u: T, n: usize) -> LaurentSeries<T> {
    expand_product(&MahlerSpec::linear(u), n)
}

/// Product expansion against `u^{tau2(n-1)}`, `1 <= n <= N`.
pub fn prop2(n: u64) -> Result<SuiteResult> {
    let u = zu_u();
    let s = g(u.clone(), n as usize);
    let mut t = Tally::default();
    for k in 1..=n {
        let ok = s.coeff(k as i64)? == coeff_closed_form(&u, k);
        t.check(ok, || format!("a_{k}"));
    }
    Ok(t.finish("prop2", serde_json::json!({ "N": n })))
}

/// `deg beta_m = 2(1 - v2(m-1))` over `Q(u)`, `2 <= m <= M`.
pub fn prop3(m: usize) -> Result<SuiteResult> {
    let rec = beta_recurrence(&Qu::u(), m)?;
    if let Some(i) = rec.aborted_at {
        return Err(Error::UndefinedInput(format!("symbolic recurrence hit beta_{i} = 0")));
    }
    let mut t = Tally::default();
    for (i, (_, beta)) in rec.terms.iter().enumerate().skip(1) {
        let idx = i + 1;
        let expect = 2 * (1 - v2(idx as u64 - 1)? as i64);
        let got = beta.degree();
        t.check(got == Some(expect), || format!("deg beta_{idx} = {got:?}, expected {expect}"));
    }
    Ok(t.finish("prop3", serde_json::json!({ "M": m })))
}

/// `deg det H(1,n) = 2 sigma(n)` over `Z[u]`, `1 <= n <= N`.
pub fn prop4(n: u64) -> Result<SuiteResult> {
    let s = g(zu_u(), 2 * n as usize + 1);
    let row = row_determinants(&s, 1, n)?;
    let mut t = Tally::default();
    for (l, det) in row.iter().enumerate().skip(1) {
        let expect = Degree::Finite(2 * sigma(l as i64) as usize);
        t.check(det.degree() == expect, || format!("deg det H(1,{l}) = {}, expected {expect}", det.degree()));
    }
    Ok(t.finish("prop4", serde_json::json!({ "N": n })))
}

fn recur_compare<F: CfField>(u: &F, m: usize, n: usize, label: &str, t: &mut Tally) -> Result<()> {
    let rec = beta_recurrence(u, m)?;
    let cf = cf_expand(&g(u.clone(), n), m)?;
    if cf.certified_count < m {
        return Err(Error::InsufficientPrecision { needed: m as i64, known: cf.certified_count as i64 });
    }
    let direct = cf.linear_terms()?;
    for (i, (r, d)) in rec.terms.iter().zip(&direct).enumerate() {
        t.check(r == d, || format!("u={label}: term {} recurrence {:?} vs expansion {:?}", i + 1, r, d));
    }
    t.check(rec.terms.len() >= m, || format!("u={label}: recurrence stopped at {:?}", rec.aborted_at));
    Ok(())
}

/// Recurrence against direct expansion to `N` coefficients, first `M` terms,
/// for the sample values of `u` and over `Q(u)`.
pub fn recur(m: usize, n: u64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    for u in sample_us() {
        recur_compare(&u, m, n as usize, &u.to_string(), &mut t)?;
    }
    recur_compare(&Qu::u(), m, n as usize, "u", &mut t)?;
    Ok(t.finish("recur", serde_json::json!({ "M": m, "N": n })))
}

fn nrecur_one<F: CfField>(u: &F, n: u64, m: usize, label: &str, t: &mut Tally) -> Result<()> {
    let len = 2 * m + 4 * n as usize + 8;
    let base = g(u.clone(), len);
    let half = cf_expand(&base.transform(&Transform::Shift(n as i64)), m)?;
    let direct = cf_expand(&base.transform(&Transform::Shift(2 * n as i64)), m)?;
    if direct.certified_count < m {
        return Err(Error::InsufficientPrecision { needed: m as i64, known: direct.certified_count as i64 });
    }
    let rec = shifted_recurrence(n, u, &half.linear_terms()?, m)?;
    let direct = direct.linear_terms()?;
    t.check(rec.terms.len() == m, || format!("u={label} n={n}: recurrence stopped at {:?}", rec.aborted_at));
    for (i, (r, d)) in rec.terms.iter().zip(&direct).enumerate() {
        t.check(r == d, || format!("u={label} n={n}: term {} {:?} vs {:?}", i + 1, r, d));
    }
    Ok(())
}

/// Shifted recurrence from `t^n g_u` against expansion of `t^{2n} g_u`,
/// `1 <= n <= N`, `M` terms each.
pub fn nrecur(n_max: u64, m: usize) -> Result<SuiteResult> {
    let mut t = Tally::default();
    for n in 1..=n_max {
        nrecur_one(&Qu::u(), n, m, "u", &mut t)?;
        for u in [q(2, 1), q(3, 5)] {
            nrecur_one(&u, n, m, &u.to_string(), &mut t)?;
        }
    }
    Ok(t.finish("nrecur", serde_json::json!({ "N": n_max, "M": m })))
}

/// Block identities on every covered cell over `Z[u]` and over `F_3`, `F_5`
/// at every nonzero `u`.
pub fn blocks(n: u64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    let grid = grid_compute(&g(zu_u(), n as usize), n, Strategy::Direct, Some(&zu_u()))?;
    for ((a, b), _) in grid.cells() {
        t.check(block_factor_check(&grid, a, b)?, || format!("Zu ({a},{b})"));
    }
    for p in [3u64, 5] {
        let f = PrimeField::new(p)?;
        for uv in 1..p as i64 {
            let u = f.elem(uv);
            let grid = grid_compute(&g(u, n as usize), n, Strategy::Direct, Some(&u))?;
            for ((a, b), _) in grid.cells() {
                t.check(block_factor_check(&grid, a, b)?, || format!("F{p} u={uv} ({a},{b})"));
            }
        }
    }
    Ok(t.finish("blocks", serde_json::json!({ "N": n })))
}

/// Degree formulas for every covered `H` cell and every twisted factor.
pub fn degrees(n: u64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    let grid = grid_compute(&g(zu_u(), n as usize), n, Strategy::Direct, Some(&zu_u()))?;
    for ((a, b), c) in grid.cells() {
        t.check(degree_formula_check(&grid, a, b)?, || format!("H({a},{b}) degree {:?}", c.degree));
    }
    for ((a, b), c) in grid.twisted_cells() {
        t.check(twisted_degree_check(&grid, a, b)?, || format!("Ht({a},{b}) degree {:?}", c.degree));
    }
    Ok(t.finish("degrees", serde_json::json!({ "N": n })))
}

/// Product formulas for `det H(1, m-1)`, `m <= N`, over `Q(u)`; the gapped
/// row of `t^3 g_{-1}` over `Q`; and `(alpha_m, beta_m)` recovered from
/// the first two rows against the recurrence, `3 <= m <= N`.
pub fn han(n: u64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    let up_to = n as usize;
    let gz = g(zu_u(), 2 * up_to + 4);
    let to_qu = |row: Vec<Zu>| row.into_iter().map(Qu::from_poly).collect::<Vec<_>>();
    let row1 = to_qu(row_determinants(&gz, 1, n - 1)?);
    let gq = g(Qu::u(), 2 * up_to + 4);
    let cf = cf_expand(&gq, up_to + 1)?;
    let miss = han_first_mismatch(&row1, &cf, up_to)?;
    t.check(miss.is_none(), || format!("g_u: det H(1,{}) off the product", miss.unwrap() - 1));

    let shifted = g(q(-1, 1), 2 * up_to + 8).transform(&Transform::Shift(3));
    let cf3 = cf_expand(&shifted, up_to)?;
    let known = (shifted.order() as usize - 1) / 2;
    let row3 = row_determinants(&shifted, 1, known as u64)?;
    let reach = convergent_degrees(&cf3).into_iter().filter(|&s| s <= row3.len()).max().unwrap_or(0);
    let miss = han_first_mismatch(&row3, &cf3, reach)?;
    t.check(miss.is_none(), || format!("t^3 g_-1: det H(1,{}) off the product", miss.unwrap() - 1));

    let row2 = to_qu(row_determinants(&gz, 2, n - 1)?);
    let rec = beta_recurrence(&Qu::u(), up_to)?;
    for m in 3..=up_to {
        let got = coeffs_from_hankel(&row1, &row2, m)?;
        t.check(got == rec.terms[m - 1], || format!("(alpha_{m}, beta_{m}) from determinants"));
    }
    Ok(t.finish("han", serde_json::json!({ "N": n })))
}

fn legendre_all<F: CfField>(alpha: &LaurentSeries<F>, label: &str, t: &mut Tally) -> Result<()> {
    let cf = cf_expand(alpha, usize::MAX / 4)?;
    let convs = cf.convergent_sequence(cf.certified_count)?;
    let mut next: Vec<Option<usize>> = convs.iter().skip(1).map(|c| Some(c.s)).collect();
    next.push(cf.next_quotient_degree.map(|d| convs.last().unwrap().s + d));
    for (k, (c, nd)) in convs.iter().zip(next).enumerate() {
        let Some(nd) = nd else { continue };
        match legendre_verify(alpha, c, Some(nd)) {
            Ok(out) => t.check(out == LegendreOutcome::Holds, || format!("{label}: convergent {k}")),
            Err(Error::InsufficientPrecision { .. }) if k == convs.len() - 1 => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Every certified convergent of `g_2` and of `t^j g_{-1}`, `j <= 4`, from
/// `N` coefficients.
pub fn legendre(n: u64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    legendre_all(&g(q(2, 1), n as usize), "g_2", &mut t)?;
    let gm = g(q(-1, 1), n as usize);
    for j in 0..=4 {
        legendre_all(&gm.transform(&Transform::Shift(j)), &format!("t^{j} g_-1"), &mut t)?;
    }
    Ok(t.finish("legendre", serde_json::json!({ "N": n })))
}

/// `a_n a_{2^D+1-n} = u^D` symbolically and at `u = 2`.
pub fn mirror(d: u32) -> Result<SuiteResult> {
    let mut t = Tally::default();
    t.check(mirror_identity_check(&zu_u(), d)?, || "symbolic u".into());
    t.check(mirror_identity_check(&q(2, 1), d)?, || "u = 2".into());
    Ok(t.finish("mirror", serde_json::json!({ "D": d })))
}

fn corollary_one<F: CfField>(alpha: &LaurentSeries<F>, row: &[F], cf_terms: usize, label: &str, t: &mut Tally) -> Result<()> {
    let cf = cf_expand(alpha, cf_terms)?;
    let convs = cf.convergent_sequence(cf.certified_count)?;
    let reach = convs.last().map_or(0, |c| c.s).min(row.len());
    let degs: Vec<usize> = convs.iter().filter(|c| c.coprime && c.s >= 1 && c.s <= reach).map(|c| c.s).collect();
    let nonsingular: Vec<usize> = (1..=reach).filter(|&m| !row[m - 1].is_zero()).collect();
    t.check(degs == nonsingular, || format!("{label}: denominators {degs:?} vs nonsingular {nonsingular:?}"));
    Ok(())
}

/// Convergent denominator degrees against the nonsingular `H(1, m-1)`, for
/// `g_u` over `Q(u)` and `t^3 g_{-1}` over `Q`, with `N` coefficients.
pub fn corollary1(n: u64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    let small = n.min(48);
    let row: Vec<Qu> = row_determinants(&g(zu_u(), small as usize), 1, (small - 1) / 2)?
        .into_iter()
        .map(Qu::from_poly)
        .collect();
    corollary_one(&g(Qu::u(), small as usize), &row, small as usize, "g_u", &mut t)?;
    let shifted = g(q(-1, 1), n as usize + 3).transform(&Transform::Shift(3));
    let row = row_determinants(&shifted, 1, (shifted.order() as u64 - 1) / 2)?;
    corollary_one(&shifted, &row, n as usize, "t^3 g_-1", &mut t)?;
    Ok(t.finish("corollary1", serde_json::json!({ "N": n })))
}
