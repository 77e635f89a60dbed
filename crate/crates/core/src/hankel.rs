//! Hankel determinants `H(n,l) = (a_{n+i+j})_{0<=i,j<=l}` of a series, their
//! twisted variants `(a_{n+1+i+j} - u^2 a_{n+i+j})`, and grids of both.
//!
//! For `g_u` the determinants factor through smaller ones (the even/odd
//! splitting of rows and columns); [`Strategy::BlockAccelerated`] uses that,
//! [`Strategy::Direct`] eliminates every cell on its own.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contfrac::{cf_expand, CfField, ContinuedFraction};
use crate::error::{Error, Result};
use crate::poly::Degree;
use crate::ring::{Field, Ring};
use crate::series::{LaurentSeries, Transform};
use crate::twoadic::sigma;

#[derive(Clone, Debug, PartialEq)]
pub struct HankelMatrix<T> {
    pub n: u64,
    pub l: u64,
    pub twisted: bool,
    pub entries: Vec<Vec<T>>,
}

impl<T: Ring> HankelMatrix<T> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let m = &self.entries;
        (0..m.len()).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
    }

    pub fn transpose(&self) -> Self {
        let m = &self.entries;
        let entries = (0..m.len()).map(|i| (0..m.len()).map(|j| m[j][i].clone()).collect()).collect();
        Self { entries, ..self.clone() }
    }
}

/// `a[k]` is the coefficient `a_{base+k}`.
fn hankel_entries<T: Ring>(a: &[T], size: usize, twisted: bool, u2: &T) -> Vec<Vec<T>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if twisted {
                        a[i + j + 1].sub_ref(&u2.mul_ref(&a[i + j]))
                    } else {
                        a[i + j].clone()
                    }
                })
                .collect()
        })
        .collect()
}

fn last_index(n: u64, l: u64, twisted: bool) -> u64 {
    n + 2 * l + twisted as u64
}

pub fn build<T: Ring>(series: &LaurentSeries<T>, n: u64, l: u64, twisted: bool, u: &T) -> Result<HankelMatrix<T>> {
    if n == 0 {
        return Err(Error::UndefinedInput("Hankel index n must be >= 1".into()));
    }
    let top = last_index(n, l, twisted);
    if top as i64 > series.order() {
        return Err(Error::InsufficientPrecision { needed: top as i64, known: series.order() });
    }
    let a = (n..=top).map(|k| series.coeff(k as i64)).collect::<Result<Vec<_>>>()?;
    let entries = hankel_entries(&a, l as usize + 1, twisted, &u.mul_ref(u));
    Ok(HankelMatrix { n, l, twisted, entries })
}

/// Fraction-free elimination over `Z[u]`, Gaussian elimination over fields.
pub fn det_exact<T: Ring>(m: &HankelMatrix<T>) -> T {
    T::determinant(m.entries.clone())
}

/// All leading principal minors of `m` from one fraction-free sweep without
/// row exchanges. Entry `k` is the minor of size `k+1`; once a pivot
/// vanishes the larger minors are left as `None`.
pub fn leading_minors<T: Ring>(mut m: Vec<Vec<T>>) -> Vec<Option<T>> {
    let n = m.len();
    let mut out = vec![None; n];
    let mut prev = T::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        out[k] = Some(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in (k + 1)..n {
                let mut v = row[j].mul_ref(&pivot);
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    v = v.sub_ref(&lead.mul_ref(&pivot_row[j]));
                }
                row[j] = v.div_exact(&prev).expect("fraction-free step divides exactly");
            }
        }
        prev = pivot;
    }
    out
}

/// `det H(n, l)` for `l = 0..=l_max`, sharing one elimination; cells past a
/// vanishing pivot are eliminated separately.
pub fn row_determinants<T: Ring>(series: &LaurentSeries<T>, n: u64, l_max: u64) -> Result<Vec<T>> {
    let big = build(series, n, l_max, false, &T::zero())?;
    let minors = leading_minors(big.entries.clone());
    minors
        .into_par_iter()
        .enumerate()
        .map(|(l, d)| match d {
            Some(d) => Ok(d),
            None => Ok(det_exact(&build(series, n, l as u64, false, &T::zero())?)),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Direct,
    BlockAccelerated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridCell<T> {
    pub det: T,
    pub degree: Option<Degree>,
    pub singular: bool,
    pub doubly_monic: Option<bool>,
}

impl<T: Ring> GridCell<T> {
    fn new(det: T) -> Self {
        Self {
            degree: det.u_degree(),
            singular: det.is_zero(),
            doubly_monic: det.doubly_monic(),
            det,
        }
    }
}

/// How `det H(n,l)` of `g_u` splits: `sign * u^scale * det H(h) * det Ht(twisted)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockPlan {
    pub negative: bool,
    pub scale_u: bool,
    pub h: (u64, u64),
    /// `None` for the empty twisted block.
    pub twisted: Option<(u64, u64)>,
}

fn inversions(perm: &[u64]) -> usize {
    (0..perm.len()).map(|i| (i + 1..perm.len()).filter(|&j| perm[j] < perm[i]).count()).sum()
}

/// Factorization of a cell with `l >= 1`. The sign is the parity of the row
/// and column reorderings that bring the reduced matrix to block-triangular
/// form.
pub fn block_plan(n: u64, l: u64) -> BlockPlan {
    assert!(n >= 1 && l >= 1, "block plan needs n >= 1, l >= 1");
    // 1-based row and column labels
    let odd = |hi: u64| (1..=hi).step_by(2).collect::<Vec<_>>();
    let even = |hi: u64| (2..=hi).step_by(2).collect::<Vec<_>>();
    let size = l + 1;
    if n % 2 == 1 || l % 2 == 1 {
        let rows = [even(size), odd(size)].concat();
        let cols = if n % 2 == 1 { [even(size), odd(size)].concat() } else { [odd(size), even(size)].concat() };
        let tl = (l as i64 - 1).div_euclid(2);
        BlockPlan {
            negative: (inversions(&rows) + inversions(&cols)) % 2 == 1,
            scale_u: false,
            h: (n / 2 + 1, l / 2),
            twisted: (tl >= 0).then(|| (n.div_ceil(2), tl as u64)),
        }
    } else {
        let rows = [odd(size).split_off(1), vec![1], even(size)].concat();
        let cols = [even(size), odd(size)].concat();
        BlockPlan {
            negative: (inversions(&rows) + inversions(&cols)) % 2 == 1,
            scale_u: true,
            h: (n / 2, l / 2),
            twisted: (l >= 2).then(|| (n / 2 + 1, l / 2 - 1)),
        }
    }
}

/// Twisted cells the block factorizations of the grid `n + 2l <= bound` use.
pub fn derived_twisted_cells(bound: u64) -> Vec<(u64, u64)> {
    let mut out: Vec<_> = covered_cells(bound)
        .into_iter()
        .filter(|&(_, l)| l >= 1)
        .filter_map(|(n, l)| block_plan(n, l).twisted)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `(n, l)` with `n >= 1`, `l >= 0`, `n + 2l <= bound`, in lexicographic order.
pub fn covered_cells(bound: u64) -> Vec<(u64, u64)> {
    (1..=bound).flat_map(|n| (0..=(bound - n) / 2).map(move |l| (n, l))).collect()
}

#[derive(Clone, Debug)]
pub struct HankelGrid<T> {
    bound: u64,
    /// `table[k] = a_k` for `0 <= k <= bound`.
    table: Vec<T>,
    u: Option<T>,
    hash: String,
    cells: BTreeMap<(u64, u64), GridCell<T>>,
    twisted: BTreeMap<(u64, u64), GridCell<T>>,
}

impl<T: Ring> HankelGrid<T> {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn u(&self) -> Option<&T> {
        self.u.as_ref()
    }

    /// Hash of `a_1..=a_N`, see [`LaurentSeries::table_hash`].
    pub fn coefficient_hash(&self) -> &str {
        &self.hash
    }

    pub fn cell(&self, n: u64, l: u64) -> Result<&GridCell<T>> {
        self.cells.get(&(n, l)).ok_or(Error::OutOfCoverage { n, l, bound: self.bound })
    }

    pub fn twisted_cell(&self, n: u64, l: u64) -> Result<&GridCell<T>> {
        self.twisted.get(&(n, l)).ok_or(Error::OutOfCoverage { n, l, bound: self.bound })
    }

    pub fn cells(&self) -> impl Iterator<Item = ((u64, u64), &GridCell<T>)> {
        self.cells.iter().map(|(k, v)| (*k, v))
    }

    pub fn twisted_cells(&self) -> impl Iterator<Item = ((u64, u64), &GridCell<T>)> {
        self.twisted.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `det H(n, 0), det H(n, 1), ...` within coverage.
    pub fn row(&self, n: u64) -> Vec<T> {
        self.cells.range((n, 0)..=(n, u64::MAX)).map(|(_, c)| c.det.clone()).collect()
    }

    /// Replace a stored determinant, for fault-injection tests.
    pub fn corrupt(&mut self, n: u64, l: u64, det: T) -> Result<()> {
        let bound = self.bound;
        let cell = self.cells.get_mut(&(n, l)).ok_or(Error::OutOfCoverage { n, l, bound })?;
        *cell = GridCell::new(det);
        Ok(())
    }

    pub fn export(&self) -> GridExport {
        let cells = self
            .cells
            .iter()
            .map(|(&(n, l), c)| CellExport {
                n,
                l,
                det: c.det.to_string(),
                degree: c.degree.map(|d| d.to_string()),
                singular: c.singular,
                doubly_monic: c.doubly_monic,
            })
            .collect();
        GridExport { bound: self.bound, coefficient_table_hash: self.hash.clone(), cells }
    }

    pub fn to_csv(&self) -> String {
        self.export().to_csv()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.export()).expect("grid export serializes")
    }

    fn matrix(&self, n: u64, l: u64, twisted: bool) -> Result<Vec<Vec<T>>> {
        let top = last_index(n, l, twisted);
        if top > self.bound {
            return Err(Error::InsufficientPrecision { needed: top as i64, known: self.bound as i64 });
        }
        let u2 = match (&self.u, twisted) {
            (Some(u), true) => u.mul_ref(u),
            (None, true) => return Err(Error::UndefinedInput("twisted matrices need u".into())),
            _ => T::zero(),
        };
        Ok(hankel_entries(&self.table[n as usize..=top as usize], l as usize + 1, twisted, &u2))
    }

    fn direct(&self, n: u64, l: u64, twisted: bool) -> Result<T> {
        Ok(T::determinant(self.matrix(n, l, twisted)?))
    }

    /// The signed block product for `(n, l)`, `l >= 1`, from stored cells.
    pub fn block_product(&self, n: u64, l: u64) -> Result<T> {
        let u = self.u.as_ref().ok_or_else(|| Error::UndefinedInput("block identities need u".into()))?;
        let plan = block_plan(n, l);
        let mut v = self.cell(plan.h.0, plan.h.1)?.det.clone();
        if let Some((tn, tl)) = plan.twisted {
            v = v.mul_ref(&self.twisted_cell(tn, tl)?.det);
        }
        if plan.scale_u {
            v = v.mul_ref(u);
        }
        Ok(if plan.negative { -v } else { v })
    }
}

/// Plain-data form of a grid, as written to JSON, CSV and the result cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CellExport {
    pub n: u64,
    pub l: u64,
    pub det: String,
    /// `-inf` for a zero determinant; absent on numeric domains.
    pub degree: Option<String>,
    pub singular: bool,
    pub doubly_monic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridExport {
    pub bound: u64,
    pub coefficient_table_hash: String,
    pub cells: Vec<CellExport>,
}

impl GridExport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,l,degree,singular,doublyMonic,detString\n");
        for c in &self.cells {
            let degree = c.degree.clone().unwrap_or_default();
            let dm = c.doubly_monic.map(|b| b.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{degree},{},{dm},{}\n", c.n, c.l, c.singular, csv_field(&c.det)));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn is_linear_family<T: Ring>(a: &[T], u: &T) -> bool {
    (1..a.len()).all(|k| match k {
        1 => a[1].is_one(),
        k if k % 2 == 0 => a[k] == u.mul_ref(&a[k - 1]),
        k => a[k] == a[k / 2 + 1],
    })
}

/// Determinants of every cell `n + 2l <= bound`. `u` enables the twisted
/// cells used by the block identities; the block strategy also requires the
/// series to be `g_u` on the known range.
pub fn grid_compute<T: Ring>(
    series: &LaurentSeries<T>,
    bound: u64,
    strategy: Strategy,
    u: Option<&T>,
) -> Result<HankelGrid<T>> {
    if bound == 0 {
        return Err(Error::UndefinedInput("grid bound must be >= 1".into()));
    }
    if (bound as i64) > series.order() {
        return Err(Error::InsufficientPrecision { needed: bound as i64, known: series.order() });
    }
    let table = (0..=bound as i64).map(|k| series.coeff(k)).collect::<Result<Vec<_>>>()?;
    let mut grid = HankelGrid {
        bound,
        hash: series.table_hash(1, bound as i64)?,
        u: u.cloned(),
        table,
        cells: BTreeMap::new(),
        twisted: BTreeMap::new(),
    };
    if u.is_some() {
        let tw = derived_twisted_cells(bound)
            .into_par_iter()
            .map(|(n, l)| Ok(((n, l), GridCell::new(grid.direct(n, l, true)?))))
            .collect::<Result<Vec<_>>>()?;
        grid.twisted = tw.into_iter().collect();
    }
    match strategy {
        Strategy::Direct => {
            let cells = covered_cells(bound)
                .into_par_iter()
                .map(|(n, l)| Ok(((n, l), GridCell::new(grid.direct(n, l, false)?))))
                .collect::<Result<Vec<_>>>()?;
            grid.cells = cells.into_iter().collect();
        }
        Strategy::BlockAccelerated => {
            let Some(u) = u else {
                return Err(Error::UndefinedInput("block strategy needs u".into()));
            };
            if !is_linear_family(&grid.table, u) {
                return Err(Error::Unsupported("block strategy applies to g_u only".into()));
            }
            // factors of layer l live in layers < l
            for l in 0..=(bound - 1) / 2 {
                let layer = (1..=bound - 2 * l)
                    .into_par_iter()
                    .map(|n| {
                        let det = if l == 0 { grid.table[n as usize].clone() } else { grid.block_product(n, l)? };
                        Ok(((n, l), GridCell::new(det)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                grid.cells.extend(layer);
            }
        }
    }
    Ok(grid)
}

/// `|det H(n,l)|` equals the block product up to sign.
pub fn block_factor_check<T: Ring>(grid: &HankelGrid<T>, n: u64, l: u64) -> Result<bool> {
    let det = &grid.cell(n, l)?.det;
    if l == 0 {
        // empty twisted block: H(n,0) = a_n against u^{[n even]} H(n/2 or (n+1)/2, 0)
        let u = grid.u.as_ref().ok_or_else(|| Error::UndefinedInput("block identities need u".into()))?;
        let other = if n.is_multiple_of(2) && n >= 2 {
            u.mul_ref(&grid.cell(n / 2, 0)?.det)
        } else {
            grid.cell(n / 2 + 1, 0)?.det.clone()
        };
        return Ok(det.eq_up_to_sign(&other));
    }
    Ok(det.eq_up_to_sign(&grid.block_product(n, l)?))
}

pub fn expected_degree(n: u64, l: u64) -> i64 {
    let (n, l) = (n as i64, l as i64);
    sigma(l) as i64 + sigma(n + l - 1) as i64 - sigma(n - 2) as i64
}

pub fn expected_twisted_degree(n: u64, l: u64) -> i64 {
    expected_degree(n, l) + 2 * (l as i64 + 1)
}

fn degree_matches<T: Ring>(cell: &GridCell<T>, expected: i64) -> Result<bool> {
    match cell.degree {
        None => Err(Error::Unsupported("degree formulas need the symbolic domain Zu".into())),
        Some(Degree::Finite(d)) => Ok(d as i64 == expected),
        Some(Degree::NegInfinity) => Ok(false),
    }
}

pub fn degree_formula_check<T: Ring>(grid: &HankelGrid<T>, n: u64, l: u64) -> Result<bool> {
    degree_matches(grid.cell(n, l)?, expected_degree(n, l))
}

pub fn twisted_degree_check<T: Ring>(grid: &HankelGrid<T>, n: u64, l: u64) -> Result<bool> {
    degree_matches(grid.twisted_cell(n, l)?, expected_twisted_degree(n, l))
}

/// Denominator degrees `s_1, s_2, ...` of the certified convergents.
pub fn convergent_degrees<F: Ring>(cf: &ContinuedFraction<F>) -> Vec<usize> {
    cf.terms
        .iter()
        .scan(0, |s, t| {
            *s += t.bstar.deg().unwrap_or(0);
            Some(*s)
        })
        .collect()
}

/// First `m <= up_to` where `row[m-1] = det H(1, m-1)` disagrees with the
/// product formulas in the `beta_i`. Every `m = s_i` must match the signed
/// product, every other `m` must give a vanishing determinant; when all
/// quotients are linear the unsigned-exponent form is checked as well.
pub fn han_first_mismatch<F: Field>(row: &[F], cf: &ContinuedFraction<F>, up_to: usize) -> Result<Option<usize>> {
    let s = convergent_degrees(cf);
    let known = s.last().copied().unwrap_or(0);
    if up_to > known {
        return Err(Error::InsufficientPrecision { needed: up_to as i64, known: known as i64 });
    }
    if row.len() < up_to {
        return Err(Error::InsufficientPrecision { needed: up_to as i64, known: row.len() as i64 });
    }
    let beta: Vec<&F> = cf.terms.iter().map(|t| &t.beta).collect();
    let all_linear = s.iter().enumerate().all(|(i, &si)| si == i + 1);
    // signed form: going from s_{i-1} to s_i every factor gains k_i in its
    // exponent, so the value is multiplied by (beta_1 (-beta_2) ... (-beta_i))^{k_i}
    let mut signed = F::one();
    let mut base = F::one();
    // all-linear form: D_m = -/+ D_{m-1} beta_1 ... beta_m
    let mut plain = F::one();
    let mut prefix = F::one();
    let mut eps = 0usize;
    let mut prev_s = 0usize;
    let mut next = 0usize;
    for m in 1..=up_to {
        let det = &row[m - 1];
        if s[next] != m {
            if !det.is_zero() {
                return Ok(Some(m));
            }
            continue;
        }
        let i = next;
        let k = s[i] - prev_s;
        eps += k * (k - 1) / 2;
        base = if i == 0 { beta[0].clone() } else { base.mul_ref(&-beta[i].clone()) };
        signed = signed.mul_ref(&base.pow_u(k as u64));
        let v = if eps % 2 == 1 { -signed.clone() } else { signed.clone() };
        if &v != det {
            return Ok(Some(m));
        }
        if all_linear {
            prefix = prefix.mul_ref(beta[i]);
            plain = plain.mul_ref(&prefix);
            let w = if (m * (m - 1) / 2) % 2 == 1 { -plain.clone() } else { plain.clone() };
            if &w != det {
                return Ok(Some(m));
            }
        }
        prev_s = s[i];
        next += 1;
    }
    Ok(None)
}

pub fn han_product_check<F: Field>(row: &[F], cf: &ContinuedFraction<F>, up_to: usize) -> Result<bool> {
    Ok(han_first_mismatch(row, cf, up_to)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeficiencyReport {
    pub bound: u64,
    pub max_singular_run: u64,
    pub deficiency_lower_bound: u64,
    /// Only a symbolic certificate can make this true; enumeration never does.
    pub deficiency_exact: bool,
    pub singular_cells: usize,
    /// Cells of the first longest singular run.
    pub witnesses: Vec<(u64, u64)>,
}

pub fn deficiency<T: Ring>(grid: &HankelGrid<T>) -> DeficiencyReport {
    deficiency_rows(grid, grid.bound)
}

/// [`deficiency`] over the rows `n <= max_n` only; row `n` sees the shift
/// `t^{n-1} alpha`.
pub fn deficiency_rows<T: Ring>(grid: &HankelGrid<T>, max_n: u64) -> DeficiencyReport {
    let mut best: Vec<(u64, u64)> = Vec::new();
    let mut run: Vec<(u64, u64)> = Vec::new();
    let mut singular = 0;
    for ((n, l), c) in grid.cells().filter(|((n, _), _)| *n <= max_n) {
        if l == 0 {
            run.clear();
        }
        if c.singular {
            singular += 1;
            run.push((n, l));
            if run.len() > best.len() {
                best = run.clone();
            }
        } else {
            run.clear();
        }
    }
    DeficiencyReport {
        bound: grid.bound,
        max_singular_run: best.len() as u64,
        deficiency_lower_bound: best.len() as u64 + 1,
        deficiency_exact: false,
        singular_cells: singular,
        witnesses: best,
    }
}

/// Largest certified partial-quotient degree of `t^j alpha` for each
/// `0 <= j <= j_max`; the deficiency is the maximum over all shifts.
pub fn shift_quotient_degrees<F: CfField>(alpha: &LaurentSeries<F>, j_max: u64, max_terms: usize) -> Result<Vec<usize>> {
    (0..=j_max)
        .map(|j| Ok(cf_expand(&alpha.transform(&Transform::Shift(j as i64)), max_terms)?.max_quotient_degree()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::PrimeField;
    use crate::poly::Polynomial;
    use crate::series::{expand_product, MahlerSpec};
    use crate::Zu;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn zu(c: &[i64]) -> Zu {
        Polynomial::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    fn g_sym(n: usize) -> LaurentSeries<Zu> {
        expand_product(&MahlerSpec::linear(zu(&[0, 1])), n)
    }

    // Leibniz expansion, independent of both elimination routines.
    fn cofactor<T: Ring>(m: &[Vec<T>]) -> T {
        if m.is_empty() {
            return T::one();
        }
        let mut acc = T::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<T>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
            let term = m[0][j].mul_ref(&cofactor(&minor));
            acc = if j % 2 == 0 { acc.add_ref(&term) } else { acc.sub_ref(&term) };
        }
        acc
    }

    #[test]
    fn build_examples() {
        let g = g_sym(16);
        let u = zu(&[0, 1]);
        let h = build(&g, 3, 1, false, &u).unwrap();
        assert_eq!(h.entries, vec![vec![zu(&[0, 1]), zu(&[0, 0, 1])], vec![zu(&[0, 0, 1]), zu(&[0, 1])]]);
        assert_eq!(build(&g, 5, 0, false, &u).unwrap().entries, vec![vec![g.coeff(5).unwrap()]]);
        assert_eq!(build(&g, 1, 0, true, &u).unwrap().entries, vec![vec![zu(&[0, 1, -1])]]);
        assert!(matches!(build(&g, 10, 4, false, &u), Err(Error::InsufficientPrecision { .. })));
        assert!(build(&g, 0, 1, false, &u).is_err());
        assert!(build(&g, 4, 5, true, &u).unwrap().is_symmetric());
    }

    #[test]
    fn det_examples_against_cofactor() {
        let g = g_sym(16);
        let u = zu(&[0, 1]);
        let h31 = build(&g, 3, 1, false, &u).unwrap();
        assert_eq!(det_exact(&h31), zu(&[0, 0, 1, 0, -1]));
        assert_eq!(det_exact(&h31), cofactor(&h31.entries));
        let h12 = build(&g, 1, 2, false, &u).unwrap();
        assert_eq!(det_exact(&h12), zu(&[0, 0, 1, -2, 1]));
        assert_eq!(det_exact(&h12), cofactor(&h12.entries));

        let q = |v: i64| BigRational::from_integer(v.into());
        let gm1 = expand_product(&MahlerSpec::linear(q(-1)), 16);
        assert!(det_exact(&build(&gm1, 3, 1, false, &q(-1)).unwrap()).is_zero());
    }

    #[test]
    fn cofactor_oracle_small_cells() {
        let g = g_sym(24);
        let u = zu(&[0, 1]);
        for n in 1..=12 {
            for l in 0..=3 {
                for tw in [false, true] {
                    let h = build(&g, n, l, tw, &u).unwrap();
                    assert_eq!(det_exact(&h), cofactor(&h.entries), "n={n} l={l} twisted={tw}");
                    assert_eq!(det_exact(&h.transpose()), det_exact(&h));
                }
            }
        }
    }

    #[test]
    fn grid_examples() {
        let grid = grid_compute(&g_sym(12), 12, Strategy::Direct, Some(&zu(&[0, 1]))).unwrap();
        let c = grid.cell(1, 1).unwrap();
        assert_eq!(c.det, zu(&[0, 1, -1]));
        assert_eq!(c.degree, Some(Degree::Finite(2)));
        assert!(!c.singular);
        assert_eq!(c.doubly_monic, Some(true));
        assert_eq!(grid.len(), covered_cells(12).len());
        assert!(matches!(grid.cell(12, 1), Err(Error::OutOfCoverage { .. })));

        let one = BigRational::from_integer(1.into());
        let g1 = expand_product(&MahlerSpec::linear(one.clone()), 8);
        let grid = grid_compute(&g1, 8, Strategy::Direct, Some(&one)).unwrap();
        assert!(grid.cell(3, 1).unwrap().singular);

        let f3 = PrimeField::new(3).unwrap();
        let g = expand_product(&MahlerSpec::linear(f3.elem(2)), 12);
        let grid = grid_compute(&g, 12, Strategy::Direct, Some(&f3.elem(2))).unwrap();
        assert!(grid.cell(4, 1).unwrap().det.is_zero());
        assert!(grid.cell(4, 1).unwrap().degree.is_none());
    }

    #[test]
    fn strategies_agree_exactly() {
        let u = zu(&[0, 1]);
        let g = g_sym(30);
        let a = grid_compute(&g, 30, Strategy::Direct, Some(&u)).unwrap();
        let b = grid_compute(&g, 30, Strategy::BlockAccelerated, Some(&u)).unwrap();
        for ((n, l), c) in a.cells() {
            assert_eq!(c.det, b.cell(n, l).unwrap().det, "cell ({n},{l})");
        }
        for p in [3, 5] {
            let f = PrimeField::new(p).unwrap();
            for uv in 1..p as i64 {
                let u = f.elem(uv);
                let g = expand_product(&MahlerSpec::linear(u), 30);
                let a = grid_compute(&g, 30, Strategy::Direct, Some(&u)).unwrap();
                let b = grid_compute(&g, 30, Strategy::BlockAccelerated, Some(&u)).unwrap();
                assert!(a.cells().all(|((n, l), c)| c.det == b.cell(n, l).unwrap().det), "p={p} u={uv}");
            }
        }
    }

    #[test]
    fn block_strategy_rejects_other_series() {
        let q = |v: i64| BigRational::from_integer(v.into());
        let s = LaurentSeries::from_coeffs(1, (1..=10).map(q).collect());
        assert!(matches!(grid_compute(&s, 10, Strategy::BlockAccelerated, Some(&q(2))), Err(Error::Unsupported(_))));
    }

    #[test]
    fn block_factor_examples() {
        let u = zu(&[0, 1]);
        let grid = grid_compute(&g_sym(12), 12, Strategy::Direct, Some(&u)).unwrap();
        assert!(block_factor_check(&grid, 1, 1).unwrap());
        assert!(block_factor_check(&grid, 3, 0).unwrap());
        // det H(2,2) = -u^3 (u-1)^2 (u+1)
        let expect = zu(&[0, 0, 0, -1, 1, 1, -1]);
        assert_eq!(grid.cell(2, 2).unwrap().det, expect);
        assert!(block_factor_check(&grid, 2, 2).unwrap());
        assert!(matches!(block_factor_check(&grid, 11, 1), Err(Error::OutOfCoverage { .. })));
        for ((n, l), _) in grid.cells() {
            assert!(block_factor_check(&grid, n, l).unwrap(), "({n},{l})");
        }
    }

    #[test]
    fn degree_examples() {
        let grid = grid_compute(&g_sym(12), 12, Strategy::Direct, Some(&zu(&[0, 1]))).unwrap();
        assert_eq!(expected_degree(1, 2), 4);
        assert_eq!(expected_degree(3, 1), 4);
        assert_eq!(expected_degree(1, 1), 2);
        for (n, l) in [(1, 2), (3, 1), (1, 1)] {
            assert!(degree_formula_check(&grid, n, l).unwrap());
        }
        let q = BigRational::from_integer(2.into());
        let g = expand_product(&MahlerSpec::linear(q.clone()), 12);
        let grid = grid_compute(&g, 12, Strategy::Direct, Some(&q)).unwrap();
        assert!(matches!(degree_formula_check(&grid, 1, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn closed_form_for_even_rows() {
        use crate::twoadic::{tau2, v2};
        let g = g_sym(1026);
        let u = zu(&[0, 1]);
        for n in (2..=1024u64).step_by(2) {
            let det = det_exact(&build(&g, n, 1, false, &u).unwrap());
            let e = v2(n).unwrap() as usize;
            let t = 2 * tau2(n) as usize;
            let mut c = vec![0i64; t + e + 1];
            c[t + e] = 1;
            c[t] -= 1;
            assert_eq!(det, zu(&c), "n={n}");
        }
    }

    #[test]
    fn leading_minors_match_direct() {
        let g = g_sym(40);
        let row = row_determinants(&g, 1, 19).unwrap();
        for (l, d) in row.iter().enumerate() {
            assert_eq!(*d, det_exact(&build(&g, 1, l as u64, false, &Zu::zero()).unwrap()));
        }
        // a vanishing pivot halfway: u = -1, row 3 has H(3,1) = 0
        let q = |v: i64| BigRational::from_integer(v.into());
        let g = expand_product(&MahlerSpec::linear(q(-1)), 30);
        let row = row_determinants(&g, 3, 12).unwrap();
        for (l, d) in row.iter().enumerate() {
            assert_eq!(*d, det_exact(&build(&g, 3, l as u64, false, &q(0)).unwrap()));
        }
    }

    #[test]
    fn deficiency_examples() {
        let grid = grid_compute(&g_sym(24), 24, Strategy::Direct, None).unwrap();
        let r = deficiency(&grid);
        assert_eq!((r.max_singular_run, r.deficiency_lower_bound, r.deficiency_exact), (0, 1, false));

        let q = |v: i64| BigRational::from_integer(v.into());
        let g = expand_product(&MahlerSpec::linear(q(-1)), 12);
        let r = deficiency(&grid_compute(&g, 12, Strategy::Direct, None).unwrap());
        assert!(r.deficiency_lower_bound >= 2);
        assert!(grid_compute(&g, 12, Strategy::Direct, None).unwrap().cell(3, 1).unwrap().singular);

        let f3 = PrimeField::new(3).unwrap();
        let g = expand_product(&MahlerSpec::linear(f3.elem(2)), 12);
        let grid = grid_compute(&g, 12, Strategy::Direct, None).unwrap();
        let r = deficiency(&grid);
        assert!(r.deficiency_lower_bound >= 2);
        assert!(grid.cell(4, 1).unwrap().singular);
    }

    #[test]
    fn csv_and_json_shapes() {
        let grid = grid_compute(&g_sym(4), 4, Strategy::Direct, None).unwrap();
        let csv = grid.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "n,l,degree,singular,doublyMonic,detString");
        assert_eq!(lines.len(), 1 + 6);
        assert_eq!(lines[1], "1,0,0,false,true,1");
        let j = grid.to_json();
        assert_eq!(j["cells"].as_array().unwrap().len(), 6);
        assert_eq!(j["coefficientTableHash"].as_str().unwrap().len(), 64);
    }
}
