//! Certification runs for membership of `g_u` in the exception set to the
//! t-adic Littlewood conjecture, and the finite-field counterexamples.
//!
//! Everything here is a finite check: a report covers the cells
//! `n + 2l <= N` it lists and claims nothing beyond them.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::contfrac::{beta_recurrence, cf_expand, CfField};
use crate::error::{Error, Result};
use crate::fp::{mult_order, PrimeField};
use crate::hankel::{build, degree_formula_check, det_exact, grid_compute, HankelGrid, Strategy};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::series::{expand_product, LaurentSeries, MahlerSpec};
use crate::{Q, Zu};

/// `deg P / (d - 1)`: the largest deficiency `g_P` can have.
pub fn elc_threshold<T: Ring>(p: &Polynomial<T>, d: u64) -> Result<Q> {
    let deg = p.deg().ok_or_else(|| Error::UndefinedInput("P must be nonzero".into()))?;
    if d < 2 || deg < 1 {
        return Err(Error::UndefinedInput("need d >= 2 and deg P >= 1".into()));
    }
    Ok(BigRational::new(BigInt::from(deg), BigInt::from(d - 1)))
}

/// Membership rule: a measured deficiency at or below the threshold.
pub fn within_threshold(deficiency: u64, threshold: &Q) -> bool {
    BigRational::from_integer(BigInt::from(deficiency)) <= *threshold
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedUpToBound,
    SymbolicCertificate,
    Counterexample { n: u64, l: u64 },
    AbortedPrecision,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedUpToBound => f.write_str("certified-up-to-bound"),
            Verdict::SymbolicCertificate => f.write_str("symbolic-certificate"),
            Verdict::Counterexample { n, l } => write!(f, "counterexample({n},{l})"),
            Verdict::AbortedPrecision => f.write_str("aborted-precision"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    pub u: String,
    pub domain: String,
    #[serde(rename = "N")]
    pub bound: u64,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: u64,
    pub l: u64,
    pub det: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportCounts {
    pub cells: usize,
    pub singular: usize,
    pub doubly_monic: usize,
    /// Symbolic runs only: cells whose degree differs from the closed form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_mismatches: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificationReport {
    pub version: String,
    pub params: ReportParams,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub counts: ReportCounts,
    pub runtime_ms: u64,
    pub coefficient_table_hash: String,
}

impl CertificationReport {
    /// The report without its timing, for reproducibility comparisons.
    pub fn data_section(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().unwrap().remove("runtimeMs");
        v
    }
}

fn witness<T: Ring>(grid: &HankelGrid<T>, n: u64, l: u64) -> Witness {
    Witness { n, l, det: grid.cell(n, l).map(|c| c.det.to_string()).unwrap_or_default() }
}

/// The singular cell with the smallest matrix (least `l`, then least `n`).
fn smallest(cells: &[(u64, u64)]) -> Option<(u64, u64)> {
    cells.iter().copied().min_by_key(|&(n, l)| (l, n))
}

fn symbolic_u() -> Zu {
    Polynomial::x()
}

/// Grid over `Z[u]` for `n + 2l <= N`. Nonvanishing at every rational
/// `u != 0, +-1` follows for a cell when its determinant is doubly monic.
pub fn certify_symbolic(bound: u64) -> Result<CertificationReport> {
    let g = expand_product(&MahlerSpec::linear(symbolic_u()), bound as usize);
    certify_symbolic_series(&g, bound)
}

/// [`certify_symbolic`] on a caller-supplied coefficient table, so tests
/// can inject corrupted entries.
pub fn certify_symbolic_series(series: &LaurentSeries<Zu>, bound: u64) -> Result<CertificationReport> {
    let start = Instant::now();
    let grid = grid_compute(series, bound, Strategy::Direct, Some(&symbolic_u()))?;
    let singular: Vec<(u64, u64)> = grid.cells().filter(|(_, c)| c.singular).map(|(k, _)| k).collect();
    let not_dm: Vec<(u64, u64)> =
        grid.cells().filter(|(_, c)| c.doubly_monic != Some(true)).map(|(k, _)| k).collect();
    let mut mismatches = 0;
    for ((n, l), c) in grid.cells() {
        if !c.singular && !degree_formula_check(&grid, n, l)? {
            mismatches += 1;
        }
    }
    let verdict = match (smallest(&singular), not_dm.is_empty()) {
        (Some((n, l)), _) => Verdict::Counterexample { n, l },
        (None, true) => Verdict::SymbolicCertificate,
        // nonzero everywhere as polynomials, but no statement for all u
        (None, false) => Verdict::CertifiedUpToBound,
    };
    Ok(CertificationReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        params: ReportParams { u: "u".into(), domain: "Zu".into(), bound, mode: Mode::Symbolic },
        verdict,
        witnesses: not_dm.iter().map(|&(n, l)| witness(&grid, n, l)).collect(),
        counts: ReportCounts {
            cells: grid.len(),
            singular: singular.len(),
            doubly_monic: grid.len() - not_dm.len(),
            degree_mismatches: Some(mismatches),
        },
        runtime_ms: start.elapsed().as_millis() as u64,
        coefficient_table_hash: grid.coefficient_hash().to_string(),
    })
}

/// Grid over `Q` at a rational `u`. `u = 0` and `u = 1` give rational
/// functions and are rejected; `u = -1` runs and is expected to fail at (3,1).
pub fn certify_numeric(u: &Q, bound: u64) -> Result<CertificationReport> {
    if u.is_zero() || u.is_one() {
        return Err(Error::UndefinedInput(format!("u = {u} gives a rational function; need u != 0, 1")));
    }
    let start = Instant::now();
    let g = expand_product(&MahlerSpec::linear(u.clone()), bound as usize);
    let grid = grid_compute(&g, bound, Strategy::Direct, Some(u))?;
    let singular: Vec<(u64, u64)> = grid.cells().filter(|(_, c)| c.singular).map(|(k, _)| k).collect();
    let verdict = match smallest(&singular) {
        Some((n, l)) => Verdict::Counterexample { n, l },
        None => Verdict::CertifiedUpToBound,
    };
    Ok(CertificationReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        params: ReportParams { u: u.to_string(), domain: "Q".into(), bound, mode: Mode::Numeric },
        verdict,
        witnesses: singular.iter().map(|&(n, l)| witness(&grid, n, l)).collect(),
        counts: ReportCounts { cells: grid.len(), singular: singular.len(), doubly_monic: 0, degree_mismatches: None },
        runtime_ms: start.elapsed().as_millis() as u64,
        coefficient_table_hash: grid.coefficient_hash().to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiniteFieldWitness {
    pub p: u64,
    pub u: u64,
    /// Multiplicative order of `u`.
    pub order: u64,
    pub n: u64,
    pub l: u64,
    /// Independently recomputed `det H(n, l)`; zero for a valid witness.
    pub det: String,
    pub validated: bool,
}

fn validated_witness(field: &PrimeField, u: u64, order: u64, n: u64, l: u64) -> Result<FiniteFieldWitness> {
    let uf = field.elem(u as i64);
    let g = expand_product(&MahlerSpec::linear(uf), (n + 2 * l) as usize);
    let det = det_exact(&build(&g, n, l, false, &uf)?);
    Ok(FiniteFieldWitness { p: field.modulus(), u, order, n, l, det: det.to_string(), validated: det.is_zero() })
}

/// Singular cell of `g_u` over `F_p`: `(2^ord(u), 1)`, or `(3, 1)` for
/// `u = 1` where all coefficients agree.
pub fn finite_field_search(p: u64, u: u64) -> Result<FiniteFieldWitness> {
    let field = PrimeField::new(p)?;
    let uf = field.elem(u as i64);
    if uf.is_zero() {
        return Err(Error::UndefinedInput("u = 0 gives a rational function".into()));
    }
    let order = mult_order(uf)?;
    let u = uf.residue() as u64;
    if order == 1 {
        return validated_witness(&field, u, order, 3, 1);
    }
    if order >= 40 {
        return Err(Error::Unsupported(format!("order {order} needs n = 2^{order}, beyond desk scale")));
    }
    validated_witness(&field, u, order, 1 << order, 1)
}

/// Lexicographically least singular cell with `n + 2l <= bound`.
pub fn finite_field_exhaustive(p: u64, u: u64, bound: u64) -> Result<Option<FiniteFieldWitness>> {
    let field = PrimeField::new(p)?;
    let uf = field.elem(u as i64);
    if uf.is_zero() {
        return Err(Error::UndefinedInput("u = 0 gives a rational function".into()));
    }
    let order = mult_order(uf)?;
    let g = expand_product(&MahlerSpec::linear(uf), bound as usize);
    let grid = grid_compute(&g, bound, Strategy::Direct, Some(&uf))?;
    let first = grid.cells().find(|(_, c)| c.singular).map(|(k, _)| k);
    first.map(|(n, l)| validated_witness(&field, uf.residue() as u64, order, n, l)).transpose()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BadEvidence {
    pub u: String,
    pub max_quotient_degree: usize,
    pub terms: usize,
    /// Index of the first vanishing `beta` in the recurrence, if any.
    pub aborted_at: Option<usize>,
    pub note: String,
}

/// Expand `g_u` to `k` certified terms and report the largest partial
/// quotient degree. A finite all-linear prefix is evidence for bad
/// approximability, not a proof.
pub fn bad_evidence<F: CfField>(u: &F, k: usize) -> Result<BadEvidence> {
    if u.is_zero() {
        return Err(Error::UndefinedInput("u = 0 gives a rational function".into()));
    }
    let rec = beta_recurrence(u, k.max(2))?;
    if let Some(i) = rec.aborted_at {
        return Ok(BadEvidence {
            u: u.to_string(),
            max_quotient_degree: 0,
            terms: rec.terms.len(),
            aborted_at: Some(i),
            note: format!("recurrence aborted: beta_{i} = 0"),
        });
    }
    let g = expand_product(&MahlerSpec::linear(u.clone()), 2 * k + 2);
    let cf = cf_expand(&g, k)?;
    if cf.certified_count < k {
        return Err(Error::InsufficientPrecision { needed: k as i64, known: cf.certified_count as i64 });
    }
    let max = cf.max_quotient_degree();
    Ok(BadEvidence {
        u: u.to_string(),
        max_quotient_degree: max,
        terms: cf.certified_count,
        aborted_at: None,
        note: format!("first {} partial quotients checked; evidence only, not a proof", cf.certified_count),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn q(n: i64, d: i64) -> Q {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn thresholds() {
        let tu = Polynomial::new(vec![q(5, 1), q(1, 1)]);
        assert_eq!(elc_threshold(&tu, 2).unwrap(), q(1, 1));
        assert_eq!(elc_threshold(&Polynomial::new(vec![q(1, 1), q(0, 1), q(1, 1)]), 2).unwrap(), q(2, 1));
        assert_eq!(elc_threshold(&tu, 3).unwrap(), q(1, 2));
        assert!(elc_threshold(&tu, 1).is_err());
        assert!(within_threshold(1, &q(1, 1)));
        assert!(!within_threshold(2, &q(1, 1)));
    }

    #[test]
    fn symbolic_small() {
        let r = certify_symbolic(4).unwrap();
        assert_eq!(r.verdict, Verdict::SymbolicCertificate);
        assert_eq!(r.counts.cells, 6);
        assert_eq!(r.counts.degree_mismatches, Some(0));
        let r = certify_symbolic(24).unwrap();
        assert_eq!(r.verdict, Verdict::SymbolicCertificate);
        assert_eq!((r.counts.singular, r.counts.doubly_monic), (0, r.counts.cells));
    }

    #[test]
    fn symbolic_fault_injection() {
        let g = expand_product(&MahlerSpec::linear(symbolic_u()), 24);
        let bad = g.perturb(5, &Zu::from_i64(2)).unwrap();
        let r = certify_symbolic_series(&bad, 24).unwrap();
        assert_ne!(r.verdict, Verdict::SymbolicCertificate);
        assert!(r.witnesses.iter().any(|w| (w.n, w.l) == (5, 0)));
    }

    #[test]
    fn numeric_examples() {
        assert_eq!(certify_numeric(&q(2, 1), 32).unwrap().verdict, Verdict::CertifiedUpToBound);
        assert!(certify_numeric(&q(1, 1), 8).is_err());
        assert!(certify_numeric(&q(0, 1), 8).is_err());
        let r = certify_numeric(&q(-1, 1), 8).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample { n: 3, l: 1 });
        assert_eq!(r.verdict.to_string(), "counterexample(3,1)");
    }

    #[test]
    fn finite_field_examples() {
        for (p, u, n) in [(3, 2, 4), (5, 2, 16), (7, 3, 64), (3, 1, 3)] {
            let w = finite_field_search(p, u).unwrap();
            assert_eq!((w.n, w.l), (n, 1));
            assert!(w.validated);
        }
        assert!(finite_field_search(5, 0).is_err());
        assert!(finite_field_search(6, 1).is_err());
        let least = finite_field_exhaustive(3, 2, 12).unwrap().unwrap();
        assert!(least.validated);
        assert!((least.n, least.l) <= (4, 1));
    }

    #[test]
    fn bad_evidence_examples() {
        let r = bad_evidence(&q(2, 1), 200).unwrap();
        assert_eq!((r.max_quotient_degree, r.terms), (1, 200));
        assert_eq!(bad_evidence(&q(-1, 1), 200).unwrap().max_quotient_degree, 1);
        assert_eq!(bad_evidence(&q(1, 1), 10).unwrap().aborted_at, Some(2));
        assert!(bad_evidence(&q(0, 1), 10).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = certify_numeric(&q(-1, 1), 8).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["version", "params", "verdict", "witnesses", "counts", "runtimeMs", "coefficientTableHash"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["params"]["N"], 8);
        assert_eq!(v["params"]["mode"], "numeric");
        assert!(r.data_section().get("runtimeMs").is_none());
    }
}
