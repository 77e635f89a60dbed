//! Truncated Laurent series in `t^{-1}` and the Mahler-type generators.
//!
//! A series is `sum_{k >= start} a_k t^{-k}` with coefficients known for
//! `k <= order`. Anything past `order` is unknown, never implicitly zero.

use num_traits::Zero;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::twoadic::tau2;

#[derive(Clone, PartialEq, Debug)]
pub struct LaurentSeries<T> {
    /// Index of the first stored coefficient; the lead degree is `-start`.
    start: i64,
    coeffs: Vec<T>,
    order: i64,
}

impl<T: Ring> LaurentSeries<T> {
    /// Coefficients `a_start, a_{start+1}, ...`; the truncation order is the
    /// index of the last one. Leading zeros are stripped.
    pub fn from_coeffs(start: i64, coeffs: Vec<T>) -> Self {
        let order = start + coeffs.len() as i64 - 1;
        Self::with_order(start, coeffs, order)
    }

    /// Like [`from_coeffs`](Self::from_coeffs) but with an explicit order;
    /// coefficients between the list end and `order` are zero.
    pub fn with_order(start: i64, mut coeffs: Vec<T>, order: i64) -> Self {
        coeffs.truncate((order - start + 1).max(0) as usize);
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        let start = start + lead as i64;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { start, coeffs, order }
    }

    /// A polynomial in `t`, known exactly up to index `order`.
    pub fn from_polynomial(p: &Polynomial<T>, order: i64) -> Self {
        let deg = p.deg().map_or(0, |d| d as i64);
        let coeffs = p.coeffs().iter().rev().cloned().collect();
        Self::with_order(-deg, coeffs, order)
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Index of the first nonzero coefficient (the series is zero on the
    /// known range when this exceeds `order`).
    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn is_zero_on_range(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a_k`; zero below the lead term, an error beyond the truncation.
    pub fn coeff(&self, k: i64) -> Result<T> {
        if k > self.order {
            return Err(Error::InsufficientPrecision { needed: k, known: self.order });
        }
        if k < self.start {
            return Ok(T::zero());
        }
        Ok(self.coeffs.get((k - self.start) as usize).cloned().unwrap_or_else(T::zero))
    }

    fn coeff_ref(&self, k: i64) -> Option<&T> {
        if k < self.start {
            return None;
        }
        self.coeffs.get((k - self.start) as usize)
    }

    /// Forget every coefficient past `order` (no-op when already shorter).
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Self::with_order(self.start, self.coeffs.clone(), order)
    }

    /// Tail coefficients `a_1..=a_n`.
    pub fn tail(&self, n: i64) -> Result<Vec<T>> {
        (1..=n).map(|k| self.coeff(k)).collect()
    }

    /// Polynomial part `sum_{k <= 0} a_k t^{-k}`.
    pub fn polynomial_part(&self) -> Polynomial<T> {
        if self.start > 0 {
            return Polynomial::zero();
        }
        let mut v = vec![T::zero(); (-self.start) as usize + 1];
        for k in self.start..=0.min(self.order) {
            if let Some(c) = self.coeff_ref(k) {
                v[(-k) as usize] = c.clone();
            }
        }
        Polynomial::new(v)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> LaurentSeries<S> {
        LaurentSeries::with_order(self.start, self.coeffs.iter().map(f).collect(), self.order)
    }

    /// Add `delta` to `a_k` (test fault injection).
    pub fn perturb(&self, k: i64, delta: &T) -> Result<Self> {
        let current = self.coeff(k)?;
        let lo = self.start.min(k);
        let mut v: Vec<T> = (lo..=self.order.min(self.last_index().max(k)))
            .map(|i| self.coeff(i).unwrap())
            .collect();
        v[(k - lo) as usize] = current.add_ref(delta);
        Ok(Self::with_order(lo, v, self.order))
    }

    fn last_index(&self) -> i64 {
        self.start + self.coeffs.len() as i64 - 1
    }

    pub fn transform(&self, action: &Transform<T>) -> Self {
        match action {
            Transform::Shift(j) => Self {
                start: self.start - j,
                coeffs: self.coeffs.clone(),
                order: self.order - j,
            },
            Transform::Substitute(d) => {
                let d = *d as i64;
                let mut v = Vec::with_capacity(self.coeffs.len() * d as usize);
                for (i, c) in self.coeffs.iter().enumerate() {
                    if i > 0 {
                        v.extend(std::iter::repeat_with(T::zero).take(d as usize - 1));
                    }
                    v.push(c.clone());
                }
                Self::with_order(self.start * d, v, self.order * d)
            }
            Transform::Multiply(q) => {
                let Some(deg) = q.deg() else {
                    return Self::with_order(self.order + 1, vec![], self.order);
                };
                let deg = deg as i64;
                let start = self.start - deg;
                let order = self.order - deg;
                if order < start {
                    return Self::with_order(start, vec![], order);
                }
                let mut v = vec![T::zero(); (order - start + 1) as usize];
                for (j, qj) in q.coeffs().iter().enumerate() {
                    if qj.is_zero() {
                        continue;
                    }
                    // t^j * a_k t^{-k} lands at index k - j
                    for (i, c) in self.coeffs.iter().enumerate() {
                        let m = self.start + i as i64 - j as i64;
                        if m <= order {
                            let slot = &mut v[(m - start) as usize];
                            *slot = slot.add_ref(&qj.mul_ref(c));
                        }
                    }
                }
                Self::with_order(start, v, order)
            }
        }
    }

    /// Valuation, absolute value and distance to the nearest polynomial.
    pub fn measure(&self) -> Result<Measure> {
        if self.is_zero_on_range() {
            return Err(Error::UndefinedInput("valuation of a series that is zero on its known range".into()));
        }
        let k0 = (self.start.max(1)..=self.order).find(|&k| self.coeff_ref(k).is_some_and(|c| !c.is_zero()));
        Ok(Measure {
            valuation: -self.start,
            abs_log2: -self.start,
            norm_log2: k0.map(|k| -k),
            truncation_limited: k0.is_none(),
        })
    }

    /// Rows `(k, a_k)` over the known range, ascending.
    pub fn rows(&self, from: i64) -> Vec<(i64, T)> {
        (from..=self.order).map(|k| (k, self.coeff(k).unwrap())).collect()
    }

    pub fn to_csv(&self, from: i64) -> String {
        let mut out = String::from("k,coefficient\n");
        for (k, c) in self.rows(from) {
            out.push_str(&format!("{k},{c}\n"));
        }
        out
    }

    /// SHA-256 over the rendered coefficients `a_from..=a_to`, one `k:a_k`
    /// line each. Identifies a coefficient table in caches and reports.
    pub fn table_hash(&self, from: i64, to: i64) -> Result<String> {
        let mut h = Sha256::new();
        for k in from..=to {
            h.update(format!("{k}:{}\n", self.coeff(k)?));
        }
        Ok(format!("{:x}", h.finalize()))
    }

    pub fn to_json(&self, from: i64) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            k: i64,
            coefficient: String,
        }
        let rows: Vec<Row> = self
            .rows(from)
            .into_iter()
            .map(|(k, c)| Row { k, coefficient: c.to_string() })
            .collect();
        serde_json::to_value(rows).unwrap()
    }
}

#[derive(Clone)]
pub enum Transform<T: Ring> {
    /// Multiply by `t^j`; a negative `j` divides.
    Shift(i64),
    /// `t -> t^d`.
    Substitute(u64),
    Multiply(Polynomial<T>),
}

/// `|alpha| = 2^valuation`; `||alpha|| = 2^norm_log2`, or `0` when `norm_log2`
/// is `None` (no nonzero tail coefficient is known).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measure {
    pub valuation: i64,
    pub abs_log2: i64,
    pub norm_log2: Option<i64>,
    pub truncation_limited: bool,
}

/// `g(t) = t^{-1} prod_{i >= 0} P*(t^{-d^i})` with `P*` the reversal of `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct MahlerSpec<T: Ring> {
    pub p: Polynomial<T>,
    pub d: u64,
}

impl<T: Ring> MahlerSpec<T> {
    pub fn new(p: Polynomial<T>, d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::UndefinedInput(format!("d must be >= 2, got {d}")));
        }
        match p.leading() {
            Some(c) if p.deg() >= Some(1) && c.is_one() => Ok(Self { p, d }),
            _ => Err(Error::Unsupported("P must be monic of degree >= 1".into())),
        }
    }

    /// `P = t + u`, `d = 2`.
    pub fn linear(u: T) -> Self {
        Self { p: Polynomial::new(vec![u, T::one()]), d: 2 }
    }

    /// `Some(u)` when this is the `t + u`, `d = 2` family.
    pub fn linear_parameter(&self) -> Option<T> {
        (self.d == 2 && self.p.deg() == Some(1) && self.p.coeff(1).is_one()).then(|| self.p.coeff(0))
    }
}

/// Expand the product to `a_1..=a_N`.
pub fn expand_product<T: Ring>(spec: &MahlerSpec<T>, n: usize) -> LaurentSeries<T> {
    assert!(n >= 1, "N must be >= 1");
    let deg = spec.p.deg().unwrap();
    // factor i as a sparse polynomial in s = t^{-1}: sum_j p_{deg-j} s^{j d^i}
    let reversed: Vec<(usize, T)> = (0..=deg)
        .map(|j| (j, spec.p.coeff(deg - j)))
        .filter(|(j, c)| *j > 0 && !c.is_zero())
        .collect();
    // b[m] = coefficient of s^m, a_{m+1} = b[m]
    let mut b = vec![T::zero(); n];
    b[0] = T::one();
    let mut step = 1usize;
    while step < n {
        for m in (1..n).rev() {
            for (j, c) in &reversed {
                let Some(src) = (j * step <= m).then(|| m - j * step) else { break };
                if !b[src].is_zero() {
                    b[m] = b[m].add_ref(&c.mul_ref(&b[src]));
                }
            }
        }
        step = match step.checked_mul(spec.d as usize) {
            Some(s) => s,
            None => break,
        };
    }
    LaurentSeries::from_coeffs(1, b)
}

/// `u^{tau2(n-1)}`, with `0^0 = 1`.
pub fn coeff_closed_form<T: Ring>(u: &T, n: u64) -> T {
    assert!(n >= 1, "n must be >= 1");
    u.pow_u(tau2(n - 1) as u64)
}

/// Check `g(t) = t^{d-1-deg P} P(t) g(t^d)` coefficient-wise up to index `n`.
/// The power of `t` is 1 exactly when `deg P = d - 1`.
pub fn functional_equation_holds<T: Ring>(g: &LaurentSeries<T>, spec: &MahlerSpec<T>, n: i64) -> bool {
    let shift = spec.d as i64 - 1 - spec.p.deg().unwrap() as i64;
    let rhs = g
        .transform(&Transform::Substitute(spec.d))
        .transform(&Transform::Multiply(spec.p.clone()))
        .transform(&Transform::Shift(shift));
    let top = n.min(g.order()).min(rhs.order());
    (g.start().min(rhs.start())..=top).all(|k| g.coeff(k).unwrap() == rhs.coeff(k).unwrap())
}

pub fn functional_equation_check<T: Ring>(spec: &MahlerSpec<T>, n: usize) -> bool {
    functional_equation_holds(&expand_product(spec, n), spec, n as i64)
}

/// `a_n a_{2^D + 1 - n} = u^D` for `1 <= n <= 2^D`.
pub fn mirror_identity_check<T: Ring>(u: &T, d: u32) -> Result<bool> {
    if u.is_zero() {
        return Err(Error::UndefinedInput("mirror identity needs u != 0".into()));
    }
    if d == 0 || d > 30 {
        return Err(Error::UndefinedInput(format!("D out of range: {d}")));
    }
    let top = 1usize << d;
    let g = expand_product(&MahlerSpec::linear(u.clone()), top);
    let target = u.pow_u(d as u64);
    Ok((1..=top as i64).all(|n| {
        g.coeff(n).unwrap().mul_ref(&g.coeff(top as i64 + 1 - n).unwrap()) == target
    }))
}
