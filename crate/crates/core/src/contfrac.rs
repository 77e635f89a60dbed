//! Continued fractions `b0 + K(beta_i / b*_i)` with monic partial quotients,
//! convergents, the Legendre valuation identity, and the recurrences for the
//! linear-quotient family.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::poly::Polynomial;
use crate::ratfunc::RatFunc;
use crate::ring::{Field, Ring};
use crate::series::LaurentSeries;
use crate::twoadic::tau2;
use crate::zpoly::{self, ZPoly};

/// Field domains that can run the Euclidean expansion.
pub trait CfField: Field {
    /// Successive quotients of Euclid's algorithm on `(big, small)`, at most
    /// `limit` of them, each split as `lambda * b*` with `b*` monic. The flag
    /// reports whether a zero remainder was reached.
    fn euclid_quotients(big: Polynomial<Self>, small: Polynomial<Self>, limit: usize) -> (Vec<(Self, Polynomial<Self>)>, bool) {
        let (mut a, mut b) = (big, small);
        let mut out = Vec::new();
        while out.len() < limit && !b.is_zero() {
            let (q, r) = a.divrem(&b).expect("nonzero divisor");
            let lc = q.leading().unwrap().clone();
            out.push((lc, q.monic()));
            a = b;
            b = r;
        }
        (out, b.is_zero())
    }
}

impl CfField for BigRational {}
impl CfField for Fp {}

/// Over `Q(u)` the remainders are kept as `c * R` with `R` primitive in
/// `Z[u][t]`, so the per-coefficient work is integer polynomial arithmetic
/// and only a handful of scalars per step live in `Q(u)`.
impl CfField for RatFunc {
    fn euclid_quotients(big: Polynomial<Self>, small: Polynomial<Self>, limit: usize) -> (Vec<(Self, Polynomial<Self>)>, bool) {
        let mut out = Vec::new();
        if small.is_zero() {
            return (out, true);
        }
        let (mut c_prev, mut r_prev) = split_primitive(&big);
        let (mut c_cur, mut r_cur) = split_primitive(&small);
        while out.len() < limit {
            let (m, n) = (r_prev.len() - 1, r_cur.len() - 1);
            let delta = m - n;
            let q = top_quotient(&r_prev, &r_cur, delta);
            let lc_q = q[delta].clone();
            let inv_lc = lc_q.inv().unwrap();
            let bstar = Polynomial::new(q.iter().map(|c| c.mul_ref(&inv_lc)).collect());
            out.push((c_prev.mul_ref(&lc_q).div_exact(&c_cur).unwrap(), bstar));

            // D r_prev - (D q) r_cur with D the common denominator of q, exactly in Z[u]
            let d = q.iter().fold(ZPoly::one(), |acc, c| {
                if c.denom().is_one() {
                    acc
                } else {
                    let g = zpoly::gcd(&acc, c.denom());
                    acc.mul_ref(&c.denom().div_exact_poly(&g).unwrap())
                }
            });
            let d_rf = RatFunc::from_poly(d.clone());
            let qz: Vec<ZPoly> = q
                .iter()
                .map(|c| c.numer().mul_ref(&d.div_exact_poly(c.denom()).unwrap()))
                .collect();
            let mut rem: Vec<ZPoly> = r_prev.iter().map(|c| c.mul_ref(&d)).collect();
            for (i, qi) in qz.iter().enumerate() {
                if qi.is_zero() {
                    continue;
                }
                for (j, rc) in r_cur.iter().enumerate() {
                    if !rc.is_zero() {
                        rem[i + j] = rem[i + j].sub_ref(&qi.mul_ref(rc));
                    }
                }
            }
            rem.truncate(n);
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
            if rem.is_empty() {
                return (out, true);
            }
            let g = content_of(&rem);
            if !g.is_one() {
                for c in rem.iter_mut() {
                    *c = c.div_exact_poly(&g).unwrap();
                }
            }
            let c_next = c_prev.mul_ref(&RatFunc::from_poly(g)).div_exact(&d_rf).unwrap();
            c_prev = std::mem::replace(&mut c_cur, c_next);
            r_prev = std::mem::replace(&mut r_cur, rem);
        }
        (out, false)
    }
}

/// `p = c * R` with `R` primitive over `Z[u]`.
fn split_primitive(p: &Polynomial<RatFunc>) -> (RatFunc, Vec<ZPoly>) {
    let mut l = ZPoly::one();
    for c in p.coeffs() {
        if !c.denom().is_one() {
            let g = zpoly::gcd(&l, c.denom());
            l = l.mul_ref(&c.denom().div_exact_poly(&g).unwrap());
        }
    }
    let lifted: Vec<ZPoly> = p
        .coeffs()
        .iter()
        .map(|c| c.numer().mul_ref(&l.div_exact_poly(c.denom()).unwrap()))
        .collect();
    let g = content_of(&lifted);
    let r = lifted.iter().map(|c| c.div_exact_poly(&g).unwrap()).collect();
    (RatFunc::from_poly(g).div_exact(&RatFunc::from_poly(l)).unwrap(), r)
}

/// Gcd of the nonzero entries, positive leading coefficient.
fn content_of(v: &[ZPoly]) -> ZPoly {
    let mut order: Vec<&ZPoly> = v.iter().filter(|c| !c.is_zero()).collect();
    order.sort_by_key(|c| c.deg());
    let mut g = zpoly::gcd(order[0], &ZPoly::zero());
    for c in &order[1..] {
        if g.is_one() {
            break;
        }
        if c.div_exact_poly(&g).is_none() {
            g = zpoly::gcd(&g, c);
        }
    }
    g
}

/// Quotient of `a` by `b` over `Q(u)`; only the top coefficients matter.
fn top_quotient(a: &[ZPoly], b: &[ZPoly], delta: usize) -> Vec<RatFunc> {
    let n = b.len() - 1;
    let lc = RatFunc::from_poly(b[n].clone());
    let mut work: Vec<RatFunc> = a[n..].iter().cloned().map(RatFunc::from_poly).collect();
    let mut q = vec![RatFunc::zero(); delta + 1];
    for i in (0..=delta).rev() {
        let qi = work[i].div_exact(&lc).unwrap();
        for j in 1..=i.min(n) {
            if !b[n - j].is_zero() {
                work[i - j] = work[i - j].sub_ref(&qi.mul_ref(&RatFunc::from_poly(b[n - j].clone())));
            }
        }
        q[i] = qi;
    }
    q
}

#[derive(Clone, Debug, PartialEq)]
pub struct CfTerm<F: Ring> {
    pub beta: F,
    pub bstar: Polynomial<F>,
    /// Set when `b* = t + alpha`.
    pub alpha_lin: Option<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction<F: Ring> {
    pub b0: Polynomial<F>,
    /// Certified terms only.
    pub terms: Vec<CfTerm<F>>,
    pub certified_count: usize,
    /// Degree of the first uncertified quotient, when it was determined.
    pub next_quotient_degree: Option<usize>,
    /// The expansion ended with a zero remainder on exact input.
    pub terminating: bool,
    pub max_terms_reached: bool,
}

impl<F: CfField> ContinuedFraction<F> {
    /// Exact expansion of `p / q`.
    pub fn from_rational(p: &Polynomial<F>, q: &Polynomial<F>) -> Result<Self> {
        let (b0, r) = p.divrem(q)?;
        let (quots, done) = F::euclid_quotients(q.clone(), r, usize::MAX);
        debug_assert!(done);
        let terms = normalize(&quots);
        Ok(Self {
            b0,
            certified_count: terms.len(),
            terms,
            next_quotient_degree: None,
            terminating: true,
            max_terms_reached: false,
        })
    }
}

/// `Q_i = lambda_i b*_i` gives `beta_1 = 1/lambda_1`, `beta_i = 1/(lambda_{i-1} lambda_i)`.
fn normalize<F: Field>(quots: &[(F, Polynomial<F>)]) -> Vec<CfTerm<F>> {
    let mut prev: Option<&F> = None;
    quots
        .iter()
        .map(|(lambda, bstar)| {
            let denom = match prev {
                None => lambda.clone(),
                Some(p) => p.mul_ref(lambda),
            };
            prev = Some(lambda);
            CfTerm {
                beta: denom.inv().expect("nonzero quotient scalar"),
                alpha_lin: (bstar.deg() == Some(1)).then(|| bstar.coeff(0)),
                bstar: bstar.clone(),
            }
        })
        .collect()
}

/// Expand `alpha`, emitting only terms fixed by the known coefficients:
/// term `k` is certified when `s_k + s_{k+1} <= N`, `s_k` the degree of the
/// `k`-th convergent denominator.
pub fn cf_expand<F: CfField>(alpha: &LaurentSeries<F>, max_terms: usize) -> Result<ContinuedFraction<F>> {
    let n = alpha.order();
    if n < 0 {
        return Err(Error::InsufficientPrecision { needed: 0, known: n });
    }
    let b0 = alpha.polynomial_part();
    let n = n as usize;
    let mut w = n.min(2 * max_terms + 2);
    loop {
        // tail ~ A / t^w
        let a: Vec<F> = (1..=w as i64).rev().map(|k| alpha.coeff(k).unwrap()).collect();
        let big = Polynomial::monomial(F::one(), w);
        let limit = max_terms.saturating_add(1);
        let (quots, _) = F::euclid_quotients(big, Polynomial::new(a), limit);
        let degs: Vec<usize> = quots.iter().map(|(_, b)| b.deg().unwrap()).collect();
        let mut s = 0usize;
        let mut certified = 0;
        for k in 0..degs.len().saturating_sub(1).min(max_terms) {
            s += degs[k];
            if s + s + degs[k + 1] <= w {
                certified = k + 1;
            } else {
                break;
            }
        }
        if certified < max_terms && w < n {
            w = n.min(2 * w);
            continue;
        }
        let mut terms = normalize(&quots);
        terms.truncate(certified);
        return Ok(ContinuedFraction {
            b0,
            next_quotient_degree: degs.get(certified).copied(),
            certified_count: certified,
            terms,
            terminating: false,
            max_terms_reached: certified == max_terms,
        });
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Convergent<F: Ring> {
    pub p: Polynomial<F>,
    pub q: Polynomial<F>,
    pub s: usize,
    pub coprime: bool,
}

impl<F: Field> Convergent<F> {
    pub fn new(p: Polynomial<F>, q: Polynomial<F>) -> Self {
        let coprime = p.gcd(&q).is_constant();
        Self { s: q.deg().expect("nonzero denominator"), p, q, coprime }
    }
}

impl<F: Field> ContinuedFraction<F> {
    /// `p_0/q_0, ..., p_k/q_k` by the three-term recurrence.
    ///
    /// Coprimality comes from `p_k q_{k-1} - p_{k-1} q_k = -beta_k (p_{k-1} q_{k-2} - p_{k-2} q_{k-1})`,
    /// a nonzero constant while every `beta` is nonzero; no gcd is taken.
    pub fn convergent_sequence(&self, k: usize) -> Result<Vec<Convergent<F>>> {
        if k > self.certified_count {
            return Err(Error::InsufficientPrecision { needed: k as i64, known: self.certified_count as i64 });
        }
        let (mut p0, mut q0) = (Polynomial::one(), Polynomial::zero());
        let (mut p1, mut q1) = (self.b0.clone(), Polynomial::<F>::one());
        let conv = |p: Polynomial<F>, q: Polynomial<F>, coprime: bool| Convergent {
            s: q.deg().expect("nonzero denominator"),
            p,
            q,
            coprime,
        };
        let mut out = vec![conv(p1.clone(), q1.clone(), true)];
        let mut coprime = true;
        for term in &self.terms[..k] {
            coprime &= !term.beta.is_zero();
            let p2 = term.bstar.mul_ref(&p1).add_ref(&p0.scale(&term.beta));
            let q2 = term.bstar.mul_ref(&q1).add_ref(&q0.scale(&term.beta));
            out.push(conv(p2.clone(), q2.clone(), coprime));
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
        }
        Ok(out)
    }

    pub fn convergents(&self, k: usize) -> Result<Convergent<F>> {
        Ok(self.convergent_sequence(k)?.pop().unwrap())
    }

    /// `(alpha_i, beta_i)` pairs; fails on the first nonlinear quotient.
    pub fn linear_terms(&self) -> Result<Vec<(F, F)>> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                t.alpha_lin
                    .clone()
                    .map(|a| (a, t.beta.clone()))
                    .ok_or_else(|| Error::Unsupported(format!("partial quotient {} is not linear", i + 1)))
            })
            .collect()
    }

    pub fn max_quotient_degree(&self) -> usize {
        self.terms.iter().map(|t| t.bstar.deg().unwrap()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Term {
            beta: String,
            bstar: String,
            alpha_lin: Option<String>,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|t| Term {
                beta: t.beta.to_string(),
                bstar: t.bstar.render("t"),
                alpha_lin: t.alpha_lin.as_ref().map(|a| a.to_string()),
            })
            .collect();
        serde_json::json!({
            "b0": self.b0.render("t"),
            "terms": terms,
            "certifiedCount": self.certified_count,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LegendreOutcome {
    Holds,
    Violated,
    /// `alpha = p/q` on the whole known range.
    Terminating,
}

/// `alpha * q - p`.
fn residual<F: Field>(alpha: &LaurentSeries<F>, c: &Convergent<F>) -> LaurentSeries<F> {
    let aq = alpha.transform(&crate::series::Transform::Multiply(c.q.clone()));
    let p = LaurentSeries::from_polynomial(&c.p, aq.order());
    let lo = aq.start().min(p.start()).min(aq.order() + 1);
    let v = (lo..=aq.order()).map(|k| aq.coeff(k).unwrap().sub_ref(&p.coeff(k).unwrap())).collect();
    LaurentSeries::with_order(lo, v, aq.order())
}

/// Check `nu(alpha - p/q) = -deg q - next_degree`, where `next_degree` is the
/// degree of the following convergent denominator. With `None` the convergent
/// is expected to be the last one of a finite expansion.
pub fn legendre_verify<F: Field>(alpha: &LaurentSeries<F>, c: &Convergent<F>, next_degree: Option<usize>) -> Result<LegendreOutcome> {
    match next_degree {
        None => Ok(if residual(alpha, c).is_zero_on_range() { LegendreOutcome::Terminating } else { LegendreOutcome::Violated }),
        Some(nd) => {
            // nu(alpha q - p) = -nd
            let needed = (c.s + nd) as i64;
            if needed > alpha.order() {
                return Err(Error::InsufficientPrecision { needed, known: alpha.order() });
            }
            let r = residual(&alpha.truncate(needed), c);
            let holds = r.start() == nd as i64 && !r.coeff(nd as i64)?.is_zero();
            Ok(if holds { LegendreOutcome::Holds } else { LegendreOutcome::Violated })
        }
    }
}

/// Output of a recurrence run: `(alpha_i, beta_i)` for `i = 1, 2, ...` and
/// the index of the first vanishing `beta`, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence<F> {
    pub terms: Vec<(F, F)>,
    pub aborted_at: Option<usize>,
}

fn run_recurrence<F: Field>(
    u: &F,
    m: usize,
    first: F,
    second: F,
    inner: impl Fn(usize) -> Result<(F, F)>,
) -> Result<Recurrence<F>> {
    let usq = u.mul_ref(u);
    let mut terms: Vec<(F, F)> = Vec::with_capacity(m);
    for i in 1..=m {
        let alpha = if i % 2 == 1 { -u.clone() } else { u.clone() };
        let beta = match i {
            1 => first.clone(),
            2 => second.clone(),
            _ if i % 2 == 1 => {
                // i = 2k + 3
                let k = (i - 3) / 2;
                let (_, b_inner) = inner(k)?;
                -b_inner.div_exact(&terms[2 * k + 1].1).ok_or(Error::DivisionByZero)?
            }
            _ => {
                // i = 2k + 4
                let k = (i - 4) / 2;
                let (a_inner, _) = inner(k)?;
                a_inner.add_ref(&usq).sub_ref(&terms[2 * k + 2].1)
            }
        };
        if beta.is_zero() {
            return Ok(Recurrence { terms, aborted_at: Some(i) });
        }
        terms.push((alpha, beta));
    }
    Ok(Recurrence { terms, aborted_at: None })
}

/// `alpha_{2k+1} = -u`, `alpha_{2k+2} = u`, `beta_1 = 1`, `beta_2 = u^2 - u`,
/// `beta_{2k+3} = -beta_{k+2}/beta_{2k+2}`,
/// `beta_{2k+4} = alpha_{k+2} + u^2 - beta_{2k+3}`.
pub fn beta_recurrence<F: Field>(u: &F, m: usize) -> Result<Recurrence<F>> {
    if u.is_zero() {
        return Err(Error::UndefinedInput("recurrence needs u != 0".into()));
    }
    if m < 2 {
        return Err(Error::UndefinedInput("recurrence needs M >= 2".into()));
    }
    let usq = u.mul_ref(u);
    let mut terms: Vec<(F, F)> = vec![(-u.clone(), F::one())];
    let b2 = usq.sub_ref(u);
    if b2.is_zero() {
        return Ok(Recurrence { terms, aborted_at: Some(2) });
    }
    terms.push((u.clone(), b2));
    for i in 3..=m {
        let beta = if i % 2 == 1 {
            let k = (i - 3) / 2;
            -terms[k + 1].1.div_exact(&terms[2 * k + 1].1).unwrap()
        } else {
            let k = (i - 4) / 2;
            terms[k + 1].0.add_ref(&usq).sub_ref(&terms[2 * k + 2].1)
        };
        if beta.is_zero() {
            return Ok(Recurrence { terms, aborted_at: Some(i) });
        }
        let alpha = if i % 2 == 1 { -u.clone() } else { u.clone() };
        terms.push((alpha, beta));
    }
    Ok(Recurrence { terms, aborted_at: None })
}

/// Coefficients of `t^{2n} g_u` from those of `t^n g_u` (`base`, as
/// `(alpha_{n,i}, beta_{n,i})` starting at `i = 1`).
pub fn shifted_recurrence<F: Field>(n: u64, u: &F, base: &[(F, F)], m: usize) -> Result<Recurrence<F>> {
    if u.is_zero() {
        return Err(Error::UndefinedInput("recurrence needs u != 0".into()));
    }
    let e = tau2(n + 1) as i64 - tau2(n) as i64;
    let upow = if e >= 0 { u.pow_u(e as u64) } else { u.inv().unwrap().pow_u(e.unsigned_abs()) };
    let first = u.pow_u(tau2(2 * n) as u64);
    let second = u.mul_ref(u).sub_ref(&upow);
    run_recurrence(u, m, first, second, |k| {
        base.get(k + 1).cloned().ok_or(Error::InsufficientPrecision {
            needed: k as i64 + 2,
            known: base.len() as i64,
        })
    })
}

/// `((t + u) p(t^2), q(t^2))`.
pub fn lift_convergent<F: Field>(c: &Convergent<F>, u: &F) -> Convergent<F> {
    let t_plus_u = Polynomial::new(vec![u.clone(), F::one()]);
    Convergent::new(t_plus_u.mul_ref(&c.p.compose_pow(2)), c.q.compose_pow(2))
}

/// `(alpha_m, beta_m)` from the first two Hankel rows: `row1[l] = det H(1,l)`,
/// `row2[l] = det H(2,l)`, with `det H(., -1) = 1`.
pub fn coeffs_from_hankel<F: Field>(row1: &[F], row2: &[F], m: usize) -> Result<(F, F)> {
    if m < 3 {
        return Err(Error::UndefinedInput("m must be >= 3".into()));
    }
    let get = |row: &[F], idx: i64| -> Result<F> {
        if idx == -1 {
            return Ok(F::one());
        }
        row.get(idx as usize)
            .cloned()
            .ok_or(Error::InsufficientPrecision { needed: idx, known: row.len() as i64 - 1 })
    };
    let m = m as i64;
    let div = |a: F, b: &F| a.div_exact(b).ok_or(Error::DivisionByZero);
    let h1 = |i| get(row1, i);
    let h2 = |i| get(row2, i);
    let beta = -div(h1(m - 3)?.mul_ref(&h1(m - 1)?), &h1(m - 2)?.pow_u(2))?;
    let t1 = div(h1(m - 2)?.mul_ref(&h2(m - 1)?), &h1(m - 1)?)?;
    let t2 = div(h1(m - 1)?.mul_ref(&h2(m - 3)?), &h1(m - 2)?)?;
    let alpha = -div(t1.add_ref(&t2), &h2(m - 2)?)?;
    Ok((alpha, beta))
}
