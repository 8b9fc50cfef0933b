//! Every identity as an equality of two exactly computed series.
//!
//! A case names its two sides as builders over `(k, a)` and a hypothesis
//! predicate. [`verify`] compares every coefficient up to the truncation
//! order and reports the first mismatch; there is no tolerance anywhere.
//! Two-variable cases compare coefficients of `x^m q^n`, optionally only for
//! `m <= x_bound`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::families::{family_series_xq_budgeted, Family, FamilySpec, DEFAULT_BUDGET};
use crate::qkernel::{
    double_recurrence_sides, multisum, qbar_doubled, reflect_minus, shift_relation_sides,
    DoubledIndex, MultisumSpec, MultisumVariant,
};
use crate::series::{expand_product_q, Factor, ProductSpec, SeriesQ, SeriesXQ, Substitution};

/// A series in `q` alone or in `x` and `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Series {
    Q(SeriesQ),
    XQ(SeriesXQ),
}

impl Series {
    pub fn order(&self) -> usize {
        match self {
            Series::Q(s) => s.order(),
            Series::XQ(s) => s.order(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variables {
    QOnly,
    XAndQ,
}

/// Case parameters. Single-parameter cases use `a = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Params {
    pub k: u32,
    pub a: u32,
}

impl Params {
    pub fn new(k: u32, a: u32) -> Self {
        Params { k, a }
    }
}

pub type Builder = fn(Params, &Ctx) -> Result<Series>;

/// One registry entry.
#[derive(Clone, Copy)]
pub struct IdentityCase {
    pub id: &'static str,
    pub statement: &'static str,
    pub variables: Variables,
    /// Display names of `k` and `a`, e.g. `["K", "I"]` for doubled kernel
    /// indices or `["k"]` for single-parameter cases.
    pub param_names: &'static [&'static str],
    /// Grid range multiplier: doubled-index cases run `K` up to `2 k_max`.
    pub k_scale: u32,
    pub hypothesis: &'static str,
    pub domain: fn(Params) -> bool,
    pub lhs: Builder,
    pub rhs: Builder,
}

impl fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityCase")
            .field("id", &self.id)
            .field("statement", &self.statement)
            .finish_non_exhaustive()
    }
}

impl IdentityCase {
    pub fn describe(&self, p: Params) -> String {
        let values = [p.k, p.a];
        self.param_names
            .iter()
            .zip(values)
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Rejects parameters outside the hypothesis, naming it.
    pub fn check_domain(&self, p: Params) -> Result<()> {
        let single_ok = self.param_names.len() == 2 || p.a == 0;
        if !single_ok {
            return Err(usage(format!("{} takes only {}", self.id, self.param_names[0])));
        }
        if (self.domain)(p) {
            Ok(())
        } else {
            Err(usage(format!(
                "{} requires {}; got {}",
                self.id,
                self.hypothesis,
                self.describe(p)
            )))
        }
    }

    /// All valid parameters with first index at most `k_max * k_scale`.
    pub fn grid(&self, k_max: u32) -> Vec<Params> {
        let mut out = Vec::new();
        for k in 1..=k_max * self.k_scale {
            if self.param_names.len() == 1 {
                out.push(Params::new(k, 0));
            } else {
                out.extend((0..=k + 1).map(|a| Params::new(k, a)));
            }
        }
        out.retain(|&p| (self.domain)(p));
        out
    }

    /// Whether `selector` names this case: the full id, or a prefix ending
    /// at a `.` or `-` boundary (`thm-6` selects every `thm-6.*` case).
    pub fn matches(&self, selector: &str) -> bool {
        match self.id.strip_prefix(selector) {
            Some("") => true,
            Some(rest) => selector.ends_with(['.', '-']) || rest.starts_with(['.', '-']),
            None => false,
        }
    }
}

type FamilyKey = (FamilySpec, usize);

/// Truncation settings and a shared cache of enumerated families and kernels.
pub struct Ctx {
    order: usize,
    x_bound: Option<usize>,
    budget: u32,
    families: Mutex<HashMap<FamilyKey, Arc<SeriesXQ>>>,
    kernels: Mutex<HashMap<DoubledIndex, Arc<SeriesXQ>>>,
}

impl Ctx {
    pub fn new(order: usize) -> Self {
        Ctx {
            order,
            x_bound: None,
            budget: DEFAULT_BUDGET,
            families: Mutex::default(),
            kernels: Mutex::default(),
        }
    }

    pub fn with_x_bound(mut self, bound: Option<usize>) -> Self {
        self.x_bound = bound;
        self
    }

    pub fn with_budget(mut self, budget: u32) -> Self {
        self.budget = budget;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn x_bound(&self) -> Option<usize> {
        self.x_bound
    }

    fn family_at(&self, spec: FamilySpec, order: usize) -> Result<Arc<SeriesXQ>> {
        let key = (spec, order);
        if let Some(hit) = self.families.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let order_u32 = u32::try_from(order).map_err(|_| usage("order too large"))?;
        let series = Arc::new(family_series_xq_budgeted(&spec, order_u32, self.budget)?);
        self.families
            .lock()
            .expect("cache lock")
            .insert(key, series.clone());
        Ok(series)
    }

    fn family(&self, family: Family, k: u32, a: u32) -> Result<Arc<SeriesXQ>> {
        self.family_at(FamilySpec::of(family, k, a)?, self.order)
    }

    fn refined(&self, k: u32, a: u32, i: u32) -> Result<Arc<SeriesXQ>> {
        self.family_at(FamilySpec::new(Family::Urefined, k, a, Some(i))?, self.order)
    }

    fn kernel(&self, k: u32, i: u32) -> Result<Arc<SeriesXQ>> {
        let idx = DoubledIndex::new(k, i)?;
        if let Some(hit) = self.kernels.lock().expect("cache lock").get(&idx) {
            return Ok(hit.clone());
        }
        let series = Arc::new(qbar_doubled(idx, self.order)?);
        self.kernels
            .lock()
            .expect("cache lock")
            .insert(idx, series.clone());
        Ok(series)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

/// First mismatching coefficient; `m` is absent for `q`-only cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub m: Option<usize>,
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: Params,
    pub label: String,
    #[serde(rename = "N")]
    pub order: usize,
    pub x_bound: Option<usize>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub error: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] N={}: ", self.id, self.label, self.order)?;
        match (&self.verdict, &self.witness, &self.error) {
            (Verdict::Pass, _, _) => write!(f, "pass"),
            (Verdict::Fail, Some(w), _) => match w.m {
                Some(m) => write!(f, "FAIL at x^{m} q^{}: {} vs {}", w.n, w.lhs, w.rhs),
                None => write!(f, "FAIL at q^{}: {} vs {}", w.n, w.lhs, w.rhs),
            },
            (_, _, Some(e)) => write!(f, "ERROR {e}"),
            _ => write!(f, "{:?}", self.verdict),
        }
    }
}

fn compare(lhs: &Series, rhs: &Series, x_bound: Option<usize>) -> Result<Option<Witness>> {
    match (lhs, rhs) {
        (Series::Q(l), Series::Q(r)) => {
            if l.order() != r.order() {
                return Err(usage("sides were built at different orders"));
            }
            Ok(l.first_difference(r).map(|(n, a, b)| Witness {
                m: None,
                n,
                lhs: a.to_string(),
                rhs: b.to_string(),
            }))
        }
        (Series::XQ(l), Series::XQ(r)) => {
            if l.order() != r.order() {
                return Err(usage("sides were built at different orders"));
            }
            Ok(l.first_difference(r, x_bound).map(|(m, n, a, b)| Witness {
                m: Some(m),
                n,
                lhs: a.to_string(),
                rhs: b.to_string(),
            }))
        }
        _ => Err(usage("sides have different variables")),
    }
}

/// Checks one case at one parameter point. Parameters outside the
/// hypothesis are a usage error, never a silent skip; computational errors
/// come back as an `Error` report.
pub fn verify(case: &IdentityCase, params: Params, ctx: &Ctx) -> Result<VerificationReport> {
    case.check_domain(params)?;
    let mut report = VerificationReport {
        id: case.id.to_string(),
        params,
        label: case.describe(params),
        order: ctx.order,
        x_bound: match case.variables {
            Variables::QOnly => None,
            Variables::XAndQ => ctx.x_bound,
        },
        verdict: Verdict::Pass,
        witness: None,
        error: None,
    };
    let outcome = (case.lhs)(params, ctx)
        .and_then(|l| Ok((l, (case.rhs)(params, ctx)?)))
        .and_then(|(l, r)| compare(&l, &r, ctx.x_bound));
    match outcome {
        Ok(None) => {}
        Ok(Some(w)) => {
            report.verdict = Verdict::Fail;
            report.witness = Some(w);
        }
        Err(e) => {
            report.verdict = Verdict::Error;
            report.error = Some(e.to_string());
        }
    }
    Ok(report)
}

/// [`verify`] restricted to two-variable cases, compared up to `x^x_bound`.
pub fn verify_functional(
    case: &IdentityCase,
    params: Params,
    order: usize,
    x_bound: usize,
) -> Result<VerificationReport> {
    if case.variables != Variables::XAndQ {
        return Err(usage(format!("{} is not a two-variable relation", case.id)));
    }
    verify(case, params, &Ctx::new(order).with_x_bound(Some(x_bound)))
}

/// Runs every case selected by `selectors` (all cases when empty) over its
/// grid with `k <= k_max`. Reports are ordered by registry position, then
/// parameters, regardless of scheduling.
pub fn verify_grid(
    cases: &[IdentityCase],
    selectors: &[String],
    k_max: u32,
    ctx: &Ctx,
) -> Vec<VerificationReport> {
    let jobs: Vec<(usize, &IdentityCase, Params)> = cases
        .iter()
        .enumerate()
        .filter(|(_, c)| selectors.is_empty() || selectors.iter().any(|s| c.matches(s)))
        .flat_map(|(i, c)| c.grid(k_max).into_iter().map(move |p| (i, c, p)))
        .collect();
    let mut reports: Vec<(usize, VerificationReport)> = jobs
        .into_par_iter()
        .map(|(i, c, p)| (i, verify(c, p, ctx).expect("grid parameters satisfy the domain")))
        .collect();
    reports.sort_by_key(|(i, r)| (*i, r.params));
    reports.into_iter().map(|(_, r)| r).collect()
}

pub fn find(id: &str) -> Result<IdentityCase> {
    registry()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| usage(format!("unknown identity id `{id}`; run `rrg verify --list`")))
}

// ---------------------------------------------------------------------------
// side builders

fn q_fam(ctx: &Ctx, f: Family, k: u32, a: u32) -> Result<Series> {
    Ok(Series::Q(ctx.family(f, k, a)?.at_x_one()))
}

fn xq_fam(ctx: &Ctx, f: Family, k: u32, a: u32) -> Result<SeriesXQ> {
    Ok((*ctx.family(f, k, a)?).clone())
}

fn product(ctx: &Ctx, spec: ProductSpec) -> Result<SeriesQ> {
    expand_product_q(&spec, ctx.order)
}

fn u(x: u32) -> usize {
    x as usize
}

/// `(q^a, q^{m-a}, q^m; q^m)_inf / (q^2; q^2)_inf` times the given prefactors.
fn triple_over_q2(prefactors: &[Factor], a: u32, m: u32) -> ProductSpec {
    let mut spec = ProductSpec::new();
    for f in prefactors {
        spec = spec.times(*f);
    }
    spec.triple(u(a), u(m)).over(Factor::poch(2, 2))
}

/// `(q^b, q^c, q^m; q^m)_inf` with independent exponents.
fn pair_over_q2(prefactors: &[Factor], b: u32, c: u32, m: u32) -> ProductSpec {
    let mut spec = ProductSpec::new();
    for f in prefactors {
        spec = spec.times(*f);
    }
    spec.times(Factor::poch(u(b), u(m)))
        .times(Factor::poch(u(c), u(m)))
        .times(Factor::poch(u(m), u(m)))
        .over(Factor::poch(2, 2))
}

fn two_term(ctx: &Ctx, first: ProductSpec, second: ProductSpec) -> Result<Series> {
    let a = product(ctx, first)?;
    let b = product(ctx, second)?.shift(1);
    Ok(Series::Q(a.add(&b)?))
}

fn neg_q() -> Factor {
    Factor::poch_neg(1, 1)
}

fn neg_q2_q() -> Factor {
    Factor::poch_neg(2, 1)
}

fn neg_q2_q2() -> Factor {
    Factor::poch_neg(2, 2)
}

fn shifted(s: &SeriesXQ, e: usize, ctx: &Ctx) -> Result<SeriesXQ> {
    s.scale_substitute(Substitution::shift_x(e), ctx.order)
}

/// `prefactor * DQ_{K,I}` where the prefactor is an `x`-carrying product.
fn kernel_times(ctx: &Ctx, k: u32, i: u32, prefactor: Factor) -> Result<SeriesXQ> {
    let mut s = (*ctx.kernel(k, i)?).clone();
    ProductSpec::new().times(prefactor).apply_xq(&mut s)?;
    Ok(s)
}

/// `(-x q^c; q^2)_inf`.
fn neg_x(c: usize) -> Factor {
    Factor::poch_neg(c, 2).with_x(1)
}

fn sum_terms(ctx: &Ctx, terms: &[(&SeriesXQ, usize, usize)]) -> Result<SeriesXQ> {
    let mut out = SeriesXQ::zero(ctx.order);
    for &(s, m, n) in terms {
        out.add_monomial_multiple(s, 1, m, n)?;
    }
    Ok(out)
}

fn xq(s: SeriesXQ) -> Result<Series> {
    Ok(Series::XQ(s))
}

fn dom_ka(p: Params) -> bool {
    p.k >= p.a && p.a >= 1
}

fn dom_ka0(p: Params) -> bool {
    p.k >= p.a
}

// Family closed forms and multisums.

fn a_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::A, p.k, p.a)
}

fn b_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::B, p.k, p.a)
}

fn ag_multisum(p: Params, c: &Ctx) -> Result<Series> {
    let spec = MultisumSpec::new(p.k, p.a, MultisumVariant::AndrewsGordon)?;
    Ok(Series::Q(multisum(&spec, c.order)?))
}

fn ag_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = ProductSpec::new()
        .triple(u(p.a), u(2 * p.k + 1))
        .over(Factor::poch(1, 1));
    Ok(Series::Q(product(c, spec)?))
}

fn w_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::W, p.k, p.a)
}

fn wbar_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::Wbar, p.k, p.a)
}

fn wbar_prev(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::Wbar, p.k, p.a - 1)
}

fn g_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::G, p.k, p.a)
}

fn wg_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[Factor::poch_neg(1, 2)], p.a, 2 * p.k + 2);
    Ok(Series::Q(product(c, spec)?))
}

fn w_even_multisum(p: Params, c: &Ctx) -> Result<Series> {
    let spec = MultisumSpec::new(p.k, p.a, MultisumVariant::EvenParity)?;
    Ok(Series::Q(multisum(&spec, c.order)?))
}

/// `(q^a, q^{2k+2-a}, q^{2k+2}; q^{2k+2})_inf / ((-q; q^2)_inf (q; q)_inf)`.
fn wbar_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = ProductSpec::new()
        .triple(u(p.a), u(2 * p.k + 2))
        .over(Factor::poch_neg(1, 2))
        .over(Factor::poch(1, 1));
    Ok(Series::Q(product(c, spec)?))
}

fn wbar_odd_multisum(p: Params, c: &Ctx) -> Result<Series> {
    let spec = MultisumSpec::new(p.k, p.a, MultisumVariant::OddParity)?;
    Ok(Series::Q(multisum(&spec, c.order)?))
}

fn wbar_even_form(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[neg_q2_q2()], p.a, 2 * p.k + 2);
    Ok(Series::Q(product(c, spec)?))
}

fn w_mixed_product(p: Params, c: &Ctx) -> Result<Series> {
    let (k, a) = (p.k, p.a);
    let m = 2 * k + 2;
    let pre = [Factor::poch_neg(3, 2)];
    two_term(
        c,
        pair_over_q2(&pre, a + 1, 2 * k + 1 - a, m),
        pair_over_q2(&pre, a - 1, 2 * k + 3 - a, m),
    )
}

/// The exponents `a+1` and `2k+1-a` pair up under modulus `2k+2`; that is
/// the form that holds.
fn wbar_mixed_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = pair_over_q2(&[neg_q2_q2()], p.a + 1, 2 * p.k + 1 - p.a, 2 * p.k + 2);
    Ok(Series::Q(product(c, spec)?))
}

/// The same product taken modulo `2k+1`. It does not hold; kept so a test
/// pins the failure.
pub fn wbar_mixed_product_odd_modulus(k: u32, a: u32, order: usize) -> Result<SeriesQ> {
    let spec = pair_over_q2(&[neg_q2_q2()], a + 1, 2 * k + 1 - a, 2 * k + 1);
    expand_product_q(&spec, order)
}

fn abar_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::Abar, p.k, p.a)
}

fn bbar_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::Bbar, p.k, p.a)
}

fn u_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::U, p.k, p.a)
}

fn ubar_side(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::Ubar, p.k, p.a)
}

fn ubar_prev(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::Ubar, p.k, p.a - 1)
}

fn u_same_parity_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[neg_q()], p.a, 2 * p.k);
    Ok(Series::Q(product(c, spec)?))
}

fn u_mixed_parity_product(p: Params, c: &Ctx) -> Result<Series> {
    let (k, a) = (p.k, p.a);
    let pre = [neg_q2_q()];
    two_term(
        c,
        pair_over_q2(&pre, a + 1, 2 * k - a - 1, 2 * k),
        pair_over_q2(&pre, a - 1, 2 * k - a + 1, 2 * k),
    )
}

fn ubar_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[neg_q2_q2(), neg_q2_q2()], p.a, 2 * p.k);
    Ok(Series::Q(product(c, spec)?))
}

// Closed forms at doubled and odd moduli.

fn u_2k_2a(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::U, 2 * p.k, 2 * p.a)
}

fn u_2k_2a_minus1(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::U, 2 * p.k, 2 * p.a - 1)
}

fn u_2k1_2a(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::U, 2 * p.k + 1, 2 * p.a)
}

fn u_2k1_2a1(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::U, 2 * p.k + 1, 2 * p.a + 1)
}

fn ubar_2k_2a(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::Ubar, 2 * p.k, 2 * p.a)
}

fn ubar_2k1_2a(p: Params, c: &Ctx) -> Result<Series> {
    q_fam(c, Family::Ubar, 2 * p.k + 1, 2 * p.a)
}

fn u_even_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[neg_q()], 2 * p.a, 4 * p.k);
    Ok(Series::Q(product(c, spec)?))
}

fn u_even_odd_product(p: Params, c: &Ctx) -> Result<Series> {
    let pre = [neg_q2_q()];
    two_term(
        c,
        triple_over_q2(&pre, 2 * p.a, 4 * p.k),
        triple_over_q2(&pre, 2 * p.a - 2, 4 * p.k),
    )
}

fn u_odd_even_product(p: Params, c: &Ctx) -> Result<Series> {
    let pre = [neg_q2_q()];
    two_term(
        c,
        triple_over_q2(&pre, 2 * p.a + 1, 4 * p.k + 2),
        triple_over_q2(&pre, 2 * p.a - 1, 4 * p.k + 2),
    )
}

fn ubar_even_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[neg_q2_q2(), neg_q2_q2()], 2 * p.a, 4 * p.k);
    Ok(Series::Q(product(c, spec)?))
}

fn u_odd_odd_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[neg_q()], 2 * p.a + 1, 4 * p.k + 2);
    Ok(Series::Q(product(c, spec)?))
}

fn ubar_odd_even_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[neg_q2_q2(), neg_q2_q2()], 2 * p.a, 4 * p.k + 2);
    Ok(Series::Q(product(c, spec)?))
}

/// `prefactor * sum_n Bbar_{k,a}(n) q^{2n}`.
fn bbar_at_q2(p: Params, c: &Ctx, prefactor: Factor) -> Result<Series> {
    let spec = FamilySpec::of(Family::Bbar, p.k, p.a)?;
    let half = c.family_at(spec, c.order / 2)?.at_x_one();
    let mut s = half.substitute_q_power(2, c.order)?;
    ProductSpec::new().times(prefactor).apply_q(&mut s)?;
    Ok(Series::Q(s))
}

fn ub_side(p: Params, c: &Ctx) -> Result<Series> {
    bbar_at_q2(p, c, Factor::poch_neg(1, 2))
}

fn ub2_side(p: Params, c: &Ctx) -> Result<Series> {
    bbar_at_q2(p, c, neg_q2_q2())
}

// Kernel relations (doubled indices).

/// Only the coefficients with `m = 0` or `n = 0` of `DQ_{K,I}`.
fn kernel_boundary(p: Params, c: &Ctx) -> Result<Series> {
    let dq = c.kernel(p.k, p.a)?;
    let polys = (0..=c.order)
        .map(|n| {
            let poly = dq.poly(n)?;
            Ok(if n == 0 {
                poly.to_vec()
            } else {
                poly.iter().take(1).cloned().collect()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    xq(SeriesXQ::from_polys(polys)?)
}

fn kernel_initial(p: Params, c: &Ctx) -> Result<Series> {
    xq(if p.a == 0 {
        SeriesXQ::zero(c.order)
    } else {
        SeriesXQ::one(c.order)
    })
}

fn reflect_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(reflect_minus(p.k, c.order)?.0)
}

fn reflect_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(reflect_minus(p.k, c.order)?.1)
}

fn shift_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(shift_relation_sides(DoubledIndex::new(p.k, p.a)?, c.order)?.0)
}

fn shift_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(shift_relation_sides(DoubledIndex::new(p.k, p.a)?, c.order)?.1)
}

fn recurrence_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(double_recurrence_sides(p.k, p.a, c.order)?.0)
}

fn recurrence_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(double_recurrence_sides(p.k, p.a, c.order)?.1)
}

fn kernel_even(p: Params, c: &Ctx) -> Result<Series> {
    xq((*c.kernel(2 * p.k, 2 * p.a)?).clone())
}

fn bbar_doubled(p: Params, c: &Ctx) -> Result<Series> {
    let spec = FamilySpec::of(Family::Bbar, p.k, p.a)?;
    let half = c.family_at(spec, c.order / 2)?;
    xq(half.scale_substitute(Substitution::doubled(), c.order)?)
}

// Two-variable relations.

fn ux(c: &Ctx, k: u32, a: u32) -> Result<SeriesXQ> {
    xq_fam(c, Family::U, k, a)
}

fn ubx(c: &Ctx, k: u32, a: u32) -> Result<SeriesXQ> {
    xq_fam(c, Family::Ubar, k, a)
}

fn eq_uq_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ux(c, 2 * p.k, 2 * p.a)?)
}

fn eq_uq_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(kernel_times(c, 2 * p.k, 2 * p.a, neg_x(1))?)
}

/// `(xq)^pw sum_{h=lo}^{hi} (xq^2)^{2h} U_{2k,2k-2h}(xq^2; q)`, empty when
/// `hi < lo`.
fn block(c: &Ctx, k: u32, lo: i64, hi: i64, pw: i64) -> Result<SeriesXQ> {
    let mut out = SeriesXQ::zero(c.order);
    for h in lo..=hi {
        let h = h as u32;
        let inner = shifted(&ux(c, 2 * k, 2 * k - 2 * h)?, 2, c)?;
        let pw = pw as usize;
        out.add_monomial_multiple(&inner, 1, pw + 2 * u(h), pw + 4 * u(h))?;
    }
    Ok(out)
}

/// The four blocks attached to `(xq)^{2i}` and `(xq)^{2i-2}`.
fn block_group(c: &Ctx, k: u32, i: u32) -> Result<SeriesXQ> {
    let (k64, i64_) = (i64::from(k), i64::from(i));
    let hi = 2 * i64_;
    let lo = 2 * i64_ - 2;
    let parts = [
        block(c, k, 1, k64 - i64_, hi)?,
        block(c, k, 0, k64 - i64_ - 1, hi)?,
        block(c, k, 1, k64 - i64_ + 1, lo)?,
        block(c, k, 0, k64 - i64_, lo)?,
    ];
    let mut out = SeriesXQ::zero(c.order);
    for s in &parts {
        out.add_monomial_multiple(s, 1, 0, 0)?;
    }
    Ok(out)
}

fn one_plus_xq(mut s: SeriesXQ) -> SeriesXQ {
    s.mul_binomial(1, 1, 1);
    s
}

fn dif_u22_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ux(c, 2 * p.k, 2 * p.a)?.sub(&ux(c, 2 * p.k, 2 * p.a - 2)?)?)
}

fn dif_u22_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(one_plus_xq(block_group(c, p.k, p.a)?))
}

fn u22g_rhs(p: Params, c: &Ctx) -> Result<Series> {
    let mut sum = SeriesXQ::zero(c.order);
    for i in 1..=p.a {
        sum.add_monomial_multiple(&block_group(c, p.k, i)?, 1, 0, 0)?;
    }
    xq(one_plus_xq(sum))
}

fn uu12_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ux(c, 2 * p.k, 2 * p.a - 1)?)
}

fn uu12_rhs(p: Params, c: &Ctx) -> Result<Series> {
    let (k, a) = (2 * p.k, 2 * p.a);
    xq(ux(c, k, a)?.sub(&*c.refined(k, a, a)?)?)
}

fn refined_top_even(p: Params, c: &Ctx) -> Result<Series> {
    let a = 2 * p.a;
    xq((*c.refined(2 * p.k, a, a)?).clone())
}

/// `xq (-xq^3; q^2)_inf [DQ_{K,I} - DQ_{K,I-2}]`.
fn refined_kernel(c: &Ctx, k: u32, i: u32) -> Result<SeriesXQ> {
    let mut diff = c.kernel(k, i)?.sub(&*c.kernel(k, i - 2)?)?;
    ProductSpec::new().times(neg_x(3)).apply_xq(&mut diff)?;
    Ok(diff.mul_monomial(1, 1))
}

fn u22a_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(refined_kernel(c, 2 * p.k, 2 * p.a)?)
}

fn uu21_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ux(c, 2 * p.k + 1, 2 * p.a)?)
}

fn uu21_rhs(p: Params, c: &Ctx) -> Result<Series> {
    let (k, a) = (2 * p.k + 1, 2 * p.a + 1);
    xq(ux(c, k, a)?.sub(&*c.refined(k, a, a)?)?)
}

fn refined_top_odd(p: Params, c: &Ctx) -> Result<Series> {
    let a = 2 * p.a + 1;
    xq((*c.refined(2 * p.k + 1, a, a)?).clone())
}

fn u2a_odd_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(refined_kernel(c, 2 * p.k + 1, 2 * p.a + 1)?)
}

/// `(xq)^{2a} F_{K,K'-2a}(xq) + (xq)^{2a-2} F_{K,K'-2a+2}(xq)` for the
/// family `F` on the other side of the parity swap.
fn swapped_pair(c: &Ctx, f: Family, kk: u32, top: u32, a: u32) -> Result<SeriesXQ> {
    let first = shifted(&xq_fam(c, f, kk, top - 2 * a)?, 1, c)?;
    let second = shifted(&xq_fam(c, f, kk, top - 2 * a + 2)?, 1, c)?;
    let (p1, p2) = (u(2 * a), u(2 * a - 2));
    sum_terms(c, &[(&first, p1, p1), (&second, p2, p2)])
}

fn dif_ubar22_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ubx(c, 2 * p.k, 2 * p.a)?.sub(&ubx(c, 2 * p.k, 2 * p.a - 2)?)?)
}

fn dif_ubar22_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(swapped_pair(c, Family::U, 2 * p.k, 2 * p.k, p.a)?)
}

fn ubar_uq_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ubx(c, 2 * p.k, 2 * p.a)?)
}

fn ubar_uq_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(kernel_times(c, 2 * p.k, 2 * p.a, neg_x(2))?)
}

fn dif_u11_lhs(p: Params, c: &Ctx) -> Result<Series> {
    let kk = 2 * p.k + 1;
    xq(ux(c, kk, 2 * p.a + 1)?.sub(&ux(c, kk, 2 * p.a - 1)?)?)
}

fn dif_u11_rhs(p: Params, c: &Ctx) -> Result<Series> {
    let (k, a, kk) = (p.k, p.a, 2 * p.k + 1);
    let first = shifted(&ubx(c, kk, 2 * k - 2 * a)?, 1, c)?;
    let second = shifted(&ubx(c, kk, 2 * k - 2 * a + 2)?, 1, c)?;
    let (p1, p2) = (u(2 * a + 1), u(2 * a - 1));
    xq(one_plus_xq(sum_terms(c, &[(&first, p1, p1), (&second, p2, p2)])?))
}

fn dif_u1_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ux(c, 2 * p.k + 1, 1)?)
}

fn dif_u1_rhs(p: Params, c: &Ctx) -> Result<Series> {
    let kk = 2 * p.k + 1;
    let first = shifted(&ubx(c, kk, 2 * p.k)?, 1, c)?;
    let second = shifted(&ubx(c, kk, 2 * p.k + 2)?, 1, c)?;
    xq(sum_terms(c, &[(&first, 2, 2), (&second, 0, 0)])?)
}

fn dif_ubar_odd_lhs(p: Params, c: &Ctx) -> Result<Series> {
    let kk = 2 * p.k + 1;
    xq(ubx(c, kk, 2 * p.a)?.sub(&ubx(c, kk, 2 * p.a - 2)?)?)
}

fn dif_ubar_odd_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(swapped_pair(c, Family::U, 2 * p.k + 1, 2 * p.k + 1, p.a)?)
}

fn ubar_odd_base_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ubx(c, 2 * p.k + 1, 2)?)
}

fn ubar_odd_base_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(swapped_pair(c, Family::U, 2 * p.k + 1, 2 * p.k + 1, 1)?)
}

fn u_odd_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ux(c, 2 * p.k + 1, 2 * p.a + 1)?)
}

fn u_odd_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(kernel_times(c, 2 * p.k + 1, 2 * p.a + 1, neg_x(1))?)
}

fn ubar_odd_lhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(ubx(c, 2 * p.k + 1, 2 * p.a)?)
}

fn ubar_odd_rhs(p: Params, c: &Ctx) -> Result<Series> {
    xq(kernel_times(c, 2 * p.k + 1, 2 * p.a, neg_x(2))?)
}

// ---------------------------------------------------------------------------

const KA: &[&str] = &["k", "a"];
const KI: &[&str] = &["k", "i"];
const K_ONLY: &[&str] = &["k"];
const DOUBLED: &[&str] = &["K", "I"];
const DOUBLED_K: &[&str] = &["K"];

#[allow(clippy::too_many_arguments)]
const fn case(
    id: &'static str,
    statement: &'static str,
    variables: Variables,
    param_names: &'static [&'static str],
    hypothesis: &'static str,
    domain: fn(Params) -> bool,
    lhs: Builder,
    rhs: Builder,
) -> IdentityCase {
    IdentityCase {
        id,
        statement,
        variables,
        param_names,
        k_scale: 1,
        hypothesis,
        domain,
        lhs,
        rhs,
    }
}

const fn doubled(mut c: IdentityCase) -> IdentityCase {
    c.k_scale = 2;
    c
}

use Variables::{QOnly, XAndQ};

/// Every registered identity, in reading order.
pub fn registry() -> Vec<IdentityCase> {
    vec![
        case("thm-1.1", "A_{k,a}(n) = B_{k,a}(n)", QOnly, KA, "k >= a >= 1", dom_ka, a_side, b_side),
        case(
            "eq-1.1",
            "Andrews-Gordon multisum = (q^a,q^{2k+1-a},q^{2k+1};q^{2k+1})_inf / (q)_inf",
            QOnly, KA, "k >= a >= 1", dom_ka, ag_multisum, ag_product,
        ),
        case(
            "thm-1.3", "W_{k,a}(n) = G_{k,a}(n)", QOnly, KA,
            "k >= a >= 1 and k ≡ a (mod 2)", |p| dom_ka(p) && p.k % 2 == p.a % 2, w_side, g_side,
        ),
        case(
            "thm-1.4", "sum W_{k,a}(n) q^n = (-q;q^2)_inf (q^a,q^{2k+2-a},q^{2k+2};q^{2k+2})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 1 and k ≡ a (mod 2)", |p| dom_ka(p) && p.k % 2 == p.a % 2,
            w_side, wg_product,
        ),
        case(
            "thm-1.4-multisum", "sum W_{k,a}(n) q^n = multisum with 2N_a+2N_{a+2}+...+2N_{k-2}",
            QOnly, KA, "k >= a >= 1 and k ≡ a (mod 2)", |p| dom_ka(p) && p.k % 2 == p.a % 2,
            w_side, w_even_multisum,
        ),
        case(
            "thm-1.5", "sum Wbar_{k,a}(n) q^n = (q^a,q^{2k+2-a},q^{2k+2};q^{2k+2})_inf / ((-q;q^2)_inf (q;q)_inf)",
            QOnly, KA, "k >= a >= 1 with k odd and a even", |p| dom_ka(p) && p.k % 2 == 1 && p.a % 2 == 0,
            wbar_side, wbar_product,
        ),
        case(
            "thm-1.6", "odd-parity multisum = (-q^2;q^2)_inf (q^a,q^{2k+2-a},q^{2k+2};q^{2k+2})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 1 with k odd and a even", |p| dom_ka(p) && p.k % 2 == 1 && p.a % 2 == 0,
            wbar_odd_multisum, wbar_even_form,
        ),
        case(
            "thm-1.6-product", "(-q^2;q^2)_inf (q^a,..;q^{2k+2})_inf / (q^2;q^2)_inf = (q^a,..;q^{2k+2})_inf / ((-q;q^2)_inf (q;q)_inf)",
            QOnly, KA, "k >= a >= 1 with k odd and a even", |p| dom_ka(p) && p.k % 2 == 1 && p.a % 2 == 0,
            wbar_even_form, wbar_product,
        ),
        case(
            "thm-1.7", "sum W_{k,a}(n) q^n = two-term (-q^3;q^2)_inf product, modulus 2k+2",
            QOnly, KA, "k >= a >= 1 and k ≢ a (mod 2)", |p| dom_ka(p) && p.k % 2 != p.a % 2,
            w_side, w_mixed_product,
        ),
        case(
            "thm-1.8", "sum Wbar_{k,a}(n) q^n = (-q^2;q^2)_inf (q^{a+1},q^{2k+1-a},q^{2k+2};q^{2k+2})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 1 with k even and a odd", |p| dom_ka(p) && p.k % 2 == 0 && p.a % 2 == 1,
            wbar_side, wbar_mixed_product,
        ),
        case(
            "thm-1.9", "Wbar_{k,a}(n) = Wbar_{k,a-1}(n)", QOnly, KA,
            "k >= a >= 1 with a even", |p| dom_ka(p) && p.a % 2 == 0, wbar_side, wbar_prev,
        ),
        case(
            "thm-1.10", "Abar_{k,i}(n) = Bbar_{k,i}(n)", QOnly, KI,
            "k >= 2 and k >= i >= 1", |p| p.k >= 2 && dom_ka(p), abar_side, bbar_side,
        ),
        case(
            "thm-1.11", "sum U_{k,a}(n) q^n = (-q;q)_inf (q^a,q^{2k-a},q^{2k};q^{2k})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 1 and k ≡ a (mod 2)", |p| dom_ka(p) && p.k % 2 == p.a % 2,
            u_side, u_same_parity_product,
        ),
        case(
            "thm-1.12", "sum U_{k,a}(n) q^n = two-term (-q^2;q)_inf product, modulus 2k",
            QOnly, KA, "k >= a >= 1 and k ≢ a (mod 2)", |p| dom_ka(p) && p.k % 2 != p.a % 2,
            u_side, u_mixed_parity_product,
        ),
        case(
            "thm-1.13", "sum Ubar_{k,a}(n) q^n = (-q^2;q^2)_inf^2 (q^a,q^{2k-a},q^{2k};q^{2k})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 2 with a even", |p| dom_ka(p) && p.a % 2 == 0,
            ubar_side, ubar_product,
        ),
        case(
            "thm-1.13-odd", "sum Ubar_{k,a-1}(n) q^n = (-q^2;q^2)_inf^2 (q^a,q^{2k-a},q^{2k};q^{2k})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 2 with a even", |p| dom_ka(p) && p.a % 2 == 0,
            ubar_prev, ubar_product,
        ),
        doubled(case(
            "lemma-2.1", "DQ_{K,I}(0,0) = [I >= 1], DQ_{K,I}(m,0) = DQ_{K,I}(0,n) = 0",
            XAndQ, DOUBLED, "K >= I >= 0", dom_ka0, kernel_boundary, kernel_initial,
        )),
        doubled(case(
            "lemma-2.2", "(xq) DQ_{K,-1}(x;q) = -DQ_{K,1}(x;q)",
            XAndQ, DOUBLED_K, "K >= 1", |p| p.k >= 1 && p.a == 0, reflect_lhs, reflect_rhs,
        )),
        doubled(case(
            "lemma-2.3", "DQ_{K,I} - DQ_{K,I-2} = (xq)^I DQ_{K,K-I}(xq) + (xq)^{I-2} DQ_{K,K-I+2}(xq)",
            XAndQ, DOUBLED, "K >= I >= 2", |p| p.k >= p.a && p.a >= 2, shift_lhs, shift_rhs,
        )),
        case(
            "thm-2.4", "Qbar_{k,a} through Qbar_{k,k-h}(xq^2;q), at (x^2;q^2)",
            XAndQ, KA, "k >= a >= 1", dom_ka, recurrence_lhs, recurrence_rhs,
        ),
        case(
            "eq-2.3", "Qbar_{k,i}(x^2;q^2) = sum Bbar_{k,i}(m,n) x^{2m} q^{2n}",
            XAndQ, KI, "k >= 2 and k >= i >= 1", |p| p.k >= 2 && dom_ka(p), kernel_even, bbar_doubled,
        ),
        case(
            "thm-3.1", "U_{2k,2a}(x;q) = (-xq;q^2)_inf Qbar_{k,a}(x^2;q^2)",
            XAndQ, KA, "k >= a >= 1", dom_ka, eq_uq_lhs, eq_uq_rhs,
        ),
        case(
            "thm-3.2", "U_{2k,2a} - U_{2k,2a-2} = (1+xq)[...] in U_{2k,2k-2h}(xq^2;q)",
            XAndQ, KA, "k >= a >= 1", dom_ka, dif_u22_lhs, dif_u22_rhs,
        ),
        case(
            "thm-3.3", "U_{2k,2a}(x;q) = (1+xq) sum_i [...] in U_{2k,2k-2h}(xq^2;q)",
            XAndQ, KA, "k >= a >= 1", dom_ka, eq_uq_lhs, u22g_rhs,
        ),
        case(
            "thm-3.4", "sum U_{2k,2a}(n) q^n = (-q;q)_inf (q^{2a},q^{4k-2a},q^{4k};q^{4k})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 1", dom_ka, u_2k_2a, u_even_product,
        ),
        case(
            "thm-4.1-uu12", "U_{2k,2a-1}(x;q) = U_{2k,2a}(x;q) - U^{2a}_{2k,2a}(x;q)",
            XAndQ, KA, "k >= a >= 1", dom_ka, uu12_lhs, uu12_rhs,
        ),
        case(
            "thm-4.1-u22a", "U^{2a}_{2k,2a}(x;q) = xq(-xq^3;q^2)_inf [Qbar_{k,a} - Qbar_{k,a-1}](x^2;q^2)",
            XAndQ, KA, "k >= a >= 1", dom_ka, refined_top_even, u22a_rhs,
        ),
        case(
            "thm-4.2", "sum U_{2k,2a-1}(n) q^n = two-term (-q^2;q)_inf product, modulus 4k",
            QOnly, KA, "k >= a >= 1", dom_ka, u_2k_2a_minus1, u_even_odd_product,
        ),
        case(
            "thm-4.3-uu21", "U_{2k+1,2a}(x;q) = U_{2k+1,2a+1}(x;q) - U^{2a+1}_{2k+1,2a+1}(x;q)",
            XAndQ, KA, "k >= a >= 1", dom_ka, uu21_lhs, uu21_rhs,
        ),
        case(
            "thm-4.3-u2a", "U^{2a+1}_{2k+1,2a+1}(x;q) = xq(-xq^3;q^2)_inf [Qbar_{k+1/2,a+1/2} - Qbar_{k+1/2,a-1/2}](x^2;q^2)",
            XAndQ, KA, "k >= a >= 1", dom_ka, refined_top_odd, u2a_odd_rhs,
        ),
        case(
            "thm-4.4", "sum U_{2k+1,2a}(n) q^n = two-term (-q^2;q)_inf product, modulus 4k+2",
            QOnly, KA, "k >= a >= 1", dom_ka, u_2k1_2a, u_odd_even_product,
        ),
        case(
            "thm-5.1", "Ubar_{k,a}(n) = Ubar_{k,a-1}(n)", QOnly, KA,
            "k >= a >= 2 with a even", |p| dom_ka(p) && p.a % 2 == 0, ubar_side, ubar_prev,
        ),
        case(
            "thm-5.2", "Ubar_{2k,2a} - Ubar_{2k,2a-2} = (xq)^{2a} U_{2k,2k-2a}(xq) + (xq)^{2a-2} U_{2k,2k-2a+2}(xq)",
            XAndQ, KA, "k >= a >= 1", dom_ka, dif_ubar22_lhs, dif_ubar22_rhs,
        ),
        case(
            "thm-5.3", "Ubar_{2k,2a}(x;q) = (-xq^2;q^2)_inf Qbar_{k,a}(x^2;q^2)",
            XAndQ, KA, "k >= a >= 1", dom_ka, ubar_uq_lhs, ubar_uq_rhs,
        ),
        case(
            "thm-5.4", "sum Ubar_{2k,2a}(n) q^n = (-q^2;q^2)_inf^2 (q^{2a},q^{4k-2a},q^{4k};q^{4k})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 1", dom_ka, ubar_2k_2a, ubar_even_product,
        ),
        case(
            "thm-6.1-difu11", "U_{2k+1,2a+1} - U_{2k+1,2a-1} = (1+xq)[(xq)^{2a+1} Ubar_{2k+1,2k-2a}(xq) + (xq)^{2a-1} Ubar_{2k+1,2k-2a+2}(xq)]",
            XAndQ, KA, "k >= a >= 1", dom_ka, dif_u11_lhs, dif_u11_rhs,
        ),
        case(
            "thm-6.1-difu1", "U_{2k+1,1}(x;q) = x^2q^2 Ubar_{2k+1,2k}(xq) + Ubar_{2k+1,2k+2}(xq)",
            XAndQ, K_ONLY, "k >= 1", |p| p.k >= 1 && p.a == 0, dif_u1_lhs, dif_u1_rhs,
        ),
        case(
            "thm-6.2", "Ubar_{2k+1,2a} - Ubar_{2k+1,2a-2} = (xq)^{2a} U_{2k+1,2k-2a+1}(xq) + (xq)^{2a-2} U_{2k+1,2k-2a+3}(xq)",
            XAndQ, KA, "k >= a >= 1", dom_ka, dif_ubar_odd_lhs, dif_ubar_odd_rhs,
        ),
        case(
            "thm-6.2-base", "Ubar_{2k+1,2}(x;q) = (xq)^2 U_{2k+1,2k-1}(xq) + U_{2k+1,2k+1}(xq)",
            XAndQ, K_ONLY, "k >= 1", |p| p.k >= 1 && p.a == 0, ubar_odd_base_lhs, ubar_odd_base_rhs,
        ),
        case(
            "thm-6.3-u", "U_{2k+1,2a+1}(x;q) = (-xq;q^2)_inf Qbar_{k+1/2,a+1/2}(x^2;q^2)",
            XAndQ, KA, "k >= a >= 0", |p| p.k >= 1 && dom_ka0(p), u_odd_lhs, u_odd_rhs,
        ),
        case(
            "thm-6.3-ubar", "Ubar_{2k+1,2a}(x;q) = (-xq^2;q^2)_inf Qbar_{k+1/2,a}(x^2;q^2)",
            XAndQ, KA, "k >= a >= 1", dom_ka, ubar_odd_lhs, ubar_odd_rhs,
        ),
        case(
            "thm-6.4-u", "sum U_{2k+1,2a+1}(n) q^n = (-q;q)_inf (q^{2a+1},q^{4k+1-2a},q^{4k+2};q^{4k+2})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 0", |p| p.k >= 1 && dom_ka0(p), u_2k1_2a1, u_odd_odd_product,
        ),
        case(
            "thm-6.4-ubar", "sum Ubar_{2k+1,2a}(n) q^n = (-q^2;q^2)_inf^2 (q^{2a},q^{4k-2a+2},q^{4k+2};q^{4k+2})_inf / (q^2;q^2)_inf",
            QOnly, KA, "k >= a >= 1", dom_ka, ubar_2k1_2a, ubar_odd_even_product,
        ),
        case(
            "thm-7.1-ub", "sum U_{2k,2a}(n) q^n = (-q;q^2)_inf sum Bbar_{k,a}(n) q^{2n}",
            QOnly, KA, "k >= a >= 1", dom_ka, u_2k_2a, ub_side,
        ),
        case(
            "thm-7.1-ub2", "sum Ubar_{2k,2a}(n) q^n = (-q^2;q^2)_inf sum Bbar_{k,a}(n) q^{2n}",
            QOnly, KA, "k >= a >= 1", dom_ka, ubar_2k_2a, ub2_side,
        ),
    ]
}

fn perturbed_u_even_product(p: Params, c: &Ctx) -> Result<Series> {
    let spec = triple_over_q2(&[neg_q()], 2 * p.a + 1, 4 * p.k);
    Ok(Series::Q(product(c, spec)?))
}

/// `thm-3.4` with the first product exponent moved from `2a` to `2a+1`.
/// Not part of the registry: it exists to show the checker can fail.
pub fn negative_control() -> IdentityCase {
    case(
        "control-thm-3.4-perturbed",
        "sum U_{2k,2a}(n) q^n vs (-q;q)_inf (q^{2a+1},q^{4k-2a-1},q^{4k};q^{4k})_inf / (q^2;q^2)_inf",
        QOnly, KA, "k >= a >= 1", dom_ka, u_2k_2a, perturbed_u_even_product,
    )
}

impl From<Error> for VerificationReport {
    fn from(e: Error) -> Self {
        VerificationReport {
            id: String::new(),
            params: Params::default(),
            label: String::new(),
            order: 0,
            x_bound: None,
            verdict: Verdict::Error,
            witness: None,
            error: Some(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_are_unique_and_registry_is_large() {
        let reg = registry();
        let ids: HashSet<_> = reg.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), reg.len());
        assert!(reg.len() >= 24);
        assert!(reg.iter().any(|c| c.variables == Variables::QOnly));
        assert!(reg.iter().any(|c| c.variables == Variables::XAndQ));
    }

    #[test]
    fn selectors() {
        let reg = registry();
        let six: Vec<_> = reg.iter().filter(|c| c.matches("thm-6")).map(|c| c.id).collect();
        assert_eq!(six.len(), 8);
        assert!(six.iter().all(|id| id.starts_with("thm-6.")));
        assert!(!find("thm-1.10").unwrap().matches("thm-1.1"));
        assert!(find("thm-1.1").unwrap().matches("thm-1.1"));
        assert!(reg.iter().all(|c| !c.matches("nothing")));
    }

    #[test]
    fn domain_gate_names_the_hypothesis() {
        let case = find("thm-1.11").unwrap();
        let err = verify(&case, Params::new(2, 1), &Ctx::new(10)).unwrap_err();
        assert!(err.to_string().contains("k ≡ a (mod 2)"), "{err}");
        let err = verify(&find("lemma-2.2").unwrap(), Params::new(3, 1), &Ctx::new(5)).unwrap_err();
        assert!(err.to_string().contains("takes only K"), "{err}");
    }

    #[test]
    fn order_zero_passes() {
        let ctx = Ctx::new(0);
        for case in registry() {
            let p = case.grid(3)[0];
            let r = verify(&case, p, &ctx).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn small_even_cases_pass() {
        let ctx = Ctx::new(14);
        for id in ["thm-1.11", "thm-3.4", "thm-3.1", "thm-5.2", "thm-7.1-ub"] {
            let case = find(id).unwrap();
            for p in case.grid(2).into_iter().filter(|p| p.k % 2 == 0) {
                let r = verify(&case, p, &ctx).unwrap();
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn negative_control_fails_with_witness() {
        let r = verify(&negative_control(), Params::new(2, 2), &Ctx::new(12)).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.witness.unwrap();
        assert!(w.n <= 6, "{w:?}");
    }

    #[test]
    fn odd_modulus_mixed_wbar_form_fails() {
        let ctx = Ctx::new(12);
        let w = wbar_side(Params::new(2, 1), &ctx).unwrap();
        let odd = wbar_mixed_product_odd_modulus(2, 1, 12).unwrap();
        assert_ne!(w, Series::Q(odd));
        let fixed = wbar_mixed_product(Params::new(2, 1), &ctx).unwrap();
        assert_eq!(w, fixed);
    }

    #[test]
    fn grid_is_deterministic() {
        let reg = registry();
        let ctx = Ctx::new(8);
        let sel = vec!["thm-1.1".to_string(), "lemma-2".to_string()];
        let a = verify_grid(&reg, &sel, 2, &ctx);
        let b = verify_grid(&reg, &sel, 2, &ctx);
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.id == "thm-1.1" || r.id.starts_with("lemma-2.")));
        assert!(verify_grid(&reg, &["none".to_string()], 2, &ctx).is_empty());
    }
}
