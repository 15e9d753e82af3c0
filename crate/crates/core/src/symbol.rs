//! Exact decision of Schwartz global hypoellipticity (SGH) for constant-coefficient
//! operators, with certificates: a zero of the symbol on `Z x R` (operator is not
//! SGH) or a lower bound on `|symbol|` (operator is SGH).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::operator::DifferentialOperator;
use crate::poly::{sign, CPoly, QPoly, RootInterval};
use crate::scalar::{rat, rat_to_f64, rationalize, sqrt_lower, ComplexRational, Rational};

/// Width to which witness intervals are refined.
fn witness_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 48)
}

/// Scan values below this are treated as zeros of the symbol.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// The form whose real zeros on `Z x R` decide SGH; the Fourier symbol is `i` times it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// `c1 k + c2 xi - i c3`
    FirstOrder { c1: ComplexRational, c2: ComplexRational, c3: ComplexRational },
    /// `p(xi) + q(k)`
    Separable { p: CPoly, q: CPoly },
}

pub fn symbol_of(op: &DifferentialOperator) -> Result<Symbol> {
    match op {
        DifferentialOperator::FirstOrderConstant { c1, c2, c3 } => {
            Ok(Symbol::FirstOrder { c1: c1.clone(), c2: c2.clone(), c3: c3.clone() })
        }
        DifferentialOperator::SeparablePoly { p, q, .. } => {
            Ok(Symbol::Separable { p: p.clone(), q: q.clone() })
        }
        DifferentialOperator::FirstOrderVariable { .. } => Err(Error::Precondition(
            "variable-coefficient operator has no constant symbol; conjugate to normal form first".into(),
        )),
    }
}

impl Symbol {
    /// `(p, q)` with the form equal to `p(xi) + q(k)`.
    pub fn as_separable(&self) -> (CPoly, CPoly) {
        match self {
            Symbol::Separable { p, q } => (p.clone(), q.clone()),
            Symbol::FirstOrder { c1, c2, c3 } => (
                CPoly::new(&[-c3.mul_i(), c2.clone()]),
                CPoly::new(&[ComplexRational::zero(), c1.clone()]),
            ),
        }
    }

    /// The form at fixed integer `k` as a polynomial in `xi`.
    pub fn form_at_k(&self, k: &BigInt) -> CPoly {
        let (p, q) = self.as_separable();
        let qk = q.eval(&ComplexRational::real(Rational::from_integer(k.clone())));
        p.add_constant(&qk)
    }

    pub fn eval_exact(&self, k: &BigInt, xi: &Rational) -> ComplexRational {
        self.form_at_k(k).eval(&ComplexRational::real(xi.clone()))
    }

    /// Fast numeric evaluator of the form.
    pub fn evaluator(&self) -> impl Fn(i64, f64) -> Complex64 + Send + Sync {
        let (p, q) = self.as_separable();
        let (p, q) = (p.to_c64_coeffs(), q.to_c64_coeffs());
        move |k, xi| horner(&p, xi) + horner(&q, k as f64)
    }

    /// Canonical text used to bind witnesses to the symbol they came from.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

fn horner(cs: &[Complex64], x: f64) -> Complex64 {
    cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.as_separable();
        let show = |poly: &CPoly, var: &str| {
            let terms: Vec<String> = poly
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| match i {
                    0 => c.to_string(),
                    1 => format!("{c}*{var}"),
                    _ => format!("{c}*{var}^{i}"),
                })
                .collect();
            if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
        };
        write!(f, "[{}] + [{}]", show(&p, "xi"), show(&q, "k"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "SGH")]
    Sgh,
    #[serde(rename = "NotSGH")]
    NotSgh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FirstOrderClosedForm,
    SeparablePolyDecision,
    ConjugatedToConstant,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::FirstOrderClosedForm => "first-order-closed-form",
            Method::SeparablePolyDecision => "separable-poly-decision",
            Method::ConjugatedToConstant => "conjugated-to-constant",
        }
    }
}

/// A zero of the form: `k` exact, `xi` in the closed interval `[xi_lo, xi_hi]`
/// (a single rational when the two agree).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub k: i64,
    pub xi_lo: Rational,
    pub xi_hi: Rational,
    /// Canonical text of the symbol this zero belongs to.
    pub symbol: String,
}

impl Witness {
    pub fn xi_approx(&self) -> f64 {
        rat_to_f64(&((&self.xi_lo + &self.xi_hi) / Rational::from_integer(2.into())))
    }

    pub fn is_exact(&self) -> bool {
        self.xi_lo == self.xi_hi
    }
}

fn rat_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 4)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("xi_lo", &rat_text(&self.xi_lo))?;
        st.serialize_field("xi_hi", &rat_text(&self.xi_hi))?;
        st.serialize_field("xi_approx", &self.xi_approx())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapKind {
    /// Equals the infimum of `|form|` over `Z x R`.
    Exact,
    /// Certified lower bound on the infimum.
    LowerBound,
    /// Numeric scan estimate; not a proof.
    Estimate,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gap {
    pub value: Rational,
    pub kind: GapKind,
}

impl Serialize for Gap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Gap", 4)?;
        st.serialize_field("num", &self.value.numer().to_string())?;
        st.serialize_field("den", &self.value.denom().to_string())?;
        st.serialize_field("approx", &rat_to_f64(&self.value))?;
        st.serialize_field("kind", &self.kind)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SghReport {
    pub verdict: Verdict,
    pub method: Method,
    pub witness: Option<Witness>,
    pub gap: Option<Gap>,
    pub normal_form: Option<DifferentialOperator>,
    pub notes: Vec<String>,
}

impl SghReport {
    fn not_sgh(method: Method, witness: Witness) -> Self {
        Self { verdict: Verdict::NotSgh, method, witness: Some(witness), gap: None, normal_form: None, notes: vec![] }
    }

    fn sgh(method: Method, gap: Gap) -> Self {
        Self { verdict: Verdict::Sgh, method, witness: None, gap: Some(gap), normal_form: None, notes: vec![] }
    }

    pub fn is_sgh(&self) -> bool {
        self.verdict == Verdict::Sgh
    }

    /// `NotSGH` iff a witness is present; `SGH` implies a positive gap.
    pub fn check_invariants(&self) -> Result<()> {
        let ok = match self.verdict {
            Verdict::NotSgh => self.witness.is_some(),
            Verdict::Sgh => self.witness.is_none() && self.gap.as_ref().is_some_and(|g| g.value.is_positive()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Inconsistency(format!("malformed report: {self:?}")))
        }
    }
}

fn to_i64(k: &BigInt) -> Result<i64> {
    k.to_i64().ok_or_else(|| Error::Inconsistency(format!("witness frequency {k} exceeds i64")))
}

/// `Im(z conj(w))`.
fn cross(z: &ComplexRational, w: &ComplexRational) -> Rational {
    &z.im * &w.re - &z.re * &w.im
}

/// Closed-form decision for `c1 Dt + c2 Dx + c3`.
///
/// Writing the form as `alpha k + beta xi + gamma` with `gamma = -i c3`: for
/// `beta != 0` the distance from `alpha k + gamma` to the real line through
/// `beta` is `|s k + r| / |beta|` with `s = Im(alpha conj beta)`,
/// `r = Im(gamma conj beta)`; for `beta = 0` the form is independent of `xi`
/// and the nearest lattice point of `alpha Z` to `-gamma` decides.
pub fn decide_sgh_first_order(
    c1: &ComplexRational,
    c2: &ComplexRational,
    c3: &ComplexRational,
) -> Result<SghReport> {
    if c1.is_zero() && c2.is_zero() {
        return Err(Error::InvalidOperator("c1 and c2 cannot both vanish".into()));
    }
    let sym = Symbol::FirstOrder { c1: c1.clone(), c2: c2.clone(), c3: c3.clone() };
    let (alpha, beta, gamma) = (c1, c2, -c3.mul_i());
    let method = Method::FirstOrderClosedForm;

    let witness = |k: BigInt, xi: Rational| -> Result<SghReport> {
        let w = Witness { k: to_i64(&k)?, xi_lo: xi.clone(), xi_hi: xi, symbol: sym.canonical() };
        Ok(SghReport::not_sgh(method, w))
    };
    let gap_from_sq = |d2: Rational| {
        let value = sqrt_lower(&d2, 48);
        let kind = if &value * &value == d2 { GapKind::Exact } else { GapKind::LowerBound };
        SghReport::sgh(method, Gap { value, kind })
    };

    if !beta.is_zero() {
        let b2 = beta.norm_sqr();
        let s = cross(alpha, beta);
        let r = cross(&gamma, beta);
        // xi solving alpha k + beta xi + gamma = 0 once the residual is real-collinear
        let xi_for = |k: &BigInt| {
            let z = &(alpha * &ComplexRational::real(Rational::from_integer(k.clone()))) + &gamma;
            let num = &z * &beta.conj();
            -(num.re / &b2)
        };
        if s.is_zero() {
            if r.is_zero() {
                let k = BigInt::zero();
                let xi = xi_for(&k);
                return witness(k, xi);
            }
            return Ok(gap_from_sq(&r * &r / &b2));
        }
        let kstar = -(&r / &s);
        if kstar.is_integer() {
            let k = kstar.to_integer();
            let xi = xi_for(&k);
            return witness(k, xi);
        }
        let (fl, ce) = (kstar.floor(), kstar.ceil());
        let d = [fl, ce].iter().map(|k| (&s * k + &r).abs()).min().unwrap();
        return Ok(gap_from_sq(&d * &d / &b2));
    }

    // beta = 0: minimize |alpha k + gamma| over k
    let a2 = alpha.norm_sqr();
    let kstar = -((&gamma * &alpha.conj()).re / &a2);
    let mut best: Option<(Rational, BigInt)> = None;
    for k in [kstar.floor(), kstar.ceil()] {
        let kz = ComplexRational::real(k.clone());
        let v = (&(alpha * &kz) + &gamma).norm_sqr();
        if best.as_ref().is_none_or(|(b, _)| &v < b) {
            best = Some((v, k.to_integer()));
        }
    }
    let (d2, k) = best.unwrap();
    if d2.is_zero() {
        return witness(k, Rational::zero());
    }
    Ok(gap_from_sq(d2))
}

/// Smallest `K >= 1` with `|q(k)| > bound` for every integer `|k| > K`.
fn k_bound(q: &QPoly, bound: &Rational) -> BigInt {
    let lead = q.leading().expect("non-constant polynomial").abs();
    let s = q.lower_abs_sum();
    let k = ((bound.abs() + s) / lead).ceil().to_integer();
    k.max(BigInt::one())
}

/// Integers ordered by magnitude: 0, 1, -1, 2, -2, ...
fn small_first(limit: &BigInt) -> impl Iterator<Item = BigInt> + '_ {
    let mut n = BigInt::zero();
    let mut neg = false;
    std::iter::from_fn(move || {
        if &n > limit {
            return None;
        }
        let out = if neg { -n.clone() } else { n.clone() };
        if neg || n.is_zero() {
            n += 1;
            neg = false;
        } else {
            neg = true;
        }
        Some(out)
    })
}

fn first_real_root(f: &QPoly) -> Option<RootInterval> {
    f.isolate_real_roots(&witness_width()).into_iter().next()
}

const MAX_SEARCH: u64 = 1_000_000;

/// Exact decision for `p(xi) + q(k)` with `p` or `q` real.
pub fn decide_sgh_separable(p: &CPoly, q: &CPoly) -> Result<SghReport> {
    for (name, poly) in [("p", p), ("q", q)] {
        if poly.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidOperator(format!("{name} must be a non-constant polynomial")));
        }
    }
    let sym = Symbol::Separable { p: p.clone(), q: q.clone() };
    let method = Method::SeparablePolyDecision;
    let found = if q.is_real() {
        find_zero_q_real(p, &q.re)?
    } else if p.is_real() {
        find_zero_p_real(&p.re, q)?
    } else {
        return Err(Error::InvalidOperator("neither p nor q has real coefficients".into()));
    };
    match found {
        Some((k, iv)) => Ok(SghReport::not_sgh(
            method,
            Witness { k: to_i64(&k)?, xi_lo: iv.lo, xi_hi: iv.hi, symbol: sym.canonical() },
        )),
        None => {
            let est = gap_estimate(&sym, Verdict::Sgh, &ScanBox::adaptive(&sym))?;
            let mut report = SghReport::sgh(method, est.to_gap()?);
            report.notes.push(est.describe());
            Ok(report)
        }
    }
}

// q real: zeros need Im p(xi) = 0 and Re p(xi) = -q(k).
fn find_zero_q_real(p: &CPoly, q: &QPoly) -> Result<Option<(BigInt, RootInterval)>> {
    let (pr, pi) = (&p.re, &p.im);
    if pi.is_zero() {
        return find_zero_both_real(pr, q);
    }
    let roots = pi.isolate_real_roots(&rat(1, 1 << 20));
    if roots.is_empty() {
        return Ok(None);
    }
    let ranges: Vec<(Rational, Rational)> = roots.iter().map(|iv| pr.eval_interval(&iv.lo, &iv.hi)).collect();
    let bound = ranges.iter().flat_map(|(a, b)| [a.abs(), b.abs()]).max().unwrap();
    let limit = k_bound(q, &bound);
    for k in small_first(&limit) {
        let qk = q.eval(&Rational::from_integer(k.clone()));
        for (iv, (lo, hi)) in roots.iter().zip(&ranges) {
            if (lo + &qk) > Rational::zero() || (hi + &qk) < Rational::zero() {
                continue;
            }
            let g = pi.gcd(&pr.add(&QPoly::constant(qk.clone())));
            if g.degree().unwrap_or(0) == 0 {
                continue;
            }
            for r in g.isolate_real_roots(&witness_width()) {
                let lo = (&r.lo).max(&iv.lo).clone();
                let hi = (&r.hi).min(&iv.hi).clone();
                if lo <= hi && g.count_roots_in(&lo, &hi) >= 1 {
                    let w = if r.lo >= iv.lo && r.hi <= iv.hi { r } else { RootInterval { lo, hi } };
                    return Ok(Some((k, w)));
                }
            }
        }
    }
    Ok(None)
}

// both real: zeros need p(xi) = -q(k) over the range of p.
fn find_zero_both_real(p: &QPoly, q: &QPoly) -> Result<Option<(BigInt, RootInterval)>> {
    let dp = p.degree().unwrap();
    let with_k = |k: &BigInt| p.add(&QPoly::constant(q.eval(&Rational::from_integer(k.clone()))));
    if dp % 2 == 1 {
        let k = BigInt::zero();
        let iv = first_real_root(&with_k(&k)).ok_or_else(|| Error::Inconsistency("odd degree without real root".into()))?;
        return Ok(Some((k, iv)));
    }
    let s = sign(p.leading().unwrap());
    let sq = sign(q.leading().unwrap());
    let q_even = q.degree().unwrap().is_multiple_of(2);
    if !q_even || sq != s {
        // s*q is unbounded below along the integers, so some k works
        for (i, k) in small_first(&BigInt::from(MAX_SEARCH)).enumerate() {
            if let Some(iv) = first_real_root(&with_k(&k)) {
                return Ok(Some((k, iv)));
            }
            if i as u64 > 2 * MAX_SEARCH {
                break;
            }
        }
        return Err(Error::Inconsistency("unbounded search for a zero did not terminate".into()));
    }
    // s*p >= m for the lower bound m taken over critical points
    let sp = p.scale(&Rational::from_integer(s.into()));
    let crit = sp.derivative().isolate_real_roots(&rat(1, 1 << 20));
    let m = crit
        .iter()
        .map(|iv| sp.eval_interval(&iv.lo, &iv.hi).0)
        .min()
        .ok_or_else(|| Error::Inconsistency("even-degree polynomial without critical point".into()))?;
    let limit = k_bound(q, &m);
    let sq_poly = q.scale(&Rational::from_integer(s.into()));
    for k in small_first(&limit) {
        // s f_k = s p + s q(k) >= m + s q(k) > 0 rules k out
        if &m + sq_poly.eval(&Rational::from_integer(k.clone())) > Rational::zero() {
            continue;
        }
        if let Some(iv) = first_real_root(&with_k(&k)) {
            return Ok(Some((k, iv)));
        }
    }
    Ok(None)
}

// p real, q not real: zeros need Im q(k) = 0 at an integer k.
fn find_zero_p_real(p: &QPoly, q: &CPoly) -> Result<Option<(BigInt, RootInterval)>> {
    let qi = &q.im;
    if qi.degree() == Some(0) {
        return Ok(None);
    }
    for k in qi.integer_roots() {
        let qk = q.re.eval(&Rational::from_integer(k.clone()));
        if let Some(iv) = first_real_root(&p.add(&QPoly::constant(qk))) {
            return Ok(Some((k, iv)));
        }
    }
    Ok(None)
}

/// `k in [-k_max, k_max]`, `xi` on `samples` uniform points of `[-xi_max, xi_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanBox {
    pub k_max: i64,
    pub xi_max: f64,
    pub samples: usize,
}

impl ScanBox {
    pub fn new(k_max: i64, xi_max: f64, samples: usize) -> Result<Self> {
        if k_max < 0 || xi_max.is_nan() || xi_max <= 0.0 || samples < 2 {
            return Err(Error::BadParameter(format!(
                "scan box needs k_max >= 0, xi_max > 0, samples >= 2; got ({k_max}, {xi_max}, {samples})"
            )));
        }
        Ok(Self { k_max, xi_max, samples })
    }

    /// A box large enough for the leading-term tail bounds to apply.
    pub fn adaptive(sym: &Symbol) -> Self {
        let (p, q) = sym.as_separable();
        let dom = |poly: &CPoly| {
            let cs = poly.to_c64_coeffs();
            let lead = cs.last().map(|c| c.norm()).unwrap_or(1.0);
            let rest: f64 = cs[..cs.len().saturating_sub(1)].iter().map(|c| c.norm()).sum();
            2.0 * (rest / lead.max(f64::MIN_POSITIVE)) + 2.0
        };
        let xi_max = dom(&p).clamp(20.0, 1e3);
        let mut k_max = dom(&q).max(20.0);
        if q.is_real() && !p.is_real() {
            // the |k| > K region needs |q(k)| to beat max |p| on the xi range
            let need = p.magnitude_upper_bound_within(xi_max) + 1.0;
            let cs = q.to_c64_coeffs();
            let lead = cs.last().unwrap().norm();
            let rest: f64 = cs[..cs.len() - 1].iter().map(|c| c.norm()).sum();
            k_max = k_max.max((need + rest) / lead);
        }
        let k_max = k_max.min(2000.0).ceil() as i64;
        let samples = ((xi_max * 1000.0) as usize | 1).clamp(20_001, 200_001);
        Self { k_max, xi_max, samples }
    }

    fn xi(&self, i: usize) -> f64 {
        -self.xi_max + 2.0 * self.xi_max * i as f64 / (self.samples - 1) as f64
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.xi_max / (self.samples - 1) as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanMin {
    pub min: f64,
    pub k: i64,
    pub xi: f64,
}

/// Floating-point minimum of `|form|` over a scan box. Independent of the
/// exact decision path; used as a cross-check oracle.
pub fn brute_force_min_symbol(sym: &Symbol, scan: &ScanBox) -> ScanMin {
    let f = sym.evaluator();
    (-scan.k_max..=scan.k_max)
        .into_par_iter()
        .map(|k| {
            let mut best = ScanMin { min: f64::INFINITY, k, xi: 0.0 };
            for i in 0..scan.samples {
                let xi = scan.xi(i);
                let v = f(k, xi).norm();
                if v < best.min {
                    best = ScanMin { min: v, k, xi };
                }
            }
            best
        })
        .reduce(
            || ScanMin { min: f64::INFINITY, k: 0, xi: 0.0 },
            |a, b| if b.min < a.min || (b.min == a.min && b.k.abs() < a.k.abs()) { b } else { a },
        )
}

/// Minimum of `|form|` at fixed `k` over `samples` points of `[center - radius, center + radius]`.
pub fn brute_force_min_near(sym: &Symbol, k: i64, center: f64, radius: f64, samples: usize) -> ScanMin {
    let f = sym.evaluator();
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let xi = center - radius + 2.0 * radius * i as f64 / (n - 1) as f64;
            ScanMin { min: f(k, xi).norm(), k, xi }
        })
        .chain(std::iter::once(ScanMin { min: f(k, center).norm(), k, xi: center }))
        .min_by(|a, b| a.min.total_cmp(&b.min))
        .unwrap()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapEstimate {
    /// `min(scan minimum, tail bound)`.
    pub estimate: f64,
    pub scan: ScanMin,
    /// Lower bound on `|form|` outside the scan box, when the leading terms dominate.
    pub tail: Option<f64>,
    /// Scan minimum minus a Lipschitz allowance for the sample spacing, combined with the tail.
    pub rigorous_lower: Option<f64>,
    pub scan_box: (i64, f64, usize),
}

impl GapEstimate {
    pub fn to_gap(&self) -> Result<Gap> {
        let value = rationalize(self.estimate, self.estimate * 1e-9)?;
        Ok(Gap { value, kind: GapKind::Estimate })
    }

    pub fn describe(&self) -> String {
        let tail = match self.tail {
            Some(t) => format!("tail bound {t:.6e}"),
            None => "tail bound not established for this box".into(),
        };
        let rig = match self.rigorous_lower {
            Some(r) => format!("certified lower bound {r:.6e}"),
            None => "no certified lower bound".into(),
        };
        format!(
            "gap estimate {:.6e} from scan |k|<={}, |xi|<={}, {} samples (min at k={}, xi={:.6}); {tail}; {rig}",
            self.estimate, self.scan_box.0, self.scan_box.1, self.scan_box.2, self.scan.k, self.scan.xi
        )
    }
}

/// Lower bound of `|poly(x)|` for real `|x| >= r`, or 0 when the leading term does not dominate.
fn lower_beyond(cs: &[Complex64], r: f64) -> f64 {
    let Some(d) = cs.len().checked_sub(1) else { return 0.0 };
    if d == 0 {
        return cs[0].norm();
    }
    let lead = cs[d].norm();
    let rest: f64 = cs[..d].iter().map(|c| c.norm()).sum();
    let r = r.max(1.0);
    if lead * r <= rest {
        return 0.0;
    }
    r.powi(d as i32 - 1) * (lead * r - rest)
}

fn upper_within(cs: &[Complex64], r: f64) -> f64 {
    cs.iter().enumerate().map(|(i, c)| c.norm() * r.powi(i as i32)).sum()
}

fn real_parts(cs: &[Complex64]) -> Vec<Complex64> {
    cs.iter().map(|c| Complex64::new(c.re, 0.0)).collect()
}

fn imag_parts(cs: &[Complex64]) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = cs.iter().map(|c| Complex64::new(c.im, 0.0)).collect();
    while v.last().is_some_and(|c| c.norm() == 0.0) {
        v.pop();
    }
    v
}

/// Lower bound of `|form|` outside the scan box, if the leading terms give one.
fn tail_bound(sym: &Symbol, scan: &ScanBox) -> Option<f64> {
    let (kk, xx) = (scan.k_max as f64, scan.xi_max);
    let positive = |v: f64| (v > 0.0).then_some(v);
    if let Symbol::FirstOrder { c1, c2, c3 } = sym {
        let (alpha, beta, gamma) = (c1.to_c64(), c2.to_c64(), (-c3.mul_i()).to_c64());
        if beta.norm() == 0.0 {
            // independent of xi: only |k| > K is outside the box
            return positive(alpha.norm() * (kk + 1.0) - gamma.norm());
        }
        let s = (alpha * beta.conj()).im;
        let r = (gamma * beta.conj()).im;
        let far_k = if s == 0.0 { r.abs() } else { s.abs() * (kk + 1.0) - r.abs() } / beta.norm();
        let far_xi = beta.norm() * xx - alpha.norm() * kk - gamma.norm();
        return positive(far_k.min(far_xi));
    }
    let (p, q) = sym.as_separable();
    let (pc, qc) = (p.to_c64_coeffs(), q.to_c64_coeffs());
    if p.is_real() && q.is_real() {
        // SGH forces even degrees with matching leading signs; bound s(p + q) from below
        let s = pc.last()?.re.signum();
        if s != qc.last()?.re.signum() || p.degree()? % 2 == 1 || q.degree()? % 2 == 1 {
            return None;
        }
        let p_min = min_on_reals(&p.re.scale(&Rational::from_integer((s as i64).into())))?;
        let q_box_min = (-scan.k_max..=scan.k_max).map(|k| s * horner(&qc, k as f64).re).fold(f64::INFINITY, f64::min);
        let q_far = lower_beyond(&qc, kk + 1.0);
        let q_min = q_box_min.min(q_far);
        let region_far_xi = lower_beyond(&pc, xx) + q_min;
        let region_far_k = p_min + q_far;
        return positive(region_far_xi.min(region_far_k).min(f64::INFINITY));
    }
    let far_k_in_xi = lower_beyond(&qc, kk + 1.0) - upper_within(&pc, xx);
    if q.is_real() {
        let im_p = imag_parts(&pc);
        let far_xi = lower_beyond(&im_p, xx);
        return positive(far_xi.min(far_k_in_xi));
    }
    // p real, q complex
    let q_box_max = (-scan.k_max..=scan.k_max).map(|k| horner(&qc, k as f64).norm()).fold(0.0, f64::max);
    let far_xi_near_k = lower_beyond(&real_parts(&pc), xx) - q_box_max;
    let im_q = imag_parts(&qc);
    let far_xi_far_k = lower_beyond(&im_q, kk + 1.0);
    positive(far_xi_near_k.min(far_xi_far_k).min(far_k_in_xi.max(far_xi_far_k)))
}

/// Rigorous-in-exact-arithmetic lower bound on the global minimum of an
/// even-degree real polynomial with positive leading coefficient.
fn min_on_reals(p: &QPoly) -> Option<f64> {
    let crit = p.derivative().isolate_real_roots(&rat(1, 1 << 20));
    crit.iter().map(|iv| rat_to_f64(&p.eval_interval(&iv.lo, &iv.hi).0)).reduce(f64::min)
}

/// Numeric estimate of `inf |form|` over `Z x R` for an operator already known to be SGH.
pub fn gap_estimate(sym: &Symbol, verdict: Verdict, scan: &ScanBox) -> Result<GapEstimate> {
    if verdict != Verdict::Sgh {
        return Err(Error::Precondition("gap estimate requested for a non-SGH operator".into()));
    }
    let min = brute_force_min_symbol(sym, scan);
    if min.min < ZERO_TOLERANCE {
        return Err(Error::Inconsistency(format!(
            "verdict SGH but |symbol| = {:e} at k = {}, xi = {}",
            min.min, min.k, min.xi
        )));
    }
    let tail = tail_bound(sym, scan);
    let (p, _) = sym.as_separable();
    let lip = upper_within(&derivative_coeffs(&p), scan.xi_max);
    let scan_lower = min.min - lip * scan.spacing() / 2.0;
    let rigorous_lower = match tail {
        Some(t) if scan_lower > 0.0 => Some(scan_lower.min(t)),
        _ => None,
    };
    Ok(GapEstimate {
        estimate: tail.map_or(min.min, |t| min.min.min(t)),
        scan: min,
        tail,
        rigorous_lower,
        scan_box: (scan.k_max, scan.xi_max, scan.samples),
    })
}

fn derivative_coeffs(p: &CPoly) -> Vec<Complex64> {
    p.to_c64_coeffs().iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect()
}

/// `true` iff the form vanishes at `k` for some `xi` in `[lo, hi]`.
pub fn witness_holds(sym: &Symbol, k: i64, lo: &Rational, hi: &Rational) -> bool {
    if lo > hi {
        return false;
    }
    let f = sym.form_at_k(&BigInt::from(k));
    if f.is_zero() {
        return true;
    }
    let locus = f.real_zero_locus();
    match locus.degree() {
        None => true,
        Some(0) => false,
        Some(_) => locus.count_roots_in(lo, hi) >= 1,
    }
}

/// Checks a witness against an operator; errors if the witness was issued for a different symbol.
pub fn witness_verify(op: &DifferentialOperator, w: &Witness) -> Result<bool> {
    let sym = symbol_of(op)?;
    let given = sym.canonical();
    if given != w.symbol {
        return Err(Error::StaleWitness { recorded: w.symbol.clone(), given });
    }
    Ok(witness_holds(&sym, w.k, &w.xi_lo, &w.xi_hi))
}

/// A decision procedure for some class of operators, selectable by name.
pub trait SghDecider: Send + Sync {
    fn name(&self) -> &'static str;
    fn applies_to(&self, op: &DifferentialOperator) -> bool;
    fn decide(&self, op: &DifferentialOperator) -> Result<SghReport>;
}

pub struct FirstOrderClosedForm;
pub struct SeparablePolyDecision;

impl SghDecider for FirstOrderClosedForm {
    fn name(&self) -> &'static str {
        Method::FirstOrderClosedForm.name()
    }
    fn applies_to(&self, op: &DifferentialOperator) -> bool {
        matches!(op, DifferentialOperator::FirstOrderConstant { .. })
    }
    fn decide(&self, op: &DifferentialOperator) -> Result<SghReport> {
        match op {
            DifferentialOperator::FirstOrderConstant { c1, c2, c3 } => decide_sgh_first_order(c1, c2, c3),
            _ => Err(Error::Precondition(format!("{} does not handle {}", self.name(), op.kind_name()))),
        }
    }
}

impl SghDecider for SeparablePolyDecision {
    fn name(&self) -> &'static str {
        Method::SeparablePolyDecision.name()
    }
    /// Also accepts first-order operators whose embedding has a real side.
    fn applies_to(&self, op: &DifferentialOperator) -> bool {
        match symbol_of(op) {
            Ok(sym) => {
                let (p, q) = sym.as_separable();
                p.degree().unwrap_or(0) > 0 && q.degree().unwrap_or(0) > 0 && (p.is_real() || q.is_real())
            }
            Err(_) => false,
        }
    }
    fn decide(&self, op: &DifferentialOperator) -> Result<SghReport> {
        let (p, q) = symbol_of(op)?.as_separable();
        decide_sgh_separable(&p, &q)
    }
}

/// Deciders registered by name. [`DeciderRegistry::decide`] uses the first
/// registered decider, in registration order, that applies.
pub struct DeciderRegistry {
    order: Vec<&'static str>,
    entries: BTreeMap<&'static str, Box<dyn SghDecider>>,
}

impl DeciderRegistry {
    pub fn empty() -> Self {
        Self { order: Vec::new(), entries: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(FirstOrderClosedForm));
        reg.register(Box::new(SeparablePolyDecision));
        reg.register(Box::new(crate::conjugation::ConjugatedToConstant));
        reg
    }

    pub fn register(&mut self, d: Box<dyn SghDecider>) {
        let name = d.name();
        if self.entries.insert(name, d).is_none() {
            self.order.push(name);
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.order.clone()
    }

    pub fn get(&self, name: &str) -> Result<&dyn SghDecider> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy { registry: "decider", name: name.into() })
    }

    pub fn decide(&self, op: &DifferentialOperator) -> Result<SghReport> {
        let d = self
            .order
            .iter()
            .map(|n| self.entries[n].as_ref())
            .find(|d| d.applies_to(op))
            .ok_or_else(|| Error::Precondition(format!("no decider handles {}", op.kind_name())))?;
        d.decide(op)
    }

    pub fn decide_with(&self, name: &str, op: &DifferentialOperator) -> Result<SghReport> {
        let d = self.get(name)?;
        if !d.applies_to(op) {
            return Err(Error::Precondition(format!("decider {name} does not handle {op}")));
        }
        d.decide(op)
    }
}

/// Decision with the standard registry.
pub fn decide_sgh(op: &DifferentialOperator) -> Result<SghReport> {
    DeciderRegistry::standard().decide(op)
}
