//! Univariate polynomials over the rationals and over [`ComplexRational`],
//! with Sturm-sequence real-root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::scalar::{rat_to_f64, ComplexRational, Rational};

/// Dense polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rat_to_f64(c))
    }

    /// Sign of the value at `x` (-1, 0, 1).
    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign(&self.eval(x))
    }

    /// Sign as `x -> +inf` (`positive = true`) or `x -> -inf`.
    pub fn sign_at_infinity(&self, positive: bool) -> i8 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = sign(self.leading().unwrap());
                if positive || d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Upper bound on the magnitude of every complex root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        match self.degree() {
            None | Some(0) => Rational::one(),
            Some(d) => {
                let lead = self.coeffs[d].abs();
                let max = self.coeffs[..d]
                    .iter()
                    .map(|c| c.abs() / &lead)
                    .max()
                    .unwrap_or_else(Rational::zero);
                max + Rational::one()
            }
        }
    }

    /// Sum of absolute values of all non-leading coefficients.
    pub fn lower_abs_sum(&self) -> Rational {
        match self.degree() {
            None => Rational::zero(),
            Some(d) => self.coeffs[..d].iter().map(|c| c.abs()).sum(),
        }
    }

    /// Enclosure of the range over `[lo, hi]` by interval Horner evaluation.
    pub fn eval_interval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut acc = (Rational::zero(), Rational::zero());
        for c in self.coeffs.iter().rev() {
            let cands = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let mn = cands.iter().min().unwrap().clone();
            let mx = cands.iter().max().unwrap().clone();
            acc = (mn + c, mx + c);
        }
        acc
    }

    /// Sturm chain of the polynomial (assumed squarefree for root counting).
    pub fn sturm_chain(&self) -> Vec<QPoly> {
        let mut chain = vec![self.clone()];
        if self.is_zero() {
            return chain;
        }
        let mut next = self.derivative();
        while !next.is_zero() {
            let (_, r) = chain.last().unwrap().div_rem(&next);
            chain.push(next);
            next = r.scale(&-Rational::one());
        }
        chain
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let sf = self.squarefree();
        if sf.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = sf.sturm_chain();
        let at_neg = sign_changes(chain.iter().map(|p| p.sign_at_infinity(false)));
        let at_pos = sign_changes(chain.iter().map(|p| p.sign_at_infinity(true)));
        at_neg - at_pos
    }

    /// Number of distinct real roots in the closed interval `[lo, hi]`.
    pub fn count_roots_in(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo > hi {
            return 0;
        }
        let sf = self.squarefree();
        if sf.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = sf.sturm_chain();
        let va = sign_changes(chain.iter().map(|p| p.sign_at(lo)));
        let vb = sign_changes(chain.iter().map(|p| p.sign_at(hi)));
        // (lo, hi] plus lo itself
        va - vb + usize::from(sf.sign_at(lo) == 0)
    }

    /// Disjoint isolating intervals for all distinct real roots, in increasing order,
    /// each of width at most `max_width`.
    pub fn isolate_real_roots(&self, max_width: &Rational) -> Vec<RootInterval> {
        let sf = self.squarefree();
        if sf.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let chain = sf.sturm_chain();
        let changes = |x: &Rational| sign_changes(chain.iter().map(|p| p.sign_at(x)));
        let bound = sf.root_bound();
        let mut out = Vec::new();
        // work list of half-open intervals (a, b] with root counts
        let lo = -bound.clone();
        let mut stack = vec![(lo.clone(), bound.clone(), changes(&lo), changes(&bound))];
        while let Some((a, b, va, vb)) = stack.pop() {
            let count = va - vb;
            if count == 0 {
                continue;
            }
            if count == 1 {
                out.push(RootInterval::from_half_open(&sf, a, b).refine(&sf, max_width));
                continue;
            }
            let mid = (&a + &b) / Rational::from_integer(2.into());
            let vm = changes(&mid);
            stack.push((a, mid.clone(), va, vm));
            stack.push((mid, b, vm, vb));
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }

    /// Real roots of the squarefree part that are rational integers in `[-bound, bound]`.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let bound = self.root_bound().ceil().to_integer();
        let mut out = Vec::new();
        let mut k = -bound.clone();
        while k <= bound {
            if self.eval(&Rational::from_integer(k.clone())).is_zero() {
                out.push(k.clone());
            }
            k += 1;
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub(crate) fn sign(q: &Rational) -> i8 {
    match q.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            n += 1;
        }
        prev = s;
    }
    n
}

/// Closed interval `[lo, hi]` containing exactly one real root of a squarefree polynomial.
/// `lo == hi` means the root is the rational `lo`; otherwise the polynomial is nonzero
/// with opposite signs at the two endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn exact(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    // single root in (a, b]
    fn from_half_open(p: &QPoly, a: Rational, b: Rational) -> Self {
        if p.sign_at(&b) == 0 {
            return Self::exact(b);
        }
        let mut iv = Self { lo: a, hi: b };
        // nudge the left end off a root belonging to a neighbouring interval
        while p.sign_at(&iv.lo) == 0 || p.sign_at(&iv.lo) == p.sign_at(&iv.hi) {
            let mid = iv.midpoint();
            match p.sign_at(&mid) {
                0 => return Self::exact(mid),
                s if s == p.sign_at(&iv.hi) => iv.hi = mid,
                _ => iv.lo = mid,
            }
        }
        iv
    }

    /// Bisect until the width is at most `max_width`.
    pub fn refine(mut self, p: &QPoly, max_width: &Rational) -> Self {
        while !self.is_exact() && &self.width() > max_width {
            let mid = self.midpoint();
            let sm = p.sign_at(&mid);
            if sm == 0 {
                return Self::exact(mid);
            }
            if sm == p.sign_at(&self.lo) {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
        self
    }
}

/// Polynomial with [`ComplexRational`] coefficients, stored as real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CPoly {
    pub re: QPoly,
    pub im: QPoly,
}

impl CPoly {
    pub fn new(coeffs: &[ComplexRational]) -> Self {
        Self {
            re: QPoly::new(coeffs.iter().map(|c| c.re.clone()).collect()),
            im: QPoly::new(coeffs.iter().map(|c| c.im.clone()).collect()),
        }
    }

    pub fn from_parts(re: QPoly, im: QPoly) -> Self {
        Self { re, im }
    }

    pub fn coeffs(&self) -> Vec<ComplexRational> {
        let n = self.re.coeffs().len().max(self.im.coeffs().len());
        (0..n)
            .map(|i| ComplexRational::new(self.re.coeff(i), self.im.coeff(i)))
            .collect()
    }

    pub fn coeff(&self, i: usize) -> ComplexRational {
        ComplexRational::new(self.re.coeff(i), self.im.coeff(i))
    }

    pub fn degree(&self) -> Option<usize> {
        match (self.re.degree(), self.im.degree()) {
            (None, d) | (d, None) => d,
            (Some(a), Some(b)) => Some(a.max(b)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn leading(&self) -> Option<ComplexRational> {
        self.degree().map(|d| self.coeff(d))
    }

    pub fn eval(&self, x: &ComplexRational) -> ComplexRational {
        self.coeffs()
            .iter()
            .rev()
            .fold(ComplexRational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        self.coeffs()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }

    pub fn add_constant(&self, c: &ComplexRational) -> Self {
        Self {
            re: self.re.add(&QPoly::constant(c.re.clone())),
            im: self.im.add(&QPoly::constant(c.im.clone())),
        }
    }

    /// Common real zeros: the monic gcd of real and imaginary parts.
    /// The zero polynomial means every real number is a zero.
    pub fn real_zero_locus(&self) -> QPoly {
        self.re.gcd(&self.im)
    }

    /// Coefficients as `f64` pairs, for fast numeric evaluation.
    pub fn to_c64_coeffs(&self) -> Vec<Complex64> {
        self.coeffs().iter().map(|c| c.to_c64()).collect()
    }

    /// Lower bound of `|p(x)|` valid for every real `|x| >= r`, or zero when the
    /// leading term does not yet dominate at radius `r`.
    pub fn magnitude_lower_bound_beyond(&self, r: f64) -> f64 {
        let cs = self.to_c64_coeffs();
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
        // |p(x)| >= |x|^(d-1) (lead |x| - rest), increasing for |x| >= r
        r.powi(d as i32 - 1) * (lead * r - rest)
    }

    /// Upper bound of `|p(x)|` over `|x| <= r`.
    pub fn magnitude_upper_bound_within(&self, r: f64) -> f64 {
        self.to_c64_coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * r.powi(i as i32))
            .sum()
    }
}
