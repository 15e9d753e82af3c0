//! Trigonometric polynomials `c(t) = sum_k c_k e^{ikt}` with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::scalar::{int, ComplexRational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TrigPolynomial {
    // no zero entries are stored
    coeffs: BTreeMap<i64, ComplexRational>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ComplexRational) -> Self {
        Self::from_coeffs([(0, c)])
    }

    pub fn from_coeffs(it: impl IntoIterator<Item = (i64, ComplexRational)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    /// `cos(n t)`.
    pub fn cos(n: i64) -> Self {
        if n == 0 {
            return Self::constant(ComplexRational::one());
        }
        let half = ComplexRational::real(Rational::new(1.into(), 2.into()));
        Self::from_coeffs([(n, half.clone()), (-n, half)])
    }

    /// `sin(n t)`.
    pub fn sin(n: i64) -> Self {
        // (e^{int} - e^{-int}) / 2i
        let c = ComplexRational::new(Rational::zero(), Rational::new((-1).into(), 2.into()));
        Self::from_coeffs([(n, c.clone()), (-n, -c)])
    }

    fn add_term(&mut self, k: i64, c: ComplexRational) {
        let entry = self.coeffs.entry(k).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> ComplexRational {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Nonzero coefficients in increasing frequency order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &ComplexRational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&k| k == 0)
    }

    /// Largest `|k|` with a nonzero coefficient.
    pub fn bandwidth(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Mean over a period, the `k = 0` coefficient.
    pub fn mean(&self) -> ComplexRational {
        self.coeff(0)
    }

    /// `c_{-k} = conj(c_k)` for all `k`.
    pub fn is_real_valued(&self) -> bool {
        self.coeffs.iter().all(|(&k, c)| self.coeff(-k) == c.conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        Self::from_coeffs(self.terms().map(|(k, c)| (k, c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in self.terms() {
            for (k2, c2) in other.terms() {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(ComplexRational::one()), |acc, _| acc.mul(self))
    }

    /// Term-by-term derivative: `c_k -> ik c_k`.
    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.terms().map(|(k, c)| (k, c.mul_i().scale(&int(k)))))
    }

    /// The periodic part of the antiderivative, `A(t) = int_0^t c(s) ds - c_0 t`,
    /// normalized so that `A(0) = 0`.
    pub fn periodic_antiderivative(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms().filter(|(k, _)| *k != 0) {
            // c e^{iks} integrates to c/(ik) (e^{ikt} - 1)
            let a = c / &ComplexRational::new(Rational::zero(), int(k));
            out.add_term(k, a.clone());
            out.add_term(0, -a);
        }
        out
    }

    pub fn eval_exact_at_zero(&self) -> ComplexRational {
        self.terms().fold(ComplexRational::zero(), |acc, (_, c)| &acc + c)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms()
            .map(|(k, c)| c.to_c64() * Complex64::from_polar(1.0, k as f64 * t))
            .sum()
    }

    /// Real-basis form `c_0 + sum_{n>0} (A_n cos(nt) + B_n sin(nt))`.
    pub fn cos_sin_coeffs(&self) -> (ComplexRational, Vec<(i64, ComplexRational, ComplexRational)>) {
        let mut out = Vec::new();
        for n in 1..=self.bandwidth() {
            let (cp, cm) = (self.coeff(n), self.coeff(-n));
            let a = &cp + &cm;
            let b = (&cp - &cm).mul_i();
            if !(a.is_zero() && b.is_zero()) {
                out.push((n, a, b));
            }
        }
        (self.coeff(0), out)
    }
}

impl serde::Serialize for TrigPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<ComplexRational> for TrigPolynomial {
    fn from(c: ComplexRational) -> Self {
        Self::constant(c)
    }
}

/// Parseable form in the real basis, e.g. `(1 + 1 sin(t) + 1/2 cos(2t))`.
impl fmt::Display for TrigPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c0, rest) = self.cos_sin_coeffs();
        let mut parts = Vec::new();
        if !c0.is_zero() || rest.is_empty() {
            parts.push(c0.to_string());
        }
        let atom = |name: &str, n: i64| {
            if n == 1 {
                format!("{name}(t)")
            } else {
                format!("{name}({n}t)")
            }
        };
        for (n, a, b) in rest {
            if !a.is_zero() {
                parts.push(format!("{} {}", a, atom("cos", n)));
            }
            if !b.is_zero() {
                parts.push(format!("{} {}", b, atom("sin", n)));
            }
        }
        write!(f, "({})", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn sin_plus_one_is_real_with_unit_mean() {
        let a = TrigPolynomial::sin(1).add(&TrigPolynomial::constant(1.into()));
        assert!(a.is_real_valued());
        assert_eq!(a.mean(), 1.into());
        let q = TrigPolynomial::cos(1).scale(&ComplexRational::i());
        assert!(!q.is_real_valued());
    }

    #[test]
    fn antiderivative_of_sin_is_one_minus_cos() {
        let a = TrigPolynomial::sin(1);
        let want = TrigPolynomial::constant(1.into()).sub(&TrigPolynomial::cos(1));
        assert_eq!(a.periodic_antiderivative(), want);
        assert!(a.periodic_antiderivative().eval_exact_at_zero().is_zero());
    }

    #[test]
    fn derivative_inverts_antiderivative() {
        let a = TrigPolynomial::from_coeffs([
            (0, ComplexRational::from(3)),
            (2, ComplexRational::new(rat(1, 3), rat(-2, 5))),
            (-1, ComplexRational::from(7)),
        ]);
        let back = a.periodic_antiderivative().derivative();
        assert_eq!(back.add(&TrigPolynomial::constant(a.mean())), a);
    }

    #[test]
    fn products_and_evaluation() {
        // sin^2 + cos^2 = 1
        let one = TrigPolynomial::sin(1).pow(2).add(&TrigPolynomial::cos(1).pow(2));
        assert_eq!(one, TrigPolynomial::constant(1.into()));
        let s = TrigPolynomial::sin(3);
        assert!((s.eval(0.7) - Complex64::new((2.1f64).sin(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn display_real_basis() {
        let a = TrigPolynomial::sin(1).add(&TrigPolynomial::constant(1.into()));
        assert_eq!(a.to_string(), "(1 + 1 sin(t))");
        assert_eq!(TrigPolynomial::zero().to_string(), "(0)");
    }
}
