//! Operator descriptions on `T^1 x R`.
//!
//! Conventions for the Fourier symbol, i.e. the factor by which an operator
//! multiplies `e^{i(kt + xi x)}`:
//!
//! * `FirstOrderConstant { c1, c2, c3 }` is `c1 Dt + c2 Dx + c3` with symbol
//!   `i (c1 k + c2 xi - i c3)`.
//! * `SeparablePoly { p, q }` is `i (p(D_x) + q(D_t))` with `D = -i d`, so the
//!   symbol is `i (p(xi) + q(k))`. The form `p(xi) + q(k)` has the same real
//!   zeros as the symbol, and a first-order operator embeds with
//!   `p(xi) = c2 xi - i c3`, `q(k) = c1 k`.
//! * `FirstOrderVariable { a, q }` is `Dt + a(t) Dx + q(t)` with `a` real-valued.

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::CPoly;
use crate::scalar::ComplexRational;
use crate::trig::TrigPolynomial;

/// Which polynomial of a separable operator has all-real coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RealSide {
    P,
    Q,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DifferentialOperator {
    SeparablePoly { p: CPoly, q: CPoly, real_side: RealSide },
    FirstOrderConstant { c1: ComplexRational, c2: ComplexRational, c3: ComplexRational },
    FirstOrderVariable { a: TrigPolynomial, q: TrigPolynomial },
}

impl DifferentialOperator {
    /// `p` in `xi` and `q` in `k`, both non-constant, at least one with real coefficients.
    pub fn separable(p: CPoly, q: CPoly) -> Result<Self> {
        for (name, poly) in [("p", &p), ("q", &q)] {
            if poly.degree().unwrap_or(0) == 0 {
                return Err(Error::InvalidOperator(format!("{name} must be a non-constant polynomial")));
            }
        }
        let real_side = match (p.is_real(), q.is_real()) {
            (true, true) => RealSide::Both,
            (true, false) => RealSide::P,
            (false, true) => RealSide::Q,
            (false, false) => {
                return Err(Error::InvalidOperator(
                    "neither p nor q has real coefficients".into(),
                ))
            }
        };
        Ok(Self::SeparablePoly { p, q, real_side })
    }

    pub fn first_order(c1: ComplexRational, c2: ComplexRational, c3: ComplexRational) -> Result<Self> {
        if c1.is_zero() && c2.is_zero() {
            return Err(Error::InvalidOperator("c1 and c2 cannot both vanish".into()));
        }
        Ok(Self::FirstOrderConstant { c1, c2, c3 })
    }

    pub fn first_order_variable(a: TrigPolynomial, q: TrigPolynomial) -> Result<Self> {
        if !a.is_real_valued() {
            return Err(Error::InvalidOperator(format!("coefficient a(t) = {a} is not real-valued")));
        }
        Ok(Self::FirstOrderVariable { a, q })
    }

    pub fn is_constant_coefficient(&self) -> bool {
        !matches!(self, Self::FirstOrderVariable { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::SeparablePoly { .. } => "separable-poly",
            Self::FirstOrderConstant { .. } => "first-order-constant",
            Self::FirstOrderVariable { .. } => "first-order-variable",
        }
    }

    /// Fourier symbol of a constant-coefficient operator; `None` for variable coefficients.
    pub fn fourier_symbol(&self) -> Option<impl Fn(i64, f64) -> Complex64 + Send + Sync> {
        let (p, q) = match self {
            Self::FirstOrderVariable { .. } => return None,
            Self::FirstOrderConstant { c1, c2, c3 } => (
                vec![(-c3.mul_i()).to_c64(), c2.to_c64()],
                vec![Complex64::new(0.0, 0.0), c1.to_c64()],
            ),
            Self::SeparablePoly { p, q, .. } => (p.to_c64_coeffs(), q.to_c64_coeffs()),
        };
        Some(move |k: i64, xi: f64| {
            let eval = |cs: &[Complex64], x: f64| cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
            Complex64::i() * (eval(&p, xi) + eval(&q, k as f64))
        })
    }
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FirstOrderConstant { c1, c2, c3 } => write!(f, "{c1} Dt + {c2} Dx + {c3}"),
            Self::FirstOrderVariable { a, q } => write!(f, "Dt + {a} Dx + {q}"),
            Self::SeparablePoly { p, q, .. } => {
                write!(f, "p(Dx)={}; q(Dt)={}", poly_text(p, "Dx"), poly_text(q, "Dt"))
            }
        }
    }
}

fn poly_text(p: &CPoly, var: &str) -> String {
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => c.to_string(),
            1 => format!("{c} {var}"),
            _ => format!("{c} {var}^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl Serialize for DifferentialOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_enforced() {
        let z = ComplexRational::zero();
        assert!(DifferentialOperator::first_order(z.clone(), z.clone(), 1.into()).is_err());
        let constant = CPoly::new(&[1.into()]);
        let lin = CPoly::new(&[z.clone(), 1.into()]);
        assert!(DifferentialOperator::separable(constant, lin.clone()).is_err());
        let cplx = CPoly::new(&[ComplexRational::i(), 1.into()]);
        assert!(DifferentialOperator::separable(cplx.clone(), cplx.clone()).is_err());
        assert!(matches!(
            DifferentialOperator::separable(cplx, lin).unwrap(),
            DifferentialOperator::SeparablePoly { real_side: RealSide::Q, .. }
        ));
        let a = TrigPolynomial::cos(1).scale(&ComplexRational::i());
        assert!(DifferentialOperator::first_order_variable(a, TrigPolynomial::zero()).is_err());
    }

    #[test]
    fn first_order_symbol_matches_plane_wave_action() {
        // (Dt + 2 Dx + 3) e^{i(k t + xi x)} = (ik + 2 i xi + 3) e^{...}
        let op = DifferentialOperator::first_order(1.into(), 2.into(), 3.into()).unwrap();
        let sym = op.fourier_symbol().unwrap();
        let (k, xi) = (2, 0.75);
        let direct = Complex64::new(3.0, k as f64 + 2.0 * xi);
        assert!((sym(k, xi) - direct).norm() < 1e-14);
    }
}
