//! Reduction of `Dt + a(t) Dx + q(t)` with real `a` to the constant-coefficient
//! normal form `Dt + a0 Dx + q0`.
//!
//! With `A(t) = int_0^t a - a0 t` and `Q(t) = int_0^t q - q0 t`,
//! `Psi_a u (t, x) = u(t, x + A(t))` (the line multiplier `e^{i xi A(t)}`) and
//! `Psi_q u = e^{Q(t)} u`. The chain
//! `L0 Psi_q Psi_a = Psi_q L_{a0,q} Psi_a = Psi_q Psi_a L` makes
//! `Psi = Psi_q o Psi_a` the conjugating map.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::grid::CylinderGrid;
use crate::operator::DifferentialOperator;
use crate::scalar::ComplexRational;
use crate::solver::{apply_operator, refuse, solve_constant, SolveOutcome};
use crate::symbol::{decide_sgh_first_order, Method, SghDecider, SghReport, Verdict};
use crate::transforms::{fourier_line, inv_fourier_line};
use crate::trig::TrigPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Forward,
    Inverse,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::Forward => 1.0,
            Orientation::Inverse => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormBundle {
    pub a0: ComplexRational,
    pub q0: ComplexRational,
    #[serde(rename = "A")]
    pub big_a: TrigPolynomial,
    #[serde(rename = "Q")]
    pub big_q: TrigPolynomial,
    #[serde(rename = "L0")]
    pub l0: DifferentialOperator,
}

/// Exact means and periodic antiderivatives of `a` and `q`.
pub fn compute_normal_form(a: &TrigPolynomial, q: &TrigPolynomial) -> Result<NormalFormBundle> {
    if !a.is_real_valued() {
        return Err(Error::InvalidOperator(format!("coefficient a(t) = {a} is not real-valued")));
    }
    let (a0, q0) = (a.mean(), q.mean());
    let l0 = DifferentialOperator::first_order(ComplexRational::one(), a0.clone(), q0.clone())?;
    Ok(NormalFormBundle { big_a: a.periodic_antiderivative(), big_q: q.periodic_antiderivative(), a0, q0, l0 })
}

pub fn normal_form_of(op: &DifferentialOperator) -> Result<NormalFormBundle> {
    match op {
        DifferentialOperator::FirstOrderVariable { a, q } => compute_normal_form(a, q),
        DifferentialOperator::FirstOrderConstant { .. } | DifferentialOperator::SeparablePoly { .. } => {
            Err(Error::Precondition(format!("{} operators are already constant-coefficient", op.kind_name())))
        }
    }
}

fn real_samples(p: &TrigPolynomial, grid: &CylinderGrid) -> Vec<f64> {
    grid.ts().map(|t| p.eval(t).re).collect()
}

/// Multiplies the line transform by `e^{+-i xi A(t)}`: a shift by `+-A(t)` in `x`.
pub fn psi_a(u: &SampledField, big_a: &TrigPolynomial, orientation: Orientation) -> SampledField {
    if big_a.is_zero() {
        return u.clone();
    }
    let grid = *u.grid();
    let nx = grid.n_x();
    let shifts = real_samples(big_a, &grid);
    let s = orientation.sign();
    let spec = fourier_line(u);
    let values = spec
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| z * Complex64::from_polar(1.0, s * grid.xi(i % nx) * shifts[i / nx]))
        .collect();
    let shifted = crate::field::LineSpectrum::from_raw(grid, values);
    inv_fourier_line(&shifted)
}

/// Multiplies by `e^{+-Q(t)}`.
pub fn psi_q(u: &SampledField, big_q: &TrigPolynomial, orientation: Orientation) -> SampledField {
    if big_q.is_zero() {
        return u.clone();
    }
    let grid = *u.grid();
    let nx = grid.n_x();
    let s = orientation.sign();
    let factors: Vec<Complex64> = grid.ts().map(|t| (s * big_q.eval(t)).exp()).collect();
    let values = u.values().iter().enumerate().map(|(i, z)| z * factors[i / nx]).collect();
    SampledField::from_raw(grid, values)
}

/// `Psi = Psi_q o Psi_a`, or its inverse `Psi_a^{-1} o Psi_q^{-1}`.
pub fn psi(u: &SampledField, bundle: &NormalFormBundle, orientation: Orientation) -> SampledField {
    match orientation {
        Orientation::Forward => psi_q(&psi_a(u, &bundle.big_a, orientation), &bundle.big_q, orientation),
        Orientation::Inverse => psi_a(&psi_q(u, &bundle.big_q, orientation), &bundle.big_a, orientation),
    }
}

/// Warning text when `max |A|` exceeds a quarter of the window half-width.
pub fn shift_warning(big_a: &TrigPolynomial, grid: &CylinderGrid) -> Option<String> {
    let max_shift = real_samples(big_a, grid).into_iter().map(f64::abs).fold(0.0, f64::max);
    (max_shift > grid.half_width() / 4.0).then(|| {
        format!(
            "x-shift max|A| = {max_shift:.4} exceeds X/4 = {:.4}; mass may wrap around the truncation window",
            grid.half_width() / 4.0
        )
    })
}

fn variable(a: &TrigPolynomial, q: &TrigPolynomial) -> DifferentialOperator {
    DifferentialOperator::FirstOrderVariable { a: a.clone(), q: q.clone() }
}

fn coeffs(op: &DifferentialOperator) -> Result<(&TrigPolynomial, &TrigPolynomial)> {
    match op {
        DifferentialOperator::FirstOrderVariable { a, q } => Ok((a, q)),
        _ => Err(Error::Precondition("expected a variable-coefficient first-order operator".into())),
    }
}

/// `max |L_{a0} Psi_a u - Psi_a L_a u|` with `L_a = Dt + a Dx`.
pub fn shift_conjugation_residual(op: &DifferentialOperator, bundle: &NormalFormBundle, u: &SampledField) -> Result<f64> {
    let (a, _) = coeffs(op)?;
    let zero = TrigPolynomial::zero();
    let l_a0 = variable(&TrigPolynomial::constant(bundle.a0.clone()), &zero);
    let lhs = apply_operator(&l_a0, &psi_a(u, &bundle.big_a, Orientation::Forward));
    let rhs = psi_a(&apply_operator(&variable(a, &zero), u), &bundle.big_a, Orientation::Forward);
    Ok(lhs.max_abs_diff(&rhs))
}

/// `max |L0 Psi_q v - Psi_q L_{a0,q} v|` with `L_{a0,q} = Dt + a0 Dx + q(t)`.
pub fn gauge_conjugation_residual(op: &DifferentialOperator, bundle: &NormalFormBundle, v: &SampledField) -> Result<f64> {
    let (_, q) = coeffs(op)?;
    let lhs = apply_operator(&bundle.l0, &psi_q(v, &bundle.big_q, Orientation::Forward));
    let l_mid = variable(&TrigPolynomial::constant(bundle.a0.clone()), q);
    let rhs = psi_q(&apply_operator(&l_mid, v), &bundle.big_q, Orientation::Forward);
    Ok(lhs.max_abs_diff(&rhs))
}

/// `max |L0 (Psi u) - Psi (L u)|`.
pub fn conjugation_residual(op: &DifferentialOperator, bundle: &NormalFormBundle, u: &SampledField) -> Result<f64> {
    coeffs(op)?;
    let lhs = apply_operator(&bundle.l0, &psi(u, bundle, Orientation::Forward));
    let rhs = psi(&apply_operator(op, u), bundle, Orientation::Forward);
    Ok(lhs.max_abs_diff(&rhs))
}

fn decide_normal_form(bundle: &NormalFormBundle) -> Result<SghReport> {
    let mut report = decide_sgh_first_order(&ComplexRational::one(), &bundle.a0, &bundle.q0)?;
    report.method = Method::ConjugatedToConstant;
    report.normal_form = Some(bundle.l0.clone());
    report.notes.push(format!("decided on the normal form {} by the first-order closed form", bundle.l0));
    Ok(report)
}

/// Solves `(Dt + a Dx + q) u = f` as `u = Psi^{-1} L0^{-1} Psi f`.
pub fn solve_variable_real(op: &DifferentialOperator, f: &SampledField) -> Result<SolveOutcome> {
    let bundle = normal_form_of(op)?;
    let report = decide_normal_form(&bundle)?;
    if report.verdict == Verdict::NotSgh {
        return Err(refuse(report));
    }
    let mut warnings: Vec<String> = shift_warning(&bundle.big_a, f.grid()).into_iter().collect();
    let inner = solve_constant(&bundle.l0, &psi(f, &bundle, Orientation::Forward))?;
    warnings.extend(inner.warnings);
    let u = psi(&inner.u, &bundle, Orientation::Inverse);
    let residual_inf = apply_operator(op, &u).max_abs_diff(f);
    Ok(SolveOutcome {
        u,
        operator: op.clone(),
        grid: *f.grid(),
        sgh_report: report,
        residual_inf,
        normal_form: Some(bundle.l0),
        warnings,
    })
}

/// Decides variable real-coefficient first-order operators on their normal form.
pub struct ConjugatedToConstant;

impl SghDecider for ConjugatedToConstant {
    fn name(&self) -> &'static str {
        Method::ConjugatedToConstant.name()
    }
    fn applies_to(&self, op: &DifferentialOperator) -> bool {
        matches!(op, DifferentialOperator::FirstOrderVariable { .. })
    }
    fn decide(&self, op: &DifferentialOperator) -> Result<SghReport> {
        decide_normal_form(&normal_form_of(op)?)
    }
}

/// Solves with whichever path fits the operator.
pub fn solve(op: &DifferentialOperator, f: &SampledField) -> Result<SolveOutcome> {
    if op.is_constant_coefficient() {
        solve_constant(op, f)
    } else {
        solve_variable_real(op, f)
    }
}
