//! Operator application and symbol-division solves for constant coefficients.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::grid::CylinderGrid;
use crate::operator::DifferentialOperator;
use crate::symbol::{decide_sgh, SghReport, Verdict};
use crate::transforms::{apply_multiplier, inv_mixed, line_derivative, mixed_transform, torus_derivative};

/// Symbol magnitudes below this on the lattice trip the inconsistency alarm.
pub const DIVISION_FLOOR: f64 = 1e-12;

/// `L u` on the grid. Constant coefficients act through the Fourier symbol;
/// `Dt + a(t) Dx + q(t)` combines spectral derivatives with pointwise products.
pub fn apply_operator(op: &DifferentialOperator, u: &SampledField) -> SampledField {
    match op {
        DifferentialOperator::FirstOrderVariable { a, q } => {
            let grid = *u.grid();
            let ut = torus_derivative(u, 1);
            let ux = line_derivative(u, 1);
            let nx = grid.n_x();
            let rows: Vec<(Complex64, Complex64)> = grid.ts().map(|t| (a.eval(t), q.eval(t))).collect();
            let values = (0..grid.len())
                .map(|i| {
                    let (at, qt) = rows[i / nx];
                    ut.values()[i] + at * ux.values()[i] + qt * u.values()[i]
                })
                .collect();
            SampledField::from_raw(grid, values)
        }
        _ => {
            let sigma = op.fourier_symbol().expect("constant-coefficient operator");
            let spec = apply_multiplier(&mixed_transform(u), sigma).expect("polynomial symbol is finite on the lattice");
            inv_mixed(&spec)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveOutcome {
    #[serde(skip)]
    pub u: SampledField,
    pub operator: DifferentialOperator,
    pub grid: CylinderGrid,
    pub sgh_report: SghReport,
    /// `max |L u - f|` over the grid.
    pub residual_inf: f64,
    pub normal_form: Option<DifferentialOperator>,
    pub warnings: Vec<String>,
}

pub(crate) fn refuse(report: SghReport) -> Error {
    match report.witness {
        Some(w) => Error::NotHypoelliptic { witness: Box::new(w) },
        None => Error::Inconsistency("NotSGH verdict without witness".into()),
    }
}

/// Solves `L u = f` by dividing the mixed spectrum of `f` by the symbol of `L`.
/// Refuses operators that are not SGH, returning the zero witness.
pub fn solve_constant(op: &DifferentialOperator, f: &SampledField) -> Result<SolveOutcome> {
    if !op.is_constant_coefficient() {
        return Err(Error::Precondition("solve_constant needs constant coefficients".into()));
    }
    let report = decide_sgh(op)?;
    if report.verdict == Verdict::NotSgh {
        return Err(refuse(report));
    }
    let grid = *f.grid();
    let sigma = op.fourier_symbol().expect("constant-coefficient operator");
    let mut alarm = None;
    let spec = apply_multiplier(&mixed_transform(f), |k, xi| {
        let s = sigma(k, xi);
        if s.norm() < DIVISION_FLOOR {
            alarm = alarm.or(Some((k, xi, s.norm())));
            Complex64::new(0.0, 0.0)
        } else {
            1.0 / s
        }
    });
    if let Some((k, xi, m)) = alarm {
        return Err(Error::Inconsistency(format!("verdict SGH but |symbol| = {m:e} at k = {k}, xi = {xi}")));
    }
    let u = inv_mixed(&spec?);
    let residual_inf = apply_operator(op, &u).max_abs_diff(f);
    Ok(SolveOutcome { u, operator: op.clone(), grid, sgh_report: report, residual_inf, normal_form: None, warnings: vec![] })
}
