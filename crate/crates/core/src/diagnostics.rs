//! Grid-level seminorms, decay certificates and growth checks.
//!
//! Certificates are extremal constants on a finite grid: they are
//! consistent with a decay order on that grid, never proofs of membership.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::builtins::{sample_builtin, BuiltinParams};
use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::grid::CylinderGrid;
use crate::transforms::{fourier_line, fourier_torus, line_derivative, mixed_transform, spectral_derivative, torus_derivative};

/// `max |x^gamma d_t^alpha d_x^beta f|` over the grid.
pub fn seminorm(f: &SampledField, alpha: u32, beta: u32, gamma: u32) -> f64 {
    weighted_max(&spectral_derivative(f, alpha, beta), gamma)
}

fn weighted_max(d: &SampledField, gamma: u32) -> f64 {
    let g = d.grid();
    let nx = g.n_x();
    d.values()
        .iter()
        .enumerate()
        .map(|(i, z)| g.x(i % nx).abs().powi(gamma as i32) * z.norm())
        .fold(0.0, f64::max)
}

/// `p_N(f)`: sum of `seminorm(f, a, b, c)` over `a + b + c <= N`.
pub fn seminorm_pn(f: &SampledField, n: u32) -> f64 {
    let mut derivs: HashMap<(u32, u32), SampledField> = HashMap::new();
    let mut total = 0.0;
    for a in 0..=n {
        for b in 0..=n - a {
            let d = derivs.entry((a, b)).or_insert_with(|| spectral_derivative(f, a, b));
            for c in 0..=n - a - b {
                total += weighted_max(d, c);
            }
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateFamily {
    /// `|d_xi^beta f~(k, xi)| <= C (1+k^2)^{-N/2} (1+xi^2)^{-N/2}`
    Mixed,
    /// `|d_x^beta f^(k, x)| <= C (1+k^2)^{-N/2} (1+x^2)^{-N/2}`
    Torus,
    /// `|d_t^alpha d_xi^beta f^(t, xi)| <= C (1+xi^2)^{-N/2}`
    Line,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayCertificate {
    pub family: CertificateFamily,
    pub n: u32,
    pub alpha: u32,
    pub beta: u32,
    /// Smallest constant for which the inequality holds at every grid point.
    pub c: f64,
    pub argmax_row: usize,
    pub argmax_col: usize,
    pub grid: CylinderGrid,
}

impl DecayCertificate {
    /// Weight `w` with the inequality read as `|value| * w <= C`.
    fn weight(&self, row: usize, col: usize) -> f64 {
        weight(self.family, &self.grid, self.n, row, col)
    }

    pub fn argmax_k(&self) -> Option<i64> {
        (self.family != CertificateFamily::Line).then(|| self.grid.k(self.argmax_row))
    }

    pub fn argmax_xi_index(&self) -> Option<i64> {
        (self.family != CertificateFamily::Torus).then(|| self.grid.xi_index(self.argmax_col))
    }
}

fn weight(family: CertificateFamily, g: &CylinderGrid, n: u32, row: usize, col: usize) -> f64 {
    let h = n as f64 / 2.0;
    let k2 = (g.k(row) as f64).powi(2);
    match family {
        CertificateFamily::Mixed => (1.0 + k2).powf(h) * (1.0 + g.xi(col).powi(2)).powf(h),
        CertificateFamily::Torus => (1.0 + k2).powf(h) * (1.0 + g.x(col).powi(2)).powf(h),
        CertificateFamily::Line => (1.0 + g.xi(col).powi(2)).powf(h),
    }
}

impl Serialize for DecayCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DecayCertificate", 11)?;
        st.serialize_field("type", &self.family)?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("C", &self.c)?;
        st.serialize_field("argmax_k", &self.argmax_k())?;
        st.serialize_field("argmax_xi_index", &self.argmax_xi_index())?;
        st.serialize_field("argmax_row", &self.argmax_row)?;
        st.serialize_field("argmax_col", &self.argmax_col)?;
        st.serialize_field("grid", &self.grid)?;
        st.serialize_field("label", &format!("grid-consistent with order {}", self.n))?;
        st.end()
    }
}

/// `(-i x)^beta f`, whose line transform is `d_xi^beta` of the line transform of `f`.
fn times_minus_ix(f: &SampledField, beta: u32) -> SampledField {
    if beta == 0 {
        return f.clone();
    }
    let g = *f.grid();
    let nx = g.n_x();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| z * Complex64::new(0.0, -g.x(i % nx)).powu(beta))
        .collect();
    SampledField::from_raw(g, values)
}

/// Spectral values at or below this fraction of the largest one are FFT roundoff
/// and carry no decay information; certificates skip them, since the polynomial
/// weight at the grid corners would otherwise turn roundoff into the supremum.
pub const RESOLUTION_FLOOR: f64 = 1e-12;

fn resolved_cutoff(values: &[Complex64]) -> f64 {
    RESOLUTION_FLOOR * values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn certify(family: CertificateFamily, n: u32, alpha: u32, beta: u32, values: &[Complex64], grid: CylinderGrid) -> DecayCertificate {
    let nx = grid.n_x();
    let cutoff = resolved_cutoff(values);
    let mut best = (0.0, 0usize);
    for (i, z) in values.iter().enumerate() {
        if z.norm() <= cutoff {
            continue;
        }
        let v = z.norm() * weight(family, &grid, n, i / nx, i % nx);
        if v > best.0 {
            best = (v, i);
        }
    }
    DecayCertificate { family, n, alpha, beta, c: best.0, argmax_row: best.1 / nx, argmax_col: best.1 % nx, grid }
}

/// Mixed-side certificate; `d_xi^beta` is taken as the transform of `(-ix)^beta f`.
pub fn decay_certificate_mixed(f: &SampledField, n: u32, beta: u32) -> DecayCertificate {
    let spec = mixed_transform(&times_minus_ix(f, beta));
    certify(CertificateFamily::Mixed, n, 0, beta, spec.values(), *f.grid())
}

pub fn decay_certificate_torus(f: &SampledField, n: u32, beta: u32) -> DecayCertificate {
    let spec = fourier_torus(&line_derivative(f, beta));
    certify(CertificateFamily::Torus, n, 0, beta, spec.values(), *f.grid())
}

pub fn decay_certificate_line(f: &SampledField, n: u32, alpha: u32, beta: u32) -> DecayCertificate {
    let spec = fourier_line(&times_minus_ix(&torus_derivative(f, alpha), beta));
    certify(CertificateFamily::Line, n, alpha, beta, spec.values(), *f.grid())
}

/// The spectrum a certificate bounds, recomputed from `f`.
fn certified_values(cert: &DecayCertificate, f: &SampledField) -> Vec<Complex64> {
    match cert.family {
        CertificateFamily::Mixed => mixed_transform(&times_minus_ix(f, cert.beta)).into_values(),
        CertificateFamily::Torus => fourier_torus(&line_derivative(f, cert.beta)).into_values(),
        CertificateFamily::Line => fourier_line(&times_minus_ix(&torus_derivative(f, cert.alpha), cert.beta)).into_values(),
    }
}

/// Resolved grid points where `|value| > C / weight`; empty when the certificate holds.
pub fn recheck_certificate(cert: &DecayCertificate, f: &SampledField) -> Result<Vec<(usize, usize)>> {
    if f.grid() != &cert.grid {
        return Err(Error::ShapeMismatch { expected: cert.grid.len(), got: f.grid().len() });
    }
    let nx = cert.grid.n_x();
    let slack = 1.0 + 1e-12;
    let values = certified_values(cert, f);
    let cutoff = resolved_cutoff(&values);
    Ok(values
        .iter()
        .enumerate()
        .filter(|(i, z)| z.norm() > cutoff && z.norm() > slack * cert.c / cert.weight(i / nx, i % nx))
        .map(|(i, _)| (i / nx, i % nx))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub k: i64,
    pub xi_index: i64,
    /// `|u| / (C (1+k^2)^{N/2} (1+xi^2)^{N/2})`.
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthCheck {
    pub holds: bool,
    /// Lattice point with the largest ratio (the maximal violation when `holds` is false).
    pub worst: Option<GrowthPoint>,
}

/// Does `|u(k, xi)| <= C (1+k^2)^{N/2} (1+xi^2)^{N/2}` hold at every lattice point?
pub fn tempered_growth_check(g: &crate::field::MixedSpectrum, c: f64, n: u32) -> Result<GrowthCheck> {
    if !c.is_finite() || c < 0.0 {
        return Err(Error::BadParameter(format!("growth constant must be finite and >= 0, got {c}")));
    }
    let grid = *g.grid();
    let nx = grid.n_x();
    let mut holds = true;
    let mut worst: Option<GrowthPoint> = None;
    for (i, z) in g.values().iter().enumerate() {
        let (r, col) = (i / nx, i % nx);
        let bound = c * weight(CertificateFamily::Mixed, &grid, n, r, col);
        let mag = z.norm();
        if mag > bound {
            holds = false;
        }
        let ratio = if bound > 0.0 { mag / bound } else if mag > 0.0 { f64::INFINITY } else { 0.0 };
        if worst.is_none_or(|w| ratio > w.ratio) {
            worst = Some(GrowthPoint { k: grid.k(r), xi_index: grid.xi_index(col), ratio });
        }
    }
    Ok(GrowthCheck { holds, worst })
}

/// `p_0` of a builtin sampled on each grid of a ladder with increasing `n_t`.
pub fn refinement_divergence_probe(name: &str, params: &BuiltinParams, ladder: &[CylinderGrid]) -> Result<Vec<f64>> {
    if ladder.windows(2).any(|w| w[1].n_t() <= w[0].n_t()) {
        return Err(Error::BadParameter("grid ladder must have strictly increasing n_t".into()));
    }
    ladder.iter().map(|g| Ok(seminorm(&sample_builtin(name, params, *g)?, 0, 0, 0))).collect()
}
