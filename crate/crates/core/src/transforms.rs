//! Partial Fourier transforms on the grid.
//!
//! * torus: `f^(k, x) = (1/n_t) sum_l f(t_l, x) e^{-ik t_l}`, inverse `sum_k g(k, x) e^{ik t}`.
//! * line: `f^(t, xi_m) = dx sum_j f(t, x_j) e^{-i x_j xi_m}`, inverse
//!   `(dxi / 2 pi) sum_m g(t, xi_m) e^{i x_j xi_m}`.
//!
//! With `x_j = -X + j dx` and `xi_m = (pi/X) m` the phase is
//! `x_j xi_m = -pi m + 2 pi j m / n_x`, so the line sum is an FFT times `(-1)^m`.
//! The weights make each pair exactly mutually inverse.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::{DataKind, GridData, LineSpectrum, MixedSpectrum, SampledField, TorusSpectrum};
use crate::grid::CylinderGrid;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Forward,
    Inverse,
}

fn plan(n: usize, dir: Dir) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    match dir {
        Dir::Forward => planner.plan_fft_forward(n),
        Dir::Inverse => planner.plan_fft_inverse(n),
    }
}

fn sign_of(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// FFT order index `i` holds frequency `i` for `i < n/2` and `i - n` above.
/// Storage column `c` holds frequency `c - n/2`; the two differ by a rotation of `n/2`.
fn fft_to_centered(buf: &[Complex64]) -> Vec<Complex64> {
    let n = buf.len();
    (0..n).map(|c| buf[(c + n / 2) % n]).collect()
}

fn centered_to_fft(vals: &[Complex64]) -> Vec<Complex64> {
    let n = vals.len();
    (0..n).map(|i| vals[(i + n / 2) % n]).collect()
}

/// Line transform of each row of a row-major `rows x n_x` array.
fn line_rows(grid: &CylinderGrid, values: &[Complex64], dir: Dir) -> Vec<Complex64> {
    let n = grid.n_x();
    let fft = plan(n, dir);
    let half = (n / 2) as i64;
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    out.par_chunks_mut(n).zip(values.par_chunks(n)).for_each(|(dst, src)| {
        match dir {
            Dir::Forward => {
                let mut buf = src.to_vec();
                fft.process(&mut buf);
                let centered = fft_to_centered(&buf);
                let dx = grid.dx();
                for (c, z) in centered.into_iter().enumerate() {
                    dst[c] = z * (dx * sign_of(c as i64 - half));
                }
            }
            Dir::Inverse => {
                let signed: Vec<Complex64> =
                    src.iter().enumerate().map(|(c, z)| z * sign_of(c as i64 - half)).collect();
                let mut buf = centered_to_fft(&signed);
                fft.process(&mut buf);
                let w = grid.dxi() / (2.0 * std::f64::consts::PI);
                for (d, z) in dst.iter_mut().zip(buf) {
                    *d = z * w;
                }
            }
        }
    });
    out
}

/// Torus transform along the row index of a row-major `n_t x n_x` array.
fn torus_cols(grid: &CylinderGrid, values: &[Complex64], dir: Dir) -> Vec<Complex64> {
    let (nt, nx) = (grid.n_t(), grid.n_x());
    let fft = plan(nt, dir);
    let columns: Vec<Vec<Complex64>> = (0..nx)
        .into_par_iter()
        .map(|j| {
            let col: Vec<Complex64> = (0..nt).map(|r| values[r * nx + j]).collect();
            match dir {
                Dir::Forward => {
                    let mut buf = col;
                    fft.process(&mut buf);
                    let scale = 1.0 / nt as f64;
                    fft_to_centered(&buf).into_iter().map(|z| z * scale).collect()
                }
                Dir::Inverse => {
                    let mut buf = centered_to_fft(&col);
                    fft.process(&mut buf);
                    buf
                }
            }
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    for (j, col) in columns.into_iter().enumerate() {
        for (r, z) in col.into_iter().enumerate() {
            out[r * nx + j] = z;
        }
    }
    out
}

pub fn fourier_torus(f: &SampledField) -> TorusSpectrum {
    TorusSpectrum::from_raw(*f.grid(), torus_cols(f.grid(), f.values(), Dir::Forward))
}

pub fn inv_fourier_torus(g: &TorusSpectrum) -> SampledField {
    SampledField::from_raw(*g.grid(), torus_cols(g.grid(), g.values(), Dir::Inverse))
}

pub fn fourier_line(f: &SampledField) -> LineSpectrum {
    LineSpectrum::from_raw(*f.grid(), line_rows(f.grid(), f.values(), Dir::Forward))
}

pub fn inv_fourier_line(g: &LineSpectrum) -> SampledField {
    SampledField::from_raw(*g.grid(), line_rows(g.grid(), g.values(), Dir::Inverse))
}

/// `F_T` applied to the line transform.
pub fn mixed_transform(f: &SampledField) -> MixedSpectrum {
    let line = line_rows(f.grid(), f.values(), Dir::Forward);
    MixedSpectrum::from_raw(*f.grid(), torus_cols(f.grid(), &line, Dir::Forward))
}

/// Same spectrum as [`mixed_transform`], composed in the other order.
pub fn mixed_transform_torus_first(f: &SampledField) -> MixedSpectrum {
    let torus = torus_cols(f.grid(), f.values(), Dir::Forward);
    MixedSpectrum::from_raw(*f.grid(), line_rows(f.grid(), &torus, Dir::Forward))
}

pub fn inv_mixed(g: &MixedSpectrum) -> SampledField {
    let line = torus_cols(g.grid(), g.values(), Dir::Inverse);
    SampledField::from_raw(*g.grid(), line_rows(g.grid(), &line, Dir::Inverse))
}

/// Pointwise product with `sigma(k, xi)` on the dual lattice.
pub fn apply_multiplier(
    g: &MixedSpectrum,
    mut sigma: impl FnMut(i64, f64) -> Complex64,
) -> Result<MixedSpectrum> {
    let grid = *g.grid();
    let nx = grid.n_x();
    let mut out = Vec::with_capacity(grid.len());
    for r in 0..grid.n_t() {
        let k = grid.k(r);
        for c in 0..nx {
            let s = sigma(k, grid.xi(c));
            if !(s.re.is_finite() && s.im.is_finite()) {
                return Err(Error::NonFinite { row: r, col: c });
            }
            out.push(g.values()[r * nx + c] * s);
        }
    }
    Ok(MixedSpectrum::from_raw(grid, out))
}

fn ipow(z: Complex64, e: u32) -> Complex64 {
    (0..e).fold(Complex64::new(1.0, 0.0), |acc, _| acc * z)
}

/// `d_t^alpha d_x^beta f` through the multiplier `(ik)^alpha (i xi)^beta`.
pub fn spectral_derivative(f: &SampledField, alpha: u32, beta: u32) -> SampledField {
    if alpha == 0 && beta == 0 {
        return f.clone();
    }
    let spec = mixed_transform(f);
    let d = apply_multiplier(&spec, |k, xi| {
        ipow(Complex64::new(0.0, k as f64), alpha) * ipow(Complex64::new(0.0, xi), beta)
    })
    .expect("derivative multiplier is finite");
    inv_mixed(&d)
}

/// `d_t^alpha f` via the torus transform only.
pub fn torus_derivative(f: &SampledField, alpha: u32) -> SampledField {
    if alpha == 0 {
        return f.clone();
    }
    let grid = *f.grid();
    let mut spec = torus_cols(&grid, f.values(), Dir::Forward);
    let nx = grid.n_x();
    for (i, z) in spec.iter_mut().enumerate() {
        *z *= ipow(Complex64::new(0.0, grid.k(i / nx) as f64), alpha);
    }
    SampledField::from_raw(grid, torus_cols(&grid, &spec, Dir::Inverse))
}

/// `d_x^beta f` via the line transform only.
pub fn line_derivative(f: &SampledField, beta: u32) -> SampledField {
    if beta == 0 {
        return f.clone();
    }
    let grid = *f.grid();
    let mut spec = line_rows(&grid, f.values(), Dir::Forward);
    let nx = grid.n_x();
    for (i, z) in spec.iter_mut().enumerate() {
        *z *= ipow(Complex64::new(0.0, grid.xi(i % nx)), beta);
    }
    SampledField::from_raw(grid, line_rows(&grid, &spec, Dir::Inverse))
}

/// Truncation quality: the largest field magnitude on the outermost `x` samples
/// and the largest mixed-spectrum magnitude on the outermost `xi` samples.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct TruncationReport {
    pub field_edge: f64,
    pub spectrum_edge: f64,
}

impl TruncationReport {
    pub fn worst(&self) -> f64 {
        self.field_edge.max(self.spectrum_edge)
    }
}

pub fn truncation_report(f: &SampledField) -> TruncationReport {
    let g = *f.grid();
    let spec = mixed_transform(f);
    let edge_cols = [0, 1, g.n_x() - 1];
    let mut field_edge = 0.0f64;
    let mut spectrum_edge = 0.0f64;
    for r in 0..g.n_t() {
        for &c in &edge_cols {
            field_edge = field_edge.max(f.get(r, c).norm());
            spectrum_edge = spectrum_edge.max(spec.get(r, c).norm());
        }
    }
    TruncationReport { field_edge, spectrum_edge }
}

/// A transform pair selectable by name.
pub trait SpectralTransform: Send + Sync {
    fn name(&self) -> &'static str;
    /// Layout produced by [`SpectralTransform::forward`].
    fn spectrum_kind(&self) -> DataKind;
    fn forward(&self, data: &GridData) -> Result<GridData>;
    fn inverse(&self, data: &GridData) -> Result<GridData>;
}

struct TorusTransform;
struct LineTransform;
struct MixedTransform;

impl SpectralTransform for TorusTransform {
    fn name(&self) -> &'static str {
        "torus"
    }
    fn spectrum_kind(&self) -> DataKind {
        DataKind::Torus
    }
    fn forward(&self, data: &GridData) -> Result<GridData> {
        Ok(fourier_torus(&SampledField::try_from_data(data.clone())?).into_data())
    }
    fn inverse(&self, data: &GridData) -> Result<GridData> {
        Ok(inv_fourier_torus(&TorusSpectrum::try_from_data(data.clone())?).into_data())
    }
}

impl SpectralTransform for LineTransform {
    fn name(&self) -> &'static str {
        "line"
    }
    fn spectrum_kind(&self) -> DataKind {
        DataKind::Line
    }
    fn forward(&self, data: &GridData) -> Result<GridData> {
        Ok(fourier_line(&SampledField::try_from_data(data.clone())?).into_data())
    }
    fn inverse(&self, data: &GridData) -> Result<GridData> {
        Ok(inv_fourier_line(&LineSpectrum::try_from_data(data.clone())?).into_data())
    }
}

impl SpectralTransform for MixedTransform {
    fn name(&self) -> &'static str {
        "mixed"
    }
    fn spectrum_kind(&self) -> DataKind {
        DataKind::Mixed
    }
    fn forward(&self, data: &GridData) -> Result<GridData> {
        Ok(mixed_transform(&SampledField::try_from_data(data.clone())?).into_data())
    }
    fn inverse(&self, data: &GridData) -> Result<GridData> {
        Ok(inv_mixed(&MixedSpectrum::try_from_data(data.clone())?).into_data())
    }
}

/// Transforms registered by name.
pub struct TransformRegistry {
    entries: BTreeMap<&'static str, Box<dyn SpectralTransform>>,
}

impl TransformRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(TorusTransform));
        reg.register(Box::new(LineTransform));
        reg.register(Box::new(MixedTransform));
        reg
    }

    /// Replaces any transform previously registered under the same name.
    pub fn register(&mut self, t: Box<dyn SpectralTransform>) {
        self.entries.insert(t.name(), t);
    }

    pub fn get(&self, name: &str) -> Result<&dyn SpectralTransform> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy { registry: "transform", name: name.into() })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}
