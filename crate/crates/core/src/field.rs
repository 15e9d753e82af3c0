//! Sampled fields and the three spectra, all stored row-major on a [`CylinderGrid`].
//!
//! | type             | rows        | columns       |
//! |------------------|-------------|---------------|
//! | [`SampledField`] | `t_l`       | `x_j`         |
//! | [`TorusSpectrum`]| `k`         | `x_j`         |
//! | [`LineSpectrum`] | `t_l`       | `xi_m`        |
//! | [`MixedSpectrum`]| `k`         | `xi_m`        |
//!
//! Frequency rows and columns run from the most negative index upward,
//! see [`CylinderGrid::k`] and [`CylinderGrid::xi_index`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::CylinderGrid;

/// Tag identifying which of the four layouts a value array uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataKind {
    Field,
    Torus,
    Line,
    Mixed,
}

impl DataKind {
    pub fn code(self) -> u8 {
        match self {
            DataKind::Field => 0,
            DataKind::Torus => 1,
            DataKind::Line => 2,
            DataKind::Mixed => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0 => DataKind::Field,
            1 => DataKind::Torus,
            2 => DataKind::Line,
            3 => DataKind::Mixed,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            DataKind::Field => "field",
            DataKind::Torus => "torus",
            DataKind::Line => "line",
            DataKind::Mixed => "mixed",
        }
    }
}

/// Untyped grid data, the unit of file I/O.
#[derive(Clone, Debug, PartialEq)]
pub struct GridData {
    pub kind: DataKind,
    pub grid: CylinderGrid,
    pub values: Vec<Complex64>,
}

fn validate(grid: &CylinderGrid, values: &[Complex64]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::ShapeMismatch { expected: grid.len(), got: values.len() });
    }
    if let Some(i) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { row: i / grid.n_x(), col: i % grid.n_x() });
    }
    Ok(())
}

macro_rules! grid_array {
    ($(#[$doc:meta])* $name:ident, $kind:expr) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name {
            grid: CylinderGrid,
            values: Vec<Complex64>,
        }

        impl $name {
            pub const KIND: DataKind = $kind;

            pub fn new(grid: CylinderGrid, values: Vec<Complex64>) -> Result<Self> {
                validate(&grid, &values)?;
                Ok(Self { grid, values })
            }

            pub fn zeros(grid: CylinderGrid) -> Self {
                Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
            }

            /// Builds from `f(row, col)`; fails on non-finite entries.
            pub fn from_fn(
                grid: CylinderGrid,
                f: impl Fn(usize, usize) -> Complex64,
            ) -> Result<Self> {
                let n_x = grid.n_x();
                let values = (0..grid.len()).map(|i| f(i / n_x, i % n_x)).collect();
                Self::new(grid, values)
            }

            // callers guarantee shape; finiteness follows from finite inputs
            pub(crate) fn from_raw(grid: CylinderGrid, values: Vec<Complex64>) -> Self {
                debug_assert_eq!(values.len(), grid.len());
                Self { grid, values }
            }

            pub fn grid(&self) -> &CylinderGrid {
                &self.grid
            }

            pub fn values(&self) -> &[Complex64] {
                &self.values
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.values
            }

            pub fn get(&self, row: usize, col: usize) -> Complex64 {
                self.values[row * self.grid.n_x() + col]
            }

            pub fn row(&self, row: usize) -> &[Complex64] {
                let n = self.grid.n_x();
                &self.values[row * n..(row + 1) * n]
            }

            pub fn max_abs(&self) -> f64 {
                self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
            }

            /// `max |self - other|`; grids must match.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                assert_eq!(self.grid, other.grid, "grid mismatch");
                self.values
                    .iter()
                    .zip(&other.values)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            }

            pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
                Self::from_raw(self.grid, self.values.iter().map(|&z| f(z)).collect())
            }

            pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
                assert_eq!(self.grid, other.grid, "grid mismatch");
                Self::from_raw(
                    self.grid,
                    self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
                )
            }

            pub fn into_data(self) -> GridData {
                GridData { kind: Self::KIND, grid: self.grid, values: self.values }
            }

            pub fn try_from_data(data: GridData) -> Result<Self> {
                if data.kind != Self::KIND {
                    return Err(Error::KindMismatch {
                        expected: Self::KIND.name(),
                        found: data.kind.name(),
                    });
                }
                Self::new(data.grid, data.values)
            }
        }
    };
}

grid_array!(
    /// Point samples `f(t_l, x_j)`.
    SampledField,
    DataKind::Field
);
grid_array!(
    /// Fourier coefficients in `t`: `f^(k, x_j)`.
    TorusSpectrum,
    DataKind::Torus
);
grid_array!(
    /// Fourier transform in `x`: `f^(t_l, xi_m)`.
    LineSpectrum,
    DataKind::Line
);
grid_array!(
    /// Mixed spectrum `f~(k, xi_m)`.
    MixedSpectrum,
    DataKind::Mixed
);

impl SampledField {
    /// Samples `f(t, x)` at every grid point.
    pub fn sample(grid: CylinderGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        Self::from_fn(grid, |l, j| f(grid.t(l), grid.x(j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_finiteness_checked() {
        let g = CylinderGrid::new(4, 4, 1.0).unwrap();
        assert!(matches!(
            SampledField::new(g, vec![Complex64::new(0.0, 0.0); 3]),
            Err(Error::ShapeMismatch { expected: 16, got: 3 })
        ));
        let mut v = vec![Complex64::new(0.0, 0.0); 16];
        v[6] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(SampledField::new(g, v), Err(Error::NonFinite { row: 1, col: 2 })));
    }

    #[test]
    fn kind_mismatch_rejected() {
        let g = CylinderGrid::new(4, 4, 1.0).unwrap();
        let data = TorusSpectrum::zeros(g).into_data();
        assert!(matches!(LineSpectrum::try_from_data(data.clone()), Err(Error::KindMismatch { .. })));
        assert!(TorusSpectrum::try_from_data(data).is_ok());
    }
}
