//! Uniform discretization of the cylinder `T^1 x [-X, X)` and its dual lattice.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n_t` samples `t_l = 2 pi l / n_t` on the circle, `n_x` samples
/// `x_j = -X + j dx` on `[-X, X)`. Dual lattice: `k in [-n_t/2, n_t/2)`,
/// `xi_m = (pi/X) m` with `m in [-n_x/2, n_x/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderGrid {
    n_t: usize,
    n_x: usize,
    #[serde(rename = "X")]
    half_width: f64,
}

impl CylinderGrid {
    pub fn new(n_t: usize, n_x: usize, half_width: f64) -> Result<Self> {
        for (name, n) in [("n_t", n_t), ("n_x", n_x)] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!("{name} must be even and >= 4, got {n}")));
            }
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "half width X must be positive and finite, got {half_width}"
            )));
        }
        Ok(Self { n_t, n_x, half_width })
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n_t * self.n_x
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        2.0 * PI / self.n_t as f64
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n_x as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    /// Largest lattice frequency magnitude, `pi n_x / (2X)`.
    pub fn xi_max(&self) -> f64 {
        PI * self.n_x as f64 / (2.0 * self.half_width)
    }

    pub fn t(&self, l: usize) -> f64 {
        self.dt() * l as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + self.dx() * j as f64
    }

    /// Torus frequency stored in spectrum row `r`.
    pub fn k(&self, r: usize) -> i64 {
        r as i64 - (self.n_t / 2) as i64
    }

    /// Lattice index `m` stored in spectrum column `c`.
    pub fn xi_index(&self, c: usize) -> i64 {
        c as i64 - (self.n_x / 2) as i64
    }

    pub fn xi(&self, c: usize) -> f64 {
        self.dxi() * self.xi_index(c) as f64
    }

    /// Row holding torus frequency `k`, if it is on the lattice.
    pub fn row_of_k(&self, k: i64) -> Option<usize> {
        let r = k + (self.n_t / 2) as i64;
        (0..self.n_t as i64).contains(&r).then_some(r as usize)
    }

    /// Column holding lattice index `m`, if in range.
    pub fn col_of_xi_index(&self, m: i64) -> Option<usize> {
        let c = m + (self.n_x / 2) as i64;
        (0..self.n_x as i64).contains(&c).then_some(c as usize)
    }

    pub fn ts(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_t).map(|l| self.t(l))
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_x).map(|j| self.x(j))
    }

    pub fn ks(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.n_t).map(|r| self.k(r))
    }

    pub fn xis(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_x).map(|c| self.xi(c))
    }
}
