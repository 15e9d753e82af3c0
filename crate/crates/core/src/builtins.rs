//! Closed-form test functions on the cylinder, registered by name.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::grid::CylinderGrid;

/// Parameters shared by the builtins; each function reads what it needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BuiltinParams {
    /// Torus frequency of the `e^{i k0 t}` factor.
    pub k0: i64,
    /// Line frequency of the plane wave.
    pub xi0: f64,
}

impl Default for BuiltinParams {
    fn default() -> Self {
        Self { k0: 1, xi0: 0.0 }
    }
}

pub trait BuiltinFunction: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn check(&self, _params: &BuiltinParams) -> Result<()> {
        Ok(())
    }
    fn eval(&self, params: &BuiltinParams, t: f64, x: f64) -> Complex64;
}

fn phase(k0: i64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, k0 as f64 * t)
}

struct GaussianWave;
struct PlaneWave;
struct LorentzWave;
struct TanBump;
struct ConstantOne;

impl BuiltinFunction for GaussianWave {
    fn name(&self) -> &'static str {
        "gaussian_wave"
    }
    fn describe(&self) -> &'static str {
        "e^{i k0 t} e^{-x^2/2}"
    }
    fn eval(&self, p: &BuiltinParams, t: f64, x: f64) -> Complex64 {
        phase(p.k0, t) * (-x * x / 2.0).exp()
    }
}

impl BuiltinFunction for PlaneWave {
    fn name(&self) -> &'static str {
        "plane_wave"
    }
    fn describe(&self) -> &'static str {
        "e^{i(k0 t + xi0 x)} / 2pi"
    }
    fn check(&self, p: &BuiltinParams) -> Result<()> {
        if !p.xi0.is_finite() {
            return Err(Error::BadParameter(format!("xi0 must be finite, got {}", p.xi0)));
        }
        Ok(())
    }
    fn eval(&self, p: &BuiltinParams, t: f64, x: f64) -> Complex64 {
        Complex64::from_polar(1.0 / (2.0 * PI), p.k0 as f64 * t + p.xi0 * x)
    }
}

impl BuiltinFunction for LorentzWave {
    fn name(&self) -> &'static str {
        "lorentz_wave"
    }
    fn describe(&self) -> &'static str {
        "e^{i k0 t} / (1 + x^2)"
    }
    fn eval(&self, p: &BuiltinParams, t: f64, x: f64) -> Complex64 {
        phase(p.k0, t) / (1.0 + x * x)
    }
}

impl TanBump {
    fn on_pole(t: f64) -> bool {
        // t = pi/2 or 3pi/2 up to rounding of the grid point
        let r = (t - FRAC_PI_2).rem_euclid(PI);
        r < 1e-12 || PI - r < 1e-12
    }
}

impl BuiltinFunction for TanBump {
    fn name(&self) -> &'static str {
        "tanbump"
    }
    fn describe(&self) -> &'static str {
        "tan(t) exp(-1/(1-(x-tan t)^2)) for |x - tan t| < 1, else 0"
    }
    fn eval(&self, _p: &BuiltinParams, t: f64, x: f64) -> Complex64 {
        if Self::on_pole(t) {
            return Complex64::new(0.0, 0.0);
        }
        let tan = t.tan();
        let s = x - tan;
        if s.abs() >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(tan * (-1.0 / (1.0 - s * s)).exp(), 0.0)
    }
}

impl BuiltinFunction for ConstantOne {
    fn name(&self) -> &'static str {
        "constant_one"
    }
    fn describe(&self) -> &'static str {
        "1"
    }
    fn eval(&self, _p: &BuiltinParams, _t: f64, _x: f64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
}

pub struct BuiltinRegistry {
    entries: BTreeMap<&'static str, Box<dyn BuiltinFunction>>,
}

impl BuiltinRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(GaussianWave));
        reg.register(Box::new(PlaneWave));
        reg.register(Box::new(LorentzWave));
        reg.register(Box::new(TanBump));
        reg.register(Box::new(ConstantOne));
        reg
    }

    pub fn register(&mut self, f: Box<dyn BuiltinFunction>) {
        self.entries.insert(f.name(), f);
    }

    pub fn get(&self, name: &str) -> Result<&dyn BuiltinFunction> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownBuiltin(name.into()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

/// Exact point samples of a registered builtin.
pub fn sample_builtin(name: &str, params: &BuiltinParams, grid: CylinderGrid) -> Result<SampledField> {
    let reg = BuiltinRegistry::standard();
    let f = reg.get(name)?;
    f.check(params)?;
    SampledField::sample(grid, |t, x| f.eval(params, t, x))
}

/// Evaluates a builtin at a single point.
pub fn eval_builtin(name: &str, params: &BuiltinParams, t: f64, x: f64) -> Result<Complex64> {
    let reg = BuiltinRegistry::standard();
    let f = reg.get(name)?;
    f.check(params)?;
    Ok(f.eval(params, t, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_one_everywhere() {
        let g = CylinderGrid::new(4, 8, 2.0).unwrap();
        let f = sample_builtin("constant_one", &BuiltinParams::default(), g).unwrap();
        assert!(f.values().iter().all(|&z| z == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn plane_wave_at_origin() {
        let p = BuiltinParams { k0: 1, xi0: 0.0 };
        let z = eval_builtin("plane_wave", &p, 0.0, 0.0).unwrap();
        assert!((z - Complex64::new(1.0 / (2.0 * PI), 0.0)).norm() < 1e-16);
    }

    #[test]
    fn tanbump_zero_at_t_zero_and_poles() {
        let g = CylinderGrid::new(8, 64, 4.0).unwrap();
        let f = sample_builtin("tanbump", &BuiltinParams::default(), g).unwrap();
        assert!(f.row(0).iter().all(|z| z.norm() == 0.0));
        // n_t = 8 puts t = pi/2 at l = 2 and 3pi/2 at l = 6
        assert!(f.row(2).iter().all(|z| z.norm() == 0.0));
        assert!(f.row(6).iter().all(|z| z.norm() == 0.0));
        // peak of the bump sits at x = tan t with height tan(t)/e
        let t = PI / 4.0;
        let v = eval_builtin("tanbump", &BuiltinParams::default(), t, t.tan()).unwrap();
        assert!((v.re - t.tan() / std::f64::consts::E).abs() < 1e-15);
        assert_eq!(eval_builtin("tanbump", &BuiltinParams::default(), t, t.tan() + 1.0).unwrap().re, 0.0);
    }

    #[test]
    fn unknown_and_bad_params() {
        let g = CylinderGrid::new(4, 4, 1.0).unwrap();
        assert!(matches!(
            sample_builtin("sinc", &BuiltinParams::default(), g),
            Err(Error::UnknownBuiltin(_))
        ));
        let p = BuiltinParams { k0: 0, xi0: f64::NAN };
        assert!(matches!(sample_builtin("plane_wave", &p, g), Err(Error::BadParameter(_))));
    }
}
