use std::f64::consts::PI;

use cylfourier::transforms::{
    fourier_line, fourier_torus, inv_fourier_line, inv_fourier_torus, inv_mixed, line_derivative,
    mixed_transform, mixed_transform_torus_first, spectral_derivative, torus_derivative, TransformRegistry,
};
use cylfourier::{CylinderGrid, DataKind, SampledField};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Direct O(n^2) evaluation of the mixed transform sums.
fn mixed_by_summation(f: &SampledField) -> Vec<Complex64> {
    let g = *f.grid();
    let mut out = Vec::with_capacity(g.len());
    for r in 0..g.n_t() {
        for col in 0..g.n_x() {
            let (k, xi) = (g.k(r) as f64, g.xi(col));
            let mut acc = c(0.0, 0.0);
            for l in 0..g.n_t() {
                for j in 0..g.n_x() {
                    let phase = -(k * g.t(l) + xi * g.x(j));
                    acc += f.get(l, j) * Complex64::from_polar(1.0, phase);
                }
            }
            out.push(acc * g.dx() / g.n_t() as f64);
        }
    }
    out
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn pseudo_random_field(g: CylinderGrid, seed: u64) -> SampledField {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let values = (0..g.len()).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    SampledField::new(g, values).unwrap()
}

#[test]
fn mixed_transform_matches_direct_summation() {
    let g = CylinderGrid::new(8, 16, 2.5).unwrap();
    let f = pseudo_random_field(g, 7);
    let fast = mixed_transform(&f);
    assert!(max_diff(fast.values(), &mixed_by_summation(&f)) < 1e-12);
}

#[test]
fn gaussian_line_transform_is_gaussian() {
    let g = CylinderGrid::new(8, 512, 16.0).unwrap();
    let f = SampledField::sample(g, |_, x| c((-x * x / 2.0).exp(), 0.0)).unwrap();
    let spec = fourier_line(&f);
    let mut worst = 0.0f64;
    for r in 0..g.n_t() {
        for col in 0..g.n_x() {
            let xi = g.xi(col);
            if xi.abs() <= 6.0 {
                let exact = (2.0 * PI).sqrt() * (-xi * xi / 2.0).exp();
                worst = worst.max((spec.get(r, col) - exact).norm());
            }
        }
    }
    assert!(worst <= 1e-8, "worst {worst:e}");
}

#[test]
fn gaussian_wave_mixed_spectrum_is_single_row() {
    let g = CylinderGrid::new(8, 256, 12.0).unwrap();
    let f = SampledField::sample(g, |t, x| Complex64::from_polar(1.0, t) * (-x * x / 2.0).exp()).unwrap();
    let spec = mixed_transform(&f);
    let row = g.row_of_k(1).unwrap();
    for r in 0..g.n_t() {
        for col in 0..g.n_x() {
            let expected = if r == row { (2.0 * PI).sqrt() * (-g.xi(col).powi(2) / 2.0).exp() } else { 0.0 };
            assert!((spec.get(r, col) - expected).norm() < 1e-10);
        }
    }
}

#[test]
fn plane_wave_on_lattice_is_discrete_delta() {
    let g = CylinderGrid::new(8, 32, PI).unwrap();
    let (k0, m0) = (2i64, 3i64);
    let xi0 = PI / g.half_width() * m0 as f64;
    let f = SampledField::sample(g, |t, x| Complex64::from_polar(1.0 / (2.0 * PI), k0 as f64 * t + xi0 * x)).unwrap();
    let spec = mixed_transform(&f);
    let (r0, c0) = (g.row_of_k(k0).unwrap(), g.col_of_xi_index(m0).unwrap());
    for r in 0..g.n_t() {
        for col in 0..g.n_x() {
            // 2 pi delta / dxi, normalized by the 1/2 pi prefactor
            let expected = if (r, col) == (r0, c0) { 2.0 * g.half_width() / (2.0 * PI) } else { 0.0 };
            assert!((spec.get(r, col) - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn derivatives_of_gaussian_wave() {
    let g = CylinderGrid::new(16, 256, 12.0).unwrap();
    let u = |t: f64, x: f64| Complex64::from_polar(1.0, 2.0 * t) * (-x * x / 2.0).exp();
    let f = SampledField::sample(g, u).unwrap();
    let ut = SampledField::sample(g, |t, x| c(0.0, 2.0) * u(t, x)).unwrap();
    let ux = SampledField::sample(g, |t, x| -x * u(t, x)).unwrap();
    let uxx = SampledField::sample(g, |t, x| (x * x - 1.0) * u(t, x)).unwrap();
    assert!(torus_derivative(&f, 1).max_abs_diff(&ut) < 1e-10);
    assert!(line_derivative(&f, 1).max_abs_diff(&ux) < 1e-10);
    assert!(spectral_derivative(&f, 0, 2).max_abs_diff(&uxx) < 1e-9);
    assert!(spectral_derivative(&f, 1, 1).max_abs_diff(&line_derivative(&ut, 1)) < 1e-9);
}

#[test]
fn registry_round_trips_every_transform() {
    let reg = TransformRegistry::standard();
    let g = CylinderGrid::new(8, 16, 3.0).unwrap();
    let f = pseudo_random_field(g, 11).into_data();
    assert_eq!(reg.names(), vec!["line", "mixed", "torus"]);
    for name in reg.names() {
        let t = reg.get(name).unwrap();
        let spec = t.forward(&f).unwrap();
        assert_eq!(spec.kind, t.spectrum_kind());
        let back = t.inverse(&spec).unwrap();
        assert_eq!(back.kind, DataKind::Field);
        assert!(max_diff(&back.values, &f.values) < 1e-12);
    }
    assert!(reg.get("hankel").is_err());
}

fn arb_field() -> impl Strategy<Value = SampledField> {
    (prop::sample::select(vec![4usize, 8, 16]), prop::sample::select(vec![4usize, 8, 32]), 0.5f64..20.0)
        .prop_flat_map(|(nt, nx, x)| {
            let g = CylinderGrid::new(nt, nx, x).unwrap();
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), g.len())
                .prop_map(move |v| SampledField::new(g, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
        })
}

fn rel(err: f64, scale: f64) -> f64 {
    if scale == 0.0 { err } else { err / scale }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trips_are_identity(f in arb_field()) {
        let s = f.max_abs();
        prop_assert!(rel(inv_fourier_torus(&fourier_torus(&f)).max_abs_diff(&f), s) <= 1e-12);
        prop_assert!(rel(inv_fourier_line(&fourier_line(&f)).max_abs_diff(&f), s) <= 1e-12);
        prop_assert!(rel(inv_mixed(&mixed_transform(&f)).max_abs_diff(&f), s) <= 1e-12);
    }

    #[test]
    fn transforms_commute(f in arb_field()) {
        let a = mixed_transform(&f);
        let b = mixed_transform_torus_first(&f);
        prop_assert!(rel(a.max_abs_diff(&b), a.max_abs().max(1e-300)) <= 1e-12);
    }

    #[test]
    fn discrete_plancherel(f in arb_field()) {
        let g = *f.grid();
        let field_energy: f64 = f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * g.dx() / g.n_t() as f64;
        let spec_energy: f64 = mixed_transform(&f).values().iter().map(|z| z.norm_sqr()).sum::<f64>() * g.dxi() / (2.0 * PI);
        prop_assert!(rel((field_energy - spec_energy).abs(), field_energy) <= 1e-10);
    }

    #[test]
    fn transforms_are_linear(f in arb_field(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let h = f.map(|z| z * c(a, b));
        let lhs = mixed_transform(&h);
        let rhs = mixed_transform(&f).map(|z| z * c(a, b));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn zero_mode_is_mean(f in arb_field()) {
        let g = *f.grid();
        let spec = mixed_transform(&f);
        let (r0, c0) = (g.row_of_k(0).unwrap(), g.col_of_xi_index(0).unwrap());
        let mean: Complex64 = f.values().iter().sum::<Complex64>() * g.dx() / g.n_t() as f64;
        prop_assert!((spec.get(r0, c0) - mean).norm() <= 1e-12 * (1.0 + mean.norm()));
    }
}
