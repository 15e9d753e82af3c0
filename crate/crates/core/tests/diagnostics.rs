use std::f64::consts::{E, PI};

use cylfourier::builtins::{sample_builtin, BuiltinParams};
use cylfourier::diagnostics::{
    decay_certificate_line, decay_certificate_mixed, decay_certificate_torus, recheck_certificate,
    refinement_divergence_probe, seminorm, seminorm_pn, tempered_growth_check, CertificateFamily,
};
use cylfourier::transforms::mixed_transform;
use cylfourier::{CylinderGrid, MixedSpectrum, SampledField};
use num_complex::Complex64;
use proptest::prelude::*;

fn gaussian(g: CylinderGrid) -> SampledField {
    SampledField::sample(g, |_, x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap()
}

fn grid(nt: usize, nx: usize, x: f64) -> CylinderGrid {
    CylinderGrid::new(nt, nx, x).unwrap()
}

#[test]
fn seminorms_of_constant_one() {
    let f = sample_builtin("constant_one", &BuiltinParams::default(), grid(8, 64, 4.0)).unwrap();
    assert!((seminorm(&f, 0, 0, 0) - 1.0).abs() < 1e-15);
    assert!(seminorm(&f, 1, 0, 0) < 1e-12);
    assert!((seminorm_pn(&f, 0) - 1.0).abs() < 1e-15);
}

#[test]
fn weighted_seminorm_of_gaussian_peaks_at_one() {
    let f = gaussian(grid(8, 512, 16.0));
    assert!((seminorm(&f, 0, 0, 1) - (-0.5f64).exp()).abs() < 1e-6);
}

#[test]
fn p1_of_gaussian_sums_the_four_terms() {
    let f = gaussian(grid(8, 512, 16.0));
    let expected = 1.0 + 0.0 + 2.0 * (-0.5f64).exp();
    assert!((seminorm_pn(&f, 1) - expected).abs() < 1e-6);
}

#[test]
fn zero_field_has_zero_norms_and_certificates() {
    let g = grid(8, 32, 4.0);
    let z = SampledField::zeros(g);
    for n in 0..4 {
        assert_eq!(seminorm_pn(&z, n), 0.0);
        assert_eq!(decay_certificate_mixed(&z, n, 1).c, 0.0);
        assert_eq!(decay_certificate_torus(&z, n, 1).c, 0.0);
        assert_eq!(decay_certificate_line(&z, n, 1, 1).c, 0.0);
    }
}

#[test]
fn plane_wave_moment_grows_with_window() {
    let p = BuiltinParams { k0: 1, xi0: 0.0 };
    for x in [4.0, 8.0, 16.0] {
        let f = sample_builtin("plane_wave", &p, grid(8, 64, x)).unwrap();
        assert!((seminorm(&f, 0, 0, 1) - x / (2.0 * PI)).abs() < 1e-12);
    }
}

/// `max_x (1+x^2)^{N/2} e^{-x^2/2}` is attained at `x^2 = N - 1`.
fn weighted_gaussian_max(n: u32) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    let n = n as f64;
    n.powf(n / 2.0) * (-(n - 1.0) / 2.0).exp()
}

#[test]
fn torus_certificate_of_gaussian_wave_matches_calculus() {
    let g = grid(16, 1024, 16.0);
    for k0 in [0i64, 1, 3] {
        let f = sample_builtin("gaussian_wave", &BuiltinParams { k0, xi0: 0.0 }, g).unwrap();
        for n in 0..=8 {
            let cert = decay_certificate_torus(&f, n, 0);
            let expected = (1.0 + (k0 * k0) as f64).powf(n as f64 / 2.0) * weighted_gaussian_max(n);
            assert!((cert.c / expected - 1.0).abs() < 1e-3, "k0={k0} N={n}: {} vs {expected}", cert.c);
            assert_eq!(cert.argmax_k(), Some(k0));
        }
    }
}

#[test]
fn certificates_of_constant_one() {
    let p = BuiltinParams::default();
    let mut line = Vec::new();
    for (nx, x) in [(64, 4.0), (128, 8.0), (256, 16.0)] {
        let f = sample_builtin("constant_one", &p, grid(8, nx, x)).unwrap();
        let t0 = decay_certificate_torus(&f, 0, 0);
        assert!((t0.c - 1.0).abs() < 1e-12);
        assert_eq!(t0.argmax_k(), Some(0));
        line.push(decay_certificate_line(&f, 1, 0, 0).c);
    }
    // the line transform of 1 is a discrete delta of height 2X
    assert!((line[0] - 8.0).abs() < 1e-9);
    assert!(line.windows(2).all(|w| w[1] > 1.9 * w[0]));
}

#[test]
fn high_order_certificate_ignores_roundoff() {
    // sup of 2^4 (1+xi^2)^4 sqrt(2 pi) e^{-xi^2/2} sits at xi^2 = 7: 16 sqrt(2 pi) 8^4 e^{-7/2}
    let exact = 16.0 * (2.0 * PI).sqrt() * 8f64.powi(4) * (-3.5f64).exp();
    for (nx, x) in [(256, 8.0), (512, 16.0), (1024, 32.0)] {
        let f = sample_builtin("gaussian_wave", &BuiltinParams::default(), grid(16, nx, x)).unwrap();
        let cert = decay_certificate_mixed(&f, 8, 0);
        assert!((cert.c / exact - 1.0).abs() < 0.02, "{nx} {x}: {} vs {exact}", cert.c);
        assert_eq!(cert.argmax_k(), Some(1));
        assert!(recheck_certificate(&cert, &f).unwrap().is_empty());
    }
}

#[test]
fn certificate_json_record() {
    let f = sample_builtin("gaussian_wave", &BuiltinParams::default(), grid(8, 64, 6.0)).unwrap();
    let cert = decay_certificate_mixed(&f, 2, 1);
    let v = serde_json::to_value(&cert).unwrap();
    assert_eq!(v["type"], "mixed");
    assert_eq!(v["N"], 2);
    assert_eq!(v["beta"], 1);
    assert_eq!(v["argmax_k"], 1);
    assert!(v["argmax_xi_index"].is_i64());
    assert_eq!(v["grid"]["n_t"], 8);
    assert_eq!(v["grid"]["X"], 6.0);
    assert_eq!(cert.family, CertificateFamily::Mixed);
}

#[test]
fn growth_check_examples() {
    let g = grid(8, 64, 4.0);
    let zero = MixedSpectrum::zeros(g);
    assert!(tempered_growth_check(&zero, 0.0, 0).unwrap().holds);

    let one = mixed_transform(&sample_builtin("constant_one", &BuiltinParams::default(), g).unwrap());
    let height = one.max_abs();
    assert!((height - 2.0 * g.half_width()).abs() < 1e-12);
    assert!(tempered_growth_check(&one, height, 0).unwrap().holds);
    let below = tempered_growth_check(&one, height * (1.0 - 1e-9), 0).unwrap();
    assert!(!below.holds);
    let worst = below.worst.unwrap();
    assert_eq!((worst.k, worst.xi_index), (0, 0));

    let gauss = mixed_transform(&sample_builtin("gaussian_wave", &BuiltinParams::default(), g).unwrap());
    assert!(tempered_growth_check(&gauss, gauss.max_abs(), 0).unwrap().holds);
    assert!(tempered_growth_check(&gauss, -1.0, 0).is_err());
}

#[test]
fn tanbump_probe_diverges() {
    let ladder: Vec<_> = [16, 64, 256].iter().map(|&nt| grid(nt, 512, 64.0)).collect();
    let p0 = refinement_divergence_probe("tanbump", &BuiltinParams::default(), &ladder).unwrap();
    assert!(p0.windows(2).all(|w| w[1] > w[0]), "{p0:?}");
    assert!(*p0.last().unwrap() > 10.0);
    // closed form |tan t| / e at the grid time nearest the pole
    for (g, v) in ladder.iter().zip(&p0) {
        let t = g.t(g.n_t() / 4 - 1);
        let expected = t.tan().abs() / E;
        assert!((v / expected - 1.0).abs() < 0.01, "{v} vs {expected}");
    }
}

#[test]
fn smooth_probes_stay_flat() {
    let ladder: Vec<_> = [16, 64, 256].iter().map(|&nt| grid(nt, 128, 8.0)).collect();
    let gauss = refinement_divergence_probe("gaussian_wave", &BuiltinParams::default(), &ladder).unwrap();
    assert!(gauss.iter().all(|v| (v - gauss[0]).abs() < 1e-6));
    let one = refinement_divergence_probe("constant_one", &BuiltinParams::default(), &ladder).unwrap();
    assert!(one.iter().all(|v| (v - 1.0).abs() < 1e-15));
    assert!(refinement_divergence_probe("constant_one", &BuiltinParams::default(), &[ladder[1], ladder[0]]).is_err());
}

fn arb_smooth_field() -> impl Strategy<Value = SampledField> {
    (-3i64..=3, 0.5f64..2.0, -2.0f64..2.0, 0.0f64..1.0).prop_map(|(k0, w, shift, im)| {
        SampledField::sample(grid(8, 128, 10.0), move |t, x| {
            Complex64::from_polar(1.0, k0 as f64 * t) * Complex64::new(1.0, im) * (-(x - shift).powi(2) / (2.0 * w * w)).exp()
        })
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_monotone_in_order_and_recheckable(f in arb_smooth_field(), beta in 0u32..3) {
        let mut prev = [0.0f64; 3];
        for n in 0..6 {
            let certs = [decay_certificate_mixed(&f, n, beta), decay_certificate_torus(&f, n, beta), decay_certificate_line(&f, n, 1, beta)];
            for (i, cert) in certs.iter().enumerate() {
                prop_assert!(cert.c >= 0.0);
                prop_assert!(cert.c >= prev[i]);
                prev[i] = cert.c;
                prop_assert!(recheck_certificate(cert, &f).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn growth_check_is_monotone(f in arb_smooth_field(), c in 0.0f64..5.0, n in 0u32..4, dc in 0.0f64..3.0, dn in 0u32..3) {
        let spec = mixed_transform(&f);
        if tempered_growth_check(&spec, c, n).unwrap().holds {
            prop_assert!(tempered_growth_check(&spec, c + dc, n + dn).unwrap().holds);
        }
    }
}
