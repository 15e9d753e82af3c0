use cylfourier::operator::DifferentialOperator;
use cylfourier::poly::CPoly;
use cylfourier::scalar::{int, rat, rat_to_f64};
use cylfourier::symbol::{
    brute_force_min_near, brute_force_min_symbol, decide_sgh, decide_sgh_first_order, decide_sgh_separable, gap_estimate,
    symbol_of, witness_verify, DeciderRegistry, GapKind, Method, ScanBox, Symbol, Verdict, Witness,
};
use cylfourier::{ComplexRational, Error, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

fn cr(re: Rational, im: Rational) -> ComplexRational {
    ComplexRational::new(re, im)
}

fn ci(re: i64, im: i64) -> ComplexRational {
    ComplexRational::from_ints(re, im)
}

fn first(c1: ComplexRational, c2: ComplexRational, c3: ComplexRational) -> DifferentialOperator {
    DifferentialOperator::first_order(c1, c2, c3).unwrap()
}

fn real_poly(cs: &[Rational]) -> CPoly {
    CPoly::new(&cs.iter().cloned().map(ComplexRational::real).collect::<Vec<_>>())
}

fn sweep_values() -> Vec<Rational> {
    let mut v: Vec<Rational> = (-3..=3).map(int).collect();
    v.extend([rat(1, 2), rat(-1, 2), rat(3, 2), rat(-3, 2)]);
    v
}

#[test]
fn transport_operator_is_not_sgh() {
    let report = decide_sgh_first_order(&ci(1, 0), &ci(1, 0), &ci(0, 0)).unwrap();
    assert_eq!(report.verdict, Verdict::NotSgh);
    let w = report.witness.unwrap();
    assert_eq!((w.k, w.xi_lo.clone(), w.xi_hi.clone()), (0, int(0), int(0)));
    assert!(report.gap.is_none());
}

#[test]
fn symbol_forms() {
    let s = symbol_of(&first(ci(1, 0), ci(1, 0), ci(0, 0))).unwrap();
    let f = s.evaluator();
    assert_eq!(f(3, -1.5), Complex64::new(1.5, 0.0));
    let s = symbol_of(&first(ci(1, 0), ci(0, 0), ci(0, 0))).unwrap();
    assert_eq!(s.evaluator()(4, 7.0), Complex64::new(4.0, 0.0));
    // i * form reproduces the action of Dt + 2 Dx + 3 on e^{i(k t + xi x)}
    let s = symbol_of(&first(ci(1, 0), ci(2, 0), ci(3, 0))).unwrap();
    let (k, xi) = (2i64, 0.75);
    let action = Complex64::new(0.0, k as f64) + 2.0 * Complex64::new(0.0, xi) + 3.0;
    assert!((Complex64::i() * s.evaluator()(k, xi) - action).norm() < 1e-14);
}

#[test]
fn variable_operator_has_no_constant_symbol() {
    let op = DifferentialOperator::first_order_variable(
        cylfourier::trig::TrigPolynomial::sin(1),
        cylfourier::trig::TrigPolynomial::zero(),
    )
    .unwrap();
    assert!(matches!(symbol_of(&op), Err(Error::Precondition(_))));
}

/// SGH conditions for `Dt + (a+ib) Dx + q`, written out case by case.
fn bullets_l(a: &Rational, b: &Rational, re_q: &Rational, im_q: &Rational) -> bool {
    if !b.is_zero() {
        !(a * re_q / b + im_q).is_integer()
    } else if !re_q.is_zero() {
        true
    } else {
        a.is_zero() && !im_q.is_integer()
    }
}

/// SGH conditions for `(a+ib) Dt + Dx + q`.
fn bullets_l_tilde(b: &Rational, re_q: &Rational) -> bool {
    if !b.is_zero() {
        !(re_q / b).is_integer()
    } else {
        !re_q.is_zero()
    }
}

#[test]
fn bullet_sweep_for_l_and_l_tilde() {
    let vals = sweep_values();
    let mut cases = 0;
    for a in &vals {
        for b in &vals {
            for re_q in &vals {
                for im_q in &vals {
                    let c = cr(a.clone(), b.clone());
                    let q = cr(re_q.clone(), im_q.clone());
                    let l = decide_sgh_first_order(&ci(1, 0), &c, &q).unwrap();
                    assert_eq!(l.is_sgh(), bullets_l(a, b, re_q, im_q), "L: a={a} b={b} q={q}");
                    let lt = decide_sgh_first_order(&c, &ci(1, 0), &q).unwrap();
                    assert_eq!(lt.is_sgh(), bullets_l_tilde(b, re_q), "L~: a={a} b={b} q={q}");
                    l.check_invariants().unwrap();
                    lt.check_invariants().unwrap();
                    cases += 2;
                }
            }
        }
    }
    assert_eq!(cases, 2 * 11usize.pow(4));
}

#[test]
fn integer_example_and_gcd_discrepancy() {
    // a = 1, b = 2, q = 1: a Re(q)/b + Im(q) = 1/2
    assert!(decide_sgh_first_order(&ci(1, 0), &ci(1, 2), &ci(1, 0)).unwrap().is_sgh());
    // a = b = 2, q = 1: b divides neither Re q nor is a Re q / b = 1 non-integer
    assert!(!decide_sgh_first_order(&ci(1, 0), &ci(2, 2), &ci(1, 0)).unwrap().is_sgh());
    // L~ with b = 0 and Re q = 0
    assert!(!decide_sgh_first_order(&ci(2, 0), &ci(1, 0), &ci(0, 3)).unwrap().is_sgh());
}

#[test]
fn first_order_gaps_are_closed_form() {
    let r = decide_sgh_first_order(&ci(1, 0), &ci(0, 1), &cr(int(0), rat(1, 2))).unwrap();
    let gap = r.gap.unwrap();
    assert_eq!((gap.value, gap.kind), (rat(1, 2), GapKind::Exact));
    // Dt + Dx + 1: |k + xi - i| >= 1
    let gap = decide_sgh_first_order(&ci(1, 0), &ci(1, 0), &ci(1, 0)).unwrap().gap.unwrap();
    assert_eq!((gap.value, gap.kind), (int(1), GapKind::Exact));
    // Dt + i/3: |k + 1/3| >= 1/3
    let gap = decide_sgh_first_order(&ci(1, 0), &ci(0, 0), &cr(int(0), rat(1, 3))).unwrap().gap.unwrap();
    assert_eq!(gap.value, rat(1, 3));
}

#[test]
fn first_order_rejects_degenerate() {
    assert!(matches!(decide_sgh_first_order(&ci(0, 0), &ci(0, 0), &ci(1, 0)), Err(Error::InvalidOperator(_))));
}

#[test]
fn separable_examples() {
    let p = real_poly(&[int(1), int(0), int(1)]);
    let q = real_poly(&[int(0), int(0), int(-1)]);
    let r = decide_sgh_separable(&p, &q).unwrap();
    assert_eq!(r.verdict, Verdict::NotSgh);
    assert_eq!(r.method, Method::SeparablePolyDecision);
    let w = r.witness.unwrap();
    assert_eq!(w.k.abs(), 1);
    assert_eq!((w.xi_lo, w.xi_hi), (int(0), int(0)));

    let p = real_poly(&[int(0), int(0), int(1)]);
    let q = real_poly(&[rat(1, 2), int(0), int(1)]);
    let r = decide_sgh_separable(&p, &q).unwrap();
    assert_eq!(r.verdict, Verdict::Sgh);
    let gap = r.gap.unwrap();
    assert_eq!(gap.value, rat(1, 2));
    assert_eq!(gap.kind, GapKind::Estimate);

    let xi = real_poly(&[int(0), int(1)]);
    assert!(!decide_sgh_separable(&xi, &xi).unwrap().is_sgh());
}

#[test]
fn separable_with_imaginary_parts() {
    // p = xi^2 + i xi + 1, q = 2k: needs xi = 0 and 2k = -1
    let p = CPoly::new(&[ci(1, 0), ci(0, 1), ci(1, 0)]);
    let q = real_poly(&[int(0), int(2)]);
    assert!(decide_sgh_separable(&p, &q).unwrap().is_sgh());
    // q = k instead: zero at k = -1, xi = 0
    let q = real_poly(&[int(0), int(1)]);
    let w = decide_sgh_separable(&p, &q).unwrap().witness.unwrap();
    assert_eq!((w.k, w.xi_lo, w.xi_hi), (-1, int(0), int(0)));
    // p real, q = k^2 + i(k - 2): Im q vanishes only at k = 2, then xi^2 - 5 + 4 has roots
    let p = real_poly(&[int(-5), int(0), int(1)]);
    let q = CPoly::new(&[ci(0, -2), ci(0, 1), ci(1, 0)]);
    let w = decide_sgh_separable(&p, &q).unwrap().witness.unwrap();
    assert_eq!(w.k, 2);
    assert!(rat_to_f64(&w.xi_lo) <= -1.0 + 1e-12 || rat_to_f64(&w.xi_hi) >= 1.0 - 1e-12);
    // irrational zero: xi^2 - 2 + k at k = 0 needs an isolating interval
    let p = real_poly(&[int(-2), int(0), int(1)]);
    let q = real_poly(&[int(0), int(1), int(0), int(1)]);
    let w = decide_sgh_separable(&p, &q).unwrap().witness.unwrap();
    assert!(w.xi_lo < w.xi_hi);
    assert!((w.xi_approx().abs() - 2f64.sqrt()).abs() < 1e-12 || w.k != 0);
}

#[test]
fn separable_errors() {
    let c = real_poly(&[int(3)]);
    let xi = real_poly(&[int(0), int(1)]);
    assert!(matches!(decide_sgh_separable(&c, &xi), Err(Error::InvalidOperator(_))));
    let cplx = CPoly::new(&[ci(0, 1), ci(1, 1)]);
    assert!(matches!(decide_sgh_separable(&cplx, &cplx), Err(Error::InvalidOperator(_))));
}

#[test]
fn first_order_embedding_agrees_with_closed_form() {
    let vals = [int(0), int(1), int(-2), rat(1, 2), rat(-3, 2)];
    for a in &vals {
        for b in &vals {
            for c in &vals {
                if a.is_zero() {
                    // p(xi) = -i c3 would be constant
                    continue;
                }
                // c1 = 1 real keeps q(k) = k real
                let op = first(ci(1, 0), cr(a.clone(), int(0)), cr(b.clone(), c.clone()));
                let closed = DeciderRegistry::standard().decide_with("first-order-closed-form", &op).unwrap();
                let sep = DeciderRegistry::standard().decide_with("separable-poly-decision", &op).unwrap();
                assert_eq!(closed.verdict, sep.verdict, "{op}");
            }
        }
    }
}

#[test]
fn gap_estimate_examples() {
    let sym = Symbol::Separable { p: real_poly(&[int(0), int(0), int(1)]), q: real_poly(&[rat(1, 2), int(0), int(1)]) };
    let est = gap_estimate(&sym, Verdict::Sgh, &ScanBox::new(10, 10.0, 20001).unwrap()).unwrap();
    assert!((est.estimate - 0.5).abs() < 1e-12);
    assert!(est.tail.unwrap() > 0.5);
    let lower = est.rigorous_lower.unwrap();
    assert!(lower > 0.45 && lower <= 0.5);

    let sym = symbol_of(&first(ci(1, 0), ci(0, 1), cr(int(0), rat(1, 2)))).unwrap();
    let est = gap_estimate(&sym, Verdict::Sgh, &ScanBox::new(10, 10.0, 20001).unwrap()).unwrap();
    assert!((est.estimate - 0.5).abs() < 1e-12);

    let sym = symbol_of(&first(ci(1, 0), ci(1, 0), ci(0, 0))).unwrap();
    assert!(matches!(gap_estimate(&sym, Verdict::NotSgh, &ScanBox::new(5, 5.0, 101).unwrap()), Err(Error::Precondition(_))));
    // claiming SGH for a symbol with a lattice zero trips the alarm
    assert!(matches!(gap_estimate(&sym, Verdict::Sgh, &ScanBox::new(5, 5.0, 101).unwrap()), Err(Error::Inconsistency(_))));
}

#[test]
fn brute_force_examples() {
    let sym = symbol_of(&first(ci(1, 0), ci(1, 0), ci(0, 0))).unwrap();
    let m = brute_force_min_symbol(&sym, &ScanBox::new(5, 5.0, 101).unwrap());
    assert_eq!((m.min, m.k, m.xi), (0.0, 0, 0.0));

    let sym = symbol_of(&first(ci(1, 0), ci(0, 1), cr(int(0), rat(1, 2)))).unwrap();
    let m = brute_force_min_symbol(&sym, &ScanBox::new(5, 5.0, 101).unwrap());
    assert!((m.min - 0.5).abs() < 1e-12);

    let sym = Symbol::Separable { p: real_poly(&[int(1), int(0), int(1)]), q: real_poly(&[int(0), int(0), int(-1)]) };
    let m = brute_force_min_symbol(&sym, &ScanBox::new(5, 5.0, 101).unwrap());
    assert!(m.min < 1e-12 && m.k.abs() == 1 && m.xi.abs() < 1e-12);
    let near = brute_force_min_near(&sym, 1, 0.0, 1e-3, 11);
    assert!(near.min < 1e-12);
    assert!(ScanBox::new(-1, 1.0, 10).is_err());
}

#[test]
fn witness_verification() {
    let op = first(ci(1, 0), ci(1, 0), ci(0, 0));
    let canonical = symbol_of(&op).unwrap().canonical();
    let w = |k, xi: Rational| Witness { k, xi_lo: xi.clone(), xi_hi: xi, symbol: canonical.clone() };
    assert!(witness_verify(&op, &w(0, int(0))).unwrap());
    assert!(!witness_verify(&op, &w(0, int(1))).unwrap());
    assert!(witness_verify(&op, &w(3, int(-3))).unwrap());

    let sep = DifferentialOperator::separable(real_poly(&[int(1), int(0), int(1)]), real_poly(&[int(0), int(0), int(-1)])).unwrap();
    let good = Witness { k: 1, xi_lo: int(0), xi_hi: int(0), symbol: symbol_of(&sep).unwrap().canonical() };
    assert!(witness_verify(&sep, &good).unwrap());
    assert!(matches!(witness_verify(&op, &good), Err(Error::StaleWitness { .. })));
}

#[test]
fn report_json_shape() {
    let r = decide_sgh(&first(ci(1, 0), ci(1, 0), ci(0, 0))).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["verdict"], "NotSGH");
    assert_eq!(v["method"], "first-order-closed-form");
    assert_eq!(v["witness"]["k"], 0);
    assert_eq!(v["witness"]["xi_lo"], "0");
    assert!(v["gap"].is_null());
    assert!(v["normal_form"].is_null());

    let r = decide_sgh(&first(ci(1, 0), ci(0, 1), cr(int(0), rat(1, 2)))).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["verdict"], "SGH");
    assert_eq!((v["gap"]["num"].as_str(), v["gap"]["den"].as_str()), (Some("1"), Some("2")));
    assert_eq!(v["gap"]["kind"], "exact");
}

#[test]
fn registry_names_and_selection() {
    let reg = DeciderRegistry::standard();
    assert_eq!(reg.names(), vec!["first-order-closed-form", "separable-poly-decision", "conjugated-to-constant"]);
    assert!(reg.get("bogus").is_err());
    let sep = DifferentialOperator::separable(real_poly(&[int(0), int(1)]), real_poly(&[int(0), int(1)])).unwrap();
    assert_eq!(reg.decide(&sep).unwrap().method, Method::SeparablePolyDecision);
    assert!(reg.decide_with("first-order-closed-form", &sep).is_err());
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, prop::sample::select(vec![1i64, 2, 3, 4])).prop_map(|(n, d)| rat(n, d))
}

fn arb_complex() -> impl Strategy<Value = ComplexRational> {
    (arb_rational(), arb_rational()).prop_map(|(a, b)| cr(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verdict_is_scale_invariant(c1 in arb_complex(), c2 in arb_complex(), c3 in arb_complex(), l in arb_complex()) {
        prop_assume!(!(c1.is_zero() && c2.is_zero()) && !l.is_zero());
        let base = decide_sgh_first_order(&c1, &c2, &c3).unwrap();
        let scaled = decide_sgh_first_order(&(&l * &c1), &(&l * &c2), &(&l * &c3)).unwrap();
        prop_assert_eq!(base.verdict, scaled.verdict);
    }

    #[test]
    fn decisions_are_deterministic_and_well_formed(c1 in arb_complex(), c2 in arb_complex(), c3 in arb_complex()) {
        prop_assume!(!(c1.is_zero() && c2.is_zero()));
        let a = decide_sgh_first_order(&c1, &c2, &c3).unwrap();
        let b = decide_sgh_first_order(&c1, &c2, &c3).unwrap();
        prop_assert_eq!(&a, &b);
        a.check_invariants().unwrap();
        let op = DifferentialOperator::first_order(c1, c2, c3).unwrap();
        let sym = symbol_of(&op).unwrap();
        match a.verdict {
            Verdict::NotSgh => {
                let w = a.witness.unwrap();
                prop_assert!(witness_verify(&op, &w).unwrap());
                let v = sym.eval_exact(&BigInt::from(w.k), &w.xi_lo);
                prop_assert!(v.is_zero());
            }
            Verdict::Sgh => {
                let gap = rat_to_f64(&a.gap.unwrap().value);
                let m = brute_force_min_symbol(&sym, &ScanBox::new(8, 8.0, 1601).unwrap());
                prop_assert!(m.min >= gap - 1e-12, "scan {} below gap {}", m.min, gap);
            }
        }
    }

    #[test]
    fn tilde_verdict_ignores_a_and_im_q(b in arb_rational(), re_q in arb_rational(), a1 in arb_rational(), a2 in arb_rational(), i1 in arb_rational(), i2 in arb_rational()) {
        let one = ci(1, 0);
        let v1 = decide_sgh_first_order(&cr(a1, b.clone()), &one, &cr(re_q.clone(), i1)).unwrap().verdict;
        let v2 = decide_sgh_first_order(&cr(a2, b), &one, &cr(re_q, i2)).unwrap().verdict;
        prop_assert_eq!(v1, v2);
    }
}
