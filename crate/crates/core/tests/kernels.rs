mod common;

use std::f64::consts::PI;

use mixedbf::exterior::{Combo, Coord, CoordKind, FormExpression, Generator, Monomial, Word};
use mixedbf::kernels::{
    dz_minus_zeta, gauge_differential, gauge_fix_adjoint, heat_function, heat_kernel,
    heat_kernel_diag, image_kernel, image_propagator_integrand, image_star, lambda_frozen,
    laplacian, product_gaussian, product_propagator, product_propagator_via_lambda,
    propagator_diag, propagator_integrand, pull_to_pair, zeta, ScaleVector, Variant, LAMBDA_C1,
    LAMBDA_C2,
};
use mixedbf::ratfn::{q, qf, RatFn, Symbol};
use num_complex::Complex64;
use proptest::prelude::*;

fn unit(_: Symbol) -> f64 {
    1.0
}

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn word(gens: &[Generator]) -> (i32, Word) {
    Word::from_gens(gens).unwrap()
}

fn heat(z: Complex64, t: f64, s: f64) -> f64 {
    (4.0 * PI * s).powf(-1.5) * (-(z.norm_sqr() + t * t) / (4.0 * s)).exp()
}

#[test]
fn heat_kernel_on_the_diagonal() {
    let k = heat_kernel(Symbol::t(0));
    let (sign, w) = word(&[Generator::dzbar(0), Generator::dz(0), Generator::dt(0)]);
    let p = [(c(0.4, -0.3), 0.7), (c(0.4, -0.3), 0.7)];
    let v = k.expression.evaluate(&p, &unit, &w).unwrap() * sign as f64;
    assert!(common::close(v.re, (4.0 * PI).powf(-1.5), 1e-14), "{v}");
}

#[test]
fn heat_mass_is_one() {
    for s in [0.3f64, 1.0, 2.5] {
        let k = heat_function(Symbol::t(0));
        let scales = |_: Symbol| s;
        let r = 12.0 * s.sqrt();
        let f = |x: f64, y: f64, t: f64| {
            k.evaluate(&[(c(x, y), t)], &scales, &Word::empty())
                .unwrap()
                .re
        };
        let mass = common::gl(-r, r, 8, |x| {
            common::gl(-r, r, 8, |y| common::gl(-r, r, 8, |t| f(x, y, t)))
        });
        assert!((mass - 1.0).abs() < 1e-9, "T = {s}: {mass}");
    }
}

#[test]
fn heat_kernel_is_symmetric() {
    let k = pull_to_pair(&heat_function(Symbol::t(0)), Variant::Bulk);
    let (a, b) = ((c(0.3, 1.2), -0.4), (c(-0.8, 0.1), 0.9));
    let ab = k.evaluate(&[a, b], &unit, &Word::empty()).unwrap();
    let ba = k.evaluate(&[b, a], &unit, &Word::empty()).unwrap();
    assert!((ab - ba).norm() < 1e-16);
}

#[test]
fn propagator_shape() {
    let e = propagator_diag(Symbol::t(0));
    let origin = [(c(0.0, 0.0), 0.0)];
    for (key, _) in e.terms() {
        let gens = key.word.gens();
        assert!(gens.contains(&Generator::dz(0)), "{}", key.word);
        assert_eq!(gens.iter().filter(|g| **g != Generator::dz(0)).count(), 1);
        assert!(e.evaluate(&origin, &unit, &key.word).unwrap().norm() == 0.0);
    }
}

/// `Q* K` written out with central differences of the closed-form heat kernel.
#[test]
fn gauge_fix_against_finite_differences() {
    let t = Symbol::t(0);
    let e = gauge_fix_adjoint(&heat_kernel_diag(t), 0);
    assert_eq!(e, propagator_diag(t));
    let s = 0.8;
    let scales = |_: Symbol| s;
    let h = 1e-5;
    let (sdt, w_dt) = word(&[Generator::dz(0), Generator::dt(0)]);
    let (sdzb, w_dzb) = word(&[Generator::dzbar(0), Generator::dz(0)]);
    // K = k dzbar dz dt: contracting dzbar gives 4 dk/dz dz dt; contracting dt gives dk/dt dzbar dz
    for (z, tt) in [(c(0.3, -0.5), 0.2), (c(-1.0, 0.7), -0.6)] {
        let dk_dz = ((heat(z + h, tt, s) - heat(z - h, tt, s))
            - Complex64::i() * (heat(z + c(0.0, h), tt, s) - heat(z - c(0.0, h), tt, s)))
            / (4.0 * h);
        let dk_dt = (heat(z, tt + h, s) - heat(z, tt - h, s)) / (2.0 * h);
        let got_dt = e.evaluate(&[(z, tt)], &scales, &w_dt).unwrap() * sdt as f64;
        let got_dzb = e.evaluate(&[(z, tt)], &scales, &w_dzb).unwrap() * sdzb as f64;
        assert!(
            (got_dt - 4.0 * dk_dz).norm() < 1e-8,
            "{got_dt} vs {}",
            4.0 * dk_dz
        );
        assert!((got_dzb - dk_dt).norm() < 1e-8, "{got_dzb} vs {dk_dt}");
    }
}

#[test]
fn gauge_laplacian_on_scalars() {
    let t = Symbol::t(0);
    let samples = [
        heat_function(t),
        heat_function(t).mul_monomial(&Monomial::from_pairs([(Coord::z(0), 2), (Coord::t(0), 1)])),
        FormExpression::coord(Coord::zbar(0))
            .mul_monomial(&Monomial::from_pairs([(Coord::z(0), 3), (Coord::t(0), 2)])),
    ];
    for f in samples {
        let lhs = gauge_differential(&gauge_fix_adjoint(&f, 0), 0)
            .add(&gauge_fix_adjoint(&gauge_differential(&f, 0), 0));
        // independent Laplacian: 4 d/dz d/dzbar + d^2/dt^2 by repeated derive
        let rhs = f
            .derive(Coord::zbar(0))
            .derive(Coord::z(0))
            .scale(&RatFn::int(4))
            .add(&f.derive_n(Coord::t(0), 2));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, laplacian(&f, 0));
    }
}

#[test]
fn lambda_constants_are_pinned() {
    assert_eq!((LAMBDA_C1, LAMBDA_C2), (1, -4));
    let t = Symbol::t(0);
    assert_eq!(
        lambda_frozen(0).apply(&gaussian_form_local(t)),
        propagator_diag(t)
    );
}

fn gaussian_form_local(t: Symbol) -> FormExpression {
    heat_function(t)
        .wedge(&FormExpression::generator(Generator::dz(0)))
        .unwrap()
}

#[test]
fn product_propagator_from_lambda() {
    for n in [2usize, 3] {
        let tv = ScaleVector::symbolic(n + 1).unwrap();
        let via = product_propagator_via_lambda(&tv, &q(LAMBDA_C1), &q(LAMBDA_C2)).unwrap();
        assert_eq!(via, product_propagator(&tv).unwrap(), "n = {n}");
    }
}

#[test]
fn single_difference_product_gaussian() {
    let tv = ScaleVector::numeric(&[0.6, 1.7]).unwrap();
    let g = product_gaussian(&tv).unwrap();
    for (z, t) in [(c(0.2, 0.5), -0.3), (c(1.4, -0.9), 0.8)] {
        let v = g
            .evaluate(&[(z, t)], &tv.lookup(), &Word::empty())
            .unwrap()
            .re;
        assert!(common::close(v, heat(z, t, 0.6) * heat(z, t, 1.7), 1e-13));
    }
}

#[test]
fn product_gaussian_exponent() {
    let tv = ScaleVector::numeric(&[1.0, 1.0, 1.0]).unwrap();
    let g = product_gaussian(&tv).unwrap();
    let origin = [(c(0.0, 0.0), 0.0), (c(0.0, 0.0), 0.0)];
    let g0 = g
        .evaluate(&origin, &tv.lookup(), &Word::empty())
        .unwrap()
        .re;
    let (q0, q1) = ((c(0.3, -0.7), 0.4), (c(-1.1, 0.2), 0.5));
    let v = g
        .evaluate(&[q0, q1], &tv.lookup(), &Word::empty())
        .unwrap()
        .re;
    let sq = |z: Complex64, t: f64| z.norm_sqr() + t * t;
    let want = (-(sq(q0.0, q0.1) + sq(q1.0, q1.1) + sq(q0.0 + q1.0, q0.1 + q1.1)) / 4.0).exp();
    assert!(common::close(v / g0, want, 1e-13));
}

#[test]
fn zeta_at_one_one_two() {
    let tv = ScaleVector::symbolic(3).unwrap();
    let g = product_gaussian(&tv).unwrap();
    let lhs = zeta(&tv).unwrap().apply(&g);
    let vals = [1.0, 1.0, 2.0];
    let scales = |s: Symbol| vals[s.0 as usize];
    for p in [
        [(c(0.3, 0.2), 0.1), (c(-0.5, 0.4), 0.6)],
        [(c(1.0, -1.0), -0.2), (c(0.1, 0.9), 0.3)],
    ] {
        let got = lhs.evaluate(&p, &scales, &Word::empty()).unwrap();
        let gv = g.evaluate(&p, &scales, &Word::empty()).unwrap();
        let want = -(p[0].0.conj() + p[1].0.conj()) / 8.0 * gv;
        assert!((got - want).norm() < 1e-15, "{got} vs {want}");
    }
}

#[test]
fn clever_operator_isolates_each_slot() {
    for n in 2..=4usize {
        let tv = ScaleVector::symbolic(n + 1).unwrap();
        let g = product_gaussian(&tv).unwrap();
        let t0 = RatFn::var(Symbol::t(0));
        let want = g
            .mul_monomial(&Monomial::var(Coord::zbar(0)))
            .scale(&(&RatFn::constant(qf(-1, 4)) / &t0));
        assert_eq!(dz_minus_zeta(0, &tv).unwrap().apply(&g), want, "n = {n}");
    }
}

#[test]
fn zeta_without_gaussian_is_weighted_derivative() {
    let tv = ScaleVector::symbolic(3).unwrap();
    let f = FormExpression::coord(Coord::z(0))
        .mul_monomial(&Monomial::from_pairs([(Coord::z(1), 2), (Coord::t(0), 1)]));
    let sum = RatFn::poly(mixedbf::ratfn::Poly::sum_of(tv.symbols().iter().copied()));
    let w = |i: usize| &RatFn::var(Symbol::t(i)) / &sum;
    let want = f
        .derive(Coord::z(0))
        .scale(&w(0))
        .add(&f.derive(Coord::z(1)).scale(&w(1)));
    assert_eq!(zeta(&tv).unwrap().apply(&f), want);
}

#[test]
fn chiral_heat_kernel_vanishes_on_the_boundary() {
    let t = Symbol::t(0);
    let f = pull_to_pair(&heat_function(t), Variant::Bulk)
        .sub(&pull_to_pair(&heat_function(t), Variant::Image));
    let k = image_kernel(t).expression;
    let (sign, w) = word(&[Generator::dzbar(0), Generator::dz(0), Generator::dt(0)]);
    for (tt, s) in [(0.0, 0.7), (1.3, 0.0)] {
        let p = [(c(0.2, 0.1), tt), (c(-0.4, 0.5), s)];
        assert!(f.evaluate(&p, &unit, &Word::empty()).unwrap().norm() < 1e-17);
        assert!(k.evaluate(&p, &unit, &w).unwrap().norm() * (sign as f64).abs() < 1e-17);
    }
}

#[test]
fn image_star_is_odd() {
    let e = image_star(Symbol::t(0));
    assert_eq!(e.reflect_time(&[0, 1], 2), e.neg());
}

#[test]
fn image_propagator_far_from_boundary() {
    let tilde = image_propagator_integrand(Symbol::t(0)).expression;
    let bulk = propagator_integrand(Symbol::t(0)).expression;
    let s = 1.0f64;
    for (tt, ss) in [(2.0, 3.0), (4.0, 2.5)] {
        let p = [(c(0.3, -0.2), tt), (c(-0.1, 0.4), ss)];
        let bound = (-((tt + ss) * (tt + ss)) / (4.0 * s)).exp();
        for (key, _) in tilde.terms() {
            let d = tilde.evaluate(&p, &unit, &key.word).unwrap()
                - bulk.evaluate(&p, &unit, &key.word).unwrap();
            assert!(d.norm() <= bound, "{}: {} > {bound}", key.word, d.norm());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Constant-coefficient operators graded-commute on arbitrary polynomial
    /// multiples of the product Gaussian.
    #[test]
    fn operators_commute(
        n in 1usize..4,
        exps in prop::collection::vec(0u32..3, 3),
        pair in (0usize..8, 0usize..8),
    ) {
        let tv = ScaleVector::symbolic(n + 1).unwrap();
        let g = product_gaussian(&tv).unwrap();
        let mono = Monomial::from_pairs([(Coord::z(0), exps[0]), (Coord::zbar(n - 1), exps[1]), (Coord::t(0), exps[2])]);
        let f = g.mul_monomial(&mono);
        let mut ops = vec![zeta(&tv).unwrap()];
        ops.extend((0..n).map(lambda_frozen));
        ops.extend((0..n).map(|j| dz_minus_zeta(j, &tv).unwrap()));
        let (a, b) = (pair.0 % ops.len(), pair.1 % ops.len());
        prop_assert!(ops[a].graded_commutator(&ops[b], &f).is_zero(), "[{}, {}]", ops[a].name, ops[b].name);
    }

    #[test]
    fn linear_coordinate_derivative(cs in prop::collection::vec(-3i64..=3, 3)) {
        let combo = Combo::new([(0, cs[0]), (1, cs[1]), (2, cs[2])]);
        let f = FormExpression::linear(CoordKind::Z, &combo);
        for (i, &ci) in cs.iter().enumerate() {
            let d = f.derive(Coord::z(i));
            prop_assert_eq!(d, FormExpression::scalar(RatFn::int(ci)));
        }
    }
}
