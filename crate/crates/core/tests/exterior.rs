mod common;

use std::f64::consts::PI;

use mixedbf::exterior::{
    Combo, Coord, CoordKind, FormExpression, GaussBlock, GaussTag, Generator, Monomial, Word,
};
use mixedbf::kernels::{gaussian_form, propagator_diag};
use mixedbf::ratfn::{q, qf, RatFn, Symbol};
use num_complex::Complex64;
use proptest::prelude::*;

fn unit(_: Symbol) -> f64 {
    1.0
}

fn word(gens: &[Generator]) -> (i32, Word) {
    Word::from_gens(gens).unwrap()
}

#[test]
fn repeated_generator_vanishes() {
    assert!(Word::from_gens(&[Generator::dz(0), Generator::dz(0)]).is_none());
    let dz = FormExpression::generator(Generator::dz(0));
    assert!(dz.wedge(&dz).unwrap().is_zero());
}

#[test]
fn generators_anticommute() {
    let dz = FormExpression::generator(Generator::dz(0));
    let dt = FormExpression::generator(Generator::dt(0));
    assert_eq!(dz.wedge(&dt).unwrap(), dt.wedge(&dz).unwrap().neg());
}

#[test]
fn wedge_of_coefficient_forms() {
    let a = FormExpression::coord(Coord::zbar(0))
        .wedge(&FormExpression::generator(Generator::dz(0)))
        .unwrap();
    let b = FormExpression::coord(Coord::t(0))
        .wedge(&FormExpression::generator(Generator::dzbar(0)))
        .unwrap();
    // term-by-term: coefficients multiply, the word is sorted with its permutation sign
    let (sign, w) = word(&[Generator::dz(0), Generator::dzbar(0)]);
    let want = FormExpression::term(
        RatFn::int(sign as i64),
        Monomial::from_pairs([(Coord::zbar(0), 1), (Coord::t(0), 1)]),
        GaussTag::none(),
        w,
    );
    assert_eq!(a.wedge(&b).unwrap(), want);
}

#[test]
fn holomorphic_derivative_of_gaussian() {
    let t = Symbol::t(0);
    let g = gaussian_form(t);
    let want = g
        .mul_monomial(&Monomial::var(Coord::zbar(0)))
        .scale(&(&RatFn::constant(qf(-1, 4)) * &RatFn::var(t).recip()));
    assert_eq!(g.derive(Coord::z(0)), want);
}

#[test]
fn derivative_of_constant() {
    assert!(FormExpression::one().derive(Coord::t(0)).is_zero());
}

/// `d/dz = (d/dx - i d/dy) / 2` by central differences.
#[test]
fn derivative_against_finite_differences() {
    let t = Symbol::t(0);
    let f = gaussian_form(t).mul_monomial(&Monomial::pow(Coord::z(0), 2));
    let d = f.derive(Coord::z(0));
    let w = Word::single(Generator::dz(0));
    let scales = |_: Symbol| 0.7;
    let h = 1e-5;
    for (x, y, tt) in [(0.3, -0.2, 0.1), (1.1, 0.4, -0.5), (-0.6, 0.9, 0.8)] {
        let at = |x: f64, y: f64| {
            f.evaluate(&[(Complex64::new(x, y), tt)], &scales, &w)
                .unwrap()
        };
        let fd = ((at(x + h, y) - at(x - h, y)) - Complex64::i() * (at(x, y + h) - at(x, y - h)))
            / (4.0 * h);
        let exact = d
            .evaluate(&[(Complex64::new(x, y), tt)], &scales, &w)
            .unwrap();
        assert!(
            (fd - exact).norm() < 1e-7 * exact.norm().max(1e-3),
            "{fd} vs {exact}"
        );
        // closed form (2z - z^2 zbar / 4T) G
        let z = Complex64::new(x, y);
        let g = gaussian_form(t).evaluate(&[(z, tt)], &scales, &w).unwrap();
        let want = (2.0 * z - z * z * z.conj() / (4.0 * 0.7)) * g;
        assert!((want - exact).norm() < 1e-12 * want.norm().max(1e-3));
    }
}

#[test]
fn evaluate_examples() {
    let w = Word::single(Generator::dz(0));
    let origin = [(Complex64::new(0.0, 0.0), 0.0)];
    assert_eq!(
        FormExpression::zero().evaluate(&origin, &unit, &w).unwrap(),
        Complex64::new(0.0, 0.0)
    );
    let g = gaussian_form(Symbol::t(0))
        .evaluate(&origin, &unit, &w)
        .unwrap();
    assert!(common::close(g.re, (4.0 * PI).powf(-1.5), 1e-14) && g.im == 0.0);
}

/// Independent evaluation of `-(k_T/T) zbar` with the heat kernel written out.
#[test]
fn propagator_component_at_unit_point() {
    let (sign, w) = word(&[Generator::dz(0), Generator::dt(0)]);
    let e = propagator_diag(Symbol::t(0));
    let (z, t, tt) = (Complex64::new(1.0, 0.0), 0.0, 1.0);
    let k = (4.0 * PI * tt).powf(-1.5) * (-(z.norm_sqr() + t * t) / (4.0 * tt)).exp();
    let want = -k / tt * z.conj();
    let got = e.evaluate(&[(z, t)], &unit, &w).unwrap() * sign as f64;
    assert!((got - want).norm() < 1e-15, "{got} vs {want}");
    assert!(common::close(
        want.re,
        -(-0.25f64).exp() / (4.0 * PI).powf(1.5),
        1e-14
    ));
}

fn generator_strategy() -> impl Strategy<Value = Generator> {
    (0usize..2, 0u8..3).prop_map(|(v, k)| match k {
        0 => Generator::dz(v),
        1 => Generator::dzbar(v),
        _ => Generator::dt(v),
    })
}

fn coord_strategy() -> impl Strategy<Value = Coord> {
    (0usize..2, 0u8..3).prop_map(|(v, k)| match k {
        0 => Coord::z(v),
        1 => Coord::zbar(v),
        _ => Coord::t(v),
    })
}

/// Homogeneous forms of the given degree with small integer coefficients.
fn form_strategy(degree: usize, tagged: bool) -> impl Strategy<Value = FormExpression> {
    let term = (
        -3i64..=3,
        prop::collection::vec((coord_strategy(), 1u32..3), 0..3),
        prop::collection::vec(generator_strategy(), degree),
    );
    (prop::collection::vec(term, 1..4), any::<bool>()).prop_map(move |(terms, with_tag)| {
        let tag = if tagged && with_tag {
            GaussTag::from_blocks([GaussBlock::heat(Combo::slot(0), Symbol::t(0))]).unwrap()
        } else {
            GaussTag::none()
        };
        let mut f = FormExpression::zero();
        for (c, mono, gens) in terms {
            if let Some((s, w)) = Word::from_gens(&gens) {
                let t = FormExpression::term(
                    RatFn::int(c * s as i64),
                    Monomial::from_pairs(mono),
                    tag.clone(),
                    w,
                );
                f = f.add(&t);
            }
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_graded_commutative(
        (p, a) in (0usize..4).prop_flat_map(|p| (Just(p), form_strategy(p, true))),
        (r, b) in (0usize..4).prop_flat_map(|r| (Just(r), form_strategy(r, false))),
    ) {
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let sign = if p * r % 2 == 0 { RatFn::one() } else { RatFn::int(-1) };
        prop_assert_eq!(ab, ba.scale(&sign));
    }

    #[test]
    fn derive_is_a_derivation(
        a in (0usize..3).prop_flat_map(|p| form_strategy(p, true)),
        b in (0usize..3).prop_flat_map(|r| form_strategy(r, false)),
        v in coord_strategy(),
    ) {
        let lhs = a.wedge(&b).unwrap().derive(v);
        let rhs = a.derive(v).wedge(&b).unwrap().add(&a.wedge(&b.derive(v)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_words_are_fixed_points(gens in prop::collection::vec(generator_strategy(), 0..6)) {
        if let Some((s, w)) = Word::from_gens(&gens) {
            prop_assert!(s == 1 || s == -1);
            let (s2, w2) = Word::from_gens(w.gens()).unwrap();
            prop_assert_eq!(s2, 1);
            prop_assert_eq!(w2, w);
        }
    }

    #[test]
    fn addition_cancels(a in form_strategy(2, true), b in form_strategy(2, true)) {
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn linear_forms_evaluate_to_their_combination(
        cs in prop::collection::vec(-3i64..=3, 2),
        x in prop::collection::vec(-2.0f64..2.0, 4),
    ) {
        let combo = Combo::new([(0, cs[0]), (1, cs[1])]);
        let f = FormExpression::linear(CoordKind::T, &combo);
        let p = [(Complex64::new(x[0], x[1]), x[2]), (Complex64::new(x[1], x[0]), x[3])];
        let v = f.evaluate(&p, &unit, &Word::empty()).unwrap();
        prop_assert!((v.re - (cs[0] as f64 * x[2] + cs[1] as f64 * x[3])).abs() < 1e-12);
    }
}

#[test]
fn scalar_helpers() {
    assert_eq!(
        FormExpression::scalar(RatFn::constant(q(2))).scale(&RatFn::constant(qf(1, 2))),
        FormExpression::one()
    );
}
