//! Heat kernels, propagator integrands and the operators acting on them.
//!
//! Two representations are used. The *full* kernels on one slot (a function of
//! the difference coordinate) or two slots carry the holomorphic one-form
//! `dz`. The *reduced* kernels drop that `dz` from the right, `K = K^red ^ dz`,
//! which is the form used in graph integrals where every vertex receives its
//! holomorphic volume from the incoming `beta`-leg.

use crate::error::{Error, Result};
use crate::exterior::{
    Combo, Coord, CoordKind, FormExpression, GaussBlock, GaussTag, GenKind, Generator, Monomial,
    Word,
};
use crate::ratfn::{q, qf, Poly, RatFn, Symbol, Q};

/// Frozen coefficients of `lambda = C1 dzbar d/dt + C2 dt d/dz`, as solved by
/// [`solve_lambda_constants`].
pub const LAMBDA_C1: i64 = 1;
pub const LAMBDA_C2: i64 = -4;

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleVector {
    symbols: Vec<Symbol>,
    values: Option<Vec<f64>>,
}

impl ScaleVector {
    /// Symbols `T_0, ..., T_n`.
    pub fn symbolic(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Domain("scale vector must be nonempty".into()));
        }
        Ok(ScaleVector {
            symbols: (0..len).map(Symbol::t).collect(),
            values: None,
        })
    }

    pub fn numeric(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("scale vector must be nonempty".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Domain(format!("scale {v} is not positive")));
        }
        Ok(ScaleVector {
            symbols: (0..values.len()).map(Symbol::t).collect(),
            values: Some(values.to_vec()),
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn values(&self) -> Option<&[f64]> {
        self.values.as_deref()
    }

    /// Value lookup for numeric evaluation; unknown symbols map to NaN.
    pub fn lookup(&self) -> impl Fn(Symbol) -> f64 + '_ {
        move |s| {
            let vals = self.values.as_ref();
            self.symbols
                .iter()
                .position(|&t| t == s)
                .and_then(|i| vals.map(|v| v[i]))
                .unwrap_or(f64::NAN)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Bulk,
    Image,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelForm {
    pub expression: FormExpression,
    pub arity: usize,
    pub variant: Variant,
}

fn check_scale(value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("scale {value} is not positive")))
    }
}

fn inv(s: Symbol) -> RatFn {
    RatFn::recip_poly(&Poly::var(s))
}

fn word(gens: &[Generator]) -> (i32, Word) {
    Word::from_gens(gens).expect("distinct generators")
}

/// Normalized heat kernel function `k_T` of slot 0.
pub fn heat_function(t: Symbol) -> FormExpression {
    FormExpression::gaussian(GaussTag::from_blocks([GaussBlock::heat(Combo::slot(0), t)]).unwrap())
}

/// `k_T mu_V` with `mu_V = dzbar ^ dz ^ dt`, on one slot.
pub fn heat_kernel_diag(t: Symbol) -> FormExpression {
    let (sign, w) = word(&[Generator::dzbar(0), Generator::dz(0), Generator::dt(0)]);
    let tag = GaussTag::from_blocks([GaussBlock::heat(Combo::slot(0), t)]).unwrap();
    FormExpression::term(RatFn::int(sign as i64), Monomial::one(), tag, w)
}

/// Pullback of a one-slot form along `(x_0, x_1) -> x_0 - x_1`, or along
/// `(z - w, t + s)` for the image variant.
pub fn pull_to_pair(f: &FormExpression, variant: Variant) -> FormExpression {
    let zmap = [Combo::new([(0, 1), (1, -1)])];
    let tmap = match variant {
        Variant::Bulk => [Combo::new([(0, 1), (1, -1)])],
        Variant::Image => [Combo::new([(0, 1), (1, 1)])],
    };
    f.pullback(&zmap, &tmap)
}

/// Heat kernel on the fields at symbolic scale `t`, on two slots.
pub fn heat_kernel(t: Symbol) -> KernelForm {
    KernelForm {
        expression: pull_to_pair(&heat_kernel_diag(t), Variant::Bulk),
        arity: 2,
        variant: Variant::Bulk,
    }
}

/// Heat kernel at a numeric scale, bound to the symbol `T0`.
pub fn heat_kernel_at(t: f64) -> Result<(KernelForm, ScaleVector)> {
    check_scale(t)?;
    Ok((heat_kernel(Symbol::t(0)), ScaleVector::numeric(&[t])?))
}

/// `E_T = -(k_T / T) dz ^ (zbar dt - (t/2) dzbar)` on one slot.
pub fn propagator_diag(t: Symbol) -> FormExpression {
    reduced_propagator(t, &Combo::slot(0), &Combo::slot(0))
        .wedge(&FormExpression::generator(Generator::dz(0)))
        .expect("no gaussian on dz")
}

pub fn propagator_integrand(t: Symbol) -> KernelForm {
    KernelForm {
        expression: pull_to_pair(&propagator_diag(t), Variant::Bulk),
        arity: 2,
        variant: Variant::Bulk,
    }
}

pub fn propagator_integrand_at(t: f64) -> Result<(KernelForm, ScaleVector)> {
    check_scale(t)?;
    Ok((
        propagator_integrand(Symbol::t(0)),
        ScaleVector::numeric(&[t])?,
    ))
}

/// Reduced propagator `(k_T / T)(zbar dt - (t/2) dzbar)` in the combinations
/// `zc` (for z and its differentials) and `tc` (for t, dt).
pub fn reduced_propagator(t: Symbol, zc: &Combo, tc: &Combo) -> FormExpression {
    let tag = GaussTag::from_blocks([GaussBlock::new(zc.clone(), tc.clone(), t, 3)]).unwrap();
    let g = FormExpression::gaussian(tag).scale(&inv(t));
    let a = FormExpression::linear(CoordKind::Zbar, zc)
        .wedge(&FormExpression::one_form(GenKind::Dt, tc))
        .unwrap();
    let b = FormExpression::linear(CoordKind::T, tc)
        .wedge(&FormExpression::one_form(GenKind::Dzbar, zc))
        .unwrap()
        .scale(&RatFn::constant(qf(-1, 2)));
    g.wedge(&a.add(&b)).unwrap()
}

/// Reduced heat kernel `-k_T dzbar ^ dt` in the given combinations.
pub fn reduced_heat_kernel(t: Symbol, zc: &Combo, tc: &Combo) -> FormExpression {
    let tag = GaussTag::from_blocks([GaussBlock::new(zc.clone(), tc.clone(), t, 3)]).unwrap();
    let w = FormExpression::one_form(GenKind::Dzbar, zc)
        .wedge(&FormExpression::one_form(GenKind::Dt, tc))
        .unwrap();
    FormExpression::gaussian(tag).wedge(&w).unwrap().neg()
}

/// Reduced Gaussian `k_T` (the function part of `G_T = k_T dz`).
pub fn reduced_gaussian(t: Symbol, zc: &Combo, tc: &Combo) -> FormExpression {
    FormExpression::gaussian(
        GaussTag::from_blocks([GaussBlock::new(zc.clone(), tc.clone(), t, 3)]).unwrap(),
    )
}

/// `G_T = k_T dz` on one slot.
pub fn gaussian_form(t: Symbol) -> FormExpression {
    heat_function(t)
        .wedge(&FormExpression::generator(Generator::dz(0)))
        .unwrap()
}

/// The holomorphic gauge fix `Q* = 2 dbar* + d*` on slot `v`, with
/// `dbar*(f dzbar) = 2 df/dz` and `d*(f dt) = df/dt`.
pub fn gauge_fix_adjoint(f: &FormExpression, v: usize) -> FormExpression {
    let a = f
        .contract(Generator::dzbar(v))
        .derive(Coord::z(v))
        .scale(&RatFn::int(4));
    let b = f.contract(Generator::dt(v)).derive(Coord::t(v));
    a.add(&b)
}

/// `Q = dbar + d_t` on slot `v`.
pub fn gauge_differential(f: &FormExpression, v: usize) -> FormExpression {
    f.derive(Coord::zbar(v))
        .left_mul(Generator::dzbar(v))
        .add(&f.derive(Coord::t(v)).left_mul(Generator::dt(v)))
}

/// Flat Laplacian `4 d_z d_zbar + d_t^2` on slot `v`.
pub fn laplacian(f: &FormExpression, v: usize) -> FormExpression {
    f.derive(Coord::z(v))
        .derive(Coord::zbar(v))
        .scale(&RatFn::int(4))
        .add(&f.derive(Coord::t(v)).derive(Coord::t(v)))
}

/// First-order operator `sum coefficient ^ d/d coord`, with form-valued
/// coefficients of homogeneous parity.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator {
    pub name: String,
    pub terms: Vec<(FormExpression, Coord)>,
    pub odd: bool,
}

impl DiffOperator {
    pub fn apply(&self, f: &FormExpression) -> FormExpression {
        self.terms
            .iter()
            .fold(FormExpression::zero(), |acc, (c, v)| {
                acc.add(
                    &c.wedge(&f.derive(*v))
                        .expect("operator coefficients carry no gaussian"),
                )
            })
    }

    pub fn apply_n(&self, f: &FormExpression, n: u32) -> FormExpression {
        (0..n).fold(f.clone(), |g, _| self.apply(&g))
    }

    /// Sum of two operators of the same parity.
    pub fn plus(&self, other: &DiffOperator, name: &str) -> DiffOperator {
        assert_eq!(self.odd, other.odd, "operators of mixed parity");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        DiffOperator {
            name: name.into(),
            terms,
            odd: self.odd,
        }
    }

    pub fn scaled(&self, c: &RatFn, name: &str) -> DiffOperator {
        DiffOperator {
            name: name.into(),
            terms: self.terms.iter().map(|(f, v)| (f.scale(c), *v)).collect(),
            odd: self.odd,
        }
    }

    /// Graded commutator applied to `f`.
    pub fn graded_commutator(&self, other: &DiffOperator, f: &FormExpression) -> FormExpression {
        let ab = self.apply(&other.apply(f));
        let ba = other.apply(&self.apply(f));
        if self.odd && other.odd {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }
}

fn scalar_op(name: &str, terms: Vec<(RatFn, Coord)>) -> DiffOperator {
    DiffOperator {
        name: name.into(),
        terms: terms
            .into_iter()
            .map(|(c, v)| (FormExpression::scalar(c), v))
            .collect(),
        odd: false,
    }
}

/// `(d/dz_j)^k` as repeated application of a single derivation.
pub fn holomorphic_derivative(j: usize) -> DiffOperator {
    scalar_op(&format!("d/dz{j}"), vec![(RatFn::one(), Coord::z(j))])
}

fn sum_t(tv: &ScaleVector) -> Poly {
    Poly::sum_of(tv.symbols().iter().copied())
}

fn weighted(tv: &ScaleVector, kind: fn(usize) -> Coord, name: &str) -> Result<DiffOperator> {
    let n = tv
        .len()
        .checked_sub(1)
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Domain("operator needs at least two scales".into()))?;
    let inv_sum = RatFn::recip_poly(&sum_t(tv));
    let terms = (0..n)
        .map(|i| (&RatFn::var(tv.symbols()[i]) * &inv_sum, kind(i)))
        .collect();
    Ok(scalar_op(name, terms))
}

/// `zeta = (sum_j T_j)^{-1} sum_{i<n} T_i d/dz_i`.
pub fn zeta(tv: &ScaleVector) -> Result<DiffOperator> {
    weighted(tv, Coord::z, "zeta")
}

/// `tau = (sum_j T_j)^{-1} sum_{i<n} T_i d/dt_i`.
pub fn tau(tv: &ScaleVector) -> Result<DiffOperator> {
    weighted(tv, Coord::t, "tau")
}

fn minus(a: DiffOperator, b: &DiffOperator, name: &str) -> DiffOperator {
    a.plus(&b.scaled(&RatFn::int(-1), ""), name)
}

pub fn dz_minus_zeta(j: usize, tv: &ScaleVector) -> Result<DiffOperator> {
    let z = zeta(tv)?;
    if j + 1 >= tv.len() {
        return Err(Error::Domain(format!(
            "index {j} out of range for n = {}",
            tv.len() - 1
        )));
    }
    Ok(minus(
        scalar_op("", vec![(RatFn::one(), Coord::z(j))]),
        &z,
        &format!("d/dz{j}-zeta"),
    ))
}

pub fn dt_minus_tau(j: usize, tv: &ScaleVector) -> Result<DiffOperator> {
    let t = tau(tv)?;
    if j + 1 >= tv.len() {
        return Err(Error::Domain(format!(
            "index {j} out of range for n = {}",
            tv.len() - 1
        )));
    }
    Ok(minus(
        scalar_op("", vec![(RatFn::one(), Coord::t(j))]),
        &t,
        &format!("d/dt{j}-tau"),
    ))
}

/// `lambda_i = c1 dzbar_i d/dt_i + c2 dt_i d/dz_i` on slot `i`.
pub fn lambda(i: usize, c1: &Q, c2: &Q) -> DiffOperator {
    DiffOperator {
        name: format!("lambda{i}"),
        terms: vec![
            (
                FormExpression::generator(Generator::dzbar(i)).scale(&RatFn::constant(c1.clone())),
                Coord::t(i),
            ),
            (
                FormExpression::generator(Generator::dt(i)).scale(&RatFn::constant(c2.clone())),
                Coord::z(i),
            ),
        ],
        odd: true,
    }
}

pub fn lambda_frozen(i: usize) -> DiffOperator {
    lambda(i, &q(LAMBDA_C1), &q(LAMBDA_C2))
}

/// Operators whose product maps the reduced product Gaussian to the reduced
/// product propagator: for `j < n`, `c1 dzbar_j (d/dt_j - tau) + c2 dt_j (d/dz_j - zeta)`,
/// and for the last factor `c1 (sum dzbar_i) tau + c2 (sum dt_i) zeta`.
pub fn lambda_hat(j: usize, tv: &ScaleVector, c1: &Q, c2: &Q) -> Result<DiffOperator> {
    let n = tv.len() - 1;
    let c1f = RatFn::constant(c1.clone());
    let c2f = RatFn::constant(c2.clone());
    let (a, b, fz, ft) = if j < n {
        (
            dt_minus_tau(j, tv)?,
            dz_minus_zeta(j, tv)?,
            FormExpression::generator(Generator::dzbar(j)),
            FormExpression::generator(Generator::dt(j)),
        )
    } else if j == n {
        let all = Combo::new((0..n).map(|i| (i, 1)));
        (
            tau(tv)?,
            zeta(tv)?,
            FormExpression::one_form(GenKind::Dzbar, &all),
            FormExpression::one_form(GenKind::Dt, &all),
        )
    } else {
        return Err(Error::Domain(format!("index {j} out of range for n = {n}")));
    };
    let mut terms = Vec::new();
    for (c, v) in a.terms {
        terms.push((fz.wedge(&c).unwrap().scale(&c1f), v));
    }
    for (c, v) in b.terms {
        terms.push((ft.wedge(&c).unwrap().scale(&c2f), v));
    }
    Ok(DiffOperator {
        name: format!("lambda_hat{j}"),
        terms,
        odd: true,
    })
}

/// Solves `c1 dzbar d/dt G + c2 dt d/dz G = E` for constants `(c1, c2)`.
pub fn solve_lambda_constants() -> Result<(Q, Q)> {
    let t = Symbol::t(0);
    let g = gaussian_form(t);
    let e = propagator_diag(t);
    let basis = [
        g.derive(Coord::t(0)).left_mul(Generator::dzbar(0)),
        g.derive(Coord::z(0)).left_mul(Generator::dt(0)),
    ];
    let mut cs = Vec::new();
    for b in &basis {
        let (key, bc) = b
            .terms()
            .next()
            .ok_or_else(|| Error::Construction("empty basis element".into()))?;
        let ec = e
            .terms()
            .find(|(k, _)| *k == key)
            .map(|(_, c)| c.clone())
            .unwrap_or_default();
        let ratio = (&ec / bc)
            .as_constant()
            .ok_or_else(|| Error::Construction("lambda coefficient is not constant".into()))?;
        cs.push(ratio);
    }
    let fit = basis[0]
        .scale(&RatFn::constant(cs[0].clone()))
        .add(&basis[1].scale(&RatFn::constant(cs[1].clone())));
    if fit != e {
        return Err(Error::Construction(
            "no constant-coefficient lambda reproduces E_T".into(),
        ));
    }
    Ok((cs[0].clone(), cs[1].clone()))
}

fn check_arity(tv: &ScaleVector) -> Result<usize> {
    match tv.len() {
        0 | 1 => Err(Error::Domain("product kernels need n >= 1".into())),
        l => Ok(l - 1),
    }
}

/// Difference coordinates of the last factor, `sum_i q_i`.
fn total(n: usize) -> Combo {
    Combo::new((0..n).map(|i| (i, 1)))
}

/// Reduced `G^(n) = prod_{i<n} k_{T_i}(q_i) * k_{T_n}(sum q_i)`.
pub fn product_gaussian(tv: &ScaleVector) -> Result<FormExpression> {
    let n = check_arity(tv)?;
    let s = tv.symbols();
    let mut blocks: Vec<GaussBlock> = (0..n)
        .map(|i| GaussBlock::heat(Combo::slot(i), s[i]))
        .collect();
    blocks.push(GaussBlock::heat(total(n), s[n]));
    let tag = GaussTag::from_blocks(blocks)
        .ok_or_else(|| Error::Domain("degenerate scale vector".into()))?;
    Ok(FormExpression::gaussian(tag))
}

/// Reduced `E^(n) = e_{T_0}(q_0) ^ ... ^ e_{T_{n-1}}(q_{n-1}) ^ e_{T_n}(sum q_i)`.
pub fn product_propagator(tv: &ScaleVector) -> Result<FormExpression> {
    let n = check_arity(tv)?;
    let s = tv.symbols();
    let mut factors: Vec<FormExpression> = (0..n)
        .map(|i| reduced_propagator(s[i], &Combo::slot(i), &Combo::slot(i)))
        .collect();
    factors.push(reduced_propagator(s[n], &total(n), &total(n)));
    FormExpression::wedge_all(&factors)
}

/// `E^(n)` from `G^(n)` with `lambda` applied to each factor in its own
/// argument and the results pulled back to `q` coordinates.
pub fn product_propagator_via_lambda(tv: &ScaleVector, c1: &Q, c2: &Q) -> Result<FormExpression> {
    let n = check_arity(tv)?;
    let s = tv.symbols();
    let c = Combo::slot(0);
    let mut factors = Vec::with_capacity(n + 1);
    for (i, &t) in s.iter().enumerate() {
        let one = lambda(0, c1, c2).apply(&reduced_gaussian(t, &c, &c));
        let target = if i < n { Combo::slot(i) } else { total(n) };
        factors.push(one.pullback(std::slice::from_ref(&target), std::slice::from_ref(&target)));
    }
    FormExpression::wedge_all(&factors)
}

/// `prod_j lambda_hat_j G^(n)` as a composition of operators on `q` space.
///
/// This differs from `E^(n)` by contact terms: a later operator also
/// differentiates the polynomial produced by an earlier one.
pub fn product_propagator_composed(tv: &ScaleVector, c1: &Q, c2: &Q) -> Result<FormExpression> {
    let n = check_arity(tv)?;
    let mut f = product_gaussian(tv)?;
    for j in (0..=n).rev() {
        f = lambda_hat(j, tv, c1, c2)?.apply(&f);
    }
    Ok(f)
}

/// Image heat kernel on two slots, `k_T(z - w, t + s) (dzbar - dwbar)(dz - dw)(dt + ds)`.
pub fn image_heat_kernel(t: Symbol) -> FormExpression {
    pull_to_pair(&heat_kernel_diag(t), Variant::Image)
}

/// `K^chi_T = K_T - K_T^image`.
pub fn image_kernel(t: Symbol) -> KernelForm {
    KernelForm {
        expression: heat_kernel(t).expression.sub(&image_heat_kernel(t)),
        arity: 2,
        variant: Variant::Image,
    }
}

/// `E*_T`: the propagator integrand pulled back along `(z - w, t + s)`.
pub fn image_star(t: Symbol) -> FormExpression {
    pull_to_pair(&propagator_diag(t), Variant::Image)
}

/// `E~_T = E_T - E*_T`.
pub fn image_propagator_integrand(t: Symbol) -> KernelForm {
    KernelForm {
        expression: propagator_integrand(t).expression.sub(&image_star(t)),
        arity: 2,
        variant: Variant::Image,
    }
}

pub fn image_kernel_at(t: f64) -> Result<(KernelForm, ScaleVector)> {
    check_scale(t)?;
    Ok((image_kernel(Symbol::t(0)), ScaleVector::numeric(&[t])?))
}

pub fn image_propagator_integrand_at(t: f64) -> Result<(KernelForm, ScaleVector)> {
    check_scale(t)?;
    Ok((
        image_propagator_integrand(Symbol::t(0)),
        ScaleVector::numeric(&[t])?,
    ))
}

/// `(d/dz)^n E_T == (-zbar/4T)^n E_T` on one slot.
pub fn holomorphic_reduction_check(n: u32) -> bool {
    let t = Symbol::t(0);
    let e = propagator_diag(t);
    let lhs = e.derive_n(Coord::z(0), n);
    let factor = &RatFn::constant(qf(-1, 4)) * &inv(t);
    let rhs = e
        .mul_monomial(&Monomial::pow(Coord::zbar(0), n))
        .scale(&factor.pow(n));
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_lambda_matches_solver() {
        let (c1, c2) = solve_lambda_constants().unwrap();
        assert_eq!((c1, c2), (q(LAMBDA_C1), q(LAMBDA_C2)));
    }

    #[test]
    fn gauge_fix_of_heat_kernel_is_propagator() {
        let t = Symbol::t(0);
        assert_eq!(
            gauge_fix_adjoint(&heat_kernel_diag(t), 0),
            propagator_diag(t)
        );
    }

    #[test]
    fn reduced_forms_are_consistent() {
        let t = Symbol::t(0);
        let c = Combo::slot(0);
        let dz = FormExpression::generator(Generator::dz(0));
        assert_eq!(
            reduced_heat_kernel(t, &c, &c).wedge(&dz).unwrap(),
            heat_kernel_diag(t)
        );
        assert_eq!(
            reduced_propagator(t, &c, &c).wedge(&dz).unwrap(),
            propagator_diag(t)
        );
        assert_eq!(
            gauge_fix_adjoint(&reduced_heat_kernel(t, &c, &c), 0),
            reduced_propagator(t, &c, &c)
        );
    }

    #[test]
    fn numeric_scales_must_be_positive() {
        assert!(heat_kernel_at(0.0).is_err());
        assert!(propagator_integrand_at(-1.0).is_err());
        assert!(ScaleVector::numeric(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn zeta_eigen_action() {
        for len in 2..=5 {
            let tv = ScaleVector::symbolic(len).unwrap();
            let n = len - 1;
            let g = product_gaussian(&tv).unwrap();
            let tn = inv(tv.symbols()[n]);
            let sum_zb = FormExpression::linear(CoordKind::Zbar, &total(n));
            let rhs = sum_zb
                .wedge(&g)
                .unwrap()
                .scale(&(&RatFn::constant(qf(-1, 4)) * &tn));
            assert_eq!(zeta(&tv).unwrap().apply(&g), rhs, "n = {n}");
        }
    }

    #[test]
    fn lambdas_build_product_propagator() {
        for len in 2..=4 {
            let tv = ScaleVector::symbolic(len).unwrap();
            let direct = product_propagator(&tv).unwrap();
            let via = product_propagator_via_lambda(&tv, &q(LAMBDA_C1), &q(LAMBDA_C2)).unwrap();
            assert_eq!(direct, via, "len = {len}");
            let composed = product_propagator_composed(&tv, &q(LAMBDA_C1), &q(LAMBDA_C2)).unwrap();
            assert_eq!(len == 2, composed == direct, "len = {len}");
        }
    }
}
