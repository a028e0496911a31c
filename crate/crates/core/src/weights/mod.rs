//! Analytic wheel weights and anomaly weights on `C x R`.
//!
//! A weight is assembled symbolically: every internal edge carries a reduced
//! kernel in the difference coordinates of its endpoints, holomorphic
//! derivatives of the vertices act on kernels and inputs directly, and the
//! coefficient of `dzbar_0 dt_0 ... dzbar_{V-1} dt_{V-1}` is extracted. What
//! remains is a polynomial times a Gaussian in the positions, integrated in
//! closed form at every scale point, and a numeric integral over the scales.

pub(crate) mod integrand;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{
    antiholomorphic_top_word, Combo, Coord, FormExpression, GaussTag, Generator, Monomial, Word,
};
use crate::graphs::{ChiralGraph, ExternalLeg, GraphClass};
use crate::kernels::{reduced_heat_kernel, reduced_propagator};
use crate::quadrature::{integrate_box, integrate_box_sweep, richardson, QuadOptions};
use crate::ratfn::{qf, RatFn, Symbol, Q};

pub use integrand::Integrand;

/// Default cap on vertex derivative orders.
pub const MAX_DERIV_ORDER: u8 = 4;

/// Field insertion `a(z) [dzbar] (f0(t) + f1(t) dt)` on one external leg,
/// with `a` a polynomial in `z, zbar` times `exp(-|z|^2 / 4 sigma_z)` and
/// `f0, f1` polynomials in `t` times `exp(-t^2 / 4 sigma_t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestInput {
    /// Terms `(i, j, c)` of `c z^i zbar^j`.
    pub a: Vec<(u8, u8, Complex64)>,
    pub sigma_z: f64,
    /// Terms `(k, c)` of the 0-form part `c t^k`.
    pub f0: Vec<(u8, f64)>,
    /// Terms `(k, c)` of the `dt` part.
    pub f1: Vec<(u8, f64)>,
    pub sigma_t: f64,
    /// Whether the complex factor is the (0,1)-form `a dzbar`.
    pub dzbar: bool,
}

impl TestInput {
    pub fn new(
        a: Vec<(u8, u8, Complex64)>,
        sigma_z: f64,
        f0: Vec<(u8, f64)>,
        f1: Vec<(u8, f64)>,
        sigma_t: f64,
        dzbar: bool,
    ) -> Result<Self> {
        if !(sigma_z > 0.0 && sigma_z.is_finite() && sigma_t > 0.0 && sigma_t.is_finite()) {
            return Err(Error::Domain(
                "input envelopes need positive finite widths".into(),
            ));
        }
        Ok(TestInput {
            a,
            sigma_z,
            f0,
            f1,
            sigma_t,
            dzbar,
        })
    }

    /// `exp(-|z|^2/4 - t^2/4) (1 + dt)`.
    pub fn gaussian() -> Self {
        TestInput {
            a: vec![(0, 0, Complex64::new(1.0, 0.0))],
            sigma_z: 1.0,
            f0: vec![(0, 1.0)],
            f1: vec![(0, 1.0)],
            sigma_t: 1.0,
            dzbar: false,
        }
    }

    /// The same input times `dzbar`.
    pub fn with_dzbar(mut self) -> Self {
        self.dzbar = true;
        self
    }

    /// Standard nonvanishing inputs for an `n`-vertex wheel of cubic vertices:
    /// `z exp(..) dzbar (1 + t/2 + dt)` on leg 0 and `exp(..) (1 + 0.3 i t + dt)`
    /// on leg `i > 0`. Distinct slopes keep the 4-wheel from cancelling.
    pub fn wheel_inputs(n: usize) -> Vec<Self> {
        (0..n)
            .map(|i| {
                let mut x = TestInput::gaussian();
                if i == 0 {
                    x.a = vec![(1, 0, Complex64::new(1.0, 0.0))];
                    x.f0 = vec![(0, 1.0), (1, 0.5)];
                    x.dzbar = true;
                } else {
                    x.f0 = vec![(0, 1.0), (1, 0.3 * i as f64)];
                }
                x
            })
            .collect()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for t in &mut out.a {
            t.2 *= c;
        }
        out
    }

    /// Real and imaginary symbolic parts after applying `(d/dz)^order` at `slot`.
    fn forms(
        &self,
        slot: usize,
        order: u8,
        sig_z: Symbol,
    ) -> Result<(FormExpression, FormExpression)> {
        let z = Coord::z(slot);
        let zbar = Coord::zbar(slot);
        let quarter_inv = &RatFn::constant(qf(1, 4)) * &RatFn::var(sig_z).recip();
        let mut a_re = FormExpression::zero();
        let mut a_im = FormExpression::zero();
        for &(i, j, c) in &self.a {
            let mono = FormExpression::term(
                RatFn::one(),
                Monomial::from_pairs([(z, i as u32), (zbar, j as u32)]),
                GaussTag::none(),
                Word::empty(),
            );
            a_re = a_re.add(&mono.scale(&exact(c.re)?));
            a_im = a_im.add(&mono.scale(&exact(c.im)?));
        }
        let mut f = FormExpression::zero();
        for (terms, one_form) in [(&self.f0, false), (&self.f1, true)] {
            for &(k, c) in terms.iter() {
                let mut tp = FormExpression::term(
                    exact(c)?,
                    Monomial::pow(Coord::t(slot), k as u32),
                    GaussTag::none(),
                    Word::empty(),
                );
                if one_form {
                    tp = tp.wedge(&FormExpression::generator(Generator::dt(slot)))?;
                }
                f = f.add(&tp);
            }
        }
        let finish = |mut p: FormExpression| -> Result<FormExpression> {
            for _ in 0..order {
                p = p
                    .derive(z)
                    .sub(&p.mul_monomial(&Monomial::var(zbar)).scale(&quarter_inv));
            }
            if self.dzbar {
                p = p.wedge(&FormExpression::generator(Generator::dzbar(slot)))?;
            }
            p.wedge(&f)
        };
        Ok((finish(a_re)?, finish(a_im)?))
    }
}

/// Exact rational value of a finite float.
fn exact(x: f64) -> Result<RatFn> {
    Q::from_float(x)
        .map(RatFn::constant)
        .ok_or_else(|| Error::Domain(format!("non-finite input coefficient {x}")))
}

/// Kernel placed on an internal edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKernel {
    /// Propagator integrand at its own integrated scale.
    Propagator,
    /// Heat kernel at the fixed regularization scale.
    Heat,
}

/// Time reflection applied to an edge kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reflection {
    /// The kernel in `t_w - t_s`.
    Direct,
    /// The image kernel in `t_w + t_s`.
    Image,
    /// Direct minus image, odd under reflecting either endpoint.
    Chiral,
}

/// Per-edge kernel choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub kernel: EdgeKernel,
    pub reflection: Reflection,
}

impl EdgeSpec {
    pub const BULK: EdgeSpec = EdgeSpec {
        kernel: EdgeKernel::Propagator,
        reflection: Reflection::Direct,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightResult {
    pub value: f64,
    /// Imaginary part, nonzero only for complex input coefficients.
    pub value_imag: f64,
    pub error_estimate: f64,
    pub degree_zero_flag: bool,
    /// `max |I(T)| (sum T)^{3/2}` over the scale grid.
    pub scaled_sup: f64,
    pub points: usize,
}

impl WeightResult {
    pub fn zero() -> Self {
        WeightResult {
            value: 0.0,
            value_imag: 0.0,
            error_estimate: 0.0,
            degree_zero_flag: true,
            scaled_sup: 0.0,
            points: 0,
        }
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.value, self.value_imag)
    }
}

/// Symbolic integrand of a graph with given edge kernels and inputs, or
/// `None` when the top antiholomorphic component vanishes identically.
pub fn assemble(
    graph: &ChiralGraph,
    specs: &[EdgeSpec],
    inputs: &[TestInput],
) -> Result<Option<Integrand>> {
    assemble_on(graph, specs, inputs, Domain::Full)
}

/// Where the vertex times range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Full,
    /// `t >= 0` at every vertex.
    HalfSpace,
}

pub fn assemble_on(
    graph: &ChiralGraph,
    specs: &[EdgeSpec],
    inputs: &[TestInput],
    domain: Domain,
) -> Result<Option<Integrand>> {
    graph.validate().map_err(Error::Domain)?;
    if specs.len() != graph.edges.len() {
        return Err(Error::Domain(format!(
            "{} edge kernels for {} edges",
            specs.len(),
            graph.edges.len()
        )));
    }
    let legs = graph.external_legs();
    if legs.len() != inputs.len() {
        return Err(Error::Domain(format!(
            "{} inputs for {} external legs",
            inputs.len(),
            legs.len()
        )));
    }
    for v in &graph.vertices {
        if v.deriv_orders.iter().any(|&k| k > MAX_DERIV_ORDER) {
            return Err(Error::Domain(format!(
                "derivative order above {MAX_DERIV_ORDER}"
            )));
        }
    }
    let nv = graph.vertices.len();
    // Relative coordinates y_0 = p_0, y_v = p_v - p_0 keep the kernels'
    // small-scale directions separate from the envelopes' large ones. The
    // half-space needs the orthant, so it keeps absolute coordinates.
    let map: Vec<Combo> = (0..nv)
        .map(|v| match domain {
            Domain::Full if v > 0 => Combo::new([(0, 1), (v, 1)]),
            _ => Combo::slot(v),
        })
        .collect();
    let mut kernel = FormExpression::one();
    let mut scales = Vec::new();
    for (e, spec) in graph.edges.iter().zip(specs) {
        if e.source == e.target {
            return Ok(None);
        }
        let zc = Combo::new([(e.target, 1), (e.source, -1)]);
        let img = Combo::new([(e.target, 1), (e.source, 1)]);
        let scale = match spec.kernel {
            EdgeKernel::Propagator => {
                scales.push(Symbol::t(scales.len()));
                scales[scales.len() - 1]
            }
            EdgeKernel::Heat => Symbol::EPS,
        };
        let build = |tc: &Combo| match spec.kernel {
            EdgeKernel::Propagator => reduced_propagator(scale, &zc, tc),
            EdgeKernel::Heat => reduced_heat_kernel(scale, &zc, tc),
        };
        let mut f = match spec.reflection {
            Reflection::Direct => build(&zc),
            Reflection::Image => build(&img),
            Reflection::Chiral => build(&zc).sub(&build(&img)),
        };
        let kt = graph.vertices[e.target].alpha_order(e.target_leg);
        let ks = graph.vertices[e.source].beta_order().unwrap_or(0);
        f = f
            .derive_n(Coord::z(e.target), kt as u32)
            .derive_n(Coord::z(e.source), ks as u32);
        kernel = kernel.wedge(&f.pullback(&map, &map))?;
        if kernel.is_zero() {
            return Ok(None);
        }
    }
    let top = antiholomorphic_top_word(nv);
    let (mut re, mut im) = (kernel, FormExpression::zero());
    let mut envelopes = Vec::with_capacity(inputs.len());
    for (k, (leg, input)) in legs.iter().zip(inputs).enumerate() {
        let (vertex, order) = match *leg {
            ExternalLeg::Alpha { vertex, leg } => (vertex, graph.vertices[vertex].alpha_order(leg)),
            ExternalLeg::Beta { vertex } => {
                return Err(Error::Domain(format!(
                    "external beta-leg at vertex {vertex}; weights need a wheel"
                )))
            }
        };
        let sig_z = Symbol::sigma(2 * k);
        envelopes.push(integrand::Envelope {
            slot: vertex,
            sigma_z: input.sigma_z,
            sigma_t: input.sigma_t,
            symbol: sig_z,
        });
        let (pr, pi) = input.forms(vertex, order, sig_z)?;
        let (pr, pi) = (pr.pullback(&map, &map), pi.pullback(&map, &map));
        let next_re = re.wedge(&pr)?.sub(&im.wedge(&pi)?);
        let next_im = re.wedge(&pi)?.add(&im.wedge(&pr)?);
        re = next_re;
        im = next_im;
    }
    let relative = |f: FormExpression| f.component(&top).strip_words();
    let parts: Vec<(FormExpression, Complex64)> = [
        (relative(re), Complex64::new(1.0, 0.0)),
        (relative(im), Complex64::new(0.0, 1.0)),
    ]
    .into_iter()
    .filter(|(f, _)| !f.is_zero())
    .collect();
    if parts.is_empty() {
        return Ok(None);
    }
    Integrand::new(
        nv,
        scales,
        envelopes,
        &parts,
        &map,
        domain == Domain::HalfSpace,
    )
    .map(Some)
}

pub(crate) fn require_wheel(graph: &ChiralGraph) -> Result<()> {
    match graph.classify()? {
        GraphClass::OneLoopWheel => Ok(()),
        c => Err(Error::Domain(format!(
            "weights need a one-loop wheel, got {c}"
        ))),
    }
}

fn check_box(eps: f64, l: f64) -> Result<()> {
    if !(eps > 0.0 && l > eps && l.is_finite()) {
        return Err(Error::Domain(format!(
            "need 0 < eps < L, got eps = {eps}, L = {l}"
        )));
    }
    Ok(())
}

/// Integrand of the bulk weight of a wheel.
pub fn bulk_integrand(graph: &ChiralGraph, inputs: &[TestInput]) -> Result<Option<Integrand>> {
    require_wheel(graph)?;
    assemble(graph, &vec![EdgeSpec::BULK; graph.edges.len()], inputs)
}

/// Integrand of the anomaly weight with the heat kernel on edge `edge`.
pub fn anomaly_integrand(
    graph: &ChiralGraph,
    edge: usize,
    inputs: &[TestInput],
) -> Result<Option<Integrand>> {
    require_wheel(graph)?;
    if edge >= graph.edges.len() {
        return Err(Error::Domain(format!("edge {edge} out of range")));
    }
    let mut specs = vec![EdgeSpec::BULK; graph.edges.len()];
    specs[edge].kernel = EdgeKernel::Heat;
    assemble(graph, &specs, inputs)
}

/// Integrates an assembled integrand over `[eps, L]^d`, with the heat-kernel
/// scale (if any) fixed to `eps`.
pub fn integrate(
    integrand: &Option<Integrand>,
    eps: f64,
    l: f64,
    opts: &QuadOptions,
) -> Result<WeightResult> {
    check_box(eps, l)?;
    let Some(ig) = integrand else {
        return Ok(WeightResult::zero());
    };
    let sup = integrand::SupTracker::default();
    let r = integrate_box(ig.dim(), eps, l, |t| sup.track(t, ig.eval(t, eps)), opts)?;
    ig.finish(r, &sup)
}

/// Values on `[L 10^{-k}, L]^d` for `k = 1..=k_max`, from one grid.
/// Not available when a heat-kernel edge ties the integrand to `eps`.
pub fn integrate_sweep(
    integrand: &Option<Integrand>,
    l: f64,
    k_max: usize,
    opts: &QuadOptions,
) -> Result<Vec<(f64, WeightResult)>> {
    let eps: Vec<f64> = (1..=k_max).map(|k| l * 10f64.powi(-(k as i32))).collect();
    check_box(*eps.last().unwrap_or(&(l / 10.0)), l)?;
    let Some(ig) = integrand else {
        return Ok(eps.into_iter().map(|e| (e, WeightResult::zero())).collect());
    };
    if ig.uses_eps() {
        return Err(Error::Domain(
            "a heat-kernel edge depends on eps; sweep each eps separately".into(),
        ));
    }
    let sup = integrand::SupTracker::default();
    let rs = integrate_box_sweep(ig.dim(), l, k_max, |t| sup.track(t, ig.eval(t, 0.0)), opts)?;
    eps.into_iter()
        .zip(rs)
        .map(|(e, r)| ig.finish(r, &sup).map(|w| (e, w)))
        .collect()
}

pub fn bulk_weight(
    graph: &ChiralGraph,
    eps: f64,
    l: f64,
    inputs: &[TestInput],
    opts: &QuadOptions,
) -> Result<WeightResult> {
    check_box(eps, l)?;
    integrate(&bulk_integrand(graph, inputs)?, eps, l, opts)
}

pub fn bulk_weight_sweep(
    graph: &ChiralGraph,
    l: f64,
    k_max: usize,
    inputs: &[TestInput],
    opts: &QuadOptions,
) -> Result<Vec<(f64, WeightResult)>> {
    integrate_sweep(&bulk_integrand(graph, inputs)?, l, k_max, opts)
}

pub fn anomaly_weight(
    graph: &ChiralGraph,
    edge: usize,
    eps: f64,
    l: f64,
    inputs: &[TestInput],
    opts: &QuadOptions,
) -> Result<WeightResult> {
    check_box(eps, l)?;
    integrate(&anomaly_integrand(graph, edge, inputs)?, eps, l, opts)
}

/// `lhs = int_{[eps,L]^{n+1}} (sum T)^{-3/2}` and the AM-GM bound
/// `((L^b - eps^b) / b)^{n+1}`, `b = 1 - 3/(2(n+1))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TBoxBound {
    pub lhs: f64,
    pub lhs_error: f64,
    pub rhs: f64,
    /// The variant `(b (eps^b - L^b))^{n+1}`, kept for comparison.
    pub rhs_printed: f64,
}

pub fn t_box_bound(n: usize, eps: f64, l: f64, opts: &QuadOptions) -> Result<TBoxBound> {
    check_box(eps, l)?;
    let d = n + 1;
    let r = integrate_box(
        d,
        eps,
        l,
        |t| Complex64::new(t.iter().sum::<f64>().powf(-1.5), 0.0),
        opts,
    )?;
    let (rhs, rhs_printed) = t_box_rhs(n, eps, l);
    Ok(TBoxBound {
        lhs: r.re,
        lhs_error: r.error,
        rhs,
        rhs_printed,
    })
}

/// Closed-form AM-GM bound on `int (sum T)^{-3/2}` over `n + 1` scales, and
/// its variant `(b (eps^b - L^b))^{n+1}`.
pub fn t_box_rhs(n: usize, eps: f64, l: f64) -> (f64, f64) {
    let d = (n + 1) as f64;
    let b = 1.0 - 1.5 / d;
    let one = if b.abs() < 1e-15 {
        (l / eps).ln()
    } else {
        (l.powf(b) - eps.powf(b)) / b
    };
    let printed = (b * (eps.powf(b) - l.powf(b))).powf(d);
    (one.powf(d), printed)
}

/// Sum of the anomaly weights over every choice of distinguished edge.
pub fn anomaly_weight_total(
    graph: &ChiralGraph,
    eps: f64,
    l: f64,
    inputs: &[TestInput],
    opts: &QuadOptions,
) -> Result<WeightResult> {
    let mut total = WeightResult::zero();
    for e in 0..graph.edges.len() {
        let w = anomaly_weight(graph, e, eps, l, inputs, opts)?;
        total.value += w.value;
        total.value_imag += w.value_imag;
        total.error_estimate += w.error_estimate;
        total.scaled_sup = total.scaled_sup.max(w.scaled_sup);
        total.points = total.points.max(w.points);
    }
    Ok(total)
}

/// `eps -> 0` limit of values at `eps_k = eps_0 10^{-k}`, assuming an
/// expansion in powers of `eps^{1/2}`. Uses the last four values.
pub fn eps_limit(values: &[f64]) -> Option<(f64, f64)> {
    let tail = &values[values.len().saturating_sub(4)..];
    if tail.len() < 3 {
        return None;
    }
    richardson(tail, 10.0, 0.5, 0.5)
}

/// Anomaly weights of one distinguished edge along `eps = L 10^{-k}`,
/// `k = 1..=k_max`, with their extrapolated limit.
#[derive(Clone, Debug, Serialize)]
pub struct AnomalyStudy {
    pub l: f64,
    pub eps: Vec<f64>,
    pub weights: Vec<WeightResult>,
    pub limit: f64,
    pub limit_error: f64,
    /// `((L^b - eps^b)/b)^d` for the `d` integrated scales, per `eps`.
    pub bound_rhs: Vec<f64>,
}

pub fn anomaly_study(
    graph: &ChiralGraph,
    edge: usize,
    l: f64,
    k_max: usize,
    inputs: &[TestInput],
    opts: &QuadOptions,
) -> Result<AnomalyStudy> {
    let ig = anomaly_integrand(graph, edge, inputs)?;
    let d = graph.edges.len() - 1;
    let mut eps = Vec::new();
    let mut weights = Vec::new();
    let mut bound_rhs = Vec::new();
    for k in 1..=k_max {
        let e = l * 10f64.powi(-(k as i32));
        weights.push(integrate(&ig, e, l, opts)?);
        bound_rhs.push(t_box_rhs(d.max(1) - 1, e, l).0);
        eps.push(e);
    }
    let values: Vec<f64> = weights.iter().map(|w| w.value).collect();
    let (limit, limit_error) = eps_limit(&values)
        .ok_or_else(|| Error::Domain("eps extrapolation needs at least three depths".into()))?;
    Ok(AnomalyStudy {
        l,
        eps,
        weights,
        limit,
        limit_error,
        bound_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::ChiralVertex;

    fn cubic(orders: [u8; 3]) -> ChiralVertex {
        ChiralVertex::new(2, 1, orders.to_vec(), "cubic").unwrap()
    }

    #[test]
    fn short_wheels_vanish_exactly() {
        let inputs = TestInput::wheel_inputs(2);
        for d in 0..=2u8 {
            let one = ChiralGraph::wheel(vec![cubic([d, 0, d])]);
            assert!(bulk_integrand(&one, &inputs[..1]).unwrap().is_none());
            let two = ChiralGraph::wheel(vec![cubic([d, 0, 0]), cubic([0, d, d])]);
            assert!(bulk_integrand(&two, &inputs).unwrap().is_none());
            for e in 0..2 {
                assert!(anomaly_integrand(&two, e, &inputs).unwrap().is_none());
            }
        }
    }

    #[test]
    fn integrand_is_linear_in_each_input() {
        let g = ChiralGraph::wheel(vec![ChiralVertex::cubic(); 3]);
        let mut inputs = TestInput::wheel_inputs(3);
        let t = [0.2, 0.05, 0.7];
        let base = bulk_integrand(&g, &inputs).unwrap().unwrap().eval(&t, 0.0);
        let c = Complex64::new(2.0, -0.5);
        inputs[1] = inputs[1].scaled(c);
        let scaled = bulk_integrand(&g, &inputs).unwrap().unwrap().eval(&t, 0.0);
        assert!((scaled - c * base).norm() <= 1e-12 * base.norm());
    }

    #[test]
    fn sweep_is_deterministic() {
        let g = ChiralGraph::wheel(vec![ChiralVertex::cubic(); 3]);
        let inputs = TestInput::wheel_inputs(3);
        let a = bulk_weight_sweep(&g, 1.0, 2, &inputs, &QuadOptions::default()).unwrap();
        let b = bulk_weight_sweep(&g, 1.0, 2, &inputs, &QuadOptions::default()).unwrap();
        for ((_, x), (_, y)) in a.iter().zip(&b) {
            assert_eq!(x.value.to_bits(), y.value.to_bits());
        }
    }

    #[test]
    fn t_box_is_homogeneous() {
        // int_{[s eps, s L]^d} (sum T)^{-3/2} = s^{d - 3/2} int_{[eps, L]^d}
        let opts = QuadOptions::default();
        let a = t_box_bound(2, 1e-2, 1.0, &opts).unwrap();
        let b = t_box_bound(2, 0.5e-2, 0.5, &opts).unwrap();
        assert!((b.lhs - 0.5f64.powf(1.5) * a.lhs).abs() < 1e-8 * a.lhs);
        assert!(a.lhs <= a.rhs);
    }

    #[test]
    fn eps_limit_of_square_root_decay() {
        let v: Vec<f64> = (1..=5)
            .map(|k| 0.3 - 2.0 * 10f64.powf(-0.5 * k as f64))
            .collect();
        let (x, _) = eps_limit(&v).unwrap();
        assert!((x - 0.3).abs() < 1e-12);
    }
}
