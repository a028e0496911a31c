//! The half-space `C x R>=0` with the chiral boundary condition: odd inputs,
//! the two-vertex wheel and its level coefficient, and longer wheels through
//! image kernels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::wick::spd_inverse;
use crate::graphs::ChiralGraph;
use crate::quadrature::{integrate_1d, integrate_box, integrate_box_sweep, QuadOptions};
use crate::weights::integrand::{eval_pairings, expand_complex};
use crate::weights::{
    assemble_on, integrate, require_wheel, Domain, EdgeKernel, EdgeSpec, Reflection, TestInput,
    WeightResult,
};

/// `int_{eps <= T0 <= T1 <= L} dT0 dT1 / (T0 + T1)` in closed form: by
/// symmetry, half the integral over the square `[eps, L]^2`.
pub fn boundary_t_integral(eps: f64, l: f64) -> Result<f64> {
    check_box(eps, l)?;
    Ok(l * (2.0 * l).ln() - eps * (l + eps).ln() - l * (eps + l).ln() + eps * (2.0 * eps).ln())
}

/// The same integral by quadrature: half the square, on the logarithmic grid.
pub fn boundary_t_integral_numeric(eps: f64, l: f64, opts: &QuadOptions) -> Result<f64> {
    check_box(eps, l)?;
    let r = integrate_box(
        2,
        eps,
        l,
        |t| Complex64::new(1.0 / (t[0] + t[1]), 0.0),
        opts,
    )?;
    Ok(0.5 * r.re)
}

fn check_box(eps: f64, l: f64) -> Result<()> {
    if !(eps > 0.0 && l > eps && l.is_finite()) {
        return Err(Error::Domain(format!(
            "need 0 < eps < L, got eps = {eps}, L = {l}"
        )));
    }
    Ok(())
}

/// Input `a(z) [dzbar] (f0(t) + f1(t) dt)` obeying the chiral boundary
/// condition: `f0` odd and `f1` even, so the form is odd under `t -> -t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityInput(TestInput);

impl ParityInput {
    pub fn new(input: TestInput) -> Result<Self> {
        if let Some(&(k, _)) = input.f0.iter().find(|&&(k, c)| k % 2 == 0 && c != 0.0) {
            return Err(Error::Domain(format!(
                "the 0-form part must be odd in t, found t^{k}"
            )));
        }
        if let Some(&(k, _)) = input.f1.iter().find(|&&(k, c)| k % 2 == 1 && c != 0.0) {
            return Err(Error::Domain(format!(
                "the dt part must be even in t, found t^{k}"
            )));
        }
        Ok(ParityInput(input))
    }

    /// `a exp(-|z|^2/4 s_z)` with profile `c0 t + c1 dt`, envelope `exp(-t^2/4 s_t)`.
    pub fn simple(
        a: Vec<(u8, u8, Complex64)>,
        sigma_z: f64,
        c0: f64,
        c1: f64,
        sigma_t: f64,
    ) -> Result<Self> {
        Self::new(TestInput::new(
            a,
            sigma_z,
            vec![(1, c0)],
            vec![(0, c1)],
            sigma_t,
            false,
        )?)
    }

    pub fn input(&self) -> &TestInput {
        &self.0
    }

    /// Same input with `f0 -> -f0`.
    pub fn flip_f0(&self) -> Self {
        let mut x = self.0.clone();
        for t in &mut x.f0 {
            t.1 = -t.1;
        }
        ParityInput(x)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        ParityInput(self.0.scaled(c))
    }
}

/// `d/dz` of `P exp(-|z|^2/4s)` as the polynomial part times the same envelope.
fn dz_poly(a: &[(u8, u8, Complex64)], sigma: f64) -> Vec<(u8, u8, Complex64)> {
    let mut out = Vec::new();
    for &(i, j, c) in a {
        if i > 0 {
            out.push((i - 1, j, c * i as f64));
        }
        out.push((i, j + 1, -c / (4.0 * sigma)));
    }
    out
}

/// `int_{C^2} (d a)(z) b(w) exp(-|z - w|^2 / 4S) d^2z d^2w` by Wick's theorem.
pub fn complex_factor(s: f64, a: &TestInput, b: &TestInput) -> Complex64 {
    let (qa, qb, q) = (0.25 / a.sigma_z, 0.25 / b.sigma_z, 0.25 / s);
    let m = vec![vec![qa + q, -q], vec![-q, qb + q]];
    let Some((cov, det)) = spd_inverse(&m) else {
        return Complex64::new(f64::NAN, 0.0);
    };
    let norm = std::f64::consts::PI.powi(2) / det;
    let mut total = Complex64::new(0.0, 0.0);
    for (i, j, c) in dz_poly(&a.a, a.sigma_z) {
        for &(k, l, d) in &b.a {
            let p = expand_complex(&[i, k], &[j, l]);
            if !p.is_empty() {
                total += c * d * eval_pairings(&p, &cov);
            }
        }
    }
    total * norm
}

/// `int_C (d a) b d^2z`, the coefficient `complex_factor` approaches as `4 pi S`
/// times it when `S -> 0`.
pub fn contact_pairing(a: &TestInput, b: &TestInput) -> Complex64 {
    let q = 0.25 / a.sigma_z + 0.25 / b.sigma_z;
    let mut total = Complex64::new(0.0, 0.0);
    for (i, j, c) in dz_poly(&a.a, a.sigma_z) {
        for &(k, l, d) in &b.a {
            // E|z|^{2m} = m! q^{-m} against exp(-q |z|^2) d^2z / (pi / q)
            if i + k == j + l {
                let m = (i + k) as i32;
                let fact: f64 = (1..=m).map(f64::from).product();
                total += c * d * fact * q.powi(-m) * std::f64::consts::PI / q;
            }
        }
    }
    total
}

/// `Gamma(k / 2)`.
fn gamma_half(k: u32) -> f64 {
    let mut g = if k % 2 == 0 {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut x = if k % 2 == 0 { 1.0 } else { 0.5 };
    while 2.0 * x < k as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// `int_{R>=0^2} sum_k c_k t^p_k s^q_k exp(-Q(t, s)) dt ds` in polar
/// coordinates: the radial integral is a Gamma function, the angular one is
/// adaptive with panels refined toward the diagonal.
fn quadrant_integral(terms: &[(u32, u32, f64)], quad: impl Fn(f64, f64) -> f64) -> f64 {
    if terms.is_empty() {
        return 0.0;
    }
    let f = |th: f64| {
        let (c, s) = (th.cos(), th.sin());
        let q = quad(c, s);
        terms
            .iter()
            .map(|&(p, r, k)| {
                let m = p + r + 2;
                k * c.powi(p as i32) * s.powi(r as i32) * gamma_half(m)
                    / (2.0 * q.powf(m as f64 / 2.0))
            })
            .sum::<f64>()
    };
    let mid = std::f64::consts::FRAC_PI_4;
    let mut cuts: Vec<f64> = (0..=12).map(|k| mid * 10f64.powi(-k)).collect();
    cuts.push(0.0);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate_1d(mid - w[0], mid - w[1], &f, 1e-11);
        total += integrate_1d(mid + w[1], mid + w[0], &f, 1e-11);
    }
    total
}

/// `int_{R>=0^2} (t f1_a(t) f0_b(s) - s f0_a(t) f1_b(s))
///  exp(-(t-s)^2/4T0 - (t+s)^2/4T1) dt ds`, envelopes included.
pub fn half_line_factor(t0: f64, t1: f64, a: &TestInput, b: &TestInput) -> f64 {
    let mut terms = Vec::new();
    for &(p, c) in &a.f1 {
        for &(q, d) in &b.f0 {
            terms.push((p as u32 + 1, q as u32, c * d));
        }
    }
    for &(p, c) in &a.f0 {
        for &(q, d) in &b.f1 {
            terms.push((p as u32, q as u32 + 1, -c * d));
        }
    }
    let (ea, eb) = (0.25 / a.sigma_t, 0.25 / b.sigma_t);
    quadrant_integral(&terms, |c, s| {
        (c - s).powi(2) / (4.0 * t0) + (c + s).powi(2) / (4.0 * t1) + ea * c * c + eb * s * s
    })
}

/// `int_{R>=0^2} t s exp(-(t-s)^2/4T0 - (t+s)^2/4T1) dt ds`.
pub fn half_line_ts_moment(t0: f64, t1: f64) -> f64 {
    quadrant_integral(&[(1, 1, 1.0)], |c, s| {
        (c - s).powi(2) / (4.0 * t0) + (c + s).powi(2) / (4.0 * t1)
    })
}

/// `(pi/2) T0^{1/2} T1^{1/2} (T0 + T1)`, an upper bound for [`half_line_ts_moment`]:
/// with `u = t + s`, `v = t - s` the quadrant is `u >= |v|`, `ts = (u^2 - v^2)/4`,
/// and extending `v` to the whole line gives the Gaussian moments.
pub fn uv_bound(t0: f64, t1: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 * (t0 * t1).sqrt() * (t0 + t1)
}

/// The same shape with constant `pi/16`. It fails already at `T0 = T1`, where
/// the moment is exactly `T0^2`.
pub fn uv_bound_small_constant(t0: f64, t1: f64) -> f64 {
    std::f64::consts::PI / 16.0 * (t0 * t1).sqrt() * (t0 + t1)
}

/// Two-vertex integrand at `(T0, T1)` for the field `sum_i a_i f_i`:
/// `(1/4T0 + 1/4T1)^{-1} (T0 T1)^{-5/2} (4 pi)^{-3} sum_{i != j} I_C(S) I_R(T0, T1)`,
/// `S = T0 T1 / (T0 + T1)`. Diagonal terms vanish since `I_R` is antisymmetric.
pub fn two_vertex_integrand(t0: f64, t1: f64, field: &[ParityInput]) -> Complex64 {
    let s = t0 * t1 / (t0 + t1);
    let pref = 4.0 * s * (t0 * t1).powf(-2.5) * (4.0 * std::f64::consts::PI).powi(-3);
    let mut total = Complex64::new(0.0, 0.0);
    for (i, a) in field.iter().enumerate() {
        for (j, b) in field.iter().enumerate() {
            if i != j {
                total += complex_factor(s, &a.0, &b.0) * half_line_factor(t0, t1, &a.0, &b.0);
            }
        }
    }
    total * pref
}

fn check_field(field: &[ParityInput]) -> Result<()> {
    if field.iter().any(|p| p.0.dzbar) {
        return Err(Error::Domain(
            "the two-vertex weight takes function-valued complex factors".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResult {
    pub eps: f64,
    pub value: Complex64,
    pub error_estimate: f64,
}

pub fn two_vertex_boundary_weight(
    eps: f64,
    l: f64,
    field: &[ParityInput],
    opts: &QuadOptions,
) -> Result<BoundaryResult> {
    check_box(eps, l)?;
    check_field(field)?;
    let r = integrate_box(2, eps, l, |t| two_vertex_integrand(t[0], t[1], field), opts)?;
    Ok(BoundaryResult {
        eps,
        value: r.value(),
        error_estimate: r.error,
    })
}

/// Weights at `eps = L 10^{-k}`, `k = 1..=k_max`, from one scale grid.
pub fn two_vertex_boundary_sweep(
    l: f64,
    k_max: usize,
    field: &[ParityInput],
    opts: &QuadOptions,
) -> Result<Vec<BoundaryResult>> {
    check_field(field)?;
    check_box(l * 10f64.powi(-(k_max as i32)), l)?;
    let rs = integrate_box_sweep(
        2,
        l,
        k_max,
        |t| two_vertex_integrand(t[0], t[1], field),
        opts,
    )?;
    Ok(rs
        .into_iter()
        .enumerate()
        .map(|(k, r)| BoundaryResult {
            eps: l * 10f64.powi(-(k as i32 + 1)),
            value: r.value(),
            error_estimate: r.error,
        })
        .collect())
}

/// Level functional `int_C (a_1 d a_0 - a_0 d a_1) d^2z` of a two-term field.
pub fn level_functional(field: &[ParityInput]) -> Result<Complex64> {
    match field {
        [a, b] => Ok(contact_pairing(&a.0, &b.0) - contact_pairing(&b.0, &a.0)),
        _ => Err(Error::Domain(format!(
            "the level functional takes a two-term field, got {} terms",
            field.len()
        ))),
    }
}

/// Least-squares fit `w ~ c_an Lambda` over a family of two-term fields.
#[derive(Clone, Debug, Serialize)]
pub struct LevelFit {
    pub l: f64,
    pub c_an: Complex64,
    /// `|w - c_an Lambda| / |w|`.
    pub residual: f64,
    pub std_error: f64,
    pub functionals: Vec<Complex64>,
    /// Extrapolated `eps -> 0` weights and their error estimates.
    pub weights: Vec<(Complex64, f64)>,
    /// Per family member, the weights along the `eps` sequence.
    pub table: Vec<Vec<BoundaryResult>>,
}

/// Extrapolates each member to `eps -> 0` along `eps = L 10^{-k}` and fits
/// the level coefficient. The time profiles must agree across the family.
pub fn extract_level(
    l: f64,
    k_max: usize,
    family: &[Vec<ParityInput>],
    opts: &QuadOptions,
) -> Result<LevelFit> {
    if family.len() < 3 {
        return Err(Error::Domain(
            "level extraction needs at least three fields".into(),
        ));
    }
    let profile = |f: &[ParityInput]| -> Vec<(Vec<(u8, f64)>, Vec<(u8, f64)>, f64)> {
        f.iter()
            .map(|p| (p.0.f0.clone(), p.0.f1.clone(), p.0.sigma_t))
            .collect()
    };
    let first = profile(&family[0]);
    if family.iter().any(|f| profile(f) != first) {
        return Err(Error::Domain(
            "family members must share their time profiles".into(),
        ));
    }
    if k_max < 2 {
        return Err(Error::Domain("need at least two eps depths".into()));
    }
    let functionals = family
        .iter()
        .map(|f| level_functional(f))
        .collect::<Result<Vec<_>>>()?;
    let mut weights = Vec::new();
    let mut table = Vec::new();
    for f in family {
        let sweep = two_vertex_boundary_sweep(l, k_max, f, opts)?;
        let last = sweep[k_max - 1];
        let prev = sweep[k_max - 2];
        // corrections are O(eps log eps): the last step bounds the remainder
        weights.push((
            last.value,
            (last.value - prev.value).norm() + last.error_estimate,
        ));
        table.push(sweep);
    }
    let norm2: f64 = functionals.iter().map(|x| x.norm_sqr()).sum();
    let wnorm: f64 = weights.iter().map(|w| w.0.norm_sqr()).sum::<f64>().sqrt();
    if norm2.sqrt() <= 1e-12 * (1.0 + wnorm) {
        return Err(Error::Fit(
            "the level functional vanishes on the whole family".into(),
        ));
    }
    let c_an = functionals
        .iter()
        .zip(&weights)
        .map(|(x, w)| x.conj() * w.0)
        .sum::<Complex64>()
        / norm2;
    let resid2: f64 = functionals
        .iter()
        .zip(&weights)
        .map(|(x, w)| (w.0 - c_an * x).norm_sqr())
        .sum();
    let m = family.len() as f64;
    let quad: f64 = weights.iter().map(|w| w.1 * w.1).sum::<f64>();
    let std_error = ((resid2 / (m - 1.0) + quad) / norm2).sqrt();
    let residual = if wnorm > 0.0 {
        resid2.sqrt() / wnorm
    } else {
        0.0
    };
    Ok(LevelFit {
        l,
        c_an,
        residual,
        std_error,
        functionals,
        weights,
        table,
    })
}

/// Four two-term fields `a0 fA + a1 fB` with profiles `fA = t + dt`,
/// `fB = 2t + dt`, unit envelopes, and independent level functionals.
pub fn default_level_family() -> Vec<Vec<ParityInput>> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let field = |a0: Vec<(u8, u8, Complex64)>, a1: Vec<(u8, u8, Complex64)>| -> Vec<ParityInput> {
        let fa = TestInput::new(a0, 1.0, vec![(1, 1.0)], vec![(0, 1.0)], 1.0, false)
            .expect("valid input");
        let fb = TestInput::new(a1, 1.0, vec![(1, 2.0)], vec![(0, 1.0)], 1.0, false)
            .expect("valid input");
        vec![ParityInput(fa), ParityInput(fb)]
    };
    vec![
        field(vec![(1, 0, c(1.0))], vec![(0, 0, c(1.0))]),
        field(vec![(1, 0, c(1.0)), (2, 1, c(0.5))], vec![(0, 0, c(1.0))]),
        field(vec![(1, 0, c(1.0))], vec![(0, 0, c(1.0)), (1, 1, c(-0.3))]),
        field(vec![(1, 0, c(2.0))], vec![(1, 1, c(1.0))]),
    ]
}

/// Wheel integrand on the half-space: every edge carries the chiral kernel
/// and vertex times range over `t >= 0`. The chiral kernel is odd under
/// reflecting its source but even under reflecting its target, so the odd
/// extension to the full space integrates to zero and the orthant is
/// integrated directly.
fn half_space(
    graph: &ChiralGraph,
    heat_edge: Option<usize>,
    inputs: &[ParityInput],
) -> Result<Option<crate::weights::Integrand>> {
    require_wheel(graph)?;
    let mut specs = vec![
        EdgeSpec {
            kernel: EdgeKernel::Propagator,
            reflection: Reflection::Chiral
        };
        graph.edges.len()
    ];
    if let Some(e) = heat_edge {
        if e >= specs.len() {
            return Err(Error::Domain(format!("edge {e} out of range")));
        }
        specs[e].kernel = EdgeKernel::Heat;
    }
    let inputs: Vec<TestInput> = inputs.iter().map(|p| p.0.clone()).collect();
    assemble_on(graph, &specs, &inputs, Domain::HalfSpace)
}

/// Half-space wheel weight; at most three vertices.
pub fn boundary_wheel_weight(
    graph: &ChiralGraph,
    eps: f64,
    l: f64,
    inputs: &[ParityInput],
    opts: &QuadOptions,
) -> Result<WeightResult> {
    integrate(&half_space(graph, None, inputs)?, eps, l, opts)
}

/// Half-space wheel weights at `eps = L 10^{-k}`, `k = 1..=k_max`.
pub fn boundary_wheel_sweep(
    graph: &ChiralGraph,
    l: f64,
    k_max: usize,
    inputs: &[ParityInput],
    opts: &QuadOptions,
) -> Result<Vec<(f64, WeightResult)>> {
    crate::weights::integrate_sweep(&half_space(graph, None, inputs)?, l, k_max, opts)
}

/// Half-space wheel with the heat kernel `K_eps` on `edge`.
pub fn boundary_anomaly_weight(
    graph: &ChiralGraph,
    edge: usize,
    eps: f64,
    l: f64,
    inputs: &[ParityInput],
    opts: &QuadOptions,
) -> Result<WeightResult> {
    integrate(&half_space(graph, Some(edge), inputs)?, eps, l, opts)
}

/// Standard odd inputs for an `n`-vertex wheel: `z dzbar (t/2 + dt)` on leg 0
/// and `(0.3 i t + dt)` on leg `i > 0`, unit Gaussian envelopes.
pub fn wheel_parity_inputs(n: usize) -> Vec<ParityInput> {
    (0..n)
        .map(|i| {
            let mut x = TestInput::gaussian();
            x.f0 = vec![(1, if i == 0 { 0.5 } else { 0.3 * i as f64 })];
            if i == 0 {
                x.a = vec![(1, 0, Complex64::new(1.0, 0.0))];
                x.dzbar = true;
            }
            ParityInput(x)
        })
        .collect()
}
