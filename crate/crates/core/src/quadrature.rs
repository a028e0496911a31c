//! Tensor Gauss-Legendre quadrature on logarithmic grids over scale boxes.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn legendre(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).unwrap();
    GaussLegendre::new(n).as_node_weight_pairs().to_vec()
}

/// Gauss-Legendre rule of `n` points mapped to `[a, b]`.
pub fn legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let h = 0.5 * (b - a);
    let m = 0.5 * (b + a);
    legendre(n)
        .into_iter()
        .map(|(x, w)| (m + h * x, h * w))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    /// Relative tolerance on successive refinement levels.
    pub tol: f64,
    /// Absolute floor added to the tolerance test.
    pub abs_tol: f64,
    pub panels_per_decade: usize,
    pub min_points: usize,
    pub max_points: usize,
    pub step: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-6,
            abs_tol: 1e-300,
            panels_per_decade: 1,
            min_points: 4,
            max_points: 24,
            step: 2,
        }
    }
}

/// One node of a logarithmic grid; `decade` counts whole decades below the top.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogNode {
    pub x: f64,
    pub w: f64,
    pub decade: usize,
}

/// Nodes for `int_lo^hi dT` in the variable `log T`, with panels of
/// `1/ppd` decades anchored at `hi`.
pub fn log_grid(lo: f64, hi: f64, ppd: usize, points: usize) -> Vec<LogNode> {
    assert!(lo > 0.0 && hi > lo, "log grid needs 0 < lo < hi");
    let ppd = ppd.max(1);
    let (ulo, uhi) = (lo.ln(), hi.ln());
    let width = std::f64::consts::LN_10 / ppd as f64;
    let rule = legendre(points);
    let mut out = Vec::new();
    let mut j = 0usize;
    loop {
        let top = uhi - j as f64 * width;
        if top <= ulo + 1e-12 * width {
            break;
        }
        let bottom = (top - width).max(ulo);
        let h = 0.5 * (top - bottom);
        let m = 0.5 * (top + bottom);
        for &(x, w) in &rule {
            let u = m + h * x;
            let t = u.exp();
            out.push(LogNode {
                x: t,
                w: h * w * t,
                decade: j / ppd,
            });
        }
        j += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxResult {
    pub re: f64,
    pub im: f64,
    pub error: f64,
    pub points: usize,
    pub evaluations: usize,
}

impl BoxResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Sums of `f` over the tensor grid, one sum per requested decade depth:
/// `sums[k]` covers nodes whose decades are all `< depths[k]`. Each sum is
/// paired with the matching sum of `|f|`.
fn tensor_sums<F>(grid: &[LogNode], dim: usize, depths: &[usize], f: &F) -> Vec<(Complex64, f64)>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    if dim == 0 {
        let v = f(&[]);
        return depths.iter().map(|_| (v, v.norm())).collect();
    }
    let partials: Vec<Vec<(Complex64, f64)>> = grid
        .par_iter()
        .map(|outer| {
            let mut sums = vec![(Complex64::new(0.0, 0.0), 0.0); depths.len()];
            let mut idx = vec![0usize; dim - 1];
            let mut t = vec![0.0; dim];
            t[0] = outer.x;
            loop {
                let mut w = outer.w;
                let mut deepest = outer.decade;
                for (k, &i) in idx.iter().enumerate() {
                    let node = grid[i];
                    t[k + 1] = node.x;
                    w *= node.w;
                    deepest = deepest.max(node.decade);
                }
                let v = f(&t) * w;
                for (s, &d) in sums.iter_mut().zip(depths) {
                    if deepest < d {
                        s.0 += v;
                        s.1 += v.norm();
                    }
                }
                // odometer increment
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        return sums;
                    }
                    idx[k] += 1;
                    if idx[k] < grid.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        })
        .collect();
    let mut out = vec![(Complex64::new(0.0, 0.0), 0.0); depths.len()];
    for p in partials {
        for (o, v) in out.iter_mut().zip(p) {
            o.0 += v.0;
            o.1 += v.1;
        }
    }
    out
}

/// `int_{[lo,hi]^dim} f` with refinement in the number of points per panel.
pub fn integrate_box<F>(dim: usize, lo: f64, hi: f64, f: F, opts: &QuadOptions) -> Result<BoxResult>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let decades = ((hi / lo).log10() + 1e-9).ceil().max(1.0) as usize;
    run_levels(dim, lo, hi, &[decades], &f, opts).map(|mut v| v.remove(0))
}

/// Values over `[hi 10^{-k}, hi]^dim` for `k = 1..=k_max`, from one grid.
pub fn integrate_box_sweep<F>(
    dim: usize,
    hi: f64,
    k_max: usize,
    f: F,
    opts: &QuadOptions,
) -> Result<Vec<BoxResult>>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let depths: Vec<usize> = (1..=k_max).collect();
    run_levels(dim, hi * 10f64.powi(-(k_max as i32)), hi, &depths, &f, opts)
}

/// Relative rounding floor against the integral of `|f|`.
const ROUNDOFF: f64 = 1e-12;

fn run_levels<F>(
    dim: usize,
    lo: f64,
    hi: f64,
    depths: &[usize],
    f: &F,
    opts: &QuadOptions,
) -> Result<Vec<BoxResult>>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Domain(format!(
            "scale box needs 0 < eps < L, got [{lo}, {hi}]"
        )));
    }
    let mut prev: Option<Vec<Complex64>> = None;
    let mut evaluations = 0usize;
    let mut p = opts.min_points.max(1);
    loop {
        let grid = log_grid(lo, hi, opts.panels_per_decade, p);
        evaluations += grid.len().pow(dim as u32);
        let pairs = tensor_sums(&grid, dim, depths, f);
        let sums: Vec<Complex64> = pairs.iter().map(|p| p.0).collect();
        if let Some(old) = &prev {
            let errs: Vec<f64> = sums.iter().zip(old).map(|(a, b)| (a - b).norm()).collect();
            // differences below the rounding noise of the sum are not resolvable
            let ok = pairs.iter().zip(&errs).all(|((s, abs), e)| {
                *e <= (opts.tol * s.norm()).max(ROUNDOFF * abs) + opts.abs_tol
            });
            if ok {
                return Ok(sums
                    .iter()
                    .zip(&errs)
                    .map(|(s, e)| BoxResult {
                        re: s.re,
                        im: s.im,
                        error: *e,
                        points: p,
                        evaluations,
                    })
                    .collect());
            }
            if p + opts.step > opts.max_points {
                let worst = errs
                    .iter()
                    .zip(&sums)
                    .map(|(e, s)| e / s.norm().max(f64::MIN_POSITIVE))
                    .fold(0.0, f64::max);
                return Err(Error::Numeric(format!(
                    "scale-box quadrature did not reach tolerance {} with {p} points per panel (relative change {worst:.3e})",
                    opts.tol
                )));
            }
        }
        prev = Some(sums);
        p += opts.step;
    }
}

/// Adaptive Gauss-Kronrod-free bisection with Gauss-Legendre panels on `[a, b]`.
pub fn integrate_1d(a: f64, b: f64, f: &impl Fn(f64) -> f64, tol: f64) -> f64 {
    fn rec(a: f64, b: f64, f: &impl Fn(f64) -> f64, tol: f64, whole: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let l = gl(a, m, f);
        let r = gl(m, b, f);
        if depth > 40 || (l + r - whole).abs() <= tol * (l + r).abs().max(1e-300) {
            return l + r;
        }
        rec(a, m, f, tol, l, depth + 1) + rec(m, b, f, tol, r, depth + 1)
    }
    fn gl(a: f64, b: f64, f: &impl Fn(f64) -> f64) -> f64 {
        legendre_on(10, a, b)
            .into_iter()
            .map(|(x, w)| w * f(x))
            .sum()
    }
    rec(a, b, f, tol, gl(a, b, f), 0)
}

/// Richardson table for values `v_k` at step sizes `h_0 r^{-k}` with error
/// expansion in powers `h^p, h^{p+s}, h^{p+2s}, ...`. Returns the most
/// extrapolated value and the difference to the previous diagonal entry.
pub fn richardson(
    values: &[f64],
    ratio: f64,
    first_power: f64,
    power_step: f64,
) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mut table: Vec<f64> = values.to_vec();
    let mut best = (table[table.len() - 1], f64::INFINITY);
    let mut power = first_power;
    while table.len() > 1 {
        let f = ratio.powf(power);
        let next: Vec<f64> = table
            .windows(2)
            .map(|w| (f * w[1] - w[0]) / (f - 1.0))
            .collect();
        let last = next[next.len() - 1];
        best = (last, (last - table[table.len() - 1]).abs());
        table = next;
        power += power_step;
    }
    Some(best)
}

/// Aitken delta-squared limit of the last three values.
pub fn aitken(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let (a, b, c) = (values[n - 3], values[n - 2], values[n - 1]);
    let d = c - 2.0 * b + a;
    if d == 0.0 {
        return Some(c);
    }
    Some(c - (c - b) * (c - b) / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_integrates_power_law() {
        let g = log_grid(1e-3, 1.0, 1, 10);
        let v: f64 = g.iter().map(|n| n.w * n.x.powf(-0.5)).sum();
        let exact = 2.0 * (1.0 - 1e-3f64.sqrt());
        assert!((v - exact).abs() < 1e-12 * exact);
        assert_eq!(g.last().unwrap().decade, 2);
    }

    #[test]
    fn richardson_removes_linear_and_quadratic_terms() {
        let v: Vec<f64> = (0..4)
            .map(|k| {
                let h = 10f64.powi(-k);
                2.0 + 3.0 * h - h * h
            })
            .collect();
        let (x, _) = richardson(&v, 10.0, 1.0, 1.0).unwrap();
        assert!((x - 2.0).abs() < 1e-12);
        let w: Vec<f64> = (0..5)
            .map(|k| {
                let h = 10f64.powi(-k);
                -1.0 + h.sqrt() + 0.5 * h
            })
            .collect();
        let (y, _) = richardson(&w, 10.0, 0.5, 0.5).unwrap();
        assert!((y + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_matches_separate_boxes() {
        let f = |t: &[f64]| Complex64::new((t[0] + t[1]).powf(-1.5), 0.0);
        let opts = QuadOptions::default();
        let sweep = integrate_box_sweep(2, 1.0, 3, f, &opts).unwrap();
        for k in 1..=3 {
            let single = integrate_box(2, 10f64.powi(-(k as i32)), 1.0, f, &opts).unwrap();
            assert!((sweep[k - 1].re - single.re).abs() < 1e-6 * single.re);
        }
    }
}
