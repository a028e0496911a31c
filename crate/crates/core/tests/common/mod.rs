//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use mixedbf::exterior::{Coord, FormExpression, GaussTag, Monomial, Word};
use mixedbf::ratfn::{Poly, RatFn, Symbol};
use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut det = Poly::zero();
    for (j, a) in m[0].iter().enumerate() {
        let term = a * &cofactor_det(&minor(m, 0, j));
        det = if j % 2 == 0 {
            &det + &term
        } else {
            &det - &term
        };
    }
    det
}

pub fn minor(m: &[Vec<Poly>], row: usize, col: usize) -> Vec<Vec<Poly>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(k, _)| k != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Adjugate: transpose of the signed cofactor matrix.
pub fn adjugate(m: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![Poly::one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = cofactor_det(&minor(m, j, i));
                    if (i + j) % 2 == 0 {
                        c
                    } else {
                        -&c
                    }
                })
                .collect()
        })
        .collect()
}

/// `P * M` for the wheel matrix `M_ij = delta_ij / T_i + 1 / T_n`, with
/// `P = T_0 ... T_n`, so all entries are polynomials.
pub fn cleared_wheel_matrix(symbols: &[Symbol]) -> (Vec<Vec<Poly>>, Poly) {
    let n = symbols.len() - 1;
    let p = symbols
        .iter()
        .fold(Poly::one(), |acc, &s| &acc * &Poly::var(s));
    let without = |k: usize| {
        symbols
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .fold(Poly::one(), |acc, (_, &s)| &acc * &Poly::var(s))
    };
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        &without(i) + &without(n)
                    } else {
                        without(n)
                    }
                })
                .collect()
        })
        .collect();
    (m, p)
}

/// Numeric wheel matrix `M` for concrete scales.
pub fn wheel_matrix(t: &[f64]) -> DMatrix<f64> {
    let n = t.len() - 1;
    DMatrix::from_fn(n, n, |i, j| {
        1.0 / t[n] + if i == j { 1.0 / t[i] } else { 0.0 }
    })
}

/// Samples of `(Re z, Im z, t)` per slot from the density proportional to
/// `exp(-x^T M x / 4)` in each real direction.
pub struct Samples {
    pub n: usize,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    pub t: Vec<Vec<f64>>,
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random::<f64>();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn gaussian_samples(t: &[f64], count: usize, seed: u64) -> Samples {
    let m = wheel_matrix(t);
    let n = m.nrows();
    let cov = m.try_inverse().expect("invertible") * 2.0;
    let l = cov.cholesky().expect("positive definite").l();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let g = DVector::from_fn(n, |_, _| standard_normal(rng));
        (&l * g).iter().copied().collect()
    };
    let (mut x, mut y, mut tt) = (
        Vec::with_capacity(count),
        Vec::with_capacity(count),
        Vec::with_capacity(count),
    );
    for _ in 0..count {
        x.push(draw(&mut rng));
        y.push(draw(&mut rng));
        tt.push(draw(&mut rng));
    }
    Samples { n, x, y, t: tt }
}

/// Sample mean and standard error of `f` over the samples.
pub fn mean_and_se(s: &Samples, f: impl Fn(&[f64], &[f64], &[f64]) -> f64) -> (f64, f64) {
    let k = s.x.len() as f64;
    let (mut sum, mut sq) = (0.0, 0.0);
    for i in 0..s.x.len() {
        let v = f(&s.x[i], &s.y[i], &s.t[i]);
        sum += v;
        sq += v * v;
    }
    let mean = sum / k;
    (mean, ((sq / k - mean * mean) / k).sqrt())
}

/// Importance-sampling estimate of `int exp(-sum_directions x^T M x / 4)`
/// over `R^{3n}` with an isotropic proposal of variance `var`.
pub fn gaussian_mass_monte_carlo(t: &[f64], var: f64, count: usize, seed: u64) -> (f64, f64) {
    let m = wheel_matrix(t);
    let n = m.nrows();
    let dim = 3 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_norm = 0.5 * dim as f64 * (2.0 * std::f64::consts::PI * var).ln();
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..count {
        let mut quad = 0.0;
        let mut proposal = 0.0;
        for _ in 0..3 {
            let x = DVector::from_fn(n, |_, _| var.sqrt() * standard_normal(&mut rng));
            quad += (x.transpose() * &m * &x)[(0, 0)] / 4.0;
            proposal += x.norm_squared() / (2.0 * var);
        }
        let w = (-quad + proposal + log_norm).exp();
        sum += w;
        sq += w * w;
    }
    let k = count as f64;
    let mean = sum / k;
    (mean, ((sq / k - mean * mean) / k).sqrt())
}

/// Composite Gauss-Legendre on `[a, b]` with `panels` panels of 8 points.
pub fn gl(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    const X: [f64; 4] = [
        0.1834346424956498,
        0.5255324099163290,
        0.7966664774136267,
        0.9602898564975363,
    ];
    const W: [f64; 4] = [
        0.3626837833783620,
        0.3137066458778873,
        0.2223810344533745,
        0.1012285362903763,
    ];
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        for k in 0..4 {
            s += W[k] * (f(c + 0.5 * h * X[k]) + f(c - 0.5 * h * X[k]));
        }
    }
    0.5 * h * s
}

/// Two-dimensional tensor Gauss-Legendre on `[a, b]^2` in log coordinates.
pub fn gl_log_square(a: f64, b: f64, panels: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let (la, lb) = (a.ln(), b.ln());
    gl(la, lb, panels, |u| {
        let x = u.exp();
        x * gl(la, lb, panels, |v| {
            let y = v.exp();
            y * f(x, y)
        })
    })
}

/// `int_{a <= x <= y <= b} f(x, y)` by nested log-coordinate rules.
pub fn gl_log_triangle(a: f64, b: f64, panels: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let lb = b.ln();
    gl(a.ln(), lb, panels, |u| {
        let x = u.exp();
        x * gl(u, lb, panels, |v| {
            let y = v.exp();
            y * f(x, y)
        })
    })
}

pub fn monomial(pairs: &[(Coord, u32)]) -> FormExpression {
    FormExpression::term(
        RatFn::one(),
        Monomial::from_pairs(pairs.iter().copied()),
        GaussTag::none(),
        Word::empty(),
    )
}

pub type Sample<'a> = (&'a [f64], &'a [f64], &'a [f64]);

pub fn monomial_value(pairs: &[(Coord, u32)], (x, y, t): Sample<'_>) -> f64 {
    let mut v = num_complex::Complex64::new(1.0, 0.0);
    for &(c, e) in pairs {
        let s = c.slot as usize;
        let base = match c.kind {
            mixedbf::exterior::CoordKind::Z => num_complex::Complex64::new(x[s], y[s]),
            mixedbf::exterior::CoordKind::Zbar => num_complex::Complex64::new(x[s], -y[s]),
            mixedbf::exterior::CoordKind::T => num_complex::Complex64::new(t[s], 0.0),
        };
        v *= base.powu(e);
    }
    v.re
}

/// Scale vectors with monomials of degree at most four to test moments on.
pub fn moment_cases() -> Vec<(&'static [f64], Vec<Vec<(Coord, u32)>>)> {
    let z = Coord::z;
    let zb = Coord::zbar;
    let t = Coord::t;
    vec![
        (
            &[1.0, 1.0],
            vec![
                vec![(t(0), 2)],
                vec![(z(0), 1), (zb(0), 1)],
                vec![(t(0), 4)],
                vec![(z(0), 2), (zb(0), 2)],
                vec![(z(0), 1), (zb(0), 1), (t(0), 2)],
            ],
        ),
        (
            &[1.0, 1.0, 1.0],
            vec![
                vec![(t(0), 1), (t(1), 1)],
                vec![(z(0), 1), (zb(1), 1)],
                vec![(t(0), 2), (t(1), 2)],
                vec![(z(0), 1), (z(1), 1), (zb(0), 1), (zb(1), 1)],
                vec![(z(0), 2), (zb(1), 2)],
                vec![(t(0), 3), (t(1), 1)],
            ],
        ),
        (
            &[1.0, 2.0, 3.0, 4.0],
            vec![
                vec![(t(0), 1), (t(2), 1)],
                vec![(z(1), 1), (zb(2), 1)],
                vec![(t(0), 1), (t(1), 1), (t(2), 2)],
                vec![(z(0), 1), (zb(1), 1), (t(2), 2)],
                vec![(z(0), 1), (z(2), 1), (zb(1), 2)],
                vec![(t(1), 4)],
            ],
        ),
    ]
}
