//! Numeric Gaussian moments for a general positive definite covariance.

use std::collections::HashMap;

use num_complex::Complex64;

/// Moments of a circular complex Gaussian with `E[z_i conj(z_j)] = c[i][j]`
/// and `E[z_i z_j] = 0`.
pub struct ComplexWick<'a> {
    cov: &'a [Vec<f64>],
    memo: HashMap<(Vec<u8>, Vec<u8>), f64>,
}

impl<'a> ComplexWick<'a> {
    pub fn new(cov: &'a [Vec<f64>]) -> Self {
        ComplexWick {
            cov,
            memo: HashMap::new(),
        }
    }

    /// `E[prod z_i^a_i zbar_i^b_i]`.
    pub fn moment(&mut self, a: &[u8], b: &[u8]) -> f64 {
        let da: u32 = a.iter().map(|&x| x as u32).sum();
        let db: u32 = b.iter().map(|&x| x as u32).sum();
        if da != db {
            return 0.0;
        }
        if da == 0 {
            return 1.0;
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let i = a.iter().position(|&x| x > 0).unwrap();
        let mut a2 = a.to_vec();
        a2[i] -= 1;
        let mut acc = 0.0;
        for j in 0..b.len() {
            if b[j] == 0 {
                continue;
            }
            let c = self.cov[i][j];
            if c == 0.0 {
                continue;
            }
            let mut b2 = b.to_vec();
            b2[j] -= 1;
            acc += b[j] as f64 * c * self.moment(&a2, &b2);
        }
        self.memo.insert(key, acc);
        acc
    }
}

/// Moments of a centred real Gaussian with covariance `c`.
pub struct RealWick<'a> {
    cov: &'a [Vec<f64>],
    memo: HashMap<Vec<u8>, f64>,
}

impl<'a> RealWick<'a> {
    pub fn new(cov: &'a [Vec<f64>]) -> Self {
        RealWick {
            cov,
            memo: HashMap::new(),
        }
    }

    /// `E[prod x_i^a_i]`.
    pub fn moment(&mut self, a: &[u8]) -> f64 {
        let d: u32 = a.iter().map(|&x| x as u32).sum();
        if d % 2 == 1 {
            return 0.0;
        }
        if d == 0 {
            return 1.0;
        }
        if let Some(&v) = self.memo.get(a) {
            return v;
        }
        let i = a.iter().position(|&x| x > 0).unwrap();
        let mut a1 = a.to_vec();
        a1[i] -= 1;
        let mut acc = 0.0;
        for j in 0..a1.len() {
            if a1[j] == 0 {
                continue;
            }
            let c = self.cov[i][j];
            if c == 0.0 {
                continue;
            }
            let mut a2 = a1.clone();
            a2[j] -= 1;
            acc += a1[j] as f64 * c * self.moment(&a2);
        }
        self.memo.insert(a.to_vec(), acc);
        acc
    }
}

/// Inverse and determinant of a small symmetric positive definite matrix by
/// Cholesky factorization; `None` if not positive definite.
pub fn spd_inverse(a: &[Vec<f64>]) -> Option<(Vec<Vec<f64>>, f64)> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d.is_nan() || d <= 0.0 {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    let det = (0..n).map(|i| l[i][i] * l[i][i]).product();
    // invert L, then A^{-1} = L^{-T} L^{-1}
    let mut linv = vec![vec![0.0; n]; n];
    for i in 0..n {
        linv[i][i] = 1.0 / l[i][i];
        for j in 0..i {
            let s: f64 = (j..i).map(|k| l[i][k] * linv[k][j]).sum();
            linv[i][j] = -s / l[i][i];
        }
    }
    let mut inv = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (i..n).map(|k| linv[k][i] * linv[k][j]).sum();
            inv[i][j] = s;
            inv[j][i] = s;
        }
    }
    Some((inv, det))
}

/// `int exp(-conj(z)^T A z) prod d^2 z` with `d^2 z = dx dy`.
pub fn complex_normalization(det_a: f64, n: usize) -> f64 {
    std::f64::consts::PI.powi(n as i32) / det_a
}

/// `int exp(-x^T B x) d^n x`.
pub fn real_normalization(det_b: f64, n: usize) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / det_b.sqrt()
}

/// Complex value `sum c * z^a zbar^b` against a complex Wick engine.
pub fn complex_poly_moment(
    w: &mut ComplexWick<'_>,
    terms: &[(Vec<u8>, Vec<u8>, Complex64)],
) -> Complex64 {
    terms.iter().map(|(a, b, c)| c * w.moment(a, b)).sum()
}
