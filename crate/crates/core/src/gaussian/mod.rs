//! Closed forms for the wheel quadratic form
//! `sum_i |q_i|^2 / 4T_i + |sum_i q_i|^2 / 4T_n`.

pub mod orthant;
pub mod wick;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exterior::{CoordKind, FormExpression};
use crate::kernels::ScaleVector;
use crate::ratfn::{Poly, RatFn, Symbol};

/// `M = diag(a_0, ..., a_{n-1}) + b * ones`, with `a_i = 1/T_i`, `b = 1/T_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneShiftedMatrix {
    scales: Vec<Symbol>,
}

impl RankOneShiftedMatrix {
    pub fn new(tv: &ScaleVector) -> Result<Self> {
        if tv.len() < 2 {
            return Err(Error::Domain("need at least two scales".into()));
        }
        Ok(RankOneShiftedMatrix {
            scales: tv.symbols().to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.scales.len() - 1
    }

    fn t(&self, i: usize) -> RatFn {
        RatFn::var(self.scales[i])
    }

    fn sum(&self) -> Poly {
        Poly::sum_of(self.scales.iter().copied())
    }

    pub fn matrix(&self) -> Vec<Vec<RatFn>> {
        let n = self.dim();
        let b = self.t(n).recip();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            &self.t(i).recip() + &b
                        } else {
                            b.clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Sherman-Morrison inverse: `T_i delta_jk - T_j T_k / sum T`.
    pub fn inverse(&self) -> Vec<Vec<RatFn>> {
        let n = self.dim();
        let inv_sum = RatFn::recip_poly(&self.sum());
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        let d = -&(&(&self.t(j) * &self.t(k)) * &inv_sum);
                        if j == k {
                            &self.t(j) + &d
                        } else {
                            d
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `det M^{-1} = T_0 ... T_n / (T_0 + ... + T_n)`.
    pub fn det_inverse(&self) -> RatFn {
        let prod = self
            .scales
            .iter()
            .fold(RatFn::one(), |acc, &s| &acc * &RatFn::var(s));
        &prod * &RatFn::recip_poly(&self.sum())
    }

    pub fn eval(&self, values: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| 1.0 / values[n] + if i == j { 1.0 / values[i] } else { 0.0 })
                    .collect()
            })
            .collect()
    }
}

/// Exact moment `int p dmu`, stored as `ratio * Z` with
/// `Z = (4 pi)^{3n/2} (det M^{-1})^{3/2}` the zeroth moment.
#[derive(Clone, Debug, PartialEq)]
pub struct WickMoment {
    pub ratio: RatFn,
    pub n: usize,
    pub det_inverse: RatFn,
}

impl WickMoment {
    /// Power of `pi` in the zeroth moment, times two.
    pub fn pi_power_twice(&self) -> usize {
        3 * self.n
    }

    pub fn zeroth(&self, scales: &impl Fn(Symbol) -> f64) -> f64 {
        let d = self.det_inverse.eval(scales);
        (4.0 * std::f64::consts::PI).powf(1.5 * self.n as f64) * d.powf(1.5)
    }

    pub fn value(&self, scales: &impl Fn(Symbol) -> f64) -> f64 {
        self.ratio.eval(scales) * self.zeroth(scales)
    }
}

/// Integral of a polynomial in `z_i, zbar_i, t_i` (`i < n`) against
/// `exp(-sum |q_i|^2/4T_i - |sum q_i|^2/4T_n) prod dq_i`, with
/// `dq = dx dy dt`. The covariance is `2 M^{-1}` per real direction, so
/// `E[z_i zbar_j] = 4 M^{-1}_ij` and `E[t_i t_j] = 2 M^{-1}_ij`.
pub fn expectation(poly: &FormExpression, tv: &ScaleVector) -> Result<WickMoment> {
    let m = RankOneShiftedMatrix::new(tv)?;
    let n = m.dim();
    let inv = m.inverse();
    let cz: Vec<Vec<RatFn>> = inv
        .iter()
        .map(|r| r.iter().map(|x| x * &RatFn::int(4)).collect())
        .collect();
    let ct: Vec<Vec<RatFn>> = inv
        .iter()
        .map(|r| r.iter().map(|x| x * &RatFn::int(2)).collect())
        .collect();
    let mut memo_z = HashMap::new();
    let mut memo_t = HashMap::new();
    let mut ratio = RatFn::zero();
    for (k, c) in poly.terms() {
        if !k.tag.is_none() || k.word.degree() > 0 {
            return Err(Error::Domain(
                "expectation needs a polynomial without forms or gaussians".into(),
            ));
        }
        let (mut a, mut b, mut t) = (vec![0u8; n], vec![0u8; n], vec![0u8; n]);
        for &(coord, e) in k.mono.factors() {
            let s = coord.slot as usize;
            if s >= n {
                return Err(Error::Domain(format!(
                    "coordinate slot {s} out of range for n = {n}"
                )));
            }
            let e = e as u8;
            match coord.kind {
                CoordKind::Z => a[s] += e,
                CoordKind::Zbar => b[s] += e,
                CoordKind::T => t[s] += e,
            }
        }
        let mz = complex_moment(&cz, &a, &b, &mut memo_z);
        if mz.is_zero() {
            continue;
        }
        let mt = real_moment(&ct, &t, &mut memo_t);
        ratio = &ratio + &(&(c * &mz) * &mt);
    }
    Ok(WickMoment {
        ratio,
        n,
        det_inverse: m.det_inverse(),
    })
}

type Memo2 = HashMap<(Vec<u8>, Vec<u8>), RatFn>;

fn complex_moment(c: &[Vec<RatFn>], a: &[u8], b: &[u8], memo: &mut Memo2) -> RatFn {
    let da: u32 = a.iter().map(|&x| x as u32).sum();
    let db: u32 = b.iter().map(|&x| x as u32).sum();
    if da != db {
        return RatFn::zero();
    }
    if da == 0 {
        return RatFn::one();
    }
    let key = (a.to_vec(), b.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let i = a.iter().position(|&x| x > 0).unwrap();
    let mut a2 = a.to_vec();
    a2[i] -= 1;
    let mut acc = RatFn::zero();
    for j in 0..b.len() {
        if b[j] == 0 {
            continue;
        }
        let mut b2 = b.to_vec();
        b2[j] -= 1;
        let sub = complex_moment(c, &a2, &b2, memo);
        acc = &acc + &(&(&RatFn::int(b[j] as i64) * &c[i][j]) * &sub);
    }
    memo.insert(key, acc.clone());
    acc
}

fn real_moment(c: &[Vec<RatFn>], a: &[u8], memo: &mut HashMap<Vec<u8>, RatFn>) -> RatFn {
    let d: u32 = a.iter().map(|&x| x as u32).sum();
    if d % 2 == 1 {
        return RatFn::zero();
    }
    if d == 0 {
        return RatFn::one();
    }
    if let Some(v) = memo.get(a) {
        return v.clone();
    }
    let i = a.iter().position(|&x| x > 0).unwrap();
    let mut a1 = a.to_vec();
    a1[i] -= 1;
    let mut acc = RatFn::zero();
    for j in 0..a1.len() {
        if a1[j] == 0 {
            continue;
        }
        let mut a2 = a1.clone();
        a2[j] -= 1;
        let sub = real_moment(c, &a2, memo);
        acc = &acc + &(&(&RatFn::int(a1[j] as i64) * &c[i][j]) * &sub);
    }
    memo.insert(a.to_vec(), acc.clone());
    acc
}
