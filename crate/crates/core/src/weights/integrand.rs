//! Numeric evaluation of an assembled weight integrand at a scale point.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use super::WeightResult;
use crate::error::{Error, Result};
use crate::exterior::{Combo, CoordKind, FormExpression, GaussBlock, GaussTag};
use crate::gaussian::orthant::{OrthantMoments, MAX_ORTHANT_DIM};
use crate::gaussian::wick::spd_inverse;
use crate::quadrature::BoxResult;
use crate::ratfn::{CompiledRatFn, Symbol};

/// Gaussian envelope of one input, at its vertex.
#[derive(Clone, Debug)]
pub(crate) struct Envelope {
    pub slot: usize,
    pub sigma_z: f64,
    pub sigma_t: f64,
    pub symbol: Symbol,
}

/// Wick expansion of one moment: `sum_k mult_k prod_{(i,j)} C_ij`.
pub(crate) type Pairings = Vec<(f64, Vec<(u8, u8)>)>;

#[derive(Clone, Debug)]
struct Term {
    coef: CompiledRatFn,
    weight: Complex64,
    z: usize,
    t: usize,
}

#[derive(Clone, Debug)]
struct Group {
    blocks: Vec<GaussBlock>,
    zmoments: Vec<Pairings>,
    tmoments: Vec<Pairings>,
    tkeys: Vec<Vec<u8>>,
    terms: Vec<Term>,
}

/// Polynomial-times-Gaussian integrand in the vertex positions, with
/// coefficients depending on the scales.
#[derive(Clone, Debug)]
pub struct Integrand {
    nslots: usize,
    scales: Vec<Symbol>,
    sigmas: Vec<f64>,
    zenv: Vec<Vec<f64>>,
    tenv: Vec<Vec<f64>>,
    uses_eps: bool,
    /// Positions restricted to `t >= 0` at every vertex.
    half_space: bool,
    groups: Vec<Group>,
    nterms: usize,
}

fn complex_pairings(
    a: &mut [u8],
    b: &mut [u8],
    cur: &mut Vec<(u8, u8)>,
    mult: f64,
    out: &mut BTreeMap<Vec<(u8, u8)>, f64>,
) {
    let Some(i) = a.iter().position(|&x| x > 0) else {
        let mut key = cur.clone();
        key.sort_unstable();
        *out.entry(key).or_insert(0.0) += mult;
        return;
    };
    a[i] -= 1;
    for j in 0..b.len() {
        if b[j] == 0 {
            continue;
        }
        let m = mult * b[j] as f64;
        b[j] -= 1;
        cur.push((i as u8, j as u8));
        complex_pairings(a, b, cur, m, out);
        cur.pop();
        b[j] += 1;
    }
    a[i] += 1;
}

fn real_pairings(
    a: &mut [u8],
    cur: &mut Vec<(u8, u8)>,
    mult: f64,
    out: &mut BTreeMap<Vec<(u8, u8)>, f64>,
) {
    let Some(i) = a.iter().position(|&x| x > 0) else {
        let mut key = cur.clone();
        key.sort_unstable();
        *out.entry(key).or_insert(0.0) += mult;
        return;
    };
    a[i] -= 1;
    for j in 0..a.len() {
        if a[j] == 0 {
            continue;
        }
        let m = mult * a[j] as f64;
        a[j] -= 1;
        cur.push((i.min(j) as u8, i.max(j) as u8));
        real_pairings(a, cur, m, out);
        cur.pop();
        a[j] += 1;
    }
    a[i] += 1;
}

pub(crate) fn expand_complex(a: &[u8], b: &[u8]) -> Pairings {
    let (sa, sb): (u32, u32) = (
        a.iter().map(|&x| x as u32).sum(),
        b.iter().map(|&x| x as u32).sum(),
    );
    if sa != sb {
        return Vec::new();
    }
    let mut out = BTreeMap::new();
    complex_pairings(
        &mut a.to_vec(),
        &mut b.to_vec(),
        &mut Vec::new(),
        1.0,
        &mut out,
    );
    out.into_iter().map(|(k, m)| (m, k)).collect()
}

fn expand_real(a: &[u8]) -> Pairings {
    if a.iter().map(|&x| x as u32).sum::<u32>() % 2 == 1 {
        return Vec::new();
    }
    let mut out = BTreeMap::new();
    real_pairings(&mut a.to_vec(), &mut Vec::new(), 1.0, &mut out);
    out.into_iter().map(|(k, m)| (m, k)).collect()
}

pub(crate) fn eval_pairings(p: &Pairings, c: &[Vec<f64>]) -> f64 {
    p.iter()
        .map(|(m, pairs)| {
            pairs
                .iter()
                .fold(*m, |acc, &(i, j)| acc * c[i as usize][j as usize])
        })
        .sum()
}

fn intern(list: &mut Vec<Vec<u8>>, key: Vec<u8>) -> usize {
    match list.iter().position(|k| *k == key) {
        Some(i) => i,
        None => {
            list.push(key);
            list.len() - 1
        }
    }
}

impl Integrand {
    pub(crate) fn new(
        nslots: usize,
        scales: Vec<Symbol>,
        envelopes: Vec<Envelope>,
        parts: &[(FormExpression, Complex64)],
        map: &[Combo],
        half_space: bool,
    ) -> Result<Self> {
        if half_space && nslots > MAX_ORTHANT_DIM {
            return Err(Error::Domain(format!(
                "half-space weights support at most {MAX_ORTHANT_DIM} vertices"
            )));
        }
        let mut sigmas = Vec::new();
        let mut zenv = vec![vec![0.0; nslots]; nslots];
        let mut tenv = vec![vec![0.0; nslots]; nslots];
        for e in &envelopes {
            let k = (e.symbol.0 - 2000) as usize;
            if sigmas.len() <= k {
                sigmas.resize(k + 1, f64::NAN);
            }
            sigmas[k] = e.sigma_z;
            let c = map[e.slot].terms();
            for &(i, ci) in c {
                for &(j, cj) in c {
                    zenv[i as usize][j as usize] += (ci * cj) as f64 / (4.0 * e.sigma_z);
                    tenv[i as usize][j as usize] += (ci * cj) as f64 / (4.0 * e.sigma_t);
                }
            }
        }
        let mut by_tag: BTreeMap<GaussTag, (Vec<Vec<u8>>, Vec<Vec<u8>>, Vec<Term>)> =
            BTreeMap::new();
        let mut uses_eps = false;
        let mut nterms = 0;
        for (form, w) in parts {
            for (key, c) in form.terms() {
                let entry = by_tag.entry(key.tag.clone()).or_default();
                let mut za = vec![0u8; 2 * nslots];
                let mut ta = vec![0u8; nslots];
                for &(coord, e) in key.mono.factors() {
                    let s = coord.slot as usize;
                    match coord.kind {
                        CoordKind::Z => za[s] += e as u8,
                        CoordKind::Zbar => za[nslots + s] += e as u8,
                        CoordKind::T => ta[s] += e as u8,
                    }
                }
                uses_eps |= c.symbols().contains(&Symbol::EPS);
                let z = intern(&mut entry.0, za);
                let t = intern(&mut entry.1, ta);
                entry.2.push(Term {
                    coef: CompiledRatFn::new(c),
                    weight: *w,
                    z,
                    t,
                });
                nterms += 1;
            }
        }
        let groups = by_tag
            .into_iter()
            .map(|(tag, (zs, ts, terms))| {
                uses_eps |= tag.blocks().iter().any(|b| b.scale == Symbol::EPS);
                Group {
                    blocks: tag.blocks().to_vec(),
                    zmoments: zs
                        .iter()
                        .map(|k| expand_complex(&k[..nslots], &k[nslots..]))
                        .collect(),
                    tmoments: if half_space {
                        Vec::new()
                    } else {
                        ts.iter().map(|k| expand_real(k)).collect()
                    },
                    tkeys: ts,
                    terms,
                }
            })
            .collect();
        Ok(Integrand {
            nslots,
            scales,
            sigmas,
            zenv,
            tenv,
            uses_eps,
            half_space,
            groups,
            nterms,
        })
    }

    /// Number of integrated scales.
    pub fn dim(&self) -> usize {
        self.scales.len()
    }

    pub fn uses_eps(&self) -> bool {
        self.uses_eps
    }

    pub fn term_count(&self) -> usize {
        self.nterms
    }

    /// Value of the position integral at scales `t`, with the heat-kernel
    /// scale set to `eps`. Returns NaN if a quadratic form degenerates.
    pub fn eval(&self, t: &[f64], eps: f64) -> Complex64 {
        let lookup = |s: Symbol| -> f64 {
            if s == Symbol::EPS {
                eps
            } else if s.0 >= 2000 {
                self.sigmas[(s.0 - 2000) as usize]
            } else {
                t[s.0 as usize]
            }
        };
        let n = self.nslots;
        let pi = std::f64::consts::PI;
        let mut total = Complex64::new(0.0, 0.0);
        for g in &self.groups {
            let mut a = self.zenv.clone();
            let mut b = self.tenv.clone();
            let mut pref = 1.0;
            for blk in &g.blocks {
                let s = lookup(blk.scale);
                let q = 1.0 / (4.0 * s);
                for &(i, ci) in blk.z.terms() {
                    for &(j, cj) in blk.z.terms() {
                        a[i as usize][j as usize] += q * (ci * cj) as f64;
                    }
                }
                for &(i, ci) in blk.t.terms() {
                    for &(j, cj) in blk.t.terms() {
                        b[i as usize][j as usize] += q * (ci * cj) as f64;
                    }
                }
                if blk.half_norm > 0 {
                    pref *= (4.0 * pi * s).powf(-(blk.half_norm as f64) / 2.0);
                }
            }
            let Some((cz, det_a)) = spd_inverse(&a) else {
                return Complex64::new(f64::NAN, 0.0);
            };
            pref *= pi.powi(n as i32) / det_a;
            let zm: Vec<f64> = g.zmoments.iter().map(|p| eval_pairings(p, &cz)).collect();
            let tm: Vec<f64> = if self.half_space {
                let mut om = OrthantMoments::new(b);
                match g
                    .tkeys
                    .iter()
                    .map(|k| om.moment(k))
                    .collect::<Option<Vec<f64>>>()
                {
                    Some(v) => v,
                    None => return Complex64::new(f64::NAN, 0.0),
                }
            } else {
                let Some((bi, det_b)) = spd_inverse(&b) else {
                    return Complex64::new(f64::NAN, 0.0);
                };
                let ct: Vec<Vec<f64>> = bi
                    .iter()
                    .map(|r| r.iter().map(|x| 0.5 * x).collect())
                    .collect();
                pref *= pi.powf(n as f64 / 2.0) / det_b.sqrt();
                g.tmoments.iter().map(|p| eval_pairings(p, &ct)).collect()
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for term in &g.terms {
                let m = zm[term.z] * tm[term.t];
                if m != 0.0 {
                    acc += term.weight * (term.coef.eval(&lookup) * m);
                }
            }
            total += acc * pref;
        }
        total
    }

    pub(crate) fn finish(&self, r: BoxResult, sup: &SupTracker) -> Result<WeightResult> {
        if !(r.re.is_finite() && r.im.is_finite()) {
            return Err(Error::Numeric(
                "weight integrand degenerated on the scale grid".into(),
            ));
        }
        Ok(WeightResult {
            value: r.re,
            value_imag: r.im,
            error_estimate: r.error,
            degree_zero_flag: false,
            scaled_sup: sup.get(),
            points: r.points,
        })
    }
}

/// Running maximum of `|I(T)| (sum T)^{3/2}`, safe to share across threads.
#[derive(Default)]
pub(crate) struct SupTracker(AtomicU64);

impl SupTracker {
    pub fn track(&self, t: &[f64], v: Complex64) -> Complex64 {
        let s = v.norm() * t.iter().sum::<f64>().powf(1.5);
        if s.is_finite() {
            self.0.fetch_max(s.to_bits(), Ordering::Relaxed);
        }
        v
    }

    pub fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_counts() {
        // E|z|^4 = 2 C^2, E t^4 = 3 C^2
        let p = expand_complex(&[2], &[2]);
        assert_eq!(p, vec![(2.0, vec![(0, 0), (0, 0)])]);
        let r = expand_real(&[4]);
        assert_eq!(r, vec![(3.0, vec![(0, 0), (0, 0)])]);
        assert!(expand_real(&[1, 0]).is_empty());
    }
}
