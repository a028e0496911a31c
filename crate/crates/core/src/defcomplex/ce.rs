//! Chevalley-Eilenberg complexes `Lambda g^v (x) M` and the two-term complex `A`.

use std::collections::HashMap;

use num::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::lie::FinDimLieAlgebra;
use super::linalg::{self, Matrix};
use crate::error::{Error, Result};
use crate::ratfn::Q;

/// Coefficient module of a cochain complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Module {
    Trivial,
    Adjoint,
    Coadjoint,
}

impl Module {
    pub fn dim(self, g: &FinDimLieAlgebra) -> usize {
        match self {
            Module::Trivial => 1,
            _ => g.dim(),
        }
    }

    /// `rho(x_i)` on coordinate columns.
    fn action(self, g: &FinDimLieAlgebra, i: usize) -> Matrix {
        match self {
            Module::Trivial => linalg::zeros(1, 1),
            Module::Adjoint => g.ad(i),
            Module::Coadjoint => {
                let ad = g.ad(i);
                let n = g.dim();
                (0..n)
                    .map(|j| (0..n).map(|k| -ad[k][j].clone()).collect())
                    .collect()
            }
        }
    }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Sign and sorted form of `l` prepended to the increasing list `rest`, or
/// `None` if `l` already occurs.
fn insert_front(l: usize, rest: &[usize]) -> Option<(i32, Vec<usize>)> {
    if rest.contains(&l) {
        return None;
    }
    let pos = rest.iter().filter(|&&r| r < l).count();
    let mut v = rest.to_vec();
    v.insert(pos, l);
    Some((if pos % 2 == 0 { 1 } else { -1 }, v))
}

/// `C^*(g; M)` with one differential matrix per degree.
#[derive(Clone, Debug)]
pub struct CEComplex {
    pub module: Module,
    /// `dims[k] = dim C^k`.
    pub dims: Vec<usize>,
    /// `diffs[k] : C^k -> C^{k+1}`, rows indexed by the target basis.
    pub diffs: Vec<Matrix>,
}

fn index_of(sets: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    sets.iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect()
}

impl CEComplex {
    pub fn new(g: &FinDimLieAlgebra, module: Module) -> Self {
        let n = g.dim();
        let m = module.dim(g);
        let sets: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets(n, k)).collect();
        let rho: Vec<Matrix> = (0..n).map(|i| module.action(g, i)).collect();
        let dims: Vec<usize> = sets.iter().map(|s| s.len() * m).collect();
        let diffs = (0..=n)
            .map(|k| {
                if k == n {
                    return linalg::zeros(0, dims[k]);
                }
                let src = index_of(&sets[k]);
                let mut d = linalg::zeros(dims[k + 1], dims[k]);
                for (row_set, target) in sets[k + 1].iter().enumerate() {
                    // sum_i (-1)^i rho(x_{s_i}) w(.. s_i omitted ..)
                    for (i, &s) in target.iter().enumerate() {
                        let mut rest = target.clone();
                        rest.remove(i);
                        let col_set = src[&rest];
                        let sign = if i % 2 == 0 {
                            Q::from_integer(1.into())
                        } else {
                            Q::from_integer((-1).into())
                        };
                        for a in 0..m {
                            for b in 0..m {
                                if !rho[s][a][b].is_zero() {
                                    d[row_set * m + a][col_set * m + b] += &sign * &rho[s][a][b];
                                }
                            }
                        }
                    }
                    // sum_{i<j} (-1)^{i+j} w([x_{s_i}, x_{s_j}], ..)
                    for i in 0..target.len() {
                        for j in i + 1..target.len() {
                            let mut rest = target.clone();
                            rest.remove(j);
                            rest.remove(i);
                            let base = if (i + j) % 2 == 0 { 1 } else { -1 };
                            for (l, c) in g.structure[target[i]][target[j]].iter().enumerate() {
                                if c.is_zero() {
                                    continue;
                                }
                                let Some((s2, set)) = insert_front(l, &rest) else {
                                    continue;
                                };
                                let col_set = src[&set];
                                let f = c * Q::from_integer(((base * s2) as i64).into());
                                for a in 0..m {
                                    d[row_set * m + a][col_set * m + a] += &f;
                                }
                            }
                        }
                    }
                }
                d
            })
            .collect();
        CEComplex {
            module,
            dims,
            diffs,
        }
    }

    /// Checks `d^{k+1} d^k = 0` for every degree.
    pub fn check_square_zero(&self) -> Result<()> {
        for k in 0..self.diffs.len().saturating_sub(1) {
            let dd = linalg::mul(
                &self.diffs[k + 1],
                &self.diffs[k],
                self.dims[k + 1],
                self.dims[k],
            );
            if !linalg::is_zero(&dd) {
                return Err(Error::Construction(format!("d^2 != 0 in degree {k}")));
            }
        }
        Ok(())
    }

    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        self.check_square_zero()?;
        Ok(cohomology(&self.dims, &self.diffs))
    }

    /// Same complex with the degree-0 part removed.
    pub fn reduced(&self) -> Self {
        let mut c = self.clone();
        c.dims[0] = 0;
        c.diffs[0] = linalg::zeros(c.dims[1], 0);
        c
    }
}

fn cohomology(dims: &[usize], diffs: &[Matrix]) -> Vec<usize> {
    let ranks: Vec<usize> = diffs.par_iter().map(linalg::rank).collect();
    (0..dims.len())
        .map(|k| dims[k] - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
        .collect()
}

/// Euler characteristic `sum (-1)^k dims[k]`.
pub fn euler_characteristic(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Total complex of `C_red(g)[3] -> C(g; g^v)[1]`, the connecting map
/// sending a cochain to its contraction in the first slot.
#[derive(Clone, Debug)]
pub struct ComplexA {
    /// Lowest degree; `dims[i]` is the dimension in degree `min_degree + i`.
    pub min_degree: i32,
    pub dims: Vec<usize>,
    pub diffs: Vec<Matrix>,
}

impl ComplexA {
    pub fn new(g: &FinDimLieAlgebra) -> Self {
        let n = g.dim();
        let red = CEComplex::new(g, Module::Trivial).reduced();
        let coad = CEComplex::new(g, Module::Coadjoint);
        let connect = koszul_maps(g);
        let min_degree = -2;
        let max_degree = n as i32 - 1;
        let red_dim = |k: i32| {
            if (0..=n as i32).contains(&k) {
                red.dims[k as usize]
            } else {
                0
            }
        };
        let coad_dim = |j: i32| {
            if (0..=n as i32).contains(&j) {
                coad.dims[j as usize]
            } else {
                0
            }
        };
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for deg in min_degree..=max_degree {
            let (k, j) = (deg + 3, deg + 1);
            let (r0, c0) = (red_dim(k), coad_dim(j));
            dims.push(r0 + c0);
            let (r1, c1) = (red_dim(k + 1), coad_dim(j + 1));
            let mut d = linalg::zeros(r1 + c1, r0 + c0);
            if r0 > 0 && r1 > 0 {
                copy_block(&mut d, &red.diffs[k as usize], 0, 0);
            }
            if c0 > 0 && c1 > 0 {
                copy_block(&mut d, &coad.diffs[j as usize], r1, r0);
            }
            if r0 > 0 && c1 > 0 {
                copy_block(&mut d, &connect[k as usize], r1, 0);
            }
            diffs.push(d);
        }
        ComplexA {
            min_degree,
            dims,
            diffs,
        }
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for i in 0..self.diffs.len().saturating_sub(1) {
            let dd = linalg::mul(
                &self.diffs[i + 1],
                &self.diffs[i],
                self.dims[i + 1],
                self.dims[i],
            );
            if !linalg::is_zero(&dd) {
                return Err(Error::Construction(format!(
                    "total d^2 != 0 in degree {}",
                    self.min_degree + i as i32
                )));
            }
        }
        Ok(())
    }

    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        self.check_square_zero()?;
        Ok(cohomology(&self.dims, &self.diffs))
    }
}

fn copy_block(dst: &mut Matrix, src: &Matrix, row: usize, col: usize) {
    for (i, r) in src.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            dst[row + i][col + j] = x.clone();
        }
    }
}

/// `kappa_k : C^k(g) -> C^{k-1}(g; g^v)`, `kappa(w)(x_S)(x_l) = w(x_l, x_S)`.
/// It anticommutes with the differentials, so no degree sign is needed.
fn koszul_maps(g: &FinDimLieAlgebra) -> Vec<Matrix> {
    let n = g.dim();
    (0..=n)
        .map(|k| {
            let src_sets = subsets(n, k);
            if k == 0 {
                return linalg::zeros(n, src_sets.len());
            }
            let src = index_of(&src_sets);
            let dst_sets = subsets(n, k - 1);
            let mut m = linalg::zeros(dst_sets.len() * n, src_sets.len());
            for (row, s) in dst_sets.iter().enumerate() {
                for l in 0..n {
                    if let Some((sign, set)) = insert_front(l, s) {
                        m[row * n + l][src[&set]] = Q::from_integer((sign as i64).into());
                    }
                }
            }
            m
        })
        .collect()
}

/// Weight-one triviality: `H^k(g; g) = 0` for all `k`, for semisimple `g`.
pub fn weight_one_triviality(g: &FinDimLieAlgebra) -> Result<bool> {
    if !g.is_semisimple() {
        return Err(Error::Precondition(format!(
            "{} is not semisimple: its Killing form has rank {} < {}",
            g.name,
            linalg::rank(&g.killing()),
            g.dim()
        )));
    }
    let dims = CEComplex::new(g, Module::Adjoint).cohomology_dims()?;
    Ok(dims.iter().all(|&d| d == 0))
}
