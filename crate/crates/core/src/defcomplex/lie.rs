//! Finite-dimensional Lie algebras with rational structure constants and an
//! invariant pairing.

use std::collections::BTreeMap;
use std::path::Path;

use num::Zero;
use serde::Deserialize;

use super::linalg::{self, Matrix};
use crate::error::{Error, Result};
use crate::ratfn::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct FinDimLieAlgebra {
    pub name: String,
    pub basis: Vec<String>,
    /// `structure[i][j][k] = f^k_ij`, so `[x_i, x_j] = sum_k f^k_ij x_k`.
    pub structure: Vec<Vec<Vec<Q>>>,
    pub pairing: Matrix,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn value(&self) -> Result<Q> {
        match self {
            Num::Int(n) => Ok(Q::from_integer((*n).into())),
            Num::Text(s) => s
                .trim()
                .parse::<Q>()
                .map_err(|_| Error::Parse(format!("not a rational number: {s:?}"))),
        }
    }
}

#[derive(Deserialize)]
struct BracketEntry {
    x: String,
    y: String,
    value: BTreeMap<String, Num>,
}

#[derive(Deserialize)]
struct PairingEntry {
    x: String,
    y: String,
    value: Num,
}

#[derive(Deserialize)]
struct AlgebraFile {
    name: String,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<BracketEntry>,
    pairing: Vec<PairingEntry>,
}

const SHIPPED: [(&str, &str); 3] = [
    ("sl2", include_str!("../../data/sl2.toml")),
    ("sl2+sl2", include_str!("../../data/sl2_sl2.toml")),
    ("abelian1", include_str!("../../data/abelian1.toml")),
];

impl FinDimLieAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Parses the TOML description and checks every axiom.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: AlgebraFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = file.basis.len();
        if n == 0 {
            return Err(Error::Parse("empty basis".into()));
        }
        let index = |name: &str| -> Result<usize> {
            file.basis
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| Error::Parse(format!("unknown basis element {name:?}")))
        };
        let mut structure = vec![vec![vec![Q::zero(); n]; n]; n];
        for b in &file.brackets {
            let (i, j) = (index(&b.x)?, index(&b.y)?);
            for (k, v) in &b.value {
                let k = index(k)?;
                let c = v.value()?;
                structure[i][j][k] = c.clone();
                structure[j][i][k] = -c;
            }
        }
        let mut pairing = linalg::zeros(n, n);
        for p in &file.pairing {
            let (i, j) = (index(&p.x)?, index(&p.y)?);
            let c = p.value.value()?;
            pairing[i][j] = c.clone();
            pairing[j][i] = c;
        }
        let g = FinDimLieAlgebra {
            name: file.name,
            basis: file.basis,
            structure,
            pairing,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// One of the algebras shipped with the library: `sl2`, `sl2+sl2`, `abelian1`.
    pub fn shipped(name: &str) -> Result<Self> {
        SHIPPED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| Self::from_toml(text))
            .unwrap_or_else(|| Err(Error::Domain(format!("no shipped algebra named {name:?}"))))
    }

    pub fn shipped_names() -> Vec<&'static str> {
        SHIPPED.iter().map(|(n, _)| *n).collect()
    }

    /// Antisymmetry, Jacobi, and a symmetric nondegenerate invariant pairing.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let f = &self.structure;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if f[i][j][k] != -f[j][i][k].clone() {
                        return Err(Error::Construction(format!(
                            "bracket not antisymmetric at ({i},{j})"
                        )));
                    }
                }
            }
        }
        // [x_i,[x_j,x_k]] + cyclic = 0
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = Q::zero();
                        for l in 0..n {
                            s += &f[j][k][l] * &f[i][l][m];
                            s += &f[k][i][l] * &f[j][l][m];
                            s += &f[i][j][l] * &f[k][l][m];
                        }
                        if !s.is_zero() {
                            return Err(Error::Construction(format!(
                                "Jacobi identity fails at ({i},{j},{k})"
                            )));
                        }
                    }
                }
            }
        }
        let p = &self.pairing;
        for i in 0..n {
            for j in 0..n {
                if p[i][j] != p[j][i] {
                    return Err(Error::Construction("pairing not symmetric".into()));
                }
            }
        }
        if linalg::rank(p) != n {
            return Err(Error::Construction("pairing is degenerate".into()));
        }
        // <[x_i,x_j],x_k> + <x_j,[x_i,x_k]> = 0
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = Q::zero();
                    for l in 0..n {
                        s += &f[i][j][l] * &p[l][k];
                        s += &f[i][k][l] * &p[j][l];
                    }
                    if !s.is_zero() {
                        return Err(Error::Construction(format!(
                            "pairing not invariant at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `ad(x_i)` as a matrix acting on coordinate columns: `ad_i[k][j] = f^k_ij`.
    pub fn ad(&self, i: usize) -> Matrix {
        let n = self.dim();
        (0..n)
            .map(|k| (0..n).map(|j| self.structure[i][j][k].clone()).collect())
            .collect()
    }

    /// Killing form `tr(ad x_i ad x_j)`.
    pub fn killing(&self) -> Matrix {
        let n = self.dim();
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad(i)).collect();
        let mut k = linalg::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let prod = linalg::mul(&ads[i], &ads[j], n, n);
                k[i][j] = (0..n).fold(Q::zero(), |acc, d| acc + &prod[d][d]);
            }
        }
        k
    }

    pub fn is_semisimple(&self) -> bool {
        linalg::rank(&self.killing()) == self.dim()
    }

    /// Direct sum with bases suffixed by their summand.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let n = a + b;
        let mut structure = vec![vec![vec![Q::zero(); n]; n]; n];
        let mut pairing = linalg::zeros(n, n);
        for i in 0..a {
            for j in 0..a {
                pairing[i][j] = self.pairing[i][j].clone();
                for k in 0..a {
                    structure[i][j][k] = self.structure[i][j][k].clone();
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                pairing[a + i][a + j] = other.pairing[i][j].clone();
                for k in 0..b {
                    structure[a + i][a + j][a + k] = other.structure[i][j][k].clone();
                }
            }
        }
        let basis = self
            .basis
            .iter()
            .map(|s| format!("{s}_1"))
            .chain(other.basis.iter().map(|s| format!("{s}_2")))
            .collect();
        FinDimLieAlgebra {
            name: format!("{}+{}", self.name, other.name),
            basis,
            structure,
            pairing,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfn::q;

    #[test]
    fn shipped_algebras_validate() {
        for name in FinDimLieAlgebra::shipped_names() {
            FinDimLieAlgebra::shipped(name).unwrap();
        }
    }

    #[test]
    fn sl2_killing_is_four_times_trace_form() {
        let g = FinDimLieAlgebra::shipped("sl2").unwrap();
        let k = g.killing();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(k[i][j], &g.pairing[i][j] * &q(4));
            }
        }
        assert!(g.is_semisimple());
        assert!(!FinDimLieAlgebra::shipped("abelian1")
            .unwrap()
            .is_semisimple());
    }

    #[test]
    fn broken_jacobi_is_rejected() {
        let text = r#"
            name = "bad"
            basis = ["a", "b", "c"]
            brackets = [{ x = "a", y = "b", value = { c = "1" } }, { x = "b", y = "c", value = { b = "1" } }]
            pairing = [{ x = "a", y = "a", value = 1 }, { x = "b", y = "b", value = 1 }, { x = "c", y = "c", value = 1 }]
        "#;
        assert!(FinDimLieAlgebra::from_toml(text).is_err());
    }
}
