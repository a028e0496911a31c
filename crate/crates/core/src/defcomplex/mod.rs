//! Exact Chevalley-Eilenberg cohomology for the deformation complexes of the
//! mixed theory, and the local functionals their cocycles define.

pub mod ce;
pub mod lie;
pub mod linalg;

use num::Zero;

pub use ce::{euler_characteristic, subsets, weight_one_triviality, CEComplex, ComplexA, Module};
pub use lie::FinDimLieAlgebra;

use crate::error::{Error, Result};
use crate::graphs::ChiralVertex;
use crate::ratfn::Q;

/// A homogeneous cochain in `C^k(g; M)`, stored on increasing index sets in
/// the order of [`subsets`], module coordinates innermost.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub module: Module,
    pub arity: usize,
    pub values: Vec<Q>,
}

impl Cochain {
    pub fn new(g: &FinDimLieAlgebra, module: Module, arity: usize, values: Vec<Q>) -> Result<Self> {
        let expected = subsets(g.dim(), arity).len() * module.dim(g);
        if arity > g.dim() || values.len() != expected {
            return Err(Error::Domain(format!(
                "a cochain of arity {arity} needs {expected} coordinates, got {}",
                values.len()
            )));
        }
        Ok(Cochain {
            module,
            arity,
            values,
        })
    }

    pub fn zero(g: &FinDimLieAlgebra, module: Module, arity: usize) -> Self {
        let n = subsets(g.dim(), arity).len() * module.dim(g);
        Cochain {
            module,
            arity,
            values: vec![Q::zero(); n],
        }
    }

    /// The invariant pairing as `x -> <x, .>` in `C^1(g; g^v)`.
    pub fn from_pairing(pairing: &linalg::Matrix) -> Self {
        let values = pairing.iter().flat_map(|r| r.iter().cloned()).collect();
        Cochain {
            module: Module::Coadjoint,
            arity: 1,
            values,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

/// `mu -> int ev(mu(alpha, .., alpha), d alpha)`: `k + 1` alpha-legs, the
/// derivative on the last one. `None` for the zero cochain.
pub fn render_j0(mu: &Cochain) -> Result<Option<ChiralVertex>> {
    if mu.module != Module::Coadjoint {
        return Err(Error::Domain(
            "j0 takes a cochain with values in the coadjoint module".into(),
        ));
    }
    if mu.is_zero() {
        return Ok(None);
    }
    let k = mu.arity;
    if k == 1 {
        return Ok(Some(ChiralVertex::chern_simons()));
    }
    let mut orders = vec![0; k + 1];
    orders[k] = 1;
    ChiralVertex::new(k as u8 + 1, 0, orders, &format!("j0_{k}")).map(Some)
}

/// `xi -> int <beta, xi(alpha, .., alpha)>`: `k` alpha-legs and one beta-leg,
/// no derivatives. `None` for the zero cochain.
pub fn render_j1(xi: &Cochain) -> Result<Option<ChiralVertex>> {
    if xi.module != Module::Adjoint {
        return Err(Error::Domain(
            "j1 takes a cochain with values in the adjoint module".into(),
        ));
    }
    if xi.arity == 0 {
        return Err(Error::Domain("j1 of a 0-cochain has no alpha-leg".into()));
    }
    if xi.is_zero() {
        return Ok(None);
    }
    let k = xi.arity;
    ChiralVertex::new(k as u8, 1, vec![0; k + 1], &format!("j1_{k}")).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn killing_form_renders_chern_simons() {
        let g = FinDimLieAlgebra::shipped("sl2").unwrap();
        let v = render_j0(&Cochain::from_pairing(&g.killing()))
            .unwrap()
            .unwrap();
        assert_eq!((v.alpha_legs, v.beta_legs), (2, 0));
        assert_eq!(v.deriv_orders.iter().filter(|&&d| d == 1).count(), 1);
        assert!(render_j0(&Cochain::zero(&g, Module::Coadjoint, 2))
            .unwrap()
            .is_none());
    }

    #[test]
    fn j1_shape() {
        let g = FinDimLieAlgebra::shipped("sl2").unwrap();
        let mut xi = Cochain::zero(&g, Module::Adjoint, 2);
        xi.values[0] = Q::from_integer(1.into());
        let v = render_j1(&xi).unwrap().unwrap();
        assert_eq!(
            (v.alpha_legs, v.beta_legs, v.deriv_orders.clone()),
            (2, 1, vec![0, 0, 0])
        );
        assert!(render_j1(&Cochain::zero(&g, Module::Adjoint, 0)).is_err());
    }
}
