//! The exact identity suite: every check runs in rational arithmetic with
//! symbolic scales and reports pass or fail without aborting the rest.

use serde::Serialize;

use crate::exterior::{Combo, Coord, CoordKind, FormExpression, Monomial};
use crate::gaussian::RankOneShiftedMatrix;
use crate::graphs::{ChiralGraph, ChiralVertex};
use crate::kernels::{
    dt_minus_tau, dz_minus_zeta, gauge_fix_adjoint, gaussian_form, heat_kernel_diag,
    holomorphic_reduction_check, lambda, product_gaussian, product_propagator,
    product_propagator_via_lambda, propagator_diag, solve_lambda_constants, tau, zeta,
    DiffOperator, ScaleVector,
};
use crate::ratfn::{qf, RatFn, Symbol, Q};
use crate::weights::{anomaly_integrand, bulk_integrand, TestInput};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn outcome(name: &str, r: crate::Result<bool>, detail: &str) -> Check {
    match r {
        Ok(p) => check(name, p, detail),
        Err(e) => check(name, false, format!("{detail}: {e}")),
    }
}

/// Largest `n` of the product identities.
pub const MAX_PRODUCT_ARITY: usize = 4;

/// Runs the suite with the solved constants of `lambda`.
pub fn identity_suite() -> Vec<Check> {
    match solve_lambda_constants() {
        Ok((c1, c2)) => identity_suite_with(&c1, &c2),
        Err(e) => vec![check("lambda constants solvable", false, e.to_string())],
    }
}

/// Runs the suite with the given constants in `lambda`.
pub fn identity_suite_with(c1: &Q, c2: &Q) -> Vec<Check> {
    let t = Symbol::t(0);
    let mut out = vec![
        check(
            "gauge-fixing adjoint of the heat kernel is the propagator integrand",
            gauge_fix_adjoint(&heat_kernel_diag(t), 0) == propagator_diag(t),
            "one slot, symbolic T",
        ),
        check(
            "lambda maps the Gaussian to the propagator integrand",
            lambda(0, c1, c2).apply(&gaussian_form(t)) == propagator_diag(t),
            format!("c1 = {c1}, c2 = {c2}"),
        ),
    ];
    for k in 1..=3 {
        out.push(check(
            format!("holomorphic derivative of order {k} multiplies by -zbar/4T"),
            holomorphic_reduction_check(k),
            "one slot, symbolic T",
        ));
    }
    for n in 1..=MAX_PRODUCT_ARITY {
        out.extend(product_checks(n, c1, c2));
    }
    out.extend(matrix_checks());
    out.extend(vanishing_checks());
    out
}

fn linear(kind: CoordKind, combo: &Combo) -> FormExpression {
    FormExpression::linear(kind, combo)
}

fn product_checks(n: usize, c1: &Q, c2: &Q) -> Vec<Check> {
    let r = (|| -> crate::Result<Vec<Check>> {
        let tv = ScaleVector::symbolic(n + 1)?;
        let s = tv.symbols();
        let g = product_gaussian(&tv)?;
        let total = Combo::new((0..n).map(|i| (i, 1)));
        let tn = RatFn::var(s[n]).recip();
        let mut out = Vec::new();
        let zeta_rhs = linear(CoordKind::Zbar, &total)
            .wedge(&g)?
            .scale(&(&RatFn::constant(qf(-1, 4)) * &tn));
        out.push(check(
            format!("zeta acts on the product Gaussian (n = {n})"),
            zeta(&tv)?.apply(&g) == zeta_rhs,
            "",
        ));
        let tau_rhs = linear(CoordKind::T, &total)
            .wedge(&g)?
            .scale(&(&RatFn::constant(qf(-1, 2)) * &tn));
        out.push(check(
            format!("tau acts on the product Gaussian (n = {n})"),
            tau(&tv)?.apply(&g) == tau_rhs,
            "",
        ));
        for j in 0..n {
            let tj = RatFn::var(s[j]).recip();
            let slot = Combo::slot(j);
            let dz = linear(CoordKind::Zbar, &slot)
                .wedge(&g)?
                .scale(&(&RatFn::constant(qf(-1, 4)) * &tj));
            out.push(check(
                format!("d/dz_{j} - zeta isolates slot {j} (n = {n})"),
                dz_minus_zeta(j, &tv)?.apply(&g) == dz,
                "",
            ));
            let dt = linear(CoordKind::T, &slot)
                .wedge(&g)?
                .scale(&(&RatFn::constant(qf(-1, 2)) * &tj));
            out.push(check(
                format!("d/dt_{j} - tau isolates slot {j} (n = {n})"),
                dt_minus_tau(j, &tv)?.apply(&g) == dt,
                "",
            ));
        }
        let via = product_propagator_via_lambda(&tv, c1, c2)?;
        out.push(check(
            format!("product propagator from lambda on each factor (n = {n})"),
            via == product_propagator(&tv)?,
            "",
        ));
        let mut ops: Vec<DiffOperator> = (0..n).map(|i| lambda(i, c1, c2)).collect();
        ops.push(zeta(&tv)?);
        ops.extend(
            (0..n)
                .map(|j| dz_minus_zeta(j, &tv))
                .collect::<crate::Result<Vec<_>>>()?,
        );
        let probe = g.mul_monomial(&Monomial::pow(Coord::zbar(0), 1));
        let mut commute = true;
        let mut failed = String::new();
        for a in 0..ops.len() {
            for b in a + 1..ops.len() {
                for f in [&g, &probe] {
                    if !ops[a].graded_commutator(&ops[b], f).is_zero() {
                        commute = false;
                        failed = format!("[{}, {}]", ops[a].name, ops[b].name);
                    }
                }
            }
        }
        out.push(check(
            format!("lambda_i, zeta and d/dz_j - zeta commute (n = {n})"),
            commute,
            failed,
        ));
        Ok(out)
    })();
    r.unwrap_or_else(|e| {
        vec![check(
            format!("product identities (n = {n})"),
            false,
            e.to_string(),
        )]
    })
}

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<RatFn>]) -> RatFn {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut det = RatFn::zero();
    for (j, a) in m[0].iter().enumerate() {
        let minor: Vec<Vec<RatFn>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = a * &cofactor_det(&minor);
        det = if j % 2 == 0 {
            &det + &term
        } else {
            &det - &term
        };
    }
    det
}

fn matrix_checks() -> Vec<Check> {
    (1..=MAX_PRODUCT_ARITY)
        .map(|n| {
            let name = format!("Sherman-Morrison inverse and determinant (n = {n})");
            let r = (|| -> crate::Result<bool> {
                let m = RankOneShiftedMatrix::new(&ScaleVector::symbolic(n + 1)?)?;
                let (a, b) = (m.matrix(), m.inverse());
                for i in 0..n {
                    for k in 0..n {
                        let e = (0..n).fold(RatFn::zero(), |acc, j| &acc + &(&a[i][j] * &b[j][k]));
                        let want = if i == k { RatFn::one() } else { RatFn::zero() };
                        if e != want {
                            return Ok(false);
                        }
                    }
                }
                Ok(&cofactor_det(&a) * &m.det_inverse() == RatFn::one())
            })();
            outcome(&name, r, "")
        })
        .collect()
}

fn vanishing_checks() -> Vec<Check> {
    let cubic = |o: [u8; 3]| ChiralVertex::new(2, 1, o.to_vec(), "cubic");
    let inputs = TestInput::wheel_inputs(2);
    (0..=2u8)
        .map(|d| {
            let r = (|| -> crate::Result<bool> {
                let one = ChiralGraph::wheel(vec![cubic([d, 0, d])?]);
                let two = ChiralGraph::wheel(vec![cubic([d, 0, 0])?, cubic([0, d, d])?]);
                let mut zero = bulk_integrand(&one, &inputs[..1])?.is_none()
                    && bulk_integrand(&two, &inputs)?.is_none();
                for e in 0..2 {
                    zero &= anomaly_integrand(&two, e, &inputs)?.is_none();
                }
                Ok(zero)
            })();
            outcome(
                &format!("one- and two-vertex wheels vanish (derivative order {d})"),
                r,
                "bulk and anomaly",
            )
        })
        .collect()
}
