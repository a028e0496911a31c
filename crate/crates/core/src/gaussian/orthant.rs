//! Moments `int_{x >= 0} x^a exp(-x^T B x) d^n x` over the positive orthant.
//!
//! Integrating by parts in `x_i` gives
//! `sum_j 2 B_ij M(a + e_j) = a_i M(a - e_i) + [a_i = 0] M_i(a)`, where `M_i`
//! is the moment on the face `x_i = 0`. Solving with `B^{-1}` lowers the
//! degree by one per step and the dimension on faces, down to the Gaussian
//! mass of an orthant, known in closed form up to three dimensions.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::wick::spd_inverse;

/// Largest dimension with a closed-form orthant mass.
pub const MAX_ORTHANT_DIM: usize = 3;

struct Face {
    /// Active coordinates of the face, as indices into the full matrix.
    index: Vec<usize>,
    /// Half the inverse of the restricted form: the covariance.
    cov: Vec<Vec<f64>>,
    mass: f64,
}

/// Memoized orthant moments of one positive definite form.
pub struct OrthantMoments {
    b: Vec<Vec<f64>>,
    faces: HashMap<u32, Option<Face>>,
    memo: HashMap<(u32, Vec<u8>), f64>,
}

fn orthant_probability(cov: &[Vec<f64>]) -> Option<f64> {
    let rho = |i: usize, j: usize| (cov[i][j] / (cov[i][i] * cov[j][j]).sqrt()).clamp(-1.0, 1.0);
    match cov.len() {
        0 => Some(1.0),
        1 => Some(0.5),
        2 => Some(0.25 + rho(0, 1).asin() / (2.0 * PI)),
        3 => Some(0.125 + (rho(0, 1).asin() + rho(0, 2).asin() + rho(1, 2).asin()) / (4.0 * PI)),
        _ => None,
    }
}

impl OrthantMoments {
    pub fn new(b: Vec<Vec<f64>>) -> Self {
        OrthantMoments {
            b,
            faces: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    fn face(&mut self, mask: u32) -> Option<&Face> {
        let b = &self.b;
        self.faces
            .entry(mask)
            .or_insert_with(|| {
                let index: Vec<usize> = (0..b.len()).filter(|&i| mask & (1 << i) != 0).collect();
                let sub: Vec<Vec<f64>> = index
                    .iter()
                    .map(|&i| index.iter().map(|&j| b[i][j]).collect())
                    .collect();
                let (inv, det) = spd_inverse(&sub)?;
                let cov: Vec<Vec<f64>> = inv
                    .iter()
                    .map(|r| r.iter().map(|x| 0.5 * x).collect())
                    .collect();
                let mass =
                    PI.powf(index.len() as f64 / 2.0) / det.sqrt() * orthant_probability(&cov)?;
                Some(Face { index, cov, mass })
            })
            .as_ref()
    }

    /// Moment with exponents `alpha` over all coordinates; `None` if the
    /// form is not positive definite or the dimension exceeds
    /// [`MAX_ORTHANT_DIM`].
    pub fn moment(&mut self, alpha: &[u8]) -> Option<f64> {
        let mask = (1u32 << self.b.len()) - 1;
        self.face_moment(mask, alpha)
    }

    /// `alpha` is indexed by full coordinates; entries off the face are zero.
    fn face_moment(&mut self, mask: u32, alpha: &[u8]) -> Option<f64> {
        if let Some(&v) = self.memo.get(&(mask, alpha.to_vec())) {
            return Some(v);
        }
        let face = self.face(mask)?;
        let Some(k) = face.index.iter().position(|&i| alpha[i] > 0) else {
            return Some(face.mass);
        };
        let index = face.index.clone();
        let cov_k = face.cov[k].clone();
        let mut lower = alpha.to_vec();
        lower[index[k]] -= 1;
        let mut v = 0.0;
        for (pos, &i) in index.iter().enumerate() {
            let c = cov_k[pos];
            if c == 0.0 {
                continue;
            }
            let term = if lower[i] > 0 {
                let mut down = lower.clone();
                down[i] -= 1;
                lower[i] as f64 * self.face_moment(mask, &down)?
            } else {
                self.face_moment(mask & !(1 << i), &lower)?
            };
            v += c * term;
        }
        self.memo.insert((mask, alpha.to_vec()), v);
        Some(v)
    }
}
