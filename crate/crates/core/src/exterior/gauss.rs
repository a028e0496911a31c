use std::fmt;

use num_complex::Complex64;
use smallvec::SmallVec;

use super::coord::{Coord, CoordKind, Monomial};
use crate::ratfn::{qf, Poly, RatFn, Symbol};

/// Integer linear combination of slots, `sum c_k x_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Combo(SmallVec<[(u16, i64); 3]>);

impl Combo {
    pub fn new(pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut v: SmallVec<[(u16, i64); 3]> = SmallVec::new();
        for (s, c) in pairs {
            match v.iter_mut().find(|(t, _)| *t as usize == s) {
                Some(e) => e.1 += c,
                None => v.push((s as u16, c)),
            }
        }
        v.retain(|(_, c)| *c != 0);
        v.sort();
        Combo(v)
    }

    pub fn slot(s: usize) -> Self {
        Combo::new([(s, 1)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> &[(u16, i64)] {
        &self.0
    }

    pub fn coeff(&self, slot: u16) -> i64 {
        self.0
            .iter()
            .find(|(s, _)| *s == slot)
            .map(|&(_, c)| c)
            .unwrap_or(0)
    }

    /// Same combination up to overall sign, with first coefficient positive.
    pub fn canonical_sign(&self) -> Combo {
        match self.0.first() {
            Some(&(_, c)) if c < 0 => Combo(self.0.iter().map(|&(s, c)| (s, -c)).collect()),
            _ => self.clone(),
        }
    }

    /// Composes with a map sending slot `s` to the combination `map[s]`.
    pub fn compose(&self, map: &[Combo]) -> Combo {
        Combo::new(self.0.iter().flat_map(|&(s, c)| {
            map[s as usize]
                .0
                .iter()
                .map(move |&(t, d)| (t as usize, c * d))
        }))
    }

    pub fn eval_f64(&self, x: impl Fn(usize) -> f64) -> f64 {
        self.0.iter().map(|&(s, c)| c as f64 * x(s as usize)).sum()
    }

    pub fn eval_c64(&self, x: impl Fn(usize) -> Complex64) -> Complex64 {
        self.0.iter().map(|&(s, c)| x(s as usize) * c as f64).sum()
    }

    /// The linear form `sum c_k x_k` in the coordinate kind `kind`.
    pub fn linear_terms(&self, kind: CoordKind) -> Vec<(Monomial, i64)> {
        self.0
            .iter()
            .map(|&(s, c)| (Monomial::var(Coord { slot: s, kind }), c))
            .collect()
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(s, c)) in self.0.iter().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let a = c.abs();
            if a == 1 {
                write!(f, "{sign}x{s}")?;
            } else {
                write!(f, "{sign}{a}x{s}")?;
            }
        }
        Ok(())
    }
}

/// `exp(-(|zc . z|^2 + (tc . t)^2) / 4S)`, optionally times `(4 pi S)^{-h/2}`.
///
/// `half_norm` counts real directions of the normalization: 3 for a heat
/// kernel on `C x R`, 0 for an unnormalized envelope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussBlock {
    pub z: Combo,
    pub t: Combo,
    pub scale: Symbol,
    pub half_norm: u8,
}

impl GaussBlock {
    pub fn new(z: Combo, t: Combo, scale: Symbol, half_norm: u8) -> Self {
        GaussBlock {
            z: z.canonical_sign(),
            t: t.canonical_sign(),
            scale,
            half_norm,
        }
    }

    /// Normalized heat kernel block in the combination `c` (same for z and t).
    pub fn heat(c: Combo, scale: Symbol) -> Self {
        GaussBlock::new(c.clone(), c, scale, 3)
    }

    /// Factor produced by `d/d coord` acting on the exponent, as a list of
    /// `(monomial, coefficient)`.
    pub fn derivative_factor(&self, coord: Coord) -> Vec<(Monomial, RatFn)> {
        let inv_s = RatFn::recip_poly(&Poly::var(self.scale));
        let (combo, other_kind, denom) = match coord.kind {
            CoordKind::Z => (&self.z, CoordKind::Zbar, 4),
            CoordKind::Zbar => (&self.z, CoordKind::Z, 4),
            CoordKind::T => (&self.t, CoordKind::T, 2),
        };
        let ci = combo.coeff(coord.slot);
        if ci == 0 {
            return Vec::new();
        }
        combo
            .linear_terms(other_kind)
            .into_iter()
            .map(|(m, ck)| {
                let c = RatFn::constant(qf(-ci * ck, denom));
                (m, &c * &inv_s)
            })
            .collect()
    }

    pub fn eval(&self, z: &impl Fn(usize) -> Complex64, t: &impl Fn(usize) -> f64, s: f64) -> f64 {
        let zc = self.z.eval_c64(z).norm_sqr();
        let tc = self.t.eval_f64(t).powi(2);
        let norm = if self.half_norm == 0 {
            1.0
        } else {
            (4.0 * std::f64::consts::PI * s).powf(-(self.half_norm as f64) / 2.0)
        };
        norm * (-(zc + tc) / (4.0 * s)).exp()
    }

    pub fn pullback(&self, zmap: &[Combo], tmap: &[Combo]) -> GaussBlock {
        GaussBlock::new(
            self.z.compose(zmap),
            self.t.compose(tmap),
            self.scale,
            self.half_norm,
        )
    }
}

impl fmt::Display for GaussBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G[{};{};{}", self.z, self.t, self.scale)?;
        if self.half_norm > 0 {
            write!(f, ";n{}", self.half_norm)?;
        }
        write!(f, "]")
    }
}

/// Product of Gaussian blocks; the empty tag means no Gaussian factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussTag(SmallVec<[GaussBlock; 4]>);

impl GaussTag {
    pub fn none() -> Self {
        GaussTag::default()
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = GaussBlock>) -> Option<Self> {
        blocks.into_iter().try_fold(GaussTag::none(), |acc, b| {
            acc.product(&GaussTag(smallvec::smallvec![b]))
        })
    }

    pub fn is_none(&self) -> bool {
        self.0.is_empty()
    }

    pub fn blocks(&self) -> &[GaussBlock] {
        &self.0
    }

    /// Product of two tags; `None` if a nontrivial block would be squared.
    pub fn product(&self, other: &GaussTag) -> Option<GaussTag> {
        let mut v = self.0.clone();
        for b in &other.0 {
            if !(b.z.is_empty() && b.t.is_empty()) && v.contains(b) {
                return None;
            }
            v.push(b.clone());
        }
        v.sort();
        Some(GaussTag(v))
    }

    pub fn derivative_factor(&self, coord: Coord) -> Vec<(Monomial, RatFn)> {
        self.0
            .iter()
            .flat_map(|b| b.derivative_factor(coord))
            .collect()
    }

    pub fn eval(
        &self,
        z: &impl Fn(usize) -> Complex64,
        t: &impl Fn(usize) -> f64,
        scale: &impl Fn(Symbol) -> f64,
    ) -> f64 {
        self.0
            .iter()
            .map(|b| b.eval(z, t, scale(b.scale)))
            .product()
    }

    pub fn pullback(&self, zmap: &[Combo], tmap: &[Combo]) -> GaussTag {
        let mut v: SmallVec<[GaussBlock; 4]> =
            self.0.iter().map(|b| b.pullback(zmap, tmap)).collect();
        v.sort();
        GaussTag(v)
    }

    pub fn rename_scale(&self, from: Symbol, to: Symbol) -> GaussTag {
        let mut v: SmallVec<[GaussBlock; 4]> = self
            .0
            .iter()
            .map(|b| {
                let mut b = b.clone();
                if b.scale == from {
                    b.scale = to;
                }
                b
            })
            .collect();
        v.sort();
        GaussTag(v)
    }
}

impl fmt::Display for GaussTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}
