use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::coord::{Coord, CoordKind, GenKind, Generator, Monomial, Word};
use super::gauss::{Combo, GaussTag};
use crate::error::{Error, Result};
use crate::ratfn::{RatFn, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub word: Word,
    pub mono: Monomial,
    pub tag: GaussTag,
}

/// Finite sum of `coefficient * monomial * gaussian * word` with merged keys
/// and no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormExpression {
    terms: BTreeMap<TermKey, RatFn>,
}

/// Numeric point: `(z_i, t_i)` for each slot.
pub type Point = [(Complex64, f64)];

impl FormExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(RatFn::one())
    }

    pub fn scalar(c: RatFn) -> Self {
        Self::term(c, Monomial::one(), GaussTag::none(), Word::empty())
    }

    pub fn term(c: RatFn, mono: Monomial, tag: GaussTag, word: Word) -> Self {
        let mut f = FormExpression::zero();
        f.add_term(TermKey { word, mono, tag }, c);
        f
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(
            RatFn::one(),
            Monomial::one(),
            GaussTag::none(),
            Word::single(g),
        )
    }

    pub fn coord(c: Coord) -> Self {
        Self::term(
            RatFn::one(),
            Monomial::var(c),
            GaussTag::none(),
            Word::empty(),
        )
    }

    pub fn gaussian(tag: GaussTag) -> Self {
        Self::term(RatFn::one(), Monomial::one(), tag, Word::empty())
    }

    /// One-form `sum c_k d(kind)_k` for a slot combination.
    pub fn one_form(kind: GenKind, combo: &Combo) -> Self {
        let mut f = FormExpression::zero();
        for &(s, c) in combo.terms() {
            let g = Generator { vertex: s, kind };
            f.add_term(
                TermKey {
                    word: Word::single(g),
                    mono: Monomial::one(),
                    tag: GaussTag::none(),
                },
                RatFn::int(c),
            );
        }
        f
    }

    /// Linear function `sum c_k x_k` in the coordinate kind.
    pub fn linear(kind: CoordKind, combo: &Combo) -> Self {
        let mut f = FormExpression::zero();
        for (m, c) in combo.linear_terms(kind) {
            f.add_term(
                TermKey {
                    word: Word::empty(),
                    mono: m,
                    tag: GaussTag::none(),
                },
                RatFn::int(c),
            );
        }
        f
    }

    pub fn add_term(&mut self, key: TermKey, c: RatFn) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &RatFn)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Form degree if homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.word.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&RatFn::int(-1))
    }

    pub fn scale(&self, c: &RatFn) -> Self {
        let mut out = FormExpression::zero();
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a * c);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = FormExpression::zero();
        for (k, a) in &self.terms {
            let key = TermKey {
                word: k.word.clone(),
                mono: k.mono.mul(m),
                tag: k.tag.clone(),
            };
            out.add_term(key, a.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let mut out = FormExpression::zero();
        for (ka, a) in &self.terms {
            for (kb, b) in &other.terms {
                let Some((sign, word)) = ka.word.wedge(&kb.word) else {
                    continue;
                };
                let tag = ka.tag.product(&kb.tag).ok_or_else(|| {
                    Error::Domain(format!(
                        "incompatible gaussian tags {} and {}",
                        ka.tag, kb.tag
                    ))
                })?;
                let c = a * b;
                let c = if sign < 0 { -&c } else { c };
                out.add_term(
                    TermKey {
                        word,
                        mono: ka.mono.mul(&kb.mono),
                        tag,
                    },
                    c,
                );
            }
        }
        Ok(out)
    }

    /// Wedge of several expressions, left to right.
    pub fn wedge_all<'a>(items: impl IntoIterator<Item = &'a FormExpression>) -> Result<Self> {
        items
            .into_iter()
            .try_fold(FormExpression::one(), |acc, f| acc.wedge(f))
    }

    /// Coefficient-wise partial derivative; generators are constant.
    pub fn derive(&self, v: Coord) -> Self {
        let mut out = FormExpression::zero();
        for (k, a) in &self.terms {
            if let Some((e, m)) = k.mono.derive(v) {
                let key = TermKey {
                    word: k.word.clone(),
                    mono: m,
                    tag: k.tag.clone(),
                };
                out.add_term(key, &RatFn::int(e as i64) * a);
            }
            for (m, c) in k.tag.derivative_factor(v) {
                let key = TermKey {
                    word: k.word.clone(),
                    mono: k.mono.mul(&m),
                    tag: k.tag.clone(),
                };
                out.add_term(key, &c * a);
            }
        }
        out
    }

    pub fn derive_n(&self, v: Coord, n: u32) -> Self {
        (0..n).fold(self.clone(), |f, _| f.derive(v))
    }

    /// Left multiplication of each term by a one-form generator.
    pub fn left_mul(&self, g: Generator) -> Self {
        FormExpression::generator(g)
            .wedge(self)
            .expect("generator has no gaussian factor")
    }

    /// Left contraction by the vector dual to `g`.
    pub fn contract(&self, g: Generator) -> Self {
        let mut out = FormExpression::zero();
        for (k, a) in &self.terms {
            if let Some((sign, word)) = k.word.contract(g) {
                let c = if sign < 0 { -a } else { a.clone() };
                out.add_term(
                    TermKey {
                        word,
                        mono: k.mono.clone(),
                        tag: k.tag.clone(),
                    },
                    c,
                );
            }
        }
        out
    }

    /// Pullback along the linear map sending the coordinates of slot `s` to
    /// `zmap[s]` (for z, zbar and their differentials) and `tmap[s]` (for t, dt).
    pub fn pullback(&self, zmap: &[Combo], tmap: &[Combo]) -> Self {
        let image = |c: Coord| -> FormExpression {
            match c.kind {
                CoordKind::Z => FormExpression::linear(CoordKind::Z, &zmap[c.slot as usize]),
                CoordKind::Zbar => FormExpression::linear(CoordKind::Zbar, &zmap[c.slot as usize]),
                CoordKind::T => FormExpression::linear(CoordKind::T, &tmap[c.slot as usize]),
            }
        };
        let gen_image = |g: Generator| -> FormExpression {
            let combo = match g.kind {
                GenKind::Dt => &tmap[g.vertex as usize],
                _ => &zmap[g.vertex as usize],
            };
            FormExpression::one_form(g.kind, combo)
        };
        let mut out = FormExpression::zero();
        for (k, a) in &self.terms {
            let mut f = FormExpression::term(
                a.clone(),
                Monomial::one(),
                k.tag.pullback(zmap, tmap),
                Word::empty(),
            );
            for &(c, e) in k.mono.factors() {
                let img = image(c);
                for _ in 0..e {
                    f = f.wedge(&img).expect("scalar factor");
                }
            }
            for &g in k.word.gens() {
                f = f.wedge(&gen_image(g)).expect("scalar factor");
            }
            for (k2, c2) in f.terms {
                out.add_term(k2, c2);
            }
        }
        out
    }

    /// The same terms with every word replaced by the empty word.
    pub fn strip_words(&self) -> Self {
        let mut out = FormExpression::zero();
        for (k, c) in &self.terms {
            out.add_term(
                TermKey {
                    word: Word::empty(),
                    ..k.clone()
                },
                c.clone(),
            );
        }
        out
    }

    /// `t_slot -> -t_slot` (and `dt_slot -> -dt_slot`) for the listed slots.
    pub fn reflect_time(&self, slots: &[usize], nslots: usize) -> Self {
        let zmap: Vec<Combo> = (0..nslots).map(Combo::slot).collect();
        let tmap: Vec<Combo> = (0..nslots)
            .map(|s| Combo::new([(s, if slots.contains(&s) { -1 } else { 1 })]))
            .collect();
        self.pullback(&zmap, &tmap)
    }

    /// Replaces the scale symbol `from` by `to` in coefficients and gaussians.
    pub fn rename_scale(&self, from: Symbol, to: Symbol) -> Self {
        let by = RatFn::var(to);
        let mut out = FormExpression::zero();
        for (k, a) in &self.terms {
            let key = TermKey {
                word: k.word.clone(),
                mono: k.mono.clone(),
                tag: k.tag.rename_scale(from, to),
            };
            out.add_term(key, a.substitute(from, &by));
        }
        out
    }

    /// All terms carrying exactly `word`.
    pub fn component(&self, word: &Word) -> FormExpression {
        FormExpression {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| &k.word == word)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_slot(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|k| {
                k.word
                    .gens()
                    .iter()
                    .map(|g| g.vertex as usize)
                    .chain(k.mono.factors().iter().map(|(c, _)| c.slot as usize))
                    .chain(k.tag.blocks().iter().flat_map(|b| {
                        b.z.terms()
                            .iter()
                            .chain(b.t.terms())
                            .map(|&(s, _)| s as usize)
                    }))
            })
            .max()
    }

    /// Coefficient of `word` at a numeric point.
    pub fn evaluate(
        &self,
        point: &Point,
        scales: &impl Fn(Symbol) -> f64,
        word: &Word,
    ) -> Result<Complex64> {
        if let Some(k) = self.terms.keys().find(|k| k.word.degree() != word.degree()) {
            return Err(Error::Degree(format!(
                "term of degree {} while extracting the degree-{} word {}",
                k.word.degree(),
                word.degree(),
                word
            )));
        }
        if let Some(m) = self.max_slot() {
            if m >= point.len() {
                return Err(Error::Domain(format!(
                    "point has {} slots, expression uses slot {m}",
                    point.len()
                )));
            }
        }
        let z = |s: usize| point[s].0;
        let t = |s: usize| point[s].1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in self.terms.iter().filter(|(k, _)| &k.word == word) {
            let mut v = Complex64::new(a.eval(scales), 0.0);
            for &(c, e) in k.mono.factors() {
                let x = match c.kind {
                    CoordKind::Z => z(c.slot as usize),
                    CoordKind::Zbar => z(c.slot as usize).conj(),
                    CoordKind::T => Complex64::new(t(c.slot as usize), 0.0),
                };
                v *= x.powu(e);
            }
            v *= k.tag.eval(&z, &t, scales);
            acc += v;
        }
        Ok(acc)
    }
}

impl fmt::Display for FormExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}] ({c}) * {}", k.word, k.mono)?;
            if !k.tag.is_none() {
                write!(f, " * {}", k.tag)?;
            }
        }
        Ok(())
    }
}
