use std::fmt;

use smallvec::SmallVec;

/// Which real or Wirtinger coordinate of a copy of `C x R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoordKind {
    Z,
    Zbar,
    T,
}

/// Coordinate `z_i`, `zbar_i` or `t_i` of slot `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub slot: u16,
    pub kind: CoordKind,
}

impl Coord {
    pub fn z(slot: usize) -> Self {
        Coord {
            slot: slot as u16,
            kind: CoordKind::Z,
        }
    }
    pub fn zbar(slot: usize) -> Self {
        Coord {
            slot: slot as u16,
            kind: CoordKind::Zbar,
        }
    }
    pub fn t(slot: usize) -> Self {
        Coord {
            slot: slot as u16,
            kind: CoordKind::T,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.kind {
            CoordKind::Z => "z",
            CoordKind::Zbar => "zb",
            CoordKind::T => "t",
        };
        write!(f, "{s}{}", self.slot)
    }
}

/// Kind of a one-form generator; the derived order `Dz < Dzbar < Dt` is the
/// canonical order inside a slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    Dz,
    Dzbar,
    Dt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub vertex: u16,
    pub kind: GenKind,
}

impl Generator {
    pub fn dz(v: usize) -> Self {
        Generator {
            vertex: v as u16,
            kind: GenKind::Dz,
        }
    }
    pub fn dzbar(v: usize) -> Self {
        Generator {
            vertex: v as u16,
            kind: GenKind::Dzbar,
        }
    }
    pub fn dt(v: usize) -> Self {
        Generator {
            vertex: v as u16,
            kind: GenKind::Dt,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.kind {
            GenKind::Dz => "dz",
            GenKind::Dzbar => "dzb",
            GenKind::Dt => "dt",
        };
        write!(f, "{s}{}", self.vertex)
    }
}

/// Sorted word of distinct generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(SmallVec<[Generator; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn single(g: Generator) -> Self {
        Word(smallvec::smallvec![g])
    }

    /// Sorts `gens`, returning the permutation sign, or `None` if a generator repeats.
    pub fn from_gens(gens: &[Generator]) -> Option<(i32, Word)> {
        let mut v: SmallVec<[Generator; 8]> = gens.iter().copied().collect();
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && v[j - 1] == v[j] {
                return None;
            }
        }
        Some((sign, Word(v)))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.0
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    /// `self ∧ other` as a sign and sorted word.
    pub fn wedge(&self, other: &Word) -> Option<(i32, Word)> {
        if other.0.is_empty() {
            return Some((1, self.clone()));
        }
        if self.0.is_empty() {
            return Some((1, other.clone()));
        }
        let mut all: SmallVec<[Generator; 8]> = self.0.clone();
        all.extend(other.0.iter().copied());
        Word::from_gens(&all)
    }

    /// Removes `g` by left contraction; the sign is `(-1)^position`.
    pub fn contract(&self, g: Generator) -> Option<(i32, Word)> {
        let pos = self.0.binary_search(&g).ok()?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some((if pos % 2 == 0 { 1 } else { -1 }, Word(v)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "^")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Coordinate monomial, sorted, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(SmallVec<[(Coord, u32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(c: Coord) -> Self {
        Monomial::pow(c, 1)
    }

    pub fn pow(c: Coord, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(smallvec::smallvec![(c, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Coord, u32)>) -> Self {
        pairs
            .into_iter()
            .fold(Monomial::one(), |m, (c, e)| m.mul(&Monomial::pow(c, e)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, c: Coord) -> u32 {
        self.0
            .iter()
            .find(|(d, _)| *d == c)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Coord, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(Coord, u32); 6]> = SmallVec::new();
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    /// Derivative: `(exponent, monomial with that exponent lowered)`.
    pub fn derive(&self, c: Coord) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|(d, _)| *d == c)?;
        let mut v = self.0.clone();
        let e = v[pos].1;
        if e == 1 {
            v.remove(pos);
        } else {
            v[pos].1 -= 1;
        }
        Some((e, Monomial(v)))
    }

    /// Splits off all factors of the given coordinate.
    pub fn take(&self, c: Coord) -> (u32, Monomial) {
        let e = self.exponent(c);
        let v = self.0.iter().copied().filter(|(d, _)| *d != c).collect();
        (e, Monomial(v))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (c, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_sorting_tracks_parity() {
        let (s, w) = Word::from_gens(&[Generator::dt(0), Generator::dz(0)]).unwrap();
        assert_eq!(s, -1);
        assert_eq!(w.gens(), &[Generator::dz(0), Generator::dt(0)]);
        assert!(Word::from_gens(&[Generator::dz(0), Generator::dz(0)]).is_none());
        let (s, _) =
            Word::from_gens(&[Generator::dt(1), Generator::dz(0), Generator::dzbar(1)]).unwrap();
        assert_eq!(s, 1);
    }

    #[test]
    fn contraction_sign_is_position_parity() {
        let w = Word::from_gens(&[Generator::dz(0), Generator::dzbar(0), Generator::dt(0)])
            .unwrap()
            .1;
        assert_eq!(w.contract(Generator::dzbar(0)).unwrap().0, -1);
        assert_eq!(w.contract(Generator::dt(0)).unwrap().0, 1);
    }
}
