//! Graded-commutative algebra of form-valued expressions.
//!
//! A term is `coefficient * monomial * gaussian * word`, where the coefficient
//! is an exact rational function of the scale symbols, the monomial is in
//! `z_i, zbar_i, t_i` (treated as independent Wirtinger coordinates), the
//! gaussian is a product of [`GaussBlock`]s and the word is a sorted product of
//! anticommuting one-form generators.

mod coord;
mod form;
mod gauss;

pub use coord::{Coord, CoordKind, GenKind, Generator, Monomial, Word};
pub use form::{FormExpression, Point, TermKey};
pub use gauss::{Combo, GaussBlock, GaussTag};

/// The word `dzbar_0 dt_0 dzbar_1 dt_1 ...` over `n` slots.
pub fn antiholomorphic_top_word(n: usize) -> Word {
    let gens: Vec<Generator> = (0..n)
        .flat_map(|v| [Generator::dzbar(v), Generator::dt(v)])
        .collect();
    Word::from_gens(&gens).expect("distinct generators").1
}
