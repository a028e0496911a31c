//! Exact rational functions in the scale symbols.
//!
//! Coefficients of every kernel and operator are ratios of polynomials in the
//! positive length-scale symbols `T_i`, `eps` and the input envelope widths.
//! Denominators are kept factored (a power product of symbols times a list of
//! non-monomial factors such as `T_0 + T_1 + T_2`), which keeps sums small and
//! makes cancellation against those factors exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A positive scale parameter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(pub u16);

impl Symbol {
    /// Regularization scale, used for the heat-kernel edge of anomaly graphs.
    pub const EPS: Symbol = Symbol(1000);

    pub fn t(i: usize) -> Symbol {
        assert!(i < 1000, "scale index out of range");
        Symbol(i as u16)
    }

    /// Width of the `k`-th input envelope.
    pub fn sigma(k: usize) -> Symbol {
        Symbol(2000 + k as u16)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            i if i < 1000 => write!(f, "T{i}"),
            1000 => write!(f, "eps"),
            i if i >= 2000 => write!(f, "s{}", i - 2000),
            i => write!(f, "x{i}"),
        }
    }
}

/// Power product of symbols, sorted by symbol, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PowerProduct(SmallVec<[(Symbol, u32); 4]>);

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(s: Symbol) -> Self {
        Self::pow(s, 1)
    }

    pub fn pow(s: Symbol, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            PowerProduct(smallvec::smallvec![(s, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Symbol) -> u32 {
        self.0
            .iter()
            .find(|(t, _)| *t == s)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Symbol, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
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
        PowerProduct(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = SmallVec::new();
        for &(s, e) in &self.0 {
            let d = other.exponent(s);
            if d > e {
                return None;
            }
            if e > d {
                out.push((s, e - d));
            }
        }
        if other.0.iter().any(|&(s, _)| self.exponent(s) == 0) {
            return None;
        }
        Some(PowerProduct(out))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        PowerProduct(
            self.0
                .iter()
                .filter_map(|&(s, e)| {
                    let d = other.exponent(s).min(e);
                    (d > 0).then_some((s, d))
                })
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &(s, e) in &other.0 {
            let have = out.exponent(s);
            if e > have {
                out = out.mul(&PowerProduct::pow(s, e - have));
            }
        }
        out
    }

    pub fn eval(&self, value: &impl Fn(Symbol) -> f64) -> f64 {
        self.0
            .iter()
            .map(|&(s, e)| value(s).powi(e as i32))
            .product()
    }
}

/// Graded lexicographic order, a monomial order suitable for exact division.
impl Ord for PowerProduct {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(x), Some(y)) => {
                        if x.0 < y.0 {
                            return Ordering::Greater;
                        } else if y.0 < x.0 {
                            return Ordering::Less;
                        } else if x.1 != y.1 {
                            return x.1.cmp(&y.1);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

impl PartialOrd for PowerProduct {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(s, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<PowerProduct, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, PowerProduct::one())
    }

    pub fn var(s: Symbol) -> Self {
        Self::monomial(Q::one(), PowerProduct::var(s))
    }

    pub fn monomial(c: Q, m: PowerProduct) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Sum of the given symbols.
    pub fn sum_of(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        symbols
            .into_iter()
            .fold(Poly::zero(), |acc, s| &acc + &Poly::var(s))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PowerProduct, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Leading term under the graded lexicographic order.
    pub fn leading(&self) -> Option<(&PowerProduct, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &PowerProduct) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: PowerProduct, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Greatest common power product dividing every term.
    pub fn monomial_content(&self) -> PowerProduct {
        let mut it = self.terms.keys();
        match it.next() {
            None => PowerProduct::one(),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &PowerProduct) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (k, a) in &self.terms {
            terms.insert(k.div(m)?, a.clone());
        }
        Some(Poly { terms })
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            rem = &rem - &d.mul_monomial(&m).scale(&c);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, value: &impl Fn(Symbol) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64().unwrap_or(f64::NAN) * m.eval(value))
            .sum()
    }

    /// Exact evaluation at rational symbol values.
    pub fn eval_exact(&self, value: &impl Fn(Symbol) -> Q) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m.factors() {
                t *= num::pow(value(s), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Replace a symbol by a polynomial.
    pub fn substitute(&self, s: Symbol, by: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(s);
            let rest = m.div(&PowerProduct::pow(s, e)).unwrap();
            let piece = by.pow(e).mul_monomial(&rest).scale(c);
            out = &out + &piece;
        }
        out
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().map(|(s, _)| s))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Makes the polynomial primitive with positive leading coefficient;
    /// returns the constant that was divided out.
    fn normalize_factor(&self) -> (Q, Poly) {
        let lc = self
            .leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::one);
        let inv = lc.recip();
        (lc, self.scale(&inv))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

fn fmt_rational(f: &mut fmt::Formatter<'_>, c: &Q) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if m.is_one() {
                fmt_rational(f, &a)?;
            } else {
                if !a.is_one() {
                    fmt_rational(f, &a)?;
                    write!(f, "*")?;
                }
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

/// Ratio `num / (den_mono * prod factors^e)`; every factor is a primitive
/// non-monomial polynomial with leading coefficient one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den_mono: PowerProduct,
    den_factors: Vec<(Poly, u32)>,
}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl From<Q> for RatFn {
    fn from(c: Q) -> Self {
        RatFn::constant(c)
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::poly(p)
    }
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den_mono: PowerProduct::one(),
            den_factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn var(s: Symbol) -> Self {
        Self::poly(Poly::var(s))
    }

    pub fn poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den_mono: PowerProduct::one(),
            den_factors: Vec::new(),
        }
        .canonical()
    }

    /// `1 / p` for a nonzero polynomial `p`.
    pub fn recip_poly(p: &Poly) -> Self {
        assert!(!p.is_zero(), "division by the zero polynomial");
        let content = p.monomial_content();
        let rest = p.div_monomial(&content).unwrap();
        let (lc, rest) = rest.normalize_factor();
        let mut r = RatFn {
            num: Poly::constant(lc.recip()),
            den_mono: content,
            den_factors: Vec::new(),
        };
        if rest.as_constant().is_none() {
            r.den_factors.push((rest, 1));
        }
        r.canonical()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> Poly {
        let mut d = Poly::monomial(Q::one(), self.den_mono.clone());
        for (f, e) in &self.den_factors {
            d = &d * &f.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den_mono.is_one() && self.den_factors.is_empty() {
            self.num.as_constant()
        } else if self.num.is_zero() {
            Some(Q::zero())
        } else {
            None
        }
    }

    fn canonical(mut self) -> Self {
        if self.num.is_zero() {
            return RatFn::zero();
        }
        let g = self.num.monomial_content().gcd(&self.den_mono);
        if !g.is_one() {
            self.num = self.num.div_monomial(&g).unwrap();
            self.den_mono = self.den_mono.div(&g).unwrap();
        }
        let mut i = 0;
        while i < self.den_factors.len() {
            match self.num.div_exact(&self.den_factors[i].0) {
                Some(qt) => {
                    self.num = qt;
                    self.den_factors[i].1 -= 1;
                    if self.den_factors[i].1 == 0 {
                        self.den_factors.remove(i);
                    }
                }
                None => i += 1,
            }
        }
        self.den_factors
            .sort_by(|a, b| a.0.leading().cmp(&b.0.leading()).then(a.1.cmp(&b.1)));
        self
    }

    fn lcm_den(&self, other: &Self) -> (PowerProduct, Vec<(Poly, u32)>) {
        let mono = self.den_mono.lcm(&other.den_mono);
        let mut factors = self.den_factors.clone();
        for (f, e) in &other.den_factors {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => factors.push((f.clone(), *e)),
            }
        }
        (mono, factors)
    }

    /// Numerator of `self` rewritten over a multiple of its denominator.
    fn lift(&self, mono: &PowerProduct, factors: &[(Poly, u32)]) -> Poly {
        let mut n = self.num.mul_monomial(&mono.div(&self.den_mono).unwrap());
        for (f, e) in factors {
            let have = self
                .den_factors
                .iter()
                .find(|(g, _)| g == f)
                .map(|x| x.1)
                .unwrap_or(0);
            if *e > have {
                n = &n * &f.pow(e - have);
            }
        }
        n
    }

    pub fn recip(&self) -> RatFn {
        assert!(!self.is_zero(), "reciprocal of zero");
        let mut r = RatFn::recip_poly(&self.num);
        let mut num = Poly::monomial(Q::one(), self.den_mono.clone());
        for (f, e) in &self.den_factors {
            num = &num * &f.pow(*e);
        }
        r.num = &r.num * &num;
        r.canonical()
    }

    pub fn pow(&self, e: u32) -> RatFn {
        (0..e).fold(RatFn::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, value: &impl Fn(Symbol) -> f64) -> f64 {
        let mut d = self.den_mono.eval(value);
        for (f, e) in &self.den_factors {
            d *= f.eval(value).powi(*e as i32);
        }
        self.num.eval(value) / d
    }

    pub fn eval_exact(&self, value: &impl Fn(Symbol) -> Q) -> Q {
        let d = self.denominator().eval_exact(value);
        self.num.eval_exact(value) / d
    }

    pub fn substitute(&self, s: Symbol, by: &RatFn) -> RatFn {
        let n = subst_poly(&self.num, s, by);
        let d = subst_poly(&self.denominator(), s, by);
        &n / &d
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.num.symbols();
        v.extend(self.den_mono.factors().map(|(s, _)| s));
        for (f, _) in &self.den_factors {
            v.extend(f.symbols());
        }
        v.sort();
        v.dedup();
        v
    }
}

/// Floating-point form of a [`RatFn`] for repeated numeric evaluation.
#[derive(Clone, Debug)]
pub struct CompiledRatFn {
    num: Vec<(f64, Vec<(Symbol, i32)>)>,
    den_mono: Vec<(Symbol, i32)>,
    den_factors: Vec<(Vec<(f64, Vec<(Symbol, i32)>)>, i32)>,
}

fn compile_poly(p: &Poly) -> Vec<(f64, Vec<(Symbol, i32)>)> {
    p.terms()
        .map(|(m, c)| {
            (
                c.to_f64().unwrap_or(f64::NAN),
                m.factors().map(|(s, e)| (s, e as i32)).collect(),
            )
        })
        .collect()
}

fn eval_compiled(p: &[(f64, Vec<(Symbol, i32)>)], value: &impl Fn(Symbol) -> f64) -> f64 {
    p.iter()
        .map(|(c, m)| m.iter().fold(*c, |acc, &(s, e)| acc * value(s).powi(e)))
        .sum()
}

impl CompiledRatFn {
    pub fn new(r: &RatFn) -> Self {
        CompiledRatFn {
            num: compile_poly(&r.num),
            den_mono: r.den_mono.factors().map(|(s, e)| (s, e as i32)).collect(),
            den_factors: r
                .den_factors
                .iter()
                .map(|(f, e)| (compile_poly(f), *e as i32))
                .collect(),
        }
    }

    pub fn eval(&self, value: &impl Fn(Symbol) -> f64) -> f64 {
        let mut d = self
            .den_mono
            .iter()
            .fold(1.0, |acc, &(s, e)| acc * value(s).powi(e));
        for (f, e) in &self.den_factors {
            d *= eval_compiled(f, value).powi(*e);
        }
        eval_compiled(&self.num, value) / d
    }
}

fn subst_poly(p: &Poly, s: Symbol, by: &RatFn) -> RatFn {
    let mut acc = RatFn::zero();
    for (m, c) in p.terms() {
        let e = m.exponent(s);
        let rest = m.div(&PowerProduct::pow(s, e)).unwrap();
        let t = &RatFn::poly(Poly::monomial(c.clone(), rest)) * &by.pow(e);
        acc = &acc + &t;
    }
    acc
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (mono, factors) = self.lcm_den(rhs);
        let num = &self.lift(&mono, &factors) + &rhs.lift(&mono, &factors);
        RatFn {
            num,
            den_mono: mono,
            den_factors: factors,
        }
        .canonical()
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den_mono: self.den_mono.clone(),
            den_factors: self.den_factors.clone(),
        }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        let mut factors = self.den_factors.clone();
        for (f, e) in &rhs.den_factors {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += e,
                None => factors.push((f.clone(), *e)),
            }
        }
        RatFn {
            num: &self.num * &rhs.num,
            den_mono: self.den_mono.mul(&rhs.den_mono),
            den_factors: factors,
        }
        .canonical()
    }
}

impl std::ops::Div for &RatFn {
    type Output = RatFn;
    fn div(self, rhs: &RatFn) -> RatFn {
        self * &rhs.recip()
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plain_den = self.den_mono.is_one() && self.den_factors.is_empty();
        if plain_den {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/(")?;
        let mut first = true;
        if !self.den_mono.is_one() {
            write!(f, "{}", self.den_mono)?;
            first = false;
        }
        for (p, e) in &self.den_factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "({p})")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        write!(f, ")")
    }
}
