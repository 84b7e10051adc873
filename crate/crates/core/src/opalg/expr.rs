//! Noncommutative polynomials in the canonical operators and their normal
//! ordering under `[x_i, p_j] = iħ δ_ij`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::coeff::{Coeff, Param};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Position,
    Momentum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Axis::ALL.get(i).copied()
    }
}

/// One of the six canonical operators. The derived ordering (positions before
/// momenta, then x < y < z) is the normal-ordering convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalSymbol {
    pub kind: Kind,
    pub axis: Axis,
}

impl CanonicalSymbol {
    pub const X: Self = Self::pos(Axis::X);
    pub const Y: Self = Self::pos(Axis::Y);
    pub const Z: Self = Self::pos(Axis::Z);
    pub const PX: Self = Self::mom(Axis::X);
    pub const PY: Self = Self::mom(Axis::Y);
    pub const PZ: Self = Self::mom(Axis::Z);

    pub const ALL: [Self; 6] = [Self::X, Self::Y, Self::Z, Self::PX, Self::PY, Self::PZ];

    pub const fn pos(axis: Axis) -> Self {
        CanonicalSymbol { kind: Kind::Position, axis }
    }

    pub const fn mom(axis: Axis) -> Self {
        CanonicalSymbol { kind: Kind::Momentum, axis }
    }

    pub fn name(self) -> &'static str {
        match (self.kind, self.axis) {
            (Kind::Position, Axis::X) => "x",
            (Kind::Position, Axis::Y) => "y",
            (Kind::Position, Axis::Z) => "z",
            (Kind::Momentum, Axis::X) => "px",
            (Kind::Momentum, Axis::Y) => "py",
            (Kind::Momentum, Axis::Z) => "pz",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for CanonicalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Word = Vec<CanonicalSymbol>;

/// A single product of canonical operators with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub factors: Word,
    pub coeff: Coeff,
}

impl Monomial {
    pub fn is_normal(&self) -> bool {
        is_sorted(&self.factors)
    }
}

fn is_sorted(w: &[CanonicalSymbol]) -> bool {
    w.windows(2).all(|p| p[0] <= p[1])
}

/// A sum of monomials. Like words are merged on construction; call
/// [`OperatorExpr::normalize`] to bring every word into canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperatorExpr {
    terms: BTreeMap<Word, Coeff>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr::default()
    }

    pub fn scalar(c: Coeff) -> Self {
        let mut e = OperatorExpr::zero();
        e.add_term(Vec::new(), c);
        e
    }

    pub fn one() -> Self {
        OperatorExpr::scalar(Coeff::one())
    }

    pub fn symbol(s: CanonicalSymbol) -> Self {
        OperatorExpr::word(vec![s])
    }

    pub fn word(w: Word) -> Self {
        let mut e = OperatorExpr::zero();
        e.add_term(w, Coeff::one());
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Coeff)>>(it: I) -> Self {
        let mut e = OperatorExpr::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|(w, c)| Monomial { factors: w.clone(), coeff: c.clone() })
            .collect()
    }

    pub fn coeff_of(&self, w: &[CanonicalSymbol]) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|w| is_sorted(w))
    }

    /// Scalar value if the expression has no operator content.
    pub fn as_scalar(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        OperatorExpr::from_terms(self.terms.iter().map(|(w, v)| (w.clone(), v * c)))
    }

    /// Apply a function to every coefficient, dropping zeros.
    pub fn map_coeffs<F: Fn(&Coeff) -> Coeff>(&self, f: F) -> Self {
        OperatorExpr::from_terms(self.terms.iter().map(|(w, v)| (w.clone(), f(v))))
    }

    /// Rewrite into normal order. Positions commute among themselves, momenta
    /// commute among themselves, and `p_i x_j = x_j p_i − iħ δ_ij`.
    pub fn normalize(&self) -> Self {
        let minus_i_hbar = &(-&Coeff::i()) * &Coeff::param(Param::Hbar);
        let mut done = OperatorExpr::zero();
        let mut pending: BTreeMap<Word, Coeff> = self.terms.clone();
        while !pending.is_empty() {
            let mut next = OperatorExpr::zero();
            for (w, c) in pending {
                match w.windows(2).position(|p| p[0] > p[1]) {
                    None => done.add_term(w, c),
                    Some(k) => {
                        let (a, b) = (w[k], w[k + 1]);
                        let mut swapped = w.clone();
                        swapped.swap(k, k + 1);
                        next.add_term(swapped, c.clone());
                        if a.kind == Kind::Momentum && b.kind == Kind::Position && a.axis == b.axis
                        {
                            let mut contracted = w;
                            contracted.drain(k..k + 2);
                            next.add_term(contracted, &c * &minus_i_hbar);
                        }
                    }
                }
            }
            pending = next.terms;
        }
        done
    }

    /// Formal adjoint: reverse every word and conjugate coefficients.
    /// The result is not normalized.
    pub fn adjoint(&self) -> Self {
        OperatorExpr::from_terms(self.terms.iter().map(|(w, c)| {
            let mut r = w.clone();
            r.reverse();
            (r, c.conj())
        }))
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint().normalize() == self.normalize()
    }

    /// Collect the normalized expression by powers of θ and η.
    pub fn collect_theta_eta(&self) -> BTreeMap<(i32, i32), OperatorExpr> {
        let mut out: BTreeMap<(i32, i32), OperatorExpr> = BTreeMap::new();
        for (w, c) in &self.normalize().terms {
            for (a, ca) in c.split_by(Param::Theta) {
                for (b, cb) in ca.split_by(Param::Eta) {
                    out.entry((a, b)).or_default().add_term(w.clone(), cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = OperatorExpr::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

/// `normalize(ab − ba)`.
pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    (&(a * b) - &(b * a)).normalize()
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self + &(-rhs)
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.map_coeffs(|c| -c)
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for OperatorExpr {
            type Output = OperatorExpr;
            fn $m(self, rhs: OperatorExpr) -> OperatorExpr {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::to_text(self))
    }
}

/// Shorthand constructors used throughout the crate.
pub mod ops {
    use super::*;

    pub fn sym(s: CanonicalSymbol) -> OperatorExpr {
        OperatorExpr::symbol(s)
    }

    pub fn x() -> OperatorExpr {
        sym(CanonicalSymbol::X)
    }
    pub fn y() -> OperatorExpr {
        sym(CanonicalSymbol::Y)
    }
    pub fn z() -> OperatorExpr {
        sym(CanonicalSymbol::Z)
    }
    pub fn px() -> OperatorExpr {
        sym(CanonicalSymbol::PX)
    }
    pub fn py() -> OperatorExpr {
        sym(CanonicalSymbol::PY)
    }
    pub fn pz() -> OperatorExpr {
        sym(CanonicalSymbol::PZ)
    }

    pub fn c(c: Coeff) -> OperatorExpr {
        OperatorExpr::scalar(c)
    }

    /// `L_x = y p_z − z p_y`
    pub fn lx() -> OperatorExpr {
        &(&y() * &pz()) - &(&z() * &py())
    }
    /// `L_y = z p_x − x p_z`
    pub fn ly() -> OperatorExpr {
        &(&z() * &px()) - &(&x() * &pz())
    }
    /// `L_z = x p_y − y p_x`
    pub fn lz() -> OperatorExpr {
        &(&x() * &py()) - &(&y() * &px())
    }
}
