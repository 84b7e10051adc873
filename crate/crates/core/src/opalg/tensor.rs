//! Antisymmetric coupling tensors and the Bopp shift.

use super::coeff::{Coeff, Param};
use super::expr::{Axis, CanonicalSymbol, Kind, OperatorExpr};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// Noncommutativity confined to the xy-plane.
    Plane,
    /// Noncommutativity in all three directions.
    Space,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::Plane => 2,
            Space::Space => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Space::Plane => "2d",
            Space::Space => "3d",
        }
    }
}

/// Which pair of indices is summed in `Σ_μ λ_?μ λ_?μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contraction {
    /// `Σ_μ λ_iμ λ_jμ`
    FirstFirst,
    /// `Σ_μ λ_iμ λ_μj`
    FirstSecond,
}

/// The integer antisymmetric tensor λ (plane) or λ̃ (space).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AntisymTensor {
    space: Space,
    entries: [[i64; 3]; 3],
}

impl AntisymTensor {
    /// λ_12 = 1, λ_21 = −1, all else 0.
    pub fn plane() -> Self {
        let mut e = [[0; 3]; 3];
        e[0][1] = 1;
        e[1][0] = -1;
        AntisymTensor { space: Space::Plane, entries: e }
    }

    /// λ̃_12 = λ̃_23 = λ̃_31 = 1 and the transposed entries −1.
    pub fn space() -> Self {
        let mut e = [[0; 3]; 3];
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            e[i][j] = 1;
            e[j][i] = -1;
        }
        AntisymTensor { space: Space::Space, entries: e }
    }

    pub fn for_space(space: Space) -> Self {
        match space {
            Space::Plane => Self::plane(),
            Space::Space => Self::space(),
        }
    }

    pub fn kind(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Entry on 1-based axes. In the plane the z row and column are empty.
    pub fn entry(&self, i: Axis, j: Axis) -> i64 {
        self.entries[i.index()][j.index()]
    }

    fn check_axis(&self, a: usize) -> Result<Axis, Error> {
        if a == 0 || a > self.dim() {
            return Err(Error::InvalidAxis { axis: a, dim: self.dim() });
        }
        Ok(Axis::from_index(a - 1).expect("checked"))
    }

    /// Contraction over the middle index, by direct enumeration. Axes are 1-based.
    pub fn contract(&self, i: usize, j: usize, conv: Contraction) -> Result<i64, Error> {
        let ai = self.check_axis(i)?;
        let aj = self.check_axis(j)?;
        let mut s = 0;
        for mu in Axis::ALL.iter().take(self.dim()) {
            s += match conv {
                Contraction::FirstFirst => self.entry(ai, *mu) * self.entry(aj, *mu),
                Contraction::FirstSecond => self.entry(ai, *mu) * self.entry(*mu, aj),
            };
        }
        Ok(s)
    }
}

/// `λ·λ` contraction, 1-based axes.
pub fn lambda_contract(t: &AntisymTensor, i: usize, j: usize, conv: Contraction) -> Result<i64, Error> {
    t.contract(i, j, conv)
}

/// Noncommutative image of one canonical operator:
/// `x̂_i = αx_i − (θ/2αħ) Σ_j λ_ij p_j`, `p̂_i = αp_i + (η/2αħ) Σ_j λ_ij x_j`.
pub fn bopp_shift(s: CanonicalSymbol, t: &AntisymTensor) -> OperatorExpr {
    let alpha = Coeff::param(Param::Alpha);
    let half_over_alpha_hbar = &(&Coeff::rational(1, 2) * &Coeff::param_pow(Param::Alpha, -1))
        * &Coeff::param_pow(Param::Hbar, -1);
    let (strength, partner_kind) = match s.kind {
        Kind::Position => (-&(&Coeff::param(Param::Theta) * &half_over_alpha_hbar), Kind::Momentum),
        Kind::Momentum => (&Coeff::param(Param::Eta) * &half_over_alpha_hbar, Kind::Position),
    };
    let mut out = OperatorExpr::symbol(s).scale(&alpha);
    for j in Axis::ALL {
        let l = t.entry(s.axis, j);
        if l != 0 {
            let partner = CanonicalSymbol { kind: partner_kind, axis: j };
            out = &out + &OperatorExpr::symbol(partner).scale(&(&strength * &Coeff::int(l)));
        }
    }
    out
}

/// Replace every canonical operator in `e` by its Bopp-shifted image.
pub fn substitute(e: &OperatorExpr, t: &AntisymTensor) -> OperatorExpr {
    let images: Vec<OperatorExpr> = CanonicalSymbol::ALL.iter().map(|s| bopp_shift(*s, t)).collect();
    let image = |s: &CanonicalSymbol| &images[CanonicalSymbol::ALL.iter().position(|c| c == s).unwrap()];
    let mut out = OperatorExpr::zero();
    for (w, c) in e.terms() {
        let mut prod = OperatorExpr::scalar(c.clone());
        for s in w {
            prod = &prod * image(s);
        }
        out = &out + &prod;
    }
    out
}
