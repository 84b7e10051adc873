//! Exact scalar coefficients: Laurent polynomials in the formal physical
//! parameters with complex-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Complex number with exact rational parts.
pub type CRational = Complex<BigRational>;

/// Formal parameters that may appear in a coefficient.
///
/// `OmegaT` is the modified in-plane frequency, kept opaque; its relation to
/// `Omega` and `OmegaC` is only applied when numbers are substituted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Hbar,
    Alpha,
    Theta,
    Eta,
    Mass,
    Omega,
    OmegaT,
    OmegaC,
}

impl Param {
    pub const ALL: [Param; 8] = [
        Param::Hbar,
        Param::Alpha,
        Param::Theta,
        Param::Eta,
        Param::Mass,
        Param::Omega,
        Param::OmegaT,
        Param::OmegaC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Hbar => "hbar",
            Param::Alpha => "alpha",
            Param::Theta => "theta",
            Param::Eta => "eta",
            Param::Mass => "m",
            Param::Omega => "omega",
            Param::OmegaT => "omega_t",
            Param::OmegaC => "omega_c",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Integer exponents of every formal parameter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamPowers([i32; 8]);

impl ParamPowers {
    pub fn one() -> Self {
        ParamPowers([0; 8])
    }

    pub fn single(p: Param, exp: i32) -> Self {
        let mut e = [0; 8];
        e[p.index()] = exp;
        ParamPowers(e)
    }

    pub fn get(&self, p: Param) -> i32 {
        self.0[p.index()]
    }

    pub fn with(mut self, p: Param, exp: i32) -> Self {
        self.0[p.index()] = exp;
        self
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        ParamPowers(e)
    }

    fn inv(&self) -> Self {
        ParamPowers(self.0.map(|e| -e))
    }
}

/// An exact coefficient: `Σ c_k · Π params^e_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Coeff {
    terms: BTreeMap<ParamPowers, CRational>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn c_is_zero(c: &CRational) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn one() -> Self {
        Coeff::from_crational(CRational::new(BigRational::one(), BigRational::zero()))
    }

    pub fn i() -> Self {
        Coeff::from_crational(CRational::new(BigRational::zero(), BigRational::one()))
    }

    pub fn int(n: i64) -> Self {
        Coeff::rational(n, 1)
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Coeff::from_crational(CRational::new(rat(n, d), BigRational::zero()))
    }

    pub fn from_crational(c: CRational) -> Self {
        Coeff::term(c, ParamPowers::one())
    }

    pub fn param(p: Param) -> Self {
        Coeff::param_pow(p, 1)
    }

    pub fn param_pow(p: Param, exp: i32) -> Self {
        Coeff::term(
            CRational::new(BigRational::one(), BigRational::zero()),
            ParamPowers::single(p, exp),
        )
    }

    pub fn term(c: CRational, powers: ParamPowers) -> Self {
        let mut terms = BTreeMap::new();
        if !c_is_zero(&c) {
            terms.insert(powers, c);
        }
        Coeff { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Coeff::one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamPowers, &CRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Complex conjugate; formal parameters are real.
    pub fn conj(&self) -> Self {
        Coeff {
            terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    /// Inverse, available only for single-term coefficients.
    pub fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, v) = self.terms.iter().next().unwrap();
        let norm = &v.re * &v.re + &v.im * &v.im;
        let inv = CRational::new(&v.re / &norm, -(&v.im / &norm));
        Some(Coeff::term(inv, k.inv()))
    }

    /// Raise to an integer power. Negative powers need a single-term coefficient.
    pub fn pow(&self, exp: i32) -> Option<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut out = Coeff::one();
        for _ in 0..exp.unsigned_abs() {
            out = &out * &base;
        }
        Some(out)
    }

    /// Splits off the power of one parameter: returns the map from that
    /// parameter's exponent to the remaining coefficient.
    pub fn split_by(&self, p: Param) -> BTreeMap<i32, Coeff> {
        let mut out: BTreeMap<i32, Coeff> = BTreeMap::new();
        for (k, v) in &self.terms {
            let e = k.get(p);
            let rest = k.with(p, 0);
            out.entry(e).or_default().add_term(rest, v.clone());
        }
        out
    }

    /// Multiply by `p^exp`.
    pub fn shift(&self, p: Param, exp: i32) -> Self {
        self * &Coeff::param_pow(p, exp)
    }

    /// Evaluate with numeric parameter values.
    pub fn eval(&self, env: &ParamEnv) -> Result<Complex<f64>, Param> {
        let mut acc = Complex::new(0.0, 0.0);
        for (k, v) in &self.terms {
            let mut mag = 1.0f64;
            for p in Param::ALL {
                let e = k.get(p);
                if e != 0 {
                    let x = env.get(p).ok_or(p)?;
                    mag *= x.powi(e);
                }
            }
            acc += Complex::new(to_f64(&v.re), to_f64(&v.im)) * mag;
        }
        Ok(acc)
    }

    /// Substitute exact rational values for some parameters.
    pub fn substitute(&self, p: Param, value: &BigRational) -> Self {
        let mut out = Coeff::zero();
        for (k, v) in &self.terms {
            let e = k.get(p);
            let factor = if e >= 0 {
                num_traits::pow(value.clone(), e as usize)
            } else {
                num_traits::pow(value.recip(), (-e) as usize)
            };
            let c = CRational::new(&v.re * &factor, &v.im * &factor);
            out.add_term(k.with(p, 0), c);
        }
        out
    }

    fn add_term(&mut self, k: ParamPowers, c: CRational) {
        if c_is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(existing) => {
                *existing = &*existing + c;
                if c_is_zero(existing) {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    /// Whether the leading term would print with a minus sign.
    pub(crate) fn leading_negative(&self) -> bool {
        match self.terms.iter().next() {
            Some((_, c)) => number_negative(c),
            None => false,
        }
    }
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn number_negative(c: &CRational) -> bool {
    if c.re.is_zero() {
        c.im.is_negative()
    } else {
        c.re.is_negative()
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.add_term(ka.mul(kb), va * vb);
            }
        }
        out
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::opalg::text::coeff_to_text(self))
    }
}

/// Numeric values for the formal parameters.
#[derive(Clone, Debug, Default)]
pub struct ParamEnv {
    values: BTreeMap<Param, f64>,
}

impl ParamEnv {
    pub fn new() -> Self {
        ParamEnv::default()
    }

    pub fn set(mut self, p: Param, v: f64) -> Self {
        self.values.insert(p, v);
        self
    }

    pub fn insert(&mut self, p: Param, v: f64) {
        self.values.insert(p, v);
    }

    pub fn get(&self, p: Param) -> Option<f64> {
        self.values.get(&p).copied()
    }
}
