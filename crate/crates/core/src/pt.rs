//! Closed-form unperturbed energies and first-order corrections, transcribed
//! as published. Nothing here is derived by the engine; `adjudicate` compares
//! these formulas against engine-derived values.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fock::QuantumNumbers;
use crate::opalg::{Coeff, Param};
use crate::spectra::PhaseSpaceParams;

/// `α²[ħω̃(2n_ρ+|μ|+1) + ½ħω_cμ + ħω(n_z+½)]`
pub fn e0(q: &QuantumNumbers, p: &PhaseSpaceParams) -> f64 {
    let n = f64::from(q.planar_quanta());
    let mu = f64::from(q.mu);
    let nz = f64::from(q.n_z);
    p.alpha * p.alpha
        * (p.hbar * p.omega_t() * (n + 1.0) + 0.5 * p.hbar * p.omega_c * mu + p.hbar * p.omega * (nz + 0.5))
}

/// Binomial coefficient that is zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// The combinatorial factor of the θ correction, for `μ ≥ 0`.
pub fn f_coeff(n_rho: u32, mu: i32) -> Result<BigInt> {
    if mu < 0 {
        return Err(Error::InvalidParameter(format!("f(n_rho, mu) takes |mu|, got mu = {mu}")));
    }
    let n = i64::from(n_rho);
    let m = i64::from(mu);
    let c = binomial;
    let bracket = 2 * c(m + n, n) + 4 * c(m + n - 2, n) + c(m + n + 1, n) - c(m + n + 2, n - 1);
    Ok(2 * c(n + m, m) - 4 * m * c(m + n + 2, n - 1) - m * (1 + m) * bracket)
}

fn f_value(q: &QuantumNumbers) -> BigInt {
    f_coeff(q.n_rho, q.mu.abs()).expect("|mu| is non-negative")
}

/// `−η|μ|/2m − (ηω_c/4mω̃)(2n_ρ+|μ|+1)`
pub fn de_eta(q: &QuantumNumbers, p: &PhaseSpaceParams) -> f64 {
    de_eta_with_mu(q, p, f64::from(q.mu.abs()))
}

/// As [`de_eta`] with the signed μ in the first term.
pub fn de_eta_signed_mu(q: &QuantumNumbers, p: &PhaseSpaceParams) -> f64 {
    de_eta_with_mu(q, p, f64::from(q.mu))
}

fn de_eta_with_mu(q: &QuantumNumbers, p: &PhaseSpaceParams, mu: f64) -> f64 {
    let n = f64::from(q.planar_quanta());
    -p.eta * mu / (2.0 * p.mass) - p.eta * p.omega_c / (4.0 * p.mass * p.omega_t()) * (n + 1.0)
}

/// `−½θmω̃(ω̃ − ½ω_c f(n_ρ,|μ|))`
pub fn de_theta(q: &QuantumNumbers, p: &PhaseSpaceParams) -> f64 {
    let f = f_value(q).to_f64().unwrap_or(f64::NAN);
    let wt = p.omega_t();
    -0.5 * p.theta * p.mass * wt * (wt - 0.5 * p.omega_c * f)
}

/// `|ΔE⁽¹⁾ / E⁽⁰⁾|` from the formulas above.
pub fn relative_correction(q: &QuantumNumbers, p: &PhaseSpaceParams) -> f64 {
    ((de_eta(q, p) + de_theta(q, p)) / e0(q, p)).abs()
}

fn coeff_int(n: &BigInt) -> Coeff {
    Coeff::from_crational(Complex::new(BigRational::from_integer(n.clone()), BigRational::zero()))
}

fn prod(cs: &[Coeff]) -> Coeff {
    cs.iter().fold(Coeff::one(), |acc, c| &acc * c)
}

/// [`e0`] as an exact expression in the formal parameters (ω̃ kept symbolic).
pub fn e0_exact(q: &QuantumNumbers) -> Coeff {
    let n1 = Coeff::int(i64::from(q.planar_quanta()) + 1);
    let t1 = prod(&[Coeff::param(Param::Hbar), Coeff::param(Param::OmegaT), n1]);
    let t2 = prod(&[Coeff::rational(i64::from(q.mu), 2), Coeff::param(Param::Hbar), Coeff::param(Param::OmegaC)]);
    let t3 = prod(&[
        Coeff::rational(2 * i64::from(q.n_z) + 1, 2),
        Coeff::param(Param::Hbar),
        Coeff::param(Param::Omega),
    ]);
    &Coeff::param_pow(Param::Alpha, 2) * &(&(&t1 + &t2) + &t3)
}

/// [`de_eta`] as an exact expression.
pub fn de_eta_exact(q: &QuantumNumbers) -> Coeff {
    let a = prod(&[
        Coeff::rational(-i64::from(q.mu.abs()), 2),
        Coeff::param(Param::Eta),
        Coeff::param_pow(Param::Mass, -1),
    ]);
    let b = prod(&[
        Coeff::rational(-(i64::from(q.planar_quanta()) + 1), 4),
        Coeff::param(Param::Eta),
        Coeff::param(Param::OmegaC),
        Coeff::param_pow(Param::Mass, -1),
        Coeff::param_pow(Param::OmegaT, -1),
    ]);
    &a + &b
}

/// [`de_theta`] as an exact expression.
pub fn de_theta_exact(q: &QuantumNumbers) -> Coeff {
    let th_m = &Coeff::param(Param::Theta) * &Coeff::param(Param::Mass);
    let a = prod(&[Coeff::rational(-1, 2), th_m.clone(), Coeff::param_pow(Param::OmegaT, 2)]);
    let b = prod(&[
        Coeff::rational(1, 4),
        coeff_int(&f_value(q)),
        th_m,
        Coeff::param(Param::OmegaT),
        Coeff::param(Param::OmegaC),
    ]);
    &a + &b
}

/// Ratios against the weak-deformation conditions `η ≪ ħmω_c`, `θ ≪ ħ/mω̃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validity {
    pub eta_ratio: f64,
    pub theta_ratio: f64,
    pub factor: f64,
    pub pass: bool,
}

pub const DEFAULT_VALIDITY_FACTOR: f64 = 0.1;

pub fn validity(p: &PhaseSpaceParams) -> Validity {
    validity_with(p, DEFAULT_VALIDITY_FACTOR)
}

pub fn validity_with(p: &PhaseSpaceParams, factor: f64) -> Validity {
    let denom = p.hbar * p.mass * p.omega_c;
    let eta_ratio = if p.eta == 0.0 {
        0.0
    } else if denom == 0.0 {
        f64::INFINITY
    } else {
        p.eta / denom
    };
    let theta_ratio = p.theta * p.mass * p.omega_t() / p.hbar;
    Validity { eta_ratio, theta_ratio, factor, pass: eta_ratio <= factor && theta_ratio <= factor }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionBreakdown {
    pub e0: f64,
    pub de_eta: f64,
    pub de_theta: f64,
    pub de_total: f64,
    pub f_value: BigInt,
    pub validity: Validity,
}

pub fn breakdown(q: &QuantumNumbers, p: &PhaseSpaceParams) -> CorrectionBreakdown {
    let de_eta = de_eta(q, p);
    let de_theta = de_theta(q, p);
    CorrectionBreakdown {
        e0: e0(q, p),
        de_eta,
        de_theta,
        de_total: de_eta + de_theta,
        f_value: f_value(q),
        validity: validity(p),
    }
}

/// `(n_ρ, |μ|)` pairs with `n_ρ` in `1..=max_n_rho` and `|μ| < n_ρ`, plus
/// `|μ| = n_ρ` when `include_diagonal` is set.
pub fn ftable_pairs(max_n_rho: u32, include_diagonal: bool) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for n in 1..=max_n_rho {
        let top = if include_diagonal { n } else { n - 1 };
        for mu in 0..=top {
            out.push((n, mu));
        }
    }
    out
}

/// Three-column text table of `f(n_ρ, |μ|)`, one block per `n_ρ`.
pub fn ftable_text(max_n_rho: u32, include_diagonal: bool) -> String {
    let mut s = String::new();
    let rows: Vec<(u32, u32, BigInt)> = ftable_pairs(max_n_rho, include_diagonal)
        .into_iter()
        .map(|(n, m)| (n, m, f_coeff(n, m as i32).expect("non-negative")))
        .collect();
    let width = rows.iter().map(|r| r.2.to_string().len()).max().unwrap_or(1).max(13);
    let rule = format!("{}  {}  {}", "-".repeat(5), "-".repeat(4), "-".repeat(width));
    let _ = writeln!(s, "{:>5}  {:>4}  {:>width$}", "n_rho", "|mu|", "f(n_rho,|mu|)");
    let _ = writeln!(s, "{rule}");
    let mut last = None;
    for (n, m, f) in rows {
        if last.is_some_and(|l| l != n) {
            let _ = writeln!(s, "{rule}");
        }
        last = Some(n);
        let _ = writeln!(s, "{n:>5}  {m:>4}  {:>width$}", f.to_string());
    }
    s
}
