//! Matrix Hamiltonians in a truncated Fock basis and their spectra.

mod eig;

use std::fmt;
use std::io::Write;

use num_complex::Complex64;

pub use eig::{eig_herm, eigenvalues_herm, SpectrumResult, DEFAULT_TOL};

use crate::error::{Error, Result};
use crate::fock::{assemble, BasisSpec, OperatorMatrix};
use crate::opalg::hamiltonian::expand_nc_hamiltonian;
use crate::opalg::{Coeff, Param, ParamEnv, Space};

/// Physical parameters. Construct through [`PhaseSpaceParams::new`] or the
/// builder methods, which validate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSpaceParams {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub omega_c: f64,
    pub alpha: f64,
    pub theta: f64,
    pub eta: f64,
}

impl Default for PhaseSpaceParams {
    fn default() -> Self {
        PhaseSpaceParams { hbar: 1.0, mass: 1.0, omega: 1.0, omega_c: 1.0, alpha: 1.0, theta: 0.01, eta: 0.01 }
    }
}

impl PhaseSpaceParams {
    pub fn new(hbar: f64, mass: f64, omega: f64, omega_c: f64, alpha: f64, theta: f64, eta: f64) -> Result<Self> {
        PhaseSpaceParams { hbar, mass, omega, omega_c, alpha, theta, eta }.validate()
    }

    /// ħ = m = ω = α = 1, θ = η = 0.
    pub fn natural(omega_c: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, omega_c, 1.0, 0.0, 0.0)
    }

    pub fn validate(self) -> Result<Self> {
        let bad = |what: &str, v: f64| Err(Error::InvalidParameter(format!("{what}, got {v}")));
        let all = [self.hbar, self.mass, self.omega, self.omega_c, self.alpha, self.theta, self.eta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.hbar <= 0.0 {
            return bad("hbar must be positive", self.hbar);
        }
        if self.mass <= 0.0 {
            return bad("mass must be positive", self.mass);
        }
        if self.omega <= 0.0 {
            return bad("omega must be positive", self.omega);
        }
        if self.omega_c < 0.0 {
            return bad("omega_c must be non-negative", self.omega_c);
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad("alpha must lie in (0, 1]", self.alpha);
        }
        if self.theta < 0.0 {
            return bad("theta must be non-negative", self.theta);
        }
        if self.eta < 0.0 {
            return bad("eta must be non-negative", self.eta);
        }
        Ok(self)
    }

    pub fn with_omega_c(self, omega_c: f64) -> Result<Self> {
        PhaseSpaceParams { omega_c, ..self }.validate()
    }

    pub fn with_theta_eta(self, theta: f64, eta: f64) -> Result<Self> {
        PhaseSpaceParams { theta, eta, ..self }.validate()
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        PhaseSpaceParams { alpha, ..self }.validate()
    }

    /// ω̃ = √(ω² + ω_c²/4)
    pub fn omega_t(&self) -> f64 {
        (self.omega * self.omega + self.omega_c * self.omega_c / 4.0).sqrt()
    }

    /// Numeric bindings for every formal parameter.
    pub fn env(&self) -> ParamEnv {
        ParamEnv::new()
            .set(Param::Hbar, self.hbar)
            .set(Param::Mass, self.mass)
            .set(Param::Omega, self.omega)
            .set(Param::OmegaT, self.omega_t())
            .set(Param::OmegaC, self.omega_c)
            .set(Param::Alpha, self.alpha)
            .set(Param::Theta, self.theta)
            .set(Param::Eta, self.eta)
    }
}

impl fmt::Display for PhaseSpaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hbar={} m={} omega={} omega_c={} alpha={} theta={} eta={}",
            self.hbar, self.mass, self.omega, self.omega_c, self.alpha, self.theta, self.eta
        )
    }
}

/// The six expansion pieces as matrices. `h0` is the commutative Hamiltonian
/// (the `(0,0)` bucket divided by α²); the others are the stripped buckets.
#[derive(Clone, Debug)]
pub struct HamiltonianPieces {
    pub basis: BasisSpec,
    pub space: Space,
    pub alpha: f64,
    pub hbar: f64,
    pub h0: OperatorMatrix,
    pub h_eta: OperatorMatrix,
    pub h_theta: OperatorMatrix,
    pub h_eta_theta: OperatorMatrix,
    pub h_eta2: OperatorMatrix,
    pub h_theta2: OperatorMatrix,
}

pub fn build_pieces(params: &PhaseSpaceParams, basis: &BasisSpec) -> Result<HamiltonianPieces> {
    build_pieces_in(params, basis, Space::Space)
}

pub fn build_pieces_in(params: &PhaseSpaceParams, basis: &BasisSpec, space: Space) -> Result<HamiltonianPieces> {
    let env = params.env();
    let buckets = expand_nc_hamiltonian(space);
    let get = |key: (i32, i32)| -> Result<OperatorMatrix> {
        match buckets.get(&key) {
            Some(e) => assemble(e, basis, &env)?.require_hermitian(),
            None => Ok(OperatorMatrix::new(crate::matrix::CMatrix::zeros(basis.dim(), basis.dim()))),
        }
    };
    let h0_expr = buckets[&(0, 0)].scale(&Coeff::param_pow(Param::Alpha, -2));
    Ok(HamiltonianPieces {
        basis: *basis,
        space,
        alpha: params.alpha,
        hbar: params.hbar,
        h0: assemble(&h0_expr, basis, &env)?.require_hermitian()?,
        h_eta: get((0, 1))?,
        h_theta: get((1, 0))?,
        h_eta_theta: get((1, 1))?,
        h_eta2: get((0, 2))?,
        h_theta2: get((2, 0))?,
    })
}

impl HamiltonianPieces {
    /// `α²H0 + (η/ħ)Hη + (θ/ħ)Hθ + (ηθ/ħ²)Hηθ + (η²/ħ²)Hη² + (θ²/ħ²)Hθ²`.
    /// Unlike [`total_hamiltonian`] this accepts signed θ and η, which finite
    /// differences need.
    pub fn combine(&self, theta: f64, eta: f64) -> OperatorMatrix {
        let h = self.hbar;
        let parts = [
            (self.alpha * self.alpha, &self.h0),
            (eta / h, &self.h_eta),
            (theta / h, &self.h_theta),
            (eta * theta / (h * h), &self.h_eta_theta),
            (eta * eta / (h * h), &self.h_eta2),
            (theta * theta / (h * h), &self.h_theta2),
        ];
        let mut out = crate::matrix::CMatrix::zeros(self.h0.dim(), self.h0.dim());
        for (s, m) in parts {
            if s != 0.0 {
                out.axpy(Complex64::new(s, 0.0), &m.matrix);
            }
        }
        OperatorMatrix::new(out)
    }
}

/// Total noncommutative Hamiltonian at the θ, η of `params`.
///
/// The pieces carry α, m, ω and ω_c from the parameters they were built with;
/// only θ and η are taken from `params` here.
pub fn total_hamiltonian(pieces: &HamiltonianPieces, params: &PhaseSpaceParams) -> OperatorMatrix {
    pieces.combine(params.theta, params.eta)
}

/// Diagonalize an operator matrix with the default tolerance.
pub fn spectrum(h: &OperatorMatrix) -> Result<SpectrumResult> {
    if !h.hermitian {
        return Err(Error::NotHermitian(h.matrix.hermitian_defect()));
    }
    eig_herm(&h.matrix, DEFAULT_TOL)
}

/// Header line followed by one eigenvalue per line at 17 significant digits.
pub fn write_spectrum<W: Write>(
    mut w: W,
    params: &PhaseSpaceParams,
    basis: &BasisSpec,
    eigenvalues: &[f64],
) -> Result<()> {
    writeln!(w, "# {params} {basis}")?;
    for e in eigenvalues {
        writeln!(w, "{e:.16e}")?;
    }
    Ok(())
}
