//! First-order corrections as expectation values of the engine's pieces.

use crate::error::{Error, Result};
use crate::fock::{assemble_sparse, cylindrical_state, BasisSpec, QuantumNumbers, SparseOperator};
use crate::opalg::expr::ops::*;
use crate::opalg::hamiltonian::expand_nc_hamiltonian;
use crate::opalg::{OperatorExpr, Space};
use crate::spectra::PhaseSpaceParams;

/// Exactness margin of quadratic operators in the truncated basis.
pub const MARGIN: usize = 2;

/// Dimension class of a vanishing operator, used to make it dimensionless.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Units {
    Action,
    Length2,
    Momentum2,
    Momentum,
}

/// The ten operators whose diagonal elements vanish on every cylindrical
/// state, with their display names.
pub fn vanishing_operators() -> Vec<(&'static str, OperatorExpr)> {
    vanishing_list().into_iter().map(|(n, e, _)| (n, e)).collect()
}

fn vanishing_list() -> Vec<(&'static str, OperatorExpr, Units)> {
    vec![
        ("Lx", lx(), Units::Action),
        ("Ly", ly(), Units::Action),
        ("x*z", &x() * &z(), Units::Length2),
        ("y*z", &y() * &z(), Units::Length2),
        ("px*pz", &px() * &pz(), Units::Momentum2),
        ("py*pz", &py() * &pz(), Units::Momentum2),
        ("y*pz", &y() * &pz(), Units::Action),
        ("x*pz", &x() * &pz(), Units::Action),
        ("px", px(), Units::Momentum),
        ("py", py(), Units::Momentum),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleValues {
    pub q: QuantumNumbers,
    /// `⟨α²H0⟩`
    pub e0: f64,
    /// `⟨Hη⟩`
    pub eta_expectation: f64,
    /// `⟨Hθ⟩`
    pub theta_expectation: f64,
    /// `(η/ħ)⟨Hη⟩`
    pub de_eta: f64,
    /// `(θ/ħ)⟨Hθ⟩`
    pub de_theta: f64,
    pub lz: f64,
    pub rho2: f64,
    /// `⟨p_x² + p_y²⟩`
    pub p_perp2: f64,
    /// Largest imaginary part seen in any expectation above.
    pub max_imag: f64,
    /// Largest dimensionless `|⟨O⟩|` over the vanishing list.
    pub vanishing_max: f64,
}

/// Closed forms the oracle must reproduce.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OraclePrediction {
    /// `α²[ħω̃(2n_ρ+|μ|+1) − ½ħω_cμ + ħω(n_z+½)]`
    pub e0: f64,
    pub de_eta: f64,
    pub de_theta: f64,
    pub lz: f64,
    pub rho2: f64,
    pub p_perp2: f64,
    /// Radial part of `p_x²+p_y²` without the centrifugal term, `mħω̃(2n_ρ+1)`.
    pub p_rho2_radial: f64,
}

pub fn predict(q: &QuantumNumbers, p: &PhaseSpaceParams) -> OraclePrediction {
    let n1 = f64::from(q.planar_quanta()) + 1.0;
    let mu = f64::from(q.mu);
    let wt = p.omega_t();
    let rho2 = p.hbar / (p.mass * wt) * n1;
    let p_perp2 = p.mass * p.hbar * wt * n1;
    let lz = p.hbar * mu;
    OraclePrediction {
        e0: p.alpha * p.alpha * (p.hbar * wt * n1 - 0.5 * p.omega_c * lz + p.hbar * p.omega * (f64::from(q.n_z) + 0.5)),
        de_eta: p.eta / p.hbar * (-lz / (2.0 * p.mass) + p.omega_c / 4.0 * rho2),
        de_theta: p.theta / p.hbar * (p.omega_c / 4.0 * p_perp2 - 0.5 * p.mass * wt * wt * lz),
        lz,
        rho2,
        p_perp2,
        p_rho2_radial: p.mass * p.hbar * wt * (2.0 * f64::from(q.n_rho) + 1.0),
    }
}

/// Sparse matrices of the first-order pieces and probe operators, reusable
/// across states for one parameter point and basis.
pub struct Oracle {
    params: PhaseSpaceParams,
    basis: BasisSpec,
    h0: SparseOperator,
    h_eta: SparseOperator,
    h_theta: SparseOperator,
    lz: SparseOperator,
    rho2: SparseOperator,
    p_perp2: SparseOperator,
    vanishing: Vec<(Units, SparseOperator)>,
}

impl Oracle {
    pub fn new(params: &PhaseSpaceParams, basis: &BasisSpec) -> Result<Self> {
        Self::new_in(params, basis, Space::Space)
    }

    pub fn new_in(params: &PhaseSpaceParams, basis: &BasisSpec, space: Space) -> Result<Self> {
        let env = params.env();
        let buckets = expand_nc_hamiltonian(space);
        let sp = |e: &OperatorExpr| assemble_sparse(e, basis, &env);
        let vanishing =
            vanishing_list().into_iter().map(|(_, e, u)| Ok((u, sp(&e)?))).collect::<Result<Vec<_>>>()?;
        Ok(Oracle {
            params: *params,
            basis: *basis,
            h0: sp(&buckets[&(0, 0)])?,
            h_eta: sp(&buckets[&(0, 1)])?,
            h_theta: sp(&buckets[&(1, 0)])?,
            lz: sp(&lz())?,
            rho2: sp(&(&(&x() * &x()) + &(&y() * &y())))?,
            p_perp2: sp(&(&(&px() * &px()) + &(&py() * &py())))?,
            vanishing,
        })
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn params(&self) -> &PhaseSpaceParams {
        &self.params
    }

    pub fn evaluate(&self, q: &QuantumNumbers) -> Result<OracleValues> {
        q.check_fits(&self.basis, MARGIN)?;
        let v = cylindrical_state(q, &self.basis)?;
        let p = &self.params;
        let mut max_imag = 0.0f64;
        let mut ev = |a: &SparseOperator| -> Result<f64> {
            let z = a.expectation(&v)?;
            max_imag = max_imag.max(z.im.abs());
            Ok(z.re)
        };
        let e0 = ev(&self.h0)?;
        let eta_expectation = ev(&self.h_eta)?;
        let theta_expectation = ev(&self.h_theta)?;
        let lz = ev(&self.lz)?;
        let rho2 = ev(&self.rho2)?;
        let p_perp2 = ev(&self.p_perp2)?;
        let length = (p.hbar / (p.mass * p.omega)).sqrt();
        let momentum = (p.hbar * p.mass * p.omega).sqrt();
        let mut vanishing_max = 0.0f64;
        for (u, a) in &self.vanishing {
            let scale = match u {
                Units::Action => p.hbar,
                Units::Length2 => length * length,
                Units::Momentum2 => momentum * momentum,
                Units::Momentum => momentum,
            };
            vanishing_max = vanishing_max.max(a.expectation(&v)?.norm() / scale);
        }
        Ok(OracleValues {
            q: *q,
            e0,
            eta_expectation,
            theta_expectation,
            de_eta: p.eta / p.hbar * eta_expectation,
            de_theta: p.theta / p.hbar * theta_expectation,
            lz,
            rho2,
            p_perp2,
            max_imag,
            vanishing_max,
        })
    }
}

/// `(ΔE_η, ΔE_θ)` from expectation values in the cylindrical state `q`.
pub fn first_order_oracle(q: &QuantumNumbers, p: &PhaseSpaceParams, basis: &BasisSpec) -> Result<(f64, f64)> {
    let v = Oracle::new(p, basis)?.evaluate(q)?;
    Ok((v.de_eta, v.de_theta))
}

/// Largest dimensionless diagonal element over the vanishing list.
pub fn vanishing_check(q: &QuantumNumbers, basis: &BasisSpec, p: &PhaseSpaceParams) -> Result<f64> {
    Ok(Oracle::new(p, basis)?.evaluate(q)?.vanishing_max)
}

/// Smallest basis that holds every state of `states` with the exactness margin.
pub fn oracle_basis(states: &[QuantumNumbers]) -> Result<BasisSpec> {
    if states.is_empty() {
        return Err(Error::InvalidParameter("no quantum numbers given".into()));
    }
    Ok(BasisSpec::covering(states, MARGIN))
}
