//! Eigenvalue slopes in θ and η by central differences of exact spectra.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{cylindrical_state, BasisSpec, QuantumNumbers};
use crate::matrix::{dotc, CVector};
use crate::spectra::{build_pieces, spectrum, HamiltonianPieces, PhaseSpaceParams, SpectrumResult};

pub const DEFAULT_DELTA: f64 = 1e-4;

/// Spare quanta needed around a tracked state. The first-order pieces reach
/// two quanta further; with only two spare quanta those neighbours sit on the
/// truncation edge, whose levels are wrong and can land close enough to the
/// target to spoil the finite differences.
pub const SLOPE_MARGIN: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeSettings {
    pub delta: f64,
    /// Agreement required between steps `δ` and `δ/2`.
    pub richardson_rtol: f64,
    pub min_overlap: f64,
    /// Gap guard in units of `ħω`.
    pub min_gap: f64,
}

impl Default for SlopeSettings {
    fn default() -> Self {
        SlopeSettings { delta: DEFAULT_DELTA, richardson_rtol: 1e-7, min_overlap: 0.9, min_gap: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SlopeStatus {
    Ok,
    /// Level spacing below the guard; slopes are not meaningful.
    Degenerate { gap: f64 },
    /// No unique eigenvector with sufficient overlap.
    Tracking(String),
    /// Steps `δ` and `δ/2` disagree.
    Richardson { rel: f64 },
}

impl SlopeStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, SlopeStatus::Ok)
    }

    pub fn label(&self) -> &'static str {
        match self {
            SlopeStatus::Ok => "ok",
            SlopeStatus::Degenerate { .. } => "degenerate",
            SlopeStatus::Tracking(_) => "tracking",
            SlopeStatus::Richardson { .. } => "richardson",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeResult {
    pub q: QuantumNumbers,
    /// Eigenvalue of `α²H0` matched to the state.
    pub energy: f64,
    /// Distance to the nearest other eigenvalue.
    pub gap: f64,
    pub delta: f64,
    pub slope_eta: f64,
    pub slope_theta: f64,
    pub slope_eta_half: f64,
    pub slope_theta_half: f64,
    pub status: SlopeStatus,
}

/// Spectra at `θ = η = 0` and at the eight shifted points, shared by all states.
pub struct SlopeSolver {
    params: PhaseSpaceParams,
    basis: BasisSpec,
    settings: SlopeSettings,
    base: SpectrumResult,
    // [+δ, −δ, +δ/2, −δ/2] for η then θ
    eta: [SpectrumResult; 4],
    theta: [SpectrumResult; 4],
}

fn steps(delta: f64) -> [f64; 4] {
    [delta, -delta, delta / 2.0, -delta / 2.0]
}

impl SlopeSolver {
    pub fn new(params: &PhaseSpaceParams, basis: &BasisSpec, settings: SlopeSettings) -> Result<Self> {
        if !(settings.delta > 0.0 && settings.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {}", settings.delta)));
        }
        let pieces = build_pieces(params, basis)?;
        Self::from_pieces(params, &pieces, settings)
    }

    pub fn from_pieces(params: &PhaseSpaceParams, pieces: &HamiltonianPieces, settings: SlopeSettings) -> Result<Self> {
        let solve = |theta: f64, eta: f64| spectrum(&pieces.combine(theta, eta));
        let s = steps(settings.delta);
        let base = solve(0.0, 0.0)?;
        let eta = [solve(0.0, s[0])?, solve(0.0, s[1])?, solve(0.0, s[2])?, solve(0.0, s[3])?];
        let theta = [solve(s[0], 0.0)?, solve(s[1], 0.0)?, solve(s[2], 0.0)?, solve(s[3], 0.0)?];
        Ok(SlopeSolver { params: *params, basis: pieces.basis, settings, base, eta, theta })
    }

    pub fn base_spectrum(&self) -> &SpectrumResult {
        &self.base
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    /// Index of the unique eigenvector overlapping `v` by more than the threshold.
    fn track(&self, s: &SpectrumResult, v: &[Complex64]) -> std::result::Result<usize, String> {
        let mut best = (0usize, 0.0f64);
        let mut second = 0.0f64;
        for (k, w) in s.eigenvectors.iter().enumerate() {
            let o = dotc(w, v).norm();
            if o > best.1 {
                second = best.1;
                best = (k, o);
            } else if o > second {
                second = o;
            }
        }
        if best.1 <= self.settings.min_overlap || second >= best.1 {
            return Err(format!("best overlap {:.3}, runner-up {:.3}", best.1, second));
        }
        Ok(best.0)
    }

    pub fn slope(&self, q: &QuantumNumbers) -> Result<SlopeResult> {
        q.check_fits(&self.basis, 0)?;
        let cyl = cylindrical_state(q, &self.basis)?;
        let vals = &self.base.eigenvalues;
        let nearest = |k: usize| -> f64 {
            let mut g = f64::INFINITY;
            if k > 0 {
                g = g.min(vals[k] - vals[k - 1]);
            }
            if k + 1 < vals.len() {
                g = g.min(vals[k + 1] - vals[k]);
            }
            g
        };
        let mut out = SlopeResult {
            q: *q,
            energy: f64::NAN,
            gap: f64::NAN,
            delta: self.settings.delta,
            slope_eta: f64::NAN,
            slope_theta: f64::NAN,
            slope_eta_half: f64::NAN,
            slope_theta_half: f64::NAN,
            status: SlopeStatus::Ok,
        };
        // locate by energy first so a degenerate pair is reported as such
        let k = match self.track(&self.base, &cyl) {
            Ok(k) => k,
            Err(msg) => {
                let e = self.closest_level(&cyl);
                out.energy = vals[e];
                out.gap = nearest(e);
                out.status = if out.gap < self.settings.min_gap * self.params.hbar * self.params.omega {
                    SlopeStatus::Degenerate { gap: out.gap }
                } else {
                    SlopeStatus::Tracking(msg)
                };
                return Ok(out);
            }
        };
        out.energy = vals[k];
        out.gap = nearest(k);
        if out.gap < self.settings.min_gap * self.params.hbar * self.params.omega {
            out.status = SlopeStatus::Degenerate { gap: out.gap };
            return Ok(out);
        }
        let v0: &CVector = &self.base.eigenvectors[k];
        let mut energies = [[0.0; 4]; 2];
        for (row, set) in [&self.eta, &self.theta].iter().enumerate() {
            for (i, s) in set.iter().enumerate() {
                match self.track(s, v0) {
                    Ok(j) => energies[row][i] = s.eigenvalues[j],
                    Err(msg) => {
                        out.status = SlopeStatus::Tracking(msg);
                        return Ok(out);
                    }
                }
            }
        }
        let d = self.settings.delta;
        let central = |e: &[f64; 4], half: bool| {
            if half {
                (e[2] - e[3]) / d
            } else {
                (e[0] - e[1]) / (2.0 * d)
            }
        };
        out.slope_eta = central(&energies[0], false);
        out.slope_eta_half = central(&energies[0], true);
        out.slope_theta = central(&energies[1], false);
        out.slope_theta_half = central(&energies[1], true);
        let (eta_scale, theta_scale) = slope_scales(&self.params);
        let rel = richardson_rel(out.slope_eta, out.slope_eta_half, eta_scale)
            .max(richardson_rel(out.slope_theta, out.slope_theta_half, theta_scale));
        if rel > self.settings.richardson_rtol {
            out.status = SlopeStatus::Richardson { rel };
        }
        Ok(out)
    }

    fn closest_level(&self, v: &[Complex64]) -> usize {
        let mut best = (0usize, -1.0f64);
        for (k, w) in self.base.eigenvectors.iter().enumerate() {
            let o = dotc(w, v).norm();
            if o > best.1 {
                best = (k, o);
            }
        }
        best.0
    }
}

/// Natural magnitudes of `dE/dη` and `dE/dθ`, used as floors for relative
/// comparisons of slopes that happen to be close to zero.
pub fn slope_scales(p: &PhaseSpaceParams) -> (f64, f64) {
    (1.0 / p.mass, p.mass * p.omega * p.omega)
}

/// `|a − b| / max(|a|, |b|, 10⁻³·scale)`
pub fn relative_difference(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-3 * scale)
}

fn richardson_rel(a: f64, b: f64, scale: f64) -> f64 {
    relative_difference(a, b, scale)
}

/// Slopes of one state's eigenvalue at `θ = η = 0`.
pub fn hf_slope(q: &QuantumNumbers, p: &PhaseSpaceParams, basis: &BasisSpec, delta: f64) -> Result<SlopeResult> {
    let settings = SlopeSettings { delta, ..SlopeSettings::default() };
    SlopeSolver::new(p, basis, settings)?.slope(q)
}
