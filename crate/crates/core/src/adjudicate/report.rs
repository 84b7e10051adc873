//! Discrepancy report: published formulas against oracle values and exact
//! eigenvalue slopes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::claims::{compare_claims, numeric_verdict, ClaimComparison, Verdict};
use super::hf::{relative_difference, slope_scales, SlopeResult, SlopeSettings, SlopeSolver, SlopeStatus, SLOPE_MARGIN};
use super::oracle::{predict, Oracle, OraclePrediction, OracleValues, MARGIN};
use crate::error::Result;
use crate::fock::{BasisSpec, QuantumNumbers};
use crate::pt;
use crate::spectra::PhaseSpaceParams;

pub const CSV_HEADER: &str = "n_rho,mu,n_z,omega_c,e0_paper,e0_oracle,de_eta_paper,de_eta_oracle,\
de_theta_paper,de_theta_oracle,slope_eta_fd,slope_theta_fd,verdict_eta,verdict_theta";

/// Tolerance of the closed-form decompositions of the oracle.
pub const DECOMPOSITION_RTOL: f64 = 1e-10;
/// Tolerance of slope against expectation value.
pub const HF_RTOL: f64 = 1e-6;
/// Bound on the dimensionless vanishing elements.
pub const VANISHING_TOL: f64 = 1e-11;

/// Curves whose relative-correction minima are compared, with the published
/// locations.
pub const PUBLISHED_MINIMA: [((u32, i32, u32), f64); 6] = [
    ((1, 0, 1), 1.79),
    ((2, 0, 1), 2.58),
    ((2, 1, 1), 2.71),
    ((3, 0, 1), 3.11),
    ((3, 1, 1), 2.81),
    ((3, 2, 1), 3.20),
];

#[derive(Clone, Debug)]
pub struct ReportConfig {
    /// Base parameters; `omega_c` is replaced by each entry of `omega_cs`.
    pub params: PhaseSpaceParams,
    pub omega_cs: Vec<f64>,
    pub states: Vec<QuantumNumbers>,
    /// `None` chooses the smallest basis that holds all states with margin.
    pub basis: Option<BasisSpec>,
    pub slope: SlopeSettings,
    /// `(points, lo, hi)` of the log-spaced ω_c scan for minima.
    pub minima_scan: (usize, f64, f64),
    /// Published claims, `label: expression` per line.
    pub claims: String,
}

impl ReportConfig {
    /// States with `2n_ρ+|μ| ≤ 6`, `n_z ≤ 4` at the single ω_c of `params`.
    pub fn new(params: PhaseSpaceParams) -> Self {
        ReportConfig {
            params,
            omega_cs: vec![params.omega_c],
            states: QuantumNumbers::grid(6, 4),
            basis: None,
            slope: SlopeSettings::default(),
            minima_scan: (200, 0.1, 10.0),
            claims: super::claims::GOLDEN_CLAIMS.to_string(),
        }
    }

    pub fn resolved_basis(&self) -> BasisSpec {
        self.basis.unwrap_or_else(|| BasisSpec::covering(&self.states, SLOPE_MARGIN))
    }
}

#[derive(Clone, Debug)]
pub struct ReportRecord {
    pub q: QuantumNumbers,
    pub omega_c: f64,
    pub e0_paper: f64,
    /// Eigenvalue of `α²H0` matched to the state.
    pub e0_oracle: f64,
    pub de_eta_paper: f64,
    pub de_eta_paper_signed: f64,
    pub de_eta_oracle: f64,
    pub de_theta_paper: f64,
    pub de_theta_oracle: f64,
    pub oracle: OracleValues,
    pub predicted: OraclePrediction,
    pub predicted_e0: f64,
    /// Relative deviation of the matched eigenvalue from the closed form with `−½ħω_cμ`.
    pub e0_rel: f64,
    pub slope: SlopeResult,
    pub verdict_e0: Verdict,
    pub verdict_eta: Verdict,
    pub verdict_theta: Verdict,
    /// Worst relative deviation of the oracle from its closed forms.
    pub decomposition_rel: f64,
    /// Worst relative deviation of slopes from `⟨H⟩/ħ`; NaN when excluded.
    pub hf_rel: f64,
    pub flags: Vec<String>,
}

impl ReportRecord {
    /// Internal checks that must hold whatever the published formulas say.
    pub fn consistent(&self) -> bool {
        let decomposition = self.decomposition_rel <= DECOMPOSITION_RTOL && self.e0_rel <= DECOMPOSITION_RTOL;
        let vanishing = self.oracle.vanishing_max <= VANISHING_TOL;
        let slopes = match self.slope.status {
            SlopeStatus::Degenerate { .. } => true,
            SlopeStatus::Ok => self.hf_rel <= HF_RTOL,
            _ => false,
        };
        decomposition && vanishing && slopes
    }
}

#[derive(Clone, Debug)]
pub struct FRow {
    pub n_rho: u32,
    pub mu: u32,
    pub f_published: BigInt,
    /// `f` that would make the published θ correction equal the oracle, for `+|μ|` and `−|μ|`.
    pub f_implied: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct MinimumRow {
    pub q: QuantumNumbers,
    pub published: f64,
    pub located: f64,
    pub located_value: f64,
    pub oracle_located: f64,
    pub on_boundary: bool,
    pub oracle_on_boundary: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub params: PhaseSpaceParams,
    pub basis: BasisSpec,
    pub slope: SlopeSettings,
    pub records: Vec<ReportRecord>,
    pub claims: Vec<ClaimComparison>,
    pub ftable_omega_c: f64,
    pub ftable: Vec<FRow>,
    pub minima: Vec<MinimumRow>,
    /// Points that could not be evaluated at all, e.g. solver failure.
    pub point_errors: Vec<(f64, String)>,
}

fn rel(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

fn point(cfg: &ReportConfig, basis: &BasisSpec, omega_c: f64) -> Result<Vec<ReportRecord>> {
    let p = cfg.params.with_omega_c(omega_c)?;
    let oracle = Oracle::new(&p, basis)?;
    let solver = SlopeSolver::new(&p, basis, cfg.slope)?;
    let (eta_scale, theta_scale) = slope_scales(&p);
    let mut out = Vec::new();
    for q in &cfg.states {
        let ov = oracle.evaluate(q)?;
        let slope = solver.slope(q)?;
        let w = predict(q, &p);
        let e0_pred = w.e0;
        let energy_floor = p.hbar * p.omega;
        let decomposition_rel = [
            rel(ov.e0, w.e0, 0.0),
            rel(ov.rho2, w.rho2, 0.0),
            rel(ov.p_perp2, w.p_perp2, 0.0),
            rel(ov.lz, w.lz, p.hbar),
            rel(ov.de_eta, w.de_eta, 1e-3 * p.eta / p.mass),
            rel(ov.de_theta, w.de_theta, 1e-3 * p.theta * p.mass * p.omega * p.omega),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let mut flags = Vec::new();
        let hf_rel = if slope.status.is_ok() {
            relative_difference(slope.slope_eta, ov.eta_expectation / p.hbar, eta_scale)
                .max(relative_difference(slope.slope_theta, ov.theta_expectation / p.hbar, theta_scale))
        } else {
            f64::NAN
        };
        match &slope.status {
            SlopeStatus::Ok => {}
            SlopeStatus::Degenerate { gap } => flags.push(format!("degenerate(gap={gap:.3e})")),
            SlopeStatus::Tracking(m) => flags.push(format!("tracking({m})")),
            SlopeStatus::Richardson { rel } => flags.push(format!("richardson(rel={rel:.3e})")),
        }
        let e0_rel = rel(slope.energy, e0_pred, energy_floor);
        if e0_rel > DECOMPOSITION_RTOL {
            flags.push("e0-eigenvalue".into());
        }
        if decomposition_rel > DECOMPOSITION_RTOL {
            flags.push(format!("decomposition(rel={decomposition_rel:.3e})"));
        }
        if ov.vanishing_max > VANISHING_TOL {
            flags.push(format!("vanishing({:.3e})", ov.vanishing_max));
        }
        if slope.status.is_ok() && hf_rel > HF_RTOL {
            flags.push(format!("hf(rel={hf_rel:.3e})"));
        }
        let e0_paper = pt::e0(q, &p);
        let de_eta_paper = pt::de_eta(q, &p);
        let de_theta_paper = pt::de_theta(q, &p);
        out.push(ReportRecord {
            q: *q,
            omega_c,
            e0_paper,
            e0_oracle: slope.energy,
            de_eta_paper,
            de_eta_paper_signed: pt::de_eta_signed_mu(q, &p),
            de_eta_oracle: ov.de_eta,
            de_theta_paper,
            de_theta_oracle: ov.de_theta,
            verdict_e0: numeric_verdict(e0_paper, slope.energy),
            verdict_eta: numeric_verdict(de_eta_paper, ov.de_eta),
            verdict_theta: numeric_verdict(de_theta_paper, ov.de_theta),
            oracle: ov,
            predicted: w,
            predicted_e0: e0_pred,
            e0_rel,
            slope,
            decomposition_rel,
            hf_rel,
            flags,
        });
    }
    Ok(out)
}

fn ftable_rows(p: &PhaseSpaceParams) -> Result<Vec<FRow>> {
    let pairs = pt::ftable_pairs(3, false);
    let states: Vec<QuantumNumbers> =
        pairs.iter().flat_map(|&(n, m)| [QuantumNumbers::new(n, m as i32, 0), QuantumNumbers::new(n, -(m as i32), 0)]).collect();
    let oracle = Oracle::new(p, &BasisSpec::covering(&states, MARGIN))?;
    let wt = p.omega_t();
    let implied = |de_theta: f64| {
        if p.omega_c == 0.0 || p.theta == 0.0 {
            f64::NAN
        } else {
            2.0 / p.omega_c * (wt + 2.0 * de_theta / (p.theta * p.mass * wt))
        }
    };
    pairs
        .into_iter()
        .map(|(n, m)| {
            let plus = oracle.evaluate(&QuantumNumbers::new(n, m as i32, 0))?;
            let minus = oracle.evaluate(&QuantumNumbers::new(n, -(m as i32), 0))?;
            Ok(FRow {
                n_rho: n,
                mu: m,
                f_published: pt::f_coeff(n, m as i32)?,
                f_implied: (implied(plus.de_theta), implied(minus.de_theta)),
            })
        })
        .collect()
}

fn log_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    g[0] = lo;
    g[n - 1] = hi;
    g
}

/// Minimum of `f` on the scan grid, refined by golden-section search between
/// the neighbours of the best grid point. Returns `(x, f(x), on_boundary)`.
pub fn locate_minimum<F: Fn(f64) -> f64>(f: F, grid: &[f64]) -> (f64, f64, bool) {
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut k = 0;
    for i in 1..vals.len() {
        if vals[i] < vals[k] {
            k = i;
        }
    }
    if k == 0 || k + 1 == grid.len() {
        return (grid[k], vals[k], true);
    }
    let (mut a, mut b) = (grid[k - 1], grid[k + 1]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x), false)
}

fn minima_rows(cfg: &ReportConfig) -> Result<Vec<MinimumRow>> {
    let (n, lo, hi) = cfg.minima_scan;
    let grid = log_grid(n, lo, hi);
    let base = cfg.params;
    PUBLISHED_MINIMA
        .iter()
        .map(|&((nr, mu, nz), published)| {
            let q = QuantumNumbers::new(nr, mu, nz);
            let at = |w: f64| base.with_omega_c(w).expect("scan points are positive");
            let (located, located_value, on_boundary) = locate_minimum(|w| pt::relative_correction(&q, &at(w)), &grid);
            let (oracle_located, _, oracle_on_boundary) = locate_minimum(
                |w| {
                    let p = at(w);
                    let o = predict(&q, &p);
                    ((o.de_eta + o.de_theta) / o.e0).abs()
                },
                &grid,
            );
            Ok(MinimumRow { q, published, located, located_value, oracle_located, on_boundary, oracle_on_boundary })
        })
        .collect()
}

pub fn build_report(cfg: &ReportConfig) -> Result<Report> {
    let basis = cfg.resolved_basis();
    for q in &cfg.states {
        q.check_fits(&basis, MARGIN)?;
    }
    let claims = compare_claims(&super::claims::parse_claims(&cfg.claims)?)?;
    let mut omega_cs = cfg.omega_cs.clone();
    omega_cs.sort_by(f64::total_cmp);
    omega_cs.dedup();
    let results: Vec<(f64, Result<Vec<ReportRecord>>)> =
        omega_cs.par_iter().map(|&w| (w, point(cfg, &basis, w))).collect();
    let mut records = Vec::new();
    let mut point_errors = Vec::new();
    for (w, r) in results {
        match r {
            Ok(mut recs) => records.append(&mut recs),
            Err(e) => point_errors.push((w, e.to_string())),
        }
    }
    records.sort_by(|a, b| a.q.cmp(&b.q).then(a.omega_c.total_cmp(&b.omega_c)));
    let ftable_omega_c = omega_cs.first().copied().unwrap_or(cfg.params.omega_c);
    let ftable = ftable_rows(&cfg.params.with_omega_c(ftable_omega_c)?)?;
    Ok(Report {
        params: cfg.params,
        basis,
        slope: cfg.slope,
        records,
        claims,
        ftable_omega_c,
        ftable,
        minima: minima_rows(cfg)?,
        point_errors,
    })
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

fn short(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6e}")
    } else {
        "-".into()
    }
}

impl Report {
    pub fn consistent(&self) -> bool {
        self.point_errors.is_empty() && self.records.iter().all(ReportRecord::consistent)
    }

    pub fn verdict_counts(&self) -> [(Verdict, usize, usize, usize); 3] {
        [Verdict::Match, Verdict::SignFlip, Verdict::Mismatch].map(|v| {
            (
                v,
                self.records.iter().filter(|r| r.verdict_e0 == v).count(),
                self.records.iter().filter(|r| r.verdict_eta == v).count(),
                self.records.iter().filter(|r| r.verdict_theta == v).count(),
            )
        })
    }

    pub fn csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{CSV_HEADER}");
        for r in &self.records {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.q.n_rho,
                r.q.mu,
                r.q.n_z,
                num(r.omega_c),
                num(r.e0_paper),
                num(r.e0_oracle),
                num(r.de_eta_paper),
                num(r.de_eta_oracle),
                num(r.de_theta_paper),
                num(r.de_theta_oracle),
                num(r.slope.slope_eta),
                num(r.slope.slope_theta),
                r.verdict_eta,
                r.verdict_theta
            );
        }
        s
    }

    pub fn ledger(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        let _ = writeln!(s, "discrepancy ledger");
        let _ = writeln!(
            s,
            "params: hbar={} m={} omega={} alpha={} theta={} eta={}",
            p.hbar, p.mass, p.omega, p.alpha, p.theta, p.eta
        );
        let _ = writeln!(s, "basis: {}", self.basis);
        let _ = writeln!(
            s,
            "slopes: delta={:e} richardson_rtol={:e} min_overlap={} gap_guard={:e}*hbar*omega",
            self.slope.delta, self.slope.richardson_rtol, self.slope.min_overlap, self.slope.min_gap
        );
        let _ = writeln!(s);

        let _ = writeln!(s, "== operator identities ==");
        for c in &self.claims {
            let _ = writeln!(s, "[{}] {}", c.verdict, c.label);
            let _ = writeln!(s, "  published: {}", c.published);
            match &c.published_normal {
                Ok(t) => {
                    let _ = writeln!(s, "  normalized: {t}");
                }
                Err(e) => {
                    let _ = writeln!(s, "  unparseable: {e}");
                }
            }
            let _ = writeln!(s, "  engine:    {}", c.engine);
        }
        let _ = writeln!(s);

        let _ = writeln!(s, "== energies and first-order corrections ==");
        let _ = writeln!(
            s,
            "columns: state omega_c | E0 published / eigenvalue / delta [verdict] | dE_eta published / oracle \
             [verdict] signed-mu | dE_theta published / oracle [verdict] | slopes eta, theta (step, half-step) | \
             <Lz> <rho^2> <px^2+py^2> <p_rho^2>radial | vanishing | flags"
        );
        for r in &self.records {
            let _ = writeln!(
                s,
                "{} omega_c={} | E0 {} / {} / {} [{}] | dE_eta {} / {} [{}] {} | dE_theta {} / {} [{}] | \
                 slope_eta {} {} slope_theta {} {} | {} {} {} {} | {} | {}",
                r.q,
                num(r.omega_c),
                num(r.e0_paper),
                num(r.e0_oracle),
                short(r.e0_paper - r.e0_oracle),
                r.verdict_e0,
                num(r.de_eta_paper),
                num(r.de_eta_oracle),
                r.verdict_eta,
                num(r.de_eta_paper_signed),
                num(r.de_theta_paper),
                num(r.de_theta_oracle),
                r.verdict_theta,
                short(r.slope.slope_eta),
                short(r.slope.slope_eta_half),
                short(r.slope.slope_theta),
                short(r.slope.slope_theta_half),
                short(r.oracle.lz),
                short(r.oracle.rho2),
                short(r.oracle.p_perp2),
                short(r.predicted.p_rho2_radial),
                short(r.oracle.vanishing_max),
                if r.flags.is_empty() { "-".to_string() } else { r.flags.join(" ") }
            );
        }
        for (w, e) in &self.point_errors {
            let _ = writeln!(s, "point omega_c={} failed: {e}", num(*w));
        }
        let _ = writeln!(s);

        let _ = writeln!(s, "== f(n_rho,|mu|) at omega_c={} ==", num(self.ftable_omega_c));
        let _ = writeln!(s, "n_rho |mu| f_published f_implied(+|mu|) f_implied(-|mu|)");
        for f in &self.ftable {
            let _ = writeln!(
                s,
                "{} {} {} {} {}",
                f.n_rho,
                f.mu,
                f.f_published,
                short(f.f_implied.0),
                short(f.f_implied.1)
            );
        }
        let _ = writeln!(s);

        let _ = writeln!(s, "== minima of |dE1/E0| over omega_c ==");
        let _ = writeln!(s, "state published located delta value_at_minimum boundary oracle_curve_minimum oracle_boundary");
        for m in &self.minima {
            let _ = writeln!(
                s,
                "{} {:.2} {:.6} {:+.6} {} {} {:.6} {}",
                m.q,
                m.published,
                m.located,
                m.located - m.published,
                short(m.located_value),
                if m.on_boundary { "yes" } else { "no" },
                m.oracle_located,
                if m.oracle_on_boundary { "yes" } else { "no" }
            );
        }
        let _ = writeln!(s);

        let _ = writeln!(s, "== summary ==");
        let total = self.records.len();
        let degenerate =
            self.records.iter().filter(|r| matches!(r.slope.status, SlopeStatus::Degenerate { .. })).count();
        let hf_max = self.records.iter().map(|r| r.hf_rel).filter(|x| x.is_finite()).fold(0.0, f64::max);
        let dec_max = self.records.iter().map(|r| r.decomposition_rel).fold(0.0, f64::max);
        let van_max = self.records.iter().map(|r| r.oracle.vanishing_max).fold(0.0, f64::max);
        let _ = writeln!(s, "records: {total} (degenerate, excluded from slope checks: {degenerate})");
        let _ = writeln!(s, "max slope vs expectation rel: {}", short(hf_max));
        let _ = writeln!(s, "max oracle decomposition rel: {}", short(dec_max));
        let _ = writeln!(s, "max vanishing element: {}", short(van_max));
        for (v, e0, eta, theta) in self.verdict_counts() {
            let _ = writeln!(s, "{v}: e0 {e0} eta {eta} theta {theta}");
        }
        for v in [Verdict::Match, Verdict::SignFlip, Verdict::Mismatch] {
            let n = self.claims.iter().filter(|c| c.verdict == v).count();
            let _ = writeln!(s, "identities {v}: {n}");
        }
        let _ = writeln!(s, "internal consistency: {}", if self.consistent() { "PASS" } else { "FAIL" });
        s
    }
}
