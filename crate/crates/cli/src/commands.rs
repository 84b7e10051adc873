use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ncosc_core::adjudicate::hf::SlopeSettings;
use ncosc_core::adjudicate::oracle::{Oracle, MARGIN};
use ncosc_core::adjudicate::report::{build_report, ReportConfig};
use ncosc_core::adjudicate::claims::GOLDEN_CLAIMS;
use ncosc_core::fock::{BasisSpec, QuantumNumbers};
use ncosc_core::opalg::hamiltonian::{bucket_label, BUCKETS};
use ncosc_core::opalg::{dump_buckets, expand_nc_hamiltonian, to_text};
use ncosc_core::pt;
use ncosc_core::spectra::{build_pieces_in, spectrum, total_hamiltonian, write_spectrum, PhaseSpaceParams};
use rayon::prelude::*;

use crate::config::{Format, RunConfig, States};
use crate::CliError;

pub const ENERGIES_HEADER: &str = "n_rho,mu,n_z,omega_c,E0,dE_eta,dE_theta,dE_total,validity";
pub const SWEEP_HEADER: &str = "omega_c,E0,dE1_paper,ratio_paper,dE1_oracle,ratio_oracle";
pub const FTABLE_HEADER: &str = "n_rho,mu,f";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write to `--out` or stdout.
pub fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_states(states: &[QuantumNumbers], basis: Option<&BasisSpec>) -> Result<(), CliError> {
    if let Some(b) = basis {
        for q in states {
            q.check_fits(b, MARGIN)?;
        }
    }
    Ok(())
}

fn at(p: &PhaseSpaceParams, w: f64) -> Result<PhaseSpaceParams, CliError> {
    p.with_omega_c(w).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn energies(cfg: &RunConfig, dump: Option<&Path>) -> Result<String, CliError> {
    let states = cfg.states.unwrap_or(States::Grid { max_planar: 6, max_nz: 4 }).list();
    check_states(&states, cfg.basis.as_ref())?;
    let valid = pt::validity(&cfg.params);
    let mut rows = Vec::new();
    for w in cfg.omega_cs() {
        let p = at(&cfg.params, w)?;
        for q in &states {
            rows.push((*q, w, pt::breakdown(q, &p)));
        }
    }
    let mut s = String::new();
    match cfg.format {
        Format::Csv => {
            let _ = writeln!(s, "{ENERGIES_HEADER}");
            for (q, w, b) in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    q.n_rho,
                    q.mu,
                    q.n_z,
                    num(*w),
                    num(b.e0),
                    num(b.de_eta),
                    num(b.de_theta),
                    num(b.de_total),
                    if b.validity.pass { "ok" } else { "fail" }
                );
            }
        }
        Format::Text => {
            let _ = writeln!(s, "# {}", cfg.params);
            let _ = writeln!(
                s,
                "# validity: eta*m/(hbar*omega)={:.3e} theta*m*omega/hbar={:.3e} limit {} -> {}",
                valid.eta_ratio,
                valid.theta_ratio,
                valid.factor,
                if valid.pass { "ok" } else { "fail" }
            );
            let _ = writeln!(
                s,
                "{:>5} {:>4} {:>3} {:>10} {:>16} {:>16} {:>16} {:>16} {:>8}",
                "n_rho", "mu", "n_z", "omega_c", "E0", "dE_eta", "dE_theta", "dE_total", "validity"
            );
            for (q, w, b) in &rows {
                let _ = writeln!(
                    s,
                    "{:>5} {:>4} {:>3} {:>10.4} {:>16.9e} {:>16.9e} {:>16.9e} {:>16.9e} {:>8}",
                    q.n_rho,
                    q.mu,
                    q.n_z,
                    w,
                    b.e0,
                    b.de_eta,
                    b.de_theta,
                    b.de_total,
                    if b.validity.pass { "ok" } else { "fail" }
                );
            }
        }
    }
    if let Some(path) = dump {
        let basis = cfg.basis.unwrap_or(BasisSpec::uniform(8));
        let pieces = build_pieces_in(&cfg.params, &basis, cfg.space)?;
        let levels = spectrum(&total_hamiltonian(&pieces, &cfg.params))?;
        let mut buf = Vec::new();
        write_spectrum(&mut buf, &cfg.params, &basis, &levels.eigenvalues)?;
        fs::write(path, buf).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(s)
}

pub fn ftable(cfg: &RunConfig, max_n_rho: u32, diagonal: bool) -> Result<String, CliError> {
    if max_n_rho == 0 {
        return Err(CliError::Usage("--nrho must be at least 1 for the f table".into()));
    }
    Ok(match cfg.format {
        Format::Text => pt::ftable_text(max_n_rho, diagonal),
        Format::Csv => {
            let mut s = format!("{FTABLE_HEADER}\n");
            for (n, m) in pt::ftable_pairs(max_n_rho, diagonal) {
                let _ = writeln!(s, "{n},{m},{}", pt::f_coeff(n, m as i32)?);
            }
            s
        }
    })
}

pub fn sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let q = match cfg.states {
        None => QuantumNumbers::new(1, 0, 1),
        Some(States::Single(q)) => q,
        Some(States::Grid { .. }) => return Err(CliError::Usage("sweep takes one state, not --grid".into())),
    };
    let basis = cfg.basis.unwrap_or_else(|| BasisSpec::covering(&[q], MARGIN));
    q.check_fits(&basis, MARGIN)?;
    let points = match &cfg.sweep {
        Some(s) => s.points(),
        None => crate::config::Sweep { start: 0.1, end: 10.0, steps: 100 }.points(),
    };
    let rows: Vec<Result<String, CliError>> = points
        .par_iter()
        .map(|&w| {
            let p = at(&cfg.params, w)?;
            let e0 = pt::e0(&q, &p);
            let de_paper = pt::de_eta(&q, &p) + pt::de_theta(&q, &p);
            let o = Oracle::new(&p, &basis)?.evaluate(&q)?;
            let de_oracle = o.de_eta + o.de_theta;
            Ok(format!(
                "{},{},{},{},{},{}",
                num(w),
                num(e0),
                num(de_paper),
                num((de_paper / e0).abs()),
                num(de_oracle),
                num((de_oracle / o.e0).abs())
            ))
        })
        .collect();
    let mut s = format!("{SWEEP_HEADER}\n");
    for r in rows {
        s.push_str(&r?);
        s.push('\n');
    }
    Ok(s)
}

pub struct VerifyOutcome {
    pub text: String,
    pub consistent: bool,
}

pub fn verify(cfg: &RunConfig, claims: Option<&Path>) -> Result<VerifyOutcome, CliError> {
    let states = cfg.states.unwrap_or(States::Grid { max_planar: 6, max_nz: 4 }).list();
    check_states(&states, cfg.basis.as_ref())?;
    let claims = match claims {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?,
        None => GOLDEN_CLAIMS.to_string(),
    };
    let mut rc = ReportConfig::new(cfg.params);
    rc.omega_cs = cfg.omega_cs();
    rc.states = states;
    rc.basis = cfg.basis;
    rc.slope = SlopeSettings { delta: cfg.delta, ..SlopeSettings::default() };
    rc.claims = claims;
    let report = build_report(&rc)?;
    let ledger = report.ledger();
    let csv = report.csv();
    let text = match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            for (name, body) in [("ledger.txt", &ledger), ("report.csv", &csv)] {
                let p = dir.join(name);
                fs::write(&p, body).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
            }
            ledger.lines().skip_while(|l| *l != "== summary ==").map(|l| format!("{l}\n")).collect()
        }
        None => match cfg.format {
            Format::Csv => csv,
            Format::Text => ledger,
        },
    };
    Ok(VerifyOutcome { text, consistent: report.consistent() })
}

pub fn expand(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(match cfg.format {
        Format::Text => dump_buckets(cfg.space),
        Format::Csv => {
            let buckets = expand_nc_hamiltonian(cfg.space);
            let mut s = String::from("theta_power,eta_power,label,expression\n");
            for key in BUCKETS {
                let e = buckets.get(&key).map(to_text).unwrap_or_else(|| "0".into());
                let _ = writeln!(s, "{},{},{},\"{}\"", key.0, key.1, bucket_label(key), e);
            }
            s
        }
    })
}
