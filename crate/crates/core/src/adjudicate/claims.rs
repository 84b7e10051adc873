//! Published operator identities checked against the rewriting engine.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::opalg::expr::ops;
use crate::opalg::hamiltonian::{bucket_label, expand_nc_hamiltonian, nc_angular_momentum_z};
use crate::opalg::hamiltonian::{nc_momentum_squared, nc_planar_radius_squared, nc_z_squared};
use crate::opalg::{bopp_shift, commutator, parse, to_text, AntisymTensor, CanonicalSymbol, OperatorExpr, Space};

/// The transcribed claims shipped with the crate.
pub const GOLDEN_CLAIMS: &str = include_str!("../../golden/v1/claims.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Match,
    SignFlip,
    Mismatch,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::SignFlip => "SIGN-FLIP",
            Verdict::Mismatch => "MISMATCH",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relative tolerance for numeric verdicts.
pub const VERDICT_RTOL: f64 = 1e-8;

/// Three-way comparison of a published number against a reference.
pub fn numeric_verdict(published: f64, reference: f64) -> Verdict {
    let scale = published.abs().max(reference.abs());
    if scale == 0.0 || (published - reference).abs() <= VERDICT_RTOL * scale {
        Verdict::Match
    } else if (published + reference).abs() <= VERDICT_RTOL * scale {
        Verdict::SignFlip
    } else {
        Verdict::Mismatch
    }
}

/// Symbolic comparison after normalization.
pub fn symbolic_verdict(published: &OperatorExpr, reference: &OperatorExpr) -> Verdict {
    let a = published.normalize();
    let b = reference.normalize();
    if a == b {
        Verdict::Match
    } else if a == -&b {
        Verdict::SignFlip
    } else {
        Verdict::Mismatch
    }
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub label: String,
    pub text: String,
    pub line: usize,
}

/// `label: expression` per line; `#` starts a comment, blank lines are skipped.
pub fn parse_claims(src: &str) -> Result<Vec<Claim>> {
    let mut out: Vec<Claim> = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (label, text) = line
            .split_once(':')
            .ok_or_else(|| Error::Claims(format!("line {}: expected 'label: expression'", k + 1)))?;
        let label = label.trim();
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Claims(format!("line {}: bad label '{label}'", k + 1)));
        }
        if out.iter().any(|c| c.label == label) {
            return Err(Error::Claims(format!("line {}: duplicate label '{label}'", k + 1)));
        }
        out.push(Claim { label: label.to_string(), text: text.trim().to_string(), line: k + 1 });
    }
    Ok(out)
}

pub fn load_claims(path: &Path) -> Result<Vec<Claim>> {
    parse_claims(&std::fs::read_to_string(path)?)
}

/// Labels the engine can evaluate, in reporting order.
pub const ENGINE_LABELS: [&str; 20] = [
    "x_hat",
    "y_hat",
    "z_hat",
    "px_hat",
    "py_hat",
    "pz_hat",
    "comm_xp_2d_11",
    "comm_xp_2d_12",
    "comm_xp_3d_11",
    "comm_xp_3d_12",
    "lz_hat",
    "p2_hat",
    "r2_hat",
    "z2_hat",
    "H0",
    "H_eta",
    "H_theta",
    "H_eta_theta",
    "H_eta2",
    "H_theta2",
];

/// Engine-derived expression for a claim label.
pub fn engine_claim(label: &str) -> Option<OperatorExpr> {
    let space = AntisymTensor::space();
    let shift = |s: CanonicalSymbol| bopp_shift(s, &space);
    let xp = |t: AntisymTensor, i: CanonicalSymbol, j: CanonicalSymbol| {
        commutator(&bopp_shift(i, &t), &bopp_shift(j, &t))
    };
    let e = match label {
        "x_hat" => shift(CanonicalSymbol::X),
        "y_hat" => shift(CanonicalSymbol::Y),
        "z_hat" => shift(CanonicalSymbol::Z),
        "px_hat" => shift(CanonicalSymbol::PX),
        "py_hat" => shift(CanonicalSymbol::PY),
        "pz_hat" => shift(CanonicalSymbol::PZ),
        "comm_xp_2d_11" => xp(AntisymTensor::plane(), CanonicalSymbol::X, CanonicalSymbol::PX),
        "comm_xp_2d_12" => xp(AntisymTensor::plane(), CanonicalSymbol::X, CanonicalSymbol::PY),
        "comm_xp_3d_11" => xp(space, CanonicalSymbol::X, CanonicalSymbol::PX),
        "comm_xp_3d_12" => xp(space, CanonicalSymbol::X, CanonicalSymbol::PY),
        "lz_hat" => nc_angular_momentum_z(Space::Space),
        "p2_hat" => nc_momentum_squared(Space::Space),
        "r2_hat" => nc_planar_radius_squared(Space::Space),
        "z2_hat" => nc_z_squared(Space::Space),
        _ => {
            let buckets = expand_nc_hamiltonian(Space::Space);
            let key = buckets.keys().copied().find(|k| bucket_label(*k) == label)?;
            buckets[&key].clone()
        }
    };
    Some(e.normalize())
}

#[derive(Clone, Debug)]
pub struct ClaimComparison {
    pub label: String,
    pub published: String,
    /// Normalized published expression, or the parse failure.
    pub published_normal: std::result::Result<String, String>,
    pub engine: String,
    pub verdict: Verdict,
}

/// Compare every claim with the engine. Unknown labels are an error; a claim
/// that does not parse is a mismatch.
pub fn compare_claims(claims: &[Claim]) -> Result<Vec<ClaimComparison>> {
    let mut out = Vec::new();
    for c in claims {
        let engine = engine_claim(&c.label)
            .ok_or_else(|| Error::Claims(format!("line {}: unknown label '{}'", c.line, c.label)))?;
        let (normal, verdict) = match parse(&c.text) {
            Ok(p) => {
                let v = symbolic_verdict(&p, &engine);
                (Ok(to_text(&p.normalize())), v)
            }
            Err(e) => (Err(e.to_string()), Verdict::Mismatch),
        };
        out.push(ClaimComparison {
            label: c.label.clone(),
            published: c.text.clone(),
            published_normal: normal,
            engine: to_text(&engine),
            verdict,
        });
    }
    Ok(out)
}

/// `[x̂_i, p̂_j]` as the engine derives it, written with the first-first
/// contraction: `iħα²δ_ij + i(θη/4α²ħ) Σ_μ λ_iμ λ_jμ`.
pub fn xp_commutator_formula(t: &AntisymTensor, i: usize, j: usize) -> Result<OperatorExpr> {
    use crate::opalg::{Coeff, Contraction, Param};
    let k = t.contract(i, j, Contraction::FirstFirst)?;
    let delta = i64::from(i == j);
    let a = &(&Coeff::i() * &Coeff::param(Param::Hbar)) * &Coeff::param_pow(Param::Alpha, 2);
    let b = &(&(&Coeff::i() * &Coeff::param(Param::Theta)) * &Coeff::param(Param::Eta))
        * &(&Coeff::rational(1, 4) * &(&Coeff::param_pow(Param::Alpha, -2) * &Coeff::param_pow(Param::Hbar, -1)));
    Ok(&ops::c(&a * &Coeff::int(delta)) + &ops::c(&b * &Coeff::int(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_claims_parse_and_resolve() {
        let claims = parse_claims(GOLDEN_CLAIMS).unwrap();
        assert_eq!(claims.len(), ENGINE_LABELS.len());
        for (c, l) in claims.iter().zip(ENGINE_LABELS) {
            assert_eq!(c.label, l);
        }
        let cmp = compare_claims(&claims).unwrap();
        let verdict = |l: &str| cmp.iter().find(|c| c.label == l).unwrap().verdict;
        assert_eq!(verdict("x_hat"), Verdict::Match);
        assert_eq!(verdict("py_hat"), Verdict::Match);
        assert_eq!(verdict("pz_hat"), Verdict::Mismatch);
        assert_eq!(verdict("H_eta"), Verdict::Match);
        assert_eq!(verdict("H_theta"), Verdict::Match);
        assert_eq!(verdict("H_eta_theta"), Verdict::SignFlip);
        assert_eq!(verdict("H0"), Verdict::Match);
    }

    #[test]
    fn commutator_formula_matches_engine() {
        for t in [AntisymTensor::plane(), AntisymTensor::space()] {
            for i in 1..=t.dim() {
                for j in 1..=t.dim() {
                    let xi = CanonicalSymbol::pos(crate::opalg::Axis::from_index(i - 1).unwrap());
                    let pj = CanonicalSymbol::mom(crate::opalg::Axis::from_index(j - 1).unwrap());
                    let got = commutator(&bopp_shift(xi, &t), &bopp_shift(pj, &t));
                    assert_eq!(got, xp_commutator_formula(&t, i, j).unwrap().normalize());
                }
            }
        }
    }

    #[test]
    fn claims_file_errors() {
        assert!(parse_claims("no colon here").is_err());
        assert!(parse_claims("a: x\na: y").is_err());
        assert!(parse_claims("bad label: x").is_err());
        let c = parse_claims("nonsense: x").unwrap();
        assert!(compare_claims(&c).is_err());
        let c = parse_claims("x_hat: alpha*x +").unwrap();
        let r = compare_claims(&c).unwrap();
        assert_eq!(r[0].verdict, Verdict::Mismatch);
        assert!(r[0].published_normal.is_err());
    }

    #[test]
    fn numeric_verdicts() {
        assert_eq!(numeric_verdict(1.0, 1.0 + 1e-10), Verdict::Match);
        assert_eq!(numeric_verdict(-2.0, 2.0), Verdict::SignFlip);
        assert_eq!(numeric_verdict(1.0, 3.0), Verdict::Mismatch);
        assert_eq!(numeric_verdict(0.0, 0.0), Verdict::Match);
    }
}
