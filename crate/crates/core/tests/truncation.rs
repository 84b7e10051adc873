use ncosc_core::fock::{assemble_sparse, cylindrical_state, BasisSpec, QuantumNumbers};
use ncosc_core::opalg::{CanonicalSymbol, Coeff, OperatorExpr};
use ncosc_core::spectra::{build_pieces, spectrum, PhaseSpaceParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn quadratic() -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec((prop::collection::vec(0usize..6, 0..=2), -4i64..=4, any::<bool>()), 1..=5).prop_map(|t| {
        let mut e = OperatorExpr::zero();
        for (w, n, imag) in t {
            let c = if imag { &Coeff::int(n) * &Coeff::i() } else { Coeff::int(n) };
            let word = w.iter().map(|&i| CanonicalSymbol::ALL[i]).collect();
            e = &e + &OperatorExpr::from_terms([(word, c)]);
        }
        e
    })
}

fn embed(v: &[Complex64], from: &BasisSpec, to: &BasisSpec) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); to.dim()];
    for (k, c) in v.iter().enumerate() {
        let [a, b, d] = from.occupations(k);
        out[to.index(a, b, d)] = *c;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratic_expectations_do_not_see_the_cutoff(
        e in quadratic(),
        amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 27),
        wc in 0.0f64..3.0,
    ) {
        let p = PhaseSpaceParams::natural(wc).unwrap();
        let env = p.env();
        let small = BasisSpec::uniform(4);
        let large = BasisSpec::uniform(8);
        // support on occupations ≤ 2 = n_max − 2
        let support = BasisSpec::uniform(2);
        let v: Vec<Complex64> = amps.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let vs = embed(&v, &support, &small);
        let vl = embed(&v, &support, &large);
        let a = assemble_sparse(&e, &small, &env).unwrap().expectation(&vs).unwrap();
        let b = assemble_sparse(&e, &large, &env).unwrap().expectation(&vl).unwrap();
        let scale = a.norm().max(b.norm()).max(1.0);
        prop_assert!((a - b).norm() <= 1e-12 * scale, "{a} vs {b}");
    }
}

#[test]
fn cylindrical_states_are_normalized_and_cutoff_free() {
    let small = BasisSpec::uniform(6);
    let large = BasisSpec::uniform(9);
    for q in QuantumNumbers::grid(6, 4) {
        let a = cylindrical_state(&q, &small).unwrap();
        let b = cylindrical_state(&q, &large).unwrap();
        let n: f64 = a.iter().map(|c| c.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-13, "{q}");
        let d = embed(&a, &small, &large).iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d < 1e-13, "{q}");
    }
}

fn interior_levels(p: &PhaseSpaceParams, basis: &BasisSpec, max_planar: u32, max_nz: u32) -> Vec<f64> {
    let pieces = build_pieces(p, basis).unwrap();
    let s = spectrum(&pieces.combine(0.0, 0.0)).unwrap();
    let mut out: Vec<f64> = s
        .eigenvalues
        .iter()
        .zip(&s.eigenvectors)
        .filter(|(_, v)| {
            v.iter().enumerate().all(|(k, c)| {
                let [a, b, d] = basis.occupations(k);
                c.norm() < 1e-9 || (a + b <= max_planar as usize && d <= max_nz as usize)
            })
        })
        .map(|(e, _)| *e)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn commutative_levels_survive_a_larger_cutoff() {
    let p = PhaseSpaceParams::natural(0.6).unwrap();
    let a = interior_levels(&p, &BasisSpec::uniform(6), 4, 4);
    let b = interior_levels(&p, &BasisSpec::uniform(8), 4, 4);
    assert!(!a.is_empty());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-10 * y.abs(), "{x} {y}");
    }
}

fn frobenius(m: &ncosc_core::matrix::CMatrix) -> f64 {
    m.data().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn deformed_levels_move_at_most_linearly() {
    let p = PhaseSpaceParams::natural(0.7).unwrap();
    let basis = BasisSpec::uniform(6);
    let pieces = build_pieces(&p, &basis).unwrap();
    let base = spectrum(&pieces.combine(0.0, 0.0)).unwrap();
    // Weyl: no level moves by more than the norm of the perturbation
    let c = (frobenius(&pieces.h_eta.matrix) + frobenius(&pieces.h_theta.matrix)) / p.hbar;
    for delta in [1e-3, 1e-4, 1e-5] {
        let s = spectrum(&pieces.combine(delta, delta)).unwrap();
        let shift = base.eigenvalues.iter().zip(&s.eigenvalues).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(shift <= 1.01 * c * delta, "{delta} {shift} {c}");
        assert!(shift > 0.0);
    }
}
