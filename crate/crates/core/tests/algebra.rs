use ncosc_core::fock::{assemble, BasisSpec};
use ncosc_core::matrix::CMatrix;
use ncosc_core::opalg::expr::ops::*;
use ncosc_core::opalg::hamiltonian::{commutative_hamiltonian, nc_hamiltonian, recombine};
use ncosc_core::opalg::{
    bopp_shift, commutator, dump_buckets, expand_nc_hamiltonian, parse, to_text, AntisymTensor, Axis,
    CanonicalSymbol, Coeff, OperatorExpr, Param, Space,
};
use ncosc_core::spectra::PhaseSpaceParams;
use proptest::prelude::*;

const BUCKETS_3D: &str = include_str!("../golden/v1/buckets_3d.txt");
const BUCKETS_2D: &str = include_str!("../golden/v1/buckets_2d.txt");
/// Word, numerator, denominator, imaginary unit, parameter index, parameter power.
/// Word, numerator, denominator, imaginary, theta power, eta power.
type RawTerm = (Vec<usize>, i64, i64, bool, usize, i32);

fn term() -> impl Strategy<Value = RawTerm> {
    (prop::collection::vec(0usize..6, 0..=6), -6i64..=6, 1i64..=4, any::<bool>(), 0usize..8, -1i32..=2)
}

fn build(terms: &[RawTerm]) -> OperatorExpr {
    let mut e = OperatorExpr::zero();
    for (w, n, d, imag, p, k) in terms {
        let mut c = &Coeff::rational(*n, *d) * &Coeff::param_pow(Param::ALL[*p], *k);
        if *imag {
            c = &c * &Coeff::i();
        }
        let word = w.iter().map(|&i| CanonicalSymbol::ALL[i]).collect();
        e = &e + &OperatorExpr::from_terms([(word, c)]);
    }
    e
}

fn expr(max_terms: usize) -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec(term(), 1..=max_terms).prop_map(|t| build(&t))
}

fn small_expr() -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec(
        (prop::collection::vec(0usize..6, 1..=3), -3i64..=3, 1i64..=2, any::<bool>(), 0usize..8, 0i32..=1),
        1..=3,
    )
    .prop_map(|t| build(&t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normalize_is_idempotent(e in expr(4)) {
        let n = e.normalize();
        prop_assert!(n.is_normal());
        prop_assert_eq!(n.normalize(), n);
    }

    #[test]
    fn normal_form_is_independent_of_rewrite_order(a in expr(3), b in expr(3)) {
        let direct = (&a * &b).normalize();
        let staged = (&a.normalize() * &b.normalize()).normalize();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn text_round_trip(e in expr(4)) {
        let n = e.normalize();
        prop_assert_eq!(parse(&to_text(&n)).unwrap().normalize(), n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jacobi_identity(a in small_expr(), b in small_expr(), c in small_expr()) {
        let j = &(&commutator(&a, &commutator(&b, &c)) + &commutator(&b, &commutator(&c, &a)))
            + &commutator(&c, &commutator(&a, &b));
        prop_assert!(j.normalize().is_zero());
    }

    #[test]
    fn jacobi_on_symbols(i in 0usize..6, j in 0usize..6, k in 0usize..6) {
        let [a, b, c] = [i, j, k].map(|n| OperatorExpr::symbol(CanonicalSymbol::ALL[n]));
        let s = &(&commutator(&a, &commutator(&b, &c)) + &commutator(&b, &commutator(&c, &a)))
            + &commutator(&c, &commutator(&a, &b));
        prop_assert!(s.normalize().is_zero());
    }

    #[test]
    fn adjoint_of_product_reverses(a in small_expr(), b in small_expr()) {
        let lhs = (&a * &b).adjoint().normalize();
        let rhs = (&b.adjoint() * &a.adjoint()).normalize();
        prop_assert_eq!(lhs, rhs);
    }
}

fn axis(i: usize) -> Axis {
    Axis::from_index(i).unwrap()
}

#[test]
fn shifted_positions_and_momenta_close_on_the_tensor() {
    for t in [AntisymTensor::plane(), AntisymTensor::space()] {
        for i in 0..3 {
            for j in 0..3 {
                let l = t.entry(axis(i), axis(j));
                let xx = commutator(
                    &bopp_shift(CanonicalSymbol::pos(axis(i)), &t),
                    &bopp_shift(CanonicalSymbol::pos(axis(j)), &t),
                );
                let pp = commutator(
                    &bopp_shift(CanonicalSymbol::mom(axis(i)), &t),
                    &bopp_shift(CanonicalSymbol::mom(axis(j)), &t),
                );
                let theta = c(&(&Coeff::i() * &Coeff::param(Param::Theta)) * &Coeff::int(l));
                let eta = c(&(&Coeff::i() * &Coeff::param(Param::Eta)) * &Coeff::int(l));
                assert_eq!(xx, theta.normalize(), "{} x{i} x{j}", t.dim());
                assert_eq!(pp, eta.normalize(), "{} p{i} p{j}", t.dim());
            }
        }
    }
}

fn interior_rel(a: &CMatrix, b: &CMatrix, basis: &BasisSpec, margin: usize, floor: f64) -> f64 {
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for r in 0..basis.dim() {
        if !basis.is_interior(r, margin) {
            continue;
        }
        for s in 0..basis.dim() {
            if !basis.is_interior(s, margin) {
                continue;
            }
            diff = diff.max((a[(r, s)] - b[(r, s)]).norm());
            scale = scale.max(b[(r, s)].norm());
        }
    }
    diff / scale.max(floor)
}

#[test]
fn symbolic_xp_commutator_equals_matrix_commutator() {
    let p = PhaseSpaceParams::new(1.1, 0.8, 1.3, 0.7, 0.9, 0.03, 0.05).unwrap();
    let env = p.env();
    let basis = BasisSpec::uniform(5);
    for t in [AntisymTensor::plane(), AntisymTensor::space()] {
        for i in 0..3 {
            for j in 0..3 {
                let xi = bopp_shift(CanonicalSymbol::pos(axis(i)), &t);
                let pj = bopp_shift(CanonicalSymbol::mom(axis(j)), &t);
                let a = assemble(&xi, &basis, &env).unwrap().matrix;
                let b = assemble(&pj, &basis, &env).unwrap().matrix;
                let numeric = &(&a * &b) - &(&b * &a);
                let symbolic = assemble(&commutator(&xi, &pj), &basis, &env).unwrap().matrix;
                let r = interior_rel(&numeric, &symbolic, &basis, 1, p.hbar);
                assert!(r <= 1e-12, "dim {} [x{i}, p{j}] rel {r:e}", t.dim());
            }
        }
    }
}

#[test]
fn buckets_sum_to_substituted_hamiltonian_as_matrices() {
    let p = PhaseSpaceParams::new(1.0, 1.2, 0.9, 1.7, 0.85, 0.04, 0.03).unwrap();
    let env = p.env();
    let basis = BasisSpec::uniform(4);
    for space in [Space::Plane, Space::Space] {
        let direct = assemble(&nc_hamiltonian(space), &basis, &env).unwrap().matrix;
        let summed = assemble(&recombine(&expand_nc_hamiltonian(space)), &basis, &env).unwrap().matrix;
        let d = (&direct - &summed).max_abs() / direct.max_abs();
        assert!(d <= 1e-12, "{space:?} {d:e}");
    }
}

#[test]
fn every_bucket_is_hermitian() {
    for space in [Space::Plane, Space::Space] {
        for (key, e) in expand_nc_hamiltonian(space) {
            assert!(e.is_hermitian(), "{space:?} {key:?}");
            assert_eq!(e.adjoint().normalize(), e);
        }
    }
}

#[test]
fn bucket_dumps_match_golden_files() {
    assert_eq!(dump_buckets(Space::Space), BUCKETS_3D);
    assert_eq!(dump_buckets(Space::Plane), BUCKETS_2D);
}

#[test]
fn zero_order_bucket_at_unit_alpha_is_commutative_hamiltonian() {
    let one = num_rational::BigRational::from_integer(1.into());
    let at_one = expand_nc_hamiltonian(Space::Space)[&(0, 0)].map_coeffs(|c| c.substitute(Param::Alpha, &one));
    assert_eq!(at_one.normalize(), commutative_hamiltonian());
}

#[test]
fn plane_and_space_dumps_differ_only_off_the_plane() {
    let plane: Vec<&str> = BUCKETS_2D.lines().collect();
    let space: Vec<&str> = BUCKETS_3D.lines().collect();
    assert_eq!(plane[0], space[0]);
    for (a, b) in plane.iter().zip(&space).skip(1) {
        assert_ne!(a, b);
        assert!(b.contains("pz") || b.contains("*z"));
    }
}
