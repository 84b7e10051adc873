//! The charged oscillator Hamiltonian and its expansion in θ and η after the
//! Bopp shift.

use std::collections::BTreeMap;

use super::coeff::{Coeff, Param};
use super::expr::{ops::*, OperatorExpr};
use super::tensor::{substitute, AntisymTensor, Space};

/// Bucket keys `(θ-power, η-power)` of the expansion, in reporting order.
pub const BUCKETS: [(i32, i32); 6] = [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)];

pub fn bucket_label(key: (i32, i32)) -> &'static str {
    match key {
        (0, 0) => "H0",
        (0, 1) => "H_eta",
        (1, 0) => "H_theta",
        (1, 1) => "H_eta_theta",
        (0, 2) => "H_eta2",
        (2, 0) => "H_theta2",
        _ => "H_other",
    }
}

fn half() -> Coeff {
    Coeff::rational(1, 2)
}

/// Commutative Hamiltonian in the symmetric gauge:
/// `p²/2m − (ω_c/2) L_z + (m ω̃²/2)(x²+y²) + (m ω²/2) z²`.
pub fn commutative_hamiltonian() -> OperatorExpr {
    let inv_2m = &half() * &Coeff::param_pow(Param::Mass, -1);
    let kinetic = &(&(&px() * &px()) + &(&py() * &py())) + &(&pz() * &pz());
    let mag = &half() * &Coeff::param(Param::OmegaC);
    let m_wt2 = &(&half() * &Coeff::param(Param::Mass)) * &Coeff::param_pow(Param::OmegaT, 2);
    let m_w2 = &(&half() * &Coeff::param(Param::Mass)) * &Coeff::param_pow(Param::Omega, 2);
    let planar = &(&x() * &x()) + &(&y() * &y());
    let out = &(&kinetic.scale(&inv_2m) - &lz().scale(&mag)) + &planar.scale(&m_wt2);
    (&out + &(&z() * &z()).scale(&m_w2)).normalize()
}

/// `H₀(x̂, p̂)`: the Hamiltonian with every operator Bopp-shifted, normalized.
pub fn nc_hamiltonian(space: Space) -> OperatorExpr {
    substitute(&commutative_hamiltonian(), &AntisymTensor::for_space(space)).normalize()
}

/// Expansion `H₀(x̂,p̂) = Σ θ^a η^b / ħ^(a+b) · H_(a,b)`.
///
/// Each returned bucket is the coefficient-stripped piece `H_(a,b)`; bucket
/// `(0,0)` is `α² H₀(x,p)`.
pub fn expand_nc_hamiltonian(space: Space) -> BTreeMap<(i32, i32), OperatorExpr> {
    nc_hamiltonian(space)
        .collect_theta_eta()
        .into_iter()
        .map(|((a, b), e)| ((a, b), e.scale(&Coeff::param_pow(Param::Hbar, a + b))))
        .collect()
}

/// Recombine buckets into a single expression with their θ, η prefactors.
pub fn recombine(buckets: &BTreeMap<(i32, i32), OperatorExpr>) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (&(a, b), e) in buckets {
        let pre = &(&Coeff::param_pow(Param::Theta, a) * &Coeff::param_pow(Param::Eta, b))
            * &Coeff::param_pow(Param::Hbar, -(a + b));
        out = &out + &e.scale(&pre);
    }
    out
}

/// Text dump of the six buckets, one `(a,b) label: expression` line each.
pub fn dump_buckets(space: Space) -> String {
    let buckets = expand_nc_hamiltonian(space);
    let mut out = String::new();
    for key in BUCKETS {
        let e = buckets.get(&key).cloned().unwrap_or_else(OperatorExpr::zero);
        out.push_str(&format!("({},{}) {}: {}\n", key.0, key.1, bucket_label(key), super::text::to_text(&e)));
    }
    out
}

/// Noncommutative building blocks, engine-derived and normalized.
pub fn nc_angular_momentum_z(space: Space) -> OperatorExpr {
    substitute(&lz(), &AntisymTensor::for_space(space)).normalize()
}

pub fn nc_momentum_squared(space: Space) -> OperatorExpr {
    let p2 = &(&(&px() * &px()) + &(&py() * &py())) + &(&pz() * &pz());
    substitute(&p2, &AntisymTensor::for_space(space)).normalize()
}

pub fn nc_planar_radius_squared(space: Space) -> OperatorExpr {
    let r2 = &(&x() * &x()) + &(&y() * &y());
    substitute(&r2, &AntisymTensor::for_space(space)).normalize()
}

pub fn nc_z_squared(space: Space) -> OperatorExpr {
    substitute(&(&z() * &z()), &AntisymTensor::for_space(space)).normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::text::parse;

    fn p(s: &str) -> OperatorExpr {
        parse(s).unwrap().normalize()
    }

    #[test]
    fn six_buckets_and_nothing_else() {
        for space in [Space::Plane, Space::Space] {
            let b = expand_nc_hamiltonian(space);
            for k in b.keys() {
                assert!(BUCKETS.contains(k), "unexpected bucket {k:?}");
            }
        }
        assert_eq!(expand_nc_hamiltonian(Space::Space).len(), 6);
    }

    #[test]
    fn zero_order_bucket() {
        let b = expand_nc_hamiltonian(Space::Space);
        let want = commutative_hamiltonian().scale(&Coeff::param_pow(Param::Alpha, 2));
        assert_eq!(b[&(0, 0)], want);
    }

    #[test]
    fn eta_bucket() {
        let b = expand_nc_hamiltonian(Space::Space);
        let want = p("-1/(2*m)*(Lx + Ly + Lz) - omega_c/4*(-x^2 - y^2 + x*z + y*z)");
        assert_eq!(b[&(0, 1)], want);
    }

    #[test]
    fn theta_bucket() {
        let b = expand_nc_hamiltonian(Space::Space);
        let want = p(
            "-omega_c/4*(-px^2 - py^2 + px*pz + py*pz) \
             + m*omega_t^2/2*(-Lz + (x - y)*pz) + m*omega^2/2*z*(py - px)",
        );
        assert_eq!(b[&(1, 0)], want);
    }

    #[test]
    fn eta_theta_bucket_has_negative_sign() {
        let b = expand_nc_hamiltonian(Space::Space);
        let want = p("-omega_c/(8*alpha^2)*(Lx + Ly + Lz)");
        assert_eq!(b[&(1, 1)], want);
    }

    #[test]
    fn quadratic_buckets() {
        let b = expand_nc_hamiltonian(Space::Space);
        assert_eq!(b[&(0, 2)], p("1/(4*m*alpha^2)*(x^2 - x*y + y^2 - x*z - y*z + z^2)"));
        assert_eq!(
            b[&(2, 0)],
            p("1/(4*alpha^2)*(m*omega_t^2/2*(px^2 + py^2 + 2*pz^2 - 2*px*pz - 2*py*pz) + m*omega^2/2*(px - py)^2)")
        );
    }

    #[test]
    fn buckets_are_hermitian() {
        for space in [Space::Plane, Space::Space] {
            for (k, e) in expand_nc_hamiltonian(space) {
                assert!(e.is_hermitian(), "bucket {k:?} in {space:?}");
            }
        }
    }

    #[test]
    fn recombination_is_exact() {
        for space in [Space::Plane, Space::Space] {
            let b = expand_nc_hamiltonian(space);
            assert_eq!(recombine(&b).normalize(), nc_hamiltonian(space));
        }
    }

    #[test]
    fn plane_has_no_z_couplings() {
        let b = expand_nc_hamiltonian(Space::Plane);
        assert_eq!(b[&(0, 1)], p("-1/(2*m)*Lz + omega_c/4*(x^2 + y^2)"));
    }
}
