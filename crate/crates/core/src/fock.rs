//! Matrix mechanics in a truncated Cartesian Fock basis.
//!
//! Every axis carries its own oscillator basis: x and y use the modified
//! frequency ω̃, z uses ω, so the commutative Hamiltonian is exactly
//! block-diagonal in the number of in-plane quanta. A normal-ordered quadratic
//! operator is represented exactly on states whose per-axis occupation is at
//! most `n_max − 2`.

use std::fmt;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, CVector};
use crate::opalg::{Axis, Kind, OperatorExpr, Param, ParamEnv};

/// Per-axis truncation, inclusive occupation numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    pub n_max: [usize; 3],
}

impl BasisSpec {
    pub fn new(n_max_x: usize, n_max_y: usize, n_max_z: usize) -> Self {
        BasisSpec { n_max: [n_max_x, n_max_y, n_max_z] }
    }

    pub fn uniform(n_max: usize) -> Self {
        BasisSpec::new(n_max, n_max, n_max)
    }

    /// Smallest basis holding every state in `states` with the given interior margin.
    pub fn covering(states: &[QuantumNumbers], margin: usize) -> Self {
        let planar = states.iter().map(|q| q.planar_quanta()).max().unwrap_or(0) as usize + margin;
        let nz = states.iter().map(|q| q.n_z).max().unwrap_or(0) as usize + margin;
        BasisSpec::new(planar, planar, nz)
    }

    pub fn axis_len(&self, axis: Axis) -> usize {
        self.n_max[axis.index()] + 1
    }

    pub fn dim(&self) -> usize {
        self.n_max.iter().map(|n| n + 1).product()
    }

    /// Lexicographic index with x most significant.
    pub fn index(&self, nx: usize, ny: usize, nz: usize) -> usize {
        let [_, my, mz] = self.n_max;
        (nx * (my + 1) + ny) * (mz + 1) + nz
    }

    pub fn occupations(&self, idx: usize) -> [usize; 3] {
        let [_, my, mz] = self.n_max;
        let nz = idx % (mz + 1);
        let rest = idx / (mz + 1);
        [rest / (my + 1), rest % (my + 1), nz]
    }

    /// Whether a basis vector lies at least `margin` below every cutoff.
    pub fn is_interior(&self, idx: usize, margin: usize) -> bool {
        let occ = self.occupations(idx);
        occ.iter().zip(self.n_max.iter()).all(|(o, m)| o + margin <= *m)
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.n_max;
        write!(f, "n_max=({a},{b},{c}) dim={}", self.dim())
    }
}

/// Cylindrical quantum numbers `(n_ρ, μ, n_z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuantumNumbers {
    pub n_rho: u32,
    pub mu: i32,
    pub n_z: u32,
}

impl QuantumNumbers {
    pub fn new(n_rho: u32, mu: i32, n_z: u32) -> Self {
        QuantumNumbers { n_rho, mu, n_z }
    }

    /// `2 n_ρ + |μ|`, the number of in-plane quanta.
    pub fn planar_quanta(&self) -> u32 {
        2 * self.n_rho + self.mu.unsigned_abs()
    }

    /// Occupations of the circular modes `(n_+, n_-)`.
    pub fn circular(&self) -> (u32, u32) {
        let m = self.mu.unsigned_abs();
        if self.mu >= 0 {
            (self.n_rho + m, self.n_rho)
        } else {
            (self.n_rho, self.n_rho + m)
        }
    }

    /// All states with `2n_ρ + |μ| ≤ max_planar` and `n_z ≤ max_nz`, sorted.
    pub fn grid(max_planar: u32, max_nz: u32) -> Vec<QuantumNumbers> {
        let mut out = Vec::new();
        for n_rho in 0..=max_planar / 2 {
            let rem = (max_planar - 2 * n_rho) as i32;
            for mu in -rem..=rem {
                for n_z in 0..=max_nz {
                    out.push(QuantumNumbers::new(n_rho, mu, n_z));
                }
            }
        }
        out.sort();
        out
    }

    /// Checks that the state fits with `margin` spare quanta on every axis.
    pub fn check_fits(&self, basis: &BasisSpec, margin: usize) -> Result<()> {
        let planar = self.planar_quanta() as usize + margin;
        let nz = self.n_z as usize + margin;
        let [mx, my, mz] = basis.n_max;
        if planar > mx.min(my) {
            return Err(Error::Unrepresentable(
                self.to_string(),
                format!("needs n_max >= {planar} on x and y, basis has {basis}"),
            ));
        }
        if nz > mz {
            return Err(Error::Unrepresentable(
                self.to_string(),
                format!("needs n_max >= {nz} on z, basis has {basis}"),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_rho, self.mu, self.n_z)
    }
}

/// Dense operator matrix with a Hermiticity flag measured at construction.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub matrix: CMatrix,
    pub hermitian: bool,
}

const HERMITIAN_RTOL: f64 = 1e-13;

impl OperatorMatrix {
    pub fn new(matrix: CMatrix) -> Self {
        let scale = matrix.max_abs();
        let hermitian = matrix.is_square() && matrix.hermitian_defect() <= HERMITIAN_RTOL * scale;
        OperatorMatrix { matrix, hermitian }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn require_hermitian(self) -> Result<Self> {
        if self.hermitian {
            Ok(self)
        } else {
            Err(Error::NotHermitian(self.matrix.hermitian_defect()))
        }
    }

    /// Row-major dump, one `i j re im` line per non-zero entry.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        for (i, j, v) in self.matrix.nonzeros() {
            writeln!(w, "{i} {j} {:.16e} {:.16e}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// Annihilation operator on `{|0⟩ … |n_max⟩}`: `a|n⟩ = √n |n−1⟩`.
pub fn ladder(n_max: usize) -> CMatrix {
    let n = n_max + 1;
    let mut a = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// Position and momentum of a 1D oscillator basis with frequency `omega`:
/// `X = √(ħ/2mω)(a+a†)`, `P = i√(ħmω/2)(a†−a)`.
pub fn xp_1d(mass: f64, omega: f64, hbar: f64, n_max: usize) -> Result<(CMatrix, CMatrix)> {
    for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    let a = ladder(n_max);
    let ad = a.adjoint();
    let x = (&a + &ad).scale(Complex64::new((hbar / (2.0 * mass * omega)).sqrt(), 0.0));
    let p = (&ad - &a).scale(Complex64::new(0.0, (hbar * mass * omega / 2.0).sqrt()));
    Ok((x, p))
}

fn env_value(env: &ParamEnv, p: Param) -> Result<f64> {
    env.get(p).ok_or(Error::UnboundParameter(p))
}

/// Per-axis `(X, P)` for the basis frequencies: ω̃ on x and y, ω on z.
pub fn axis_operators(basis: &BasisSpec, env: &ParamEnv) -> Result<[(CMatrix, CMatrix); 3]> {
    let hbar = env_value(env, Param::Hbar)?;
    let mass = env_value(env, Param::Mass)?;
    let wt = env_value(env, Param::OmegaT)?;
    let w = env_value(env, Param::Omega)?;
    Ok([
        xp_1d(mass, wt, hbar, basis.n_max[0])?,
        xp_1d(mass, wt, hbar, basis.n_max[1])?,
        xp_1d(mass, w, hbar, basis.n_max[2])?,
    ])
}

type Sparse1 = Vec<(usize, usize, Complex64)>;

fn identity_sparse(n: usize) -> Sparse1 {
    (0..n).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect()
}

/// Operator stored as unsorted `(row, col, value)` triplets; repeated
/// positions add.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> OperatorMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            out[(r, c)] += v;
        }
        OperatorMatrix::new(out)
    }

    pub fn matrix_element(&self, u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
        for len in [u.len(), v.len()] {
            if len != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: len });
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &(r, c, a) in &self.entries {
            let (ur, vc) = (u[r], v[c]);
            if ur.norm_sqr() != 0.0 && vc.norm_sqr() != 0.0 {
                acc += ur.conj() * a * vc;
            }
        }
        Ok(acc)
    }

    pub fn expectation(&self, v: &[Complex64]) -> Result<Complex64> {
        self.matrix_element(v, v)
    }
}

/// Sparse form of [`assemble`].
pub fn assemble_sparse(expr: &OperatorExpr, basis: &BasisSpec, env: &ParamEnv) -> Result<SparseOperator> {
    let axes = axis_operators(basis, env)?;
    let lens = [basis.axis_len(Axis::X), basis.axis_len(Axis::Y), basis.axis_len(Axis::Z)];
    let mut entries = Vec::new();
    for (word, coeff) in expr.terms() {
        let c = coeff.eval(env).map_err(Error::UnboundParameter)?;
        let mut factors: [Sparse1; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for axis in Axis::ALL {
            let k = axis.index();
            let mut prod: Option<CMatrix> = None;
            for s in word.iter().filter(|s| s.axis == axis) {
                let m = match s.kind {
                    Kind::Position => &axes[k].0,
                    Kind::Momentum => &axes[k].1,
                };
                prod = Some(match prod {
                    None => m.clone(),
                    Some(p) => &p * m,
                });
            }
            factors[k] = match prod {
                None => identity_sparse(lens[k]),
                Some(m) => m.nonzeros(),
            };
        }
        let [fx, fy, fz] = &factors;
        for &(ix, jx, vx) in fx {
            for &(iy, jy, vy) in fy {
                let vxy = c * vx * vy;
                for &(iz, jz, vz) in fz {
                    entries.push((basis.index(ix, iy, iz), basis.index(jx, jy, jz), vxy * vz));
                }
            }
        }
    }
    Ok(SparseOperator { dim: basis.dim(), entries })
}

/// Matrix of an operator expression. Each monomial becomes the tensor product
/// of its per-axis factor products, in the order the factors appear.
pub fn assemble(expr: &OperatorExpr, basis: &BasisSpec, env: &ParamEnv) -> Result<OperatorMatrix> {
    Ok(assemble_sparse(expr, basis, env)?.to_dense())
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Simultaneous eigenstate of the planar oscillator, `L_z` and the z
/// oscillator, built from circular ladders `a_± = (a_x ∓ i a_y)/√2`:
/// `|n_+, n_-⟩ ∝ (a_+†)^{n_+} (a_-†)^{n_-} |0⟩` with `μ = n_+ − n_-`.
///
/// The global phase makes the first non-zero coefficient real and positive.
pub fn cylindrical_state(q: &QuantumNumbers, basis: &BasisSpec) -> Result<CVector> {
    q.check_fits(basis, 0)?;
    let (np, nm) = q.circular();
    let n = np + nm;
    // coefficients of u^j v^(n-j) in (u + i v)^np (u − i v)^nm
    let mut poly = vec![Complex64::new(0.0, 0.0); n as usize + 1];
    for a in 0..=np {
        for b in 0..=nm {
            // u^(a+b) v^(n-a-b)
            let ia = Complex64::new(0.0, 1.0).powu(np - a);
            let ib = Complex64::new(0.0, -1.0).powu(nm - b);
            poly[(a + b) as usize] += ia * ib * binomial(np, a) * binomial(nm, b);
        }
    }
    let norm = (2f64.powi(n as i32) * factorial(np) * factorial(nm)).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); basis.dim()];
    for (j, c) in poly.iter().enumerate() {
        let j = j as u32;
        let k = n - j;
        let amp = c * (factorial(j) * factorial(k)).sqrt() / norm;
        v[basis.index(j as usize, k as usize, q.n_z as usize)] = amp;
    }
    if let Some(first) = v.iter().find(|c| c.norm() > 1e-14).copied() {
        let phase = first.conj() / first.norm();
        for c in v.iter_mut() {
            *c *= phase;
            if c.norm() < 1e-15 {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(v)
}

/// `v† A v`, summed only over the support of `v`.
pub fn expectation(a: &OperatorMatrix, v: &[Complex64]) -> Result<Complex64> {
    matrix_element(a, v, v)
}

/// `u† A v`, summed only over the supports of `u` and `v`.
pub fn matrix_element(a: &OperatorMatrix, u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    let dim = a.dim();
    for len in [u.len(), v.len()] {
        if len != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: len });
        }
    }
    let su: Vec<usize> = (0..dim).filter(|&i| u[i].norm_sqr() != 0.0).collect();
    let sv: Vec<usize> = (0..dim).filter(|&i| v[i].norm_sqr() != 0.0).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for &i in &su {
        let ui = u[i].conj();
        for &j in &sv {
            acc += ui * a.matrix[(i, j)] * v[j];
        }
    }
    Ok(acc)
}
