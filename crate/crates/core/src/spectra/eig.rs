//! Dense Hermitian eigensolver.
//!
//! Householder reduction to a complex Hermitian tridiagonal matrix, a diagonal
//! unitary that makes the off-diagonal real, implicit-shift QL on the real
//! tridiagonal, then back-transformation of the eigenvectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, CVector};

pub const DEFAULT_TOL: f64 = 1e-11;
const MAX_SWEEPS: usize = 50;

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal, `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<CVector>,
    /// `max_k ‖A v_k − λ_k v_k‖`.
    pub residual: f64,
}

impl SpectrumResult {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Full eigendecomposition of a Hermitian matrix. Fails if QL does not
/// converge within 50 iterations for some eigenvalue, or if the final
/// residual exceeds `tol · max|A|`.
pub fn eig_herm(a: &CMatrix, tol: f64) -> Result<SpectrumResult> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), got: a.cols() });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SpectrumResult { eigenvalues: vec![], eigenvectors: vec![], residual: 0.0 });
    }
    let scale = a.max_abs();
    let defect = a.hermitian_defect();
    if defect > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(defect));
    }

    let mut w = a.data().to_vec();
    let reflectors = tridiagonalize(&mut w, n);

    let diag: Vec<f64> = (0..n).map(|i| w[i * n + i].re).collect();
    let sub: Vec<Complex64> = (0..n.saturating_sub(1)).map(|i| w[(i + 1) * n + i]).collect();

    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    let mut off = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let m = sub[i].norm();
        off[i] = m;
        phases[i + 1] = if m > 0.0 { phases[i] * sub[i] / m } else { phases[i] };
    }

    let mut d = diag;
    // zt[i] is the i-th eigenvector of the real tridiagonal matrix
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut off, &mut zt, n)?;

    // V = Q Φ Z, stored row-major with eigenvectors in columns
    let mut v = vec![zero(); n * n];
    for r in 0..n {
        for c in 0..n {
            v[r * n + c] = phases[r] * zt[c * n + r];
        }
    }
    apply_reflectors(&reflectors, &mut v, n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let eigenvectors: Vec<CVector> =
        order.iter().map(|&k| (0..n).map(|r| v[r * n + k]).collect()).collect();

    let residual = residual(a, &eigenvalues, &eigenvectors);
    let bound = tol * scale.max(f64::MIN_POSITIVE);
    if residual > bound {
        return Err(Error::Inaccurate { residual, bound });
    }
    Ok(SpectrumResult { eigenvalues, eigenvectors, residual })
}

/// Eigenvalues only are not cheaper with this algorithm; kept for call-site clarity.
pub fn eigenvalues_herm(a: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    Ok(eig_herm(a, tol)?.eigenvalues)
}

struct Reflector {
    /// first row the reflector acts on
    start: usize,
    /// unit vector, length n − start
    v: CVector,
}

/// In-place reduction of the full Hermitian matrix `w` (row-major) to
/// tridiagonal form. Returns the reflectors `H_k = I − 2 v v†`.
fn tridiagonalize(w: &mut [Complex64], n: usize) -> Vec<Reflector> {
    let mut out = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let m = n - start;
        let x: CVector = (start..n).map(|i| w[i * n + k]).collect();
        let xnorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|c| c.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in v.iter_mut() {
            *c /= vnorm;
        }

        // p = B v on the trailing block
        let mut p = vec![zero(); m];
        for (ii, pi) in p.iter_mut().enumerate() {
            let row = &w[(start + ii) * n + start..(start + ii + 1) * n];
            let mut acc = zero();
            for (b, vj) in row.iter().zip(&v) {
                acc += b * vj;
            }
            *pi = acc;
        }
        let beta: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let q: CVector = p.iter().zip(&v).map(|(pi, vi)| pi - vi * beta.re).collect();
        for ii in 0..m {
            let vi2 = v[ii] * 2.0;
            let qi2 = q[ii] * 2.0;
            let row = &mut w[(start + ii) * n + start..(start + ii + 1) * n];
            for ((b, qj), vj) in row.iter_mut().zip(&q).zip(&v) {
                *b -= vi2 * qj.conj() + qi2 * vj.conj();
            }
        }
        w[start * n + k] = alpha;
        w[k * n + start] = alpha.conj();
        for i in start + 1..n {
            w[i * n + k] = zero();
            w[k * n + i] = zero();
        }
        out.push(Reflector { start, v });
    }
    out
}

/// `V ← H_0 H_1 ⋯ H_L V`.
fn apply_reflectors(refl: &[Reflector], v: &mut [Complex64], n: usize) {
    let mut s = vec![zero(); n];
    for r in refl.iter().rev() {
        s.iter_mut().for_each(|c| *c = zero());
        for (ii, vi) in r.v.iter().enumerate() {
            let vc = vi.conj();
            let row = &v[(r.start + ii) * n..(r.start + ii + 1) * n];
            for (sj, wj) in s.iter_mut().zip(row) {
                *sj += vc * wj;
            }
        }
        for (ii, vi) in r.v.iter().enumerate() {
            let f = vi * 2.0;
            let row = &mut v[(r.start + ii) * n..(r.start + ii + 1) * n];
            for (wj, sj) in row.iter_mut().zip(&s) {
                *wj -= f * sj;
            }
        }
    }
}

/// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
/// matrix (`d` diagonal, `e[i]` couples i and i+1). `zt` rows are rotated
/// alongside; on exit `zt[k]` is the eigenvector of `d[k]`.
fn tql2(d: &mut [f64], e: &mut [f64], zt: &mut [f64], n: usize) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS {
                    return Err(Error::NoConvergence { index: l });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = zt.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let hh = *b;
                        *b = s * *a + c * hh;
                        *a = c * *a - s * hh;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn residual(a: &CMatrix, vals: &[f64], vecs: &[CVector]) -> f64 {
    let mut worst = 0.0f64;
    for (lam, v) in vals.iter().zip(vecs) {
        let av = a.matvec(v);
        let r = av
            .iter()
            .zip(v)
            .map(|(x, y)| (x - y * *lam).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::dotc;

    #[test]
    fn diagonal() {
        let r = eig_herm(&CMatrix::diag(&[3.0, 1.0, 2.0]), DEFAULT_TOL).unwrap();
        assert_eq!(r.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x() {
        let a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let r = eig_herm(&a, DEFAULT_TOL).unwrap();
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((r.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_complex() {
        let a = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(0.0, -1.0),
            (1, 0) => Complex64::new(0.0, 1.0),
            _ => zero(),
        });
        let r = eig_herm(&a, DEFAULT_TOL).unwrap();
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-15);
        let v = &r.eigenvectors[0];
        assert!((dotc(v, v).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_trivial_sizes() {
        let r = eig_herm(&CMatrix::identity(5), DEFAULT_TOL).unwrap();
        assert!(r.eigenvalues.iter().all(|&x| x == 1.0));
        let r = eig_herm(&CMatrix::zeros(3, 3), DEFAULT_TOL).unwrap();
        assert!(r.eigenvalues.iter().all(|&x| x == 0.0));
        let r = eig_herm(&CMatrix::diag(&[4.0]), DEFAULT_TOL).unwrap();
        assert_eq!(r.eigenvalues, vec![4.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(eig_herm(&a, DEFAULT_TOL), Err(Error::NotHermitian(_))));
    }
}
