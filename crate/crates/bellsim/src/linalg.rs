//! Complex linear algebra sized for two spins.
//!
//! Everything in this crate lives in dimension 2 (one spin) or 4 (two spins),
//! so the matrix type is a fixed small dense matrix and the Hermitian
//! eigensolver is a cyclic Jacobi iteration on the 2d×2d real embedding. No
//! general-N machinery, no external solver.

use thiserror::Error;

pub use num_complex::Complex64;

/// Hermiticity gate for [`hermitian_eigen`]: max |H − H†| entry.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate group.
pub const EIGEN_GROUP_TOL: f64 = 1e-8;
/// State vectors must be unit within this.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: max |H - H†| entry = {violation:.3e}")]
    NotHermitian { violation: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("vector is not normalized: |norm - 1| = {defect:.3e}")]
    NotNormalized { defect: f64 },
}

/// Dense square complex matrix of dimension 2 or 4, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

fn check_dim(dim: usize) {
    assert!(dim == 2 || dim == 4, "supported dimensions are 2 and 4, got {dim}");
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim);
        ComplexMatrix { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from row-major entries; length must be dim².
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Self {
        check_dim(dim);
        assert_eq!(entries.len(), dim * dim, "need {} entries", dim * dim);
        ComplexMatrix { dim, entries }
    }

    /// Convenience for real-entry tables in tests and fixed operators.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        check_dim(dim);
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim);
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        ComplexMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// max |H_ij − conj(H_ji)| over all entries: 0 for exactly Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Kronecker product of two 2×2 blocks: entry ((i·2+k),(j·2+l)) = a(i,j)·b(k,l).
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.dim(), 2, "tensor factors are 2x2 here");
    assert_eq!(b.dim(), 2, "tensor factors are 2x2 here");
    let n = b.dim();
    let mut out = ComplexMatrix::zeros(a.dim() * n);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let aij = a.get(i, j);
            for k in 0..n {
                for l in 0..n {
                    out.set(i * n + k, j * n + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// ‖A − B‖_Frobenius; the dimensions must agree.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(a.sub(b).frobenius_norm())
}

/// Unit-norm complex state of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes whose norm is 1 within [`NORM_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self, LinalgError> {
        check_dim(amps.len());
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let defect = (norm - 1.0).abs();
        if defect > NORM_TOL {
            return Err(LinalgError::NotNormalized { defect });
        }
        Ok(StateVector { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// ⟨self|other⟩ (conjugate-linear in self).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Fixes the global phase: the first amplitude with modulus above 1e-9
    /// becomes real and positive.
    pub fn canonicalized(mut self) -> Self {
        if let Some(lead) = self.amps.iter().find(|a| a.norm() > 1e-9) {
            let phase = lead.conj() / lead.norm();
            for a in &mut self.amps {
                *a *= phase;
            }
        }
        self
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending, eigenvectors
/// orthonormal and phase-canonicalized.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
}

impl EigenSystem {
    /// Σ λᵢ |vᵢ⟩⟨vᵢ| — reconstructs the matrix the system came from.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.eigenvectors[0].dim();
        let mut out = ComplexMatrix::zeros(d);
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let a = v.amplitudes();
            for i in 0..d {
                for j in 0..d {
                    let w = out.get(i, j) + lam * a[i] * a[j].conj();
                    out.set(i, j, w);
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi on a real symmetric matrix (row-major, n ≤ 8 here).
/// Returns eigenvalues (unsorted) and the orthogonal matrix of column
/// eigenvectors accumulated from the rotations.
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = 1.0 + a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eig = (0..n).map(|i| a[i * n + i]).collect();
    (eig, v)
}

/// [`hermitian_eigen_with_tol`] at the default gate [`HERMITICITY_TOL`].
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<EigenSystem, LinalgError> {
    hermitian_eigen_with_tol(h, HERMITICITY_TOL)
}

/// Full eigensystem of a Hermitian 2×2 or 4×4 matrix.
///
/// H = A + iB embeds as the real symmetric [[A, −B], [B, A]] whose spectrum
/// is H's with every eigenvalue doubled; one complex eigenvector is extracted
/// per realified pair. Degenerate eigenvalues (gap < [`EIGEN_GROUP_TOL`]) are
/// handled as one group so the extraction stays orthonormal inside the
/// degenerate subspace.
pub fn hermitian_eigen_with_tol(
    h: &ComplexMatrix,
    hermiticity_tol: f64,
) -> Result<EigenSystem, LinalgError> {
    let violation = h.hermiticity_defect();
    if violation > hermiticity_tol {
        return Err(LinalgError::NotHermitian { violation });
    }
    let d = h.dim();
    // Symmetrize before embedding so the Jacobi input is exactly symmetric.
    let mut hs = h.add(&h.adjoint());
    hs = hs.scale_re(0.5);

    let n = 2 * d;
    let mut m = vec![0.0f64; n * n];
    for i in 0..d {
        for j in 0..d {
            let e = hs.get(i, j);
            m[i * n + j] = e.re;
            m[(i + d) * n + (j + d)] = e.re;
            m[i * n + (j + d)] = -e.im;
            m[(i + d) * n + j] = e.im;
        }
    }
    let (eig, vecs) = jacobi_symmetric(m, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig[i].total_cmp(&eig[j]));

    let mut eigenvalues = Vec::with_capacity(d);
    let mut eigenvectors: Vec<Vec<Complex64>> = Vec::with_capacity(d);

    let mut start = 0;
    while start < n {
        // One degenerate group: eigenvalues within EIGEN_GROUP_TOL of a chain.
        let mut end = start + 1;
        while end < n && (eig[order[end]] - eig[order[end - 1]]).abs() < EIGEN_GROUP_TOL {
            end += 1;
        }
        let group = &order[start..end];
        assert!(group.len().is_multiple_of(2), "realified eigenvalues must pair up");
        let want = group.len() / 2;
        let mut accepted: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(want);
        for &col in group {
            if accepted.len() == want {
                break;
            }
            // Candidate complex vector from the realified pair (x, y) → x + iy.
            let mut cand: Vec<Complex64> =
                (0..d).map(|k| Complex64::new(vecs[k * n + col], vecs[(k + d) * n + col])).collect();
            for (_, u) in &accepted {
                let proj: Complex64 =
                    u.iter().zip(&cand).map(|(ui, ci)| ui.conj() * ci).sum();
                for (ci, ui) in cand.iter_mut().zip(u) {
                    *ci -= proj * ui;
                }
            }
            let norm = cand.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            // A realified duplicate of an accepted vector leaves ~1e-14 here;
            // a genuinely new direction leaves at least ~1/sqrt(dim).
            if norm > 0.3 {
                for c in &mut cand {
                    *c /= norm;
                }
                accepted.push((eig[col], cand));
            }
        }
        assert_eq!(accepted.len(), want, "eigenvector extraction lost a direction");
        for (lam, vec) in accepted {
            eigenvalues.push(lam);
            eigenvectors.push(vec);
        }
        start = end;
    }

    // Inside a degenerate group the Jacobi values can be out of order by ~1e-15.
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| eigenvalues[i]).collect();
    let eigenvectors: Vec<StateVector> = idx
        .iter()
        .map(|&i| {
            StateVector::new(eigenvectors[i].clone())
                .expect("Jacobi eigenvectors are unit")
                .canonicalized()
        })
        .collect();

    Ok(EigenSystem { eigenvalues, eigenvectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TrialRng;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
        let mut rng = TrialRng::new(seed, 0);
        let mut g = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                g.set(i, j, c(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0));
            }
        }
        g.add(&g.adjoint()).scale_re(0.5)
    }

    #[test]
    fn tensor_of_pauli_x_flips_singlet_amplitudes() {
        let xx = tensor(&pauli_x(), &pauli_x());
        let s = 0.5f64.sqrt();
        let amps = vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)];
        let out = xx.apply(&amps);
        let expected = [c(0.0, 0.0), c(-s, 0.0), c(s, 0.0), c(0.0, 0.0)];
        for (o, e) in out.iter().zip(expected) {
            assert!((o - e).norm() < 1e-15, "{out:?}");
        }
    }

    #[test]
    fn frobenius_distance_between_opposite_pauli_z() {
        let d = frobenius_distance(&pauli_z(), &pauli_z().scale_re(-1.0)).unwrap();
        assert!((d - 2.0 * 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn frobenius_distance_identity_to_zero() {
        let d = frobenius_distance(&ComplexMatrix::identity(2), &ComplexMatrix::zeros(2)).unwrap();
        assert!((d - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn frobenius_distance_rejects_mixed_dims() {
        let e = frobenius_distance(&ComplexMatrix::identity(2), &ComplexMatrix::identity(4));
        match e {
            Err(LinalgError::DimensionMismatch { left: 2, right: 4 }) => {}
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian_with_violation_magnitude() {
        let m = ComplexMatrix::from_entries(2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        match hermitian_eigen(&m) {
            Err(LinalgError::NotHermitian { violation }) => {
                assert!((violation - 2.0).abs() < 1e-15)
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn eigen_of_pauli_z_is_diagonal_basis() {
        let sys = hermitian_eigen(&pauli_z()).unwrap();
        assert!((sys.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((sys.eigenvalues[1] - 1.0).abs() < 1e-14);
        let v0 = sys.eigenvectors[0].amplitudes();
        let v1 = sys.eigenvectors[1].amplitudes();
        assert!((v0[1].re - 1.0).abs() < 1e-12 && v0[0].norm() < 1e-12);
        assert!((v1[0].re - 1.0).abs() < 1e-12 && v1[1].norm() < 1e-12);
    }

    #[test]
    fn eigen_of_pauli_x_has_hadamard_basis() {
        let sys = hermitian_eigen(&pauli_x()).unwrap();
        let s = 0.5f64.sqrt();
        let v0 = sys.eigenvectors[0].amplitudes();
        let v1 = sys.eigenvectors[1].amplitudes();
        // canonical phase: leading amplitude real positive
        assert!((v0[0].re - s).abs() < 1e-12 && (v0[1].re + s).abs() < 1e-12);
        assert!((v1[0].re - s).abs() < 1e-12 && (v1[1].re - s).abs() < 1e-12);
    }

    #[test]
    fn eigen_handles_full_degeneracy() {
        let sys = hermitian_eigen(&ComplexMatrix::identity(4)).unwrap();
        for lam in &sys.eigenvalues {
            assert!((lam - 1.0).abs() < 1e-13);
        }
        for i in 0..4 {
            for j in 0..4 {
                let ip = sys.eigenvectors[i].inner(&sys.eigenvectors[j]).norm();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_residual_and_orthonormality_on_seeded_matrices() {
        for seed in 0..50u64 {
            for dim in [2usize, 4] {
                let h = random_hermitian(dim, seed);
                let sys = hermitian_eigen(&h).unwrap();
                for (lam, v) in sys.eigenvalues.iter().zip(&sys.eigenvectors) {
                    let hv = h.apply(v.amplitudes());
                    let worst = hv
                        .iter()
                        .zip(v.amplitudes())
                        .map(|(a, b)| (a - lam * b).norm())
                        .fold(0.0f64, f64::max);
                    assert!(worst < 1e-10, "residual {worst} at dim {dim} seed {seed}");
                }
                for i in 0..dim {
                    for j in 0..dim {
                        let ip = sys.eigenvectors[i].inner(&sys.eigenvectors[j]).norm();
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((ip - want).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn eigen_tolerance_parameter_loosens_the_gate() {
        // Off-Hermitian by 1e-8: rejected at the default gate, accepted at 1e-6
        // (the input is symmetrized before solving).
        let mut m = pauli_x();
        m.set(0, 1, c(1.0 + 1e-8, 0.0));
        assert!(matches!(hermitian_eigen(&m), Err(LinalgError::NotHermitian { .. })));
        let sys = hermitian_eigen_with_tol(&m, 1e-6).unwrap();
        assert!((sys.eigenvalues[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn state_vector_rejects_unnormalized() {
        let e = StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(e, Err(LinalgError::NotNormalized { .. })));
    }

    #[test]
    fn canonical_phase_makes_leading_amplitude_real_positive() {
        // Leading amplitude -0.6i turns real positive under the phase i,
        // which carries 0.8 along to +0.8i.
        let v = StateVector::new(vec![c(0.0, -0.6), c(0.8, 0.0)]).unwrap().canonicalized();
        let a = v.amplitudes();
        assert!((a[0].re - 0.6).abs() < 1e-15 && a[0].im.abs() < 1e-15);
        assert!(a[1].re.abs() < 1e-15 && (a[1].im - 0.8).abs() < 1e-15);
    }

    fn random_2x2(rng: &mut TrialRng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, c(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0));
            }
        }
        m
    }

    proptest! {
        #[test]
        fn eigen_reconstructs_seeded_hermitian(seed in any::<u64>()) {
            let h = random_hermitian(4, seed);
            let sys = hermitian_eigen(&h).unwrap();
            let back = sys.reconstruct();
            prop_assert!(frobenius_distance(&h, &back).unwrap() < 1e-9);
        }

        #[test]
        fn tensor_respects_mixed_products(seed in any::<u64>()) {
            let mut rng = TrialRng::new(seed, 1);
            let a = random_2x2(&mut rng);
            let b = random_2x2(&mut rng);
            let cm = random_2x2(&mut rng);
            let d = random_2x2(&mut rng);
            let lhs = tensor(&a, &b).mul(&tensor(&cm, &d));
            let rhs = tensor(&a.mul(&cm), &b.mul(&d));
            prop_assert!(frobenius_distance(&lhs, &rhs).unwrap() < 1e-12);
        }
    }
}
