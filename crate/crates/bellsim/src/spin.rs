//! Spin-1/2 building blocks: measurement directions, Pauli operators, the
//! two-particle singlet state, the spin-dot operator, and coherent-state
//! constructions over deterministic sphere grids (resolution of identity,
//! operator averages, rotation-conjugation checks).

use crate::linalg::{frobenius_distance, hermitian_eigen, Complex64, ComplexMatrix, StateVector};
use crate::rng::TrialRng;
use thiserror::Error;

/// Directions must be unit within this.
pub const DIRECTION_TOL: f64 = 1e-12;
/// Minimum grid for the resolution-of-identity defect.
pub const IDENTITY_GRID_MIN: usize = 100;
/// Minimum grid for operator averages and conjugation defects.
pub const OPERATOR_GRID_MIN: usize = 10_000;

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("direction must be a unit vector: |norm - 1| = {defect:.3e}")]
    NotUnit { defect: f64 },
    #[error("grid too coarse: {got} points, need at least {need}")]
    GridTooCoarse { got: usize, need: usize },
    #[error("cannot rescale: the averaged operator is degenerate but the value range is not")]
    DegenerateRange,
    #[error("matrix is not a rotation: {detail}")]
    NotRotation { detail: String },
}

/// Unit vector in R³; the argument of every spin-component operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    /// Accepts a vector whose norm is 1 within [`DIRECTION_TOL`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, SpinError> {
        let norm = (x * x + y * y + z * z).sqrt();
        let defect = (norm - 1.0).abs();
        if defect > DIRECTION_TOL {
            return Err(SpinError::NotUnit { defect });
        }
        Ok(Direction { x, y, z })
    }

    /// Rescales a not-quite-unit vector (float drift from arithmetic); the
    /// input must still be within 1e-6 of unit so genuine mistakes surface.
    fn renormalized(x: f64, y: f64, z: f64) -> Self {
        let norm = (x * x + y * y + z * z).sqrt();
        debug_assert!((norm - 1.0).abs() < 1e-6, "renormalized a non-unit vector");
        Direction { x: x / norm, y: y / norm, z: z / norm }
    }

    /// Polar angle from +z, azimuth from +x.
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Direction::renormalized(st * cp, st * sp, ct)
    }

    /// Direction in the x–z plane at angle `phi` from +z: (sin φ, 0, cos φ).
    /// This is the embedding used for all coplanar measurement settings.
    pub fn from_planar_angle(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Direction::renormalized(s, 0.0, c)
    }

    /// Uniform direction on the sphere from the trial stream.
    pub fn sample_uniform(rng: &mut TrialRng) -> Self {
        let [x, y, z] = rng.unit_vector();
        Direction::renormalized(x, y, z)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Exact negation (IEEE sign flips, no rounding).
    pub fn opposite(&self) -> Direction {
        Direction { x: -self.x, y: -self.y, z: -self.z }
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// Spin component along `n`, normalized to outcomes ±1: n·σ.
pub fn spin_operator(n: &Direction) -> ComplexMatrix {
    ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::new(n.z, 0.0),
            Complex64::new(n.x, -n.y),
            Complex64::new(n.x, n.y),
            Complex64::new(-n.z, 0.0),
        ],
    )
}

/// Two-particle singlet: amplitudes (0, 1/√2, −1/√2, 0) in the product basis
/// |1+⟩|2+⟩, |1+⟩|2−⟩, |1−⟩|2+⟩, |1−⟩|2−⟩.
pub fn singlet_state() -> StateVector {
    let s = 0.5f64.sqrt();
    StateVector::new(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(0.0, 0.0),
    ])
    .expect("singlet amplitudes are unit")
}

/// Dot product of the two spin vectors: σx⊗σx + σy⊗σy + σz⊗σz.
pub fn spin_dot_operator() -> ComplexMatrix {
    use crate::linalg::tensor;
    let xx = tensor(&pauli_x(), &pauli_x());
    let yy = tensor(&pauli_y(), &pauli_y());
    let zz = tensor(&pauli_z(), &pauli_z());
    xx.add(&yy).add(&zz)
}

/// The +1 eigenstate of `spin_operator(n)` in closed form, phase fixed so the
/// first amplitude of modulus > 1e-9 is real positive.
pub fn coherent_state(n: &Direction) -> StateVector {
    let theta = n.z.clamp(-1.0, 1.0).acos();
    let phi = n.y.atan2(n.x);
    let (half_s, half_c) = (theta / 2.0).sin_cos();
    let amps = vec![
        Complex64::new(half_c, 0.0),
        Complex64::from_polar(half_s, phi),
    ];
    StateVector::new(amps).expect("closed form is unit").canonicalized()
}

/// The orbit of a reference spin state under rotations: one unit state per
/// direction, plus the associated rank-one projectors.
#[derive(Debug, Clone)]
pub struct CoherentFamily {
    reference: StateVector,
}

impl CoherentFamily {
    /// Family generated from the +z eigenstate (1, 0).
    pub fn standard() -> Self {
        CoherentFamily { reference: coherent_state(&Direction::new(0.0, 0.0, 1.0).unwrap()) }
    }

    pub fn reference(&self) -> &StateVector {
        &self.reference
    }

    pub fn state(&self, n: &Direction) -> StateVector {
        coherent_state(n)
    }

    /// |n⟩⟨n| — independent of the phase convention.
    pub fn projector(&self, n: &Direction) -> ComplexMatrix {
        let s = self.state(n);
        let a = s.amplitudes();
        let mut m = ComplexMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, a[i] * a[j].conj());
            }
        }
        m
    }
}

/// Deterministic near-uniform sphere grid: z stratified, azimuth stepped by
/// the golden ratio so consecutive points never align.
pub fn fibonacci_sphere(n: usize) -> Vec<Direction> {
    assert!(n > 0, "grid needs at least one point");
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    let tau = 2.0 * std::f64::consts::PI;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = tau * (i as f64) / golden;
            let (sp, cp) = phi.sin_cos();
            Direction::renormalized(r * cp, r * sp, z)
        })
        .collect()
}

/// (2/N)·Σ θ(n)|n⟩⟨n| over the grid — the unrescaled operator average. The
/// prefactor is the Hilbert-space dimension, which makes θ ≡ 1 converge to
/// the identity. Also returns the range of θ over the grid.
fn coherent_average<F: Fn(&Direction) -> f64>(
    theta: &F,
    grid: &[Direction],
) -> (ComplexMatrix, f64, f64) {
    let mut p00 = 0.0f64;
    let mut p11 = 0.0f64;
    let mut p01 = Complex64::new(0.0, 0.0);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for n in grid {
        let v = theta(n);
        lo = lo.min(v);
        hi = hi.max(v);
        let s = coherent_state(n);
        let a = s.amplitudes();
        p00 += v * a[0].norm_sqr();
        p11 += v * a[1].norm_sqr();
        p01 += v * a[0] * a[1].conj();
    }
    let w = 2.0 / grid.len() as f64;
    let m = ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::new(w * p00, 0.0),
            w * p01,
            (w * p01).conj(),
            Complex64::new(w * p11, 0.0),
        ],
    );
    (m, lo, hi)
}

/// ‖(2/N)·Σ |n⟩⟨n| − I₂‖_Frobenius on the Fibonacci grid of `grid_points`.
/// Converges to 0 as the grid refines.
pub fn resolution_of_identity_defect(grid_points: usize) -> Result<f64, SpinError> {
    if grid_points < IDENTITY_GRID_MIN {
        return Err(SpinError::GridTooCoarse { got: grid_points, need: IDENTITY_GRID_MIN });
    }
    let grid = fibonacci_sphere(grid_points);
    let (avg, _, _) = coherent_average(&|_: &Direction| 1.0, &grid);
    Ok(frobenius_distance(&avg, &ComplexMatrix::identity(2)).expect("same dims"))
}

/// Affine map of `raw` placing its two eigenvalues at `lo` and `hi`.
/// Errors with DegenerateRange when `raw` has no eigenvalue gap to stretch.
fn rescale_to_range(raw: &ComplexMatrix, lo: f64, hi: f64) -> Result<ComplexMatrix, SpinError> {
    let sys = hermitian_eigen(raw).expect("grid averages are Hermitian by construction");
    let (l0, l1) = (sys.eigenvalues[0], sys.eigenvalues[1]);
    let scale_floor = 1e-9 * (1.0 + l0.abs() + l1.abs());
    if l1 - l0 <= scale_floor {
        return Err(SpinError::DegenerateRange);
    }
    let s = (hi - lo) / (l1 - l0);
    let o = lo - s * l0;
    Ok(raw.scale_re(s).add(&ComplexMatrix::identity(2).scale_re(o)))
}

/// Operator carried by a real-valued function of direction: the grid average
/// (2/N)·Σ θ(n)|n⟩⟨n|, affinely rescaled so its eigenvalues sit at the range
/// extremes of θ over the grid. For a two-valued θ the eigenvalues then
/// coincide with θ's two values. A constant θ is returned as θ·I unrescaled;
/// a non-constant θ whose average has no eigenvalue gap cannot be rescaled
/// and is reported as DegenerateRange.
pub fn operator_from_coherent<F: Fn(&Direction) -> f64>(
    theta: F,
    grid_points: usize,
) -> Result<ComplexMatrix, SpinError> {
    if grid_points < OPERATOR_GRID_MIN {
        return Err(SpinError::GridTooCoarse { got: grid_points, need: OPERATOR_GRID_MIN });
    }
    let grid = fibonacci_sphere(grid_points);
    let (raw, lo, hi) = coherent_average(&theta, &grid);
    if hi - lo <= 1e-12 * (1.0 + hi.abs()) {
        let c = 0.5 * (lo + hi);
        return Ok(ComplexMatrix::identity(2).scale_re(c));
    }
    rescale_to_range(&raw, lo, hi)
}

/// Proper rotation of R³ (orthogonal, determinant +1), stored row-major and
/// acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Validates orthogonality (‖RᵀR − I‖_max ≤ 1e-10) and det R = +1 within 1e-10.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self, SpinError> {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        if worst > 1e-10 {
            return Err(SpinError::NotRotation {
                detail: format!("max |R^T R - I| entry = {worst:.3e}"),
            });
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (det - 1.0).abs() > 1e-10 {
            return Err(SpinError::NotRotation { detail: format!("det = {det:.12}") });
        }
        Ok(Rotation { m })
    }

    /// Rodrigues formula: R = I + sin(α)·[u]× + (1−cos(α))·[u]×².
    pub fn from_axis_angle(axis: &Direction, angle: f64) -> Self {
        let (ux, uy, uz) = (axis.x(), axis.y(), axis.z());
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rotation {
            m: [
                [c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s],
                [uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s],
                [uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t],
            ],
        }
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    pub fn apply(&self, n: &Direction) -> Direction {
        let v = n.as_array();
        let out: Vec<f64> = (0..3)
            .map(|i| self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2])
            .collect();
        Direction::renormalized(out[0], out[1], out[2])
    }

    pub fn transpose(&self) -> Self {
        let t = std::array::from_fn(|i| std::array::from_fn(|j| self.m[j][i]));
        Rotation { m: t }
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let p = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum())
        });
        Rotation { m: p }
    }

    /// Unit quaternion (w, x, y, z) via the stable largest-component branch;
    /// the overall sign is arbitrary.
    fn quaternion(&self) -> (f64, f64, f64, f64) {
        let m = &self.m;
        let tr = m[0][0] + m[1][1] + m[2][2];
        if tr > 0.0 {
            let s = (tr + 1.0).sqrt() * 2.0;
            (0.25 * s, (m[2][1] - m[1][2]) / s, (m[0][2] - m[2][0]) / s, (m[1][0] - m[0][1]) / s)
        } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
            let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0;
            ((m[2][1] - m[1][2]) / s, 0.25 * s, (m[0][1] + m[1][0]) / s, (m[0][2] + m[2][0]) / s)
        } else if m[1][1] > m[2][2] {
            let s = (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt() * 2.0;
            ((m[0][2] - m[2][0]) / s, (m[0][1] + m[1][0]) / s, 0.25 * s, (m[1][2] + m[2][1]) / s)
        } else {
            let s = (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt() * 2.0;
            ((m[1][0] - m[0][1]) / s, (m[0][2] + m[2][0]) / s, (m[1][2] + m[2][1]) / s, 0.25 * s)
        }
    }
}

/// Spin-1/2 lift of a rotation: T = cos(α/2)·I − i·sin(α/2)·(u·σ), defined up
/// to global sign. Satisfies T†·(a·σ)·T = (Rᵀa)·σ.
pub fn su2_of_rotation(r: &Rotation) -> ComplexMatrix {
    let (w, x, y, z) = r.quaternion();
    ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::new(w, -z),
            Complex64::new(-y, -x),
            Complex64::new(y, -x),
            Complex64::new(w, z),
        ],
    )
}

/// ‖T†·Aᶿ·T − A^{θ∘R}‖_Frobenius where Aᶿ is the unrescaled grid average of
/// θ, (θ∘R)(n) = θ(R·n), and T is the spin-1/2 lift of R. Both averages use
/// the same Fibonacci grid, so the defect measures exactly how well operator
/// conjugation tracks rotation of the underlying function.
pub fn conjugation_defect<F: Fn(&Direction) -> f64>(
    theta: F,
    rotation: &Rotation,
    grid_points: usize,
) -> Result<f64, SpinError> {
    if grid_points < OPERATOR_GRID_MIN {
        return Err(SpinError::GridTooCoarse { got: grid_points, need: OPERATOR_GRID_MIN });
    }
    let grid = fibonacci_sphere(grid_points);
    let (a, _, _) = coherent_average(&theta, &grid);
    let composed = |n: &Direction| theta(&rotation.apply(n));
    let (b, _, _) = coherent_average(&composed, &grid);
    let t = su2_of_rotation(rotation);
    let conj = t.adjoint().mul(&a).mul(&t);
    Ok(frobenius_distance(&conj, &b).expect("same dims"))
}
