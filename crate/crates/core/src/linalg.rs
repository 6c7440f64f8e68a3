//! Small dense complex linear algebra for 2×2 operators and 4×4 Choi matrices.
//!
//! 2×2 Hermitian eigenproblems are solved in closed form from the trace and
//! determinant. 4×4 problems go through nalgebra's Hermitian eigen-solver and
//! are re-sorted into ascending order.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

pub type C64 = Complex64;
/// 2×2 complex operator in the computational basis (|0⟩, |1⟩).
pub type Mat2 = Matrix2<C64>;
/// 4×4 complex operator in the product basis (|00⟩, |01⟩, |10⟩, |11⟩).
pub type Mat4 = Matrix4<C64>;
pub type Ket = Vector2<C64>;
pub type Ket4 = Vector4<C64>;

/// Tolerance used when validating states, channels and measurements.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance for algebraic self-consistency identities.
pub const IDENTITY_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn mat2(a: C64, b: C64, c_: C64, d: C64) -> Mat2 {
    Mat2::new(a, b, c_, d)
}

pub fn ket(a: C64, b: C64) -> Ket {
    Ket::new(a, b)
}

/// |v⟩⟨w|
pub fn outer(v: &Ket, w: &Ket) -> Mat2 {
    v * w.adjoint()
}

/// |v⟩⟨v|
pub fn projector(v: &Ket) -> Mat2 {
    outer(v, v)
}

/// ⟨v|w⟩
pub fn inner(v: &Ket, w: &Ket) -> C64 {
    v.dotc(w)
}

pub fn trace2(m: &Mat2) -> C64 {
    m[(0, 0)] + m[(1, 1)]
}

pub fn trace4(m: &Mat4) -> C64 {
    (0..4).map(|i| m[(i, i)]).sum()
}

/// Largest entry-wise modulus.
pub fn max_abs2(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs4(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect2(m: &Mat2) -> f64 {
    max_abs2(&(m - m.adjoint()))
}

pub fn hermiticity_defect4(m: &Mat4) -> f64 {
    max_abs4(&(m - m.adjoint()))
}

/// Kronecker product a ⊗ b; index (2i + j) carries |i⟩ of `a` and |j⟩ of `b`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|row, col| a[(row / 2, col / 2)] * b[(row % 2, col % 2)])
}

/// ‖U†U − 𝟙‖ measured entry-wise.
pub fn unitarity_defect(u: &Mat2) -> f64 {
    max_abs2(&(u.adjoint() * u - Mat2::identity()))
}

/// Multiply by a global phase so the largest-modulus entry is real positive.
pub fn fix_phase<const N: usize>(v: &nalgebra::SVector<C64, N>) -> nalgebra::SVector<C64, N> {
    let mut best = 0;
    for i in 1..N {
        if v[i].norm() > v[best].norm() + 1e-14 {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() == 0.0 {
        return *v;
    }
    v * (pivot.conj() / pivot.norm())
}

/// Same convention as [`fix_phase`], applied to a 2×2 operator viewed as a vector
/// of its row-major entries.
pub fn fix_phase_mat2(m: &Mat2) -> Mat2 {
    let mut best = (0, 0);
    for i in 0..2 {
        for j in 0..2 {
            if m[(i, j)].norm() > m[best].norm() + 1e-14 {
                best = (i, j);
            }
        }
    }
    let pivot = m[best];
    if pivot.norm() == 0.0 {
        return *m;
    }
    m * (pivot.conj() / pivot.norm())
}

/// Spectral data of a Hermitian 2×2 matrix, eigenvalues ascending.
#[derive(Debug, Clone, Copy)]
pub struct Eigh2 {
    pub values: [f64; 2],
    pub vectors: [Ket; 2],
}

impl Eigh2 {
    pub fn gap(&self) -> f64 {
        self.values[1] - self.values[0]
    }
}

/// Closed-form eigendecomposition of the Hermitian part of `m`.
///
/// Eigenvalues come from the trace and determinant. The top eigenvector is taken
/// from whichever of the two null-space rows of `m − λ𝟙` is better conditioned;
/// the bottom one is its orthogonal complement. Both carry the
/// largest-entry-real-positive phase.
pub fn eigh2(m: &Mat2) -> Eigh2 {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b.norm());
    let hi = mean + radius;
    let lo = mean - radius;

    let top = if radius == 0.0 {
        ket(r(1.0), r(0.0))
    } else {
        let from_row0 = ket(b, r(hi - a));
        let from_row1 = ket(r(hi - d), b.conj());
        let pick = if from_row0.norm() >= from_row1.norm() {
            from_row0
        } else {
            from_row1
        };
        pick / r(pick.norm())
    };
    let bottom = ket(-top[1].conj(), top[0].conj());
    Eigh2 {
        values: [lo, hi],
        vectors: [fix_phase(&bottom), fix_phase(&top)],
    }
}

/// Eigenvalues of a Hermitian 2×2 matrix, ascending.
pub fn eigvals2(m: &Mat2) -> [f64; 2] {
    eigh2(m).values
}

/// Largest absolute eigenvalue of a Hermitian 2×2 matrix.
pub fn spectral_norm_herm2(m: &Mat2) -> f64 {
    let [lo, hi] = eigvals2(m);
    lo.abs().max(hi.abs())
}

/// Eigendecomposition of a Hermitian 4×4 matrix, eigenvalues ascending and
/// eigenvectors (columns) phase-fixed.
pub fn eigh4(m: &Mat4) -> ([f64; 4], [Ket4; 4]) {
    let herm = (m + m.adjoint()) * r(0.5);
    let eig = herm.symmetric_eigen();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.map(|i| eig.eigenvalues[i]);
    let vectors = order.map(|i| fix_phase(&Ket4::from(eig.eigenvectors.column(i))));
    (values, vectors)
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
pub fn eigvals4(m: &Mat4) -> [f64; 4] {
    eigh4(m).0
}
