//! Dense 4x4 complex linear algebra shared by every module.
//!
//! All Dirac-space operators are plain [`Matrix4`] values and all spinors are
//! [`Spinor4`] column vectors. The helpers here cover the handful of operations
//! the physics code needs beyond what nalgebra offers directly: commutators,
//! norm-relative residuals, and a generic eigen-decomposition that works for
//! non-normal matrices (used as an independent check on closed-form eigensystems).

use nalgebra::{Matrix2, Matrix4 as NaMatrix4, Vector2, Vector4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Matrix4 = NaMatrix4<C64>;
pub type Spinor4 = Vector4<C64>;
pub type TwoSpinor = Vector2<C64>;
pub type Matrix2c = Matrix2<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn commutator(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    a * b - b * a
}

pub fn anticommutator(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    a * b + b * a
}

/// Frobenius norm.
pub fn frobenius(m: &Matrix4) -> f64 {
    m.norm()
}

/// `‖a − b‖ / max(1, ‖a‖, ‖b‖)` in the Frobenius norm.
///
/// The floor of one keeps identities whose both sides vanish from dividing by zero.
pub fn relative_residual(a: &Matrix4, b: &Matrix4) -> f64 {
    let scale = frobenius(a).max(frobenius(b)).max(1.0);
    frobenius(&(a - b)) / scale
}

/// Hermiticity defect `‖m − m†‖ / max(1, ‖m‖)`.
pub fn hermiticity_defect(m: &Matrix4) -> f64 {
    relative_residual(m, &m.adjoint())
}

pub fn is_hermitian(m: &Matrix4, tol: f64) -> bool {
    hermiticity_defect(m) < tol
}

/// Expectation value `ψ† A ψ` (not divided by the norm).
#[inline]
pub fn sandwich(psi: &Spinor4, a: &Matrix4, phi: &Spinor4) -> C64 {
    psi.dotc(&(a * phi))
}

/// Orthogonal projector onto the span of `vectors`.
///
/// Vectors that are linearly dependent on earlier ones (to `tol`) are skipped,
/// so the rank of the result equals the dimension of the span.
pub fn span_projector(vectors: &[Spinor4], tol: f64) -> Matrix4 {
    let mut basis: Vec<Spinor4> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut w = v / C64::new(scale, 0.0);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&w);
                w -= b * overlap;
            }
        }
        let n = w.norm();
        if n > tol {
            basis.push(w / C64::new(n, 0.0));
        }
    }
    basis
        .iter()
        .fold(Matrix4::zeros(), |acc, b| acc + b * b.adjoint())
}

/// Eigenvalues of a general complex 4x4 matrix from its complex Schur form.
pub fn general_eigenvalues(m: &Matrix4) -> [C64; 4] {
    let schur = m.schur();
    let (_, t) = schur.unpack();
    [t[(0, 0)], t[(1, 1)], t[(2, 2)], t[(3, 3)]]
}

/// Orthonormal basis of the null space of `m`: right singular vectors whose
/// singular value is below `tol · max(1, ‖m‖)`.
pub fn null_space(m: &Matrix4, tol: f64) -> Vec<Spinor4> {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let cutoff = tol * frobenius(m).max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < cutoff)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect()
}

/// A numerically determined eigenvalue cluster together with the orthogonal
/// projector onto the span of its (right) eigenvectors.
#[derive(Clone, Debug)]
pub struct NumericEigenspace {
    pub eigenvalue: C64,
    pub multiplicity: usize,
    pub projector: Matrix4,
}

/// Generic eigen-decomposition, independent of any closed form.
///
/// Eigenvalues from the Schur form are clustered when closer than
/// `cluster_tol`; each cluster's eigenvectors are the null space of `m − λ`.
/// Works for non-normal matrices, where the returned projectors are
/// orthogonal projectors onto (generally non-orthogonal) eigenspaces.
pub fn numeric_eigenspaces(m: &Matrix4, cluster_tol: f64) -> Vec<NumericEigenspace> {
    let mut values: Vec<C64> = general_eigenvalues(m).to_vec();
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut clusters: Vec<Vec<C64>> = Vec::new();
    for v in values {
        match clusters.last_mut() {
            Some(cl) if (cl[0] - v).norm() < cluster_tol => cl.push(v),
            _ => clusters.push(vec![v]),
        }
    }
    clusters
        .into_iter()
        .map(|cl| {
            let lambda = cl.iter().sum::<C64>() / C64::new(cl.len() as f64, 0.0);
            let shifted = m - Matrix4::identity() * lambda;
            // loosen the null-space cutoff until the cluster's multiplicity is found
            let mut vecs = Vec::new();
            for tol in [1e-12, 1e-10, 1e-8, 1e-6] {
                vecs = null_space(&shifted, tol);
                if vecs.len() >= cl.len() {
                    break;
                }
            }
            NumericEigenspace {
                eigenvalue: lambda,
                multiplicity: cl.len(),
                projector: span_projector(&vecs, 1e-10),
            }
        })
        .collect()
}

/// Block-diagonal 4x4 matrix `diag(a, b)` from two 2x2 blocks.
pub fn block_diag(a: &Matrix2c, b: &Matrix2c) -> Matrix4 {
    blocks(a, &Matrix2c::zeros(), &Matrix2c::zeros(), b)
}

/// 4x4 matrix from its four 2x2 blocks `[[tl, tr], [bl, br]]`.
pub fn blocks(tl: &Matrix2c, tr: &Matrix2c, bl: &Matrix2c, br: &Matrix2c) -> Matrix4 {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(tl);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(tr);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(bl);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(br);
    m
}

/// Stack two 2-spinors into a Dirac spinor `(upper, lower)`.
pub fn stack(upper: &TwoSpinor, lower: &TwoSpinor) -> Spinor4 {
    Spinor4::new(upper[0], upper[1], lower[0], lower[1])
}

/// Largest `|⟨a|b⟩| / (‖a‖‖b‖)` over distinct pairs.
pub fn max_pairwise_overlap(vectors: &[Spinor4]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            let o = a.dotc(b).norm() / (a.norm() * b.norm());
            worst = worst.max(o);
        }
    }
    worst
}
