//! Hermitian eigendecomposition for the two sizes the quantum layer uses:
//! closed form for 2×2, a complex Jacobi iteration for 4×4.
//!
//! Both are exact enough (off-diagonal residuals near machine epsilon) and
//! avoid pulling a LAPACK binding into a crate that only ever diagonalizes
//! two-qubit operators.

use super::matrix::{ComplexSquareMatrix, C64};

/// Eigenvalues in ascending order; column k of `vectors` is the unit
/// eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexSquareMatrix,
}

impl EigenDecomposition {
    /// Eigenvector for `values[k]` as a column vector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim())
            .map(|r| self.vectors.get(r, k))
            .collect()
    }
}

/// Eigendecomposition of a Hermitian matrix (dimension 2 or 4). The input's
/// Hermitian part is used, so callers may pass matrices carrying rounding
/// noise in the anti-Hermitian direction.
pub fn eigh(m: &ComplexSquareMatrix) -> EigenDecomposition {
    let h = m.hermitian_part();
    match h.dim() {
        2 => eigh2(&h),
        _ => eigh_jacobi(&h),
    }
}

/// Smallest eigenvalue and its unit eigenvector.
pub fn min_eigenpair(m: &ComplexSquareMatrix) -> (f64, Vec<C64>) {
    let eig = eigh(m);
    (eig.values[0], eig.vector(0))
}

/// Orthogonal projector onto the span of eigenvectors with strictly negative
/// eigenvalue (the optimal "take the action whenever it helps" measurement
/// update in the alternating optimizer).
pub fn negative_eigenspace_projector(m: &ComplexSquareMatrix) -> ComplexSquareMatrix {
    let eig = eigh(m);
    let mut p = ComplexSquareMatrix::zeros(m.dim());
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda < 0.0 {
            p = p.add(&ComplexSquareMatrix::outer(&eig.vector(k)));
        }
    }
    p
}

/// Closed-form Hermitian 2×2 decomposition.
fn eigh2(h: &ComplexSquareMatrix) -> EigenDecomposition {
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let b = h.get(0, 1);
    let b_norm = b.norm();

    if b_norm < 1e-300 {
        // Already diagonal.
        let (values, srcs) = if a <= d {
            (vec![a, d], [0usize, 1])
        } else {
            (vec![d, a], [1usize, 0])
        };
        let mut vectors = ComplexSquareMatrix::zeros(2);
        for (col, &src) in srcs.iter().enumerate() {
            vectors.set(src, col, C64::new(1.0, 0.0));
        }
        return EigenDecomposition { values, vectors };
    }

    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let radius = (half * half + b_norm * b_norm).sqrt();
    let lo = mean - radius;
    let hi = mean + radius;

    // For eigenvalue λ, (b, λ − a) solves (H − λI)v = 0; b ≠ 0 keeps it
    // nonzero, and the two columns are automatically orthogonal.
    let mut vectors = ComplexSquareMatrix::zeros(2);
    for (col, lambda) in [lo, hi].into_iter().enumerate() {
        let v0 = b;
        let v1 = C64::new(lambda - a, 0.0);
        let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        vectors.set(0, col, v0 / norm);
        vectors.set(1, col, v1 / norm);
    }
    EigenDecomposition {
        values: vec![lo, hi],
        vectors,
    }
}

/// Cyclic complex Jacobi iteration: each sweep annihilates every off-diagonal
/// pair with a phase rotation followed by a real Givens rotation; quadratic
/// convergence brings the off-diagonal norm to ~1e-16 in a few sweeps.
fn eigh_jacobi(h: &ComplexSquareMatrix) -> EigenDecomposition {
    let d = h.dim();
    let mut a = h.clone();
    let mut v = ComplexSquareMatrix::identity(d);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(a.get(p, q).norm());
            }
        }
        let scale = (0..d).map(|i| a.get(i, i).norm()).fold(1.0, f64::max);
        if off <= 1e-15 * scale {
            break;
        }

        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a.get(p, q);
                let b_norm = apq.norm();
                if b_norm <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // Phase e^{iφ} of the off-diagonal entry, then the rotation
                // angle θ zeroing the real 2×2 block: tan 2θ = 2|b|/(app−aqq).
                let phase = apq / b_norm;
                let theta = 0.5 * (2.0 * b_norm).atan2(app - aqq);
                let (s, c) = theta.sin_cos();

                // Block unitary U: U[p][p] = c, U[p][q] = −s,
                // U[q][p] = s·e^{−iφ}, U[q][q] = c·e^{−iφ}.
                let mut u = ComplexSquareMatrix::identity(d);
                u.set(p, p, C64::new(c, 0.0));
                u.set(p, q, C64::new(-s, 0.0));
                u.set(q, p, phase.conj() * s);
                u.set(q, q, phase.conj() * c);

                a = u.dagger().mul(&a).mul(&u);
                v = v.mul(&u);
            }
        }
    }

    // Sort ascending by diagonal; permute eigenvector columns to match.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = ComplexSquareMatrix::zeros(d);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..d {
            vectors.set(r, col, v.get(r, src));
        }
    }
    EigenDecomposition { values, vectors }
}
