//! Small dense complex matrices (2×2 for observables, 4×4 for two-qubit
//! states): just the operations the quantum layer needs.

use num_complex::Complex64;
use std::fmt;

pub type C64 = Complex64;

/// Row-major square complex matrix of runtime dimension (2 or 4 here).
#[derive(Clone, PartialEq)]
pub struct ComplexSquareMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexSquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from a row-major slice of length `dim * dim`.
    pub fn from_row_major(dim: usize, data: &[C64]) -> Self {
        assert_eq!(data.len(), dim * dim, "row-major data length");
        Self {
            dim,
            data: data.to_vec(),
        }
    }

    /// 2×2 matrix from real entries.
    pub fn from_real_2x2(rows: [[f64; 2]; 2]) -> Self {
        let mut m = Self::zeros(2);
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, C64::new(x, 0.0));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product; index (r_a·dim_b + r_b, c_a·dim_b + c_b).
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let mut out = Self::zeros(da * db);
        for ra in 0..da {
            for ca in 0..da {
                let a = self.get(ra, ca);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        out.set(ra * db + rb, ca * db + cb, a * other.get(rb, cb));
                    }
                }
            }
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    /// (A + A†)/2 — the Hermitian part, used to scrub rounding noise before
    /// eigendecomposition.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.dagger()).scale(0.5)
    }

    /// Hilbert–Schmidt inner product real part: Re Tr(A† B) — not needed
    /// often, but cheap and handy for diagnostics.
    pub fn re_inner(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    /// Outer product v v† of a column vector, as a matrix.
    pub fn outer(v: &[C64]) -> Self {
        let d = v.len();
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.set(r, c, v[r] * v[c].conj());
            }
        }
        out
    }
}

impl fmt::Debug for ComplexSquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexSquareMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
