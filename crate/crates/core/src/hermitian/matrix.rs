use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; the length must be a perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() || dim == 0 {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Ok(Self { dim, data })
    }

    /// Outer product |v⟩⟨v|.
    pub fn projector(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&x| x * s).collect() }
    }

    /// tr(A·B) without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut acc = ZERO;
        for i in 0..d {
            for k in 0..d {
                acc += self.data[i * d + k] * other.data[k * d + i];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest |M_ij − conj(M_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// ½(M + M†), exactly Hermitian.
    pub fn hermitian_part(&self) -> Self {
        let d = self.dim;
        let mut m = self.clone();
        for i in 0..d {
            m[(i, i)] = C64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..d {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// (op acting on `qubit`) · self, for a 2×2 `op` and qubit 0 the leftmost tensor factor.
    pub fn local_left(&self, op: &ComplexMatrix, qubit: usize) -> Self {
        let d = self.dim;
        let n = d.trailing_zeros() as usize;
        let bit = 1usize << (n - 1 - qubit);
        let mut out = Self::zeros(d);
        for i in 0..d {
            let bi = usize::from(i & bit != 0);
            let i0 = i & !bit;
            let i1 = i0 | bit;
            let (a0, a1) = (op[(bi, 0)], op[(bi, 1)]);
            for j in 0..d {
                out.data[i * d + j] = a0 * self.data[i0 * d + j] + a1 * self.data[i1 * d + j];
            }
        }
        out
    }

    /// self · (op acting on `qubit`).
    pub fn local_right(&self, op: &ComplexMatrix, qubit: usize) -> Self {
        let d = self.dim;
        let n = d.trailing_zeros() as usize;
        let bit = 1usize << (n - 1 - qubit);
        let mut out = Self::zeros(d);
        for j in 0..d {
            let bj = usize::from(j & bit != 0);
            let j0 = j & !bit;
            let j1 = j0 | bit;
            let (a0, a1) = (op[(0, bj)], op[(1, bj)]);
            for i in 0..d {
                out.data[i * d + j] = self.data[i * d + j0] * a0 + self.data[i * d + j1] * a1;
            }
        }
        out
    }

    /// E ρ E† with E a 2×2 operator on `qubit`.
    pub fn local_conjugate(&self, op: &ComplexMatrix, qubit: usize) -> Self {
        self.local_left(op, qubit).local_right(&op.adjoint(), qubit)
    }

    /// A·B·A† for a square A of the same dimension.
    pub fn conjugate_by(&self, a: &Self) -> Self {
        &(a * self) * &a.adjoint()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product of unequal dimensions");
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * d..(k + 1) * d];
                let dst = &mut out.data[i * d..(i + 1) * d];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product; entry (i·db + k, j·db + l) is a[i][j]·b[k][l].
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let db = b.dim;
    ComplexMatrix::from_fn(a.dim * db, |r, c| a[(r / db, c / db)] * b[(r % db, c % db)])
}

/// Embeds a single-qubit operator acting on `qubit` (0 = leftmost factor) of an n-qubit register.
pub fn embed_qubit_operator(op: &ComplexMatrix, qubit: usize, n_qubits: usize) -> ComplexMatrix {
    assert_eq!(op.dim, 2);
    assert!(qubit < n_qubits);
    let mut out = ComplexMatrix::identity(1);
    for q in 0..n_qubits {
        out = if q == qubit { tensor(&out, op) } else { tensor(&out, &ComplexMatrix::identity(2)) };
    }
    out
}

/// Characteristic-polynomial coefficients B_0..B_d of a Hermitian matrix,
/// det(λI − ρ) = Σ_k (−1)^k B_k λ^(d−k), via Faddeev–LeVerrier.
///
/// B_k is the k-th elementary symmetric polynomial of the eigenvalues, so a
/// Hermitian matrix is PSD exactly when every B_k is nonnegative.
pub fn positivity_coefficients(rho: &ComplexMatrix) -> Vec<f64> {
    let d = rho.dim;
    let mut coeffs = Vec::with_capacity(d + 1);
    coeffs.push(1.0);
    // M_1 = I, c_k = −tr(ρ M_k)/k, M_{k+1} = ρ M_k + c_k I
    let mut m = ComplexMatrix::identity(d);
    for k in 1..=d {
        let am = rho * &m;
        let c = -am.trace().re / k as f64;
        coeffs.push(if k % 2 == 0 { c } else { -c });
        m = am;
        for i in 0..d {
            m[(i, i)] += c;
        }
    }
    coeffs
}

/// PSD verdict from the coefficients, with slack −1e-10.
pub fn is_psd_by_coefficients(rho: &ComplexMatrix) -> bool {
    positivity_coefficients(rho).iter().all(|&b| b >= -1e-10)
}

pub mod pauli {
    use super::{ComplexMatrix, C64, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        let i = C64::new(0.0, 1.0);
        ComplexMatrix::from_row_major(vec![ZERO, -i, i, ZERO]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[1.0, -1.0])
    }

    /// σ₋ = |0⟩⟨1|, lowering |1⟩ into the stationary level |0⟩.
    pub fn lowering() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![ZERO, ONE, ZERO, ZERO]).unwrap()
    }
}
