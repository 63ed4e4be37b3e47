use crate::error::{Error, Result};

use super::eigen::eig_hermitian;
use super::matrix::ComplexMatrix;

const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-9;

/// Unit-trace positive semidefinite Hermitian matrix on n qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Validates and stores the Hermitian part of `matrix`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n_qubits = qubit_count(matrix.dim())?;
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let lowest = *eig_hermitian(&matrix)?.values.last().unwrap();
        if lowest < -PSD_TOL {
            return Err(Error::NotPsd(lowest));
        }
        Ok(Self { matrix, n_qubits })
    }

    /// For outputs of trace-preserving CP maps applied to valid states.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let n_qubits = qubit_count(matrix.dim()).expect("power-of-two dimension");
        Self { matrix: matrix.hermitian_part(), n_qubits }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self { matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64), n_qubits }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// 1 − tr ρ² as 2 Σ_{i<j} (ρ_ii ρ_jj − |ρ_ij|²), which keeps full relative
    /// precision close to a pure diagonal state. Not snapped.
    pub fn raw_purity_deficit(&self) -> f64 {
        let m = &self.matrix;
        let d = m.dim();
        let mut s = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                s += m[(i, i)].re * m[(j, j)].re - m[(i, j)].norm_sqr();
            }
        }
        2.0 * s
    }

    /// 1 − tr ρ², snapped to 0 below 1e-14 so pure states test as pure.
    pub fn purity_deficit(&self) -> f64 {
        let x = 1.0 - self.purity();
        if x < 1e-14 {
            0.0
        } else {
            x
        }
    }

    pub fn is_pure(&self) -> bool {
        self.purity_deficit() == 0.0
    }
}

fn qubit_count(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), found: dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub op: f64,
    pub hs: f64,
    pub tr: f64,
}

/// Operator, Hilbert–Schmidt and trace norms. Hermitian input uses |eigenvalues|;
/// anything else uses singular values from the eigenvalues of m†m.
pub fn norms(m: &ComplexMatrix) -> Norms {
    let singular: Vec<f64> = if m.is_hermitian(1e-12) {
        eig_hermitian(m).expect("Hermitian").values.iter().map(|x| x.abs()).collect()
    } else {
        let mm = &m.adjoint() * m;
        eig_hermitian(&mm).expect("Gram matrix is Hermitian").values.iter().map(|x| x.max(0.0).sqrt()).collect()
    };
    let op = singular.iter().cloned().fold(0.0, f64::max);
    let hs = singular.iter().map(|s| s * s).sum::<f64>().sqrt();
    let tr = singular.iter().sum();
    Norms { op, hs, tr }
}

/// Principal square root of a PSD matrix. Eigenvalues in [−1e-9, 0) are clipped.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let es = eig_hermitian(m)?;
    let lowest = *es.values.last().unwrap_or(&0.0);
    if lowest < -1e-9 {
        return Err(Error::NotPsd(lowest));
    }
    Ok(es.map_values(|x| x.max(0.0).sqrt()))
}

/// Uhlmann fidelity (tr √(√a b √a))².
pub fn bures_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    if a.is_pure() || b.is_pure() {
        return Ok(a.matrix.trace_product(&b.matrix).re.clamp(0.0, 1.0));
    }
    let sa = sqrt_psd(&a.matrix)?;
    let inner = (&(&sa * &b.matrix) * &sa).hermitian_part();
    let es = eig_hermitian(&inner)?;
    let lowest = *es.values.last().unwrap();
    if lowest < -1e-9 {
        return Err(Error::NotPsd(lowest));
    }
    let root: f64 = es.values.iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((root * root).clamp(0.0, 1.0))
}

/// tr(a·b) + √((1 − tr a²)(1 − tr b²)), an upper bound on the fidelity that is exact for qubits.
pub fn superfidelity_bound(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    let overlap = a.matrix.trace_product(&b.matrix).re;
    Ok(overlap + (a.purity_deficit() * b.purity_deficit()).sqrt())
}

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}
