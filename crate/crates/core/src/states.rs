//! State families and the coherence / mixedness measures evaluated on them.
//!
//! Basis convention: |0⟩ is the stationary level of amplitude damping, so the
//! Bloch vector (0, 0, 1) is the fixed point of the dissipative channel.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hermitian::{eig_hermitian, is_psd_by_coefficients, ComplexMatrix, DensityMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub eta_x: f64,
    pub eta_y: f64,
    pub eta_z: f64,
}

impl BlochVector {
    pub fn new(eta_x: f64, eta_y: f64, eta_z: f64) -> Result<Self> {
        let v = Self { eta_x, eta_y, eta_z };
        if v.norm() > 1.0 + 1e-12 {
            return Err(Error::BlochOutOfBall(v.norm()));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        (self.eta_x * self.eta_x + self.eta_y * self.eta_y + self.eta_z * self.eta_z).sqrt()
    }

    /// l1 coherence of ½(I + η·σ), i.e. |η_x + iη_y|.
    pub fn coherence(&self) -> f64 {
        self.eta_x.hypot(self.eta_y)
    }
}

/// ½(I + η·σ).
pub fn bloch_state(eta: BlochVector) -> Result<DensityMatrix> {
    let eta = BlochVector::new(eta.eta_x, eta.eta_y, eta.eta_z)?;
    let m = ComplexMatrix::from_row_major(vec![
        C64::new(0.5 * (1.0 + eta.eta_z), 0.0),
        C64::new(0.5 * eta.eta_x, -0.5 * eta.eta_y),
        C64::new(0.5 * eta.eta_x, 0.5 * eta.eta_y),
        C64::new(0.5 * (1.0 - eta.eta_z), 0.0),
    ])?;
    Ok(DensityMatrix::from_trusted(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    /// Correlation triple (k1, k2, k3) of the projector in the Bell-diagonal layout.
    pub fn triple(self) -> BellDiagonalState {
        let (k1, k2, k3) = match self {
            BellState::PhiPlus => (1.0, -1.0, 1.0),
            BellState::PhiMinus => (-1.0, 1.0, 1.0),
            BellState::PsiPlus => (1.0, 1.0, -1.0),
            BellState::PsiMinus => (-1.0, -1.0, -1.0),
        };
        BellDiagonalState { k1, k2, k3 }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BellState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" => Ok(BellState::PhiPlus),
            "phi-" => Ok(BellState::PhiMinus),
            "psi+" => Ok(BellState::PsiPlus),
            "psi-" => Ok(BellState::PsiMinus),
            other => Err(Error::Parse(format!("unknown Bell state `{other}`"))),
        }
    }
}

pub fn bell_state(which: BellState) -> DensityMatrix {
    which.triple().density_matrix().expect("Bell triples are valid")
}

/// Two-qubit X state diagonal in the Bell basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalState {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl BellDiagonalState {
    pub fn new(k1: f64, k2: f64, k3: f64) -> Result<Self> {
        let k = Self { k1, k2, k3 };
        if !is_psd_by_coefficients(&k.matrix()) {
            return Err(Error::NotPsd(k.lowest_weight()));
        }
        Ok(k)
    }

    fn lowest_weight(&self) -> f64 {
        let Self { k1, k2, k3 } = *self;
        [1.0 + k3 + (k1 - k2), 1.0 + k3 - (k1 - k2), 1.0 - k3 + (k1 + k2), 1.0 - k3 - (k1 + k2)]
            .into_iter()
            .fold(f64::INFINITY, f64::min)
            / 4.0
    }

    /// ¼ [[1+k3, 0, 0, k1−k2], [0, 1−k3, k1+k2, 0], [0, k1+k2, 1−k3, 0], [k1−k2, 0, 0, 1+k3]].
    pub fn matrix(&self) -> ComplexMatrix {
        let Self { k1, k2, k3 } = *self;
        let a = 0.25 * (1.0 + k3);
        let b = 0.25 * (1.0 - k3);
        let x = 0.25 * (k1 - k2);
        let y = 0.25 * (k1 + k2);
        ComplexMatrix::from_real_rows(&[&[a, 0.0, 0.0, x], &[0.0, b, y, 0.0], &[0.0, y, b, 0.0], &[x, 0.0, 0.0, a]])
            .unwrap()
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix())
    }

    /// ½(|k1 − k2| + |k1 + k2|).
    pub fn coherence(&self) -> f64 {
        0.5 * ((self.k1 - self.k2).abs() + (self.k1 + self.k2).abs())
    }

    /// ¼(1 + k1² + k2² + k3²).
    pub fn purity(&self) -> f64 {
        0.25 * (1.0 + self.k1 * self.k1 + self.k2 * self.k2 + self.k3 * self.k3)
    }

    pub fn scaled(&self, q: f64) -> Self {
        Self { k1: q * self.k1, k2: q * self.k2, k3: q * self.k3 }
    }
}

/// GHZ pair (|b⟩ ± |b̄⟩)/√2 with b the (index − 1) bit string, leftmost qubit most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GhzIndex {
    pub n_qubits: usize,
    pub index: usize,
    pub plus: bool,
}

impl GhzIndex {
    pub fn new(n_qubits: usize, index: usize, plus: bool) -> Result<Self> {
        if !(2..=4).contains(&n_qubits) {
            return Err(Error::InvalidParameter(format!("GHZ states need 2 to 4 qubits, got {n_qubits}")));
        }
        let max = 1 << (n_qubits - 1);
        if index == 0 || index > max {
            return Err(Error::BadIndex { index, max });
        }
        Ok(Self { n_qubits, index, plus })
    }

    /// The two computational basis indices in superposition.
    pub fn support(&self) -> (usize, usize) {
        let d = 1 << self.n_qubits;
        let b = self.index - 1;
        (b, (d - 1) ^ b)
    }

    /// Number of 1s in the leading bit string; the partner carries n minus that.
    pub fn excitations(&self) -> usize {
        self.support().0.count_ones() as usize
    }

    pub fn label(&self) -> String {
        format!("ghz{}_{}{}", self.n_qubits, self.index, if self.plus { "+" } else { "-" })
    }
}

pub fn ghz_state(idx: GhzIndex) -> Result<DensityMatrix> {
    let idx = GhzIndex::new(idx.n_qubits, idx.index, idx.plus)?;
    let d = 1 << idx.n_qubits;
    let (a, b) = idx.support();
    let mut v = vec![C64::new(0.0, 0.0); d];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    v[a] = C64::new(h, 0.0);
    v[b] = C64::new(if idx.plus { h } else { -h }, 0.0);
    Ok(DensityMatrix::from_trusted(ComplexMatrix::projector(&v)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingParameter(f64);

impl MixingParameter {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("mixing parameter {q} outside [0, 1]")));
        }
        Ok(Self(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// (1 − q)/d · I + q·base.
pub fn werner(q: MixingParameter, base: &DensityMatrix) -> DensityMatrix {
    let d = base.dim();
    let q = q.value();
    let noise = ComplexMatrix::identity(d).scale_real((1.0 - q) / d as f64);
    DensityMatrix::from_trusted(&noise + &base.matrix().scale_real(q))
}

/// The 4×4 unitary H ⊗ I that maps Bell states to maximally coherent entangled states.
pub fn coherence_unitary() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[&[h, 0.0, h, 0.0], &[0.0, h, 0.0, h], &[h, 0.0, -h, 0.0], &[0.0, h, 0.0, -h]])
        .unwrap()
}

pub fn max_coherent_entangled(which: BellState) -> DensityMatrix {
    let rho = bell_state(which).into_matrix();
    DensityMatrix::from_trusted(rho.conjugate_by(&coherence_unitary()))
}

/// Σ_{i≠j} |ρ_ij|.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let d = m.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += m[(i, j)].norm();
            }
        }
    }
    s
}

fn entropy_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().filter(|&x| x > 1e-300).map(|x| -x * x.ln()).sum()
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(eig_hermitian(rho.matrix()).expect("density matrices are Hermitian").values)
}

/// S(ρ_diag) − S(ρ), natural logarithm.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let diag = (0..m.dim()).map(|i| m[(i, i)].re);
    (entropy_of(diag) - von_neumann_entropy(rho)).max(0.0)
}

/// d/(d − 1)·(1 − tr ρ²).
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    d / (d - 1.0) * (1.0 - rho.purity())
}

/// Cl1²/(d − 1)² + S_l, bounded above by one.
pub fn m_cl(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    let c = l1_coherence(rho) / (d - 1.0);
    c * c + linear_entropy(rho)
}

/// tr(ρ_t ρ_0)/tr(ρ_0²).
pub fn relative_purity(rho0: &DensityMatrix, rhot: &DensityMatrix) -> Result<f64> {
    if rho0.dim() != rhot.dim() {
        return Err(Error::DimensionMismatch { expected: rho0.dim(), found: rhot.dim() });
    }
    Ok(rhot.matrix().trace_product(rho0.matrix()).re / rho0.purity())
}

/// Diagonal phase unitary diag(e^{iφ_k}).
pub fn phase_unitary(phases: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(phases.len());
    for (k, &p) in phases.iter().enumerate() {
        m[(k, k)] = C64::from_polar(1.0, p);
    }
    m
}

/// Parsed form of the state mini-language used by the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Bloch(BlochVector),
    Bell(BellState),
    Ghz(GhzIndex),
    Werner(f64, Box<StateSpec>),
    MaxCoherent(BellState),
    MaxCoherentWerner(f64, BellState),
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Bloch(eta) => bloch_state(*eta),
            StateSpec::Bell(b) => Ok(bell_state(*b)),
            StateSpec::Ghz(g) => ghz_state(*g),
            StateSpec::Werner(q, inner) => Ok(werner(MixingParameter::new(*q)?, &inner.build()?)),
            StateSpec::MaxCoherent(b) => Ok(max_coherent_entangled(*b)),
            StateSpec::MaxCoherentWerner(q, b) => Ok(werner(MixingParameter::new(*q)?, &max_coherent_entangled(*b))),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Bloch(e) => write!(f, "bloch:{},{},{}", e.eta_x, e.eta_y, e.eta_z),
            StateSpec::Bell(b) => write!(f, "bell:{b}"),
            StateSpec::Ghz(g) => write!(f, "ghz:{},{},{}", g.n_qubits, g.index, if g.plus { '+' } else { '-' }),
            StateSpec::Werner(q, inner) => write!(f, "werner:{q},{inner}"),
            StateSpec::MaxCoherent(b) => write!(f, "mcb:{b}"),
            StateSpec::MaxCoherentWerner(q, b) => write!(f, "mcbw:{q},{b}"),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("expected a number, found `{s}`")))
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (kind, rest) =
            lower.split_once(':').ok_or_else(|| Error::Parse(format!("state `{s}` lacks a `kind:` prefix")))?;
        match kind {
            "bloch" => {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!("bloch state needs three components, got `{rest}`")));
                }
                Ok(StateSpec::Bloch(BlochVector::new(parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?)?))
            }
            "bell" => Ok(StateSpec::Bell(rest.parse()?)),
            "ghz" => {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!("ghz state needs `N,k,sign`, got `{rest}`")));
                }
                let n = parts[0].parse().map_err(|_| Error::Parse(format!("bad qubit count `{}`", parts[0])))?;
                let k = parts[1].parse().map_err(|_| Error::Parse(format!("bad GHZ index `{}`", parts[1])))?;
                let plus = match parts[2] {
                    "+" | "plus" => true,
                    "-" | "minus" => false,
                    other => return Err(Error::Parse(format!("bad GHZ sign `{other}`"))),
                };
                Ok(StateSpec::Ghz(GhzIndex::new(n, k, plus)?))
            }
            "werner" => {
                let (q, inner) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("werner state needs `q,<state>`, got `{rest}`")))?;
                let q = parse_f64(q)?;
                MixingParameter::new(q)?;
                Ok(StateSpec::Werner(q, Box::new(inner.parse()?)))
            }
            "mcb" => Ok(StateSpec::MaxCoherent(rest.parse()?)),
            "mcbw" => {
                let (q, b) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("mcbw state needs `q,<bell>`, got `{rest}`")))?;
                let q = parse_f64(q)?;
                MixingParameter::new(q)?;
                Ok(StateSpec::MaxCoherentWerner(q, b.parse()?))
            }
            other => Err(Error::Parse(format!("unknown state kind `{other}`"))),
        }
    }
}
