//! Analytic non-Markovian channels: the modified Ornstein–Uhlenbeck and random
//! telegraph dephasing channels, and damped Jaynes–Cummings amplitude damping.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hermitian::{pauli, ComplexMatrix, DensityMatrix, C64};
use crate::states::{BellDiagonalState, BlochVector};

/// The rate is reported as a pole when the distance |p/ṗ| to the zero of p_t
/// falls below this fraction of max(t, 1).
pub const RATE_POLE_TOL: f64 = 1e-12;

/// True when t sits on a zero of p_t to within [`RATE_POLE_TOL`].
pub fn is_rate_pole(p: f64, dp: f64, t: f64) -> bool {
    p == 0.0 || p.abs() < RATE_POLE_TOL * dp.abs() * t.max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Oun,
    Rtn,
    Nmad,
}

impl ChannelKind {
    pub fn is_dephasing(self) -> bool {
        !matches!(self, ChannelKind::Nmad)
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Oun => "oun",
            ChannelKind::Rtn => "rtn",
            ChannelKind::Nmad => "nmad",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oun" => Ok(ChannelKind::Oun),
            "rtn" => Ok(ChannelKind::Rtn),
            "nmad" => Ok(ChannelKind::Nmad),
            other => Err(Error::Parse(format!("unknown channel `{other}` (expected oun, rtn or nmad)"))),
        }
    }
}

/// Channel kind plus its rates. `lambda` is used by OUN and NMAD, `c` by RTN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    pub kappa: f64,
    pub lambda: f64,
    pub c: f64,
}

impl ChannelConfig {
    pub fn oun(kappa: f64, lambda: f64) -> Result<Self> {
        Self::new(ChannelKind::Oun, kappa, lambda, 0.0)
    }

    pub fn rtn(kappa: f64, c: f64) -> Result<Self> {
        Self::new(ChannelKind::Rtn, kappa, 0.0, c)
    }

    pub fn nmad(kappa: f64, lambda: f64) -> Result<Self> {
        Self::new(ChannelKind::Nmad, kappa, lambda, 0.0)
    }

    pub fn new(kind: ChannelKind, kappa: f64, lambda: f64, c: f64) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("kappa", kappa)?;
        match kind {
            ChannelKind::Oun | ChannelKind::Nmad => positive("lambda", lambda)?,
            ChannelKind::Rtn => positive("c", c)?,
        }
        Ok(Self { kind, kappa, lambda, c })
    }

    /// Same rate ratios with κ replaced by `kappa`.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        let s = kappa / self.kappa;
        Self::new(self.kind, kappa, self.lambda * s, self.c * s)
    }

    /// RTN: c/κ > ½. NMAD: λ < 2κ (oscillatory). OUN never has negative rates.
    pub fn is_oscillatory(&self) -> bool {
        match self.kind {
            ChannelKind::Oun => false,
            ChannelKind::Rtn => rtn_omega_sq(self) > 0.0,
            ChannelKind::Nmad => nmad_delta(self) < 0.0,
        }
    }
}

impl fmt::Display for ChannelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChannelKind::Rtn => write!(f, "rtn(kappa={}, c={})", self.kappa, self.c),
            k => write!(f, "{k}(kappa={}, lambda={})", self.kappa, self.lambda),
        }
    }
}

fn rtn_omega_sq(cfg: &ChannelConfig) -> f64 {
    let r = 2.0 * cfg.c / cfg.kappa;
    r * r - 1.0
}

fn nmad_delta(cfg: &ChannelConfig) -> f64 {
    cfg.lambda * cfg.lambda - 2.0 * cfg.kappa * cfg.lambda
}

/// (C(x), S(x)) = (cosh(√δ x), sinh(√δ x)/√δ), continued to cos/sin for δ < 0 and (1, x) at δ = 0.
fn cosh_sinhc(delta: f64, x: f64) -> (f64, f64) {
    if delta > 0.0 {
        let w = delta.sqrt();
        ((w * x).cosh(), (w * x).sinh() / w)
    } else if delta < 0.0 {
        let w = (-delta).sqrt();
        ((w * x).cos(), (w * x).sin() / w)
    } else {
        (1.0, x)
    }
}

/// p_t and ṗ_t together.
pub fn decoherence_pair(cfg: &ChannelConfig, t: f64) -> (f64, f64) {
    match cfg.kind {
        ChannelKind::Oun => {
            let (k, l) = (cfg.kappa, cfg.lambda);
            let em1 = (-l * t).exp_m1();
            let p = (-0.5 * k * (t + em1 / l)).exp();
            (p, 0.5 * k * em1 * p)
        }
        ChannelKind::Rtn => {
            let s = cfg.kappa * t;
            let w2 = rtn_omega_sq(cfg);
            let (c, sc) = cosh_sinhc(-w2, s);
            let e = (-s).exp();
            (e * (c + sc), -cfg.kappa * e * (w2 + 1.0) * sc)
        }
        ChannelKind::Nmad => {
            let u = 0.5 * t;
            let l = cfg.lambda;
            let (c, s) = cosh_sinhc(nmad_delta(cfg), u);
            let e = (-l * u).exp();
            (e * (c + l * s), -e * cfg.kappa * l * s)
        }
    }
}

pub fn decoherence_function(cfg: &ChannelConfig, t: f64) -> f64 {
    decoherence_pair(cfg, t).0
}

/// ṗ_t in closed form.
pub fn decoherence_derivative(cfg: &ChannelConfig, t: f64) -> f64 {
    decoherence_pair(cfg, t).1
}

/// γ(t) = −ṗ/(2p) for dephasing channels and −2ṗ/p for amplitude damping.
pub fn decoherence_rate(cfg: &ChannelConfig, t: f64) -> Result<f64> {
    if cfg.kind == ChannelKind::Oun {
        return Ok(-0.25 * cfg.kappa * (-cfg.lambda * t).exp_m1());
    }
    let (p, dp) = decoherence_pair(cfg, t);
    if is_rate_pole(p, dp, t) {
        return Err(Error::RatePole { t });
    }
    Ok(match cfg.kind {
        ChannelKind::Nmad => -2.0 * dp / p,
        _ => -0.5 * dp / p,
    })
}

/// Zeros of p_t in (0, horizon], where the rate has poles.
pub fn decoherence_zeros(cfg: &ChannelConfig, horizon: f64) -> Vec<f64> {
    let mut out = Vec::new();
    match cfg.kind {
        ChannelKind::Oun => {}
        ChannelKind::Rtn => {
            let w2 = rtn_omega_sq(cfg);
            if w2 <= 0.0 {
                return out;
            }
            let w = w2.sqrt();
            for k in 1.. {
                let t = (k as f64 * PI - w.atan()) / w / cfg.kappa;
                if t > horizon {
                    break;
                }
                out.push(t);
            }
        }
        ChannelKind::Nmad => {
            let delta = nmad_delta(cfg);
            if delta >= 0.0 {
                return out;
            }
            let w = (-delta).sqrt();
            for k in 1.. {
                let t = 2.0 * (k as f64 * PI - (w / cfg.lambda).atan()) / w;
                if t > horizon {
                    break;
                }
                out.push(t);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    pub rho_t: DensityMatrix,
    pub p_t: f64,
    pub t: f64,
}

/// Single-qubit Kraus operators at time t.
pub fn kraus_operators(cfg: &ChannelConfig, t: f64) -> Vec<ComplexMatrix> {
    kraus_for(cfg.kind, decoherence_function(cfg, t))
}

/// Single-qubit Kraus operators for a given value of the decoherence function.
pub fn kraus_for(kind: ChannelKind, p: f64) -> Vec<ComplexMatrix> {
    if kind.is_dephasing() {
        vec![
            ComplexMatrix::identity(2).scale_real(((1.0 + p) / 2.0).max(0.0).sqrt()),
            pauli::z().scale_real(((1.0 - p) / 2.0).max(0.0).sqrt()),
        ]
    } else {
        vec![ComplexMatrix::diagonal(&[1.0, p]), pauli::lowering().scale_real((1.0 - p * p).max(0.0).sqrt())]
    }
}

/// Σ_k E_k ρ E_k† applied on every qubit in turn.
pub fn apply_local_kraus(rho: &ComplexMatrix, kraus: &[ComplexMatrix]) -> ComplexMatrix {
    let n = rho.dim().trailing_zeros() as usize;
    let mut rho = rho.clone();
    for q in 0..n {
        let mut next = ComplexMatrix::zeros(rho.dim());
        for k in kraus {
            next = &next + &rho.local_conjugate(k, q);
        }
        rho = next;
    }
    rho
}

/// Closed-form single-qubit evolution of ½(I + η·σ).
pub fn evolve_qubit(eta: BlochVector, cfg: &ChannelConfig, t: f64) -> Result<EvolvedState> {
    let eta = BlochVector::new(eta.eta_x, eta.eta_y, eta.eta_z)?;
    let p = decoherence_function(cfg, t);
    let coh = C64::new(eta.eta_x, -eta.eta_y) * (0.5 * p);
    let (r00, r11) = if cfg.kind.is_dephasing() {
        (0.5 * (1.0 + eta.eta_z), 0.5 * (1.0 - eta.eta_z))
    } else {
        let excited = 0.5 * (1.0 - eta.eta_z) * p * p;
        (1.0 - excited, excited)
    };
    let m = ComplexMatrix::from_row_major(vec![C64::new(r00, 0.0), coh, coh.conj(), C64::new(r11, 0.0)])?;
    Ok(EvolvedState { rho_t: DensityMatrix::from_trusted(m), p_t: p, t })
}

/// Applies the single-qubit channel independently to every qubit of ρ0 (at most four).
pub fn evolve_nqubit(rho0: &DensityMatrix, cfg: &ChannelConfig, t: f64) -> Result<EvolvedState> {
    let n = rho0.n_qubits();
    if n > 4 {
        return Err(Error::TooManyQubits(n));
    }
    let p = decoherence_function(cfg, t);
    let rho = apply_local_kraus(rho0.matrix(), &kraus_for(cfg.kind, p));
    Ok(EvolvedState { rho_t: DensityMatrix::from_trusted(rho), p_t: p, t })
}

/// Closed-form 4×4 evolution of a Bell-diagonal state under the channel on both qubits.
pub fn bell_diag_evolved(k: &BellDiagonalState, cfg: &ChannelConfig, t: f64) -> DensityMatrix {
    let p = decoherence_function(cfg, t);
    let p2 = p * p;
    let BellDiagonalState { k1, k2, k3 } = *k;
    let x = 0.25 * (k1 - k2) * p2;
    let y = 0.25 * (k1 + k2) * p2;
    let rows: [[f64; 4]; 4] = if cfg.kind.is_dephasing() {
        let a = 0.25 * (1.0 + k3);
        let b = 0.25 * (1.0 - k3);
        [[a, 0.0, 0.0, x], [0.0, b, y, 0.0], [0.0, y, b, 0.0], [x, 0.0, 0.0, a]]
    } else {
        let p4 = p2 * p2;
        let a = 1.0 - p2 + 0.25 * (1.0 + k3) * p4;
        let b = 0.25 * (2.0 * p2 - (1.0 + k3) * p4);
        let d = 0.25 * (1.0 + k3) * p4;
        [[a, 0.0, 0.0, x], [0.0, b, y, 0.0], [0.0, y, b, 0.0], [x, 0.0, 0.0, d]]
    };
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    DensityMatrix::from_trusted(ComplexMatrix::from_real_rows(&refs).unwrap())
}

/// Jump operator of the single-qubit dissipator: σz for dephasing, σ₋ for damping.
fn jump_operator(kind: ChannelKind) -> ComplexMatrix {
    if kind.is_dephasing() {
        pauli::z()
    } else {
        pauli::lowering()
    }
}

/// Σ_j (A_j ρ A_j† − ½{A_j†A_j, ρ}) over qubits j, without the rate.
pub fn dissipator(rho: &ComplexMatrix, kind: ChannelKind) -> ComplexMatrix {
    let n = rho.dim().trailing_zeros() as usize;
    let a = jump_operator(kind);
    let mut out = ComplexMatrix::zeros(rho.dim());
    let ada = &a.adjoint() * &a;
    for q in 0..n {
        let jump = rho.local_conjugate(&a, q);
        let anti = &rho.local_left(&ada, q) + &rho.local_right(&ada, q);
        out = &out + &(&jump - &anti.scale_real(0.5));
    }
    out
}

/// dρ_t/dt = L_t(ρ_t) by differentiating the product channel, qubit by qubit.
///
/// Unlike `generator(ρ_t)` this stays finite at the zeros of p_t, where γ has poles
/// but the evolved state moves at a finite speed.
pub fn evolved_derivative(rho0: &DensityMatrix, cfg: &ChannelConfig, t: f64) -> Result<ComplexMatrix> {
    let n = rho0.n_qubits();
    if n > 4 {
        return Err(Error::TooManyQubits(n));
    }
    let (p, dp) = decoherence_pair(cfg, t);
    let kraus = kraus_operators(cfg, t);
    let apply = |rho: &ComplexMatrix, q: usize| {
        let mut next = ComplexMatrix::zeros(rho.dim());
        for k in &kraus {
            next = &next + &rho.local_conjugate(k, q);
        }
        next
    };
    let apply_derivative = |rho: &ComplexMatrix, q: usize| {
        if cfg.kind.is_dephasing() {
            // d/dt [(1+p)/2 ρ + (1−p)/2 ZρZ] = ṗ/2 (ρ − ZρZ)
            (rho - &rho.local_conjugate(&pauli::z(), q)).scale_real(0.5 * dp)
        } else {
            // d/dt [AρA† + (1 − p²) σ₋ρσ₊] with A = diag(1, p)
            let a = ComplexMatrix::diagonal(&[1.0, p]);
            let da = ComplexMatrix::diagonal(&[0.0, dp]);
            let left = rho.local_left(&da, q).local_right(&a.adjoint(), q);
            let right = rho.local_left(&a, q).local_right(&da.adjoint(), q);
            let jump = rho.local_conjugate(&pauli::lowering(), q).scale_real(-2.0 * p * dp);
            &(&left + &right) + &jump
        }
    };
    let mut total = ComplexMatrix::zeros(rho0.dim());
    for j in 0..n {
        let mut rho = rho0.matrix().clone();
        for q in 0..n {
            rho = if q == j { apply_derivative(&rho, q) } else { apply(&rho, q) };
        }
        total = &total + &rho;
    }
    Ok(total.hermitian_part())
}

/// L_t(ρ) = γ(t)·dissipator(ρ); no Hamiltonian part.
pub fn generator(rho: &DensityMatrix, cfg: &ChannelConfig, t: f64) -> Result<ComplexMatrix> {
    let gamma = decoherence_rate(cfg, t)?;
    Ok(dissipator(rho.matrix(), cfg.kind).scale_real(gamma).hermitian_part())
}
