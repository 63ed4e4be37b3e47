//! Closed-form bounds for single qubits and Bell-diagonal pairs, written in terms
//! of the decoherence function p_t and its derivative.
//!
//! Amplitude-damping forms use the basis in which |0⟩ is stationary; the
//! single-qubit expressions therefore carry (1 − η_z) where the populations decay.

use std::f64::consts::{PI, SQRT_2};

use crate::channels::{decoherence_pair, decoherence_zeros, is_rate_pole, ChannelConfig, ChannelKind};
use crate::error::{Error, Result};
use crate::quadrature::AdaptiveSimpson;
use crate::states::BellDiagonalState;

use super::{assemble, integrate_with_poles, purity_angle, GeneratorArgument, Method, NormKind, QslRequest, QslResult};
use super::DEFAULT_GRID_POINTS;

/// The eight closed forms and the pipeline configuration each one reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    DephasingQubitRp,
    NmadQubitRp,
    DephasingQubitBures,
    NmadQubitBures,
    BellDephasingRp,
    BellNmadRp,
    BellDephasingBures,
    BellNmadBures,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 8] = [
        ClosedForm::DephasingQubitRp,
        ClosedForm::NmadQubitRp,
        ClosedForm::DephasingQubitBures,
        ClosedForm::NmadQubitBures,
        ClosedForm::BellDephasingRp,
        ClosedForm::BellNmadRp,
        ClosedForm::BellDephasingBures,
        ClosedForm::BellNmadBures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::DephasingQubitRp => "qsl_dephasing_qubit_rp",
            ClosedForm::NmadQubitRp => "qsl_nmad_qubit_rp",
            ClosedForm::DephasingQubitBures => "qsl_dephasing_qubit_bures",
            ClosedForm::NmadQubitBures => "qsl_nmad_qubit_bures",
            ClosedForm::BellDephasingRp => "qsl_belldiag_rp (dephasing)",
            ClosedForm::BellNmadRp => "qsl_belldiag_rp (nmad)",
            ClosedForm::BellDephasingBures => "qsl_belldiag_bures (dephasing)",
            ClosedForm::BellNmadBures => "qsl_belldiag_bures (nmad)",
        }
    }

    pub fn method(self) -> Method {
        match self {
            ClosedForm::DephasingQubitRp | ClosedForm::NmadQubitRp | ClosedForm::BellDephasingRp | ClosedForm::BellNmadRp => {
                Method::RelativePurity
            }
            _ => Method::Bures,
        }
    }

    pub fn is_dephasing(self) -> bool {
        matches!(
            self,
            ClosedForm::DephasingQubitRp
                | ClosedForm::DephasingQubitBures
                | ClosedForm::BellDephasingRp
                | ClosedForm::BellDephasingBures
        )
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(
            self,
            ClosedForm::BellDephasingRp | ClosedForm::BellNmadRp | ClosedForm::BellDephasingBures | ClosedForm::BellNmadBures
        )
    }

    /// Where the generator is evaluated in the time average this form encodes.
    /// The Bell dephasing relative-purity integrand |p ṗ| √(k1² + k2²) is ‖dρ_t/dt‖;
    /// the other relative-purity integrands are ‖L_t(ρ0)‖.
    pub fn generator_argument(self) -> GeneratorArgument {
        match self {
            ClosedForm::DephasingQubitRp | ClosedForm::NmadQubitRp | ClosedForm::BellNmadRp => GeneratorArgument::Initial,
            _ => GeneratorArgument::Evolved,
        }
    }

    /// The pipeline request this form should agree with.
    pub fn pipeline_request(self, tau: f64) -> QslRequest {
        QslRequest::for_method(self.method(), tau, NormKind::Op).with_generator_argument(self.generator_argument())
    }
}

fn check_kind(cfg: &ChannelConfig, dephasing: bool) -> Result<()> {
    if cfg.kind.is_dephasing() != dephasing {
        let want = if dephasing { "a dephasing channel (oun or rtn)" } else { "the nmad channel" };
        return Err(Error::InvalidParameter(format!("closed form needs {want}, got {}", cfg.kind)));
    }
    Ok(())
}

fn check_qubit(cl1_0: f64, eta_z: f64) -> Result<()> {
    if cl1_0 < 0.0 || cl1_0 * cl1_0 + eta_z * eta_z > 1.0 + 1e-12 {
        return Err(Error::BlochOutOfBall((cl1_0 * cl1_0 + eta_z * eta_z).sqrt()));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("driving time must be positive, got {tau}")));
    }
    Ok(())
}

fn root(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

/// √x, failing when x is negative beyond roundoff.
fn real_root(x: f64, t: f64) -> Result<f64> {
    if x < -1e-12 {
        return Err(Error::ComplexRadicand { t, value: x });
    }
    Ok(root(x))
}

/// 1 + √(a/b), failing where b vanishes.
fn mixed_factor(a: f64, b: f64, t: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(1.0);
    }
    if b == 0.0 {
        return Err(Error::MixedFactorSingular { t });
    }
    Ok(1.0 + root(a / b))
}

fn pair_checked(cfg: &ChannelConfig, t: f64) -> Result<(f64, f64)> {
    let (p, dp) = decoherence_pair(cfg, t);
    if is_rate_pole(p, dp, t) {
        return Err(Error::RatePole { t });
    }
    Ok((p, dp))
}

fn finish<F>(cfg: &ChannelConfig, tau: f64, angle: f64, numerator: f64, overlap: (f64, bool), f: F) -> Result<QslResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let quad = AdaptiveSimpson::with_panels(DEFAULT_GRID_POINTS);
    let speed = integrate_with_poles(&quad, 0.0, tau, &decoherence_zeros(cfg, tau), None, f)?;
    assemble(angle, numerator, tau, &speed, overlap)
}

/// Qubit under OUN or RTN dephasing, relative purity:
/// τ = 4√2 arccos(P)² tr ρ0² / (π²/τ ∫ |ṗ/p²| Cl1(ρ_t) dt), P = (1 + p_τ C² + η_z²)/(1 + C² + η_z²).
pub fn qsl_dephasing_qubit_rp(cl1_0: f64, eta_z: f64, cfg: &ChannelConfig, tau: f64) -> Result<QslResult> {
    check_kind(cfg, true)?;
    check_qubit(cl1_0, eta_z)?;
    check_tau(tau)?;
    let (c2, z2) = (cl1_0 * cl1_0, eta_z * eta_z);
    let p_tau = decoherence_pair(cfg, tau).0;
    let purity0 = 0.5 * (1.0 + c2 + z2);
    let (theta, clamped) = purity_angle((1.0 + p_tau * c2 + z2) / (1.0 + c2 + z2));
    let num = 4.0 * SQRT_2 * theta * theta * purity0 / (PI * PI);
    let overlap = ((1.0 + p_tau * c2 + z2) / (1.0 + c2 + z2), clamped);
    finish(cfg, tau, theta, num, overlap, |t| {
        let (p, dp) = pair_checked(cfg, t)?;
        Ok((dp / (p * p)).abs() * p.abs() * cl1_0)
    })
}

/// Qubit under amplitude damping, relative purity:
/// integrand |ṗ/p| √(C² + 4(1 − η_z)²), P = (1 + η_z − η_z(1 − η_z)p_τ² + p_τ C²)/(1 + C² + η_z²).
pub fn qsl_nmad_qubit_rp(cl1_0: f64, eta_z: f64, cfg: &ChannelConfig, tau: f64) -> Result<QslResult> {
    check_kind(cfg, false)?;
    check_qubit(cl1_0, eta_z)?;
    check_tau(tau)?;
    let (c2, z) = (cl1_0 * cl1_0, eta_z);
    let p = decoherence_pair(cfg, tau).0;
    let purity0 = 0.5 * (1.0 + c2 + z * z);
    let rel = (1.0 + z - z * (1.0 - z) * p * p + p * c2) / (1.0 + c2 + z * z);
    let (theta, clamped) = purity_angle(rel);
    let num = 4.0 * SQRT_2 * theta * theta * purity0 / (PI * PI);
    let weight = (c2 + 4.0 * (1.0 - z) * (1.0 - z)).sqrt();
    finish(cfg, tau, theta, num, (rel, clamped), |t| {
        let (p, dp) = pair_checked(cfg, t)?;
        Ok((dp / p).abs() * weight)
    })
}

/// Qubit under dephasing, Bures angle:
/// τ = (1 − p_τ C² − η_z² − l1 l_2τ) / (1/τ ∫ |ṗ/p| Cl1(ρ_t)(1 + l1/l_2t) dt),
/// l1 = √(1 − C² − η_z²), l_2t = √(1 − p_t² C² − η_z²).
pub fn qsl_dephasing_qubit_bures(cl1_0: f64, eta_z: f64, cfg: &ChannelConfig, tau: f64) -> Result<QslResult> {
    check_kind(cfg, true)?;
    check_qubit(cl1_0, eta_z)?;
    check_tau(tau)?;
    let (c2, z2) = (cl1_0 * cl1_0, eta_z * eta_z);
    let l1 = root(1.0 - c2 - z2);
    let l2 = |p: f64| root(1.0 - p * p * c2 - z2);
    let p = decoherence_pair(cfg, tau).0;
    let num = 1.0 - p * c2 - z2 - l1 * l2(p);
    let fidelity = 1.0 - 0.5 * num;
    let angle = fidelity.clamp(0.0, 1.0).sqrt().acos();
    finish(cfg, tau, angle, num, (fidelity, false), |t| {
        let (p, dp) = pair_checked(cfg, t)?;
        let factor = mixed_factor(l1 * l1, l2(p).powi(2), t)?;
        Ok((dp / p).abs() * p.abs() * cl1_0 * factor)
    })
}

/// Qubit under amplitude damping, Bures angle:
/// τ = (1 − η_z + η_z(1 − η_z)p_τ² − p_τ C² − h1 h_2τ) / (1/τ ∫ |ṗ| √(C² + 4p²(1 − η_z)²)(1 + h1/h_2t) dt),
/// h1 = √(1 − C² − η_z²), h_2t² = p²(2(1 − η_z) − (1 − η_z)² p²) − p² C².
pub fn qsl_nmad_qubit_bures(cl1_0: f64, eta_z: f64, cfg: &ChannelConfig, tau: f64) -> Result<QslResult> {
    check_kind(cfg, false)?;
    check_qubit(cl1_0, eta_z)?;
    check_tau(tau)?;
    let (c2, z) = (cl1_0 * cl1_0, eta_z);
    let h1 = root(1.0 - c2 - z * z);
    let w = 1.0 - z;
    let h2 = |p: f64, t: f64| real_root(p * p * (2.0 * w - w * w * p * p) - p * p * c2, t);
    let p = decoherence_pair(cfg, tau).0;
    let num = 1.0 - z + z * w * p * p - p * c2 - h1 * h2(p, tau)?;
    let fidelity = 1.0 - 0.5 * num;
    let angle = fidelity.clamp(0.0, 1.0).sqrt().acos();
    finish(cfg, tau, angle, num, (fidelity, false), |t| {
        let (p, dp) = decoherence_pair(cfg, t);
        let factor = mixed_factor(h1 * h1, h2(p, t)?.powi(2), t)?;
        Ok(dp.abs() * (c2 + 4.0 * p * p * w * w).sqrt() * factor)
    })
}

fn k_norms(k: &BellDiagonalState) -> (f64, f64, f64) {
    let BellDiagonalState { k1, k2, k3 } = *k;
    (k1 * k1 + k2 * k2, k3 * k3, k1 * k1 + k2 * k2 + k3 * k3)
}

/// Bell-diagonal pair, relative purity. Dephasing: integrand |p ṗ| √(k1² + k2²),
/// P = (1 + k3² + (k1² + k2²)p²)/(1 + Σk²). Amplitude damping: integrand |ṗ/p| √(2 + k1² + k2² + 4k3²),
/// P = (1 + k3 + p²(k1² + k2² + k3(−2 + (1 + k3)p²)))/(1 + Σk²).
pub fn qsl_belldiag_rp(k: &BellDiagonalState, cfg: &ChannelConfig, tau: f64) -> Result<QslResult> {
    check_tau(tau)?;
    let BellDiagonalState { k1: _, k2: _, k3 } = *k;
    let (k12, k33, sum) = k_norms(k);
    let purity0 = 0.25 * (1.0 + sum);
    let p = decoherence_pair(cfg, tau).0;
    let p2 = p * p;
    let rel = match cfg.kind {
        ChannelKind::Nmad => (1.0 + k3 + p2 * (k12 + k3 * (-2.0 + (1.0 + k3) * p2))) / (1.0 + sum),
        _ => (1.0 + k33 + k12 * p2) / (1.0 + sum),
    };
    let (theta, clamped) = purity_angle(rel);
    let num = 4.0 * theta * theta * purity0 / (PI * PI);
    match cfg.kind {
        ChannelKind::Nmad => {
            let weight = (2.0 + k12 + 4.0 * k33).sqrt();
            finish(cfg, tau, theta, num, (rel, clamped), |t| {
                let (p, dp) = pair_checked(cfg, t)?;
                Ok((dp / p).abs() * weight)
            })
        }
        _ => {
            let weight = k12.sqrt();
            finish(cfg, tau, theta, num, (rel, clamped), |t| {
                let (p, dp) = decoherence_pair(cfg, t);
                Ok((p * dp).abs() * weight)
            })
        }
    }
}

/// Bell-diagonal pair, Bures angle with the operator norm.
///
/// Dephasing: numerator ¼(3 − k3² − (k1² + k2²)p² − √((Σk² − 3)(k3² + (k1² + k2²)p⁴ − 3))),
/// integrand ½|p ṗ| max(|k1 − k2|, |k1 + k2|)(1 + √((Σk² − 3)/((k1² + k2²)p⁴ + k3² − 3))).
///
/// Amplitude damping: the numerator and mixed factor are polynomials in p², and the speed is
/// max(√ζ1, √ζ2, √ζ3, √ζ4), the largest modulus among the eigenvalues of dρ_t/dt.
pub fn qsl_belldiag_bures(k: &BellDiagonalState, cfg: &ChannelConfig, tau: f64) -> Result<QslResult> {
    check_tau(tau)?;
    let BellDiagonalState { k1, k2, k3 } = *k;
    let (k12, k33, sum) = k_norms(k);
    let mixed = 3.0 - sum > 1e-14;
    let deficit0 = if mixed { sum - 3.0 } else { 0.0 };
    match cfg.kind {
        ChannelKind::Nmad => {
            let radicand = |p2: f64| {
                (sum - 3.0)
                    * p2
                    * (-8.0 + (8.0 + k12 + 2.0 * k3) * p2 - 4.0 * (1.0 + k3) * p2 * p2
                        + (1.0 + k3) * (1.0 + k3) * p2 * p2 * p2)
            };
            let p = decoherence_pair(cfg, tau).0;
            let p2 = p * p;
            let num = 0.25 * (2.0 * k3 - k12) * p2 - 0.25 * (k3 + k33) * p2 * p2
                + 0.25 * (3.0 - k3 - real_root(radicand(p2), tau)?);
            let angle = (1.0 - num).clamp(0.0, 1.0).sqrt().acos();
            let kk = (k1 - k2) * (k1 - k2);
            let s = (kk + 4.0).sqrt();
            finish(cfg, tau, angle, num, (1.0 - num, false), |t| {
                let (p, dp) = decoherence_pair(cfg, t);
                let p2 = p * p;
                let q = (k3 + 1.0) * p2;
                let pre = 0.25 * dp * dp * p2;
                let zeta = [
                    pre * (-2.0 * q + k1 + k2 + 2.0).powi(2),
                    pre * (2.0 * q + k1 + k2 - 2.0).powi(2),
                    pre * (4.0 * q * (q - 2.0) - 4.0 * s * (q - 1.0) + kk + 8.0),
                    pre * (4.0 * q * (q - 2.0) + 4.0 * s * (q - 1.0) + kk + 8.0),
                ];
                let speed = zeta.iter().map(|&z| root(z)).fold(0.0, f64::max);
                let deficit_t = p2 * (p2 * (q * (q - 4.0) + k12 + 2.0 * k3 + 8.0) - 8.0);
                Ok(speed * mixed_factor(deficit0, deficit_t, t)?)
            })
        }
        _ => {
            let p = decoherence_pair(cfg, tau).0;
            let p2 = p * p;
            let num = 0.25 * (3.0 - k33 - k12 * p2 - root((sum - 3.0) * (k33 + k12 * p2 * p2 - 3.0)));
            let angle = (1.0 - num).clamp(0.0, 1.0).sqrt().acos();
            let spread = (k1 - k2).abs().max((k1 + k2).abs());
            finish(cfg, tau, angle, num, (1.0 - num, false), |t| {
                let (p, dp) = decoherence_pair(cfg, t);
                let deficit_t = k12 * p.powi(4) + k33 - 3.0;
                Ok(0.5 * (p * dp).abs() * spread * mixed_factor(deficit0, deficit_t, t)?)
            })
        }
    }
}

/// State families with a closed-form coherence–mixedness sum M_Cl.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MclFamily {
    QubitDephasing { eta_z: f64 },
    QubitNmad { eta_z: f64 },
    BellDephasing(BellDiagonalState),
    BellNmad(BellDiagonalState),
}

/// M_Cl of the evolved state at time t from p_t alone.
pub fn mcl_closed_form(family: MclFamily, cfg: &ChannelConfig, t: f64) -> Result<f64> {
    let p = decoherence_pair(cfg, t).0;
    let p2 = p * p;
    let p4 = p2 * p2;
    match family {
        MclFamily::QubitDephasing { eta_z } => {
            check_kind(cfg, true)?;
            Ok(1.0 - eta_z * eta_z)
        }
        MclFamily::QubitNmad { eta_z } => {
            check_kind(cfg, false)?;
            let w = 1.0 - eta_z;
            Ok(p2 * w * (2.0 - p2 * w))
        }
        MclFamily::BellDephasing(k) => {
            check_kind(cfg, true)?;
            let BellDiagonalState { k1, k2, k3 } = k;
            Ok((-5.0 * (k1 * k1 + k2 * k2) * p4 + p4 * (k1 * k1 - k2 * k2).abs() - 6.0 * k3 * k3 + 18.0) / 18.0)
        }
        MclFamily::BellNmad(k) => {
            check_kind(cfg, false)?;
            let BellDiagonalState { k1, k2, k3 } = k;
            let a = k3 + 1.0;
            Ok((-6.0 * a * a * p4 * p4
                + 24.0 * a * p4 * p2
                + (-5.0 * k1 * k1 - 5.0 * k2 * k2 - 12.0 * (k3 + 4.0) + (k1 * k1 - k2 * k2).abs()) * p4
                + 48.0 * p2)
                / 18.0)
        }
    }
}
