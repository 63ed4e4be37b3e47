//! Quantum speed limit bounds: the generic numeric pipeline, the closed forms
//! for qubits and Bell-diagonal states, and parametric trajectories.

mod closed_form;
mod pipeline;
mod trajectory;

use std::fmt;
use std::str::FromStr;

pub use closed_form::{
    mcl_closed_form, qsl_belldiag_bures, qsl_belldiag_rp, qsl_dephasing_qubit_bures, qsl_dephasing_qubit_rp,
    qsl_nmad_qubit_bures, qsl_nmad_qubit_rp, ClosedForm, MclFamily,
};
pub use pipeline::{qsl, qsl_bures, qsl_relative_purity};
pub use trajectory::{trajectory, trajectory_kappa_tau, TrajectoryPoint};

use crate::error::{Error, Result};
use crate::quadrature::{AdaptiveSimpson, Integral};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    RelativePurity,
    Bures,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rp" | "relative-purity" | "relative_purity" => Ok(Method::RelativePurity),
            "bures" => Ok(Method::Bures),
            other => Err(Error::Parse(format!("unknown method `{other}` (expected rp or bures)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::RelativePurity => "relative-purity",
            Method::Bures => "bures",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    Op,
    Hs,
    Tr,
}

impl FromStr for NormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "op" => Ok(NormKind::Op),
            "hs" => Ok(NormKind::Hs),
            "tr" => Ok(NormKind::Tr),
            other => Err(Error::Parse(format!("unknown norm `{other}` (expected op, hs or tr)"))),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Op => "op",
            NormKind::Hs => "hs",
            NormKind::Tr => "tr",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FidelityRoute {
    /// tr(ρ0ρτ) + √((1 − tr ρ0²)(1 − tr ρτ²)); exact for a qubit.
    Superfidelity,
    /// The Uhlmann fidelity through matrix square roots.
    Uhlmann,
}

/// Which state the time-dependent generator acts on inside the time average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorArgument {
    /// L_t(ρ0): the instantaneous generator applied to the initial state.
    Initial,
    /// L_t(ρ_t) = dρ_t/dt.
    Evolved,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslRequest {
    pub method: Method,
    /// Ignored by the relative-purity bound, which always uses the Hilbert–Schmidt norm.
    pub norm: NormKind,
    pub tau: f64,
    /// Initial number of quadrature panels on [0, τ].
    pub grid_points: usize,
    /// Bures only: multiply the integrand by 1 + √((1 − tr ρ0²)/(1 − tr ρ_t²)) for mixed ρ0.
    pub use_mixed_factor: bool,
    pub fidelity: FidelityRoute,
    pub generator_argument: GeneratorArgument,
}

pub const DEFAULT_GRID_POINTS: usize = 64;

impl QslRequest {
    /// Relative-purity bound with the generator at the initial state.
    pub fn relative_purity(tau: f64) -> Self {
        Self {
            method: Method::RelativePurity,
            norm: NormKind::Hs,
            tau,
            grid_points: DEFAULT_GRID_POINTS,
            use_mixed_factor: false,
            fidelity: FidelityRoute::Superfidelity,
            generator_argument: GeneratorArgument::Initial,
        }
    }

    /// Bures-angle bound with the generator on the evolved state and the mixed-state factor enabled.
    pub fn bures(tau: f64, norm: NormKind) -> Self {
        Self {
            method: Method::Bures,
            norm,
            tau,
            grid_points: DEFAULT_GRID_POINTS,
            use_mixed_factor: true,
            fidelity: FidelityRoute::Superfidelity,
            generator_argument: GeneratorArgument::Evolved,
        }
    }

    pub fn for_method(method: Method, tau: f64, norm: NormKind) -> Self {
        match method {
            Method::RelativePurity => Self::relative_purity(tau),
            Method::Bures => Self::bures(tau, norm),
        }
    }

    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }

    pub fn with_grid_points(self, grid_points: usize) -> Self {
        Self { grid_points, ..self }
    }

    pub fn with_generator_argument(self, generator_argument: GeneratorArgument) -> Self {
        Self { generator_argument, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("driving time must be positive, got {}", self.tau)));
        }
        if self.grid_points < 16 {
            return Err(Error::InvalidParameter(format!("grid_points must be at least 16, got {}", self.grid_points)));
        }
        Ok(())
    }

    pub(crate) fn quadrature(&self) -> AdaptiveSimpson {
        AdaptiveSimpson::with_panels(self.grid_points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// 4θ² tr ρ0²/π² for relative purity, sin²B for Bures.
    pub numerator: f64,
    /// The averaged norm Λ_τ (including the mixed-state factor when enabled).
    pub denominator: f64,
    /// Relative purity P or fidelity F between ρ0 and ρτ.
    pub overlap: f64,
    /// The overlap left [−1, 1] (relative purity) or [0, 1] (fidelity) and was clamped.
    pub overlap_clamped: bool,
    /// The time average diverges because the integrand has a non-integrable pole in (0, τ].
    pub divergent_denominator: bool,
    /// Both numerator and denominator vanish (stationary state).
    pub degenerate: bool,
    pub quadrature_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslResult {
    pub tau_qsl: f64,
    /// θ = arccos P for relative purity, B = arccos √F for Bures.
    pub angle: f64,
    pub averaged_norm: f64,
    pub diagnostics: Diagnostics,
}

const DEGENERATE_TOL: f64 = 1e-14;

/// Combines numerator and time-integrated speed into τ_QSL = numerator·τ/∫.
pub(crate) fn assemble(angle: f64, numerator: f64, tau: f64, speed: &Speed, overlap: (f64, bool)) -> Result<QslResult> {
    let mut diagnostics = Diagnostics { numerator, overlap: overlap.0, overlap_clamped: overlap.1, ..Default::default() };
    let (averaged, tau_qsl) = match speed {
        Speed::Divergent { .. } => {
            diagnostics.divergent_denominator = true;
            (f64::INFINITY, 0.0)
        }
        Speed::Finite(integral) => {
            diagnostics.quadrature_error = integral.error_estimate / tau;
            diagnostics.evaluations = integral.evaluations;
            let averaged = integral.value / tau;
            if averaged < DEGENERATE_TOL {
                if numerator.abs() <= DEGENERATE_TOL {
                    diagnostics.degenerate = true;
                    (averaged, 0.0)
                } else {
                    return Err(Error::DegenerateDenominator { numerator });
                }
            } else {
                (averaged, (numerator / averaged).max(0.0))
            }
        }
    };
    diagnostics.denominator = averaged;
    Ok(QslResult { tau_qsl, angle, averaged_norm: averaged, diagnostics })
}

/// θ = arccos P with P clamped into [−1, 1].
pub(crate) fn purity_angle(p: f64) -> (f64, bool) {
    let clamped = p.clamp(-1.0, 1.0);
    (clamped.acos(), (p - clamped).abs() > 1e-12)
}

/// Integral of the instantaneous speed, or the location where it stops being integrable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Speed {
    Finite(Integral),
    Divergent { at: f64 },
}

/// Evaluates f, replacing a hit on an isolated singular point by the mean of its neighbours.
fn eval_nudged<F>(f: &mut F, t: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    match f(t) {
        Err(Error::RatePole { .. } | Error::MixedFactorSingular { .. }) => {
            let eps = 1e-9 * t.abs().max(1.0);
            Ok(0.5 * (f(t - eps)? + f(t + eps)?))
        }
        other => other,
    }
}

/// A pole at t0 is non-integrable when f(t0 − h)·h stays put as h shrinks (f ∝ 1/|t − t0|).
fn diverges_at<F>(f: &mut F, t0: f64) -> Result<bool>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h1 = 1e-5 * t0;
    let h2 = 1e-7 * t0;
    let g1 = eval_nudged(f, t0 - h1)?.abs() * h1;
    let g2 = eval_nudged(f, t0 - h2)?.abs() * h2;
    Ok(g2 > 0.0 && g2 > 0.5 * g1)
}

fn pole_cuts(a: f64, b: f64, poles: &[f64]) -> Vec<f64> {
    let mut cuts = vec![a];
    cuts.extend(poles.iter().copied().filter(|&t| t > a && t < b));
    cuts.push(b);
    cuts
}

fn panel_share(quad: &AdaptiveSimpson, width: f64, w: &[f64]) -> usize {
    (((w[1] - w[0]) / width * quad.initial_panels as f64).ceil() as usize).max(2)
}

/// Unrefined Simpson estimate of ∫_a^b f over the same pole-split panels.
pub(crate) fn rough_integral<F>(quad: &AdaptiveSimpson, a: f64, b: f64, poles: &[f64], mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut total = 0.0;
    for w in pole_cuts(a, b, poles).windows(2) {
        let coarse = AdaptiveSimpson { initial_panels: panel_share(quad, b - a, w), max_panels: 0, ..*quad };
        total += coarse.integrate(w[0], w[1], |t| eval_nudged(&mut f, t))?.value;
    }
    Ok(total)
}

/// ∫_a^b f with the interval split at the supplied poles, each checked for integrability first.
///
/// `scale` is the magnitude the error is measured against when ∫_a^b f is only part of a
/// larger integral; the target is then min(abs_tol, rel_tol·scale) spread over [a, b] by width.
/// Without it a split interval uses a rough estimate of its own integral. A piece beyond a late
/// zero of p_t can be smaller than the round-off in p_t itself and would never meet a relative
/// target of its own.
pub(crate) fn integrate_with_poles<F>(
    quad: &AdaptiveSimpson,
    a: f64,
    b: f64,
    poles: &[f64],
    scale: Option<f64>,
    mut f: F,
) -> Result<Speed>
where
    F: FnMut(f64) -> Result<f64>,
{
    for &t0 in poles.iter().filter(|&&t| t > a && t <= b) {
        if diverges_at(&mut f, t0)? {
            return Ok(Speed::Divergent { at: t0 });
        }
    }
    let cuts = pole_cuts(a, b, poles);
    let width = b - a;
    let scale = match scale {
        Some(s) => Some(s),
        None if cuts.len() > 2 => Some(rough_integral(quad, a, b, poles, &mut f)?),
        None => None,
    };
    let target = scale.filter(|s| *s != 0.0).map(|s| quad.abs_tol.min(quad.rel_tol * s.abs()));
    let mut total = Integral { value: 0.0, error_estimate: 0.0, panels: 0, evaluations: 0, converged: true };
    for w in cuts.windows(2) {
        let initial_panels = panel_share(quad, width, w);
        let sub = match target {
            Some(t) => AdaptiveSimpson { initial_panels, abs_tol: t * (w[1] - w[0]) / width, rel_tol: f64::INFINITY, ..*quad },
            None => AdaptiveSimpson { initial_panels, ..*quad },
        };
        let part = sub.integrate(w[0], w[1], |t| eval_nudged(&mut f, t))?;
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.panels += part.panels;
        total.evaluations += part.evaluations;
        total.converged &= part.converged;
    }
    Ok(Speed::Finite(total))
}
