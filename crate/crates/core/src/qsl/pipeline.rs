use std::f64::consts::PI;

use crate::channels::{decoherence_rate, decoherence_zeros, dissipator, evolve_nqubit, evolved_derivative, ChannelConfig};
use crate::error::Result;
use crate::hermitian::{bures_fidelity, norms, superfidelity_bound, ComplexMatrix, DensityMatrix};
use crate::states::relative_purity;

use super::{assemble, integrate_with_poles, purity_angle, rough_integral, FidelityRoute, GeneratorArgument, Method, NormKind};
use super::{QslRequest, QslResult, Speed};

pub(crate) fn norm_of(m: &ComplexMatrix, kind: NormKind) -> f64 {
    let n = norms(m);
    match kind {
        NormKind::Op => n.op,
        NormKind::Hs => n.hs,
        NormKind::Tr => n.tr,
    }
}

/// Instantaneous speed ‖L(·)‖ (times the mixed-state factor) for one request.
pub(crate) struct SpeedIntegrand<'a> {
    rho0: &'a DensityMatrix,
    cfg: ChannelConfig,
    norm: NormKind,
    argument: GeneratorArgument,
    /// 1 − tr ρ0² when the mixed-state factor applies.
    mixed_deficit: Option<f64>,
    /// ‖D(ρ0)‖ for the initial-state argument, where L_t(ρ0) = γ(t)·D(ρ0).
    initial_norm: f64,
}

impl<'a> SpeedIntegrand<'a> {
    pub(crate) fn new(rho0: &'a DensityMatrix, cfg: &ChannelConfig, req: &QslRequest) -> Self {
        let norm = match req.method {
            Method::RelativePurity => NormKind::Hs,
            Method::Bures => req.norm,
        };
        let deficit = rho0.purity_deficit();
        let mixed_deficit = (req.method == Method::Bures && req.use_mixed_factor && deficit > 0.0).then_some(deficit);
        let initial_norm = match req.generator_argument {
            GeneratorArgument::Initial => norm_of(&dissipator(rho0.matrix(), cfg.kind).hermitian_part(), norm),
            GeneratorArgument::Evolved => 0.0,
        };
        Self { rho0, cfg: *cfg, norm, argument: req.generator_argument, mixed_deficit, initial_norm }
    }

    pub(crate) fn eval(&self, t: f64) -> Result<f64> {
        let needs_state = self.mixed_deficit.is_some();
        let rho_t = if needs_state { Some(evolve_nqubit(self.rho0, &self.cfg, t)?.rho_t) } else { None };
        let factor = match (self.mixed_deficit, rho_t) {
            (Some(def0), Some(rt)) => {
                // Unsnapped: near a zero of p the damped state approaches a pure state smoothly.
                let deft = rt.raw_purity_deficit();
                if deft <= 0.0 {
                    return Err(crate::error::Error::MixedFactorSingular { t });
                }
                1.0 + (def0 / deft).sqrt()
            }
            _ => 1.0,
        };
        let speed = match self.argument {
            GeneratorArgument::Initial => {
                if self.initial_norm == 0.0 {
                    0.0
                } else {
                    decoherence_rate(&self.cfg, t)?.abs() * self.initial_norm
                }
            }
            GeneratorArgument::Evolved => norm_of(&evolved_derivative(self.rho0, &self.cfg, t)?, self.norm),
        };
        Ok(speed * factor)
    }

    /// ∫_a^b of the speed, split at the rate poles. `scale` as in `integrate_with_poles`.
    pub(crate) fn integrate(&self, req: &QslRequest, a: f64, b: f64, panels: usize, scale: Option<f64>) -> Result<Speed> {
        let poles = decoherence_zeros(&self.cfg, b);
        integrate_with_poles(&Self::quadrature(req, panels), a, b, &poles, scale, |t| self.eval(t))
    }

    /// Unrefined estimate of the same integral.
    pub(crate) fn rough(&self, req: &QslRequest, a: f64, b: f64, panels: usize) -> Result<f64> {
        let poles = decoherence_zeros(&self.cfg, b);
        rough_integral(&Self::quadrature(req, panels), a, b, &poles, |t| self.eval(t))
    }

    fn quadrature(req: &QslRequest, panels: usize) -> crate::quadrature::AdaptiveSimpson {
        crate::quadrature::AdaptiveSimpson { initial_panels: panels.max(2), ..req.quadrature() }
    }
}

/// Numerator of the bound and the angle, from ρ0 and ρτ.
pub(crate) fn numerator(rho0: &DensityMatrix, rho_tau: &DensityMatrix, req: &QslRequest) -> Result<(f64, f64, (f64, bool))> {
    match req.method {
        Method::RelativePurity => {
            let p = relative_purity(rho0, rho_tau)?;
            let (theta, clamped) = purity_angle(p);
            Ok((theta, 4.0 * theta * theta * rho0.purity() / (PI * PI), (p, clamped)))
        }
        Method::Bures => {
            let f = match req.fidelity {
                FidelityRoute::Superfidelity => superfidelity_bound(rho0, rho_tau)?,
                FidelityRoute::Uhlmann => bures_fidelity(rho0, rho_tau)?,
            };
            let fc = f.clamp(0.0, 1.0);
            Ok((fc.sqrt().acos(), 1.0 - fc, (f, (f - fc).abs() > 1e-12)))
        }
    }
}

/// Dispatches on `req.method`.
pub fn qsl(rho0: &DensityMatrix, cfg: &ChannelConfig, req: &QslRequest) -> Result<QslResult> {
    req.validate()?;
    let integrand = SpeedIntegrand::new(rho0, cfg, req);
    let speed = integrand.integrate(req, 0.0, req.tau, req.grid_points, None)?;
    let rho_tau = evolve_nqubit(rho0, cfg, req.tau)?.rho_t;
    let (angle, num, overlap) = numerator(rho0, &rho_tau, req)?;
    assemble(angle, num, req.tau, &speed, overlap)
}

/// τ_QSL = 4θ² tr ρ0² / (π² Λ_τ) with θ = arccos of the relative purity and
/// Λ_τ the time-averaged Hilbert–Schmidt norm of the generator.
pub fn qsl_relative_purity(rho0: &DensityMatrix, cfg: &ChannelConfig, req: &QslRequest) -> Result<QslResult> {
    qsl(rho0, cfg, &QslRequest { method: Method::RelativePurity, ..*req })
}

/// τ_QSL = sin²B(ρ0, ρτ) / Λ_τ with Λ_τ the time-averaged norm of L(ρ_t).
pub fn qsl_bures(rho0: &DensityMatrix, cfg: &ChannelConfig, req: &QslRequest) -> Result<QslResult> {
    qsl(rho0, cfg, &QslRequest { method: Method::Bures, ..*req })
}
