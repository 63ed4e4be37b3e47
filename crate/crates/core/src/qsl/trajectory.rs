use rayon::prelude::*;

use crate::channels::{evolve_nqubit, ChannelConfig};
use crate::error::{Error, Result};
use crate::hermitian::DensityMatrix;
use crate::quadrature::Integral;
use crate::states::{l1_coherence, linear_entropy, m_cl};

use super::pipeline::{numerator, SpeedIntegrand};
use super::{assemble, QslRequest, Speed};

/// One sample of a parametric trajectory: the bound at driving time `t` and the
/// coherence and mixedness of ρ_t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub tau_qsl: f64,
    pub cl1: f64,
    pub s_l: f64,
    pub m_cl: f64,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if let Some(&first) = grid.first() {
        if !(first > 0.0) {
            return Err(Error::InvalidParameter(format!("trajectory grid must start above 0, got {first}")));
        }
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("trajectory grid must be strictly increasing".into()));
    }
    Ok(())
}

/// τ_QSL(τ_i) for every driving time τ_i in `grid`, sharing one cumulative time integral.
/// `req.tau` is ignored; segments are integrated in parallel and summed in grid order.
pub fn trajectory(
    rho0: &DensityMatrix,
    cfg: &ChannelConfig,
    req: &QslRequest,
    grid: &[f64],
) -> Result<Vec<TrajectoryPoint>> {
    check_grid(grid)?;
    let Some(&last) = grid.last() else {
        return Ok(Vec::new());
    };
    req.with_tau(last).validate()?;
    let integrand = SpeedIntegrand::new(rho0, cfg, req);
    let bounds = |i: usize| {
        let a = if i == 0 { 0.0 } else { grid[i - 1] };
        let b = grid[i];
        (a, b, (req.grid_points as f64 * (b - a) / last).ceil() as usize)
    };
    // Each segment's error is measured against the cumulative integral up to its end, so a
    // segment where the speed has all but vanished is not refined for its own sake.
    let rough: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (a, b, panels) = bounds(i);
            integrand.rough(req, a, b, panels)
        })
        .collect::<Result<_>>()?;
    let scales: Vec<f64> = rough
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r.abs();
            Some(*acc)
        })
        .collect();
    let segments: Vec<Speed> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (a, b, panels) = bounds(i);
            // Spread over [0, b] rather than [a, b] so the segment errors add up to the target.
            integrand.integrate(req, a, b, panels, Some(scales[i] * (b - a) / b))
        })
        .collect::<Result<_>>()?;

    let mut cumulative = Vec::with_capacity(grid.len());
    let mut acc = Integral { value: 0.0, error_estimate: 0.0, panels: 0, evaluations: 0, converged: true };
    let mut diverged: Option<f64> = None;
    for s in &segments {
        match (diverged, s) {
            (Some(at), _) => cumulative.push(Speed::Divergent { at }),
            (None, Speed::Divergent { at }) => {
                diverged = Some(*at);
                cumulative.push(Speed::Divergent { at: *at });
            }
            (None, Speed::Finite(part)) => {
                acc.value += part.value;
                acc.error_estimate += part.error_estimate;
                acc.panels += part.panels;
                acc.evaluations += part.evaluations;
                acc.converged &= part.converged;
                cumulative.push(Speed::Finite(acc));
            }
        }
    }

    grid.par_iter()
        .zip(cumulative.par_iter())
        .map(|(&tau, speed)| {
            let rho_tau = evolve_nqubit(rho0, cfg, tau)?.rho_t;
            let (angle, num, overlap) = numerator(rho0, &rho_tau, &req.with_tau(tau))?;
            let result = assemble(angle, num, tau, speed, overlap)?;
            Ok(TrajectoryPoint {
                t: tau,
                tau_qsl: result.tau_qsl,
                cl1: l1_coherence(&rho_tau),
                s_l: linear_entropy(&rho_tau),
                m_cl: m_cl(&rho_tau),
            })
        })
        .collect()
}

/// Trajectory over a grid of dimensionless κτ at a fixed physical driving time.
///
/// Each grid value T = κτ fixes κ = T/`drive_time` with the rate ratios λ/κ and c/κ
/// of `cfg` held constant, so the reported bound is τ_QSL = τ_QSL(κ = 1, T)·drive_time/T
/// and never exceeds `drive_time` for a valid bound. The `t` field holds κτ.
pub fn trajectory_kappa_tau(
    rho0: &DensityMatrix,
    cfg: &ChannelConfig,
    req: &QslRequest,
    kappa_tau: &[f64],
    drive_time: f64,
) -> Result<Vec<TrajectoryPoint>> {
    if !(drive_time > 0.0 && drive_time.is_finite()) {
        return Err(Error::InvalidParameter(format!("driving time must be positive, got {drive_time}")));
    }
    let unit = cfg.with_kappa(1.0)?;
    let mut points = trajectory(rho0, &unit, req, kappa_tau)?;
    for p in &mut points {
        p.tau_qsl *= drive_time / p.t;
    }
    Ok(points)
}
