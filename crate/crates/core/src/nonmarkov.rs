//! Non-Markovianity as the time-averaged distance of the generator from the
//! closest semigroup generator, and the intervals where the rate turns negative.

use crate::channels::{decoherence_function, decoherence_rate, decoherence_zeros, ChannelConfig, ChannelKind};
use crate::error::{Error, Result};
use crate::hermitian::{norms, ComplexMatrix, C64};

/// Half-width of the neighbourhood excluded around each pole of the rate.
pub const POLE_EXCLUSION: f64 = 1e-6;
const BISECTION_TOL: f64 = 1e-9;
const MINIMISER_TOL: f64 = 1e-10;
const SCAN_POINTS: usize = 4000;

#[derive(Debug, Clone, PartialEq)]
pub struct NonMarkovReport {
    /// Infinite when the rate has a pole inside the horizon.
    pub n_l: f64,
    pub gamma_star: f64,
    pub negative_intervals: Vec<(f64, f64)>,
    /// Trace norm of the fixed operator that multiplies γ − γ*.
    pub weight: f64,
    /// Rate poles inside the horizon, each excluded with a ±1e-6 neighbourhood.
    pub poles: Vec<f64>,
}

/// ‖ |φ+⟩⟨φ+| − |φ−⟩⟨φ−| ‖_tr for dephasing and 1 + √2 for amplitude damping.
pub fn generator_weight(kind: ChannelKind) -> f64 {
    match kind {
        ChannelKind::Nmad => 1.0 + std::f64::consts::SQRT_2,
        _ => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let z = C64::new(0.0, 0.0);
            let plus = [C64::new(h, 0.0), z, z, C64::new(h, 0.0)];
            let minus = [C64::new(h, 0.0), z, z, C64::new(-h, 0.0)];
            norms(&(&ComplexMatrix::projector(&plus) - &ComplexMatrix::projector(&minus))).tr
        }
    }
}

/// Open pieces of [0, horizon] with the pole neighbourhoods removed.
fn pieces(horizon: f64, poles: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start = 0.0;
    for &t0 in poles {
        let end = (t0 - POLE_EXCLUSION).max(start);
        if end > start {
            out.push((start, end));
        }
        start = t0 + POLE_EXCLUSION;
    }
    if horizon > start {
        out.push((start, horizon));
    }
    out
}

/// Temporal self-similarity measure (w/T) min_{γ* ≥ 0} ∫_0^T |γ(t) − γ*| dt for an arbitrary rate
/// with antiderivative `cumulative` (any constant offset). Poles make the measure infinite;
/// γ* is still located with their neighbourhoods excluded.
///
/// For a candidate γ* the integral is evaluated exactly from `cumulative` between the
/// crossings γ(t) = γ*, which are bracketed on a fixed sample grid and refined by bisection.
/// The minimiser is the time-median of γ, clamped at zero.
pub fn self_similarity_measure<F, G>(
    rate: F,
    cumulative: G,
    horizon: f64,
    weight: f64,
    poles: &[f64],
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
    G: Fn(f64) -> f64,
{
    let parts = pieces(horizon, poles);
    let samples: Vec<Vec<(f64, f64)>> = parts
        .iter()
        .map(|&(a, b)| {
            let n = ((SCAN_POINTS as f64 * (b - a) / horizon).ceil() as usize).max(16);
            (0..=n)
                .map(|i| {
                    let t = a + (b - a) * i as f64 / n as f64;
                    rate(t).map(|g| (t, g))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(_, g) in samples.iter().flatten() {
        lo = lo.min(g);
        hi = hi.max(g);
    }
    let (lo, hi) = (lo.max(0.0), hi.max(0.0));

    // Splits each piece at the crossings γ(t) = g.
    let crossings = |g: f64| -> Result<Vec<Vec<f64>>> {
        samples
            .iter()
            .map(|piece| {
                let mut cuts = vec![piece[0].0];
                for w in piece.windows(2) {
                    let ((t0, g0), (t1, g1)) = (w[0], w[1]);
                    if (g0 < g) != (g1 < g) {
                        cuts.push(bisect(&|t| rate(t).map(|x| x - g), t0, t1, 1e-14 * t1.max(1.0))?);
                    }
                }
                cuts.push(piece[piece.len() - 1].0);
                Ok(cuts)
            })
            .collect()
    };
    let objective = |g: f64| -> Result<f64> {
        let mut total = 0.0;
        for cuts in crossings(g)? {
            for w in cuts.windows(2) {
                total += (cumulative(w[1]) - cumulative(w[0]) - g * (w[1] - w[0])).abs();
            }
        }
        Ok(total)
    };
    // Subgradient of the objective: time spent below g minus time spent above.
    let slope = |g: f64| -> Result<f64> {
        let mut total = 0.0;
        for cuts in crossings(g)? {
            for w in cuts.windows(2) {
                let mid = rate(0.5 * (w[0] + w[1]))?;
                total += if mid < g { w[1] - w[0] } else { w[0] - w[1] };
            }
        }
        Ok(total)
    };

    // The objective is convex, so its minimiser is where the subgradient changes sign.
    let (mut a, mut b) = (lo, hi);
    if slope(lo)? >= 0.0 {
        b = lo;
    }
    while b - a > MINIMISER_TOL * (1.0 + b.abs()) {
        let m = 0.5 * (a + b);
        if slope(m)? < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let gamma_star = 0.5 * (a + b);
    let n_l = if poles.is_empty() { weight * objective(gamma_star)? / horizon } else { f64::INFINITY };
    Ok((n_l, gamma_star))
}

pub fn nonmarkovianity(cfg: &ChannelConfig, horizon: f64) -> Result<NonMarkovReport> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
    }
    let poles = decoherence_zeros(cfg, horizon);
    let weight = generator_weight(cfg.kind);
    // γ = −c ṗ/p integrates to −c ln|p|.
    let c = if cfg.kind.is_dephasing() { 0.5 } else { 2.0 };
    let cumulative = |t: f64| -c * decoherence_function(cfg, t).abs().ln();
    let (n_l, gamma_star) = self_similarity_measure(|t| decoherence_rate(cfg, t), cumulative, horizon, weight, &poles)?;
    Ok(NonMarkovReport { n_l, gamma_star, negative_intervals: gamma_negative_intervals(cfg, horizon)?, weight, poles })
}

/// Root of f in [a, b] given a sign change, to within `tol`.
fn bisect<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let fa_negative = f(a)? < 0.0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if (f(m)? < 0.0) == fa_negative {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Sorted disjoint intervals of (0, horizon] on which γ(t) < 0. An interval that opens or
/// closes at a pole of the rate reports the pole itself as its endpoint.
pub fn gamma_negative_intervals(cfg: &ChannelConfig, horizon: f64) -> Result<Vec<(f64, f64)>> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
    }
    let poles = decoherence_zeros(cfg, horizon);
    let rate = |t: f64| decoherence_rate(cfg, t);
    let mut out: Vec<(f64, f64)> = Vec::new();
    let parts = pieces(horizon, &poles);
    for (idx, &(a, b)) in parts.iter().enumerate() {
        let left_edge = if idx == 0 && a == 0.0 { 0.0 } else { a - POLE_EXCLUSION };
        let right_edge = if b < horizon { b + POLE_EXCLUSION } else { b };
        let n = ((SCAN_POINTS as f64 * (b - a) / horizon).ceil() as usize).max(8);
        let mut open: Option<f64> = None;
        let mut prev_t = a;
        let mut prev_neg = rate(a)? < 0.0;
        if prev_neg {
            open = Some(left_edge);
        }
        for i in 1..=n {
            let t = a + (b - a) * i as f64 / n as f64;
            let neg = rate(t)? < 0.0;
            if neg != prev_neg {
                let root = bisect(&rate, prev_t, t, BISECTION_TOL)?;
                if neg {
                    open = Some(root);
                } else if let Some(s) = open.take() {
                    out.push((s, root));
                }
            }
            prev_t = t;
            prev_neg = neg;
        }
        if let Some(s) = open {
            out.push((s, right_edge));
        }
    }
    // Merge intervals that continue through a pole.
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for iv in out {
        match merged.last_mut() {
            Some(last) if (iv.0 - last.1).abs() < 1e-12 => last.1 = iv.1,
            _ => merged.push(iv),
        }
    }
    Ok(merged)
}
