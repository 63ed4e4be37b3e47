//! The invariant suite behind `qsl validate`.
//!
//! Each property is a named check over seeded random or fixed inputs. The
//! `pt-sign` fault flips the sign of p_t (leaving ṗ_t alone) wherever the suite
//! reads the decoherence function itself; `generator-consistency` must catch it.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsl_core::channels::{
    apply_local_kraus, decoherence_pair, decoherence_rate, dissipator, evolve_nqubit, generator, kraus_for,
    ChannelConfig,
};
use qsl_core::hermitian::{
    bures_fidelity, eig_hermitian, norms, superfidelity_bound, ComplexMatrix, DensityMatrix, C64,
};
use qsl_core::nonmarkov::gamma_negative_intervals;
use qsl_core::qsl::{
    mcl_closed_form, qsl, qsl_belldiag_bures, qsl_belldiag_rp, qsl_dephasing_qubit_bures, qsl_dephasing_qubit_rp,
    qsl_nmad_qubit_bures, qsl_nmad_qubit_rp, trajectory_kappa_tau, ClosedForm, MclFamily, Method, NormKind,
    QslRequest,
};
use qsl_core::states::{
    bell_state, bloch_state, ghz_state, m_cl, max_coherent_entangled, werner, BellDiagonalState, BellState,
    BlochVector, GhzIndex, MixingParameter,
};

use crate::args::{ConfigFile, ValidateArgs};
use crate::error::CliError;
use crate::format::fmt_g;
use crate::Output;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    PtSign,
}

impl std::str::FromStr for Fault {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "pt-sign" => Ok(Fault::PtSign),
            other => Err(CliError::Usage(format!("unknown fault `{other}` (known: pt-sign)"))),
        }
    }
}

impl Fault {
    pub fn name(self) -> &'static str {
        match self {
            Fault::PtSign => "pt-sign",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub fault: Option<Fault>,
    pub seed: u64,
}

impl Default for Context {
    fn default() -> Self {
        Self { fault: None, seed: 0x5eed }
    }
}

impl Context {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    /// (p_t, ṗ_t) as seen by the suite, with the injected fault applied.
    fn pair(&self, cfg: &ChannelConfig, t: f64) -> (f64, f64) {
        let (p, dp) = decoherence_pair(cfg, t);
        match self.fault {
            Some(Fault::PtSign) => (-p, dp),
            None => (p, dp),
        }
    }

    fn rate(&self, cfg: &ChannelConfig, t: f64) -> f64 {
        let (p, dp) = self.pair(cfg, t);
        let c = if cfg.kind.is_dephasing() { 0.5 } else { 2.0 };
        -c * dp / p
    }

    fn evolve(&self, rho0: &ComplexMatrix, cfg: &ChannelConfig, t: f64) -> ComplexMatrix {
        apply_local_kraus(rho0, &kraus_for(cfg.kind, self.pair(cfg, t).0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn check(passed: bool, detail: String) -> Self {
        Self { passed, detail }
    }
}

pub struct Property {
    pub name: &'static str,
    pub about: &'static str,
    pub check: fn(&Context) -> Outcome,
}

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "eigen-reconstruction", about: "V diag(λ) V† reproduces random Hermitian matrices", check: eigen_reconstruction },
        Property { name: "norms-ordering", about: "‖·‖op ≤ ‖·‖hs ≤ ‖·‖tr on random Hermitian matrices", check: norms_ordering },
        Property { name: "norms-qsl-hierarchy", about: "Bures τ_QSL(op) ≥ τ_QSL(hs) ≥ τ_QSL(tr) on 100 random triples", check: norms_qsl_hierarchy },
        Property { name: "fidelity-qubit-equality", about: "superfidelity equals Uhlmann fidelity on 1000 qubit pairs", check: fidelity_qubit_equality },
        Property { name: "kraus-completeness", about: "Σ E†E = I to 1e-12 at 50 times per channel", check: kraus_completeness },
        Property { name: "evolution-physical", about: "evolved states are Hermitian, unit-trace and PSD", check: evolution_physical },
        Property { name: "generator-consistency", about: "‖L_t(ρ_t) − dρ_t/dt (finite difference)‖hs ≤ 1e-6 at 50 times per channel", check: generator_consistency },
        Property { name: "mcl-bound", about: "M_Cl ≤ 1 + 1e-9 on 10^4 random evolved states", check: mcl_bound },
        Property { name: "mcl-dephasing-invariance", about: "dephasing keeps a qubit's M_Cl at 1 − η_z²", check: mcl_dephasing_invariance },
        Property { name: "mcl-closed-forms", about: "closed-form M_Cl of qubits and Bell-diagonal states equals the direct measure", check: mcl_closed_forms },
        Property { name: "closed-form-equivalence", about: "all eight closed forms match the numeric pipeline to 1e-5 over κτ ∈ [0.05, 5]", check: closed_form_equivalence },
        Property { name: "bures-bound", about: "Bures op-norm τ_QSL never exceeds τ", check: bures_bound },
        Property { name: "negative-rate-signatures", about: "RTN (c/κ = 0.6) and NMAD (λ = 0.1κ) have negative-rate intervals, OUN none", check: negative_rate_signatures },
        Property { name: "nmad-swings", about: "Bures τ_QSL(κτ) of |χ+⟩ under NMAD has an interior extremum", check: nmad_swings },
    ]
}

pub fn property(name: &str) -> Option<Property> {
    properties().into_iter().find(|p| p.name == name)
}

/// Runs every property whose name contains `filter`, in suite order.
pub fn run_suite(filter: Option<&str>, ctx: &Context) -> Vec<(&'static str, Outcome)> {
    properties()
        .into_iter()
        .filter(|p| filter.map_or(true, |f| p.name.contains(f)))
        .map(|p| (p.name, (p.check)(ctx)))
        .collect()
}

pub fn command(args: &ValidateArgs, config: &ConfigFile) -> Result<Output, CliError> {
    let mut s = String::new();
    if args.list {
        for p in properties() {
            let _ = writeln!(s, "{:<26} {}", p.name, p.about);
        }
        return Ok(Output { files: Vec::new(), stdout: s });
    }
    let fault = args.inject_fault.as_deref().map(str::parse::<Fault>).transpose()?;
    let filter = args.filter.clone().or_else(|| config.filter.clone());
    let results = run_suite(filter.as_deref(), &Context { fault, ..Context::default() });
    if results.is_empty() {
        return Err(CliError::Usage(format!("--filter `{}` matches no property", filter.unwrap_or_default())));
    }
    if let Some(f) = fault {
        let _ = writeln!(s, "injected fault: {}", f.name());
    }
    let mut failed = 0;
    for (name, outcome) in &results {
        failed += usize::from(!outcome.passed);
        let _ = writeln!(s, "{} {name}: {}", if outcome.passed { "PASS" } else { "FAIL" }, outcome.detail);
    }
    let _ = writeln!(s, "{} passed, {failed} failed", results.len() - failed);
    print!("{s}");
    if failed > 0 {
        return Err(CliError::ValidationFailed(failed));
    }
    Ok(Output::default())
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    random_matrix(rng, dim).hermitian_part()
}

/// G G† / tr(G G†), optionally with a rank-one G for pure states.
fn random_density(rng: &mut ChaCha8Rng, n_qubits: usize) -> DensityMatrix {
    let d = 1 << n_qubits;
    let g = if rng.gen_bool(0.25) {
        let v: Vec<C64> = (0..d).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        ComplexMatrix::projector(&v)
    } else {
        let g = random_matrix(rng, d);
        &g * &g.adjoint()
    };
    let tr = g.trace().re;
    DensityMatrix::new(g.scale_real(1.0 / tr).hermitian_part()).expect("G G† is a density matrix")
}

fn random_channel(rng: &mut ChaCha8Rng) -> ChannelConfig {
    let kappa = rng.gen_range(0.5..2.0);
    match rng.gen_range(0..3) {
        0 => ChannelConfig::oun(kappa, kappa * rng.gen_range(0.05..2.0)),
        1 => ChannelConfig::rtn(kappa, kappa * rng.gen_range(0.1..1.5)),
        _ => ChannelConfig::nmad(kappa, kappa * rng.gen_range(0.05..3.0)),
    }
    .expect("positive rates")
}

fn caption_channels() -> [ChannelConfig; 3] {
    [
        ChannelConfig::oun(1.0, 0.1).unwrap(),
        ChannelConfig::rtn(1.0, 0.6).unwrap(),
        ChannelConfig::nmad(1.0, 0.1).unwrap(),
    ]
}

fn eigen_reconstruction(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(1);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let m = random_hermitian(&mut rng, 2 << (i % 4));
        match eig_hermitian(&m) {
            Ok(e) => worst = worst.max(e.reconstruct().max_abs_diff(&m)),
            Err(e) => return Outcome::check(false, format!("eigensolver failed: {e}")),
        }
    }
    Outcome::check(worst <= 1e-10, format!("max reconstruction error {}", fmt_g(worst)))
}

fn norms_ordering(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(2);
    let mut violations = 0;
    for i in 0..200 {
        let n = norms(&random_hermitian(&mut rng, 2 << (i % 4)));
        let slack = 1e-12 * n.tr;
        violations += usize::from(!(n.op <= n.hs + slack && n.hs <= n.tr + slack));
    }
    Outcome::check(violations == 0, format!("{violations} violations in 200 matrices"))
}

fn norms_qsl_hierarchy(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(3);
    let mut violations = Vec::new();
    for i in 0..100 {
        let rho0 = random_density(&mut rng, 1 + i % 2);
        let cfg = random_channel(&mut rng);
        let tau = rng.gen_range(0.1..5.0);
        let t = |norm| qsl(&rho0, &cfg, &QslRequest::bures(tau, norm)).map(|r| r.tau_qsl);
        match (t(NormKind::Op), t(NormKind::Hs), t(NormKind::Tr)) {
            (Ok(op), Ok(hs), Ok(tr)) => {
                let slack = 1e-12 * tau;
                if !(op + slack >= hs && hs + slack >= tr) {
                    violations.push(format!("#{i} {cfg} tau={}: {op} {hs} {tr}", fmt_g(tau)));
                }
            }
            (a, b, c) => {
                let err = [a, b, c].into_iter().find_map(Result::err).expect("one failed");
                violations.push(format!("#{i} {cfg} tau={}: {err}", fmt_g(tau)));
            }
        }
    }
    let detail = match violations.first() {
        None => "0 violations in 100 triples".to_string(),
        Some(first) => format!("{} violations, first {first}", violations.len()),
    };
    Outcome::check(violations.is_empty(), detail)
}

fn fidelity_qubit_equality(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a = random_density(&mut rng, 1);
        let b = random_density(&mut rng, 1);
        match (superfidelity_bound(&a, &b), bures_fidelity(&a, &b)) {
            (Ok(s), Ok(f)) => worst = worst.max((s - f).abs()),
            (Err(e), _) | (_, Err(e)) => return Outcome::check(false, e.to_string()),
        }
    }
    Outcome::check(worst <= 1e-10, format!("max |superfidelity − fidelity| {}", fmt_g(worst)))
}

fn kraus_completeness(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(5);
    let mut worst = 0.0f64;
    for cfg in caption_channels() {
        for _ in 0..50 {
            let t = rng.gen_range(0.0..20.0);
            let ks = kraus_for(cfg.kind, ctx.pair(&cfg, t).0);
            let mut sum = ComplexMatrix::zeros(2);
            for k in &ks {
                sum = &sum + &(&k.adjoint() * k);
            }
            worst = worst.max(sum.max_abs_diff(&ComplexMatrix::identity(2)));
        }
    }
    Outcome::check(worst <= 1e-12, format!("max |Σ E†E − I| {}", fmt_g(worst)))
}

fn evolution_physical(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(6);
    let mut worst_trace = 0.0f64;
    let mut min_eig = f64::INFINITY;
    let mut worst_herm = 0.0f64;
    for i in 0..200 {
        let rho0 = random_density(&mut rng, 1 + i % 3);
        let cfg = random_channel(&mut rng);
        let t = rng.gen_range(0.0..20.0);
        let rt = ctx.evolve(rho0.matrix(), &cfg, t);
        worst_trace = worst_trace.max((rt.trace() - C64::new(1.0, 0.0)).norm());
        worst_herm = worst_herm.max(rt.hermitian_defect());
        match eig_hermitian(&rt.hermitian_part()) {
            Ok(e) => min_eig = min_eig.min(e.values.iter().cloned().fold(f64::INFINITY, f64::min)),
            Err(e) => return Outcome::check(false, e.to_string()),
        }
    }
    Outcome::check(
        worst_trace <= 1e-12 && worst_herm <= 1e-12 && min_eig >= -1e-12,
        format!(
            "max |tr − 1| {}, max Hermitian defect {}, min eigenvalue {}",
            fmt_g(worst_trace),
            fmt_g(worst_herm),
            fmt_g(min_eig)
        ),
    )
}

fn generator_consistency(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(7);
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut core_mismatch = 0.0f64;
    for cfg in caption_channels() {
        let mut done = 0;
        while done < 50 {
            let t = rng.gen_range(0.05..20.0);
            // Stay clear of the poles of γ, where the finite difference straddles a zero of p.
            if decoherence_pair(&cfg, t).0.abs() < 1e-3 {
                continue;
            }
            done += 1;
            let rho0 = random_density(&mut rng, 1 + done % 2);
            let rt = ctx.evolve(rho0.matrix(), &cfg, t);
            let fd = (&ctx.evolve(rho0.matrix(), &cfg, t + h) - &ctx.evolve(rho0.matrix(), &cfg, t - h)).scale_real(0.5 / h);
            let l = dissipator(&rt, cfg.kind).scale_real(ctx.rate(&cfg, t)).hermitian_part();
            let err = norms(&(&l - &fd)).hs;
            if err > worst {
                worst = err;
                worst_at = format!("{cfg} t={}", fmt_g(t));
            }
            if ctx.fault.is_none() {
                // The suite's rate and the library's generator must coincide.
                let rt = DensityMatrix::new(rt.clone());
                let core = rt.and_then(|r| generator(&r, &cfg, t));
                match core {
                    Ok(g) => core_mismatch = core_mismatch.max(norms(&(&g - &l)).hs / (1.0 + norms(&l).hs)),
                    Err(e) => return Outcome::check(false, format!("{cfg} t={}: {e}", fmt_g(t))),
                }
                let rate = decoherence_rate(&cfg, t).unwrap_or(f64::NAN);
                core_mismatch = core_mismatch.max((rate - ctx.rate(&cfg, t)).abs() / (1.0 + rate.abs()));
            }
        }
    }
    Outcome::check(
        worst <= 1e-6 && core_mismatch <= 1e-12,
        format!("max ‖L − FD‖hs {} at {worst_at}; library mismatch {}", fmt_g(worst), fmt_g(core_mismatch)),
    )
}

fn mcl_bound(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(8);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..10_000 {
        let rho0 = random_density(&mut rng, 1 + i % 3);
        let cfg = random_channel(&mut rng);
        let t = rng.gen_range(0.0..20.0);
        match evolve_nqubit(&rho0, &cfg, t) {
            Ok(e) => worst = worst.max(m_cl(&e.rho_t)),
            Err(e) => return Outcome::check(false, e.to_string()),
        }
    }
    Outcome::check(worst <= 1.0 + 1e-9, format!("max M_Cl {}", fmt_g(worst)))
}

fn mcl_dephasing_invariance(ctx: &Context) -> Outcome {
    let mut rng = ctx.rng(9);
    let mut worst = 0.0f64;
    for cfg in &caption_channels()[..2] {
        for _ in 0..20 {
            let eta = loop {
                let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                if let Ok(eta) = BlochVector::new(v[0], v[1], v[2]) {
                    break eta;
                }
            };
            let rho0 = bloch_state(eta).expect("inside the ball");
            for i in 0..=200 {
                let t = 0.1 * i as f64;
                let rt = evolve_nqubit(&rho0, cfg, t).expect("qubit").rho_t;
                worst = worst.max((m_cl(&rt) - (1.0 - eta.eta_z * eta.eta_z)).abs());
            }
        }
    }
    Outcome::check(worst <= 1e-9, format!("max |M_Cl − (1 − η_z²)| {}", fmt_g(worst)))
}

fn mcl_closed_forms(_: &Context) -> Outcome {
    let nmad = ChannelConfig::nmad(1.0, 0.1).unwrap();
    let rtn = ChannelConfig::rtn(1.0, 0.6).unwrap();
    let mut worst = 0.0f64;
    let mut record = |family: MclFamily, cfg: &ChannelConfig, rho0: &DensityMatrix| -> Result<(), String> {
        for i in 0..=200 {
            let t = 0.1 * i as f64;
            let closed = mcl_closed_form(family, cfg, t).map_err(|e| e.to_string())?;
            let direct = m_cl(&evolve_nqubit(rho0, cfg, t).map_err(|e| e.to_string())?.rho_t);
            worst = worst.max((closed - direct).abs());
        }
        Ok(())
    };
    let mut checks: Vec<Result<(), String>> = Vec::new();
    for &(c, z) in &[(1.0, 0.0), (0.6, 0.3), (0.2, -0.9)] {
        let rho0 = bloch_state(BlochVector::new(c, 0.0, z).unwrap()).unwrap();
        checks.push(record(MclFamily::QubitNmad { eta_z: z }, &nmad, &rho0));
        checks.push(record(MclFamily::QubitDephasing { eta_z: z }, &rtn, &rho0));
    }
    for k in [BellState::PhiPlus.triple(), BellState::PsiMinus.triple(), BellDiagonalState::new(0.5, -0.3, 0.2).unwrap()] {
        let rho0 = k.density_matrix().unwrap();
        checks.push(record(MclFamily::BellNmad(k), &nmad, &rho0));
        checks.push(record(MclFamily::BellDephasing(k), &rtn, &rho0));
    }
    if let Some(Err(e)) = checks.into_iter().find(Result::is_err) {
        return Outcome::check(false, e);
    }
    Outcome::check(worst <= 1e-9, format!("max |closed − direct| {}", fmt_g(worst)))
}

/// Closed form and pipeline values of one form, state and time.
pub fn closed_form_pair(
    form: ClosedForm,
    rho0: &DensityMatrix,
    qubit: Option<BlochVector>,
    bell: Option<BellDiagonalState>,
    cfg: &ChannelConfig,
    tau: f64,
) -> qsl_core::Result<(f64, f64)> {
    let closed = match (form, qubit, bell) {
        (ClosedForm::DephasingQubitRp, Some(e), _) => qsl_dephasing_qubit_rp(e.coherence(), e.eta_z, cfg, tau),
        (ClosedForm::NmadQubitRp, Some(e), _) => qsl_nmad_qubit_rp(e.coherence(), e.eta_z, cfg, tau),
        (ClosedForm::DephasingQubitBures, Some(e), _) => qsl_dephasing_qubit_bures(e.coherence(), e.eta_z, cfg, tau),
        (ClosedForm::NmadQubitBures, Some(e), _) => qsl_nmad_qubit_bures(e.coherence(), e.eta_z, cfg, tau),
        (f, _, Some(k)) if f.method() == Method::RelativePurity => qsl_belldiag_rp(&k, cfg, tau),
        (_, _, Some(k)) => qsl_belldiag_bures(&k, cfg, tau),
        _ => return Err(qsl_core::Error::InvalidParameter(format!("no state given for {}", form.name()))),
    }?;
    let pipe = qsl(rho0, cfg, &form.pipeline_request(tau))?;
    Ok((closed.tau_qsl, pipe.tau_qsl))
}

/// κτ grid of the equivalence check.
pub fn equivalence_grid() -> Vec<f64> {
    (0..=20).map(|i| 0.05 + (5.0 - 0.05) * i as f64 / 20.0).collect()
}

fn closed_form_equivalence(_: &Context) -> Outcome {
    let qubits = [BlochVector::new(1.0, 0.0, 0.0).unwrap(), BlochVector::new(0.5, 0.0, 0.0).unwrap(), BlochVector::new(0.6, 0.0, 0.3).unwrap()];
    let bells = [BellState::PhiPlus.triple(), BellState::PsiPlus.triple(), BellDiagonalState::new(0.5, -0.3, 0.2).unwrap()];
    let [oun, rtn, nmad] = caption_channels();
    let mut worst = 0.0f64;
    let mut failures: Vec<String> = Vec::new();
    for form in ClosedForm::ALL {
        let channels = if form.is_dephasing() { vec![oun, rtn] } else { vec![nmad] };
        let mut form_failed = false;
        for cfg in &channels {
            for tau in equivalence_grid() {
                let states: Vec<(DensityMatrix, Option<BlochVector>, Option<BellDiagonalState>)> = if form.is_two_qubit() {
                    bells.iter().map(|k| (k.density_matrix().unwrap(), None, Some(*k))).collect()
                } else {
                    qubits.iter().map(|e| (bloch_state(*e).unwrap(), Some(*e), None)).collect()
                };
                for (rho0, q, b) in &states {
                    match closed_form_pair(form, rho0, *q, *b, cfg, tau) {
                        Ok((c, p)) => {
                            let rel = (c - p).abs() / c.abs().max(p.abs()).max(1e-300);
                            let err = if c == p { 0.0 } else { rel };
                            worst = worst.max(err);
                            form_failed |= err > 1e-5;
                        }
                        Err(e) => {
                            form_failed = true;
                            failures.push(format!("{} {cfg} tau={}: {e}", form.name(), fmt_g(tau)));
                        }
                    }
                }
            }
        }
        if form_failed {
            failures.push(form.name().to_string());
        }
    }
    let detail = if failures.is_empty() {
        format!("8 forms, max relative difference {}", fmt_g(worst))
    } else {
        format!("mismatch in {}", failures.join("; "))
    };
    Outcome::check(failures.is_empty(), detail)
}

/// The fixed set of initial states used by the bound checks.
pub fn test_matrix_states() -> Vec<(String, DensityMatrix)> {
    let mut out = vec![
        ("chi+".to_string(), bloch_state(BlochVector::new(1.0, 0.0, 0.0).unwrap()).unwrap()),
        ("qubit(0.5,0,0)".to_string(), bloch_state(BlochVector::new(0.5, 0.0, 0.0).unwrap()).unwrap()),
        ("qubit(0.6,0,0.3)".to_string(), bloch_state(BlochVector::new(0.6, 0.0, 0.3).unwrap()).unwrap()),
    ];
    for b in BellState::ALL {
        out.push((format!("bell:{b}"), bell_state(b)));
        out.push((format!("mcb:{b}"), max_coherent_entangled(b)));
    }
    let q = MixingParameter::new(0.5).unwrap();
    out.push(("werner:0.5,bell:phi+".into(), werner(q, &bell_state(BellState::PhiPlus))));
    out.push(("mcbw:0.5,psi+".into(), werner(q, &max_coherent_entangled(BellState::PsiPlus))));
    for index in 1..=4 {
        out.push((format!("ghz:3,{index},+"), ghz_state(GhzIndex::new(3, index, true).unwrap()).unwrap()));
    }
    out.push(("ghz:4,1,+".into(), ghz_state(GhzIndex::new(4, 1, true).unwrap()).unwrap()));
    out.push(("ghz:4,4,+".into(), ghz_state(GhzIndex::new(4, 4, true).unwrap()).unwrap()));
    out
}

fn bures_bound(_: &Context) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for (label, rho0) in test_matrix_states() {
        for cfg in caption_channels() {
            for &tau in &[0.25, 1.0, 2.5, 5.0] {
                match qsl(&rho0, &cfg, &QslRequest::bures(tau, NormKind::Op)) {
                    Ok(r) => {
                        worst = worst.max(r.tau_qsl / tau);
                        count += 1;
                    }
                    Err(e) => return Outcome::check(false, format!("{label} {cfg} tau={tau}: {e}")),
                }
            }
        }
    }
    Outcome::check(worst <= 1.0 + 1e-12, format!("max τ_QSL/τ {} over {count} runs", fmt_g(worst)))
}

fn negative_rate_signatures(_: &Context) -> Outcome {
    let count = |cfg: ChannelConfig| gamma_negative_intervals(&cfg, 20.0).map(|v| v.len());
    let [oun, rtn, nmad] = caption_channels();
    match (count(rtn), count(nmad), count(oun)) {
        (Ok(r), Ok(n), Ok(o)) => {
            Outcome::check(r >= 1 && n >= 1 && o == 0, format!("negative intervals in (0, 20]: rtn {r}, nmad {n}, oun {o}"))
        }
        (a, b, c) => Outcome::check(false, [a, b, c].into_iter().find_map(Result::err).unwrap().to_string()),
    }
}

/// Number of interior local extrema of a sampled curve.
pub fn interior_extrema(values: &[f64]) -> usize {
    values
        .windows(3)
        .filter(|w| (w[1] > w[0] && w[1] > w[2]) || (w[1] < w[0] && w[1] < w[2]))
        .count()
}

fn nmad_swings(_: &Context) -> Outcome {
    let rho0 = bloch_state(BlochVector::new(1.0, 0.0, 0.0).unwrap()).unwrap();
    let cfg = ChannelConfig::nmad(1.0, 0.1).unwrap();
    let grid: Vec<f64> = (0..200).map(|i| 0.05 + (20.0 - 0.05) * i as f64 / 199.0).collect();
    match trajectory_kappa_tau(&rho0, &cfg, &QslRequest::bures(1.0, NormKind::Op), &grid, 1.0) {
        Ok(pts) => {
            let v: Vec<f64> = pts.iter().map(|p| p.tau_qsl).collect();
            let n = interior_extrema(&v);
            Outcome::check(n >= 1, format!("{n} interior extrema on κτ ∈ [0.05, 20]"))
        }
        Err(e) => Outcome::check(false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsl_core::channels::ChannelKind;

    #[test]
    fn pt_sign_fault_is_caught() {
        let ctx = Context { fault: Some(Fault::PtSign), ..Context::default() };
        assert!(!generator_consistency(&ctx).passed);
        assert!(generator_consistency(&Context::default()).passed);
    }

    #[test]
    fn extrema_counter() {
        assert_eq!(interior_extrema(&[1.0, 2.0, 3.0]), 0);
        assert_eq!(interior_extrema(&[1.0, 3.0, 2.0, 4.0]), 2);
    }

    #[test]
    fn kind_of_caption_channels() {
        let kinds: Vec<ChannelKind> = caption_channels().iter().map(|c| c.kind).collect();
        assert_eq!(kinds, [ChannelKind::Oun, ChannelKind::Rtn, ChannelKind::Nmad]);
    }
}
