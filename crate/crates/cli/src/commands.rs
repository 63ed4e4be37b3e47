//! The compute, figure and nonmarkov commands, plus dispatch.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use qsl_core::channels::{decoherence_rate, ChannelConfig, ChannelKind};
use qsl_core::nonmarkov::nonmarkovianity;
use qsl_core::qsl::{trajectory_kappa_tau, GeneratorArgument, Method, NormKind, QslRequest, TrajectoryPoint};
use qsl_core::states::StateSpec;

use crate::args::{ChannelArgs, Command, ComputeArgs, ConfigFile, FigureArgs, GridSpec, NonmarkovArgs};
use crate::error::CliError;
use crate::format::{fmt_g, Csv};
use crate::manifest::{self, Axes, Figure};
use crate::{validate, witness, Output, Settings};

pub const COMPUTE_HEADER: [&str; 5] = ["kappa_tau", "tau_qsl", "cl1", "s_l", "m_cl"];
pub const PARAMETRIC_HEADER: [&str; 3] = ["m_cl", "tau_qsl", "kappa_tau"];

pub fn dispatch(command: &Command, settings: &Settings, config: &ConfigFile) -> Result<Output, CliError> {
    match command {
        Command::Compute(a) => compute(a, settings, config),
        Command::Figure(a) => figure(a, settings),
        Command::Witness(a) => witness::command(a, settings, config),
        Command::Nonmarkov(a) => nonmarkov(a, settings, config),
        Command::Validate(a) => validate::command(a, config),
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

/// Channel from flags, with κ = 1, λ = 0.1κ and c = 0.6κ filling anything left unset.
pub fn channel_config(args: &ChannelArgs, default_kind: Option<ChannelKind>) -> Result<ChannelConfig, CliError> {
    let kind = match (&args.channel, default_kind) {
        (Some(name), _) => name.parse::<ChannelKind>().map_err(usage)?,
        (None, Some(kind)) => kind,
        (None, None) => return Err(CliError::Usage("missing --channel (oun, rtn or nmad)".into())),
    };
    let kappa = args.kappa.unwrap_or(1.0);
    ChannelConfig::new(kind, kappa, args.lambda.unwrap_or(0.1 * kappa), args.c.unwrap_or(0.6 * kappa)).map_err(usage)
}

pub fn grid_or_default(settings: &Settings) -> GridSpec {
    settings.grid.unwrap_or_else(|| GridSpec::parse(manifest::DEFAULT_GRID).expect("default grid parses"))
}

pub fn compute_csv(points: &[TrajectoryPoint]) -> String {
    let mut csv = Csv::new(&COMPUTE_HEADER);
    for p in points {
        csv.row(&[p.t, p.tau_qsl, p.cl1, p.s_l, p.m_cl]);
    }
    csv.into_string()
}

pub fn parametric_csv(points: &[TrajectoryPoint]) -> String {
    let mut csv = Csv::new(&PARAMETRIC_HEADER);
    for p in points {
        csv.row(&[p.m_cl, p.tau_qsl, p.t]);
    }
    csv.into_string()
}

fn compute(args: &ComputeArgs, settings: &Settings, config: &ConfigFile) -> Result<Output, CliError> {
    let cfg = channel_config(&args.channel.merged(config), None)?;
    let state = args.state.clone().or_else(|| config.state.clone()).unwrap_or_else(|| "bloch:1,0,0".into());
    let rho0 = state.parse::<StateSpec>().and_then(|s| s.build()).map_err(usage)?;
    let method: Method = args.method.clone().or_else(|| config.method.clone()).as_deref().unwrap_or("bures").parse().map_err(usage)?;
    let norm: NormKind = args.norm.clone().or_else(|| config.norm.clone()).as_deref().unwrap_or("op").parse().map_err(usage)?;
    let tau = args.tau.or(config.tau).unwrap_or(1.0);
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(CliError::Usage(format!("--tau must be positive, got {tau}")));
    }
    let mut req = QslRequest::for_method(method, tau, norm);
    if let Some(g) = args.generator.clone().or_else(|| config.generator.clone()) {
        req = req.with_generator_argument(match g.to_ascii_lowercase().as_str() {
            "initial" => GeneratorArgument::Initial,
            "evolved" => GeneratorArgument::Evolved,
            other => return Err(CliError::Usage(format!("unknown --generator `{other}` (expected initial or evolved)"))),
        });
    }
    let grid = grid_or_default(settings).values();
    let points = trajectory_kappa_tau(&rho0, &cfg, &req, &grid, tau).map_err(CliError::numeric("compute"))?;
    let csv = compute_csv(&points);
    Ok(if settings.out.is_some() {
        Output { files: vec![(PathBuf::from("compute.csv"), csv)], stdout: String::new() }
    } else {
        Output { files: Vec::new(), stdout: csv }
    })
}

/// CSV text of every curve of one figure, in manifest order.
pub fn figure_curves(fig: &Figure, grid: &[f64]) -> Result<Vec<(String, String)>, CliError> {
    let req = fig.request()?;
    fig.curves
        .par_iter()
        .map(|curve| {
            let cfg = curve.channel()?;
            let rho0 = curve.state()?;
            let op = format!("figure {} curve {}", fig.id, curve.label);
            let points = trajectory_kappa_tau(&rho0, &cfg, &req, grid, fig.tau).map_err(CliError::numeric(op))?;
            let csv = match fig.axes {
                Axes::KappaTau => compute_csv(&points),
                Axes::Parametric => parametric_csv(&points),
            };
            Ok((curve.label.clone(), csv))
        })
        .collect()
}

pub fn plot_script(fig: &Figure) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {}: {}", fig.id, fig.title);
    let _ = writeln!(s, "# tau = {}, kappa = 1", fmt_g(fig.tau));
    let _ = writeln!(s, "set datafile separator \",\"");
    let (x, y) = match fig.axes {
        Axes::KappaTau => ("kappa tau", "tau_QSL"),
        Axes::Parametric => ("M_Cl", "tau_QSL"),
    };
    let _ = writeln!(s, "set xlabel \"{x}\"");
    let _ = writeln!(s, "set ylabel \"{y}\"");
    let _ = writeln!(s, "set key outside right");
    let lines: Vec<String> = fig
        .curves
        .iter()
        .map(|c| format!("\"{}.csv\" every ::1 using 1:2 with lines title \"{}\"", c.label, c.label))
        .collect();
    let _ = writeln!(s, "plot {}", lines.join(", \\\n     "));
    s
}

fn figure(args: &FigureArgs, settings: &Settings) -> Result<Output, CliError> {
    if args.id == "list" {
        let mut stdout = String::new();
        for f in manifest::figures() {
            let _ = writeln!(stdout, "{}\t{} curve(s)\t{}", f.id, f.curves.len(), f.title);
        }
        return Ok(Output { files: Vec::new(), stdout });
    }
    let figs = manifest::select(&args.id)?;
    let grid = grid_or_default(settings).values();
    let mut out = Output::default();
    for fig in &figs {
        let dir = PathBuf::from(&fig.id);
        for (label, csv) in figure_curves(fig, &grid)? {
            let path = dir.join(format!("{label}.csv"));
            let _ = writeln!(out.stdout, "{}", path.display());
            out.files.push((path, csv));
        }
        let script = dir.join(format!("{}.gp", fig.id));
        let _ = writeln!(out.stdout, "{}", script.display());
        out.files.push((script, plot_script(fig)));
    }
    Ok(out)
}

fn nonmarkov(args: &NonmarkovArgs, settings: &Settings, config: &ConfigFile) -> Result<Output, CliError> {
    let cfg = channel_config(&args.channel.merged(config), None)?;
    let horizon = args.horizon.or(config.horizon).unwrap_or(20.0);
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(CliError::Usage(format!("--horizon must be positive, got {horizon}")));
    }
    let report = nonmarkovianity(&cfg, horizon).map_err(CliError::numeric("nonmarkov"))?;
    let mut s = String::new();
    let _ = writeln!(s, "channel = {cfg}");
    let _ = writeln!(s, "horizon = {}", fmt_g(horizon));
    let _ = writeln!(s, "oscillatory = {}", cfg.is_oscillatory());
    let _ = writeln!(s, "n_l = {}", fmt_g(report.n_l));
    let _ = writeln!(s, "gamma_star = {}", fmt_g(report.gamma_star));
    let _ = writeln!(s, "weight = {}", fmt_g(report.weight));
    let poles: Vec<String> = report.poles.iter().map(|&t| fmt_g(t)).collect();
    let _ = writeln!(s, "poles = [{}]", poles.join(", "));
    let _ = writeln!(s, "negative_intervals = {}", report.negative_intervals.len());
    for (a, b) in &report.negative_intervals {
        let _ = writeln!(s, "  [{}, {}]", fmt_g(*a), fmt_g(*b));
    }
    let mut out = Output { files: Vec::new(), stdout: s.clone() };
    if settings.out.is_some() {
        let grid = settings.grid.unwrap_or(GridSpec { min: horizon / 1000.0, max: horizon, points: 1000 }).values();
        let mut csv = Csv::new(&["t", "gamma"]);
        for t in grid {
            // A pole of the rate is written as nan.
            csv.row(&[t, decoherence_rate(&cfg, t).unwrap_or(f64::NAN)]);
        }
        out.files.push((PathBuf::from("nonmarkov.txt"), s));
        out.files.push((PathBuf::from("gamma.csv"), csv.into_string()));
    }
    Ok(out)
}
