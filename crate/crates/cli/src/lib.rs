//! Library half of the `qsl` binary. Each command returns its output as
//! in-memory text; [`run`] is the single writer that puts it on disk or stdout.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod manifest;
pub mod validate;
pub mod witness;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

pub use args::{Cli, Command, ConfigFile, GridSpec};
pub use error::CliError;

/// What a command produced: files relative to the output directory and text for stdout.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub files: Vec<(PathBuf, String)>,
    pub stdout: String,
}

impl Output {
    pub fn write(&self, out_dir: &Path) -> Result<(), CliError> {
        for (rel, text) in &self.files {
            let path = out_dir.join(rel);
            let io = |source| CliError::Io { path: path.display().to_string(), source };
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(io)?;
            }
            std::fs::write(&path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        }
        Ok(())
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("run `qsl --help` for usage");
            }
            e.exit_code()
        }
    }
}

/// Runs the parsed command and writes its files; the returned stdout text is left to the caller.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let settings = Settings::resolve(cli, &config)?;
    if let Some(n) = settings.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // Fails only if a pool already exists, as in repeated library calls; keep that pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = commands::dispatch(&cli.command, &settings, &config)?;
    if let Some(dir) = settings.out_dir(&cli.command) {
        out.write(&dir)?;
    }
    Ok(out)
}

/// Global flags after merging with the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub out: Option<PathBuf>,
    pub grid: Option<GridSpec>,
    pub threads: Option<usize>,
}

impl Settings {
    pub fn resolve(cli: &Cli, config: &ConfigFile) -> Result<Self, CliError> {
        let grid = cli.grid.clone().or_else(|| config.grid.clone()).map(|g| GridSpec::parse(&g)).transpose()?;
        Ok(Self {
            out: cli.out.clone().or_else(|| config.out.clone()),
            grid,
            threads: cli.threads.or(config.threads),
        })
    }

    /// Figures always go to disk (the current directory by default); other commands only with --out.
    fn out_dir(&self, command: &Command) -> Option<PathBuf> {
        match (command, &self.out) {
            (_, Some(dir)) => Some(dir.clone()),
            (Command::Figure(_), None) => Some(PathBuf::from(".")),
            _ => None,
        }
    }
}
