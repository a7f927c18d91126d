//! `molfluor`: detuning sweeps, single points, peak detection and
//! closed-form comparisons for the five-level fluorescence model.
//!
//! Exit status: 0 success, 1 invalid input, 2 solver failure, 3 I/O error.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use molfluor::sweep::to_writer;
use molfluor::{
    compare, detect_peaks, label_peaks, preset, read_csv, run_sweep, solve_point, write_csv,
    CascadeForm, Error, ErrorKind, Level, ModelParams, PeakReport, Result, SweepConfig, SweepMode,
    SweepResult, Trace, DEFAULT_PROMINENCE, PRESET_NAMES,
};

use config::ConfigFile;

type P = ModelParams<f64>;

#[derive(Parser, Debug)]
#[command(name = "molfluor", version, about = "Steady-state fluorescence of a five-level molecule")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the two-photon detuning and write a CSV table.
    Sweep(SweepArgs),
    /// Solve a single parameter point.
    Point(PointArgs),
    /// Detect intensity peaks in a sweep (computed or read from CSV).
    Peaks(PeaksArgs),
    /// Compare the numeric sweep against the matching closed forms.
    Compare(SweepArgs),
    /// List the built-in presets.
    PresetList,
}

/// Model parameters; each overrides the preset and the config file.
#[derive(Args, Debug, Default, Clone)]
struct ParamArgs {
    /// Flat key = value file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    omega_ab: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega_bc: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega12: Option<f64>,
    /// Physical two-photon detuning (used by `point`).
    #[arg(long, allow_hyphen_values = true)]
    delta_2ph: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_1ph: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_v: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_b: Option<f64>,
    /// Defaults to gamma_b.
    #[arg(long, allow_hyphen_values = true)]
    gamma_d: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p_u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p_v: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Built-in parameter set (see `preset-list`).
    #[arg(long)]
    preset: Option<String>,
    /// Lower sweep bound in units of gamma_u + gamma_v.
    #[arg(long, allow_hyphen_values = true)]
    delta_min: Option<f64>,
    /// Upper sweep bound in units of gamma_u + gamma_v.
    #[arg(long, allow_hyphen_values = true)]
    delta_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// numeric, analytic_2ph, analytic_cascade, cascade_solver or compare.
    #[arg(long)]
    mode: Option<String>,
    /// Use the published closed forms in analytic_cascade mode.
    #[arg(long)]
    published_forms: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Output CSV; stdout when absent. Multi-sweep presets write
    /// `<stem>-<label>.csv` next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct PeaksArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Read the sweep from this CSV instead of computing it.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Minimum prominence as a fraction of the trace maximum.
    #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
    prominence: f64,
    /// Restrict to one trace: i_u, i_v or i_p0.
    #[arg(long)]
    trace: Option<String>,
}

/// Defaults, then preset, then config file, then flags. `gamma_d` follows
/// `gamma_b` unless set explicitly.
fn resolve_params(base: P, args: &ParamArgs, file: &ConfigFile) -> Result<P> {
    let mut p = base;
    let gamma_d_explicit = args.gamma_d.is_some() || file.values.contains_key("gamma_d");
    macro_rules! apply {
        ($($field:ident),*) => {$(
            if let Some(v) = file.get::<f64>(stringify!($field))? { p.$field = v; }
            if let Some(v) = args.$field { p.$field = v; }
        )*};
    }
    apply!(omega_ab, omega_bc, q, omega12, delta_2ph, delta_1ph, gamma_u, gamma_v, gamma_b, gamma_d, p_u, p_v);
    if !gamma_d_explicit {
        p.gamma_d = p.gamma_b;
    }
    p.validate()?;
    Ok(p)
}

fn load_config(args: &ParamArgs) -> Result<ConfigFile> {
    args.config.as_deref().map_or_else(|| Ok(ConfigFile::default()), ConfigFile::load)
}

fn build_configs(params: &ParamArgs, grid: &GridArgs) -> Result<Vec<SweepConfig<f64>>> {
    let file = load_config(params)?;
    let bases = match &grid.preset {
        Some(name) => preset::<f64>(name)?,
        None => vec![SweepConfig::new("sweep", P::default())],
    };
    let mode = match (&grid.mode, file.values.get("mode")) {
        (Some(m), _) | (None, Some(m)) => Some(m.parse::<SweepMode>()?),
        _ => None,
    };
    bases
        .into_iter()
        .map(|mut c| {
            c.params = resolve_params(c.params, params, &file)?;
            if let Some(v) = file.get("delta_min")? {
                c.delta_min = v;
            }
            if let Some(v) = file.get("delta_max")? {
                c.delta_max = v;
            }
            if let Some(v) = file.get("points")? {
                c.points = v;
            }
            c.delta_min = grid.delta_min.unwrap_or(c.delta_min);
            c.delta_max = grid.delta_max.unwrap_or(c.delta_max);
            c.points = grid.points.unwrap_or(c.points);
            c.mode = mode.unwrap_or(c.mode);
            if grid.published_forms {
                c.cascade_form = CascadeForm::AsPublished;
            }
            c.validate()?;
            Ok(c)
        })
        .collect()
}

/// `dir/stem-label.ext` for multi-sweep output.
fn labelled_path(out: &Path, label: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}-{label}.{ext}"))
}

fn emit(results: &[(SweepConfig<f64>, SweepResult<f64>)], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) if results.len() == 1 => write_csv(&results[0].1, path),
        Some(path) => {
            for (cfg, r) in results {
                write_csv(r, &labelled_path(path, &cfg.label))?;
            }
            Ok(())
        }
        None if results.len() == 1 => {
            let stdout = std::io::stdout();
            to_writer(&results[0].1, stdout.lock())
        }
        None => Err(multi_stdout(results.len())),
    }
}

fn multi_stdout(n: usize) -> Error {
    Error::param("out", format!("preset expands to {n} sweeps; pass --out to write one file each"))
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let configs = build_configs(&args.params, &args.grid)?;
    if configs.len() > 1 && args.out.is_none() {
        return Err(multi_stdout(configs.len()));
    }
    let mut results = Vec::with_capacity(configs.len());
    for cfg in configs {
        if cfg.mode == SweepMode::Compare {
            eprint!("{}", compare(&cfg)?);
        }
        let r = run_sweep(&cfg)?;
        results.push((cfg, r));
    }
    emit(&results, args.out.as_deref())
}

fn cmd_compare(args: &SweepArgs) -> Result<()> {
    let configs = build_configs(&args.params, &args.grid)?;
    let mut results = Vec::new();
    for cfg in configs {
        let report = compare(&cfg)?;
        print!("{report}");
        results.push((cfg, report.numeric));
    }
    if let Some(out) = &args.out {
        emit(&results, Some(out))?;
    }
    Ok(())
}

fn cmd_point(args: &PointArgs) -> Result<()> {
    let file = load_config(&args.params)?;
    let base = match &args.preset {
        Some(name) => preset::<f64>(name)?.remove(0).params,
        None => P::default(),
    };
    let p = resolve_params(base, &args.params, &file)?;
    let (rho, i) = solve_point(&p)?;
    let mut out = std::io::stdout().lock();
    let mut line = |k: &str, v: f64| writeln!(out, "{k} = {v:.16e}");
    let io = |source| Error::Io { path: "<stdout>".into(), source };
    line("delta_2ph", p.delta_2ph).map_err(io)?;
    for (name, l) in [("rho11", Level::A1), ("rho22", Level::A2), ("rho_bb", Level::B), ("rho_cc", Level::C), ("rho_dd", Level::D)] {
        line(name, rho.population(l)).map_err(io)?;
    }
    let r12 = rho.elem(Level::A1, Level::A2);
    line("re_rho12", r12.re).map_err(io)?;
    line("im_rho12", r12.im).map_err(io)?;
    line("i_u", i.i_u).map_err(io)?;
    line("i_v", i.i_v).map_err(io)?;
    line("i_p0", i.i_p0).map_err(io)
}

fn print_report(label: &str, report: &PeakReport<f64>) {
    println!("{label} {}: {} peaks", report.trace, report.peaks.len());
    for p in &report.peaks {
        let tag = p.label.map_or_else(String::new, |l| format!(" at {l}"));
        println!(
            "  delta = {:+.4}  height = {:.6e}  prominence = {:.6e}{tag}",
            p.delta, p.height, p.prominence
        );
    }
}

fn cmd_peaks(args: &PeaksArgs) -> Result<()> {
    let traces = match &args.trace {
        Some(t) => vec![t.parse::<Trace>()?],
        None => Trace::ALL.to_vec(),
    };
    if !(args.prominence > 0.0 && args.prominence < 1.0) {
        return Err(Error::param("prominence", format!("{} must lie strictly between 0 and 1", args.prominence)));
    }
    if let Some(input) = &args.input {
        let r = read_csv::<f64>(input)?;
        let label = input.display().to_string();
        for t in traces {
            print_report(&label, &detect_peaks(&r, t, args.prominence)?);
        }
        return Ok(());
    }
    for cfg in build_configs(&args.params, &args.grid)? {
        let r = run_sweep(&cfg)?;
        for &t in &traces {
            let mut report = detect_peaks(&r, t, args.prominence)?;
            label_peaks(&mut report, &cfg.params, cfg.step());
            print_report(&cfg.label, &report);
        }
    }
    Ok(())
}

fn cmd_preset_list() {
    for name in PRESET_NAMES {
        let configs = preset::<f64>(name).expect("built-in preset");
        for c in configs {
            let p = c.params;
            println!(
                "{:<16} omega_ab={} omega_bc={} q={} omega12={} delta_1ph={} gamma_u={} gamma_v={} gamma_b={} gamma_d={} p_u={} p_v={}",
                c.label, p.omega_ab, p.omega_bc, p.q, p.omega12, p.delta_1ph, p.gamma_u, p.gamma_v,
                p.gamma_b, p.gamma_d, p.p_u, p.p_v
            );
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Point(a) => cmd_point(&a),
        Command::Peaks(a) => cmd_peaks(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::PresetList => {
            cmd_preset_list();
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Validation => 1,
                ErrorKind::Solver => 2,
                ErrorKind::Io => 3,
            })
        }
    }
}
