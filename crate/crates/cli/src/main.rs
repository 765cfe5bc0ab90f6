//! Command-line front end: rate sweeps over energy grids, mixing-probability
//! traces, Monte Carlo validation of the analytic receiver table, and
//! CSV/SVG emission with reproducibility manifests.

mod config;
mod csvio;
mod manifest;
mod svg;
mod sweep;

use clap::{Parser, Subcommand, ValueEnum};
use config::Config;
use csvio::{fmt_sig, parse_sweep_csv, write_sweep_csv};
use manifest::Manifest;
use pppm_core::codebook::{Codebook, Message, Sign};
use pppm_core::rates::{
    build_conditional_table, enumerate_outcomes, r_pppm_closed_from_stats, r_pppm_opt,
    OutcomeSymbol, PppmStats,
};
use pppm_core::sim::{compare_to_table, run_trials, DolinarMode, SimConfig, TrialAllocation};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use sweep::{compute_sweep, energy_grid, GridKind};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VALIDATION: u8 = 4;
const EXIT_IO: u8 = 1;

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(err: std::io::Error, path: &Path) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }

    fn core(err: pppm_core::Error) -> Self {
        let code = match err {
            pppm_core::Error::QuadratureNonConvergence { .. } => EXIT_NUMERICAL,
            pppm_core::Error::DimensionMismatch { .. }
            | pppm_core::Error::PriorNotNormalized { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }

    fn sweep(err: sweep::SweepError) -> Self {
        let code = CliError::core(err.source.clone()).code;
        Self {
            code,
            message: err.to_string(),
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(
    name = "pppm",
    version,
    about = "Rate comparisons and Monte Carlo validation for pulse-position-modulated coherent-state codes"
)]
struct Cli {
    /// Key-value config file supplying defaults for omitted flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the rates over an energy grid and write a CSV (plus optional SVG).
    Sweep(SweepArgs),
    /// Trace the mixed-code rate as a function of the mixing probability p.
    OptimizeP(OptimizeArgs),
    /// Monte Carlo validation of the analytic conditional table.
    Simulate(SimulateArgs),
    /// Render a sweep CSV as a standalone SVG.
    Plot(PlotArgs),
    /// Preset sweeps reproducing the three standard rate comparisons.
    Figures(FiguresArgs),
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Comma-separated block sizes (powers of two).
    #[arg(long, value_delimiter = ',')]
    modes: Vec<usize>,
    /// Lowest per-mode energy (photons).
    #[arg(long)]
    emin: Option<f64>,
    /// Highest per-mode energy (photons).
    #[arg(long)]
    emax: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    /// Grid spacing: log or linear.
    #[arg(long)]
    grid: Option<GridKind>,
    /// Output CSV path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also render the rate curves to this SVG path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(clap::Args)]
struct OptimizeArgs {
    /// Per-mode energy (photons).
    #[arg(long)]
    energy: Option<f64>,
    /// Block size (power of two).
    #[arg(long)]
    modes: Option<usize>,
    /// Trace step in p.
    #[arg(long)]
    step: Option<f64>,
    /// Optional CSV output (columns p,r_pppm).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    PaperModel,
    Physical,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum AllocationArg {
    PerMessage,
    Prior,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Per-mode energy (photons).
    #[arg(long)]
    energy: Option<f64>,
    /// Block size (power of two).
    #[arg(long)]
    modes: Option<usize>,
    /// Mixing probability p.
    #[arg(long)]
    p: Option<f64>,
    /// VP tap rounds per detector.
    #[arg(long)]
    steps: Option<usize>,
    /// Total trial budget.
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Solo-click handling: paper-model (fair coin) or physical (Dolinar).
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Trial allocation: per-message (even split) or prior (sampled).
    #[arg(long, value_enum)]
    allocation: Option<AllocationArg>,
    /// Output base path; writes <base>.report.csv, <base>.counts.csv and
    /// <base>.manifest.json.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Dump the codebook (message ids, classes, positions, signs) as JSON.
    #[arg(long)]
    dump_codebook: Option<PathBuf>,
}

#[derive(clap::Args)]
struct PlotArgs {
    /// Input CSV in the sweep schema.
    #[arg(long)]
    input: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    output: PathBuf,
    /// Comma-separated columns to draw.
    #[arg(long, value_delimiter = ',')]
    columns: Vec<String>,
    /// Logarithmic energy axis.
    #[arg(long)]
    log_x: bool,
}

#[derive(clap::Args)]
struct FiguresArgs {
    /// Which preset comparison to generate (1, 2 or 3).
    #[arg(long)]
    fig: u8,
    /// Directory for fig<k>.csv / fig<k>.svg / fig<k>.manifest.json.
    #[arg(long, default_value = "figures")]
    output_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Config::default(),
    };
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(args, &cfg),
        Command::OptimizeP(args) => cmd_optimize_p(args, &cfg),
        Command::Simulate(args) => cmd_simulate(args, &cfg),
        Command::Plot(args) => cmd_plot(args),
        Command::Figures(args) => cmd_figures(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

impl std::str::FromStr for ModeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper-model" => Ok(ModeArg::PaperModel),
            "physical" => Ok(ModeArg::Physical),
            other => Err(format!("unknown mode '{other}'")),
        }
    }
}

impl std::str::FromStr for AllocationArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "per-message" => Ok(AllocationArg::PerMessage),
            "prior" => Ok(AllocationArg::Prior),
            other => Err(format!("unknown allocation '{other}'")),
        }
    }
}

fn parse_modes(cfg: &Config, flags: &[usize]) -> Result<Vec<usize>, CliError> {
    let modes: Vec<usize> = if flags.is_empty() {
        match cfg.get_raw("modes") {
            Some(raw) => raw
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::usage(format!("config key 'modes': {e}")))?,
            None => return Err(CliError::usage("--modes is required")),
        }
    } else {
        flags.to_vec()
    };
    for &n in &modes {
        if n < 2 || !n.is_power_of_two() {
            return Err(CliError::usage(format!(
                "block size {n} is not a power of two >= 2"
            )));
        }
    }
    Ok(modes)
}

fn write_file(path: &Path, contents: &str) -> CliResult {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::io(e, parent))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(e, path))
}

const RATE_COLUMNS: [&str; 4] = ["r_holevo", "r_dolinar", "r_hadamard", "r_pppm"];

fn cmd_sweep(args: SweepArgs, cfg: &Config) -> CliResult {
    let modes = parse_modes(cfg, &args.modes)?;
    let emin = cfg
        .resolve_required(args.emin, "emin")
        .map_err(CliError::usage)?
        .ok_or_else(|| CliError::usage("--emin is required"))?;
    let emax = cfg
        .resolve_required(args.emax, "emax")
        .map_err(CliError::usage)?
        .ok_or_else(|| CliError::usage("--emax is required"))?;
    let points = cfg
        .resolve_required(args.points, "points")
        .map_err(CliError::usage)?
        .ok_or_else(|| CliError::usage("--points is required"))?;
    let grid = cfg
        .resolve(args.grid, "grid", GridKind::Log)
        .map_err(CliError::usage)?;
    let output = cfg
        .resolve_required(args.output, "output")
        .map_err(CliError::usage)?
        .ok_or_else(|| CliError::usage("--output is required"))?;

    if points < 2 {
        return Err(CliError::usage("--points must be at least 2"));
    }
    if !(emin.is_finite() && emax.is_finite()) || emin >= emax {
        return Err(CliError::usage("need emin < emax, both finite"));
    }
    if grid == GridKind::Log && emin <= 0.0 {
        return Err(CliError::usage("log grid needs emin > 0"));
    }
    if grid == GridKind::Linear && emin < 0.0 {
        return Err(CliError::usage("energies must be non-negative"));
    }

    let energies = energy_grid(emin, emax, points, grid);
    let records = compute_sweep(&modes, &energies).map_err(CliError::sweep)?;
    write_file(&output, &write_sweep_csv(&records))?;

    let mut outputs: Vec<PathBuf> = vec![output.clone()];
    let svg_text = match &args.svg {
        Some(svg_path) => {
            let table = parse_sweep_csv(&write_sweep_csv(&records)).expect("generated CSV parses");
            let cols: Vec<String> = RATE_COLUMNS.iter().map(|s| s.to_string()).collect();
            let body = svg::render_sweep_svg(&table, &cols, grid == GridKind::Log)
                .map_err(CliError::usage)?;
            outputs.push(svg_path.clone());
            Some((svg_path.clone(), body))
        }
        None => None,
    };
    if let Some((path, body)) = &svg_text {
        write_file(path, body)?;
    }

    let output_refs: Vec<&Path> = outputs.iter().map(|p| p.as_path()).collect();
    Manifest::new(
        "sweep",
        json!({
            "modes": modes,
            "emin": emin,
            "emax": emax,
            "points": points,
            "grid": if grid == GridKind::Log { "log" } else { "linear" },
            "output": output.display().to_string(),
            "svg": args.svg.as_ref().map(|p| p.display().to_string()),
        }),
        &output_refs,
    )
    .write_alongside(&output)
    .map_err(|e| CliError::io(e, &output))?;
    println!(
        "wrote {} rows ({} block sizes x {} energies) to {}",
        records.len(),
        modes.len(),
        points,
        output.display()
    );
    Ok(())
}

fn cmd_optimize_p(args: OptimizeArgs, cfg: &Config) -> CliResult {
    let energy = cfg
        .resolve_required(args.energy, "energy")
        .map_err(CliError::usage)?
        .ok_or_else(|| CliError::usage("--energy is required"))?;
    let modes = cfg
        .resolve_required(args.modes, "modes")
        .map_err(CliError::usage)?
        .ok_or_else(|| CliError::usage("--modes is required"))?;
    let step = cfg
        .resolve(args.step, "step", 0.01)
        .map_err(CliError::usage)?;
    if !(step > 0.0 && step <= 0.5) {
        return Err(CliError::usage("--step must be in (0, 0.5]"));
    }

    let stats = PppmStats::compute(energy, modes).map_err(CliError::core)?;
    let opt = r_pppm_opt(energy, modes).map_err(CliError::core)?;

    let mut trace = String::from("p,r_pppm\n");
    let n_steps = (1.0 / step).ceil() as usize;
    for i in 0..=n_steps {
        let p = (i as f64 * step).min(1.0);
        let r = r_pppm_closed_from_stats(&stats, p).map_err(CliError::core)?;
        trace.push_str(&format!("{},{}\n", fmt_sig(p), fmt_sig(r)));
        if p >= 1.0 {
            break;
        }
    }

    println!(
        "E = {}, N = {}: p_opt = {}, r_pppm = {} bits/mode",
        fmt_sig(energy),
        modes,
        fmt_sig(opt.p_opt),
        fmt_sig(opt.rate_bits_per_mode)
    );
    if let Some(residual) = opt.mi_residual {
        println!("closed-form vs generic-MI residual: {residual:.3e}");
    }

    if let Some(output) = &args.output {
        write_file(output, &trace)?;
        Manifest::new(
            "optimize-p",
            json!({
                "energy": energy,
                "modes": modes,
                "step": step,
                "p_opt": opt.p_opt,
                "r_pppm": opt.rate_bits_per_mode,
                "output": output.display().to_string(),
            }),
            &[output.as_path()],
        )
        .write_alongside(output)
        .map_err(|e| CliError::io(e, output))?;
        println!("wrote trace to {}", output.display());
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs, cfg: &Config) -> CliResult {
    let sim_cfg = SimConfig {
        e_per_mode: cfg
            .resolve(args.energy, "energy", 0.1)
            .map_err(CliError::usage)?,
        n_modes: cfg
            .resolve(args.modes, "modes", 4)
            .map_err(CliError::usage)?,
        p_mix: cfg.resolve(args.p, "p", 0.5).map_err(CliError::usage)?,
        vp_steps: cfg
            .resolve(args.steps, "steps", 10_000)
            .map_err(CliError::usage)?,
        trials: cfg
            .resolve(args.trials, "trials", 1_000_000)
            .map_err(CliError::usage)?,
        seed: cfg.resolve(args.seed, "seed", 7).map_err(CliError::usage)?,
        dolinar_mode: match cfg
            .resolve(args.mode, "mode", ModeArg::PaperModel)
            .map_err(CliError::usage)?
        {
            ModeArg::PaperModel => DolinarMode::PaperModel,
            ModeArg::Physical => DolinarMode::Physical,
        },
        allocation: match cfg
            .resolve(args.allocation, "allocation", AllocationArg::PerMessage)
            .map_err(CliError::usage)?
        {
            AllocationArg::PerMessage => TrialAllocation::PerMessage,
            AllocationArg::Prior => TrialAllocation::Prior,
        },
    };
    sim_cfg.validate().map_err(CliError::core)?;

    if let Some(path) = &args.dump_codebook {
        let dump = codebook_json(sim_cfg.n_modes, sim_cfg.e_per_mode).map_err(CliError::core)?;
        write_file(path, &dump)?;
        println!("wrote codebook to {}", path.display());
    }

    let out = run_trials(&sim_cfg).map_err(CliError::core)?;
    let analytic =
        build_conditional_table(sim_cfg.e_per_mode, sim_cfg.n_modes).map_err(CliError::core)?;
    let deviations = compare_to_table(&out.table, &analytic).map_err(CliError::core)?;
    let messages = Codebook::new(sim_cfg.n_modes, sim_cfg.e_per_mode)
        .map_err(CliError::core)?
        .messages()
        .to_vec();
    let outcomes = enumerate_outcomes(sim_cfg.n_modes).map_err(CliError::core)?;

    // The analytic table models the solo-click sign as a fair coin. In
    // physical mode those sign-resolved entries deliberately differ, so
    // they are reported but excluded from the verdict; the position mass
    // (sign-summed) is checked instead, since it is mode-independent.
    let counted = |d: &pppm_core::sim::EntryDeviation| -> bool {
        if sim_cfg.dolinar_mode == DolinarMode::PaperModel {
            return true;
        }
        match (&messages[d.msg_idx], &outcomes[d.outcome_idx]) {
            (Message::TwoPulse { pos: (k1, k2), .. }, OutcomeSymbol::OnePulse { pos, .. }) => {
                pos != k1 && pos != k2
            }
            _ => true,
        }
    };
    let mut worst = deviations
        .iter()
        .filter(|d| counted(d))
        .map(|d| d.sigma)
        .fold(0.0f64, f64::max);

    if sim_cfg.dolinar_mode == DolinarMode::Physical {
        for (x, msg) in messages.iter().enumerate() {
            let n_x = out.table.trials_for(x);
            if n_x == 0 {
                continue;
            }
            if let Message::TwoPulse { pos: (k1, k2), .. } = *msg {
                for k in [k1, k2] {
                    let ids = [Sign::Plus, Sign::Minus].map(|sign| {
                        OutcomeSymbol::OnePulse { pos: k, sign }.canonical_index(sim_cfg.n_modes)
                    });
                    let p0: f64 = ids.iter().map(|&y| analytic.prob(x, y)).sum();
                    let mass: u64 = ids.iter().map(|&y| out.table.count(x, y)).sum();
                    if p0 > 0.0 && p0 < 1.0 {
                        let sd = (p0 * (1.0 - p0) / n_x as f64).sqrt();
                        worst = worst.max((mass as f64 / n_x as f64 - p0).abs() / sd);
                    }
                }
            }
        }
    }

    let closed = sim_cfg.n_modes as f64
        * pppm_core::rates::r_pppm_closed(sim_cfg.e_per_mode, sim_cfg.n_modes, sim_cfg.p_mix)
            .map_err(CliError::core)?;
    let mi_gap = (out.mi.bits - closed).abs();
    let pass = worst <= 5.0;

    let mode_name = match sim_cfg.dolinar_mode {
        DolinarMode::PaperModel => "paper-model",
        DolinarMode::Physical => "physical",
    };
    println!(
        "simulate: E={} N={} p={} T={} trials={} seed={} mode={}",
        fmt_sig(sim_cfg.e_per_mode),
        sim_cfg.n_modes,
        fmt_sig(sim_cfg.p_mix),
        sim_cfg.vp_steps,
        sim_cfg.trials,
        sim_cfg.seed,
        mode_name
    );
    println!("worst checked deviation: {worst:.3} sigma (threshold 5)");
    if sim_cfg.dolinar_mode == DolinarMode::Physical {
        println!(
            "note: solo-click sign entries are excluded from the verdict (the analytic \
             reference models them as a fair coin); their position mass is checked instead"
        );
    }
    println!(
        "empirical MI: {} +- {} bits; N * closed form: {} (gap {:.3e})",
        fmt_sig(out.mi.bits),
        fmt_sig(out.mi.std_err),
        fmt_sig(closed),
        mi_gap
    );
    println!("verdict: {}", if pass { "PASS" } else { "FAIL" });

    if let Some(base) = &args.output {
        let mut report = String::from(
            "message_id,message,outcome_id,outcome,analytic,empirical,sigma_dev,checked\n",
        );
        for d in &deviations {
            report.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                d.msg_idx,
                messages[d.msg_idx].label(),
                d.outcome_idx,
                outcomes[d.outcome_idx].label(),
                fmt_sig(d.analytic),
                fmt_sig(d.empirical),
                if d.sigma.is_finite() {
                    fmt_sig(d.sigma)
                } else {
                    "inf".to_string()
                },
                u8::from(counted(d)),
            ));
        }
        let report_path = base.with_extension("report.csv");
        write_file(&report_path, &report)?;

        let mut counts = String::from("message_id,outcome_id,count\n");
        for x in 0..out.table.n_messages() {
            for y in 0..out.table.n_outcomes() {
                let c = out.table.count(x, y);
                if c > 0 {
                    counts.push_str(&format!("{x},{y},{c}\n"));
                }
            }
        }
        let counts_path = base.with_extension("counts.csv");
        write_file(&counts_path, &counts)?;

        Manifest::new(
            "simulate",
            json!({
                "energy": sim_cfg.e_per_mode,
                "modes": sim_cfg.n_modes,
                "p": sim_cfg.p_mix,
                "steps": sim_cfg.vp_steps,
                "trials": sim_cfg.trials,
                "seed": sim_cfg.seed,
                "mode": mode_name,
                "allocation": match sim_cfg.allocation {
                    TrialAllocation::PerMessage => "per-message",
                    TrialAllocation::Prior => "prior",
                },
                "worst_sigma": worst,
                "empirical_mi": out.mi.bits,
                "mi_std_err": out.mi.std_err,
            }),
            &[report_path.as_path(), counts_path.as_path()],
        )
        .write_alongside(base)
        .map_err(|e| CliError::io(e, base))?;
        println!(
            "wrote {} and {}",
            report_path.display(),
            counts_path.display()
        );
    }

    if pass {
        Ok(())
    } else {
        Err(CliError {
            code: EXIT_VALIDATION,
            message: format!("worst deviation {worst:.3} sigma exceeds 5"),
        })
    }
}

fn codebook_json(n_modes: usize, e: f64) -> pppm_core::Result<String> {
    let codebook = Codebook::new(n_modes, e)?;
    let messages: Vec<serde_json::Value> = codebook
        .messages()
        .iter()
        .enumerate()
        .map(|(id, m)| match *m {
            Message::OnePulse { pos, sign } => json!({
                "id": id,
                "class": "one_pulse",
                "positions": [pos],
                "signs": [sign.symbol().to_string()],
            }),
            Message::TwoPulse {
                pos: (k1, k2),
                signs: (s1, s2),
            } => json!({
                "id": id,
                "class": "two_pulse",
                "positions": [k1, k2],
                "signs": [s1.symbol().to_string(), s2.symbol().to_string()],
            }),
        })
        .collect();
    let doc = json!({
        "n_modes": n_modes,
        "per_mode_energy": e,
        "messages": messages,
    });
    Ok(serde_json::to_string_pretty(&doc).expect("codebook serializes") + "\n")
}

fn cmd_plot(args: PlotArgs) -> CliResult {
    let text = std::fs::read_to_string(&args.input).map_err(|e| CliError::io(e, &args.input))?;
    let table = parse_sweep_csv(&text).map_err(CliError::usage)?;
    let columns: Vec<String> = if args.columns.is_empty() {
        RATE_COLUMNS.iter().map(|s| s.to_string()).collect()
    } else {
        args.columns.clone()
    };
    let body = svg::render_sweep_svg(&table, &columns, args.log_x).map_err(CliError::usage)?;
    write_file(&args.output, &body)?;
    Manifest::new(
        "plot",
        json!({
            "input": args.input.display().to_string(),
            "output": args.output.display().to_string(),
            "columns": columns,
            "log_x": args.log_x,
        }),
        &[args.output.as_path()],
    )
    .write_alongside(&args.output)
    .map_err(|e| CliError::io(e, &args.output))?;
    println!("wrote {}", args.output.display());
    Ok(())
}

struct FigurePreset {
    name: &'static str,
    modes: &'static [usize],
    emin: f64,
    emax: f64,
    points: usize,
    columns: &'static [&'static str],
}

/// Axis ranges are not pinned anywhere authoritative; these presets use
/// E in [1e-3, 1] (log) with block sizes chosen per comparison.
const PRESETS: [FigurePreset; 3] = [
    FigurePreset {
        name: "fig1",
        modes: &[4, 16, 64, 256, 1024],
        emin: 1e-3,
        emax: 1.0,
        points: 50,
        columns: &["r_holevo", "r_dolinar", "r_hadamard"],
    },
    FigurePreset {
        name: "fig2",
        modes: &[4, 8, 16, 32],
        emin: 1e-3,
        emax: 1.0,
        points: 50,
        columns: &["r_hadamard", "r_pppm"],
    },
    FigurePreset {
        name: "fig3",
        modes: &[4, 8, 16, 32],
        emin: 0.02,
        emax: 0.5,
        points: 40,
        columns: &["r_dolinar", "r_hadamard", "r_pppm"],
    },
];

fn cmd_figures(args: FiguresArgs) -> CliResult {
    let preset = match args.fig {
        1..=3 => &PRESETS[(args.fig - 1) as usize],
        other => {
            return Err(CliError::usage(format!(
                "--fig must be 1, 2 or 3, got {other}"
            )))
        }
    };
    let energies = energy_grid(preset.emin, preset.emax, preset.points, GridKind::Log);
    let records = compute_sweep(preset.modes, &energies).map_err(CliError::sweep)?;

    let csv_path = args.output_dir.join(format!("{}.csv", preset.name));
    let svg_path = args.output_dir.join(format!("{}.svg", preset.name));
    let csv_text = write_sweep_csv(&records);
    write_file(&csv_path, &csv_text)?;

    let table = parse_sweep_csv(&csv_text).expect("generated CSV parses");
    let columns: Vec<String> = preset.columns.iter().map(|s| s.to_string()).collect();
    let body = svg::render_sweep_svg(&table, &columns, true).map_err(CliError::usage)?;
    write_file(&svg_path, &body)?;

    Manifest::new(
        "figures",
        json!({
            "fig": args.fig,
            "modes": preset.modes,
            "emin": preset.emin,
            "emax": preset.emax,
            "points": preset.points,
            "grid": "log",
            "columns": preset.columns,
            "output_dir": args.output_dir.display().to_string(),
        }),
        &[csv_path.as_path(), svg_path.as_path()],
    )
    .write_alongside(&csv_path)
    .map_err(|e| CliError::io(e, &csv_path))?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(())
}
