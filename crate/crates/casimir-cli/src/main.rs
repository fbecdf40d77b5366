// NaN-rejecting guards use the `!(x > 0)` form on purpose.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

//! Command-line surface for the composite-string Casimir library: one
//! subcommand per physics module, sweepable numeric flags, CSV or JSON-lines
//! output, deterministic across repeated runs.

mod output;
mod selftest;
mod value_spec;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use casimir_core::npiece::{scaling_fit, NPieceString};
use casimir_core::qft;
use casimir_core::thermo;
use casimir_core::twopiece::TwoPieceString;
use casimir_core::{ClassifyError, ErrorClass, QuadratureSettings};

use output::{
    Format, HagedornRecord, NPieceRecord, QftQRecord, QftURecord, ScalingRecord, ThermoRecord,
    TwoPieceRecord, Writer,
};
use value_spec::ValueSpec;

const EXIT_DOMAIN: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir energy of the piecewise-uniform relativistic string")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for data rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Relative tolerance of the adaptive quadratures.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Absolute tolerance of the adaptive quadratures.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,

    /// Semi-infinite integrals are truncated below this integrand magnitude.
    #[arg(long, global = true)]
    tail_cut: Option<f64>,

    /// Seed for the Monte-Carlo oracle only.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for sweeps (0 = automatic). Falls back to CASIMIR_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Append wall-clock timings to each row (off by default so that
    /// repeated runs are byte-identical).
    #[arg(long, global = true)]
    timings: bool,

    /// Optional key=value config file; flags override config, config
    /// overrides defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Contour,
    Cutoff,
    Zeta,
    ClosedForm,
}

#[derive(Subcommand)]
enum Command {
    /// Zero-temperature two-piece string energy.
    Twopiece {
        /// Tension ratio in [0, 1]; sweepable (scalar, list, or `start:stop:count[:log]`).
        #[arg(long)]
        x: ValueSpec,
        /// Length ratio > 0; sweepable. Cutoff/zeta methods need integers.
        #[arg(long)]
        s: ValueSpec,
        /// Total string length.
        #[arg(long, default_value_t = std::f64::consts::PI)]
        l: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Contour)]
        method: MethodArg,
    },
    /// Finite-temperature two-piece string energy (Matsubara sum).
    TwopieceThermal {
        #[arg(long)]
        x: ValueSpec,
        #[arg(long)]
        s: ValueSpec,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        l: f64,
        /// Temperature in energy units; sweepable.
        #[arg(long)]
        temperature: ValueSpec,
    },
    /// Zero-temperature 2N-piece string energy.
    Npiece {
        /// Piece-pair count; sweepable over integers.
        #[arg(long)]
        n: ValueSpec,
        #[arg(long)]
        x: ValueSpec,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        l: f64,
        /// Evaluation route (only the contour integral is implemented).
        #[arg(long, default_value = "integral")]
        method: String,
    },
    /// Finite-temperature 2N-piece string energy.
    NpieceThermal {
        #[arg(long)]
        n: ValueSpec,
        #[arg(long)]
        x: ValueSpec,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        l: f64,
        #[arg(long)]
        temperature: ValueSpec,
    },
    /// Scaling function f_N(x) = E_N(x)/E_N(0) and its empirical fit.
    Scaling {
        #[arg(long)]
        n: ValueSpec,
        #[arg(long)]
        x: ValueSpec,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        l: f64,
    },
    /// Quantized-string free energy, internal energy and entropy.
    Thermo {
        /// Integer length ratio >= 1; sweepable.
        #[arg(long)]
        s: ValueSpec,
        /// Piece-II tension.
        #[arg(long, default_value_t = 1.0)]
        tension_ii: f64,
        /// Inverse temperature; sweepable.
        #[arg(long)]
        beta: ValueSpec,
        /// Finite-difference step for U and S (default beta * 1e-4).
        #[arg(long)]
        dbeta: Option<f64>,
    },
    /// Hagedorn inverse temperature (both closed forms) and mean tension.
    Hagedorn {
        #[arg(long)]
        s: ValueSpec,
        #[arg(long, default_value_t = 1.0)]
        tension_ii: f64,
    },
    /// Plateau energy density u(z) for z > 1.
    QftU {
        /// Plateau coordinate; sweepable.
        #[arg(long)]
        z: ValueSpec,
        /// Also run the 3-D Monte-Carlo oracle with this many samples (0 = off).
        #[arg(long, default_value_t = 0)]
        mc_samples: usize,
    },
    /// Q(kappa) diagnostic table for the plateau Green function.
    QftQ {
        /// Frequency magnitude; sweepable.
        #[arg(long)]
        kappa: ValueSpec,
    },
    /// Special-function kernel operations.
    Specfun {
        /// Action to run; only `selftest` is defined.
        action: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((msg, code)) => {
            eprintln!("casimir: {msg}");
            ExitCode::from(code)
        }
    }
}

type RunError = (String, u8);

#[derive(Debug, Default, Clone)]
struct ConfigFile {
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    tail_cut: Option<f64>,
    threads: Option<usize>,
}

fn load_config(path: &PathBuf) -> Result<ConfigFile, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (format!("cannot read config {}: {e}", path.display()), EXIT_USAGE))?;
    let mut cfg = ConfigFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| (format!("config line {} is not key=value: '{line}'", lineno + 1), EXIT_USAGE))?;
        let key = key.trim();
        let value = value.trim();
        let parse_f64 = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| (format!("config key {key} has non-numeric value '{v}'"), EXIT_USAGE))
        };
        match key {
            "rel_tol" => cfg.rel_tol = Some(parse_f64(value)?),
            "abs_tol" => cfg.abs_tol = Some(parse_f64(value)?),
            "tail_cut" => cfg.tail_cut = Some(parse_f64(value)?),
            "threads" => {
                cfg.threads = Some(value.parse::<usize>().map_err(|_| {
                    (format!("config key threads has non-integer value '{value}'"), EXIT_USAGE)
                })?)
            }
            other => return Err((format!("unknown config key '{other}'"), EXIT_USAGE)),
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), RunError> {
    let config = match &cli.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default(),
    };

    let defaults = QuadratureSettings::default();
    let settings = QuadratureSettings {
        rel_tol: cli.rel_tol.or(config.rel_tol).unwrap_or(defaults.rel_tol),
        abs_tol: cli.abs_tol.or(config.abs_tol).unwrap_or(defaults.abs_tol),
        tail_cut: cli.tail_cut.or(config.tail_cut).unwrap_or(defaults.tail_cut),
        max_subdivisions: defaults.max_subdivisions,
    };
    settings
        .validate()
        .map_err(|e| (e.to_string(), EXIT_USAGE))?;

    let threads = cli
        .threads
        .or(config.threads)
        .or_else(|| std::env::var("CASIMIR_THREADS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    if threads > 0 {
        // ignore the error if a pool already exists (e.g. under tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let mut writer = Writer::new(cli.format, cli.timings);
    writer.echo("rel_tol", &settings.rel_tol.to_string());
    writer.echo("abs_tol", &settings.abs_tol.to_string());
    writer.echo("tail_cut", &settings.tail_cut.to_string());

    let outcome = dispatch(&cli.command, &settings, cli.seed, cli.timings, &mut writer)?;

    let text = writer.finish();
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| (format!("cannot write {}: {e}", path.display()), 1))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| (format!("stdout: {e}"), 1))?;
        }
    }
    outcome
}

/// Evaluate a sweep in parallel, preserving grid order. A failure in a
/// single-point run aborts with its exit class; failures inside a proper
/// sweep are recorded in-stream and the sweep continues.
fn evaluate<P, R, F>(points: Vec<P>, f: F) -> Result<Vec<R>, RunError>
where
    P: Send + Sync,
    R: Send,
    F: Fn(&P) -> Result<R, (String, u8)> + Sync,
{
    let single = points.len() == 1;
    let results: Vec<Result<R, (String, u8)>> = points.par_iter().map(&f).collect();
    if single {
        return match results.into_iter().next().unwrap() {
            Ok(r) => Ok(vec![r]),
            Err(e) => Err(e),
        };
    }
    // proper sweep: the caller embeds errors into rows, so f never fails here
    Ok(results.into_iter().map(|r| r.expect("sweep closures embed errors")).collect())
}

fn class_code(c: ErrorClass) -> u8 {
    match c {
        ErrorClass::Domain => EXIT_DOMAIN,
        ErrorClass::Convergence => EXIT_CONVERGENCE,
    }
}

fn timing(t0: Instant, timings: bool) -> Option<f64> {
    timings.then(|| t0.elapsed().as_secs_f64() * 1e3)
}

fn dispatch(
    cmd: &Command,
    settings: &QuadratureSettings,
    seed: u64,
    timings: bool,
    writer: &mut Writer,
) -> Result<Result<(), RunError>, RunError> {
    match cmd {
        Command::Twopiece { x, s, l, method } => {
            writer.echo("command", "twopiece");
            writer.echo("L", &l.to_string());
            writer.header::<TwoPieceRecord>();
            let grid: Vec<(f64, f64)> = cross(&x.values(), &s.values());
            let single = grid.len() == 1;
            let rows = evaluate(grid, |&(xv, sv)| {
                let t0 = Instant::now();
                let result = twopiece_point(xv, sv, *l, *method, settings);
                let mut rec = TwoPieceRecord {
                    x: xv,
                    s: sv,
                    l: *l,
                    t: 0.0,
                    method: method_name(*method).to_string(),
                    value: None,
                    abs_error_est: None,
                    wall_time_ms: timing(t0, timings),
                    error: None,
                };
                match result {
                    Ok((v, e)) => {
                        rec.value = Some(v);
                        rec.abs_error_est = Some(e);
                        Ok(rec)
                    }
                    Err((msg, code)) if single => Err((msg, code)),
                    Err((msg, _)) => {
                        rec.error = Some(msg);
                        Ok(rec)
                    }
                }
            })?;
            for r in rows {
                writer.row(&r);
            }
        }
        Command::TwopieceThermal { x, s, l, temperature } => {
            writer.echo("command", "twopiece-thermal");
            writer.echo("L", &l.to_string());
            writer.header::<TwoPieceRecord>();
            let mut triples = Vec::new();
            for xv in x.values() {
                for sv in s.values() {
                    for tv in temperature.values() {
                        triples.push((xv, sv, tv));
                    }
                }
            }
            let single = triples.len() == 1;
            let rows = evaluate(triples, |&(xv, sv, tv)| {
                let t0 = Instant::now();
                let mut rec = TwoPieceRecord {
                    x: xv,
                    s: sv,
                    l: *l,
                    t: tv,
                    method: "contour".to_string(),
                    value: None,
                    abs_error_est: None,
                    wall_time_ms: timing(t0, timings),
                    error: None,
                };
                let result = TwoPieceString::new(xv, sv, *l)
                    .and_then(|cfg| cfg.energy_contour_t(tv, 8))
                    .map_err(|e| (e.to_string(), class_code(e.class())));
                match result {
                    Ok(e) => {
                        rec.value = Some(e.value);
                        rec.abs_error_est = Some(e.abs_error_est);
                        rec.wall_time_ms = timing(t0, timings);
                        Ok(rec)
                    }
                    Err((msg, code)) if single => Err((msg, code)),
                    Err((msg, _)) => {
                        rec.error = Some(msg);
                        Ok(rec)
                    }
                }
            })?;
            for r in rows {
                writer.row(&r);
            }
        }
        Command::Npiece { n, x, l, method } => {
            writer.echo("command", "npiece");
            writer.echo("L", &l.to_string());
            if method != "integral" {
                return Err((format!("unknown npiece method '{method}' (use 'integral')"), EXIT_USAGE));
            }
            writer.header::<NPieceRecord>();
            let grid = cross(&n.values(), &x.values());
            let single = grid.len() == 1;
            let rows = evaluate(grid, |&(nv, xv)| {
                let t0 = Instant::now();
                let mut rec = NPieceRecord {
                    n: nv as u32,
                    x: xv,
                    l: *l,
                    t: 0.0,
                    value: None,
                    f_n: None,
                    fit_residual: None,
                    wall_time_ms: timing(t0, timings),
                    error: None,
                };
                let result = int_arg(nv, "N")
                    .and_then(|ni| NPieceString::new(ni, xv, *l).map_err(|e| (e.to_string(), class_code(e.class()))))
                    .and_then(|cfg| {
                        let e = cfg
                            .energy_zero_t(settings)
                            .map_err(|e| (e.to_string(), class_code(e.class())))?;
                        let f_n = if cfg.n >= 2 {
                            let n_f = cfg.n as f64;
                            Some(e.value / (-std::f64::consts::PI / (6.0 * l) * (n_f * n_f - 1.0)))
                        } else {
                            None
                        };
                        Ok((e, f_n))
                    });
                match result {
                    Ok((e, f_n)) => {
                        rec.value = Some(e.value);
                        rec.f_n = f_n;
                        rec.fit_residual = f_n.map(|f| f - scaling_fit(xv));
                        rec.wall_time_ms = timing(t0, timings);
                        Ok(rec)
                    }
                    Err((msg, code)) if single => Err((msg, code)),
                    Err((msg, _)) => {
                        rec.error = Some(msg);
                        Ok(rec)
                    }
                }
            })?;
            for r in rows {
                writer.row(&r);
            }
        }
        Command::NpieceThermal { n, x, l, temperature } => {
            writer.echo("command", "npiece-thermal");
            writer.echo("L", &l.to_string());
            writer.header::<NPieceRecord>();
            let mut grid = Vec::new();
            for nv in n.values() {
                for xv in x.values() {
                    for tv in temperature.values() {
                        grid.push((nv, xv, tv));
                    }
                }
            }
            let single = grid.len() == 1;
            let rows = evaluate(grid, |&(nv, xv, tv)| {
                let t0 = Instant::now();
                let mut rec = NPieceRecord {
                    n: nv as u32,
                    x: xv,
                    l: *l,
                    t: tv,
                    value: None,
                    f_n: None,
                    fit_residual: None,
                    wall_time_ms: timing(t0, timings),
                    error: None,
                };
                let result = int_arg(nv, "N")
                    .and_then(|ni| NPieceString::new(ni, xv, *l).map_err(|e| (e.to_string(), class_code(e.class()))))
                    .and_then(|cfg| {
                        cfg.energy_finite_t(tv)
                            .map_err(|e| (e.to_string(), class_code(e.class())))
                    });
                match result {
                    Ok(e) => {
                        rec.value = Some(e.value);
                        rec.wall_time_ms = timing(t0, timings);
                        Ok(rec)
                    }
                    Err((msg, code)) if single => Err((msg, code)),
                    Err((msg, _)) => {
                        rec.error = Some(msg);
                        Ok(rec)
                    }
                }
            })?;
            for r in rows {
                writer.row(&r);
            }
        }
        Command::Scaling { n, x, l } => {
            writer.echo("command", "scaling");
            writer.echo("L", &l.to_string());
            let grid = cross(&n.values(), &x.values());
            let single = grid.len() == 1;
            let rows = evaluate(grid, |&(nv, xv)| {
                let t0 = Instant::now();
                let mut rec = ScalingRecord {
                    n: nv as u32,
                    x: xv,
                    l: *l,
                    f_n: None,
                    fit: scaling_fit(xv),
                    fit_residual: None,
                    wall_time_ms: timing(t0, timings),
                    error: None,
                };
                let result = int_arg(nv, "N")
                    .and_then(|ni| NPieceString::new(ni, xv, *l).map_err(|e| (e.to_string(), class_code(e.class()))))
                    .and_then(|cfg| cfg.scaling_f(settings).map_err(|e| (e.to_string(), class_code(e.class()))));
                match result {
                    Ok(f) => {
                        rec.f_n = Some(f);
                        rec.fit_residual = Some(f - rec.fit);
                        rec.wall_time_ms = timing(t0, timings);
                        Ok(rec)
                    }
                    Err((msg, code)) if single => Err((msg, code)),
                    Err((msg, _)) => {
                        rec.error = Some(msg);
                        Ok(rec)
                    }
                }
            })?;
            // best-fit exponent over successful sweep points
            let points: Vec<(f64, f64)> = rows
                .iter()
                .filter_map(|r: &ScalingRecord| r.f_n.map(|f| (r.x, f)))
                .filter(|&(x, f)| x > 0.0 && x < 1.0 && f > 0.0)
                .collect();
            if points.len() >= 2 {
                let (p, max_resid) = casimir_core::npiece::fit_scaling_exponent(&points);
                writer.echo("best_fit_exponent", &p.to_string());
                writer.echo("max_fixed_exponent_residual", &max_resid.to_string());
            }
            writer.header::<ScalingRecord>();
            for r in rows {
                writer.row(&r);
            }
        }
        Command::Thermo { s, tension_ii, beta, dbeta } => {
            writer.echo("command", "thermo");
            writer.echo("T_II", &tension_ii.to_string());
            writer.header::<ThermoRecord>();
            let grid = cross(&s.values(), &beta.values());
            let single = grid.len() == 1;
            let rows = evaluate(grid, |&(sv, bv)| {
                let t0 = Instant::now();
                let s_int = int_arg(sv, "s");
                let beta_c = s_int
                    .as_ref()
                    .ok()
                    .map(|&si| thermo::hagedorn_beta(si, *tension_ii))
                    .unwrap_or(f64::NAN);
                let mut rec = ThermoRecord {
                    s: sv as u32,
                    tension_ii: *tension_ii,
                    beta: bv,
                    free_energy: None,
                    casimir_term: None,
                    integral_term: None,
                    internal_energy: None,
                    entropy: None,
                    beta_c,
                    wall_time_ms: timing(t0, timings),
                    error: None,
                };
                let result = s_int.and_then(|si| {
                    let p = thermo::QuantizedStringParams::new(si, *tension_ii, bv)
                        .map_err(|e| (e.to_string(), class_code(e.class())))?;
                    let f = thermo::free_energy(&p, settings)
                        .map_err(|e| (e.to_string(), class_code(e.class())))?;
                    let h = dbeta.unwrap_or(bv * 1e-4);
                    let td = thermo::thermodynamics(&p, h, settings)
                        .map_err(|e| (e.to_string(), class_code(e.class())))?;
                    Ok((f, td))
                });
                match result {
                    Ok((f, td)) => {
                        rec.free_energy = Some(f.value);
                        rec.casimir_term = Some(f.casimir_term);
                        rec.integral_term = Some(f.integral_term);
                        rec.internal_energy = Some(td.internal_energy);
                        rec.entropy = Some(td.entropy);
                        rec.wall_time_ms = timing(t0, timings);
                        Ok(rec)
                    }
                    Err((msg, code)) if single => Err((msg, code)),
                    Err((msg, _)) => {
                        rec.error = Some(msg);
                        Ok(rec)
                    }
                }
            })?;
            for r in rows {
                writer.row(&r);
            }
        }
        Command::Hagedorn { s, tension_ii } => {
            writer.echo("command", "hagedorn");
            writer.echo("T_II", &tension_ii.to_string());
            writer.header::<HagedornRecord>();
            let grid: Vec<f64> = s.values();
            let single = grid.len() == 1;
            let rows = evaluate(grid, |&sv| {
                let mut rec = HagedornRecord {
                    s: sv as u32,
                    tension_ii: *tension_ii,
                    t_mean: f64::NAN,
                    beta_c: f64::NAN,
                    beta_c_alt: f64::NAN,
                    wall_time_ms: None,
                    error: None,
                };
                match int_arg(sv, "s") {
                    Ok(si) => {
                        let (a, b) = thermo::hagedorn_beta_forms(si, *tension_ii);
                        rec.t_mean = thermo::mean_tension(si, *tension_ii);
                        rec.beta_c = b;
                        rec.beta_c_alt = a;
                        Ok(rec)
                    }
                    Err((msg, code)) if single => Err((msg, code)),
                    Err((msg, _)) => {
                        rec.error = Some(msg);
                        Ok(rec)
                    }
                }
            })?;
            for r in rows {
                writer.row(&r);
            }
        }
        Command::QftU { z, mc_samples } => {
            writer.echo("command", "qft-u");
            let mc = *mc_samples > 0;
            if mc {
                writer.echo("mc_samples", &mc_samples.to_string());
                writer.echo("seed", &seed.to_string());
            }
            writer.raw_header(&QftURecord::header_mc(timings, mc));
            let grid: Vec<f64> = z.values();
            let single = grid.len() == 1;
            let rows = evaluate(grid, |&zv| {
                let t0 = Instant::now();
                let mut rec = QftURecord {
                    z: zv,
                    u: None,
                    abs_error_est: None,
                    u_mc: None,
                    u_mc_se: None,
                    wall_time_ms: timing(t0, timings),
                    error: None,
                };
                let result = qft::energy_density(zv, settings)
                    .map_err(|e| (e.to_string(), class_code(e.class())))
                    .and_then(|u| {
                        let mc_pair = if mc {
                            Some(
                                qft::energy_density_mc(zv, *mc_samples, seed)
                                    .map_err(|e| (e.to_string(), class_code(e.class())))?,
                            )
                        } else {
                            None
                        };
                        Ok((u, mc_pair))
                    });
                match result {
                    Ok((u, mc_pair)) => {
                        rec.u = Some(u.value);
                        rec.abs_error_est = Some(u.abs_error_est);
                        if let Some((m, se)) = mc_pair {
                            rec.u_mc = Some(m);
                            rec.u_mc_se = Some(se);
                        }
                        rec.wall_time_ms = timing(t0, timings);
                        Ok(rec)
                    }
                    Err((msg, code)) if single => Err((msg, code)),
                    Err((msg, _)) => {
                        rec.error = Some(msg);
                        Ok(rec)
                    }
                }
            })?;
            for r in rows {
                let fields = r.fields_mc(timings, mc);
                writer.raw_row(&r, fields);
            }
        }
        Command::QftQ { kappa } => {
            writer.echo("command", "qft-q");
            writer.header::<QftQRecord>();
            let grid: Vec<f64> = kappa.values();
            let single = grid.len() == 1;
            let rows = evaluate(grid, |&kv| {
                let mut rec = QftQRecord { kappa: kv, q: None, wall_time_ms: None, error: None };
                match qft::q_factor(kv) {
                    Ok(q) => {
                        rec.q = Some(q);
                        Ok(rec)
                    }
                    Err(e) if single => Err((e.to_string(), class_code(e.class()))),
                    Err(e) => {
                        rec.error = Some(e.to_string());
                        Ok(rec)
                    }
                }
            })?;
            for r in rows {
                writer.row(&r);
            }
        }
        Command::Specfun { action } => {
            if action != "selftest" {
                return Err((format!("unknown specfun action '{action}' (use 'selftest')"), EXIT_USAGE));
            }
            writer.echo("command", "specfun selftest");
            writer.raw_header(&["check", "observed", "tolerance", "status"]);
            let (checks, all_pass) = selftest::run();
            for c in &checks {
                let fields = vec![
                    c.check.clone(),
                    format!("{:e}", c.observed),
                    format!("{:e}", c.tolerance),
                    c.status.clone(),
                ];
                writer.raw_row(c, fields);
            }
            if !all_pass {
                return Ok(Err(("specfun selftest failed".to_string(), EXIT_CONVERGENCE)));
            }
        }
    }
    Ok(Ok(()))
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Contour => "contour",
        MethodArg::Cutoff => "cutoff",
        MethodArg::Zeta => "zeta",
        MethodArg::ClosedForm => "closed_form",
    }
}

fn cross(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push((x, y));
        }
    }
    out
}

fn int_arg(v: f64, name: &str) -> Result<u32, (String, u8)> {
    let r = v.round();
    if (v - r).abs() > 1e-9 || r < 1.0 || r > u32::MAX as f64 {
        return Err((format!("{name} must be a positive integer, got {v}"), EXIT_DOMAIN));
    }
    Ok(r as u32)
}

/// Zero-temperature two-piece evaluation under the requested method.
fn twopiece_point(
    x: f64,
    s: f64,
    l: f64,
    method: MethodArg,
    settings: &QuadratureSettings,
) -> Result<(f64, f64), (String, u8)> {
    let cfg = TwoPieceString::new(x, s, l).map_err(|e| (e.to_string(), class_code(e.class())))?;
    match method {
        MethodArg::Contour => {
            let e = cfg.energy_contour(settings).map_err(|e| (e.to_string(), class_code(e.class())))?;
            Ok((e.value, e.abs_error_est))
        }
        MethodArg::Cutoff | MethodArg::Zeta => {
            // two branch periods in the reduced variable suffice for
            // classification of either parity
            let omega_max = 4.0 * std::f64::consts::PI * (1.0 + s) / l * 1.001;
            let spec = cfg
                .find_spectrum(omega_max)
                .map_err(|e| (e.to_string(), class_code(e.class())))?;
            let e = if method == MethodArg::Cutoff {
                cfg.energy_cutoff(&spec)
            } else {
                cfg.energy_zeta(&spec)
            }
            .map_err(|e| (e.to_string(), class_code(e.class())))?;
            Ok((e.value, e.abs_error_est))
        }
        MethodArg::ClosedForm => {
            if !(s > 0.0 && l > 0.0) {
                return Err(("closed form needs s > 0 and L > 0".to_string(), EXIT_DOMAIN));
            }
            Ok((casimir_core::twopiece::energy_x0_closed(s, l), 0.0))
        }
    }
}
