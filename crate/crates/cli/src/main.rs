mod args;
mod baseline;
mod commands;
mod config;
mod report;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, CommonArgs, Mode};
use baseline::{sha256_hex, BaselineStore, Outcome, Record};
use commands::{CommandError, EkOptions};
use config::{parse_count, ConfigError, ExperimentConfig};
use report::Report;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

fn usage(field: &str, message: impl Into<String>) -> CommandError {
    CommandError::Config(ConfigError {
        field: field.into(),
        line: None,
        message: message.into(),
    })
}

fn resolve(common: &CommonArgs, extra: BTreeMap<String, Value>) -> Result<ExperimentConfig, CommandError> {
    Ok(ExperimentConfig::resolve(common, extra)?)
}

fn check_alpha(cfg: &ExperimentConfig, alpha: Option<f64>) -> Result<(), CommandError> {
    match alpha {
        Some(a) if !(a.is_finite() && a > 0.0) => Err(usage("alpha", format!("must be positive, got {a}"))),
        Some(_) if cfg.mode != Mode::Approximate => {
            Err(usage("alpha", "an alpha override needs --mode approximate"))
        }
        _ => Ok(()),
    }
}

fn execute(command: &Command) -> Result<(Report, ExperimentConfig), CommandError> {
    let none = BTreeMap::new;
    match command {
        Command::Count(c) => {
            let cfg = resolve(c, none())?;
            install_threads(&cfg)?;
            Ok((commands::count(&cfg)?, cfg))
        }
        Command::Saddle(c) => {
            let cfg = resolve(c, none())?;
            install_threads(&cfg)?;
            Ok((commands::saddle(&cfg)?, cfg))
        }
        Command::Lemmas(a) => {
            let shift = a.alpha_shift.unwrap_or(0.0);
            let mut extra = none();
            if shift != 0.0 {
                extra.insert("alpha_shift".into(), json!(shift));
            }
            let cfg = resolve(&a.common, extra)?;
            install_threads(&cfg)?;
            Ok((commands::lemmas(&cfg, shift)?, cfg))
        }
        Command::Ek(a) => {
            let mut extra = none();
            extra.insert("model_only".into(), json!(a.model_only));
            if let Some(al) = a.alpha {
                extra.insert("alpha".into(), json!(al));
            }
            let cfg = resolve(&a.common, extra)?;
            check_alpha(&cfg, a.alpha)?;
            install_threads(&cfg)?;
            let opts = EkOptions {
                model_only: a.model_only,
                alpha: a.alpha,
                out_dir: a.out_dir.as_deref(),
            };
            let report = commands::ek(&cfg, &opts)?;
            if let Some(dir) = &a.out_dir {
                std::fs::write(dir.join("report.json"), report::render_json(&report, &cfg) + "\n")?;
            }
            Ok((report, cfg))
        }
        Command::Model(a) => {
            let samples = a.samples.unwrap_or(0);
            let mut extra = none();
            if let Some(al) = a.alpha {
                extra.insert("alpha".into(), json!(al));
            }
            extra.insert("samples".into(), json!(samples));
            let cfg = resolve(&a.common, extra)?;
            check_alpha(&cfg, a.alpha)?;
            install_threads(&cfg)?;
            Ok((commands::model(&cfg, a.alpha, samples)?, cfg))
        }
        Command::Sums(a) => {
            let ts = match &a.t {
                Some(s) => s
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(parse_count)
                    .collect::<Result<Vec<u64>, String>>()
                    .map_err(|m| usage("t", m))?,
                None => Vec::new(),
            };
            let mut extra = none();
            extra.insert("t".into(), json!(ts));
            let cfg = resolve(&a.common, extra)?;
            install_threads(&cfg)?;
            Ok((commands::sums(&cfg, &ts)?, cfg))
        }
    }
}

fn install_threads(cfg: &ExperimentConfig) -> Result<(), CommandError> {
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage("threads", e.to_string()))?;
    }
    Ok(())
}

fn suggestion(e: &smoothek::Error) -> Option<&'static str> {
    match e {
        smoothek::Error::Capacity { what, .. } if what.contains("scan") => {
            Some("use a smaller x; population histograms can use --engine tree instead of the scan")
        }
        smoothek::Error::Capacity { .. } => Some("reduce x, or drop --cache-dir to skip the LPF table"),
        smoothek::Error::ConvolutionBudget { .. } => {
            Some("lower --trunc-exponent to shrink Y, or use `model --samples` for Monte Carlo")
        }
        _ => None,
    }
}

fn record_baseline(report: &Report, cfg: &ExperimentConfig) -> Result<bool, CommandError> {
    let Some(dir) = &cfg.cache_dir else {
        return Ok(true);
    };
    let payload = report::payload(report);
    let record = Record {
        command: report.command.into(),
        config_hash: cfg.hash(report.command),
        code_version: report::code_version(),
        thresholds: commands::thresholds(),
        payload_sha256: sha256_hex(payload.as_bytes()),
        payload,
    };
    match BaselineStore::new(dir).check_or_store(record)? {
        Outcome::Stored => {
            eprintln!("baseline stored in {}", dir.display());
            Ok(true)
        }
        Outcome::Reproduced => {
            eprintln!("baseline reproduced");
            Ok(true)
        }
        Outcome::Mismatch { stored, fresh } => {
            eprintln!("baseline mismatch: stored payload {stored}, this run {fresh}");
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, cfg) = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match &e {
                CommandError::Config(_) => EXIT_USAGE,
                CommandError::Core(core) => match suggestion(core) {
                    Some(hint) => {
                        eprintln!("hint: {hint}");
                        EXIT_CAPACITY
                    }
                    None => EXIT_FAIL,
                },
                CommandError::Io(_) => EXIT_FAIL,
            });
        }
    };
    print!("{}", report::render(&report, &cfg));
    let reproduced = match record_baseline(&report, &cfg) {
        Ok(ok) => ok,
        Err(e) => {
            eprintln!("error: {e}");
            false
        }
    };
    if report.passed() && reproduced {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
