use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use curv_core::ball::{peak_elements, DEFAULT_ELEMENT_BUDGET};
use curv_core::{CurvError, Result};

use curv_cli::args::Cli;
use curv_cli::commands::{self, Context};
use curv_cli::config;
use curv_cli::report::{self, Report};

const BUDGET_ENV: &str = "CURV_MAX_ELEMENTS";

fn fail(code: &str, message: &str, exit: i32) -> ExitCode {
    let err = serde_json::json!({ "error": code, "message": message });
    eprintln!("{err}");
    ExitCode::from(exit as u8)
}

/// `--budget`, then the environment, then the library default.
fn element_budget(cli: &Cli) -> Result<usize> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CurvError::Config(format!("{BUDGET_ENV}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_ELEMENT_BUDGET),
    }
}

fn prepare(cli: &Cli) -> Result<(Context, Report)> {
    let group = cli
        .group
        .as_deref()
        .ok_or_else(|| CurvError::Config("--group is required".into()))?;
    let mut spec = config::load_group(group)?;
    if let Some(path) = &cli.genset {
        spec = config::load_genset(&spec, path)?;
    }
    let kernel = match &cli.kernel {
        Some(_) if !cli.command.uses_kernel() => {
            return Err(CurvError::Config(format!("--kernel is not used by {}", cli.command.name())))
        }
        Some(path) => Some(config::load_kernel(&spec, path)?),
        None => None,
    };
    let budget = element_budget(cli)?;

    let mut echo = serde_json::to_value(cli).expect("arguments serialise");
    echo["element_budget"] = budget.into();
    let mut description = spec.describe();
    if let Some(k) = &kernel {
        description = format!("{description}; kernel of {}", k.describe());
    }
    let report = Report::new(cli.command.name(), echo, description);
    let ctx = Context { spec, kernel, budget, explicit_budget: cli.budget, genset_given: cli.genset.is_some() };
    Ok((ctx, report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();

    if let Some(secs) = cli.max_seconds {
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_secs(secs));
            fail("resource_cap", &format!("wall-clock limit of {secs} s exceeded"), 4);
            std::process::exit(4);
        });
    }

    let (ctx, mut report) = match prepare(&cli) {
        Ok(p) => p,
        Err(e) => return fail(e.code(), &e.to_string(), e.exit_code()),
    };
    if let Err(e) = commands::run(&ctx, &cli.command, &mut report) {
        return fail(e.code(), &e.to_string(), e.exit_code());
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    report.peak_elements = peak_elements();
    match report::emit(&mut report, cli.out.as_deref(), &cli.format) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => fail("io", &e.to_string(), 2),
    }
}
