//! Command-line front end for `chgeom`.

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod svg;

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::commands::{Report, Table};
use crate::config::{Cli, Command, Format, RunConfig, Source};
use crate::error::{CliError, CliResult};

/// Run a validated configuration and return the command report.
pub fn execute(cfg: &RunConfig) -> CliResult<Report> {
    match cfg.command {
        Command::Classify => commands::classify(cfg),
        Command::Dirichlet => commands::dirichlet(cfg),
        Command::Bend => commands::bend(cfg),
        Command::Orbit => commands::orbit(cfg),
        Command::Limitset => commands::limitset(cfg),
        Command::Packing => commands::packing(cfg),
        Command::Profile => commands::profile(cfg),
    }
}

pub fn config_json(cfg: &RunConfig) -> Value {
    let (preset, input) = match &cfg.source {
        Some(Source::Preset(p)) => (json!(p.name()), Value::Null),
        Some(Source::File(f)) => (Value::Null, json!(f.display().to_string())),
        None => (Value::Null, Value::Null),
    };
    json!({
        "preset": preset,
        "input": input,
        "n": cfg.n,
        "radius": cfg.radius,
        "rays": cfg.rays,
        "depth": cfg.depth,
        "eta_grid": cfg.etas,
        "zeta": cfg.zeta,
        "seed": cfg.seed,
        "tol": cfg.tol,
        "model": cfg.model.map(|m| m.to_string()),
        "u0": cfg.u0,
        "window": cfg.window,
        "samples": cfg.samples,
        "probe_len": cfg.probe_len,
    })
}

/// The JSON document: metadata, echoed configuration and result.
pub fn envelope(cfg: &RunConfig, report: &Report, timestamp: u64) -> Value {
    json!({
        "metadata": {
            "tool": "chgeom",
            "version": env!("CARGO_PKG_VERSION"),
            "command": cfg.command.name(),
            "seed": cfg.seed,
            "timestamp": timestamp,
        },
        "config": config_json(cfg),
        "result": report.result,
    })
}

pub fn render_csv(table: &Table) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Render the report in the requested format.
pub fn render(cfg: &RunConfig, report: &Report) -> CliResult<String> {
    match cfg.format {
        Format::Json => {
            let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            let mut s = serde_json::to_string_pretty(&envelope(cfg, report, ts)).expect("json values serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(&report.table),
        Format::Svg => Ok(svg::scatter(&report.scatter)),
    }
}

/// Write via a temporary sibling and rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::Input(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Validate, compute, render and emit.
pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = RunConfig::from_cli(cli)?;
    let report = execute(&cfg)?;
    let text = render(&cfg, &report)?;
    match &cfg.out {
        Some(path) => write_atomic(path, &text),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}
