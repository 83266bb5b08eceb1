use std::fs::File;
use std::io::Write;

use matbeta::integrate::{Engine, VerificationReport, Verdict};
use matbeta::registry::{self, lookup, parse_param, Identity};
use matbeta::ParamMap;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{Cli, Command};
use crate::config::Settings;
use crate::error::{CliError, ExitStatus};
use crate::grid::{parse_axis, points};

pub fn dispatch<W: Write>(cli: Cli, out: &mut W) -> Result<ExitStatus, CliError> {
    match &cli.command {
        Command::List => {
            let s = Settings::resolve(&cli, &[], &[])?;
            list(&s, out)
        }
        Command::Verify { id, rest } => {
            let s = Settings::resolve(&cli, rest, &[])?;
            verify(id, &s, out)
        }
        Command::Tabulate { id, grid, lhs, output, rest } => {
            let s = Settings::resolve(&cli, rest, &["grid", "lhs", "output"])?;
            let mut axes: Vec<String> = grid.clone();
            axes.extend(s.extra_values("grid").flatten().map(String::from));
            let lhs = *lhs || s.extra_values("lhs").next().is_some();
            let output = s
                .extra_values("output")
                .flatten()
                .last()
                .map(std::path::PathBuf::from)
                .or_else(|| output.clone());
            match output {
                Some(path) => {
                    let mut f = File::create(&path).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    tabulate(id, &axes, lhs, &s, &mut f)
                }
                None => tabulate(id, &axes, lhs, &s, out),
            }
        }
        Command::Sample { id, seeds, rest } => {
            let s = Settings::resolve(&cli, rest, &["seeds"])?;
            let seeds = match s.extra_values("seeds").flatten().last() {
                Some(v) => v.parse().map_err(|_| CliError::usage(format!("--seeds: cannot parse `{v}`")))?,
                None => *seeds,
            };
            sample(id, seeds, &s, out)
        }
    }
}

fn param_map(identity: &Identity, pairs: &[(String, String)]) -> Result<ParamMap, CliError> {
    let mut p = ParamMap::new();
    for (k, v) in pairs {
        p.insert(k, parse_param(identity, k, v)?);
    }
    Ok(p)
}

pub fn list<W: Write>(s: &Settings, out: &mut W) -> Result<ExitStatus, CliError> {
    let rows = registry::list();
    if s.json {
        serde_json::to_writer_pretty(&mut *out, &rows)?;
        writeln!(out)?;
        return Ok(ExitStatus::Pass);
    }
    let width = rows.iter().map(|r| r.id.len()).max().unwrap_or(0);
    for r in &rows {
        let params: Vec<String> = r
            .params
            .iter()
            .map(|p| if p.default.is_empty() { p.name.to_string() } else { format!("{}={}", p.name, p.default) })
            .collect();
        writeln!(out, "{:width$}  {} [{}]", r.id, r.label, r.arity)?;
        writeln!(out, "{:width$}  params: {}", "", params.join(" "))?;
        for n in &r.notes {
            writeln!(out, "{:width$}  note: {n}", "")?;
        }
    }
    Ok(ExitStatus::Pass)
}

fn fmt_num(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn write_report<W: Write>(r: &VerificationReport, json: bool, out: &mut W) -> Result<(), CliError> {
    if json {
        serde_json::to_writer_pretty(&mut *out, r)?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "identity  {}", r.identity)?;
    writeln!(out, "params    {}", r.params)?;
    let mut lhs = fmt_num(r.lhs.value);
    if let Some(im) = r.lhs.value_im {
        lhs.push_str(&format!(" {:+.12e}i", im));
    }
    if let Some(se) = r.lhs.stderr {
        lhs.push_str(&format!(" ± {se:.3e} (stderr)"));
    }
    if let Some(b) = r.lhs.errbound {
        lhs.push_str(&format!(" ± {b:.3e} (bound)"));
    }
    writeln!(out, "lhs       {lhs}")?;
    let engine = match r.lhs.seed {
        Some(seed) => format!("{}, {} samples, seed {seed}", r.lhs.engine, r.lhs.samples),
        None => format!("{}, {} evaluations", r.lhs.engine, r.lhs.samples),
    };
    writeln!(out, "engine    {engine}")?;
    let mut rhs = fmt_num(r.rhs);
    if let Some(im) = r.rhs_im {
        rhs.push_str(&format!(" {:+.12e}i", im));
    }
    if let Some(se) = r.rhs_stderr {
        rhs.push_str(&format!(" ± {se:.3e} (stderr)"));
    }
    writeln!(out, "rhs       {rhs}")?;
    writeln!(out, "z         {:.3}", r.z)?;
    writeln!(out, "verdict   {}", r.verdict)?;
    for n in &r.notes {
        writeln!(out, "note      {n}")?;
    }
    Ok(())
}

pub fn verify<W: Write>(id: &str, s: &Settings, out: &mut W) -> Result<ExitStatus, CliError> {
    let identity = lookup(id)?;
    let params = param_map(identity, &s.params)?;
    let report = identity.verify(&params, &s.run_options())?;
    write_report(&report, s.json, out)?;
    Ok(report.verdict.into())
}

#[derive(Debug, Default, Serialize)]
struct Row {
    rhs: Option<f64>,
    rhs_im: Option<f64>,
    lhs: Option<f64>,
    stderr: Option<f64>,
    errbound: Option<f64>,
    z: Option<f64>,
    verdict: Option<Verdict>,
    error: Option<String>,
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.15e}")).unwrap_or_default()
}

pub fn tabulate<W: Write>(id: &str, axes: &[String], with_lhs: bool, s: &Settings, out: &mut W) -> Result<ExitStatus, CliError> {
    let identity = lookup(id)?;
    let axes = axes.iter().map(|a| parse_axis(identity, a)).collect::<Result<Vec<_>, _>>()?;
    let fixed: Vec<(String, String)> = s
        .params
        .iter()
        .filter(|(k, _)| !axes.iter().any(|a| &a.name == k))
        .cloned()
        .collect();
    param_map(identity, &fixed)?;
    let opts = s.run_options();
    let mut status = ExitStatus::Pass;
    let mut rows = Vec::new();
    for point in points(&axes) {
        let mut pairs = fixed.clone();
        pairs.extend(point);
        let mut row = Row::default();
        let result: Result<(), CliError> = (|| {
            let params = param_map(identity, &pairs)?;
            if with_lhs {
                let r = identity.verify(&params, &opts)?;
                row.rhs = Some(r.rhs);
                row.rhs_im = r.rhs_im;
                row.lhs = Some(r.lhs.value);
                row.stderr = r.lhs.stderr;
                row.errbound = r.lhs.errbound;
                row.z = Some(r.z);
                row.verdict = Some(r.verdict);
                status = status.worst(r.verdict.into());
            } else {
                let v = identity.rhs(&params)?;
                row.rhs = Some(v.re);
                row.rhs_im = (v.im != 0.0).then_some(v.im);
            }
            Ok(())
        })();
        if let Err(e) = result {
            status = status.worst(e.status());
            row.error = Some(e.to_string());
        }
        rows.push((pairs, row));
    }
    if s.json {
        let arr: Vec<Value> = rows
            .iter()
            .map(|(pairs, row)| {
                let mut m = Map::new();
                let params: Map<String, Value> = pairs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                m.insert("params".into(), Value::Object(params));
                if let Value::Object(r) = json!(row) {
                    m.extend(r.into_iter().filter(|(_, v)| !v.is_null()));
                }
                Value::Object(m)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *out, &arr)?;
        writeln!(out)?;
        return Ok(status);
    }
    let mut w = csv::Writer::from_writer(&mut *out);
    let mut header: Vec<String> = fixed.iter().map(|(k, _)| k.clone()).collect();
    header.extend(axes.iter().map(|a| a.name.clone()));
    header.extend(["rhs", "rhs_im"].map(String::from));
    if with_lhs {
        header.extend(["lhs", "stderr", "errbound", "z", "verdict"].map(String::from));
    }
    header.push("error".into());
    w.write_record(&header)?;
    for (pairs, row) in &rows {
        let mut rec: Vec<String> = pairs.iter().map(|(_, v)| v.clone()).collect();
        rec.push(cell(row.rhs));
        rec.push(cell(row.rhs_im));
        if with_lhs {
            rec.push(cell(row.lhs));
            rec.push(cell(row.stderr));
            rec.push(cell(row.errbound));
            rec.push(row.z.map(|z| format!("{z:.4}")).unwrap_or_default());
            rec.push(row.verdict.map(|v| v.to_string()).unwrap_or_default());
        }
        rec.push(row.error.clone().unwrap_or_default());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(status)
}

/// Largest fraction of seeds allowed to exceed |z| = 3.
pub const CALIBRATION_LIMIT: f64 = 0.05;

#[derive(Debug, Serialize)]
struct SeedRow {
    seed: u64,
    lhs: f64,
    stderr: f64,
    z: f64,
    verdict: Verdict,
}

pub fn sample<W: Write>(id: &str, seeds: u64, s: &Settings, out: &mut W) -> Result<ExitStatus, CliError> {
    if seeds == 0 {
        return Err(CliError::usage("--seeds must be at least 1"));
    }
    let identity = lookup(id)?;
    let params = identity.with_defaults(&param_map(identity, &s.params)?)?;
    let mut opts = s.run_options();
    match opts.engine {
        Engine::Auto => opts.engine = Engine::MonteCarlo,
        Engine::MonteCarlo => {}
        e => return Err(CliError::usage(format!("sample needs the mc engine, got {e}"))),
    }
    let mut rows = Vec::with_capacity(seeds as usize);
    let mut rhs = 0.0;
    for k in 0..seeds {
        let seed = s.seed.wrapping_add(k);
        let r = identity.verify(&params, &matbeta::registry::RunOptions { seed, ..opts })?;
        rhs = r.rhs;
        rows.push(SeedRow { seed, lhs: r.lhs.value, stderr: r.lhs.stderr.unwrap_or(0.0), z: r.z, verdict: r.verdict });
    }
    let n = rows.len() as f64;
    let exceed = rows.iter().filter(|r| r.z.abs() > 3.0).count();
    let mean_z = rows.iter().map(|r| r.z).sum::<f64>() / n;
    let sd_z = (rows.iter().map(|r| (r.z - mean_z).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)).sqrt();
    let fraction = exceed as f64 / n;
    let status = if fraction <= CALIBRATION_LIMIT { ExitStatus::Pass } else { ExitStatus::Fail };
    if s.json {
        let v = json!({
            "identity": identity.id,
            "params": params,
            "rhs": rhs,
            "samples": opts.samples,
            "runs": rows,
            "mean_z": mean_z,
            "sd_z": sd_z,
            "exceed_3": exceed,
            "fraction_exceed_3": fraction,
            "calibrated": status == ExitStatus::Pass,
        });
        serde_json::to_writer_pretty(&mut *out, &v)?;
        writeln!(out)?;
    } else {
        writeln!(out, "identity  {}  ({params})", identity.id)?;
        writeln!(out, "rhs       {}", fmt_num(rhs))?;
        writeln!(out, "{:>10}  {:>20}  {:>10}  {:>8}  verdict", "seed", "lhs", "stderr", "z")?;
        for r in &rows {
            writeln!(out, "{:>10}  {:>20.12e}  {:>10.3e}  {:>8.3}  {}", r.seed, r.lhs, r.stderr, r.z, r.verdict)?;
        }
        writeln!(out, "mean z {mean_z:.3}, sd z {sd_z:.3}, |z| > 3 in {exceed} of {} runs", rows.len())?;
    }
    Ok(status)
}
