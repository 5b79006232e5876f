//! Parallel campaign execution and report files.

use std::fs;
use std::path::{Path, PathBuf};

use hmts_core::campaign::{Campaign, FamilySet, SimulationReport, UnitResult};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Runs every unit of `campaign` on a pool of `threads` workers (0 for one
/// per core). The report does not depend on `threads`.
pub fn run_parallel(campaign: &Campaign, threads: usize) -> Result<SimulationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Scenario(format!("cannot start worker pool: {e}")))?;
    let units: Vec<(usize, usize)> = campaign.config().units().collect();
    let results: Vec<UnitResult> = pool.install(|| {
        units
            .par_iter()
            .map(|&(g, r)| campaign.run_unit(g, r))
            .collect()
    });
    Ok(campaign.assemble(results)?)
}

fn num(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".to_owned(), num)
}

/// File-name slug of a family, e.g. `h_qpsk`.
pub fn slug(f: FamilySet) -> String {
    f.to_string().to_ascii_lowercase()
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// `gains.csv`: one row per grid point and family; undefined statistics
/// are written as `NaN`.
pub fn write_gains<W: std::io::Write>(out: W, report: &SimulationReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "snr_max_db",
        "family",
        "mean_gain",
        "std_gain",
        "excluded_runs",
    ])?;
    for r in &report.rows {
        w.write_record([
            num(r.snr_max_db),
            r.family.to_string(),
            opt(r.mean),
            opt(r.std),
            r.excluded_runs.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<gains>", e))
}

/// Writes `gains.csv`, `outages.csv`, one `curve_<family>.csv` per family
/// and, when per-run gains were kept, `raw_gains.csv`. Returns the paths.
pub fn write_report(report: &SimulationReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let p = dir.join("gains.csv");
    let file = fs::File::create(&p).map_err(|e| Error::io(&p, e))?;
    write_gains(file, report)?;
    written.push(p);

    let p = dir.join("outages.csv");
    let mut w = writer(&p)?;
    w.write_record([
        "snr_max_db",
        "family",
        "runs",
        "excluded_runs",
        "median_gain",
        "mean_outages",
        "max_outages",
    ])?;
    for r in &report.rows {
        w.write_record([
            num(r.snr_max_db),
            r.family.to_string(),
            r.runs.to_string(),
            r.excluded_runs.to_string(),
            opt(r.median),
            num(r.mean_outages),
            r.max_outages.to_string(),
        ])?;
    }
    finish(w, &p)?;
    written.push(p);

    for &fam in &report.families {
        let p = dir.join(format!("curve_{}.csv", slug(fam)));
        let mut w = writer(&p)?;
        w.write_record(["snr_max_db", "mean_gain", "std_gain", "median_gain"])?;
        for r in report.family_rows(fam) {
            w.write_record([num(r.snr_max_db), opt(r.mean), opt(r.std), opt(r.median)])?;
        }
        finish(w, &p)?;
        written.push(p);
    }

    if report.rows.iter().any(|r| r.raw.is_some()) {
        let p = dir.join("raw_gains.csv");
        let mut w = writer(&p)?;
        w.write_record(["snr_max_db", "family", "rep", "gain"])?;
        for r in &report.rows {
            for (rep, g) in r.raw.iter().flatten().enumerate() {
                w.write_record([
                    num(r.snr_max_db),
                    r.family.to_string(),
                    rep.to_string(),
                    opt(*g),
                ])?;
            }
        }
        finish(w, &p)?;
        written.push(p);
    }
    Ok(written)
}
