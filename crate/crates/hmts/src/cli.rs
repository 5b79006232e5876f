//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hmts_core::campaign::{gain_curve, Campaign};
use hmts_core::constellation::{
    apsk32_rho_he, psk8_rho_he, qam16_energy_ratio, qpsk_rho_he, Apsk32Params, Psk8Params,
    Qam16Params, QpskParams, APSK32_ADOPTED, QPSK_ADOPTED,
};
use hmts_core::modcod::{Family, ModcodChoice, Rho, ThresholdTable};
use hmts_core::rate::{achievable_pairs, upper_hull, PhyModel, Provenance, RatePair, Receiver};

use crate::error::{Error, Result};
use crate::run::{run_parallel, write_report};
use crate::scenario::{parse_grid, parse_outage, FamilyRequest, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "hmts",
    version,
    about = "Hierarchical-modulation time sharing for satellite broadcast"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// HE energy share of hierarchical constellations.
    Rho(RhoArgs),
    /// Equal rate of two receivers.
    Pair(PairArgs),
    /// Monte Carlo sweep over SNR_max.
    Campaign(CampaignArgs),
    /// Check tables and CDF of a scenario.
    Validate(ScenarioArg),
}

#[derive(Debug, Args)]
#[group(id = "mode", required = true, multiple = false)]
pub struct RhoMode {
    /// Hierarchical QPSK (needs --theta).
    #[arg(long)]
    pub hqpsk: bool,
    /// Hierarchical 8-PSK (needs --theta).
    #[arg(long)]
    pub h8psk: bool,
    /// Hierarchical 32-APSK (needs --g1 --g2 --theta).
    #[arg(long)]
    pub h32apsk: bool,
    /// Hierarchical 16-QAM energy ratio (needs --alpha).
    #[arg(long)]
    pub qam16: bool,
    /// Adopted hierarchical QPSK angles.
    #[arg(long)]
    pub table1: bool,
    /// Adopted hierarchical 32-APSK parameters.
    #[arg(long)]
    pub table2: bool,
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    #[command(flatten)]
    pub mode: RhoMode,
    /// Angle in degrees.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Middle-to-inner ring radius ratio.
    #[arg(long, allow_negative_numbers = true)]
    pub g1: Option<f64>,
    /// Outer-to-inner ring radius ratio.
    #[arg(long, allow_negative_numbers = true)]
    pub g2: Option<f64>,
    /// 16-QAM spacing parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScenarioArg {
    /// Scenario file; the built-in default when omitted.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub scenario: ScenarioArg,
    /// SNR of the first receiver, dB.
    #[arg(long, allow_negative_numbers = true)]
    pub snr1: f64,
    /// SNR of the second receiver, dB.
    #[arg(long, allow_negative_numbers = true)]
    pub snr2: f64,
    /// Hierarchical families to allow (`all` by default).
    #[arg(long)]
    pub families: Option<String>,
    /// Keep only hierarchical schemes with this HE share.
    #[arg(long)]
    pub rho: Option<String>,
    /// Write the candidate rate pairs and hull vertices here.
    #[arg(long)]
    pub hull_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    #[command(flatten)]
    pub scenario: ScenarioArg,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Receivers per population.
    #[arg(long)]
    pub receivers: Option<usize>,
    /// Populations per grid point.
    #[arg(long)]
    pub reps: Option<usize>,
    /// SNR_max grid as `from:to:step` (dB) or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Comma-separated families, `all`, `combined` or `baseline`.
    #[arg(long)]
    pub families: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads, 0 for one per core.
    #[arg(long)]
    pub threads: Option<usize>,
    /// `exclude` or `zero`.
    #[arg(long)]
    pub outage: Option<String>,
    /// Also write per-run gains.
    #[arg(long)]
    pub keep_raw: bool,
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command; returns the exit code on success paths that are
/// not errors in themselves.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Rho(a) => cmd_rho(&a, out).map(|_| 0),
        Command::Pair(a) => cmd_pair(&a, out).map(|_| 0),
        Command::Campaign(a) => cmd_campaign(&a, out).map(|_| 0),
        Command::Validate(a) => cmd_validate(&a, out),
    }
}

fn w(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn need(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Scenario(format!("missing --{flag}")))
}

fn param<T>(r: std::result::Result<T, hmts_core::ParamError>) -> Result<T> {
    r.map_err(|source| Error::Param {
        context: "rho".into(),
        source,
    })
}

fn cmd_rho(a: &RhoArgs, out: &mut dyn Write) -> Result<()> {
    let m = &a.mode;
    if m.hqpsk {
        let p = param(QpskParams::new(need(a.theta, "theta")?))?;
        writeln!(out, "{:.4}", qpsk_rho_he(&p)).map_err(w)?;
    } else if m.h8psk {
        let p = param(Psk8Params::new(need(a.theta, "theta")?))?;
        writeln!(out, "{:.4}", psk8_rho_he(&p)).map_err(w)?;
    } else if m.h32apsk {
        let p = param(Apsk32Params::new(
            need(a.g1, "g1")?,
            need(a.g2, "g2")?,
            need(a.theta, "theta")?,
        ))?;
        writeln!(out, "{:.4}", apsk32_rho_he(&p)).map_err(w)?;
    } else if m.qam16 {
        let p = param(Qam16Params::new(need(a.alpha, "alpha")?))?;
        writeln!(out, "{:.4}", qam16_energy_ratio(&p)).map_err(w)?;
    } else if m.table1 {
        writeln!(out, "rho_he  theta_deg  cos2_theta  deviation").map_err(w)?;
        for (rho, theta) in QPSK_ADOPTED {
            let got = param(QpskParams::new(theta)).map(|p| qpsk_rho_he(&p))?;
            writeln!(out, "{rho:<6}  {theta:<9}  {got:<10.4}  {:+.4}", got - rho).map_err(w)?;
        }
    } else if m.table2 {
        writeln!(
            out,
            "rho_he  gamma1  gamma2  theta_deg  rho_eval  deviation"
        )
        .map_err(w)?;
        for (rho, g1, g2, t) in APSK32_ADOPTED {
            let got = param(Apsk32Params::new(g1, g2, t)).map(|p| apsk32_rho_he(&p))?;
            writeln!(
                out,
                "{rho:<6}  {g1:<6}  {g2:<6}  {t:<9}  {got:<8.4}  {:+.4}",
                got - rho
            )
            .map_err(w)?;
        }
    }
    Ok(())
}

fn load(arg: &ScenarioArg) -> Result<Scenario> {
    match &arg.scenario {
        Some(p) => Scenario::from_file(p),
        None => Ok(Scenario::builtin()),
    }
}

fn describe(c: &ModcodChoice) -> String {
    format!("{} {} {}", c.scheme, c.stream, c.code_rate)
}

fn who(r: Receiver) -> &'static str {
    match r {
        Receiver::Weak => "weak",
        Receiver::Strong => "strong",
    }
}

fn source(p: &RatePair) -> String {
    match p.provenance {
        Provenance::Origin => "none".into(),
        Provenance::Single { receiver, choice } => {
            format!("{} -> {}", describe(&choice), who(receiver))
        }
        Provenance::Hierarchical {
            he_receiver,
            he,
            le,
        } => {
            let le_rx = match he_receiver {
                Receiver::Weak => Receiver::Strong,
                Receiver::Strong => Receiver::Weak,
            };
            format!(
                "{} HE {} -> {}, LE {} -> {}",
                he.scheme,
                he.code_rate,
                who(he_receiver),
                le.code_rate,
                who(le_rx)
            )
        }
    }
}

fn pair_table(a: &PairArgs, table: &ThresholdTable) -> Result<ThresholdTable> {
    let fams: Vec<Family> = match &a.families {
        None => table.hierarchical_families(),
        Some(s) => {
            let mut v = Vec::new();
            for f in FamilyRequest::parse(s).resolve(table)? {
                match f {
                    hmts_core::campaign::FamilySet::Family(x) => v.push(x),
                    hmts_core::campaign::FamilySet::Combined => {
                        v.extend(table.hierarchical_families())
                    }
                    hmts_core::campaign::FamilySet::Baseline => {}
                }
            }
            v
        }
    };
    let rho: Option<Rho> = match &a.rho {
        None => None,
        Some(s) => Some(s.parse().map_err(|e| Error::Table {
            context: "--rho".into(),
            source: e,
        })?),
    };
    Ok(table.restrict(|s| {
        !s.is_hierarchical()
            || (fams.contains(&s.family()) && rho.is_none_or(|r| s.rho_he() == Some(r)))
    }))
}

fn cmd_pair(a: &PairArgs, out: &mut dyn Write) -> Result<()> {
    let sc = load(&a.scenario)?;
    let data = sc.load_data()?;
    let table = pair_table(a, &data.table)?;
    let model = PhyModel::new(&table);
    let (weak, strong) = if a.snr1 <= a.snr2 {
        (a.snr1, a.snr2)
    } else {
        (a.snr2, a.snr1)
    };
    let sol = model.solve_pair(weak, strong);
    let outage = |s: f64| model.best_single(s).is_none();
    writeln!(out, "snr_weak_db    {weak}").map_err(w)?;
    writeln!(out, "snr_strong_db  {strong}").map_err(w)?;
    for (label, snr) in [("best_weak", weak), ("best_strong", strong)] {
        match model.best_single(snr) {
            Some(c) => writeln!(
                out,
                "{label:<13}  {} ({:.4} bit/s/Hz)",
                describe(c),
                c.spectral_efficiency
            ),
            None => writeln!(out, "{label:<13}  outage"),
        }
        .map_err(w)?;
    }
    writeln!(out, "r_ts           {:.6}", sol.r_ts).map_err(w)?;
    writeln!(out, "r_hm           {:.6}", sol.r_hm).map_err(w)?;
    match sol.gain() {
        Some(g) => writeln!(out, "gain           {g:.6}"),
        None => writeln!(out, "gain           undefined"),
    }
    .map_err(w)?;
    let s = &sol.schedule;
    writeln!(
        out,
        "schedule       {:.6} x [{}]",
        s.tau,
        source(&s.point_a)
    )
    .map_err(w)?;
    if s.tau < 1.0 {
        writeln!(
            out,
            "               {:.6} x [{}]",
            1.0 - s.tau,
            source(&s.point_b)
        )
        .map_err(w)?;
    }
    if outage(weak) || outage(strong) {
        writeln!(out, "outage         yes").map_err(w)?;
    }
    if let Some(path) = &a.hull_csv {
        let pairs = achievable_pairs(weak, strong, &table);
        let hull = upper_hull(&pairs);
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut cw = csv::Writer::from_writer(file);
        cw.write_record(["r1", "r2", "on_hull", "source"])?;
        for p in &pairs {
            let on = hull.iter().any(|h| h.r1 == p.r1 && h.r2 == p.r2);
            cw.write_record([
                p.r1.to_string(),
                p.r2.to_string(),
                on.to_string(),
                source(p),
            ])?;
        }
        cw.flush().map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn cmd_campaign(a: &CampaignArgs, out: &mut dyn Write) -> Result<()> {
    let mut sc = load(&a.scenario)?;
    if let Some(v) = a.seed {
        sc.seed = v;
    }
    if let Some(v) = a.receivers {
        sc.receivers = v;
    }
    if let Some(v) = a.reps {
        sc.repetitions = v;
    }
    if let Some(v) = &a.grid {
        sc.grid = parse_grid(v)?;
    }
    if let Some(v) = &a.families {
        sc.families = FamilyRequest::parse(v);
    }
    if let Some(v) = &a.out {
        sc.out_dir = v.clone();
    }
    if let Some(v) = a.threads {
        sc.threads = v;
    }
    if let Some(v) = &a.outage {
        sc.outage = parse_outage(v)?;
    }
    sc.keep_raw |= a.keep_raw;

    let data = sc.load_data()?;
    let validation = data.table.validate(&data.anomalies);
    let errors = validation.errors().count();
    if errors > 0 {
        for f in validation.errors() {
            eprintln!("error: {f}");
        }
        return Err(Error::Invalid(errors));
    }
    let cfg = sc.campaign_config(&data.table)?;
    let campaign = Campaign::new(cfg, &data.table, sc.antenna, data.weather)?;
    let start = Instant::now();
    let report = run_parallel(&campaign, sc.threads)?;
    let files = write_report(&report, &sc.out_dir)?;

    write!(out, "{:>10}", "snr_max_db").map_err(w)?;
    for f in &report.families {
        write!(out, " {:>10}", f.to_string()).map_err(w)?;
    }
    writeln!(out).map_err(w)?;
    let curves: Vec<_> = report
        .families
        .iter()
        .map(|f| gain_curve(&report, *f))
        .collect::<std::result::Result<_, _>>()?;
    for (i, snr) in report.snr_max_grid.iter().enumerate() {
        write!(out, "{snr:>10}").map_err(w)?;
        for c in &curves {
            match c[i].1 {
                Some(g) => write!(out, " {:>10.4}", g),
                None => write!(out, " {:>10}", "n/a"),
            }
            .map_err(w)?;
        }
        writeln!(out).map_err(w)?;
    }
    for f in files {
        writeln!(out, "wrote {}", f.display()).map_err(w)?;
    }
    eprintln!("done in {:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn cmd_validate(a: &ScenarioArg, out: &mut dyn Write) -> Result<i32> {
    let sc = load(a)?;
    let data = sc.load_data()?;
    let v = data.table.validate(&data.anomalies);
    writeln!(
        out,
        "{}: {} threshold cells, {} weather points",
        sc.name,
        data.table.len(),
        data.weather.points().len()
    )
    .map_err(w)?;
    for f in v.warnings() {
        writeln!(out, "warning: {f}").map_err(w)?;
    }
    for f in v.errors() {
        writeln!(out, "error: {f}").map_err(w)?;
    }
    let mut errors = v.errors().count();
    if !data.table.has_baseline() {
        writeln!(out, "error: no single-stream baseline modcods").map_err(w)?;
        errors += 1;
    }
    if let Err(e) = sc.campaign_config(&data.table) {
        writeln!(out, "error: {e}").map_err(w)?;
        errors += 1;
    }
    let warnings = v.warnings().count();
    writeln!(out, "{errors} error(s), {warnings} warning(s)").map_err(w)?;
    Ok(if errors == 0 { 0 } else { 1 })
}
