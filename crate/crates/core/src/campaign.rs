//! Monte Carlo sweeps over the boresight SNR.
//!
//! A campaign is a grid of `SNR_max` values times a number of repetitions.
//! Each (grid point, repetition) unit draws one receiver population and
//! evaluates every requested scheme family on it, so family curves compare
//! the same populations. Units are independent and may run in any order;
//! [`Campaign::assemble`] puts their results back in grid order.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::beam::{draw_population, AntennaConfig, SpotBeam, WeatherCdf};
use crate::error::CampaignError;
use crate::modcod::{Family, ThresholdTable};
use crate::rate::{OutagePolicy, PhyModel};
use crate::seed::population_seed;

/// What a curve is computed with, on top of the single-stream baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilySet {
    /// Baseline only; the gain is 0 by construction.
    Baseline,
    /// One hierarchical family (all its `rho_he` variants).
    Family(Family),
    /// Every hierarchical family of the table.
    Combined,
}

impl fmt::Display for FamilySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySet::Baseline => f.write_str("baseline"),
            FamilySet::Family(fam) => f.write_str(fam.name()),
            FamilySet::Combined => f.write_str("combined"),
        }
    }
}

impl FromStr for FamilySet {
    type Err = CampaignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("baseline") {
            Ok(FamilySet::Baseline)
        } else if t.eq_ignore_ascii_case("combined") {
            Ok(FamilySet::Combined)
        } else {
            t.parse::<Family>()
                .map(FamilySet::Family)
                .map_err(|_| CampaignError::UnknownFamily)
        }
    }
}

/// Campaign parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    /// Boresight SNRs, dB, strictly increasing.
    pub snr_max_grid: Vec<f64>,
    /// Receivers per population, at least 2.
    pub receivers: usize,
    /// Populations per grid point, at least 1.
    pub repetitions: usize,
    /// Curves to compute.
    pub families: Vec<FamilySet>,
    /// Master seed.
    pub master_seed: u64,
    /// Handling of receivers in outage.
    pub outage_policy: OutagePolicy,
    /// Keep per-run gains in the report.
    pub keep_raw: bool,
}

impl CampaignConfig {
    /// Grid from `from` to `to` inclusive in steps of `step`.
    pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CampaignError> {
        if !(step > 0.0 && from.is_finite() && to.is_finite() && to >= from) {
            return Err(CampaignError::Config(
                "grid must satisfy from <= to and step > 0",
            ));
        }
        let n = libm::floor((to - from) / step + 1e-9) as usize;
        Ok((0..=n).map(|i| from + i as f64 * step).collect())
    }

    /// 1 to 16 dB by 0.5 dB, 500 receivers, 100 repetitions.
    pub fn reference(families: Vec<FamilySet>, master_seed: u64) -> Self {
        CampaignConfig {
            snr_max_grid: Self::grid(1.0, 16.0, 0.5).unwrap_or_default(),
            receivers: 500,
            repetitions: 100,
            families,
            master_seed,
            outage_policy: OutagePolicy::default(),
            keep_raw: false,
        }
    }

    /// Checks the invariants.
    pub fn validate(&self) -> Result<(), CampaignError> {
        if self.receivers < 2 {
            return Err(CampaignError::Config("at least 2 receivers"));
        }
        if self.repetitions < 1 {
            return Err(CampaignError::Config("at least 1 repetition"));
        }
        if self.snr_max_grid.is_empty() {
            return Err(CampaignError::Config("empty SNR grid"));
        }
        if self.snr_max_grid.iter().any(|x| !x.is_finite()) {
            return Err(CampaignError::Config("non-finite SNR in grid"));
        }
        if self.snr_max_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CampaignError::Config(
                "SNR grid must be strictly increasing",
            ));
        }
        if self.families.is_empty() {
            return Err(CampaignError::Config("no family requested"));
        }
        Ok(())
    }

    /// All `(grid_idx, rep)` units in report order.
    pub fn units(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let reps = self.repetitions;
        (0..self.snr_max_grid.len()).flat_map(move |g| (0..reps).map(move |r| (g, r)))
    }
}

/// Outcome of one population for one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    /// Relative gain, `None` when the classical rate is 0.
    pub gain: Option<f64>,
    /// Receivers in outage.
    pub outages: usize,
}

/// Results of one `(grid_idx, rep)` unit, one entry per requested family.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitResult {
    /// Grid index.
    pub grid_idx: usize,
    /// Repetition.
    pub rep: usize,
    /// Outcomes in the order of [`CampaignConfig::families`].
    pub outcomes: Vec<RunOutcome>,
}

/// Statistics of one `(snr_max, family)` cell of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct GainStats {
    /// Boresight SNR, dB.
    pub snr_max_db: f64,
    /// Family.
    pub family: FamilySet,
    /// Arithmetic mean of the defined gains.
    pub mean: Option<f64>,
    /// Sample standard deviation (0 with a single run).
    pub std: Option<f64>,
    /// Median of the defined gains.
    pub median: Option<f64>,
    /// Runs with a defined gain.
    pub runs: usize,
    /// Runs left out because the classical rate was 0.
    pub excluded_runs: usize,
    /// Mean number of receivers in outage per run.
    pub mean_outages: f64,
    /// Largest number of receivers in outage in a run.
    pub max_outages: usize,
    /// Per-run gains in repetition order, if requested.
    pub raw: Option<Vec<Option<f64>>>,
}

/// Campaign output, grid-major then family in request order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    /// Grid.
    pub snr_max_grid: Vec<f64>,
    /// Families.
    pub families: Vec<FamilySet>,
    /// One entry per grid point and family.
    pub rows: Vec<GainStats>,
}

impl SimulationReport {
    /// Rows of one family, grid ordered.
    pub fn family_rows(&self, family: FamilySet) -> impl Iterator<Item = &GainStats> {
        self.rows.iter().filter(move |r| r.family == family)
    }
}

/// `(snr_max, mean gain)` of one family in grid order.
pub fn gain_curve(
    report: &SimulationReport,
    family: FamilySet,
) -> Result<Vec<(f64, Option<f64>)>, CampaignError> {
    if !report.families.contains(&family) {
        return Err(CampaignError::UnknownFamily);
    }
    Ok(report
        .family_rows(family)
        .map(|r| (r.snr_max_db, r.mean))
        .collect())
}

/// A validated campaign ready to run.
#[derive(Debug, Clone)]
pub struct Campaign {
    cfg: CampaignConfig,
    beam: SpotBeam,
    weather: WeatherCdf,
    models: Vec<PhyModel>,
}

impl Campaign {
    /// Checks the configuration against the table and compiles one
    /// [`PhyModel`] per requested family.
    pub fn new(
        cfg: CampaignConfig,
        table: &ThresholdTable,
        antenna: AntennaConfig,
        weather: WeatherCdf,
    ) -> Result<Self, CampaignError> {
        cfg.validate()?;
        if !table.has_baseline() {
            return Err(CampaignError::MissingBaseline);
        }
        let present = table.hierarchical_families();
        let mut models = Vec::with_capacity(cfg.families.len());
        for fs in &cfg.families {
            let sub = match *fs {
                FamilySet::Baseline => table.restrict(|s| !s.is_hierarchical()),
                FamilySet::Family(f) => {
                    if !f.is_hierarchical() {
                        return Err(CampaignError::NotHierarchical(f));
                    }
                    if !present.contains(&f) {
                        return Err(CampaignError::FamilyAbsent(f));
                    }
                    table.restrict(|s| !s.is_hierarchical() || s.family() == f)
                }
                FamilySet::Combined => table.clone(),
            };
            models.push(PhyModel::new(&sub));
        }
        Ok(Campaign {
            cfg,
            beam: SpotBeam::new(antenna),
            weather,
            models,
        })
    }

    /// Configuration.
    pub fn config(&self) -> &CampaignConfig {
        &self.cfg
    }

    /// Resolved beam.
    pub fn beam(&self) -> &SpotBeam {
        &self.beam
    }

    /// Receiver SNRs of one unit.
    pub fn population(&self, grid_idx: usize, rep: usize) -> Vec<f64> {
        let seed = population_seed(self.cfg.master_seed, grid_idx as u64, rep as u64);
        draw_population(
            self.cfg.receivers,
            self.cfg.snr_max_grid[grid_idx],
            &self.beam,
            &self.weather,
            seed,
        )
        .into_iter()
        .map(|d| d.snr_db)
        .collect()
    }

    /// Evaluates one unit.
    pub fn run_unit(&self, grid_idx: usize, rep: usize) -> UnitResult {
        let snrs = self.population(grid_idx, rep);
        let outcomes = self
            .models
            .iter()
            .map(|m| {
                let g = m.system_gain(&snrs, self.cfg.outage_policy);
                RunOutcome {
                    gain: g.gain(),
                    outages: g.outages,
                }
            })
            .collect();
        UnitResult {
            grid_idx,
            rep,
            outcomes,
        }
    }

    /// Builds the report from unit results given in any order.
    ///
    /// Fails if a unit is missing or duplicated.
    pub fn assemble(&self, mut units: Vec<UnitResult>) -> Result<SimulationReport, CampaignError> {
        let reps = self.cfg.repetitions;
        let n_grid = self.cfg.snr_max_grid.len();
        units.sort_by_key(|u| (u.grid_idx, u.rep));
        let complete = units.len() == n_grid * reps
            && units
                .iter()
                .enumerate()
                .all(|(i, u)| u.grid_idx == i / reps && u.rep == i % reps)
            && units.iter().all(|u| u.outcomes.len() == self.models.len());
        if !complete {
            return Err(CampaignError::Config("incomplete or duplicated work units"));
        }
        let mut rows = Vec::with_capacity(n_grid * self.cfg.families.len());
        for (g, chunk) in units.chunks(reps).enumerate() {
            for (k, fam) in self.cfg.families.iter().enumerate() {
                let runs: Vec<RunOutcome> = chunk.iter().map(|u| u.outcomes[k]).collect();
                rows.push(stats(
                    self.cfg.snr_max_grid[g],
                    *fam,
                    &runs,
                    self.cfg.keep_raw,
                ));
            }
        }
        Ok(SimulationReport {
            snr_max_grid: self.cfg.snr_max_grid.clone(),
            families: self.cfg.families.clone(),
            rows,
        })
    }

    /// Runs every unit on the current thread.
    pub fn run(&self) -> SimulationReport {
        let units = self.cfg.units().map(|(g, r)| self.run_unit(g, r)).collect();
        self.assemble(units)
            .expect("sequential run produces every unit once")
    }
}

fn stats(snr_max_db: f64, family: FamilySet, runs: &[RunOutcome], keep_raw: bool) -> GainStats {
    let mut gains: Vec<f64> = runs.iter().filter_map(|r| r.gain).collect();
    // summing in sorted order makes the statistics independent of run order
    gains.sort_by(f64::total_cmp);
    let n = gains.len();
    let mean = (n > 0).then(|| gains.iter().sum::<f64>() / n as f64);
    let std = mean.map(|m| {
        if n < 2 {
            0.0
        } else {
            libm::sqrt(gains.iter().map(|g| (g - m) * (g - m)).sum::<f64>() / (n - 1) as f64)
        }
    });
    let median = (n > 0).then(|| {
        if n % 2 == 1 {
            gains[n / 2]
        } else {
            0.5 * (gains[n / 2 - 1] + gains[n / 2])
        }
    });
    let total_outages: usize = runs.iter().map(|r| r.outages).sum();
    GainStats {
        snr_max_db,
        family,
        mean,
        std,
        median,
        runs: n,
        excluded_runs: runs.len() - n,
        mean_outages: if runs.is_empty() {
            0.0
        } else {
            total_outages as f64 / runs.len() as f64
        },
        max_outages: runs.iter().map(|r| r.outages).max().unwrap_or(0),
        raw: keep_raw.then(|| runs.iter().map(|r| r.gain).collect()),
    }
}

/// Human-readable list of families, comma separated.
pub fn family_list(families: &[FamilySet]) -> String {
    let mut s = String::new();
    for (i, f) in families.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&alloc::format!("{f}"));
    }
    s
}
