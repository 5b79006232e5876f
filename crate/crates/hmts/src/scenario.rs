//! Scenario files.
//!
//! A scenario is a small INI-style file: `[section]` headers, `key = value`
//! lines and `#` comments. Sections and keys:
//!
//! | section    | key               | value                                    |
//! |------------|-------------------|------------------------------------------|
//! | `tables`   | `thresholds`      | comma-separated threshold CSV files      |
//! |            | `known_anomalies` | anomaly CSV (optional)                   |
//! |            | `weather_cdf`     | weather CDF CSV                          |
//! | `antenna`  | `diameter_m`      | dish diameter, m                         |
//! |            | `frequency_hz`    | carrier frequency, Hz                    |
//! |            | `edge_level_db`   | beam-edge depth, dB                      |
//! | `campaign` | `grid`            | `from:to:step` in dB, or a single value  |
//! |            | `receivers`       | receivers per population                 |
//! |            | `repetitions`     | populations per grid point               |
//! |            | `families`        | `all`, `combined`, `baseline` or names   |
//! |            | `seed`            | master seed                              |
//! |            | `outage`          | `exclude` or `zero`                      |
//! |            | `threads`         | worker threads, 0 for all cores          |
//! |            | `keep_raw`        | `true` to write per-run gains            |
//! | `output`   | `dir`             | output directory                         |
//!
//! File paths are relative to the scenario file. Only the `tables` keys
//! `thresholds` and `weather_cdf` are mandatory; the rest default to the
//! values of the built-in scenario.

use std::fs;
use std::path::{Path, PathBuf};

use hmts_core::beam::{AntennaConfig, WeatherCdf};
use hmts_core::campaign::{CampaignConfig, FamilySet};
use hmts_core::modcod::{Cell, ThresholdTable};
use hmts_core::rate::OutagePolicy;

use crate::error::{Error, Result};
use crate::formats;

const BUILTIN_NAME: &str = "<builtin>/default.scenario";

const BUILTIN_FILES: [(&str, &str); 6] = [
    (
        "default.scenario",
        include_str!("../../../data/default.scenario"),
    ),
    (
        "dvbs2_single.csv",
        include_str!("../../../data/dvbs2_single.csv"),
    ),
    (
        "hqpsk_thresholds.csv",
        include_str!("../../../data/hqpsk_thresholds.csv"),
    ),
    (
        "h32apsk_thresholds.csv",
        include_str!("../../../data/h32apsk_thresholds.csv"),
    ),
    (
        "known_anomalies.csv",
        include_str!("../../../data/known_anomalies.csv"),
    ),
    (
        "weather_cdf_sample.csv",
        include_str!("../../../data/weather_cdf_sample.csv"),
    ),
];

/// Where relative paths are resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum Base {
    /// Directory of the scenario file.
    Dir(PathBuf),
    /// Data compiled into the binary.
    Builtin,
}

/// Which curves to compute, before resolution against a table.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyRequest {
    /// Every hierarchical family in the tables, one curve each.
    All,
    /// Explicit entries, possibly including `all`.
    List(Vec<String>),
}

impl FamilyRequest {
    pub fn parse(s: &str) -> Self {
        let items: Vec<String> = s
            .split(',')
            .map(|x| x.trim().to_owned())
            .filter(|x| !x.is_empty())
            .collect();
        if items.len() == 1 && items[0].eq_ignore_ascii_case("all") {
            FamilyRequest::All
        } else {
            FamilyRequest::List(items)
        }
    }

    /// Resolves names against the families present in `table`.
    pub fn resolve(&self, table: &ThresholdTable) -> Result<Vec<FamilySet>> {
        let all: Vec<FamilySet> = table
            .hierarchical_families()
            .into_iter()
            .map(FamilySet::Family)
            .collect();
        let mut out: Vec<FamilySet> = Vec::new();
        let push = |f: FamilySet, out: &mut Vec<FamilySet>| {
            if !out.contains(&f) {
                out.push(f);
            }
        };
        match self {
            FamilyRequest::All => all.iter().for_each(|f| push(*f, &mut out)),
            FamilyRequest::List(items) => {
                for it in items {
                    if it.eq_ignore_ascii_case("all") {
                        all.iter().for_each(|f| push(*f, &mut out));
                    } else {
                        let f: FamilySet = it
                            .parse()
                            .map_err(|_| Error::Scenario(format!("unknown family `{it}`")))?;
                        push(f, &mut out);
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Scenario("no family to evaluate".into()));
        }
        Ok(out)
    }
}

/// A parsed scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub base: Base,
    pub threshold_files: Vec<String>,
    pub anomalies_file: Option<String>,
    pub weather_file: String,
    pub antenna: AntennaConfig,
    pub grid: Vec<f64>,
    pub receivers: usize,
    pub repetitions: usize,
    pub families: FamilyRequest,
    pub seed: u64,
    pub outage: OutagePolicy,
    pub threads: usize,
    pub keep_raw: bool,
    pub out_dir: PathBuf,
}

/// Tables and distributions referenced by a scenario.
#[derive(Debug, Clone)]
pub struct ScenarioData {
    pub table: ThresholdTable,
    pub anomalies: Vec<Cell>,
    pub weather: WeatherCdf,
}

pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|_| Error::Scenario(format!("invalid grid value `{x}`")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts[..] {
        [one] => Ok(vec![num(one)?]),
        [a, b, step] => Ok(CampaignConfig::grid(num(a)?, num(b)?, num(step)?)?),
        _ => Err(Error::Scenario(format!(
            "grid must be `from:to:step`, got `{s}`"
        ))),
    }
}

pub fn parse_outage(s: &str) -> Result<OutagePolicy> {
    match s.trim().to_ascii_lowercase().as_str() {
        "exclude" => Ok(OutagePolicy::ExcludeUnserved),
        "zero" => Ok(OutagePolicy::Zero),
        other => Err(Error::Scenario(format!(
            "outage must be `exclude` or `zero`, got `{other}`"
        ))),
    }
}

impl Scenario {
    /// The scenario shipped in `data/default.scenario`, with its data files
    /// compiled in.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_FILES[0].1, BUILTIN_NAME, Base::Builtin)
            .expect("built-in scenario is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &path.display().to_string(), Base::Dir(dir))
    }

    pub fn parse(text: &str, name: &str, base: Base) -> Result<Self> {
        let mut sc = Scenario {
            name: name.to_owned(),
            base,
            threshold_files: Vec::new(),
            anomalies_file: None,
            weather_file: String::new(),
            antenna: AntennaConfig::reference(),
            grid: CampaignConfig::grid(1.0, 16.0, 0.5)?,
            receivers: 500,
            repetitions: 100,
            families: FamilyRequest::All,
            seed: 42,
            outage: OutagePolicy::default(),
            threads: 0,
            keep_raw: false,
            out_dir: PathBuf::from("out"),
        };
        let (mut d, mut f, mut e) = (
            sc.antenna.diameter_m(),
            sc.antenna.frequency_hz(),
            sc.antenna.edge_level_db(),
        );
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i as u64 + 1;
            let bad = |msg: String| Error::parse(name, line_no, msg);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(s) = line.strip_prefix('[') {
                let s = s
                    .strip_suffix(']')
                    .ok_or_else(|| bad(format!("malformed section header `{line}`")))?;
                section = s.trim().to_ascii_lowercase();
                if !["tables", "antenna", "campaign", "output"].contains(&section.as_str()) {
                    return Err(bad(format!("unknown section `[{section}]`")));
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim().to_ascii_lowercase(), value.trim());
            let float = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| bad(format!("{key}: invalid number `{v}`")))
            };
            let int = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| bad(format!("{key}: invalid integer `{v}`")))
            };
            match (section.as_str(), key.as_str()) {
                ("tables", "thresholds") => {
                    sc.threshold_files = value
                        .split(',')
                        .map(|p| p.trim().to_owned())
                        .filter(|p| !p.is_empty())
                        .collect()
                }
                ("tables", "known_anomalies") => sc.anomalies_file = Some(value.to_owned()),
                ("tables", "weather_cdf") => sc.weather_file = value.to_owned(),
                ("antenna", "diameter_m") => d = float(value)?,
                ("antenna", "frequency_hz") => f = float(value)?,
                ("antenna", "edge_level_db") => e = float(value)?,
                ("campaign", "grid") => {
                    sc.grid = parse_grid(value).map_err(|e| bad(e.to_string()))?
                }
                ("campaign", "receivers") => sc.receivers = int(value)? as usize,
                ("campaign", "repetitions") => sc.repetitions = int(value)? as usize,
                ("campaign", "families") => sc.families = FamilyRequest::parse(value),
                ("campaign", "seed") => sc.seed = int(value)?,
                ("campaign", "outage") => {
                    sc.outage = parse_outage(value).map_err(|e| bad(e.to_string()))?
                }
                ("campaign", "threads") => sc.threads = int(value)? as usize,
                ("campaign", "keep_raw") => {
                    sc.keep_raw = value.parse().map_err(|_| {
                        bad(format!("keep_raw: expected true or false, got `{value}`"))
                    })?
                }
                ("output", "dir") => sc.out_dir = PathBuf::from(value),
                ("", _) => return Err(bad(format!("`{key}` outside of a section"))),
                (s, k) => return Err(bad(format!("unknown key `{k}` in [{s}]"))),
            }
        }
        sc.antenna = AntennaConfig::new(d, f, e).map_err(|source| Error::Param {
            context: format!("{name}: [antenna]"),
            source,
        })?;
        if sc.threshold_files.is_empty() {
            return Err(Error::Scenario(format!(
                "{name}: [tables] thresholds is required"
            )));
        }
        if sc.weather_file.is_empty() {
            return Err(Error::Scenario(format!(
                "{name}: [tables] weather_cdf is required"
            )));
        }
        if let Base::Dir(dir) = &sc.base {
            if sc.out_dir.is_relative() {
                sc.out_dir = dir.join(&sc.out_dir);
            }
        }
        Ok(sc)
    }

    fn read(&self, rel: &str) -> Result<(String, String)> {
        match &self.base {
            Base::Builtin => BUILTIN_FILES
                .iter()
                .find(|(n, _)| *n == rel)
                .map(|(n, t)| (format!("<builtin>/{n}"), (*t).to_owned()))
                .ok_or_else(|| Error::Scenario(format!("no built-in file `{rel}`"))),
            Base::Dir(dir) => {
                let p = dir.join(rel);
                let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
                Ok((p.display().to_string(), text))
            }
        }
    }

    /// Reads and validates every referenced file.
    pub fn load_data(&self) -> Result<ScenarioData> {
        let mut table = ThresholdTable::new();
        for f in &self.threshold_files {
            let (name, text) = self.read(f)?;
            formats::read_thresholds_into(text.as_bytes(), &name, &mut table)?;
        }
        let anomalies = match &self.anomalies_file {
            Some(f) => {
                let (name, text) = self.read(f)?;
                formats::read_anomalies(text.as_bytes(), &name)?
            }
            None => Vec::new(),
        };
        let (name, text) = self.read(&self.weather_file)?;
        let weather = formats::read_weather(text.as_bytes(), &name)?;
        Ok(ScenarioData {
            table,
            anomalies,
            weather,
        })
    }

    /// Campaign configuration for `table`.
    pub fn campaign_config(&self, table: &ThresholdTable) -> Result<CampaignConfig> {
        let cfg = CampaignConfig {
            snr_max_grid: self.grid.clone(),
            receivers: self.receivers,
            repetitions: self.repetitions,
            families: self.families.resolve(table)?,
            master_seed: self.seed,
            outage_policy: self.outage,
            keep_raw: self.keep_raw,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
