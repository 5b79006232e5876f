//! Decoding-threshold tables and modcod selection.
//!
//! A [`ThresholdTable`] maps `(scheme, stream, code rate)` to the minimum SNR
//! in dB at which that stream decodes. Decoding is a step function of SNR:
//! a stream decodes iff `snr >= threshold`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::TableError;

/// Modulation family.
///
/// The declaration order is the canonical (lexicographic) scheme order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// QPSK.
    Qpsk,
    /// 8-PSK.
    Psk8,
    /// 16-APSK.
    Apsk16,
    /// 32-APSK.
    Apsk32,
    /// Hierarchical QPSK (1 HE bit, 1 LE bit).
    HQpsk,
    /// Hierarchical 8-PSK (2 HE bits, 1 LE bit).
    HPsk8,
    /// Hierarchical 16-APSK (2 HE bits, 2 LE bits).
    HApsk16,
    /// Hierarchical 32-APSK (2 HE bits, 3 LE bits).
    HApsk32,
}

impl Family {
    /// Every family, in canonical order.
    pub const ALL: [Family; 8] = [
        Family::Qpsk,
        Family::Psk8,
        Family::Apsk16,
        Family::Apsk32,
        Family::HQpsk,
        Family::HPsk8,
        Family::HApsk16,
        Family::HApsk32,
    ];

    /// True for the two-stream families.
    pub fn is_hierarchical(self) -> bool {
        matches!(
            self,
            Family::HQpsk | Family::HPsk8 | Family::HApsk16 | Family::HApsk32
        )
    }

    /// Bits per symbol carried by `stream`, or `None` if the stream does
    /// not exist for this family.
    pub fn bits(self, stream: Stream) -> Option<u32> {
        use Family::*;
        match (self, stream) {
            (Qpsk, Stream::Single) => Some(2),
            (Psk8, Stream::Single) => Some(3),
            (Apsk16, Stream::Single) => Some(4),
            (Apsk32, Stream::Single) => Some(5),
            (HQpsk, Stream::He) | (HQpsk, Stream::Le) => Some(1),
            (HPsk8, Stream::He) | (HApsk16, Stream::He) | (HApsk32, Stream::He) => Some(2),
            (HPsk8, Stream::Le) => Some(1),
            (HApsk16, Stream::Le) => Some(2),
            (HApsk32, Stream::Le) => Some(3),
            _ => None,
        }
    }

    /// Name used in data files (`H_QPSK`, `APSK32`, ...).
    pub fn name(self) -> &'static str {
        match self {
            Family::Qpsk => "QPSK",
            Family::Psk8 => "PSK8",
            Family::Apsk16 => "APSK16",
            Family::Apsk32 => "APSK32",
            Family::HQpsk => "H_QPSK",
            Family::HPsk8 => "H_PSK8",
            Family::HApsk16 => "H_APSK16",
            Family::HApsk32 => "H_APSK32",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = TableError;

    /// Case-insensitive; accepts the data-file names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or(TableError::Parse("modulation family"))
    }
}

/// Stream of a modcod.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stream {
    /// High-energy stream of a hierarchical scheme.
    He,
    /// Low-energy stream of a hierarchical scheme.
    Le,
    /// The only stream of a non-hierarchical scheme.
    Single,
}

impl Stream {
    /// Data-file spelling.
    pub fn name(self) -> &'static str {
        match self {
            Stream::He => "HE",
            Stream::Le => "LE",
            Stream::Single => "SINGLE",
        }
    }
}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stream {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HE" => Ok(Stream::He),
            "LE" => Ok(Stream::Le),
            "SINGLE" => Ok(Stream::Single),
            _ => Err(TableError::Parse("stream")),
        }
    }
}

/// HE energy share, stored exactly in thousandths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rho(u16);

impl Rho {
    /// From thousandths; must lie in `[500, 900]`.
    pub fn from_permille(p: u16) -> Result<Self, TableError> {
        if !(500..=900).contains(&p) {
            return Err(TableError::RhoOutOfRange(p));
        }
        Ok(Rho(p))
    }

    /// Thousandths.
    pub fn permille(self) -> u16 {
        self.0
    }

    /// As a fraction.
    pub fn value(self) -> f64 {
        f64::from(self.0) / 1000.0
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (int, frac) = (self.0 / 1000, self.0 % 1000);
        if frac == 0 {
            write!(f, "{int}")
        } else if frac % 100 == 0 {
            write!(f, "{int}.{}", frac / 100)
        } else if frac % 10 == 0 {
            write!(f, "{int}.{:02}", frac / 10)
        } else {
            write!(f, "{int}.{frac:03}")
        }
    }
}

impl FromStr for Rho {
    type Err = TableError;

    /// Exact decimal parse with at most three fractional digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = TableError::Parse("rho_he");
        let s = s.trim();
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad);
        }
        if frac.len() > 3 || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad);
        }
        let int: u32 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad.clone())?
        };
        let mut milli = 0u32;
        for (i, b) in frac.bytes().enumerate() {
            milli += u32::from(b - b'0') * [100, 10, 1][i];
        }
        let p = int
            .checked_mul(1000)
            .and_then(|v| v.checked_add(milli))
            .filter(|&v| v <= u32::from(u16::MAX))
            .ok_or(bad)?;
        Rho::from_permille(p as u16)
    }
}

/// A modulation scheme: family plus, for hierarchical families, the HE
/// energy share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemeId {
    family: Family,
    rho_he: Option<Rho>,
}

impl SchemeId {
    /// `rho_he` must be present iff the family is hierarchical.
    pub fn new(family: Family, rho_he: Option<Rho>) -> Result<Self, TableError> {
        if family.is_hierarchical() != rho_he.is_some() {
            return Err(TableError::RhoMismatch(family));
        }
        Ok(SchemeId { family, rho_he })
    }

    /// Non-hierarchical scheme.
    pub fn single(family: Family) -> Result<Self, TableError> {
        SchemeId::new(family, None)
    }

    /// Hierarchical scheme with `rho_he` in thousandths.
    pub fn hierarchical(family: Family, rho_permille: u16) -> Result<Self, TableError> {
        SchemeId::new(family, Some(Rho::from_permille(rho_permille)?))
    }

    /// Family.
    pub fn family(&self) -> Family {
        self.family
    }

    /// HE energy share, if hierarchical.
    pub fn rho_he(&self) -> Option<Rho> {
        self.rho_he
    }

    /// True for two-stream schemes.
    pub fn is_hierarchical(&self) -> bool {
        self.rho_he.is_some()
    }

    /// HE bits (total bits for single-stream schemes).
    pub fn bits_he(&self) -> u32 {
        if self.is_hierarchical() {
            self.family.bits(Stream::He).unwrap_or(0)
        } else {
            self.family.bits(Stream::Single).unwrap_or(0)
        }
    }

    /// LE bits, 0 for single-stream schemes.
    pub fn bits_le(&self) -> u32 {
        self.family.bits(Stream::Le).unwrap_or(0)
    }

    /// Bits per symbol carried by `stream`.
    pub fn bits(&self, stream: Stream) -> Result<u32, TableError> {
        self.family.bits(stream).ok_or(TableError::StreamMismatch {
            scheme: *self,
            stream,
        })
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rho_he {
            Some(rho) => write!(f, "{}(rho={})", self.family, rho),
            None => write!(f, "{}", self.family),
        }
    }
}

/// Exact code rate `num/den`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeRate {
    num: u8,
    den: u8,
}

impl CodeRate {
    /// `num/den` with `0 < num <= den`.
    pub fn new(num: u8, den: u8) -> Result<Self, TableError> {
        if num == 0 || den == 0 || num > den {
            return Err(TableError::Parse("code rate"));
        }
        let g = gcd(num, den);
        Ok(CodeRate {
            num: num / g,
            den: den / g,
        })
    }

    const fn raw(num: u8, den: u8) -> Self {
        CodeRate { num, den }
    }

    /// Numerator.
    pub fn num(self) -> u8 {
        self.num
    }

    /// Denominator.
    pub fn den(self) -> u8 {
        self.den
    }

    /// As a float.
    pub fn value(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }

    /// True for the eleven DVB-S2 rates.
    pub fn is_dvbs2(self) -> bool {
        DVBS2_RATES.contains(&self)
    }
}

fn gcd(mut a: u8, mut b: u8) -> u8 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ord for CodeRate {
    fn cmp(&self, other: &Self) -> Ordering {
        (u16::from(self.num) * u16::from(other.den))
            .cmp(&(u16::from(other.num) * u16::from(self.den)))
    }
}

impl PartialOrd for CodeRate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CodeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for CodeRate {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = TableError::Parse("code rate");
        let (n, d) = s.trim().split_once('/').ok_or(bad.clone())?;
        let n: u8 = n.trim().parse().map_err(|_| bad.clone())?;
        let d: u8 = d.trim().parse().map_err(|_| bad)?;
        CodeRate::new(n, d)
    }
}

/// The eleven LDPC code rates, ascending.
pub const DVBS2_RATES: [CodeRate; 11] = [
    CodeRate::raw(1, 4),
    CodeRate::raw(1, 3),
    CodeRate::raw(2, 5),
    CodeRate::raw(1, 2),
    CodeRate::raw(3, 5),
    CodeRate::raw(2, 3),
    CodeRate::raw(3, 4),
    CodeRate::raw(4, 5),
    CodeRate::raw(5, 6),
    CodeRate::raw(8, 9),
    CodeRate::raw(9, 10),
];

/// Key of one threshold cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    /// Scheme.
    pub scheme: SchemeId,
    /// Stream.
    pub stream: Stream,
    /// Code rate.
    pub rate: CodeRate,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.scheme, self.stream, self.rate)
    }
}

/// A selected modcod and what it delivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModcodChoice {
    /// Scheme.
    pub scheme: SchemeId,
    /// Stream.
    pub stream: Stream,
    /// Code rate.
    pub code_rate: CodeRate,
    /// Stream bits × code rate, bit/s/Hz.
    pub spectral_efficiency: f64,
    /// Decoding threshold in dB.
    pub threshold_db: f64,
}

/// Spectrum efficiency of one stream: bits of the stream × code rate.
pub fn stream_efficiency(
    scheme: &SchemeId,
    stream: Stream,
    rate: CodeRate,
) -> Result<f64, TableError> {
    // exact rational before rounding so equal efficiencies compare equal
    let bits = scheme.bits(stream)?;
    Ok(f64::from(bits * u32::from(rate.num())) / f64::from(rate.den()))
}

/// Signaling bits needed to address `n_rates² × n_hier_mods` configurations.
pub fn signaling_bits(n_rates: u32, n_hier_mods: u32) -> u32 {
    let configs = u64::from(n_rates) * u64::from(n_rates) * u64::from(n_hier_mods.max(1));
    configs.max(1).next_power_of_two().trailing_zeros()
}

/// Decoding thresholds, in dB, per `(scheme, stream, code rate)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ThresholdTable {
    entries: BTreeMap<Cell, f64>,
}

impl ThresholdTable {
    /// Empty table.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one cell after checking the structural invariants.
    pub fn insert(
        &mut self,
        scheme: SchemeId,
        stream: Stream,
        rate: CodeRate,
        threshold_db: f64,
    ) -> Result<(), TableError> {
        scheme.bits(stream)?;
        if !rate.is_dvbs2() {
            return Err(TableError::UnknownCodeRate(rate));
        }
        if !threshold_db.is_finite() {
            return Err(TableError::NonFiniteThreshold);
        }
        let cell = Cell {
            scheme,
            stream,
            rate,
        };
        if self.entries.contains_key(&cell) {
            return Err(TableError::Duplicate {
                scheme,
                stream,
                rate,
            });
        }
        self.entries.insert(cell, threshold_db);
        Ok(())
    }

    /// Merges `other` into `self`; duplicates are rejected.
    pub fn merge(&mut self, other: &ThresholdTable) -> Result<(), TableError> {
        for (c, &t) in other.iter() {
            self.insert(c.scheme, c.stream, c.rate, t)?;
        }
        Ok(())
    }

    /// Threshold of one cell.
    pub fn get(&self, scheme: &SchemeId, stream: Stream, rate: CodeRate) -> Option<f64> {
        self.entries
            .get(&Cell {
                scheme: *scheme,
                stream,
                rate,
            })
            .copied()
    }

    /// Cells in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Cell, &f64)> + '_ {
        self.entries.iter()
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True if no cells.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct schemes, in canonical order.
    pub fn schemes(&self) -> Vec<SchemeId> {
        let mut out: Vec<SchemeId> = Vec::new();
        for c in self.entries.keys() {
            if out.last() != Some(&c.scheme) {
                out.push(c.scheme);
            }
        }
        out
    }

    /// Distinct hierarchical families present.
    pub fn hierarchical_families(&self) -> Vec<Family> {
        let mut out: Vec<Family> = Vec::new();
        for s in self.schemes() {
            if s.is_hierarchical() && !out.contains(&s.family()) {
                out.push(s.family());
            }
        }
        out
    }

    /// True if at least one single-stream modcod is present.
    pub fn has_baseline(&self) -> bool {
        self.entries.keys().any(|c| c.stream == Stream::Single)
    }

    /// Sub-table of the schemes accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&SchemeId) -> bool) -> ThresholdTable {
        ThresholdTable {
            entries: self
                .entries
                .iter()
                .filter(|(c, _)| keep(&c.scheme))
                .map(|(c, t)| (*c, *t))
                .collect(),
        }
    }

    /// Choice for one cell, if present.
    pub fn choice(&self, cell: &Cell) -> Option<ModcodChoice> {
        let t = *self.entries.get(cell)?;
        Some(ModcodChoice {
            scheme: cell.scheme,
            stream: cell.stream,
            code_rate: cell.rate,
            spectral_efficiency: stream_efficiency(&cell.scheme, cell.stream, cell.rate).ok()?,
            threshold_db: t,
        })
    }

    fn choices(&self) -> impl Iterator<Item = ModcodChoice> + '_ {
        self.entries.keys().filter_map(|c| self.choice(c))
    }

    /// Single-stream choices sorted for selection.
    pub fn single_ladder(&self) -> Ladder {
        Ladder::new(self.choices().filter(|c| c.stream == Stream::Single))
    }

    /// Choices of one `(scheme, stream)` column sorted for selection.
    pub fn stream_ladder(&self, scheme: &SchemeId, stream: Stream) -> Ladder {
        Ladder::new(
            self.choices()
                .filter(|c| c.scheme == *scheme && c.stream == stream),
        )
    }

    /// Checks the ordering invariants of every column.
    ///
    /// Thresholds must increase strictly with code rate inside a column
    /// (hard error). Inside a hierarchical family at a fixed rate, the HE
    /// threshold must decrease and the LE threshold increase with `rho_he`
    /// (warning). Findings touching a cell listed in `known` are flagged as
    /// known anomalies and downgraded to warnings.
    pub fn validate(&self, known: &[Cell]) -> Validation {
        let mut findings = Vec::new();
        let mut columns: BTreeMap<(SchemeId, Stream), Vec<(CodeRate, f64)>> = BTreeMap::new();
        for (c, &t) in self.iter() {
            columns
                .entry((c.scheme, c.stream))
                .or_default()
                .push((c.rate, t));
        }
        for ((scheme, stream), col) in &columns {
            for w in col.windows(2) {
                if w[1].1 <= w[0].1 {
                    let lo = Cell {
                        scheme: *scheme,
                        stream: *stream,
                        rate: w[0].0,
                    };
                    let hi = Cell { rate: w[1].0, ..lo };
                    findings.push(Finding::new(FindingKind::RateOrder, lo, hi, known));
                }
            }
        }

        let mut rows: BTreeMap<(Family, Stream, CodeRate), Vec<(Rho, f64)>> = BTreeMap::new();
        for (c, &t) in self.iter() {
            if let Some(rho) = c.scheme.rho_he() {
                rows.entry((c.scheme.family(), c.stream, c.rate))
                    .or_default()
                    .push((rho, t));
            }
        }
        for ((family, stream, rate), row) in &rows {
            for w in row.windows(2) {
                let ok = match stream {
                    Stream::He => w[1].1 < w[0].1,
                    _ => w[1].1 > w[0].1,
                };
                if !ok {
                    let cell = |rho| Cell {
                        scheme: SchemeId {
                            family: *family,
                            rho_he: Some(rho),
                        },
                        stream: *stream,
                        rate: *rate,
                    };
                    findings.push(Finding::new(
                        FindingKind::RhoOrder,
                        cell(w[0].0),
                        cell(w[1].0),
                        known,
                    ));
                }
            }
        }
        Validation { findings }
    }
}

/// Kind of ordering violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindingKind {
    /// Threshold not strictly increasing with code rate.
    RateOrder,
    /// Threshold not monotone in `rho_he` in the expected direction.
    RhoOrder,
}

/// One ordering violation between two cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    /// Violated rule.
    pub kind: FindingKind,
    /// Lower cell (lower rate or lower `rho_he`).
    pub lower: Cell,
    /// Upper cell.
    pub upper: Cell,
    /// The listed anomaly involved, if any.
    pub known: Option<Cell>,
}

impl Finding {
    fn new(kind: FindingKind, lower: Cell, upper: Cell, known: &[Cell]) -> Self {
        let known = [lower, upper].into_iter().find(|c| known.contains(c));
        Finding {
            kind,
            lower,
            upper,
            known,
        }
    }

    /// Hard errors are rate-order violations not listed as known anomalies.
    pub fn is_error(&self) -> bool {
        self.kind == FindingKind::RateOrder && self.known.is_none()
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = match self.kind {
            FindingKind::RateOrder => "threshold not increasing with code rate",
            FindingKind::RhoOrder => "threshold not monotone in rho_he",
        };
        match self.known {
            Some(c) => write!(
                f,
                "known anomaly at {c}: {rule} ({} vs {})",
                self.lower, self.upper
            ),
            None => write!(f, "{rule}: {} vs {}", self.lower, self.upper),
        }
    }
}

/// Result of [`ThresholdTable::validate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Validation {
    /// All findings.
    pub findings: Vec<Finding>,
}

impl Validation {
    /// Findings that reject the table.
    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.is_error())
    }

    /// Findings reported but accepted.
    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.is_error())
    }

    /// True if there is no hard error.
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }
}

/// Selection rule shared by all "best modcod" queries: highest efficiency,
/// then lowest threshold, then lowest cell in canonical order.
fn better(a: &ModcodChoice, b: &ModcodChoice) -> bool {
    match a.spectral_efficiency.total_cmp(&b.spectral_efficiency) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match a.threshold_db.total_cmp(&b.threshold_db) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                (a.scheme, a.stream, a.code_rate) < (b.scheme, b.stream, b.code_rate)
            }
        },
    }
}

fn best_of(snr_db: f64, it: impl Iterator<Item = ModcodChoice>) -> Option<ModcodChoice> {
    it.filter(|c| snr_db >= c.threshold_db)
        .fold(None, |best, c| match best {
            Some(b) if !better(&c, &b) => Some(b),
            _ => Some(c),
        })
}

/// Best non-hierarchical modcod decodable at `snr_db`, or `None` in outage.
pub fn best_single_modcod(snr_db: f64, table: &ThresholdTable) -> Option<ModcodChoice> {
    best_of(
        snr_db,
        table.choices().filter(|c| c.stream == Stream::Single),
    )
}

/// Best code rate of one `(scheme, stream)` column decodable at `snr_db`.
pub fn best_stream_modcod(
    snr_db: f64,
    table: &ThresholdTable,
    scheme: &SchemeId,
    stream: Stream,
) -> Option<ModcodChoice> {
    best_of(
        snr_db,
        table
            .choices()
            .filter(|c| c.scheme == *scheme && c.stream == stream),
    )
}

/// Modcods pre-sorted so the best decodable one is found by binary search.
///
/// Only the staircase of choices whose efficiency beats every cheaper
/// (lower-threshold) choice is kept.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ladder {
    steps: Vec<ModcodChoice>,
}

impl Ladder {
    /// Builds the staircase from arbitrary choices.
    pub fn new(choices: impl IntoIterator<Item = ModcodChoice>) -> Self {
        let mut all: Vec<ModcodChoice> = choices.into_iter().collect();
        all.sort_by(|a, b| {
            a.threshold_db
                .total_cmp(&b.threshold_db)
                .then(b.spectral_efficiency.total_cmp(&a.spectral_efficiency))
                .then((a.scheme, a.stream, a.code_rate).cmp(&(b.scheme, b.stream, b.code_rate)))
        });
        let mut steps: Vec<ModcodChoice> = Vec::new();
        for c in all {
            if steps
                .last()
                .is_none_or(|l| c.spectral_efficiency > l.spectral_efficiency)
            {
                steps.push(c);
            }
        }
        Ladder { steps }
    }

    /// Best choice with `threshold <= snr_db`.
    pub fn best(&self, snr_db: f64) -> Option<&ModcodChoice> {
        let n = self.steps.partition_point(|s| s.threshold_db <= snr_db);
        n.checked_sub(1).map(|i| &self.steps[i])
    }

    /// Efficiency of [`Ladder::best`], 0 in outage.
    pub fn efficiency(&self, snr_db: f64) -> f64 {
        self.best(snr_db).map_or(0.0, |c| c.spectral_efficiency)
    }

    /// Staircase steps, ascending threshold.
    pub fn steps(&self) -> &[ModcodChoice] {
        &self.steps
    }

    /// True if no modcod at all.
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}
