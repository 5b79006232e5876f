//! Error types.

use core::fmt;

use crate::modcod::{CodeRate, Family, SchemeId, Stream};

/// A model parameter outside its admissible range.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamError {
    /// A scalar parameter is out of range.
    OutOfRange {
        /// Parameter name.
        name: &'static str,
        /// Rejected value.
        value: f64,
        /// Admissible range, human readable.
        expected: &'static str,
    },
    /// A tabulated distribution is malformed.
    BadDistribution(&'static str),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::OutOfRange {
                name,
                value,
                expected,
            } => write!(f, "{name} = {value} is out of range (expected {expected})"),
            ParamError::BadDistribution(why) => write!(f, "invalid distribution: {why}"),
        }
    }
}

impl core::error::Error for ParamError {}

/// Errors raised while building or querying a threshold table.
#[derive(Debug, Clone, PartialEq)]
pub enum TableError {
    /// The stream does not exist for this scheme (e.g. `HE` on plain QPSK).
    StreamMismatch {
        /// Scheme.
        scheme: SchemeId,
        /// Offending stream.
        stream: Stream,
    },
    /// Code rate outside the DVB-S2 set.
    UnknownCodeRate(CodeRate),
    /// A hierarchical family without an energy split, or the reverse.
    RhoMismatch(Family),
    /// Energy split outside `[0.5, 0.9]`.
    RhoOutOfRange(u16),
    /// Non-finite threshold value.
    NonFiniteThreshold,
    /// The same cell was given twice.
    Duplicate {
        /// Scheme.
        scheme: SchemeId,
        /// Stream.
        stream: Stream,
        /// Code rate.
        rate: CodeRate,
    },
    /// Text could not be parsed as the named item.
    Parse(&'static str),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::StreamMismatch { scheme, stream } => {
                write!(f, "stream {stream} is not defined for {scheme}")
            }
            TableError::UnknownCodeRate(r) => write!(f, "code rate {r} is not a DVB-S2 rate"),
            TableError::RhoMismatch(fam) => write!(
                f,
                "{fam}: rho_he must be given iff the family is hierarchical"
            ),
            TableError::RhoOutOfRange(p) => {
                write!(f, "rho_he {}.{:03} outside [0.5, 0.9]", p / 1000, p % 1000)
            }
            TableError::NonFiniteThreshold => f.write_str("threshold is not a finite number"),
            TableError::Duplicate {
                scheme,
                stream,
                rate,
            } => write!(f, "duplicate entry for {scheme} {stream} {rate}"),
            TableError::Parse(what) => write!(f, "cannot parse {what}"),
        }
    }
}

impl core::error::Error for TableError {}

/// Errors raised when setting up a simulation campaign.
#[derive(Debug, Clone, PartialEq)]
pub enum CampaignError {
    /// The table has no single-stream (non-hierarchical) modcods.
    MissingBaseline,
    /// A requested hierarchical family is not in the table.
    FamilyAbsent(Family),
    /// The family is not hierarchical and cannot be evaluated as such.
    NotHierarchical(Family),
    /// A family was asked for that the report does not contain.
    UnknownFamily,
    /// Invalid campaign configuration.
    Config(&'static str),
}

impl fmt::Display for CampaignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CampaignError::MissingBaseline => {
                f.write_str("no non-hierarchical baseline modcods loaded")
            }
            CampaignError::FamilyAbsent(fam) => write!(f, "no thresholds loaded for {fam}"),
            CampaignError::NotHierarchical(fam) => write!(f, "{fam} is not a hierarchical family"),
            CampaignError::UnknownFamily => f.write_str("family not present in the report"),
            CampaignError::Config(why) => write!(f, "invalid campaign configuration: {why}"),
        }
    }
}

impl core::error::Error for CampaignError {}
