//! CSV formats for thresholds, known anomalies and the weather CDF.
//!
//! Threshold files share one header,
//! `family,rho_he,stream,code_rate,threshold_db`. `rho_he` is empty for
//! single-stream families. For `rho_he = 0.5` both streams have the same
//! threshold and the stream may be written `HE/LE`.

use std::io::{Read, Write};

use hmts_core::beam::WeatherCdf;
use hmts_core::modcod::{Cell, CodeRate, Family, Rho, SchemeId, Stream, ThresholdTable};

use crate::error::{Error, Result};

pub const THRESHOLD_HEADER: [&str; 5] = ["family", "rho_he", "stream", "code_rate", "threshold_db"];
pub const ANOMALY_HEADER: [&str; 4] = ["family", "rho_he", "stream", "code_rate"];
pub const WEATHER_HEADER: [&str; 2] = ["attenuation_db", "cum_prob"];

const BOTH_STREAMS: &str = "HE/LE";

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, want: &[&str], name: &str) -> Result<()> {
    let got = rdr.headers()?;
    if !got.iter().eq(want.iter().copied()) {
        return Err(Error::parse(
            name,
            1,
            format!(
                "expected header `{}`, found `{}`",
                want.join(","),
                got.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    Ok(())
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn scheme_of(family: &str, rho: &str) -> std::result::Result<SchemeId, String> {
    let family: Family = family.parse().map_err(|e| format!("{e}: `{family}`"))?;
    let rho = if rho.is_empty() {
        None
    } else {
        Some(rho.parse::<Rho>().map_err(|e| format!("{e}: `{rho}`"))?)
    };
    SchemeId::new(family, rho).map_err(|e| e.to_string())
}

fn streams_of(s: &str) -> std::result::Result<Vec<Stream>, String> {
    if s.eq_ignore_ascii_case(BOTH_STREAMS) {
        Ok(vec![Stream::He, Stream::Le])
    } else {
        s.parse::<Stream>()
            .map(|st| vec![st])
            .map_err(|e| format!("{e}: `{s}`"))
    }
}

/// Parses a threshold file into a new table.
pub fn read_thresholds<R: Read>(input: R, name: &str) -> Result<ThresholdTable> {
    let mut table = ThresholdTable::new();
    read_thresholds_into(input, name, &mut table)?;
    Ok(table)
}

/// Parses a threshold file and adds its cells to `table`.
pub fn read_thresholds_into<R: Read>(
    input: R,
    name: &str,
    table: &mut ThresholdTable,
) -> Result<()> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &THRESHOLD_HEADER, name)?;
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let bad = |msg: String| Error::parse(name, line, msg);
        if rec.len() != 5 {
            return Err(bad(format!("expected 5 fields, found {}", rec.len())));
        }
        let scheme = scheme_of(&rec[0], &rec[1]).map_err(bad)?;
        let streams = streams_of(&rec[2]).map_err(bad)?;
        if streams.len() == 2 && scheme.rho_he().map(Rho::permille) != Some(500) {
            return Err(bad(format!(
                "{BOTH_STREAMS} is only allowed for rho_he = 0.5"
            )));
        }
        let rate: CodeRate = rec[3]
            .parse()
            .map_err(|e| bad(format!("{e}: `{}`", &rec[3])))?;
        let threshold: f64 = rec[4]
            .parse()
            .map_err(|_| bad(format!("invalid threshold `{}`", &rec[4])))?;
        for st in streams {
            table
                .insert(scheme, st, rate, threshold)
                .map_err(|e| bad(e.to_string()))?;
        }
    }
    Ok(())
}

/// Writes `table` in canonical order. Equal HE and LE thresholds at
/// `rho_he = 0.5` are written as one `HE/LE` row.
pub fn write_thresholds<W: Write>(out: W, table: &ThresholdTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(THRESHOLD_HEADER)?;
    for (cell, &t) in table.iter() {
        let scheme = cell.scheme;
        let rho = scheme.rho_he().map(|r| r.to_string()).unwrap_or_default();
        let merged = scheme.rho_he().map(Rho::permille) == Some(500)
            && table.get(&scheme, Stream::He, cell.rate)
                == table.get(&scheme, Stream::Le, cell.rate);
        let stream = match (merged, cell.stream) {
            (true, Stream::He) => BOTH_STREAMS.to_owned(),
            (true, _) => continue,
            (false, s) => s.to_string(),
        };
        w.write_record([
            scheme.family().name().to_owned(),
            rho,
            stream,
            cell.rate.to_string(),
            t.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<thresholds>", e))?;
    Ok(())
}

/// Parses a list of known anomalous cells.
pub fn read_anomalies<R: Read>(input: R, name: &str) -> Result<Vec<Cell>> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &ANOMALY_HEADER, name)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let bad = |msg: String| Error::parse(name, line, msg);
        if rec.len() != 4 {
            return Err(bad(format!("expected 4 fields, found {}", rec.len())));
        }
        let scheme = scheme_of(&rec[0], &rec[1]).map_err(bad)?;
        let rate: CodeRate = rec[3]
            .parse()
            .map_err(|e| bad(format!("{e}: `{}`", &rec[3])))?;
        for stream in streams_of(&rec[2]).map_err(bad)? {
            out.push(Cell {
                scheme,
                stream,
                rate,
            });
        }
    }
    Ok(out)
}

/// Parses a weather attenuation CDF.
pub fn read_weather<R: Read>(input: R, name: &str) -> Result<WeatherCdf> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &WEATHER_HEADER, name)?;
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        if rec.len() != 2 {
            return Err(Error::parse(
                name,
                line,
                format!("expected 2 fields, found {}", rec.len()),
            ));
        }
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|_| Error::parse(name, line, format!("invalid number `{}`", &rec[i])))
        };
        points.push((num(0)?, num(1)?));
    }
    WeatherCdf::new(points).map_err(|source| Error::Param {
        context: name.to_owned(),
        source,
    })
}
