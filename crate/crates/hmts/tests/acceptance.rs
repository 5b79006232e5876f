//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use hmts::run::{run_parallel, write_gains};
use hmts::scenario::Scenario;
use hmts_core::beam::{antenna_gain_rel, beam_edge_angle, AntennaConfig};
use hmts_core::campaign::{gain_curve, Campaign, FamilySet, SimulationReport};
use hmts_core::constellation::{
    apsk32_rho_he, build_apsk32_points, qpsk_rho_he, Apsk32Params, QpskParams,
};
use hmts_core::modcod::{signaling_bits, Cell, CodeRate, Family, Rho, SchemeId, Stream};
use hmts_core::rate::{achievable_pairs, equal_rate_point, PhyModel, RatePair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration, o: Outcome) -> Outcome {
    let pass = o.pass && elapsed < limit;
    outcome(
        pass,
        format!(
            "{}; {:.3} s (limit {} s)",
            o.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        ),
    )
}

// (rho, theta in degrees)
const TABLE1: [(f64, f64); 9] = [
    (0.5, 45.0),
    (0.55, 42.0),
    (0.6, 39.0),
    (0.65, 36.0),
    (0.7, 33.0),
    (0.75, 30.0),
    (0.8, 27.0),
    (0.85, 24.0),
    (0.9, 18.0),
];

// (rho, gamma1, gamma2, theta in degrees)
const TABLE2: [(f64, f64, f64, f64); 5] = [
    (0.7, 2.4, 5.0, 32.3),
    (0.75, 1.8, 3.4, 30.2),
    (0.8, 1.6, 2.6, 28.4),
    (0.85, 1.6, 2.2, 25.6),
    (0.9, 1.8, 2.4, 17.4),
];

const RATES: [&str; 11] = [
    "1/4", "1/3", "2/5", "1/2", "3/5", "2/3", "3/4", "4/5", "5/6", "8/9", "9/10",
];

// Hierarchical QPSK: first column is rho = 0.5 (HE and LE alike), then HE, LE
// for rho = 0.55 .. 0.9.
const TABLE3: [[f64; 17]; 11] = [
    [
        -2.6, -3.1, -2.2, -3.5, -1.7, -3.8, -1.0, -4.2, -0.4, -4.4, 0.4, -4.7, 1.2, -4.9, 2.1,
        -5.2, 4.5,
    ],
    [
        -1.4, -1.8, -0.9, -2.2, -0.4, -2.6, 0.2, -2.9, 0.9, -3.2, 1.6, -3.4, 2.5, -3.6, 3.4, -4.0,
        5.8,
    ],
    [
        -0.5, -1.0, 0.0, -1.3, 0.5, -1.7, 1.1, -2.0, 1.8, -2.3, 2.5, -2.5, 3.3, -2.8, 4.3, -3.1,
        6.7,
    ],
    [
        0.9, 0.5, 1.4, 0.1, 1.2, -0.3, 2.5, -0.6, 3.2, -0.9, 3.9, -1.1, 4.8, -1.3, 5.7, -1.7, 8.1,
    ],
    [
        2.1, 1.7, 2.6, 1.3, 3.1, 1.0, 3.7, 0.7, 4.4, 0.4, 5.1, 0.1, 6.0, -0.1, 6.9, -0.4, 9.3,
    ],
    [
        3.0, 2.6, 3.5, 2.2, 4.0, 1.8, 4.6, 1.5, 5.3, 1.3, 6.0, 1.0, 6.9, 0.8, 7.8, 0.4, 10.2,
    ],
    [
        4.0, 3.5, 4.5, 3.1, 5.0, 2.8, 5.6, 2.5, 6.3, 2.2, 7.0, 2.0, 7.8, 1.8, 8.8, 1.4, 11.2,
    ],
    [
        4.6, 4.2, 5.1, 3.8, 5.6, 3.4, 6.2, 3.1, 6.9, 2.8, 7.6, 2.6, 8.5, 2.4, 9.4, 2.0, 11.8,
    ],
    [
        5.1, 4.7, 5.6, 4.3, 6.1, 3.9, 6.7, 3.6, 7.4, 3.3, 8.1, 3.1, 9.0, 2.9, 9.9, 2.5, 12.3,
    ],
    [
        6.1, 5.7, 6.6, 5.3, 7.1, 5.0, 7.7, 4.7, 8.4, 4.4, 9.1, 4.1, 10.0, 3.9, 10.9, 3.6, 13.3,
    ],
    [
        6.3, 5.9, 6.8, 5.5, 7.4, 5.2, 7.9, 4.9, 8.6, 4.6, 9.4, 4.3, 10.2, 4.1, 11.1, 3.8, 13.5,
    ],
];
const TABLE3_RHO: [u16; 8] = [550, 600, 650, 700, 750, 800, 850, 900];

// Hierarchical 32-APSK: HE, LE for rho = 0.7 .. 0.9.
const TABLE4: [[f64; 10]; 11] = [
    [0.0, 6.0, -0.6, 6.6, -1.1, 7.6, -1.6, 9.0, -1.9, 10.5],
    [1.7, 7.3, 0.9, 8.0, 0.4, 9.0, -0.1, 10.6, -0.6, 12.0],
    [3.0, 8.5, 2.2, 9.2, 1.5, 10.2, 0.9, 11.7, 0.4, 13.0],
    [5.2, 10.1, 4.2, 10.8, 3.4, 11.8, 2.7, 13.3, 2.0, 14.7],
    [7.5, 11.5, 6.2, 12.3, 5.1, 13.2, 4.3, 14.6, 3.4, 16.2],
    [9.0, 12.5, 7.5, 13.3, 6.4, 14.2, 5.4, 15.6, 4.5, 17.2],
    [11.0, 13.6, 9.3, 14.4, 8.0, 15.2, 6.8, 16.6, 5.8, 18.2],
    [12.3, 14.4, 10.4, 15.2, 9.0, 15.9, 7.8, 17.2, 6.6, 18.9],
    [13.3, 15.1, 11.3, 15.9, 9.9, 16.5, 8.5, 17.7, 7.2, 19.5],
    [15.4, 16.4, 13.2, 17.2, 11.6, 17.6, 10.2, 18.7, 8.7, 20.6],
    [15.9, 16.6, 13.6, 17.4, 12.0, 17.9, 10.5, 18.9, 9.0, 20.8],
];
const TABLE4_RHO: [u16; 5] = [700, 750, 800, 850, 900];

fn reference_cells() -> Vec<(Cell, f64)> {
    let cell = |fam, rho: u16, stream, rate: &str| Cell {
        scheme: SchemeId::hierarchical(fam, rho).unwrap(),
        stream,
        rate: rate.parse::<CodeRate>().unwrap(),
    };
    let mut out = Vec::new();
    for (i, rate) in RATES.iter().enumerate() {
        out.push((cell(Family::HQpsk, 500, Stream::He, rate), TABLE3[i][0]));
        out.push((cell(Family::HQpsk, 500, Stream::Le, rate), TABLE3[i][0]));
        for (k, &rho) in TABLE3_RHO.iter().enumerate() {
            out.push((
                cell(Family::HQpsk, rho, Stream::He, rate),
                TABLE3[i][1 + 2 * k],
            ));
            out.push((
                cell(Family::HQpsk, rho, Stream::Le, rate),
                TABLE3[i][2 + 2 * k],
            ));
        }
        for (k, &rho) in TABLE4_RHO.iter().enumerate() {
            out.push((
                cell(Family::HApsk32, rho, Stream::He, rate),
                TABLE4[i][2 * k],
            ));
            out.push((
                cell(Family::HApsk32, rho, Stream::Le, rate),
                TABLE4[i][2 * k + 1],
            ));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for (rho, theta) in TABLE1 {
        let got = qpsk_rho_he(&QpskParams::new(theta).unwrap());
        worst = worst.max((got - rho).abs());
    }
    within(
        t.elapsed(),
        Duration::from_secs(1),
        outcome(worst <= 0.02, format!("max |cos²θ − ρ| = {worst:.4}")),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for (rho, g1, g2, th) in TABLE2 {
        let got = apsk32_rho_he(&Apsk32Params::new(g1, g2, th).unwrap());
        worst = worst.max((got - rho).abs());
    }
    within(
        t.elapsed(),
        Duration::from_secs(1),
        outcome(worst <= 0.005, format!("max |ρ_eval − ρ| = {worst:.5}")),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let sc = Scenario::builtin();
    let data = sc.load_data().unwrap();
    let cells = reference_cells();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = Vec::new();
    for _ in 0..20 {
        let (c, want) = cells[rng.random_range(0..cells.len())];
        if data.table.get(&c.scheme, c.stream, c.rate) != Some(want) {
            mismatches.push(c.to_string());
        }
    }
    // The anomalous cell keeps its published value and is reported.
    let anomaly = Cell {
        scheme: SchemeId::new(Family::HQpsk, Some("0.6".parse::<Rho>().unwrap())).unwrap(),
        stream: Stream::Le,
        rate: "1/2".parse().unwrap(),
    };
    let preserved = data
        .table
        .get(&anomaly.scheme, anomaly.stream, anomaly.rate)
        == Some(1.2);
    let v = data.table.validate(&data.anomalies);
    let warnings: Vec<_> = v.warnings().collect();
    let flagged = warnings.len() == 1 && warnings[0].known == Some(anomaly);
    // Every shipped hierarchical cell agrees, not only the sample.
    let all_match = cells
        .iter()
        .all(|(c, want)| data.table.get(&c.scheme, c.stream, c.rate) == Some(*want));
    let pass = mismatches.is_empty() && preserved && flagged && v.is_ok() && all_match;
    within(
        t.elapsed(),
        Duration::from_secs(1),
        outcome(
            pass,
            format!(
                "20 sampled cells, {} mismatches; anomaly preserved={preserved} flagged={flagged}; full table match={all_match}",
                mismatches.len()
            ),
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let g1 = 1.0 + 1e-3 + rng.random::<f64>() * 3.0;
        let g2 = g1 + 1e-3 + rng.random::<f64>() * 3.0;
        let th = 1e-3 + rng.random::<f64>() * 44.9;
        let p = Apsk32Params::new(g1, g2, th).unwrap();
        let pts = build_apsk32_points(&p);
        let energy = pts.points.iter().map(|z| z.norm_sqr()).sum::<f64>() / pts.points.len() as f64;
        let q = 1 << pts.he_bits;
        let per = pts.points.len() / q;
        let mut he_energy = 0.0;
        for k in 0..q {
            let cluster = &pts.points[k * per..(k + 1) * per];
            let mean = cluster.iter().sum::<num_complex::Complex64>() / per as f64;
            he_energy += mean.norm_sqr();
        }
        let geom = he_energy / q as f64 / energy;
        worst = worst.max((geom - apsk32_rho_he(&p)).abs());
    }
    outcome(
        worst <= 1e-9,
        format!("1000 parameter sets, max deviation {worst:.2e}"),
    )
}

/// max over λ in the simplex of min(Σλp₁, Σλp₂): an optimal basis has at
/// most two non-zero weights.
fn lp_dispose(pts: &[(f64, f64)]) -> f64 {
    let mut best: f64 = 0.0;
    for &(a1, a2) in pts {
        best = best.max(a1.min(a2));
        for &(b1, b2) in pts {
            let (da, db) = (a1 - a2, b1 - b2);
            if da < 0.0 && db > 0.0 {
                let t = db / (db - da);
                best = best.max(t * a1 + (1.0 - t) * b1);
            }
        }
    }
    best
}

/// max R with (R, R) exactly a convex combination of the points.
fn lp_exact(pts: &[(f64, f64)]) -> f64 {
    let mut best: f64 = 0.0;
    for &(a1, a2) in pts {
        if a1 == a2 {
            best = best.max(a1);
        }
        for &(b1, b2) in pts {
            let (da, db) = (a1 - a2, b1 - b2);
            if da < 0.0 && db > 0.0 {
                let t = db / (db - da);
                best = best.max(t * a1 + (1.0 - t) * b1);
            }
        }
    }
    best
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let n = rng.random_range(1..=50);
        let mut pts = vec![(0.0, 0.0)];
        for _ in 0..n {
            pts.push((rng.random::<f64>() * 4.0, rng.random::<f64>() * 4.0));
        }
        if i % 2 == 1 {
            // Axis points beyond every coordinate, as single-stream modcods
            // give in practice: the exact and free-disposal optima coincide.
            let m1 = pts.iter().map(|p| p.0).fold(0.0, f64::max);
            let m2 = pts.iter().map(|p| p.1).fold(0.0, f64::max);
            pts.push((m1, 0.0));
            pts.push((0.0, m2));
            worst = worst.max((lp_exact(&pts) - lp_dispose(&pts)).abs());
        }
        let set: Vec<RatePair> = pts.iter().map(|&(a, b)| RatePair::bare(a, b)).collect();
        let got = equal_rate_point(&set).rate;
        worst = worst.max((got - lp_dispose(&pts)).abs());
    }

    let data = Scenario::builtin().load_data().unwrap();
    let model = PhyModel::new(&data.table);
    let mut violations = 0;
    for _ in 0..10_000 {
        let a = rng.random::<f64>() * 30.0 - 8.0;
        let b = rng.random::<f64>() * 30.0 - 8.0;
        let s = model.solve_pair(a, b);
        let (w, st) = if a <= b { (a, b) } else { (b, a) };
        let full = equal_rate_point(&achievable_pairs(w, st, &data.table)).rate;
        if s.r_hm < s.r_ts || full + 1e-12 < s.r_ts || (full - s.r_hm).abs() > 1e-9 {
            violations += 1;
        }
    }
    within(
        t.elapsed(),
        Duration::from_secs(30),
        outcome(
            worst <= 1e-9 && violations == 0,
            format!("1000 sets, max |R − oracle| = {worst:.2e}; 10000 SNR pairs, {violations} violations of r_hm ≥ r_ts"),
        ),
    )
}

fn criterion_6() -> Outcome {
    let b = signaling_bits(11, 22);
    outcome(b == 12, format!("signaling_bits(11, 22) = {b}"))
}

fn criterion_7() -> Outcome {
    let cfg = AntennaConfig::new(1.5, 20e9, 4.0).unwrap();
    let a = beam_edge_angle(&cfg);
    let b = std::thread::spawn(move || beam_edge_angle(&cfg))
        .join()
        .unwrap();
    let err = (antenna_gain_rel(a, &cfg) - 10f64.powf(-0.4)).abs();
    let pass = err <= 1e-9 && (a - b).abs() <= 1e-9;
    outcome(
        pass,
        format!(
            "θ_edge = {:.7}°, |G/Gmax − 10^-0.4| = {err:.1e}, run-to-run Δ = {:.1e} rad",
            a.to_degrees(),
            (a - b).abs()
        ),
    )
}

fn default_campaign(threads: usize) -> (SimulationReport, Vec<u8>, Duration) {
    let sc = Scenario::builtin();
    let data = sc.load_data().unwrap();
    let mut cfg = sc.campaign_config(&data.table).unwrap();
    cfg.families.push(FamilySet::Combined);
    let camp = Campaign::new(cfg, &data.table, sc.antenna, data.weather).unwrap();
    let t = Instant::now();
    let report = run_parallel(&camp, threads).unwrap();
    let elapsed = t.elapsed();
    let mut buf = Vec::new();
    write_gains(&mut buf, &report).unwrap();
    (report, buf, elapsed)
}

fn criterion_8(report: &SimulationReport, elapsed: Duration) -> Outcome {
    let qpsk = gain_curve(report, FamilySet::Family(Family::HQpsk)).unwrap();
    let apsk = gain_curve(report, FamilySet::Family(Family::HApsk32)).unwrap();
    let at = |c: &[(f64, Option<f64>)], x: f64| c.iter().find(|p| p.0 == x).and_then(|p| p.1);
    let g1 = at(&qpsk, 1.0).unwrap_or(f64::NAN);
    let peak = qpsk
        .iter()
        .filter(|p| (1.0..=4.0).contains(&p.0))
        .filter_map(|p| p.1)
        .fold(f64::NAN, f64::max);
    let high = qpsk
        .iter()
        .filter(|p| p.0 >= 8.0)
        .map(|p| p.1.unwrap_or(f64::NAN))
        .fold(f64::NEG_INFINITY, f64::max);
    let g16 = at(&apsk, 16.0).unwrap_or(f64::NAN);
    let min_mean = report
        .rows
        .iter()
        .filter_map(|r| r.mean)
        .fold(f64::INFINITY, f64::min);
    let a = (0.05..=0.15).contains(&g1) && (0.06..=0.16).contains(&peak);
    let b = high < 0.01;
    let c = (0.01..=0.06).contains(&g16);
    let d = min_mean >= 0.0;
    within(
        elapsed,
        Duration::from_secs(600),
        outcome(
            a && b && c && d,
            format!(
                "(a) H_QPSK@1dB = {g1:.4}, peak[1,4] = {peak:.4} {}; (b) max H_QPSK@≥8dB = {high:.4} {}; (c) H_APSK32@16dB = {g16:.4} {}; (d) min mean = {min_mean:.4} {}",
                ok(a), ok(b), ok(c), ok(d)
            ),
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 table I reproduction", criterion_1()),
        ("2 table II consistency", criterion_2()),
        ("3 appendix fidelity", criterion_3()),
        ("4 geometry/formula cross-check", criterion_4()),
        ("5 equal-rate solver vs oracle", criterion_5()),
        ("6 signaling count", criterion_6()),
        ("7 beam edge", criterion_7()),
    ];
    let (serial, serial_csv, elapsed) = default_campaign(1);
    results.push((
        "8 gain curves (500 receivers x 100 reps)",
        criterion_8(&serial, elapsed),
    ));
    let (_, parallel_csv, _) = default_campaign(4);
    let (_, again_csv, _) = default_campaign(0);
    results.push((
        "9 determinism",
        outcome(
            serial_csv == parallel_csv && serial_csv == again_csv,
            format!(
                "gains.csv ({} bytes) identical for 1, 4 and all-core runs: {}",
                serial_csv.len(),
                serial_csv == parallel_csv && serial_csv == again_csv
            ),
        ),
    ));

    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
