//! Rate regions of receiver pairs and harmonic aggregation.
//!
//! For two receivers, single-stream modcods give rate pairs `(R1, 0)` and
//! `(0, R2)`; a hierarchical scheme gives `(R1, R2)` with one receiver on the
//! HE stream and the other on the LE stream. Time sharing reaches every
//! point of the convex hull of those pairs, and a receiver can always be
//! served below what a point offers, so the pair is worth the largest `R`
//! such that `(R, R)` is dominated by a point of the hull.
//!
//! With `n` receivers, classical time sharing offers the harmonic
//! combination of the per-receiver best rates. Hierarchical time sharing
//! groups receivers in pairs (weakest with strongest, repeatedly) and
//! offers the harmonic combination of the per-pair equal rates.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::modcod::{best_single_modcod, Ladder, ModcodChoice, SchemeId, Stream, ThresholdTable};

/// Which member of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    /// The receiver with the lower SNR; its rate is `r1`.
    Weak,
    /// The receiver with the higher SNR; its rate is `r2`.
    Strong,
}

/// How a rate pair is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// Nothing sent.
    Origin,
    /// A single-stream modcod aimed at one receiver.
    Single {
        /// Served receiver.
        receiver: Receiver,
        /// Modcod used.
        choice: ModcodChoice,
    },
    /// A hierarchical scheme serving both receivers.
    Hierarchical {
        /// Receiver decoding the HE stream.
        he_receiver: Receiver,
        /// HE modcod.
        he: ModcodChoice,
        /// LE modcod.
        le: ModcodChoice,
    },
}

/// Achievable spectrum efficiencies `(r1, r2)` in bit/s/Hz for the weak and
/// strong receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    /// Weak receiver.
    pub r1: f64,
    /// Strong receiver.
    pub r2: f64,
    /// Origin of the pair.
    pub provenance: Provenance,
}

impl RatePair {
    /// `(0, 0)`.
    pub const ORIGIN: RatePair = RatePair {
        r1: 0.0,
        r2: 0.0,
        provenance: Provenance::Origin,
    };

    /// Pair without provenance, for tests and external callers.
    pub fn bare(r1: f64, r2: f64) -> Self {
        RatePair {
            r1,
            r2,
            provenance: Provenance::Origin,
        }
    }

    fn single(receiver: Receiver, choice: ModcodChoice) -> Self {
        let e = choice.spectral_efficiency;
        let (r1, r2) = match receiver {
            Receiver::Weak => (e, 0.0),
            Receiver::Strong => (0.0, e),
        };
        RatePair {
            r1,
            r2,
            provenance: Provenance::Single { receiver, choice },
        }
    }

    fn hierarchical(he_receiver: Receiver, he: ModcodChoice, le: ModcodChoice) -> Self {
        let (r1, r2) = match he_receiver {
            Receiver::Weak => (he.spectral_efficiency, le.spectral_efficiency),
            Receiver::Strong => (le.spectral_efficiency, he.spectral_efficiency),
        };
        RatePair {
            r1,
            r2,
            provenance: Provenance::Hierarchical {
                he_receiver,
                he,
                le,
            },
        }
    }

    /// True if produced by a hierarchical scheme.
    pub fn is_hierarchical(&self) -> bool {
        matches!(self.provenance, Provenance::Hierarchical { .. })
    }
}

/// Time sharing: `point_a` for a fraction `tau` of the time, `point_b` for
/// the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeShare {
    /// Fraction of time on `point_a`, in `[0, 1]`.
    pub tau: f64,
    /// First vertex.
    pub point_a: RatePair,
    /// Second vertex (equal to `point_a` when `tau = 1`).
    pub point_b: RatePair,
}

impl TimeShare {
    fn vertex(p: RatePair) -> Self {
        TimeShare {
            tau: 1.0,
            point_a: p,
            point_b: p,
        }
    }

    /// Time-averaged rates delivered.
    pub fn rates(&self) -> (f64, f64) {
        let t = self.tau;
        (
            t * self.point_a.r1 + (1.0 - t) * self.point_b.r1,
            t * self.point_a.r2 + (1.0 - t) * self.point_b.r2,
        )
    }

    /// True if a hierarchical vertex carries a non-zero share of the time.
    pub fn uses_hierarchy(&self) -> bool {
        (self.tau > 0.0 && self.point_a.is_hierarchical())
            || (self.tau < 1.0 && self.point_b.is_hierarchical())
    }
}

/// Equal-rate point of a set of rate pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualRate {
    /// Rate offered to both receivers.
    pub rate: f64,
    /// Schedule delivering at least `rate` to each receiver.
    pub schedule: TimeShare,
}

/// Outcome for one receiver pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSolution {
    /// Equal rate with hierarchical modulation allowed.
    pub r_hm: f64,
    /// Classical time-sharing rate.
    pub r_ts: f64,
    /// Schedule realizing `r_hm`.
    pub schedule: TimeShare,
}

impl PairSolution {
    /// Relative gain `(r_hm - r_ts) / r_ts`; `None` when `r_ts = 0 < r_hm`.
    pub fn gain(&self) -> Option<f64> {
        relative_gain(self.r_hm, self.r_ts)
    }
}

fn relative_gain(r_hm: f64, r_ts: f64) -> Option<f64> {
    if r_ts > 0.0 {
        Some((r_hm - r_ts) / r_ts)
    } else if r_hm > 0.0 {
        None
    } else {
        Some(0.0)
    }
}

/// Every rate pair obtainable from `table` for a weak and a strong
/// receiver: the two single-stream bests, the origin, and for every
/// hierarchical scheme and every pair of code rates both HE/LE assignments
/// that the two SNRs decode.
///
/// Nothing is pruned; [`PhyModel::pareto_pairs`] gives the reduced set.
pub fn achievable_pairs(snr_weak: f64, snr_strong: f64, table: &ThresholdTable) -> Vec<RatePair> {
    let mut out = alloc::vec![RatePair::ORIGIN];
    if let Some(c) = best_single_modcod(snr_weak, table) {
        out.push(RatePair::single(Receiver::Weak, c));
    }
    if let Some(c) = best_single_modcod(snr_strong, table) {
        out.push(RatePair::single(Receiver::Strong, c));
    }
    for scheme in table.schemes().into_iter().filter(|s| s.is_hierarchical()) {
        let column = |stream| -> Vec<ModcodChoice> {
            table
                .iter()
                .filter(|(c, _)| c.scheme == scheme && c.stream == stream)
                .filter_map(|(c, _)| table.choice(c))
                .collect()
        };
        let (he_col, le_col) = (column(Stream::He), column(Stream::Le));
        for he in &he_col {
            for le in &le_col {
                if snr_weak >= he.threshold_db && snr_strong >= le.threshold_db {
                    out.push(RatePair::hierarchical(Receiver::Weak, *he, *le));
                }
                if snr_strong >= he.threshold_db && snr_weak >= le.threshold_db {
                    out.push(RatePair::hierarchical(Receiver::Strong, *he, *le));
                }
            }
        }
    }
    out
}

fn cross(o: &RatePair, a: &RatePair, b: &RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Vertices of the upper-right boundary of the convex hull of `pairs`,
/// by increasing `r1` (and decreasing `r2`). Dominated and interior points
/// are dropped, as are negative or non-finite pairs.
pub fn upper_hull(pairs: &[RatePair]) -> Vec<RatePair> {
    let mut pts: Vec<&RatePair> = pairs
        .iter()
        .filter(|p| p.r1.is_finite() && p.r2.is_finite() && p.r1 >= 0.0 && p.r2 >= 0.0)
        .collect();
    pts.sort_by(|a, b| b.r1.total_cmp(&a.r1).then(b.r2.total_cmp(&a.r2)));

    let mut stair: Vec<&RatePair> = Vec::with_capacity(pts.len());
    for p in pts {
        if stair.last().is_none_or(|l| p.r2 > l.r2) {
            stair.push(p);
        }
    }
    stair.reverse();

    let mut chain: Vec<RatePair> = Vec::with_capacity(stair.len());
    for p in stair {
        while chain.len() >= 2 && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p) >= 0.0
        {
            chain.pop();
        }
        chain.push(*p);
    }
    chain
}

/// Largest `R` such that `(R, R)` is dominated by a time sharing of `pairs`.
///
/// Intersects the diagonal with the segment of [`upper_hull`] it crosses.
/// When the diagonal meets a vertex the schedule is that vertex alone with
/// `tau = 1`. An empty input yields the origin.
pub fn equal_rate_point(pairs: &[RatePair]) -> EqualRate {
    let chain = upper_hull(pairs);
    let (first, last) = match (chain.first(), chain.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => {
            return EqualRate {
                rate: 0.0,
                schedule: TimeShare::vertex(RatePair::ORIGIN),
            }
        }
    };
    let diff = |p: &RatePair| p.r1 - p.r2;
    if diff(first) >= 0.0 {
        return EqualRate {
            rate: first.r2,
            schedule: TimeShare::vertex(*first),
        };
    }
    if diff(last) <= 0.0 {
        return EqualRate {
            rate: last.r1,
            schedule: TimeShare::vertex(*last),
        };
    }
    // diff increases strictly along the chain
    let k = chain.partition_point(|p| diff(p) < 0.0);
    let b = chain[k];
    if diff(&b) == 0.0 {
        return EqualRate {
            rate: b.r1,
            schedule: TimeShare::vertex(b),
        };
    }
    let a = chain[k - 1];
    let (da, db) = (diff(&a), diff(&b));
    let tau = db / (db - da);
    let schedule = TimeShare {
        tau,
        point_a: a,
        point_b: b,
    };
    let (x, y) = schedule.rates();
    EqualRate {
        rate: x.min(y),
        schedule,
    }
}

/// Classical time sharing between two receivers: `(1/r_weak + 1/r_strong)⁻¹`,
/// 0 if either is in outage.
pub fn classical_pair_rate(r_weak: f64, r_strong: f64) -> f64 {
    if r_weak <= 0.0 || r_strong <= 0.0 {
        return 0.0;
    }
    1.0 / (1.0 / r_weak + 1.0 / r_strong)
}

fn harmonic(rates: &[f64]) -> f64 {
    if rates.is_empty() || rates.iter().any(|&r| r <= 0.0) {
        return 0.0;
    }
    1.0 / rates.iter().map(|r| 1.0 / r).sum::<f64>()
}

/// Harmonic combination of per-pair equal rates; 0 if any is 0.
pub fn aggregate_hm(pair_rates: &[f64]) -> f64 {
    harmonic(pair_rates)
}

/// Harmonic combination of per-receiver rates; 0 if any is 0.
pub fn aggregate_ts(rates: &[f64]) -> f64 {
    harmonic(rates)
}

/// Receiver pairing by largest SNR difference.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Grouping {
    /// `(weak, strong)` index pairs, most different first.
    pub pairs: Vec<(usize, usize)>,
    /// Median receiver left over when the count is odd.
    pub unpaired: Option<usize>,
}

/// Sorts by SNR and pairs the current minimum with the current maximum
/// until fewer than two receivers remain. Equal SNRs are ordered by index.
pub fn group_receivers(snrs: &[f64]) -> Grouping {
    let mut idx: Vec<usize> = (0..snrs.len()).collect();
    idx.sort_by(|&a, &b| snrs[a].total_cmp(&snrs[b]).then(a.cmp(&b)));
    let n = idx.len();
    Grouping {
        pairs: (0..n / 2).map(|i| (idx[i], idx[n - 1 - i])).collect(),
        unpaired: (n % 2 == 1).then(|| idx[n / 2]),
    }
}

/// How receivers that decode no single-stream modcod are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutagePolicy {
    /// They are left out of both schemes and only counted.
    #[default]
    ExcludeUnserved,
    /// They count with rate 0, which zeroes both harmonic aggregates.
    Zero,
}

/// Spectrum efficiency of both schemes for a receiver population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemGain {
    /// Hierarchical-modulation time sharing.
    pub r_hm: f64,
    /// Classical time sharing.
    pub r_ts: f64,
    /// Receivers taken into account.
    pub served: usize,
    /// Receivers with no decodable single-stream modcod.
    pub outages: usize,
}

impl SystemGain {
    /// `(r_hm - r_ts) / r_ts`; 0 when both are 0; `None` when only
    /// `r_ts` is 0.
    pub fn gain(&self) -> Option<f64> {
        relative_gain(self.r_hm, self.r_ts)
    }
}

#[derive(Debug, Clone)]
struct HierLadders {
    he: Ladder,
    le: Ladder,
}

/// Threshold table compiled for repeated pair evaluation.
#[derive(Debug, Clone)]
pub struct PhyModel {
    single: Ladder,
    hier: Vec<(SchemeId, HierLadders)>,
}

impl PhyModel {
    /// Compiles `table`.
    pub fn new(table: &ThresholdTable) -> Self {
        let hier = table
            .schemes()
            .into_iter()
            .filter(|s| s.is_hierarchical())
            .map(|s| {
                let l = HierLadders {
                    he: table.stream_ladder(&s, Stream::He),
                    le: table.stream_ladder(&s, Stream::Le),
                };
                (s, l)
            })
            .collect();
        PhyModel {
            single: table.single_ladder(),
            hier,
        }
    }

    /// Best single-stream modcod at `snr_db`.
    pub fn best_single(&self, snr_db: f64) -> Option<&ModcodChoice> {
        self.single.best(snr_db)
    }

    /// Best single-stream efficiency, 0 in outage.
    pub fn single_efficiency(&self, snr_db: f64) -> f64 {
        self.single.efficiency(snr_db)
    }

    /// Hierarchical schemes compiled in.
    pub fn hierarchical_schemes(&self) -> impl Iterator<Item = &SchemeId> {
        self.hier.iter().map(|(s, _)| s)
    }

    /// [`achievable_pairs`] reduced to the best code rates per scheme and
    /// assignment; every dropped pair is dominated by a kept one.
    pub fn pareto_pairs(&self, snr_weak: f64, snr_strong: f64) -> Vec<RatePair> {
        let mut out = Vec::with_capacity(3 + 2 * self.hier.len());
        out.push(RatePair::ORIGIN);
        if let Some(c) = self.single.best(snr_weak) {
            out.push(RatePair::single(Receiver::Weak, *c));
        }
        if let Some(c) = self.single.best(snr_strong) {
            out.push(RatePair::single(Receiver::Strong, *c));
        }
        for (_, l) in &self.hier {
            if let (Some(he), Some(le)) = (l.he.best(snr_weak), l.le.best(snr_strong)) {
                out.push(RatePair::hierarchical(Receiver::Weak, *he, *le));
            }
            if let (Some(he), Some(le)) = (l.he.best(snr_strong), l.le.best(snr_weak)) {
                out.push(RatePair::hierarchical(Receiver::Strong, *he, *le));
            }
        }
        out
    }

    /// Equal rate and classical rate of one pair. Arguments may come in
    /// either order.
    pub fn solve_pair(&self, snr_a: f64, snr_b: f64) -> PairSolution {
        let (weak, strong) = match snr_a.total_cmp(&snr_b) {
            Ordering::Greater => (snr_b, snr_a),
            _ => (snr_a, snr_b),
        };
        let r_weak = self.single_efficiency(weak);
        let r_strong = self.single_efficiency(strong);
        let r_ts = classical_pair_rate(r_weak, r_strong);
        let eq = equal_rate_point(&self.pareto_pairs(weak, strong));
        if eq.schedule.uses_hierarchy() && eq.rate > r_ts {
            return PairSolution {
                r_hm: eq.rate,
                r_ts,
                schedule: eq.schedule,
            };
        }
        // The hull optimum is the classical schedule (up to rounding).
        let schedule = match (self.single.best(weak), self.single.best(strong)) {
            (Some(w), Some(s)) if r_ts > 0.0 => TimeShare {
                tau: r_strong / (r_weak + r_strong),
                point_a: RatePair::single(Receiver::Weak, *w),
                point_b: RatePair::single(Receiver::Strong, *s),
            },
            _ => TimeShare::vertex(RatePair::ORIGIN),
        };
        PairSolution {
            r_hm: r_ts,
            r_ts,
            schedule,
        }
    }

    /// Both schemes over a receiver population.
    ///
    /// Sums run in grouping order and each pair contributes
    /// `min(1/r_hm, 1/r_weak + 1/r_strong)`, so `r_hm >= r_ts` holds
    /// exactly in floating point.
    pub fn system_gain(&self, snrs: &[f64], policy: OutagePolicy) -> SystemGain {
        let rates: Vec<f64> = snrs.iter().map(|&s| self.single_efficiency(s)).collect();
        let outages = rates.iter().filter(|&&r| r <= 0.0).count();
        let served: Vec<usize> = match policy {
            OutagePolicy::ExcludeUnserved => (0..snrs.len()).filter(|&i| rates[i] > 0.0).collect(),
            OutagePolicy::Zero => (0..snrs.len()).collect(),
        };
        if served.is_empty() {
            return SystemGain {
                r_hm: 0.0,
                r_ts: 0.0,
                served: 0,
                outages,
            };
        }
        let served_snrs: Vec<f64> = served.iter().map(|&i| snrs[i]).collect();
        let grouping = group_receivers(&served_snrs);
        let inv = |r: f64| if r > 0.0 { 1.0 / r } else { f64::INFINITY };

        let (mut inv_ts, mut inv_hm) = (0.0, 0.0);
        for &(w, s) in &grouping.pairs {
            let (w, s) = (served[w], served[s]);
            let classical = inv(rates[w]) + inv(rates[s]);
            let sol = self.solve_pair(snrs[w], snrs[s]);
            inv_ts += classical;
            inv_hm += if sol.schedule.uses_hierarchy() {
                inv(sol.r_hm).min(classical)
            } else {
                classical
            };
        }
        if let Some(u) = grouping.unpaired {
            let u = inv(rates[served[u]]);
            inv_ts += u;
            inv_hm += u;
        }
        SystemGain {
            r_hm: 1.0 / inv_hm,
            r_ts: 1.0 / inv_ts,
            served: served.len(),
            outages,
        }
    }
}

/// [`PhyModel::system_gain`] for a one-off table.
pub fn system_gain(snrs: &[f64], table: &ThresholdTable, policy: OutagePolicy) -> SystemGain {
    PhyModel::new(table).system_gain(snrs, policy)
}
