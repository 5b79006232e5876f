use hmts_core::beam::{draw_population, AntennaConfig, SpotBeam, WeatherCdf};
use hmts_core::modcod::{Family, SchemeId, Stream, ThresholdTable, DVBS2_RATES};
use hmts_core::rate::{equal_rate_point, upper_hull, OutagePolicy, PhyModel, RatePair};
use hmts_core::seed::population_seed;
use proptest::prelude::*;

fn table() -> ThresholdTable {
    let q = SchemeId::single(Family::Qpsk).unwrap();
    let single = [
        -2.35, -1.24, -0.3, 1.0, 2.23, 3.1, 4.03, 4.68, 5.18, 6.2, 6.42,
    ];
    let he = [-4.2, -2.9, -2.0, -0.6, 0.7, 1.5, 2.5, 3.1, 3.6, 4.7, 4.9];
    let le = [-0.4, 0.9, 1.8, 3.2, 4.4, 5.3, 6.3, 6.9, 7.4, 8.4, 8.6];
    let h = SchemeId::hierarchical(Family::HQpsk, 700).unwrap();
    let mut t = ThresholdTable::new();
    for i in 0..11 {
        t.insert(q, Stream::Single, DVBS2_RATES[i], single[i])
            .unwrap();
        t.insert(h, Stream::He, DVBS2_RATES[i], he[i]).unwrap();
        t.insert(h, Stream::Le, DVBS2_RATES[i], le[i]).unwrap();
    }
    t
}

proptest! {
    #[test]
    fn hull_is_a_decreasing_concave_chain(
        pts in proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 1..40)
    ) {
        let pairs: Vec<RatePair> = pts.iter().map(|&(a, b)| RatePair::bare(a, b)).collect();
        let hull = upper_hull(&pairs);
        prop_assert!(!hull.is_empty());
        for w in hull.windows(2) {
            prop_assert!(w[1].r1 > w[0].r1 && w[1].r2 < w[0].r2);
        }
        for w in hull.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let cross = (b.r1 - a.r1) * (c.r2 - a.r2) - (b.r2 - a.r2) * (c.r1 - a.r1);
            prop_assert!(cross < 0.0);
        }
        // every input point is dominated by the chain
        for p in &pairs {
            let covered = hull.windows(2).any(|w| {
                let (a, b) = (w[0], w[1]);
                p.r1 <= b.r1 && p.r1 >= a.r1 && {
                    let t = (p.r1 - a.r1) / (b.r1 - a.r1);
                    p.r2 <= a.r2 + t * (b.r2 - a.r2) + 1e-9
                }
            }) || hull.iter().any(|h| p.r1 <= h.r1 && p.r2 <= h.r2);
            prop_assert!(covered);
        }
        let r = equal_rate_point(&pairs).rate;
        prop_assert!(hull.iter().any(|h| h.r1.min(h.r2) <= r + 1e-12));
    }
}

#[test]
fn campaign_style_pipeline() {
    let beam = SpotBeam::new(AntennaConfig::reference());
    let weather = WeatherCdf::new(vec![(0.0, 0.0), (0.3, 0.8), (2.0, 1.0)]).unwrap();
    let model = PhyModel::new(&table());
    let base = PhyModel::new(&table().restrict(|s| !s.is_hierarchical()));
    for rep in 0..20 {
        let seed = population_seed(1, 0, rep);
        let snrs: Vec<f64> = draw_population(100, 3.0, &beam, &weather, seed)
            .iter()
            .map(|d| d.snr_db)
            .collect();
        let g = model.system_gain(&snrs, OutagePolicy::ExcludeUnserved);
        assert!(g.gain().unwrap() >= 0.0);
        assert_eq!(g.served + g.outages, 100);
        let b = base.system_gain(&snrs, OutagePolicy::ExcludeUnserved);
        assert_eq!(b.gain(), Some(0.0));
        assert_eq!(b.r_ts, g.r_ts);
    }
}
