//! Spot-beam channel: antenna pattern, receiver placement and weather.
//!
//! A receiver's SNR is the boresight SNR minus the antenna roll-off at its
//! position minus a weather attenuation. Positions are uniform over the
//! coverage disk of a nadir-pointing geostationary beam.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use libm::{asin, atan, log10, pow, sin, sqrt, tan};
use rand::Rng;

use crate::bessel::{j1, J1_FIRST_ZERO};
use crate::error::ParamError;
use crate::seed::receiver_rng;

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Geostationary altitude, m.
pub const GEO_ALTITUDE_M: f64 = 35_786_000.0;

// Below this argument 2 J1(x) / x uses its Taylor expansion.
const SMALL_X: f64 = 1e-3;

/// Parabolic reflector and beam-edge definition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaConfig {
    diameter_m: f64,
    frequency_hz: f64,
    edge_level_db: f64,
}

impl AntennaConfig {
    /// `edge_level_db` is the positive depth of the beam edge below
    /// boresight; it must be reachable before the first null.
    pub fn new(diameter_m: f64, frequency_hz: f64, edge_level_db: f64) -> Result<Self, ParamError> {
        if !(diameter_m > 0.0 && diameter_m.is_finite()) {
            return Err(ParamError::OutOfRange {
                name: "diameter",
                value: diameter_m,
                expected: "> 0 m",
            });
        }
        if !(frequency_hz > 0.0 && frequency_hz.is_finite()) {
            return Err(ParamError::OutOfRange {
                name: "frequency",
                value: frequency_hz,
                expected: "> 0 Hz",
            });
        }
        let cfg = AntennaConfig {
            diameter_m,
            frequency_hz,
            edge_level_db,
        };
        // With a dish smaller than the wavelength the pattern never reaches
        // its first null; the reachable depth is the gain at 90 degrees.
        let max_depth = if cfg.k() > J1_FIRST_ZERO {
            f64::INFINITY
        } else {
            -10.0 * log10(pattern(cfg.k()))
        };
        if !(edge_level_db > 0.0 && edge_level_db < max_depth) {
            return Err(ParamError::OutOfRange {
                name: "edge_level_db",
                value: edge_level_db,
                expected: "0 < edge level < first-null depth",
            });
        }
        Ok(cfg)
    }

    /// 1.5 m dish at 20 GHz with a 4 dB beam edge.
    pub fn reference() -> Self {
        AntennaConfig {
            diameter_m: 1.5,
            frequency_hz: 20e9,
            edge_level_db: 4.0,
        }
    }

    /// Dish diameter in meters.
    pub fn diameter_m(&self) -> f64 {
        self.diameter_m
    }

    /// Carrier frequency in Hz.
    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    /// Beam-edge depth in dB.
    pub fn edge_level_db(&self) -> f64 {
        self.edge_level_db
    }

    /// Wavelength in meters.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }

    // pattern argument per unit sin(theta)
    fn k(&self) -> f64 {
        PI * self.diameter_m / self.wavelength_m()
    }
}

fn pattern(x: f64) -> f64 {
    let a = if x.abs() < SMALL_X {
        let q = x * x;
        1.0 - q / 8.0 + q * q / 192.0
    } else {
        2.0 * j1(x) / x
    };
    a * a
}

/// `G(theta) / G_max = (2 J1(x) / x)^2` with `x = sin(theta) π D / λ`.
pub fn antenna_gain_rel(theta_off: f64, cfg: &AntennaConfig) -> f64 {
    pattern(sin(theta_off) * cfg.k())
}

/// Off-axis angle (radians) where the gain has dropped by the edge level.
///
/// Bisection on the main lobe, where the gain decreases monotonically.
pub fn beam_edge_angle(cfg: &AntennaConfig) -> f64 {
    let target = pow(10.0, -cfg.edge_level_db / 10.0);
    let ratio = J1_FIRST_ZERO / cfg.k();
    let mut hi = if ratio < 1.0 { asin(ratio) } else { FRAC_PI_2 };
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if antenna_gain_rel(mid, cfg) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Antenna configuration with its beam edge resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpotBeam {
    cfg: AntennaConfig,
    theta_edge: f64,
    r_edge_m: f64,
}

impl SpotBeam {
    /// Resolves the edge angle and the coverage radius on the ground.
    pub fn new(cfg: AntennaConfig) -> Self {
        let theta_edge = beam_edge_angle(&cfg);
        SpotBeam {
            cfg,
            theta_edge,
            r_edge_m: GEO_ALTITUDE_M * tan(theta_edge),
        }
    }

    /// Antenna configuration.
    pub fn config(&self) -> &AntennaConfig {
        &self.cfg
    }

    /// Edge angle in radians.
    pub fn theta_edge(&self) -> f64 {
        self.theta_edge
    }

    /// Coverage radius on the ground, m.
    pub fn coverage_radius_m(&self) -> f64 {
        self.r_edge_m
    }

    /// Attenuation (dB, positive) at ground distance `r` from the beam center.
    pub fn attenuation_at_radius(&self, r_m: f64) -> f64 {
        let theta = atan(r_m / GEO_ALTITUDE_M);
        let att = -10.0 * log10(antenna_gain_rel(theta, &self.cfg));
        att.clamp(0.0, self.cfg.edge_level_db)
    }

    /// Share of the coverage disk with attenuation at most `att_db`.
    pub fn location_cdf(&self, att_db: f64) -> f64 {
        if att_db <= 0.0 {
            return 0.0;
        }
        if att_db >= self.cfg.edge_level_db {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0, self.r_edge_m);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.attenuation_at_radius(mid) <= att_db {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi) / self.r_edge_m;
        r * r
    }
}

/// Attenuation of a receiver placed uniformly over the coverage disk.
pub fn sample_location_attenuation<R: Rng + ?Sized>(rng: &mut R, beam: &SpotBeam) -> f64 {
    let u: f64 = rng.random();
    beam.attenuation_at_radius(beam.r_edge_m * sqrt(u))
}

/// Tabulated cumulative distribution of the weather attenuation.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherCdf {
    points: Vec<(f64, f64)>,
}

impl WeatherCdf {
    /// `points` are `(attenuation_db, cumulative_probability)`, both
    /// nondecreasing, probabilities from exactly 0 to exactly 1.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, ParamError> {
        if points.len() < 2 {
            return Err(ParamError::BadDistribution("need at least two points"));
        }
        if points.iter().any(|(a, p)| !a.is_finite() || !p.is_finite()) {
            return Err(ParamError::BadDistribution("non-finite value"));
        }
        if points[0].0 < 0.0 {
            return Err(ParamError::BadDistribution("negative attenuation"));
        }
        if points[0].1 != 0.0 {
            return Err(ParamError::BadDistribution("first probability must be 0"));
        }
        if points[points.len() - 1].1 != 1.0 {
            return Err(ParamError::BadDistribution("last probability must be 1"));
        }
        for w in points.windows(2) {
            if w[1].0 < w[0].0 {
                return Err(ParamError::BadDistribution("attenuations decrease"));
            }
            if w[1].1 < w[0].1 {
                return Err(ParamError::BadDistribution("probabilities decrease"));
            }
        }
        Ok(WeatherCdf { points })
    }

    /// No weather attenuation at all.
    pub fn clear_sky() -> Self {
        WeatherCdf {
            points: alloc::vec![(0.0, 0.0), (0.0, 1.0)],
        }
    }

    /// All mass at `att_db`.
    pub fn point_mass(att_db: f64) -> Result<Self, ParamError> {
        WeatherCdf::new(alloc::vec![(att_db, 0.0), (att_db, 1.0)])
    }

    /// Tabulated points.
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Cumulative probability at `att_db`, linear between points.
    pub fn cdf(&self, att_db: f64) -> f64 {
        let pts = &self.points;
        // last point with attenuation <= att_db
        let k = pts.partition_point(|p| p.0 <= att_db);
        if k == 0 {
            return 0.0;
        }
        if k == pts.len() {
            return 1.0;
        }
        let (a0, p0) = pts[k - 1];
        let (a1, p1) = pts[k];
        p0 + (p1 - p0) * (att_db - a0) / (a1 - a0)
    }

    /// Inverse of [`WeatherCdf::cdf`] at `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let pts = &self.points;
        // first point with probability > u
        let k = pts.partition_point(|p| p.1 <= u);
        if k == 0 {
            return pts[0].0;
        }
        if k == pts.len() {
            return pts[pts.len() - 1].0;
        }
        let (a0, p0) = pts[k - 1];
        let (a1, p1) = pts[k];
        a0 + (a1 - a0) * (u - p0) / (p1 - p0)
    }
}

/// Inverse-CDF draw from `cdf`.
pub fn sample_weather_attenuation<R: Rng + ?Sized>(rng: &mut R, cdf: &WeatherCdf) -> f64 {
    cdf.quantile(rng.random())
}

/// One receiver's channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamDraw {
    /// Antenna roll-off at the receiver's position, dB.
    pub location_att_db: f64,
    /// Weather attenuation, dB.
    pub weather_att_db: f64,
    /// Resulting SNR, dB.
    pub snr_db: f64,
}

/// Draws `n` receivers. Receiver `i` uses stream `i` of `pop_seed`, so the
/// population does not depend on evaluation order.
pub fn draw_population(
    n: usize,
    snr_max_db: f64,
    beam: &SpotBeam,
    weather: &WeatherCdf,
    pop_seed: u64,
) -> Vec<BeamDraw> {
    (0..n)
        .map(|i| {
            let mut rng = receiver_rng(pop_seed, i as u64);
            let location_att_db = sample_location_attenuation(&mut rng, beam);
            let weather_att_db = sample_weather_attenuation(&mut rng, weather);
            BeamDraw {
                location_att_db,
                weather_att_db,
                snr_db: snr_max_db - location_att_db - weather_att_db,
            }
        })
        .collect()
}
