//! Hierarchical constellations.
//!
//! A hierarchical constellation carries two streams per symbol. The points
//! are arranged in clusters: the cluster index is the high-energy (HE)
//! symbol, the position inside the cluster is the low-energy (LE) symbol.
//! The energy of the HE stream is the energy of the constellation formed by
//! the cluster barycenters; `rho_he` is that energy divided by the mean
//! symbol energy.
//!
//! Angles are given in degrees at the API boundary.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use libm::{cos, sin, sqrt};
use num_complex::Complex64;

use crate::error::ParamError;

/// Hierarchical QPSK: points at `±theta` and `180° ∓ theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpskParams {
    theta_deg: f64,
}

impl QpskParams {
    /// `theta` is the half-angle off the I axis, `0 < theta <= 45`.
    pub fn new(theta_deg: f64) -> Result<Self, ParamError> {
        if !(theta_deg > 0.0 && theta_deg <= 45.0) {
            return Err(ParamError::OutOfRange {
                name: "theta",
                value: theta_deg,
                expected: "0 < theta <= 45 degrees",
            });
        }
        Ok(QpskParams { theta_deg })
    }

    /// Half-angle in degrees.
    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }
}

/// Hierarchical 8-PSK: two points per quadrant at `45° ± theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Psk8Params {
    theta_deg: f64,
}

impl Psk8Params {
    /// `theta` is the half-angle between the two points of a quadrant,
    /// `0 < theta < 45`.
    pub fn new(theta_deg: f64) -> Result<Self, ParamError> {
        if !(theta_deg > 0.0 && theta_deg < 45.0) {
            return Err(ParamError::OutOfRange {
                name: "theta",
                value: theta_deg,
                expected: "0 < theta < 45 degrees",
            });
        }
        Ok(Psk8Params { theta_deg })
    }

    /// Half-angle in degrees.
    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }
}

/// Hierarchical 32-APSK with rings `R1 < R2 < R3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Apsk32Params {
    gamma1: f64,
    gamma2: f64,
    theta_deg: f64,
}

impl Apsk32Params {
    /// `gamma1 = R2/R1`, `gamma2 = R3/R1`, `theta` the outer-ring half-angle
    /// in degrees. Requires `1 < gamma1 < gamma2` and `0 < theta < 45`.
    pub fn new(gamma1: f64, gamma2: f64, theta_deg: f64) -> Result<Self, ParamError> {
        if !(gamma1 > 1.0 && gamma1.is_finite()) {
            return Err(ParamError::OutOfRange {
                name: "gamma1",
                value: gamma1,
                expected: "gamma1 > 1",
            });
        }
        if !(gamma2 > gamma1 && gamma2.is_finite()) {
            return Err(ParamError::OutOfRange {
                name: "gamma2",
                value: gamma2,
                expected: "gamma2 > gamma1",
            });
        }
        if !(theta_deg > 0.0 && theta_deg < 45.0) {
            return Err(ParamError::OutOfRange {
                name: "theta",
                value: theta_deg,
                expected: "0 < theta < 45 degrees",
            });
        }
        Ok(Apsk32Params {
            gamma1,
            gamma2,
            theta_deg,
        })
    }

    /// Builds parameters without range checks. Used for degenerate
    /// consistency checks (e.g. all rings equal).
    pub fn new_unchecked(gamma1: f64, gamma2: f64, theta_deg: f64) -> Self {
        Apsk32Params {
            gamma1,
            gamma2,
            theta_deg,
        }
    }

    /// Middle-to-inner ring ratio.
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    /// Outer-to-inner ring ratio.
    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    /// Outer-ring half-angle in degrees.
    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }
}

/// Non-uniform 16-QAM, `alpha = d_h / d_l >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qam16Params {
    alpha: f64,
}

impl Qam16Params {
    /// Validates `alpha >= 1`.
    pub fn new(alpha: f64) -> Result<Self, ParamError> {
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(ParamError::OutOfRange {
                name: "alpha",
                value: alpha,
                expected: "alpha >= 1",
            });
        }
        Ok(Qam16Params { alpha })
    }

    /// Distance ratio.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Unit-energy symbol coordinates of a hierarchical constellation.
///
/// Points are stored cluster by cluster: the `2^le_bits` points sharing an
/// HE symbol are contiguous, clusters ordered by HE symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationPoints {
    /// Symbol coordinates, mean squared modulus 1.
    pub points: Vec<Complex64>,
    /// HE bits per symbol.
    pub he_bits: u32,
    /// LE bits per symbol.
    pub le_bits: u32,
}

impl ConstellationPoints {
    fn normalized(points: Vec<Complex64>, he_bits: u32, le_bits: u32) -> Self {
        debug_assert_eq!(points.len(), 1 << (he_bits + le_bits));
        let scale = 1.0 / sqrt(mean_energy(&points));
        ConstellationPoints {
            points: points.into_iter().map(|p| p * scale).collect(),
            he_bits,
            le_bits,
        }
    }

    /// Mean squared modulus of the points.
    pub fn mean_energy(&self) -> f64 {
        mean_energy(&self.points)
    }

    /// Points sharing HE symbol `he`.
    pub fn cluster(&self, he: usize) -> &[Complex64] {
        let size = 1 << self.le_bits;
        &self.points[he * size..(he + 1) * size]
    }

    /// Barycenter of every HE cluster, in HE-symbol order.
    pub fn he_barycenters(&self) -> Vec<Complex64> {
        (0..1usize << self.he_bits)
            .map(|he| {
                let c = self.cluster(he);
                c.iter().sum::<Complex64>() / c.len() as f64
            })
            .collect()
    }

    /// Energy of the barycenter constellation over the mean symbol energy.
    pub fn rho_he(&self) -> f64 {
        mean_energy(&self.he_barycenters()) / self.mean_energy()
    }
}

fn mean_energy(points: &[Complex64]) -> f64 {
    points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64
}

fn polar(r: f64, angle: f64) -> Complex64 {
    Complex64::new(r * cos(angle), r * sin(angle))
}

/// Share of symbol energy in the HE stream of hierarchical QPSK: `cos²θ`.
pub fn qpsk_rho_he(params: &QpskParams) -> f64 {
    let c = cos(params.theta_deg.to_radians());
    c * c
}

/// Share of symbol energy in the HE stream of hierarchical 8-PSK: `cos²θ`.
pub fn psk8_rho_he(params: &Psk8Params) -> f64 {
    let c = cos(params.theta_deg.to_radians());
    c * c
}

/// Distance of the 32-APSK quadrant barycenter to the origin, in units of
/// `sqrt(Es)`.
pub fn apsk32_barycenter_distance(params: &Apsk32Params) -> f64 {
    let (g1, g2) = (params.gamma1, params.gamma2);
    let t = params.theta_deg.to_radians();
    let num = 1.0 + g1 * (1.0 + 2.0 * cos(t)) + 2.0 * g2 * (cos(t) + cos(t / 3.0));
    let den = sqrt(8.0 * (1.0 + 3.0 * g1 * g1 + 4.0 * g2 * g2));
    num / den
}

/// Share of symbol energy in the HE stream of hierarchical 32-APSK.
pub fn apsk32_rho_he(params: &Apsk32Params) -> f64 {
    let (g1, g2) = (params.gamma1, params.gamma2);
    let t = params.theta_deg.to_radians();
    let num = 1.0 + g1 * (1.0 + 2.0 * cos(t)) + 2.0 * g2 * (cos(t) + cos(t / 3.0));
    num * num / (8.0 * (1.0 + 3.0 * g1 * g1 + 4.0 * g2 * g2))
}

/// `E_he / E_le = (1 + alpha)²` for non-uniform 16-QAM.
pub fn qam16_energy_ratio(params: &Qam16Params) -> f64 {
    (1.0 + params.alpha) * (1.0 + params.alpha)
}

/// Hierarchical QPSK points. HE symbol 0 is the right half-plane.
pub fn build_qpsk_points(params: &QpskParams) -> ConstellationPoints {
    let t = params.theta_deg.to_radians();
    let pi = core::f64::consts::PI;
    let points = alloc::vec![
        polar(1.0, t),
        polar(1.0, -t),
        polar(1.0, pi - t),
        polar(1.0, pi + t),
    ];
    ConstellationPoints::normalized(points, 1, 1)
}

/// Hierarchical 8-PSK points; one cluster per quadrant.
pub fn build_psk8_points(params: &Psk8Params) -> ConstellationPoints {
    let t = params.theta_deg.to_radians();
    let mut points = Vec::with_capacity(8);
    for q in 0..4 {
        let diag = FRAC_PI_4 + q as f64 * FRAC_PI_2;
        points.push(polar(1.0, diag + t));
        points.push(polar(1.0, diag - t));
    }
    ConstellationPoints::normalized(points, 2, 1)
}

/// Hierarchical 32-APSK points; one 8-point cluster per quadrant.
///
/// Per quadrant, around the diagonal: one inner point on it, middle-ring
/// points at `{0, ±θ}` and outer-ring points at `{±θ/3, ±θ}`.
pub fn build_apsk32_points(params: &Apsk32Params) -> ConstellationPoints {
    let t = params.theta_deg.to_radians();
    let (r1, r2, r3) = (1.0, params.gamma1, params.gamma2);
    let mut points = Vec::with_capacity(32);
    for q in 0..4 {
        let diag = FRAC_PI_4 + q as f64 * FRAC_PI_2;
        points.push(polar(r1, diag));
        for off in [0.0, t, -t] {
            points.push(polar(r2, diag + off));
        }
        for off in [t, -t, t / 3.0, -t / 3.0] {
            points.push(polar(r3, diag + off));
        }
    }
    ConstellationPoints::normalized(points, 2, 3)
}

/// Hierarchical QPSK parameters adopted per energy split, `(rho_he, theta)`.
pub const QPSK_ADOPTED: [(f64, f64); 9] = [
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

/// Hierarchical 32-APSK parameters adopted per energy split,
/// `(rho_he, gamma1, gamma2, theta)`.
pub const APSK32_ADOPTED: [(f64, f64, f64, f64); 5] = [
    (0.7, 2.4, 5.0, 32.3),
    (0.75, 1.8, 3.4, 30.2),
    (0.8, 1.6, 2.6, 28.4),
    (0.85, 1.6, 2.2, 25.6),
    (0.9, 1.8, 2.4, 17.4),
];

/// Hierarchical 8-PSK half-angles used in the system simulations.
pub const PSK8_THETAS: [f64; 4] = [30.0, 27.0, 24.0, 18.0];

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Barycenter of the upper-right quadrant computed from the explicit
    /// polar coordinates, independent of `build_apsk32_points`.
    fn brute_barycenter(g1: f64, g2: f64, theta_deg: f64) -> (f64, f64) {
        let t = theta_deg.to_radians();
        let d = FRAC_PI_4;
        let pts: [(f64, f64); 8] = [
            (1.0, d),
            (g1, d),
            (g1, d + t),
            (g1, d - t),
            (g2, d + t),
            (g2, d - t),
            (g2, d + t / 3.0),
            (g2, d - t / 3.0),
        ];
        let es = (4.0 + 12.0 * g1 * g1 + 16.0 * g2 * g2) / 32.0;
        let (mut x, mut y) = (0.0, 0.0);
        for (r, a) in pts {
            x += r * a.cos();
            y += r * a.sin();
        }
        let s = es.sqrt() * 8.0;
        (x / s, y / s)
    }

    #[test]
    fn qpsk_rho_examples() {
        assert!(close(
            qpsk_rho_he(&QpskParams::new(45.0).unwrap()),
            0.5,
            1e-15
        ));
        assert!(close(
            qpsk_rho_he(&QpskParams::new(30.0).unwrap()),
            0.75,
            1e-15
        ));
        assert!(close(
            qpsk_rho_he(&QpskParams::new(24.0).unwrap()),
            0.8346,
            5e-5
        ));
    }

    #[test]
    fn qpsk_theta_bounds() {
        assert!(QpskParams::new(0.0).is_err());
        assert!(QpskParams::new(-1.0).is_err());
        assert!(QpskParams::new(45.1).is_err());
        assert!(QpskParams::new(90.0).is_err());
        assert!(QpskParams::new(f64::NAN).is_err());
        assert!(QpskParams::new(45.0).is_ok());
    }

    #[test]
    fn apsk_param_bounds() {
        assert!(Apsk32Params::new(1.0, 2.0, 20.0).is_err());
        assert!(Apsk32Params::new(2.0, 2.0, 20.0).is_err());
        assert!(Apsk32Params::new(2.0, 3.0, 45.0).is_err());
        assert!(Apsk32Params::new(2.0, 3.0, 0.0).is_err());
        assert!(Apsk32Params::new(2.0, 3.0, 44.9).is_ok());
        assert!(Qam16Params::new(0.99).is_err());
    }

    #[test]
    fn table_one_rebuild() {
        for (rho, theta) in QPSK_ADOPTED {
            let got = qpsk_rho_he(&QpskParams::new(theta).unwrap());
            assert!(close(got, rho, 0.02), "theta {theta}: {got} vs {rho}");
        }
    }

    #[test]
    fn table_two_triples() {
        for (rho, g1, g2, t) in APSK32_ADOPTED {
            let p = Apsk32Params::new(g1, g2, t).unwrap();
            let got = apsk32_rho_he(&p);
            assert!(close(got, rho, 0.005), "{rho}: {got}");
            assert!(got >= 0.5);
        }
    }

    #[test]
    fn barycenter_distance_examples() {
        let p = Apsk32Params::new(1.8, 3.4, 30.2).unwrap();
        let d = apsk32_barycenter_distance(&p);
        assert!(close(d, 0.75f64.sqrt(), 0.003), "{d}");
        // Brute-force barycenter with all rings equal.
        for t in [5.0, 17.0, 33.3] {
            let p = Apsk32Params::new_unchecked(1.0, 1.0, t);
            let (x, y) = brute_barycenter(1.0, 1.0, t);
            assert!(close(apsk32_barycenter_distance(&p), x.hypot(y), 1e-12));
        }
    }

    #[test]
    fn qam16_ratio() {
        assert_eq!(qam16_energy_ratio(&Qam16Params::new(1.0).unwrap()), 4.0);
        assert_eq!(qam16_energy_ratio(&Qam16Params::new(2.0).unwrap()), 9.0);
        assert_eq!(qam16_energy_ratio(&Qam16Params::new(1.5).unwrap()), 6.25);
    }

    #[test]
    fn uniform_qpsk_points() {
        let c = build_qpsk_points(&QpskParams::new(45.0).unwrap());
        let h = core::f64::consts::FRAC_1_SQRT_2;
        for p in &c.points {
            assert!(close(p.re.abs(), h, 1e-15) && close(p.im.abs(), h, 1e-15));
        }
        assert_eq!((c.he_bits, c.le_bits), (1, 1));
    }

    #[test]
    fn qpsk_points_at_thirty() {
        let c = build_qpsk_points(&QpskParams::new(30.0).unwrap());
        let mut angles: Vec<f64> = c
            .points
            .iter()
            .map(|p| p.im.atan2(p.re).to_degrees().rem_euclid(360.0))
            .collect();
        angles.sort_by(f64::total_cmp);
        for (a, want) in angles.iter().zip([30.0, 150.0, 210.0, 330.0]) {
            assert!(close(*a, want, 1e-12), "{a}");
        }
        for p in &c.points {
            assert!(close(p.norm_sqr().sqrt(), 1.0, 1e-15));
        }
    }

    #[test]
    fn psk8_points() {
        let p = Psk8Params::new(30.0).unwrap();
        let c = build_psk8_points(&p);
        assert_eq!(c.points.len(), 8);
        assert!(close(c.mean_energy(), 1.0, 1e-12));
        assert!(close(c.rho_he(), psk8_rho_he(&p), 1e-12));
        assert!(close(psk8_rho_he(&p), 0.75, 1e-12));
    }

    #[test]
    fn apsk32_layout() {
        let c = build_apsk32_points(&Apsk32Params::new(1.8, 3.4, 30.2).unwrap());
        assert_eq!(c.points.len(), 32);
        assert_eq!((c.he_bits, c.le_bits), (2, 3));
        let mut radii: Vec<f64> = c.points.iter().map(|p| p.norm_sqr().sqrt()).collect();
        radii.sort_by(f64::total_cmp);
        // 4 inner, 12 middle, 16 outer
        assert!(close(radii[0], radii[3], 1e-12));
        assert!(radii[4] > radii[3] + 1e-6);
        assert!(close(radii[4], radii[15], 1e-12));
        assert!(radii[16] > radii[15] + 1e-6);
        assert!(close(radii[16], radii[31], 1e-12));
        let b = c.he_barycenters()[0];
        assert!(close(b.norm_sqr(), 0.75, 0.005));
    }

    proptest! {
        #[test]
        fn qpsk_rho_monotone(a in 0.01f64..45.0, b in 0.01f64..45.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let r_lo = qpsk_rho_he(&QpskParams::new(lo).unwrap());
            let r_hi = qpsk_rho_he(&QpskParams::new(hi).unwrap());
            prop_assert!(r_hi <= r_lo);
            prop_assert!((0.5 - 1e-15..1.0).contains(&r_hi));
        }

        #[test]
        fn qpsk_barycenter_energy(theta in 0.01f64..=45.0) {
            let p = QpskParams::new(theta).unwrap();
            let c = build_qpsk_points(&p);
            prop_assert!(close(c.mean_energy(), 1.0, 1e-12));
            for b in c.he_barycenters() {
                prop_assert!(close(b.norm_sqr(), qpsk_rho_he(&p), 1e-12));
            }
        }

        #[test]
        fn apsk32_distance_squared_is_rho(
            g1 in 1.001f64..4.0, dg in 0.001f64..4.0, t in 0.01f64..44.99
        ) {
            let p = Apsk32Params::new(g1, g1 + dg, t).unwrap();
            let d = apsk32_barycenter_distance(&p);
            prop_assert!(close(d * d, apsk32_rho_he(&p), 1e-12));
        }

        #[test]
        fn apsk32_formula_matches_geometry(
            g1 in 1.001f64..4.0, dg in 0.001f64..4.0, t in 0.01f64..44.99
        ) {
            let p = Apsk32Params::new(g1, g1 + dg, t).unwrap();
            let c = build_apsk32_points(&p);
            prop_assert!(close(c.mean_energy(), 1.0, 1e-12));
            let b = c.he_barycenters()[0];
            let (x, y) = brute_barycenter(g1, g1 + dg, t);
            prop_assert!(close(b.re, x, 1e-12) && close(b.im, y, 1e-12));
            prop_assert!(close(b.norm_sqr(), apsk32_rho_he(&p), 1e-9));
            prop_assert!(close(c.rho_he(), apsk32_rho_he(&p), 1e-9));
        }
    }
}
