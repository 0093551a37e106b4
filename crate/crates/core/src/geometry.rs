//! Geometry of the two-parameter torus family immersed in the unit 5-sphere.
//!
//! For integers m ⩾ n ⩾ 1, gcd(m,n) = 1, the immersion of the (x,y)-torus is
//!
//! ```text
//! φ(x,y) = ( √((m+n)/(2m+n)) · sin x · e^{imy},
//!            √((m+n)/(m+2n)) · cos x · e^{iny},
//!            √(n cos²x/(m+2n) + m sin²x/(2m+n)) · e^{-i(m+n)y} )
//! ```
//!
//! viewed as a point of ℝ⁶ with each complex coordinate stored as a real
//! pair. The squared norm telescopes to 1 identically, so the image lies on
//! S⁵. The induced metric is diagonal with
//!
//! ```text
//! g_xx = ρ(x)/σ(x)²,   g_yy = ρ(x)/2,
//! σ(x)² = m² + 4mn + n² − (m²−n²)cos 2x,
//! ρ(x)  = (m+n)² − (m²−n²)cos 2x.
//! ```
//!
//! When mn is odd the parameterization satisfies φ(x+π, y+π) = φ(x,y): the
//! torus is the quotient of the (2π,2π)-square by that deck transformation
//! and the square is a double cover of it.

use crate::error::{Error, Result};
use std::f64::consts::{PI, TAU};

/// Frequency pair (m, n) selecting a member of the torus family.
///
/// Invariants enforced by [`TorusParams::new`]: m ⩾ n ⩾ 1 and gcd(m, n) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusParams {
    m: u32,
    n: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl TorusParams {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if n < 1 || m < n {
            return Err(Error::InvalidInput(format!(
                "torus parameters require m >= n >= 1, got ({m}, {n})"
            )));
        }
        if gcd(m, n) != 1 {
            return Err(Error::InvalidInput(format!(
                "torus parameters require gcd(m, n) = 1, got ({m}, {n})"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// True when mn is odd, i.e. the (2π,2π)-square double-covers the torus.
    pub fn mn_odd(&self) -> bool {
        self.m % 2 == 1 && self.n % 2 == 1
    }

    pub fn m_f64(&self) -> f64 {
        f64::from(self.m)
    }

    pub fn n_f64(&self) -> f64 {
        f64::from(self.n)
    }

    /// σ(x)² = m² + 4mn + n² − (m²−n²)cos 2x (always ⩾ 2n(2m+n) > 0).
    pub fn sigma_sq(&self, x: f64) -> f64 {
        let (m, n) = (self.m_f64(), self.n_f64());
        m * m + 4.0 * m * n + n * n - (m * m - n * n) * (2.0 * x).cos()
    }

    pub fn sigma(&self, x: f64) -> f64 {
        self.sigma_sq(x).sqrt()
    }

    /// ρ(x) = (m+n)² − (m²−n²)cos 2x ∈ [2n(m+n), 2m(m+n)].
    pub fn rho(&self, x: f64) -> f64 {
        let (m, n) = (self.m_f64(), self.n_f64());
        (m + n) * (m + n) - (m * m - n * n) * (2.0 * x).cos()
    }

    /// Closed-form range of σ: [√(2n(2m+n)), √(2m(m+2n))].
    pub fn sigma_bounds(&self) -> (f64, f64) {
        let (m, n) = (self.m_f64(), self.n_f64());
        (
            (2.0 * n * (2.0 * m + n)).sqrt(),
            (2.0 * m * (m + 2.0 * n)).sqrt(),
        )
    }

    /// Closed-form range of ρ: [2n(m+n), 2m(m+n)].
    pub fn rho_bounds(&self) -> (f64, f64) {
        let (m, n) = (self.m_f64(), self.n_f64());
        (2.0 * n * (m + n), 2.0 * m * (m + n))
    }

    /// Radial profile of the third coordinate,
    /// h₀(x) = √(n cos²x/(m+2n) + m sin²x/(2m+n)); zero-free.
    pub fn radial_profile(&self, x: f64) -> f64 {
        let (m, n) = (self.m_f64(), self.n_f64());
        let (s, c) = x.sin_cos();
        (n * c * c / (m + 2.0 * n) + m * s * s / (2.0 * m + n)).sqrt()
    }
}

impl std::fmt::Display for TorusParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// Point of ℝ⁶ ≅ ℂ³ on the unit 5-sphere; coordinate pairs (0,1), (2,3),
/// (4,5) are the real/imaginary parts of the three complex coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImmersionPoint {
    pub coords: [f64; 6],
}

impl ImmersionPoint {
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Max-norm distance to another point.
    pub fn dist_inf(&self, other: &ImmersionPoint) -> f64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Two-term split of 2π: TAU_HI + TAU_LO carries ~32 extra bits.
const TAU_LO: f64 = 2.4492935982947064e-16;

/// freq·y reduced mod 2π with a compensated double-double subtraction, so
/// the trigonometric arguments keep full relative precision even when the
/// raw product is ~70. Plain `(freq * y).cos()` loses ~1e−14 there, which
/// would drown the symmetry identities this module certifies.
fn reduced_angle(freq: f64, y: f64) -> f64 {
    let hi = freq * y;
    let lo = freq.mul_add(y, -hi);
    let q = (hi / TAU).round();
    let qhi = q * TAU;
    let qlo = q.mul_add(TAU, -qhi);
    // hi − qhi is small, so the subtraction is exact to its own ulp; the
    // lower-order terms then restore the discarded bits.
    (hi - qhi) - (q * TAU_LO + qlo) + lo
}

/// Evaluate the immersion at (x, y). Angles are reduced mod 2π before any
/// trigonometry so large inputs do not lose precision.
pub fn immerse(params: TorusParams, x: f64, y: f64) -> ImmersionPoint {
    let x = x.rem_euclid(TAU);
    let y = y.rem_euclid(TAU);
    let (m, n) = (params.m_f64(), params.n_f64());
    let a1 = ((m + n) / (2.0 * m + n)).sqrt();
    let a2 = ((m + n) / (m + 2.0 * n)).sqrt();
    let (sx, cx) = x.sin_cos();
    let r3 = params.radial_profile(x);
    let (s1, c1) = reduced_angle(m, y).sin_cos();
    let (s2, c2) = reduced_angle(n, y).sin_cos();
    let (s3, c3) = reduced_angle(m + n, y).sin_cos();
    ImmersionPoint {
        coords: [
            a1 * sx * c1,
            a1 * sx * s1,
            a2 * cx * c2,
            a2 * cx * s2,
            r3 * c3,
            -r3 * s3, // e^{-i(m+n)y}
        ],
    }
}

/// Metric and coefficient data at a fixed x (everything is y-independent).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientField {
    pub sigma: f64,
    pub rho: f64,
    pub g_xx: f64,
    pub g_yy: f64,
}

pub fn metric_coeffs(params: TorusParams, x: f64) -> CoefficientField {
    let sigma_sq = params.sigma_sq(x);
    let rho = params.rho(x);
    CoefficientField {
        sigma: sigma_sq.sqrt(),
        rho,
        g_xx: rho / sigma_sq,
        g_yy: rho / 2.0,
    }
}

/// Outcome of probing the deck transformation (x,y) ↦ (x+π, y+π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    /// True iff φ(x+π, y+π) = φ(x,y) held to 1e−14 at every sample.
    pub is_double_cover: bool,
    /// Largest max-norm deviation seen over the samples.
    pub max_deviation: f64,
}

/// Probe the double-cover identity on `sample_count` quasi-uniform points.
///
/// The identity holds exactly iff mn is odd (all three y-frequencies m, n,
/// m+n must flip sign together under y ↦ y+π while sin/cos x swap signs).
pub fn symmetry_check(params: TorusParams, sample_count: usize) -> Result<SymmetryReport> {
    if sample_count < 16 {
        return Err(Error::InvalidInput(format!(
            "symmetry check needs at least 16 samples, got {sample_count}"
        )));
    }
    // Golden-ratio lattice: deterministic, well spread over the square.
    const PHI: f64 = 0.618_033_988_749_894_9;
    let mut max_dev: f64 = 0.0;
    for j in 0..sample_count {
        let t = (j as f64 + 0.5) / sample_count as f64;
        let x = TAU * t;
        let y = TAU * ((j as f64 * PHI + 0.25).fract());
        let a = immerse(params, x, y);
        let b = immerse(params, x + PI, y + PI);
        max_dev = max_dev.max(a.dist_inf(&b));
    }
    Ok(SymmetryReport {
        is_double_cover: max_dev < 1e-14,
        max_deviation: max_dev,
    })
}

/// Shape of one coordinate's radial factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// √((m+n)/(2m+n)) sin x, paired with y-frequency m.
    SinX,
    /// √((m+n)/(m+2n)) cos x, paired with y-frequency n.
    CosX,
    /// The zero-free radial profile h₀, paired with y-frequency m+n.
    Radial,
}

impl ProfileKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProfileKind::SinX => "sin-x",
            ProfileKind::CosX => "cos-x",
            ProfileKind::Radial => "radial",
        }
    }
}

/// One coordinate of the immersion split as profile(x) · e^{±i·frequency·y}.
#[derive(Debug, Clone, Copy)]
pub struct CoordinateProfile {
    pub kind: ProfileKind,
    pub frequency: u32,
    params: TorusParams,
}

impl CoordinateProfile {
    pub fn params(&self) -> TorusParams {
        self.params
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (m, n) = (self.params.m_f64(), self.params.n_f64());
        match self.kind {
            ProfileKind::SinX => ((m + n) / (2.0 * m + n)).sqrt() * x.sin(),
            ProfileKind::CosX => ((m + n) / (m + 2.0 * n)).sqrt() * x.cos(),
            ProfileKind::Radial => self.params.radial_profile(x),
        }
    }

    /// Sample on the uniform grid x_i = i·T/len used by the discrete solvers.
    pub fn sample(&self, len: usize, period: f64) -> Vec<f64> {
        (0..len)
            .map(|i| self.eval(period * i as f64 / len as f64))
            .collect()
    }
}

/// The three coordinate profiles with their y-frequencies {m, n, m+n}.
pub fn coordinate_profiles(params: TorusParams) -> [CoordinateProfile; 3] {
    [
        CoordinateProfile {
            kind: ProfileKind::SinX,
            frequency: params.m(),
            params,
        },
        CoordinateProfile {
            kind: ProfileKind::CosX,
            frequency: params.n(),
            params,
        },
        CoordinateProfile {
            kind: ProfileKind::Radial,
            frequency: params.m() + params.n(),
            params,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn assert_close(a: f64, b: f64, tol: f64, msg: &str) {
        assert!(
            (a - b).abs() <= tol,
            "{msg}: expected {b}, got {a}, diff {:.3e}",
            (a - b).abs()
        );
    }

    #[test]
    fn params_validation() {
        assert!(TorusParams::new(2, 1).is_ok());
        assert!(TorusParams::new(1, 1).is_ok());
        assert!(TorusParams::new(1, 2).is_err()); // m < n
        assert!(TorusParams::new(4, 2).is_err()); // gcd 2
        assert!(TorusParams::new(3, 0).is_err()); // n < 1
    }

    #[test]
    fn unit_norm_on_random_samples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &(m, n) in &[(1u32, 1u32), (2, 1), (3, 2), (7, 4), (11, 1)] {
            let p = TorusParams::new(m, n).unwrap();
            for _ in 0..10_000 {
                let x: f64 = rng.gen_range(-20.0..20.0);
                let y: f64 = rng.gen_range(-20.0..20.0);
                let pt = immerse(p, x, y);
                assert!(
                    (pt.norm() - 1.0).abs() < 1e-13,
                    "norm deviates at ({m},{n}), x={x}, y={y}: {:.3e}",
                    (pt.norm() - 1.0).abs()
                );
            }
        }
    }

    #[test]
    fn periodicity_in_both_angles() {
        let p = TorusParams::new(3, 2).unwrap();
        for j in 0..40 {
            let x = 0.17 + 0.31 * j as f64;
            let y = -0.4 + 0.23 * j as f64;
            let a = immerse(p, x, y);
            assert!(a.dist_inf(&immerse(p, x + TAU, y)) < 1e-12);
            assert!(a.dist_inf(&immerse(p, x, y + TAU)) < 1e-12);
        }
    }

    #[test]
    fn double_cover_only_for_odd_products() {
        for &(m, n, odd) in &[
            (1u32, 1u32, true),
            (3, 1, true),
            (5, 3, true),
            (11, 1, true),
            (2, 1, false),
            (3, 2, false),
            (7, 4, false),
        ] {
            let p = TorusParams::new(m, n).unwrap();
            assert_eq!(p.mn_odd(), odd);
            let rep = symmetry_check(p, 64).unwrap();
            assert_eq!(rep.is_double_cover, odd, "({m},{n}): {rep:?}");
            if odd {
                assert!(rep.max_deviation < 1e-14, "({m},{n}): {rep:?}");
            } else {
                // Genuinely refuted, not a tolerance accident.
                assert!(rep.max_deviation > 1e-2, "({m},{n}): {rep:?}");
            }
        }
    }

    #[test]
    fn symmetry_check_rejects_tiny_sample_counts() {
        let p = TorusParams::new(2, 1).unwrap();
        assert!(symmetry_check(p, 15).is_err());
        assert!(symmetry_check(p, 16).is_ok());
    }

    #[test]
    fn coefficient_bounds_hold_on_grid() {
        for &(m, n) in &[(1u32, 1u32), (2, 1), (5, 4), (9, 2)] {
            let p = TorusParams::new(m, n).unwrap();
            let (slo, shi) = p.sigma_bounds();
            let (rlo, rhi) = p.rho_bounds();
            for i in 0..1000 {
                let x = TAU * i as f64 / 1000.0;
                let c = metric_coeffs(p, x);
                assert!(c.sigma >= slo - 1e-12 && c.sigma <= shi + 1e-12);
                assert!(c.rho >= rlo - 1e-12 && c.rho <= rhi + 1e-12);
                assert_close(c.g_xx, c.rho / (c.sigma * c.sigma), 1e-15, "g_xx");
                assert_close(c.g_yy, c.rho / 2.0, 1e-15, "g_yy");
            }
        }
    }

    #[test]
    fn flat_member_has_constant_coefficients() {
        let p = TorusParams::new(1, 1).unwrap();
        for i in 0..32 {
            let x = TAU * i as f64 / 32.0;
            assert_close(p.sigma(x), 6.0f64.sqrt(), 1e-14, "sigma(1,1)");
            assert_close(p.rho(x), 4.0, 1e-14, "rho(1,1)");
        }
    }

    #[test]
    fn profiles_carry_the_three_frequencies() {
        let p = TorusParams::new(4, 1).unwrap();
        let profs = coordinate_profiles(p);
        let freqs: Vec<u32> = profs.iter().map(|pr| pr.frequency).collect();
        assert_eq!(freqs, vec![4, 1, 5]);
        // Profile values against the matching immersion coordinates at y=0.
        for j in 0..20 {
            let x = 0.05 + 0.3 * j as f64;
            let pt = immerse(p, x, 0.0);
            assert_close(profs[0].eval(x), pt.coords[0], 1e-13, "sin-x profile");
            assert_close(profs[1].eval(x), pt.coords[2], 1e-13, "cos-x profile");
            assert_close(profs[2].eval(x), pt.coords[4], 1e-13, "radial profile");
        }
    }
}
