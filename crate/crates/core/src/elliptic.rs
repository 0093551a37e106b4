//! Complete elliptic integrals via the arithmetic–geometric mean, the modulus
//! map of the torus family, and the closed-form area / functional values.
//!
//! Convention: the *modulus* k parameterizes everything here (K(k), E(k) with
//! k² appearing inside the integrands). Callers never pass the squared
//! parameter m = k²; mixing the two conventions is the classic source of
//! silently wrong elliptic values.

use crate::error::{Error, Result};
use crate::geometry::TorusParams;
use std::f64::consts::PI;

/// Complete elliptic integrals of the first and second kind at modulus k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPair {
    pub k: f64,
    pub k_first: f64,
    pub e_second: f64,
}

/// K(k) and E(k) by the AGM iteration: (a,b) ← ((a+b)/2, √(ab)) starting from
/// (1, √(1−k²)), stopping once |a−b| < 4·ε. K = π/(2a). E comes from the
/// companion sum E = K·(1 − Σ 2^{j−1} c_j²) with c₀ = k, c_{j+1} = (a_j−b_j)/2.
pub fn agm_ke(k: f64) -> Result<EllipticPair> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::InvalidInput(format!(
            "modulus must satisfy 0 <= k < 1 (K diverges at 1), got {k}"
        )));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - k * k).sqrt();
    let mut sum = 0.5 * k * k; // 2^{-1} c_0²
    let mut pow = 0.5;
    while (a - b).abs() >= 4.0 * f64::EPSILON {
        let c = 0.5 * (a - b);
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
        pow *= 2.0;
        sum += pow * c * c;
    }
    let k_first = PI / (2.0 * a);
    Ok(EllipticPair {
        k,
        k_first,
        e_second: k_first * (1.0 - sum),
    })
}

/// Modulus of the (m,n) torus: k = √((m²−n²)/(m²+2mn)) ∈ [0, 1).
pub fn modulus(params: TorusParams) -> f64 {
    let (m, n) = (params.m_f64(), params.n_f64());
    ((m * m - n * n) / (m * m + 2.0 * m * n)).sqrt()
}

/// Area of the immersed torus, closed form:
/// 8π(√(m²+2mn)·E(k) − mn/√(m²+2mn)·K(k)), halved when mn is odd (the
/// (2π,2π)-square double-covers the surface in that case).
pub fn area(params: TorusParams) -> f64 {
    let (m, n) = (params.m_f64(), params.n_f64());
    let s = (m * m + 2.0 * m * n).sqrt();
    let ke = agm_ke(modulus(params)).expect("family modulus is always < 1");
    let full = 8.0 * PI * (s * ke.e_second - m * n / s * ke.k_first);
    if params.mn_odd() {
        full / 2.0
    } else {
        full
    }
}

/// Area by adaptive Simpson quadrature of the defining integral
/// (2π/√2)∫₀^{2π} ρ(x)/σ(x) dx, halved when mn is odd. Independent of the
/// closed form above — used as its cross-check.
pub fn quadrature_area(params: TorusParams, tol: f64) -> Result<f64> {
    if tol < 1e-12 {
        return Err(Error::InvalidInput(format!(
            "quadrature tolerance must be >= 1e-12, got {tol:e}"
        )));
    }
    let f = |x: f64| (2.0 * PI / 2.0f64.sqrt()) * params.rho(x) / params.sigma(x);
    let full = adaptive_simpson(&f, 0.0, 2.0 * PI, tol)?;
    Ok(if params.mn_odd() { full / 2.0 } else { full })
}

/// Adaptive Simpson with interval bisection and the standard |S₂−S₁|/15
/// error estimate; absolute tolerance.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::QuadratureFailure(format!(
                "bisection depth exhausted on [{a:.6}, {b:.6}], residual {:.3e}",
                delta.abs()
            )));
        }
        let l = recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)?;
        let r = recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)?;
        Ok(l + r)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Index and normalized-eigenvalue functional data for one family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalReport {
    pub params: TorusParams,
    /// 4(m+n)−3 when mn is even, 2(m+n)−3 when mn is odd.
    pub index: u32,
    /// Λ_index = 2 × area, closed form.
    pub lambda_closed: f64,
    /// 2 × quadrature area.
    pub lambda_numeric: f64,
    pub rel_err: f64,
    /// 8π·index − Λ_index; positive means the metric is not maximal for its
    /// functional. Negative only for (1,1), the exceptional maximal member.
    pub nonmax_margin: f64,
}

/// Weyl index carried by the family member: the number of Laplace
/// eigenvalues strictly below 2.
pub fn functional_index(params: TorusParams) -> u32 {
    let s = params.m() + params.n();
    if params.mn_odd() {
        2 * s - 3
    } else {
        4 * s - 3
    }
}

pub fn functional_value(params: TorusParams) -> Result<FunctionalReport> {
    let index = functional_index(params);
    let lambda_closed = 2.0 * area(params);
    let lambda_numeric = 2.0 * quadrature_area(params, 1e-10)?;
    Ok(FunctionalReport {
        params,
        index,
        lambda_closed,
        lambda_numeric,
        rel_err: (lambda_closed - lambda_numeric).abs() / lambda_closed,
        nonmax_margin: 8.0 * PI * f64::from(index) - lambda_closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64, msg: &str) {
        assert!(
            (a - b).abs() <= tol,
            "{msg}: expected {b}, got {a}, diff {:.3e}",
            (a - b).abs()
        );
    }

    #[test]
    fn degenerate_modulus_gives_quarter_circle_values() {
        let p = agm_ke(0.0).unwrap();
        assert_close(p.k_first, PI / 2.0, 1e-15, "K(0)");
        assert_close(p.e_second, PI / 2.0, 1e-15, "E(0)");
    }

    #[test]
    fn frozen_values_at_half() {
        // Independent Maclaurin-series values, summed to 1e-16 elsewhere in
        // the test suite; frozen here as spot constants.
        let p = agm_ke(0.5).unwrap();
        assert_close(p.k_first, 1.685_750_354_812_596, 1e-14, "K(0.5)");
        assert_close(p.e_second, 1.467_462_209_339_427_2, 1e-14, "E(0.5)");
    }

    #[test]
    fn family_modulus_and_its_elliptic_values() {
        let p21 = TorusParams::new(2, 1).unwrap();
        let k = modulus(p21);
        assert_close(k, (3.0f64 / 8.0).sqrt(), 1e-15, "k(2,1)");
        let pair = agm_ke(k).unwrap();
        assert_close(pair.k_first, 1.7605688117719545, 1e-13, "K(k(2,1))");
        assert_close(pair.e_second, 1.4111237670965147, 1e-13, "E(k(2,1))");
        assert_close(modulus(TorusParams::new(1, 1).unwrap()), 0.0, 0.0, "k(1,1)");
    }

    #[test]
    fn rejects_modulus_at_or_above_one() {
        assert!(agm_ke(1.0).is_err());
        assert!(agm_ke(1.5).is_err());
        assert!(agm_ke(-0.1).is_err());
    }

    #[test]
    fn first_kind_dominates_second() {
        // K ⩾ π/2 ⩾ E with equality only at k = 0, and the sharper bound
        // K − 2E/(2−k²) ⩾ 0 used by the area inequalities.
        for j in 0..20 {
            let k = 0.05 * j as f64;
            let p = agm_ke(k).unwrap();
            assert!(p.k_first >= PI / 2.0 - 1e-15);
            assert!(p.e_second <= PI / 2.0 + 1e-15);
            let gap = p.k_first - 2.0 / (2.0 - k * k) * p.e_second;
            assert!(gap >= -1e-14, "E-K inequality at k={k}: {gap:.3e}");
            if j >= 1 {
                assert!(gap > 0.0, "strict positivity at k={k}");
            }
        }
    }

    #[test]
    fn flat_member_area_is_exact() {
        // (1,1): K(0)=E(0)=π/2 in the closed form, halved for odd parity:
        // 4π²/√3.
        let a = area(TorusParams::new(1, 1).unwrap());
        assert_close(a, 4.0 * PI * PI / 3.0f64.sqrt(), 1e-12, "area(1,1)");
    }

    #[test]
    fn area_spot_value() {
        let a = area(TorusParams::new(2, 1).unwrap());
        assert_close(a, 69.02331879430439, 1e-10, "area(2,1)");
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let p11 = TorusParams::new(1, 1).unwrap();
        assert_close(
            quadrature_area(p11, 1e-12).unwrap(),
            area(p11),
            1e-10,
            "quad area (1,1)",
        );
        let p21 = TorusParams::new(2, 1).unwrap();
        assert_close(
            quadrature_area(p21, 1e-12).unwrap(),
            area(p21),
            1e-9,
            "quad area (2,1)",
        );
    }

    #[test]
    fn integrand_period_halves() {
        // The integrand has period π: [0,π] doubled equals [0,2π].
        let p = TorusParams::new(3, 2).unwrap();
        let f = |x: f64| (2.0 * PI / 2.0f64.sqrt()) * p.rho(x) / p.sigma(x);
        let half = adaptive_simpson(&f, 0.0, PI, 1e-11).unwrap();
        let full = adaptive_simpson(&f, 0.0, 2.0 * PI, 1e-11).unwrap();
        assert_close(2.0 * half, full, 1e-9, "period-π symmetry");
    }

    #[test]
    fn odd_parity_halving() {
        // For an odd pair the reported area is half the naive square integral.
        let p = TorusParams::new(3, 1).unwrap();
        let f = |x: f64| (2.0 * PI / 2.0f64.sqrt()) * p.rho(x) / p.sigma(x);
        let naive = adaptive_simpson(&f, 0.0, 2.0 * PI, 1e-11).unwrap();
        assert_close(area(p), naive / 2.0, 1e-9, "double-cover halving");
    }

    #[test]
    fn functional_reports() {
        let r11 = functional_value(TorusParams::new(1, 1).unwrap()).unwrap();
        assert_eq!(r11.index, 1);
        assert_close(
            r11.lambda_closed,
            8.0 * PI * PI / 3.0f64.sqrt(),
            1e-9,
            "lambda_1(1,1)",
        );
        // The exceptional maximal member: margin is negative.
        assert!(r11.nonmax_margin < 0.0);

        let r21 = functional_value(TorusParams::new(2, 1).unwrap()).unwrap();
        assert_eq!(r21.index, 9);
        assert_close(r21.lambda_closed, 138.0466375886, 1e-8, "lambda_9(2,1)");
        assert!(r21.rel_err < 1e-8);
        assert!(r21.nonmax_margin > 0.0);

        assert_eq!(functional_index(TorusParams::new(3, 1).unwrap()), 5);
    }
}
