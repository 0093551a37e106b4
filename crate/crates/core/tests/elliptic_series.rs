//! Maclaurin-series oracle for the complete elliptic integrals. The series
//! shares nothing with the AGM iteration — different algorithm, different
//! rounding profile — so agreement to near machine precision pins both.
//!
//!   K(k) = (π/2) Σ_{n⩾0} c_n k^{2n},          c_n = ((2n−1)!!/(2n)!!)²
//!   E(k) = (π/2) [1 − Σ_{n⩾1} c_n k^{2n}/(2n−1)]
//!
//! with the term recurrence c_{n+1} = c_n ((2n+1)/(2n+2))². At k = 0.95 the
//! ratio k² ≈ 0.9 needs a few hundred terms; Kahan compensation keeps the
//! long sum honest at the 1e−16 level.

use torus_spectra::{agm_ke, modulus, TorusParams};

fn assert_close(a: f64, b: f64, tol: f64, msg: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{msg}: expected {b}, got {a}, diff {:.3e}",
        (a - b).abs()
    );
}

/// Compensated (Kahan) running sum.
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn new() -> Self {
        Kahan {
            sum: 0.0,
            carry: 0.0,
        }
    }

    fn add(&mut self, term: f64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// (K, E) by direct series summation, valid for 0 ⩽ k < 1 with enough terms.
fn series_ke(k: f64) -> (f64, f64) {
    let k2 = k * k;
    let mut c = 1.0; // c_n k^{2n}, starting at n = 0
    let mut ksum = Kahan::new();
    let mut esum = Kahan::new();
    ksum.add(1.0);
    for n in 0..600u32 {
        let nf = f64::from(n);
        c *= ((2.0 * nf + 1.0) / (2.0 * nf + 2.0)).powi(2) * k2;
        ksum.add(c);
        esum.add(c / (2.0 * nf + 1.0));
        if c < 1e-19 {
            break;
        }
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    (half_pi * ksum.sum, half_pi * (1.0 - esum.sum))
}

#[test]
fn agm_matches_the_series_across_the_modulus_range() {
    let mut k = 0.0;
    while k < 0.951 {
        let pair = agm_ke(k).unwrap();
        let (sk, se) = series_ke(k);
        assert_close(pair.k_first, sk, 1e-14, &format!("K({k:.2})"));
        assert_close(pair.e_second, se, 1e-14, &format!("E({k:.2})"));
        k += 0.05;
    }
}

#[test]
fn agm_matches_the_series_at_the_family_moduli() {
    // The moduli the torus family actually uses, k² = (m²−n²)/(m²+2mn).
    for (m, n) in [(2u32, 1u32), (3, 1), (3, 2), (11, 1), (7, 5)] {
        let k = modulus(TorusParams::new(m, n).unwrap());
        assert!(k < 1.0);
        let pair = agm_ke(k).unwrap();
        let (sk, se) = series_ke(k);
        assert_close(pair.k_first, sk, 1e-14, &format!("K at ({m},{n})"));
        assert_close(pair.e_second, se, 1e-14, &format!("E at ({m},{n})"));
    }
}

#[test]
fn frozen_reference_values() {
    // Spot anchors so both routes cannot drift in tandem.
    let half = agm_ke(0.5).unwrap();
    assert_close(half.k_first, 1.685750354812596, 1e-15, "K(1/2)");
    assert_close(half.e_second, 1.4674622093394272, 1e-15, "E(1/2)");

    let k21 = modulus(TorusParams::new(2, 1).unwrap());
    assert_close(k21 * k21, 3.0 / 8.0, 1e-16, "k²(2,1) = 3/8");
    let pair = agm_ke(k21).unwrap();
    assert_close(pair.k_first, 1.7605688117719545, 1e-15, "K at (2,1)");
    assert_close(pair.e_second, 1.4111237670965147, 1e-15, "E at (2,1)");
}
