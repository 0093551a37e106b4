//! Family-wide acceptance sweep: one test per advertised guarantee, each at
//! the tolerance the library promises. The suite output is the scoreboard —
//! one line per property over the whole coprime family m ⩾ n ⩾ 1, m+n ⩽ 12.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torus_spectra::sturm::floquet;
use torus_spectra::{
    agm_ke, aux_lambda_check, build_problem, coordinate_eigen_check, count_below_two,
    full_spectrum, functional_value, h3_certificate, h3_value, immerse, lame_spectrum,
    legendre_limit_check, modulus, parity_formula, reduced_inequality_minimum, refine,
    symmetry_check, to_lame, verify_inequality_chain, verify_nonmaximality, Bc, CheckStatus,
    TorusParams,
};

/// Every coprime pair with m ⩾ n ⩾ 1 and m + n ⩽ 12 (23 pairs).
fn family() -> Vec<TorusParams> {
    let mut pairs = Vec::new();
    for n in 1u32..=6 {
        for m in n..=(12 - n) {
            if gcd(m, n) == 1 {
                pairs.push(TorusParams::new(m, n).unwrap());
            }
        }
    }
    assert_eq!(pairs.len(), 23);
    pairs
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn c1_eigenvalue_count_matches_parity_formula_for_all_pairs() {
    for params in family() {
        let count = count_below_two(params, 1e-6).unwrap();
        let expected = parity_formula(params);
        assert_eq!(
            count.n_two,
            expected,
            "({}, {}): counted N(2) = {}, formula {}",
            params.m(),
            params.n(),
            count.n_two,
            expected
        );
    }
}

#[test]
fn c2_coordinate_eigenvalues_sit_at_two_with_matching_profiles() {
    for params in family() {
        let checks = coordinate_eigen_check(params, 1024).unwrap();
        assert_eq!(checks.len(), 3);
        for check in &checks {
            assert!(
                (check.lambda - 2.0).abs() <= 1e-7,
                "({}, {}) {:?} at l = {}: λ = {} misses 2 by {:.3e}",
                params.m(),
                params.n(),
                check.profile,
                check.l,
                check.lambda,
                (check.lambda - 2.0).abs()
            );
            assert!(
                check.correlation > 1.0 - 1e-6,
                "({}, {}) {:?}: correlation {} too low",
                params.m(),
                params.n(),
                check.profile,
                check.correlation
            );
        }
    }
}

#[test]
fn c3_closed_form_functionals_match_quadrature_and_spot_values() {
    for params in family() {
        let report = functional_value(params).unwrap();
        assert!(
            report.rel_err < 1e-8,
            "({}, {}): closed form vs quadrature rel err {:.3e}",
            params.m(),
            params.n(),
            report.rel_err
        );
    }
    let flat = functional_value(TorusParams::new(1, 1).unwrap()).unwrap();
    let expect_flat = 8.0 * PI * PI / 3.0f64.sqrt();
    assert!(
        ((flat.lambda_closed - expect_flat) / expect_flat).abs() < 1e-9,
        "Λ₁(1,1) = {} vs 8π²/√3 = {}",
        flat.lambda_closed,
        expect_flat
    );
    let bench = functional_value(TorusParams::new(2, 1).unwrap()).unwrap();
    assert_eq!(bench.index, 9);
    assert!(
        (bench.lambda_closed - 138.05).abs() < 0.01,
        "Λ₉(2,1) = {}",
        bench.lambda_closed
    );
}

#[test]
fn c4_nonmaximality_margins_and_the_inequality_chain() {
    for params in family() {
        if params.m() == 1 && params.n() == 1 {
            continue;
        }
        let entries = verify_nonmaximality(params);
        assert_eq!(entries[0].status, CheckStatus::Pass, "{:?}", params);
        assert!(
            entries[0].margin > 0.0,
            "({}, {}): margin {}",
            params.m(),
            params.n(),
            entries[0].margin
        );
    }

    let chain = verify_inequality_chain(40).unwrap();
    let reduced: Vec<_> = chain
        .iter()
        .filter(|e| e.claim.starts_with("reduced_inequality_m_"))
        .collect();
    let exceptional: Vec<_> = chain
        .iter()
        .filter(|e| e.claim.starts_with("exceptional_pair_"))
        .collect();
    assert_eq!(reduced.len(), 34); // m = 7..=40
    assert_eq!(exceptional.len(), 8);
    for entry in &chain {
        assert_eq!(entry.status, CheckStatus::Pass, "{}", entry.claim);
    }

    // Tightness sentinel: the same minimum must fail the m = 6 bound.
    let (_, f_min) = reduced_inequality_minimum();
    assert!((6.0 / 7.0..6.0 / 6.0).contains(&f_min));
}

#[test]
fn c5_lame_gap_certificate_across_the_modulus_range() {
    assert!(
        (h3_value(0.0).unwrap() - 4.0).abs() <= 1e-8,
        "fourth level at modulus zero"
    );

    let grid: Vec<f64> = (1..=19).map(|i| f64::from(i) * 0.05).collect();
    let report = h3_certificate(&grid).unwrap();
    assert_eq!(report.entries.len(), 19);
    assert!(
        report.min_margin > 0.0,
        "worst gap margin {}",
        report.min_margin
    );
    for entry in &report.entries {
        assert!(entry.h3 > 2.0, "h3({}) = {}", entry.k, entry.h3);
    }

    // The auxiliary ground level backs the same gap away from h = 2.
    let aux = aux_lambda_check(&grid).unwrap();
    assert!(aux.min_margin > 0.0, "auxiliary margin {}", aux.min_margin);

    // Parameter map at the torus level 2: the exact eigenvalue triple.
    for (m, n) in [(2u32, 1u32), (3, 2), (4, 1)] {
        let params = TorusParams::new(m, n).unwrap();
        let k2 = modulus(params).powi(2);
        for (l, expect) in [
            (params.m() + params.n(), k2),
            (params.m(), 1.0),
            (params.n(), 1.0 + k2),
        ] {
            let lame = to_lame(params, l, 2.0).unwrap();
            assert!(
                (lame.h - expect).abs() <= 1e-8,
                "({m}, {n}) l = {l}: h = {} vs {}",
                lame.h,
                expect
            );
            assert!((lame.nu - 1.0).abs() <= 1e-12);
        }
    }

    // And the computed spectra actually contain that triple, family-wide.
    for params in family() {
        let k = modulus(params);
        let levels = lame_spectrum(k, 5).unwrap();
        let k2 = k * k;
        for expect in [k2, 1.0, 1.0 + k2] {
            let best = levels
                .iter()
                .map(|level| (level.h - expect).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(
                best <= 1e-8,
                "({}, {}): spectrum misses h = {expect} by {best:.3e}",
                params.m(),
                params.n()
            );
        }
    }
}

#[test]
fn c6_legendre_limit_concentrates_on_the_first_polynomial() {
    let report = legendre_limit_check(9).unwrap();
    assert!(
        (report.min_quotient - 3.0).abs() <= 1e-10,
        "limit minimum {}",
        report.min_quotient
    );
    assert!(
        report.spurious_coeff < 1e-8,
        "spurious coefficient {:.3e}",
        report.spurious_coeff
    );
}

#[test]
fn c7_finite_difference_agrees_with_the_shooting_oracle() {
    let params = TorusParams::new(2, 1).unwrap();
    for l in 0u32..=3 {
        for bc in [Bc::Periodic, Bc::Antiperiodic] {
            let problem = build_problem(params, l, bc)
                .unwrap()
                .with_grid(2048)
                .unwrap();
            let spec = refine(&problem, 6, 1e-4).unwrap();
            for (i, &fd) in spec.eigenvalues.iter().enumerate() {
                // Half-period parity shooting: the coefficients are even in
                // x, and the generic discriminant root goes flat (D′ ∝ gap)
                // at the nearly closed gap beyond the sixth level, where
                // integration noise would smear the crossing by ~2e−7.
                let shot = floquet::parity_eigenvalue_near(&problem, fd).unwrap();
                assert!(
                    (fd - shot).abs() <= 1e-7,
                    "l = {l} {} #{i}: fd {fd} vs shooting {shot} (|Δ| = {:.3e})",
                    bc.label(),
                    (fd - shot).abs()
                );
            }
        }
    }
}

#[test]
fn c8_structural_properties_of_the_spectra() {
    let params = TorusParams::new(2, 1).unwrap();

    // Oscillation law over the doubled period: 0, 2, 2, 4, 4, …
    for l in [0u32, 1] {
        let levels = full_spectrum(params, l, 5, 1024).unwrap();
        let want = [0usize, 2, 2, 4, 4, 6, 6, 8, 8, 10];
        for (i, level) in levels.iter().take(10).enumerate() {
            assert_eq!(
                level.zeros, want[i],
                "l = {l} level {i}: {} zeros, law says {}",
                level.zeros, want[i]
            );
        }
    }

    // Strict monotonicity of every level in the angular frequency.
    let mut prev: Option<Vec<f64>> = None;
    for l in 0u32..=4 {
        let levels = full_spectrum(params, l, 4, 1024).unwrap();
        let lambdas: Vec<f64> = levels.iter().map(|t| t.lambda).collect();
        if let Some(before) = prev {
            for (k, (lo, hi)) in before.iter().zip(lambdas.iter()).enumerate() {
                assert!(
                    hi - lo > 1e-8,
                    "λ_{k} did not increase from l = {} ({lo} → {hi})",
                    l - 1
                );
            }
        }
        prev = Some(lambdas);
    }

    // Flavor interlacing: P₀ ⩽ A₀ ⩽ A₁ ⩽ P₁ ⩽ P₂ ⩽ A₂ ⩽ A₃ ⩽ P₃ ⩽ …
    let per = refine(&build_problem(params, 1, Bc::Periodic).unwrap(), 6, 1e-3).unwrap();
    let anti = refine(&build_problem(params, 1, Bc::Antiperiodic).unwrap(), 6, 1e-3).unwrap();
    let (p, a) = (&per.eigenvalues, &anti.eigenvalues);
    let slack = 1e-9;
    let chain = [
        p[0], a[0], a[1], p[1], p[2], a[2], a[3], p[3], p[4], a[4], a[5], p[5],
    ];
    for w in chain.windows(2) {
        assert!(
            w[0] <= w[1] + slack,
            "interlacing broke: {} then {}",
            w[0],
            w[1]
        );
    }

    // Elliptic inequality K − 2E/(2−k²) ⩾ 0 up to roundoff, densely and at
    // every family modulus.
    let mut moduli: Vec<f64> = (0..100).map(|i| f64::from(i) * 0.01).collect();
    moduli.extend(family().iter().map(|&p| modulus(p)));
    for k in moduli {
        let pair = agm_ke(k).unwrap();
        let gap = pair.k_first - 2.0 * pair.e_second / (2.0 - k * k);
        assert!(gap >= -1e-14, "K − 2E/(2−k²) = {gap:.3e} at k = {k}");
    }
}

#[test]
fn c9_immersion_lands_on_the_unit_sphere_with_correct_cover() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64);
    for params in family() {
        for _ in 0..10_000 {
            let x = rng.gen_range(0.0..2.0 * PI);
            let y = rng.gen_range(0.0..2.0 * PI);
            let residual = (immerse(params, x, y).norm() - 1.0).abs();
            assert!(
                residual < 1e-13,
                "({}, {}): |φ| off the sphere by {residual:.3e} at ({x}, {y})",
                params.m(),
                params.n()
            );
        }

        let report = symmetry_check(params, 10_000).unwrap();
        if params.mn_odd() {
            assert!(
                report.is_double_cover && report.max_deviation < 1e-14,
                "({}, {}): double cover broken, deviation {:.3e}",
                params.m(),
                params.n(),
                report.max_deviation
            );
        } else {
            assert!(
                !report.is_double_cover && report.max_deviation > 0.1,
                "({}, {}): even pair unexpectedly close to a double cover ({:.3e})",
                params.m(),
                params.n(),
                report.max_deviation
            );
        }
    }
}
