//! Floquet-discriminant oracle: an eigenvalue check completely independent
//! of the finite-difference pencil.
//!
//! Writing the equation as the first-order system u′ = v/p, v′ = (q − λr)u,
//! the monodromy matrix M(λ) transports fundamental solutions across one
//! period and D(λ) = tr M(λ) is the discriminant. Periodic eigenvalues are
//! exactly the roots of D = 2, antiperiodic of D = −2. Integration is an
//! adaptive Dormand–Prince 5(4) pair with tight local tolerances, so the two
//! routes to a spectrum share no discretization machinery.

use super::{Bc, SLProblem};
use crate::error::{Error, Result};

const RK_TOL: f64 = 1e-12;

/// D(λ) = u₁(T) + p(T)u₂′(T) for fundamental solutions with (u, pu′) starting
/// at (1, 0) and (0, 1).
pub fn discriminant(problem: &SLProblem, lambda: f64) -> Result<f64> {
    // State [u1, v1, u2, v2] with v = p u′ packs both fundamental solutions
    // into one integration pass.
    let y = integrate(problem, lambda, [1.0, 0.0, 0.0, 1.0], problem.period())?;
    Ok(y[0] + y[3])
}

/// Refine an eigenvalue of the problem's flavor near `guess` by root-finding
/// the discriminant equation D(λ) = ±2. Fails with `SolverFailure` when no
/// sign change brackets the guess — the usual cause is an exactly double
/// eigenvalue, where D grazes ±2 without crossing.
///
/// Conditioning caveat: at a nearly closed spectral gap the crossing is
/// nearly flat (D′ ∝ gap width), so integration noise of ~1e−11 can smear
/// the root by several 1e−8·|λ|. For even coefficients
/// [`parity_eigenvalue_near`] avoids that amplification entirely.
pub fn eigenvalue_near(problem: &SLProblem, guess: f64) -> Result<f64> {
    let target = problem.bc().discriminant_target();
    let g = |lambda: f64| -> Result<f64> { Ok(discriminant(problem, lambda)? - target) };
    find_root_near(g, guess)?.ok_or_else(|| {
        Error::SolverFailure(format!(
            "no discriminant sign change near λ = {guess}; eigenvalue may be double"
        ))
    })
}

/// Half-period parity shooting: a well-conditioned eigenvalue oracle for
/// problems whose coefficients are even about x = 0.
///
/// For even p, q, r every eigenfunction of either flavor has definite parity
/// and the spectrum splits into two shooting classes with conditions at T/2:
///
/// * periodic: even ⇒ (pu′)(T/2) = 0 from (u, pu′)(0) = (1, 0); odd ⇒
///   u(T/2) = 0 from (u, pu′)(0) = (0, 1).
/// * antiperiodic: even ⇒ u(T/2) = 0 from (1, 0); odd ⇒ (pu′)(T/2) = 0
///   from (0, 1).
///
/// Each condition is a scalar function of λ with simple, transversal roots
/// (they are eigenvalues of regular half-interval problems with separated
/// boundary conditions), so the root stays sharp even where the full-period
/// discriminant grazes ±2 at a nearly closed gap. Returns the root of either
/// class nearest to `guess`.
pub fn parity_eigenvalue_near(problem: &SLProblem, guess: f64) -> Result<f64> {
    ensure_even_coefficients(problem)?;
    let half = 0.5 * problem.period();
    // One integration yields both classes: [u1, v1] evolves (1, 0) and
    // [u2, v2] evolves (0, 1).
    let shoot = |lambda: f64| -> Result<[f64; 4]> {
        integrate(problem, lambda, [1.0, 0.0, 0.0, 1.0], half)
    };
    let (even_slot, odd_slot) = match problem.bc() {
        Bc::Periodic => (1usize, 2usize),     // v1(T/2), u2(T/2)
        Bc::Antiperiodic => (0usize, 3usize), // u1(T/2), v2(T/2)
    };
    let mut best: Option<f64> = None;
    for slot in [even_slot, odd_slot] {
        let g = |lambda: f64| -> Result<f64> { Ok(shoot(lambda)?[slot]) };
        if let Some(root) = find_root_near(g, guess)? {
            let better = match best {
                Some(b) => (root - guess).abs() < (b - guess).abs(),
                None => true,
            };
            if better {
                best = Some(root);
            }
        }
    }
    best.ok_or_else(|| {
        Error::SolverFailure(format!(
            "neither parity shooting class brackets a root near λ = {guess}"
        ))
    })
}

fn ensure_even_coefficients(problem: &SLProblem) -> Result<()> {
    let t = problem.period();
    for j in 1..16 {
        let x = t * j as f64 / 33.0;
        for (f, name) in [
            (problem.p_at(x) - problem.p_at(t - x), "p"),
            (problem.q_at(x) - problem.q_at(t - x), "q"),
            (problem.r_at(x) - problem.r_at(t - x), "r"),
        ] {
            if f.abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "parity shooting needs coefficients even about x = 0; \
                     {name} deviates by {:.3e} at x = {x:.6}",
                    f.abs()
                )));
            }
        }
    }
    Ok(())
}

/// Bracket-expansion + safeguarded-secant root finder shared by the
/// discriminant and parity oracles. `Ok(None)` means no sign change was
/// found within the expansion budget; evaluation failures propagate as
/// errors so an integration breakdown is never mistaken for a missing root.
fn find_root_near<G>(mut g: G, guess: f64) -> Result<Option<f64>>
where
    G: FnMut(f64) -> Result<f64>,
{
    let scale = 1.0 + guess.abs();
    let g0 = g(guess)?;
    if g0 == 0.0 {
        return Ok(Some(guess));
    }
    let mut width = 1e-6 * scale;
    for _ in 0..12 {
        let (lo, hi) = (guess - width, guess + width);
        let (glo, ghi) = (g(lo)?, g(hi)?);
        let bracket = if glo * g0 < 0.0 {
            Some((lo, guess, glo, g0))
        } else if g0 * ghi < 0.0 {
            Some((guess, hi, g0, ghi))
        } else if glo * ghi < 0.0 {
            Some((lo, hi, glo, ghi))
        } else {
            None
        };
        if let Some((mut a, mut b, mut ga, mut gb)) = bracket {
            // Illinois-weighted false position: when an endpoint survives two
            // rounds its stored value is halved, which prevents the one-sided
            // stagnation plain secant/regula falsi suffer on convex roots and
            // guarantees the bracket itself shrinks.
            let mut kept = 0i8; // −1: a retained last round, +1: b retained
            for _ in 0..200 {
                if (b - a).abs() < 1e-11 * scale {
                    return Ok(Some(0.5 * (a + b)));
                }
                let falsi = (a * gb - b * ga) / (gb - ga);
                let x = if falsi.is_finite() && falsi > a && falsi < b {
                    falsi
                } else {
                    0.5 * (a + b)
                };
                let gx = g(x)?;
                if gx == 0.0 {
                    return Ok(Some(x));
                }
                if ga * gx < 0.0 {
                    b = x;
                    gb = gx;
                    if kept == -1 {
                        ga *= 0.5;
                    }
                    kept = -1;
                } else {
                    a = x;
                    ga = gx;
                    if kept == 1 {
                        gb *= 0.5;
                    }
                    kept = 1;
                }
            }
            return Ok(Some(0.5 * (a + b)));
        }
        width *= 4.0;
    }
    Ok(None)
}

/// Dormand–Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// b⁽⁵⁾ − b⁽⁴⁾, applied to the stage slopes to estimate the local error.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

fn integrate(problem: &SLProblem, lambda: f64, y0: [f64; 4], t_end: f64) -> Result<[f64; 4]> {
    let f = |x: f64, y: &[f64; 4]| -> [f64; 4] {
        let ip = 1.0 / problem.p_at(x);
        let w = problem.q_at(x) - lambda * problem.r_at(x);
        [y[1] * ip, w * y[0], y[3] * ip, w * y[2]]
    };
    let mut x = 0.0;
    let mut y = y0;
    let mut h = t_end / 100.0;
    let h_min = t_end * 1e-14;
    let mut k = [[0.0f64; 4]; 7];
    k[0] = f(x, &y);
    let max_steps = 1_000_000;
    for _ in 0..max_steps {
        if x >= t_end {
            return Ok(y);
        }
        h = h.min(t_end - x);
        for s in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s + 1) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..4 {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s + 1] = f(x + C[s] * h, &ys);
        }
        // Fifth-order solution is stage 6's state (FSAL pair).
        let mut y5 = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[5][j];
            if a != 0.0 {
                for i in 0..4 {
                    y5[i] += h * a * kj[i];
                }
            }
        }
        let mut err = 0.0f64;
        for i in 0..4 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            let sc = RK_TOL + RK_TOL * y[i].abs().max(y5[i].abs());
            err += (h * e / sc) * (h * e / sc);
        }
        err = (err / 4.0).sqrt();
        if err <= 1.0 {
            x += h;
            y = y5;
            k[0] = k[6]; // first-same-as-last
        } else if h <= h_min {
            return Err(Error::IntegrationFailure {
                at: x,
                reason: format!("step size underflow with local error {err:.3e}"),
            });
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * factor).max(h_min);
    }
    Err(Error::IntegrationFailure {
        at: x,
        reason: "step budget exhausted".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sturm::{coef, coef_const, Bc};
    use std::f64::consts::TAU;

    fn assert_close(a: f64, b: f64, tol: f64, msg: &str) {
        assert!(
            (a - b).abs() <= tol,
            "{msg}: expected {b}, got {a}, diff {:.3e}",
            (a - b).abs()
        );
    }

    fn circle(bc: Bc) -> SLProblem {
        SLProblem::new(coef_const(1.0), coef_const(0.0), coef_const(1.0), TAU, bc, 64).unwrap()
    }

    #[test]
    fn flat_discriminant_hits_both_targets() {
        // −h″ = λh on [0, 2π]: D(λ) = 2cos(2π√λ), so D(1) = 2 and D(1/4) = −2.
        let d1 = discriminant(&circle(Bc::Periodic), 1.0).unwrap();
        assert_close(d1, 2.0, 1e-9, "D(1)");
        let dq = discriminant(&circle(Bc::Antiperiodic), 0.25).unwrap();
        assert_close(dq, -2.0, 1e-9, "D(1/4)");
        // Generic λ for the same closed form.
        let d = discriminant(&circle(Bc::Periodic), 0.37).unwrap();
        assert_close(d, 2.0 * (TAU * 0.37f64.sqrt()).cos(), 1e-9, "D(0.37)");
    }

    #[test]
    fn refines_a_simple_eigenvalue() {
        // Mathieu-style problem with a broken double eigenvalue: the root
        // finder must land on the simple periodic eigenvalue near 1.
        let problem = SLProblem::new(
            coef_const(1.0),
            coef(|x: f64| 0.3 * (2.0 * x).cos()),
            coef_const(1.0),
            TAU,
            Bc::Periodic,
            64,
        )
        .unwrap();
        let spec = crate::sturm::refine(&problem, 3, 1e-4).unwrap();
        let fd = spec.eigenvalues[1];
        let exact = eigenvalue_near(&problem, fd).unwrap();
        assert_close(fd, exact, 1e-7, "FD vs Floquet for a perturbed harmonic");
        // The oracle's own consistency: the discriminant at the root is +2.
        let d = discriminant(&problem, exact).unwrap();
        assert_close(d, 2.0, 1e-8, "discriminant at refined root");
    }

    #[test]
    fn double_roots_need_the_residual_check_instead() {
        // On the flat circle λ = 1 is a double periodic eigenvalue: D − 2
        // grazes zero there without a sign change, so certification goes
        // through the discriminant residual rather than root refinement.
        let d = discriminant(&circle(Bc::Periodic), 1.0).unwrap();
        assert!((d - 2.0).abs() < 1e-9);
        // Root refinement from a spectral gap walks to the nearest simple
        // crossing, which for this operator is the ground state at λ = 0.
        let walked = eigenvalue_near(&circle(Bc::Periodic), 0.3).unwrap();
        assert_close(walked, 0.0, 1e-9, "nearest simple crossing");
    }

    #[test]
    fn integrator_reports_wronskian_preservation() {
        // det M = 1 for any λ: the system is Hamiltonian and the integrator
        // should preserve the Wronskian to near roundoff.
        let problem = SLProblem::new(
            coef(|x: f64| 1.0 + 0.5 * (2.0 * x).cos()),
            coef(|x: f64| (2.0 * x).sin()),
            coef_const(1.0),
            TAU,
            Bc::Periodic,
            64,
        )
        .unwrap();
        let y = integrate(&problem, 2.31, [1.0, 0.0, 0.0, 1.0], problem.period()).unwrap();
        let det = y[0] * y[3] - y[1] * y[2];
        assert_close(det, 1.0, 1e-10, "Wronskian");
    }

    #[test]
    fn parity_shooting_recovers_circle_eigenvalues() {
        let circle = |bc| {
            SLProblem::new(coef_const(1.0), coef_const(0.0), coef_const(1.0), TAU, bc, 64).unwrap()
        };
        let per = circle(Bc::Periodic);
        // λ = 1 is a double eigenvalue: each parity class holds one member,
        // and both conditions have simple roots there.
        assert_close(
            parity_eigenvalue_near(&per, 0.93).unwrap(),
            1.0,
            1e-9,
            "periodic pair",
        );
        assert_close(
            parity_eigenvalue_near(&per, 0.05).unwrap(),
            0.0,
            1e-9,
            "periodic ground",
        );
        let anti = circle(Bc::Antiperiodic);
        assert_close(
            parity_eigenvalue_near(&anti, 0.21).unwrap(),
            0.25,
            1e-9,
            "antiperiodic pair",
        );
    }

    #[test]
    fn parity_shooting_requires_even_coefficients() {
        let skewed = SLProblem::new(
            coef(|x: f64| 1.3 + 0.3 * x.sin()),
            coef_const(0.0),
            coef_const(1.0),
            TAU,
            Bc::Periodic,
            64,
        )
        .unwrap();
        assert!(matches!(
            parity_eigenvalue_near(&skewed, 1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn parity_shooting_stays_sharp_at_a_nearly_closed_gap() {
        // Even Hill problem with a tiny high-order gap: the discriminant
        // grazes +2 almost tangentially near the 2cos(6x)-driven pair, while
        // the half-period conditions keep transversal roots.
        let problem = SLProblem::new(
            coef_const(1.0),
            coef(|x: f64| 0.3 * (2.0 * x).cos()),
            coef_const(1.0),
            TAU,
            Bc::Periodic,
            64,
        )
        .unwrap();
        // Third periodic pair sits near λ = 9 + O(q²) corrections.
        let a = parity_eigenvalue_near(&problem, 9.01).unwrap();
        let d = discriminant(&problem, a).unwrap();
        assert_close(d, 2.0, 1e-8, "discriminant at parity root");
    }
}
