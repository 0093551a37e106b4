//! Family-level verdict ledgers: every numerical claim about a pair (m, n)
//! — the eigenvalue count, the three coordinate identities, the multiplicity
//! at 2, the non-maximality margin, and the inequality chain behind it — run
//! as one deterministic list of pass/fail entries.
//!
//! Solver diagnostics never vanish silently: an errored check becomes a
//! failed entry whose detail carries the diagnostic, so a report always
//! lists every claim it was asked about.

use std::f64::consts::PI;

use crate::elliptic::functional_value;
use crate::error::{Error, Result};
use crate::geometry::{ProfileKind, TorusParams};
use crate::spectrum::{coordinate_eigen_check, count_below_two, parity_formula};

/// Verdict of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The claim does not apply to these parameters (recorded, not dropped).
    Skipped,
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

/// One ledger line: a claim id, its verdict, and how much room it had.
///
/// `margin` is the check's distance from its acceptance boundary in the
/// check's own units (nonnegative means pass); when a solver error prevented
/// evaluation the margin is the sentinel −1 and `detail` carries the
/// diagnostic.
#[derive(Debug, Clone)]
pub struct CheckEntry {
    pub claim: String,
    pub status: CheckStatus,
    pub margin: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckEntry {
    fn pass_if(claim: &str, ok: bool, margin: f64, tolerance: f64, detail: String) -> Self {
        CheckEntry {
            claim: claim.to_string(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            margin,
            tolerance,
            detail,
        }
    }

    fn errored(claim: &str, err: &Error) -> Self {
        CheckEntry {
            claim: claim.to_string(),
            status: CheckStatus::Fail,
            margin: -1.0,
            tolerance: 0.0,
            detail: format!("check did not evaluate: {err}"),
        }
    }
}

/// A full verdict ledger for one pair.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub params: TorusParams,
    pub checks: Vec<CheckEntry>,
    /// True iff every non-skipped check passed.
    pub overall: bool,
}

impl VerificationReport {
    fn assemble(params: TorusParams, checks: Vec<CheckEntry>) -> Self {
        let overall = checks
            .iter()
            .all(|entry| entry.status != CheckStatus::Fail);
        VerificationReport {
            params,
            checks,
            overall,
        }
    }
}

/// Checks the spectral half of the main statement for one pair:
///
/// * `n_two_parity_formula` — N(2) equals 4(m+n)−3 (even mn) or 2(m+n)−3
///   (odd mn), counted from the actual spectra;
/// * `coordinate_eigenvalue_ground_at_m_plus_n`, `…_first_at_m`,
///   `…_second_at_n` — the merged eigenvalues λ₀(m+n), λ₁(m), λ₂(n) all
///   equal 2 within `tol`;
/// * `coordinate_profile_correlation` — the three coordinate profiles are
///   reproduced by the matching discrete eigenspaces (correlation within
///   1e−6 of 1);
/// * `multiplicity_at_two` — the weighted multiplicity of the eigenvalue 2
///   is at least 6.
///
/// Requires m + n ⩽ 12 and `tol` in (0, 1). Solver errors turn into failed
/// entries; the returned list always contains all six claims.
pub fn verify_main_theorem(params: TorusParams, tol: f64) -> Result<Vec<CheckEntry>> {
    if params.m() + params.n() > 12 {
        return Err(Error::InvalidInput(format!(
            "verification is budgeted for m + n <= 12, got {} + {}",
            params.m(),
            params.n()
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    // The band half-width used to bin eigenvalues at 2 has its own domain.
    let band = tol.clamp(1e-10, 1e-4);
    let mut entries = Vec::with_capacity(6);

    match count_below_two(params, band) {
        Ok(count) => {
            let expected = parity_formula(params);
            let diff = i64::from(count.n_two) - i64::from(expected);
            entries.push(CheckEntry::pass_if(
                "n_two_parity_formula",
                diff == 0,
                -(diff.abs() as f64),
                0.0,
                format!("counted N(2) = {}, formula gives {}", count.n_two, expected),
            ));
            entries.push(CheckEntry::pass_if(
                "multiplicity_at_two",
                count.at_two >= 6,
                f64::from(count.at_two) - 6.0,
                0.0,
                format!("weighted multiplicity at 2 is {}", count.at_two),
            ));
        }
        Err(err) => {
            entries.push(CheckEntry::errored("n_two_parity_formula", &err));
            entries.push(CheckEntry::errored("multiplicity_at_two", &err));
        }
    }

    const COORD_CLAIMS: [(ProfileKind, &str); 3] = [
        (
            ProfileKind::Radial,
            "coordinate_eigenvalue_ground_at_m_plus_n",
        ),
        (ProfileKind::SinX, "coordinate_eigenvalue_first_at_m"),
        (ProfileKind::CosX, "coordinate_eigenvalue_second_at_n"),
    ];
    const CORRELATION_TOL: f64 = 1e-6;
    match coordinate_eigen_check(params, 1024) {
        Ok(checks) => {
            for (kind, claim) in COORD_CLAIMS {
                let check = checks
                    .iter()
                    .find(|c| c.profile == kind)
                    .expect("coordinate_eigen_check covers all three profiles");
                let miss = (check.lambda - 2.0).abs();
                entries.push(CheckEntry::pass_if(
                    claim,
                    miss <= tol,
                    tol - miss,
                    tol,
                    format!(
                        "merged index {} at frequency l = {} gives {:.12}",
                        check.target_index, check.l, check.lambda
                    ),
                ));
            }
            let worst = checks
                .iter()
                .map(|c| c.correlation)
                .fold(f64::INFINITY, f64::min);
            entries.push(CheckEntry::pass_if(
                "coordinate_profile_correlation",
                worst >= 1.0 - CORRELATION_TOL,
                worst - (1.0 - CORRELATION_TOL),
                CORRELATION_TOL,
                format!("worst profile correlation {worst:.12}"),
            ));
        }
        Err(err) => {
            for (_, claim) in COORD_CLAIMS {
                entries.push(CheckEntry::errored(claim, &err));
            }
            entries.push(CheckEntry::errored("coordinate_profile_correlation", &err));
        }
    }

    // Keep ledger order stable regardless of the evaluation path above.
    let order = [
        "n_two_parity_formula",
        "coordinate_eigenvalue_ground_at_m_plus_n",
        "coordinate_eigenvalue_first_at_m",
        "coordinate_eigenvalue_second_at_n",
        "coordinate_profile_correlation",
        "multiplicity_at_two",
    ];
    entries.sort_by_key(|entry| {
        order
            .iter()
            .position(|id| *id == entry.claim)
            .unwrap_or(order.len())
    });
    Ok(entries)
}

/// The non-maximality margin 8π·index − Λ_index for one pair, evaluated
/// through the closed elliptic form.
///
/// The flat pair (1, 1) is the known maximizer of its functional, so it gets
/// a skipped entry rather than a vacuous failure; every other pair must come
/// out with a strictly positive margin.
pub fn verify_nonmaximality(params: TorusParams) -> Vec<CheckEntry> {
    const CLAIM: &str = "nonmaximality_margin";
    if params.m() == 1 && params.n() == 1 {
        return vec![CheckEntry {
            claim: CLAIM.to_string(),
            status: CheckStatus::Skipped,
            margin: 0.0,
            tolerance: 0.0,
            detail: "the flat pair maximizes its functional; margin test does not apply".into(),
        }];
    }
    match functional_value(params) {
        Ok(report) => vec![CheckEntry::pass_if(
            CLAIM,
            report.nonmax_margin > 0.0,
            report.nonmax_margin,
            0.0,
            format!(
                "8π·{} = {:.6} vs Λ = {:.6}",
                report.index,
                8.0 * PI * f64::from(report.index),
                report.lambda_closed
            ),
        )],
        Err(err) => vec![CheckEntry::errored(CLAIM, &err)],
    }
}

/// Minimum of the reduced inequality profile f(x) = 4(1+x) − π√(1+2x) over
/// x ∈ [0, 1]: a 10⁴-point grid scan followed by ternary refinement of the
/// best bracket. Returns (argmin, min). f is increasing on [0, 1]
/// (f′(0) = 4 − π > 0), so the minimum sits at x = 0 with value 4 − π.
pub fn reduced_inequality_minimum() -> (f64, f64) {
    let f = |x: f64| 4.0 * (1.0 + x) - PI * (1.0 + 2.0 * x).sqrt();
    let grid = 10_000usize;
    let mut best = (0.0, f(0.0));
    for i in 1..=grid {
        let x = i as f64 / grid as f64;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    // Ternary-refine inside the bracketing neighbours of the grid winner.
    let h = 1.0 / grid as f64;
    let (mut lo, mut hi) = ((best.0 - h).max(0.0), (best.0 + h).min(1.0));
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// The eight pairs whose non-maximality needs a direct elliptic evaluation
/// because the reduced inequality only covers m ⩾ 7.
pub const EXCEPTIONAL_PAIRS: [(u32, u32); 8] = [
    (3, 1),
    (5, 1),
    (5, 3),
    (7, 1),
    (7, 3),
    (7, 5),
    (2, 1),
    (3, 2),
];

/// The inequality chain that removes the m-dependence from non-maximality:
///
/// * `reduced_inequality_m_{m}` for each m ∈ [7, m_max] — the grid-refined
///   minimum of f(x) = 4(1+x) − π√(1+2x) is at least 6/m. The m = 7 margin
///   is genuinely tight (≈1.3e−3), and 6/6 = 1 exceeds the minimum, so the
///   reduced route cannot absorb m = 6;
/// * `exceptional_pair_{m}_{n}` for the eight small pairs the reduced route
///   misses — the parent inequality 8π·index > Λ_index checked directly
///   through AGM elliptic values.
///
/// Requires m_max ⩽ 40 (the family statement only needs it up to the range
/// where 6/m is comfortably below 4 − π).
pub fn verify_inequality_chain(m_max: u32) -> Result<Vec<CheckEntry>> {
    if m_max > 40 {
        return Err(Error::InvalidInput(format!(
            "inequality chain is budgeted for m_max <= 40, got {m_max}"
        )));
    }
    let (x_min, f_min) = reduced_inequality_minimum();
    let mut entries = Vec::new();
    for m in 7..=m_max {
        let bound = 6.0 / f64::from(m);
        entries.push(CheckEntry::pass_if(
            &format!("reduced_inequality_m_{m}"),
            f_min >= bound,
            f_min - bound,
            0.0,
            format!("min f = {f_min:.12} at x = {x_min:.6}, bound 6/{m} = {bound:.12}"),
        ));
    }
    for (m, n) in EXCEPTIONAL_PAIRS {
        let claim = format!("exceptional_pair_{m}_{n}");
        let params = TorusParams::new(m, n)?;
        match functional_value(params) {
            Ok(report) => entries.push(CheckEntry::pass_if(
                &claim,
                report.nonmax_margin > 0.0,
                report.nonmax_margin,
                0.0,
                format!(
                    "8π·{} − Λ = {:.6}",
                    report.index, report.nonmax_margin
                ),
            )),
            Err(err) => entries.push(CheckEntry::errored(&claim, &err)),
        }
    }
    Ok(entries)
}

/// The complete per-pair ledger: main-statement checks plus the
/// non-maximality margin, folded into one report.
pub fn full_report(params: TorusParams, tol: f64) -> Result<VerificationReport> {
    let mut checks = verify_main_theorem(params, tol)?;
    checks.extend(verify_nonmaximality(params));
    Ok(VerificationReport::assemble(params, checks))
}
