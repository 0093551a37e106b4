//! Laplace spectrum bookkeeping for the torus family.
//!
//! Separation of variables turns the Laplacian into one Sturm–Liouville
//! problem per angular frequency l:
//!
//! ```text
//! p = σ(x),   q = 2l²/σ(x),   r = ρ(x)/σ(x)   on [0, π],
//! ```
//!
//! whose 2π-circle spectrum is the union of the π-periodic and
//! π-antiperiodic flavors. Which flavors descend to the torus depends on
//! parity: for even mn both do, for odd mn the double cover admits only the
//! flavor (−1)^l. Eigenvalue *indexing* (λ₀, λ₁, λ₂ …) always refers to the
//! merged 2π spectrum; eigenvalue *counting* for N(2) uses the admitted
//! flavors with weight 1 for l = 0 and weight 2 for l > 0.

use crate::error::{Error, Result};
use crate::geometry::{coordinate_profiles, CoordinateProfile, ProfileKind, TorusParams};
use crate::sturm::{self, coef, Bc, SLProblem};
use std::f64::consts::PI;

/// Default coarse grid; refinement doubles it at least once.
pub const DEFAULT_GRID: usize = 1024;

/// Richardson acceptance target passed to [`sturm::refine`]. It bounds the
/// pre-extrapolation error estimate; the extrapolated eigenvalues used for
/// band decisions are then accurate to ~1e−9 near λ = 2.
const REFINE_TARGET: f64 = 1e-3;

/// Half-width of the numerical cluster around a repeated eigenvalue.
const CLUSTER_TOL: f64 = 1e-6;

/// Flavor admitted by the torus quotient at frequency l: both for even mn,
/// only (−1)^l for odd mn (where the immersion is a double cover).
pub fn admitted_flavor(params: TorusParams, l: u32) -> Option<Bc> {
    if !params.mn_odd() {
        None // both flavors descend
    } else if l % 2 == 0 {
        Some(Bc::Periodic)
    } else {
        Some(Bc::Antiperiodic)
    }
}

/// The separated problem at frequency l, regardless of admission — this is
/// the 2π-circle operator restricted to one flavor sector.
fn separated_problem(params: TorusParams, l: u32, bc: Bc, grid: usize) -> Result<SLProblem> {
    let ll = f64::from(l * l);
    SLProblem::new(
        coef(move |x| params.sigma(x)),
        coef(move |x| 2.0 * ll / params.sigma(x)),
        coef(move |x| params.rho(x) / params.sigma(x)),
        PI,
        bc,
        grid,
    )
}

/// The separated problem at frequency l for a flavor the torus admits.
/// Errors when the pair has odd mn and the flavor disagrees with (−1)^l.
pub fn build_problem(params: TorusParams, l: u32, bc: Bc) -> Result<SLProblem> {
    if let Some(required) = admitted_flavor(params, l) {
        if bc != required {
            return Err(Error::InvalidInput(format!(
                "pair {params} has a double cover: frequency {l} admits only the {} flavor",
                required.label()
            )));
        }
    }
    separated_problem(params, l, bc, DEFAULT_GRID)
}

/// One eigenvalue of the separated problem at a fixed frequency.
#[derive(Debug, Clone)]
pub struct TorusLevel {
    pub l: u32,
    pub lambda: f64,
    /// Richardson error estimate from the refinement that produced lambda.
    pub err_est: f64,
    pub flavor: Bc,
    /// True when the level sits in a spectrum merged from both flavors.
    pub merged: bool,
    /// Zeros of the eigenfunction over the full 2π circle (twice the count
    /// over one π sector).
    pub zeros: usize,
    pub eigenvector: Vec<f64>,
    pub grid_size: usize,
}

fn solve_flavor(
    params: TorusParams,
    l: u32,
    bc: Bc,
    count: usize,
    grid: usize,
    merged: bool,
) -> Result<Vec<TorusLevel>> {
    let problem = separated_problem(params, l, bc, grid)?;
    let spec = sturm::refine(&problem, count, REFINE_TARGET)?;
    Ok((0..count)
        .map(|i| TorusLevel {
            l,
            lambda: spec.eigenvalues[i],
            err_est: spec.error_estimates[i],
            flavor: bc,
            merged,
            zeros: 2 * spec.zero_counts[i],
            eigenvector: spec.eigenvectors[i].clone(),
            grid_size: spec.grid_size,
        })
        .collect())
}

/// First eigenvalues of the full 2π-circle problem at frequency l: both
/// flavors solved with `count` levels each, merged ascending. This is the
/// indexing in which the coordinate identities λ₀(m+n) = λ₁(m) = λ₂(n) = 2
/// hold for every pair.
pub fn full_spectrum(
    params: TorusParams,
    l: u32,
    count: usize,
    grid: usize,
) -> Result<Vec<TorusLevel>> {
    let mut levels = solve_flavor(params, l, Bc::Periodic, count, grid, true)?;
    levels.extend(solve_flavor(params, l, Bc::Antiperiodic, count, grid, true)?);
    levels.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(levels)
}

/// First eigenvalues of the problem the torus actually admits at frequency
/// l: the merged 2π spectrum for even mn (levels flagged merged), the single
/// flavor (−1)^l for odd mn. `count` is per flavor.
pub fn admitted_spectrum(
    params: TorusParams,
    l: u32,
    count: usize,
    grid: usize,
) -> Result<Vec<TorusLevel>> {
    match admitted_flavor(params, l) {
        Some(bc) => solve_flavor(params, l, bc, count, grid, false),
        None => full_spectrum(params, l, count, grid),
    }
}

/// Closed-form count of torus Laplace eigenvalues strictly below 2:
/// 4(m+n) − 3 for even mn, 2(m+n) − 3 for odd mn.
pub fn parity_formula(params: TorusParams) -> u32 {
    if params.mn_odd() {
        2 * (params.m() + params.n()) - 3
    } else {
        4 * (params.m() + params.n()) - 3
    }
}

/// Per-frequency tally feeding the count N(2).
#[derive(Debug, Clone)]
pub struct PerFrequency {
    pub l: u32,
    /// Eigenvalues strictly below the band [2−tol, 2+tol].
    pub below: Vec<f64>,
    /// Eigenvalues inside the band (excluded from the count).
    pub at_band: Vec<f64>,
    /// Counts with the e^{±ily} multiplicity weight applied.
    pub weighted_below: u32,
    pub weighted_at: u32,
}

/// Result of scanning the admitted spectra for eigenvalues below 2.
#[derive(Debug, Clone)]
pub struct EigenvalueCount {
    pub params: TorusParams,
    /// N(2): eigenvalues strictly below the band, multiplicity included.
    pub n_two: u32,
    /// Weighted count inside the band — the multiplicity of 2 itself.
    pub at_two: u32,
    pub per_l: Vec<PerFrequency>,
    /// The frequency whose ground level certified termination.
    pub terminated_at: u32,
}

/// Count torus eigenvalues below 2 by scanning frequencies until the merged
/// ground level exceeds 2 + tol. Merged ground levels are strictly
/// increasing in l (order statistics of two increasing families), so the
/// first such frequency certifies that no later one contributes.
pub fn count_below_two(params: TorusParams, tol: f64) -> Result<EigenvalueCount> {
    count_below_two_at(params, tol, DEFAULT_GRID)
}

/// [`count_below_two`] at an explicit coarse grid.
pub fn count_below_two_at(params: TorusParams, tol: f64, grid: usize) -> Result<EigenvalueCount> {
    if !(1e-10..=1e-4).contains(&tol) {
        return Err(Error::InvalidInput(format!(
            "band tolerance must lie in [1e-10, 1e-4], got {tol:e}"
        )));
    }
    let l_cap = 4 * (params.m() + params.n()) + 8;
    let mut per_l = Vec::new();
    let mut n_two = 0u32;
    let mut at_two = 0u32;
    for l in 0..=l_cap {
        // The admitted ground level decides inclusion; for odd mn the other
        // flavor's ground level completes the merged minimum for the
        // termination certificate.
        let levels = admitted_levels_escalating(params, l, tol, grid)?;
        let admitted_ground = levels[0].lambda;
        let merged_ground = match admitted_flavor(params, l) {
            Some(bc) => {
                if admitted_ground > 2.0 + tol {
                    let other = match bc {
                        Bc::Periodic => Bc::Antiperiodic,
                        Bc::Antiperiodic => Bc::Periodic,
                    };
                    let complement = solve_flavor(params, l, other, 2, grid, true)?;
                    admitted_ground.min(complement[0].lambda)
                } else {
                    admitted_ground // below the band — no termination anyway
                }
            }
            None => admitted_ground,
        };
        if merged_ground > 2.0 + tol {
            return Ok(EigenvalueCount {
                params,
                n_two,
                at_two,
                per_l,
                terminated_at: l,
            });
        }
        let weight = if l == 0 { 1 } else { 2 };
        let mut below = Vec::new();
        let mut at_band = Vec::new();
        for level in &levels {
            if level.lambda < 2.0 - tol {
                below.push(level.lambda);
            } else if level.lambda <= 2.0 + tol {
                at_band.push(level.lambda);
            }
        }
        let weighted_below = weight * below.len() as u32;
        let weighted_at = weight * at_band.len() as u32;
        n_two += weighted_below;
        at_two += weighted_at;
        per_l.push(PerFrequency {
            l,
            below,
            at_band,
            weighted_below,
            weighted_at,
        });
    }
    Err(Error::SolverFailure(format!(
        "frequency scan for {params} failed to terminate by l = {l_cap}"
    )))
}

/// Admitted levels at l with enough depth that the last one clears the band,
/// so no below-band eigenvalue can hide beyond the computed window.
fn admitted_levels_escalating(
    params: TorusParams,
    l: u32,
    tol: f64,
    grid: usize,
) -> Result<Vec<TorusLevel>> {
    let mut count = 6;
    loop {
        let levels = admitted_spectrum(params, l, count, grid)?;
        let last = levels.last().expect("count >= 1").lambda;
        if last > 2.0 + tol {
            return Ok(levels);
        }
        count *= 2;
        if count > 48 {
            return Err(Error::SolverFailure(format!(
                "more than 96 eigenvalues below the band at l = {l} for {params}"
            )));
        }
    }
}

/// Multiplicity of the eigenvalue 2 itself: the weighted count of admitted
/// levels inside the band.
pub fn eigenvalue_two_multiplicity(params: TorusParams, tol: f64) -> Result<u32> {
    Ok(count_below_two(params, tol)?.at_two)
}

/// One coordinate eigenfunction identity: the profile (sin x, cos x, or the
/// radial h₀) reproduced as an eigenvector at eigenvalue 2 with the stated
/// merged index.
#[derive(Debug, Clone)]
pub struct CoordinateCheck {
    pub profile: ProfileKind,
    pub l: u32,
    /// Index in the merged 2π spectrum where λ = 2 must appear.
    pub target_index: usize,
    pub lambda: f64,
    /// r-weighted correlation between the sampled profile and the eigenvalue
    /// cluster at λ: norm of the projection onto the cluster's eigenspace,
    /// so exact degeneracy (the flat member) is handled without picking a
    /// basis inside the cluster.
    pub correlation: f64,
    pub zeros: usize,
}

/// Verify λ₀(m+n) = λ₁(m) = λ₂(n) = 2 together with the eigenfunction
/// profiles that realize them.
pub fn coordinate_eigen_check(params: TorusParams, grid: usize) -> Result<Vec<CoordinateCheck>> {
    let profiles = coordinate_profiles(params);
    let targets = [1usize, 2, 0]; // sin x → λ₁(m), cos x → λ₂(n), h₀ → λ₀(m+n)
    let mut out = Vec::with_capacity(3);
    for (profile, target_index) in profiles.iter().zip(targets) {
        let l = profile.frequency;
        let levels = full_spectrum(params, l, (target_index + 4).max(4), grid)?;
        let level = &levels[target_index];
        let correlation = cluster_correlation(profile, level, &levels)?;
        out.push(CoordinateCheck {
            profile: profile.kind,
            l,
            target_index,
            lambda: level.lambda,
            correlation,
            zeros: level.zeros,
        });
    }
    Ok(out)
}

/// Norm of the r-weighted projection of the sampled profile onto the span of
/// eigenvectors whose eigenvalue ties `level`'s within the cluster width.
fn cluster_correlation(
    profile: &CoordinateProfile,
    level: &TorusLevel,
    levels: &[TorusLevel],
) -> Result<f64> {
    let n = level.grid_size;
    let params = profile.params();
    let dx = PI / n as f64;
    let samples = profile.sample(n, PI);
    // r-weighted normalization of the profile.
    let weight: Vec<f64> = (0..n)
        .map(|i| params.rho(dx * i as f64) / params.sigma(dx * i as f64))
        .collect();
    let norm = samples
        .iter()
        .zip(&weight)
        .map(|(s, w)| w * s * s * dx)
        .sum::<f64>()
        .sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidInput("degenerate profile sample".into()));
    }
    let tol = CLUSTER_TOL * (1.0 + level.lambda.abs());
    let mut projection_sq = 0.0f64;
    for other in levels {
        if other.flavor != level.flavor
            || other.grid_size != n
            || (other.lambda - level.lambda).abs() > tol
        {
            continue;
        }
        // Solver eigenvectors of one flavor are r-orthonormal, so the
        // projection norm is the root sum of squared inner products.
        let inner: f64 = samples
            .iter()
            .zip(&other.eigenvector)
            .zip(&weight)
            .map(|((s, v), w)| w * s * v * dx)
            .sum();
        projection_sq += (inner / norm).powi(2);
    }
    Ok(projection_sq.sqrt())
}
