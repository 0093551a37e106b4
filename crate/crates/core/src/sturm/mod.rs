//! Periodic and antiperiodic Sturm–Liouville eigenproblems on [0, T]:
//!
//! ```text
//! −(p(x) h′(x))′ + q(x) h(x) = λ r(x) h(x),   h(x+T) = ±h(x),
//! ```
//!
//! with p, r > 0 and all coefficients T-periodic. Discretization is the
//! conservative second-order flux stencil — it preserves self-adjointness
//! exactly at the discrete level, so the pencil is symmetric and the computed
//! spectra are real and sorted by construction. Eigenvalues are refined by
//! Richardson extrapolation across grid doubling, and an independent
//! Floquet-discriminant shooting oracle lives in [`floquet`].

pub mod floquet;
mod solver;

use crate::error::{Error, Result};
use std::sync::Arc;

/// Shared coefficient function of x.
pub type CoefFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Boundary-condition flavor: h(x+T) = +h(x) or −h(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bc {
    Periodic,
    Antiperiodic,
}

impl Bc {
    /// Sign carried by the wraparound coupling of the stencil.
    pub fn wrap_sign(&self) -> f64 {
        match self {
            Bc::Periodic => 1.0,
            Bc::Antiperiodic => -1.0,
        }
    }

    /// Value of the Floquet discriminant exactly at eigenvalues of this flavor.
    pub fn discriminant_target(&self) -> f64 {
        match self {
            Bc::Periodic => 2.0,
            Bc::Antiperiodic => -2.0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Bc::Periodic => "periodic",
            Bc::Antiperiodic => "antiperiodic",
        }
    }
}

/// A self-adjoint eigenproblem −(p h′)′ + q h = λ r h on [0, T] with a
/// periodicity flavor and a grid resolution.
#[derive(Clone)]
pub struct SLProblem {
    p: CoefFn,
    q: CoefFn,
    r: CoefFn,
    period: f64,
    bc: Bc,
    grid_size: usize,
}

impl SLProblem {
    /// Validates positivity of p and r (node and midpoint samples) and
    /// T-periodicity of all three coefficients (|f(0) − f(T)| < 1e−13).
    pub fn new(
        p: CoefFn,
        q: CoefFn,
        r: CoefFn,
        period: f64,
        bc: Bc,
        grid_size: usize,
    ) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidInput(format!(
                "period must be a positive real, got {period}"
            )));
        }
        check_grid(grid_size)?;
        for (f, name) in [(&p, "p"), (&q, "q"), (&r, "r")] {
            let gap = (f(0.0) - f(period)).abs();
            if !(gap < 1e-13) {
                return Err(Error::InvalidInput(format!(
                    "coefficient {name} is not {period}-periodic: |f(0) - f(T)| = {gap:.3e}"
                )));
            }
        }
        let dx = period / grid_size as f64;
        for i in 0..2 * grid_size {
            let x = 0.5 * dx * i as f64; // nodes and midpoints
            for (f, name) in [(&p, "p"), (&r, "r")] {
                let v = f(x);
                if !(v > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "coefficient {name} must be positive, got {v} at x = {x:.6}"
                    )));
                }
            }
        }
        Ok(Self {
            p,
            q,
            r,
            period,
            bc,
            grid_size,
        })
    }

    pub fn bc(&self) -> Bc {
        self.bc
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Same problem at a different resolution.
    pub fn with_grid(&self, grid_size: usize) -> Result<Self> {
        check_grid(grid_size)?;
        let mut out = self.clone();
        out.grid_size = grid_size;
        Ok(out)
    }

    /// Same problem with the other periodicity flavor.
    pub fn with_bc(&self, bc: Bc) -> Self {
        let mut out = self.clone();
        out.bc = bc;
        out
    }

    pub fn p_at(&self, x: f64) -> f64 {
        (self.p)(x)
    }

    pub fn q_at(&self, x: f64) -> f64 {
        (self.q)(x)
    }

    pub fn r_at(&self, x: f64) -> f64 {
        (self.r)(x)
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n < 32 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "grid size must be even and at least 32, got {n}"
        )));
    }
    Ok(())
}

/// Symmetric matrix pencil (A, B) of the discretized problem. A is cyclic
/// tridiagonal, stored as a diagonal plus one off-diagonal band where
/// `a_off[i]` couples nodes i and (i+1) mod N; the wraparound entry
/// `a_off[N−1]` already carries the boundary sign. B is the positive
/// diagonal of weight samples.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub a_diag: Vec<f64>,
    pub a_off: Vec<f64>,
    pub b_diag: Vec<f64>,
}

impl Pencil {
    pub fn len(&self) -> usize {
        self.a_diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_diag.is_empty()
    }

    /// y = A x (cyclic tridiagonal multiply).
    pub fn apply_a(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let up = self.a_off[i] * x[(i + 1) % n];
            let dn = self.a_off[(i + n - 1) % n] * x[(i + n - 1) % n];
            y[i] = self.a_diag[i] * x[i] + up + dn;
        }
    }
}

/// Discretize with the conservative flux stencil
/// [p_{i+1/2}(h_{i+1}−h_i) − p_{i−1/2}(h_i−h_{i−1})] / Δ² plus diagonal q;
/// wraparound coupling carries +1 (periodic) or −1 (antiperiodic).
pub fn assemble(problem: &SLProblem) -> Result<Pencil> {
    let n = problem.grid_size;
    let dx = problem.period / n as f64;
    let inv2 = 1.0 / (dx * dx);
    let mut p_mid = Vec::with_capacity(n); // p_mid[i] = p(x_i + Δ/2)
    for i in 0..n {
        let v = problem.p_at(dx * (i as f64 + 0.5));
        if !(v > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sampled p is not positive at midpoint {i}: {v}"
            )));
        }
        p_mid.push(v);
    }
    let mut a_diag = Vec::with_capacity(n);
    let mut a_off = Vec::with_capacity(n);
    let mut b_diag = Vec::with_capacity(n);
    for i in 0..n {
        let x = dx * i as f64;
        let pm = p_mid[(i + n - 1) % n];
        let pp = p_mid[i];
        a_diag.push((pm + pp) * inv2 + problem.q_at(x));
        let sign = if i == n - 1 {
            problem.bc.wrap_sign()
        } else {
            1.0
        };
        a_off.push(-pp * inv2 * sign);
        let r = problem.r_at(x);
        if !(r > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sampled r is not positive at node {i}: {r}"
            )));
        }
        b_diag.push(r);
    }
    Ok(Pencil {
        a_diag,
        a_off,
        b_diag,
    })
}

/// Low end of a discrete spectrum.
#[derive(Debug, Clone)]
pub struct SLSpectrum {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Matching eigenvectors, r-weighted unit norm (Σ r_i h_i² Δ = 1), sign
    /// normalized so the first significant component is positive.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Sign changes per period of each eigenvector (wraparound included).
    pub zero_counts: Vec<usize>,
    pub grid_size: usize,
    pub extrapolated: bool,
    /// Per-eigenvalue |λ_N − λ_{2N}|/3 estimates; zeros when not extrapolated.
    pub error_estimates: Vec<f64>,
}

/// First `count` eigenpairs of the assembled pencil, eigenvalues ascending.
///
/// Requires count ⩽ N/4: the upper half of a second-order grid spectrum is
/// discretization garbage and must not be trusted.
pub fn solve(problem: &SLProblem, count: usize) -> Result<SLSpectrum> {
    let n = problem.grid_size;
    if count == 0 || count > n / 4 {
        return Err(Error::InvalidInput(format!(
            "eigenpair count must be in 1..=N/4 = {}, got {count}",
            n / 4
        )));
    }
    let pencil = assemble(problem)?;
    // Standard form C = B^{-1/2} A B^{-1/2}: same spectrum, still cyclic
    // tridiagonal, exactly symmetric.
    let d: Vec<f64> = pencil.b_diag.iter().map(|&b| 1.0 / b.sqrt()).collect();
    let mut c_diag = Vec::with_capacity(n);
    let mut c_off = Vec::with_capacity(n);
    for i in 0..n {
        c_diag.push(pencil.a_diag[i] * d[i] * d[i]);
        c_off.push(pencil.a_off[i] * d[i] * d[(i + 1) % n]);
    }
    let (theta, vecs) = solver::lowest_eigenpairs(&c_diag, &c_off, count)?;
    let dx = problem.period / n as f64;
    let mut eigenvectors = Vec::with_capacity(count);
    let mut zero_counts = Vec::with_capacity(count);
    for w in &vecs {
        let mut h: Vec<f64> = (0..n).map(|i| d[i] * w[i]).collect();
        // r-weighted normalization approximating ∫ r h² dx = 1.
        let norm = h
            .iter()
            .zip(&pencil.b_diag)
            .map(|(hi, ri)| ri * hi * hi * dx)
            .sum::<f64>()
            .sqrt();
        let maxabs = h.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let lead = h.iter().find(|v| v.abs() > 1e-8 * maxabs).copied();
        let flip = match lead {
            Some(v) if v < 0.0 => -1.0,
            _ => 1.0,
        };
        for v in &mut h {
            *v *= flip / norm;
        }
        zero_counts.push(zero_count(&h, problem.bc)?);
        eigenvectors.push(h);
    }
    Ok(SLSpectrum {
        eigenvalues: theta,
        eigenvectors,
        zero_counts,
        grid_size: n,
        extrapolated: false,
        error_estimates: vec![0.0; count],
    })
}

/// Solve at N and 2N and combine with second-order Richardson extrapolation,
/// λ = (4λ_{2N} − λ_N)/3, error estimate |λ_N − λ_{2N}|/3. Escalates the grid
/// (doubling, at most 4 times) until every estimate meets `target_tol`.
/// Eigenvectors and zero counts come from the fine grid.
pub fn refine(problem: &SLProblem, count: usize, target_tol: f64) -> Result<SLSpectrum> {
    if target_tol < 1e-10 {
        return Err(Error::InvalidInput(format!(
            "refinement target below 1e-10 is not attainable at second order, got {target_tol:e}"
        )));
    }
    let mut n = problem.grid_size;
    let mut achieved = f64::INFINITY;
    for _ in 0..=4 {
        let coarse = solve(&problem.with_grid(n)?, count)?;
        let fine = solve(&problem.with_grid(2 * n)?, count)?;
        let mut eigenvalues = Vec::with_capacity(count);
        let mut error_estimates = Vec::with_capacity(count);
        for (lc, lf) in coarse.eigenvalues.iter().zip(&fine.eigenvalues) {
            eigenvalues.push((4.0 * lf - lc) / 3.0);
            error_estimates.push((lc - lf).abs() / 3.0);
        }
        achieved = error_estimates.iter().copied().fold(0.0, f64::max);
        if achieved <= target_tol {
            return Ok(SLSpectrum {
                eigenvalues,
                eigenvectors: fine.eigenvectors,
                zero_counts: fine.zero_counts,
                grid_size: 2 * n,
                extrapolated: true,
                error_estimates,
            });
        }
        n *= 2;
    }
    Err(Error::RefinementStalled {
        achieved,
        target: target_tol,
    })
}

/// Count sign changes of a grid eigenfunction over one period, including the
/// wraparound pair (sign-flipped for the antiperiodic flavor). Samples below
/// the noise floor 1e−8·max|h| are snapped to the nearest significant
/// neighbor, which for counting purposes means they are skipped.
pub fn zero_count(eigenvector: &[f64], bc: Bc) -> Result<usize> {
    let maxabs = eigenvector.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if !maxabs.is_finite() || maxabs == 0.0 {
        return Err(Error::InvalidInput(
            "zero counting rejects an all-near-zero vector".into(),
        ));
    }
    let floor = 1e-8 * maxabs;
    let signs: Vec<bool> = eigenvector
        .iter()
        .filter(|v| v.abs() > floor)
        .map(|v| *v > 0.0)
        .collect();
    if signs.is_empty() {
        return Err(Error::InvalidInput(
            "zero counting rejects an all-near-zero vector".into(),
        ));
    }
    let mut changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let first_after_wrap = match bc {
        Bc::Periodic => signs[0],
        Bc::Antiperiodic => !signs[0],
    };
    if *signs.last().expect("nonempty") != first_after_wrap {
        changes += 1;
    }
    Ok(changes)
}

/// Constant coefficient function.
pub fn coef_const(v: f64) -> CoefFn {
    Arc::new(move |_| v)
}

/// Coefficient from a closure.
pub fn coef(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> CoefFn {
    Arc::new(f)
}
