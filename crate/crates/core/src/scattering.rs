//! Exact and WKB reflection data for the sech^2 bump.
//!
//! The exact reflection coefficient is a ratio of six Gamma values; it is
//! evaluated through `ln_gamma` sums so that the strong decay of the
//! individual factors at small dispersion never under- or overflows.

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::phase::PhaseContext;
use num_complex::Complex64;

/// Scattering quantities at one `(lambda, eps)` pair.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionEval {
    pub lambda: f64,
    pub eps: f64,
    /// Reflection coefficient.
    pub r: Complex64,
    /// `kappa = -i r exp(2 i rho / eps)`.
    pub kappa: Complex64,
    /// Tunneling action at `lambda`.
    pub tau: f64,
    /// `|(1 - |r|^2) exp(2 tau / eps) - 1|`.
    pub unitarity_residual: f64,
}

/// Exact reflection coefficient of `-1/cosh^2` at spectral point `lambda`.
pub fn exact_reflection_sech2(lambda: f64, eps: f64) -> Result<Complex64> {
    if lambda >= 0.0 {
        return Err(Error::Domain(format!("lambda = {lambda} must be negative")));
    }
    if !(0.0..=1.0).contains(&eps) || eps == 0.0 {
        return Err(Error::Domain(format!("eps = {eps} outside (0, 1]")));
    }
    if (-lambda).sqrt() / eps < 1e-12 {
        return Err(Error::Pole("Gamma argument at 0 for lambda -> 0".into()));
    }
    let k = Complex64::new(0.0, (-lambda).sqrt() / eps);
    let s = Complex64::new(-0.5, (1.0 - 0.25 * eps * eps).sqrt() / eps);
    let log_r = ln_gamma(k - s) + ln_gamma(k + s + 1.0) + ln_gamma(-k)
        - ln_gamma(s + 1.0)
        - ln_gamma(-s)
        - ln_gamma(k);
    Ok(log_r.exp())
}

/// `ln |t|^2` for the transmission coefficient of `-1/cosh^2`.
///
/// By unitarity `|t|^2 = 1 - |r|^2`; near `|r| = 1` that difference sits
/// far below the f64 resolution, so it must be formed in log space from
/// the Gamma ratio `t = Gamma(k-s) Gamma(k+s+1) / (Gamma(k+1) Gamma(k))`.
pub fn exact_transmission_sech2_log_sq(lambda: f64, eps: f64) -> Result<f64> {
    if lambda >= 0.0 {
        return Err(Error::Domain(format!("lambda = {lambda} must be negative")));
    }
    if !(0.0..=1.0).contains(&eps) || eps == 0.0 {
        return Err(Error::Domain(format!("eps = {eps} outside (0, 1]")));
    }
    let k = Complex64::new(0.0, (-lambda).sqrt() / eps);
    let s = Complex64::new(-0.5, (1.0 - 0.25 * eps * eps).sqrt() / eps);
    let log_t = ln_gamma(k - s) + ln_gamma(k + s + 1.0) - ln_gamma(k + 1.0) - ln_gamma(k);
    Ok(2.0 * log_t.re)
}

/// Per-`eps` aggregate of the WKB comparison.
#[derive(Debug, Clone, Copy)]
pub struct WkbRow {
    pub eps: f64,
    /// `max_lambda |kappa - 1|`.
    pub max_kappa_dev: f64,
    /// `max_lambda |kappa|`.
    pub max_kappa_abs: f64,
    /// `max_lambda |(1-|r|^2) e^{2 tau/eps} - 1|`.
    pub max_unitarity_residual: f64,
}

/// Full WKB validation report.
#[derive(Debug, Clone)]
pub struct WkbReport {
    /// Detailed evaluations, sorted by `(lambda, eps)`.
    pub evals: Vec<ReflectionEval>,
    /// Per-`eps` aggregates in the input ladder order.
    pub rows: Vec<WkbRow>,
    /// Fitted slope of `log max|kappa - 1|` against `log eps`.
    pub slope: f64,
}

/// Ordinary least squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let lx = x.ln();
        let ly = y.ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Sweep a `lambda` grid and an `eps` ladder: checks that
/// `kappa = -i r e^{2 i rho/eps}` is `1 + O(eps)`, that `|kappa|` stays
/// bounded, and that `(1-|r|^2) e^{2 tau/eps}` approaches one.
pub fn wkb_validation(
    ctx: &PhaseContext<'_>,
    lambda_grid: &[f64],
    eps_list: &[f64],
) -> Result<WkbReport> {
    if lambda_grid.iter().any(|&l| !(-1.0 < l && l < 0.0)) {
        return Err(Error::Domain("lambda grid must lie inside (-1, 0)".into()));
    }
    if eps_list.iter().any(|&e| e < 0.02) {
        return Err(Error::Domain(
            "eps below 0.02 loses digits in double precision".into(),
        ));
    }
    let mut lambdas: Vec<f64> = lambda_grid.to_vec();
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut evals = Vec::with_capacity(lambdas.len() * eps_list.len());
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let mut max_dev = 0.0f64;
        let mut max_abs = 0.0f64;
        let mut max_unit = 0.0f64;
        for &lambda in &lambdas {
            let r = exact_reflection_sech2(lambda, eps)?;
            let rho = ctx.rho(lambda)?;
            let tau = ctx.tau(lambda)?;
            let kappa =
                -Complex64::new(0.0, 1.0) * r * Complex64::new(0.0, 2.0 * rho / eps).exp();
            // (1 - |r|^2) e^{2 tau/eps} - 1 with 1 - |r|^2 = |t|^2 in log space
            let unit = ((exact_transmission_sech2_log_sq(lambda, eps)?
                + 2.0 * tau / eps)
                .exp()
                - 1.0)
                .abs();
            max_dev = max_dev.max((kappa - 1.0).norm());
            max_abs = max_abs.max(kappa.norm());
            max_unit = max_unit.max(unit);
            evals.push(ReflectionEval {
                lambda,
                eps,
                r,
                kappa,
                tau,
                unitarity_residual: unit,
            });
        }
        rows.push(WkbRow {
            eps,
            max_kappa_dev: max_dev,
            max_kappa_abs: max_abs,
            max_unitarity_residual: max_unit,
        });
    }
    evals.sort_by(|a, b| (a.lambda, a.eps).partial_cmp(&(b.lambda, b.eps)).unwrap());
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps, r.max_kappa_dev)).collect();
    let slope = log_log_slope(&pts);
    Ok(WkbReport { evals, rows, slope })
}
