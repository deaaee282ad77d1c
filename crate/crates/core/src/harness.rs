//! The double-scaling comparison around the gradient catastrophe.
//!
//! Small-dispersion KdV solutions are sampled in the shrinking window
//! `x = x_c + 6 u_c (t - t_c) + (8 k eps^6)^{1/7} X`,
//! `t = t_c + (4 k^3 eps^4)^{1/7} T / 6`, rescaled by the amplitude
//! `a(eps) = (2 eps^2 / k^2)^{1/7}`, and compared against the model
//! profile `U(X, T)`; the sup-errors across an `eps` ladder yield the
//! fitted convergence rate.

use crate::error::{Error, Result};
use crate::hopf;
use crate::kdv::KdvField;
use crate::pi2::Pi2Family;
use crate::profile::{CatastrophePoint, InitialProfile};
use crate::scattering::log_log_slope;

/// The double-scaling change of variables attached to a catastrophe point.
#[derive(Debug, Clone, Copy)]
pub struct ScalingMap {
    point: CatastrophePoint,
}

impl ScalingMap {
    pub fn new(point: &CatastrophePoint) -> Self {
        ScalingMap { point: *point }
    }

    /// Physical time of scaled time `T` at dispersion `eps`.
    pub fn t(&self, big_t: f64, eps: f64) -> f64 {
        self.point.t_c + (4.0 * self.point.k.powi(3) * eps.powi(4)).powf(1.0 / 7.0) * big_t / 6.0
    }

    /// Physical position of `(X, T)` at dispersion `eps`.
    pub fn x(&self, big_x: f64, big_t: f64, eps: f64) -> f64 {
        let t = self.t(big_t, eps);
        self.point.x_c
            + 6.0 * self.point.u_c * (t - self.point.t_c)
            + (8.0 * self.point.k * eps.powi(6)).powf(1.0 / 7.0) * big_x
    }

    /// Amplitude factor `a(eps) = (2 eps^2 / k^2)^{1/7}`.
    pub fn amplitude(&self, eps: f64) -> f64 {
        (2.0 * eps * eps / (self.point.k * self.point.k)).powf(1.0 / 7.0)
    }
}

/// One `(eps, T)` comparison entry.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub eps: f64,
    pub big_t: f64,
    /// Sup over the X window of `|u - u_c - a(eps) U(X, T)|`; absent when
    /// the pipeline for this pair failed.
    pub sup_error: Option<f64>,
    /// Failure annotation when `sup_error` is absent.
    pub note: Option<String>,
}

/// Rescaled snapshot `(X, (u - u_c)/a(eps))` at `T = 0` for one `eps`.
#[derive(Debug, Clone)]
pub struct RescaledProfile {
    pub eps: f64,
    pub points: Vec<(f64, f64)>,
}

/// Outcome of [`universality_compare`].
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    /// Fitted slope of `log sup-error` against `log eps`; present only
    /// when at least three `eps` values fully succeeded.
    pub slope: Option<f64>,
    pub profiles: Vec<RescaledProfile>,
}

/// Number of sample points across the X window.
const X_SAMPLES: usize = 101;

/// Compare KdV solutions against the rescaled model profile.
///
/// `kdv_provider(eps, t)` must yield the field evolved to physical time
/// `t`; it is called with non-decreasing `t` per `eps` so a caching or
/// sequentially evolving provider works naturally.
pub fn universality_compare(
    point: &CatastrophePoint,
    family: &Pi2Family,
    eps_ladder: &[f64],
    t_values: &[f64],
    x_window: f64,
    kdv_provider: &mut dyn FnMut(f64, f64) -> Result<KdvField>,
) -> Result<ComparisonReport> {
    if eps_ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config(
            "eps ladder must be strictly decreasing".into(),
        ));
    }
    let map = ScalingMap::new(point);
    let xs: Vec<f64> = (0..X_SAMPLES)
        .map(|i| -x_window + 2.0 * x_window * i as f64 / (X_SAMPLES - 1) as f64)
        .collect();

    let mut rows = Vec::new();
    let mut profiles = Vec::new();
    let mut fit_points: Vec<(f64, f64)> = Vec::new();
    let mut eps_ok = 0usize;

    for &eps in eps_ladder {
        // ascending physical times so one evolving field can be reused
        let mut ts: Vec<f64> = t_values.to_vec();
        ts.sort_by(|a, b| map.t(*a, eps).partial_cmp(&map.t(*b, eps)).unwrap());
        let mut all_ok = true;
        for &big_t in &ts {
            let model = match family.member_at(big_t) {
                Some(m) => m,
                None => {
                    rows.push(ComparisonRow {
                        eps,
                        big_t,
                        sup_error: None,
                        note: Some(format!("model family has no member at T = {big_t}")),
                    });
                    all_ok = false;
                    continue;
                }
            };
            let t_phys = map.t(big_t, eps);
            let field = match kdv_provider(eps, t_phys) {
                Ok(f) => f,
                Err(e) => {
                    rows.push(ComparisonRow {
                        eps,
                        big_t,
                        sup_error: None,
                        note: Some(format!("kdv run failed: {e}")),
                    });
                    all_ok = false;
                    continue;
                }
            };
            let amp = map.amplitude(eps);
            let x_phys: Vec<f64> = xs.iter().map(|&bx| map.x(bx, big_t, eps)).collect();
            let u_vals = field.sample_many(&x_phys);
            let mut sup = 0.0f64;
            let mut profile_points = Vec::with_capacity(xs.len());
            for (i, &bx) in xs.iter().enumerate() {
                let model_u = model.evaluate(bx)?;
                sup = sup.max((u_vals[i] - point.u_c - amp * model_u).abs());
                if big_t == 0.0 {
                    profile_points.push((bx, (u_vals[i] - point.u_c) / amp));
                }
            }
            if big_t == 0.0 {
                profiles.push(RescaledProfile {
                    eps,
                    points: profile_points,
                });
            }
            fit_points.push((eps, sup));
            rows.push(ComparisonRow {
                eps,
                big_t,
                sup_error: Some(sup),
                note: None,
            });
        }
        if all_ok {
            eps_ok += 1;
        }
    }

    let slope = if eps_ok >= 3 {
        Some(log_log_slope(&fit_points))
    } else {
        None
    };
    // deterministic ordering: descending eps (ladder order), then ascending T
    rows.sort_by(|a, b| {
        (b.eps, a.big_t)
            .partial_cmp(&(a.eps, b.big_t))
            .unwrap()
    });
    Ok(ComparisonReport {
        rows,
        slope,
        profiles,
    })
}

/// Sup-distance between KdV and Hopf solutions over `|x| <= 3` per `eps`.
pub fn hopf_validation(
    profile: &InitialProfile,
    point: &CatastrophePoint,
    eps_ladder: &[f64],
    t: f64,
    kdv_provider: &mut dyn FnMut(f64, f64) -> Result<KdvField>,
) -> Result<Vec<(f64, f64)>> {
    if t > 0.9 * point.t_c {
        return Err(Error::Range(format!(
            "t = {t} beyond 0.9 t_c = {}",
            0.9 * point.t_c
        )));
    }
    let xs: Vec<f64> = (0..301).map(|i| -3.0 + 6.0 * i as f64 / 300.0).collect();
    let samples = hopf::scan(profile, point, &xs, t)?;
    let mut out = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        let field = kdv_provider(eps, t)?;
        let us = field.sample_many(&xs);
        let err = samples
            .iter()
            .zip(&us)
            .fold(0.0f64, |m, (h, &u)| m.max((h.u - u).abs()));
        out.push((eps, err));
    }
    Ok(out)
}
