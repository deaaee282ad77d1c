//! The dispersionless equation `u_t + 6 u u_x = 0` by characteristics.
//!
//! For `t <= t_c` the map `xi -> 6 t u_0(xi) + xi` is monotone, so each
//! `(x, t)` has a unique characteristic foot.  The multivalued region
//! `t > t_c` is not modeled.

use crate::error::{Error, Result};
use crate::profile::{CatastrophePoint, InitialProfile};

/// One sample of the Hopf solution.
#[derive(Debug, Clone, Copy)]
pub struct HopfSample {
    pub x: f64,
    pub t: f64,
    /// Solution value `u = u_0(xi)`.
    pub u: f64,
    /// Spatial derivative; `f64::INFINITY` sentinel exactly at `(x_c, t_c)`.
    pub ux: f64,
    /// Characteristic foot.
    pub xi: f64,
}

fn solve_foot(
    profile: &InitialProfile,
    x: f64,
    t: f64,
    guess: Option<f64>,
) -> f64 {
    // residual g(xi) = 6 t u0(xi) + xi - x, increasing in xi for t <= t_c
    let g = |xi: f64| 6.0 * t * profile.u0(xi) + xi - x;
    // u0 in [-1, 0] brackets the foot in [x, x + 6t]
    let mut lo = x - 1e-9;
    let mut hi = x + 6.0 * t + 1e-9;
    debug_assert!(g(lo) <= 0.0 && g(hi) >= 0.0);
    let mut xi = match guess {
        Some(v) if v > lo && v < hi => v,
        _ => 0.5 * (lo + hi),
    };
    for _ in 0..200 {
        let gv = g(xi);
        if gv == 0.0 {
            return xi;
        }
        if gv > 0.0 {
            hi = xi;
        } else {
            lo = xi;
        }
        if hi - lo < 1e-12 {
            return 0.5 * (lo + hi);
        }
        let d = 6.0 * t * profile.du0(xi) + 1.0;
        let newton = xi - gv / d;
        // Newton with damping into the bracket; near the cusp the Jacobian
        // degenerates quadratically and we fall back to bisection
        xi = if d > 1e-9 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    xi
}

/// Solve the Hopf equation at `(x, t)` for `0 <= t <= t_c`.
pub fn solve_characteristic(
    profile: &InitialProfile,
    point: &CatastrophePoint,
    x: f64,
    t: f64,
) -> Result<HopfSample> {
    if !(0.0..=point.t_c + 1e-14).contains(&t) {
        return Err(Error::Range(format!(
            "t = {t} outside [0, t_c = {}]; the multivalued region is not modeled",
            point.t_c
        )));
    }
    let xi = solve_foot(profile, x, t, None);
    let u = profile.u0(xi);
    let denom = 1.0 + 6.0 * t * profile.du0(xi);
    let ux = if denom.abs() < 1e-7 {
        f64::INFINITY
    } else {
        profile.du0(xi) / denom
    };
    Ok(HopfSample { x, t, u, ux, xi })
}

/// Solve along an x-scan at fixed time, warm-starting each root from the
/// previous foot.
pub fn scan(
    profile: &InitialProfile,
    point: &CatastrophePoint,
    xs: &[f64],
    t: f64,
) -> Result<Vec<HopfSample>> {
    if !(0.0..=point.t_c + 1e-14).contains(&t) {
        return Err(Error::Range(format!("t = {t} outside [0, t_c]")));
    }
    let mut out = Vec::with_capacity(xs.len());
    let mut guess: Option<f64> = None;
    for &x in xs {
        let xi = solve_foot(profile, x, t, guess);
        let u = profile.u0(xi);
        let denom = 1.0 + 6.0 * t * profile.du0(xi);
        let ux = if denom.abs() < 1e-7 {
            f64::INFINITY
        } else {
            profile.du0(xi) / denom
        };
        out.push(HopfSample { x, t, u, ux, xi });
        guess = Some(xi);
    }
    Ok(out)
}
