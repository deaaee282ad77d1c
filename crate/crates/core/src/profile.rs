//! Admissible initial data and the gradient-catastrophe point.
//!
//! An [`InitialProfile`] is a real-analytic single negative bump: `u_0 < 0`
//! on a finite interval, decaying at infinity, with a single minimum at
//! `x_M` normalized to `u_0(x_M) = -1`.  The analyticity sector of the
//! datum (the complex domain `S` with opening angle `theta_0` and strip
//! half-width `sigma`) is assumed but never verified numerically; only the
//! real evaluators and, for catalog profiles, a closed-form complex
//! continuation of `f_-'` are used.

use crate::error::{Error, Result};
use crate::quad;
use num_complex::Complex64;
use std::fmt;
use std::sync::{Arc, OnceLock};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Monotone samples of one flank, bracketing roots by binary search.
struct FlankTable {
    xs: Vec<f64>,
    us: Vec<f64>,
}

/// Which monotone flank of the bump an inverse is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Decreasing flank, `x < x_M`.
    Minus,
    /// Increasing flank, `x > x_M`.
    Plus,
}

/// Single-bump initial datum with evaluators for `u_0` and its first three
/// derivatives.
#[derive(Clone)]
pub struct InitialProfile {
    name: String,
    u0: RealFn,
    du0: RealFn,
    d2u0: RealFn,
    d3u0: RealFn,
    x_min: f64,
    decay_half_width: f64,
    f_minus_prime_complex: Option<ComplexFn>,
    flank_minus: Arc<OnceLock<FlankTable>>,
    flank_plus: Arc<OnceLock<FlankTable>>,
}

impl fmt::Debug for InitialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialProfile")
            .field("name", &self.name)
            .field("x_min", &self.x_min)
            .field("decay_half_width", &self.decay_half_width)
            .finish()
    }
}

impl InitialProfile {
    /// Build a profile from user-supplied evaluators.  `validate` should be
    /// called afterwards; the catalog constructors do so.
    pub fn from_evaluators(
        name: impl Into<String>,
        u0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        du0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2u0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d3u0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        x_min: f64,
        decay_half_width: f64,
    ) -> Self {
        InitialProfile {
            name: name.into(),
            u0: Arc::new(u0),
            du0: Arc::new(du0),
            d2u0: Arc::new(d2u0),
            d3u0: Arc::new(d3u0),
            x_min,
            decay_half_width,
            f_minus_prime_complex: None,
            flank_minus: Arc::new(OnceLock::new()),
            flank_plus: Arc::new(OnceLock::new()),
        }
    }

    fn flank_table(&self, branch: Branch) -> &FlankTable {
        let (lock, sign) = match branch {
            Branch::Minus => (&self.flank_minus, -1.0),
            Branch::Plus => (&self.flank_plus, 1.0),
        };
        lock.get_or_init(|| {
            let n = 4096usize;
            let span = 2.2 * self.decay_half_width;
            let xs: Vec<f64> = (0..=n)
                .map(|i| self.x_min + sign * span * i as f64 / n as f64)
                .collect();
            let us: Vec<f64> = xs.iter().map(|&x| self.u0(x)).collect();
            FlankTable { xs, us }
        })
    }

    /// The bump `u_0(x) = -1/cosh^2 x`.
    pub fn sech2() -> Self {
        let sech2 = |x: f64| {
            let c = x.cosh();
            1.0 / (c * c)
        };
        let mut p = Self::from_evaluators(
            "sech2",
            move |x| -sech2(x),
            move |x| 2.0 * sech2(x) * x.tanh(),
            move |x| {
                let s = sech2(x);
                let t = x.tanh();
                2.0 * s * (s - 2.0 * t * t)
            },
            move |x| {
                let s = sech2(x);
                let t = x.tanh();
                8.0 * s * t * (t * t - 2.0 * s)
            },
            0.0,
            15.0,
        );
        // f_-(u) = -artanh sqrt(1+u), so f_-'(u) = 1/(2 u sqrt(1+u)),
        // analytic off (-inf,-1] and {0}; used for complex phase evaluation.
        p.f_minus_prime_complex = Some(Arc::new(|z: Complex64| {
            1.0 / (2.0 * z * (z + 1.0).sqrt())
        }));
        p
    }

    /// An asymmetric analytic bump: minus a normalized sum of two Gaussians.
    pub fn two_gaussian() -> Self {
        const A1: f64 = 1.0;
        const B1: f64 = -0.4;
        const C1: f64 = 1.0;
        const A2: f64 = 0.6;
        const B2: f64 = 0.8;
        const C2: f64 = 1.4;

        let g = |x: f64, n: u8| -> f64 {
            let term = |a: f64, b: f64, c: f64| -> f64 {
                let y = (x - b) / c;
                let e = a * (-y * y).exp();
                match n {
                    0 => e,
                    1 => e * (-2.0 * y / c),
                    2 => e * (4.0 * y * y - 2.0) / (c * c),
                    3 => e * (-8.0 * y * y * y + 12.0 * y) / (c * c * c),
                    _ => unreachable!(),
                }
            };
            term(A1, B1, C1) + term(A2, B2, C2)
        };

        // locate the maximum of g by Newton on g'
        let mut x = 0.0_f64;
        for _ in 0..100 {
            let step = g(x, 1) / g(x, 2);
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let x_min = x;
        let scale = g(x_min, 0);

        Self::from_evaluators(
            "two_gaussian",
            move |x| -g(x, 0) / scale,
            move |x| -g(x, 1) / scale,
            move |x| -g(x, 2) / scale,
            move |x| -g(x, 3) / scale,
            x_min,
            10.0,
        )
    }

    /// Look up a catalog profile by name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "sech2" => Some(Self::sech2()),
            "two_gaussian" => Some(Self::two_gaussian()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Location of the minimum `x_M`.
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Half-width beyond which `|u_0| < 1e-12`.
    pub fn decay_half_width(&self) -> f64 {
        self.decay_half_width
    }

    pub fn u0(&self, x: f64) -> f64 {
        (self.u0)(x)
    }

    pub fn du0(&self, x: f64) -> f64 {
        (self.du0)(x)
    }

    pub fn d2u0(&self, x: f64) -> f64 {
        (self.d2u0)(x)
    }

    pub fn d3u0(&self, x: f64) -> f64 {
        (self.d3u0)(x)
    }

    /// Closed-form analytic continuation of `f_-'`, when the catalog
    /// provides one.
    pub fn f_minus_prime_complex(&self, z: Complex64) -> Option<Complex64> {
        self.f_minus_prime_complex.as_ref().map(|f| f(z))
    }

    /// Check the single-bump invariants.
    pub fn validate(&self) -> Result<()> {
        if (self.u0(self.x_min) + 1.0).abs() > 1e-12 {
            return Err(Error::Inconsistency(format!(
                "u0(x_M) = {} is not -1",
                self.u0(self.x_min)
            )));
        }
        if self.du0(self.x_min).abs() > 1e-10 {
            return Err(Error::Inconsistency(format!(
                "u0'(x_M) = {} is not 0",
                self.du0(self.x_min)
            )));
        }
        if self.d2u0(self.x_min) <= 0.0 {
            return Err(Error::Inconsistency(
                "u0''(x_M) must be positive".into(),
            ));
        }
        let w = self.decay_half_width;
        for &x in &[self.x_min - w, self.x_min + w, -w, w] {
            if self.u0(x).abs() >= 1e-12 {
                return Err(Error::Inconsistency(format!(
                    "|u0({x})| = {} >= 1e-12 beyond the decay half-width",
                    self.u0(x).abs()
                )));
            }
        }
        // single bump: u0' < 0 left of x_M, > 0 right of x_M
        let m = 200;
        for i in 1..m {
            let s = i as f64 / m as f64;
            let xl = self.x_min - s * w;
            let xr = self.x_min + s * w;
            if self.u0(xl) < -1e-10 && self.du0(xl) >= 0.0 {
                return Err(Error::Inconsistency(format!("u0' >= 0 at {xl} < x_M")));
            }
            if self.u0(xr) < -1e-10 && self.du0(xr) <= 0.0 {
                return Err(Error::Inconsistency(format!("u0' <= 0 at {xr} > x_M")));
            }
        }
        Ok(())
    }

    /// Mass of the datum by adaptive quadrature over the decay window.
    pub fn mass(&self) -> Result<f64> {
        let w = self.decay_half_width.max(self.x_min.abs() + 1.0);
        quad::integrate(|x| self.u0(x), -w, w, 1e-12, 1e-12)
    }
}

/// The gradient-catastrophe data of the Hopf flow for a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatastrophePoint {
    /// Position of the catastrophe.
    pub x_c: f64,
    /// Time of the catastrophe.
    pub t_c: f64,
    /// Solution value `u(x_c, t_c)`.
    pub u_c: f64,
    /// Foot of the critical characteristic, `xi_c = f_-(u_c)`.
    pub xi_c: f64,
    /// Genericity constant `k = -f_-'''(u_c) > 0`.
    pub k: f64,
}

impl CatastrophePoint {
    /// Re-assert the defining relations against a profile.
    pub fn validate(&self, profile: &InitialProfile) -> Result<()> {
        let f1 = f_minus_derivatives(profile, self.u_c, 1)?;
        let f2 = f_minus_derivatives(profile, self.u_c, 2)?;
        if (6.0 * self.t_c + f1).abs() > 1e-9 {
            return Err(Error::Inconsistency(format!(
                "6 t_c + f_-'(u_c) = {:.3e}",
                6.0 * self.t_c + f1
            )));
        }
        if f2.abs() > 1e-8 {
            return Err(Error::Inconsistency(format!("f_-''(u_c) = {:.3e}", f2)));
        }
        if (self.x_c - 6.0 * self.t_c * self.u_c - self.xi_c).abs() > 1e-9 {
            return Err(Error::Inconsistency(
                "x_c != 6 t_c u_c + xi_c".into(),
            ));
        }
        if self.k <= 0.0 {
            return Err(Error::Genericity(format!("k = {:.3e}", self.k)));
        }
        Ok(())
    }
}

const X_TOL: f64 = 1e-13;

/// Invert `u_0` on the requested flank: returns `x` with `u_0(x) = u`.
///
/// Bracketed bisection with Newton acceleration; the bracket is grown
/// outward when `u` sits in the far tail of the bump.
pub fn inverse_branch(profile: &InitialProfile, u: f64, branch: Branch) -> Result<f64> {
    if !(-1.0 < u && u < 0.0) {
        return Err(Error::Domain(format!("u = {u} outside (-1, 0)")));
    }
    let xm = profile.x_min;
    let sign = match branch {
        Branch::Minus => -1.0,
        Branch::Plus => 1.0,
    };
    // residual g(x) = u0(x) - u; g(x_M) <= 0, g -> -u > 0 far out
    let mut width = profile.decay_half_width;
    let mut outer = xm + sign * width;
    let mut tries = 0;
    while profile.u0(outer) - u <= 0.0 {
        width *= 2.0;
        outer = xm + sign * width;
        tries += 1;
        if tries > 60 {
            return Err(Error::Inconsistency(format!(
                "no bracket for u = {u} on the {branch:?} flank"
            )));
        }
    }
    let (mut lo, mut hi) = if sign < 0.0 { (outer, xm) } else { (xm, outer) };
    // g(lo), g(hi) have opposite signs; on [lo,hi] keep g(lo)*g(hi) <= 0
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = profile.u0(x) - u;
        if g == 0.0 {
            return Ok(x);
        }
        // shrink the bracket
        let g_lo = profile.u0(lo) - u;
        if (g_lo > 0.0) == (g > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo < X_TOL {
            return Ok(0.5 * (lo + hi));
        }
        let d = profile.du0(x);
        let newton = x - g / d;
        x = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(x)
}

/// Derivatives of the inverse `f_-` via the implicit chain rule:
/// `f' = 1/u', f'' = -u''/(u')^3, f''' = (3 u''^2 - u' u''')/(u')^5`,
/// evaluated at `x = f_-(u)`.
pub fn f_minus_derivatives(profile: &InitialProfile, u: f64, order: usize) -> Result<f64> {
    let x = inverse_branch(profile, u, Branch::Minus)?;
    let d1 = profile.du0(x);
    if d1.abs() < 1e-6 {
        return Err(Error::Singularity(format!(
            "u_0' vanishes at x = {x} (u = {u})"
        )));
    }
    match order {
        1 => Ok(1.0 / d1),
        2 => Ok(-profile.d2u0(x) / d1.powi(3)),
        3 => {
            let d2 = profile.d2u0(x);
            let d3 = profile.d3u0(x);
            Ok((3.0 * d2 * d2 - d1 * d3) / d1.powi(5))
        }
        _ => Err(Error::Domain(format!("order {order} outside 1..=3"))),
    }
}

/// Value of `f_-` itself (the inverse on the decreasing flank).
pub fn f_minus(profile: &InitialProfile, u: f64) -> Result<f64> {
    inverse_branch(profile, u, Branch::Minus)
}

/// Value of `f_+` (the inverse on the increasing flank).
pub fn f_plus(profile: &InitialProfile, u: f64) -> Result<f64> {
    inverse_branch(profile, u, Branch::Plus)
}

/// Locate the gradient catastrophe of the Hopf flow for `profile`.
///
/// Finds the foot `xi_c` maximizing `-6 u_0'` on the decreasing flank
/// (a root of `u_0''` there), then
/// `t_c = 1/(-6 u_0'(xi_c))`, `u_c = u_0(xi_c)`, `x_c = 6 t_c u_c + xi_c`
/// and `k = -f_-'''(u_c)`.
pub fn locate_catastrophe(profile: &InitialProfile) -> Result<CatastrophePoint> {
    profile.validate()?;
    let xm = profile.x_min;
    let w = profile.decay_half_width;
    // scan for sign changes of u0'' on (x_M - 1.25 w, x_M)
    let n_scan = 600;
    let left = xm - 1.25 * w;
    let step = (xm - left) / n_scan as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = left;
    let mut prev_v = profile.d2u0(prev_x);
    for i in 1..=n_scan {
        let x = left + i as f64 * step;
        let v = profile.d2u0(x);
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if prev_v * v < 0.0 {
            // bisection + Newton polish on u0''
            let (mut lo, mut hi) = (prev_x, x);
            let mut r = 0.5 * (lo + hi);
            for _ in 0..200 {
                let g = profile.d2u0(r);
                if (g > 0.0) == (profile.d2u0(lo) > 0.0) {
                    lo = r;
                } else {
                    hi = r;
                }
                if hi - lo < 1e-14 {
                    break;
                }
                let d = profile.d3u0(r);
                let newton = r - g / d;
                r = if d != 0.0 && newton > lo && newton < hi {
                    newton
                } else {
                    0.5 * (lo + hi)
                };
            }
            roots.push(r);
        }
        prev_x = x;
        prev_v = v;
    }
    // keep only roots strictly inside the bump where u0' < 0
    roots.retain(|&r| profile.du0(r) < 0.0);
    let xi_c = roots
        .into_iter()
        .max_by(|a, b| {
            let va = -profile.du0(*a);
            let vb = -profile.du0(*b);
            va.partial_cmp(&vb).unwrap()
        })
        .ok_or_else(|| Error::Shape("no interior critical point of u_0' on the decreasing flank".into()))?;

    let slope = profile.du0(xi_c);
    let t_c = 1.0 / (-6.0 * slope);
    let u_c = profile.u0(xi_c);
    let x_c = 6.0 * t_c * u_c + xi_c;
    let k = -f_minus_derivatives(profile, u_c, 3)?;
    if k <= 1e-8 {
        return Err(Error::Genericity(format!("k = {k:.3e} <= 1e-8")));
    }
    let point = CatastrophePoint {
        x_c,
        t_c,
        u_c,
        xi_c,
        k,
    };
    point.validate(profile)?;
    Ok(point)
}
