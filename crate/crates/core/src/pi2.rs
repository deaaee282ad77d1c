//! The pole-free solution `U(X, T)` of the fourth-order equation
//! `X = T U - [U^3/6 + (U_X^2 + 2 U U_XX)/24 + U_XXXX/240]`
//! as a two-point boundary-value problem on `[-L, L]`.
//!
//! Interior nodes carry the residual discretized with 4th-order central
//! differences (7-point stencil for the fourth derivative); the three
//! outermost nodes on each side are pinned to the two-term asymptotic
//! series, which realizes the four continuum conditions `U(+-L)`,
//! `U_X(+-L)` at the discrete level.  Damped Newton iterations solve the
//! nonlinear system through a banded LU factorization.

use crate::error::{Error, Result};

mod banded;
pub use banded::BandedMatrix;

const STRIP: usize = 3;

// 4th-order central stencils
const D1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0]; // / (12 h)
const D2: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0]; // / (12 h^2)
const D4: [f64; 7] = [-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0]; // / (6 h^4)

/// Uniform grid on `[-L, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pi2Grid {
    half_length: f64,
    n: usize,
}

impl Pi2Grid {
    pub fn new(half_length: f64, n: usize) -> Result<Self> {
        if n < 9 {
            return Err(Error::Config(format!("n = {n} below the stencil width 9")));
        }
        if half_length <= 0.0 {
            return Err(Error::Config("half length must be positive".into()));
        }
        Ok(Pi2Grid { half_length, n })
    }

    /// Grid with spacing at most `h_max` (`n` rounded up, at least 9).
    pub fn with_spacing(half_length: f64, h_max: f64) -> Result<Self> {
        let n = ((2.0 * half_length / h_max).ceil() as usize + 1).max(9);
        Self::new(half_length, n)
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_length + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

/// Two-term far-field series of the pole-free solution and its derivative:
/// `U = -sign(X) [ (6|X|)^{1/3} + 6^{2/3} T |X|^{-1/3} / 3 ]`.
pub fn asymptotic_boundary(x: f64, t: f64) -> Result<(f64, f64)> {
    if x.abs() < 10.0 {
        return Err(Error::Range(format!(
            "|X| = {} too small for the asymptotic series",
            x.abs()
        )));
    }
    let a = x.abs();
    let c1 = 6.0f64.powf(1.0 / 3.0);
    let c2 = 6.0f64.powf(2.0 / 3.0) / 3.0;
    let u = -x.signum() * (c1 * a.powf(1.0 / 3.0) + c2 * t * a.powf(-1.0 / 3.0));
    let du = -c1 / 3.0 * a.powf(-2.0 / 3.0) + c2 / 3.0 * t * a.powf(-4.0 / 3.0);
    Ok((u, du))
}

/// Real root(s) of the dispersionless cubic `X = T U - U^3/6` as a Newton
/// starting guess: unique real Cardano root for `T <= 0`, outer branches
/// joined by a monotone cubic across the fold window for `T > 0`.
pub fn initial_guess(grid: &Pi2Grid, t: f64) -> Vec<f64> {
    let cubic_root = |x: f64| -> f64 {
        // U^3 - 6 T U + 6 X = 0, single real root when 9 X^2 >= 8 T^3
        let disc = (9.0 * x * x - 8.0 * t * t * t).max(0.0).sqrt();
        let c1 = (-3.0 * x + disc).cbrt();
        let c2 = (-3.0 * x - disc).cbrt();
        c1 + c2
    };
    if t <= 0.0 {
        return grid.nodes().iter().map(|&x| cubic_root(x)).collect();
    }
    // fold window of the multivalued cubic
    let x_star = (8.0 * t * t * t / 9.0).sqrt();
    let u_outer = 2.0 * (2.0 * t).sqrt(); // value at -x_star from the left branch
    let slope = -1.0 / (3.0 * t); // dU/dX of the outer branch at the fold edge
    grid.nodes()
        .iter()
        .map(|&x| {
            if x.abs() >= x_star {
                cubic_root(x)
            } else {
                // Hermite cubic from (-x*, u_outer) to (x*, -u_outer)
                let s = (x + x_star) / (2.0 * x_star);
                let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
                let h10 = s * (1.0 - s) * (1.0 - s);
                let h01 = s * s * (3.0 - 2.0 * s);
                let h11 = s * s * (s - 1.0);
                h00 * u_outer
                    + h10 * 2.0 * x_star * slope
                    + h01 * (-u_outer)
                    + h11 * 2.0 * x_star * slope
            }
        })
        .collect()
}

/// A converged solution at one `T`.
#[derive(Debug, Clone)]
pub struct Pi2Solution {
    grid: Pi2Grid,
    t: f64,
    u: Vec<f64>,
    residual_norm: f64,
    newton_iters: usize,
    boundary_mismatch: f64,
}

impl Pi2Solution {
    pub fn grid(&self) -> &Pi2Grid {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    /// Infinity norm of the interior discrete residual.
    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    pub fn newton_iters(&self) -> usize {
        self.newton_iters
    }

    /// Departure of the first free nodes from the two-term series.
    pub fn boundary_mismatch(&self) -> f64 {
        self.boundary_mismatch
    }

    /// Rebuild a solution from cached values (recomputes the diagnostics).
    pub fn from_values(grid: Pi2Grid, t: f64, u: Vec<f64>) -> Result<Self> {
        if u.len() != grid.len() {
            return Err(Error::Config(format!(
                "value count {} does not match grid size {}",
                u.len(),
                grid.len()
            )));
        }
        let residual_norm = residual_inf_norm(&grid, t, &u);
        let boundary_mismatch = boundary_mismatch(&grid, t, &u)?;
        Ok(Pi2Solution {
            grid,
            t,
            u,
            residual_norm,
            newton_iters: 0,
            boundary_mismatch,
        })
    }

    /// Evaluate by quintic interpolation through the six nearest nodes;
    /// beyond the grid the two-term series takes over.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Range(format!("X = {x}")));
        }
        let l = self.grid.half_length();
        if x.abs() > l {
            let (u, _) = asymptotic_boundary(x, self.t)?;
            return Ok(u);
        }
        let h = self.grid.spacing();
        let n = self.grid.len();
        let pos = (x + l) / h;
        let j0 = (pos.round() as isize - 3).clamp(0, n as isize - 6) as usize;
        // Lagrange polynomial through nodes j0 .. j0+5
        let mut acc = 0.0;
        for a in 0..6 {
            let xa = self.grid.node(j0 + a);
            let mut w = self.u[j0 + a];
            for b in 0..6 {
                if a != b {
                    let xb = self.grid.node(j0 + b);
                    w *= (x - xb) / (xa - xb);
                }
            }
            acc += w;
        }
        Ok(acc)
    }
}

fn series_value(x: f64, t: f64) -> f64 {
    asymptotic_boundary(x, t).map(|(u, _)| u).unwrap_or(0.0)
}

/// Discrete residual on all nodes: interior rows carry the equation,
/// boundary-strip rows the series pinning.
pub fn residual(grid: &Pi2Grid, t: f64, u: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let h = grid.spacing();
    let mut out = vec![0.0; n];
    for i in 0..n {
        if i < STRIP || i >= n - STRIP {
            out[i] = u[i] - series_value(grid.node(i), t);
            continue;
        }
        let ux = (0..5).map(|m| D1[m] * u[i - 2 + m]).sum::<f64>() / (12.0 * h);
        let uxx = (0..5).map(|m| D2[m] * u[i - 2 + m]).sum::<f64>() / (12.0 * h * h);
        let uxxxx = (0..7).map(|m| D4[m] * u[i - 3 + m]).sum::<f64>() / (6.0 * h.powi(4));
        out[i] = t * u[i]
            - u[i] * u[i] * u[i] / 6.0
            - (ux * ux + 2.0 * u[i] * uxx) / 24.0
            - uxxxx / 240.0
            - grid.node(i);
    }
    out
}

fn residual_inf_norm(grid: &Pi2Grid, t: f64, u: &[f64]) -> f64 {
    let n = grid.len();
    residual(grid, t, u)[STRIP..n - STRIP]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

fn boundary_mismatch(grid: &Pi2Grid, t: f64, u: &[f64]) -> Result<f64> {
    let n = grid.len();
    let i_left = STRIP;
    let i_right = n - STRIP - 1;
    let (ul, _) = asymptotic_boundary(grid.node(i_left), t)?;
    let (ur, _) = asymptotic_boundary(grid.node(i_right), t)?;
    Ok((u[i_left] - ul).abs().max((u[i_right] - ur).abs()))
}

fn jacobian(grid: &Pi2Grid, t: f64, u: &[f64]) -> BandedMatrix {
    let n = grid.len();
    let h = grid.spacing();
    let mut jac = BandedMatrix::new(n, STRIP, STRIP);
    for i in 0..n {
        if i < STRIP || i >= n - STRIP {
            jac.set(i, i, 1.0);
            continue;
        }
        let ux = (0..5).map(|m| D1[m] * u[i - 2 + m]).sum::<f64>() / (12.0 * h);
        let uxx = (0..5).map(|m| D2[m] * u[i - 2 + m]).sum::<f64>() / (12.0 * h * h);
        for o in -3i64..=3 {
            let j = (i as i64 + o) as usize;
            let mut v = -D4[(o + 3) as usize] / (6.0 * h.powi(4)) / 240.0;
            if o.abs() <= 2 {
                let d1 = D1[(o + 2) as usize] / (12.0 * h);
                let d2 = D2[(o + 2) as usize] / (12.0 * h * h);
                v += -(2.0 * ux * d1 + 2.0 * u[i] * d2) / 24.0;
            }
            if o == 0 {
                v += t - 0.5 * u[i] * u[i] - uxx / 12.0;
            }
            jac.set(i, j, v);
        }
    }
    jac
}

const NEWTON_MAX_ITERS: usize = 50;

/// Solve the boundary-value problem at one `T` by damped Newton.
pub fn newton_solve(grid: &Pi2Grid, t: f64, guess: &[f64]) -> Result<Pi2Solution> {
    if guess.len() != grid.len() || guess.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("guess must be finite on every node".into()));
    }
    let n = grid.len();
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_inf = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut u = guess.to_vec();
    let mut f = residual(grid, t, &u);
    let mut f2 = norm2(&f);
    let mut iters = 0;
    loop {
        if iters >= NEWTON_MAX_ITERS {
            return Err(Error::Convergence(format!(
                "residual {:.3e} after {NEWTON_MAX_ITERS} Newton steps at T = {t}",
                norm_inf(&f)
            )));
        }
        iters += 1;
        let jac = jacobian(grid, t, &u);
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let step = jac.lu_solve(&rhs)?;
        // Armijo backtracking on |F|_2 (the Newton direction descends it)
        let mut alpha = 1.0f64;
        let mut stalled = false;
        let (new_u, new_f, new_f2) = loop {
            let trial: Vec<f64> = (0..n).map(|i| u[i] + alpha * step[i]).collect();
            let tf = residual(grid, t, &trial);
            let tn = norm2(&tf);
            if tn.is_finite() && tn <= (1.0 - 1e-4 * alpha) * f2 {
                break (trial, tf, tn);
            }
            alpha *= 0.5;
            if alpha < 1.0 / 65536.0 {
                // at the roundoff floor of the h^-4 stencil no direction
                // descends further; accept if the invariant already holds
                if norm_inf(&f) <= 1e-9 {
                    stalled = true;
                    break (u.clone(), f.clone(), f2);
                }
                return Err(Error::Convergence(format!(
                    "line search stalled at residual {:.3e}, T = {t}",
                    norm_inf(&f)
                )));
            }
        };
        if stalled {
            break;
        }
        let step_norm = step.iter().fold(0.0f64, |m, v| m.max((alpha * v).abs()));
        u = new_u;
        f = new_f;
        f2 = new_f2;
        if step_norm < 1e-12 || norm_inf(&f) < 1e-10 {
            break;
        }
    }
    let residual_norm = residual_inf_norm(grid, t, &u);
    if residual_norm > 1e-9 {
        return Err(Error::Convergence(format!(
            "interior residual {residual_norm:.3e} above 1e-9 at T = {t}"
        )));
    }
    let boundary_mismatch = boundary_mismatch(grid, t, &u)?;
    Ok(Pi2Solution {
        grid: *grid,
        t,
        u,
        residual_norm,
        newton_iters: iters,
        boundary_mismatch,
    })
}

/// Family over an ordered `T` ladder sharing one grid.
#[derive(Debug, Clone)]
pub struct Pi2Family {
    members: Vec<Pi2Solution>,
}

impl Pi2Family {
    pub fn members(&self) -> &[Pi2Solution] {
        &self.members
    }

    pub fn member_at(&self, t: f64) -> Option<&Pi2Solution> {
        self.members.iter().find(|s| (s.t - t).abs() < 1e-9)
    }

    pub fn from_members(mut members: Vec<Pi2Solution>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Config("family must not be empty".into()));
        }
        members.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        let grid = members[0].grid;
        if members.iter().any(|m| m.grid != grid) {
            return Err(Error::Config("family members must share one grid".into()));
        }
        Ok(Pi2Family { members })
    }
}

const MAX_T_STEP: f64 = 0.25;

/// Solve the whole ladder by continuation: `T = 0` is solved first from
/// the cubic guess, then the ladder is walked outward with each solve
/// warm-started from its inner neighbour.
pub fn continuation_in_t(grid: &Pi2Grid, ladder: &[f64]) -> Result<Pi2Family> {
    if ladder.is_empty() {
        return Err(Error::Config("empty T ladder".into()));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("T ladder must be strictly increasing".into()));
    }
    if ladder.windows(2).any(|w| w[1] - w[0] > MAX_T_STEP + 1e-12) {
        return Err(Error::Spacing(format!(
            "ladder step above the continuation limit {MAX_T_STEP}"
        )));
    }
    let seed = newton_solve(grid, 0.0, &initial_guess(grid, 0.0))?;

    let mut members: Vec<Pi2Solution> = Vec::with_capacity(ladder.len());
    // positive side, ascending from 0
    let mut warm = seed.u.clone();
    let mut prev_t = 0.0;
    for &t in ladder.iter().filter(|&&t| t >= 0.0) {
        let mut cur = prev_t;
        // bridge the gap from the seed to the first ladder point if needed
        while t - cur > MAX_T_STEP + 1e-12 {
            cur += MAX_T_STEP;
            warm = newton_solve(grid, cur, &warm)?.u;
        }
        let sol = newton_solve(grid, t, &warm)?;
        warm = sol.u.clone();
        prev_t = t;
        members.push(sol);
    }
    // negative side, descending from 0
    let mut warm = seed.u.clone();
    let mut prev_t = 0.0;
    for &t in ladder.iter().filter(|&&t| t < 0.0).rev() {
        let mut cur = prev_t;
        while cur - t > MAX_T_STEP + 1e-12 {
            cur -= MAX_T_STEP;
            warm = newton_solve(grid, cur, &warm)?.u;
        }
        let sol = newton_solve(grid, t, &warm)?;
        warm = sol.u.clone();
        prev_t = t;
        members.push(sol);
    }
    Pi2Family::from_members(members)
}

/// Residual of `U_T + U U_X + U_XXX / 12` over the family: `U_T` by central
/// differences across equally spaced members, spatial derivatives by the
/// 4th-order stencils, sup over the window `|X| <= L/2`.
pub fn kdv_crosscheck(family: &Pi2Family) -> Result<f64> {
    let members = family.members();
    if members.len() < 3 {
        return Err(Error::Spacing("need at least 3 family members".into()));
    }
    let dt = members[1].t - members[0].t;
    if members
        .windows(2)
        .any(|w| ((w[1].t - w[0].t) - dt).abs() > 1e-9)
    {
        return Err(Error::Spacing("T ladder is not equally spaced".into()));
    }
    let grid = members[0].grid;
    let n = grid.len();
    let h = grid.spacing();
    let l = grid.half_length();
    let mut worst = 0.0f64;
    for m in 1..members.len() - 1 {
        let u = &members[m].u;
        for i in 3..n - 3 {
            if grid.node(i).abs() > 0.5 * l {
                continue;
            }
            let ut = (members[m + 1].u[i] - members[m - 1].u[i]) / (2.0 * dt);
            let ux = (0..5).map(|o| D1[o] * u[i - 2 + o]).sum::<f64>() / (12.0 * h);
            // 4th-order central third derivative over 7 points
            let uxxx = (u[i - 3] - 8.0 * u[i - 2] + 13.0 * u[i - 1] - 13.0 * u[i + 1]
                + 8.0 * u[i + 2]
                - u[i + 3])
                / (8.0 * h.powi(3));
            worst = worst.max((ut + u[i] * ux + uxxx / 12.0).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_values_and_signs() {
        let (u, _) = asymptotic_boundary(1000.0, 0.0).unwrap();
        assert!((u + 6000.0f64.powf(1.0 / 3.0)).abs() < 1e-12);
        let (u, _) = asymptotic_boundary(-1000.0, 0.0).unwrap();
        assert!((u - 6000.0f64.powf(1.0 / 3.0)).abs() < 1e-12);
        // T-term: U(X,T) - U(X,0) = -sign(X) 6^{2/3} T |X|^{-1/3} / 3
        let t = 0.7;
        let (ut, _) = asymptotic_boundary(500.0, t).unwrap();
        let (u0, _) = asymptotic_boundary(500.0, 0.0).unwrap();
        let expect = -(6.0f64).powf(2.0 / 3.0) / 3.0 * t * 500.0f64.powf(-1.0 / 3.0);
        assert!((ut - u0 - expect).abs() < 1e-13);
        // derivative against finite differences of the series
        let h = 1e-4;
        for &x in &[40.0, -25.0] {
            let (_, du) = asymptotic_boundary(x, t).unwrap();
            let fd = (asymptotic_boundary(x + h, t).unwrap().0
                - asymptotic_boundary(x - h, t).unwrap().0)
                / (2.0 * h);
            assert!((du - fd).abs() < 1e-9);
        }
        assert!(matches!(asymptotic_boundary(5.0, 0.0), Err(Error::Range(_))));
    }

    #[test]
    fn cubic_guess_examples() {
        let grid = Pi2Grid::new(12.0, 97).unwrap();
        let g = initial_guess(&grid, 0.0);
        let mid = grid.len() / 2;
        assert!((grid.node(mid)).abs() < 1e-12);
        assert!(g[mid].abs() < 1e-12, "guess at X=0 is {}", g[mid]);
        // X = -6 -> U = 36^{1/3}
        let i = grid.nodes().iter().position(|&x| (x + 6.0).abs() < 1e-9).unwrap();
        assert!((g[i] - 36.0f64.cbrt()).abs() < 1e-12);
        // strictly decreasing guess for T = -1 and T = +1 (connector window)
        for t in [-1.0, 1.0] {
            let g = initial_guess(&grid, t);
            for w in g.windows(2) {
                assert!(w[1] < w[0] + 1e-12, "guess not monotone at T = {t}");
            }
        }
    }

    #[test]
    fn residual_of_zero_input_is_minus_x() {
        let grid = Pi2Grid::new(12.0, 121).unwrap();
        let r = residual(&grid, 0.4, &vec![0.0; grid.len()]);
        for i in 3..grid.len() - 3 {
            assert!((r[i] + grid.node(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_at_t_zero_and_envelope() {
        let grid = Pi2Grid::with_spacing(20.0, 0.05).unwrap();
        let sol = newton_solve(&grid, 0.0, &initial_guess(&grid, 0.0)).unwrap();
        assert!(sol.residual_norm() <= 1e-9);
        assert!(sol.newton_iters() <= 20);
        for (i, &v) in sol.values().iter().enumerate() {
            let x = grid.node(i);
            let env = (6.0 * x.abs()).powf(1.0 / 3.0) + 1.0;
            assert!(v.abs() <= env, "envelope violated at X = {x}: {v}");
        }
        // node evaluation reproduces stored values, interpolation is smooth
        for i in [0, 57, grid.len() - 1] {
            assert_eq!(sol.evaluate(grid.node(i)).unwrap(), sol.values()[i]);
        }
        let far = sol.evaluate(1000.0).unwrap();
        assert!((far + 6000.0f64.powf(1.0 / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn truncation_self_consistency() {
        let g20 = Pi2Grid::with_spacing(20.0, 0.05).unwrap();
        let g30 = Pi2Grid::with_spacing(30.0, 0.05).unwrap();
        let s20 = newton_solve(&g20, 0.0, &initial_guess(&g20, 0.0)).unwrap();
        let s30 = newton_solve(&g30, 0.0, &initial_guess(&g30, 0.0)).unwrap();
        let mut worst = 0.0f64;
        for i in 0..201 {
            let x = -5.0 + 10.0 * i as f64 / 200.0;
            worst = worst.max((s20.evaluate(x).unwrap() - s30.evaluate(x).unwrap()).abs());
        }
        assert!(worst < 1e-4, "L = 20 vs 30 disagreement {worst:.3e}");
    }

    #[test]
    fn continuation_ladder_converges_quickly() {
        let grid = Pi2Grid::with_spacing(15.0, 0.05).unwrap();
        let ladder = [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0];
        let family = continuation_in_t(&grid, &ladder).unwrap();
        assert_eq!(family.members().len(), ladder.len());
        for s in family.members() {
            assert!(s.newton_iters() <= 15, "T = {}: {} iters", s.t(), s.newton_iters());
            assert!(s.residual_norm() <= 1e-9);
            assert!(s.values().iter().all(|v| v.is_finite()));
        }
        // pole-free proxy: no interior blow-up
        let bound = (6.0 * grid.half_length()).powf(1.0 / 3.0) + 2.0;
        for s in family.members() {
            assert!(s.values().iter().all(|v| v.abs() <= bound));
        }
        // continuity in T: node-wise gaps shrink linearly with the step
        let gap = |a: &Pi2Solution, b: &Pi2Solution| {
            a.values()
                .iter()
                .zip(b.values())
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        };
        let fine = continuation_in_t(&grid, &[0.0, 0.125, 0.25]).unwrap();
        let coarse_gap = gap(family.member_at(0.0).unwrap(), family.member_at(0.25).unwrap());
        let fine_gap = gap(fine.member_at(0.0).unwrap(), fine.member_at(0.125).unwrap());
        let ratio = fine_gap / coarse_gap;
        assert!(
            (0.3..0.7).contains(&ratio),
            "gap ratio {ratio} not consistent with linear variation"
        );
    }

    #[test]
    fn single_member_ladder() {
        let grid = Pi2Grid::with_spacing(12.0, 0.1).unwrap();
        let family = continuation_in_t(&grid, &[0.0]).unwrap();
        assert_eq!(family.members().len(), 1);
    }

    #[test]
    fn ladder_guards() {
        let grid = Pi2Grid::with_spacing(12.0, 0.1).unwrap();
        assert!(matches!(
            continuation_in_t(&grid, &[0.0, 0.5]),
            Err(Error::Spacing(_))
        ));
        assert!(matches!(
            continuation_in_t(&grid, &[0.2, 0.1]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn crosscheck_of_constant_family_is_spatial_only() {
        let grid = Pi2Grid::with_spacing(12.0, 0.05).unwrap();
        let sol = newton_solve(&grid, 0.0, &initial_guess(&grid, 0.0)).unwrap();
        let constant = Pi2Family::from_members(vec![
            Pi2Solution { t: -0.1, ..sol.clone() },
            sol.clone(),
            Pi2Solution { t: 0.1, ..sol.clone() },
        ])
        .unwrap();
        let resid = kdv_crosscheck(&constant).unwrap();
        // U_T = 0, so the residual equals the spatial part of the middle member
        let u = sol.values();
        let h = grid.spacing();
        let mut expect = 0.0f64;
        for i in 3..grid.len() - 3 {
            if grid.node(i).abs() > 0.5 * grid.half_length() {
                continue;
            }
            let ux = (0..5).map(|o| D1[o] * u[i - 2 + o]).sum::<f64>() / (12.0 * h);
            let uxxx = (u[i - 3] - 8.0 * u[i - 2] + 13.0 * u[i - 1] - 13.0 * u[i + 1]
                + 8.0 * u[i + 2]
                - u[i + 3])
                / (8.0 * h.powi(3));
            expect = expect.max((u[i] * ux + uxxx / 12.0).abs());
        }
        assert!((resid - expect).abs() < 1e-14);
    }

    #[test]
    fn grid_guards() {
        assert!(Pi2Grid::new(10.0, 8).is_err());
        assert!(Pi2Grid::new(-1.0, 100).is_err());
    }
}
