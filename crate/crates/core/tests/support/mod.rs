//! Independent oracles used by the integration tests: a double-exponential
//! quadrature (second opinion against the Gauss-Kronrod production path)
//! and an adaptive 13-stage Runge-Kutta-Fehlberg 7(8) integration of the
//! Schroedinger scattering problem (second opinion against the
//! Gamma-function reflection coefficient).

use num_complex::Complex64;

/// Tanh-sinh (double-exponential) quadrature on `[a, b]`.
///
/// Handles integrable endpoint singularities; refines the trapezoid level
/// until two consecutive levels agree to `tol`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    assert!(a < b);
    let half = 0.5 * (b - a);
    let t_max = 5.0;
    let mut h = 1.0;
    let eval = |t: f64| -> f64 {
        let s = (std::f64::consts::FRAC_PI_2) * t.sinh();
        // distance to the approached endpoint, full relative precision
        let delta = 2.0 / (1.0 + (2.0 * s.abs()).exp());
        let x = if t >= 0.0 {
            b - half * delta
        } else {
            a + half * delta
        };
        if !(x > a && x < b) {
            return 0.0;
        }
        let w = (std::f64::consts::FRAC_PI_2) * t.cosh() / s.cosh().powi(2);
        f(x) * w * half
    };
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut prev = sum * h;
    for _level in 0..10 {
        h *= 0.5;
        // add the new midpoints
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= tol * cur.abs().max(1.0) {
            return cur;
        }
        prev = cur;
    }
    prev
}

// Fehlberg 7(8) coefficients (13 stages).
const C: [f64; 13] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    0.5,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

fn a_matrix() -> [[f64; 12]; 13] {
    let mut a = [[0.0; 12]; 13];
    a[1][0] = 2.0 / 27.0;
    a[2][0] = 1.0 / 36.0;
    a[2][1] = 1.0 / 12.0;
    a[3][0] = 1.0 / 24.0;
    a[3][2] = 1.0 / 8.0;
    a[4][0] = 5.0 / 12.0;
    a[4][2] = -25.0 / 16.0;
    a[4][3] = 25.0 / 16.0;
    a[5][0] = 1.0 / 20.0;
    a[5][3] = 0.25;
    a[5][4] = 0.2;
    a[6][0] = -25.0 / 108.0;
    a[6][3] = 125.0 / 108.0;
    a[6][4] = -65.0 / 27.0;
    a[6][5] = 125.0 / 54.0;
    a[7][0] = 31.0 / 300.0;
    a[7][4] = 61.0 / 225.0;
    a[7][5] = -2.0 / 9.0;
    a[7][6] = 13.0 / 900.0;
    a[8][0] = 2.0;
    a[8][3] = -53.0 / 6.0;
    a[8][4] = 704.0 / 45.0;
    a[8][5] = -107.0 / 9.0;
    a[8][6] = 67.0 / 90.0;
    a[8][7] = 3.0;
    a[9][0] = -91.0 / 108.0;
    a[9][3] = 23.0 / 108.0;
    a[9][4] = -976.0 / 135.0;
    a[9][5] = 311.0 / 54.0;
    a[9][6] = -19.0 / 60.0;
    a[9][7] = 17.0 / 6.0;
    a[9][8] = -1.0 / 12.0;
    a[10][0] = 2383.0 / 4100.0;
    a[10][3] = -341.0 / 164.0;
    a[10][4] = 4496.0 / 1025.0;
    a[10][5] = -301.0 / 82.0;
    a[10][6] = 2133.0 / 4100.0;
    a[10][7] = 45.0 / 82.0;
    a[10][8] = 45.0 / 164.0;
    a[10][9] = 18.0 / 41.0;
    a[11][0] = 3.0 / 205.0;
    a[11][5] = -6.0 / 41.0;
    a[11][6] = -3.0 / 205.0;
    a[11][7] = -3.0 / 41.0;
    a[11][8] = 3.0 / 41.0;
    a[11][9] = 6.0 / 41.0;
    a[12][0] = -1777.0 / 4100.0;
    a[12][3] = -341.0 / 164.0;
    a[12][4] = 4496.0 / 1025.0;
    a[12][5] = -289.0 / 82.0;
    a[12][6] = 2193.0 / 4100.0;
    a[12][7] = 51.0 / 82.0;
    a[12][8] = 33.0 / 164.0;
    a[12][9] = 12.0 / 41.0;
    a[12][11] = 1.0;
    a
}

// 8th-order weights (the propagated solution).
const B8: [f64; 13] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

type State = [Complex64; 2];

fn add(a: State, b: State, s: f64) -> State {
    [a[0] + b[0] * s, a[1] + b[1] * s]
}

/// Adaptive RKF7(8) from `x0` to `x1` (either direction).
pub fn rkf78<F: Fn(f64, State) -> State>(rhs: F, x0: f64, x1: f64, y0: State, tol: f64) -> State {
    let a = a_matrix();
    let dir = (x1 - x0).signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = dir * 0.01 * (x1 - x0).abs().max(1e-6);
    let mut k: [State; 13] = [[Complex64::new(0.0, 0.0); 2]; 13];
    while (x1 - x) * dir > 1e-14 {
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        for i in 0..13 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i) {
                if a[i][j] != 0.0 {
                    yi = add(yi, *kj, h * a[i][j]);
                }
            }
            k[i] = rhs(x + C[i] * h, yi);
        }
        let mut y8 = y;
        for i in 0..13 {
            if B8[i] != 0.0 {
                y8 = add(y8, k[i], h * B8[i]);
            }
        }
        // embedded error estimate
        let ed = [
            (k[0][0] + k[10][0] - k[11][0] - k[12][0]) * (41.0 / 840.0 * h),
            (k[0][1] + k[10][1] - k[11][1] - k[12][1]) * (41.0 / 840.0 * h),
        ];
        let scale = y8[0].norm().max(y8[1].norm()).max(1.0);
        let err = ed[0].norm().max(ed[1].norm()) / scale;
        if err <= tol {
            x += h;
            y = y8;
        }
        let factor = if err > 0.0 {
            0.9 * (tol / err).powf(1.0 / 8.0)
        } else {
            4.0
        };
        h *= factor.clamp(0.2, 4.0);
    }
    y
}

/// Reflection coefficient by direct integration of the scattering problem:
/// start from the transmitted plane wave at `x = +L`, integrate backwards,
/// and match the two-wave decomposition at `x = -L`.
pub fn reflection_by_ode(u0: impl Fn(f64) -> f64, lambda: f64, eps: f64) -> Complex64 {
    let l = 30.0;
    let omega = (-lambda).sqrt() / eps;
    let root = (-lambda).sqrt();
    let rhs = |x: f64, y: State| -> State {
        [
            y[1] / eps,
            Complex64::new((lambda - u0(x)) / eps, 0.0) * y[0],
        ]
    };
    // f = e^{-i omega x}, g = eps f' at the right edge
    let y_right: State = [
        Complex64::new(0.0, -omega * l).exp(),
        Complex64::new(0.0, -root) * Complex64::new(0.0, -omega * l).exp(),
    ];
    let y_left = rkf78(rhs, l, -l, y_right, 1e-12);
    let (f, g) = (y_left[0], y_left[1]);
    let i = Complex64::new(0.0, 1.0);
    let b_wave = (f - i * g / root) * 0.5;
    let a_wave = (f + i * g / root) * 0.5;
    (b_wave / a_wave) * Complex64::new(0.0, 2.0 * omega * l).exp()
}

#[allow(dead_code)]
pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0f64, |m, v| m.max(v.abs()))
}
