//! Reference computations that share no code with the library: direct
//! quadrature of integral representations and Runge–Kutta shooting.
#![allow(dead_code)]

use std::f64::consts::PI;

/// J₀(x) = (1/π)∫₀^π cos(x sin θ) dθ. The integrand is smooth and
/// π-periodic, so the trapezoid rule converges geometrically.
pub fn j0_integral(x: f64) -> f64 {
    let n = 64 + 4 * x.abs().ceil() as usize;
    let h = PI / n as f64;
    (0..n).map(|k| (x * (k as f64 * h).sin()).cos()).sum::<f64>() / n as f64
}

/// Root of f in [a, b] given a sign change, by plain bisection.
pub fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// The first `count` sign changes of f on a grid from `lo`, refined by
/// bisection.
pub fn scan_roots(f: &dyn Fn(f64) -> f64, lo: f64, step: f64, count: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    while roots.len() < count {
        let b = a + step;
        let fb = f(b);
        if (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(f, a, b));
        }
        a = b;
        fa = fb;
        assert!(a < 1e3, "scan ran away");
    }
    roots
}

/// G with Y(r₂) = G·Y(r₁) for Y = (V, rV') solving −(rV')' = ζ²rV, by
/// classical RK4 on `steps` equal steps.
pub fn rk4_transfer(r1: f64, r2: f64, zeta: f64, steps: usize) -> [[f64; 2]; 2] {
    let rhs = |r: f64, y: [f64; 2]| [y[1] / r, -zeta * zeta * r * y[0]];
    let h = (r2 - r1) / steps as f64;
    let mut cols = [[1.0, 0.0], [0.0, 1.0]];
    for y in cols.iter_mut() {
        let mut r = r1;
        for _ in 0..steps {
            let k1 = rhs(r, *y);
            let k2 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = rhs(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for i in 0..2 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            r += h;
        }
    }
    [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
}

pub const SHOOTING_STEPS: usize = 4000;

/// V(r₂) for the solution with V(r₁) = 0, (rV')(r₁) = 1.
pub fn shoot_dirichlet(r1: f64, r2: f64, zeta: f64) -> f64 {
    rk4_transfer(r1, r2, zeta, SHOOTING_STEPS)[0][1]
}

/// det(I − K·G): zero when some Y(r₁) = K·Y(r₂) with Y(r₂) = G·Y(r₁).
pub fn shoot_coupled(r1: f64, r2: f64, k: [[f64; 2]; 2], zeta: f64) -> f64 {
    let g = rk4_transfer(r1, r2, zeta, SHOOTING_STEPS);
    let kg = |i: usize, j: usize| k[i][0] * g[0][j] + k[i][1] * g[1][j];
    (1.0 - kg(0, 0)) * (1.0 - kg(1, 1)) - kg(0, 1) * kg(1, 0)
}

/// Closed form of the 2D heat semigroup on e^{−r²/4σ} at parameter ω.
pub fn widened_gaussian(sigma: f64, omega: f64, r: f64) -> f64 {
    sigma / (sigma + omega) * (-r * r / (4.0 * (sigma + omega))).exp()
}
