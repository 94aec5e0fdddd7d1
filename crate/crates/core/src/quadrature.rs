//! Adaptive Gauss–Kronrod quadrature and the 2D heat semigroup acting on
//! radial profiles.

use alloc::vec::Vec;

use crate::specfun::{bessel_i0_scaled, bessel_i1_scaled};
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Gauss–Kronrod 7/15 on [a, b]: (Kronrod value, |Kronrod − Gauss|,
/// Kronrod estimate of ∫|f|).
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut k_abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let (f1, f2) = (f(c - dx), f(c + dx));
        let s = f1 + f2;
        k += WGK[i] * s;
        k_abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs(), k_abs * h.abs())
}

/// Errors below this multiple of ε·∫|f| are rounding noise that
/// subdivision cannot remove.
const ROUNDOFF_FACTOR: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    /// Equal panels the interval is cut into before any adaptation. A fixed
    /// initial partition keeps the result a smooth function of parameters.
    pub initial_panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { initial_panels: 16, abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 4000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// ∫ₐᵇ f by globally adaptive Gauss–Kronrod 7/15.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(alloc::format!("integration limits must be finite: [{a}, {b}]")));
    }
    let n = opts.initial_panels.max(1);
    let w = (b - a) / n as f64;
    let mut panels: Vec<(f64, f64, f64, f64, f64)> = (0..n)
        .map(|i| {
            let lo = a + i as f64 * w;
            let hi = if i + 1 == n { b } else { lo + w };
            let (v, e, m) = gk15(f, lo, hi);
            (lo, hi, v, e, m)
        })
        .collect();
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let error: f64 = panels.iter().map(|p| p.3).sum();
        let mass: f64 = panels.iter().map(|p| p.4).sum();
        if !value.is_finite() {
            return Err(Error::Accuracy { estimate: f64::INFINITY });
        }
        let floor = ROUNDOFF_FACTOR * f64::EPSILON * mass;
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()).max(floor) {
            return Ok(Estimate { value, error });
        }
        if panels.len() >= opts.max_panels {
            return Err(Error::Accuracy { estimate: error });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, e, m) = panels[worst];
        if e <= ROUNDOFF_FACTOR * f64::EPSILON * m {
            // even the worst panel is at rounding level
            return Ok(Estimate { value, error });
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval can no longer be split in floating point
            return Ok(Estimate { value, error });
        }
        let (v1, e1, m1) = gk15(f, lo, mid);
        let (v2, e2, m2) = gk15(f, mid, hi);
        panels[worst] = (lo, mid, v1, e1, m1);
        panels.push((mid, hi, v2, e2, m2));
    }
}

/// Number of kernel widths √ω kept on each side of the evaluation radius;
/// the Gaussian tail beyond is below e⁻³⁶.
pub const HEAT_TRUNCATION: f64 = 12.0;

/// Radial reduction of the 2D heat semigroup at time-like parameter ω:
///
/// ```text
/// (Kₙf)(r) = (1/2ω) ∫ e^{−(r−s)²/4ω} · e^{−rs/2ω} Iₙ(rs/2ω) · f(s) s ds
/// ```
///
/// Order 0 convolves a radial scalar f(|y|). Order 1 gives the radial
/// component of the convolution of the radial vector field f(|y|)·y/|y|.
pub fn heat_radial(f: &dyn Fn(f64) -> f64, order: u32, omega: f64, r: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(alloc::format!("heat kernel needs omega > 0, got {omega}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(alloc::format!("radius must be finite and >= 0, got {r}")));
    }
    if order > 1 {
        return Err(Error::InvalidParameter(alloc::format!("kernel order must be 0 or 1, got {order}")));
    }
    if order == 1 && r == 0.0 {
        return Ok(0.0);
    }
    let width = HEAT_TRUNCATION * libm::sqrt(omega);
    let lo = (r - width).max(0.0);
    let hi = r + width;
    let inv = 0.5 / omega;
    let integrand = |s: f64| {
        let d = r - s;
        let x = r * s * inv;
        let i = if order == 0 { bessel_i0_scaled(x) } else { bessel_i1_scaled(x) }.unwrap_or(f64::NAN);
        inv * libm::exp(-d * d * 0.5 * inv) * i * f(s) * s
    };
    let opts = QuadOptions { initial_panels: 8, ..QuadOptions::default() };
    let mut total = 0.0;
    for (a, b) in [(lo, r.max(lo)), (r.max(lo), hi)] {
        if b > a {
            total += integrate(&integrand, a, b, &opts)?.value;
        }
    }
    Ok(total)
}

/// The 2D heat semigroup applied to a radial function and evaluated at an
/// arbitrary point x, by polar quadrature centred at x:
///
/// ```text
/// (1/4πω) ∫₀^∞ ∫₀^{2π} e^{−ρ²/4ω} f(|x − ρ(cos θ, sin θ)|) dθ ρ dρ
/// ```
pub fn heat_polar(f: &dyn Fn(f64) -> f64, omega: f64, x: [f64; 2]) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(alloc::format!("heat kernel needs omega > 0, got {omega}")));
    }
    let angular = |rho: f64| -> f64 {
        // periodic trapezoid rule, doubled until two levels agree
        let mut n = 32usize;
        let eval = |n: usize| -> f64 {
            let h = 2.0 * core::f64::consts::PI / n as f64;
            (0..n)
                .map(|k| {
                    let th = k as f64 * h;
                    let y0 = x[0] - rho * libm::cos(th);
                    let y1 = x[1] - rho * libm::sin(th);
                    f(libm::hypot(y0, y1))
                })
                .sum::<f64>()
                * h
        };
        let mut prev = eval(n);
        while n < 4096 {
            n *= 2;
            let next = eval(n);
            if (next - prev).abs() <= 1e-14 * next.abs().max(1e-300) {
                return next;
            }
            prev = next;
        }
        prev
    };
    let integrand = |rho: f64| libm::exp(-rho * rho / (4.0 * omega)) * angular(rho) * rho;
    let opts = QuadOptions { initial_panels: 8, ..QuadOptions::default() };
    let top = HEAT_TRUNCATION * libm::sqrt(omega);
    // the circle ρ = |x| passes through the origin, where f(|·|) may kink
    let split = libm::hypot(x[0], x[1]).min(top);
    let mut total = 0.0;
    for (a, b) in [(0.0, split), (split, top)] {
        if b > a {
            total += integrate(&integrand, a, b, &opts)?.value;
        }
    }
    Ok(total / (4.0 * core::f64::consts::PI * omega))
}
