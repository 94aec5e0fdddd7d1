use core::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::{Error, Result};

/// Arguments below this use the power series, above it the Hankel
/// asymptotic expansion. Both branches stay below ~1e-12 absolute error
/// at the crossover.
pub const SERIES_SWITCHOVER: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MIN_SERIES_TERMS: usize = 25;
const MAX_SERIES_TERMS: usize = 300;

/// Power series of J_n(x) for n ∈ {0, 1}.
fn j_series(n: u32, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = if n == 0 { 1.0 } else { 0.5 * x };
    let mut sum = 0.0;
    for m in 1..MAX_SERIES_TERMS {
        sum += term;
        term *= q / (m as f64 * (m as f64 + n as f64));
        if m >= MIN_SERIES_TERMS && term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel asymptotic series P_ν(x), Q_ν(x).
fn hankel_pq(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= prev || term.abs() < 1e-18 {
            break;
        }
        prev = term.abs();
        // P picks the even k with alternating signs, Q the odd k.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    (p, q)
}

/// cos and sin of χ = x − (2ν+1)π/4 without forming the shifted argument.
fn phase(nu: u32, x: f64) -> (f64, f64) {
    let (s, c) = (libm::sin(x), libm::cos(x));
    if nu == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    }
}

fn asym_j(nu: u32, x: f64) -> f64 {
    let (p, q) = hankel_pq(nu, x);
    let (cc, ss) = phase(nu, x);
    libm::sqrt(2.0 / (PI * x)) * (p * cc - q * ss)
}

fn asym_y(nu: u32, x: f64) -> f64 {
    let (p, q) = hankel_pq(nu, x);
    let (cc, ss) = phase(nu, x);
    libm::sqrt(2.0 / (PI * x)) * (p * ss + q * cc)
}

/// Bessel function of the first kind, order 0. Even in `x`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_SWITCHOVER {
        j_series(0, x)
    } else {
        asym_j(0, x)
    }
}

/// Bessel function of the first kind, order 1. Odd in `x`.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_SWITCHOVER {
        j_series(1, ax)
    } else {
        asym_j(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn check_positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(alloc::format!("{name} requires x > 0, got {x}")))
    }
}

/// Bessel function of the second kind, order 0, for x > 0.
pub fn bessel_y0(x: f64) -> Result<f64> {
    check_positive(x, "y0")?;
    if x >= SERIES_SWITCHOVER {
        return Ok(asym_y(0, x));
    }
    // Y₀ = (2/π)[(ln(x/2) + γ) J₀ + Σ (−1)^{m+1} H_m (x²/4)^m / (m!)²]
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for m in 1..MAX_SERIES_TERMS {
        let mf = m as f64;
        term *= q / (mf * mf);
        harmonic += 1.0 / mf;
        let add = -term * harmonic;
        sum += add;
        if m >= MIN_SERIES_TERMS && add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    Ok(2.0 / PI * ((libm::log(0.5 * x) + EULER_GAMMA) * j_series(0, x) + sum))
}

/// Bessel function of the second kind, order 1, for x > 0.
pub fn bessel_y1(x: f64) -> Result<f64> {
    check_positive(x, "y1")?;
    if x >= SERIES_SWITCHOVER {
        return Ok(asym_y(1, x));
    }
    // Y₁ = −2/(πx) + (2/π) ln(x/2) J₁ − (1/π) Σ (−1)^k (ψ(k+1)+ψ(k+2)) (x/2)^{2k+1} / (k!(k+1)!)
    let q = -0.25 * x * x;
    let mut term = 0.5 * x;
    let mut psi1 = -EULER_GAMMA;
    let mut psi2 = 1.0 - EULER_GAMMA;
    let mut sum = 0.0;
    for k in 0..MAX_SERIES_TERMS {
        let add = term * (psi1 + psi2);
        sum += add;
        if k >= MIN_SERIES_TERMS && add.abs() <= 1e-17 * sum.abs() {
            break;
        }
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + 2.0));
        psi1 += 1.0 / (kf + 1.0);
        psi2 += 1.0 / (kf + 2.0);
    }
    Ok(-2.0 / (PI * x) + 2.0 / PI * libm::log(0.5 * x) * j_series(1, x) - sum / PI)
}

/// Fills `out[k] = J_k(z)/z^k` for `k = 0..out.len()`.
///
/// The ratio is entire in z, so this stays finite at z = 0 where it equals
/// 1/(2^k k!). Small arguments use the series of the ratio directly; larger
/// ones recur upward from J₀, J₁ (stable while k stays below z).
pub fn bessel_j_over_pow(z: f64, out: &mut [f64]) {
    let z = z.abs();
    if out.is_empty() {
        return;
    }
    if z < 8.0 {
        let q = -0.25 * z * z;
        let mut lead = 1.0; // 1/(2^k k!)
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                lead /= 2.0 * k as f64;
            }
            let mut term = lead;
            let mut sum = 0.0;
            for m in 1..MAX_SERIES_TERMS {
                sum += term;
                term *= q / (m as f64 * (m + k) as f64);
                if term.abs() <= 1e-18 * sum.abs() {
                    break;
                }
            }
            *slot = sum;
        }
        return;
    }
    let mut jm = bessel_j0(z);
    let mut j = bessel_j1(z);
    let mut pow = 1.0;
    out[0] = jm;
    for k in 1..out.len() {
        pow *= z;
        out[k] = j / pow;
        let next = 2.0 * k as f64 / z * j - jm;
        jm = j;
        j = next;
    }
}

/// Fills `out[k] = Y_k(z)` by upward recurrence (stable for Y).
pub fn bessel_yn(z: f64, out: &mut [f64]) -> Result<()> {
    if out.is_empty() {
        return Ok(());
    }
    let mut ym = bessel_y0(z)?;
    let mut y = bessel_y1(z)?;
    out[0] = ym;
    for k in 1..out.len() {
        out[k] = y;
        let next = 2.0 * k as f64 / z * y - ym;
        ym = y;
        y = next;
    }
    Ok(())
}

const SCALED_I_SWITCHOVER: f64 = 25.0;

fn scaled_i(nu: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::Domain(alloc::format!(
            "scaled I{nu} requires finite x >= 0, got {x}"
        )));
    }
    if x < SCALED_I_SWITCHOVER {
        let q = 0.25 * x * x;
        let mut term = if nu == 0 { 1.0 } else { 0.5 * x };
        let mut sum = 0.0;
        for m in 1..MAX_SERIES_TERMS {
            sum += term;
            term *= q / (m as f64 * (m as f64 + nu as f64));
            if term <= 1e-17 * sum {
                break;
            }
        }
        return Ok(sum * libm::exp(-x));
    }
    // e^{−x} I_ν(x) ~ (2πx)^{−1/2} Σ (−1)^k a_k(ν) / x^k
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (8.0 * k as f64 * x);
        if term.abs() >= prev || term.abs() < 1e-18 {
            break;
        }
        prev = term.abs();
        sum += term;
    }
    Ok(sum / libm::sqrt(2.0 * PI * x))
}

/// e^{−x} I₀(x) for x ≥ 0, finite for every representable argument.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    scaled_i(0, x)
}

/// e^{−x} I₁(x) for x ≥ 0.
pub fn bessel_i1_scaled(x: f64) -> Result<f64> {
    scaled_i(1, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    /// J₀ from its integral representation, trapezoid rule on a periodic
    /// integrand (spectrally accurate).
    fn j0_integral(x: f64) -> f64 {
        let n = 400;
        let h = PI / n as f64;
        (0..n).map(|i| libm::cos(x * libm::sin(i as f64 * h))).sum::<f64>() / n as f64
    }

    fn jn_integral(n: u32, x: f64) -> f64 {
        // J_n(x) = (1/π) ∫₀^π cos(nθ − x sin θ) dθ
        let m = 800;
        let h = PI / m as f64;
        let f = |t: f64| libm::cos(n as f64 * t - x * libm::sin(t));
        let inner: f64 = (1..m).map(|i| f(i as f64 * h)).sum();
        (inner + 0.5 * (f(0.0) + f(PI))) / m as f64
    }

    #[test]
    fn j0_and_j1_at_zero() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_j1(0.0), 0.0);
    }

    #[test]
    fn j_matches_integral_oracle_on_0_to_50() {
        let mut worst: f64 = 0.0;
        for i in 0..=500 {
            let x = i as f64 * 0.1;
            worst = worst.max((bessel_j0(x) - j0_integral(x)).abs());
            worst = worst.max((bessel_j1(x) - jn_integral(1, x)).abs());
        }
        assert!(worst <= 1e-12, "worst J error {worst:e}");
    }

    #[test]
    fn wronskian_holds() {
        // J₁Y₀ − J₀Y₁ = 2/(πx)
        for &x in &[0.3, 1.0, 5.0, 11.99, 12.0, 12.01, 20.0, 47.0] {
            let w = bessel_j1(x) * bessel_y0(x).unwrap() - bessel_j0(x) * bessel_y1(x).unwrap();
            assert!((w - 2.0 / (PI * x)).abs() <= 1e-10, "x={x} w={w}");
        }
        let w1 = bessel_j1(1.0) * bessel_y0(1.0).unwrap() - bessel_j0(1.0) * bessel_y1(1.0).unwrap();
        assert!((w1 - 2.0 / PI).abs() <= 1e-10);
    }

    #[test]
    fn y_reference_values() {
        // Tabulated: Y₀(1) = 0.08825696421567696, Y₁(1) = −0.7812128213002887
        assert!((bessel_y0(1.0).unwrap() - 0.088_256_964_215_676_96).abs() < 1e-14);
        assert!((bessel_y1(1.0).unwrap() + 0.781_212_821_300_288_7).abs() < 1e-14);
        assert!(bessel_y0(0.0).is_err());
        assert!(bessel_y1(-1.0).is_err());
    }

    #[test]
    fn branch_switch_is_continuous() {
        let a = SERIES_SWITCHOVER - 1e-9;
        let b = SERIES_SWITCHOVER;
        assert!((j_series(0, b) - asym_j(0, b)).abs() < 2e-12);
        assert!((j_series(1, b) - asym_j(1, b)).abs() < 2e-12);
        // just below the switch the series branch is used; compare it with
        // the asymptotic branch at the same argument
        assert!((bessel_y0(a).unwrap() - asym_y(0, a)).abs() < 5e-12);
        assert!((bessel_y1(a).unwrap() - asym_y(1, a)).abs() < 5e-12);
    }

    #[test]
    fn derivative_recurrence_j0_prime_is_minus_j1() {
        let h = 1e-4;
        for i in 1..200 {
            let x = i as f64 * 0.2;
            let d = (bessel_j0(x - 2.0 * h) - 8.0 * bessel_j0(x - h) + 8.0 * bessel_j0(x + h)
                - bessel_j0(x + 2.0 * h))
                / (12.0 * h);
            assert!((d + bessel_j1(x)).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn j_over_pow_matches_integral_oracle() {
        let mut buf = [0.0; 7];
        for &z in &[0.0, 0.5, 3.0, 7.9, 8.1, 15.0, 30.0] {
            bessel_j_over_pow(z, &mut buf);
            for (k, v) in buf.iter().enumerate() {
                let expect = if z == 0.0 {
                    let f: f64 = (1..=k).map(|i| 2.0 * i as f64).product();
                    1.0 / f
                } else {
                    jn_integral(k as u32, z) / libm::pow(z, k as f64)
                };
                // compare J_k itself so tiny ratios are not held to a relative bound
                let zk = libm::pow(z, k as f64).max(1e-300);
                let err = if z == 0.0 { (v - expect).abs() } else { (v - expect).abs() * zk };
                assert!(err <= 1e-13 + 1e-12 * (expect * zk).abs(), "z={z} k={k}");
            }
        }
    }

    #[test]
    fn yn_recurrence_satisfies_wronskian_family() {
        // J_{n+1}Y_n − J_n Y_{n+1} = 2/(πz)
        let z = 3.7;
        let mut y = [0.0; 5];
        bessel_yn(z, &mut y).unwrap();
        let j: Vec<f64> = (0..5).map(|n| jn_integral(n, z)).collect();
        for n in 0..4 {
            let w = j[n + 1] * y[n] - j[n] * y[n + 1];
            assert!((w - 2.0 / (PI * z)).abs() < 1e-11);
        }
    }

    #[test]
    fn scaled_i0_values() {
        assert_eq!(bessel_i0_scaled(0.0).unwrap(), 1.0);
        let approx = 1.0 / libm::sqrt(200.0 * PI) * (1.0 + 1.0 / 800.0);
        assert!((bessel_i0_scaled(100.0).unwrap() - approx).abs() < 1e-6);
        assert!(bessel_i0_scaled(-1.0).is_err());
        let big = bessel_i0_scaled(1e6).unwrap();
        assert!(big.is_finite() && big > 0.0);
        assert!((big * libm::sqrt(2.0 * PI * 1e6) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn scaled_i_continuous_across_switch() {
        let a = SCALED_I_SWITCHOVER * (1.0 - 1e-12);
        let b = SCALED_I_SWITCHOVER;
        for nu in 0..2 {
            let (va, vb) = (scaled_i(nu, a).unwrap(), scaled_i(nu, b).unwrap());
            assert!(((va - vb) / vb).abs() < 1e-10, "nu={nu} {va} {vb}");
        }
    }

    #[test]
    fn scaled_i0_monotone_decreasing() {
        let mut prev = bessel_i0_scaled(0.0).unwrap();
        let mut x = 0.05;
        while x < 2000.0 {
            let v = bessel_i0_scaled(x).unwrap();
            assert!(v < prev, "not decreasing at {x}");
            prev = v;
            x *= 1.05;
        }
    }

    #[test]
    fn scaled_i1_matches_integral() {
        // I₁(x) = (1/π) ∫₀^π e^{x cos θ} cos θ dθ
        for &x in &[0.5, 4.0, 24.0, 26.0, 60.0] {
            let m = 4000;
            let h = PI / m as f64;
            let f = |t: f64| libm::exp(x * (libm::cos(t) - 1.0)) * libm::cos(t);
            let s: f64 = (1..m).map(|i| f(i as f64 * h)).sum::<f64>() + 0.5 * (f(0.0) + f(PI));
            let oracle = s / m as f64;
            let v = bessel_i1_scaled(x).unwrap();
            assert!(((v - oracle) / oracle).abs() < 1e-10, "x={x} {v} {oracle}");
        }
    }
}
