use alloc::vec::Vec;

use crate::{Error, Result};

const MAX_ITERATIONS: usize = 200;

/// An interval on which a continuous function changes sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    /// Evaluates `f` at both ends and checks the sign change. An endpoint
    /// where `f` is exactly zero counts as a sign change.
    pub fn new(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Bracket { lo, hi });
        }
        let b = RootBracket { lo, hi, f_lo: f(lo), f_hi: f(hi) };
        if b.has_sign_change() {
            Ok(b)
        } else {
            Err(Error::Bracket { lo, hi })
        }
    }

    pub fn has_sign_change(&self) -> bool {
        self.f_lo * self.f_hi <= 0.0 && !(self.f_lo.is_nan() || self.f_hi.is_nan())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Brent's method: inverse quadratic / secant steps guarded by bisection,
/// so convergence is guaranteed once the sign change holds.
///
/// Stops when the bracket is narrower than `tol` (floored at a few ulps of
/// the root) or `f` hits zero exactly.
pub fn find_root(f: impl Fn(f64) -> f64, bracket: &RootBracket, tol: f64) -> Result<f64> {
    if !(bracket.lo < bracket.hi) || !bracket.has_sign_change() {
        return Err(Error::Bracket { lo: bracket.lo, hi: bracket.hi });
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITERATIONS {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::Convergence { iterations: MAX_ITERATIONS, estimate: b })
}

/// Samples `f` on `lo, lo+step, …, hi` and returns every interval where the
/// sign changes, in increasing order.
pub fn scan_brackets(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> Vec<RootBracket> {
    let mut out = Vec::new();
    if !(step > 0.0) || !(lo < hi) {
        return out;
    }
    let n = libm::ceil((hi - lo) / step) as usize;
    let mut x0 = lo;
    let mut f0 = f(x0);
    if f0 == 0.0 {
        let x1 = (lo + step).min(hi);
        out.push(RootBracket { lo: x0, hi: x1, f_lo: f0, f_hi: f(x1) });
    }
    for i in 1..=n {
        let x1 = if i == n { hi } else { lo + i as f64 * step };
        let f1 = f(x1);
        if (f0 < 0.0 && f1 >= 0.0) || (f0 > 0.0 && f1 <= 0.0) {
            out.push(RootBracket { lo: x0, hi: x1, f_lo: f0, f_hi: f1 });
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_j0, bessel_j1};
    use core::f64::consts::{PI, SQRT_2};

    #[test]
    fn sqrt_two() {
        let f = |x: f64| x * x - 2.0;
        let b = RootBracket::new(f, 1.0, 2.0).unwrap();
        let r = find_root(f, &b, 1e-14).unwrap();
        assert!((r - SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn sine_root_is_pi() {
        let b = RootBracket::new(libm::sin, 3.0, 4.0).unwrap();
        assert!((find_root(libm::sin, &b, 1e-15).unwrap() - PI).abs() < 1e-15);
    }

    /// Plain bisection, used as the oracle for the J₀ zero.
    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let fa0 = f(a);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            if (f(m) > 0.0) == (fa0 > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn first_zero_of_j0() {
        let b = RootBracket::new(bessel_j0, 2.0, 3.0).unwrap();
        let r = find_root(bessel_j0, &b, 1e-15).unwrap();
        let oracle = bisect(bessel_j0, 2.0, 3.0);
        assert!((r - oracle).abs() < 1e-13);
        assert!((r - 2.404_825_557_695_773).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        assert!(RootBracket::new(|x| x * x + 1.0, -1.0, 1.0).is_err());
        assert!(RootBracket::new(|x| x, 1.0, 1.0).is_err());
        let fake = RootBracket { lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 1.0 };
        assert!(matches!(find_root(|x| x, &fake, 1e-12), Err(Error::Bracket { .. })));
    }

    #[test]
    fn scan_sine() {
        let bs = scan_brackets(libm::sin, 1.0, 10.0, 0.1);
        assert_eq!(bs.len(), 3);
        for (b, k) in bs.iter().zip(1..) {
            assert!(b.lo < k as f64 * PI && k as f64 * PI <= b.hi);
        }
    }

    #[test]
    fn scan_j0_finds_five_zeros_interlaced_by_j1() {
        let bs = scan_brackets(bessel_j0, 0.5, 15.0, 0.05);
        assert_eq!(bs.len(), 5);
        let zeros: std::vec::Vec<f64> =
            bs.iter().map(|b| find_root(bessel_j0, b, 1e-14).unwrap()).collect();
        for (z, approx) in zeros.iter().zip([2.40, 5.52, 8.65, 11.79, 14.93]) {
            assert!((z - approx).abs() < 0.01);
        }
        for w in zeros.windows(2) {
            assert!(w[0] < w[1]);
            // J₁ changes sign between consecutive zeros of J₀
            assert!(!scan_brackets(bessel_j1, w[0], w[1], 0.01).is_empty());
        }
    }

    #[test]
    fn j0_zero_gaps_approach_pi() {
        let bs = scan_brackets(bessel_j0, 0.5, 20.0, 0.05);
        let zeros: std::vec::Vec<f64> =
            bs.iter().map(|b| find_root(bessel_j0, b, 1e-14).unwrap()).collect();
        assert!(zeros.len() >= 6);
        let gap5 = zeros[5] - zeros[4];
        assert!((gap5 - PI).abs() / PI < 0.02);
    }

    #[test]
    fn scan_constant_is_empty() {
        assert!(scan_brackets(|_| 1.0, 0.0, 10.0, 0.1).is_empty());
    }

    #[test]
    fn zero_on_grid_point_counted_once() {
        let bs = scan_brackets(|x| x - 1.0, 0.0, 2.0, 0.5);
        assert_eq!(bs.len(), 1);
        assert_eq!(find_root(|x| x - 1.0, &bs[0], 1e-14).unwrap(), 1.0);
    }
}
