use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{DerivativeMode, Partial, Scalar, ScalarField};
use crate::Point3;

/// A field that is constant in space and time.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn partial(&self, d: Partial, _t: f64, _x: Point3) -> f64 {
        if d == Partial::ZERO {
            self.0
        } else {
            0.0
        }
    }

    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

pub fn constant(c: f64) -> Scalar {
    Arc::new(Constant(c))
}

pub fn zero() -> Scalar {
    constant(0.0)
}

struct Shifted {
    f: Scalar,
    by: Partial,
}

impl ScalarField for Shifted {
    fn partial(&self, d: Partial, t: f64, x: Point3) -> f64 {
        self.f.partial(d + self.by, t, x)
    }

    fn mode(&self) -> DerivativeMode {
        self.f.mode()
    }
}

/// The field ∂^d f.
pub fn derivative(f: &Scalar, by: Partial) -> Scalar {
    if f.is_zero() {
        return zero();
    }
    if by == Partial::ZERO {
        return f.clone();
    }
    Arc::new(Shifted { f: f.clone(), by })
}

/// Σ cₖ fₖ.
pub struct LinComb {
    terms: Vec<(f64, Scalar)>,
}

impl ScalarField for LinComb {
    fn partial(&self, d: Partial, t: f64, x: Point3) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.partial(d, t, x)).sum()
    }

    fn mode(&self) -> DerivativeMode {
        self.terms.iter().fold(DerivativeMode::Analytic, |m, (_, f)| m.combine(f.mode()))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Builds Σ cₖ fₖ, dropping zero coefficients and zero fields.
pub fn lin_comb(terms: Vec<(f64, Scalar)>) -> Scalar {
    let terms: Vec<_> = terms.into_iter().filter(|(c, f)| *c != 0.0 && !f.is_zero()).collect();
    match terms.len() {
        0 => zero(),
        1 if terms[0].0 == 1.0 => terms[0].1.clone(),
        _ => Arc::new(LinComb { terms }),
    }
}

pub fn sum(fields: impl IntoIterator<Item = Scalar>) -> Scalar {
    lin_comb(fields.into_iter().map(|f| (1.0, f)).collect())
}

/// Pointwise product a·b with derivatives from the Leibniz rule.
pub struct Product {
    a: Scalar,
    b: Scalar,
}

fn binomial(n: u8, k: u8) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

impl ScalarField for Product {
    fn partial(&self, d: Partial, t: f64, x: Point3) -> f64 {
        if d == Partial::ZERO {
            return self.a.value(t, x) * self.b.value(t, x);
        }
        let mut total = 0.0;
        for gt in 0..=d.t {
            for g0 in 0..=d.x[0] {
                for g1 in 0..=d.x[1] {
                    for g2 in 0..=d.x[2] {
                        let g = Partial { t: gt, x: [g0, g1, g2] };
                        let rest = Partial {
                            t: d.t - gt,
                            x: [d.x[0] - g0, d.x[1] - g1, d.x[2] - g2],
                        };
                        let c = binomial(d.t, gt)
                            * binomial(d.x[0], g0)
                            * binomial(d.x[1], g1)
                            * binomial(d.x[2], g2);
                        total += c * self.a.partial(g, t, x) * self.b.partial(rest, t, x);
                    }
                }
            }
        }
        total
    }

    fn mode(&self) -> DerivativeMode {
        self.a.mode().combine(self.b.mode())
    }
}

pub fn product(a: &Scalar, b: &Scalar) -> Scalar {
    if a.is_zero() || b.is_zero() {
        return zero();
    }
    Arc::new(Product { a: a.clone(), b: b.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Polynomial;

    #[test]
    fn leibniz_on_polynomials() {
        // a = x₁² x₂, b = x₁ + x₃²; ab = x₁³x₂ + x₁²x₂x₃²
        let a: Scalar = Arc::new(Polynomial::new(alloc::vec![(1.0, [2, 1, 0])]));
        let b: Scalar = Arc::new(Polynomial::new(alloc::vec![(1.0, [1, 0, 0]), (1.0, [0, 0, 2])]));
        let ab = product(&a, &b);
        let direct = Polynomial::new(alloc::vec![(1.0, [3, 1, 0]), (1.0, [2, 1, 2])]);
        let p = Point3::new(0.7, -1.3, 0.4);
        for d in [[1, 0, 0], [2, 1, 0], [1, 1, 2], [0, 0, 1], [3, 1, 2]] {
            let d = Partial::spatial(d);
            assert!((ab.partial(d, 0.0, p) - direct.partial(d, 0.0, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn lin_comb_simplifies() {
        assert!(lin_comb(alloc::vec![(0.0, constant(2.0))]).is_zero());
        assert!(lin_comb(alloc::vec![(3.0, zero())]).is_zero());
        let c = lin_comb(alloc::vec![(2.0, constant(2.0)), (1.0, constant(-1.0))]);
        assert_eq!(c.value(0.0, Point3::ZERO), 3.0);
    }
}
