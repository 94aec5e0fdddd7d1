//! Differential operators on fields. Each returns a new field whose
//! partials are assembled from partials of its inputs.

use alloc::vec::Vec;

use super::{derivative, lin_comb, product, Partial, Scalar, VectorField3};
use crate::Axis;

/// Levi-Civita symbol εᵢⱼₖ.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn gradient(f: &Scalar) -> VectorField3 {
    VectorField3 { c: core::array::from_fn(|i| derivative(f, Partial::dx(i))) }
}

/// (A×∇)f, with components Σ εᵢⱼₖ Aⱼ ∂ₖ f.
pub fn symplectic_grad(a: Axis, f: &Scalar) -> VectorField3 {
    let a = a.vec();
    VectorField3 {
        c: core::array::from_fn(|i| {
            let mut terms = Vec::new();
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(i, j, k) * a[j];
                    if e != 0.0 {
                        terms.push((e, derivative(f, Partial::dx(k))));
                    }
                }
            }
            lin_comb(terms)
        }),
    }
}

/// Second-order coefficient matrix of ((A×∇)×∇)ᵢ, symmetrized over the
/// pair of derivative indices.
fn curl2_coefficients(a: Axis, i: usize) -> [[f64; 3]; 3] {
    let a = a.vec();
    let mut c = [[0.0; 3]; 3];
    // ((A×∇)×∇)ᵢ = Σ εᵢⱼₖ (A×∇)ⱼ ∂ₖ = Σ εᵢⱼₖ εⱼₗₘ Aₗ ∂ₘ∂ₖ
    for j in 0..3 {
        for k in 0..3 {
            let eijk = levi_civita(i, j, k);
            if eijk == 0.0 {
                continue;
            }
            for l in 0..3 {
                for m in 0..3 {
                    let w = eijk * levi_civita(j, l, m) * a[l];
                    if w != 0.0 {
                        let (p, q) = if m <= k { (m, k) } else { (k, m) };
                        c[p][q] += w;
                    }
                }
            }
        }
    }
    c
}

fn second_order_field(f: &Scalar, c: &[[f64; 3]; 3]) -> Scalar {
    let mut terms = Vec::new();
    for p in 0..3 {
        for q in p..3 {
            if c[p][q] != 0.0 {
                terms.push((c[p][q], derivative(f, Partial::dxx(p, q))));
            }
        }
    }
    lin_comb(terms)
}

/// ((A×∇)×∇)f, assembled from the double Levi-Civita product.
pub fn symplectic_curl2(a: Axis, f: &Scalar) -> VectorField3 {
    VectorField3 { c: core::array::from_fn(|i| second_order_field(f, &curl2_coefficients(a, i))) }
}

/// The same operator through the identity ∇(A·∇f) − AΔf.
pub fn symplectic_curl2_expanded(a: Axis, f: &Scalar) -> VectorField3 {
    let av = a.vec();
    VectorField3 {
        c: core::array::from_fn(|i| {
            let mut c = [[0.0; 3]; 3];
            for (j, &aj) in av.0.iter().enumerate() {
                let (p, q) = if i <= j { (i, j) } else { (j, i) };
                c[p][q] += aj;
                c[j][j] -= av[i];
            }
            second_order_field(f, &c)
        }),
    }
}

pub fn divergence(u: &VectorField3) -> Scalar {
    lin_comb((0..3).map(|i| (1.0, derivative(&u.c[i], Partial::dx(i)))).collect())
}

pub fn curl(u: &VectorField3) -> VectorField3 {
    VectorField3 {
        c: core::array::from_fn(|i| {
            let mut terms = Vec::new();
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(i, j, k);
                    if e != 0.0 {
                        terms.push((e, derivative(&u.c[k], Partial::dx(j))));
                    }
                }
            }
            lin_comb(terms)
        }),
    }
}

pub fn laplacian(f: &Scalar) -> Scalar {
    lin_comb((0..3).map(|i| (1.0, derivative(f, Partial::dxx(i, i)))).collect())
}

pub fn vector_laplacian(u: &VectorField3) -> VectorField3 {
    VectorField3 { c: core::array::from_fn(|i| laplacian(&u.c[i])) }
}

pub fn time_derivative(u: &VectorField3) -> VectorField3 {
    VectorField3 { c: core::array::from_fn(|i| derivative(&u.c[i], Partial::T)) }
}

/// (u·∇)v, with components Σⱼ uⱼ ∂ⱼ vᵢ.
pub fn advect(u: &VectorField3, v: &VectorField3) -> VectorField3 {
    VectorField3 {
        c: core::array::from_fn(|i| {
            lin_comb((0..3).map(|j| (1.0, product(&u.c[j], &derivative(&v.c[i], Partial::dx(j))))).collect())
        }),
    }
}

pub fn dot(u: &VectorField3, v: &VectorField3) -> Scalar {
    lin_comb((0..3).map(|i| (1.0, product(&u.c[i], &v.c[i]))).collect())
}

/// (A×∇)·v = Σ εᵢⱼₖ Aⱼ ∂ₖ vᵢ.
pub fn symplectic_div(a: Axis, v: &VectorField3) -> Scalar {
    let av = a.vec();
    let mut terms = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k) * av[j];
                if e != 0.0 {
                    terms.push((e, derivative(&v.c[i], Partial::dx(k))));
                }
            }
        }
    }
    lin_comb(terms)
}

/// ((A·A)Δ − (A·∇)²)f.
pub fn directional_second(a: Axis, f: &Scalar) -> Scalar {
    let av = a.vec();
    let mut c = [[0.0; 3]; 3];
    for p in 0..3 {
        c[p][p] += a.norm_sq();
        for q in 0..3 {
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            c[lo][hi] -= av[p] * av[q];
        }
    }
    second_order_field(f, &c)
}

/// A·v as a scalar field.
pub fn axis_dot(a: Axis, v: &VectorField3) -> Scalar {
    let av = a.vec();
    lin_comb((0..3).map(|i| (av[i], v.c[i].clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{DerivativeEngine, Polynomial, RadialField, Sampled, SinCosOverR};
    use crate::{Point3, Vec3};
    use alloc::sync::Arc;
    use proptest::prelude::*;

    fn cubic(c: &[f64]) -> Scalar {
        let mut terms = alloc::vec::Vec::new();
        let mut n = 0;
        for a in 0..=3u8 {
            for b in 0..=(3 - a) {
                for d in 0..=(3 - a - b) {
                    terms.push((c[n % c.len()], [a, b, d]));
                    n += 1;
                }
            }
        }
        Arc::new(Polynomial::new(terms))
    }

    #[test]
    fn vertical_axis_on_quadratic() {
        // A = (0,0,1), f = x₁²: (A×∇)f = (0, 2x₁, 0)
        let a = Axis::vertical(1.0).unwrap();
        let f: Scalar = Arc::new(Polynomial::new(alloc::vec![(1.0, [2, 0, 0])]));
        let v = symplectic_grad(a, &f).value(0.0, Point3::new(1.5, 0.3, -2.0));
        assert_eq!(v, Vec3::new(0.0, 3.0, 0.0));
    }

    #[test]
    fn curl2_of_linear_field_vanishes() {
        let a = Axis::new(0.3, -1.0, 2.0).unwrap();
        let f: Scalar = Arc::new(Polynomial::new(alloc::vec![(1.0, [1, 0, 0]), (2.0, [0, 0, 1])]));
        assert_eq!(symplectic_curl2(a, &f).value(0.0, Point3::new(1.0, 2.0, 3.0)), Vec3::ZERO);
    }

    #[test]
    fn curl2_of_radial_field() {
        // A = e₃, f = r²: ((A×∇)×∇)f = ∇(∂₃f) − e₃Δf = (0, 0, 2 − 6)
        let a = Axis::vertical(1.0).unwrap();
        let f: Scalar = Arc::new(Polynomial::new(alloc::vec![(1.0, [2, 0, 0]), (1.0, [0, 2, 0]), (1.0, [0, 0, 2])]));
        let v = symplectic_curl2(a, &f).value(0.0, Point3::new(0.1, 0.2, 0.3));
        assert_eq!(v, Vec3::new(0.0, 0.0, -4.0));
    }

    #[test]
    fn fd_agrees_with_analytic_operators() {
        let a = Axis::new(0.6, 0.2, -0.9).unwrap();
        let f: Scalar = Arc::new(RadialField::spherical(Arc::new(SinCosOverR { lambda: 1.3, alpha: 1.0, beta: 0.0 })));
        let g = f.clone();
        let s: Scalar = Arc::new(Sampled::new(move |t, x| g.value(t, x), DerivativeEngine::default()));
        let x = Point3::new(0.4, 0.9, -0.3);
        let exact = symplectic_curl2(a, &f).value(0.0, x);
        let approx = symplectic_curl2(a, &s).value(0.0, x);
        assert!((exact - approx).max_abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn curl2_routes_agree(c in prop::collection::vec(-2.0f64..2.0, 20),
                              a in prop::array::uniform3(-2.0f64..2.0),
                              x in prop::array::uniform3(-2.0f64..2.0)) {
            prop_assume!(Vec3(a).norm() > 1e-3);
            let axis = Axis::from_vec(Vec3(a)).unwrap();
            let f = cubic(&c);
            let p = Vec3(x);
            let u = symplectic_curl2(axis, &f).value(0.0, p);
            let v = symplectic_curl2_expanded(axis, &f).value(0.0, p);
            prop_assert!((u - v).max_abs() <= 1e-10 * (1.0 + u.max_abs()));
        }

        #[test]
        fn curl_of_symplectic_grad_is_curl2(c in prop::collection::vec(-2.0f64..2.0, 20),
                                            a in prop::array::uniform3(-2.0f64..2.0),
                                            x in prop::array::uniform3(-2.0f64..2.0)) {
            // ∇×((A×∇)f) = −((A×∇)×∇)f
            prop_assume!(Vec3(a).norm() > 1e-3);
            let axis = Axis::from_vec(Vec3(a)).unwrap();
            let f = cubic(&c);
            let p = Vec3(x);
            let lhs = curl(&symplectic_grad(axis, &f)).value(0.0, p);
            let rhs = symplectic_curl2(axis, &f).value(0.0, p);
            prop_assert!((lhs + rhs).max_abs() <= 1e-10 * (1.0 + rhs.max_abs()));
        }

        #[test]
        fn representation_is_divergence_free(c in prop::collection::vec(-2.0f64..2.0, 20),
                                             d in prop::collection::vec(-2.0f64..2.0, 20),
                                             a in prop::array::uniform3(-2.0f64..2.0),
                                             x in prop::array::uniform3(-2.0f64..2.0)) {
            prop_assume!(Vec3(a).norm() > 1e-3);
            let axis = Axis::from_vec(Vec3(a)).unwrap();
            let u = symplectic_grad(axis, &cubic(&c)).combine(1.0, &symplectic_curl2(axis, &cubic(&d)), 1.0);
            let div = divergence(&u).value(0.0, Vec3(x));
            prop_assert!(div.abs() <= 1e-10);
        }

        #[test]
        fn symplectic_grad_is_perpendicular(c in prop::collection::vec(-2.0f64..2.0, 20),
                                            a in prop::array::uniform3(-2.0f64..2.0),
                                            x in prop::array::uniform3(-2.0f64..2.0)) {
            prop_assume!(Vec3(a).norm() > 1e-3);
            let axis = Axis::from_vec(Vec3(a)).unwrap();
            let f = cubic(&c);
            let p = Vec3(x);
            let v = symplectic_grad(axis, &f).value(0.0, p);
            let g = gradient(&f).value(0.0, p);
            let scale = axis.vec().norm() * g.norm() * g.norm() + 1.0;
            prop_assert!(v.dot(axis.vec()).abs() <= 1e-12 * scale);
            prop_assert!(v.dot(g).abs() <= 1e-12 * scale);
        }
    }
}
