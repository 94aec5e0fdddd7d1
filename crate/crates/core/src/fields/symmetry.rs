use alloc::vec::Vec;

use crate::{Axis, Error, Point3, Result, Vec3};

/// A real tensor on ℝ³ of order 1 to 4.
#[derive(Clone, Debug, PartialEq)]
pub enum Tensor {
    Vector(Vec3),
    Matrix([[f64; 3]; 3]),
    /// Dense row-major storage of 3ⁿ entries, index (i₁,…,iₙ) at
    /// Σ iₖ·3^{n−k}.
    General { order: u8, data: Vec<f64> },
}

impl Tensor {
    pub fn general(order: u8, data: Vec<f64>) -> Result<Tensor> {
        if !(1..=4).contains(&order) {
            return Err(Error::InvalidParameter(alloc::format!(
                "tensor order must be 1..=4, got {order}"
            )));
        }
        if data.len() != 3usize.pow(order as u32) {
            return Err(Error::InvalidParameter(alloc::format!(
                "order {order} tensor needs {} entries, got {}",
                3usize.pow(order as u32),
                data.len()
            )));
        }
        Ok(Tensor::General { order, data })
    }

    pub fn order(&self) -> u8 {
        match self {
            Tensor::Vector(_) => 1,
            Tensor::Matrix(_) => 2,
            Tensor::General { order, .. } => *order,
        }
    }

    /// T(·, ξ, …, ξ): contraction of every index but the first with ξ.
    /// For order one this is the vector itself.
    pub fn contract(&self, xi: Vec3) -> Vec3 {
        match self {
            Tensor::Vector(v) => *v,
            Tensor::Matrix(m) => Vec3(core::array::from_fn(|i| (0..3).map(|j| m[i][j] * xi[j]).sum())),
            Tensor::General { order, data } => {
                let tail = 3usize.pow(*order as u32 - 1);
                Vec3(core::array::from_fn(|i| {
                    let mut total = 0.0;
                    for idx in 0..tail {
                        let mut w = data[i * tail + idx];
                        let mut rest = idx;
                        for _ in 1..*order {
                            w *= xi[rest % 3];
                            rest /= 3;
                        }
                        total += w;
                    }
                    total
                }))
            }
        }
    }
}

/// The order-n incompressible symmetry of T at frequency ξ. Order one is
/// A×ξ; higher orders are ξ×T(·,ξ,…,ξ). The result is perpendicular to ξ.
pub fn incompressible_symmetry(t: &Tensor, xi: Point3) -> Result<Point3> {
    if xi == Vec3::ZERO || !xi.is_finite() {
        return Err(Error::InvalidPoint);
    }
    Ok(match t {
        Tensor::Vector(a) => a.cross(xi),
        _ => xi.cross(t.contract(xi)),
    })
}

/// The pair {A×ξ, (A×ξ)×ξ}, an orthogonal frame of the plane normal to ξ
/// whenever A is not parallel to ξ.
pub fn moving_frame(a: Axis, xi: Point3) -> Result<(Vec3, Vec3)> {
    if xi == Vec3::ZERO || !xi.is_finite() {
        return Err(Error::InvalidPoint);
    }
    let e1 = a.vec().cross(xi);
    if e1.norm() <= 1e-14 * a.vec().norm() * xi.norm() {
        return Err(Error::DegenerateProbe);
    }
    Ok((e1, e1.cross(xi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_one_is_cross_product() {
        let a = Tensor::Vector(Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(incompressible_symmetry(&a, Vec3::new(1.0, 0.0, 0.0)).unwrap(), Vec3::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn identity_matrix_gives_zero() {
        let m = Tensor::Matrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(incompressible_symmetry(&m, Vec3::new(0.3, -2.0, 1.1)).unwrap(), Vec3::ZERO);
    }

    #[test]
    fn order_three_contraction_vanishes() {
        let mut data = alloc::vec![0.0; 27];
        data[0] = 1.0;
        let t = Tensor::general(3, data).unwrap();
        assert_eq!(incompressible_symmetry(&t, Vec3::new(0.0, 1.0, 1.0)).unwrap(), Vec3::ZERO);
        // with ξ₁ ≠ 0 the contraction is (ξ₁², 0, 0)
        assert_eq!(t.contract(Vec3::new(2.0, 1.0, 0.0)), Vec3::new(4.0, 0.0, 0.0));
    }

    #[test]
    fn zero_frequency_is_rejected() {
        let a = Tensor::Vector(Vec3::new(0.0, 0.0, 1.0));
        assert!(matches!(incompressible_symmetry(&a, Vec3::ZERO), Err(Error::InvalidPoint)));
        assert!(Tensor::general(5, alloc::vec![0.0; 243]).is_err());
        assert!(Tensor::general(3, alloc::vec![0.0; 26]).is_err());
    }

    #[test]
    fn parallel_frame_is_degenerate() {
        let a = Axis::vertical(1.0).unwrap();
        assert!(moving_frame(a, Vec3::new(0.0, 0.0, 2.0)).is_err());
    }

    proptest! {
        #[test]
        fn symmetry_is_perpendicular(order in 1u8..=4,
                                     seed in prop::collection::vec(-3.0f64..3.0, 81),
                                     xi in prop::array::uniform3(-3.0f64..3.0)) {
            let xi = Vec3(xi);
            prop_assume!(xi.norm() > 1e-6);
            let t = match order {
                1 => Tensor::Vector(Vec3([seed[0], seed[1], seed[2]])),
                2 => Tensor::Matrix(core::array::from_fn(|i| core::array::from_fn(|j| seed[3 * i + j]))),
                n => Tensor::general(n, seed[..3usize.pow(n as u32)].to_vec()).unwrap(),
            };
            let s = incompressible_symmetry(&t, xi).unwrap();
            let scale = s.norm() * xi.norm() + 1e-300;
            prop_assert!(s.dot(xi).abs() <= 1e-13 * scale.max(1.0));
        }

        #[test]
        fn moving_frame_is_orthogonal(a in prop::array::uniform3(-3.0f64..3.0),
                                      xi in prop::array::uniform3(-3.0f64..3.0)) {
            let (a, xi) = (Vec3(a), Vec3(xi));
            prop_assume!(a.norm() > 1e-3 && xi.norm() > 1e-3 && a.cross(xi).norm() > 1e-3);
            let (e1, e2) = moving_frame(Axis::from_vec(a).unwrap(), xi).unwrap();
            let tol = 1e-12 * (e1.norm() * e2.norm() + e1.norm() * xi.norm() + e2.norm() * xi.norm());
            prop_assert!(e1.dot(e2).abs() <= tol);
            prop_assert!(e1.dot(xi).abs() <= tol);
            prop_assert!(e2.dot(xi).abs() <= tol);
        }
    }
}
