//! Scalar and vector fields on ℝ × ℝ³ with a uniform derivative contract.
//!
//! Every field answers `partial(d, t, x)` for a multi-index `d` in
//! (t, x₁, x₂, x₃). Closed-form fields implement it analytically; sampled
//! fields fall back to the finite-difference [`DerivativeEngine`]. The
//! differential operators in [`ops`] build new fields from old ones without
//! evaluating anything, so derivatives of derived fields stay analytic
//! whenever their inputs are.

mod expr;
mod fd;
pub mod ops;
mod polynomial;
mod radial;
mod symmetry;

use alloc::sync::Arc;
use core::ops::Add;

pub use expr::{constant, derivative, lin_comb, product, sum, zero, Constant, LinComb, Product};
pub use fd::{DerivativeEngine, Sampled, Stencil};
pub use polynomial::Polynomial;
pub use radial::{
    radial_jet2, AxialFactor, BesselCombo, GaussPoly, Geometry, IntegratedGaussian, Jet2,
    RadialField, RadialProfile, SinCosOverR,
};
pub use symmetry::{incompressible_symmetry, moving_frame, Tensor};

use crate::{Point3, Vec3};

/// Highest total spatial order any analytic field is asked for.
pub const MAX_ORDER: usize = 10;

/// Multi-index of a partial derivative: `t` time derivatives and `x[i]`
/// derivatives along xᵢ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Partial {
    pub t: u8,
    pub x: [u8; 3],
}

impl Partial {
    pub const ZERO: Partial = Partial { t: 0, x: [0; 3] };
    pub const T: Partial = Partial { t: 1, x: [0; 3] };

    /// ∂/∂xᵢ
    pub const fn dx(i: usize) -> Partial {
        let mut x = [0; 3];
        x[i] = 1;
        Partial { t: 0, x }
    }

    /// ∂²/∂xᵢ∂xⱼ
    pub fn dxx(i: usize, j: usize) -> Partial {
        Partial::dx(i) + Partial::dx(j)
    }

    pub const fn spatial(x: [u8; 3]) -> Partial {
        Partial { t: 0, x }
    }

    pub fn spatial_order(self) -> usize {
        self.x.iter().map(|&v| v as usize).sum()
    }

    pub fn total_order(self) -> usize {
        self.spatial_order() + self.t as usize
    }
}

impl Add for Partial {
    type Output = Partial;
    fn add(self, o: Partial) -> Partial {
        Partial {
            t: self.t + o.t,
            x: [self.x[0] + o.x[0], self.x[1] + o.x[1], self.x[2] + o.x[2]],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

impl DerivativeMode {
    pub fn combine(self, o: DerivativeMode) -> DerivativeMode {
        if self == DerivativeMode::Analytic && o == DerivativeMode::Analytic {
            DerivativeMode::Analytic
        } else {
            DerivativeMode::FiniteDifference
        }
    }
}

/// A time-dependent scalar field. Implementations are immutable and may be
/// evaluated from any thread.
pub trait ScalarField: Send + Sync {
    fn partial(&self, d: Partial, t: f64, x: Point3) -> f64;

    fn value(&self, t: f64, x: Point3) -> f64 {
        self.partial(Partial::ZERO, t, x)
    }

    fn dt(&self, t: f64, x: Point3) -> f64 {
        self.partial(Partial::T, t, x)
    }

    fn mode(&self) -> DerivativeMode {
        DerivativeMode::Analytic
    }

    /// True when the field is known to vanish identically.
    fn is_zero(&self) -> bool {
        false
    }
}

pub type Scalar = Arc<dyn ScalarField>;

/// Three scalar components sharing the scalar derivative contract.
#[derive(Clone)]
pub struct VectorField3 {
    pub c: [Scalar; 3],
}

impl VectorField3 {
    pub fn new(c1: Scalar, c2: Scalar, c3: Scalar) -> Self {
        VectorField3 { c: [c1, c2, c3] }
    }

    pub fn zero() -> Self {
        VectorField3::new(zero(), zero(), zero())
    }

    pub fn value(&self, t: f64, x: Point3) -> Vec3 {
        Vec3([self.c[0].value(t, x), self.c[1].value(t, x), self.c[2].value(t, x)])
    }

    pub fn partial(&self, d: Partial, t: f64, x: Point3) -> Vec3 {
        Vec3([
            self.c[0].partial(d, t, x),
            self.c[1].partial(d, t, x),
            self.c[2].partial(d, t, x),
        ])
    }

    pub fn mode(&self) -> DerivativeMode {
        self.c.iter().fold(DerivativeMode::Analytic, |m, c| m.combine(c.mode()))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    /// Componentwise linear combination `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &VectorField3, b: f64) -> VectorField3 {
        VectorField3 {
            c: core::array::from_fn(|i| {
                lin_comb(alloc::vec![(a, self.c[i].clone()), (b, other.c[i].clone())])
            }),
        }
    }

    pub fn scaled(&self, a: f64) -> VectorField3 {
        VectorField3 { c: core::array::from_fn(|i| lin_comb(alloc::vec![(a, self.c[i].clone())])) }
    }
}
