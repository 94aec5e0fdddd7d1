use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::{Error, Result};

/// A 3-vector of reals, used both for positions and for field values.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3(pub [f64; 3]);

/// Position in ℝ³.
pub type Point3 = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Vec3([x1, x2, x3])
    }

    pub fn e(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Distance from the x₃ axis.
    pub fn cyl_radius(self) -> f64 {
        libm::hypot(self.0[0], self.0[1])
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// The constant vector `A ∈ ℝ³ − {0}` generating the symplectic frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis(Vec3);

impl Axis {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        Self::from_vec(Vec3::new(a1, a2, a3))
    }

    pub fn from_vec(v: Vec3) -> Result<Self> {
        if !v.is_finite() || v.0.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidAxis);
        }
        Ok(Axis(v))
    }

    /// `a·e₃`, the axis used by the cylindrical families.
    pub fn vertical(a: f64) -> Result<Self> {
        Self::new(0.0, 0.0, a)
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    pub fn norm_sq(self) -> f64 {
        self.0.dot(self.0)
    }
}
