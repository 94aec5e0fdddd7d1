use alloc::boxed::Box;

use super::{DerivativeMode, Partial, ScalarField};
use crate::{Point3, Vec3};

/// Central difference stencil family. Orders above two are built by nesting
/// first- and second-order stencils.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    /// Three points, error O(h²).
    Central3,
    /// Five points, error O(h⁴).
    Central5,
}

impl Stencil {
    fn accuracy(self) -> i32 {
        match self {
            Stencil::Central3 => 2,
            Stencil::Central5 => 4,
        }
    }

    /// (offsets in units of h, weights) for a first or second derivative.
    fn weights(self, order: u8) -> (&'static [f64], &'static [f64]) {
        match (self, order) {
            (Stencil::Central3, 1) => (&[-1.0, 1.0], &[-0.5, 0.5]),
            (Stencil::Central3, _) => (&[-1.0, 0.0, 1.0], &[1.0, -2.0, 1.0]),
            (Stencil::Central5, 1) => {
                (&[-2.0, -1.0, 1.0, 2.0], &[1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0])
            }
            (Stencil::Central5, _) => (
                &[-2.0, -1.0, 0.0, 1.0, 2.0],
                &[-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
            ),
        }
    }
}

/// Values the stencil can combine linearly.
pub trait FdValue: Copy {
    const ZERO: Self;
    fn axpy(self, a: f64, x: Self) -> Self;
}

impl FdValue for f64 {
    const ZERO: f64 = 0.0;
    fn axpy(self, a: f64, x: f64) -> f64 {
        self + a * x
    }
}

impl FdValue for Vec3 {
    const ZERO: Vec3 = Vec3::ZERO;
    fn axpy(self, a: f64, x: Vec3) -> Vec3 {
        self + x * a
    }
}

/// Finite-difference differentiation of arbitrary callables.
///
/// `h` is the base step for first derivatives; higher orders use a larger
/// step to keep round-off in check. `richardson` extra levels of step
/// halving are combined by Richardson extrapolation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeEngine {
    pub h: f64,
    pub richardson: u32,
    pub stencil: Stencil,
}

impl Default for DerivativeEngine {
    fn default() -> Self {
        DerivativeEngine { h: 1e-3, richardson: 1, stencil: Stencil::Central5 }
    }
}

/// Step multiplier by total derivative order; round-off grows like ε/hⁿ so
/// the step has to grow with the order.
const STEP_GROWTH: [f64; 11] = [1.0, 1.0, 15.0, 20.0, 40.0, 50.0, 80.0, 100.0, 120.0, 140.0, 160.0];

const MAX_CHUNKS: usize = 12;

impl DerivativeEngine {
    pub fn new(h: f64, richardson: u32, stencil: Stencil) -> crate::Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(crate::Error::InvalidParameter(alloc::format!("step h must be positive, got {h}")));
        }
        Ok(DerivativeEngine { h, richardson, stencil })
    }

    /// Same engine with the base step multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Self {
        DerivativeEngine { h: self.h * scale, ..*self }
    }

    pub fn step_for(&self, d: Partial) -> f64 {
        let n = d.total_order();
        self.h * STEP_GROWTH[n.min(STEP_GROWTH.len() - 1)]
    }

    /// ∂^d f at (t, x) by tensor-product central stencils.
    pub fn partial<V: FdValue>(&self, f: &dyn Fn(f64, Point3) -> V, d: Partial, t: f64, x: Point3) -> V {
        if d == Partial::ZERO {
            return f(t, x);
        }
        let mut chunks = [(0usize, 0u8); MAX_CHUNKS];
        let n = chunk_list(d, &mut chunks);
        let h = self.step_for(d);
        self.extrapolate(h, |h| apply(self.stencil, &chunks[..n], f, t, x, h))
    }

    /// ∂f/∂t with a one-sided forward stencil, for fields that only exist
    /// for t ≥ t₀.
    pub fn forward_time<V: FdValue>(&self, f: &dyn Fn(f64) -> V, t: f64) -> V {
        const W: [f64; 5] = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25];
        let one_sided = |h: f64| {
            let mut acc = V::ZERO;
            for (i, w) in W.iter().enumerate() {
                acc = acc.axpy(*w / h, f(t + i as f64 * h));
            }
            acc
        };
        let mut levels = [V::ZERO; 8];
        let depth = (self.richardson as usize).min(7);
        let mut h = self.h;
        for slot in levels.iter_mut().take(depth + 1) {
            *slot = one_sided(h);
            h *= 0.5;
        }
        // one-sided error series runs h⁴, h⁵, ...
        richardson_table(&mut levels[..=depth], 4, 1)
    }

    pub fn derivative(&self, f: impl Fn(f64) -> f64, x: f64, order: u8) -> f64 {
        let g = |_t: f64, p: Point3| f(p[0]);
        self.partial(&g, Partial::spatial([order, 0, 0]), 0.0, Vec3::new(x, 0.0, 0.0))
    }

    pub fn gradient(&self, f: &dyn Fn(Point3) -> f64, x: Point3) -> Vec3 {
        let g = |_t: f64, p: Point3| f(p);
        Vec3(core::array::from_fn(|i| self.partial(&g, Partial::dx(i), 0.0, x)))
    }

    /// `J[j] = ∂ⱼ f` for a vector-valued f.
    pub fn jacobian(&self, f: &dyn Fn(Point3) -> Vec3, x: Point3) -> [Vec3; 3] {
        let g = |_t: f64, p: Point3| f(p);
        core::array::from_fn(|j| self.partial(&g, Partial::dx(j), 0.0, x))
    }

    pub fn laplacian<V: FdValue>(&self, f: &dyn Fn(Point3) -> V, x: Point3) -> V {
        let g = |_t: f64, p: Point3| f(p);
        let mut acc = V::ZERO;
        for i in 0..3 {
            acc = acc.axpy(1.0, self.partial(&g, Partial::dxx(i, i), 0.0, x));
        }
        acc
    }

    fn extrapolate<V: FdValue>(&self, h: f64, eval: impl Fn(f64) -> V) -> V {
        let depth = (self.richardson as usize).min(7);
        let mut levels = [V::ZERO; 8];
        let mut step = h;
        for slot in levels.iter_mut().take(depth + 1) {
            *slot = eval(step);
            step *= 0.5;
        }
        richardson_table(&mut levels[..=depth], self.stencil.accuracy(), 2)
    }
}

/// In-place Richardson tableau for step halving with leading error order
/// `p` and order increments of `inc`.
fn richardson_table<V: FdValue>(levels: &mut [V], p: i32, inc: i32) -> V {
    let n = levels.len();
    for col in 1..n {
        let factor = libm::pow(2.0, (p + inc * (col as i32 - 1)) as f64);
        for i in (col..n).rev() {
            // (factor·D(h/2) − D(h)) / (factor − 1)
            let fine = levels[i];
            let coarse = levels[i - 1];
            levels[i] = V::ZERO.axpy(factor / (factor - 1.0), fine).axpy(-1.0 / (factor - 1.0), coarse);
        }
    }
    levels[n - 1]
}

/// Splits each axis order into stencils of order 2 and at most one of
/// order 1. Axis 0 is time, 1..=3 are x₁..x₃.
fn chunk_list(d: Partial, out: &mut [(usize, u8); MAX_CHUNKS]) -> usize {
    let mut n = 0;
    let orders = [d.t, d.x[0], d.x[1], d.x[2]];
    for (axis, &ord) in orders.iter().enumerate() {
        let mut left = ord;
        while left > 0 {
            let take = if left >= 2 { 2 } else { 1 };
            assert!(n < MAX_CHUNKS, "finite-difference order too high: {d:?}");
            out[n] = (axis, take);
            n += 1;
            left -= take;
        }
    }
    n
}

fn apply<V: FdValue>(
    stencil: Stencil,
    chunks: &[(usize, u8)],
    f: &dyn Fn(f64, Point3) -> V,
    t: f64,
    x: Point3,
    h: f64,
) -> V {
    let Some((&(axis, order), rest)) = chunks.split_first() else {
        return f(t, x);
    };
    let (offsets, weights) = stencil.weights(order);
    let scale = if order == 1 { 1.0 / h } else { 1.0 / (h * h) };
    let at = |o: f64| {
        let (mut tt, mut xx) = (t, x);
        if axis == 0 {
            tt += o * h;
        } else {
            xx[axis - 1] += o * h;
        }
        apply(stencil, rest, f, tt, xx, h)
    };
    let mut acc = V::ZERO;
    if order == 1 {
        // antisymmetric pairs, so constants differentiate to exactly zero
        let n = offsets.len();
        for i in n / 2..n {
            let o = offsets[i];
            acc = acc.axpy(weights[i] * scale, at(o).axpy(-1.0, at(-o)));
        }
    } else {
        for (o, w) in offsets.iter().zip(weights) {
            acc = acc.axpy(w * scale, at(*o));
        }
    }
    acc
}

type SampledFn = dyn Fn(f64, Point3) -> f64 + Send + Sync;

/// A field known only through point values. All partials are finite
/// differences.
pub struct Sampled {
    f: Box<SampledFn>,
    engine: DerivativeEngine,
}

impl Sampled {
    pub fn new(f: impl Fn(f64, Point3) -> f64 + Send + Sync + 'static, engine: DerivativeEngine) -> Self {
        Sampled { f: Box::new(f), engine }
    }
}

impl ScalarField for Sampled {
    fn partial(&self, d: Partial, t: f64, x: Point3) -> f64 {
        self.engine.partial(&|t, x| (self.f)(t, x), d, t, x)
    }

    fn mode(&self) -> DerivativeMode {
        DerivativeMode::FiniteDifference
    }
}
