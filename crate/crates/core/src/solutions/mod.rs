//! Exact solution classes: Beltrami modes of the ball, disc and annulus
//! (static Euler and decaying Navier–Stokes), and swirling flows depending
//! only on the distance to the x₃ axis, either static or evolved by the
//! heat semigroup.

mod modes;
mod swirl;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use modes::{
    combine_modes, cylinder_mode, euler_static, ns_decaying, radial_mode, BeltramiMode, ModeClass,
    ModeShape, DEFAULT_R_MIN,
};
pub use swirl::{swirl2d, swirl_heat, swirl_smoothed, Swirl2D, SwirlPressure};

use crate::fields::ops::{symplectic_curl2, symplectic_grad};
use crate::fields::{lin_comb, ops, zero, DerivativeMode, Scalar, VectorField3};
use crate::{Axis, Error, Point3, Result, Vec3};

/// The pair (φ, ψ) of the representation u = (A×∇)φ + ((A×∇)×∇)ψ.
#[derive(Clone)]
pub struct SymplecticPair {
    pub axis: Axis,
    pub phi: Scalar,
    pub psi: Scalar,
}

impl SymplecticPair {
    pub fn new(axis: Axis, phi: Scalar, psi: Scalar) -> Self {
        SymplecticPair { axis, phi, psi }
    }

    pub fn zero(axis: Axis) -> Self {
        SymplecticPair { axis, phi: zero(), psi: zero() }
    }

    pub fn mode(&self) -> DerivativeMode {
        self.phi.mode().combine(self.psi.mode())
    }
}

/// u = (A×∇)φ + ((A×∇)×∇)ψ.
pub fn velocity_from_pair(pair: &SymplecticPair) -> VectorField3 {
    symplectic_grad(pair.axis, &pair.phi).combine(1.0, &symplectic_curl2(pair.axis, &pair.psi), 1.0)
}

/// ω = −((A×∇)×∇)φ + (A×∇)Δψ, the curl of [`velocity_from_pair`].
pub fn vorticity_from_pair(pair: &SymplecticPair) -> VectorField3 {
    let lap = ops::laplacian(&pair.psi);
    symplectic_curl2(pair.axis, &pair.phi).combine(-1.0, &symplectic_grad(pair.axis, &lap), 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowKind {
    /// Time-independent solution of the Euler equations.
    EulerStatic,
    /// Beltrami mode damped by e^{−νλ²t}.
    NsDecaying,
    /// Swirl profiles evolved by the 2D heat semigroup.
    Heat2d,
}

impl FlowKind {
    pub fn name(self) -> &'static str {
        match self {
            FlowKind::EulerStatic => "euler-static",
            FlowKind::NsDecaying => "ns-decaying",
            FlowKind::Heat2d => "heat-2d",
        }
    }
}

/// Solution class label: mode family plus flow kind, e.g. `Y_NS`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassTag {
    pub family: &'static str,
    pub kind: FlowKind,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.kind {
            FlowKind::EulerStatic => "E",
            FlowKind::NsDecaying | FlowKind::Heat2d => "NS",
        };
        write!(f, "{}_{}", self.family, suffix)
    }
}

/// Points where a flow may be evaluated: |x| ≥ r_min and
/// rho_min ≤ √(x₁²+x₂²) ≤ rho_max.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub r_min: f64,
    pub rho_min: f64,
    pub rho_max: Option<f64>,
}

impl Domain {
    pub const WHOLE: Domain = Domain { r_min: 0.0, rho_min: 0.0, rho_max: None };

    pub fn contains(&self, x: Point3) -> bool {
        let rho = x.cyl_radius();
        x.is_finite()
            && x.norm() >= self.r_min
            && rho >= self.rho_min
            && self.rho_max.is_none_or(|m| rho <= m)
    }

    pub fn check(&self, x: Point3) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain(alloc::format!("point {:?} lies outside the flow domain {self:?}", x.0)))
        }
    }

    /// True when the restriction is on the distance to the x₃ axis.
    pub fn is_cylindrical(&self) -> bool {
        self.rho_min > 0.0 || self.rho_max.is_some()
    }

    pub fn intersect(&self, o: &Domain) -> Domain {
        Domain {
            r_min: self.r_min.max(o.r_min),
            rho_min: self.rho_min.max(o.rho_min),
            rho_max: match (self.rho_max, o.rho_max) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

/// Where a flow came from, kept so it can be rebuilt with other (ν, t)
/// parameters.
#[derive(Clone)]
pub enum Source {
    Zero,
    Modes(Vec<(f64, BeltramiMode)>),
    Swirl(Swirl2D),
}

/// Velocity, pressure and vorticity at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FlowSample {
    pub u: Vec3,
    pub p: f64,
    pub w: Vec3,
}

/// Pointwise evaluator; the flag asks for the pressure, which may be far
/// costlier than u and ω.
type Evaluator = Arc<dyn Fn(f64, Point3, bool) -> FlowSample + Send + Sync>;

/// A velocity field with its pressure and vorticity.
#[derive(Clone)]
pub struct FlowSolution {
    pub u: VectorField3,
    pub pressure: Scalar,
    pub vorticity: VectorField3,
    pub kind: FlowKind,
    pub nu: f64,
    pub class: ClassTag,
    pub domain: Domain,
    pub source: Source,
    /// Common Beltrami eigenvalue when the flow is a mode superposition.
    pub lambda: Option<f64>,
    evaluator: Option<Evaluator>,
}

impl FlowSolution {
    pub fn zero() -> Self {
        FlowSolution {
            u: VectorField3::zero(),
            pressure: zero(),
            vorticity: VectorField3::zero(),
            kind: FlowKind::EulerStatic,
            nu: 0.0,
            class: ClassTag { family: "0", kind: FlowKind::EulerStatic },
            domain: Domain::WHOLE,
            source: Source::Zero,
            lambda: None,
            evaluator: None,
        }
    }

    /// An arbitrary velocity and pressure, e.g. for negative controls. The
    /// vorticity is the analytic curl of u.
    pub fn custom(u: VectorField3, pressure: Scalar, kind: FlowKind, nu: f64, domain: Domain) -> Self {
        FlowSolution {
            vorticity: ops::curl(&u),
            u,
            pressure,
            kind,
            nu,
            class: ClassTag { family: "custom", kind },
            domain,
            source: Source::Zero,
            lambda: None,
            evaluator: None,
        }
    }

    /// Same flow with a different pressure field, e.g. as a negative
    /// control.
    pub fn with_pressure(&self, p: Scalar) -> FlowSolution {
        let evaluator = self.evaluator.clone().map(|e| {
            let p = p.clone();
            Arc::new(move |t: f64, x: Point3, need: bool| {
                let mut s = e(t, x, false);
                if need {
                    s.p = p.value(t, x);
                }
                s
            }) as Evaluator
        });
        FlowSolution { pressure: p, evaluator, ..self.clone() }
    }

    pub fn velocity(&self, t: f64, x: Point3) -> Vec3 {
        match &self.evaluator {
            Some(e) => e(t, x, false).u,
            None => self.u.value(t, x),
        }
    }

    pub fn pressure_at(&self, t: f64, x: Point3) -> f64 {
        match &self.evaluator {
            Some(e) => e(t, x, true).p,
            None => self.pressure.value(t, x),
        }
    }

    /// (u, P) together; cheaper than separate calls for quadrature flows.
    pub fn velocity_pressure(&self, t: f64, x: Point3) -> (Vec3, f64) {
        match &self.evaluator {
            Some(e) => {
                let s = e(t, x, true);
                (s.u, s.p)
            }
            None => (self.u.value(t, x), self.pressure.value(t, x)),
        }
    }

    pub fn vorticity_at(&self, t: f64, x: Point3) -> Vec3 {
        match &self.evaluator {
            Some(e) => e(t, x, false).w,
            None => self.vorticity.value(t, x),
        }
    }

    /// All three quantities after checking the domain.
    pub fn sample(&self, t: f64, x: Point3) -> Result<FlowSample> {
        self.domain.check(x)?;
        if self.kind == FlowKind::Heat2d && t < 0.0 {
            return Err(Error::Domain(alloc::format!("heat-evolved flow needs t >= 0, got {t}")));
        }
        Ok(match &self.evaluator {
            Some(e) => e(t, x, true),
            None => FlowSample {
                u: self.u.value(t, x),
                p: self.pressure.value(t, x),
                w: self.vorticity.value(t, x),
            },
        })
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        self.u.mode().combine(self.pressure.mode())
    }

    /// True when every field vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.pressure.is_zero()
    }
}

/// −½|u|² as a field, the Bernoulli pressure of a Beltrami flow.
fn bernoulli_pressure(u: &VectorField3) -> Scalar {
    lin_comb(alloc::vec![(-0.5, ops::dot(u, u))])
}
