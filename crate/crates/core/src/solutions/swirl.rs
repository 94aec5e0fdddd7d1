use alloc::sync::Arc;

use super::{
    velocity_from_pair, vorticity_from_pair, ClassTag, Domain, FlowKind, FlowSample, FlowSolution,
    Source, SymplecticPair,
};
use crate::fields::{
    DerivativeEngine, RadialField, RadialProfile, Sampled, Scalar, VectorField3, MAX_ORDER,
};
use crate::quadrature::{heat_radial, integrate, QuadOptions};
use crate::{Axis, Error, Point3, Result, Vec3};

/// Swirl about the x₃ axis: u = (A×∇)Φ(ρ) + ((A×∇)×∇)Ψ(ρ) with A = a·e₃ and
/// ρ = √(x₁²+x₂²). The azimuthal speed is aΦ'(ρ) and the axial speed is
/// −aΔ₂Ψ(ρ).
#[derive(Clone)]
pub struct Swirl2D {
    pub a: f64,
    pub phi: Arc<dyn RadialProfile>,
    pub psi: Arc<dyn RadialProfile>,
    /// Smallest admissible ρ.
    pub r_min: f64,
    /// Radius where the pressure is zero.
    pub r_ref: f64,
}

impl core::fmt::Debug for Swirl2D {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Swirl2D")
            .field("a", &self.a)
            .field("r_min", &self.r_min)
            .field("r_ref", &self.r_ref)
            .finish_non_exhaustive()
    }
}

impl Swirl2D {
    pub fn new(a: f64, phi: Arc<dyn RadialProfile>, psi: Arc<dyn RadialProfile>) -> Result<Self> {
        Axis::vertical(a)?;
        Ok(Swirl2D { a, phi, psi, r_min: 0.0, r_ref: 1.0 })
    }

    pub fn with_r_min(mut self, r_min: f64) -> Self {
        self.r_min = r_min;
        self
    }

    pub fn with_r_ref(mut self, r_ref: f64) -> Self {
        self.r_ref = r_ref;
        self
    }

    pub fn axis(&self) -> Axis {
        Axis::vertical(self.a).expect("checked at construction")
    }

    fn domain(&self) -> Domain {
        Domain { rho_min: self.r_min, ..Domain::WHOLE }
    }
}

/// P(ρ) = ∫_{r_ref}^{ρ} a²s·g₁(s)² ds where g₁ = Φ'/ρ, so that
/// P' = u_θ²/ρ balances the centripetal acceleration.
#[derive(Clone)]
pub struct SwirlPressure {
    phi: Arc<dyn RadialProfile>,
    a2: f64,
    r_ref: f64,
}

impl SwirlPressure {
    pub fn new(swirl: &Swirl2D) -> Self {
        SwirlPressure { phi: swirl.phi.clone(), a2: swirl.a * swirl.a, r_ref: swirl.r_ref }
    }
}

fn pressure_panels(r: f64, r_ref: f64) -> QuadOptions {
    let n = libm::ceil((r - r_ref).abs() / 0.25) as usize;
    QuadOptions { initial_panels: n.max(1), rel_tol: 1e-12, ..QuadOptions::default() }
}

impl RadialProfile for SwirlPressure {
    fn reduced(&self, r: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        let integrand = |s: f64| {
            let mut g = [0.0; 2];
            self.phi.reduced(s, &mut g);
            self.a2 * s * g[1] * g[1]
        };
        out[0] = integrate(&integrand, self.r_ref, r, &pressure_panels(r, self.r_ref))
            .map(|e| e.value)
            .unwrap_or(f64::NAN);
        let n = out.len();
        if n == 1 {
            return;
        }
        let mut g = [0.0; MAX_ORDER + 2];
        self.phi.reduced(r, &mut g[..n + 1]);
        // (1/r)d/dr is a derivation: gₖ(P) = a² Σ C(k−1, i) g_{1+i} g_{k−i}
        for k in 1..n {
            let mut c = 1.0;
            let mut total = 0.0;
            for i in 0..k {
                total += c * g[1 + i] * g[k - i];
                c = c * (k - 1 - i) as f64 / (i + 1) as f64;
            }
            out[k] = self.a2 * total;
        }
    }

    fn is_zero(&self) -> bool {
        self.a2 == 0.0 || self.phi.is_zero()
    }
}

/// Static swirl with analytic velocity and vorticity and quadrature
/// pressure.
pub fn swirl2d(swirl: &Swirl2D) -> FlowSolution {
    let axis = swirl.axis();
    let phi: Scalar = Arc::new(RadialField::cylindrical(swirl.phi.clone(), None));
    let psi: Scalar = Arc::new(RadialField::cylindrical(swirl.psi.clone(), None));
    let pair = SymplecticPair::new(axis, phi, psi);
    let pressure: Scalar = Arc::new(RadialField::cylindrical(Arc::new(SwirlPressure::new(swirl)), None));
    let kind = FlowKind::EulerStatic;
    FlowSolution {
        u: velocity_from_pair(&pair),
        vorticity: vorticity_from_pair(&pair),
        pressure,
        kind,
        nu: 0.0,
        class: ClassTag { family: "X2R", kind },
        domain: swirl.domain(),
        source: Source::Swirl(swirl.clone()),
        lambda: None,
        evaluator: None,
    }
}

/// Profiles after smoothing by the heat semigroup at parameter ω.
struct Smoothed {
    swirl: Swirl2D,
}

/// Kernel order and source function for each smoothed quantity.
#[derive(Clone, Copy)]
enum Quantity {
    /// Φ'(s), order 1.
    PhiSlope,
    /// Δ₂Ψ, order 0.
    PsiLap,
    /// (Δ₂Ψ)', order 1.
    PsiLapSlope,
    /// Δ₂Φ, order 0.
    PhiLap,
}

impl Smoothed {
    fn source(&self, q: Quantity, s: f64) -> f64 {
        let mut g = [0.0; 4];
        match q {
            Quantity::PhiSlope => {
                self.swirl.phi.reduced(s, &mut g[..2]);
                s * g[1]
            }
            Quantity::PhiLap => {
                self.swirl.phi.reduced(s, &mut g[..3]);
                2.0 * g[1] + s * s * g[2]
            }
            Quantity::PsiLap => {
                self.swirl.psi.reduced(s, &mut g[..3]);
                2.0 * g[1] + s * s * g[2]
            }
            Quantity::PsiLapSlope => {
                self.swirl.psi.reduced(s, &mut g);
                s * (4.0 * g[2] + s * s * g[3])
            }
        }
    }

    fn eval(&self, q: Quantity, omega: f64, r: f64) -> f64 {
        let zero = match q {
            Quantity::PhiSlope | Quantity::PhiLap => self.swirl.phi.is_zero(),
            Quantity::PsiLap | Quantity::PsiLapSlope => self.swirl.psi.is_zero(),
        };
        if zero {
            return 0.0;
        }
        if omega == 0.0 {
            return self.source(q, r);
        }
        let order = match q {
            Quantity::PhiSlope | Quantity::PsiLapSlope => 1,
            Quantity::PsiLap | Quantity::PhiLap => 0,
        };
        heat_radial(&|s| self.source(q, s), order, omega, r).unwrap_or(f64::NAN)
    }

    fn u_theta(&self, omega: f64, r: f64) -> f64 {
        self.swirl.a * self.eval(Quantity::PhiSlope, omega, r)
    }

    fn pressure(&self, omega: f64, r: f64) -> f64 {
        if self.swirl.phi.is_zero() {
            return 0.0;
        }
        let r_ref = self.swirl.r_ref;
        let integrand = |s: f64| {
            let v = self.u_theta(omega, s);
            v * v / s
        };
        integrate(&integrand, r_ref, r, &pressure_panels(r, r_ref)).map(|e| e.value).unwrap_or(f64::NAN)
    }

    fn sample(&self, omega: f64, x: Point3, with_pressure: bool) -> FlowSample {
        let a = self.swirl.a;
        let r = x.cyl_radius();
        let (c, s) = if r > 0.0 { (x[0] / r, x[1] / r) } else { (0.0, 0.0) };
        let ut = self.u_theta(omega, r);
        let uz = -a * self.eval(Quantity::PsiLap, omega, r);
        let wt = a * self.eval(Quantity::PsiLapSlope, omega, r);
        let wz = a * self.eval(Quantity::PhiLap, omega, r);
        FlowSample {
            u: Vec3::new(-s * ut, c * ut, uz),
            p: if with_pressure { self.pressure(omega, r) } else { 0.0 },
            w: Vec3::new(-s * wt, c * wt, wz),
        }
    }
}

/// How the smoothing parameter depends on time.
#[derive(Clone, Copy)]
enum Clock {
    Viscous(f64),
    Fixed(f64),
}

impl Clock {
    fn omega(self, t: f64) -> f64 {
        match self {
            Clock::Viscous(nu) => nu * t,
            Clock::Fixed(w) => w,
        }
    }
}

fn smoothed_flow(swirl: &Swirl2D, clock: Clock, kind: FlowKind, nu: f64) -> FlowSolution {
    let sm = Arc::new(Smoothed { swirl: swirl.clone() });
    let engine = DerivativeEngine::default();
    let component = |pick: fn(&FlowSample) -> f64, pressure: bool| -> Scalar {
        let sm = sm.clone();
        Arc::new(Sampled::new(move |t, x| pick(&sm.sample(clock.omega(t), x, pressure)), engine))
    };
    let u = VectorField3::new(
        component(|s| s.u[0], false),
        component(|s| s.u[1], false),
        component(|s| s.u[2], false),
    );
    let vorticity = VectorField3::new(
        component(|s| s.w[0], false),
        component(|s| s.w[1], false),
        component(|s| s.w[2], false),
    );
    let pressure = {
        let sm = sm.clone();
        Arc::new(Sampled::new(move |t, x| sm.pressure(clock.omega(t), x.cyl_radius()), engine)) as Scalar
    };
    let eval_sm = sm.clone();
    FlowSolution {
        u,
        pressure,
        vorticity,
        kind,
        nu,
        class: ClassTag { family: "X2R", kind },
        domain: swirl.domain(),
        source: Source::Swirl(swirl.clone()),
        lambda: None,
        evaluator: Some(Arc::new(move |t, x, p| eval_sm.sample(clock.omega(t), x, p))),
    }
}

/// The swirl evolved by the heat semigroup: Φ and Ψ are replaced by their
/// Gaussian averages at ω = νt. This is an exact Navier–Stokes solution.
pub fn swirl_heat(swirl: &Swirl2D, nu: f64) -> Result<FlowSolution> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain(alloc::format!("viscosity must be positive, got {nu}")));
    }
    Ok(smoothed_flow(swirl, Clock::Viscous(nu), FlowKind::Heat2d, nu))
}

/// The static swirl whose profiles are the Gaussian averages of Φ and Ψ at
/// a fixed ω > 0.
pub fn swirl_smoothed(swirl: &Swirl2D, omega: f64) -> Result<FlowSolution> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::Domain(alloc::format!("omega must be >= 0, got {omega}")));
    }
    if omega == 0.0 {
        return Ok(swirl2d(swirl));
    }
    Ok(smoothed_flow(swirl, Clock::Fixed(omega), FlowKind::EulerStatic, 0.0))
}
