use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{
    bernoulli_pressure, velocity_from_pair, ClassTag, Domain, FlowKind, FlowSample, FlowSolution, Source,
    SymplecticPair,
};
use crate::eigen::{EigenMode, Family, Profile};
use crate::fields::{
    lin_comb, radial_jet2, AxialFactor, Geometry, Jet2, RadialField, Scalar, SinCosOverR, VectorField3,
};
use crate::{Axis, Error, Point3, Result, Vec3};

/// Inner radius kept away from the singular profiles cos(λr)/r and Y₀.
pub const DEFAULT_R_MIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeClass {
    /// α sin(λr)/r + β cos(λr)/r with β ≠ 0, singular at the origin.
    Radial,
    /// β = 0, smooth through the origin.
    RadialSmooth,
    /// J₀ disc profile times an axial factor.
    Disc,
    /// Annulus profile times an axial factor.
    Annulus,
}

impl ModeClass {
    pub fn family(self) -> &'static str {
        match self {
            ModeClass::Radial => "X",
            ModeClass::RadialSmooth => "Xs",
            ModeClass::Disc => "Y",
            ModeClass::Annulus => "Z",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModeShape {
    /// Ψ = α sin(λr)/r + β cos(λr)/r with r = |x|.
    Radial(SinCosOverR),
    /// Ψ = W(ρ)(α sin ηx₃ + β cos ηx₃) with ρ = √(x₁²+x₂²).
    Cylinder { eigen: EigenMode, axial: AxialFactor },
}

/// A static solution Ψ of −ΔΨ = λ²Ψ together with the axis A. The flow is
/// u₀ = λ(A×∇)Ψ + ((A×∇)×∇)Ψ, so that curl u₀ = −λu₀.
#[derive(Clone, Debug, PartialEq)]
pub struct BeltramiMode {
    pub axis: Axis,
    pub lambda: f64,
    pub shape: ModeShape,
    pub class: ModeClass,
    pub domain: Domain,
}

impl BeltramiMode {
    /// Same mode with another symplectic axis.
    pub fn with_axis(mut self, axis: Axis) -> Self {
        self.axis = axis;
        self
    }

    /// Same mode with a different inner radius for singular profiles.
    pub fn with_r_min(mut self, r_min: f64) -> Self {
        match self.shape {
            ModeShape::Radial(_) => self.domain.r_min = r_min,
            ModeShape::Cylinder { .. } => self.domain.rho_min = r_min,
        }
        self
    }

    pub fn alpha(&self) -> f64 {
        match &self.shape {
            ModeShape::Radial(p) => p.alpha,
            ModeShape::Cylinder { axial, .. } => axial.alpha,
        }
    }

    pub fn beta(&self) -> f64 {
        match &self.shape {
            ModeShape::Radial(p) => p.beta,
            ModeShape::Cylinder { axial, .. } => axial.beta,
        }
    }

    /// (ξ or ζ, η) for cylinder modes.
    pub fn split(&self) -> Option<(f64, f64)> {
        match &self.shape {
            ModeShape::Radial(_) => None,
            ModeShape::Cylinder { eigen, axial } => Some((eigen.eigenvalue, axial.eta)),
        }
    }

    /// Ψ·e^{−rate·t}.
    pub fn psi_decaying(&self, rate: f64) -> Scalar {
        match &self.shape {
            ModeShape::Radial(p) => Arc::new(RadialField::spherical(Arc::new(*p)).with_decay(rate)),
            ModeShape::Cylinder { eigen, axial } => {
                let profile: Profile = eigen.profile;
                Arc::new(RadialField::cylindrical(Arc::new(profile), Some(*axial)).with_decay(rate))
            }
        }
    }

    pub fn psi(&self) -> Scalar {
        self.psi_decaying(0.0)
    }

    /// (φ, ψ) = (λΨ, Ψ)·e^{−νλ²t}.
    pub fn pair(&self, nu: f64) -> SymplecticPair {
        let psi = self.psi_decaying(nu * self.lambda * self.lambda);
        let phi = lin_comb(alloc::vec![(self.lambda, psi.clone())]);
        SymplecticPair::new(self.axis, phi, psi)
    }

    pub fn velocity(&self, nu: f64) -> VectorField3 {
        velocity_from_pair(&self.pair(nu))
    }

    /// Second-order jet of Ψ·e^{−rate·t}.
    pub fn psi_jet(&self, rate: f64, t: f64, x: Point3) -> Jet2 {
        let factor = libm::exp(-rate * t);
        match &self.shape {
            ModeShape::Radial(p) => radial_jet2(p, Geometry::Spherical, None, factor, x),
            ModeShape::Cylinder { eigen, axial } => {
                radial_jet2(&eigen.profile, Geometry::Cylindrical, Some(axial), factor, x)
            }
        }
    }

    /// u = λ(A×∇)Ψ + H·A − A tr H with H the Hessian of Ψ·e^{−νλ²t}.
    pub fn velocity_at(&self, nu: f64, t: f64, x: Point3) -> Vec3 {
        let jet = self.psi_jet(nu * self.lambda * self.lambda, t, x);
        let a = self.axis.vec();
        let h = &jet.hess;
        let trace = h[0][0] + h[1][1] + h[2][2];
        let ha = Vec3::new(
            h[0][0] * a[0] + h[0][1] * a[1] + h[0][2] * a[2],
            h[1][0] * a[0] + h[1][1] * a[1] + h[1][2] * a[2],
            h[2][0] * a[0] + h[2][1] * a[1] + h[2][2] * a[2],
        );
        a.cross(jet.grad) * self.lambda + ha - a * trace
    }
}

fn check_coefficients(alpha: f64, beta: f64) -> Result<()> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParameter("mode coefficients must be finite".into()));
    }
    if alpha == 0.0 && beta == 0.0 {
        return Err(Error::ZeroMode);
    }
    Ok(())
}

/// Ψ = α sin(λr)/r + β cos(λr)/r with axis e₃. Any real λ ≠ 0 is allowed.
pub fn radial_mode(lambda: f64, alpha: f64, beta: f64) -> Result<BeltramiMode> {
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("lambda must be finite, got {lambda}")));
    }
    if lambda == 0.0 {
        return Err(Error::DegenerateMode);
    }
    check_coefficients(alpha, beta)?;
    let smooth = beta == 0.0;
    Ok(BeltramiMode {
        axis: Axis::vertical(1.0)?,
        lambda,
        shape: ModeShape::Radial(SinCosOverR { lambda, alpha, beta }),
        class: if smooth { ModeClass::RadialSmooth } else { ModeClass::Radial },
        domain: Domain { r_min: if smooth { 0.0 } else { DEFAULT_R_MIN }, ..Domain::WHOLE },
    })
}

/// Ψ = W(ρ)(α sin ηx₃ + β cos ηx₃) with W a disc or annulus eigenfunction
/// of radial eigenvalue μ, and λ = √(μ² + η²).
pub fn cylinder_mode(profile: &EigenMode, eta: f64, alpha: f64, beta: f64) -> Result<BeltramiMode> {
    check_coefficients(alpha, beta)?;
    if !eta.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("eta must be finite, got {eta}")));
    }
    if eta == 0.0 && beta == 0.0 {
        // sin(0·x₃) vanishes identically
        return Err(Error::ZeroMode);
    }
    let (class, domain) = match profile.family {
        Family::DiscRadial => (ModeClass::Disc, Domain::WHOLE),
        Family::AnnulusSeparated | Family::AnnulusCoupled => {
            let rho_min = match profile.profile {
                Profile::Bessel(b) if b.c_y != 0.0 => DEFAULT_R_MIN,
                _ => 0.0,
            };
            (ModeClass::Annulus, Domain { rho_min, ..Domain::WHOLE })
        }
        Family::BallRadial => {
            return Err(Error::InvalidParameter(
                "cylinder modes need a disc or annulus eigenfunction".into(),
            ))
        }
    };
    let mu = profile.eigenvalue;
    Ok(BeltramiMode {
        axis: Axis::vertical(1.0)?,
        lambda: libm::sqrt(mu * mu + eta * eta),
        shape: ModeShape::Cylinder { eigen: profile.clone(), axial: AxialFactor { alpha, beta, eta } },
        class,
        domain,
    })
}

fn mode_flow(modes: Vec<(f64, BeltramiMode)>, nu: f64, kind: FlowKind) -> Result<FlowSolution> {
    let Some((_, first)) = modes.first() else {
        return Err(Error::InvalidParameter("need at least one mode".into()));
    };
    let lambda = first.lambda;
    let mut domain = Domain::WHOLE;
    let mut u = VectorField3::zero();
    for (c, m) in &modes {
        if (m.lambda - lambda).abs() > 1e-12 * lambda.abs() {
            return Err(Error::InvalidParameter(alloc::format!(
                "superposed modes need a common lambda, got {} and {}",
                lambda,
                m.lambda
            )));
        }
        domain = domain.intersect(&m.domain);
        u = u.combine(1.0, &m.velocity(nu), *c);
    }
    let eval_modes = modes.clone();
    let evaluator = move |t: f64, x: Point3, _pressure: bool| {
        let mut u = Vec3::ZERO;
        for (c, m) in &eval_modes {
            u += m.velocity_at(nu, t, x) * *c;
        }
        FlowSample { u, p: -0.5 * u.dot(u), w: u * -lambda }
    };
    let family = if modes.iter().all(|(_, m)| m.class == first.class) { first.class.family() } else { "mixed" };
    Ok(FlowSolution {
        pressure: bernoulli_pressure(&u),
        vorticity: u.scaled(-lambda),
        u,
        kind,
        nu,
        class: ClassTag { family, kind },
        domain,
        source: Source::Modes(modes),
        lambda: Some(lambda),
        evaluator: Some(Arc::new(evaluator)),
    })
}

/// u₀ = λ(A×∇)Ψ + ((A×∇)×∇)Ψ with P = −½|u₀|².
pub fn euler_static(mode: &BeltramiMode) -> FlowSolution {
    mode_flow(alloc::vec![(1.0, mode.clone())], 0.0, FlowKind::EulerStatic)
        .expect("a single mode always has a common lambda")
}

/// u = e^{−νλ²t}u₀ with P = −½e^{−2νλ²t}|u₀|².
pub fn ns_decaying(mode: &BeltramiMode, nu: f64) -> Result<FlowSolution> {
    combine_modes(&[(1.0, mode.clone())], nu)
}

/// Σ cₖ uₖ for modes sharing λ, static when ν = 0 and decaying otherwise.
pub fn combine_modes(modes: &[(f64, BeltramiMode)], nu: f64) -> Result<FlowSolution> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(alloc::format!("viscosity must be >= 0, got {nu}")));
    }
    let kind = if nu == 0.0 { FlowKind::EulerStatic } else { FlowKind::NsDecaying };
    mode_flow(modes.to_vec(), nu, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{annulus_eigen_separated, disc_radial_eigen, AnnulusSpec, DiscSpec, SeparatedBC};
    use crate::fields::{ops, DerivativeEngine};
    use crate::Vec3;

    #[test]
    fn radial_mode_errors() {
        assert!(matches!(radial_mode(0.0, 1.0, 0.0), Err(Error::DegenerateMode)));
        assert!(matches!(radial_mode(1.0, 0.0, 0.0), Err(Error::ZeroMode)));
        assert_eq!(radial_mode(1.0, 1.0, 0.0).unwrap().class, ModeClass::RadialSmooth);
        assert_eq!(radial_mode(1.0, 1.0, 0.5).unwrap().domain.r_min, DEFAULT_R_MIN);
    }

    #[test]
    fn radial_psi_values() {
        let m = radial_mode(1.0, 1.0, 0.0).unwrap();
        let v = m.psi().value(0.0, Point3::new(core::f64::consts::FRAC_PI_2, 0.0, 0.0));
        assert!((v - 2.0 / core::f64::consts::PI).abs() < 1e-15);
        let m = radial_mode(core::f64::consts::PI, 1.0, 0.0).unwrap();
        assert!(m.psi().value(0.0, Point3::new(0.0, 1.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn cylinder_lambda_composition() {
        let disc = disc_radial_eigen(DiscSpec::new(1.0).unwrap(), 1).unwrap();
        let m = cylinder_mode(&disc, 1.0, 1.0, 0.0).unwrap();
        let xi = 2.404825557695773;
        assert_eq!(m.lambda, libm::sqrt(xi * xi + 1.0));
        assert!(matches!(cylinder_mode(&disc, 0.0, 1.0, 0.0), Err(Error::ZeroMode)));
        let flat = cylinder_mode(&disc, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(flat.lambda, disc.eigenvalue);
        assert_eq!(flat.class, ModeClass::Disc);
    }

    fn helmholtz_fd(m: &BeltramiMode, x: Point3) -> (f64, f64) {
        let psi = m.psi();
        let e = DerivativeEngine::default();
        let lap = e.laplacian(&|p| psi.value(0.0, p), x);
        let v = psi.value(0.0, x);
        (lap + m.lambda * m.lambda * v, lap.abs() + (m.lambda * m.lambda * v).abs())
    }

    #[test]
    fn helmholtz_holds_by_fd() {
        let m = radial_mode(2.0, 1.0, 0.5).unwrap();
        for r in [0.3, 1.0, 4.0] {
            let (res, scale) = helmholtz_fd(&m, Point3::new(r, 0.0, 0.0));
            assert!(res.abs() <= 1e-6 * scale, "r={r}: {res}");
        }
        let disc = disc_radial_eigen(DiscSpec::new(1.0).unwrap(), 1).unwrap();
        let m = cylinder_mode(&disc, 0.7, 1.0, 0.4).unwrap();
        let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
        let ann = annulus_eigen_separated(spec, SeparatedBC::dirichlet(), 1).unwrap();
        let z = cylinder_mode(&ann[0], 0.7, 0.3, 1.0).unwrap();
        for x in [Point3::new(0.2, 0.3, 0.1), Point3::new(1.1, -0.6, 2.0)] {
            let (res, scale) = helmholtz_fd(&m, x);
            assert!(res.abs() <= 1e-6 * scale);
            let (res, scale) = helmholtz_fd(&z, x);
            assert!(res.abs() <= 1e-6 * scale);
        }
    }

    #[test]
    fn beltrami_relation_and_decay() {
        let m = radial_mode(1.5, 1.0, -0.3).unwrap().with_axis(Axis::new(0.2, 0.5, 1.0).unwrap());
        let f = ns_decaying(&m, 0.4).unwrap();
        let x = Point3::new(0.7, -0.2, 0.5);
        let curl = ops::curl(&f.u).value(0.3, x);
        let u = f.u.value(0.3, x);
        assert!((curl + u * 1.5).max_abs() < 1e-12);
        let u0 = f.u.value(0.0, x);
        let factor = libm::exp(-0.4 * 1.5 * 1.5 * 0.3);
        assert!((u - u0 * factor).max_abs() < 1e-14);
        let p = f.pressure.value(0.3, x);
        assert!((p + 0.5 * u.dot(u)).abs() < 1e-14);
        let s = f.sample(0.3, x).unwrap();
        assert!((s.u - u).max_abs() < 1e-14);
        assert!((s.p - p).abs() < 1e-14);
        assert!((s.w - curl).max_abs() < 1e-12);
    }

    #[test]
    fn hand_evaluated_velocity() {
        // Ψ = sin r / r, A = e₃, λ = 1 at (π, 0, 0): the first term is
        // λ Ψ'(π)(0, 1, 0) with Ψ'(π) = −1/π; the second is ∇∂₃Ψ − e₃ΔΨ, where
        // ∂₃∂₃Ψ = Ψ'(π)/π = −1/π² and ΔΨ = −Ψ(π) = 0
        let m = radial_mode(1.0, 1.0, 0.0).unwrap();
        let u = euler_static(&m).u.value(0.0, Point3::new(core::f64::consts::PI, 0.0, 0.0));
        let pi = core::f64::consts::PI;
        let expect = Vec3::new(0.0, -1.0 / pi, -1.0 / (pi * pi));
        assert!((u - expect).max_abs() < 1e-15, "{u:?}");
    }

    #[test]
    fn superposition_needs_common_lambda() {
        let a = radial_mode(1.0, 1.0, 0.0).unwrap();
        let b = radial_mode(2.0, 1.0, 0.0).unwrap();
        assert!(combine_modes(&[(1.0, a.clone()), (1.0, b)], 0.1).is_err());
        let c = radial_mode(1.0, 0.0, 1.0).unwrap();
        let f = combine_modes(&[(1.0, a), (2.0, c)], 0.0).unwrap();
        assert_eq!(f.domain.r_min, DEFAULT_R_MIN);
        assert_eq!(f.kind, FlowKind::EulerStatic);
    }
}
