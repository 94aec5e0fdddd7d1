//! Flag parsing helpers and flow construction.

use std::sync::Arc;

use beltrami_core::eigen::{
    annulus_eigen_coupled, annulus_eigen_separated, disc_radial_eigen, AnnulusSpec, CoupledBC, DiscSpec,
    EigenMode, SeparatedBC,
};
use beltrami_core::fields::{GaussPoly, RadialProfile};
use beltrami_core::solutions::{
    cylinder_mode, euler_static, ns_decaying, radial_mode, swirl2d, swirl_heat, BeltramiMode, FlowSolution,
    Swirl2D,
};
use beltrami_core::Axis;

use crate::args::{BcArg, FlowArgs, FlowClassArg};
use crate::error::{CliError, CliResult};

pub fn parse_list(what: &str, s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--{what}: '{v}' is not a finite number")))
        })
        .collect()
}

pub fn parse_fixed<const N: usize>(what: &str, s: &str) -> CliResult<[f64; N]> {
    let v = parse_list(what, s)?;
    v.try_into().map_err(|v: Vec<f64>| CliError::Usage(format!("--{what}: expected {N} values, got {}", v.len())))
}

pub fn coupling(k: Option<&str>) -> CliResult<CoupledBC> {
    match k {
        None => Ok(CoupledBC::identity()),
        Some(s) => {
            let [a, b, c, d] = parse_fixed::<4>("k", s)?;
            Ok(CoupledBC::new([[a, b], [c, d]])?)
        }
    }
}

pub fn separated(bc: BcArg) -> Option<SeparatedBC> {
    match bc {
        BcArg::Dirichlet => Some(SeparatedBC::dirichlet()),
        BcArg::Neumann => Some(SeparatedBC::neumann()),
        BcArg::Coupled => None,
    }
}

/// `zero`, `rigid` (ρ²/2) or `gaussian:C:SIGMA`.
pub fn profile(what: &str, s: &str) -> CliResult<Arc<dyn RadialProfile>> {
    let bad = || CliError::Usage(format!("--{what}: expected zero, rigid or gaussian:C:SIGMA, got '{s}'"));
    let p = match s.trim() {
        "zero" => GaussPoly::zero(),
        "rigid" => GaussPoly::polynomial(&[(2, 0.5)]),
        g => {
            let rest = g.strip_prefix("gaussian:").ok_or_else(bad)?;
            let (c, sigma) = rest.split_once(':').ok_or_else(bad)?;
            let c: f64 = c.trim().parse().map_err(|_| bad())?;
            let sigma: f64 = sigma.trim().parse().map_err(|_| bad())?;
            if !c.is_finite() || !(sigma > 0.0) || !sigma.is_finite() {
                return Err(CliError::Usage(format!("--{what}: need finite C and SIGMA > 0, got '{s}'")));
            }
            GaussPoly::gaussian(c, sigma)
        }
    };
    Ok(Arc::new(p))
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be finite, got {v}")))
    }
}

fn radial_eigen(a: &FlowArgs) -> CliResult<EigenMode> {
    if a.index == 0 {
        return Err(CliError::Usage("--index is 1-based".into()));
    }
    match a.class {
        FlowClassArg::Disc => Ok(disc_radial_eigen(DiscSpec::new(a.radius)?, a.index)?),
        _ => {
            let spec = AnnulusSpec::new(a.r1, a.r2)?;
            let modes = match separated(a.bc) {
                Some(bc) => annulus_eigen_separated(spec, bc, a.index)?,
                None => annulus_eigen_coupled(spec, coupling(a.k.as_deref())?, a.index)?,
            };
            modes.into_iter().nth(a.index - 1).ok_or_else(|| CliError::Solver("eigenvalue not found".into()))
        }
    }
}

/// The Beltrami mode selected by the flags, if the class is a mode.
pub fn build_mode(a: &FlowArgs) -> CliResult<Option<BeltramiMode>> {
    finite("alpha", a.alpha)?;
    finite("beta", a.beta)?;
    let mut mode = match a.class {
        FlowClassArg::Radial => radial_mode(finite("lambda", a.lambda)?, a.alpha, a.beta)?,
        FlowClassArg::Disc | FlowClassArg::Annulus => {
            cylinder_mode(&radial_eigen(a)?, finite("eta", a.eta)?, a.alpha, a.beta)?
        }
        FlowClassArg::Swirl | FlowClassArg::Zero => return Ok(None),
    };
    if let Some(s) = &a.axis {
        let [a1, a2, a3] = parse_fixed::<3>("axis", s)?;
        mode = mode.with_axis(Axis::new(a1, a2, a3)?);
    }
    if let Some(r) = a.r_min {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(CliError::Usage(format!("--r-min must be finite and >= 0, got {r}")));
        }
        mode = mode.with_r_min(r);
    }
    Ok(Some(mode))
}

/// Builds the flow; also returns the underlying mode for mode classes.
pub fn build_flow(a: &FlowArgs) -> CliResult<(FlowSolution, Option<BeltramiMode>)> {
    if !(a.nu >= 0.0) || !a.nu.is_finite() {
        return Err(CliError::Usage(format!("--nu must be finite and >= 0, got {}", a.nu)));
    }
    if let Some(mode) = build_mode(a)? {
        let flow = if a.nu == 0.0 { euler_static(&mode) } else { ns_decaying(&mode, a.nu)? };
        return Ok((flow, Some(mode)));
    }
    let flow = match a.class {
        FlowClassArg::Zero => FlowSolution::zero(),
        _ => {
            let mut s = Swirl2D::new(finite("amplitude", a.amplitude)?, profile("phi", &a.phi)?, profile("psi", &a.psi)?)?;
            if let Some(r) = a.r_min {
                if !(r >= 0.0) || !r.is_finite() {
                    return Err(CliError::Usage(format!("--r-min must be finite and >= 0, got {r}")));
                }
                s = s.with_r_min(r);
            }
            if a.nu == 0.0 {
                swirl2d(&s)
            } else {
                swirl_heat(&s, a.nu)?
            }
        }
    };
    Ok((flow, None))
}
