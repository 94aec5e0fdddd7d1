//! Limits along the paths tν = ω of the viscosity–time plane. Every solution
//! class depends on (ν, t) only through νt, so each path has its own static
//! limit, and different paths give different limits: the double limit
//! (ν, 1/t) → (0, 0) does not exist.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quadrature::{heat_polar, heat_radial};
use crate::solutions::{
    combine_modes, ns_decaying, swirl_heat, swirl_smoothed, BeltramiMode, FlowSolution, Source,
};
use crate::verify::SampleSet;
use crate::{Error, Result};

/// Allowed relative mismatch between νₖtₖ and ω.
pub const PATH_PRODUCT_TOL: f64 = 1e-14;
/// Path deviation tolerance for closed-form (eigenmode) classes.
pub const MODE_PATH_TOL: f64 = 1e-13;
/// Path deviation tolerance for quadrature (swirl) classes.
pub const QUADRATURE_PATH_TOL: f64 = 1e-8;
/// Gap between two path limits below which, relative to max|u₀|, the probe
/// cannot tell them apart.
pub const GAP_THRESHOLD: f64 = 1e-6;
/// Agreement of the measured gap with its closed form, relative to max|u₀|.
pub const GAP_FORMULA_TOL: f64 = 1e-10;

/// The points (νₖ, tₖ) sampled along the path νt = ω.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    omega: f64,
    schedule: Vec<(f64, f64)>,
}

impl PathSpec {
    /// Validates ω > 0, strictly increasing positive times and νₖtₖ = ω to
    /// relative accuracy 1e-14.
    pub fn new(omega: f64, schedule: Vec<(f64, f64)>) -> Result<Self> {
        check_omega(omega)?;
        let mut prev = 0.0;
        for (k, &(nu, t)) in schedule.iter().enumerate() {
            if !(t > prev) || !t.is_finite() || !(nu > 0.0) || !nu.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "path point {k} ({nu}, {t}) must have nu > 0 and strictly increasing t > 0"
                )));
            }
            if (nu * t - omega).abs() > PATH_PRODUCT_TOL * omega {
                return Err(Error::InvalidParameter(format!(
                    "path point {k}: nu*t = {} differs from omega = {omega}",
                    nu * t
                )));
            }
            prev = t;
        }
        Ok(PathSpec { omega, schedule })
    }

    /// `points` times spaced geometrically from `t_first` to `t_last`, with
    /// νₖ = ω/tₖ.
    pub fn geometric(omega: f64, t_first: f64, t_last: f64, points: usize) -> Result<Self> {
        check_omega(omega)?;
        if !(t_first > 0.0) || !(t_last >= t_first) || !t_last.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "schedule needs 0 < t_first <= t_last, got [{t_first}, {t_last}]"
            )));
        }
        let ratio = t_last / t_first;
        let schedule = (0..points)
            .map(|k| {
                let t = if points == 1 {
                    t_first
                } else if k + 1 == points {
                    t_last
                } else {
                    t_first * libm::pow(ratio, k as f64 / (points - 1) as f64)
                };
                (omega / t, t)
            })
            .collect();
        PathSpec::new(omega, schedule)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn schedule(&self) -> &[(f64, f64)] {
        &self.schedule
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("omega must be finite and > 0, got {omega}")));
    }
    Ok(())
}

/// Gaussian average (1/4πω)∫ e^{−|y|²/4ω} Φ(|x−y|) dy by polar quadrature
/// centred at x.
pub fn heat_kernel_2d(phi: &dyn Fn(f64) -> f64, omega: f64, x: [f64; 2]) -> Result<f64> {
    heat_polar(phi, omega, x)
}

/// The same average for radial Φ through the scaled-I₀ reduction; only the
/// distance r = |x| matters.
pub fn heat_kernel_radial(phi: &dyn Fn(f64) -> f64, omega: f64, r: f64) -> Result<f64> {
    heat_radial(phi, 0, omega, r)
}

/// The limit e^{−ωλ²}u₀ of a decaying mode along νt = ω, a static Euler
/// flow with pressure −½e^{−2ωλ²}|u₀|².
pub fn path_limit_eigen(mode: &BeltramiMode, omega: f64) -> Result<FlowSolution> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("omega must be finite and >= 0, got {omega}")));
    }
    let damping = libm::exp(-omega * mode.lambda * mode.lambda);
    combine_modes(&[(damping, mode.clone())], 0.0)
}

/// The limit of a swirl flow along νt = ω: the static swirl built from
/// the Gaussian averages of its profiles.
pub fn path_limit_2d(flow: &FlowSolution, omega: f64) -> Result<FlowSolution> {
    check_omega(omega)?;
    match &flow.source {
        Source::Swirl(s) => swirl_smoothed(s, omega),
        _ => Err(Error::UnsupportedKind(format!("path_limit_2d needs a swirl flow, got {}", flow.class))),
    }
}

/// The limit along νt = ω of any flow whose (ν, t) dependence is known.
pub fn path_limit(flow: &FlowSolution, omega: f64) -> Result<FlowSolution> {
    match &flow.source {
        Source::Modes(modes) => {
            let damped: Vec<_> =
                modes.iter().map(|(c, m)| (c * libm::exp(-omega * m.lambda * m.lambda), m.clone())).collect();
            combine_modes(&damped, 0.0)
        }
        Source::Swirl(_) => path_limit_2d(flow, omega),
        Source::Zero => Ok(FlowSolution::zero()),
    }
}

/// The same solution class rebuilt with viscosity ν.
pub fn with_viscosity(flow: &FlowSolution, nu: f64) -> Result<FlowSolution> {
    match &flow.source {
        Source::Modes(modes) => combine_modes(modes, nu),
        Source::Swirl(s) => swirl_heat(s, nu),
        Source::Zero => Ok(FlowSolution::zero()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Two paths converge to different limits.
    DoesNotExist,
    /// The probe could not separate the limits, or only one path was seen.
    Undetermined,
}

/// Distance between the flow at one (ν, t) and a reference field, maximised
/// over the probe points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub omega: f64,
    pub nu: f64,
    pub t: f64,
    pub max_abs: f64,
    /// Relative to the largest reference speed over the probes.
    pub max_rel: f64,
}

/// Comparison of the limits along two paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gap {
    pub omega1: f64,
    pub omega2: f64,
    /// max |u_{ω₁} − u_{ω₂}| over the probes.
    pub max_gap: f64,
    /// |e^{−ω₁λ²} − e^{−ω₂λ²}|.
    pub factor: f64,
    /// max over probes of ||u_{ω₁} − u_{ω₂}| − factor·|u₀||.
    pub formula_error: f64,
    /// max |u₀| over the probes.
    pub u0_max: f64,
}

impl Gap {
    pub fn formula_holds(&self) -> bool {
        self.formula_error <= GAP_FORMULA_TOL * self.u0_max
    }

    pub fn separates(&self) -> bool {
        self.max_gap > GAP_THRESHOLD * self.u0_max
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    /// Deviation of each path point from its path limit.
    pub deviations: Vec<Deviation>,
    pub tolerance: f64,
    pub gap: Option<Gap>,
    /// Points off every path (fixed ν, t → ∞) with their distance from
    /// zero, the limit along that sequence.
    pub witnesses: Vec<Deviation>,
    pub verdict: Verdict,
}

/// Column header of [`LimitReport::to_csv`].
pub const LIMIT_CSV_HEADER: &str = "kind,omega,nu,t,max_abs,max_rel";

impl LimitReport {
    /// True when every recorded path point matches its limit.
    pub fn paths_converge(&self) -> bool {
        self.deviations.iter().all(|d| d.max_rel <= self.tolerance)
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let verdict = match self.verdict {
            Verdict::DoesNotExist => "does-not-exist",
            Verdict::Undetermined => "undetermined",
        };
        let _ = writeln!(s, "verdict={verdict}");
        let _ = writeln!(s, "tolerance={:?}", self.tolerance);
        let _ = writeln!(s, "paths_converge={}", self.paths_converge());
        let worst = self.deviations.iter().map(|d| d.max_rel).fold(0.0, f64::max);
        let _ = writeln!(s, "max_path_deviation={worst:?}");
        if let Some(g) = &self.gap {
            let _ = writeln!(s, "gap.omega1={:?}", g.omega1);
            let _ = writeln!(s, "gap.omega2={:?}", g.omega2);
            let _ = writeln!(s, "gap.max={:?}", g.max_gap);
            let _ = writeln!(s, "gap.factor={:?}", g.factor);
            let _ = writeln!(s, "gap.formula_error={:?}", g.formula_error);
            let _ = writeln!(s, "gap.u0_max={:?}", g.u0_max);
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let rows = self.deviations.iter().map(|d| ("path", d)).chain(self.witnesses.iter().map(|d| ("off-path", d)));
        for (kind, d) in rows {
            let _ = writeln!(s, "{kind},{:?},{:?},{:?},{:?},{:?}", d.omega, d.nu, d.t, d.max_abs, d.max_rel);
        }
        s
    }
}

/// max over probes of |u(t, x) − reference(x)| and max |reference|.
fn max_distance(flow: &FlowSolution, t: f64, reference: &FlowSolution, probes: &SampleSet) -> (f64, f64) {
    let mut dist: f64 = 0.0;
    let mut size: f64 = 0.0;
    for (_, x) in &probes.points {
        let r = reference.velocity(0.0, *x);
        let d = (flow.velocity(t, *x) - r).norm();
        dist = if d.is_nan() { f64::INFINITY } else { dist.max(d) };
        size = size.max(r.norm());
    }
    (dist, size)
}

fn deviation(omega: f64, nu: f64, t: f64, (abs, size): (f64, f64)) -> Deviation {
    Deviation { omega, nu, t, max_abs: abs, max_rel: abs / (size + 1e-30) }
}

fn path_tolerance(flow: &FlowSolution) -> f64 {
    match flow.source {
        Source::Swirl(_) => QUADRATURE_PATH_TOL,
        _ => MODE_PATH_TOL,
    }
}

fn check_probes(flow: &FlowSolution, probes: &SampleSet) -> Result<()> {
    probes.check(&flow.domain, false)
}

/// Evaluates the flow at every (νₖ, tₖ) of the path and records its
/// distance from the path limit. One path alone cannot decide the double
/// limit, so the verdict is always undetermined.
pub fn path_convergence_table(flow: &FlowSolution, path: &PathSpec, probes: &SampleSet) -> Result<LimitReport> {
    check_probes(flow, probes)?;
    let limit = path_limit(flow, path.omega)?;
    let deviations = path
        .schedule
        .iter()
        .map(|&(nu, t)| {
            let at = with_viscosity(flow, nu)?;
            Ok(deviation(path.omega, nu, t, max_distance(&at, t, &limit, probes)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitReport {
        deviations,
        tolerance: path_tolerance(flow),
        gap: None,
        witnesses: Vec::new(),
        verdict: Verdict::Undetermined,
    })
}

/// Observation times used to confirm that each path converges internally.
const PROBE_PATH: (f64, f64, usize) = (10.0, 1e6, 6);

/// Compares the limits of a mode along νt = ω₁ and νt = ω₂. The double
/// limit does not exist when the gap exceeds 1e-6·max|u₀| while both paths
/// converge.
pub fn double_limit_probe(mode: &BeltramiMode, omega1: f64, omega2: f64, probes: &SampleSet) -> Result<LimitReport> {
    check_omega(omega1)?;
    check_omega(omega2)?;
    if omega1 == omega2 {
        return Err(Error::DegenerateProbe);
    }
    let static_flow = path_limit_eigen(mode, 0.0)?;
    check_probes(&static_flow, probes)?;
    let l1 = path_limit_eigen(mode, omega1)?;
    let l2 = path_limit_eigen(mode, omega2)?;
    let l2sq = mode.lambda * mode.lambda;
    let factor = (libm::exp(-omega1 * l2sq) - libm::exp(-omega2 * l2sq)).abs();
    let mut gap = Gap { omega1, omega2, max_gap: 0.0, factor, formula_error: 0.0, u0_max: 0.0 };
    for (_, x) in &probes.points {
        let u0 = static_flow.velocity(0.0, *x).norm();
        let g = (l1.velocity(0.0, *x) - l2.velocity(0.0, *x)).norm();
        gap.max_gap = gap.max_gap.max(g);
        gap.formula_error = gap.formula_error.max((g - factor * u0).abs());
        gap.u0_max = gap.u0_max.max(u0);
    }

    let mut deviations = Vec::new();
    for omega in [omega1, omega2] {
        let decaying = ns_decaying(mode, 1.0)?;
        let path = PathSpec::geometric(omega, PROBE_PATH.0, PROBE_PATH.1, PROBE_PATH.2)?;
        deviations.extend(path_convergence_table(&decaying, &path, probes)?.deviations);
    }

    // fixed ν = ω₁ with t = 10, 100, ...: the sequence tends to zero
    let nu = omega1;
    let zero = FlowSolution::zero();
    let off_path = ns_decaying(mode, nu)?;
    let witnesses = (1..=PROBE_PATH.2)
        .map(|k| {
            let t = libm::pow(10.0, k as f64);
            let (abs, _) = max_distance(&off_path, t, &zero, probes);
            deviation(nu * t, nu, t, (abs, gap.u0_max))
        })
        .collect();

    let mut report =
        LimitReport { deviations, tolerance: MODE_PATH_TOL, gap: Some(gap), witnesses, verdict: Verdict::Undetermined };
    if gap.separates() && report.paths_converge() {
        report.verdict = Verdict::DoesNotExist;
    }
    Ok(report)
}

/// Reproducible draws of the path constant ω, uniform on [lo, hi).
#[derive(Clone, Debug)]
pub struct OmegaSampler {
    lo: f64,
    hi: f64,
    rng: ChaCha8Rng,
}

impl OmegaSampler {
    pub fn new(lo: f64, hi: f64, seed: u64) -> Result<Self> {
        check_omega(lo)?;
        if !(hi > lo) || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!("omega range needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(OmegaSampler { lo, hi, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn next_omega(&mut self) -> f64 {
        self.lo + (self.hi - self.lo) * self.rng.random::<f64>()
    }

    pub fn take(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_omega()).collect()
    }
}

/// For observations at t₁ < t₂ < … under viscosity ν, the path constant
/// seen at each time, ωₙ = tₙν.
pub fn observation_schedule(nu: f64, times: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("viscosity must be > 0, got {nu}")));
    }
    let mut prev = 0.0;
    times
        .iter()
        .map(|&t| {
            if !(t > prev) || !t.is_finite() {
                return Err(Error::InvalidParameter(format!("observation times must increase from 0, got {t}")));
            }
            prev = t;
            Ok((t, t * nu))
        })
        .collect()
}
