//! Independent finite-difference referee. Every check differentiates the
//! pointwise values of a flow or pair numerically and compares against the
//! identity or PDE it is supposed to satisfy.
//!
//! Residuals are recorded both absolutely and relative to the sum of the
//! magnitudes of the individual terms (plus a 1e-30 floor), so decaying
//! amplitudes and nodal points do not distort the verdict.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::{derivative, ops, DerivativeEngine, DerivativeMode, Partial};
use crate::solutions::{
    velocity_from_pair, vorticity_from_pair, BeltramiMode, Domain, FlowKind, FlowSolution,
    ModeShape, Source, SymplecticPair,
};
use crate::{Error, Point3, Result, Vec3};

const FLOOR: f64 = 1e-30;

/// Outer radius of sample sets for flows without a Beltrami eigenvalue.
pub const DEFAULT_EXTENT: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleGeometry {
    /// r = |x| is log-uniform, directions uniform on the sphere.
    Spherical,
    /// ρ = √(x₁²+x₂²) is log-uniform, the angle and x₃ uniform.
    Cylindrical,
}

/// Recipe for a reproducible sample set.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSpec {
    pub geometry: SampleGeometry,
    pub r_min: f64,
    pub r_max: f64,
    /// Cylindrical sets draw x₃ from [−z_half, z_half].
    pub z_half: f64,
    /// Point i is assigned times[i mod len].
    pub times: Vec<f64>,
    pub count: usize,
    pub seed: u64,
}

impl SampleSpec {
    /// Radii between the flow's excluded core and 5/|λ|, cylindrical for
    /// flows built on the x₃ axis.
    pub fn for_flow(flow: &FlowSolution, count: usize, seed: u64) -> Self {
        let cylindrical = flow.domain.is_cylindrical()
            || match &flow.source {
                Source::Swirl(_) => true,
                Source::Modes(m) => m.iter().any(|(_, m)| matches!(m.shape, ModeShape::Cylinder { .. })),
                Source::Zero => false,
            };
        let times = if flow.kind == FlowKind::Heat2d { alloc::vec![1.0] } else { alloc::vec![0.0] };
        Self::for_domain(&flow.domain, flow.lambda, cylindrical, count, seed).with_times(times)
    }

    pub fn for_mode(mode: &BeltramiMode, count: usize, seed: u64) -> Self {
        let cylindrical = matches!(mode.shape, ModeShape::Cylinder { .. });
        Self::for_domain(&mode.domain, Some(mode.lambda), cylindrical, count, seed)
    }

    pub fn for_domain(domain: &Domain, lambda: Option<f64>, cylindrical: bool, count: usize, seed: u64) -> Self {
        let extent = lambda.filter(|l| *l != 0.0).map_or(DEFAULT_EXTENT, |l| 5.0 / l.abs());
        let r_max = domain.rho_max.map_or(extent, |m| m.min(extent));
        let core = if cylindrical { domain.rho_min.max(domain.r_min) } else { domain.r_min };
        SampleSpec {
            geometry: if cylindrical { SampleGeometry::Cylindrical } else { SampleGeometry::Spherical },
            r_min: core.max(0.02 * r_max),
            r_max,
            z_half: r_max,
            times: alloc::vec![0.0],
            count,
            seed,
        }
    }

    pub fn with_times(mut self, times: Vec<f64>) -> Self {
        self.times = times;
        self
    }

    pub fn generate(&self) -> Result<SampleSet> {
        if !(self.r_min > 0.0) || !(self.r_max > self.r_min) || !self.r_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sample radii need 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.times.is_empty() || self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("sample times must be finite and non-empty".into()));
        }
        if !(self.z_half >= 0.0) || !self.z_half.is_finite() {
            return Err(Error::InvalidParameter(format!("z_half must be finite and >= 0, got {}", self.z_half)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        // keep rounding in the coordinate transform from crossing r_min
        let lo = self.r_min * (1.0 + 1e-9);
        let ratio = self.r_max / lo;
        let two_pi = 2.0 * core::f64::consts::PI;
        let points = (0..self.count)
            .map(|i| {
                let r = lo * libm::pow(ratio, rng.random::<f64>());
                let angle = two_pi * rng.random::<f64>();
                let x = match self.geometry {
                    SampleGeometry::Spherical => {
                        let c = 2.0 * rng.random::<f64>() - 1.0;
                        let s = libm::sqrt((1.0 - c * c).max(0.0));
                        Vec3::new(r * s * libm::cos(angle), r * s * libm::sin(angle), r * c)
                    }
                    SampleGeometry::Cylindrical => {
                        let z = self.z_half * (2.0 * rng.random::<f64>() - 1.0);
                        Vec3::new(r * libm::cos(angle), r * libm::sin(angle), z)
                    }
                };
                (self.times[i % self.times.len()], x)
            })
            .collect();
        Ok(SampleSet { points })
    }
}

/// Space-time points at which residuals are evaluated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleSet {
    pub points: Vec<(f64, Point3)>,
}

impl SampleSet {
    pub fn from_points(points: Vec<(f64, Point3)>) -> Self {
        SampleSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Consecutive sub-sets of at most `size` points, in order.
    pub fn chunks(&self, size: usize) -> Vec<SampleSet> {
        self.points.chunks(size.max(1)).map(|c| SampleSet { points: c.to_vec() }).collect()
    }

    pub fn check(&self, domain: &Domain, forward_only: bool) -> Result<()> {
        for (i, (t, x)) in self.points.iter().enumerate() {
            if !t.is_finite() || (forward_only && *t < 0.0) {
                return Err(Error::Domain(format!("sample {i} has inadmissible time {t}")));
            }
            domain.check(*x).map_err(|e| Error::Domain(format!("sample {i}: {e}")))?;
        }
        Ok(())
    }
}

/// Aggregated residual of one identity over a sample set.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualEntry {
    pub name: String,
    pub tolerance: f64,
    /// Judge the relative rather than the absolute residual.
    pub relative: bool,
    pub count: usize,
    pub max_abs: f64,
    pub sum_sq_abs: f64,
    pub max_rel: f64,
    pub sum_sq_rel: f64,
    /// Where the judged residual is largest.
    pub worst: Option<(f64, Point3)>,
}

impl ResidualEntry {
    pub fn new(name: &str, tolerance: f64, relative: bool) -> Self {
        ResidualEntry {
            name: name.to_string(),
            tolerance,
            relative,
            count: 0,
            max_abs: 0.0,
            sum_sq_abs: 0.0,
            max_rel: 0.0,
            sum_sq_rel: 0.0,
            worst: None,
        }
    }

    /// Adds a residual of absolute size `abs` against a term scale.
    pub fn record(&mut self, t: f64, x: Point3, abs: f64, scale: f64) {
        let abs = if abs.is_nan() { f64::INFINITY } else { abs.abs() };
        let rel = abs / (scale.abs() + FLOOR);
        let rel = if rel.is_nan() { f64::INFINITY } else { rel };
        let judged = if self.relative { rel } else { abs };
        if self.worst.is_none() || judged > self.judged() {
            self.worst = Some((t, x));
        }
        self.count += 1;
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self.max_rel.max(rel);
        self.sum_sq_abs += abs * abs;
        self.sum_sq_rel += rel * rel;
    }

    /// The statistic compared against the tolerance.
    pub fn judged(&self) -> f64 {
        if self.relative {
            self.max_rel
        } else {
            self.max_abs
        }
    }

    pub fn rms_abs(&self) -> f64 {
        rms(self.sum_sq_abs, self.count)
    }

    pub fn rms_rel(&self) -> f64 {
        rms(self.sum_sq_rel, self.count)
    }

    pub fn pass(&self) -> bool {
        self.judged() <= self.tolerance
    }

    pub fn merge(&mut self, o: &ResidualEntry) {
        if o.count == 0 {
            return;
        }
        if self.worst.is_none() || o.judged() > self.judged() {
            self.worst = o.worst;
        }
        self.count += o.count;
        self.max_abs = self.max_abs.max(o.max_abs);
        self.max_rel = self.max_rel.max(o.max_rel);
        self.sum_sq_abs += o.sum_sq_abs;
        self.sum_sq_rel += o.sum_sq_rel;
    }
}

fn rms(sum_sq: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        libm::sqrt(sum_sq / n as f64)
    }
}

/// Results of one check: a set of entries and any warnings.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub check: String,
    pub entries: Vec<ResidualEntry>,
    pub warnings: Vec<String>,
}

/// Column header of [`ResidualReport::to_csv`].
pub const REPORT_CSV_HEADER: &str =
    "check,name,count,max_abs,rms_abs,max_rel,rms_rel,tolerance,metric,pass,worst_t,worst_x1,worst_x2,worst_x3";

impl ResidualReport {
    pub fn new(check: &str) -> Self {
        ResidualReport { check: check.to_string(), entries: Vec::new(), warnings: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.entries.iter().all(ResidualEntry::pass)
    }

    pub fn entry(&self, name: &str) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Folds in the report of another chunk of samples. Merging chunks in a
    /// fixed order gives bit-identical results regardless of threading.
    pub fn merge(&mut self, o: &ResidualReport) {
        for e in &o.entries {
            match self.entries.iter_mut().find(|s| s.name == e.name) {
                Some(s) => s.merge(e),
                None => self.entries.push(e.clone()),
            }
        }
        for w in &o.warnings {
            if !self.warnings.contains(w) {
                self.warnings.push(w.clone());
            }
        }
    }

    /// Flat `key=value` lines.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "check={}", self.check);
        let _ = writeln!(s, "pass={}", self.pass());
        for e in &self.entries {
            let n = &e.name;
            let _ = writeln!(s, "{n}.count={}", e.count);
            let _ = writeln!(s, "{n}.max_abs={:?}", e.max_abs);
            let _ = writeln!(s, "{n}.rms_abs={:?}", e.rms_abs());
            let _ = writeln!(s, "{n}.max_rel={:?}", e.max_rel);
            let _ = writeln!(s, "{n}.rms_rel={:?}", e.rms_rel());
            let _ = writeln!(s, "{n}.tolerance={:?}", e.tolerance);
            let _ = writeln!(s, "{n}.metric={}", metric_name(e.relative));
            let _ = writeln!(s, "{n}.pass={}", e.pass());
            if let Some((t, x)) = e.worst {
                let _ = writeln!(s, "{n}.worst={:?};{:?};{:?};{:?}", t, x[0], x[1], x[2]);
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning={w}");
        }
        s
    }

    /// CSV rows (without header), one per entry.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let (t, x) = e.worst.unwrap_or((f64::NAN, Vec3::new(f64::NAN, f64::NAN, f64::NAN)));
            let _ = writeln!(
                s,
                "{},{},{},{:?},{:?},{:?},{:?},{:?},{},{},{:?},{:?},{:?},{:?}",
                self.check,
                e.name,
                e.count,
                e.max_abs,
                e.rms_abs(),
                e.max_rel,
                e.rms_rel(),
                e.tolerance,
                metric_name(e.relative),
                e.pass(),
                t,
                x[0],
                x[1],
                x[2]
            );
        }
        s
    }
}

fn metric_name(relative: bool) -> &'static str {
    if relative {
        "relative"
    } else {
        "absolute"
    }
}

/// Pass thresholds. Identities checked with one level of finite
/// differences against analytic inner quantities sit at 1e-6; nested or
/// high-order differences at 1e-5 to 1e-4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub ns: f64,
    pub euler: f64,
    /// Absolute, on the analytic divergence when available.
    pub divergence: f64,
    /// Relative, on the finite-difference divergence.
    pub divergence_fd: f64,
    pub gradient: f64,
    pub projection: f64,
    pub projected: f64,
    pub vorticity_formula: f64,
    pub vorticity: f64,
    pub beltrami: f64,
    pub helmholtz: f64,
    /// Replaces the tolerance when a pair only has numerical derivatives.
    pub fd_only: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ns: 1e-6,
            euler: 1e-6,
            divergence: 1e-8,
            divergence_fd: 1e-6,
            gradient: 1e-5,
            projection: 1e-6,
            projected: 1e-4,
            vorticity_formula: 1e-6,
            vorticity: 1e-5,
            beltrami: 1e-6,
            helmholtz: 1e-6,
            fd_only: 1e-2,
        }
    }
}

struct Metric {
    name: &'static str,
    tolerance: f64,
    relative: bool,
}

const fn rel(name: &'static str, tolerance: f64) -> Metric {
    Metric { name, tolerance, relative: true }
}

type Jacobian = [Vec3; 3];
type Hessian = [[f64; 3]; 3];

fn frob(j: &Jacobian) -> f64 {
    libm::sqrt(j.iter().map(|c| c.dot(*c)).sum())
}

fn frob_h(h: &Hessian) -> f64 {
    libm::sqrt(h.iter().flatten().map(|v| v * v).sum())
}

fn trace(j: &Jacobian) -> f64 {
    j[0][0] + j[1][1] + j[2][2]
}

/// curl from `J[j] = ∂ⱼ u`.
fn curl(j: &Jacobian) -> Vec3 {
    Vec3::new(j[1][2] - j[2][1], j[2][0] - j[0][2], j[0][1] - j[1][0])
}

/// (v·∇)w from the Jacobian of w.
fn transport(v: Vec3, jw: &Jacobian) -> Vec3 {
    jw[0] * v[0] + jw[1] * v[1] + jw[2] * v[2]
}

/// (A×∇)·v = Σ εᵢⱼₖ Aⱼ ∂ₖ vᵢ = A·curl v.
fn symplectic_div(a: Vec3, j: &Jacobian) -> f64 {
    a.dot(curl(j))
}

/// ((A·A)Δ − (A·∇)²)f from the Hessian of f.
fn directional(a: Vec3, h: &Hessian) -> f64 {
    let mut quad = 0.0;
    for p in 0..3 {
        for q in 0..3 {
            quad += a[p] * h[p][q] * a[q];
        }
    }
    a.dot(a) * (h[0][0] + h[1][1] + h[2][2]) - quad
}

fn hessian(e: &DerivativeEngine, f: &dyn Fn(Point3) -> f64, x: Point3) -> Hessian {
    let g = |_t: f64, p: Point3| f(p);
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            h[i][j] = e.partial(&g, Partial::dxx(i, j), 0.0, x);
            h[j][i] = h[i][j];
        }
    }
    h
}

/// The referee: a finite-difference engine plus tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verifier {
    pub engine: DerivativeEngine,
    pub tolerances: Tolerances,
    /// Length scale for objects without a Beltrami eigenvalue.
    pub length_scale: f64,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier { engine: DerivativeEngine::default(), tolerances: Tolerances::default(), length_scale: 1.0 }
    }
}

impl Verifier {
    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn with_length_scale(mut self, l: f64) -> Self {
        self.length_scale = l;
        self
    }

    /// Oscillation length, shrunk near an excluded singular core so the
    /// stencil never reaches it.
    fn local_scale(&self, lambda: Option<f64>, domain: &Domain, x: Point3) -> f64 {
        let mut l = lambda.filter(|l| *l != 0.0).map_or(self.length_scale, |l| 1.0 / l.abs());
        if domain.r_min > 0.0 {
            l = l.min(0.5 * x.norm());
        }
        if domain.rho_min > 0.0 {
            l = l.min(0.5 * x.cyl_radius());
        }
        l
    }

    /// ∂ₜ of a vector quantity, one-sided near t = 0 for flows that only
    /// exist forward in time.
    fn time_derivative(&self, f: &dyn Fn(f64) -> Vec3, t: f64, nu: f64, l: f64, forward_only: bool) -> Vec3 {
        let tau = if nu > 0.0 { (l * l / nu).min(1.0) } else { 1.0 };
        let e = self.engine.scaled(tau);
        if forward_only && t < 4.0 * e.h {
            e.forward_time(f, t)
        } else {
            e.partial(&|s, _| f(s), Partial::T, t, Vec3::ZERO)
        }
    }

    fn run<const N: usize>(
        &self,
        check: &str,
        metrics: [Metric; N],
        samples: &SampleSet,
        point: impl Fn(f64, Point3) -> [(f64, f64); N],
    ) -> ResidualReport {
        let mut entries: Vec<ResidualEntry> =
            metrics.iter().map(|m| ResidualEntry::new(m.name, m.tolerance, m.relative)).collect();
        for &(t, x) in &samples.points {
            for (e, (abs, scale)) in entries.iter_mut().zip(point(t, x)) {
                e.record(t, x, abs, scale);
            }
        }
        ResidualReport { check: check.to_string(), entries, warnings: Vec::new() }
    }

    fn check_flow_samples(flow: &FlowSolution, samples: &SampleSet) -> Result<()> {
        samples.check(&flow.domain, flow.kind == FlowKind::Heat2d)
    }

    /// u·∇u + ∇P (plus uₜ − νΔu when `viscous`) and the divergence.
    fn momentum(&self, check: &str, flow: &FlowSolution, samples: &SampleSet, viscous: bool) -> ResidualReport {
        let tol = &self.tolerances;
        let div_field = (flow.u.mode() == DerivativeMode::Analytic).then(|| ops::divergence(&flow.u));
        let nu = if viscous { flow.nu } else { 0.0 };
        let heat = flow.kind == FlowKind::Heat2d;
        let metrics = [
            rel("momentum", if viscous { tol.ns } else { tol.euler }),
            Metric { name: "div", tolerance: tol.divergence, relative: false },
            rel("div_fd", tol.divergence_fd),
        ];
        self.run(check, metrics, samples, |t, x| {
            let l = self.local_scale(flow.lambda, &flow.domain, x);
            let e = self.engine.scaled(l);
            let u0 = flow.velocity(t, x);
            let j = e.jacobian(&|p| flow.velocity(t, p), x);
            let gp = e.gradient(&|p| flow.pressure_at(t, p), x);
            let adv = transport(u0, &j);
            let (ut, lap) = if viscous {
                let ut = self.time_derivative(&|s| flow.velocity(s, x), t, nu, l, heat);
                let lap = if nu != 0.0 { e.laplacian(&|p| flow.velocity(t, p), x) } else { Vec3::ZERO };
                (ut, lap)
            } else {
                (Vec3::ZERO, Vec3::ZERO)
            };
            let res = ut - lap * nu + adv + gp;
            let scale = ut.norm() + nu * lap.norm() + u0.norm() * frob(&j) + gp.norm();
            let div_fd = trace(&j);
            let div = div_field.as_ref().map_or(div_fd, |d| d.value(t, x));
            [(res.norm(), scale), (div, 0.0), (div_fd, frob(&j))]
        })
    }

    /// |uₜ − νΔu + (u·∇)u + ∇P| and |div u|. Static flows are checked with
    /// their own ν, which is zero.
    pub fn ns_residual(&self, flow: &FlowSolution, samples: &SampleSet) -> Result<ResidualReport> {
        Self::check_flow_samples(flow, samples)?;
        Ok(self.momentum("ns_residual", flow, samples, true))
    }

    /// |(u·∇)u + ∇P| and |div u| for static flows.
    pub fn euler_residual(&self, flow: &FlowSolution, samples: &SampleSet) -> Result<ResidualReport> {
        if flow.kind != FlowKind::EulerStatic {
            return Err(Error::UnsupportedKind(format!(
                "euler_residual needs an euler-static flow, got {}",
                flow.kind.name()
            )));
        }
        Self::check_flow_samples(flow, samples)?;
        Ok(self.momentum("euler_residual", flow, samples, false))
    }

    /// |curl((u·∇)u)| by two nested levels of differences; zero exactly
    /// when the convective term is a gradient.
    pub fn gradient_consistency(&self, flow: &FlowSolution, samples: &SampleSet) -> Result<ResidualReport> {
        Self::check_flow_samples(flow, samples)?;
        let metrics = [rel("curl_advection", self.tolerances.gradient)];
        Ok(self.run("gradient_consistency", metrics, samples, |t, x| {
            let l = self.local_scale(flow.lambda, &flow.domain, x);
            let inner = self.engine.scaled(l);
            let outer = self.engine.scaled(10.0 * l);
            let adv = |p: Point3| {
                let j = inner.jacobian(&|q| flow.velocity(t, q), p);
                transport(flow.velocity(t, p), &j)
            };
            let ja = outer.jacobian(&adv, x);
            [(curl(&ja).norm(), frob(&ja))]
        }))
    }

    fn pair_tolerance(&self, pair: &SymplecticPair, tol: f64, report: &mut ResidualReport) -> f64 {
        if pair.mode() == DerivativeMode::FiniteDifference {
            report.warnings.push(format!(
                "pair has only numerical derivatives; tolerance degraded from {tol:e} to {:e}",
                self.tolerances.fd_only
            ));
            self.tolerances.fd_only
        } else {
            tol
        }
    }

    fn degrade(&self, pair: &SymplecticPair, mut report: ResidualReport) -> ResidualReport {
        if pair.mode() == DerivativeMode::FiniteDifference {
            let tol = report.entries.first().map_or(0.0, |e| e.tolerance);
            let degraded = self.pair_tolerance(pair, tol, &mut report);
            for e in &mut report.entries {
                e.tolerance = degraded;
            }
        }
        report
    }

    /// (A×∇)·u = ((A·A)Δ − (A·∇)²)φ and (A×∇)·ω = ((A·A)Δ − (A·∇)²)Δψ.
    /// These are operator identities and hold for any pair.
    pub fn projection_identities(&self, pair: &SymplecticPair, samples: &SampleSet) -> Result<ResidualReport> {
        samples.check(&Domain::WHOLE, false)?;
        let u = velocity_from_pair(pair);
        let w = vorticity_from_pair(pair);
        let lap_psi = ops::laplacian(&pair.psi);
        let a = pair.axis.vec();
        let an = a.norm();
        let tol = self.tolerances.projection;
        let report = self.run("projection_identities", [rel("phi", tol), rel("psi", tol)], samples, |t, x| {
            let e = self.engine.scaled(self.length_scale);
            let ju = e.jacobian(&|p| u.value(t, p), x);
            let jw = e.jacobian(&|p| w.value(t, p), x);
            let hphi = hessian(&e, &|p| pair.phi.value(t, p), x);
            let hlap = hessian(&e, &|p| lap_psi.value(t, p), x);
            let r1 = symplectic_div(a, &ju) - directional(a, &hphi);
            let r2 = symplectic_div(a, &jw) - directional(a, &hlap);
            [
                (r1, an * frob(&ju) + an * an * frob_h(&hphi)),
                (r2, an * frob(&jw) + an * an * frob_h(&hlap)),
            ]
        });
        Ok(self.degrade(pair, report))
    }

    /// The momentum and vorticity equations projected on the axis frame:
    ///
    /// ```text
    /// D(φₜ − νΔφ) + (A×∇)·((u·∇)u)
    /// DΔ(ψₜ − νΔψ) + (A×∇)·((u·∇)ω − (ω·∇)u)
    /// ```
    ///
    /// with D = (A·A)Δ − (A·∇)². Inner quantities come from the pair's own
    /// derivatives; the outer operators are differenced numerically.
    pub fn projected_residuals(
        &self,
        pair: &SymplecticPair,
        nu: f64,
        samples: &SampleSet,
    ) -> Result<ResidualReport> {
        samples.check(&Domain::WHOLE, false)?;
        let u = velocity_from_pair(pair);
        let w = vorticity_from_pair(pair);
        let phi_t = derivative(&pair.phi, Partial::T);
        let lap_phi = ops::laplacian(&pair.phi);
        let lap_psi = ops::laplacian(&pair.psi);
        let lap_psi_t = derivative(&lap_psi, Partial::T);
        let lap2_psi = ops::laplacian(&lap_psi);
        let adv_u = ops::advect(&u, &u);
        let adv_w = ops::advect(&u, &w).combine(1.0, &ops::advect(&w, &u), -1.0);
        let a = pair.axis.vec();
        let an = a.norm();
        let tol = self.tolerances.projected;
        let report = self.run("projected_residuals", [rel("phi", tol), rel("psi", tol)], samples, |t, x| {
            let e = self.engine.scaled(self.length_scale);
            let h1 = hessian(&e, &|p| phi_t.value(t, p), x);
            let h2 = hessian(&e, &|p| lap_phi.value(t, p), x);
            let ja = e.jacobian(&|p| adv_u.value(t, p), x);
            let r1 = directional(a, &h1) - nu * directional(a, &h2) + symplectic_div(a, &ja);
            let s1 = an * an * (frob_h(&h1) + nu * frob_h(&h2)) + an * frob(&ja);
            let h3 = hessian(&e, &|p| lap_psi_t.value(t, p), x);
            let h4 = hessian(&e, &|p| lap2_psi.value(t, p), x);
            let jb = e.jacobian(&|p| adv_w.value(t, p), x);
            let r2 = directional(a, &h3) - nu * directional(a, &h4) + symplectic_div(a, &jb);
            let s2 = an * an * (frob_h(&h3) + nu * frob_h(&h4)) + an * frob(&jb);
            [(r1, s1), (r2, s2)]
        });
        Ok(self.degrade(pair, report))
    }

    /// The pair's vorticity formula −((A×∇)×∇)φ + (A×∇)Δψ against the
    /// numerical curl of its velocity.
    pub fn vorticity_formula(&self, pair: &SymplecticPair, samples: &SampleSet) -> Result<ResidualReport> {
        samples.check(&Domain::WHOLE, false)?;
        let u = velocity_from_pair(pair);
        let w = vorticity_from_pair(pair);
        let metrics = [rel("curl", self.tolerances.vorticity_formula)];
        let report = self.run("vorticity_formula", metrics, samples, |t, x| {
            let e = self.engine.scaled(self.length_scale);
            let j = e.jacobian(&|p| u.value(t, p), x);
            [((curl(&j) - w.value(t, x)).norm(), frob(&j))]
        });
        Ok(self.degrade(pair, report))
    }

    /// |ωₜ − νΔω + (u·∇)ω − (ω·∇)u| using the flow's own vorticity.
    pub fn vorticity_residual(&self, flow: &FlowSolution, samples: &SampleSet) -> Result<ResidualReport> {
        Self::check_flow_samples(flow, samples)?;
        let nu = flow.nu;
        let heat = flow.kind == FlowKind::Heat2d;
        let metrics = [rel("vorticity", self.tolerances.vorticity)];
        Ok(self.run("vorticity_residual", metrics, samples, |t, x| {
            let l = self.local_scale(flow.lambda, &flow.domain, x);
            let e = self.engine.scaled(l);
            let (u0, w0) = (flow.velocity(t, x), flow.vorticity_at(t, x));
            let ju = e.jacobian(&|p| flow.velocity(t, p), x);
            let jw = e.jacobian(&|p| flow.vorticity_at(t, p), x);
            let wt = self.time_derivative(&|s| flow.vorticity_at(s, x), t, nu, l, heat);
            let lap = if nu != 0.0 { e.laplacian(&|p| flow.vorticity_at(t, p), x) } else { Vec3::ZERO };
            let res = wt - lap * nu + transport(u0, &jw) - transport(w0, &ju);
            let scale = wt.norm() + nu * lap.norm() + u0.norm() * frob(&jw) + w0.norm() * frob(&ju);
            [(res.norm(), scale)]
        }))
    }

    fn beltrami_with_sign(
        &self,
        check: &str,
        flow: &FlowSolution,
        samples: &SampleSet,
        sign: f64,
    ) -> Result<ResidualReport> {
        let Some(lambda) = flow.lambda else {
            return Err(Error::UnsupportedKind(format!("{check} needs a Beltrami mode flow")));
        };
        Self::check_flow_samples(flow, samples)?;
        let metrics = [rel("curl", self.tolerances.beltrami)];
        Ok(self.run(check, metrics, samples, |t, x| {
            let e = self.engine.scaled(self.local_scale(flow.lambda, &flow.domain, x));
            let u = flow.velocity(t, x);
            let j = e.jacobian(&|p| flow.velocity(t, p), x);
            [((curl(&j) + u * (sign * lambda)).norm(), frob(&j) + lambda.abs() * u.norm())]
        }))
    }

    /// |curl u + λu| for Beltrami mode flows.
    pub fn beltrami_check(&self, flow: &FlowSolution, samples: &SampleSet) -> Result<ResidualReport> {
        self.beltrami_with_sign("beltrami_check", flow, samples, 1.0)
    }

    /// |curl u − λu|, which must fail for a genuine mode flow.
    pub fn beltrami_sign_control(&self, flow: &FlowSolution, samples: &SampleSet) -> Result<ResidualReport> {
        self.beltrami_with_sign("beltrami_sign_control", flow, samples, -1.0)
    }

    /// |ΔΨ + λ²Ψ| for the mode's potential.
    pub fn helmholtz_check(&self, mode: &BeltramiMode, samples: &SampleSet) -> Result<ResidualReport> {
        samples.check(&mode.domain, false)?;
        let psi = mode.psi();
        let l2 = mode.lambda * mode.lambda;
        let metrics = [rel("helmholtz", self.tolerances.helmholtz)];
        Ok(self.run("helmholtz_check", metrics, samples, |t, x| {
            let e = self.engine.scaled(self.local_scale(Some(mode.lambda), &mode.domain, x));
            let h = hessian(&e, &|p| psi.value(t, p), x);
            let v = psi.value(t, x);
            [((h[0][0] + h[1][1] + h[2][2] + l2 * v).abs(), frob_h(&h) + l2 * v.abs())]
        }))
    }
}
