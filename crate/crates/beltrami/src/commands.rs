//! The five subcommands. Each returns its exit code: 0 pass, 1 a check
//! failed. Errors carry codes 2 and 3.

use std::fmt::Write as _;

use beltrami_core::eigen::{
    annulus_eigen_coupled_in, annulus_eigen_separated_in, ball_radial_eigen, disc_radial_eigen, AnnulusSpec,
    BallSpec, DiscSpec, EigenMode, Normalization, ScanWindow,
};
use beltrami_core::fields::zero;
use beltrami_core::solutions::{FlowKind, FlowSolution, Source};
use beltrami_core::turbulence::{
    double_limit_probe, path_convergence_table, LimitReport, OmegaSampler, PathSpec, Verdict, LIMIT_CSV_HEADER,
    MODE_PATH_TOL, QUADRATURE_PATH_TOL,
};
use beltrami_core::verify::{ResidualEntry, ResidualReport, SampleSet, SampleSpec, Tolerances, Verifier, REPORT_CSV_HEADER};
use beltrami_core::Point3;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::args::{
    ConstructArgs, EigenArgs, ExportArgs, FormatArg, GeometryArg, PathlimitArgs, VerifyArgs,
};
use crate::error::{CliError, CliResult};
use crate::flow::{build_flow, coupling, parse_fixed, parse_list, separated};
use crate::output::{field_csv, field_vtk, out_dir, write, Grid, TolSet};

/// Samples per work unit of the residual suite. Fixed, so the merge order
/// and hence every reported bit is independent of the thread count.
pub const CHUNK: usize = 16;

fn pool(threads: usize) -> CliResult<ThreadPool> {
    if threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))
}

// ---------------------------------------------------------------- eigen

fn boundary_residual(m: &EigenMode, geometry: GeometryArg, a: &EigenArgs) -> CliResult<f64> {
    let scale = match m.normalization {
        Normalization::SincUnscaled => m.eigenvalue.abs(),
        Normalization::UnitMax => 1.0,
    };
    let r = match geometry {
        GeometryArg::Ball | GeometryArg::Disc => m.value(a.radius).abs(),
        GeometryArg::Annulus => {
            let (y1, y2) = (m.state(a.r1), m.state(a.r2));
            match separated(a.bc) {
                Some(bc) => {
                    let row = |k: usize, y: [f64; 2]| (bc.m[k][0] * y[0] + bc.m[k][1] * y[1]).abs();
                    row(0, y1).max(row(1, y2))
                }
                None => {
                    let k = coupling(a.k.as_deref())?.k;
                    let d0 = y1[0] - (k[0][0] * y2[0] + k[0][1] * y2[1]);
                    let d1 = y1[1] - (k[1][0] * y2[0] + k[1][1] * y2[1]);
                    d0.abs().max(d1.abs())
                }
            }
        }
    };
    Ok(r / scale)
}

pub fn eigen(a: &EigenArgs) -> CliResult<u8> {
    let geometry = a
        .geometry
        .or(a.geometry_key)
        .ok_or_else(|| CliError::Usage("missing geometry: ball, disc or annulus".into()))?;
    if a.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let mut tol = TolSet(vec![("boundary", 1e-9)]);
    tol.apply(&a.common.tolerances)?;
    let dir = out_dir(a.common.out_dir.as_deref())?;
    let modes: Vec<EigenMode> = match geometry {
        GeometryArg::Ball => {
            let spec = BallSpec::new(a.radius)?;
            (1..=a.count).map(|n| ball_radial_eigen(spec, n)).collect::<Result<_, _>>()?
        }
        GeometryArg::Disc => {
            let spec = DiscSpec::new(a.radius)?;
            (1..=a.count).map(|j| disc_radial_eigen(spec, j)).collect::<Result<_, _>>()?
        }
        GeometryArg::Annulus => {
            let spec = AnnulusSpec::new(a.r1, a.r2)?;
            let mut window = ScanWindow::default_for(spec);
            if let Some(z) = a.zeta_max {
                window.zeta_max = z;
            }
            match separated(a.bc) {
                Some(bc) => annulus_eigen_separated_in(spec, bc, a.count, window)?,
                None => annulus_eigen_coupled_in(spec, coupling(a.k.as_deref())?, a.count, window)?,
            }
        }
    };
    let limit = tol.get("boundary");
    let mut csv = tol.header();
    csv.push_str("index,eigenvalue,multiplicity,boundary_residual,pass\n");
    let mut all = true;
    println!("{:>5}  {:>22}  {:>4}  {:>12}", "index", "eigenvalue", "mult", "bc_residual");
    for m in &modes {
        let r = boundary_residual(m, geometry, a)?;
        let ok = r <= limit;
        all &= ok;
        println!("{:>5}  {:>22.15}  {:>4}  {:>12.3e}", m.index, m.eigenvalue, m.multiplicity, r);
        let _ = writeln!(csv, "{},{:?},{},{:?},{}", m.index, m.eigenvalue, m.multiplicity, r, ok);
    }
    let name = match geometry {
        GeometryArg::Ball => "eigen_ball.csv",
        GeometryArg::Disc => "eigen_disc.csv",
        GeometryArg::Annulus => "eigen_annulus.csv",
    };
    write(&dir.join(name), &csv)?;
    if !all {
        eprintln!("boundary residual exceeds tolerance {limit:e}");
    }
    Ok(u8::from(!all))
}

// ------------------------------------------------------------ construct

fn verify_tolerances(overrides: &[String]) -> CliResult<(TolSet, Tolerances)> {
    let d = Tolerances::default();
    let mut set = TolSet(vec![
        ("ns", d.ns),
        ("euler", d.euler),
        ("divergence", d.divergence),
        ("divergence_fd", d.divergence_fd),
        ("gradient", d.gradient),
        ("projection", d.projection),
        ("projected", d.projected),
        ("vorticity_formula", d.vorticity_formula),
        ("vorticity", d.vorticity),
        ("beltrami", d.beltrami),
        ("helmholtz", d.helmholtz),
        ("fd_only", d.fd_only),
    ]);
    set.apply(overrides)?;
    let t = Tolerances {
        ns: set.get("ns"),
        euler: set.get("euler"),
        divergence: set.get("divergence"),
        divergence_fd: set.get("divergence_fd"),
        gradient: set.get("gradient"),
        projection: set.get("projection"),
        projected: set.get("projected"),
        vorticity_formula: set.get("vorticity_formula"),
        vorticity: set.get("vorticity"),
        beltrami: set.get("beltrami"),
        helmholtz: set.get("helmholtz"),
        fd_only: set.get("fd_only"),
    };
    Ok((set, t))
}

fn describe(flow: &FlowSolution) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "class={}", flow.class);
    let _ = writeln!(s, "kind={}", flow.kind.name());
    let _ = writeln!(s, "nu={:?}", flow.nu);
    match flow.lambda {
        Some(l) => {
            let _ = writeln!(s, "lambda={l:?}");
        }
        None => {
            let _ = writeln!(s, "lambda=none");
        }
    }
    let d = flow.domain;
    let _ = writeln!(s, "domain.r_min={:?}", d.r_min);
    let _ = writeln!(s, "domain.rho_min={:?}", d.rho_min);
    if let Some(m) = d.rho_max {
        let _ = writeln!(s, "domain.rho_max={m:?}");
    }
    s
}

pub fn construct(a: &ConstructArgs) -> CliResult<u8> {
    let (tol, _) = verify_tolerances(&a.common.tolerances)?;
    let [x1, x2, x3] = parse_fixed::<3>("point", &a.point)?;
    if !a.time.is_finite() {
        return Err(CliError::Usage(format!("--time must be finite, got {}", a.time)));
    }
    let (flow, _) = build_flow(&a.flow)?;
    let x = Point3::new(x1, x2, x3);
    flow.domain.check(x)?;
    let smp = flow.sample(a.time, x)?;
    let mut out = tol.header();
    out.push_str(&describe(&flow));
    let _ = writeln!(out, "t={:?}", a.time);
    let _ = writeln!(out, "x={:?},{:?},{:?}", x[0], x[1], x[2]);
    let _ = writeln!(out, "u={:?},{:?},{:?}", smp.u[0], smp.u[1], smp.u[2]);
    let _ = writeln!(out, "p={:?}", smp.p);
    let _ = writeln!(out, "w={:?},{:?},{:?}", smp.w[0], smp.w[1], smp.w[2]);
    print!("{out}");
    Ok(0)
}

// --------------------------------------------------------------- verify

/// Every check that applies to the flow, on one chunk of samples.
fn suite(v: &Verifier, flow: &FlowSolution, mode: Option<&beltrami_core::solutions::BeltramiMode>, s: &SampleSet) -> CliResult<Vec<ResidualReport>> {
    let mut out = Vec::new();
    if flow.kind == FlowKind::EulerStatic {
        out.push(v.euler_residual(flow, s)?);
        out.push(v.gradient_consistency(flow, s)?);
    } else {
        out.push(v.ns_residual(flow, s)?);
    }
    out.push(v.vorticity_residual(flow, s)?);
    if flow.lambda.is_some() {
        out.push(v.beltrami_check(flow, s)?);
    }
    if let Some(m) = mode {
        out.push(v.helmholtz_check(m, s)?);
    }
    Ok(out)
}

/// Runs `suite` over fixed-size chunks and merges them in order.
pub fn run_suite(
    pool: &ThreadPool,
    v: &Verifier,
    flow: &FlowSolution,
    mode: Option<&beltrami_core::solutions::BeltramiMode>,
    samples: &SampleSet,
) -> CliResult<Vec<ResidualReport>> {
    let chunks = samples.chunks(CHUNK);
    let parts: Vec<Vec<ResidualReport>> =
        pool.install(|| chunks.par_iter().map(|c| suite(v, flow, mode, c)).collect::<CliResult<_>>())?;
    let mut it = parts.into_iter();
    let mut merged = it.next().unwrap_or_default();
    for part in it {
        for (m, p) in merged.iter_mut().zip(&part) {
            m.merge(p);
        }
    }
    Ok(merged)
}

fn worst_failure(reports: &[ResidualReport]) -> Option<(&ResidualReport, &ResidualEntry)> {
    reports
        .iter()
        .flat_map(|r| r.entries.iter().map(move |e| (r, e)))
        .filter(|(_, e)| !e.pass())
        .max_by(|a, b| {
            let ra = a.1.judged() / a.1.tolerance.max(f64::MIN_POSITIVE);
            let rb = b.1.judged() / b.1.tolerance.max(f64::MIN_POSITIVE);
            ra.total_cmp(&rb)
        })
}

pub fn verify(a: &VerifyArgs) -> CliResult<u8> {
    let (tol, tolerances) = verify_tolerances(&a.common.tolerances)?;
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let pool = pool(a.common.threads)?;
    let (mut flow, mode) = build_flow(&a.flow)?;
    let mut spec = SampleSpec::for_flow(&flow, a.samples, a.seed);
    if let Some(t) = &a.times {
        spec = spec.with_times(parse_list("times", t)?);
    }
    let samples = spec.generate()?;
    if a.negative_control {
        flow = flow.with_pressure(zero());
    }
    let dir = out_dir(a.common.out_dir.as_deref())?;
    let v = Verifier::default().with_tolerances(tolerances);
    let reports = run_suite(&pool, &v, &flow, mode.as_ref(), &samples)?;

    let mut head = tol.header();
    for line in describe(&flow).lines() {
        let _ = writeln!(head, "# flow.{line}");
    }
    let _ = writeln!(head, "# samples={} seed={} negative_control={}", samples.len(), a.seed, a.negative_control);
    let mut csv = head.clone();
    csv.push_str(REPORT_CSV_HEADER);
    csv.push('\n');
    let mut kv = head;
    for r in &reports {
        csv.push_str(&r.to_csv());
        kv.push_str(&r.to_kv());
    }
    let pass = reports.iter().all(ResidualReport::pass);
    let _ = writeln!(kv, "overall.pass={pass}");
    write(&dir.join("verify.csv"), &csv)?;
    write(&dir.join("verify.txt"), &kv)?;

    for r in &reports {
        for e in &r.entries {
            let metric = if e.relative { "rel" } else { "abs" };
            println!(
                "{:<22} {:<16} {metric} {:>11.3e}  tol {:>9.1e}  {}",
                r.check,
                e.name,
                e.judged(),
                e.tolerance,
                if e.pass() { "pass" } else { "FAIL" }
            );
        }
        for w in &r.warnings {
            eprintln!("warning: {}: {w}", r.check);
        }
    }
    if let Some((r, e)) = worst_failure(&reports) {
        let where_ = match e.worst {
            Some((t, x)) => format!(" at t={t:?} x=({:?}, {:?}, {:?})", x[0], x[1], x[2]),
            None => String::new(),
        };
        eprintln!("worst offender: {}/{} = {:e} > {:e}{where_}", r.check, e.name, e.judged(), e.tolerance);
    }
    println!("overall: {}", if pass { "pass" } else { "FAIL" });
    Ok(u8::from(!pass))
}

// ------------------------------------------------------------ pathlimit

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::DoesNotExist => "double limit does not exist",
        Verdict::Undetermined => "undetermined",
    }
}

pub fn pathlimit(a: &PathlimitArgs) -> CliResult<u8> {
    let pool = pool(a.common.threads)?;
    let (flow, mode) = build_flow(&a.flow)?;
    let omegas = match (&a.omega, &a.omega_range) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --omega or --omega-range, not both".into())),
        (None, None) => return Err(CliError::Usage("need --omega or --omega-range".into())),
        (Some(s), None) => parse_list("omega", s)?,
        (None, Some(r)) => {
            let [lo, hi] = parse_fixed::<2>("omega-range", r)?;
            if a.omega_count == 0 {
                return Err(CliError::Usage("--omega-count must be at least 1".into()));
            }
            OmegaSampler::new(lo, hi, a.seed)?.take(a.omega_count)
        }
    };
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let paths = omegas
        .iter()
        .map(|&w| PathSpec::geometric(w, a.t_first, a.t_last, a.points))
        .collect::<Result<Vec<_>, _>>()?;
    let default_tol = match flow.source {
        Source::Swirl(_) => QUADRATURE_PATH_TOL,
        _ => MODE_PATH_TOL,
    };
    let mut tol = TolSet(vec![("path", default_tol)]);
    tol.apply(&a.common.tolerances)?;
    let probes = SampleSpec::for_flow(&flow, a.samples, a.seed).generate()?;
    let dir = out_dir(a.common.out_dir.as_deref())?;

    let mut tables: Vec<LimitReport> =
        pool.install(|| paths.par_iter().map(|p| path_convergence_table(&flow, p, &probes)).collect::<Result<_, _>>())?;
    for t in &mut tables {
        t.tolerance = tol.get("path");
    }
    let mut distinct: Vec<f64> = Vec::new();
    for &w in &omegas {
        if !distinct.contains(&w) {
            distinct.push(w);
        }
    }
    let probe = match (&mode, distinct.as_slice()) {
        (Some(m), [w1, w2, ..]) => {
            let mut r = double_limit_probe(m, *w1, *w2, &probes)?;
            r.tolerance = tol.get("path");
            Some(r)
        }
        _ => None,
    };
    let converge = tables.iter().all(LimitReport::paths_converge);
    let verdict = match &probe {
        Some(r) if converge => r.verdict,
        _ => Verdict::Undetermined,
    };

    let mut csv = tol.header();
    csv.push_str(LIMIT_CSV_HEADER);
    csv.push('\n');
    for t in &tables {
        csv.push_str(&t.to_csv());
    }
    let mut kv = tol.header();
    for line in describe(&flow).lines() {
        let _ = writeln!(kv, "# flow.{line}");
    }
    let _ = writeln!(kv, "omegas={}", omegas.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>().join(","));
    let _ = writeln!(kv, "paths_converge={converge}");
    if let Some(r) = &probe {
        let off = LimitReport { deviations: Vec::new(), ..r.clone() };
        csv.push_str(&off.to_csv());
        for line in r.to_kv().lines().filter(|l| l.starts_with("gap.")) {
            let _ = writeln!(kv, "{line}");
        }
    }
    let _ = writeln!(kv, "verdict={}", if verdict == Verdict::DoesNotExist { "does-not-exist" } else { "undetermined" });
    write(&dir.join("pathlimit.csv"), &csv)?;
    write(&dir.join("pathlimit.txt"), &kv)?;

    println!("{:>12}  {:>12}  {:>12}  {:>11}", "omega", "nu", "t", "max_rel");
    for t in &tables {
        for d in &t.deviations {
            println!("{:>12.6e}  {:>12.6e}  {:>12.6e}  {:>11.3e}", d.omega, d.nu, d.t, d.max_rel);
        }
    }
    if let Some(g) = probe.as_ref().and_then(|r| r.gap) {
        println!("gap between omega={} and omega={}: {:e} (formula error {:e})", g.omega1, g.omega2, g.max_gap, g.formula_error);
    }
    println!("verdict: {}", verdict_text(verdict));
    if !converge {
        eprintln!("path deviation exceeds tolerance {:e}", tol.get("path"));
    }
    Ok(u8::from(!converge))
}

// --------------------------------------------------------------- export

pub fn export(a: &ExportArgs) -> CliResult<u8> {
    let (tol, _) = verify_tolerances(&a.common.tolerances)?;
    let pool = pool(a.common.threads)?;
    let dims = {
        let v: Vec<usize> = a
            .grid
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("--grid: '{s}' is not a count"))))
            .collect::<CliResult<_>>()?;
        <[usize; 3]>::try_from(v).map_err(|_| CliError::Usage("--grid expects NX,NY,NZ".into()))?
    };
    let grid = Grid::new(dims, parse_fixed::<6>("box", &a.bounds)?)?;
    let times = parse_list("times", &a.times)?;
    if a.prefix.is_empty() || a.prefix.contains(['/', '\\']) {
        return Err(CliError::Usage(format!("--prefix must be a plain file name, got '{}'", a.prefix)));
    }
    let (flow, _) = build_flow(&a.flow)?;
    let dir = out_dir(a.common.out_dir.as_deref())?;
    let ext = match a.format {
        FormatArg::Csv => "csv",
        FormatArg::Vtk => "vtk",
    };
    let mut manifest = tol.header();
    for line in describe(&flow).lines() {
        let _ = writeln!(manifest, "# flow.{line}");
    }
    let mut masked = 0usize;
    for (k, &t) in times.iter().enumerate() {
        let samples: Vec<_> = pool.install(|| {
            (0..grid.len())
                .into_par_iter()
                .map(|i| {
                    let x = grid.point(i);
                    if flow.domain.contains(x) {
                        flow.sample(t, x).map(Some)
                    } else {
                        Ok(None)
                    }
                })
                .collect::<Result<_, _>>()
        })?;
        let m = samples.iter().filter(|s| s.is_none()).count();
        masked += m;
        let body = match a.format {
            FormatArg::Csv => field_csv(t, &grid, &samples),
            FormatArg::Vtk => field_vtk(t, &grid, &samples),
        };
        let name = format!("{}_{k}.{ext}", a.prefix);
        write(&dir.join(&name), &body)?;
        let _ = writeln!(manifest, "file={name} t={t:?} points={} masked={m}", grid.len());
        println!("{}", dir.join(&name).display());
    }
    write(&dir.join(format!("{}.txt", a.prefix)), &manifest)?;
    if masked > 0 {
        eprintln!(
            "warning: {masked} of {} grid points lie outside the flow domain and were masked",
            grid.len() * times.len()
        );
    }
    Ok(0)
}
