//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any
//! fails. Reference values come from the independent oracles shared with
//! the core crate's tests.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use beltrami_core::eigen::{
    annulus_eigen_coupled, annulus_eigen_separated, ball_radial_eigen, disc_radial_eigen, transfer_matrix,
    AnnulusSpec, BallSpec, CoupledBC, DiscSpec, SeparatedBC,
};
use beltrami_core::fields::{zero, BesselCombo, GaussPoly, Polynomial, RadialProfile, Scalar};
use beltrami_core::solutions::{
    cylinder_mode, euler_static, ns_decaying, radial_mode, swirl2d, BeltramiMode, Domain, FlowSolution, Swirl2D,
    SymplecticPair,
};
use beltrami_core::specfun::bessel_j0;
use beltrami_core::turbulence::{
    double_limit_probe, heat_kernel_2d, heat_kernel_radial, path_convergence_table, path_limit_2d,
    path_limit_eigen, PathSpec, Verdict,
};
use beltrami_core::verify::{ResidualReport, SampleSet, SampleSpec, Verifier};
use beltrami_core::Axis;
use oracles::{j0_integral, scan_roots, shoot_coupled, shoot_dirichlet, widened_gaussian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one criterion: pass flag and a one-line summary.
type Outcome = (bool, String);

/// Running maximum of |error| with a pass flag against a tolerance.
struct Worst {
    tol: f64,
    max: f64,
}

impl Worst {
    fn new(tol: f64) -> Self {
        Worst { tol, max: 0.0 }
    }

    fn add(&mut self, err: f64) {
        self.max = if err.is_nan() { f64::INFINITY } else { self.max.max(err) };
    }

    fn ok(&self) -> bool {
        self.max <= self.tol
    }

    fn show(&self, what: &str) -> String {
        format!("{what} {:.2e} (tol {:.0e})", self.max, self.tol)
    }
}

fn judged(r: &ResidualReport, name: &str) -> f64 {
    r.entry(name).map_or(f64::INFINITY, |e| e.judged())
}

fn ball_spectrum() -> Outcome {
    let mut w = Worst::new(1e-12);
    for r0 in [1.0, 0.3, 2.5] {
        for n in 1..=5 {
            let m = ball_radial_eigen(BallSpec::new(r0).unwrap(), n).unwrap();
            w.add((m.eigenvalue * r0 - n as f64 * std::f64::consts::PI).abs());
        }
    }
    (w.ok(), w.show("max |λₙR₀ − nπ|"))
}

fn disc_spectrum() -> Outcome {
    let zeros = scan_roots(&j0_integral, 0.5, 0.05, 4);
    let mut w = Worst::new(1e-10);
    for r0 in [1.0, 3.0] {
        for (j, z) in zeros.iter().enumerate() {
            let m = disc_radial_eigen(DiscSpec::new(r0).unwrap(), j + 1).unwrap();
            w.add((m.eigenvalue * r0 - z).abs());
        }
    }
    (w.ok(), w.show("max |ξⱼR₀ − j₀,ⱼ|"))
}

fn annulus() -> Outcome {
    let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
    let mut eig = Worst::new(1e-8);
    let dir = annulus_eigen_separated(spec, SeparatedBC::dirichlet(), 3).unwrap();
    let shot = scan_roots(&|z| shoot_dirichlet(1.0, 2.0, z), 0.5, 0.05, 3);
    dir.iter().zip(&shot).for_each(|(m, z)| eig.add((m.eigenvalue - z).abs()));
    let k = [[2.0, 0.3], [0.0, 0.5]];
    let cpl = annulus_eigen_coupled(spec, CoupledBC::new(k).unwrap(), 3).unwrap();
    let shot = scan_roots(&|z| shoot_coupled(1.0, 2.0, k, z), 0.05, 0.01, 3);
    cpl.iter().zip(&shot).for_each(|(m, z)| eig.add((m.eigenvalue - z).abs()));
    let mut det = Worst::new(1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let zeta = 0.05 + 30.0 * rng.random::<f64>();
        let f = transfer_matrix(spec, zeta).unwrap();
        det.add((f[0][0] * f[1][1] - f[0][1] * f[1][0] - 1.0).abs());
    }
    (eig.ok() && det.ok(), format!("{}; {}", eig.show("eigenvalue vs shooting"), det.show("|det F − 1|")))
}

fn ns_exactness() -> Outcome {
    let v = Verifier::default();
    let mut mom = Worst::new(1e-6);
    let mut div = Worst::new(1e-8);
    let mut cases = 0;
    for lambda in [-2.0, 1.0, 5.0] {
        for (alpha, beta) in [(1.0, 0.0), (0.0, 1.0), (2.0, -3.0)] {
            let mode = radial_mode(lambda, alpha, beta).unwrap();
            for nu in [0.01, 1.0] {
                let flow = ns_decaying(&mode, nu).unwrap();
                for t in [0.0, 0.5, 2.0] {
                    let s = SampleSpec::for_flow(&flow, 200, 100 + cases).with_times(vec![t]).generate().unwrap();
                    let r = v.ns_residual(&flow, &s).unwrap();
                    mom.add(judged(&r, "momentum"));
                    div.add(judged(&r, "div"));
                    cases += 1;
                }
            }
        }
    }
    let flow = ns_decaying(&radial_mode(1.0, 1.0, 0.0).unwrap(), 0.5).unwrap();
    let s = SampleSpec::for_flow(&flow, 200, 7).with_times(vec![0.0, 1.0]).generate().unwrap();
    let control = judged(&v.ns_residual(&flow.with_pressure(zero()), &s).unwrap(), "momentum");
    let ok = cases == 54 && mom.ok() && div.ok() && control > 1e-2;
    (ok, format!("{cases} cases; {}; {}; P≡0 control {control:.2e} (must exceed 1e-2)", mom.show("momentum"), div.show("div")))
}

fn disc_mode(eta: f64, alpha: f64, beta: f64) -> BeltramiMode {
    let disc = disc_radial_eigen(DiscSpec::new(1.0).unwrap(), 1).unwrap();
    cylinder_mode(&disc, eta, alpha, beta).unwrap()
}

fn annulus_mode(eta: f64, alpha: f64, beta: f64) -> BeltramiMode {
    let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
    let modes = annulus_eigen_separated(spec, SeparatedBC::dirichlet(), 2).unwrap();
    cylinder_mode(&modes[1], eta, alpha, beta).unwrap()
}

fn gaussian_swirl() -> Swirl2D {
    Swirl2D::new(1.0, Arc::new(GaussPoly::gaussian(-1.0, 0.25)), Arc::new(GaussPoly::gaussian(1.0, 0.5))).unwrap()
}

fn euler_exactness() -> Outcome {
    let v = Verifier::default();
    let flows: Vec<(&str, FlowSolution)> = vec![
        ("radial", euler_static(&radial_mode(-2.0, 2.0, -3.0).unwrap())),
        ("radial-smooth", euler_static(&radial_mode(1.0, 1.0, 0.0).unwrap())),
        ("disc", euler_static(&disc_mode(1.5, 2.0, -3.0))),
        ("annulus", euler_static(&annulus_mode(0.7, 1.0, 1.0))),
        ("swirl2d", swirl2d(&gaussian_swirl())),
    ];
    let mut eu = Worst::new(1e-6);
    let mut gc = Worst::new(1e-5);
    for (i, (_, f)) in flows.iter().enumerate() {
        let s = SampleSpec::for_flow(f, 100, 40 + i as u64).generate().unwrap();
        let r = v.euler_residual(f, &s).unwrap();
        eu.add(judged(&r, "momentum"));
        eu.add(judged(&r, "div_fd"));
        gc.add(judged(&v.gradient_consistency(f, &s).unwrap(), "curl_advection"));
    }
    (eu.ok() && gc.ok(), format!("{} classes; {}; {}", flows.len(), eu.show("euler"), gc.show("gradient_consistency")))
}

fn cubic(rng: &mut ChaCha8Rng) -> Scalar {
    let mut terms = Vec::new();
    for a in 0..=3u8 {
        for b in 0..=(3 - a) {
            for d in 0..=(3 - a - b) {
                terms.push((rng.random_range(-2.0..2.0), [a, b, d]));
            }
        }
    }
    Arc::new(Polynomial::new(terms))
}

fn unit_box(n: usize, seed: u64) -> SampleSet {
    SampleSpec::for_domain(&Domain::WHOLE, None, false, n, seed).with_times(vec![0.0, 0.7]).generate().unwrap()
}

fn structural() -> Outcome {
    let v = Verifier::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut vort = Worst::new(1e-6);
    let mut proj = Worst::new(1e-6);
    for i in 0..20 {
        let a: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let axis = Axis::new(a[0], a[1], a[2] + 0.5f64.copysign(a[2])).unwrap();
        let pair = SymplecticPair::new(axis, cubic(&mut rng), cubic(&mut rng));
        let s = unit_box(10, 60 + i);
        let r = v.projection_identities(&pair, &s).unwrap();
        proj.add(judged(&r, "phi"));
        proj.add(judged(&r, "psi"));
        vort.add(judged(&v.vorticity_formula(&pair, &s).unwrap(), "curl"));
    }
    let modes = [
        (radial_mode(2.0, 1.0, 0.0).unwrap().with_axis(Axis::new(0.3, -0.4, 1.0).unwrap()), 0.1),
        (radial_mode(1.0, 1.0, 0.0).unwrap(), 0.3),
        (disc_mode(1.0, 1.0, 0.0), 1.0),
    ];
    let mut projected = Worst::new(1e-4);
    for (i, (m, nu)) in modes.iter().enumerate() {
        let s = unit_box(24, 80 + i as u64);
        let r = v.projected_residuals(&m.pair(*nu), *nu, &s).unwrap();
        projected.add(judged(&r, "phi"));
        projected.add(judged(&r, "psi"));
        vort.add(judged(&v.vorticity_formula(&m.pair(*nu), &s).unwrap(), "curl"));
    }
    let mut bel = Worst::new(1e-6);
    let mut control: f64 = f64::INFINITY;
    for m in [radial_mode(1.0, 1.0, 0.0).unwrap(), radial_mode(-2.0, 2.0, -3.0).unwrap(), disc_mode(1.0, 1.0, 1.0)] {
        let f = euler_static(&m);
        let s = SampleSpec::for_flow(&f, 60, 90).generate().unwrap();
        bel.add(judged(&v.beltrami_check(&f, &s).unwrap(), "curl"));
        let c = v.beltrami_sign_control(&f, &s).unwrap();
        control = control.min(judged(&c, "curl"));
    }
    let control_fails = control > 1e-6;
    let ok = vort.ok() && proj.ok() && projected.ok() && bel.ok() && control_fails;
    (
        ok,
        format!(
            "{}; {}; {}; {}; +λ control {control:.2e} (must fail)",
            vort.show("vorticity formula"),
            proj.show("projection"),
            projected.show("projected"),
            bel.show("beltrami")
        ),
    )
}

fn heat_kernel() -> Outcome {
    let mut mass = Worst::new(1e-10);
    for omega in [0.01, 0.1, 1.0, 10.0] {
        for x in [[0.0, 0.0], [0.3, -1.2], [4.0, 2.0]] {
            mass.add((heat_kernel_2d(&|_| 1.0, omega, x).unwrap() - 1.0).abs());
            mass.add((heat_kernel_radial(&|_| 1.0, omega, x[0].hypot(x[1])).unwrap() - 1.0).abs());
        }
    }
    let mut gauss = Worst::new(1e-8);
    for sigma in [0.1, 0.4, 2.0] {
        let g = |s: f64| (-s * s / (4.0 * sigma)).exp();
        for omega in [0.05, 0.5, 3.0] {
            for r in [0.0, 0.7, 2.5] {
                let e = widened_gaussian(sigma, omega, r);
                gauss.add((heat_kernel_radial(&g, omega, r).unwrap() - e).abs());
                gauss.add((heat_kernel_2d(&g, omega, [0.6 * r, 0.8 * r]).unwrap() - e).abs());
            }
        }
    }
    let mut decay = Worst::new(1e-6);
    let zeros = scan_roots(&j0_integral, 0.5, 0.05, 3);
    for &xi in &zeros {
        let p = BesselCombo { xi, c_j: 1.0, c_y: 0.0 };
        for omega in [0.05, 0.3] {
            for r in [0.0, 0.5, 1.3, 3.0] {
                let expect = (-omega * xi * xi).exp() * bessel_j0(xi * r);
                decay.add((heat_kernel_radial(&|s| p.value(s), omega, r).unwrap() - expect).abs());
            }
            let expect = (-omega * xi * xi).exp() * p.value(0.5);
            decay.add((heat_kernel_2d(&|s| p.value(s), omega, [0.4, -0.3]).unwrap() - expect).abs());
        }
    }
    let mut semi = Worst::new(1e-7);
    let f = |s: f64| (-s * s).exp() * (1.0 + s * s).cos();
    for (w1, w2) in [(0.2, 0.3), (0.05, 1.0)] {
        let once = |s: f64| heat_kernel_radial(&f, w1, s).unwrap();
        for r in [0.0, 0.8, 2.0] {
            let twice = heat_kernel_radial(&once, w2, r).unwrap();
            semi.add((twice - heat_kernel_radial(&f, w1 + w2, r).unwrap()).abs());
        }
    }
    let ok = mass.ok() && gauss.ok() && decay.ok() && semi.ok();
    (ok, format!("{}; {}; {}; {}", mass.show("mass"), gauss.show("gaussian"), decay.show("bessel decay"), semi.show("semigroup")))
}

fn path_limits() -> Outcome {
    let m = radial_mode(1.0, 1.0, 0.0).unwrap();
    let probes = SampleSpec::for_mode(&m, 50, 5).generate().unwrap();
    let mut dev = Worst::new(1e-13);
    for (mode, nu) in [(m.clone(), 1.0), (radial_mode(-2.0, 2.0, -3.0).unwrap(), 0.3), (disc_mode(1.0, 1.0, 0.0), 0.05)] {
        let flow = ns_decaying(&mode, nu).unwrap();
        let s = SampleSpec::for_mode(&mode, 50, 6).generate().unwrap();
        for omega in [0.1, 0.5, 1.0] {
            let path = PathSpec::geometric(omega, 10.0, 1e6, 6).unwrap();
            for d in path_convergence_table(&flow, &path, &s).unwrap().deviations {
                dev.add(d.max_rel);
            }
        }
    }
    let r = double_limit_probe(&m, 0.1, 1.0, &probes).unwrap();
    let gap = r.gap.expect("two paths give a gap");
    let mut formula = Worst::new(1e-10);
    formula.add(gap.formula_error / gap.u0_max);
    let verdict = r.verdict == Verdict::DoesNotExist;
    let v = Verifier::default();
    let mut eu = Worst::new(1e-6);
    for limit in [
        path_limit_eigen(&m, 0.1).unwrap(),
        path_limit_eigen(&radial_mode(-2.0, 2.0, -3.0).unwrap(), 0.4).unwrap(),
        path_limit_2d(&swirl2d(&gaussian_swirl()), 0.2).unwrap(),
    ] {
        let n = if limit.lambda.is_some() { 60 } else { 12 };
        let s = SampleSpec::for_flow(&limit, n, 3).generate().unwrap();
        eu.add(judged(&v.euler_residual(&limit, &s).unwrap(), "momentum"));
    }
    let ok = dev.ok() && formula.ok() && verdict && eu.ok();
    (
        ok,
        format!(
            "{}; {}; verdict(0.1, 1) = {:?}; {}",
            dev.show("path deviation"),
            formula.show("gap formula"),
            r.verdict,
            eu.show("limit euler")
        ),
    )
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_beltrami");
    let runs: [&[&str]; 3] = [
        &["verify", "--class", "radial", "--lambda", "-2", "--alpha", "2", "--beta", "-3", "--nu", "0.01", "--samples", "64", "--seed", "17", "--times", "0,0.5"],
        &["pathlimit", "--class", "radial", "--lambda", "1", "--omega-range", "0.1,1", "--omega-count", "2", "--seed", "17"],
        &["export", "--class", "disc", "--nu", "0.1", "--grid", "4,3,3", "--times", "0,1.5"],
    ];
    let files = ["verify.csv", "pathlimit.csv", "field_0.csv", "field_1.csv"];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (k, d) in dirs.iter().enumerate() {
        for args in runs {
            let threads = if k == 0 { "1" } else { "3" };
            let st = Command::new(bin).args(args).args(["--threads", threads]).env("BELTRAMI_OUT_DIR", d.path()).output().unwrap();
            if !st.status.success() {
                return (false, format!("{args:?} exited with {:?}", st.status.code()));
            }
        }
    }
    let mut same = 0;
    for f in files {
        let a = std::fs::read(dirs[0].path().join(f)).unwrap();
        let b = std::fs::read(dirs[1].path().join(f)).unwrap();
        if a == b && !a.is_empty() {
            same += 1;
        }
    }
    (same == files.len(), format!("{same}/{} CSV files byte-identical across two seeded runs", files.len()))
}

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "ball spectrum", budget: Some(Duration::from_secs(1)), run: ball_spectrum },
        Criterion { id: 2, name: "disc spectrum", budget: Some(Duration::from_secs(5)), run: disc_spectrum },
        Criterion { id: 3, name: "annulus spectrum", budget: Some(Duration::from_secs(30)), run: annulus },
        Criterion { id: 4, name: "navier-stokes exactness", budget: Some(Duration::from_secs(120)), run: ns_exactness },
        Criterion { id: 5, name: "euler exactness", budget: None, run: euler_exactness },
        Criterion { id: 6, name: "structural identities", budget: None, run: structural },
        Criterion { id: 7, name: "heat kernel", budget: None, run: heat_kernel },
        Criterion { id: 8, name: "path limits", budget: None, run: path_limits },
        Criterion { id: 9, name: "determinism", budget: None, run: determinism },
    ];
    let mut failed = 0;
    let start = Instant::now();
    for c in &criteria {
        let t0 = Instant::now();
        let (ok, detail) = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| (false, "panicked".into()));
        let dt = t0.elapsed();
        let in_time = c.budget.is_none_or(|b| dt <= b);
        let pass = ok && in_time;
        failed += usize::from(!pass);
        let budget = c.budget.map(|b| format!(" / {}s", b.as_secs())).unwrap_or_default();
        println!(
            "criterion {} {:<24} {}  [{:.2}s{budget}]  {detail}",
            c.id,
            c.name,
            if pass { "PASS" } else { "FAIL" },
            dt.as_secs_f64()
        );
    }
    println!("acceptance: {}/{} passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
