//! Radial eigenvalue problems: Dirichlet modes of the ball and the disc,
//! and the annulus Sturm–Liouville problem −(rV')' = ζ²rV on [R₁, R₂] with
//! separated or coupled boundary conditions.
//!
//! Annulus conditions act on the state Y(r) = (V(r), rV'(r)). Solutions are
//! written in the closed-form basis {J₀(ζr), Y₀(ζr)}; eigenvalues are sign
//! changes of a 2×2 determinant located on a uniform ζ grid and refined by
//! Brent's method.

use alloc::vec::Vec;

use crate::fields::{BesselCombo, DerivativeEngine, RadialProfile, SinCosOverR};
use crate::specfun::{
    bessel_j0, bessel_j1, bessel_y0, bessel_y1, find_root, scan_brackets, RootBracket,
};
use crate::{Error, Result};

/// Ball of radius R₀ in ℝ³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallSpec {
    r0: f64,
}

impl BallSpec {
    pub fn new(r0: f64) -> Result<Self> {
        positive(r0, "ball radius")?;
        Ok(BallSpec { r0 })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }
}

/// Disc of radius R₀ in ℝ².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscSpec {
    r0: f64,
}

impl DiscSpec {
    pub fn new(r0: f64) -> Result<Self> {
        positive(r0, "disc radius")?;
        Ok(DiscSpec { r0 })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }
}

/// Annulus R₁ < r < R₂ in ℝ².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusSpec {
    r1: f64,
    r2: f64,
}

impl AnnulusSpec {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        positive(r1, "inner radius")?;
        if !(r2 > r1) || !r2.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!(
                "annulus needs 0 < R1 < R2, got R1={r1}, R2={r2}"
            )));
        }
        Ok(AnnulusSpec { r1, r2 })
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn width(&self) -> f64 {
        self.r2 - self.r1
    }
}

fn positive(v: f64, what: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!("{what} must be positive, got {v}")))
    }
}

/// m₁₁V(R₁) + m₁₂(rV')(R₁) = 0 and m₂₁V(R₂) + m₂₂(rV')(R₂) = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparatedBC {
    pub m: [[f64; 2]; 2],
}

impl SeparatedBC {
    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        let m = [[m11, m12], [m21, m22]];
        for (i, row) in m.iter().enumerate() {
            if row.iter().any(|v| !v.is_finite()) || (row[0] == 0.0 && row[1] == 0.0) {
                return Err(Error::InvalidBc(alloc::format!(
                    "row {} of the separated condition must be finite and nonzero",
                    i + 1
                )));
            }
        }
        Ok(SeparatedBC { m })
    }

    pub fn dirichlet() -> Self {
        SeparatedBC { m: [[1.0, 0.0], [1.0, 0.0]] }
    }

    pub fn neumann() -> Self {
        SeparatedBC { m: [[0.0, 1.0], [0.0, 1.0]] }
    }
}

/// Y(R₁) = K·Y(R₂) with det K = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoupledBC {
    pub k: [[f64; 2]; 2],
}

/// Allowed deviation of det K from one.
pub const COUPLED_DET_TOL: f64 = 1e-12;

impl CoupledBC {
    pub fn new(k: [[f64; 2]; 2]) -> Result<Self> {
        let det = det2(&k);
        if !((det - 1.0).abs() <= COUPLED_DET_TOL) {
            return Err(Error::InvalidBc(alloc::format!("coupling matrix must have det 1, got {det}")));
        }
        Ok(CoupledBC { k })
    }

    pub fn identity() -> Self {
        CoupledBC { k: [[1.0, 0.0], [0.0, 1.0]] }
    }
}

pub type Mat2 = [[f64; 2]; 2];

fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    core::array::from_fn(|i| core::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    BallRadial,
    DiscRadial,
    AnnulusSeparated,
    AnnulusCoupled,
}

/// How the eigenfunction's free scale was fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// sin(λr)/r as written, so the value at the origin is λ.
    SincUnscaled,
    /// max |V| = 1 on the domain, positive at the maximum.
    UnitMax,
}

/// Radial eigenfunction profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile {
    Sinc(SinCosOverR),
    Bessel(BesselCombo),
}

impl RadialProfile for Profile {
    fn reduced(&self, r: f64, out: &mut [f64]) {
        match self {
            Profile::Sinc(p) => p.reduced(r, out),
            Profile::Bessel(p) => p.reduced(r, out),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenMode {
    pub family: Family,
    /// 1-based position in the returned sequence.
    pub index: usize,
    /// λ, ξ or ζ, an inverse length.
    pub eigenvalue: f64,
    pub profile: Profile,
    pub normalization: Normalization,
    /// 2 for a double root of the coupled condition, 1 otherwise.
    pub multiplicity: u8,
}

impl EigenMode {
    pub fn value(&self, r: f64) -> f64 {
        self.profile.value(r)
    }

    /// The state (V(r), rV'(r)).
    pub fn state(&self, r: f64) -> [f64; 2] {
        [self.profile.value(r), r * self.profile.slope(r)]
    }
}

/// λₙ = nπ/R₀ with profile sin(λₙr)/r.
pub fn ball_radial_eigen(spec: BallSpec, n: usize) -> Result<EigenMode> {
    if n == 0 {
        return Err(Error::InvalidParameter("mode index starts at 1".into()));
    }
    let lambda = n as f64 * core::f64::consts::PI / spec.r0;
    Ok(EigenMode {
        family: Family::BallRadial,
        index: n,
        eigenvalue: lambda,
        profile: Profile::Sinc(SinCosOverR { lambda, alpha: 1.0, beta: 0.0 }),
        normalization: Normalization::SincUnscaled,
        multiplicity: 1,
    })
}

/// The j-th positive zero of J₀.
pub fn bessel_j0_zero(j: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidParameter("zero index starts at 1".into()));
    }
    // McMahon's estimate (j − 1/4)π is within 0.05 of the zero for every j
    let guess = (j as f64 - 0.25) * core::f64::consts::PI;
    let bracket = RootBracket::new(bessel_j0, guess - 0.4, guess + 0.4)?;
    find_root(bessel_j0, &bracket, 1e-15 * guess)
}

/// ξⱼ = zⱼ/R₀ with profile J₀(ξⱼr).
pub fn disc_radial_eigen(spec: DiscSpec, j: usize) -> Result<EigenMode> {
    let xi = bessel_j0_zero(j)? / spec.r0;
    Ok(EigenMode {
        family: Family::DiscRadial,
        index: j,
        eigenvalue: xi,
        profile: Profile::Bessel(BesselCombo { xi, c_j: 1.0, c_y: 0.0 }),
        normalization: Normalization::UnitMax,
        multiplicity: 1,
    })
}

/// Fundamental matrix Φ(r) whose columns are the states of J₀(ζr) and
/// Y₀(ζr). det Φ = 2/π.
pub fn fundamental_matrix(zeta: f64, r: f64) -> Result<Mat2> {
    let z = zeta * r;
    Ok([[bessel_j0(z), bessel_y0(z)?], [-z * bessel_j1(z), -z * bessel_y1(z)?]])
}

/// The matrix F with Y(R₁) = F·Y(R₂) for every solution of the radial
/// equation at this ζ.
pub fn transfer_matrix(spec: AnnulusSpec, zeta: f64) -> Result<Mat2> {
    if !(zeta > 0.0) || !zeta.is_finite() {
        return Err(Error::Domain(alloc::format!("transfer matrix needs zeta > 0, got {zeta}")));
    }
    let p1 = fundamental_matrix(zeta, spec.r1)?;
    let p2 = fundamental_matrix(zeta, spec.r2)?;
    let s = core::f64::consts::FRAC_PI_2;
    let inv2 = [[s * p2[1][1], -s * p2[0][1]], [-s * p2[1][0], s * p2[0][0]]];
    Ok(mul2(&p1, &inv2))
}

/// Grid on which sign changes of the eigencondition are looked for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanWindow {
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub step: f64,
}

impl ScanWindow {
    /// (10⁻⁶, 40/(R₂−R₁)] in steps of 0.02π/(R₂−R₁); the eigenvalue spacing
    /// tends to π/(R₂−R₁).
    pub fn default_for(spec: AnnulusSpec) -> Self {
        let w = spec.width();
        ScanWindow { zeta_min: 1e-6, zeta_max: 40.0 / w, step: 0.02 * core::f64::consts::PI / w }
    }
}

/// Separated eigencondition matrix: rows apply the two boundary rows to the
/// basis states at R₁ and R₂.
fn separated_matrix(spec: AnnulusSpec, bc: &SeparatedBC, zeta: f64) -> Result<Mat2> {
    let p1 = fundamental_matrix(zeta, spec.r1)?;
    let p2 = fundamental_matrix(zeta, spec.r2)?;
    let row = |m: &[f64; 2], p: &Mat2| [m[0] * p[0][0] + m[1] * p[1][0], m[0] * p[0][1] + m[1] * p[1][1]];
    Ok([row(&bc.m[0], &p1), row(&bc.m[1], &p2)])
}

pub fn separated_condition(spec: AnnulusSpec, bc: &SeparatedBC, zeta: f64) -> Result<f64> {
    Ok(det2(&separated_matrix(spec, bc, zeta)?))
}

/// det(F(ζ) − K), zero exactly when Y(R₁) = K·Y(R₂) has a nontrivial
/// solution.
pub fn coupled_condition(spec: AnnulusSpec, bc: &CoupledBC, zeta: f64) -> Result<f64> {
    let f = transfer_matrix(spec, zeta)?;
    let d: Mat2 = core::array::from_fn(|i| core::array::from_fn(|j| f[i][j] - bc.k[i][j]));
    Ok(det2(&d))
}

/// Unit null vector of a (numerically) singular 2×2 matrix, taken from the
/// row of larger norm.
fn null_vector(m: &Mat2) -> [f64; 2] {
    let n0 = libm::hypot(m[0][0], m[0][1]);
    let n1 = libm::hypot(m[1][0], m[1][1]);
    let (a, b, n) = if n0 >= n1 { (m[0][0], m[0][1], n0) } else { (m[1][0], m[1][1], n1) };
    if n == 0.0 {
        return [1.0, 0.0];
    }
    [-b / n, a / n]
}

/// Scales c_J J₀ + c_Y Y₀ to max |V| = 1 on [r1, r2], positive at the max.
fn normalize_on(mut p: BesselCombo, r1: f64, r2: f64) -> BesselCombo {
    const SAMPLES: usize = 400;
    let h = (r2 - r1) / SAMPLES as f64;
    let mut best = (r1, 0.0f64);
    for i in 0..=SAMPLES {
        let r = r1 + i as f64 * h;
        let v = p.value(r);
        if v.abs() > best.1.abs() {
            best = (r, v);
        }
    }
    // golden-section refinement of |V| around the best grid point
    let (mut a, mut b) = ((best.0 - h).max(r1), (best.0 + h).min(r2));
    let g = 0.5 * (libm::sqrt(5.0) - 1.0);
    for _ in 0..60 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if p.value(c).abs() > p.value(d).abs() {
            b = d;
        } else {
            a = c;
        }
    }
    let mut peak = p.value(0.5 * (a + b));
    for r in [r1, r2, best.0] {
        if p.value(r).abs() > peak.abs() {
            peak = p.value(r);
        }
    }
    if peak != 0.0 {
        p.c_j /= peak;
        p.c_y /= peak;
    }
    p
}

fn combo_from_state(spec: AnnulusSpec, zeta: f64, y_r2: [f64; 2]) -> Result<BesselCombo> {
    // c = Φ(R₂)⁻¹ Y(R₂), with det Φ = 2/π
    let p = fundamental_matrix(zeta, spec.r2)?;
    let s = core::f64::consts::FRAC_PI_2;
    let c_j = s * (p[1][1] * y_r2[0] - p[0][1] * y_r2[1]);
    let c_y = s * (-p[1][0] * y_r2[0] + p[0][0] * y_r2[1]);
    Ok(normalize_on(BesselCombo { xi: zeta, c_j, c_y }, spec.r1, spec.r2))
}

/// First `count` eigenvalues with separated conditions in the default
/// scan window.
pub fn annulus_eigen_separated(spec: AnnulusSpec, bc: SeparatedBC, count: usize) -> Result<Vec<EigenMode>> {
    annulus_eigen_separated_in(spec, bc, count, ScanWindow::default_for(spec))
}

pub fn annulus_eigen_separated_in(
    spec: AnnulusSpec,
    bc: SeparatedBC,
    count: usize,
    window: ScanWindow,
) -> Result<Vec<EigenMode>> {
    SeparatedBC::new(bc.m[0][0], bc.m[0][1], bc.m[1][0], bc.m[1][1])?;
    check_window(&window)?;
    let cond = |z: f64| separated_condition(spec, &bc, z).unwrap_or(f64::NAN);
    let mut modes = Vec::new();
    for bracket in scan_brackets(cond, window.zeta_min, window.zeta_max, window.step) {
        if modes.len() == count {
            break;
        }
        let zeta = find_root(cond, &bracket, 1e-15 * bracket.hi)?;
        let m = separated_matrix(spec, &bc, zeta)?;
        let c = null_vector(&m);
        let profile = normalize_on(BesselCombo { xi: zeta, c_j: c[0], c_y: c[1] }, spec.r1, spec.r2);
        modes.push(EigenMode {
            family: Family::AnnulusSeparated,
            index: modes.len() + 1,
            eigenvalue: zeta,
            profile: Profile::Bessel(profile),
            normalization: Normalization::UnitMax,
            multiplicity: 1,
        });
    }
    finish(modes, count)
}

fn check_window(w: &ScanWindow) -> Result<()> {
    if !(w.zeta_min > 0.0 && w.zeta_max > w.zeta_min && w.step > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("invalid scan window {w:?}")));
    }
    Ok(())
}

fn finish(modes: Vec<EigenMode>, count: usize) -> Result<Vec<EigenMode>> {
    if modes.len() < count {
        Err(Error::WindowExhausted { requested: count, found: modes })
    } else {
        Ok(modes)
    }
}

/// Threshold on |det(F − K)| at a sign-change-free local minimum for it to
/// count as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-10;

/// First `count` eigenvalues with coupled conditions in the default scan
/// window. A double root contributes two entries when it carries two
/// independent eigenfunctions.
pub fn annulus_eigen_coupled(spec: AnnulusSpec, bc: CoupledBC, count: usize) -> Result<Vec<EigenMode>> {
    annulus_eigen_coupled_in(spec, bc, count, ScanWindow::default_for(spec))
}

pub fn annulus_eigen_coupled_in(
    spec: AnnulusSpec,
    bc: CoupledBC,
    count: usize,
    window: ScanWindow,
) -> Result<Vec<EigenMode>> {
    CoupledBC::new(bc.k)?;
    check_window(&window)?;
    let cond = |z: f64| coupled_condition(spec, &bc, z).unwrap_or(f64::NAN);

    // (ζ, multiplicity) in increasing order
    let mut roots: Vec<(f64, u8)> = Vec::new();
    for bracket in scan_brackets(cond, window.zeta_min, window.zeta_max, window.step) {
        roots.push((find_root(cond, &bracket, 1e-15 * bracket.hi)?, 1));
    }
    for z in touching_roots(&cond, &window)? {
        if roots.iter().all(|(r, _)| (r - z).abs() > window.step) {
            roots.push((z, 2));
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut modes = Vec::new();
    for (zeta, mult) in roots {
        if modes.len() >= count {
            break;
        }
        let f = transfer_matrix(spec, zeta)?;
        let m: Mat2 = core::array::from_fn(|i| core::array::from_fn(|j| f[i][j] - bc.k[i][j]));
        let scale = f.iter().chain(bc.k.iter()).flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        let states: Vec<[f64; 2]> = if m.iter().flatten().all(|v| v.abs() <= 1e-7 * scale) {
            alloc::vec![[1.0, 0.0], [0.0, 1.0]]
        } else {
            alloc::vec![null_vector(&m)]
        };
        for y in states {
            if modes.len() >= count {
                break;
            }
            modes.push(EigenMode {
                family: Family::AnnulusCoupled,
                index: modes.len() + 1,
                eigenvalue: zeta,
                profile: Profile::Bessel(combo_from_state(spec, zeta, y)?),
                normalization: Normalization::UnitMax,
                multiplicity: mult,
            });
        }
    }
    finish(modes, count)
}

/// Local minima of |D| on the scan grid where D keeps its sign, refined as
/// zeros of D' and kept when |D| falls below [`DOUBLE_ROOT_TOL`].
fn touching_roots(cond: &dyn Fn(f64) -> f64, w: &ScanWindow) -> Result<Vec<f64>> {
    let n = libm::floor((w.zeta_max - w.zeta_min) / w.step) as usize;
    let grid = |i: usize| (w.zeta_min + i as f64 * w.step).min(w.zeta_max);
    let engine = DerivativeEngine { h: 1e-3 * w.step, ..DerivativeEngine::default() };
    let slope = |z: f64| engine.derivative(cond, z, 1);
    let mut out = Vec::new();
    if n < 2 {
        return Ok(out);
    }
    let mut prev = cond(grid(0));
    let mut cur = cond(grid(1));
    for i in 1..n {
        let next = cond(grid(i + 1));
        let same_sign = prev.signum() == cur.signum() && cur.signum() == next.signum();
        if same_sign && cur.abs() < prev.abs() && cur.abs() <= next.abs() {
            let (lo, hi) = (grid(i - 1), grid(i + 1));
            if let Ok(b) = RootBracket::new(slope, lo, hi) {
                let z = find_root(slope, &b, 1e-14 * hi)?;
                if cond(z).abs() < DOUBLE_ROOT_TOL {
                    out.push(z);
                }
            }
        }
        prev = cur;
        cur = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_modes() {
        let m = ball_radial_eigen(BallSpec::new(1.0).unwrap(), 1).unwrap();
        assert_eq!(m.eigenvalue, core::f64::consts::PI);
        assert_eq!(m.value(0.0), core::f64::consts::PI);
        let m = ball_radial_eigen(BallSpec::new(2.0).unwrap(), 3).unwrap();
        assert!((m.eigenvalue - 1.5 * core::f64::consts::PI).abs() < 1e-15);
        assert!(m.value(2.0).abs() < 1e-14);
        assert!(ball_radial_eigen(BallSpec::new(1.0).unwrap(), 0).is_err());
        assert!(BallSpec::new(0.0).is_err());
    }

    #[test]
    fn disc_modes() {
        let m = disc_radial_eigen(DiscSpec::new(1.0).unwrap(), 1).unwrap();
        assert!((m.eigenvalue - 2.404825557695773).abs() < 1e-14);
        assert!(m.value(1.0).abs() < 1e-10);
        let m = disc_radial_eigen(DiscSpec::new(2.0).unwrap(), 1).unwrap();
        assert!((m.eigenvalue - 1.2024127788478865).abs() < 1e-14);
        let m = disc_radial_eigen(DiscSpec::new(1.0).unwrap(), 2).unwrap();
        assert!((m.eigenvalue - 5.520078110286311).abs() < 1e-13);
    }

    #[test]
    fn bc_validation() {
        assert!(SeparatedBC::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(SeparatedBC::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(CoupledBC::new([[2.0, 0.0], [0.0, 1.0]]).is_err());
        assert!(CoupledBC::new([[2.0, 0.0], [0.0, 0.5]]).is_ok());
        assert!(AnnulusSpec::new(2.0, 1.0).is_err());
    }

    #[test]
    fn transfer_matrix_is_unimodular() {
        let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
        for z in [0.5, 1.0, 5.0] {
            let f = transfer_matrix(spec, z).unwrap();
            assert!((det2(&f) - 1.0).abs() < 1e-10);
        }
        assert!(transfer_matrix(spec, 0.0).is_err());
    }

    #[test]
    fn thin_annulus_transfer_is_near_identity() {
        let spec = AnnulusSpec::new(1.0, 1.0 + 1e-7).unwrap();
        let f = transfer_matrix(spec, 3.0).unwrap();
        assert!((f[0][0] - 1.0).abs() < 1e-5 && (f[1][1] - 1.0).abs() < 1e-5);
        assert!(f[0][1].abs() < 1e-5 && f[1][0].abs() < 1e-5);
    }

    #[test]
    fn dirichlet_annulus_reference() {
        let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
        let modes = annulus_eigen_separated(spec, SeparatedBC::dirichlet(), 4).unwrap();
        let expect = [3.1230309195956916, 6.273435713992182, 9.41820754225158, 12.561423185525365];
        for (m, e) in modes.iter().zip(expect) {
            assert!((m.eigenvalue - e).abs() < 1e-10, "{} vs {e}", m.eigenvalue);
            assert!(m.value(1.0).abs() < 1e-9 && m.value(2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn neumann_skips_constant_mode() {
        let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
        let modes = annulus_eigen_separated(spec, SeparatedBC::neumann(), 2).unwrap();
        assert!(modes[0].eigenvalue > 1.0);
        for m in &modes {
            assert!(m.state(1.0)[1].abs() < 1e-9 && m.state(2.0)[1].abs() < 1e-9);
        }
    }

    #[test]
    fn window_exhaustion_keeps_partial_results() {
        let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
        let w = ScanWindow { zeta_min: 1e-6, zeta_max: 7.0, step: 0.05 };
        match annulus_eigen_separated_in(spec, SeparatedBC::dirichlet(), 5, w) {
            Err(Error::WindowExhausted { requested: 5, found }) => assert_eq!(found.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coupled_identity_reference() {
        let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
        let modes = annulus_eigen_coupled(spec, CoupledBC::identity(), 2).unwrap();
        assert!((modes[0].eigenvalue - 5.934122494770806).abs() < 1e-9);
        assert!((modes[1].eigenvalue - 6.612685806497998).abs() < 1e-9);
        for m in &modes {
            let (y1, y2) = (m.state(1.0), m.state(2.0));
            assert!((y1[0] - y2[0]).abs() < 1e-9 && (y1[1] - y2[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn constructed_fixed_point_is_double_root() {
        let spec = AnnulusSpec::new(1.0, 2.0).unwrap();
        let zs = 4.321;
        let bc = CoupledBC::new(transfer_matrix(spec, zs).unwrap()).unwrap();
        let modes = annulus_eigen_coupled(spec, bc, 8).unwrap();
        let hits: Vec<_> = modes.iter().filter(|m| (m.eigenvalue - zs).abs() < 1e-7).collect();
        assert_eq!(hits.len(), 2);
        assert!(hits.iter().all(|m| m.multiplicity == 2));
    }
}
