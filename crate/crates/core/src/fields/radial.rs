use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Partial, ScalarField, MAX_ORDER};
use crate::specfun::{bessel_j_over_pow, bessel_yn};
use crate::{Point3, Vec3};

/// A function of one radius f(r), described through its reduced
/// derivatives gₖ = ((1/r) d/dr)ᵏ f.
///
/// Cartesian partials of f(|x|) follow from ∂ᵢ gₖ = xᵢ gₖ₊₁, which keeps the
/// derivative algebra free of 1/r factors for profiles smooth at the
/// origin.
pub trait RadialProfile: Send + Sync {
    /// Writes gₖ(r) into `out[k]` for `k = 0..out.len()`.
    fn reduced(&self, r: f64, out: &mut [f64]);

    fn value(&self, r: f64) -> f64 {
        let mut g = [0.0; 1];
        self.reduced(r, &mut g);
        g[0]
    }

    /// Ordinary derivative f'(r) = r·g₁.
    fn slope(&self, r: f64) -> f64 {
        let mut g = [0.0; 2];
        self.reduced(r, &mut g);
        r * g[1]
    }

    /// Radial Laplacian f'' + (dim−1)/r·f' = dim·g₁ + r²g₂.
    fn laplacian(&self, r: f64, dim: usize) -> f64 {
        let mut g = [0.0; 3];
        self.reduced(r, &mut g);
        dim as f64 * g[1] + r * r * g[2]
    }

    /// True when the profile is known to vanish identically.
    fn is_zero(&self) -> bool {
        false
    }
}

/// α sin(λr)/r + β cos(λr)/r, the radial Helmholtz solutions in ℝ³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinCosOverR {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Below this |λr| the sine part is summed as a series in r².
const SINC_SERIES_LIMIT: f64 = 4.0;

impl SinCosOverR {
    /// gₖ of sin(λr)/r from its Taylor series in s = r²:
    /// gₖ = λ Σₘ 2ᵏ (m+k)!/m! (−λ²)^{m+k}/(2m+2k+1)! sᵐ.
    fn sin_series(&self, r: f64, out: &mut [f64]) {
        let l2 = self.lambda * self.lambda;
        let s = r * r;
        let mut lead = self.lambda; // λ 2ᵏ k! (−λ²)ᵏ/(2k+1)!
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                let kf = k as f64;
                lead *= 2.0 * kf * (-l2) / ((2.0 * kf) * (2.0 * kf + 1.0));
            }
            let mut term = lead;
            let mut sum = 0.0;
            for m in 0..200 {
                sum += term;
                let (mf, kf) = (m as f64, k as f64);
                term *= (mf + kf + 1.0) / (mf + 1.0) * (-l2 * s)
                    / ((2.0 * mf + 2.0 * kf + 2.0) * (2.0 * mf + 2.0 * kf + 3.0));
                if term.abs() <= 1e-18 * sum.abs() || term == 0.0 {
                    break;
                }
            }
            *slot = sum;
        }
    }

    /// gₖ of (a·sin(λr) + b·cos(λr))/r by repeated application of (1/r)d/dr
    /// to Σⱼ (aⱼ sin + bⱼ cos) r^{−j}.
    fn closed_form(&self, a0: f64, b0: f64, r: f64, out: &mut [f64]) {
        const N: usize = 2 * MAX_ORDER + 4;
        let mut a = [0.0; N];
        let mut b = [0.0; N];
        a[1] = a0;
        b[1] = b0;
        let (s, c) = (libm::sin(self.lambda * r), libm::cos(self.lambda * r));
        let inv = 1.0 / r;
        let l = self.lambda;
        let len = out.len();
        for (k, slot) in out.iter_mut().enumerate() {
            let top = 2 * k + 1;
            let mut v = 0.0;
            let mut p = libm::pow(inv, top as f64);
            for j in (1..=top).rev() {
                v += (a[j] * s + b[j] * c) * p;
                p *= r;
            }
            *slot = v;
            if k + 1 < len {
                let mut na = [0.0; N];
                let mut nb = [0.0; N];
                for j in 1..=top {
                    let jf = j as f64;
                    // sin·r^{−j} → λ cos r^{−j−1} − j sin r^{−j−2}
                    nb[j + 1] += l * a[j];
                    na[j + 2] -= jf * a[j];
                    // cos·r^{−j} → −λ sin r^{−j−1} − j cos r^{−j−2}
                    na[j + 1] -= l * b[j];
                    nb[j + 2] -= jf * b[j];
                }
                a = na;
                b = nb;
            }
        }
    }
}

impl RadialProfile for SinCosOverR {
    fn reduced(&self, r: f64, out: &mut [f64]) {
        let n = out.len();
        if self.alpha != 0.0 {
            if (self.lambda * r).abs() < SINC_SERIES_LIMIT {
                self.sin_series(r, out);
                out.iter_mut().for_each(|v| *v *= self.alpha);
            } else {
                self.closed_form(self.alpha, 0.0, r, out);
            }
        } else {
            out.iter_mut().for_each(|v| *v = 0.0);
        }
        if self.beta != 0.0 {
            let mut tmp = [0.0; MAX_ORDER + 1];
            self.closed_form(0.0, self.beta, r, &mut tmp[..n]);
            for (o, t) in out.iter_mut().zip(&tmp[..n]) {
                *o += t;
            }
        }
    }
}

/// c_J·J₀(ξr) + c_Y·Y₀(ξr), the radial Helmholtz solutions in ℝ².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselCombo {
    pub xi: f64,
    pub c_j: f64,
    pub c_y: f64,
}

impl RadialProfile for BesselCombo {
    fn reduced(&self, r: f64, out: &mut [f64]) {
        // ((1/r)d/dr)ᵏ Z₀(ξr) = (−ξ²)ᵏ Zₖ(z)/zᵏ, z = ξr
        let n = out.len();
        let z = self.xi * r;
        let mut jk = [0.0; MAX_ORDER + 1];
        if self.c_j != 0.0 {
            bessel_j_over_pow(z, &mut jk[..n]);
        }
        let mut yk = [0.0; MAX_ORDER + 1];
        if self.c_y != 0.0 && bessel_yn(z, &mut yk[..n]).is_err() {
            yk.iter_mut().for_each(|v| *v = f64::NAN);
        }
        let mut scale = 1.0;
        let mut zpow = 1.0;
        for k in 0..n {
            let y = if self.c_y != 0.0 { self.c_y * yk[k] / zpow } else { 0.0 };
            out[k] = scale * (self.c_j * jk[k] + y);
            scale *= -self.xi * self.xi;
            zpow *= z;
        }
    }
}

/// e^{−q r²} Σⱼ cⱼ rʲ with integer (possibly negative) powers. Covers
/// Gaussians, polynomials in r and the reduced derivatives of both.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussPoly {
    pub q: f64,
    pub terms: Vec<(i32, f64)>,
}

impl GaussPoly {
    /// c·e^{−r²/(4σ)}
    pub fn gaussian(c: f64, sigma: f64) -> Self {
        GaussPoly { q: 0.25 / sigma, terms: alloc::vec![(0, c)] }
    }

    /// The profile f ≡ 0.
    pub fn zero() -> Self {
        GaussPoly { q: 0.0, terms: Vec::new() }
    }

    /// Polynomial Σ pₙ rⁿ.
    pub fn polynomial(coeffs: &[(i32, f64)]) -> Self {
        GaussPoly { q: 0.0, terms: coeffs.to_vec() }
    }

    fn apply_d(&self) -> GaussPoly {
        // (1/r)d/dr [e^{−qr²} rʲ] = e^{−qr²} (j r^{j−2} − 2q rʲ)
        let mut out: Vec<(i32, f64)> = Vec::new();
        let mut push = |p: i32, c: f64| {
            if c == 0.0 {
                return;
            }
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some(e) => e.1 += c,
                None => out.push((p, c)),
            }
        };
        for &(j, c) in &self.terms {
            push(j - 2, j as f64 * c);
            push(j, -2.0 * self.q * c);
        }
        GaussPoly { q: self.q, terms: out }
    }

    fn eval(&self, r: f64) -> f64 {
        let poly: f64 = self.terms.iter().map(|&(j, c)| c * libm::pow(r, j as f64)).sum();
        if self.q == 0.0 {
            poly
        } else {
            libm::exp(-self.q * r * r) * poly
        }
    }
}

impl RadialProfile for GaussPoly {
    fn is_zero(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c == 0.0)
    }

    fn reduced(&self, r: f64, out: &mut [f64]) {
        let mut cur = self.clone();
        let len = out.len();
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = cur.eval(r);
            if k + 1 < len {
                cur = cur.apply_d();
            }
        }
    }
}

/// f(r) = c·(√π/2)·erf(r), the profile whose slope is c·e^{−r²}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratedGaussian {
    pub c: f64,
}

impl RadialProfile for IntegratedGaussian {
    fn reduced(&self, r: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        out[0] = self.c * 0.5 * libm::sqrt(core::f64::consts::PI) * libm::erf(r);
        if out.len() > 1 {
            let g1 = GaussPoly { q: 1.0, terms: alloc::vec![(-1, self.c)] };
            g1.reduced(r, &mut out[1..]);
        }
    }
}

/// Radius measured in all three coordinates, or only in (x₁, x₂).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Spherical,
    Cylindrical,
}

impl Geometry {
    pub fn radius(self, x: Point3) -> f64 {
        match self {
            Geometry::Spherical => x.norm(),
            Geometry::Cylindrical => x.cyl_radius(),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Geometry::Spherical => 3,
            Geometry::Cylindrical => 2,
        }
    }
}

/// α sin(ηx₃) + β cos(ηx₃).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxialFactor {
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
}

impl AxialFactor {
    pub fn derivative(&self, n: u8, x3: f64) -> f64 {
        let (mut a, mut b) = (self.alpha, self.beta);
        for _ in 0..n {
            // d/dx (a sin + b cos) = η(a cos − b sin)
            let na = -self.eta * b;
            b = self.eta * a;
            a = na;
        }
        a * libm::sin(self.eta * x3) + b * libm::cos(self.eta * x3)
    }
}

/// amplitude · e^{−decay·t} · f(r) · Z(x₃)
///
/// With [`Geometry::Spherical`], r = |x| and there is no axial factor. With
/// [`Geometry::Cylindrical`], r = √(x₁²+x₂²) and the optional axial factor
/// carries the x₃ dependence.
#[derive(Clone)]
pub struct RadialField {
    profile: Arc<dyn RadialProfile>,
    geometry: Geometry,
    axial: Option<AxialFactor>,
    decay: f64,
    amplitude: f64,
}

const TERM_CAP: usize = 160;

#[derive(Clone, Copy)]
struct Term {
    c: f64,
    gamma: [u8; 3],
    k: u8,
}

/// Expands ∂^β f(r) = Σ c·x^γ·g_k over the active coordinates.
fn expand(beta: [u8; 3], active: usize, buf: &mut [Term; TERM_CAP]) -> usize {
    let mut cur = [Term { c: 0.0, gamma: [0; 3], k: 0 }; TERM_CAP];
    cur[0] = Term { c: 1.0, gamma: [0; 3], k: 0 };
    let mut len = 1;
    for i in 0..active {
        for _ in 0..beta[i] {
            let mut next_len = 0;
            let mut add = |c: f64, gamma: [u8; 3], k: u8, out: &mut [Term; TERM_CAP]| {
                if let Some(t) = out[..next_len].iter_mut().find(|t| t.gamma == gamma) {
                    t.c += c;
                } else {
                    out[next_len] = Term { c, gamma, k };
                    next_len += 1;
                }
            };
            for t in &cur[..len] {
                if t.gamma[i] > 0 {
                    let mut g = t.gamma;
                    g[i] -= 1;
                    add(t.c * t.gamma[i] as f64, g, t.k, buf);
                }
                let mut g = t.gamma;
                g[i] += 1;
                add(t.c, g, t.k + 1, buf);
            }
            cur[..next_len].copy_from_slice(&buf[..next_len]);
            len = next_len;
        }
    }
    buf[..len].copy_from_slice(&cur[..len]);
    len
}

impl RadialField {
    pub fn spherical(profile: Arc<dyn RadialProfile>) -> Self {
        RadialField { profile, geometry: Geometry::Spherical, axial: None, decay: 0.0, amplitude: 1.0 }
    }

    pub fn cylindrical(profile: Arc<dyn RadialProfile>, axial: Option<AxialFactor>) -> Self {
        RadialField { profile, geometry: Geometry::Cylindrical, axial, decay: 0.0, amplitude: 1.0 }
    }

    /// Multiplies by e^{−rate·t}.
    pub fn with_decay(mut self, rate: f64) -> Self {
        self.decay = rate;
        self
    }

    pub fn scaled(mut self, a: f64) -> Self {
        self.amplitude *= a;
        self
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn profile(&self) -> &Arc<dyn RadialProfile> {
        &self.profile
    }
}

/// Value, gradient and Hessian at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: Vec3,
    pub hess: [[f64; 3]; 3],
}

/// Second-order jet of factor · f(r) · Z(x₃) from a single profile
/// evaluation.
pub fn radial_jet2(
    profile: &dyn RadialProfile,
    geometry: Geometry,
    axial: Option<&AxialFactor>,
    factor: f64,
    x: Point3,
) -> Jet2 {
    let r = geometry.radius(x);
    let mut g = [0.0; 3];
    profile.reduced(r, &mut g);
    let active = geometry.dim();
    let (z0, z1, z2) = match (geometry, axial) {
        (Geometry::Cylindrical, Some(a)) => (a.derivative(0, x[2]), a.derivative(1, x[2]), a.derivative(2, x[2])),
        _ => (1.0, 0.0, 0.0),
    };
    let mut jet = Jet2 { value: factor * g[0] * z0, ..Jet2::default() };
    for i in 0..active {
        jet.grad[i] = factor * x[i] * g[1] * z0;
        for j in 0..active {
            let delta = if i == j { g[1] } else { 0.0 };
            jet.hess[i][j] = factor * (delta + x[i] * x[j] * g[2]) * z0;
        }
    }
    if active == 2 {
        jet.grad[2] = factor * g[0] * z1;
        for i in 0..2 {
            jet.hess[i][2] = factor * x[i] * g[1] * z1;
            jet.hess[2][i] = jet.hess[i][2];
        }
        jet.hess[2][2] = factor * g[0] * z2;
    }
    jet
}

impl RadialField {
    pub fn jet2(&self, t: f64, x: Point3) -> Jet2 {
        let factor = self.amplitude * libm::exp(-self.decay * t);
        radial_jet2(&*self.profile, self.geometry, self.axial.as_ref(), factor, x)
    }
}

impl ScalarField for RadialField {
    fn partial(&self, d: Partial, t: f64, x: Point3) -> f64 {
        let mut factor = self.amplitude * libm::exp(-self.decay * t);
        for _ in 0..d.t {
            factor *= -self.decay;
        }
        let active = self.geometry.dim();
        if self.geometry == Geometry::Cylindrical {
            factor *= match &self.axial {
                Some(a) => a.derivative(d.x[2], x[2]),
                None if d.x[2] > 0 => 0.0,
                None => 1.0,
            };
        }
        if factor == 0.0 {
            return 0.0;
        }
        let mut beta = d.x;
        if active == 2 {
            beta[2] = 0;
        }
        let order: usize = beta.iter().map(|&v| v as usize).sum();
        debug_assert!(order <= MAX_ORDER, "radial partial of order {order}");
        let r = self.geometry.radius(x);
        let mut g = [0.0; MAX_ORDER + 1];
        self.profile.reduced(r, &mut g[..=order]);
        if order == 0 {
            return factor * g[0];
        }
        let mut terms = [Term { c: 0.0, gamma: [0; 3], k: 0 }; TERM_CAP];
        let n = expand(beta, active, &mut terms);
        let mut total = 0.0;
        for t in &terms[..n] {
            let mut mono = t.c;
            for i in 0..active {
                for _ in 0..t.gamma[i] {
                    mono *= x[i];
                }
            }
            total += mono * g[t.k as usize];
        }
        factor * total
    }

    fn is_zero(&self) -> bool {
        self.amplitude == 0.0 || self.profile.is_zero()
    }
}
