//! Integration on S^{d−1}: uniform sampling, the zonal 1-D reduction,
//! zonal trial functions with their extension norms, and quadruples on
//! the constraint set ζ₁+ζ₂+ζ₃+ζ₄ = 0.

use crate::error::{domain, unsupported, Result};
use crate::measures::{sigma_hat, Exponent};
use crate::orthopoly::{gauss_jacobi, ZonalBasis};
use crate::radial_waves::{product_integral, Estimate, HarmonicWave};
use crate::rng::{chunk_rng, chunk_sizes, gaussian_vec, unit_vector};
use crate::specialfn::sphere_area;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// A point of S^{d−1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    pub coords: Vec<f64>,
}

impl SpherePoint {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.coords, other)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `n` independent uniform points of S^{d−1}.
pub fn sample_sphere(d: usize, n: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    if d < 2 {
        return domain(format!("sample_sphere needs d ≥ 2, got {d}"));
    }
    let chunks: Vec<Vec<SpherePoint>> = chunk_sizes(n)
        .into_par_iter()
        .enumerate()
        .map(|(j, size)| {
            let mut rng = chunk_rng(seed, j as u64);
            (0..size)
                .map(|_| SpherePoint {
                    coords: unit_vector(&mut rng, d),
                })
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// ∫_{S^{d−1}} g(ζ·e) dσ = ω_{d−2} ∫₋₁¹ g(u)(1−u²)^{(d−3)/2} du by an
/// n-point Gauss–Jacobi rule. For d = 2 the weight is (1−u²)^{−1/2}.
pub fn zonal_integral<G: FnMut(f64) -> f64>(d: u32, g: G, nodes: usize) -> Result<f64> {
    if d < 2 {
        return domain(format!("zonal_integral needs d ≥ 2, got {d}"));
    }
    let e = (d as f64 - 3.0) / 2.0;
    let rule = gauss_jacobi(nodes, e, e)?;
    Ok(sphere_area(d as i64 - 2)? * rule.integrate(g))
}

/// Shape of a zonal trial function, before the overall complex scale.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialKind {
    /// f ≡ 1.
    Constant,
    /// f(ζ) = e^{iξ·ζ}; zonal about ξ/|ξ|.
    PlaneWave { xi: Vec<f64> },
    /// f(ζ) = e^{ν ζ·e} with real ν.
    Exponential { nu: f64 },
    /// f = 1 + ε Z_degree(ζ·e), Z normalised to 1 at the pole.
    HarmonicPerturbation { eps: f64, degree: usize },
    /// f = Σ c_n Z_n(ζ·e).
    Series { coeffs: Vec<f64> },
    /// Real profile given by samples at the Chebyshev–Lobatto points
    /// u_j = cos(πj/(M−1)), interpolated by the degree M−1 polynomial.
    Tabulated { samples: Vec<f64> },
}

/// A function on S^{d−1} that depends only on ζ·e, times a complex scale.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialFunction {
    pub d: u32,
    pub axis: Vec<f64>,
    pub scale: Complex64,
    pub kind: TrialKind,
}

const TRIM: f64 = 1e-14;
const TABULATE_SIZES: [usize; 6] = [17, 33, 65, 129, 257, 513];

fn pole(d: u32) -> Vec<f64> {
    let mut e = vec![0.0; d as usize];
    e[0] = 1.0;
    e
}

fn lobatto(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| (PI * j as f64 / (m - 1) as f64).cos())
        .collect()
}

fn barycentric(samples: &[f64], u: f64) -> f64 {
    let m = samples.len();
    if m == 1 {
        return samples[0];
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &y) in samples.iter().enumerate() {
        let x = (PI * j as f64 / (m - 1) as f64).cos();
        let diff = u - x;
        if diff == 0.0 {
            return y;
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == m - 1 {
            w *= 0.5;
        }
        let t = w / diff;
        num += t * y;
        den += t;
    }
    num / den
}

// Chebyshev coefficients of the interpolant through Lobatto samples.
fn chebyshev_coefficients(samples: &[f64]) -> Vec<f64> {
    let m = samples.len();
    let n = (m - 1) as f64;
    (0..m)
        .map(|k| {
            let mut s = 0.0;
            for (j, &y) in samples.iter().enumerate() {
                let w = if j == 0 || j == m - 1 { 0.5 } else { 1.0 };
                s += w * y * (PI * (j * k) as f64 / n).cos();
            }
            let a = 2.0 * s / n;
            if k == 0 || k == m - 1 {
                0.5 * a
            } else {
                a
            }
        })
        .collect()
}

// Zonal coefficients of a profile by Gauss–Jacobi projection.
fn project<F: Fn(f64) -> Complex64>(d: u32, nmax: usize, nodes: usize, f: F) -> Result<Vec<Complex64>> {
    let basis = ZonalBasis::new(d)?;
    let e = basis.weight_exponent();
    let rule = gauss_jacobi(nodes, e, e)?;
    let mut num = vec![Complex64::new(0.0, 0.0); nmax + 1];
    let mut den = vec![0.0; nmax + 1];
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let z = basis.eval_all(nmax, u);
        let fu = f(u);
        for n in 0..=nmax {
            num[n] += w * z[n] * fu;
            den[n] += w * z[n] * z[n];
        }
    }
    Ok(trim(num.into_iter().zip(den).map(|(a, b)| a / b).collect()))
}

fn trim(mut c: Vec<Complex64>) -> Vec<Complex64> {
    let top = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().is_some_and(|z| z.norm() <= TRIM * top) {
        c.pop();
    }
    c
}

impl TrialFunction {
    fn with_kind(d: u32, axis: Vec<f64>, kind: TrialKind) -> Result<Self> {
        if d < 2 {
            return domain(format!("trial functions need d ≥ 2, got {d}"));
        }
        if axis.len() != d as usize {
            return domain(format!("axis has {} coordinates, expected {d}", axis.len()));
        }
        let n = norm(&axis);
        if !(n > 0.0) || !n.is_finite() {
            return domain("axis must be a nonzero finite vector");
        }
        Ok(Self {
            d,
            axis: axis.iter().map(|x| x / n).collect(),
            scale: Complex64::new(1.0, 0.0),
            kind,
        })
    }

    /// f ≡ c.
    pub fn constant(d: u32, c: Complex64) -> Result<Self> {
        Ok(Self::with_kind(d, pole(d), TrialKind::Constant)?.scaled(c))
    }

    /// f(ζ) = e^{iξ·ζ}.
    pub fn plane_wave(d: u32, xi: &[f64]) -> Result<Self> {
        if xi.len() != d as usize {
            return domain(format!("ξ has {} coordinates, expected {d}", xi.len()));
        }
        let axis = if norm(xi) > 0.0 { xi.to_vec() } else { pole(d) };
        Self::with_kind(d, axis, TrialKind::PlaneWave { xi: xi.to_vec() })
    }

    /// f(ζ) = e^{ν ζ·e}.
    pub fn exponential(d: u32, axis: &[f64], nu: f64) -> Result<Self> {
        Self::with_kind(d, axis.to_vec(), TrialKind::Exponential { nu })
    }

    /// f = 1 + ε Z_degree about the first coordinate axis.
    pub fn harmonic_perturbation(d: u32, eps: f64, degree: usize) -> Result<Self> {
        Self::with_kind(d, pole(d), TrialKind::HarmonicPerturbation { eps, degree })
    }

    /// f = Σ c_n Z_n about the first coordinate axis.
    pub fn series(d: u32, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("series needs at least one coefficient");
        }
        Self::with_kind(d, pole(d), TrialKind::Series { coeffs })
    }

    /// Real profile from samples at Chebyshev–Lobatto points (u = 1 first).
    pub fn tabulated(d: u32, samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return domain("tabulated profile needs at least two samples");
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return domain("tabulated samples must be finite");
        }
        Self::with_kind(d, pole(d), TrialKind::Tabulated { samples })
    }

    /// Tabulate a real profile, doubling the sample count until its
    /// Chebyshev tail drops below 1e-14 of the largest coefficient.
    pub fn from_profile<F: Fn(f64) -> f64>(d: u32, axis: &[f64], f: F) -> Result<Self> {
        let mut samples = Vec::new();
        for m in TABULATE_SIZES {
            samples = lobatto(m).into_iter().map(&f).collect();
            let a = chebyshev_coefficients(&samples);
            let top = a.iter().fold(0.0f64, |s, x| s.max(x.abs()));
            let tail = a[m - 3..].iter().fold(0.0f64, |s, x| s.max(x.abs()));
            if tail <= 1e-14 * top.max(1e-300) {
                break;
            }
        }
        let mut t = Self::tabulated(d, samples)?;
        t.axis = Self::with_kind(d, axis.to_vec(), TrialKind::Constant)?.axis;
        Ok(t)
    }

    /// Same function times c.
    pub fn scaled(mut self, c: Complex64) -> Self {
        self.scale *= c;
        self
    }

    /// f as a function of u = ζ·e.
    pub fn profile(&self, u: f64) -> Complex64 {
        let base = match &self.kind {
            TrialKind::Constant => Complex64::new(1.0, 0.0),
            TrialKind::PlaneWave { xi } => Complex64::new(0.0, norm(xi) * u).exp(),
            TrialKind::Exponential { nu } => Complex64::new((nu * u).exp(), 0.0),
            TrialKind::HarmonicPerturbation { eps, degree } => {
                let z = ZonalBasis { d: self.d }.eval_all(*degree, u)[*degree];
                Complex64::new(1.0 + eps * z, 0.0)
            }
            TrialKind::Series { coeffs } => {
                let z = ZonalBasis { d: self.d }.eval_all(coeffs.len() - 1, u);
                Complex64::new(coeffs.iter().zip(&z).map(|(c, z)| c * z).sum(), 0.0)
            }
            TrialKind::Tabulated { samples } => Complex64::new(barycentric(samples, u), 0.0),
        };
        self.scale * base
    }

    /// f(ζ).
    pub fn eval(&self, zeta: &[f64]) -> Complex64 {
        self.profile(dot(zeta, &self.axis).clamp(-1.0, 1.0))
    }

    /// True when f is real and ≥ 0 everywhere (checked on a fine grid for
    /// tabulated and series profiles).
    pub fn is_real_nonnegative(&self) -> bool {
        if self.scale.im != 0.0 && self.scale.re != 0.0 {
            return false;
        }
        match &self.kind {
            TrialKind::PlaneWave { xi } if norm(xi) > 0.0 => false,
            _ => (0..=4000).all(|i| {
                let v = self.profile(-1.0 + i as f64 / 2000.0);
                v.im.abs() <= 1e-14 * v.norm() && v.re >= 0.0
            }),
        }
    }

    /// Largest polynomial degree needed to resolve f in the zonal basis.
    fn resolution(&self) -> usize {
        match &self.kind {
            TrialKind::Constant => 0,
            TrialKind::PlaneWave { xi } => (1.3 * norm(xi)).ceil() as usize + 30,
            TrialKind::Exponential { nu } => (1.3 * nu.abs()).ceil() as usize + 30,
            TrialKind::HarmonicPerturbation { degree, .. } => *degree,
            TrialKind::Series { coeffs } => coeffs.len() - 1,
            TrialKind::Tabulated { samples } => samples.len() - 1,
        }
    }

    /// Coefficients c_n with f(u) = Σ c_n Z_n(u).
    pub fn zonal_coefficients(&self) -> Result<Vec<Complex64>> {
        let c = match &self.kind {
            TrialKind::Constant => vec![Complex64::new(1.0, 0.0)],
            TrialKind::HarmonicPerturbation { eps, degree } => {
                let mut c = vec![Complex64::new(0.0, 0.0); degree + 1];
                c[0] += 1.0;
                c[*degree] += eps;
                c
            }
            TrialKind::Series { coeffs } => coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            _ => {
                let nmax = self.resolution();
                let unit = Self {
                    scale: Complex64::new(1.0, 0.0),
                    ..self.clone()
                };
                project(self.d, nmax, nmax + 40, |u| unit.profile(u))?
            }
        };
        Ok(c.into_iter().map(|x| x * self.scale).collect())
    }

    /// The radial wave expansion of f̂σ.
    pub fn wave(&self) -> Result<HarmonicWave> {
        Ok(HarmonicWave::from_zonal_coefficients(self.d, &self.zonal_coefficients()?))
    }

    /// ‖f‖_{L^q(S^{d−1})}.
    pub fn lq_norm(&self, q: Exponent) -> Result<f64> {
        let e = (self.d as f64 - 3.0) / 2.0;
        let nodes = 200 + 2 * self.resolution();
        match q {
            Exponent::Infinity => {
                let mut m = 0.0f64;
                for i in 0..=20000 {
                    m = m.max(self.profile(-1.0 + i as f64 / 10000.0).norm());
                }
                for &u in &gauss_jacobi(nodes, e, e)?.nodes {
                    m = m.max(self.profile(u).norm());
                }
                Ok(m)
            }
            Exponent::Finite(q) => {
                if !(q > 0.0) {
                    return domain(format!("L^q norm needs q > 0, got {q}"));
                }
                let s = zonal_integral(self.d, |u| self.profile(u).norm().powf(q), nodes)?;
                Ok(s.powf(1.0 / q))
            }
        }
    }

    /// ‖f‖²_{L²} from the coefficients: Σ |c_n|² ‖Z_n‖².
    pub fn l2_norm_sq_spectral(&self) -> Result<f64> {
        let basis = ZonalBasis::new(self.d)?;
        self.zonal_coefficients()?
            .iter()
            .enumerate()
            .map(|(n, c)| Ok(c.norm_sqr() * basis.norm_sq(n)?))
            .sum()
    }

    /// |f| as a trial function.
    pub fn modulus(&self) -> Result<Self> {
        match &self.kind {
            TrialKind::Constant | TrialKind::PlaneWave { .. } => {
                Self::constant(self.d, Complex64::new(self.scale.norm(), 0.0))
            }
            _ if self.is_real_nonnegative() => Ok(self.clone()),
            _ => {
                let me = self.clone();
                Self::from_profile(self.d, &self.axis, move |u| me.profile(u).norm())
            }
        }
    }

    /// f_⋆(ζ) = f(−ζ).
    pub fn antipodal(&self) -> Result<Self> {
        let me = self.clone();
        if matches!(self.kind, TrialKind::Constant) {
            return Ok(me);
        }
        if self.profile(0.3).im != 0.0 || self.profile(-0.7).im != 0.0 {
            return unsupported("antipodal reflection is implemented for real profiles");
        }
        Self::from_profile(self.d, &self.axis, move |u| me.profile(-u).re)
    }

    /// f_♯ = √((f² + f_⋆²)/2) for real nonnegative f.
    pub fn antipodal_symmetrization(&self) -> Result<Self> {
        if !self.is_real_nonnegative() {
            return unsupported("antipodal symmetrization needs a real nonnegative function");
        }
        if matches!(self.kind, TrialKind::Constant) {
            return Ok(self.clone());
        }
        let me = self.clone();
        Self::from_profile(self.d, &self.axis, move |u| {
            let a = me.profile(u).re;
            let b = me.profile(-u).re;
            (0.5 * (a * a + b * b)).sqrt()
        })
    }

    /// Pointwise square |f|², as a trial function.
    pub fn modulus_squared(&self) -> Result<Self> {
        let me = self.clone();
        match &self.kind {
            TrialKind::Constant | TrialKind::PlaneWave { .. } => {
                Self::constant(self.d, Complex64::new(self.scale.norm_sqr(), 0.0))
            }
            _ => Self::from_profile(self.d, &self.axis, move |u| me.profile(u).norm_sqr()),
        }
    }
}

/// ‖f̂σ‖^{2k}_{L^{2k}(ℝ^d)} with an error estimate.
pub fn extension_norm_power(f: &TrialFunction, k: u32) -> Result<Estimate> {
    let w = f.wave()?;
    let waves: Vec<&HarmonicWave> = (0..k).map(|_| &w).collect();
    product_integral(&waves)
}

/// ‖f̂σ‖_{L^p(ℝ^d)} for even p ≥ 4.
pub fn extension_norm(f: &TrialFunction, d: u32, p: u32) -> Result<f64> {
    if p < 4 || p % 2 == 1 {
        return unsupported(format!(
            "extension_norm needs an even exponent p ≥ 4, got {p}"
        ));
    }
    if f.d != d {
        return domain(format!("trial function lives on S^{}, not S^{}", f.d - 1, d - 1));
    }
    if d == 2 && p == 4 {
        return domain("‖f̂σ‖_{L⁴(ℝ²)} diverges for f ≡ 1; excluded");
    }
    let est = extension_norm_power(f, p / 2)?;
    Ok(est.value.powf(1.0 / p as f64))
}

fn shared_axis(f1: &TrialFunction, f2: &TrialFunction) -> Result<()> {
    let c1 = matches!(f1.kind, TrialKind::Constant);
    let c2 = matches!(f2.kind, TrialKind::Constant);
    if c1 || c2 || (dot(&f1.axis, &f2.axis) - 1.0).abs() < 1e-12 {
        Ok(())
    } else {
        unsupported("products of extensions need a common axis")
    }
}

/// ‖f̂₁σ · f̂₂σ‖²_{L²(ℝ^d)} for zonal f₁, f₂ sharing an axis.
pub fn extension_product_l2(f1: &TrialFunction, f2: &TrialFunction) -> Result<Estimate> {
    if f1.d != f2.d {
        return domain("both functions must live on the same sphere");
    }
    shared_axis(f1, f2)?;
    let (w1, w2) = (f1.wave()?, f2.wave()?);
    product_integral(&[&w1, &w2])
}

/// f̂σ(ξ) at ξ = r(cosθ e + sinθ e⊥), by quadrature in u = ζ·e of
/// ∫ f(u) e^{−iru cosθ} (1−u²)^{(d−3)/2} σ̂_{d−2}(r sinθ √(1−u²)) du,
/// where σ̂_{d−2} is the transform of the sphere one dimension down.
pub fn extension_transform(f: &TrialFunction, r: f64, theta: f64) -> Result<Complex64> {
    let d = f.d;
    if r.is_nan() || r < 0.0 {
        return domain(format!("radius must be ≥ 0, got {r}"));
    }
    let e = (d as f64 - 3.0) / 2.0;
    let (ct, st) = (theta.cos(), theta.sin());
    let lower = |s: f64| -> Result<f64> {
        if d == 2 {
            Ok(2.0 * s.cos())
        } else {
            sigma_hat(d - 1, s.abs())
        }
    };
    let run = |n: usize| -> Result<Complex64> {
        let rule = gauss_jacobi(n, e, e)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = r * st * (1.0 - u * u).max(0.0).sqrt();
            acc += w * f.profile(u) * Complex64::new(0.0, -r * u * ct).exp() * lower(s)?;
        }
        Ok(acc)
    };
    let mut n = 32 + (1.5 * r).ceil() as usize + f.resolution();
    let mut prev = run(n)?;
    for _ in 0..8 {
        n *= 2;
        let next = run(n)?;
        if (next - prev).norm() <= 1e-10 {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// Quadruples (ζ₁, ζ₂, ζ₃, ζ₄) of unit vectors summing to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrupleBatch {
    pub d: usize,
    /// Row-major: row i holds ζ₁..ζ₄ of quadruple i, d coordinates each.
    pub data: Vec<f64>,
}

impl QuadrupleBatch {
    pub fn len(&self) -> usize {
        self.data.len() / (4 * self.d)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// ζ_{j+1} of row i.
    pub fn point(&self, i: usize, j: usize) -> &[f64] {
        let start = (4 * i + j) * self.d;
        &self.data[start..start + self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = [&[f64]; 4]> + '_ {
        (0..self.len()).map(move |i| [self.point(i, 0), self.point(i, 1), self.point(i, 2), self.point(i, 3)])
    }
}

const DEGENERATE: f64 = 1e-12;

/// Completion of (ζ₁, ζ₂) to a quadruple, given the random direction
/// used for ζ₃; `None` when v = −(ζ₁+ζ₂) is too short or too long.
pub fn complete_quadruple(z1: &[f64], z2: &[f64], g: &[f64]) -> Option<[Vec<f64>; 2]> {
    let v: Vec<f64> = z1.iter().zip(z2).map(|(a, b)| -(a + b)).collect();
    let len = norm(&v);
    if len >= 2.0 - DEGENERATE || len <= DEGENERATE {
        return None;
    }
    let vh: Vec<f64> = v.iter().map(|x| x / len).collect();
    let proj = dot(g, &vh);
    let w: Vec<f64> = g.iter().zip(&vh).map(|(a, b)| a - proj * b).collect();
    let wn = norm(&w);
    if wn <= 1e-300 {
        return None;
    }
    let h = (1.0 - 0.25 * len * len).sqrt();
    let z3: Vec<f64> = v.iter().zip(&w).map(|(a, b)| 0.5 * a + h * b / wn).collect();
    let z4: Vec<f64> = v.iter().zip(&z3).map(|(a, b)| a - b).collect();
    Some([z3, z4])
}

fn quadruple_chunk(d: usize, size: usize, seed: u64, chunk: u64) -> Vec<f64> {
    let mut rng = chunk_rng(seed, chunk);
    let mut out = Vec::with_capacity(size * 4 * d);
    let mut made = 0;
    while made < size {
        let z1 = unit_vector(&mut rng, d);
        let z2 = unit_vector(&mut rng, d);
        let g = gaussian_vec(&mut rng, d);
        if let Some([z3, z4]) = complete_quadruple(&z1, &z2, &g) {
            out.extend_from_slice(&z1);
            out.extend_from_slice(&z2);
            out.extend_from_slice(&z3);
            out.extend_from_slice(&z4);
            made += 1;
        }
    }
    out
}

/// `n` quadruples on the support of the constraint measure.
pub fn quadruple_sampler(d: usize, n: usize, seed: u64) -> Result<QuadrupleBatch> {
    if d < 2 {
        return domain(format!("quadruple_sampler needs d ≥ 2, got {d}"));
    }
    let parts: Vec<Vec<f64>> = chunk_sizes(n)
        .into_par_iter()
        .enumerate()
        .map(|(j, size)| quadruple_chunk(d, size, seed, j as u64))
        .collect();
    Ok(QuadrupleBatch {
        d,
        data: parts.concat(),
    })
}

/// Apply `f` to each chunk of `n` sampled quadruples without keeping them,
/// returning the per-chunk results in chunk order.
pub fn map_quadruple_chunks<T, F>(d: usize, n: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&QuadrupleBatch) -> T + Sync,
{
    if d < 2 {
        return domain(format!("quadruple sampling needs d ≥ 2, got {d}"));
    }
    Ok(chunk_sizes(n)
        .into_par_iter()
        .enumerate()
        .map(|(j, size)| {
            f(&QuadrupleBatch {
                d,
                data: quadruple_chunk(d, size, seed, j as u64),
            })
        })
        .collect())
}

/// Uniform draw of u = ζ₁·ζ₂ completed to a point ζ₂ given ζ₁.
pub fn point_at_angle<R: Rng>(rng: &mut R, z1: &[f64], u: f64) -> Vec<f64> {
    let d = z1.len();
    loop {
        let g = gaussian_vec(rng, d);
        let p = dot(&g, z1);
        let w: Vec<f64> = g.iter().zip(z1).map(|(a, b)| a - p * b).collect();
        let wn = norm(&w);
        if wn > 1e-300 {
            let s = (1.0 - u * u).max(0.0).sqrt();
            return z1.iter().zip(&w).map(|(a, b)| u * a + s * b / wn).collect();
        }
    }
}
