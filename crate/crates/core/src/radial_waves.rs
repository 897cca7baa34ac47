//! Integrals over ℝ^d of products |F_1|²⋯|F_m|² where each F_j is the
//! Fourier extension of a zonal density,
//!
//!   F(rω) = (2π)^{d/2} r^{−α} Σ_n b_n J_{n+α}(r) Z_n(cos θ),   α = (d−2)/2.
//!
//! The radial integral is split at R. On [0, R] Gauss–Legendre panels of unit
//! width are used; on [R, ∞) each J is replaced by its Hankel expansion, so
//! the integrand becomes a finite sum of terms r^{−p} e^{2ifr} which are
//! integrated in closed form (f = 0) or by the asymptotic series of
//! ∫_R^∞ r^{−p} e^{iωr} dr (f ≠ 0).

use crate::error::{domain, Error, Result};
use crate::orthopoly::{gauss_jacobi, gauss_legendre, JacobiRule, ZonalBasis};
use crate::specialfn::{bessel_j_sequence, hankel_coefficients, sphere_area};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

const PANEL_NODES: usize = 20;
const CHECK_PANEL_NODES: usize = 26;
const MAX_TERMS: usize = 90;

/// Zonal Fourier extension F(rω) = (2π)^{d/2} r^{−α} Σ b_n J_{n+α}(r) Z_n(cos θ).
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicWave {
    pub d: u32,
    pub b: Vec<Complex64>,
}

impl HarmonicWave {
    /// Extension of f = Σ c_n Z_n: b_n = (−i)^n c_n.
    pub fn from_zonal_coefficients(d: u32, c: &[Complex64]) -> Self {
        let b = c
            .iter()
            .enumerate()
            .map(|(n, cn)| cn * Complex64::new(0.0, -1.0).powu(n as u32))
            .collect();
        Self { d, b }
    }

    /// σ̂ itself.
    pub fn sigma_hat(d: u32) -> Self {
        Self {
            d,
            b: vec![Complex64::new(1.0, 0.0)],
        }
    }

    fn alpha(&self) -> f64 {
        (self.d as f64 - 2.0) / 2.0
    }

    /// Highest harmonic degree carried.
    pub fn degree(&self) -> usize {
        self.b.len().saturating_sub(1)
    }

    /// F at radius r and cos θ = c.
    pub fn eval(&self, r: f64, c: f64) -> Result<Complex64> {
        let basis = ZonalBasis::new(self.d)?;
        let z = basis.eval_all(self.degree(), c);
        let alpha = self.alpha();
        let pref = (2.0 * PI).powf(self.d as f64 / 2.0);
        if r == 0.0 {
            // only n = 0 survives: r^{−α} J_α(r) → 1/(2^α Γ(α+1))
            let lim = crate::specialfn::bessel_j_scaled(alpha, 0.0)?;
            return Ok(self.b[0] * pref * lim);
        }
        let j = bessel_j_sequence(alpha, self.b.len(), r)?;
        let s: Complex64 = self
            .b
            .iter()
            .zip(&j)
            .zip(&z)
            .map(|((bn, jn), zn)| bn * (jn * zn))
            .sum();
        Ok(s * pref * r.powf(-alpha))
    }
}

/// Value of an integral together with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

type Poly = Vec<Complex64>;

fn poly_mul(p: &[Complex64], q: &[Complex64], len: usize) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, a) in p.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for (j, b) in q.iter().enumerate().take(len - i) {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_conj(p: &[Complex64]) -> Poly {
    p.iter().map(|z| z.conj()).collect()
}

fn poly_add(p: &mut [Complex64], q: &[Complex64]) {
    for (a, b) in p.iter_mut().zip(q) {
        *a += b;
    }
}

struct Layout {
    d: u32,
    alpha: f64,
    c_rule: JacobiRule,
    // z[c][n] for every wave degree up to the maximum
    zonal: Vec<Vec<f64>>,
    nmax: usize,
}

impl Layout {
    fn new(waves: &[&HarmonicWave]) -> Result<Self> {
        let d = waves[0].d;
        let nmax = waves.iter().map(|w| w.degree()).max().unwrap_or(0);
        let total: usize = waves.iter().map(|w| w.degree()).sum();
        let e = (d as f64 - 3.0) / 2.0;
        // |F_j|² are polynomials of degree 2N_j in cos θ; the rule is exact
        let c_rule = gauss_jacobi(total + 4, e, e)?;
        let basis = ZonalBasis::new(d)?;
        let zonal = c_rule.nodes.iter().map(|&c| basis.eval_all(nmax, c)).collect();
        Ok(Self {
            d,
            alpha: (d as f64 - 2.0) / 2.0,
            c_rule,
            zonal,
            nmax,
        })
    }

    // Σ_c w_c Π_j |F_j(r, c)|² at one radius (without the ω_{d−2} factor).
    fn angular(&self, waves: &[&HarmonicWave], r: f64) -> Result<f64> {
        let j = bessel_j_sequence(self.alpha, self.nmax + 1, r)?;
        let pref = (2.0 * PI).powf(self.d as f64 / 2.0) * r.powf(-self.alpha);
        let mut total = 0.0;
        for (ci, w) in self.c_rule.weights.iter().enumerate() {
            let z = &self.zonal[ci];
            let mut prod = 1.0;
            for wave in waves {
                let s: Complex64 = wave
                    .b
                    .iter()
                    .enumerate()
                    .map(|(n, bn)| bn * (j[n] * z[n]))
                    .sum();
                prod *= (s * pref).norm_sqr();
            }
            total += w * prod;
        }
        Ok(total)
    }
}

fn bulk(waves: &[&HarmonicWave], layout: &Layout, radius: f64, nodes: usize) -> Result<f64> {
    let rule = gauss_legendre(nodes)?;
    let panels = radius.ceil() as usize;
    let width = radius / panels as f64;
    let d = layout.d as i32;
    let sums: Vec<Result<f64>> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let lo = p as f64 * width;
            let mut s = 0.0;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let r = lo + 0.5 * width * (x + 1.0);
                s += w * layout.angular(waves, r)? * r.powi(d - 1);
            }
            Ok(0.5 * width * s)
        })
        .collect();
    let mut total = 0.0;
    for s in sums {
        total += s?;
    }
    Ok(total)
}

// Hankel polynomial H_ν(y) = Σ_k i^k a_k(ν) R^{−k} y^k.
fn hankel_poly(nu: f64, radius: f64, len: usize) -> Poly {
    let a = hankel_coefficients(nu, len);
    let i = Complex64::new(0.0, 1.0);
    a.iter()
        .enumerate()
        .map(|(k, ak)| i.powu(k as u32) * (ak / radius.powi(k as i32)))
        .collect()
}

// Number of Hankel terms needed so that every order up to nu_max is resolved
// at radius R; errors when the expansion is not yet convergent there.
fn hankel_length(nu_max: f64, radius: f64) -> Result<usize> {
    let mu = 4.0 * nu_max * nu_max;
    let mut t = 1.0f64;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        t *= ((mu - odd * odd) / (8.0 * k as f64 * radius)).abs();
        if t < 1e-18 {
            return Ok(k + 1);
        }
    }
    Err(Error::Convergence(format!(
        "Hankel expansion of order {nu_max} not converged at R = {radius}"
    )))
}

// ∫_R^∞ r^{−p} e^{iωr} dr · R^{p} as the asymptotic series
// e^{iωR} Σ_n (i/ω)(−i/ω)^n (p)_n R^{−n}.
fn oscillatory_tail(p: f64, omega: f64, radius: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let mut term = i / omega;
    let mut sum = term;
    let mut prev = term.norm();
    for n in 0..400 {
        let next = term * (-i / omega) * ((p + n as f64) / radius);
        let m = next.norm();
        if m > prev {
            break;
        }
        sum += next;
        term = next;
        prev = m;
        if m < 1e-18 * sum.norm() {
            break;
        }
    }
    sum * Complex64::from_polar(1.0, omega * radius)
}

fn tail(waves: &[&HarmonicWave], layout: &Layout, radius: f64) -> Result<f64> {
    let m = waves.len();
    let d = layout.d as f64;
    let s = (m as f64 - 1.0) * (d - 1.0);
    if s <= 1.0 {
        return domain("radial integral diverges: need (m−1)(d−1) > 1");
    }
    let nu_max = layout.alpha + layout.nmax as f64;
    let len = hankel_length(nu_max, radius)?;
    let phases: Vec<Complex64> = (0..=layout.nmax)
        .map(|n| {
            let nu = layout.alpha + n as f64;
            Complex64::from_polar(1.0, -(0.5 * nu + 0.25) * PI)
        })
        .collect();
    let h: Vec<Poly> = (0..=layout.nmax)
        .map(|n| hankel_poly(layout.alpha + n as f64, radius, len))
        .collect();
    let hbar: Vec<Poly> = h.iter().map(|p| poly_conj(p)).collect();
    let zero = Complex64::new(0.0, 0.0);
    // trig[f + m] = coefficient polynomial of e^{2ifr}
    let mut trig: Vec<Poly> = vec![vec![zero; len]; 2 * m + 1];
    for (ci, w) in layout.c_rule.weights.iter().enumerate() {
        let z = &layout.zonal[ci];
        let mut acc: Vec<Poly> = vec![vec![zero; len]; 2 * m + 1];
        acc[m][0] = Complex64::new(*w, 0.0);
        for wave in waves {
            let mut a = vec![zero; len];
            let mut b = vec![zero; len];
            for (n, bn) in wave.b.iter().enumerate() {
                let coef = bn * z[n];
                let ca = coef * phases[n];
                let cb = coef * phases[n].conj();
                for k in 0..len {
                    a[k] += ca * h[n][k];
                    b[k] += cb * hbar[n][k];
                }
            }
            let (ac, bc) = (poly_conj(&a), poly_conj(&b));
            let mut x = poly_mul(&a, &ac, len);
            poly_add(&mut x, &poly_mul(&b, &bc, len));
            let y = poly_mul(&a, &bc, len);
            let ybar = poly_conj(&y);
            let mut next: Vec<Poly> = vec![vec![zero; len]; 2 * m + 1];
            for f in 0..=2 * m {
                if acc[f].iter().all(|c| c.norm_sqr() == 0.0) {
                    continue;
                }
                if f + 1 <= 2 * m {
                    poly_add(&mut next[f + 1], &poly_mul(&acc[f], &y, len));
                }
                poly_add(&mut next[f], &poly_mul(&acc[f], &x, len));
                if f >= 1 {
                    poly_add(&mut next[f - 1], &poly_mul(&acc[f], &ybar, len));
                }
            }
            acc = next;
        }
        for f in 0..=2 * m {
            poly_add(&mut trig[f], &acc[f]);
        }
    }
    // ∫_R^∞ r^{−s} Σ_j T_{f,j} R^j r^{−j} e^{2ifr} dr
    let mut total = 0.0;
    for (j, t) in trig[m].iter().enumerate() {
        total += t.re * radius.powf(1.0 - s) / (s + j as f64 - 1.0);
    }
    for f in 1..=m {
        let omega = 2.0 * f as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, t) in trig[m + f].iter().enumerate() {
            acc += t * oscillatory_tail(s + j as f64, omega, radius);
        }
        total += 2.0 * acc.re * radius.powf(-s);
    }
    // |F|² = K² r^{−(d−1)} (1/4)(X + e^{2ir}Y + e^{−2ir}Ȳ), K = (2π)^{d/2} √(2/π)
    let k2 = (2.0 * PI).powf(d) * 2.0 / PI;
    Ok(total * (k2 / 4.0).powi(m as i32))
}

/// Default split radius for waves of the given maximal Bessel order.
pub fn split_radius(nu_max: f64) -> f64 {
    (nu_max * nu_max).max(64.0).ceil()
}

/// ∫_{ℝ^d} Π_j |F_j(ξ)|² dξ with an error estimate from a second evaluation
/// at a different split radius and panel order.
pub fn product_integral(waves: &[&HarmonicWave]) -> Result<Estimate> {
    if waves.is_empty() {
        return domain("product_integral needs at least one wave");
    }
    let d = waves[0].d;
    if waves.iter().any(|w| w.d != d) {
        return domain("all waves must live in the same dimension");
    }
    if d < 2 {
        return domain(format!("radial integrals need d ≥ 2, got {d}"));
    }
    let layout = Layout::new(waves)?;
    let area = sphere_area(d as i64 - 2)?;
    let r1 = split_radius(layout.alpha + layout.nmax as f64);
    let v1 = (bulk(waves, &layout, r1, PANEL_NODES)? + tail(waves, &layout, r1)?) * area;
    let r2 = (1.25 * r1).ceil() + 0.5;
    let v2 = (bulk(waves, &layout, r2, CHECK_PANEL_NODES)? + tail(waves, &layout, r2)?) * area;
    Ok(Estimate {
        value: v1,
        error: (v1 - v2).abs() + 1e-13 * v1.abs(),
    })
}

/// Same integral with a caller-chosen split radius and panel order, without
/// the second evaluation.
pub fn product_integral_at(waves: &[&HarmonicWave], radius: f64, nodes: usize) -> Result<f64> {
    let layout = Layout::new(waves)?;
    let area = sphere_area(waves[0].d as i64 - 2)?;
    Ok((bulk(waves, &layout, radius, nodes)? + tail(waves, &layout, radius)?) * area)
}

/// The bulk part alone, ∫_{|ξ|<R}; used to check the tail formula.
pub fn product_integral_ball(waves: &[&HarmonicWave], radius: f64, nodes: usize) -> Result<f64> {
    let layout = Layout::new(waves)?;
    let area = sphere_area(waves[0].d as i64 - 2)?;
    Ok(bulk(waves, &layout, radius, nodes)? * area)
}
