//! Numerical checks of the sharp extension inequality, the weighted
//! bilinear inequality, the four-point identity, antipodal symmetrization
//! and the spectral bound for H_d.

use crate::eigencalc::{lambda_exact, lambda_numeric};
use crate::error::{domain, unsupported, Result};
use crate::measures::{sharp_constant_value, theorem_clause, Exponent};
use crate::rng::{chunk_rng, monte_carlo, unit_vector, Moments};
use crate::spherequad::{
    extension_norm_power, extension_product_l2, map_quadruple_chunks, point_at_angle,
    zonal_integral, TrialFunction, TrialKind,
};
use crate::specialfn::{beta_fn, harmonic_dim, sphere_area};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_distr::{Beta, Distribution};
use rand_pcg::Pcg32;
use serde::Serialize;
use std::f64::consts::PI;

/// How a report compares its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// lhs ≤ rhs.
    AtMost,
    /// lhs = rhs.
    Equal,
    /// lhs < rhs with a resolvable margin.
    StrictlyBelow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Verdict as a pure function of the compared values. The allowed slack
/// is max(tolerance, 3·stat_error).
pub fn judge(relation: Relation, lhs: f64, rhs: f64, stat_error: f64, tolerance: f64) -> Verdict {
    let slack = tolerance.max(3.0 * stat_error);
    if !(lhs.is_finite() && rhs.is_finite() && slack.is_finite()) {
        return Verdict::Fail;
    }
    match relation {
        Relation::AtMost => {
            if lhs <= rhs + slack {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        Relation::Equal => {
            if (lhs - rhs).abs() <= slack {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        Relation::StrictlyBelow => {
            if rhs - lhs > slack {
                Verdict::Pass
            } else if lhs > rhs + slack {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub stat_error: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, stat_error: f64, tolerance: f64, relation: Relation) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            stat_error,
            tolerance,
            relation,
            verdict: judge(relation, lhs, rhs, stat_error, tolerance),
        }
    }

    /// The verdict recomputed from the stored numbers.
    pub fn recomputed_verdict(&self) -> Verdict {
        judge(self.relation, self.lhs, self.rhs, self.stat_error, self.tolerance)
    }
}

/// Combined verdict: fail if any fails, else inconclusive if any is.
pub fn overall(reports: &[Report]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

fn one(d: u32) -> Result<TrialFunction> {
    TrialFunction::constant(d, Complex64::new(1.0, 0.0))
}

/// Random positive zonal profile: coefficients uniform in [−1, 1] on the
/// given degrees, damped by 1/(1+n), then shifted by max|p| + 0.1.
pub fn random_positive_profile(d: u32, rng: &mut Pcg32, degrees: &[usize]) -> Result<TrialFunction> {
    let top = degrees.iter().copied().max().unwrap_or(0);
    let mut coeffs = vec![0.0; top + 1];
    for &n in degrees {
        coeffs[n] = rng.random_range(-1.0..=1.0) / (1.0 + n as f64);
    }
    let p = TrialFunction::series(d, coeffs.clone())?;
    let peak = (0..=4000)
        .map(|i| p.profile(-1.0 + i as f64 / 2000.0).re.abs())
        .fold(0.0, f64::max);
    coeffs[0] += peak + 0.1;
    let shifted = TrialFunction::series(d, coeffs)?;
    let axis = shifted.axis.clone();
    TrialFunction::from_profile(d, &axis, move |u| shifted.profile(u).re)
}

const RANDOM_DEGREES: [usize; 6] = [0, 1, 2, 3, 4, 5];

/// ‖f̂σ‖_{L^{2k}} / ‖f‖_{L^q} and a bound on its numerical error.
pub fn extension_ratio(f: &TrialFunction, k: u32, q: Exponent) -> Result<(f64, f64)> {
    let est = extension_norm_power(f, k)?;
    let p = 2.0 * k as f64;
    let ratio = est.value.powf(1.0 / p) / f.lq_norm(q)?;
    let rel = est.error / est.value / p + 1e-12;
    Ok((ratio, ratio * rel))
}

/// Sharpness of C(d, 2k, q): f ≡ 1 attains it, random zonal trial
/// functions stay below it.
pub fn verify_thm1(d: u32, k: u32, q: Exponent, trials: usize, seed: u64) -> Result<Vec<Report>> {
    theorem_clause(d, k, q)?;
    let c = sharp_constant_value(d, k, q)?;
    let mut reports = Vec::with_capacity(trials + 1);
    let (r1, _) = extension_ratio(&one(d)?, k, q)?;
    reports.push(Report::new("constant attains C", r1, c, 0.0, 1e-5 * c, Relation::Equal));
    for i in 0..trials {
        let mut rng = chunk_rng(seed, i as u64);
        let (name, f) = if i % 2 == 0 {
            ("random profile".to_string(), random_positive_profile(d, &mut rng, &RANDOM_DEGREES)?)
        } else {
            let eps = rng.random_range(0.05..=0.5);
            let degree = rng.random_range(1..=4usize);
            (
                format!("1+{eps:.3}·Y_{degree}"),
                TrialFunction::harmonic_perturbation(d, eps, degree)?,
            )
        };
        let (r, _) = extension_ratio(&f, k, q)?;
        reports.push(Report::new(format!("trial {i}: {name}"), r, c, 0.0, 1e-6 * c, Relation::AtMost));
    }
    Ok(reports)
}

/// The perturbed constant 1+εY₂ against C(d,4,2): returns the ratio, its
/// numerical error, and the deficit C⁴‖f‖₂⁴ − ‖f̂σ‖⁴_{L⁴}.
pub fn perturbation_gap(d: u32, eps: f64, degree: usize) -> Result<(f64, f64, f64)> {
    let f = TrialFunction::harmonic_perturbation(d, eps, degree)?;
    let q = Exponent::Finite(2.0);
    let c = sharp_constant_value(d, 2, q)?;
    let est = extension_norm_power(&f, 2)?;
    let l2 = f.lq_norm(q)?;
    let ratio = est.value.powf(0.25) / l2;
    let err = ratio * (est.error / est.value / 4.0 + 1e-12);
    Ok((ratio, err, c.powi(4) * l2.powi(4) - est.value))
}

/// How ζ₂ is drawn in the weighted estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// ζ₂ at angle u from ζ₁ with (1+u)/2 ~ Beta((d−2)/2, d−2): the
    /// weight is absorbed into the draw and the variance stays finite.
    #[default]
    Importance,
    /// ζ₁, ζ₂ independent and uniform.
    Uniform,
}

// (1−u)^{d−3}(1+u)^{(d−4)/2} over (1−u²)^{(d−3)/2}, both integrated on [−1,1]:
// the mean of the weight under uniform pairs.
fn mean_weight(d: u32) -> Result<f64> {
    let df = d as f64;
    let num = 2f64.powf(df - 3.0 + (df - 4.0) / 2.0 + 1.0) * beta_fn(df - 2.0, (df - 2.0) / 2.0)?;
    let den = 2f64.powf(df - 2.0) * beta_fn((df - 1.0) / 2.0, (df - 1.0) / 2.0)?;
    Ok(num / den)
}

fn cor3_weight(d: u32, u: f64) -> f64 {
    ((1.0 - u).powi(d as i32 - 3) / (1.0 + u)).sqrt()
}

/// Monte Carlo estimate of the right side of the weighted bilinear
/// inequality, (2π)^d 2^{(2−d)/2} ω_{d−2} ∫∫ w(ζ₁·ζ₂)|f₁|²|f₂|², with its
/// standard error.
pub fn weighted_rhs_cor3(
    d: u32,
    f1: &TrialFunction,
    f2: &TrialFunction,
    n: usize,
    seed: u64,
    sampler: Sampler,
) -> Result<(f64, f64)> {
    if d < 3 {
        return domain(format!("the weighted bilinear estimate needs d ≥ 3, got {d}"));
    }
    if f1.d != d || f2.d != d {
        return domain("trial functions must live on S^{d−1}");
    }
    if n < 2 {
        return domain("need at least two samples");
    }
    let area = sphere_area(d as i64 - 1)?;
    let pref = (2.0 * PI).powi(d as i32) * 2f64.powf((2.0 - d as f64) / 2.0) * sphere_area(d as i64 - 2)? * area * area;
    let du = d as usize;
    let m: Moments = match sampler {
        Sampler::Importance => {
            let beta = Beta::new((d as f64 - 2.0) / 2.0, d as f64 - 2.0).map_err(|e| crate::Error::Domain(e.to_string()))?;
            let scale = mean_weight(d)?;
            let mm = monte_carlo(n, seed, |rng| {
                let z1 = unit_vector(rng, du);
                let u = (2.0 * beta.sample(rng) - 1.0).clamp(-1.0, 1.0);
                let z2 = point_at_angle(rng, &z1, u);
                f1.eval(&z1).norm_sqr() * f2.eval(&z2).norm_sqr()
            });
            Moments {
                mean: mm.mean * scale,
                m2: mm.m2 * scale * scale,
                count: mm.count,
            }
        }
        Sampler::Uniform => monte_carlo(n, seed, |rng| {
            let z1 = unit_vector(rng, du);
            let z2 = unit_vector(rng, du);
            let u: f64 = z1.iter().zip(&z2).map(|(a, b)| a * b).sum();
            cor3_weight(d, u.clamp(-1.0, 1.0)) * f1.eval(&z1).norm_sqr() * f2.eval(&z2).norm_sqr()
        }),
    };
    Ok((pref * m.mean, pref * m.std_error()))
}

fn cor3_report(name: &str, d: u32, f1: &TrialFunction, f2: &TrialFunction, n: usize, seed: u64, relation: Relation) -> Result<Report> {
    let lhs = extension_product_l2(f1, f2)?;
    let (rhs, se) = weighted_rhs_cor3(d, f1, f2, n, seed, Sampler::Importance)?;
    let tol = 10.0 * lhs.error + 1e-9 * rhs.abs();
    Ok(Report::new(name, lhs.value, rhs, se, tol, relation))
}

/// Weighted bilinear inequality: equality for constants, plane waves and
/// real exponentials with a shared exponent; strict for random pairs.
pub fn verify_cor3(d: u32, pairs: usize, n: usize, seed: u64) -> Result<Vec<Report>> {
    if d < 3 {
        return domain(format!("the weighted bilinear check needs d ≥ 3, got {d}"));
    }
    let mut reports = Vec::with_capacity(pairs + 3);
    let c = one(d)?;
    reports.push(cor3_report("constants", d, &c, &c, n, seed, Relation::Equal)?);
    let mut xi = vec![0.0; d as usize];
    xi[0] = 1.2;
    let pw = TrialFunction::plane_wave(d, &xi)?;
    let pw2 = pw.clone().scaled(Complex64::new(0.0, 2.0));
    reports.push(cor3_report("plane waves, shared ξ", d, &pw, &pw2, n, seed ^ 1, Relation::Equal)?);
    let ex = TrialFunction::exponential(d, &xi, 0.8)?;
    let ex2 = ex.clone().scaled(Complex64::new(0.5, 0.0));
    reports.push(cor3_report("real exponentials, shared ν", d, &ex, &ex2, n, seed ^ 2, Relation::Equal)?);
    for i in 0..pairs {
        let mut rng = chunk_rng(seed, 1_000_000 + i as u64);
        let f1 = random_positive_profile(d, &mut rng, &RANDOM_DEGREES)?;
        let f2 = random_positive_profile(d, &mut rng, &RANDOM_DEGREES)?;
        reports.push(cor3_report(&format!("random pair {i}"), d, &f1, &f2, n, seed.wrapping_add(3 + i as u64), Relation::StrictlyBelow)?);
    }
    Ok(reports)
}

/// |ζ₁+ζ₂||ζ₃+ζ₄| + |ζ₁+ζ₃||ζ₂+ζ₄| + |ζ₁+ζ₄||ζ₂+ζ₃|.
pub fn identity_sum(z: [&[f64]; 4]) -> f64 {
    let len = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum::<f64>().sqrt();
    len(z[0], z[1]) * len(z[2], z[3]) + len(z[0], z[2]) * len(z[1], z[3]) + len(z[0], z[3]) * len(z[1], z[2])
}

/// Largest deviation of the four-point identity from 4 over `n` sampled
/// quadruples; passes at 1e−12.
pub fn geometric_identity(d: u32, n: usize, seed: u64) -> Result<Report> {
    let maxes = map_quadruple_chunks(d as usize, n, seed, |batch| {
        batch.rows().map(|z| (identity_sum(z) - 4.0).abs()).fold(0.0, f64::max)
    })?;
    let worst = maxes.into_iter().fold(0.0, f64::max);
    Ok(Report::new(
        format!("four-point identity, {n} quadruples"),
        worst,
        1e-12,
        0.0,
        0.0,
        Relation::AtMost,
    ))
}

/// (2π)^d Q(f, f_⋆, f, f_⋆) = ‖f̂σ‖⁴_{L⁴} for real f, with its error.
fn q_star_form(f: &TrialFunction) -> Result<(f64, f64)> {
    let est = extension_norm_power(f, 2)?;
    let s = (2.0 * PI).powi(f.d as i32);
    Ok((est.value / s, est.error / s))
}

/// Antipodal symmetrization: ‖f_♯‖₂ = ‖f‖₂ and
/// Q(f, f_⋆, f, f_⋆) ≤ Q(f_♯, f_♯, f_♯, f_♯), strictly unless f is even.
pub fn antipodal_check(f: &TrialFunction) -> Result<Vec<Report>> {
    if f.d < 3 {
        return domain(format!("antipodal check needs d ≥ 3, got {}", f.d));
    }
    if !f.is_real_nonnegative() {
        return unsupported("antipodal symmetrization is defined for real nonnegative functions");
    }
    let s = f.antipodal_symmetrization()?;
    let two = Exponent::Finite(2.0);
    let (a, b) = (s.lq_norm(two)?, f.lq_norm(two)?);
    let mut reports = vec![Report::new("‖f♯‖₂ = ‖f‖₂", a, b, 0.0, 1e-10 * b, Relation::Equal)];
    let (qf, ef) = q_star_form(f)?;
    let (qs, es) = q_star_form(&s)?;
    let even = (0..=200).all(|i| {
        let u = i as f64 / 200.0;
        (f.profile(u) - f.profile(-u)).norm() <= 1e-12 * f.profile(u).norm().max(1e-300)
    });
    let tol = 10.0 * (ef + es) + 1e-11 * qs;
    let relation = if even { Relation::Equal } else { Relation::StrictlyBelow };
    reports.push(Report::new("Q(f,f⋆,f,f⋆) vs Q(f♯,f♯,f♯,f♯)", qf, qs, 0.0, tol, relation));
    Ok(reports)
}

/// Λ_n(φ_d), exact for 3 ≤ d ≤ 7, by quadrature beyond.
pub fn kernel_eigenvalues(d: u32, nmax: usize) -> Result<Vec<f64>> {
    if (3..=7).contains(&d) {
        Ok(lambda_exact(d, nmax)?.iter().map(|x| x.to_f64()).collect())
    } else {
        (0..=nmax).map(|n| lambda_numeric(d, n)).collect()
    }
}

/// ‖Z_n‖²_{L²(S^{d−1})} = ω_{d−1}/dim 𝓗_n.
pub fn zonal_norm_sq(d: u32, n: usize) -> Result<f64> {
    let dim = harmonic_dim(d as u64, n as u64).to_f64().unwrap_or(f64::INFINITY);
    Ok(sphere_area(d as i64 - 1)? / dim)
}

/// H_d(g) = Σ Λ_n c_n² ‖Z_n‖² for g = Σ c_n Z_n with even degrees n.
pub fn hd_spectral(d: u32, coeffs: &[(usize, f64)]) -> Result<f64> {
    if d < 3 {
        return domain(format!("H_d needs d ≥ 3, got {d}"));
    }
    if let Some((n, _)) = coeffs.iter().find(|(n, _)| n % 2 == 1) {
        return domain(format!("H_d spectral form takes even degrees, got {n}"));
    }
    let nmax = coeffs.iter().map(|(n, _)| *n).max().unwrap_or(0);
    let lam = kernel_eigenvalues(d, nmax)?;
    coeffs
        .iter()
        .map(|&(n, c)| Ok(lam[n] * c * c * zonal_norm_sq(d, n)?))
        .sum()
}

/// |ζ₁−ζ₂|(4−|ζ₁−ζ₂|²)^{(d−3)/2} in terms of t = ζ₁·ζ₂.
pub fn hd_kernel(d: u32, t: f64) -> f64 {
    (2.0 - 2.0 * t).max(0.0).sqrt() * (2.0 + 2.0 * t).max(0.0).powf((d as f64 - 3.0) / 2.0)
}

/// Monte Carlo estimate of H_d(g) for real zonal g, with standard error.
pub fn hd_monte_carlo(g: &TrialFunction, n: usize, seed: u64) -> Result<(f64, f64)> {
    let d = g.d;
    if d < 3 {
        return domain(format!("H_d needs d ≥ 3, got {d}"));
    }
    let du = d as usize;
    let area = sphere_area(d as i64 - 1)?;
    let m = monte_carlo(n, seed, |rng| {
        let z1 = unit_vector(rng, du);
        let z2 = unit_vector(rng, du);
        let t: f64 = z1.iter().zip(&z2).map(|(a, b)| a * b).sum();
        g.eval(&z1).re * g.eval(&z2).re * hd_kernel(d, t.clamp(-1.0, 1.0))
    });
    Ok((area * area * m.mean, area * area * m.std_error()))
}

/// Even-degree zonal coefficients (degree, c_n) of a real trial function.
pub fn even_coefficients(g: &TrialFunction) -> Result<Vec<(usize, f64)>> {
    Ok(g.zonal_coefficients()?
        .iter()
        .enumerate()
        .filter(|(n, _)| n % 2 == 0)
        .map(|(n, c)| (n, c.re))
        .collect())
}

fn random_even_series(d: u32, rng: &mut Pcg32) -> Result<TrialFunction> {
    let mut coeffs = vec![0.0; 11];
    for n in (2..=10).step_by(2) {
        coeffs[n] = rng.random_range(-1.0..=1.0) / (1.0 + n as f64);
    }
    let p = TrialFunction::series(d, coeffs.clone())?;
    let peak = (0..=4000)
        .map(|i| p.profile(-1.0 + i as f64 / 2000.0).re.abs())
        .fold(0.0, f64::max);
    coeffs[0] = peak + 0.1 + rng.random_range(0.0..1.0);
    TrialFunction::series(d, coeffs)
}

fn l1_norm(g: &TrialFunction) -> Result<f64> {
    zonal_integral(g.d, |u| g.profile(u).norm(), 400)
}

/// Spectral bound H_d(g) ≤ |μ|² H_d(1) for even g, strict unless g is
/// constant, plus the L¹ continuity bound on random pairs. With
/// `samples > 0` each random g is also checked against Monte Carlo.
pub fn verify_lem11(d: u32, trials: usize, samples: usize, seed: u64) -> Result<Vec<Report>> {
    if !(3..=7).contains(&d) {
        return domain(format!("the H_d bound is checked for 3 ≤ d ≤ 7, got d={d}"));
    }
    let h1 = hd_spectral(d, &[(0, 1.0)])?;
    let mut reports = vec![Report::new("g = 1", h1, h1, 0.0, 1e-12 * h1.abs(), Relation::Equal)];
    for i in 0..trials {
        let mut rng = chunk_rng(seed, 2_000_000 + i as u64);
        let g = random_even_series(d, &mut rng)?;
        let c = even_coefficients(&g)?;
        let mu = c[0].1;
        let hg = hd_spectral(d, &c)?;
        let rhs = mu * mu * h1;
        reports.push(Report::new(format!("random even g {i}"), hg, rhs, 0.0, 1e-10 * rhs.abs(), Relation::StrictlyBelow));
        if samples > 0 {
            let (mc, se) = hd_monte_carlo(&g, samples, seed.wrapping_add(i as u64))?;
            reports.push(Report::new(format!("random even g {i}: Monte Carlo vs spectral"), mc, hg, se, 0.0, Relation::Equal));
        }
    }
    for i in 0..10 {
        let mut rng = chunk_rng(seed, 3_000_000 + i as u64);
        let g1 = random_even_series(d, &mut rng)?;
        let g2 = random_even_series(d, &mut rng)?;
        let h = |g: &TrialFunction| -> Result<f64> { hd_spectral(d, &even_coefficients(g)?) };
        let lhs = (h(&g1)? - h(&g2)?).abs();
        let (TrialKind::Series { coeffs: a }, TrialKind::Series { coeffs: b }) = (&g1.kind, &g2.kind) else {
            unreachable!("random_even_series builds series");
        };
        let diff = TrialFunction::series(d, a.iter().zip(b).map(|(x, y)| x - y).collect())?;
        let rhs = 2f64.powi(d as i32 - 2) * (l1_norm(&g1)? + l1_norm(&g2)?) * l1_norm(&diff)?;
        reports.push(Report::new(format!("continuity pair {i}"), lhs, rhs, 0.0, 1e-9 * rhs, Relation::AtMost));
    }
    Ok(reports)
}

/// One stage of the four-step chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStage {
    pub name: String,
    pub value: f64,
    pub error: f64,
}

/// The chain ‖f̂σ‖⁴ ≤ (2π)^d Q(|f|,|f|⋆,|f|,|f|⋆) ≤ (2π)^d Q(|f|♯,…)
/// ≤ (3/4)(2π)^d 2^{3−d} ω_{d−2} H_d(|f|♯²) ≤ C⁴‖f‖₂⁴.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub d: u32,
    pub stages: Vec<ChainStage>,
    pub reports: Vec<Report>,
    /// All stages agree to 1e−8 relative.
    pub all_equal: bool,
}

pub fn chain_report(d: u32, f: &TrialFunction) -> Result<ChainReport> {
    if !(3..=7).contains(&d) {
        return domain(format!("the chain is verified for 3 ≤ d ≤ 7, got d={d}"));
    }
    if f.d != d {
        return domain("trial function lives on a different sphere");
    }
    let s1 = extension_norm_power(f, 2)?;
    let a = f.modulus()?;
    let s2 = extension_norm_power(&a, 2)?;
    let sharp = a.antipodal_symmetrization()?;
    let s3 = extension_norm_power(&sharp, 2)?;
    let sq = sharp.modulus_squared()?;
    let hd = hd_spectral(d, &even_coefficients(&sq)?)?;
    let pref = 0.75 * (2.0 * PI).powi(d as i32) * 2f64.powi(3 - d as i32) * sphere_area(d as i64 - 2)?;
    let s4 = pref * hd;
    let c = sharp_constant_value(d, 2, Exponent::Finite(2.0))?;
    let l2 = f.lq_norm(Exponent::Finite(2.0))?;
    let s5 = c.powi(4) * l2.powi(4);
    let stages = vec![
        ChainStage { name: "‖f̂σ‖⁴".into(), value: s1.value, error: s1.error },
        ChainStage { name: "(2π)^d Q(|f|,|f|⋆,|f|,|f|⋆)".into(), value: s2.value, error: s2.error },
        ChainStage { name: "(2π)^d Q(|f|♯,|f|♯,|f|♯,|f|♯)".into(), value: s3.value, error: s3.error },
        ChainStage { name: "(3/4)(2π)^d 2^{3−d} ω_{d−2} H_d(|f|♯²)".into(), value: s4, error: 1e-11 * s4.abs() },
        ChainStage { name: "C⁴‖f‖₂⁴".into(), value: s5, error: 1e-10 * s5 },
    ];
    let reports = stages
        .windows(2)
        .map(|w| {
            let tol = 10.0 * (w[0].error + w[1].error) + 1e-9 * w[1].value.abs();
            Report::new(format!("{} ≤ {}", w[0].name, w[1].name), w[0].value, w[1].value, 0.0, tol, Relation::AtMost)
        })
        .collect();
    let top = stages.iter().map(|s| s.value.abs()).fold(0.0, f64::max);
    let all_equal = stages.iter().all(|s| (s.value - stages[0].value).abs() <= 1e-8 * top);
    Ok(ChainReport { d, stages, reports, all_equal })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        assert_eq!(judge(Relation::AtMost, 1.0, 1.0, 0.0, 0.0), Verdict::Pass);
        assert_eq!(judge(Relation::AtMost, 1.1, 1.0, 0.0, 0.05), Verdict::Fail);
        assert_eq!(judge(Relation::AtMost, 1.1, 1.0, 0.04, 0.0), Verdict::Pass);
        assert_eq!(judge(Relation::Equal, 0.9, 1.0, 0.0, 0.05), Verdict::Fail);
        assert_eq!(judge(Relation::StrictlyBelow, 0.9, 1.0, 0.01, 0.0), Verdict::Pass);
        assert_eq!(judge(Relation::StrictlyBelow, 0.99, 1.0, 0.01, 0.0), Verdict::Inconclusive);
        assert_eq!(judge(Relation::StrictlyBelow, 1.1, 1.0, 0.01, 0.0), Verdict::Fail);
        assert_eq!(judge(Relation::AtMost, f64::NAN, 1.0, 0.0, 0.0), Verdict::Fail);
    }

    #[test]
    fn identity_on_hand_configurations() {
        let e = |i: usize, s: f64| {
            let mut v = vec![0.0; 3];
            v[i] = s;
            v
        };
        let (a, b, c, dd) = (e(0, 1.0), e(0, -1.0), e(1, 1.0), e(1, -1.0));
        assert!((identity_sum([&a, &b, &c, &dd]) - 4.0).abs() < 1e-15);
        let s = 1.0 / 3f64.sqrt();
        let t = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
        assert!((identity_sum([&t[0], &t[1], &t[2], &t[3]]) - 4.0).abs() < 1e-14);
        let r = geometric_identity(4, 50_000, 9).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn spectral_form_of_constants() {
        for d in 3..=7 {
            let h = hd_spectral(d, &[(0, 2.0)]).unwrap();
            let lam0 = kernel_eigenvalues(d, 0).unwrap()[0];
            let w = sphere_area(d as i64 - 1).unwrap();
            assert!((h - 4.0 * lam0 * w).abs() < 1e-12 * h);
            assert!(hd_spectral(d, &[(2, 1.0)]).unwrap() < 0.0);
        }
        assert!(hd_spectral(4, &[(1, 1.0)]).is_err());
    }

    // C(d,4,2)⁴ = (3/4)(2π)^d 2^{3−d} ω_{d−2} H_d(1) / ω_{d−1}²
    #[test]
    fn chain_endpoint_constant() {
        for d in 3..=7 {
            let w = sphere_area(d as i64 - 1).unwrap();
            let h1 = hd_spectral(d, &[(0, 1.0)]).unwrap();
            let rhs = 0.75 * (2.0 * PI).powi(d as i32) * 2f64.powi(3 - d as i32) * sphere_area(d as i64 - 2).unwrap() * h1 / (w * w);
            let c = sharp_constant_value(d, 2, Exponent::Finite(2.0)).unwrap();
            assert!(((c.powi(4) - rhs) / rhs).abs() < 1e-9, "d={d}");
        }
    }

    #[test]
    fn hd_monte_carlo_agrees() {
        let mut rng = chunk_rng(5, 0);
        let g = random_even_series(4, &mut rng).unwrap();
        let spec = hd_spectral(4, &even_coefficients(&g).unwrap()).unwrap();
        let (mc, se) = hd_monte_carlo(&g, 200_000, 3).unwrap();
        assert!((mc - spec).abs() < 3.0 * se, "{mc} {spec} {se}");
    }

    #[test]
    fn weighted_estimate_for_constants_is_exact() {
        let c = one(3).unwrap();
        let (v, se) = weighted_rhs_cor3(3, &c, &c, 10_000, 1, Sampler::Importance).unwrap();
        let want = 256.0 * PI.powi(6);
        assert!(((v - want) / want).abs() < 1e-12);
        assert!(se < 1e-9 * want);
        let scaled = c.clone().scaled(Complex64::new(3.0, 0.0));
        let (v3, _) = weighted_rhs_cor3(3, &c, &scaled, 10_000, 1, Sampler::Importance).unwrap();
        assert!((v3 / v - 9.0).abs() < 1e-12);
        let (u, use_) = weighted_rhs_cor3(4, &one(4).unwrap(), &one(4).unwrap(), 200_000, 2, Sampler::Uniform).unwrap();
        let (i4, _) = weighted_rhs_cor3(4, &one(4).unwrap(), &one(4).unwrap(), 1000, 2, Sampler::Importance).unwrap();
        assert!((u - i4).abs() < 3.0 * use_);
    }

    #[test]
    fn antipodal_examples() {
        let even = TrialFunction::harmonic_perturbation(3, 0.4, 2).unwrap();
        let r = antipodal_check(&even).unwrap();
        assert!(r.iter().all(|x| x.verdict == Verdict::Pass), "{r:?}");
        let odd = TrialFunction::from_profile(3, &[1.0, 0.0, 0.0], |u| 1.0 + u).unwrap();
        let r = antipodal_check(&odd).unwrap();
        assert!(r.iter().all(|x| x.verdict == Verdict::Pass), "{r:?}");
        let signed = TrialFunction::harmonic_perturbation(3, 3.0, 2).unwrap();
        assert!(antipodal_check(&signed).is_err());
    }

    #[test]
    fn chain_for_constant_is_flat() {
        let c = chain_report(5, &one(5).unwrap()).unwrap();
        assert!(c.all_equal, "{:?}", c.stages);
        assert!(c.reports.iter().all(|r| r.verdict == Verdict::Pass));
    }

    #[test]
    fn chain_for_perturbation_is_strict() {
        let f = TrialFunction::harmonic_perturbation(3, 0.3, 2).unwrap();
        let c = chain_report(3, &f).unwrap();
        assert!(c.reports.iter().all(|r| r.verdict == Verdict::Pass), "{:?}", c.reports);
        assert!(c.stages[0].value < c.stages[4].value * (1.0 - 1e-4));
    }
}
