//! Radial quantities of surface measure: σ̂, σ∗σ, k-fold convolution
//! densities, L^{2k} norms of σ̂ and the sharp extension constants.

use crate::error::{domain, unsupported, Error, Result};
use crate::orthopoly::{gauss_jacobi, JacobiRule};
use crate::radial_waves::{product_integral, Estimate, HarmonicWave};
use crate::specialfn::{bessel_j_scaled, gamma_fn, sphere_area};
use serde::{Serialize, Serializer};
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;

/// σ̂(r) = (2π)^{d/2} r^{(2−d)/2} J_{(d−2)/2}(r), with σ̂(0) = ω_{d−1}.
///
/// ```
/// use sharpsphere::measures::sigma_hat;
/// let r = 1.3f64;
/// let want = 4.0 * std::f64::consts::PI * r.sin() / r;
/// assert!((sigma_hat(3, r).unwrap() - want).abs() < 1e-13);
/// ```
pub fn sigma_hat(d: u32, r: f64) -> Result<f64> {
    if d < 2 {
        return domain(format!("sigma_hat needs d ≥ 2, got {d}"));
    }
    if r.is_nan() || r < 0.0 {
        return domain(format!("sigma_hat needs r ≥ 0, got {r}"));
    }
    if r == 0.0 {
        return sphere_area(d as i64 - 1);
    }
    let alpha = (d as f64 - 2.0) / 2.0;
    Ok((2.0 * PI).powf(d as f64 / 2.0) * bessel_j_scaled(alpha, r)?)
}

/// Density of σ∗σ at radius r: 2^{3−d} ω_{d−2} r^{−1} (4−r²)_+^{(d−3)/2}.
///
/// Infinite at r = 0, and at r = 2 when d = 2.
pub fn conv2(d: u32, r: f64) -> Result<f64> {
    if d < 2 {
        return domain(format!("conv2 needs d ≥ 2, got {d}"));
    }
    if r.is_nan() || r < 0.0 {
        return domain(format!("conv2 needs r ≥ 0, got {r}"));
    }
    if r == 0.0 {
        return Ok(f64::INFINITY);
    }
    if r > 2.0 {
        return Ok(0.0);
    }
    let e = (d as f64 - 3.0) / 2.0;
    let gap = (2.0 - r) * (2.0 + r);
    if gap == 0.0 {
        return Ok(if e < 0.0 {
            f64::INFINITY
        } else if e == 0.0 {
            2f64.powi(3 - d as i32) * sphere_area(d as i64 - 2)? / r
        } else {
            0.0
        });
    }
    Ok(2f64.powi(3 - d as i32) * sphere_area(d as i64 - 2)? / r * gap.powf(e))
}

#[derive(Debug, Clone, PartialEq)]
struct Panel {
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl Panel {
    fn eval(&self, r: f64) -> f64 {
        let n = self.nodes.len();
        let i = match self.nodes.binary_search_by(|x| x.partial_cmp(&r).expect("finite")) {
            Ok(i) => return self.values[i],
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        v.max(0.0)
    }
}

// Hermite slopes: second-order three-point estimates, one-sided at the panel
// ends, limited so the cubic stays monotone between nodes.
fn monotone_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let sec: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = sec[0];
        d[1] = sec[0];
        return d;
    }
    for i in 1..n - 1 {
        let raw = (h[i - 1] * sec[i] + h[i] * sec[i - 1]) / (h[i - 1] + h[i]);
        d[i] = if sec[i - 1] * sec[i] > 0.0 {
            let cap = 3.0 * sec[i - 1].abs().min(sec[i].abs());
            raw.signum() * raw.abs().min(cap) * if raw.signum() == sec[i].signum() { 1.0 } else { 0.0 }
        } else {
            0.0
        };
    }
    let end = |h0: f64, h1: f64, s0: f64, s1: f64| {
        let raw = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if raw.signum() != s0.signum() {
            0.0
        } else if s0.signum() != s1.signum() && raw.abs() > 3.0 * s0.abs() {
            3.0 * s0
        } else {
            raw.signum() * raw.abs().min(3.0 * s0.abs())
        }
    };
    d[0] = end(h[0], h[1], sec[0], sec[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], sec[n - 2], sec[n - 3]);
    d
}

/// Radial density of σ^{(fold)} on S^{d−1}, sampled on a grid over
/// [0, fold] that is cosine-clustered inside every unit interval, with
/// monotone cubic interpolation between nodes. Zero beyond `fold`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub dim: u32,
    pub fold: u32,
    panels: Vec<Panel>,
}

impl RadialProfile {
    /// Density at radius r.
    pub fn eval(&self, r: f64) -> f64 {
        if r < 0.0 || r.is_nan() {
            return f64::NAN;
        }
        if r > self.fold as f64 {
            return 0.0;
        }
        if self.fold == 2 {
            return conv2(self.dim, r).expect("valid dimension");
        }
        let j = (r.floor() as usize).min(self.panels.len() - 1);
        self.panels[j].eval(r)
    }

    /// Grid radii, increasing, shared panel ends listed once.
    pub fn radii(&self) -> Vec<f64> {
        self.flatten(|p| &p.nodes)
    }

    /// Density values at `radii()`.
    pub fn values(&self) -> Vec<f64> {
        self.flatten(|p| &p.values)
    }

    fn flatten<'a>(&'a self, pick: impl Fn(&'a Panel) -> &'a Vec<f64>) -> Vec<f64> {
        let mut out = Vec::new();
        for (j, p) in self.panels.iter().enumerate() {
            let v = pick(p);
            let skip = if j == 0 { 0 } else { 1 };
            out.extend_from_slice(&v[skip..]);
        }
        out
    }

    /// ∫_{ℝ^d} σ^{(fold)} = ω_{d−1} ∫_0^fold density(r) r^{d−1} dr.
    pub fn total_mass(&self) -> Result<f64> {
        let d = self.dim as i32;
        let area = sphere_area(d as i64 - 1)?;
        if self.fold == 2 {
            // r^{d−2}(4−r²)^{(d−3)/2} on [0, 2]
            let e = (d as f64 - 3.0) / 2.0;
            let rule = gauss_jacobi(40, e, 0.0)?;
            let s = rule.integrate(|x| {
                let r = 1.0 + x;
                r.powi(d - 2) * (2.0 + r).powf(e)
            });
            return Ok(area * 2f64.powi(3 - d) * sphere_area(d as i64 - 2)? * s);
        }
        let rule = gauss_jacobi(6, 0.0, 0.0)?;
        let mut total = 0.0;
        for p in &self.panels {
            for w in p.nodes.windows(2) {
                let (a, b) = (w[0], w[1]);
                let s = rule.integrate(|x| {
                    let r = a + 0.5 * (b - a) * (x + 1.0);
                    p.eval(r) * r.powi(d - 1)
                });
                total += 0.5 * (b - a) * s;
            }
        }
        Ok(area * total)
    }
}

fn panel_grid(lo: f64, per_panel: usize) -> Vec<f64> {
    (0..=per_panel)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == per_panel {
                lo + 1.0
            } else {
                lo + 0.5 * (1.0 - (PI * i as f64 / per_panel as f64).cos())
            }
        })
        .collect()
}

// Gauss–Jacobi rules for the endpoint exponents that occur in one recursion.
struct Rules {
    rules: HashMap<(u64, u64, usize), JacobiRule>,
    cell: JacobiRule,
}

impl Rules {
    fn new(e: f64) -> Result<Self> {
        let mut rules = HashMap::new();
        for n in [ADAPT_LOW, ADAPT_HIGH] {
            for a in [0.0, e] {
                for b in [0.0, e] {
                    rules.insert((a.to_bits(), b.to_bits(), n), gauss_jacobi(n, a, b)?);
                }
            }
        }
        Ok(Self {
            rules,
            cell: gauss_jacobi(CELL_NODES, 0.0, 0.0)?,
        })
    }

    fn get(&self, n: usize, a: f64, b: f64) -> &JacobiRule {
        &self.rules[&(a.to_bits(), b.to_bits(), n)]
    }
}

const ADAPT_LOW: usize = 16;
const ADAPT_HIGH: usize = 32;
const ADAPT_DEPTH: u32 = 40;
const ADAPT_FLOOR: f64 = 1e-14;
const CELL_NODES: usize = 4;

// w^{n/2} without powf
fn half_power(w: f64, twice: i32) -> f64 {
    let whole = w.powi(twice.div_euclid(2));
    if twice.rem_euclid(2) == 1 {
        whole * w.sqrt()
    } else {
        whole
    }
}

fn apply_rule<G: Fn(f64) -> f64>(rule: &JacobiRule, g: &G, p: f64, q: f64) -> f64 {
    let half = 0.5 * (q - p);
    let s: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            let rho = p + half * (x + 1.0);
            w * g(rho) / ((1.0 - x).powf(rule.a) * (1.0 + x).powf(rule.b))
        })
        .sum();
    half * s
}

// ∫_p^q g with g ~ (ρ−p)^{eb} (q−ρ)^{ea} at the ends; compares a 16- and a
// 32-point Gauss–Jacobi rule and bisects until they agree.
fn adaptive<G: Fn(f64) -> f64>(g: &G, p: f64, q: f64, ea: f64, eb: f64, depth: u32, rules: &Rules) -> f64 {
    let coarse = apply_rule(rules.get(ADAPT_LOW, ea, eb), g, p, q);
    let fine = apply_rule(rules.get(ADAPT_HIGH, ea, eb), g, p, q);
    if (fine - coarse).abs() <= (1e-12 * fine.abs()).max(ADAPT_FLOOR) || depth >= ADAPT_DEPTH {
        return fine;
    }
    let mid = 0.5 * (p + q);
    adaptive(g, p, mid, 0.0, eb, depth + 1, rules) + adaptive(g, mid, q, ea, 0.0, depth + 1, rules)
}

// One recursion step: density of σ^{(k)} at r from the density of σ^{(k−1)}.
// `breaks` are the radii where the previous density is not smooth (its grid
// nodes, or just the integers when it is known in closed form).
fn next_fold_value(d: u32, prev: &RadialProfile, breaks: &[f64], r: f64, rules: &Rules) -> Result<f64> {
    let m = prev.fold as f64;
    if r >= m + 1.0 {
        return Ok(0.0);
    }
    if r == 0.0 {
        return Ok(sphere_area(d as i64 - 1)? * prev.eval(1.0));
    }
    let e = (d as f64 - 3.0) / 2.0;
    let lo = (r - 1.0).abs();
    let hi = r + 1.0;
    let upper = hi.min(m);
    if upper <= lo {
        return Ok(0.0);
    }
    let g = |rho: f64| {
        let w = ((rho - lo) * (rho + lo) * (hi - rho) * (hi + rho)).max(0.0);
        2.0 * rho * prev.eval(rho) * half_power(w, d as i32 - 3)
    };
    let first = breaks.partition_point(|&x| x <= lo);
    let last = breaks.partition_point(|&x| x < upper);
    let mut cuts = Vec::with_capacity(last - first + 2);
    cuts.push(lo);
    for &x in &breaks[first..last] {
        if x - lo > 1e-12 && upper - x > 1e-12 {
            cuts.push(x);
        }
    }
    cuts.push(upper);
    let ncell = cuts.len() - 1;
    let mut total = 0.0;
    for (idx, w) in cuts.windows(2).enumerate() {
        let left_exp = if idx == 0 && lo > 0.0 { e } else { 0.0 };
        // σ∗σ ~ (2−ρ)^{(d−3)/2} at its support edge
        let right_exp = if idx + 1 == ncell && (upper == hi || prev.fold == 2) { e } else { 0.0 };
        total += if idx == 0 || idx + 1 == ncell || prev.fold == 2 {
            adaptive(&g, w[0], w[1], right_exp, left_exp, 0, rules)
        } else {
            apply_rule(&rules.cell, &g, w[0], w[1])
        };
    }
    Ok(sphere_area(d as i64 - 2)? / (2.0 * r).powi(d as i32 - 2) * total)
}

/// Default number of grid nodes of a convolution profile.
pub const DEFAULT_GRID: usize = 2048;

/// σ^{(fold)} as a radial profile with about `grid_size` nodes.
pub fn conv_profile(d: u32, fold: u32, grid_size: usize) -> Result<RadialProfile> {
    Ok(conv_tower(d, fold, grid_size)?
        .pop()
        .expect("tower holds at least one profile"))
}

/// Profiles of σ^{(2)}, …, σ^{(fold)}, each built from the previous one.
pub fn conv_tower(d: u32, fold: u32, grid_size: usize) -> Result<Vec<RadialProfile>> {
    if d == 2 && fold >= 3 {
        return unsupported(
            "convolution recursion for d = 2 beyond fold 2 (endpoint singularities of σ∗σ)",
        );
    }
    if d < 3 {
        return domain(format!("conv_profile needs d ≥ 3, got {d}"));
    }
    if fold < 2 {
        return domain(format!("conv_profile needs fold ≥ 2, got {fold}"));
    }
    if grid_size < 64 {
        return domain(format!("conv_profile needs grid_size ≥ 64, got {grid_size}"));
    }
    let rules = Rules::new((d as f64 - 3.0) / 2.0)?;
    let mut tower = Vec::new();
    let base = {
        let per = (grid_size / 2).max(8);
        let panels = (0..2)
            .map(|j| {
                let nodes = panel_grid(j as f64, per);
                let values = nodes
                    .iter()
                    .map(|&r| conv2(d, r))
                    .collect::<Result<Vec<_>>>()?;
                let slopes = vec![f64::NAN; nodes.len()];
                Ok(Panel {
                    nodes,
                    values,
                    slopes,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RadialProfile {
            dim: d,
            fold: 2,
            panels,
        }
    };
    tower.push(base);
    for k in 3..=fold {
        let prev = tower.last().expect("non-empty");
        let breaks: Vec<f64> = if prev.fold == 2 {
            vec![1.0]
        } else {
            prev.radii()
        };
        let per = (grid_size / k as usize).max(8);
        let mut panels = Vec::with_capacity(k as usize);
        for j in 0..k {
            let nodes = panel_grid(j as f64, per);
            let values = nodes
                .par_iter()
                .map(|&r| next_fold_value(d, prev, &breaks, r, &rules))
                .collect::<Result<Vec<_>>>()?;
            let slopes = monotone_slopes(&nodes, &values);
            panels.push(Panel {
                nodes,
                values,
                slopes,
            });
        }
        tower.push(RadialProfile {
            dim: d,
            fold: k,
            panels,
        });
    }
    Ok(tower)
}

/// Lebesgue exponent, finite or ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// 1/q, zero for q = ∞.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(q) => 1.0 / q,
            Exponent::Infinity => 0.0,
        }
    }

    /// True when q ≥ bound.
    pub fn at_least(self, bound: f64) -> bool {
        match self {
            Exponent::Finite(q) => q >= bound,
            Exponent::Infinity => true,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinity);
        }
        match t.parse::<f64>() {
            Ok(q) if q > 0.0 && q.is_finite() => Ok(Exponent::Finite(q)),
            Ok(q) if q == f64::INFINITY => Ok(Exponent::Infinity),
            _ => domain(format!("exponent must be a positive number or \"inf\", got {text:?}")),
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(q) => write!(f, "{q}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(q) => s.serialize_f64(*q),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

/// How a sharp constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PlancherelBessel,
    ClosedFormD4,
    Convolution,
}

/// Second, independent evaluation of a constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub method: Method,
    pub value: f64,
    pub rel_err: f64,
}

/// The sharp constant C(d, 2k, q) of the extension inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpConstant {
    pub d: u32,
    pub k: u32,
    pub q: Exponent,
    pub value: f64,
    pub method: Method,
    pub cross_check: Option<CrossCheck>,
}

/// ∫_{ℝ^d} |σ̂|^{2k} with an error estimate.
pub fn sigma_hat_power_integral(d: u32, k: u32) -> Result<Estimate> {
    if d < 2 {
        return domain(format!("sigma_hat_norm needs d ≥ 2, got {d}"));
    }
    if k < 2 {
        return domain(format!("sigma_hat_norm needs k ≥ 2, got {k}"));
    }
    if d == 2 && k == 2 {
        return domain("‖σ̂‖_{L⁴(ℝ²)} is infinite: the integral diverges logarithmically for (d,k) = (2,2)");
    }
    let w = HarmonicWave::sigma_hat(d);
    let waves: Vec<&HarmonicWave> = (0..k).map(|_| &w).collect();
    product_integral(&waves)
}

/// ‖σ̂‖_{L^{2k}(ℝ^d)}.
pub fn sigma_hat_norm(d: u32, k: u32) -> Result<f64> {
    Ok(sigma_hat_power_integral(d, k)?.value.powf(1.0 / (2.0 * k as f64)))
}

/// Upper bound for ∫_{|ξ|>R} |σ̂|^{2k} from |J_v(r)| ≤ √(2/(πr))(1+ε).
pub fn sigma_hat_envelope_tail(d: u32, k: u32, radius: f64) -> Result<f64> {
    let alpha = (d as f64 - 2.0) / 2.0;
    let s = (k as f64 - 1.0) * (d as f64 - 1.0);
    if s <= 1.0 {
        return domain("envelope tail diverges");
    }
    // 1+ε bound on the Hankel remainder, valid for R ≥ max(25, v²)
    let mu = 4.0 * alpha * alpha;
    let eps = (mu - 1.0).abs() / (8.0 * radius) * 2.0;
    let c = (2.0 * PI).powf(d as f64 / 2.0) * (2.0 / PI).sqrt() * (1.0 + eps);
    let area = sphere_area(d as i64 - 1)?;
    Ok(area * c.powf(2.0 * k as f64) * radius.powf(1.0 - s) / (s - 1.0))
}

/// Which clause of the sharp-constant theorem covers (d, k, q), if any.
pub fn theorem_clause(d: u32, k: u32, q: Exponent) -> Result<char> {
    match k {
        2 if (3..=7).contains(&d) => {
            if q.at_least(2.0) {
                Ok('a')
            } else {
                domain(format!("clause (a) (k=2, 3≤d≤7) requires q ≥ 2, got q={q}"))
            }
        }
        2 if d >= 8 => {
            if q.at_least(4.0) {
                Ok('b')
            } else {
                domain(format!("clause (b) (k=2, d≥8) requires q ≥ 4, got q={q}"))
            }
        }
        2 => domain(format!(
            "no clause covers k=2 with d={d}: clauses (a)/(b) need d ≥ 3"
        )),
        k if k >= 3 => {
            if d < 2 {
                domain(format!("clause (c) requires d ≥ 2, got d={d}"))
            } else if q.at_least(2.0 * k as f64) {
                Ok('c')
            } else {
                domain(format!("clause (c) (k≥3) requires q ≥ 2k = {}, got q={q}", 2 * k))
            }
        }
        _ => domain(format!("no clause covers k={k}: the theorem needs k ≥ 2")),
    }
}

/// C(d, 2k, q) without the cross-check.
pub fn sharp_constant_value(d: u32, k: u32, q: Exponent) -> Result<f64> {
    theorem_clause(d, k, q)?;
    Ok(sphere_area(d as i64 - 1)?.powf(-q.reciprocal()) * sigma_hat_norm(d, k)?)
}

/// C(d, 2k, q) = ω_{d−1}^{−1/q} ‖σ̂‖_{L^{2k}}, with a cross-check by the
/// closed k = 2 formula or, for k ≥ 3 and d ≥ 3, by (2π)^d σ^{(2k)}(0).
pub fn sharp_constant(d: u32, k: u32, q: Exponent) -> Result<SharpConstant> {
    theorem_clause(d, k, q)?;
    let norm = sigma_hat_norm(d, k)?;
    let area = sphere_area(d as i64 - 1)?;
    let value = area.powf(-q.reciprocal()) * norm;
    let cross_check = if k == 2 {
        let c = sharp_constant_d4_closed(d, q)?;
        Some(CrossCheck {
            method: Method::ClosedFormD4,
            value: c,
            rel_err: ((c - value) / value).abs(),
        })
    } else if d >= 3 && 2 * k <= 8 {
        let prof = conv_profile(d, 2 * k, DEFAULT_GRID)?;
        let power = (2.0 * PI).powi(d as i32) * prof.eval(0.0);
        let c = area.powf(-q.reciprocal()) * power.powf(1.0 / (2.0 * k as f64));
        Some(CrossCheck {
            method: Method::Convolution,
            value: c,
            rel_err: ((c - value) / value).abs(),
        })
    } else {
        None
    };
    Ok(SharpConstant {
        d,
        k,
        q,
        value,
        method: Method::PlancherelBessel,
        cross_check,
    })
}

/// Closed form of C(d, 4, q):
/// ω_{d−1}^{1/4−1/q} ω_{d−2}^{1/2} (2π)^{d/4} 2^{(d−3)/4}
/// [Γ(d−2)Γ((d−2)/2)/Γ(3(d−2)/2)]^{1/4}.
pub fn sharp_constant_d4_closed(d: u32, q: Exponent) -> Result<f64> {
    if d < 3 {
        return domain(format!("closed C(d,4,q) needs d ≥ 3, got {d}"));
    }
    let df = d as f64;
    let bracket = gamma_fn(df - 2.0)? * gamma_fn((df - 2.0) / 2.0)? / gamma_fn(1.5 * (df - 2.0))?;
    let v = sphere_area(d as i64 - 1)?.powf(0.25 - q.reciprocal())
        * sphere_area(d as i64 - 2)?.sqrt()
        * (2.0 * PI).powf(df / 4.0)
        * 2f64.powf((df - 3.0) / 4.0)
        * bracket.powf(0.25);
    if !v.is_finite() {
        return Err(Error::Range(format!("closed C(d,4,q) overflows at d={d}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_hat_examples() {
        for d in 2..9 {
            assert_eq!(sigma_hat(d, 0.0).unwrap(), sphere_area(d as i64 - 1).unwrap());
        }
        let j0 = crate::specialfn::bessel_jv(0.0, 2.2).unwrap();
        assert!((sigma_hat(2, 2.2).unwrap() - 2.0 * PI * j0).abs() < 1e-13);
    }

    // σ̂ at r = 1 against the defining integral 2π∫₋₁¹ e^{−iru} du over S².
    #[test]
    fn sigma_hat_matches_sphere_integral() {
        let rule = gauss_jacobi(30, 0.0, 0.0).unwrap();
        let direct = 2.0 * PI * rule.integrate(|u| (1.0 * u).cos());
        assert!((sigma_hat(3, 1.0).unwrap() - direct).abs() < 1e-13);
    }

    #[test]
    fn conv2_examples() {
        assert!((conv2(3, 1.0).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert_eq!(conv2(5, 3.0).unwrap(), 0.0);
        assert!((conv2(4, 1.0).unwrap() - 2.0 * PI * 3f64.sqrt()).abs() < 1e-13);
        assert_eq!(conv2(4, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(conv2(2, 2.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn three_fold_density_in_three_dimensions() {
        // σ^{(3)} = 8π² on [0,1] and 4π²(3−r)/r on [1,3]
        let p = conv_profile(3, 3, DEFAULT_GRID).unwrap();
        for &r in &[0.0, 0.3, 0.99, 1.0, 1.5, 2.2, 2.9] {
            let want = if r <= 1.0 { 8.0 * PI * PI } else { 4.0 * PI * PI * (3.0 - r) / r };
            let got = p.eval(r);
            assert!(((got - want) / want).abs() < 1e-9, "r={r} {got} {want}");
        }
        assert_eq!(p.eval(3.5), 0.0);
    }

    #[test]
    fn four_fold_at_origin_in_three_dimensions() {
        let p = conv_profile(3, 4, DEFAULT_GRID).unwrap();
        let want = 32.0 * PI.powi(3);
        assert!(((p.eval(0.0) - want) / want).abs() < 1e-9);
    }

    #[test]
    fn profile_support_and_positivity() {
        for d in 3..=6 {
            let tower = conv_tower(d, 5, 256).unwrap();
            for p in &tower[1..] {
                for (r, v) in p.radii().iter().zip(p.values()) {
                    if *r < p.fold as f64 {
                        assert!(v > 0.0, "d={d} fold={} r={r}", p.fold);
                    } else {
                        assert_eq!(v, 0.0);
                    }
                }
                assert_eq!(p.eval(p.fold as f64 + 0.1), 0.0);
            }
        }
        assert!(matches!(conv_profile(2, 3, 128), Err(Error::Unsupported(_))));
    }

    #[test]
    fn total_mass_telescopes() {
        for d in 3..=6u32 {
            let area = sphere_area(d as i64 - 1).unwrap();
            for p in conv_tower(d, 5, DEFAULT_GRID).unwrap() {
                let want = area.powi(p.fold as i32);
                let got = p.total_mass().unwrap();
                assert!(((got - want) / want).abs() < 1e-6, "d={d} fold={} {got} {want}", p.fold);
            }
        }
    }

    #[test]
    fn sharp_constant_examples() {
        let c = sharp_constant(3, 2, Exponent::Finite(2.0)).unwrap();
        assert!((c.value - 2.0 * PI).abs() < 1e-8 * 2.0 * PI);
        assert!(c.cross_check.unwrap().rel_err < 1e-10);
        let c = sharp_constant(3, 2, Exponent::Infinity).unwrap();
        assert!((c.value - 4.0 * PI.powf(1.5)).abs() < 1e-8 * c.value);
        assert!(sharp_constant(3, 2, Exponent::Finite(1.0)).is_err());
        assert!(sharp_constant(9, 2, Exponent::Finite(3.0)).is_err());
        assert!(sharp_constant(2, 2, Exponent::Finite(4.0)).is_err());
        assert!(sharp_constant(2, 3, Exponent::Finite(5.0)).is_err());
        assert!(sharp_constant(2, 3, Exponent::Finite(6.0)).is_ok());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for d in 3..=7 {
            for q in [Exponent::Finite(2.0), Exponent::Finite(4.0), Exponent::Finite(10.0), Exponent::Infinity] {
                let a = sharp_constant_d4_closed(d, q).unwrap();
                let b = sharp_constant(d, 2, q).unwrap().value;
                assert!(((a - b) / b).abs() < 1e-8, "d={d} q={q}");
            }
        }
    }

    #[test]
    fn two_dimensional_norm_is_finite_and_stable() {
        let w = HarmonicWave::sigma_hat(2);
        let a = crate::radial_waves::product_integral_at(&[&w, &w, &w], 64.0, 20).unwrap();
        let b = crate::radial_waves::product_integral_at(&[&w, &w, &w], 200.0, 24).unwrap();
        assert!(a > 0.0 && ((a - b) / a).abs() < 1e-6);
        assert!(sigma_hat_norm(2, 2).is_err());
    }

    #[test]
    fn envelope_bounds_the_tail() {
        for d in 3..=6 {
            let w = HarmonicWave::sigma_hat(d);
            let full = crate::radial_waves::product_integral_at(&[&w, &w], 64.0, 20).unwrap();
            let ball = crate::radial_waves::product_integral_ball(&[&w, &w], 64.0, 20).unwrap();
            let bound = sigma_hat_envelope_tail(d, 2, 64.0).unwrap();
            assert!(full - ball <= bound, "d={d}");
        }
    }
}
