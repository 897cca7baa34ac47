//! Gegenbauer polynomials, endpoint values and Gauss–Jacobi quadrature.

use crate::error::{domain, Error, Result};
use crate::specialfn::{ln_gamma, sphere_area};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Gegenbauer parameter α > 0, kept exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GegenbauerParam {
    alpha: BigRational,
}

impl GegenbauerParam {
    pub fn new(alpha: BigRational) -> Result<Self> {
        if !alpha.is_positive() {
            return domain(format!("Gegenbauer parameter must be positive, got {alpha}"));
        }
        Ok(Self { alpha })
    }

    /// α = n/2.
    pub fn half(twice: i64) -> Result<Self> {
        Self::new(BigRational::new(twice.into(), 2.into()))
    }

    /// α = (d−2)/2, the parameter attached to S^{d−1}; needs d ≥ 3.
    pub fn for_dimension(d: u32) -> Result<Self> {
        if d < 3 {
            return domain(format!("Gegenbauer parameter for S^(d-1) needs d ≥ 3, got {d}"));
        }
        Self::half(d as i64 - 2)
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn to_f64(&self) -> f64 {
        self.alpha.to_f64().unwrap_or(f64::NAN)
    }
}

/// C^α_k(t) by forward recurrence.
///
/// ```
/// use sharpsphere::orthopoly::{gegenbauer_eval, GegenbauerParam};
/// let legendre = GegenbauerParam::half(1).unwrap();
/// assert!((gegenbauer_eval(&legendre, 2, 0.0) + 0.5).abs() < 1e-15);
/// ```
pub fn gegenbauer_eval(alpha: &GegenbauerParam, k: usize, t: f64) -> f64 {
    gegenbauer_f64(alpha.to_f64(), k, t)
}

/// C^α_k(t) for a floating-point α > 0.
pub fn gegenbauer_f64(alpha: f64, k: usize, t: f64) -> f64 {
    *gegenbauer_sequence(alpha, k, t).last().expect("non-empty")
}

/// C^α_0(t), …, C^α_kmax(t).
pub fn gegenbauer_sequence(alpha: f64, kmax: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax == 0 {
        return out;
    }
    out.push(2.0 * alpha * t);
    for n in 1..kmax {
        let nf = n as f64;
        let next = ((2.0 * nf + 2.0 * alpha) * t * out[n] - (nf + 2.0 * alpha - 1.0) * out[n - 1])
            / (nf + 1.0);
        out.push(next);
    }
    out
}

/// Exact C^α_k(t) for rational α and t.
pub fn gegenbauer_eval_exact(alpha: &GegenbauerParam, k: usize, t: &BigRational) -> BigRational {
    let a = alpha.alpha();
    let two = BigRational::from_integer(2.into());
    let mut prev = BigRational::one();
    if k == 0 {
        return prev;
    }
    let mut cur = &two * a * t;
    for n in 1..k {
        let nq = BigRational::from_integer(n.into());
        let next = ((&two * &nq + &two * a) * t * &cur
            - (&nq + &two * a - BigRational::one()) * &prev)
            / (&nq + BigRational::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact endpoint value C^α_k(1) = ∏_{j<k} (2α + j)/(j + 1).
///
/// For α = 3/2 this is C(k+2, 2), for α = 2 it is C(k+3, 3).
pub fn gegenbauer_one(alpha: &GegenbauerParam, k: usize) -> BigRational {
    let two_a = alpha.alpha() * BigRational::from_integer(2.into());
    let mut acc = BigRational::one();
    for j in 0..k {
        let jq = BigRational::from_integer(j.into());
        acc = acc * (&two_a + &jq) / (jq + BigRational::one());
    }
    acc
}

/// P_k′(−1) = (−1)^{k+1} C(k+1, 2).
pub fn legendre_derivative_endpoint(k: u64) -> BigInt {
    let c = BigInt::from(k) * BigInt::from(k + 1) / 2;
    if k % 2 == 1 {
        c
    } else {
        -c
    }
}

/// Gauss–Jacobi rule for the weight (1−t)^a (1+t)^b on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

impl JacobiRule {
    /// Σ w_i f(t_i).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// P^{(a,b)}_n(x) and its derivative.
pub fn jacobi_with_derivative(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let ab = a + b;
    let mut p0 = 1.0;
    let mut p1 = (a + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        let num = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p1
            - 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * c * p0;
        let p2 = num / (2.0 * kf * (kf + ab) * (c - 2.0));
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let c = 2.0 * nf + ab;
    let dp = if n == 1 {
        (ab + 2.0) / 2.0
    } else {
        (nf * ((a - b) - c * x) * p1 + 2.0 * (nf + a) * (nf + b) * p0) / (c * (1.0 - x * x))
    };
    (p1, dp)
}

/// n-point Gauss–Jacobi rule, exact for polynomials of degree ≤ 2n−1.
///
/// Nodes come from Newton's method with deflation, seeded by the
/// Chebyshev-type asymptotic guesses; weights from the derivative formula.
///
/// ```
/// use sharpsphere::orthopoly::gauss_jacobi;
/// let rule = gauss_jacobi(2, 0.0, 0.0).unwrap();
/// assert!((rule.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
/// assert!((rule.weights[0] - 1.0).abs() < 1e-14);
/// ```
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<JacobiRule> {
    if n == 0 {
        return domain("Gauss–Jacobi rule needs n ≥ 1");
    }
    if !(a > -1.0 && b > -1.0) {
        return domain(format!("Gauss–Jacobi exponents must exceed -1, got ({a}, {b})"));
    }
    let nf = n as f64;
    let mut roots: Vec<f64> = Vec::with_capacity(n);
    for i in 1..=n {
        let theta =
            (i as f64 - 0.25 + 0.5 * a) * std::f64::consts::PI / (nf + 0.5 * (a + b + 1.0));
        let mut x = theta.cos().clamp(-1.0 + 1e-15, 1.0 - 1e-15);
        if let Some(&last) = roots.last() {
            // guesses can drift past the previous root for large exponents
            if x >= last {
                x = last - 1e-3 * (1.0 + last);
            }
        }
        let mut converged = false;
        let mut last_dx = f64::NAN;
        for _ in 0..200 {
            let (p, dp) = jacobi_with_derivative(n, a, b, x);
            let defl: f64 = roots.iter().map(|r| 1.0 / (x - r)).sum();
            let dx = p / (dp - p * defl);
            let mut next = x - dx;
            if !(next > -1.0 && next < 1.0) {
                next = 0.5 * (x + if next >= 1.0 { 1.0 } else { -1.0 });
            }
            last_dx = dx;
            x = next;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!(
                "Gauss–Jacobi node {i} of n={n}, a={a}, b={b}: last step {last_dx:e} at x={x}"
            )));
        }
        roots.push(x);
    }
    roots.sort_by(|p, q| p.partial_cmp(q).expect("finite nodes"));
    for w in roots.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Convergence(format!(
                "Gauss–Jacobi n={n}, a={a}, b={b}: duplicate node {}",
                w[0]
            )));
        }
    }
    let log_c = ln_gamma(nf + a + 1.0)? + ln_gamma(nf + b + 1.0)?
        - ln_gamma(nf + a + b + 1.0)?
        - ln_gamma(nf + 1.0)?
        + (a + b + 1.0) * std::f64::consts::LN_2;
    let cst = log_c.exp();
    let weights = roots
        .iter()
        .map(|&x| {
            let (_, dp) = jacobi_with_derivative(n, a, b, x);
            cst / ((1.0 - x * x) * dp * dp)
        })
        .collect();
    Ok(JacobiRule {
        nodes: roots,
        weights,
        a,
        b,
    })
}

/// n-point Gauss–Legendre rule.
pub fn gauss_legendre(n: usize) -> Result<JacobiRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Normalised zonal harmonics Z_n(u) on S^{d−1}: C^α_n(u)/C^α_n(1) with
/// α = (d−2)/2, and Chebyshev T_n(u) for d = 2. Z_n(1) = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonalBasis {
    pub d: u32,
}

impl ZonalBasis {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return domain(format!("zonal harmonics need d ≥ 2, got {d}"));
        }
        Ok(Self { d })
    }

    pub fn alpha(&self) -> f64 {
        (self.d as f64 - 2.0) / 2.0
    }

    /// Z_0(u), …, Z_nmax(u).
    pub fn eval_all(&self, nmax: usize, u: f64) -> Vec<f64> {
        let alpha = self.alpha();
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(1.0);
        if nmax == 0 {
            return out;
        }
        out.push(u);
        if alpha == 0.0 {
            for n in 1..nmax {
                out.push(2.0 * u * out[n] - out[n - 1]);
            }
            return out;
        }
        // recurrence for the normalised polynomials:
        // (n+2α) Z_{n+1} = (2n+2α) u Z_n − n Z_{n−1}
        for n in 1..nmax {
            let nf = n as f64;
            let next = ((2.0 * nf + 2.0 * alpha) * u * out[n] - nf * out[n - 1]) / (nf + 2.0 * alpha);
            out.push(next);
        }
        out
    }

    /// Exponent (d−3)/2 of the zonal weight (1−u²)^{(d−3)/2}.
    pub fn weight_exponent(&self) -> f64 {
        (self.d as f64 - 3.0) / 2.0
    }

    /// ω_{d−2} ∫ Z_n(u)² (1−u²)^{(d−3)/2} du, the squared L²(S^{d−1}) norm.
    pub fn norm_sq(&self, n: usize) -> Result<f64> {
        let e = self.weight_exponent();
        let rule = gauss_jacobi(n + 2, e, e)?;
        let area = sphere_area(self.d as i64 - 2)?;
        Ok(area * rule.integrate(|u| {
            let z = self.eval_all(n, u)[n];
            z * z
        }))
    }
}

/// Convert an exact rational to f64.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::{beta_fn, binomial, harmonic_dim};
    use num_traits::FromPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gegenbauer_examples() {
        let leg = GegenbauerParam::half(1).unwrap();
        for k in 0..30 {
            let want = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((gegenbauer_eval(&leg, k, -1.0) - want).abs() < 1e-12);
        }
        let cheb2 = GegenbauerParam::half(2).unwrap();
        for k in 0..30 {
            assert!((gegenbauer_eval(&cheb2, k, 1.0) - (k as f64 + 1.0)).abs() < 1e-10);
        }
        assert!((gegenbauer_eval(&leg, 2, 0.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn endpoint_values() {
        let a32 = GegenbauerParam::half(3).unwrap();
        let a2 = GegenbauerParam::half(4).unwrap();
        let a12 = GegenbauerParam::half(1).unwrap();
        for k in 0..60usize {
            let c2 = binomial(k as u64 + 2, 2);
            let c3 = binomial(k as u64 + 3, 3);
            assert_eq!(gegenbauer_one(&a32, k), BigRational::from_integer(c2.into()));
            assert_eq!(gegenbauer_one(&a2, k), BigRational::from_integer(c3.into()));
            assert_eq!(gegenbauer_one(&a12, k), BigRational::one());
        }
    }

    #[test]
    fn exact_recurrence_matches_endpoint() {
        for twice in 1..=5 {
            let p = GegenbauerParam::half(twice).unwrap();
            for k in (0..=200).step_by(7) {
                assert_eq!(
                    gegenbauer_eval_exact(&p, k, &BigRational::one()),
                    gegenbauer_one(&p, k)
                );
            }
        }
    }

    #[test]
    fn legendre_derivative_examples() {
        assert_eq!(legendre_derivative_endpoint(0), BigInt::from(0));
        assert_eq!(legendre_derivative_endpoint(1), BigInt::from(1));
        assert_eq!(legendre_derivative_endpoint(3), BigInt::from(6));
        assert_eq!(legendre_derivative_endpoint(2), BigInt::from(-3));
    }

    #[test]
    fn gauss_jacobi_examples() {
        let r = gauss_jacobi(1, 0.0, 0.0).unwrap();
        assert!(r.nodes[0].abs() < 1e-16);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
        let r = gauss_jacobi(2, 0.0, 0.0).unwrap();
        assert!((r.nodes[0] + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((r.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-14 && (r.weights[1] - 1.0).abs() < 1e-14);
        let r = gauss_jacobi(5, 0.5, 0.0).unwrap();
        let total: f64 = r.weights.iter().sum();
        let want = 2.0 / 3.0 * 2f64.powf(1.5);
        assert!((total - want).abs() < 1e-14 * want);
    }

    #[test]
    fn gauss_jacobi_weight_sums_and_order() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (0.5, 1.0), (2.5, 5.0), (3.0, 9.0), (9.0, 4.5), (-0.5, 0.3)] {
            for &n in &[1usize, 3, 10, 40, 120, 300] {
                let r = gauss_jacobi(n, a, b).unwrap();
                let total: f64 = r.weights.iter().sum();
                // ∫(1−t)^a(1+t)^b dt = 2^{a+b+1} B(a+1, b+1)
                let want = 2f64.powf(a + b + 1.0) * beta_fn(a + 1.0, b + 1.0).unwrap();
                assert!(((total - want) / want).abs() < 1e-12, "n={n} a={a} b={b} {}", (total - want) / want);
                assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
                assert!(r.weights.iter().all(|&w| w > 0.0));
            }
        }
    }

    #[test]
    fn gegenbauer_orthogonality() {
        for twice in 1..=5 {
            let alpha = twice as f64 / 2.0;
            let e = alpha - 0.5;
            let r = gauss_jacobi(24, e, e).unwrap();
            for j in 0..=20 {
                for k in 0..j {
                    let v = r.integrate(|t| gegenbauer_f64(alpha, j, t) * gegenbauer_f64(alpha, k, t));
                    assert!(v.abs() < 1e-10, "alpha={alpha} j={j} k={k} v={v}");
                }
            }
        }
    }

    #[test]
    fn zonal_norm_matches_addition_theorem() {
        // ‖Z_n‖² = ω_{d−1}/D(d, n)
        for d in 2..=9u32 {
            let zb = ZonalBasis::new(d).unwrap();
            for n in 0..12usize {
                let dim = harmonic_dim(d as u64, n as u64);
                let dimf = f64::from_u64(dim.try_into().unwrap()).unwrap();
                let want = sphere_area(d as i64 - 1).unwrap() / dimf;
                let got = zb.norm_sq(n).unwrap();
                assert!(((got - want) / want).abs() < 1e-12, "d={d} n={n}");
            }
        }
    }

    #[test]
    fn zonal_basis_is_normalised_gegenbauer() {
        for d in 3..=8u32 {
            let zb = ZonalBasis::new(d).unwrap();
            let alpha = zb.alpha();
            for &u in &[-0.9, -0.3, 0.2, 0.77] {
                let z = zb.eval_all(15, u);
                for (n, zn) in z.iter().enumerate() {
                    let want = gegenbauer_f64(alpha, n, u) / gegenbauer_f64(alpha, n, 1.0);
                    assert!((zn - want).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn exact_path_rational_argument() {
        // P_2(1/2) = (3/4 − 1)/2 = −1/8
        let leg = GegenbauerParam::half(1).unwrap();
        assert_eq!(gegenbauer_eval_exact(&leg, 2, &q(1, 2)), q(-1, 8));
        assert!(GegenbauerParam::new(q(0, 1)).is_err());
    }
}
