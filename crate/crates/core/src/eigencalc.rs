//! Funk–Hecke eigenvalues Λ_k(φ_d) of the kernel
//! φ_d(t) = 2^{(d−2)/2} (1−t)^{1/2} (1+t)^{(d−3)/2}.
//!
//! Exact values come from base moment sequences lifted by the Gegenbauer
//! three-term recurrence; closed forms and Gauss–Jacobi quadrature serve as
//! independent routes.

use crate::error::{domain, unsupported, Error, Result};
use crate::orthopoly::{gauss_jacobi, rational_to_f64, ZonalBasis};
use crate::specialfn::{binomial, sphere_area};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn binom_q(n: u64, r: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n, r)))
}

/// An exact value `coeff · ω_{omega_index}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactScaled {
    pub coeff: BigRational,
    pub omega_index: u32,
}

impl ExactScaled {
    pub fn new(coeff: BigRational, omega_index: u32) -> Self {
        Self { coeff, omega_index }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * sphere_area(self.omega_index as i64).expect("n ≥ 0")
    }

    pub fn sign(&self) -> Sign {
        if self.coeff.is_positive() {
            Sign::Positive
        } else if self.coeff.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Zero => "0",
        }
    }
}

/// γ_k = 2(−1)^{k+1} + 2/(2k+1), the moments ∫(2−2t)^{1/2} P_k′(t) dt.
pub fn gamma_seq(kmax: usize) -> Vec<BigRational> {
    (0..=kmax)
        .map(|k| {
            let s = if k % 2 == 0 { -2 } else { 2 };
            int(s) + rat(2, 2 * k as i64 + 1)
        })
        .collect()
}

/// δ_k = 8(−1)^k C(k+1, 2) + 3γ_k, the moments ∫(2−2t)^{3/2} P_k″(t) dt.
pub fn delta_seq(kmax: usize) -> Vec<BigRational> {
    gamma_seq(kmax)
        .into_iter()
        .enumerate()
        .map(|(k, g)| {
            let c = binom_q(k as u64 + 1, 2) * int(8);
            let c = if k % 2 == 0 { c } else { -c };
            c + int(3) * g
        })
        .collect()
}

/// τ_{2j} = 2/(2j+1), τ_{2j+1} = 0.
pub fn tau_seq(kmax: usize) -> Vec<BigRational> {
    (0..=kmax)
        .map(|k| if k % 2 == 0 { rat(2, k as i64 + 1) } else { BigRational::zero() })
        .collect()
}

/// ε_{2l} = 2(l+1), ε_{2l+1} = 0: the moments ∫ C²_k(t) dt.
pub fn epsilon_seq(kmax: usize) -> Vec<BigRational> {
    (0..=kmax)
        .map(|k| if k % 2 == 0 { int(k as i64 / 2 + 1) * int(2) } else { BigRational::zero() })
        .collect()
}

/// Moments lifted by multiplication with t.
///
/// Row 0 is the base; entry i of every row belongs to Gegenbauer degree
/// n = i − offset, and row j+1 follows from row j by
/// `m[i] = ((n+1) m[i+1] + (n+2α−1) m[i−1]) / (2n+2α)`, with degrees below
/// zero vanishing. Each lift drops one entry from the top.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub alpha: BigRational,
    pub offset: usize,
    pub values: Vec<Vec<BigRational>>,
}

impl MomentTable {
    pub fn get(&self, j: usize, i: usize) -> &BigRational {
        &self.values[j][i]
    }
}

pub fn moment_lift(
    base: &[BigRational],
    alpha: &BigRational,
    offset: usize,
    jmax: usize,
) -> Result<MomentTable> {
    if base.len() < jmax + 1 {
        return Err(Error::Range(format!(
            "moment_lift with jmax={jmax} needs a base of length ≥ {}, got {}",
            jmax + 1,
            base.len()
        )));
    }
    let two_a = alpha * int(2);
    let mut values = vec![base.to_vec()];
    for j in 0..jmax {
        let prev = &values[j];
        let len = prev.len() - 1;
        let mut row = Vec::with_capacity(len);
        for i in 0..len {
            if i < offset {
                row.push(BigRational::zero());
                continue;
            }
            let n = int((i - offset) as i64);
            let mut num = (&n + BigRational::one()) * &prev[i + 1];
            if i > offset {
                num += (&n + &two_a - BigRational::one()) * &prev[i - 1];
            }
            row.push(num / (int(2) * &n + &two_a));
        }
        values.push(row);
    }
    Ok(MomentTable {
        alpha: alpha.clone(),
        offset,
        values,
    })
}

fn combine(table: &MomentTable, coeffs: &[i64], i: usize) -> BigRational {
    coeffs
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (j, &c)| acc + int(c) * table.get(j, i))
}

/// Exact Λ_0..Λ_kmax for d ∈ {3, …, 7}, as multiples of ω_{d−2}.
pub fn lambda_exact(d: u32, kmax: usize) -> Result<Vec<ExactScaled>> {
    let om = d.saturating_sub(2);
    let coeffs: Vec<BigRational> = match d {
        3 => {
            // (2k+1) P_k = P′_{k+1} − P′_{k−1}
            let g = gamma_seq(kmax + 1);
            (0..=kmax)
                .map(|k| {
                    let lower = if k >= 1 { g[k - 1].clone() } else { BigRational::zero() };
                    (&g[k + 1] - lower) / int(2 * k as i64 + 1)
                })
                .collect()
        }
        4 => {
            let t = tau_seq(kmax + 2);
            (0..=kmax)
                .map(|k| match k {
                    // 2τ_k − τ_{k−2} − τ_{k+2} only holds for k ≥ 2
                    0 => rat(8, 3),
                    1 => BigRational::zero(),
                    _ => (int(2) * &t[k] - &t[k - 2] - &t[k + 2]) / int(2 * (k as i64 + 1)),
                })
                .collect()
        }
        5 => {
            let table = moment_lift(&gamma_seq(kmax + 4), &rat(3, 2), 1, 3)?;
            (0..=kmax)
                .map(|k| {
                    int(2) * combine(&table, &[1, 1, -1, -1], k + 1)
                        / binom_q(k as u64 + 2, 2)
                })
                .collect()
        }
        6 => {
            let table = moment_lift(&epsilon_seq(kmax + 5), &int(2), 0, 5)?;
            (0..=kmax)
                .map(|k| {
                    int(4) * combine(&table, &[1, 1, -2, -2, 1, 1], k) / binom_q(k as u64 + 3, 3)
                })
                .collect()
        }
        7 => {
            let table = moment_lift(&delta_seq(kmax + 7), &rat(5, 2), 2, 5)?;
            (0..=kmax)
                .map(|k| {
                    int(2) * combine(&table, &[1, 3, 2, -2, -3, -1], k + 2)
                        / (int(3) * binom_q(k as u64 + 4, 4))
                })
                .collect()
        }
        _ => {
            return domain(format!(
                "exact eigenvalues exist for 3 ≤ d ≤ 7 only, got d={d}; use lambda_numeric"
            ))
        }
    };
    Ok(coeffs.into_iter().map(|c| ExactScaled::new(c, om)).collect())
}

fn odd_product(k: i64, ms: impl Iterator<Item = i64>) -> BigRational {
    ms.fold(BigRational::one(), |acc, m| acc * int(2 * k + m))
}

/// Rational closed forms of Λ_k(φ_d) for d ∈ {4, 5, 6, 7}.
pub fn lambda_closed(d: u32, k: usize) -> Result<ExactScaled> {
    let kk = k as i64;
    let kq = int(kk);
    let coeff = match d {
        3 => return unsupported("no closed form for d = 3; use lambda_exact"),
        4 => {
            if k % 2 == 1 {
                BigRational::zero()
            } else if k == 0 {
                rat(8, 3)
            } else {
                let j = kk / 2;
                rat(1, 2 * (2 * j + 1))
                    * (rat(4, 2 * j + 1) - rat(2, 2 * j - 1) - rat(2, 2 * j + 3))
            }
        }
        5 => {
            let num = int(768) * int(kk + 1) * int(kk + 2) * int(3 - 3 * kk - kk * kk);
            let den = odd_product(kk, (-3..=9).step_by(2));
            int(2) * num / den / binom_q(k as u64 + 2, 2)
        }
        6 => {
            let inner = if k % 2 == 0 {
                int(-8) * (&kq + int(2))
                    / (int(kk - 1) * int(kk + 1) * int(kk + 3) * int(kk + 5))
            } else {
                int(-8) * int(kk + 1) * int(kk + 3)
                    / (int(kk) * int(kk - 2) * int(kk + 2) * int(kk + 4) * int(kk + 6))
            };
            int(4) * inner / binom_q(k as u64 + 3, 3)
        }
        7 => {
            let num = int(245_760)
                * int(kk + 1)
                * int(kk + 2)
                * int(kk + 3)
                * int(kk + 4)
                * int(15 - 5 * kk - kk * kk)
                * int(-3 + 5 * kk + kk * kk);
            let den = odd_product(kk, (-5..=15).step_by(2));
            int(2) * num / den / (int(3) * binom_q(k as u64 + 4, 4))
        }
        _ => return domain(format!("closed forms exist for 4 ≤ d ≤ 7, got d={d}")),
    };
    Ok(ExactScaled::new(coeff, d - 2))
}

/// Λ_k(φ_d) by Gauss–Jacobi quadrature with ⌈k/2⌉ + 2 nodes.
pub fn lambda_numeric(d: u32, k: usize) -> Result<f64> {
    lambda_numeric_with_nodes(d, k, k.div_ceil(2) + 2)
}

/// Λ_k(φ_d) by an n-node Gauss–Jacobi rule for the weight
/// (1−t)^{(d−2)/2} (1+t)^{d−3}.
pub fn lambda_numeric_with_nodes(d: u32, k: usize, nodes: usize) -> Result<f64> {
    if d < 3 {
        return domain(format!("Λ_k(φ_d) needs d ≥ 3, got d={d}"));
    }
    let a = (d as f64 - 2.0) / 2.0;
    let b = d as f64 - 3.0;
    let rule = gauss_jacobi(nodes, a, b)?;
    let basis = ZonalBasis::new(d)?;
    let s = rule.integrate(|t| basis.eval_all(k, t)[k]);
    Ok(sphere_area(d as i64 - 2)? * 2f64.powf(a) * s)
}

/// One row of the eigenvalue table.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaRow {
    pub d: u32,
    pub k: usize,
    pub exact: Option<ExactScaled>,
    pub closed_form: Option<ExactScaled>,
    pub numeric: f64,
    pub sign: Sign,
}

impl LambdaRow {
    /// Some(true/false) when both exact and closed-form values exist.
    pub fn closed_form_match(&self) -> Option<bool> {
        match (&self.exact, &self.closed_form) {
            (Some(e), Some(c)) => Some(e == c),
            _ => None,
        }
    }
}

/// Eigenvalue rows for k = 0..=kmax: exact and closed form where available,
/// quadrature always. Signs come from the exact value when there is one,
/// otherwise from the quadrature value with a zero band of 1e−12·ω_{d−2}.
pub fn sign_report(d: u32, kmax: usize) -> Result<Vec<LambdaRow>> {
    if d < 3 {
        return domain(format!("eigenvalue table needs d ≥ 3, got d={d}"));
    }
    let exact = if d <= 7 { Some(lambda_exact(d, kmax)?) } else { None };
    let band = 1e-12 * sphere_area(d as i64 - 2)?;
    let mut rows = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let numeric = lambda_numeric(d, k)?;
        let ex = exact.as_ref().map(|e| e[k].clone());
        let closed = if (4..=7).contains(&d) { Some(lambda_closed(d, k)?) } else { None };
        let sign = match &ex {
            Some(e) => e.sign(),
            None if numeric > band => Sign::Positive,
            None if numeric < -band => Sign::Negative,
            None => Sign::Zero,
        };
        rows.push(LambdaRow {
            d,
            k,
            exact: ex,
            closed_form: closed,
            numeric,
            sign,
        });
    }
    Ok(rows)
}
