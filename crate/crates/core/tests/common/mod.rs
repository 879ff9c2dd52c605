//! Independent reference implementations used by the test suites.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Exact value of `x` as `m * 2^SCALE_EXP` with integer `m`.
const SCALE_EXP: i32 = -1100;

fn exact(x: f64) -> BigInt {
    assert!(x.is_finite());
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let shift = e - SCALE_EXP;
    assert!(shift >= 0, "value too small for fixed scale");
    BigInt::from(sign) * (BigInt::from(mant) << shift as usize)
}

/// Splits a big integer into an `f64` mantissa and a power-of-two exponent.
fn split(x: &BigInt) -> (f64, i64) {
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0);
    let m = (x >> shift as usize).to_f64().unwrap();
    (m, shift)
}

/// Exact sums of products; both factors carry the fixed scale, so the
/// result is scaled by `2^(2*SCALE_EXP)`.
fn exact_dot(u: &[f64], v: &[f64]) -> BigInt {
    u.iter().zip(v).map(|(&a, &b)| exact(a) * exact(b)).sum()
}

/// Ratio `num / sqrt(a * b)` of big integers, rounded once at the end.
fn ratio_sqrt(num: &BigInt, a: &BigInt, b: &BigInt) -> f64 {
    let (mn, en) = split(num);
    let (ma, ea) = split(a);
    let (mb, eb) = split(b);
    let (mut ma, mut ea) = (ma, ea);
    if (ea + eb) % 2 != 0 {
        ma *= 2.0;
        ea -= 1;
    }
    let exp = en - (ea + eb) / 2;
    mn / (ma * mb).sqrt() * 2f64.powi(exp as i32)
}

/// Cosine similarity with exactly accumulated sums.
pub fn cosine_ref(u: &[f64], v: &[f64]) -> f64 {
    ratio_sqrt(&exact_dot(u, v), &exact_dot(u, u), &exact_dot(v, v))
}

/// Pearson correlation via `n Σuv − Σu Σv` over exact integers; `None` when
/// a variance term is exactly zero.
pub fn pearson_ref(u: &[f64], v: &[f64]) -> Option<f64> {
    let n = BigInt::from(u.len());
    // Scale single sums up to the product scale so all terms align.
    let su: BigInt = u.iter().map(|&a| exact(a)).sum();
    let sv: BigInt = v.iter().map(|&b| exact(b)).sum();
    let cov = &n * exact_dot(u, v) - &su * &sv;
    let vu = &n * exact_dot(u, u) - &su * &su;
    let vv = &n * exact_dot(v, v) - &sv * &sv;
    if vu.is_zero() || vv.is_zero() {
        return None;
    }
    Some(ratio_sqrt(&cov, &vu, &vv))
}

/// Solves the weighted PageRank equations directly:
/// `(I - d (W S^-1 + u δ^T)) x = (1-d)/K 1`, with `δ` marking dangling nodes.
pub fn pagerank_dense(k: usize, edges: &[(usize, usize, f64)], damping: f64) -> Vec<f64> {
    let mut w = DMatrix::<f64>::zeros(k, k);
    for &(i, j, x) in edges {
        w[(i, j)] += x;
        w[(j, i)] += x;
    }
    let strength: Vec<f64> = (0..k).map(|j| w.column(j).sum()).collect();
    let mut g = DMatrix::<f64>::zeros(k, k);
    for j in 0..k {
        for i in 0..k {
            g[(i, j)] = if strength[j] > 0.0 { w[(i, j)] / strength[j] } else { 1.0 / k as f64 };
        }
    }
    let a = DMatrix::<f64>::identity(k, k) - g * damping;
    let b = DVector::<f64>::from_element(k, (1.0 - damping) / k as f64);
    let x = a.lu().solve(&b).expect("nonsingular");
    x.iter().copied().collect()
}
