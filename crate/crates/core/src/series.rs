//! Betti sequences as series data: rational-form fitting, ratio limits,
//! alternating tail sums and partial Euler characteristics.
//!
//! Every comparison here is exact: ratios are big rationals and tolerances
//! are rationals, converted to decimals only for display.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::ARing;
use crate::error::{Error, Result};
use crate::modules::{resolve, ModulePresentation, ResolveOptions};

/// Nonnegative Betti values beta_0..beta_N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiSequence(pub Vec<u64>);

impl BettiSequence {
    pub fn values(&self) -> &[u64] {
        &self.0
    }
}

/// Betti numbers of the residue field k, presented as the cokernel of the
/// row of variable generators.
pub fn poincare_of_k(algebra: &ARing, stages: usize) -> Result<BettiSequence> {
    poincare_of_k_capped(algebra, stages, ResolveOptions::default().matrix_cap)
}

/// Same with an explicit matrix-size cap.
pub fn poincare_of_k_capped(
    algebra: &ARing,
    stages: usize,
    matrix_cap: usize,
) -> Result<BettiSequence> {
    let k = ModulePresentation::residue_field(algebra.clone());
    let opts = ResolveOptions {
        stages,
        matrix_cap,
        ..Default::default()
    };
    let res = resolve(&k, &opts);
    if res.truncated {
        return Err(Error::StageBudgetExceeded {
            stage: res.betti.len(),
            rows: *res.betti.last().unwrap_or(&0) as usize * algebra.dim(),
            cap: matrix_cap,
        });
    }
    Ok(BettiSequence(res.betti))
}

/// True iff the sequence matches the expansion of 1/(1 - d z + a z^2) on
/// every available term: beta_0 = 1, beta_1 = d, beta_n = d b_{n-1} - a b_{n-2}.
pub fn fit_rational(seq: &BettiSequence, d: u64, a: u64) -> bool {
    let v = seq.values();
    if v.is_empty() {
        return false;
    }
    if v[0] != 1 {
        return false;
    }
    if v.len() >= 2 && v[1] != d {
        return false;
    }
    for n in 2..v.len() {
        let expect = (d as i128) * v[n - 1] as i128 - (a as i128) * v[n - 2] as i128;
        if expect < 0 || v[n] as i128 != expect {
            return false;
        }
    }
    true
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(big(n), big(d))
}

/// Exact consecutive ratios beta_{n+1}/beta_n plus a trailing-window
/// comparison against the expected limit, with the alternating tail sums
/// r_n of the same sequence reported next to their own limit 1/(h+1).
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    /// Ratios as decimal strings (exact values are compared internally).
    pub ratios: Vec<String>,
    pub expected: u64,
    pub window: usize,
    pub pass: bool,
    /// Largest |ratio - expected| over the window, as a decimal string.
    pub tail_estimate: String,
    /// (d, a) when the sequence matches 1/(1 - d z + a z^2) on all terms.
    pub fitted: Option<(u64, u64)>,
    /// Alternating tail sums r_n over the trailing window.
    pub alternating: Vec<String>,
    /// 1/(expected + 1), the limit the alternating tails approach.
    pub alternating_limit: String,
}

fn decimal(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * BigRational::from_integer(scale.clone())).round();
    let int = scaled.to_integer();
    let neg = int.is_negative();
    let mag = int.magnitude().to_string();
    let mag = if mag.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (whole, frac) = mag.split_at(mag.len() - digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, whole, frac)
}

/// Checks |beta_{n+1}/beta_n - h| < tol on the trailing window, exactly.
/// `tol` is given as a rational pair (num, den).
pub fn ratio_limit_check(
    seq: &BettiSequence,
    expected: u64,
    tol: (u64, u64),
    window: usize,
) -> RatioReport {
    let v = seq.values();
    let mut ratios = Vec::new();
    for w in v.windows(2) {
        assert!(w[0] > 0, "ratio check needs strictly positive values");
        ratios.push(ratio(w[1], w[0]));
    }
    let tol = ratio(tol.0, tol.1);
    let h = BigRational::from_integer(big(expected));
    let take = window.min(ratios.len());
    let tail = &ratios[ratios.len() - take..];
    let mut worst = BigRational::zero();
    let mut pass = !tail.is_empty();
    for r in tail {
        let err = (r - &h).abs();
        if err >= tol {
            pass = false;
        }
        if err > worst {
            worst = err;
        }
    }
    // recognize the rational form from the leading terms, exactly
    let fitted = (v.len() >= 3 && v[0] == 1).then(|| v[1]).and_then(|d| {
        let a = (d as i128 * v[1] as i128 - v[2] as i128).try_into().ok()?;
        fit_rational(seq, d, a).then_some((d, a))
    });
    let theta: Vec<BigInt> = v.iter().map(|&x| big(x)).collect();
    let alternating = (v.len().saturating_sub(take)..v.len())
        .map(|n| decimal(&alternating_tail(&theta, n), 9))
        .collect();
    RatioReport {
        ratios: ratios.iter().map(|r| decimal(r, 6)).collect(),
        expected,
        window: take,
        pass,
        tail_estimate: decimal(&worst, 9),
        fitted,
        alternating,
        alternating_limit: decimal(
            &BigRational::new(BigInt::one(), big(expected + 1)),
            9,
        ),
    }
}

/// The alternating tail r_n = sum_{j>=0} (-1)^j theta_{n-1-j}/theta_n,
/// computed exactly. `theta` lists theta values from the sequence start;
/// values before the start are zero. `n` indexes into the slice.
pub fn alternating_tail(theta: &[BigInt], n: usize) -> BigRational {
    assert!(n < theta.len(), "index beyond the provided sequence");
    assert!(theta[n].is_positive(), "theta must be positive");
    let mut sum = BigInt::zero();
    let mut sign = BigInt::one();
    let mut idx = n as i64 - 1;
    while idx >= 0 {
        sum += &sign * &theta[idx as usize];
        sign = -sign;
        idx -= 1;
    }
    BigRational::new(sum, theta[n].clone())
}

/// Partial Euler characteristic of a homology length list:
/// chi_m = sum_{j>=0} (-1)^j H[m+j].
pub fn partial_euler(homology_lengths: &[u64], m: usize) -> i64 {
    let mut acc: i64 = 0;
    let mut sign = 1i64;
    for &h in homology_lengths.iter().skip(m) {
        acc += sign * h as i64;
        sign = -sign;
    }
    acc
}
