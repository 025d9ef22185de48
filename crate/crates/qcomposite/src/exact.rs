//! Lossless finite-parameter probabilities for the q-composite scheme:
//! key-ring overlap, link setup, captured-key coverage, and the correct
//! and historical (incorrect) link-compromise formulas.
//!
//! Everything in this module is computed with arbitrary-precision
//! integers and rationals. The alternating sum inside the coverage
//! distribution cancels catastrophically in floating point, so there is
//! deliberately no float fast path here; floats appear only when callers
//! convert results at the output boundary.

use num_bigint::{BigInt, BigUint};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::runner;
use crate::types::{f64_to_big_ratio, ExactProbability, SchemeParams};

/// Largest key pool the exact path accepts.
pub const MAX_POOL_SIZE: u64 = 40_000;
/// Largest key ring the exact path accepts.
pub const MAX_RING_SIZE: u64 = 4_096;
/// Largest capture count the exact path accepts (it is the big-integer
/// power in the coverage terms).
pub const MAX_CAPTURES: u64 = 256;
/// Largest captured-key union `min(mK, P)` the coverage distribution
/// accepts; the inclusion-exclusion costs O(min(mK, P)^2) big products.
pub const MAX_COVERAGE_KEYS: u64 = 4_096;

/// Binomial coefficient `C(a, b)`, zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut result = BigUint::one();
    for i in 0..b {
        result = result * (a - i) / (i + 1);
    }
    result
}

/// Falling factorial `a (a-1) ... (a-k+1)`; one when `k = 0`.
fn falling_factorial(a: u64, k: u64) -> BigUint {
    let mut result = BigUint::one();
    for i in 0..k {
        result *= a - i;
    }
    result
}

fn factorial(n: u64) -> BigUint {
    falling_factorial(n, n)
}

fn check_scheme_capacity(params: &SchemeParams) -> Result<()> {
    if params.key_pool_size() > MAX_POOL_SIZE {
        return Err(Error::capacity(format!(
            "key pool size {} exceeds exact-path limit {MAX_POOL_SIZE}",
            params.key_pool_size()
        )));
    }
    if params.key_ring_size() > MAX_RING_SIZE {
        return Err(Error::capacity(format!(
            "key ring size {} exceeds exact-path limit {MAX_RING_SIZE}",
            params.key_ring_size()
        )));
    }
    Ok(())
}

fn check_coverage_capacity(params: &SchemeParams, attack_size: u64) -> Result<u64> {
    check_scheme_capacity(params)?;
    if attack_size < 1 {
        return Err(Error::invalid("attack size m must be at least 1"));
    }
    if attack_size > MAX_CAPTURES {
        return Err(Error::capacity(format!(
            "attack size {attack_size} exceeds exact-path limit {MAX_CAPTURES}"
        )));
    }
    let tau_max = (attack_size * params.key_ring_size()).min(params.key_pool_size());
    if tau_max > MAX_COVERAGE_KEYS {
        return Err(Error::capacity(format!(
            "captured-key union bound {tau_max} exceeds exact-path limit {MAX_COVERAGE_KEYS}"
        )));
    }
    Ok(tau_max)
}

/// Distribution of the shared-key count between two independent uniform
/// K-subsets of a P-key pool; probabilities indexed by `u` in `0..=K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapDistribution {
    probabilities: Vec<ExactProbability>,
}

impl OverlapDistribution {
    pub fn ring_size(&self) -> u64 {
        (self.probabilities.len() - 1) as u64
    }

    /// Probability that the two rings share exactly `shared` keys.
    pub fn probability(&self, shared: u64) -> &ExactProbability {
        &self.probabilities[shared as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ExactProbability)> {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(u, p)| (u as u64, p))
    }
}

/// Distribution of the number of distinct keys held by `attack_size`
/// captured nodes together, supported on `K..=min(mK, P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageDistribution {
    attack_size: u64,
    tau_min: u64,
    probabilities: Vec<ExactProbability>,
}

impl CoverageDistribution {
    pub fn attack_size(&self) -> u64 {
        self.attack_size
    }

    pub fn tau_min(&self) -> u64 {
        self.tau_min
    }

    pub fn tau_max(&self) -> u64 {
        self.tau_min + self.probabilities.len() as u64 - 1
    }

    /// Probability that the captured nodes hold exactly `tau` distinct
    /// keys; `None` outside the support.
    pub fn probability(&self, tau: u64) -> Option<&ExactProbability> {
        if tau < self.tau_min || tau > self.tau_max() {
            return None;
        }
        Some(&self.probabilities[(tau - self.tau_min) as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ExactProbability)> {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| (self.tau_min + i as u64, p))
    }
}

/// Unnormalized overlap weights `N_u = C(K,u) C(P-K, K-u)`; the overlap
/// distribution is `N_u / C(P,K)` and every `rho_u / p_s` ratio reduces
/// to `N_u / sum_{v>=q} N_v`, with `C(P,K)` cancelling.
fn overlap_weights(params: &SchemeParams) -> Vec<BigUint> {
    let k = params.key_ring_size();
    let p = params.key_pool_size();
    let mut weights = Vec::with_capacity(k as usize + 1);
    // C(K,u) stepping up, C(P-K, K-u) stepping down, both exact
    let mut choose_k = BigUint::one();
    let mut choose_rest = binomial(p - k, k);
    for u in 0..=k {
        weights.push(&choose_k * &choose_rest);
        if u < k {
            choose_k = choose_k * (k - u) / (u + 1);
            // step C(P-K, j) to C(P-K, j-1) with j = K-u
            let j = k - u;
            if p - k >= j {
                choose_rest = choose_rest * j / (p - k - j + 1);
            } else {
                // C(P-K, j) was zero; recompute at the next index
                choose_rest = binomial(p - k, j - 1);
            }
        }
    }
    weights
}

/// Exact distribution of the shared-key count between two rings.
pub fn overlap_distribution(params: &SchemeParams) -> Result<OverlapDistribution> {
    check_scheme_capacity(params)?;
    let denom = binomial(params.key_pool_size(), params.key_ring_size());
    let probabilities = overlap_weights(params)
        .into_iter()
        .map(|n| ExactProbability::from_integers(n, denom.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(OverlapDistribution { probabilities })
}

/// Exact link-setup probability `p_s`: two rings share at least `q` keys.
pub fn link_probability(params: &SchemeParams) -> Result<ExactProbability> {
    check_scheme_capacity(params)?;
    let weights = overlap_weights(params);
    let numer: BigUint = weights[params.overlap_threshold() as usize..]
        .iter()
        .sum();
    let denom = binomial(params.key_pool_size(), params.key_ring_size());
    ExactProbability::from_integers(numer, denom)
}

/// Pool size `P >= K` whose exact `p_s(K, P, q)` is closest to
/// `target_ps`, ties broken toward smaller `P`. Uses a doubling bracket
/// plus bisection on the monotone `p_s(P)`.
pub fn find_pool_size(key_ring_size: u64, overlap_threshold: u64, target_ps: f64) -> Result<u64> {
    if key_ring_size < 1 || overlap_threshold < 1 || overlap_threshold > key_ring_size {
        return Err(Error::invalid("need 1 <= q <= K"));
    }
    if key_ring_size > MAX_RING_SIZE {
        return Err(Error::capacity(format!(
            "key ring size {key_ring_size} exceeds exact-path limit {MAX_RING_SIZE}"
        )));
    }
    if !(target_ps > 0.0 && target_ps <= 1.0) {
        return Err(Error::invalid(format!(
            "target link probability {target_ps} outside (0, 1]"
        )));
    }
    let target = f64_to_big_ratio(target_ps)
        .ok_or_else(|| Error::invalid("target link probability is not finite"))?;

    let ps_at = |pool: u64| -> Result<BigRational> {
        let params = SchemeParams::new(key_ring_size, pool, overlap_threshold)?;
        Ok(link_probability(&params)?.into_ratio())
    };

    // p_s(K) = 1; find the smallest P with p_s(P) <= target
    if ps_at(key_ring_size)? <= target {
        return Ok(key_ring_size);
    }
    let mut lo = key_ring_size; // p_s(lo) > target
    let mut hi = (2 * key_ring_size).min(MAX_POOL_SIZE);
    loop {
        if ps_at(hi)? <= target {
            break;
        }
        if hi == MAX_POOL_SIZE {
            return Err(Error::capacity(format!(
                "no pool size within {MAX_POOL_SIZE} reaches p_s <= {target_ps}"
            )));
        }
        lo = hi;
        hi = (hi * 2).min(MAX_POOL_SIZE);
    }
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if ps_at(mid)? <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // hi is the smallest pool with p_s <= target and hi-1 overshoots;
    // the winner on a tie is the smaller pool, and p_s can plateau (it
    // is pinned at 1 for every P <= 2K - q), so a winning overshoot
    // value snaps back to the first pool attaining it
    let value_hi = ps_at(hi)?;
    let value_lo = ps_at(hi - 1)?;
    if (&value_hi - &target).abs() < (&value_lo - &target).abs() {
        return Ok(hi);
    }
    let (mut lo, mut hi) = (key_ring_size, hi - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ps_at(mid)? <= value_lo {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Coverage numerators `C(P,tau) * S_tau` over the common denominator
/// `C(P,K)^m`, where `S_tau` counts the m-tuples of rings covering a
/// fixed tau-set exactly (inclusion-exclusion, exact integers).
struct CoverageWeights {
    tau_min: u64,
    numerators: Vec<BigUint>,
    denominator: BigUint,
}

fn coverage_weights(params: &SchemeParams, attack_size: u64) -> Result<CoverageWeights> {
    let tau_max = check_coverage_capacity(params, attack_size)?;
    let k = params.key_ring_size();
    let p = params.key_pool_size();

    // C(x, K)^m for every possible ring-union size x
    let pows: Vec<BigUint> = runner::map_collect((tau_max + 1) as usize, |x| {
        binomial(x as u64, k).pow(attack_size as u32)
    });

    // S_tau = sum_{lam} (-1)^lam C(tau,lam) C(tau-lam,K)^m, one per tau
    let surjective: Vec<BigUint> = runner::map_collect((tau_max - k + 1) as usize, |i| {
        let tau = k + i as u64;
        let mut acc = BigInt::zero();
        let mut choose = BigUint::one(); // C(tau, lam)
        for lam in 0..=(tau - k) {
            let term = BigInt::from(&choose * &pows[(tau - lam) as usize]);
            if lam % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            choose = choose * (tau - lam) / (lam + 1);
        }
        debug_assert!(!acc.is_negative());
        acc.magnitude().clone()
    });

    // C(P, tau) stepped incrementally across the support
    let mut numerators = Vec::with_capacity(surjective.len());
    let mut choose_pool = binomial(p, k);
    for (i, s) in surjective.iter().enumerate() {
        numerators.push(&choose_pool * s);
        let tau = k + i as u64;
        if tau < tau_max {
            choose_pool = choose_pool * (p - tau) / (tau + 1);
        }
    }

    Ok(CoverageWeights {
        tau_min: k,
        numerators,
        denominator: binomial(p, k).pow(attack_size as u32),
    })
}

/// Exact distribution of the number of distinct keys exposed by
/// `attack_size` captured nodes.
pub fn coverage_distribution(
    params: &SchemeParams,
    attack_size: u64,
) -> Result<CoverageDistribution> {
    let weights = coverage_weights(params, attack_size)?;
    let probabilities = weights
        .numerators
        .into_iter()
        .map(|n| ExactProbability::from_integers(n, weights.denominator.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverageDistribution {
        attack_size,
        tau_min: weights.tau_min,
        probabilities,
    })
}

/// Probability that `attack_size` rings are pairwise disjoint:
/// `prod_j C(P - jK, K) / C(P,K)^m`. Requires `mK <= P`.
pub fn all_distinct_probability(
    params: &SchemeParams,
    attack_size: u64,
) -> Result<ExactProbability> {
    check_scheme_capacity(params)?;
    if attack_size < 1 {
        return Err(Error::invalid("attack size m must be at least 1"));
    }
    if attack_size > MAX_CAPTURES {
        return Err(Error::capacity(format!(
            "attack size {attack_size} exceeds exact-path limit {MAX_CAPTURES}"
        )));
    }
    let k = params.key_ring_size();
    let p = params.key_pool_size();
    if attack_size * k > p {
        return Err(Error::domain(format!(
            "{attack_size} rings of {k} keys cannot be disjoint in a pool of {p}"
        )));
    }
    let mut numer = BigUint::one();
    for j in 0..attack_size {
        numer *= binomial(p - j * k, k);
    }
    ExactProbability::from_integers(numer, binomial(p, k).pow(attack_size as u32))
}

/// Exact probability that a link between two non-captured nodes is
/// compromised after `attack_size` uniform captures, conditioned on the
/// link existing. Assembled over a single common denominator:
///
/// `p = sum_tau C(P,tau) S_tau innersum_tau / (C(P,K)^m M ff(P,K))`
///
/// with `innersum_tau = sum_{u=q}^{K} N_u u! ff(P-u, K-u) C(tau,u)` and
/// `M = sum_{u=q}^{K} N_u`, so only one final reduction is needed.
pub fn compromise_probability_exact(
    params: &SchemeParams,
    attack_size: u64,
) -> Result<ExactProbability> {
    let weights = coverage_weights(params, attack_size)?;
    let k = params.key_ring_size();
    let p = params.key_pool_size();
    let q = params.overlap_threshold();

    let n_weights = overlap_weights(params);
    let linked_weight: BigUint = n_weights[q as usize..].iter().sum();
    if linked_weight.is_zero() {
        return Err(Error::domain(
            "link probability is zero; compromise is conditioned on a link existing",
        ));
    }

    // coefficient of C(tau, u) in the inner sum, independent of tau
    let coefs: Vec<BigUint> = (q..=k)
        .map(|u| &n_weights[u as usize] * factorial(u) * falling_factorial(p - u, k - u))
        .collect();

    let inner: Vec<BigUint> = runner::map_collect(weights.numerators.len(), |i| {
        let tau = weights.tau_min + i as u64;
        let mut acc = BigUint::zero();
        let mut choose = binomial(tau, q); // C(tau, u)
        for u in q..=k {
            acc += &coefs[(u - q) as usize] * &choose;
            if u < k {
                choose = choose * (tau - u) / (u + 1);
            }
        }
        acc
    });

    let total: BigUint = weights
        .numerators
        .iter()
        .zip(&inner)
        .map(|(a, b)| a * b)
        .sum();
    let denominator = weights.denominator * linked_weight * falling_factorial(p, k);
    ExactProbability::from_integers(total, denominator)
}

/// The historical link-compromise formula
/// `sum_u [1 - (1 - K/P)^m]^u rho_u / p_s`, which miscounts key reuse;
/// provided only for comparison studies. Exact rational arithmetic.
pub fn compromise_probability_chan(
    params: &SchemeParams,
    attack_size: u64,
) -> Result<ExactProbability> {
    check_scheme_capacity(params)?;
    if attack_size < 1 {
        return Err(Error::invalid("attack size m must be at least 1"));
    }
    if attack_size > MAX_CAPTURES {
        return Err(Error::capacity(format!(
            "attack size {attack_size} exceeds exact-path limit {MAX_CAPTURES}"
        )));
    }
    let k = params.key_ring_size();
    let p = params.key_pool_size();
    let q = params.overlap_threshold();

    let n_weights = overlap_weights(params);
    let linked_weight: BigUint = n_weights[q as usize..].iter().sum();
    if linked_weight.is_zero() {
        return Err(Error::domain(
            "link probability is zero; compromise is conditioned on a link existing",
        ));
    }

    let ratio = |n: BigUint, d: BigUint| BigRational::new(BigInt::from(n), BigInt::from(d));
    let base = BigRational::one()
        - ratio(
            BigUint::from(p - k).pow(attack_size as u32),
            BigUint::from(p).pow(attack_size as u32),
        );

    let mut base_pow = num_traits::pow::pow(base.clone(), q as usize);
    let mut acc = BigRational::zero();
    for u in q..=k {
        acc += &base_pow * BigRational::from(BigInt::from(n_weights[u as usize].clone()));
        if u < k {
            base_pow *= &base;
        }
    }
    acc /= BigRational::from(BigInt::from(linked_weight));
    ExactProbability::new(acc)
}
