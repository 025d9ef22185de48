//! Large-network approximations: link setup and link compromise in the
//! small-ring regime, the overlap thresholds that best resist capture
//! attacks, and the critical parameters for secure connectivity.
//!
//! All factorial/power products are evaluated in log space with exact
//! log-factorial summation (q stays small, so no Stirling approximation
//! is needed). Results outside a formula's validity regime are still
//! returned, but carry structured warnings rather than failing silently.

use crate::error::{Error, Result};

/// Ceiling on the overlap-threshold searches; beyond this any realistic
/// compromise/link ratio is astronomically suboptimal.
pub const DEFAULT_Q_MAX: u64 = 64;

/// Comparisons of log-space objectives closer than this count as ties.
const LOG_TIE_TOLERANCE: f64 = 1e-12;

/// A value produced outside (or near the edge of) its formula's validity
/// regime keeps its warnings attached.
#[derive(Debug, Clone, PartialEq)]
#[must_use]
pub struct Warned<T> {
    pub value: T,
    pub warnings: Vec<RegimeWarning>,
}

impl<T> Warned<T> {
    fn clean(value: T) -> Self {
        Warned {
            value,
            warnings: Vec::new(),
        }
    }
}

/// Structured validity-regime warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegimeWarning {
    /// `K^2 >= P`: the link-probability approximation assumes a ring far
    /// smaller than the pool.
    RingLargeForPool { key_ring_size: u64, key_pool_size: u64 },
    /// `mK >= sqrt(P)`: captured rings collide with non-negligible
    /// probability, so the all-distinct approximation degrades.
    CapturesBeyondBirthdayRegime { captured_keys: u64, key_pool_size: u64 },
    /// `bK >= P`: the replication approximation assumes a small payload.
    ReplicaPayloadLargeForPool { payload_keys: u64, key_pool_size: u64 },
}

impl std::fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeWarning::RingLargeForPool {
                key_ring_size,
                key_pool_size,
            } => write!(
                f,
                "K^2 = {} >= P = {key_pool_size}: outside the approximation regime",
                key_ring_size * key_ring_size
            ),
            RegimeWarning::CapturesBeyondBirthdayRegime {
                captured_keys,
                key_pool_size,
            } => write!(
                f,
                "mK = {captured_keys} >= sqrt(P) = {:.1}: captured rings likely collide",
                (*key_pool_size as f64).sqrt()
            ),
            RegimeWarning::ReplicaPayloadLargeForPool {
                payload_keys,
                key_pool_size,
            } => write!(
                f,
                "bK = {payload_keys} >= P = {key_pool_size}: outside the approximation regime"
            ),
        }
    }
}

/// Natural log of `q!` by exact summation.
pub fn ln_factorial(q: u64) -> f64 {
    (2..=q).map(|i| (i as f64).ln()).sum()
}

/// Asymptotic link-setup probability `(1/q!) (K^2/P)^q`.
pub fn link_probability_asymptotic(
    key_ring_size: u64,
    key_pool_size: u64,
    overlap_threshold: u64,
) -> Warned<f64> {
    let q = overlap_threshold as f64;
    let log = q * (2.0 * (key_ring_size as f64).ln() - (key_pool_size as f64).ln())
        - ln_factorial(overlap_threshold);
    let mut out = Warned::clean(log.exp());
    if key_ring_size * key_ring_size >= key_pool_size {
        out.warnings.push(RegimeWarning::RingLargeForPool {
            key_ring_size,
            key_pool_size,
        });
    }
    out
}

/// Asymptotic link-compromise probability `(mK/P)^q`.
pub fn compromise_asymptotic(
    captured: u64,
    key_ring_size: u64,
    key_pool_size: u64,
    overlap_threshold: u64,
) -> Warned<f64> {
    let q = overlap_threshold as f64;
    let log = q
        * ((captured as f64).ln() + (key_ring_size as f64).ln() - (key_pool_size as f64).ln());
    let mut out = Warned::clean(log.exp());
    let captured_keys = captured * key_ring_size;
    if (captured_keys * captured_keys) as f64 >= key_pool_size as f64 {
        out.warnings.push(RegimeWarning::CapturesBeyondBirthdayRegime {
            captured_keys,
            key_pool_size,
        });
    }
    out
}

/// Asymptotic compromised-to-linked ratio `q! (m/K)^q`.
pub fn compromise_ratio_asymptotic(
    captured: u64,
    key_ring_size: u64,
    overlap_threshold: u64,
) -> f64 {
    let q = overlap_threshold as f64;
    (ln_factorial(overlap_threshold)
        + q * ((captured as f64).ln() - (key_ring_size as f64).ln()))
    .exp()
}

/// An optimal overlap threshold; `tie` marks the cases where the
/// neighboring threshold achieves the same asymptotic objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimalQ {
    pub q: u64,
    pub tie: bool,
}

/// Threshold minimizing the compromise ratio against an adversary who
/// captured `captured` nodes: `q* = max(floor(K/m), 1)`. When `K/m` is an
/// integer above 1, `q* - 1` minimizes too and the tie is flagged.
pub fn optimal_q_given_captures(key_ring_size: u64, captured: u64) -> OptimalQ {
    let q = (key_ring_size / captured).max(1);
    let tie = captured * q == key_ring_size && q > 1;
    OptimalQ { q, tie }
}

/// An adversary constrained by the compromise fraction it must reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetAdversary {
    target_fraction: f64,
    link_probability: f64,
    key_ring_size: u64,
}

impl BudgetAdversary {
    pub fn new(target_fraction: f64, link_probability: f64, key_ring_size: u64) -> Result<Self> {
        if !(target_fraction > 0.0 && target_fraction <= 1.0) {
            return Err(Error::invalid(format!(
                "target compromise fraction {target_fraction} outside (0, 1]"
            )));
        }
        if !(link_probability > 0.0 && link_probability <= 1.0) {
            return Err(Error::invalid(format!(
                "link probability {link_probability} outside (0, 1]"
            )));
        }
        if key_ring_size < 1 {
            return Err(Error::invalid("key ring size K must be at least 1"));
        }
        Ok(BudgetAdversary {
            target_fraction,
            link_probability,
            key_ring_size,
        })
    }

    pub fn target_fraction(&self) -> f64 {
        self.target_fraction
    }

    pub fn link_probability(&self) -> f64 {
        self.link_probability
    }

    pub fn key_ring_size(&self) -> u64 {
        self.key_ring_size
    }

    /// Compromised-to-linked ratio the adversary aims for.
    pub fn ratio(&self) -> f64 {
        self.target_fraction / self.link_probability
    }
}

/// Threshold maximizing the captures the adversary needs, i.e. the
/// argmax over `q` of `(x/q!)^(1/q)` with `x` the target ratio. Ties are
/// broken toward smaller `q`.
pub fn optimal_q_given_target(adversary: &BudgetAdversary, q_max: u64) -> u64 {
    let ln_x = adversary.ratio().ln();
    let mut best_q = 1;
    let mut best = ln_x; // (ln x - ln 1!) / 1
    for q in 2..=q_max.max(1) {
        let value = (ln_x - ln_factorial(q)) / q as f64;
        if value > best + LOG_TIE_TOLERANCE {
            best = value;
            best_q = q;
        }
    }
    best_q
}

/// Pool size at which the asymptotic link probability hits `target_ps`:
/// the rounded solution of `(1/q!)(K^2/P)^q = p_s`. This is the inverse
/// used by the fixed-`p_s` parameter studies; the exact counterpart is
/// `exact::find_pool_size`.
pub fn pool_size_asymptotic(
    key_ring_size: u64,
    overlap_threshold: u64,
    target_ps: f64,
) -> Result<u64> {
    if key_ring_size < 1 || overlap_threshold < 1 || overlap_threshold > key_ring_size {
        return Err(Error::invalid("need 1 <= q <= K"));
    }
    if !(target_ps > 0.0 && target_ps <= 1.0) {
        return Err(Error::invalid(format!(
            "target link probability {target_ps} outside (0, 1]"
        )));
    }
    let q = overlap_threshold as f64;
    let ln_pool = 2.0 * (key_ring_size as f64).ln()
        - (target_ps.ln() + ln_factorial(overlap_threshold)) / q;
    let pool = ln_pool.exp().round();
    if !pool.is_finite() || pool > u64::MAX as f64 {
        return Err(Error::invalid(format!(
            "solved pool size {pool} is out of range"
        )));
    }
    Ok((pool as u64).max(key_ring_size))
}

/// Ratio at which the preferred threshold crosses from `q` to `q + 1`:
/// `q!/(q+1)^q`, the solution of `(x/q!)^(1/q) = (x/(q+1)!)^(1/(q+1))`.
pub fn q_sharp_boundary(overlap_threshold: u64) -> f64 {
    let q = overlap_threshold;
    (ln_factorial(q) - q as f64 * ((q + 1) as f64).ln()).exp()
}

/// Captures needed to reach the adversary's target at threshold `q`:
/// `m = K (x/q!)^(1/q)`.
pub fn required_captures(adversary: &BudgetAdversary, overlap_threshold: u64) -> f64 {
    let q = overlap_threshold as f64;
    adversary.key_ring_size as f64
        * ((adversary.ratio().ln() - ln_factorial(overlap_threshold)) / q).exp()
}

/// Which design parameter to solve for; the other two are given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveFor {
    KeyRingSize { key_pool_size: f64, radius: f64 },
    KeyPoolSize { key_ring_size: f64, radius: f64 },
    Radius { key_ring_size: f64, key_pool_size: f64 },
}

/// Inputs of the connectivity design guideline. With `captured = 0` this
/// is the attack-free network; otherwise the surviving `n - m` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityDesign {
    pub node_count: u64,
    pub captured: u64,
    pub overlap_threshold: u64,
    pub solve_for: SolveFor,
}

/// Solves `(1/q!) (K^2/P)^q pi r^2 = ln(n_eff)/n_eff` for the designated
/// unknown, where `n_eff = n - m` is the surviving network size.
pub fn critical_parameter(design: &ConnectivityDesign) -> Result<f64> {
    if design.overlap_threshold < 1 {
        return Err(Error::invalid("overlap threshold q must be at least 1"));
    }
    if design.captured >= design.node_count {
        return Err(Error::invalid(format!(
            "captured count {} must stay below node count {}",
            design.captured, design.node_count
        )));
    }
    let n_eff = design.node_count - design.captured;
    if n_eff < 2 {
        return Err(Error::invalid(
            "need at least two surviving nodes for connectivity",
        ));
    }
    let q = design.overlap_threshold as f64;
    // log of the connectivity threshold ln(n_eff)/n_eff
    let n_eff = n_eff as f64;
    let ln_threshold = n_eff.ln().ln() - n_eff.ln();
    let ln_qfact = ln_factorial(design.overlap_threshold);
    let ln_pi = std::f64::consts::PI.ln();

    let check_radius = |r: f64| -> Result<f64> {
        if !(r > 0.0 && r <= 0.5) {
            return Err(Error::invalid(format!(
                "transmission radius {r} outside (0, 1/2]"
            )));
        }
        Ok(r)
    };
    let check_positive = |x: f64, what: &str| -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::invalid(format!("{what} must be positive, got {x}")));
        }
        Ok(x)
    };

    let value = match design.solve_for {
        SolveFor::KeyRingSize {
            key_pool_size,
            radius,
        } => {
            let p = check_positive(key_pool_size, "key pool size")?;
            let r = check_radius(radius)?;
            ((ln_qfact - ln_pi + ln_threshold) / (2.0 * q) + 0.5 * p.ln() - r.ln() / q).exp()
        }
        SolveFor::KeyPoolSize {
            key_ring_size,
            radius,
        } => {
            let k = check_positive(key_ring_size, "key ring size")?;
            let r = check_radius(radius)?;
            ((ln_pi - ln_qfact - ln_threshold) / q + 2.0 * k.ln() + 2.0 * r.ln() / q).exp()
        }
        SolveFor::Radius {
            key_ring_size,
            key_pool_size,
        } => {
            let k = check_positive(key_ring_size, "key ring size")?;
            let p = check_positive(key_pool_size, "key pool size")?;
            (0.5 * (ln_qfact + ln_threshold - ln_pi) + 0.5 * q * (p.ln() - 2.0 * k.ln())).exp()
        }
    };
    Ok(value)
}

/// Edge probability `(1/q!) (K^2/P)^q pi r^2` of the secure topology, for
/// round-trip checks against `ln(n_eff)/n_eff`.
pub fn secure_edge_probability(
    key_ring_size: f64,
    key_pool_size: f64,
    radius: f64,
    overlap_threshold: u64,
) -> f64 {
    let q = overlap_threshold as f64;
    (q * (2.0 * key_ring_size.ln() - key_pool_size.ln()) - ln_factorial(overlap_threshold)
        + std::f64::consts::PI.ln()
        + 2.0 * radius.ln())
    .exp()
}

/// Critical capture count for connectivity at fixed (K, P, r, q): the
/// `m` at which `ln(n-m)/(n-m)` meets the secure edge probability,
/// found on the decreasing branch `n - m >= e` of `ln(x)/x`. `None`
/// when the edge probability is above `1/e` (every survivor count is
/// supercritical) or the solution would need `m < 0` (the full network
/// is already subcritical).
pub fn critical_capture_count(
    node_count: u64,
    key_ring_size: f64,
    key_pool_size: f64,
    radius: f64,
    overlap_threshold: u64,
) -> Option<f64> {
    let edge = secure_edge_probability(key_ring_size, key_pool_size, radius, overlap_threshold);
    let n = node_count as f64;
    if !(edge > 0.0) || edge > (-1.0f64).exp() {
        return None;
    }
    let threshold = |x: f64| x.ln() / x;
    if threshold(n) >= edge {
        return None; // even m = 0 sits at or below the critical point
    }
    let (mut lo, mut hi) = (std::f64::consts::E, n); // threshold(lo) >= edge > threshold(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if threshold(mid) >= edge {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(n - 0.5 * (lo + hi))
}
