//! Domain types shared across the exact, asymptotic and simulation modules.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Configuration of the q-composite scheme: every node holds a ring of
/// `key_ring_size` keys drawn uniformly from a pool of `key_pool_size`
/// keys, and two nodes can link iff their rings share at least
/// `overlap_threshold` keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeParams {
    node_count: Option<u64>,
    key_ring_size: u64,
    key_pool_size: u64,
    overlap_threshold: u64,
}

impl SchemeParams {
    /// Key-level parameters; enforces `1 <= q <= K <= P`.
    pub fn new(key_ring_size: u64, key_pool_size: u64, overlap_threshold: u64) -> Result<Self> {
        if overlap_threshold < 1 {
            return Err(Error::invalid("overlap threshold q must be at least 1"));
        }
        if overlap_threshold > key_ring_size {
            return Err(Error::invalid(format!(
                "overlap threshold q={overlap_threshold} exceeds key ring size K={key_ring_size}"
            )));
        }
        if key_ring_size > key_pool_size {
            return Err(Error::invalid(format!(
                "key ring size K={key_ring_size} exceeds key pool size P={key_pool_size}"
            )));
        }
        Ok(SchemeParams {
            node_count: None,
            key_ring_size,
            key_pool_size,
            overlap_threshold,
        })
    }

    /// Same key-level parameters plus the network size needed by simulations.
    pub fn with_node_count(mut self, node_count: u64) -> Result<Self> {
        if node_count < 1 {
            return Err(Error::invalid("node count n must be at least 1"));
        }
        self.node_count = Some(node_count);
        Ok(self)
    }

    pub fn node_count(&self) -> Option<u64> {
        self.node_count
    }

    /// Node count, or an error for operations that cannot proceed without it.
    pub fn require_node_count(&self) -> Result<u64> {
        self.node_count
            .ok_or_else(|| Error::invalid("operation requires a node count n"))
    }

    pub fn key_ring_size(&self) -> u64 {
        self.key_ring_size
    }

    pub fn key_pool_size(&self) -> u64 {
        self.key_pool_size
    }

    pub fn overlap_threshold(&self) -> u64 {
        self.overlap_threshold
    }
}

/// A probability held as an arbitrary-precision rational in `[0, 1]`,
/// always stored in lowest terms. Conversion to `f64` is explicit and
/// happens only at output boundaries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactProbability(BigRational);

impl ExactProbability {
    /// Wraps a rational, checking `0 <= value <= 1`.
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::domain(format!(
                "probability {value} outside [0, 1]"
            )));
        }
        Ok(ExactProbability(value))
    }

    pub fn from_integers(numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::domain("probability with zero denominator"));
        }
        Self::new(BigRational::new(
            BigInt::from_biguint(Sign::Plus, numerator),
            BigInt::from_biguint(Sign::Plus, denominator),
        ))
    }

    pub fn zero() -> Self {
        ExactProbability(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProbability(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Nearest-enough `f64`, safe for numerators and denominators far past
    /// the `f64` range.
    pub fn as_f64(&self) -> f64 {
        big_ratio_to_f64(&self.0)
    }
}

impl std::fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `f64` value of a big rational. `BigRational::to_f64` divides the parts'
/// own conversions, which turns into `inf/inf => NaN` once either side
/// passes ~1e308, so both sides are shifted down together first.
pub(crate) fn big_ratio_to_f64(value: &BigRational) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    let numer = value.numer();
    let denom = value.denom();
    let bits = numer.bits().max(denom.bits());
    // keep ~900 bits: far more than f64 needs, comfortably in range
    let shift = bits.saturating_sub(900);
    let n = (numer >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (denom >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact rational from an `f64`, for lossless comparisons against exact
/// probabilities. The binary fraction of the float is taken verbatim.
pub(crate) fn f64_to_big_ratio(value: f64) -> Option<BigRational> {
    BigRational::from_float(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn params_reject_bad_orderings() {
        assert!(SchemeParams::new(2, 4, 0).is_err());
        assert!(SchemeParams::new(2, 4, 3).is_err());
        assert!(SchemeParams::new(5, 4, 1).is_err());
        assert!(SchemeParams::new(2, 4, 2).is_ok());
        assert!(SchemeParams::new(1, 1, 1).is_ok());
    }

    #[test]
    fn probability_bounds_enforced() {
        assert!(ExactProbability::from_integers(BigUint::from(3u32), BigUint::from(2u32)).is_err());
        assert!(ExactProbability::from_integers(BigUint::from(2u32), BigUint::from(2u32)).is_ok());
        assert!(ExactProbability::from_integers(BigUint::from(1u32), BigUint::from(0u32)).is_err());
    }

    #[test]
    fn stored_in_lowest_terms() {
        let p = ExactProbability::from_integers(BigUint::from(4u32), BigUint::from(6u32)).unwrap();
        assert_eq!(p.numerator().to_string(), "2");
        assert_eq!(p.denominator().to_string(), "3");
    }

    #[test]
    fn huge_ratio_converts_to_finite_f64() {
        // ratio of two ~1200-digit numbers with known quotient 2/3
        let a = BigUint::from(10u32).pow(1200u32) * 2u32;
        let b = BigUint::from(10u32).pow(1200u32) * 3u32;
        let p = ExactProbability::from_integers(a, b).unwrap();
        let f = p.as_f64();
        assert!((f - 2.0 / 3.0).abs() < 1e-15, "got {f}");
    }
}
