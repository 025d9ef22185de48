//! Key-ring sampling and sorted-ring intersection tests.

use rand::Rng;

use crate::error::Result;
use crate::types::SchemeParams;

/// The key rings of a sampled network, stored flat: ring `i` is the
/// sorted slice `data[i*K .. (i+1)*K]` of key ids in `0..P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyRings {
    data: Vec<u32>,
    ring_size: usize,
}

impl KeyRings {
    pub(crate) fn from_parts(data: Vec<u32>, ring_size: usize) -> KeyRings {
        debug_assert_eq!(data.len() % ring_size, 0);
        KeyRings { data, ring_size }
    }

    pub fn node_count(&self) -> usize {
        self.data.len() / self.ring_size
    }

    pub fn ring_size(&self) -> usize {
        self.ring_size
    }

    pub fn ring(&self, node: usize) -> &[u32] {
        &self.data[node * self.ring_size..(node + 1) * self.ring_size]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks_exact(self.ring_size)
    }
}

/// Samples `n` independent uniform K-subsets of the pool `0..P`,
/// each sorted for O(K) intersection tests.
pub fn sample_key_rings<R: Rng>(params: &SchemeParams, rng: &mut R) -> Result<KeyRings> {
    let n = params.require_node_count()? as usize;
    Ok(sample_rings_raw(
        n,
        params.key_ring_size() as usize,
        params.key_pool_size() as usize,
        rng,
    ))
}

pub(crate) fn sample_rings_raw<R: Rng>(
    n: usize,
    ring_size: usize,
    pool_size: usize,
    rng: &mut R,
) -> KeyRings {
    let mut data = Vec::with_capacity(n * ring_size);
    for _ in 0..n {
        let start = data.len();
        data.extend(
            rand::seq::index::sample(rng, pool_size, ring_size)
                .into_iter()
                .map(|k| k as u32),
        );
        data[start..].sort_unstable();
    }
    KeyRings { data, ring_size }
}

/// Samples one sorted uniform `size`-subset of `0..pool_size`.
pub(crate) fn sample_subset<R: Rng>(pool_size: usize, size: usize, rng: &mut R) -> Vec<u32> {
    let mut subset: Vec<u32> = rand::seq::index::sample(rng, pool_size, size)
        .into_iter()
        .map(|k| k as u32)
        .collect();
    subset.sort_unstable();
    subset
}

/// Whether two sorted rings share at least `q` keys; early exit.
pub fn shared_at_least(a: &[u32], b: &[u32], q: u64) -> bool {
    let mut count = 0u64;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                if count >= q {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

/// Shared-key count of two sorted rings, and whether every shared key is
/// marked in `captured_pool`.
pub(crate) fn shared_profile(a: &[u32], b: &[u32], captured_pool: &[bool]) -> (u64, bool) {
    let mut count = 0u64;
    let mut all_captured = true;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                all_captured &= captured_pool[a[i] as usize];
                i += 1;
                j += 1;
            }
        }
    }
    (count, all_captured)
}
