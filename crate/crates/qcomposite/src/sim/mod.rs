//! Seeded Monte Carlo over the secure topology: the intersection of the
//! random key graph and the random geometric graph on the unit torus,
//! with node capture, link hardening, and replication-attack trials.
//!
//! Determinism contract: every estimate is a pure function of its
//! parameters and the seed. Trial `t` draws all of its randomness from
//! `trial_rng(seed, t)`, and trial results are merged with commutative
//! integer addition, so estimates do not depend on execution order or
//! on whether the parallel or sequential runner is used.

mod geometry;
mod graph;
mod rings;

pub use geometry::{sample_positions, torus_distance, TorusGrid};
pub use graph::{is_connected, is_connected_bfs, UnionFind};
pub use rings::{sample_key_rings, shared_at_least, KeyRings};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::runner;
use crate::types::SchemeParams;

/// Identifier of the generator scheme, recorded in experiment outputs so
/// results stay reproducible across builds.
pub const RNG_ALGORITHM: &str = "chacha12/seed_from_u64/stream=trial-index";

/// Independent stream for one trial: the root seed keys the generator,
/// the trial index selects the stream.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// A Monte Carlo estimate with enough context to reproduce it. For
/// Bernoulli estimates `standard_error = sqrt(p(1-p)/effective_samples)`
/// with `effective_samples = trial_count`; ratio estimates (compromise)
/// use the number of observed linked pairs instead. A degenerate
/// estimate (no linked pairs anywhere) reports zero effective samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithCI {
    pub point_estimate: f64,
    pub standard_error: f64,
    pub trial_count: u64,
    pub effective_samples: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    fn from_counts(successes: u64, effective: u64, trials: u64, seed: u64) -> EstimateWithCI {
        if effective == 0 {
            return EstimateWithCI {
                point_estimate: 0.0,
                standard_error: 0.0,
                trial_count: trials,
                effective_samples: 0,
                seed,
            };
        }
        let p = successes as f64 / effective as f64;
        EstimateWithCI {
            point_estimate: p,
            standard_error: (p * (1.0 - p) / effective as f64).sqrt(),
            trial_count: trials,
            effective_samples: effective,
            seed,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.effective_samples == 0
    }
}

/// Secure edges among `positions`/`rings`: pairs within torus distance
/// `radius` whose rings share at least `q` keys. Candidate pairs come
/// from a wrap-around cell grid, so only near pairs pay the ring test.
pub fn build_secure_graph(
    rings: &KeyRings,
    positions: &[[f64; 2]],
    radius: f64,
    overlap_threshold: u64,
) -> Vec<(u32, u32)> {
    let grid = TorusGrid::new(positions, radius);
    let mut edges = Vec::new();
    grid.for_each_candidate_pair(positions.len(), |i, j| {
        if torus_distance(positions[i as usize], positions[j as usize]) <= radius
            && shared_at_least(rings.ring(i as usize), rings.ring(j as usize), overlap_threshold)
        {
            edges.push((i, j));
        }
    });
    edges.sort_unstable();
    edges
}

/// One sampled realization of the secure network.
#[derive(Debug, Clone)]
pub struct NetworkInstance {
    params: SchemeParams,
    radius: f64,
    rings: KeyRings,
    positions: Vec<[f64; 2]>,
    secure_edges: Vec<(u32, u32)>,
    captured: Vec<u32>,
    hardened: bool,
}

impl NetworkInstance {
    /// Samples rings, positions and a uniform captured set, then builds
    /// the secure edge set.
    pub fn sample<R: Rng>(
        params: &SchemeParams,
        radius: f64,
        captured_count: u64,
        hardened: bool,
        rng: &mut R,
    ) -> Result<NetworkInstance> {
        let n = params.require_node_count()?;
        if captured_count >= n {
            return Err(Error::invalid(format!(
                "captured count {captured_count} must stay below node count {n}"
            )));
        }
        check_radius(radius)?;
        let rings = sample_key_rings(params, rng)?;
        let positions = sample_positions(n as usize, rng);
        let mut captured: Vec<u32> =
            rand::seq::index::sample(rng, n as usize, captured_count as usize)
                .into_iter()
                .map(|i| i as u32)
                .collect();
        captured.sort_unstable();
        let secure_edges =
            build_secure_graph(&rings, &positions, radius, params.overlap_threshold());
        Ok(NetworkInstance {
            params: params.clone(),
            radius,
            rings,
            positions,
            secure_edges,
            captured,
            hardened,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn rings(&self) -> &KeyRings {
        &self.rings
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn secure_edges(&self) -> &[(u32, u32)] {
        &self.secure_edges
    }

    pub fn captured(&self) -> &[u32] {
        self.captured.as_slice()
    }

    pub fn hardened(&self) -> bool {
        self.hardened
    }

    /// Full key graph (share >= q keys, regardless of distance), built
    /// on demand through an inverted key -> holders index.
    pub fn key_graph_edges(&self) -> Vec<(u32, u32)> {
        let pool = self.params.key_pool_size() as usize;
        let q = self.params.overlap_threshold();
        let mut holders: Vec<Vec<u32>> = vec![Vec::new(); pool];
        for (node, ring) in self.rings.iter().enumerate() {
            for &key in ring {
                holders[key as usize].push(node as u32);
            }
        }
        let mut shared_counts: std::collections::HashMap<(u32, u32), u64> =
            std::collections::HashMap::new();
        for nodes in &holders {
            for (a, &i) in nodes.iter().enumerate() {
                for &j in &nodes[a + 1..] {
                    *shared_counts.entry((i.min(j), i.max(j))).or_insert(0) += 1;
                }
            }
        }
        let mut edges: Vec<(u32, u32)> = shared_counts
            .into_iter()
            .filter(|&(_, count)| count >= q)
            .map(|(pair, _)| pair)
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Full geometric graph (torus distance <= r), built on demand.
    pub fn geo_graph_edges(&self) -> Vec<(u32, u32)> {
        let grid = TorusGrid::new(&self.positions, self.radius);
        let mut edges = Vec::new();
        grid.for_each_candidate_pair(self.positions.len(), |i, j| {
            if torus_distance(self.positions[i as usize], self.positions[j as usize])
                <= self.radius
            {
                edges.push((i, j));
            }
        });
        edges.sort_unstable();
        edges
    }
}

fn check_radius(radius: f64) -> Result<()> {
    let max = std::f64::consts::SQRT_2 / 2.0;
    if !(radius > 0.0 && radius <= max + f64::EPSILON) {
        return Err(Error::invalid(format!(
            "transmission radius {radius} outside (0, sqrt(2)/2]"
        )));
    }
    Ok(())
}

/// Fraction of trials in which the graph induced on the non-captured
/// nodes is connected; the captured set is uniform per trial.
pub fn estimate_connectivity(
    params: &SchemeParams,
    radius: f64,
    trials: u64,
    seed: u64,
    captured_count: u64,
) -> Result<EstimateWithCI> {
    let n = params.require_node_count()?;
    if trials < 1 {
        return Err(Error::invalid("need at least one trial"));
    }
    if captured_count >= n {
        return Err(Error::invalid(format!(
            "captured count {captured_count} must stay below node count {n}"
        )));
    }
    check_radius(radius)?;
    let survivors = (n - captured_count) as usize;
    let k = params.key_ring_size() as usize;
    let p = params.key_pool_size() as usize;
    let q = params.overlap_threshold();

    let connected_trials = runner::fold_trials(
        trials,
        0u64,
        |trial| {
            let mut rng = trial_rng(seed, trial);
            let rings = rings::sample_rings_raw(n as usize, k, p, &mut rng);
            let positions = sample_positions(n as usize, &mut rng);
            let mut alive = vec![true; n as usize];
            for i in rand::seq::index::sample(&mut rng, n as usize, captured_count as usize) {
                alive[i] = false;
            }
            // survivor sub-network, reindexed
            let mut sub_data = Vec::with_capacity(survivors * k);
            let mut sub_positions = Vec::with_capacity(survivors);
            for (i, &keep) in alive.iter().enumerate() {
                if keep {
                    sub_data.extend_from_slice(rings.ring(i));
                    sub_positions.push(positions[i]);
                }
            }
            let sub_rings = KeyRings::from_parts(sub_data, k);
            let edges = build_secure_graph(&sub_rings, &sub_positions, radius, q);
            is_connected(survivors, &edges).expect("survivors >= 1") as u64
        },
        |a, b| a + b,
    );
    Ok(EstimateWithCI::from_counts(
        connected_trials,
        trials,
        trials,
        seed,
    ))
}

/// Options for [`estimate_compromise`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompromiseOptions {
    /// Model the hash-renewal hardening: link keys are refreshed after
    /// neighbor discovery, so no link between non-captured nodes is ever
    /// compromised.
    pub hardened: bool,
    /// Restrict the counted pairs to those within a transmission radius.
    /// The headline metric is key-level and geometry-free; this is an
    /// exploratory view, not the reference one.
    pub geometric_radius: Option<f64>,
}

/// Ratio estimate of the fraction of compromised links among linked
/// non-captured pairs, after capturing `captured_count` uniform nodes
/// per trial and pooling their keys.
pub fn estimate_compromise(
    params: &SchemeParams,
    captured_count: u64,
    trials: u64,
    seed: u64,
    options: CompromiseOptions,
) -> Result<EstimateWithCI> {
    let n = params.require_node_count()?;
    if trials < 1 {
        return Err(Error::invalid("need at least one trial"));
    }
    if captured_count < 1 || captured_count + 2 > n {
        return Err(Error::invalid(format!(
            "captured count {captured_count} outside [1, n-2] for n={n}"
        )));
    }
    if let Some(radius) = options.geometric_radius {
        check_radius(radius)?;
    }
    let k = params.key_ring_size() as usize;
    let p = params.key_pool_size() as usize;
    let q = params.overlap_threshold();

    let (linked_total, compromised_total) = runner::fold_trials(
        trials,
        (0u64, 0u64),
        |trial| {
            let mut rng = trial_rng(seed, trial);
            let rings = rings::sample_rings_raw(n as usize, k, p, &mut rng);
            let positions = options
                .geometric_radius
                .map(|_| sample_positions(n as usize, &mut rng));
            let mut alive = vec![true; n as usize];
            let mut pool = vec![false; p];
            for i in rand::seq::index::sample(&mut rng, n as usize, captured_count as usize) {
                alive[i] = false;
                for &key in rings.ring(i) {
                    pool[key as usize] = true;
                }
            }
            let mut linked = 0u64;
            let mut compromised = 0u64;
            for i in 0..n as usize {
                if !alive[i] {
                    continue;
                }
                for j in (i + 1)..n as usize {
                    if !alive[j] {
                        continue;
                    }
                    if let (Some(r), Some(pos)) = (options.geometric_radius, positions.as_ref()) {
                        if torus_distance(pos[i], pos[j]) > r {
                            continue;
                        }
                    }
                    let (shared, covered) = rings::shared_profile(
                        rings.ring(i),
                        rings.ring(j),
                        &pool,
                    );
                    if shared >= q {
                        linked += 1;
                        if covered && !options.hardened {
                            compromised += 1;
                        }
                    }
                }
            }
            (linked, compromised)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    Ok(EstimateWithCI::from_counts(
        compromised_total,
        linked_total,
        trials,
        seed,
    ))
}

/// How many benign rings each replica gets to probe.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NeighborModel {
    /// Exactly `d` fresh benign rings per replica; matches the
    /// independence structure behind `1 - alpha^{cd}`.
    #[default]
    Fixed,
    /// Poisson(`d`) benign rings per replica; exploratory option for
    /// "close to d on average" deployments.
    Poisson,
}

/// Fraction of trials in which at least one of `c` replicas, each
/// loaded with a uniform `b`-subset payload and probing `d` benign
/// rings, links with a benign node.
#[allow(clippy::too_many_arguments)]
pub fn estimate_replication(
    params: &SchemeParams,
    payload_keys: u64,
    replica_count: u64,
    benign_density: u64,
    trials: u64,
    seed: u64,
    neighbors: NeighborModel,
) -> Result<EstimateWithCI> {
    if trials < 1 {
        return Err(Error::invalid("need at least one trial"));
    }
    if payload_keys < 1 || payload_keys > params.key_pool_size() {
        return Err(Error::invalid(format!(
            "replica payload b={payload_keys} outside [1, P={}]",
            params.key_pool_size()
        )));
    }
    if replica_count < 1 || benign_density < 1 {
        return Err(Error::invalid("replica count c and density d must be >= 1"));
    }
    let k = params.key_ring_size() as usize;
    let p = params.key_pool_size() as usize;
    let q = params.overlap_threshold();

    let successes = runner::fold_trials(
        trials,
        0u64,
        |trial| {
            let mut rng = trial_rng(seed, trial);
            let payload = rings::sample_subset(p, payload_keys as usize, &mut rng);
            let mut success = false;
            'replicas: for _ in 0..replica_count {
                let probes = match neighbors {
                    NeighborModel::Fixed => benign_density,
                    NeighborModel::Poisson => {
                        use rand_distr::Distribution;
                        let poisson = rand_distr::Poisson::new(benign_density as f64)
                            .expect("density >= 1");
                        poisson.sample(&mut rng) as u64
                    }
                };
                for _ in 0..probes {
                    let ring = rings::sample_subset(p, k, &mut rng);
                    if shared_at_least(&ring, &payload, q) {
                        success = true;
                        break 'replicas;
                    }
                }
            }
            success as u64
        },
        |a, b| a + b,
    );
    Ok(EstimateWithCI::from_counts(successes, trials, trials, seed))
}
