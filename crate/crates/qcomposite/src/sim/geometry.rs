//! Positions on the unit torus and the wrap-around cell grid used to
//! generate geometric-edge candidates.

use rand::Rng;

/// I.i.d. uniform points on the unit square, read as a torus.
pub fn sample_positions<R: Rng>(node_count: usize, rng: &mut R) -> Vec<[f64; 2]> {
    (0..node_count)
        .map(|_| [rng.gen::<f64>(), rng.gen::<f64>()])
        .collect()
}

/// Torus distance: per axis the shorter way around, then Euclidean.
pub fn torus_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let mut total = 0.0;
    for dim in 0..2 {
        let delta = (a[dim] - b[dim]).abs();
        let wrapped = delta.min(1.0 - delta);
        total += wrapped * wrapped;
    }
    total.sqrt()
}

/// Wrap-around cell grid with cell width >= r, so all pairs within
/// distance r live in the same or adjacent cells.
pub struct TorusGrid {
    cells_per_axis: usize,
    buckets: Vec<Vec<u32>>,
}

impl TorusGrid {
    pub fn new(positions: &[[f64; 2]], radius: f64) -> TorusGrid {
        let cells_per_axis = if radius >= 1.0 {
            1
        } else {
            ((1.0 / radius).floor() as usize).max(1)
        };
        let mut buckets = vec![Vec::new(); cells_per_axis * cells_per_axis];
        for (i, pos) in positions.iter().enumerate() {
            buckets[Self::cell_of(pos, cells_per_axis)].push(i as u32);
        }
        TorusGrid {
            cells_per_axis,
            buckets,
        }
    }

    fn cell_of(pos: &[f64; 2], cells: usize) -> usize {
        let clamp = |x: f64| ((x * cells as f64) as usize).min(cells - 1);
        clamp(pos[0]) + cells * clamp(pos[1])
    }

    /// Calls `visit` on a superset of all pairs within the grid radius,
    /// each unordered pair exactly once.
    pub fn for_each_candidate_pair(&self, node_count: usize, mut visit: impl FnMut(u32, u32)) {
        let cells = self.cells_per_axis;
        if cells < 4 {
            // neighborhoods overlap themselves under wrap-around; the
            // grid buys nothing, enumerate every pair
            for i in 0..node_count as u32 {
                for j in (i + 1)..node_count as u32 {
                    visit(i, j);
                }
            }
            return;
        }
        // forward half-shell; with cells >= 4 each unordered pair of
        // adjacent cells appears exactly once even under wrap-around
        const SHELL: [(isize, isize); 4] = [(1, 0), (1, 1), (0, 1), (-1, 1)];
        let wrap = |coord: usize, delta: isize| -> usize {
            (coord as isize + delta).rem_euclid(cells as isize) as usize
        };
        for cy in 0..cells {
            for cx in 0..cells {
                let home = &self.buckets[cx + cells * cy];
                for (a, &i) in home.iter().enumerate() {
                    for &j in &home[a + 1..] {
                        visit(i.min(j), i.max(j));
                    }
                }
                for &(dx, dy) in &SHELL {
                    let other = &self.buckets[wrap(cx, dx) + cells * wrap(cy, dy)];
                    for &i in home {
                        for &j in other {
                            visit(i.min(j), i.max(j));
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn torus_distance_wraps() {
        assert!((torus_distance([0.05, 0.5], [0.95, 0.5]) - 0.1).abs() < 1e-12);
        assert_eq!(torus_distance([0.3, 0.7], [0.3, 0.7]), 0.0);
        // opposite torus corners realize the maximum sqrt(2)/2
        let max = torus_distance([0.0, 0.0], [0.5, 0.5]);
        assert!((max - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn grid_candidates_cover_all_true_edges() {
        let mut rng = crate::sim::trial_rng(11, 0);
        for &radius in &[0.03, 0.09, 0.21, 0.35, 0.51, 0.7] {
            for &n in &[1usize, 17, 120, 300] {
                let positions = sample_positions(n, &mut rng);
                let grid = TorusGrid::new(&positions, radius);
                let mut candidates = HashSet::new();
                grid.for_each_candidate_pair(n, |i, j| {
                    assert!(i < j);
                    candidates.insert((i, j));
                });
                for i in 0..n as u32 {
                    for j in (i + 1)..n as u32 {
                        if torus_distance(positions[i as usize], positions[j as usize]) <= radius {
                            assert!(
                                candidates.contains(&(i, j)),
                                "missing pair ({i},{j}) at r={radius} n={n}"
                            );
                        }
                    }
                }
            }
        }
    }
}
