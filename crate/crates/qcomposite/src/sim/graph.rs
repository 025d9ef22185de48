//! Connectivity primitives for sampled networks.

use crate::error::{Error, Result};

/// Disjoint-set forest with union by size and path halving.
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
            components: len,
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    pub fn union(&mut self, x: u32, y: u32) {
        let mut a = self.find(x);
        let mut b = self.find(y);
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        self.components -= 1;
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Whether the undirected graph on `node_count` nodes with the given
/// edges is connected. A single node counts as connected; an empty
/// graph is a domain error.
pub fn is_connected(node_count: usize, edges: &[(u32, u32)]) -> Result<bool> {
    if node_count == 0 {
        return Err(Error::domain("connectivity of an empty graph is undefined"));
    }
    let mut uf = UnionFind::new(node_count);
    for &(a, b) in edges {
        uf.union(a, b);
        if uf.components() == 1 {
            return Ok(true);
        }
    }
    Ok(uf.components() == 1)
}

/// Breadth-first reachability; the independent cross-check for
/// [`is_connected`] used by tests.
#[doc(hidden)]
pub fn is_connected_bfs(node_count: usize, edges: &[(u32, u32)]) -> Result<bool> {
    if node_count == 0 {
        return Err(Error::domain("connectivity of an empty graph is undefined"));
    }
    let mut adjacency = vec![Vec::new(); node_count];
    for &(a, b) in edges {
        adjacency[a as usize].push(b);
        adjacency[b as usize].push(a);
    }
    let mut seen = vec![false; node_count];
    let mut queue = std::collections::VecDeque::from([0u32]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(node) = queue.pop_front() {
        for &next in &adjacency[node as usize] {
            if !seen[next as usize] {
                seen[next as usize] = true;
                reached += 1;
                queue.push_back(next);
            }
        }
    }
    Ok(reached == node_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn trivial_cases() {
        assert!(is_connected(1, &[]).unwrap());
        assert!(!is_connected(3, &[(0, 1)]).unwrap());
        assert!(is_connected(3, &[(0, 1), (2, 1)]).unwrap());
        assert!(is_connected(0, &[]).is_err());
    }

    #[test]
    fn union_find_matches_bfs_on_random_graphs() {
        let mut rng = crate::sim::trial_rng(7, 0);
        for _ in 0..200 {
            let n = rng.gen_range(1..40usize);
            let m = rng.gen_range(0..60usize);
            let edges: Vec<(u32, u32)> = (0..m)
                .map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)))
                .collect();
            assert_eq!(
                is_connected(n, &edges).unwrap(),
                is_connected_bfs(n, &edges).unwrap()
            );
        }
    }
}
