//! Node sets on `[0, T]` and the coverings that split them into local
//! interpolation subsets.
//!
//! Three families are provided: equispaced nodes with overlapping windows,
//! mixed equispaced-Chebyshev nodes and mixed equispaced-mock-Chebyshev
//! nodes. Node and subset indices are zero-based throughout.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Strictly increasing abscissas with `nodes[0] = 0` and `nodes[n-1] = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    nodes: Vec<f64>,
    t_end: f64,
}

impl NodeSet {
    pub fn new(nodes: Vec<f64>, t_end: f64) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(invalid(format!("right endpoint must be positive, got {t_end}")));
        }
        if nodes.len() < 2 {
            return Err(invalid("a node set needs at least two nodes"));
        }
        if nodes[0] != 0.0 || nodes[nodes.len() - 1] != t_end {
            return Err(invalid("node set must start at 0 and end at T"));
        }
        if let Some(i) = nodes.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(invalid(format!("nodes not strictly increasing at index {i}")));
        }
        Ok(Self { nodes, t_end })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Index of the node closest to `x`; ties go to the lower index.
    pub fn nearest(&self, x: f64) -> usize {
        let upper = self.nodes.partition_point(|&v| v < x);
        if upper == 0 {
            return 0;
        }
        if upper == self.nodes.len() {
            return upper - 1;
        }
        let lower = upper - 1;
        if x - self.nodes[lower] <= self.nodes[upper] - x {
            lower
        } else {
            upper
        }
    }
}

/// A family of contiguous index windows whose union is `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covering {
    subsets: Vec<Vec<usize>>,
}

impl Covering {
    /// Validates that every subset is non-empty, strictly increasing and
    /// contiguous, and that every node in `0..n` is covered.
    pub fn new(subsets: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if subsets.is_empty() {
            return Err(invalid("a covering needs at least one subset"));
        }
        let mut covered = vec![false; n];
        for (k, subset) in subsets.iter().enumerate() {
            if subset.is_empty() {
                return Err(invalid(format!("subset {k} is empty")));
            }
            if subset.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(invalid(format!("subset {k} is not a contiguous index range")));
            }
            for &i in subset {
                if i >= n {
                    return Err(invalid(format!("subset {k} references node {i} >= {n}")));
                }
                covered[i] = true;
            }
        }
        if let Some(node) = covered.iter().position(|c| !c) {
            return Err(Error::CoveringIncomplete { node });
        }
        Ok(Self { subsets })
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }
}

/// For each node `i`, the subsets `k` with `i ∈ F_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSets {
    sets: Vec<Vec<usize>>,
}

impl IndexSets {
    pub fn of(&self, node: usize) -> &[usize] {
        &self.sets[node]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

pub fn index_sets(covering: &Covering, n: usize) -> Result<IndexSets> {
    let mut sets = vec![Vec::new(); n];
    for (k, subset) in covering.subsets().iter().enumerate() {
        for &i in subset {
            if i >= n {
                return Err(invalid(format!("subset {k} references node {i} >= {n}")));
            }
            sets[i].push(k);
        }
    }
    if let Some(node) = sets.iter().position(Vec::is_empty) {
        return Err(Error::CoveringIncomplete { node });
    }
    Ok(IndexSets { sets })
}

/// The node families used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeFamily {
    Equispaced,
    MixedEc,
    MixedEmc,
}

impl NodeFamily {
    pub const ALL: [NodeFamily; 3] = [NodeFamily::Equispaced, NodeFamily::MixedEc, NodeFamily::MixedEmc];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeFamily::Equispaced => "equispaced",
            NodeFamily::MixedEc => "mixed-ec",
            NodeFamily::MixedEmc => "mixed-emc",
        }
    }
}

impl std::fmt::Display for NodeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NodeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equispaced" => Ok(NodeFamily::Equispaced),
            "mixed-ec" => Ok(NodeFamily::MixedEc),
            "mixed-emc" => Ok(NodeFamily::MixedEmc),
            other => Err(invalid(format!("unknown node family `{other}`"))),
        }
    }
}

fn uniform(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
    v[0] = lo;
    v[n - 1] = hi;
    v
}

/// `n` equispaced nodes `(i-1)·T/(n-1)`.
pub fn equispaced_nodes(n: usize, t_end: f64) -> Result<NodeSet> {
    if n < 2 {
        return Err(invalid(format!("equispaced nodes need n >= 2, got {n}")));
    }
    NodeSet::new(uniform(n, 0.0, t_end), t_end)
}

/// Windows of `d+1` consecutive indices advancing by `d-q`, so neighbouring
/// windows share `q+1` indices. The last window is pinned to the final `d+1`
/// nodes as soon as the regular stride would run past the end.
pub fn equispaced_covering(n: usize, d: usize, q: usize) -> Result<Covering> {
    if d == 0 || q >= d {
        return Err(invalid(format!("overlap index must satisfy 0 <= q < d, got q={q}, d={d}")));
    }
    if d + 1 > n {
        return Err(invalid(format!("degree {d} needs at least {} nodes, got {n}", d + 1)));
    }
    let stride = d - q;
    let window = |start: usize| (start..=start + d).collect::<Vec<_>>();
    let mut subsets = Vec::new();
    let mut start = 0;
    loop {
        if start + d >= n - 1 {
            subsets.push(window(n - 1 - d));
            break;
        }
        subsets.push(window(start));
        start += stride;
    }
    Covering::new(subsets, n)
}

/// Concatenates per-interval node blocks (each including both break points)
/// into a node set, with one subset per interval.
fn assemble_blocks(blocks: Vec<Vec<f64>>, t_end: f64) -> Result<(NodeSet, Covering)> {
    let mut nodes = Vec::new();
    let mut subsets = Vec::with_capacity(blocks.len());
    for block in blocks {
        let first = if nodes.is_empty() { 0 } else { nodes.len() - 1 };
        let skip = usize::from(!nodes.is_empty());
        nodes.extend(block.iter().skip(skip));
        subsets.push((first..nodes.len()).collect());
    }
    let n = nodes.len();
    Ok((NodeSet::new(nodes, t_end)?, Covering::new(subsets, n)?))
}

fn break_points(n_e: usize, t_end: f64) -> Vec<f64> {
    uniform(n_e, 0.0, t_end)
}

/// Chebyshev-Lobatto positions of degree `d` on `[lo, hi]`, endpoints included.
fn lobatto_targets(d: usize, lo: f64, hi: f64) -> Vec<f64> {
    let half = 0.5 * (hi - lo);
    (0..=d)
        .map(|k| match k {
            0 => lo,
            k if k == d => hi,
            k => lo + (1.0 - (k as f64 * PI / d as f64).cos()) * half,
        })
        .collect()
}

/// Mixed equispaced-Chebyshev nodes: `n_e` break points with the `d-1`
/// interior Chebyshev-Lobatto points of each break interval.
pub fn mixed_ec(n_e: usize, d: usize, t_end: f64) -> Result<(NodeSet, Covering)> {
    if n_e < 2 || d < 1 {
        return Err(invalid(format!("mixed E-C nodes need n_e >= 2 and d >= 1, got n_e={n_e}, d={d}")));
    }
    let breaks = break_points(n_e, t_end);
    let blocks = breaks
        .windows(2)
        .map(|w| lobatto_targets(d, w[0], w[1]))
        .collect();
    assemble_blocks(blocks, t_end)
}

/// Picks `d+1` of the `n_s+2` equispaced candidates on `[lo, hi]` that best
/// mimic the degree-`d` Chebyshev-Lobatto points. Returns sorted candidate
/// indices. Both endpoints are always selected; the remaining targets are
/// matched greedily, from the ends inward, to the nearest unused candidate
/// (ties to the lower index).
pub fn mock_chebyshev_indices(d: usize, n_s: usize) -> Vec<usize> {
    let last = n_s + 1;
    let candidates = uniform(n_s + 2, 0.0, 1.0);
    let targets = lobatto_targets(d, 0.0, 1.0);
    let mut used = vec![false; n_s + 2];
    used[0] = true;
    used[last] = true;
    let mut chosen = vec![0, last];
    let mut order = Vec::with_capacity(d.saturating_sub(1));
    let (mut lo, mut hi) = (1, d.saturating_sub(1));
    while lo <= hi {
        order.push(lo);
        if hi != lo {
            order.push(hi);
        }
        lo += 1;
        hi -= 1;
    }
    for k in order {
        let target = targets[k];
        let best = (0..candidates.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                let da = (candidates[a] - target).abs();
                let db = (candidates[b] - target).abs();
                da.total_cmp(&db).then(a.cmp(&b))
            })
            .expect("n_s >= d+1 leaves unused candidates");
        used[best] = true;
        chosen.push(best);
    }
    chosen.sort_unstable();
    chosen
}

/// Mixed equispaced-mock-Chebyshev nodes. Each break interval contributes the
/// mock-Chebyshev subset of its `n_s+2` equispaced candidates.
pub fn mixed_emc(n_e: usize, d: usize, n_s: usize, t_end: f64) -> Result<(NodeSet, Covering)> {
    if n_e < 2 || d < 1 {
        return Err(invalid(format!("mixed E-MC nodes need n_e >= 2 and d >= 1, got n_e={n_e}, d={d}")));
    }
    if n_s < d + 1 {
        return Err(invalid(format!("mixed E-MC nodes need n_s >= d+1, got n_s={n_s}, d={d}")));
    }
    let picks = mock_chebyshev_indices(d, n_s);
    let breaks = break_points(n_e, t_end);
    let blocks = breaks
        .windows(2)
        .map(|w| {
            let grid = uniform(n_s + 2, w[0], w[1]);
            picks.iter().map(|&j| grid[j]).collect()
        })
        .collect();
    assemble_blocks(blocks, t_end)
}

/// Default candidate count `3(d+1)` for mixed E-MC nodes.
pub fn default_candidates(d: usize) -> usize {
    3 * (d + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_based(subset: &[usize]) -> Vec<usize> {
        subset.iter().map(|i| i + 1).collect()
    }

    fn overlap(a: &[usize], b: &[usize]) -> usize {
        a.iter().filter(|i| b.contains(i)).count()
    }

    #[test]
    fn equispaced_small_sets() {
        assert_eq!(equispaced_nodes(2, 1.0).unwrap().as_slice(), &[0.0, 1.0]);
        assert_eq!(
            equispaced_nodes(5, 1.0).unwrap().as_slice(),
            &[0.0, 0.25, 0.5, 0.75, 1.0]
        );
        let x = equispaced_nodes(40, 1.0).unwrap();
        assert!((x.as_slice()[1] - 1.0 / 39.0).abs() < 1e-16);
        assert!(equispaced_nodes(1, 1.0).is_err());
    }

    #[test]
    fn equispaced_covering_without_overlap_offset() {
        let c = equispaced_covering(40, 7, 0).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(one_based(&c.subsets()[4]), (29..=36).collect::<Vec<_>>());
        assert_eq!(one_based(&c.subsets()[5]), (33..=40).collect::<Vec<_>>());
        assert_eq!(overlap(&c.subsets()[4], &c.subsets()[5]), 4);
    }

    #[test]
    fn equispaced_covering_with_overlap_one() {
        let c = equispaced_covering(40, 7, 1).unwrap();
        assert_eq!(c.len(), 7);
        for k in 0..c.len() - 2 {
            assert_eq!(overlap(&c.subsets()[k], &c.subsets()[k + 1]), 2);
        }
        assert_eq!(overlap(&c.subsets()[5], &c.subsets()[6]), 6);
    }

    #[test]
    fn equispaced_covering_single_window_and_errors() {
        let c = equispaced_covering(8, 7, 0).unwrap();
        assert_eq!(c.subsets(), &[(0..8).collect::<Vec<_>>()]);
        assert!(equispaced_covering(40, 7, 7).is_err());
        assert!(equispaced_covering(7, 7, 0).is_err());
    }

    #[test]
    fn mixed_ec_sizes() {
        let (x, c) = mixed_ec(6, 5, 1.0).unwrap();
        assert_eq!(x.len(), 26);
        assert_eq!(c.len(), 5);
        let (x, c) = mixed_ec(2, 1, 1.0).unwrap();
        assert_eq!(x.as_slice(), &[0.0, 1.0]);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn mixed_ec_cosine_map() {
        let (x, c) = mixed_ec(3, 2, 1.0).unwrap();
        let v = x.as_slice();
        assert_eq!(v.len(), 5);
        assert!((v[1] - 0.25).abs() < 1e-15);
        assert!((v[3] - 0.75).abs() < 1e-15);
        let k = index_sets(&c, x.len()).unwrap();
        assert_eq!(k.of(2), &[0, 1]);
    }

    #[test]
    fn mixed_emc_sizes() {
        let (x, c) = mixed_emc(4, 6, 10, 1.0).unwrap();
        assert_eq!(x.len(), 19);
        assert_eq!(c.len(), 3);
        assert!(c.subsets().iter().all(|s| s.len() == 7));
        let (x, _) = mixed_emc(2, 1, 3, 1.0).unwrap();
        assert_eq!(x.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn mixed_emc_middle_node_is_a_nearest_candidate() {
        let (x, _) = mixed_emc(2, 2, 6, 1.0).unwrap();
        let mid = x.as_slice()[1];
        let candidates: Vec<f64> = (0..8).map(|j| j as f64 / 7.0).collect();
        let best = candidates
            .iter()
            .map(|c| (c - 0.5).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(candidates.iter().any(|c| (c - mid).abs() < 1e-15));
        assert!((mid - 0.5).abs() <= best + 1e-15);
        assert!(mixed_emc(2, 6, 6, 1.0).is_err());
    }

    #[test]
    fn index_sets_examples() {
        let c = Covering::new(vec![vec![0, 1, 2, 3]], 4).unwrap();
        let k = index_sets(&c, 4).unwrap();
        assert!((0..4).all(|i| k.of(i) == [0]));

        let c = equispaced_covering(40, 7, 0).unwrap();
        let k = index_sets(&c, 40).unwrap();
        assert_eq!(k.of(32), &[4, 5]);
    }

    #[test]
    fn incomplete_covering_is_rejected() {
        let err = Covering::new(vec![vec![0, 1], vec![3]], 4).unwrap_err();
        assert!(matches!(err, Error::CoveringIncomplete { node: 2 }));
        assert!(Covering::new(vec![vec![0, 2]], 3).is_err());
    }

    #[test]
    fn nearest_node_ties_go_low() {
        let x = equispaced_nodes(5, 1.0).unwrap();
        assert_eq!(x.nearest(0.125), 0);
        assert_eq!(x.nearest(0.13), 1);
        assert_eq!(x.nearest(1.0), 4);
        assert_eq!(x.nearest(0.0), 0);
    }
}
