//! Minimum-weight matching decoder.
//!
//! X errors flip site checks and Z errors flip plaquette checks; the two
//! sides are matched independently. Each defect gets a mirrored boundary
//! node, boundary nodes are joined among themselves at zero cost, and an
//! exact maximum-cardinality matching on `C - w` gives the minimum-weight
//! perfect matching.

use std::convert::Infallible;

use petgraph::graph::UnGraph;
use rustworkx_core::max_weight_matching::max_weight_matching;

use crate::decoder::{Decision, Decoder};
use crate::error::{Error, Result};
use crate::lattice::{SurfaceCode, Syndrome};
use crate::pauli::PauliOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Site defects, matched to the left and right boundaries.
    XErrors,
    /// Plaquette defects, matched to the top and bottom boundaries.
    ZErrors,
}

/// Weighted graph on `2n` nodes: defects `0..n`, their boundary mirrors
/// `n..2n`.
#[derive(Clone, Debug)]
pub struct DefectGraph {
    pub side: Side,
    /// `(row, col)` of each defect.
    pub defects: Vec<(usize, usize)>,
    num_nodes: usize,
    edges: Vec<(usize, usize, u64)>,
}

impl DefectGraph {
    /// A bare graph, mainly for exercising the matching routine.
    pub fn from_edges(side: Side, num_nodes: usize, edges: Vec<(usize, usize, u64)>) -> Self {
        Self {
            side,
            defects: Vec::new(),
            num_nodes,
            edges,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.num_nodes == 0
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<u64> {
        self.edges
            .iter()
            .find(|&&(u, v, _)| (u, v) == (a, b) || (u, v) == (b, a))
            .map(|&(_, _, w)| w)
    }
}

/// Shortest path length between two defects of one side.
pub fn defect_distance(a: (usize, usize), b: (usize, usize)) -> u64 {
    (a.0.abs_diff(b.0) + a.1.abs_diff(b.1)) as u64
}

/// Which boundary a defect is closest to, with ties going left or top.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Boundary {
    Near,
    Far,
}

fn nearest_boundary(d: usize, side: Side, (row, col): (usize, usize)) -> (Boundary, u64) {
    // Site column j has j+1 edges to its left and d-1-j to its right;
    // plaquette row i likewise towards the top and bottom.
    let along = match side {
        Side::XErrors => col,
        Side::ZErrors => row,
    };
    let near = along + 1;
    let far = d - 1 - along;
    if near <= far {
        (Boundary::Near, near as u64)
    } else {
        (Boundary::Far, far as u64)
    }
}

pub fn boundary_distance(d: usize, side: Side, defect: (usize, usize)) -> u64 {
    nearest_boundary(d, side, defect).1
}

pub fn build_defect_graph(lat: &SurfaceCode, s: &Syndrome, side: Side) -> DefectGraph {
    let d = lat.distance();
    let defects: Vec<(usize, usize)> = match side {
        Side::XErrors => s
            .site_bits
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(k, _)| lat.site_coords(k))
            .collect(),
        Side::ZErrors => s
            .plaquette_bits
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(k, _)| lat.plaquette_coords(k))
            .collect(),
    };
    let n = defects.len();
    let bdist: Vec<u64> = defects.iter().map(|&p| boundary_distance(d, side, p)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, n + i, bdist[i]));
        for j in i + 1..n {
            let w = defect_distance(defects[i], defects[j]);
            // Sending both defects to the boundary is never worse.
            if w < bdist[i] + bdist[j] {
                edges.push((i, j, w));
            }
            edges.push((n + i, n + j, 0));
        }
    }
    DefectGraph {
        side,
        defects,
        num_nodes: 2 * n,
        edges,
    }
}

/// Exact minimum-weight perfect matching; pairs are `(a, b)` with `a < b`,
/// sorted.
pub fn min_weight_perfect_matching(g: &DefectGraph) -> Result<Vec<(usize, usize)>> {
    if g.num_nodes % 2 == 1 {
        return Err(Error::OddNodeCount(g.num_nodes));
    }
    if g.num_nodes == 0 {
        return Ok(Vec::new());
    }
    let mut graph = UnGraph::<(), u64>::with_capacity(g.num_nodes, g.edges.len());
    let nodes: Vec<_> = (0..g.num_nodes).map(|_| graph.add_node(())).collect();
    for &(a, b, w) in &g.edges {
        graph.add_edge(nodes[a], nodes[b], w);
    }
    let offset = g.edges.iter().map(|e| e.2).max().unwrap_or(0) as i128 + 1;
    let matching = max_weight_matching(
        &graph,
        true,
        |e| Ok::<i128, Infallible>(offset - *e.weight() as i128),
        false,
    )
    .unwrap_or_else(|never| match never {});
    let mut pairs: Vec<(usize, usize)> = matching.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    if 2 * pairs.len() != g.num_nodes {
        return Err(Error::Numerical(format!(
            "no perfect matching on {} nodes",
            g.num_nodes
        )));
    }
    pairs.sort_unstable();
    Ok(pairs)
}

/// Total weight of a matching in `g`.
pub fn matching_weight(g: &DefectGraph, pairs: &[(usize, usize)]) -> Option<u64> {
    pairs.iter().map(|&(a, b)| g.weight(a, b)).sum()
}

/// Staircase path: along the row of `a` first, then along the column of `b`.
fn pair_path(lat: &SurfaceCode, side: Side, a: (usize, usize), b: (usize, usize)) -> Vec<usize> {
    let (lo_c, hi_c) = (a.1.min(b.1), a.1.max(b.1));
    let (lo_r, hi_r) = (a.0.min(b.0), a.0.max(b.0));
    let mut path = Vec::new();
    match side {
        Side::XErrors => {
            path.extend((lo_c + 1..=hi_c).map(|c| lat.horizontal_edge(a.0, c)));
            path.extend((lo_r..hi_r).map(|r| lat.vertical_edge(r, b.1)));
        }
        Side::ZErrors => {
            path.extend((lo_c..hi_c).map(|c| lat.vertical_edge(a.0, c)));
            path.extend((lo_r + 1..=hi_r).map(|r| lat.horizontal_edge(r, b.1)));
        }
    }
    path
}

fn boundary_path(lat: &SurfaceCode, side: Side, p: (usize, usize)) -> Vec<usize> {
    let d = lat.distance();
    let (which, _) = nearest_boundary(d, side, p);
    match (side, which) {
        (Side::XErrors, Boundary::Near) => (0..=p.1).map(|c| lat.horizontal_edge(p.0, c)).collect(),
        (Side::XErrors, Boundary::Far) => (p.1 + 1..d).map(|c| lat.horizontal_edge(p.0, c)).collect(),
        (Side::ZErrors, Boundary::Near) => (0..=p.0).map(|r| lat.horizontal_edge(r, p.1)).collect(),
        (Side::ZErrors, Boundary::Far) => (p.0 + 1..d).map(|r| lat.horizontal_edge(r, p.1)).collect(),
    }
}

/// Qubits flipped by the matching of one side.
fn side_correction(lat: &SurfaceCode, s: &Syndrome, side: Side) -> Result<Vec<usize>> {
    let g = build_defect_graph(lat, s, side);
    let n = g.defects.len();
    let mut flips = vec![false; lat.num_qubits()];
    for (a, b) in min_weight_perfect_matching(&g)? {
        let path = if b < n {
            pair_path(lat, side, g.defects[a], g.defects[b])
        } else if a < n {
            boundary_path(lat, side, g.defects[a])
        } else {
            continue;
        };
        for e in path {
            flips[e] ^= true;
        }
    }
    Ok((0..flips.len()).filter(|&e| flips[e]).collect())
}

/// Correction from independent X- and Z-side matchings.
pub fn decode_mwm(lat: &SurfaceCode, s: &Syndrome) -> Result<PauliOperator> {
    let n = lat.num_qubits();
    let mut correction = PauliOperator::x_on(n, side_correction(lat, s, Side::XErrors)?);
    correction.mul_assign(&PauliOperator::z_on(n, side_correction(lat, s, Side::ZErrors)?))?;
    Ok(correction)
}

#[derive(Clone, Debug)]
pub struct MwmDecoder {
    lattice: SurfaceCode,
}

impl MwmDecoder {
    pub fn new(lattice: SurfaceCode) -> Self {
        Self { lattice }
    }
}

impl Decoder for MwmDecoder {
    fn name(&self) -> &'static str {
        "mwm"
    }

    fn lattice(&self) -> &SurfaceCode {
        &self.lattice
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<Decision> {
        let correction = decode_mwm(&self.lattice, syndrome)?;
        let f = self.lattice.canonical_error(syndrome)?;
        let class = self.lattice.classify_residual(&f.multiply(&correction)?)?;
        Ok(Decision { class, correction })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LogicalClass;
    use crate::noise::NoiseModel;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::VecDeque;

    /// Minimum over all ways to pair defects or send them to the boundary.
    fn brute_force(dist: &dyn Fn(usize, usize) -> u64, bdist: &[u64], left: &mut Vec<usize>) -> u64 {
        let Some(first) = left.pop() else {
            return 0;
        };
        let mut best = bdist[first] + brute_force(dist, bdist, left);
        for k in 0..left.len() {
            let other = left.remove(k);
            best = best.min(dist(first, other) + brute_force(dist, bdist, left));
            left.insert(k, other);
        }
        left.push(first);
        best
    }

    /// BFS distances from one check to every other check and to the
    /// boundary, on the graph where checks sharing a qubit are adjacent and
    /// qubits in a single check lead to the boundary.
    fn bfs(checks: &[Vec<usize>], num_qubits: usize, start: usize) -> (Vec<u64>, u64) {
        let mut owners = vec![Vec::new(); num_qubits];
        for (c, support) in checks.iter().enumerate() {
            for &q in support {
                owners[q].push(c);
            }
        }
        let boundary = checks.len();
        let mut dist = vec![u64::MAX; boundary + 1];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            if c == boundary {
                continue;
            }
            for &q in &checks[c] {
                let next = if owners[q].len() == 1 {
                    boundary
                } else {
                    owners[q][0] + owners[q][1] - c
                };
                if dist[next] == u64::MAX {
                    dist[next] = dist[c] + 1;
                    queue.push_back(next);
                }
            }
        }
        let b = dist[boundary];
        dist.truncate(boundary);
        (dist, b)
    }

    fn random_syndrome(lat: &SurfaceCode, rng: &mut ChaCha8Rng, p: f64) -> Syndrome {
        let mut s = Syndrome::zeros(lat.distance());
        s.site_bits.iter_mut().for_each(|b| *b = rng.random_bool(p));
        s.plaquette_bits.iter_mut().for_each(|b| *b = rng.random_bool(p));
        s
    }

    #[test]
    fn graph_examples() {
        let lat = SurfaceCode::new(5).unwrap();
        let g = build_defect_graph(&lat, &Syndrome::zeros(5), Side::XErrors);
        assert!(g.is_empty());
        assert!(min_weight_perfect_matching(&g).unwrap().is_empty());

        let mut s = Syndrome::zeros(5);
        s.site_bits[lat.site_index(2, 1)] = true;
        s.site_bits[lat.site_index(2, 2)] = true;
        let g = build_defect_graph(&lat, &s, Side::XErrors);
        assert_eq!(g.num_nodes(), 4);
        assert_eq!(g.weight(0, 1), Some(1));
        assert_eq!(g.weight(2, 3), Some(0));
        assert_eq!(g.weight(0, 2), Some(2));
        assert_eq!(g.weight(1, 3), Some(2));
    }

    #[test]
    fn weights_agree_with_bfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for d in [3, 5, 7] {
            let lat = SurfaceCode::new(d).unwrap();
            for side in [Side::XErrors, Side::ZErrors] {
                let (checks, coords): (&[Vec<usize>], Box<dyn Fn(usize) -> (usize, usize)>) = match side {
                    Side::XErrors => (lat.site_stabilizers(), Box::new(|k| lat.site_coords(k))),
                    Side::ZErrors => (lat.plaquette_stabilizers(), Box::new(|k| lat.plaquette_coords(k))),
                };
                for start in 0..checks.len() {
                    let (dist, b) = bfs(checks, lat.num_qubits(), start);
                    assert_eq!(boundary_distance(d, side, coords(start)), b);
                    for (other, &want) in dist.iter().enumerate() {
                        assert_eq!(defect_distance(coords(start), coords(other)), want);
                    }
                }
                // Triangle inequality on random defect sets, boundary included.
                let s = random_syndrome(&lat, &mut rng, 0.4);
                let g = build_defect_graph(&lat, &s, side);
                let n = g.defects.len();
                let w = |i: usize, j: usize| {
                    if i == n && j == n {
                        0
                    } else if i == n {
                        boundary_distance(d, side, g.defects[j])
                    } else if j == n {
                        boundary_distance(d, side, g.defects[i])
                    } else {
                        defect_distance(g.defects[i], g.defects[j])
                    }
                };
                // The merged boundary is an endpoint, never a shortcut.
                for i in 0..=n {
                    for j in 0..=n {
                        assert_eq!(w(i, j), w(j, i));
                        if j == n {
                            continue;
                        }
                        for k in 0..=n {
                            assert!(w(i, k) <= w(i, j) + w(j, k));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn matching_examples() {
        let two = DefectGraph::from_edges(Side::XErrors, 2, vec![(0, 1, 7)]);
        assert_eq!(min_weight_perfect_matching(&two).unwrap(), vec![(0, 1)]);
        let odd = DefectGraph::from_edges(Side::XErrors, 3, vec![(0, 1, 1), (1, 2, 1)]);
        assert!(matches!(min_weight_perfect_matching(&odd), Err(Error::OddNodeCount(3))));

        // Two defects far apart, each next to a boundary: both go to the
        // boundary rather than to each other.
        let lat = SurfaceCode::new(9).unwrap();
        let mut s = Syndrome::zeros(9);
        s.site_bits[lat.site_index(0, 0)] = true;
        s.site_bits[lat.site_index(8, 7)] = true;
        let g = build_defect_graph(&lat, &s, Side::XErrors);
        let m = min_weight_perfect_matching(&g).unwrap();
        assert_eq!(m, vec![(0, 2), (1, 3)]);
        assert_eq!(matching_weight(&g, &m), Some(2));
    }

    #[test]
    fn matching_is_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let lat = SurfaceCode::new(7).unwrap();
        let mut checked = 0;
        while checked < 150 {
            let s = random_syndrome(&lat, &mut rng, 0.2);
            for side in [Side::XErrors, Side::ZErrors] {
                let g = build_defect_graph(&lat, &s, side);
                let n = g.defects.len();
                if n > 10 {
                    continue;
                }
                let m = min_weight_perfect_matching(&g).unwrap();
                let bdist: Vec<u64> = g.defects.iter().map(|&p| boundary_distance(7, side, p)).collect();
                let dist = |i: usize, j: usize| defect_distance(g.defects[i], g.defects[j]);
                let want = brute_force(&dist, &bdist, &mut (0..n).collect());
                assert_eq!(matching_weight(&g, &m), Some(want));
                checked += 1;
            }
        }
    }

    #[test]
    fn corrections_reproduce_every_d3_syndrome() {
        let lat = SurfaceCode::new(3).unwrap();
        let dec = MwmDecoder::new(lat.clone());
        for k in 0..4096u64 {
            let s = Syndrome::from_index(3, k);
            let out = dec.decode(&s).unwrap();
            assert_eq!(lat.syndrome_of(&out.correction).unwrap(), s);
        }
    }

    #[test]
    fn single_errors_are_corrected() {
        let lat = SurfaceCode::new(5).unwrap();
        let dec = MwmDecoder::new(lat.clone());
        assert!(dec.decode(&Syndrome::zeros(5)).unwrap().correction.is_identity());
        for q in 0..lat.num_qubits() {
            for e in [PauliOperator::x_on(41, [q]), PauliOperator::z_on(41, [q])] {
                let s = lat.syndrome_of(&e).unwrap();
                let out = dec.decode(&s).unwrap();
                assert!(out.correction.weight() <= 2);
                let residual = e.multiply(&out.correction).unwrap();
                assert_eq!(lat.classify_residual(&residual).unwrap(), LogicalClass::I);
            }
        }
    }

    #[test]
    fn corrections_match_random_syndromes() {
        let lat = SurfaceCode::new(9).unwrap();
        let noise = NoiseModel::depolarizing(0.12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let e = noise.sample_error(lat.num_qubits(), &mut rng);
            let s = lat.syndrome_of(&e).unwrap();
            assert_eq!(lat.syndrome_of(&decode_mwm(&lat, &s).unwrap()).unwrap(), s);
        }
    }
}
