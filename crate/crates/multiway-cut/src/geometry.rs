//! Simplex geometry: the shared vocabulary of every other module.
//!
//! Vertices of a graph are embedded in the unit simplex of dimension `k`
//! (the number of terminals). Terminal indices are 0-based everywhere in
//! memory; file formats and CLI output are 1-based.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Tolerance for simplex membership after construction.
pub const SIMPLEX_TOL: f64 = 1e-12;
/// Inputs whose coordinate sum is this close to 1 are re-normalized
/// (LP solutions carry solver noise); anything further off is rejected.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// A point of the unit simplex: `k` nonnegative coordinates summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    /// Build a point from raw coordinates. Coordinates in [-1e-9, 0) are
    /// clamped to 0 and the vector is re-normalized when its sum is within
    /// [`RENORMALIZE_TOL`] of 1; anything further off is rejected.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidSimplexPoint(format!(
                "need k >= 2 coordinates, got {}",
                coords.len()
            )));
        }
        let mut coords = coords;
        for c in coords.iter_mut() {
            if !c.is_finite() {
                return Err(Error::InvalidSimplexPoint("non-finite coordinate".into()));
            }
            if *c < 0.0 {
                if *c < -RENORMALIZE_TOL {
                    return Err(Error::InvalidSimplexPoint(format!(
                        "negative coordinate {c}"
                    )));
                }
                *c = 0.0;
            }
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::InvalidSimplexPoint(format!(
                "coordinates sum to {sum}, not 1"
            )));
        }
        if sum != 1.0 {
            for c in coords.iter_mut() {
                *c /= sum;
            }
        }
        Ok(SimplexPoint { coords })
    }

    /// The unit basis vector for terminal `index`.
    pub fn basis(k: usize, index: usize) -> Self {
        assert!(index < k, "basis index out of range");
        let mut coords = vec![0.0; k];
        coords[index] = 1.0;
        SimplexPoint { coords }
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }

    /// Half the L1 distance to `other` (the CKR edge length).
    pub fn half_l1_distance(&self, other: &SimplexPoint) -> f64 {
        assert_eq!(self.k(), other.k());
        0.5 * self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

/// The adversary's canonical placement: coordinates `(u1, u2)` for the two
/// named terminals and the leftover mass spread evenly over the remaining
/// `k - 2` coordinates.
pub fn worst_case_location(u1: f64, u2: f64, k: usize) -> Result<SimplexPoint> {
    if k < 3 {
        return Err(Error::Domain(format!(
            "worst_case_location needs k >= 3, got {k}"
        )));
    }
    if u1 < 0.0 || u2 < 0.0 {
        return Err(Error::Domain(format!(
            "coordinates must be nonnegative, got ({u1}, {u2})"
        )));
    }
    if u1 + u2 > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "u1 + u2 = {} exceeds 1",
            u1 + u2
        )));
    }
    let rest = ((1.0 - u1 - u2) / (k - 2) as f64).max(0.0);
    let mut coords = vec![rest; k];
    coords[0] = u1;
    coords[1] = u2;
    SimplexPoint::new(coords)
}

/// An infinitesimal edge of type `(i, j)`: its second endpoint adds
/// `epsilon` to coordinate `i` and removes it from coordinate `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub location: SimplexPoint,
    pub i: usize,
    pub j: usize,
    pub epsilon: f64,
}

impl EdgeSpec {
    pub fn new(location: SimplexPoint, i: usize, j: usize, epsilon: f64) -> Result<Self> {
        let k = location.k();
        if i >= k || j >= k || i == j {
            return Err(Error::InvalidEdge(format!(
                "coordinate pair ({i}, {j}) invalid for k = {k}"
            )));
        }
        if !(epsilon > 0.0) {
            return Err(Error::InvalidEdge(format!("epsilon {epsilon} must be > 0")));
        }
        if location.coord(i) + epsilon > 1.0 + SIMPLEX_TOL {
            return Err(Error::InvalidEdge(format!(
                "coordinate {i} + epsilon = {} exceeds 1",
                location.coord(i) + epsilon
            )));
        }
        if location.coord(j) - epsilon < -SIMPLEX_TOL {
            return Err(Error::InvalidEdge(format!(
                "coordinate {j} - epsilon = {} is negative",
                location.coord(j) - epsilon
            )));
        }
        Ok(EdgeSpec {
            location,
            i,
            j,
            epsilon,
        })
    }

    /// The implied second endpoint, also a valid simplex point.
    pub fn second_endpoint(&self) -> SimplexPoint {
        let mut coords = self.location.coords().to_vec();
        coords[self.i] += self.epsilon;
        coords[self.j] = (coords[self.j] - self.epsilon).max(0.0);
        SimplexPoint::new(coords).expect("validated at construction")
    }
}

/// A fractional LP solution: one simplex point per vertex, with the
/// terminals pinned at the simplex corners. Vertex ids are 0..n-1.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalEmbedding {
    points: Vec<SimplexPoint>,
    terminals: Vec<usize>,
}

impl FractionalEmbedding {
    /// Validates that terminal `t` at position `s` sits at the basis vector
    /// `1_s` within 1e-9, then snaps it there exactly.
    pub fn new(points: Vec<SimplexPoint>, terminals: Vec<usize>) -> Result<Self> {
        let k = terminals.len();
        if k < 2 {
            return Err(Error::InvalidEmbedding(format!("need k >= 2, got {k}")));
        }
        let n = points.len();
        let mut seen = vec![false; n];
        for &t in &terminals {
            if t >= n {
                return Err(Error::InvalidEmbedding(format!(
                    "terminal id {t} out of range (n = {n})"
                )));
            }
            if seen[t] {
                return Err(Error::InvalidEmbedding(format!("duplicate terminal {t}")));
            }
            seen[t] = true;
        }
        let mut points = points;
        for p in &points {
            if p.k() != k {
                return Err(Error::InvalidEmbedding(format!(
                    "point dimension {} != k = {k}",
                    p.k()
                )));
            }
        }
        for (s, &t) in terminals.iter().enumerate() {
            let basis = SimplexPoint::basis(k, s);
            let dev = points[t]
                .coords()
                .iter()
                .zip(basis.coords())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if dev > 1e-9 {
                return Err(Error::InvalidEmbedding(format!(
                    "terminal {t} deviates from basis vector {s} by {dev:.3e}"
                )));
            }
            points[t] = basis;
        }
        Ok(FractionalEmbedding { points, terminals })
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, v: usize) -> &SimplexPoint {
        &self.points[v]
    }

    pub fn points(&self) -> &[SimplexPoint] {
        &self.points
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    /// Position of vertex `v` in the terminal list, if it is a terminal.
    pub fn terminal_index(&self, v: usize) -> Option<usize> {
        self.terminals.iter().position(|&t| t == v)
    }
}

/// An assignment of every vertex to a terminal index in 0..k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    assignment: Vec<usize>,
}

impl Labeling {
    pub fn new(assignment: Vec<usize>) -> Self {
        Labeling { assignment }
    }

    pub fn label(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.assignment
    }

    /// True when every terminal carries its own index.
    pub fn separates_terminals(&self, emb: &FractionalEmbedding) -> bool {
        emb.terminals()
            .iter()
            .enumerate()
            .all(|(s, &t)| self.assignment.get(t) == Some(&s))
    }
}

/// A weighted undirected graph with distinguished terminals.
///
/// Graphs are simple: parallel edges (in either orientation) are merged by
/// weight addition at construction, self-loops are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    pub n: usize,
    edges: Vec<(usize, usize, f64)>,
    terminals: Vec<usize>,
}

impl WeightedGraph {
    pub fn new(
        n: usize,
        raw_edges: Vec<(usize, usize, f64)>,
        terminals: Vec<usize>,
    ) -> Result<Self> {
        let k = terminals.len();
        if k < 2 || k > n {
            return Err(Error::InvalidGraph(format!(
                "need 2 <= k <= n, got k = {k}, n = {n}"
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &t in &terminals {
            if t >= n {
                return Err(Error::InvalidGraph(format!("terminal {t} out of range")));
            }
            if !seen.insert(t) {
                return Err(Error::InvalidGraph(format!("duplicate terminal {t}")));
            }
        }
        let mut merged: std::collections::BTreeMap<(usize, usize), f64> =
            std::collections::BTreeMap::new();
        for (u, v, w) in raw_edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range (n = {n})"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            let key = (u.min(v), u.max(v));
            *merged.entry(key).or_insert(0.0) += w;
        }
        let edges = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        Ok(WeightedGraph {
            n,
            edges,
            terminals,
        })
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }
}

/// Total weight of edges whose endpoints carry different labels.
pub fn cut_weight(graph: &WeightedGraph, labeling: &Labeling) -> Result<f64> {
    for v in 0..graph.n {
        if v >= labeling.len() {
            return Err(Error::MissingLabel { vertex: v });
        }
    }
    Ok(graph
        .edges()
        .iter()
        .filter(|(u, v, _)| labeling.label(*u) != labeling.label(*v))
        .map(|(_, _, w)| w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_case_location_examples() {
        let p = worst_case_location(0.3, 0.2, 4).unwrap();
        assert_eq!(p.coords(), &[0.3, 0.2, 0.25, 0.25]);

        let p = worst_case_location(0.5, 0.5, 5).unwrap();
        assert_eq!(p.coords(), &[0.5, 0.5, 0.0, 0.0, 0.0]);

        let p = worst_case_location(0.0, 0.0, 3).unwrap();
        assert_eq!(p.coords(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn worst_case_location_rejects_bad_input() {
        assert!(worst_case_location(0.1, 0.1, 2).is_err());
        assert!(worst_case_location(0.7, 0.4, 5).is_err());
        assert!(worst_case_location(-0.1, 0.2, 4).is_err());
    }

    #[test]
    fn worst_case_location_swap_covariant() {
        let p = worst_case_location(0.3, 0.1, 6).unwrap();
        let q = worst_case_location(0.1, 0.3, 6).unwrap();
        assert_eq!(p.coord(0), q.coord(1));
        assert_eq!(p.coord(1), q.coord(0));
        assert_eq!(p.coords()[2..], q.coords()[2..]);
    }

    #[test]
    fn simplex_point_renormalizes_solver_noise() {
        let p = SimplexPoint::new(vec![0.5 + 3e-10, 0.5 - 1e-10, -2e-10]).unwrap();
        let sum: f64 = p.coords().iter().sum();
        assert!((sum - 1.0).abs() <= SIMPLEX_TOL);
        assert!(p.coords().iter().all(|&c| c >= 0.0));
        assert!(SimplexPoint::new(vec![0.5, 0.4]).is_err());
        assert!(SimplexPoint::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn edge_spec_endpoints_stay_in_simplex() {
        let loc = worst_case_location(0.3, 0.2, 4).unwrap();
        let e = EdgeSpec::new(loc, 0, 1, 1e-3).unwrap();
        let q = e.second_endpoint();
        assert!((q.coord(0) - 0.301).abs() < 1e-15);
        assert!((q.coord(1) - 0.199).abs() < 1e-15);
        let sum: f64 = q.coords().iter().sum();
        assert!((sum - 1.0).abs() <= SIMPLEX_TOL);

        let loc = worst_case_location(0.3, 0.0, 4).unwrap();
        assert!(EdgeSpec::new(loc, 0, 1, 1e-3).is_err());
    }

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(
            3,
            vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)],
            vec![0, 1, 2],
        )
        .unwrap()
    }

    #[test]
    fn cut_weight_examples() {
        // Triangle on 3 terminals, everyone labeled with itself: all edges cut.
        let g = triangle();
        let l = Labeling::new(vec![0, 1, 2]);
        assert_eq!(cut_weight(&g, &l).unwrap(), 3.0);

        // 2-terminal path labeled all-0 except terminal 1: one boundary edge.
        let g = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)], vec![0, 2]).unwrap();
        let l = Labeling::new(vec![0, 0, 1]);
        assert_eq!(cut_weight(&g, &l).unwrap(), 1.0);

        // Star with fractional center labeled to terminal 0, unit weights, k=3.
        let g = WeightedGraph::new(
            4,
            vec![(3, 0, 1.0), (3, 1, 1.0), (3, 2, 1.0)],
            vec![0, 1, 2],
        )
        .unwrap();
        let l = Labeling::new(vec![0, 1, 2, 0]);
        assert_eq!(cut_weight(&g, &l).unwrap(), 2.0);
    }

    #[test]
    fn cut_weight_missing_label_names_vertex() {
        let g = triangle();
        let l = Labeling::new(vec![0, 1]);
        match cut_weight(&g, &l) {
            Err(Error::MissingLabel { vertex }) => assert_eq!(vertex, 2),
            other => panic!("expected MissingLabel, got {other:?}"),
        }
    }

    #[test]
    fn cut_weight_invariant_under_label_permutation() {
        let g = triangle();
        let l = Labeling::new(vec![0, 0, 1]);
        let perm = [2usize, 0, 1];
        let lp = Labeling::new(l.labels().iter().map(|&x| perm[x]).collect());
        assert_eq!(
            cut_weight(&g, &l).unwrap(),
            cut_weight(&g, &lp).unwrap()
        );
    }

    #[test]
    fn parallel_edges_merge_by_weight() {
        let g = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 0, 2.0), (1, 2, 1.0)], vec![0, 2])
            .unwrap();
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.edges()[0], (0, 1, 3.0));
    }

    #[test]
    fn embedding_snaps_terminals() {
        let pts = vec![
            SimplexPoint::new(vec![1.0 - 1e-10, 1e-10, 0.0]).unwrap(),
            SimplexPoint::basis(3, 1),
            SimplexPoint::basis(3, 2),
            SimplexPoint::new(vec![0.2, 0.3, 0.5]).unwrap(),
        ];
        let emb = FractionalEmbedding::new(pts, vec![0, 1, 2]).unwrap();
        assert_eq!(emb.point(0).coords(), &[1.0, 0.0, 0.0]);
        assert_eq!(emb.terminal_index(1), Some(1));
        assert_eq!(emb.terminal_index(3), None);
    }
}
