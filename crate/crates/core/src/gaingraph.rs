//! Γ-labeled (gain) graphs with Γ ≅ Z^k, k ∈ {0,1,2}.
//!
//! Edges carry a group label that is negated when the edge is traversed
//! against its stored direction. Graphs are loopless and semi-simple: two
//! edges are identical when they coincide up to simultaneous reversal and
//! negation, and identical duplicates are rejected at insertion.

use std::collections::{BTreeSet, HashSet};
use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(Vertex),
    #[error("identical edge already present between {0} and {1}")]
    IdenticalEdge(Vertex, Vertex),
    #[error("gain has length {got}, graph has k = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("invalid walk: edge {edge} does not continue from vertex {at}")]
    InvalidWalk { at: Vertex, edge: EdgeId },
    #[error("edge id {0} is not an edge of this graph")]
    UnknownEdge(EdgeId),
}

/// An element of Z^k attached to a directed edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GainVec {
    coords: Vec<i64>,
}

impl GainVec {
    pub fn new(coords: Vec<i64>) -> Self {
        GainVec { coords }
    }

    pub fn zero(k: usize) -> Self {
        GainVec { coords: vec![0; k] }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn neg(&self) -> Self {
        GainVec {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        GainVec {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl From<Vec<i64>> for GainVec {
    fn from(coords: Vec<i64>) -> Self {
        GainVec { coords }
    }
}

/// An edge stored in canonical form: `tail < head`. Reversing the direction
/// negates the gain, so `(tail, head, gain)` is a unique key per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: Vertex,
    pub head: Vertex,
    pub gain: GainVec,
}

impl Edge {
    /// Gain of the edge as seen when leaving `from`.
    pub fn gain_from(&self, from: Vertex) -> GainVec {
        if from == self.tail {
            self.gain.clone()
        } else {
            self.gain.neg()
        }
    }

    pub fn other(&self, v: Vertex) -> Vertex {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }

    pub fn is_incident(&self, v: Vertex) -> bool {
        self.tail == v || self.head == v
    }
}

/// A finite loopless semi-simple Γ-labeled multigraph, the quotient (G, ψ).
///
/// Immutable after construction: `add_edge` and `switch` return new values.
#[derive(Debug, Clone)]
pub struct GainGraph {
    k: usize,
    n: usize,
    edges: Vec<Edge>,
    keys: HashSet<(Vertex, Vertex, Vec<i64>)>,
    adj: Vec<Vec<EdgeId>>,
}

impl GainGraph {
    pub fn new(k: usize, vertex_count: usize) -> Self {
        assert!(k <= 2, "gain rank k must be 0, 1 or 2");
        GainGraph {
            k,
            n: vertex_count,
            edges: Vec::new(),
            keys: HashSet::new(),
            adj: vec![Vec::new(); vertex_count],
        }
    }

    /// Builds a graph from `(tail, head, gain)` triples, failing on the first
    /// invalid edge.
    pub fn from_edges<I>(k: usize, vertex_count: usize, triples: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Vec<i64>)>,
    {
        let mut g = GainGraph::new(k, vertex_count);
        for (t, h, gain) in triples {
            g.push_edge(t, h, GainVec::new(gain))?;
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, GraphError> {
        self.edges.get(id).ok_or(GraphError::UnknownEdge(id))
    }

    /// Incident edge ids of `v`.
    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    fn canonical(tail: Vertex, head: Vertex, gain: GainVec) -> (Vertex, Vertex, GainVec) {
        if tail <= head {
            (tail, head, gain)
        } else {
            (head, tail, gain.neg())
        }
    }

    fn push_edge(&mut self, tail: Vertex, head: Vertex, gain: GainVec) -> Result<EdgeId, GraphError> {
        if tail >= self.n {
            return Err(GraphError::UnknownVertex(tail));
        }
        if head >= self.n {
            return Err(GraphError::UnknownVertex(head));
        }
        if tail == head {
            return Err(GraphError::LoopEdge(tail));
        }
        if gain.len() != self.k {
            return Err(GraphError::DimensionMismatch {
                expected: self.k,
                got: gain.len(),
            });
        }
        let (t, h, g) = Self::canonical(tail, head, gain);
        let key = (t, h, g.coords().to_vec());
        if !self.keys.insert(key) {
            return Err(GraphError::IdenticalEdge(t, h));
        }
        let id = self.edges.len();
        self.edges.push(Edge {
            id,
            tail: t,
            head: h,
            gain: g,
        });
        self.adj[t].push(id);
        self.adj[h].push(id);
        Ok(id)
    }

    /// Returns a new graph with the edge added under canonical-key
    /// normalization.
    pub fn add_edge(&self, tail: Vertex, head: Vertex, gain: GainVec) -> Result<Self, GraphError> {
        let mut g = self.clone();
        g.push_edge(tail, head, gain)?;
        Ok(g)
    }

    /// Whether an edge identical to `(tail, head, gain)` is present.
    pub fn has_identical(&self, tail: Vertex, head: Vertex, gain: &GainVec) -> bool {
        let (t, h, g) = Self::canonical(tail, head, gain.clone());
        self.keys.contains(&(t, h, g.coords().to_vec()))
    }

    /// Signed gain of a walk given as a start vertex and a sequence of edge
    /// ids; each edge must join the current vertex to the next one.
    pub fn walk_gain(&self, start: Vertex, walk: &[EdgeId]) -> Result<GainVec, GraphError> {
        if start >= self.n {
            return Err(GraphError::UnknownVertex(start));
        }
        let mut at = start;
        let mut total = GainVec::zero(self.k);
        for &eid in walk {
            let e = self.edge(eid)?;
            if !e.is_incident(at) {
                return Err(GraphError::InvalidWalk { at, edge: eid });
            }
            total = total.add(&e.gain_from(at));
            at = e.other(at);
        }
        Ok(total)
    }

    /// Switching at `v` by `gamma`: edges leaving `v` gain `+gamma`, edges
    /// entering `v` gain `-gamma`. Closed-walk gains are preserved.
    pub fn switch(&self, v: Vertex, gamma: &GainVec) -> Result<Self, GraphError> {
        if v >= self.n {
            return Err(GraphError::UnknownVertex(v));
        }
        if gamma.len() != self.k {
            return Err(GraphError::DimensionMismatch {
                expected: self.k,
                got: gamma.len(),
            });
        }
        let mut g = GainGraph::new(self.k, self.n);
        for e in &self.edges {
            let gain = if e.tail == v {
                e.gain.add(gamma)
            } else if e.head == v {
                e.gain.sub(gamma)
            } else {
                e.gain.clone()
            };
            g.push_edge(e.tail, e.head, gain)
                .expect("switching preserves semi-simplicity");
        }
        Ok(g)
    }

    /// Validates that `f` only refers to edges of this graph.
    pub fn check_edge_set(&self, f: &EdgeSet) -> Result<(), GraphError> {
        match f.iter().find(|&&id| id >= self.edges.len()) {
            Some(&id) => Err(GraphError::UnknownEdge(id)),
            None => Ok(()),
        }
    }

    /// Rank of the subgroup of Γ generated by the closed-walk gains of `f`:
    /// per connected component, the fundamental-cycle gains of the non-tree
    /// edges are stacked as integer rows and their exact rank is returned.
    pub fn gain_subgroup_rank(&self, f: &EdgeSet) -> Result<usize, GraphError> {
        self.check_edge_set(f)?;
        if self.k == 0 {
            return Ok(0);
        }
        let mut rows = Vec::new();
        let mut potential: Vec<Option<GainVec>> = vec![None; self.n];
        let member: BTreeSet<EdgeId> = f.iter().copied().collect();
        let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); self.n];
        for &eid in &member {
            let e = &self.edges[eid];
            adj[e.tail].push(eid);
            adj[e.head].push(eid);
        }
        for &eid in &member {
            let root = self.edges[eid].tail;
            if potential[root].is_some() {
                continue;
            }
            // BFS spanning tree assigning each vertex a potential; a non-tree
            // edge (t, h, g) contributes the cycle gain w(t) + g - w(h).
            potential[root] = Some(GainVec::zero(self.k));
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                let wx = potential[x].clone().unwrap();
                for &fid in &adj[x] {
                    let e = &self.edges[fid];
                    let y = e.other(x);
                    match &potential[y] {
                        None => {
                            potential[y] = Some(wx.add(&e.gain_from(x)));
                            queue.push_back(y);
                        }
                        Some(wy) => {
                            let cycle = wx.add(&e.gain_from(x)).sub(wy);
                            if !cycle.is_zero() {
                                rows.push(cycle.coords().iter().map(|&c| c as i128).collect());
                            }
                        }
                    }
                }
            }
        }
        Ok(int_rank(rows, self.k))
    }

    /// True iff every closed walk in `f` has zero gain.
    pub fn is_balanced(&self, f: &EdgeSet) -> Result<bool, GraphError> {
        Ok(self.gain_subgroup_rank(f)? == 0)
    }

    /// Full edge set of the graph.
    pub fn full_edge_set(&self) -> EdgeSet {
        EdgeSet::from_iter(0..self.edges.len())
    }
}

/// A subset of edge ids of a specific graph, the universe for matroid and
/// balance queries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeSet {
    members: BTreeSet<EdgeId>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet::default()
    }

    pub fn from_iter<I: IntoIterator<Item = EdgeId>>(ids: I) -> Self {
        EdgeSet {
            members: ids.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, id: EdgeId) -> bool {
        self.members.insert(id)
    }

    pub fn remove(&mut self, id: EdgeId) -> bool {
        self.members.remove(&id)
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.members.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EdgeId> {
        self.members.iter()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet {
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn without(&self, id: EdgeId) -> EdgeSet {
        let mut s = self.clone();
        s.remove(id);
        s
    }

    pub fn with(&self, id: EdgeId) -> EdgeSet {
        let mut s = self.clone();
        s.insert(id);
        s
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Vertices incident to the member edges.
    pub fn vertex_support(&self, g: &GainGraph) -> BTreeSet<Vertex> {
        let mut vs = BTreeSet::new();
        for &eid in &self.members {
            let e = &g.edges()[eid];
            vs.insert(e.tail);
            vs.insert(e.head);
        }
        vs
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(ids: I) -> Self {
        EdgeSet::from_iter(ids)
    }
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
/// Row entries fit 64 bits; intermediates use 128 bits.
pub(crate) fn int_rank(mut rows: Vec<Vec<i128>>, width: usize) -> usize {
    let mut rank = 0;
    let mut prev_pivot: i128 = 1;
    for col in 0..width {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col];
        for r in rank + 1..rows.len() {
            for c in col + 1..width {
                rows[r][c] = (rows[r][c] * pivot - rows[rank][c] * rows[r][col]) / prev_pivot;
            }
            rows[r][col] = 0;
        }
        prev_pivot = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gv(coords: &[i64]) -> GainVec {
        GainVec::new(coords.to_vec())
    }

    /// Fig 1(b): vertices a=0, b=1, c=2 over Z^2.
    fn fig1b() -> GainGraph {
        GainGraph::from_edges(
            2,
            3,
            vec![
                (0, 1, vec![0, 0]), // a -> b
                (0, 2, vec![0, 0]), // a -> c
                (1, 0, vec![1, 1]), // b -> a
                (1, 2, vec![1, 1]), // b -> c
            ],
        )
        .unwrap()
    }

    /// Fig 1(d): same vertices, labels (0,0), (0,0), (0,2), (1,1).
    fn fig1d() -> GainGraph {
        GainGraph::from_edges(
            2,
            3,
            vec![
                (0, 1, vec![0, 0]),
                (0, 2, vec![0, 0]),
                (1, 0, vec![0, 2]),
                (1, 2, vec![1, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn add_edge_rejects_reversal_duplicate() {
        let g = GainGraph::from_edges(1, 2, vec![(1, 0, vec![-1])]).unwrap();
        let err = g.add_edge(0, 1, gv(&[1])).unwrap_err();
        assert_eq!(err, GraphError::IdenticalEdge(0, 1));
    }

    #[test]
    fn add_edge_accepts_parallel_with_distinct_gain() {
        let g = GainGraph::from_edges(1, 2, vec![(0, 1, vec![0])]).unwrap();
        let g = g.add_edge(0, 1, gv(&[1])).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn add_edge_rejects_loop() {
        let g = GainGraph::new(2, 1);
        assert_eq!(g.add_edge(0, 0, gv(&[0, 0])).unwrap_err(), GraphError::LoopEdge(0));
    }

    #[test]
    fn walk_gain_fig1b_digon() {
        let g = fig1b();
        // a -> b via edge 0, b -> a via the (1,1)-labeled edge 2.
        assert_eq!(g.walk_gain(0, &[0, 2]).unwrap(), gv(&[1, 1]));
        assert_eq!(g.walk_gain(0, &[]).unwrap(), gv(&[0, 0]));
    }

    #[test]
    fn walk_gain_fig1d_triangle() {
        let g = fig1d();
        // a -> b (0,0), b -> c (1,1), c -> a -(0,0).
        assert_eq!(g.walk_gain(0, &[0, 3, 1]).unwrap(), gv(&[1, 1]));
    }

    #[test]
    fn walk_gain_reversal_negates() {
        let g = fig1d();
        let fwd = g.walk_gain(0, &[0, 3]).unwrap();
        let back = g.walk_gain(2, &[3, 0]).unwrap();
        assert_eq!(back, fwd.neg());
    }

    #[test]
    fn walk_gain_rejects_disconnected_step() {
        let g = fig1b();
        // Edge 3 joins b and c; cannot leave from a.
        assert!(matches!(
            g.walk_gain(0, &[3]),
            Err(GraphError::InvalidWalk { at: 0, edge: 3 })
        ));
    }

    #[test]
    fn subgroup_rank_fig1_captions() {
        let b = fig1b();
        let d = fig1d();
        assert_eq!(b.gain_subgroup_rank(&b.full_edge_set()).unwrap(), 1);
        assert_eq!(d.gain_subgroup_rank(&d.full_edge_set()).unwrap(), 2);
    }

    #[test]
    fn subgroup_rank_spanning_tree_is_zero() {
        let g = fig1d();
        // Edges 0 and 3 form a spanning tree of {a, b, c}.
        let tree = EdgeSet::from_iter([0, 3]);
        assert_eq!(g.gain_subgroup_rank(&tree).unwrap(), 0);
        assert!(g.is_balanced(&tree).unwrap());
    }

    #[test]
    fn balance_examples() {
        let tri = GainGraph::from_edges(
            1,
            3,
            vec![(0, 1, vec![0]), (1, 2, vec![0]), (0, 2, vec![0])],
        )
        .unwrap();
        assert!(tri.is_balanced(&tri.full_edge_set()).unwrap());

        let digon = GainGraph::from_edges(1, 2, vec![(0, 1, vec![0]), (0, 1, vec![1])]).unwrap();
        assert!(!digon.is_balanced(&digon.full_edge_set()).unwrap());
    }

    #[test]
    fn switch_identity_and_closed_walk_invariance() {
        let g = fig1b();
        let same = g.switch(1, &gv(&[0, 0])).unwrap();
        assert_eq!(g.edges(), same.edges());

        let switched = g.switch(1, &gv(&[1, 1])).unwrap();
        // Closed walk around the a-b digon keeps its gain.
        let before = g.walk_gain(0, &[0, 2]).unwrap();
        let after = switched.walk_gain(0, &[0, 2]).unwrap();
        assert_eq!(before, after);
        assert_eq!(
            g.gain_subgroup_rank(&g.full_edge_set()).unwrap(),
            switched.gain_subgroup_rank(&switched.full_edge_set()).unwrap()
        );
    }

    #[test]
    fn switch_unknown_vertex() {
        let g = fig1b();
        assert_eq!(
            g.switch(7, &gv(&[0, 0])).unwrap_err(),
            GraphError::UnknownVertex(7)
        );
    }

    #[test]
    fn rank_monotone_under_subsets() {
        let g = fig1d();
        let full = g.full_edge_set();
        let full_rank = g.gain_subgroup_rank(&full).unwrap();
        for &id in full.iter() {
            let sub = full.without(id);
            assert!(g.gain_subgroup_rank(&sub).unwrap() <= full_rank);
        }
    }

    #[test]
    fn k0_graphs_are_always_balanced() {
        let g = GainGraph::from_edges(
            0,
            3,
            vec![(0, 1, vec![]), (1, 2, vec![]), (0, 2, vec![])],
        )
        .unwrap();
        assert!(g.is_balanced(&g.full_edge_set()).unwrap());
    }
}
