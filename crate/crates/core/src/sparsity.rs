//! The count matroid R₂(V, Γ): independence, rank, circuits and matroid
//! components, plus the rigidity predicates built from them.
//!
//! An edge set is independent when |F| ≤ 2|V(F)| − 3 for every nonempty
//! balanced F and |F| ≤ 2|V(F)| − 2 for every nonempty F. Independence is
//! decided by an incremental gain-aware pebble game; the balanced-count side
//! of an insertion is settled by a Laman-linkage test on a finite patch of
//! the covering graph (see `has_balanced_violation`).

use crate::gaingraph::{EdgeId, EdgeSet, GainGraph, GainVec, GraphError, Vertex};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SparsityError {
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("operation requires k {expected}, graph has k = {got}")]
    WrongPeriodicityRank { expected: &'static str, got: usize },
    #[error("at least two edges are required")]
    TooFewEdges,
    #[error("basis plus edge is independent; no circuit exists")]
    NotDependent,
}

/// A minimal dependent set of R₂.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub edges: EdgeSet,
}

/// The matroid components of the restriction of R₂ to E.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPartition {
    pub classes: Vec<EdgeSet>,
}

/// Pebble game state for one independence/rank computation.
///
/// Invariants: the accepted edge set is independent at all times and every
/// vertex holds 2 − outdeg(v) ≥ 0 pebbles.
struct PebbleGame<'g> {
    g: &'g GainGraph,
    pebbles: Vec<u8>,
    // out[v] lists accepted edges currently oriented away from v.
    out: Vec<Vec<(Vertex, EdgeId)>>,
    accepted: EdgeSet,
}

impl<'g> PebbleGame<'g> {
    fn new(g: &'g GainGraph) -> Self {
        PebbleGame {
            g,
            pebbles: vec![2; g.vertex_count()],
            out: vec![Vec::new(); g.vertex_count()],
            accepted: EdgeSet::new(),
        }
    }

    /// Moves one pebble to `start` along a reversed directed path, skipping
    /// pebbles held on the two insertion endpoints.
    fn find_pebble(&mut self, start: Vertex, forbid_a: Vertex, forbid_b: Vertex) -> bool {
        let n = self.g.vertex_count();
        let mut pred: Vec<Option<(Vertex, EdgeId)>> = vec![None; n];
        let mut visited = vec![false; n];
        visited[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            if x != start && x != forbid_a && x != forbid_b && self.pebbles[x] > 0 {
                // Reverse the path from start to x and move the pebble.
                self.pebbles[x] -= 1;
                self.pebbles[start] += 1;
                let mut at = x;
                while let Some((prev, eid)) = pred[at] {
                    let idx = self.out[prev].iter().position(|&(_, e)| e == eid).unwrap();
                    self.out[prev].swap_remove(idx);
                    self.out[at].push((prev, eid));
                    at = prev;
                }
                return true;
            }
            for i in 0..self.out[x].len() {
                let (y, eid) = self.out[x][i];
                if !visited[y] {
                    visited[y] = true;
                    pred[y] = Some((x, eid));
                    stack.push(y);
                }
            }
        }
        false
    }

    fn gather(&mut self, u: Vertex, v: Vertex, target: u8) -> u8 {
        loop {
            let held = self.pebbles[u] + self.pebbles[v];
            if held >= target {
                return held;
            }
            if !self.find_pebble(u, u, v) && !self.find_pebble(v, u, v) {
                return self.pebbles[u] + self.pebbles[v];
            }
        }
    }

    /// Vertices reachable from {u, v} along the current orientation.
    fn reach(&self, u: Vertex, v: Vertex) -> BTreeSet<Vertex> {
        let mut seen = BTreeSet::from([u, v]);
        let mut stack = vec![u, v];
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.out[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Accepted edges with both endpoints inside `region`.
    fn induced_accepted(&self, region: &BTreeSet<Vertex>) -> Vec<EdgeId> {
        self.accepted
            .iter()
            .copied()
            .filter(|&eid| {
                let e = &self.g.edges()[eid];
                region.contains(&e.tail) && region.contains(&e.head)
            })
            .collect()
    }

    /// Attempts to insert edge `eid`; returns true when the edge is accepted
    /// (i.e. the accepted set stays independent).
    fn try_insert(&mut self, eid: EdgeId) -> bool {
        let e = &self.g.edges()[eid];
        let (u, v) = (e.tail, e.head);
        let held = self.gather(u, v, 4);
        let accept = match held {
            4.. => true,
            3 => {
                // The reach region induces the maximal (2,3)-tight set
                // containing u and v; the edge is acceptable iff no balanced
                // tight subset of it closes up with the new gain.
                let region = self.reach(u, v);
                let region_edges = self.induced_accepted(&region);
                !self.has_balanced_violation(&region_edges, u, v, &e.gain)
            }
            _ => false,
        };
        if accept {
            let from = if self.pebbles[u] > 0 { u } else { v };
            debug_assert!(self.pebbles[from] > 0);
            self.pebbles[from] -= 1;
            let to = if from == u { v } else { u };
            self.out[from].push((to, eid));
            self.accepted.insert(eid);
        }
        accept
    }

    /// Whether some balanced (2,3)-tight T within `region_edges` contains
    /// both u and v with walk gain `gamma` from u to v, so that T plus the
    /// new edge would violate the balanced count.
    fn has_balanced_violation(
        &self,
        region_edges: &[EdgeId],
        u: Vertex,
        v: Vertex,
        gamma: &GainVec,
    ) -> bool {
        let set = EdgeSet::from_iter(region_edges.iter().copied());
        if self.g.is_balanced(&set).expect("region edges are valid") {
            // A balanced connected region has a unique u-v walk gain; any
            // tight subset through u and v inherits it.
            match self.walk_gain_within(region_edges, u, v) {
                Some(w) => &w == gamma,
                None => false,
            }
        } else {
            self.covering_patch_linked(region_edges, u, v, gamma)
        }
    }

    /// Walk gain from u to v inside the given (balanced) edge set.
    fn walk_gain_within(&self, edges: &[EdgeId], u: Vertex, v: Vertex) -> Option<GainVec> {
        let k = self.g.k();
        let mut adj: BTreeMap<Vertex, Vec<EdgeId>> = BTreeMap::new();
        for &eid in edges {
            let e = &self.g.edges()[eid];
            adj.entry(e.tail).or_default().push(eid);
            adj.entry(e.head).or_default().push(eid);
        }
        let mut pot: BTreeMap<Vertex, GainVec> = BTreeMap::from([(u, GainVec::zero(k))]);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            let wx = pot[&x].clone();
            for &eid in adj.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
                let e = &self.g.edges()[eid];
                let y = e.other(x);
                if !pot.contains_key(&y) {
                    pot.insert(y, wx.add(&e.gain_from(x)));
                    queue.push_back(y);
                }
            }
        }
        pot.get(&v).cloned()
    }

    /// Laman-linkage test on a finite patch of the covering of the region:
    /// the candidate balanced tight sets are exactly the vertex-injective
    /// rigid subgraphs of the covering containing the two seed lifts
    /// (u, 0) and (v, gamma).
    fn covering_patch_linked(
        &self,
        region_edges: &[EdgeId],
        u: Vertex,
        v: Vertex,
        gamma: &GainVec,
    ) -> bool {
        let mut support: BTreeSet<Vertex> = BTreeSet::new();
        let mut adj: BTreeMap<Vertex, Vec<EdgeId>> = BTreeMap::new();
        for &eid in region_edges {
            let e = &self.g.edges()[eid];
            support.insert(e.tail);
            support.insert(e.head);
            adj.entry(e.tail).or_default().push(eid);
            adj.entry(e.head).or_default().push(eid);
        }
        if support.len() < 3 {
            return false;
        }
        // Any witness subgraph has at most |support| vertices, hence
        // diameter at most |support| - 1 around each seed.
        let radius = support.len() - 1;
        let seed_u = (u, GainVec::zero(self.g.k()));
        let seed_v = (v, gamma.clone());
        let ball_u = self.covering_ball(&adj, &seed_u, radius);
        let ball_v = self.covering_ball(&adj, &seed_v, radius);
        let mut nodes: Vec<(Vertex, GainVec)> = ball_u
            .keys()
            .filter(|key| ball_v.contains_key(*key))
            .cloned()
            .collect();
        nodes.sort();
        let mut index: HashMap<(Vertex, GainVec), usize> = HashMap::new();
        for (i, key) in nodes.iter().enumerate() {
            index.insert(key.clone(), i);
        }
        let mut patch_edges: Vec<(usize, usize)> = Vec::new();
        for (i, (x, delta)) in nodes.iter().enumerate() {
            for &eid in adj.get(x).map(|v| v.as_slice()).unwrap_or(&[]) {
                let e = &self.g.edges()[eid];
                if e.tail != *x {
                    continue; // lift each edge once, from its tail
                }
                let neighbor = (e.head, delta.add(&e.gain));
                if let Some(&j) = index.get(&neighbor) {
                    patch_edges.push((i, j));
                }
            }
        }
        // 2-core peel: witness subgraphs are rigid on >= 3 vertices, hence
        // have minimum degree 2.
        let mut degree = vec![0usize; nodes.len()];
        for &(a, b) in &patch_edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut alive = vec![true; nodes.len()];
        let mut queue: VecDeque<usize> =
            (0..nodes.len()).filter(|&i| degree[i] < 2).collect();
        while let Some(i) = queue.pop_front() {
            if !alive[i] {
                continue;
            }
            alive[i] = false;
            for &(a, b) in &patch_edges {
                if a == i || b == i {
                    let other = if a == i { b } else { a };
                    if alive[other] {
                        degree[other] -= 1;
                        if degree[other] < 2 {
                            queue.push_back(other);
                        }
                    }
                }
            }
        }
        let (Some(&su), Some(&sv)) = (index.get(&seed_u), index.get(&seed_v)) else {
            return false;
        };
        if !alive[su] || !alive[sv] {
            return false;
        }
        let live_edges: Vec<(usize, usize)> = patch_edges
            .iter()
            .copied()
            .filter(|&(a, b)| alive[a] && alive[b])
            .collect();
        laman_linked(nodes.len(), &live_edges, su, sv)
    }

    /// BFS ball of the covering of the region, keyed by (vertex, lift).
    fn covering_ball(
        &self,
        adj: &BTreeMap<Vertex, Vec<EdgeId>>,
        seed: &(Vertex, GainVec),
        radius: usize,
    ) -> HashMap<(Vertex, GainVec), usize> {
        let mut dist: HashMap<(Vertex, GainVec), usize> = HashMap::from([(seed.clone(), 0)]);
        let mut queue = VecDeque::from([seed.clone()]);
        while let Some((x, delta)) = queue.pop_front() {
            let d = dist[&(x.clone(), delta.clone())];
            if d == radius {
                continue;
            }
            for &eid in adj.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
                let e = &self.g.edges()[eid];
                let y = e.other(x);
                let next = (y, delta.add(&e.gain_from(x)));
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
        dist
    }
}

/// Classical (2,3) pebble game on a plain graph; answers whether `a` and `b`
/// lie in a common rigid (Laman-spanned) subgraph.
fn laman_linked(n: usize, edges: &[(usize, usize)], a: usize, b: usize) -> bool {
    let mut pebbles = vec![2u8; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];

    fn find_pebble(
        pebbles: &mut [u8],
        out: &mut [Vec<usize>],
        start: usize,
        fa: usize,
        fb: usize,
    ) -> bool {
        let mut pred: Vec<Option<usize>> = vec![None; pebbles.len()];
        let mut visited = vec![false; pebbles.len()];
        visited[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            if x != start && x != fa && x != fb && pebbles[x] > 0 {
                pebbles[x] -= 1;
                pebbles[start] += 1;
                let mut at = x;
                while let Some(prev) = pred[at] {
                    let idx = out[prev].iter().position(|&y| y == at).unwrap();
                    out[prev].swap_remove(idx);
                    out[at].push(prev);
                    at = prev;
                }
                return true;
            }
            for i in 0..out[x].len() {
                let y = out[x][i];
                if !visited[y] {
                    visited[y] = true;
                    pred[y] = Some(x);
                    stack.push(y);
                }
            }
        }
        false
    }

    let gather = |pebbles: &mut Vec<u8>, out: &mut Vec<Vec<usize>>, u: usize, v: usize| -> u8 {
        loop {
            if pebbles[u] + pebbles[v] >= 4 {
                return 4;
            }
            if !find_pebble(pebbles, out, u, u, v) && !find_pebble(pebbles, out, v, u, v) {
                return pebbles[u] + pebbles[v];
            }
        }
    };

    for &(x, y) in edges {
        if x == y {
            continue;
        }
        if gather(&mut pebbles, &mut out, x, y) >= 4 {
            pebbles[x] -= 1;
            out[x].push(y);
        }
        // Dependent patch edges are simply skipped; they do not change span.
    }
    gather(&mut pebbles, &mut out, a, b) < 4
}

/// True iff both count conditions hold for every nonempty subset of `f`.
pub fn is_independent(g: &GainGraph, f: &EdgeSet) -> Result<bool, SparsityError> {
    g.check_edge_set(f)?;
    let mut game = PebbleGame::new(g);
    for &eid in f.iter() {
        if !game.try_insert(eid) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank of `f` in R₂: size of the greedy maximal independent subset, built
/// in ascending edge-id order.
pub fn rank2(g: &GainGraph, f: &EdgeSet) -> Result<usize, SparsityError> {
    Ok(max_independent(g, f)?.len())
}

/// Greedy maximal independent subset of `f` in ascending edge-id order.
pub fn max_independent(g: &GainGraph, f: &EdgeSet) -> Result<EdgeSet, SparsityError> {
    g.check_edge_set(f)?;
    let mut game = PebbleGame::new(g);
    let mut basis = EdgeSet::new();
    for &eid in f.iter() {
        if game.try_insert(eid) {
            basis.insert(eid);
        }
    }
    Ok(basis)
}

/// Periodic rigidity (fixed lattice, k ≥ 1): rank2(E) = 2|V| − 2.
pub fn is_periodically_rigid(g: &GainGraph) -> Result<bool, SparsityError> {
    if g.k() == 0 {
        return Err(SparsityError::WrongPeriodicityRank {
            expected: "k >= 1",
            got: 0,
        });
    }
    let n = g.vertex_count();
    Ok(rank2(g, &g.full_edge_set())? == 2 * n - 2)
}

/// Finite (Laman) rigidity: k = 0 and rank2(E) = 2|V| − 3.
pub fn is_rigid_finite(g: &GainGraph) -> Result<bool, SparsityError> {
    if g.k() != 0 {
        return Err(SparsityError::WrongPeriodicityRank {
            expected: "k = 0",
            got: g.k(),
        });
    }
    let n = g.vertex_count();
    Ok(rank2(g, &g.full_edge_set())? == 2 * n - 3)
}

fn rigidity_target(g: &GainGraph) -> usize {
    let n = g.vertex_count();
    if g.k() == 0 {
        2 * n - 3
    } else {
        2 * n - 2
    }
}

/// Whether the rigidity predicate for the graph's k holds for E and for
/// E − e for every edge e. The witness is the first edge whose deletion
/// breaks rigidity; `(false, None)` means the graph is not rigid at all.
pub fn is_redundantly_rigid(g: &GainGraph) -> Result<(bool, Option<EdgeId>), SparsityError> {
    let full = g.full_edge_set();
    let target = rigidity_target(g);
    if rank2(g, &full)? != target {
        return Ok((false, None));
    }
    for &eid in full.iter() {
        if rank2(g, &full.without(eid))? != target {
            return Ok((false, Some(eid)));
        }
    }
    Ok((true, None))
}

/// The unique circuit inside `basis + e`, found by dropping, in ascending
/// edge-id order, any element whose removal keeps the set dependent.
pub fn fundamental_circuit(
    g: &GainGraph,
    basis: &EdgeSet,
    e: EdgeId,
) -> Result<Circuit, SparsityError> {
    g.check_edge_set(basis)?;
    g.edge(e)?;
    let mut set = basis.with(e);
    if is_independent(g, &set)? {
        return Err(SparsityError::NotDependent);
    }
    let candidates: Vec<EdgeId> = set.iter().copied().collect();
    for id in candidates {
        if id == e {
            continue;
        }
        let smaller = set.without(id);
        if !is_independent(g, &smaller)? {
            set = smaller;
        }
    }
    Ok(Circuit { edges: set })
}

/// Matroid components of the restriction of R₂ to E: fundamental circuits
/// with respect to one fixed basis, merged transitively; coloops become
/// singleton classes.
pub fn m_components(g: &GainGraph) -> Result<MPartition, SparsityError> {
    let full = g.full_edge_set();
    let basis = max_independent(g, &full)?;
    let m = g.edge_count();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for &eid in full.iter() {
        if basis.contains(eid) {
            continue;
        }
        let circuit = fundamental_circuit(g, &basis, eid)?;
        let root = find(&mut parent, eid);
        for &member in circuit.edges.iter() {
            let r = find(&mut parent, member);
            parent[r] = root;
        }
    }
    let mut classes: BTreeMap<usize, EdgeSet> = BTreeMap::new();
    for eid in 0..m {
        let r = find(&mut parent, eid);
        classes.entry(r).or_default().insert(eid);
    }
    let mut out: Vec<EdgeSet> = classes.into_values().collect();
    out.sort_by_key(|c| *c.iter().next().unwrap());
    Ok(MPartition { classes: out })
}

/// M-connectivity: the restriction of R₂ to E has exactly one component.
pub fn is_m_connected(g: &GainGraph) -> Result<bool, SparsityError> {
    if g.edge_count() < 2 {
        return Err(SparsityError::TooFewEdges);
    }
    Ok(m_components(g)?.classes.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaingraph::GainGraph;

    fn balanced_k4(k: usize) -> GainGraph {
        let z = vec![0; k];
        GainGraph::from_edges(
            k,
            4,
            vec![
                (0, 1, z.clone()),
                (0, 2, z.clone()),
                (0, 3, z.clone()),
                (1, 2, z.clone()),
                (1, 3, z.clone()),
                (2, 3, z),
            ],
        )
        .unwrap()
    }

    /// The 3-vertex 5-edge base case: two unbalanced digons plus one simple
    /// edge, k = 1.
    pub(crate) fn base5() -> GainGraph {
        GainGraph::from_edges(
            1,
            3,
            vec![
                (0, 1, vec![0]),
                (0, 1, vec![1]),
                (1, 2, vec![0]),
                (1, 2, vec![1]),
                (0, 2, vec![0]),
            ],
        )
        .unwrap()
    }

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
    fn balanced_triangle_is_independent() {
        let g = GainGraph::from_edges(
            1,
            3,
            vec![(0, 1, vec![0]), (1, 2, vec![0]), (0, 2, vec![0])],
        )
        .unwrap();
        assert!(is_independent(&g, &g.full_edge_set()).unwrap());
    }

    #[test]
    fn balanced_k4_is_dependent() {
        for k in [0, 1, 2] {
            let g = balanced_k4(k);
            assert!(!is_independent(&g, &g.full_edge_set()).unwrap(), "k = {k}");
            assert_eq!(rank2(&g, &g.full_edge_set()).unwrap(), 5, "k = {k}");
        }
    }

    #[test]
    fn unbalanced_digon_is_independent() {
        let g = GainGraph::from_edges(1, 2, vec![(0, 1, vec![0]), (0, 1, vec![1])]).unwrap();
        assert!(is_independent(&g, &g.full_edge_set()).unwrap());
        assert_eq!(rank2(&g, &g.full_edge_set()).unwrap(), 2);
    }

    #[test]
    fn fig1d_has_full_rank() {
        let g = fig1d();
        assert_eq!(rank2(&g, &g.full_edge_set()).unwrap(), 4);
        assert_eq!(rank2(&g, &EdgeSet::new()).unwrap(), 0);
    }

    #[test]
    fn base5_is_periodically_rigid_and_redundant() {
        let g = base5();
        assert!(is_periodically_rigid(&g).unwrap());
        assert_eq!(is_redundantly_rigid(&g).unwrap(), (true, None));
    }

    #[test]
    fn base5_without_simple_edge_is_not_redundant() {
        let g = GainGraph::from_edges(
            1,
            3,
            vec![
                (0, 1, vec![0]),
                (0, 1, vec![1]),
                (1, 2, vec![0]),
                (1, 2, vec![1]),
            ],
        )
        .unwrap();
        assert!(is_periodically_rigid(&g).unwrap());
        let (redundant, witness) = is_redundantly_rigid(&g).unwrap();
        assert!(!redundant);
        assert!(witness.is_some());
    }

    #[test]
    fn finite_redundancy_examples() {
        // K4 stays rigid after any single deletion.
        let g = balanced_k4(0);
        assert!(is_rigid_finite(&g).unwrap());
        assert_eq!(is_redundantly_rigid(&g).unwrap(), (true, None));

        // A triangle is rigid but every edge is critical.
        let t = GainGraph::from_edges(0, 3, vec![(0, 1, vec![]), (1, 2, vec![]), (0, 2, vec![])])
            .unwrap();
        assert!(is_rigid_finite(&t).unwrap());
        assert_eq!(is_redundantly_rigid(&t).unwrap(), (false, Some(0)));

        // A path is not rigid at all: no witness edge.
        let p = GainGraph::from_edges(0, 3, vec![(0, 1, vec![]), (1, 2, vec![])]).unwrap();
        assert!(!is_rigid_finite(&p).unwrap());
        assert_eq!(is_redundantly_rigid(&p).unwrap(), (false, None));
    }

    #[test]
    fn wrong_periodicity_rank_errors() {
        let g = balanced_k4(0);
        assert!(matches!(
            is_periodically_rigid(&g),
            Err(SparsityError::WrongPeriodicityRank { .. })
        ));
        let h = base5();
        assert!(matches!(
            is_rigid_finite(&h),
            Err(SparsityError::WrongPeriodicityRank { .. })
        ));
    }

    /// Hidden balanced violation: K₄ minus one edge with zero gains plus an
    /// unbalanced pendant digon. The maximal tight region is unbalanced, yet
    /// inserting the missing zero-gain K₄ edge creates a balanced K₄, which
    /// is dependent. Guards the covering-patch acceptance rule.
    #[test]
    fn hidden_balanced_violation_is_rejected() {
        let g = GainGraph::from_edges(
            1,
            5,
            vec![
                (0, 2, vec![0]),
                (0, 3, vec![0]),
                (1, 2, vec![0]),
                (1, 3, vec![0]),
                (2, 3, vec![0]),
                (4, 0, vec![0]),
                (4, 1, vec![1]),
                (0, 1, vec![0]), // completes the balanced K4 on {0,1,2,3}
            ],
        )
        .unwrap();
        let first_seven = EdgeSet::from_iter(0..7);
        assert!(is_independent(&g, &first_seven).unwrap());
        assert!(!is_independent(&g, &g.full_edge_set()).unwrap());
        assert_eq!(rank2(&g, &g.full_edge_set()).unwrap(), 7);
    }

    #[test]
    fn fundamental_circuit_of_balanced_k4() {
        let g = balanced_k4(1);
        let basis = EdgeSet::from_iter(0..5);
        assert!(is_independent(&g, &basis).unwrap());
        let c = fundamental_circuit(&g, &basis, 5).unwrap();
        assert_eq!(c.edges, g.full_edge_set());
    }

    #[test]
    fn fundamental_circuit_excludes_pendant_tree_edges() {
        // Unbalanced digon 0-1 plus a pendant path 1-2.
        let g = GainGraph::from_edges(
            1,
            3,
            vec![(0, 1, vec![0]), (1, 2, vec![0]), (0, 1, vec![1]), (0, 1, vec![2])],
        )
        .unwrap();
        let basis = EdgeSet::from_iter([0, 1, 2]);
        assert!(is_independent(&g, &basis).unwrap());
        let c = fundamental_circuit(&g, &basis, 3).unwrap();
        assert_eq!(c.edges, EdgeSet::from_iter([0, 2, 3]));
    }

    #[test]
    fn fundamental_circuit_requires_dependence() {
        let g = base5();
        let basis = EdgeSet::from_iter([0, 1, 2]);
        assert_eq!(
            fundamental_circuit(&g, &basis, 4).unwrap_err(),
            SparsityError::NotDependent
        );
    }

    #[test]
    fn m_components_examples() {
        // Two balanced K4 blocks sharing vertex 3.
        let z = vec![0];
        let g = GainGraph::from_edges(
            1,
            7,
            vec![
                (0, 1, z.clone()),
                (0, 2, z.clone()),
                (0, 3, z.clone()),
                (1, 2, z.clone()),
                (1, 3, z.clone()),
                (2, 3, z.clone()),
                (3, 4, z.clone()),
                (3, 5, z.clone()),
                (3, 6, z.clone()),
                (4, 5, z.clone()),
                (4, 6, z.clone()),
                (5, 6, z),
            ],
        )
        .unwrap();
        let parts = m_components(&g).unwrap();
        assert_eq!(parts.classes.len(), 2);
        assert_eq!(parts.classes[0], EdgeSet::from_iter(0..6));
        assert_eq!(parts.classes[1], EdgeSet::from_iter(6..12));
        assert!(!is_m_connected(&g).unwrap());

        let b = base5();
        assert_eq!(m_components(&b).unwrap().classes.len(), 1);
        assert!(is_m_connected(&b).unwrap());

        // A forest: all singleton classes.
        let f = GainGraph::from_edges(1, 4, vec![(0, 1, vec![0]), (1, 2, vec![3]), (2, 3, vec![1])])
            .unwrap();
        assert_eq!(m_components(&f).unwrap().classes.len(), 3);
        assert!(!is_m_connected(&f).unwrap());
    }

    #[test]
    fn m_connected_needs_two_edges() {
        let g = GainGraph::from_edges(1, 2, vec![(0, 1, vec![0])]).unwrap();
        assert_eq!(is_m_connected(&g).unwrap_err(), SparsityError::TooFewEdges);
    }

    #[test]
    fn degree_two_reduction() {
        // Lemma-style invariant: removing the star of a degree-2 vertex
        // drops the rank by exactly 2.
        let g = GainGraph::from_edges(
            1,
            4,
            vec![
                (0, 1, vec![0]),
                (0, 1, vec![1]),
                (1, 2, vec![0]),
                (1, 2, vec![1]),
                (0, 2, vec![0]),
                (0, 3, vec![0]),
                (2, 3, vec![1]),
            ],
        )
        .unwrap();
        assert_eq!(g.degree(3), 2);
        let full = g.full_edge_set();
        let without_star = EdgeSet::from_iter(
            full.iter()
                .copied()
                .filter(|&eid| !g.edges()[eid].is_incident(3)),
        );
        assert_eq!(
            rank2(&g, &full).unwrap(),
            rank2(&g, &without_star).unwrap() + 2
        );
    }
}
