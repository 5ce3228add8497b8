//! Graph-connectivity layer: connected components, cut vertices and
//! 2-connected components, 3-connectivity, and detection of (0,2)-blocks
//! with their cleaving gain.

use crate::gaingraph::{EdgeId, EdgeSet, GainGraph, GainVec, Vertex};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockError {
    #[error("operation requires at least {needed} vertices, graph has {got}")]
    TooSmall { needed: usize, got: usize },
}

/// A balanced subgraph H with exactly two boundary vertices and a nonempty
/// interior. `edges` holds every edge with at least one endpoint in the
/// interior; edges joining the two boundary vertices are excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroTwoBlock {
    pub boundary: (Vertex, Vertex),
    pub interior: BTreeSet<Vertex>,
    pub edges: EdgeSet,
}

/// Cut vertices and 2-connected components. Bridges appear as 2-vertex
/// blocks; the blocks partition the edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub cut_vertices: BTreeSet<Vertex>,
    pub blocks: Vec<EdgeSet>,
}

/// Connected components as vertex sets, ordered by smallest member.
/// Isolated vertices form singleton components.
pub fn connected_components(g: &GainGraph) -> Vec<BTreeSet<Vertex>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &eid in g.incident(x) {
                let y = g.edges()[eid].other(x);
                if !seen[y] {
                    seen[y] = true;
                    comp.insert(y);
                    stack.push(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Cut vertices and 2-connected components via the lowpoint algorithm.
pub fn block_decomposition(g: &GainGraph) -> BlockDecomposition {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut cut_vertices = BTreeSet::new();
    let mut blocks: Vec<EdgeSet> = Vec::new();
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    // Iterative DFS; frames are (vertex, parent tree edge, incidence cursor).
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0usize;
        let mut frames: Vec<(Vertex, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (u, parent_edge, ref mut cursor)) = frames.last_mut() {
            if *cursor < g.incident(u).len() {
                let eid = g.incident(u)[*cursor];
                *cursor += 1;
                if Some(eid) == parent_edge {
                    continue;
                }
                let v = g.edges()[eid].other(u);
                if disc[v] == usize::MAX {
                    edge_stack.push(eid);
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    if u == root {
                        root_children += 1;
                    }
                    frames.push((v, Some(eid), 0));
                } else if disc[v] < disc[u] {
                    edge_stack.push(eid);
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                frames.pop();
                if let Some(&mut (p, _, _)) = frames.last_mut() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        // p separates the subtree at u: pop one block.
                        let tree_edge = parent_edge.unwrap();
                        let mut block = EdgeSet::new();
                        while let Some(&top) = edge_stack.last() {
                            edge_stack.pop();
                            block.insert(top);
                            if top == tree_edge {
                                break;
                            }
                        }
                        blocks.push(block);
                        if p != root || root_children > 1 {
                            cut_vertices.insert(p);
                        }
                    }
                }
            }
        }
        // Root cut status is decided as blocks close; nothing left on the
        // stack belongs to this root's component.
        debug_assert!(edge_stack.is_empty());
    }
    blocks.sort_by_key(|b| *b.iter().next().unwrap());
    BlockDecomposition {
        cut_vertices,
        blocks,
    }
}

fn connected_avoiding(g: &GainGraph, skip: &[Vertex]) -> bool {
    let n = g.vertex_count();
    let alive = |x: Vertex| !skip.contains(&x);
    let Some(start) = (0..n).find(|&x| alive(x)) else {
        return true;
    };
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &eid in g.incident(x) {
            let y = g.edges()[eid].other(x);
            if alive(y) && !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == (0..n).filter(|&x| alive(x)).count()
}

/// 3-connectivity by exhaustive separating-pair search; the witness is the
/// lexicographically first pair whose removal disconnects the rest.
pub fn is_three_connected(g: &GainGraph) -> Result<(bool, Option<(Vertex, Vertex)>), BlockError> {
    let n = g.vertex_count();
    if n < 4 {
        return Err(BlockError::TooSmall { needed: 4, got: n });
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if !connected_avoiding(g, &[a, b]) {
                return Ok((false, Some((a, b))));
            }
        }
    }
    Ok((true, None))
}

/// Searches for a (0,2)-block. For every vertex pair {a,b}, candidates are
/// built from the connected components of G − {a,b}: a single component
/// touching both a and b; a component touching exactly one of them plus one
/// bridging a–b edge; or two components touching opposite boundary
/// vertices. Each candidate contains every edge incident to its interior,
/// must be balanced, and must leave a and b with at least one outside edge
/// each. This is complete: any (0,2)-block H has an interior that is a
/// union of components of G − {a,b} together with all their incident edges
/// plus at most one a–b edge (two parallel a–b edges are never jointly
/// balanced), and shrinking H to one of the three shapes above preserves
/// every defining condition. Pairs are scanned in lexicographic order,
/// components in discovery order, and the three shapes in the order listed.
pub fn find_zero_two_block(g: &GainGraph) -> Option<ZeroTwoBlock> {
    find_zero_two_block_min_interior(g, 1)
}

/// Same search restricted to candidates whose interior has at least
/// `min_interior` vertices.
pub(crate) fn find_zero_two_block_min_interior(
    g: &GainGraph,
    min_interior: usize,
) -> Option<ZeroTwoBlock> {
    let n = g.vertex_count();
    for a in 0..n {
        for b in (a + 1)..n {
            if let Some(block) = find_block_at_pair(g, a, b, min_interior) {
                return Some(block);
            }
        }
    }
    None
}

struct PairCandidate {
    comp: BTreeSet<Vertex>,
    edges: EdgeSet,
    touches_a: bool,
    touches_b: bool,
}

fn find_block_at_pair(
    g: &GainGraph,
    a: Vertex,
    b: Vertex,
    min_interior: usize,
) -> Option<ZeroTwoBlock> {
    let candidates: Vec<PairCandidate> = components_avoiding(g, a, b)
        .into_iter()
        .map(|comp| {
            let edges = EdgeSet::from_iter((0..g.edge_count()).filter(|&eid| {
                let e = &g.edges()[eid];
                comp.contains(&e.tail) || comp.contains(&e.head)
            }));
            let touches_a = edges.iter().any(|&eid| g.edges()[eid].is_incident(a));
            let touches_b = edges.iter().any(|&eid| g.edges()[eid].is_incident(b));
            PairCandidate {
                comp,
                edges,
                touches_a,
                touches_b,
            }
        })
        .collect();
    let ab_edges: Vec<usize> = (0..g.edge_count())
        .filter(|&eid| {
            let e = &g.edges()[eid];
            (e.tail, e.head) == (a, b) || (e.tail, e.head) == (b, a)
        })
        .collect();
    // Boundary vertices need an incident edge outside the block.
    let has_outside = |edges: &EdgeSet, v: Vertex| {
        g.incident(v).iter().any(|&eid| !edges.contains(eid))
    };
    let balanced = |edges: &EdgeSet| g.is_balanced(edges).expect("edge ids are valid");

    // Shape 1: one component reaching both boundary vertices.
    for c in &candidates {
        if c.comp.len() < min_interior || !c.touches_a || !c.touches_b {
            continue;
        }
        if has_outside(&c.edges, a) && has_outside(&c.edges, b) && balanced(&c.edges) {
            return Some(ZeroTwoBlock {
                boundary: (a, b),
                interior: c.comp.clone(),
                edges: c.edges.clone(),
            });
        }
    }
    // Shape 2: one component reaching exactly one boundary vertex, bridged
    // to the other by a single a–b edge. The bridge closes no cycle, so
    // balance of the component alone suffices.
    for c in &candidates {
        if c.comp.len() < min_interior || c.touches_a == c.touches_b {
            continue;
        }
        for &bridge in &ab_edges {
            let edges = c.edges.with(bridge);
            if has_outside(&edges, a) && has_outside(&edges, b) && balanced(&c.edges) {
                return Some(ZeroTwoBlock {
                    boundary: (a, b),
                    interior: c.comp.clone(),
                    edges,
                });
            }
        }
    }
    // Shape 3: two components on opposite sides. They meet only at the
    // boundary, so every cycle stays within one side and balance of each
    // side suffices.
    for (i, ci) in candidates.iter().enumerate() {
        for cj in &candidates[i + 1..] {
            let (ca, cb) = if ci.touches_a && !ci.touches_b && cj.touches_b && !cj.touches_a {
                (ci, cj)
            } else if ci.touches_b && !ci.touches_a && cj.touches_a && !cj.touches_b {
                (cj, ci)
            } else {
                continue;
            };
            if ca.comp.len() + cb.comp.len() < min_interior {
                continue;
            }
            let edges = ca.edges.union(&cb.edges);
            if has_outside(&edges, a)
                && has_outside(&edges, b)
                && balanced(&ca.edges)
                && balanced(&cb.edges)
            {
                return Some(ZeroTwoBlock {
                    boundary: (a, b),
                    interior: ca.comp.union(&cb.comp).copied().collect(),
                    edges,
                });
            }
        }
    }
    None
}

fn components_avoiding(g: &GainGraph, a: Vertex, b: Vertex) -> Vec<BTreeSet<Vertex>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    seen[a] = true;
    seen[b] = true;
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &eid in g.incident(x) {
                let y = g.edges()[eid].other(x);
                if !seen[y] {
                    seen[y] = true;
                    comp.insert(y);
                    stack.push(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// The gain of the unique a→b edge whose addition keeps the block balanced:
/// the walk gain of any a–b path through the block (balance makes every
/// choice agree).
pub fn cleaving_gain(g: &GainGraph, block: &ZeroTwoBlock) -> GainVec {
    let (a, b) = block.boundary;
    let mut adj: BTreeMap<Vertex, Vec<EdgeId>> = BTreeMap::new();
    for &eid in block.edges.iter() {
        let e = &g.edges()[eid];
        adj.entry(e.tail).or_default().push(eid);
        adj.entry(e.head).or_default().push(eid);
    }
    let mut pot: BTreeMap<Vertex, GainVec> = BTreeMap::from([(a, GainVec::zero(g.k()))]);
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        let wx = pot[&x].clone();
        for &eid in adj.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
            let e = &g.edges()[eid];
            let y = e.other(x);
            if !pot.contains_key(&y) {
                pot.insert(y, wx.add(&e.gain_from(x)));
                queue.push_back(y);
            }
        }
    }
    pot.get(&b).expect("block connects its boundary").clone()
}
