//! Exhaustive reference implementations used as test oracles. Everything
//! here is a direct transcription of a definition over all subsets, guarded
//! by hard size limits; no algorithmic cleverness.

use crate::blocks::{self, ZeroTwoBlock};
use crate::gaingraph::{EdgeId, EdgeSet, GainGraph, GraphError, Vertex};
use crate::sparsity::{Circuit, MPartition};
use crate::verdict::{Certificate, Verdict, VerdictError};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BruteForceError {
    #[error("brute force limited to {limit} edges, got {got}")]
    TooLarge { limit: usize, got: usize },
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("verdict error: {0}")]
    Verdict(#[from] VerdictError),
}

const INDEPENDENCE_LIMIT: usize = 20;
const SUBGRAPH_LIMIT: usize = 16;

/// Bitmask-indexed independence table over the edges of `f`: a set is
/// independent iff every nonempty subset passes both count conditions.
struct SubsetTable {
    ids: Vec<EdgeId>,
    independent: Vec<bool>,
}

fn subset_table(g: &GainGraph, f: &EdgeSet) -> Result<SubsetTable, BruteForceError> {
    g.check_edge_set(f)?;
    let ids: Vec<EdgeId> = f.iter().copied().collect();
    let m = ids.len();
    if m > INDEPENDENCE_LIMIT {
        return Err(BruteForceError::TooLarge {
            limit: INDEPENDENCE_LIMIT,
            got: m,
        });
    }
    let mut independent = vec![true; 1 << m];
    for mask in 1usize..(1 << m) {
        // Hereditary part: all one-smaller subsets must be independent.
        let mut sub_ok = true;
        let mut bits = mask;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if !independent[mask ^ low] {
                sub_ok = false;
                break;
            }
            bits ^= low;
        }
        if !sub_ok {
            independent[mask] = false;
            continue;
        }
        let set = EdgeSet::from_iter(
            (0..m).filter(|i| mask & (1 << i) != 0).map(|i| ids[i]),
        );
        let vertices = set.vertex_support(g).len();
        let size = set.len();
        let bound = if g.is_balanced(&set)? {
            2 * vertices - 3
        } else {
            2 * vertices - 2
        };
        independent[mask] = size <= bound;
    }
    Ok(SubsetTable { ids, independent })
}

/// Definitional independence check over all nonempty subsets of `f`.
pub fn bf_is_independent(g: &GainGraph, f: &EdgeSet) -> Result<bool, BruteForceError> {
    let table = subset_table(g, f)?;
    Ok(*table.independent.last().unwrap())
}

/// Rank of `f`: the largest independent subset, by enumeration.
pub fn bf_rank(g: &GainGraph, f: &EdgeSet) -> Result<usize, BruteForceError> {
    let table = subset_table(g, f)?;
    Ok(table
        .independent
        .iter()
        .enumerate()
        .filter(|&(_, &ok)| ok)
        .map(|(mask, _)| mask.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

/// All circuits: dependent sets whose proper subsets are all independent.
pub fn bf_circuits(g: &GainGraph) -> Result<Vec<Circuit>, BruteForceError> {
    let full = g.full_edge_set();
    if full.len() > SUBGRAPH_LIMIT {
        return Err(BruteForceError::TooLarge {
            limit: SUBGRAPH_LIMIT,
            got: full.len(),
        });
    }
    let table = subset_table(g, &full)?;
    let m = table.ids.len();
    let mut out = Vec::new();
    for mask in 1usize..(1 << m) {
        if table.independent[mask] {
            continue;
        }
        let minimal = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .all(|i| table.independent[mask ^ (1 << i)]);
        if minimal {
            out.push(Circuit {
                edges: EdgeSet::from_iter(
                    (0..m).filter(|i| mask & (1 << i) != 0).map(|i| table.ids[i]),
                ),
            });
        }
    }
    Ok(out)
}

/// Matroid components as the transitive closure of the shared-circuit
/// relation; edges on no circuit become singleton classes.
pub fn bf_m_components(g: &GainGraph) -> Result<MPartition, BruteForceError> {
    let circuits = bf_circuits(g)?;
    let m = g.edge_count();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for circuit in &circuits {
        let mut members = circuit.edges.iter();
        let first = *members.next().unwrap();
        let root = find(&mut parent, first);
        for &member in members {
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

fn block_from_mask(g: &GainGraph, mask: usize) -> Option<ZeroTwoBlock> {
    let edges = EdgeSet::from_iter((0..g.edge_count()).filter(|i| mask & (1 << i) != 0));
    let support = edges.vertex_support(g);
    let mut boundary = BTreeSet::new();
    for &v in &support {
        if g.incident(v).iter().any(|&eid| !edges.contains(eid)) {
            boundary.insert(v);
        }
    }
    if boundary.len() != 2 || support.len() == boundary.len() {
        return None;
    }
    if !g.is_balanced(&edges).expect("mask edges are valid") {
        return None;
    }
    let mut iter = boundary.iter();
    let (&a, &b) = (iter.next().unwrap(), iter.next().unwrap());
    Some(ZeroTwoBlock {
        boundary: (a, b),
        interior: support.difference(&boundary).copied().collect(),
        edges,
    })
}

/// Enumerates every edge subset and tests the (0,2)-block definition
/// directly; returns the first hit in mask order, restricted to interiors
/// of at least `min_interior` vertices.
pub fn bf_find_zero_two_block_min_interior(
    g: &GainGraph,
    min_interior: usize,
) -> Result<Option<ZeroTwoBlock>, BruteForceError> {
    let m = g.edge_count();
    if m > SUBGRAPH_LIMIT {
        return Err(BruteForceError::TooLarge {
            limit: SUBGRAPH_LIMIT,
            got: m,
        });
    }
    for mask in 1usize..(1 << m) {
        if let Some(block) = block_from_mask(g, mask) {
            if block.interior.len() >= min_interior {
                return Ok(Some(block));
            }
        }
    }
    Ok(None)
}

pub fn bf_find_zero_two_block(g: &GainGraph) -> Result<Option<ZeroTwoBlock>, BruteForceError> {
    bf_find_zero_two_block_min_interior(g, 1)
}

fn bf_connected_components(g: &GainGraph) -> Vec<BTreeSet<Vertex>> {
    // Definitional: repeatedly grow reachable sets.
    let n = g.vertex_count();
    let mut out: Vec<BTreeSet<Vertex>> = Vec::new();
    let mut assigned = vec![false; n];
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        loop {
            let mut grew = false;
            for e in g.edges() {
                if comp.contains(&e.tail) && comp.insert(e.head) {
                    grew = true;
                }
                if comp.contains(&e.head) && comp.insert(e.tail) {
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        for &v in &comp {
            assigned[v] = true;
        }
        out.push(comp);
    }
    out
}

fn bf_is_rigid(g: &GainGraph, f: &EdgeSet) -> Result<bool, BruteForceError> {
    let n = g.vertex_count();
    let target = if g.k() == 0 { 2 * n - 3 } else { 2 * n - 2 };
    Ok(bf_rank(g, f)? == target)
}

fn bf_redundantly_rigid(g: &GainGraph) -> Result<(bool, Option<EdgeId>), BruteForceError> {
    let full = g.full_edge_set();
    if !bf_is_rigid(g, &full)? {
        return Ok((false, None));
    }
    for &eid in full.iter() {
        if !bf_is_rigid(g, &full.without(eid))? {
            return Ok((false, Some(eid)));
        }
    }
    Ok((true, None))
}

fn subgraph(g: &GainGraph, edges: &EdgeSet) -> (GainGraph, Vec<Vertex>, Vec<EdgeId>) {
    let support: Vec<Vertex> = edges.vertex_support(g).into_iter().collect();
    let index = |v: Vertex| support.iter().position(|&x| x == v).unwrap();
    let emap: Vec<EdgeId> = edges.iter().copied().collect();
    let triples: Vec<(Vertex, Vertex, Vec<i64>)> = emap
        .iter()
        .map(|&eid| {
            let e = &g.edges()[eid];
            (index(e.tail), index(e.head), e.gain.coords().to_vec())
        })
        .collect();
    let sub = GainGraph::from_edges(g.k(), support.len(), triples)
        .expect("subgraph of a well-formed graph is well-formed");
    (sub, support, emap)
}

fn remap_block(block: ZeroTwoBlock, vmap: &[Vertex], emap: &[EdgeId]) -> ZeroTwoBlock {
    let (a, b) = block.boundary;
    let (a, b) = (vmap[a], vmap[b]);
    ZeroTwoBlock {
        boundary: (a.min(b), a.max(b)),
        interior: block.interior.iter().map(|&v| vmap[v]).collect(),
        edges: EdgeSet::from_iter(block.edges.iter().map(|&e| emap[e])),
    }
}

fn bf_check_component(
    sub: &GainGraph,
    vmap: &[Vertex],
    emap: &[EdgeId],
    component: &EdgeSet,
    require_rank_two: bool,
) -> Result<Option<Certificate>, BruteForceError> {
    if require_rank_two {
        let rank = sub.gain_subgroup_rank(&sub.full_edge_set())?;
        if rank < 2 {
            return Ok(Some(Certificate::RankDeficientComponent {
                edges: component.clone(),
                rank,
            }));
        }
    }
    if let Some(block) = bf_find_zero_two_block_min_interior(sub, 2)? {
        return Ok(Some(Certificate::ZeroTwoBlock {
            block: remap_block(block, vmap, emap),
            component: component.clone(),
        }));
    }
    let (redundant, witness) = bf_redundantly_rigid(sub)?;
    if !redundant {
        return Ok(Some(Certificate::NotRedundantlyRigid {
            witness: witness.map(|e| emap[e]),
        }));
    }
    if let Some(block) = bf_find_zero_two_block(sub)? {
        return Ok(Some(Certificate::ZeroTwoBlock {
            block: remap_block(block, vmap, emap),
            component: component.clone(),
        }));
    }
    Ok(None)
}

/// Composite decision through the same theorem dispatch as the production
/// engine, with every nontrivial predicate replaced by its brute-force
/// counterpart.
pub fn bf_decide(g: &GainGraph) -> Result<Verdict, BruteForceError> {
    let n = g.vertex_count();
    if n == 0 || g.k() > 2 {
        return Err(BruteForceError::Verdict(VerdictError::MalformedInput(
            "empty graph or unsupported periodicity rank".to_string(),
        )));
    }
    if g.edge_count() > SUBGRAPH_LIMIT {
        return Err(BruteForceError::TooLarge {
            limit: SUBGRAPH_LIMIT,
            got: g.edge_count(),
        });
    }
    let positive = |c: Certificate| Verdict {
        globally_rigid: true,
        certificate: c,
    };
    let negative = |c: Certificate| Verdict {
        globally_rigid: false,
        certificate: c,
    };
    if n == 1 {
        return Ok(positive(Certificate::SmallCaseRigid {
            reason: "single vertex orbit".to_string(),
        }));
    }
    let comps = bf_connected_components(g);
    if comps.len() > 1 {
        return Ok(negative(Certificate::Disconnected {
            component: comps.into_iter().next().unwrap(),
        }));
    }
    if n == 2 && g.k() >= 1 {
        let full = g.full_edge_set();
        let rank = g.gain_subgroup_rank(&full)?;
        return Ok(if rank == g.k() {
            positive(Certificate::SmallCaseRigid {
                reason: "two vertex orbits with full-rank gain subgroup".to_string(),
            })
        } else {
            negative(Certificate::RankDeficientComponent { edges: full, rank })
        });
    }
    match g.k() {
        0 => {
            if n <= 3 {
                let complete = (0..n).all(|a| {
                    ((a + 1)..n).all(|b| {
                        g.edges().iter().any(|e| e.is_incident(a) && e.is_incident(b))
                    })
                });
                return Ok(if complete {
                    positive(Certificate::SmallCaseRigid {
                        reason: "complete graph on at most three vertex orbits".to_string(),
                    })
                } else {
                    negative(Certificate::NotCompleteSmall)
                });
            }
            // Separating-pair search straight from the definition.
            for a in 0..n {
                for b in (a + 1)..n {
                    let (sub_edges, alive): (Vec<_>, Vec<Vertex>) = (
                        g.edges()
                            .iter()
                            .filter(|e| !e.is_incident(a) && !e.is_incident(b))
                            .collect(),
                        (0..n).filter(|&v| v != a && v != b).collect(),
                    );
                    let mut reach = BTreeSet::from([alive[0]]);
                    loop {
                        let before = reach.len();
                        for e in &sub_edges {
                            if reach.contains(&e.tail) {
                                reach.insert(e.head);
                            }
                            if reach.contains(&e.head) {
                                reach.insert(e.tail);
                            }
                        }
                        if reach.len() == before {
                            break;
                        }
                    }
                    if reach.len() != alive.len() {
                        return Ok(negative(Certificate::NotThreeConnected { pair: (a, b) }));
                    }
                }
            }
            let (redundant, witness) = bf_redundantly_rigid(g)?;
            if !redundant {
                return Ok(negative(Certificate::NotRedundantlyRigid { witness }));
            }
            Ok(positive(Certificate::SatisfiesJJ))
        }
        1 => {
            // Cut vertex straight from the definition.
            for v in 0..n {
                let others: Vec<Vertex> = (0..n).filter(|&x| x != v).collect();
                let mut reach = BTreeSet::from([others[0]]);
                loop {
                    let before = reach.len();
                    for e in g.edges() {
                        if e.is_incident(v) {
                            continue;
                        }
                        if reach.contains(&e.tail) {
                            reach.insert(e.head);
                        }
                        if reach.contains(&e.head) {
                            reach.insert(e.tail);
                        }
                    }
                    if reach.len() == before {
                        break;
                    }
                }
                if reach.len() != others.len() {
                    return Ok(negative(Certificate::NotTwoConnected { cut_vertex: v }));
                }
            }
            let full = g.full_edge_set();
            let identity_v: Vec<Vertex> = (0..n).collect();
            let identity_e: Vec<EdgeId> = (0..g.edge_count()).collect();
            match bf_check_component(g, &identity_v, &identity_e, &full, false)? {
                Some(cert) => Ok(negative(cert)),
                None => Ok(positive(Certificate::SatisfiesMain0)),
            }
        }
        _ => {
            let decomposition = blocks::block_decomposition(g);
            let mut reports = Vec::new();
            for block in &decomposition.blocks {
                let (sub, vmap, emap) = subgraph(g, block);
                if let Some(cert) = bf_check_component(&sub, &vmap, &emap, block, true)? {
                    return Ok(negative(cert));
                }
                reports.push(block.clone());
            }
            Ok(positive(Certificate::SatisfiesMain1 { blocks: reports }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsity;
    use crate::verdict;

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

    fn base5() -> GainGraph {
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

    fn fig2d() -> GainGraph {
        GainGraph::from_edges(
            2,
            4,
            vec![
                (2, 3, vec![0, 0]),
                (0, 2, vec![0, 0]),
                (1, 3, vec![0, 0]),
                (0, 1, vec![0, 0]),
                (1, 0, vec![1, 0]),
                (1, 0, vec![1, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn independence_examples() {
        let k4 = balanced_k4(1);
        assert!(!bf_is_independent(&k4, &k4.full_edge_set()).unwrap());
        assert!(bf_is_independent(&k4, &EdgeSet::new()).unwrap());
        let f = fig1d();
        assert!(bf_is_independent(&f, &f.full_edge_set()).unwrap());
    }

    #[test]
    fn rank_examples() {
        let k4 = balanced_k4(2);
        assert_eq!(bf_rank(&k4, &k4.full_edge_set()).unwrap(), 5);
        let f = fig1d();
        assert_eq!(bf_rank(&f, &f.full_edge_set()).unwrap(), 4);
        assert_eq!(bf_rank(&f, &EdgeSet::new()).unwrap(), 0);
    }

    #[test]
    fn circuits_examples() {
        let k4 = balanced_k4(1);
        let circuits = bf_circuits(&k4).unwrap();
        assert_eq!(circuits.len(), 1);
        assert_eq!(circuits[0].edges, k4.full_edge_set());

        let forest = GainGraph::from_edges(1, 3, vec![(0, 1, vec![0]), (1, 2, vec![3])]).unwrap();
        assert!(bf_circuits(&forest).unwrap().is_empty());

        let b = base5();
        let circuits = bf_circuits(&b).unwrap();
        let mut covered = EdgeSet::new();
        for c in &circuits {
            covered = covered.union(&c.edges);
        }
        assert_eq!(covered, b.full_edge_set());
    }

    #[test]
    fn m_components_match_production() {
        let z = vec![0];
        let shared = GainGraph::from_edges(
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
        for g in [shared, base5(), fig1d(), fig2d()] {
            assert_eq!(
                bf_m_components(&g).unwrap(),
                sparsity::m_components(&g).unwrap()
            );
        }
    }

    #[test]
    fn zero_two_block_existence_matches_production() {
        let with_block = GainGraph::from_edges(
            1,
            4,
            vec![
                (0, 1, vec![0]),
                (0, 2, vec![0]),
                (0, 3, vec![0]),
                (1, 2, vec![0]),
                (1, 3, vec![0]),
                (2, 3, vec![0]),
                (0, 1, vec![1]),
                (0, 1, vec![2]),
            ],
        )
        .unwrap();
        for g in [fig2d(), base5(), with_block, balanced_k4(2)] {
            let bf = bf_find_zero_two_block(&g).unwrap();
            let fast = blocks::find_zero_two_block(&g);
            assert_eq!(bf.is_some(), fast.is_some());
        }
    }

    #[test]
    fn decide_examples_match_production() {
        let two_vertices =
            GainGraph::from_edges(2, 2, vec![(0, 1, vec![0, 0]), (0, 1, vec![1, 0])]).unwrap();
        let fig1b = GainGraph::from_edges(
            2,
            3,
            vec![
                (0, 1, vec![0, 0]),
                (0, 2, vec![0, 0]),
                (1, 0, vec![1, 1]),
                (1, 2, vec![1, 1]),
            ],
        )
        .unwrap();
        for g in [base5(), fig2d(), fig1b, fig1d(), two_vertices] {
            let bf = bf_decide(&g).unwrap();
            let fast = verdict::decide(&g).unwrap();
            assert_eq!(bf.globally_rigid, fast.globally_rigid);
            assert_eq!(
                std::mem::discriminant(&bf.certificate),
                std::mem::discriminant(&fast.certificate)
            );
        }
    }

    #[test]
    fn size_guards() {
        let mut triples = Vec::new();
        for i in 0..21 {
            triples.push((i, i + 1, vec![i as i64]));
        }
        let g = GainGraph::from_edges(1, 22, triples).unwrap();
        assert!(matches!(
            bf_is_independent(&g, &g.full_edge_set()),
            Err(BruteForceError::TooLarge { limit: 20, got: 21 })
        ));
        assert!(matches!(
            bf_circuits(&g),
            Err(BruteForceError::TooLarge { limit: 16, got: 21 })
        ));
        assert!(matches!(
            bf_decide(&g),
            Err(BruteForceError::TooLarge { .. })
        ));
    }
}
