//! Reductions that decompose an arbitrary instance into well-structured
//! sub-instances (no {0,1}-edge-pairs, no redundant 4-cycles, no cut
//! nodes, no bad-pairs), together with a trace that reassembles a
//! 2-edge-connected spanning subgraph of the original instance from
//! sub-instance solutions.
//!
//! The four reductions:
//!   pp1  split at essential {0,1}-edge-pairs, drop the unit half of
//!        inessential ones (applied once; later steps cannot recreate
//!        pairs);
//!   pp2  contract redundant 4-cycles, whose four edges are forced into
//!        any solution;
//!   pp3  split at cut nodes into biconnected blocks;
//!   pp4  split at a bad-pair, allocating its zero-edge to one
//!        bp-component chosen by comparing sharpened cover bounds.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cover;
use crate::error::AlgoError;
use crate::graph::{Dsu, Edge, EdgeId, MapInstance, NodeId};

/// A sub-instance plus the mapping of its edge ids back to the parent.
#[derive(Clone, Debug)]
pub struct SubInstance {
    pub graph: MapInstance,
    /// child edge id -> parent edge id
    pub to_parent: Vec<EdgeId>,
}

impl SubInstance {
    fn identity(graph: MapInstance) -> Self {
        let m = graph.edge_count() as EdgeId;
        SubInstance {
            graph,
            to_parent: (0..m).collect(),
        }
    }
}

/// How a pp4 child was derived from its bp-component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BpMode {
    /// C^{v,w}: induced on the component plus both bad-pair nodes.
    KeptEdge,
    /// Same subgraph with the zero-edge contracted.
    Contracted,
}

/// One node of the decomposition trace.
#[derive(Clone, Debug)]
pub enum TraceNode {
    /// A well-structured (or single-node) instance awaiting a solution.
    Leaf { leaf_index: usize, n_nodes: u32 },
    /// {0,1}-edge-pair elimination. `forced` holds both halves of every
    /// essential pair (parent ids); `deleted` the discarded unit halves.
    Pp1 {
        forced: Vec<EdgeId>,
        deleted: Vec<EdgeId>,
        children: Vec<TraceChild>,
    },
    /// Redundant 4-cycle contraction; the 4q cycle edges are forced.
    Pp2 {
        cycles: Vec<[EdgeId; 4]>,
        child: TraceChild,
    },
    /// Block decomposition at cut nodes.
    Pp3 { children: Vec<TraceChild> },
    /// Bad-pair allocation. The zero-edge (parent id) is forced; children
    /// are bp-component variants, the first being the remainder side.
    Pp4 {
        zero_edge: EdgeId,
        allocated: usize,
        modes: Vec<BpMode>,
        children: Vec<TraceChild>,
    },
}

#[derive(Clone, Debug)]
pub struct TraceChild {
    pub to_parent: Vec<EdgeId>,
    pub node: Box<TraceNode>,
}

/// Full decomposition of an instance: the trace tree plus the leaf
/// instances in leaf-index order.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub root: TraceNode,
    pub leaves: Vec<MapInstance>,
}

/// Violations reported by `verify_well_structured`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Violation {
    ZeroOnePair,
    Redundant4Cycle,
    CutNode,
    BadPair,
}

/// Checks the four structural conditions; returns all violations.
pub fn verify_well_structured(inst: &MapInstance) -> (bool, Vec<Violation>) {
    let mut out = Vec::new();
    if !inst.zero_one_pairs().is_empty() {
        out.push(Violation::ZeroOnePair);
    }
    if !find_redundant_4cycles(inst).is_empty() {
        out.push(Violation::Redundant4Cycle);
    }
    if !inst.connectivity_profile().cut_nodes.is_empty() {
        out.push(Violation::CutNode);
    }
    if !find_bad_pairs(inst).pairs.is_empty() {
        out.push(Violation::BadPair);
    }
    (out.is_empty(), out)
}

// ---------------------------------------------------------------------
// pp1: {0,1}-edge-pairs
// ---------------------------------------------------------------------

pub struct Pp1Result {
    pub children: Vec<SubInstance>,
    pub forced: Vec<EdgeId>,
    pub deleted: Vec<EdgeId>,
}

/// Splits at essential pairs (whose deletion disconnects the graph; both
/// halves are forced into the final solution) and deletes the unit half
/// of every inessential pair. Children are 2EC or single nodes, and free
/// of {0,1}-edge-pairs.
pub fn eliminate_01_pairs(inst: &MapInstance) -> Pp1Result {
    let pairs = inst.zero_one_pairs();
    let mut removed = vec![false; inst.edge_count()];
    let mut forced = Vec::new();
    let mut deleted = Vec::new();
    for &(z, u) in &pairs {
        // Essential iff deleting both halves disconnects the graph.
        let mut keep = vec![true; inst.edge_count()];
        keep[z as usize] = false;
        keep[u as usize] = false;
        let prof = inst.profile_of(&keep);
        if prof.components.len() > 1 {
            forced.push(z);
            forced.push(u);
            removed[z as usize] = true;
            removed[u as usize] = true;
        } else {
            deleted.push(u);
            removed[u as usize] = true;
        }
    }
    if forced.is_empty() && deleted.is_empty() {
        let mut g = inst.clone();
        g.set_pairs_eliminated(true);
        return Pp1Result {
            children: vec![SubInstance::identity(g)],
            forced,
            deleted,
        };
    }
    let keep: Vec<bool> = removed.iter().map(|&r| !r).collect();
    let prof = inst.profile_of(&keep);
    let mut children = Vec::new();
    for comp in &prof.components {
        let order: Vec<NodeId> = comp.iter().copied().collect();
        let new_of = |v: NodeId| order.binary_search(&v).unwrap() as NodeId;
        let mut edges = Vec::new();
        let mut map = Vec::new();
        for (pid, e) in inst.edges().iter().enumerate() {
            if keep[pid] && comp.contains(&e.u) && comp.contains(&e.v) {
                edges.push(Edge {
                    u: new_of(e.u),
                    v: new_of(e.v),
                    cost: e.cost,
                });
                map.push(pid as EdgeId);
            }
        }
        children.push(SubInstance {
            graph: MapInstance::from_parts(order.len() as u32, edges, true),
            to_parent: map,
        });
    }
    Pp1Result {
        children,
        forced,
        deleted,
    }
}

// ---------------------------------------------------------------------
// pp2: redundant 4-cycles
// ---------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct Redundant4Cycle {
    /// Cycle order a, b, c, d where ab and cd are the zero-edges.
    pub nodes: [NodeId; 4],
    /// Cycle edges in order: ab (zero), bc (unit), cd (zero), da (unit).
    pub edges: [EdgeId; 4],
}

/// All redundant 4-cycles: 4-cycles with two nonadjacent zero-edges, two
/// unit-edges, two nonadjacent nodes of degree two in the whole graph,
/// and not spanning all nodes. Distinct redundant 4-cycles are disjoint.
pub fn find_redundant_4cycles(inst: &MapInstance) -> Vec<Redundant4Cycle> {
    let mut out: Vec<Redundant4Cycle> = Vec::new();
    if inst.node_count() <= 4 {
        return out;
    }
    let zeros: Vec<EdgeId> = inst.zero_edges().collect();
    let find_edge = |a: NodeId, b: NodeId| -> Option<EdgeId> {
        inst.incident(a)
            .iter()
            .copied()
            .filter(|&e| inst.edge(e).touches(b))
            .min()
    };
    for (i, &e1) in zeros.iter().enumerate() {
        for &e2 in &zeros[i + 1..] {
            let (a, b) = (inst.edge(e1).u, inst.edge(e1).v);
            // Two cyclic arrangements of the second zero-edge.
            for (c, d) in [
                (inst.edge(e2).u, inst.edge(e2).v),
                (inst.edge(e2).v, inst.edge(e2).u),
            ] {
                let (Some(bc), Some(da)) = (find_edge(b, c), find_edge(d, a)) else {
                    continue;
                };
                // Opposite node pairs of cycle a,b,c,d: {a,c} and {b,d}.
                let deg_ok = (inst.degree(a) == 2 && inst.degree(c) == 2)
                    || (inst.degree(b) == 2 && inst.degree(d) == 2);
                if !deg_ok {
                    continue;
                }
                let cyc = Redundant4Cycle {
                    nodes: [a, b, c, d],
                    edges: [e1, bc, e2, da],
                };
                if !out
                    .iter()
                    .any(|c0| c0.nodes.iter().any(|n| cyc.nodes.contains(n)))
                {
                    out.push(cyc);
                }
                break;
            }
        }
    }
    out
}

pub struct Pp2Result {
    pub child: SubInstance,
    pub cycles: Vec<[EdgeId; 4]>,
}

/// Contracts every redundant 4-cycle. The 4q cycle edges are forced into
/// the final solution (adding cost 2 per cycle at reassembly).
pub fn contract_redundant_4cycles(inst: &MapInstance) -> Pp2Result {
    let cycles = find_redundant_4cycles(inst);
    let mut all: Vec<EdgeId> = Vec::new();
    for c in &cycles {
        all.extend_from_slice(&c.edges);
    }
    let contraction = inst.contract(&all);
    let mut to_parent = vec![0; contraction.inst.edge_count()];
    for (old, new) in contraction.edge_map.iter().enumerate() {
        if let Some(nid) = new {
            to_parent[*nid as usize] = old as EdgeId;
        }
    }
    Pp2Result {
        child: SubInstance {
            graph: contraction.inst,
            to_parent,
        },
        cycles: cycles.iter().map(|c| c.edges).collect(),
    }
}

// ---------------------------------------------------------------------
// pp3: cut nodes
// ---------------------------------------------------------------------

/// Splits a 2EC graph into its biconnected blocks; each block is 2NC or
/// a pair of nodes with two parallel edges. Edge sets partition E.
pub fn block_decompose(inst: &MapInstance) -> Vec<SubInstance> {
    let comps = biconnected_edge_components(inst);
    let mut out = Vec::new();
    for comp in comps {
        let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
        for &e in &comp {
            nodes.insert(inst.edge(e).u);
            nodes.insert(inst.edge(e).v);
        }
        let order: Vec<NodeId> = nodes.iter().copied().collect();
        let new_of = |v: NodeId| order.binary_search(&v).unwrap() as NodeId;
        let mut edges = Vec::new();
        for &e in &comp {
            let ed = inst.edge(e);
            edges.push(Edge {
                u: new_of(ed.u),
                v: new_of(ed.v),
                cost: ed.cost,
            });
        }
        out.push(SubInstance {
            graph: MapInstance::from_parts(order.len() as u32, edges, inst.pairs_eliminated()),
            to_parent: comp,
        });
    }
    out
}

/// Edge sets of the biconnected components (multigraph-aware: a parallel
/// copy of a tree edge is a back edge).
fn biconnected_edge_components(inst: &MapInstance) -> Vec<Vec<EdgeId>> {
    let n = inst.node_count() as usize;
    let mut tin = vec![u32::MAX; n];
    let mut low = vec![u32::MAX; n];
    let mut timer = 0u32;
    let mut estack: Vec<EdgeId> = Vec::new();
    let mut comps: Vec<Vec<EdgeId>> = Vec::new();

    struct Frame {
        v: usize,
        pe: Option<EdgeId>,
        it: usize,
    }
    for root in 0..n {
        if tin[root] != u32::MAX {
            continue;
        }
        tin[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut stack = vec![Frame {
            v: root,
            pe: None,
            it: 0,
        }];
        while let Some(top) = stack.last_mut() {
            let v = top.v;
            if top.it < inst.incident(v as NodeId).len() {
                let eid = inst.incident(v as NodeId)[top.it];
                top.it += 1;
                if Some(eid) == top.pe {
                    continue;
                }
                let e = inst.edge(eid);
                let w = e.other(v as NodeId) as usize;
                if tin[w] == u32::MAX {
                    estack.push(eid);
                    tin[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push(Frame {
                        v: w,
                        pe: Some(eid),
                        it: 0,
                    });
                } else if tin[w] < tin[v] {
                    estack.push(eid);
                    low[v] = low[v].min(tin[w]);
                }
            } else {
                let pe = top.pe;
                stack.pop();
                if let Some(parent) = stack.last() {
                    let p = parent.v;
                    low[p] = low[p].min(low[v]);
                    if low[v] >= tin[p] {
                        let mut comp = Vec::new();
                        while let Some(&top_e) = estack.last() {
                            estack.pop();
                            comp.push(top_e);
                            if Some(top_e) == pe {
                                break;
                            }
                        }
                        if !comp.is_empty() {
                            comp.sort_unstable();
                            comps.push(comp);
                        }
                    }
                }
            }
        }
    }
    comps.sort_by_key(|c| c.first().copied());
    comps
}

// ---------------------------------------------------------------------
// pp4: bad pairs
// ---------------------------------------------------------------------

/// A bad pair: a zero-edge whose endpoint deletion disconnects the graph,
/// with the resulting bp-components.
#[derive(Clone, Debug)]
pub struct BadPair {
    pub zero_edge: EdgeId,
    pub v: NodeId,
    pub w: NodeId,
    pub components: Vec<BTreeSet<NodeId>>,
}

#[derive(Clone, Debug, Default)]
pub struct BadPairStructure {
    pub pairs: Vec<BadPair>,
}

/// Every zero-edge vw with G - {v,w} disconnected, plus its
/// bp-components.
pub fn find_bad_pairs(inst: &MapInstance) -> BadPairStructure {
    let mut pairs = Vec::new();
    for z in inst.zero_edges() {
        let e = inst.edge(z);
        let comps = components_without(inst, e.u, e.v);
        if comps.len() >= 2 {
            pairs.push(BadPair {
                zero_edge: z,
                v: e.u,
                w: e.v,
                components: comps,
            });
        }
    }
    BadPairStructure { pairs }
}

fn components_without(inst: &MapInstance, v: NodeId, w: NodeId) -> Vec<BTreeSet<NodeId>> {
    let n = inst.node_count() as usize;
    let mut dsu = Dsu::new(n);
    for e in inst.edges() {
        if e.touches(v) || e.touches(w) {
            continue;
        }
        dsu.union(e.u as usize, e.v as usize);
    }
    let mut reps: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
    for x in 0..n as NodeId {
        if x == v || x == w {
            continue;
        }
        reps.entry(dsu.find(x as usize)).or_default().insert(x);
    }
    reps.into_values().collect()
}

/// Number of bad pairs of `bp` with both endpoints inside `nodes`.
fn bp_count(bp: &BadPairStructure, nodes: &BTreeSet<NodeId>) -> usize {
    bp.pairs
        .iter()
        .filter(|p| nodes.contains(&p.v) && nodes.contains(&p.w))
        .count()
}

/// Picks a bad pair all-but-one of whose bp-components are free of bad
/// pairs, by descending into the second-most-loaded component until its
/// bad-pair count reaches zero.
pub fn pick_bad_pair(inst: &MapInstance) -> Option<BadPair> {
    let bp = find_bad_pairs(inst);
    let mut cur = bp.pairs.first()?.clone();
    loop {
        let mut comps = cur.components.clone();
        comps.sort_by(|a, b| {
            bp_count(&bp, b)
                .cmp(&bp_count(&bp, a))
                .then(a.iter().next().cmp(&b.iter().next()))
        });
        if comps.len() < 2 || bp_count(&bp, &comps[1]) == 0 {
            return Some(cur);
        }
        let inner = bp
            .pairs
            .iter()
            .find(|p| comps[1].contains(&p.v) && comps[1].contains(&p.w))
            .expect("count was nonzero");
        cur = inner.clone();
    }
}

/// The sharpened cover bound: contract all redundant 4-cycles and split
/// at cut nodes, repeatedly, then sum 2 per contracted cycle plus the
/// minimum 2-edge-cover cost of every resulting piece. Requires an input
/// with no cut nodes, no bad pairs and no {0,1}-edge-pairs.
pub fn tau_hat(inst: &MapInstance) -> Result<u64, AlgoError> {
    if !inst.zero_one_pairs().is_empty() {
        return Err(AlgoError::Precondition {
            detail: format!("tau_hat: instance has {{0,1}}-edge-pairs"),
        });
    }
    if !inst.connectivity_profile().cut_nodes.is_empty() {
        return Err(AlgoError::Precondition {
            detail: format!("tau_hat: instance has cut nodes"),
        });
    }
    if !find_bad_pairs(inst).pairs.is_empty() {
        return Err(AlgoError::Precondition {
            detail: format!("tau_hat: instance has bad pairs"),
        });
    }
    tau_hat_unchecked(inst)
}

fn tau_hat_unchecked(inst: &MapInstance) -> Result<u64, AlgoError> {
    let mut acc: u64 = 0;
    let mut work: Vec<MapInstance> = vec![inst.clone()];
    while let Some(g) = work.pop() {
        if g.node_count() <= 1 {
            continue;
        }
        let cycles = find_redundant_4cycles(&g);
        if !cycles.is_empty() {
            acc += 2 * cycles.len() as u64;
            let pp2 = contract_redundant_4cycles(&g);
            work.push(pp2.child.graph);
            continue;
        }
        if !g.connectivity_profile().cut_nodes.is_empty() {
            for b in block_decompose(&g) {
                work.push(b.graph);
            }
            continue;
        }
        acc += cover::tau(&g)?;
    }
    Ok(acc)
}

/// The two instance variants derived from a bp-component: the induced
/// subgraph with both bad-pair nodes, and the same with the zero-edge
/// contracted. A one-node component keeps the edge in both variants.
fn bp_variants(
    inst: &MapInstance,
    pair: &BadPair,
    comp: &BTreeSet<NodeId>,
) -> (SubInstance, SubInstance) {
    let mut nodes = comp.clone();
    nodes.insert(pair.v);
    nodes.insert(pair.w);
    let (kept_graph, kept_map) = inst.induced(&nodes);
    let kept = SubInstance {
        graph: kept_graph,
        to_parent: kept_map,
    };
    if comp.len() == 1 {
        return (kept.clone(), kept);
    }
    let local_zero = kept
        .to_parent
        .iter()
        .position(|&pid| pid == pair.zero_edge)
        .expect("zero-edge must be inside the kept variant") as EdgeId;
    let contraction = kept.graph.contract(&[local_zero]);
    let mut to_parent = vec![0; contraction.inst.edge_count()];
    for (old, new) in contraction.edge_map.iter().enumerate() {
        if let Some(nid) = new {
            to_parent[*nid as usize] = kept.to_parent[old];
        }
    }
    (
        kept,
        SubInstance {
            graph: contraction.inst,
            to_parent,
        },
    )
}

pub struct Pp4Result {
    pub zero_edge: EdgeId,
    pub allocated: usize,
    pub modes: Vec<BpMode>,
    pub children: Vec<SubInstance>,
}

/// Allocates the bad pair's zero-edge: compares the sharpened bounds of
/// the kept and contracted variants on every leaf bp-component; on
/// equality the edge goes to the first equal component, otherwise to the
/// remainder component C1. Children are ordered C1 first.
pub fn allocate_bad_pair(inst: &MapInstance, pair: &BadPair) -> Result<Pp4Result, AlgoError> {
    let bp = find_bad_pairs(inst);
    let mut comps = pair.components.clone();
    comps.sort_by(|a, b| {
        bp_count(&bp, b)
            .cmp(&bp_count(&bp, a))
            .then(a.iter().next().cmp(&b.iter().next()))
    });
    for c in &comps[1..] {
        if bp_count(&bp, c) != 0 {
            return Err(AlgoError::Precondition {
                detail: format!("bad pair does not satisfy the leaf-component condition"),
            });
        }
    }
    let variants: Vec<(SubInstance, SubInstance)> = comps
        .iter()
        .map(|c| bp_variants(inst, pair, c))
        .collect();
    let mut equal_at: Option<usize> = None;
    for (i, _) in comps.iter().enumerate().skip(1) {
        let (kept, contracted) = &variants[i];
        let t_kept = tau_hat_unchecked(&kept.graph)?;
        let t_con = tau_hat_unchecked(&contracted.graph)?;
        if t_con > t_kept {
            return Err(AlgoError::Structure {
                detail: format!(
                    "contracted bound {t_con} exceeds kept bound {t_kept} on a leaf component"
                ),
            });
        }
        if t_con == t_kept && equal_at.is_none() {
            equal_at = Some(i);
        }
    }
    let allocated = equal_at.unwrap_or(0);
    let mut children = Vec::new();
    let mut modes = Vec::new();
    for (i, (kept, contracted)) in variants.into_iter().enumerate() {
        if i == allocated {
            children.push(kept);
            modes.push(BpMode::KeptEdge);
        } else {
            children.push(contracted);
            modes.push(BpMode::Contracted);
        }
    }
    Ok(Pp4Result {
        zero_edge: pair.zero_edge,
        allocated,
        modes,
        children,
    })
}

// ---------------------------------------------------------------------
// decompose / reassemble
// ---------------------------------------------------------------------

/// Applies pp1 once, then iterates pp2, pp3, pp4 until every leaf is
/// well-structured (or a single node, which needs no solving).
pub fn decompose(inst: &MapInstance) -> Result<Decomposition, AlgoError> {
    if !inst.is_2ec() {
        return Err(AlgoError::Precondition {
            detail: format!("decompose requires a 2-edge-connected instance"),
        });
    }
    let mut leaves = Vec::new();
    let root = if inst.pairs_eliminated() || inst.zero_one_pairs().is_empty() {
        let mut g = inst.clone();
        g.set_pairs_eliminated(true);
        decompose_rec(&g, &mut leaves)?
    } else {
        let pp1 = eliminate_01_pairs(inst);
        let mut children = Vec::new();
        for sub in pp1.children {
            let node = decompose_rec(&sub.graph, &mut leaves)?;
            children.push(TraceChild {
                to_parent: sub.to_parent,
                node: Box::new(node),
            });
        }
        TraceNode::Pp1 {
            forced: pp1.forced,
            deleted: pp1.deleted,
            children,
        }
    };
    Ok(Decomposition { root, leaves })
}

fn decompose_rec(g: &MapInstance, leaves: &mut Vec<MapInstance>) -> Result<TraceNode, AlgoError> {
    if g.node_count() <= 1 {
        let leaf_index = leaves.len();
        leaves.push(g.clone());
        return Ok(TraceNode::Leaf {
            leaf_index,
            n_nodes: g.node_count(),
        });
    }
    let cycles = find_redundant_4cycles(g);
    if !cycles.is_empty() {
        let pp2 = contract_redundant_4cycles(g);
        let node = decompose_rec(&pp2.child.graph, leaves)?;
        return Ok(TraceNode::Pp2 {
            cycles: pp2.cycles,
            child: TraceChild {
                to_parent: pp2.child.to_parent,
                node: Box::new(node),
            },
        });
    }
    if !g.connectivity_profile().cut_nodes.is_empty() {
        let blocks = block_decompose(g);
        let mut children = Vec::new();
        for sub in blocks {
            let node = decompose_rec(&sub.graph, leaves)?;
            children.push(TraceChild {
                to_parent: sub.to_parent,
                node: Box::new(node),
            });
        }
        return Ok(TraceNode::Pp3 { children });
    }
    if let Some(pair) = pick_bad_pair(g) {
        let pp4 = allocate_bad_pair(g, &pair)?;
        let mut children = Vec::new();
        for sub in pp4.children {
            let node = decompose_rec(&sub.graph, leaves)?;
            children.push(TraceChild {
                to_parent: sub.to_parent,
                node: Box::new(node),
            });
        }
        return Ok(TraceNode::Pp4 {
            zero_edge: pp4.zero_edge,
            allocated: pp4.allocated,
            modes: pp4.modes,
            children,
        });
    }
    let leaf_index = leaves.len();
    leaves.push(g.clone());
    Ok(TraceNode::Leaf {
        leaf_index,
        n_nodes: g.node_count(),
    })
}

/// Rebuilds a root-level edge set from per-leaf solutions: mapped-back
/// child solutions union the forced edges of every trace node. Every
/// leaf solution is checked for feasibility on its leaf instance first.
pub fn reassemble(
    decomp: &Decomposition,
    leaf_solutions: &[Vec<EdgeId>],
) -> Result<Vec<EdgeId>, AlgoError> {
    if leaf_solutions.len() != decomp.leaves.len() {
        return Err(AlgoError::Precondition {
            detail: format!(
                "expected {} leaf solutions, got {}",
                decomp.leaves.len(),
                leaf_solutions.len()
            ),
        });
    }
    for (i, (leaf, sol)) in decomp.leaves.iter().zip(leaf_solutions).enumerate() {
        if leaf.node_count() <= 1 {
            if !sol.is_empty() {
                return Err(AlgoError::InfeasibleSolution {
                    detail: format!("leaf {i} is a single node but its solution is nonempty"),
                });
            }
            continue;
        }
        if !crate::oracle::verify_2ecss(leaf, sol) {
            return Err(AlgoError::InfeasibleSolution {
                detail: format!("leaf {i} solution is not a 2-ECSS of its instance"),
            });
        }
    }
    let mut out = emit(&decomp.root, leaf_solutions);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn emit(node: &TraceNode, sols: &[Vec<EdgeId>]) -> Vec<EdgeId> {
    match node {
        TraceNode::Leaf { leaf_index, .. } => sols[*leaf_index].clone(),
        TraceNode::Pp1 {
            forced, children, ..
        } => {
            let mut out = forced.clone();
            for ch in children {
                let inner = emit(&ch.node, sols);
                out.extend(inner.iter().map(|&e| ch.to_parent[e as usize]));
            }
            out
        }
        TraceNode::Pp2 { cycles, child } => {
            let mut out: Vec<EdgeId> = cycles.iter().flatten().copied().collect();
            let inner = emit(&child.node, sols);
            out.extend(inner.iter().map(|&e| child.to_parent[e as usize]));
            out
        }
        TraceNode::Pp3 { children } => {
            let mut out = Vec::new();
            for ch in children {
                let inner = emit(&ch.node, sols);
                out.extend(inner.iter().map(|&e| ch.to_parent[e as usize]));
            }
            out
        }
        TraceNode::Pp4 {
            zero_edge,
            children,
            ..
        } => {
            let mut out = vec![*zero_edge];
            for ch in children {
                let inner = emit(&ch.node, sols);
                out.extend(inner.iter().map(|&e| ch.to_parent[e as usize]));
            }
            out
        }
    }
}

/// Composed certified lower bound along the trace: leaf minimum-cover
/// costs plus forced-edge contributions at pair splits and cycle
/// contractions.
pub fn composed_lower_bound(decomp: &Decomposition, leaf_taus: &[u64]) -> Result<u64, AlgoError> {
    if leaf_taus.len() != decomp.leaves.len() {
        return Err(AlgoError::Precondition {
            detail: format!("leaf tau count mismatch"),
        });
    }
    Ok(lb_rec(&decomp.root, leaf_taus))
}

fn lb_rec(node: &TraceNode, taus: &[u64]) -> u64 {
    match node {
        TraceNode::Leaf { leaf_index, .. } => taus[*leaf_index],
        TraceNode::Pp1 {
            forced, children, ..
        } => {
            // Each essential pair contributes its unit half.
            let forced_units = (forced.len() / 2) as u64;
            forced_units + children.iter().map(|c| lb_rec(&c.node, taus)).sum::<u64>()
        }
        TraceNode::Pp2 { cycles, child } => 2 * cycles.len() as u64 + lb_rec(&child.node, taus),
        TraceNode::Pp3 { children } | TraceNode::Pp4 { children, .. } => {
            children.iter().map(|c| lb_rec(&c.node, taus)).sum()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{COST_UNIT, COST_ZERO};
    use crate::oracle;

    fn inst(n: u32, raw: &[(u32, u32, u8)]) -> MapInstance {
        MapInstance::validate(n, raw).unwrap()
    }

    fn is_block_shape(g: &MapInstance) -> bool {
        g.is_2nc() || (g.node_count() == 2 && g.edge_count() == 2)
    }

    #[test]
    fn well_structured_k4() {
        let g = inst(
            4,
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
        );
        let (ok, v) = verify_well_structured(&g);
        assert!(ok, "{v:?}");
    }

    #[test]
    fn cex_a_has_pair_violation() {
        let g = oracle::gen_counterexample('a', 1).unwrap();
        let (_, v) = verify_well_structured(&g);
        assert!(v.contains(&Violation::ZeroOnePair));
    }

    #[test]
    fn cex_d_has_bad_pair() {
        let g = oracle::gen_counterexample('d', 1).unwrap();
        let (_, v) = verify_well_structured(&g);
        assert!(v.contains(&Violation::BadPair));
    }

    #[test]
    fn pp1_no_pairs_identity() {
        let g = inst(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let r = eliminate_01_pairs(&g);
        assert_eq!(r.children.len(), 1);
        assert!(r.forced.is_empty() && r.deleted.is_empty());
    }

    #[test]
    fn pp1_inessential_pair_unit_deleted() {
        let g = oracle::gen_counterexample('a', 1).unwrap();
        let r = eliminate_01_pairs(&g);
        assert!(r.forced.is_empty());
        assert_eq!(r.deleted.len(), 1);
        assert_eq!(g.edge(r.deleted[0]).cost, COST_UNIT);
        assert_eq!(r.children.len(), 1);
        assert!(r.children[0].graph.zero_one_pairs().is_empty());
    }

    #[test]
    fn pp1_essential_pair_splits() {
        // Two triangles joined only by a {0,1} pair between nodes 0 and 3.
        let g = inst(
            6,
            &[
                (0, 1, 1),
                (1, 2, 1),
                (2, 0, 1),
                (3, 4, 1),
                (4, 5, 1),
                (5, 3, 1),
                (0, 3, 0),
                (0, 3, 1),
            ],
        );
        let r = eliminate_01_pairs(&g);
        assert_eq!(r.forced.len(), 2);
        assert_eq!(r.children.len(), 2);
        for ch in &r.children {
            assert!(ch.graph.is_2ec());
        }
    }

    #[test]
    fn find_r4c_in_cex_b() {
        let g = oracle::gen_counterexample('b', 1).unwrap();
        assert_eq!(find_redundant_4cycles(&g).len(), 1);
    }

    #[test]
    fn no_r4c_when_spanning() {
        let g = inst(4, &[(0, 1, 0), (1, 2, 1), (2, 3, 0), (3, 0, 1)]);
        assert!(find_redundant_4cycles(&g).is_empty());
    }

    #[test]
    fn no_r4c_when_degrees_high() {
        let g = inst(
            6,
            &[
                (0, 1, 0),
                (1, 2, 1),
                (2, 3, 0),
                (3, 0, 1),
                (0, 4, 1),
                (1, 4, 1),
                (2, 5, 1),
                (3, 5, 1),
                (4, 5, 1),
            ],
        );
        assert!(find_redundant_4cycles(&g).is_empty());
    }

    #[test]
    fn contract_r4c_cex_b() {
        let g = oracle::gen_counterexample('b', 1).unwrap();
        let pp2 = contract_redundant_4cycles(&g);
        assert_eq!(pp2.cycles.len(), 1);
        assert_eq!(pp2.child.graph.node_count(), g.node_count() - 3);
    }

    #[test]
    fn blocks_of_triangle_chain() {
        let g = oracle::gen_counterexample('c', 3).unwrap();
        let blocks = block_decompose(&g);
        assert_eq!(blocks.len(), 3);
        for b in &blocks {
            assert_eq!(b.graph.node_count(), 3);
            assert!(b.graph.is_2nc());
        }
    }

    #[test]
    fn single_block_when_2nc() {
        let g = inst(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
        let blocks = block_decompose(&g);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].graph.edge_count(), 4);
    }

    #[test]
    fn bad_pairs_of_cex_d() {
        let g = oracle::gen_counterexample('d', 1).unwrap();
        let bp = find_bad_pairs(&g);
        assert_eq!(bp.pairs.len(), 1);
        assert_eq!((bp.pairs[0].v, bp.pairs[0].w), (6, 7));
    }

    #[test]
    fn well_structured_has_no_bad_pairs() {
        let g = oracle::gen_prop18(1);
        assert!(find_bad_pairs(&g).pairs.is_empty());
    }

    #[test]
    fn pick_single_bad_pair() {
        let g = oracle::gen_counterexample('d', 1).unwrap();
        let p = pick_bad_pair(&g).unwrap();
        assert_eq!((p.v, p.w), (6, 7));
    }

    #[test]
    fn pick_from_chained_bad_pairs() {
        // Daisy-chain three bad-pair gadgets: cycle core with three
        // pendant 4-cycles each attached at its zero-edge's endpoints.
        let g = oracle::gen_counterexample('d', 3).unwrap();
        let p = pick_bad_pair(&g).unwrap();
        // All-but-one components of the returned pair are bad-pair-free.
        let bp = find_bad_pairs(&g);
        let loaded = p
            .components
            .iter()
            .filter(|c| bp_count(&bp, c) > 0)
            .count();
        assert!(loaded <= 1);
    }

    #[test]
    fn decompose_well_structured_is_identity() {
        let g = oracle::gen_prop18(1);
        let d = decompose(&g).unwrap();
        assert_eq!(d.leaves.len(), 1);
        assert!(matches!(d.root, TraceNode::Leaf { .. }));
    }

    #[test]
    fn decompose_cex_c_gives_triangles() {
        let g = oracle::gen_counterexample('c', 3).unwrap();
        let d = decompose(&g).unwrap();
        assert_eq!(d.leaves.len(), 3);
        for leaf in &d.leaves {
            let (ok, v) = verify_well_structured(leaf);
            assert!(ok, "{v:?}");
        }
    }

    #[test]
    fn decompose_leaves_always_well_structured() {
        for seed in 0..60u64 {
            let g = oracle::gen_random_with_obstructions(seed).unwrap();
            let d = decompose(&g).unwrap();
            for leaf in &d.leaves {
                if leaf.node_count() <= 1 {
                    continue;
                }
                let (ok, v) = verify_well_structured(leaf);
                assert!(ok, "seed {seed}: {v:?}");
                assert!(is_block_shape(leaf), "seed {seed}: leaf not block-shaped");
            }
        }
    }

    #[test]
    fn reassemble_preserves_opt_on_obstructed_instances() {
        for seed in 0..40u64 {
            let g = oracle::gen_random_with_obstructions(seed).unwrap();
            if g.edge_count() > 20 {
                continue;
            }
            let d = decompose(&g).unwrap();
            let mut sols = Vec::new();
            for leaf in &d.leaves {
                if leaf.node_count() <= 1 {
                    sols.push(Vec::new());
                    continue;
                }
                let c = oracle::brute_opt_2ecss(leaf, 24).unwrap();
                sols.push(c.edges);
            }
            let root_sol = reassemble(&d, &sols).unwrap();
            assert!(
                oracle::verify_2ecss(&g, &root_sol),
                "seed {seed}: reassembled solution infeasible"
            );
            let opt = oracle::brute_opt_2ecss(&g, 24).unwrap().cost;
            let cost = g.cost_of(&root_sol);
            assert_eq!(cost, opt, "seed {seed}: reassembled cost {cost} vs opt {opt}");
        }
    }

    #[test]
    fn tau_hat_on_well_structured_equals_tau() {
        let g = oracle::gen_prop18(1);
        assert_eq!(tau_hat(&g).unwrap(), cover::tau(&g).unwrap());
    }

    #[test]
    fn fig2_allocation_prefers_the_small_side() {
        // Bad pair {a,b}; a 5-cycle side C1 with a chord to b, and a
        // 2-node side C2. The equality of sharpened bounds drives the
        // zero-edge to the small side; summed covers then match opt = 8.
        // Nodes: a=0, v2=1, v3=2, v4=3, v5=4, b=5, w3=6, w4=7.
        let g = inst(
            8,
            &[
                (0, 1, 1), // a v2
                (1, 2, 1), // v2 v3
                (2, 3, 1), // v3 v4
                (3, 4, 1), // v4 v5
                (4, 0, 1), // v5 a
                (0, 5, 0), // ab (zero)
                (5, 6, 1), // b w3
                (6, 7, 1), // w3 w4
                (7, 0, 1), // w4 a
                (2, 5, 1), // v3 b (chord)
            ],
        );
        let pair = pick_bad_pair(&g).unwrap();
        assert_eq!(g.edge(pair.zero_edge).cost, COST_ZERO);
        let r = allocate_bad_pair(&g, &pair).unwrap();
        // The kept-edge variant must be the component {w3, w4} = {6, 7}.
        let kept_child = &r.children[r.allocated];
        assert_eq!(r.modes[r.allocated], BpMode::KeptEdge);
        assert_eq!(kept_child.graph.node_count(), 4);
        // Summed minimum covers of the two variants equal opt(G) = 8.
        let total: u64 = r
            .children
            .iter()
            .map(|c| cover::tau(&c.graph).unwrap())
            .sum();
        assert_eq!(total, 8);
        assert_eq!(oracle::brute_opt_2ecss(&g, 22).unwrap().cost, 8);
    }

    #[test]
    fn composed_bound_at_most_opt() {
        for seed in 0..30u64 {
            let g = oracle::gen_random_with_obstructions(seed).unwrap();
            if g.edge_count() > 20 {
                continue;
            }
            let d = decompose(&g).unwrap();
            let taus: Vec<u64> = d
                .leaves
                .iter()
                .map(|l| {
                    if l.node_count() <= 1 {
                        0
                    } else {
                        cover::tau(l).unwrap()
                    }
                })
                .collect();
            let lb = composed_lower_bound(&d, &taus).unwrap();
            let opt = oracle::brute_opt_2ecss(&g, 24).unwrap().cost;
            assert!(lb <= opt, "seed {seed}: lb {lb} > opt {opt}");
        }
    }
}
