//! Loop-free multigraphs with {0,1} edge costs whose zero-edges form a
//! matching, plus the connectivity primitives (bridges, 2ec-blocks, cut
//! nodes, edge-disjoint path queries) used by every later phase.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::GraphError;

pub type NodeId = u32;
pub type EdgeId = u32;

/// Cost of an edge; zero-edges form a matching.
pub const COST_ZERO: u8 = 0;
pub const COST_UNIT: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: u8,
}

impl Edge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

/// A validated MAP instance: a loop-free multigraph with edge costs in
/// {0,1}, at most two parallel copies per node pair, and zero-edges
/// forming a matching. `pairs_eliminated` records whether parallel
/// {0,1}-edge-pairs have already been removed.
#[derive(Clone, Debug)]
pub struct MapInstance {
    n: u32,
    edges: Vec<Edge>,
    adj: Vec<Vec<EdgeId>>,
    pairs_eliminated: bool,
}

impl MapInstance {
    /// Validates a raw edge list. Rejects loops, zero-edges that do not
    /// form a matching, and graphs that are not 2-edge-connected.
    /// More than two parallel copies of an edge are reduced to two
    /// (an edge-minimal 2-ECSS never needs a third copy); when capping,
    /// zero copies are kept in preference to unit copies.
    pub fn validate(n: u32, raw: &[(NodeId, NodeId, u8)]) -> Result<Self, GraphError> {
        let mut edges: Vec<Edge> = Vec::new();
        for &(u, v, cost) in raw {
            if u == v {
                return Err(GraphError::LoopEdge { node: u });
            }
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange { node: u.max(v), n });
            }
            if cost > 1 {
                return Err(GraphError::BadCost { cost });
            }
            edges.push(Edge { u, v, cost });
        }
        // Cap parallel multiplicity at 2, keeping the two cheapest copies.
        let mut kept: Vec<Edge> = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            let mut rank = 0usize;
            for (j, f) in edges.iter().enumerate() {
                if i != j && same_pair(e, f) && (f.cost, j) < (e.cost, i) {
                    rank += 1;
                }
            }
            if rank < 2 {
                kept.push(*e);
            }
        }
        let inst = Self::from_kept(n, kept)?;
        if !inst.is_2ec() {
            return Err(GraphError::NotTwoEdgeConnected);
        }
        Ok(inst)
    }

    fn from_kept(n: u32, edges: Vec<Edge>) -> Result<Self, GraphError> {
        // Zero-edges must form a matching.
        let mut matched: Vec<bool> = vec![false; n as usize];
        for e in &edges {
            if e.cost == COST_ZERO {
                if matched[e.u as usize] || matched[e.v as usize] {
                    return Err(GraphError::ZeroEdgesNotMatching { node: e.u });
                }
                matched[e.u as usize] = true;
                matched[e.v as usize] = true;
            }
        }
        let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); n as usize];
        for (id, e) in edges.iter().enumerate() {
            adj[e.u as usize].push(id as EdgeId);
            adj[e.v as usize].push(id as EdgeId);
        }
        Ok(MapInstance {
            n,
            edges,
            adj,
            pairs_eliminated: false,
        })
    }

    /// Builds an instance from an already-clean edge list without the
    /// 2EC requirement. Used internally for subgraphs and sub-instances.
    pub(crate) fn from_parts(n: u32, edges: Vec<Edge>, pairs_eliminated: bool) -> Self {
        let mut inst = Self::from_kept(n, edges).expect("internal edge list must be clean");
        inst.pairs_eliminated = pairs_eliminated;
        inst
    }

    pub fn node_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id as usize]
    }

    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn cost_of(&self, ids: &[EdgeId]) -> u64 {
        ids.iter().map(|&e| self.edges[e as usize].cost as u64).sum()
    }

    pub fn total_cost(&self) -> u64 {
        self.edges.iter().map(|e| e.cost as u64).sum()
    }

    pub fn zero_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.cost == COST_ZERO)
            .map(|(i, _)| i as EdgeId)
    }

    pub fn unit_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.cost == COST_UNIT)
            .map(|(i, _)| i as EdgeId)
    }

    pub fn pairs_eliminated(&self) -> bool {
        self.pairs_eliminated
    }

    pub(crate) fn set_pairs_eliminated(&mut self, val: bool) {
        self.pairs_eliminated = val;
    }

    /// Parallel {0,1}-edge-pairs currently present, as (zero, unit) id pairs.
    pub fn zero_one_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.cost != COST_ZERO {
                continue;
            }
            for &jd in &self.adj[e.u as usize] {
                let f = &self.edges[jd as usize];
                if jd as usize != i && same_pair(e, f) && f.cost == COST_UNIT {
                    out.push((i as EdgeId, jd));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// True iff the whole graph is 2-edge-connected (>= 2 nodes,
    /// connected, bridgeless).
    pub fn is_2ec(&self) -> bool {
        if self.n < 2 {
            return false;
        }
        let prof = self.connectivity_profile();
        prof.components.len() == 1 && prof.bridges.is_empty()
    }

    /// True iff the graph is 2-node-connected: >= 3 nodes, connected, and
    /// free of cut nodes. The two-node block with two parallel edges is
    /// deliberately not 2NC; callers treat it as its own block kind.
    pub fn is_2nc(&self) -> bool {
        if self.n < 3 {
            return false;
        }
        let prof = self.connectivity_profile();
        prof.components.len() == 1 && prof.cut_nodes.is_empty()
    }

    /// Bridges, 2ec-blocks, cut nodes, components and white/black labels
    /// of this graph, via an iterative lowpoint traversal.
    pub fn connectivity_profile(&self) -> ConnectivityProfile {
        profile_subgraph(self, None)
    }

    /// Same profile restricted to the subgraph with edge set `in_sub`.
    pub fn profile_of(&self, in_sub: &[bool]) -> ConnectivityProfile {
        profile_subgraph(self, Some(in_sub))
    }

    /// True iff `inst - edge` still has two edge-disjoint paths between the
    /// endpoints of `edge`, i.e. the edge can be discarded while keeping
    /// its component 2-edge-connected. Unit-capacity max-flow.
    pub fn non_essential_check(&self, edge: EdgeId) -> bool {
        let e = &self.edges[edge as usize];
        let mut usable = vec![true; self.edges.len()];
        usable[edge as usize] = false;
        edge_disjoint_paths_at_least_two(self, &usable, e.u, e.v)
    }

    /// Contracts every edge in `edge_set`: each connected node group joined
    /// by contracted edges becomes a single node; loops vanish; parallel
    /// multiplicity is capped at 2 (cheapest copies win). Returns the new
    /// instance, the old-to-new node map and, for every surviving old edge,
    /// its new edge id.
    pub fn contract(&self, edge_set: &[EdgeId]) -> Contraction {
        let mut dsu = Dsu::new(self.n as usize);
        for &id in edge_set {
            let e = &self.edges[id as usize];
            dsu.union(e.u as usize, e.v as usize);
        }
        // Dense new ids in order of old representative id.
        let mut reps: Vec<usize> = (0..self.n as usize).map(|v| dsu.find(v)).collect();
        let mut sorted: Vec<usize> = reps.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let new_id_of = |rep: usize| sorted.binary_search(&rep).unwrap() as NodeId;
        let node_map: Vec<NodeId> = (0..self.n as usize)
            .map(|v| new_id_of(reps[v]))
            .collect();
        reps.clear();

        let contracted: BTreeSet<EdgeId> = edge_set.iter().copied().collect();
        // Candidate survivors: non-loop edges, cheapest two per pair.
        let mut survivors: Vec<(EdgeId, Edge)> = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if contracted.contains(&(id as EdgeId)) {
                continue;
            }
            let nu = node_map[e.u as usize];
            let nv = node_map[e.v as usize];
            if nu == nv {
                continue; // loop (includes parallel copies of contracted edges)
            }
            survivors.push((
                id as EdgeId,
                Edge {
                    u: nu.min(nv),
                    v: nu.max(nv),
                    cost: e.cost,
                },
            ));
        }
        let mut keep = vec![true; survivors.len()];
        for i in 0..survivors.len() {
            let mut rank = 0usize;
            for j in 0..survivors.len() {
                if i != j
                    && same_pair(&survivors[i].1, &survivors[j].1)
                    && (survivors[j].1.cost, j) < (survivors[i].1.cost, i)
                {
                    rank += 1;
                }
            }
            if rank >= 2 {
                keep[i] = false;
            }
        }
        let mut edges = Vec::new();
        let mut edge_map: Vec<Option<EdgeId>> = vec![None; self.edges.len()];
        for (k, (old_id, e)) in survivors.iter().enumerate() {
            if keep[k] {
                edge_map[*old_id as usize] = Some(edges.len() as EdgeId);
                edges.push(*e);
            }
        }
        let inst = Self::from_parts(sorted.len() as u32, edges, self.pairs_eliminated);
        Contraction {
            inst,
            node_map,
            edge_map,
        }
    }

    /// Induced sub-instance on `nodes`; edge ids are remapped densely and
    /// reported back through `edge_map` (new -> old).
    pub fn induced(&self, nodes: &BTreeSet<NodeId>) -> (MapInstance, Vec<EdgeId>) {
        let order: Vec<NodeId> = nodes.iter().copied().collect();
        let new_of = |v: NodeId| order.binary_search(&v).unwrap() as NodeId;
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if nodes.contains(&e.u) && nodes.contains(&e.v) {
                edges.push(Edge {
                    u: new_of(e.u),
                    v: new_of(e.v),
                    cost: e.cost,
                });
                edge_map.push(id as EdgeId);
            }
        }
        (
            Self::from_parts(order.len() as u32, edges, self.pairs_eliminated),
            edge_map,
        )
    }
}

fn same_pair(a: &Edge, b: &Edge) -> bool {
    (a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u)
}

/// Result of contracting an edge set.
pub struct Contraction {
    pub inst: MapInstance,
    /// old node id -> new node id
    pub node_map: Vec<NodeId>,
    /// old edge id -> surviving new edge id (None if removed)
    pub edge_map: Vec<Option<EdgeId>>,
}

/// Bridges, 2ec-blocks (maximal bridgeless connected subgraphs with >= 2
/// nodes), cut nodes, connected components, and white/black node labels.
/// A node is white iff it lies in some 2ec-block.
#[derive(Clone, Debug)]
pub struct ConnectivityProfile {
    pub bridges: Vec<EdgeId>,
    pub blocks: Vec<Block>,
    pub cut_nodes: BTreeSet<NodeId>,
    /// Node partition into connected components (only nodes that carry at
    /// least one subgraph edge or belong to the graph when unrestricted).
    pub components: Vec<BTreeSet<NodeId>>,
    /// node -> index into `blocks`, if white
    pub block_of: Vec<Option<usize>>,
    /// node -> index into `components`
    pub comp_of: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct Block {
    pub nodes: BTreeSet<NodeId>,
    pub edges: Vec<EdgeId>,
}

impl ConnectivityProfile {
    pub fn is_bridge(&self, e: EdgeId) -> bool {
        self.bridges.binary_search(&e).is_ok()
    }

    pub fn is_white(&self, v: NodeId) -> bool {
        self.block_of[v as usize].is_some()
    }

    /// Stable key of a block: its minimum node id.
    pub fn block_key(&self, idx: usize) -> NodeId {
        *self.blocks[idx].nodes.iter().next().unwrap()
    }

    /// Stable key of a component: its minimum node id.
    pub fn comp_key(&self, idx: usize) -> NodeId {
        *self.components[idx].iter().next().unwrap()
    }

    /// Bridges of the component `ci` incident to a node of block `bi`.
    pub fn bridges_at_block(&self, inst: &MapInstance, bi: usize) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for &e in &self.bridges {
            let ed = inst.edge(e);
            if self.blocks[bi].nodes.contains(&ed.u) || self.blocks[bi].nodes.contains(&ed.v) {
                out.push(e);
            }
        }
        out
    }

    /// A block is pendant when it is incident to exactly one bridge.
    pub fn is_pendant(&self, inst: &MapInstance, bi: usize) -> bool {
        self.bridges_at_block(inst, bi).len() == 1
    }
}

/// Lowpoint DFS over an edge-subgraph; parallel edges are distinguished by
/// edge id, so a second copy of the tree edge counts as a back edge.
fn profile_subgraph(inst: &MapInstance, in_sub: Option<&[bool]>) -> ConnectivityProfile {
    let n = inst.n as usize;
    let usable = |e: EdgeId| in_sub.map_or(true, |s| s[e as usize]);
    let mut tin = vec![u32::MAX; n];
    let mut low = vec![u32::MAX; n];
    let mut timer: u32 = 0;
    let mut bridges: Vec<EdgeId> = Vec::new();
    let mut cut_nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut comp_of: Vec<Option<usize>> = vec![None; n];
    let mut components: Vec<BTreeSet<NodeId>> = Vec::new();

    // Nodes that participate: all nodes when unrestricted; for an edge
    // subgraph, every node (isolated ones become their own component only
    // when the full graph is profiled; subgraph profiling is used on
    // 2-edge covers where every node has degree >= 2).
    for root in 0..n {
        if tin[root] != u32::MAX {
            continue;
        }
        let comp_idx = components.len();
        let mut comp = BTreeSet::new();
        // Iterative DFS carrying the incoming edge id.
        let mut stack: Vec<(usize, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        tin[root] = timer;
        low[root] = timer;
        timer += 1;
        comp.insert(root as NodeId);
        comp_of[root] = Some(comp_idx);
        let mut root_children = 0usize;
        while let Some(&mut (v, pe, ref mut it)) = stack.last_mut() {
            let adj = &inst.adj[v];
            if *it < adj.len() {
                let eid = adj[*it];
                *it += 1;
                if !usable(eid) || Some(eid) == pe {
                    continue;
                }
                let e = &inst.edges[eid as usize];
                let w = e.other(v as NodeId) as usize;
                if tin[w] == u32::MAX {
                    tin[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    comp.insert(w as NodeId);
                    comp_of[w] = Some(comp_idx);
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, Some(eid), 0));
                } else {
                    low[v] = low[v].min(tin[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > tin[p] {
                        bridges.push(pe.unwrap());
                    }
                    if p != root && low[v] >= tin[p] {
                        cut_nodes.insert(p as NodeId);
                    }
                }
            }
        }
        if root_children >= 2 {
            cut_nodes.insert(root as NodeId);
        }
        components.push(comp);
    }
    bridges.sort_unstable();

    // 2ec-blocks: components of the graph minus bridges, with >= 2 nodes.
    let bridge_set: BTreeSet<EdgeId> = bridges.iter().copied().collect();
    let mut dsu = Dsu::new(n);
    for (id, e) in inst.edges.iter().enumerate() {
        if usable(id as EdgeId) && !bridge_set.contains(&(id as EdgeId)) {
            dsu.union(e.u as usize, e.v as usize);
        }
    }
    let mut block_idx_of_rep: Vec<Option<usize>> = vec![None; n];
    let mut blocks: Vec<Block> = Vec::new();
    let mut block_of: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        let r = dsu.find(v);
        if dsu.size(r) >= 2 {
            let idx = *block_idx_of_rep[r].get_or_insert_with(|| {
                blocks.push(Block {
                    nodes: BTreeSet::new(),
                    edges: Vec::new(),
                });
                blocks.len() - 1
            });
            blocks[idx].nodes.insert(v as NodeId);
            block_of[v] = Some(idx);
        }
    }
    for (id, e) in inst.edges.iter().enumerate() {
        if usable(id as EdgeId) && !bridge_set.contains(&(id as EdgeId)) {
            let r = dsu.find(e.u as usize);
            if let Some(idx) = block_idx_of_rep[r] {
                blocks[idx].edges.push(id as EdgeId);
            }
        }
    }
    // Deterministic block order by minimum node.
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| *blocks[i].nodes.iter().next().unwrap());
    let mut remap = vec![0usize; blocks.len()];
    for (new_i, &old_i) in order.iter().enumerate() {
        remap[old_i] = new_i;
    }
    let mut sorted_blocks: Vec<Block> = Vec::with_capacity(blocks.len());
    for &old_i in &order {
        sorted_blocks.push(blocks[old_i].clone());
    }
    for b in block_of.iter_mut() {
        if let Some(i) = b {
            *i = remap[*i];
        }
    }

    ConnectivityProfile {
        bridges,
        blocks: sorted_blocks,
        cut_nodes,
        components,
        block_of,
        comp_of,
    }
}

/// Unit-capacity max-flow check: are there two edge-disjoint u,v paths
/// using only `usable` edges? Two rounds of augmenting BFS suffice.
pub(crate) fn edge_disjoint_paths_at_least_two(
    inst: &MapInstance,
    usable: &[bool],
    s: NodeId,
    t: NodeId,
) -> bool {
    // Residual structure: each undirected edge has capacity one in the
    // direction it is first used and gains a reverse residual arc.
    let m = inst.edges.len();
    let mut flow_dir: Vec<i8> = vec![0; m]; // 0 unused, +1 used u->v, -1 used v->u
    for _round in 0..2 {
        // BFS over residual arcs.
        let n = inst.n as usize;
        let mut pred: Vec<Option<(EdgeId, NodeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = alloc::collections::VecDeque::new();
        seen[s as usize] = true;
        queue.push_back(s);
        'bfs: while let Some(x) = queue.pop_front() {
            for &eid in &inst.adj[x as usize] {
                if !usable[eid as usize] {
                    continue;
                }
                let e = &inst.edges[eid as usize];
                let y = e.other(x);
                let forward_sign: i8 = if x == e.u { 1 } else { -1 };
                // Residual capacity exists unless the edge already carries
                // flow in this direction.
                if flow_dir[eid as usize] == forward_sign {
                    continue;
                }
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    pred[y as usize] = Some((eid, x));
                    if y == t {
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
        }
        if !seen[t as usize] {
            return false;
        }
        // Augment along the found path.
        let mut cur = t;
        while cur != s {
            let (eid, from) = pred[cur as usize].unwrap();
            let e = &inst.edges[eid as usize];
            let forward_sign: i8 = if from == e.u { 1 } else { -1 };
            flow_dir[eid as usize] = if flow_dir[eid as usize] == -forward_sign {
                0 // cancel
            } else {
                forward_sign
            };
            cur = from;
        }
    }
    true
}

/// Union-find with sizes.
pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }

    pub fn size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn inst(n: u32, raw: &[(u32, u32, u8)]) -> MapInstance {
        MapInstance::validate(n, raw).unwrap()
    }

    #[test]
    fn validate_triangle() {
        let g = inst(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.zero_edges().count(), 0);
    }

    #[test]
    fn validate_rejects_loop() {
        let err = MapInstance::validate(2, &[(1, 1, 1), (0, 1, 1), (0, 1, 1)]).unwrap_err();
        assert!(matches!(err, GraphError::LoopEdge { .. }));
    }

    #[test]
    fn validate_rejects_zero_nonmatching() {
        let err = MapInstance::validate(
            3,
            &[(0, 1, 0), (1, 2, 0), (2, 0, 1), (0, 1, 1), (1, 2, 1)],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::ZeroEdgesNotMatching { .. }));
    }

    #[test]
    fn validate_caps_multiplicity() {
        let g = inst(2, &[(0, 1, 1), (0, 1, 1), (0, 1, 1)]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn validate_rejects_non_2ec() {
        // Path on three nodes.
        let err = MapInstance::validate(3, &[(0, 1, 1), (1, 2, 1)]).unwrap_err();
        assert!(matches!(err, GraphError::NotTwoEdgeConnected));
    }

    #[test]
    fn profile_four_cycle() {
        let g = inst(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
        let p = g.connectivity_profile();
        assert!(p.bridges.is_empty());
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.blocks[0].nodes.len(), 4);
        assert!(p.cut_nodes.is_empty());
    }

    #[test]
    fn profile_path() {
        // A path is not a valid instance; profile it as a subgraph.
        let g = inst(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let p = g.profile_of(&[true, true, false]);
        assert_eq!(p.bridges, vec![0, 1]);
        assert!(p.blocks.is_empty());
        assert!(p.cut_nodes.contains(&1));
    }

    #[test]
    fn profile_two_triangles_sharing_node() {
        let g = inst(
            5,
            &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1), (3, 4, 1), (4, 2, 1)],
        );
        let p = g.connectivity_profile();
        assert!(p.bridges.is_empty());
        // A 2ec-block is a maximal bridgeless connected subgraph, so the
        // union of the two triangles is a single block; the node-sharing
        // split into two pieces belongs to the biconnected decomposition.
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.blocks[0].nodes.len(), 5);
        assert_eq!(p.cut_nodes.iter().copied().collect::<Vec<_>>(), vec![2]);
        assert!(g.is_2ec());
        assert!(!g.is_2nc());
    }

    #[test]
    fn two_parallel_edges_are_2ec() {
        let g = inst(2, &[(0, 1, 1), (0, 1, 1)]);
        assert!(g.is_2ec());
        assert!(!g.is_2nc());
    }

    #[test]
    fn contract_triangle_edge() {
        let g = inst(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let c = g.contract(&[0]);
        assert_eq!(c.inst.node_count(), 2);
        assert_eq!(c.inst.edge_count(), 2);
        assert_eq!(c.node_map[0], c.node_map[1]);
    }

    #[test]
    fn contract_whole_cycle() {
        let g = inst(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
        let c = g.contract(&[0, 1, 2, 3]);
        assert_eq!(c.inst.node_count(), 1);
        assert_eq!(c.inst.edge_count(), 0);
    }

    #[test]
    fn non_essential_on_cycle_and_chord() {
        let g = inst(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
        for e in 0..4 {
            assert!(!g.non_essential_check(e));
        }
        let h = inst(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 2, 1)]);
        assert!(h.non_essential_check(4));
    }

    #[test]
    fn k4_edges_all_non_essential() {
        let g = inst(
            4,
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
        );
        for e in 0..6 {
            assert!(g.non_essential_check(e));
        }
    }

    #[test]
    fn bridge_block_edge_partition() {
        let g = inst(
            5,
            &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1), (3, 4, 1), (4, 2, 1)],
        );
        let p = g.profile_of(&[true, true, true, true, false, false]);
        let block_edges: usize = p.blocks.iter().map(|b| b.edges.len()).sum();
        assert_eq!(p.bridges.len() + block_edges, 4);
    }
}
