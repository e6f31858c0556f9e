//! Graph decomposition: from a full network to the reduced components that
//! actually admit a switching decision.
//!
//! The pipeline collapses pendant trees (they have a unique feasible
//! configuration), splits the remaining core into biconnected components,
//! keeps only components containing a cycle, merges equivalent nodes,
//! reduces each component to its topological minor by lifting degree-2
//! nodes, selects the component root nearest the supply, and produces the
//! cycle set consumed by the cycle constraints.
//!
//! Currents are aggregated so that each component is self-contained: a
//! component node absorbs the load of every pendant tree and every
//! downstream component hanging below it, which is what makes components
//! independently solvable.

use crate::network::{Network, Violation};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("reduce: input network is invalid: {0}")]
    InvalidNetwork(Violation),
    #[error("reduce: component containing `{0}` is unreachable from the supply root")]
    UnreachableComponent(String),
    #[error("reduce: simple-cycle enumeration exceeded the cap of {cap} cycles; use the basis strategy")]
    CycleCapExceeded { cap: usize },
}

/// Strategy for building the cycle set of a minor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleStrategy {
    /// Every simple cycle, found by bounded enumeration. The correctness
    /// reference; cost grows with the cycle space.
    AllSimpleCycles,
    /// A fundamental cycle basis from a depth-first spanning tree plus
    /// composite blockers realised through virtual arc variables.
    BasisWithVirtualEdges,
}

/// A node of the component subgraph, with its aggregated current.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentNode {
    pub id: String,
    /// Amperes, including absorbed pendant trees and downstream components.
    pub current: f64,
}

/// An edge of the component subgraph (indices into `ReducedComponent::nodes`).
#[derive(Debug, Clone, Serialize)]
pub struct ComponentEdge {
    pub a: usize,
    pub b: usize,
    pub resistance: f64,
    pub switchable: bool,
}

/// A reduced (lifted) edge of the minor. Endpoints are positions in
/// `ReducedComponent::minor_nodes`; `internal` lists the chain of original
/// nodes the edge stands for, ordered from the `u` end to the `v` end, and
/// `segment_resistances` holds the k+1 segment values along the same
/// orientation.
#[derive(Debug, Clone, Serialize)]
pub struct MinorEdge {
    pub u: usize,
    pub v: usize,
    pub internal: Vec<usize>,
    pub segment_resistances: Vec<f64>,
}

impl MinorEdge {
    pub fn chain_len(&self) -> usize {
        self.internal.len()
    }

    pub fn total_resistance(&self) -> f64 {
        self.segment_resistances.iter().sum()
    }
}

/// Metadata for a pair of basis cycles sharing a path: the composite cycle
/// they close is blocked through a virtual arc variable.
#[derive(Debug, Clone, Serialize)]
pub struct Blocker {
    /// Endpoints of the shared path (positions in `minor_nodes`).
    pub endpoints: (usize, usize),
    /// Node path from `endpoints.0` to `endpoints.1` through the first cycle.
    pub first_side: Vec<usize>,
    /// Node path from `endpoints.0` to `endpoints.1` through the second cycle.
    pub second_side: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CycleKind {
    /// A directly penalised cycle: every enumerated cycle in the
    /// all-simple strategy, a fundamental cycle in the basis strategy.
    Basis,
    /// The composite cycle of two basis cycles sharing a path.
    CompositeBlocker(Blocker),
}

/// A cycle of the minor; `nodes` is the cyclic sequence in canonical form
/// (smallest node first, smaller neighbour second).
#[derive(Debug, Clone, Serialize)]
pub struct Cycle {
    pub nodes: Vec<usize>,
    #[serde(flatten)]
    pub kind: CycleKind,
}

/// A non-trivial biconnected component together with its topological minor.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedComponent {
    /// All component nodes (reduced nodes and chain internals) with
    /// aggregated currents.
    pub nodes: Vec<ComponentNode>,
    /// The component subgraph edges after node merging (the G_C edges).
    pub edges: Vec<ComponentEdge>,
    /// Indices into `nodes` of the nodes surviving in the minor, ascending.
    pub minor_nodes: Vec<usize>,
    pub minor_edges: Vec<MinorEdge>,
    /// Position in `minor_nodes` of the component root.
    pub root: usize,
    pub cycles: Vec<Cycle>,
    pub strategy: CycleStrategy,
}

impl ReducedComponent {
    pub fn gc_node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn gc_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn minor_node_count(&self) -> usize {
        self.minor_nodes.len()
    }

    pub fn minor_edge_count(&self) -> usize {
        self.minor_edges.len()
    }

    /// Id of a minor node by its position.
    pub fn minor_id(&self, pos: usize) -> &str {
        &self.nodes[self.minor_nodes[pos]].id
    }

    /// Aggregated current of a minor node by its position.
    pub fn minor_current(&self, pos: usize) -> f64 {
        self.nodes[self.minor_nodes[pos]].current
    }

    /// Adjacency over minor positions: `(neighbour position, edge index)`.
    pub fn minor_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.minor_nodes.len()];
        for (ei, e) in self.minor_edges.iter().enumerate() {
            adj[e.u].push((e.v, ei));
            adj[e.v].push((e.u, ei));
        }
        adj
    }

    pub fn total_current(&self) -> f64 {
        self.nodes.iter().map(|n| n.current).sum()
    }

    pub fn basis_cycle_count(&self) -> usize {
        self.cycles
            .iter()
            .filter(|c| matches!(c.kind, CycleKind::Basis))
            .count()
    }

    pub fn blocker_count(&self) -> usize {
        self.cycles.len() - self.basis_cycle_count()
    }
}

/// An edge outside every non-trivial component; its current is fixed by
/// the loads hanging below it, independent of any switching choice.
#[derive(Debug, Clone, Serialize)]
pub struct FixedEdge {
    pub u: String,
    pub v: String,
    pub resistance: f64,
    pub current: f64,
}

impl FixedEdge {
    pub fn loss(&self) -> f64 {
        self.resistance * self.current * self.current
    }
}

/// Full decomposition of a network.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub components: Vec<ReducedComponent>,
    pub fixed_edges: Vec<FixedEdge>,
    pub articulation_points: Vec<String>,
    pub total_current: f64,
}

impl Decomposition {
    /// Configuration-independent loss on pendant and bridge edges, watts.
    pub fn fixed_loss(&self) -> f64 {
        self.fixed_edges.iter().map(FixedEdge::loss).sum()
    }
}

#[derive(Debug, Clone)]
pub struct DecomposeOptions {
    pub strategy: CycleStrategy,
    /// Cap on enumerated simple cycles per component.
    pub cycle_cap: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            strategy: CycleStrategy::AllSimpleCycles,
            cycle_cap: 10_000,
        }
    }
}

// ---------------------------------------------------------------------------
// indexed working graph

#[derive(Debug, Clone)]
struct IndexedGraph {
    ids: Vec<String>,
    currents: Vec<f64>,
    root: usize,
    /// (a, b, resistance, switchable)
    edges: Vec<(usize, usize, f64, bool)>,
}

impl IndexedGraph {
    fn from_network(net: &Network) -> Result<Self, ReduceError> {
        if let Some(v) = crate::network::validate(net).into_iter().next() {
            return Err(ReduceError::InvalidNetwork(v));
        }
        Ok(Self::from_network_raw(net))
    }

    /// Indexes a structurally sound network without running validation;
    /// used for derived graphs (the collapsed core absorbs pendant loads
    /// into the root, which a fresh validation would reject).
    fn from_network_raw(net: &Network) -> Self {
        let index: BTreeMap<&str, usize> = net
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.as_str(), i))
            .collect();
        Self {
            ids: net.nodes.iter().map(|n| n.id.clone()).collect(),
            currents: net.nodes.iter().map(|n| n.load_current).collect(),
            root: net.root_index().expect("network has a root"),
            edges: net
                .edges
                .iter()
                .map(|e| (index[e.u.as_str()], index[e.v.as_str()], e.resistance, e.switchable))
                .collect(),
        }
    }

    fn adjacency(&self, alive_edge: &[bool]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.ids.len()];
        for (i, &(a, b, _, _)) in self.edges.iter().enumerate() {
            if alive_edge[i] {
                adj[a].push(i);
                adj[b].push(i);
            }
        }
        adj
    }

    fn other(&self, edge: usize, node: usize) -> usize {
        let (a, b, _, _) = self.edges[edge];
        if a == node {
            b
        } else {
            a
        }
    }
}

/// Iteratively removes degree-1 non-root nodes, folding each removed load
/// into its neighbour. Returns the core network; total current is conserved.
pub fn collapse_pendant_trees(net: &Network) -> Network {
    let (core, _) = collapse_with_log(net).expect("collapse requires a valid network");
    core
}

fn collapse_with_log(net: &Network) -> Result<(Network, Vec<FixedEdge>), ReduceError> {
    let mut g = IndexedGraph::from_network(net)?;
    let n = g.ids.len();
    let mut alive_node = vec![true; n];
    let mut alive_edge = vec![true; g.edges.len()];
    let mut degree = vec![0usize; n];
    for &(a, b, _, _) in &g.edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let adj = g.adjacency(&alive_edge);

    let mut removed = Vec::new();
    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&i| degree[i] == 1 && i != g.root)
        .collect();
    while let Some(leaf) = queue.pop_front() {
        if !alive_node[leaf] || degree[leaf] != 1 || leaf == g.root {
            continue;
        }
        let edge = adj[leaf]
            .iter()
            .copied()
            .find(|&e| alive_edge[e])
            .expect("degree-1 node has a live edge");
        let neighbour = g.other(edge, leaf);
        let carried = g.currents[leaf];
        removed.push(FixedEdge {
            u: g.ids[neighbour].clone(),
            v: g.ids[leaf].clone(),
            resistance: g.edges[edge].2,
            current: carried,
        });
        g.currents[neighbour] += carried;
        alive_node[leaf] = false;
        alive_edge[edge] = false;
        degree[leaf] = 0;
        degree[neighbour] -= 1;
        if degree[neighbour] == 1 && neighbour != g.root {
            queue.push_back(neighbour);
        }
    }

    let keep: Vec<usize> = (0..n).filter(|&i| alive_node[i]).collect();
    let core = Network {
        nodes: keep
            .iter()
            .map(|&i| crate::network::Node {
                id: g.ids[i].clone(),
                load_current: g.currents[i],
                is_root: i == g.root,
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| alive_edge[i])
            .map(|(_, &(a, b, r, s))| crate::network::Edge {
                u: g.ids[a].clone(),
                v: g.ids[b].clone(),
                resistance: r,
                switchable: s,
            })
            .collect(),
    };
    Ok((core, removed))
}

/// A maximal biconnected component over a core graph: node and edge index
/// sets, both sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockComponent {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

impl BlockComponent {
    /// Non-trivial components contain a cycle: at least as many edges as nodes.
    pub fn is_nontrivial(&self) -> bool {
        self.edges.len() >= self.nodes.len()
    }
}

/// Standard biconnected decomposition by a single depth-first traversal.
/// Components partition the edge set; ordering is by smallest contained
/// node index. Also returns the articulation points.
pub fn biconnected_components(
    node_count: usize,
    edges: &[(usize, usize)],
) -> (Vec<BlockComponent>, Vec<usize>) {
    let mut adj = vec![Vec::new(); node_count];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push(i);
        adj[b].push(i);
    }

    const UNSET: usize = usize::MAX;
    let mut disc = vec![UNSET; node_count];
    let mut low = vec![0usize; node_count];
    let mut timer = 0usize;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut raw_components: Vec<Vec<usize>> = Vec::new();
    let mut is_artic = vec![false; node_count];

    // iterative DFS: (node, parent edge, next adjacency offset)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for start in 0..node_count {
        if disc[start] != UNSET {
            continue;
        }
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        let mut root_children = 0usize;
        stack.push((start, UNSET, 0));
        while let Some(top) = stack.len().checked_sub(1) {
            let (u, parent_edge) = (stack[top].0, stack[top].1);
            if stack[top].2 < adj[u].len() {
                let e = adj[u][stack[top].2];
                stack[top].2 += 1;
                if e == parent_edge {
                    continue;
                }
                let (a, b) = edges[e];
                let w = if a == u { b } else { a };
                if disc[w] == UNSET {
                    edge_stack.push(e);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if u == start {
                        root_children += 1;
                    }
                    stack.push((w, e, 0));
                } else if disc[w] < disc[u] {
                    edge_stack.push(e);
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        if p != start {
                            is_artic[p] = true;
                        }
                        let mut comp = Vec::new();
                        while let Some(&e) = edge_stack.last() {
                            edge_stack.pop();
                            comp.push(e);
                            if e == parent_edge {
                                break;
                            }
                        }
                        raw_components.push(comp);
                    }
                }
            }
        }
        if root_children >= 2 {
            is_artic[start] = true;
        }
    }

    let mut components: Vec<BlockComponent> = raw_components
        .into_iter()
        .map(|mut es| {
            es.sort_unstable();
            let mut ns: BTreeSet<usize> = BTreeSet::new();
            for &e in &es {
                ns.insert(edges[e].0);
                ns.insert(edges[e].1);
            }
            BlockComponent {
                nodes: ns.into_iter().collect(),
                edges: es,
            }
        })
        .collect();
    components.sort_by_key(|c| c.nodes[0]);

    let artic = (0..node_count).filter(|&i| is_artic[i]).collect();
    (components, artic)
}

/// Keeps only components containing a cycle.
pub fn filter_nontrivial(components: Vec<BlockComponent>) -> Vec<BlockComponent> {
    components.into_iter().filter(BlockComponent::is_nontrivial).collect()
}

// ---------------------------------------------------------------------------
// per-component processing

/// A component as a local subgraph under reduction.
#[derive(Debug, Clone)]
struct WorkComponent {
    /// (id, aggregated current), local index order = core index order
    nodes: Vec<(String, f64)>,
    /// Nodes removed by merging no longer belong to the component.
    alive: Vec<bool>,
    /// Lifted nodes stay in the component as chain internals but leave the minor.
    lifted: Vec<bool>,
    edges: Vec<WorkEdge>,
    alive_edge: Vec<bool>,
    root: usize,
}

#[derive(Debug, Clone)]
struct WorkEdge {
    a: usize,
    b: usize,
    /// chain internal nodes ordered a -> b (local indices)
    internal: Vec<usize>,
    /// k+1 segment resistances ordered a -> b
    segs: Vec<f64>,
    switchable: bool,
}

impl WorkEdge {
    /// Internal node list and segments as seen from `from` to the other end.
    fn oriented(&self, from: usize) -> (Vec<usize>, Vec<f64>) {
        if self.a == from {
            (self.internal.clone(), self.segs.clone())
        } else {
            let mut i = self.internal.clone();
            let mut s = self.segs.clone();
            i.reverse();
            s.reverse();
            (i, s)
        }
    }
}

impl WorkComponent {
    fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .enumerate()
            .filter(|&(i, e)| self.alive_edge[i] && (e.a == v || e.b == v))
            .count()
    }

    fn live_neighbours(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !self.alive_edge[i] {
                continue;
            }
            if e.a == v {
                out.push((e.b, i));
            } else if e.b == v {
                out.push((e.a, i));
            }
        }
        out
    }

    fn adjacent(&self, x: usize, y: usize) -> bool {
        self.edges.iter().enumerate().any(|(i, e)| {
            self.alive_edge[i] && ((e.a == x && e.b == y) || (e.a == y && e.b == x))
        })
    }
}

/// Merges nodes with identical neighbour sets (excluding each other),
/// summing their currents. A merge that would create a parallel edge —
/// which any shared neighbour would — is refused, so the component stays a
/// simple graph and its spanning structure is preserved.
fn merge_equivalent_nodes(comp: &mut WorkComponent) {
    loop {
        let live: Vec<usize> = (0..comp.nodes.len()).filter(|&i| comp.alive[i]).collect();
        let neighbour_sets: BTreeMap<usize, BTreeSet<usize>> = live
            .iter()
            .map(|&v| {
                (
                    v,
                    comp.live_neighbours(v).into_iter().map(|(w, _)| w).collect(),
                )
            })
            .collect();
        let mut merged = false;
        'outer: for (ai, &a) in live.iter().enumerate() {
            for &b in &live[ai + 1..] {
                let mut na = neighbour_sets[&a].clone();
                na.remove(&b);
                let mut nb = neighbour_sets[&b].clone();
                nb.remove(&a);
                if na != nb || na.is_empty() {
                    continue;
                }
                // a shared neighbour would turn into a parallel edge pair,
                // an a-b edge into a self-loop: refuse those merges
                if !na.is_disjoint(&nb) || neighbour_sets[&a].contains(&b) {
                    continue;
                }
                let keep = if b == comp.root { b } else { a };
                let drop = if keep == a { b } else { a };
                comp.nodes[keep].1 += comp.nodes[drop].1;
                comp.alive[drop] = false;
                for (i, e) in comp.edges.iter_mut().enumerate() {
                    if !comp.alive_edge[i] {
                        continue;
                    }
                    if e.a == drop {
                        e.a = keep;
                    }
                    if e.b == drop {
                        e.b = keep;
                    }
                }
                merged = true;
                break 'outer;
            }
        }
        if !merged {
            return;
        }
    }
}

/// Repeatedly lifts degree-2 non-root nodes whose neighbours are not yet
/// adjacent, concatenating chains. Lowest-index eligible node first.
fn lift_to_minor(comp: &mut WorkComponent) {
    loop {
        let mut lifted = false;
        for m in 0..comp.nodes.len() {
            if !comp.alive[m] || comp.lifted[m] || m == comp.root || comp.degree(m) != 2 {
                continue;
            }
            let nb = comp.live_neighbours(m);
            let ((x, e1), (y, e2)) = (nb[0], nb[1]);
            if x == y || comp.adjacent(x, y) {
                continue;
            }
            let (ix, sx) = comp.edges[e1].oriented(x);
            let (iy, sy) = comp.edges[e2].oriented(m);
            let mut internal = ix;
            internal.push(m);
            internal.extend(iy);
            let mut segs = sx;
            segs.extend(sy);
            comp.alive_edge[e1] = false;
            comp.alive_edge[e2] = false;
            comp.lifted[m] = true;
            comp.edges.push(WorkEdge {
                a: x,
                b: y,
                internal,
                segs,
                switchable: comp.edges[e1].switchable && comp.edges[e2].switchable,
            });
            comp.alive_edge.push(true);
            lifted = true;
            break;
        }
        if !lifted {
            return;
        }
    }
}

/// Component root: the component node nearest the supply in the full
/// network, ties broken by input order.
pub fn select_root(
    component_nodes: &[String],
    net: &Network,
) -> Result<String, ReduceError> {
    let adj = net.adjacency();
    let root = net
        .root_index()
        .ok_or(ReduceError::InvalidNetwork(Violation::NoRoot))?;
    let mut dist = vec![usize::MAX; net.nodes.len()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut best: Option<(usize, usize, &str)> = None;
    for id in component_nodes {
        let i = net
            .node_index(id)
            .ok_or_else(|| ReduceError::UnreachableComponent(id.clone()))?;
        if dist[i] == usize::MAX {
            return Err(ReduceError::UnreachableComponent(id.clone()));
        }
        if best.is_none_or(|(d, j, _)| (dist[i], i) < (d, j)) {
            best = Some((dist[i], i, id));
        }
    }
    best.map(|(_, _, id)| id.to_owned())
        .ok_or_else(|| ReduceError::UnreachableComponent("<empty>".into()))
}

// ---------------------------------------------------------------------------
// cycle sets

fn canonical_cycle(mut nodes: Vec<usize>) -> Vec<usize> {
    let min_pos = nodes
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    nodes.rotate_left(min_pos);
    if nodes.len() >= 3 && nodes[1] > *nodes.last().unwrap() {
        nodes[1..].reverse();
    }
    nodes
}

fn cycle_edge_set(nodes: &[usize]) -> BTreeSet<(usize, usize)> {
    (0..nodes.len())
        .map(|i| {
            let a = nodes[i];
            let b = nodes[(i + 1) % nodes.len()];
            (a.min(b), a.max(b))
        })
        .collect()
}

/// Enumerates all simple cycles of an undirected graph on `n` nodes, in
/// canonical form, sorted by (length, sequence). Errors beyond `cap`.
fn all_simple_cycles(
    n: usize,
    adj: &[Vec<usize>],
    cap: usize,
) -> Result<Vec<Vec<usize>>, ReduceError> {
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; n];

    // cycles are emitted once: anchored at their smallest node, with the
    // second node smaller than the last
    fn dfs(
        u: usize,
        start: usize,
        adj: &[Vec<usize>],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        cycles: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<(), ReduceError> {
        for &w in &adj[u] {
            if w == start && path.len() >= 3 {
                if path[1] < *path.last().unwrap() {
                    if cycles.len() >= cap {
                        return Err(ReduceError::CycleCapExceeded { cap });
                    }
                    cycles.push(path.clone());
                }
            } else if w > start && !on_path[w] {
                path.push(w);
                on_path[w] = true;
                dfs(w, start, adj, path, on_path, cycles, cap)?;
                on_path[w] = false;
                path.pop();
            }
        }
        Ok(())
    }

    for start in 0..n {
        path.clear();
        path.push(start);
        on_path[start] = true;
        dfs(start, start, adj, &mut path, &mut on_path, &mut cycles, cap)?;
        on_path[start] = false;
    }
    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(cycles)
}

/// Fundamental cycles of a depth-first spanning tree rooted at `root`.
fn fundamental_cycles(n: usize, adj: &[Vec<(usize, usize)>], root: usize) -> Vec<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut parent = vec![UNSET; n];
    let mut disc = vec![UNSET; n];
    let mut timer = 0;
    let mut chords: Vec<(usize, usize)> = Vec::new();

    let mut stack = vec![(root, UNSET, 0usize)];
    disc[root] = timer;
    timer += 1;
    while let Some(top) = stack.len().checked_sub(1) {
        let (u, pe) = (stack[top].0, stack[top].1);
        if stack[top].2 < adj[u].len() {
            let (w, e) = adj[u][stack[top].2];
            stack[top].2 += 1;
            if e == pe {
                continue;
            }
            if disc[w] == UNSET {
                disc[w] = timer;
                timer += 1;
                parent[w] = u;
                stack.push((w, e, 0));
            } else if disc[w] < disc[u] {
                chords.push((u, w));
            }
        } else {
            stack.pop();
        }
    }

    let mut cycles = Vec::new();
    for (u, w) in chords {
        // tree path u -> w plus the chord
        let mut seq = vec![u];
        let mut x = u;
        while x != w {
            x = parent[x];
            seq.push(x);
        }
        cycles.push(canonical_cycle(seq));
    }
    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cycles
}

/// Extracts the path from `a` to `b` formed by `edges`; `None` if the edge
/// set is not a single simple a-b path.
fn path_from_edges(a: usize, b: usize, edges: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(x, y) in edges {
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    let mut seq = vec![a];
    let mut prev = usize::MAX;
    let mut cur = a;
    while cur != b {
        let nexts: Vec<usize> = adj.get(&cur)?.iter().copied().filter(|&w| w != prev).collect();
        if nexts.len() != 1 {
            return None;
        }
        prev = cur;
        cur = nexts[0];
        seq.push(cur);
        if seq.len() > edges.len() + 1 {
            return None;
        }
    }
    if seq.len() == edges.len() + 1 {
        Some(seq)
    } else {
        None
    }
}

/// Builds the cycle set for a minor. The basis strategy appends one
/// composite blocker per pair of basis cycles sharing a path, provided
/// the composite is itself a simple cycle.
pub fn cycle_set(
    minor_node_count: usize,
    minor_edges: &[(usize, usize)],
    root: usize,
    strategy: CycleStrategy,
    cap: usize,
) -> Result<Vec<Cycle>, ReduceError> {
    let mut adj_plain = vec![Vec::new(); minor_node_count];
    let mut adj_indexed = vec![Vec::new(); minor_node_count];
    for (i, &(a, b)) in minor_edges.iter().enumerate() {
        adj_plain[a].push(b);
        adj_plain[b].push(a);
        adj_indexed[a].push((b, i));
        adj_indexed[b].push((a, i));
    }

    match strategy {
        CycleStrategy::AllSimpleCycles => {
            let cycles = all_simple_cycles(minor_node_count, &adj_plain, cap)?;
            Ok(cycles
                .into_iter()
                .map(|nodes| Cycle {
                    nodes,
                    kind: CycleKind::Basis,
                })
                .collect())
        }
        CycleStrategy::BasisWithVirtualEdges => {
            let basis = fundamental_cycles(minor_node_count, &adj_indexed, root);
            let edge_sets: Vec<BTreeSet<(usize, usize)>> =
                basis.iter().map(|c| cycle_edge_set(c)).collect();
            let mut out: Vec<Cycle> = basis
                .iter()
                .map(|nodes| Cycle {
                    nodes: nodes.clone(),
                    kind: CycleKind::Basis,
                })
                .collect();
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    let shared: BTreeSet<(usize, usize)> =
                        edge_sets[i].intersection(&edge_sets[j]).copied().collect();
                    if shared.is_empty() {
                        continue;
                    }
                    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
                    for &(x, y) in &shared {
                        *degree.entry(x).or_insert(0) += 1;
                        *degree.entry(y).or_insert(0) += 1;
                    }
                    let ends: Vec<usize> = degree
                        .iter()
                        .filter(|&(_, &d)| d == 1)
                        .map(|(&v, _)| v)
                        .collect();
                    if ends.len() != 2 {
                        continue; // shared part is not a single path
                    }
                    let (a, b) = (ends[0], ends[1]);
                    let side = |set: &BTreeSet<(usize, usize)>| {
                        let rest: BTreeSet<(usize, usize)> =
                            set.difference(&shared).copied().collect();
                        path_from_edges(a, b, &rest)
                    };
                    let (Some(first_side), Some(second_side)) =
                        (side(&edge_sets[i]), side(&edge_sets[j]))
                    else {
                        continue;
                    };
                    // composite must be a simple cycle: sides meet only at a, b
                    let interior_i: BTreeSet<usize> =
                        first_side[1..first_side.len() - 1].iter().copied().collect();
                    let interior_j: BTreeSet<usize> =
                        second_side[1..second_side.len() - 1].iter().copied().collect();
                    if !interior_i.is_disjoint(&interior_j) {
                        continue;
                    }
                    let mut nodes = first_side.clone();
                    nodes.extend(second_side[1..second_side.len() - 1].iter().rev());
                    out.push(Cycle {
                        nodes: canonical_cycle(nodes),
                        kind: CycleKind::CompositeBlocker(Blocker {
                            endpoints: (a, b),
                            first_side,
                            second_side,
                        }),
                    });
                }
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// full pipeline

/// Runs the whole decomposition pipeline on a validated network.
pub fn decompose(net: &Network, opts: &DecomposeOptions) -> Result<Decomposition, ReduceError> {
    let (core_net, mut fixed_edges) = collapse_with_log(net)?;
    let core = IndexedGraph::from_network_raw(&core_net);
    let edge_pairs: Vec<(usize, usize)> = core.edges.iter().map(|&(a, b, _, _)| (a, b)).collect();
    let (blocks, artic) = biconnected_components(core.ids.len(), &edge_pairs);

    // rooted block-cut tree for current aggregation: bc node = block index,
    // or blocks.len() + articulation position
    let artic_pos: BTreeMap<usize, usize> = artic.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let bc_count = blocks.len() + artic.len();
    let mut bc_adj = vec![Vec::new(); bc_count];
    for (bi, block) in blocks.iter().enumerate() {
        for &v in &block.nodes {
            if let Some(&ai) = artic_pos.get(&v) {
                bc_adj[bi].push(blocks.len() + ai);
                bc_adj[blocks.len() + ai].push(bi);
            }
        }
    }
    // attributed current per bc node: articulation nodes at their own bc
    // node, other nodes at their unique block
    let mut attributed = vec![0.0f64; bc_count];
    for (bi, block) in blocks.iter().enumerate() {
        for &v in &block.nodes {
            if !artic_pos.contains_key(&v) {
                attributed[bi] += core.currents[v];
            }
        }
    }
    for (ai, &v) in artic.iter().enumerate() {
        attributed[blocks.len() + ai] = core.currents[v];
    }

    let bc_root = if let Some(&ai) = artic_pos.get(&core.root) {
        blocks.len() + ai
    } else {
        blocks
            .iter()
            .position(|b| b.nodes.binary_search(&core.root).is_ok())
            .unwrap_or(0)
    };

    let mut bc_parent = vec![usize::MAX; bc_count];
    let mut order = Vec::new();
    if bc_count > 0 {
        let mut seen = vec![false; bc_count];
        let mut queue = VecDeque::from([bc_root]);
        seen[bc_root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &bc_adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    bc_parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut subtree = attributed.clone();
    for &u in order.iter().rev() {
        if bc_parent[u] != usize::MAX {
            subtree[bc_parent[u]] += subtree[u];
        }
    }

    // aggregated current of core node v as seen from block bi
    let agg_current = |v: usize, bi: usize| -> f64 {
        let mut total = core.currents[v];
        if let Some(&ai) = artic_pos.get(&v) {
            let bc_v = blocks.len() + ai;
            for &child in &bc_adj[bc_v] {
                if bc_parent[child] == bc_v && child != bi {
                    total += subtree[child];
                }
            }
        }
        total
    };

    // fixed current over trivial blocks (bridges): the gateway endpoint is
    // the block's parent articulation, or the supply root for the bc root
    for (bi, block) in blocks.iter().enumerate() {
        if block.is_nontrivial() {
            continue;
        }
        let &(a, b, r, _) = &core.edges[block.edges[0]];
        let near = if bc_parent[bi] != usize::MAX {
            artic[bc_parent[bi] - blocks.len()]
        } else {
            core.root
        };
        let far = if near == a { b } else { a };
        let current = match artic_pos.get(&far) {
            Some(&ai) => subtree[blocks.len() + ai],
            None => core.currents[far],
        };
        fixed_edges.push(FixedEdge {
            u: core.ids[near].clone(),
            v: core.ids[far].clone(),
            resistance: r,
            current,
        });
    }

    // non-trivial components, in block order
    let mut components = Vec::new();
    for (bi, block) in blocks.iter().enumerate() {
        if !block.is_nontrivial() {
            continue;
        }
        let local: BTreeMap<usize, usize> = block
            .nodes
            .iter()
            .enumerate()
            .map(|(li, &v)| (v, li))
            .collect();
        let root_id = select_root(
            &block.nodes.iter().map(|&v| core.ids[v].clone()).collect::<Vec<_>>(),
            net,
        )?;
        let root_local = block
            .nodes
            .iter()
            .position(|&v| core.ids[v] == root_id)
            .expect("selected root is a component node");

        let mut work = WorkComponent {
            nodes: block
                .nodes
                .iter()
                .map(|&v| (core.ids[v].clone(), agg_current(v, bi)))
                .collect(),
            alive: vec![true; block.nodes.len()],
            lifted: vec![false; block.nodes.len()],
            edges: block
                .edges
                .iter()
                .map(|&e| {
                    let (a, b, r, s) = core.edges[e];
                    WorkEdge {
                        a: local[&a],
                        b: local[&b],
                        internal: Vec::new(),
                        segs: vec![r],
                        switchable: s,
                    }
                })
                .collect(),
            alive_edge: vec![true; block.edges.len()],
            root: root_local,
        };

        merge_equivalent_nodes(&mut work);
        // G_C edges after merging, before lifting
        let gc_edges: Vec<(usize, usize, f64, bool)> = work
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| work.alive_edge[i])
            .map(|(_, e)| (e.a, e.b, e.segs[0], e.switchable))
            .collect();
        lift_to_minor(&mut work);

        // compact to the ReducedComponent layout
        let keep: Vec<usize> = (0..work.nodes.len()).filter(|&i| work.alive[i]).collect();
        let remap: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let nodes: Vec<ComponentNode> = keep
            .iter()
            .map(|&i| ComponentNode {
                id: work.nodes[i].0.clone(),
                current: work.nodes[i].1,
            })
            .collect();
        let edges: Vec<ComponentEdge> = gc_edges
            .iter()
            .map(|&(a, b, r, s)| ComponentEdge {
                a: remap[&a],
                b: remap[&b],
                resistance: r,
                switchable: s,
            })
            .collect();

        let minor_old: Vec<usize> = keep.iter().copied().filter(|&i| !work.lifted[i]).collect();
        let minor_nodes: Vec<usize> = minor_old.iter().map(|&i| remap[&i]).collect();
        let minor_pos: BTreeMap<usize, usize> = minor_old
            .iter()
            .enumerate()
            .map(|(pos, &old)| (old, pos))
            .collect();
        let mut minor_edges: Vec<MinorEdge> = work
            .edges
            .iter()
            .enumerate()
            .filter(|&(ei, _)| work.alive_edge[ei])
            .map(|(_, e)| {
                let (mut u, mut v) = (minor_pos[&e.a], minor_pos[&e.b]);
                let mut internal: Vec<usize> = e.internal.iter().map(|&i| remap[&i]).collect();
                let mut segs = e.segs.clone();
                if u > v {
                    std::mem::swap(&mut u, &mut v);
                    internal.reverse();
                    segs.reverse();
                }
                MinorEdge {
                    u,
                    v,
                    internal,
                    segment_resistances: segs,
                }
            })
            .collect();
        minor_edges.sort_by_key(|e| (e.u, e.v));
        let root_pos = minor_pos[&work.root];

        let pairs: Vec<(usize, usize)> = minor_edges.iter().map(|e| (e.u, e.v)).collect();
        let cycles = cycle_set(minor_nodes.len(), &pairs, root_pos, opts.strategy, opts.cycle_cap)?;

        components.push(ReducedComponent {
            nodes,
            edges,
            minor_nodes,
            minor_edges,
            root: root_pos,
            cycles,
            strategy: opts.strategy,
        });
    }

    fixed_edges.sort_by(|x, y| (x.u.as_str(), x.v.as_str()).cmp(&(y.u.as_str(), y.v.as_str())));
    Ok(Decomposition {
        components,
        fixed_edges,
        articulation_points: artic.iter().map(|&v| core.ids[v].clone()).collect(),
        total_current: net.total_load_current(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{load_ieee33, Edge, Node};

    fn net(nodes: &[(&str, f64, bool)], edges: &[(&str, &str, f64)]) -> Network {
        Network {
            nodes: nodes
                .iter()
                .map(|&(id, c, root)| Node {
                    id: id.into(),
                    load_current: c,
                    is_root: root,
                })
                .collect(),
            edges: edges
                .iter()
                .map(|&(u, v, r)| Edge {
                    u: u.into(),
                    v: v.into(),
                    resistance: r,
                    switchable: true,
                })
                .collect(),
        }
    }

    fn triangle() -> Network {
        net(
            &[("r", 0.0, true), ("a", 1.0, false), ("b", 1.0, false)],
            &[("r", "a", 1.0), ("r", "b", 1.0), ("a", "b", 1.0)],
        )
    }

    #[test]
    fn star_collapses_to_root() {
        let star = net(
            &[("r", 0.0, true), ("a", 1.0, false), ("b", 2.0, false), ("c", 3.0, false)],
            &[("r", "a", 1.0), ("r", "b", 1.0), ("r", "c", 1.0)],
        );
        let core = collapse_pendant_trees(&star);
        assert_eq!(core.nodes.len(), 1);
        assert_eq!(core.nodes[0].id, "r");
        assert_eq!(core.nodes[0].load_current, 6.0);
        assert!(core.edges.is_empty());
    }

    #[test]
    fn leaf_current_folds_into_neighbour() {
        let mut g = triangle();
        g.nodes.push(Node {
            id: "leaf".into(),
            load_current: 2.0,
            is_root: false,
        });
        g.edges.push(Edge {
            u: "a".into(),
            v: "leaf".into(),
            resistance: 0.3,
            switchable: true,
        });
        let core = collapse_pendant_trees(&g);
        assert_eq!(core.nodes.len(), 3);
        let a = core.nodes.iter().find(|n| n.id == "a").unwrap();
        assert_eq!(a.load_current, 3.0);
        let total: f64 = core.nodes.iter().map(|n| n.load_current).sum();
        assert_eq!(total, g.total_load_current());
    }

    #[test]
    fn cycle_is_a_collapse_fixpoint() {
        let g = triangle();
        let core = collapse_pendant_trees(&g);
        assert_eq!(core, g);
    }

    #[test]
    fn two_triangles_share_an_articulation_point() {
        let g = net(
            &[
                ("r", 0.0, true),
                ("a", 1.0, false),
                ("c", 1.0, false),
                ("d", 1.0, false),
                ("e", 1.0, false),
            ],
            &[
                ("r", "a", 1.0),
                ("a", "c", 1.0),
                ("c", "r", 1.0),
                ("c", "d", 1.0),
                ("d", "e", 1.0),
                ("e", "c", 1.0),
            ],
        );
        let idx = IndexedGraph::from_network(&g).unwrap();
        let pairs: Vec<(usize, usize)> = idx.edges.iter().map(|&(a, b, _, _)| (a, b)).collect();
        let (comps, artic) = biconnected_components(idx.ids.len(), &pairs);
        assert_eq!(comps.len(), 2);
        assert_eq!(artic, vec![2]); // node c
        assert!(comps.iter().all(|c| c.is_nontrivial()));

        // the far triangle roots at the articulation point
        let dec = decompose(&g, &DecomposeOptions::default()).unwrap();
        assert_eq!(dec.components.len(), 2);
        let far = &dec.components[1];
        assert_eq!(far.minor_id(far.root), "c");
        let near = &dec.components[0];
        assert_eq!(near.minor_id(near.root), "r");
        // downstream aggregation: c carries its own 1 A plus d + e
        let c_in_near = near
            .nodes
            .iter()
            .find(|n| n.id == "c")
            .unwrap();
        assert_eq!(c_in_near.current, 3.0);
        // inside the far component, c is the root and carries no extra load
        let c_in_far = far.nodes.iter().find(|n| n.id == "c").unwrap();
        assert_eq!(c_in_far.current, 1.0);
    }

    #[test]
    fn bridge_forms_a_trivial_component() {
        let g = net(
            &[("r", 0.0, true), ("a", 1.0, false)],
            &[("r", "a", 1.0)],
        );
        // a bare bridge survives collapse only through the root; rebuild a
        // two-cycle case instead: triangle - bridge - triangle
        let h = net(
            &[
                ("r", 0.0, true),
                ("a", 1.0, false),
                ("b", 1.0, false),
                ("x", 2.0, false),
                ("y", 1.0, false),
                ("z", 1.0, false),
            ],
            &[
                ("r", "a", 1.0),
                ("a", "b", 1.0),
                ("b", "r", 1.0),
                ("b", "x", 0.5),
                ("x", "y", 1.0),
                ("y", "z", 1.0),
                ("z", "x", 1.0),
            ],
        );
        drop(g);
        let idx = IndexedGraph::from_network(&h).unwrap();
        let pairs: Vec<(usize, usize)> = idx.edges.iter().map(|&(a, b, _, _)| (a, b)).collect();
        let (comps, _) = biconnected_components(idx.ids.len(), &pairs);
        assert_eq!(comps.len(), 3);
        let trivial: Vec<_> = comps.iter().filter(|c| !c.is_nontrivial()).collect();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial[0].edges.len(), 1);
        let kept = filter_nontrivial(comps);
        assert_eq!(kept.len(), 2);

        // the bridge carries everything hanging below x: 2 + 1 + 1
        let dec = decompose(&h, &DecomposeOptions::default()).unwrap();
        assert_eq!(dec.fixed_edges.len(), 1);
        let bridge = &dec.fixed_edges[0];
        assert_eq!((bridge.u.as_str(), bridge.v.as_str()), ("b", "x"));
        assert_eq!(bridge.current, 4.0);
        assert_eq!(bridge.loss(), 0.5 * 16.0);
        // the near triangle sees the whole far draw at b
        let near = &dec.components[0];
        let b_agg = near.nodes.iter().find(|n| n.id == "b").unwrap();
        assert_eq!(b_agg.current, 5.0);
    }

    #[test]
    fn tree_has_no_nontrivial_components() {
        let g = net(
            &[("r", 0.0, true), ("a", 1.0, false), ("b", 1.0, false)],
            &[("r", "a", 1.0), ("a", "b", 1.0)],
        );
        let dec = decompose(&g, &DecomposeOptions::default()).unwrap();
        assert!(dec.components.is_empty());
        assert_eq!(dec.fixed_edges.len(), 2);
        // currents: a-b carries 1, r-a carries 2
        let ra = dec.fixed_edges.iter().find(|e| e.v == "a").unwrap();
        assert_eq!(ra.current, 2.0);
        let ab = dec.fixed_edges.iter().find(|e| e.v == "b").unwrap();
        assert_eq!(ab.current, 1.0);
    }

    #[test]
    fn merge_refused_on_four_cycle() {
        // r - a - s - b - r: a and b have identical neighbour sets {r, s};
        // merging them would collapse the cycle, so it must be refused
        let g = net(
            &[("r", 0.0, true), ("a", 1.0, false), ("s", 1.0, false), ("b", 1.0, false)],
            &[("r", "a", 1.0), ("a", "s", 1.0), ("s", "b", 1.0), ("b", "r", 1.0)],
        );
        let dec = decompose(&g, &DecomposeOptions::default()).unwrap();
        assert_eq!(dec.components.len(), 1);
        let rc = &dec.components[0];
        assert_eq!(rc.gc_node_count(), 4);
        assert_eq!(rc.gc_edge_count(), 4);
        // lifting still reduces the 4-cycle to a triangle (a is lifted)
        assert_eq!(rc.minor_node_count(), 3);
        assert_eq!(rc.minor_edge_count(), 3);
        // the refusal keeps the spanning structure: still 4 configurations
        assert_eq!(crate::oracle::configuration_count(rc), 4);
    }

    #[test]
    fn triangle_is_not_merged() {
        let dec = decompose(&triangle(), &DecomposeOptions::default()).unwrap();
        let rc = &dec.components[0];
        assert_eq!(rc.gc_node_count(), 3);
        assert_eq!(rc.gc_edge_count(), 3);
    }

    #[test]
    fn single_lift_builds_a_chain() {
        // square r-m-a plus the closing edge r-a absent: path r-m-a inside a
        // cycle r-m-a-b-r; m lifts into a chain on edge (r, a)
        let g = net(
            &[("r", 0.0, true), ("m", 1.0, false), ("a", 1.0, false), ("b", 1.0, false)],
            &[("r", "m", 0.25), ("m", "a", 0.75), ("a", "b", 1.0), ("b", "r", 1.0)],
        );
        let dec = decompose(&g, &DecomposeOptions::default()).unwrap();
        let rc = &dec.components[0];
        assert_eq!(rc.minor_node_count(), 3);
        let chain_edge = rc
            .minor_edges
            .iter()
            .find(|e| !e.internal.is_empty())
            .unwrap();
        assert_eq!(chain_edge.internal.len(), 1);
        assert_eq!(rc.nodes[chain_edge.internal[0]].id, "m");
        // segments ordered from the u end
        let u_id = rc.minor_id(chain_edge.u);
        if u_id == "r" {
            assert_eq!(chain_edge.segment_resistances, vec![0.25, 0.75]);
        } else {
            assert_eq!(chain_edge.segment_resistances, vec![0.75, 0.25]);
        }
    }

    #[test]
    fn lift_refused_when_neighbours_adjacent() {
        // triangle: every node has degree 2 but neighbours are adjacent
        let dec = decompose(&triangle(), &DecomposeOptions::default()).unwrap();
        let rc = &dec.components[0];
        assert_eq!(rc.minor_node_count(), 3);
        assert!(rc.minor_edges.iter().all(|e| e.internal.is_empty()));
    }

    #[test]
    fn ieee33_structure_matches_the_reference_counts() {
        let g = load_ieee33();
        let dec = decompose(&g, &DecomposeOptions::default()).unwrap();
        assert_eq!(dec.components.len(), 1);
        let rc = &dec.components[0];
        assert_eq!(rc.gc_node_count(), 32);
        assert_eq!(rc.gc_edge_count(), 36);
        assert_eq!(rc.minor_node_count(), 9);
        assert_eq!(rc.minor_edge_count(), 13);
        assert_eq!(rc.minor_id(rc.root), "2");
        // the 1-2 feeder is the single fixed edge and carries the total load
        assert_eq!(dec.fixed_edges.len(), 1);
        assert!((dec.fixed_edges[0].current - g.total_load_current()).abs() < 1e-9);
        // current conservation within the component
        let comp_total: f64 = rc.nodes.iter().map(|n| n.current).sum();
        assert!((comp_total - g.total_load_current()).abs() < 1e-9);
    }

    #[test]
    fn ieee33_minor_nodes_are_the_junctions() {
        let g = load_ieee33();
        let dec = decompose(&g, &DecomposeOptions::default()).unwrap();
        let rc = &dec.components[0];
        let mut ids: Vec<&str> = (0..rc.minor_node_count()).map(|p| rc.minor_id(p)).collect();
        ids.sort_by_key(|s| s.parse::<u32>().unwrap());
        assert_eq!(ids, ["2", "3", "6", "8", "9", "12", "15", "21", "29"]);
    }

    #[test]
    fn select_root_prefers_nearest_to_supply() {
        let g = load_ieee33();
        let nodes: Vec<String> = (2..=33).map(|b| b.to_string()).collect();
        assert_eq!(select_root(&nodes, &g).unwrap(), "2");

        let t = triangle();
        let all: Vec<String> = t.nodes.iter().map(|n| n.id.clone()).collect();
        assert_eq!(select_root(&all, &t).unwrap(), "r");
    }

    #[test]
    fn triangle_cycles_single_under_both_strategies() {
        for strategy in [CycleStrategy::AllSimpleCycles, CycleStrategy::BasisWithVirtualEdges] {
            let cycles = cycle_set(3, &[(0, 1), (0, 2), (1, 2)], 0, strategy, 100).unwrap();
            assert_eq!(cycles.len(), 1, "{strategy:?}");
            assert_eq!(cycles[0].nodes, vec![0, 1, 2]);
        }
    }

    #[test]
    fn k4_cycle_counts() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let simple = cycle_set(4, &edges, 0, CycleStrategy::AllSimpleCycles, 100).unwrap();
        assert_eq!(simple.len(), 7);
        let basis = cycle_set(4, &edges, 0, CycleStrategy::BasisWithVirtualEdges, 100).unwrap();
        let n_basis = basis.iter().filter(|c| matches!(c.kind, CycleKind::Basis)).count();
        assert_eq!(n_basis, 3);
    }

    #[test]
    fn theta_cycle_counts() {
        // lifted theta: u(0), v(1), b(2), c(3); direct edge u-v plus paths
        // through b and c
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)];
        let simple = cycle_set(4, &edges, 0, CycleStrategy::AllSimpleCycles, 100).unwrap();
        assert_eq!(simple.len(), 3);
        let basis = cycle_set(4, &edges, 0, CycleStrategy::BasisWithVirtualEdges, 100).unwrap();
        let n_basis = basis.iter().filter(|c| matches!(c.kind, CycleKind::Basis)).count();
        let blockers: Vec<&Cycle> = basis
            .iter()
            .filter(|c| matches!(c.kind, CycleKind::CompositeBlocker(_)))
            .collect();
        assert_eq!(n_basis, 2);
        assert_eq!(blockers.len(), 1);
        let CycleKind::CompositeBlocker(b) = &blockers[0].kind else {
            unreachable!()
        };
        // the shared path is the direct u-v edge
        assert_eq!(b.endpoints, (0, 1));
        assert_eq!(b.first_side.first(), Some(&0));
        assert_eq!(b.first_side.last(), Some(&1));
    }

    #[test]
    fn cycle_cap_is_enforced() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let err = cycle_set(4, &edges, 0, CycleStrategy::AllSimpleCycles, 3).unwrap_err();
        assert!(matches!(err, ReduceError::CycleCapExceeded { cap: 3 }));
    }

    #[test]
    fn theta_reduction_from_network() {
        // u and v joined by three internally disjoint 2-paths; lifting can
        // shorten only one of them before u-v become adjacent
        let g = net(
            &[
                ("u", 0.0, true),
                ("v", 1.0, false),
                ("p", 1.0, false),
                ("q", 1.0, false),
                ("w", 1.0, false),
            ],
            &[
                ("u", "p", 1.0),
                ("p", "v", 1.0),
                ("u", "q", 1.0),
                ("q", "v", 1.0),
                ("u", "w", 1.0),
                ("w", "v", 1.0),
            ],
        );
        let dec = decompose(&g, &DecomposeOptions::default()).unwrap();
        let rc = &dec.components[0];
        assert_eq!(rc.minor_node_count(), 4);
        assert_eq!(rc.minor_edge_count(), 5);
        assert_eq!(rc.cycles.len(), 3);
    }

    #[test]
    fn decomposition_is_deterministic() {
        let g = load_ieee33();
        let a = decompose(&g, &DecomposeOptions::default()).unwrap();
        let b = decompose(&g, &DecomposeOptions::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a.components).unwrap(),
            serde_json::to_string(&b.components).unwrap()
        );
    }
}
