//! The reconfiguration HUBO for one reduced component.
//!
//! Binary variables encode the radial topology: one arc variable per
//! orientation of every reduced edge (orientations into the component root
//! are structurally zero and never allocated), one prefix variable per
//! chain-internal node (1 = the node draws from the chain's u end; the
//! monotone prefix boundary encodes the open-switch position), and, under
//! the basis cycle strategy, one virtual arc variable per composite-blocker
//! orientation.
//!
//! Constraint families:
//!
//! - vertex: every non-root reduced node has exactly one parent,
//! - edge: at most one orientation of an edge is active,
//! - cycle: no directed cycle closes, either per enumerated simple cycle or
//!   per basis cycle plus virtual-arc blockers,
//! - path: prefix variables are monotone along each chain and pinned by the
//!   closed-edge orientation,
//! - implies: the linkage that forces virtual arcs from arc paths.
//!
//! The loss objective expands the exact ohmic losses: for every reduced
//! edge, through-currents are built from downstream indicators (sums of
//! simple-path arc products) and attributed currents, and every chain
//! segment contributes r·(U² + V²) with U and V the segment currents seen
//! from the two ends.

use crate::hubo::{
    self, interaction_penalty, linear_sum_penalty, BinaryPolynomial, HuboError, VarId, VarPool,
};
use crate::reduce::{CycleKind, ReducedComponent};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormulateError {
    #[error("formulate: edge `{u}`-`{v}` is not switchable; the component admits no formulation")]
    NonSwitchableEdge { u: String, v: String },
    #[error(
        "formulate: downstream expansion for arc {arc} exceeded {cap} monomials; \
         rerun in counting mode or raise the cap"
    )]
    PathCapExceeded { arc: String, cap: usize },
    #[error("formulate: no arc variable for orientation {0}")]
    MissingArc(String),
    #[error("formulate: assignment covers {got} variables, registry has {expected}")]
    AssignmentLength { got: usize, expected: usize },
    #[error("formulate: cannot decode an infeasible assignment (family `{family}` = {value})")]
    Infeasible { family: &'static str, value: f64 },
    #[error("formulate: weights must be strictly positive")]
    NonPositiveWeight,
    #[error(transparent)]
    Hubo(#[from] HuboError),
}

/// What a registry variable stands for.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum VarKind {
    /// Edge (from, to) closed with `from` the parent; minor positions.
    Arc { from: usize, to: usize },
    /// Chain-internal node `index` of minor edge `edge` draws from the u end.
    Prefix { edge: usize, index: usize },
    /// Virtual arc of composite blocker `blocker` (cycle index), one per
    /// orientation.
    VirtualArc { blocker: usize, reversed: bool },
}

/// Dense variable registry for one component; the registry size is the
/// logical qubit count reported downstream.
#[derive(Debug, Clone)]
pub struct VariableRegistry {
    pool: VarPool,
    kinds: Vec<VarKind>,
    arcs: BTreeMap<(usize, usize), VarId>,
    prefixes: Vec<Vec<VarId>>,
    virtuals: BTreeMap<(usize, bool), VarId>,
}

impl VariableRegistry {
    pub fn len(&self) -> usize {
        self.pool.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pool.is_empty()
    }

    pub fn pool(&self) -> &VarPool {
        &self.pool
    }

    /// Arc variable for the oriented reduced edge (from, to), if it exists.
    pub fn arc(&self, from: usize, to: usize) -> Option<VarId> {
        self.arcs.get(&(from, to)).copied()
    }

    /// Prefix variables of a minor edge, ordered from the u end.
    pub fn prefix_vars(&self, edge: usize) -> &[VarId] {
        &self.prefixes[edge]
    }

    pub fn virtual_arc(&self, blocker: usize, reversed: bool) -> Option<VarId> {
        self.virtuals.get(&(blocker, reversed)).copied()
    }

    pub fn kind(&self, v: VarId) -> &VarKind {
        &self.kinds[v.index()]
    }

    pub fn name(&self, v: VarId) -> &str {
        self.pool.name(v)
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn prefix_count(&self) -> usize {
        self.prefixes.iter().map(Vec::len).sum()
    }

    pub fn virtual_count(&self) -> usize {
        self.virtuals.len()
    }
}

/// Allocates the component's binary variables in deterministic order: arc
/// variables per edge (u→v then v→u, skipping orientations into the root),
/// then prefix variables per chain, then virtual arcs per blocker.
pub fn build_variables(rc: &ReducedComponent) -> Result<VariableRegistry, FormulateError> {
    for e in &rc.edges {
        if !e.switchable {
            return Err(FormulateError::NonSwitchableEdge {
                u: rc.nodes[e.a].id.clone(),
                v: rc.nodes[e.b].id.clone(),
            });
        }
    }
    let mut pool = VarPool::new();
    let mut kinds = Vec::new();
    let mut arcs = BTreeMap::new();
    let mut prefixes = vec![Vec::new(); rc.minor_edges.len()];
    let mut virtuals = BTreeMap::new();

    for e in &rc.minor_edges {
        for (from, to) in [(e.u, e.v), (e.v, e.u)] {
            if to == rc.root {
                continue;
            }
            let id = pool.fresh(format!("e[{}>{}]", rc.minor_id(from), rc.minor_id(to)));
            kinds.push(VarKind::Arc { from, to });
            arcs.insert((from, to), id);
        }
    }
    for (ei, e) in rc.minor_edges.iter().enumerate() {
        for (i, &m) in e.internal.iter().enumerate() {
            let id = pool.fresh(format!(
                "d[{}-{}:{}]",
                rc.minor_id(e.u),
                rc.minor_id(e.v),
                rc.nodes[m].id
            ));
            kinds.push(VarKind::Prefix { edge: ei, index: i });
            prefixes[ei].push(id);
        }
    }
    for (ci, c) in rc.cycles.iter().enumerate() {
        if let CycleKind::CompositeBlocker(b) = &c.kind {
            for reversed in [false, true] {
                let (a, z) = if reversed {
                    (b.endpoints.1, b.endpoints.0)
                } else {
                    b.endpoints
                };
                let id = pool.fresh(format!("t[{}>{}#{}]", rc.minor_id(a), rc.minor_id(z), ci));
                kinds.push(VarKind::VirtualArc {
                    blocker: ci,
                    reversed,
                });
                virtuals.insert((ci, reversed), id);
            }
        }
    }

    Ok(VariableRegistry {
        pool,
        kinds,
        arcs,
        prefixes,
        virtuals,
    })
}

/// Penalty weights for the weighted-sum assembly; all strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    pub lambda_vertex: f64,
    pub lambda_edge: f64,
    pub lambda_cycle: f64,
    pub lambda_path: f64,
    pub lambda_implies: f64,
    pub lambda_loss: f64,
}

impl Weights {
    pub fn uniform_penalty(penalty: f64) -> Self {
        Self {
            lambda_vertex: penalty,
            lambda_edge: penalty,
            lambda_cycle: penalty,
            lambda_path: penalty,
            lambda_implies: penalty,
            lambda_loss: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), FormulateError> {
        let all = [
            self.lambda_vertex,
            self.lambda_edge,
            self.lambda_cycle,
            self.lambda_path,
            self.lambda_implies,
            self.lambda_loss,
        ];
        if all.iter().all(|&l| l > 0.0) {
            Ok(())
        } else {
            Err(FormulateError::NonPositiveWeight)
        }
    }
}

/// Simple upper bound on the loss over feasible configurations: no segment
/// ever carries more than the total component current.
pub fn loss_upper_bound(rc: &ReducedComponent) -> f64 {
    let total_current = rc.total_current();
    let total_resistance: f64 = rc.minor_edges.iter().map(|e| e.total_resistance()).sum();
    total_current * total_current * total_resistance
}

/// Default test weights: every penalty outweighs any feasible loss, so the
/// global minimiser is feasible and the loss scale is untouched.
pub fn default_weights(rc: &ReducedComponent) -> Weights {
    Weights::uniform_penalty(1.0 + loss_upper_bound(rc))
}

/// Sum over non-root reduced nodes of the one-parent penalty.
pub fn vertex_constraints(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
) -> Result<BinaryPolynomial, FormulateError> {
    let adj = rc.minor_adjacency();
    let mut total = BinaryPolynomial::zero(reg.pool());
    for v in 0..rc.minor_node_count() {
        if v == rc.root {
            continue;
        }
        let incoming: Vec<VarId> = adj[v].iter().filter_map(|&(u, _)| reg.arc(u, v)).collect();
        total.add_assign(&linear_sum_penalty(reg.pool(), &incoming)?)?;
    }
    Ok(total)
}

/// Sum over edges with both orientations of the both-active penalty.
pub fn edge_constraints(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
) -> Result<BinaryPolynomial, FormulateError> {
    let mut total = BinaryPolynomial::zero(reg.pool());
    for e in &rc.minor_edges {
        if let (Some(fwd), Some(bwd)) = (reg.arc(e.u, e.v), reg.arc(e.v, e.u)) {
            total.add_assign(&interaction_penalty(reg.pool(), &[fwd, bwd])?)?;
        }
    }
    Ok(total)
}

/// Arc variables along a node path, `None` if any arc is missing.
fn path_arcs(reg: &VariableRegistry, nodes: &[usize]) -> Option<Vec<VarId>> {
    nodes.windows(2).map(|w| reg.arc(w[0], w[1])).collect()
}

/// Directed-cycle penalties. Returns the interaction penalties (cycle
/// family) and the virtual-arc linkage penalties (implies family).
pub fn cycle_constraints(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
) -> Result<(BinaryPolynomial, BinaryPolynomial), FormulateError> {
    let mut cycle = BinaryPolynomial::zero(reg.pool());
    let mut implies = BinaryPolynomial::zero(reg.pool());
    for (ci, c) in rc.cycles.iter().enumerate() {
        match &c.kind {
            CycleKind::Basis => {
                let forward: Vec<usize> = c.nodes.iter().copied().chain([c.nodes[0]]).collect();
                let backward: Vec<usize> = forward.iter().rev().copied().collect();
                for traversal in [forward, backward] {
                    if let Some(arcs) = path_arcs(reg, &traversal) {
                        cycle.add_assign(&interaction_penalty(reg.pool(), &arcs)?)?;
                    }
                }
            }
            CycleKind::CompositeBlocker(b) => {
                let first_rev: Vec<usize> = b.first_side.iter().rev().copied().collect();
                let second_rev: Vec<usize> = b.second_side.iter().rev().copied().collect();
                for (reversed, linkage_path, closing_path) in [
                    (false, &b.first_side, &second_rev),
                    (true, &first_rev, &b.second_side),
                ] {
                    let Some(virt) = reg.virtual_arc(ci, reversed) else {
                        continue;
                    };
                    if let Some(antecedent) = path_arcs(reg, linkage_path) {
                        implies.add_assign(&hubo::implies_penalty(
                            reg.pool(),
                            &antecedent,
                            virt,
                            false,
                        )?)?;
                    }
                    if let Some(mut closing) = path_arcs(reg, closing_path) {
                        closing.push(virt);
                        cycle.add_assign(&interaction_penalty(reg.pool(), &closing)?)?;
                    }
                }
            }
        }
    }
    Ok((cycle, implies))
}

/// Chain-consistency penalties: monotone prefixes and the closed-edge
/// linkage that pins every prefix when an edge is active.
pub fn path_constraints(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
) -> Result<BinaryPolynomial, FormulateError> {
    let mut total = BinaryPolynomial::zero(reg.pool());
    for (ei, e) in rc.minor_edges.iter().enumerate() {
        let d = reg.prefix_vars(ei);
        for i in 1..d.len() {
            total.add_assign(&hubo::implies_penalty(reg.pool(), &[d[i]], d[i - 1], false)?)?;
        }
        if let Some(fwd) = reg.arc(e.u, e.v) {
            for &di in d {
                total.add_assign(&hubo::implies_penalty(reg.pool(), &[fwd], di, false)?)?;
            }
        }
        if let Some(bwd) = reg.arc(e.v, e.u) {
            for &di in d {
                total.add_assign(&hubo::implies_penalty(reg.pool(), &[bwd], di, true)?)?;
            }
        }
    }
    Ok(total)
}

/// Simple directed paths from `from` to every reachable node, avoiding
/// `blocked`; `f(target, node_path)` is called once per path, including the
/// empty path at `from` itself.
fn for_each_simple_path(
    adj: &[Vec<(usize, usize)>],
    from: usize,
    blocked: usize,
    f: &mut impl FnMut(usize, &[usize]),
) {
    fn dfs(
        adj: &[Vec<(usize, usize)>],
        blocked: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        f: &mut impl FnMut(usize, &[usize]),
    ) {
        let u = *path.last().unwrap();
        f(u, path);
        let neighbours: Vec<usize> = adj[u].iter().map(|&(w, _)| w).collect();
        for w in neighbours {
            if w == blocked || on_path[w] {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            dfs(adj, blocked, path, on_path, f);
            on_path[w] = false;
            path.pop();
        }
    }
    if from == blocked {
        return;
    }
    let mut on_path = vec![false; adj.len()];
    on_path[from] = true;
    dfs(adj, blocked, &mut vec![from], &mut on_path, f);
}

/// Polynomial indicator that reduced node `w` lies in the subtree fed
/// through arc (from, to): the arc variable times the sum over simple paths
/// to→w (avoiding `from`) of the path's arc product. On feasible
/// assignments the value is exactly the 0/1 subtree membership.
pub fn downstream_indicator(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
    from: usize,
    to: usize,
    w: usize,
    cap: usize,
) -> Result<BinaryPolynomial, FormulateError> {
    let arc = reg.arc(from, to).ok_or_else(|| {
        FormulateError::MissingArc(format!("{}>{}", rc.minor_id(from), rc.minor_id(to)))
    })?;
    let adj = rc.minor_adjacency();
    let mut total = BinaryPolynomial::zero(reg.pool());
    let mut count = 0usize;
    let mut overflow = false;
    for_each_simple_path(&adj, to, from, &mut |target, path| {
        if target != w || overflow {
            return;
        }
        count += 1;
        if count > cap {
            overflow = true;
            return;
        }
        if let Some(arcs) = path_arcs(reg, path) {
            let mut vars = vec![arc];
            vars.extend(arcs);
            total
                .add_assign(&BinaryPolynomial::monomial(reg.pool(), &vars, 1.0))
                .expect("same pool");
        }
    });
    if overflow {
        return Err(FormulateError::PathCapExceeded {
            arc: format!("{}>{}", rc.minor_id(from), rc.minor_id(to)),
            cap,
        });
    }
    Ok(total)
}

/// Current drawn at reduced node `w`: its aggregated load plus, per
/// incident chain, the internal loads attributed to `w`'s end.
pub fn attributed_current(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
    w: usize,
) -> BinaryPolynomial {
    let mut total = BinaryPolynomial::constant(reg.pool(), rc.minor_current(w));
    for (ei, e) in rc.minor_edges.iter().enumerate() {
        let d = reg.prefix_vars(ei);
        if e.u == w {
            for (i, &m) in e.internal.iter().enumerate() {
                let current = rc.nodes[m].current;
                total
                    .add_assign(&BinaryPolynomial::monomial(reg.pool(), &[d[i]], current))
                    .expect("same pool");
            }
        } else if e.v == w {
            for (i, &m) in e.internal.iter().enumerate() {
                let current = rc.nodes[m].current;
                total
                    .add_assign(&BinaryPolynomial::constant(reg.pool(), current))
                    .expect("same pool");
                total
                    .add_assign(&BinaryPolynomial::monomial(reg.pool(), &[d[i]], -current))
                    .expect("same pool");
            }
        }
    }
    total
}

/// Through-current entering the chain of a reduced edge at `from` and
/// crossing toward `to`: the sum over downstream nodes of indicator times
/// attributed current. Zero when the orientation has no arc variable.
fn through_current(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
    attributed: &[BinaryPolynomial],
    from: usize,
    to: usize,
    cap: usize,
) -> Result<BinaryPolynomial, FormulateError> {
    let Some(arc) = reg.arc(from, to) else {
        return Ok(BinaryPolynomial::zero(reg.pool()));
    };
    let adj = rc.minor_adjacency();
    let mut total = BinaryPolynomial::zero(reg.pool());
    let mut count = 0usize;
    let mut overflow = false;
    for_each_simple_path(&adj, to, from, &mut |target, path| {
        if overflow {
            return;
        }
        count += 1;
        if count > cap {
            overflow = true;
            return;
        }
        let Some(arcs) = path_arcs(reg, path) else {
            return;
        };
        let mut vars = vec![arc];
        vars.extend(arcs);
        let indicator = BinaryPolynomial::monomial(reg.pool(), &vars, 1.0);
        let contribution = indicator.mul(&attributed[target]).expect("same pool");
        total.add_assign(&contribution).expect("same pool");
    });
    if overflow {
        return Err(FormulateError::PathCapExceeded {
            arc: format!("{}>{}", rc.minor_id(from), rc.minor_id(to)),
            cap,
        });
    }
    Ok(total)
}

/// The exact ohmic loss objective in watts, fully expanded multilinearly:
/// Σ over reduced edges and segments of r·(U² + V²), with the segment
/// current from either end being the partial chain load past the segment
/// plus the through-current.
pub fn loss_objective(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
    cap: usize,
) -> Result<BinaryPolynomial, FormulateError> {
    let attributed: Vec<BinaryPolynomial> = (0..rc.minor_node_count())
        .map(|w| attributed_current(rc, reg, w))
        .collect();
    let mut loss = BinaryPolynomial::zero(reg.pool());
    for (ei, e) in rc.minor_edges.iter().enumerate() {
        let d = reg.prefix_vars(ei);
        let r = &e.segment_resistances;
        let total_r: f64 = r.iter().sum();
        let k = e.chain_len();

        for (from, to, from_u) in [(e.u, e.v, true), (e.v, e.u, false)] {
            let through = through_current(rc, reg, &attributed, from, to, cap)?;
            // partial chain load past segment j, counting segments from
            // `from`: nodes drawing from this end that sit beyond the segment
            let mut parts: Vec<BinaryPolynomial> = Vec::with_capacity(k + 1);
            for j in 0..=k {
                let mut p = BinaryPolynomial::zero(reg.pool());
                for i in 0..k {
                    let beyond = if from_u { i >= j } else { i < k - j };
                    if !beyond {
                        continue;
                    }
                    let current = rc.nodes[e.internal[i]].current;
                    if from_u {
                        p.add_assign(&BinaryPolynomial::monomial(reg.pool(), &[d[i]], current))?;
                    } else {
                        p.add_assign(&BinaryPolynomial::constant(reg.pool(), current))?;
                        p.add_assign(&BinaryPolynomial::monomial(reg.pool(), &[d[i]], -current))?;
                    }
                }
                parts.push(p);
            }
            let r_dir: Vec<f64> = if from_u {
                r.clone()
            } else {
                r.iter().rev().copied().collect()
            };
            // sum_j r_j (part_j + T)^2
            //   = sum_j r_j part_j^2 + 2 T sum_j r_j part_j + T^2 sum_j r_j
            let mut weighted_parts = BinaryPolynomial::zero(reg.pool());
            for (j, part) in parts.iter().enumerate() {
                loss.add_assign(&part.square().scale(r_dir[j]))?;
                weighted_parts.add_assign(&part.scale(r_dir[j]))?;
            }
            loss.add_assign(&through.mul(&weighted_parts)?.scale(2.0))?;
            loss.add_assign(&through.square().scale(total_r))?;
        }
    }
    Ok(loss)
}

/// The six polynomial families of the assembled objective.
#[derive(Debug, Clone)]
pub struct FamilyPolys {
    pub vertex: BinaryPolynomial,
    pub edge: BinaryPolynomial,
    pub cycle: BinaryPolynomial,
    pub path: BinaryPolynomial,
    pub implies: BinaryPolynomial,
    pub loss: BinaryPolynomial,
}

impl FamilyPolys {
    fn penalties(&self) -> [(&'static str, &BinaryPolynomial); 5] {
        [
            ("vertex", &self.vertex),
            ("edge", &self.edge),
            ("cycle", &self.cycle),
            ("path", &self.path),
            ("implies", &self.implies),
        ]
    }
}

/// Per-family term counts plus the accounting of terms merged or cancelled
/// in the weighted sum: `family_sum = assembled + merged_or_cancelled`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyCounts {
    pub vertex: usize,
    pub edge: usize,
    pub cycle: usize,
    pub path: usize,
    pub implies: usize,
    pub loss: usize,
    pub family_sum: usize,
    pub assembled: usize,
    pub merged_or_cancelled: usize,
}

/// A fully assembled component HUBO.
#[derive(Debug, Clone)]
pub struct AssembledHubo {
    pub polynomial: BinaryPolynomial,
    pub families: FamilyPolys,
    pub weights: Weights,
}

/// Minor-level radial configuration: oriented closed reduced edges (parent,
/// child) over minor positions, and the open-segment boundary per open
/// reduced edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Configuration {
    pub arcs: BTreeSet<(usize, usize)>,
    /// minor edge index -> open position b in 0..=k
    pub open_positions: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone)]
pub struct FormulateOptions {
    /// Cap on enumerated path monomials per arc in the loss expansion.
    pub path_cap: usize,
}

impl Default for FormulateOptions {
    fn default() -> Self {
        Self { path_cap: 100_000 }
    }
}

/// Builds all families and the weighted objective.
pub fn assemble(
    rc: &ReducedComponent,
    reg: &VariableRegistry,
    weights: &Weights,
    opts: &FormulateOptions,
) -> Result<AssembledHubo, FormulateError> {
    weights.validate()?;
    let vertex = vertex_constraints(rc, reg)?;
    let edge = edge_constraints(rc, reg)?;
    let (cycle, implies) = cycle_constraints(rc, reg)?;
    let path = path_constraints(rc, reg)?;
    let loss = loss_objective(rc, reg, opts.path_cap)?;

    let mut polynomial = BinaryPolynomial::zero(reg.pool());
    polynomial.add_scaled(&vertex, weights.lambda_vertex)?;
    polynomial.add_scaled(&edge, weights.lambda_edge)?;
    polynomial.add_scaled(&cycle, weights.lambda_cycle)?;
    polynomial.add_scaled(&path, weights.lambda_path)?;
    polynomial.add_scaled(&implies, weights.lambda_implies)?;
    polynomial.add_scaled(&loss, weights.lambda_loss)?;

    Ok(AssembledHubo {
        polynomial,
        families: FamilyPolys {
            vertex,
            edge,
            cycle,
            path,
            implies,
            loss,
        },
        weights: *weights,
    })
}

impl AssembledHubo {
    pub fn family_counts(&self) -> FamilyCounts {
        let f = &self.families;
        let counts = [
            f.vertex.term_count(),
            f.edge.term_count(),
            f.cycle.term_count(),
            f.path.term_count(),
            f.implies.term_count(),
            f.loss.term_count(),
        ];
        let family_sum: usize = counts.iter().sum();
        let assembled = self.polynomial.term_count();
        FamilyCounts {
            vertex: counts[0],
            edge: counts[1],
            cycle: counts[2],
            path: counts[3],
            implies: counts[4],
            loss: counts[5],
            family_sum,
            assembled,
            merged_or_cancelled: family_sum - assembled,
        }
    }

    /// True when every penalty family evaluates to zero.
    pub fn is_feasible(&self, assignment: &[bool]) -> Result<bool, FormulateError> {
        for (_, poly) in self.families.penalties() {
            if poly.evaluate(assignment)? != 0.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Loss value at an assignment, in watts.
    pub fn loss_at(&self, assignment: &[bool]) -> Result<f64, FormulateError> {
        Ok(self.families.loss.evaluate(assignment)?)
    }

    /// Decodes a feasible assignment into a [`Configuration`]. Open edges
    /// read the open position as the number of leading prefix variables set.
    pub fn decode(
        &self,
        rc: &ReducedComponent,
        reg: &VariableRegistry,
        assignment: &[bool],
    ) -> Result<Configuration, FormulateError> {
        if assignment.len() != reg.len() {
            return Err(FormulateError::AssignmentLength {
                got: assignment.len(),
                expected: reg.len(),
            });
        }
        for (family, poly) in self.families.penalties() {
            let value = poly.evaluate(assignment)?;
            if value != 0.0 {
                return Err(FormulateError::Infeasible { family, value });
            }
        }
        let mut arcs = BTreeSet::new();
        let mut closed_edges = BTreeSet::new();
        for (ei, e) in rc.minor_edges.iter().enumerate() {
            for (from, to) in [(e.u, e.v), (e.v, e.u)] {
                if let Some(v) = reg.arc(from, to) {
                    if assignment[v.index()] {
                        arcs.insert((from, to));
                        closed_edges.insert(ei);
                    }
                }
            }
        }
        let mut open_positions = BTreeMap::new();
        for ei in 0..rc.minor_edges.len() {
            if closed_edges.contains(&ei) {
                continue;
            }
            let boundary = reg
                .prefix_vars(ei)
                .iter()
                .take_while(|v| assignment[v.index()])
                .count();
            open_positions.insert(ei, boundary);
        }
        Ok(Configuration {
            arcs,
            open_positions,
        })
    }
}
