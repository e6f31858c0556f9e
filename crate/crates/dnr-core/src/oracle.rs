//! Classical ground truth for the reconfiguration problem.
//!
//! Everything here is exhaustive and independent of the HUBO machinery:
//! radial configurations are enumerated directly (spanning trees of the
//! minor crossed with the open-switch position of every open chain), their
//! losses computed by a post-order accumulation of downstream currents, and
//! small HUBOs minimised over all 2^n assignments. The enumeration count is
//! cross-checkable against the Kirchhoff matrix-tree determinant.

use crate::formulate::Configuration;
use crate::hubo::BinaryPolynomial;
use crate::reduce::ReducedComponent;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle: {count} radial configurations exceed the cap of {cap}")]
    TooManyConfigurations { count: u128, cap: u64 },
    #[error("oracle: exhaustive minimisation supports at most 24 variables, got {0}")]
    TooManyVariables(usize),
    #[error("oracle: configuration is not a spanning arborescence of the component")]
    InvalidConfiguration,
}

/// A radial configuration of a component: a parent map over all component
/// nodes (chain internals included) plus the minor-level view.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialConfig {
    /// parent[i] = parent of component node i; the root has none.
    pub parent: Vec<Option<usize>>,
    /// Minor view: oriented closed reduced edges and open positions.
    pub configuration: Configuration,
}

/// Number of spanning trees by the matrix-tree theorem, computed with
/// fraction-free (Bareiss) elimination over i128.
pub fn spanning_tree_count(node_count: usize, edges: &[(usize, usize)]) -> u128 {
    if node_count <= 1 {
        return 1;
    }
    let n = node_count - 1; // reduced Laplacian: drop the last row/column
    let mut m = vec![vec![0i128; n]; n];
    for &(a, b) in edges {
        if a == b {
            continue;
        }
        if a < n {
            m[a][a] += 1;
        }
        if b < n {
            m[b][b] += 1;
        }
        if a < n && b < n {
            m[a][b] -= 1;
            m[b][a] -= 1;
        }
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]).unsigned_abs()
}

/// Total number of radial configurations: spanning trees of the minor times
/// the open positions of every chain left open.
pub fn configuration_count(rc: &ReducedComponent) -> u128 {
    let pairs: Vec<(usize, usize)> = rc.minor_edges.iter().map(|e| (e.u, e.v)).collect();
    let mut total = 0u128;
    for_each_spanning_tree(rc.minor_node_count(), &pairs, &mut |tree| {
        let in_tree: BTreeSet<usize> = tree.iter().copied().collect();
        let mut positions = 1u128;
        for (ei, e) in rc.minor_edges.iter().enumerate() {
            if !in_tree.contains(&ei) {
                positions *= e.chain_len() as u128 + 1;
            }
        }
        total += positions;
    });
    total
}

/// Enumerates spanning trees as sorted edge-index sets via include/exclude
/// branching with connectivity pruning; deterministic order (include-first
/// on ascending edge index), memory linear in the edge count.
fn for_each_spanning_tree(
    node_count: usize,
    edges: &[(usize, usize)],
    f: &mut impl FnMut(&[usize]),
) {
    if node_count == 0 {
        return;
    }

    fn still_spannable(
        node_count: usize,
        edges: &[(usize, usize)],
        chosen: &[usize],
        from: usize,
    ) -> bool {
        let mut adj = vec![Vec::new(); node_count];
        for &e in chosen {
            let (a, b) = edges[e];
            adj[a].push(b);
            adj[b].push(a);
        }
        for &(a, b) in &edges[from..] {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; node_count];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == node_count
    }

    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let r = find(dsu, dsu[x]);
            dsu[x] = r;
        }
        dsu[x]
    }

    fn recurse(
        node_count: usize,
        edges: &[(usize, usize)],
        idx: usize,
        chosen: &mut Vec<usize>,
        dsu: &Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if chosen.len() == node_count - 1 {
            f(chosen);
            return;
        }
        if idx == edges.len() {
            return;
        }
        let (a, b) = edges[idx];
        let mut with_edge = dsu.clone();
        let (ra, rb) = (find(&mut with_edge, a), find(&mut with_edge, b));
        if ra != rb {
            with_edge[ra] = rb;
            chosen.push(idx);
            recurse(node_count, edges, idx + 1, chosen, &with_edge, f);
            chosen.pop();
        }
        if still_spannable(node_count, edges, chosen, idx + 1) {
            recurse(node_count, edges, idx + 1, chosen, dsu, f);
        }
    }

    let dsu: Vec<usize> = (0..node_count).collect();
    recurse(node_count, edges, 0, &mut Vec::new(), &dsu, f);
}

/// Expands one spanning tree plus open positions into a [`RadialConfig`]
/// with the full parent map over component nodes.
fn build_config(
    rc: &ReducedComponent,
    tree_edges: &[usize],
    open_positions: &BTreeMap<usize, usize>,
) -> RadialConfig {
    let n_minor = rc.minor_node_count();
    let mut adj = vec![Vec::new(); n_minor];
    for &ei in tree_edges {
        let e = &rc.minor_edges[ei];
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut minor_parent: Vec<Option<usize>> = vec![None; n_minor];
    let mut seen = vec![false; n_minor];
    seen[rc.root] = true;
    let mut queue = VecDeque::from([rc.root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                minor_parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }

    let mut arcs = BTreeSet::new();
    for (w, p) in minor_parent.iter().enumerate() {
        if let Some(u) = p {
            arcs.insert((*u, w));
        }
    }

    let mut parent: Vec<Option<usize>> = vec![None; rc.nodes.len()];
    let in_tree: BTreeSet<usize> = tree_edges.iter().copied().collect();
    for (ei, e) in rc.minor_edges.iter().enumerate() {
        let (u_node, v_node) = (rc.minor_nodes[e.u], rc.minor_nodes[e.v]);
        if in_tree.contains(&ei) {
            // closed edge: the whole chain hangs from the parent end
            let toward_v = arcs.contains(&(e.u, e.v));
            let (from, to) = if toward_v {
                (u_node, v_node)
            } else {
                (v_node, u_node)
            };
            let seq: Vec<usize> = if toward_v {
                e.internal.clone()
            } else {
                e.internal.iter().rev().copied().collect()
            };
            let mut prev = from;
            for &m in &seq {
                parent[m] = Some(prev);
                prev = m;
            }
            parent[to] = Some(prev);
        } else {
            // open edge: internals up to the boundary feed from the u end
            let b = open_positions.get(&ei).copied().unwrap_or(0);
            let k = e.chain_len();
            let mut prev = u_node;
            for &m in &e.internal[..b] {
                parent[m] = Some(prev);
                prev = m;
            }
            prev = v_node;
            for i in (b..k).rev() {
                let m = e.internal[i];
                parent[m] = Some(prev);
                prev = m;
            }
        }
    }
    // direct parents for reduced nodes joined by chainless closed edges are
    // set in the loop above through `parent[to]`

    RadialConfig {
        parent,
        configuration: Configuration {
            arcs,
            open_positions: open_positions.clone(),
        },
    }
}

/// Streams every radial configuration of the component in deterministic
/// order (tree-major, then open positions in mixed-radix ascending order).
/// The combined count is pre-checked against `cap` via the matrix-tree
/// determinant before anything is enumerated.
pub fn for_each_configuration(
    rc: &ReducedComponent,
    cap: u64,
    mut f: impl FnMut(&RadialConfig),
) -> Result<u64, OracleError> {
    let expected = configuration_count(rc);
    if expected > cap as u128 {
        return Err(OracleError::TooManyConfigurations {
            count: expected,
            cap,
        });
    }
    let pairs: Vec<(usize, usize)> = rc.minor_edges.iter().map(|e| (e.u, e.v)).collect();
    let mut emitted = 0u64;
    for_each_spanning_tree(rc.minor_node_count(), &pairs, &mut |tree| {
        let in_tree: BTreeSet<usize> = tree.iter().copied().collect();
        let open: Vec<usize> = (0..rc.minor_edges.len())
            .filter(|ei| !in_tree.contains(ei))
            .collect();
        let radices: Vec<usize> = open
            .iter()
            .map(|&ei| rc.minor_edges[ei].chain_len() + 1)
            .collect();
        let mut digits = vec![0usize; open.len()];
        loop {
            let positions: BTreeMap<usize, usize> =
                open.iter().zip(&digits).map(|(&ei, &b)| (ei, b)).collect();
            let cfg = build_config(rc, tree, &positions);
            f(&cfg);
            emitted += 1;
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return;
                }
                digits[i] += 1;
                if digits[i] < radices[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    });
    Ok(emitted)
}

/// Materialises all radial configurations; intended for small components.
pub fn enumerate_configurations(
    rc: &ReducedComponent,
    cap: u64,
) -> Result<Vec<RadialConfig>, OracleError> {
    let mut out = Vec::new();
    for_each_configuration(rc, cap, |c| out.push(c.clone()))?;
    Ok(out)
}

/// Exact ohmic loss of a radial configuration in watts: a single post-order
/// accumulation of subtree currents, then Σ R·I² over closed segments.
pub fn radial_losses(cfg: &RadialConfig, rc: &ReducedComponent) -> Result<f64, OracleError> {
    let n = rc.nodes.len();
    if cfg.parent.len() != n {
        return Err(OracleError::InvalidConfiguration);
    }
    let mut children = vec![Vec::new(); n];
    let mut root_count = 0;
    for (i, p) in cfg.parent.iter().enumerate() {
        match p {
            Some(q) if *q < n => children[*q].push(i),
            Some(_) => return Err(OracleError::InvalidConfiguration),
            None => root_count += 1,
        }
    }
    if root_count != 1 {
        return Err(OracleError::InvalidConfiguration);
    }
    let root = cfg.parent.iter().position(Option::is_none).unwrap();

    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        order.push(u);
        stack.extend(children[u].iter().copied());
    }
    if order.len() != n {
        return Err(OracleError::InvalidConfiguration);
    }
    let mut subtree: Vec<f64> = rc.nodes.iter().map(|c| c.current).collect();
    for &u in order.iter().rev() {
        if let Some(p) = cfg.parent[u] {
            subtree[p] += subtree[u];
        }
    }

    // resistance of every component segment, keyed by unordered endpoints
    let mut resistance: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for e in &rc.minor_edges {
        let mut prev = rc.minor_nodes[e.u];
        for (i, &m) in e.internal.iter().enumerate() {
            resistance.insert(ordered(prev, m), e.segment_resistances[i]);
            prev = m;
        }
        resistance.insert(
            ordered(prev, rc.minor_nodes[e.v]),
            *e.segment_resistances.last().expect("k+1 segments"),
        );
    }

    let mut loss = 0.0;
    for (u, p) in cfg.parent.iter().enumerate() {
        if let Some(p) = p {
            let r = resistance
                .get(&ordered(*p, u))
                .ok_or(OracleError::InvalidConfiguration)?;
            loss += r * subtree[u] * subtree[u];
        }
    }
    Ok(loss)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// The loss-minimal configuration, ties broken by enumeration order.
/// Returns (config, loss in watts, configuration count, tie flag).
pub fn optimal_configuration(
    rc: &ReducedComponent,
    cap: u64,
) -> Result<(RadialConfig, f64, u64, bool), OracleError> {
    let mut best: Option<(RadialConfig, f64)> = None;
    let mut tie = false;
    let mut failed = None;
    let count = for_each_configuration(rc, cap, |cfg| {
        let loss = match radial_losses(cfg, rc) {
            Ok(l) => l,
            Err(e) => {
                failed = Some(e);
                return;
            }
        };
        match &mut best {
            None => best = Some((cfg.clone(), loss)),
            Some((_, b)) => {
                if loss < *b {
                    best = Some((cfg.clone(), loss));
                    tie = false;
                } else if loss == *b {
                    tie = true;
                }
            }
        }
    })?;
    if let Some(e) = failed {
        return Err(e);
    }
    let (cfg, loss) = best.ok_or(OracleError::InvalidConfiguration)?;
    Ok((cfg, loss, count, tie))
}

/// Global minimum of a HUBO over all 2^n assignments via a subset-sum
/// transform; ties resolved toward the lexicographically smallest
/// assignment read as the tuple (x₀, x₁, …).
pub fn exhaustive_hubo_min(
    h: &BinaryPolynomial,
    n_vars: usize,
) -> Result<(Vec<bool>, f64), OracleError> {
    if n_vars > 24 {
        return Err(OracleError::TooManyVariables(n_vars));
    }
    if h.var_span() > n_vars {
        return Err(OracleError::TooManyVariables(h.var_span()));
    }
    let values = evaluate_all(h, n_vars);
    let mut best_mask = 0usize;
    let mut best = values[0];
    for (mask, &v) in values.iter().enumerate().skip(1) {
        if v < best || (v == best && lex_key(mask, n_vars) < lex_key(best_mask, n_vars)) {
            best = v;
            best_mask = mask;
        }
    }
    let assignment = (0..n_vars).map(|i| best_mask >> i & 1 == 1).collect();
    Ok((assignment, best))
}

/// Value of `h` at every assignment; bit i of the index is xᵢ. A zeta
/// (subset-sum) transform, O(n·2ⁿ).
pub fn evaluate_all(h: &BinaryPolynomial, n_vars: usize) -> Vec<f64> {
    assert!(n_vars <= 24, "exhaustive evaluation capped at 24 variables");
    let size = 1usize << n_vars;
    let mut values = vec![0.0f64; size];
    for (t, c) in h.terms() {
        let mut mask = 0usize;
        for &i in t.indices() {
            mask |= 1 << i;
        }
        values[mask] += c;
    }
    for bit in 0..n_vars {
        let b = 1usize << bit;
        for mask in 0..size {
            if mask & b != 0 {
                values[mask] += values[mask ^ b];
            }
        }
    }
    values
}

/// Bit-reversed mask so that x₀ compares as the most significant digit.
fn lex_key(mask: usize, n_vars: usize) -> usize {
    let mut key = 0;
    for i in 0..n_vars {
        if mask >> i & 1 == 1 {
            key |= 1 << (n_vars - 1 - i);
        }
    }
    key
}
