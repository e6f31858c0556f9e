//! Electrical-graph data model and network ingestion.
//!
//! A [`Network`] is an undirected graph of nodes carrying constant-current
//! load magnitudes and edges carrying line resistances, with exactly one
//! supply node marked as root. Losses downstream only depend on |I|²R, so
//! current magnitudes suffice and no AC quantities are modelled.
//!
//! Supported inputs: a JSON document (see [`parse_network_json`]), a pair
//! of CSV files (`nodes.csv` + `edges.csv`, see [`parse_network_csv`]),
//! and the built-in 33-bus benchmark case ([`load_ieee33`]).

use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use std::io::Read;
use thiserror::Error;

/// A bus, junction or load point in the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    /// Constant-current load magnitude in amperes; 0 for the supply.
    #[serde(rename = "current_a")]
    pub load_current: f64,
    /// Marks the single supply point.
    #[serde(rename = "root", default, skip_serializing_if = "is_false")]
    pub is_root: bool,
}

fn is_false(b: &bool) -> bool {
    !b
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// A distribution line between two nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub u: String,
    pub v: String,
    /// Line resistance in ohms, strictly positive.
    #[serde(rename = "resistance_ohm")]
    pub resistance: f64,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub switchable: bool,
}

impl Edge {
    /// Unordered endpoint pair with the smaller id first.
    pub fn key(&self) -> (&str, &str) {
        if self.u <= self.v {
            (&self.u, &self.v)
        } else {
            (&self.v, &self.u)
        }
    }
}

/// An undirected distribution network with a single supply root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Network {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("network: malformed {format} input: {detail}")]
    Malformed { format: &'static str, detail: String },
    #[error("network: {0}")]
    Invalid(Violation),
    #[error("network: io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A structured invariant violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("duplicate node id `{0}`")]
    DuplicateNodeId(String),
    #[error("edge `{u}`-`{v}` references unknown node `{missing}`")]
    UnknownEndpoint { u: String, v: String, missing: String },
    #[error("edge `{0}`-`{0}` is a self-loop")]
    SelfLoop(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("edge `{u}`-`{v}` has non-positive resistance {resistance}")]
    NonPositiveResistance { u: String, v: String, resistance: f64 },
    #[error("node `{id}` has negative load current {current}")]
    NegativeLoad { id: String, current: f64 },
    #[error("no node is marked as root")]
    NoRoot,
    #[error("multiple roots: `{0}` and `{1}`")]
    MultipleRoots(String, String),
    #[error("root `{id}` carries load current {current}, expected 0")]
    RootHasLoad { id: String, current: f64 },
    #[error("network is disconnected: node `{0}` is unreachable from the root")]
    Disconnected(String),
}

impl Network {
    /// Index of the unique root node, if the invariant holds.
    pub fn root_index(&self) -> Option<usize> {
        let mut it = self.nodes.iter().enumerate().filter(|(_, n)| n.is_root);
        let first = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some(first.0)
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// Adjacency lists over node indices, one entry per incident edge.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let by_id: HashMap<&str, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.as_str(), i))
            .collect();
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            if let (Some(&a), Some(&b)) = (by_id.get(e.u.as_str()), by_id.get(e.v.as_str())) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    pub fn total_load_current(&self) -> f64 {
        self.nodes.iter().map(|n| n.load_current).sum()
    }
}

/// Checks all network invariants; an empty list means the network is valid.
pub fn validate(net: &Network) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen_ids = HashSet::new();
    for n in &net.nodes {
        if !seen_ids.insert(n.id.as_str()) {
            out.push(Violation::DuplicateNodeId(n.id.clone()));
        }
        if n.load_current < 0.0 {
            out.push(Violation::NegativeLoad {
                id: n.id.clone(),
                current: n.load_current,
            });
        }
    }

    let roots: Vec<&Node> = net.nodes.iter().filter(|n| n.is_root).collect();
    match roots.as_slice() {
        [] => out.push(Violation::NoRoot),
        [r] => {
            if r.load_current != 0.0 {
                out.push(Violation::RootHasLoad {
                    id: r.id.clone(),
                    current: r.load_current,
                });
            }
        }
        [a, b, ..] => out.push(Violation::MultipleRoots(a.id.clone(), b.id.clone())),
    }

    let ids: HashSet<&str> = net.nodes.iter().map(|n| n.id.as_str()).collect();
    let mut seen_edges = HashSet::new();
    for e in &net.edges {
        if e.u == e.v {
            out.push(Violation::SelfLoop(e.u.clone()));
            continue;
        }
        for endpoint in [&e.u, &e.v] {
            if !ids.contains(endpoint.as_str()) {
                out.push(Violation::UnknownEndpoint {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    missing: endpoint.clone(),
                });
            }
        }
        if e.resistance <= 0.0 {
            out.push(Violation::NonPositiveResistance {
                u: e.u.clone(),
                v: e.v.clone(),
                resistance: e.resistance,
            });
        }
        let key = e.key();
        if !seen_edges.insert((key.0.to_owned(), key.1.to_owned())) {
            out.push(Violation::DuplicateEdge(key.0.to_owned(), key.1.to_owned()));
        }
    }

    // connectivity, only meaningful once the structural checks passed
    if out.is_empty() && !net.nodes.is_empty() {
        let adj = net.adjacency();
        let start = net.root_index().unwrap_or(0);
        let mut seen = vec![false; net.nodes.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(i) = seen.iter().position(|&s| !s) {
            out.push(Violation::Disconnected(net.nodes[i].id.clone()));
        }
    }

    out
}

fn validated(net: Network) -> Result<Network, NetworkError> {
    match validate(&net).into_iter().next() {
        None => Ok(net),
        Some(v) => Err(NetworkError::Invalid(v)),
    }
}

/// Parses the JSON network format and validates the result.
pub fn parse_network_json(reader: impl Read) -> Result<Network, NetworkError> {
    let net: Network = serde_json::from_reader(reader).map_err(|e| NetworkError::Malformed {
        format: "json",
        detail: e.to_string(),
    })?;
    validated(net)
}

/// Serialises a network to the JSON interchange format.
pub fn serialize_network_json(net: &Network) -> String {
    let mut s = serde_json::to_string_pretty(net).expect("network serialisation cannot fail");
    s.push('\n');
    s
}

fn csv_fields(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" => Some(true),
        "false" | "0" => Some(false),
        _ => None,
    }
}

fn csv_err(file: &str, line_no: usize, detail: impl Into<String>) -> NetworkError {
    NetworkError::Malformed {
        format: "csv",
        detail: format!("{file} line {line_no}: {}", detail.into()),
    }
}

/// Parses the two-file CSV format: `nodes.csv` with header `id,current_a,root`
/// and `edges.csv` with header `u,v,resistance_ohm,switchable`.
pub fn parse_network_csv(
    mut nodes: impl Read,
    mut edges: impl Read,
) -> Result<Network, NetworkError> {
    let mut nodes_text = String::new();
    nodes.read_to_string(&mut nodes_text)?;
    let mut edges_text = String::new();
    edges.read_to_string(&mut edges_text)?;

    let mut net = Network {
        nodes: Vec::new(),
        edges: Vec::new(),
    };

    for (i, line) in nodes_text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f = csv_fields(line);
        if i == 0 {
            if f != ["id", "current_a", "root"] {
                return Err(csv_err("nodes.csv", line_no, "expected header `id,current_a,root`"));
            }
            continue;
        }
        if f.len() != 3 {
            return Err(csv_err("nodes.csv", line_no, format!("expected 3 fields, got {}", f.len())));
        }
        let current: f64 = f[1]
            .parse()
            .map_err(|_| csv_err("nodes.csv", line_no, format!("bad current `{}`", f[1])))?;
        let root = parse_bool(f[2])
            .ok_or_else(|| csv_err("nodes.csv", line_no, format!("bad root flag `{}`", f[2])))?;
        net.nodes.push(Node {
            id: f[0].to_owned(),
            load_current: current,
            is_root: root,
        });
    }

    for (i, line) in edges_text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f = csv_fields(line);
        if i == 0 {
            if f != ["u", "v", "resistance_ohm", "switchable"] {
                return Err(csv_err(
                    "edges.csv",
                    line_no,
                    "expected header `u,v,resistance_ohm,switchable`",
                ));
            }
            continue;
        }
        if f.len() != 4 {
            return Err(csv_err("edges.csv", line_no, format!("expected 4 fields, got {}", f.len())));
        }
        let resistance: f64 = f[2]
            .parse()
            .map_err(|_| csv_err("edges.csv", line_no, format!("bad resistance `{}`", f[2])))?;
        let switchable = parse_bool(f[3])
            .ok_or_else(|| csv_err("edges.csv", line_no, format!("bad switchable flag `{}`", f[3])))?;
        net.edges.push(Edge {
            u: f[0].to_owned(),
            v: f[1].to_owned(),
            resistance,
            switchable,
        });
    }

    validated(net)
}

/// 33-bus radial test system: branch list `(from, to, R_ohm)` for the 32
/// tree branches followed by the 5 tie lines. Reactances are not modelled.
const IEEE33_BRANCHES: [(u32, u32, f64); 37] = [
    (1, 2, 0.0922),
    (2, 3, 0.4930),
    (3, 4, 0.3660),
    (4, 5, 0.3811),
    (5, 6, 0.8190),
    (6, 7, 0.1872),
    (7, 8, 0.7114),
    (8, 9, 1.0300),
    (9, 10, 1.0440),
    (10, 11, 0.1966),
    (11, 12, 0.3744),
    (12, 13, 1.4680),
    (13, 14, 0.5416),
    (14, 15, 0.5910),
    (15, 16, 0.7463),
    (16, 17, 1.2890),
    (17, 18, 0.7320),
    (2, 19, 0.1640),
    (19, 20, 1.5042),
    (20, 21, 0.4095),
    (21, 22, 0.7089),
    (3, 23, 0.4512),
    (23, 24, 0.8980),
    (24, 25, 0.8960),
    (6, 26, 0.2030),
    (26, 27, 0.2842),
    (27, 28, 1.0590),
    (28, 29, 0.8042),
    (29, 30, 0.5075),
    (30, 31, 0.9744),
    (31, 32, 0.3105),
    (32, 33, 0.3410),
    // tie lines
    (8, 21, 2.0000),
    (9, 15, 2.0000),
    (12, 22, 2.0000),
    (18, 33, 0.5000),
    (25, 29, 0.5000),
];

/// 33-bus loads `(bus, P_kW, Q_kvar)`; bus 1 is the supply and carries none.
const IEEE33_LOADS: [(u32, f64, f64); 32] = [
    (2, 100.0, 60.0),
    (3, 90.0, 40.0),
    (4, 120.0, 80.0),
    (5, 60.0, 30.0),
    (6, 60.0, 20.0),
    (7, 200.0, 100.0),
    (8, 200.0, 100.0),
    (9, 60.0, 20.0),
    (10, 60.0, 20.0),
    (11, 45.0, 30.0),
    (12, 60.0, 35.0),
    (13, 60.0, 35.0),
    (14, 120.0, 80.0),
    (15, 60.0, 10.0),
    (16, 60.0, 20.0),
    (17, 60.0, 20.0),
    (18, 90.0, 40.0),
    (19, 90.0, 40.0),
    (20, 90.0, 40.0),
    (21, 90.0, 40.0),
    (22, 90.0, 40.0),
    (23, 90.0, 50.0),
    (24, 420.0, 200.0),
    (25, 420.0, 200.0),
    (26, 60.0, 25.0),
    (27, 60.0, 25.0),
    (28, 60.0, 20.0),
    (29, 120.0, 70.0),
    (30, 200.0, 600.0),
    (31, 150.0, 70.0),
    (32, 210.0, 100.0),
    (33, 60.0, 40.0),
];

/// Nominal system voltage used to convert the kW/kvar loads into
/// constant-current magnitudes: I_A = 1000·√(P_kW² + Q_kvar²) / 12660.
const IEEE33_NOMINAL_VOLTAGE_V: f64 = 12_660.0;

/// Builds the standard 33-bus test system: 33 nodes, 32 branches plus 5 tie
/// lines, bus 1 as supply, loads embedded as constant-current equivalents.
pub fn load_ieee33() -> Network {
    let loads: HashMap<u32, f64> = IEEE33_LOADS
        .iter()
        .map(|&(bus, p_kw, q_kvar)| {
            let s_va = (p_kw * p_kw + q_kvar * q_kvar).sqrt() * 1000.0;
            (bus, s_va / IEEE33_NOMINAL_VOLTAGE_V)
        })
        .collect();
    let nodes = (1..=33)
        .map(|bus| Node {
            id: bus.to_string(),
            load_current: loads.get(&bus).copied().unwrap_or(0.0),
            is_root: bus == 1,
        })
        .collect();
    let edges = IEEE33_BRANCHES
        .iter()
        .map(|&(u, v, r)| Edge {
            u: u.to_string(),
            v: v.to_string(),
            resistance: r,
            switchable: true,
        })
        .collect();
    Network { nodes, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_json() -> &'static str {
        r#"{
            "nodes": [
                {"id": "r", "current_a": 0.0, "root": true},
                {"id": "a", "current_a": 1.0},
                {"id": "b", "current_a": 1.0}
            ],
            "edges": [
                {"u": "r", "v": "a", "resistance_ohm": 1.0},
                {"u": "r", "v": "b", "resistance_ohm": 1.0},
                {"u": "a", "v": "b", "resistance_ohm": 1.0}
            ]
        }"#
    }

    #[test]
    fn parse_triangle() {
        let net = parse_network_json(triangle_json().as_bytes()).unwrap();
        assert_eq!(net.nodes.len(), 3);
        assert_eq!(net.edges.len(), 3);
        assert_eq!(net.nodes[0].id, "r");
        assert!(net.edges.iter().all(|e| e.switchable));
    }

    #[test]
    fn self_loop_is_rejected() {
        let text = triangle_json().replace(r#""u": "a", "v": "b""#, r#""u": "a", "v": "a""#);
        let err = parse_network_json(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("self-loop"), "{err}");
        assert!(err.to_string().contains('a'), "{err}");
    }

    #[test]
    fn disconnected_is_rejected() {
        let text = r#"{
            "nodes": [
                {"id": "r", "current_a": 0.0, "root": true},
                {"id": "a", "current_a": 1.0},
                {"id": "b", "current_a": 1.0}
            ],
            "edges": [{"u": "r", "v": "a", "resistance_ohm": 1.0}]
        }"#;
        let err = parse_network_json(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("disconnected"), "{err}");
        assert!(err.to_string().contains('b'), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = triangle_json().replace(r#""current_a": 1.0}"#, r#""current_a": 1.0, "x": 1}"#);
        let err = parse_network_json(text.as_bytes()).unwrap_err();
        assert!(matches!(err, NetworkError::Malformed { format: "json", .. }), "{err}");
    }

    #[test]
    fn validate_reports_structured_violations() {
        let mut net = parse_network_json(triangle_json().as_bytes()).unwrap();
        assert!(validate(&net).is_empty());

        net.nodes[1].is_root = true;
        assert!(matches!(validate(&net)[0], Violation::MultipleRoots(..)));
        net.nodes[1].is_root = false;

        net.nodes[0].load_current = 5.0;
        assert!(matches!(validate(&net)[0], Violation::RootHasLoad { .. }));
    }

    #[test]
    fn zero_resistance_is_rejected() {
        let text = triangle_json().replace(
            r#"{"u": "a", "v": "b", "resistance_ohm": 1.0}"#,
            r#"{"u": "a", "v": "b", "resistance_ohm": 0.0}"#,
        );
        let err = parse_network_json(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("non-positive resistance"), "{err}");
    }

    #[test]
    fn json_round_trip_is_identity() {
        let net = parse_network_json(triangle_json().as_bytes()).unwrap();
        let text = serialize_network_json(&net);
        let again = parse_network_json(text.as_bytes()).unwrap();
        assert_eq!(net, again);

        let ieee = load_ieee33();
        let ieee_again = parse_network_json(serialize_network_json(&ieee).as_bytes()).unwrap();
        assert_eq!(ieee, ieee_again);
    }

    #[test]
    fn csv_round_trip() {
        let nodes = "id,current_a,root\nr,0.0,true\na,1.5,false\nb,2.0,false\n";
        let edges = "u,v,resistance_ohm,switchable\nr,a,1.0,true\nr,b,0.5,true\na,b,2.0,false\n";
        let net = parse_network_csv(nodes.as_bytes(), edges.as_bytes()).unwrap();
        assert_eq!(net.nodes.len(), 3);
        assert!(!net.edges[2].switchable);
        assert_eq!(net.nodes[1].load_current, 1.5);
    }

    #[test]
    fn csv_errors_carry_location() {
        let nodes = "id,current_a,root\nr,zero,true\n";
        let edges = "u,v,resistance_ohm,switchable\n";
        let err = parse_network_csv(nodes.as_bytes(), edges.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("nodes.csv line 2"), "{err}");
    }

    #[test]
    fn ieee33_shape() {
        let net = load_ieee33();
        assert_eq!(net.nodes.len(), 33);
        assert_eq!(net.edges.len(), 37);
        assert_eq!(net.nodes.iter().filter(|n| n.is_root).count(), 1);
        assert_eq!(net.nodes[0].id, "1");
        assert!(net.nodes[0].is_root);
        assert!(validate(&net).is_empty());
    }

    #[test]
    fn ieee33_load_conversion() {
        let net = load_ieee33();
        // bus 30: 200 kW, 600 kvar -> sqrt(200^2+600^2) kVA / 12.66 kV
        let bus30 = net.nodes.iter().find(|n| n.id == "30").unwrap();
        let expect = (200.0f64 * 200.0 + 600.0 * 600.0).sqrt() * 1000.0 / 12_660.0;
        assert!((bus30.load_current - expect).abs() < 1e-12);
        // total apparent current is positive and plausible (hundreds of amperes)
        let total = net.total_load_current();
        assert!(total > 300.0 && total < 500.0, "total {total}");
    }
}
