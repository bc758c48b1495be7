//! Semi-Markovian causal graphs.
//!
//! A [`CausalGraph`] holds directed edges plus bidirected arcs standing for
//! unobserved common causes. Every arc is materialized internally as a fresh
//! latent parent of both endpoints, so one plain-DAG reachability routine
//! answers d-separation for both edge kinds.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {0}")]
    DuplicateEdge(String),
    #[error("directed cycle through `{0}`")]
    Cycle(String),
    #[error("node sets overlap at `{0}`")]
    OverlappingSets(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Classification of a single covariate relative to a treatment/outcome pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ControlClass {
    GoodControl,
    NeutralControl,
    ColliderOnBackdoor,
    Mediator,
    ConfoundedMediator,
}

impl ControlClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ControlClass::GoodControl => "GoodControl",
            ControlClass::NeutralControl => "NeutralControl",
            ControlClass::ColliderOnBackdoor => "ColliderOnBackdoor",
            ControlClass::Mediator => "Mediator",
            ControlClass::ConfoundedMediator => "ConfoundedMediator",
        }
    }
}

impl fmt::Display for ControlClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Immutable causal graph over named nodes.
#[derive(Debug, Clone)]
pub struct CausalGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    directed: Vec<(usize, usize)>,
    // endpoints stored with lo < hi
    bidirected: Vec<(usize, usize)>,
    // observed nodes first, then one latent per bidirected arc
    aug_parents: Vec<Vec<usize>>,
    aug_children: Vec<Vec<usize>>,
}

impl PartialEq for CausalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.directed == other.directed
            && self.bidirected == other.bidirected
    }
}

impl CausalGraph {
    /// Strict constructor: every edge endpoint must appear in `nodes`.
    pub fn new<S: AsRef<str>>(
        nodes: &[S],
        directed: &[(S, S)],
        bidirected: &[(S, S)],
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(nodes.len());
        let mut names = Vec::with_capacity(nodes.len());
        for n in nodes {
            let n = n.as_ref();
            if index.insert(n.to_string(), names.len()).is_some() {
                return Err(GraphError::DuplicateNode(n.to_string()));
            }
            names.push(n.to_string());
        }
        let lookup = |s: &S| -> Result<usize> {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| GraphError::UnknownNode(s.as_ref().to_string()))
        };
        let mut dir = Vec::with_capacity(directed.len());
        for (a, b) in directed {
            dir.push((lookup(a)?, lookup(b)?));
        }
        let mut bi = Vec::with_capacity(bidirected.len());
        for (a, b) in bidirected {
            bi.push((lookup(a)?, lookup(b)?));
        }
        Self::from_indices(names, index, dir, bi)
    }

    fn from_indices(
        nodes: Vec<String>,
        index: HashMap<String, usize>,
        directed: Vec<(usize, usize)>,
        bidirected: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = nodes.len();
        let mut seen = BTreeSet::new();
        for &(a, b) in &directed {
            if a == b {
                return Err(GraphError::SelfLoop(nodes[a].clone()));
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(format!(
                    "{} -> {}",
                    nodes[a], nodes[b]
                )));
            }
        }
        let mut bi = Vec::with_capacity(bidirected.len());
        let mut seen_bi = BTreeSet::new();
        for &(a, b) in &bidirected {
            if a == b {
                return Err(GraphError::SelfLoop(nodes[a].clone()));
            }
            let key = (a.min(b), a.max(b));
            if !seen_bi.insert(key) {
                return Err(GraphError::DuplicateEdge(format!(
                    "{} <-> {}",
                    nodes[a], nodes[b]
                )));
            }
            bi.push(key);
        }

        let total = n + bi.len();
        let mut aug_parents = vec![Vec::new(); total];
        let mut aug_children = vec![Vec::new(); total];
        for &(a, b) in &directed {
            aug_parents[b].push(a);
            aug_children[a].push(b);
        }
        for (k, &(a, b)) in bi.iter().enumerate() {
            let latent = n + k;
            aug_children[latent].push(a);
            aug_children[latent].push(b);
            aug_parents[a].push(latent);
            aug_parents[b].push(latent);
        }

        let g = CausalGraph {
            nodes,
            index,
            directed,
            bidirected: bi,
            aug_parents,
            aug_children,
        };
        if let Some(v) = g.find_cycle_node() {
            return Err(GraphError::Cycle(g.nodes[v].clone()));
        }
        Ok(g)
    }

    fn find_cycle_node(&self) -> Option<usize> {
        let order = self.topo_order_partial();
        if order.len() == self.nodes.len() {
            return None;
        }
        let placed: BTreeSet<usize> = order.into_iter().collect();
        (0..self.nodes.len()).find(|v| !placed.contains(v))
    }

    fn topo_order_partial(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for &(_, b) in &self.directed {
            indeg[b] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.aug_children[v] {
                if c < n {
                    indeg[c] -= 1;
                    if indeg[c] == 0 {
                        queue.push_back(c);
                    }
                }
            }
        }
        order
    }

    /// Observed nodes in a topological order of the directed part.
    pub fn topological_order(&self) -> Vec<usize> {
        self.topo_order_partial()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(name.to_string()))
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.nodes[idx]
    }

    /// Directed edges as `(from, to)` index pairs.
    pub fn directed_edges(&self) -> &[(usize, usize)] {
        &self.directed
    }

    /// Bidirected arcs as index pairs with the smaller index first.
    pub fn bidirected_edges(&self) -> &[(usize, usize)] {
        &self.bidirected
    }

    pub fn has_directed(&self, from: usize, to: usize) -> bool {
        self.directed.contains(&(from, to))
    }

    pub fn has_bidirected(&self, a: usize, b: usize) -> bool {
        self.bidirected.contains(&(a.min(b), a.max(b)))
    }

    /// Observed parents of `v` along directed edges.
    pub fn parents(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.nodes.len();
        self.aug_parents[v].iter().copied().filter(move |&p| p < n)
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.aug_children[v].iter().copied()
    }

    fn descendants_mask(&self, v: usize) -> Vec<bool> {
        let mut mask = vec![false; self.nodes.len()];
        let mut stack = vec![v];
        mask[v] = true;
        while let Some(u) = stack.pop() {
            for c in self.children(u) {
                if !mask[c] {
                    mask[c] = true;
                    stack.push(c);
                }
            }
        }
        mask
    }

    /// Reflexive-transitive closure along directed edges.
    pub fn descendants(&self, node: &str) -> Result<BTreeSet<&str>> {
        let v = self.index_of(node)?;
        Ok(self
            .descendants_mask(v)
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.nodes[i].as_str())
            .collect())
    }

    fn indices(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|s| self.index_of(s)).collect()
    }

    /// Tests whether `z` d-separates every node of `a` from every node of `b`.
    pub fn d_separated(&self, a: &[&str], b: &[&str], z: &[&str]) -> Result<bool> {
        let (a, b, z) = (self.indices(a)?, self.indices(b)?, self.indices(z)?);
        self.check_disjoint(&[&a, &b, &z])?;
        Ok(self.d_separated_idx(&a, &b, &z))
    }

    fn check_disjoint(&self, sets: &[&[usize]]) -> Result<()> {
        let mut owner = vec![usize::MAX; self.nodes.len()];
        for (k, set) in sets.iter().enumerate() {
            for &v in set.iter() {
                if owner[v] != usize::MAX && owner[v] != k {
                    return Err(GraphError::OverlappingSets(self.nodes[v].clone()));
                }
                owner[v] = k;
            }
        }
        Ok(())
    }

    pub(crate) fn d_separated_idx(&self, a: &[usize], b: &[usize], z: &[usize]) -> bool {
        if a.is_empty() || b.is_empty() {
            return true;
        }
        let reach = self.reachable(a, z);
        !b.iter().any(|&v| reach[v])
    }

    /// Bayes-ball reachability over the latent-augmented DAG. Returns the
    /// mask of observed nodes d-connected to `sources` given `z`.
    fn reachable(&self, sources: &[usize], z: &[usize]) -> Vec<bool> {
        let total = self.aug_parents.len();
        let mut in_z = vec![false; total];
        for &v in z {
            in_z[v] = true;
        }
        // ancestors of z, z included
        let mut anc = in_z.clone();
        let mut stack: Vec<usize> = z.to_vec();
        while let Some(v) = stack.pop() {
            for &p in &self.aug_parents[v] {
                if !anc[p] {
                    anc[p] = true;
                    stack.push(p);
                }
            }
        }

        const UP: usize = 0;
        const DOWN: usize = 1;
        let mut visited = vec![[false; 2]; total];
        let mut reach = vec![false; total];
        let mut queue: VecDeque<(usize, usize)> = sources.iter().map(|&s| (s, UP)).collect();
        while let Some((v, dir)) = queue.pop_front() {
            if visited[v][dir] {
                continue;
            }
            visited[v][dir] = true;
            if !in_z[v] {
                reach[v] = true;
            }
            if dir == UP {
                if !in_z[v] {
                    queue.extend(self.aug_parents[v].iter().map(|&p| (p, UP)));
                    queue.extend(self.aug_children[v].iter().map(|&c| (c, DOWN)));
                }
            } else {
                if !in_z[v] {
                    queue.extend(self.aug_children[v].iter().map(|&c| (c, DOWN)));
                }
                if anc[v] {
                    queue.extend(self.aug_parents[v].iter().map(|&p| (p, UP)));
                }
            }
        }
        reach.truncate(self.nodes.len());
        reach
    }

    /// Copy of the graph with every directed edge leaving `v` removed.
    /// Bidirected arcs at `v` are kept.
    pub fn without_edges_from(&self, v: usize) -> CausalGraph {
        let directed = self
            .directed
            .iter()
            .copied()
            .filter(|&(a, _)| a != v)
            .collect();
        CausalGraph::from_indices(
            self.nodes.clone(),
            self.index.clone(),
            directed,
            self.bidirected.clone(),
        )
        .expect("edge deletion preserves validity")
    }

    /// Backdoor criterion for the ordered pair `(d, y)`: `z` holds no
    /// descendant of `d` and d-separates `d` from `y` once the edges emitted
    /// by `d` are deleted.
    pub fn backdoor_admissible(&self, d: &str, y: &str, z: &[&str]) -> Result<bool> {
        let (di, yi) = (self.index_of(d)?, self.index_of(y)?);
        let zi = self.indices(z)?;
        if di == yi {
            return Err(GraphError::OverlappingSets(d.to_string()));
        }
        self.check_disjoint(&[&[di], &[yi], &zi])?;
        Ok(self.backdoor_admissible_idx(di, yi, &zi))
    }

    pub(crate) fn backdoor_admissible_idx(&self, d: usize, y: usize, z: &[usize]) -> bool {
        let desc = self.descendants_mask(d);
        if z.iter().any(|&v| desc[v]) {
            return false;
        }
        self.without_edges_from(d).d_separated_idx(&[d], &[y], z)
    }

    /// True when `x` lies on some directed path from `d` to `y`.
    fn on_directed_path(&self, d: usize, y: usize, x: usize) -> bool {
        self.descendants_mask(d)[x] && self.descendants_mask(x)[y]
    }

    /// Classifies `x` as a control for estimating the effect of `d` on `y`.
    ///
    /// Rules are tried in order: mediator, confounded mediator, collider on a
    /// backdoor path, good control, and neutral as the fallback.
    pub fn classify_control(&self, d: &str, y: &str, x: &str) -> Result<ControlClass> {
        let (di, yi, xi) = (self.index_of(d)?, self.index_of(y)?, self.index_of(x)?);
        if xi == di || xi == yi || di == yi {
            return Err(GraphError::OverlappingSets(x.to_string()));
        }
        if self.on_directed_path(di, yi, xi) {
            let touched = self.bidirected.iter().any(|&(a, b)| a == xi || b == xi);
            if !touched {
                return Ok(ControlClass::Mediator);
            }
            if self.has_bidirected(xi, yi) {
                return Ok(ControlClass::ConfoundedMediator);
            }
        }
        let backdoor = self.without_edges_from(di);
        if backdoor.is_collider_on_some_path(di, yi, xi) {
            return Ok(ControlClass::ColliderOnBackdoor);
        }
        if self.backdoor_admissible_idx(di, yi, &[xi]) && !self.backdoor_admissible_idx(di, yi, &[])
        {
            return Ok(ControlClass::GoodControl);
        }
        Ok(ControlClass::NeutralControl)
    }

    /// Whether some simple path between `a` and `b` passes through `x` with
    /// two arrowheads meeting at `x`.
    ///
    /// For every pair of arrow-into-`x` neighbours `(u, w)` this asks for two
    /// vertex-disjoint skeleton paths joining `{a, b}` to `{u, w}` that avoid
    /// `x`, answered as a unit-capacity max-flow of value two.
    fn is_collider_on_some_path(&self, a: usize, b: usize, x: usize) -> bool {
        let n = self.nodes.len();
        let mut into_x: Vec<usize> = self
            .parents(x)
            .chain(self.bidirected.iter().filter_map(|&(p, q)| {
                if p == x {
                    Some(q)
                } else if q == x {
                    Some(p)
                } else {
                    None
                }
            }))
            .collect();
        into_x.sort_unstable();
        into_x.dedup();
        if into_x.len() < 2 {
            return false;
        }
        let mut skeleton = vec![BTreeSet::new(); n];
        for &(p, q) in self.directed.iter().chain(self.bidirected.iter()) {
            if p != x && q != x {
                skeleton[p].insert(q);
                skeleton[q].insert(p);
            }
        }
        for (i, &u) in into_x.iter().enumerate() {
            for &w in &into_x[i + 1..] {
                if two_disjoint_paths(&skeleton, [a, b], [u, w]) {
                    return true;
                }
            }
        }
        false
    }

    /// Parses the line-oriented graph format (`A -> B`, `A <-> B`, `node N`,
    /// `#` comments).
    pub fn parse(text: &str) -> Result<Self> {
        let mut nodes: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut directed = Vec::new();
        let mut bidirected = Vec::new();
        let mut declare = |name: &str, nodes: &mut Vec<String>| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                nodes.push(name.to_string());
                nodes.len() - 1
            })
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let err = |message: &str| GraphError::Parse {
                line: line_no,
                message: message.to_string(),
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("node ") {
                let name = valid_name(rest.trim()).ok_or_else(|| err("invalid node name"))?;
                declare(name, &mut nodes);
                continue;
            }
            let (lhs, rhs, bi) = if let Some(pos) = line.find("<->") {
                (&line[..pos], &line[pos + 3..], true)
            } else if let Some(pos) = line.find("->") {
                (&line[..pos], &line[pos + 2..], false)
            } else {
                return Err(err("expected `->` or `<->`"));
            };
            let lhs = lhs.trim();
            let rhs = rhs.trim();
            if lhs.is_empty() {
                return Err(err("expected source node"));
            }
            if rhs.is_empty() {
                return Err(err("expected target node"));
            }
            let a = valid_name(lhs).ok_or_else(|| err("invalid source node name"))?;
            let b = valid_name(rhs).ok_or_else(|| err("invalid target node name"))?;
            let (ai, bi_) = (declare(a, &mut nodes), declare(b, &mut nodes));
            if bi {
                bidirected.push((ai, bi_));
            } else {
                directed.push((ai, bi_));
            }
        }
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self::from_indices(nodes, index, directed, bidirected)
    }

    /// Serializes into the text format accepted by [`CausalGraph::parse`].
    /// Every node is declared up front so node order round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            out.push_str("node ");
            out.push_str(n);
            out.push('\n');
        }
        for &(a, b) in &self.directed {
            out.push_str(&format!("{} -> {}\n", self.nodes[a], self.nodes[b]));
        }
        for &(a, b) in &self.bidirected {
            out.push_str(&format!("{} <-> {}\n", self.nodes[a], self.nodes[b]));
        }
        out
    }
}

fn valid_name(s: &str) -> Option<&str> {
    if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '<' || c == '>') {
        None
    } else {
        Some(s)
    }
}

/// Unit vertex-capacity max-flow from `sources` to `sinks` on an undirected
/// skeleton; true when the flow reaches two.
fn two_disjoint_paths(skeleton: &[BTreeSet<usize>], sources: [usize; 2], sinks: [usize; 2]) -> bool {
    let n = skeleton.len();
    // v_in = 2v, v_out = 2v + 1, super source 2n, super sink 2n + 1
    let s = 2 * n;
    let t = 2 * n + 1;
    let mut to: Vec<usize> = Vec::new();
    let mut cap: Vec<i32> = Vec::new();
    let mut adj = vec![Vec::new(); 2 * n + 2];
    let mut add = |u: usize, v: usize, c: i32, adj: &mut Vec<Vec<usize>>| {
        adj[u].push(to.len());
        to.push(v);
        cap.push(c);
        adj[v].push(to.len());
        to.push(u);
        cap.push(0);
    };
    for v in 0..n {
        add(2 * v, 2 * v + 1, 1, &mut adj);
        for &w in &skeleton[v] {
            add(2 * v + 1, 2 * w, 1, &mut adj);
        }
    }
    for &src in &sources {
        add(s, 2 * src, 1, &mut adj);
    }
    for &snk in &sinks {
        add(2 * snk + 1, t, 1, &mut adj);
    }

    let mut flow = 0;
    while flow < 2 {
        let mut prev_edge = vec![usize::MAX; 2 * n + 2];
        let mut seen = vec![false; 2 * n + 2];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &e in &adj[u] {
                let v = to[e];
                if !seen[v] && cap[e] > 0 {
                    seen[v] = true;
                    prev_edge[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut v = t;
        while v != s {
            let e = prev_edge[v];
            cap[e] -= 1;
            cap[e ^ 1] += 1;
            v = to[e ^ 1];
        }
        flow += 1;
    }
    flow >= 2
}

/// Incremental construction that declares nodes on first mention.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    nodes: Vec<String>,
    directed: Vec<(String, String)>,
    bidirected: Vec<(String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, name: &str) -> Self {
        self.declare(name);
        self
    }

    pub fn edge(mut self, from: &str, to: &str) -> Self {
        self.declare(from);
        self.declare(to);
        self.directed.push((from.to_string(), to.to_string()));
        self
    }

    pub fn arc(mut self, a: &str, b: &str) -> Self {
        self.declare(a);
        self.declare(b);
        self.bidirected.push((a.to_string(), b.to_string()));
        self
    }

    fn declare(&mut self, name: &str) {
        if !self.nodes.iter().any(|n| n == name) {
            self.nodes.push(name.to_string());
        }
    }

    pub fn build(self) -> Result<CausalGraph> {
        CausalGraph::new(&self.nodes, &self.directed, &self.bidirected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1a() -> CausalGraph {
        GraphBuilder::new()
            .edge("X", "D")
            .edge("X", "Y")
            .edge("D", "Y")
            .build()
            .unwrap()
    }

    fn fig1b() -> CausalGraph {
        GraphBuilder::new()
            .edge("D", "Y")
            .arc("X", "D")
            .arc("X", "Y")
            .build()
            .unwrap()
    }

    fn fig1c() -> CausalGraph {
        GraphBuilder::new()
            .edge("D", "X")
            .edge("X", "Y")
            .edge("D", "Y")
            .build()
            .unwrap()
    }

    fn fig1d() -> CausalGraph {
        GraphBuilder::new()
            .edge("D", "X")
            .edge("X", "Y")
            .edge("D", "Y")
            .arc("X", "Y")
            .build()
            .unwrap()
    }

    fn set<'a>(items: &[&'a str]) -> BTreeSet<&'a str> {
        items.iter().copied().collect()
    }

    #[test]
    fn descendants_of_chain_and_isolated() {
        let g = GraphBuilder::new()
            .edge("A", "B")
            .edge("B", "C")
            .node("X")
            .build()
            .unwrap();
        assert_eq!(g.descendants("A").unwrap(), set(&["A", "B", "C"]));
        assert_eq!(g.descendants("X").unwrap(), set(&["X"]));
        assert_eq!(fig1c().descendants("D").unwrap(), set(&["D", "X", "Y"]));
        assert!(matches!(g.descendants("Q"), Err(GraphError::UnknownNode(_))));
    }

    #[test]
    fn chain_and_collider_rules() {
        let chain = GraphBuilder::new().edge("A", "B").edge("B", "C").build().unwrap();
        assert!(chain.d_separated(&["A"], &["C"], &["B"]).unwrap());
        assert!(!chain.d_separated(&["A"], &["C"], &[]).unwrap());

        let collider = GraphBuilder::new().edge("A", "B").edge("C", "B").build().unwrap();
        assert!(collider.d_separated(&["A"], &["C"], &[]).unwrap());
        assert!(!collider.d_separated(&["A"], &["C"], &["B"]).unwrap());
    }

    #[test]
    fn descendant_of_collider_unblocks() {
        let g = GraphBuilder::new()
            .edge("A", "B")
            .edge("C", "B")
            .edge("B", "E")
            .build()
            .unwrap();
        assert!(g.d_separated(&["A"], &["C"], &[]).unwrap());
        assert!(!g.d_separated(&["A"], &["C"], &["E"]).unwrap());
    }

    #[test]
    fn m_graph_without_direct_edge_is_separated() {
        let g = GraphBuilder::new()
            .node("D")
            .node("Y")
            .arc("X", "D")
            .arc("X", "Y")
            .build()
            .unwrap();
        assert!(g.d_separated(&["D"], &["Y"], &[]).unwrap());
        assert!(!g.d_separated(&["D"], &["Y"], &["X"]).unwrap());
    }

    #[test]
    fn overlapping_sets_rejected() {
        let g = fig1a();
        assert!(matches!(
            g.d_separated(&["D"], &["Y"], &["D"]),
            Err(GraphError::OverlappingSets(_))
        ));
        assert!(matches!(
            g.backdoor_admissible("D", "Y", &["Y"]),
            Err(GraphError::OverlappingSets(_))
        ));
    }

    #[test]
    fn backdoor_on_figure_graphs() {
        assert!(fig1a().backdoor_admissible("D", "Y", &["X"]).unwrap());
        assert!(!fig1a().backdoor_admissible("D", "Y", &[]).unwrap());
        assert!(fig1b().backdoor_admissible("D", "Y", &[]).unwrap());
        assert!(!fig1b().backdoor_admissible("D", "Y", &["X"]).unwrap());
        assert!(fig1c().backdoor_admissible("D", "Y", &[]).unwrap());
        assert!(!fig1c().backdoor_admissible("D", "Y", &["X"]).unwrap());
        assert!(fig1d().backdoor_admissible("D", "Y", &[]).unwrap());
        assert!(!fig1d().backdoor_admissible("D", "Y", &["X"]).unwrap());
    }

    #[test]
    fn classify_figure_graphs() {
        assert_eq!(fig1a().classify_control("D", "Y", "X").unwrap(), ControlClass::GoodControl);
        assert_eq!(
            fig1b().classify_control("D", "Y", "X").unwrap(),
            ControlClass::ColliderOnBackdoor
        );
        assert_eq!(fig1c().classify_control("D", "Y", "X").unwrap(), ControlClass::Mediator);
        assert_eq!(
            fig1d().classify_control("D", "Y", "X").unwrap(),
            ControlClass::ConfoundedMediator
        );
        let with_noise = GraphBuilder::new().edge("D", "Y").node("Z").build().unwrap();
        assert_eq!(
            with_noise.classify_control("D", "Y", "Z").unwrap(),
            ControlClass::NeutralControl
        );
        assert!(fig1a().classify_control("D", "Y", "D").is_err());
    }

    #[test]
    fn collider_needs_disjoint_paths() {
        // C is a collider between A and B only through the same node P, so no
        // simple A-B path has C as a collider.
        let g = GraphBuilder::new()
            .edge("P", "C")
            .edge("Q", "C")
            .edge("A", "P")
            .edge("B", "P")
            .node("Q")
            .build()
            .unwrap();
        let a = g.index_of("A").unwrap();
        let b = g.index_of("B").unwrap();
        let c = g.index_of("C").unwrap();
        assert!(!g.is_collider_on_some_path(a, b, c));

        let g2 = GraphBuilder::new().edge("A", "C").edge("B", "C").build().unwrap();
        let (a, b, c) = (0, 2, 1);
        assert_eq!(g2.name(a), "A");
        assert_eq!(g2.name(b), "B");
        assert!(g2.is_collider_on_some_path(a, b, c));
    }

    #[test]
    fn invalid_graphs() {
        assert!(matches!(
            GraphBuilder::new().edge("A", "B").edge("B", "A").build(),
            Err(GraphError::Cycle(_))
        ));
        assert!(matches!(
            GraphBuilder::new().edge("A", "A").build(),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(matches!(
            GraphBuilder::new().edge("A", "B").edge("A", "B").build(),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            GraphBuilder::new().arc("A", "B").arc("B", "A").build(),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            CausalGraph::new(&["A"], &[("A", "B")], &[]),
            Err(GraphError::UnknownNode(_))
        ));
        assert!(matches!(
            CausalGraph::new(&["A", "A"], &[], &[]),
            Err(GraphError::DuplicateNode(_))
        ));
    }

    #[test]
    fn parse_text_format() {
        let g = CausalGraph::parse("# m-graph\nD -> Y\nX <-> D  # latent\nX<->Y\nnode Z\n").unwrap();
        assert_eq!(g.nodes(), &["D", "Y", "X", "Z"]);
        assert_eq!(g.directed_edges().len(), 1);
        assert_eq!(g.bidirected_edges().len(), 2);
        assert_eq!(CausalGraph::parse(&g.to_text()).unwrap(), g);

        let err = CausalGraph::parse("A ->").unwrap_err();
        assert_eq!(err.to_string(), "line 1: expected target node");
        let err = CausalGraph::parse("A -> B\n-> C").unwrap_err();
        assert_eq!(err.to_string(), "line 2: expected source node");
        let err = CausalGraph::parse("A B").unwrap_err();
        assert_eq!(err.to_string(), "line 1: expected `->` or `<->`");
        let err = CausalGraph::parse("A -> B C").unwrap_err();
        assert_eq!(err.to_string(), "line 1: invalid target node name");
    }
}
