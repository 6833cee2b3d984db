//! Edge Firing Games.
//!
//! A game is a connected undirected graph with a sink and an initial
//! orientation. A non-sink vertex whose incident edges all point at it may
//! fire, which reverses every one of those edges. [`explore`] enumerates
//! every reachable orientation breadth-first and tracks, for each one, how
//! many times each vertex was fired to reach it.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::Rng;
use thiserror::Error;

use crate::lattice::{check_lattice, Lattice, LatticeError, Violation};
use crate::poset::Poset;

/// Default cap on the number of edges [`explore`] accepts.
pub const DEFAULT_MAX_EDGES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EfgError {
    #[error("empty vertex label")]
    EmptyLabel,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("sink index {0} is not a vertex")]
    BadSink(usize),
    #[error("edge {0} references a missing vertex")]
    EdgeOutOfRange(usize),
    #[error("self loop at `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("graph is disconnected: `{0}` is unreachable from `{1}`")]
    Disconnected(String, String),
    #[error("orientation has {found} directions for {expected} edges")]
    ArityMismatch { expected: usize, found: usize },
    #[error("vertex `{0}` cannot fire")]
    NotFireable(String),
    #[error("graph has {edges} edges, above the cap of {cap}")]
    TooManyEdges { edges: usize, cap: usize },
    #[error("configuration {config} reached with two different shot multisets")]
    ShotSetConflict { config: usize },
    #[error("successor relation has a cycle")]
    Cyclic,
}

/// A connected undirected graph with a sink vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct FiringGraph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    sink: usize,
    incident: Vec<Vec<usize>>,
}

impl fmt::Debug for FiringGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|&(u, v)| format!("{}-{}", self.vertices[u], self.vertices[v]))
            .collect();
        f.debug_struct("FiringGraph")
            .field("vertices", &self.vertices)
            .field("sink", &self.vertices[self.sink])
            .field("edges", &edges)
            .finish()
    }
}

impl FiringGraph {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(usize, usize)>,
        sink: usize,
    ) -> Result<FiringGraph, EfgError> {
        let n = vertices.len();
        let mut seen = HashMap::with_capacity(n);
        for (i, v) in vertices.iter().enumerate() {
            if v.is_empty() {
                return Err(EfgError::EmptyLabel);
            }
            if seen.insert(v.as_str(), i).is_some() {
                return Err(EfgError::DuplicateVertex(v.clone()));
            }
        }
        if sink >= n {
            return Err(EfgError::BadSink(sink));
        }
        let mut incident = vec![Vec::new(); n];
        let mut pairs = HashMap::with_capacity(edges.len());
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(EfgError::EdgeOutOfRange(e));
            }
            if u == v {
                return Err(EfgError::SelfLoop(vertices[u].clone()));
            }
            if pairs.insert((u.min(v), u.max(v)), e).is_some() {
                return Err(EfgError::DuplicateEdge(
                    vertices[u].clone(),
                    vertices[v].clone(),
                ));
            }
            incident[u].push(e);
            incident[v].push(e);
        }

        let mut reached = FixedBitSet::with_capacity(n);
        let mut stack = vec![sink];
        reached.insert(sink);
        while let Some(x) = stack.pop() {
            for &e in &incident[x] {
                let (u, v) = edges[e];
                let y = if u == x { v } else { u };
                if !reached.put(y) {
                    stack.push(y);
                }
            }
        }
        if let Some(missing) = (0..n).find(|&x| !reached.contains(x)) {
            return Err(EfgError::Disconnected(
                vertices[missing].clone(),
                vertices[sink].clone(),
            ));
        }

        Ok(FiringGraph {
            vertices,
            edges,
            sink,
            incident,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }
}

/// One direction per edge. Bit `e` clear means edge `e` points from its
/// first listed endpoint to its second; set means the reverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    reversed: FixedBitSet,
}

impl Orientation {
    /// Every edge directed first endpoint to second.
    pub fn forward(edges: usize) -> Orientation {
        Orientation {
            reversed: FixedBitSet::with_capacity(edges),
        }
    }

    pub fn from_reversed(reversed: &[bool]) -> Orientation {
        let mut bits = FixedBitSet::with_capacity(reversed.len());
        for (e, _) in reversed.iter().enumerate().filter(|(_, &r)| r) {
            bits.insert(e);
        }
        Orientation { reversed: bits }
    }

    pub fn len(&self) -> usize {
        self.reversed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reversed.len() == 0
    }

    pub fn is_reversed(&self, e: usize) -> bool {
        self.reversed.contains(e)
    }

    /// `(tail, head)` of edge `e`.
    pub fn arc(&self, g: &FiringGraph, e: usize) -> (usize, usize) {
        let (u, v) = g.edges[e];
        if self.is_reversed(e) {
            (v, u)
        } else {
            (u, v)
        }
    }

    pub fn head(&self, g: &FiringGraph, e: usize) -> usize {
        self.arc(g, e).1
    }
}

/// A validated game: graph plus initial orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfgInstance {
    graph: FiringGraph,
    initial: Orientation,
}

impl EfgInstance {
    pub fn new(graph: FiringGraph, initial: Orientation) -> Result<EfgInstance, EfgError> {
        if initial.len() != graph.edges.len() {
            return Err(EfgError::ArityMismatch {
                expected: graph.edges.len(),
                found: initial.len(),
            });
        }
        Ok(EfgInstance { graph, initial })
    }

    pub fn graph(&self) -> &FiringGraph {
        &self.graph
    }

    pub fn initial(&self) -> &Orientation {
        &self.initial
    }
}

/// Validates raw parts into an [`EfgInstance`].
pub fn validate_efg(
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    sink: usize,
    initial: Orientation,
) -> Result<EfgInstance, EfgError> {
    EfgInstance::new(FiringGraph::new(vertices, edges, sink)?, initial)
}

fn can_fire(g: &FiringGraph, c: &Orientation, v: usize) -> bool {
    v != g.sink && !g.incident[v].is_empty() && g.incident[v].iter().all(|&e| c.head(g, e) == v)
}

/// Non-sink vertices of positive degree whose incident edges all point at
/// them, ascending.
pub fn fireable(g: &FiringGraph, c: &Orientation) -> Vec<usize> {
    (0..g.vertices.len())
        .filter(|&v| can_fire(g, c, v))
        .collect()
}

/// Fires `v`, reversing every incident edge.
pub fn fire(g: &FiringGraph, c: &Orientation, v: usize) -> Result<Orientation, EfgError> {
    if v >= g.vertices.len() || !can_fire(g, c, v) {
        let label = g.vertices.get(v).cloned().unwrap_or_else(|| v.to_string());
        return Err(EfgError::NotFireable(label));
    }
    let mut next = c.clone();
    for &e in &g.incident[v] {
        next.reversed.toggle(e);
    }
    Ok(next)
}

/// One firing step in a configuration space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Successor {
    pub from: usize,
    pub to: usize,
    pub vertex: usize,
}

/// Every configuration reachable from the initial one.
#[derive(Debug, Clone)]
pub struct ConfigSpace {
    graph: FiringGraph,
    configs: Vec<Orientation>,
    successors: Vec<Successor>,
    /// Fire count per vertex, per configuration.
    shots: Vec<Vec<u32>>,
    out_steps: Vec<Vec<usize>>,
    in_steps: Vec<Vec<usize>>,
    simple: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreOptions {
    pub max_edges: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            max_edges: DEFAULT_MAX_EDGES,
        }
    }
}

/// Breadth-first closure of the firing rule from the initial orientation.
///
/// Configurations are numbered in discovery order, firing vertices in
/// ascending index order at each configuration, so index 0 is the initial
/// configuration. Every revisit of a configuration compares the shot
/// multiset along the new path with the recorded one.
pub fn explore(e: &EfgInstance, opts: ExploreOptions) -> Result<ConfigSpace, EfgError> {
    let g = &e.graph;
    if g.edges.len() > opts.max_edges {
        return Err(EfgError::TooManyEdges {
            edges: g.edges.len(),
            cap: opts.max_edges,
        });
    }
    let nv = g.vertices.len();
    let mut configs = vec![e.initial.clone()];
    let mut shots = vec![vec![0u32; nv]];
    let mut index: HashMap<Orientation, usize> = HashMap::new();
    index.insert(e.initial.clone(), 0);
    let mut successors = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(c) = queue.pop_front() {
        for v in fireable(g, &configs[c]) {
            let next = fire(g, &configs[c], v)?;
            let mut shot = shots[c].clone();
            shot[v] += 1;
            let to = match index.get(&next) {
                Some(&known) => {
                    if shots[known] != shot {
                        return Err(EfgError::ShotSetConflict { config: known });
                    }
                    known
                }
                None => {
                    let id = configs.len();
                    index.insert(next.clone(), id);
                    configs.push(next);
                    shots.push(shot);
                    queue.push_back(id);
                    id
                }
            };
            successors.push(Successor {
                from: c,
                to,
                vertex: v,
            });
        }
    }

    let mut out_steps = vec![Vec::new(); configs.len()];
    let mut in_steps = vec![Vec::new(); configs.len()];
    for (k, s) in successors.iter().enumerate() {
        out_steps[s.from].push(k);
        in_steps[s.to].push(k);
    }
    let simple = shots.iter().flatten().all(|&n| n <= 1);
    Ok(ConfigSpace {
        graph: g.clone(),
        configs,
        successors,
        shots,
        out_steps,
        in_steps,
        simple,
    })
}

impl ConfigSpace {
    pub fn graph(&self) -> &FiringGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn configs(&self) -> &[Orientation] {
        &self.configs
    }

    pub fn config(&self, c: usize) -> &Orientation {
        &self.configs[c]
    }

    pub fn successors(&self) -> &[Successor] {
        &self.successors
    }

    /// Steps leaving `c`.
    pub fn steps_from(&self, c: usize) -> impl Iterator<Item = &Successor> + '_ {
        self.out_steps[c].iter().map(|&k| &self.successors[k])
    }

    /// Steps arriving at `c`.
    pub fn steps_into(&self, c: usize) -> impl Iterator<Item = &Successor> + '_ {
        self.in_steps[c].iter().map(|&k| &self.successors[k])
    }

    /// Fire count of every vertex on any firing sequence reaching `c`.
    pub fn shot_set(&self, c: usize) -> &[u32] {
        &self.shots[c]
    }

    /// Every vertex fires at most once on every firing sequence.
    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// `{a,b}`, or `{a*2,b}` when a vertex fired more than once.
    pub fn shot_display(&self, c: usize) -> String {
        let parts: Vec<String> = self.shots[c]
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(v, &n)| match n {
                1 => self.graph.vertex(v).to_owned(),
                n => format!("{}*{n}", self.graph.vertex(v)),
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Configuration indices in an order where every step goes forward.
    fn topological_order(&self) -> Result<Vec<usize>, EfgError> {
        let n = self.len();
        let mut indegree: Vec<usize> = (0..n).map(|c| self.in_steps[c].len()).collect();
        let mut ready: VecDeque<usize> = (0..n).filter(|&c| indegree[c] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(c) = ready.pop_front() {
            order.push(c);
            for s in self.steps_from(c) {
                indegree[s.to] -= 1;
                if indegree[s.to] == 0 {
                    ready.push_back(s.to);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(EfgError::Cyclic)
        }
    }

    /// The reachability order: `c' <= c` iff `c'` is reachable from `c`.
    /// Elements are labelled `c0`, `c1`, ... by configuration index.
    pub fn space_order(&self) -> Result<Poset, EfgError> {
        let n = self.len();
        let order = self.topological_order()?;
        // up[c] is the set of configurations from which c is reachable.
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &c in &order {
            let mut row = std::mem::replace(&mut up[c], FixedBitSet::new());
            row.grow(n);
            row.insert(c);
            for s in self.steps_into(c) {
                row.union_with(&up[s.from]);
            }
            up[c] = row;
        }
        let labels = (0..n).map(|c| format!("c{c}")).collect();
        Ok(Poset::from_up_sets(labels, up))
    }

    /// Shot multiset recomputed along a random firing sequence from the
    /// initial configuration to `target`, sampled by walking predecessor
    /// steps uniformly at random.
    pub fn sampled_path_shots<R: Rng + ?Sized>(&self, target: usize, rng: &mut R) -> Vec<u32> {
        let mut counts = vec![0u32; self.graph.vertices.len()];
        let mut at = target;
        while at != 0 {
            let incoming = &self.in_steps[at];
            let step = &self.successors[incoming[rng.gen_range(0..incoming.len())]];
            counts[step.vertex] += 1;
            at = step.from;
        }
        counts
    }

    /// For every configuration with at least two incoming steps, compares
    /// `samples` randomly sampled path shot multisets with the recorded one.
    /// Returns the number of configurations checked.
    pub fn check_path_independence<R: Rng + ?Sized>(
        &self,
        samples: usize,
        rng: &mut R,
    ) -> Result<usize, EfgError> {
        let mut checked = 0;
        for c in 0..self.len() {
            if self.in_steps[c].len() < 2 {
                continue;
            }
            for _ in 0..samples {
                if self.sampled_path_shots(c, rng) != self.shots[c] {
                    return Err(EfgError::ShotSetConflict { config: c });
                }
            }
            checked += 1;
        }
        Ok(checked)
    }

    /// In a simple game, an edge with both endpoints on the same side of
    /// `sh(C)` keeps its initial direction in `C`, and an edge crossing the
    /// boundary points out of `sh(C)`. Returns the first `(config, edge)`
    /// breaking this.
    pub fn edge_conservation_violation(&self) -> Option<(usize, usize)> {
        let initial = &self.configs[0];
        for (c, config) in self.configs.iter().enumerate() {
            let fired = &self.shots[c];
            for (e, &(u, v)) in self.graph.edges.iter().enumerate() {
                let (fu, fv) = (fired[u] > 0, fired[v] > 0);
                let ok = if fu == fv {
                    config.is_reversed(e) == initial.is_reversed(e)
                } else {
                    let (tail, _) = config.arc(&self.graph, e);
                    fired[tail] > 0
                };
                if !ok {
                    return Some((c, e));
                }
            }
        }
        None
    }
}

/// Why the configuration space failed to be a distributive lattice.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProppFailure {
    #[error("successor relation has a cycle")]
    Cyclic,
    #[error("configuration order is not a lattice: {0}")]
    NotALattice(LatticeError),
    #[error("configuration lattice is not distributive: {0:?}")]
    NotDistributive(Violation),
}

/// Checks that the configuration order is a distributive lattice, returning
/// that lattice on success.
pub fn verify_propp(s: &ConfigSpace) -> Result<Lattice, ProppFailure> {
    let order = s.space_order().map_err(|_| ProppFailure::Cyclic)?;
    let lattice = check_lattice(&order).map_err(ProppFailure::NotALattice)?;
    match lattice.distributivity_violation() {
        None => Ok(lattice),
        Some(v) => Err(ProppFailure::NotDistributive(v)),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Sink `s` joined to leaves `a` and `b`, both edges pointing at the leaves.
    fn star() -> EfgInstance {
        validate_efg(
            labels(&["a", "b", "s"]),
            vec![(2, 0), (2, 1)],
            2,
            Orientation::forward(2),
        )
        .unwrap()
    }

    /// Path x - y - s with x -> y and s -> y.
    fn path() -> EfgInstance {
        validate_efg(
            labels(&["x", "y", "s"]),
            vec![(0, 1), (2, 1)],
            2,
            Orientation::forward(2),
        )
        .unwrap()
    }

    /// Triangle a, b, c with sink c: b -> a, c -> a, and b - c oriented c -> b.
    fn triangle() -> EfgInstance {
        validate_efg(
            labels(&["a", "b", "c"]),
            vec![(1, 0), (2, 0), (2, 1)],
            2,
            Orientation::forward(3),
        )
        .unwrap()
    }

    /// Four-cycle s - a - b - c - s with s -> a, a -> b, c -> b, s -> c: b
    /// fires, then a and c, then b again.
    pub(crate) fn square() -> EfgInstance {
        validate_efg(
            labels(&["s", "a", "b", "c"]),
            vec![(0, 1), (1, 2), (3, 2), (0, 3)],
            0,
            Orientation::forward(4),
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(validate_efg(labels(&["s"]), vec![], 0, Orientation::forward(0)).is_ok());
        assert_eq!(
            validate_efg(labels(&["a", "b"]), vec![], 0, Orientation::forward(0)).unwrap_err(),
            EfgError::Disconnected("b".into(), "a".into())
        );
        assert_eq!(
            validate_efg(labels(&["a"]), vec![(0, 0)], 0, Orientation::forward(1)).unwrap_err(),
            EfgError::SelfLoop("a".into())
        );
        assert_eq!(
            validate_efg(
                labels(&["a", "b"]),
                vec![(0, 1), (1, 0)],
                0,
                Orientation::forward(2)
            )
            .unwrap_err(),
            EfgError::DuplicateEdge("b".into(), "a".into())
        );
        assert_eq!(
            validate_efg(labels(&["a"]), vec![], 1, Orientation::forward(0)).unwrap_err(),
            EfgError::BadSink(1)
        );
        assert_eq!(
            validate_efg(
                labels(&["a", "b"]),
                vec![(0, 1)],
                0,
                Orientation::forward(2)
            )
            .unwrap_err(),
            EfgError::ArityMismatch {
                expected: 1,
                found: 2
            }
        );
        assert!(triangle().graph().edges().len() == 3);
    }

    #[test]
    fn firing_star() {
        let e = star();
        let g = e.graph();
        assert_eq!(fireable(g, e.initial()), vec![0, 1]);
        let after = fire(g, e.initial(), 0).unwrap();
        assert_eq!(after.arc(g, 0), (0, 2));
        assert_eq!(after.arc(g, 1), (2, 1));
        assert_eq!(fireable(g, &after), vec![1]);
        assert_eq!(
            fire(g, e.initial(), 2).unwrap_err(),
            EfgError::NotFireable("s".into())
        );
    }

    #[test]
    fn firing_path() {
        let e = path();
        let g = e.graph();
        assert_eq!(fireable(g, e.initial()), vec![1]);
        let after = fire(g, e.initial(), 1).unwrap();
        assert_eq!(after.arc(g, 0), (1, 0));
        assert_eq!(after.arc(g, 1), (1, 2));
        assert_eq!(fireable(g, &after), vec![0]);
        assert!(fire(g, e.initial(), 0).is_err());
    }

    #[test]
    fn isolated_vertex_never_fires() {
        let e = validate_efg(labels(&["s"]), vec![], 0, Orientation::forward(0)).unwrap();
        assert!(fireable(e.graph(), e.initial()).is_empty());
        let s = explore(&e, ExploreOptions::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.successors().is_empty());
        assert!(s.is_simple());
    }

    #[test]
    fn explore_star_is_a_diamond() {
        let s = explore(&star(), ExploreOptions::default()).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.is_simple());
        assert_eq!(s.shot_set(0), &[0, 0, 0]);
        assert_eq!(s.shot_set(3), &[1, 1, 0]);
        assert_eq!(s.shot_display(3), "{a,b}");
        let order = s.space_order().unwrap();
        assert_eq!(order.maximal_elements(), vec![0]);
        assert_eq!(order.covers().len(), 4);
        assert!(verify_propp(&s).is_ok());
    }

    #[test]
    fn explore_path_is_a_chain() {
        let s = explore(&path(), ExploreOptions::default()).unwrap();
        assert_eq!(s.len(), 3);
        let shown: Vec<String> = (0..3).map(|c| s.shot_display(c)).collect();
        assert_eq!(shown, ["{}", "{y}", "{x,y}"]);
        assert!(s.is_simple());
        assert!(verify_propp(&s).is_ok());
        assert_eq!(s.edge_conservation_violation(), None);
    }

    #[test]
    fn triangle_is_simple() {
        // Both non-sink vertices touch the sink, so neither can fire twice.
        let s = explore(&triangle(), ExploreOptions::default()).unwrap();
        assert!(s.is_simple());
        let shown: Vec<String> = (0..s.len()).map(|c| s.shot_display(c)).collect();
        assert_eq!(shown, ["{}", "{a}", "{a,b}"]);
    }

    #[test]
    fn square_is_not_simple() {
        let s = explore(&square(), ExploreOptions::default()).unwrap();
        assert!(!s.is_simple());
        let shown: Vec<String> = (0..s.len()).map(|c| s.shot_display(c)).collect();
        assert_eq!(
            shown,
            ["{}", "{b}", "{a,b}", "{b,c}", "{a,b,c}", "{a,b*2,c}"]
        );
        let order = s.space_order().unwrap();
        assert_eq!(
            order.covers(),
            &[(1, 0), (2, 1), (3, 1), (4, 2), (4, 3), (5, 4)]
        );
        assert!(verify_propp(&s).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(s.check_path_independence(10, &mut rng), Ok(1));
    }

    #[test]
    fn edge_cap() {
        let err = explore(&star(), ExploreOptions { max_edges: 1 }).unwrap_err();
        assert_eq!(err, EfgError::TooManyEdges { edges: 2, cap: 1 });
    }

    #[test]
    fn sampled_paths_agree() {
        let s = explore(&star(), ExploreOptions::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(s.check_path_independence(10, &mut rng), Ok(1));
    }
}
