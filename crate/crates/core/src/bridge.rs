//! From distributive lattices to simple Edge Firing Games and back.
//!
//! [`lattice_to_efg`] builds the game on the join-irreducibles `J` of a
//! distributive lattice: one vertex per element of `J` plus a sink, an edge
//! for every cover of `J` oriented upward, and an edge from the sink to every
//! maximal element of `J`. Each configuration of that game is identified by
//! its shot set, which is a filter of `J`, and the filters of `J` ordered by
//! reverse inclusion are the lattice again. [`verify_isomorphism`] checks all
//! of this on a concrete configuration space and returns the composed map as
//! an [`IsoCertificate`].

use std::collections::HashMap;

use thiserror::Error;

use crate::efg::{
    explore, fireable, verify_propp, ConfigSpace, EfgError, EfgInstance, ExploreOptions,
    FiringGraph, Orientation, ProppFailure,
};
use crate::lattice::{Lattice, LatticeError};
use crate::poset::Filter;

/// Default sink label for constructed games.
pub const SINK_LABEL: &str = "⊥";
/// Sink label used with `--ascii-sink`.
pub const ASCII_SINK_LABEL: &str = "_bot";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("vertex `{0}` is not a join-irreducible of the lattice")]
    UnknownVertex(String),
    #[error("join-irreducible `{0}` has no vertex in the game")]
    MissingVertex(String),
    #[error("configuration c{config} fired a vertex more than once")]
    NotSimple { config: usize },
    #[error("shot set of configuration c{config} is not a filter")]
    NotAFilter { config: usize },
    #[error("configurations and lattice elements are not in bijection (at c{config})")]
    NotBijective { config: usize },
    #[error("order mismatch between configurations c{0} and c{1}")]
    OrderMismatch(usize, usize),
    #[error("fireable vertices of c{config} differ from the maximal unfired irreducibles")]
    FireableMismatch { config: usize },
    #[error("configuration count {configs} differs from lattice size {elements}")]
    SizeMismatch { configs: usize, elements: usize },
    #[error(transparent)]
    Efg(#[from] EfgError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("configuration space is not a distributive lattice: {0}")]
    ProppViolation(ProppFailure),
}

/// Evidence that a configuration space is isomorphic to a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCertificate {
    /// Shot set of each configuration, as a filter over the induced order on
    /// join-irreducibles.
    pub config_to_filter: Vec<Filter>,
    /// The canonical filter `{j ∈ J : j ≰ x}` of every lattice element `x`.
    pub filter_to_element: HashMap<Filter, usize>,
    /// Configuration index to lattice element index.
    pub composed: Vec<usize>,
}

/// A sink label not used by any element, suffixing `1`, `2`, ... on clash.
fn fresh_sink_label(base: &str, taken: &[String]) -> String {
    if !taken.iter().any(|t| t == base) {
        return base.to_owned();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|candidate| !taken.iter().any(|t| t == candidate))
        .expect("unbounded suffix search")
}

/// Builds the simple game whose configuration space is isomorphic to `l`,
/// using the `⊥` sink label.
pub fn lattice_to_efg(l: &Lattice) -> Result<EfgInstance, BridgeError> {
    lattice_to_efg_with_sink(l, SINK_LABEL)
}

pub fn lattice_to_efg_with_sink(l: &Lattice, sink: &str) -> Result<EfgInstance, BridgeError> {
    if !l.is_distributive() {
        return Err(BridgeError::NotDistributive);
    }
    let j = l.induced_order();
    let mut vertices: Vec<String> = j.labels().to_vec();
    let sink_label = fresh_sink_label(sink, &vertices);
    let sink = vertices.len();
    vertices.push(sink_label);

    // Cover edges listed lower-to-upper so the all-forward orientation points
    // every edge up; sink edges listed sink-first so they point away from it.
    let mut edges: Vec<(usize, usize)> = j.covers().to_vec();
    edges.extend(j.maximal_elements().into_iter().map(|m| (sink, m)));
    let initial = Orientation::forward(edges.len());
    let graph = FiringGraph::new(vertices, edges, sink)?;
    Ok(EfgInstance::new(graph, initial)?)
}

/// Checks that `s`, the configuration space of a game whose non-sink vertices
/// are labelled by the join-irreducibles of `l`, is isomorphic to `l`.
///
/// Shot sets must be filters of the induced order on join-irreducibles, the
/// composed map to lattice elements must be a bijection preserving and
/// reflecting order and covers, and the fireable vertices of every
/// configuration must be exactly the maximal join-irreducibles not yet fired.
pub fn verify_isomorphism(l: &Lattice, s: &ConfigSpace) -> Result<IsoCertificate, BridgeError> {
    let j = l.induced_order();
    let g = s.graph();
    let k = j.len();

    // Vertex index -> index in J.
    let mut vertex_to_j = vec![None; g.vertices().len()];
    let mut covered = vec![false; k];
    for (v, label) in g.vertices().iter().enumerate() {
        if v == g.sink() {
            continue;
        }
        let idx = j
            .index_of(label)
            .ok_or_else(|| BridgeError::UnknownVertex(label.clone()))?;
        vertex_to_j[v] = Some(idx);
        covered[idx] = true;
    }
    if let Some(missing) = covered.iter().position(|&c| !c) {
        return Err(BridgeError::MissingVertex(j.label(missing).to_owned()));
    }

    let mut config_to_filter = Vec::with_capacity(s.len());
    for c in 0..s.len() {
        let shot = s.shot_set(c);
        if shot.iter().any(|&n| n > 1) {
            return Err(BridgeError::NotSimple { config: c });
        }
        let filter = Filter::from_indices(
            k,
            shot.iter()
                .enumerate()
                .filter(|(_, &n)| n == 1)
                .filter_map(|(v, _)| vertex_to_j[v]),
        );
        if !j.is_upward_closed(filter.bits()) {
            return Err(BridgeError::NotAFilter { config: c });
        }
        config_to_filter.push(filter);
    }

    let mut filter_to_element = HashMap::with_capacity(l.len());
    for (x, f) in l.birkhoff_filters().into_iter().enumerate() {
        if filter_to_element.insert(f, x).is_some() {
            // Only happens for non-distributive lattices.
            return Err(BridgeError::NotDistributive);
        }
    }

    if s.len() != l.len() {
        return Err(BridgeError::SizeMismatch {
            configs: s.len(),
            elements: l.len(),
        });
    }
    let mut composed = Vec::with_capacity(s.len());
    let mut hit = vec![false; l.len()];
    for (c, f) in config_to_filter.iter().enumerate() {
        let x = *filter_to_element
            .get(f)
            .ok_or(BridgeError::NotBijective { config: c })?;
        if std::mem::replace(&mut hit[x], true) {
            return Err(BridgeError::NotBijective { config: c });
        }
        composed.push(x);
    }

    let order = s.space_order()?;
    for c in 0..s.len() {
        for d in 0..s.len() {
            if order.leq(c, d) != l.leq(composed[c], composed[d]) {
                return Err(BridgeError::OrderMismatch(c, d));
            }
        }
    }
    // Covers must match successor steps exactly, in both directions.
    let mut stepped = std::collections::HashSet::with_capacity(s.successors().len());
    for step in s.successors() {
        let (lo, hi) = (composed[step.to], composed[step.from]);
        if !l.base().upper_covers(lo).contains(&hi) {
            return Err(BridgeError::OrderMismatch(step.from, step.to));
        }
        stepped.insert((lo, hi));
    }
    let mut config_of = vec![0; l.len()];
    for (c, &x) in composed.iter().enumerate() {
        config_of[x] = c;
    }
    if let Some(&(lo, hi)) = l.base().covers().iter().find(|p| !stepped.contains(p)) {
        return Err(BridgeError::OrderMismatch(config_of[hi], config_of[lo]));
    }

    for (c, f) in config_to_filter.iter().enumerate() {
        let mut fire: Vec<usize> = fireable(g, s.config(c))
            .into_iter()
            .map(|v| vertex_to_j[v].expect("sink never fires"))
            .collect();
        fire.sort_unstable();
        if fire != j.maximal_outside(f.bits()) {
            return Err(BridgeError::FireableMismatch { config: c });
        }
    }

    Ok(IsoCertificate {
        config_to_filter,
        filter_to_element,
        composed,
    })
}

/// The result of [`simplify_efg`].
#[derive(Debug, Clone)]
pub struct Simplified {
    /// The new, simple game.
    pub game: EfgInstance,
    /// The original configuration order as a lattice; element `i` is
    /// configuration `i` of the original game.
    pub lattice: Lattice,
    /// Maps configurations of the new game onto configurations of the
    /// original one.
    pub certificate: IsoCertificate,
}

/// Replaces any game by a simple one with an isomorphic configuration space.
pub fn simplify_efg(e: &EfgInstance, opts: ExploreOptions) -> Result<Simplified, BridgeError> {
    simplify_efg_with_sink(e, opts, SINK_LABEL)
}

pub fn simplify_efg_with_sink(
    e: &EfgInstance,
    opts: ExploreOptions,
    sink: &str,
) -> Result<Simplified, BridgeError> {
    let space = explore(e, opts)?;
    let lattice = verify_propp(&space).map_err(BridgeError::ProppViolation)?;
    let game = lattice_to_efg_with_sink(&lattice, sink)?;
    // The new game can have more edges than the original; its configuration
    // count is already bounded by the original space.
    let new_space = explore(
        &game,
        ExploreOptions {
            max_edges: usize::MAX,
        },
    )?;
    let certificate = verify_isomorphism(&lattice, &new_space)?;
    if !new_space.is_simple() {
        return Err(BridgeError::NotSimple { config: 0 });
    }
    Ok(Simplified {
        game,
        lattice,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::check_lattice;
    use crate::poset::build_poset;

    fn lattice(elements: &[&str], covers: &[(&str, &str)]) -> Lattice {
        check_lattice(&build_poset(elements, covers).unwrap()).unwrap()
    }

    fn b2() -> Lattice {
        lattice(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
    }

    fn chain3() -> Lattice {
        lattice(&["o", "x", "y"], &[("o", "x"), ("x", "y")])
    }

    #[test]
    fn singleton_lattice_gives_lone_sink() {
        let e = lattice_to_efg(&lattice(&["z"], &[])).unwrap();
        assert_eq!(e.graph().vertices(), ["⊥"]);
        assert!(e.graph().edges().is_empty());
        let s = explore(&e, ExploreOptions::default()).unwrap();
        let cert = verify_isomorphism(&lattice(&["z"], &[]), &s).unwrap();
        assert_eq!(cert.composed, vec![0]);
    }

    #[test]
    fn diamond_gives_star() {
        let l = b2();
        let e = lattice_to_efg(&l).unwrap();
        let g = e.graph();
        assert_eq!(g.vertices(), ["a", "b", "⊥"]);
        assert_eq!(g.edges(), &[(2, 0), (2, 1)]);
        assert_eq!(g.sink(), 2);
        assert!(!e.initial().is_reversed(0) && !e.initial().is_reversed(1));

        let s = explore(&e, ExploreOptions::default()).unwrap();
        let cert = verify_isomorphism(&l, &s).unwrap();
        assert_eq!(cert.composed[0], l.top());
        assert_eq!(cert.composed[3], l.bottom());
    }

    #[test]
    fn chain_gives_path() {
        let l = chain3();
        let e = lattice_to_efg(&l).unwrap();
        let g = e.graph();
        assert_eq!(g.vertices(), ["x", "y", "⊥"]);
        assert_eq!(g.edges(), &[(0, 1), (2, 1)]);
        let s = explore(&e, ExploreOptions::default()).unwrap();
        let cert = verify_isomorphism(&l, &s).unwrap();
        assert_eq!(cert.composed, vec![2, 1, 0]);
    }

    #[test]
    fn sink_label_collision() {
        let l = lattice(&["0", "⊥", "⊥1"], &[("0", "⊥"), ("⊥", "⊥1")]);
        let e = lattice_to_efg(&l).unwrap();
        assert_eq!(e.graph().vertices(), ["⊥", "⊥1", "⊥2"]);
        let e = lattice_to_efg_with_sink(&b2(), ASCII_SINK_LABEL).unwrap();
        assert_eq!(e.graph().vertex(e.graph().sink()), "_bot");
    }

    #[test]
    fn rejects_non_distributive() {
        let m3 = lattice(
            &["0", "a", "b", "c", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "1"),
                ("b", "1"),
                ("c", "1"),
            ],
        );
        assert_eq!(
            lattice_to_efg(&m3).unwrap_err(),
            BridgeError::NotDistributive
        );
    }

    #[test]
    fn mismatched_space_is_rejected() {
        // The chain's game checked against the diamond.
        let s = explore(
            &lattice_to_efg(&chain3()).unwrap(),
            ExploreOptions::default(),
        )
        .unwrap();
        assert!(verify_isomorphism(&b2(), &s).is_err());
    }

    #[test]
    fn simplify_star_and_square() {
        let star = lattice_to_efg(&b2()).unwrap();
        let out = simplify_efg(&star, ExploreOptions::default()).unwrap();
        assert_eq!(out.lattice.len(), 4);
        assert_eq!(out.game.graph().vertices().len(), 3);

        let square = crate::efg::tests::square();
        let out = simplify_efg(&square, ExploreOptions::default()).unwrap();
        let simple = explore(&out.game, ExploreOptions::default()).unwrap();
        assert!(simple.is_simple());
        assert_eq!(simple.len(), 6);
        let original = explore(&square, ExploreOptions::default()).unwrap();
        assert!(original
            .space_order()
            .unwrap()
            .isomorphism(&simple.space_order().unwrap())
            .is_some());
        // Irreducibles of the original order: c0, c2, c3 and c4.
        assert_eq!(out.game.graph().vertices().len(), 5);
    }
}
