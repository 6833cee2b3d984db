//! Finite partially ordered sets, their filters, and order isomorphism.
//!
//! A [`Poset`] is built from cover pairs and stores the full order as one
//! up-set and one down-set bitset per element. Element indices follow the
//! input order and never change after construction, so filters and other
//! index-based encodings are stable across runs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::lattice::Lattice;

/// Default cap on the number of elements for filter enumeration.
pub const DEFAULT_MAX_ELEMENTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("empty label")]
    EmptyLabel,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("self cover `{0}<{0}`")]
    SelfCover(String),
    #[error("cycle detected: `{0}` and `{1}` would be below each other")]
    CycleDetected(String, String),
    #[error("index {index} out of range for poset of {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("poset has {elements} elements, above the cap of {cap}")]
    TooLarge { elements: usize, cap: usize },
    #[error("subset is not a filter")]
    NotAFilter,
}

/// A finite partial order over labelled elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    /// `up[i]` holds every `j` with `i <= j`.
    up: Vec<FixedBitSet>,
    /// `down[i]` holds every `j` with `j <= i`.
    down: Vec<FixedBitSet>,
    /// `(i, j)` means `j` covers `i`; sorted.
    covers: Vec<(usize, usize)>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers
            .iter()
            .map(|&(i, j)| format!("{}<{}", self.labels[i], self.labels[j]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

/// Builds a poset from its elements and a list of `(a, b)` pairs meaning
/// `a < b`. Redundant pairs are dropped from the stored cover relation.
pub fn build_poset<S, T>(elements: &[S], cover_pairs: &[(T, T)]) -> Result<Poset, PosetError>
where
    S: AsRef<str>,
    T: AsRef<str>,
{
    let mut index = HashMap::with_capacity(elements.len());
    let mut labels = Vec::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        let label = e.as_ref();
        if label.is_empty() {
            return Err(PosetError::EmptyLabel);
        }
        if index.insert(label.to_owned(), i).is_some() {
            return Err(PosetError::DuplicateLabel(label.to_owned()));
        }
        labels.push(label.to_owned());
    }
    let n = labels.len();
    let mut succ = vec![Vec::new(); n];
    for (a, b) in cover_pairs {
        let (a, b) = (a.as_ref(), b.as_ref());
        let ia = *index
            .get(a)
            .ok_or_else(|| PosetError::UnknownLabel(a.to_owned()))?;
        let ib = *index
            .get(b)
            .ok_or_else(|| PosetError::UnknownLabel(b.to_owned()))?;
        if ia == ib {
            return Err(PosetError::SelfCover(a.to_owned()));
        }
        succ[ia].push(ib);
    }

    // Reflexive-transitive closure by a DFS from every element.
    let mut up = Vec::with_capacity(n);
    let mut stack = Vec::new();
    for start in 0..n {
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(start);
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &w in &succ[v] {
                if !seen.put(w) {
                    stack.push(w);
                }
            }
        }
        up.push(seen);
    }
    for i in 0..n {
        for j in up[i].ones().filter(|&j| j > i) {
            if up[j].contains(i) {
                return Err(PosetError::CycleDetected(
                    labels[i].clone(),
                    labels[j].clone(),
                ));
            }
        }
    }
    Ok(Poset::from_up_sets(labels, up))
}

impl Poset {
    /// Builds a poset from up-sets that already form a partial order.
    pub(crate) fn from_up_sets(labels: Vec<String>, up: Vec<FixedBitSet>) -> Poset {
        let n = labels.len();
        debug_assert_eq!(up.len(), n);
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.ones() {
                down[j].insert(i);
            }
        }

        let mut covers = Vec::new();
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        let mut implied = FixedBitSet::with_capacity(n);
        for i in 0..n {
            implied.clear();
            // j is implied when it lies strictly above some strict upper bound k.
            for k in up[i].ones().filter(|&k| k != i) {
                for m in up[k].ones().filter(|&m| m != k) {
                    implied.insert(m);
                }
            }
            for j in up[i].ones().filter(|&j| j != i && !implied.contains(j)) {
                covers.push((i, j));
                upper_covers[i].push(j);
                lower_covers[j].push(i);
            }
        }
        covers.sort_unstable();
        Poset {
            labels,
            up,
            down,
            covers,
            upper_covers,
            lower_covers,
        }
    }

    /// Builds a poset directly from a relation matrix; returns `None` unless
    /// the relation is reflexive, antisymmetric and transitive.
    pub fn from_relation(labels: Vec<String>, leq: &[Vec<bool>]) -> Option<Poset> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return None;
        }
        for i in 0..n {
            if !leq[i][i] {
                return None;
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return None;
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return None;
                    }
                }
            }
        }
        let up = leq
            .iter()
            .map(|row| {
                let mut set = FixedBitSet::with_capacity(n);
                for (j, _) in row.iter().enumerate().filter(|(_, &b)| b) {
                    set.insert(j);
                }
                set
            })
            .collect();
        Some(Poset::from_up_sets(labels, up))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `i <= j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    /// `i < j`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// Every `j` with `i <= j`, including `i`.
    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    /// Every `j` with `j <= i`, including `i`.
    pub fn down_set(&self, i: usize) -> &FixedBitSet {
        &self.down[i]
    }

    /// Pairs `(i, j)` with `j` covering `i`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements covering `i`.
    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper_covers[i]
    }

    /// Elements covered by `i`.
    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower_covers[i]
    }

    pub fn covers_by_label(&self) -> Vec<(&str, &str)> {
        self.covers
            .iter()
            .map(|&(i, j)| (self.label(i), self.label(j)))
            .collect()
    }

    /// Elements below no other element.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.up[i].count_ones(..) == 1)
            .collect()
    }

    /// Elements above no other element.
    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.down[i].count_ones(..) == 1)
            .collect()
    }

    /// Length of the longest chain ending at each element, counted in covers.
    pub fn ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.down[i].count_ones(..));
        let mut rank = vec![0; self.len()];
        for &i in &order {
            rank[i] = self.lower_covers[i]
                .iter()
                .map(|&k| rank[k] + 1)
                .max()
                .unwrap_or(0);
        }
        rank
    }

    fn check_index(&self, index: usize) -> Result<(), PosetError> {
        if index >= self.len() {
            Err(PosetError::IndexOutOfRange {
                index,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Whether `subset` is upward closed.
    pub fn is_filter(&self, subset: &[usize]) -> Result<bool, PosetError> {
        let mut set = FixedBitSet::with_capacity(self.len());
        for &i in subset {
            self.check_index(i)?;
            set.insert(i);
        }
        Ok(self.is_upward_closed(&set))
    }

    pub(crate) fn is_upward_closed(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|i| self.up[i].is_subset(set))
    }

    /// Every filter exactly once, in canonical order: ascending size, then
    /// lexicographic on the sorted member indices.
    pub fn enumerate_filters(&self, max_elements: usize) -> Result<Vec<Filter>, PosetError> {
        if self.len() > max_elements {
            return Err(PosetError::TooLarge {
                elements: self.len(),
                cap: max_elements,
            });
        }
        // Elements with fewer strict upper bounds come first, so every upper
        // bound of an element is decided before the element itself.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.up[i].count_ones(..), i));

        let mut out = Vec::new();
        let mut current = FixedBitSet::with_capacity(self.len());
        self.extend_filters(&order, 0, &mut current, &mut out);
        out.sort();
        Ok(out)
    }

    fn extend_filters(
        &self,
        order: &[usize],
        depth: usize,
        current: &mut FixedBitSet,
        out: &mut Vec<Filter>,
    ) {
        let Some(&x) = order.get(depth) else {
            out.push(Filter {
                members: current.clone(),
            });
            return;
        };
        self.extend_filters(order, depth + 1, current, out);
        let admissible = self.upper_covers[x].iter().all(|&y| current.contains(y));
        if admissible {
            current.insert(x);
            self.extend_filters(order, depth + 1, current, out);
            current.set(x, false);
        }
    }

    /// The filters covered by `f` under reverse inclusion: `f ∪ {x}` for each
    /// `x` maximal in the complement of `f`, by ascending `x`.
    pub fn filter_covers(&self, f: &Filter) -> Result<Vec<Filter>, PosetError> {
        if f.members.len() != self.len() || !self.is_upward_closed(&f.members) {
            return Err(PosetError::NotAFilter);
        }
        Ok(self
            .maximal_outside(&f.members)
            .into_iter()
            .map(|x| {
                let mut members = f.members.clone();
                members.insert(x);
                Filter { members }
            })
            .collect())
    }

    /// Elements outside `set` all of whose strict upper bounds are in `set`.
    /// For a filter `set`, these are the maximal elements of the complement.
    pub(crate) fn maximal_outside(&self, set: &FixedBitSet) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| !set.contains(x) && self.upper_covers[x].iter().all(|&y| set.contains(y)))
            .collect()
    }

    /// The lattice of all filters ordered by reverse inclusion.
    pub fn filter_lattice(&self, max_elements: usize) -> Result<Lattice, PosetError> {
        let filters = self.enumerate_filters(max_elements)?;
        Ok(Lattice::of_filters(self, filters))
    }

    /// An order isomorphism onto `other`, as an index map, if one exists.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        isomorphism(self, other)
    }
}

/// An upward-closed subset of a poset, stored as a bitset over element
/// indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filter {
    members: FixedBitSet,
}

impl Filter {
    pub fn empty(len: usize) -> Filter {
        Filter {
            members: FixedBitSet::with_capacity(len),
        }
    }

    /// Wraps a bitset without checking upward closure.
    pub fn from_bits(members: FixedBitSet) -> Filter {
        Filter { members }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Filter {
        let mut members = FixedBitSet::with_capacity(len);
        members.extend(indices);
        Filter { members }
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn is_subset(&self, other: &Filter) -> bool {
        self.members.is_subset(&other.members)
    }

    /// `{a,c}` using the poset's labels.
    pub fn display(&self, p: &Poset) -> String {
        let names: Vec<&str> = self.members().map(|i| p.label(i)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl Ord for Filter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members.ones().cmp(other.members.ones()))
    }
}

impl PartialOrd for Filter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Searches for a bijection `phi` from `p1` onto `p2` with
/// `p1.leq(i, j) == p2.leq(phi[i], phi[j])`.
///
/// Elements are first split into classes by colour refinement over
/// up/down counts, cover degrees and rank; the search then backtracks within
/// classes. The result is deterministic.
pub fn isomorphism(p1: &Poset, p2: &Poset) -> Option<Vec<usize>> {
    let n = p1.len();
    if n != p2.len() || p1.covers.len() != p2.covers.len() {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let (c1, c2) = refine_colours(p1, p2);
    let mut hist1 = HashMap::new();
    let mut hist2 = HashMap::new();
    for &c in &c1 {
        *hist1.entry(c).or_insert(0usize) += 1;
    }
    for &c in &c2 {
        *hist2.entry(c).or_insert(0usize) += 1;
    }
    if hist1 != hist2 {
        return None;
    }

    let mut candidates: HashMap<usize, Vec<usize>> = HashMap::new();
    for (j, &c) in c2.iter().enumerate() {
        candidates.entry(c).or_default().push(j);
    }

    // Assign small classes first, then by rank so that each new element is
    // constrained by already-placed elements below it.
    let rank1 = p1.ranks();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (hist1[&c1[i]], rank1[i], i));

    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut cursor = vec![0usize; n];
    let mut depth = 0usize;
    'search: loop {
        if depth == n {
            return Some(phi);
        }
        let x = order[depth];
        let cands = &candidates[&c1[x]];
        while cursor[depth] < cands.len() {
            let y = cands[cursor[depth]];
            cursor[depth] += 1;
            if used[y] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&a| {
                let b = phi[a];
                p1.leq(a, x) == p2.leq(b, y) && p1.leq(x, a) == p2.leq(y, b)
            });
            if consistent {
                phi[x] = y;
                used[y] = true;
                depth += 1;
                if depth < n {
                    cursor[depth] = 0;
                }
                continue 'search;
            }
        }
        // Exhausted candidates at this depth: backtrack.
        if depth == 0 {
            return None;
        }
        depth -= 1;
        let prev = order[depth];
        used[phi[prev]] = false;
        phi[prev] = usize::MAX;
    }
}

/// Colour refinement run jointly on both posets so colours are comparable.
fn refine_colours(p1: &Poset, p2: &Poset) -> (Vec<usize>, Vec<usize>) {
    fn initial(p: &Poset) -> Vec<Vec<usize>> {
        let rank = p.ranks();
        (0..p.len())
            .map(|i| {
                vec![
                    p.up[i].count_ones(..),
                    p.down[i].count_ones(..),
                    p.upper_covers[i].len(),
                    p.lower_covers[i].len(),
                    rank[i],
                ]
            })
            .collect()
    }
    fn compress(sig1: &[Vec<usize>], sig2: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>, usize) {
        let mut all: Vec<&Vec<usize>> = sig1.iter().chain(sig2.iter()).collect();
        all.sort();
        all.dedup();
        let id: HashMap<&Vec<usize>, usize> =
            all.iter().enumerate().map(|(k, s)| (*s, k)).collect();
        (
            sig1.iter().map(|s| id[s]).collect(),
            sig2.iter().map(|s| id[s]).collect(),
            all.len(),
        )
    }
    fn step(p: &Poset, colour: &[usize]) -> Vec<Vec<usize>> {
        (0..p.len())
            .map(|i| {
                let mut ups: Vec<usize> = p.upper_covers[i].iter().map(|&j| colour[j]).collect();
                let mut downs: Vec<usize> = p.lower_covers[i].iter().map(|&j| colour[j]).collect();
                ups.sort_unstable();
                downs.sort_unstable();
                let mut sig = Vec::with_capacity(ups.len() + downs.len() + 2);
                sig.push(colour[i]);
                sig.extend(ups);
                sig.push(usize::MAX);
                sig.extend(downs);
                sig
            })
            .collect()
    }

    let (mut c1, mut c2, mut classes) = compress(&initial(p1), &initial(p2));
    loop {
        let (n1, n2, next) = compress(&step(p1, &c1), &step(p2, &c2));
        c1 = n1;
        c2 = n2;
        if next == classes {
            return (c1, c2);
        }
        classes = next;
    }
}

/// An isomorphism expressed as `(label in p1, label in p2)` pairs.
pub fn poset_isomorphic<'a>(p1: &'a Poset, p2: &'a Poset) -> Option<Vec<(&'a str, &'a str)>> {
    isomorphism(p1, p2).map(|phi| {
        phi.iter()
            .enumerate()
            .map(|(i, &j)| (p1.label(i), p2.label(j)))
            .collect()
    })
}

/// Whether `phi` is an order isomorphism from `p1` onto `p2`.
pub fn is_isomorphism(p1: &Poset, p2: &Poset, phi: &[usize]) -> bool {
    let n = p1.len();
    if p2.len() != n || phi.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &j in phi {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return false;
        }
    }
    (0..n).all(|i| (0..n).all(|j| p1.leq(i, j) == p2.leq(phi[i], phi[j])))
}
