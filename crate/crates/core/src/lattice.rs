//! Lattice recognition, distributivity, and join-irreducibles.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::exec::Execution;
use crate::poset::{Filter, Poset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Meet,
    Join,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Meet => "meet",
            Bound::Join => "join",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty poset is not a lattice")]
    EmptyPoset,
    #[error("not a lattice: `{a}` and `{b}` have no {missing}")]
    NotALattice {
        a: String,
        b: String,
        missing: Bound,
    },
}

/// One of the two distributive laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    /// `a ∨ (b ∧ c) = (a ∨ b) ∧ (a ∨ c)`
    JoinOverMeet,
    /// `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`
    MeetOverJoin,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::JoinOverMeet => "a ∨ (b ∧ c) = (a ∨ b) ∧ (a ∨ c)",
            Law::MeetOverJoin => "a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)",
        })
    }
}

/// A triple on which `law` fails; `lhs` and `rhs` are the two sides as
/// written in [`Law`]'s display form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub lhs: usize,
    pub rhs: usize,
}

impl Violation {
    /// Re-evaluates the law on the triple.
    pub fn holds_in(&self, l: &Lattice) -> bool {
        let (lhs, rhs) = l.law_sides(self.law, self.a, self.b, self.c);
        lhs == rhs
    }
}

/// A finite lattice: a poset with total meet and join tables.
#[derive(Clone)]
pub struct Lattice {
    base: Poset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    distributive: bool,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("base", &self.base)
            .field("distributive", &self.distributive)
            .finish()
    }
}

/// Checks that every pair of elements has a meet and a join and fills the
/// tables. On failure the witness is the first pair in index order.
pub fn check_lattice(p: &Poset) -> Result<Lattice, LatticeError> {
    check_lattice_with(p, Execution::default())
}

pub fn check_lattice_with(p: &Poset, exec: Execution) -> Result<Lattice, LatticeError> {
    let n = p.len();
    if n == 0 {
        return Err(LatticeError::EmptyPoset);
    }
    let up_count: Vec<usize> = (0..n).map(|i| p.up_set(i).count_ones(..)).collect();
    let down_count: Vec<usize> = (0..n).map(|i| p.down_set(i).count_ones(..)).collect();

    // Within U = up(a) ∩ up(b), u is the least element iff up(u) = U, which
    // for u ∈ U reduces to comparing sizes. Dually for meets.
    let rows = exec.map_range(n, |a| {
        let mut meet_row = Vec::with_capacity(n);
        let mut join_row = Vec::with_capacity(n);
        let mut common = FixedBitSet::with_capacity(n);
        for b in 0..n {
            common.clone_from(p.up_set(a));
            common.intersect_with(p.up_set(b));
            let size = common.count_ones(..);
            let Some(j) = common.ones().find(|&u| up_count[u] == size) else {
                return Err((b, Bound::Join));
            };
            common.clone_from(p.down_set(a));
            common.intersect_with(p.down_set(b));
            let size = common.count_ones(..);
            let Some(m) = common.ones().find(|&u| down_count[u] == size) else {
                return Err((b, Bound::Meet));
            };
            meet_row.push(m);
            join_row.push(j);
        }
        Ok((meet_row, join_row))
    });

    let mut meet = Vec::with_capacity(n * n);
    let mut join = Vec::with_capacity(n * n);
    for (a, row) in rows.into_iter().enumerate() {
        match row {
            Ok((m, j)) => {
                meet.extend(m);
                join.extend(j);
            }
            Err((b, missing)) => {
                // Missing bounds found on a later row were already found on an
                // earlier one by symmetry, so a < b here.
                return Err(LatticeError::NotALattice {
                    a: p.label(a).to_owned(),
                    b: p.label(b).to_owned(),
                    missing,
                });
            }
        }
    }
    Ok(Lattice::from_tables(p.clone(), meet, join, Some(exec)))
}

impl Lattice {
    /// Builds the lattice from its tables. `exec` runs the distributivity
    /// check; `None` means the tables are distributive by construction.
    fn from_tables(
        base: Poset,
        meet: Vec<usize>,
        join: Vec<usize>,
        exec: Option<Execution>,
    ) -> Lattice {
        let n = base.len();
        let bottom = (0..n)
            .find(|&i| base.up_set(i).count_ones(..) == n)
            .expect("a lattice has a bottom element");
        let top = (0..n)
            .find(|&i| base.down_set(i).count_ones(..) == n)
            .expect("a lattice has a top element");
        let mut l = Lattice {
            base,
            meet,
            join,
            bottom,
            top,
            distributive: true,
        };
        if let Some(exec) = exec {
            l.distributive = l.distributivity_violation_with(exec).is_none();
        }
        l
    }

    /// The lattice of the given filters of `p` under reverse inclusion. Meet
    /// is union and join is intersection, which distribute over each other,
    /// so the cubic distributivity scan is skipped.
    pub(crate) fn of_filters(p: &Poset, filters: Vec<Filter>) -> Lattice {
        let n = filters.len();
        let labels = filters.iter().map(|f| f.display(p)).collect();
        let up = filters
            .iter()
            .map(|f| {
                let mut row = FixedBitSet::with_capacity(n);
                row.extend((0..n).filter(|&g| filters[g].is_subset(f)));
                row
            })
            .collect();
        let base = Poset::from_up_sets(labels, up);
        let index: HashMap<&FixedBitSet, usize> = filters
            .iter()
            .enumerate()
            .map(|(i, f)| (f.bits(), i))
            .collect();
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        let mut scratch = FixedBitSet::with_capacity(p.len());
        for f in &filters {
            for g in &filters {
                scratch.clone_from(f.bits());
                scratch.union_with(g.bits());
                meet.push(index[&scratch]);
                scratch.clone_from(f.bits());
                scratch.intersect_with(g.bits());
                join.push(index[&scratch]);
            }
        }
        Lattice::from_tables(base, meet, join, None)
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.base.leq(a, b)
    }

    /// Verdict computed when the lattice was built.
    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    fn law_sides(&self, law: Law, a: usize, b: usize, c: usize) -> (usize, usize) {
        match law {
            Law::JoinOverMeet => (
                self.join(a, self.meet(b, c)),
                self.meet(self.join(a, b), self.join(a, c)),
            ),
            Law::MeetOverJoin => (
                self.meet(a, self.join(b, c)),
                self.join(self.meet(a, b), self.meet(a, c)),
            ),
        }
    }

    /// The first triple, in lexicographic order, on which either law fails.
    pub fn distributivity_violation(&self) -> Option<Violation> {
        self.distributivity_violation_with(Execution::default())
    }

    pub fn distributivity_violation_with(&self, exec: Execution) -> Option<Violation> {
        let n = self.len();
        // Both sides of each law are symmetric in b and c, so the first
        // violating ordered triple always has b <= c.
        exec.find_map_first(n, |a| {
            for b in 0..n {
                for c in b..n {
                    for law in [Law::JoinOverMeet, Law::MeetOverJoin] {
                        let (lhs, rhs) = self.law_sides(law, a, b, c);
                        if lhs != rhs {
                            return Some(Violation {
                                law,
                                a,
                                b,
                                c,
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
            }
            None
        })
    }

    /// Elements covering exactly one element.
    pub fn join_irreducibles(&self) -> JoinIrreducibles {
        let mut members = Vec::new();
        let mut covered = Vec::new();
        for x in 0..self.len() {
            if let [below] = self.base.lower_covers(x) {
                members.push(x);
                covered.push(*below);
            }
        }
        JoinIrreducibles { members, covered }
    }

    /// The order on join-irreducibles inherited from the lattice, with
    /// elements in lattice index order.
    pub fn induced_order(&self) -> Poset {
        self.join_irreducibles().induced_order(self)
    }

    /// The canonical representation `x ↦ {j ∈ J : j ≰ x}` for every element,
    /// as filters over the indices of [`Lattice::induced_order`].
    pub fn birkhoff_filters(&self) -> Vec<Filter> {
        let ji = self.join_irreducibles();
        (0..self.len())
            .map(|x| {
                Filter::from_indices(
                    ji.members.len(),
                    ji.members
                        .iter()
                        .enumerate()
                        .filter(|&(_, &j)| !self.leq(j, x))
                        .map(|(k, _)| k),
                )
            })
            .collect()
    }
}

/// The join-irreducible elements of a lattice and the element each covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinIrreducibles {
    /// Lattice indices, ascending.
    pub members: Vec<usize>,
    /// `covered[k]` is the unique element covered by `members[k]`.
    pub covered: Vec<usize>,
}

impl JoinIrreducibles {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn induced_order(&self, l: &Lattice) -> Poset {
        let k = self.members.len();
        let labels = self
            .members
            .iter()
            .map(|&j| l.base.label(j).to_owned())
            .collect();
        let up = self
            .members
            .iter()
            .map(|&a| {
                let mut row = FixedBitSet::with_capacity(k);
                row.extend((0..k).filter(|&t| l.leq(a, self.members[t])));
                row
            })
            .collect();
        Poset::from_up_sets(labels, up)
    }
}
