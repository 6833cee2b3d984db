//! Brute-force oracles checked against the library on the worked examples
//! and on small random instances. None of the oracles call into the code
//! paths they check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use efg_lattice::corpus;
use efg_lattice::efg::{explore, fire, fireable, EfgInstance, ExploreOptions};
use efg_lattice::format::parse_efg;
use efg_lattice::lattice::check_lattice;
use efg_lattice::poset::{build_poset, Poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Floyd-Warshall closure of the strict cover pairs plus the diagonal.
fn closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

fn relation_of(p: &Poset) -> Vec<Vec<bool>> {
    let n = p.len();
    (0..n)
        .map(|i| (0..n).map(|j| p.leq(i, j)).collect())
        .collect()
}

/// Every upward-closed subset, by testing all 2^n masks.
fn brute_filters(leq: &[Vec<bool>]) -> Vec<BTreeSet<usize>> {
    let n = leq.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let set: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let closed = set
            .iter()
            .all(|&i| (0..n).all(|j| !leq[i][j] || set.contains(&j)));
        if closed {
            out.push(set);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

fn brute_covers(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] && !(0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j]) {
                out.push((i, j));
            }
        }
    }
    out
}

#[test]
fn v_poset_closure_matches_oracle() {
    let p = corpus::v_poset();
    assert_eq!(relation_of(&p), closure(3, &[(0, 2), (1, 2)]));
    let reduced = build_poset(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
    let leq = closure(3, &[(0, 1), (1, 2), (0, 2)]);
    assert_eq!(relation_of(&reduced), leq);
    assert_eq!(reduced.covers(), brute_covers(&leq).as_slice());
    assert_eq!(brute_covers(&leq), vec![(0, 1), (1, 2)]);
}

#[test]
fn v_poset_filters_match_oracle() {
    let p = corpus::v_poset();
    let expected = brute_filters(&relation_of(&p));
    // ∅, {c}, {a,c}, {b,c}, {a,b,c}
    let frozen: Vec<BTreeSet<usize>> = vec![
        BTreeSet::new(),
        [2].into(),
        [0, 2].into(),
        [1, 2].into(),
        [0, 1, 2].into(),
    ];
    assert_eq!(expected, frozen);
    let got: Vec<BTreeSet<usize>> = p
        .enumerate_filters(20)
        .unwrap()
        .iter()
        .map(|f| f.members().collect())
        .collect();
    assert_eq!(got, frozen);
}

#[test]
fn random_posets_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let n = rng.gen_range(0..=7);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|_| rng.gen_bool(0.3))
            .collect();
        let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let label_pairs: Vec<(&str, &str)> = pairs
            .iter()
            .map(|&(i, j)| (labels[i].as_str(), labels[j].as_str()))
            .collect();
        let p = build_poset(&labels, &label_pairs).unwrap();
        let leq = closure(n, &pairs);
        assert_eq!(relation_of(&p), leq);
        assert_eq!(p.covers(), brute_covers(&leq).as_slice());
        let got: Vec<BTreeSet<usize>> = p
            .enumerate_filters(20)
            .unwrap()
            .iter()
            .map(|f| f.members().collect())
            .collect();
        assert_eq!(got, brute_filters(&leq));
    }
}

/// Least upper bound straight from the definition.
fn brute_join(leq: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = leq.len();
    let ub: Vec<usize> = (0..n).filter(|&u| leq[a][u] && leq[b][u]).collect();
    ub.iter().copied().find(|&u| ub.iter().all(|&v| leq[u][v]))
}

fn brute_meet(leq: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = leq.len();
    let lb: Vec<usize> = (0..n).filter(|&u| leq[u][a] && leq[u][b]).collect();
    lb.iter().copied().find(|&u| lb.iter().all(|&v| leq[v][u]))
}

#[test]
fn lattice_tables_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut lattices = 0;
    let mut rejected = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=7);
        let p = corpus::random_poset(&mut rng, n, 0.4);
        let leq = relation_of(&p);
        let all_bounds = (0..n).all(|a| {
            (0..n).all(|b| brute_join(&leq, a, b).is_some() && brute_meet(&leq, a, b).is_some())
        });
        match check_lattice(&p) {
            Ok(l) => {
                assert!(all_bounds);
                lattices += 1;
                let mut distributive = true;
                for a in 0..n {
                    for b in 0..n {
                        assert_eq!(Some(l.join(a, b)), brute_join(&leq, a, b));
                        assert_eq!(Some(l.meet(a, b)), brute_meet(&leq, a, b));
                        for c in 0..n {
                            let j = |x, y| brute_join(&leq, x, y).unwrap();
                            let m = |x, y| brute_meet(&leq, x, y).unwrap();
                            if j(a, m(b, c)) != m(j(a, b), j(a, c))
                                || m(a, j(b, c)) != j(m(a, b), m(a, c))
                            {
                                distributive = false;
                            }
                        }
                    }
                }
                assert_eq!(l.is_distributive(), distributive);
            }
            Err(_) => {
                assert!(!all_bounds);
                rejected += 1;
            }
        }
    }
    assert!(lattices > 10 && rejected > 10);
}

#[test]
fn m3_witness_evaluated_by_hand() {
    // Elements 0, a, b, c, 1. a ∨ (b ∧ c) = a ∨ 0 = a; (a ∨ b) ∧ (a ∨ c) = 1 ∧ 1 = 1.
    let l = corpus::m3();
    let w = l.distributivity_violation().unwrap();
    assert_eq!((w.a, w.b, w.c), (1, 2, 3));
    assert_eq!((w.lhs, w.rhs), (1, 4));
}

/// Every configuration reachable from the initial one with the shot multiset
/// of every firing sequence reaching it, by depth-first search over firing
/// sequences. Orientations are arc lists.
fn brute_explore(e: &EfgInstance) -> BTreeMap<Vec<(usize, usize)>, BTreeSet<Vec<u32>>> {
    let g = e.graph();
    let n = g.vertices().len();
    let arcs0: Vec<(usize, usize)> = (0..g.edges().len())
        .map(|k| e.initial().arc(g, k))
        .collect();
    let mut seen: BTreeMap<Vec<(usize, usize)>, BTreeSet<Vec<u32>>> = BTreeMap::new();
    let mut stack = vec![(arcs0, vec![0u32; n])];
    while let Some((arcs, shots)) = stack.pop() {
        let entry = seen.entry(arcs.clone()).or_default();
        if !entry.insert(shots.clone()) {
            continue;
        }
        for v in 0..n {
            let touching: Vec<usize> = (0..arcs.len())
                .filter(|&k| arcs[k].0 == v || arcs[k].1 == v)
                .collect();
            let sink_free = v != g.sink();
            if sink_free && !touching.is_empty() && touching.iter().all(|&k| arcs[k].1 == v) {
                let mut next = arcs.clone();
                for &k in &touching {
                    next[k] = (next[k].1, next[k].0);
                }
                let mut s = shots.clone();
                s[v] += 1;
                stack.push((next, s));
            }
        }
    }
    seen
}

fn engine_view(e: &EfgInstance) -> BTreeMap<Vec<(usize, usize)>, BTreeSet<Vec<u32>>> {
    let s = explore(e, ExploreOptions::default()).unwrap();
    let g = s.graph();
    (0..s.len())
        .map(|c| {
            let arcs = (0..g.edges().len())
                .map(|k| s.config(c).arc(g, k))
                .collect();
            (arcs, BTreeSet::from([s.shot_set(c).to_vec()]))
        })
        .collect()
}

#[test]
fn worked_examples_match_brute_force() {
    let star =
        parse_efg("efg\nvertices: a b s\nsink: s\nedges: s-a s-b\norientation: s->a s->b").unwrap();
    let path =
        parse_efg("efg\nvertices: x y s\nsink: s\nedges: x-y s-y\norientation: x->y s->y").unwrap();
    let triangle =
        parse_efg("efg\nvertices: a b c\nsink: c\nedges: b-a c-a c-b\norientation: b->a c->a c->b")
            .unwrap();
    let square = parse_efg(
        "efg\nvertices: s a b c\nsink: s\nedges: s-a a-b c-b s-c\norientation: s->a a->b c->b s->c",
    )
    .unwrap();
    let expected_sizes = [4, 3, 3, 6];
    for (e, size) in [star, path, triangle, square].iter().zip(expected_sizes) {
        let brute = brute_explore(e);
        assert_eq!(brute.len(), size);
        assert!(brute.values().all(|shots| shots.len() == 1));
        assert_eq!(brute, engine_view(e));
    }

    // The square's bottom configuration has b fired twice.
    let square = parse_efg(
        "efg\nvertices: s a b c\nsink: s\nedges: s-a a-b c-b s-c\norientation: s->a a->b c->b s->c",
    )
    .unwrap();
    let brute = brute_explore(&square);
    assert!(brute.values().any(|s| s.contains(&vec![0, 1, 2, 1])));
}

#[test]
fn random_games_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..150 {
        let n = rng.gen_range(2..=5);
        let e = corpus::random_efg(&mut rng, n, 7);
        let brute = brute_explore(&e);
        assert!(
            brute.values().all(|shots| shots.len() == 1),
            "path dependence"
        );
        assert_eq!(brute, engine_view(&e));
    }
}

#[test]
fn firing_steps_match_hand_simulation() {
    let path =
        parse_efg("efg\nvertices: x y s\nsink: s\nedges: x-y s-y\norientation: x->y s->y").unwrap();
    let g = path.graph();
    let after = fire(g, path.initial(), 1).unwrap();
    let arcs: Vec<(usize, usize)> = (0..2).map(|k| after.arc(g, k)).collect();
    assert_eq!(arcs, vec![(1, 0), (1, 2)]);
    assert_eq!(fireable(g, &after), vec![0]);
}

#[test]
fn filter_counts_of_round_trip_games() {
    // |configs| = number of filters of J, counted by brute force.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut counts = HashMap::new();
    for l in corpus::distributive_corpus(&mut rng, 60) {
        let j = l.induced_order();
        let filters = brute_filters(&relation_of(&j)).len();
        let game = efg_lattice::lattice_to_efg(&l).unwrap();
        let space = explore(&game, ExploreOptions::default()).unwrap();
        assert_eq!(space.len(), filters);
        assert_eq!(space.len(), l.len());
        *counts.entry(filters).or_insert(0) += 1;
    }
    assert!(counts.len() > 5);
}
