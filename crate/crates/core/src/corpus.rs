//! Instance generators: named small lattices, random posets and random games.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::efg::{EfgInstance, FiringGraph, Orientation};
use crate::lattice::{check_lattice, Lattice};
use crate::poset::{build_poset, Poset};

pub fn chain_poset(n: usize) -> Poset {
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let pairs: Vec<(&str, &str)> = labels
        .windows(2)
        .map(|w| (w[0].as_str(), w[1].as_str()))
        .collect();
    build_poset(&labels, &pairs).expect("chain is a poset")
}

pub fn antichain_poset(k: usize) -> Poset {
    let labels: Vec<String> = (0..k).map(|i| format!("a{i}")).collect();
    build_poset::<_, &str>(&labels, &[]).expect("antichain is a poset")
}

/// `a < c`, `b < c`.
pub fn v_poset() -> Poset {
    build_poset(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).expect("V is a poset")
}

/// A chain of `n >= 1` elements as a lattice.
pub fn chain_lattice(n: usize) -> Lattice {
    check_lattice(&chain_poset(n)).expect("chains are lattices")
}

/// The Boolean lattice with `k` atoms.
pub fn boolean_lattice(k: usize) -> Lattice {
    antichain_poset(k)
        .filter_lattice(k.max(1))
        .expect("within cap")
}

/// The product of chains with the given numbers of elements. Elements are
/// labelled `[i,j,...]`.
pub fn chain_product_lattice(sizes: &[usize]) -> Lattice {
    let total: usize = sizes.iter().product();
    let coords = |mut idx: usize| -> Vec<usize> {
        let mut c = Vec::with_capacity(sizes.len());
        for &s in sizes.iter().rev() {
            c.push(idx % s);
            idx /= s;
        }
        c.reverse();
        c
    };
    let label = |c: &[usize]| {
        let parts: Vec<String> = c.iter().map(usize::to_string).collect();
        format!("[{}]", parts.join(","))
    };
    let labels: Vec<String> = (0..total).map(|i| label(&coords(i))).collect();
    let mut pairs = Vec::new();
    for (i, from) in labels.iter().enumerate() {
        let c = coords(i);
        for axis in 0..sizes.len() {
            if c[axis] + 1 < sizes[axis] {
                let mut up = c.clone();
                up[axis] += 1;
                pairs.push((from.clone(), label(&up)));
            }
        }
    }
    check_lattice(&build_poset(&labels, &pairs).expect("product order")).expect("product of chains")
}

pub fn m3_poset() -> Poset {
    build_poset(
        &["0", "a", "b", "c", "1"],
        &[
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ],
    )
    .expect("M3 is a poset")
}

pub fn n5_poset() -> Poset {
    build_poset(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
    )
    .expect("N5 is a poset")
}

pub fn m3() -> Lattice {
    check_lattice(&m3_poset()).expect("M3 is a lattice")
}

pub fn n5() -> Lattice {
    check_lattice(&n5_poset()).expect("N5 is a lattice")
}

/// A random poset on `n` elements labelled `p0..`: each pair `i < j` is
/// related with probability `density`, then closed transitively.
pub fn random_poset<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Poset {
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((labels[i].as_str(), labels[j].as_str()));
            }
        }
    }
    build_poset(&labels, &pairs).expect("index order is acyclic")
}

/// A random connected game on `vertices` vertices labelled `v0..` with at
/// most `max_edges` edges (at least a spanning tree), a random sink and a
/// random initial orientation.
pub fn random_efg<R: Rng + ?Sized>(rng: &mut R, vertices: usize, max_edges: usize) -> EfgInstance {
    assert!(vertices >= 1);
    let labels: Vec<String> = (0..vertices).map(|i| format!("v{i}")).collect();
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for k in 1..vertices {
        let parent = order[rng.gen_range(0..k)];
        edges.push((parent, order[k]));
    }
    let mut missing: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .filter(|&(u, v)| !edges.contains(&(u, v)) && !edges.contains(&(v, u)))
        .collect();
    missing.shuffle(rng);
    let room = max_edges.saturating_sub(edges.len()).min(missing.len());
    let extra = rng.gen_range(0..=room);
    edges.extend(missing.into_iter().take(extra));
    let reversed: Vec<bool> = (0..edges.len()).map(|_| rng.gen_bool(0.5)).collect();
    let sink = rng.gen_range(0..vertices);
    let graph = FiringGraph::new(labels, edges, sink).expect("spanning tree keeps it connected");
    EfgInstance::new(graph, Orientation::from_reversed(&reversed)).expect("arity matches")
}

/// Distributive lattices for round-trip sweeps: chains of 1 to 8 elements,
/// Boolean lattices with 1 to 3 atoms, a few products of chains, then filter
/// lattices of random posets with 1 to 7 elements until `count` is reached.
pub fn distributive_corpus<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<Lattice> {
    let mut out: Vec<Lattice> = (1..=8).map(chain_lattice).collect();
    out.extend((1..=3).map(boolean_lattice));
    for sizes in [&[2, 3][..], &[3, 3], &[2, 2, 3], &[4, 2], &[3, 3, 2]] {
        out.push(chain_product_lattice(sizes));
    }
    while out.len() < count {
        let n = rng.gen_range(1..=7);
        let density = rng.gen_range(0.1..0.7);
        let p = random_poset(rng, n, density);
        out.push(p.filter_lattice(n).expect("within cap"));
    }
    out
}

/// Random games with 2 to 6 vertices and at most 9 edges.
pub fn efg_corpus<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<EfgInstance> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            random_efg(rng, n, 9)
        })
        .collect()
}
