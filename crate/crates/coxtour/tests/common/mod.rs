//! Helpers shared by the integration suites: rational shorthands, graph
//! enumeration, random feasible scores and the golden seven-player fixture.

#![allow(dead_code)]

use std::collections::BTreeMap;

use coxtour::rational::{frac, parse_rational, rat, Rat};
use coxtour::roots::{RootKind, RootType};
use coxtour::score::Tournament;
use coxtour::sgraph::{complete_graph, SignedGraph};
use rand::Rng;

pub fn t(kind: RootKind, n: usize) -> RootType {
    RootType::new(kind, n).unwrap()
}

pub fn r(s: &str) -> Rat {
    parse_rational(s).unwrap()
}

pub fn rv(vals: &[i64]) -> Vec<Rat> {
    vals.iter().map(|&v| rat(v)).collect()
}

/// Every signed graph of the given type with at most `max_edges` edges,
/// enumerated as subsets of the full edge pool: both signs of every pair,
/// plus half-edges in type B and loops in type C.
pub fn all_graphs(kind: RootKind, n: usize, max_edges: usize) -> Vec<SignedGraph> {
    #[derive(Clone, Copy)]
    enum Item {
        Neg(usize, usize),
        Pos(usize, usize),
        Half(usize),
        Loop(usize),
    }
    let mut pool = Vec::new();
    for hi in 2..=n {
        for lo in 1..hi {
            pool.push(Item::Neg(hi, lo));
            pool.push(Item::Pos(hi, lo));
        }
    }
    match kind {
        RootKind::B => pool.extend((1..=n).map(Item::Half)),
        RootKind::C => pool.extend((1..=n).map(Item::Loop)),
        _ => {}
    }
    assert!(pool.len() <= 31, "edge pool too large to enumerate");
    let rt = t(kind, n);
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pool.len()) {
        if mask.count_ones() as usize > max_edges {
            continue;
        }
        let mut neg = Vec::new();
        let mut pos = Vec::new();
        let mut half = Vec::new();
        let mut loops = Vec::new();
        for (b, item) in pool.iter().enumerate() {
            if mask >> b & 1 == 1 {
                match *item {
                    Item::Neg(h, l) => neg.push((h, l)),
                    Item::Pos(h, l) => pos.push((h, l)),
                    Item::Half(i) => half.push(i),
                    Item::Loop(i) => loops.push(i),
                }
            }
        }
        out.push(SignedGraph::new(rt, &neg, &pos, &half, &loops));
    }
    out
}

/// Mean score of a random rational tournament on the complete graph of
/// `rt`; feasible by construction. Probabilities mix hard 0/1 outcomes
/// with small-denominator interior values.
pub fn random_feasible<R: Rng>(rt: RootType, rng: &mut R) -> Vec<Rat> {
    let g = complete_graph(rt).unwrap();
    let probs: Vec<Rat> = (0..g.edge_count())
        .map(|_| {
            let d = rng.gen_range(1..=6i64);
            frac(rng.gen_range(0..=d), d)
        })
        .collect();
    Tournament::new(g, probs).unwrap().mean_score()
}

/// The seven-player type-C worked example: the input score sequence and
/// the full expected probability table, keyed by edge id. Entries are win
/// probabilities; steps that the construction solves for loss
/// probabilities appear here already complemented.
pub fn golden_seven_players() -> (Vec<Rat>, BTreeMap<&'static str, Rat>) {
    let x = vec![
        frac(-2, 5),
        frac(1, 2),
        frac(23, 10),
        frac(17, 5),
        frac(-41, 10),
        frac(49, 10),
        frac(-26, 5),
    ];
    let entries: &[(&str, &str)] = &[
        ("loop:7", "0"),
        ("neg:7-6", "0"),
        ("neg:7-5", "3/4"),
        ("neg:7-4", "0"),
        ("neg:7-3", "0"),
        ("neg:7-2", "0"),
        ("neg:7-1", "0"),
        ("pos:7-6", "1"),
        ("pos:7-5", "0"),
        ("pos:7-4", "1/20"),
        ("pos:7-3", "0"),
        ("pos:7-2", "0"),
        ("pos:7-1", "0"),
        ("loop:6", "1"),
        ("neg:6-5", "1"),
        ("neg:6-4", "0"),
        ("neg:6-3", "9/10"),
        ("neg:6-2", "1"),
        ("neg:6-1", "1"),
        ("pos:6-5", "0"),
        ("pos:6-4", "1"),
        ("pos:6-3", "1"),
        ("pos:6-2", "1"),
        ("pos:6-1", "1"),
        ("loop:5", "0"),
        ("neg:5-4", "0"),
        ("neg:5-3", "0"),
        ("neg:5-2", "0"),
        ("neg:5-1", "11/40"),
        ("pos:5-4", "1"),
        ("pos:5-3", "1"),
        ("pos:5-2", "3/8"),
        ("pos:5-1", "0"),
        ("loop:4", "1"),
        ("neg:4-3", "0"),
        ("neg:4-2", "21/40"),
        ("neg:4-1", "13/20"),
        ("pos:4-3", "1"),
        ("pos:4-2", "13/20"),
        ("pos:4-1", "21/40"),
        ("loop:3", "1"),
        ("neg:3-2", "3/10"),
        ("neg:3-1", "3/10"),
        ("pos:3-2", "3/10"),
        ("pos:3-1", "3/10"),
        ("loop:2", "1/2"),
        ("neg:2-1", "1/2"),
        ("pos:2-1", "1/2"),
        ("loop:1", "1/2"),
    ];
    let map = entries.iter().map(|&(id, v)| (id, r(v))).collect();
    (x, map)
}
