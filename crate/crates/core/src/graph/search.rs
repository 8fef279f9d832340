//! Exhaustive automorphism search by individualization and refinement.
//!
//! The left side of the search fixes a canonical sequence of individualized
//! vertices; the right side tries every vertex of the matching cell. Colour
//! refinement runs on both sides and branches whose refinement traces differ
//! are cut. Every automorphism `ψ` survives along the branch that individualizes
//! `ψ(v)` opposite `v`, so each one reaches exactly one discrete leaf.

use std::collections::HashMap;

use super::{BinarySystem, GraphError};
use crate::group::Perm;

const OUT: u32 = 0;
const IN: u32 = 1;

/// Counters from one search, for reporting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
}

struct Adjacency {
    /// Per vertex: (label, direction, neighbour).
    nbrs: Vec<Vec<(u32, u32, u32)>>,
}

impl Adjacency {
    fn new(sys: &BinarySystem) -> Self {
        let mut nbrs = vec![Vec::new(); sys.vertex_count()];
        for (l, u, w) in sys.pairs() {
            nbrs[u].push((l as u32, OUT, w as u32));
            nbrs[w].push((l as u32, IN, u as u32));
        }
        Adjacency { nbrs }
    }
}

/// One refinement round summarised as the sorted multiset of vertex signatures.
type Round = Vec<(Vec<u32>, u32)>;

/// Colours `colors` to the coarsest stable refinement, returning the trace.
/// When `expected` is given, stops early with `None` as soon as a round differs.
fn refine(adj: &Adjacency, colors: &mut [u32], expected: Option<&[Round]>) -> Option<Vec<Round>> {
    let n = colors.len();
    let mut trace = Vec::new();
    let mut classes = count_classes(colors);
    loop {
        let sigs: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                let mut around: Vec<(u32, u32, u32)> = adj.nbrs[v]
                    .iter()
                    .map(|&(l, d, w)| (l, d, colors[w as usize]))
                    .collect();
                around.sort_unstable();
                let mut sig = Vec::with_capacity(1 + 3 * around.len());
                sig.push(colors[v]);
                for (l, d, c) in around {
                    sig.extend([l, d, c]);
                }
                sig
            })
            .collect();
        let mut distinct: Vec<&Vec<u32>> = sigs.iter().collect();
        distinct.sort_unstable();
        let mut round: Round = Vec::new();
        for s in distinct {
            match round.last_mut() {
                Some((last, count)) if last == s => *count += 1,
                _ => round.push((s.clone(), 1)),
            }
        }
        if let Some(exp) = expected {
            if exp.get(trace.len()) != Some(&round) {
                return None;
            }
        }
        let rank: HashMap<&Vec<u32>, u32> = round
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s, i as u32))
            .collect();
        for v in 0..n {
            colors[v] = rank[&sigs[v]];
        }
        let next = round.len();
        trace.push(round);
        if next == classes {
            break;
        }
        classes = next;
    }
    if let Some(exp) = expected {
        if exp.len() != trace.len() {
            return None;
        }
    }
    Some(trace)
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    colors
        .iter()
        .enumerate()
        .map(|(i, &c)| 2 * c + u32::from(i == v))
        .collect()
}

/// Colour cells as `color -> members`, members ascending.
fn cells(colors: &[u32]) -> Vec<Vec<usize>> {
    let k = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut out = vec![Vec::new(); k];
    for (v, &c) in colors.iter().enumerate() {
        out[c as usize].push(v);
    }
    out
}

struct Search<'a> {
    sys: &'a BinarySystem,
    adj: Adjacency,
    cap: u64,
    stats: SearchStats,
    found: Vec<Perm>,
    root_cells: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, left: Vec<u32>, right: Vec<u32>) -> Result<(), GraphError> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.cap {
            return Err(GraphError::SearchCapExceeded {
                cap: self.cap,
                cell_sizes: self.root_cells.clone(),
            });
        }
        let left_cells = cells(&left);
        let right_cells = cells(&right);
        let target = left_cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(target) = target else {
            self.stats.leaves += 1;
            let mut images = vec![0usize; left.len()];
            for (c, members) in left_cells.iter().enumerate() {
                images[members[0]] = right_cells[c][0];
            }
            let psi =
                Perm::from_images(images).expect("matching discrete colourings give a bijection");
            if self.sys.is_automorphism(&psi) {
                self.found.push(psi);
            }
            return Ok(());
        };
        let v = left_cells[target][0];
        let mut next_left = individualize(&left, v);
        let trace = refine(&self.adj, &mut next_left, None).expect("unconstrained refinement");
        for &w in &right_cells[target] {
            let mut next_right = individualize(&right, w);
            if refine(&self.adj, &mut next_right, Some(&trace)).is_some() {
                self.run(next_left.clone(), next_right)?;
            }
        }
        Ok(())
    }
}

/// Every automorphism of `sys`, sorted lexicographically by image vectors.
///
/// `cap` bounds the number of search-tree nodes.
pub fn automorphisms(sys: &BinarySystem, cap: u64) -> Result<Vec<Perm>, GraphError> {
    automorphisms_with_stats(sys, cap).map(|(auts, _)| auts)
}

pub fn automorphisms_with_stats(
    sys: &BinarySystem,
    cap: u64,
) -> Result<(Vec<Perm>, SearchStats), GraphError> {
    let adj = Adjacency::new(sys);
    let mut root = vec![0u32; sys.vertex_count()];
    refine(&adj, &mut root, None);
    let mut root_cells: Vec<usize> = cells(&root).iter().map(Vec::len).collect();
    root_cells.sort_unstable_by(|a, b| b.cmp(a));
    let mut search = Search {
        sys,
        adj,
        cap,
        stats: SearchStats::default(),
        found: Vec::new(),
        root_cells,
    };
    if sys.vertex_count() == 0 {
        return Ok((vec![Perm::identity(0)], search.stats));
    }
    search.run(root.clone(), root)?;
    let mut found = search.found;
    found.sort();
    Ok((found, search.stats))
}
