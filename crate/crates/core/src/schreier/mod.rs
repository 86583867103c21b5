//! Level Schreier graphs, depth-first spanning walks, cubic families and
//! the growth certificates built from them.

mod certificate;
mod cubic;
mod growth;

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

pub use certificate::{
    build_certificate, verify_certificate, Certificate, CertificateCheck, CERTIFICATE_HEADER, MAX_CERTIFICATE_LEVEL,
};
pub use cubic::{check_cubic_bruteforce, check_cubic_by_support, conjugate_family, SupportCheck, MAX_BRUTE_FORCE};
pub use growth::{growth_report, rw_speed, GrowthReport, GrowthReportF64, GrowthRow, WalkOptions, WalkStats};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::tree::{GrigorchukGroup, TreeWord};

/// Default largest level for Schreier graphs.
pub const DEFAULT_MAX_SCHREIER_LEVEL: usize = 14;

/// The action graph of a generator tuple on the `2^m` strings of level `m`.
#[derive(Clone, Debug)]
pub struct SchreierGraph {
    level: usize,
    gens: Vec<TreeWord>,
    forward: Vec<Vec<u32>>,
    backward: Vec<Vec<u32>>,
    components: usize,
}

impl SchreierGraph {
    pub fn new(group: &GrigorchukGroup, gens: &[TreeWord], m: usize) -> Result<Self> {
        Self::with_max_level(group, gens, m, DEFAULT_MAX_SCHREIER_LEVEL)
    }

    pub fn with_max_level(group: &GrigorchukGroup, gens: &[TreeWord], m: usize, max: usize) -> Result<Self> {
        if m > max {
            return Err(Error::LevelTooLarge { level: m, max });
        }
        if let Some(g) = gens.iter().find(|g| g.offset() != 0) {
            return Err(Error::OffsetMismatch(g.offset(), 0));
        }
        let forward: Vec<Vec<u32>> = gens.iter().map(|g| group.level_permutation(g, m)).collect();
        let backward = forward
            .iter()
            .map(|p| {
                let mut inv = vec![0u32; p.len()];
                for (i, &j) in p.iter().enumerate() {
                    inv[j as usize] = i as u32;
                }
                inv
            })
            .collect();
        let mut graph = Self {
            level: m,
            gens: gens.to_vec(),
            forward,
            backward,
            components: 0,
        };
        graph.components = graph.count_components();
        Ok(graph)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn gens(&self) -> &[TreeWord] {
        &self.gens
    }

    pub fn num_vertices(&self) -> usize {
        1 << self.level
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    /// `act(g_i, s)` on vertex indices.
    pub fn target(&self, gen: usize, vertex: usize) -> usize {
        self.forward[gen][vertex] as usize
    }

    /// The `2n` labeled out-edges of a vertex: `(target, generator, inverse)`.
    pub fn out_edges(&self, vertex: usize) -> Vec<(usize, usize, bool)> {
        (0..self.gens.len())
            .flat_map(|i| {
                [
                    (self.forward[i][vertex] as usize, i, false),
                    (self.backward[i][vertex] as usize, i, true),
                ]
            })
            .collect()
    }

    fn count_components(&self) -> usize {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut count = 0;
        for root in 0..n {
            if seen[root] {
                continue;
            }
            count += 1;
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for (v, _, _) in self.out_edges(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        count
    }

    pub const CSV_HEADER: &'static str = "source,generator,target";

    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows = Vec::new();
        for v in 0..self.num_vertices() {
            let s = Bits::from_index(v, self.level);
            for (i, g) in self.gens.iter().enumerate() {
                let t = Bits::from_index(self.target(i, v), self.level);
                rows.push(format!("{s},{g},{t}"));
            }
        }
        rows
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph schreier {\n");
        for v in 0..self.num_vertices() {
            let _ = writeln!(out, "  \"{}\";", Bits::from_index(v, self.level));
        }
        for v in 0..self.num_vertices() {
            for (i, g) in self.gens.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [label=\"{g}\"];",
                    Bits::from_index(v, self.level),
                    Bits::from_index(self.target(i, v), self.level)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A walk through every level string along a depth-first spanning tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningWalk {
    pub start: Bits,
    /// `s_1, …, s_N`, with `s_1 = start`.
    pub visits: Vec<Bits>,
    /// `h_1 = ε, …, h_N` with `h_i(start) = s_i`.
    #[serde(skip)]
    pub words: Vec<TreeWord>,
    /// `h_{i+1} h_i^{-1}`, one per consecutive pair of visits.
    #[serde(skip)]
    pub steps: Vec<TreeWord>,
}

impl SpanningWalk {
    /// `Σ len(h_{i+1} h_i^{-1})`.
    pub fn cost(&self) -> usize {
        self.steps.iter().map(TreeWord::len).sum()
    }

    /// Rebuilds the walk words from the steps.
    pub fn from_steps(start: Bits, visits: Vec<Bits>, steps: Vec<TreeWord>) -> Self {
        let mut words = vec![TreeWord::identity(0)];
        for s in &steps {
            let next = s.mul_unchecked(words.last().unwrap());
            words.push(next);
        }
        Self {
            start,
            visits,
            words,
            steps,
        }
    }
}

/// Preorder depth-first traversal from `start`. Children are taken in
/// lexicographic order of their strings; the edge to a child is the first
/// generator reaching it (forward before inverse).
pub fn spanning_walk(graph: &SchreierGraph, start: &Bits) -> Result<SpanningWalk> {
    if start.len() != graph.level {
        return Err(Error::Precondition(format!(
            "start {start} is not on level {}",
            graph.level
        )));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected(graph.level));
    }
    let n = graph.num_vertices();
    let root = start.to_index();
    // Tree edge into each vertex: (parent, word from parent to vertex).
    let mut parent: Vec<Option<(usize, TreeWord)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // Vertices are marked when popped; a later push overrides the pending
    // parent, as in recursive depth-first search.
    let mut stack = vec![root];
    let mut pending: Vec<Option<(usize, TreeWord)>> = vec![None; n];
    while let Some(u) = stack.pop() {
        if seen[u] {
            continue;
        }
        seen[u] = true;
        if let Some((p, w)) = pending[u].take() {
            depth[u] = depth[p] + 1;
            parent[u] = Some((p, w));
        }
        order.push(u);
        let mut children: Vec<(usize, TreeWord)> = Vec::new();
        for (v, i, inverse) in graph.out_edges(u) {
            if seen[v] || children.iter().any(|(c, _)| *c == v) {
                continue;
            }
            let g = &graph.gens[i];
            children.push((v, if inverse { g.invert() } else { g.clone() }));
        }
        children.sort_by_key(|(v, _)| *v);
        for (v, w) in children.into_iter().rev() {
            pending[v] = Some((u, w));
            stack.push(v);
        }
    }
    debug_assert_eq!(order.len(), n);

    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    for pair in order.windows(2) {
        let (mut u, v) = (pair[0], pair[1]);
        let (pv, down) = parent[v].clone().expect("non-root vertex has a parent");
        let mut step = TreeWord::identity(0);
        while u != pv {
            let (p, w) = parent[u].clone().expect("parent of v is an ancestor of u");
            step = w.invert().mul_unchecked(&step);
            u = p;
        }
        steps.push(down.mul_unchecked(&step));
    }
    let visits = order.iter().map(|&v| Bits::from_index(v, graph.level)).collect();
    Ok(SpanningWalk::from_steps(start.clone(), visits, steps))
}
