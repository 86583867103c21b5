use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{format_tuple, neighbors, tuple_key, tuples_equal, NielsenMove};
use crate::group::GroupBackend;

/// Default cap on stored vertices.
pub const DEFAULT_BUDGET: usize = 2_000_000;
/// Frontier vertices expanded per batch.
const EXPAND_CHUNK: usize = 2048;
/// Largest ball rendered as DOT.
pub const MAX_DOT_VERTICES: usize = 2000;

#[derive(Clone, Copy, Debug)]
pub struct BallOptions {
    pub radius: usize,
    pub budget: usize,
    /// Expand each frontier in parallel; results are merged in order.
    pub parallel: bool,
    pub record_edges: bool,
}

impl BallOptions {
    pub fn new(radius: usize) -> Self {
        Self {
            radius,
            budget: DEFAULT_BUDGET,
            parallel: true,
            record_edges: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallRow {
    pub radius: usize,
    /// Vertices at exactly this distance.
    pub layer: usize,
    /// `|B(radius)|`.
    pub cumulative: usize,
    /// False when the budget ran out while this layer was being filled.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallTable {
    pub origin: String,
    /// `4n(n-1)`, counting loops and repeated edges.
    pub degree: usize,
    pub rows: Vec<BallRow>,
    pub truncated: bool,
}

impl BallTable {
    /// `|B(r)|`, if that radius was reached with a complete layer.
    pub fn count(&self, r: usize) -> Option<usize> {
        self.rows
            .iter()
            .find(|row| row.radius == r && row.complete)
            .map(|row| row.cumulative)
    }

    /// Largest radius whose ball is known exactly.
    pub fn exact_radius(&self) -> Option<usize> {
        self.rows.iter().rev().find(|r| r.complete).map(|r| r.radius)
    }

    pub const CSV_HEADER: &'static str = "radius,layer,cumulative,complete";

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| format!("{},{},{},{}", r.radius, r.layer, r.cumulative, r.complete))
            .collect()
    }
}

/// The explored ball: table, vertices with distances, and optional edges.
pub struct Explored<B: GroupBackend> {
    pub table: BallTable,
    vertices: Vec<(Vec<B::Elem>, usize)>,
    index: HashMap<Vec<B::Key>, Vec<u32>>,
    edges: Vec<(u32, u32, NielsenMove)>,
}

impl<B: GroupBackend> Explored<B> {
    /// Distance from the origin, if the tuple was stored.
    pub fn distance(&self, b: &B, tuple: &[B::Elem]) -> Option<usize> {
        self.find(b, &tuple_key(b, tuple), tuple)
            .map(|i| self.vertices[i as usize].1)
    }

    fn find(&self, b: &B, key: &[B::Key], tuple: &[B::Elem]) -> Option<u32> {
        let bucket = self.index.get(key)?;
        if b.exact_keys() {
            return bucket.first().copied();
        }
        bucket
            .iter()
            .copied()
            .find(|&i| tuples_equal(b, &self.vertices[i as usize].0, tuple))
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&[B::Elem], usize)> {
        self.vertices.iter().map(|(t, d)| (t.as_slice(), *d))
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Undirected simple graph of the ball, or `None` above
    /// [`MAX_DOT_VERTICES`] or when edges were not recorded.
    pub fn to_dot(&self, b: &B) -> Option<String> {
        if self.vertices.len() > MAX_DOT_VERTICES || (self.edges.is_empty() && self.vertices.len() > 1) {
            return None;
        }
        let mut s = String::from("graph prp {\n");
        for (i, (t, d)) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{}\", dist={d}];", format_tuple(b, t));
        }
        for (u, v, m) in &self.edges {
            let _ = writeln!(s, "  v{u} -- v{v} [label=\"{m}\"];");
        }
        s.push_str("}\n");
        Some(s)
    }
}

/// Breadth-first ball around `origin`, budgeted by stored vertex count.
///
/// The vertex order, and hence every output, is the same with or without
/// parallel expansion.
pub fn ball<B: GroupBackend>(b: &B, origin: &[B::Elem], opts: BallOptions) -> Explored<B> {
    let n = origin.len();
    let mut ex = Explored {
        table: BallTable {
            origin: format_tuple(b, origin),
            degree: 4 * n * n.saturating_sub(1),
            rows: vec![BallRow {
                radius: 0,
                layer: 1,
                cumulative: 1,
                complete: true,
            }],
            truncated: false,
        },
        vertices: vec![(origin.to_vec(), 0)],
        index: HashMap::from([(tuple_key(b, origin), vec![0])]),
        edges: Vec::new(),
    };
    let mut edge_seen = std::collections::HashSet::new();
    let mut frontier: Vec<u32> = vec![0];
    for r in 1..=opts.radius {
        let mut next = Vec::new();
        let mut complete = true;
        // Fixed-size chunks keep candidate buffers small and the merge order
        // independent of the thread count.
        for chunk in frontier.chunks(EXPAND_CHUNK) {
            let vertices = &ex.vertices;
            let expand = |&u: &u32| {
                neighbors(b, &vertices[u as usize].0)
                    .into_iter()
                    .map(|(m, t)| (u, m, tuple_key(b, &t), t))
                    .collect::<Vec<_>>()
            };
            let candidates: Vec<Vec<_>> = if opts.parallel {
                chunk.par_iter().map(expand).collect()
            } else {
                chunk.iter().map(expand).collect()
            };
            for (u, m, key, t) in candidates.into_iter().flatten() {
                let v = match ex.find(b, &key, &t) {
                    Some(v) => v,
                    None => {
                        if ex.vertices.len() >= opts.budget {
                            complete = false;
                            break;
                        }
                        let v = ex.vertices.len() as u32;
                        ex.vertices.push((t, r));
                        ex.index.entry(key).or_default().push(v);
                        next.push(v);
                        v
                    }
                };
                if opts.record_edges && u != v && edge_seen.insert((u.min(v), u.max(v))) {
                    ex.edges.push((u, v, m));
                }
            }
            if !complete {
                break;
            }
        }
        let cumulative = ex.vertices.len();
        ex.table.rows.push(BallRow {
            radius: r,
            layer: next.len(),
            cumulative,
            complete,
        });
        if !complete {
            ex.table.truncated = true;
            break;
        }
        frontier = next;
    }
    ex
}
