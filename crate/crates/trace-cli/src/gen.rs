//! Seeded trace generators.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trace::{Id, Trace, TraceOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Profile {
    /// One tree grown by `add_leaf`.
    LeafHeavy,
    /// One tree grown by `add_leaf` and `add_root` in equal measure.
    RootHeavy,
    /// One tree built early, then mostly queries.
    QueryHeavy,
    /// Links between random trees.
    LinkBalanced,
    /// One tree absorbing singletons.
    LinkSkewed,
}

impl Profile {
    pub const ALL: [Profile; 5] =
        [Profile::LeafHeavy, Profile::RootHeavy, Profile::QueryHeavy, Profile::LinkBalanced, Profile::LinkSkewed];

    pub fn name(self) -> &'static str {
        match self {
            Profile::LeafHeavy => "leaf-heavy",
            Profile::RootHeavy => "root-heavy",
            Profile::QueryHeavy => "query-heavy",
            Profile::LinkBalanced => "link-balanced",
            Profile::LinkSkewed => "link-skewed",
        }
    }

    pub fn is_link(self) -> bool {
        matches!(self, Profile::LinkBalanced | Profile::LinkSkewed)
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Profile::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown profile `{s}`"))
    }
}

struct Gen {
    rng: ChaCha8Rng,
    ops: Vec<TraceOp>,
    nodes: u32,
}

impl Gen {
    fn query(&mut self) {
        let x = self.rng.gen_range(0..self.nodes);
        let y = self.rng.gen_range(0..self.nodes);
        let op = if self.rng.gen_bool(0.5) { TraceOp::Ca(x, y, None) } else { TraceOp::Nca(x, y, None) };
        self.ops.push(op);
    }

    fn fresh(&mut self) -> Id {
        self.nodes += 1;
        self.nodes - 1
    }

    /// Interleaves `m` queries with `structural` calls to `step`, queries
    /// weighted by `bias` while structure remains.
    fn interleave(&mut self, structural: usize, m: usize, bias: f64, mut step: impl FnMut(&mut Gen)) {
        let (mut s, mut q) = (structural, m);
        while s + q > 0 {
            let take_query = q > 0 && (s == 0 || self.rng.gen_bool(bias * q as f64 / (q + s) as f64));
            if take_query {
                self.query();
                q -= 1;
            } else {
                step(self);
                s -= 1;
            }
        }
    }
}

/// A deterministic trace with `n` nodes and `m` queries.
pub fn generate(seed: u64, profile: Profile, n: usize, m: usize) -> Trace {
    let n = n.max(1);
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), ops: Vec::with_capacity(n + m), nodes: 0 };
    match profile {
        Profile::LeafHeavy | Profile::RootHeavy | Profile::QueryHeavy => {
            let r = g.fresh();
            g.ops.push(TraceOp::MakeNode(r));
            let roots = if profile == Profile::RootHeavy { 0.5 } else { 0.0 };
            let bias = if profile == Profile::QueryHeavy { 0.1 } else { 1.0 };
            g.interleave(n - 1, m, bias, |g| {
                if g.rng.gen_bool(roots) {
                    let y = g.fresh();
                    g.ops.push(TraceOp::AddRoot(y));
                } else {
                    let x = g.rng.gen_range(0..g.nodes);
                    let y = g.fresh();
                    g.ops.push(TraceOp::AddLeaf(x, y));
                }
            });
        }
        Profile::LinkBalanced | Profile::LinkSkewed => {
            for _ in 0..n {
                let v = g.fresh();
                g.ops.push(TraceOp::MakeNode(v));
            }
            let mut order: Vec<Id> = (0..n as Id).collect();
            for i in (1..order.len()).rev() {
                let j = g.rng.gen_range(0..=i);
                order.swap(i, j);
            }
            if profile == Profile::LinkSkewed {
                // The first node's tree takes each remaining node in turn.
                let mut tree = vec![order[0]];
                let mut next = 1;
                g.interleave(n - 1, m, 1.0, |g| {
                    let x = tree[g.rng.gen_range(0..tree.len())];
                    let y = order[next];
                    next += 1;
                    tree.push(y);
                    g.ops.push(TraceOp::Link(x, y));
                });
            } else {
                // Union of random trees, each given by its member list and root.
                let mut trees: Vec<(Vec<Id>, Id)> = order.iter().map(|&v| (vec![v], v)).collect();
                g.interleave(n - 1, m, 1.0, |g| {
                    let i = g.rng.gen_range(0..trees.len());
                    let mut j = g.rng.gen_range(0..trees.len() - 1);
                    if j >= i {
                        j += 1;
                    }
                    let x = trees[i].0[g.rng.gen_range(0..trees[i].0.len())];
                    let (members, y) = trees.swap_remove(j);
                    let i = if i == trees.len() { j } else { i };
                    trees[i].0.extend(members);
                    g.ops.push(TraceOp::Link(x, y));
                });
            }
        }
    }
    Trace { ops: g.ops, external: (0..g.nodes as u64).collect() }
}
