//! The engines a trace can be replayed on, behind one interface.

use std::fmt;
use std::sync::Arc;

use nca_core::fat_preorder::{FatContext, FatParams, StaticNca};
use nca_core::incremental::{IncrementalNca, IncrementalTree};
use nca_core::link::{AckermannTable, AdaptiveLinkForest, LinkForest};
use nca_core::multilevel::{LevelConfig, Multilevel};
use nca_core::{CaTriple, Forest, NcaError, NodeId};
use petgraph::unionfind::UnionFind;

use crate::trace::{Id, Trace, TraceOp};

pub type Answer = Option<CaTriple<u32>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum EngineKind {
    /// Parent-pointer walks.
    Oracle,
    /// Fat preorder of the final forest, with connectivity replayed online.
    Static,
    /// Single incremental tree.
    IncLog2,
    /// Three-level linear structure.
    IncLinear,
    /// Two-level structure with `⌊log n⌋` microsets.
    Edmonds,
    /// Link trees with adaptive levels.
    Link,
    /// Link trees with levels fixed from the whole trace.
    LinkFixed,
}

impl EngineKind {
    pub const ALL: [EngineKind; 7] = [
        EngineKind::Oracle,
        EngineKind::Static,
        EngineKind::IncLog2,
        EngineKind::IncLinear,
        EngineKind::Edmonds,
        EngineKind::Link,
        EngineKind::LinkFixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Oracle => "oracle",
            EngineKind::Static => "static",
            EngineKind::IncLog2 => "inc-log2",
            EngineKind::IncLinear => "inc-linear",
            EngineKind::Edmonds => "edmonds",
            EngineKind::Link => "link",
            EngineKind::LinkFixed => "link-fixed",
        }
    }

    /// Whether the engine only grows one tree by `add_leaf` and `add_root`.
    pub fn is_incremental(self) -> bool {
        matches!(self, EngineKind::IncLog2 | EngineKind::IncLinear | EngineKind::Edmonds)
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("{engine}: {message}")]
    Config { engine: EngineKind, message: String },
    #[error("{engine} at op {op}: {source}")]
    Op { engine: EngineKind, op: usize, source: NcaError },
}

/// Counters of one engine over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub n: u64,
    pub m: u64,
    pub eta: u64,
    pub reorgs: u64,
    pub recompressions: u64,
    pub table_writes: u64,
    pub arena_cells: u64,
    pub max_query_steps: u32,
    pub work: u64,
}

/// A trace op with `add_root` resolved against the current root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Node(Id),
    Leaf(Id, Id),
    Root { new: Id, above: Id },
    Link(Id, Id),
    Query(Id, Id),
}

/// Resolves every `add_root` to the node it goes above: the current root of
/// the tree holding the first declared node.
pub fn lower(trace: &Trace) -> Vec<Step> {
    let mut parent: Vec<Id> = vec![Id::MAX; trace.nodes()];
    let mut main = 0;
    let root_of = |parent: &[Id], mut v: Id| {
        while parent[v as usize] != Id::MAX {
            v = parent[v as usize];
        }
        v
    };
    trace
        .ops
        .iter()
        .map(|op| match *op {
            TraceOp::MakeNode(v) => Step::Node(v),
            TraceOp::AddLeaf(p, c) => {
                parent[c as usize] = p;
                Step::Leaf(p, c)
            }
            TraceOp::AddRoot(r) => {
                let above = main;
                parent[above as usize] = r;
                main = r;
                Step::Root { new: r, above }
            }
            TraceOp::Link(x, y) => {
                let rx = root_of(&parent, x);
                if rx != y && parent[y as usize] == Id::MAX {
                    parent[y as usize] = x;
                    if y == main {
                        main = rx;
                    }
                }
                Step::Link(x, y)
            }
            TraceOp::Nca(x, y, _) | TraceOp::Ca(x, y, _) => Step::Query(x, y),
        })
        .collect()
}

pub trait Engine {
    /// Applies one step; queries return their answer.
    fn step(&mut self, s: Step) -> Result<Option<Answer>, NcaError>;
    fn counters(&self) -> Counters;
}

fn config(engine: EngineKind, message: impl Into<String>) -> EngineError {
    EngineError::Config { engine, message: message.into() }
}

/// Builds an engine able to replay `steps`.
pub fn build(kind: EngineKind, trace: &Trace, steps: &[Step], max_n: u32) -> Result<Box<dyn Engine>, EngineError> {
    if trace.nodes() > max_n as usize {
        return Err(config(kind, format!("trace has {} nodes, capacity is {max_n}", trace.nodes())));
    }
    if kind.is_incremental() {
        if let Some(i) = steps.iter().skip(1).position(|s| matches!(s, Step::Node(_))) {
            return Err(config(kind, format!("op {}: a second make_node needs a link engine", i + 1)));
        }
        if let Some(i) = steps.iter().position(|s| matches!(s, Step::Link(..))) {
            return Err(config(kind, format!("op {i}: link needs a link engine")));
        }
    }
    let core = |e: NcaError| config(kind, e.to_string());
    Ok(match kind {
        EngineKind::Oracle => Box::new(Oracle(Forest::with_capacity(trace.nodes()))),
        EngineKind::Static => Box::new(Static::new(trace, steps).map_err(core)?),
        EngineKind::IncLog2 => {
            let ctx = FatContext::new(FatParams::dynamic_default(), max_n).map_err(core)?;
            Box::new(Inc::<IncrementalTree>::new(ctx))
        }
        EngineKind::IncLinear => Box::new(Inc::<Multilevel>::new(LevelConfig::linear(max_n))),
        EngineKind::Edmonds => Box::new(Inc::<Multilevel>::new(LevelConfig::edmonds(max_n))),
        EngineKind::Link => Box::new(AdaptiveLinkForest::linear(max_n).map_err(core)?),
        EngineKind::LinkFixed => {
            let table = Arc::new(AckermannTable::new(max_n as u64));
            let m = (trace.links() + trace.queries()).max(1) as u64;
            let levels = table.alpha(m, trace.nodes().max(1) as u64);
            Box::new(LinkForest::new(levels, LevelConfig::linear(max_n), table).map_err(core)?)
        }
    })
}

struct Oracle(Forest);

impl Engine for Oracle {
    fn step(&mut self, s: Step) -> Result<Option<Answer>, NcaError> {
        let f = &mut self.0;
        match s {
            Step::Node(_) => {
                f.add_node();
            }
            Step::Leaf(p, _) => {
                f.add_leaf(NodeId(p))?;
            }
            Step::Root { above, .. } => {
                f.add_root_above(NodeId(above))?;
            }
            Step::Link(x, y) => f.link(NodeId(x), NodeId(y))?,
            Step::Query(x, y) => return Ok(Some(f.oracle_ca(NodeId(x), NodeId(y))?.map(|t| t.map(|v| v.0)))),
        }
        Ok(None)
    }

    fn counters(&self) -> Counters {
        Counters::default()
    }
}

struct Static {
    nca: StaticNca,
    uf: UnionFind<u32>,
    max_steps: u32,
    work: u64,
}

impl Static {
    fn new(trace: &Trace, steps: &[Step]) -> Result<Self, NcaError> {
        let mut oracle = Oracle(Forest::with_capacity(trace.nodes()));
        for &s in steps.iter().filter(|s| !matches!(s, Step::Query(..))) {
            oracle.step(s)?;
        }
        let nca = StaticNca::build(&oracle.0)?;
        let work = nca.tree().stats().work;
        Ok(Static { nca, uf: UnionFind::new(trace.nodes()), max_steps: 0, work })
    }
}

impl Engine for Static {
    fn step(&mut self, s: Step) -> Result<Option<Answer>, NcaError> {
        match s {
            Step::Node(_) => {}
            Step::Leaf(p, c) | Step::Link(p, c) | Step::Root { new: p, above: c } => {
                self.uf.union(p, c);
            }
            Step::Query(x, y) => {
                if !self.uf.equiv(x, y) {
                    return Ok(Some(None));
                }
                let (t, steps) = self.nca.ca_steps(NodeId(x), NodeId(y));
                self.max_steps = self.max_steps.max(steps);
                self.work += steps as u64;
                return Ok(Some(t.map(|t| t.map(|v| v.0))));
            }
        }
        Ok(None)
    }

    fn counters(&self) -> Counters {
        let st = self.nca.tree().stats();
        Counters {
            recompressions: st.recompressions,
            table_writes: st.table_writes,
            arena_cells: self.nca.tree().arena().used() as u64,
            max_query_steps: self.max_steps,
            work: self.work,
            ..Counters::default()
        }
    }
}

struct Inc<I: IncrementalNca> {
    cfg: I::Config,
    tree: Option<I>,
    max_steps: u32,
    query_work: u64,
}

impl<I: IncrementalNca> Inc<I> {
    fn new(cfg: I::Config) -> Self {
        Inc { cfg, tree: None, max_steps: 0, query_work: 0 }
    }

    fn tree(&mut self) -> Result<&mut I, NcaError> {
        self.tree.as_mut().ok_or(NcaError::UnknownNode(0))
    }
}

impl<I: IncrementalNca> Engine for Inc<I> {
    fn step(&mut self, s: Step) -> Result<Option<Answer>, NcaError> {
        match s {
            Step::Node(_) => self.tree = Some(I::new(&self.cfg)?),
            Step::Leaf(p, c) => {
                let got = self.tree()?.add_leaf(p)?;
                debug_assert_eq!(got, c);
            }
            Step::Root { new, .. } => {
                let got = self.tree()?.add_root()?;
                debug_assert_eq!(got, new);
            }
            Step::Link(_, y) => return Err(NcaError::NotARoot(y)),
            Step::Query(x, y) => {
                let (t, steps) = self.tree()?.ca_steps(x, y);
                self.max_steps = self.max_steps.max(steps);
                self.query_work += steps as u64;
                return Ok(Some(Some(t)));
            }
        }
        Ok(None)
    }

    fn counters(&self) -> Counters {
        let st = self.tree.as_ref().map(|t| t.stats()).unwrap_or_default();
        Counters {
            eta: st.adds,
            recompressions: st.recompressions,
            table_writes: st.table_writes,
            arena_cells: st.arena_used,
            max_query_steps: self.max_steps,
            work: st.work + self.query_work,
            ..Counters::default()
        }
    }
}

impl Engine for AdaptiveLinkForest {
    fn step(&mut self, s: Step) -> Result<Option<Answer>, NcaError> {
        match s {
            Step::Node(_) => {
                self.make_node();
            }
            Step::Leaf(p, _) => {
                let c = self.make_node();
                self.link(p, c)?;
            }
            Step::Root { above, .. } => {
                let r = self.make_node();
                self.link(r, above)?;
            }
            Step::Link(x, y) => self.link(x, y)?,
            Step::Query(x, y) => return Ok(Some(self.ca(x, y)?)),
        }
        Ok(None)
    }

    fn counters(&self) -> Counters {
        let st = self.stats();
        Counters {
            eta: st.eta,
            reorgs: self.reorgs().len() as u64,
            arena_cells: self.arena_cells(),
            max_query_steps: st.max_query_steps,
            work: st.work,
            ..Counters::default()
        }
    }
}

impl Engine for LinkForest {
    fn step(&mut self, s: Step) -> Result<Option<Answer>, NcaError> {
        match s {
            Step::Node(_) => {
                self.make_node();
            }
            Step::Leaf(p, _) => {
                let c = self.make_node();
                self.link(p, c)?;
            }
            Step::Root { above, .. } => {
                let r = self.make_node();
                self.link(r, above)?;
            }
            Step::Link(x, y) => self.link(x, y)?,
            Step::Query(x, y) => return Ok(Some(self.ca(x, y)?)),
        }
        Ok(None)
    }

    fn counters(&self) -> Counters {
        let st = self.stats();
        Counters {
            eta: st.eta,
            arena_cells: self.arena_cells(),
            max_query_steps: st.max_query_steps,
            work: st.work,
            ..Counters::default()
        }
    }
}
