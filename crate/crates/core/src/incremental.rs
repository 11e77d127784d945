//! Incremental trees under `add_leaf` and `add_root`, by recompression inside
//! expansion intervals of a dynamic fat preorder.

use std::sync::Arc;

use crate::error::{NcaError, Result};
use crate::fat_preorder::{FatContext, FatStats, FatTree, NONE};
use crate::forest::{reroot_combine, CaProvider, CaTriple};

/// Counters reported by every incremental engine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IncStats {
    pub nodes: u64,
    pub adds: u64,
    pub recompressions: u64,
    pub table_writes: u64,
    /// Total work of all mutations, in primitive steps.
    pub work: u64,
    pub arena_used: u64,
    pub arena_live: u64,
}

impl IncStats {
    pub fn merge(&mut self, o: &IncStats) {
        self.nodes += o.nodes;
        self.adds += o.adds;
        self.recompressions += o.recompressions;
        self.table_writes += o.table_writes;
        self.work += o.work;
        self.arena_used += o.arena_used;
        self.arena_live += o.arena_live;
    }
}

/// A tree growing by `add_leaf` and `add_root`, answering characteristic
/// ancestors in the current rooting. Local node ids are dense from 0; node 0 is
/// the initial root.
pub trait IncrementalNca: Sized {
    type Config: Clone + std::fmt::Debug;

    fn new(cfg: &Self::Config) -> Result<Self>;
    /// Adds a new leaf under `x` and returns its id.
    fn add_leaf(&mut self, x: u32) -> Result<u32>;
    /// Adds a new node that becomes the parent of the current root.
    fn add_root(&mut self) -> Result<u32>;
    /// Characteristic ancestors and the primitive steps spent.
    fn ca_steps(&self, x: u32, y: u32) -> (CaTriple<u32>, u32);
    /// The root cursor `ϱ`.
    fn root(&self) -> u32;
    fn len(&self) -> usize;
    fn stats(&self) -> IncStats;

    fn ca(&self, x: u32, y: u32) -> CaTriple<u32> {
        self.ca_steps(x, y).0
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Dynamic compressed tree with amortized `O(log² n)` `add_leaf` and `O(1)` ca.
#[derive(Debug, Clone)]
pub struct IncrementalTree {
    core: FatTree,
    rho: u32,
    adds: u64,
    walk: u64,
}

impl IncrementalTree {
    pub fn from_context(ctx: Arc<FatContext>) -> Result<Self> {
        if ctx.params.alpha.is_none() {
            return Err(NcaError::Config("incremental trees need alpha".into()));
        }
        let mut core = FatTree::with_root(ctx);
        core.recompress(0);
        Ok(IncrementalTree { core, rho: 0, adds: 0, walk: 0 })
    }

    pub fn core(&self) -> &FatTree {
        &self.core
    }

    pub fn fat_stats(&self) -> FatStats {
        self.core.stats()
    }

    /// `⌊log_β(c·n^e)⌋ + 1` for the current size `n`.
    pub fn reorg_bound(&self) -> u32 {
        let p = self.core.params();
        let top = p.interval(self.core.len() as u32);
        self.core.ctx().log.floor_log(top).unwrap() + 1
    }

    /// Physical characteristic ancestors, ignoring the root cursor.
    pub fn ca_physical(&self, x: u32, y: u32) -> (CaTriple<u32>, u32) {
        self.core.ca_steps(x, y)
    }
}

impl IncrementalNca for IncrementalTree {
    type Config = Arc<FatContext>;

    fn new(cfg: &Arc<FatContext>) -> Result<Self> {
        Self::from_context(cfg.clone())
    }

    fn add_leaf(&mut self, x: u32) -> Result<u32> {
        let n = self.core.len();
        if n >= self.core.ctx().max_n as usize {
            return Err(NcaError::Capacity(format!(
                "incremental tree is configured for at most {} nodes",
                self.core.ctx().max_n
            )));
        }
        if x as usize >= n {
            return Err(NcaError::UnknownNode(x));
        }
        let alpha = self.core.params().alpha.unwrap();
        let y = self.core.push_node(x);
        let mut v = y;
        let mut u = self.core.dparent(y).unwrap_or(NONE);
        let mut steps = 1u64;
        while u != NONE {
            let s = self.core.bump_s(u);
            if alpha.mul_le(self.core.sigma(u) as u64, s as u64) {
                v = u;
            }
            u = self.core.dparent(u).unwrap_or(NONE);
            steps += 1;
        }
        self.core.add_work(steps);
        self.walk += steps;
        self.core.recompress(v);
        self.adds += 1;
        Ok(y)
    }

    fn add_root(&mut self) -> Result<u32> {
        let y = self.add_leaf(self.rho)?;
        self.rho = y;
        Ok(y)
    }

    fn ca_steps(&self, x: u32, y: u32) -> (CaTriple<u32>, u32) {
        if self.rho == 0 {
            return self.core.ca_steps(x, y);
        }
        let (xy, s1) = self.core.ca_steps(x, y);
        let (xz, s2) = self.core.ca_steps(x, self.rho);
        let (yz, s3) = self.core.ca_steps(y, self.rho);
        (reroot_combine(&self.core, xy, xz, yz), s1 + s2 + s3)
    }

    fn root(&self) -> u32 {
        self.rho
    }

    fn len(&self) -> usize {
        self.core.len()
    }

    fn stats(&self) -> IncStats {
        let f = self.core.stats();
        IncStats {
            nodes: self.core.len() as u64,
            adds: self.adds,
            recompressions: f.recompressions,
            table_writes: f.table_writes,
            work: f.work,
            arena_used: self.core.arena().used() as u64,
            arena_live: self.core.arena().total_live() as u64,
        }
    }
}

impl CaProvider for IncrementalTree {
    type Node = u32;

    fn ca(&self, x: u32, y: u32) -> Option<CaTriple<u32>> {
        Some(IncrementalNca::ca(self, x, y))
    }

    /// Physical parent.
    fn parent(&self, x: u32) -> Option<u32> {
        self.core.tparent(x)
    }
}
