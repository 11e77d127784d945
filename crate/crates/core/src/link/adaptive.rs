//! Link trees when neither `m` nor `n` is known in advance: the number of
//! levels follows `α(m′, n′)` and the structure is rebuilt when it drifts out
//! of range.

use std::sync::Arc;

use super::{AckermannTable, LinkForest, LinkStats};
use crate::error::Result;
use crate::forest::CaTriple;
use crate::incremental::IncrementalNca;
use crate::multilevel::{LevelConfig, Multilevel};

/// A rebuild between periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReorgEvent {
    /// Index of the operation that triggered it, counting every call.
    pub op: u64,
    pub from: u32,
    pub to: u32,
    pub n: u64,
    pub m: u64,
}

#[derive(Debug, Clone)]
pub struct AdaptiveLinkForest<I: IncrementalNca = Multilevel> {
    inner: LinkForest<I>,
    involved: Vec<bool>,
    involved_list: Vec<u32>,
    /// `m′`: links and queries since the first link.
    m: u64,
    started: bool,
    ops: u64,
    reorgs: Vec<ReorgEvent>,
    reorg_work: u64,
    /// Subtree adds in finished periods.
    eta_before: u64,
    work_before: u64,
}

impl AdaptiveLinkForest<Multilevel> {
    pub fn linear(max_n: u32) -> Result<Self> {
        let table = Arc::new(AckermannTable::new(max_n as u64));
        Self::new(LevelConfig::linear(max_n), table)
    }
}

impl<I: IncrementalNca> AdaptiveLinkForest<I> {
    pub fn new(sub: I::Config, table: Arc<AckermannTable>) -> Result<Self> {
        Ok(AdaptiveLinkForest {
            inner: LinkForest::new(1, sub, table)?,
            involved: Vec::new(),
            involved_list: Vec::new(),
            m: 0,
            started: false,
            ops: 0,
            reorgs: Vec::new(),
            reorg_work: 0,
            eta_before: 0,
            work_before: 0,
        })
    }

    pub fn inner(&self) -> &LinkForest<I> {
        &self.inner
    }

    /// The current `ℓ`.
    pub fn level(&self) -> u32 {
        self.inner.levels()
    }

    pub fn reorgs(&self) -> &[ReorgEvent] {
        &self.reorgs
    }

    /// `n′`: nodes involved in some link.
    pub fn n_involved(&self) -> u64 {
        self.involved_list.len() as u64
    }

    pub fn m_counted(&self) -> u64 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    /// Counters over all periods; `work` includes rebuilds.
    pub fn stats(&self) -> LinkStats {
        let mut s = self.inner.stats();
        s.eta += self.eta_before;
        s.work += self.work_before + self.reorg_work;
        s
    }

    pub fn arena_cells(&self) -> u64 {
        self.inner.arena_cells()
    }

    /// Subtree adds within the current period.
    pub fn period_eta(&self) -> u64 {
        self.inner.stats().eta
    }

    pub fn make_node(&mut self) -> u32 {
        self.involved.push(false);
        self.inner.make_node()
    }

    fn involve(&mut self, v: u32) {
        if !std::mem::replace(&mut self.involved[v as usize], true) {
            self.involved_list.push(v);
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.m += 1;
        let n = self.n_involved();
        let want = self.inner.table().alpha(self.m, n);
        let l = self.level();
        if want > l || want + 1 < l {
            let before = self.inner.stats();
            self.eta_before += before.eta;
            self.work_before += before.work;
            self.inner.reorganize(want, &self.involved_list)?;
            let after = self.inner.stats();
            self.reorg_work += after.work - before.work;
            // Rebuild adds belong to the rebuild, not to the new period.
            self.inner.stats.eta = 0;
            self.inner.stats.work = before.work;
            self.work_before -= before.work;
            self.reorgs.push(ReorgEvent { op: self.ops, from: l, to: want, n, m: self.m });
        }
        Ok(())
    }

    pub fn link(&mut self, x: u32, y: u32) -> Result<()> {
        self.ops += 1;
        if self.inner.parent(y).is_none() && (x as usize) < self.len() {
            self.involve(x);
            self.involve(y);
            self.started = true;
            self.tick()?;
        }
        self.inner.link(x, y)
    }

    pub fn ca_steps(&mut self, x: u32, y: u32) -> Result<(Option<CaTriple<u32>>, u32)> {
        self.ops += 1;
        if self.started {
            self.tick()?;
        }
        self.inner.ca_steps(x, y)
    }

    pub fn ca(&mut self, x: u32, y: u32) -> Result<Option<CaTriple<u32>>> {
        Ok(self.ca_steps(x, y)?.0)
    }

    pub fn find_root(&self, x: u32) -> Result<u32> {
        self.inner.find_root(x)
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        self.inner.check()
    }
}
