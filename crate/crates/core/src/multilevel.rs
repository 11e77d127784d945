//! Multilevel incremental trees: microset subtrees on the upper levels,
//! contracted level by level onto an [`IncrementalTree`] at level 1.

use std::sync::Arc;

use crate::error::{NcaError, Result};
use crate::fat_preorder::{FatContext, NONE};
use crate::forest::{reroot_combine, CaProvider, CaTriple};
use crate::incremental::{IncStats, IncrementalNca, IncrementalTree};
use crate::microset::{MicrosetPool, MAX_MU};
use crate::numeric::{ceil_log2, floor_log2};

/// Number of levels and subtree capacities. Level 1 is unbounded.
#[derive(Debug, Clone)]
pub struct LevelConfig {
    /// `mu[ℓ]` for `ℓ ∈ 2..=L`; `mu[0]` and `mu[1]` are unused.
    mu: Vec<u32>,
    fat: Arc<FatContext>,
}

impl LevelConfig {
    /// `mus` lists `µ_L, µ_{L−1}, …, µ_2`.
    pub fn new(mus: &[u32], max_n: u32) -> Result<Self> {
        if let Some(&bad) = mus.iter().find(|&&m| !(2..=MAX_MU).contains(&m)) {
            return Err(NcaError::Config(format!("subtree size {bad} outside 2..=63")));
        }
        let mut mu = vec![0, 0];
        mu.extend(mus.iter().rev());
        let fat = FatContext::new(crate::fat_preorder::FatParams::dynamic_default(), max_n)?;
        Ok(LevelConfig { mu, fat })
    }

    /// Three levels with `µ₃ = µ₂ = ⌈log n⌉`.
    pub fn linear(max_n: u32) -> Self {
        let mu = ceil_log2(max_n as u64).clamp(2, MAX_MU);
        Self::new(&[mu, mu], max_n).expect("linear configuration is valid")
    }

    /// Two levels with `µ = ⌊log n⌋`.
    pub fn edmonds(max_n: u32) -> Self {
        let mu = floor_log2(max_n as u64).clamp(2, MAX_MU);
        Self::new(&[mu], max_n).expect("two-level configuration is valid")
    }

    pub fn levels(&self) -> u32 {
        (self.mu.len() - 1).max(1) as u32
    }

    pub fn mu(&self, level: u32) -> Option<u32> {
        (level >= 2).then(|| self.mu[level as usize])
    }

    pub fn max_n(&self) -> u32 {
        self.fat.max_n
    }
}

#[derive(Debug, Clone)]
struct Level {
    parent: Vec<u32>,
    /// Root of the subtree one level up that this node contracts.
    down: Vec<u32>,
    sub_root: Vec<u32>,
    /// Contraction node one level down, once the subtree is full.
    sub_up: Vec<u32>,
    pool: Option<MicrosetPool>,
}

impl Level {
    fn new(mu: Option<u32>) -> Self {
        Level {
            parent: Vec::new(),
            down: Vec::new(),
            sub_root: Vec::new(),
            sub_up: Vec::new(),
            pool: mu.map(MicrosetPool::new),
        }
    }

    #[inline]
    fn pool(&self) -> &MicrosetPool {
        self.pool.as_ref().unwrap()
    }

    #[inline]
    fn sub(&self, x: u32) -> u32 {
        self.pool().set_of(x)
    }
}

/// An `L`-level incremental tree.
#[derive(Debug, Clone)]
pub struct Multilevel {
    cfg: LevelConfig,
    levels: Vec<Level>,
    base: Option<IncrementalTree>,
    rho: u32,
    adds: u64,
    work: u64,
}

impl Multilevel {
    pub fn config(&self) -> &LevelConfig {
        &self.cfg
    }

    pub fn level_len(&self, l: u32) -> usize {
        self.levels[l as usize].parent.len()
    }

    /// The level-1 incremental tree, once some subtree chain reaches it.
    pub fn base(&self) -> Option<&IncrementalTree> {
        self.base.as_ref()
    }

    fn unique_node(&mut self, l: u32) -> Result<u32> {
        let lv = &mut self.levels[l as usize];
        debug_assert!(lv.parent.is_empty());
        lv.parent.push(NONE);
        lv.down.push(NONE);
        if l == 1 {
            self.base = Some(IncrementalTree::from_context(self.cfg.fat.clone())?);
        } else {
            lv.pool.as_mut().unwrap().new_set(0);
            lv.sub_root.push(0);
            lv.sub_up.push(NONE);
        }
        self.work += 1;
        Ok(0)
    }

    /// Routine `a`: adds a new `l`-node under `x`.
    fn add(&mut self, l: u32, x: u32) -> Result<u32> {
        if l == 1 {
            let base = self.base.as_mut().expect("level 1 exists below a full subtree");
            let before = base.stats().work;
            let y = base.add_leaf(x)?;
            self.work += base.stats().work - before;
            let lv = &mut self.levels[1];
            lv.parent.push(x);
            lv.down.push(NONE);
            debug_assert_eq!(y as usize + 1, lv.parent.len());
            return Ok(y);
        }
        let lv = &mut self.levels[l as usize];
        let y = lv.parent.len() as u32;
        lv.parent.push(x);
        lv.down.push(NONE);
        let pool = lv.pool.as_mut().unwrap();
        let k = pool.set_of(x);
        self.work += 1;
        if pool.is_full(k) {
            pool.new_set(y);
            lv.sub_root.push(y);
            lv.sub_up.push(NONE);
            return Ok(y);
        }
        pool.add_leaf(x, y);
        if !pool.is_full(k) {
            return Ok(y);
        }
        let r = lv.sub_root[k as usize];
        let w = lv.parent[r as usize];
        let z = if w == NONE {
            self.unique_node(l - 1)?
        } else {
            let lv = &self.levels[l as usize];
            let wz = lv.sub_up[lv.sub(w) as usize];
            self.add(l - 1, wz)?
        };
        self.levels[l as usize].sub_up[k as usize] = z;
        self.levels[l as usize - 1].down[z as usize] = r;
        Ok(y)
    }

    /// Routine `c`: characteristic ancestors of two `l`-nodes.
    fn c(&self, l: u32, x: u32, y: u32, steps: &mut u32) -> CaTriple<u32> {
        if l == 1 {
            let (t, s) = self.base.as_ref().unwrap().ca_physical(x, y);
            *steps += s;
            return t;
        }
        let lv = &self.levels[l as usize];
        let pool = lv.pool();
        let (kx, ky) = (pool.set_of(x), pool.set_of(y));
        if kx == ky {
            let (t, s) = pool.ca_steps(x, y);
            *steps += s;
            return t;
        }
        let lift = |z: u32, k: u32| -> (u32, u32) {
            if pool.is_full(k) {
                (z, NONE)
            } else {
                let r = lv.sub_root[k as usize];
                (lv.parent[r as usize], r)
            }
        };
        let (x1, rx) = lift(x, kx);
        let (y1, ry) = lift(y, ky);
        *steps += 2;
        let ux = lv.sub_up[pool.set_of(x1) as usize];
        let uy = lv.sub_up[pool.set_of(y1) as usize];
        let t = self.c(l - 1, ux, uy, steps);
        let down = &self.levels[l as usize - 1].down;
        let x2 = if t.ax != t.a { lv.parent[down[t.ax as usize] as usize] } else { x1 };
        let y2 = if t.ay != t.a { lv.parent[down[t.ay as usize] as usize] } else { y1 };
        let (mut b, s) = pool.ca_steps(x2, y2);
        *steps += s + 2;
        if b.ax == b.a && t.ax != t.a {
            b.ax = down[t.ax as usize];
        }
        if b.ay == b.a && t.ay != t.a {
            b.ay = down[t.ay as usize];
        }
        if rx != NONE && b.a == x1 {
            b.ax = rx;
        }
        if ry != NONE && b.a == y1 {
            b.ay = ry;
        }
        b
    }

    /// Characteristic ancestors in the physical rooting.
    pub fn ca_physical(&self, x: u32, y: u32) -> (CaTriple<u32>, u32) {
        let mut steps = 0;
        let t = self.c(self.cfg.levels(), x, y, &mut steps);
        (t, steps)
    }

    /// Physical parent of a top-level node.
    pub fn parent_of(&self, x: u32) -> Option<u32> {
        let p = self.levels[self.cfg.levels() as usize].parent[x as usize];
        (p != NONE).then_some(p)
    }

    /// Checks the frontier rule, contraction consistency and level sizes.
    pub fn check(&self) -> std::result::Result<(), String> {
        let top = self.cfg.levels();
        let n = self.len() as u64;
        for l in (2..=top).rev() {
            let lv = &self.levels[l as usize];
            let pool = lv.pool();
            let mut full = 0usize;
            for k in 0..lv.sub_root.len() {
                let r = lv.sub_root[k];
                let up = lv.sub_up[k];
                if pool.set_of(r) != k as u32 {
                    return Err(format!("level {l}: subtree {k} root mismatch"));
                }
                if pool.is_full(k as u32) {
                    full += 1;
                    if up == NONE || self.levels[l as usize - 1].down[up as usize] != r {
                        return Err(format!("level {l}: full subtree {k} lacks its contraction"));
                    }
                    let w = lv.parent[r as usize];
                    let lower = &self.levels[l as usize - 1];
                    let want = if w == NONE { NONE } else { lv.sub_up[lv.sub(w) as usize] };
                    if lower.parent[up as usize] != want {
                        return Err(format!("level {l}: contraction parent of subtree {k}"));
                    }
                } else if up != NONE {
                    return Err(format!("level {l}: nonfull subtree {k} has a contraction"));
                }
            }
            let lower_len = if l == 2 {
                self.base.as_ref().map_or(0, |b| b.len())
            } else {
                self.levels[l as usize - 1].parent.len()
            };
            if lower_len != full {
                return Err(format!("level {}: {} nodes for {} full subtrees", l - 1, lower_len, full));
            }
            for z in 0..lv.parent.len() {
                let x = lv.parent[z];
                if x != NONE && !pool.is_full(lv.sub(x)) && lv.sub(x) != lv.sub(z as u32) {
                    return Err(format!("level {l}: frontier rule fails at {z}"));
                }
            }
            let prod: u64 = (l..=top).map(|i| self.cfg.mu[i as usize] as u64).product();
            if (lower_len as u64) * prod > n {
                return Err(format!("level {}: too many nodes", l - 1));
            }
        }
        Ok(())
    }
}

impl IncrementalNca for Multilevel {
    type Config = LevelConfig;

    fn new(cfg: &LevelConfig) -> Result<Self> {
        let top = cfg.levels();
        let levels = (0..=top).map(|l| Level::new(cfg.mu(l))).collect();
        let mut m = Multilevel { cfg: cfg.clone(), levels, base: None, rho: 0, adds: 0, work: 0 };
        m.unique_node(top)?;
        Ok(m)
    }

    fn add_leaf(&mut self, x: u32) -> Result<u32> {
        if self.len() >= self.cfg.max_n() as usize {
            return Err(NcaError::Capacity(format!(
                "multilevel tree is configured for at most {} nodes",
                self.cfg.max_n()
            )));
        }
        if x as usize >= self.len() {
            return Err(NcaError::UnknownNode(x));
        }
        let y = self.add(self.cfg.levels(), x)?;
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
            return self.ca_physical(x, y);
        }
        let (xy, s1) = self.ca_physical(x, y);
        let (xz, s2) = self.ca_physical(x, self.rho);
        let (yz, s3) = self.ca_physical(y, self.rho);
        (reroot_combine(self, xy, xz, yz), s1 + s2 + s3)
    }

    fn root(&self) -> u32 {
        self.rho
    }

    fn len(&self) -> usize {
        self.levels[self.cfg.levels() as usize].parent.len()
    }

    fn stats(&self) -> IncStats {
        let mut s = IncStats {
            nodes: self.len() as u64,
            adds: self.adds,
            work: self.work,
            ..IncStats::default()
        };
        for lv in &self.levels {
            if let Some(p) = &lv.pool {
                s.arena_used += p.arena().used() as u64;
                s.arena_live += p.arena().total_live() as u64;
            }
        }
        if let Some(b) = &self.base {
            let bs = b.stats();
            s.recompressions = bs.recompressions;
            s.table_writes = bs.table_writes;
            s.arena_used += bs.arena_used;
            s.arena_live += bs.arena_live;
        }
        s
    }
}

impl CaProvider for Multilevel {
    type Node = u32;

    fn ca(&self, x: u32, y: u32) -> Option<CaTriple<u32>> {
        Some(self.ca_steps(x, y).0)
    }

    fn parent(&self, x: u32) -> Option<u32> {
        self.parent_of(x)
    }
}
