//! Nearest common ancestors under `link`, built from staged multilevel trees
//! whose subtrees are incremental trees.

pub mod ackermann;
pub mod adaptive;

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{NcaError, Result};
use crate::fat_preorder::NONE;
use crate::forest::CaTriple;
use crate::incremental::IncrementalNca;
use crate::multilevel::{LevelConfig, Multilevel};

pub use ackermann::AckermannTable;
pub use adaptive::{AdaptiveLinkForest, ReorgEvent};

/// Which branch of the link routine ran, and on which level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseEvent {
    pub level: u32,
    pub case: u8,
}

/// The subtree holding a node, as seen from that node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubtreeInfo {
    pub id: u32,
    /// The node's id inside the subtree's incremental tree.
    pub local: u32,
    pub size: usize,
    /// Local id of the subtree's root cursor.
    pub cursor: u32,
    pub stage: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LinkStats {
    pub links: u64,
    pub cas: u64,
    /// `add_leaf` and `add_root` operations on subtrees, counting the root of
    /// each new subtree.
    pub eta: u64,
    pub cases: [u64; 4],
    pub subtrees: u64,
    /// Primitive steps: link and query descents plus the work reported by the
    /// subtree engines.
    pub work: u64,
    pub max_query_steps: u32,
}

#[derive(Debug, Clone)]
struct Hat<I> {
    inc: I,
    /// Local id to level node.
    nodes: Vec<u32>,
    /// Contraction node one level down, `NONE` on level 1.
    up: u32,
    stage: u32,
}

#[derive(Debug, Clone, Default)]
struct Level {
    parent: Vec<u32>,
    first_child: Vec<u32>,
    next_sibling: Vec<u32>,
    /// `s(r)`, meaningful at roots.
    size: Vec<u32>,
    hat: Vec<u32>,
    local: Vec<u32>,
    /// Subtree one level up contracted to this node.
    down_hat: Vec<u32>,
}

impl Level {
    fn push(&mut self) -> u32 {
        let v = self.parent.len() as u32;
        self.parent.push(NONE);
        self.first_child.push(NONE);
        self.next_sibling.push(NONE);
        self.size.push(1);
        self.hat.push(NONE);
        self.local.push(NONE);
        self.down_hat.push(NONE);
        v
    }

    fn attach(&mut self, x: u32, y: u32) {
        self.parent[y as usize] = x;
        self.next_sibling[y as usize] = self.first_child[x as usize];
        self.first_child[x as usize] = y;
    }

    fn children(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        let first = self.first_child[v as usize];
        std::iter::successors((first != NONE).then_some(first), |&c| {
            let next = self.next_sibling[c as usize];
            (next != NONE).then_some(next)
        })
    }

    /// Breadth-first order of the tree below `r`, skipping the subtree of `skip`.
    fn bfs(&self, r: u32, skip: u32, out: &mut Vec<u32>) {
        out.clear();
        let mut q = VecDeque::from([r]);
        while let Some(v) = q.pop_front() {
            out.push(v);
            q.extend(self.children(v).filter(|&c| c != skip));
        }
    }
}

/// Characteristic ancestors by walking parent pointers; for trees below four
/// nodes.
fn walk_ca(parent: &[u32], x: u32, y: u32) -> CaTriple<u32> {
    let path = |mut v: u32| {
        let mut p = vec![v];
        while parent[v as usize] != NONE {
            v = parent[v as usize];
            p.push(v);
        }
        p.reverse();
        p
    };
    let (px, py) = (path(x), path(y));
    let d = px.iter().zip(&py).take_while(|(a, b)| a == b).count();
    let a = px[d - 1];
    CaTriple::new(a, *px.get(d).unwrap_or(&a), *py.get(d).unwrap_or(&a))
}

/// Link-tree engine with a fixed number of levels.
#[derive(Debug, Clone)]
pub struct LinkForest<I: IncrementalNca = Multilevel> {
    top: u32,
    sub: I::Config,
    table: Arc<AckermannTable>,
    levels: Vec<Level>,
    hats: Vec<Vec<Hat<I>>>,
    stats: LinkStats,
    trace_cases: bool,
    events: Vec<CaseEvent>,
    scratch: Vec<u32>,
}

impl LinkForest<Multilevel> {
    /// `levels` levels over linear-time multilevel subtrees sized for `max_n`.
    pub fn linear(levels: u32, max_n: u32) -> Result<Self> {
        let table = Arc::new(AckermannTable::new(max_n as u64));
        Self::new(levels, LevelConfig::linear(max_n), table)
    }
}

impl<I: IncrementalNca> LinkForest<I> {
    pub fn new(levels: u32, sub: I::Config, table: Arc<AckermannTable>) -> Result<Self> {
        if levels == 0 {
            return Err(NcaError::Config("at least one level is required".into()));
        }
        Ok(LinkForest {
            top: levels,
            sub,
            table,
            levels: vec![Level::default(); levels as usize + 1],
            hats: (0..=levels).map(|_| Vec::new()).collect(),
            stats: LinkStats::default(),
            trace_cases: false,
            events: Vec::new(),
            scratch: Vec::new(),
        })
    }

    pub fn levels(&self) -> u32 {
        self.top
    }

    pub fn table(&self) -> &Arc<AckermannTable> {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.levels[self.top as usize].parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stats(&self) -> LinkStats {
        self.stats
    }

    /// Arena cells held by every subtree ever built, abandoned ones included.
    pub fn arena_cells(&self) -> u64 {
        self.hats.iter().flatten().map(|h| h.inc.stats().arena_used).sum()
    }

    /// Records every case taken by subsequent links.
    pub fn trace_cases(&mut self, on: bool) {
        self.trace_cases = on;
    }

    /// Cases taken since the last call.
    pub fn take_events(&mut self) -> Vec<CaseEvent> {
        std::mem::take(&mut self.events)
    }

    pub fn make_node(&mut self) -> u32 {
        self.levels[self.top as usize].push()
    }

    pub fn parent(&self, x: u32) -> Option<u32> {
        let p = self.levels[self.top as usize].parent[x as usize];
        (p != NONE).then_some(p)
    }

    /// Stage of the tree holding level-`l` node `x`.
    pub fn stage(&self, l: u32, x: u32) -> u32 {
        match self.levels[l as usize].hat[x as usize] {
            NONE => 0,
            h => self.hats[l as usize][h as usize].stage,
        }
    }

    /// Stage of the link tree holding `x`.
    pub fn stage_of(&self, x: u32) -> u32 {
        self.stage(self.top, x)
    }

    /// `None` for nodes of stage 0 trees.
    pub fn subtree_info(&self, l: u32, x: u32) -> Option<SubtreeInfo> {
        let lv = &self.levels[l as usize];
        let h = lv.hat[x as usize];
        (h != NONE).then(|| {
            let hat = &self.hats[l as usize][h as usize];
            SubtreeInfo {
                id: h,
                local: lv.local[x as usize],
                size: hat.nodes.len(),
                cursor: hat.inc.root(),
                stage: hat.stage,
            }
        })
    }

    /// Root of the level-`l` tree holding `x`.
    pub fn find_root_on(&self, l: u32, x: u32) -> u32 {
        self.find_root_at(l, x)
    }

    /// Size of the level-`l` tree rooted at `r`.
    pub fn tree_size(&self, l: u32, r: u32) -> u32 {
        self.levels[l as usize].size[r as usize]
    }

    /// Contraction node of the subtree holding level-`l` node `x`.
    pub fn contraction(&self, l: u32, x: u32) -> Option<u32> {
        let h = self.levels[l as usize].hat[x as usize];
        (h != NONE && l > 1).then(|| self.hats[l as usize][h as usize].up)
    }

    /// Number of nodes on level `l`, including abandoned ones.
    pub fn level_len(&self, l: u32) -> usize {
        self.levels[l as usize].parent.len()
    }

    fn check_node(&self, x: u32) -> Result<()> {
        if (x as usize) < self.len() {
            Ok(())
        } else {
            Err(NcaError::UnknownNode(x))
        }
    }

    #[inline]
    fn hat_root(&self, l: u32, h: u32) -> u32 {
        let hat = &self.hats[l as usize][h as usize];
        hat.nodes[hat.inc.root() as usize]
    }

    fn find_root_at(&self, l: u32, x: u32) -> u32 {
        let lv = &self.levels[l as usize];
        let h = lv.hat[x as usize];
        if h == NONE {
            let mut v = x;
            while lv.parent[v as usize] != NONE {
                v = lv.parent[v as usize];
            }
            return v;
        }
        let r = self.hat_root(l, h);
        if lv.parent[r as usize] == NONE {
            return r;
        }
        debug_assert!(l > 1, "a positive stage on level 1 has one subtree");
        let below = self.find_root_at(l - 1, self.hats[l as usize][h as usize].up);
        self.hat_root(l, self.levels[l as usize - 1].down_hat[below as usize])
    }

    /// Root of the link tree containing `x`.
    pub fn find_root(&self, x: u32) -> Result<u32> {
        self.check_node(x)?;
        Ok(self.find_root_at(self.top, x))
    }

    /// Makes the root `y` a child of `x`.
    pub fn link(&mut self, x: u32, y: u32) -> Result<()> {
        self.check_node(x)?;
        self.check_node(y)?;
        if self.parent(y).is_some() {
            return Err(NcaError::NotARoot(y));
        }
        let r = self.find_root_at(self.top, x);
        if r == y {
            return Err(NcaError::SameTree);
        }
        self.stats.links += 1;
        self.l(r, x, y, self.top)
    }

    fn event(&mut self, level: u32, case: u8) {
        self.stats.cases[case as usize - 1] += 1;
        if self.trace_cases {
            self.events.push(CaseEvent { level, case });
        }
    }

    fn enter(&mut self, l: u32, h: u32, v: u32, local: u32) {
        let hat = &mut self.hats[l as usize][h as usize];
        debug_assert_eq!(hat.nodes.len() as u32, local);
        hat.nodes.push(v);
        let lv = &mut self.levels[l as usize];
        lv.hat[v as usize] = h;
        lv.local[v as usize] = local;
        self.stats.eta += 1;
    }

    /// Builds one subtree holding the whole level-`l` tree under `r` at stage
    /// `stage`, plus a one-node tree below it when `l > 1`.
    fn build_hat(&mut self, l: u32, r: u32, stage: u32) -> Result<()> {
        let mut order = std::mem::take(&mut self.scratch);
        self.levels[l as usize].bfs(r, NONE, &mut order);
        let h = self.hats[l as usize].len() as u32;
        let inc = I::new(&self.sub)?;
        self.hats[l as usize].push(Hat { inc, nodes: Vec::with_capacity(order.len()), up: NONE, stage });
        self.stats.subtrees += 1;
        self.enter(l, h, r, 0);
        for &v in &order[1..] {
            let p = self.levels[l as usize].parent[v as usize];
            let pl = self.levels[l as usize].local[p as usize];
            let local = self.hats[l as usize][h as usize].inc.add_leaf(pl)?;
            self.enter(l, h, v, local);
        }
        self.stats.work += self.hats[l as usize][h as usize].inc.stats().work + order.len() as u64;
        self.scratch = order;
        if l > 1 {
            let z = self.levels[l as usize - 1].push();
            self.levels[l as usize - 1].down_hat[z as usize] = h;
            self.hats[l as usize][h as usize].up = z;
        }
        Ok(())
    }

    /// Adds the tree under `from` (skipping `skip`) to subtree `h` by
    /// `add_leaf`, leaving nodes already in `h` alone.
    fn absorb(&mut self, l: u32, h: u32, from: u32, skip: u32) -> Result<()> {
        let mut order = std::mem::take(&mut self.scratch);
        self.levels[l as usize].bfs(from, skip, &mut order);
        let before = self.hats[l as usize][h as usize].inc.stats().work;
        for &v in &order {
            let lv = &self.levels[l as usize];
            if lv.hat[v as usize] == h {
                continue;
            }
            let pl = lv.local[lv.parent[v as usize] as usize];
            let local = self.hats[l as usize][h as usize].inc.add_leaf(pl)?;
            self.enter(l, h, v, local);
        }
        let after = self.hats[l as usize][h as usize].inc.stats().work;
        self.stats.work += after - before + order.len() as u64;
        self.scratch = order;
        Ok(())
    }

    fn l(&mut self, r: u32, x: u32, y: u32, l: u32) -> Result<()> {
        let li = l as usize;
        let lv = &mut self.levels[li];
        lv.attach(x, y);
        lv.size[r as usize] += lv.size[y as usize];
        let s = lv.size[r as usize] as u64;
        let (sx, sy) = (self.stage(l, x), self.stage(l, y));
        let sigma = sx.max(sy);
        self.stats.work += 1;
        if self.table.stage_floor(l, sigma + 1).is_some_and(|f| s >= f) {
            self.event(l, 1);
            debug_assert!(self.table.stage_floor(l, sigma + 2).is_none_or(|f| s < f));
            self.build_hat(l, r, sigma + 1)
        } else if sx > sy {
            self.event(l, 2);
            let h = self.levels[li].hat[x as usize];
            self.absorb(l, h, y, NONE)
        } else if sx < sy {
            self.event(l, 3);
            let h = self.levels[li].hat[y as usize];
            debug_assert_eq!(self.hat_root(l, h), y);
            let before = self.hats[li][h as usize].inc.stats().work;
            let mut v = x;
            while v != NONE {
                let local = self.hats[li][h as usize].inc.add_root()?;
                self.enter(l, h, v, local);
                v = self.levels[li].parent[v as usize];
            }
            let after = self.hats[li][h as usize].inc.stats().work;
            self.stats.work += after - before;
            self.absorb(l, h, r, y)
        } else {
            self.event(l, 4);
            if sigma == 0 {
                debug_assert!(s < 4);
                return Ok(());
            }
            assert!(l > 1, "equal positive stages on level 1 always reach the next stage");
            let up = |v: u32| {
                let h = self.levels[li].hat[v as usize];
                self.hats[li][h as usize].up
            };
            let (r1, x1, y1) = (up(r), up(x), up(y));
            self.l(r1, x1, y1, l - 1)
        }
    }

    fn c(&self, l: u32, x: u32, y: u32, steps: &mut u32) -> CaTriple<u32> {
        let li = l as usize;
        let lv = &self.levels[li];
        let (hx, hy) = (lv.hat[x as usize], lv.hat[y as usize]);
        *steps += 1;
        if hx == NONE {
            *steps += 3;
            return walk_ca(&lv.parent, x, y);
        }
        let local = |v: u32| lv.local[v as usize];
        if hx == hy {
            let hat = &self.hats[li][hx as usize];
            let (t, s) = hat.inc.ca_steps(local(x), local(y));
            *steps += s;
            return t.map(|v| hat.nodes[v as usize]);
        }
        let hats = &self.hats[li];
        let t = self.c(l - 1, hats[hx as usize].up, hats[hy as usize].up, steps);
        let down = &self.levels[li - 1].down_hat;
        let sub_root = |z: u32| self.hat_root(l, down[z as usize]);
        let x2 = if t.ax != t.a { lv.parent[sub_root(t.ax) as usize] } else { x };
        let y2 = if t.ay != t.a { lv.parent[sub_root(t.ay) as usize] } else { y };
        let h = lv.hat[x2 as usize];
        debug_assert_eq!(h, lv.hat[y2 as usize]);
        let hat = &hats[h as usize];
        let (b, s) = hat.inc.ca_steps(local(x2), local(y2));
        *steps += s + 2;
        let mut b = b.map(|v| hat.nodes[v as usize]);
        if b.ax == b.a && t.ax != t.a {
            b.ax = sub_root(t.ax);
        }
        if b.ay == b.a && t.ay != t.a {
            b.ay = sub_root(t.ay);
        }
        b
    }

    /// Characteristic ancestors and the steps spent, `None` across trees.
    pub fn ca_steps(&mut self, x: u32, y: u32) -> Result<(Option<CaTriple<u32>>, u32)> {
        self.check_node(x)?;
        self.check_node(y)?;
        self.stats.cas += 1;
        let (rx, ry) = (self.find_root_at(self.top, x), self.find_root_at(self.top, y));
        let mut steps = 2 * self.top;
        let t = (rx == ry).then(|| self.c(self.top, x, y, &mut steps));
        self.stats.work += steps as u64;
        self.stats.max_query_steps = self.stats.max_query_steps.max(steps);
        Ok((t, steps))
    }

    pub fn ca(&mut self, x: u32, y: u32) -> Result<Option<CaTriple<u32>>> {
        Ok(self.ca_steps(x, y)?.0)
    }

    /// Rebuilds the trees through `nodes` for `levels` levels, each as a single
    /// subtree at its stage. Every node outside `nodes` must be a singleton.
    pub(crate) fn reorganize(&mut self, levels: u32, nodes: &[u32]) -> Result<()> {
        let top = std::mem::take(&mut self.levels[self.top as usize]);
        self.top = levels;
        self.levels = vec![Level::default(); levels as usize + 1];
        self.hats = (0..=levels).map(|_| Vec::new()).collect();
        self.levels[levels as usize] = top;
        for &v in nodes {
            let lv = &mut self.levels[levels as usize];
            lv.hat[v as usize] = NONE;
            lv.local[v as usize] = NONE;
        }
        self.stats.work += nodes.len() as u64;
        for &v in nodes {
            let lv = &self.levels[levels as usize];
            if lv.parent[v as usize] != NONE {
                continue;
            }
            let s = lv.size[v as usize] as u64;
            let stage = self.table.stage_of(levels, s);
            if stage > 0 {
                self.build_hat(levels, v, stage)?;
            }
        }
        Ok(())
    }

    /// Checks the stage rule, subtree sizes and counts, and contraction
    /// consistency on every level, for all trees reachable from the top.
    pub fn check(&self) -> std::result::Result<(), String> {
        let top = &self.levels[self.top as usize];
        let mut order = Vec::new();
        for r in 0..top.parent.len() as u32 {
            if top.parent[r as usize] == NONE {
                self.check_tree(self.top, r, &mut order)?;
            }
        }
        Ok(())
    }

    fn check_tree(&self, l: u32, r: u32, order: &mut Vec<u32>) -> std::result::Result<(), String> {
        let li = l as usize;
        let lv = &self.levels[li];
        lv.bfs(r, NONE, order);
        let n = order.len() as u64;
        if lv.size[r as usize] as u64 != n {
            return Err(format!("level {l}: size of {r} is {} not {n}", lv.size[r as usize]));
        }
        let sigma = self.table.stage_of(l, n);
        let mut count: std::collections::HashMap<u32, u64> = Default::default();
        for &v in order.iter() {
            if self.stage(l, v) != sigma {
                return Err(format!("level {l}: node {v} has stage {} not {sigma}", self.stage(l, v)));
            }
            if sigma > 0 {
                *count.entry(lv.hat[v as usize]).or_default() += 1;
            }
        }
        if sigma == 0 {
            return Ok(());
        }
        let floor = self.table.stage_floor(l, sigma).unwrap();
        for (&h, &c) in &count {
            let hat = &self.hats[li][h as usize];
            if c < floor || hat.nodes.len() as u64 != c || hat.inc.len() as u64 != c {
                return Err(format!("level {l}: subtree {h} has {c} nodes, floor {floor}"));
            }
            let root = self.hat_root(l, h);
            let p = lv.parent[root as usize];
            if p != NONE && lv.hat[p as usize] == h {
                return Err(format!("level {l}: subtree {h} root {root} is not topmost"));
            }
            for &v in &hat.nodes {
                let p = lv.parent[v as usize];
                if v != root && lv.hat[p as usize] != h {
                    return Err(format!("level {l}: subtree {h} is not connected at {v}"));
                }
            }
        }
        if (count.len() as u64) * floor > n {
            return Err(format!("level {l}: {} subtrees for {n} nodes", count.len()));
        }
        if l == 1 {
            return if count.len() == 1 { Ok(()) } else { Err("level 1 tree has several subtrees".into()) };
        }
        let lower = &self.levels[li - 1];
        for &h in count.keys() {
            let hat = &self.hats[li][h as usize];
            let z = hat.up;
            if lower.down_hat[z as usize] != h {
                return Err(format!("level {l}: subtree {h} contraction does not round-trip"));
            }
            let p = lv.parent[self.hat_root(l, h) as usize];
            let want = if p == NONE { NONE } else { self.hats[li][lv.hat[p as usize] as usize].up };
            if lower.parent[z as usize] != want {
                return Err(format!("level {l}: contraction parent of subtree {h}"));
            }
        }
        let below = self.hats[li][lv.hat[r as usize] as usize].up;
        let mut sub_order = Vec::new();
        self.check_tree(l - 1, below, &mut sub_order)?;
        if sub_order.len() != count.len() {
            return Err(format!("level {}: tree has {} nodes for {} subtrees", l - 1, sub_order.len(), count.len()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{Forest, NodeId};
    use rand::{Rng, SeedableRng};

    fn forest(levels: u32, n: u32) -> LinkForest {
        let mut f = LinkForest::linear(levels, 4096).unwrap();
        for _ in 0..n {
            f.make_node();
        }
        f.trace_cases(true);
        f
    }

    #[test]
    fn two_singletons_take_trivial_combine() {
        for l in 1..=3 {
            let mut f = forest(l, 2);
            f.link(0, 1).unwrap();
            assert_eq!(f.take_events(), vec![CaseEvent { level: l, case: 4 }]);
            assert_eq!(f.stage_of(1), 0);
            assert_eq!(f.ca(1, 0).unwrap(), Some(CaTriple::new(0, 1, 0)));
            assert_eq!(f.find_root(1).unwrap(), 0);
        }
    }

    #[test]
    fn singleton_is_its_own_root() {
        let f = forest(2, 3);
        assert_eq!(f.find_root(2).unwrap(), 2);
    }

    #[test]
    fn five_nodes_enter_stage_one() {
        for l in 1..=3 {
            let mut f = forest(l, 5);
            f.link(0, 1).unwrap();
            f.link(2, 3).unwrap();
            f.link(3, 4).unwrap();
            f.take_events();
            f.link(1, 2).unwrap();
            assert_eq!(f.take_events(), vec![CaseEvent { level: l, case: 1 }]);
            assert!((0..5).all(|v| f.stage_of(v) == 1));
            f.check().unwrap();
            if l > 1 {
                assert_eq!(f.level_len(l - 1), 1);
            }
        }
    }

    #[test]
    fn usage_errors() {
        let mut f = forest(2, 3);
        f.link(0, 1).unwrap();
        assert!(matches!(f.link(2, 1), Err(NcaError::NotARoot(1))));
        assert!(matches!(f.link(1, 0), Err(NcaError::SameTree)));
        assert_eq!(f.ca(0, 2).unwrap(), None);
    }

    #[test]
    fn higher_stage_absorbs_lower() {
        let mut f = forest(2, 7);
        for v in 1..5 {
            f.link(v - 1, v).unwrap();
        }
        f.take_events();
        // Stage 1 parent absorbs a stage 0 child tree.
        f.link(4, 5).unwrap();
        assert_eq!(f.take_events(), vec![CaseEvent { level: 2, case: 2 }]);
        // A stage 0 parent is added above a stage 1 root.
        f.link(6, 0).unwrap();
        assert_eq!(f.take_events(), vec![CaseEvent { level: 2, case: 3 }]);
        assert_eq!(f.find_root(3).unwrap(), 6);
        f.check().unwrap();
        let mut g = Forest::new();
        for _ in 0..7 {
            g.add_node();
        }
        for (x, y) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (6, 0)] {
            g.link(NodeId(x), NodeId(y)).unwrap();
        }
        for x in 0..7 {
            for y in 0..7 {
                let want = g.oracle_ca(NodeId(x), NodeId(y)).unwrap();
                assert_eq!(f.ca(x, y).unwrap().map(|t| t.map(NodeId)), want);
            }
        }
    }

    fn random_links(levels: u32, n: u32, seed: u64, sweep: bool) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut f = forest(levels, n);
        f.trace_cases(false);
        let mut g = Forest::new();
        for _ in 0..n {
            g.add_node();
        }
        let a = f.table().a_inv(levels, n as u64) as u64;
        for _ in 0..3 * n {
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            let ry = g.root_of(NodeId(y)).unwrap();
            if g.root_of(NodeId(x)).unwrap() != ry && rng.gen_bool(0.5) {
                f.link(x, ry.0).unwrap();
                g.link(NodeId(x), ry).unwrap();
                assert!(f.stats().eta <= 2 * n as u64 * a);
                if sweep {
                    f.check().unwrap();
                }
            } else {
                let want = g.oracle_ca(NodeId(x), NodeId(y)).unwrap();
                assert_eq!(f.ca(x, y).unwrap().map(|t| t.map(NodeId)), want, "x={x} y={y}");
                assert_eq!(f.find_root(x).unwrap(), g.root_of(NodeId(x)).unwrap().0);
            }
        }
    }

    #[test]
    fn random_links_match_oracle() {
        for levels in 1..=4 {
            random_links(levels, 300, levels as u64, true);
            random_links(levels, 1000, 10 + levels as u64, false);
        }
    }
}
