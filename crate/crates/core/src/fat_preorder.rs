//! Heavy-path compressed trees, fat preorder numbering, ancestor tables and
//! constant-time characteristic-ancestor queries.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::arena::{Arena, ArrayHandle};
use crate::error::{NcaError, Result};
use crate::forest::{CaProvider, CaTriple, Forest, NodeId};
use crate::numeric::{LogTable, Ordinal, Rational};

/// Null link in the per-node arrays.
pub const NONE: u32 = u32::MAX;
/// Ancestor-table entry meaning "no such ancestor".
pub const EPS: u32 = u32::MAX - 1;

/// Numbering parameters `(β, e, c)` and, for dynamic use, `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FatParams {
    pub beta: Rational,
    pub e: u32,
    pub c: u64,
    pub alpha: Option<Rational>,
}

impl FatParams {
    /// `e = β = 2`, `c = 4`.
    pub fn static_default() -> Self {
        FatParams { beta: Rational::from_int(2), e: 2, c: 4, alpha: None }
    }

    /// `α = 6/5`, `β = 10/7`, `e = 4`, `c = 5`.
    pub fn dynamic_default() -> Self {
        FatParams {
            beta: Rational { num: 10, den: 7 },
            e: 4,
            c: 5,
            alpha: Some(Rational { num: 6, den: 5 }),
        }
    }

    pub fn new(beta: Rational, e: u32, c: u64, alpha: Option<Rational>) -> Result<Self> {
        let p = FatParams { beta, e, c, alpha };
        p.validate()?;
        Ok(p)
    }

    /// Left side, middle and right side of `2/(β^{e−1}−1) ≤ c−2 ≤ β^e`.
    pub fn spacing_bounds(&self) -> (BigRational, BigRational, BigRational) {
        let b = self.beta.to_big();
        let one = BigRational::one();
        let be1: BigRational = Pow::pow(&b, self.e - 1);
        let left = BigRational::from_integer(2.into()) / (be1 - &one);
        let mid = BigRational::from_integer((self.c - 2).into());
        let right: BigRational = Pow::pow(&b, self.e);
        (left, mid, right)
    }

    /// Left side of `c((α−1/2)^e + 1/2^e) / (1 − 1/α^e) ≤ c − 2`, when `α` is set.
    pub fn growth_bound(&self) -> Option<BigRational> {
        let a = self.alpha?.to_big();
        let one = BigRational::one();
        let half = BigRational::new(1.into(), 2.into());
        let t1: BigRational = Pow::pow(&(&a - &half), self.e);
        let t2: BigRational = Pow::pow(&half, self.e);
        let ae: BigRational = Pow::pow(&a, self.e);
        let den = &one - &one / ae;
        let c = BigRational::from_integer(self.c.into());
        Some(c * (t1 + t2) / den)
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta.den == 0 || self.alpha.is_some_and(|a| a.den == 0) {
            return Err(NcaError::ZeroDenominator);
        }
        if self.beta.num <= self.beta.den {
            return Err(NcaError::Config("beta must exceed 1".into()));
        }
        if self.e < 2 || self.c < 3 {
            return Err(NcaError::Config("need e > 1 and c > 2".into()));
        }
        let (l, m, r) = self.spacing_bounds();
        if !(l <= m && m <= r) {
            return Err(NcaError::Config(format!("spacing inequality fails: {l} <= {m} <= {r}")));
        }
        if let Some(a) = self.alpha {
            let ab = a.to_big();
            let one = BigRational::one();
            if !(ab > one && ab < BigRational::new(3.into(), 2.into())) {
                return Err(NcaError::Config(format!("alpha {a} outside (1, 3/2)")));
            }
            let two = BigRational::from_integer(2.into());
            let want = &two / (&two * &ab - &one);
            if want != self.beta.to_big() {
                return Err(NcaError::Config(format!("beta must equal 2/(2 alpha - 1) = {want}")));
            }
            let g = self.growth_bound().unwrap();
            if g > m {
                return Err(NcaError::Config(format!("growth inequality fails: {g} > {m}")));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn pow_e(&self, s: u32) -> Ordinal {
        (s as Ordinal).pow(self.e)
    }

    /// Interval length `c·s^e`.
    #[inline]
    pub fn interval(&self, s: u32) -> Ordinal {
        self.c as Ordinal * self.pow_e(s)
    }
}

/// Parameters plus the shared log table, sized for trees of at most `max_n` nodes.
#[derive(Debug)]
pub struct FatContext {
    pub params: FatParams,
    pub log: LogTable,
    pub max_n: u32,
}

impl FatContext {
    pub fn new(params: FatParams, max_n: u32) -> Result<Arc<Self>> {
        params.validate()?;
        let max_n = max_n.max(1);
        let top = (max_n as u128)
            .checked_pow(params.e)
            .and_then(|v| v.checked_mul(params.c as u128))
            .filter(|&v| v < 1u128 << 127)
            .ok_or_else(|| {
                NcaError::Config(format!("c*n^e overflows 127 bits for n = {max_n}"))
            })?;
        let log = LogTable::new(params.beta, top)?;
        Ok(Arc::new(FatContext { params, log, max_n }))
    }

    pub fn static_default(max_n: u32) -> Arc<Self> {
        Self::new(FatParams::static_default(), max_n).expect("static parameters are valid")
    }

    pub fn dynamic_default(max_n: u32) -> Arc<Self> {
        Self::new(FatParams::dynamic_default(), max_n).expect("dynamic parameters are valid")
    }

    /// `⌊log_β(c·n^e)⌋ + 1` for the configured maximum.
    pub fn table_width(&self) -> usize {
        let top = self.params.interval(self.max_n);
        self.log.floor_log(top).expect("top lies inside the log table") as usize + 1
    }
}

/// Counters shared by the static and incremental engines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FatStats {
    pub recompressions: u64,
    pub renumbered: u64,
    pub table_writes: u64,
    pub work: u64,
}

/// A tree `T` together with a path partition, its compressed tree `D = C(T, 𝒫)`,
/// a fat preorder of `D` and per-node ancestor tables.
///
/// Node ids are local and dense; node 0 is the root of `T`.
#[derive(Debug, Clone)]
pub struct FatTree {
    ctx: Arc<FatContext>,
    tparent: Vec<u32>,
    first_child: Vec<u32>,
    last_child: Vec<u32>,
    next_sibling: Vec<u32>,
    depth: Vec<u32>,
    apex: Vec<bool>,
    path_child: Vec<u32>,
    dparent: Vec<u32>,
    s: Vec<u32>,
    sigma: Vec<u32>,
    pbar: Vec<Ordinal>,
    p: Vec<Ordinal>,
    q: Vec<Ordinal>,
    qbar: Vec<Ordinal>,
    qhi: Vec<Ordinal>,
    table: Vec<ArrayHandle>,
    tab_lo: Vec<u16>,
    tab_len: Vec<u16>,
    arena: Arena<u32>,
    reorgs: Vec<u32>,
    stats: FatStats,
    order: Vec<u32>,
    scratch: Vec<u32>,
    chain: Vec<u32>,
}

impl FatTree {
    /// A tree holding only its root, not yet numbered.
    pub fn with_root(ctx: Arc<FatContext>) -> Self {
        let mut t = FatTree {
            ctx,
            tparent: Vec::new(),
            first_child: Vec::new(),
            last_child: Vec::new(),
            next_sibling: Vec::new(),
            depth: Vec::new(),
            apex: Vec::new(),
            path_child: Vec::new(),
            dparent: Vec::new(),
            s: Vec::new(),
            sigma: Vec::new(),
            pbar: Vec::new(),
            p: Vec::new(),
            q: Vec::new(),
            qbar: Vec::new(),
            qhi: Vec::new(),
            table: Vec::new(),
            tab_lo: Vec::new(),
            tab_len: Vec::new(),
            arena: Arena::new(),
            reorgs: Vec::new(),
            stats: FatStats::default(),
            order: Vec::new(),
            scratch: Vec::new(),
            chain: Vec::new(),
        };
        t.push_node(NONE);
        t
    }

    pub fn ctx(&self) -> &Arc<FatContext> {
        &self.ctx
    }

    pub fn params(&self) -> &FatParams {
        &self.ctx.params
    }

    pub fn len(&self) -> usize {
        self.tparent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tparent.is_empty()
    }

    /// Appends a node under `parent` in `T` as a singleton path with D-parent set
    /// accordingly. Its numbers are assigned by a later [`FatTree::recompress`].
    pub fn push_node(&mut self, parent: u32) -> u32 {
        let y = self.tparent.len() as u32;
        self.tparent.push(parent);
        self.first_child.push(NONE);
        self.last_child.push(NONE);
        self.next_sibling.push(NONE);
        if parent == NONE {
            self.depth.push(0);
            self.dparent.push(NONE);
        } else {
            let pi = parent as usize;
            self.depth.push(self.depth[pi] + 1);
            if self.last_child[pi] == NONE {
                self.first_child[pi] = y;
            } else {
                self.next_sibling[self.last_child[pi] as usize] = y;
            }
            self.last_child[pi] = y;
            self.dparent.push(if self.apex[pi] { parent } else { self.dparent[pi] });
        }
        self.apex.push(true);
        self.path_child.push(NONE);
        self.s.push(1);
        self.sigma.push(0);
        self.pbar.push(0);
        self.p.push(0);
        self.q.push(0);
        self.qbar.push(0);
        self.qhi.push(0);
        let h = self.arena.new_array();
        self.table.push(h);
        self.tab_lo.push(0);
        self.tab_len.push(0);
        self.reorgs.push(0);
        y
    }

    #[inline]
    pub fn tparent(&self, x: u32) -> Option<u32> {
        let p = self.tparent[x as usize];
        (p != NONE).then_some(p)
    }

    #[inline]
    pub fn dparent(&self, x: u32) -> Option<u32> {
        let p = self.dparent[x as usize];
        (p != NONE).then_some(p)
    }

    pub fn is_apex(&self, x: u32) -> bool {
        self.apex[x as usize]
    }

    /// Deeper neighbour of `x` on its path.
    pub fn path_child(&self, x: u32) -> Option<u32> {
        let p = self.path_child[x as usize];
        (p != NONE).then_some(p)
    }

    pub fn children(&self, x: u32) -> impl Iterator<Item = u32> + '_ {
        let mut c = self.first_child[x as usize];
        std::iter::from_fn(move || {
            (c != NONE).then(|| {
                let v = c;
                c = self.next_sibling[v as usize];
                v
            })
        })
    }

    pub fn depth(&self, x: u32) -> u32 {
        self.depth[x as usize]
    }

    /// Current number of D-descendants.
    pub fn s(&self, x: u32) -> u32 {
        self.s[x as usize]
    }

    pub fn sigma(&self, x: u32) -> u32 {
        self.sigma[x as usize]
    }

    /// `(p̄, p, q, q̄)`.
    pub fn numbers(&self, x: u32) -> (Ordinal, Ordinal, Ordinal, Ordinal) {
        let i = x as usize;
        (self.pbar[i], self.p[i], self.q[i], self.qbar[i])
    }

    /// High-water mark of children's intervals inside `[p(x), q(x))`.
    pub fn expansion_start(&self, x: u32) -> Ordinal {
        self.qhi[x as usize]
    }

    pub fn reorgs(&self, x: u32) -> u32 {
        self.reorgs[x as usize]
    }

    pub fn max_reorgs(&self) -> u32 {
        self.reorgs.iter().copied().max().unwrap_or(0)
    }

    pub fn stats(&self) -> FatStats {
        self.stats
    }

    pub fn arena(&self) -> &Arena<u32> {
        &self.arena
    }

    pub(crate) fn add_work(&mut self, w: u64) {
        self.stats.work += w;
    }

    pub(crate) fn bump_s(&mut self, x: u32) -> u32 {
        self.s[x as usize] += 1;
        self.s[x as usize]
    }

    /// `(c−2)·σ(x)^e`, which equals `q(x) − p(x)`.
    #[inline]
    fn key(&self, x: u32) -> Ordinal {
        self.q[x as usize] - self.p[x as usize]
    }

    /// Nodes of `T_v` in breadth-first order, into `self.order`.
    fn collect_subtree(&mut self, v: u32) {
        self.order.clear();
        self.order.push(v);
        let mut i = 0;
        while i < self.order.len() {
            let mut c = self.first_child[self.order[i] as usize];
            while c != NONE {
                self.order.push(c);
                c = self.next_sibling[c as usize];
            }
            i += 1;
        }
    }

    /// Recomputes the heavy paths of `T_v` and the D-parents inside it, and sets
    /// `s = σ = s_C` there. `T_v` must be in `self.order`. `v` becomes an apex.
    fn compress_order(&mut self) {
        let n = self.len();
        if self.scratch.len() < n {
            self.scratch.resize(n, 0);
        }
        let v = self.order[0];
        for &z in &self.order {
            self.scratch[z as usize] = 1;
        }
        for k in (1..self.order.len()).rev() {
            let z = self.order[k] as usize;
            let up = self.tparent[z] as usize;
            self.scratch[up] += self.scratch[z];
        }
        self.apex[v as usize] = true;
        for &z in &self.order {
            self.path_child[z as usize] = NONE;
        }
        for k in 1..self.order.len() {
            let z = self.order[k] as usize;
            let up = self.tparent[z] as usize;
            let heavy = 2 * self.scratch[z] > self.scratch[up];
            self.apex[z] = !heavy;
            if heavy {
                self.path_child[up] = z as u32;
            }
        }
        // scratch now holds the path head; then compressed sizes.
        for &z in &self.order {
            let zi = z as usize;
            if z == v || self.apex[zi] {
                self.scratch[zi] = z;
            } else {
                self.scratch[zi] = self.scratch[self.tparent[zi] as usize];
            }
        }
        for k in 1..self.order.len() {
            let z = self.order[k] as usize;
            self.dparent[z] = self.scratch[self.tparent[z] as usize];
        }
        for &z in &self.order {
            self.s[z as usize] = 1;
        }
        for k in (1..self.order.len()).rev() {
            let z = self.order[k] as usize;
            let up = self.dparent[z] as usize;
            self.s[up] += self.s[z];
        }
        for &z in &self.order {
            self.sigma[z as usize] = self.s[z as usize];
        }
    }

    /// Assigns the interval `[lo, lo + c·σ(v)^e)` to `v` and numbers its
    /// D-descendants top-down with leftmost-possible child intervals.
    fn number_order(&mut self, lo: Ordinal) {
        let params = self.ctx.params;
        let v = self.order[0];
        self.assign(v, lo, &params);
        for k in 1..self.order.len() {
            let z = self.order[k];
            let u = self.dparent[z as usize] as usize;
            let start = self.qhi[u];
            let len = params.interval(self.sigma[z as usize]);
            assert!(
                start + len <= self.q[u],
                "expansion interval of node {u} exhausted"
            );
            self.qhi[u] = start + len;
            self.assign(z, start, &params);
        }
    }

    #[inline]
    fn assign(&mut self, z: u32, lo: Ordinal, params: &FatParams) {
        let i = z as usize;
        let g = params.pow_e(self.sigma[i]);
        self.pbar[i] = lo;
        self.p[i] = lo + g;
        self.qbar[i] = lo + params.c as Ordinal * g;
        self.q[i] = self.qbar[i] - g;
        self.qhi[i] = self.p[i] + 1;
        self.reorgs[i] += 1;
    }

    /// Rebuilds `ancestor_x` for one node by walking its D-ancestors.
    fn build_table(&mut self, x: u32) {
        self.chain.clear();
        let mut b = x;
        while b != NONE {
            self.chain.push(b);
            b = self.dparent[b as usize];
        }
        let last = self.chain.len() - 1;
        let k0 = self.key(x);
        let log = &self.ctx.log;
        let mut i = 0usize;
        while log.threshold(i) <= k0 {
            i += 1;
        }
        let lo = i;
        let h = self.table[x as usize];
        let mut j = 0usize;
        let mut w = 0usize;
        loop {
            let t = log.threshold(i);
            while j < last && self.key(self.chain[j + 1]) < t {
                j += 1;
            }
            if j == last {
                break;
            }
            let entry = self.chain[j];
            if w < self.arena.len(h) {
                self.arena.set(h, w, entry);
            } else {
                self.arena.push(h, entry);
            }
            w += 1;
            i += 1;
        }
        self.tab_lo[x as usize] = lo as u16;
        self.tab_len[x as usize] = w as u16;
        self.stats.table_writes += w as u64;
        self.stats.work += (w + self.chain.len()) as u64;
    }

    /// `ancestor_x[i]`; [`EPS`] for ε, [`NONE`] past the end where the entry is the root.
    #[inline]
    pub fn ancestor(&self, x: u32, i: usize) -> u32 {
        let lo = self.tab_lo[x as usize] as usize;
        if i < lo {
            return EPS;
        }
        let k = i - lo;
        if k >= self.tab_len[x as usize] as usize {
            return NONE;
        }
        self.arena.get(self.table[x as usize], k)
    }

    /// Replaces `D_v` by `C(T_v)`, numbers it from `lo` (or from 0 at the root),
    /// consuming the parent's expansion interval, and rebuilds tables in `T_v`.
    pub fn recompress(&mut self, v: u32) {
        self.collect_subtree(v);
        self.compress_order();
        let tv = self.order.len() as u32;
        let lo = match self.dparent(v) {
            None => 0,
            Some(u) => {
                let ui = u as usize;
                let start = self.qhi[ui];
                let len = self.ctx.params.interval(tv);
                assert!(start + len <= self.q[ui], "expansion interval of node {u} exhausted");
                self.qhi[ui] = start + len;
                start
            }
        };
        self.number_order(lo);
        for k in 0..self.order.len() {
            let z = self.order[k];
            self.build_table(z);
        }
        self.stats.recompressions += 1;
        self.stats.renumbered += tv as u64;
        self.stats.work += tv as u64;
    }

    #[inline]
    fn is_ancestor(&self, a: u32, y: u32) -> bool {
        let (ai, yi) = (a as usize, y as usize);
        self.p[ai] <= self.p[yi] && self.p[yi] < self.q[ai]
    }

    /// First ancestor `a` of `x` with key `> d`, and the ancestor preceding it
    /// (`NONE` when `a == x`).
    #[inline]
    fn first_above(&self, x: u32, d: Ordinal, i: usize, steps: &mut u32) -> (u32, u32) {
        let v = self.ancestor(x, i);
        *steps += 1;
        let (w, prev_w) = if v == EPS {
            (x, NONE)
        } else if v == NONE {
            // Unreachable for a valid numbering: the root's key exceeds every gap.
            let mut r = x;
            while self.dparent[r as usize] != NONE {
                r = self.dparent[r as usize];
            }
            (r, NONE)
        } else {
            *steps += 1;
            (self.dparent[v as usize], v)
        };
        let up = self.dparent[w as usize];
        if self.key(w) > d || up == NONE {
            (w, if w == x { NONE } else { prev_w })
        } else {
            *steps += 1;
            (up, w)
        }
    }

    /// Characteristic ancestors in `D`.
    pub fn ca_compressed(&self, x: u32, y: u32) -> (CaTriple<u32>, u32) {
        if x == y {
            return (CaTriple::same(x), 0);
        }
        let (xi, yi) = (x as usize, y as usize);
        let d = self.p[xi].abs_diff(self.p[yi]);
        let i = self.ctx.log.floor_log(d).expect("distinct nodes have distinct p") as usize;
        let mut steps = 1;
        let (ax, px) = self.first_above(x, d, i, &mut steps);
        let nca = if self.is_ancestor(ax, y) {
            ax
        } else {
            steps += 1;
            self.dparent[ax as usize]
        };
        let cx = if nca == ax { if px == NONE { x } else { px } } else { ax };
        let (ay, py) = self.first_above(y, d, i, &mut steps);
        let cy = if nca == ay { if py == NONE { y } else { py } } else { ay };
        (CaTriple::new(nca, cx, cy), steps)
    }

    /// Converts `ca_D(x, y)` into `ca_T(x, y)`.
    pub fn ca_translate(&self, x: u32, y: u32, cd: CaTriple<u32>) -> (CaTriple<u32>, u32) {
        if x == y {
            return (cd, 0);
        }
        let c = cd.a;
        let mut steps = 0;
        let mut on_path = |cz: u32| -> u32 {
            if cz == c || !self.apex[cz as usize] {
                cz
            } else {
                steps += 1;
                self.tparent[cz as usize]
            }
        };
        let bx = on_path(cd.ax);
        let by = on_path(cd.ay);
        let a = if self.depth[bx as usize] <= self.depth[by as usize] { bx } else { by };
        let ax = if a != bx {
            steps += 1;
            self.path_child[a as usize]
        } else {
            cd.ax
        };
        let ay = if a != by {
            steps += 1;
            self.path_child[a as usize]
        } else {
            cd.ay
        };
        (CaTriple::new(a, ax, ay), steps)
    }

    /// Characteristic ancestors in `T` and the number of primitive steps used.
    #[inline]
    pub fn ca_steps(&self, x: u32, y: u32) -> (CaTriple<u32>, u32) {
        let (cd, s1) = self.ca_compressed(x, y);
        let (ct, s2) = self.ca_translate(x, y, cd);
        (ct, s1 + s2)
    }

    pub fn ca(&self, x: u32, y: u32) -> CaTriple<u32> {
        self.ca_steps(x, y).0
    }

    /// Height of `D`.
    pub fn compressed_height(&self) -> u32 {
        (0..self.len() as u32)
            .map(|x| {
                let mut d = 0;
                let mut b = self.dparent[x as usize];
                while b != NONE {
                    d += 1;
                    b = self.dparent[b as usize];
                }
                d
            })
            .max()
            .unwrap_or(0)
    }

    /// Exhaustive structural check: path partition, D-parents, D-sizes,
    /// properties (i)–(iii), the parent/child σ ratio, laminarity, optional
    /// `s < α·σ`, and every ancestor-table entry against a naive scan.
    #[allow(clippy::needless_range_loop)]
    pub fn check(&self) -> std::result::Result<(), String> {
        let n = self.len();
        let params = self.ctx.params;
        let mut dsize = vec![1u32; n];
        for x in 0..n {
            // path partition and D-parent rule
            let tp = self.tparent[x];
            if tp == NONE {
                if !self.apex[x] || self.dparent[x] != NONE {
                    return Err(format!("root {x} must be an apex without D-parent"));
                }
            } else {
                let tpi = tp as usize;
                if !self.apex[x] && self.path_child[tpi] != x as u32 {
                    return Err(format!("non-apex {x} is not its parent's path child"));
                }
                let head = |mut z: usize| {
                    while !self.apex[z] {
                        z = self.tparent[z] as usize;
                    }
                    z as u32
                };
                if self.dparent[x] != head(tpi) {
                    return Err(format!("node {x} has wrong D-parent"));
                }
            }
            let pc = self.path_child[x];
            if pc != NONE && (self.tparent[pc as usize] != x as u32 || self.apex[pc as usize]) {
                return Err(format!("bad path child of {x}"));
            }
            let mut b = self.dparent[x];
            while b != NONE {
                dsize[b as usize] += 1;
                b = self.dparent[b as usize];
            }
        }
        for x in 0..n {
            if dsize[x] != self.s[x] {
                return Err(format!("s({x}) = {} but D-size is {}", self.s[x], dsize[x]));
            }
            let sg = self.sigma[x];
            let g = params.pow_e(sg);
            if self.qbar[x] - self.pbar[x] != params.c as Ordinal * g
                || self.p[x] - self.pbar[x] != g
                || self.qbar[x] - self.q[x] != g
            {
                return Err(format!("interval lengths of {x} violate (iii)"));
            }
            if self.qhi[x] > self.q[x] || self.qhi[x] <= self.p[x] {
                return Err(format!("expansion mark of {x} outside (p, q]"));
            }
            let u = self.dparent[x];
            if u != NONE && !params.beta.mul_le(sg as u64, self.sigma[u as usize] as u64) {
                return Err(format!("sigma ratio fails between {u} and {x}"));
            }
            if let Some(a) = params.alpha {
                // s < α·σ  ⟺  s·den < num·σ
                if (self.s[x] as u128) * (a.den as u128) >= (a.num as u128) * (sg as u128) {
                    return Err(format!("s({x}) >= alpha * sigma({x})"));
                }
            }
        }
        let is_danc = |a: usize, mut w: usize| loop {
            if w == a {
                return true;
            }
            let up = self.dparent[w];
            if up == NONE {
                return false;
            }
            w = up as usize;
        };
        for v in 0..n {
            for w in 0..n {
                let pw = self.p[w];
                let inside = self.p[v] <= pw && pw < self.q[v];
                if inside != is_danc(v, w) {
                    return Err(format!("property (i) fails for v={v} w={w}"));
                }
                if (self.pbar[v] <= pw && pw < self.p[v]) || (self.q[v] <= pw && pw < self.qbar[v])
                {
                    return Err(format!("p({w}) lies in a guard interval of {v}"));
                }
            }
        }
        let mut iv: Vec<(Ordinal, Ordinal)> = (0..n).map(|x| (self.pbar[x], self.qbar[x])).collect();
        iv.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut stack: Vec<Ordinal> = Vec::new();
        for (lo, hi) in iv {
            while stack.last().is_some_and(|&e| e <= lo) {
                stack.pop();
            }
            if stack.last().is_some_and(|&e| hi > e) {
                return Err(format!("interval [{lo}, {hi}) crosses an enclosing interval"));
            }
            stack.push(hi);
        }
        let width = self.ctx.log.thresholds().len();
        for x in 0..n {
            let mut chain = vec![x as u32];
            while let Some(&b) = chain.last() {
                match self.dparent(b) {
                    Some(u) => chain.push(u),
                    None => break,
                }
            }
            let root = *chain.last().unwrap();
            for i in 0..width {
                let t = self.ctx.log.threshold(i);
                let want = chain.iter().copied().rfind(|&b| self.key(b) < t);
                let got = self.ancestor(x as u32, i);
                let ok = match want {
                    None => got == EPS,
                    Some(b) if b == root => got == NONE || got == root,
                    Some(b) => got == b,
                };
                if !ok {
                    return Err(format!("ancestor table of {x} wrong at {i}"));
                }
            }
        }
        Ok(())
    }
}

impl CaProvider for FatTree {
    type Node = u32;

    fn ca(&self, x: u32, y: u32) -> Option<CaTriple<u32>> {
        Some(FatTree::ca(self, x, y))
    }

    fn parent(&self, x: u32) -> Option<u32> {
        self.tparent(x)
    }
}

/// Static engine over a [`Forest`]: one numbering of the whole forest.
///
/// Several trees share a hidden super-root, so cross-tree queries answer `None`.
#[derive(Debug, Clone)]
pub struct StaticNca {
    tree: FatTree,
    local: Vec<u32>,
    global: Vec<u32>,
    virtual_root: bool,
}

impl StaticNca {
    pub fn build(f: &Forest) -> Result<Self> {
        Self::build_with(f, FatParams::static_default())
    }

    pub fn build_with(f: &Forest, params: FatParams) -> Result<Self> {
        let roots: Vec<NodeId> = f.roots().collect();
        if roots.is_empty() {
            return Err(NcaError::Config("empty forest".into()));
        }
        let virtual_root = roots.len() > 1;
        let n = f.len() + virtual_root as usize;
        let ctx = FatContext::new(params, n as u32)?;
        let mut tree = FatTree::with_root(ctx);
        let mut local = vec![NONE; f.len()];
        let mut global = Vec::with_capacity(n);
        let mut queue: Vec<(NodeId, u32)> = Vec::with_capacity(f.len());
        if virtual_root {
            global.push(NONE);
            for &r in &roots {
                queue.push((r, 0));
            }
        } else {
            local[roots[0].index()] = 0;
            global.push(roots[0].0);
            for &c in f.children(roots[0]) {
                queue.push((c, 0));
            }
        }
        let mut i = 0;
        while i < queue.len() {
            let (v, up) = queue[i];
            let id = tree.push_node(up);
            local[v.index()] = id;
            global.push(v.0);
            for &c in f.children(v) {
                queue.push((c, id));
            }
            i += 1;
        }
        tree.recompress(0);
        Ok(StaticNca { tree, local, global, virtual_root })
    }

    pub fn tree(&self) -> &FatTree {
        &self.tree
    }

    pub fn ca_steps(&self, x: NodeId, y: NodeId) -> (Option<CaTriple>, u32) {
        let (lx, ly) = (self.local[x.index()], self.local[y.index()]);
        let (t, steps) = self.tree.ca_steps(lx, ly);
        if self.virtual_root && t.a == 0 {
            return (None, steps);
        }
        (Some(t.map(|v| NodeId(self.global[v as usize]))), steps)
    }

    pub fn ca(&self, x: NodeId, y: NodeId) -> Option<CaTriple> {
        self.ca_steps(x, y).0
    }
}

impl CaProvider for StaticNca {
    type Node = NodeId;

    fn ca(&self, x: NodeId, y: NodeId) -> Option<CaTriple> {
        StaticNca::ca(self, x, y)
    }

    fn parent(&self, x: NodeId) -> Option<NodeId> {
        let l = self.local[x.index()];
        self.tree
            .tparent(l)
            .filter(|&p| !(self.virtual_root && p == 0))
            .map(|p| NodeId(self.global[p as usize]))
    }
}
