//! Word-packed trees of at most 63 nodes: ancestor sets as bitwords.

use crate::arena::{Arena, ArrayHandle};
use crate::forest::CaTriple;
use crate::numeric::{lsb, msb};

/// Largest microset size: ids are 1-based bit positions of a `u64`.
pub const MAX_MU: u32 = 63;

/// Many microsets over one node-id space, with all `v` arrays in one arena.
///
/// `anc[x]` has bit `id[z]` set for every ancestor `z` of `x`, `x` included.
#[derive(Debug, Clone)]
pub struct MicrosetPool {
    mu: u32,
    anc: Vec<u64>,
    id: Vec<u8>,
    set: Vec<u32>,
    size: Vec<u8>,
    v: Vec<ArrayHandle>,
    arena: Arena<u32>,
    ops: u64,
}

impl MicrosetPool {
    pub fn new(mu: u32) -> Self {
        assert!((1..=MAX_MU).contains(&mu), "microset size {mu} outside 1..=63");
        MicrosetPool {
            mu,
            anc: Vec::new(),
            id: Vec::new(),
            set: Vec::new(),
            size: Vec::new(),
            v: Vec::new(),
            arena: Arena::new(),
            ops: 0,
        }
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    fn ensure(&mut self, x: u32) {
        let need = x as usize + 1;
        if self.anc.len() < need {
            self.anc.resize(need, 0);
            self.id.resize(need, 0);
            self.set.resize(need, u32::MAX);
        }
    }

    /// Starts a new microset whose root is `root`; returns its index.
    pub fn new_set(&mut self, root: u32) -> u32 {
        self.ensure(root);
        let h = self.arena.new_array();
        self.arena.set(h, 1, root);
        let k = self.v.len() as u32;
        self.v.push(h);
        self.size.push(1);
        self.id[root as usize] = 1;
        self.anc[root as usize] = 0b10;
        self.set[root as usize] = k;
        self.ops += 1;
        k
    }

    /// Adds `y` as a child of `x`. Returns `false`, changing nothing, when full.
    pub fn add_leaf(&mut self, x: u32, y: u32) -> bool {
        let k = self.set[x as usize];
        let s = self.size[k as usize] as u32 + 1;
        if s > self.mu {
            return false;
        }
        self.ensure(y);
        self.size[k as usize] = s as u8;
        self.id[y as usize] = s as u8;
        self.arena.push(self.v[k as usize], y);
        self.anc[y as usize] = self.anc[x as usize] + (1u64 << s);
        self.set[y as usize] = k;
        self.ops += 1;
        true
    }

    pub fn set_of(&self, x: u32) -> u32 {
        self.set[x as usize]
    }

    pub fn size(&self, k: u32) -> u32 {
        self.size[k as usize] as u32
    }

    pub fn is_full(&self, k: u32) -> bool {
        self.size(k) == self.mu
    }

    pub fn anc(&self, x: u32) -> u64 {
        self.anc[x as usize]
    }

    pub fn id(&self, x: u32) -> u32 {
        self.id[x as usize] as u32
    }

    #[inline]
    fn node(&self, k: u32, id: u32) -> u32 {
        self.arena.get(self.v[k as usize], id as usize)
    }

    pub fn nca(&self, x: u32, y: u32) -> u32 {
        let k = self.set[x as usize];
        let b = self.anc[x as usize] & self.anc[y as usize];
        self.node(k, msb(b).expect("bit 1 is shared"))
    }

    /// Characteristic ancestors via one msb and up to two lsb lookups.
    #[inline]
    pub fn ca_steps(&self, x: u32, y: u32) -> (CaTriple<u32>, u32) {
        let k = self.set[x as usize];
        debug_assert_eq!(k, self.set[y as usize]);
        let (bx, by) = (self.anc[x as usize], self.anc[y as usize]);
        let a = self.node(k, msb(bx & by).expect("bit 1 is shared"));
        let mut steps = 2;
        let cx = if a == x {
            x
        } else {
            steps += 2;
            self.node(k, lsb(bx & !by).unwrap())
        };
        let cy = if a == y {
            y
        } else {
            steps += 2;
            self.node(k, lsb(by & !bx).unwrap())
        };
        (CaTriple::new(a, cx, cy), steps)
    }

    pub fn ca(&self, x: u32, y: u32) -> CaTriple<u32> {
        self.ca_steps(x, y).0
    }

    pub fn arena(&self) -> &Arena<u32> {
        &self.arena
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }
}

/// A single microset with its own dense ids; node 0 is the root.
#[derive(Debug, Clone)]
pub struct MicrosetTree {
    pool: MicrosetPool,
    parent: Vec<u32>,
}

impl MicrosetTree {
    pub fn new(mu: u32) -> Self {
        let mut pool = MicrosetPool::new(mu);
        pool.new_set(0);
        MicrosetTree { pool, parent: vec![u32::MAX] }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pool.is_full(0)
    }

    /// `None` when the microset is full.
    pub fn add_leaf(&mut self, x: u32) -> Option<u32> {
        let y = self.parent.len() as u32;
        self.pool.add_leaf(x, y).then(|| {
            self.parent.push(x);
            y
        })
    }

    pub fn parent(&self, x: u32) -> Option<u32> {
        let p = self.parent[x as usize];
        (p != u32::MAX).then_some(p)
    }

    pub fn nca(&self, x: u32, y: u32) -> u32 {
        self.pool.nca(x, y)
    }

    pub fn ca(&self, x: u32, y: u32) -> CaTriple<u32> {
        self.pool.ca(x, y)
    }

    pub fn ca_steps(&self, x: u32, y: u32) -> (CaTriple<u32>, u32) {
        self.pool.ca_steps(x, y)
    }

    pub fn anc(&self, x: u32) -> u64 {
        self.pool.anc(x)
    }

    pub fn id(&self, x: u32) -> u32 {
        self.pool.id(x)
    }
}
