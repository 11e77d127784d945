//! Rooted forests, characteristic ancestors and the rerooting reduction.

use crate::error::{NcaError, Result};

/// Dense node handle. Indices are allocated consecutively from 0 and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Characteristic ancestors `(a, a_x, a_y)` of a query pair `(x, y)`.
///
/// `a` is the nearest common ancestor. `ax` is `x` when `a == x`, otherwise the
/// ancestor of `x` whose parent is `a`; `ay` likewise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaTriple<N = NodeId> {
    pub a: N,
    pub ax: N,
    pub ay: N,
}

impl<N: Copy> CaTriple<N> {
    pub fn new(a: N, ax: N, ay: N) -> Self {
        CaTriple { a, ax, ay }
    }

    pub fn same(x: N) -> Self {
        CaTriple { a: x, ax: x, ay: x }
    }

    /// The triple for the swapped query `(y, x)`.
    pub fn swapped(self) -> Self {
        CaTriple { a: self.a, ax: self.ay, ay: self.ax }
    }

    pub fn map<M, F: Fn(N) -> M>(self, f: F) -> CaTriple<M> {
        CaTriple { a: f(self.a), ax: f(self.ax), ay: f(self.ay) }
    }
}

/// Anything that answers characteristic-ancestor queries in a fixed rooting.
pub trait CaProvider {
    type Node: Copy + Eq;
    /// `None` when the two nodes lie in different trees.
    fn ca(&self, x: Self::Node, y: Self::Node) -> Option<CaTriple<Self::Node>>;
    fn parent(&self, x: Self::Node) -> Option<Self::Node>;
}

/// Characteristic ancestors of `x` and `y` when their tree is rerooted at `z`.
///
/// Uses exactly three queries against `p`, which answers in the original rooting.
pub fn rerooted_ca<P: CaProvider>(
    p: &P,
    x: P::Node,
    y: P::Node,
    z: P::Node,
) -> Result<CaTriple<P::Node>> {
    let xy = p.ca(x, y).ok_or(NcaError::DifferentTrees)?;
    let xz = p.ca(x, z).ok_or(NcaError::DifferentTrees)?;
    let yz = p.ca(y, z).ok_or(NcaError::DifferentTrees)?;
    Ok(reroot_combine(p, xy, xz, yz))
}

/// The case analysis of the rerooting reduction, given the three original triples.
pub fn reroot_combine<P: CaProvider>(
    p: &P,
    xy: CaTriple<P::Node>,
    xz: CaTriple<P::Node>,
    yz: CaTriple<P::Node>,
) -> CaTriple<P::Node> {
    if xz.a == yz.a {
        xy
    } else if xz.a == xy.a {
        let a = yz.a;
        let up = p.parent(a).expect("rerooted nca below the original nca has a parent");
        CaTriple::new(a, up, yz.ax)
    } else {
        let a = xz.a;
        let up = p.parent(a).expect("rerooted nca below the original nca has a parent");
        CaTriple::new(a, xz.ax, up)
    }
}

/// Canonical rooted forest with parent pointers and insertion-ordered child lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Forest {
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
}

impl Forest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Forest { parent: Vec::with_capacity(n), children: Vec::with_capacity(n) }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    fn check(&self, x: NodeId) -> Result<()> {
        if x.index() < self.parent.len() {
            Ok(())
        } else {
            Err(NcaError::UnknownNode(x.0))
        }
    }

    /// Allocates a new singleton tree.
    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.parent.len() as u32);
        self.parent.push(None);
        self.children.push(Vec::new());
        id
    }

    /// Allocates a new node as the last child of `x`.
    pub fn add_leaf(&mut self, x: NodeId) -> Result<NodeId> {
        self.check(x)?;
        let y = self.add_node();
        self.parent[y.index()] = Some(x);
        self.children[x.index()].push(y);
        Ok(y)
    }

    /// Allocates a new node and makes it the parent of root `r`.
    pub fn add_root_above(&mut self, r: NodeId) -> Result<NodeId> {
        self.check(r)?;
        if self.parent[r.index()].is_some() {
            return Err(NcaError::NotARoot(r.0));
        }
        let y = self.add_node();
        self.parent[r.index()] = Some(y);
        self.children[y.index()].push(r);
        Ok(y)
    }

    /// Makes root `y` a child of `x`, where `x` lies in another tree.
    pub fn link(&mut self, x: NodeId, y: NodeId) -> Result<()> {
        self.check(x)?;
        self.check(y)?;
        if self.parent[y.index()].is_some() {
            return Err(NcaError::NotARoot(y.0));
        }
        if self.root_of(x)? == y {
            return Err(NcaError::SameTree);
        }
        self.parent[y.index()] = Some(x);
        self.children[x.index()].push(y);
        Ok(())
    }

    pub fn parent(&self, x: NodeId) -> Option<NodeId> {
        self.parent.get(x.index()).copied().flatten()
    }

    pub fn children(&self, x: NodeId) -> &[NodeId] {
        &self.children[x.index()]
    }

    pub fn roots(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(i, _)| NodeId(i as u32))
    }

    pub fn depth(&self, x: NodeId) -> Result<usize> {
        self.check(x)?;
        let mut d = 0;
        let mut v = x;
        while let Some(p) = self.parent[v.index()] {
            v = p;
            d += 1;
        }
        Ok(d)
    }

    pub fn root_of(&self, x: NodeId) -> Result<NodeId> {
        self.check(x)?;
        let mut v = x;
        while let Some(p) = self.parent[v.index()] {
            v = p;
        }
        Ok(v)
    }

    /// Brute-force characteristic ancestors by walking both root paths.
    pub fn oracle_ca(&self, x: NodeId, y: NodeId) -> Result<Option<CaTriple>> {
        let mut dx = self.depth(x)?;
        let mut dy = self.depth(y)?;
        if x == y {
            return Ok(Some(CaTriple::same(x)));
        }
        let (mut u, mut v) = (x, y);
        let (mut pu, mut pv) = (x, y);
        while dx > dy {
            pu = u;
            u = self.parent[u.index()].unwrap();
            dx -= 1;
        }
        while dy > dx {
            pv = v;
            v = self.parent[v.index()].unwrap();
            dy -= 1;
        }
        while u != v {
            match (self.parent[u.index()], self.parent[v.index()]) {
                (Some(a), Some(b)) => {
                    pu = u;
                    pv = v;
                    u = a;
                    v = b;
                }
                _ => return Ok(None),
            }
        }
        let ax = if u == x { x } else { pu };
        let ay = if u == y { y } else { pv };
        Ok(Some(CaTriple::new(u, ax, ay)))
    }

    /// A copy of the forest with `z`'s tree rerooted at `z`.
    pub fn reroot_physical(&self, z: NodeId) -> Result<Forest> {
        self.check(z)?;
        let mut f = self.clone();
        let mut prev: Option<NodeId> = None;
        let mut cur = Some(z);
        while let Some(v) = cur {
            let up = self.parent[v.index()];
            if let Some(u) = up {
                f.children[v.index()].push(u);
                f.children[u.index()].retain(|&w| w != v);
            }
            f.parent[v.index()] = prev;
            prev = Some(v);
            cur = up;
        }
        Ok(f)
    }

    /// Nodes of the tree rooted at `r` in breadth-first order.
    pub fn bfs_from(&self, r: NodeId) -> Vec<NodeId> {
        let mut out = vec![r];
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            out.extend_from_slice(&self.children[v.index()]);
            i += 1;
        }
        out
    }
}

impl CaProvider for Forest {
    type Node = NodeId;

    fn ca(&self, x: NodeId, y: NodeId) -> Option<CaTriple> {
        self.oracle_ca(x, y).ok().flatten()
    }

    fn parent(&self, x: NodeId) -> Option<NodeId> {
        Forest::parent(self, x)
    }
}
