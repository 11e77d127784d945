//! Batched queries against a frozen structure. With the `parallel` feature the
//! batch is split across the rayon pool.

use crate::forest::{CaProvider, CaTriple};

pub type Answer<N> = Option<CaTriple<N>>;

pub fn batch_ca_seq<P: CaProvider>(p: &P, pairs: &[(P::Node, P::Node)]) -> Vec<Answer<P::Node>> {
    pairs.iter().map(|&(x, y)| p.ca(x, y)).collect()
}

#[cfg(feature = "parallel")]
pub fn batch_ca_par<P>(p: &P, pairs: &[(P::Node, P::Node)]) -> Vec<Answer<P::Node>>
where
    P: CaProvider + Sync,
    P::Node: Send + Sync,
{
    use rayon::prelude::*;
    pairs.par_iter().with_min_len(1024).map(|&(x, y)| p.ca(x, y)).collect()
}

/// The parallel path when compiled in, else the sequential one.
pub fn batch_ca<P>(p: &P, pairs: &[(P::Node, P::Node)]) -> Vec<Answer<P::Node>>
where
    P: CaProvider + Sync,
    P::Node: Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        batch_ca_par(p, pairs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        batch_ca_seq(p, pairs)
    }
}
