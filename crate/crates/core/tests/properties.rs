use nca_core::arena::Arena;
use nca_core::fat_preorder::{FatContext, FatParams, StaticNca};
use nca_core::incremental::{IncrementalNca, IncrementalTree};
use nca_core::link::LinkForest;
use nca_core::microset::MicrosetTree;
use nca_core::multilevel::{LevelConfig, Multilevel};
use nca_core::numeric::{LogTable, Rational};
use nca_core::{rerooted_ca, CaTriple, Forest, NodeId};
use proptest::prelude::*;

/// A random rooted tree: node `i` hangs under `seeds[i−1] mod i`.
fn tree_from(seeds: &[u32]) -> Forest {
    let mut f = Forest::with_capacity(seeds.len() + 1);
    f.add_node();
    for (i, &s) in seeds.iter().enumerate() {
        f.add_leaf(NodeId(s % (i as u32 + 1))).unwrap();
    }
    f
}

fn all_pairs(f: &Forest, cap: u32) -> impl Iterator<Item = (u32, u32)> {
    let n = f.len() as u32;
    let step = (n / cap).max(1);
    (0..n).step_by(step as usize).flat_map(move |x| (0..n).step_by(step as usize).map(move |y| (x, y)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn floor_log_is_exact(r in 1u128..(1u128 << 100), which in 0usize..3) {
        let base = [(2, 1), (10, 7), (3, 2)][which];
        let base = Rational::new(base.0, base.1).unwrap();
        let t = LogTable::new(base, 1u128 << 100).unwrap();
        let k = t.floor_log(r).unwrap() as usize;
        prop_assert!(t.threshold(k) <= r);
        prop_assert!(t.threshold(k + 1) > r);
    }

    #[test]
    fn arena_stays_within_four_times_live(ops in prop::collection::vec((0usize..8, any::<u32>()), 1..400)) {
        let mut a: Arena<u32> = Arena::new();
        let mut hs = Vec::new();
        for (which, v) in ops {
            if which == 0 || hs.is_empty() {
                hs.push(a.new_array());
            } else {
                let h = hs[which % hs.len()];
                let i = a.push(h, v);
                prop_assert_eq!(a.get(h, i), v);
            }
            prop_assert!(a.used() <= 4 * a.total_live());
            prop_assert!(a.copied() <= 2 * a.pushes());
        }
    }

    #[test]
    fn static_fat_preorder_is_valid(seeds in prop::collection::vec(any::<u32>(), 0..200), dynamic in any::<bool>()) {
        let f = tree_from(&seeds);
        let params = if dynamic { FatParams::dynamic_default() } else { FatParams::static_default() };
        let s = StaticNca::build_with(&f, params).unwrap();
        prop_assert_eq!(s.tree().check(), Ok(()));
        for (x, y) in all_pairs(&f, 30) {
            let (got, steps) = s.ca_steps(NodeId(x), NodeId(y));
            prop_assert_eq!(got, f.oracle_ca(NodeId(x), NodeId(y)).unwrap());
            prop_assert!(steps <= 12);
        }
    }

    #[test]
    fn incremental_tree_invariants(seeds in prop::collection::vec(any::<u32>(), 0..150)) {
        let mut t = IncrementalTree::from_context(FatContext::dynamic_default(512)).unwrap();
        let mut f = Forest::new();
        let mut root = f.add_node();
        for &s in &seeds {
            if s % 5 == 0 {
                t.add_root().unwrap();
                root = f.add_root_above(root).unwrap();
            } else {
                let x = s % t.len() as u32;
                t.add_leaf(x).unwrap();
                f.add_leaf(NodeId(x)).unwrap();
            }
            prop_assert_eq!(t.core().check(), Ok(()));
            prop_assert!(t.core().max_reorgs() <= t.reorg_bound());
        }
        for (x, y) in all_pairs(&f, 25) {
            let want = f.oracle_ca(NodeId(x), NodeId(y)).unwrap().unwrap();
            prop_assert_eq!(IncrementalNca::ca(&t, x, y).map(NodeId), want);
        }
    }

    #[test]
    fn microset_matches_oracle(seeds in prop::collection::vec(any::<u32>(), 0..62)) {
        let mut m = MicrosetTree::new(63);
        let f = tree_from(&seeds);
        for (i, &s) in seeds.iter().enumerate() {
            m.add_leaf(s % (i as u32 + 1)).unwrap();
        }
        for (x, y) in all_pairs(&f, 63) {
            let (t, steps) = m.ca_steps(x, y);
            prop_assert_eq!(Some(t.map(NodeId)), f.oracle_ca(NodeId(x), NodeId(y)).unwrap());
            prop_assert!(steps <= 6);
        }
    }

    #[test]
    fn multilevel_frontier_and_answers(seeds in prop::collection::vec(any::<u32>(), 0..400), mus in prop::collection::vec(2u32..6, 1..4)) {
        let mut m = Multilevel::new(&LevelConfig::new(&mus, 1024).unwrap()).unwrap();
        let mut f = Forest::new();
        let mut root = f.add_node();
        for &s in &seeds {
            if s % 7 == 0 {
                m.add_root().unwrap();
                root = f.add_root_above(root).unwrap();
            } else {
                let x = s % m.len() as u32;
                m.add_leaf(x).unwrap();
                f.add_leaf(NodeId(x)).unwrap();
            }
            prop_assert_eq!(m.check(), Ok(()));
        }
        for (x, y) in all_pairs(&f, 25) {
            let want = f.oracle_ca(NodeId(x), NodeId(y)).unwrap().unwrap();
            prop_assert_eq!(IncrementalNca::ca(&m, x, y).map(NodeId), want);
        }
    }

    #[test]
    fn rerooting_matches_physical_reroot(seeds in prop::collection::vec(any::<u32>(), 1..80), z in any::<u32>()) {
        let f = tree_from(&seeds);
        let z = NodeId(z % f.len() as u32);
        let g = f.reroot_physical(z).unwrap();
        for (x, y) in all_pairs(&f, 20) {
            let got = rerooted_ca(&f, NodeId(x), NodeId(y), z).unwrap();
            prop_assert_eq!(Some(got), g.oracle_ca(NodeId(x), NodeId(y)).unwrap());
        }
    }

    #[test]
    fn link_forest_stage_rule(ops in prop::collection::vec((any::<u32>(), any::<u32>()), 1..300), levels in 1u32..4) {
        let n = 120u32;
        let mut lf = LinkForest::linear(levels, 1024).unwrap();
        let mut f = Forest::new();
        for _ in 0..n {
            lf.make_node();
            f.add_node();
        }
        let a = lf.table().a_inv(levels, n as u64) as u64;
        for (x, y) in ops {
            let (x, y) = (x % n, y % n);
            let ry = f.root_of(NodeId(y)).unwrap();
            if f.root_of(NodeId(x)).unwrap() != ry {
                lf.link(x, ry.0).unwrap();
                f.link(NodeId(x), ry).unwrap();
                prop_assert_eq!(lf.check(), Ok(()));
                prop_assert!(lf.stats().eta <= 2 * n as u64 * a);
            }
            let want = f.oracle_ca(NodeId(x), NodeId(y)).unwrap();
            let got: Option<CaTriple> = lf.ca(x, y).unwrap().map(|t| t.map(NodeId));
            prop_assert_eq!(got, want);
        }
    }
}
