use proptest::prelude::*;
use vunfold::hull::random_hull;
use vunfold::pathfinder::brute_force_facet_path;
use vunfold::{facet_cycle, lattice_graph, unfold_cycle, unfold_path, Scalar, Unfolding};

fn assert_unfolding<S: Scalar>(u: &Unfolding<S>, facets: usize) {
    assert!(u.report.pass, "{:?}", u.report.violations);
    assert_eq!(u.layout.triangles.len(), facets);
    for w in u.layout.strips.windows(2) {
        assert!(w[0].left < w[1].left);
        assert_eq!(w[0].right, w[1].left);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn path_and_cycle_unfold_random_hulls(n in 4usize..500, seed in any::<u64>()) {
        let m = random_hull::<f64>(n, seed).unwrap();
        let p = unfold_path(&m).unwrap();
        assert_unfolding(&p, m.triangle_count());
        prop_assert_eq!(p.layout.strips.len() + p.quad_count, m.triangle_count());

        let c = unfold_cycle(&m).unwrap();
        assert_unfolding(&c, m.triangle_count());
        prop_assert_eq!(c.quad_count, 0);
        prop_assert_eq!(c.layout.strips.len(), m.triangle_count());
    }

    #[test]
    fn single_precision_hulls(n in 4usize..300, seed in any::<u64>()) {
        let m = random_hull::<f32>(n, seed).unwrap();
        assert_unfolding(&unfold_path(&m).unwrap(), m.triangle_count());
        assert_unfolding(&unfold_cycle(&m).unwrap(), m.triangle_count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Every small hull has a facet path, and the cycle found is one.
    #[test]
    fn small_hulls_agree_with_exhaustive_search(n in 4usize..10, seed in any::<u64>()) {
        let m = random_hull::<f64>(n, seed).unwrap();
        let g = lattice_graph(&m);
        prop_assert!(brute_force_facet_path(&g).unwrap().is_some());
        let cycle = facet_cycle(&m).unwrap();
        let mut order = cycle.facet_order();
        order.sort_unstable();
        prop_assert_eq!(order, (0..m.triangle_count()).collect::<Vec<_>>());
    }
}
