use std::collections::VecDeque;

use proptest::prelude::*;
use vbm::graph::{build_connectivity, compute_centroid, detect_particular_points, median_tortuosity};
use vbm::multifractal::{box_probabilities, linear_box_sizes, ExclusionPolicy, GridSeries};
use vbm::stats::{rank_test, summarize};
use vbm::synth::LatticeTree;
use vbm::{
    compute_all, extract_edges, geometry_biomarkers, skeletonize, BinaryMask, BitRaster,
    NetworkKind, PipelineConfig, Pixel, Skeleton,
};

fn raster_strategy(max_side: usize) -> impl Strategy<Value = BitRaster> {
    (3..=max_side, 3..=max_side).prop_flat_map(|(w, h)| {
        proptest::collection::vec(proptest::bool::weighted(0.45), w * h)
            .prop_map(move |bits| BitRaster::from_bits(w, h, bits).unwrap())
    })
}

fn tree_strategy() -> impl Strategy<Value = LatticeTree> {
    (any::<u64>(), 4usize..9, 3usize..20).prop_map(|(seed, n, e)| LatticeTree::random(seed, n, 8, e))
}

/// Independent eccentricity-argmin over every pixel of each component.
fn brute_force_centroids(r: &BitRaster) -> Vec<Pixel> {
    let (labels, count) = r.label_components();
    let mut best: Vec<Option<(u32, Pixel)>> = vec![None; count];
    for p in r.pixels() {
        let mut dist = vec![u32::MAX; r.bits().len()];
        dist[r.index(p)] = 0;
        let mut q = VecDeque::from([p]);
        let mut ecc = 0;
        while let Some(u) = q.pop_front() {
            let d = dist[r.index(u)];
            ecc = ecc.max(d);
            for v in r.set_neighbors(u) {
                if dist[r.index(v)] == u32::MAX {
                    dist[r.index(v)] = d + 1;
                    q.push_back(v);
                }
            }
        }
        let slot = &mut best[labels[r.index(p)] as usize - 1];
        if slot.is_none_or(|(e, _)| ecc < e) {
            *slot = Some((ecc, p));
        }
    }
    best.into_iter().map(|b| b.unwrap().1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skeleton_is_thin_subset_with_same_components(r in raster_strategy(24)) {
        let mask = BinaryMask::new(r).unwrap();
        let s = skeletonize(&mask);
        prop_assert!(s.raster().is_subset_of(mask.raster()));
        prop_assert_eq!(s.raster().component_count(), mask.raster().component_count());
        prop_assert!(extract_edges(&mask).raster().is_subset_of(mask.raster()));
    }

    #[test]
    fn geometry_is_exact_under_rotation_and_flip(t in tree_strategy()) {
        let mask = t.mask(2.0, 1.0);
        let s = skeletonize(&mask);
        let e = extract_edges(&mask);
        let g = geometry_biomarkers(&mask, &s, &e, 1e4);
        for transformed in [s.raster().rotate90(), s.raster().flip_horizontal(), s.raster().flip_vertical()] {
            let rs = Skeleton::from_raster(transformed);
            prop_assert_eq!(vbm::geometry::overall_length(&rs, 1e4), g.ovlen);
        }
        let rotated_edges = vbm::EdgeMask::from_raster(e.raster().rotate90());
        prop_assert_eq!(vbm::geometry::overall_perimeter(&rotated_edges, 1e4), g.ovper);
    }

    #[test]
    fn points_are_invariant_under_quarter_turns(t in tree_strategy()) {
        let s = t.skeleton();
        let p = detect_particular_points(&s);
        let r = Skeleton::from_raster(s.raster().rotate90());
        let q = detect_particular_points(&r);
        prop_assert_eq!(p.endpoints.len(), q.endpoints.len());
        prop_assert_eq!(p.junctions().len(), q.junctions().len());
        for &e in &p.endpoints {
            prop_assert_eq!(s.raster().neighbor_count(e), 1);
        }
        for &i in &p.intersections {
            prop_assert!(s.raster().neighbor_count(i) >= 3);
        }
    }

    #[test]
    fn adjacency_is_symmetric(t in tree_strategy()) {
        let s = t.skeleton();
        let g = build_connectivity(&s, &detect_particular_points(&s));
        for (from, links) in &g.adjacency {
            for l in links {
                let mut rev = l.path.clone();
                rev.reverse();
                prop_assert!(g.adjacency[&l.to].iter().any(|b| b.to == *from && b.path == rev));
            }
        }
        let total: usize = g.adjacency.values().map(Vec::len).sum();
        prop_assert_eq!(total, 2 * g.segments.len());
        // Contracting degree-two vertices leaves a tree on the other ones.
        let kept = (0..t.nodes.len()).filter(|&i| t.degree(i) != 2).count();
        if t.edges.is_empty() {
            prop_assert!(g.segments.is_empty());
        } else {
            prop_assert_eq!(g.segments.len(), kept - 1);
        }
    }

    #[test]
    fn centroid_matches_brute_force(r in raster_strategy(14)) {
        let mask = BinaryMask::new(r).unwrap();
        let s = skeletonize(&mask);
        prop_assert_eq!(compute_centroid(&s), brute_force_centroids(s.raster()));
    }

    #[test]
    fn tortuosity_is_at_least_one(t in tree_strategy()) {
        let s = t.skeleton();
        let g = build_connectivity(&s, &detect_particular_points(&s));
        if let Some(tor) = median_tortuosity(&g) {
            prop_assert!(tor >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn box_probabilities_sum_to_one(r in raster_strategy(40), eps in 1usize..12, off in (0usize..12, 0usize..12)) {
        prop_assume!(!r.is_empty());
        let m = box_probabilities(&r, eps, off).unwrap();
        let sum: f64 = m.probabilities.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
        let kept = m.excluding(&ExclusionPolicy::default());
        if !kept.is_empty() {
            let sum: f64 = kept.probabilities.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn filled_rectangles_have_dimension_two(w in 40usize..160, h in 40usize..160, off in (0usize..9, 0usize..9)) {
        let r = BitRaster::from_fn(w, h, |_, _| true);
        let sizes = linear_box_sizes(h, w, 2, 6);
        let series = GridSeries::measure(&r, &sizes, &ExclusionPolicy::NONE, off).unwrap();
        for q in [-3.0, 0.0, 1.0, 2.0, 4.0] {
            let d = series.dimension(q).unwrap().value;
            prop_assert!((d - 2.0).abs() < 1e-9, "q={} d={}", q, d);
        }
    }

    #[test]
    fn rank_test_symmetry_and_monotone_invariance(
        a in proptest::collection::vec(-50i32..50, 3..12),
        b in proptest::collection::vec(-50i32..50, 3..12),
    ) {
        let fa: Vec<f64> = a.iter().map(|&v| v as f64).collect();
        let fb: Vec<f64> = b.iter().map(|&v| v as f64).collect();
        let p = rank_test(fa.clone(), fb.clone()).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
        prop_assert_eq!(p, rank_test(fb.clone(), fa.clone()).unwrap());
        let tf = |v: &f64| (v / 7.0).exp() + 3.0;
        let ta: Vec<f64> = fa.iter().map(tf).collect();
        let tb: Vec<f64> = fb.iter().map(tf).collect();
        prop_assert!((p - rank_test(ta, tb).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn summary_is_ordered_and_permutation_invariant(mut v in proptest::collection::vec(-1e3f64..1e3, 1..30)) {
        let s = summarize(v.clone()).unwrap();
        prop_assert!(s.q1 <= s.median && s.median <= s.q3);
        v.reverse();
        prop_assert_eq!(s, summarize(v).unwrap());
    }
}

#[test]
fn report_is_deterministic_on_a_tree() {
    let mask = LatticeTree::random(17, 8, 12, 20).mask(3.0, 1.0);
    let cfg = PipelineConfig::default();
    let a = compute_all("t", &mask, NetworkKind::Arterioles, &cfg, 5);
    let b = compute_all("t", &mask, NetworkKind::Arterioles, &cfg, 5);
    assert_eq!(vbm::serialize_report(&a).unwrap(), vbm::serialize_report(&b).unwrap());
    assert!(a.d0.is_some());
}
