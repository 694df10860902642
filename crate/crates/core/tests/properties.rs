use proptest::prelude::*;
use wsncluster_core::energy::{debit, RadioParams};
use wsncluster_core::fuzzy::{AggregatedOutput, FuzzySystem, MembershipFunction};
use wsncluster_core::protocol::{
    fca_compete, form_clusters, ReachPolicy, SensorNode, TentativeHead,
};
use wsncluster_core::Point;

fn sorted<const N: usize>(mut v: [f64; N]) -> [f64; N] {
    v.sort_by(f64::total_cmp);
    v
}

fn membership() -> impl Strategy<Value = MembershipFunction> {
    prop_oneof![
        prop::array::uniform3(0.0..1.0f64).prop_map(|p| {
            let [a, b, c] = sorted(p);
            MembershipFunction::triangular(a, b, c).unwrap()
        }),
        prop::array::uniform4(0.0..1.0f64).prop_map(|p| {
            let [a, b, c, d] = sorted(p);
            MembershipFunction::trapezoidal(a, b, c, d).unwrap()
        }),
    ]
}

proptest! {
    #[test]
    fn degree_stays_in_unit_interval(mf in membership(), x in -0.5..1.5f64) {
        let mu = mf.degree(x);
        prop_assert!((0.0..=1.0).contains(&mu));
    }

    #[test]
    fn debit_never_goes_negative(energy in 0.0..1.0f64, charge in 0.0..1.0f64) {
        let d = debit(energy, charge);
        prop_assert!(d.remaining >= 0.0 && d.remaining <= energy);
        prop_assert!(d.drawn <= charge && (energy - d.remaining - d.drawn).abs() < 1e-15);
        prop_assert_eq!(d.died, energy - charge <= 0.0);
    }

    #[test]
    fn transmit_cost_grows_with_distance(bits in 1u64..10_000, d in 0.0..300.0f64, extra in 0.0..50.0f64) {
        let p = RadioParams::default();
        prop_assert!(p.tx_cost(bits, d + extra) >= p.tx_cost(bits, d));
        prop_assert!(p.tx_cost(bits, d) >= p.rx_cost(bits));
    }

    #[test]
    fn radius_stays_within_bounds(d in -0.5..1.5f64, e in -0.5..1.5f64, r_max in 0.1..200.0f64) {
        let r = FuzzySystem::default().compute_radius(d, e, r_max).unwrap();
        prop_assert!(r > 0.0 && r <= r_max);
    }

    #[test]
    fn closed_form_centroid_matches_samples(
        levels in prop::array::uniform5(0.0..1.0f64),
        n in 1usize..400,
    ) {
        let f = FuzzySystem::default();
        let terms: Vec<(MembershipFunction, f64)> =
            f.radius().terms().iter().map(|(_, mf)| *mf).zip(levels).collect();
        let agg = AggregatedOutput::new(terms, (0.0, 1.0));
        let (mut w, mut m) = (0.0, 0.0);
        for i in 0..n {
            let x = (i as f64 + 0.5) / n as f64;
            w += agg.degree(x);
            m += x * agg.degree(x);
        }
        match agg.defuzzify_centroid(n) {
            Ok(c) => prop_assert!((c - m / w).abs() < 1e-9, "{} vs {}", c, m / w),
            Err(_) => prop_assert!(w == 0.0),
        }
    }

    #[test]
    fn surviving_heads_are_separated(
        cands in prop::collection::vec((0.0..100.0f64, 0.0..100.0f64, 1.0..30.0f64, 0.0..1.0f64), 0..40),
    ) {
        let positions: Vec<Point> = cands.iter().map(|&(x, y, _, _)| Point::new(x, y)).collect();
        let mut t: Vec<TentativeHead> = cands
            .iter()
            .enumerate()
            .map(|(id, &(_, _, r, e))| TentativeHead { id, r_comp: r, residual_energy: e, quit: false })
            .collect();
        let heads = fca_compete(&mut t, &positions);
        prop_assert_eq!(heads.len(), t.iter().filter(|c| !c.quit).count());
        for (i, &a) in heads.iter().enumerate() {
            for &b in &heads[i + 1..] {
                prop_assert!(positions[a].distance(positions[b]) > t[a].r_comp.max(t[b].r_comp));
            }
        }
        // Every quitter is covered by some survivor at least as strong.
        for q in t.iter().filter(|c| c.quit) {
            let covered = heads.iter().any(|&h| {
                positions[q.id].distance(positions[h]) <= q.r_comp.max(t[h].r_comp)
                    && (t[h].residual_energy, std::cmp::Reverse(h)) > (q.residual_energy, std::cmp::Reverse(q.id))
            });
            prop_assert!(covered, "candidate {} quit without a stronger survivor in reach", q.id);
        }
    }

    #[test]
    fn clusters_cover_alive_nodes_once(
        pts in prop::collection::vec((0.0..100.0f64, 0.0..100.0f64, any::<bool>()), 1..50),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..8),
    ) {
        let nodes: Vec<SensorNode> = pts
            .iter()
            .enumerate()
            .map(|(id, &(x, y, alive))| {
                SensorNode::new(id, Point::new(x, y), if alive { 1.0 } else { 0.0 }, Point::new(50.0, 50.0))
            })
            .collect();
        let heads: Vec<usize> = picks.iter().map(|i| i.index(nodes.len())).collect();
        let a = form_clusters(&nodes, &heads, ReachPolicy::Unlimited);
        for n in &nodes {
            let placed = usize::from(a.member_of[n.id].is_some()) + usize::from(a.direct_to_bs.contains(&n.id));
            prop_assert_eq!(placed, usize::from(n.alive));
            if let Some(h) = a.member_of[n.id] {
                prop_assert!(nodes[h].alive && a.heads.contains(&h));
                let mine = n.position.distance_squared(nodes[h].position);
                prop_assert!(a.heads.iter().all(|&o| n.position.distance_squared(nodes[o].position) >= mine));
            }
        }
        prop_assert!(a.direct_to_bs.is_empty() || a.heads.is_empty());
    }
}
