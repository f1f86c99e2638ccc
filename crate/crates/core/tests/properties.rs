//! Randomized structural properties of the core machinery.

use proptest::prelude::*;

use torus3::kempe::{kempe_swap, sign_product, KempeSupport};
use torus3::odd::{odd_closed_form, odometer, return_map_closed_form};
use torus3::route_e::route_e_assignment;
use torus3::torus::{DirectionAssignment, DirectionTriple, Vertex, COLORS};

proptest! {
    #[test]
    fn every_arc_raises_the_layer(m in 3usize..12, i in 0usize..12, j in 0usize..12, k in 0usize..12, dir in 0usize..3) {
        let v = Vertex::new(i, j, k, m);
        prop_assert_eq!(v.bump(dir).layer(), (v.layer() + 1) % m);
    }

    #[test]
    fn index_round_trip(m in 3usize..12, idx in 0usize..1728) {
        let idx = idx % (m * m * m);
        prop_assert_eq!(Vertex::from_index(idx, m).index(), idx);
    }

    #[test]
    fn triple_words_round_trip(d in 0usize..6) {
        // enumerate the six permutations through their lexicographic rank
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let [a, b, c] = perms[d];
        let t = DirectionTriple::new(a, b, c).unwrap();
        prop_assert_eq!(DirectionTriple::from_word(&t.word()).unwrap(), t);
    }

    #[test]
    fn odometer_mth_power_is_a_shift(m in 3usize..15, u in 0usize..15, v in 0usize..15) {
        let (u, v) = (u % m, v % m);
        prop_assert_eq!(odometer(m).iterate((u, v), m), (u, (v + 1) % m));
    }

    #[test]
    fn odd_form_return_map_matches_iteration_pointwise(m in 3usize..10, c in 0usize..3, i in 0usize..10, k in 0usize..10) {
        let (i, k) = (i % m, k % m);
        let a = odd_closed_form(m);
        prop_assert_eq!(
            a.return_map(c).apply((i, k)),
            return_map_closed_form(c, m).apply((i, k))
        );
    }

    #[test]
    fn plane_swaps_preserve_validity_and_sign(m in 3usize..8, t in 0usize..8, pair in 0usize..3) {
        let (r, s) = [(0, 1), (0, 2), (1, 2)][pair];
        let a = DirectionAssignment::canonical(m);
        let before = sign_product(&a).unwrap();
        let b = kempe_swap(&a, r, s, &KempeSupport::plane(m, t % m)).unwrap();
        prop_assert!(b.is_valid_coloring().is_valid());
        prop_assert_eq!(sign_product(&b).unwrap(), before);
    }

    #[test]
    fn even_assignment_is_canonical_above_layer_two(m in 3usize..11, i in 0usize..22, j in 0usize..22, k in 0usize..22) {
        let m = 2 * m; // even, 6..=20
        let v = Vertex::new(i, j, k, m);
        prop_assume!(v.layer() >= 3);
        let a = route_e_assignment(m).unwrap();
        prop_assert_eq!(a.triple_at(v), DirectionTriple::CANONICAL);
    }

    #[test]
    fn color_maps_commute_with_the_layer_grading(m in 3usize..9, c in 0usize..3, idx in 0usize..729) {
        let a = odd_closed_form(m);
        let idx = idx % (m * m * m);
        let v = Vertex::from_index(idx, m);
        let w = Vertex::from_index(a.step_index(c, idx), m);
        prop_assert_eq!(w.layer(), (v.layer() + 1) % m);
        prop_assert_eq!(COLORS.len(), 3);
    }
}
