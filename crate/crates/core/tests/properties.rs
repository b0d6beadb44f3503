use proptest::prelude::*;
use ribbon_torsor::catalog::{catalog, k4, k5_family, standard_names};
use ribbon_torsor::divisors::{linearly_equivalent, reduce, Divisor};
use ribbon_torsor::format::{parse, to_text};
use ribbon_torsor::ribbon_graph::VertexId;
use ribbon_torsor::torsor::{ActionKind, BaseActions};
use ribbon_torsor::trees::enumerate_trees;
use ribbon_torsor::witness::find_nonseparating_cycle;

fn flips() -> impl Strategy<Value = [bool; 4]> {
    prop::array::uniform4(any::<bool>())
}

/// Degree-zero divisor on four vertices with small coefficients.
fn degree_zero() -> impl Strategy<Value = Divisor> {
    prop::collection::vec(-3i64..=3, 3).prop_map(|mut c| {
        c.push(-c.iter().sum::<i64>());
        Divisor::from_coefficients(c)
    })
}

#[test]
fn catalog_graphs_survive_a_text_round_trip() {
    for name in standard_names() {
        let g = catalog(&name).unwrap().graph;
        let back = parse(&to_text(&g)).unwrap();
        assert_eq!(to_text(&back), to_text(&g), "{name}");
        assert_eq!(back.genus(), g.genus(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn k5_genus_matches_nonseparating_cycles(i in 0usize..4096) {
        let family = k5_family();
        let codes = family.codes();
        let g = family.build(&codes[i % codes.len()]);
        prop_assert_eq!(g.genus() > 0, find_nonseparating_cycle(&g).is_some());
    }

    #[test]
    fn reduction_is_idempotent_and_stays_in_class(f in flips(), d in degree_zero(), q in 0usize..4) {
        let g = k4(f);
        let q = VertexId(q);
        let r = reduce(&g, &d, q);
        prop_assert_eq!(reduce(&g, &r, q), r.clone());
        prop_assert!(linearly_equivalent(&g, &d, &r));
    }

    #[test]
    fn actions_are_homomorphisms(f in flips(), d1 in degree_zero(), d2 in degree_zero(), q in 0usize..4) {
        let g = k4(f);
        let trees = enumerate_trees(&g);
        let a = BaseActions::new(&g, &trees, VertexId(q));
        let sum = &d1 + &d2;
        for kind in [ActionKind::Bernardi, ActionKind::Rotor] {
            let lhs = a.permutation(kind, &sum);
            let rhs = a.permutation(kind, &d1).compose(&a.permutation(kind, &d2));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn equivalent_divisors_act_alike(f in flips(), d in degree_zero(), q in 0usize..4) {
        let g = k4(f);
        let trees = enumerate_trees(&g);
        let q = VertexId(q);
        let a = BaseActions::new(&g, &trees, q);
        let r = reduce(&g, &d, q);
        for kind in [ActionKind::Bernardi, ActionKind::Rotor] {
            prop_assert_eq!(a.permutation(kind, &d), a.permutation(kind, &r));
        }
    }
}
