use ribbon_torsor::catalog::{all_k4_codes, catalog, k4, k4_code_name, standard_names};
use ribbon_torsor::error::WitnessError;
use ribbon_torsor::ribbon_graph::RibbonGraph;
use ribbon_torsor::torsor::scan_bases;
use ribbon_torsor::trees::enumerate_trees;
use ribbon_torsor::witness::*;

fn graph(name: &str) -> RibbonGraph {
    catalog(name).unwrap().graph
}

fn relevant(g: &RibbonGraph, w: &WitnessPair) -> usize {
    precedence_options(g, w).iter().map(|p| p.relevant.len()).min().unwrap()
}

#[test]
fn nonseparating_iff_positive_genus_on_k4() {
    for flips in all_k4_codes() {
        let g = k4(flips);
        assert_eq!(
            g.genus() > 0,
            find_nonseparating_cycle(&g).is_some(),
            "{}",
            k4_code_name(flips)
        );
    }
}

#[test]
fn returned_pairs_pass_independent_checks() {
    for name in standard_names() {
        let g = graph(&name);
        if let Some(w) = find_proper_witness_pair(&g) {
            verify_witness_pair(&g, &w).unwrap();
            assert!(w.proper && w.x().is_some());
        }
        if let Some(w) = find_tight_witness_pair(&g) {
            verify_witness_pair(&g, &w).unwrap();
            assert!(w.tight && !w.proper);
        }
    }
}

#[test]
fn proper_pairs_exist_exactly_on_simple_nonplanar_catalog_graphs() {
    for name in standard_names() {
        let g = graph(&name);
        let expected = !g.is_planar() && !name.ends_with("bowtie");
        assert_eq!(find_proper_witness_pair(&g).is_some(), expected, "{name}");
    }
}

#[test]
fn pointed_bowtie_tight_pair_is_minimal_among_competitors() {
    let g = graph("pointed-bowtie");
    let w = find_tight_witness_pair(&g).unwrap();
    let z = w.z();
    let own = interval_measure(&g, &w.cycle, z).unwrap();
    let mut competitors = 0;
    for c in enumerate_cycles(&g).into_iter().filter(|c| c.contains_vertex(z)) {
        for cycle in [c.clone(), c.reversed()] {
            let candidate = WitnessPair { cycle, ..w.clone() };
            if verify_witness_pair(&g, &candidate).is_ok() {
                competitors += 1;
                assert!(interval_measure(&g, &candidate.cycle, z).unwrap() >= own);
            }
        }
    }
    assert!(competitors >= 1);
}

#[test]
fn swap_tree_moves_in_one_rotor_step() {
    for name in ["k4:1000", "k4:1100", "k5", "k33"] {
        let g = graph(name);
        let trees = enumerate_trees(&g);
        let w = find_proper_witness_pair(&g).unwrap();
        let s = swap_setup(&g, &w).unwrap();
        assert!(!s.tree.contains(s.e1) && !s.tree.contains(s.e_prime));
        assert!(s.tree.contains(s.e0));
        let a = action_evidence(&g, &trees, s.q, s.z, &s.tree);
        assert_eq!(a.rotor_steps, 1, "{name}");
        assert_eq!(a.rotor_tree, s.swapped_tree(&g), "{name}");
        assert!(a.disagree, "{name}");
    }
}

#[test]
fn every_usable_k4_pair_forces_disagreement() {
    for flips in all_k4_codes() {
        let g = k4(flips);
        let trees = enumerate_trees(&g);
        for w in proper_witness_pairs(&g) {
            match swap_setup(&g, &w) {
                Ok(s) => assert!(action_evidence(&g, &trees, s.q, s.z, &s.tree).disagree),
                Err(WitnessError::PrecedenceFails { intervening }) => assert!(intervening > 0),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn k5_reroutes_decrease_the_intervening_count() {
    let g = graph("k5");
    let trees = enumerate_trees(&g);
    let stuck: Vec<WitnessPair> = proper_witness_pairs(&g)
        .into_iter()
        .filter(|w| matches!(swap_setup(&g, w), Err(WitnessError::PrecedenceFails { .. })))
        .collect();
    assert!(!stuck.is_empty());
    for w in stuck {
        let mut pair = w;
        let mut t = relevant(&g, &pair);
        loop {
            let next = reroute_witness(&g, &pair).unwrap();
            if next == pair {
                break;
            }
            verify_witness_pair(&g, &next).unwrap();
            let t2 = relevant(&g, &next);
            assert!(t2 < t);
            t = t2;
            pair = next;
        }
        let s = swap_setup(&g, &pair).unwrap();
        assert!(action_evidence(&g, &trees, s.q, s.z, &s.tree).disagree);
    }
}

#[test]
fn reroute_leaves_adjacent_pairs_alone() {
    let g = graph("k4:1000");
    let w = find_proper_witness_pair(&g).unwrap();
    if precedence_options(&g, &w).iter().any(|p| p.intervening.is_empty()) {
        assert_eq!(reroute_witness(&g, &w).unwrap(), w);
    }
}

#[test]
fn constructive_vertex_is_in_the_scan_disagreement_set() {
    for name in standard_names() {
        let g = graph(&name);
        if g.is_planar() || g.has_multiple_edges() {
            continue;
        }
        let trees = enumerate_trees(&g);
        let c = construct_disagreement(&g, &trees).unwrap();
        assert!(c.action.disagree, "{name}");
        let report = scan_bases(&g, &trees);
        assert!(report.disagreeing().any(|v| v == g.vertex_name(c.q)), "{name}");
    }
}

#[test]
fn tight_construction_checks() {
    let g = graph("pointed-bowtie");
    let trees = enumerate_trees(&g);
    let w = find_tight_witness_pair(&g).unwrap();
    let s = tight_setup(&g, &w).unwrap();
    assert_eq!(s.z, w.z());
    assert_eq!(g.other_end(s.e, s.z), s.q);
    let ev = tight_evidence(&g, &trees, &s);
    assert_eq!(ev.value_at_z, 0);
    assert!(ev.shift_holds);
    assert!(ev.image_value_at_z >= 2);
    assert!(ev.contains_all_at_z);
    assert!(matches!(
        tight_setup(&graph("k4:1000"), &w),
        Err(WitnessError::NotApplicable(_))
    ));
}

#[test]
fn minors_never_gain_proper_pairs() {
    for name in ["pointed-bowtie", "rounded-bowtie", "k4:0000", "triangle"] {
        let g = graph(name);
        assert!(find_proper_witness_pair(&g).is_none());
        for m in minors(&g) {
            assert!(find_proper_witness_pair(&m).is_none(), "{name}");
            assert!(m.genus() <= g.genus());
        }
    }
}
