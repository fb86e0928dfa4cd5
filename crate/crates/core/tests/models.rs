use gamecheck::atl::parse_formula;
use gamecheck::global::check_global;
use gamecheck::lcgs::compile;
use gamecheck::local::{check_local, check_local_with, LocalOptions};
use gamecheck::models;
use gamecheck::oracle::{holds_initially, replay_satisfies};
use gamecheck::strategy::Strategy;

#[test]
fn standoff_and_gossip_queries_agree_everywhere() {
    let mut queries = Vec::new();
    for (n, b) in [(3, 1), (3, 2), (4, 1)] {
        queries.extend(models::standoff_queries(n, b));
    }
    queries.extend(models::gossip_queries(3));
    for q in queries {
        let g = compile(&q.model).unwrap();
        let phi = parse_formula(&q.formula, &g).unwrap();
        let truth = holds_initially(&g, &phi).unwrap();
        assert_eq!(check_global(&g, &phi).unwrap().verdict, truth, "{}", q.name);
        for s in Strategy::ALL {
            for w in [1, 3] {
                let out = check_local(&g, &phi, s, w).unwrap();
                assert_eq!(out.verdict, truth, "{} {s} W={w}", q.name);
            }
        }
    }
}

#[test]
fn billy_cannot_stay_alive() {
    let g = compile(include_str!("../../../models/standoff.lcgs")).unwrap();
    let phi = parse_formula(include_str!("../../../models/billy-can-stay-alive.atl"), &g).unwrap();
    assert!(!check_global(&g, &phi).unwrap().verdict);
    for s in Strategy::ALL {
        assert!(!check_local(&g, &phi, s, 2).unwrap().verdict);
    }
}

#[test]
fn robots_reach_their_corners_together() {
    let qs = models::robot_queries(3);
    let g = compile(&qs[0].model).unwrap();
    let verdicts: Vec<bool> = qs
        .iter()
        .map(|q| check_local(&g, &parse_formula(&q.formula, &g).unwrap(), Strategy::Dfs, 2).unwrap().verdict)
        .collect();
    assert_eq!(verdicts, vec![false, true, false]);
}

#[test]
fn satisfied_queries_come_with_replayable_witnesses() {
    let mut queries = models::gossip_queries(3);
    queries.extend(models::standoff_queries(3, 2));
    let mut checked = 0;
    for q in queries.into_iter().filter(|q| !q.formula.contains(" G ")) {
        let g = compile(&q.model).unwrap();
        let phi = parse_formula(&q.formula, &g).unwrap();
        for s in Strategy::ALL {
            let opts = LocalOptions { strategy: s, workers: 2, witness: true };
            let out = check_local_with(&g, &phi, &opts).unwrap();
            if !out.verdict {
                continue;
            }
            let w = out.witness.unwrap().unwrap();
            assert!(!w.lines(&g).is_empty(), "{}", q.name);
            assert!(replay_satisfies(&g, &w.to_profile(), &phi).unwrap(), "{} {s}", q.name);
            checked += 1;
        }
    }
    assert!(checked >= 12);
}

#[test]
fn the_shortcut_is_found_without_walking_the_line() {
    let g = compile(&models::shortcut_line(3000)).unwrap();
    let phi = parse_formula(models::SHORTCUT_QUERY, &g).unwrap();
    let global = check_global(&g, &phi).unwrap();
    assert!(global.verdict);
    let local = check_local(&g, &phi, Strategy::Dfs, 1).unwrap();
    assert!(local.verdict);
    assert!(local.stats.explored * 100 < global.configurations);
}

#[test]
fn shipped_examples_match_their_generators() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../models");
    let read = |f: &str| std::fs::read_to_string(format!("{dir}/{f}")).unwrap();
    assert_eq!(read("robots-3x3.lcgs"), models::robots(3));
    assert_eq!(read("gossip-3.lcgs"), models::gossip(3, 10));
    assert_eq!(read("shortcut.lcgs"), models::shortcut_line(1000));
    for (model, formula, expected) in [
        ("gossip-3.lcgs", "g1-learns-everything.atl", true),
        ("shortcut.lcgs", "shortcut.atl", true),
        ("standoff.lcgs", "billy-can-stay-alive.atl", false),
    ] {
        let g = compile(&read(model)).unwrap();
        let phi = parse_formula(read(formula).trim(), &g).unwrap();
        assert_eq!(check_global(&g, &phi).unwrap().verdict, expected, "{formula}");
    }
}
