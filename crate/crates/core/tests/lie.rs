use std::collections::BTreeSet;

use repgrowth::liepipe::*;
use repgrowth::polygraph::{forest_check, Graph};

#[test]
fn sp_jacobi_larger_ranks() {
    for d in 5..=6 {
        let spec = LieBasisSpec::new(LieType::Sp, d).unwrap();
        assert_eq!(spec.dim(), (d * (2 * d + 1)) as usize);
        assert!(antisymmetry_holds(&structure_constants(&spec)));
        let j = jacobi_check(&spec);
        assert!(j.closed_under_bracket && j.jacobi, "sp {d}: {j:?}");
    }
}

#[test]
fn runs_replay_and_are_deterministic() {
    for (ty, d) in [(LieType::Sl, 6), (LieType::So, 7), (LieType::Sp, 4)] {
        let a = run_pipeline(ty, d).unwrap();
        assert!(a.replay(), "{ty} {d}");
        let b = run_pipeline(ty, d).unwrap();
        assert_eq!(
            serde_json::to_string(&a.report).unwrap(),
            serde_json::to_string(&b.report).unwrap()
        );
        assert_eq!(a.dot, b.dot);
    }
}

#[test]
fn batch_matches_single_runs() {
    let reports = batch(LieType::So, 4..=9).unwrap();
    for (d, r) in (4..=9).zip(&reports) {
        assert_eq!(r, &run_pipeline(LieType::So, d).unwrap().report);
    }
}

#[test]
fn published_chains_are_clean_forests() {
    // the closed forms themselves colour to forests of degree at most 3
    for (ty, range) in [(LieType::Sl, 2..=12u32), (LieType::Sp, 2..=10)] {
        for d in range {
            let rep = run_pipeline(ty, d).unwrap().report;
            let chain = rep.published_chain.as_ref().expect("published chain");
            assert!(chain.forests_ok(3), "{ty} {d}: {:?}", chain.forests);
        }
    }
}

/// The edges of a DOT document, read back without any knowledge of the exporter.
fn dot_edges(doc: &str) -> (usize, BTreeSet<(String, String)>) {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for line in doc.lines().map(str::trim) {
        if let Some((a, rest)) = line.split_once(" -- ") {
            let b = rest.split([' ', ';', '[']).next().unwrap();
            edges.insert((
                a.trim_matches('"').to_string(),
                b.trim_matches('"').to_string(),
            ));
        } else if line.starts_with('"') {
            vertices.insert(line.split('"').nth(1).unwrap().to_string());
        }
    }
    (vertices.len(), edges)
}

#[test]
fn dot_documents_for_headline_ranks() {
    for (ty, d, name) in [
        (LieType::Sl, 8, "sl8_gamma3"),
        (LieType::So, 8, "so8_gamma3"),
        (LieType::Sp, 7, "sp7_gamma8"),
    ] {
        let run = run_pipeline(ty, d).unwrap();
        let (_, doc) = run
            .dot
            .iter()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("{name} missing"));
        assert!(doc.starts_with("graph "), "{name}");
        let (_, edges) = dot_edges(doc);
        let labels: BTreeSet<&String> = edges.iter().flat_map(|(a, b)| [a, b]).collect();
        let index: Vec<&String> = labels.into_iter().collect();
        let mut g = Graph::with_size(index.len());
        for (a, b) in &edges {
            let ia = index.iter().position(|x| *x == a).unwrap() as u32;
            let ib = index.iter().position(|x| *x == b).unwrap() as u32;
            g.add_edge(ia, ib);
        }
        let rep = &run.report;
        if ty == LieType::Sp {
            let f = rep
                .forests
                .iter()
                .find(|f| f.name == "gamma8")
                .expect("gamma8 record");
            assert_eq!(f.edges, edges.len(), "{name}");
            let check = forest_check(&g);
            assert_eq!(
                (check.is_forest, check.max_degree),
                (f.is_forest, f.max_degree),
                "{name}"
            );
        } else {
            let stage = rep
                .stages
                .iter()
                .find(|s| s.name == "E(gamma3)")
                .expect("E(gamma3) record");
            assert_eq!(stage.size, edges.len(), "{name}");
        }
    }
}

#[test]
fn genus_thresholds() {
    let g = min_genus(745);
    assert_eq!((g.headline, g.strict), (374, 374));
    assert!(!g.diverges);
    assert_eq!(min_genus(22).headline, 12);
    assert_eq!(min_genus(40).headline, 21);
    let factors: Vec<SimpleFactor> = ["sl:5", "e8", "sp3"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(bound_root_group(&factors).unwrap(), 745);
    assert!(bound_root_group(&[]).is_err());
}
