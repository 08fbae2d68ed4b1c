//! Stabilization bounds recorded per built-in complex.
//!
//! `D0` is the smallest weight bound from which the truncated Betti number
//! stays at its final value through `D = 8`. Set `DERHAM_BLESS=1` to rewrite
//! the file after an intentional change.

use std::collections::BTreeMap;
use std::path::PathBuf;

use derham::cech::Side;
use derham::cohomology::stabilized_betti;
use derham::{corpus, Engine};
use serde::{Deserialize, Serialize};

const D_MAX: usize = 8;

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct SideRecord {
    betti: Vec<usize>,
    d0: Vec<usize>,
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/stabilization.json")
}

fn compute() -> BTreeMap<String, BTreeMap<Side, SideRecord>> {
    corpus::all()
        .into_iter()
        .map(|x| {
            let engine = Engine::new(x.clone());
            let sides = Side::BOTH
                .into_iter()
                .map(|side| {
                    let r = stabilized_betti(&engine, side, engine.whole(), 2, 0, D_MAX, 2).unwrap();
                    (side, SideRecord { betti: r.betti, d0: r.stable_from })
                })
                .collect();
            (x.name().to_string(), sides)
        })
        .collect()
}

#[test]
fn stabilization_bounds_match_golden_file() {
    let computed = compute();
    if std::env::var_os("DERHAM_BLESS").is_some() {
        let text = serde_json::to_string_pretty(&computed).unwrap() + "\n";
        std::fs::create_dir_all(golden_path().parent().unwrap()).unwrap();
        std::fs::write(golden_path(), text).unwrap();
        return;
    }
    let text = std::fs::read_to_string(golden_path()).expect("golden file present");
    let golden: BTreeMap<String, BTreeMap<Side, SideRecord>> = serde_json::from_str(&text).unwrap();
    assert_eq!(computed, golden);
}

#[test]
fn golden_bounds_are_within_limits() {
    let text = std::fs::read_to_string(golden_path()).expect("golden file present");
    let golden: BTreeMap<String, BTreeMap<Side, SideRecord>> = serde_json::from_str(&text).unwrap();
    assert_eq!(golden.len(), corpus::NAMES.len());
    for (name, sides) in &golden {
        let x = corpus::builtin(name).unwrap();
        let limit = if x.n_vertices() <= 4 { 6 } else { 8 };
        for rec in sides.values() {
            assert!(rec.d0.iter().all(|&d| d <= limit), "{name}: {rec:?}");
        }
    }
}
