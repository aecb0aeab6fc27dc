mod common;

use std::collections::HashSet;
use std::sync::atomic::Ordering;

use magicdistill::code::GroupEchelon;
use magicdistill::error::SearchError;
use magicdistill::search::subspace::{span, standard_form_row_space};
use magicdistill::search::{
    candidate_basis, read_records, run_search, write_records, Emit, SearchConfig, SearchMode,
    SearchOutcome,
};
use magicdistill::{PauliOperator, StabilizerCode};

fn all_codes(n: usize, mode: SearchMode) -> SearchOutcome {
    let mut config = SearchConfig::new(n, mode);
    config.emit = Emit::All;
    run_search(&config).unwrap()
}

fn forms(outcome: &SearchOutcome) -> HashSet<Vec<PauliOperator>> {
    outcome.records.iter().map(|r| r.code().canonical_form()).collect()
}

fn check_completeness(n: usize) {
    let found = forms(&all_codes(n, SearchMode::General));
    let (reference, heavy) = common::reference_codes(n);
    assert!(!heavy.is_empty());
    let missing: Vec<_> = heavy.difference(&found).collect();
    assert!(missing.is_empty(), "n={n}: {} heavy groups missed, e.g. {:?}", missing.len(), missing.first());
    let extra: Vec<_> = found.difference(&reference).collect();
    assert!(extra.is_empty(), "n={n}: search produced codes outside the reference: {:?}", extra.first());
}

#[test]
fn general_search_is_complete_for_n3() {
    check_completeness(3);
}

#[test]
fn general_search_is_complete_for_n4() {
    check_completeness(4);
}

#[test]
fn every_emitted_code_is_valid_and_heavy_enough() {
    for n in 2..=4 {
        for r in all_codes(n, SearchMode::General).records {
            let code = r.code();
            assert!(code.is_valid(), "{code}");
            assert!(code.generators().iter().all(|g| g.weight() >= 2));
        }
    }
}

/// All M3-codes on three qubits: one even-weight generator and its partner.
fn brute_m3_codes_n3() -> HashSet<Vec<PauliOperator>> {
    let mut out = HashSet::new();
    for x in 0..8u64 {
        for z in 0..8u64 {
            let p = PauliOperator::new(3, x, z, 0).unwrap();
            let w = p.weight();
            if w == 0 || w % 2 != 0 {
                continue;
            }
            let sign = |q: PauliOperator| q.with_phase(if q.weight() % 4 == 0 { 0 } else { 2 });
            let (p, q) = (sign(p), sign(p.m3_conjugate()));
            let code = StabilizerCode::new(3, vec![p, q]).unwrap();
            if code.is_valid() && code.is_m3_code() {
                out.insert(code.canonical_form());
            }
        }
    }
    out
}

#[test]
fn m3_search_finds_every_m3_code_for_n3() {
    let found = forms(&all_codes(3, SearchMode::M3));
    let brute = brute_m3_codes_n3();
    assert!(!found.is_empty());
    assert_eq!(found, brute);
}

#[test]
fn m3_search_emits_only_m3_codes_for_n5() {
    let outcome = all_codes(5, SearchMode::M3);
    assert!(!outcome.records.is_empty());
    for r in &outcome.records {
        let code = r.code();
        assert!(code.is_valid() && code.is_m3_code(), "{code}");
        assert!(r.report.t_axis_preserving);
    }
}

/// Every valid continuation from `span(R_i)` stays reachable after pruning.
#[test]
fn pruning_keeps_every_valid_extension() {
    for n in 3..=4 {
        let mut prefixes: Vec<Vec<PauliOperator>> = vec![vec![]];
        for level in 0..n - 1 {
            let mut next = Vec::new();
            for chosen in &prefixes {
                let basis = candidate_basis(n, chosen, level);
                let mut reachable = chosen.clone();
                reachable.extend_from_slice(&basis);
                let reach = GroupEchelon::from_generators(n, &reachable);
                let base = GroupEchelon::from_generators(n, chosen);
                for g in span(n, &standard_form_row_space(n, level)) {
                    let g = g.with_phase(0);
                    if g.weight() < 2
                        || chosen.iter().any(|c| !c.commutes_with(&g))
                        || base.contains_pattern(&g)
                    {
                        continue;
                    }
                    assert!(reach.contains_pattern(&g), "n={n} level={level} {g} after {chosen:?}");
                    if next.len() < 400 {
                        let mut longer = chosen.clone();
                        longer.push(g);
                        next.push(longer);
                    }
                }
            }
            prefixes = next;
        }
    }
}

#[test]
fn output_is_independent_of_worker_count() {
    let mut one = SearchConfig::new(4, SearchMode::General);
    one.jobs = 1;
    one.emit = Emit::AxisPreserving;
    let mut three = one.clone();
    three.jobs = 3;
    let a = run_search(&one).unwrap();
    let b = run_search(&three).unwrap();
    assert_eq!(a.summary, b.summary);
    assert_eq!(a.records, b.records);
}

#[test]
fn resume_from_torn_checkpoint_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ckpt.jsonl");
    let mut config = SearchConfig::new(4, SearchMode::General);
    config.emit = Emit::AxisPreserving;
    let fresh = run_search(&config).unwrap();

    config.checkpoint = Some(path.clone());
    run_search(&config).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len() as u64, fresh.summary.branches + 1);
    let keep = 1 + lines.len() / 2;
    let mut torn = lines[..keep].join("\n");
    torn.push('\n');
    torn.push_str(&lines[keep][..lines[keep].len() / 2]);
    std::fs::write(&path, torn).unwrap();

    let resumed = run_search(&config).unwrap();
    assert_eq!(resumed.summary, fresh.summary);
    assert_eq!(resumed.records, fresh.records);
    let rewritten = std::fs::read_to_string(&path).unwrap();
    assert!(rewritten.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}

#[test]
fn checkpoint_from_other_configuration_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ckpt.jsonl");
    let mut config = SearchConfig::new(3, SearchMode::General);
    config.checkpoint = Some(path.clone());
    run_search(&config).unwrap();
    config.emit = Emit::All;
    assert!(matches!(run_search(&config), Err(SearchError::Checkpoint(_))));
}

#[test]
fn cancellation_leaves_a_resumable_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ckpt.jsonl");
    let mut config = SearchConfig::new(3, SearchMode::General);
    config.checkpoint = Some(path.clone());
    config.cancel.store(true, Ordering::Relaxed);
    assert!(matches!(run_search(&config), Err(SearchError::Interrupted)));
    config.cancel.store(false, Ordering::Relaxed);
    let resumed = run_search(&config).unwrap();
    config.checkpoint = None;
    assert_eq!(resumed.summary, run_search(&config).unwrap().summary);
}

#[test]
fn records_round_trip_through_json_lines() {
    let outcome = all_codes(3, SearchMode::General);
    let mut buf = Vec::new();
    write_records(&mut buf, &outcome.records).unwrap();
    let back = read_records(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back, outcome.records);
    for r in &back {
        let again = magicdistill::analyze(&r.code()).unwrap().to_json();
        assert_eq!(again, r.report);
    }
}
