use std::fs;

use wilfcheck_core::{
    brute_force_census, run, run_hunt, run_laws, CampaignConfig, CampaignError, CampaignResult,
    CampaignStatus, Law, LawOutcome, NumericalSemigroup, Predicate,
};

fn suite(g: u32, laws: &[Law]) -> CampaignConfig {
    let mut c = CampaignConfig::new(g);
    c.laws = laws.to_vec();
    c
}

#[test]
fn full_suite_to_genus_twelve() {
    let r = run_laws(&suite(12, &Law::ALL)).unwrap();
    assert_eq!(r.status, CampaignStatus::Complete);
    assert_eq!(r.tallies.counts, brute_force_census(12).unwrap());
    assert_eq!(
        r.tallies.violation_count,
        0,
        "{:?}",
        r.tallies.violations.first()
    );
    assert!(r.tallies.violations.is_empty());
    let total = r.tallies.total();
    for t in &r.tallies.laws {
        assert_eq!(t.passed + t.vacuous, total, "{}", t.law);
    }
    // Every law is exercised by at least one semigroup with its hypothesis.
    for t in &r.tallies.laws {
        assert!(t.passed > 0, "{} never applied", t.law);
    }
}

#[test]
fn genus_ten_counts_come_from_the_oracle() {
    let r = run_laws(&suite(10, &Law::ALL)).unwrap();
    assert_eq!(r.tallies.counts, brute_force_census(10).unwrap());
    assert_eq!(r.tallies.violation_count, 0);
}

#[test]
fn worker_count_does_not_change_aggregates() {
    let base = run_laws(&suite(16, &Law::ALL)).unwrap();
    for workers in [2, 3, 8] {
        let mut cfg = suite(16, &Law::ALL);
        cfg.workers = workers;
        let r = run_laws(&cfg).unwrap();
        assert_eq!(r.tallies, base.tallies, "workers = {workers}");
    }
}

fn interrupted_then_resumed(cfg: &CampaignConfig, stops: &[u64]) -> CampaignResult {
    for &s in stops {
        let mut c = cfg.clone();
        c.stop_after = Some(s);
        let r = run(&c).unwrap();
        assert_eq!(r.status, CampaignStatus::Checkpointed);
    }
    run(cfg).unwrap()
}

#[test]
fn resume_equals_uninterrupted() {
    let laws = [
        Law::W0NonnegSmallLeft,
        Law::W0Nonneg,
        Law::WW0Identity,
        Law::CompressedBound,
    ];
    let mut cfg = suite(20, &laws);
    cfg.predicate = Some(Predicate::parse("Csize >= 2 && q >= 4").unwrap());
    cfg.record_limit = 50;
    let whole = run(&cfg).unwrap();
    assert!(whole.tallies.match_count > 50);

    let dir = tempfile::tempdir().unwrap();
    for (name, workers, stops) in [
        ("seq", 1, vec![1, 12_345, 40_000]),
        ("par", 4, vec![5_000, 30_000]),
    ] {
        let mut c = cfg.clone();
        c.workers = workers;
        c.checkpoint = Some(dir.path().join(format!("{name}.ckpt")));
        c.checkpoint_interval = 7_000;
        let resumed = interrupted_then_resumed(&c, &stops);
        assert_eq!(resumed.status, CampaignStatus::Complete);
        assert_eq!(resumed.tallies, whole.tallies, "{name}");
        // A completed checkpoint resumes to the same result without work.
        let again = run(&c).unwrap();
        assert_eq!(again.visited, 0);
        assert_eq!(again.tallies, whole.tallies);
    }
}

#[test]
fn resume_with_different_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = suite(17, &[Law::Wilf, Law::WGeW0]);
    let whole = run_laws(&cfg).unwrap();
    cfg.checkpoint = Some(dir.path().join("mixed.ckpt"));
    cfg.workers = 3;
    cfg.stop_after = Some(9_000);
    run_laws(&cfg).unwrap();
    cfg.workers = 1;
    cfg.stop_after = None;
    assert_eq!(run_laws(&cfg).unwrap().tallies, whole.tallies);
}

#[test]
fn checkpoint_guards() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("guard.ckpt");
    let mut cfg = suite(14, &[Law::Wilf]);
    cfg.checkpoint = Some(path.clone());
    cfg.stop_after = Some(500);
    run_laws(&cfg).unwrap();

    let mut other = cfg.clone();
    other.laws = vec![Law::WGeW0];
    assert!(matches!(
        run_laws(&other),
        Err(CampaignError::IncompatibleCheckpoint(_))
    ));
    let mut deeper = cfg.clone();
    deeper.max_genus = 15;
    assert!(matches!(
        run_laws(&deeper),
        Err(CampaignError::IncompatibleCheckpoint(_))
    ));

    let mut bytes = fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] = if bytes[mid] == b'1' { b'2' } else { b'1' };
    fs::write(&path, &bytes).unwrap();
    assert!(matches!(
        run_laws(&cfg),
        Err(CampaignError::CorruptCheckpoint(_))
    ));
}

#[test]
fn exception_subtree_yields_replayable_violation() {
    let root = NumericalSemigroup::from_generators_with_tail(&[14, 22, 23], 55).unwrap();
    assert_eq!(root.genus(), 42);
    let mut cfg = suite(
        43,
        &[
            Law::W0Nonneg,
            Law::W0NonnegSmallLeft,
            Law::Wilf,
            Law::WW0Identity,
        ],
    );
    cfg.roots = vec![root];
    let r = run_laws(&cfg).unwrap();
    assert_eq!(r.tallies.counts[42], 1);
    assert_eq!(r.tallies.violation_count, 1);
    let v = &r.tallies.violations[0];
    assert_eq!(v.law, "w0_nonneg");
    let exception = NumericalSemigroup::from_generators_with_tail(&[14, 22, 23], 56).unwrap();
    assert_eq!(v.semigroup, exception.to_gaps_notation());
    assert!(v.reproduces());
    assert!(matches!(v.replay().unwrap(), LawOutcome::Violated { .. }));
    assert_eq!(r.tallies.law(Law::W0NonnegSmallLeft).unwrap().violated, 0);

    let mut hunt = CampaignConfig::new(43);
    hunt.roots = cfg.roots.clone();
    hunt.predicate = Some(Predicate::parse("w0 < 0").unwrap());
    let h = run_hunt(&hunt).unwrap();
    assert_eq!(h.tallies.match_count, 1);
    let m = &h.tallies.matches[0];
    assert_eq!((m.report.w0, m.report.left_count, m.report.g), (-1, 13, 43));
    assert_eq!(m.semigroup(), exception);
}

#[test]
fn hunts() {
    let mut cfg = CampaignConfig::new(12);
    cfg.predicate = Some(Predicate::parse("L <= 12 && q >= 4 && a1 == 2").unwrap());
    let r = run_hunt(&cfg).unwrap();
    assert!(r.tallies.matches.iter().all(|m| m.report.q == 4));

    let mut cfg = CampaignConfig::new(2);
    cfg.predicate = Some(Predicate::parse("g == 2").unwrap());
    assert_eq!(run_hunt(&cfg).unwrap().tallies.match_count, 2);

    let mut cfg = CampaignConfig::new(22);
    cfg.predicate = Some(Predicate::parse("w0 < 0 || w < 0 || w < w0").unwrap());
    cfg.workers = 2;
    let r = run_hunt(&cfg).unwrap();
    assert_eq!(r.tallies.match_count, 0);
    assert!(r.tallies.matches.is_empty());
}

#[test]
fn result_serializes_round_trip() {
    let mut cfg = suite(6, &[Law::Wilf, Law::W0Nonneg]);
    cfg.predicate = Some(Predicate::parse("q == 2").unwrap());
    let r = run(&cfg).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: CampaignResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert!(text.contains("\"status\":\"complete\""));
}
