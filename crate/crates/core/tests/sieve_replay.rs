use genus_core::rat::Thresholds;
use genus_core::sieve::{expected_survivors, run_sieve, CaseStatus};

#[test]
fn replay_reproduces_expected_table() {
    let out = run_sieve(&Thresholds::default()).expect("replay runs");
    assert!(out.matches_expected_table, "survivors: {:#?}", out.survivors);
    assert_eq!(out.survivors, expected_survivors());
    assert!(out.steps_checked >= 300, "got {}", out.steps_checked);
    assert_eq!(out.steps_checked, out.steps_verified + out.steps_assumed);
    let eliminated = out
        .records
        .iter()
        .filter(|r| r.status == CaseStatus::Eliminated)
        .count();
    assert!(eliminated >= 40, "eliminated {eliminated}");
    // every eliminated record closes with a verified trail
    for r in &out.records {
        assert!(!r.trail.is_empty());
    }
}

#[test]
fn tighter_degree_floor_shrinks_survivors() {
    let th = Thresholds::with_degree_min(10_000_000);
    let out = run_sieve(&th).expect("generic pass runs");
    assert!(
        out.survivors.len() <= expected_survivors().len(),
        "{:#?}",
        out.survivors
    );
}
