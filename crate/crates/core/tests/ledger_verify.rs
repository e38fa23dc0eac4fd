use genus_core::rat::Thresholds;
use genus_core::sieve::{Checker, Ledger};

#[test]
fn every_ledger_step_verifies() {
    let ledger = Ledger::builtin().expect("ledger parses");
    let th = Thresholds::default();
    let mut checker = Checker::new(&ledger, &th);
    let reports = checker.verify_all().expect("all steps verify");
    let total: usize = reports.iter().map(|r| r.checked).sum();
    assert_eq!(total, ledger.step_count());
    for r in &reports {
        assert_eq!(r.checked, r.verified + r.assumed, "prop {}", r.id);
    }
}
