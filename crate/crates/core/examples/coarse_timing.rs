fn main() {
    let t0 = std::time::Instant::now();
    let th = genus_core::rat::Thresholds::with_degree_min(10_000_000);
    let out = genus_core::sieve::coarse::run(&th, true).unwrap();
    println!("generic@1e7: {:?} families={} cases={}", t0.elapsed(), out.families.len(), out.cases_examined);
    let t0 = std::time::Instant::now();
    let th = genus_core::rat::Thresholds::default();
    let out = genus_core::sieve::coarse::run(&th, false).unwrap();
    println!("coarse@default: {:?} families={} cases={}", t0.elapsed(), out.families.len(), out.cases_examined);
    for f in out.families.iter().take(40) { println!("  p={} prefix={:?} d={}..{:?} n={}..{:?}", f.p, f.prefix, f.last_min, f.last_max, f.n_min, f.n_max); }
}
