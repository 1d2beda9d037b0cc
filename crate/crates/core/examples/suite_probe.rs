fn main() {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).cloned().unwrap_or_else(|| "torus".into());
    let l: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(3);
    let p: Option<u64> = args.get(3).and_then(|s| s.parse().ok());
    let samples: usize = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(64);
    let t = std::time::Instant::now();
    let mut cfg = qfrob_core::suites::SuiteConfig::new(l).with_samples(samples);
    if let Some(p) = p {
        cfg = cfg.with_p(p);
    }
    match qfrob_core::suites::run_suite(&name, &cfg) {
        Ok(checks) => {
            let pass = checks.iter().filter(|c| c.passed()).count();
            eprintln!(
                "{name} l={l} p={p:?}: {pass}/{} in {:?}",
                checks.len(),
                t.elapsed()
            );
            for c in checks.iter().filter(|c| !c.passed()) {
                eprintln!("  FAIL {}: {:?}", c.name, c.witness);
            }
        }
        Err(e) => eprintln!("{name} l={l}: ERROR {e}"),
    }
}
