use std::process::ExitCode;
use std::time::Instant;

use cubecvx::suite::{self, SuiteConfig};

fn config() -> SuiteConfig {
    let mut c = SuiteConfig::default();
    if let Some(n) = std::env::var("CUBECVX_SUITE_INSTANCES").ok().and_then(|s| s.parse().ok()) {
        c.instances = n;
    }
    c
}

// Run without the libtest harness so the criterion lines always reach stdout.
fn main() -> ExitCode {
    let t = Instant::now();
    let report = suite::run(&config());
    for c in &report.criteria {
        println!(
            "[{}] criterion {}: {}: {} ({:.1}s)",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.detail,
            c.seconds
        );
    }
    println!("{} instances in {:.1}s", report.instances, t.elapsed().as_secs_f64());
    let failed: Vec<usize> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", report.criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
