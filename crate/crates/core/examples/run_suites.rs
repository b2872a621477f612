//! Runs two suites from the library API and lists anything that failed.

use hkcontact::config::{RunConfig, Suite};
use hkcontact::suites::run;

fn main() {
    let config = RunConfig { n: 2, samples: 64, suites: vec![Suite::HConnection, Suite::Theorems], ..RunConfig::default() };
    let report = run(&config).expect("run");
    for c in &report.checks {
        println!("{:<45} {:>10.3e}  {}", c.name, c.residual, if c.pass { "ok" } else { "FAILED" });
    }
    println!("{} of {} passed", report.summary.passed, report.summary.total);
    for (suite, secs) in &report.timing {
        println!("{suite}: {secs:.2}s");
    }
}
