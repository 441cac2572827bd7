use arrforge_core::catalog::scenario::{run_scenario, ScenarioOptions};
use std::time::Instant;

#[test]
fn klein_scenarios() {
    for name in ["klein-main", "klein-cusps", "klein-through-point"] {
        let t = Instant::now();
        match run_scenario(name, &ScenarioOptions::default()) {
            Ok(report) => {
                println!("== {name}: {:?} in {:?}", report.status, t.elapsed());
                for a in &report.assertions {
                    println!(
                        "   [{}] {}: expected {}, got {}",
                        if a.pass { "ok" } else { "FAIL" },
                        a.label, a.expected, a.actual
                    );
                }
            }
            Err(e) => println!("== {name}: ERROR {e} in {:?}", t.elapsed()),
        }
    }
}
