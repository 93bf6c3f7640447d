//! Runs every acceptance check, the long torus computation included, and
//! prints one line per check.

use oddkh::checks::{run_check, SuiteOptions, CRITERIA};

fn main() {
    let opts = SuiteOptions {
        stretch: true,
        inject_fault: false,
    };
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let r = run_check(id, &opts);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} checks passed", CRITERIA.len());
    } else {
        println!("acceptance: failed {failed:?}");
        std::process::exit(1);
    }
}
