//! Runs every shipped example and prints its assertions.
//!
//! Pass example names to run a subset: `cargo run --example paper_examples -- ex52 chi_J_frame`.

use std::collections::BTreeMap;

use shiftinv::presets::run_example;
use shiftinv::ExampleId;

fn main() -> shiftinv::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ids: Vec<ExampleId> = if args.is_empty() {
        ExampleId::ALL.to_vec()
    } else {
        args.iter().map(|a| ExampleId::parse(a)).collect::<Result<_, _>>()?
    };
    for id in ids {
        let rep = run_example(id, &BTreeMap::new())?;
        println!("{} ({})", id.name(), if rep.passed { "pass" } else { "FAIL" });
        for a in &rep.assertions {
            println!("  [{}] {}: {}", if a.passed { "ok" } else { "no" }, a.name, a.detail);
        }
    }
    Ok(())
}
