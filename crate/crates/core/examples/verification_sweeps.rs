// The verification suites that back `lowdisp verify`, with a report
// round trip through JSON.

use lowdisp::harness::{Suite, SweepReport};

pub fn run_example() -> lowdisp::Result<()> {
    for suite in [Suite::Gaps, Suite::Sandwich, Suite::Convergence] {
        let report = suite.run()?;
        println!("{}: {} passed, {} failed", report.name, report.pass_count, report.fail_count);
        for note in &report.notes {
            println!("  {note}");
        }
        let back = SweepReport::from_json_str(&report.to_json_string()?)?;
        assert_eq!(back, report);
    }
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
