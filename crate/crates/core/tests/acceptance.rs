//! Acceptance suite: one pass/fail line per criterion.
//!
//! The census criterion runs by default; set `QUARTIC_LINES_ACCEPTANCE_EXTENDED=0`
//! to skip it. `QUARTIC_LINES_CHECKPOINT_DIR` makes the census resumable.

use std::process::ExitCode;

use quartic_lines::configs::PipelineOptions;
use quartic_lines::regress::{Regress, Status};

fn main() -> ExitCode {
    let extended = std::env::var("QUARTIC_LINES_ACCEPTANCE_EXTENDED").map_or(true, |v| v != "0");
    let mut regress = Regress::new(PipelineOptions::from_env(extended));
    let reports = match regress.run_all(&mut |r| {
        println!("{}", r.line());
        for line in r.diff() {
            println!("{line}");
        }
        for check in r.checks.iter().filter(|c| !c.passed && c.open_question.is_some()) {
            println!(
                "  criterion {} {}: expected {}, computed {} (open question: {})",
                r.id,
                check.item,
                check.expected,
                check.computed,
                check.open_question.as_deref().unwrap_or_default()
            );
        }
    }) {
        Ok(reports) => reports,
        Err(e) => {
            eprintln!("acceptance aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    let skipped = reports.iter().filter(|r| r.status == Status::Skipped).count();
    println!("acceptance: {} passed, {failed} failed, {skipped} skipped", reports.len() - failed - skipped);
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
