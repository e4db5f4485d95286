//! Human-readable rendering of an audit report.

use qteam_core::verification::AuditReport;
use std::collections::BTreeMap;
use std::fmt::Write;

/// Renders the summary table printed by `verify` and `report`. Purely a
/// function of the report, so output stays byte-identical for a fixed
/// (config, seed).
pub fn summary(report: &AuditReport) -> String {
    let mut out = String::new();
    let w = &mut out;

    let _ = writeln!(w, "seed                {}", report.seed);
    let _ = writeln!(w, "samples per class   {}", report.samples_per_class);
    let _ = writeln!(w, "chi grid            {}", report.chi_grid.join(" "));
    let _ = writeln!(w, "classes             {}", report.classes.len());
    let _ = writeln!(w, "advantage exhibits  {}", report.advantage_exhibits.len());

    let mut verdicts: BTreeMap<_, usize> = BTreeMap::new();
    for class in &report.classes {
        *verdicts.entry(class.classification.verdict).or_default() += 1;
    }
    let _ = writeln!(w);
    let _ = writeln!(w, "verdicts");
    for (verdict, count) in &verdicts {
        let _ = writeln!(w, "  {:<28} {count:>3}", verdict.to_string());
    }

    let _ = writeln!(w);
    let _ = writeln!(w, "checks");
    for check in &report.checks {
        let status = if check.passed { "pass" } else { "FAIL" };
        let _ = writeln!(w, "  [{status}] {}", check.name);
        let _ = writeln!(w, "         {}", check.detail);
        if let Some(ce) = &check.counterexample {
            let _ = writeln!(
                w,
                "         counterexample: class {}, policy {}, lhs {} vs rhs {}",
                ce.class_code, ce.policy_label, ce.lhs, ce.rhs
            );
            let instance =
                serde_json::to_string(&ce.instance).expect("instance JSON serializes");
            let _ = writeln!(w, "         instance: {instance}");
        }
    }

    let _ = writeln!(w);
    let _ = writeln!(w, "advantage exhibits");
    for e in &report.advantage_exhibits {
        let path = if e.path.is_empty() {
            "-".to_string()
        } else {
            e.path.join("·")
        };
        let _ = writeln!(
            w,
            "  class {:>3}  {:<20} path {:<6} chi {:<5} local {:<6} quantum {:<24} gap {}",
            e.class_code, e.method, path, e.chi, e.local_value, e.quantum_value, e.gap
        );
    }

    let passed = report.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(w);
    let _ = writeln!(
        w,
        "result: {} ({passed}/{} checks passed)",
        if report.passed { "PASS" } else { "FAIL" },
        report.checks.len()
    );
    out
}
