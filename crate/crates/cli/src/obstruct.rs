use nilmassey_core::obstruction::{section_obstructions, Verdict};
use nilmassey_core::Result;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::report::cochain_json;

/// Runs the single-2 Massey pipeline on the configured cocycle.
pub fn run(config: &RunConfig) -> Result<(Value, Verdict)> {
    let instance = config.instance()?;
    let report = section_obstructions(&instance.x, &instance.action)?;
    let per_j: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let system: Map<String, Value> = e
                .system
                .entries()
                .iter()
                .map(|(&(i, j), c)| (format!("{i},{j}"), cochain_json(c)))
                .collect();
            json!({
                "J": e.j.to_string(),
                "valid": e.validation.is_ok(),
                "failed_identity": e.validation.as_ref().err().map(|f| json!({"i": f.i, "j": f.j})),
                "defining_system": system,
                "massey": e.massey.as_ref().map(cochain_json),
                "vanishes": e.vanishes,
            })
        })
        .collect();
    let failing: Vec<String> =
        report.entries.iter().filter(|e| e.vanishes != Some(true)).map(|e| e.j.to_string()).collect();
    let x: Vec<_> = instance.x.values().iter().map(|v| v.series().to_table()).collect();
    let f: Vec<_> = instance.action.f().iter().map(|v| v.series().to_table()).collect();
    let value = json!({
        "command": "obstruct",
        "config": config,
        "group_order": instance.x.values().len(),
        "f": f,
        "x": x,
        "per_j": per_j,
        "failing_j": failing,
        "verdict": report.verdict,
    });
    Ok((value, report.verdict))
}
