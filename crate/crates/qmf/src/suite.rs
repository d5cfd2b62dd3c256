//! Every acceptance check in one run, on fixed seeds.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde_json::json;

use crate::error::Result;
use crate::report::{combine, Check, Report, RunConfig, Status};
use crate::tasks;

/// Seeds of the sections used by the suite.
pub const SL6_SEEDS: [u64; 3] = [11, 12, 13];
pub const SPIN12_SEEDS: [u64; 2] = [11, 12];
pub const SPECIAL_SEED: u64 = 11;
pub const DOMINANCE_SEED: u64 = 42;

fn sub(base: &RunConfig, task: &str) -> RunConfig {
    let mut c = RunConfig::new(task, base.prime, base.seed);
    c.threads = 1;
    c.timeout_s = base.timeout_s;
    c
}

fn ext_job(base: &RunConfig, family: &str, i: usize, seed: u64) -> RunConfig {
    let mut c = sub(base, "ext");
    c.family = Some(family.into());
    c.i = Some(i);
    c.seed = seed;
    c
}

/// The sub-runs of the suite: `(label, config)` for the asserted tier and
/// for the extended tier.
pub fn jobs(base: &RunConfig) -> (Vec<RunConfig>, Vec<RunConfig>) {
    let mut core = Vec::new();
    for t in ["verify-sy", "verify-moment-even", "verify-moment-odd", "verify-blocks", "verify-properties"] {
        core.push(sub(base, t));
    }
    let mut d = sub(base, "dominance");
    d.trials = Some(5);
    d.seed = DOMINANCE_SEED;
    core.push(d);
    for seed in SL6_SEEDS {
        core.push(ext_job(base, "sl6-x5", 0, seed));
        core.push(ext_job(base, "sl6-x5", 1, seed));
    }
    core.push(ext_job(base, "sl6-q4", 1, SL6_SEEDS[0]));
    core.push(ext_job(base, "spin12-special", 0, SPECIAL_SEED));
    core.push(ext_job(base, "spin12-special", 1, SPECIAL_SEED));
    for seed in SPIN12_SEEDS {
        core.push(ext_job(base, "spin12-x5", 0, seed));
        core.push(ext_job(base, "spin12-x5", 1, seed));
    }
    for case in ["s4-lambda3", "s4-delta", "end6", "end12"] {
        let mut c = sub(base, "plethysm");
        c.case = Some(case.into());
        core.push(c);
    }
    let mut extended = Vec::new();
    if base.extended {
        for seed in SPIN12_SEEDS {
            extended.push(ext_job(base, "spin12-x5", 2, seed));
            extended.push(ext_job(base, "spin12-x5", 3, seed));
        }
    }
    (core, extended)
}

/// Runs `configs` on up to `threads` workers; output order follows input order.
pub fn run_all(configs: &[RunConfig], threads: usize) -> Vec<Result<Report>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<Report>>>> = configs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, configs.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= configs.len() {
                    break;
                }
                let r = tasks::run(&configs[k]);
                *slots[k].lock().expect("slot lock") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("slot lock").expect("job ran")).collect()
}

fn label(c: &RunConfig) -> String {
    match c.task.as_str() {
        "ext" => format!("ext {} i={} seed={}", c.family.as_deref().unwrap_or("?"), c.i.unwrap_or(0), c.seed),
        "plethysm" => format!("plethysm {}", c.case.as_deref().unwrap_or("?")),
        "dominance" => format!("dominance seed={}", c.seed),
        t => t.to_string(),
    }
}

fn collect(configs: &[RunConfig], results: Vec<Result<Report>>, checks: &mut Vec<Check>) -> Vec<serde_json::Value> {
    let mut reports = Vec::new();
    for (c, r) in configs.iter().zip(results) {
        match r {
            Ok(rep) => {
                for ch in &rep.checks {
                    let mut ch = ch.clone();
                    ch.name = format!("{}: {}", label(c), ch.name);
                    checks.push(ch);
                }
                reports.push(serde_json::to_value(&rep).expect("report serializes"));
            }
            Err(e) => {
                checks.push(Check::holds(format!("{}: runs", label(c)), crate::Origin::Trivial, "completes", e.to_string(), false));
                reports.push(json!({ "task": c.task, "error": e.to_string() }));
            }
        }
    }
    reports
}

pub fn run_suite(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let (core, extended) = jobs(config);
    let mut checks = Vec::new();
    let results = run_all(&core, config.threads);
    let reports = collect(&core, results, &mut checks);
    let mut ext_checks = Vec::new();
    let ext_reports = collect(&extended, run_all(&extended, config.threads), &mut ext_checks);
    // Extended-tier disagreements are reported without failing the run.
    let ext_status = combine(ext_checks.iter().map(|c| c.status));
    for mut c in ext_checks {
        if c.status == Status::Fail {
            c.status = Status::Recorded;
            c.name = format!("{} (discrepancy)", c.name);
        }
        checks.push(c);
    }
    let data = json!({
        "reports": reports,
        "extended": {
            "enabled": config.extended,
            "status": if config.extended { ext_status.name() } else { "skipped" },
            "reports": ext_reports,
        },
    });
    Ok(Report::new(config.clone(), checks, data, start.elapsed().as_millis() as u64))
}
