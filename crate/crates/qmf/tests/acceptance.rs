//! One line per acceptance criterion. Set `QMF_EXTENDED=1` to include the
//! higher-Ext tier of criterion 9.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qmf::{tasks, Check, Report, RunConfig, Status};
use qmf_core::make_field;
use qmf_core::spinor::precheck_mf_even;

const PRIME: u64 = 313;

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(task: &str, seed: u64, setup: impl FnOnce(&mut RunConfig)) -> Report {
    let mut c = RunConfig::new(task, PRIME, seed);
    setup(&mut c);
    tasks::run(&c).unwrap_or_else(|e| panic!("{task}: {e}"))
}

fn ext(family: &str, i: usize, seed: u64) -> Report {
    run("ext", seed, |c| {
        c.family = Some(family.into());
        c.i = Some(i);
    })
}

fn failures<'a>(reports: impl IntoIterator<Item = &'a Report>, select: impl Fn(&Check) -> bool) -> Vec<String> {
    reports
        .into_iter()
        .flat_map(|r| r.checks.iter().filter(|c| select(c) && c.status.is_failure()).map(move |c| format!("{}: {}", r.task, c.name)))
        .collect()
}

fn from_reports(reports: &[Report], select: impl Fn(&Check) -> bool) -> Outcome {
    let bad = failures(reports, select);
    Outcome { ok: bad.is_empty(), detail: if bad.is_empty() { String::new() } else { bad.join("; ") } }
}

fn dims(reports: &[Report]) -> String {
    let v: Vec<String> = reports.iter().map(|r| r.data["dim_ext"].to_string()).collect();
    format!("dims {}", v.join(","))
}

fn criterion(n: usize, bound: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let t = start.elapsed();
    let in_time = t <= bound;
    let ok = out.ok && in_time;
    let mut line = format!("criterion {n}: {} ({:.2} s, bound {} s)", if ok { "pass" } else { "fail" }, t.as_secs_f64(), bound.as_secs());
    if !in_time {
        line.push_str(" over time");
    }
    if !out.detail.is_empty() {
        line.push_str(&format!(" {}", out.detail.trim_end()));
    }
    println!("{line}");
    ok
}

fn main() -> ExitCode {
    let extended = std::env::var("QMF_EXTENDED").is_ok_and(|v| v == "1");
    let secs = Duration::from_secs;
    let mut ok = true;

    ok &= criterion(1, secs(10), || from_reports(&[run("verify-sy", 1, |_| {})], |c| !c.name.contains("Kimura")));
    ok &= criterion(2, secs(30), || from_reports(&[run("verify-sy", 1, |_| {})], |c| c.name.contains("Kimura")));

    ok &= criterion(3, secs(30 * 60), || {
        let t = Instant::now();
        let pre = precheck_mf_even(make_field(PRIME).unwrap(), 0, 100);
        let pre_t = t.elapsed();
        let mut o = from_reports(&[run("verify-moment-even", 1, |_| {})], |_| true);
        let pre_ok = pre.is_ok() && pre_t <= secs(10);
        o.detail = format!("precheck {:.2} s {}{}", pre_t.as_secs_f64(), if pre_ok { "ok" } else { "failed" }, o.detail);
        o.ok &= pre_ok;
        o
    });

    ok &= criterion(4, secs(30 * 60), || from_reports(&[run("verify-moment-odd", 1, |_| {}), run("verify-blocks", 1, |_| {})], |_| true));

    ok &= criterion(5, secs(5 * 60), || from_reports(&[run("dominance", 42, |c| c.trials = Some(5))], |_| true));

    ok &= criterion(6, secs(3 * 30 * 60), || {
        let rs: Vec<Report> = [11, 12, 13].iter().flat_map(|&s| [ext("sl6-x5", 0, s), ext("sl6-x5", 1, s)]).collect();
        let mut o = from_reports(&rs, |_| true);
        o.detail = format!("{} {}", dims(&rs), o.detail);
        o
    });

    ok &= criterion(7, secs(15 * 60), || {
        let rs = [ext("sl6-q4", 1, 11)];
        let mut o = from_reports(&rs, |_| true);
        o.detail = format!("{} {}", dims(&rs), o.detail);
        o
    });

    ok &= criterion(8, secs(60 * 60), || {
        let rs = [ext("spin12-special", 0, 11), ext("spin12-special", 1, 11)];
        let mut o = from_reports(&rs, |_| true);
        o.detail = format!("{} {}", dims(&rs), o.detail);
        o
    });

    let bound9 = if extended { secs(8 * 60 * 60) } else { secs(30 * 60) };
    ok &= criterion(9, bound9, || {
        let rs: Vec<Report> = [11, 12].iter().flat_map(|&s| [ext("spin12-x5", 0, s), ext("spin12-x5", 1, s)]).collect();
        let mut o = from_reports(&rs, |_| true);
        let mut detail = dims(&rs);
        if extended {
            let hi: Vec<Report> = [11, 12].iter().flat_map(|&s| [ext("spin12-x5", 2, s), ext("spin12-x5", 3, s)]).collect();
            let disagree = hi.iter().any(|r| r.status == Status::Fail);
            detail.push_str(&format!("; extended {}{}", dims(&hi), if disagree { " (discrepancy recorded)" } else { "" }));
        } else {
            detail.push_str("; extended tier skipped");
        }
        o.detail = format!("{detail} {}", o.detail);
        o
    });

    ok &= criterion(10, secs(5 * 60), || {
        let rs: Vec<Report> =
            ["s4-lambda3", "s4-delta", "end6", "end12"].iter().map(|&k| run("plethysm", 1, |c| c.case = Some(k.into()))).collect();
        from_reports(&rs, |_| true)
    });

    ok &= criterion(11, secs(60), || from_reports(&[run("verify-properties", 1, |_| {})], |_| true));

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
