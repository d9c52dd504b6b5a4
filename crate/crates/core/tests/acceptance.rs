use std::process::ExitCode;
use std::time::Instant;

use qcrystal::report::{
    confluence_results, oracle_results, relation_results, run_suite, CheckResult, Control, Report, RunConfig, Suite,
};
use qcrystal::verma::{HighestWeight, ModuleRelation};

struct Outcome {
    passed: bool,
    detail: String,
}

fn summarize(results: &[CheckResult]) -> Outcome {
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}: {}", r.name, r.witnesses.first().cloned().unwrap_or_default()))
        .collect();
    let checked: usize = results.iter().map(|r| r.checked).sum();
    if failed.is_empty() {
        Outcome {
            passed: true,
            detail: format!("{} checks in {} groups", checked, results.len()),
        }
    } else {
        Outcome {
            passed: false,
            detail: failed.join("; "),
        }
    }
}

fn weights(hs: &[i64]) -> Vec<HighestWeight> {
    hs.iter().map(|&h| HighestWeight::new(h, 0).unwrap()).collect()
}

fn crystal(hs: &[i64], control: Option<Control>) -> Report {
    let cfg = RunConfig {
        weights: weights(hs),
        ..RunConfig::for_suite(Suite::Crystal)
    };
    run_suite(Suite::Crystal, &cfg, control)
}

fn expect_failure(report: &Report, check: &str) -> Result<String, String> {
    match report.result(check) {
        Some(r) if !r.passed() && !r.witnesses.is_empty() => Ok(format!("{} rejected: {}", check, r.witnesses[0])),
        Some(_) => Err(format!("{check} did not reject the fixture")),
        None => Err(format!("{check} missing from report")),
    }
}

fn criterion_1() -> Outcome {
    summarize(&confluence_results(&RunConfig::for_suite(Suite::Confluence)))
}

fn criterion_2() -> Outcome {
    let cfg = RunConfig {
        max_length: 2,
        window: (-2, 2),
        ..RunConfig::for_suite(Suite::Relations)
    };
    summarize(&relation_results(&cfg))
}

fn criterion_3() -> Outcome {
    let cfg = RunConfig {
        max_length: 3,
        window: (-2, 2),
        m_range: (-5, 5),
        ..RunConfig::for_suite(Suite::Relations)
    };
    summarize(&oracle_results(&cfg))
}

fn criterion_4() -> Outcome {
    let rep = run_suite(Suite::Form, &RunConfig::for_suite(Suite::Form), None);
    summarize(&rep.results)
}

fn module_report() -> Report {
    run_suite(Suite::Module, &RunConfig::for_suite(Suite::Module), None)
}

fn criterion_5(rep: &Report) -> Outcome {
    let names: Vec<&str> = ModuleRelation::ALL.iter().map(|r| r.name()).collect();
    let picked: Vec<CheckResult> = rep
        .results
        .iter()
        .filter(|r| names.contains(&r.name.as_str()))
        .cloned()
        .collect();
    if picked.len() != names.len() {
        return Outcome {
            passed: false,
            detail: "missing relation results".into(),
        };
    }
    summarize(&picked)
}

fn criterion_6(rep: &Report) -> Outcome {
    let picked: Vec<CheckResult> = rep.results.iter().filter(|r| r.name == "nilpotency").cloned().collect();
    if picked.is_empty() {
        return Outcome {
            passed: false,
            detail: "missing nilpotency result".into(),
        };
    }
    summarize(&picked)
}

fn criterion_7() -> Outcome {
    let mut results = Vec::new();
    for hs in [&[1][..], &[3], &[1, 3]] {
        let rep = crystal(hs, None);
        if rep.result("signed-image").is_none() {
            return Outcome {
                passed: false,
                detail: "signed image not probed".into(),
            };
        }
        results.extend(rep.results.into_iter().filter(|r| r.name != "split-converse"));
    }
    summarize(&results)
}

fn criterion_8() -> Outcome {
    let canonical = crystal(&[1, 3], None);
    let split = canonical.result("split-converse").cloned();
    let diagonal = crystal(&[2], Some(Control::DiagonalSplit));
    match (split, expect_failure(&diagonal, "split-converse")) {
        (Some(s), Ok(rejected)) if s.passed() => Outcome {
            passed: true,
            detail: format!("canonical split passes; {rejected}"),
        },
        (Some(s), _) if !s.passed() => Outcome {
            passed: false,
            detail: format!("canonical split failed: {:?}", s.witnesses.first()),
        },
        (_, Err(e)) => Outcome {
            passed: false,
            detail: e,
        },
        _ => Outcome {
            passed: false,
            detail: "split-converse missing".into(),
        },
    }
}

fn criterion_9() -> Outcome {
    let form = run_suite(
        Suite::Form,
        &RunConfig::for_suite(Suite::Form),
        Some(Control::PerturbedGram),
    );
    let module = run_suite(
        Suite::Module,
        &RunConfig {
            weights: weights(&[1, 3]),
            max_length: 2,
            ..RunConfig::for_suite(Suite::Module)
        },
        Some(Control::SwappedMap),
    );
    let lattice = crystal(&[1], Some(Control::ScaledLattice));
    let checks = [
        expect_failure(&lattice, "lattice-stability"),
        expect_failure(&module, "intertwining"),
        expect_failure(&form, "gram-congruence"),
    ];
    let errors: Vec<String> = checks.iter().filter_map(|c| c.clone().err()).collect();
    if errors.is_empty() {
        Outcome {
            passed: true,
            detail: "scaled lattice, swapped map and perturbed Gram entry all rejected with witnesses".into(),
        }
    } else {
        Outcome {
            passed: false,
            detail: errors.join("; "),
        }
    }
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} {n} {name} [{secs:.2}s]: {}", o.detail);
        all &= o.passed;
    };
    report(1, "serre rewriting and confluence", &mut criterion_1);
    report(2, "kashiwara relations with formal gamma", &mut criterion_2);
    report(3, "omega closed-form oracle", &mut criterion_3);
    report(4, "bilinear form", &mut criterion_4);
    let mut module = None;
    report(5, "module relations", &mut || {
        criterion_5(module.get_or_insert_with(module_report))
    });
    report(6, "local nilpotency", &mut || {
        criterion_6(module.get_or_insert_with(module_report))
    });
    report(7, "crystal axioms", &mut criterion_7);
    report(8, "converse splitting", &mut criterion_8);
    report(9, "negative controls", &mut criterion_9);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
