//! One function per verb. Each prints its own output and reports failure
//! through [`Failure`].

use crate::args::{Cli, Format, Policy, TheoremArg, Verb};
use crate::Failure;
use polychor::corpus::{example, EXAMPLES};
use polychor::eval::{eval, Outcome};
use polychor::name::Name;
use polychor::net::{run_network, NetLabel, RunOutcome, Scheduler};
use polychor::parse::{parse, print_expr, print_local, print_local_defs, print_program, print_type, SourceUnit};
use polychor::project::{project_expr, project_program, ProjectionError};
use polychor::typeck::{check_program, CheckedProgram, TypeError};
use polychor::verify::{
    check_completeness, check_deadlock_freedom, check_soundness, Report, Status, Subject, VerifyError,
};
use serde_json::{json, Value};
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

pub fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let json = cli.format == Format::Json;
    match &cli.verb {
        Verb::Parse { file } => parse_verb(file, json),
        Verb::Check { file } => check_verb(file, json),
        Verb::Run { file, fuel, trace, trace_json } => run_verb(file, *fuel, *trace, *trace_json, json),
        Verb::Project { file, role, all, out } => project_verb(file, role.as_deref(), *all, out, json),
        Verb::Simulate { file, seed, policy, fuel, trace_json } => {
            let sched = match policy {
                Policy::Random => Scheduler::Random(*seed),
                Policy::Roundrobin => Scheduler::RoundRobin,
            };
            simulate_verb(file, sched, *fuel, *trace_json, json)
        }
        Verb::Verify { files, theorem, depth, fuel, report_json } => {
            verify_verb(files, *theorem, *depth, *fuel, report_json.as_deref(), json)
        }
        Verb::Examples { name, out } => examples_verb(name.as_deref(), out.as_deref(), json),
    }
}

/// A loaded input: display name and source text.
struct Input {
    file: String,
    stem: String,
    source: String,
}

/// Reads `path`; a missing file whose stem names a bundled example loads that example.
fn load(path: &Path) -> Result<Input, Failure> {
    let file = path.display().to_string();
    let stem = path.file_stem().map_or_else(|| file.clone(), |s| s.to_string_lossy().into_owned());
    match fs::read_to_string(path) {
        Ok(source) => Ok(Input { file, stem, source }),
        Err(e) if e.kind() == ErrorKind::NotFound => match example(&stem) {
            Some(ex) => Ok(Input { file, stem, source: ex.source.to_string() }),
            None => Err(Failure::Usage(format!("{file}: no such file or bundled example"))),
        },
        Err(e) => Err(Failure::Usage(format!("{file}: {e}"))),
    }
}

fn parsed(input: &Input) -> Result<SourceUnit, Failure> {
    parse(&input.source).map_err(|e| Failure::Language {
        stage: "parse",
        message: e.msg,
        file: input.file.clone(),
        at: Some((e.line, e.col)),
    })
}

/// Position of the item an error arose in: the named def, else `main`.
fn item_span(unit: &SourceUnit, def: Option<&Name>) -> Option<(usize, usize)> {
    let key = def.map_or("main", |n| n.as_str());
    unit.spans.get(key).map(|s| (s.line, s.col))
}

fn checked(input: &Input, unit: &SourceUnit) -> Result<CheckedProgram, Failure> {
    check_program(unit).map_err(|e| {
        let def = match &e {
            TypeError::InDef { name, .. } => Some(name),
            _ => None,
        };
        Failure::Language { stage: "type", message: e.to_string(), file: input.file.clone(), at: item_span(unit, def) }
    })
}

fn projection_failure(input: &Input, unit: &SourceUnit, e: ProjectionError) -> Failure {
    let def = match &e {
        ProjectionError::InDef { name, .. } => Some(name.clone()),
        _ => None,
    };
    Failure::Language {
        stage: "projection",
        message: e.to_string(),
        file: input.file.clone(),
        at: item_span(unit, def.as_ref()),
    }
}

fn load_checked(path: &Path) -> Result<(Input, SourceUnit, CheckedProgram), Failure> {
    let input = load(path)?;
    let unit = parsed(&input)?;
    let prog = checked(&input, &unit)?;
    Ok((input, unit, prog))
}

fn parse_verb(path: &Path, json: bool) -> Result<(), Failure> {
    let input = load(path)?;
    let unit = parsed(&input)?;
    if json {
        let defs: Vec<Value> =
            unit.defs.iter().map(|d| json!({"name": d.name.as_str(), "type": print_type(&d.ty)})).collect();
        let v = json!({"processes": unit.processes, "defs": defs, "main": print_expr(&unit.main)});
        println!("{v}");
    } else {
        print!("{}", print_program(&unit));
    }
    Ok(())
}

fn check_verb(path: &Path, json: bool) -> Result<(), Failure> {
    let (_, _, prog) = load_checked(path)?;
    if json {
        let defs: serde_json::Map<String, Value> =
            prog.defs.iter().map(|(n, t, _)| (n.to_string(), Value::from(print_type(t)))).collect();
        println!("{}", json!({"main": print_type(&prog.main.ty), "defs": defs}));
    } else {
        println!("{}", print_type(&prog.main.ty));
    }
    Ok(())
}

fn run_verb(path: &Path, fuel: usize, trace: bool, trace_json: bool, json: bool) -> Result<(), Failure> {
    let (input, _, prog) = load_checked(path)?;
    let t = eval(&prog.main_expr(), &prog.elaborated_defs(), fuel);
    if trace_json && !json {
        println!("{}", serde_json::to_string_pretty(&t.steps).expect("trace serializes"));
    } else if trace && !json {
        for s in &t.steps {
            println!("{}: {} → {}", s.rule, s.redex, s.contractum);
        }
    }
    let (outcome, shown) = match &t.outcome {
        Outcome::Value(v) => ("value", print_expr(v)),
        Outcome::Timeout(m) => ("timeout", print_expr(m)),
        Outcome::Stuck { at, .. } => {
            return Err(Failure::Language {
                stage: "evaluation",
                message: format!("stuck at `{}` after {} steps", print_expr(at), t.steps.len()),
                file: input.file,
                at: None,
            })
        }
    };
    if json {
        let mut v = json!({"outcome": outcome, "steps": t.steps.len(), "term": shown});
        if trace || trace_json {
            v["trace"] = serde_json::to_value(&t.steps).expect("trace serializes");
        }
        println!("{v}");
    } else if !trace_json {
        match outcome {
            "value" => println!("{shown}"),
            _ => println!("timeout after {} steps", t.steps.len()),
        }
    }
    Ok(())
}

fn project_verb(path: &Path, role: Option<&str>, all: bool, out: &Path, json: bool) -> Result<(), Failure> {
    let (input, unit, prog) = load_checked(path)?;
    if !all {
        let role = Name::new(role.expect("clap requires --role without --all"));
        if !prog.universe.contains(&role) {
            return Err(Failure::Usage(format!("`{role}` is not a process of {}", input.file)));
        }
        let local = project_expr(&prog.main, &role, &prog.universe).map_err(|e| projection_failure(&input, &unit, e))?;
        if json {
            println!("{}", json!({"role": role.as_str(), "program": print_local(&local)}));
        } else {
            println!("{}", print_local(&local));
        }
        return Ok(());
    }
    let (net, defs) = project_program(&prog).map_err(|e| projection_failure(&input, &unit, e))?;
    let io = |e: std::io::Error| Failure::Usage(format!("{}: {e}", out.display()));
    fs::create_dir_all(out).map_err(io)?;
    let mut written = Vec::new();
    for (p, l) in &net {
        let f = out.join(format!("{p}.local"));
        fs::write(&f, format!("{}\n", print_local(l))).map_err(io)?;
        written.push(f);
    }
    let f = out.join("defs.local");
    fs::write(&f, print_local_defs(&defs)).map_err(io)?;
    written.push(f);
    if json {
        let names: Vec<String> = written.iter().map(|f| f.display().to_string()).collect();
        println!("{}", json!({"written": names}));
    } else {
        for f in written {
            println!("wrote {}", f.display());
        }
    }
    Ok(())
}

fn label_json(l: &NetLabel) -> Value {
    let (kind, detail) = match l {
        NetLabel::Tau(_) => ("tau", String::new()),
        NetLabel::Com { from, to } => ("com", format!("{from} -> {to}")),
        NetLabel::Sel { label, .. } => ("sel", label.to_string()),
    };
    let participants: Vec<&str> = l.procs().into_iter().map(|p| p.as_str()).collect();
    json!({"kind": kind, "participants": participants, "detail": detail})
}

fn simulate_verb(path: &Path, sched: Scheduler, fuel: usize, trace_json: bool, json: bool) -> Result<(), Failure> {
    let (input, unit, prog) = load_checked(path)?;
    let (net, defs) = project_program(&prog).map_err(|e| projection_failure(&input, &unit, e))?;
    let r = run_network(&net, &defs, sched, fuel);
    let trace: Vec<Value> = r
        .trace
        .iter()
        .zip(&r.hashes)
        .map(|(l, h)| json!({"label": label_json(l), "state_hash": format!("{h:016x}")}))
        .collect();
    if json {
        let procs: serde_json::Map<String, Value> = r
            .last
            .iter()
            .map(|(p, l)| (p.to_string(), json!({"status": r.status[p], "final": print_local(l)})))
            .collect();
        let mut v = json!({"outcome": r.outcome, "steps": r.trace.len(), "processes": procs});
        if trace_json {
            v["trace"] = Value::Array(trace);
        }
        println!("{v}");
    } else if trace_json {
        println!("{}", serde_json::to_string_pretty(&trace).expect("trace serializes"));
    } else {
        let outcome = serde_json::to_value(r.outcome).expect("outcome serializes");
        println!("outcome: {} after {} steps", outcome.as_str().unwrap_or_default(), r.trace.len());
        for (p, l) in &r.last {
            let status = serde_json::to_value(r.status[p]).expect("status serializes");
            println!("{p} [{}]: {}", status.as_str().unwrap_or_default(), print_local(l));
        }
    }
    match r.outcome {
        RunOutcome::Deadlock => Err(Failure::Violation),
        _ => Ok(()),
    }
}

fn verify_one(path: &Path, theorem: TheoremArg, depth: usize, fuel: usize) -> Result<Report, Failure> {
    let (input, unit, prog) = load_checked(path)?;
    let sub = Subject::new(&input.stem, &prog).map_err(|e| projection_failure(&input, &unit, e))?;
    let r = match theorem {
        TheoremArg::Completeness => check_completeness(&sub, fuel),
        TheoremArg::Soundness => check_soundness(&sub, depth, fuel),
        TheoremArg::Deadlock => check_deadlock_freedom(&sub, depth),
    };
    r.map_err(|e| match e {
        VerifyError::Projection(e) => projection_failure(&input, &unit, e),
        e @ VerifyError::Type { .. } => {
            Failure::Language { stage: "verification", message: e.to_string(), file: input.file.clone(), at: None }
        }
    })
}

fn print_report(r: &Report) {
    let status = serde_json::to_value(r.status).expect("status serializes");
    println!(
        "{}: {} {} ({} states, {} transitions)",
        r.program,
        r.theorem,
        status.as_str().unwrap_or_default(),
        r.states,
        r.transitions
    );
    for v in &r.lemma_violations {
        println!("  lemma violation: {v}");
    }
    if let Some(c) = &r.counterexample {
        println!("  counterexample: {}", c.reason);
        if !c.trace.is_empty() {
            println!("  trace: {}", c.trace.join(", "));
        }
        for (p, l) in &c.state {
            println!("  {p}: {l}");
        }
    }
    for i in &r.inconclusive {
        println!("  inconclusive: {i}");
    }
}

fn verify_verb(
    files: &[PathBuf],
    theorem: TheoremArg,
    depth: usize,
    fuel: usize,
    report_json: Option<&Path>,
    json: bool,
) -> Result<(), Failure> {
    let mut reports = Vec::new();
    for f in files {
        let r = verify_one(f, theorem, depth, fuel)?;
        if !json {
            print_report(&r);
        }
        reports.push(r);
    }
    let all = serde_json::to_string_pretty(&reports).expect("reports serialize");
    if json {
        println!("{}", serde_json::to_string(&reports).expect("reports serialize"));
    }
    if let Some(path) = report_json {
        fs::write(path, all).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if reports.iter().any(|r| r.status == Status::Violation) {
        return Err(Failure::Violation);
    }
    Ok(())
}

fn examples_verb(name: Option<&str>, out: Option<&Path>, json: bool) -> Result<(), Failure> {
    if let Some(name) = name {
        let ex = example(name).ok_or_else(|| Failure::Usage(format!("no bundled example `{name}`")))?;
        if json {
            println!("{}", json!({"name": ex.name, "terminates": ex.terminates, "source": ex.source}));
        } else {
            print!("{}", ex.source);
        }
        return Ok(());
    }
    if let Some(dir) = out {
        let io = |e: std::io::Error| Failure::Usage(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        for ex in EXAMPLES {
            fs::write(dir.join(format!("{}.chor", ex.name)), ex.source).map_err(io)?;
        }
    }
    if json {
        let list: Vec<Value> = EXAMPLES.iter().map(|e| json!({"name": e.name, "terminates": e.terminates})).collect();
        println!("{}", Value::Array(list));
    } else {
        for e in EXAMPLES {
            let note = if e.terminates { "" } else { " (diverges)" };
            println!("{}{note}", e.name);
        }
    }
    Ok(())
}
