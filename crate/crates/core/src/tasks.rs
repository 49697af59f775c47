//! Task dispatch: every workspace task kind, with a one-line human summary
//! and a machine-readable JSON object per task. Reports are deterministic
//! given the seed; wall-clock timing goes only to the human output so JSON
//! reports stay byte-identical across runs.

use serde_json::{json, Value};

use crate::algebra::AlgebraHom;
use crate::complex::{BimoduleComplex, PerfectVerdict};
use crate::error::Error;
use crate::linalg::{Matrix, Scalar};
use crate::module::{pd, syzygy, Decision, Pd};
use crate::singular::{
    hom_singular_check, idempotent_singular_check, singular_equivalence_check, Mode, Overall,
    SubVerdict,
};
use crate::witness::{
    build_witness, corollary_witness, downstream_check, idempotent_witness, is_mcm, morita_witness,
    vdim, verify_witness, CondOutcome, CornerChoice, VerificationReport, Witness,
};
use crate::workspace::{
    resolve_algebra, resolve_bimodule, resolve_module, Task, Workspace, DEFAULT_CUTOFF,
    DEFAULT_SEED,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Unresolved,
    Fail,
    Error,
}

impl Status {
    fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unresolved => "unresolved",
            Status::Error => "error",
        }
    }
}

pub struct TaskReport {
    pub index: usize,
    pub kind: String,
    pub status: Status,
    pub json: Value,
    pub human: String,
}

fn decision_str(d: Decision) -> &'static str {
    match d {
        Decision::Yes => "yes",
        Decision::No => "no",
        Decision::Inconclusive => "inconclusive",
    }
}

fn overall_str(o: Overall) -> &'static str {
    match o {
        Overall::Certified => "certified",
        Overall::Refuted => "refuted",
        Overall::Unresolved => "unresolved",
    }
}

fn overall_status(o: Overall) -> Status {
    match o {
        Overall::Certified => Status::Pass,
        Overall::Refuted => Status::Fail,
        Overall::Unresolved => Status::Unresolved,
    }
}

fn sub_json(s: &SubVerdict) -> Value {
    match s {
        SubVerdict::Pass => json!({"verdict": "pass"}),
        SubVerdict::Fail { reason } => json!({"verdict": "fail", "reason": reason}),
        SubVerdict::Unresolved { reason } => json!({"verdict": "unresolved", "reason": reason}),
    }
}

fn pd_json(p: Pd) -> Value {
    match p {
        Pd::ZeroModule => json!("zero_module"),
        Pd::Finite(n) => json!(n),
        Pd::ExceedsCutoff => json!("exceeds_cutoff"),
    }
}

fn verification_json(r: &VerificationReport, level: usize) -> Value {
    json!({
        "verdict": match r.overall {
            CondOutcome::Pass => "pass",
            CondOutcome::Fail => "fail",
            CondOutcome::Unresolved => "unresolved",
        },
        "level": level,
        "conditions": {
            "i": [r.m_proj_left, r.m_proj_right],
            "ii": [r.n_proj_left, r.n_proj_right],
            "iii": decision_str(r.cond_iii),
            "iv": decision_str(r.cond_iv),
        },
        "dims": {
            "nm": r.nm_dim,
            "syzygy_a": r.syzygy_a_dim,
            "mn": r.mn_dim,
            "syzygy_b": r.syzygy_b_dim,
        },
        "seed": r.seed,
        "cutoff": r.cutoff,
    })
}

fn verification_status(r: &VerificationReport) -> Status {
    match r.overall {
        CondOutcome::Pass => Status::Pass,
        CondOutcome::Fail => Status::Fail,
        CondOutcome::Unresolved => Status::Unresolved,
    }
}

fn parse_idempotent(
    ws: &Workspace,
    alg: &crate::algebra::AlgebraRef,
    arg: &str,
) -> Result<Vec<Scalar>, Error> {
    let _ = ws;
    let f = alg.field();
    let mut e = vec![f.zero(); alg.dim()];
    for part in arg.split(',') {
        let i: usize = part
            .parse()
            .map_err(|_| Error::UnknownTask(format!("bad idempotent index {part}")))?;
        let ev = alg
            .idempotents()
            .get(i)
            .ok_or_else(|| Error::UnknownTask(format!("idempotent index {i} out of range")))?;
        for (k, c) in ev.iter().enumerate() {
            e[k] = f.add(&e[k], c);
        }
    }
    Ok(e)
}

fn need_args(t: &Task, n: usize) -> Result<(), Error> {
    if t.args.len() < n {
        return Err(Error::UnknownTask(format!(
            "task {} expects at least {n} arguments, got {}",
            t.kind,
            t.args.len()
        )));
    }
    Ok(())
}

fn dispatch(ws: &Workspace, t: &Task, seed: u64, cutoff: usize) -> Result<(Status, Value), Error> {
    match t.kind.as_str() {
        "check-algebra" => {
            need_args(t, 1)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            a.validate()?;
            Ok((
                Status::Pass,
                json!({
                    "verdict": "pass",
                    "dim": a.dim(),
                    "idempotents": a.idempotents().len(),
                    "radical_dim": a.radical_basis().len(),
                }),
            ))
        }
        "pd" => {
            need_args(t, 1)?;
            let m = resolve_module(ws, &t.args[0])?;
            let p = pd(&m, cutoff);
            let status = if p == Pd::ExceedsCutoff {
                Status::Unresolved
            } else {
                Status::Pass
            };
            Ok((
                status,
                json!({
                    "verdict": if p == Pd::ExceedsCutoff { "exceeds_cutoff" } else { "pass" },
                    "pd": pd_json(p),
                    "dim": m.dim(),
                    "cutoff": cutoff,
                }),
            ))
        }
        "syzygy" => {
            need_args(t, 2)?;
            let m = resolve_module(ws, &t.args[0])?;
            let n: usize = t.args[1]
                .parse()
                .map_err(|_| Error::UnknownTask("bad syzygy count".into()))?;
            let sy = syzygy(&m, n);
            Ok((
                Status::Pass,
                json!({
                    "verdict": "pass",
                    "steps": n,
                    "dim": sy.dim(),
                    "top": crate::module::top_multiplicities(&sy),
                }),
            ))
        }
        "perfect" => {
            need_args(t, 1)?;
            let m = resolve_module(ws, &t.args[0])?;
            let c = crate::complex::Complex::stalk(m, 0);
            match crate::complex::is_perfect(&c, cutoff) {
                PerfectVerdict::Perfect { bound } => Ok((
                    Status::Pass,
                    json!({"verdict": "perfect", "bound": bound, "cutoff": cutoff}),
                )),
                PerfectVerdict::NotPerfectWithinCutoff { cutoff } => Ok((
                    Status::Unresolved,
                    json!({"verdict": "not_perfect_within_cutoff", "cutoff": cutoff}),
                )),
            }
        }
        "vdim" => {
            need_args(t, 1)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            match vdim(&a, cutoff)? {
                Some(v) => Ok((
                    Status::Pass,
                    json!({"verdict": "pass", "vdim": v, "cutoff": cutoff}),
                )),
                None => Ok((
                    Status::Unresolved,
                    json!({"verdict": "exceeds_cutoff", "cutoff": cutoff}),
                )),
            }
        }
        "gorenstein" => {
            need_args(t, 1)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            match vdim(&a, cutoff)? {
                Some(v) => Ok((
                    Status::Pass,
                    json!({"verdict": "pass", "gorenstein": true, "vdim": v}),
                )),
                None => Ok((
                    Status::Unresolved,
                    json!({"verdict": "exceeds_cutoff", "gorenstein": "unknown", "cutoff": cutoff}),
                )),
            }
        }
        "mcm" => {
            need_args(t, 1)?;
            let m = resolve_module(ws, &t.args[0])?;
            let ans = is_mcm(&m, cutoff)?;
            Ok((
                Status::Pass,
                json!({"verdict": "pass", "mcm": ans, "dim": m.dim()}),
            ))
        }
        "sing-equiv" => {
            need_args(t, 1)?;
            let x = resolve_bimodule(ws, &t.args[0])?;
            let mode = match t.args.get(1).map(|s| s.as_str()) {
                None | Some("simples") => Mode::Simples,
                Some("direct") => Mode::Direct,
                Some("gorenstein") => Mode::Gorenstein,
                Some(other) => {
                    return Err(Error::UnknownTask(format!("unknown mode {other}")));
                }
            };
            let rep = singular_equivalence_check(&BimoduleComplex::stalk(x, 0), cutoff, mode)?;
            Ok((
                overall_status(rep.overall),
                json!({
                    "verdict": overall_str(rep.overall),
                    "mode": match mode { Mode::Direct => "direct", Mode::Simples => "simples", Mode::Gorenstein => "gorenstein" },
                    "x_perfect_left": rep.x_perfect_left.is_perfect(),
                    "x_perfect_right": rep.x_perfect_right.is_perfect(),
                    "dual_hypothesis": sub_json(&rep.dual_hypothesis),
                    "unit_cone": sub_json(&rep.unit),
                    "counit_cone": sub_json(&rep.counit),
                    "cutoff": cutoff,
                }),
            ))
        }
        "hom-check" => {
            need_args(t, 2)?;
            let src = resolve_algebra(ws, &t.args[0])?;
            let tgt = resolve_algebra(ws, &t.args[1])?;
            let f = src.field();
            let rows: Vec<Vec<Scalar>> = t.args[2..]
                .join(" ")
                .split(';')
                .map(|row| {
                    row.split_whitespace()
                        .map(|w| {
                            let v: i64 = w
                                .parse()
                                .map_err(|_| Error::UnknownTask(format!("bad matrix entry {w}")))?;
                            Ok(f.from_i64(v))
                        })
                        .collect::<Result<Vec<_>, Error>>()
                })
                .collect::<Result<_, _>>()?;
            if rows.len() != tgt.dim() || rows.iter().any(|r| r.len() != src.dim()) {
                return Err(Error::UnknownTask(format!(
                    "hom matrix must be {} rows of {} entries",
                    tgt.dim(),
                    src.dim()
                )));
            }
            let mat = Matrix::from_entries(
                f,
                tgt.dim(),
                src.dim(),
                rows.into_iter().flatten().collect(),
            );
            let hom = AlgebraHom::new(src, tgt, mat)?;
            let rep = hom_singular_check(&hom, cutoff)?;
            Ok((
                overall_status(rep.overall),
                json!({
                    "verdict": overall_str(rep.overall),
                    "pd_left": pd_json(rep.pd_left),
                    "pd_right": pd_json(rep.pd_right),
                    "cone_a": sub_json(&rep.cone_a),
                    "cone_b": sub_json(&rep.cone_b),
                    "cutoff": cutoff,
                }),
            ))
        }
        "idem-check" => {
            need_args(t, 2)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            let e = parse_idempotent(ws, &a, &t.args[1])?;
            let rep = idempotent_singular_check(&a, &e, cutoff)?;
            Ok((
                overall_status(rep.overall),
                json!({
                    "verdict": overall_str(rep.overall),
                    "corner_dim": rep.corner.dim(),
                    "cond_i": [pd_json(rep.cond_i.0), rep.cond_i.1],
                    "cond_ii": [rep.cond_ii.0, pd_json(rep.cond_ii.1)],
                    "quotient_pd": pd_json(rep.quotient_pd),
                    "route": rep.route,
                    "cutoff": cutoff,
                }),
            ))
        }
        "idem-witness" => {
            need_args(t, 2)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            let e = parse_idempotent(ws, &a, &t.args[1])?;
            let out = idempotent_witness(&a, &e, cutoff, seed)?;
            let mut j = verification_json(&out.report, out.level);
            j["route"] = json!(out.route);
            j["corner_dim"] = json!(out.check.corner.dim());
            Ok((verification_status(&out.report), j))
        }
        "morita-witness" => {
            need_args(t, 5)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            let b = resolve_algebra(ws, &t.args[1])?;
            let m = resolve_bimodule(ws, &t.args[2])?;
            let n = resolve_bimodule(ws, &t.args[3])?;
            let corner = match t.args[4].as_str() {
                "TopLeft" => CornerChoice::TopLeft,
                "BottomRight" => CornerChoice::BottomRight,
                other => {
                    return Err(Error::UnknownTask(format!("unknown corner {other}")));
                }
            };
            let out = morita_witness(&a, &b, &m, &n, corner, cutoff, seed)?;
            let mut j = verification_json(&out.inner.report, out.inner.level);
            j["lambda_dim"] = json!(out.lambda.dim());
            j["formula_level"] = match out.formula_level {
                Some(l) => json!(l),
                None => json!("exceeds_cutoff"),
            };
            Ok((verification_status(&out.inner.report), j))
        }
        "build-witness" => {
            need_args(t, 1)?;
            let x = resolve_bimodule(ws, &t.args[0])?;
            let forced = if t.args.len() >= 3 {
                let s: i64 = t.args[1]
                    .parse()
                    .map_err(|_| Error::UnknownTask("bad index".into()))?;
                let sp: i64 = t.args[2]
                    .parse()
                    .map_err(|_| Error::UnknownTask("bad index".into()))?;
                Some((s, sp))
            } else {
                None
            };
            let out = build_witness(&BimoduleComplex::stalk(x, 0), cutoff, seed, forced, true)?;
            let mut j = verification_json(&out.report, out.witness.level);
            j["s"] = json!(out.s);
            j["s_prime"] = json!(out.s_prime);
            Ok((verification_status(&out.report), j))
        }
        "verify-witness" => {
            need_args(t, 5)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            let b = resolve_algebra(ws, &t.args[1])?;
            let m = resolve_bimodule(ws, &t.args[2])?;
            let n = resolve_bimodule(ws, &t.args[3])?;
            let level: usize = t.args[4]
                .parse()
                .map_err(|_| Error::UnknownTask("bad level".into()))?;
            let w = Witness::new(a, b, m, n, level)?;
            let rep = verify_witness(&w, seed, cutoff)?;
            Ok((verification_status(&rep), verification_json(&rep, level)))
        }
        "corollary-witness" => {
            need_args(t, 3)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            let b = resolve_algebra(ws, &t.args[1])?;
            let m = resolve_bimodule(ws, &t.args[2])?;
            let out = corollary_witness(&a, &b, &m, cutoff, seed)?;
            let mut j = verification_json(&out.report, out.level);
            j["vdim_a"] = json!(out.vdim_a);
            j["vdim_b"] = json!(out.vdim_b);
            j["env_bound_a"] = json!(out.env_bound_a);
            j["env_bound_b"] = json!(out.env_bound_b);
            j["mcm_functor_ok"] = json!(out.mcm_functor_ok);
            Ok((verification_status(&out.report), j))
        }
        "downstream-check" => {
            need_args(t, 6)?;
            let a = resolve_algebra(ws, &t.args[0])?;
            let b = resolve_algebra(ws, &t.args[1])?;
            let m = resolve_bimodule(ws, &t.args[2])?;
            let n = resolve_bimodule(ws, &t.args[3])?;
            let level: usize = t.args[4]
                .parse()
                .map_err(|_| Error::UnknownTask("bad level".into()))?;
            let x = resolve_module(ws, &t.args[5])?;
            let w = Witness::new(a, b, m, n, level)?;
            let d = downstream_check(&w, &x, seed)?;
            let status = match d {
                Decision::Yes => Status::Pass,
                Decision::No => Status::Fail,
                Decision::Inconclusive => Status::Unresolved,
            };
            Ok((
                status,
                json!({"verdict": decision_str(d), "level": level, "x_dim": x.dim(), "seed": seed}),
            ))
        }
        other => Err(Error::UnknownTask(other.to_string())),
    }
}

/// Runs one task; errors become reports rather than aborting the run.
pub fn run_task(
    ws: &Workspace,
    index: usize,
    default_seed: u64,
    default_cutoff: usize,
) -> TaskReport {
    let t = &ws.tasks[index];
    let seed = t.seed.unwrap_or(default_seed);
    let cutoff = t.cutoff.unwrap_or(default_cutoff);
    let started = std::time::Instant::now();
    let (status, mut json) = match dispatch(ws, t, seed, cutoff) {
        Ok(r) => r,
        Err(e) => (
            Status::Error,
            json!({"verdict": "error", "message": format!("{e}")}),
        ),
    };
    json["task"] = json!(index);
    json["kind"] = json!(t.kind);
    let ms = started.elapsed().as_secs_f64() * 1000.0;
    let human = format!(
        "[{index}] {} {} -> {} ({ms:.1} ms)",
        t.kind,
        t.args.join(" "),
        status.label(),
    );
    TaskReport {
        index,
        kind: t.kind.clone(),
        status,
        json,
        human,
    }
}

/// Runs every task (optionally in parallel), preserving task order in the
/// output, and computes the process exit code.
pub fn run_workspace(
    ws: &Workspace,
    default_seed: Option<u64>,
    default_cutoff: Option<usize>,
    parallel: bool,
) -> (Vec<TaskReport>, i32) {
    let seed = default_seed.unwrap_or(DEFAULT_SEED);
    let cutoff = default_cutoff.unwrap_or(DEFAULT_CUTOFF);
    let n = ws.tasks.len();
    let reports: Vec<TaskReport> = if parallel {
        let mut slots: Vec<Option<TaskReport>> = Vec::with_capacity(n);
        slots.resize_with(n, || None);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for i in 0..n {
                handles.push(scope.spawn(move || run_task(ws, i, seed, cutoff)));
            }
            for (i, h) in handles.into_iter().enumerate() {
                slots[i] = Some(h.join().expect("task thread"));
            }
        });
        slots.into_iter().map(|s| s.expect("filled")).collect()
    } else {
        (0..n).map(|i| run_task(ws, i, seed, cutoff)).collect()
    };
    let exit = if reports.iter().any(|r| r.status == Status::Error) {
        3
    } else if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if reports.iter().any(|r| r.status == Status::Unresolved) {
        2
    } else {
        0
    };
    (reports, exit)
}

/// The canonical JSON document: schema header plus one object per task.
pub fn json_document(reports: &[TaskReport]) -> String {
    let doc = json!({
        "schema": 1,
        "reports": reports.iter().map(|r| r.json.clone()).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

/// Convenience used by the binary and the reproducibility tests: parse, run,
/// and render both outputs.
pub fn run_text(
    text: &str,
    field_override: Option<crate::linalg::FieldSpec>,
    seed: Option<u64>,
    cutoff: Option<usize>,
    parallel: bool,
) -> Result<(String, String, i32), Error> {
    let ws = crate::workspace::parse_workspace(text, field_override)?;
    let (reports, exit) = run_workspace(&ws, seed, cutoff, parallel);
    let mut human = String::new();
    for r in &reports {
        human.push_str(&r.human);
        human.push('\n');
    }
    let counts = |s: Status| reports.iter().filter(|r| r.status == s).count();
    human.push_str(&format!(
        "{} tasks: {} pass, {} fail, {} unresolved, {} error\n",
        reports.len(),
        counts(Status::Pass),
        counts(Status::Fail),
        counts(Status::Unresolved),
        counts(Status::Error),
    ));
    Ok((human, json_document(&reports), exit))
}
