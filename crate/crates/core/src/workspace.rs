//! The line-oriented workspace format: field choice, quiver presentations,
//! raw structure-constant algebras, modules and bimodules by explicit action
//! matrices, and a task list. Names must be declared before use; every
//! constructed object is validated eagerly with the offending line reported.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{
    algebra_from_quiver, from_structure_constants, opposite, tensor_algebra, AlgebraRef, Arrow,
    QuiverPresentation, Relation, DEFAULT_NILPOTENCY_BOUND,
};
use crate::bimodule::Bimodule;
use crate::error::Error;
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::module::{indecomposable_projective, simples, Module};

pub const DEFAULT_CUTOFF: usize = 50;
pub const DEFAULT_SEED: u64 = 0;

/// A named object of the workspace.
#[derive(Clone)]
pub enum Item {
    Algebra {
        alg: AlgebraRef,
        source: AlgebraSource,
    },
    Module(Module),
    Bimodule(Bimodule),
}

#[derive(Clone)]
pub enum AlgebraSource {
    Quiver(QuiverPresentation),
    Raw,
}

#[derive(Debug, Clone)]
pub struct Task {
    pub kind: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub cutoff: Option<usize>,
    pub line: usize,
}

pub struct Workspace {
    pub field: FieldSpec,
    pub names: Vec<String>,
    pub items: BTreeMap<String, Item>,
    pub tasks: Vec<Task>,
}

pub const TASK_KINDS: &[&str] = &[
    "check-algebra",
    "pd",
    "syzygy",
    "perfect",
    "vdim",
    "gorenstein",
    "mcm",
    "sing-equiv",
    "hom-check",
    "idem-check",
    "idem-witness",
    "morita-witness",
    "build-witness",
    "verify-witness",
    "corollary-witness",
    "downstream-check",
];

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    field: FieldSpec,
    field_overridden: bool,
    ws: Workspace,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn verr(line: usize, msg: impl Into<String>) -> Error {
    Error::Validation {
        line,
        msg: msg.into(),
    }
}

/// Parses a workspace, optionally overriding the FIELD directive.
pub fn parse_workspace(text: &str, field_override: Option<FieldSpec>) -> Result<Workspace, Error> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut p = Parser {
        lines,
        pos: 0,
        field: field_override.unwrap_or_default(),
        field_overridden: field_override.is_some(),
        ws: Workspace {
            field: field_override.unwrap_or_default(),
            names: Vec::new(),
            items: BTreeMap::new(),
            tasks: Vec::new(),
        },
    };
    p.run()?;
    p.ws.field = p.field;
    Ok(p.ws)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let l = self.peek();
        if l.is_some() {
            self.pos += 1;
        }
        l
    }

    fn run(&mut self) -> Result<(), Error> {
        while let Some((line, text)) = self.next() {
            let mut words = text.split_whitespace();
            let head = words.next().unwrap();
            let rest: Vec<&str> = words.collect();
            match head {
                "FIELD" => self.parse_field(line, &rest)?,
                "QUIVER" => self.parse_quiver(line, &rest)?,
                "ALGEBRA" => self.parse_algebra(line, &rest)?,
                "MODULE" => self.parse_module(line, &rest)?,
                "BIMODULE" => self.parse_bimodule(line, &rest)?,
                "TASK" => self.parse_task(line, &rest)?,
                other => return Err(perr(line, format!("unknown directive {other}"))),
            }
        }
        Ok(())
    }

    fn declare(&mut self, line: usize, name: &str, item: Item) -> Result<(), Error> {
        if self.ws.items.contains_key(name) {
            return Err(verr(line, format!("name {name} is already declared")));
        }
        self.ws.names.push(name.to_string());
        self.ws.items.insert(name.to_string(), item);
        Ok(())
    }

    fn parse_field(&mut self, line: usize, rest: &[&str]) -> Result<(), Error> {
        let spec = match rest {
            ["prime", p] => {
                let p: u64 = p
                    .parse()
                    .map_err(|_| perr(line, "FIELD prime expects an integer"))?;
                FieldSpec::Prime(p)
            }
            ["rational"] => FieldSpec::Rational,
            _ => return Err(perr(line, "expected FIELD prime <p> or FIELD rational")),
        };
        spec.validate().map_err(|e| verr(line, format!("{e}")))?;
        if !self.field_overridden {
            self.field = spec;
        }
        Ok(())
    }

    fn parse_quiver(&mut self, line: usize, rest: &[&str]) -> Result<(), Error> {
        let [name] = rest else {
            return Err(perr(line, "expected QUIVER <name>"));
        };
        let name = name.to_string();
        let mut vertices: Vec<String> = Vec::new();
        let mut arrows: Vec<Arrow> = Vec::new();
        let mut relations: Vec<Relation> = Vec::new();
        let mut bound = DEFAULT_NILPOTENCY_BOUND;
        loop {
            let Some((l, text)) = self.next() else {
                return Err(perr(line, "QUIVER block without END"));
            };
            let mut words = text.split_whitespace();
            let head = words.next().unwrap();
            let rest: Vec<&str> = words.collect();
            match head {
                "END" => break,
                "VERTICES" => {
                    vertices = rest.iter().map(|s| s.to_string()).collect();
                }
                "ARROW" => {
                    // ARROW x: a -> b
                    let joined = rest.join(" ");
                    let (lbl, path) = joined
                        .split_once(':')
                        .ok_or_else(|| perr(l, "expected ARROW <label>: <src> -> <tgt>"))?;
                    let (src, tgt) = path
                        .split_once("->")
                        .ok_or_else(|| perr(l, "expected -> in ARROW"))?;
                    let find = |v: &str| {
                        vertices
                            .iter()
                            .position(|x| x == v.trim())
                            .ok_or_else(|| perr(l, format!("unknown vertex {v}")))
                    };
                    arrows.push(Arrow {
                        label: lbl.trim().to_string(),
                        source: find(src)?,
                        target: find(tgt)?,
                    });
                }
                "REL" => {
                    relations.push(parse_relation(l, &rest.join(" "), &arrows)?);
                }
                "BOUND" => {
                    let [b] = rest.as_slice() else {
                        return Err(perr(l, "expected BOUND <n>"));
                    };
                    bound = b.parse().map_err(|_| perr(l, "bad BOUND"))?;
                }
                other => return Err(perr(l, format!("unknown quiver directive {other}"))),
            }
        }
        let q = QuiverPresentation {
            vertices,
            arrows,
            relations,
            nilpotency_bound: bound,
        };
        let alg = algebra_from_quiver(&q, self.field).map_err(|e| verr(line, format!("{e}")))?;
        self.declare(
            line,
            &name,
            Item::Algebra {
                alg: Arc::new(alg),
                source: AlgebraSource::Quiver(q),
            },
        )
    }

    fn parse_algebra(&mut self, line: usize, rest: &[&str]) -> Result<(), Error> {
        let [name, kw, dim] = rest else {
            return Err(perr(line, "expected ALGEBRA <name> DIM <n>"));
        };
        if *kw != "DIM" {
            return Err(perr(line, "expected DIM"));
        }
        let dim: usize = dim.parse().map_err(|_| perr(line, "bad dimension"))?;
        let mut labels: Vec<String> = (0..dim).map(|i| format!("b{i}")).collect();
        let f = self.field;
        let mut mult = vec![vec![vec![f.zero(); dim]; dim]; dim];
        let mut unit = None;
        let mut idems: Vec<Vec<Scalar>> = Vec::new();
        let mut rad: Vec<Vec<Scalar>> = Vec::new();
        let mut saw_idem = false;
        let mut saw_rad = false;
        loop {
            let Some((l, text)) = self.next() else {
                return Err(perr(line, "ALGEBRA block without END"));
            };
            let mut words = text.split_whitespace();
            let head = words.next().unwrap();
            let rest: Vec<&str> = words.collect();
            match head {
                "END" => break,
                "LABELS" => {
                    if rest.len() != dim {
                        return Err(perr(l, "LABELS must list one label per basis element"));
                    }
                    labels = rest.iter().map(|s| s.to_string()).collect();
                }
                "UNIT" => unit = Some(self.parse_vector(l, &rest, dim)?),
                "MUL" => {
                    // MUL <i> <j> = c0 c1 ...
                    if rest.len() < 3 || rest[2] != "=" {
                        return Err(perr(l, "expected MUL <i> <j> = <coords>"));
                    }
                    let lookup = |s: &str| -> Result<usize, Error> {
                        labels
                            .iter()
                            .position(|x| x == s)
                            .or_else(|| s.parse::<usize>().ok().filter(|&i| i < dim))
                            .ok_or_else(|| perr(l, format!("unknown basis element {s}")))
                    };
                    let i = lookup(rest[0])?;
                    let j = lookup(rest[1])?;
                    mult[i][j] = self.parse_vector(l, &rest[3..], dim)?;
                }
                "IDEMPOTENT" => {
                    saw_idem = true;
                    idems.push(self.parse_vector(l, &rest, dim)?);
                }
                "RADICAL" => {
                    saw_rad = true;
                    rad.push(self.parse_vector(l, &rest, dim)?);
                }
                other => return Err(perr(l, format!("unknown algebra directive {other}"))),
            }
        }
        let alg = from_structure_constants(
            f,
            labels,
            mult,
            unit,
            saw_idem.then_some(idems),
            saw_rad.then_some(rad),
        )
        .map_err(|e| verr(line, format!("{e}")))?;
        self.declare(
            line,
            name,
            Item::Algebra {
                alg: Arc::new(alg),
                source: AlgebraSource::Raw,
            },
        )
    }

    fn parse_vector(&self, line: usize, words: &[&str], dim: usize) -> Result<Vec<Scalar>, Error> {
        if words.len() != dim {
            return Err(perr(line, format!("expected {dim} coordinates")));
        }
        words.iter().map(|w| self.parse_scalar(line, w)).collect()
    }

    fn parse_scalar(&self, line: usize, w: &str) -> Result<Scalar, Error> {
        if let Some((n, d)) = w.split_once('/') {
            let n: i64 = n.parse().map_err(|_| perr(line, "bad numerator"))?;
            let d: i64 = d.parse().map_err(|_| perr(line, "bad denominator"))?;
            self.field
                .from_fraction(n, d)
                .map_err(|e| verr(line, format!("{e}")))
        } else {
            let n: i64 = w
                .parse()
                .map_err(|_| perr(line, format!("bad scalar {w}")))?;
            Ok(self.field.from_i64(n))
        }
    }

    fn parse_action_block(
        &mut self,
        open_line: usize,
        labels: &[String],
        dim: usize,
    ) -> Result<Vec<Matrix>, Error> {
        let f = self.field;
        let mut action = vec![Matrix::zeros(f, dim, dim); labels.len()];
        loop {
            let Some((l, text)) = self.next() else {
                return Err(perr(open_line, "block without END"));
            };
            let mut words = text.split_whitespace();
            let head = words.next().unwrap();
            let rest: Vec<&str> = words.collect();
            match head {
                "END" => break,
                "ACTION" => {
                    if rest.len() < 2 || rest[1] != "=" {
                        return Err(perr(l, "expected ACTION <label> = rows"));
                    }
                    let idx = labels
                        .iter()
                        .position(|x| x == rest[0])
                        .ok_or_else(|| perr(l, format!("unknown basis label {}", rest[0])))?;
                    let rows: Vec<Vec<Scalar>> = rest[2..]
                        .join(" ")
                        .split(';')
                        .map(|row| {
                            let ws: Vec<&str> = row.split_whitespace().collect();
                            self.parse_vector(l, &ws, dim)
                        })
                        .collect::<Result<_, _>>()?;
                    if rows.len() != dim {
                        return Err(perr(l, format!("expected {dim} rows")));
                    }
                    let data: Vec<Scalar> = rows.into_iter().flatten().collect();
                    action[idx] = Matrix::from_entries(f, dim, dim, data);
                }
                other => return Err(perr(l, format!("unknown directive {other}"))),
            }
        }
        Ok(action)
    }

    fn algebra(&self, line: usize, name: &str) -> Result<AlgebraRef, Error> {
        match self.ws.items.get(name) {
            Some(Item::Algebra { alg, .. }) => Ok(alg.clone()),
            Some(_) => Err(verr(line, format!("{name} is not an algebra"))),
            None => Err(perr(
                line,
                format!("{name} is not declared (forward references are rejected)"),
            )),
        }
    }

    fn parse_module(&mut self, line: usize, rest: &[&str]) -> Result<(), Error> {
        let [name, over, alg_name, dimkw, dim] = rest else {
            return Err(perr(line, "expected MODULE <name> OVER <alg> DIM <n>"));
        };
        if *over != "OVER" || *dimkw != "DIM" {
            return Err(perr(line, "expected MODULE <name> OVER <alg> DIM <n>"));
        }
        let alg = self.algebra(line, alg_name)?;
        let dim: usize = dim.parse().map_err(|_| perr(line, "bad dimension"))?;
        let labels = alg.labels().to_vec();
        let action = self.parse_action_block(line, &labels, dim)?;
        let m = Module::new(alg, action).map_err(|e| verr(line, format!("{e}")))?;
        self.declare(line, name, Item::Module(m))
    }

    fn parse_bimodule(&mut self, line: usize, rest: &[&str]) -> Result<(), Error> {
        let [name, over, left, right, dimkw, dim] = rest else {
            return Err(perr(
                line,
                "expected BIMODULE <name> OVER <left> <right> DIM <n>",
            ));
        };
        if *over != "OVER" || *dimkw != "DIM" {
            return Err(perr(line, "expected BIMODULE <name> OVER <B> <A> DIM <n>"));
        }
        let b = self.algebra(line, left)?;
        let a = self.algebra(line, right)?;
        let t =
            Arc::new(tensor_algebra(&b, &opposite(&a)).map_err(|e| verr(line, format!("{e}")))?);
        let dim: usize = dim.parse().map_err(|_| perr(line, "bad dimension"))?;
        let labels = t.labels().to_vec();
        let action = self.parse_action_block(line, &labels, dim)?;
        let m = Module::new(t, action).map_err(|e| verr(line, format!("{e}")))?;
        let bim = Bimodule::new(m, b, a).map_err(|e| verr(line, format!("{e}")))?;
        self.declare(line, name, Item::Bimodule(bim))
    }

    fn parse_task(&mut self, line: usize, rest: &[&str]) -> Result<(), Error> {
        if rest.is_empty() {
            return Err(perr(line, "expected TASK <kind> ..."));
        }
        let kind = rest[0].to_string();
        if !TASK_KINDS.contains(&kind.as_str()) {
            return Err(Error::UnknownTask(kind));
        }
        let mut args = Vec::new();
        let mut seed = None;
        let mut cutoff = None;
        let mut i = 1;
        while i < rest.len() {
            match rest[i] {
                "SEED" => {
                    let v = rest
                        .get(i + 1)
                        .ok_or_else(|| perr(line, "SEED needs a value"))?;
                    seed = Some(v.parse().map_err(|_| perr(line, "bad SEED"))?);
                    i += 2;
                }
                "CUTOFF" => {
                    let v = rest
                        .get(i + 1)
                        .ok_or_else(|| perr(line, "CUTOFF needs a value"))?;
                    cutoff = Some(v.parse().map_err(|_| perr(line, "bad CUTOFF"))?);
                    i += 2;
                }
                w => {
                    args.push(w.to_string());
                    i += 1;
                }
            }
        }
        let task = Task {
            kind,
            args,
            seed,
            cutoff,
            line,
        };
        validate_task_references(&self.ws, &task)?;
        self.ws.tasks.push(task);
        Ok(())
    }
}

fn parse_relation(line: usize, text: &str, arrows: &[Arrow]) -> Result<Relation, Error> {
    // Terms separated by + or -; each term [coeff *]? path, path = a*b*c in
    // travel order.
    let mut terms = Vec::new();
    let mut rest = text.trim();
    let mut sign = 1i64;
    while !rest.is_empty() {
        let end = rest
            .char_indices()
            .find(|(i, c)| *i > 0 && (*c == '+' || *c == '-'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let term = rest[..end].trim();
        let term = term.strip_prefix('+').unwrap_or(term).trim();
        let (coeff, term) = match term.strip_prefix('-') {
            Some(t) => (-1i64, t.trim()),
            None => (1i64, term),
        };
        let mut num = coeff * sign;
        let mut den = 1i64;
        let mut path_part = term;
        let pieces: Vec<&str> = term.split('*').map(|s| s.trim()).collect();
        if let Some(first) = pieces.first() {
            if let Ok(n) = first.parse::<i64>() {
                num *= n;
                path_part = term.split_once('*').map(|(_, r)| r).unwrap_or("");
            } else if let Some((n, d)) = first.split_once('/') {
                if let (Ok(n), Ok(d)) = (n.parse::<i64>(), d.parse::<i64>()) {
                    num *= n;
                    den = d;
                    path_part = term.split_once('*').map(|(_, r)| r).unwrap_or("");
                }
            }
        }
        let path: Vec<usize> = path_part
            .split('*')
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(|s| {
                arrows
                    .iter()
                    .position(|a| a.label == s)
                    .ok_or_else(|| perr(line, format!("unknown arrow {s}")))
            })
            .collect::<Result<_, _>>()?;
        terms.push((num, den, path));
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
        rest = rest[end + 1..].trim();
    }
    Ok(Relation { terms })
}

/// Checks that every plain name mentioned by a task expression is declared.
fn validate_task_references(ws: &Workspace, task: &Task) -> Result<(), Error> {
    for arg in &task.args {
        for name in arg.split(':') {
            if name.is_empty() || name.parse::<i64>().is_ok() {
                continue;
            }
            if matches!(
                name,
                "regular"
                    | "simple"
                    | "proj"
                    | "syzygy"
                    | "envsyzygy"
                    | "stalk"
                    | "zero"
                    | "dual"
                    | "TopLeft"
                    | "BottomRight"
            ) {
                continue;
            }
            // Matrix fragments and index lists are allowed through.
            if name == ";"
                || name
                    .chars()
                    .all(|c| c.is_ascii_digit() || c == ',' || c == '-')
            {
                continue;
            }
            if !ws.items.contains_key(name) {
                return Err(perr(
                    task.line,
                    format!("{name} is not declared (forward references are rejected)"),
                ));
            }
        }
    }
    Ok(())
}

/// Resolved value of a task-argument expression.
pub enum Value {
    Algebra(AlgebraRef),
    Module(Module),
    Bimodule(Bimodule),
}

/// Resolves the colon expression language: declared names, and the builders
/// regular:<alg>, simple:<alg>:<i>, proj:<alg>:<i>, syzygy:<expr>:<n>,
/// envsyzygy:<alg>:<l>, zero:<B>:<A>, dual:<expr>.
pub fn resolve(ws: &Workspace, expr: &str) -> Result<Value, Error> {
    if let Some(item) = ws.items.get(expr) {
        return Ok(match item {
            Item::Algebra { alg, .. } => Value::Algebra(alg.clone()),
            Item::Module(m) => Value::Module(m.clone()),
            Item::Bimodule(b) => Value::Bimodule(b.clone()),
        });
    }
    let (head, rest) = expr
        .split_once(':')
        .ok_or_else(|| Error::UnknownTask(format!("unknown object {expr}")))?;
    match head {
        "regular" => {
            let Value::Algebra(a) = resolve(ws, rest)? else {
                return Err(Error::UnknownTask(format!("{rest} is not an algebra")));
            };
            // As a bimodule view; callers wanting the one-sided module can
            // restrict.
            let env = Arc::new(crate::algebra::enveloping(&a));
            Ok(Value::Bimodule(Bimodule::regular(&a, env)))
        }
        "simple" => {
            let (alg_expr, idx) = split_last(rest)?;
            let Value::Algebra(a) = resolve(ws, alg_expr)? else {
                return Err(Error::UnknownTask(format!("{alg_expr} is not an algebra")));
            };
            let i: usize = idx
                .parse()
                .map_err(|_| Error::UnknownTask(format!("bad index {idx}")))?;
            let mut ss = simples(&a);
            if i >= ss.len() {
                return Err(Error::UnknownTask(format!(
                    "simple index {i} out of range (the algebra has {})",
                    ss.len()
                )));
            }
            Ok(Value::Module(ss.swap_remove(i)))
        }
        "proj" => {
            let (alg_expr, idx) = split_last(rest)?;
            let Value::Algebra(a) = resolve(ws, alg_expr)? else {
                return Err(Error::UnknownTask(format!("{alg_expr} is not an algebra")));
            };
            let i: usize = idx
                .parse()
                .map_err(|_| Error::UnknownTask(format!("bad index {idx}")))?;
            if i >= a.idempotents().len() {
                return Err(Error::UnknownTask(format!("vertex {i} out of range")));
            }
            Ok(Value::Module(indecomposable_projective(&a, i).module))
        }
        "syzygy" => {
            let (inner, n) = split_last(rest)?;
            let n: usize = n
                .parse()
                .map_err(|_| Error::UnknownTask(format!("bad syzygy count {n}")))?;
            match resolve(ws, inner)? {
                Value::Module(m) => Ok(Value::Module(crate::module::syzygy(&m, n))),
                Value::Bimodule(b) => Ok(Value::Bimodule(b.syzygy(n))),
                Value::Algebra(_) => Err(Error::UnknownTask(
                    "syzygy expects a module or bimodule".into(),
                )),
            }
        }
        "envsyzygy" => {
            let (alg_expr, l) = split_last(rest)?;
            let Value::Algebra(a) = resolve(ws, alg_expr)? else {
                return Err(Error::UnknownTask(format!("{alg_expr} is not an algebra")));
            };
            let l: usize = l
                .parse()
                .map_err(|_| Error::UnknownTask(format!("bad level {l}")))?;
            let env = Arc::new(crate::algebra::enveloping(&a));
            Ok(Value::Bimodule(Bimodule::regular(&a, env).syzygy(l)))
        }
        "zero" => {
            let (b_expr, a_expr) = split_last(rest)?;
            let Value::Algebra(b) = resolve(ws, b_expr)? else {
                return Err(Error::UnknownTask(format!("{b_expr} is not an algebra")));
            };
            let Value::Algebra(a) = resolve(ws, a_expr)? else {
                return Err(Error::UnknownTask(format!("{a_expr} is not an algebra")));
            };
            Ok(Value::Bimodule(crate::bimodule::zero_bimodule(&b, &a)?))
        }
        "dual" => match resolve(ws, rest)? {
            Value::Module(m) => Ok(Value::Module(crate::module::dual(&m))),
            _ => Err(Error::UnknownTask("dual expects a module".into())),
        },
        "stalk" => resolve(ws, rest),
        other => Err(Error::UnknownTask(format!("unknown constructor {other}"))),
    }
}

fn split_last(expr: &str) -> Result<(&str, &str), Error> {
    expr.rsplit_once(':')
        .ok_or_else(|| Error::UnknownTask(format!("expected a :-argument in {expr}")))
}

/// Expects a module; regular:<alg> yields the left regular module here.
pub fn resolve_module(ws: &Workspace, expr: &str) -> Result<Module, Error> {
    match resolve(ws, expr)? {
        Value::Module(m) => Ok(m),
        Value::Bimodule(b) => {
            if expr.starts_with("regular:") {
                Ok(b.restrict_left())
            } else {
                Ok(b.module().clone())
            }
        }
        Value::Algebra(a) => Ok(Module::regular(a)),
    }
}

pub fn resolve_bimodule(ws: &Workspace, expr: &str) -> Result<Bimodule, Error> {
    match resolve(ws, expr)? {
        Value::Bimodule(b) => Ok(b),
        _ => Err(Error::UnknownTask(format!("{expr} is not a bimodule"))),
    }
}

pub fn resolve_algebra(ws: &Workspace, expr: &str) -> Result<AlgebraRef, Error> {
    match resolve(ws, expr)? {
        Value::Algebra(a) => Ok(a),
        _ => Err(Error::UnknownTask(format!("{expr} is not an algebra"))),
    }
}

fn scalar_str(f: FieldSpec, s: &Scalar) -> String {
    match f.to_small_int(s) {
        Some(v) => v.to_string(),
        None => s.to_string(),
    }
}

/// Canonical re-emission of a workspace; parsing it back yields an identical
/// workspace.
pub fn serialize(ws: &Workspace) -> String {
    let mut out = String::new();
    match ws.field {
        FieldSpec::Prime(p) => out.push_str(&format!("FIELD prime {p}\n")),
        FieldSpec::Rational => out.push_str("FIELD rational\n"),
    }
    for name in &ws.names {
        out.push('\n');
        match &ws.items[name] {
            Item::Algebra { alg, source } => match source {
                AlgebraSource::Quiver(q) => {
                    out.push_str(&format!("QUIVER {name}\n"));
                    out.push_str(&format!("  VERTICES {}\n", q.vertices.join(" ")));
                    for a in &q.arrows {
                        out.push_str(&format!(
                            "  ARROW {}: {} -> {}\n",
                            a.label, q.vertices[a.source], q.vertices[a.target]
                        ));
                    }
                    for r in &q.relations {
                        let terms: Vec<String> = r
                            .terms
                            .iter()
                            .map(|(n, d, p)| {
                                let path: Vec<&str> =
                                    p.iter().map(|&i| q.arrows[i].label.as_str()).collect();
                                let c = if *d == 1 {
                                    if *n == 1 {
                                        String::new()
                                    } else {
                                        format!("{n}*")
                                    }
                                } else {
                                    format!("{n}/{d}*")
                                };
                                format!("{c}{}", path.join("*"))
                            })
                            .collect();
                        out.push_str(&format!("  REL {}\n", terms.join(" + ")));
                    }
                    if q.nilpotency_bound != DEFAULT_NILPOTENCY_BOUND {
                        out.push_str(&format!("  BOUND {}\n", q.nilpotency_bound));
                    }
                    out.push_str("END\n");
                }
                AlgebraSource::Raw => {
                    let f = alg.field();
                    out.push_str(&format!("ALGEBRA {name} DIM {}\n", alg.dim()));
                    out.push_str(&format!("  LABELS {}\n", alg.labels().join(" ")));
                    let fmt_vec = |v: &[Scalar]| {
                        v.iter()
                            .map(|s| scalar_str(f, s))
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    out.push_str(&format!("  UNIT {}\n", fmt_vec(alg.unit())));
                    for i in 0..alg.dim() {
                        for j in 0..alg.dim() {
                            let sv = alg.mult_entry(i, j);
                            if sv.is_empty() {
                                continue;
                            }
                            let mut dense = vec![f.zero(); alg.dim()];
                            for (k, c) in sv {
                                dense[*k] = c.clone();
                            }
                            out.push_str(&format!("  MUL {i} {j} = {}\n", fmt_vec(&dense)));
                        }
                    }
                    for e in alg.idempotents() {
                        out.push_str(&format!("  IDEMPOTENT {}\n", fmt_vec(e)));
                    }
                    for r in alg.radical_basis() {
                        out.push_str(&format!("  RADICAL {}\n", fmt_vec(r)));
                    }
                    out.push_str("END\n");
                }
            },
            Item::Module(m) => {
                let alg = m.algebra();
                let alg_name = find_algebra_name(ws, alg);
                out.push_str(&format!("MODULE {name} OVER {alg_name} DIM {}\n", m.dim()));
                emit_actions(&mut out, m, alg.labels());
                out.push_str("END\n");
            }
            Item::Bimodule(b) => {
                let left = find_algebra_name(ws, b.left());
                let right = find_algebra_name(ws, b.right());
                out.push_str(&format!(
                    "BIMODULE {name} OVER {left} {right} DIM {}\n",
                    b.dim()
                ));
                emit_actions(&mut out, b.module(), b.module().algebra().labels());
                out.push_str("END\n");
            }
        }
    }
    if !ws.tasks.is_empty() {
        out.push('\n');
    }
    for t in &ws.tasks {
        out.push_str(&format!("TASK {}", t.kind));
        for a in &t.args {
            out.push_str(&format!(" {a}"));
        }
        if let Some(s) = t.seed {
            out.push_str(&format!(" SEED {s}"));
        }
        if let Some(c) = t.cutoff {
            out.push_str(&format!(" CUTOFF {c}"));
        }
        out.push('\n');
    }
    out
}

/// Name of a declared algebra: pointer identity first, since two declared
/// algebras may be structurally equal without being the same object.
fn find_algebra_name(ws: &Workspace, target: &AlgebraRef) -> String {
    let by_ptr = ws.names.iter().find(|n| match &ws.items[n.as_str()] {
        Item::Algebra { alg, .. } => Arc::ptr_eq(alg, target),
        _ => false,
    });
    by_ptr
        .or_else(|| {
            ws.names.iter().find(|n| match &ws.items[n.as_str()] {
                Item::Algebra { alg, .. } => alg.structural_eq(target),
                _ => false,
            })
        })
        .cloned()
        .unwrap_or_default()
}

fn emit_actions(out: &mut String, m: &Module, labels: &[String]) {
    let f = m.field();
    for (i, lbl) in labels.iter().enumerate() {
        let mat = m.action(i);
        if mat.is_zero() {
            continue;
        }
        let rows: Vec<String> = (0..m.dim())
            .map(|r| {
                (0..m.dim())
                    .map(|c| scalar_str(f, mat.get(r, c)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        out.push_str(&format!("  ACTION {lbl} = {}\n", rows.join(" ; ")));
    }
}

/// Structural equality of workspaces, for the round-trip contract.
pub fn workspace_eq(a: &Workspace, b: &Workspace) -> bool {
    if a.field != b.field || a.names != b.names || a.tasks.len() != b.tasks.len() {
        return false;
    }
    for (x, y) in a.tasks.iter().zip(&b.tasks) {
        if x.kind != y.kind || x.args != y.args || x.seed != y.seed || x.cutoff != y.cutoff {
            return false;
        }
    }
    for name in &a.names {
        match (&a.items[name], &b.items[name]) {
            (Item::Algebra { alg: x, .. }, Item::Algebra { alg: y, .. }) => {
                if !x.structural_eq(y) {
                    return false;
                }
            }
            (Item::Module(x), Item::Module(y)) => {
                if !x.equal_action(y) {
                    return false;
                }
            }
            (Item::Bimodule(x), Item::Bimodule(y)) => {
                if !x.module().equal_action(y.module()) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "\
FIELD prime 32003

QUIVER A2
  VERTICES v
  ARROW x: v -> v
  REL x*x
END

QUIVER T2
  VERTICES 1 2
  ARROW a: 1 -> 2
END

MODULE K OVER A2 DIM 1
  ACTION v = 1
END

TASK check-algebra A2
TASK pd K CUTOFF 10
TASK verify-witness A2 A2 regular:A2 regular:A2 0 SEED 7
";

    #[test]
    fn parses_basic_workspace() {
        let ws = parse_workspace(BASIC, None).unwrap();
        assert_eq!(ws.names, vec!["A2", "T2", "K"]);
        assert_eq!(ws.tasks.len(), 3);
        let Item::Algebra { alg, .. } = &ws.items["A2"] else {
            panic!("A2 must be an algebra")
        };
        assert_eq!(alg.dim(), 2);
        let Item::Module(k) = &ws.items["K"] else {
            panic!("K must be a module")
        };
        assert_eq!(k.dim(), 1);
        assert_eq!(ws.tasks[2].seed, Some(7));
    }

    #[test]
    fn forward_reference_rejected() {
        let text = "FIELD prime 32003\nTASK pd M\n";
        assert!(matches!(
            parse_workspace(text, None),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn short_relation_rejected() {
        let text = "\
FIELD prime 32003
QUIVER BAD
  VERTICES v
  ARROW x: v -> v
  REL x
END
";
        assert!(matches!(
            parse_workspace(text, None),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn invalid_module_action_rejected() {
        let text = "\
FIELD prime 32003
QUIVER A2
  VERTICES v
  ARROW x: v -> v
  REL x*x
END
MODULE BAD OVER A2 DIM 1
  ACTION v = 1
  ACTION x = 1
END
";
        assert!(matches!(
            parse_workspace(text, None),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn round_trip_serialization() {
        let ws = parse_workspace(BASIC, None).unwrap();
        let text = serialize(&ws);
        let ws2 = parse_workspace(&text, None).unwrap();
        assert!(workspace_eq(&ws, &ws2));
        // And serialization is a fixed point.
        assert_eq!(text, serialize(&ws2));
    }

    #[test]
    fn expression_resolution() {
        let ws = parse_workspace(BASIC, None).unwrap();
        let m = resolve_module(&ws, "simple:A2:0").unwrap();
        assert_eq!(m.dim(), 1);
        let b = resolve_bimodule(&ws, "envsyzygy:A2:1").unwrap();
        assert_eq!(b.dim(), 2);
        let p = resolve_module(&ws, "proj:T2:0").unwrap();
        assert_eq!(p.dim(), 2);
        let sy = resolve_module(&ws, "syzygy:simple:A2:0:2").unwrap();
        assert_eq!(sy.dim(), 1);
        assert!(resolve(&ws, "nope").is_err());
    }

    #[test]
    fn relation_with_coefficients_parses() {
        let text = "\
FIELD prime 32003
QUIVER C
  VERTICES v
  ARROW x: v -> v
  ARROW y: v -> v
  REL x*x
  REL y*y
  REL x*y - y*x
END
TASK check-algebra C
";
        let ws = parse_workspace(text, None).unwrap();
        let Item::Algebra { alg, .. } = &ws.items["C"] else {
            panic!()
        };
        assert_eq!(alg.dim(), 4);
    }

    #[test]
    fn raw_algebra_block_parses_and_round_trips() {
        let text = "\
FIELD prime 32003
ALGEBRA R DIM 2
  LABELS e x
  UNIT 1 0
  MUL e e = 1 0
  MUL e x = 0 1
  MUL x e = 0 1
END
TASK check-algebra R
";
        let ws = parse_workspace(text, None).unwrap();
        let Item::Algebra { alg, .. } = &ws.items["R"] else {
            panic!()
        };
        assert_eq!(alg.dim(), 2);
        assert_eq!(alg.radical_basis().len(), 1);
        assert_eq!(alg.idempotents().len(), 1);
        let re = serialize(&ws);
        let ws2 = parse_workspace(&re, None).unwrap();
        assert!(workspace_eq(&ws, &ws2));
    }

    #[test]
    fn rational_mode_runs_end_to_end() {
        let text = "\
FIELD rational
QUIVER A2
  VERTICES v
  ARROW x: v -> v
  REL x*x
END
TASK vdim A2
TASK verify-witness A2 A2 regular:A2 regular:A2 0
";
        let (_, json, exit) = crate::tasks::run_text(text, None, None, None, false).unwrap();
        assert_eq!(exit, 0, "rational pipeline must pass: {json}");
    }
}
