//! The line-oriented trace document format.
//!
//! ```text
//! #consistency-trace v1 threads=t1,t2 unique=true spec=register
//! t2 ld-inv
//! t2 ld-ret 1
//! t1 st-inv 1
//! t1 st-ret true
//! ```
//!
//! Store traces use `t1 up 0 x 0`, `t1 com 0`, `t2 qu 0 x 0` and
//! `env fwd t1 t2 0`. The combined register form `t2 ld 0` / `t1 st 1` is
//! accepted and expanded into an adjacent invocation/return pair. Other lines
//! starting with `#` are comments.

use std::fmt;

use epistemic_consistency::error::ParseError;
use epistemic_consistency::spec::OrderCertificate;
use epistemic_consistency::trace::{is_identifier, Action, Agent, Assign, Method, RevisionId, Var};
use epistemic_consistency::{Event, ThreadId, Trace, Value};

pub const MAGIC: &str = "#consistency-trace";
pub const VERSION: &str = "v1";

/// Specification named in a document header.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpecName {
    #[default]
    Register,
    None,
}

impl SpecName {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "register" => Some(SpecName::Register),
            "none" => Some(SpecName::None),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SpecName::Register => "register",
            SpecName::None => "none",
        }
    }
}

/// A parsed document: header metadata plus the trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceDocument {
    /// Declared threads. Every thread of the trace is among them.
    pub threads: Vec<ThreadId>,
    /// The trace has no repeated event.
    pub unique: bool,
    pub spec: SpecName,
    pub trace: Trace,
}

impl TraceDocument {
    /// A document for `trace` declaring exactly its threads, with the unique
    /// flag set when it holds.
    pub fn from_trace(trace: Trace, spec: SpecName) -> Self {
        let mut threads = trace.threads();
        for e in trace.iter() {
            if let Action::Fwd { from, to, .. } = e.action() {
                for t in [from, to] {
                    if !threads.contains(t) {
                        threads.push(t.clone());
                    }
                }
            }
        }
        TraceDocument {
            threads,
            unique: trace.is_unique(),
            spec,
            trace,
        }
    }

    pub fn header(&self) -> String {
        let threads: Vec<&str> = self.threads.iter().map(|t| t.as_str()).collect();
        format!(
            "{MAGIC} {VERSION} threads={} unique={} spec={}",
            threads.join(","),
            self.unique,
            self.spec.as_str()
        )
    }
}

impl fmt::Display for TraceDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header())?;
        for e in self.trace.iter() {
            for line in event_lines(e) {
                writeln!(f, "{line}")?;
            }
        }
        Ok(())
    }
}

fn value_token(v: &Value) -> String {
    match v {
        Value::Unit => "()".to_string(),
        other => other.to_string(),
    }
}

/// Document lines of one event; a combined call prints as two lines.
pub fn event_lines(e: &Event) -> Vec<String> {
    let agent = e.agent().to_string();
    let with_value = |kind: String, v: &Value| match v {
        Value::Unit => format!("{agent} {kind}"),
        v => format!("{agent} {kind} {}", value_token(v)),
    };
    match e.action() {
        Action::Inv { method, arg } => vec![with_value(format!("{method}-inv"), arg)],
        Action::Ret { method, value } => vec![with_value(format!("{method}-ret"), value)],
        Action::Call { method, arg, ret } => vec![
            with_value(format!("{method}-inv"), arg),
            with_value(format!("{method}-ret"), ret),
        ],
        Action::Qu { rev, query, result } => {
            vec![format!("{agent} qu {rev} {query} {}", value_token(result))]
        }
        Action::Up { rev, update } => {
            vec![format!("{agent} up {rev} {} {}", update.var, update.value)]
        }
        Action::Com { rev } => vec![format!("{agent} com {rev}")],
        Action::Fwd { from, to, rev } => vec![format!("{agent} fwd {from} {to} {rev}")],
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, (byte, c)) in line.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((b, col)) = start.take() {
                out.push(Token {
                    text: &line[b..byte],
                    column: col,
                });
            }
        } else if start.is_none() {
            start = Some((byte, k + 1));
        }
    }
    if let Some((b, col)) = start {
        out.push(Token {
            text: &line[b..],
            column: col,
        });
    }
    out
}

struct LineCtx<'a> {
    line: usize,
    toks: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> LineCtx<'a> {
    fn err_at(&self, k: usize, message: impl Into<String>) -> ParseError {
        let column = self.toks.get(k).map_or(self.end_column, |t| t.column);
        ParseError::new(self.line, column, message)
    }

    fn tok(&self, k: usize, what: &str) -> Result<&'a str, ParseError> {
        self.toks
            .get(k)
            .map(|t| t.text)
            .ok_or_else(|| self.err_at(k, format!("missing {what}")))
    }

    fn ident(&self, k: usize, what: &str) -> Result<&'a str, ParseError> {
        let s = self.tok(k, what)?;
        if is_identifier(s) {
            Ok(s)
        } else {
            Err(self.err_at(k, format!("invalid {what} `{s}`")))
        }
    }

    fn int(&self, k: usize, what: &str) -> Result<i64, ParseError> {
        let s = self.tok(k, what)?;
        s.parse()
            .map_err(|_| self.err_at(k, format!("expected integer {what}, found `{s}`")))
    }

    fn rev(&self, k: usize) -> Result<RevisionId, ParseError> {
        let s = self.tok(k, "revision id")?;
        s.parse()
            .map(RevisionId)
            .map_err(|_| self.err_at(k, format!("expected revision id, found `{s}`")))
    }

    fn value(&self, k: usize) -> Result<Value, ParseError> {
        match self.toks.get(k).map(|t| t.text) {
            None | Some("()") => Ok(Value::Unit),
            Some("true") => Ok(Value::Bool(true)),
            Some("false") => Ok(Value::Bool(false)),
            Some(s) => s
                .parse()
                .map(Value::Int)
                .map_err(|_| self.err_at(k, format!("invalid value `{s}`"))),
        }
    }

    fn arity(&self, n: usize) -> Result<(), ParseError> {
        match self.toks.get(n) {
            Some(t) => Err(ParseError::new(
                self.line,
                t.column,
                format!("unexpected `{}`", t.text),
            )),
            None => Ok(()),
        }
    }
}

fn parse_event_line(ctx: &LineCtx<'_>) -> Result<Vec<Event>, ParseError> {
    let agent_name = ctx.tok(0, "agent")?;
    let agent = if agent_name == "env" {
        Agent::Env
    } else if is_identifier(agent_name) {
        Agent::thread(agent_name)
    } else {
        return Err(ctx.err_at(0, format!("invalid agent `{agent_name}`")));
    };
    let kind = ctx.tok(1, "action kind")?;
    let (actions, used) = match kind {
        "qu" => (
            vec![Action::Qu {
                rev: ctx.rev(2)?,
                query: Var::new(ctx.ident(3, "variable")?),
                result: Value::Int(ctx.int(4, "query result")?),
            }],
            5,
        ),
        "up" => (
            vec![Action::Up {
                rev: ctx.rev(2)?,
                update: Assign::new(ctx.ident(3, "variable")?, ctx.int(4, "update value")?),
            }],
            5,
        ),
        "com" => (vec![Action::Com { rev: ctx.rev(2)? }], 3),
        "fwd" => (
            vec![Action::Fwd {
                from: ThreadId::new(ctx.ident(2, "source thread")?),
                to: ThreadId::new(ctx.ident(3, "target thread")?),
                rev: ctx.rev(4)?,
            }],
            5,
        ),
        "ld" => {
            let m = Method::new("ld");
            let ret = Value::Int(ctx.int(2, "loaded value")?);
            (
                vec![
                    Action::Inv {
                        method: m.clone(),
                        arg: Value::Unit,
                    },
                    Action::Ret {
                        method: m,
                        value: ret,
                    },
                ],
                3,
            )
        }
        "st" => {
            let m = Method::new("st");
            let arg = Value::Int(ctx.int(2, "stored value")?);
            (
                vec![
                    Action::Inv {
                        method: m.clone(),
                        arg,
                    },
                    Action::Ret {
                        method: m,
                        value: Value::Bool(true),
                    },
                ],
                3,
            )
        }
        k => {
            let (method, inv) = if let Some(m) = k.strip_suffix("-inv") {
                (m, true)
            } else if let Some(m) = k.strip_suffix("-ret") {
                (m, false)
            } else {
                return Err(ctx.err_at(1, format!("unknown action kind `{k}`")));
            };
            if !is_identifier(method) {
                return Err(ctx.err_at(1, format!("invalid method `{method}`")));
            }
            let method = Method::new(method);
            let v = ctx.value(2)?;
            let a = if inv {
                Action::Inv { method, arg: v }
            } else {
                Action::Ret { method, value: v }
            };
            (vec![a], 3)
        }
    };
    ctx.arity(used)?;
    actions
        .into_iter()
        .map(|a| match Event::new(agent.clone(), a) {
            Ok(e) => Ok(e),
            Err(epistemic_consistency::TraceError::AgentMismatch { reason, .. }) => {
                Err(ctx.err_at(0, reason))
            }
            Err(e) => Err(ctx.err_at(0, e.to_string())),
        })
        .collect()
}

fn parse_header(ctx: &LineCtx<'_>) -> Result<(Option<Vec<ThreadId>>, bool, SpecName), ParseError> {
    match ctx.toks.get(1).map(|t| t.text) {
        Some(VERSION) => {}
        Some(v) => return Err(ctx.err_at(1, format!("unsupported format version `{v}`"))),
        None => return Err(ctx.err_at(1, "missing format version")),
    }
    let mut threads = None;
    let mut unique = false;
    let mut spec = SpecName::Register;
    for (k, t) in ctx.toks.iter().enumerate().skip(2) {
        let Some((key, value)) = t.text.split_once('=') else {
            return Err(ctx.err_at(k, format!("expected key=value, found `{}`", t.text)));
        };
        match key {
            "threads" => {
                let mut names = Vec::new();
                for n in value.split(',').filter(|n| !n.is_empty()) {
                    if !is_identifier(n) || n == "env" {
                        return Err(ctx.err_at(k, format!("invalid thread name `{n}`")));
                    }
                    names.push(ThreadId::new(n));
                }
                threads = Some(names);
            }
            "unique" => {
                unique = match value {
                    "true" => true,
                    "false" => false,
                    _ => {
                        return Err(
                            ctx.err_at(k, format!("unique must be true or false, found `{value}`"))
                        )
                    }
                }
            }
            "spec" => {
                spec = SpecName::parse(value)
                    .ok_or_else(|| ctx.err_at(k, format!("unknown spec `{value}`")))?
            }
            _ => return Err(ctx.err_at(k, format!("unknown header key `{key}`"))),
        }
    }
    Ok((threads, unique, spec))
}

/// Parses a document. The header is optional; without one the threads are
/// those appearing, `unique=false` and `spec=register`.
pub fn parse_trace(text: &str) -> Result<TraceDocument, ParseError> {
    let mut header = None;
    let mut events: Vec<Event> = Vec::new();
    // Source line of each event, for diagnostics after the fact.
    let mut origin: Vec<(usize, usize)> = Vec::new();
    let mut seen_event = false;
    for (k, raw) in text.lines().enumerate() {
        let ctx = LineCtx {
            line: k + 1,
            toks: tokens(raw),
            end_column: raw.chars().count() + 1,
        };
        let Some(first) = ctx.toks.first() else {
            continue;
        };
        if first.text == MAGIC {
            if header.is_some() || seen_event {
                return Err(ctx.err_at(0, "header must come first and only once"));
            }
            header = Some(parse_header(&ctx)?);
            continue;
        }
        if first.text.starts_with('#') {
            continue;
        }
        seen_event = true;
        for e in parse_event_line(&ctx)? {
            events.push(e);
            origin.push((ctx.line, first.column));
        }
    }
    let trace = Trace::new(events);
    let (declared, unique, spec) = header.unwrap_or((None, false, SpecName::Register));
    let mentioned = TraceDocument::from_trace(trace.clone(), spec).threads;
    let threads = match declared {
        Some(d) => {
            for (k, e) in trace.iter().enumerate() {
                let mut names: Vec<&ThreadId> = e.thread().into_iter().collect();
                if let Action::Fwd { from, to, .. } = e.action() {
                    names.extend([from, to]);
                }
                if let Some(t) = names.into_iter().find(|t| !d.contains(t)) {
                    let (line, column) = origin[k];
                    return Err(ParseError::new(
                        line,
                        column,
                        format!("thread `{t}` is not declared in the header"),
                    ));
                }
            }
            d
        }
        None => mentioned,
    };
    if unique {
        if let Some((first, second)) = trace.first_duplicate() {
            let (line, column) = origin[second - 1];
            return Err(ParseError::new(
                line,
                column,
                format!(
                    "duplicate event (first at line {}) but header says unique=true",
                    origin[first - 1].0
                ),
            ));
        }
    }
    Ok(TraceDocument {
        threads,
        unique,
        spec,
        trace,
    })
}

/// Prefix of certificate lines. They are comments to [`parse_trace`].
pub const CERT_PREFIX: &str = "#@";

/// Certificate lines: the arbitration order as a position sequence and the
/// visibility order as `earlier:later` pairs, positions into the body.
pub fn print_certificate(cert: &OrderCertificate) -> String {
    let ar: Vec<String> = cert
        .arbitration_sequence()
        .iter()
        .map(|p| p.to_string())
        .collect();
    let vis: Vec<String> = cert
        .visibility
        .iter()
        .map(|(a, b)| format!("{a}:{b}"))
        .collect();
    format!(
        "{CERT_PREFIX} arbitration {}\n{CERT_PREFIX} visibility {}\n",
        ar.join(" "),
        vis.join(" ")
    )
    .replace(" \n", "\n")
}

/// Reads the certificate lines of a document, if it has any.
pub fn parse_certificate(text: &str) -> Result<Option<OrderCertificate>, ParseError> {
    let mut cert = OrderCertificate::default();
    let mut found = false;
    for (k, raw) in text.lines().enumerate() {
        let toks = tokens(raw);
        if toks.first().map(|t| t.text) != Some(CERT_PREFIX) {
            continue;
        }
        found = true;
        let ctx = LineCtx {
            line: k + 1,
            end_column: raw.chars().count() + 1,
            toks,
        };
        let position = |k: usize, s: &str| {
            s.parse::<usize>()
                .ok()
                .filter(|&p| p > 0)
                .ok_or_else(|| ctx.err_at(k, format!("expected position, found `{s}`")))
        };
        match ctx.tok(1, "certificate field")? {
            "arbitration" => {
                let seq = (2..ctx.toks.len())
                    .map(|k| position(k, ctx.toks[k].text))
                    .collect::<Result<Vec<_>, _>>()?;
                for (a, i) in seq.iter().enumerate() {
                    for j in &seq[a + 1..] {
                        cert.arbitration.insert((*i, *j));
                    }
                }
            }
            "visibility" => {
                for k in 2..ctx.toks.len() {
                    let s = ctx.toks[k].text;
                    let (a, b) = s.split_once(':').ok_or_else(|| {
                        ctx.err_at(k, format!("expected earlier:later, found `{s}`"))
                    })?;
                    cert.visibility.insert((position(k, a)?, position(k, b)?));
                }
            }
            other => return Err(ctx.err_at(1, format!("unknown certificate field `{other}`"))),
        }
    }
    Ok(found.then_some(cert))
}
