//! Prefix syntax for formulas.
//!
//! ```text
//! formula := name                                  nullary atom, `true`, `false`
//!          | (pred term*)                          atom
//!          | (not f) | (and f f+) | (or f f+) | (implies f f) | (iff f f)
//!          | (since f f) | (until f f) | (weak-until f f)
//!          | (once f) | (so-far f) | (eventually f) | (always f)
//!          | (forall (x sort) f) | (exists (x sort) f)
//!          | (knows (agent*) f)                    agents: thread names, `obs`, `all`
//! ```
//!
//! Sorts are `thread`, `query`, `value`, `rev`, `action` and `log`. Constants
//! take the sort the predicate expects at their position: identifiers for
//! threads and queries, integers or `true`/`false` for values, integers for
//! revisions. Actions and logs have no literal syntax. `;` starts a comment.

use super::*;
use crate::error::ParseError;
use crate::logic::eval::AtomBinding;
use crate::trace::{is_identifier, RevisionId, ThreadId, Value, Var};

#[derive(Debug, Clone)]
enum Tok {
    Open,
    Close,
    Word(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Spanned> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("");
        let mut word_start: Option<usize> = None;
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let flush = |start: &mut Option<usize>, end: usize, out: &mut Vec<Spanned>| {
            if let Some(s) = start.take() {
                out.push(Spanned {
                    tok: Tok::Word(line[s..end].to_string()),
                    line: ln + 1,
                    column: line[..s].chars().count() + 1,
                });
            }
        };
        for &(b, c) in &chars {
            if c == '(' || c == ')' || c.is_whitespace() {
                flush(&mut word_start, b, &mut out);
                if c != ' ' && !c.is_whitespace() {
                    out.push(Spanned {
                        tok: if c == '(' { Tok::Open } else { Tok::Close },
                        line: ln + 1,
                        column: line[..b].chars().count() + 1,
                    });
                }
            } else if word_start.is_none() {
                word_start = Some(b);
            }
        }
        flush(&mut word_start, line.len(), &mut out);
    }
    out
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    atoms: &'a AtomBinding,
    all_threads: &'a [ThreadId],
    scope: Vec<(String, Sort)>,
    end: (usize, usize),
}

/// Parses a closed formula. Predicates must be bound in `atoms`; the group
/// keyword `all` stands for `all_threads`.
pub fn parse_formula(
    text: &str,
    atoms: &AtomBinding,
    all_threads: &[ThreadId],
) -> Result<Formula, ParseError> {
    let toks = tokenize(text);
    let lines = text.lines().count().max(1);
    let last_len = text.lines().last().map_or(0, |l| l.chars().count());
    let mut p = Parser {
        toks,
        pos: 0,
        atoms,
        all_threads,
        scope: Vec::new(),
        end: (lines, last_len + 1),
    };
    let f = p.formula()?;
    if let Some(t) = p.toks.get(p.pos) {
        return Err(ParseError::new(
            t.line,
            t.column,
            "unexpected input after formula",
        ));
    }
    Ok(f)
}

impl<'a> Parser<'a> {
    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        match self.toks.get(self.pos) {
            Some(t) => ParseError::new(t.line, t.column, msg),
            None => ParseError::new(self.end.0, self.end.1, msg),
        }
    }

    fn next(&mut self) -> Result<Spanned, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.err_here("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        match self.next()? {
            Spanned { tok: Tok::Open, .. } => Ok(()),
            t => Err(ParseError::new(t.line, t.column, "expected `(`")),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.next()? {
            Spanned {
                tok: Tok::Close, ..
            } => Ok(()),
            t => Err(ParseError::new(t.line, t.column, "expected `)`")),
        }
    }

    fn word(&mut self) -> Result<(String, usize, usize), ParseError> {
        match self.next()? {
            Spanned {
                tok: Tok::Word(w),
                line,
                column,
            } => Ok((w, line, column)),
            t => Err(ParseError::new(t.line, t.column, "expected a name")),
        }
    }

    fn at_close(&self) -> bool {
        matches!(
            self.toks.get(self.pos),
            Some(Spanned {
                tok: Tok::Close,
                ..
            })
        )
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let t = self.next()?;
        match t.tok {
            Tok::Close => Err(ParseError::new(t.line, t.column, "unexpected `)`")),
            Tok::Word(w) => self.nullary(&w, t.line, t.column),
            Tok::Open => {
                let (head, line, column) = self.word()?;
                let f = self.compound(&head, line, column)?;
                self.expect_close()?;
                Ok(f)
            }
        }
    }

    fn nullary(&self, name: &str, line: usize, column: usize) -> Result<Formula, ParseError> {
        if name == "false" {
            return Ok(bottom());
        }
        match self.atoms.signature(name) {
            Some([]) => Ok(atom(name, vec![])),
            Some(sig) => Err(ParseError::new(
                line,
                column,
                format!("predicate `{name}` takes {} arguments", sig.len()),
            )),
            None => Err(ParseError::new(
                line,
                column,
                format!("unknown predicate `{name}`"),
            )),
        }
    }

    fn several(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        while !self.at_close() {
            out.push(self.formula()?);
        }
        Ok(out)
    }

    fn exactly(
        &mut self,
        n: usize,
        head: &str,
        line: usize,
        column: usize,
    ) -> Result<Vec<Formula>, ParseError> {
        let fs = self.several()?;
        if fs.len() != n {
            return Err(ParseError::new(
                line,
                column,
                format!("`{head}` takes {n} operand(s), got {}", fs.len()),
            ));
        }
        Ok(fs)
    }

    fn compound(&mut self, head: &str, line: usize, column: usize) -> Result<Formula, ParseError> {
        let unary = |p: &mut Self, build: fn(Formula) -> Formula| -> Result<Formula, ParseError> {
            let mut fs = p.exactly(1, head, line, column)?;
            Ok(build(fs.pop().expect("one operand")))
        };
        let binary =
            |p: &mut Self, build: fn(Formula, Formula) -> Formula| -> Result<Formula, ParseError> {
                let mut fs = p.exactly(2, head, line, column)?;
                let b = fs.pop().expect("two operands");
                let a = fs.pop().expect("two operands");
                Ok(build(a, b))
            };
        match head {
            "not" => unary(self, not),
            "once" => unary(self, once),
            "so-far" => unary(self, so_far),
            "eventually" => unary(self, eventually),
            "always" => unary(self, always),
            "implies" => binary(self, implies),
            "iff" => binary(self, iff),
            "since" => binary(self, since),
            "until" => binary(self, until),
            "weak-until" => binary(self, weak_until),
            "and" | "or" => {
                let fs = self.several()?;
                if fs.len() < 2 {
                    return Err(ParseError::new(
                        line,
                        column,
                        format!("`{head}` takes at least 2 operands"),
                    ));
                }
                let build = if head == "and" { and } else { or };
                Ok(fs.into_iter().reduce(build).expect("non-empty"))
            }
            "forall" | "exists" => {
                self.expect_open()?;
                let (var, vl, vc) = self.word()?;
                if !is_identifier(&var) {
                    return Err(ParseError::new(
                        vl,
                        vc,
                        format!("`{var}` is not a variable name"),
                    ));
                }
                let (sort_name, sl, sc) = self.word()?;
                let sort = Sort::from_name(&sort_name).ok_or_else(|| {
                    ParseError::new(sl, sc, format!("unknown sort `{sort_name}`"))
                })?;
                self.expect_close()?;
                self.scope.push((var.clone(), sort));
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                Ok(if head == "forall" {
                    forall(&var, sort, body)
                } else {
                    exists(&var, sort, body)
                })
            }
            "knows" => {
                self.expect_open()?;
                let mut threads: Vec<ThreadId> = Vec::new();
                let mut observer = false;
                while !self.at_close() {
                    let (name, l, c) = self.word()?;
                    match name.as_str() {
                        "obs" => observer = true,
                        "all" => threads.extend(self.all_threads.iter().cloned()),
                        n if is_identifier(n) => threads.push(ThreadId::new(n)),
                        n => {
                            return Err(ParseError::new(
                                l,
                                c,
                                format!("`{n}` is not a thread name"),
                            ))
                        }
                    }
                }
                self.expect_close()?;
                let group = AgentGroup::new(threads, observer)
                    .map_err(|m| ParseError::new(line, column, m))?;
                let body = self.formula()?;
                Ok(knows(group, body))
            }
            pred => self.predicate(pred, line, column),
        }
    }

    fn predicate(&mut self, pred: &str, line: usize, column: usize) -> Result<Formula, ParseError> {
        let sig: Vec<Sort> = self
            .atoms
            .signature(pred)
            .ok_or_else(|| ParseError::new(line, column, format!("unknown predicate `{pred}`")))?
            .to_vec();
        let mut args = Vec::new();
        while !self.at_close() {
            let (w, l, c) = self.word()?;
            let k = args.len();
            let Some(&want) = sig.get(k) else {
                return Err(ParseError::new(
                    l,
                    c,
                    format!("predicate `{pred}` takes {} arguments", sig.len()),
                ));
            };
            args.push(self.term(&w, want, l, c)?);
        }
        if args.len() != sig.len() {
            return Err(self.err_here(format!(
                "predicate `{pred}` takes {} arguments, got {}",
                sig.len(),
                args.len()
            )));
        }
        Ok(atom(pred, args))
    }

    fn term(&self, w: &str, want: Sort, line: usize, column: usize) -> Result<Term, ParseError> {
        if let Some((_, sort)) = self.scope.iter().rev().find(|(v, _)| v == w) {
            if *sort != want {
                return Err(ParseError::new(
                    line,
                    column,
                    format!("variable `{w}` has sort {sort}, expected {want}"),
                ));
            }
            return Ok(Term::Var(w.to_string()));
        }
        let bad = |what: &str| ParseError::new(line, column, format!("`{w}` is not {what}"));
        let datum = match want {
            Sort::Thread if is_identifier(w) => Datum::Thread(ThreadId::new(w)),
            Sort::Thread => return Err(bad("a thread name")),
            Sort::Query if is_identifier(w) => Datum::Query(Var::new(w)),
            Sort::Query => return Err(bad("a variable name")),
            Sort::Value => Datum::Value(match w {
                "true" => Value::Bool(true),
                "false" => Value::Bool(false),
                _ => Value::Int(w.parse().map_err(|_| bad("a value"))?),
            }),
            Sort::Rev => Datum::Rev(RevisionId(w.parse().map_err(|_| bad("a revision id"))?)),
            Sort::Action | Sort::Log => {
                return Err(ParseError::new(
                    line,
                    column,
                    format!("sort {want} has no literal syntax; bind `{w}` with a quantifier"),
                ))
            }
        };
        Ok(Term::Const(datum))
    }
}
