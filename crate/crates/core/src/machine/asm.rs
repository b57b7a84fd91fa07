//! The textual machine language.
//!
//! ```text
//! # comment
//! name: omega_clock
//! start: s
//! limit: l
//! halt: h
//! s *** -> ***, R, s      # `*` in a read matches anything,
//! l *** -> ***, R, h      # `*` in a write keeps the bit read
//! ```
//!
//! Optional headers are `query: <state>` and `tapes: 4`. Reusable pieces
//! are written as `macro name(a, b) ... end` and spliced with
//! `call name(x, y)`: parameters are bound to the caller's states and every
//! other state of the body gets a fresh name per call.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{Move, Program, ProgramError, Row, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsmError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header `{0}:`")]
    MissingHeader(&'static str),
    #[error("line {line}: state `{state}` pattern {pattern} is covered twice")]
    Ambiguous { line: usize, state: String, pattern: String },
    #[error("line {line}: unknown macro `{0}`", line = .1)]
    UnknownMacro(String, usize),
    #[error("macro `{0}` expands recursively")]
    RecursiveMacro(String),
    #[error(transparent)]
    Program(#[from] ProgramError),
}

fn syntax(line: usize, msg: impl Into<String>) -> AsmError {
    AsmError::Syntax { line, msg: msg.into() }
}

#[derive(Clone, Debug)]
struct RawRow {
    line: usize,
    state: String,
    read: Vec<Option<bool>>,
    write: Vec<Option<bool>>,
    mv: Move,
    next: String,
}

#[derive(Clone, Debug)]
enum Item {
    Row(RawRow),
    Call { line: usize, name: String, args: Vec<String> },
}

#[derive(Clone, Debug)]
struct Macro {
    params: Vec<String>,
    body: Vec<Item>,
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\''))
}

fn parse_bits(line: usize, s: &str) -> Result<Vec<Option<bool>>, AsmError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(Some(false)),
            '1' => Ok(Some(true)),
            '*' => Ok(None),
            _ => Err(syntax(line, format!("bad bit `{c}` in `{s}`"))),
        })
        .collect()
}

fn parse_row(line: usize, text: &str) -> Result<RawRow, AsmError> {
    let (lhs, rhs) = text
        .split_once("->")
        .ok_or_else(|| syntax(line, "expected `state bits -> bits, move, state`"))?;
    let mut l = lhs.split_whitespace();
    let state = l.next().ok_or_else(|| syntax(line, "missing state"))?;
    let read = l.next().ok_or_else(|| syntax(line, "missing read pattern"))?;
    if l.next().is_some() || !valid_ident(state) {
        return Err(syntax(line, "malformed left-hand side"));
    }
    let parts: Vec<&str> = rhs.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(syntax(line, "right-hand side needs `bits, move, state`"));
    }
    let mv = match parts[1] {
        "L" => Move::L,
        "R" => Move::R,
        other => return Err(syntax(line, format!("move must be L or R, got `{other}`"))),
    };
    if !valid_ident(parts[2]) {
        return Err(syntax(line, format!("bad state name `{}`", parts[2])));
    }
    let read = parse_bits(line, read)?;
    let write = parse_bits(line, parts[0])?;
    if read.len() != write.len() {
        return Err(syntax(line, "read and write patterns differ in width"));
    }
    Ok(RawRow {
        line,
        state: state.to_string(),
        read,
        write,
        mv,
        next: parts[2].to_string(),
    })
}

fn parse_call(line: usize, rest: &str) -> Result<(String, Vec<String>), AsmError> {
    let rest = rest.trim();
    let (name, args) = match rest.split_once('(') {
        Some((n, a)) => {
            let a = a
                .strip_suffix(')')
                .ok_or_else(|| syntax(line, "unclosed `(`"))?;
            let args: Vec<String> = a
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            (n.trim(), args)
        }
        None => (rest, Vec::new()),
    };
    if !valid_ident(name) || !args.iter().all(|a| valid_ident(a)) {
        return Err(syntax(line, "malformed name or argument list"));
    }
    Ok((name.to_string(), args))
}

struct Expander<'a> {
    macros: &'a HashMap<String, Macro>,
    counter: usize,
    active: Vec<String>,
}

impl Expander<'_> {
    fn expand(
        &mut self,
        items: &[Item],
        rename: &dyn Fn(&str) -> String,
        out: &mut Vec<RawRow>,
    ) -> Result<(), AsmError> {
        for item in items {
            match item {
                Item::Row(r) => {
                    let mut r = r.clone();
                    r.state = rename(&r.state);
                    r.next = rename(&r.next);
                    out.push(r);
                }
                Item::Call { line, name, args } => {
                    let m = self
                        .macros
                        .get(name)
                        .ok_or_else(|| AsmError::UnknownMacro(name.clone(), *line))?;
                    if self.active.contains(name) {
                        return Err(AsmError::RecursiveMacro(name.clone()));
                    }
                    if m.params.len() != args.len() {
                        return Err(syntax(
                            *line,
                            format!("`{name}` takes {} arguments", m.params.len()),
                        ));
                    }
                    self.counter += 1;
                    let tag = format!("{name}.{}", self.counter);
                    let bound: HashMap<String, String> = m
                        .params
                        .iter()
                        .cloned()
                        .zip(args.iter().map(|a| rename(a)))
                        .collect();
                    let inner = move |s: &str| match bound.get(s) {
                        Some(b) => b.clone(),
                        None => format!("{tag}.{s}"),
                    };
                    self.active.push(name.clone());
                    self.expand(&m.body, &inner, out)?;
                    self.active.pop();
                }
            }
        }
        Ok(())
    }
}

/// Parses and assembles a program.
pub fn parse_program(src: &str) -> Result<Program, AsmError> {
    let mut headers: HashMap<&'static str, String> = HashMap::new();
    let mut macros: HashMap<String, Macro> = HashMap::new();
    let mut top: Vec<Item> = Vec::new();
    let mut current: Option<(String, Macro)> = None;

    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("");
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix("macro ") {
            if current.is_some() {
                return Err(syntax(line, "nested macro definition"));
            }
            let (name, params) = parse_call(line, rest)?;
            current = Some((name, Macro { params, body: Vec::new() }));
            continue;
        }
        if text == "end" {
            let (name, m) = current.take().ok_or_else(|| syntax(line, "`end` outside macro"))?;
            if macros.insert(name.clone(), m).is_some() {
                return Err(syntax(line, format!("macro `{name}` defined twice")));
            }
            continue;
        }
        let item = if let Some(rest) = text.strip_prefix("call ") {
            let (name, args) = parse_call(line, rest)?;
            Item::Call { line, name, args }
        } else if !text.contains("->") {
            let (key, value) = text
                .split_once(':')
                .ok_or_else(|| syntax(line, "expected a header, row, macro or call"))?;
            let key = match key.trim() {
                "name" => "name",
                "start" => "start",
                "limit" => "limit",
                "halt" => "halt",
                "query" => "query",
                "tapes" => "tapes",
                other => return Err(syntax(line, format!("unknown header `{other}`"))),
            };
            if current.is_some() {
                return Err(syntax(line, "headers are not allowed inside macros"));
            }
            if headers.insert(key, value.trim().to_string()).is_some() {
                return Err(syntax(line, format!("header `{key}` given twice")));
            }
            continue;
        } else {
            Item::Row(parse_row(line, text)?)
        };
        match &mut current {
            Some((_, m)) => m.body.push(item),
            None => top.push(item),
        }
    }
    if current.is_some() {
        return Err(syntax(src.lines().count(), "unterminated macro"));
    }

    let mut rows = Vec::new();
    let mut ex = Expander { macros: &macros, counter: 0, active: Vec::new() };
    ex.expand(&top, &|s: &str| s.to_string(), &mut rows)?;
    assemble(headers, rows)
}

fn assemble(headers: HashMap<&'static str, String>, rows: Vec<RawRow>) -> Result<Program, AsmError> {
    let get = |k: &'static str| headers.get(k).cloned().ok_or(AsmError::MissingHeader(k));
    let name = headers.get("name").cloned().unwrap_or_else(|| "anonymous".into());
    let start = get("start")?;
    let limit = get("limit")?;
    let halt = get("halt")?;
    let query = headers.get("query").cloned();
    let tapes = match headers.get("tapes") {
        Some(t) => t
            .parse::<usize>()
            .map_err(|_| syntax(0, format!("bad tape count `{t}`")))?,
        None => rows.first().map_or(3, |r| r.read.len()),
    };

    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, StateId> = HashMap::new();
    let mut intern = |s: &str, names: &mut Vec<String>| -> StateId {
        *ids.entry(s.to_string()).or_insert_with(|| {
            names.push(s.to_string());
            (names.len() - 1) as StateId
        })
    };
    let start_id = intern(&start, &mut names);
    let limit_id = intern(&limit, &mut names);
    let halt_id = intern(&halt, &mut names);
    let query_id = query.as_deref().map(|q| intern(q, &mut names));
    for r in &rows {
        intern(&r.state, &mut names);
        intern(&r.next, &mut names);
    }

    let patterns = 1usize << tapes;
    let mut table: Vec<Vec<Option<Row>>> = vec![vec![None; patterns]; names.len()];
    let mut seen: HashSet<(StateId, usize)> = HashSet::new();
    for r in &rows {
        if r.read.len() != tapes {
            return Err(syntax(r.line, format!("pattern width must be {tapes}")));
        }
        let s = intern(&r.state, &mut names);
        let next = intern(&r.next, &mut names);
        if s == halt_id {
            return Err(ProgramError::HaltHasRows.into());
        }
        for p in 0..patterns {
            let matches = r
                .read
                .iter()
                .enumerate()
                .all(|(t, b)| b.is_none_or(|b| (p >> t & 1 == 1) == b));
            if !matches {
                continue;
            }
            if !seen.insert((s, p)) {
                return Err(AsmError::Ambiguous {
                    line: r.line,
                    state: r.state.clone(),
                    pattern: super::pattern_string(p as u8, tapes),
                });
            }
            let mut write = 0u8;
            for (t, b) in r.write.iter().enumerate() {
                let bit = b.unwrap_or(p >> t & 1 == 1);
                write |= (bit as u8) << t;
            }
            table[s as usize][p] = Some(Row { write, mv: r.mv, next });
        }
    }
    Ok(Program::new(
        name, names, start_id, limit_id, halt_id, query_id, tapes, table,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLOCK: &str = "name: omega_clock\nstart: s\nlimit: l\nhalt: h\n\
                         s *** -> ***, R, s\nl *** -> ***, R, h\n";

    #[test]
    fn parses_clock() {
        let p = parse_program(CLOCK).unwrap();
        assert_eq!(p.name, "omega_clock");
        assert_eq!(p.state_count(), 3);
        let r = p.row(p.limit(), 5).unwrap();
        assert_eq!(r.write, 5);
        assert_eq!(r.next, p.halt());
    }

    #[test]
    fn source_roundtrip() {
        let p = parse_program(CLOCK).unwrap();
        let q = parse_program(&p.to_source()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_ambiguity_and_gaps() {
        let amb = format!("{CLOCK}s 1** -> ***, L, s\n");
        assert!(matches!(parse_program(&amb), Err(AsmError::Ambiguous { .. })));
        let gap = "start: s\nlimit: l\nhalt: h\ns 0** -> ***, R, s\nl *** -> ***, R, h\n";
        assert!(matches!(
            parse_program(gap),
            Err(AsmError::Program(ProgramError::MissingRow(..)))
        ));
        assert!(matches!(parse_program("limit: l\nhalt: h\n"), Err(AsmError::MissingHeader("start"))));
    }

    #[test]
    fn macros_freshen_locals() {
        let src = "start: s\nlimit: l\nhalt: h\n\
                   macro skip2(entry, exit)\n\
                     entry *** -> ***, R, mid\n\
                     mid *** -> ***, R, exit\n\
                   end\n\
                   call skip2(s, t)\n\
                   call skip2(t, s)\n\
                   l *** -> ***, R, h\n";
        let p = parse_program(src).unwrap();
        // s, l, h, two fresh `mid`s and t
        assert_eq!(p.state_count(), 6);
        assert!(p.state_by_name("skip2.1.mid").is_some());
        assert!(p.state_by_name("skip2.2.mid").is_some());
    }

    #[test]
    fn recursive_macro_is_an_error() {
        let src = "start: s\nlimit: l\nhalt: h\nmacro m(a)\ncall m(a)\nend\ncall m(s)\n";
        assert!(matches!(parse_program(src), Err(AsmError::RecursiveMacro(_))));
    }
}
