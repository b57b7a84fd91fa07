//! Independent certificate checking.
//!
//! Everything here is recomputed from the certificate records by replaying
//! machine steps and applying the limit rule directly on words; none of the
//! engine's search state is trusted.

use std::fmt;

use super::cert::{Descriptor, Record, TraceCertificate};
use super::Verdict;
use crate::machine::{encode, Config, Oracle, Program, Snapshot};
use crate::ordinal::Ordinal;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    ProgramMismatch,
    BadStart,
    /// Record `i` does not continue from where the previous one ended.
    Discontinuity(usize),
    StageMismatch(usize),
    /// Replaying record `i` failed (halted early, or a step error).
    ReplayFailed(usize),
    CycleNotClosed(usize),
    LassoInvalid(usize),
    LimitMismatch(usize),
    SummaryMismatch(usize),
    RepeatInvalid(usize),
    VerdictMismatch,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (code, at) = match self {
            Rejection::ProgramMismatch => ("program-mismatch", None),
            Rejection::BadStart => ("bad-start", None),
            Rejection::Discontinuity(i) => ("discontinuity", Some(i)),
            Rejection::StageMismatch(i) => ("stage-mismatch", Some(i)),
            Rejection::ReplayFailed(i) => ("replay-failed", Some(i)),
            Rejection::CycleNotClosed(i) => ("cycle-not-closed", Some(i)),
            Rejection::LassoInvalid(i) => ("lasso-invalid", Some(i)),
            Rejection::LimitMismatch(i) => ("limit-mismatch", Some(i)),
            Rejection::SummaryMismatch(i) => ("summary-mismatch", Some(i)),
            Rejection::RepeatInvalid(i) => ("repeat-invalid", Some(i)),
            Rejection::VerdictMismatch => ("verdict-mismatch", None),
        };
        match at {
            Some(i) => write!(f, "{code} at record {i}"),
            None => f.write_str(code),
        }
    }
}

/// A finished block: where it started and what its tapes ever held.
struct Entry {
    stage: Ordinal,
    start: Snapshot,
    summary: Vec<Word>,
}

/// Dense per-tape accumulator of cells that have held a 1.
struct Seen {
    base: Vec<Word>,
    ones: Vec<Vec<bool>>,
}

impl Seen {
    fn new(base: &Snapshot) -> Seen {
        Seen { base: base.tapes.clone(), ones: vec![Vec::new(); base.tapes.len()] }
    }

    /// Records the cell written by the step that produced `c`.
    fn add(&mut self, c: &Config, cell: usize) {
        for (t, tape) in c.tapes.iter().enumerate() {
            if tape.read(cell) {
                if self.ones[t].len() <= cell {
                    self.ones[t].resize(cell + 1, false);
                }
                self.ones[t][cell] = true;
            }
        }
    }

    fn words(&self) -> Vec<Word> {
        self.base
            .iter()
            .zip(&self.ones)
            .map(|(b, o)| Word::pointwise_or(&[b.clone(), Word::finite(o.clone())]))
            .collect()
    }
}

struct Replay {
    end: Config,
    halted_at: Option<u64>,
}

/// Steps `c` `n` times; `watch` sees each new configuration, the cell the
/// step wrote and whether the step was a clamped left move.
fn replay(
    prog: &Program,
    mut c: Config,
    n: u64,
    oracle: Option<&dyn Oracle>,
    mut watch: impl FnMut(&Config, usize, bool),
) -> Option<Replay> {
    for k in 0..n {
        if c.state == prog.halt() {
            return Some(Replay { end: c, halted_at: Some(k) });
        }
        let cell = c.head;
        let info = c.step(prog, oracle).ok()?;
        watch(&c, cell, info.clamped);
    }
    let halted_at = (c.state == prog.halt()).then_some(n);
    Some(Replay { end: c, halted_at })
}

fn limit_of(prog: &Program, tapes: Vec<Word>) -> Snapshot {
    Snapshot { state: prog.limit(), head: 0, tapes }
}

/// Checks a certificate against `prog`. `Ok` means every record replays and
/// the final verdict follows from them.
pub fn verify_trace(
    prog: &Program,
    cert: &TraceCertificate,
    oracle: Option<&dyn Oracle>,
) -> Result<(), Rejection> {
    if encode(prog) != cert.program {
        return Err(Rejection::ProgramMismatch);
    }
    let mut initial = prog.initial(&cert.input);
    match (&cert.oracle_tape, prog.tapes()) {
        (Some(o), 4) => initial.tapes[3] = o.clone(),
        (None, _) => {}
        _ => return Err(Rejection::BadStart),
    }

    let mut expect_stage = Ordinal::zero();
    let mut expect_snap = initial;
    // open[k] holds the finished sub-blocks of the open level-k block
    let mut open: Vec<Vec<Entry>> = vec![Vec::new(), Vec::new()];
    let mut pending: Option<(usize, Ordinal, u64, Snapshot)> = None;
    let mut last_stage: Option<Ordinal> = None;

    for (i, rec) in cert.records.iter().enumerate() {
        if let Some(prev) = &last_stage {
            if rec.stage() <= prev {
                return Err(Rejection::StageMismatch(i));
            }
        }
        last_stage = Some(rec.stage().clone());
        match rec {
            Record::Seg { stage, steps, start } => {
                if pending.is_some() || *start != expect_snap {
                    return Err(Rejection::Discontinuity(i));
                }
                if stage.limit_part() != expect_stage || stage.finite_part() != *steps || *steps == 0 {
                    return Err(Rejection::StageMismatch(i));
                }
                pending = Some((i, expect_stage.clone(), *steps, start.clone()));
            }
            Record::Limit { stage, level: 0, desc, summary, result } => {
                let (_, from, steps, start) = pending.take().ok_or(Rejection::Discontinuity(i))?;
                if *stage != from.next_limit() {
                    return Err(Rejection::StageMismatch(i));
                }
                let (limit, full) = check_block0(prog, &start, steps, desc, oracle, i)?;
                if limit != *result {
                    return Err(Rejection::LimitMismatch(i));
                }
                if full != *summary {
                    return Err(Rejection::SummaryMismatch(i));
                }
                open[1].push(Entry { stage: from, start, summary: full });
                expect_stage = stage.clone();
                expect_snap = result.clone();
            }
            Record::Limit { stage, level, desc, summary, result } => {
                let k = *level as usize;
                if pending.is_some() || k >= open.len() {
                    return Err(Rejection::Discontinuity(i));
                }
                let Descriptor::Repeat { from, blocks } = desc else {
                    return Err(Rejection::RepeatInvalid(i));
                };
                let subs = &open[k];
                let j = subs
                    .iter()
                    .position(|e| e.stage == *from)
                    .ok_or(Rejection::RepeatInvalid(i))?;
                if subs[j].start != expect_snap || subs.len() - j != *blocks as usize {
                    return Err(Rejection::RepeatInvalid(i));
                }
                let grid = Ordinal::omega_pow_nat(k as u64);
                if *from != subs[0].stage.add(&grid.mul_nat(j as u64))
                    || expect_stage != from.add(&grid.mul_nat(*blocks))
                    || *stage != subs[0].stage.add(&Ordinal::omega_pow_nat(k as u64 + 1))
                {
                    return Err(Rejection::StageMismatch(i));
                }
                let ntapes = expect_snap.tapes.len();
                let or_from = |a: usize, t: usize| {
                    let col: Vec<Word> = subs[a..].iter().map(|e| e.summary[t].clone()).collect();
                    Word::pointwise_or(&col)
                };
                let limit = limit_of(prog, (0..ntapes).map(|t| or_from(j, t)).collect());
                let full: Vec<Word> = (0..ntapes).map(|t| or_from(0, t)).collect();
                if limit != *result {
                    return Err(Rejection::LimitMismatch(i));
                }
                if full != *summary {
                    return Err(Rejection::SummaryMismatch(i));
                }
                let entry = Entry { stage: subs[0].stage.clone(), start: subs[0].start.clone(), summary: full };
                open[k].clear();
                if open.len() <= k + 1 {
                    open.push(Vec::new());
                }
                open[k + 1].push(entry);
                expect_stage = stage.clone();
                expect_snap = result.clone();
            }
        }
    }

    match &cert.verdict {
        Verdict::Halted { stage, paper_clock, output } => {
            let (i, from, steps, start) = pending.ok_or(Rejection::VerdictMismatch)?;
            let r = replay(prog, Config::from_snapshot(&start), steps, oracle, |_, _, _| {})
                .ok_or(Rejection::ReplayFailed(i))?;
            if r.halted_at != Some(steps) {
                return Err(Rejection::ReplayFailed(i));
            }
            let h = from.add_nat(steps);
            let clock = Ordinal::one().add(&from.add_nat(steps - 1));
            if *stage != h || *paper_clock != clock || r.end.snapshot().tapes[2] != *output {
                return Err(Rejection::VerdictMismatch);
            }
            Ok(())
        }
        Verdict::NonHalting { repeat_from, repeat_to } => {
            if pending.is_some() || *repeat_to != expect_stage {
                return Err(Rejection::VerdictMismatch);
            }
            let strong = open.iter().skip(1).any(|subs| {
                let Some(j) = subs.iter().position(|e| e.stage == *repeat_from) else {
                    return false;
                };
                subs[j].start == expect_snap
                    && (0..expect_snap.tapes.len()).all(|t| {
                        let col: Vec<Word> = subs[j..].iter().map(|e| e.summary[t].clone()).collect();
                        Word::zeros_preserved(&expect_snap.tapes[t], &col)
                    })
            });
            if strong {
                Ok(())
            } else {
                Err(Rejection::VerdictMismatch)
            }
        }
        Verdict::BudgetExhausted { last_stage } => match pending {
            Some((i, from, steps, start)) => {
                let r = replay(prog, Config::from_snapshot(&start), steps, oracle, |_, _, _| {})
                    .ok_or(Rejection::ReplayFailed(i))?;
                if r.halted_at.is_some() || *last_stage != from.add_nat(steps) {
                    return Err(Rejection::VerdictMismatch);
                }
                Ok(())
            }
            None if *last_stage == expect_stage => Ok(()),
            None => Err(Rejection::VerdictMismatch),
        },
    }
}

/// Replays one ω-block and recomputes its limit and summary from the
/// claimed cycle shape.
fn check_block0(
    prog: &Program,
    start: &Snapshot,
    steps: u64,
    desc: &Descriptor,
    oracle: Option<&dyn Oracle>,
    i: usize,
) -> Result<(Snapshot, Vec<Word>), Rejection> {
    let (t0, period, shift) = match *desc {
        Descriptor::Cycle { start, period } => (start, period, 0),
        Descriptor::Lasso { start, period, shift } => (start, period, shift),
        Descriptor::Repeat { .. } => return Err(Rejection::RepeatInvalid(i)),
    };
    if period == 0 || t0 + period != steps {
        return Err(Rejection::StageMismatch(i));
    }
    let mut whole = Seen::new(start);
    let head = replay(prog, Config::from_snapshot(start), t0, oracle, |c, cell, _| whole.add(c, cell))
        .ok_or(Rejection::ReplayFailed(i))?;
    if head.halted_at.is_some() {
        return Err(Rejection::ReplayFailed(i));
    }
    let anchor = head.end;
    let anchor_snap = anchor.snapshot();
    let mut around = Seen::new(&anchor_snap);
    let mut lowest = anchor.head;
    let mut clamp = false;
    let mut asked = Some(anchor.state) == prog.query();
    let tail = replay(prog, anchor.clone(), period, oracle, |c, cell, clamped| {
        whole.add(c, cell);
        around.add(c, cell);
        lowest = lowest.min(c.head);
        // the last configuration's state does not step inside the period
        asked |= Some(c.state) == prog.query();
        clamp |= clamped;
    })
    .ok_or(Rejection::ReplayFailed(i))?;
    if tail.halted_at.is_some() {
        return Err(Rejection::ReplayFailed(i));
    }
    let end = tail.end.snapshot();
    lowest = lowest.min(end.head);
    let whole_words = whole.words();
    if shift == 0 {
        if end != anchor_snap {
            return Err(Rejection::CycleNotClosed(i));
        }
        return Ok((limit_of(prog, around.words()), whole_words));
    }
    let d = shift as usize;
    if clamp
        || asked
        || end.state != anchor_snap.state
        || end.head != anchor_snap.head + d
        || (0..end.tapes.len()).any(|t| anchor_snap.tapes[t].suffix(lowest) != end.tapes[t].suffix(lowest + d))
    {
        return Err(Rejection::LassoInvalid(i));
    }
    let limit: Vec<Word> = end
        .tapes
        .iter()
        .map(|w| Word::new(w.bits(lowest), (lowest..lowest + d).map(|c| w.read(c)).collect()))
        .collect();
    // summary: each cell from `lowest` on also sees, one period later, what
    // the cell d to its left saw; brute-force that over a window large
    // enough to pin down both eventually periodic words
    let visited = around.words();
    let mut summary = Vec::new();
    for t in 0..end.tapes.len() {
        let v = &visited[t];
        let acc = &whole_words[t];
        let lcm = |a: usize, b: usize| a / gcd(a, b) * b;
        let per = lcm(lcm(v.period().len(), d), acc.period().len());
        let n = lowest.max(v.prefix().len()).max(acc.prefix().len()) + 2 * per + d;
        let bits: Vec<bool> = (0..n)
            .map(|c| {
                acc.read(c) || (c >= lowest && (0..=(c - lowest) / d).any(|k| v.read(c - k * d)))
            })
            .collect();
        let settle = n - per;
        summary.push(Word::new(bits[..settle].to_vec(), bits[settle..].to_vec()));
    }
    Ok((limit_of(prog, limit), summary))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
