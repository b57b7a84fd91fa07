use thiserror::Error;

use super::cert::{Descriptor, Record, TraceCertificate};
use super::limits::{lasso_limit_tape, lasso_tail_or};
use super::{paper_clock, EngineError, RunBudget, RunOutcome, Verdict};
use crate::machine::{encode, Config, Oracle, Program, Snapshot, Tape};
use crate::ordinal::Ordinal;
use crate::word::Word;

/// Ones written since some reference point, per tape, as dense bitsets.
#[derive(Clone)]
struct Written {
    tapes: Vec<Vec<bool>>,
}

impl Written {
    fn new(n: usize) -> Self {
        Written { tapes: vec![Vec::new(); n] }
    }

    fn clear(&mut self) {
        for t in &mut self.tapes {
            t.clear();
        }
    }

    #[inline]
    fn mark(&mut self, tape: usize, cell: usize) {
        let v = &mut self.tapes[tape];
        if v.len() <= cell {
            v.resize(cell + 1, false);
        }
        v[cell] = true;
    }

    /// `base` OR the marked cells, tape by tape.
    fn or_onto(&self, base: &[Word]) -> Vec<Word> {
        base.iter()
            .zip(&self.tapes)
            .map(|(w, marks)| w.or(&Word::finite(marks.clone())))
            .collect()
    }
}

pub(crate) enum Block0 {
    Halted { steps: u64, snapshot: Snapshot },
    Closed { steps: u64, desc: Descriptor, limit: Snapshot, summary: Vec<Word> },
    OutOfSteps { steps: u64 },
}

fn tapes_equal(a: &[Tape], b: &[Tape]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.suffix_eq(0, y, 0))
}

/// Runs the ω-block that starts at `start`, looking for an exact cycle or a
/// translated lasso with anchors at power-of-two step counts.
pub(crate) fn run_block0(
    prog: &Program,
    start: &Snapshot,
    max_steps: u64,
    oracle: Option<&dyn Oracle>,
) -> Result<Block0, EngineError> {
    let ntapes = start.tapes.len();
    let mut c = Config::from_snapshot(start);
    let mut since_start = Written::new(ntapes);
    let mut since_anchor = Written::new(ntapes);
    let mut anchor = c.clone();
    let mut anchor_step = 0u64;
    let mut min_head = c.head;
    let mut clamped = false;
    let mut queried = false;
    let mut steps = 0u64;
    loop {
        if c.state == prog.halt() {
            return Ok(Block0::Halted { steps, snapshot: c.snapshot() });
        }
        if steps == max_steps {
            return Ok(Block0::OutOfSteps { steps });
        }
        if steps > 0 && steps.is_power_of_two() {
            anchor = c.clone();
            anchor_step = steps;
            min_head = c.head;
            clamped = false;
            queried = false;
            since_anchor.clear();
        }
        let head = c.head;
        queried |= Some(c.state) == prog.query();
        let info = c.step(prog, oracle)?;
        steps += 1;
        for t in 0..ntapes {
            if c.tapes[t].read(head) {
                since_start.mark(t, head);
                since_anchor.mark(t, head);
            }
        }
        clamped |= info.clamped;
        min_head = min_head.min(c.head);

        if c.state != anchor.state || c.head < anchor.head {
            continue;
        }
        let d = c.head - anchor.head;
        let period = steps - anchor_step;
        let anchor_words: Vec<Word> = if d == 0 {
            if !tapes_equal(&anchor.tapes, &c.tapes) {
                continue;
            }
            anchor.tapes.iter().map(Tape::to_word).collect()
        } else {
            if clamped || queried {
                continue;
            }
            let base = min_head;
            if !(0..ntapes).all(|t| anchor.tapes[t].suffix_eq(base, &c.tapes[t], base + d)) {
                continue;
            }
            anchor.tapes.iter().map(Tape::to_word).collect()
        };
        let acc = since_start.or_onto(&start.tapes);
        let (desc, tapes, summary) = if d == 0 {
            // every cell takes the OR of its values around the cycle
            let tapes = since_anchor.or_onto(&anchor_words);
            (Descriptor::Cycle { start: anchor_step, period }, tapes, acc)
        } else {
            let base = min_head;
            let now: Vec<Word> = c.tapes.iter().map(Tape::to_word).collect();
            let tapes: Vec<Word> = now.iter().map(|w| lasso_limit_tape(w, base, d)).collect();
            let visited = since_anchor.or_onto(&anchor_words);
            let summary = acc
                .iter()
                .zip(&visited)
                .map(|(a, v)| a.or(&lasso_tail_or(v, base, d)))
                .collect();
            (
                Descriptor::Lasso { start: anchor_step, period, shift: d as u64 },
                tapes,
                summary,
            )
        };
        let limit = Snapshot { state: prog.limit(), head: 0, tapes };
        return Ok(Block0::Closed { steps, desc, limit, summary });
    }
}

enum Block {
    Closed { limit: Snapshot, summary: Vec<Word> },
    Done(Verdict, Option<Snapshot>),
}

struct Runner<'a> {
    prog: &'a Program,
    budget: RunBudget,
    oracle: Option<&'a dyn Oracle>,
    records: Vec<Record>,
}

impl Runner<'_> {
    fn block(&mut self, level: u32, start: Snapshot, stage: Ordinal) -> Result<Block, EngineError> {
        if level == 0 {
            return self.block0(start, stage);
        }
        let step = Ordinal::omega_pow_nat(level as u64);
        // start snapshot, stage and summary of each finished sub-block
        let mut done: Vec<(Snapshot, Ordinal, Vec<Word>)> = Vec::new();
        let mut cur = start;
        let mut cur_stage = stage.clone();
        loop {
            if done.len() as u64 == self.budget.max_blocks_per_level {
                return Ok(Block::Done(Verdict::BudgetExhausted { last_stage: cur_stage }, None));
            }
            let (limit, summary) = match self.block(level - 1, cur.clone(), cur_stage.clone())? {
                Block::Closed { limit, summary } => (limit, summary),
                other => return Ok(other),
            };
            let next_stage = cur_stage.add(&step);
            done.push((cur, cur_stage, summary));
            if let Some(j) = done.iter().position(|(s, _, _)| *s == limit) {
                let repeating: Vec<&Vec<Word>> = done[j..].iter().map(|(_, _, u)| u).collect();
                let strong = (0..limit.tapes.len()).all(|t| {
                    let col: Vec<Word> = repeating.iter().map(|u| u[t].clone()).collect();
                    Word::zeros_preserved(&limit.tapes[t], &col)
                });
                if strong {
                    let verdict = Verdict::NonHalting {
                        repeat_from: done[j].1.clone(),
                        repeat_to: next_stage,
                    };
                    return Ok(Block::Done(verdict, None));
                }
                let column = |from: usize, t: usize| -> Word {
                    let col: Vec<Word> = done[from..].iter().map(|(_, _, u)| u[t].clone()).collect();
                    Word::pointwise_or(&col)
                };
                let ntapes = limit.tapes.len();
                let tapes: Vec<Word> = (0..ntapes).map(|t| column(j, t)).collect();
                let summary: Vec<Word> = (0..ntapes).map(|t| column(0, t)).collect();
                let limit = Snapshot { state: self.prog.limit(), head: 0, tapes };
                let reached = stage.add(&Ordinal::omega_pow_nat(level as u64 + 1));
                self.records.push(Record::Limit {
                    stage: reached,
                    level,
                    desc: Descriptor::Repeat {
                        from: done[j].1.clone(),
                        blocks: (done.len() - j) as u64,
                    },
                    summary: summary.clone(),
                    result: limit.clone(),
                });
                return Ok(Block::Closed { limit, summary });
            }
            cur = limit;
            cur_stage = next_stage;
        }
    }

    fn block0(&mut self, start: Snapshot, stage: Ordinal) -> Result<Block, EngineError> {
        let outcome = run_block0(self.prog, &start, self.budget.max_steps_per_block, self.oracle)?;
        let steps = match &outcome {
            Block0::Halted { steps, .. } | Block0::Closed { steps, .. } | Block0::OutOfSteps { steps } => *steps,
        };
        self.records.push(Record::Seg { stage: stage.add_nat(steps), steps, start });
        Ok(match outcome {
            Block0::Halted { steps, snapshot } => {
                let h = stage.add_nat(steps);
                let fired = stage.add_nat(steps - 1);
                let verdict = Verdict::Halted {
                    stage: h,
                    paper_clock: paper_clock(&fired),
                    output: snapshot.output().clone(),
                };
                Block::Done(verdict, Some(snapshot))
            }
            Block0::OutOfSteps { steps } => Block::Done(
                Verdict::BudgetExhausted { last_stage: stage.add_nat(steps) },
                None,
            ),
            Block0::Closed { desc, limit, summary, .. } => {
                self.records.push(Record::Limit {
                    stage: stage.next_limit(),
                    level: 0,
                    desc,
                    summary: summary.clone(),
                    result: limit.clone(),
                });
                Block::Closed { limit, summary }
            }
        })
    }
}

/// Runs `prog` on `input` from stage 0.
pub fn run(
    prog: &Program,
    input: &Word,
    budget: &RunBudget,
    oracle: Option<&dyn Oracle>,
) -> Result<RunOutcome, EngineError> {
    run_from(prog, prog.initial(input), budget, oracle)
}

/// Runs from an initial snapshot, e.g. one with a preloaded oracle tape.
pub fn run_from(
    prog: &Program,
    start: Snapshot,
    budget: &RunBudget,
    oracle: Option<&dyn Oracle>,
) -> Result<RunOutcome, EngineError> {
    budget.validate()?;
    if start.tapes.len() != prog.tapes() || start.state != prog.start() || start.head != 0 {
        return Err(EngineError::BadStart);
    }
    let mut r = Runner { prog, budget: *budget, oracle, records: Vec::new() };
    let top = budget.max_limit_level;
    let initial = start.clone();
    let (verdict, final_snapshot) = match r.block(top, start, Ordinal::zero())? {
        Block::Done(v, s) => (v, s),
        // reaching ω^(top+1) is beyond the configured range
        Block::Closed { .. } => (
            Verdict::BudgetExhausted {
                last_stage: Ordinal::omega_pow_nat(top as u64 + 1),
            },
            None,
        ),
    };
    let certificate = TraceCertificate {
        program: encode(prog),
        input: initial.tapes[0].clone(),
        oracle_tape: initial.tapes.get(3).cloned(),
        records: r.records,
        verdict: verdict.clone(),
    };
    Ok(RunOutcome { verdict, certificate, final_snapshot })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("the run does not halt (strong repeat from {0} to {1})")]
    NonHalting(Ordinal, Ordinal),
    #[error("budget exhausted at stage {0}")]
    Budget(Ordinal),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// The clock value of `prog` on the all-zero input.
pub fn measure_clock(prog: &Program, budget: &RunBudget) -> Result<Ordinal, MeasureError> {
    match run(prog, &Word::zero(), budget, None)?.verdict {
        Verdict::Halted { paper_clock, .. } => Ok(paper_clock),
        Verdict::NonHalting { repeat_from, repeat_to } => Err(MeasureError::NonHalting(repeat_from, repeat_to)),
        Verdict::BudgetExhausted { last_stage } => Err(MeasureError::Budget(last_stage)),
    }
}

/// The configurations at steps `0..=n` from `start`, stepped exactly as the
/// engine steps them; stops early at a halt.
pub fn trace_steps(
    prog: &Program,
    start: &Snapshot,
    n: u64,
    oracle: Option<&dyn Oracle>,
) -> Result<Vec<Snapshot>, EngineError> {
    let mut c = Config::from_snapshot(start);
    let mut out = vec![c.snapshot()];
    for _ in 0..n {
        if c.state == prog.halt() {
            break;
        }
        c.step(prog, oracle)?;
        out.push(c.snapshot());
    }
    Ok(out)
}
