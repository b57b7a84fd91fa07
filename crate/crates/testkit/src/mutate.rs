//! Single-field corruptions of a trace certificate.

use ittm_core::engine::{Descriptor, Record, TraceCertificate};
use ittm_core::{Ordinal, Snapshot, Verdict, Word};

fn flip(w: &Word, i: usize) -> Word {
    w.write(i, !w.read(i))
}

fn bump(o: &Ordinal) -> Ordinal {
    o.add_nat(1)
}

fn snapshot_variants(s: &Snapshot) -> Vec<(&'static str, Snapshot)> {
    let mut out = Vec::new();
    let mut a = s.clone();
    a.state += 1;
    out.push(("state", a));
    let mut b = s.clone();
    b.head += 1;
    out.push(("head", b));
    for t in 0..s.tapes.len() {
        let mut c = s.clone();
        c.tapes[t] = flip(&c.tapes[t], s.head);
        out.push(("cell under head", c));
        let mut d = s.clone();
        d.tapes[t] = flip(&d.tapes[t], s.head + 7);
        out.push(("distant cell", d));
    }
    out
}

/// Every mutation applied to `cert`, labelled. Downgrading a nonhalting
/// verdict to a budget verdict at the same stage is left out: that claim is
/// weaker but still true.
pub fn mutations(cert: &TraceCertificate) -> Vec<(String, TraceCertificate)> {
    let mut out = Vec::new();
    let mut push = |label: String, c: TraceCertificate| out.push((label, c));

    let mut c = cert.clone();
    c.program += 1u32;
    push("program".into(), c);
    let mut c = cert.clone();
    c.input = flip(&c.input, 0);
    push("input".into(), c);

    for (i, r) in cert.records.iter().enumerate() {
        let with = |r2: Record| {
            let mut c = cert.clone();
            c.records[i] = r2;
            c
        };
        match r {
            Record::Seg { stage, steps, start } => {
                push(format!("seg {i} stage"), with(Record::Seg { stage: bump(stage), steps: *steps, start: start.clone() }));
                push(format!("seg {i} steps"), with(Record::Seg { stage: stage.clone(), steps: steps + 1, start: start.clone() }));
                for (what, s) in snapshot_variants(start) {
                    push(format!("seg {i} start {what}"), with(Record::Seg { stage: stage.clone(), steps: *steps, start: s }));
                }
            }
            Record::Limit { stage, level, desc, summary, result } => {
                let rebuilt = |stage: Ordinal, level: u32, desc: Descriptor, summary: Vec<Word>, result: Snapshot| {
                    with(Record::Limit { stage, level, desc, summary, result })
                };
                push(format!("limit {i} stage"), rebuilt(bump(stage), *level, desc.clone(), summary.clone(), result.clone()));
                push(format!("limit {i} level"), rebuilt(stage.clone(), level + 1, desc.clone(), summary.clone(), result.clone()));
                let descs: Vec<Descriptor> = match desc {
                    Descriptor::Cycle { start, period } => vec![
                        Descriptor::Cycle { start: start + 1, period: *period },
                        Descriptor::Cycle { start: *start, period: period + 1 },
                        Descriptor::Lasso { start: *start, period: *period, shift: 1 },
                    ],
                    Descriptor::Lasso { start, period, shift } => vec![
                        Descriptor::Lasso { start: start + 1, period: *period, shift: *shift },
                        Descriptor::Lasso { start: *start, period: period + 1, shift: *shift },
                        Descriptor::Lasso { start: *start, period: *period, shift: shift + 1 },
                        Descriptor::Cycle { start: *start, period: *period },
                    ],
                    Descriptor::Repeat { from, blocks } => vec![
                        Descriptor::Repeat { from: bump(from), blocks: *blocks },
                        Descriptor::Repeat { from: from.clone(), blocks: blocks + 1 },
                    ],
                };
                for d in descs {
                    push(format!("limit {i} descriptor {d}"), rebuilt(stage.clone(), *level, d, summary.clone(), result.clone()));
                }
                for t in 0..summary.len() {
                    let mut s = summary.clone();
                    s[t] = flip(&s[t], 3);
                    push(format!("limit {i} summary {t}"), rebuilt(stage.clone(), *level, desc.clone(), s, result.clone()));
                }
                for (what, s) in snapshot_variants(result) {
                    push(format!("limit {i} result {what}"), rebuilt(stage.clone(), *level, desc.clone(), summary.clone(), s));
                }
            }
        }
    }

    let verdicts: Vec<Verdict> = match &cert.verdict {
        Verdict::Halted { stage, paper_clock, output } => vec![
            Verdict::Halted { stage: bump(stage), paper_clock: paper_clock.clone(), output: output.clone() },
            Verdict::Halted { stage: stage.clone(), paper_clock: bump(paper_clock), output: output.clone() },
            Verdict::Halted { stage: stage.clone(), paper_clock: paper_clock.clone(), output: flip(output, 0) },
            Verdict::BudgetExhausted { last_stage: stage.clone() },
        ],
        Verdict::NonHalting { repeat_from, repeat_to } => vec![
            Verdict::NonHalting { repeat_from: bump(repeat_from), repeat_to: repeat_to.clone() },
            Verdict::NonHalting { repeat_from: repeat_from.clone(), repeat_to: bump(repeat_to) },
        ],
        Verdict::BudgetExhausted { last_stage } => vec![Verdict::BudgetExhausted { last_stage: bump(last_stage) }],
    };
    for v in verdicts {
        let mut c = cert.clone();
        c.verdict = v;
        push("verdict".into(), c);
    }
    out
}
