use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use khbeta::braid::{BraidWord, NamedBraid};
use khbeta::cube::build_complex;
use khbeta::frobenius::{Theory, TheoryTag};
use khbeta::homalg::{homology_u, kh_dimensions};
use khbeta::invariants::{c_invariants, c_simplicity_check, invariant_report, s_identity_holds, InvariantReport};
use khbeta::moves::{run_harness, HarnessConfig, TraceEntry};
use khbeta::{Error, Result};

use crate::{Format, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmd {
    Homology,
    Invariants,
    Verify,
    CheckCSimple,
    Batch,
}

/// Rendered output plus whether every assertion held.
#[derive(Debug, Default)]
pub struct Output {
    pub text: String,
    pub messages: Vec<String>,
    pub ok: bool,
}

fn letters_str(b: &BraidWord) -> String {
    b.letters().iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

fn json_lines<T: Serialize>(items: &[T]) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&serde_json::to_string(it).expect("report serializes"));
        s.push('\n');
    }
    s
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Consistency(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Consistency(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn run(cmd: Cmd, cfg: &RunConfig) -> Result<Output> {
    match cmd {
        Cmd::Homology => homology(cfg),
        Cmd::Invariants => invariants(cfg),
        Cmd::Verify => verify(cfg),
        Cmd::CheckCSimple => check_c_simple(cfg),
        Cmd::Batch => batch(cfg),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomRow {
    pub name: String,
    pub theory: String,
    pub char: u32,
    pub i: i32,
    pub q: i32,
    /// `free`, `torsion`, or `chain` for the chain-group ranks of theories
    /// without a homology engine.
    pub kind: String,
    pub rank: usize,
    pub order: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
struct HomEntry {
    name: String,
    strands: usize,
    letters: Vec<i32>,
    theory: String,
    char: u32,
    table: Vec<HomCell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain_checks: Option<ChainChecks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
struct HomCell {
    i: i32,
    q: i32,
    kind: String,
    rank: usize,
    order: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
struct ChainChecks {
    d_squared_zero: bool,
    homogeneous: bool,
    euler_characteristic: BTreeMap<i32, i64>,
}

fn homology_of(nb: &NamedBraid, tag: TheoryTag, p: u32) -> Result<(HomEntry, bool)> {
    let t = Theory::new(tag, p)?;
    let cx = build_complex(&nb.word, t)?;
    let (lo, hi) = cx.range();
    let mut table = Vec::new();
    let mut checks = None;
    let mut note = None;
    let mut ok = true;
    match tag {
        TheoryTag::Kh => {
            for i in lo..=hi {
                for (q, d) in kh_dimensions(&cx, i)? {
                    table.push(HomCell { i, q, kind: "free".into(), rank: d, order: None });
                }
            }
        }
        TheoryTag::Bn => {
            for i in lo..=hi {
                let h = homology_u(&cx, i)?;
                let mut free: BTreeMap<i32, usize> = BTreeMap::new();
                for q in h.free_degrees() {
                    *free.entry(q).or_default() += 1;
                }
                let mut tors: BTreeMap<(i32, u32), usize> = BTreeMap::new();
                for qt in h.torsion() {
                    *tors.entry(qt).or_default() += 1;
                }
                table.extend(free.into_iter().map(|(q, rank)| HomCell { i, q, kind: "free".into(), rank, order: None }));
                table.extend(
                    tors.into_iter()
                        .map(|((q, t), rank)| HomCell { i, q, kind: "torsion".into(), rank, order: Some(t) }),
                );
            }
        }
        _ => {
            for i in lo..=hi {
                let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
                for &q in &cx.block(i).expect("degree in range").qdeg {
                    *ranks.entry(q).or_default() += 1;
                }
                table.extend(ranks.into_iter().map(|(q, rank)| HomCell { i, q, kind: "chain".into(), rank, order: None }));
            }
            let c = ChainChecks {
                d_squared_zero: cx.d_squared_is_zero(),
                homogeneous: cx.is_homogeneous(),
                euler_characteristic: cx.euler_characteristic(),
            };
            ok = c.d_squared_zero && c.homogeneous;
            checks = Some(c);
            note = Some(format!("{tag}: chain-level only; homology over this ground ring is not computed"));
        }
    }
    let e = HomEntry {
        name: nb.name.clone(),
        strands: nb.word.strands(),
        letters: nb.word.letters().to_vec(),
        theory: tag.name().into(),
        char: p,
        table,
        chain_checks: checks,
        note,
    };
    Ok((e, ok))
}

fn homology(cfg: &RunConfig) -> Result<Output> {
    let results: Vec<Result<(HomEntry, bool)>> =
        cfg.braids.par_iter().map(|nb| homology_of(nb, cfg.theory, cfg.p)).collect();
    let mut entries = Vec::new();
    let mut ok = true;
    for r in results {
        let (e, good) = r?;
        ok &= good;
        entries.push(e);
    }
    let text = match cfg.format {
        Format::Json => json_lines(&entries),
        Format::Csv => {
            let rows: Vec<HomRow> = entries
                .iter()
                .flat_map(|e| {
                    e.table.iter().map(|c| HomRow {
                        name: e.name.clone(),
                        theory: e.theory.clone(),
                        char: e.char,
                        i: c.i,
                        q: c.q,
                        kind: c.kind.clone(),
                        rank: c.rank,
                        order: c.order,
                    })
                })
                .collect();
            csv_rows(&rows)?
        }
    };
    Ok(Output { text, messages: vec![], ok })
}

#[derive(Debug, Clone, Serialize)]
struct NamedReport {
    name: String,
    #[serde(flatten)]
    report: InvariantReport,
}

/// The flat CSV form of an [`InvariantReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvRow {
    pub name: String,
    pub strands: usize,
    pub letters: String,
    pub writhe: i32,
    pub sl: i32,
    pub c: u32,
    pub c_bar: u32,
    pub psi_vanishes: bool,
    pub s: Option<i32>,
    pub s_reason: Option<String>,
    pub theory: String,
    pub char: u32,
    pub c_differs: bool,
    pub conventions: String,
}

impl InvRow {
    fn new(name: &str, r: &InvariantReport) -> Self {
        InvRow {
            name: name.into(),
            strands: r.strands,
            letters: r.letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "),
            writhe: r.writhe,
            sl: r.sl,
            c: r.c,
            c_bar: r.c_bar,
            psi_vanishes: r.psi_vanishes,
            s: r.s,
            s_reason: r.s_reason.clone(),
            theory: r.theory.clone(),
            char: r.char,
            c_differs: r.c_differs,
            conventions: r.conventions.clone(),
        }
    }
}

fn invariants(cfg: &RunConfig) -> Result<Output> {
    let results: Vec<Result<InvariantReport>> = cfg.braids.par_iter().map(|nb| invariant_report(&nb.word, cfg.p)).collect();
    let mut reports = Vec::new();
    let mut messages = Vec::new();
    for (nb, r) in cfg.braids.iter().zip(results) {
        let r = r?;
        if r.c_differs {
            messages.push(format!("{}: c = {} differs from c_bar = {}", nb.name, r.c, r.c_bar));
        }
        reports.push(NamedReport { name: nb.name.clone(), report: r });
    }
    let text = match cfg.format {
        Format::Json => json_lines(&reports),
        Format::Csv => csv_rows(&reports.iter().map(|n| InvRow::new(&n.name, &n.report)).collect::<Vec<_>>())?,
    };
    Ok(Output { text, messages, ok: true })
}

#[derive(Debug, Clone, Serialize)]
struct NamedTrace<'a> {
    name: &'a str,
    #[serde(flatten)]
    entry: &'a TraceEntry,
}

#[derive(Debug, Clone, Serialize)]
struct TraceRow<'a> {
    name: &'a str,
    step: usize,
    #[serde(rename = "move")]
    mv: &'a str,
    site: usize,
    word: &'a str,
    assertion: &'a str,
    status: &'a str,
    detail: Option<&'a str>,
}

fn verify(cfg: &RunConfig) -> Result<Output> {
    let hc = HarnessConfig { p: cfg.p, ..HarnessConfig::new(cfg.seed, cfg.moves, cfg.allow_negative) };
    let results: Vec<_> = cfg.braids.par_iter().map(|nb| run_harness(&nb.word, &hc)).collect();
    let mut reports = Vec::new();
    for r in results {
        reports.push(r?);
    }
    let mut messages = Vec::new();
    let mut ok = true;
    for (nb, r) in cfg.braids.iter().zip(&reports) {
        let n = r.trace.len();
        match r.failures().next() {
            None => messages.push(format!("{}: {n} assertions passed ({} -> {})", nb.name, r.start, r.end)),
            Some(f) => {
                ok = false;
                messages.push(format!(
                    "{}: counterexample at step {} ({} at {}, word {}): {}",
                    nb.name, f.step, f.mv, f.site, f.word, f.assertion
                ));
            }
        }
        if !r.r1n_signs.is_empty() {
            messages.push(format!("{}: negative stabilization signs {:?}", nb.name, r.r1n_signs));
        }
    }
    let text = match cfg.format {
        Format::Json => {
            let mut s = String::new();
            for (nb, r) in cfg.braids.iter().zip(&reports) {
                let lines: Vec<NamedTrace> = r.trace.iter().map(|e| NamedTrace { name: &nb.name, entry: e }).collect();
                s.push_str(&json_lines(&lines));
            }
            s
        }
        Format::Csv => {
            let mut rows = Vec::new();
            for (nb, r) in cfg.braids.iter().zip(&reports) {
                for e in &r.trace {
                    rows.push(TraceRow {
                        name: &nb.name,
                        step: e.step,
                        mv: &e.mv,
                        site: e.site,
                        word: &e.word,
                        assertion: &e.assertion,
                        status: if e.status == khbeta::moves::Status::Pass { "pass" } else { "fail" },
                        detail: e.detail.as_deref(),
                    });
                }
            }
            csv_rows(&rows)?
        }
    };
    Ok(Output { text, messages, ok })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleRow {
    pub name: String,
    pub letters: String,
    pub sl: Option<i32>,
    pub c: Option<u32>,
    pub c_bar: Option<u32>,
    pub s: Option<i32>,
    pub cond1: Option<bool>,
    pub cond2: Option<bool>,
    pub cond3: Option<bool>,
    pub pseudo_thin: Option<bool>,
    /// `s − 1 = sl + 2c`, present when some condition holds.
    pub identity_holds: Option<bool>,
    pub skipped: Option<String>,
}

fn simple_row(nb: &NamedBraid, p: u32) -> Result<SimpleRow> {
    let b = &nb.word;
    let mut row = SimpleRow {
        name: nb.name.clone(),
        letters: letters_str(b),
        sl: None,
        c: None,
        c_bar: None,
        s: None,
        cond1: None,
        cond2: None,
        cond3: None,
        pseudo_thin: None,
        identity_holds: None,
        skipped: None,
    };
    let cs = match c_simplicity_check(b, p) {
        Ok(cs) => cs,
        Err(Error::NotAKnot(k)) => {
            row.skipped = Some(format!("closure has {k} components"));
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    let (c, c_bar) = c_invariants(b, p)?;
    let sl = khbeta::braid::self_linking(b);
    row.sl = Some(sl);
    row.c = Some(c);
    row.c_bar = Some(c_bar);
    row.s = Some(cs.s);
    row.cond1 = Some(cs.cond1);
    row.cond2 = Some(cs.cond2);
    row.cond3 = Some(cs.cond3);
    row.pseudo_thin = Some(cs.pseudo_thin);
    if cs.any() {
        row.identity_holds = Some(s_identity_holds(cs.s, sl, c) && s_identity_holds(cs.s, sl, c_bar));
    }
    Ok(row)
}

fn check_c_simple(cfg: &RunConfig) -> Result<Output> {
    let results: Vec<Result<SimpleRow>> = cfg.braids.par_iter().map(|nb| simple_row(nb, cfg.p)).collect();
    let mut rows = Vec::new();
    let mut messages = Vec::new();
    let mut ok = true;
    for r in results {
        let r = r?;
        if r.identity_holds == Some(false) {
            ok = false;
            messages.push(format!("{}: a condition holds but s - 1 != sl + 2c", r.name));
        }
        if let Some(why) = &r.skipped {
            messages.push(format!("{}: skipped, {why}", r.name));
        }
        rows.push(r);
    }
    let text = match cfg.format {
        Format::Json => json_lines(&rows),
        Format::Csv => csv_rows(&rows)?,
    };
    Ok(Output { text, messages, ok })
}

#[derive(Debug, Clone, Serialize)]
struct BatchEntry {
    name: String,
    invariants: InvariantReport,
    c_simple: SimpleRow,
}

/// An [`InvRow`] extended with the c-simplicity columns.
#[derive(Debug, Clone, Serialize)]
struct BatchRow {
    name: String,
    strands: usize,
    letters: String,
    writhe: i32,
    sl: i32,
    c: u32,
    c_bar: u32,
    psi_vanishes: bool,
    s: Option<i32>,
    s_reason: Option<String>,
    theory: String,
    char: u32,
    c_differs: bool,
    conventions: String,
    cond1: Option<bool>,
    cond2: Option<bool>,
    cond3: Option<bool>,
    pseudo_thin: Option<bool>,
    identity_holds: Option<bool>,
}

impl BatchRow {
    fn new(e: &BatchEntry) -> Self {
        let i = InvRow::new(&e.name, &e.invariants);
        let cs = &e.c_simple;
        BatchRow {
            name: i.name,
            strands: i.strands,
            letters: i.letters,
            writhe: i.writhe,
            sl: i.sl,
            c: i.c,
            c_bar: i.c_bar,
            psi_vanishes: i.psi_vanishes,
            s: i.s,
            s_reason: i.s_reason,
            theory: i.theory,
            char: i.char,
            c_differs: i.c_differs,
            conventions: i.conventions,
            cond1: cs.cond1,
            cond2: cs.cond2,
            cond3: cs.cond3,
            pseudo_thin: cs.pseudo_thin,
            identity_holds: cs.identity_holds,
        }
    }
}

fn batch(cfg: &RunConfig) -> Result<Output> {
    let results: Vec<Result<BatchEntry>> = cfg
        .braids
        .par_iter()
        .map(|nb| {
            Ok(BatchEntry {
                name: nb.name.clone(),
                invariants: invariant_report(&nb.word, cfg.p)?,
                c_simple: simple_row(nb, cfg.p)?,
            })
        })
        .collect();
    let mut entries = Vec::new();
    let mut ok = true;
    let mut messages = Vec::new();
    for r in results {
        let e = r?;
        if e.c_simple.identity_holds == Some(false) {
            ok = false;
            messages.push(format!("{}: a condition holds but s - 1 != sl + 2c", e.name));
        }
        entries.push(e);
    }
    let text = match cfg.format {
        Format::Json => json_lines(&entries),
        Format::Csv => csv_rows(&entries.iter().map(BatchRow::new).collect::<Vec<_>>())?,
    };
    Ok(Output { text, messages, ok })
}
