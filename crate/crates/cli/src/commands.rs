use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use isl_core::arcs::{analyze_pair, classify_family, sample_family, Arc, Crossing, CrossingPair, SegmentDecomposition};
use isl_core::blocks::{build_joint_pda, characterize, membership, segments_and_linkages, BlocksFile, JointSpec};
use isl_core::corpus::{self, first_crossing, Artifacts};
use isl_core::grammar::{cyk_membership, gnf_to_pda, to_cnf, to_gnf};
use isl_core::machine::SearchLimits;
use isl_core::pda::{self, Pda, PdaFile};
use isl_core::product::{
    buffered_product, displacement_product, export_fragment, max_buffer_occupancy, max_displacement, Product,
    ProductKind,
};
use isl_core::pumping::{
    case_trace, check_crossing_hypotheses, factorizations, CaseLabel, HypothesisMode, LinkageOptions, Oracle,
};
use isl_core::report::classification_report;
use isl_core::svg::arc_diagram;

use crate::input::{Input, Source};
use crate::{Cli, Command, Global, ModeChoice, OracleChoice, ProductArgs, ProductChoice, Status};

const OUTPUT_VERSION: &str = "isl-cli-v1";

type Member = Box<dyn FnMut(&str) -> isl_core::Result<bool>>;

struct Reply {
    status: Status,
    text: String,
    json: Value,
}

impl Reply {
    fn new(status: Status, text: String, json: Value) -> Self {
        Reply { status, text, json }
    }
}

struct Ctx<'a> {
    global: &'a Global,
    limits: SearchLimits,
}

impl Ctx<'_> {
    fn max_len(&self, default: usize) -> usize {
        let want = self.global.max_len.unwrap_or(default);
        match self.global.oracle_max_len {
            Some(cap) if want > cap => {
                eprintln!("note: length bound {want} capped at {cap} by ISL_ORACLE_MAX_LEN");
                cap
            }
            _ => want,
        }
    }

    fn runs_cap(&self, default: usize) -> usize {
        self.global.runs_cap.unwrap_or(default).max(1)
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    let ctx = Ctx {
        global: &cli.global,
        limits: SearchLimits::new(cli.global.max_configs),
    };
    let (name, reply) = match &cli.command {
        Command::Simulate { source, word, trace } => ("simulate", simulate(&ctx, source, word, *trace)?),
        Command::Runs { source, word } => ("runs", runs(&ctx, source, word)?),
        Command::Crossings { source, n, word, svg } => (
            "crossings",
            crossings(&ctx, source, *n, word.as_deref(), svg.as_deref())?,
        ),
        Command::Classify { source, sizes } => ("classify", classify(&ctx, source, sizes)?),
        Command::Characterize { source } => ("characterize", characterize_cmd(source)?),
        Command::Construct {
            source,
            product,
            max_expand,
            out,
        } => (
            "construct",
            construct(&ctx, source, product, *max_expand, out.as_deref())?,
        ),
        Command::Verify { source, product } => ("verify", verify(&ctx, source, product)?),
        Command::Linkage {
            source,
            n,
            oracle,
            short_pumps,
            mode,
            threshold,
            cases,
        } => (
            "linkage",
            linkage(&ctx, source, *n, *oracle, *short_pumps, *mode, *threshold, *cases)?,
        ),
        Command::Corpus { name, replay, export } => {
            ("corpus", corpus_cmd(&ctx, name.as_deref(), *replay, export.as_deref())?)
        }
        Command::Report { source, sizes, svg } => ("report", report(&ctx, source, sizes, svg.as_deref())?),
    };
    let out = if cli.global.json {
        let doc = json!({ "version": OUTPUT_VERSION, "command": name, "result": reply.json });
        serde_json::to_string_pretty(&doc)? + "\n"
    } else {
        reply.text
    };
    let mut stdout = io::stdout().lock();
    match stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    Ok(reply.status)
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Positive
    } else {
        Status::Negative
    }
}

fn grammar_pda(cfg: &isl_core::grammar::Cfg) -> Result<Pda> {
    Ok(gnf_to_pda(&to_gnf(&to_cnf(cfg)?)))
}

/// The machines whose joint acceptance defines membership for `input`.
fn machines(input: &Input) -> Result<Vec<Pda>> {
    Ok(match input {
        Input::Single(m) => vec![m.clone()],
        Input::Pair { m1, m2, .. } | Input::Blocks { m1, m2, .. } => vec![m1.clone(), m2.clone()],
        Input::Grammar { cfg, .. } => vec![grammar_pda(cfg)?],
    })
}

fn spec_of(input: &Input) -> Option<&JointSpec> {
    match input {
        Input::Blocks { spec, .. } => Some(spec),
        Input::Pair { bundle: Some(b), .. } => b.spec(),
        _ => None,
    }
}

fn simulate(ctx: &Ctx, source: &Source, word: &str, trace: bool) -> Result<Reply> {
    let input = source.resolve()?;
    let ms = machines(&input)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all = true;
    for m in &ms {
        let (accepted, run) = pda::accepts(m, word, ctx.limits)?;
        all &= accepted;
        writeln!(text, "{}: {}", m.name(), if accepted { "accepted" } else { "rejected" })?;
        if let (true, Some(run)) = (trace, &run) {
            for s in &run.steps {
                writeln!(
                    text,
                    "  pos {:>3} depth {:>3}  {}",
                    s.input_pos,
                    s.stack_depth,
                    m.display_transition(s.transition)
                )?;
            }
        }
        rows.push(json!({ "machine": m.name(), "accepted": accepted, "run": run }));
    }
    if ms.len() > 1 {
        writeln!(text, "intersection: {}", if all { "member" } else { "not a member" })?;
    }
    Ok(Reply::new(
        status(all),
        text,
        json!({ "word": word, "machines": rows, "member": all }),
    ))
}

fn arcs_text(arcs: &[Arc]) -> String {
    if arcs.is_empty() {
        return "(none)".into();
    }
    arcs.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
}

fn runs(ctx: &Ctx, source: &Source, word: &str) -> Result<Reply> {
    let input = source.resolve()?;
    let cap = ctx.runs_cap(20);
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all = true;
    for (k, m) in machines(&input)?.iter().enumerate() {
        let found = isl_core::arcs::matchings(m, word, k as u8 + 1, cap, ctx.limits)?;
        all &= !found.is_empty();
        writeln!(
            text,
            "M{} {}: {} accepting run(s) (cap {cap})",
            k + 1,
            m.name(),
            found.len()
        )?;
        for mt in &found {
            writeln!(text, "  run {}: {}", mt.source.run, arcs_text(&mt.arcs))?;
        }
        rows.push(json!({ "machine": m.name(), "matchings": found }));
    }
    Ok(Reply::new(
        status(all),
        text,
        json!({ "word": word, "cap": cap, "machines": rows }),
    ))
}

fn crossing_row(c: &Crossing) -> String {
    format!(
        "{:<18} gap={:<4} inner={:<4} {}",
        c.pair.to_string(),
        c.measures.gap,
        c.measures.inner,
        c.segments
    )
}

fn crossings(ctx: &Ctx, source: &Source, n: Option<usize>, word: Option<&str>, svg: Option<&Path>) -> Result<Reply> {
    let input = source.resolve()?;
    let (m1, m2) = input.machine_pair()?;
    let word = match (word, n) {
        (Some(w), _) => w.to_string(),
        (None, Some(n)) => input.family_word(n)?,
        (None, None) => bail!("pass --n or --word"),
    };
    let analyses = analyze_pair(m1, m2, &word, ctx.runs_cap(1), ctx.limits)?;
    let mut text = String::new();
    writeln!(text, "word {word} (|w| = {})", word.chars().count())?;
    for a in &analyses {
        writeln!(
            text,
            "runs {}×{}: {} crossing(s)",
            a.m1.source.run,
            a.m2.source.run,
            a.crossings.len()
        )?;
        for c in &a.crossings {
            writeln!(text, "  {}", crossing_row(c))?;
        }
        if let (Some(g), Some(i)) = (a.max_gap(), a.max_inner()) {
            writeln!(text, "  max gap {g}, max inner {i}")?;
        }
    }
    if let Some(path) = svg {
        let first = &analyses[0];
        let arcs: Vec<Arc> = first.m1.arcs.iter().chain(&first.m2.arcs).copied().collect();
        let pairs: Vec<CrossingPair> = first.crossings.iter().map(|c| c.pair).collect();
        let title = format!("{} {word}", input.name());
        fs::write(path, arc_diagram(&title, &word, &arcs, &pairs))
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(Reply::new(
        Status::Positive,
        text,
        json!({ "word": word, "analyses": analyses }),
    ))
}

fn classify(ctx: &Ctx, source: &Source, sizes: &[usize]) -> Result<Reply> {
    let input = source.resolve()?;
    let (m1, m2) = input.machine_pair()?;
    let sizes = if sizes.is_empty() {
        input.default_sizes()
    } else {
        sizes.to_vec()
    };
    let words = sizes
        .iter()
        .map(|&n| Ok((n, input.family_word(n)?)))
        .collect::<Result<Vec<_>>>()?;
    let report = classify_family(&sample_family(m1, m2, &words, ctx.limits)?)?;
    let text = format!("{report}\n");
    Ok(Reply::new(Status::Positive, text, serde_json::to_value(&report)?))
}

fn characterize_cmd(source: &Source) -> Result<Reply> {
    let input = source.resolve()?;
    let spec = spec_of(&input).context("characterize needs a block spec (--blocks)")?;
    let verdict = characterize(spec)?;
    Ok(Reply::new(
        Status::Positive,
        format!("{verdict}\n"),
        json!({ "spec": BlocksFile::from(spec), "verdict": verdict, "text": verdict.to_string() }),
    ))
}

fn build_product(input: &Input, args: &ProductArgs) -> Result<Option<Product>> {
    let Some(kind) = args.kind else { return Ok(None) };
    let (m1, m2) = input.machine_pair()?;
    Ok(Some(match kind {
        ProductChoice::Displacement => {
            displacement_product(m1, m2, args.k.context("--construct displacement needs --k")?)?
        }
        ProductChoice::Buffered => buffered_product(m1, m2, args.d.context("--construct buffered needs --d")?)?,
    }))
}

fn construct(ctx: &Ctx, source: &Source, args: &ProductArgs, max_expand: usize, out: Option<&Path>) -> Result<Reply> {
    let input = source.resolve()?;
    let (doc, bound, note) = if let Some(p) = build_product(&input, args)? {
        let max_len = ctx.max_len(8);
        eprintln!("exploring {} product on inputs up to length {max_len}", p.kind());
        let doc = export_fragment(&p, max_len, max_expand)?;
        let note = format!("{} product fragment, inputs up to length {max_len}", p.kind());
        (doc, Some(p.state_bound()?), note)
    } else {
        match &input {
            Input::Blocks { spec, .. } => {
                let verdict = characterize(spec)?;
                match build_joint_pda(spec) {
                    Ok(m) => (PdaFile::from_pda(&m), None, "joint single-stack PDA".to_string()),
                    Err(isl_core::Error::NotJointlyWellNested(_)) => {
                        let text = format!("no single-stack construction: {verdict}\n");
                        return Ok(Reply::new(Status::Negative, text, json!({ "verdict": verdict })));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Input::Grammar { cfg, .. } => (
                PdaFile::from_pda(&grammar_pda(cfg)?),
                None,
                "PDA from the Greibach form".into(),
            ),
            _ => bail!("machine pairs need --construct displacement|buffered"),
        }
    };
    let summary = format!(
        "{note}: {} states, {} transitions{}",
        doc.states.len(),
        doc.transitions.len(),
        bound.as_ref().map(|b| format!(", state bound {b}")).unwrap_or_default()
    );
    let json = json!({
        "summary": summary,
        "state_bound": bound.as_ref().map(|b| b.to_string()),
        "document": doc,
    });
    let text = match out {
        Some(path) => {
            fs::write(path, doc.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
            format!("{summary}\nwrote {}\n", path.display())
        }
        None => {
            eprintln!("{summary}");
            doc.to_json() + "\n"
        }
    };
    Ok(Reply::new(Status::Positive, text, json))
}

fn mismatch_lines(got: &std::collections::BTreeSet<String>, want: &std::collections::BTreeSet<String>) -> Vec<String> {
    got.difference(want)
        .map(|w| format!("+{w:?} (construction only)"))
        .chain(want.difference(got).map(|w| format!("-{w:?} (oracle only)")))
        .collect()
}

fn verify(ctx: &Ctx, source: &Source, args: &ProductArgs) -> Result<Reply> {
    let input = source.resolve()?;
    let mut text = String::new();
    let (got, want, what, resource) = if let Some(p) = build_product(&input, args)? {
        let max_len = ctx.max_len(10);
        eprintln!("enumerating {} product language up to length {max_len}", p.kind());
        let got = p.language(max_len, ctx.limits)?;
        eprintln!("enumerating intersection oracle up to length {max_len}");
        let want = input.oracle_language(max_len, ctx.limits)?;
        eprintln!("checking accepting runs of {} words", got.len());
        let cap = ctx.runs_cap(20);
        let mut worst = 0;
        for w in &got {
            for run in p.accepting_runs(w, cap, ctx.limits)? {
                worst = worst.max(match p.kind() {
                    ProductKind::Displacement { .. } => max_displacement(&run),
                    ProductKind::Buffered { .. } => max_buffer_occupancy(&run),
                });
            }
        }
        let (label, bound) = match p.kind() {
            ProductKind::Displacement { k } => ("max displacement per pop", 2 * k),
            ProductKind::Buffered { d } => ("max buffer occupancy", 8 * d),
        };
        let what = format!(
            "{} product vs intersection oracle, words up to length {max_len}",
            p.kind()
        );
        (got, want, what, Some((label, worst, bound)))
    } else {
        match &input {
            Input::Blocks { spec, .. } => {
                let verdict = characterize(spec)?;
                let m = build_joint_pda(spec)
                    .with_context(|| format!("{verdict}; pass --construct to verify a bounded product instead"))?;
                let max_len = ctx.max_len(10);
                eprintln!("enumerating joint PDA language up to length {max_len}");
                let got = pda::enumerate_language(&m, max_len, ctx.limits)?;
                let want = corpus::block_language(spec, max_len);
                (
                    got,
                    want,
                    format!("joint PDA vs block membership, words up to length {max_len}"),
                    None,
                )
            }
            Input::Grammar { cfg, .. } => {
                let max_len = ctx.max_len(8);
                let cnf = to_cnf(cfg)?;
                eprintln!("enumerating Greibach PDA language up to length {max_len}");
                let got = pda::enumerate_language(&gnf_to_pda(&to_gnf(&cnf)), max_len, ctx.limits)?;
                let want = corpus::all_words(cfg.terminals(), max_len)
                    .into_iter()
                    .filter(|w| cyk_membership(&cnf, w))
                    .collect();
                (
                    got,
                    want,
                    format!("Greibach PDA vs CYK, words up to length {max_len}"),
                    None,
                )
            }
            _ => bail!("machine pairs need --construct displacement|buffered"),
        }
    };
    let diff = mismatch_lines(&got, &want);
    writeln!(text, "{what}")?;
    if diff.is_empty() {
        writeln!(text, "language equality confirmed, 0 mismatches ({} words)", want.len())?;
    } else {
        writeln!(text, "language mismatch: {} mismatches", diff.len())?;
        for line in diff.iter().take(20) {
            writeln!(text, "  {line}")?;
        }
    }
    let mut ok = diff.is_empty();
    if let Some((label, worst, bound)) = resource {
        writeln!(text, "{label} {worst} (bound {bound})")?;
        ok &= worst <= bound;
    }
    let json = json!({
        "check": what,
        "words": want.len(),
        "mismatches": diff,
        "resource": resource.map(|(label, worst, bound)| json!({ "measure": label, "max": worst, "bound": bound })),
        "confirmed": ok,
    });
    Ok(Reply::new(status(ok), text, json))
}

fn case_description(label: CaseLabel) -> &'static str {
    match label {
        CaseLabel::Case(1) => "inside P1",
        CaseLabel::Case(2) => "straddles P1|P2",
        CaseLabel::Case(3) => "inside P2",
        CaseLabel::Case(4) => "straddles P2|P3",
        CaseLabel::Case(5) => "inside P3",
        CaseLabel::Case(6) => "straddles P3|P4",
        CaseLabel::Case(7) => "inside P4",
        CaseLabel::Case(_) => "?",
        CaseLabel::MultiStraddle => "covers an inner segment",
    }
}

#[allow(clippy::too_many_arguments)]
fn linkage(
    ctx: &Ctx,
    source: &Source,
    n: usize,
    oracle: OracleChoice,
    short_pumps: bool,
    mode: Option<ModeChoice>,
    threshold: Option<usize>,
    cases: bool,
) -> Result<Reply> {
    let input = source.resolve()?;
    let limits = ctx.limits;
    let (word, crossing, segments, default_mode, mut member): (
        String,
        String,
        SegmentDecomposition,
        ModeChoice,
        Member,
    ) = if let Some(spec) = spec_of(&input) {
        let (left, right) = first_crossing(spec).context("the spec has no crossing arcs")?;
        let pkg = segments_and_linkages(spec, left, right, n)?;
        let lang = match oracle {
            OracleChoice::Intersection => spec.intersection(),
            OracleChoice::First => spec.first(),
        };
        let crossing = format!("({},{})×({},{})", left.0, left.1, right.0, right.1);
        (
            pkg.word,
            crossing,
            pkg.segments,
            ModeChoice::FourLarge,
            Box::new(move |s: &str| Ok(membership(&lang, s))),
        )
    } else {
        let (m1, m2) = input.machine_pair()?;
        let word = input.family_word(n)?;
        let first = analyze_pair(m1, m2, &word, 1, limits)?.swap_remove(0);
        let c = first.crossings.first().context("the first runs do not cross")?.clone();
        let (m1, m2) = (m1.clone(), m2.clone());
        let member: Member = match (oracle, &input) {
            (OracleChoice::Intersection, Input::Pair { bundle: Some(b), .. }) => {
                let b = b.clone();
                Box::new(move |s: &str| Ok(b.member(s)))
            }
            (OracleChoice::Intersection, _) => {
                Box::new(move |s: &str| Ok(pda::accepts(&m1, s, limits)?.0 && pda::accepts(&m2, s, limits)?.0))
            }
            (OracleChoice::First, _) => Box::new(move |s: &str| Ok(pda::accepts(&m1, s, limits)?.0)),
        };
        (word, c.pair.to_string(), c.segments, ModeChoice::InnerGrowing, member)
    };
    let threshold = threshold.unwrap_or(n);
    let mode = match mode.unwrap_or(default_mode) {
        ModeChoice::FourLarge => HypothesisMode::FourLarge { n: threshold },
        ModeChoice::InnerGrowing => HypothesisMode::InnerGrowing { n: threshold },
    };
    let opts = if short_pumps {
        LinkageOptions::shorter_than_segments(&segments)
    } else {
        LinkageOptions::default()
    };
    let mut o = Oracle::new(|s: &str| member(s));
    let report = check_crossing_hypotheses(&mut o, &word, &segments, mode, opts)?;

    let mut text = String::new();
    writeln!(text, "word {word}, crossing {crossing}")?;
    writeln!(text, "segments {segments}")?;
    if let Some(p) = opts.max_vxy {
        writeln!(text, "scope |vxy| ≤ {p}")?;
    }
    for l in &report.linkages {
        match &l.counterexample {
            None => writeln!(
                text,
                "linkage {}: holds{} ({} pumps leave the language)",
                l.pair,
                if l.vacuous { " vacuously" } else { "" },
                l.pumped
            )?,
            Some(c) => writeln!(
                text,
                "linkage {}: fails, u={:?} v={:?} x={:?} y={:?} z={:?} pumps to {:?}",
                l.pair, c.u, c.v, c.x, c.y, c.z, c.pumped
            )?,
        }
    }
    for c in &report.size_conditions {
        writeln!(text, "size {}: {}", c.description, if c.holds { "yes" } else { "no" })?;
    }
    writeln!(text, "{}", report.summary)?;

    let mut table = Vec::new();
    if cases {
        let chars: Vec<char> = word.chars().collect();
        let span = opts.max_vxy.unwrap_or(usize::MAX);
        let mut rows: BTreeMap<(u8, String), (String, usize, usize)> = BTreeMap::new();
        for f in factorizations(chars.len()) {
            let [a, b, c, d] = f.cuts;
            if (a == b && c == d) || d - a > span {
                continue;
            }
            let t = case_trace(&segments, &f)?;
            let key = match t.label {
                CaseLabel::Case(k) => (k, t.label.to_string()),
                CaseLabel::MultiStraddle => (8, t.label.to_string()),
            };
            let linked = t.linkage.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
            let row = rows.entry(key).or_insert((linked, 0, 0));
            row.1 += 1;
            if !o.member(&f.pump(&chars, 2))? {
                row.2 += 1;
            }
        }
        writeln!(text)?;
        writeln!(
            text,
            "{:<15} {:<24} {:<8} {:>14} {:>11}",
            "case", "vxy", "linkage", "factorizations", "pumped out"
        )?;
        for ((_, label), (linked, count, out)) in &rows {
            let desc = if label == "multi-straddle" {
                case_description(CaseLabel::MultiStraddle)
            } else {
                case_description(CaseLabel::Case(label.trim_start_matches("case ").parse().unwrap_or(0)))
            };
            writeln!(text, "{label:<15} {desc:<24} {linked:<8} {count:>14} {out:>11}")?;
            table.push(
                json!({ "case": label, "vxy": desc, "linkage": linked, "factorizations": count, "pumped_out": out }),
            );
        }
    }
    let json = json!({
        "word": word,
        "crossing": crossing,
        "segments": segments,
        "report": report,
        "cases": table,
    });
    Ok(Reply::new(status(report.all_hold), text, json))
}

fn corpus_cmd(ctx: &Ctx, name: Option<&str>, replay: bool, export: Option<&Path>) -> Result<Reply> {
    let names: Vec<&str> = match name {
        Some(n) => {
            corpus::get(n)?;
            vec![corpus::list().into_iter().find(|x| *x == n).unwrap_or_default()]
        }
        None => corpus::list(),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for n in &names {
        let bundle = corpus::get(n)?;
        let kind = match &bundle.artifacts {
            Artifacts::Pair { .. } => "pair",
            Artifacts::Blocks { .. } => "blocks",
            Artifacts::Grammar { .. } => "grammar",
        };
        let mut row = json!({ "name": n, "kind": kind, "description": bundle.description });
        if replay {
            eprintln!("replaying {n}");
            let outcomes = bundle.replay(ctx.limits)?;
            writeln!(text, "{n}")?;
            for r in &outcomes {
                ok &= r.passed;
                writeln!(
                    text,
                    "  {} {} ({})",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.expectation,
                    r.detail
                )?;
            }
            row["replay"] = serde_json::to_value(&outcomes)?;
        } else if name.is_some() {
            writeln!(text, "{n} ({kind}): {}", bundle.description)?;
            if let Some((m1, m2)) = bundle.machines() {
                for m in [m1, m2] {
                    writeln!(
                        text,
                        "  machine {}: {} states, {} transitions",
                        m.name(),
                        m.states().len(),
                        m.transitions().len()
                    )?;
                }
            }
            if let Some(spec) = bundle.spec() {
                writeln!(text, "  verdict: {}", characterize(spec)?)?;
            }
            if let Some(cfg) = bundle.grammar() {
                for line in cfg.to_string().lines() {
                    writeln!(text, "  {line}")?;
                }
            }
            if !bundle.sizes.is_empty() {
                writeln!(text, "  sizes: {:?}", bundle.sizes)?;
            }
            for e in &bundle.expected {
                writeln!(text, "  expects {e}")?;
            }
            row["expected"] = serde_json::to_value(&bundle.expected)?;
        } else {
            writeln!(text, "{n:<24} {kind:<8} {}", bundle.description)?;
        }
        if let Some(dir) = export {
            let dir = if name.is_some() { dir.to_path_buf() } else { dir.join(n) };
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut written = Vec::new();
            let mut put = |file: &str, body: String| -> Result<()> {
                let path = dir.join(file);
                fs::write(&path, body + "\n").with_context(|| format!("writing {}", path.display()))?;
                written.push(path.display().to_string());
                Ok(())
            };
            if let Some((m1, m2)) = bundle.machines() {
                put("m1.json", m1.to_json())?;
                put("m2.json", m2.to_json())?;
            }
            if let Some(spec) = bundle.spec() {
                put("spec.json", spec.to_json())?;
            }
            if let Some(cfg) = bundle.grammar() {
                put("grammar.json", cfg.to_json())?;
            }
            for w in &written {
                eprintln!("wrote {w}");
            }
            row["exported"] = json!(written);
        }
        rows.push(row);
    }
    Ok(Reply::new(status(ok), text, json!(rows)))
}

fn report(ctx: &Ctx, source: &Source, sizes: &[usize], svg: Option<&Path>) -> Result<Reply> {
    let input = source.resolve()?;
    let Input::Pair {
        bundle: Some(bundle), ..
    } = &input
    else {
        bail!("report needs a corpus example with a machine pair (--pair NAME)");
    };
    let r = classification_report(bundle, sizes, ctx.limits)?;
    if let Some(path) = svg {
        fs::write(path, r.combined_svg()).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(Reply::new(
        Status::Positive,
        format!("{r}\n"),
        serde_json::to_value(&r)?,
    ))
}
