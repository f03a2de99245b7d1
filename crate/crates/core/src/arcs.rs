//! Push-pop matchings, well-nestedness, and crossing geometry.
//!
//! Positions are 1-based: an arc `(i, j)` pairs the push made while reading
//! `w[i]` with the pop made while reading `w[j]`.

use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::SearchLimits;
use crate::pda::{enumerate_runs, AcceptanceMode, AcceptingRun, Pda, StackOp, StackSym};

/// Which of the (at most two) pushes made at one position an arc starts at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PushOrdinal {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arc {
    pub push_pos: usize,
    pub pop_pos: usize,
    /// Machine tag, 1 or 2.
    pub owner: u8,
    pub ordinal: PushOrdinal,
}

impl Arc {
    pub fn new(push_pos: usize, pop_pos: usize, owner: u8) -> Self {
        Arc {
            push_pos,
            pop_pos,
            owner,
            ordinal: PushOrdinal::First,
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.push_pos, self.pop_pos)
    }

    /// `self` starts first and the two interleave strictly.
    pub fn crosses_before(&self, other: &Arc) -> bool {
        self.push_pos < other.push_pos && other.push_pos < self.pop_pos && self.pop_pos < other.pop_pos
    }

    pub fn crosses(&self, other: &Arc) -> bool {
        self.crosses_before(other) || other.crosses_before(self)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.push_pos, self.pop_pos)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingSource {
    pub machine: String,
    pub word: String,
    /// Index of the run in enumeration order.
    pub run: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    /// Sorted by push position, then pop position.
    pub arcs: Vec<Arc>,
    pub source: MatchingSource,
}

/// Pairs every push of `run` with the pop that removes it.
pub fn extract_matching(pda: &Pda, run: &AcceptingRun, owner: u8, run_index: usize) -> Result<Matching> {
    let mut stack: Vec<(StackSym, usize, PushOrdinal)> = Vec::new();
    let mut arcs = Vec::new();
    let mut last_push_pos = 0;
    let mut pushes_here = 0;
    for step in &run.steps {
        let t = &pda.transitions()[step.transition];
        // A move that consumed no input belongs to the read before it.
        let pos = step.input_pos.max(1);
        for op in &t.ops {
            match *op {
                StackOp::Push(s) => {
                    if pos != last_push_pos {
                        last_push_pos = pos;
                        pushes_here = 0;
                    }
                    let ordinal = if pushes_here == 0 {
                        PushOrdinal::First
                    } else {
                        PushOrdinal::Second
                    };
                    pushes_here += 1;
                    stack.push((s, pos, ordinal));
                }
                StackOp::Pop(s) => match stack.pop() {
                    Some((top, i, ordinal)) if top == s => arcs.push(Arc {
                        push_pos: i,
                        pop_pos: pos,
                        owner,
                        ordinal,
                    }),
                    Some(_) => {
                        return Err(Error::PreconditionViolated(format!(
                            "run pops a symbol that is not on top at position {pos}"
                        )))
                    }
                    // Popping the bottom marker.
                    None => {}
                },
            }
        }
    }
    if !stack.is_empty() && pda.acceptance_mode() == AcceptanceMode::FinalStateAndBottomOnly {
        return Err(Error::UnbalancedRun);
    }
    arcs.sort();
    Ok(Matching {
        arcs,
        source: MatchingSource {
            machine: pda.name().to_string(),
            word: run.word.clone(),
            run: run_index,
        },
    })
}

/// Matchings of up to `cap` accepting runs, in enumeration order.
pub fn matchings(pda: &Pda, word: &str, owner: u8, cap: usize, limits: SearchLimits) -> Result<Vec<Matching>> {
    enumerate_runs(pda, word, cap, limits)?
        .iter()
        .enumerate()
        .map(|(k, run)| extract_matching(pda, run, owner, k))
        .collect()
}

/// Whether no two arcs cross; otherwise the lexicographically smallest
/// crossing pair, earlier-starting arc first.
pub fn is_well_nested(arcs: &[Arc]) -> (bool, Option<(Arc, Arc)>) {
    let mut sorted = arcs.to_vec();
    sorted.sort();
    for (k, a) in sorted.iter().enumerate() {
        for b in &sorted[k + 1..] {
            if a.crosses_before(b) {
                return (false, Some((*a, *b)));
            }
        }
    }
    (true, None)
}

/// Whether the union of two individually well-nested sets is well-nested,
/// checked by looking only at pairs drawn from different sets.
pub fn union_well_nested(s1: &[Arc], s2: &[Arc]) -> Result<bool> {
    for (name, s) in [("first", s1), ("second", s2)] {
        if let (false, Some((a, b))) = is_well_nested(s) {
            return Err(Error::PreconditionViolated(format!(
                "{name} arc set is not well-nested: {a} crosses {b}"
            )));
        }
    }
    Ok(!s1.iter().any(|a| s2.iter().any(|b| a.crosses(b))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingPair {
    /// Endpoints `(i, j)`.
    pub left: Arc,
    /// Endpoints `(i', j')` with `i < i' < j < j'`.
    pub right: Arc,
}

impl CrossingPair {
    pub fn new(a: Arc, b: Arc) -> Result<Self> {
        if a.crosses_before(&b) {
            Ok(CrossingPair { left: a, right: b })
        } else if b.crosses_before(&a) {
            Ok(CrossingPair { left: b, right: a })
        } else {
            Err(Error::NoCrossing)
        }
    }

    pub fn key(&self) -> (usize, usize, usize, usize) {
        (
            self.left.push_pos,
            self.right.push_pos,
            self.left.pop_pos,
            self.right.pop_pos,
        )
    }

    pub fn measures(&self) -> CrossingMeasures {
        let (i, i2, j, j2) = self.key();
        CrossingMeasures {
            gap: (i2 - i).max(j2 - j),
            inner: (i2 - i).max(j - i2),
        }
    }

    pub fn segments(&self, len: usize) -> SegmentDecomposition {
        let (i, i2, j, _) = self.key();
        SegmentDecomposition {
            p1: 0..i,
            p2: i..i2,
            p3: i2..j,
            p4: j..len,
        }
    }
}

impl fmt::Display for CrossingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}×{}", self.left, self.right)
    }
}

/// The four segments cut out of `w` by a crossing pair, as 0-based
/// half-open index ranges: `P1 = w[1..i]`, `P2 = w[i+1..i']`,
/// `P3 = w[i'+1..j]`, `P4 = w[j+1..]` in 1-based terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentDecomposition {
    pub p1: Range<usize>,
    pub p2: Range<usize>,
    pub p3: Range<usize>,
    pub p4: Range<usize>,
}

impl SegmentDecomposition {
    /// Cuts `[0, len)` at the three given offsets.
    pub fn from_cuts(c1: usize, c2: usize, c3: usize, len: usize) -> Result<Self> {
        if !(c1 <= c2 && c2 <= c3 && c3 <= len) {
            return Err(Error::PreconditionViolated(format!(
                "cuts {c1} ≤ {c2} ≤ {c3} ≤ {len} out of order"
            )));
        }
        Ok(SegmentDecomposition {
            p1: 0..c1,
            p2: c1..c2,
            p3: c2..c3,
            p4: c3..len,
        })
    }

    pub fn segments(&self) -> [Range<usize>; 4] {
        [self.p1.clone(), self.p2.clone(), self.p3.clone(), self.p4.clone()]
    }

    pub fn lengths(&self) -> [usize; 4] {
        self.segments().map(|r| r.len())
    }

    pub fn len(&self) -> usize {
        self.p4.end
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for SegmentDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .segments()
            .iter()
            .enumerate()
            .map(|(k, r)| {
                if r.is_empty() {
                    format!("P{}=∅", k + 1)
                } else {
                    format!("P{}=[{}..{}]", k + 1, r.start + 1, r.end)
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingMeasures {
    /// `max(i' - i, j' - j)`
    pub gap: usize,
    /// `max(i' - i, j - i')`
    pub inner: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub pair: CrossingPair,
    pub segments: SegmentDecomposition,
    pub measures: CrossingMeasures,
}

/// Every crossing pair between arcs of two matchings of the same word,
/// sorted by `(i, i', j, j')`.
pub fn crossing_pairs(m1: &Matching, m2: &Matching) -> Result<Vec<Crossing>> {
    if m1.source.word != m2.source.word {
        return Err(Error::SourceMismatch {
            left: m1.source.word.clone(),
            right: m2.source.word.clone(),
        });
    }
    let len = m1.source.word.chars().count();
    let mut out: Vec<Crossing> = m1
        .arcs
        .iter()
        .flat_map(|a| m2.arcs.iter().map(move |b| (a, b)))
        .filter_map(|(a, b)| CrossingPair::new(*a, *b).ok())
        .map(|pair| Crossing {
            segments: pair.segments(len),
            measures: pair.measures(),
            pair,
        })
        .collect();
    out.sort_by_key(|c| (c.pair.key(), c.pair.left.owner));
    Ok(out)
}

/// Crossing analysis of one word under a pair of machines.
#[derive(Clone, Debug, Serialize)]
pub struct PairAnalysis {
    pub word: String,
    pub m1: Matching,
    pub m2: Matching,
    pub crossings: Vec<Crossing>,
}

impl PairAnalysis {
    pub fn max_gap(&self) -> Option<usize> {
        self.crossings.iter().map(|c| c.measures.gap).max()
    }

    pub fn max_inner(&self) -> Option<usize> {
        self.crossings.iter().map(|c| c.measures.inner).max()
    }
}

/// Crossings between runs of two machines on `word`. Every combination of
/// the first `runs_cap` runs of each machine is reported, starting with the
/// pair of first runs. The word must be accepted by both.
pub fn analyze_pair(
    m1: &Pda,
    m2: &Pda,
    word: &str,
    runs_cap: usize,
    limits: SearchLimits,
) -> Result<Vec<PairAnalysis>> {
    let left = matchings(m1, word, 1, runs_cap.max(1), limits)?;
    let right = matchings(m2, word, 2, runs_cap.max(1), limits)?;
    if left.is_empty() || right.is_empty() {
        return Err(Error::NotInLanguage(word.to_string()));
    }
    let mut out = Vec::new();
    for a in &left {
        for b in &right {
            out.push(PairAnalysis {
                word: word.to_string(),
                crossings: crossing_pairs(a, b)?,
                m1: a.clone(),
                m2: b.clone(),
            });
        }
    }
    Ok(out)
}

/// One sample per family word, measured on the first accepting run of each
/// machine.
pub fn sample_family(m1: &Pda, m2: &Pda, words: &[(usize, String)], limits: SearchLimits) -> Result<Vec<FamilySample>> {
    words
        .iter()
        .map(|(n, w)| {
            let first = analyze_pair(m1, m2, w, 1, limits)?.swap_remove(0);
            Ok(FamilySample {
                n: *n,
                word: w.clone(),
                measures: first.crossings.iter().map(|c| c.measures).collect(),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    NoCrossings,
    BoundedGap,
    BoundedInnerUnboundedGap,
    GrowingInner,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::NoCrossings => "no-crossings",
            Regime::BoundedGap => "bounded-gap",
            Regime::BoundedInnerUnboundedGap => "bounded-inner-unbounded-gap",
            Regime::GrowingInner => "growing-inner",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Constant,
    /// Strictly increasing from each sampled size to the next.
    Growing,
    Mixed,
}

/// Crossings observed on one member of a word family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySample {
    /// Family parameter.
    pub n: usize,
    pub word: String,
    pub measures: Vec<CrossingMeasures>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvidenceRow {
    pub n: usize,
    pub word_len: usize,
    pub crossings: usize,
    pub max_gap: Option<usize>,
    pub max_inner: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub gap_trend: Option<Trend>,
    pub inner_trend: Option<Trend>,
    pub evidence: Vec<EvidenceRow>,
}

impl fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>4} {:>6} {:>9} {:>7} {:>7}",
            "n", "|w|", "crossings", "gap", "inner"
        )?;
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        for r in &self.evidence {
            writeln!(
                f,
                "{:>4} {:>6} {:>9} {:>7} {:>7}",
                r.n,
                r.word_len,
                r.crossings,
                opt(r.max_gap),
                opt(r.max_inner)
            )?;
        }
        write!(f, "regime: {}", self.regime)
    }
}

fn trend(values: &[usize]) -> Trend {
    if values.windows(2).all(|w| w[0] == w[1]) {
        Trend::Constant
    } else if values.windows(2).all(|w| w[0] < w[1]) {
        Trend::Growing
    } else {
        Trend::Mixed
    }
}

/// Classifies how crossing measures scale across a word family, from the
/// per-sample maxima: constant gap is bounded-gap; growing gap with constant
/// inner measure is bounded-inner-unbounded-gap; both growing is
/// growing-inner.
pub fn classify_family(samples: &[FamilySample]) -> Result<RegimeReport> {
    let mut samples = samples.to_vec();
    samples.sort_by_key(|s| s.word.chars().count());
    let sizes: std::collections::BTreeSet<usize> = samples.iter().map(|s| s.word.chars().count()).collect();
    if sizes.len() < 2 {
        return Err(Error::PreconditionViolated(
            "classification needs at least two sample sizes".into(),
        ));
    }
    let evidence: Vec<EvidenceRow> = samples
        .iter()
        .map(|s| EvidenceRow {
            n: s.n,
            word_len: s.word.chars().count(),
            crossings: s.measures.len(),
            max_gap: s.measures.iter().map(|m| m.gap).max(),
            max_inner: s.measures.iter().map(|m| m.inner).max(),
        })
        .collect();
    let crossing = evidence.iter().filter(|r| r.crossings > 0).count();
    if crossing == 0 {
        return Ok(RegimeReport {
            regime: Regime::NoCrossings,
            gap_trend: None,
            inner_trend: None,
            evidence,
        });
    }
    if crossing < evidence.len() {
        return Err(Error::Inconclusive("some samples cross and others do not".into()));
    }
    let gaps: Vec<usize> = evidence.iter().filter_map(|r| r.max_gap).collect();
    let inners: Vec<usize> = evidence.iter().filter_map(|r| r.max_inner).collect();
    let (gap_trend, inner_trend) = (trend(&gaps), trend(&inners));
    let regime = match (gap_trend, inner_trend) {
        (Trend::Constant, _) => Regime::BoundedGap,
        (Trend::Growing, Trend::Constant) => Regime::BoundedInnerUnboundedGap,
        (Trend::Growing, Trend::Growing) => Regime::GrowingInner,
        _ => {
            return Err(Error::Inconclusive(format!(
                "gap trend {gap_trend:?}, inner trend {inner_trend:?} (gaps {gaps:?}, inner {inners:?})"
            )))
        }
    };
    Ok(RegimeReport {
        regime,
        gap_trend: Some(gap_trend),
        inner_trend: Some(inner_trend),
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pda::{accepts, Op, PdaBuilder};

    fn arcs(pairs: &[(usize, usize)]) -> Vec<Arc> {
        pairs.iter().map(|&(i, j)| Arc::new(i, j, 1)).collect()
    }

    fn matching(word: &str, owner: u8, pairs: &[(usize, usize)]) -> Matching {
        Matching {
            arcs: pairs.iter().map(|&(i, j)| Arc::new(i, j, owner)).collect(),
            source: MatchingSource {
                machine: format!("m{owner}"),
                word: word.into(),
                run: 0,
            },
        }
    }

    #[test]
    fn anbn_matching_is_nested() {
        let mut b = PdaBuilder::new("anbn");
        b.start("p")
            .read("p", 'a', Op::Push("A"), "p")
            .read("p", 'b', Op::Pop("A"), "q")
            .read("q", 'b', Op::Pop("A"), "q")
            .accept("q")
            .mode(AcceptanceMode::FinalStateAndBottomOnly);
        let m = b.build().unwrap();
        let run = accepts(&m, "aabb", SearchLimits::default()).unwrap().1.unwrap();
        let mm = extract_matching(&m, &run, 1, 0).unwrap();
        let ends: Vec<(usize, usize)> = mm.arcs.iter().map(Arc::endpoints).collect();
        assert_eq!(ends, vec![(1, 4), (2, 3)]);
        assert!(is_well_nested(&mm.arcs).0);
    }

    #[test]
    fn no_stack_activity() {
        let mut b = PdaBuilder::new("flat");
        b.start("p").read("p", 'a', Op::Skip, "p").accept("p");
        let m = b.build().unwrap();
        let run = accepts(&m, "aaa", SearchLimits::default()).unwrap().1.unwrap();
        assert!(extract_matching(&m, &run, 1, 0).unwrap().arcs.is_empty());
    }

    #[test]
    fn residual_stack_is_unbalanced() {
        let mut b = PdaBuilder::new("push");
        b.start("p").read("p", 'a', Op::Push("A"), "p").accept("p");
        let m = b.build().unwrap();
        let run = accepts(&m, "a", SearchLimits::default()).unwrap().1.unwrap();
        assert!(extract_matching(&m, &run, 1, 0).unwrap().arcs.is_empty());
        let strict = {
            let mut b = b.clone();
            b.mode(AcceptanceMode::FinalStateAndBottomOnly);
            b.build().unwrap()
        };
        assert!(matches!(
            extract_matching(&strict, &run, 1, 0),
            Err(Error::UnbalancedRun)
        ));
    }

    #[test]
    fn auxiliary_push_takes_read_position() {
        let mut b = PdaBuilder::new("aux");
        b.start("s")
            .read("s", 'a', Op::Push("X"), "m")
            .aux_push("m", "Y", "t")
            .read("t", 'b', Op::Pop("Y"), "t")
            .read("t", 'c', Op::Pop("X"), "t")
            .accept("t")
            .mode(AcceptanceMode::FinalStateAndBottomOnly);
        let m = b.build().unwrap();
        let run = accepts(&m, "abc", SearchLimits::default()).unwrap().1.unwrap();
        let mm = extract_matching(&m, &run, 1, 0).unwrap();
        assert_eq!(
            mm.arcs,
            vec![
                Arc {
                    push_pos: 1,
                    pop_pos: 2,
                    owner: 1,
                    ordinal: PushOrdinal::Second
                },
                Arc {
                    push_pos: 1,
                    pop_pos: 3,
                    owner: 1,
                    ordinal: PushOrdinal::First
                },
            ]
        );
    }

    #[test]
    fn well_nestedness_witness() {
        assert_eq!(is_well_nested(&arcs(&[(1, 4), (2, 3)])), (true, None));
        assert_eq!(is_well_nested(&[]), (true, None));
        let (ok, w) = is_well_nested(&arcs(&[(2, 4), (1, 3)]));
        assert!(!ok);
        let (a, b) = w.unwrap();
        assert_eq!((a.endpoints(), b.endpoints()), ((1, 3), (2, 4)));
        let (_, w) = is_well_nested(&arcs(&[(3, 6), (2, 5), (1, 4)]));
        let (a, b) = w.unwrap();
        assert_eq!((a.endpoints(), b.endpoints()), ((1, 4), (2, 5)));
    }

    #[test]
    fn union_checks() {
        assert!(union_well_nested(&arcs(&[(1, 6)]), &arcs(&[(2, 3), (4, 5)])).unwrap());
        assert!(!union_well_nested(&arcs(&[(1, 3)]), &arcs(&[(2, 4)])).unwrap());
        assert!(union_well_nested(&[], &arcs(&[(1, 2)])).unwrap());
        assert!(matches!(
            union_well_nested(&arcs(&[(1, 3), (2, 4)]), &[]),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn crossing_measures_and_segments() {
        let word = "abadddeeef";
        let c = crossing_pairs(&matching(word, 1, &[(1, 3)]), &matching(word, 2, &[(2, 10)])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].measures, CrossingMeasures { gap: 7, inner: 1 });
        assert_eq!(c[0].segments.lengths(), [1, 1, 1, 7]);
        assert_eq!(c[0].segments.to_string(), "P1=[1..1] P2=[2..2] P3=[3..3] P4=[4..10]");

        // Orientation is normalized whichever machine starts first.
        let c = crossing_pairs(&matching("xxxxxx", 1, &[(2, 6)]), &matching("xxxxxx", 2, &[(1, 3)])).unwrap();
        assert_eq!(c[0].pair.left.owner, 2);
        assert_eq!(c[0].pair.key(), (1, 2, 3, 6));
        // Large j - i' with small j' - j: inner exceeds gap.
        assert_eq!(c[0].measures, CrossingMeasures { gap: 3, inner: 1 });
        let c = crossing_pairs(
            &matching("x".repeat(12).as_str(), 1, &[(1, 10)]),
            &matching("x".repeat(12).as_str(), 2, &[(2, 11)]),
        )
        .unwrap();
        assert_eq!(c[0].measures, CrossingMeasures { gap: 1, inner: 8 });
    }

    #[test]
    fn same_position_and_disjoint_arcs_never_cross() {
        let c = crossing_pairs(
            &matching("aaaa", 1, &[(1, 2), (2, 2)]),
            &matching("aaaa", 2, &[(3, 4), (2, 2)]),
        )
        .unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn mismatched_sources() {
        assert!(matches!(
            crossing_pairs(&matching("ab", 1, &[]), &matching("ba", 2, &[])),
            Err(Error::SourceMismatch { .. })
        ));
    }

    fn sample(n: usize, len: usize, ms: &[(usize, usize)]) -> FamilySample {
        FamilySample {
            n,
            word: "x".repeat(len),
            measures: ms.iter().map(|&(gap, inner)| CrossingMeasures { gap, inner }).collect(),
        }
    }

    #[test]
    fn regimes() {
        let r = classify_family(&[sample(1, 4, &[]), sample(2, 8, &[])]).unwrap();
        assert_eq!(r.regime, Regime::NoCrossings);
        let r = classify_family(&[sample(1, 4, &[(1, 1)]), sample(2, 8, &[(1, 1), (1, 1)])]).unwrap();
        assert_eq!(r.regime, Regime::BoundedGap);
        let r = classify_family(&[
            sample(1, 7, &[(3, 1)]),
            sample(2, 9, &[(5, 1)]),
            sample(3, 11, &[(7, 1)]),
        ])
        .unwrap();
        assert_eq!(r.regime, Regime::BoundedInnerUnboundedGap);
        let r = classify_family(&[sample(1, 4, &[(1, 1)]), sample(2, 8, &[(2, 2)])]).unwrap();
        assert_eq!(r.regime, Regime::GrowingInner);
        assert!(matches!(
            classify_family(&[
                sample(1, 4, &[(1, 1)]),
                sample(2, 8, &[(3, 1)]),
                sample(3, 9, &[(2, 1)])
            ]),
            Err(Error::Inconclusive(_))
        ));
        assert!(matches!(
            classify_family(&[sample(1, 4, &[(1, 1)]), sample(2, 8, &[])]),
            Err(Error::Inconclusive(_))
        ));
        assert!(classify_family(&[sample(1, 4, &[(1, 1)])]).is_err());
    }
}
