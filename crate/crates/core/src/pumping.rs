//! Exhaustive checks of pump-sensitive linkage on concrete words.
//!
//! A pair of segments `(P, Q)` of `w` is linked when every factorization
//! `w = uvxyz` with `|vy| ≥ 1` whose `vxy` touches exactly one of the two
//! segments pumps out of the language: `uv²xy²z ∉ L`. No bound on `|vxy|`
//! applies, so all `O(|w|⁴)` factorizations are examined.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::arcs::SegmentDecomposition;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_WORD_LEN: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinkageOptions {
    /// Longest word accepted; the search is quartic in its length.
    pub max_word_len: usize,
    /// Only factorizations with `|vxy|` at most this are considered. `None`
    /// quantifies over every factorization.
    pub max_vxy: Option<usize>,
}

impl Default for LinkageOptions {
    fn default() -> Self {
        LinkageOptions {
            max_word_len: DEFAULT_MAX_WORD_LEN,
            max_vxy: None,
        }
    }
}

impl LinkageOptions {
    /// Factorizations strictly shorter than every segment of `seg`, the
    /// regime in which a pumping constant below all segment lengths
    /// operates.
    pub fn shorter_than_segments(seg: &SegmentDecomposition) -> Self {
        let min = seg.lengths().into_iter().min().unwrap_or(0);
        LinkageOptions {
            max_vxy: Some(min.saturating_sub(1)),
            ..Self::default()
        }
    }
}

/// Cuts `0 ≤ a ≤ b ≤ c ≤ d ≤ |w|` giving `u = w[..a]`, `v = w[a..b]`,
/// `x = w[b..c]`, `y = w[c..d]`, `z = w[d..]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Factorization {
    pub cuts: [usize; 4],
}

impl Factorization {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        Factorization { cuts: [a, b, c, d] }
    }

    pub fn vxy(&self) -> Range<usize> {
        self.cuts[0]..self.cuts[3]
    }

    pub fn pumped_len(&self) -> usize {
        let [a, b, c, d] = self.cuts;
        (b - a) + (d - c)
    }

    pub fn parts(&self, w: &[char]) -> [String; 5] {
        let [a, b, c, d] = self.cuts;
        let s = |r: Range<usize>| w[r].iter().collect::<String>();
        [s(0..a), s(a..b), s(b..c), s(c..d), s(d..w.len())]
    }

    /// `u v^i x y^i z`.
    pub fn pump(&self, w: &[char], i: usize) -> String {
        let [u, v, x, y, z] = self.parts(w);
        format!("{u}{}{x}{}{z}", v.repeat(i), y.repeat(i))
    }
}

/// All cut tuples for a word of length `n`, `C(n+4, 4)` of them.
pub fn factorizations(n: usize) -> impl Iterator<Item = Factorization> {
    (0..=n).flat_map(move |a| {
        (a..=n).flat_map(move |b| (b..=n).flat_map(move |c| (c..=n).map(move |d| Factorization::new(a, b, c, d))))
    })
}

/// Factorizations with `|vy| ≥ 1`, by increasing `|vxy|`, then
/// lexicographically by cuts.
fn pumpable(n: usize, max_span: usize) -> impl Iterator<Item = Factorization> {
    (1..=n.min(max_span)).flat_map(move |span| {
        (0..=n - span).flat_map(move |a| {
            let d = a + span;
            (a..=d).flat_map(move |b| {
                (b..=d)
                    .map(move |c| Factorization::new(a, b, c, d))
                    .filter(|f| f.pumped_len() >= 1)
            })
        })
    })
}

fn touches(range: &Range<usize>, segment: &Range<usize>) -> bool {
    !segment.is_empty() && range.start < segment.end && segment.start < range.end
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LinkedPair {
    #[serde(rename = "P1-P3")]
    P1P3,
    #[serde(rename = "P2-P4")]
    P2P4,
}

impl LinkedPair {
    pub fn indices(self) -> (usize, usize) {
        match self {
            LinkedPair::P1P3 => (0, 2),
            LinkedPair::P2P4 => (1, 3),
        }
    }
}

impl fmt::Display for LinkedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.indices();
        write!(f, "(P{},P{})", a + 1, b + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub factorization: Factorization,
    pub u: String,
    pub v: String,
    pub x: String,
    pub y: String,
    pub z: String,
    /// `uv²xy²z`, which the oracle accepts.
    pub pumped: String,
    /// 0-based index of the segment `vxy` touches.
    pub touched: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkageVerdict {
    pub pair: LinkedPair,
    pub holds: bool,
    pub max_vxy: Option<usize>,
    /// One of the two segments is empty, so nothing can touch it and the
    /// verdict says nothing about the language.
    pub vacuous: bool,
    /// Factorizations touching exactly one segment that were pumped.
    pub pumped: usize,
    pub counterexample: Option<Counterexample>,
}

/// Memoizing wrapper around a membership oracle.
pub struct Oracle<F> {
    f: F,
    memo: HashMap<String, bool>,
}

impl<F: FnMut(&str) -> Result<bool>> Oracle<F> {
    pub fn new(f: F) -> Self {
        Oracle {
            f,
            memo: HashMap::new(),
        }
    }

    pub fn member(&mut self, w: &str) -> Result<bool> {
        if let Some(&b) = self.memo.get(w) {
            return Ok(b);
        }
        let b = (self.f)(w).map_err(|e| match e {
            Error::OracleFailure(m) => Error::OracleFailure(m),
            other => Error::OracleFailure(other.to_string()),
        })?;
        self.memo.insert(w.to_string(), b);
        Ok(b)
    }

    pub fn calls(&self) -> usize {
        self.memo.len()
    }
}

fn check_word<F: FnMut(&str) -> Result<bool>>(
    oracle: &mut Oracle<F>,
    w: &str,
    seg: &SegmentDecomposition,
    max_len: usize,
) -> Result<Vec<char>> {
    let word: Vec<char> = w.chars().collect();
    if word.len() > max_len {
        return Err(Error::WordTooLong {
            len: word.len(),
            max: max_len,
        });
    }
    if seg.len() != word.len() {
        return Err(Error::PreconditionViolated(format!(
            "segmentation covers {} positions but the word has {}",
            seg.len(),
            word.len()
        )));
    }
    if !oracle.member(w)? {
        return Err(Error::NotInLanguage(w.to_string()));
    }
    Ok(word)
}

/// Decides whether `pair` is pump-sensitively linked in `w`. A failing
/// verdict carries the counterexample with the shortest `vxy`, ties broken
/// by cut positions.
pub fn check_linkage<F: FnMut(&str) -> Result<bool>>(
    oracle: &mut Oracle<F>,
    w: &str,
    seg: &SegmentDecomposition,
    pair: LinkedPair,
    opts: LinkageOptions,
) -> Result<LinkageVerdict> {
    let word = check_word(oracle, w, seg, opts.max_word_len)?;
    let segments = seg.segments();
    let (p, q) = pair.indices();
    let (sp, sq) = (&segments[p], &segments[q]);
    let vacuous = sp.is_empty() || sq.is_empty();
    let mut pumped = 0;
    for f in pumpable(word.len(), opts.max_vxy.unwrap_or(usize::MAX)) {
        let r = f.vxy();
        let (tp, tq) = (touches(&r, sp), touches(&r, sq));
        if tp == tq {
            continue;
        }
        pumped += 1;
        let s = f.pump(&word, 2);
        if oracle.member(&s)? {
            let [u, v, x, y, z] = f.parts(&word);
            return Ok(LinkageVerdict {
                pair,
                holds: false,
                max_vxy: opts.max_vxy,
                vacuous,
                pumped,
                counterexample: Some(Counterexample {
                    factorization: f,
                    u,
                    v,
                    x,
                    y,
                    z,
                    pumped: s,
                    touched: if tp { p } else { q },
                }),
            });
        }
    }
    Ok(LinkageVerdict {
        pair,
        holds: true,
        max_vxy: opts.max_vxy,
        vacuous,
        pumped,
        counterexample: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum HypothesisMode {
    /// All four segments have length at least `n`.
    FourLarge { n: usize },
    /// Both inner segments non-empty and the longer one at least `n`.
    InnerGrowing { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeCondition {
    pub description: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub word: String,
    pub mode: HypothesisMode,
    pub segment_lengths: [usize; 4],
    pub size_conditions: Vec<SizeCondition>,
    pub linkages: [LinkageVerdict; 2],
    pub all_hold: bool,
    pub summary: String,
}

/// Checks the size conditions and both crossing linkages for one word.
/// Passing is finite evidence about one word, not a proof about the
/// language.
pub fn check_crossing_hypotheses<F: FnMut(&str) -> Result<bool>>(
    oracle: &mut Oracle<F>,
    w: &str,
    seg: &SegmentDecomposition,
    mode: HypothesisMode,
    opts: LinkageOptions,
) -> Result<HypothesisReport> {
    let lengths = seg.lengths();
    let size_conditions = match mode {
        HypothesisMode::FourLarge { n } => (0..4)
            .map(|i| SizeCondition {
                description: format!("|P{}| = {} ≥ {n}", i + 1, lengths[i]),
                holds: lengths[i] >= n,
            })
            .collect(),
        HypothesisMode::InnerGrowing { n } => vec![
            SizeCondition {
                description: format!("|P2| = {} ≥ 1", lengths[1]),
                holds: lengths[1] >= 1,
            },
            SizeCondition {
                description: format!("|P3| = {} ≥ 1", lengths[2]),
                holds: lengths[2] >= 1,
            },
            SizeCondition {
                description: format!("max(|P2|,|P3|) = {} ≥ {n}", lengths[1].max(lengths[2])),
                holds: lengths[1].max(lengths[2]) >= n,
            },
        ],
    };
    let linkages = [
        check_linkage(oracle, w, seg, LinkedPair::P1P3, opts)?,
        check_linkage(oracle, w, seg, LinkedPair::P2P4, opts)?,
    ];
    let all_hold = size_conditions.iter().all(|c| c.holds) && linkages.iter().all(|l| l.holds && !l.vacuous);
    let n = match mode {
        HypothesisMode::FourLarge { n } | HypothesisMode::InnerGrowing { n } => n,
    };
    let scope = match opts.max_vxy {
        Some(p) => format!(", |vxy| ≤ {p}"),
        None => String::new(),
    };
    let summary = if all_hold {
        format!("hypotheses of the non-CFL theorem verified at n={n}{scope} (evidence for this word only)")
    } else {
        let failed: Vec<String> = size_conditions
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.description.clone())
            .chain(
                linkages
                    .iter()
                    .filter(|l| !l.holds || l.vacuous)
                    .map(|l| format!("linkage {} {}", l.pair, if l.vacuous { "vacuous" } else { "fails" })),
            )
            .collect();
        format!("hypotheses not met at n={n}{scope}: {}", failed.join("; "))
    };
    Ok(HypothesisReport {
        word: w.to_string(),
        mode,
        segment_lengths: lengths,
        size_conditions,
        linkages,
        all_hold,
        summary,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseLabel {
    /// Cases 1–7: inside P1, straddling P1P2, inside P2, straddling P2P3,
    /// inside P3, straddling P3P4, inside P4.
    Case(u8),
    /// `vxy` reaches across a whole inner segment.
    MultiStraddle,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::Case(n) => write!(f, "case {n}"),
            CaseLabel::MultiStraddle => write!(f, "multi-straddle"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseTrace {
    pub label: CaseLabel,
    /// 0-based indices of the segments `vxy` touches.
    pub touched: Vec<usize>,
    /// The linkage that rules this factorization out, if any applies.
    pub linkage: Option<LinkedPair>,
}

/// Locates `vxy` relative to the four segments and names the linkage used
/// against it.
pub fn case_trace(seg: &SegmentDecomposition, f: &Factorization) -> Result<CaseTrace> {
    let r = f.vxy();
    if r.is_empty() || r.end > seg.len() {
        return Err(Error::PreconditionViolated(
            "vxy must be a non-empty range inside the word".into(),
        ));
    }
    let segments = seg.segments();
    let touched: Vec<usize> = (0..4).filter(|&i| touches(&r, &segments[i])).collect();
    let applies = |p: LinkedPair| {
        let (a, b) = p.indices();
        touched.contains(&a) != touched.contains(&b)
    };
    let (label, linkage) = match touched.as_slice() {
        [i] => {
            let case = 2 * *i as u8 + 1;
            (
                CaseLabel::Case(case),
                if *i == 0 || *i == 2 {
                    LinkedPair::P1P3
                } else {
                    LinkedPair::P2P4
                },
            )
        }
        [i, j] if j == &(i + 1) => {
            let case = 2 * *i as u8 + 2;
            (
                CaseLabel::Case(case),
                if *i == 1 { LinkedPair::P2P4 } else { LinkedPair::P1P3 },
            )
        }
        _ => {
            let linkage = [LinkedPair::P1P3, LinkedPair::P2P4].into_iter().find(|&p| applies(p));
            return Ok(CaseTrace {
                label: CaseLabel::MultiStraddle,
                touched,
                linkage,
            });
        }
    };
    Ok(CaseTrace {
        label,
        touched,
        linkage: Some(linkage),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{membership, JointSpec};

    fn abcd_seg(n: usize) -> SegmentDecomposition {
        SegmentDecomposition::from_cuts(n, 2 * n, 3 * n, 4 * n).unwrap()
    }

    #[test]
    fn cut_tuple_count() {
        for n in 0..=12usize {
            let expected = (n + 1) * (n + 2) * (n + 3) * (n + 4) / 24;
            assert_eq!(factorizations(n).count(), expected);
            let nonempty = factorizations(n).filter(|f| f.pumped_len() >= 1).count();
            assert_eq!(pumpable(n, usize::MAX).count(), nonempty);
        }
    }

    #[test]
    fn pumping() {
        let w: Vec<char> = "abcde".chars().collect();
        let f = Factorization::new(1, 2, 3, 4);
        assert_eq!(f.pump(&w, 2), "abbcdde");
        assert_eq!(f.pump(&w, 0), "ace");
        assert_eq!(f.pump(&w, 1), "abcde");
    }

    #[test]
    fn linkage_on_intersection_and_escape_on_one_language() {
        let spec = JointSpec::with_letters(4, &[(1, 3)], &[(2, 4)]).unwrap();
        let both = spec.intersection();
        let mut oracle = Oracle::new(|s: &str| Ok(membership(&both, s)));
        let v = check_linkage(
            &mut oracle,
            "aabbccdd",
            &abcd_seg(2),
            LinkedPair::P1P3,
            LinkageOptions::default(),
        )
        .unwrap();
        // vxy = b·cc·d touches P3 but not P1 and pumps to aab³c²d³.
        assert!(!v.holds);
        let c = v.counterexample.unwrap();
        assert_eq!((c.v.as_str(), c.x.as_str(), c.y.as_str()), ("b", "cc", "d"));
        assert_eq!(c.touched, 2);
        let short = LinkageOptions::shorter_than_segments(&abcd_seg(2));
        for pair in [LinkedPair::P1P3, LinkedPair::P2P4] {
            let v = check_linkage(&mut oracle, "aabbccdd", &abcd_seg(2), pair, short).unwrap();
            assert!(v.holds && !v.vacuous && v.max_vxy == Some(1));
        }

        let first = spec.first();
        let mut oracle = Oracle::new(|s: &str| Ok(membership(&first, s)));
        let v = check_linkage(
            &mut oracle,
            "aabbccdd",
            &abcd_seg(2),
            LinkedPair::P1P3,
            LinkageOptions::default(),
        )
        .unwrap();
        assert!(!v.holds);
        let c = v.counterexample.unwrap();
        assert_eq!((c.v.as_str(), c.x.as_str(), c.y.as_str()), ("", "a", "b"));
        assert_eq!(c.pumped, "aabbbccdd");
    }

    #[test]
    fn empty_segment_is_vacuous() {
        let spec = JointSpec::with_letters(2, &[(1, 2)], &[]).unwrap().first();
        let mut oracle = Oracle::new(|s: &str| Ok(membership(&spec, s)));
        let seg = SegmentDecomposition::from_cuts(2, 2, 4, 4).unwrap();
        let v = check_linkage(&mut oracle, "aabb", &seg, LinkedPair::P2P4, LinkageOptions::default()).unwrap();
        assert!(v.holds && v.vacuous);
        assert_eq!(v.pumped, 0);
    }

    #[test]
    fn preconditions() {
        let mut oracle = Oracle::new(|s: &str| Ok(s.len().is_multiple_of(2)));
        assert!(matches!(
            check_linkage(
                &mut oracle,
                "abc",
                &SegmentDecomposition::from_cuts(1, 2, 3, 3).unwrap(),
                LinkedPair::P1P3,
                LinkageOptions::default()
            ),
            Err(Error::NotInLanguage(_))
        ));
        assert!(matches!(
            check_linkage(
                &mut oracle,
                "ab",
                &SegmentDecomposition::from_cuts(1, 2, 3, 3).unwrap(),
                LinkedPair::P1P3,
                LinkageOptions::default()
            ),
            Err(Error::PreconditionViolated(_))
        ));
        let long = "a".repeat(42);
        let seg = SegmentDecomposition::from_cuts(1, 2, 3, 42).unwrap();
        assert!(matches!(
            check_linkage(&mut oracle, &long, &seg, LinkedPair::P1P3, LinkageOptions::default()),
            Err(Error::WordTooLong { .. })
        ));
        let mut failing = Oracle::new(|_: &str| Err(Error::Inconclusive("no".into())));
        assert!(matches!(
            check_linkage(
                &mut failing,
                "ab",
                &SegmentDecomposition::from_cuts(1, 1, 2, 2).unwrap(),
                LinkedPair::P1P3,
                LinkageOptions::default()
            ),
            Err(Error::OracleFailure(_))
        ));
    }

    #[test]
    fn inner_linkage_fails_for_anbcnd() {
        // a^n b c^n d: pumping a^k … c^k across b keeps the word inside.
        let lang = |s: &str| {
            let n = s.chars().take_while(|&c| c == 'a').count();
            Ok(s == format!("{}b{}d", "a".repeat(n), "c".repeat(n)))
        };
        let mut oracle = Oracle::new(lang);
        let seg = SegmentDecomposition::from_cuts(3, 4, 7, 8).unwrap();
        let v = check_linkage(
            &mut oracle,
            "aaabcccd",
            &seg,
            LinkedPair::P2P4,
            LinkageOptions::default(),
        )
        .unwrap();
        assert!(!v.holds);
        let c = v.counterexample.unwrap();
        assert_eq!(c.touched, 1);
    }

    #[test]
    fn hypothesis_reports() {
        let spec = JointSpec::with_letters(4, &[(1, 3)], &[(2, 4)]).unwrap().intersection();
        let mut oracle = Oracle::new(|s: &str| Ok(membership(&spec, s)));
        let w = "aaabbbcccddd";
        let short = LinkageOptions::shorter_than_segments(&abcd_seg(3));
        let r =
            check_crossing_hypotheses(&mut oracle, w, &abcd_seg(3), HypothesisMode::FourLarge { n: 3 }, short).unwrap();
        assert!(r.all_hold, "{}", r.summary);
        assert!(r
            .summary
            .starts_with("hypotheses of the non-CFL theorem verified at n=3, |vxy| ≤ 2"));
        let r =
            check_crossing_hypotheses(&mut oracle, w, &abcd_seg(3), HypothesisMode::FourLarge { n: 4 }, short).unwrap();
        assert!(!r.all_hold);
        let r = check_crossing_hypotheses(
            &mut oracle,
            w,
            &abcd_seg(3),
            HypothesisMode::FourLarge { n: 3 },
            LinkageOptions::default(),
        )
        .unwrap();
        assert!(
            !r.all_hold && r.summary.contains("linkage (P1,P3) fails"),
            "{}",
            r.summary
        );
    }

    #[test]
    fn cases() {
        let seg = abcd_seg(4);
        let trace = |a, d| case_trace(&seg, &Factorization::new(a, a, d, d)).unwrap();
        let expect = [
            ((0, 2), CaseLabel::Case(1), Some(LinkedPair::P1P3)),
            ((3, 5), CaseLabel::Case(2), Some(LinkedPair::P1P3)),
            ((4, 6), CaseLabel::Case(3), Some(LinkedPair::P2P4)),
            ((7, 9), CaseLabel::Case(4), Some(LinkedPair::P2P4)),
            ((9, 12), CaseLabel::Case(5), Some(LinkedPair::P1P3)),
            ((11, 13), CaseLabel::Case(6), Some(LinkedPair::P1P3)),
            ((12, 16), CaseLabel::Case(7), Some(LinkedPair::P2P4)),
            ((3, 9), CaseLabel::MultiStraddle, Some(LinkedPair::P2P4)),
            ((5, 13), CaseLabel::MultiStraddle, Some(LinkedPair::P1P3)),
            ((0, 16), CaseLabel::MultiStraddle, None),
        ];
        for ((a, d), label, linkage) in expect {
            let t = trace(a, d);
            assert_eq!((t.label, t.linkage), (label, linkage), "vxy = [{a},{d})");
        }
        assert!(case_trace(&seg, &Factorization::new(2, 2, 2, 2)).is_err());
    }

    #[test]
    fn every_short_factorization_gets_one_case() {
        let seg = abcd_seg(3);
        for f in pumpable(12, usize::MAX).filter(|f| f.vxy().len() < 3) {
            let t = case_trace(&seg, &f).unwrap();
            assert!(matches!(t.label, CaseLabel::Case(1..=7)));
        }
    }
}
