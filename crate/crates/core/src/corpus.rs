//! Built-in examples, each with the properties it is expected to show.
//!
//! `replay` re-derives every expectation through the analysis modules, so
//! the corpus doubles as a regression suite.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::arcs::{classify_family, sample_family, Regime};
use crate::blocks::{
    build_joint_pda, characterize, component_pdas, membership, segments_and_linkages, BlockArc, JointSpec,
};
use crate::error::{Error, Result};
use crate::grammar::{cyk_membership, gnf_to_pda, to_cnf, to_gnf, Cfg};
use crate::machine::SearchLimits;
use crate::pda::{self, AcceptanceMode, Op, Pda, PdaBuilder};
use crate::product::{buffered_product, displacement_product, max_buffer_occupancy, max_displacement, ProductKind};
use crate::pumping::{check_crossing_hypotheses, check_linkage, HypothesisMode, LinkageOptions, LinkedPair, Oracle};

/// Machines reading odd and even positions of the interleaved palindrome
/// language: even-length words over `{0,1}` whose odd-position and
/// even-position subsequences are both palindromes.
pub fn palindrome_pair() -> (Pda, Pda) {
    // Odd positions: push in the first half, guess the middle (with or
    // without a centre symbol), pop in the second half. Even positions are
    // read without touching the stack.
    let mut b = PdaBuilder::new("palindrome-odd");
    b.start("s0").accept("s0").accept("p0");
    for (x, z) in [('0', "Z0"), ('1', "Z1")] {
        b.read("s0", x, Op::Push(z), "s1")
            .read("s0", x, Op::Skip, "m1")
            .read("p0", x, Op::Pop(z), "p1");
    }
    b.read_any("s1", "01", Op::Skip, "s0")
        .read_any("s1", "01", Op::Skip, "p0")
        .read_any("m1", "01", Op::Skip, "p0")
        .read_any("p1", "01", Op::Skip, "p0")
        .mode(AcceptanceMode::FinalStateAndBottomOnly);
    let m1 = b.build().expect("palindrome-odd is well formed");

    let mut b = PdaBuilder::new("palindrome-even");
    b.start("t0").accept("t0").accept("r0");
    b.read_any("t0", "01", Op::Skip, "t1")
        .read_any("t1", "01", Op::Skip, "r0")
        .read_any("r0", "01", Op::Skip, "r1");
    for (y, z) in [('0', "Y0"), ('1', "Y1")] {
        b.read("t1", y, Op::Push(z), "t0")
            .read("t1", y, Op::Push(z), "r0")
            .read("r1", y, Op::Pop(z), "r0");
    }
    b.mode(AcceptanceMode::FinalStateAndBottomOnly);
    let m2 = b.build().expect("palindrome-even is well formed");
    (m1, m2)
}

/// `L1 = a b a {d,e}* f gᵏ hᵏ` and `L2 = a b a dⁿ eⁿ f {g,h}*`. On
/// `a b a dⁿ eⁿ f` the first machine matches positions 1 and 3 and the
/// second matches 2 with `2n+4`, so the only crossing has inner measure 1
/// and gap `2n+1`.
pub fn refutation_pair() -> (Pda, Pda) {
    let mut b = PdaBuilder::new("refutation-1");
    b.start("r0").accept("r4").accept("r5");
    // push at position 1, pop at position 3
    b.read("r0", 'a', Op::Push("A"), "r1")
        .read("r1", 'b', Op::Skip, "r2")
        .read("r2", 'a', Op::Pop("A"), "r3")
        .read_any("r3", "de", Op::Skip, "r3")
        .read("r3", 'f', Op::Skip, "r4")
        .read("r4", 'g', Op::Push("G"), "r4")
        .read("r4", 'h', Op::Pop("G"), "r5")
        .read("r5", 'h', Op::Pop("G"), "r5")
        .mode(AcceptanceMode::FinalStateAndBottomOnly);
    let m1 = b.build().expect("refutation-1 is well formed");

    let mut b = PdaBuilder::new("refutation-2");
    b.start("s0").accept("s5");
    // push at position 2, pop at the f
    b.read("s0", 'a', Op::Skip, "s1")
        .read("s1", 'b', Op::Push("B"), "s2")
        .read("s2", 'a', Op::Skip, "s3")
        .read("s3", 'd', Op::Push("D"), "s3")
        .read("s3", 'e', Op::Pop("D"), "s4")
        .read("s4", 'e', Op::Pop("D"), "s4")
        .read("s3", 'f', Op::Pop("B"), "s5")
        .read("s4", 'f', Op::Pop("B"), "s5")
        .read_any("s5", "gh", Op::Skip, "s5")
        .mode(AcceptanceMode::FinalStateAndBottomOnly);
    let m2 = b.build().expect("refutation-2 is well formed");
    (m1, m2)
}

/// Membership in the interleaved palindrome language.
pub fn interleaved_palindrome(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    let pal = |v: Vec<char>| v.iter().eq(v.iter().rev());
    c.len().is_multiple_of(2)
        && c.iter().all(|&x| x == '0' || x == '1')
        && pal(c.iter().step_by(2).copied().collect())
        && pal(c.iter().skip(1).step_by(2).copied().collect())
}

/// Membership in `a b a dⁿ eⁿ f gᵏ hᵏ`.
pub fn refutation_intersection(w: &str) -> bool {
    let Some(rest) = w.strip_prefix("aba") else {
        return false;
    };
    let Some((de, gh)) = rest.split_once('f') else {
        return false;
    };
    let balanced = |s: &str, x: char, y: char| {
        let n = s.chars().take_while(|&c| c == x).count();
        s.chars().count() == 2 * n && s.chars().skip(n).all(|c| c == y)
    };
    balanced(de, 'd', 'e') && balanced(gh, 'g', 'h')
}

/// `a b a dⁿ eⁿ f gᵏ hᵏ` up to length `max_len`, generated directly.
pub fn refutation_language(max_len: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for n in 0.. {
        if 4 + 2 * n > max_len {
            break;
        }
        for k in 0..=(max_len - 4 - 2 * n) / 2 {
            out.insert(format!(
                "aba{}{}f{}{}",
                "d".repeat(n),
                "e".repeat(n),
                "g".repeat(k),
                "h".repeat(k)
            ));
        }
    }
    out
}

/// How the sample word of size `n` is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `(01)ⁿ`
    InterleavedPalindrome,
    /// `a b a dⁿ eⁿ f`
    GapRefutation,
    /// `n` copies of the first symbol of every block.
    UniformBlocks,
}

#[derive(Clone, Debug)]
pub enum Artifacts {
    Pair { m1: Pda, m2: Pda, family: Family },
    Blocks { spec: JointSpec, m1: Pda, m2: Pda },
    Grammar { cfg: Cfg },
}

/// `slope·n + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub slope: usize,
    pub offset: isize,
}

impl Affine {
    pub fn at(&self, n: usize) -> usize {
        (self.slope * n).saturating_add_signed(self.offset)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.slope, self.offset) {
            (0, c) => write!(f, "{c}"),
            (1, 0) => write!(f, "n"),
            (s, 0) => write!(f, "{s}n"),
            (1, c) => write!(f, "n{c:+}"),
            (s, c) => write!(f, "{s}n{c:+}"),
        }
    }
}

/// Which language a linkage check pumps against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkageOracle {
    Intersection,
    FirstOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "property")]
pub enum Expectation {
    /// Accepted (or rejected) by both machines, or generated by the grammar.
    Members { words: Vec<String>, member: bool },
    /// Classification over the bundle's sample sizes.
    Regime { regime: Regime },
    /// Largest crossing gap at each sample size.
    GapProfile { profile: Affine },
    /// Largest inner measure at each sample size.
    InnerProfile { profile: Affine },
    /// Display text of the block-counting verdict.
    Verdict { text: String },
    /// The joint PDA's language equals block membership.
    JointPdaMatchesOracle { max_len: usize },
    /// Linkage outcome on the witness word of the first crossing. With
    /// `short_pumps` only factorizations shorter than every segment count.
    Linkage {
        n: usize,
        oracle: LinkageOracle,
        pair: LinkedPair,
        short_pumps: bool,
        holds: bool,
    },
    Hypotheses {
        mode: HypothesisMode,
        short_pumps: bool,
        holds: bool,
    },
    /// The product's language equals the intersection, and its runs stay
    /// inside the construction's resource bound.
    ProductMatchesOracle { kind: ProductKind, max_len: usize },
    /// CYK on the CNF agrees with the PDA built through GNF.
    PipelineAgrees { max_len: usize },
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Members { words, member } => {
                write!(
                    f,
                    "{} {}",
                    if *member { "members" } else { "non-members" },
                    words.join(",")
                )
            }
            Expectation::Regime { regime } => write!(f, "regime {regime}"),
            Expectation::GapProfile { profile } => write!(f, "gap = {profile}"),
            Expectation::InnerProfile { profile } => write!(f, "inner = {profile}"),
            Expectation::Verdict { text } => write!(f, "verdict {text}"),
            Expectation::JointPdaMatchesOracle { max_len } => {
                write!(f, "joint PDA matches membership to length {max_len}")
            }
            Expectation::Linkage {
                n,
                oracle,
                pair,
                short_pumps,
                holds,
            } => write!(
                f,
                "linkage {pair} at n={n} against {}{} {}",
                match oracle {
                    LinkageOracle::Intersection => "intersection",
                    LinkageOracle::FirstOnly => "first language",
                },
                if *short_pumps { ", short pumps only" } else { "" },
                if *holds { "holds" } else { "fails" }
            ),
            Expectation::Hypotheses {
                mode,
                short_pumps,
                holds,
            } => write!(
                f,
                "hypotheses {}{} {}",
                match mode {
                    HypothesisMode::FourLarge { n } => format!("four-large n={n}"),
                    HypothesisMode::InnerGrowing { n } => format!("inner-growing n={n}"),
                },
                if *short_pumps { ", short pumps only" } else { "" },
                if *holds { "hold" } else { "fail" }
            ),
            Expectation::ProductMatchesOracle { kind, max_len } => {
                write!(f, "{kind} product matches intersection to length {max_len}")
            }
            Expectation::PipelineAgrees { max_len } => {
                write!(f, "CNF/GNF/PDA pipeline agrees to length {max_len}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExampleBundle {
    pub name: &'static str,
    pub description: &'static str,
    pub artifacts: Artifacts,
    /// Family parameters used for profiles and classification.
    pub sizes: Vec<usize>,
    pub expected: Vec<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayOutcome {
    pub expectation: String,
    pub passed: bool,
    pub detail: String,
}

const NAMES: [&str; 11] = [
    "interleaved-palindrome",
    "gap-refutation",
    "abcd",
    "abc-shared-endpoint",
    "nested",
    "disjoint-blocks",
    "anbn",
    "palindrome",
    "balanced-parens",
    "left-recursive",
    "arithmetic",
];

pub fn list() -> Vec<&'static str> {
    NAMES.to_vec()
}

pub fn get(name: &str) -> Result<ExampleBundle> {
    let words = |ws: &[&str], member| Expectation::Members {
        words: ws.iter().map(|w| w.to_string()).collect(),
        member,
    };
    let affine = |slope, offset| Affine { slope, offset };
    let bundle = match name {
        "interleaved-palindrome" => {
            let (m1, m2) = palindrome_pair();
            ExampleBundle {
                name: NAMES[0],
                description: "even-length words over {0,1} whose odd and even subsequences are palindromes",
                artifacts: Artifacts::Pair {
                    m1,
                    m2,
                    family: Family::InterleavedPalindrome,
                },
                sizes: (2..=6).collect(),
                expected: vec![
                    words(&["", "00", "01", "0101", "011001", "01101001"], true),
                    words(&["0", "0110", "0011", "0001"], false),
                    Expectation::GapProfile { profile: affine(0, 1) },
                    Expectation::InnerProfile { profile: affine(2, -3) },
                    Expectation::Regime {
                        regime: Regime::BoundedGap,
                    },
                    Expectation::ProductMatchesOracle {
                        kind: ProductKind::Displacement { k: 1 },
                        max_len: 8,
                    },
                ],
            }
        }
        "gap-refutation" => {
            let (m1, m2) = refutation_pair();
            ExampleBundle {
                name: NAMES[1],
                description: "a b a {d,e}* f gᵏhᵏ against a b a dⁿeⁿ f {g,h}*: inner measure 1, gap 2n+1",
                artifacts: Artifacts::Pair {
                    m1,
                    m2,
                    family: Family::GapRefutation,
                },
                sizes: (1..=5).collect(),
                expected: vec![
                    words(&["abaf", "abafgh", "abadef", "abaddeefgghh"], true),
                    words(&["aba", "abafg", "abadf", "abaedf"], false),
                    Expectation::GapProfile { profile: affine(2, 1) },
                    Expectation::InnerProfile { profile: affine(0, 1) },
                    Expectation::Regime {
                        regime: Regime::BoundedInnerUnboundedGap,
                    },
                    Expectation::Hypotheses {
                        mode: HypothesisMode::InnerGrowing { n: 2 },
                        short_pumps: false,
                        holds: false,
                    },
                    Expectation::ProductMatchesOracle {
                        kind: ProductKind::Buffered { d: 1 },
                        max_len: 10,
                    },
                ],
            }
        }
        "abcd" => blocks_bundle(
            NAMES[2],
            "aⁿbⁿcⁿdⁿ from constraint sets {(1,3)} and {(2,4)}",
            &[(1, 3)],
            &[(2, 4)],
            vec![
                Expectation::Verdict {
                    text: "NotCFL (crossing arcs (1,3)×(2,4))".into(),
                },
                Expectation::Regime {
                    regime: Regime::GrowingInner,
                },
                Expectation::GapProfile { profile: affine(2, -1) },
                Expectation::InnerProfile { profile: affine(2, -1) },
                // Every factorization, however long: vxy = b·cⁿ·d touches P3
                // alone and pumps to aⁿbⁿ⁺¹cⁿdⁿ⁺¹, and symmetrically for
                // (P2,P4).
                Expectation::Linkage {
                    n: 4,
                    oracle: LinkageOracle::Intersection,
                    pair: LinkedPair::P1P3,
                    short_pumps: false,
                    holds: false,
                },
                Expectation::Linkage {
                    n: 4,
                    oracle: LinkageOracle::Intersection,
                    pair: LinkedPair::P2P4,
                    short_pumps: false,
                    holds: false,
                },
                Expectation::Linkage {
                    n: 4,
                    oracle: LinkageOracle::Intersection,
                    pair: LinkedPair::P1P3,
                    short_pumps: true,
                    holds: true,
                },
                Expectation::Linkage {
                    n: 4,
                    oracle: LinkageOracle::Intersection,
                    pair: LinkedPair::P2P4,
                    short_pumps: true,
                    holds: true,
                },
                Expectation::Linkage {
                    n: 4,
                    oracle: LinkageOracle::FirstOnly,
                    pair: LinkedPair::P1P3,
                    short_pumps: false,
                    holds: false,
                },
                Expectation::Hypotheses {
                    mode: HypothesisMode::FourLarge { n: 3 },
                    short_pumps: true,
                    holds: true,
                },
            ],
            (1..=5).collect(),
        )?,
        "abc-shared-endpoint" => blocks_bundle(
            NAMES[3],
            "aⁿbⁿcⁿ from constraint sets {(1,2)} and {(2,3)}",
            &[(1, 2)],
            &[(2, 3)],
            vec![
                Expectation::Verdict {
                    text: "NotCFL (shared endpoint (1,2)·(2,3))".into(),
                },
                Expectation::Regime {
                    regime: Regime::GrowingInner,
                },
            ],
            (2..=6).collect(),
        )?,
        "nested" => blocks_bundle(
            NAMES[4],
            "aᵐbⁿcⁿdᵐ from constraint sets {(1,4)} and {(2,3)}",
            &[(1, 4)],
            &[(2, 3)],
            vec![
                Expectation::Verdict {
                    text: "CFL (jointly well-nested)".into(),
                },
                Expectation::Regime {
                    regime: Regime::NoCrossings,
                },
                Expectation::JointPdaMatchesOracle { max_len: 10 },
            ],
            (1..=5).collect(),
        )?,
        "disjoint-blocks" => blocks_bundle(
            NAMES[5],
            "aᵐbᵐcⁿdⁿ from constraint sets {(1,2)} and {(3,4)}",
            &[(1, 2)],
            &[(3, 4)],
            vec![
                Expectation::Verdict {
                    text: "CFL (jointly well-nested)".into(),
                },
                Expectation::Regime {
                    regime: Regime::NoCrossings,
                },
                Expectation::JointPdaMatchesOracle { max_len: 10 },
            ],
            (1..=5).collect(),
        )?,
        "anbn" => grammar_bundle(NAMES[6], "S -> a S b | ε", &["", "ab", "aabb"], &["a", "ba", "aab"])?,
        "palindrome" => grammar_bundle(
            NAMES[7],
            "S -> 0 S 0 | 1 S 1 | 0 | 1 | ε",
            &["", "0", "0110", "10101"],
            &["01", "0010"],
        )?,
        "balanced-parens" => grammar_bundle(
            NAMES[8],
            "S -> ( S ) S | ε",
            &["", "()", "(())()", "()()()"],
            &["(", ")(", "(()"],
        )?,
        "left-recursive" => grammar_bundle(NAMES[9], "A -> A a | b", &["b", "ba", "baaa"], &["", "a", "ab"])?,
        "arithmetic" => grammar_bundle(
            NAMES[10],
            "E -> E + T | T\nT -> T * F | F\nF -> ( E ) | x",
            &["x", "x+x", "x*(x+x)", "(x)"],
            &["", "x+", "()", "xx"],
        )?,
        _ => return Err(Error::UnknownExample(name.to_string())),
    };
    Ok(bundle)
}

fn blocks_bundle(
    name: &'static str,
    description: &'static str,
    c1: &[BlockArc],
    c2: &[BlockArc],
    expected: Vec<Expectation>,
    sizes: Vec<usize>,
) -> Result<ExampleBundle> {
    let spec = JointSpec::with_letters(max_block(c1, c2), c1, c2)?;
    let (m1, m2) = component_pdas(&spec, name)?;
    Ok(ExampleBundle {
        name,
        description,
        artifacts: Artifacts::Blocks { spec, m1, m2 },
        sizes,
        expected,
    })
}

fn max_block(c1: &[BlockArc], c2: &[BlockArc]) -> usize {
    c1.iter().chain(c2).map(|&(_, j)| j).max().unwrap_or(1)
}

fn grammar_bundle(name: &'static str, text: &str, members: &[&str], others: &[&str]) -> Result<ExampleBundle> {
    let cfg = Cfg::parse(text)?;
    let words = |ws: &[&str], member| Expectation::Members {
        words: ws.iter().map(|w| w.to_string()).collect(),
        member,
    };
    Ok(ExampleBundle {
        name,
        description: "context-free grammar",
        artifacts: Artifacts::Grammar { cfg },
        sizes: Vec::new(),
        expected: vec![
            words(members, true),
            words(others, false),
            Expectation::PipelineAgrees { max_len: 6 },
        ],
    })
}

impl ExampleBundle {
    /// The two component machines of a pair or block bundle.
    pub fn machines(&self) -> Option<(&Pda, &Pda)> {
        match &self.artifacts {
            Artifacts::Pair { m1, m2, .. } | Artifacts::Blocks { m1, m2, .. } => Some((m1, m2)),
            Artifacts::Grammar { .. } => None,
        }
    }

    pub fn spec(&self) -> Option<&JointSpec> {
        match &self.artifacts {
            Artifacts::Blocks { spec, .. } => Some(spec),
            _ => None,
        }
    }

    pub fn grammar(&self) -> Option<&Cfg> {
        match &self.artifacts {
            Artifacts::Grammar { cfg } => Some(cfg),
            _ => None,
        }
    }

    /// Sample word of size `n`.
    pub fn family_word(&self, n: usize) -> Option<String> {
        match &self.artifacts {
            Artifacts::Pair { family, .. } => Some(match family {
                Family::InterleavedPalindrome => "01".repeat(n),
                Family::GapRefutation => format!("aba{}{}f", "d".repeat(n), "e".repeat(n)),
                Family::UniformBlocks => unreachable!("pair bundles use word families"),
            }),
            Artifacts::Blocks { spec, .. } => {
                Some(spec.alphabets().iter().map(|a| a[0].to_string().repeat(n)).collect())
            }
            Artifacts::Grammar { .. } => None,
        }
    }

    pub fn family_words(&self) -> Vec<(usize, String)> {
        self.sizes
            .iter()
            .filter_map(|&n| self.family_word(n).map(|w| (n, w)))
            .collect()
    }

    /// Membership in the bundle's language, decided without the bundle's
    /// machines.
    pub fn member(&self, w: &str) -> bool {
        match &self.artifacts {
            Artifacts::Pair { family, .. } => match family {
                Family::InterleavedPalindrome => interleaved_palindrome(w),
                _ => refutation_intersection(w),
            },
            Artifacts::Blocks { spec, .. } => membership(&spec.intersection(), w),
            Artifacts::Grammar { cfg } => to_cnf(cfg).map(|g| cyk_membership(&g, w)).unwrap_or(false),
        }
    }

    /// The bundle's language up to `max_len`, from the same independent
    /// definitions as [`ExampleBundle::member`].
    pub fn oracle_language(&self, max_len: usize) -> BTreeSet<String> {
        match &self.artifacts {
            Artifacts::Pair {
                family: Family::GapRefutation,
                ..
            } => refutation_language(max_len),
            Artifacts::Blocks { spec, .. } => block_language(spec, max_len),
            _ => {
                let alphabet: Vec<char> = match &self.artifacts {
                    Artifacts::Grammar { cfg } => cfg.terminals().to_vec(),
                    _ => vec!['0', '1'],
                };
                all_words(&alphabet, max_len)
                    .into_iter()
                    .filter(|w| self.member(w))
                    .collect()
            }
        }
    }

    pub fn replay(&self, limits: SearchLimits) -> Result<Vec<ReplayOutcome>> {
        let mut out = Vec::new();
        let mut samples = None;
        for e in &self.expected {
            let (passed, detail) = self.check(e, &mut samples, limits)?;
            out.push(ReplayOutcome {
                expectation: e.to_string(),
                passed,
                detail,
            });
        }
        Ok(out)
    }

    fn check(
        &self,
        e: &Expectation,
        samples: &mut Option<Vec<crate::arcs::FamilySample>>,
        limits: SearchLimits,
    ) -> Result<(bool, String)> {
        let mut family = |bundle: &ExampleBundle| -> Result<Vec<crate::arcs::FamilySample>> {
            if samples.is_none() {
                let (m1, m2) = bundle.need_machines()?;
                *samples = Some(sample_family(m1, m2, &bundle.family_words(), limits)?);
            }
            Ok(samples.clone().unwrap_or_default())
        };
        Ok(match e {
            Expectation::Members { words, member } => {
                let mut wrong = Vec::new();
                for w in words {
                    let got = match &self.artifacts {
                        Artifacts::Grammar { cfg } => {
                            let pda = gnf_to_pda(&to_gnf(&to_cnf(cfg)?));
                            pda::accepts(&pda, w, limits)?.0
                        }
                        _ => {
                            let (m1, m2) = self.need_machines()?;
                            pda::accepts(m1, w, limits)?.0 && pda::accepts(m2, w, limits)?.0
                        }
                    };
                    if got != *member {
                        wrong.push(format!("{w:?}"));
                    }
                }
                (wrong.is_empty(), format!("mismatches: [{}]", wrong.join(", ")))
            }
            Expectation::Regime { regime } => {
                let report = classify_family(&family(self)?)?;
                (report.regime == *regime, format!("classified {}", report.regime))
            }
            Expectation::GapProfile { profile } | Expectation::InnerProfile { profile } => {
                let gap = matches!(e, Expectation::GapProfile { .. });
                let mut bad = Vec::new();
                for s in family(self)? {
                    let got = s.measures.iter().map(|m| if gap { m.gap } else { m.inner }).max();
                    if got != Some(profile.at(s.n)) {
                        bad.push(format!("n={} got {got:?}", s.n));
                    }
                }
                (bad.is_empty(), bad.join("; "))
            }
            Expectation::Verdict { text } => {
                let v = characterize(self.need_spec()?)?;
                (v.to_string() == *text, v.to_string())
            }
            Expectation::JointPdaMatchesOracle { max_len } => {
                let spec = self.need_spec()?;
                let got = pda::enumerate_language(&build_joint_pda(spec)?, *max_len, limits)?;
                let want = block_language(spec, *max_len);
                let diff = got.symmetric_difference(&want).count();
                (diff == 0, format!("{diff} mismatches over {} words", want.len()))
            }
            Expectation::Linkage {
                n,
                oracle,
                pair,
                short_pumps,
                holds,
            } => {
                let spec = self.need_spec()?;
                let (left, right) = first_crossing(spec)?;
                let pkg = segments_and_linkages(spec, left, right, *n)?;
                let lang = match oracle {
                    LinkageOracle::Intersection => spec.intersection(),
                    LinkageOracle::FirstOnly => spec.first(),
                };
                let mut o = Oracle::new(|s: &str| Ok(membership(&lang, s)));
                let opts = scope(&pkg.segments, *short_pumps);
                let v = check_linkage(&mut o, &pkg.word, &pkg.segments, *pair, opts)?;
                let detail = match &v.counterexample {
                    Some(c) => format!(
                        "counterexample u={:?} v={:?} x={:?} y={:?} z={:?}",
                        c.u, c.v, c.x, c.y, c.z
                    ),
                    None => format!("{} pumps rejected", v.pumped),
                };
                (v.holds == *holds, detail)
            }
            Expectation::Hypotheses {
                mode,
                short_pumps,
                holds,
            } => {
                let n = match mode {
                    HypothesisMode::FourLarge { n } | HypothesisMode::InnerGrowing { n } => *n,
                };
                let (word, segments, mut o): (String, _, Oracle<Member>) = match &self.artifacts {
                    Artifacts::Blocks { spec, .. } => {
                        let (left, right) = first_crossing(spec)?;
                        let pkg = segments_and_linkages(spec, left, right, n)?;
                        let lang = spec.intersection();
                        (
                            pkg.word,
                            pkg.segments,
                            Oracle::new(Box::new(move |s: &str| Ok(membership(&lang, s)))),
                        )
                    }
                    Artifacts::Pair { m1, m2, .. } => {
                        let w = self.family_word(n).unwrap_or_default();
                        let analysis = crate::arcs::analyze_pair(m1, m2, &w, 1, limits)?;
                        let c = analysis[0].crossings.first().ok_or(Error::NoCrossing)?;
                        let member: fn(&str) -> bool = match self.name {
                            "interleaved-palindrome" => interleaved_palindrome,
                            _ => refutation_intersection,
                        };
                        (
                            w,
                            c.segments.clone(),
                            Oracle::new(Box::new(move |s: &str| Ok(member(s)))),
                        )
                    }
                    Artifacts::Grammar { .. } => {
                        return Err(Error::PreconditionViolated("grammar bundles have no crossings".into()))
                    }
                };
                let opts = scope(&segments, *short_pumps);
                let report = check_crossing_hypotheses(&mut o, &word, &segments, *mode, opts)?;
                (report.all_hold == *holds, report.summary)
            }
            Expectation::ProductMatchesOracle { kind, max_len } => {
                let (m1, m2) = self.need_machines()?;
                let product = match kind {
                    ProductKind::Displacement { k } => displacement_product(m1, m2, *k)?,
                    ProductKind::Buffered { d } => buffered_product(m1, m2, *d)?,
                };
                let got = product.language(*max_len, limits)?;
                let want = self.oracle_language(*max_len);
                let diff = got.symmetric_difference(&want).count();
                let mut worst = 0;
                for w in &got {
                    for run in product.accepting_runs(w, 20, limits)? {
                        worst = worst.max(match kind {
                            ProductKind::Displacement { .. } => max_displacement(&run),
                            ProductKind::Buffered { .. } => max_buffer_occupancy(&run),
                        });
                    }
                }
                let bound = match kind {
                    ProductKind::Displacement { k } => 2 * k,
                    ProductKind::Buffered { d } => 8 * d,
                };
                (
                    diff == 0 && worst <= bound,
                    format!(
                        "{diff} mismatches over {} words; worst resource use {worst} (bound {bound})",
                        want.len()
                    ),
                )
            }
            Expectation::PipelineAgrees { max_len } => {
                let cfg = self
                    .grammar()
                    .ok_or_else(|| Error::PreconditionViolated("not a grammar bundle".into()))?;
                let cnf = to_cnf(cfg)?;
                let pda = gnf_to_pda(&to_gnf(&cnf));
                let got = pda::enumerate_language(&pda, *max_len, limits)?;
                let mut diff = 0;
                for w in all_words(cfg.terminals(), *max_len) {
                    if cyk_membership(&cnf, &w) != got.contains(&w) {
                        diff += 1;
                    }
                }
                (diff == 0, format!("{diff} mismatches"))
            }
        })
    }

    fn need_machines(&self) -> Result<(&Pda, &Pda)> {
        self.machines()
            .ok_or_else(|| Error::PreconditionViolated(format!("{} has no machine pair", self.name)))
    }

    fn need_spec(&self) -> Result<&JointSpec> {
        self.spec()
            .ok_or_else(|| Error::PreconditionViolated(format!("{} has no block spec", self.name)))
    }
}

type Member = Box<dyn FnMut(&str) -> Result<bool>>;

fn scope(segments: &crate::arcs::SegmentDecomposition, short_pumps: bool) -> LinkageOptions {
    if short_pumps {
        LinkageOptions::shorter_than_segments(segments)
    } else {
        LinkageOptions::default()
    }
}

/// The first cross-set crossing of a spec, in `(c1 arc, c2 arc)` order.
pub fn first_crossing(spec: &JointSpec) -> Result<(BlockArc, BlockArc)> {
    for &a in spec.c1() {
        for &b in spec.c2() {
            let (x, y) = (a.min(b), a.max(b));
            if x.0 < y.0 && y.0 < x.1 && x.1 < y.1 {
                return Ok((a, b));
            }
        }
    }
    Err(Error::NoCrossing)
}

/// Every word over `alphabet` of length at most `max_len`.
pub fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for &c in alphabet {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Members of the intersection block language up to `max_len`. Only words
/// whose letters appear in block order can factor into blocks, so the
/// search extends a word only by letters of its current block or later.
pub fn block_language(spec: &JointSpec, max_len: usize) -> BTreeSet<String> {
    let lang = spec.intersection();
    let alphabets = spec.alphabets();
    let mut out = BTreeSet::new();
    let mut stack = vec![(String::new(), 0usize, 0usize)];
    while let Some((w, block, len)) = stack.pop() {
        if membership(&lang, &w) {
            out.insert(w.clone());
        }
        if len == max_len {
            continue;
        }
        for (m, alpha) in alphabets.iter().enumerate().skip(block) {
            for &c in alpha {
                let mut v = w.clone();
                v.push(c);
                stack.push((v, m, len + 1));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_listed_and_resolve() {
        let names = list();
        for n in ["abcd", "gap-refutation", "abc-shared-endpoint"] {
            assert!(names.contains(&n));
        }
        for n in names {
            assert_eq!(get(n).unwrap().name, n);
        }
        assert!(matches!(get("nope"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn refutation_oracles_agree() {
        let lang = refutation_language(12);
        assert!(lang.contains("abaf") && lang.contains("abaddeefgh"));
        for w in all_words(&['a', 'b', 'd', 'e', 'f'], 7) {
            assert_eq!(refutation_intersection(&w), lang.contains(&w), "{w}");
        }
        for w in &lang {
            assert!(refutation_intersection(w));
        }
    }

    #[test]
    fn refutation_machines() {
        let (m1, m2) = refutation_pair();
        let yes = |m: &Pda, w: &str| pda::accepts(m, w, SearchLimits::default()).unwrap().0;
        assert!(yes(&m1, "abafgh"));
        assert!(!yes(&m1, "abafg"));
        assert!(yes(&m1, "abaedfgghh"));
        assert!(yes(&m2, "abaddeefhg"));
        assert!(!yes(&m2, "abadeef"));
        assert!(pda::validate_normal_form(&m1).is_empty());
        assert!(pda::validate_normal_form(&m2).is_empty());
    }

    #[test]
    fn palindrome_machines_match_oracle() {
        let (m1, m2) = palindrome_pair();
        let l1 = pda::enumerate_language(&m1, 8, SearchLimits::default()).unwrap();
        let l2 = pda::enumerate_language(&m2, 8, SearchLimits::default()).unwrap();
        let both: BTreeSet<String> = l1.intersection(&l2).cloned().collect();
        let want: BTreeSet<String> = all_words(&['0', '1'], 8)
            .into_iter()
            .filter(|w| interleaved_palindrome(w))
            .collect();
        assert_eq!(both, want);
        assert!(l1.contains("0001") && !l2.contains("0001"));
    }

    #[test]
    fn block_language_matches_brute_force() {
        let spec = get("abc-shared-endpoint").unwrap().spec().unwrap().clone();
        let brute: BTreeSet<String> = all_words(&spec.input_alphabet(), 7)
            .into_iter()
            .filter(|w| membership(&spec.intersection(), w))
            .collect();
        assert_eq!(block_language(&spec, 7), brute);
    }

    #[test]
    fn cheap_bundles_replay() {
        for name in [
            "abcd",
            "abc-shared-endpoint",
            "nested",
            "disjoint-blocks",
            "anbn",
            "left-recursive",
        ] {
            let bundle = get(name).unwrap();
            for r in bundle.replay(SearchLimits::default()).unwrap() {
                assert!(r.passed, "{name}: {} ({})", r.expectation, r.detail);
            }
        }
    }
}
