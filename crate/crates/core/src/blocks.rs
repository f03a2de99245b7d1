//! Block-counting languages: strings `B1 B2 … Bk` with each block drawn
//! from its own sub-alphabet and length equalities imposed between pairs of
//! blocks.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arcs::SegmentDecomposition;
use crate::error::{Error, Result};
use crate::pda::{AcceptanceMode, Op, Pda, PdaBuilder};

/// An equality constraint `|B_i| = |B_j|` between 1-based blocks `i < j`.
pub type BlockArc = (usize, usize);

fn crosses(a: BlockArc, b: BlockArc) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

fn shares_endpoint(a: BlockArc, b: BlockArc) -> bool {
    a != b && (a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1)
}

fn validate_alphabets(alphabets: &[Vec<char>]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (m, a) in alphabets.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::InvalidSpec(format!("block {} has an empty alphabet", m + 1)));
        }
        for c in a {
            if !seen.insert(*c) {
                return Err(Error::InvalidSpec(format!(
                    "symbol {c:?} appears in more than one sub-alphabet"
                )));
            }
        }
    }
    Ok(())
}

fn normalize_arcs(k: usize, arcs: &[BlockArc]) -> Result<Vec<BlockArc>> {
    let mut out = BTreeSet::new();
    for &(a, b) in arcs {
        let (i, j) = (a.min(b), a.max(b));
        if i == 0 || j > k || i == j {
            return Err(Error::InvalidSpec(format!(
                "constraint ({a},{b}) is not a pair of distinct blocks in 1..={k}"
            )));
        }
        out.insert((i, j));
    }
    Ok(out.into_iter().collect())
}

/// Block index (0-based) of each symbol of `w`, if `w` factors into blocks.
fn factor(alphabets: &[Vec<char>], w: &str) -> Option<Vec<usize>> {
    let mut lengths = vec![0; alphabets.len()];
    let mut current = 0;
    for c in w.chars() {
        let m = alphabets.iter().position(|a| a.contains(&c))?;
        if m < current {
            return None;
        }
        current = m;
        lengths[m] += 1;
    }
    Some(lengths)
}

/// A block-counting language with one constraint set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    alphabets: Vec<Vec<char>>,
    constraints: Vec<BlockArc>,
}

impl BlockSpec {
    pub fn new(alphabets: Vec<Vec<char>>, constraints: &[BlockArc]) -> Result<Self> {
        validate_alphabets(&alphabets)?;
        let constraints = normalize_arcs(alphabets.len(), constraints)?;
        Ok(BlockSpec { alphabets, constraints })
    }

    pub fn k(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[Vec<char>] {
        &self.alphabets
    }

    pub fn constraints(&self) -> &[BlockArc] {
        &self.constraints
    }
}

/// Whether `w` factors as `B1 … Bk` over the sub-alphabets with
/// `|B_i| = |B_j|` for every constraint.
pub fn membership(spec: &BlockSpec, w: &str) -> bool {
    match factor(&spec.alphabets, w) {
        Some(lengths) => spec.constraints.iter().all(|&(i, j)| lengths[i - 1] == lengths[j - 1]),
        None => false,
    }
}

/// Two constraint sets over shared blocks; the language is the
/// intersection of the two block languages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointSpec {
    alphabets: Vec<Vec<char>>,
    c1: Vec<BlockArc>,
    c2: Vec<BlockArc>,
}

/// Why two constraint sets fail to be jointly well-nested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// `left` starts first and the two interleave.
    Crossing {
        left: BlockArc,
        right: BlockArc,
    },
    SharedEndpoint {
        first: BlockArc,
        second: BlockArc,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Crossing { left, right } => {
                write!(f, "crossing arcs ({},{})×({},{})", left.0, left.1, right.0, right.1)
            }
            Violation::SharedEndpoint { first, second } => write!(
                f,
                "shared endpoint ({},{})·({},{})",
                first.0, first.1, second.0, second.1
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    #[serde(rename = "CFL")]
    Cfl,
    #[serde(rename = "NotCFL")]
    NotCfl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    JointlyWellNested,
    Violation(Violation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reason: Reason,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason {
            Reason::JointlyWellNested => write!(f, "CFL (jointly well-nested)"),
            Reason::Violation(v) => write!(f, "NotCFL ({v})"),
        }
    }
}

impl JointSpec {
    pub fn new(alphabets: Vec<Vec<char>>, c1: &[BlockArc], c2: &[BlockArc]) -> Result<Self> {
        validate_alphabets(&alphabets)?;
        let k = alphabets.len();
        let c1 = normalize_arcs(k, c1)?;
        let c2 = normalize_arcs(k, c2)?;
        for (name, set) in [("first", &c1), ("second", &c2)] {
            for (x, a) in set.iter().enumerate() {
                for b in &set[x + 1..] {
                    if shares_endpoint(*a, *b) {
                        return Err(Error::InvalidSpec(format!(
                            "{name} constraint set reuses a block: ({},{}) and ({},{})",
                            a.0, a.1, b.0, b.1
                        )));
                    }
                }
            }
        }
        Ok(JointSpec { alphabets, c1, c2 })
    }

    /// Blocks named by consecutive letters from `a`, one symbol each.
    pub fn with_letters(k: usize, c1: &[BlockArc], c2: &[BlockArc]) -> Result<Self> {
        if k > 26 {
            return Err(Error::InvalidSpec("at most 26 lettered blocks".into()));
        }
        let alphabets = (0..k).map(|m| vec![(b'a' + m as u8) as char]).collect();
        JointSpec::new(alphabets, c1, c2)
    }

    pub fn k(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[Vec<char>] {
        &self.alphabets
    }

    pub fn c1(&self) -> &[BlockArc] {
        &self.c1
    }

    pub fn c2(&self) -> &[BlockArc] {
        &self.c2
    }

    pub fn first(&self) -> BlockSpec {
        BlockSpec {
            alphabets: self.alphabets.clone(),
            constraints: self.c1.clone(),
        }
    }

    pub fn second(&self) -> BlockSpec {
        BlockSpec {
            alphabets: self.alphabets.clone(),
            constraints: self.c2.clone(),
        }
    }

    /// The intersection as one block language.
    pub fn intersection(&self) -> BlockSpec {
        let both: Vec<BlockArc> = self.c1.iter().chain(&self.c2).copied().collect();
        BlockSpec::new(self.alphabets.clone(), &both).expect("arcs already validated")
    }

    /// The same spec with the two constraint sets exchanged.
    pub fn swapped(&self) -> JointSpec {
        JointSpec {
            alphabets: self.alphabets.clone(),
            c1: self.c2.clone(),
            c2: self.c1.clone(),
        }
    }

    pub fn input_alphabet(&self) -> Vec<char> {
        let mut out: Vec<char> = self.alphabets.iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&BlocksFile::from(self)).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BlocksFile = serde_json::from_str(text)?;
        doc.to_spec()
    }
}

/// Checks that no arc of one set crosses an arc of the other and that no
/// two distinct arcs share an endpoint. Returns the lexicographically first
/// violation.
pub fn is_jointly_well_nested(j: &JointSpec) -> Result<(bool, Option<Violation>)> {
    for (name, set) in [("first", &j.c1), ("second", &j.c2)] {
        for (x, a) in set.iter().enumerate() {
            for b in &set[x + 1..] {
                if crosses(*a, *b) {
                    return Err(Error::PreconditionViolated(format!(
                        "{name} constraint set is not well-nested"
                    )));
                }
            }
        }
    }
    let mut found: Option<((BlockArc, BlockArc), Violation)> = None;
    for &a in &j.c1 {
        for &b in &j.c2 {
            let (lo, hi) = (a.min(b), a.max(b));
            let v = if crosses(a, b) {
                Violation::Crossing { left: lo, right: hi }
            } else if shares_endpoint(a, b) {
                Violation::SharedEndpoint { first: lo, second: hi }
            } else {
                continue;
            };
            if found.is_none_or(|(key, _)| (lo, hi) < key) {
                found = Some(((lo, hi), v));
            }
        }
    }
    Ok(match found {
        Some((_, v)) => (false, Some(v)),
        None => (true, None),
    })
}

/// The context-freeness verdict: CFL exactly when jointly well-nested.
pub fn characterize(j: &JointSpec) -> Result<Verdict> {
    Ok(match is_jointly_well_nested(j)? {
        (true, _) => Verdict {
            outcome: Outcome::Cfl,
            reason: Reason::JointlyWellNested,
        },
        (false, Some(v)) => Verdict {
            outcome: Outcome::NotCfl,
            reason: Reason::Violation(v),
        },
        (false, None) => unreachable!("a failed check always names a violation"),
    })
}

/// A single-stack PDA for the intersection of a jointly well-nested spec.
///
/// The finite control holds the index of the current block. Reading a
/// symbol of a block that is the left endpoint of a constraint arc `e`
/// pushes a marker `c_e`; reading one of its right endpoint pops `c_e`;
/// other blocks only read. Acceptance requires the bottom marker alone.
pub fn build_joint_pda(j: &JointSpec) -> Result<Pda> {
    if let (false, Some(v)) = is_jointly_well_nested(j)? {
        return Err(Error::NotJointlyWellNested(v.to_string()));
    }
    let arcs: BTreeSet<BlockArc> = j.c1.iter().chain(&j.c2).copied().collect();
    let marker = |(a, b): BlockArc| format!("c({a},{b})");
    let k = j.k();
    let names: Vec<(BlockArc, String)> = arcs.iter().map(|&e| (e, marker(e))).collect();
    let mut role: Vec<Option<Op<'_>>> = vec![None; k + 1];
    for (e, name) in &names {
        role[e.0] = Some(Op::Push(name));
        role[e.1] = Some(Op::Pop(name));
    }
    let state = |m: usize| format!("b{m}");
    let mut b = PdaBuilder::new("joint");
    b.start(&state(0));
    for m in 0..=k {
        b.accept(&state(m));
    }
    for (_, name) in &names {
        b.symbol(name);
    }
    for from in 0..=k {
        for to in from.max(1)..=k {
            let op = role[to].unwrap_or(Op::Skip);
            for &c in &j.alphabets[to - 1] {
                b.read(&state(from), c, op, &state(to));
            }
        }
    }
    b.mode(AcceptanceMode::FinalStateAndBottomOnly);
    b.build()
}

/// One single-set machine per constraint set, recognizing `L(C1)` and
/// `L(C2)` separately.
pub fn component_pdas(j: &JointSpec, name: &str) -> Result<(Pda, Pda)> {
    let m1 = build_joint_pda(&JointSpec::new(j.alphabets.clone(), &j.c1, &[])?)?.with_name(format!("{name}-1"));
    let m2 = build_joint_pda(&JointSpec::new(j.alphabets.clone(), &j.c2, &[])?)?.with_name(format!("{name}-2"));
    Ok((m1, m2))
}

/// Blocks reachable from the endpoints of a crossing through the union of
/// both constraint sets, taken as undirected edges.
pub fn crossing_connected(j: &JointSpec, left: BlockArc, right: BlockArc) -> BTreeSet<usize> {
    let edges: Vec<BlockArc> = j.c1.iter().chain(&j.c2).copied().collect();
    let mut seen: BTreeSet<usize> = [left.0, left.1, right.0, right.1].into();
    let mut work: VecDeque<usize> = seen.iter().copied().collect();
    while let Some(m) = work.pop_front() {
        for &(a, b) in &edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == m && seen.insert(y) {
                    work.push_back(y);
                }
            }
        }
    }
    seen
}

fn check_crossing(j: &JointSpec, left: BlockArc, right: BlockArc) -> Result<(BlockArc, BlockArc)> {
    let one_each = (j.c1.contains(&left) && j.c2.contains(&right)) || (j.c2.contains(&left) && j.c1.contains(&right));
    if !one_each || !crosses(left, right) {
        return Err(Error::NoCrossing);
    }
    Ok((left.min(right), left.max(right)))
}

/// The word with `n` copies of its block's first symbol in every
/// crossing-connected block and nothing elsewhere. It belongs to both
/// block languages.
pub fn witness_string(j: &JointSpec, left: BlockArc, right: BlockArc, n: usize) -> Result<String> {
    let (left, right) = check_crossing(j, left, right)?;
    Ok(witness_lengths(j, left, right, n)
        .iter()
        .enumerate()
        .map(|(m, &len)| j.alphabets[m][0].to_string().repeat(len))
        .collect())
}

fn witness_lengths(j: &JointSpec, left: BlockArc, right: BlockArc, n: usize) -> Vec<usize> {
    let connected = crossing_connected(j, left, right);
    (1..=j.k())
        .map(|m| if connected.contains(&m) { n } else { 0 })
        .collect()
}

/// A segment pair that pumping should not be able to separate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinkageClaim {
    /// 0-based segment indices, e.g. `(0, 2)` for `(P1, P3)`.
    pub pair: (usize, usize),
}

impl fmt::Display for LinkageClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(P{},P{})", self.pair.0 + 1, self.pair.1 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkagePackage {
    pub word: String,
    pub segments: SegmentDecomposition,
    pub claims: [LinkageClaim; 2],
}

/// The witness word for a crossing, cut at the ends of blocks `i`, `i'` and
/// `j` of the crossing `(i,j)×(i',j')`, with the two linkage claims
/// `(P1,P3)` and `(P2,P4)`.
pub fn segments_and_linkages(j: &JointSpec, left: BlockArc, right: BlockArc, n: usize) -> Result<LinkagePackage> {
    let (left, right) = check_crossing(j, left, right)?;
    let lengths = witness_lengths(j, left, right, n);
    let end_of = |block: usize| lengths[..block].iter().sum::<usize>();
    let word = witness_string(j, left, right, n)?;
    let segments =
        SegmentDecomposition::from_cuts(end_of(left.0), end_of(right.0), end_of(left.1), word.chars().count())?;
    Ok(LinkagePackage {
        word,
        segments,
        claims: [LinkageClaim { pair: (0, 2) }, LinkageClaim { pair: (1, 3) }],
    })
}

pub const BLOCKS_VERSION: &str = "blocks-v1";

/// The `blocks-v1` JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksFile {
    pub version: String,
    pub k: usize,
    pub alphabets: Vec<Vec<String>>,
    pub c1: Vec<[usize; 2]>,
    pub c2: Vec<[usize; 2]>,
}

impl From<&JointSpec> for BlocksFile {
    fn from(j: &JointSpec) -> Self {
        BlocksFile {
            version: BLOCKS_VERSION.into(),
            k: j.k(),
            alphabets: j
                .alphabets
                .iter()
                .map(|a| a.iter().map(|c| c.to_string()).collect())
                .collect(),
            c1: j.c1.iter().map(|&(a, b)| [a, b]).collect(),
            c2: j.c2.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl BlocksFile {
    pub fn to_spec(&self) -> Result<JointSpec> {
        let bad = |m: String| Error::format(BLOCKS_VERSION, m);
        if self.version != BLOCKS_VERSION {
            return Err(bad(format!("unsupported version {:?}", self.version)));
        }
        if self.alphabets.len() != self.k {
            return Err(bad(format!(
                "k = {} but {} alphabets given",
                self.k,
                self.alphabets.len()
            )));
        }
        let mut alphabets = Vec::new();
        for a in &self.alphabets {
            let mut block = Vec::new();
            for s in a {
                let mut it = s.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => block.push(c),
                    _ => return Err(bad(format!("symbol {s:?} is not a single character"))),
                }
            }
            alphabets.push(block);
        }
        let pairs = |v: &[[usize; 2]]| v.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>();
        JointSpec::new(alphabets, &pairs(&self.c1), &pairs(&self.c2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::SearchLimits;
    use crate::pda::enumerate_language;

    fn abcd() -> JointSpec {
        JointSpec::with_letters(4, &[(1, 3)], &[(2, 4)]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let l1 = abcd().first();
        assert!(membership(&l1, "aabcc"));
        assert!(!membership(&l1, "aabc"));
        assert!(!membership(&l1, "ba"));
        assert!(!membership(&l1, "ax"));
        assert!(membership(&l1, ""));
        let abc = JointSpec::with_letters(3, &[(1, 2)], &[(2, 3)]).unwrap();
        assert!(membership(&abc.second(), "abbcc"));
        assert!(!membership(&abc.intersection(), "abbcc"));
        assert!(membership(&abc.intersection(), "aabbcc"));
    }

    #[test]
    fn verdicts() {
        let v = characterize(&abcd()).unwrap();
        assert_eq!(v.outcome, Outcome::NotCfl);
        assert_eq!(v.to_string(), "NotCFL (crossing arcs (1,3)×(2,4))");
        let abc = JointSpec::with_letters(3, &[(1, 2)], &[(2, 3)]).unwrap();
        let v = characterize(&abc).unwrap();
        assert_eq!(
            v.reason,
            Reason::Violation(Violation::SharedEndpoint {
                first: (1, 2),
                second: (2, 3)
            })
        );
        let nested = JointSpec::with_letters(4, &[(1, 4)], &[(2, 3)]).unwrap();
        assert_eq!(characterize(&nested).unwrap().outcome, Outcome::Cfl);
        let same = JointSpec::with_letters(4, &[(1, 4)], &[(1, 4)]).unwrap();
        assert_eq!(is_jointly_well_nested(&same).unwrap(), (true, None));
        let disjoint = JointSpec::with_letters(4, &[(1, 2)], &[(3, 4)]).unwrap();
        assert_eq!(characterize(&disjoint).unwrap().outcome, Outcome::Cfl);
    }

    #[test]
    fn verdict_is_symmetric() {
        for j in [
            abcd(),
            JointSpec::with_letters(3, &[(1, 2)], &[(2, 3)]).unwrap(),
            JointSpec::with_letters(5, &[(1, 4), (2, 3)], &[(3, 5)]).unwrap(),
        ] {
            assert_eq!(characterize(&j).unwrap(), characterize(&j.swapped()).unwrap());
        }
    }

    #[test]
    fn construction_rejects_bad_specs() {
        assert!(JointSpec::with_letters(3, &[(1, 2), (2, 3)], &[]).is_err());
        assert!(JointSpec::with_letters(3, &[(1, 4)], &[]).is_err());
        assert!(JointSpec::with_letters(3, &[(2, 2)], &[]).is_err());
        assert!(JointSpec::new(vec![vec!['a'], vec!['a']], &[], &[]).is_err());
        let crossing_within = JointSpec::with_letters(4, &[(1, 3), (2, 4)], &[]).unwrap();
        assert!(matches!(
            characterize(&crossing_within),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn joint_pda_nested() {
        let j = JointSpec::with_letters(4, &[(1, 4)], &[(2, 3)]).unwrap();
        let pda = build_joint_pda(&j).unwrap();
        let lang = enumerate_language(&pda, 8, SearchLimits::default()).unwrap();
        let mut expected = BTreeSet::new();
        for m in 0..=4 {
            for n in 0..=4 {
                if 2 * (m + n) <= 8 {
                    expected.insert(format!(
                        "{}{}{}{}",
                        "a".repeat(m),
                        "b".repeat(n),
                        "c".repeat(n),
                        "d".repeat(m)
                    ));
                }
            }
        }
        assert_eq!(lang, expected);
        assert!(matches!(build_joint_pda(&abcd()), Err(Error::NotJointlyWellNested(_))));
    }

    #[test]
    fn joint_pda_unconstrained() {
        let j = JointSpec::with_letters(2, &[], &[]).unwrap();
        let pda = build_joint_pda(&j).unwrap();
        let lang = enumerate_language(&pda, 3, SearchLimits::default()).unwrap();
        let expected: BTreeSet<String> = (0..=3)
            .flat_map(|len| (0..=len).map(move |a| "a".repeat(a) + &"b".repeat(len - a)))
            .collect();
        assert_eq!(lang, expected);
    }

    #[test]
    fn witnesses() {
        assert_eq!(witness_string(&abcd(), (1, 3), (2, 4), 3).unwrap(), "aaabbbcccddd");
        let five = JointSpec::with_letters(5, &[(1, 3)], &[(2, 4)]).unwrap();
        assert_eq!(witness_string(&five, (1, 3), (2, 4), 2).unwrap(), "aabbccdd");
        let chained = JointSpec::with_letters(5, &[(1, 3), (4, 5)], &[(2, 4)]).unwrap();
        let w = witness_string(&chained, (2, 4), (1, 3), 2).unwrap();
        assert_eq!(w, "aabbccddee");
        assert!(membership(&chained.intersection(), &w));
        assert!(matches!(
            witness_string(&abcd(), (1, 3), (1, 3), 1),
            Err(Error::NoCrossing)
        ));
    }

    #[test]
    fn segments() {
        let p = segments_and_linkages(&abcd(), (1, 3), (2, 4), 3).unwrap();
        assert_eq!(p.word, "aaabbbcccddd");
        assert_eq!(p.segments.lengths(), [3, 3, 3, 3]);
        let p = segments_and_linkages(&abcd(), (1, 3), (2, 4), 1).unwrap();
        assert_eq!(p.segments.lengths(), [1, 1, 1, 1]);
        assert_eq!(p.claims[0].to_string(), "(P1,P3)");
    }

    #[test]
    fn json_round_trip() {
        let j = JointSpec::new(vec![vec!['a', 'x'], vec!['b']], &[(1, 2)], &[]).unwrap();
        let text = j.to_json();
        assert!(text.contains("blocks-v1"));
        assert_eq!(JointSpec::from_json(&text).unwrap(), j);
    }
}
