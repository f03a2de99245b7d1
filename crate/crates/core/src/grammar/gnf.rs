use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Cfg, CnfGrammar, Production, Symbol};
use crate::pda::{AcceptanceMode, Op, Pda, PdaBuilder};

/// `head -> terminal tail…` with at most two tail nonterminals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GnfProduction {
    pub head: usize,
    pub terminal: char,
    pub tail: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnfGrammar {
    nonterminals: Vec<String>,
    terminals: Vec<char>,
    productions: Vec<GnfProduction>,
    start: usize,
    accepts_empty: bool,
}

impl GnfGrammar {
    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[char] {
        &self.terminals
    }

    pub fn productions(&self) -> &[GnfProduction] {
        &self.productions
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepts_empty(&self) -> bool {
        self.accepts_empty
    }

    /// Every body starts with a terminal, tails have length at most two,
    /// and the start symbol occurs in no tail.
    pub fn check_shape(&self) -> bool {
        self.productions
            .iter()
            .all(|p| p.tail.len() <= 2 && !p.tail.contains(&self.start))
    }

    pub fn to_cfg(&self) -> Cfg {
        let n = |i: usize| self.nonterminals[i].clone();
        let mut productions = Vec::new();
        if self.accepts_empty {
            productions.push(Production {
                head: n(self.start),
                body: Vec::new(),
            });
        }
        for p in &self.productions {
            let mut body = vec![Symbol::T(p.terminal)];
            body.extend(p.tail.iter().map(|&t| Symbol::N(n(t))));
            productions.push(Production { head: n(p.head), body });
        }
        Cfg::new(
            self.nonterminals.clone(),
            self.terminals.clone(),
            productions,
            n(self.start),
        )
        .expect("GNF grammar is well formed")
    }

    /// Words of length at most `max_len`, by leftmost derivation. Each step
    /// emits one terminal, so sentential forms never outgrow the bound.
    pub fn derive_words(&self, max_len: usize) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if self.accepts_empty {
            out.insert(String::new());
        }
        let mut by_head: Vec<Vec<&GnfProduction>> = vec![Vec::new(); self.nonterminals.len()];
        for p in &self.productions {
            by_head[p.head].push(p);
        }
        // Pending nonterminals are stored with the leftmost last.
        let mut seen = BTreeSet::new();
        let mut work = vec![(String::new(), vec![self.start])];
        while let Some((prefix, pending)) = work.pop() {
            let Some((&next, rest)) = pending.split_last() else {
                out.insert(prefix);
                continue;
            };
            for p in &by_head[next] {
                let mut pending = rest.to_vec();
                pending.extend(p.tail.iter().rev());
                let mut prefix = prefix.clone();
                prefix.push(p.terminal);
                if prefix.chars().count() + pending.len() <= max_len && seen.insert((prefix.clone(), pending.clone())) {
                    work.push((prefix, pending));
                }
            }
        }
        out
    }
}

/// Intermediate rule during the transform: an optional leading terminal
/// followed by nonterminals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Rule {
    head: usize,
    terminal: Option<char>,
    tail: Vec<usize>,
}

/// Greibach normal form by the left-corner transform of a CNF grammar.
///
/// For goal `A` and left corner `X`, `A/X` derives exactly the strings `w`
/// with `A =>* X w`. Over CNF input the transform yields
///
/// ```text
/// A   -> a A/a
/// A/X -> c C/c A/B     for B -> X C and each terminal c
/// A/a -> A/B           for B -> a
/// A/A -> ε
/// ```
///
/// after substituting the leading nonterminal `C`. Removing the ε- and unit
/// rules leaves tails of length at most two and no left recursion.
pub fn to_gnf(g: &CnfGrammar) -> GnfGrammar {
    let n = g.nonterminals().len();
    let terminals = g.terminals().to_vec();
    let t_index: HashMap<char, usize> = terminals.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    // Ids: plain nonterminals 0..n, then A/X for X a nonterminal, then A/c.
    let slash_nt = |a: usize, x: usize| n + a * n + x;
    let slash_t = |a: usize, c: char| n + n * n + a * terminals.len() + t_index[&c];
    let total = n + n * n + n * terminals.len();
    let mut names: Vec<String> = g.nonterminals().to_vec();
    names.resize(total, String::new());
    for a in 0..n {
        for x in 0..n {
            names[slash_nt(a, x)] = format!("{}/{}", g.nonterminals()[a], g.nonterminals()[x]);
        }
        for &c in &terminals {
            names[slash_t(a, c)] = format!("{}/'{c}'", g.nonterminals()[a]);
        }
    }

    let mut rules = Vec::new();
    for a in 0..n {
        for &c in &terminals {
            rules.push(Rule {
                head: a,
                terminal: Some(c),
                tail: vec![slash_t(a, c)],
            });
        }
        for &(b, x, cc) in g.binary() {
            for &c in &terminals {
                rules.push(Rule {
                    head: slash_nt(a, x),
                    terminal: Some(c),
                    tail: vec![slash_t(cc, c), slash_nt(a, b)],
                });
            }
        }
        for &(b, c) in g.unary() {
            rules.push(Rule {
                head: slash_t(a, c),
                terminal: None,
                tail: vec![slash_nt(a, b)],
            });
        }
        rules.push(Rule {
            head: slash_nt(a, a),
            terminal: None,
            tail: Vec::new(),
        });
    }

    let start = g.start();
    let rules = reduce(rules, start, total);

    let mut nullable = vec![false; total];
    loop {
        let mut changed = false;
        for r in &rules {
            if !nullable[r.head] && r.terminal.is_none() && r.tail.iter().all(|&t| nullable[t]) {
                nullable[r.head] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut no_eps = BTreeSet::new();
    for r in &rules {
        let optional: Vec<usize> = (0..r.tail.len()).filter(|&i| nullable[r.tail[i]]).collect();
        for mask in 0..1u32 << optional.len() {
            let tail: Vec<usize> = r
                .tail
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    optional
                        .iter()
                        .position(|o| o == i)
                        .is_none_or(|bit| mask & (1 << bit) == 0)
                })
                .map(|(_, &t)| t)
                .collect();
            if r.terminal.is_some() || !tail.is_empty() {
                no_eps.insert(Rule {
                    head: r.head,
                    terminal: r.terminal,
                    tail,
                });
            }
        }
    }

    let mut units: Vec<Vec<usize>> = vec![Vec::new(); total];
    for r in &no_eps {
        if r.terminal.is_none() {
            units[r.head].push(r.tail[0]);
        }
    }
    let mut gnf_rules = BTreeSet::new();
    for a in 0..total {
        let mut closure = vec![a];
        let mut seen = BTreeSet::from([a]);
        let mut i = 0;
        while i < closure.len() {
            for &b in &units[closure[i]] {
                if seen.insert(b) {
                    closure.push(b);
                }
            }
            i += 1;
        }
        for r in &no_eps {
            if r.terminal.is_some() && seen.contains(&r.head) {
                gnf_rules.insert(Rule {
                    head: a,
                    terminal: r.terminal,
                    tail: r.tail.clone(),
                });
            }
        }
    }
    let rules = reduce(gnf_rules.into_iter().collect(), start, total);

    // Renumber: start first, then in order of first appearance.
    let mut order: BTreeMap<usize, usize> = BTreeMap::from([(start, 0)]);
    let mut nonterminals = vec![names[start].clone()];
    let mut productions = Vec::new();
    let mut id = |old: usize, order: &mut BTreeMap<usize, usize>| {
        *order.entry(old).or_insert_with(|| {
            nonterminals.push(names[old].clone());
            nonterminals.len() - 1
        })
    };
    for r in &rules {
        let head = id(r.head, &mut order);
        let tail = r.tail.iter().map(|&t| id(t, &mut order)).collect();
        productions.push(GnfProduction {
            head,
            terminal: r.terminal.expect("only terminal-led rules remain"),
            tail,
        });
    }
    productions.sort();
    GnfGrammar {
        nonterminals,
        terminals,
        productions,
        start: 0,
        accepts_empty: g.accepts_empty(),
    }
}

fn reduce(rules: Vec<Rule>, start: usize, total: usize) -> Vec<Rule> {
    let mut generating = vec![false; total];
    loop {
        let mut changed = false;
        for r in &rules {
            if !generating[r.head] && r.tail.iter().all(|&t| generating[t]) {
                generating[r.head] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let rules: Vec<Rule> = rules
        .into_iter()
        .filter(|r| generating[r.head] && r.tail.iter().all(|&t| generating[t]))
        .collect();
    let mut reachable = vec![false; total];
    reachable[start] = true;
    let mut work = vec![start];
    while let Some(a) = work.pop() {
        for r in rules.iter().filter(|r| r.head == a) {
            for &t in &r.tail {
                if !reachable[t] {
                    reachable[t] = true;
                    work.push(t);
                }
            }
        }
    }
    rules.into_iter().filter(|r| reachable[r.head]).collect()
}

/// Translates a GNF grammar into a normal-form PDA.
///
/// The leftmost pending nonterminal lives in the finite control as state
/// `[A]`; the stack holds the rest of the sentential form, nearest first.
/// Reading `a` with `[A]` applies one production:
///
/// * `A -> a B C` pushes `C` and moves to `[B]`,
/// * `A -> a B` moves to `[B]`,
/// * `A -> a` pops the next pending `X` into the control as `[X]`, or moves
///   to the final state when nothing is pending.
///
/// So every position performs exactly one stack operation at most and no
/// auxiliary moves are needed. Acceptance is by final state with an empty
/// stack.
pub fn gnf_to_pda(g: &GnfGrammar) -> Pda {
    let state = |i: usize| format!("[{}]", g.nonterminals[i]);
    let accept = "accept";
    let pushable: BTreeSet<usize> = g
        .productions
        .iter()
        .filter(|p| p.tail.len() == 2)
        .map(|p| p.tail[1])
        .collect();
    let mut b = PdaBuilder::new("gnf");
    b.alphabet(g.terminals.iter().copied());
    b.start(&state(g.start));
    b.state(accept);
    b.accept(accept);
    if g.accepts_empty {
        b.accept(&state(g.start));
    }
    for &x in &pushable {
        b.symbol(&g.nonterminals[x]);
    }
    for p in &g.productions {
        let from = state(p.head);
        match p.tail.as_slice() {
            [] => {
                for &x in &pushable {
                    b.read(&from, p.terminal, Op::Pop(&g.nonterminals[x]), &state(x));
                }
                b.read(&from, p.terminal, Op::Skip, accept);
            }
            [next] => {
                b.read(&from, p.terminal, Op::Skip, &state(*next));
            }
            [next, later] => {
                b.read(&from, p.terminal, Op::Push(&g.nonterminals[*later]), &state(*next));
            }
            _ => unreachable!("GNF tails have length at most two"),
        }
    }
    b.mode(AcceptanceMode::FinalStateAndBottomOnly);
    b.build().expect("translated PDA is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{cyk_membership, to_cnf};
    use crate::machine::SearchLimits;
    use crate::pda::{accepts, enumerate_language, validate_normal_form};

    fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |c| {
                        let mut w = w.clone();
                        w.push(*c);
                        w
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    fn check_pipeline(rules: &str, max_len: usize) {
        let cfg = Cfg::parse(rules).unwrap();
        let cnf = to_cnf(&cfg).unwrap();
        let gnf = to_gnf(&cnf);
        assert!(gnf.check_shape());
        let pda = gnf_to_pda(&gnf);
        assert!(validate_normal_form(&pda).is_empty());
        let derived = gnf.derive_words(max_len);
        let pda_lang = enumerate_language(&pda, max_len, SearchLimits::default()).unwrap();
        for w in all_words(cfg.terminals(), max_len) {
            let cyk = cyk_membership(&cnf, &w);
            assert_eq!(cyk, derived.contains(&w), "GNF derivation disagrees on {w:?}");
            assert_eq!(cyk, pda_lang.contains(&w), "PDA language disagrees on {w:?}");
            assert_eq!(
                cyk,
                accepts(&pda, &w, SearchLimits::default()).unwrap().0,
                "PDA membership disagrees on {w:?}"
            );
        }
    }

    #[test]
    fn single_terminal() {
        let cnf = to_cnf(&Cfg::parse("S -> a").unwrap()).unwrap();
        let gnf = to_gnf(&cnf);
        assert_eq!(
            gnf.productions(),
            &[GnfProduction {
                head: 0,
                terminal: 'a',
                tail: vec![]
            }]
        );
        let pda = gnf_to_pda(&gnf);
        assert_eq!(pda.transitions().len(), 1);
        assert!(!pda.transitions()[0].auxiliary);
    }

    #[test]
    fn left_recursion_removed() {
        let cnf = to_cnf(&Cfg::parse("A -> A a | b").unwrap()).unwrap();
        let gnf = to_gnf(&cnf);
        assert!(gnf.check_shape());
        let words = gnf.derive_words(4);
        let expected: BTreeSet<String> = (0..4).map(|k| format!("b{}", "a".repeat(k))).collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn pipelines_agree() {
        check_pipeline("S -> a S b | ε", 8);
        check_pipeline("S -> 0 S 0 | 1 S 1 | 0 | 1 | ε", 8);
        check_pipeline("S -> ( S ) S | ε", 8);
        check_pipeline("E -> E + T | T\nT -> T * F | F\nF -> ( E ) | x", 7);
    }

    #[test]
    fn empty_word_handling() {
        let cnf = to_cnf(&Cfg::parse("S -> S S | ε").unwrap()).unwrap();
        let gnf = to_gnf(&cnf);
        assert!(gnf.accepts_empty());
        let pda = gnf_to_pda(&gnf);
        assert!(accepts(&pda, "", SearchLimits::default()).unwrap().0);
        assert_eq!(enumerate_language(&pda, 3, SearchLimits::default()).unwrap().len(), 1);
    }
}
