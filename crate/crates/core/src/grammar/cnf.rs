use std::collections::{BTreeMap, BTreeSet};

use super::{fresh_name, Cfg, Production, Symbol};
use crate::error::{Error, Result};

/// A grammar in Chomsky normal form, indexed for parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfGrammar {
    nonterminals: Vec<String>,
    terminals: Vec<char>,
    /// `A -> B C`
    binary: Vec<(usize, usize, usize)>,
    /// `A -> a`
    unary: Vec<(usize, char)>,
    start: usize,
    accepts_empty: bool,
}

impl CnfGrammar {
    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[char] {
        &self.terminals
    }

    pub fn binary(&self) -> &[(usize, usize, usize)] {
        &self.binary
    }

    pub fn unary(&self) -> &[(usize, char)] {
        &self.unary
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepts_empty(&self) -> bool {
        self.accepts_empty
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
        for &(a, c) in &self.unary {
            productions.push(Production {
                head: n(a),
                body: vec![Symbol::T(c)],
            });
        }
        for &(a, b, c) in &self.binary {
            productions.push(Production {
                head: n(a),
                body: vec![Symbol::N(n(b)), Symbol::N(n(c))],
            });
        }
        productions.sort_by_key(|p| (self.nonterminals.iter().position(|x| *x == p.head), p.body.len()));
        Cfg::new(
            self.nonterminals.clone(),
            self.terminals.clone(),
            productions,
            n(self.start),
        )
        .expect("CNF grammar is well formed")
    }
}

type Rules = Vec<(String, Vec<Symbol>)>;

fn nullable(rules: &Rules) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    loop {
        let before = out.len();
        for (h, body) in rules {
            if body.iter().all(|s| matches!(s, Symbol::N(n) if out.contains(n))) {
                out.insert(h.clone());
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

/// Drops non-generating and then unreachable symbols.
fn reduce(rules: Rules, start: &str) -> Rules {
    let mut generating = BTreeSet::new();
    loop {
        let before = generating.len();
        for (h, body) in &rules {
            if body
                .iter()
                .all(|s| matches!(s, Symbol::T(_)) || matches!(s, Symbol::N(n) if generating.contains(n)))
            {
                generating.insert(h.clone());
            }
        }
        if generating.len() == before {
            break;
        }
    }
    let rules: Rules = rules
        .into_iter()
        .filter(|(h, body)| {
            generating.contains(h)
                && body
                    .iter()
                    .all(|s| !matches!(s, Symbol::N(n) if !generating.contains(n)))
        })
        .collect();
    let mut reachable = BTreeSet::from([start.to_string()]);
    let mut work = vec![start.to_string()];
    while let Some(a) = work.pop() {
        for (h, body) in &rules {
            if *h != a {
                continue;
            }
            for s in body {
                if let Symbol::N(n) = s {
                    if reachable.insert(n.clone()) {
                        work.push(n.clone());
                    }
                }
            }
        }
    }
    rules.into_iter().filter(|(h, _)| reachable.contains(h)).collect()
}

fn dedup(rules: Rules) -> Rules {
    let mut seen = BTreeSet::new();
    rules.into_iter().filter(|r| seen.insert(r.clone())).collect()
}

/// Converts to Chomsky normal form: fresh start symbol when the start
/// occurs on a right-hand side, terminal lifting, binarization, ε removal,
/// unit removal, and removal of useless symbols.
pub fn to_cnf(g: &Cfg) -> Result<CnfGrammar> {
    let mut used: BTreeSet<String> = g.nonterminals().iter().cloned().collect();
    let mut start = g.start().to_string();
    let mut rules: Rules = g
        .productions()
        .iter()
        .map(|p| (p.head.clone(), p.body.clone()))
        .collect();
    rules = reduce(rules, &start);
    if rules.is_empty() {
        return Err(Error::EmptyLanguage);
    }

    if rules.iter().any(|(_, b)| b.contains(&Symbol::N(start.clone()))) {
        let s0 = fresh_name(&format!("{start}0"), &mut used);
        rules.insert(0, (s0.clone(), vec![Symbol::N(start.clone())]));
        start = s0;
    }

    // Terminals inside longer bodies become nonterminals.
    let mut lifted: BTreeMap<char, String> = BTreeMap::new();
    let mut extra = Vec::new();
    for (_, body) in rules.iter_mut() {
        if body.len() < 2 {
            continue;
        }
        for s in body.iter_mut() {
            if let Symbol::T(c) = *s {
                let name = lifted.entry(c).or_insert_with(|| {
                    let name = fresh_name(&format!("T_{c}"), &mut used);
                    extra.push((name.clone(), vec![Symbol::T(c)]));
                    name
                });
                *s = Symbol::N(name.clone());
            }
        }
    }
    rules.extend(extra);

    let mut binarized = Vec::new();
    for (head, body) in rules {
        if body.len() <= 2 {
            binarized.push((head, body));
            continue;
        }
        let mut lhs = head.clone();
        for (i, s) in body.iter().enumerate().take(body.len() - 2) {
            let next = fresh_name(&format!("{head}_{}", i + 1), &mut used);
            binarized.push((lhs, vec![s.clone(), Symbol::N(next.clone())]));
            lhs = next;
        }
        binarized.push((lhs, body[body.len() - 2..].to_vec()));
    }

    let null = nullable(&binarized);
    let accepts_empty = null.contains(&start);
    let mut no_eps = Vec::new();
    for (head, body) in &binarized {
        let optional: Vec<usize> = body
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Symbol::N(n) if null.contains(n)))
            .map(|(i, _)| i)
            .collect();
        for mask in 0..1u32 << optional.len() {
            let kept: Vec<Symbol> = body
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    optional
                        .iter()
                        .position(|o| o == i)
                        .is_none_or(|bit| mask & (1 << bit) == 0)
                })
                .map(|(_, s)| s.clone())
                .collect();
            if !kept.is_empty() {
                no_eps.push((head.clone(), kept));
            }
        }
    }
    let no_eps = dedup(no_eps);

    let heads: Vec<String> = {
        let mut seen = BTreeSet::new();
        no_eps
            .iter()
            .map(|(h, _)| h.clone())
            .chain(std::iter::once(start.clone()))
            .filter(|h| seen.insert(h.clone()))
            .collect()
    };
    let mut no_unit = Vec::new();
    for a in &heads {
        let mut closure = vec![a.clone()];
        let mut seen = BTreeSet::from([a.clone()]);
        let mut i = 0;
        while i < closure.len() {
            for (h, body) in &no_eps {
                if *h == closure[i] {
                    if let [Symbol::N(b)] = body.as_slice() {
                        if seen.insert(b.clone()) {
                            closure.push(b.clone());
                        }
                    }
                }
            }
            i += 1;
        }
        for b in &closure {
            for (h, body) in &no_eps {
                if h == b && !matches!(body.as_slice(), [Symbol::N(_)]) {
                    no_unit.push((a.clone(), body.clone()));
                }
            }
        }
    }
    let rules = reduce(dedup(no_unit), &start);
    if rules.is_empty() && !accepts_empty {
        return Err(Error::EmptyLanguage);
    }

    let mut nonterminals: Vec<String> = vec![start.clone()];
    for (h, body) in &rules {
        for n in std::iter::once(h).chain(body.iter().filter_map(|s| match s {
            Symbol::N(n) => Some(n),
            Symbol::T(_) => None,
        })) {
            if !nonterminals.contains(n) {
                nonterminals.push(n.clone());
            }
        }
    }
    let idx = |n: &str| nonterminals.iter().position(|x| x == n).unwrap();
    let mut binary = Vec::new();
    let mut unary = Vec::new();
    for (h, body) in &rules {
        match body.as_slice() {
            [Symbol::T(c)] => unary.push((idx(h), *c)),
            [Symbol::N(b), Symbol::N(c)] => binary.push((idx(h), idx(b), idx(c))),
            other => unreachable!("non-CNF body {other:?} survived conversion"),
        }
    }
    Ok(CnfGrammar {
        terminals: g.terminals().to_vec(),
        start: 0,
        nonterminals,
        binary,
        unary,
        accepts_empty,
    })
}

/// Membership by the cubic CYK table.
pub fn cyk_membership(g: &CnfGrammar, w: &str) -> bool {
    let word: Vec<char> = w.chars().collect();
    let n = word.len();
    if n == 0 {
        return g.accepts_empty;
    }
    let nt = g.nonterminals.len();
    // table[len-1][i] is the set of nonterminals deriving word[i..i+len].
    let mut table = vec![vec![vec![false; nt]; n]; n];
    for (i, c) in word.iter().enumerate() {
        for &(a, t) in &g.unary {
            if t == *c {
                table[0][i][a] = true;
            }
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            for split in 1..len {
                for &(a, b, c) in &g.binary {
                    if !table[len - 1][i][a] && table[split - 1][i][b] && table[len - split - 1][i + split][c] {
                        table[len - 1][i][a] = true;
                    }
                }
            }
        }
    }
    table[n - 1][0][g.start]
}
