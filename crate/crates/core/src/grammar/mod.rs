//! Context-free grammars: ingestion, Chomsky and Greibach normal forms, the
//! translation into a normal-form PDA, and a CYK membership test.

mod cnf;
mod gnf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cnf::{cyk_membership, to_cnf, CnfGrammar};
pub use gnf::{gnf_to_pda, to_gnf, GnfGrammar, GnfProduction};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T(char),
    N(String),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::T(c) => write!(f, "{c}"),
            Symbol::N(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Production {
    pub head: String,
    pub body: Vec<Symbol>,
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.head)?;
        if self.body.is_empty() {
            return write!(f, " ε");
        }
        for s in &self.body {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    nonterminals: Vec<String>,
    terminals: Vec<char>,
    productions: Vec<Production>,
    start: String,
}

impl Cfg {
    pub fn new(
        nonterminals: Vec<String>,
        terminals: Vec<char>,
        productions: Vec<Production>,
        start: String,
    ) -> Result<Self> {
        let nts: BTreeSet<&String> = nonterminals.iter().collect();
        if nts.len() != nonterminals.len() {
            return Err(Error::InvalidGrammar("duplicate nonterminal".into()));
        }
        if !nts.contains(&start) {
            return Err(Error::InvalidGrammar(format!(
                "start symbol {start:?} is not a nonterminal"
            )));
        }
        let mut terminals = terminals;
        terminals.sort_unstable();
        terminals.dedup();
        for p in &productions {
            if !nts.contains(&p.head) {
                return Err(Error::InvalidGrammar(format!("undeclared head in {p}")));
            }
            for s in &p.body {
                let ok = match s {
                    Symbol::T(c) => terminals.binary_search(c).is_ok(),
                    Symbol::N(n) => nts.contains(n),
                };
                if !ok {
                    return Err(Error::InvalidGrammar(format!("undeclared symbol {s} in {p}")));
                }
            }
        }
        Ok(Cfg {
            nonterminals,
            terminals,
            productions,
            start,
        })
    }

    /// Reads rules of the form `S -> a S b | ε`, one head per line. Tokens
    /// are whitespace separated; every head is a nonterminal and every other
    /// token must be a single-character terminal. The first head is the
    /// start symbol.
    pub fn parse(text: &str) -> Result<Self> {
        let mut heads: Vec<String> = Vec::new();
        let mut rules: Vec<(String, Vec<String>)> = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (head, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::InvalidGrammar(format!("missing '->' in {line:?}")))?;
            let head = head.trim().to_string();
            if head.is_empty() || head.contains(char::is_whitespace) {
                return Err(Error::InvalidGrammar(format!("bad head in {line:?}")));
            }
            if !heads.contains(&head) {
                heads.push(head.clone());
            }
            for alt in rhs.split('|') {
                let body = alt.split_whitespace().filter(|t| *t != "ε").map(String::from).collect();
                rules.push((head.clone(), body));
            }
        }
        let start = heads
            .first()
            .cloned()
            .ok_or_else(|| Error::InvalidGrammar("no rules".into()))?;
        let mut terminals = BTreeSet::new();
        let mut productions = Vec::new();
        for (head, body) in rules {
            let mut symbols = Vec::new();
            for tok in body {
                if heads.contains(&tok) {
                    symbols.push(Symbol::N(tok));
                    continue;
                }
                let mut it = tok.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => {
                        terminals.insert(c);
                        symbols.push(Symbol::T(c));
                    }
                    _ => {
                        return Err(Error::InvalidGrammar(format!(
                            "{tok:?} is neither a head nor a single-character terminal"
                        )))
                    }
                }
            }
            productions.push(Production { head, body: symbols });
        }
        Cfg::new(heads, terminals.into_iter().collect(), productions, start)
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[char] {
        &self.terminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    /// Chomsky normal form shape: `A -> B C`, `A -> a`, and `S -> ε` only
    /// for a start symbol that appears on no right-hand side.
    pub fn is_cnf(&self) -> bool {
        let start_on_rhs = self
            .productions
            .iter()
            .any(|p| p.body.contains(&Symbol::N(self.start.clone())));
        self.productions.iter().all(|p| match p.body.as_slice() {
            [Symbol::T(_)] => true,
            [Symbol::N(_), Symbol::N(_)] => true,
            [] => p.head == self.start && !start_on_rhs,
            _ => false,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CfgFile::from(self)).expect("grammar serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CfgFile = serde_json::from_str(text)?;
        doc.to_cfg()
    }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut by_head: BTreeMap<usize, Vec<&Production>> = BTreeMap::new();
        for p in &self.productions {
            let idx = self
                .nonterminals
                .iter()
                .position(|n| *n == p.head)
                .unwrap_or(usize::MAX);
            by_head.entry(idx).or_default().push(p);
        }
        for ps in by_head.values() {
            let alts: Vec<String> = ps
                .iter()
                .map(|p| {
                    if p.body.is_empty() {
                        "ε".to_string()
                    } else {
                        p.body.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
                    }
                })
                .collect();
            writeln!(f, "{} -> {}", ps[0].head, alts.join(" | "))?;
        }
        Ok(())
    }
}

pub const CFG_VERSION: &str = "cfg-v1";

/// The `cfg-v1` JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfgFile {
    pub version: String,
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub productions: Vec<ProductionDoc>,
    pub start: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductionDoc {
    pub head: String,
    pub body: Vec<String>,
}

impl From<&Cfg> for CfgFile {
    fn from(g: &Cfg) -> Self {
        CfgFile {
            version: CFG_VERSION.into(),
            nonterminals: g.nonterminals.clone(),
            terminals: g.terminals.iter().map(|c| c.to_string()).collect(),
            productions: g
                .productions
                .iter()
                .map(|p| ProductionDoc {
                    head: p.head.clone(),
                    body: p.body.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
            start: g.start.clone(),
        }
    }
}

impl CfgFile {
    pub fn to_cfg(&self) -> Result<Cfg> {
        let bad = |m: String| Error::format(CFG_VERSION, m);
        if self.version != CFG_VERSION {
            return Err(bad(format!("unsupported version {:?}", self.version)));
        }
        let mut terminals = Vec::new();
        for t in &self.terminals {
            let mut it = t.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => terminals.push(c),
                _ => return Err(bad(format!("terminal {t:?} is not a single character"))),
            }
        }
        let mut productions = Vec::new();
        for p in &self.productions {
            let mut body = Vec::new();
            for s in &p.body {
                let is_nt = self.nonterminals.contains(s);
                let as_t = {
                    let mut it = s.chars();
                    match (it.next(), it.next()) {
                        (Some(c), None) if terminals.contains(&c) => Some(c),
                        _ => None,
                    }
                };
                match (is_nt, as_t) {
                    (true, None) => body.push(Symbol::N(s.clone())),
                    (false, Some(c)) => body.push(Symbol::T(c)),
                    (true, Some(_)) => return Err(bad(format!("{s:?} is both a terminal and a nonterminal"))),
                    (false, None) => return Err(bad(format!("undeclared symbol {s:?}"))),
                }
            }
            productions.push(Production {
                head: p.head.clone(),
                body,
            });
        }
        Cfg::new(self.nonterminals.clone(), terminals, productions, self.start.clone()).map_err(|e| bad(e.to_string()))
    }
}

/// Picks a name not in `used`, starting from `base` and appending primes.
pub(crate) fn fresh_name(base: &str, used: &mut BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let g = Cfg::parse("S -> a S b | ε").unwrap();
        assert_eq!(g.terminals(), &['a', 'b']);
        assert_eq!(g.productions().len(), 2);
        assert_eq!(g.to_string(), "S -> a S b | ε\n");
    }

    #[test]
    fn parse_rejects_multichar_terminal() {
        assert!(Cfg::parse("S -> ab").is_err());
        assert!(Cfg::parse("S a b").is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Cfg::parse("E -> E + T | T\nT -> ( E ) | x").unwrap();
        let text = g.to_json();
        assert!(text.contains("cfg-v1"));
        assert_eq!(Cfg::from_json(&text).unwrap(), g);
    }

    #[test]
    fn json_rejects_ambiguous_symbol() {
        let text = r#"{"version":"cfg-v1","nonterminals":["S","a"],"terminals":["a"],
            "productions":[{"head":"S","body":["a"]}],"start":"S"}"#;
        assert!(Cfg::from_json(text).is_err());
    }

    #[test]
    fn cnf_shape() {
        assert!(Cfg::parse("S -> A B | a\nA -> a\nB -> b").unwrap().is_cnf());
        assert!(!Cfg::parse("S -> a S b | ε").unwrap().is_cnf());
        assert!(!Cfg::parse("S -> S S | ε").unwrap().is_cnf());
    }
}
