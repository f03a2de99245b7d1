//! Normal-form pushdown automata.
//!
//! A machine in normal form reads exactly one input symbol per transition
//! and performs at most one stack operation. The only ε-moves are
//! *auxiliary* single pushes chained directly after a pushing transition,
//! so every input position owns at most two pushes and one pop.

mod file;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{self, ConfigGraph, Machine, Path, SearchLimits};

pub use file::PdaFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StackSym(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl StackSym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A single primitive stack operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StackOp {
    Push(StackSym),
    /// Pop, expecting the named symbol on top.
    Pop(StackSym),
}

/// The stack effect of a normal-form transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StackAction {
    Push(StackSym),
    Pop(StackSym),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    /// `None` is an ε-move.
    pub read: Option<char>,
    /// Applied left to right. Normal form allows at most one.
    pub ops: Vec<StackOp>,
    pub to: StateId,
    pub auxiliary: bool,
}

impl Transition {
    /// The single-operation view, or `None` when the transition performs
    /// more than one stack operation.
    pub fn action(&self) -> Option<StackAction> {
        match self.ops.as_slice() {
            [] => Some(StackAction::None),
            [StackOp::Push(s)] => Some(StackAction::Push(*s)),
            [StackOp::Pop(s)] => Some(StackAction::Pop(*s)),
            _ => None,
        }
    }

    pub fn pushes(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, StackOp::Push(_))).count()
    }

    pub fn pops(&self) -> usize {
        self.ops.len() - self.pushes()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptanceMode {
    #[default]
    FinalState,
    /// Accepting state and nothing but the bottom marker left.
    FinalStateAndBottomOnly,
}

/// A pushdown automaton over single-character input symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pda {
    name: String,
    states: Vec<String>,
    input_alphabet: Vec<char>,
    stack_alphabet: Vec<String>,
    transitions: Vec<Transition>,
    start: StateId,
    bottom: StackSym,
    accept: BTreeSet<StateId>,
    mode: AcceptanceMode,
    outgoing: Vec<Vec<usize>>,
    max_pushes_per_position: usize,
}

impl Pda {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        input_alphabet: Vec<char>,
        stack_alphabet: Vec<String>,
        transitions: Vec<Transition>,
        start: StateId,
        bottom: StackSym,
        accept: BTreeSet<StateId>,
        mode: AcceptanceMode,
    ) -> Result<Self> {
        let nstates = states.len() as u32;
        let nsyms = stack_alphabet.len() as u32;
        if start.0 >= nstates {
            return Err(Error::InvalidMachine("start state not declared".into()));
        }
        if bottom.0 >= nsyms {
            return Err(Error::InvalidMachine("bottom marker not declared".into()));
        }
        if accept.iter().any(|s| s.0 >= nstates) {
            return Err(Error::InvalidMachine("accept state not declared".into()));
        }
        let unique = |names: &[String]| names.iter().collect::<BTreeSet<_>>().len() == names.len();
        if !unique(&states) || !unique(&stack_alphabet) {
            return Err(Error::InvalidMachine("duplicate state or stack symbol name".into()));
        }
        let mut input_alphabet = input_alphabet;
        input_alphabet.sort_unstable();
        input_alphabet.dedup();
        let mut outgoing = vec![Vec::new(); states.len()];
        for (id, t) in transitions.iter().enumerate() {
            if t.from.0 >= nstates || t.to.0 >= nstates {
                return Err(Error::InvalidMachine(format!(
                    "transition {id} references an undeclared state"
                )));
            }
            if let Some(c) = t.read {
                if input_alphabet.binary_search(&c).is_err() {
                    return Err(Error::InvalidMachine(format!(
                        "transition {id} reads {c:?}, which is not in the input alphabet"
                    )));
                }
            }
            for op in &t.ops {
                let (StackOp::Push(s) | StackOp::Pop(s)) = op;
                if s.0 >= nsyms {
                    return Err(Error::InvalidMachine(format!(
                        "transition {id} references an undeclared stack symbol"
                    )));
                }
            }
            outgoing[t.from.index()].push(id);
        }
        let read_push = transitions
            .iter()
            .filter(|t| t.read.is_some())
            .map(Transition::pushes)
            .max()
            .unwrap_or(0);
        let eps_push = transitions
            .iter()
            .filter(|t| t.read.is_none())
            .map(Transition::pushes)
            .max()
            .unwrap_or(0);
        Ok(Pda {
            name: name.into(),
            states,
            input_alphabet,
            stack_alphabet,
            transitions,
            start,
            bottom,
            accept,
            mode,
            outgoing,
            max_pushes_per_position: (read_push + eps_push).max(2),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u32))
    }

    pub fn input_alphabet(&self) -> &[char] {
        &self.input_alphabet
    }

    pub fn stack_alphabet(&self) -> &[String] {
        &self.stack_alphabet
    }

    pub fn symbol_name(&self, s: StackSym) -> &str {
        &self.stack_alphabet[s.index()]
    }

    pub fn symbol_id(&self, name: &str) -> Option<StackSym> {
        self.stack_alphabet
            .iter()
            .position(|s| s == name)
            .map(|i| StackSym(i as u32))
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = (usize, &Transition)> {
        self.outgoing[s.index()].iter().map(move |&i| (i, &self.transitions[i]))
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn bottom(&self) -> StackSym {
        self.bottom
    }

    pub fn accept_states(&self) -> &BTreeSet<StateId> {
        &self.accept
    }

    pub fn acceptance_mode(&self) -> AcceptanceMode {
        self.mode
    }

    /// Stack symbols other than the bottom marker.
    pub fn pushable_symbols(&self) -> usize {
        self.stack_alphabet.len() - 1
    }

    pub fn initial_config(&self) -> Configuration {
        Configuration {
            state: self.start,
            input_pos: 0,
            stack: vec![self.bottom],
        }
    }

    /// Acceptance test on a configuration whose input is fully consumed.
    pub fn is_final(&self, config: &Configuration) -> bool {
        self.accept.contains(&config.state)
            && match self.mode {
                AcceptanceMode::FinalState => true,
                AcceptanceMode::FinalStateAndBottomOnly => config.stack == [self.bottom],
            }
    }

    pub fn display_transition(&self, id: usize) -> String {
        let t = &self.transitions[id];
        let read = t.read.map(|c| c.to_string()).unwrap_or_else(|| "ε".into());
        let ops: Vec<String> = t
            .ops
            .iter()
            .map(|op| match op {
                StackOp::Push(s) => format!("push {}", self.symbol_name(*s)),
                StackOp::Pop(s) => format!("pop {}", self.symbol_name(*s)),
            })
            .collect();
        let ops = if ops.is_empty() {
            "-".to_string()
        } else {
            ops.join(", ")
        };
        format!(
            "#{id} {} --{read} / {ops}{}--> {}",
            self.state_name(t.from),
            if t.auxiliary { " (aux)" } else { "" },
            self.state_name(t.to)
        )
    }

    fn apply(&self, t: &Transition, stack: &[StackSym]) -> Option<Vec<StackSym>> {
        let mut stack = stack.to_vec();
        for op in &t.ops {
            match *op {
                StackOp::Push(s) => stack.push(s),
                StackOp::Pop(s) => {
                    if stack.last() != Some(&s) {
                        return None;
                    }
                    stack.pop();
                }
            }
        }
        Some(stack)
    }
}

/// Builds a [`Pda`] from state and symbol names. States and stack symbols
/// are interned in order of first mention.
#[derive(Clone, Debug)]
pub struct PdaBuilder {
    name: String,
    states: Vec<String>,
    index: HashMap<String, StateId>,
    symbols: Vec<String>,
    symbol_index: HashMap<String, StackSym>,
    alphabet: BTreeSet<char>,
    transitions: Vec<Transition>,
    start: Option<StateId>,
    bottom: StackSym,
    accept: BTreeSet<StateId>,
    mode: AcceptanceMode,
}

/// Stack effect by name, for [`PdaBuilder`].
#[derive(Clone, Copy, Debug)]
pub enum Op<'a> {
    Push(&'a str),
    Pop(&'a str),
    Skip,
}

impl PdaBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        let mut b = PdaBuilder {
            name: name.into(),
            states: Vec::new(),
            index: HashMap::new(),
            symbols: Vec::new(),
            symbol_index: HashMap::new(),
            alphabet: BTreeSet::new(),
            transitions: Vec::new(),
            start: None,
            bottom: StackSym(0),
            accept: BTreeSet::new(),
            mode: AcceptanceMode::FinalState,
        };
        b.bottom = b.symbol("$");
        b
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = StateId(self.states.len() as u32);
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn symbol(&mut self, name: &str) -> StackSym {
        if let Some(&id) = self.symbol_index.get(name) {
            return id;
        }
        let id = StackSym(self.symbols.len() as u32);
        self.symbols.push(name.to_string());
        self.symbol_index.insert(name.to_string(), id);
        id
    }

    pub fn alphabet(&mut self, symbols: impl IntoIterator<Item = char>) -> &mut Self {
        self.alphabet.extend(symbols);
        self
    }

    pub fn start(&mut self, name: &str) -> &mut Self {
        self.start = Some(self.state(name));
        self
    }

    pub fn accept(&mut self, name: &str) -> &mut Self {
        let s = self.state(name);
        self.accept.insert(s);
        self
    }

    pub fn mode(&mut self, mode: AcceptanceMode) -> &mut Self {
        self.mode = mode;
        self
    }

    fn ops(&mut self, op: Op<'_>) -> Vec<StackOp> {
        match op {
            Op::Push(s) => vec![StackOp::Push(self.symbol(s))],
            Op::Pop(s) => vec![StackOp::Pop(self.symbol(s))],
            Op::Skip => Vec::new(),
        }
    }

    /// A reading transition.
    pub fn read(&mut self, from: &str, c: char, op: Op<'_>, to: &str) -> &mut Self {
        let ops = self.ops(op);
        self.raw(from, Some(c), ops, to, false)
    }

    /// The same move on each of several symbols.
    pub fn read_any(&mut self, from: &str, cs: &str, op: Op<'_>, to: &str) -> &mut Self {
        for c in cs.chars() {
            self.read(from, c, op, to);
        }
        self
    }

    /// An auxiliary ε single push.
    pub fn aux_push(&mut self, from: &str, symbol: &str, to: &str) -> &mut Self {
        let ops = vec![StackOp::Push(self.symbol(symbol))];
        self.raw(from, None, ops, to, true)
    }

    /// Any transition, including ones that break normal form.
    pub fn raw(&mut self, from: &str, read: Option<char>, ops: Vec<StackOp>, to: &str, auxiliary: bool) -> &mut Self {
        let from = self.state(from);
        let to = self.state(to);
        if let Some(c) = read {
            self.alphabet.insert(c);
        }
        self.transitions.push(Transition {
            from,
            read,
            ops,
            to,
            auxiliary,
        });
        self
    }

    pub fn build(&self) -> Result<Pda> {
        let start = self
            .start
            .ok_or_else(|| Error::InvalidMachine("no start state".into()))?;
        Pda::new(
            self.name.clone(),
            self.states.clone(),
            self.alphabet.iter().copied().collect(),
            self.symbols.clone(),
            self.transitions.clone(),
            start,
            self.bottom,
            self.accept.clone(),
            self.mode,
        )
    }
}

/// A normal-form violation, naming the offending transition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub transition: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "transition #{}: {}", self.transition, self.message)
    }
}

/// Lists every normal-form violation. An empty list means the machine is in
/// normal form.
pub fn validate_normal_form(pda: &Pda) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let ts = pda.transitions();
    let mut report = |id: usize, msg: String| {
        out.push(Diagnostic {
            transition: id,
            message: format!("{msg} ({})", pda.display_transition(id)),
        })
    };
    for (id, t) in ts.iter().enumerate() {
        if t.ops.iter().any(|op| match op {
            StackOp::Push(s) | StackOp::Pop(s) => *s == pda.bottom(),
        }) {
            report(id, "operates on the bottom marker".into());
        }
        if !t.auxiliary {
            if t.read.is_none() {
                report(id, "ε-transition not marked auxiliary".into());
            }
            if t.ops.len() > 1 {
                report(id, format!("performs {} stack operations", t.ops.len()));
            }
            continue;
        }
        if t.read.is_some() {
            report(id, "auxiliary transition reads input".into());
            continue;
        }
        if !matches!(t.ops.as_slice(), [StackOp::Push(_)]) {
            report(id, "auxiliary transition is not a single push".into());
            continue;
        }
        if t.from == pda.start() {
            report(id, "auxiliary transition leaves the start state".into());
            continue;
        }
        let bad_entry = ts
            .iter()
            .any(|e| e.to == t.from && (e.auxiliary || e.read.is_none() || e.pushes() == 0));
        if bad_entry {
            report(
                id,
                "auxiliary source state is entered by a non-pushing or ε transition".into(),
            );
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Configuration {
    pub state: StateId,
    pub input_pos: usize,
    /// Bottom first.
    pub stack: Vec<StackSym>,
}

/// All configurations reachable by one transition: a read of
/// `w[config.input_pos]` or an ε-move.
pub fn step(pda: &Pda, config: &Configuration, w: &str) -> BTreeSet<Configuration> {
    let word: Vec<char> = w.chars().collect();
    let mut out = Vec::new();
    if config.input_pos < word.len() {
        pda.successors(config, Some(word[config.input_pos]), &mut out);
    }
    pda.successors(config, None, &mut out);
    out.into_iter().map(|(_, c)| c).collect()
}

impl Machine for Pda {
    type Config = Configuration;
    type Label = usize;

    fn alphabet(&self) -> &[char] {
        &self.input_alphabet
    }

    fn initial(&self) -> Configuration {
        self.initial_config()
    }

    fn position(&self, config: &Configuration) -> usize {
        config.input_pos
    }

    fn successors(&self, config: &Configuration, symbol: Option<char>, out: &mut Vec<(usize, Configuration)>) {
        for (id, t) in self.outgoing(config.state) {
            if t.read != symbol {
                continue;
            }
            if let Some(stack) = self.apply(t, &config.stack) {
                out.push((
                    id,
                    Configuration {
                        state: t.to,
                        input_pos: config.input_pos + usize::from(symbol.is_some()),
                        stack,
                    },
                ));
            }
        }
    }

    fn is_accepting(&self, config: &Configuration) -> bool {
        self.is_final(config)
    }

    fn depth(&self, config: &Configuration) -> usize {
        config.stack.len()
    }

    fn depth_cap(&self, len: usize) -> usize {
        self.max_pushes_per_position * len + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RunStep {
    pub transition: usize,
    /// 1-based position of the symbol read; auxiliary moves inherit the
    /// position of the read they follow.
    pub input_pos: usize,
    pub stack_depth: usize,
}

/// A witness computation ending in an accepting configuration with all
/// input consumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcceptingRun {
    pub word: String,
    pub steps: Vec<RunStep>,
    pub final_config: Configuration,
}

impl AcceptingRun {
    fn from_path(word: &str, path: Path<Configuration, usize>) -> Self {
        let final_config = path.last().clone();
        let steps = path
            .steps
            .into_iter()
            .map(|(t, c)| RunStep {
                transition: t,
                input_pos: c.input_pos,
                stack_depth: c.stack.len(),
            })
            .collect();
        AcceptingRun {
            word: word.to_string(),
            steps,
            final_config,
        }
    }

    pub fn transition_ids(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.transition).collect()
    }
}

fn chars_in_alphabet(pda: &Pda, w: &str) -> Option<Vec<char>> {
    let word: Vec<char> = w.chars().collect();
    word.iter()
        .all(|c| pda.input_alphabet.binary_search(c).is_ok())
        .then_some(word)
}

/// Decides membership by exhaustive configuration search. Words with
/// symbols outside the input alphabet are rejected.
pub fn accepts(pda: &Pda, w: &str, limits: SearchLimits) -> Result<(bool, Option<AcceptingRun>)> {
    let Some(word) = chars_in_alphabet(pda, w) else {
        return Ok((false, None));
    };
    let path = machine::accepts(pda, &word, limits)?;
    Ok(match path {
        Some(p) => (true, Some(AcceptingRun::from_path(w, p))),
        None => (false, None),
    })
}

/// Up to `cap` distinct accepting runs, ordered lexicographically by their
/// transition-id sequences.
pub fn enumerate_runs(pda: &Pda, w: &str, cap: usize, limits: SearchLimits) -> Result<Vec<AcceptingRun>> {
    let Some(word) = chars_in_alphabet(pda, w) else {
        return Ok(Vec::new());
    };
    let graph = ConfigGraph::explore(pda, &word, limits)?;
    Ok(graph
        .accepting_paths(cap)
        .into_iter()
        .map(|p| AcceptingRun::from_path(w, p))
        .collect())
}

/// Exactly the accepted words of length at most `max_len`.
pub fn enumerate_language(pda: &Pda, max_len: usize, limits: SearchLimits) -> Result<BTreeSet<String>> {
    machine::language(pda, max_len, limits)
}
