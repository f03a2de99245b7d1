//! Intersection PDAs built from two normal-form components sharing one
//! stack.
//!
//! Both constructions simulate the components in lockstep, one input
//! position per move. They differ in how the shared stack is kept in order:
//!
//! * the displacement product pushes everything to the stack and, when a
//!   pop finds the other machine's entries on top, lifts up to `2k` of them
//!   aside, removes the target and puts them back;
//! * the buffered product guesses at each push whether the arc is short
//!   (kept in a bounded buffer in the finite control with a countdown of
//!   `2D` positions) or long (pushed to the stack).
//!
//! Composite states are never enumerated: [`Product`] implements
//! [`Machine`] and expands configurations on demand.

mod bound;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

pub use bound::{state_bound, BoundKind, ComponentSizes, MAX_BOUND_BITS};

use crate::arcs::Arc;
use crate::error::{Error, Result};
use crate::machine::{self, Machine, Path, SearchLimits};
use crate::pda::{
    validate_normal_form, AcceptanceMode, Pda, PdaFile, StackAction, StackOp, StackSym, StateId, Transition,
};

/// A stack symbol together with the component that pushed it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tagged {
    /// 1 or 2.
    pub owner: u8,
    pub symbol: StackSym,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BufferEntry {
    pub entry: Tagged,
    /// Positions left before the entry expires.
    pub timer: u16,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductConfig {
    pub pos: usize,
    pub q: [StateId; 2],
    /// Pending short pushes, oldest first. Always empty between moves of a
    /// displacement product.
    pub buffer: Vec<BufferEntry>,
    /// Bottom first.
    pub stack: Vec<Tagged>,
}

impl ProductConfig {
    /// The finite-control part: component states and buffer.
    pub fn composite_state(&self) -> (StateId, StateId, Vec<BufferEntry>) {
        (self.q[0], self.q[1], self.buffer.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Stack,
    Buffer,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StackEvent {
    Push {
        owner: u8,
        symbol: StackSym,
        placement: Placement,
    },
    Pop {
        owner: u8,
        symbol: StackSym,
        source: Placement,
        /// Entries lifted off the stack to reach the target, topmost first.
        displaced: Vec<Tagged>,
    },
}

/// One move of a product: both components consume `symbol`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductStep {
    /// 1-based position of the symbol read.
    pub position: usize,
    pub symbol: char,
    /// Transition ids taken by each component, auxiliary push included.
    pub moves: [Vec<usize>; 2],
    pub events: Vec<StackEvent>,
}

pub type ProductRun = Path<ProductConfig, ProductStep>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    Displacement { k: usize },
    Buffered { d: usize },
}

/// A lazily expanded intersection PDA.
#[derive(Clone, Debug)]
pub struct Product {
    m: [Pda; 2],
    kind: ProductKind,
    alphabet: Vec<char>,
    displacement_cap: usize,
    buffer_capacity: usize,
}

/// One component's move at a position: a read, optionally followed by an
/// auxiliary push.
#[derive(Clone, Debug)]
struct MacroStep {
    transitions: Vec<usize>,
    to: StateId,
    pop: Option<StackSym>,
    pushes: Vec<StackSym>,
}

fn check_inputs(m1: &Pda, m2: &Pda) -> Result<()> {
    for m in [m1, m2] {
        if let Some(d) = validate_normal_form(m).first() {
            return Err(Error::InvalidMachine(format!(
                "{} is not in normal form: {d}",
                m.name()
            )));
        }
    }
    Ok(())
}

/// The displacement product with gap bound `k`.
pub fn displacement_product(m1: &Pda, m2: &Pda, k: usize) -> Result<Product> {
    check_inputs(m1, m2)?;
    Ok(Product::new(m1, m2, ProductKind::Displacement { k }, 2 * k, 0))
}

/// The short/long buffered product with inner bound `d ≥ 1`.
pub fn buffered_product(m1: &Pda, m2: &Pda, d: usize) -> Result<Product> {
    check_inputs(m1, m2)?;
    if d == 0 {
        return Err(Error::PreconditionViolated("inner bound must be at least 1".into()));
    }
    if 2 * d + 1 > usize::from(u16::MAX) {
        return Err(Error::PreconditionViolated("inner bound too large".into()));
    }
    Ok(Product::new(m1, m2, ProductKind::Buffered { d }, 0, 8 * d))
}

impl Product {
    fn new(m1: &Pda, m2: &Pda, kind: ProductKind, cap: usize, capacity: usize) -> Self {
        let alphabet = m1
            .input_alphabet()
            .iter()
            .filter(|c| m2.input_alphabet().contains(c))
            .copied()
            .collect();
        Product {
            m: [m1.clone(), m2.clone()],
            kind,
            alphabet,
            displacement_cap: cap,
            buffer_capacity: capacity,
        }
    }

    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    pub fn components(&self) -> [&Pda; 2] {
        [&self.m[0], &self.m[1]]
    }

    /// Overrides the `2k` displacement cap, so that actual displacement
    /// demand can be measured.
    pub fn with_displacement_cap(mut self, cap: usize) -> Self {
        self.displacement_cap = cap;
        self
    }

    /// Overrides the `8D` buffer capacity, so that actual occupancy can be
    /// measured.
    pub fn with_buffer_capacity(mut self, capacity: usize) -> Self {
        self.buffer_capacity = capacity;
        self
    }

    pub fn displacement_cap(&self) -> usize {
        self.displacement_cap
    }

    pub fn buffer_capacity(&self) -> usize {
        self.buffer_capacity
    }

    /// The closed-form bound on composite states for this construction.
    pub fn state_bound(&self) -> Result<num_bigint::BigUint> {
        let sizes = ComponentSizes::of(&self.m[0], &self.m[1]);
        match self.kind {
            ProductKind::Displacement { k } => state_bound(BoundKind::Displacement, sizes, k as u64),
            ProductKind::Buffered { d } => state_bound(BoundKind::Buffered, sizes, d as u64),
        }
    }

    fn macro_steps(&self, owner: usize, q: StateId, c: char) -> Vec<MacroStep> {
        let pda = &self.m[owner];
        let mut out = Vec::new();
        for (id, t) in pda.outgoing(q) {
            if t.read != Some(c) {
                continue;
            }
            let (pop, pushes) = match t.action() {
                Some(StackAction::Pop(s)) => (Some(s), vec![]),
                Some(StackAction::Push(s)) => (None, vec![s]),
                _ => (None, vec![]),
            };
            for (aux_id, aux) in pda.outgoing(t.to) {
                if let (true, None, [StackOp::Push(s)]) = (aux.auxiliary, aux.read, aux.ops.as_slice()) {
                    let mut pushes = pushes.clone();
                    pushes.push(*s);
                    out.push(MacroStep {
                        transitions: vec![id, aux_id],
                        to: aux.to,
                        pop,
                        pushes,
                    });
                }
            }
            out.push(MacroStep {
                transitions: vec![id],
                to: t.to,
                pop,
                pushes,
            });
        }
        out
    }

    /// Removes `owner`'s `symbol`; returns the displaced entries or `None`
    /// when this path rejects.
    fn pop(
        &self,
        stack: &mut Vec<Tagged>,
        buffer: &mut Vec<BufferEntry>,
        owner: u8,
        symbol: StackSym,
    ) -> Option<StackEvent> {
        match self.kind {
            ProductKind::Displacement { .. } => {
                let mut idx = stack.len();
                loop {
                    idx = idx.checked_sub(1)?;
                    let e = stack[idx];
                    if e.owner == owner {
                        if e.symbol != symbol {
                            return None;
                        }
                        break;
                    }
                    if stack.len() - idx > self.displacement_cap {
                        return None;
                    }
                }
                let displaced: Vec<Tagged> = stack[idx + 1..].iter().rev().copied().collect();
                stack.remove(idx);
                Some(StackEvent::Pop {
                    owner,
                    symbol,
                    source: Placement::Stack,
                    displaced,
                })
            }
            ProductKind::Buffered { .. } => {
                if let Some(idx) = buffer.iter().rposition(|e| e.entry.owner == owner) {
                    if buffer[idx].entry.symbol != symbol {
                        return None;
                    }
                    buffer.remove(idx);
                    return Some(StackEvent::Pop {
                        owner,
                        symbol,
                        source: Placement::Buffer,
                        displaced: vec![],
                    });
                }
                if stack.last() != Some(&Tagged { owner, symbol }) {
                    return None;
                }
                stack.pop();
                Some(StackEvent::Pop {
                    owner,
                    symbol,
                    source: Placement::Stack,
                    displaced: vec![],
                })
            }
        }
    }

    /// Every way to place this position's pushes, as (stack pushes in
    /// order, buffer inserts in order).
    fn placements(&self, buffer: &[BufferEntry], pushes: [&[StackSym]; 2]) -> Vec<(Vec<Tagged>, Vec<Tagged>)> {
        let tagged: [Vec<Tagged>; 2] = [0, 1].map(|o| {
            pushes[o]
                .iter()
                .map(|&symbol| Tagged {
                    owner: o as u8 + 1,
                    symbol,
                })
                .collect()
        });
        let mut out = Vec::new();
        match self.kind {
            ProductKind::Displacement { .. } => {
                for order in interleavings(&tagged[0], &tagged[1]) {
                    out.push((order, vec![]));
                }
            }
            ProductKind::Buffered { .. } => {
                // Per owner, a prefix goes to the stack and the rest to the
                // buffer: once an owner has a pending short entry its later
                // pushes are nested inside that arc, hence short as well.
                let options = |o: usize| -> Vec<usize> {
                    let pending = buffer.iter().any(|e| e.entry.owner == o as u8 + 1);
                    if pending {
                        vec![0]
                    } else {
                        (0..=tagged[o].len()).collect()
                    }
                };
                for long1 in options(0) {
                    for long2 in options(1) {
                        let short: Vec<Tagged> =
                            tagged[0][long1..].iter().chain(&tagged[1][long2..]).copied().collect();
                        if buffer.len() + short.len() > self.buffer_capacity {
                            continue;
                        }
                        for order in interleavings(&tagged[0][..long1], &tagged[1][..long2]) {
                            out.push((order, short.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    fn timer(&self) -> u16 {
        match self.kind {
            ProductKind::Buffered { d } => 2 * d as u16,
            ProductKind::Displacement { .. } => 0,
        }
    }

    /// Whether a component would accept with the given state and its share
    /// of the storage.
    fn component_accepts(&self, owner: usize, config: &ProductConfig) -> bool {
        let pda = &self.m[owner];
        let tag = owner as u8 + 1;
        pda.accept_states().contains(&config.q[owner])
            && match pda.acceptance_mode() {
                AcceptanceMode::FinalState => true,
                AcceptanceMode::FinalStateAndBottomOnly => !config.stack.iter().any(|e| e.owner == tag),
            }
    }

    pub fn accepts(&self, w: &str, limits: SearchLimits) -> Result<Option<ProductRun>> {
        let word: Vec<char> = w.chars().collect();
        if word.iter().any(|c| !self.alphabet.contains(c)) {
            return Ok(None);
        }
        machine::accepts(self, &word, limits)
    }

    pub fn accepting_runs(&self, w: &str, cap: usize, limits: SearchLimits) -> Result<Vec<ProductRun>> {
        let word: Vec<char> = w.chars().collect();
        if word.iter().any(|c| !self.alphabet.contains(c)) {
            return Ok(Vec::new());
        }
        machine::accepting_paths(self, &word, cap, limits)
    }

    pub fn language(&self, max_len: usize, limits: SearchLimits) -> Result<BTreeSet<String>> {
        machine::language(self, max_len, limits)
    }

    pub fn tagged_name(&self, t: Tagged) -> String {
        format!("{}:{}", t.owner, self.m[t.owner as usize - 1].symbol_name(t.symbol))
    }

    pub fn describe_state(&self, q: [StateId; 2], buffer: &[BufferEntry]) -> String {
        let entries: Vec<String> = buffer
            .iter()
            .map(|e| format!("{}@{}", self.tagged_name(e.entry), e.timer))
            .collect();
        format!(
            "({}, {}, [{}])",
            self.m[0].state_name(q[0]),
            self.m[1].state_name(q[1]),
            entries.join(" ")
        )
    }
}

fn interleavings(a: &[Tagged], b: &[Tagged]) -> Vec<Vec<Tagged>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut rest in interleavings(&a[1..], b) {
        rest.insert(0, a[0]);
        out.push(rest);
    }
    for mut rest in interleavings(a, &b[1..]) {
        rest.insert(0, b[0]);
        out.push(rest);
    }
    out
}

impl Machine for Product {
    type Config = ProductConfig;
    type Label = ProductStep;

    fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    fn initial(&self) -> ProductConfig {
        ProductConfig {
            pos: 0,
            q: [self.m[0].start(), self.m[1].start()],
            buffer: Vec::new(),
            stack: Vec::new(),
        }
    }

    fn position(&self, config: &ProductConfig) -> usize {
        config.pos
    }

    fn successors(&self, config: &ProductConfig, symbol: Option<char>, out: &mut Vec<(ProductStep, ProductConfig)>) {
        let Some(c) = symbol else { return };
        let steps1 = self.macro_steps(0, config.q[0], c);
        if steps1.is_empty() {
            return;
        }
        let steps2 = self.macro_steps(1, config.q[1], c);
        for s1 in &steps1 {
            for s2 in &steps2 {
                let pops: Vec<(u8, StackSym)> = [(1u8, s1.pop), (2u8, s2.pop)]
                    .into_iter()
                    .filter_map(|(o, p)| p.map(|s| (o, s)))
                    .collect();
                let mut orders = vec![pops.clone()];
                if pops.len() == 2 {
                    orders.push(vec![pops[1], pops[0]]);
                }
                for order in orders {
                    let mut stack = config.stack.clone();
                    let mut buffer = config.buffer.clone();
                    let mut events = Vec::new();
                    let mut ok = true;
                    for &(owner, sym) in &order {
                        match self.pop(&mut stack, &mut buffer, owner, sym) {
                            Some(e) => events.push(e),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    for (to_stack, to_buffer) in self.placements(&buffer, [&s1.pushes, &s2.pushes]) {
                        let mut stack = stack.clone();
                        let mut buffer = buffer.clone();
                        let mut events = events.clone();
                        for t in &to_stack {
                            stack.push(*t);
                            events.push(StackEvent::Push {
                                owner: t.owner,
                                symbol: t.symbol,
                                placement: Placement::Stack,
                            });
                        }
                        for t in &to_buffer {
                            buffer.push(BufferEntry {
                                entry: *t,
                                timer: self.timer() + 1,
                            });
                            events.push(StackEvent::Push {
                                owner: t.owner,
                                symbol: t.symbol,
                                placement: Placement::Buffer,
                            });
                        }
                        let mut expired = false;
                        for e in &mut buffer {
                            e.timer -= 1;
                            expired |= e.timer == 0;
                        }
                        if expired {
                            continue;
                        }
                        out.push((
                            ProductStep {
                                position: config.pos + 1,
                                symbol: c,
                                moves: [s1.transitions.clone(), s2.transitions.clone()],
                                events,
                            },
                            ProductConfig {
                                pos: config.pos + 1,
                                q: [s1.to, s2.to],
                                buffer,
                                stack,
                            },
                        ));
                    }
                }
            }
        }
    }

    fn is_accepting(&self, config: &ProductConfig) -> bool {
        config.buffer.is_empty() && self.component_accepts(0, config) && self.component_accepts(1, config)
    }

    fn depth(&self, config: &ProductConfig) -> usize {
        config.stack.len()
    }

    fn depth_cap(&self, len: usize) -> usize {
        4 * len
    }
}

/// Largest number of entries lifted aside by any single pop of the run.
pub fn max_displacement(run: &ProductRun) -> usize {
    run.labels()
        .flat_map(|l| &l.events)
        .map(|e| match e {
            StackEvent::Pop { displaced, .. } => displaced.len(),
            StackEvent::Push { .. } => 0,
        })
        .max()
        .unwrap_or(0)
}

/// Largest buffer occupancy of the run, counting entries inserted at a
/// position before that position's timers tick.
pub fn max_buffer_occupancy(run: &ProductRun) -> usize {
    let mut best = run.initial.buffer.len();
    let mut prev = &run.initial;
    for (label, config) in &run.steps {
        let popped = label
            .events
            .iter()
            .filter(|e| {
                matches!(
                    e,
                    StackEvent::Pop {
                        source: Placement::Buffer,
                        ..
                    }
                )
            })
            .count();
        let inserted = label
            .events
            .iter()
            .filter(|e| {
                matches!(
                    e,
                    StackEvent::Push {
                        placement: Placement::Buffer,
                        ..
                    }
                )
            })
            .count();
        best = best.max(prev.buffer.len() - popped + inserted);
        prev = config;
    }
    best
}

/// Each component's arcs in a product run, with where the push was placed.
pub fn trace_arcs(run: &ProductRun) -> Vec<(Arc, Placement)> {
    let mut open: [Vec<(usize, Placement, crate::arcs::PushOrdinal)>; 2] = [Vec::new(), Vec::new()];
    let mut out = Vec::new();
    for label in run.labels() {
        let mut pushed = [0usize; 2];
        for e in &label.events {
            match *e {
                StackEvent::Push { owner, placement, .. } => {
                    let o = owner as usize - 1;
                    let ordinal = if pushed[o] == 0 {
                        crate::arcs::PushOrdinal::First
                    } else {
                        crate::arcs::PushOrdinal::Second
                    };
                    pushed[o] += 1;
                    open[o].push((label.position, placement, ordinal));
                }
                StackEvent::Pop { owner, .. } => {
                    let o = owner as usize - 1;
                    if let Some((i, placement, ordinal)) = open[o].pop() {
                        out.push((
                            Arc {
                                push_pos: i,
                                pop_pos: label.position,
                                owner,
                                ordinal,
                            },
                            placement,
                        ));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Distinct composite states (component states plus buffer) touched while
/// enumerating the language up to `max_len`. For the displacement product
/// this includes the transient buffers holding displaced entries.
pub fn reachable_composite_states(product: &Product, max_len: usize, limits: SearchLimits) -> Result<usize> {
    let mut seen: BTreeSet<(StateId, StateId, Vec<BufferEntry>)> = BTreeSet::new();
    machine::language_with(product, max_len, limits, |label, config| {
        seen.insert(config.composite_state());
        let Some(label) = label else { return };
        for e in &label.events {
            if let StackEvent::Pop { displaced, .. } = e {
                for n in 1..=displaced.len() {
                    let transient = displaced[..n]
                        .iter()
                        .map(|&entry| BufferEntry { entry, timer: 0 })
                        .collect();
                    seen.insert((config.q[0], config.q[1], transient));
                }
            }
        }
    })?;
    Ok(seen.len())
}

/// The part of the product reached on inputs of length at most `max_len`,
/// as an ordinary PDA over tagged stack symbols. Each product move becomes
/// one transition performing its whole stack-operation sequence, so the
/// result is generally not in normal form. Acceptance is by final state
/// with an empty stack when both components require it and by final state
/// otherwise.
pub fn export_fragment(product: &Product, max_len: usize, max_expand: usize) -> Result<PdaFile> {
    let init = product.initial();
    let mut seen: HashMap<ProductConfig, ()> = HashMap::new();
    let mut queue = VecDeque::from([init.clone()]);
    seen.insert(init.clone(), ());
    let mut states: BTreeMap<(StateId, StateId, Vec<BufferEntry>), usize> = BTreeMap::new();
    let mut order: Vec<(StateId, StateId, Vec<BufferEntry>)> = Vec::new();
    let mut id_of = |s: (StateId, StateId, Vec<BufferEntry>), order: &mut Vec<_>| {
        let n = states.len();
        *states.entry(s.clone()).or_insert_with(|| {
            order.push(s);
            n
        })
    };
    id_of(init.composite_state(), &mut order);
    let mut edges: BTreeSet<(usize, char, Vec<StackOp>, usize)> = BTreeSet::new();
    let mut succ = Vec::new();
    while let Some(config) = queue.pop_front() {
        if config.pos >= max_len {
            continue;
        }
        let from = id_of(config.composite_state(), &mut order);
        for &c in &product.alphabet {
            succ.clear();
            product.successors(&config, Some(c), &mut succ);
            for (label, next) in succ.drain(..) {
                let mut seq = Vec::new();
                for e in &label.events {
                    if let StackEvent::Pop {
                        owner,
                        symbol,
                        source: Placement::Stack,
                        displaced,
                    } = e
                    {
                        let target = Tagged {
                            owner: *owner,
                            symbol: *symbol,
                        };
                        seq.extend(displaced.iter().map(|&d| (false, d)));
                        seq.push((false, target));
                        seq.extend(displaced.iter().rev().map(|&d| (true, d)));
                    }
                }
                seq.extend(label.events.iter().filter_map(|e| match *e {
                    StackEvent::Push {
                        owner,
                        symbol,
                        placement: Placement::Stack,
                    } => Some((true, Tagged { owner, symbol })),
                    _ => None,
                }));
                let to = id_of(next.composite_state(), &mut order);
                edges.insert((from, c, seq.iter().map(|&(push, t)| encode(push, t)).collect(), to));
                if !seen.contains_key(&next) {
                    if seen.len() >= max_expand {
                        return Err(Error::LimitExceeded {
                            visited: seen.len(),
                            cap: max_expand,
                        });
                    }
                    seen.insert(next.clone(), ());
                    queue.push_back(next);
                }
            }
        }
    }
    let mut symbols: BTreeSet<Tagged> = BTreeSet::new();
    for (_, _, ops, _) in &edges {
        for op in ops {
            let (StackOp::Push(s) | StackOp::Pop(s)) = op;
            symbols.insert(decode(*s));
        }
    }
    let sym_list: Vec<Tagged> = symbols.into_iter().collect();
    let mut stack_alphabet = vec!["$".to_string()];
    stack_alphabet.extend(sym_list.iter().map(|&t| product.tagged_name(t)));
    let sym_index: BTreeMap<Tagged, u32> = sym_list.iter().enumerate().map(|(i, &t)| (t, i as u32 + 1)).collect();
    let names: Vec<String> = (0..order.len()).map(|i| format!("c{i}")).collect();
    let transitions = edges
        .into_iter()
        .map(|(from, c, ops, to)| Transition {
            from: StateId(from as u32),
            read: Some(c),
            ops: ops
                .into_iter()
                .map(|op| match op {
                    StackOp::Push(s) => StackOp::Push(StackSym(sym_index[&decode(s)])),
                    StackOp::Pop(s) => StackOp::Pop(StackSym(sym_index[&decode(s)])),
                })
                .collect(),
            to: StateId(to as u32),
            auxiliary: false,
        })
        .collect();
    let both_strict = product
        .m
        .iter()
        .all(|m| m.acceptance_mode() == AcceptanceMode::FinalStateAndBottomOnly);
    let accept = order
        .iter()
        .enumerate()
        .filter(|(_, (q1, q2, buf))| {
            buf.is_empty() && product.m[0].accept_states().contains(q1) && product.m[1].accept_states().contains(q2)
        })
        .map(|(i, _)| StateId(i as u32))
        .collect();
    let pda = Pda::new(
        format!("{}×{}", product.m[0].name(), product.m[1].name()),
        names.clone(),
        product.alphabet.clone(),
        stack_alphabet,
        transitions,
        StateId(0),
        StackSym(0),
        accept,
        if both_strict {
            AcceptanceMode::FinalStateAndBottomOnly
        } else {
            AcceptanceMode::FinalState
        },
    )?;
    let mut file = PdaFile::from_pda(&pda);
    file.composite_state_labels = order
        .iter()
        .enumerate()
        .map(|(i, (q1, q2, buf))| (names[i].clone(), product.describe_state([*q1, *q2], buf)))
        .collect();
    Ok(file)
}

// Tagged symbols packed into a StackSym while edges are collected.
fn encode(push: bool, t: Tagged) -> StackOp {
    let s = StackSym(t.symbol.0 * 2 + u32::from(t.owner - 1));
    if push {
        StackOp::Push(s)
    } else {
        StackOp::Pop(s)
    }
}

fn decode(s: StackSym) -> Tagged {
    Tagged {
        owner: (s.0 % 2) as u8 + 1,
        symbol: StackSym(s.0 / 2),
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductKind::Displacement { k } => write!(f, "displacement (k={k})"),
            ProductKind::Buffered { d } => write!(f, "buffered (D={d})"),
        }
    }
}

#[cfg(test)]
mod tests;
