//! Exhaustive simulation of nondeterministic pushdown machines.
//!
//! Everything here is generic over [`Machine`], so explicit [`Pda`]s and the
//! lazily expanded products share one search engine. Configurations carry
//! their own input position and full stack; the search keys its visited set
//! on the whole configuration. Stack depth is capped per word length by the
//! machine itself, which keeps every configuration graph finite.
//!
//! [`Pda`]: crate::pda::Pda

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A nondeterministic machine reading one symbol at a time.
pub trait Machine {
    type Config: Clone + Eq + Hash + Ord + Debug;
    /// Describes the move taken on an edge. Ordering of labels defines the
    /// order in which accepting runs are reported.
    type Label: Clone + Eq + Ord + Debug;

    /// Sorted input alphabet.
    fn alphabet(&self) -> &[char];
    fn initial(&self) -> Self::Config;
    /// Number of input symbols consumed to reach `config`.
    fn position(&self, config: &Self::Config) -> usize;
    /// Pushes every one-move successor of `config`. `symbol == None` asks
    /// for ε-moves only.
    fn successors(&self, config: &Self::Config, symbol: Option<char>, out: &mut Vec<(Self::Label, Self::Config)>);
    /// Acceptance of a configuration, ignoring whether the input is used up.
    fn is_accepting(&self, config: &Self::Config) -> bool;
    fn depth(&self, config: &Self::Config) -> usize;
    /// Largest stack depth any run on a word of length `len` can need.
    fn depth_cap(&self, len: usize) -> usize;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Cap on configurations held by one search (one word, or one prefix
    /// frontier during language enumeration).
    pub max_configs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_configs: 2_000_000 }
    }
}

impl SearchLimits {
    pub fn new(max_configs: usize) -> Self {
        SearchLimits { max_configs }
    }
}

/// A path through the configuration graph from the initial configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path<C, L> {
    pub initial: C,
    pub steps: Vec<(L, C)>,
}

impl<C, L> Path<C, L> {
    pub fn last(&self) -> &C {
        self.steps.last().map(|(_, c)| c).unwrap_or(&self.initial)
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.steps.iter().map(|(l, _)| l)
    }
}

/// The reachable configuration graph of a machine on one word.
pub struct ConfigGraph<M: Machine> {
    nodes: Vec<M::Config>,
    edges: Vec<Vec<(M::Label, usize)>>,
    accepting: Vec<bool>,
    live: Vec<bool>,
}

impl<M: Machine> ConfigGraph<M> {
    /// Forward exploration followed by backward liveness marking.
    pub fn explore(machine: &M, word: &[char], limits: SearchLimits) -> Result<Self> {
        let cap = machine.depth_cap(word.len());
        let mut nodes = Vec::new();
        let mut index: HashMap<M::Config, usize> = HashMap::new();
        let mut edges: Vec<Vec<(M::Label, usize)>> = Vec::new();
        let mut accepting = Vec::new();
        let mut queue = VecDeque::new();

        let init = machine.initial();
        index.insert(init.clone(), 0);
        nodes.push(init);
        edges.push(Vec::new());
        queue.push_back(0usize);

        let mut succ = Vec::new();
        while let Some(id) = queue.pop_front() {
            let config = nodes[id].clone();
            let pos = machine.position(&config);
            succ.clear();
            if pos < word.len() {
                machine.successors(&config, Some(word[pos]), &mut succ);
            }
            machine.successors(&config, None, &mut succ);
            let mut out = Vec::with_capacity(succ.len());
            for (label, next) in succ.drain(..) {
                if machine.depth(&next) > cap {
                    continue;
                }
                let target = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        if nodes.len() >= limits.max_configs {
                            return Err(Error::LimitExceeded {
                                visited: nodes.len(),
                                cap: limits.max_configs,
                            });
                        }
                        let t = nodes.len();
                        index.insert(next.clone(), t);
                        nodes.push(next);
                        edges.push(Vec::new());
                        queue.push_back(t);
                        t
                    }
                };
                out.push((label, target));
            }
            out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| nodes[a.1].cmp(&nodes[b.1])));
            out.dedup();
            edges[id] = out;
        }

        for c in &nodes {
            accepting.push(machine.position(c) == word.len() && machine.is_accepting(c));
        }

        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for (from, outs) in edges.iter().enumerate() {
            for &(_, to) in outs {
                reverse[to].push(from);
            }
        }
        let mut live = accepting.clone();
        let mut stack: Vec<usize> = (0..nodes.len()).filter(|&i| accepting[i]).collect();
        while let Some(n) = stack.pop() {
            for &p in &reverse[n] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }

        Ok(ConfigGraph {
            nodes,
            edges,
            accepting,
            live,
        })
    }

    pub fn accepts(&self) -> bool {
        self.live[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn configs(&self) -> &[M::Config] {
        &self.nodes
    }

    /// Accepting paths in lexicographic order of their label sequences, at
    /// most `cap` of them. Paths never revisit a configuration.
    pub fn accepting_paths(&self, cap: usize) -> Vec<Path<M::Config, M::Label>> {
        let mut found = Vec::new();
        if cap == 0 || !self.accepts() {
            return found;
        }
        let mut on_path = vec![false; self.nodes.len()];
        let mut trail: Vec<(M::Label, usize)> = Vec::new();
        self.walk(0, &mut on_path, &mut trail, cap, &mut found);
        found
    }

    fn walk(
        &self,
        node: usize,
        on_path: &mut Vec<bool>,
        trail: &mut Vec<(M::Label, usize)>,
        cap: usize,
        found: &mut Vec<Path<M::Config, M::Label>>,
    ) {
        if self.accepting[node] {
            found.push(Path {
                initial: self.nodes[0].clone(),
                steps: trail.iter().map(|(l, n)| (l.clone(), self.nodes[*n].clone())).collect(),
            });
            if found.len() >= cap {
                return;
            }
        }
        on_path[node] = true;
        for (label, next) in &self.edges[node] {
            if !self.live[*next] || on_path[*next] {
                continue;
            }
            trail.push((label.clone(), *next));
            self.walk(*next, on_path, trail, cap, found);
            trail.pop();
            if found.len() >= cap {
                break;
            }
        }
        on_path[node] = false;
    }
}

/// Whether `machine` accepts `word`, with the lexicographically first
/// accepting path as witness.
pub fn accepts<M: Machine>(
    machine: &M,
    word: &[char],
    limits: SearchLimits,
) -> Result<Option<Path<M::Config, M::Label>>> {
    let graph = ConfigGraph::explore(machine, word, limits)?;
    Ok(graph.accepting_paths(1).into_iter().next())
}

pub fn accepting_paths<M: Machine>(
    machine: &M,
    word: &[char],
    cap: usize,
    limits: SearchLimits,
) -> Result<Vec<Path<M::Config, M::Label>>> {
    Ok(ConfigGraph::explore(machine, word, limits)?.accepting_paths(cap))
}

/// All accepted words of length at most `max_len`.
pub fn language<M: Machine>(machine: &M, max_len: usize, limits: SearchLimits) -> Result<BTreeSet<String>> {
    language_with(machine, max_len, limits, |_, _| {})
}

/// Language enumeration by depth-first search over prefixes. Each prefix
/// carries the ε-closed set of configurations reachable on it; prefixes
/// with an empty set are pruned. `visit` sees every configuration placed in
/// a frontier together with the label of the move that produced it.
pub fn language_with<M, F>(machine: &M, max_len: usize, limits: SearchLimits, mut visit: F) -> Result<BTreeSet<String>>
where
    M: Machine,
    F: FnMut(Option<&M::Label>, &M::Config),
{
    let cap = machine.depth_cap(max_len);
    let mut accepted = BTreeSet::new();
    let init = machine.initial();
    visit(None, &init);
    let frontier = closure(machine, vec![init], cap, limits, &mut visit)?;
    let mut prefix = String::new();
    grow(
        machine,
        &frontier,
        &mut prefix,
        max_len,
        cap,
        limits,
        &mut visit,
        &mut accepted,
    )?;
    Ok(accepted)
}

#[allow(clippy::too_many_arguments)]
fn grow<M, F>(
    machine: &M,
    frontier: &[M::Config],
    prefix: &mut String,
    remaining: usize,
    cap: usize,
    limits: SearchLimits,
    visit: &mut F,
    accepted: &mut BTreeSet<String>,
) -> Result<()>
where
    M: Machine,
    F: FnMut(Option<&M::Label>, &M::Config),
{
    if frontier.iter().any(|c| machine.is_accepting(c)) {
        accepted.insert(prefix.clone());
    }
    if remaining == 0 {
        return Ok(());
    }
    let mut succ = Vec::new();
    for &symbol in machine.alphabet() {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for config in frontier {
            succ.clear();
            machine.successors(config, Some(symbol), &mut succ);
            for (label, c) in succ.drain(..) {
                if machine.depth(&c) <= cap && seen.insert(c.clone()) {
                    visit(Some(&label), &c);
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            continue;
        }
        let next = closure(machine, next, cap, limits, visit)?;
        prefix.push(symbol);
        grow(machine, &next, prefix, remaining - 1, cap, limits, visit, accepted)?;
        prefix.pop();
    }
    Ok(())
}

fn closure<M, F>(
    machine: &M,
    start: Vec<M::Config>,
    cap: usize,
    limits: SearchLimits,
    visit: &mut F,
) -> Result<Vec<M::Config>>
where
    M: Machine,
    F: FnMut(Option<&M::Label>, &M::Config),
{
    let mut seen: HashSet<M::Config> = start.iter().cloned().collect();
    let mut all = start.clone();
    let mut work = start;
    let mut succ = Vec::new();
    while let Some(c) = work.pop() {
        succ.clear();
        machine.successors(&c, None, &mut succ);
        for (label, n) in succ.drain(..) {
            if machine.depth(&n) <= cap && seen.insert(n.clone()) {
                if seen.len() > limits.max_configs {
                    return Err(Error::LimitExceeded {
                        visited: seen.len(),
                        cap: limits.max_configs,
                    });
                }
                visit(Some(&label), &n);
                all.push(n.clone());
                work.push(n);
            }
        }
    }
    if all.len() > limits.max_configs {
        return Err(Error::LimitExceeded {
            visited: all.len(),
            cap: limits.max_configs,
        });
    }
    Ok(all)
}
