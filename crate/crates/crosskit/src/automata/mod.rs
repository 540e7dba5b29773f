//! Finite-automata substrate: epsilon-free NFAs, trim partial DFAs, the
//! standard constructions (determinization, minimization, boolean
//! operations), canonical serialized forms, and language-level factor
//! extraction.
//!
//! Trim partial machines are the default everywhere; completion with an
//! explicit sink happens only inside complementation. Alphabets are capped at
//! 64 symbols.

mod regex;
pub(crate) mod serial;

pub use regex::{parse_regex, regex_to_nfa, Regex};
pub use serial::{from_json, to_dot, to_json};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Error;
use crate::words::{Symbol, Word};

pub type StateId = usize;

const MAX_ALPHABET: usize = 64;

/// Epsilon-free nondeterministic finite automaton with any number of start
/// states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    state_count: usize,
    alphabet: BTreeSet<Symbol>,
    starts: BTreeSet<StateId>,
    accepts: BTreeSet<StateId>,
    transitions: BTreeSet<(StateId, Symbol, StateId)>,
}

impl Nfa {
    pub fn new(
        state_count: usize,
        alphabet: BTreeSet<Symbol>,
        starts: BTreeSet<StateId>,
        accepts: BTreeSet<StateId>,
        transitions: BTreeSet<(StateId, Symbol, StateId)>,
    ) -> Result<Self, Error> {
        if alphabet.len() > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge);
        }
        for &s in starts.iter().chain(accepts.iter()) {
            if s >= state_count {
                return Err(Error::schema("states", "start/accept state out of range"));
            }
        }
        for &(p, a, q) in &transitions {
            if p >= state_count || q >= state_count {
                return Err(Error::schema("transitions", "endpoint out of range"));
            }
            if !alphabet.contains(&a) {
                return Err(Error::schema("transitions", "label not in alphabet"));
            }
        }
        Ok(Nfa {
            state_count,
            alphabet,
            starts,
            accepts,
            transitions,
        })
    }

    /// The automaton of the empty language over the given alphabet.
    pub fn empty(alphabet: BTreeSet<Symbol>) -> Self {
        Nfa {
            state_count: 0,
            alphabet,
            starts: BTreeSet::new(),
            accepts: BTreeSet::new(),
            transitions: BTreeSet::new(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn starts(&self) -> &BTreeSet<StateId> {
        &self.starts
    }

    pub fn accepts_set(&self) -> &BTreeSet<StateId> {
        &self.accepts
    }

    pub fn transitions(&self) -> &BTreeSet<(StateId, Symbol, StateId)> {
        &self.transitions
    }

    /// Symbols that actually label a transition.
    pub fn used_alphabet(&self) -> BTreeSet<Symbol> {
        self.transitions.iter().map(|&(_, a, _)| a).collect()
    }

    fn adjacency(&self) -> BTreeMap<(StateId, Symbol), Vec<StateId>> {
        let mut map: BTreeMap<(StateId, Symbol), Vec<StateId>> = BTreeMap::new();
        for &(p, a, q) in &self.transitions {
            map.entry((p, a)).or_default().push(q);
        }
        map
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let adj = self.adjacency();
        let mut current: BTreeSet<StateId> = self.starts.clone();
        for &s in w.symbols() {
            let mut next = BTreeSet::new();
            for &p in &current {
                if let Some(qs) = adj.get(&(p, s)) {
                    next.extend(qs.iter().copied());
                }
            }
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.iter().any(|s| self.accepts.contains(s))
    }

    pub fn accepts_epsilon(&self) -> bool {
        self.starts.iter().any(|s| self.accepts.contains(s))
    }

    fn forward_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count];
        let mut queue: VecDeque<StateId> = self.starts.iter().copied().collect();
        for &s in &self.starts {
            seen[s] = true;
        }
        let mut out: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
        for &(p, _, q) in &self.transitions {
            out.entry(p).or_default().push(q);
        }
        while let Some(p) = queue.pop_front() {
            if let Some(qs) = out.get(&p) {
                for &q in qs {
                    if !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        seen
    }

    fn backward_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count];
        let mut queue: VecDeque<StateId> = self.accepts.iter().copied().collect();
        for &s in &self.accepts {
            seen[s] = true;
        }
        let mut inc: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
        for &(p, _, q) in &self.transitions {
            inc.entry(q).or_default().push(p);
        }
        while let Some(q) = queue.pop_front() {
            if let Some(ps) = inc.get(&q) {
                for &p in ps {
                    if !seen[p] {
                        seen[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
        seen
    }

    /// Removes states that are not both accessible and co-accessible,
    /// renumbering the survivors in increasing old-id order. The declared
    /// alphabet is kept.
    pub fn trim(&self) -> Nfa {
        let fwd = self.forward_reachable();
        let bwd = self.backward_reachable();
        let keep: Vec<StateId> = (0..self.state_count)
            .filter(|&s| fwd[s] && bwd[s])
            .collect();
        let mut remap: BTreeMap<StateId, StateId> = BTreeMap::new();
        for (new, &old) in keep.iter().enumerate() {
            remap.insert(old, new);
        }
        Nfa {
            state_count: keep.len(),
            alphabet: self.alphabet.clone(),
            starts: self
                .starts
                .iter()
                .filter_map(|s| remap.get(s).copied())
                .collect(),
            accepts: self
                .accepts
                .iter()
                .filter_map(|s| remap.get(s).copied())
                .collect(),
            transitions: self
                .transitions
                .iter()
                .filter_map(|&(p, a, q)| match (remap.get(&p), remap.get(&q)) {
                    (Some(&p2), Some(&q2)) => Some((p2, a, q2)),
                    _ => None,
                })
                .collect(),
        }
    }

    pub fn is_empty_lang(&self) -> bool {
        self.trim().accepts_set().is_empty()
    }

    /// True when the accepted language is finite, decided by cycle search on
    /// the trim automaton.
    pub fn is_finite_lang(&self) -> bool {
        let t = self.trim();
        // Kahn style: a trim automaton accepts an infinite language iff it
        // has any cycle.
        let mut indeg = vec![0usize; t.state_count];
        for &(_, _, q) in &t.transitions {
            indeg[q] += 1;
        }
        let mut queue: VecDeque<StateId> = (0..t.state_count).filter(|&s| indeg[s] == 0).collect();
        let mut removed = 0;
        let mut out: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
        for &(p, _, q) in &t.transitions {
            out.entry(p).or_default().push(q);
        }
        while let Some(p) = queue.pop_front() {
            removed += 1;
            if let Some(qs) = out.get(&p) {
                for &q in qs {
                    indeg[q] -= 1;
                    if indeg[q] == 0 {
                        queue.push_back(q);
                    }
                }
            }
        }
        removed == t.state_count
    }

    /// Subset construction. Only reachable subsets are materialised; the
    /// result is a partial DFA discovered in breadth-first order over the
    /// sorted alphabet.
    pub fn determinize(&self) -> Dfa {
        if self.starts.is_empty() {
            return Dfa::empty(self.alphabet.clone());
        }
        let adj = self.adjacency();
        let symbols: Vec<Symbol> = self.alphabet.iter().copied().collect();
        let mut ids: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::new();
        let mut subsets: Vec<BTreeSet<StateId>> = Vec::new();
        let mut transitions: BTreeMap<(StateId, Symbol), StateId> = BTreeMap::new();
        let start_set = self.starts.clone();
        ids.insert(start_set.clone(), 0);
        subsets.push(start_set);
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let subset = subsets[id].clone();
            for &a in &symbols {
                let mut next = BTreeSet::new();
                for &p in &subset {
                    if let Some(qs) = adj.get(&(p, a)) {
                        next.extend(qs.iter().copied());
                    }
                }
                if next.is_empty() {
                    continue;
                }
                let next_id = *ids.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next.clone());
                    queue.push_back(subsets.len() - 1);
                    subsets.len() - 1
                });
                transitions.insert((id, a), next_id);
            }
        }
        let accepts = subsets
            .iter()
            .enumerate()
            .filter(|(_, sub)| sub.iter().any(|s| self.accepts.contains(s)))
            .map(|(i, _)| i)
            .collect();
        Dfa {
            state_count: subsets.len(),
            alphabet: self.alphabet.clone(),
            start: Some(0),
            accepts,
            transitions,
        }
    }
}

/// Deterministic finite automaton with a partial transition function. The
/// start is absent exactly when the language is empty and the machine has no
/// states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    state_count: usize,
    alphabet: BTreeSet<Symbol>,
    start: Option<StateId>,
    accepts: BTreeSet<StateId>,
    transitions: BTreeMap<(StateId, Symbol), StateId>,
}

impl Dfa {
    pub fn new(
        state_count: usize,
        alphabet: BTreeSet<Symbol>,
        start: Option<StateId>,
        accepts: BTreeSet<StateId>,
        transitions: BTreeMap<(StateId, Symbol), StateId>,
    ) -> Result<Self, Error> {
        if alphabet.len() > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge);
        }
        if let Some(s) = start {
            if s >= state_count {
                return Err(Error::schema("start", "state out of range"));
            }
        }
        for (&(p, a), &q) in &transitions {
            if p >= state_count || q >= state_count {
                return Err(Error::schema("transitions", "endpoint out of range"));
            }
            if !alphabet.contains(&a) {
                return Err(Error::schema("transitions", "label not in alphabet"));
            }
        }
        for &s in &accepts {
            if s >= state_count {
                return Err(Error::schema("accept", "state out of range"));
            }
        }
        Ok(Dfa {
            state_count,
            alphabet,
            start,
            accepts,
            transitions,
        })
    }

    pub fn empty(alphabet: BTreeSet<Symbol>) -> Self {
        Dfa {
            state_count: 0,
            alphabet,
            start: None,
            accepts: BTreeSet::new(),
            transitions: BTreeMap::new(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn start(&self) -> Option<StateId> {
        self.start
    }

    pub fn accepts_set(&self) -> &BTreeSet<StateId> {
        &self.accepts
    }

    pub fn transitions(&self) -> &BTreeMap<(StateId, Symbol), StateId> {
        &self.transitions
    }

    pub fn step(&self, state: StateId, sym: Symbol) -> Option<StateId> {
        self.transitions.get(&(state, sym)).copied()
    }

    pub fn step_word(&self, state: StateId, w: &Word) -> Option<StateId> {
        let mut cur = state;
        for &s in w.symbols() {
            cur = self.step(cur, s)?;
        }
        Some(cur)
    }

    pub fn accepts(&self, w: &Word) -> bool {
        match self.start {
            None => false,
            Some(s) => match self.step_word(s, w) {
                Some(t) => self.accepts.contains(&t),
                None => false,
            },
        }
    }

    pub fn accepts_epsilon(&self) -> bool {
        matches!(self.start, Some(s) if self.accepts.contains(&s))
    }

    pub fn as_nfa(&self) -> Nfa {
        Nfa {
            state_count: self.state_count,
            alphabet: self.alphabet.clone(),
            starts: self.start.into_iter().collect(),
            accepts: self.accepts.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|(&(p, a), &q)| (p, a, q))
                .collect(),
        }
    }

    pub fn trim(&self) -> Dfa {
        let t = self.as_nfa().trim();
        Dfa {
            state_count: t.state_count,
            alphabet: t.alphabet,
            start: t.starts.iter().next().copied(),
            accepts: t.accepts,
            transitions: t
                .transitions
                .into_iter()
                .map(|(p, a, q)| ((p, a), q))
                .collect(),
        }
    }
}

/// Hopcroft-style partition refinement on the trim partial DFA, followed by
/// breadth-first canonical renumbering over the sorted alphabet. Equal
/// languages yield byte-identical serializations; the declared alphabet is
/// normalised to the symbols the minimal machine actually uses.
pub fn minimize_canonical(dfa: &Dfa) -> Dfa {
    let t = dfa.trim();
    if t.state_count == 0 {
        return Dfa::empty(BTreeSet::new());
    }
    let symbols: Vec<Symbol> = t.alphabet.iter().copied().collect();

    // Moore refinement with an implicit dead class for missing transitions.
    let mut class: Vec<usize> = (0..t.state_count)
        .map(|s| usize::from(t.accepts.contains(&s)))
        .collect();
    loop {
        let mut signature_ids: BTreeMap<(usize, Vec<Option<usize>>), usize> = BTreeMap::new();
        let mut next_class = vec![0usize; t.state_count];
        for s in 0..t.state_count {
            let sig: Vec<Option<usize>> = symbols
                .iter()
                .map(|&a| t.step(s, a).map(|q| class[q]))
                .collect();
            let key = (class[s], sig);
            let n = signature_ids.len();
            next_class[s] = *signature_ids.entry(key).or_insert(n);
        }
        if next_class == class {
            break;
        }
        class = next_class;
    }

    // Merge classes, then renumber canonically by BFS over sorted symbols.
    let start_class = class[t.start.expect("trim non-empty has a start")];
    let mut merged_transitions: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    let mut merged_accepts: BTreeSet<usize> = BTreeSet::new();
    for s in 0..t.state_count {
        if t.accepts.contains(&s) {
            merged_accepts.insert(class[s]);
        }
        for &a in &symbols {
            if let Some(q) = t.step(s, a) {
                merged_transitions.insert((class[s], a), class[q]);
            }
        }
    }

    let mut order: BTreeMap<usize, usize> = BTreeMap::new();
    order.insert(start_class, 0);
    let mut queue = VecDeque::from([start_class]);
    while let Some(c) = queue.pop_front() {
        for &a in &symbols {
            if let Some(&q) = merged_transitions.get(&(c, a)) {
                if !order.contains_key(&q) {
                    order.insert(q, order.len());
                    queue.push_back(q);
                }
            }
        }
    }

    let transitions: BTreeMap<(StateId, Symbol), StateId> = merged_transitions
        .iter()
        .map(|(&(p, a), &q)| ((order[&p], a), order[&q]))
        .collect();
    let used: BTreeSet<Symbol> = transitions.keys().map(|&(_, a)| a).collect();
    Dfa {
        state_count: order.len(),
        alphabet: used,
        start: Some(0),
        accepts: merged_accepts.iter().map(|c| order[c]).collect(),
        transitions,
    }
}

/// Trim, determinize and canonically minimize in one go.
pub fn canonical_dfa(nfa: &Nfa) -> Dfa {
    minimize_canonical(&nfa.trim().determinize())
}

/// Completes the determinized automaton over `alphabet` and flips accepting
/// states.
pub fn complement(nfa: &Nfa, alphabet: &BTreeSet<Symbol>) -> Nfa {
    let mut full_alphabet = nfa.alphabet.clone();
    full_alphabet.extend(alphabet.iter().copied());
    let d = Nfa {
        alphabet: full_alphabet.clone(),
        ..nfa.clone()
    }
    .determinize();
    // Complete with a sink; state ids shift by one so the sink can be 0.
    let n = d.state_count;
    let sink = n;
    let mut transitions: BTreeSet<(StateId, Symbol, StateId)> = BTreeSet::new();
    for &a in &full_alphabet {
        for s in 0..n {
            match d.step(s, a) {
                Some(q) => {
                    transitions.insert((s, a, q));
                }
                None => {
                    transitions.insert((s, a, sink));
                }
            }
        }
        transitions.insert((sink, a, sink));
    }
    let accepts: BTreeSet<StateId> = (0..=n)
        .filter(|&s| s == sink || !d.accepts.contains(&s))
        .collect();
    let starts: BTreeSet<StateId> = match d.start {
        Some(s) => BTreeSet::from([s]),
        // Empty automaton: the complement accepts everything over the alphabet.
        None => BTreeSet::from([sink]),
    };
    let nfa = Nfa {
        state_count: n + 1,
        alphabet: full_alphabet,
        starts,
        accepts,
        transitions,
    };
    nfa.trim()
}

/// Product automaton for the intersection.
pub fn intersect(a: &Nfa, b: &Nfa) -> Nfa {
    let mut alphabet = a.alphabet.clone();
    alphabet.extend(b.alphabet.iter().copied());
    let adj_b = b.adjacency();
    let mut ids: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
    let mut transitions = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &p in &a.starts {
        for &q in &b.starts {
            let n = ids.len();
            ids.entry((p, q)).or_insert_with(|| {
                queue.push_back((p, q));
                n
            });
        }
    }
    let adj_a = a.adjacency();
    while let Some((p, q)) = queue.pop_front() {
        let id = ids[&(p, q)];
        for &sym in &alphabet {
            if let (Some(ps), Some(qs)) = (adj_a.get(&(p, sym)), adj_b.get(&(q, sym))) {
                for &p2 in ps {
                    for &q2 in qs {
                        let n = ids.len();
                        let id2 = *ids.entry((p2, q2)).or_insert_with(|| {
                            queue.push_back((p2, q2));
                            n
                        });
                        transitions.insert((id, sym, id2));
                    }
                }
            }
        }
    }
    let starts: BTreeSet<StateId> = a
        .starts
        .iter()
        .flat_map(|&p| b.starts.iter().map(move |&q| (p, q)))
        .filter_map(|k| ids.get(&k).copied())
        .collect();
    let accepts: BTreeSet<StateId> = ids
        .iter()
        .filter(|((p, q), _)| a.accepts.contains(p) && b.accepts.contains(q))
        .map(|(_, &id)| id)
        .collect();
    Nfa {
        state_count: ids.len(),
        alphabet,
        starts,
        accepts,
        transitions,
    }
    .trim()
}

/// Disjoint union.
pub fn union(a: &Nfa, b: &Nfa) -> Nfa {
    let mut alphabet = a.alphabet.clone();
    alphabet.extend(b.alphabet.iter().copied());
    let off = a.state_count;
    let mut transitions = a.transitions.clone();
    transitions.extend(b.transitions.iter().map(|&(p, s, q)| (p + off, s, q + off)));
    let mut starts = a.starts.clone();
    starts.extend(b.starts.iter().map(|&s| s + off));
    let mut accepts = a.accepts.clone();
    accepts.extend(b.accepts.iter().map(|&s| s + off));
    Nfa {
        state_count: a.state_count + b.state_count,
        alphabet,
        starts,
        accepts,
        transitions,
    }
}

/// Epsilon-free concatenation: transitions entering an accept state of `a`
/// are duplicated to enter the start states of `b`.
pub fn concat(a: &Nfa, b: &Nfa) -> Nfa {
    let mut alphabet = a.alphabet.clone();
    alphabet.extend(b.alphabet.iter().copied());
    let off = a.state_count;
    let mut transitions = a.transitions.clone();
    transitions.extend(b.transitions.iter().map(|&(p, s, q)| (p + off, s, q + off)));
    for &(p, s, q) in &a.transitions {
        if a.accepts.contains(&q) {
            for &bs in &b.starts {
                transitions.insert((p, s, bs + off));
            }
        }
    }
    let mut starts = a.starts.clone();
    if a.accepts_epsilon() {
        starts.extend(b.starts.iter().map(|&s| s + off));
    }
    let mut accepts: BTreeSet<StateId> = b.accepts.iter().map(|&s| s + off).collect();
    if b.accepts_epsilon() {
        accepts.extend(a.accepts.iter().copied());
    }
    Nfa {
        state_count: a.state_count + b.state_count,
        alphabet,
        starts,
        accepts,
        transitions,
    }
    .trim()
}

/// Result of an inclusion check; `witness` is the shortest word (canonical
/// order) of the smaller side missing from the larger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inclusion {
    pub holds: bool,
    pub witness: Option<Word>,
}

/// Does `sup` include `sub` (language containment `sub ⊆ sup`)? The witness,
/// if any, is the canonical-least member of `sub` not in `sup`.
pub fn includes(sup: &Nfa, sub: &Nfa) -> Inclusion {
    let comp = complement(
        sup,
        &sub.alphabet().union(sup.alphabet()).copied().collect(),
    );
    let diff = intersect(sub, &comp);
    match shortest_member(&diff) {
        Some(w) => Inclusion {
            holds: false,
            witness: Some(w),
        },
        None => Inclusion {
            holds: true,
            witness: None,
        },
    }
}

/// Language equality.
pub fn equivalent(a: &Nfa, b: &Nfa) -> bool {
    includes(a, b).holds && includes(b, a).holds
}

/// The canonical-least accepted word, if any.
pub fn shortest_member(nfa: &Nfa) -> Option<Word> {
    let t = nfa.trim();
    if t.starts.is_empty() {
        return None;
    }
    if t.accepts_epsilon() {
        return Some(Word::empty());
    }
    let d = t.determinize();
    // BFS over the determinized machine; expanding symbols in sorted order
    // discovers every state through its shortlex-least access word.
    let mut parent: BTreeMap<StateId, (StateId, Symbol)> = BTreeMap::new();
    let mut seen = BTreeSet::from([d.start?]);
    let mut queue = VecDeque::from([d.start?]);
    let symbols: Vec<Symbol> = d.alphabet.iter().copied().collect();
    while let Some(p) = queue.pop_front() {
        for &a in &symbols {
            if let Some(q) = d.step(p, a) {
                if seen.insert(q) {
                    parent.insert(q, (p, a));
                    if d.accepts_set().contains(&q) {
                        let mut syms = Vec::new();
                        let mut cur = q;
                        while let Some(&(prev, sym)) = parent.get(&cur) {
                            syms.push(sym);
                            cur = prev;
                        }
                        syms.reverse();
                        return Some(Word::from_symbols(syms));
                    }
                    queue.push_back(q);
                }
            }
        }
    }
    None
}

/// Accepted words of length at most `n`, in canonical order.
pub fn enumerate_upto(nfa: &Nfa, n: usize) -> BTreeSet<Word> {
    let d = nfa.trim().determinize();
    let mut out = BTreeSet::new();
    let start = match d.start {
        Some(s) => s,
        None => return out,
    };
    // Distance to the nearest accept, for pruning.
    let mut dist = vec![usize::MAX; d.state_count];
    let mut queue: VecDeque<StateId> = d.accepts.iter().copied().collect();
    for &s in &d.accepts {
        dist[s] = 0;
    }
    let mut inc: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
    for (&(p, _), &q) in &d.transitions {
        inc.entry(q).or_default().push(p);
    }
    while let Some(q) = queue.pop_front() {
        if let Some(ps) = inc.get(&q) {
            for &p in ps {
                if dist[p] == usize::MAX {
                    dist[p] = dist[q] + 1;
                    queue.push_back(p);
                }
            }
        }
    }
    let symbols: Vec<Symbol> = d.alphabet.iter().copied().collect();
    let mut stack: Vec<Symbol> = Vec::new();
    fn walk(
        d: &Dfa,
        symbols: &[Symbol],
        dist: &[usize],
        state: StateId,
        n: usize,
        stack: &mut Vec<Symbol>,
        out: &mut BTreeSet<Word>,
    ) {
        if d.accepts_set().contains(&state) {
            out.insert(Word::from_symbols(stack.iter().copied()));
        }
        if stack.len() == n {
            return;
        }
        for &a in symbols {
            if let Some(q) = d.step(state, a) {
                if dist[q] != usize::MAX && dist[q] <= n - stack.len() - 1 {
                    stack.push(a);
                    walk(d, symbols, dist, q, n, stack, out);
                    stack.pop();
                }
            }
        }
    }
    walk(&d, &symbols, &dist, start, n, &mut stack, &mut out);
    out
}

/// Length-2 factors of the language plus its one-symbol members (the 2-block
/// convention), computed on the trim automaton.
pub fn lang_two_blocks(nfa: &Nfa) -> BTreeSet<Word> {
    let t = nfa.trim();
    let mut out = BTreeSet::new();
    let mut by_source: BTreeMap<StateId, Vec<(Symbol, StateId)>> = BTreeMap::new();
    for &(p, a, q) in &t.transitions {
        by_source.entry(p).or_default().push((a, q));
    }
    for &(_, a, q) in &t.transitions {
        if let Some(next) = by_source.get(&q) {
            for &(b, _) in next {
                out.insert(Word::from_symbols([a, b]));
            }
        }
    }
    out.extend(lang_units(&t));
    out
}

/// First symbols of member words.
pub fn lang_first_symbols(nfa: &Nfa) -> BTreeSet<Symbol> {
    let t = nfa.trim();
    t.transitions
        .iter()
        .filter(|(p, _, _)| t.starts.contains(p))
        .map(|&(_, a, _)| a)
        .collect()
}

/// Last symbols of member words.
pub fn lang_last_symbols(nfa: &Nfa) -> BTreeSet<Symbol> {
    let t = nfa.trim();
    t.transitions
        .iter()
        .filter(|(_, _, q)| t.accepts.contains(q))
        .map(|&(_, a, _)| a)
        .collect()
}

/// Member words of length one.
pub fn lang_units(nfa: &Nfa) -> BTreeSet<Word> {
    let t = nfa.trim();
    t.transitions
        .iter()
        .filter(|(p, _, q)| t.starts.contains(p) && t.accepts.contains(q))
        .map(|&(_, a, _)| Word::from_symbols([a]))
        .collect()
}

/// States reachable from `state` by reading `x` in the trim automaton.
fn x_path_targets(
    adj: &BTreeMap<(StateId, Symbol), Vec<StateId>>,
    state: StateId,
    x: &Word,
) -> BTreeSet<StateId> {
    let mut cur = BTreeSet::from([state]);
    for &s in x.symbols() {
        let mut next = BTreeSet::new();
        for &p in &cur {
            if let Some(qs) = adj.get(&(p, s)) {
                next.extend(qs.iter().copied());
            }
        }
        if next.is_empty() {
            return next;
        }
        cur = next;
    }
    cur
}

/// Automaton of `{ u : u·x·u' ∈ L }`: accepts are re-designated to the states
/// from which an `x`-path exists in the trim automaton.
pub fn prefix_lang(nfa: &Nfa, x: &Word) -> Result<Nfa, Error> {
    if x.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let t = nfa.trim();
    let adj = t.adjacency();
    let accepts: BTreeSet<StateId> = (0..t.state_count)
        .filter(|&p| !x_path_targets(&adj, p, x).is_empty())
        .collect();
    Ok(Nfa { accepts, ..t }.trim())
}

/// Automaton of `{ s : s'·x·s ∈ L }`: starts are re-designated to the targets
/// of `x`-paths in the trim automaton.
pub fn suffix_lang(nfa: &Nfa, x: &Word) -> Result<Nfa, Error> {
    if x.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let t = nfa.trim();
    let adj = t.adjacency();
    let mut starts = BTreeSet::new();
    for p in 0..t.state_count {
        starts.extend(x_path_targets(&adj, p, x));
    }
    Ok(Nfa { starts, ..t }.trim())
}

/// Single-word automaton.
pub fn word_automaton(w: &Word) -> Nfa {
    let n = w.len();
    Nfa {
        state_count: n + 1,
        alphabet: w.alphabet(),
        starts: BTreeSet::from([0]),
        accepts: BTreeSet::from([n]),
        transitions: w
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, &s)| (i, s, i + 1))
            .collect(),
    }
}

/// Automaton of a finite word set.
pub fn finite_language_automaton<'a>(words: impl IntoIterator<Item = &'a Word>) -> Nfa {
    let mut acc: Option<Nfa> = None;
    for w in words {
        let next = word_automaton(w);
        acc = Some(match acc {
            Some(a) => union(&a, &next),
            None => next,
        });
    }
    acc.unwrap_or_else(|| Nfa::empty(BTreeSet::new()))
}

/// Automaton of `S·Σ*·E` over the given alphabet.
pub fn first_last_automaton(
    starts_syms: &BTreeSet<Symbol>,
    ends_syms: &BTreeSet<Symbol>,
    alphabet: &BTreeSet<Symbol>,
) -> Nfa {
    let mut transitions = BTreeSet::new();
    for &s in starts_syms {
        transitions.insert((0, s, 1));
    }
    for &a in alphabet {
        transitions.insert((1, a, 1));
    }
    for &e in ends_syms {
        transitions.insert((1, e, 2));
    }
    Nfa {
        state_count: 3,
        alphabet: alphabet.clone(),
        starts: BTreeSet::from([0]),
        accepts: BTreeSet::from([2]),
        transitions,
    }
    .trim()
}

/// Automaton of all non-empty words over the alphabet.
pub fn sigma_plus(alphabet: &BTreeSet<Symbol>) -> Nfa {
    let mut transitions = BTreeSet::new();
    for &a in alphabet {
        transitions.insert((0, a, 1));
        transitions.insert((1, a, 1));
    }
    Nfa {
        state_count: 2,
        alphabet: alphabet.clone(),
        starts: BTreeSet::from([0]),
        accepts: BTreeSet::from([1]),
        transitions,
    }
}
