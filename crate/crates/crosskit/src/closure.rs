//! Exact crossover closure as a finite automaton, single-step crossover on
//! regular languages, block-profile machinery, base-set extraction and the
//! decomposition check.
//!
//! The closure automaton starts from positions inside the axiom words (or
//! from the trim DFA of a regular language) and adds per-rule detours: after
//! completing an occurrence of a rule word, control may continue just past
//! any other occurrence of it. Detours for multi-symbol rules run through a
//! shared rail of fresh chain states; entry and exit edges are saturated to a
//! fixpoint so that occurrences created by earlier detours are honoured too.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::automata::{
    self, canonical_dfa, finite_language_automaton, first_last_automaton, intersect, union, Dfa,
    Nfa, StateId,
};
use crate::error::Error;
use crate::finlang::FiniteLanguage;
use crate::words::{Mode, OccurrenceRef, RuleSet, Symbol, Word};

/// The triple parameterizing the right-invariant equivalence classes behind
/// the regularity of closures: first symbol, exact 2-block set, last symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BlockProfile {
    pub first: Symbol,
    pub blocks: BTreeSet<Word>,
    pub last: Symbol,
}

/// The profile of a non-empty word.
pub fn block_profile(w: &Word) -> Result<BlockProfile, Error> {
    let first = w.first().ok_or(Error::EmptyWord)?;
    Ok(BlockProfile {
        first,
        blocks: w.two_blocks(),
        last: w.last().expect("non-empty word"),
    })
}

/// DFA of `{ w : block_profile(w) = p }`: words over the profile's blocks
/// that start and end as prescribed and use every block at least once.
pub fn profile_automaton(p: &BlockProfile, alphabet: &BTreeSet<Symbol>) -> Result<Dfa, Error> {
    // One-symbol convention: blocks = {first} with first == last.
    let singleton = p.blocks.len() == 1 && {
        let b = p.blocks.iter().next().expect("non-empty set");
        b.len() == 1
    };
    if singleton {
        let b = p.blocks.iter().next().expect("non-empty set");
        if b.first() != Some(p.first) || p.first != p.last {
            return Err(Error::InconsistentProfile);
        }
        let nfa = finite_language_automaton([&Word::from_symbols([p.first])]);
        return Ok(canonical_dfa(&nfa));
    }
    if p.blocks.is_empty() || p.blocks.iter().any(|b| b.len() != 2) {
        return Err(Error::InconsistentProfile);
    }
    if p.blocks.len() > 63 {
        return Err(Error::AlphabetTooLarge);
    }

    let blocks: Vec<&Word> = p.blocks.iter().collect();
    let block_index = |a: Symbol, b: Symbol| -> Option<usize> {
        blocks.iter().position(|w| w.symbols() == [a, b].as_slice())
    };
    // States: (last symbol read, set of blocks seen) after at least one
    // symbol, plus a fresh initial state.
    type Key = (Symbol, u64);
    let full: u64 = (1u64 << blocks.len()) - 1;
    let mut ids: BTreeMap<Key, StateId> = BTreeMap::new();
    let mut transitions: BTreeMap<(StateId, Symbol), StateId> = BTreeMap::new();
    let init: StateId = 0;
    let mut next_id: StateId = 1;
    let mut queue: VecDeque<Key> = VecDeque::new();
    let start_key = (p.first, 0u64);
    ids.insert(start_key, next_id);
    next_id += 1;
    transitions.insert((init, p.first), ids[&start_key]);
    queue.push_back(start_key);
    while let Some((last, seen)) = queue.pop_front() {
        let id = ids[&(last, seen)];
        for &sym in alphabet {
            if let Some(bi) = block_index(last, sym) {
                let key = (sym, seen | (1 << bi));
                let target = *ids.entry(key).or_insert_with(|| {
                    queue.push_back(key);
                    let t = next_id;
                    next_id += 1;
                    t
                });
                transitions.insert((id, sym), target);
            }
        }
    }
    let accepts: BTreeSet<StateId> = ids
        .iter()
        .filter(|((last, seen), _)| *last == p.last && *seen == full)
        .map(|(_, &id)| id)
        .collect();
    let dfa = Dfa::new(next_id, alphabet.clone(), Some(init), accepts, transitions)?;
    let dfa = automata::minimize_canonical(&dfa);
    if dfa.start().is_none() {
        return Err(Error::InconsistentProfile);
    }
    Ok(dfa)
}

/// Number of profile equivalence classes over an `n`-symbol alphabet:
/// `n²·(2^(n²) − 1) + (n + 1)`.
pub fn count_profiles(n: u32) -> BigUint {
    let n_big = BigUint::from(n);
    let exp = u64::from(n) * u64::from(n);
    let two_pow = BigUint::from(1u8) << exp;
    &n_big * &n_big * (two_pow - 1u8) + n_big + 1u8
}

/// The base data of a language: length-2 blocks, first symbols, last symbols
/// and one-symbol member words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSets {
    pub blocks: BTreeSet<Word>,
    pub starts: BTreeSet<Symbol>,
    pub ends: BTreeSet<Symbol>,
    pub units: BTreeSet<Word>,
}

/// Base sets of a regular language, read off the trim automaton. The sets
/// are functions of the language alone.
pub fn extract_base(dfa: &Dfa) -> Result<BaseSets, Error> {
    let nfa = dfa.as_nfa();
    if nfa.trim().accepts_epsilon() {
        return Err(Error::EpsilonInLanguage);
    }
    let blocks = automata::lang_two_blocks(&nfa)
        .into_iter()
        .filter(|w| w.len() == 2)
        .collect();
    Ok(BaseSets {
        blocks,
        starts: automata::lang_first_symbols(&nfa),
        ends: automata::lang_last_symbols(&nfa),
        units: automata::lang_units(&nfa),
    })
}

/// Where a closure-automaton state comes from: a position inside an axiom
/// word, or a position along the rail inserted for one rule word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateOrigin {
    Axiom { axiom: usize, pos: usize },
    Rail { rule: usize, pos: usize },
}

/// A closure automaton together with the provenance needed to replay
/// derivations: the axioms, the resolved rule words, and per-state origins.
#[derive(Debug, Clone)]
pub struct JumpClosure {
    pub nfa: Nfa,
    pub axioms: Vec<Word>,
    pub rules: Vec<Word>,
    pub origins: Vec<StateOrigin>,
}

fn resolve_rules(rules: &RuleSet, alphabet: &BTreeSet<Symbol>) -> Vec<Word> {
    let mut v = rules.resolve(alphabet);
    v.sort();
    v.dedup();
    v
}

struct Saturator {
    state_count: usize,
    alphabet: BTreeSet<Symbol>,
    starts: BTreeSet<StateId>,
    accepts: BTreeSet<StateId>,
    edges: BTreeSet<(StateId, Symbol, StateId)>,
    rails: Vec<Vec<StateId>>,
}

impl Saturator {
    /// Adds one rail of `|x| - 1` chain states per multi-symbol rule, then
    /// saturates entry and exit edges: for every rule `x` with an `x`-path
    /// from an accessible state to a co-accessible one, every such start
    /// gains a detour onto the rail and the rail exits just past every such
    /// end. Single-symbol rules get direct edges. The state set is fixed
    /// after rail insertion, so edge addition reaches a fixpoint.
    fn new(base: &Nfa, rules: &[Word]) -> Saturator {
        let mut s = Saturator {
            state_count: base.state_count(),
            alphabet: base.alphabet().clone(),
            starts: base.starts().clone(),
            accepts: base.accepts_set().clone(),
            edges: base.transitions().clone(),
            rails: Vec::new(),
        };
        for x in rules {
            let mut rail = Vec::new();
            if x.len() >= 2 {
                for _ in 0..x.len() - 1 {
                    rail.push(s.state_count);
                    s.state_count += 1;
                }
                for k in 0..rail.len() - 1 {
                    s.edges.insert((rail[k], x.symbols()[k + 1], rail[k + 1]));
                }
            }
            s.rails.push(rail);
            s.alphabet.extend(x.alphabet());
        }
        s
    }

    fn reachable(&self, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.state_count];
        let seeds = if forward { &self.starts } else { &self.accepts };
        let mut queue: VecDeque<StateId> = seeds.iter().copied().collect();
        for &s in seeds {
            seen[s] = true;
        }
        let mut adj: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
        for &(p, _, q) in &self.edges {
            if forward {
                adj.entry(p).or_default().push(q);
            } else {
                adj.entry(q).or_default().push(p);
            }
        }
        while let Some(p) = queue.pop_front() {
            if let Some(qs) = adj.get(&p) {
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

    fn saturate(&mut self, rules: &[Word]) {
        loop {
            let before = self.edges.len();
            let acc = self.reachable(true);
            let coacc = self.reachable(false);
            let mut adj: BTreeMap<(StateId, Symbol), Vec<StateId>> = BTreeMap::new();
            for &(p, a, q) in &self.edges {
                adj.entry((p, a)).or_default().push(q);
            }
            let mut new_edges: Vec<(StateId, Symbol, StateId)> = Vec::new();
            for (ri, x) in rules.iter().enumerate() {
                let mut path_starts: Vec<StateId> = Vec::new();
                let mut path_ends: BTreeSet<StateId> = BTreeSet::new();
                for p in 0..self.state_count {
                    if !acc[p] {
                        continue;
                    }
                    let mut cur = BTreeSet::from([p]);
                    for &sym in x.symbols() {
                        let mut next = BTreeSet::new();
                        for &s in &cur {
                            if let Some(qs) = adj.get(&(s, sym)) {
                                next.extend(qs.iter().copied());
                            }
                        }
                        cur = next;
                        if cur.is_empty() {
                            break;
                        }
                    }
                    let good: Vec<StateId> = cur.into_iter().filter(|&q| coacc[q]).collect();
                    if !good.is_empty() {
                        path_starts.push(p);
                        path_ends.extend(good);
                    }
                }
                if path_starts.is_empty() {
                    continue;
                }
                let first = x.symbols()[0];
                let last = *x.symbols().last().expect("non-empty rule");
                if x.len() == 1 {
                    for &p in &path_starts {
                        for &q in &path_ends {
                            new_edges.push((p, first, q));
                        }
                    }
                } else {
                    let rail = &self.rails[ri];
                    for &p in &path_starts {
                        new_edges.push((p, first, rail[0]));
                    }
                    for &q in &path_ends {
                        new_edges.push((*rail.last().expect("rail non-empty"), last, q));
                    }
                }
            }
            self.edges.extend(new_edges);
            if self.edges.len() == before {
                break;
            }
        }
    }

    fn into_nfa(self) -> Nfa {
        Nfa::new(
            self.state_count,
            self.alphabet,
            self.starts,
            self.accepts,
            self.edges,
        )
        .expect("saturated automaton is well formed")
    }
}

/// The iterated-crossover closure of a finite axiom set, as an automaton
/// accepting exactly the closure language.
pub fn jump_closure_finite(axioms: &FiniteLanguage, rules: &RuleSet) -> Result<JumpClosure, Error> {
    if axioms.is_empty() {
        return Err(Error::EmptyAxioms);
    }
    let axiom_words: Vec<Word> = axioms.words().cloned().collect();
    let rule_words = resolve_rules(rules, &axioms.alphabet());

    // Base automaton: one linear track per axiom.
    let mut origins = Vec::new();
    let mut starts = BTreeSet::new();
    let mut accepts = BTreeSet::new();
    let mut transitions = BTreeSet::new();
    let mut alphabet = BTreeSet::new();
    let mut id = 0;
    for (ai, w) in axiom_words.iter().enumerate() {
        let base = id;
        starts.insert(base);
        for (k, &sym) in w.symbols().iter().enumerate() {
            transitions.insert((base + k, sym, base + k + 1));
            alphabet.insert(sym);
        }
        for k in 0..=w.len() {
            origins.push(StateOrigin::Axiom { axiom: ai, pos: k });
        }
        id += w.len() + 1;
        accepts.insert(id - 1);
    }
    let base = Nfa::new(id, alphabet, starts, accepts, transitions)?;

    let mut sat = Saturator::new(&base, &rule_words);
    for (ri, x) in rule_words.iter().enumerate() {
        for pos in 1..x.len() {
            origins.push(StateOrigin::Rail { rule: ri, pos });
        }
    }
    sat.saturate(&rule_words);
    Ok(JumpClosure {
        nfa: sat.into_nfa(),
        axioms: axiom_words,
        rules: rule_words,
        origins,
    })
}

/// The iterated-crossover closure of a regular language. The automaton must
/// denote an epsilon-free language.
pub fn jump_closure_regular(dfa: &Dfa, rules: &RuleSet) -> Result<Nfa, Error> {
    let t = dfa.trim();
    if t.accepts_epsilon() {
        return Err(Error::EpsilonInLanguage);
    }
    let nfa = t.as_nfa();
    let rule_words = resolve_rules(rules, &nfa.used_alphabet());
    let mut sat = Saturator::new(&nfa, &rule_words);
    sat.saturate(&rule_words);
    Ok(sat.into_nfa().trim())
}

/// One application of crossover to `(L, L)` on a regular language:
/// the union over the rules of `prefix(L, x) · x · suffix(L, x)`. Both modes
/// denote the same language here because the pair ranges over all ordered
/// pairs of `L` with itself.
pub fn cross_once_regular(dfa: &Dfa, rules: &RuleSet, _mode: Mode) -> Result<Nfa, Error> {
    let t = dfa.trim();
    if t.accepts_epsilon() {
        return Err(Error::EpsilonInLanguage);
    }
    let nfa = t.as_nfa();
    let rule_words = resolve_rules(rules, &nfa.used_alphabet());
    let mut acc: Option<Nfa> = None;
    for x in &rule_words {
        let pre = automata::prefix_lang(&nfa, x)?;
        if pre.is_empty_lang() {
            continue;
        }
        let suf = automata::suffix_lang(&nfa, x)?;
        let piece = automata::concat(&automata::concat(&pre, &automata::word_automaton(x)), &suf);
        acc = Some(match acc {
            Some(a) => union(&a, &piece),
            None => piece,
        });
    }
    Ok(acc
        .unwrap_or_else(|| Nfa::empty(nfa.alphabet().clone()))
        .trim())
}

/// One segment of a derivation chain: an axiom entered just past `entry` (if
/// any) and left at the end of `exit` (if any). A chain with a single
/// cut-free segment is an axiom itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSegment {
    pub axiom: Word,
    pub entry: Option<OccurrenceRef>,
    pub exit: Option<OccurrenceRef>,
}

/// A left-to-right derivation: replaying the segments reproduces the queried
/// word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationChain {
    pub segments: Vec<ChainSegment>,
}

impl DerivationChain {
    /// Concatenates the segment contributions; each segment must carry valid
    /// cuts.
    pub fn replay(&self) -> Result<Word, Error> {
        let mut out = Word::empty();
        let last = self.segments.len().saturating_sub(1);
        for (i, seg) in self.segments.iter().enumerate() {
            let from = match &seg.entry {
                Some(occ) => {
                    if !occ.valid_in(&seg.axiom) {
                        return Err(Error::RuleAbsent);
                    }
                    occ.end0()
                }
                None => {
                    if i != 0 {
                        return Err(Error::TraceIncomplete);
                    }
                    0
                }
            };
            let to = match &seg.exit {
                Some(occ) => {
                    if !occ.valid_in(&seg.axiom) {
                        return Err(Error::RuleAbsent);
                    }
                    occ.end0()
                }
                None => {
                    if i != last {
                        return Err(Error::TraceIncomplete);
                    }
                    seg.axiom.len()
                }
            };
            if from > to {
                return Err(Error::TraceIncomplete);
            }
            out = out.concat(&seg.axiom.factor(from, to));
        }
        Ok(out)
    }
}

/// Membership outcome for a closure automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Reject,
    Accept(DerivationChain),
}

// Node of the chain search: a rule occurrence of `w` at (start0, end0).
type OccNode = (usize, usize);

/// Decides `w ∈ L(C)` and, on acceptance, reconstructs a derivation chain
/// whose cut occurrences all sit inside single axioms. For the rule shapes
/// the closure supports this chain always exists when the automaton accepts.
pub fn member_with_trace(c: &JumpClosure, w: &Word) -> Result<Membership, Error> {
    if !c.nfa.accepts(w) {
        return Ok(Membership::Reject);
    }
    // k = 0: the word is an axiom.
    if let Some(axiom) = c.axioms.iter().find(|a| *a == w) {
        return Ok(Membership::Accept(DerivationChain {
            segments: vec![ChainSegment {
                axiom: axiom.clone(),
                entry: None,
                exit: None,
            }],
        }));
    }

    // All rule occurrences in w.
    let mut occ_nodes: Vec<OccNode> = Vec::new();
    for x in &c.rules {
        for occ in w.occurrences(x).expect("rules are non-empty") {
            occ_nodes.push((occ.start0(), occ.end0()));
        }
    }
    occ_nodes.sort();
    occ_nodes.dedup();

    let occ_ref = |host: &Word, pattern: &Word, start0: usize| -> OccurrenceRef {
        host.occurrences(pattern)
            .expect("non-empty pattern")
            .into_iter()
            .find(|o| o.start0() == start0)
            .expect("occurrence present")
    };

    // Initial nodes: w[0..e] is a prefix of some axiom.
    #[derive(Clone)]
    struct Back {
        axiom: usize,
        axiom_cut0: usize,
        prev: Option<usize>,
    }
    let mut back: BTreeMap<usize, Back> = BTreeMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (ni, &(s, e)) in occ_nodes.iter().enumerate() {
        for (ai, axiom) in c.axioms.iter().enumerate() {
            if axiom.len() >= e && axiom.factor(0, e) == w.factor(0, e) {
                back.insert(
                    ni,
                    Back {
                        axiom: ai,
                        axiom_cut0: s,
                        prev: None,
                    },
                );
                queue.push_back(ni);
                break;
            }
        }
    }

    let finishes = |&(s, _e): &OccNode| -> Option<(usize, usize)> {
        let tail_len = w.len() - s;
        for (ai, axiom) in c.axioms.iter().enumerate() {
            if axiom.len() >= tail_len {
                let q = axiom.len() - tail_len;
                if axiom.factor(q, axiom.len()) == w.factor(s, w.len()) {
                    return Some((ai, q));
                }
            }
        }
        None
    };

    let mut finish: Option<(usize, (usize, usize))> = None;
    let mut seen: BTreeSet<usize> = queue.iter().copied().collect();
    while let Some(ni) = queue.pop_front() {
        let node = occ_nodes[ni];
        if let Some(f) = finishes(&node) {
            finish = Some((ni, f));
            break;
        }
        let (s, e) = node;
        for (nj, &(s2, e2)) in occ_nodes.iter().enumerate() {
            // Consecutive cuts may overlap inside the shared entry
            // occurrence, but never reach back before it.
            if s2 < s || e2 < e || (s2, e2) == (s, e) || seen.contains(&nj) {
                continue;
            }
            // Need an axiom containing w[s..e2] with the opening occurrence
            // at its start.
            let piece = w.factor(s, e2);
            let mut found = None;
            'axioms: for (ai, axiom) in c.axioms.iter().enumerate() {
                if axiom.len() < piece.len() {
                    continue;
                }
                for q in 0..=axiom.len() - piece.len() {
                    if axiom.factor(q, q + piece.len()) == piece {
                        found = Some((ai, q));
                        break 'axioms;
                    }
                }
            }
            if let Some((ai, q)) = found {
                seen.insert(nj);
                back.insert(
                    nj,
                    Back {
                        axiom: ai,
                        axiom_cut0: q + (s2 - s),
                        prev: Some(ni),
                    },
                );
                queue.push_back(nj);
            }
        }
    }

    let (last_ni, (fin_axiom, fin_q)) = match finish {
        Some(x) => x,
        None => return Err(Error::TraceIncomplete),
    };

    // Walk back collecting cut nodes first-to-last.
    let mut chain_nodes = Vec::new();
    let mut cur = Some(last_ni);
    while let Some(ni) = cur {
        chain_nodes.push(ni);
        cur = back[&ni].prev;
    }
    chain_nodes.reverse();

    let mut segments = Vec::new();
    // Opening segment: the axiom whose prefix is w[0..e1].
    let first = &back[&chain_nodes[0]];
    let (s1, e1) = occ_nodes[chain_nodes[0]];
    let x1 = w.factor(s1, e1);
    segments.push(ChainSegment {
        axiom: c.axioms[first.axiom].clone(),
        entry: None,
        exit: Some(occ_ref(&c.axioms[first.axiom], &x1, s1)),
    });
    // Middle segments: piece k is entered at node k-1's occurrence and left
    // at node k's occurrence, both located inside the recorded axiom.
    for window in chain_nodes.windows(2) {
        let (prev_ni, ni) = (window[0], window[1]);
        let info = &back[&ni];
        let axiom = &c.axioms[info.axiom];
        let (ps, pe) = occ_nodes[prev_ni];
        let (s2, e2) = occ_nodes[ni];
        let enter_pat = w.factor(ps, pe);
        let exit_pat = w.factor(s2, e2);
        let enter_start0 = info.axiom_cut0 - (s2 - ps);
        segments.push(ChainSegment {
            axiom: axiom.clone(),
            entry: Some(occ_ref(axiom, &enter_pat, enter_start0)),
            exit: Some(occ_ref(axiom, &exit_pat, info.axiom_cut0)),
        });
    }
    // Closing segment: the axiom whose suffix is w[s_k..].
    let (sk, ek) = occ_nodes[last_ni];
    let xk = w.factor(sk, ek);
    let fin_words = &c.axioms[fin_axiom];
    segments.push(ChainSegment {
        axiom: fin_words.clone(),
        entry: Some(occ_ref(fin_words, &xk, fin_q)),
        exit: None,
    });

    let chain = DerivationChain { segments };
    if chain.replay()? != *w {
        return Err(Error::TraceIncomplete);
    }
    Ok(Membership::Accept(chain))
}

/// Outcome of the base decomposition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub holds: bool,
    pub witness: Option<Word>,
    pub base: BaseSets,
}

/// Checks `L = (closure(B) ∩ S·Σ*·E) ∪ units` for the base sets extracted
/// from the language. Crossover-closed languages satisfy it; the witness is
/// the canonical-least word separating the two sides otherwise.
pub fn verify_decomposition(dfa: &Dfa) -> Result<Decomposition, Error> {
    let base = extract_base(dfa)?;
    let nfa = dfa.as_nfa().trim();
    let alphabet = nfa.used_alphabet();
    let candidate = if base.blocks.is_empty() {
        finite_language_automaton(base.units.iter())
    } else {
        let blocks = FiniteLanguage::new(base.blocks.iter().cloned())
            .expect("length-2 blocks are never empty words");
        let closed = jump_closure_finite(&blocks, &RuleSet::AllSymbols)?;
        let gate = first_last_automaton(&base.starts, &base.ends, &alphabet);
        let mut cand = intersect(&closed.nfa, &gate);
        if !base.units.is_empty() {
            cand = union(&cand, &finite_language_automaton(base.units.iter()));
        }
        cand
    };
    let forward = automata::includes(&candidate, &nfa);
    let backward = automata::includes(&nfa, &candidate);
    let witness = forward.witness.into_iter().chain(backward.witness).min();
    Ok(Decomposition {
        holds: witness.is_none(),
        witness,
        base,
    })
}

#[derive(Serialize, Deserialize)]
struct ProvenanceJson {
    axioms: Vec<String>,
    rules: Vec<String>,
    origins: Vec<StateOrigin>,
}

impl JumpClosure {
    /// Serializes the closure automaton with its provenance under the
    /// reserved `x-provenance` key.
    pub fn to_json(&self) -> Vec<u8> {
        let prov = ProvenanceJson {
            axioms: self.axioms.iter().map(|w| w.to_string()).collect(),
            rules: self.rules.iter().map(|w| w.to_string()).collect(),
            origins: self.origins.clone(),
        };
        let doc = crate::automata::serial::encode(
            &self.nfa,
            Some(serde_json::to_value(&prov).expect("provenance serializes")),
        );
        serde_json::to_vec(&doc).expect("closure JSON serializes")
    }

    /// Reads a closure automaton back; fails with [`Error::NotAClosure`] when
    /// the provenance key is missing.
    pub fn from_json(bytes: &[u8]) -> Result<JumpClosure, Error> {
        let doc: crate::automata::serial::AutomatonJson =
            serde_json::from_slice(bytes).map_err(|e| Error::schema("$", e.to_string()))?;
        let nfa = crate::automata::serial::decode(&doc)?;
        let prov_value = doc.x_provenance.ok_or(Error::NotAClosure)?;
        let prov: ProvenanceJson = serde_json::from_value(prov_value)
            .map_err(|e| Error::schema("x-provenance", e.to_string()))?;
        let parse_words = |v: &[String], path: &str| -> Result<Vec<Word>, Error> {
            v.iter()
                .map(|s| {
                    s.parse::<Word>()
                        .map_err(|_| Error::schema(path, "bad word"))
                })
                .collect()
        };
        Ok(JumpClosure {
            nfa,
            axioms: parse_words(&prov.axioms, "x-provenance.axioms")?,
            rules: parse_words(&prov.rules, "x-provenance.rules")?,
            origins: prov.origins,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{enumerate_upto, equivalent, parse_regex, regex_to_nfa};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn lang(words: &[&str]) -> FiniteLanguage {
        FiniteLanguage::new(words.iter().map(|s| w(s))).unwrap()
    }

    fn re(s: &str) -> Nfa {
        regex_to_nfa(&parse_regex(s).unwrap())
    }

    #[test]
    fn closure_of_two_block_words_is_a_plus_b_plus() {
        let c = jump_closure_finite(&lang(&["aabb", "aaabbb"]), &RuleSet::AllSymbols).unwrap();
        assert!(equivalent(&c.nfa, &re("a+b+")));
    }

    #[test]
    fn closure_of_aa_is_a_plus() {
        let c = jump_closure_finite(&lang(&["aa"]), &RuleSet::AllSymbols).unwrap();
        assert!(equivalent(&c.nfa, &re("a+")));
    }

    #[test]
    fn single_occurrence_closure_is_idempotent() {
        let c = jump_closure_finite(&lang(&["ab"]), &RuleSet::symbols([Symbol('a')])).unwrap();
        assert!(equivalent(&c.nfa, &re("ab")));
    }

    #[test]
    fn regular_closure_examples() {
        let aa = canonical_dfa(&re("(aa)+"));
        let c = jump_closure_regular(&aa, &RuleSet::AllSymbols).unwrap();
        assert!(equivalent(&c, &re("a+")));

        let apbp = canonical_dfa(&re("a+b+"));
        let c = jump_closure_regular(&apbp, &RuleSet::AllSymbols).unwrap();
        assert!(equivalent(&c, &re("a+b+")));

        let two = canonical_dfa(&re("a|b"));
        let c = jump_closure_regular(&two, &RuleSet::AllSymbols).unwrap();
        assert!(equivalent(&c, &re("a|b")));
    }

    #[test]
    fn cross_once_examples() {
        let aa = canonical_dfa(&re("(aa)+"));
        let once = cross_once_regular(&aa, &RuleSet::AllSymbols, Mode::Two).unwrap();
        assert!(once.accepts(&w("aaa")));
        assert!(equivalent(&once, &re("a+")));

        let apbp = canonical_dfa(&re("a+b+"));
        let once = cross_once_regular(&apbp, &RuleSet::AllSymbols, Mode::Two).unwrap();
        assert!(equivalent(&once, &re("a+b+")));

        let two = canonical_dfa(&re("ab|ba"));
        let once = cross_once_regular(&two, &RuleSet::AllSymbols, Mode::Two).unwrap();
        for s in ["a", "b", "aba", "bab"] {
            assert!(once.accepts(&w(s)), "missing {}", s);
        }
    }

    #[test]
    fn member_examples() {
        let c = jump_closure_finite(&lang(&["aabb", "aaabbb"]), &RuleSet::AllSymbols).unwrap();
        match member_with_trace(&c, &w("aab")).unwrap() {
            Membership::Accept(chain) => {
                assert_eq!(chain.replay().unwrap(), w("aab"));
                assert!(chain.segments.len() >= 2);
            }
            Membership::Reject => panic!("aab should be accepted"),
        }
        assert_eq!(member_with_trace(&c, &w("ba")).unwrap(), Membership::Reject);
        let single = jump_closure_finite(&lang(&["a"]), &RuleSet::AllSymbols).unwrap();
        assert_eq!(
            member_with_trace(&single, &Word::empty()).unwrap(),
            Membership::Reject
        );
    }

    #[test]
    fn block_profile_examples() {
        let p = block_profile(&w("abbbb")).unwrap();
        assert_eq!(p.first, Symbol('a'));
        assert_eq!(p.last, Symbol('b'));
        assert_eq!(
            p.blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            ["ab", "bb"]
        );
        let p = block_profile(&w("a")).unwrap();
        assert_eq!(p.blocks.len(), 1);
        let p = block_profile(&w("abab")).unwrap();
        assert_eq!(
            p.blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            ["ab", "ba"]
        );
        assert_eq!(block_profile(&Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn profile_automaton_examples() {
        let sigma: BTreeSet<Symbol> = [Symbol('a'), Symbol('b')].into();
        let p = block_profile(&w("ab")).unwrap();
        let d = profile_automaton(&p, &sigma).unwrap();
        assert!(equivalent(&d.as_nfa(), &re("ab")));

        let p = block_profile(&w("abb")).unwrap();
        let d = profile_automaton(&p, &sigma).unwrap();
        assert!(equivalent(&d.as_nfa(), &re("abb+")));

        let p = block_profile(&w("aaa")).unwrap();
        let d = profile_automaton(&p, &sigma).unwrap();
        assert!(equivalent(&d.as_nfa(), &re("aaa*")));
    }

    #[test]
    fn inconsistent_profiles_are_rejected() {
        let sigma: BTreeSet<Symbol> = [Symbol('a'), Symbol('b')].into();
        // No word starting with a can have {bb} as its exact block set.
        let p = BlockProfile {
            first: Symbol('a'),
            blocks: BTreeSet::from([w("bb")]),
            last: Symbol('a'),
        };
        assert_eq!(
            profile_automaton(&p, &sigma),
            Err(Error::InconsistentProfile)
        );
        // Singleton convention requires first == last == the block.
        let p = BlockProfile {
            first: Symbol('a'),
            blocks: BTreeSet::from([w("b")]),
            last: Symbol('b'),
        };
        assert_eq!(
            profile_automaton(&p, &sigma),
            Err(Error::InconsistentProfile)
        );
    }

    #[test]
    fn epsilon_language_closures_are_rejected() {
        let star = canonical_dfa(&re("a*"));
        assert_eq!(
            jump_closure_regular(&star, &RuleSet::AllSymbols).err(),
            Some(Error::EpsilonInLanguage)
        );
        assert_eq!(
            cross_once_regular(&star, &RuleSet::AllSymbols, Mode::Two).err(),
            Some(Error::EpsilonInLanguage)
        );
    }

    #[test]
    fn count_profiles_formula() {
        assert_eq!(count_profiles(1), BigUint::from(3u8));
        assert_eq!(count_profiles(2), BigUint::from(63u8));
        assert_eq!(count_profiles(3), BigUint::from(4603u32));
    }

    #[test]
    fn extract_base_examples() {
        let b = extract_base(&canonical_dfa(&re("a+b+"))).unwrap();
        assert_eq!(
            b.blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            ["aa", "ab", "bb"]
        );
        assert_eq!(b.starts, BTreeSet::from([Symbol('a')]));
        assert_eq!(b.ends, BTreeSet::from([Symbol('b')]));
        assert!(b.units.is_empty());

        let b = extract_base(&canonical_dfa(&re("a|b"))).unwrap();
        assert!(b.blocks.is_empty());
        assert_eq!(b.units.len(), 2);

        let b = extract_base(&canonical_dfa(&re("(aa)+"))).unwrap();
        assert_eq!(
            b.blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            ["aa"]
        );

        assert_eq!(
            extract_base(&canonical_dfa(&re("a*"))),
            Err(Error::EpsilonInLanguage)
        );
    }

    #[test]
    fn decomposition_examples() {
        assert!(
            verify_decomposition(&canonical_dfa(&re("a+b+")))
                .unwrap()
                .holds
        );
        assert!(
            verify_decomposition(&canonical_dfa(&re("a|b")))
                .unwrap()
                .holds
        );
        let d = verify_decomposition(&canonical_dfa(&re("(aa)+"))).unwrap();
        assert!(!d.holds);
        let witness = d.witness.unwrap();
        assert!(witness == w("a") || witness == w("aaa"));
    }

    #[test]
    fn closure_json_round_trip() {
        let c = jump_closure_finite(&lang(&["aabb", "aaabbb"]), &RuleSet::AllSymbols).unwrap();
        let bytes = c.to_json();
        let back = JumpClosure::from_json(&bytes).unwrap();
        assert_eq!(back.to_json(), bytes);
        assert!(equivalent(&back.nfa, &c.nfa));
        // The plain reader ignores the provenance key.
        let plain = crate::automata::from_json(&bytes).unwrap();
        assert!(equivalent(&plain, &c.nfa));
    }

    #[test]
    fn missing_provenance_is_not_a_closure() {
        let bytes = crate::automata::to_json(&re("a+b+"));
        assert_eq!(
            JumpClosure::from_json(&bytes).err(),
            Some(Error::NotAClosure)
        );
    }

    #[test]
    fn enumerate_closure_matches_small_expectation() {
        let c = jump_closure_finite(&lang(&["aa"]), &RuleSet::AllSymbols).unwrap();
        let got: Vec<String> = enumerate_upto(&c.nfa, 4)
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(got, ["a", "aa", "aaa", "aaaa"]);
    }
}
