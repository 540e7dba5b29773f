//! Decision procedures on epsilon-free regular languages: closure under
//! crossover for a given rule set, crossover languages, constants, strict
//! local testability, and the small sub-regular predicates used in the
//! comparison results.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::{
    canonical_dfa, complement, equivalent, includes, intersect, lang_last_symbols, shortest_member,
    sigma_plus, union, Dfa, Nfa, StateId,
};
use crate::closure::cross_once_regular;
use crate::error::Error;
use crate::words::{Mode, RuleSet, Symbol, Word};

/// Outcome of a decision procedure. `witness` is a counterexample word when
/// the property fails and one exists; `detail` carries a numeric certificate
/// such as the local-testability window size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Word>,
    pub detail: Option<usize>,
}

impl Verdict {
    fn yes() -> Self {
        Verdict {
            holds: true,
            witness: None,
            detail: None,
        }
    }

    fn yes_with(detail: usize) -> Self {
        Verdict {
            holds: true,
            witness: None,
            detail: Some(detail),
        }
    }

    fn no(witness: Option<Word>) -> Self {
        Verdict {
            holds: false,
            witness,
            detail: None,
        }
    }
}

fn require_epsilon_free(dfa: &Dfa) -> Result<Nfa, Error> {
    let t = dfa.as_nfa().trim();
    if t.accepts_epsilon() {
        return Err(Error::EpsilonInLanguage);
    }
    Ok(t)
}

/// Is the language closed under one crossover step with the given rules?
/// The witness is the canonical-least produced word outside the language.
pub fn is_closed_under(dfa: &Dfa, rules: &RuleSet) -> Result<Verdict, Error> {
    let lang = require_epsilon_free(dfa)?;
    let once = cross_once_regular(dfa, rules, Mode::Two)?;
    let inc = includes(&lang, &once);
    Ok(if inc.holds {
        Verdict::yes()
    } else {
        Verdict::no(inc.witness)
    })
}

/// Crossover languages are exactly the languages closed under crossover at
/// every alphabet symbol.
pub fn is_crossover(dfa: &Dfa) -> Result<Verdict, Error> {
    is_closed_under(dfa, &RuleSet::AllSymbols)
}

/// Closure under every symbol of the language's own alphabet. Kept as a
/// named check for reporting; it coincides with [`is_crossover`].
pub fn is_totally_symbol_closed(dfa: &Dfa) -> Result<Verdict, Error> {
    is_crossover(dfa)
}

/// Is there a non-empty symbol subset of the alphabet under which the
/// language is closed? Decided by exhausting the subsets; `detail` reports
/// the size of the first closed subset found (smallest subsets first).
pub fn is_symbol_subset_closed(dfa: &Dfa) -> Result<Verdict, Error> {
    let lang = require_epsilon_free(dfa)?;
    let symbols: Vec<Symbol> = lang.used_alphabet().into_iter().collect();
    let n = symbols.len();
    if n == 0 {
        // No symbols means no non-empty rule set; an empty language is
        // vacuously closed under anything.
        return Ok(Verdict::yes());
    }
    let mut masks: Vec<u64> = (1..(1u64 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let subset: BTreeSet<Symbol> = symbols
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &s)| s)
            .collect();
        let count = subset.len();
        if is_closed_under(dfa, &RuleSet::Symbols(subset))?.holds {
            return Ok(Verdict::yes_with(count));
        }
    }
    Ok(Verdict::no(None))
}

/// Is `c` a constant for the language: on the minimal trim DFA, do all
/// `c`-paths from accessible states share a single (co-accessible) target?
pub fn is_constant(dfa: &Dfa, c: &Word) -> Result<Verdict, Error> {
    if c.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let min = canonical_dfa(&dfa.as_nfa());
    let mut targets = BTreeSet::new();
    for s in 0..min.state_count() {
        if let Some(t) = min.step_word(s, c) {
            targets.insert(t);
        }
    }
    Ok(if targets.len() <= 1 {
        Verdict::yes()
    } else {
        Verdict::no(None)
    })
}

/// The transition functions of all length-`k` factor words, keyed by a
/// canonical representative word per function, for `k = 0, 1, 2, ...`.
struct FactorFunctions {
    dfa: Dfa,
    symbols: Vec<Symbol>,
    // function as a vector of optional targets, paired with the shortlex
    // least word inducing it at the current length
    level: BTreeMap<Vec<Option<StateId>>, Word>,
}

impl FactorFunctions {
    fn new(dfa: Dfa) -> Self {
        let symbols: Vec<Symbol> = dfa.alphabet().iter().copied().collect();
        let identity: Vec<Option<StateId>> = (0..dfa.state_count()).map(Some).collect();
        let mut level = BTreeMap::new();
        level.insert(identity, Word::empty());
        FactorFunctions {
            dfa,
            symbols,
            level,
        }
    }

    /// Advances to the next word length; returns false once no factor of
    /// that length exists.
    fn advance(&mut self) -> bool {
        let mut next: BTreeMap<Vec<Option<StateId>>, Word> = BTreeMap::new();
        for (f, word) in &self.level {
            for &a in &self.symbols {
                let g: Vec<Option<StateId>> = f
                    .iter()
                    .map(|t| t.and_then(|s| self.dfa.step(s, a)))
                    .collect();
                if g.iter().all(Option::is_none) {
                    continue;
                }
                let candidate = word.concat(&Word::from_symbols([a]));
                match next.get(&g) {
                    Some(existing) if *existing <= candidate => {}
                    _ => {
                        next.insert(g, candidate);
                    }
                }
            }
        }
        self.level = next;
        !self.level.is_empty()
    }

    /// A non-constant factor function at the current length, if any.
    fn non_constant(&self) -> Option<Word> {
        self.level
            .iter()
            .filter(|(f, _)| {
                f.iter()
                    .filter_map(|t| t.as_ref())
                    .collect::<BTreeSet<_>>()
                    .len()
                    > 1
            })
            .map(|(_, w)| w.clone())
            .min()
    }
}

/// Strict local testability: scan `k = 1..=k_max` for a window size at which
/// every length-`k` factor of the language is a constant. `detail` carries
/// the first such `k`; on failure the witness is a non-constant factor of
/// length `k_max`.
pub fn is_slt(dfa: &Dfa, k_max: usize) -> Result<Verdict, Error> {
    require_epsilon_free(dfa)?;
    let min = canonical_dfa(&dfa.as_nfa());
    let mut funcs = FactorFunctions::new(min);
    let mut last_witness = None;
    for k in 1..=k_max {
        if !funcs.advance() {
            // No factors of this length at all; every one is vacuously a
            // constant.
            return Ok(Verdict::yes_with(k));
        }
        match funcs.non_constant() {
            None => return Ok(Verdict::yes_with(k)),
            Some(w) => last_witness = Some(w),
        }
    }
    Ok(Verdict::no(last_witness))
}

/// Default scan bound for [`is_slt`]: the squared state count of the minimal
/// trim DFA.
pub fn default_slt_bound(dfa: &Dfa) -> usize {
    let n = canonical_dfa(&dfa.as_nfa()).state_count();
    (n * n).max(1)
}

/// Closure under a given set of string rules; certifies membership in the
/// string-closure class for that rule set.
pub fn is_string_closed(dfa: &Dfa, rules: &BTreeSet<Word>) -> Result<Verdict, Error> {
    is_closed_under(dfa, &RuleSet::strings(rules.iter().cloned())?)
}

/// Combinational languages: `L = Σ*·U` for some symbol set `U`. The last
/// symbols of the language are the only viable `U`, so the check is exact.
pub fn is_combinational(dfa: &Dfa) -> Result<Verdict, Error> {
    let lang = dfa.as_nfa().trim();
    let alphabet = lang.used_alphabet();
    let last = lang_last_symbols(&lang);
    let mut candidate_states: BTreeSet<StateId> = BTreeSet::new();
    let mut transitions: BTreeSet<(StateId, Symbol, StateId)> = BTreeSet::new();
    candidate_states.insert(0);
    candidate_states.insert(1);
    for &a in &alphabet {
        transitions.insert((0, a, 0));
    }
    for &u in &last {
        transitions.insert((0, u, 1));
    }
    let candidate = Nfa::new(
        2,
        alphabet,
        BTreeSet::from([0]),
        BTreeSet::from([1]),
        transitions,
    )
    .expect("well formed");
    Ok(if equivalent(&lang, &candidate) {
        Verdict::yes()
    } else {
        let w = shortest_member(&intersect(
            &union(&lang, &candidate),
            &complement(&intersect(&lang, &candidate), &lang.used_alphabet()),
        ));
        Verdict::no(w)
    })
}

/// Nilpotent languages: the language or its complement is finite.
pub fn is_nilpotent(dfa: &Dfa) -> Result<Verdict, Error> {
    let nfa = dfa.as_nfa();
    if nfa.is_finite_lang() {
        return Ok(Verdict::yes());
    }
    let comp = complement(&nfa, nfa.alphabet());
    Ok(if comp.is_finite_lang() {
        Verdict::yes()
    } else {
        Verdict::no(None)
    })
}

/// Suffix-closed languages: every non-empty suffix of a member is a member.
pub fn is_suffix_closed(dfa: &Dfa) -> Result<Verdict, Error> {
    let t = dfa.as_nfa().trim();
    let suffixes = Nfa::new(
        t.state_count(),
        t.alphabet().clone(),
        (0..t.state_count()).collect(),
        t.accepts_set().clone(),
        t.transitions().clone(),
    )
    .expect("well formed");
    let nonempty_suffixes = intersect(&suffixes, &sigma_plus(&t.used_alphabet()));
    let inc = includes(&t, &nonempty_suffixes);
    Ok(if inc.holds {
        Verdict::yes()
    } else {
        Verdict::no(inc.witness)
    })
}

/// The families reported by [`classify_report`], in fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Crossover,
    TotalSymbol,
    SymbolSubset,
    Slt,
    Combinational,
    Nilpotent,
    SuffixClosed,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Crossover,
        Family::TotalSymbol,
        Family::SymbolSubset,
        Family::Slt,
        Family::Combinational,
        Family::Nilpotent,
        Family::SuffixClosed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Crossover => "crossover",
            Family::TotalSymbol => "total-symbol",
            Family::SymbolSubset => "symbol-subset",
            Family::Slt => "slt",
            Family::Combinational => "combinational",
            Family::Nilpotent => "nilpotent",
            Family::SuffixClosed => "suffix-closed",
        }
    }

    pub fn parse(name: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// One classification line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyVerdict {
    pub family: Family,
    pub verdict: Verdict,
}

/// Runs the requested family deciders in fixed report order.
pub fn classify_report(
    dfa: &Dfa,
    families: &[Family],
    k_max: Option<usize>,
) -> Result<Vec<FamilyVerdict>, Error> {
    let mut wanted: Vec<Family> = Family::ALL
        .iter()
        .copied()
        .filter(|f| families.contains(f))
        .collect();
    if wanted.is_empty() {
        wanted = Family::ALL.to_vec();
    }
    let mut out = Vec::new();
    for family in wanted {
        let verdict = match family {
            Family::Crossover => is_crossover(dfa)?,
            Family::TotalSymbol => is_totally_symbol_closed(dfa)?,
            Family::SymbolSubset => is_symbol_subset_closed(dfa)?,
            Family::Slt => is_slt(dfa, k_max.unwrap_or_else(|| default_slt_bound(dfa)))?,
            Family::Combinational => is_combinational(dfa)?,
            Family::Nilpotent => is_nilpotent(dfa)?,
            Family::SuffixClosed => is_suffix_closed(dfa)?,
        };
        out.push(FamilyVerdict { family, verdict });
    }
    Ok(out)
}
