//! Crossover lifted to finite languages, and bounded iterated closures in
//! both the unrestricted (any pair of produced words) and restricted
//! (produced word against an original axiom) styles.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::Error;
use crate::words::{cross_pair, CrossTrace, Mode, RuleSet, Word};

/// A finite, deduplicated, epsilon-free set of words. Iteration order is
/// canonical (shortlex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLanguage {
    words: BTreeSet<Word>,
}

impl FiniteLanguage {
    /// Builds a finite language, rejecting the empty word.
    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<Self, Error> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        if words.iter().any(Word::is_empty) {
            return Err(Error::EpsilonAxiom);
        }
        Ok(FiniteLanguage { words })
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Union of the alphabets of the member words.
    pub fn alphabet(&self) -> BTreeSet<crate::words::Symbol> {
        self.words.iter().flat_map(|w| w.alphabet()).collect()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }
}

/// Finite truncation parameters for the (in general infinite) closure.
///
/// Words longer than `max_intermediate_len` are discarded outright; words up
/// to it keep participating; the returned language is filtered down to
/// `max_word_len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationBudget {
    pub max_rounds: usize,
    pub max_word_len: usize,
    pub max_intermediate_len: usize,
}

impl IterationBudget {
    pub fn new(
        max_rounds: usize,
        max_word_len: usize,
        max_intermediate_len: usize,
    ) -> Result<Self, Error> {
        if max_intermediate_len < max_word_len {
            return Err(Error::BadBudget);
        }
        Ok(IterationBudget {
            max_rounds,
            max_word_len,
            max_intermediate_len,
        })
    }

    /// Default intermediate cap: `max_word_len` plus the longest axiom plus
    /// the longest rule. The left-to-right chain normal form keeps every
    /// intermediate equal to a kept prefix of the final word plus one axiom
    /// suffix, so this cap loses nothing.
    pub fn default_for(axioms: &FiniteLanguage, rules: &RuleSet, max_word_len: usize) -> Self {
        let rule_len = match rules {
            RuleSet::AllSymbols => 1,
            RuleSet::Symbols(_) => 1,
            RuleSet::Strings(set) => set.iter().map(Word::len).max().unwrap_or(1),
        };
        IterationBudget {
            max_rounds: 256,
            max_word_len,
            max_intermediate_len: max_word_len + axioms.max_len() + rule_len,
        }
    }
}

/// Result of a bounded closure: the words kept under `max_word_len`, the full
/// reached set under the intermediate cap, a flag telling whether a true
/// fixpoint was reached under that cap, and one replayable derivation per
/// non-axiom word.
#[derive(Debug, Clone)]
pub struct BoundedClosure {
    pub kept: FiniteLanguage,
    pub reached: FiniteLanguage,
    pub fixpoint: bool,
    pub derivations: BTreeMap<Word, CrossTrace>,
}

/// Crossover of two finite languages: the union of pair crossovers over all
/// ordered pairs `(w1, w2)` with `w1` from `l1` and `w2` from `l2`.
pub fn cross_lang(
    l1: &FiniteLanguage,
    l2: &FiniteLanguage,
    rules: &RuleSet,
    mode: Mode,
) -> FiniteLanguage {
    FiniteLanguage {
        words: cross_lang_traced(l1, l2, rules, mode).into_keys().collect(),
    }
}

/// As [`cross_lang`] but keeping one trace per produced word.
pub fn cross_lang_traced(
    l1: &FiniteLanguage,
    l2: &FiniteLanguage,
    rules: &RuleSet,
    mode: Mode,
) -> BTreeMap<Word, CrossTrace> {
    let mut out = BTreeMap::new();
    for w1 in l1.words() {
        for w2 in l2.words() {
            for (word, trace) in cross_pair(w1, w2, rules, mode) {
                out.entry(word).or_insert(trace);
            }
        }
    }
    out
}

// 0-based end positions of the occurrences of x in w.
fn occurrence_ends(w: &Word, x: &Word) -> Vec<usize> {
    let (ws, xs) = (w.symbols(), x.symbols());
    if xs.is_empty() || xs.len() > ws.len() {
        return Vec::new();
    }
    (0..=ws.len() - xs.len())
        .filter(|&i| &ws[i..i + xs.len()] == xs)
        .map(|i| i + xs.len())
        .collect()
}

fn occurrence_ref(x: &Word, end0: usize, ordinal: usize) -> crate::words::OccurrenceRef {
    crate::words::OccurrenceRef {
        pattern: x.clone(),
        position: end0 - x.len() + 1,
        ordinal,
    }
}

// Mode-two crossover of one ordered pair, recording only words missing from
// `reached`; traces are built lazily for those.
fn cross_pair_new_words(
    w1: &Word,
    w2: &Word,
    rule_words: &[Word],
    cap: usize,
    reached: &HashSet<Word>,
    fresh: &mut BTreeMap<Word, CrossTrace>,
) {
    for x in rule_words {
        let ends1 = occurrence_ends(w1, x);
        if ends1.is_empty() {
            continue;
        }
        let ends2 = occurrence_ends(w2, x);
        for (oi, &e1) in ends1.iter().enumerate() {
            for (oj, &e2) in ends2.iter().enumerate() {
                for (left, right, le, re, lo, ro) in
                    [(w1, w2, e1, e2, oi, oj), (w2, w1, e2, e1, oj, oi)]
                {
                    if le + right.len() - re > cap {
                        continue;
                    }
                    let output = left.factor(0, le).concat(&right.factor(re, right.len()));
                    if reached.contains(&output) || fresh.contains_key(&output) {
                        continue;
                    }
                    let trace = CrossTrace {
                        left: left.clone(),
                        right: right.clone(),
                        rule: x.clone(),
                        left_cut: occurrence_ref(x, le, lo + 1),
                        right_cut: occurrence_ref(x, re, ro + 1),
                        output: output.clone(),
                    };
                    fresh.insert(output, trace);
                }
            }
        }
    }
}

fn closure_bounded(
    axioms: &FiniteLanguage,
    rules: &RuleSet,
    budget: &IterationBudget,
    restricted: bool,
) -> BoundedClosure {
    let cap = budget.max_intermediate_len;
    let rule_words = rules.resolve(&axioms.alphabet());
    let participating: Vec<Word> = axioms.words().filter(|w| w.len() <= cap).cloned().collect();
    // Membership lives in a hash set; `order` keeps iteration deterministic.
    let mut reached: HashSet<Word> = participating.iter().cloned().collect();
    let mut order: Vec<Word> = participating.clone();
    let mut derivations: BTreeMap<Word, CrossTrace> = BTreeMap::new();
    // Words added in the previous round; only pairs touching them can yield
    // anything new in the unrestricted style.
    let mut frontier: Vec<Word> = participating.clone();
    let mut fixpoint = false;

    for _ in 0..budget.max_rounds {
        let mut fresh: BTreeMap<Word, CrossTrace> = BTreeMap::new();
        if restricted {
            for w1 in &frontier {
                for w2 in &participating {
                    cross_pair_new_words(w1, w2, &rule_words, cap, &reached, &mut fresh);
                }
            }
        } else {
            for w1 in &frontier {
                for w2 in &order {
                    cross_pair_new_words(w1, w2, &rule_words, cap, &reached, &mut fresh);
                }
            }
        }
        if fresh.is_empty() {
            fixpoint = true;
            break;
        }
        frontier = fresh.keys().cloned().collect();
        for (word, trace) in fresh {
            reached.insert(word.clone());
            order.push(word.clone());
            derivations.insert(word, trace);
        }
    }

    let reached: BTreeSet<Word> = reached.into_iter().collect();
    let kept: BTreeSet<Word> = reached
        .iter()
        .filter(|w| w.len() <= budget.max_word_len)
        .cloned()
        .collect();
    BoundedClosure {
        kept: FiniteLanguage { words: kept },
        reached: FiniteLanguage { words: reached },
        fixpoint,
        derivations,
    }
}

/// Bounded unrestricted closure: each round crosses every pair of words
/// produced so far.
pub fn unrestricted_closure_bounded(
    axioms: &FiniteLanguage,
    rules: &RuleSet,
    budget: &IterationBudget,
) -> BoundedClosure {
    closure_bounded(axioms, rules, budget, false)
}

/// Bounded restricted closure: each round crosses the accumulated words only
/// against the original axioms.
pub fn restricted_closure_bounded(
    axioms: &FiniteLanguage,
    rules: &RuleSet,
    budget: &IterationBudget,
) -> BoundedClosure {
    closure_bounded(axioms, rules, budget, true)
}

/// The base data of a finite language, scanned directly: length-2 blocks,
/// first symbols, last symbols, and the one-symbol member words.
pub fn base_of_finite(l: &FiniteLanguage) -> crate::closure::BaseSets {
    let mut blocks = BTreeSet::new();
    let mut starts = BTreeSet::new();
    let mut ends = BTreeSet::new();
    let mut units = BTreeSet::new();
    for w in l.words() {
        starts.extend(w.first());
        ends.extend(w.last());
        if w.len() == 1 {
            units.insert(w.clone());
        } else {
            blocks.extend(w.two_blocks());
        }
    }
    crate::closure::BaseSets {
        blocks,
        starts,
        ends,
        units,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn lang(words: &[&str]) -> FiniteLanguage {
        FiniteLanguage::new(words.iter().map(|s| w(s))).unwrap()
    }

    fn strs(l: &FiniteLanguage) -> Vec<String> {
        l.words().map(|x| x.to_string()).collect()
    }

    #[test]
    fn rejects_epsilon_member() {
        assert_eq!(
            FiniteLanguage::new([Word::empty()]),
            Err(Error::EpsilonAxiom)
        );
    }

    #[test]
    fn cross_lang_paper_examples() {
        let l = lang(&["ab", "ba", "bb"]);
        // bbb comes from bb crossed with itself at its two b occurrences,
        // exactly as aa crossed with itself yields aaa.
        assert_eq!(
            strs(&cross_lang(&l, &l, &RuleSet::AllSymbols, Mode::Two)),
            ["a", "b", "ab", "ba", "bb", "aba", "abb", "bab", "bba", "bbb"]
        );

        let l = lang(&["a", "b"]);
        assert_eq!(
            strs(&cross_lang(&l, &l, &RuleSet::AllSymbols, Mode::Two)),
            ["a", "b"]
        );

        let l = lang(&["abcab", "c"]);
        assert_eq!(
            strs(&cross_lang(&l, &l, &RuleSet::AllSymbols, Mode::Two)),
            ["c", "ab", "abc", "cab", "abcab", "abcabcab"]
        );
    }

    #[test]
    fn unrestricted_closure_examples() {
        let one = lang(&["a"]);
        let budget = IterationBudget::new(16, 4, 8).unwrap();
        let got = unrestricted_closure_bounded(&one, &RuleSet::AllSymbols, &budget);
        assert!(got.fixpoint);
        assert_eq!(strs(&got.kept), ["a"]);

        let aa = lang(&["aa"]);
        let budget = IterationBudget::new(64, 6, 9).unwrap();
        let got = unrestricted_closure_bounded(&aa, &RuleSet::AllSymbols, &budget);
        assert_eq!(
            strs(&got.kept),
            ["a", "aa", "aaa", "aaaa", "aaaaa", "aaaaaa"]
        );

        let ab = lang(&["aabb", "aaabbb"]);
        let budget = IterationBudget::default_for(&ab, &RuleSet::AllSymbols, 6);
        let got = unrestricted_closure_bounded(&ab, &RuleSet::AllSymbols, &budget);
        let expected: Vec<String> = {
            let mut v = Vec::new();
            for n in 2..=6 {
                for i in 1..n {
                    v.push(format!("{}{}", "a".repeat(i), "b".repeat(n - i)));
                }
            }
            let mut words: Vec<Word> = v.iter().map(|s| w(s)).collect();
            words.sort();
            words.iter().map(|x| x.to_string()).collect()
        };
        assert_eq!(strs(&got.kept), expected);
    }

    #[test]
    fn restricted_closure_examples() {
        let one = lang(&["a"]);
        let budget = IterationBudget::new(16, 4, 8).unwrap();
        let got = restricted_closure_bounded(&one, &RuleSet::AllSymbols, &budget);
        assert_eq!(strs(&got.kept), ["a"]);

        let ab = lang(&["aabb", "aaabbb"]);
        let budget = IterationBudget::default_for(&ab, &RuleSet::AllSymbols, 6);
        let r = restricted_closure_bounded(&ab, &RuleSet::AllSymbols, &budget);
        let u = unrestricted_closure_bounded(&ab, &RuleSet::AllSymbols, &budget);
        assert!(r.fixpoint && u.fixpoint);
        assert_eq!(r.kept, u.kept);

        let l = lang(&["ab", "ba"]);
        let budget = IterationBudget::default_for(&l, &RuleSet::AllSymbols, 3);
        let got = restricted_closure_bounded(&l, &RuleSet::AllSymbols, &budget);
        assert_eq!(strs(&got.kept), ["a", "b", "ab", "ba", "aba", "bab"]);
    }

    #[test]
    fn base_of_finite_examples() {
        let b = base_of_finite(&lang(&["aabb", "aaabbb"]));
        assert_eq!(
            b.blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            ["aa", "ab", "bb"]
        );
        assert_eq!(b.starts.len(), 1);
        assert_eq!(b.ends.len(), 1);
        assert!(b.units.is_empty());

        let b = base_of_finite(&lang(&["a"]));
        assert!(b.blocks.is_empty());
        assert_eq!(b.units.len(), 1);

        let b = base_of_finite(&lang(&["ab", "ba"]));
        assert_eq!(
            b.blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            ["ab", "ba"]
        );
        assert_eq!(b.starts.len(), 2);
        assert_eq!(b.ends.len(), 2);
    }

    #[test]
    fn derivations_replay() {
        let ab = lang(&["aabb", "aaabbb"]);
        let budget = IterationBudget::default_for(&ab, &RuleSet::AllSymbols, 6);
        let got = unrestricted_closure_bounded(&ab, &RuleSet::AllSymbols, &budget);
        for (word, trace) in &got.derivations {
            assert_eq!(&trace.replay().unwrap(), word);
            assert_eq!(&trace.output, word);
            assert!(got.reached.contains(&trace.left) || ab.contains(&trace.left));
            assert!(got.reached.contains(&trace.right) || ab.contains(&trace.right));
        }
    }
}
