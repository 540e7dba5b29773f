//! Words over Unicode alphabets, factor and occurrence bookkeeping, and the
//! single-pair sequential crossover operations with derivation traces.
//!
//! A crossover of two words `u1·x·v1` and `u2·x·v2` at a shared non-empty
//! factor `x` produces `u1·x·v2` (and `u2·x·v1` in two-output mode). All
//! operations here are pure; every produced word carries a [`CrossTrace`]
//! recording exactly which cuts were used.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// One Unicode scalar value. Symbols order by code point; that order drives
/// every canonical sort in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub char);

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite sequence of symbols. The empty word is representable and prints
/// as the token `_`.
///
/// Words order shortlex: by length first, then lexicographically by code
/// point. Sets of words therefore iterate in canonical order for free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(syms: impl IntoIterator<Item = Symbol>) -> Self {
        Word(syms.into_iter().collect())
    }

    pub fn from_chars(chars: impl IntoIterator<Item = char>) -> Self {
        Word(chars.into_iter().map(Symbol).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Symbol> {
        self.0.last().copied()
    }

    /// Contiguous sub-word over a 0-based half-open range.
    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The distinct symbols occurring in the word.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.0.iter().copied().collect()
    }

    /// All non-empty contiguous sub-words.
    pub fn factors(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for i in 0..self.len() {
            for j in i + 1..=self.len() {
                out.insert(self.factor(i, j));
            }
        }
        out
    }

    /// The 2-block set: all length-2 factors for words of length >= 2, the
    /// singleton `{w}` for a one-symbol word, and `{Word::empty()}` for the
    /// empty word.
    pub fn two_blocks(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        match self.len() {
            0 => {
                out.insert(Word::empty());
            }
            1 => {
                out.insert(self.clone());
            }
            n => {
                for i in 0..n - 1 {
                    out.insert(self.factor(i, i + 2));
                }
            }
        }
        out
    }

    /// All occurrences of the non-empty pattern `x`, overlapping ones
    /// included, in ascending position order. Positions and ordinals are
    /// 1-based.
    pub fn occurrences(&self, x: &Word) -> Result<Vec<OccurrenceRef>, Error> {
        if x.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let mut out = Vec::new();
        if x.len() > self.len() {
            return Ok(out);
        }
        let mut ordinal = 0;
        for start in 0..=self.len() - x.len() {
            if &self.0[start..start + x.len()] == x.symbols() {
                ordinal += 1;
                out.push(OccurrenceRef {
                    pattern: x.clone(),
                    position: start + 1,
                    ordinal,
                });
            }
        }
        Ok(out)
    }

    /// `Prefix_x(w) = { u : u·x·u' = w }`. The empty word is a legal member.
    pub fn prefixes_at(&self, x: &Word) -> Result<BTreeSet<Word>, Error> {
        Ok(self
            .occurrences(x)?
            .into_iter()
            .map(|occ| self.factor(0, occ.position - 1))
            .collect())
    }

    /// `Suffix_x(w) = { s : s'·x·s = w }`. The empty word is a legal member.
    pub fn suffixes_at(&self, x: &Word) -> Result<BTreeSet<Word>, Error> {
        Ok(self
            .occurrences(x)?
            .into_iter()
            .map(|occ| self.factor(occ.position - 1 + x.len(), self.len()))
            .collect())
    }

    /// All prefixes including the empty word and the word itself.
    pub fn prefixes(&self) -> Vec<Word> {
        (0..=self.len()).map(|i| self.factor(0, i)).collect()
    }

    /// All suffixes including the empty word and the word itself.
    pub fn suffixes(&self) -> Vec<Word> {
        (0..=self.len())
            .map(|i| self.factor(i, self.len()))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "_")
        } else {
            for s in &self.0 {
                write!(f, "{}", s.0)?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses the shared text form: `_` is the empty word, any other token is
    /// read symbol by symbol. `_`, `#` and whitespace may not appear inside a
    /// longer token.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(Error::WordSyntax {
                reason: "empty token (use `_` for the empty word)".into(),
            });
        }
        if s == "_" {
            return Ok(Word::empty());
        }
        for c in s.chars() {
            if c == '_' || c == '#' || c.is_whitespace() {
                return Err(Error::WordSyntax {
                    reason: format!("character `{}` is not allowed inside a word", c),
                });
            }
        }
        Ok(Word::from_chars(s.chars()))
    }
}

/// A specific occurrence of a non-empty pattern inside a host word.
///
/// `position` is the 1-based start index; `ordinal` counts occurrences from
/// the left, so `ordinal = |u|_x - |u|_x^r` for the occurrence bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OccurrenceRef {
    pub pattern: Word,
    pub position: usize,
    pub ordinal: usize,
}

impl OccurrenceRef {
    /// 0-based start index in the host word.
    pub fn start0(&self) -> usize {
        self.position - 1
    }

    /// 0-based index just past the occurrence.
    pub fn end0(&self) -> usize {
        self.position - 1 + self.pattern.len()
    }

    /// Checks that the occurrence really sits in `host` with the recorded
    /// position and ordinal.
    pub fn valid_in(&self, host: &Word) -> bool {
        match host.occurrences(&self.pattern) {
            Ok(occs) => occs.iter().any(|o| o == self),
            Err(_) => false,
        }
    }
}

/// The overlap rule set `R`: every alphabet symbol, an explicit symbol set,
/// or an explicit set of non-empty words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleSet {
    AllSymbols,
    Symbols(BTreeSet<Symbol>),
    Strings(BTreeSet<Word>),
}

impl RuleSet {
    pub fn symbols(syms: impl IntoIterator<Item = Symbol>) -> Self {
        RuleSet::Symbols(syms.into_iter().collect())
    }

    /// Builds a string rule set, rejecting the empty word.
    pub fn strings(words: impl IntoIterator<Item = Word>) -> Result<Self, Error> {
        let set: BTreeSet<Word> = words.into_iter().collect();
        if set.iter().any(Word::is_empty) {
            return Err(Error::EmptyPattern);
        }
        Ok(RuleSet::Strings(set))
    }

    /// The concrete rule words for a given alphabet: `AllSymbols` expands to
    /// one-symbol words over the alphabet.
    pub fn resolve(&self, alphabet: &BTreeSet<Symbol>) -> Vec<Word> {
        match self {
            RuleSet::AllSymbols => alphabet.iter().map(|&s| Word::from_symbols([s])).collect(),
            RuleSet::Symbols(set) => set.iter().map(|&s| Word::from_symbols([s])).collect(),
            RuleSet::Strings(set) => set.iter().cloned().collect(),
        }
    }
}

/// One or both outputs per overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
}

/// Record of a single crossover: `output` is the prefix of `left` up to and
/// including the rule occurrence at `left_cut`, followed by the part of
/// `right` strictly after the rule occurrence at `right_cut`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossTrace {
    pub left: Word,
    pub right: Word,
    pub rule: Word,
    pub left_cut: OccurrenceRef,
    pub right_cut: OccurrenceRef,
    pub output: Word,
}

impl CrossTrace {
    /// Recomputes the output from the recorded cuts. The result must equal
    /// the recorded output for a trace to be considered sound.
    pub fn replay(&self) -> Result<Word, Error> {
        if !self.left_cut.valid_in(&self.left) || !self.right_cut.valid_in(&self.right) {
            return Err(Error::RuleAbsent);
        }
        if self.left_cut.pattern != self.rule || self.right_cut.pattern != self.rule {
            return Err(Error::RuleAbsent);
        }
        let head = self.left.factor(0, self.left_cut.end0());
        let tail = self.right.factor(self.right_cut.end0(), self.right.len());
        Ok(head.concat(&tail))
    }
}

/// A set of produced words, each with the first trace (in cut order) that
/// produced it. Iteration order is canonical.
pub type Crossing = BTreeMap<Word, CrossTrace>;

/// The word set of a crossing.
pub fn crossing_words(c: &Crossing) -> BTreeSet<Word> {
    c.keys().cloned().collect()
}

fn merge(into: &mut Crossing, traces: impl IntoIterator<Item = CrossTrace>) {
    for t in traces {
        into.entry(t.output.clone()).or_insert(t);
    }
}

/// Crossover of `w1` and `w2` at one specific pair of occurrences of the rule
/// `x`. Mode [`Mode::One`] yields only the left-prefix output.
pub fn cross_at(
    w1: &Word,
    w2: &Word,
    x: &Word,
    i: &OccurrenceRef,
    j: &OccurrenceRef,
    mode: Mode,
) -> Result<Vec<CrossTrace>, Error> {
    if x.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if i.pattern != *x || j.pattern != *x || !i.valid_in(w1) || !j.valid_in(w2) {
        return Err(Error::RuleAbsent);
    }
    let mut out = Vec::new();
    let first = CrossTrace {
        left: w1.clone(),
        right: w2.clone(),
        rule: x.clone(),
        left_cut: i.clone(),
        right_cut: j.clone(),
        output: w1
            .factor(0, i.end0())
            .concat(&w2.factor(j.end0(), w2.len())),
    };
    out.push(first);
    if mode == Mode::Two {
        let second = CrossTrace {
            left: w2.clone(),
            right: w1.clone(),
            rule: x.clone(),
            left_cut: j.clone(),
            right_cut: i.clone(),
            output: w2
                .factor(0, j.end0())
                .concat(&w1.factor(i.end0(), w1.len())),
        };
        if second.output != out[0].output {
            out.push(second);
        }
    }
    out.sort_by(|a, b| a.output.cmp(&b.output));
    Ok(out)
}

// Occurrences come straight from `occurrences`, so no revalidation happens
// on this path.
fn cross_rule_nonempty(w1: &Word, w2: &Word, x: &Word, mode: Mode) -> Crossing {
    let mut out = Crossing::new();
    let occs1 = w1.occurrences(x).expect("non-empty rule");
    let occs2 = w2.occurrences(x).expect("non-empty rule");
    for i in &occs1 {
        for j in &occs2 {
            let first = CrossTrace {
                left: w1.clone(),
                right: w2.clone(),
                rule: x.clone(),
                left_cut: i.clone(),
                right_cut: j.clone(),
                output: w1
                    .factor(0, i.end0())
                    .concat(&w2.factor(j.end0(), w2.len())),
            };
            if mode == Mode::Two {
                let second = CrossTrace {
                    left: w2.clone(),
                    right: w1.clone(),
                    rule: x.clone(),
                    left_cut: j.clone(),
                    right_cut: i.clone(),
                    output: w2
                        .factor(0, j.end0())
                        .concat(&w1.factor(i.end0(), w1.len())),
                };
                merge(&mut out, [first, second]);
            } else {
                merge(&mut out, [first]);
            }
        }
    }
    out
}

/// Crossover at every occurrence pair of one rule word. The result is empty
/// (not an error) when `x` is absent from either word.
pub fn cross_rule(w1: &Word, w2: &Word, x: &Word, mode: Mode) -> Result<Crossing, Error> {
    if x.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(cross_rule_nonempty(w1, w2, x, mode))
}

/// Crossover over a whole rule set. For [`RuleSet::AllSymbols`] this is the
/// union over the symbols common to both words, which provably equals the
/// union over all common non-empty factors.
pub fn cross_pair(w1: &Word, w2: &Word, rules: &RuleSet, mode: Mode) -> Crossing {
    let rule_words = match rules {
        RuleSet::AllSymbols => {
            let common: BTreeSet<Symbol> = w1
                .alphabet()
                .intersection(&w2.alphabet())
                .copied()
                .collect();
            common.iter().map(|&s| Word::from_symbols([s])).collect()
        }
        _ => rules.resolve(&BTreeSet::new()),
    };
    let mut out = Crossing::new();
    for x in &rule_words {
        for (word, trace) in cross_rule_nonempty(w1, w2, x, mode) {
            out.entry(word).or_insert(trace);
        }
    }
    out
}

/// The empty-overlap curiosity: `Pref(w1)·Suff(w2) ∪ Pref(w2)·Suff(w1)`,
/// prefixes and suffixes taken inclusively of the empty word and the word
/// itself.
pub fn epsilon_cross(w1: &Word, w2: &Word) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for (a, b) in [(w1, w2), (w2, w1)] {
        for p in a.prefixes() {
            for s in b.suffixes() {
                out.insert(p.concat(&s));
            }
        }
    }
    out
}

/// Corresponding crossover: only factors occurring more than once in both
/// words participate, and only ordinal-matched occurrence pairs (first with
/// first, second with second, up to the smaller count) may overlap. Both
/// outputs per pair are kept.
pub fn corresponding_cross(w1: &Word, w2: &Word) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let common: BTreeSet<Word> = w1.factors().intersection(&w2.factors()).cloned().collect();
    for x in common {
        let occs1 = w1.occurrences(&x).expect("non-empty factor");
        let occs2 = w2.occurrences(&x).expect("non-empty factor");
        if occs1.len() < 2 || occs2.len() < 2 {
            continue;
        }
        for k in 0..occs1.len().min(occs2.len()) {
            let traces = cross_at(w1, w2, &x, &occs1[k], &occs2[k], Mode::Two)
                .expect("validated occurrences");
            out.extend(traces.into_iter().map(|t| t.output));
        }
    }
    out
}

/// Parses the shared word-list text form: one word per line, `_` for the
/// empty word, `#` starting a comment line, blank lines ignored.
pub fn parse_word_list(text: &str) -> Result<Vec<Word>, Error> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(line.parse()?);
    }
    Ok(out)
}

/// Formats words in the shared word-list text form, one per line.
pub fn format_word_list<'a>(words: impl IntoIterator<Item = &'a Word>) -> String {
    let mut s = String::new();
    for w in words {
        s.push_str(&w.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn words(set: &BTreeSet<Word>) -> Vec<String> {
        set.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn alphabet_of_examples() {
        assert_eq!(w("abba").alphabet(), w("ab").alphabet());
        assert!(Word::empty().alphabet().is_empty());
        assert_eq!(w("abcab").alphabet().len(), 3);
    }

    #[test]
    fn factors_examples() {
        assert_eq!(words(&w("ab").factors()), ["a", "b", "ab"]);
        assert_eq!(words(&w("aa").factors()), ["a", "aa"]);
        assert_eq!(
            words(&w("abc").factors()),
            ["a", "b", "c", "ab", "bc", "abc"]
        );
    }

    #[test]
    fn two_blocks_examples() {
        assert_eq!(words(&w("abbbc").two_blocks()), ["ab", "bb", "bc"]);
        assert_eq!(words(&w("a").two_blocks()), ["a"]);
        assert_eq!(words(&Word::empty().two_blocks()), ["_"]);
    }

    #[test]
    fn occurrences_examples() {
        let occ = |h: &str, x: &str| -> Vec<usize> {
            w(h).occurrences(&w(x))
                .unwrap()
                .into_iter()
                .map(|o| o.position)
                .collect()
        };
        assert_eq!(occ("abab", "ab"), [1, 3]);
        assert_eq!(occ("aaa", "aa"), [1, 2]);
        assert_eq!(occ("abc", "d"), Vec::<usize>::new());
        assert_eq!(
            w("ab").occurrences(&Word::empty()),
            Err(Error::EmptyPattern)
        );
    }

    #[test]
    fn occurrence_ordinals_count_from_left() {
        let occs = w("aaa").occurrences(&w("aa")).unwrap();
        assert_eq!(occs[0].ordinal, 1);
        assert_eq!(occs[1].ordinal, 2);
    }

    #[test]
    fn prefix_suffix_examples() {
        assert_eq!(words(&w("aba").prefixes_at(&w("a")).unwrap()), ["_", "ab"]);
        assert_eq!(words(&w("aba").suffixes_at(&w("a")).unwrap()), ["_", "ba"]);
        assert_eq!(
            words(&w("abab").prefixes_at(&w("ab")).unwrap()),
            ["_", "ab"]
        );
        assert_eq!(
            w("aba").prefixes_at(&Word::empty()),
            Err(Error::EmptyPattern)
        );
    }

    #[test]
    fn cross_at_examples() {
        let a = w("ab");
        let b = w("ba");
        let x = w("a");
        let i = a.occurrences(&x).unwrap()[0].clone();
        let j = b.occurrences(&x).unwrap()[0].clone();
        let both: Vec<String> = cross_at(&a, &b, &x, &i, &j, Mode::Two)
            .unwrap()
            .iter()
            .map(|t| t.output.to_string())
            .collect();
        assert_eq!(both, ["a", "bab"]);
        let one: Vec<String> = cross_at(&a, &b, &x, &i, &j, Mode::One)
            .unwrap()
            .iter()
            .map(|t| t.output.to_string())
            .collect();
        assert_eq!(one, ["a"]);
    }

    #[test]
    fn cross_at_identity_overlap() {
        let v = w("abc");
        let x = w("b");
        let i = v.occurrences(&x).unwrap()[0].clone();
        let traces = cross_at(&v, &v, &x, &i, &i, Mode::Two).unwrap();
        assert_eq!(traces.len(), 1);
        assert_eq!(traces[0].output, v);
    }

    #[test]
    fn cross_at_rejects_stale_occurrence() {
        let a = w("ab");
        let b = w("ba");
        let x = w("a");
        let bogus = OccurrenceRef {
            pattern: x.clone(),
            position: 2,
            ordinal: 1,
        };
        let j = b.occurrences(&x).unwrap()[0].clone();
        assert_eq!(
            cross_at(&a, &b, &x, &bogus, &j, Mode::Two),
            Err(Error::RuleAbsent)
        );
    }

    #[test]
    fn cross_rule_note_examples() {
        let got = cross_rule(&w("pabaq"), &w("rabas"), &w("aba"), Mode::Two).unwrap();
        assert_eq!(words(&crossing_words(&got)), ["pabas", "rabaq"]);

        let got = cross_rule(&w("pabaq"), &w("rabas"), &w("a"), Mode::Two).unwrap();
        assert_eq!(
            words(&crossing_words(&got)),
            ["pas", "raq", "pabas", "rabaq", "pababas", "rababaq"]
        );

        let got = cross_rule(&w("ab"), &w("cd"), &w("a"), Mode::Two).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn cross_pair_paper_table() {
        let p = |a: &str, b: &str| -> Vec<String> {
            words(&crossing_words(&cross_pair(
                &w(a),
                &w(b),
                &RuleSet::AllSymbols,
                Mode::Two,
            )))
        };
        assert_eq!(p("ab", "ba"), ["a", "b", "aba", "bab"]);
        assert_eq!(p("ab", "bb"), ["b", "ab", "bb", "abb"]);
        assert_eq!(p("ba", "bb"), ["b", "ba", "bb", "bba"]);
        assert_eq!(p("aa", "aaa"), ["a", "aa", "aaa", "aaaa"]);
    }

    #[test]
    fn epsilon_cross_examples() {
        assert_eq!(
            words(&epsilon_cross(&w("a"), &w("b"))),
            ["_", "a", "b", "ab", "ba"]
        );
        assert_eq!(words(&epsilon_cross(&w("a"), &w("a"))), ["_", "a", "aa"]);
        assert_eq!(words(&epsilon_cross(&Word::empty(), &Word::empty())), ["_"]);
    }

    #[test]
    fn corresponding_cross_examples() {
        assert_eq!(
            words(&corresponding_cross(&w("abcab"), &w("abab"))),
            ["abab", "abcab"]
        );
        assert!(corresponding_cross(&w("ab"), &w("ab")).is_empty());
        assert_eq!(
            words(&corresponding_cross(&w("abab"), &w("abab"))),
            ["abab"]
        );
    }

    #[test]
    fn word_list_round_trip() {
        let text = "# axioms\nab\n_\n\nba\n";
        let parsed = parse_word_list(text).unwrap();
        assert_eq!(parsed, vec![w("ab"), Word::empty(), w("ba")]);
        assert_eq!(format_word_list(&parsed), "ab\n_\nba\n");
    }

    #[test]
    fn word_token_errors() {
        assert!("a_b".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert!("a b".parse::<Word>().is_err());
    }

    #[test]
    fn shortlex_order() {
        let mut set = BTreeSet::new();
        set.extend([w("ba"), w("b"), w("ab"), w("a")]);
        assert_eq!(words(&set), ["a", "b", "ab", "ba"]);
    }

    #[test]
    fn ruleset_strings_rejects_epsilon() {
        assert_eq!(RuleSet::strings([Word::empty()]), Err(Error::EmptyPattern));
    }
}
