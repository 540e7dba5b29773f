//! Independent brute-force references and reproducible generators backing
//! the property suites. Everything here favours clarity over speed and is
//! meant for words of length ten or less; none of it shares code with the
//! engines it checks.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::Regex;
use crate::finlang::FiniteLanguage;
use crate::words::{Mode, RuleSet, Symbol, Word};

fn concat3(a: &[Symbol], b: &[Symbol], c: &[Symbol]) -> Word {
    Word::from_symbols(a.iter().chain(b).chain(c).copied())
}

/// All crossover outputs for one non-empty rule word, by direct slicing.
pub fn naive_cross_rule(w1: &Word, w2: &Word, x: &Word, mode: Mode) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let (s1, s2, xs) = (w1.symbols(), w2.symbols(), x.symbols());
    if xs.is_empty() || xs.len() > s1.len() || xs.len() > s2.len() {
        return out;
    }
    for i in 0..=s1.len() - xs.len() {
        if &s1[i..i + xs.len()] != xs {
            continue;
        }
        for j in 0..=s2.len() - xs.len() {
            if &s2[j..j + xs.len()] != xs {
                continue;
            }
            out.insert(concat3(&s1[..i], xs, &s2[j + xs.len()..]));
            if mode == Mode::Two {
                out.insert(concat3(&s2[..j], xs, &s1[i + xs.len()..]));
            }
        }
    }
    out
}

/// Union of crossovers over every common non-empty factor, computed without
/// the symbol-reduction shortcut.
pub fn naive_cross_all_factors(w1: &Word, w2: &Word, mode: Mode) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut seen_factors = BTreeSet::new();
    let s1 = w1.symbols();
    for i in 0..s1.len() {
        for j in i + 1..=s1.len() {
            let x = Word::from_symbols(s1[i..j].iter().copied());
            if seen_factors.insert(x.clone()) {
                out.extend(naive_cross_rule(w1, w2, &x, mode));
            }
        }
    }
    out
}

/// Crossover over a resolved rule list, naive path.
pub fn naive_cross_rules(w1: &Word, w2: &Word, rules: &[Word], mode: Mode) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for x in rules {
        out.extend(naive_cross_rule(w1, w2, x, mode));
    }
    out
}

/// Left-to-right chain membership: `w = u0·x1·u1·x2·...·xk·uk` where
/// `u0·x1` is a prefix of some axiom ending with an occurrence of `x1`, each
/// `xi·ui·xi+1` sits inside an axiom with those occurrence contexts, and
/// `xk·uk` is an axiom suffix starting with `xk`. `k = 0` means `w` is an
/// axiom. This is the independent cross-check of the closure automaton.
pub fn chain_membership(w: &Word, axioms: &FiniteLanguage, rules: &RuleSet) -> bool {
    if axioms.contains(w) {
        return true;
    }
    if w.is_empty() {
        return false;
    }
    let alphabet = axioms.alphabet();
    let rule_words = rules.resolve(&alphabet);
    let ws = w.symbols();

    // Rule occurrences in w as (start, end) pairs, 0-based half-open.
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    for x in &rule_words {
        let xs = x.symbols();
        if xs.is_empty() || xs.len() > ws.len() {
            continue;
        }
        for i in 0..=ws.len() - xs.len() {
            if &ws[i..i + xs.len()] == xs {
                nodes.push((i, i + xs.len()));
            }
        }
    }
    nodes.sort_unstable();
    nodes.dedup();

    let occurs_in_axiom = |piece: &[Symbol]| -> bool {
        axioms.words().any(|a| {
            let al = a.symbols();
            al.len() >= piece.len()
                && (0..=al.len() - piece.len()).any(|q| &al[q..q + piece.len()] == piece)
        })
    };
    let is_axiom_prefix = |piece: &[Symbol]| -> bool {
        axioms
            .words()
            .any(|a| a.len() >= piece.len() && &a.symbols()[..piece.len()] == piece)
    };
    let is_axiom_suffix = |piece: &[Symbol]| -> bool {
        axioms
            .words()
            .any(|a| a.len() >= piece.len() && &a.symbols()[a.len() - piece.len()..] == piece)
    };

    let mut alive: Vec<bool> = nodes
        .iter()
        .map(|&(_, e)| is_axiom_prefix(&ws[..e]))
        .collect();
    let mut queue: Vec<usize> = (0..nodes.len()).filter(|&i| alive[i]).collect();
    while let Some(ni) = queue.pop() {
        let (s, e) = nodes[ni];
        if is_axiom_suffix(&ws[s..]) {
            return true;
        }
        for (nj, &(s2, e2)) in nodes.iter().enumerate() {
            // Consecutive cut occurrences may overlap inside the shared
            // entry occurrence, but never reach back before it.
            if alive[nj] || s2 < s || e2 < e || (s2, e2) == (s, e) {
                continue;
            }
            if occurs_in_axiom(&ws[s..e2]) {
                alive[nj] = true;
                queue.push(nj);
            }
        }
    }
    false
}

/// Exhaustive bounded closure: iterate one-step crossover over the whole
/// retained set until nothing new appears, keeping intermediates up to
/// `cap`, and report the words up to `target_len`. Used with `cap` and
/// `2·cap` to confirm stability.
///
/// One step over a set is computed per rule as `P·x·S` with `P` all prefixes
/// before an `x` occurrence and `S` all suffixes after one; unfolding the
/// definitions this is exactly the union of pair crossovers over all ordered
/// pairs, but the cost stays proportional to the output instead of the
/// square of the set.
pub fn bounded_closure_reference(
    axioms: &FiniteLanguage,
    rules: &RuleSet,
    target_len: usize,
    cap: usize,
) -> FiniteLanguage {
    assert!(cap >= target_len, "cap must cover the target length");
    let alphabet = axioms.alphabet();
    let rule_words = rules.resolve(&alphabet);
    let mut reached: BTreeSet<Word> = axioms.words().filter(|w| w.len() <= cap).cloned().collect();
    loop {
        let mut fresh: BTreeSet<Word> = BTreeSet::new();
        for x in &rule_words {
            let xs = x.symbols();
            let mut prefixes: std::collections::BTreeMap<usize, BTreeSet<Word>> =
                std::collections::BTreeMap::new();
            let mut suffixes: std::collections::BTreeMap<usize, BTreeSet<Word>> =
                std::collections::BTreeMap::new();
            for w in &reached {
                let ws = w.symbols();
                if ws.len() < xs.len() {
                    continue;
                }
                for i in 0..=ws.len() - xs.len() {
                    if &ws[i..i + xs.len()] == xs {
                        let p = w.factor(0, i);
                        let s = w.factor(i + xs.len(), w.len());
                        prefixes.entry(p.len()).or_default().insert(p);
                        suffixes.entry(s.len()).or_default().insert(s);
                    }
                }
            }
            for (&pl, ps) in &prefixes {
                for (&sl, ss) in &suffixes {
                    if pl + xs.len() + sl > cap {
                        continue;
                    }
                    for p in ps {
                        for s in ss {
                            let candidate = concat3(p.symbols(), xs, s.symbols());
                            if !reached.contains(&candidate) {
                                fresh.insert(candidate);
                            }
                        }
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        reached.extend(fresh);
    }
    FiniteLanguage::new(reached.into_iter().filter(|w| w.len() <= target_len))
        .expect("crossover outputs are never empty")
}

const ALPHABET_POOL: [char; 6] = ['a', 'b', 'c', 'd', 'e', 'f'];

/// Reproducible word corpus: identical seeds give identical output.
pub fn gen_words(seed: u64, alphabet_size: usize, max_len: usize, count: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = alphabet_size.clamp(1, ALPHABET_POOL.len());
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.max(1));
            Word::from_chars((0..len).map(|_| ALPHABET_POOL[rng.gen_range(0..size)]))
        })
        .collect()
}

/// Reproducible finite-language corpus.
pub fn gen_finite_langs(
    seed: u64,
    alphabet_size: usize,
    max_words: usize,
    max_len: usize,
    count: usize,
) -> Vec<FiniteLanguage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = alphabet_size.clamp(1, ALPHABET_POOL.len());
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_words.max(1));
            let words = (0..n).map(|_| {
                let len = rng.gen_range(1..=max_len.max(1));
                Word::from_chars((0..len).map(|_| ALPHABET_POOL[rng.gen_range(0..size)]))
            });
            FiniteLanguage::new(words).expect("generated words are non-empty")
        })
        .collect()
}

/// Reproducible random rule set over the given alphabet: all symbols, a
/// non-empty symbol subset, or strings of length at most two.
pub fn gen_rule_set(rng: &mut ChaCha8Rng, alphabet: &BTreeSet<Symbol>) -> RuleSet {
    let syms: Vec<Symbol> = alphabet.iter().copied().collect();
    match rng.gen_range(0..3) {
        0 => RuleSet::AllSymbols,
        1 => {
            let k = rng.gen_range(1..=syms.len());
            let mut chosen = BTreeSet::new();
            while chosen.len() < k {
                chosen.insert(syms[rng.gen_range(0..syms.len())]);
            }
            RuleSet::Symbols(chosen)
        }
        _ => {
            let k = rng.gen_range(1..=2);
            let mut words = BTreeSet::new();
            for _ in 0..k {
                let len = rng.gen_range(1..=2);
                words.insert(Word::from_symbols(
                    (0..len).map(|_| syms[rng.gen_range(0..syms.len())]),
                ));
            }
            RuleSet::Strings(words)
        }
    }
}

/// Reproducible regex corpus, biased toward star-height at most two and
/// languages that do not contain the empty word. Every generated regex
/// parses back from its printed form.
pub fn gen_regexes(seed: u64, depth: usize, count: usize) -> Vec<Regex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| gen_regex(&mut rng, depth, 2, true))
        .collect()
}

fn gen_regex(
    rng: &mut ChaCha8Rng,
    depth: usize,
    stars_left: usize,
    require_nonempty: bool,
) -> Regex {
    let sym = |rng: &mut ChaCha8Rng| Regex::Symbol(Symbol(ALPHABET_POOL[rng.gen_range(0..3)]));
    if depth == 0 {
        return sym(rng);
    }
    match rng.gen_range(0..10) {
        0..=2 => sym(rng),
        3..=5 => Regex::Concat(
            Box::new(gen_regex(rng, depth - 1, stars_left, require_nonempty)),
            Box::new(gen_regex(rng, depth - 1, stars_left, false)),
        ),
        6..=7 => Regex::Union(
            Box::new(gen_regex(rng, depth - 1, stars_left, require_nonempty)),
            Box::new(gen_regex(rng, depth - 1, stars_left, require_nonempty)),
        ),
        8 => Regex::Plus(Box::new(gen_regex(
            rng,
            depth - 1,
            stars_left,
            require_nonempty,
        ))),
        _ => {
            if stars_left == 0 {
                sym(rng)
            } else if require_nonempty {
                // A starred tail keeps the language epsilon-free only when
                // something non-empty precedes it.
                Regex::Concat(
                    Box::new(gen_regex(rng, depth - 1, stars_left - 1, true)),
                    Box::new(Regex::Star(Box::new(gen_regex(
                        rng,
                        depth - 1,
                        stars_left - 1,
                        false,
                    )))),
                )
            } else {
                Regex::Star(Box::new(gen_regex(rng, depth - 1, stars_left - 1, false)))
            }
        }
    }
}

/// Suite scales, overridable through the environment: `CROSSKIT_SEED`,
/// `CROSSKIT_WORD_PAIRS`, `CROSSKIT_FINITE_LANGS`, `CROSSKIT_REGEXES`.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub word_pairs: usize,
    pub finite_langs: usize,
    pub regexes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0xC0551E,
            word_pairs: 10_000,
            finite_langs: 1_000,
            regexes: 1_000,
        }
    }
}

impl SuiteConfig {
    pub fn from_env() -> Self {
        fn read<T: std::str::FromStr>(name: &str) -> Option<T> {
            std::env::var(name).ok().and_then(|v| v.parse().ok())
        }
        let mut cfg = SuiteConfig::default();
        if let Some(seed) = read("CROSSKIT_SEED") {
            cfg.seed = seed;
        }
        if let Some(n) = read("CROSSKIT_WORD_PAIRS") {
            cfg.word_pairs = n;
        }
        if let Some(n) = read("CROSSKIT_FINITE_LANGS") {
            cfg.finite_langs = n;
        }
        if let Some(n) = read("CROSSKIT_REGEXES") {
            cfg.regexes = n;
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::parse_regex;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn lang(words: &[&str]) -> FiniteLanguage {
        FiniteLanguage::new(words.iter().map(|s| w(s))).unwrap()
    }

    #[test]
    fn naive_cross_examples() {
        let got = naive_cross_all_factors(&w("ab"), &w("ba"), Mode::Two);
        let strs: Vec<String> = got.iter().map(|x| x.to_string()).collect();
        assert_eq!(strs, ["a", "b", "aba", "bab"]);

        let via_rule = naive_cross_rule(&w("pabaq"), &w("rabas"), &w("aba"), Mode::Two);
        let all = naive_cross_all_factors(&w("pabaq"), &w("rabas"), Mode::Two);
        assert!(via_rule.is_subset(&all));

        let got = naive_cross_all_factors(&w("a"), &w("a"), Mode::Two);
        assert_eq!(got, BTreeSet::from([w("a")]));
    }

    #[test]
    fn chain_membership_examples() {
        let axioms = lang(&["aabb", "aaabbb"]);
        assert!(chain_membership(&w("aab"), &axioms, &RuleSet::AllSymbols));
        assert!(!chain_membership(&w("ba"), &axioms, &RuleSet::AllSymbols));
        assert!(chain_membership(
            &w("aabb"),
            &lang(&["aabb"]),
            &RuleSet::AllSymbols
        ));
    }

    #[test]
    fn bounded_reference_examples() {
        let got = bounded_closure_reference(&lang(&["aa"]), &RuleSet::AllSymbols, 5, 8);
        let strs: Vec<String> = got.words().map(|x| x.to_string()).collect();
        assert_eq!(strs, ["a", "aa", "aaa", "aaaa", "aaaaa"]);

        let doubled = bounded_closure_reference(&lang(&["aa"]), &RuleSet::AllSymbols, 5, 16);
        assert_eq!(got, doubled);

        let got = bounded_closure_reference(&lang(&["ab"]), &RuleSet::symbols([Symbol('a')]), 4, 8);
        let strs: Vec<String> = got.words().map(|x| x.to_string()).collect();
        assert_eq!(strs, ["ab"]);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_words(7, 2, 8, 50), gen_words(7, 2, 8, 50));
        let langs = gen_finite_langs(7, 2, 4, 5, 20);
        assert_eq!(langs, gen_finite_langs(7, 2, 4, 5, 20));
        for l in &langs {
            for word in l.words() {
                assert!(word.alphabet().iter().all(|s| s.0 == 'a' || s.0 == 'b'));
                assert!(word.len() <= 5);
            }
        }
    }

    #[test]
    fn generated_regexes_parse_back() {
        for r in gen_regexes(11, 4, 100) {
            let printed = r.to_string();
            let back = parse_regex(&printed).unwrap();
            assert_eq!(back, r);
        }
    }
}
