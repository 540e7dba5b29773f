//! Reference splicing engines: general quadruple rules, null-context rules
//! and simple (single-symbol) rules, with a bounded iterated closure and a
//! differential harness against the crossover closure automaton.
//!
//! These engines share nothing with the crossover machinery above the word
//! type, which is what makes the differential comparison meaningful.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automata::enumerate_upto;
use crate::closure::jump_closure_finite;
use crate::error::Error;
use crate::finlang::{FiniteLanguage, IterationBudget};
use crate::words::{RuleSet, Symbol, Word};

/// A general splicing rule `u1#u2$u3#u4`: applicable to `x1·u1·u2·x2` and
/// `y1·u3·u4·y2`, producing `x1·u1·u4·y2` (and `y1·u3·u2·x2`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpliceRule {
    pub u1: Word,
    pub u2: Word,
    pub u3: Word,
    pub u4: Word,
}

/// The rule inventory of a splice system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpliceRules {
    Full(BTreeSet<SpliceRule>),
    NullContext(BTreeSet<Word>),
    Simple(BTreeSet<Symbol>),
}

/// A splice system: alphabet, axioms and rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpliceSystem {
    pub alphabet: BTreeSet<Symbol>,
    pub axioms: FiniteLanguage,
    pub rules: SpliceRules,
}

/// One or both splice outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpliceMode {
    One,
    Two,
}

/// All results of splicing `x` with `y` under one rule, over every pair of
/// matching decompositions. Empty when the rule does not apply.
pub fn splice_once(x: &Word, y: &Word, r: &SpliceRule, mode: SpliceMode) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let left_site = r.u1.concat(&r.u2);
    let right_site = r.u3.concat(&r.u4);
    for i in 0..=x.len() {
        if i + left_site.len() > x.len() || x.factor(i, i + left_site.len()) != left_site {
            continue;
        }
        let x1 = x.factor(0, i);
        let x2 = x.factor(i + left_site.len(), x.len());
        for j in 0..=y.len() {
            if j + right_site.len() > y.len() || y.factor(j, j + right_site.len()) != right_site {
                continue;
            }
            let y1 = y.factor(0, j);
            let y2 = y.factor(j + right_site.len(), y.len());
            out.insert(x1.concat(&r.u1).concat(&r.u4).concat(&y2));
            if mode == SpliceMode::Two {
                out.insert(y1.concat(&r.u3).concat(&r.u2).concat(&x2));
            }
        }
    }
    out
}

/// A null-context rule word `r` as a quadruple `r#_$r#_`.
pub fn null_context_rule(r: &Word) -> SpliceRule {
    SpliceRule {
        u1: r.clone(),
        u2: Word::empty(),
        u3: r.clone(),
        u4: Word::empty(),
    }
}

fn rule_words(rules: &SpliceRules) -> Option<Vec<Word>> {
    match rules {
        SpliceRules::Simple(syms) => Some(syms.iter().map(|&s| Word::from_symbols([s])).collect()),
        SpliceRules::NullContext(words) => Some(words.iter().cloned().collect()),
        SpliceRules::Full(_) => None,
    }
}

/// One splice round over a whole word set.
///
/// For simple and null-context rules this uses the set formulation: the
/// results for rule `r` are exactly `P·r·S` with `P` the prefixes before an
/// `r` occurrence and `S` the suffixes after one, which keeps dense rounds
/// proportional to the output size. Full quadruple rules fall back to pair
/// enumeration.
fn splice_round(words: &BTreeSet<Word>, rules: &SpliceRules, cap: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    match rule_words(rules) {
        Some(rws) => {
            for r in &rws {
                if r.is_empty() {
                    continue;
                }
                let mut prefixes: BTreeMap<usize, BTreeSet<Word>> = BTreeMap::new();
                let mut suffixes: BTreeMap<usize, BTreeSet<Word>> = BTreeMap::new();
                for w in words {
                    if w.len() < r.len() {
                        continue;
                    }
                    for i in 0..=w.len() - r.len() {
                        if w.factor(i, i + r.len()) == *r {
                            let p = w.factor(0, i);
                            let s = w.factor(i + r.len(), w.len());
                            prefixes.entry(p.len()).or_default().insert(p);
                            suffixes.entry(s.len()).or_default().insert(s);
                        }
                    }
                }
                for (&pl, ps) in &prefixes {
                    for (&sl, ss) in &suffixes {
                        if pl + r.len() + sl > cap {
                            continue;
                        }
                        for p in ps {
                            for s in ss {
                                out.insert(p.concat(r).concat(s));
                            }
                        }
                    }
                }
            }
        }
        None => {
            if let SpliceRules::Full(rules) = rules {
                for r in rules {
                    for x in words {
                        for y in words {
                            for w in splice_once(x, y, r, SpliceMode::Two) {
                                if w.len() <= cap {
                                    out.insert(w);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Result of a bounded splice closure.
#[derive(Debug, Clone)]
pub struct SigmaClosure {
    pub kept: BTreeSet<Word>,
    pub reached: BTreeSet<Word>,
    pub fixpoint: bool,
}

/// Bounded iteration of the splice operator: each round adds every splice of
/// the words reached so far, truncated by the budget.
pub fn sigma_closure_bounded(system: &SpliceSystem, budget: &IterationBudget) -> SigmaClosure {
    let cap = budget.max_intermediate_len;
    let mut reached: BTreeSet<Word> = system
        .axioms
        .words()
        .filter(|w| w.len() <= cap)
        .cloned()
        .collect();
    let mut fixpoint = false;
    for _ in 0..budget.max_rounds {
        let round = splice_round(&reached, &system.rules, cap);
        let before = reached.len();
        reached.extend(round);
        if reached.len() == before {
            fixpoint = true;
            break;
        }
    }
    let kept = reached
        .iter()
        .filter(|w| w.len() <= budget.max_word_len)
        .cloned()
        .collect();
    SigmaClosure {
        kept,
        reached,
        fixpoint,
    }
}

/// Report of a differential run between the splice closure and the crossover
/// closure automaton, compared on all words up to the requested length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialReport {
    pub equal: bool,
    pub only_crossover: BTreeSet<Word>,
    pub only_splice: BTreeSet<Word>,
}

/// Compares the bounded splice closure (simple rules for a symbol rule set,
/// null-context rules for a string rule set) against the crossover closure
/// automaton, on words of length at most `n`.
pub fn differential_vs_crossover(
    axioms: &FiniteLanguage,
    rules: &RuleSet,
    n: usize,
) -> Result<DifferentialReport, Error> {
    let splice_rules = match rules {
        RuleSet::Symbols(syms) => SpliceRules::Simple(syms.clone()),
        RuleSet::Strings(words) => SpliceRules::NullContext(words.clone()),
        RuleSet::AllSymbols => SpliceRules::Simple(axioms.alphabet()),
    };
    let system = SpliceSystem {
        alphabet: axioms.alphabet(),
        axioms: axioms.clone(),
        rules: splice_rules,
    };
    let budget = IterationBudget::default_for(axioms, rules, n);
    let sigma = sigma_closure_bounded(&system, &budget);

    let closure = jump_closure_finite(axioms, rules)?;
    let crossover: BTreeSet<Word> = enumerate_upto(&closure.nfa, n);

    let only_crossover: BTreeSet<Word> = crossover.difference(&sigma.kept).cloned().collect();
    let only_splice: BTreeSet<Word> = sigma.kept.difference(&crossover).cloned().collect();
    Ok(DifferentialReport {
        equal: only_crossover.is_empty() && only_splice.is_empty(),
        only_crossover,
        only_splice,
    })
}

#[derive(Serialize, Deserialize)]
struct SpliceSystemJson {
    alphabet: Vec<String>,
    axioms: Vec<String>,
    rules: SpliceRulesJson,
}

#[derive(Serialize, Deserialize)]
struct SpliceRulesJson {
    kind: String,
    items: Vec<serde_json::Value>,
}

impl SpliceSystem {
    /// Parses the splice-system JSON: `{alphabet, axioms: [words], rules:
    /// {kind: "simple"|"null-context"|"full", items: [...]}}`. Full rules are
    /// four-element word arrays.
    pub fn from_json(bytes: &[u8]) -> Result<SpliceSystem, Error> {
        let doc: SpliceSystemJson =
            serde_json::from_slice(bytes).map_err(|e| Error::schema("$", e.to_string()))?;
        let mut alphabet = BTreeSet::new();
        for (i, entry) in doc.alphabet.iter().enumerate() {
            let mut chars = entry.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => {
                    alphabet.insert(Symbol(c));
                }
                _ => {
                    return Err(Error::schema(
                        format!("alphabet[{}]", i),
                        "expected a single character",
                    ))
                }
            }
        }
        let mut axiom_words = Vec::new();
        for (i, entry) in doc.axioms.iter().enumerate() {
            let w: Word = entry
                .parse()
                .map_err(|_| Error::schema(format!("axioms[{}]", i), "bad word"))?;
            axiom_words.push(w);
        }
        let axioms = FiniteLanguage::new(axiom_words)?;
        let word_at = |v: &serde_json::Value, path: String| -> Result<Word, Error> {
            v.as_str()
                .ok_or_else(|| Error::schema(path.clone(), "expected a string"))?
                .parse()
                .map_err(|_| Error::schema(path, "bad word"))
        };
        let rules = match doc.rules.kind.as_str() {
            "simple" => {
                let mut syms = BTreeSet::new();
                for (i, item) in doc.rules.items.iter().enumerate() {
                    let w = word_at(item, format!("rules.items[{}]", i))?;
                    if w.len() != 1 {
                        return Err(Error::schema(
                            format!("rules.items[{}]", i),
                            "simple rules are single symbols",
                        ));
                    }
                    syms.insert(w.first().expect("length checked"));
                }
                SpliceRules::Simple(syms)
            }
            "null-context" => {
                let mut words = BTreeSet::new();
                for (i, item) in doc.rules.items.iter().enumerate() {
                    let w = word_at(item, format!("rules.items[{}]", i))?;
                    if w.is_empty() {
                        return Err(Error::schema(
                            format!("rules.items[{}]", i),
                            "null-context rules are non-empty words",
                        ));
                    }
                    words.insert(w);
                }
                SpliceRules::NullContext(words)
            }
            "full" => {
                let mut rules = BTreeSet::new();
                for (i, item) in doc.rules.items.iter().enumerate() {
                    let path = format!("rules.items[{}]", i);
                    let arr = item
                        .as_array()
                        .ok_or_else(|| Error::schema(path.clone(), "expected an array"))?;
                    if arr.len() != 4 {
                        return Err(Error::schema(path, "expected four words"));
                    }
                    rules.insert(SpliceRule {
                        u1: word_at(&arr[0], format!("{}[0]", i))?,
                        u2: word_at(&arr[1], format!("{}[1]", i))?,
                        u3: word_at(&arr[2], format!("{}[2]", i))?,
                        u4: word_at(&arr[3], format!("{}[3]", i))?,
                    });
                }
                SpliceRules::Full(rules)
            }
            other => {
                return Err(Error::schema(
                    "rules.kind",
                    format!("unknown kind `{}`", other),
                ))
            }
        };
        Ok(SpliceSystem {
            alphabet,
            axioms,
            rules,
        })
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

    #[test]
    fn splice_once_examples() {
        // a#_$a#_ framing `a` on both sides.
        let r = null_context_rule(&w("a"));
        let got = splice_once(&w("ab"), &w("ba"), &r, SpliceMode::Two);
        assert!(got.contains(&w("a")));

        let got = splice_once(
            &w("abb"),
            &w("abb"),
            &null_context_rule(&w("b")),
            SpliceMode::Two,
        );
        let strs: Vec<String> = got.iter().map(|x| x.to_string()).collect();
        assert_eq!(strs, ["ab", "abb", "abbb"]);

        // Simple rule on x1·a·x2 and y1·a·y2 keeps x1·a·y2.
        let got = splice_once(
            &w("ab"),
            &w("ab"),
            &null_context_rule(&w("a")),
            SpliceMode::One,
        );
        assert_eq!(got.iter().next(), Some(&w("ab")));
    }

    #[test]
    fn one_splicing_union_flipped_equals_two_splicing() {
        let r = null_context_rule(&w("b"));
        let x = w("abab");
        let y = w("bba");
        let mut lhs = splice_once(&x, &y, &r, SpliceMode::One);
        lhs.extend(splice_once(&y, &x, &r, SpliceMode::One));
        assert_eq!(lhs, splice_once(&x, &y, &r, SpliceMode::Two));
    }

    #[test]
    fn sigma_closure_examples() {
        let axioms = lang(&["aabb", "aaabbb"]);
        let system = SpliceSystem {
            alphabet: axioms.alphabet(),
            axioms: axioms.clone(),
            rules: SpliceRules::Simple(axioms.alphabet()),
        };
        let budget = IterationBudget::default_for(&axioms, &RuleSet::AllSymbols, 6);
        let got = sigma_closure_bounded(&system, &budget);
        assert!(got.fixpoint);
        let expected: BTreeSet<Word> = (2..=6)
            .flat_map(|n| (1..n).map(move |i| format!("{}{}", "a".repeat(i), "b".repeat(n - i))))
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(got.kept, expected);

        // No rules leaves the axioms untouched.
        let system = SpliceSystem {
            alphabet: axioms.alphabet(),
            axioms: axioms.clone(),
            rules: SpliceRules::Simple(BTreeSet::new()),
        };
        let got = sigma_closure_bounded(&system, &budget);
        assert_eq!(got.reached, axioms.as_set().clone());

        // Self-splice at the single bb occurrence is the identity.
        let axioms = lang(&["abba"]);
        let system = SpliceSystem {
            alphabet: axioms.alphabet(),
            axioms: axioms.clone(),
            rules: SpliceRules::NullContext(BTreeSet::from([w("bb")])),
        };
        let budget = IterationBudget::new(16, 6, 10).unwrap();
        let got = sigma_closure_bounded(&system, &budget);
        assert_eq!(got.kept, BTreeSet::from([w("abba")]));
    }

    #[test]
    fn differential_examples() {
        let report = differential_vs_crossover(
            &lang(&["aabb", "aaabbb"]),
            &RuleSet::symbols([Symbol('a'), Symbol('b')]),
            6,
        )
        .unwrap();
        assert!(report.equal, "{:?}", report);

        let report =
            differential_vs_crossover(&lang(&["abba", "bab"]), &RuleSet::symbols([Symbol('b')]), 6)
                .unwrap();
        assert!(report.equal, "{:?}", report);

        let report = differential_vs_crossover(
            &lang(&["abb", "bba", "bab"]),
            &RuleSet::strings([w("bb")]).unwrap(),
            7,
        )
        .unwrap();
        assert!(report.equal, "{:?}", report);
    }

    #[test]
    fn system_json_parses() {
        let text = r#"{"alphabet":["a","b"],"axioms":["aabb","aaabbb"],
            "rules":{"kind":"simple","items":["a","b"]}}"#;
        let system = SpliceSystem::from_json(text.as_bytes()).unwrap();
        assert_eq!(system.axioms.len(), 2);
        match system.rules {
            SpliceRules::Simple(syms) => assert_eq!(syms.len(), 2),
            other => panic!("unexpected rules {:?}", other),
        }

        let text = r#"{"alphabet":["a"],"axioms":["aa"],
            "rules":{"kind":"full","items":[["a","_","a","_"]]}}"#;
        let system = SpliceSystem::from_json(text.as_bytes()).unwrap();
        assert!(matches!(system.rules, SpliceRules::Full(_)));
    }
}
