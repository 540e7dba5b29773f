#![allow(dead_code)]

use crosskit::automata::{canonical_dfa, parse_regex, regex_to_nfa, Dfa, Nfa};
use crosskit::finlang::FiniteLanguage;
use crosskit::words::Word;

pub fn w(s: &str) -> Word {
    s.parse().unwrap()
}

pub fn lang(words: &[&str]) -> FiniteLanguage {
    FiniteLanguage::new(words.iter().map(|s| w(s))).unwrap()
}

pub fn re(s: &str) -> Nfa {
    regex_to_nfa(&parse_regex(s).unwrap())
}

pub fn dfa(s: &str) -> Dfa {
    canonical_dfa(&re(s))
}

pub fn strs<'a>(words: impl IntoIterator<Item = &'a Word>) -> Vec<String> {
    words.into_iter().map(|x| x.to_string()).collect()
}
