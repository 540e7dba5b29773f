//! Byte-stable automaton JSON and Graphviz DOT export.
//!
//! Schema, keys in this order: `alphabet` (sorted array of 1-char strings),
//! `states` (sorted array of names), `start` (array), `accept` (sorted
//! array), `transitions` (array of `{from,on,to}` objects, sorted
//! lexicographically). A reserved `x-provenance` key may follow; the plain
//! reader ignores it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::words::Symbol;

use super::Nfa;

#[derive(Serialize, Deserialize)]
pub(crate) struct AutomatonJson {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub start: Vec<String>,
    pub accept: Vec<String>,
    pub transitions: Vec<TransitionJson>,
    #[serde(
        rename = "x-provenance",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub x_provenance: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct TransitionJson {
    pub from: String,
    pub on: String,
    pub to: String,
}

pub(crate) fn encode(nfa: &Nfa, provenance: Option<serde_json::Value>) -> AutomatonJson {
    let name = |s: usize| s.to_string();
    let mut states: Vec<String> = (0..nfa.state_count()).map(name).collect();
    states.sort();
    let mut start: Vec<String> = nfa.starts().iter().map(|&s| name(s)).collect();
    start.sort();
    let mut accept: Vec<String> = nfa.accepts_set().iter().map(|&s| name(s)).collect();
    accept.sort();
    let mut transitions: Vec<TransitionJson> = nfa
        .transitions()
        .iter()
        .map(|&(p, a, q)| TransitionJson {
            from: name(p),
            on: a.0.to_string(),
            to: name(q),
        })
        .collect();
    transitions.sort();
    AutomatonJson {
        alphabet: nfa.alphabet().iter().map(|s| s.0.to_string()).collect(),
        states,
        start,
        accept,
        transitions,
        x_provenance: provenance,
    }
}

/// Serializes an automaton to its canonical JSON bytes.
pub fn to_json(nfa: &Nfa) -> Vec<u8> {
    serde_json::to_vec(&encode(nfa, None)).expect("automaton JSON always serializes")
}

pub(crate) fn decode(doc: &AutomatonJson) -> Result<Nfa, Error> {
    let mut alphabet = BTreeSet::new();
    for (i, entry) in doc.alphabet.iter().enumerate() {
        let mut chars = entry.chars();
        let c = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => {
                return Err(Error::schema(
                    format!("alphabet[{}]", i),
                    "expected a single character",
                ))
            }
        };
        if !alphabet.insert(Symbol(c)) {
            return Err(Error::schema(
                format!("alphabet[{}]", i),
                "duplicate symbol",
            ));
        }
    }
    if alphabet.len() > 64 {
        return Err(Error::AlphabetTooLarge);
    }

    let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
    // Canonical files name states by decimal index; honour that numbering so
    // serialization round-trips byte for byte. Other files get order of
    // appearance.
    let numeric: Option<Vec<usize>> = doc.states.iter().map(|s| s.parse::<usize>().ok()).collect();
    let canonical_names = match &numeric {
        Some(nums) => {
            let mut sorted = nums.clone();
            sorted.sort_unstable();
            sorted == (0..doc.states.len()).collect::<Vec<_>>()
        }
        None => false,
    };
    for (i, name) in doc.states.iter().enumerate() {
        let id = if canonical_names {
            numeric.as_ref().expect("checked")[i]
        } else {
            ids.len()
        };
        if ids.insert(name.as_str(), id).is_some() {
            return Err(Error::schema(format!("states[{}]", i), "duplicate state"));
        }
    }

    let resolve = |name: &str, path: String| -> Result<usize, Error> {
        ids.get(name)
            .copied()
            .ok_or_else(|| Error::schema(path, "unknown state"))
    };

    let mut starts = BTreeSet::new();
    for (i, name) in doc.start.iter().enumerate() {
        starts.insert(resolve(name, format!("start[{}]", i))?);
    }
    let mut accepts = BTreeSet::new();
    for (i, name) in doc.accept.iter().enumerate() {
        accepts.insert(resolve(name, format!("accept[{}]", i))?);
    }
    let mut transitions = BTreeSet::new();
    for (i, t) in doc.transitions.iter().enumerate() {
        let path = format!("transitions[{}]", i);
        let from = resolve(&t.from, path.clone())?;
        let to = resolve(&t.to, path.clone())?;
        let mut chars = t.on.chars();
        let sym = match (chars.next(), chars.next()) {
            (Some(c), None) => Symbol(c),
            _ => return Err(Error::schema(path, "expected a single-character label")),
        };
        if !alphabet.contains(&sym) {
            return Err(Error::schema(path, "label not in alphabet"));
        }
        if !transitions.insert((from, sym, to)) {
            return Err(Error::schema(path, "duplicate transition"));
        }
    }
    Nfa::new(doc.states.len(), alphabet, starts, accepts, transitions)
}

/// Parses automaton JSON, validating the schema. A deterministic automaton
/// comes back as an [`Nfa`] with a single start; convert with
/// [`Nfa::determinize`] if determinism is needed.
pub fn from_json(bytes: &[u8]) -> Result<Nfa, Error> {
    let doc: AutomatonJson =
        serde_json::from_slice(bytes).map_err(|e| Error::schema("$", e.to_string()))?;
    decode(&doc)
}

/// Graphviz DOT text: left-to-right layout, states labeled by index, accepts
/// drawn as double circles. Line order is deterministic.
pub fn to_dot(nfa: &Nfa) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for &s in nfa.accepts_set() {
        out.push_str(&format!("  {} [shape=doublecircle];\n", s));
    }
    for (i, &s) in nfa.starts().iter().enumerate() {
        out.push_str(&format!("  __start{} [shape=point];\n", i));
        out.push_str(&format!("  __start{} -> {};\n", i, s));
    }
    for &(p, a, q) in nfa.transitions() {
        out.push_str(&format!("  {} -> {} [label=\"{}\"];\n", p, q, a.0));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{canonical_dfa, parse_regex, regex_to_nfa};

    #[test]
    fn round_trip_on_canonical_automata() {
        let dfa = canonical_dfa(&regex_to_nfa(&parse_regex("a+b+").unwrap()));
        let bytes = to_json(&dfa.as_nfa());
        let back = from_json(&bytes).unwrap();
        assert_eq!(to_json(&back), bytes);
    }

    #[test]
    fn duplicate_transition_is_schema_error() {
        let text = r#"{"alphabet":["a"],"states":["0","1"],"start":["0"],"accept":["1"],
            "transitions":[{"from":"0","on":"a","to":"1"},{"from":"0","on":"a","to":"1"}]}"#;
        match from_json(text.as_bytes()) {
            Err(Error::SchemaError { path, .. }) => assert_eq!(path, "transitions[1]"),
            other => panic!("expected schema error, got {:?}", other),
        }
    }

    #[test]
    fn dot_is_line_stable() {
        let dfa = canonical_dfa(&regex_to_nfa(&parse_regex("a+b+").unwrap()));
        let a = to_dot(&dfa.as_nfa());
        let b = to_dot(&dfa.as_nfa());
        assert_eq!(a, b);
        assert!(a.contains("rankdir=LR"));
        assert!(a.contains("doublecircle"));
    }

    #[test]
    fn unknown_state_reference() {
        let text =
            r#"{"alphabet":["a"],"states":["0"],"start":["0"],"accept":["9"],"transitions":[]}"#;
        assert!(matches!(
            from_json(text.as_bytes()),
            Err(Error::SchemaError { .. })
        ));
    }
}
