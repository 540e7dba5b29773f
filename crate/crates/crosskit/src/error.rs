use thiserror::Error;

/// Errors shared by all modules of the crate.
///
/// Every fallible operation reports one of these; the CLI maps them onto its
/// exit-code contract.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The empty word was given where an overlap rule or search pattern is required.
    #[error("empty pattern: the overlap rule may not be the empty word")]
    EmptyPattern,
    /// An occurrence reference does not match the host word.
    #[error("rule occurrence does not match the host word")]
    RuleAbsent,
    /// The empty word was given where a non-empty word is required.
    #[error("the empty word is not allowed here")]
    EmptyWord,
    /// An axiom set (or finite language) may not contain the empty word.
    #[error("axiom sets may not contain the empty word")]
    EpsilonAxiom,
    /// Closure construction needs at least one axiom.
    #[error("axiom set is empty")]
    EmptyAxioms,
    /// The operation requires an epsilon-free regular language.
    #[error("the language contains the empty word")]
    EpsilonInLanguage,
    /// The block profile is not realised by any word.
    #[error("inconsistent block profile")]
    InconsistentProfile,
    /// The automaton does not carry closure provenance metadata.
    #[error("automaton does not carry closure provenance")]
    NotAClosure,
    /// Membership holds but no replayable derivation chain was found.
    #[error("derivation trace could not be reconstructed")]
    TraceIncomplete,
    /// Regex text failed to parse; `pos` is the 1-based character position.
    #[error("regex syntax error at position {pos}: {reason}")]
    RegexSyntax { pos: usize, reason: String },
    /// Automaton or splice-system JSON violated the schema; `path` points at the offender.
    #[error("schema error at {path}: {reason}")]
    SchemaError { path: String, reason: String },
    /// Alphabets are capped at 64 symbols.
    #[error("alphabet larger than 64 symbols")]
    AlphabetTooLarge,
    /// A word token failed to parse.
    #[error("word syntax error: {reason}")]
    WordSyntax { reason: String },
    /// An iteration budget with `max_intermediate_len < max_word_len`.
    #[error("inconsistent iteration budget")]
    BadBudget,
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::SchemaError {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
