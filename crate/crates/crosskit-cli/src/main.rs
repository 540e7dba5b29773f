//! `crosskit`: sequential crossover of words and languages from the shell.
//!
//! Exit codes: 0 success, 1 failed assertion, 2 usage or I/O problem,
//! 3 malformed input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crosskit::automata::{
    canonical_dfa, from_json, parse_regex, regex_to_nfa, to_dot, to_json, Dfa, Nfa,
};
use crosskit::classify::{classify_report, Family};
use crosskit::closure::{
    cross_once_regular, jump_closure_finite, member_with_trace, verify_decomposition, ChainSegment,
    JumpClosure, Membership,
};
use crosskit::finlang::{cross_lang_traced, FiniteLanguage, IterationBudget};
use crosskit::splicing::{
    differential_vs_crossover, sigma_closure_bounded, SpliceRules, SpliceSystem,
};
use crosskit::words::{cross_pair, parse_word_list, CrossTrace, Mode, RuleSet, Symbol, Word};

#[derive(Parser)]
#[command(
    name = "crosskit",
    version,
    about = "Sequential crossover of words and languages"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct RuleArgs {
    /// Overlap rules: `all`, a string of symbols, or `@file` with one rule
    /// word per line.
    #[arg(long, default_value = "all")]
    rules: String,
}

#[derive(Args)]
struct ModeArg {
    /// Keep one output per overlap (1) or both (2).
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    mode: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Crossover of two words.
    Cross {
        w1: String,
        w2: String,
        #[command(flatten)]
        rules: RuleArgs,
        #[command(flatten)]
        mode: ModeArg,
        /// Print one derivation per output word.
        #[arg(long)]
        trace: bool,
    },
    /// Crossover of one or two finite languages from word-list files.
    Lang {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: Option<PathBuf>,
        #[command(flatten)]
        rules: RuleArgs,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Iterated-crossover closure of a finite axiom set, as an automaton.
    Close {
        #[arg(long)]
        axioms: PathBuf,
        #[command(flatten)]
        rules: RuleArgs,
        /// Emit the minimal canonical DFA instead of the raw closure.
        #[arg(long)]
        min: bool,
        /// Write automaton JSON here (defaults to standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write Graphviz DOT here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Membership in a closure automaton, optionally with a derivation.
    Member {
        #[arg(long)]
        closure: PathBuf,
        word: String,
        #[arg(long)]
        trace: bool,
    },
    /// One crossover step applied to a regular language.
    Once {
        #[arg(long)]
        lang: String,
        #[command(flatten)]
        rules: RuleArgs,
        #[command(flatten)]
        mode: ModeArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Base sets of a language, optionally checking the decomposition.
    Base {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        verify: bool,
    },
    /// Language-class report.
    Classify {
        #[arg(long)]
        lang: String,
        /// Comma-separated family names; all families when omitted.
        #[arg(long)]
        families: Option<String>,
        /// Scan bound for the local-testability window.
        #[arg(long)]
        kmax: Option<usize>,
        /// Exit 1 when any requested family fails.
        #[arg(long)]
        assert: bool,
    },
    /// Bounded splice closure of a splice system, optionally compared
    /// against the crossover closure.
    Splice {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        maxlen: usize,
        #[arg(long)]
        diff: bool,
    },
}

enum Failure {
    Assertion,
    Usage(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
        }
    }
}

impl From<crosskit::Error> for Failure {
    fn from(e: crosskit::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e)))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e)))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {}", path.display(), e)))
}

fn parse_word(text: &str) -> Result<Word, Failure> {
    text.parse::<Word>().map_err(Failure::from)
}

fn nonempty_word(text: &str) -> Result<Word, Failure> {
    let word = parse_word(text)?;
    if word.is_empty() {
        return Err(Failure::Input("the empty word is not allowed here".into()));
    }
    Ok(word)
}

fn parse_rules(spec: &str) -> Result<RuleSet, Failure> {
    if spec == "all" {
        return Ok(RuleSet::AllSymbols);
    }
    if let Some(path) = spec.strip_prefix('@') {
        let words = parse_word_list(&read_file(Path::new(path))?).map_err(Failure::from)?;
        return RuleSet::strings(words).map_err(Failure::from);
    }
    if spec.is_empty() {
        return Err(Failure::Usage("empty rule specification".into()));
    }
    Ok(RuleSet::symbols(spec.chars().map(Symbol)))
}

fn parse_mode(mode: u8) -> Mode {
    if mode == 1 {
        Mode::One
    } else {
        Mode::Two
    }
}

fn load_language_file(path: &Path) -> Result<FiniteLanguage, Failure> {
    let words = parse_word_list(&read_file(path)?).map_err(Failure::from)?;
    FiniteLanguage::new(words).map_err(Failure::from)
}

/// A language argument: inline regex, or `@file` dispatched on extension
/// (`.json` automaton, `.txt`/`.words` word list, anything else a regex
/// file).
fn load_language(spec: &str) -> Result<Dfa, Failure> {
    let nfa = load_language_nfa(spec)?;
    Ok(canonical_dfa(&nfa))
}

fn load_language_nfa(spec: &str) -> Result<Nfa, Failure> {
    if let Some(path) = spec.strip_prefix('@') {
        let path = Path::new(path);
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                return from_json(&read_bytes(path)?).map_err(Failure::from);
            }
            Some("txt") | Some("words") => {
                let lang = load_language_file(path)?;
                return Ok(crosskit::automata::finite_language_automaton(lang.words()));
            }
            _ => {
                let text = read_file(path)?;
                let regex = parse_regex(text.trim()).map_err(Failure::from)?;
                return Ok(regex_to_nfa(&regex));
            }
        }
    }
    let regex = parse_regex(spec).map_err(Failure::from)?;
    Ok(regex_to_nfa(&regex))
}

fn trace_line(trace: &CrossTrace) -> String {
    format!(
        "{}\t{} >-[{}@{},{}]-< {}",
        trace.output,
        trace.left,
        trace.rule,
        trace.left_cut.position,
        trace.right_cut.position,
        trace.right
    )
}

fn trace_json(trace: &CrossTrace) -> serde_json::Value {
    serde_json::json!({
        "output": trace.output.to_string(),
        "left": trace.left.to_string(),
        "right": trace.right.to_string(),
        "rule": trace.rule.to_string(),
        "left_position": trace.left_cut.position,
        "right_position": trace.right_cut.position,
    })
}

fn print_words<'a>(format: Format, words: impl Iterator<Item = &'a Word>) {
    match format {
        Format::Text => {
            for word in words {
                println!("{}", word);
            }
        }
        Format::Json => {
            let list: Vec<String> = words.map(|w| w.to_string()).collect();
            println!("{}", serde_json::json!({ "words": list }));
        }
    }
}

fn segment_text(seg: &ChainSegment) -> String {
    let cut = |occ: &Option<crosskit::words::OccurrenceRef>| match occ {
        Some(o) => format!("{}@{}", o.pattern, o.position),
        None => "-".to_string(),
    };
    format!(
        "{} in={} out={}",
        seg.axiom,
        cut(&seg.entry),
        cut(&seg.exit)
    )
}

fn segment_json(seg: &ChainSegment) -> serde_json::Value {
    let cut = |occ: &Option<crosskit::words::OccurrenceRef>| {
        occ.as_ref().map(
            |o| serde_json::json!({ "pattern": o.pattern.to_string(), "position": o.position }),
        )
    };
    serde_json::json!({
        "axiom": seg.axiom.to_string(),
        "in": cut(&seg.entry),
        "out": cut(&seg.exit),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Cross {
            w1,
            w2,
            rules,
            mode,
            trace,
        } => {
            let w1 = nonempty_word(&w1)?;
            let w2 = nonempty_word(&w2)?;
            let rules = parse_rules(&rules.rules)?;
            let crossing = cross_pair(&w1, &w2, &rules, parse_mode(mode.mode));
            match (cli.format, trace) {
                (Format::Text, false) => {
                    for word in crossing.keys() {
                        println!("{}", word);
                    }
                }
                (Format::Text, true) => {
                    for trace in crossing.values() {
                        println!("{}", trace_line(trace));
                    }
                }
                (Format::Json, with_trace) => {
                    let words: Vec<String> = crossing.keys().map(|w| w.to_string()).collect();
                    let mut doc = serde_json::json!({ "words": words });
                    if with_trace {
                        let traces: Vec<_> = crossing.values().map(trace_json).collect();
                        doc["traces"] = serde_json::Value::Array(traces);
                    }
                    println!("{}", doc);
                }
            }
            Ok(())
        }
        Command::Lang {
            input,
            input2,
            rules,
            mode,
        } => {
            let l1 = load_language_file(&input)?;
            let l2 = match &input2 {
                Some(path) => load_language_file(path)?,
                None => l1.clone(),
            };
            let rules = parse_rules(&rules.rules)?;
            let crossing = cross_lang_traced(&l1, &l2, &rules, parse_mode(mode.mode));
            print_words(cli.format, crossing.keys());
            Ok(())
        }
        Command::Close {
            axioms,
            rules,
            min,
            out,
            dot,
        } => {
            let axioms = load_language_file(&axioms)?;
            let rules = parse_rules(&rules.rules)?;
            let closure = jump_closure_finite(&axioms, &rules).map_err(Failure::from)?;
            let (json_bytes, nfa_for_dot) = if min {
                let canonical = canonical_dfa(&closure.nfa);
                (to_json(&canonical.as_nfa()), canonical.as_nfa())
            } else {
                (closure.to_json(), closure.nfa.clone())
            };
            match (&out, &dot) {
                (None, None) => {
                    println!("{}", String::from_utf8_lossy(&json_bytes));
                }
                _ => {
                    if let Some(path) = out {
                        write_file(&path, &json_bytes)?;
                    }
                    if let Some(path) = dot {
                        write_file(&path, to_dot(&nfa_for_dot).as_bytes())?;
                    }
                }
            }
            Ok(())
        }
        Command::Member {
            closure,
            word,
            trace,
        } => {
            let word = parse_word(&word)?;
            let bytes = read_bytes(&closure)?;
            match JumpClosure::from_json(&bytes) {
                Ok(closure) => {
                    let outcome = member_with_trace(&closure, &word).map_err(Failure::from)?;
                    match outcome {
                        Membership::Accept(chain) => match cli.format {
                            Format::Text => {
                                println!("accept");
                                if trace {
                                    for (i, seg) in chain.segments.iter().enumerate() {
                                        println!("segment {}: {}", i + 1, segment_text(seg));
                                    }
                                }
                            }
                            Format::Json => {
                                let mut doc = serde_json::json!({
                                    "word": word.to_string(),
                                    "accept": true,
                                });
                                if trace {
                                    let segs: Vec<_> =
                                        chain.segments.iter().map(segment_json).collect();
                                    doc["chain"] = serde_json::Value::Array(segs);
                                }
                                println!("{}", doc);
                            }
                        },
                        Membership::Reject => match cli.format {
                            Format::Text => println!("reject"),
                            Format::Json => println!(
                                "{}",
                                serde_json::json!({ "word": word.to_string(), "accept": false })
                            ),
                        },
                    }
                    Ok(())
                }
                Err(crosskit::Error::NotAClosure) if !trace => {
                    // Plain automata still answer membership; only traces
                    // require provenance.
                    let nfa = from_json(&bytes).map_err(Failure::from)?;
                    let accept = nfa.accepts(&word);
                    match cli.format {
                        Format::Text => println!("{}", if accept { "accept" } else { "reject" }),
                        Format::Json => println!(
                            "{}",
                            serde_json::json!({ "word": word.to_string(), "accept": accept })
                        ),
                    }
                    Ok(())
                }
                Err(e) => Err(Failure::from(e)),
            }
        }
        Command::Once {
            lang,
            rules,
            mode,
            out,
        } => {
            let dfa = load_language(&lang)?;
            let rules = parse_rules(&rules.rules)?;
            let once =
                cross_once_regular(&dfa, &rules, parse_mode(mode.mode)).map_err(Failure::from)?;
            let canonical = canonical_dfa(&once);
            write_file(&out, &to_json(&canonical.as_nfa()))
        }
        Command::Base { lang, verify } => {
            let dfa = load_language(&lang)?;
            let fmt_set = |items: Vec<String>| format!("{{{}}}", items.join(", "));
            if verify {
                let result = verify_decomposition(&dfa).map_err(Failure::from)?;
                match cli.format {
                    Format::Text => {
                        let b = &result.base;
                        println!(
                            "B = {}",
                            fmt_set(b.blocks.iter().map(|x| x.to_string()).collect())
                        );
                        println!(
                            "S = {}",
                            fmt_set(b.starts.iter().map(|x| x.to_string()).collect())
                        );
                        println!(
                            "E = {}",
                            fmt_set(b.ends.iter().map(|x| x.to_string()).collect())
                        );
                        println!(
                            "units = {}",
                            fmt_set(b.units.iter().map(|x| x.to_string()).collect())
                        );
                        println!("decomposition = {}", result.holds);
                        if let Some(witness) = &result.witness {
                            println!("witness = {}", witness);
                        }
                    }
                    Format::Json => {
                        let b = &result.base;
                        let mut doc = serde_json::json!({
                            "blocks": b.blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            "starts": b.starts.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            "ends": b.ends.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            "units": b.units.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            "decomposition": result.holds,
                        });
                        if let Some(witness) = &result.witness {
                            doc["witness"] = serde_json::json!(witness.to_string());
                        }
                        println!("{}", doc);
                    }
                }
            } else {
                let base = crosskit::closure::extract_base(&dfa).map_err(Failure::from)?;
                match cli.format {
                    Format::Text => {
                        println!(
                            "B = {}",
                            fmt_set(base.blocks.iter().map(|x| x.to_string()).collect())
                        );
                        println!(
                            "S = {}",
                            fmt_set(base.starts.iter().map(|x| x.to_string()).collect())
                        );
                        println!(
                            "E = {}",
                            fmt_set(base.ends.iter().map(|x| x.to_string()).collect())
                        );
                        println!(
                            "units = {}",
                            fmt_set(base.units.iter().map(|x| x.to_string()).collect())
                        );
                    }
                    Format::Json => {
                        println!(
                            "{}",
                            serde_json::json!({
                                "blocks": base.blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "starts": base.starts.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "ends": base.ends.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "units": base.units.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            })
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Classify {
            lang,
            families,
            kmax,
            assert,
        } => {
            let dfa = load_language(&lang)?;
            let wanted: Vec<Family> = match &families {
                None => Vec::new(),
                Some(list) => {
                    let mut parsed = Vec::new();
                    for name in list.split(',') {
                        let name = name.trim();
                        match Family::parse(name) {
                            Some(f) => parsed.push(f),
                            None => {
                                return Err(Failure::Usage(format!("unknown family `{}`", name)))
                            }
                        }
                    }
                    parsed
                }
            };
            let report = classify_report(&dfa, &wanted, kmax).map_err(Failure::from)?;
            let mut any_failed = false;
            match cli.format {
                Format::Text => {
                    for line in &report {
                        let mut text = format!(
                            "{}: {}",
                            line.family.name(),
                            if line.verdict.holds { "holds" } else { "fails" }
                        );
                        if let Some(k) = line.verdict.detail {
                            let _ = write!(text, " k={}", k);
                        }
                        if let Some(witness) = &line.verdict.witness {
                            let _ = write!(text, " witness={}", witness);
                        }
                        println!("{}", text);
                        any_failed |= !line.verdict.holds;
                    }
                }
                Format::Json => {
                    let hash = {
                        let bytes = to_json(&dfa.as_nfa());
                        let mut hasher = Sha256::new();
                        hasher.update(&bytes);
                        format!("{:x}", hasher.finalize())
                    };
                    let families: Vec<_> = report
                        .iter()
                        .map(|line| {
                            any_failed |= !line.verdict.holds;
                            let mut doc = serde_json::json!({
                                "name": line.family.name(),
                                "holds": line.verdict.holds,
                            });
                            if let Some(witness) = &line.verdict.witness {
                                doc["witness"] = serde_json::json!(witness.to_string());
                            }
                            if let Some(detail) = line.verdict.detail {
                                doc["detail"] = serde_json::json!(detail);
                            }
                            doc
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::json!({ "language": hash, "families": families })
                    );
                }
            }
            if assert && any_failed {
                return Err(Failure::Assertion);
            }
            Ok(())
        }
        Command::Splice {
            system,
            maxlen,
            diff,
        } => {
            let system = SpliceSystem::from_json(&read_bytes(&system)?).map_err(Failure::from)?;
            if diff {
                let rules = match &system.rules {
                    SpliceRules::Simple(syms) => RuleSet::Symbols(syms.clone()),
                    SpliceRules::NullContext(words) => RuleSet::Strings(words.clone()),
                    SpliceRules::Full(_) => {
                        return Err(Failure::Usage(
                            "--diff needs simple or null-context rules".into(),
                        ))
                    }
                };
                let report = differential_vs_crossover(&system.axioms, &rules, maxlen)
                    .map_err(Failure::from)?;
                match cli.format {
                    Format::Text => {
                        if report.equal {
                            println!("equal");
                        } else {
                            for w in &report.only_crossover {
                                println!("only-crossover: {}", w);
                            }
                            for w in &report.only_splice {
                                println!("only-splice: {}", w);
                            }
                        }
                    }
                    Format::Json => {
                        println!(
                            "{}",
                            serde_json::json!({
                                "equal": report.equal,
                                "only_crossover": report.only_crossover.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                                "only_splice": report.only_splice.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                            })
                        );
                    }
                }
                if !report.equal {
                    return Err(Failure::Assertion);
                }
            } else {
                let rule_len = match &system.rules {
                    SpliceRules::Simple(_) => 1,
                    SpliceRules::NullContext(words) => {
                        words.iter().map(Word::len).max().unwrap_or(1)
                    }
                    SpliceRules::Full(rules) => rules
                        .iter()
                        .map(|r| (r.u1.len() + r.u2.len()).max(r.u3.len() + r.u4.len()))
                        .max()
                        .unwrap_or(1),
                };
                let budget =
                    IterationBudget::new(256, maxlen, maxlen + system.axioms.max_len() + rule_len)
                        .map_err(Failure::from)?;
                let closure = sigma_closure_bounded(&system, &budget);
                print_words(cli.format, closure.kept.iter());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Assertion => {}
                Failure::Usage(msg) | Failure::Input(msg) => eprintln!("error: {}", msg),
            }
            ExitCode::from(failure.code())
        }
    }
}
