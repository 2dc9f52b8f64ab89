//! The `rll` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{complement, to_multl, to_rll};
use crate::automaton::apa_of;
use crate::calculus::{check_proof_text, Verdict};
use crate::closure::fl_closure;
use crate::corpus::{self, DEFAULT_SEED};
use crate::game::{equiv_bounded, inclusion_bounded, member_game, Bounds, GameEvaluator};
use crate::semantics::{member_oracle, Lasso};
use crate::syntax::{parse_expr_document, parse_formula_document, Alphabet, Document, Expr, Formula};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "rll", version, about = "Right-linear lattice expressions over infinite words")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct AlphabetFlags {
    /// Letters of a plain alphabet (comma or space separated). Must agree
    /// with the file header if there is one.
    #[arg(long, conflicts_with = "props")]
    alphabet: Option<String>,
    /// Proposition basis of a powerset alphabet.
    #[arg(long)]
    props: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Via {
    Game,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Ltl,
    Rll,
}

#[derive(Debug, Clone, clap::Args)]
struct BoundFlags {
    #[arg(long, default_value_t = 2)]
    max_prefix: usize,
    #[arg(long, default_value_t = 3)]
    max_period: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse an expression (or, with --formula, a formula) file and print it back.
    Parse {
        file: PathBuf,
        #[arg(long)]
        formula: bool,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Print the Fischer-Ladner closure with priorities and edges.
    Closure {
        file: PathBuf,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Print the alternating parity automaton in DOT.
    ApaDot {
        file: PathBuf,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Decide membership of a lasso `u(v)`.
    Member {
        file: PathBuf,
        lasso: String,
        #[arg(long, value_enum, default_value_t = Via::Game)]
        via: Via,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Decide membership by fixpoint iteration.
    OracleMember {
        file: PathBuf,
        lasso: String,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Print the syntactic complement.
    Complement {
        file: PathBuf,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Translate an expression to a formula (`ltl`) or back (`rll`).
    Translate {
        #[arg(long, value_enum)]
        to: Target,
        file: PathBuf,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Search for a lasso on which two expressions differ.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        bounds: BoundFlags,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Search for a lasso in the first language but not the second.
    Incl {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        bounds: BoundFlags,
        #[command(flatten)]
        alphabet: AlphabetFlags,
    },
    /// Check a JSON derivation.
    Check { file: PathBuf },
    /// Run the built-in example table and a seeded random agreement suite.
    Selftest {
        /// Decimal or `0x`-prefixed hexadecimal.
        #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

fn names(list: &str) -> Vec<String> {
    list.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(String::from).collect()
}

impl AlphabetFlags {
    fn resolve(&self) -> anyhow::Result<Option<Alphabet>> {
        Ok(match (&self.alphabet, &self.props) {
            (Some(a), _) => Some(Alphabet::new(names(a))?),
            (None, Some(p)) => Some(Alphabet::powerset(names(p))?),
            (None, None) => None,
        })
    }
}

fn located(path: &Path, e: Error) -> anyhow::Error {
    match e {
        Error::Parse(p) => anyhow!("{}:{p}", path.display()),
        other => anyhow!("{}: {other}", path.display()),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_expr(path: &Path, flags: &AlphabetFlags) -> anyhow::Result<Document<Expr>> {
    let given = flags.resolve()?;
    parse_expr_document(&read(path)?, given.as_ref()).map_err(|e| located(path, e))
}

fn load_formula(path: &Path, flags: &AlphabetFlags) -> anyhow::Result<Document<Formula>> {
    let given = flags.resolve()?;
    parse_formula_document(&read(path)?, given.as_ref()).map_err(|e| located(path, e))
}

fn load_pair(left: &Path, right: &Path, flags: &AlphabetFlags) -> anyhow::Result<(Alphabet, Expr, Expr)> {
    let l = load_expr(left, flags)?;
    let r = load_expr(right, flags)?;
    if l.alphabet != r.alphabet {
        bail!(
            "{} and {} declare different alphabets (`{}` vs `{}`)",
            left.display(),
            right.display(),
            l.alphabet.header(),
            r.alphabet.header()
        );
    }
    Ok((l.alphabet, l.body, r.body))
}

fn lasso(text: &str, alphabet: &Alphabet) -> anyhow::Result<Lasso> {
    Lasso::parse(text, alphabet).map_err(|e| anyhow!("lasso `{text}`: {e}"))
}

fn verdict(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit code: 0 positive, 1 negative, 2 error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> anyhow::Result<i32> {
    match command {
        Command::Parse { file, formula, alphabet } => {
            if formula {
                let d = load_formula(&file, &alphabet)?;
                writeln!(out, "{}\n{}", d.alphabet.header(), d.body)?;
            } else {
                let d = load_expr(&file, &alphabet)?;
                writeln!(out, "{}\n{}", d.alphabet.header(), d.body.display(&d.alphabet))?;
            }
            Ok(0)
        }
        Command::Closure { file, alphabet } => {
            let d = load_expr(&file, &alphabet)?;
            let c = fl_closure(&d.body).map_err(|e| located(&file, e))?;
            write!(out, "{}", c.to_text(&d.alphabet))?;
            Ok(0)
        }
        Command::ApaDot { file, alphabet } => {
            let d = load_expr(&file, &alphabet)?;
            write!(out, "{}", apa_of(&d.body, &d.alphabet).map_err(|e| located(&file, e))?.to_dot())?;
            Ok(0)
        }
        Command::Member { file, lasso: w, via, alphabet } => {
            let d = load_expr(&file, &alphabet)?;
            let w = lasso(&w, &d.alphabet)?;
            let result = match via {
                Via::Game => {
                    let b = member_game(&d.body, &w)?;
                    writeln!(out, "{}", verdict(b))?;
                    b
                }
                Via::Oracle => {
                    let b = member_oracle(&d.body, &w)?;
                    writeln!(out, "{}", verdict(b))?;
                    b
                }
                Via::Both => {
                    let g = member_game(&d.body, &w)?;
                    let o = member_oracle(&d.body, &w)?;
                    if g != o {
                        bail!("game and oracle disagree: game={} oracle={}", verdict(g), verdict(o));
                    }
                    writeln!(out, "{} (game=oracle)", verdict(g))?;
                    g
                }
            };
            Ok(if result { 0 } else { 1 })
        }
        Command::OracleMember { file, lasso: w, alphabet } => {
            let d = load_expr(&file, &alphabet)?;
            let w = lasso(&w, &d.alphabet)?;
            let b = member_oracle(&d.body, &w)?;
            writeln!(out, "{}", verdict(b))?;
            Ok(if b { 0 } else { 1 })
        }
        Command::Complement { file, alphabet } => {
            let d = load_expr(&file, &alphabet)?;
            writeln!(out, "{}\n{}", d.alphabet.header(), complement(&d.body, &d.alphabet).display(&d.alphabet))?;
            Ok(0)
        }
        Command::Translate { to: Target::Ltl, file, alphabet } => {
            let d = load_expr(&file, &alphabet)?;
            // Plain alphabets of size 2^k are read as powersets of `p0..`.
            let basis = d.alphabet.binary_encoding().map_err(|e| located(&file, e))?;
            let phi = to_multl(&d.body, &basis)?;
            writeln!(out, "{}\n{phi}", basis.header())?;
            Ok(0)
        }
        Command::Translate { to: Target::Rll, file, alphabet } => {
            let d = load_formula(&file, &alphabet)?;
            let e = to_rll(&d.body, &d.alphabet)?;
            writeln!(out, "{}\n{}", d.alphabet.header(), e.display(&d.alphabet))?;
            Ok(0)
        }
        Command::Equiv { left, right, bounds, alphabet } => search(&left, &right, &bounds, &alphabet, false, out),
        Command::Incl { left, right, bounds, alphabet } => search(&left, &right, &bounds, &alphabet, true, out),
        Command::Check { file } => {
            let text = read(&file)?;
            let v = check_proof_text(&text).map_err(|e| located(&file, e))?;
            writeln!(out, "{v}")?;
            Ok(match v {
                Verdict::Accepted { .. } => 0,
                Verdict::Rejected { .. } => 1,
            })
        }
        Command::Selftest { seed, count } => selftest(seed, count, out),
    }
}

fn search(
    left: &Path,
    right: &Path,
    bounds: &BoundFlags,
    flags: &AlphabetFlags,
    inclusion: bool,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let (alphabet, e, f) = load_pair(left, right, flags)?;
    let bounds = Bounds { max_prefix: bounds.max_prefix, max_period: bounds.max_period };
    let found = if inclusion {
        inclusion_bounded(&e, &f, &alphabet, bounds)?
    } else {
        equiv_bounded(&e, &f, &alphabet, bounds)?
    };
    match found {
        Some(w) => {
            writeln!(out, "{}", w.to_text(&alphabet))?;
            Ok(1)
        }
        None => {
            writeln!(out, "no difference found up to bounds")?;
            Ok(0)
        }
    }
}

/// Example words for the languages "infinitely many a" and "finitely many b"
/// over `{a, b}`.
const EXAMPLE_TABLE: &[(&str, &str, bool)] = &[
    (corpus::INFINITELY_MANY_A, "(ab)", true),
    (corpus::INFINITELY_MANY_A, "(ba)", true),
    (corpus::INFINITELY_MANY_A, "b(ab)", true),
    (corpus::INFINITELY_MANY_A, "a(b)", false),
    (corpus::INFINITELY_MANY_A, "(b)", false),
    (corpus::FINITELY_MANY_B, "(a)", true),
    (corpus::FINITELY_MANY_B, "ab(a)", true),
    (corpus::FINITELY_MANY_B, "(ab)", false),
    (corpus::FINITELY_MANY_B, "(b)", false),
    (corpus::BOTH, "bb(a)", true),
    (corpus::BOTH, "(ab)", false),
    (corpus::BOTH, "(b)", false),
];

fn parse_seed(s: &str) -> Result<u64, std::num::ParseIntError> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
}

fn selftest(seed: u64, count: usize, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mut failures = 0;
    let ab = corpus::letters(2);
    let start = Instant::now();
    let mut ok = 0;
    for &(text, word, expected) in EXAMPLE_TABLE {
        let e = crate::syntax::parse_closed_expr(text, &ab)?;
        let w = Lasso::parse(word, &ab)?;
        let (g, o) = (member_game(&e, &w)?, member_oracle(&e, &w)?);
        if g == expected && o == expected {
            ok += 1;
        } else {
            writeln!(out, "FAIL example {text} on {word}: expected {expected}, game {g}, oracle {o}")?;
        }
    }
    failures += EXAMPLE_TABLE.len() - ok;
    writeln!(out, "example table: {ok}/{} ({:.2?})", EXAMPLE_TABLE.len(), start.elapsed())?;

    let v = check_proof_text(UNTIL_PROOF)?;
    if !v.is_accepted() {
        failures += 1;
    }
    writeln!(out, "until derivation: {v}")?;

    let start = Instant::now();
    let mut rng = corpus::rng(seed);
    let (mut agree, mut complementary) = (0, 0);
    for i in 0..count {
        let alphabet = corpus::letters(1 + i % 3);
        let e = corpus::random_expr(&mut rng, &alphabet, 12);
        let w = corpus::random_lasso(&mut rng, &alphabet, 3, 4);
        let g = GameEvaluator::new(&e)?.member(&w);
        let o = member_oracle(&e, &w)?;
        let c = member_oracle(&complement(&e, &alphabet), &w)?;
        if g == o {
            agree += 1;
        } else {
            writeln!(out, "FAIL agreement: {} on {}", e.display(&alphabet), w.to_text(&alphabet))?;
        }
        if o != c {
            complementary += 1;
        } else {
            writeln!(out, "FAIL complement: {} on {}", e.display(&alphabet), w.to_text(&alphabet))?;
        }
    }
    failures += 2 * count - agree - complementary;
    writeln!(out, "game/oracle agreement: {agree}/{count} (seed {seed:#x}, {:.2?})", start.elapsed())?;
    writeln!(out, "complement law: {complementary}/{count}")?;
    writeln!(out, "{}", if failures == 0 { "selftest passed" } else { "selftest FAILED" })?;
    Ok(if failures == 0 { 0 } else { 1 })
}

const UNTIL_PROOF: &str = include_str!("../../../proofs/until.json");
