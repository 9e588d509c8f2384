//! Command-line front end for `nilorbit-core`.
//!
//! [`run`] never touches the process: it takes argv and returns the exit
//! code and the rendered output, so it can be driven from tests.

mod reproduce;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilorbit_core::arthur::{
    classify_case, conjecture_bound_check, enumerate_parameters, eta_of_psi, p_of_psi, validate,
    BoundOrdering, CaseTag, GlobalParameter, SimpleParameter,
};
use nilorbit_core::collapse::{barbasch_vogan_dual, sp_expansion, special_sp_collapse, symplectic_collapse};
use nilorbit_core::descent::{descent_rank, descent_term_analysis};
use nilorbit_core::exchange::{exchange_sequences, verify_stages};
use nilorbit_core::partition::{classify, dominance_compare, lex_compare, transpose};
use nilorbit_core::residual::{
    constant_term_profile, exponent_chain_check, langlands_square_integrable, parse_rational, speh_exponents,
    twist, whittaker_depth_vanishing, ExponentVector, Family,
};
use nilorbit_core::roots::{v_p2, Arrangement};
use nilorbit_core::{Error, Partition};
use serde_json::{json, Value};

pub use reproduce::{parse_corpus, GoldenCase, SHIPPED_CORPUS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_BREACH: i32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Text(String),
    Record(Value),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Text(t) => f.write_str(t),
            Payload::Record(v) => write!(f, "{}", serde_json::to_string_pretty(v).map_err(|_| fmt::Error)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub payload: Payload,
}

impl CommandResult {
    fn ok(payload: Payload) -> Self {
        CommandResult { exit_code: EXIT_OK, payload }
    }

    fn failure(code: i32, message: String, json: bool) -> Self {
        let payload = if json {
            Payload::Record(json!({ "error": message, "exit_code": code }))
        } else {
            Payload::Text(message)
        };
        CommandResult { exit_code: code, payload }
    }

    fn from_error(e: &Error, json: bool) -> Self {
        let code = if e.is_breach() { EXIT_BREACH } else { EXIT_VALIDATION };
        Self::failure(code, e.to_string(), json)
    }

    /// Plain text form, whichever payload was produced.
    pub fn text(&self) -> String {
        self.payload.to_string()
    }
}

#[derive(Parser, Debug)]
#[command(name = "nilorbit", version, about = "Partitions, Arthur parameters and residual spectrum bookkeeping")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Print partitions in exponent form.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operations on single partitions.
    #[command(subcommand)]
    Partition(PartitionCmd),
    /// Dual of an orthogonal partition of odd size.
    BvDual { partition: String },
    #[command(subcommand)]
    Arthur(ArthurCmd),
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
    #[command(subcommand)]
    Exponents(ExponentsCmd),
    #[command(subcommand)]
    Descent(DescentCmd),
    #[command(subcommand)]
    Roots(RootsCmd),
    #[command(subcommand)]
    Paper(PaperCmd),
}

#[derive(Subcommand, Debug)]
enum PartitionCmd {
    Transpose {
        partition: String,
    },
    /// Largest special symplectic partition below.
    Collapse {
        partition: String,
        /// Largest symplectic partition below instead.
        #[arg(long)]
        classical: bool,
    },
    /// Smallest special symplectic partition above a symplectic one.
    Expand {
        partition: String,
    },
    Classify {
        partition: String,
    },
    Compare {
        #[arg(long, value_enum, default_value = "dominance")]
        order: OrderArg,
        left: String,
        right: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Dominance,
    Lex,
}

impl From<OrderArg> for BoundOrdering {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Dominance => BoundOrdering::Dominance,
            OrderArg::Lex => BoundOrdering::Lexicographic,
        }
    }
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Rank of Sp(2n).
    #[arg(long)]
    n: usize,
    /// Summands `dim:mult:O|S[#label]` joined by `+`.
    parameter: String,
}

#[derive(Subcommand, Debug)]
enum ArthurCmd {
    /// List every violated constraint.
    Validate(ParamArgs),
    PPsi(ParamArgs),
    Eta(ParamArgs),
    Classify(ParamArgs),
    Enumerate {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ConjectureCmd {
    /// Place a candidate orbit against the predicted bound.
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "lex")]
        order: OrderArg,
        parameter: String,
        candidate: String,
    },
}

#[derive(Subcommand, Debug)]
enum ExponentsCmd {
    Speh {
        b: usize,
    },
    Twist {
        #[arg(allow_hyphen_values = true)]
        vector: String,
        #[arg(allow_hyphen_values = true)]
        shift: String,
    },
    SqInt {
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
    Chain {
        b: usize,
        #[arg(allow_hyphen_values = true, num_args = 0..)]
        alphas: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum DescentCmd {
    /// Vanishing verdict for each constant-term summand.
    Analyze {
        /// `I(a,b,m)`, `II(a,b,m)` or `III(a,b,m)`.
        family: String,
        /// Parabolic index; all of them when omitted.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        sigma_generic: bool,
    },
    /// Constant term along the `i`-th parabolic of a residual tower.
    Profile {
        family: String,
        i: usize,
    },
    /// Degenerate Whittaker coefficient along `N_{1^p}`.
    Whittaker {
        family: String,
        p: usize,
    },
}

#[derive(Subcommand, Debug)]
enum RootsCmd {
    Vp2 {
        partition: String,
        #[arg(long, value_enum, default_value = "dominant")]
        arrangement: ArrangementArg,
    },
    Sequences {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        b: usize,
    },
    ExchangeVerify {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        b: usize,
        /// Only this stage.
        #[arg(long)]
        stage: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ArrangementArg {
    Dominant,
    Concat,
}

#[derive(Subcommand, Debug)]
enum PaperCmd {
    /// Run the golden corpus.
    Reproduce {
        /// Only cases whose id contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Corpus file replacing the shipped one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

/// Output settings shared by every command.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Style {
    pub json: bool,
    pub compact: bool,
}

impl Style {
    pub(crate) fn part(&self, p: &Partition) -> String {
        if self.compact {
            p.to_compact_string()
        } else {
            p.to_string()
        }
    }
}

/// Parses and executes one command line; `argv[0]` is the program name.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            return CommandResult {
                exit_code: code,
                payload: Payload::Text(e.render().to_string().trim_end().to_string()),
            };
        }
    };
    let style = Style {
        json: cli.json,
        compact: cli.compact,
    };
    match dispatch(cli.command, style) {
        Ok(r) => r,
        Err(e) => CommandResult::from_error(&e, json),
    }
}

fn part(text: &str) -> Result<Partition, Error> {
    text.parse()
}

fn param(args: &ParamArgs) -> Result<GlobalParameter, Error> {
    GlobalParameter::parse(&args.parameter, args.n)
}

/// Parameter without the validity check, for `arthur validate`.
fn raw_param(args: &ParamArgs) -> Result<GlobalParameter, Error> {
    let simples = args
        .parameter
        .split('+')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<SimpleParameter>, Error>>()?;
    Ok(GlobalParameter::new(simples, args.n))
}

fn tower_tag(family: &str) -> Result<CaseTag, Error> {
    let fam: Family = family.parse()?;
    match fam {
        Family::CaseI { a, b, m } => Ok(CaseTag::CaseI { a, b, m }),
        Family::CaseII { a, b, m } => Ok(CaseTag::CaseII { a, b, m }),
        Family::CaseIII { a, b, m } => Ok(CaseTag::CaseIII { a, b, m }),
        Family::Metaplectic { .. } => Err(Error::Validation(format!("{fam} has no descent analysis"))),
    }
}

/// Single-value result: the text line, and `{ key: value }` as the record.
fn single(style: Style, key: &str, text: String) -> CommandResult {
    if style.json {
        CommandResult::ok(Payload::Record(json!({ key: text })))
    } else {
        CommandResult::ok(Payload::Text(text))
    }
}

fn both(style: Style, text: String, record: Value) -> CommandResult {
    CommandResult::ok(if style.json { Payload::Record(record) } else { Payload::Text(text) })
}

fn dispatch(cmd: Command, style: Style) -> Result<CommandResult, Error> {
    match cmd {
        Command::Partition(c) => partition_cmd(c, style),
        Command::BvDual { partition } => {
            let q = part(&partition)?;
            Ok(single(style, "dual", style.part(&barbasch_vogan_dual(&q)?)))
        }
        Command::Arthur(c) => arthur_cmd(c, style),
        Command::Conjecture(ConjectureCmd::Check {
            n,
            order,
            parameter,
            candidate,
        }) => {
            let psi = GlobalParameter::parse(&parameter, n)?;
            let cand = part(&candidate)?;
            let v = conjecture_bound_check(&cand, &psi, order.into())?;
            let eta = style.part(&v.eta);
            let text = format!("{:?} ({:?}, eta = {eta})", v.status, v.ordering_used);
            let rec = json!({ "status": format!("{:?}", v.status), "ordering": format!("{:?}", v.ordering_used), "eta": eta });
            Ok(both(style, text, rec))
        }
        Command::Exponents(c) => exponents_cmd(c, style),
        Command::Descent(c) => descent_cmd(c, style),
        Command::Roots(c) => roots_cmd(c, style),
        Command::Paper(PaperCmd::Reproduce { filter, corpus }) => {
            let cases = match corpus {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Validation(format!("cannot read corpus {}: {e}", path.display())))?;
                    parse_corpus(&text)?
                }
                None => parse_corpus(SHIPPED_CORPUS)?,
            };
            Ok(reproduce::reproduce(&cases, filter.as_deref(), style))
        }
    }
}

fn partition_cmd(c: PartitionCmd, style: Style) -> Result<CommandResult, Error> {
    Ok(match c {
        PartitionCmd::Transpose { partition } => single(style, "partition", style.part(&transpose(&part(&partition)?))),
        PartitionCmd::Collapse { partition, classical } => {
            let p = part(&partition)?;
            let out = if classical { symplectic_collapse(&p)? } else { special_sp_collapse(&p)? };
            single(style, "partition", style.part(&out))
        }
        PartitionCmd::Expand { partition } => single(style, "partition", style.part(&sp_expansion(&part(&partition)?)?)),
        PartitionCmd::Classify { partition } => {
            let c = classify(&part(&partition)?);
            let text = format!(
                "symplectic={} orthogonal={} special_symplectic={}",
                c.symplectic, c.orthogonal, c.special_symplectic
            );
            both(style, text, serde_json::to_value(c).expect("plain struct"))
        }
        PartitionCmd::Compare { order, left, right } => {
            let (p, q) = (part(&left)?, part(&right)?);
            let v = match order {
                OrderArg::Dominance => dominance_compare(&p, &q)?,
                OrderArg::Lex => lex_compare(&p, &q)?,
            };
            single(style, "verdict", v.to_string())
        }
    })
}

fn arthur_cmd(c: ArthurCmd, style: Style) -> Result<CommandResult, Error> {
    Ok(match c {
        ArthurCmd::Validate(args) => {
            let psi = raw_param(&args)?;
            let violations = validate(&psi);
            let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
            let text = if lines.is_empty() { "valid".to_string() } else { lines.join("\n") };
            let mut r = both(style, text, json!({ "valid": lines.is_empty(), "violations": lines }));
            if !violations.is_empty() {
                r.exit_code = EXIT_VALIDATION;
            }
            r
        }
        ArthurCmd::PPsi(args) => single(style, "partition", style.part(&p_of_psi(&param(&args)?)?)),
        ArthurCmd::Eta(args) => single(style, "eta", style.part(&eta_of_psi(&param(&args)?)?)),
        ArthurCmd::Classify(args) => {
            let tag = classify_case(&param(&args)?)?;
            let rec = match tag.aux() {
                Some((a, b, m)) => json!({ "case": tag.name(), "a": a, "b": b, "m": m }),
                None => json!({ "case": tag.name() }),
            };
            both(style, tag.to_string(), rec)
        }
        ArthurCmd::Enumerate { n } => {
            let all: Vec<String> = enumerate_parameters(n)?.iter().map(ToString::to_string).collect();
            both(style, all.join("\n"), json!({ "n": n, "parameters": all }))
        }
    })
}

fn exponents_cmd(c: ExponentsCmd, style: Style) -> Result<CommandResult, Error> {
    Ok(match c {
        ExponentsCmd::Speh { b } => single(style, "exponents", speh_exponents(b).to_string()),
        ExponentsCmd::Twist { vector, shift } => {
            let v: ExponentVector = vector.parse()?;
            single(style, "exponents", twist(&v, parse_rational(&shift)?)?.to_string())
        }
        ExponentsCmd::SqInt { vector } => {
            let v: ExponentVector = vector.parse()?;
            let ok = langlands_square_integrable(&v);
            both(style, ok.to_string(), json!({ "square_integrable": ok }))
        }
        ExponentsCmd::Chain { b, alphas } => {
            let alphas = alphas
                .iter()
                .flat_map(|a| a.split(','))
                .filter(|a| !a.trim().is_empty())
                .map(parse_rational)
                .collect::<Result<Vec<_>, Error>>()?;
            let ok = exponent_chain_check(b, &alphas)?;
            both(style, ok.to_string(), json!({ "chain": ok }))
        }
    })
}

fn descent_cmd(c: DescentCmd, style: Style) -> Result<CommandResult, Error> {
    Ok(match c {
        DescentCmd::Analyze { family, r, sigma_generic } => {
            let tag = tower_tag(&family)?;
            let rs: Vec<usize> = match r {
                Some(r) => vec![r],
                None => (1..=descent_rank(&tag)?).collect(),
            };
            let mut lines = Vec::new();
            let mut recs = Vec::new();
            for r in rs {
                for v in descent_term_analysis(&tag, sigma_generic, r)? {
                    let mut line = format!("r={} k={} {:?}", v.r, v.k, v.status);
                    if let Some(l) = v.l {
                        line.push_str(&format!(" l={l}"));
                    }
                    let witness = v.witness.as_ref().map(|w| (style.part(&w.test), style.part(&w.eta)));
                    if let Some((t, e)) = &witness {
                        line.push_str(&format!(" {t} > {e}"));
                    }
                    lines.push(line);
                    recs.push(json!({
                        "r": v.r,
                        "k": v.k,
                        "status": format!("{:?}", v.status),
                        "l": v.l,
                        "witness": witness.map(|(t, e)| json!({ "test": t, "eta": e })),
                    }));
                }
            }
            both(style, lines.join("\n"), json!({ "family": family, "terms": recs }))
        }
        DescentCmd::Profile { family, i } => {
            let fam: Family = family.parse()?;
            let p = constant_term_profile(fam, i)?;
            let rec = json!({
                "speh_mult": p.speh_mult,
                "twist": p.twist.to_string(),
                "remainder": p.remainder.to_string(),
            });
            both(style, p.to_string(), rec)
        }
        DescentCmd::Whittaker { family, p } => {
            let fam: Family = family.parse()?;
            single(style, "verdict", format!("{:?}", whittaker_depth_vanishing(fam, p)?))
        }
    })
}

fn roots_cmd(c: RootsCmd, style: Style) -> Result<CommandResult, Error> {
    Ok(match c {
        RootsCmd::Vp2 { partition, arrangement } => {
            let arr = match arrangement {
                ArrangementArg::Dominant => Arrangement::Dominant,
                ArrangementArg::Concat => Arrangement::PaperConcat,
            };
            let roots: Vec<String> = v_p2(&part(&partition)?, arr)?.iter().map(ToString::to_string).collect();
            both(style, format!("{{{}}}", roots.join(", ")), json!({ "roots": roots }))
        }
        RootsCmd::Sequences { k, b } => {
            let s = exchange_sequences(k, b)?;
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for (i, (al, be)) in s.alpha.iter().zip(&s.beta).enumerate() {
                let a: Vec<String> = al.iter().map(ToString::to_string).collect();
                let bt: Vec<String> = be.iter().map(ToString::to_string).collect();
                lines.push(format!("i={} alpha: {}", i + 1, a.join(", ")));
                lines.push(format!("i={} beta: {}", i + 1, bt.join(", ")));
                rows.push(json!({ "i": i + 1, "alpha": a, "beta": bt }));
            }
            both(style, lines.join("\n"), json!({ "k": k, "b": b, "rows": rows }))
        }
        RootsCmd::ExchangeVerify { k, b, stage } => {
            let mut reports = verify_stages(k, b)?;
            if let Some(s) = stage {
                reports.retain(|r| r.stage == s);
                if reports.is_empty() {
                    return Err(Error::Validation(format!("stage {s} outside 1..={}", 2 * k)));
                }
            }
            let mut text = String::new();
            for r in &reports {
                let verdict = if r.passed() { "pass" } else { "FAIL" };
                text.push_str(&format!("stage {} {verdict}\n", r.stage));
                text.push_str(&format!("listed order {}\n", if r.listed.all_passed() { "pass" } else { "FAIL" }));
                text.push_str(&indent(&r.listed.to_string()));
                if let (Some(order), Some(rep)) = (&r.order, &r.reordered) {
                    let o: Vec<String> = order.iter().map(ToString::to_string).collect();
                    text.push_str(&format!("order [{}]\n", o.join(",")));
                    text.push_str(&indent(&rep.to_string()));
                }
            }
            let rec = serde_json::to_value(&reports).expect("plain structs");
            both(style, text.trim_end().to_string(), json!({ "k": k, "b": b, "stages": rec }))
        }
    })
}

fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}\n")).collect()
}
