//! Golden-corpus runner behind `paper reproduce`.
//!
//! A corpus line is `id | expected output | command line`; blank lines and
//! lines starting with `#` are skipped. The command line is split with shell
//! quoting rules and run through [`crate::run`] in plain mode.

use nilorbit_core::Error;
use rayon::prelude::*;
use serde_json::json;

use crate::{run, CommandResult, Payload, Style, EXIT_BREACH, EXIT_OK, EXIT_VALIDATION};

pub const SHIPPED_CORPUS: &str = include_str!("../corpus/golden.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCase {
    pub id: String,
    pub expected: String,
    pub args: Vec<String>,
}

pub fn parse_corpus(text: &str) -> Result<Vec<GoldenCase>, Error> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.splitn(3, '|').map(str::trim);
        let (Some(id), Some(expected), Some(cmd)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                token: line.to_string(),
                reason: format!("line {}: expected `id | expected | command`", no + 1),
            });
        };
        let args = shlex::split(cmd).ok_or_else(|| Error::Parse {
            token: cmd.to_string(),
            reason: format!("line {}: unbalanced quotes", no + 1),
        })?;
        if id.is_empty() || args.is_empty() {
            return Err(Error::Parse {
                token: line.to_string(),
                reason: format!("line {}: empty id or command", no + 1),
            });
        }
        if args.first().map(String::as_str) == Some("paper") {
            return Err(Error::Parse {
                token: cmd.to_string(),
                reason: format!("line {}: corpus cases cannot run the corpus", no + 1),
            });
        }
        out.push(GoldenCase {
            id: id.to_string(),
            expected: expected.to_string(),
            args,
        });
    }
    Ok(out)
}

struct Outcome<'a> {
    case: &'a GoldenCase,
    result: CommandResult,
}

impl Outcome<'_> {
    fn passed(&self) -> bool {
        self.result.exit_code == EXIT_OK && self.result.text() == self.case.expected
    }
}

pub(crate) fn reproduce(cases: &[GoldenCase], filter: Option<&str>, style: Style) -> CommandResult {
    let selected: Vec<&GoldenCase> = cases
        .iter()
        .filter(|c| filter.is_none_or(|f| c.id.contains(f)))
        .collect();
    if selected.is_empty() {
        let msg = format!("no golden case matches `{}`", filter.unwrap_or(""));
        return CommandResult::failure(EXIT_VALIDATION, msg, style.json);
    }
    let outcomes: Vec<Outcome> = selected
        .par_iter()
        .map(|case| {
            let argv = std::iter::once("nilorbit".to_string()).chain(case.args.iter().cloned());
            Outcome {
                case,
                result: run(argv),
            }
        })
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    let exit_code = if passed == outcomes.len() { EXIT_OK } else { EXIT_BREACH };
    let payload = if style.json {
        let rows: Vec<_> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "id": o.case.id,
                    "passed": o.passed(),
                    "expected": o.case.expected,
                    "actual": o.result.text(),
                    "exit_code": o.result.exit_code,
                })
            })
            .collect();
        Payload::Record(json!({ "passed": passed, "total": outcomes.len(), "cases": rows }))
    } else {
        let width = outcomes.iter().map(|o| o.case.id.len()).max().unwrap_or(0);
        let mut lines: Vec<String> = outcomes
            .iter()
            .map(|o| {
                if o.passed() {
                    format!("pass  {:width$}  {}", o.case.id, o.case.expected)
                } else {
                    format!(
                        "FAIL  {:width$}  expected {} got {} (exit {})",
                        o.case.id,
                        o.case.expected,
                        o.result.text().replace('\n', " / "),
                        o.result.exit_code
                    )
                }
            })
            .collect();
        lines.push(format!("{passed}/{} golden cases pass", outcomes.len()));
        Payload::Text(lines.join("\n"))
    };
    CommandResult { exit_code, payload }
}
