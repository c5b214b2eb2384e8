//! Command-line front door: parse literals, dispatch to the library, and
//! emit deterministic text or JSON reports.
//!
//! Exit codes: 0 for members and successful computations, 1 for
//! non-members and suite failures, 2 for inconclusive verdicts, 64 for
//! usage errors.

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::dual::{dual_member, dual_member_via_matrix, dual_space, DualKind};
use crate::error::Result;
use crate::matclass::{
    class_check, conditions_for, reduce_and_check, MatrixDesc, ReducedClass,
};
use crate::op::TriangleOp;
use crate::seq::Seq;
use crate::space::SpaceId;
use crate::spaces::{basis_vector, member, norm};
use crate::suites::run_suite;
use crate::verdict::{Status, Verdict};

pub const EXIT_MEMBER: i32 = 0;
pub const EXIT_NON_MEMBER: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "seqspace",
    version,
    about = "Exact-arithmetic toolkit for decorated bounded-variation \
             sequence spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, clap::Args)]
pub struct Common {
    /// Bounded-enumeration depth forwarded to all probes.
    #[arg(long, default_value_t = 128)]
    pub probe: u64,
    /// Seed echoed in reports and used by randomized suites.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand)]
pub enum Verb {
    /// Apply a triangle to a sequence and print the first n terms.
    Transform {
        #[arg(long)]
        op: String,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact norm of a sequence in a space.
    Norm {
        #[arg(long)]
        space: String,
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        common: Common,
    },
    /// Membership verdict for a sequence in a space.
    Member {
        #[arg(long)]
        space: String,
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        common: Common,
    },
    /// Dual membership via the analytic and associated-matrix paths.
    DualCheck {
        #[arg(long)]
        space: String,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        common: Common,
    },
    /// Matrix class membership between undecorated spaces.
    Classify {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        common: Common,
    },
    /// Matrix class membership for a class with a decorated bv side.
    Reduce {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        class: String,
        #[command(flatten)]
        common: Common,
    },
    /// The n-th basis vector of a decorated bv space.
    Basis {
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named seeded verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
}

struct Outcome {
    exit: i32,
    payload: Value,
    certificate: String,
    text: String,
}

fn verdict_exit(status: Status) -> i32 {
    match status {
        Status::Member => EXIT_MEMBER,
        Status::NonMember => EXIT_NON_MEMBER,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn prefix_text(x: &Seq, n: u64) -> String {
    let terms: Vec<String> = (1..=n).map(|k| x.term(k).to_string()).collect();
    format!("[{}]", terms.join(", "))
}

fn prefix_json(x: &Seq, n: u64) -> Value {
    Value::Array(
        (1..=n)
            .map(|k| Value::String(x.term(k).to_string()))
            .collect(),
    )
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = format!("status: {:?}", v.status);
    if let Some(val) = &v.value {
        out.push_str(&format!("\nvalue: {val}"));
    }
    out.push_str(&format!("\ncertificate: {}", v.certificate));
    for (n, t) in &v.trace {
        out.push_str(&format!("\ntrace[{n}] = {t}"));
    }
    out
}

fn dispatch(verb: &Verb) -> Result<Outcome> {
    match verb {
        Verb::Transform { op, seq, n, .. } => {
            let op: TriangleOp = op.parse()?;
            let x: Seq = seq.parse()?;
            let y = op.apply_prefix(&x, (*n).max(1));
            Ok(Outcome {
                exit: EXIT_MEMBER,
                payload: prefix_json(&y, (*n).max(1)),
                certificate: format!("rows applied exactly via {}", op.describe()),
                text: prefix_text(&y, (*n).max(1)),
            })
        }
        Verb::Norm { space, seq, .. } => {
            let space: SpaceId = space.parse()?;
            let x: Seq = seq.parse()?;
            let value = norm(space, &x)?;
            Ok(Outcome {
                exit: EXIT_MEMBER,
                payload: Value::String(value.to_string()),
                certificate: format!("exact norm in {space}"),
                text: value.to_string(),
            })
        }
        Verb::Member { space, seq, common } => {
            let space: SpaceId = space.parse()?;
            let x: Seq = seq.parse()?;
            let v = member(space, &x, common.probe);
            Ok(Outcome {
                exit: verdict_exit(v.status),
                payload: serde_json::to_value(&v).expect("verdict serializes"),
                certificate: v.certificate.clone(),
                text: verdict_text(&v),
            })
        }
        Verb::DualCheck {
            space,
            kind,
            seq,
            common,
        } => {
            let space: SpaceId = space.parse()?;
            let kind: DualKind = kind.parse()?;
            let x: Seq = seq.parse()?;
            let target = dual_space(space, kind)?;
            let analytic = dual_member(space, kind, &x, common.probe)?;
            let matrix = dual_member_via_matrix(space, kind, &x, common.probe)?;
            let primary = if analytic.decided() { &analytic } else { &matrix };
            let status = primary.status;
            let certificate = primary.certificate.clone();
            let payload = json!({
                "status": status,
                "dual_space": target.to_string(),
                "analytic": serde_json::to_value(&analytic).expect("verdict"),
                "matrix": serde_json::to_value(&matrix).expect("verdict"),
            });
            let text = format!(
                "dual space: {target}\n-- analytic --\n{}\n-- matrix --\n{}",
                verdict_text(&analytic),
                verdict_text(&matrix)
            );
            Ok(Outcome {
                exit: verdict_exit(status),
                payload,
                certificate,
                text,
            })
        }
        Verb::Classify {
            matrix,
            from,
            to,
            common,
        } => {
            let a: MatrixDesc = matrix.parse()?;
            let from: SpaceId = from.parse()?;
            let to: SpaceId = to.parse()?;
            let conds: Vec<String> = conditions_for(from, to)?
                .iter()
                .map(|c| c.to_string())
                .collect();
            let v = class_check(&a, from, to, common.probe)?;
            let payload = json!({
                "conditions": conds,
                "verdict": serde_json::to_value(&v).expect("verdict"),
            });
            Ok(Outcome {
                exit: verdict_exit(v.status),
                payload,
                certificate: v.certificate.clone(),
                text: format!(
                    "conditions: {}\n{}",
                    conds.join(", "),
                    verdict_text(&v)
                ),
            })
        }
        Verb::Reduce {
            matrix,
            class,
            common,
        } => {
            let a: MatrixDesc = matrix.parse()?;
            let class: ReducedClass = class.parse()?;
            let v = reduce_and_check(&a, class, common.probe)?;
            let payload = json!({
                "class": class.to_string(),
                "verdict": serde_json::to_value(&v).expect("verdict"),
            });
            Ok(Outcome {
                exit: verdict_exit(v.status),
                payload,
                certificate: v.certificate.clone(),
                text: format!("class: {class}\n{}", verdict_text(&v)),
            })
        }
        Verb::Basis { space, n, common } => {
            let space: SpaceId = space.parse()?;
            let b = basis_vector(space, (*n).max(1))?;
            let show = common.probe.min(16).max(*n + 2);
            let payload = json!({
                "space": space.to_string(),
                "index": b.index,
                "realization": b.realization.to_string(),
                "prefix": prefix_json(&b.realization, show),
            });
            Ok(Outcome {
                exit: EXIT_MEMBER,
                payload,
                certificate: format!(
                    "basis vector {n} of {space}, realized as `{}`",
                    b.realization
                ),
                text: format!(
                    "{}\nprefix: {}",
                    b.realization,
                    prefix_text(&b.realization, show)
                ),
            })
        }
        Verb::Verify {
            suite,
            trials,
            common,
        } => {
            let start = std::time::Instant::now();
            let summary = run_suite(suite, *trials, common.probe, common.seed)?;
            let elapsed = start.elapsed().as_millis();
            let exit = if summary.passed() {
                EXIT_MEMBER
            } else {
                EXIT_NON_MEMBER
            };
            let mut text = format!(
                "suite {}: {} checks, {} failures (trials={}, seed={}) in {elapsed}ms",
                summary.suite,
                summary.checks,
                summary.failures.len(),
                summary.trials,
                summary.seed
            );
            for f in &summary.failures {
                text.push_str(&format!("\n  failure: {f}"));
            }
            // wall time stays out of the JSON payload to keep reports
            // byte-identical for a fixed seed
            Ok(Outcome {
                exit,
                payload: serde_json::to_value(&summary).expect("summary"),
                certificate: format!(
                    "{} exact checks, {} failures",
                    summary.checks,
                    summary.failures.len()
                ),
                text,
            })
        }
    }
}

fn common_of(verb: &Verb) -> &Common {
    match verb {
        Verb::Transform { common, .. }
        | Verb::Norm { common, .. }
        | Verb::Member { common, .. }
        | Verb::DualCheck { common, .. }
        | Verb::Classify { common, .. }
        | Verb::Reduce { common, .. }
        | Verb::Basis { common, .. }
        | Verb::Verify { common, .. } => common,
    }
}

fn command_echo(verb: &Verb) -> String {
    match verb {
        Verb::Transform { op, seq, n, .. } => {
            format!("transform --op {op} --seq {seq} --n {n}")
        }
        Verb::Norm { space, seq, .. } => format!("norm --space {space} --seq {seq}"),
        Verb::Member { space, seq, .. } => {
            format!("member --space {space} --seq {seq}")
        }
        Verb::DualCheck {
            space, kind, seq, ..
        } => format!("dual-check --space {space} --kind {kind} --seq {seq}"),
        Verb::Classify {
            matrix, from, to, ..
        } => format!("classify --matrix {matrix} --from {from} --to {to}"),
        Verb::Reduce { matrix, class, .. } => {
            format!("reduce --matrix {matrix} --class {class}")
        }
        Verb::Basis { space, n, .. } => format!("basis --space {space} --n {n}"),
        Verb::Verify { suite, trials, .. } => {
            format!("verify --suite {suite} --trials {trials}")
        }
    }
}

/// Run a parsed command, returning the exit code and the report body.
pub fn run(cli: &Cli) -> (i32, String) {
    let common = common_of(&cli.verb);
    match dispatch(&cli.verb) {
        Ok(outcome) => {
            let body = if common.json {
                let report = json!({
                    "command": command_echo(&cli.verb),
                    "payload": outcome.payload,
                    "certificate": outcome.certificate,
                    "probe": common.probe,
                    "seed": common.seed,
                    "version": env!("CARGO_PKG_VERSION"),
                });
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else {
                outcome.text
            };
            (outcome.exit, body)
        }
        Err(e) => (EXIT_USAGE, format!("error: {e}")),
    }
}

/// Full entry point: parse argv, run, print, and return the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendered help/usage text, but own the exit code
            let rendered = e.render();
            if e.use_stderr() {
                eprint!("{rendered}");
                return EXIT_USAGE;
            }
            print!("{rendered}");
            return 0;
        }
    };
    let (code, body) = run(&cli);
    if code == EXIT_USAGE {
        eprintln!("{body}");
    } else {
        println!("{body}");
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut argv = vec!["seqspace"];
        argv.extend_from_slice(args);
        let cli = Cli::try_parse_from(argv).expect("args parse");
        run(&cli)
    }

    #[test]
    fn norm_example() {
        let (code, body) = run_args(&[
            "norm",
            "--space",
            "int_bv",
            "--seq",
            "finite:[1,1/2,1/3]",
        ]);
        assert_eq!(code, 0);
        assert_eq!(body, "2");
    }

    #[test]
    fn transform_example() {
        let (code, body) = run_args(&[
            "transform",
            "--op",
            "gamma",
            "--seq",
            "powerlaw:1,-1",
            "--n",
            "4",
        ]);
        assert_eq!(code, 0);
        assert_eq!(body, "[1, 0, 0, 0]");
    }

    #[test]
    fn exit_codes_follow_verdicts() {
        let (code, _) = run_args(&[
            "member",
            "--space",
            "int_bv",
            "--seq",
            "powerlaw:1,-1",
        ]);
        assert_eq!(code, 0);
        let (code, _) = run_args(&[
            "classify",
            "--matrix",
            "gamma",
            "--from",
            "l1",
            "--to",
            "l1",
        ]);
        assert_eq!(code, 1);
        let (code, _) = run_args(&[
            "dual-check",
            "--space",
            "int_bv",
            "--kind",
            "gamma",
            "--seq",
            "const:1",
        ]);
        assert_eq!(code, 1);
        // convergent but non-rational column series: honestly undecided
        let (code, _) = run_args(&[
            "reduce",
            "--matrix",
            "diag:1/n",
            "--class",
            "int_bv:c0s",
        ]);
        assert_eq!(code, 2);
        let (code, body) = run_args(&["norm", "--space", "l1", "--seq", "const:nope"]);
        assert_eq!(code, 64);
        assert!(body.starts_with("error:"));
    }

    #[test]
    fn json_reports_are_deterministic() {
        let args = [
            "dual-check",
            "--space",
            "int_bv",
            "--kind",
            "beta",
            "--seq",
            "alt:1",
            "--probe",
            "128",
            "--json",
        ];
        let (c1, b1) = run_args(&args);
        let (c2, b2) = run_args(&args);
        assert_eq!(c1, c2);
        assert_eq!(b1, b2);
        let v: serde_json::Value = serde_json::from_str(&b1).unwrap();
        for key in ["command", "payload", "certificate", "probe", "seed", "version"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn verify_suite_runs() {
        let (code, body) = run_args(&[
            "verify",
            "--suite",
            "isometry",
            "--trials",
            "20",
            "--probe",
            "64",
        ]);
        assert_eq!(code, 0);
        assert!(body.contains("0 failures"), "{body}");
        let (code, _) = run_args(&["verify", "--suite", "nope"]);
        assert_eq!(code, 64);
    }

    #[test]
    fn reduce_example() {
        let (code, body) = run_args(&[
            "reduce",
            "--matrix",
            "identity",
            "--class",
            "int_bv:linf",
            "--probe",
            "128",
        ]);
        assert_eq!(code, 0);
        assert!(body.contains("value: 1"), "{body}");
    }

    #[test]
    fn basis_output() {
        let (code, body) = run_args(&["basis", "--space", "int_bv", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(body.contains("prefix: [0, 1/2, 1/3, 1/4"), "{body}");
    }
}
