use std::path::Path;

use hopfgroup::dsl::{parse_document, print_document, Decl, Document, SeriesDecl};
use hopfgroup::fab::{finite_direct_limit, transition_multiplier, validate_limit_sequence, validate_stable_chain};
use hopfgroup::fgl::{builtin_fgl, extract_associativity_constraints, fgl_inverse, verify_fgl, BuiltinFgl};
use hopfgroup::hopf::verify_hopf;
use hopfgroup::hopf_fgl::{
    epsilon_reduce, extend_hopf, extract_extension_constraints, g_series, solve_theta, trivial_extension,
    verify_condition1, verify_condition2, verify_condition3, verify_g_property, HopfFgl,
};
use hopfgroup::report::{emit_report, ReportFormat, Verdict, VerificationReport};
use serde::Serialize;

use crate::{ChainMode, Check, Command, Condition, Fab, Named, Outcome, Output};

/// Cutoff for Hopf algebra checks when `--trunc` is not given.
const DEFAULT_HOPF_CUTOFF: u32 = 6;

type CliResult<T> = Result<T, String>;
type Verifier = fn(&HopfFgl) -> VerificationReport;

pub fn run(cmd: Command, out: &Output) -> CliResult<Outcome> {
    match cmd {
        Command::Parse { file } => {
            let doc = load(&file)?;
            Ok(text(print_document(&doc)))
        }
        Command::Check(check) => run_check(check, out),
        Command::Inverse(t) => {
            let doc = load(&t.file)?;
            let s = series(&doc, &t)?;
            let inv = fgl_inverse(&s.fgl, s.fgl.cutoff()).map_err(|e| e.to_string())?;
            Ok(value(out, &t.name, "inverse", inv.to_string()))
        }
        Command::Theta(t) => {
            let doc = load(&t.file)?;
            let g = hopffgl(&doc, &t)?;
            let theta = solve_theta(g).map_err(|e| e.to_string())?;
            Ok(value(out, &t.name, "theta", theta.to_string()))
        }
        Command::Reduce(t) => {
            let doc = load(&t.file)?;
            let g = hopffgl(&doc, &t)?;
            let fgl = epsilon_reduce(g).map_err(|e| e.to_string())?;
            let mut reduced = Document::new();
            let ring = g.hopf().base.clone();
            reduced.push(Decl::Ring(ring.clone())).map_err(|e| e.to_string())?;
            reduced
                .push(Decl::Series(SeriesDecl { ring, fgl }))
                .map_err(|e| e.to_string())?;
            Ok(value(out, &t.name, "reduce", print_document(&reduced)))
        }
        Command::TrivialExtend {
            file,
            fgl,
            hopf,
            out: path,
        } => {
            let doc = load(&file)?;
            let s = doc.series(&fgl).ok_or_else(|| missing(&file, "series", &fgl))?;
            let h = doc.hopf(&hopf).ok_or_else(|| missing(&file, "Hopf algebra", &hopf))?;
            if h.base != s.ring {
                return Err(format!(
                    "`{fgl}` lives over `{}` but `{hopf}` is over `{}`",
                    s.ring.name, h.base.name
                ));
            }
            let g = match trivial_extension(&s.fgl, h.clone()) {
                Ok(g) => g,
                Err(e @ hopfgroup::Error::FglFailsVerification(_)) => {
                    let report = verify_fgl(&s.fgl, s.fgl.cutoff());
                    let mut o = reports(vec![report], out);
                    o.stdout.push_str(&format!("not extended: {e}\n"));
                    return Ok(o);
                }
                Err(e) => return Err(e.to_string()),
            };
            let mut ext = Document::new();
            for decl in [Decl::Ring(h.base.clone()), Decl::Hopf(h.clone()), Decl::HopfFgl(g)] {
                ext.push(decl).map_err(|e| e.to_string())?;
            }
            std::fs::write(&path, print_document(&ext)).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            Ok(value(out, &fgl, "trivial-extend", format!("wrote {}", path.display())))
        }
        Command::ExtendHopf(t) => {
            let doc = load(&t.file)?;
            let g = hopffgl(&doc, &t)?;
            let report = match extend_hopf(g) {
                Ok((_, r)) => r,
                Err(e) => VerificationReport::error(g.name.clone(), "extend-hopf", Some(g.cutoff()), e),
            };
            Ok(reports(vec![report], out))
        }
        Command::Gseries(t) => {
            let doc = load(&t.file)?;
            let g = hopffgl(&doc, &t)?;
            let gs = g_series(g).map_err(|e| e.to_string())?;
            Ok(value(out, &t.name, "gseries", gs.series().to_string()))
        }
        Command::Gproperty(t) => {
            let doc = load(&t.file)?;
            let g = hopffgl(&doc, &t)?;
            Ok(reports(vec![verify_g_property(g)], out))
        }
        Command::Constraints { target, max_degree } => {
            let doc = load(&target.file)?;
            let lines = constraints(&doc, &target, max_degree)?;
            Ok(value(out, &target.name, "constraints", lines.join("\n")))
        }
        Command::Fab(fab) => run_fab(fab, out),
    }
}

fn run_check(check: Check, out: &Output) -> CliResult<Outcome> {
    match check {
        Check::Hopf(c) => {
            let doc = load(&c.target.file)?;
            let h = doc
                .hopf(&c.target.name)
                .ok_or_else(|| missing(&c.target.file, "Hopf algebra", &c.target.name))?;
            let cutoff = c.trunc.unwrap_or(DEFAULT_HOPF_CUTOFF);
            Ok(reports(vec![verify_hopf(h, cutoff)], out))
        }
        Check::Fgl(c) => {
            let doc = load(&c.target.file)?;
            let s = series(&doc, &c.target)?;
            let cutoff = cutoff(c.trunc, s.fgl.cutoff())?;
            Ok(reports(vec![verify_fgl(&s.fgl, cutoff)], out))
        }
        Check::Hopffgl { checked, skip } => {
            let doc = load(&checked.target.file)?;
            let g = hopffgl(&doc, &checked.target)?;
            let g = g.truncated(cutoff(checked.trunc, g.cutoff())?);
            let mut rs = Vec::new();
            let verifiers: [(Condition, Verifier); 3] = [
                (Condition::Condition1, verify_condition1),
                (Condition::Condition2, verify_condition2),
                (Condition::Condition3, verify_condition3),
            ];
            for (cond, verify) in verifiers {
                if !skip.contains(&cond) {
                    rs.push(verify(&g));
                }
            }
            Ok(reports(rs, out))
        }
    }
}

fn run_fab(fab: Fab, out: &Output) -> CliResult<Outcome> {
    match fab {
        Fab::Multiplier { k, l, m, n } => {
            let a = transition_multiplier(k, l, m, n).map_err(|e| e.to_string())?;
            Ok(value(
                out,
                &format!("({k},{l})->({m},{n})"),
                "multiplier",
                a.to_string(),
            ))
        }
        Fab::Chain { target, mode, from, to } => {
            let doc = load(&target.file)?;
            let c = doc
                .chain(&target.name)
                .ok_or_else(|| missing(&target.file, "chain", &target.name))?;
            let report = match mode {
                ChainMode::Limit => validate_limit_sequence(c),
                ChainMode::Stable => validate_stable_chain(c, from.unwrap_or(c.first()), to.unwrap_or(c.last())),
            };
            Ok(reports(vec![report], out))
        }
        Fab::Limit { multipliers } => {
            let limit = finite_direct_limit(&multipliers);
            let primes: Vec<String> = limit.inverted_primes.iter().map(u64::to_string).collect();
            let body = format!(
                "limit: {}\ninverted primes: {{{}}}\nlocalization (prefix invariant): {}",
                limit.group,
                primes.join(", "),
                limit.localization()
            );
            let subject: Vec<String> = multipliers.iter().map(u64::to_string).collect();
            Ok(value(out, &format!("[{}]", subject.join(",")), "limit", body))
        }
    }
}

fn constraints(doc: &Document, target: &Named, max_degree: u32) -> CliResult<Vec<String>> {
    let mut lines = Vec::new();
    match doc.get(&target.name) {
        Some(Decl::Hopf(h)) => {
            let sys = extract_extension_constraints(h.clone(), max_degree).map_err(|e| e.to_string())?;
            let names: Vec<&str> = sys.unknowns.iter().map(|u| u.name.as_str()).collect();
            lines.push(format!("unknowns: {}", names.join(", ")));
            lines.push(format!("equations: {}", sys.equations.len()));
            lines.extend(sys.equations.iter().map(|e| format!("  {}", e.describe())));
            lines.push(format!("solved: {}", sys.solved.len()));
            lines.extend(sys.solved.iter().map(|(n, v)| format!("  {n} = {}", v.display(0))));
            lines.push(format!("remaining: {}", sys.remaining.len()));
            lines.extend(sys.remaining.iter().map(|e| format!("  {}", e.describe())));
        }
        Some(Decl::Series(s)) => {
            for c in extract_associativity_constraints(&s.fgl, max_degree).map_err(|e| e.to_string())? {
                lines.push(format!("{}: {} = 0", c.at, c.relation.display(0)));
            }
        }
        Some(Decl::Ring(_)) => {
            let generic = builtin_fgl(BuiltinFgl::Generic, max_degree, true);
            for c in extract_associativity_constraints(&generic, max_degree).map_err(|e| e.to_string())? {
                lines.push(format!("{}: {} = 0", c.at, c.relation.display(0)));
            }
        }
        _ => return Err(missing(&target.file, "Hopf algebra, series or ring", &target.name)),
    }
    if lines.is_empty() {
        lines.push("no constraints".into());
    }
    Ok(lines)
}

fn load(path: &Path) -> CliResult<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_document(&text).map_err(|d| format!("{}:{d}", path.display()))
}

fn missing(file: &Path, what: &str, name: &str) -> String {
    format!("no {what} named `{name}` in {}", file.display())
}

fn series<'a>(doc: &'a Document, t: &Named) -> CliResult<&'a SeriesDecl> {
    doc.series(&t.name).ok_or_else(|| missing(&t.file, "series", &t.name))
}

fn hopffgl<'a>(doc: &'a Document, t: &Named) -> CliResult<&'a HopfFgl> {
    doc.hopffgl(&t.name).ok_or_else(|| missing(&t.file, "hopffgl", &t.name))
}

fn cutoff(requested: Option<u32>, declared: u32) -> CliResult<u32> {
    match requested {
        None => Ok(declared),
        Some(w) if w <= declared => Ok(w),
        Some(w) => Err(format!("--trunc {w} exceeds the declared trunc {declared}")),
    }
}

fn text(stdout: String) -> Outcome {
    Outcome { stdout, status: 0 }
}

#[derive(Serialize)]
struct MachineValue<'a> {
    subject: &'a str,
    command: &'a str,
    result: &'a str,
}

/// A computed value: the text itself, or one JSON line.
fn value(out: &Output, subject: &str, command: &str, result: String) -> Outcome {
    let result = result.trim_end();
    match out.format {
        ReportFormat::Text => text(format!("{result}\n")),
        ReportFormat::Machine => {
            let v = MachineValue {
                subject,
                command,
                result,
            };
            text(format!("{}\n", serde_json::to_string(&v).expect("serializable")))
        }
    }
}

fn reports(rs: Vec<VerificationReport>, out: &Output) -> Outcome {
    let mut stdout = String::new();
    for r in &rs {
        stdout.push_str(&emit_report(r, out.format, out.color));
    }
    let status = if rs.iter().any(|r| r.verdict == Verdict::Error) {
        2
    } else if rs.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else {
        0
    };
    Outcome { stdout, status }
}
