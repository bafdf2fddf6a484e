//! `heunzeros`: command-line front end for heun-core.
//!
//! Exit codes: 0 success, 1 a verify check failed, 2 parse error,
//! 3 numerical non-convergence, 4 invalid parameters.

mod args;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::Parser;
use heun_core::families::{from_lame, from_mathieu, from_whittaker_hill, LameParams, MathieuParams, WhittakerHillParams};
use heun_core::oracle::d2_by_midpoint_matching;
use heun_core::recurrence::build_family;
use heun_core::report::{self, family_to_json, zeros_document, ElemCodec};
use heun_core::rootfind::{zeros_of, RootOptions};
use heun_core::scalar::format_complex;
use heun_core::tracking::{assign_labels, convergence_report, d2_closed_form_s0, d2_sequence, d2_zero_search};
use heun_core::verify::{run_suite, Suite, VerifyOptions};
use heun_core::{BigFloat, Exact, Field, HeunError, PolynomialFamily, RecurrenceSpec, Scalar};
use serde::Serialize;

use args::{Cli, Command, Common, Family, FamilyArgs, Format};

/// An error plus the exit code it maps to.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<HeunError> for Failure {
    fn from(e: HeunError) -> Self {
        let (code, kind) = match &e {
            HeunError::Parse(_) => (2, "parse"),
            HeunError::NoConvergence(_) => (3, "no_convergence"),
            HeunError::InvalidParameter(_) => (4, "invalid_parameter"),
            HeunError::Degenerate(_) => (4, "degenerate"),
            HeunError::NotExact(_) => (4, "not_exact"),
            HeunError::OutOfRange(_) => (4, "out_of_range"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 4, kind: "invalid_parameter", message: message.into() }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            let msg = serde_json::json!({ "error": f.kind, "message": f.message });
            eprintln!("{msg}");
            ExitCode::from(f.code)
        }
    }
}

fn require(x: &Option<Scalar>, name: &str, family: Family) -> Result<Scalar, Failure> {
    x.clone().ok_or_else(|| invalid(format!("--{name} is required for --family {family:?}")))
}

/// The spec and, when the arguments determine one, the value of `B`.
fn build_spec(a: &FamilyArgs) -> Result<(RecurrenceSpec, Option<Scalar>), Failure> {
    let fam = a.family;
    let (spec, implied_b) = match fam {
        Family::Lame => {
            let setup = from_lame(&LameParams { n: require(&a.n, "n", fam)?, s: require(&a.s, "s", fam)?, eta: a.eta.clone() })?;
            (setup.spec, setup.b)
        }
        Family::Mathieu => {
            let q = a.q.clone().or_else(|| a.s.clone()).ok_or_else(|| invalid("--s (or --q) is required for mathieu"))?;
            let (spec, b) = from_mathieu(&MathieuParams { a: a.a.clone().unwrap_or(Scalar::int(0)), q })?;
            (spec, a.a.as_ref().map(|_| b))
        }
        Family::Wh => {
            let a0 = a.a0.clone().unwrap_or(Scalar::int(0));
            let params = match (&a.h, &a.a1) {
                (Some(h), Some(a1)) => WhittakerHillParams { a0, a1: a1.clone(), h: h.clone() },
                (None, None) => WhittakerHillParams::from_alpha_s(&require(&a.alpha, "alpha", fam)?, &require(&a.s, "s", fam)?, a0)?,
                _ => return Err(invalid("give either --h and --a1, or --alpha and --s")),
            };
            let (spec, b) = from_whittaker_hill(&params)?;
            (spec, a.a0.as_ref().map(|_| b))
        }
        Family::Heun => (
            RecurrenceSpec::heun(
                require(&a.gamma, "gamma", fam)?,
                require(&a.delta, "delta", fam)?,
                require(&a.alpha, "alpha", fam)?,
                require(&a.beta, "beta", fam)?,
                require(&a.s, "s", fam)?,
            )?,
            None,
        ),
        Family::Cheun => (
            RecurrenceSpec::confluent(
                require(&a.gamma, "gamma", fam)?,
                require(&a.delta, "delta", fam)?,
                require(&a.alpha, "alpha", fam)?,
                require(&a.s, "s", fam)?,
            )?,
            None,
        ),
        Family::Rcheun => (
            RecurrenceSpec::reduced_confluent(require(&a.gamma, "gamma", fam)?, require(&a.delta, "delta", fam)?, require(&a.s, "s", fam)?)?,
            None,
        ),
    };
    Ok((spec, a.b.clone().or(implied_b)))
}

fn root_options(c: &Common) -> RootOptions {
    RootOptions { precision_bits: c.prec, tol: c.tol, seed_policy: c.seeds.into(), max_iter: c.max_iter }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Poly { family, m_max, common } => cmd_poly(&family, m_max, &common),
        Command::Zeros { family, m, imag_tol, common } => cmd_zeros(&family, m, imag_tol, &common),
        Command::Table { family, m, rows, common } => cmd_table(&family, m, rows, &common),
        Command::Track { family, m, common } => cmd_track(&family, &m, &common),
        Command::D2 { family, k_max, find_zero, common } => cmd_d2(&family, k_max, find_zero, &common),
        Command::Verify { family, suite, m_max, k_max, common } => cmd_verify(&family, &suite, m_max, k_max, &common),
    }
}

fn render_family<F: ElemCodec>(fam: &PolynomialFamily<F>, c: &Common) -> String {
    let f = fam.field();
    match c.format {
        Format::Json => json(&family_to_json(fam)),
        Format::Csv => {
            let mut out = String::from("k,power,re,im\n");
            for (k, p) in fam.polys().iter().enumerate() {
                for (j, coeff) in p.coeffs().iter().enumerate() {
                    let [re, im] = f.encode(coeff);
                    writeln!(out, "{k},{j},{re},{im}").unwrap();
                }
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (k, p) in fam.polys().iter().enumerate() {
                let terms: Vec<String> = p
                    .coeffs()
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !f.is_zero(c))
                    .map(|(j, coeff)| {
                        let v = f.to_scalar(coeff);
                        let v = match v {
                            Scalar::Exact(_) => format!("({v})"),
                            Scalar::Float(z) => format!("({})", format_complex(&z, c.digits)),
                        };
                        match j {
                            0 => v,
                            1 => format!("{v} B"),
                            _ => format!("{v} B^{j}"),
                        }
                    })
                    .collect();
                let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                writeln!(out, "c_{k} = {body}").unwrap();
            }
            out
        }
    }
}

fn cmd_poly(a: &FamilyArgs, m_max: usize, c: &Common) -> Outcome {
    let (spec, _) = build_spec(a)?;
    let out = if spec.is_exact() {
        render_family(&build_family(&spec, m_max, Exact)?, c)
    } else {
        render_family(&build_family(&spec, m_max, BigFloat::new(c.prec))?, c)
    };
    Ok((out, 0))
}

fn cmd_zeros(a: &FamilyArgs, m: usize, imag_tol: f64, c: &Common) -> Outcome {
    let (spec, _) = build_spec(a)?;
    if m == 0 {
        return Err(invalid("c_0 is constant; use --m ≥ 1"));
    }
    let zset = zeros_of(&spec, m, &root_options(c))?;
    let labels = assign_labels(&spec, &zset)?;
    let doc = zeros_document(&spec, &zset, &labels, c.digits, imag_tol);
    let out = match c.format {
        Format::Json => json(&doc),
        Format::Csv => doc.to_csv(),
        Format::Text => doc.to_text(),
    };
    Ok((out, if zset.all_converged() { 0 } else { 3 }))
}

fn cmd_table(a: &FamilyArgs, m: usize, rows: usize, c: &Common) -> Outcome {
    let (spec, _) = build_spec(a)?;
    let mut table = report::approx_table(&spec, m, rows, &root_options(c))?;
    for row in &mut table.rows {
        for slot in row.approx.iter_mut().skip(c.order as usize + 1) {
            *slot = None;
        }
    }
    let out = match c.format {
        Format::Json => json(&table.to_json(c.digits)),
        Format::Csv => table.to_csv(c.digits),
        Format::Text => table.to_text(c.digits),
    };
    Ok((out, 0))
}

fn cmd_track(a: &FamilyArgs, m_list: &[usize], c: &Common) -> Outcome {
    let (spec, _) = build_spec(a)?;
    let rep = convergence_report(&spec, m_list, &root_options(c))?;
    let doc = report::report_document(&rep, c.digits, c.digits as u32);
    let out = match c.format {
        Format::Json => json(&doc),
        Format::Csv => doc.to_csv(),
        Format::Text => doc.to_text(),
    };
    Ok((out, 0))
}

fn cmd_d2(a: &FamilyArgs, k_max: usize, find_zero: bool, c: &Common) -> Outcome {
    let (spec, b) = build_spec(a)?;
    let b = b.ok_or_else(|| invalid("--B (or a family-specific value such as --a, --a0, --eta) is required"))?;
    let prec = c.prec;
    let bf = BigFloat::new(prec);
    let b0 = bf.lift(&b)?;
    let (b_used, est) = if find_zero {
        let tol = c.tol.unwrap_or(1e-12);
        let z = d2_zero_search(&spec, &b0, c.max_iter.min(200), tol, k_max, prec)?;
        (Scalar::Float(z.b.clone()), z.d2)
    } else {
        (b.clone(), d2_sequence(&spec, &b0, k_max, prec)?)
    };
    let closed = if spec.s().is_zero() { Some(d2_closed_form_s0(&spec, &est.b, prec)?) } else { None };
    let mid = d2_by_midpoint_matching(&spec, &b_used, None, prec).ok();
    let doc = report::d2_document(&spec, &est, closed.as_ref(), mid.as_ref().map(|m| (&m.d2, m.condition)), c.digits);
    let out = match c.format {
        Format::Json => json(&doc),
        Format::Csv => doc.to_csv(),
        Format::Text => doc.to_text(),
    };
    Ok((out, 0))
}

fn cmd_verify(a: &FamilyArgs, suite: &str, m_max: usize, k_max: usize, c: &Common) -> Outcome {
    let (spec, _) = build_spec(a)?;
    let suite: Suite = suite.parse()?;
    let checks = run_suite(suite, &spec, &VerifyOptions { m_max, k_max, precision_bits: c.prec })?;
    let code = if checks.iter().all(|c| c.passed) { 0 } else { 1 };
    let out = match c.format {
        Format::Json => json(&serde_json::json!({ "schema": report::SCHEMA_VERSION, "suite": suite, "checks": checks })),
        Format::Csv => {
            let mut out = String::from("check,passed,detail\n");
            for ch in &checks {
                writeln!(out, "\"{}\",{},\"{}\"", ch.name, ch.passed, ch.detail.replace('"', "\"\"")).unwrap();
            }
            out
        }
        Format::Text => checks.iter().map(|c| format!("{c}\n")).collect(),
    };
    Ok((out, code))
}
