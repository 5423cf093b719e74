//! Subcommand bodies. Each returns a [`Report`] holding both renderings.

use std::fmt;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use voa_char::characters::{
    char_pair_partition, char_trace_oracle, char_zhu, f_closed_form, CharacterResult,
};
use voa_char::exact_arith::{factorial, format_rational, int_rat};
use voa_char::lattice::{
    lattice_char_closed, lattice_char_zhu, theorem2_limit, DirectionSpec, Lattice,
};
use voa_char::padic_limits::{limit_state, residues, theorem1_limit, LimitResult, LimitSpec};
use voa_char::{Error, FockState, SquareWord};

use crate::render;
use crate::{LatticeArgs, LimitArgs};

#[derive(Debug)]
pub enum CliError {
    /// Rejected input; exit 1.
    Invalid(String),
    /// A computation that should succeed did not; exit 2.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) | Error::OffsetMismatch { .. } => {
                CliError::Failed(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// A finished command: JSON and text renderings plus the verdict.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub ok: bool,
    pub failure: Option<String>,
}

impl Report {
    fn pass(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            ok: true,
            failure: None,
        }
    }

    fn verdict(json: Value, text: String, ok: bool, failure: &str) -> Self {
        Self {
            json,
            text,
            ok,
            failure: (!ok).then(|| failure.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Partition,
    Zhu,
    Trace,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LatticeAlgo {
    Closed,
    Zhu,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinLattice {
    E8,
}

/// `--qprec N` asks for coefficients through `q^N`.
fn precision(qprec: usize) -> usize {
    qprec + 1
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn verdict_str(agree: bool) -> &'static str {
    if agree {
        "AGREE"
    } else {
        "DISAGREE"
    }
}

pub fn character(word: &str, qprec: usize, algo: Algo) -> Result<Report, CliError> {
    let w = SquareWord::parse(word)?;
    if w.is_empty() {
        return Err(CliError::Invalid("word must be nonempty".into()));
    }
    let n = precision(qprec);
    let mut results: Vec<CharacterResult> = Vec::new();
    if matches!(algo, Algo::Partition | Algo::All) {
        results.push(char_pair_partition(&w, n));
    }
    if matches!(algo, Algo::Zhu | Algo::All) {
        results.push(char_zhu(&w, n));
    }
    if matches!(algo, Algo::Trace | Algo::All) {
        results.push(char_trace_oracle(&FockState::from_square_word(&w), n)?);
    }
    let mut json = json!({
        "command": "character",
        "word": w.indices(),
        "qprec": qprec,
        "results": to_value(&results),
    });
    let mut text = format!("word [{}] through q^{qprec}\n", render::join(w.indices()));
    for r in &results {
        text.push_str(&render::character_line(r));
    }
    if algo == Algo::All {
        let agree = results.windows(2).all(|p| p[0].series == p[1].series);
        json["verdict"] = json!(verdict_str(agree));
        text.push_str(&format!("verdict: {}\n", verdict_str(agree)));
        return Ok(Report::verdict(json, text, agree, "algorithms disagree"));
    }
    Ok(Report::pass(json, text))
}

pub fn closed_form(r: u64, t: u64, qprec: usize) -> Result<Report, CliError> {
    let res = f_closed_form(r, t, precision(qprec))?;
    let json = json!({
        "command": "closed-form",
        "r": r,
        "t": t,
        "qprec": qprec,
        "result": to_value(&res),
    });
    let text = format!(
        "h[-{r}] h[-1]^{t} 1 through q^{qprec}\n{}",
        render::character_line(&res)
    );
    Ok(Report::pass(json, text))
}

fn limit_spec(args: &LimitArgs) -> Result<LimitSpec, CliError> {
    if args.m == 0 {
        return Err(CliError::Invalid(
            "p-adic precision m must be positive".into(),
        ));
    }
    Ok(LimitSpec::new(args.p, args.l, args.t, args.a_max)?)
}

fn spec_json(args: &LimitArgs) -> Value {
    json!({ "p": args.p, "l": args.l, "t": args.t, "a_max": args.a_max, "m": args.m, "qprec": args.qprec })
}

fn limit_report(
    command: &str,
    args: &LimitArgs,
    res: &LimitResult,
    extra: Value,
    header: String,
) -> Report {
    let res_mod: Vec<Value> = residues(&res.character.series, args.p, args.m)
        .iter()
        .map(|r| {
            r.as_ref()
                .map_or(Value::Null, |x| json!(format_rational(x)))
        })
        .collect();
    let mut json = json!({
        "command": command,
        "spec": spec_json(args),
        "limit": to_value(res),
        "residues": res_mod,
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut json, extra) {
        dst.extend(src);
    }
    let mut text = header;
    text.push_str(&render::limit(res, args.p, args.m));
    let ok = res.certificate.all_pass();
    Report::verdict(
        json,
        text,
        ok,
        "stage characters do not converge to the limit",
    )
}

pub fn heisenberg_limit(args: &LimitArgs) -> Result<Report, CliError> {
    let spec = limit_spec(args)?;
    let res = theorem1_limit(&spec, precision(args.qprec), args.m)?;
    let state = limit_state(&spec, args.m)?;
    let header = format!(
        "u_(l={}, t={}) at p = {}, mod {}^{}, through q^{}\nlimit state: {}\n",
        args.l, args.t, args.p, args.p, args.m, args.qprec, state.state
    );
    let extra = json!({ "limit_state": to_value(&state) });
    Ok(limit_report("heisenberg-limit", args, &res, extra, header))
}

fn load_lattice(args: &LatticeArgs) -> Result<(Lattice, DirectionSpec), CliError> {
    let lattice = match (&args.lattice, &args.gram) {
        (Some(BuiltinLattice::E8), None) => Lattice::e8(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
            Lattice::parse_gram(&text)?
        }
        (None, None) => {
            return Err(CliError::Invalid(
                "one of --lattice or --gram is required".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Invalid(
                "--lattice and --gram are exclusive".into(),
            ))
        }
    };
    let dir = match &args.direction {
        Some(text) => DirectionSpec::parse(&lattice, text)?,
        None => DirectionSpec::first_basis_vector(&lattice),
    };
    Ok((lattice, dir))
}

fn lattice_json(l: &Lattice, dir: &DirectionSpec) -> Value {
    json!({
        "rank": l.rank(),
        "gram": l.gram(),
        "determinant": l.determinant().to_string(),
        "direction": dir.alpha0,
        "norm0": dir.norm0,
    })
}

pub fn lattice_character(
    args: &LatticeArgs,
    r: u64,
    t: u64,
    qprec: usize,
    algo: LatticeAlgo,
) -> Result<Report, CliError> {
    let (lattice, dir) = load_lattice(args)?;
    let n = precision(qprec);
    let word = SquareWord::r_ones(
        u32::try_from(r).map_err(|_| CliError::Invalid(format!("r = {r} is too large")))?,
        u32::try_from(t).map_err(|_| CliError::Invalid(format!("t = {t} is too large")))?,
    )?;
    let mut json = json!({
        "command": "lattice-character",
        "lattice": lattice_json(&lattice, &dir),
        "r": r,
        "t": t,
        "qprec": qprec,
    });
    let mut text = format!(
        "v_(r={r}, t={t}) in a rank {} lattice, direction {:?}, through q^{qprec}\n",
        lattice.rank(),
        dir.alpha0
    );
    let closed = match algo {
        LatticeAlgo::Closed | LatticeAlgo::All => {
            Some(lattice_char_closed(&lattice, &dir, r, t, n)?)
        }
        LatticeAlgo::Zhu => None,
    };
    let zhu = match algo {
        LatticeAlgo::Zhu | LatticeAlgo::All => Some(lattice_char_zhu(&lattice, &dir, &word, n)?),
        LatticeAlgo::Closed => None,
    };
    if let Some(c) = &closed {
        json["raw"] = to_value(&c.raw);
        json["closed_form"] = to_value(&c.character);
        text.push_str(&format!("Z(v):    {}\n", c.raw));
        text.push_str(&render::character_line(&c.character));
    }
    if let Some(z) = &zhu {
        // recursion runs on h[-r] h[-1]^t 1 = v_{r,t} / (r-1)!
        json["recursion"] = to_value(z);
        text.push_str(&render::character_line(z));
    }
    if let (Some(c), Some(z)) = (&closed, &zhu) {
        let agree = c.character.series == z.series.scale(&int_rat(factorial(r - 1)));
        json["verdict"] = json!(verdict_str(agree));
        text.push_str(&format!(
            "closed form = (r-1)! * recursion: {}\n",
            verdict_str(agree)
        ));
        return Ok(Report::verdict(
            json,
            text,
            agree,
            "closed form and recursion disagree",
        ));
    }
    Ok(Report::pass(json, text))
}

pub fn lattice_limit(lattice: &LatticeArgs, args: &LimitArgs) -> Result<Report, CliError> {
    let (l, dir) = load_lattice(lattice)?;
    let spec = limit_spec(args)?;
    let res = theorem2_limit(&l, &dir, &spec, precision(args.qprec), args.m)?;
    let header = format!(
        "lattice limit (l={}, t={}) in rank {} at p = {}, mod {}^{}, through q^{}\n",
        args.l,
        args.t,
        l.rank(),
        args.p,
        args.p,
        args.m,
        args.qprec
    );
    let extra = json!({ "lattice": lattice_json(&l, &dir) });
    Ok(limit_report("lattice-limit", args, &res, extra, header))
}
