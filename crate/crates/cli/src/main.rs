//! Command-line front door for the `weylstar` library.
//!
//! Every subcommand maps to exactly one library operation. Output is either
//! pretty text (default) or the library's JSON serializations (`--json`).
//! Structure-check subcommands (`osp-roots`, `osp-check`, `ck-image`, `cg`)
//! always emit a JSON report `{check, parameters, status, witnesses}`.
//!
//! Exit codes: `0` success, `1` domain error, `2` parse/usage error,
//! `3` a numeric summation ended undetermined or diverged.
//!
//! Scalars print exactly (`a/b`, `c/d*i`, `a/b+c/d*i`); decimal output
//! appears only in numeric-series results, at 17 significant digits.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use weylstar::json as wjson;
use weylstar::moyal::{self, BracketKind};
use weylstar::operators::{self, LinOp, NormalSymbol, SpecialOp};
use weylstar::osp;
use weylstar::parse::{parse_poly, parse_scalar};
use weylstar::poly::poisson_bracket;
use weylstar::trace::{self, GradedSeries, SeriesStatus, SummationPolicy, TraceInput, TraceResult, TraceStatus};
use weylstar::weyl::{self, NormalForm};
use weylstar::{Error, MultiIndex, Poly, Scalar, VarKind};

// ---------------------------------------------------------------------------
// Command-line grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "weylstar",
    version,
    about = "Exact Moyal star products, orthosymplectic structure checks, and \
             operator supertraces on the polynomial module",
    max_term_width = 100
)]
struct Cli {
    /// Emit the library's JSON serialization instead of text.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Pretty-print as text (the default).
    #[arg(long, global = true)]
    text: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Star product F ⋆ G of two symplectic polynomials.
    Star {
        /// Number of symplectic pairs (variables p1..pn, q1..qn).
        #[arg(short, long)]
        n: usize,
        /// Deformation parameter (exact scalar); omit for the standard product.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },

    /// Bracket of F and G: plain commutator, super, or twisted variants.
    Bracket {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(short, long)]
        n: usize,
        /// Deformation parameter (exact scalar); omit for the standard product.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },

    /// Supertrace Str(F) = F(0) of a symplectic polynomial.
    Str {
        #[arg(short, long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },

    /// Bilinear form κ(F, G) = Str(F ⋆ G).
    Kappa {
        #[arg(short, long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },

    /// Twisted form B(F, G) = (−1)^{fg+1} κ(F, G) on parity parts.
    Bform {
        #[arg(short, long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },

    /// Symmetrization (Weyl ordering) of a polynomial, printed normal-ordered.
    Rho {
        #[arg(short, long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },

    /// Cartan subalgebra, root table, and fundamental system of S¹ ⊕ S².
    OspRoots {
        #[arg(short, long)]
        n: usize,
    },

    /// Structure checks on the orthosymplectic realization (JSON report).
    OspCheck {
        #[arg(long, value_enum)]
        check: OspCheckKind,
        #[arg(short, long, default_value_t = 1)]
        n: usize,
        /// Slice family for the stability check: a (ad-stable) or b (ad′-stable).
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Slice index k for the stability check.
        #[arg(long)]
        k: Option<u32>,
        /// Candidate highest-weight vector (symplectic expression).
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        /// Truncation degree for the spanning check.
        #[arg(long)]
        max_degree: Option<u32>,
    },

    /// Rank of span C_k(S^ℓ, S^m) against the predicted S^{ℓ+m−2k} (JSON report).
    CkImage {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        #[arg(short, long, default_value_t = 1)]
        n: usize,
    },

    /// Bijectivity of the ⋆-multiplication map S^ℓ ⊗ S^m for one pair (JSON report).
    Cg {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
    },

    /// Differential-operator series reconstructing a linear operator.
    Reconstruct {
        #[command(flatten)]
        op: OpSelect,
        #[arg(short, long, default_value_t = 1)]
        n: usize,
        /// Highest derivative order retained.
        #[arg(long, default_value_t = 6)]
        max_order: u32,
    },

    /// Normal symbol of an operator; optionally apply it to a polynomial.
    Wmap {
        #[command(flatten)]
        op: OpSelect,
        #[arg(short, long, default_value_t = 1)]
        n: usize,
        /// Highest symbol order retained.
        #[arg(long, default_value_t = 6)]
        max_order: u32,
        /// Apply the symbol to this polynomial (plain variables x1..xn).
        #[arg(long, allow_hyphen_values = true)]
        apply: Option<String>,
    },

    /// Batch-summed supertrace of an operator on the symbol completion.
    Strwbar {
        #[command(flatten)]
        op: OpSelect,
        #[arg(short, long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        policy: PolicyArgs,
    },

    /// Renormalized supertrace: the batch-summed supertrace divided by 2^n.
    Rstr {
        #[command(flatten)]
        op: OpSelect,
        #[arg(short, long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        policy: PolicyArgs,
    },

    /// Formal inverse Weyl transform as a graded series in p, q.
    Iw {
        #[command(flatten)]
        op: OpSelect,
        #[arg(short, long, default_value_t = 1)]
        n: usize,
        /// Truncation degree of the graded series.
        #[arg(long)]
        max_degree: u32,
        /// Use the closed-form expansion instead of batch summation
        /// (requires --op; exact output).
        #[arg(long)]
        closed: bool,
        #[command(flatten)]
        policy: PolicyArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Lie,
    Super,
    TwistedLie,
    TwistedSuper,
}

impl From<KindArg> for BracketKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lie => BracketKind::Lie,
            KindArg::Super => BracketKind::Super,
            KindArg::TwistedLie => BracketKind::TwistedLie,
            KindArg::TwistedSuper => BracketKind::TwistedSuper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OspCheckKind {
    /// Basis dimension and the super-Jacobi identity on all basis triples.
    Basis,
    /// Slice stability under the chosen adjoint action.
    Stability,
    /// Highest-weight probe of a vector.
    HighestWeight,
    /// The invariant form on 𝕂 ⊕ S¹ against ½·Poisson values.
    Theta,
    /// Spanning of S^k by brackets out of S², plus supertrace vanishing.
    Musson,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecialKind {
    /// Matrix unit: sends x^J to x^I, every other monomial to 0.
    #[value(name = "E", alias = "e")]
    E,
    /// Dilation: multiplies x^K by λ^{|K|}.
    #[value(name = "S", alias = "s")]
    S,
    /// Exponential of the Euler operator, with λ = e^τ supplied exactly.
    #[value(name = "expEuler", alias = "exp-euler")]
    ExpEuler,
}

/// Operator selection shared by the operator-level subcommands.
#[derive(Args)]
struct OpSelect {
    /// Special operator family.
    #[arg(long, value_enum)]
    op: Option<SpecialKind>,

    /// Target multi-index for E (comma-separated exponents, one per variable).
    #[arg(long)]
    i: Option<String>,

    /// Source multi-index for E.
    #[arg(long)]
    j: Option<String>,

    /// Eigenvalue scale for S or expEuler (exact scalar, e.g. "1/2" or "i").
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,

    /// Read a serialized operator (finite-rank table or special) instead.
    #[arg(long, value_name = "PATH", conflicts_with = "op")]
    from_json: Option<PathBuf>,

    /// Read a serialized normal symbol instead.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["op", "from_json"])]
    symbol_json: Option<PathBuf>,
}

#[derive(Args)]
struct PolicyArgs {
    /// Batch-delta tolerance for the convergence policy.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,

    /// Batch budget before an undecided sum reports undetermined.
    #[arg(long, default_value_t = 200)]
    max_terms: u32,
}

impl PolicyArgs {
    fn policy(&self) -> SummationPolicy {
        SummationPolicy {
            tol: self.tol,
            max_batches: self.max_terms,
        }
    }
}

// ---------------------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------------------

enum CliError {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Parse { .. })
            | CliError::Lib(Error::Json(_))
            | CliError::Lib(Error::InvalidData(_)) => 2,
            CliError::Lib(_) => 1,
            CliError::Io(..) | CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "cannot read {}: {e}", path.display()),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

fn sympl(n: usize) -> VarKind {
    VarKind::Symplectic { pairs: n }
}

fn plain(n: usize) -> VarKind {
    VarKind::Plain { vars: n }
}

fn parse_sym(s: &str, n: usize) -> CliResult<Poly> {
    Ok(parse_poly(s, sympl(n))?)
}

fn parse_multi_index(s: &str, n: usize) -> CliResult<MultiIndex> {
    let mut exps = Vec::with_capacity(n);
    for part in s.split(',') {
        let e: u32 = part.trim().parse().map_err(|_| {
            CliError::Usage(format!("invalid multi-index component {part:?} in {s:?}"))
        })?;
        exps.push(e);
    }
    if exps.len() != n {
        return Err(CliError::Usage(format!(
            "multi-index {s:?} has {} components, expected {n}",
            exps.len()
        )));
    }
    Ok(MultiIndex::new(exps))
}

/// A resolved operator input: an operator proper or a normal symbol.
enum OpInput {
    Op(LinOp),
    Symbol(NormalSymbol),
}

impl OpInput {
    fn trace_input(&self) -> TraceInput<'_> {
        match self {
            OpInput::Op(t) => TraceInput::Op(t),
            OpInput::Symbol(s) => TraceInput::Symbol(s),
        }
    }
}

impl OpSelect {
    /// Builds the special operator described by `--op`/`--i`/`--j`/`--lambda`.
    fn special(&self, n: usize) -> CliResult<SpecialOp> {
        let kind = self
            .op
            .ok_or_else(|| CliError::Usage("no operator given: pass --op or an input path".into()))?;
        match kind {
            SpecialKind::E => {
                let i = self.i.as_deref().ok_or_else(|| {
                    CliError::Usage("--op E requires --i (target multi-index)".into())
                })?;
                let j = self.j.as_deref().ok_or_else(|| {
                    CliError::Usage("--op E requires --j (source multi-index)".into())
                })?;
                Ok(SpecialOp::E {
                    target: parse_multi_index(i, n)?,
                    source: parse_multi_index(j, n)?,
                })
            }
            SpecialKind::S => Ok(SpecialOp::S {
                lambda: self.parse_lambda()?,
            }),
            SpecialKind::ExpEuler => Ok(SpecialOp::ExpEuler {
                lambda: self.parse_lambda()?,
            }),
        }
    }

    fn parse_lambda(&self) -> CliResult<Scalar> {
        let text = self
            .lambda
            .as_deref()
            .ok_or_else(|| CliError::Usage("this operator requires --lambda".into()))?;
        Ok(parse_scalar(text)?)
    }

    /// Resolves the full selection: special flags, operator JSON, or symbol JSON.
    fn resolve(&self, n: usize) -> CliResult<OpInput> {
        if let Some(path) = &self.symbol_json {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
            let j: wjson::NormalSymbolJson =
                serde_json::from_str(&text).map_err(|e| CliError::Lib(Error::Json(e)))?;
            return Ok(OpInput::Symbol(wjson::normal_symbol_from_json(&j)?));
        }
        if let Some(path) = &self.from_json {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
            let j: wjson::LinOpJson =
                serde_json::from_str(&text).map_err(|e| CliError::Lib(Error::Json(e)))?;
            return Ok(OpInput::Op(wjson::linop_from_json(&j)?));
        }
        Ok(OpInput::Op(LinOp::special(n, self.special(n)?)?))
    }
}

// ---------------------------------------------------------------------------
// Text renderers
// ---------------------------------------------------------------------------

/// 17 significant digits, scientific notation: deterministic binary64 text.
fn f64_text(v: f64) -> String {
    format!("{v:.16e}")
}

fn scalar_f64_text(s: &Scalar) -> String {
    let re = s.re_f64();
    let im = s.im_f64();
    if im == 0.0 {
        f64_text(re)
    } else if re == 0.0 {
        format!("{}*i", f64_text(im))
    } else {
        format!("{}{:+.16e}*i", f64_text(re), im)
    }
}

/// Whether the exact rendering of a scalar has an interior sign (a genuinely
/// complex value like `1/2-3/4*i`), which needs parentheses inside a term.
fn scalar_text_is_mixed(s: &str) -> bool {
    s.len() > 1 && s[1..].contains(['+', '-'])
}

/// Renders `c · vars` as (negative?, body) with the sign pulled out when the
/// coefficient is real or pure imaginary.
fn exact_coeff_term(c: &Scalar, vars: &str) -> (bool, String) {
    let s = c.to_string();
    let mixed = scalar_text_is_mixed(&s);
    if vars.is_empty() {
        if mixed {
            return (false, format!("({s})"));
        }
        return match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
    }
    if c.is_one() {
        return (false, vars.to_string());
    }
    if mixed {
        return (false, format!("({s})*{vars}"));
    }
    match s.strip_prefix('-') {
        Some("1") => (true, vars.to_string()),
        Some(rest) => (true, format!("{rest}*{vars}")),
        None => (false, format!("{s}*{vars}")),
    }
}

fn join_terms(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (neg, body) in parts {
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Normal-ordered rendering: `q`-variables to the left of `p`-variables.
fn normal_form_text(a: &NormalForm) -> String {
    let parts: Vec<(bool, String)> = a
        .terms()
        .map(|((qa, pb), c)| {
            let mut vars = String::new();
            let mut push = |name: char, m: &MultiIndex| {
                for idx in 0..m.len() {
                    let e = m.get(idx);
                    if e == 0 {
                        continue;
                    }
                    if !vars.is_empty() {
                        vars.push('*');
                    }
                    vars.push_str(&format!("{name}{}", idx + 1));
                    if e > 1 {
                        vars.push_str(&format!("^{e}"));
                    }
                }
            };
            push('q', qa);
            push('p', pb);
            exact_coeff_term(c, &vars)
        })
        .collect();
    join_terms(parts)
}

/// Decimal rendering of a polynomial at 17 significant digits per
/// coefficient, graded-lex descending like the exact printer.
fn poly_f64_text(p: &Poly) -> String {
    let kind = p.kind();
    let parts: Vec<(bool, String)> = p
        .terms()
        .rev()
        .map(|(m, c)| {
            let mut vars = String::new();
            for idx in 0..m.len() {
                let e = m.get(idx);
                if e == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                vars.push_str(&kind.var_name(idx));
                if e > 1 {
                    vars.push_str(&format!("^{e}"));
                }
            }
            let re = c.re_f64();
            let im = c.im_f64();
            let (neg, coeff) = if im == 0.0 {
                (re < 0.0, f64_text(re.abs()))
            } else if re == 0.0 {
                (im < 0.0, format!("{}*i", f64_text(im.abs())))
            } else {
                (false, format!("({}{:+.16e}*i)", f64_text(re), im))
            };
            if vars.is_empty() {
                (neg, coeff)
            } else {
                (neg, format!("{coeff}*{vars}"))
            }
        })
        .collect();
    join_terms(parts)
}

fn mi_text(m: &MultiIndex) -> String {
    let comps: Vec<String> = (0..m.len()).map(|i| m.get(i).to_string()).collect();
    format!("({})", comps.join(","))
}

// ---------------------------------------------------------------------------
// Emitters (value + exit code)
// ---------------------------------------------------------------------------

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail")
}

fn emit_poly(p: &Poly, json_mode: bool) {
    if json_mode {
        println!("{}", pretty(&wjson::poly_to_json(p)));
    } else {
        println!("{p}");
    }
}

fn emit_scalar(s: &Scalar, json_mode: bool) {
    if json_mode {
        println!("{}", pretty(&wjson::ScalarJson::from(s)));
    } else {
        println!("{s}");
    }
}

fn emit_trace(r: &TraceResult, json_mode: bool) -> u8 {
    if json_mode {
        println!("{}", pretty(&wjson::trace_result_to_json(r)));
    } else {
        match &r.status {
            TraceStatus::Exact => {
                println!("{}", r.value);
                println!("status: exact");
            }
            TraceStatus::Converged { batches_used } => {
                println!("{}", r.value);
                println!(
                    "status: converged (batches: {batches_used}; approx {})",
                    scalar_f64_text(&r.value)
                );
            }
            TraceStatus::Diverged => println!("status: diverged"),
            TraceStatus::Undetermined => {
                println!("status: undetermined (batch budget exhausted)")
            }
        }
    }
    if r.is_decided() {
        0
    } else {
        3
    }
}

/// Prints a graded series; `decimals` selects the 17-digit rendering used for
/// batch-summed components (closed forms print exactly).
fn emit_series(s: &GradedSeries, decimals: bool, json_mode: bool) -> u8 {
    if json_mode {
        println!("{}", pretty(&wjson::graded_series_to_json(s)));
    } else {
        println!("n: {}; max degree: {}", s.n(), s.max_degree());
        for c in s.components() {
            match &c.status {
                SeriesStatus::Converged { terms_used } => {
                    let poly = if decimals {
                        poly_f64_text(&c.poly)
                    } else {
                        c.poly.to_string()
                    };
                    println!("degree {} (terms: {terms_used}): {poly}", c.degree);
                }
                SeriesStatus::Diverged => println!("degree {}: diverged", c.degree),
                SeriesStatus::Undetermined => {
                    println!("degree {}: undetermined", c.degree)
                }
            }
        }
        if !s.exists() {
            println!(
                "status: {}",
                if s.has_divergence() { "diverged" } else { "undetermined" }
            );
        }
    }
    if s.exists() {
        0
    } else {
        3
    }
}

fn emit_report(check: &str, parameters: serde_json::Value, ok: bool, witnesses: serde_json::Value) {
    let report = json!({
        "check": check,
        "parameters": parameters,
        "status": if ok { "ok" } else { "failed" },
        "witnesses": witnesses,
    });
    println!("{}", pretty(&report));
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> CliResult<u8> {
    let json_mode = cli.json;
    match &cli.cmd {
        Cmd::Star { n, t, f, g } => {
            let f = parse_sym(f, *n)?;
            let g = parse_sym(g, *n)?;
            let out = match t {
                Some(t) => moyal::star_t(&f, &g, &parse_scalar(t)?),
                None => moyal::star(&f, &g),
            };
            emit_poly(&out, json_mode);
            Ok(0)
        }

        Cmd::Bracket { kind, n, t, f, g } => {
            let f = parse_sym(f, *n)?;
            let g = parse_sym(g, *n)?;
            let kind = BracketKind::from(*kind);
            let out = match t {
                Some(t) => moyal::bracket_t(kind, &f, &g, &parse_scalar(t)?),
                None => moyal::bracket(kind, &f, &g),
            };
            emit_poly(&out, json_mode);
            Ok(0)
        }

        Cmd::Str { n, f } => {
            let f = parse_sym(f, *n)?;
            emit_scalar(&moyal::supertrace(&f), json_mode);
            Ok(0)
        }

        Cmd::Kappa { n, f, g } => {
            let f = parse_sym(f, *n)?;
            let g = parse_sym(g, *n)?;
            emit_scalar(&moyal::kappa(&f, &g), json_mode);
            Ok(0)
        }

        Cmd::Bform { n, f, g } => {
            let f = parse_sym(f, *n)?;
            let g = parse_sym(g, *n)?;
            emit_scalar(&moyal::b_form(&f, &g), json_mode);
            Ok(0)
        }

        Cmd::Rho { n, f } => {
            let f = parse_sym(f, *n)?;
            let a = weyl::symmetrize(&f);
            if json_mode {
                println!("{}", pretty(&wjson::normal_form_to_json(&a)));
            } else {
                println!("{}", normal_form_text(&a));
            }
            Ok(0)
        }

        Cmd::OspRoots { n } => run_osp_roots(*n),

        Cmd::OspCheck {
            check,
            n,
            family,
            k,
            expr,
            max_degree,
        } => run_osp_check(*check, *n, *family, *k, expr.as_deref(), *max_degree),

        Cmd::CkImage { k, l, m, n } => {
            let report = osp::ck_image_rank(*k, *l, *m, *n);
            emit_report(
                "ck-image-rank",
                json!({"k": k, "l": l, "m": m, "n": n}),
                report.matches,
                json!({"rank": report.rank, "predicted_rank": report.predicted_rank}),
            );
            Ok(0)
        }

        Cmd::Cg { l, m } => {
            let report = osp::clebsch_gordan_n1(*l, *m);
            emit_report(
                "clebsch-gordan-rank",
                json!({"l": l, "m": m, "n": 1}),
                report.matches,
                json!({"rank": report.rank, "predicted_rank": report.predicted_rank}),
            );
            Ok(0)
        }

        Cmd::Reconstruct { op, n, max_order } => {
            let op = match op.resolve(*n)? {
                OpInput::Op(t) => t,
                OpInput::Symbol(_) => {
                    return Err(CliError::Usage(
                        "reconstruct expects an operator, not a normal symbol".into(),
                    ))
                }
            };
            let series = operators::reconstruct_diffop(&op, *max_order)?;
            if json_mode {
                println!("{}", pretty(&wjson::diffop_series_to_json(&series)));
            } else {
                println!("n: {}; truncation: {}", series.n(), series.truncation());
                for (order, c) in series.coeffs() {
                    println!("c_{}: {c}", mi_text(order));
                }
            }
            Ok(0)
        }

        Cmd::Wmap {
            op,
            n,
            max_order,
            apply,
        } => {
            let symbol = match op.resolve(*n)? {
                OpInput::Symbol(s) => s,
                OpInput::Op(t) => operators::to_normal_symbol(&t, *max_order)?,
            };
            if let Some(expr) = apply {
                let p = parse_poly(expr, plain(symbol.n()))?;
                let image = operators::wmap_apply(&symbol, &p)?;
                emit_poly(&image, json_mode);
                return Ok(0);
            }
            if json_mode {
                println!("{}", pretty(&wjson::normal_symbol_to_json(&symbol)));
            } else {
                println!(
                    "n: {}; truncation: {}; complete: {}",
                    symbol.n(),
                    symbol.truncation(),
                    symbol.is_complete()
                );
                for (i, alpha) in symbol.alphas() {
                    println!("alpha_{}: {alpha}", mi_text(i));
                }
            }
            Ok(0)
        }

        Cmd::Strwbar { op, n, policy } => {
            let input = op.resolve(*n)?;
            let result = trace::str_wbar(input.trace_input(), &policy.policy())?;
            Ok(emit_trace(&result, json_mode))
        }

        Cmd::Rstr { op, n, policy } => {
            let input = op.resolve(*n)?;
            let result = trace::rstr(input.trace_input(), &policy.policy())?;
            Ok(emit_trace(&result, json_mode))
        }

        Cmd::Iw {
            op,
            n,
            max_degree,
            closed,
            policy,
        } => {
            if *closed {
                let special = op.special(*n)?;
                let series = trace::iw_closed_form(*n, &special, *max_degree)?;
                return Ok(emit_series(&series, false, json_mode));
            }
            let input = op.resolve(*n)?;
            let series = trace::iw_numeric(input.trace_input(), *max_degree, &policy.policy())?;
            Ok(emit_series(&series, true, json_mode))
        }
    }
}

// ---------------------------------------------------------------------------
// Structure-check reports
// ---------------------------------------------------------------------------

fn run_osp_roots(n: usize) -> CliResult<u8> {
    if n == 0 {
        return Err(CliError::Lib(Error::Domain("need at least one pair".into())));
    }
    let cr = osp::cartan_and_roots(n);
    let mut ok = true;
    let roots: Vec<serde_json::Value> = cr
        .roots
        .iter()
        .map(|r| {
            for (idx, h) in cr.cartan.iter().enumerate() {
                let ad = moyal::bracket(BracketKind::Super, h, &r.vector);
                let expected = r.vector.scale(&Scalar::from_int(r.weight[idx]));
                if ad != expected {
                    ok = false;
                }
            }
            json!({
                "vector": r.vector.to_string(),
                "weight": r.weight,
                "positive": r.positive,
            })
        })
        .collect();
    let witnesses = json!({
        "cartan": cr.cartan.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        "fundamental": cr.fundamental.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "roots": roots,
    });
    emit_report("cartan-and-roots", json!({ "n": n }), ok, witnesses);
    Ok(0)
}

fn run_osp_check(
    check: OspCheckKind,
    n: usize,
    family: Option<FamilyArg>,
    k: Option<u32>,
    expr: Option<&str>,
    max_degree: Option<u32>,
) -> CliResult<u8> {
    if n == 0 {
        return Err(CliError::Lib(Error::Domain("need at least one pair".into())));
    }
    match check {
        OspCheckKind::Basis => {
            let basis = osp::osp_basis(n);
            let expected = 2 * n + n * (2 * n + 1);
            let mut failures = Vec::new();
            for a in &basis {
                for b in &basis {
                    for c in &basis {
                        let pa = a.parity().expect("basis is parity-homogeneous");
                        let pb = b.parity().expect("basis is parity-homogeneous");
                        let lhs = moyal::bracket(BracketKind::Super, a, &moyal::bracket(BracketKind::Super, b, c));
                        let mut rhs = moyal::bracket(
                            BracketKind::Super,
                            &moyal::bracket(BracketKind::Super, a, b),
                            c,
                        );
                        let mut cross = moyal::bracket(BracketKind::Super, b, &moyal::bracket(BracketKind::Super, a, c));
                        if pa * pb == 1 {
                            cross = cross.scale(&Scalar::from_int(-1));
                        }
                        rhs = &rhs + &cross;
                        if lhs != rhs && failures.len() < 5 {
                            failures.push(json!({
                                "a": a.to_string(),
                                "b": b.to_string(),
                                "c": c.to_string(),
                            }));
                        }
                    }
                }
            }
            let ok = basis.len() == expected && failures.is_empty();
            emit_report(
                "basis-and-jacobi",
                json!({ "n": n }),
                ok,
                json!({
                    "dimension": basis.len(),
                    "expected_dimension": expected,
                    "jacobi_failures": failures,
                }),
            );
            Ok(0)
        }

        OspCheckKind::Stability => {
            let family = family.ok_or_else(|| {
                CliError::Usage("--check stability requires --family a|b".into())
            })?;
            let k = k.ok_or_else(|| CliError::Usage("--check stability requires --k".into()))?;
            let (spec, action, family_name) = match family {
                FamilyArg::A => (osp::SubspaceSpec::a_slice(n, k), BracketKind::Super, "a"),
                FamilyArg::B => (
                    osp::SubspaceSpec::b_slice(n, k),
                    BracketKind::TwistedSuper,
                    "b",
                ),
            };
            let acting = osp::SubspaceSpec::osp(n);
            let report = osp::check_stability(&spec, action, &acting);
            let actors = acting.basis();
            let targets = spec.basis();
            let violations: Vec<serde_json::Value> = report
                .violations
                .iter()
                .take(5)
                .map(|(a, t, br)| {
                    json!({
                        "actor": actors[*a].to_string(),
                        "target": targets[*t].to_string(),
                        "bracket": br.to_string(),
                    })
                })
                .collect();
            emit_report(
                "slice-stability",
                json!({"n": n, "family": family_name, "k": k}),
                report.stable,
                json!({
                    "stable": report.stable,
                    "violations": violations,
                    "violation_count": report.violations.len(),
                }),
            );
            Ok(0)
        }

        OspCheckKind::HighestWeight => {
            let expr = expr
                .ok_or_else(|| CliError::Usage("--check highest-weight requires --expr".into()))?;
            let v = parse_sym(expr, n)?;
            if v.is_zero() || v.parity().is_none() {
                return Err(CliError::Lib(Error::Domain(
                    "highest-weight probe needs a nonzero parity-homogeneous vector".into(),
                )));
            }
            let report = osp::highest_weight_check(&v, n);
            let ok = report.eigen && report.annihilated;
            emit_report(
                "highest-weight",
                json!({"n": n, "vector": expr}),
                ok,
                json!({
                    "weights": report.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    "eigenvector": report.eigen,
                    "annihilated": report.annihilated,
                }),
            );
            Ok(0)
        }

        OspCheckKind::Theta => {
            let one = Poly::one(sympl(n));
            let mut ok = true;
            let mut entries = Vec::new();
            let theta_11 = moyal::b_form(&one, &one);
            if theta_11 != Scalar::from_int(-1) {
                ok = false;
            }
            entries.push(json!({"f": "1", "g": "1", "theta": theta_11.to_string(), "half_poisson": "n/a"}));
            let mut linear = Vec::new();
            for i in 0..n {
                linear.push(Poly::p(n, i));
            }
            for i in 0..n {
                linear.push(Poly::q(n, i));
            }
            let half = Scalar::from_ratio(1, 2);
            for f in &linear {
                for g in &linear {
                    let theta = moyal::b_form(f, g);
                    let poisson = &poisson_bracket(f, g).eval_zero() * &half;
                    if theta != poisson {
                        ok = false;
                    }
                    entries.push(json!({
                        "f": f.to_string(),
                        "g": g.to_string(),
                        "theta": theta.to_string(),
                        "half_poisson": poisson.to_string(),
                    }));
                }
            }
            emit_report(
                "theta-form",
                json!({ "n": n }),
                ok,
                json!({ "entries": entries }),
            );
            Ok(0)
        }

        OspCheckKind::Musson => {
            let max_degree = max_degree.unwrap_or(6);
            let report = osp::musson_decomposition_check(max_degree, n);
            let spanned: Vec<serde_json::Value> = report
                .spanned
                .iter()
                .map(|(k, full)| json!({"degree": k, "spanned": full}))
                .collect();
            emit_report(
                "bracket-spanning",
                json!({"n": n, "max_degree": max_degree}),
                report.ok,
                json!({
                    "spanned": spanned,
                    "traces_vanish": report.traces_vanish,
                }),
            );
            Ok(0)
        }
    }
}
