//! Command-line flags and the validated run configuration built from them.

use std::fmt;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmoments_core::{format_rational, parse_rational, Rational, TruncationPolicy};
use serde::Serialize;

/// Exact moments of discrete q-Hermite and q-Laguerre ensembles, with
/// verification suites and q → 1 sweeps.
#[derive(Debug, Parser)]
#[command(name = "qmoments", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate moments over a grid of k, N, α and q.
    Moments(MomentsArgs),
    /// Run one verification suite; exits 1 on the first failing row.
    Verify(VerifyArgs),
    /// Follow a moment along a sequence of q increasing to 1.
    Limit(LimitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    QHermite,
    QLaguerre,
    ClassicalGue,
    ClassicalLue,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::QHermite => "q-hermite",
            Family::QLaguerre => "q-laguerre",
            Family::ClassicalGue => "classical-gue",
            Family::ClassicalLue => "classical-lue",
        }
    }

    fn methods(self) -> &'static [&'static str] {
        match self {
            Family::QHermite => &["residue", "hyper", "randomized", "qhahn"],
            Family::QLaguerre => &["hyper", "hooksum", "schur", "bigqjacobi", "randomized-hyper"],
            Family::ClassicalGue => &["formula"],
            Family::ClassicalLue => &["formula", "schur"],
        }
    }

    fn is_q(self) -> bool {
        matches!(self, Family::QHermite | Family::QLaguerre)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    QhCross,
    QhGenfunc,
    QhRecurrence,
    QhSaalschutz,
    QlCross,
    QlRecurrence,
    QlRandomized,
    ClassicalAll,
    OracleQh,
    OracleQl,
    Transforms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Moments,
    Verify,
    Limit,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; grid points are computed in parallel and re-sorted.
    #[arg(long)]
    pub parallel: Option<usize>,
    /// Tolerance for certified (truncated) values, e.g. "1/10^30".
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Comma-separated list of q values, each "num/den".
    #[arg(long, default_value = "1/2")]
    pub q: String,
    /// Moment orders, "a..b" inclusive or a single value.
    #[arg(long, default_value = "1..3")]
    pub k: String,
    #[arg(long, default_value = "1..3")]
    pub n: String,
    #[arg(long, default_value = "0")]
    pub alpha: String,
    /// Comma-separated methods; the first is the reference for cross-checks.
    #[arg(long)]
    pub methods: Option<String>,
    /// Randomisation points z for the q-Laguerre randomised methods.
    #[arg(long)]
    pub z: Option<String>,
    /// Randomisation points λ for the q-Hermite randomised method.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Support sizes K for the q-Hahn form of the randomised q-Hermite moment.
    #[arg(long = "K")]
    pub big_k: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value = "1/3,1/2,3/5")]
    pub q: String,
    #[arg(long, default_value = "1..3")]
    pub k: String,
    #[arg(long, default_value = "1..3")]
    pub n: String,
    #[arg(long, default_value = "0..2")]
    pub alpha: String,
    /// q-Hahn support sizes for qh-recurrence.
    #[arg(long = "K", default_value = "5")]
    pub big_k: String,
    /// Randomisation points for ql-recurrence / ql-randomized; defaults to
    /// q^{2k}/2 and q^{2k}/4 for each k.
    #[arg(long)]
    pub z: Option<String>,
    /// Upper limits for classical-all.
    #[arg(long, default_value_t = 5)]
    pub kmax: u64,
    #[arg(long, default_value_t = 5)]
    pub nmax: u64,
    #[arg(long, default_value_t = 3)]
    pub alphamax: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub alpha: u64,
    /// Strictly increasing q values below 1.
    #[arg(long)]
    pub q: String,
    /// Bound on the final relative error |M_q − M_1| / |M_1|.
    #[arg(long, default_value = "1/20")]
    pub threshold: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// A configuration problem detected before any computation; maps to exit 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// A serialisable inclusive integer range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: u64,
    pub end: u64,
}

impl Span {
    pub fn iter(&self) -> RangeInclusive<u64> {
        self.start..=self.end
    }
}

pub fn parse_span(flag: &str, s: &str) -> Result<Span, UsageError> {
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| UsageError(format!("--{flag}: `{s}` is not a non-negative integer or range a..b")))
    };
    let (start, end) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if start > end {
        return usage(format!("--{flag}: empty range {s}"));
    }
    Ok(Span { start, end })
}

pub fn parse_rationals(flag: &str, s: &str) -> Result<Vec<Rational>, UsageError> {
    let out: Result<Vec<Rational>, UsageError> = s
        .split(',')
        .map(|t| parse_rational(t).map_err(|e| UsageError(format!("--{flag}: {e}"))))
        .collect();
    let out = out?;
    if out.is_empty() {
        return usage(format!("--{flag}: no values"));
    }
    Ok(out)
}

fn check_unit_interval(flag: &str, values: &[Rational], allow_zero: bool) -> Result<(), UsageError> {
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    for v in values {
        let low_ok = if allow_zero { *v >= zero } else { *v > zero };
        if !low_ok || *v >= one {
            let lo = if allow_zero { "0 <=" } else { "0 <" };
            return usage(format!("--{flag}: {} is outside {lo} x < 1", format_rational(v)));
        }
    }
    Ok(())
}

fn rational_strings<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

fn opt_rational_strings<S: serde::Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => rational_strings(v, s),
        None => s.serialize_none(),
    }
}

fn rational_string<S: serde::Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

/// Everything a run needs, validated. Serialised verbatim into JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    pub methods: Vec<String>,
    pub k: Span,
    pub n: Span,
    pub alpha: Span,
    #[serde(serialize_with = "rational_strings")]
    pub q: Vec<Rational>,
    #[serde(serialize_with = "opt_rational_strings")]
    pub z: Option<Vec<Rational>>,
    #[serde(serialize_with = "opt_rational_strings")]
    pub lambda: Option<Vec<Rational>>,
    pub big_k: Option<Span>,
    pub kmax: u64,
    pub nmax: u64,
    pub alphamax: u64,
    #[serde(serialize_with = "rational_string")]
    pub threshold: Rational,
    pub format: Format,
    #[serde(serialize_with = "rational_string")]
    pub tolerance: Rational,
    pub max_terms: u64,
    pub parallel: Option<usize>,
}

impl RunConfig {
    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy::new(self.tolerance.clone(), self.max_terms).expect("validated policy")
    }

    fn base(command: CommandKind, common: &CommonArgs) -> Result<Self, UsageError> {
        let default = TruncationPolicy::default();
        let tolerance = match &common.tol {
            Some(t) => {
                let v = parse_rational(t).map_err(|e| UsageError(format!("--tol: {e}")))?;
                if v <= Rational::from_integer(0.into()) {
                    return usage("--tol must be positive");
                }
                v
            }
            None => default.tolerance.clone(),
        };
        let max_terms = match std::env::var("QMOMENTS_MAX_TERMS") {
            Ok(s) => match s.trim().parse::<u64>() {
                Ok(v) if v > 0 => v,
                _ => return usage(format!("QMOMENTS_MAX_TERMS must be a positive integer, got `{s}`")),
            },
            Err(_) => default.max_index,
        };
        if common.parallel == Some(0) {
            return usage("--parallel must be at least 1");
        }
        Ok(RunConfig {
            command,
            family: None,
            suite: None,
            methods: Vec::new(),
            k: Span { start: 1, end: 1 },
            n: Span { start: 1, end: 1 },
            alpha: Span { start: 0, end: 0 },
            q: Vec::new(),
            z: None,
            lambda: None,
            big_k: None,
            kmax: 0,
            nmax: 0,
            alphamax: 0,
            threshold: Rational::from_integer(0.into()),
            format: common.format,
            tolerance,
            max_terms,
            parallel: common.parallel,
        })
    }

    pub fn from_moments(a: &MomentsArgs) -> Result<Self, UsageError> {
        let mut c = Self::base(CommandKind::Moments, &a.common)?;
        c.family = Some(a.family);
        c.q = parse_rationals("q", &a.q)?;
        c.k = parse_span("k", &a.k)?;
        c.n = parse_span("n", &a.n)?;
        c.alpha = parse_span("alpha", &a.alpha)?;
        if a.family.is_q() {
            check_unit_interval("q", &c.q, false)?;
        }
        if a.family != Family::ClassicalGue && c.k.start == 0 {
            return usage(format!("--k: {} moments start at k = 1", a.family.name()));
        }
        if c.n.start == 0 {
            return usage("--n: N starts at 1");
        }
        let allowed = a.family.methods();
        c.methods = match &a.methods {
            Some(m) => m.split(',').map(|s| s.trim().to_string()).collect(),
            None => vec![allowed[0].to_string()],
        };
        for m in &c.methods {
            if !allowed.contains(&m.as_str()) {
                return usage(format!(
                    "--methods: `{m}` is not available for {}; choose from {}",
                    a.family.name(),
                    allowed.join(",")
                ));
            }
        }
        if let Some(z) = &a.z {
            let z = parse_rationals("z", z)?;
            check_unit_interval("z", &z, true)?;
            c.z = Some(z);
        }
        if let Some(l) = &a.lambda {
            let l = parse_rationals("lambda", l)?;
            check_unit_interval("lambda", &l, true)?;
            c.lambda = Some(l);
        }
        if let Some(kk) = &a.big_k {
            c.big_k = Some(parse_span("K", kk)?);
        }
        let needs = |m: &str| c.methods.iter().any(|x| x == m);
        if (needs("bigqjacobi") || needs("randomized-hyper")) && c.z.is_none() {
            return usage("the randomised q-Laguerre methods need --z");
        }
        if needs("randomized") && c.lambda.is_none() {
            return usage("the randomised q-Hermite method needs --lambda");
        }
        if needs("qhahn") && c.big_k.is_none() {
            return usage("the q-Hahn method needs --K");
        }
        Ok(c)
    }

    pub fn from_verify(a: &VerifyArgs) -> Result<Self, UsageError> {
        let mut c = Self::base(CommandKind::Verify, &a.common)?;
        c.suite = Some(a.suite);
        c.q = parse_rationals("q", &a.q)?;
        check_unit_interval("q", &c.q, false)?;
        c.k = parse_span("k", &a.k)?;
        c.n = parse_span("n", &a.n)?;
        c.alpha = parse_span("alpha", &a.alpha)?;
        c.big_k = Some(parse_span("K", &a.big_k)?);
        c.kmax = a.kmax;
        c.nmax = a.nmax;
        c.alphamax = a.alphamax;
        if let Some(z) = &a.z {
            let z = parse_rationals("z", z)?;
            check_unit_interval("z", &z, true)?;
            c.z = Some(z);
        }
        if c.k.start == 0 && a.suite != Suite::ClassicalAll {
            return usage("--k: moments start at k = 1");
        }
        if c.n.start == 0 {
            return usage("--n: N starts at 1");
        }
        if a.suite == Suite::ClassicalAll && (a.kmax == 0 || a.nmax == 0) {
            return usage("--kmax and --nmax must be at least 1");
        }
        Ok(c)
    }

    pub fn from_limit(a: &LimitArgs) -> Result<Self, UsageError> {
        let mut c = Self::base(CommandKind::Limit, &a.common)?;
        if !a.family.is_q() {
            return usage("limit takes --family q-hermite or q-laguerre");
        }
        c.family = Some(a.family);
        c.k = Span { start: a.k, end: a.k };
        c.n = Span { start: a.n, end: a.n };
        c.alpha = Span { start: a.alpha, end: a.alpha };
        c.q = parse_rationals("q", &a.q)?;
        check_unit_interval("q", &c.q, false)?;
        if c.q.windows(2).any(|w| w[1] <= w[0]) {
            return usage("--q must be strictly increasing");
        }
        if a.k == 0 || a.n == 0 {
            return usage("limit needs k >= 1 and N >= 1");
        }
        c.threshold = parse_rational(&a.threshold).map_err(|e| UsageError(format!("--threshold: {e}")))?;
        if c.threshold <= Rational::from_integer(0.into()) {
            return usage("--threshold must be positive");
        }
        Ok(c)
    }
}
