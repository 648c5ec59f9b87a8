use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isogeny_forge::elliptic::{curve_from_pair, PointModP, WeierstrassModel};
use isogeny_forge::exactnum::{is_prime, primes_up_to, BigInt, BigRat};
use isogeny_forge::kgroup::ThirdPoint;

pub const CACHE_ENV: &str = "ISOGENY_FORGE_CACHE";

/// A curve given as a pair `a,b` for `y^2 = x(x-a)(x-b)`, or as five
/// Weierstrass coefficients `a1,a2,a3,a4,a6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveSpec {
    Pair(BigInt, BigInt),
    Ainvs([BigRat; 5]),
}

impl CurveSpec {
    pub fn model(&self) -> isogeny_forge::Result<WeierstrassModel> {
        match self {
            CurveSpec::Pair(a, b) => curve_from_pair(a, b).map(|(_, m)| m),
            CurveSpec::Ainvs(c) => WeierstrassModel::new(c.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            CurveSpec::Pair(a, b) => format!("E_{{{a},{b}}}"),
            CurveSpec::Ainvs(c) => {
                format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }
}

impl FromStr for CurveSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.trim_matches(|c| c == '[' || c == ']').split(',').map(str::trim).collect();
        match parts.len() {
            2 => Ok(CurveSpec::Pair(parse_int(parts[0])?, parse_int(parts[1])?)),
            5 => {
                let mut c = Vec::with_capacity(5);
                for p in parts {
                    c.push(BigRat::from_str(p).map_err(|e| format!("bad coefficient {p:?}: {e}"))?);
                }
                Ok(CurveSpec::Ainvs(c.try_into().expect("five coefficients")))
            }
            n => Err(format!("expected `a,b` or five coefficients, got {n} values")),
        }
    }
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    BigInt::from_str(s.trim()).map_err(|e| format!("bad integer {s:?}: {e}"))
}

/// Primes as a bound `50`, an inclusive range `3..50`, or a list `5,7,11`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSpec {
    UpTo(u64),
    Range(u64, u64),
    List(Vec<u64>),
}

impl PrimeSpec {
    pub fn primes(&self) -> Vec<u64> {
        match self {
            PrimeSpec::UpTo(n) => primes_up_to(*n),
            PrimeSpec::Range(lo, hi) => primes_up_to(*hi).into_iter().filter(|p| p >= lo).collect(),
            PrimeSpec::List(v) => v.clone(),
        }
    }
}

impl FromStr for PrimeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad number {t:?}: {e}"));
        if let Some((lo, hi)) = s.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            return Ok(PrimeSpec::Range(lo, hi));
        }
        if s.contains(',') {
            let list = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            if let Some(n) = list.iter().find(|&&n| !is_prime(n)) {
                return Err(format!("{n} is not prime"));
            }
            return Ok(PrimeSpec::List(list));
        }
        Ok(PrimeSpec::UpTo(num(s)?))
    }
}

/// Quadruple `a,b,c,d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params(pub [BigInt; 4]);

impl FromStr for Params {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = s.split(',').map(parse_int).collect::<Result<Vec<_>, _>>()?;
        let arr: [BigInt; 4] = v.try_into().map_err(|v: Vec<BigInt>| format!("expected 4 values, got {}", v.len()))?;
        Ok(Params(arr))
    }
}

/// Pair `a,b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair(pub BigInt, pub BigInt);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got {s:?}"))?;
        Ok(Pair(parse_int(a)?, parse_int(b)?))
    }
}

/// Curves of one product factor with the isogeny degree,
/// e.g. `1,-1;1,2:2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpec {
    pub curves: Vec<CurveSpec>,
    pub degree: u64,
}

impl FromStr for FactorSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (curves, degree) = match s.rsplit_once(':') {
            Some((c, d)) => (c, d.trim().parse::<u64>().map_err(|e| format!("bad degree {d:?}: {e}"))?),
            None => (s, 1),
        };
        let curves = curves.split(';').map(CurveSpec::from_str).collect::<Result<Vec<_>, _>>()?;
        Ok(FactorSpec { curves, degree })
    }
}

/// A point of `E(F_q)`: `x:y`, or `O` for the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointSpec(pub PointModP);

impl FromStr for PointSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("o") || s.eq_ignore_ascii_case("inf") {
            return Ok(PointSpec(PointModP::Infinity));
        }
        let (x, y) = s.split_once(':').ok_or_else(|| format!("expected `x:y` or `O`, got {s:?}"))?;
        let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad coordinate {t:?}: {e}"));
        Ok(PointSpec(PointModP::affine(num(x)?, num(y)?)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    NegatedSum,
    Sum,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "isogeny-forge", version, about = "Exact analyses of elliptic and split-Jacobian genus-2 curves")]
struct Cli {
    #[command(subcommand)]
    command: Top,
    /// Write records to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Conductor cache directory; defaults to $ISOGENY_FORGE_CACHE.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads; defaults to the number of logical CPUs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
struct CurveArgs {
    /// `a` in y^2 = x(x-a)(x-b).
    #[arg(long, allow_hyphen_values = true, requires = "b")]
    a: Option<String>,
    /// `b` in y^2 = x(x-a)(x-b).
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    b: Option<String>,
    /// `a,b` or `a1,a2,a3,a4,a6`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["a", "b"])]
    curve: Option<CurveSpec>,
}

impl CurveArgs {
    fn spec(self) -> Result<CurveSpec, String> {
        match (self.a, self.b, self.curve) {
            (_, _, Some(c)) => Ok(c),
            (Some(a), Some(b), None) => Ok(CurveSpec::Pair(parse_int(&a)?, parse_int(&b)?)),
            _ => Err("a curve is required: --a A --b B or --curve SPEC".into()),
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Parameters `a,b,c,d`.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<Params>,
    /// CSV file with header `a,b,c,d`.
    #[arg(long)]
    grid: Option<PathBuf>,
}

impl SourceArgs {
    fn source(self) -> ParamSource {
        match (self.params, self.grid) {
            (Some(p), _) => ParamSource::Inline(p.0),
            (None, Some(path)) => ParamSource::Csv(path),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Top {
    /// Reduction type at each prime and the conductor.
    AnalyzeCurve {
        #[command(flatten)]
        curve: CurveArgs,
        /// Primes: a bound `50`, a range `3..50` or a list `5,7,11`.
        #[arg(long, default_value = "3..50")]
        primes: PrimeSpec,
    },
    /// Genus-2 curves with split Jacobian.
    #[command(subcommand)]
    Scholten(ScholtenCmd),
    /// Hypothesis checkers.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Prime scans.
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Symbol relations.
    #[command(subcommand)]
    Kgroup(KgroupCmd),
    /// Quotients of the augmentation filtration of Z[G].
    Filtration {
        /// Invariant factors of G, e.g. `2,4`.
        #[arg(long, value_delimiter = ',', conflicts_with = "curve")]
        group: Option<Vec<u64>>,
        /// Take G = E(F_q) for this curve.
        #[arg(long, allow_hyphen_values = true, requires = "q")]
        curve: Option<CurveSpec>,
        /// Field size for `--curve`.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ScholtenCmd {
    /// Build C_{a,b,c,d} and report its status.
    Build {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Curves over the torsion-form orbit of (a,b), grouped by Igusa class.
    Family {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Point-count certificate for Jac(C) ~ E1 x E2.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        /// Primes to test, in the same forms as for analyze-curve.
        #[arg(long, default_value = "50")]
        primes: PrimeSpec,
        /// Replace E1 by E_{a,b}.
        #[arg(long, allow_hyphen_values = true)]
        e1: Option<Pair>,
        /// Replace E2 by E_{c,d}.
        #[arg(long, allow_hyphen_values = true)]
        e2: Option<Pair>,
    },
    /// Grid search, one record per Igusa class.
    Search {
        /// Search |a|,|b|,|c|,|d| <= K.
        #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
        range: Option<i64>,
        /// CSV file with header `a,b,c,d`.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Keep curves meeting the main1 hypotheses at this prime.
        #[arg(long)]
        main1: Option<u64>,
        /// Keep curves whose split certificate passes on these primes.
        #[arg(long)]
        split_primes: Option<PrimeSpec>,
    },
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    Main1 {
        /// Elliptic factor, repeatable.
        #[arg(long = "curve", required = true, allow_hyphen_values = true)]
        curves: Vec<CurveSpec>,
        /// Prime to check at.
        #[arg(long)]
        p: u64,
    },
    Main2 {
        /// Factor `curve;curve:degree`, repeatable.
        #[arg(long = "factor", required = true, allow_hyphen_values = true)]
        factors: Vec<FactorSpec>,
        /// Prime to check at.
        #[arg(long)]
        p: u64,
        /// The isogeny is unramified at p.
        #[arg(long)]
        unramified: bool,
        /// Also conclude divisibility when every curve has good reduction.
        #[arg(long)]
        all_good: bool,
    },
    Global2 {
        #[command(flatten)]
        curve: CurveArgs,
        /// Degree of the isogeny.
        #[arg(long)]
        deg: u64,
        /// Check at this single prime.
        #[arg(long, conflicts_with = "bound", required_unless_present = "bound")]
        p: Option<u64>,
        /// List every admissible prime up to this bound.
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum ScanCmd {
    Supersingular {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 200)]
        bound: u64,
    },
}

#[derive(Debug, Subcommand)]
enum KgroupCmd {
    ProveSkew {
        #[command(flatten)]
        curve: CurveArgs,
        /// Odd prime field size.
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Fixed tail point `x:y` or `O`, repeatable, r - 2 of them.
        #[arg(long)]
        tail: Vec<PointSpec>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
        convention: ConventionArg,
        /// Emit one record per proved target.
        #[arg(long)]
        certificates: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamSource {
    Inline([BigInt; 4]),
    Csv(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchGrid {
    Symmetric(i64),
    Csv(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Global2Target {
    Prime(u64),
    Bound(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Moduli(Vec<u64>),
    Curve(CurveSpec, u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    AnalyzeCurve { curve: CurveSpec, primes: PrimeSpec },
    ScholtenBuild { source: ParamSource },
    ScholtenFamily { source: ParamSource },
    ScholtenVerify { source: ParamSource, primes: PrimeSpec, e1: Option<Pair>, e2: Option<Pair> },
    ScholtenSearch { grid: SearchGrid, main1: Option<u64>, split_primes: Option<PrimeSpec> },
    CheckMain1 { curves: Vec<CurveSpec>, p: u64 },
    CheckMain2 { factors: Vec<FactorSpec>, p: u64, unramified: bool, all_good: bool },
    CheckGlobal2 { curve: CurveSpec, deg: u64, target: Global2Target },
    ScanSupersingular { curve: CurveSpec, bound: u64 },
    ProveSkew { curve: CurveSpec, q: u64, r: usize, tail: Vec<PointModP>, conventions: Vec<ThirdPoint>, certificates: bool },
    Filtration { group: GroupSpec, r_max: usize },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::AnalyzeCurve { .. } => "analyze-curve",
            Command::ScholtenBuild { .. } => "scholten build",
            Command::ScholtenFamily { .. } => "scholten family",
            Command::ScholtenVerify { .. } => "scholten verify",
            Command::ScholtenSearch { .. } => "scholten search",
            Command::CheckMain1 { .. } => "check main1",
            Command::CheckMain2 { .. } => "check main2",
            Command::CheckGlobal2 { .. } => "check global2",
            Command::ScanSupersingular { .. } => "scan supersingular",
            Command::ProveSkew { .. } => "kgroup prove-skew",
            Command::Filtration { .. } => "filtration",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunPlan {
    pub command: Command,
    pub sink: Sink,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// Rejected arguments. `--help` and `--version` also land here with exit
/// code 0.
#[derive(Debug)]
pub struct UsageError(clap::Error);

impl UsageError {
    fn invalid(msg: impl std::fmt::Display) -> Self {
        UsageError(Cli::command_for_errors().error(clap::error::ErrorKind::ValueValidation, msg))
    }

    pub fn exit_code(&self) -> i32 {
        self.0.exit_code()
    }

    pub fn print(&self) {
        let _ = self.0.print();
    }

    pub fn message(&self) -> String {
        self.0.to_string()
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl Cli {
    fn command_for_errors() -> clap::Command {
        <Cli as clap::CommandFactory>::command()
    }
}

/// Parses and validates `argv`, whose first element is the program name.
/// The cache directory falls back to `$ISOGENY_FORGE_CACHE`.
pub fn plan_from_args<I, T>(argv: I) -> Result<RunPlan, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(UsageError)?;
    let curve = |c: CurveArgs| c.spec().map_err(UsageError::invalid);
    let command = match cli.command {
        Top::AnalyzeCurve { curve: c, primes } => Command::AnalyzeCurve { curve: curve(c)?, primes },
        Top::Scholten(ScholtenCmd::Build { source }) => Command::ScholtenBuild { source: source.source() },
        Top::Scholten(ScholtenCmd::Family { source }) => Command::ScholtenFamily { source: source.source() },
        Top::Scholten(ScholtenCmd::Verify { source, primes, e1, e2 }) => {
            Command::ScholtenVerify { source: source.source(), primes, e1, e2 }
        }
        Top::Scholten(ScholtenCmd::Search { range, grid, main1, split_primes }) => {
            let grid = match (range, grid) {
                (Some(k), _) if k < 0 => return Err(UsageError::invalid("--range must be nonnegative")),
                (Some(k), _) => SearchGrid::Symmetric(k),
                (None, Some(path)) => SearchGrid::Csv(path),
                (None, None) => unreachable!("clap enforces one of --range, --grid"),
            };
            Command::ScholtenSearch { grid, main1, split_primes }
        }
        Top::Check(CheckCmd::Main1 { curves, p }) => Command::CheckMain1 { curves, p },
        Top::Check(CheckCmd::Main2 { factors, p, unramified, all_good }) => {
            Command::CheckMain2 { factors, p, unramified, all_good }
        }
        Top::Check(CheckCmd::Global2 { curve: c, deg, p, bound }) => {
            let target = match (p, bound) {
                (Some(p), _) => Global2Target::Prime(p),
                (None, Some(b)) => Global2Target::Bound(b),
                (None, None) => unreachable!("clap enforces one of --p, --bound"),
            };
            Command::CheckGlobal2 { curve: curve(c)?, deg, target }
        }
        Top::Scan(ScanCmd::Supersingular { curve: c, bound }) => Command::ScanSupersingular { curve: curve(c)?, bound },
        Top::Kgroup(KgroupCmd::ProveSkew { curve: c, q, r, tail, convention, certificates }) => {
            if !is_prime(q) || q == 2 {
                return Err(UsageError::invalid(format!("--q must be an odd prime, got {q}")));
            }
            if r < 2 || tail.len() != r - 2 {
                return Err(UsageError::invalid(format!(
                    "r = {r} needs r >= 2 and exactly r - 2 --tail points, got {}",
                    tail.len()
                )));
            }
            let conventions = match convention {
                ConventionArg::NegatedSum => vec![ThirdPoint::NegatedSum],
                ConventionArg::Sum => vec![ThirdPoint::Sum],
                ConventionArg::Both => vec![ThirdPoint::NegatedSum, ThirdPoint::Sum],
            };
            let tail = tail.into_iter().map(|t| t.0).collect();
            Command::ProveSkew { curve: curve(c)?, q, r, tail, conventions, certificates }
        }
        Top::Filtration { group, curve: c, q, r_max } => {
            let group = match (group, c, q) {
                (Some(g), None, _) => GroupSpec::Moduli(g),
                (None, Some(c), Some(q)) => GroupSpec::Curve(c, q),
                _ => return Err(UsageError::invalid("give either --group or --curve with --q")),
            };
            Command::Filtration { group, r_max }
        }
    };
    if cli.jobs == Some(0) {
        return Err(UsageError::invalid("--jobs must be positive"));
    }
    let cache_dir = cli.cache_dir.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let sink = cli.out.map_or(Sink::Stdout, Sink::File);
    Ok(RunPlan { command, sink, cache_dir, jobs: cli.jobs })
}
