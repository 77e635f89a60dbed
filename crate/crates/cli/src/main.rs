mod cache;
mod domain;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gtm_core::contfrac::{cf_expand, CfField};
use gtm_core::hankel::{deficiency, grid_compute, Strategy};
use gtm_core::series::{expand_product, MahlerSpec, Transform};
use gtm_core::suites::{run_suite, SuiteParams, SUITES};
use gtm_core::tlc::{
    bad_evidence, certify_numeric, certify_symbolic, elc_threshold, finite_field_exhaustive, finite_field_search, Verdict,
};
use gtm_core::{Error, Fp, Polynomial, Q, Qu, Zu};
use serde_json::{json, Value};

use cache::{Cache, CacheKey, Lookup};
use domain::{parse_poly, parse_rational, Dom, Domain};

/// Generalised Thue-Morse Laurent series: expansions, continued fractions,
/// Hankel grids and t-adic Littlewood certificates, all in exact arithmetic.
///
/// Exit codes: 0 success, 1 counterexample or failed property, 2 usage
/// error, 3 insufficient precision. The cache directory defaults to
/// $GTM_CACHE_DIR, then $XDG_CACHE_HOME/gtm, then ~/.cache/gtm.
#[derive(Parser, Debug)]
#[command(name = "gtm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write output here (plus PATH.manifest.json) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid computations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients a_1..a_N of g_P.
    Series(SeriesArgs),
    /// Certified continued-fraction terms of t^shift g_P.
    Cf(CfArgs),
    /// Hankel determinant grid for n + 2l <= N.
    Hankel(HankelArgs),
    /// Run a verification suite (or `all`).
    Verify(VerifyArgs),
    /// Certification runs.
    #[command(subcommand)]
    Tlc(TlcCommand),
}

#[derive(Args, Debug, Clone)]
struct SpecArgs {
    /// Q, Fp:<p>, Zu or Qu. Defaults to Q when --u is given, else symbolic.
    #[arg(long)]
    domain: Option<Domain>,

    /// Value of u: an integer, a fraction a/b, or a residue. Ignored on
    /// symbolic domains.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,

    /// The polynomial P in t (coefficients may use u).
    #[arg(long = "P", default_value = "t+u")]
    p: String,

    /// The power d in t^{-d^i}.
    #[arg(long, default_value_t = 2)]
    d: u64,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long = "N", default_value_t = 16)]
    n: u64,
}

#[derive(Args, Debug)]
struct CfArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long = "N", default_value_t = 64)]
    n: u64,
    /// Maximum number of terms.
    #[arg(long, default_value_t = 20)]
    terms: usize,
    /// Expand t^shift g_P instead.
    #[arg(long, default_value_t = 0)]
    shift: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Direct,
    Block,
}

#[derive(Args, Debug)]
struct HankelArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long = "N", default_value_t = 24)]
    n: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Direct)]
    strategy: StrategyArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "D")]
    d: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum TlcCommand {
    /// Doubly-monic certificate over Z[u] for n + 2l <= N.
    Symbolic {
        #[arg(long = "N", default_value_t = 24)]
        n: u64,
    },
    /// Grid over Q at a rational u != 0, 1.
    Numeric {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long = "N", default_value_t = 32)]
        n: u64,
    },
    /// Singular Hankel cell of g_u over F_p.
    Finite {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        u: i64,
        /// Also scan n + 2l <= N for the lexicographically least witness.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long = "N", default_value_t = 64)]
        n: u64,
    },
    /// Largest partial-quotient degree among the first K terms of g_u.
    Bad {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long = "K", default_value_t = 200)]
        k: usize,
        /// Q or Fp:<p>.
        #[arg(long, default_value = "Q")]
        domain: Domain,
    },
    /// Deficiency threshold deg P / (d - 1).
    Threshold {
        #[arg(long = "P", default_value = "t+u")]
        p: String,
        #[arg(long, default_value_t = 2)]
        d: u64,
    },
}

/// Computed result: a kind tag for rendering and the data section.
struct Output {
    kind: Kind,
    data: Value,
    status: u8,
    params: Value,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Series,
    Cf,
    Grid,
    Verify,
    Report,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InsufficientPrecision { .. } => 3,
            Error::DivisionByZero => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

struct Ctx {
    cache: Option<Cache>,
}

impl Ctx {
    /// Cached computation of a data section.
    fn cached(&self, key: CacheKey, compute: impl FnOnce() -> Result<Value, Failure>) -> Result<Value, Failure> {
        let start = Instant::now();
        if let Some(cache) = &self.cache {
            match cache.get(&key) {
                Ok(Lookup::Hit(v)) => {
                    log(&format!("{} cache hit in {:.3} ms", key.kind, millis(start)));
                    return Ok(v);
                }
                Ok(Lookup::Evicted) => log(&format!("{} cache entry failed verification; evicted", key.kind)),
                Ok(Lookup::Miss) => {}
                Err(e) => log(&format!("cache read failed: {e}")),
            }
        }
        let v = compute()?;
        log(&format!("{} computed in {:.3} ms", key.kind, millis(start)));
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.put(&key, &v) {
                log(&format!("cache write failed: {e}"));
            }
        }
        Ok(v)
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn log(msg: &str) {
    eprintln!("gtm: {msg}");
}

fn resolve_domain(spec: &SpecArgs, symbolic: Domain) -> Domain {
    spec.domain.unwrap_or(if spec.u.is_some() { Domain::Q } else { symbolic })
}

fn parse_u(s: &Option<String>) -> Result<Option<Q>, Failure> {
    s.as_deref().map(parse_rational).transpose().map_err(usage)
}

fn spec_label(spec: &SpecArgs) -> String {
    format!("P={};d={}", spec.p.replace(' ', ""), spec.d)
}

fn build_spec<T: Dom>(spec: &SpecArgs, domain: &Domain) -> Result<(MahlerSpec<T>, Option<T>, String), Failure> {
    let uq = parse_u(&spec.u)?;
    let u = T::param(domain, uq.as_ref())?;
    let p = parse_poly(&spec.p, domain, u.as_ref())?;
    let mahler = MahlerSpec::new(p, spec.d)?;
    let u_label = if domain.is_symbolic() { "u".to_string() } else { uq.map(|q| q.to_string()).unwrap_or_default() };
    Ok((mahler, u, u_label))
}

fn series_data<T: Dom>(a: &SeriesArgs, domain: Domain) -> Result<(Value, Value), Failure> {
    let (spec, _, u_label) = build_spec::<T>(&a.spec, &domain)?;
    if a.n == 0 {
        return Err(usage("--N must be >= 1"));
    }
    let params = json!({"spec": spec_label(&a.spec), "domain": domain.to_string(), "u": u_label, "N": a.n});
    let g = expand_product(&spec, a.n as usize);
    let data = json!({
        "spec": spec_label(&a.spec),
        "domain": domain.to_string(),
        "u": u_label,
        "N": a.n,
        "coefficientTableHash": g.table_hash(1, a.n as i64)?,
        "coefficients": g.to_json(1),
    });
    Ok((data, params))
}

fn cf_data<F: Dom + CfField>(a: &CfArgs, domain: Domain) -> Result<(Value, Value), Failure> {
    let (spec, _, u_label) = build_spec::<F>(&a.spec, &domain)?;
    if a.n == 0 {
        return Err(usage("--N must be >= 1"));
    }
    let g = expand_product(&spec, a.n as usize).transform(&Transform::Shift(a.shift as i64));
    let cf = cf_expand(&g, a.terms)?;
    let mut data = cf.to_json();
    let obj = data.as_object_mut().unwrap();
    obj.insert("nextQuotientDegree".into(), json!(cf.next_quotient_degree));
    obj.insert("maxQuotientDegree".into(), json!(cf.max_quotient_degree()));
    obj.insert("terminating".into(), json!(cf.terminating));
    obj.insert("coefficientTableHash".into(), json!(g.table_hash(1, g.order())?));
    let params = json!({
        "spec": spec_label(&a.spec), "domain": domain.to_string(), "u": u_label,
        "N": a.n, "terms": a.terms, "shift": a.shift,
    });
    Ok((data, params))
}

fn grid_data<T: Dom>(a: &HankelArgs, domain: Domain) -> Result<(Value, Value), Failure> {
    let (spec, u, u_label) = build_spec::<T>(&a.spec, &domain)?;
    if a.n == 0 {
        return Err(usage("--N must be >= 1"));
    }
    let strategy = match a.strategy {
        StrategyArg::Direct => Strategy::Direct,
        StrategyArg::Block => Strategy::BlockAccelerated,
    };
    // twisted matrices only make sense for the t + u family
    let u = if spec.linear_parameter().is_some() { u } else { None };
    let g = expand_product(&spec, a.n as usize);
    let grid = grid_compute(&g, a.n, strategy, u.as_ref())?;
    let mut data = grid.to_json();
    data.as_object_mut()
        .unwrap()
        .insert("deficiency".into(), serde_json::to_value(deficiency(&grid)).expect("report serializes"));
    let params = json!({"spec": spec_label(&a.spec), "domain": domain.to_string(), "u": u_label, "N": a.n, "strategy": strategy});
    Ok((data, params))
}

macro_rules! by_ring {
    ($domain:expr, $f:ident, $a:expr) => {
        match $domain {
            Domain::Q => $f::<Q>($a, $domain),
            Domain::Fp(_) => $f::<Fp>($a, $domain),
            Domain::Zu => $f::<Zu>($a, $domain),
            Domain::Qu => $f::<Qu>($a, $domain),
        }
    };
}

fn cache_key(kind: &str, params: &Value, extra: String) -> CacheKey {
    let s = |k: &str| params[k].as_str().unwrap_or_default().to_string();
    CacheKey { kind: kind.into(), spec: s("spec"), domain: s("domain"), u: s("u"), n: params["N"].as_u64().unwrap_or(0), extra }
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<Output, Failure> {
    match &cli.command {
        Command::Series(a) => {
            let domain = resolve_domain(&a.spec, Domain::Zu);
            let (_, params) = series_params(a, domain)?;
            let key = cache_key("series", &params, String::new());
            let data = ctx.cached(key, || Ok(by_ring!(domain, series_data, a)?.0))?;
            Ok(Output { kind: Kind::Series, data, status: 0, params })
        }
        Command::Cf(a) => {
            let domain = resolve_domain(&a.spec, Domain::Qu);
            let params = json!({
                "spec": spec_label(&a.spec), "domain": domain.to_string(),
                "u": u_label(&a.spec, domain)?, "N": a.n, "terms": a.terms, "shift": a.shift,
            });
            let key = cache_key("cf", &params, format!("terms={};shift={}", a.terms, a.shift));
            let data = ctx.cached(key, || {
                Ok(match domain {
                    Domain::Q => cf_data::<Q>(a, domain)?.0,
                    Domain::Fp(_) => cf_data::<Fp>(a, domain)?.0,
                    Domain::Qu => cf_data::<Qu>(a, domain)?.0,
                    Domain::Zu => return Err(usage("cf needs a field domain: Q, Fp:<p> or Qu")),
                })
            })?;
            // fewer certified terms than asked for means the input ran out
            let short = data["certifiedCount"].as_u64().unwrap_or(0) < a.terms as u64;
            let status = if short && data["terminating"] != true { 3 } else { 0 };
            if status == 3 {
                log(&format!("only {} of {} terms certified; raise --N", data["certifiedCount"], a.terms));
            }
            Ok(Output { kind: Kind::Cf, data, status, params })
        }
        Command::Hankel(a) => {
            let domain = resolve_domain(&a.spec, Domain::Zu);
            let strategy = match a.strategy {
                StrategyArg::Direct => "direct",
                StrategyArg::Block => "block-accelerated",
            };
            let params = json!({
                "spec": spec_label(&a.spec), "domain": domain.to_string(),
                "u": u_label(&a.spec, domain)?, "N": a.n, "strategy": strategy,
            });
            let key = cache_key("grid", &params, strategy.to_string());
            let data = ctx.cached(key, || Ok(by_ring!(domain, grid_data, a)?.0))?;
            Ok(Output { kind: Kind::Grid, data, status: 0, params })
        }
        Command::Verify(a) => {
            let names: Vec<&str> = if a.suite == "all" { SUITES.to_vec() } else { vec![a.suite.as_str()] };
            let p = SuiteParams { n: a.n, m: a.m, d: a.d };
            let mut results = Vec::new();
            for name in names {
                let start = Instant::now();
                let r = run_suite(name, &p)?;
                log(&format!("suite {name} finished in {} ms", start.elapsed().as_millis()));
                results.push(r);
            }
            let status = if results.iter().all(|r| r.passed) { 0 } else { 1 };
            let params = json!({"suite": a.suite, "N": a.n, "M": a.m, "D": a.d});
            Ok(Output { kind: Kind::Verify, data: json!({ "results": results }), status, params })
        }
        Command::Tlc(t) => run_tlc(t),
    }
}

fn u_label(spec: &SpecArgs, domain: Domain) -> Result<String, Failure> {
    if domain.is_symbolic() {
        return Ok("u".into());
    }
    Ok(parse_u(&spec.u)?.map(|q| q.to_string()).unwrap_or_default())
}

fn series_params(a: &SeriesArgs, domain: Domain) -> Result<((), Value), Failure> {
    Ok(((), json!({"spec": spec_label(&a.spec), "domain": domain.to_string(), "u": u_label(&a.spec, domain)?, "N": a.n})))
}

fn report_status(v: &Verdict) -> u8 {
    match v {
        Verdict::Counterexample { .. } => 1,
        Verdict::AbortedPrecision => 3,
        _ => 0,
    }
}

fn run_tlc(t: &TlcCommand) -> Result<Output, Failure> {
    let to_value = |v: &dyn erased::Ser| v.value();
    match t {
        TlcCommand::Symbolic { n } => {
            let r = certify_symbolic(*n)?;
            let status = report_status(&r.verdict);
            Ok(Output { kind: Kind::Report, data: to_value(&r), status, params: json!({"mode": "symbolic", "N": n}) })
        }
        TlcCommand::Numeric { u, n } => {
            let q = parse_rational(u).map_err(usage)?;
            let r = certify_numeric(&q, *n)?;
            let status = report_status(&r.verdict);
            Ok(Output { kind: Kind::Report, data: to_value(&r), status, params: json!({"mode": "numeric", "u": u, "N": n}) })
        }
        TlcCommand::Finite { p, u, exhaustive, n } => {
            let field = gtm_core::PrimeField::new(*p)?;
            let residue = field.elem(*u).residue() as u64;
            let w = finite_field_search(*p, residue)?;
            let mut data = json!({ "witness": w });
            let mut status = if w.validated { 1 } else { 0 };
            if *exhaustive {
                let least = finite_field_exhaustive(*p, residue, *n)?;
                status = status.max(least.as_ref().map_or(0, |w| w.validated as u8));
                data["leastWitness"] = json!(least);
            }
            Ok(Output { kind: Kind::Report, data, status, params: json!({"p": p, "u": u, "exhaustive": exhaustive, "N": n}) })
        }
        TlcCommand::Bad { u, k, domain } => {
            let q = parse_rational(u).map_err(usage)?;
            let ev = match domain {
                Domain::Q => bad_evidence(&q, *k)?,
                Domain::Fp(_) => bad_evidence(&Fp::lift(domain, &q)?, *k)?,
                _ => return Err(usage("tlc bad takes --domain Q or Fp:<p>")),
            };
            let status = if ev.aborted_at.is_some() || ev.max_quotient_degree != 1 { 1 } else { 0 };
            Ok(Output {
                kind: Kind::Report,
                data: to_value(&ev),
                status,
                params: json!({"u": u, "K": k, "domain": domain.to_string()}),
            })
        }
        TlcCommand::Threshold { p, d } => {
            let poly: Polynomial<Qu> = parse_poly(p, &Domain::Qu, Some(&Qu::u()))?;
            let th = elc_threshold(&poly, *d)?;
            let data = json!({
                "P": p, "d": d, "threshold": th.to_string(),
                "rule": "g_P is in the exception set iff its deficiency is at most the threshold",
            });
            Ok(Output { kind: Kind::Report, data, status: 0, params: json!({"P": p, "d": d}) })
        }
    }
}

/// Object-safe serialization for the report types.
mod erased {
    pub trait Ser {
        fn value(&self) -> serde_json::Value;
    }

    impl<T: serde::Serialize> Ser for T {
        fn value(&self) -> serde_json::Value {
            serde_json::to_value(self).expect("report serializes")
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) if !a.is_empty() => a.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Rows of the main table of a data section, header first.
fn rows(kind: Kind, data: &Value) -> Vec<Vec<String>> {
    let arr = |k: &str| data[k].as_array().cloned().unwrap_or_default();
    let pick = |v: &Value, keys: &[&str]| keys.iter().map(|k| scalar(&v[*k])).collect::<Vec<_>>();
    let table = |header: &[&str], keys: &[&str], items: Vec<Value>| {
        let mut out = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
        out.extend(items.iter().map(|v| pick(v, keys)));
        out
    };
    match kind {
        Kind::Series => table(&["k", "coefficient"], &["k", "coefficient"], arr("coefficients")),
        Kind::Cf => {
            let mut out = vec![vec!["i".to_string(), "beta".into(), "bstar".into(), "alphaLin".into()]];
            for (i, t) in arr("terms").iter().enumerate() {
                let mut r = vec![(i + 1).to_string()];
                r.extend(pick(t, &["beta", "bstar", "alphaLin"]));
                out.push(r);
            }
            out
        }
        Kind::Grid => table(
            &["n", "l", "degree", "singular", "doublyMonic", "detString"],
            &["n", "l", "degree", "singular", "doublyMonic", "det"],
            arr("cells"),
        ),
        Kind::Verify => table(
            &["name", "passed", "checked", "firstFailure"],
            &["name", "passed", "checked", "firstFailure"],
            arr("results"),
        ),
        Kind::Report => {
            let mut flat = Vec::new();
            flatten("", data, &mut flat);
            let mut out = vec![vec!["field".to_string(), "value".to_string()]];
            out.extend(flat.into_iter().map(|(k, v)| vec![k, v]));
            out
        }
    }
}

fn render(kind: Kind, data: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(data).expect("data serializes") + "\n",
        Format::Csv => rows(kind, data)
            .iter()
            .map(|r| r.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",") + "\n")
            .collect(),
        Format::Table => {
            let rows = rows(kind, data);
            let widths: Vec<usize> = (0..rows[0].len())
                .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0).min(60))
                .collect();
            let mut out = String::new();
            for r in &rows {
                let cells: Vec<String> = r.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
                out.push_str(cells.join("  ").trim_end());
                out.push('\n');
            }
            if kind == Kind::Grid {
                let d = &data["deficiency"];
                out.push_str(&format!(
                    "max singular run {}, deficiency >= {} (bound N = {})\n",
                    d["maxSingularRun"], d["deficiencyLowerBound"], d["bound"]
                ));
            }
            out
        }
    }
}

fn manifest(out: &Output, path: &std::path::Path) -> Value {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({
        "commandLine": std::env::args().collect::<Vec<_>>().join(" "),
        "parameters": out.params,
        "version": env!("CARGO_PKG_VERSION"),
        "coefficientTableHash": out.data.get("coefficientTableHash"),
        "timestamp": timestamp,
        "outputs": [path.display().to_string()],
    })
}

fn emit(cli: &Cli, out: &Output) -> Result<(), Failure> {
    let text = render(out.kind, &out.data, cli.format);
    match &cli.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| usage(format!("stdout: {e}")))?;
        }
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let mpath = PathBuf::from(format!("{}.manifest.json", path.display()));
            let body = serde_json::to_string_pretty(&manifest(out, path)).expect("manifest serializes");
            std::fs::write(&mpath, body + "\n").map_err(|e| usage(format!("{}: {e}", mpath.display())))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            log(&format!("thread pool: {e}"));
        }
    }
    let ctx = Ctx { cache: if cli.no_cache { None } else { Cache::default_dir().map(Cache::new) } };
    let result = run(&cli, &ctx).and_then(|out| emit(&cli, &out).map(|_| out.status));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("gtm: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
