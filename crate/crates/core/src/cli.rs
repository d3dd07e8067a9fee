//! The `tacx` command line. Every command prints a JSON report (and writes it
//! to `--out` when given). Exit status: 0 when every check in the report
//! holds, 1 when a mathematical check fails, 2 on input or usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::algebra::{LiftPair, ShortAlgebra};
use crate::complex::{normalize, Normalized, PeriodicComplex, DEFAULT_WINDOW};
use crate::connected_sum::{
    align, assemble, build_connected_sum, gorenstein_crosscheck, assembly_crosscheck, ConnectedSum,
};
use crate::doubling::{build_doubled, search_alpha, verify_doubling, SocleDecomposition, DoublingVerdict};
use crate::error::{Error, Result};
use crate::ezd::{candidate_count, ezd_diagnostics, proxy_algebra, search_ezd_exhaustive, search_ezd_random};
use crate::field::PrimeField;
use crate::graph::{build_from_graph, no_ezd_spotcheck};
use crate::io::complex::{complex_to_text, parse_linear_form, ComplexFile};
use crate::io::graph::parse_graph_file;
use crate::io::report::{write_report, Report};
use crate::io::ring::{parse_ring_file, Presentation};

#[derive(Debug, Parser)]
#[command(name = "tacx", version, about = "Totally acyclic complexes over short graded algebras")]
struct Cli {
    /// Working prime; overrides the field named in ring files.
    #[arg(long, global = true, env = "TACX_PRIME")]
    prime: Option<u32>,
    /// Write the JSON report here as well as to stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect a ring presentation.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Exact zero divisors.
    #[command(subcommand)]
    Ezd(EzdCmd),
    /// Connected sums of two rings with distinguished quadrics.
    #[command(subcommand)]
    Csum(CsumCmd),
    /// Periodic complexes of linear matrices.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// The doubling construction for the lifting condition.
    #[command(subcommand)]
    Double(DoubleCmd),
    /// Rings from bipartite graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
}

#[derive(Debug, Subcommand)]
enum RingCmd {
    /// Dimensions, socle, Gorenstein property, Yoshino conditions, truncation.
    Info { ring: PathBuf },
}

#[derive(Debug, Subcommand)]
enum EzdCmd {
    /// Look for a pair of exact zero divisors.
    Search {
        ring: PathBuf,
        /// Enumerate every projective candidate instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Search over this prime instead of the working one.
        #[arg(long)]
        proxy_prime: Option<u32>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Allow exhaustive searches above the candidate budget.
        #[arg(long)]
        force_budget: bool,
    },
    /// Check whether `a`, `b` are exact zero divisors.
    Verify {
        ring: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

#[derive(Debug, Subcommand)]
enum CsumCmd {
    /// Build the connected sum of two rings.
    Build {
        left: PathBuf,
        right: PathBuf,
        /// Write the presentation of the sum here.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Compare exactness over the sum with exactness over the factors.
    Check { left: PathBuf, right: PathBuf },
}

#[derive(Debug, Args)]
struct SignFlags {
    /// Alternate the signs of the second factor's maps (default).
    #[arg(long, overrides_with = "no_auto_sign")]
    auto_sign: bool,
    #[arg(long)]
    no_auto_sign: bool,
}

#[derive(Debug, Subcommand)]
enum ComplexCmd {
    /// Complex property, exactness and exactness of the dual.
    Verify { complex: PathBuf },
    /// Change bases so every lifted composite is `f I`.
    Normalize {
        complex: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Assemble complexes over two factors into one over their connected sum.
    Assemble {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        signs: SignFlags,
        /// Write the assembled complex here, and the ring of the sum next
        /// to it.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct DoubleArgs {
    complex: PathBuf,
    /// A pair `(y, z)` of linear forms; repeat for `f = y_1 z_1 + ...`.
    /// Defaults to one pair per term of the distinguished quadric.
    #[arg(long = "dec")]
    dec: Vec<String>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum DoubleCmd {
    /// Build the doubled complex for a given `alpha`.
    Build {
        #[command(flatten)]
        args: DoubleArgs,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
    },
    /// Try `alpha = 1, 2, ..` until every claim holds.
    Search {
        #[command(flatten)]
        args: DoubleArgs,
    },
}

#[derive(Debug, Subcommand)]
enum GraphCmd {
    /// Build the ring of a bipartite graph.
    Import {
        graph: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Also run an exhaustive search for exact zero divisors over this
        /// prime.
        #[arg(long)]
        proxy_prime: Option<u32>,
    },
}

/// Errors caused by the inputs rather than by a failed verification.
fn is_input_error(e: &Error) -> bool {
    !matches!(
        e,
        Error::NotAComplex(_)
            | Error::TruncationUnfaithful(_)
            | Error::DeltaZero
            | Error::NotScalarSpan { .. }
            | Error::NotInvertible { .. }
            | Error::CompositeMismatch { .. }
            | Error::NormalFormUnsupported(_)
            | Error::ClaimViolation { .. }
            | Error::InvariantViolation(_)
    )
}

struct Session {
    prime: Option<PrimeField>,
    report: Report,
}

impl Session {
    fn field(&self) -> PrimeField {
        self.prime.unwrap_or_default()
    }

    fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.report.add_input(path.display().to_string(), text.as_bytes());
        Ok(text)
    }

    fn ring(&mut self, path: &Path) -> Result<Presentation> {
        let text = self.read(path)?;
        let p = parse_ring_file(&text, self.field())?;
        let p = match self.prime {
            Some(k) if k != p.field() => p.with_field(k)?,
            _ => p,
        };
        self.report.set_prime(p.field().p());
        Ok(p)
    }

    /// The complex, its ring, and the path of the ring file.
    fn complex(&mut self, path: &Path) -> Result<(Presentation, PeriodicComplex, PathBuf)> {
        let text = self.read(path)?;
        let file = ComplexFile::parse(&text)?;
        let ring_path = file.ring_path(path);
        let p = self.ring(&ring_path)?;
        let c = file.resolve(&p)?;
        Ok((p, c, ring_path))
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// How an output `.cx` refers to a ring file: by absolute path.
fn ring_reference(ring_path: &Path) -> String {
    std::fs::canonicalize(ring_path)
        .unwrap_or_else(|_| ring_path.to_path_buf())
        .display()
        .to_string()
}

fn format_degree_two(alg: &ShortAlgebra, v: &[u32]) -> String {
    let k = alg.field();
    let names = alg.variables();
    let mut s = String::new();
    for (&c, &(i, j)) in v.iter().zip(alg.basis_monomials()) {
        if c == 0 {
            continue;
        }
        let c = k.to_signed(c);
        let mono = if i == j {
            format!("{}^2", names[i])
        } else {
            format!("{}*{}", names[i], names[j])
        };
        let mag = c.unsigned_abs();
        let body = if mag == 1 { mono } else { format!("{mag}*{mono}") };
        match (s.is_empty(), c < 0) {
            (true, false) => s.push_str(&body),
            (true, true) => s.push_str(&format!("-{body}")),
            (false, neg) => s.push_str(&format!(" {} {body}", if neg { '-' } else { '+' })),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn ring_info(s: &mut Session, ring: &Path) -> Result<()> {
    let p = s.ring(ring)?;
    let alg = ShortAlgebra::build(&p);
    let y = alg.yoshino_check();
    let truncation = ShortAlgebra::verify_truncation(&p);
    let r = &mut s.report;
    r.result("variables", p.variables());
    r.result("dim1", y.dim1);
    r.result("dim2", y.dim2);
    r.result("socle_dimension", alg.socle_dimension());
    r.result("gorenstein", alg.is_gorenstein());
    r.result("quadric_defined", y.quadric_defined);
    r.result("yoshino_b", y.dim_condition);
    r.result("koszul", y.koszul);
    r.result("truncation_faithful", truncation);
    if let Some(q) = p.distinguished_quadric() {
        r.result("distinguished", q.display(p.variables()).to_string());
    }
    r.check("truncation_faithful", truncation);
    r.check("yoshino_b", y.dim_condition);
    Ok(())
}

fn ezd_search(
    s: &mut Session,
    ring: &Path,
    exhaustive: bool,
    proxy_prime: Option<u32>,
    trials: u64,
    force: bool,
    seed: u64,
    err: &mut dyn Write,
) -> Result<()> {
    let p = s.ring(ring)?;
    let alg = match proxy_prime {
        Some(q) => proxy_algebra(&p, q)?,
        None => ShortAlgebra::build(&p),
    };
    let field = alg.field().p();
    let pairs = if exhaustive {
        search_ezd_exhaustive(&alg, force)?
    } else {
        search_ezd_random(&alg, trials, seed)?.into_iter().collect()
    };
    let r = &mut s.report;
    r.result("search_field", field);
    r.result("mode", if exhaustive { "exhaustive" } else { "random" });
    if exhaustive {
        r.result("candidates", candidate_count(field, alg.n()).to_string());
    } else {
        r.result("trials", trials);
        r.result("seed", seed);
    }
    let described: Vec<_> = pairs.iter().map(|pair| pair.describe(&alg)).collect();
    r.result("pairs", described);
    if pairs.is_empty() {
        let _ = writeln!(err, "no exact zero divisors found");
    }
    r.check("found", !pairs.is_empty());
    Ok(())
}

fn ezd_verify(s: &mut Session, ring: &Path, a: &str, b: &str) -> Result<()> {
    let p = s.ring(ring)?;
    let alg = ShortAlgebra::build(&p);
    let (va, vb) = (parse_linear_form(a, &p)?, parse_linear_form(b, &p)?);
    let d = ezd_diagnostics(&alg, &va, &vb)?;
    let r = &mut s.report;
    r.result("a", alg.format_linear(&va));
    r.result("b", alg.format_linear(&vb));
    r.result("dim_condition", d.dim_condition);
    r.result("product_zero", d.product_zero);
    r.result("ann_a_dimension", d.ann_a_dimension);
    r.result("ann_b_dimension", d.ann_b_dimension);
    r.result("ezd", d.ezd);
    r.check("ezd", d.ezd);
    Ok(())
}

fn sum_summary(r: &mut Report, cs: &ConnectedSum) {
    let inv = cs.invariants();
    let gor = gorenstein_crosscheck(cs);
    let y = cs.r.yoshino_check();
    r.result("variables", cs.presentation.variables());
    r.result("dim1", cs.r.n());
    r.result("dim2", cs.r.d());
    r.result("delta", format_degree_two(&cs.r, &cs.delta.v2));
    r.result("invariants", inv);
    r.result("gorenstein", gor);
    r.result("yoshino_b", y.dim_condition);
    r.check("invariants", inv.all());
    r.check("gorenstein_consistent", gor.consistent);
}

fn csum_build(s: &mut Session, left: &Path, right: &Path, output: Option<&Path>) -> Result<()> {
    let (p1, p2) = (s.ring(left)?, s.ring(right)?);
    let cs = build_connected_sum(&p1, &p2)?;
    sum_summary(&mut s.report, &cs);
    if let Some(o) = output {
        write_text(o, &cs.presentation.to_text())?;
    }
    Ok(())
}

fn csum_check(s: &mut Session, left: &Path, right: &Path) -> Result<()> {
    let (p1, a, _) = s.complex(left)?;
    let (p2, b, _) = s.complex(right)?;
    let cs = build_connected_sum(&p1, &p2)?;
    let (a, b) = align(&a, &b)?;
    let m = assembly_crosscheck(&cs, &a, &b)?;
    sum_summary(&mut s.report, &cs);
    s.report.result("crosscheck", &m);
    s.report.check("crosscheck_consistent", m.consistent());
    Ok(())
}

fn complex_verify(s: &mut Session, path: &Path) -> Result<()> {
    let (p, c, _) = s.complex(path)?;
    let alg = ShortAlgebra::build(&p);
    let rep = c.acyclicity_report(&alg)?;
    let r = &mut s.report;
    r.result("period", c.period());
    r.result("ranks", c.ranks());
    r.result("is_complex", rep.is_complex);
    r.result("exact_at", &rep.exact_at);
    r.result("dual_exact_at", &rep.dual_exact_at);
    r.result("totally_acyclic", rep.totally_acyclic);
    r.check("is_complex", rep.is_complex);
    r.check("totally_acyclic", rep.totally_acyclic);
    Ok(())
}

fn maps_text(c: &[crate::complex::LinearMatrix], p: &Presentation) -> Vec<String> {
    c.iter().map(|m| m.to_text(p.field(), p.variables())).collect()
}

fn complex_normalize(s: &mut Session, path: &Path, window: usize, output: Option<&Path>) -> Result<()> {
    let (p, c, ring_path) = s.complex(path)?;
    let pair = LiftPair::new(&p)?;
    let n = normalize(&pair, &c, window)?;
    let r = &mut s.report;
    r.result("window", window);
    r.result("maps", maps_text(n.maps(), &p));
    match &n {
        Normalized::Periodic(pc) => {
            r.result("result", "periodic");
            r.result("period", pc.period());
            if let Some(o) = output {
                write_text(o, &complex_to_text(pc, &p, &ring_reference(&ring_path)))?;
            }
        }
        Normalized::Window(_) => r.result("result", "window"),
    }
    r.check("periodic", matches!(n, Normalized::Periodic(_)));
    Ok(())
}

fn complex_assemble(
    s: &mut Session,
    left: &Path,
    right: &Path,
    auto_sign: bool,
    output: Option<&Path>,
) -> Result<()> {
    let (p1, a, _) = s.complex(left)?;
    let (p2, b, _) = s.complex(right)?;
    let cs = build_connected_sum(&p1, &p2)?;
    let (a, b) = align(&a, &b)?;
    let assembled = assemble(&cs, &a, &b, auto_sign)?;
    let rep = assembled.complex.acyclicity_report(&cs.r)?;
    let r = &mut s.report;
    r.result("auto_sign", auto_sign);
    r.result("signs", &assembled.signs);
    r.result("period", assembled.complex.period());
    r.result("ranks", assembled.complex.ranks());
    r.result("maps", maps_text(assembled.complex.maps(), &cs.presentation));
    r.result("is_complex", rep.is_complex);
    r.result("exact_at", &rep.exact_at);
    r.result("dual_exact_at", &rep.dual_exact_at);
    r.result("totally_acyclic", rep.totally_acyclic);
    r.check("is_complex", rep.is_complex);
    r.check("totally_acyclic", rep.totally_acyclic);
    if let Some(o) = output {
        let ring_out = o.with_extension("ring");
        write_text(&ring_out, &cs.presentation.to_text())?;
        let name = ring_out.file_name().expect("file name").to_string_lossy().to_string();
        write_text(o, &complex_to_text(&assembled.complex, &cs.presentation, &name))?;
    }
    Ok(())
}

/// `(y, z)` with `y`, `z` linear forms.
fn parse_pair(text: &str, p: &Presentation) -> Result<(Vec<u32>, Vec<u32>)> {
    let bad = || Error::Precondition(format!("expected `(y, z)`, found `{text}`"));
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (y, z) = inner.split_once(',').ok_or_else(bad)?;
    Ok((parse_linear_form(y.trim(), p)?, parse_linear_form(z.trim(), p)?))
}

fn doubling_inputs(
    s: &mut Session,
    args: &DoubleArgs,
) -> Result<(Presentation, LiftPair, PeriodicComplex, SocleDecomposition, PathBuf)> {
    let (p, c, ring_path) = s.complex(&args.complex)?;
    if c.period() != 2 {
        return Err(Error::Precondition(format!(
            "doubling needs a period-2 complex, found period {}",
            c.period()
        )));
    }
    let lift = LiftPair::new(&p)?;
    let dec = if args.dec.is_empty() {
        SocleDecomposition::from_monomials(&lift)?
    } else {
        let pairs = args.dec.iter().map(|t| parse_pair(t, &p)).collect::<Result<Vec<_>>>()?;
        SocleDecomposition::new(&lift, pairs)?
    };
    Ok((p, lift, c, dec, ring_path))
}

fn verdict_checks(r: &mut Report, v: &DoublingVerdict) {
    r.result("verdict", v);
    r.check("composite_pattern", v.composite_pattern);
    r.check("is_complex", v.is_complex);
    r.check("totally_acyclic", v.totally_acyclic);
    r.check("lifting_condition", v.lifting_condition);
}

fn double(s: &mut Session, args: &DoubleArgs, alpha: Option<u32>) -> Result<()> {
    let (p, lift, c, dec, ring_path) = doubling_inputs(s, args)?;
    let found = match alpha {
        Some(a) => {
            let pair = build_doubled(&lift, c.map(0), c.map(1), &dec, a)?;
            let v = verify_doubling(&lift, &pair)?;
            Some((pair, v))
        }
        None => search_alpha(&lift, c.map(0), c.map(1), &dec)?,
    };
    let r = &mut s.report;
    let pairs: Vec<_> = dec
        .pairs()
        .iter()
        .map(|(y, z)| json!([lift.r1.format_linear(y), lift.r1.format_linear(z)]))
        .collect();
    r.result("decomposition", pairs);
    if alpha.is_none() {
        r.check("found", found.is_some());
    }
    let Some((pair, v)) = found else {
        r.result("advice", "no alpha below p works; try a larger prime");
        return Ok(());
    };
    r.result("alpha", pair.alpha);
    r.result("v", pair.v);
    r.result("levels", pair.levels);
    r.result("rank", pair.a.rows());
    r.result("maps", maps_text(&[pair.a.clone(), pair.b.clone()], &p));
    verdict_checks(r, &v);
    if let Some(o) = &args.output {
        write_text(o, &complex_to_text(&pair.complex(), &p, &ring_reference(&ring_path)))?;
    }
    Ok(())
}

fn graph_import(s: &mut Session, path: &Path, output: Option<&Path>, proxy_prime: Option<u32>) -> Result<()> {
    let text = s.read(path)?;
    let g = parse_graph_file(&text)?;
    let field = s.field();
    s.report.set_prime(field.p());
    let data = build_from_graph(&g, field)?;
    let alg = &data.algebra;
    let y = alg.yoshino_check();
    let names = |vs: &[crate::graph::Vertex]| vs.iter().map(|v| v.name()).collect::<Vec<_>>();
    let spot = proxy_prime.map(|q| no_ezd_spotcheck(&data.presentation, q)).transpose()?;
    let r = &mut s.report;
    r.result("component_a", names(&data.component_a));
    r.result("component_b", names(&data.component_b));
    r.result("variables", data.presentation.variables());
    r.result("f_a", alg.format_linear(&data.f_a.v1));
    r.result("f_b", alg.format_linear(&data.f_b.v1));
    r.result("g_a", alg.format_linear(&data.g_a.v1));
    r.result("g_b", alg.format_linear(&data.g_b.v1));
    r.result("delta", format_degree_two(alg, &data.delta.v2));
    r.result("dim1", y.dim1);
    r.result("dim2", y.dim2);
    r.result("yoshino_b", y.dim_condition);
    r.result("graph_checks", data.checks);
    for (name, v) in [
        ("truncation", data.checks.truncation),
        ("fg_zero", data.checks.fg_zero),
        ("delta_identity", data.checks.delta_identity),
        ("delta_nonzero", data.checks.delta_nonzero),
        ("cross_products_zero", data.checks.cross_products_zero),
        ("intersection_is_delta", data.checks.intersection_is_delta),
    ] {
        r.check(name, v);
    }
    if let (Some(q), Some(empty)) = (proxy_prime, spot) {
        r.result("spotcheck_field", q);
        r.check("no_ezd_spotcheck", empty);
    }
    if let Some(o) = output {
        write_text(o, &data.presentation.to_text())?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, s: &mut Session, err: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Ring(RingCmd::Info { ring }) => ring_info(s, ring),
        Command::Ezd(EzdCmd::Search {
            ring,
            exhaustive,
            proxy_prime,
            trials,
            force_budget,
        }) => ezd_search(s, ring, *exhaustive, *proxy_prime, *trials, *force_budget, cli.seed, err),
        Command::Ezd(EzdCmd::Verify { ring, a, b }) => ezd_verify(s, ring, a, b),
        Command::Csum(CsumCmd::Build { left, right, output }) => csum_build(s, left, right, output.as_deref()),
        Command::Csum(CsumCmd::Check { left, right }) => csum_check(s, left, right),
        Command::Complex(ComplexCmd::Verify { complex }) => complex_verify(s, complex),
        Command::Complex(ComplexCmd::Normalize { complex, window, output }) => {
            complex_normalize(s, complex, *window, output.as_deref())
        }
        Command::Complex(ComplexCmd::Assemble {
            left,
            right,
            signs,
            output,
        }) => complex_assemble(s, left, right, !signs.no_auto_sign, output.as_deref()),
        Command::Double(DoubleCmd::Build { args, alpha }) => double(s, args, Some(*alpha)),
        Command::Double(DoubleCmd::Search { args }) => double(s, args, None),
        Command::Graph(GraphCmd::Import {
            graph,
            output,
            proxy_prime,
        }) => graph_import(s, graph, output.as_deref(), *proxy_prime),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ring(_) => "ring info",
        Command::Ezd(EzdCmd::Search { .. }) => "ezd search",
        Command::Ezd(EzdCmd::Verify { .. }) => "ezd verify",
        Command::Csum(CsumCmd::Build { .. }) => "csum build",
        Command::Csum(CsumCmd::Check { .. }) => "csum check",
        Command::Complex(ComplexCmd::Verify { .. }) => "complex verify",
        Command::Complex(ComplexCmd::Normalize { .. }) => "complex normalize",
        Command::Complex(ComplexCmd::Assemble { .. }) => "complex assemble",
        Command::Double(DoubleCmd::Build { .. }) => "double build",
        Command::Double(DoubleCmd::Search { .. }) => "double search",
        Command::Graph(_) => "graph import",
    }
}

/// Run the command line `args` (including the program name) and return the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let prime = match cli.prime.map(PrimeField::new).transpose() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "tacx: {e}");
            return 2;
        }
    };
    let mut session = Session {
        prime,
        report: Report::new(command_name(&cli.command), prime.unwrap_or_default().p()),
    };
    match dispatch(&cli, &mut session, err) {
        Ok(()) => {}
        Err(e) if is_input_error(&e) => {
            let _ = writeln!(err, "tacx: {e}");
            return 2;
        }
        Err(e) => {
            let _ = writeln!(err, "tacx: {e}");
            session.report.result("error", e.to_string());
            session.report.check("completed", false);
        }
    }
    let report = session.report;
    let _ = out.write_all(report.to_json().as_bytes());
    if let Some(path) = &cli.out {
        if let Err(e) = write_report(&report, path) {
            let _ = writeln!(err, "tacx: {e}");
            return 2;
        }
    }
    if report.ok() {
        0
    } else {
        1
    }
}
