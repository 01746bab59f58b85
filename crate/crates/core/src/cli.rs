//! Command-line front end.
//!
//! Every command prints one key-sorted JSON report (or a single verdict line
//! with `--quiet`) and exits with 0 when all checks hold, 1 when a checked
//! property fails, and 2 on invalid input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::coherent::{build_configuration, check_lemma_int, CoherenceError, ColorMatrix, Configuration};
use crate::constructions::{self, CayleyGroup, PermGroup};
use crate::hadamard::{self, ExponentMatrix, FrameChoice};
use crate::regularity::{self, Verdict};
use crate::stabilization::{self, Coloring};
use crate::structure::{self, ClosedSubset};

/// Default ceiling on the number of points accepted from any input.
pub const DEFAULT_MAX_POINTS: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "cckit", version, about = "Coherent configurations with C_p wr C_p fibers")]
pub struct Cli {
    /// Print only the verdict line.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the coherence axioms and the valency identities.
    Verify { file: PathBuf },
    /// Closed subsets, thin radical and residue of a homogeneous scheme.
    Analyze {
        file: PathBuf,
        /// List every closed subset (rank at most 20).
        #[arg(long)]
        closed_subsets: bool,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Build a scheme and write it as CCM.
    Construct {
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Thin residue extension of a homogeneous scheme.
    Extend {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Coherent closure of an arbitrary coloring.
    Wl {
        file: PathBuf,
        /// Point partition: one class index per line.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Regularity split, exponent matrices, MUBs and the degree bound.
    Hadamard {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        /// Non-identity thin color of the first fiber.
        #[arg(long)]
        t1: Option<usize>,
        /// Comma-separated base points, one per fiber.
        #[arg(long, value_delimiter = ',')]
        base: Option<Vec<usize>>,
    },
    /// Degree bound for a homogeneous scheme.
    Bound {
        file: PathBuf,
        #[arg(long)]
        p: usize,
    },
    /// Generalized Hadamard test of an exponent matrix.
    GhCheck { file: PathBuf },
    /// Normalizer chain of a subgroup.
    Chain {
        #[arg(long)]
        cayley: PathBuf,
        /// Comma-separated subgroup elements.
        #[arg(long, value_delimiter = ',', required = true)]
        subgroup: Vec<usize>,
        #[arg(long)]
        p: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// Thin scheme of `Z_n`.
    Cyclic { n: usize },
    /// Thin scheme of a group given as a Cayley table.
    Group { file: PathBuf },
    /// Orbitals of a permutation group.
    Schurian { file: PathBuf },
    /// Orbitals of the action on right cosets of a subgroup.
    Coset {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        subgroup: Vec<usize>,
    },
    /// Wreath product of two homogeneous schemes.
    Wreath { inner: PathBuf, outer: PathBuf },
}

struct Failure {
    code: u8,
    stage: &'static str,
    message: String,
    detail: Option<Value>,
}

fn input_error(stage: &'static str, e: impl ToString) -> Failure {
    Failure {
        code: 2,
        stage,
        message: e.to_string(),
        detail: None,
    }
}

fn check_failed(stage: &'static str, e: impl ToString) -> Failure {
    Failure {
        code: 1,
        stage,
        message: e.to_string(),
        detail: None,
    }
}

impl Failure {
    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Default)]
struct Report {
    inputs: Vec<Value>,
    payload: BTreeMap<String, Value>,
}

impl Report {
    fn set(&mut self, key: &str, value: impl Serialize) {
        self.payload.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| input_error("input", format!("{}: {e}", path.display())))?;
        let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(json!({"path": path.display().to_string(), "sha256": digest}));
        String::from_utf8(bytes).map_err(|_| input_error("input", format!("{}: not UTF-8", path.display())))
    }
}

fn max_points() -> usize {
    std::env::var("CCKIT_MAX_POINTS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_POINTS)
}

fn guard_points(n: usize) -> Result<(), Failure> {
    let limit = max_points();
    if n > limit {
        return Err(input_error("input", format!("{n} points exceed CCKIT_MAX_POINTS = {limit}")));
    }
    Ok(())
}

fn load_matrix(rep: &mut Report, path: &Path) -> Result<ColorMatrix, Failure> {
    let text = rep.read(path)?;
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    if let Some(n) = header.and_then(|h| h.split_whitespace().next()).and_then(|t| t.parse().ok()) {
        guard_points(n)?;
    }
    ColorMatrix::parse(&text).map_err(|e| input_error("parse", e))
}

fn coherence_detail(e: &CoherenceError) -> Value {
    match e {
        CoherenceError::DiagonalNotUnion { color, alpha, beta } => {
            json!({"kind": "diagonal_not_union", "color": color, "alpha": alpha, "beta": beta})
        }
        CoherenceError::ConverseNotClosed {
            color,
            first,
            second,
            alpha,
            beta,
        } => json!({
            "kind": "converse_not_closed", "color": color, "first": first,
            "second": second, "alpha": alpha, "beta": beta,
        }),
        CoherenceError::SplitAcrossFibers { color } => json!({"kind": "split_across_fibers", "color": color}),
        CoherenceError::ValencyIrregular {
            color,
            point,
            expected,
            found,
        } => json!({"kind": "valency_irregular", "color": color, "point": point, "expected": expected, "found": found}),
        CoherenceError::IrregularTriple {
            s,
            t,
            u,
            alpha,
            beta,
            expected,
            actual,
        } => json!({
            "kind": "irregular_triple", "s": s, "t": t, "u": u,
            "alpha": alpha, "beta": beta, "expected": expected, "actual": actual,
        }),
        CoherenceError::TooLarge { rank } => json!({"kind": "too_large", "rank": rank}),
    }
}

fn load_configuration(rep: &mut Report, path: &Path) -> Result<Configuration, Failure> {
    let m = load_matrix(rep, path)?;
    build_configuration(m).map_err(|e| check_failed("coherence", &e).with_detail(coherence_detail(&e)))
}

fn write_ccm(path: &Path, m: &ColorMatrix) -> Result<(), Failure> {
    std::fs::write(path, m.to_ccm()).map_err(|e| input_error("output", format!("{}: {e}", path.display())))
}

fn summary(c: &Configuration) -> Value {
    json!({
        "degree": c.degree(),
        "rank": c.rank(),
        "fibers": c.fibers().iter().map(Vec::len).collect::<Vec<_>>(),
        "valencies": c.valencies(),
    })
}

fn closed_json(t: &ClosedSubset) -> Value {
    json!({"colors": t.colors(), "valency": t.valency()})
}

fn verify(rep: &mut Report, file: &Path) -> Result<(), Failure> {
    let c = load_configuration(rep, file)?;
    rep.set("configuration", summary(&c));
    let lemma = check_lemma_int(&c);
    rep.set("valency_identities", &lemma);
    if !lemma.holds() {
        return Err(check_failed("valency identities", format!("{} violations", lemma.violations.len())));
    }
    Ok(())
}

fn homogeneous(rep: &mut Report, file: &Path) -> Result<Configuration, Failure> {
    let c = load_configuration(rep, file)?;
    rep.set("configuration", summary(&c));
    if !c.is_homogeneous() {
        return Err(check_failed("homogeneity", format!("{} fibers", c.fiber_count())));
    }
    Ok(c)
}

fn analyze(rep: &mut Report, file: &Path, closed_subsets: bool, p: Option<usize>) -> Result<(), Failure> {
    let c = homogeneous(rep, file)?;
    let structure_failed = |e: structure::StructureError| check_failed("structure", e);
    let radical = structure::thin_radical(&c).map_err(structure_failed)?;
    let residue = structure::thin_residue(&c).map_err(structure_failed)?;
    let factor = structure::factor_scheme(&c, &residue).map_err(structure_failed)?;
    let sub = structure::subscheme(&c, 0, &residue).map_err(structure_failed)?;
    rep.set("thin_radical", closed_json(&radical));
    rep.set("thin_residue", closed_json(&residue));
    rep.set(
        "factor_scheme",
        json!({"degree": factor.degree(), "rank": factor.rank(), "thin": factor.valencies().iter().all(|&v| v == 1)}),
    );
    rep.set("residue_subscheme", json!({"degree": sub.degree(), "rank": sub.rank()}));
    if closed_subsets {
        let all = structure::enumerate_closed_subsets(&c).map_err(structure_failed)?;
        rep.set("closed_subsets", all.map(|v| v.iter().map(closed_json).collect::<Vec<_>>()));
    }
    if let Some(p) = p {
        rep.set("p_scheme", structure::is_p_scheme(&c, p));
        rep.set("wreath_cpcp", structure::recognize_wreath_cpcp(&c, p).map_err(structure_failed)?);
        rep.set(
            "residue_wreath_cpcp",
            structure::recognize_wreath_cpcp(&sub, p).map_err(structure_failed)?,
        );
        rep.set(
            "schurian_consequences",
            constructions::schurian_consequences(&c, p).map_err(structure_failed)?,
        );
    }
    Ok(())
}

fn load_group(rep: &mut Report, path: &Path) -> Result<CayleyGroup, Failure> {
    let text = rep.read(path)?;
    CayleyGroup::parse(&text).map_err(|e| input_error("parse", e))
}

fn load_perm(rep: &mut Report, path: &Path) -> Result<PermGroup, Failure> {
    let text = rep.read(path)?;
    let g = PermGroup::parse(&text).map_err(|e| input_error("parse", e))?;
    guard_points(g.degree())?;
    Ok(g)
}

fn construct(rep: &mut Report, output: &Path, kind: &ConstructKind) -> Result<(), Failure> {
    let c = match kind {
        ConstructKind::Cyclic { n } => {
            if *n == 0 {
                return Err(input_error("arguments", "n must be positive"));
            }
            guard_points(*n)?;
            constructions::cyclic_scheme(*n)
        }
        ConstructKind::Group { file } => {
            let g = load_group(rep, file)?;
            guard_points(g.order())?;
            constructions::group_scheme(&g)
        }
        ConstructKind::Schurian { file } => {
            let g = load_perm(rep, file)?;
            rep.set("transitive", g.is_transitive());
            constructions::orbitals(&g)
        }
        ConstructKind::Coset { file, subgroup } => {
            let g = load_group(rep, file)?;
            let ca = constructions::coset_action(&g, subgroup).map_err(|e| input_error("subgroup", e))?;
            guard_points(ca.action.degree())?;
            rep.set("faithful", ca.faithful);
            rep.set("core", &ca.core);
            constructions::orbitals(&ca.action)
        }
        ConstructKind::Wreath { inner, outer } => {
            let a = load_configuration(rep, inner).map_err(|f| Failure { code: 2, ..f })?;
            let b = load_configuration(rep, outer).map_err(|f| Failure { code: 2, ..f })?;
            guard_points(a.degree() * b.degree())?;
            constructions::wreath_product(&a, &b).map_err(|e| input_error("wreath", e))?
        }
    };
    let c = c.canonical();
    write_ccm(output, c.matrix())?;
    rep.set("configuration", summary(&c));
    rep.set("output", output.display().to_string());
    Ok(())
}

fn fiber_structure(c: &Configuration) -> Value {
    let fibers: Vec<Value> = (0..c.fiber_count())
        .map(|i| {
            let sub = build_configuration(c.matrix().restrict(&c.fibers()[i])).expect("fiber scheme");
            json!({"points": c.fibers()[i], "rank": sub.rank(), "valencies": sub.valencies()})
        })
        .collect();
    let mut inter: Vec<usize> = (0..c.rank())
        .filter(|&s| c.domain(s) != c.codomain(s))
        .map(|s| c.valency(s))
        .collect();
    inter.sort_unstable();
    inter.dedup();
    json!({"fibers": fibers, "inter_fiber_valencies": inter})
}

fn extend(rep: &mut Report, file: &Path, output: &Path) -> Result<(), Failure> {
    let c = homogeneous(rep, file)?;
    let ext = stabilization::thin_residue_extension(&c).map_err(|e| check_failed("extension", e))?;
    write_ccm(output, ext.matrix())?;
    rep.set("extension", summary(&ext));
    rep.set("fiber_structure", fiber_structure(&ext));
    rep.set("output", output.display().to_string());
    Ok(())
}

fn wl(rep: &mut Report, file: &Path, seed: Option<&Path>, output: &Path) -> Result<(), Failure> {
    let m = load_matrix(rep, file)?;
    rep.set("input", json!({"degree": m.n(), "rank": m.rank()}));
    let mut col = Coloring::from_matrix(m);
    if let Some(seed) = seed {
        let text = rep.read(seed)?;
        let classes = stabilization::parse_point_classes(&text).map_err(|e| input_error("seed", e))?;
        col = col.with_point_classes(&classes).map_err(|e| input_error("seed", e))?;
    }
    let c = stabilization::wl_closure(&col);
    write_ccm(output, c.matrix())?;
    rep.set("closure", summary(&c));
    rep.set("output", output.display().to_string());
    Ok(())
}

fn hadamard_pipeline(
    rep: &mut Report,
    file: &Path,
    p: usize,
    t1: Option<usize>,
    base: Option<Vec<usize>>,
) -> Result<(), Failure> {
    let c = load_configuration(rep, file)?;
    rep.set("configuration", summary(&c));
    let ctx = regularity::check_hypothesis(&c, p).map_err(|e| check_failed("hypothesis", e))?;
    rep.set(
        "hypothesis",
        json!({"p": p, "m": ctx.m(), "fiber_sizes": c.fibers().iter().map(Vec::len).collect::<Vec<_>>()}),
    );
    let split = regularity::split_rn(&ctx).map_err(|e| check_failed("split", e))?;
    rep.set("split", &split);
    let products = regularity::verify_products(&ctx).map_err(|e| check_failed("products", e))?;
    rep.set("products", &products);
    let bound = p * p * (p + 1);
    rep.set(
        "bound",
        json!({"degree": c.degree(), "bound": bound, "holds": c.degree() <= bound || split.verdict == Verdict::AllRegular}),
    );
    if split.verdict == Verdict::AllRegular {
        rep.set("dichotomy", "all inter-fiber colors are regular");
        return Ok(());
    }
    if c.degree() > bound {
        return Err(check_failed("bound", format!("degree {} exceeds {bound}", c.degree())));
    }
    let m = ctx.m();
    let mut triples = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if i != j && j != k && i != k {
                    triples.push(
                        regularity::verify_triple_coefficients(&ctx, &split, i, j, k)
                            .map_err(|e| check_failed("triple coefficients", e))?,
                    );
                }
            }
        }
    }
    let choice = FrameChoice {
        t1,
        base_points: base,
        representatives: None,
    };
    let frame = hadamard::build_frame(&ctx, &split, &choice).map_err(|e| check_failed("frame", e))?;
    rep.set(
        "frame",
        json!({
            "base_points": frame.base_points(),
            "thin_elements": frame.thin_elements(),
            "representatives": frame.representatives(),
        }),
    );
    let mut gh_checked = 0;
    for s in ctx.inter_fiber_colors() {
        let h = hadamard::exponent_matrix(&frame, s).map_err(|e| check_failed("exponent matrix", e))?;
        if !hadamard::is_generalized_hadamard(&h) {
            return Err(check_failed("generalized hadamard", format!("h({s}) is not a generalized Hadamard matrix")));
        }
        gh_checked += 1;
    }
    let mut families = Vec::new();
    for i in 0..m {
        for j in (0..m).filter(|&j| j != i) {
            let s = c.colors_between(i, j)[0];
            let h = hadamard::exponent_matrix(&frame, s).map_err(|e| check_failed("exponent matrix", e))?;
            families.push(json!({"fibers": [i, j], "color": s, "entries": h.entries, "generalized_hadamard": true}));
        }
    }
    rep.set("exponent_matrices", families);
    rep.set("generalized_hadamard_checked", gh_checked);
    let mut scalars = Vec::new();
    for t in &triples {
        for e in &t.entries {
            let alpha = hadamard::product_scalar(&frame, e.s1, e.s2, e.s3).map_err(|e| check_failed("product scalar", e))?;
            let expected = hadamard::scalar_from_coefficients(&frame, e);
            if alpha != expected {
                return Err(check_failed(
                    "product scalar",
                    format!("scalar {alpha} for ({}, {}, {}) differs from coefficient form {expected}", e.s1, e.s2, e.s3),
                ));
            }
            scalars.push(json!({
                "s1": e.s1, "s2": e.s2, "s3": e.s3,
                "coefficients": e.coefficients,
                "alpha": alpha.coefficients(),
                "alpha_text": alpha.to_string(),
                "norm_square": p,
            }));
        }
    }
    rep.set("triples", triples.iter().map(|t| json!({"fibers": t.fibers, "entries": t.entries.len()})).collect::<Vec<_>>());
    rep.set("product_scalars", scalars);
    let mub = hadamard::mub_family(&frame).map_err(|e| check_failed("mub", e))?;
    rep.set("mub", &mub);
    Ok(())
}

fn bound(rep: &mut Report, file: &Path, p: usize) -> Result<(), Failure> {
    let c = homogeneous(rep, file)?;
    match hadamard::bound_check(&c, p) {
        Ok(v) => {
            rep.set("bound", &v);
            Ok(())
        }
        Err(e @ hadamard::HadamardError::HypothesesNotMet(_)) => Err(check_failed("hypotheses", e)),
        Err(e) => Err(check_failed("bound", e)),
    }
}

fn gh_check(rep: &mut Report, file: &Path) -> Result<(), Failure> {
    let text = rep.read(file)?;
    let m = ExponentMatrix::parse(&text).map_err(|e| input_error("parse", e))?;
    let ok = hadamard::is_generalized_hadamard(&m);
    rep.set("matrix", &m);
    rep.set("generalized_hadamard", ok);
    if !ok {
        return Err(check_failed("generalized hadamard", "some pair of rows repeats a difference"));
    }
    Ok(())
}

fn chain(rep: &mut Report, cayley: &Path, subgroup: &[usize], p: usize) -> Result<(), Failure> {
    let g = load_group(rep, cayley)?;
    let r = constructions::chain_check(&g, subgroup, p).map_err(|e| input_error("subgroup", e))?;
    rep.set("chain", &r);
    if !r.holds() {
        return Err(check_failed("chain", r.failures.join("; ")));
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Analyze { .. } => "analyze",
        Command::Construct { .. } => "construct",
        Command::Extend { .. } => "extend",
        Command::Wl { .. } => "wl",
        Command::Hadamard { .. } => "hadamard",
        Command::Bound { .. } => "bound",
        Command::GhCheck { .. } => "gh-check",
        Command::Chain { .. } => "chain",
    }
}

fn dispatch(rep: &mut Report, command: &Command) -> Result<(), Failure> {
    match command {
        Command::Verify { file } => verify(rep, file),
        Command::Analyze {
            file,
            closed_subsets,
            p,
        } => analyze(rep, file, *closed_subsets, *p),
        Command::Construct { output, kind } => match output {
            Some(output) => construct(rep, output, kind),
            None => Err(input_error("arguments", "construct needs -o <output>")),
        },
        Command::Extend { file, output } => extend(rep, file, output),
        Command::Wl { file, seed, output } => wl(rep, file, seed.as_deref(), output),
        Command::Hadamard { file, p, t1, base } => hadamard_pipeline(rep, file, *p, *t1, base.clone()),
        Command::Bound { file, p } => bound(rep, file, *p),
        Command::GhCheck { file } => gh_check(rep, file),
        Command::Chain { cayley, subgroup, p } => chain(rep, cayley, subgroup, *p),
    }
}

/// Runs a parsed command and returns the report text and exit code.
pub fn execute(cli: &Cli, arguments: Vec<String>) -> (String, u8) {
    let name = command_name(&cli.command);
    let mut rep = Report::default();
    let outcome = dispatch(&mut rep, &cli.command);
    let (code, verdict_line) = match &outcome {
        Ok(()) => (0, format!("{name}: pass")),
        Err(f) => (f.code, format!("{name}: fail at {}: {}", f.stage, f.message)),
    };
    if cli.quiet {
        return (verdict_line + "\n", code);
    }
    let mut report = json!({
        "command": name,
        "arguments": arguments,
        "inputs": rep.inputs,
        "exit_code": code,
        "verdict": if code == 0 { "pass" } else { "fail" },
        "payload": rep.payload,
    });
    if let Err(f) = outcome {
        report["failed_stage"] = json!(f.stage);
        report["error"] = json!(f.message);
        if let Some(d) = f.detail {
            report["witness"] = d;
        }
    }
    (serde_json::to_string_pretty(&report).expect("json") + "\n", code)
}

pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let (text, code) = execute(&cli, echo);
    print!("{text}");
    ExitCode::from(code)
}
