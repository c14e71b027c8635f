//! Command implementations for the `doublegroup` binary. Every command
//! returns an [`Outcome`] so that tests can drive it without a subprocess.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use doublegroup::amalgam::{FreeDouble, FreeFactor};
use doublegroup::embedding::{build_witness, kernel_basis, verify_witness, virtual_product_report};
use doublegroup::freegroup::{Index, PermRep, SubgroupGraph, Word};
use doublegroup::mihailova::{fiber_membership, finite_quotient_oracle, FinitePresentation, PairWord};
use doublegroup::Error;

pub mod presets;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "doublegroup", version, about = "Exact computations in doubles G *_H G of free groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index, rank, basis, normality and transversal of a subgroup of F_r.
    SubgroupInfo {
        #[command(flatten)]
        subgroup: SubgroupSpec,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Normal form of an element of G *_H G, e.g. "1:a 2:A 1:ab".
    DoubleNf {
        word: String,
        #[command(flatten)]
        subgroup: SubgroupSpec,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Product of two elements of G *_H G, in normal form.
    DoubleMul {
        left: String,
        right: String,
        #[command(flatten)]
        subgroup: SubgroupSpec,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Free basis of the kernel of the identification map L -> G.
    KernelBasis {
        #[command(flatten)]
        subgroup: SubgroupSpec,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build and verify an explicit F2 x F2 inside G *_H G.
    Witness {
        #[command(flatten)]
        subgroup: SubgroupSpec,
        /// Generators of N (normal in G, inside H); defaults to the normal core of H.
        #[arg(long)]
        n_gens: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The quotient of the Bass-Serre tree by ker(phi1), as a DOT multigraph.
    ExportCover {
        #[command(flatten)]
        subgroup: SubgroupSpec,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Membership in the fiber-product subgroup via a finite-quotient oracle.
    Mihailova {
        /// e.g. "(aaa,1)"
        pair: String,
        /// e.g. "rank=1; relators=aaa"
        #[arg(long)]
        presentation: String,
        /// Generator images in cycle notation, separated by ';', e.g. "(0 1 2)".
        #[arg(long)]
        images: String,
        /// Permutation degree; defaults to one more than the largest point.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SubgroupSpec {
    /// Rank of the ambient free group.
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// Comma-separated generators of H, e.g. "bA,abAA,aaa,aab".
    #[arg(long, conflicts_with = "preset")]
    pub gens: Option<String>,
    /// Named subgroup: rips, index2, s3stab.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Sampling {
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_len: u64,
    /// Decimal or 0x-prefixed hex.
    #[arg(long, default_value = "0xC0FFEE", value_parser = parse_seed)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).map_err(|e| e.to_string()),
        None => s.parse().map_err(|e: std::num::ParseIntError| e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_PASS,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::GeneratorOutOfRange { .. }
        | Error::RankMismatch { .. }
        | Error::InvalidPermutation(_)
        | Error::NotInSubgroup(_) => EXIT_PARSE,
        Error::InfiniteIndex
        | Error::CapExceeded { .. }
        | Error::IndexTooSmall { .. }
        | Error::RankTooSmall { .. }
        | Error::NotNormal
        | Error::NotContained(_)
        | Error::NormalRankTooSmall { .. }
        | Error::RelatorViolated(_) => EXIT_PRECONDITION,
    }
}

impl From<Error> for Outcome {
    fn from(err: Error) -> Self {
        Outcome::fail(exit_code_for(&err), format!("error: {err}\n"))
    }
}

/// Parses arguments (the first item is the program name) and runs.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            let text = e.render().to_string();
            if code == EXIT_PASS {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            }
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::SubgroupInfo { subgroup, format } => subgroup_info(&subgroup, format),
        Command::DoubleNf {
            word,
            subgroup,
            format,
        } => double_nf(&word, &subgroup, format),
        Command::DoubleMul {
            left,
            right,
            subgroup,
            format,
        } => double_mul(&left, &right, &subgroup, format),
        Command::KernelBasis { subgroup, format } => kernel_basis_cmd(&subgroup, format),
        Command::Witness {
            subgroup,
            n_gens,
            sampling,
            format,
        } => return witness(&subgroup, n_gens.as_deref(), &sampling, format),
        Command::ExportCover { subgroup, format } => export_cover(&subgroup, format),
        Command::Mihailova {
            pair,
            presentation,
            images,
            degree,
            format,
        } => mihailova(&pair, &presentation, &images, degree, format),
    };
    result.unwrap_or_else(Outcome::from)
}

impl SubgroupSpec {
    pub fn resolve(&self) -> doublegroup::Result<SubgroupGraph> {
        match (&self.preset, &self.gens) {
            (Some(name), _) => presets::subgroup(name),
            (None, Some(gens)) => SubgroupGraph::parse_generators(self.rank, gens),
            (None, None) => Err(Error::Parse("give --gens or --preset".into())),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Debug, Serialize, serde::Deserialize, PartialEq)]
pub struct SubgroupInfo {
    pub ambient_rank: usize,
    pub index: serde_json::Value,
    pub rank: usize,
    pub normal: bool,
    pub normality_rule: String,
    pub basis: Vec<String>,
    pub transversal: Option<Vec<String>>,
    pub graph: doublegroup::freegroup::Adjacency,
}

fn subgroup_info(spec: &SubgroupSpec, format: Format) -> doublegroup::Result<Outcome> {
    let h = spec.resolve()?;
    if format == Format::Dot {
        return Ok(Outcome::ok(h.to_dot()));
    }
    let index = h.index();
    let normality_rule = match index {
        Index::Finite(_) => "conjugates of the basis by each generator lie in H",
        Index::Infinite => {
            "infinite index: a finitely generated normal subgroup of F_r (r >= 2) is trivial or of finite index"
        }
    };
    let transversal = match index {
        Index::Finite(_) => Some(
            FreeFactor::new(h.clone())?
                .transversal()
                .reps()
                .iter()
                .map(Word::to_string)
                .collect(),
        ),
        Index::Infinite => None,
    };
    let info = SubgroupInfo {
        ambient_rank: h.rank_of_ambient(),
        index: serde_json::to_value(index).expect("index serializes"),
        rank: h.rank(),
        normal: h.is_normal(),
        normality_rule: normality_rule.to_string(),
        basis: h.basis().iter().map(Word::to_string).collect(),
        transversal,
        graph: h.to_adjacency(),
    };
    if format == Format::Json {
        return Ok(Outcome::ok(to_json(&info)));
    }
    let mut s = String::new();
    writeln!(s, "ambient rank: {}", info.ambient_rank).unwrap();
    writeln!(s, "index: {index}").unwrap();
    writeln!(s, "rank: {}", info.rank).unwrap();
    writeln!(s, "normal: {} ({})", info.normal, info.normality_rule).unwrap();
    writeln!(s, "basis: {}", quoted(&info.basis)).unwrap();
    if let Some(t) = &info.transversal {
        writeln!(s, "transversal: {}", quoted(t)).unwrap();
    }
    writeln!(s, "vertices: {}, edges: {}", h.vertex_count(), h.edge_count()).unwrap();
    Ok(Outcome::ok(s))
}

fn quoted(words: &[String]) -> String {
    let parts: Vec<String> = words.iter().map(|w| format!("{w:?}")).collect();
    format!("[{}]", parts.join(", "))
}

fn free_double(spec: &SubgroupSpec) -> doublegroup::Result<FreeDouble> {
    Ok(FreeDouble::new(FreeFactor::new(spec.resolve()?)?))
}

fn print_element(u: &doublegroup::amalgam::FreeElement, format: Format) -> Outcome {
    match format {
        Format::Json => Outcome::ok(to_json(u)),
        _ => Outcome::ok(format!("{u}\n")),
    }
}

fn double_nf(word: &str, spec: &SubgroupSpec, format: Format) -> doublegroup::Result<Outcome> {
    let l = free_double(spec)?;
    let u = l.parse(word)?;
    Ok(print_element(&u, format))
}

fn double_mul(left: &str, right: &str, spec: &SubgroupSpec, format: Format) -> doublegroup::Result<Outcome> {
    let l = free_double(spec)?;
    let u = l.parse(left)?;
    let v = l.parse(right)?;
    Ok(print_element(&l.multiply(&u, &v), format))
}

fn kernel_basis_cmd(spec: &SubgroupSpec, format: Format) -> doublegroup::Result<Outcome> {
    let l = free_double(spec)?;
    let basis: Vec<String> = kernel_basis(&l).iter().map(ToString::to_string).collect();
    if format == Format::Json {
        return Ok(Outcome::ok(to_json(&serde_json::json!({
            "index": l.factor().index(),
            "rank": basis.len(),
            "basis": basis,
        }))));
    }
    let mut s = format!("index {}, kernel rank {}\n", l.factor().index(), basis.len());
    for b in &basis {
        writeln!(s, "{b}").unwrap();
    }
    Ok(Outcome::ok(s))
}

#[derive(Debug, Serialize)]
struct WitnessOutput {
    pass: bool,
    witness: doublegroup::embedding::WitnessRecord,
    report: doublegroup::embedding::VerificationReport,
    virtual_product: doublegroup::embedding::VirtualProductReport,
}

fn witness(spec: &SubgroupSpec, n_gens: Option<&str>, sampling: &Sampling, format: Format) -> Outcome {
    let built = spec.resolve().and_then(|h| {
        let n = n_gens
            .map(|g| SubgroupGraph::parse_generators(h.rank_of_ambient(), g))
            .transpose()?;
        build_witness(h, n)
    });
    let w = match built {
        Ok(w) => w,
        Err(e) => return e.into(),
    };
    let report = verify_witness(&w, sampling.samples as usize, sampling.max_len as usize, sampling.seed);
    let out = WitnessOutput {
        pass: report.pass,
        witness: w.record(),
        virtual_product: virtual_product_report(w.context()),
        report,
    };
    let code = if out.pass { EXIT_PASS } else { EXIT_VERIFICATION_FAILED };
    let stdout = if format == Format::Json {
        to_json(&out)
    } else {
        let mut s = String::new();
        let r = &out.report;
        let vp = &out.virtual_product;
        writeln!(s, "x1 = {}", out.witness.x1).unwrap();
        writeln!(s, "x2 = {}", out.witness.x2).unwrap();
        writeln!(s, "y1 = {}", out.witness.y1).unwrap();
        writeln!(s, "y2 = {}", out.witness.y2).unwrap();
        writeln!(s, "commutators [x_i, y_j] = 1: {} ({} checked)", r.commutators_pass, r.commutators_checked).unwrap();
        writeln!(s, "kernel conditions: {}", r.kernel_conditions).unwrap();
        writeln!(
            s,
            "injectivity: {} failures in {} samples (max_len {}, seed {:#x})",
            r.injectivity_failures, r.injectivity_samples, r.max_len, r.seed
        )
        .unwrap();
        writeln!(s, "virtually F{} x F{}, index {}", vp.r1, vp.r2, vp.index).unwrap();
        writeln!(s, "{}", if out.pass { "PASS" } else { "FAIL" }).unwrap();
        s
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

/// Two vertex orbits and one edge per coset of H, labelled by its
/// representative, followed by the edge of groups it covers.
pub fn cover_dot(l: &FreeDouble) -> String {
    let reps = l.factor().transversal().reps();
    let mut s = String::new();
    writeln!(s, "graph cover {{").unwrap();
    writeln!(s, "  // quotient of the Bass-Serre tree of G *_H G by ker(phi1)").unwrap();
    writeln!(s, "  v1 [label=\"G(1)\", covers=\"g1\"];").unwrap();
    writeln!(s, "  v2 [label=\"G(2)\", covers=\"g2\"];").unwrap();
    for (i, t) in reps.iter().enumerate() {
        writeln!(s, "  v1 -- v2 [label=\"{t}\", coset={i}, covers=\"h\"];").unwrap();
    }
    writeln!(s, "}}").unwrap();
    writeln!(s, "graph base {{").unwrap();
    writeln!(s, "  g1 [label=\"G\"];").unwrap();
    writeln!(s, "  g2 [label=\"G\"];").unwrap();
    writeln!(s, "  g1 -- g2 [label=\"H\", name=\"h\"];").unwrap();
    writeln!(s, "}}").unwrap();
    s
}

fn export_cover(spec: &SubgroupSpec, format: Format) -> doublegroup::Result<Outcome> {
    let l = free_double(spec)?;
    let m = l.factor().index();
    match format {
        Format::Dot => Ok(Outcome::ok(cover_dot(&l))),
        Format::Json => Ok(Outcome::ok(to_json(&serde_json::json!({
            "nodes": ["v1", "v2"],
            "edges": l.factor().transversal().reps().iter().map(Word::to_string).collect::<Vec<_>>(),
            "kernel_rank": m - 1,
        })))),
        Format::Text => Ok(Outcome::ok(format!(
            "2 vertices, {m} edges, rank of ker(phi1) = E - V + 1 = {}\n",
            m - 1
        ))),
    }
}

/// Cycle notation, e.g. `"(0 1 2)(3 4)"`; `"()"` is the identity.
pub fn parse_cycles(text: &str, degree: usize) -> doublegroup::Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let points = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad point {p:?}: {e}")))
            })
            .collect::<doublegroup::Result<Vec<_>>>()?;
        for (i, &p) in points.iter().enumerate() {
            let q = points[(i + 1) % points.len()];
            if p >= degree || q >= degree {
                return Err(Error::InvalidPermutation(format!("point out of range in {text:?}")));
            }
            perm[p] = q;
        }
        rest = body[close + 1..].trim_start();
    }
    PermRep::new(vec![perm.clone()])?;
    Ok(perm)
}

fn max_point(text: &str) -> usize {
    text.split(|c: char| !c.is_ascii_digit())
        .filter_map(|p| p.parse::<usize>().ok())
        .max()
        .map_or(1, |m| m + 1)
}

fn mihailova(
    pair: &str,
    presentation: &str,
    images: &str,
    degree: Option<usize>,
    format: Format,
) -> doublegroup::Result<Outcome> {
    let p = FinitePresentation::parse(presentation)?;
    let pair = PairWord::parse(pair, p.rank())?;
    let degree = degree.unwrap_or_else(|| max_point(images));
    let perms = images
        .split(';')
        .map(|c| parse_cycles(c, degree))
        .collect::<doublegroup::Result<Vec<_>>>()?;
    let oracle = finite_quotient_oracle(&p, PermRep::new(perms)?)?;
    let member = fiber_membership(&pair, &oracle)?;
    let difference = pair.difference();
    let image = oracle.image(&difference);
    if format == Format::Json {
        return Ok(Outcome::ok(to_json(&serde_json::json!({
            "presentation": p.to_string(),
            "pair": pair.to_string(),
            "difference": difference.to_string_or_one(),
            "image": image,
            "member": member,
        }))));
    }
    let mut s = String::new();
    writeln!(s, "presentation: {p}").unwrap();
    writeln!(s, "pair: {pair}").unwrap();
    writeln!(s, "u*v^-1 = {}", difference.to_string_or_one()).unwrap();
    writeln!(s, "image: {image:?}").unwrap();
    writeln!(s, "{}", if member { "member" } else { "non-member" }).unwrap();
    Ok(Outcome::ok(s))
}
