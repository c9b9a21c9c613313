//! `metahecke`: JSON front end for the metahecke library.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metahecke::cocycle::TorusBlockJson;
use metahecke::hilbert::ElemJson;
use serde::Serialize;

use output::{emit, error_document};

#[derive(Parser)]
#[command(
    name = "metahecke",
    version,
    about = "Exact computations for metaplectic covers of GL_r and their Hecke algebras"
)]
struct Cli {
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Single-line JSON.
    #[arg(long, global = true)]
    compact: bool,
    /// Seed for randomized checks; recorded in every document.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tame Hilbert symbol (x, y)_n.
    Hilbert(HilbertArgs),
    /// Commutator of two commuting torus elements in the cover.
    Commutator(CommutatorArgs),
    /// HNF of the solution lattice of the congruence system.
    Congruence(CongruenceArgs),
    /// Invariants n0, d0, s0 and the reducibility point s*.
    Params(TypeArgs),
    /// Compare the lattices T0 and W0'.
    W0check(TypeArgs),
    /// Twist invariant l0 of a regular character via Green's parametrization.
    GreenL0(GreenArgs),
    /// Product of two words in the Hecke algebra, in the Iwahori–Matsumoto basis.
    HeckeMul(HeckeMulArgs),
    /// Induced module from the commutative subalgebra.
    Induce(InduceArgs),
    /// Reducibility point of the rank-two parabolic induction.
    Reducibility(ReducibilityArgs),
    /// Index [T0 : W0'] over a grid of covers.
    ScanW0(ScanArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Hilbert(_) => "hilbert",
            Command::Commutator(_) => "commutator",
            Command::Congruence(_) => "congruence",
            Command::Params(_) => "params",
            Command::W0check(_) => "w0check",
            Command::GreenL0(_) => "green-l0",
            Command::HeckeMul(_) => "hecke-mul",
            Command::Induce(_) => "induce",
            Command::Reducibility(_) => "reducibility",
            Command::ScanW0(_) => "scan-w0",
        }
    }
}

/// `V,U`: valuation and discrete log of the unit residue.
fn parse_elem(s: &str) -> Result<ElemJson, String> {
    let (v, u) = s.split_once(',').ok_or_else(|| format!("expected V,U, got {s:?}"))?;
    Ok(ElemJson {
        v: v.trim().parse().map_err(|_| format!("bad valuation in {s:?}"))?,
        u: u.trim().parse().map_err(|_| format!("bad unit log in {s:?}"))?,
    })
}

/// `V,U;V,U;…`
fn parse_elems(s: &str) -> Result<Vec<ElemJson>, String> {
    s.split(';').map(parse_elem).collect()
}

#[derive(Args, Serialize, Clone)]
pub struct FieldArgs {
    /// Residue characteristic.
    #[arg(long)]
    pub p: u32,
    /// Residue degree over F_p.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Args, Serialize)]
pub struct HilbertArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    /// Order of the symbol; must divide q - 1.
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_parser = parse_elem, allow_hyphen_values = true)]
    pub x: ElemJson,
    /// Lives in the unramified extension of degree `f` when `f > 1`.
    #[arg(long, value_parser = parse_elem, allow_hyphen_values = true)]
    pub y: ElemJson,
    #[arg(long, default_value_t = 1)]
    pub f: u32,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Kp,
    Savin,
}

#[derive(Args, Serialize, Clone)]
pub struct CoverArgs {
    /// Named family; otherwise both --c and --d are required.
    #[arg(long, value_enum)]
    pub cover: Option<Family>,
    #[arg(long)]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
}

#[derive(Args, Serialize)]
pub struct CommutatorArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub cover: CoverArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    /// Diagonal entries of the first element, `V,U;V,U;…`.
    #[arg(long, value_parser = parse_elems, allow_hyphen_values = true)]
    pub x: Option<::std::vec::Vec<ElemJson>>,
    #[arg(long, value_parser = parse_elems, allow_hyphen_values = true)]
    pub y: Option<::std::vec::Vec<ElemJson>>,
    /// JSON file (or `-`) with block tori `u`, `v` over extensions.
    #[arg(long, conflicts_with_all = ["x", "y", "random"])]
    pub input: Option<PathBuf>,
    /// Check the commutator routes on this many random diagonal pairs.
    #[arg(long, conflicts_with_all = ["x", "y"])]
    pub random: Option<usize>,
    /// Torus rank for --random.
    #[arg(long, default_value_t = 3)]
    pub t: usize,
}

fn parse_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad integer {x:?}")))
        .collect()
}

#[derive(Args, Serialize)]
pub struct CongruenceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub cover: CoverArgs,
    /// Comma-separated l_i.
    #[arg(long, value_parser = parse_list)]
    pub l: ::std::vec::Vec<i64>,
    /// Comma-separated r_i.
    #[arg(long, value_parser = parse_list)]
    pub r: ::std::vec::Vec<i64>,
}

#[derive(Args, Serialize)]
pub struct TypeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub cover: CoverArgs,
    #[arg(long)]
    pub r0: u32,
    #[arg(long)]
    pub l0: u32,
    #[arg(long)]
    pub t: u32,
    /// When given, l0 | m0 | r0 is enforced.
    #[arg(long)]
    pub m0: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub f: u32,
}

#[derive(Args, Serialize)]
pub struct GreenArgs {
    /// Residue field size of E.
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m0: u32,
    #[arg(long)]
    pub n: u64,
    /// Exponent of the character with respect to a fixed generator of the dual.
    #[arg(long)]
    pub xi: u64,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FlavorArg {
    Finite,
    Affine,
    Twisted,
}

#[derive(Args, Serialize, Clone)]
pub struct AlgebraArgs {
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    /// Defaults to affine for s = 1 and twisted otherwise.
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
}

#[derive(Args, Serialize)]
pub struct HeckeMulArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub alg: AlgebraArgs,
    /// Word such as `s1*pi^-1*zeta`.
    #[arg(long, allow_hyphen_values = true)]
    pub lhs: String,
    #[arg(long, allow_hyphen_values = true)]
    pub rhs: String,
}

#[derive(Args, Serialize)]
pub struct InduceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub alg: AlgebraArgs,
    /// Values x_1, …, x_t as rational functions of v, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<String>,
    /// Value of Z, with Z^s = x_1 ⋯ x_t (twisted algebra only).
    #[arg(long, allow_hyphen_values = true)]
    pub zval: Option<String>,
    /// Specialize `v`, e.g. `v=2`, and analyse the rational module.
    #[arg(long, allow_hyphen_values = true)]
    pub specialize: Option<String>,
}

#[derive(Args, Serialize)]
pub struct ReducibilityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: TypeArgs,
    /// Value of v used for the witness modules.
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    pub v: String,
}

#[derive(Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 12)]
    pub n_max: u32,
    #[arg(long, default_value_t = 3)]
    pub t_max: u32,
    #[arg(long, default_value_t = 4)]
    pub r0_max: u32,
}

/// JSON input of `commutator --input`.
#[derive(serde::Deserialize, Serialize)]
pub struct TorusInput {
    pub u: Vec<TorusBlockJson>,
    pub v: Vec<TorusBlockJson>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let result = commands::run(&cli.command, cli.seed).and_then(|doc| emit(&doc, cli.compact, cli.output.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let doc = error_document(name, &err);
            // errors go to stdout as well so that callers always get JSON back
            let _ = emit(&doc, cli.compact, None);
            ExitCode::from(err.exit_code())
        }
    }
}
