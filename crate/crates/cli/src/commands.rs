//! Command line definition and dispatch.
//!
//! Every command reads its inputs from files and writes its result to `-o`
//! (or standard output); diagnostics go to standard error. Exit codes: 0 on
//! success, 1 when an input fails validation or a check disagrees, 2 on a
//! malformed file or IO error, 3 when a census hits its node cap.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use causal_core::causal::{
    glue_for_subadditivity, lemma3_slice, prism_slice, stack_slices, stack_with_found_isos, validate_slice, BuildError,
    StackError,
};
use causal_core::census::{count_fixed_boundaries, estimate_beta, BetaError, CensusConfig, FixedTable, Strategy};
use causal_core::midsection::{
    dual_graph, euler_identity_check, midsection, reassemble_4d, subdivide_4d, DualError, ReassembleError, SubdivideError,
};
use causal_core::reconstruct::{reconstruct, roundtrip_certify, ReconstructError};
use causal_core::{fixtures, CausalSlice, CausalTriangulation, Colour, SliceError};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::census::{beta_csv, check_golden, golden_path, read_counts, run_census, table_csv, Golden};
use crate::format::{
    parse_complex, parse_edge_coloured, parse_midsection, parse_triangulation, write_complex, write_edge_coloured,
    write_midsection, write_triangulation, FormatError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Stack(#[from] StackError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error(transparent)]
    Subdivide(#[from] SubdivideError),
    #[error(transparent)]
    Reassemble(#[from] ReassembleError),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error(transparent)]
    Beta(#[from] BetaError),
    /// A computed check disagreed (round trip, strategies, golden file).
    #[error("{0}")]
    Check(String),
    #[error("node cap reached: {0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Format { .. } => 2,
            CliError::Cap(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "causal", version, about = "Causal slices, midsections and small-volume censuses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Direct,
    Midsection,
    Both,
}

impl StrategyArg {
    fn strategies(self) -> &'static [Strategy] {
        match self {
            StrategyArg::Direct => &[Strategy::Direct],
            StrategyArg::Midsection => &[Strategy::Midsection],
            StrategyArg::Both => &[Strategy::Direct, Strategy::Midsection],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a complex is a causal slice, or a file of stacked slices a
    /// causal triangulation.
    Validate {
        input: PathBuf,
        /// Also require both boundary components to be 2-spheres.
        #[arg(long)]
        sphere: bool,
    },
    /// Staircase prism over a closed surface (or 3-manifold).
    BuildPrism {
        base: PathBuf,
        /// Comma-separated vertex order used to orient the staircase.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<u32>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Slice from a sphere with a degree-3 vertex to the tetrahedron boundary.
    BuildLemma3 {
        sigma: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Stacks slices bottom to top, finding the interface maps.
    Stack {
        #[arg(required = true)]
        slices: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Glues `T2 · T0 · T1` as in the subadditivity argument.
    Glue {
        t1: PathBuf,
        t0: PathBuf,
        t2: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Midsection of a slice.
    Midsection {
        slice: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Slice whose midsection is the given cell complex.
    Reconstruct {
        midsection: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compares a slice with the reconstruction of its midsection.
    Roundtrip { slice: PathBuf },
    /// Splits the prisms of a 3-dimensional midsection into tetrahedra.
    Subdivide {
        midsection: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inverse of `subdivide`.
    Reassemble {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Counts slices per volume.
    Census {
        #[arg(long, env = "CAUSAL_VMAX", default_value_t = 12)]
        vmax: usize,
        #[arg(long, env = "CAUSAL_GENUS", default_value_t = 0)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Direct)]
        strategy: StrategyArg,
        /// Worker threads; the table does not depend on it.
        #[arg(long, env = "CAUSAL_JOBS")]
        jobs: Option<usize>,
        /// Directory of golden tables: written if missing, compared otherwise.
        #[arg(long, env = "CAUSAL_GOLDEN")]
        golden: Option<PathBuf>,
        /// Search-node cap per partition.
        #[arg(long, env = "CAUSAL_MAX_NODES")]
        max_nodes: Option<u64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        format: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lower-bound sequence for the growth constant.
    ///
    /// Reads `V,count` rows from `--input`, or else counts triangulations
    /// between two tetrahedron boundaries from a slice census.
    Beta {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Reference volume subtracted from each `V`.
        #[arg(long, default_value_t = 12)]
        v0: usize,
        /// Largest triangulation volume when counting.
        #[arg(long, default_value_t = 24)]
        vmax: usize,
        /// Largest slice volume of the census used when counting.
        #[arg(long, default_value_t = 12)]
        slice_vmax: usize,
        #[arg(long, env = "CAUSAL_JOBS")]
        jobs: Option<usize>,
        /// Also write the triangulation counts as `V,count,exact`.
        #[arg(long)]
        counts: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        format: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Euler characteristics and counting identities of a slice's midsection.
    Chi {
        slice: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        format: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Writes the built-in fixtures into a directory.
    Fixtures { dir: PathBuf },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

fn emit(output: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => write_file(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn parsed<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Format { path: path.into(), source })
}

fn load_slice(path: &Path) -> Result<CausalSlice, CliError> {
    Ok(validate_slice(&parsed(path, parse_complex)?, false)?)
}

/// A single slice file is a triangulation of one slice.
fn load_triangulation(path: &Path) -> Result<CausalTriangulation, CliError> {
    let raw = parsed(path, parse_triangulation)?;
    let slices = raw
        .slices
        .iter()
        .map(|k| validate_slice(k, false))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(stack_slices(slices, &raw.interfaces)?)
}

fn describe(slice: &CausalSlice) -> String {
    let kind = if slice.generalized() { "generalized causal slice" } else { "causal slice" };
    match slice.genus() {
        Some(g) => format!("valid {kind}, V={}, genus {g}", slice.volume()),
        None => format!("valid {kind}, V={}, D={}", slice.volume(), slice.dim()),
    }
}

fn jobs_or_default(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn diag(stderr: &mut dyn Write, line: impl AsRef<str>) {
    // diagnostics are best effort
    let _ = writeln!(stderr, "{}", line.as_ref());
}

/// Runs one command. The caller maps errors to exit codes.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { input, sphere } => {
            let raw = parsed(&input, parse_triangulation)?;
            let slices = raw
                .slices
                .iter()
                .map(|k| validate_slice(k, sphere))
                .collect::<Result<Vec<_>, _>>()?;
            let report = if slices.len() == 1 {
                describe(&slices[0])
            } else {
                let t = stack_slices(slices, &raw.interfaces)?;
                format!("valid causal triangulation, {} slices, V={}", t.len(), t.volume())
            };
            emit(None, &format!("{report}\n"), stdout)
        }
        Command::BuildPrism { base, order, output } => {
            let base = parsed(&base, parse_complex)?;
            let slice = prism_slice(&base, order.as_deref())?;
            diag(stderr, describe(&slice));
            emit(output.as_deref(), &write_complex(slice.complex()), stdout)
        }
        Command::BuildLemma3 { sigma, output } => {
            let slice = lemma3_slice(&parsed(&sigma, parse_complex)?)?;
            diag(stderr, describe(&slice));
            emit(output.as_deref(), &write_complex(slice.complex()), stdout)
        }
        Command::Stack { slices, output } => {
            let slices = slices.iter().map(|p| load_slice(p)).collect::<Result<Vec<_>, _>>()?;
            let t = stack_with_found_isos(slices)?;
            diag(stderr, format!("{} slices, V={}", t.len(), t.volume()));
            emit(output.as_deref(), &write_triangulation(&t), stdout)
        }
        Command::Glue { t1, t0, t2, output } => {
            let (t1, t0, t2) = (load_triangulation(&t1)?, load_triangulation(&t0)?, load_triangulation(&t2)?);
            let g = glue_for_subadditivity(&t1, &t0, &t2, None)?;
            diag(
                stderr,
                format!("V={} = {} + {} + {}", g.triangulation.volume(), t1.volume(), t0.volume(), t2.volume()),
            );
            emit(output.as_deref(), &write_triangulation(&g.triangulation), stdout)
        }
        Command::Midsection { slice, output } => {
            let s = midsection(&load_slice(&slice)?);
            emit(output.as_deref(), &write_midsection(&s), stdout)
        }
        Command::Reconstruct { midsection, output } => {
            let s = parsed(&midsection, parse_midsection)?;
            let slice = reconstruct(&s)?;
            diag(stderr, describe(&slice));
            emit(output.as_deref(), &write_complex(slice.complex()), stdout)
        }
        Command::Roundtrip { slice } => {
            let cert = roundtrip_certify(&load_slice(&slice)?)?;
            let verdict = if cert.equal() { "equal" } else { "differs" };
            let record = format!(
                "roundtrip v1\noriginal {:016x}\nreconstructed {:016x}\nverdict {verdict}\n",
                cert.original.digest(),
                cert.reconstructed.digest()
            );
            emit(None, &record, stdout)?;
            if !cert.equal() {
                return Err(CliError::Check("reconstruction is not isomorphic to the input".into()));
            }
            Ok(())
        }
        Command::Subdivide { midsection, output } => {
            let sub = subdivide_4d(&parsed(&midsection, parse_midsection)?)?;
            diag(stderr, format!("{} tetrahedra", sub.tets().len()));
            emit(output.as_deref(), &write_edge_coloured(&sub), stdout)
        }
        Command::Reassemble { input, output } => {
            let s = reassemble_4d(&parsed(&input, parse_edge_coloured)?)?;
            emit(output.as_deref(), &write_midsection(&s), stdout)
        }
        Command::Census {
            vmax,
            genus,
            strategy,
            jobs,
            golden,
            max_nodes,
            format: ReportFormat::Csv,
            output,
        } => census(vmax, genus, strategy, jobs_or_default(jobs), golden, max_nodes, output, stdout, stderr),
        Command::Beta {
            input,
            v0,
            vmax,
            slice_vmax,
            jobs,
            counts,
            format: ReportFormat::Csv,
            output,
        } => {
            let table = match input {
                Some(path) => parsed(&path, |t| {
                    read_counts(t).map_err(|message| FormatError::Syntax { line: 0, message })
                })?,
                None => {
                    let fixed = sigma_t_table(slice_vmax, vmax, jobs_or_default(jobs));
                    if let Some(path) = counts {
                        write_file(&path, &fixed_csv(&fixed))?;
                    }
                    fixed.counts()
                }
            };
            let estimate = estimate_beta(&table, v0)?;
            diag(stderr, format!("lower bound for the growth constant: {:.6}", estimate.lower_bound()));
            emit(output.as_deref(), &beta_csv(&estimate), stdout)
        }
        Command::Chi {
            slice,
            format: ReportFormat::Csv,
            output,
        } => emit(output.as_deref(), &chi_csv(&load_slice(&slice)?)?, stdout),
        Command::Fixtures { dir } => {
            fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
            for (name, text) in fixture_files() {
                write_file(&dir.join(name), &text)?;
            }
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn census(
    vmax: usize,
    genus: u32,
    strategy: StrategyArg,
    jobs: usize,
    golden: Option<PathBuf>,
    max_nodes: Option<u64>,
    output: Option<PathBuf>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let config = CensusConfig { vmax, genus, max_nodes };
    let tables: Vec<_> = strategy.strategies().iter().map(|&s| run_census(s, config, jobs)).collect();
    let report = tables.iter().map(table_csv).collect::<Vec<_>>().join("\n");
    emit(output.as_deref(), &report, stdout)?;
    for t in &tables {
        let s = &t.stats;
        diag(
            stderr,
            format!(
                "{}: {} classes, {} nodes, {} leaves, {} filtered ({} obstructions)",
                t.strategy,
                t.total(),
                s.nodes,
                s.leaves,
                s.rejected.filtered(),
                s.rejected.obstruction
            ),
        );
    }
    if let Some(t) = tables.iter().find(|t| !t.complete) {
        return Err(CliError::Cap(format!("{} table is partial", t.strategy)));
    }
    if let [a, b] = tables.as_slice() {
        if !a.same_classes(b) {
            return Err(CliError::Check("direct and midsection tables differ".into()));
        }
    }
    if let Some(dir) = golden {
        for t in &tables {
            let path = golden_path(&dir, t.strategy, genus, vmax);
            match check_golden(&path, &table_csv(t)).map_err(|source| CliError::Io { path: path.clone(), source })? {
                Golden::Written(p) => diag(stderr, format!("wrote golden table {}", p.display())),
                Golden::Matched(p) => diag(stderr, format!("matches golden table {}", p.display())),
                Golden::Differs(p) => return Err(CliError::Check(format!("differs from golden table {}", p.display()))),
            }
        }
    }
    Ok(())
}

/// Triangulations between two tetrahedron boundaries, composed from the
/// slice census up to `slice_vmax`.
pub fn sigma_t_table(slice_vmax: usize, vmax: usize, jobs: usize) -> FixedTable {
    let census = run_census(Strategy::Direct, CensusConfig::new(slice_vmax, 0), jobs);
    let s = fixtures::sigma_t();
    count_fixed_boundaries(&census, &s, &s, vmax)
}

/// `V,count,exact`; counts beyond the census volume are lower bounds.
pub fn fixed_csv(table: &FixedTable) -> String {
    let mut out = String::from("V,count,exact\n");
    for (v, n) in table.counts() {
        out.push_str(&format!("{v},{n},{}\n", table.is_exact(v)));
    }
    out
}

/// `quantity,value` rows for the Euler identity and counting identities.
pub fn chi_csv(slice: &CausalSlice) -> Result<String, CliError> {
    let euler = euler_identity_check(slice)?;
    let s = midsection(slice);
    let red = dual_graph(&s, Colour::Red)?;
    let rows: Vec<(&str, String)> = vec![
        ("volume", slice.volume().to_string()),
        ("cells", s.cells().len().to_string()),
        ("chi_red_boundary", euler.red_boundary.to_string()),
        ("chi_blue_boundary", euler.blue_boundary.to_string()),
        ("chi_midsection", euler.direct.to_string()),
        ("chi_dual_red", euler.dual_red.to_string()),
        ("chi_dual_blue", euler.dual_blue.to_string()),
        ("red_triangles", red.triangles.to_string()),
        ("quadrangles", red.quadrangles.to_string()),
        ("dual_red_vertices", red.vertices.to_string()),
        ("dual_red_edges", red.edges.to_string()),
        ("dual_red_faces", red.faces.to_string()),
        ("red_boundary_vertices", slice.red_boundary().vertex_count().to_string()),
        ("dual_red_connected", red.connected.to_string()),
        ("dual_red_degrees_2_or_3", red.degrees_ok().to_string()),
        ("euler_identity", euler.holds().to_string()),
    ];
    let mut out = String::from("quantity,value\n");
    for (q, v) in rows {
        out.push_str(&format!("{q},{v}\n"));
    }
    Ok(out)
}

/// The built-in corpus: base surfaces, the slices built over them and the
/// obstructed midsection.
pub fn fixture_files() -> Vec<(&'static str, String)> {
    let sigma_t = fixtures::sigma_t();
    let torus = fixtures::torus7();
    let d4 = fixtures::boundary_4simplex();
    let prism = |b| prism_slice(b, None).expect("fixture bases are closed manifolds");
    let d4_prism = prism(&d4);
    vec![
        ("sigma_t.cmplx", write_complex(&sigma_t)),
        ("octahedron.cmplx", write_complex(&fixtures::octahedron())),
        ("torus7.cmplx", write_complex(&torus)),
        ("boundary_4simplex.cmplx", write_complex(&d4)),
        ("prism_sigma_t.cmplx", write_complex(prism(&sigma_t).complex())),
        ("prism_torus7.cmplx", write_complex(prism(&torus).complex())),
        (
            "lemma3_sigma_t.cmplx",
            write_complex(lemma3_slice(&sigma_t).expect("tetrahedron boundary has degree 3").complex()),
        ),
        ("prism_boundary_4simplex.cmplx", write_complex(d4_prism.complex())),
        ("prism_boundary_4simplex.msec", write_midsection(&midsection(&d4_prism))),
        ("fig4.msec", write_midsection(&fixtures::fig4())),
    ]
}
