use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lintomo_core::bench::{bench_direction_doubling, bench_linearity, BenchReport};
use lintomo_core::geometry::stream_trace;
use lintomo_core::io;
use lintomo_core::value::rational_to_f64;
use lintomo_core::{
    build_plan, free_block, generate_instance, is_valid, primitive_ghost, project, reconstruct_with,
    solve_exact, switching_domain_map, unique_points, validate_directions, verify_residuals, DirSpec, DirectionSet,
    Grid, GridImage, LineSumTable, OracleSolution, Rational, ReconstructOptions, Side, TomoError, TomographySystem,
    Value, ValueMode,
};

#[derive(Parser)]
#[command(name = "lintomo", version, about = "Reconstruct grid images from lattice line sums")]
struct Cli {
    /// Use exact rational arithmetic (default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Use f64 arithmetic.
    #[arg(long, global = true)]
    float: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the line sums of an image.
    Project {
        #[arg(long)]
        image: PathBuf,
        #[command(flatten)]
        dirs: DirsArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct an image from line sums.
    Reconstruct {
        #[arg(long)]
        sums: PathBuf,
        /// JSON object {"p,q": value} of values on the free-choice block.
        #[arg(long)]
        free_values: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Print every assignment (p,q,direction,value) to stderr.
        #[arg(long)]
        trace: bool,
        /// Order starting points by streaming instead of sorting.
        #[arg(long)]
        stream: bool,
    },
    /// Describe the ghosts of a direction set on a grid.
    Ghost {
        #[command(flatten)]
        grid: GridArg,
        #[command(flatten)]
        dirs: DirsArg,
        /// Write the switching-domain mask as PBM.
        #[arg(long)]
        domain_map: Option<PathBuf>,
    },
    /// Show border points, starting points, weights and the traversal order.
    Plan {
        #[command(flatten)]
        grid: GridArg,
        #[command(flatten)]
        dirs: DirsArg,
        #[arg(long, value_enum, default_value = "columns")]
        side: PlanSide,
        /// Include the streaming vectors.
        #[arg(long)]
        stream: bool,
        /// Write the plan JSON here instead of stdout.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Solve the line-sum system by exact elimination.
    Oracle {
        #[arg(long)]
        sums: PathBuf,
        /// Print a JSON report including the uniqueness mask.
        #[arg(long)]
        report: bool,
        /// Write the uniqueness mask as PBM (1 = unique).
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Check that an image has the given line sums.
    Verify {
        #[arg(long)]
        sums: PathBuf,
        #[arg(long)]
        image: PathBuf,
    },
    /// Operation-count scaling runs.
    Bench {
        #[arg(long, default_value_t = 64)]
        base_m: usize,
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value = "1,1;1,-1;2,1")]
        dirs: String,
        #[arg(long, default_value_t = 4)]
        doublings: usize,
        /// Vary the number of directions on a fixed base_m x n grid instead of m.
        #[arg(long)]
        sweep_d: bool,
        /// Direction counts for --sweep-d (prefixes of --dirs).
        #[arg(long, default_value = "3,4,5,6,7,8")]
        counts: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "1.6,2.6")]
        band: String,
        #[arg(long)]
        stream: bool,
        #[arg(long, value_enum, default_value = "json")]
        report: ReportFormat,
    },
    /// Generate a random image and its line sums.
    Generate {
        #[command(flatten)]
        grid: GridArg,
        /// Directions (file or inline); random when absent.
        #[arg(long)]
        dirs: Option<String>,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_component: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random fractions instead of integers.
        #[arg(long)]
        rational: bool,
        #[arg(long)]
        image_out: Option<PathBuf>,
        #[arg(long)]
        sums_out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args)]
struct GridArg {
    /// Grid size as m,n.
    #[arg(long)]
    grid: String,
}

#[derive(Args)]
struct DirsArg {
    /// Directions: a file, or inline such as "1,1;2,-1".
    #[arg(long)]
    dirs: String,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Pgm,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanSide {
    Columns,
    Rows,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

/// Exit status for a failed run.
enum Failure {
    Inconsistent(anyhow::Error),
    Invalid(anyhow::Error),
    Other(anyhow::Error),
}

fn classify(err: anyhow::Error) -> Failure {
    if let Some(e) = err.downcast_ref::<TomoError>() {
        return match e {
            TomoError::InconsistentInput(_) | TomoError::InconsistentLineSums => Failure::Inconsistent(err),
            _ => Failure::Invalid(err),
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() || err.downcast_ref::<ArgError>().is_some() {
        return Failure::Invalid(err);
    }
    Failure::Other(err)
}

#[derive(Debug)]
struct ArgError(String);

impl std::error::Error for ArgError {}

impl std::fmt::Display for ArgError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn arg_error(msg: impl Into<String>) -> anyhow::Error {
    ArgError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let (code, err) = match classify(err) {
                Failure::Inconsistent(e) => (2, e),
                Failure::Invalid(e) => (3, e),
                Failure::Other(e) => (1, e),
            };
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let float = cli.float;
    match cli.command {
        Command::Project { image, dirs, out } => {
            let ds = read_dirs(&dirs.dirs)?;
            let text = if float { project_cmd::<f64>(&image, &ds)? } else { project_cmd::<Rational>(&image, &ds)? };
            emit(out.as_deref(), text.as_bytes())
        }
        Command::Reconstruct { sums, free_values, out, format, trace, stream } => {
            let opts = ReconstructOptions { trace, use_stream_order: stream, ..Default::default() };
            let fmt = format.or_else(|| out.as_deref().and_then(format_from_ext)).unwrap_or(Format::Csv);
            if float {
                reconstruct_cmd::<f64>(&sums, free_values.as_deref(), out.as_deref(), fmt, opts)
            } else {
                reconstruct_cmd::<Rational>(&sums, free_values.as_deref(), out.as_deref(), fmt, opts)
            }
        }
        Command::Ghost { grid, dirs, domain_map } => {
            let grid = parse_grid(&grid.grid)?;
            let ds = read_dirs(&dirs.dirs)?;
            ghost_cmd(grid, &ds, domain_map.as_deref())
        }
        Command::Plan { grid, dirs, side, stream, dump } => {
            let grid = parse_grid(&grid.grid)?;
            let ds = read_dirs(&dirs.dirs)?;
            let side = match side {
                PlanSide::Columns => Side::Columns,
                PlanSide::Rows => Side::Rows,
            };
            let plan = build_plan(grid, &ds, side);
            let mut doc = serde_json::to_value(plan.dump())?;
            if stream {
                let t = stream_trace(&plan);
                doc["stream"] = serde_json::json!({
                    "initial": t.initial,
                    "rows": t.rows,
                    "order": t.order.iter().map(|o| [o.point.0, o.point.1]).collect::<Vec<_>>(),
                });
            }
            emit(dump.as_deref(), serde_json::to_string_pretty(&doc)?.as_bytes())
        }
        Command::Oracle { sums, report, mask } => oracle_cmd(&sums, report, mask.as_deref()),
        Command::Verify { sums, image } => {
            if float {
                verify_cmd::<f64>(&sums, &image)
            } else {
                verify_cmd::<Rational>(&sums, &image)
            }
        }
        Command::Bench { base_m, n, dirs, doublings, sweep_d, counts, seed, band, stream, report } => {
            let band = parse_pair::<f64>(&band, "band")?;
            let raw = read_dir_list(&dirs)?;
            let rep = if sweep_d {
                let counts: Vec<usize> = counts
                    .split(',')
                    .map(|c| c.trim().parse().map_err(|_| arg_error(format!("bad count {c:?}"))))
                    .collect::<Result<_>>()?;
                if counts.iter().any(|&c| c == 0 || c > raw.len()) {
                    return Err(arg_error(format!("counts must lie in 1..={}", raw.len())));
                }
                bench_direction_doubling(Grid::new(base_m, n)?, &raw, &counts, seed, band)?
            } else {
                bench_linearity(base_m, n, &validate_directions(&raw)?, doublings, seed, band, stream)?
            };
            print_report(&rep, report)?;
            Ok(if rep.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Generate { grid, dirs, count, max_component, seed, rational, image_out, sums_out, format } => {
            let grid = parse_grid(&grid.grid)?;
            let spec = match dirs {
                Some(d) => DirSpec::Explicit(read_dir_list(&d)?),
                None => DirSpec::Random { count, max_component },
            };
            let mode = if rational { ValueMode::Rational } else { ValueMode::Integer };
            let inst = generate_instance(grid.m(), grid.n(), &spec, mode, seed)?;
            let fmt = format.or_else(|| image_out.as_deref().and_then(format_from_ext)).unwrap_or(Format::Csv);
            if float {
                let f = inst.f.map(rational_to_f64);
                write_image(image_out.as_deref(), &f, fmt, |v| *v)?;
                if let Some(path) = sums_out {
                    fs::write(path, io::sums_to_json(&project(&f, &inst.dirs)))?;
                }
            } else {
                write_image(image_out.as_deref(), &inst.f, fmt, rational_to_f64)?;
                if let Some(path) = sums_out {
                    fs::write(path, io::sums_to_json(&inst.sums))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T)> {
    let (a, b) = s.split_once(',').ok_or_else(|| arg_error(format!("{what} must be given as x,y")))?;
    let parse = |x: &str| x.trim().parse::<T>().map_err(|_| arg_error(format!("bad {what} {s:?}")));
    Ok((parse(a)?, parse(b)?))
}

fn parse_grid(s: &str) -> Result<Grid> {
    let (m, n) = parse_pair::<usize>(s, "grid")?;
    Ok(Grid::new(m, n)?)
}

/// Reads a direction list from a file if `spec` names one, else parses it inline.
fn read_dir_list(spec: &str) -> Result<Vec<(i64, i64)>> {
    let text = if Path::new(spec).is_file() {
        fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
    } else {
        spec.to_string()
    };
    Ok(io::parse_directions(&text)?)
}

fn read_dirs(spec: &str) -> Result<DirectionSet> {
    Ok(validate_directions(&read_dir_list(spec)?)?)
}

fn format_from_ext(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "csv" => Some(Format::Csv),
        "json" => Some(Format::Json),
        "pgm" => Some(Format::Pgm),
        _ => None,
    }
}

fn read_image<V: Value>(path: &Path) -> Result<GridImage<V>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let img = match format_from_ext(path).unwrap_or(Format::Csv) {
        Format::Pgm => io::image_from_pgm(&bytes)?,
        Format::Json => io::image_from_json(&String::from_utf8_lossy(&bytes))?,
        Format::Csv => io::image_from_csv(&String::from_utf8_lossy(&bytes))?,
    };
    Ok(img)
}

fn write_image<V: Value>(
    path: Option<&Path>,
    img: &GridImage<V>,
    fmt: Format,
    to_f64: impl Fn(&V) -> f64,
) -> Result<()> {
    let bytes = match fmt {
        Format::Csv => io::image_to_csv(img).into_bytes(),
        Format::Json => io::image_to_json(img).into_bytes(),
        Format::Pgm => {
            let values: Vec<f64> = img.values().iter().map(to_f64).collect();
            io::image_to_pgm(img.grid(), &values)
        }
    };
    emit(path, &bytes)?;
    Ok(())
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<ExitCode> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_sums<V: Value>(path: &Path) -> Result<LineSumTable<V>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(io::sums_from_json(&text)?)
}

trait ToF64 {
    fn to_f64(&self) -> f64;
}

impl ToF64 for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl ToF64 for Rational {
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

fn project_cmd<V: Value>(image: &Path, ds: &DirectionSet) -> Result<String> {
    let img: GridImage<V> = read_image(image)?;
    Ok(io::sums_to_json(&project(&img, ds)))
}

fn reconstruct_cmd<V: Value + ToF64>(
    sums: &Path,
    free: Option<&Path>,
    out: Option<&Path>,
    fmt: Format,
    opts: ReconstructOptions,
) -> Result<ExitCode> {
    let table: LineSumTable<V> = read_sums(sums)?;
    let free: BTreeMap<(usize, usize), V> = match free {
        Some(p) => io::free_values_from_json(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => BTreeMap::new(),
    };
    let rec = reconstruct_with(&table, &free, opts)?;
    if opts.trace {
        eprintln!("p,q,direction,value");
        for e in &rec.trace {
            let dir = e.source.map_or("free".to_string(), |d| format!("({},{})", d.a(), d.b()));
            eprintln!("{},{},{},{}", e.p, e.q, dir, e.value);
        }
    }
    verify_residuals(&rec)?;
    write_image(out, &rec.image, fmt, V::to_f64)?;
    Ok(ExitCode::SUCCESS)
}

fn ghost_cmd(grid: Grid, ds: &DirectionSet, domain_map: Option<&Path>) -> Result<ExitCode> {
    let ghost = primitive_ghost(ds);
    let block = free_block(grid, ds);
    let map = switching_domain_map(grid, ds);
    let terms: Vec<[i64; 3]> = ghost.terms().map(|((i, j), c)| [i, j, c]).collect();
    let doc = serde_json::json!({
        "grid": [grid.m(), grid.n()],
        "directions": ds.directions().iter().map(|d| [d.a(), d.b()]).collect::<Vec<_>>(),
        "M": ds.horizontal_sum(),
        "N": ds.vertical_sum(),
        "valid": is_valid(grid, ds),
        "ghost_degree": [ghost.degree_x(), ghost.degree_y()],
        "ghost_terms": terms,
        "free_block": { "columns": block.width, "row_offset": block.row_offset, "rows": block.height },
        "free_dimension": block.len(),
        "domain_size": map.domain_size(),
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    if let Some(p) = domain_map {
        fs::write(p, io::mask_to_pbm(grid, &map.mask))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle_cmd(sums: &Path, report: bool, mask_out: Option<&Path>) -> Result<ExitCode> {
    let table: LineSumTable<Rational> = read_sums(sums)?;
    let grid = table.grid();
    let sol = solve_exact(&TomographySystem::from_sums(&table));
    let OracleSolution::Consistent { particular, null_basis } = sol else {
        if report {
            println!("{}", serde_json::json!({ "consistent": false }));
        } else {
            println!("inconsistent");
        }
        return Ok(ExitCode::from(2));
    };
    let mask = unique_points(grid, &null_basis);
    if report {
        let doc = serde_json::json!({
            "consistent": true,
            "null_dimension": null_basis.len(),
            "unique_points": mask.iter().filter(|&&b| b).count(),
            "mask_pbm": io::mask_to_pbm(grid, &mask),
            "particular": io::image_to_csv(&particular),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("consistent, null-space dimension {}", null_basis.len());
    }
    if let Some(p) = mask_out {
        fs::write(p, io::mask_to_pbm(grid, &mask))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd<V: Value>(sums: &Path, image: &Path) -> Result<ExitCode> {
    let table: LineSumTable<V> = read_sums(sums)?;
    let img: GridImage<V> = read_image(image)?;
    if img.grid() != table.grid() {
        return Err(arg_error("image and line sums are on different grids"));
    }
    if project(&img, table.directions()) == table {
        println!("ok");
        Ok(ExitCode::SUCCESS)
    } else {
        Err(TomoError::InconsistentLineSums.into())
    }
}

fn print_report(rep: &BenchReport, fmt: ReportFormat) -> Result<()> {
    match fmt {
        ReportFormat::Csv => print!("{}", rep.to_csv()),
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(rep)?),
    }
    for &(i, j, r) in &rep.ratios {
        eprintln!("ratio rows {i}->{j}: {r:.3}");
    }
    eprintln!("slope {:.3}, {}", rep.slope, if rep.pass { "pass" } else { "FAIL" });
    Ok(())
}
