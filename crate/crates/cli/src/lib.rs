//! Command-line front end: argument parsing, bundled data lookup and result
//! emission.

pub mod args;
pub mod record;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use crystalft::complex::{foliate, toric_code, ChainComplex, ComplexError, CssCode};
use crystalft::decode::{
    decoder_graph, estimate_threshold, linspace, simulate, sweep, DecodeError, FitOptions, NoiseParams, Regime,
    SweepError, ThresholdFit, WeightScheme,
};
use crystalft::delaney::{
    count_candidates, enumerate_candidates, known, Boundary, DelaneySymbol, EnumerationError, SymbolError,
};
use crystalft::lattice::{bundled_cell, bundled_names, list_lattices, CellStats, LatticeError, UnitCell};
use serde::Serialize;

use args::{Cli, Command, ComplexCommand, LatticeCommand, SimulateArgs, SymbolCommand, ThresholdArgs};
use record::{emit_results, Format, RecordError, ResultRecord};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("'{0}' is neither a file nor a bundled name")]
    NotFound(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error("threshold fit failed: {0}")]
    Fit(DecodeError),
    #[error("thread pool: {0}")]
    Threads(String),
    #[error("rate range is empty: pmin = {0}, pmax = {1}")]
    Range(f64, f64),
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Lattice(e) => CliError::Lattice(e),
            SweepError::Decode(e) => CliError::Decode(e),
        }
    }
}

/// Parses `argv` and runs the command. Returns the process exit code:
/// 0 on success, 1 on a domain error and 2 on a usage error.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Threads(e.to_string()))?;
    }
    match cli.command {
        Command::Symbol(c) => symbol(c),
        Command::Complex(c) => complex(c),
        Command::Lattice(c) => lattice(c),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Threshold(a) => threshold_cmd(a),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_text(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            let mut o = io::stdout().lock();
            o.write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn bundled_symbol(name: &str) -> Option<DelaneySymbol> {
    match name {
        "cubic" => Some(known::cubic()),
        "square" => Some(known::square()),
        "icosahedral" => Some(known::icosahedral()),
        "truncated_square" | "4.8.8" => Some(known::truncated_square()),
        _ => None,
    }
}

/// Reads a symbol from a file, falling back to the bundled symbol named by
/// the file stem (`cubic.dsym` → `cubic`).
pub fn load_symbol(arg: &str) -> Result<DelaneySymbol, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(read(path)?.parse()?);
    }
    let stem = path
        .file_name()
        .and_then(|f| f.to_str())
        .map(|f| f.strip_suffix(".dsym").unwrap_or(f))
        .unwrap_or(arg);
    bundled_symbol(stem).ok_or_else(|| CliError::NotFound(arg.to_string()))
}

/// A bundled cell by name, otherwise a unit-cell JSON file.
pub fn load_cell(arg: &str) -> Result<UnitCell, CliError> {
    if bundled_names().contains(&arg) {
        return Ok(bundled_cell(arg)?);
    }
    let path = Path::new(arg);
    if path.is_file() {
        let cell = UnitCell::from_json(&read(path)?)?;
        cell.validate()?;
        return Ok(cell);
    }
    Err(CliError::NotFound(arg.to_string()))
}

fn load_code(arg: &str) -> Result<CssCode, CliError> {
    if arg == "422" {
        return Ok(CssCode::four_two_two());
    }
    if let Some(l) = arg.strip_prefix("toric:").and_then(|l| l.parse::<usize>().ok()) {
        if l >= 2 {
            return Ok(toric_code(l));
        }
    }
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(CssCode::new(ChainComplex::from_json(&read(path)?)?)?);
    }
    Err(CliError::NotFound(arg.to_string()))
}

fn symbol(cmd: SymbolCommand) -> Result<(), CliError> {
    match cmd {
        SymbolCommand::Validate { symbol } => {
            let s = load_symbol(&symbol)?;
            s.validate()?;
            println!("valid: d={} size={}", s.dim(), s.size());
            if s.dim() == 2 {
                println!("euclidean: {}", s.euler_flat_2d()?);
            }
        }
        SymbolCommand::Dual { symbol } => {
            let s = load_symbol(&symbol)?;
            s.validate()?;
            print!("{}", s.dual());
        }
        SymbolCommand::Selfdual { symbol } => {
            let s = load_symbol(&symbol)?;
            s.validate()?;
            match s.self_duality() {
                Some(map) => {
                    let m: Vec<String> = map.iter().map(|x| x.to_string()).collect();
                    println!("self-dual: yes");
                    println!("map: [{}]", m.join(" "));
                }
                None => println!("self-dual: no"),
            }
        }
        SymbolCommand::Enumerate { n, k, boundary, count_only, symbols, limit } => {
            let boundary: Boundary = boundary.parse()?;
            if count_only {
                println!("{}", count_candidates(n, k, boundary)?);
                return Ok(());
            }
            let mut out = io::stdout().lock();
            let mut emitted = 0usize;
            for c in enumerate_candidates(n, k, boundary)?.take(limit.unwrap_or(usize::MAX)) {
                let res = if symbols {
                    writeln!(out, "{}", c.symbol)
                } else {
                    let m: Vec<String> = c.m12.iter().map(|x| x.to_string()).collect();
                    writeln!(out, "m12: [{}]", m.join(" "))
                };
                res.map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
                emitted += 1;
            }
            eprintln!("{emitted} candidates");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ComplexSummary {
    length: usize,
    dims: Vec<usize>,
    betti: Vec<usize>,
}

fn summary(c: &ChainComplex) -> ComplexSummary {
    ComplexSummary { length: c.length(), dims: c.dims().to_vec(), betti: c.betti() }
}

fn complex(cmd: ComplexCommand) -> Result<(), CliError> {
    match cmd {
        ComplexCommand::Check { file } => {
            let c = ChainComplex::from_json(&read(&file)?)?;
            c.validate()?;
            println!("{}", serde_json::to_string(&summary(&c)).expect("serialisable"));
        }
        ComplexCommand::Foliate { code, layers, out } => {
            let code = load_code(&code)?;
            let f = foliate(&code, layers)?;
            eprintln!("{}", serde_json::to_string(&summary(&f)).expect("serialisable"));
            write_text(&format!("{}\n", f.to_json()), out.as_deref())?;
        }
    }
    Ok(())
}

/// Average degree with at most three decimals and no trailing zeros.
fn degree(x: f64) -> String {
    let s = format!("{x:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `name decoder-degree graph-state-degree`.
pub fn lattice_row(s: &CellStats) -> String {
    format!("{} {} {}", s.name, degree(s.decoder_degree), degree(s.graph_state_degree))
}

fn lattice(cmd: LatticeCommand) -> Result<(), CliError> {
    match cmd {
        LatticeCommand::Build { name, l, out } => {
            let cell = load_cell(&name)?;
            let g = decoder_graph(&cell, l)?;
            eprintln!(
                "{}: {} vertices, {} plain edges, {} augmented edges",
                g.lattice,
                g.num_vertices,
                g.num_plain,
                g.num_augmented()
            );
            write_text(&format!("{}\n", serde_json::to_string(&g).expect("serialisable")), out.as_deref())?;
        }
        LatticeCommand::Stats { name } => {
            let s = load_cell(&name)?.stats();
            println!("name: {}", s.name);
            println!("vertices: {}", s.vertices);
            println!("edges: {}", s.edges);
            println!("faces: {}", s.faces);
            println!("decoder_degree: {}", degree(s.decoder_degree));
            println!("graph_state_degree: {}", degree(s.graph_state_degree));
        }
        LatticeCommand::List => {
            for s in list_lattices() {
                println!("{}", lattice_row(&s));
            }
        }
    }
    Ok(())
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn simulate_cmd(a: SimulateArgs) -> Result<(), CliError> {
    let noise = match (&a.regime, a.p) {
        (Some(r), Some(p)) => r.parse::<Regime>()?.params(p)?,
        _ => NoiseParams::new(a.pz.unwrap_or(0.0), a.px.unwrap_or(0.0), a.pm.unwrap_or(0.0))?,
    };
    let scheme: WeightScheme = a.weights.parse()?;
    let cell = load_cell(&a.lattice)?;
    let stamp = timestamp();
    let mut records = Vec::with_capacity(a.l.len());
    for &l in &a.l {
        let graph = decoder_graph(&cell, l)?;
        let stats = simulate(&graph, &noise, scheme, a.trials, a.seed)?;
        eprintln!("L={l}: {} / {} failures", stats.failures, stats.trials);
        records.push(ResultRecord::new(&cell.name, l, &noise, &stats, a.seed, &stamp));
    }
    emit_results(&records, a.format, a.out.as_deref())?;
    Ok(())
}

#[derive(Serialize)]
struct ThresholdReport<'a> {
    lattice: &'a str,
    regime: String,
    #[serde(rename = "Ls")]
    ls: &'a [usize],
    rates: &'a [f64],
    trials: u64,
    seed: u64,
    version: &'static str,
    p_th: Option<f64>,
    fit: Option<ThresholdFit>,
    error: Option<String>,
    points: &'a [ResultRecord],
}

fn threshold_cmd(a: ThresholdArgs) -> Result<(), CliError> {
    let regime: Regime = a.regime.parse()?;
    let scheme: WeightScheme = a.weights.parse()?;
    if !(a.pmin <= a.pmax) {
        return Err(CliError::Range(a.pmin, a.pmax));
    }
    let cell = load_cell(&a.lattice)?;
    let rates = linspace(a.pmin, a.pmax, a.points);
    let stamp = timestamp();
    let mut points = Vec::new();
    for &l in &a.ls {
        for sp in sweep(&cell, regime, &[l], &rates, a.trials, a.seed, scheme)? {
            eprintln!("L={} p={:.5}: {} / {} failures", l, sp.noise.total(), sp.stats.failures, sp.stats.trials);
            points.push(sp);
        }
    }
    let curve: Vec<_> = points.iter().map(|p| p.curve_point()).collect();
    let fit = estimate_threshold(&curve, FitOptions { bootstrap: a.bootstrap, seed: a.seed });
    let records: Vec<ResultRecord> = points
        .iter()
        .map(|p| ResultRecord::new(&cell.name, p.l, &p.noise, &p.stats, p.seed, &stamp))
        .collect();
    let report = ThresholdReport {
        lattice: &cell.name,
        regime: regime.to_string(),
        ls: &a.ls,
        rates: &rates,
        trials: a.trials,
        seed: a.seed,
        version: env!("CARGO_PKG_VERSION"),
        p_th: fit.as_ref().ok().map(|f| f.p_th),
        fit: fit.as_ref().ok().cloned(),
        error: fit.as_ref().err().map(|e| e.to_string()),
        points: &records,
    };
    let json = serde_json::to_string_pretty(&report).expect("serialisable");
    write_text(&format!("{json}\n"), a.out.as_deref())?;
    if let Some(p) = &a.csv {
        emit_results(&records, Format::Csv, Some(p))?;
    }
    match fit {
        Ok(f) => {
            eprintln!("p_th = {:.5} ± {:.5}, nu = {:.3}", f.p_th, f.p_th_std, f.nu);
            Ok(())
        }
        Err(e) => Err(CliError::Fit(e)),
    }
}
