use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use doccount::analysis::{run_experiment, ExperimentConfig};
use doccount::bench::{run_bench, table1_stats, CorpusStats, Oracle};
use doccount::container;
use doccount::corpus::{extract_patterns, generate_dna, Collection, ExtractParams, IngestOptions, PatternSet, Provenance, SyntheticSpec};
use doccount::counter::{DocumentCounter, Structure, StructureKind};
use doccount::pdl::DEFAULT_BLOCK_THRESHOLD;
use doccount::suffix::TextIndex;

/// Count the documents of a collection that contain a pattern.
///
/// The collection size cap can be raised with DCNT_MEM_BUDGET (bytes).
#[derive(Parser)]
#[command(name = "dcnt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index file holding one or more counting structures.
    Build(BuildArgs),
    /// Answer document counts for patterns against an index file.
    Count(CountArgs),
    /// Verify structures against the brute-force oracle and time them.
    Bench(BenchArgs),
    /// Generate a synthetic versioned DNA collection.
    GenDna(GenDnaArgs),
    /// Print collection and pattern statistics as CSV.
    Stats(StatsArgs),
    /// Measure runs in H' on synthetic collections against the expected-case bound.
    AnalyzeRuns(AnalyzeArgs),
    /// Sample query patterns from a collection.
    ExtractPatterns(ExtractArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// Concatenated documents split on the separator.
    #[arg(long, required_unless_present = "manifest")]
    input: Option<PathBuf>,
    /// File listing one document path per line.
    #[arg(long, conflicts_with = "input")]
    manifest: Option<PathBuf>,
    /// Document separator: one character, or \n, \t, \0, or 0xNN.
    #[arg(long, default_value = "\\0")]
    separator: String,
    /// Accept empty documents.
    #[arg(long)]
    allow_empty: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Structure to include (repeatable).
    #[arg(long = "variant", default_value = "sada")]
    variants: Vec<String>,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BLOCK_THRESHOLD)]
    block_threshold: usize,
}

#[derive(Args)]
struct CountArgs {
    /// Index file written by `build`.
    #[arg(long, alias = "input")]
    index: PathBuf,
    /// Structure to query; defaults to the first one in the file.
    #[arg(long)]
    variant: Option<String>,
    /// File with one pattern per line.
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Patterns given on the command line.
    #[arg(conflicts_with = "patterns")]
    pattern: Vec<String>,
}

#[derive(Args)]
struct PatternArgs {
    /// File with one pattern per line; sampled from the collection when absent.
    #[arg(long)]
    patterns: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pattern_length: usize,
    #[arg(long, default_value_t = 1000)]
    pattern_count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    patterns: PatternArgs,
    /// Structure to benchmark (repeatable); all structures when absent.
    #[arg(long = "variant")]
    variants: Vec<String>,
    #[arg(long, default_value_t = 10)]
    repetitions: usize,
    #[arg(long, default_value_t = DEFAULT_BLOCK_THRESHOLD)]
    block_threshold: usize,
    /// CSV report; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Size/time scatter data for plotting.
    #[arg(long)]
    dat: Option<PathBuf>,
}

#[derive(Args)]
struct GenDnaArgs {
    /// Base document length.
    #[arg(long, default_value_t = 1 << 12)]
    length: usize,
    /// Number of mutated copies.
    #[arg(long, default_value_t = 256)]
    copies: usize,
    /// Per-symbol mutation probability.
    #[arg(long, default_value_t = 0.001)]
    mutation: f64,
    #[arg(long, default_value_t = 4)]
    sigma: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output collection, documents terminated by 0x00.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    patterns: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Total collection size is 2^scale.
    #[arg(long, default_value_t = 20)]
    scale: u32,
    /// Smallest and largest document length exponents.
    #[arg(long, default_value_t = 7)]
    min_length_exp: u32,
    #[arg(long, default_value_t = 12)]
    max_length_exp: u32,
    /// Mutation rates, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.001, 0.01, 0.1, 1.0])]
    mutation: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    sigma: usize,
    /// Independent samples per cell.
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value_t = 8)]
    length: usize,
    /// Patterns to keep.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Substrings to sample before ranking.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_separator(s: &str) -> Result<u8> {
    Ok(match s {
        "\\n" => b'\n',
        "\\t" => b'\t',
        "\\0" => 0,
        _ if s.starts_with("0x") => u8::from_str_radix(&s[2..], 16).with_context(|| format!("bad separator {s}"))?,
        _ if s.len() == 1 => s.as_bytes()[0],
        _ => bail!("separator must be one byte, \\n, \\t, \\0 or 0xNN, got {s:?}"),
    })
}

fn load_collection(args: &CorpusArgs) -> Result<Collection> {
    let opts = IngestOptions {
        allow_empty: args.allow_empty,
    };
    if let Some(manifest) = &args.manifest {
        let list = fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
        let base = manifest.parent().unwrap_or(Path::new("."));
        let docs = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                let p = base.join(l);
                fs::read(&p).with_context(|| format!("reading {}", p.display()))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Collection::from_documents_with(docs, opts)?);
    }
    let input = args.input.as_ref().expect("clap requires input or manifest");
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let sep = parse_separator(&args.separator)?;
    Ok(Collection::ingest_concat(&bytes, sep, opts)?)
}

fn parse_kinds(names: &[String]) -> Result<Vec<StructureKind>> {
    Ok(names.iter().map(|n| n.parse()).collect::<doccount::Result<Vec<StructureKind>>>()?)
}

fn build_structures(idx: &TextIndex, kinds: &[StructureKind], threshold: usize) -> Result<Vec<Structure>> {
    Ok(kinds
        .iter()
        .map(|k| k.build(idx, Some(threshold)))
        .collect::<doccount::Result<_>>()?)
}

fn write_output(path: Option<&Path>, data: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, data).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().lock().write_all(data)?),
    }
}

fn read_patterns(path: &Path) -> Result<PatternSet> {
    let data = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(PatternSet::parse_lines(&data, Provenance::WordList)?)
}

fn patterns_for(idx: &TextIndex, args: &PatternArgs) -> Result<PatternSet> {
    if let Some(p) = &args.patterns {
        return read_patterns(p);
    }
    sample_patterns(idx, args.pattern_length, args.pattern_count, args.pattern_count * 4, args.seed)
}

fn sample_patterns(idx: &TextIndex, length: usize, keep: usize, samples: usize, seed: u64) -> Result<PatternSet> {
    let oracle = Oracle::new(idx);
    let params = ExtractParams {
        length,
        samples: samples.max(keep),
        keep,
        seed,
    };
    Ok(extract_patterns(idx.collection(), params, |p| {
        let r = idx.find(p).expect("sampled substrings occur");
        (r.len(), oracle.count(r).expect("valid range"))
    })?)
}

fn cmd_build(args: BuildArgs) -> Result<()> {
    let kinds = parse_kinds(&args.variants)?;
    let idx = TextIndex::build(load_collection(&args.corpus)?);
    let structures = build_structures(&idx, &kinds, args.block_threshold)?;
    fs::write(&args.output, container::to_bytes(&idx, &structures))
        .with_context(|| format!("writing {}", args.output.display()))?;
    for s in &structures {
        eprintln!("{}: {} bits ({:.4} bpc)", s.name(), s.size_in_bits(), s.size_in_bits() as f64 / idx.len() as f64);
    }
    Ok(())
}

fn cmd_count(args: CountArgs) -> Result<()> {
    let data = fs::read(&args.index).with_context(|| format!("reading {}", args.index.display()))?;
    let wanted = args.variant.as_deref().map(str::parse::<StructureKind>).transpose()?;
    let file = container::from_bytes(&data, wanted.as_ref().map(std::slice::from_ref))?;
    let Some(structure) = file.structures.first() else {
        match wanted {
            Some(k) => bail!("{} holds no {k} structure", args.index.display()),
            None => bail!("{} holds no counting structure", args.index.display()),
        }
    };
    let patterns: Vec<Vec<u8>> = match &args.patterns {
        Some(p) => read_patterns(p)?.patterns().to_vec(),
        None => args.pattern.iter().map(|p| p.as_bytes().to_vec()).collect(),
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for p in &patterns {
        let docc = match file.index.find(p) {
            Some(r) => structure.count(r, p.len())?,
            None => 0,
        };
        out.write_all(p)?;
        writeln!(out, "\t{docc}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let kinds = if args.variants.is_empty() {
        StructureKind::all()
    } else {
        parse_kinds(&args.variants)?
    };
    let idx = TextIndex::build(load_collection(&args.corpus)?);
    let patterns = patterns_for(&idx, &args.patterns)?;
    let structures = build_structures(&idx, &kinds, args.block_threshold)?;
    let report = run_bench(&idx, &structures, &patterns, args.repetitions)?;
    write_output(args.output.as_deref(), report.to_csv().as_bytes())?;
    if let Some(dat) = &args.dat {
        fs::write(dat, report.to_dat()).with_context(|| format!("writing {}", dat.display()))?;
    }
    eprintln!("{}\n{}", CorpusStats::csv_header(), report.stats.csv_row());
    Ok(())
}

fn cmd_gen_dna(args: GenDnaArgs) -> Result<()> {
    let c = generate_dna(&SyntheticSpec {
        base_length: args.length,
        copies: args.copies,
        mutation_rate: args.mutation,
        alphabet_size: args.sigma,
        seed: args.seed,
    })?;
    fs::write(&args.output, c.as_bytes()).with_context(|| format!("writing {}", args.output.display()))?;
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let idx = TextIndex::build(load_collection(&args.corpus)?);
    let patterns = match &args.patterns {
        Some(p) => read_patterns(p)?,
        None => PatternSet::new(Vec::new(), Provenance::Explicit)?,
    };
    let stats = table1_stats(&idx, &patterns);
    println!("{}\n{}", CorpusStats::csv_header(), stats.csv_row());
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    if args.scale > 30 || args.min_length_exp > args.max_length_exp || args.max_length_exp > args.scale {
        bail!("need min-length-exp <= max-length-exp <= scale <= 30");
    }
    let total = 1usize << args.scale;
    let cfg = ExperimentConfig {
        sigma: args.sigma,
        total_size: total,
        doc_lengths: (args.min_length_exp..=args.max_length_exp).map(|e| 1usize << e).collect(),
        mutation_rates: args.mutation,
        samples: args.samples,
        seed: args.seed,
        size_cap: total.max(doccount::analysis::DEFAULT_SIZE_CAP),
    };
    let report = run_experiment(&cfg)?;
    write_output(args.output.as_deref(), report.to_csv().as_bytes())?;
    if let Some(f) = report.fraction_within_bound(1.0) {
        eprintln!("p=1 cells within the expected-case bound: {:.1}%", f * 100.0);
    }
    Ok(())
}

fn cmd_extract(args: ExtractArgs) -> Result<()> {
    let idx = TextIndex::build(load_collection(&args.corpus)?);
    let samples = args.samples.unwrap_or(args.count * 4);
    let set = sample_patterns(&idx, args.length, args.count, samples, args.seed)?;
    write_output(args.output.as_deref(), &set.to_lines())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Build(a) => cmd_build(a),
        Command::Count(a) => cmd_count(a),
        Command::Bench(a) => cmd_bench(a),
        Command::GenDna(a) => cmd_gen_dna(a),
        Command::Stats(a) => cmd_stats(a),
        Command::AnalyzeRuns(a) => cmd_analyze(a),
        Command::ExtractPatterns(a) => cmd_extract(a),
    }
}
