use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lcdawg::verify::{verify_text, Report, VerifyConfig};
use lcdawg::{corpus, persist, Error, FormatError, Index, IndexStats, Text};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

#[derive(Parser)]
#[command(name = "lcdawg", version, about = "Build and query a linear-size CDAWG self-index")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a text file and print its statistics.
    Build { input: PathBuf, output: PathBuf },
    /// Print the 1-based start positions of a pattern, one per line.
    Find(FindArgs),
    /// Write the substring T[pos..pos+len-1] to standard output as raw bytes.
    Extract {
        index: PathBuf,
        #[arg(long)]
        pos: u64,
        #[arg(long)]
        len: u64,
    },
    /// Print measures of a text file or of the text stored in an index file.
    Stats {
        path: PathBuf,
        /// Also compute the LZ77 factor count z.
        #[arg(long)]
        lz: bool,
        /// Also compute the BWT run count r.
        #[arg(long)]
        bwt_runs: bool,
        /// Print JSON instead of a key=value line.
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the index against brute-force oracles on a text plus random texts.
    Verify {
        input: PathBuf,
        /// Maximum length of the generated texts.
        #[arg(long, default_value_t = 2000)]
        max_n: usize,
        /// Number of generated texts.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the SLP productions of an index.
    Grammar { index: PathBuf },
}

#[derive(Args)]
struct FindArgs {
    index: PathBuf,
    pattern: String,
    /// Print only the number of occurrences.
    #[arg(long)]
    count: bool,
    /// Print at most K positions.
    #[arg(long, value_name = "K")]
    limit: Option<usize>,
    /// Read the pattern as a hex byte string.
    #[arg(long)]
    hex: bool,
}

enum Failure {
    Mismatch(String),
    Usage(String),
    Io(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => EXIT_MISMATCH,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Validation(_) => EXIT_VALIDATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Usage(m) | Failure::Io(m) | Failure::Validation(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<Text, Failure> {
    let text = Text::new(read(path)?).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn load(path: &Path) -> Result<Index, Failure> {
    let bytes = read(path)?;
    persist::from_bytes(&bytes).map_err(|e| match e {
        FormatError::Io(m) => Failure::Io(m),
        e => Failure::Validation(format!("{}: {e}", path.display())),
    })
}

fn build(input: &Path, output: &Path, out: &mut impl Write) -> Outcome {
    let text = read_text(input)?;
    let index = Index::build(&text)?;
    let file = fs::File::create(output).map_err(|e| Failure::Io(format!("{}: {e}", output.display())))?;
    let mut sink = BufWriter::new(file);
    persist::serialize(&index, &mut sink)?;
    sink.flush()?;
    writeln!(out, "{}", IndexStats::collect(&text, &index))?;
    Ok(())
}

fn find(args: &FindArgs, out: &mut impl Write) -> Outcome {
    let pattern = if args.hex {
        hex::decode(&args.pattern).map_err(|e| Failure::Usage(format!("bad hex pattern: {e}")))?
    } else {
        args.pattern.as_bytes().to_vec()
    };
    let index = load(&args.index)?;
    if args.count {
        writeln!(out, "{}", index.count(&pattern)?)?;
        return Ok(());
    }
    let hits = index.find(&pattern)?;
    for p in hits.iter().take(args.limit.unwrap_or(usize::MAX)) {
        writeln!(out, "{p}")?;
    }
    Ok(())
}

fn extract(path: &Path, pos: u64, len: u64, out: &mut impl Write) -> Outcome {
    let index = load(path)?;
    out.write_all(&index.extract(pos, len)?)?;
    Ok(())
}

fn stats(path: &Path, lz: bool, bwt: bool, json: bool, out: &mut impl Write) -> Outcome {
    let bytes = read(path)?;
    let (text, index) = if persist::is_index_file(&bytes) {
        let index = persist::from_bytes(&bytes).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
        (Text::new(index.text())?, index)
    } else {
        let text = Text::new(bytes).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
        let index = Index::build(&text)?;
        (text, index)
    };
    let mut s = IndexStats::collect(&text, &index);
    if lz {
        s = s.with_lz77(&text);
    }
    if bwt {
        s = s.with_bwt_runs(&text);
    }
    if json {
        let j = serde_json::to_string_pretty(&s).map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(out, "{j}")?;
    } else {
        writeln!(out, "{s}")?;
    }
    Ok(())
}

fn verify(input: &Path, max_n: usize, trials: usize, seed: u64, out: &mut impl Write) -> Outcome {
    if max_n == 0 && trials > 0 {
        return Err(Failure::Usage("--max-n must be positive".into()));
    }
    let text = read_text(input)?;
    let cfg = VerifyConfig::default();
    let mut report = Report::default();
    report.merge(verify_text(&text, &cfg, seed));
    const SIGMAS: [usize; 4] = [2, 4, 26, 255];
    for i in 0..trials {
        // each trial owns its seed so results do not depend on trial order
        let trial_seed = seed.wrapping_add(1 + i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let n = rng.gen_range(1..=max_n);
        let t = corpus::random_text(&mut rng, n, SIGMAS[i % SIGMAS.len()]);
        report.merge(verify_text(&t, &cfg, trial_seed));
    }
    write!(out, "{report}")?;
    writeln!(out, "texts: {}", trials + 1)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch("verification failed".into()))
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.command {
        Command::Build { input, output } => build(&input, &output, out),
        Command::Find(args) => find(&args, out),
        Command::Extract { index, pos, len } => extract(&index, pos, len, out),
        Command::Stats { path, lz, bwt_runs, json } => stats(&path, lz, bwt_runs, json, out),
        Command::Verify { input, max_n, trials, seed } => verify(&input, max_n, trials, seed, out),
        Command::Grammar { index } => {
            write!(out, "{}", load(&index)?.slp().to_text())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("lcdawg: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
