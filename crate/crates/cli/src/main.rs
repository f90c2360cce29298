use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dummymark::attacks::{survival_matrix, Attack};
use dummymark::bytecode::{decode_instructions, scan_codepoints, CodepointKind};
use dummymark::dummygen::{emit_source_snippets, synthesize_dummy, DummyError};
use dummymark::extractor::{extraction_report, to_json_lines, verify};
use dummymark::opaque::{run_observation, Algorithm, PredicateGroup, PredicateWorld, WorldShape};
use dummymark::{
    capacity, embed, ClassFile, ClassFileError, CodecError, ConfigError, DummyShape, DummySpec, EmbedError, Mode,
    WatermarkConfig,
};

#[derive(Parser)]
#[command(name = "dummymark", version, about = "Dummy-method watermarking for Java class files")]
struct Cli {
    /// Watermark config (codebook, key, mode) as JSON.
    #[arg(long, global = true, env = "WM_CONFIG")]
    config: Option<PathBuf>,
    /// Override the config's embedding mode.
    #[arg(long, global = true)]
    mode: Option<Mode>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Methods, codepoint counts and capacity per mode.
    Inspect {
        file: PathBuf,
        /// Also list every instruction.
        #[arg(long)]
        disasm: bool,
    },
    /// Add a synthesized dummy method and/or write source snippets.
    GenDummy {
        file: PathBuf,
        /// Bits the dummy must hold under the selected mode.
        #[arg(long)]
        bits: Option<usize>,
        #[arg(long)]
        name: String,
        #[arg(long, default_value = "Z")]
        shape: DummyShape,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the class (defaults to FILE).
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Directory for the source snippet bundle.
        #[arg(long)]
        emit_source: Option<PathBuf>,
        #[arg(long, default_value = "I")]
        algorithm: Algorithm,
    },
    /// Write a watermark into one method.
    Embed {
        file: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long)]
        descriptor: Option<String>,
        #[arg(long)]
        message: String,
        /// Where to write the class (defaults to FILE).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Decode the carrier bits of every method.
    Extract {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Report where this watermark occurs.
        #[arg(long)]
        message: Option<String>,
    },
    /// Exit 0 iff every file carries the watermark.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        message: String,
    },
    /// Attack files and report which watermarks survive.
    Attack {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// rename[:seed], strip, scramble[:seed], trim[:m1+m2], normalize.
        #[arg(long, value_delimiter = ',')]
        attacks: Vec<Attack>,
        /// External tool command with {in} and {out} placeholders.
        #[arg(long)]
        external: Vec<String>,
        #[arg(long)]
        message: String,
    },
    /// Print opaque-predicate observation logs.
    Simulate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[arg(long, default_value_t = 23)]
        ticks: u64,
        /// Only this group (default: both).
        #[arg(long)]
        algorithm: Option<Algorithm>,
        /// Extra nodes per ring beyond the listing's two.
        #[arg(long, default_value_t = 0)]
        extra_nodes: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

const VERIFY: u8 = 1;
const USAGE: u8 = 2;
const IO: u8 = 3;
const CAPACITY: u8 = 4;

impl From<ClassFileError> for Failure {
    fn from(e: ClassFileError) -> Self {
        Failure::new(IO, e.to_string())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::new(IO, e.to_string())
    }
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        let code = if matches!(e, CodecError::InsufficientCapacity { .. }) { CAPACITY } else { USAGE };
        Failure::new(code, e.to_string())
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        match e {
            EmbedError::InsufficientCapacity { .. } => Failure::new(CAPACITY, e.to_string()),
            EmbedError::Codec(c) => c.into(),
            EmbedError::Bytecode(_) => Failure::new(IO, e.to_string()),
            _ => Failure::new(USAGE, e.to_string()),
        }
    }
}

impl From<DummyError> for Failure {
    fn from(e: DummyError) -> Self {
        let code = match e {
            DummyError::NameCollision(_) | DummyError::BadName(_) => USAGE,
            DummyError::PoolOverflow | DummyError::CodeTooLarge { .. } => CAPACITY,
            DummyError::ClassFile(_) => IO,
        };
        Failure::new(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ClassFile, Failure> {
    ClassFile::parse(&read(path)?).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))
}

fn config(cli: &Cli) -> Result<WatermarkConfig, Failure> {
    let c = match &cli.config {
        Some(p) => WatermarkConfig::load(p)?,
        None => WatermarkConfig::default(),
    };
    Ok(match cli.mode {
        Some(m) => c.with_mode(m),
        None => c,
    })
}

fn json(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn inspect(cli: &Cli, file: &Path, disasm: bool) -> Result<(), Failure> {
    let cf = load(file)?;
    let mut methods = Vec::new();
    for i in 0..cf.methods.len() {
        let Some(code) = cf.methods[i].code() else { continue };
        let insns = decode_instructions(&code.code).map_err(|e| Failure::new(IO, e.to_string()))?;
        let points = scan_codepoints(&insns, Mode::Combined);
        let count = |k: CodepointKind| points.iter().filter(|p| p.kind == k).count();
        let caps: Vec<(Mode, usize)> =
            Mode::ALL.iter().map(|&m| (m, capacity(&cf, i, m).unwrap_or(0))).collect();
        let listing: Vec<String> = if disasm {
            insns
                .iter()
                .map(|x| {
                    let ops: Vec<String> = x.operands.iter().map(|b| format!("{b:02x}")).collect();
                    let mark = points.iter().find(|p| insns[p.index].offset == x.offset).map(|p| p.kind);
                    let mark = mark.map(|k| format!("  ; {k:?}")).unwrap_or_default();
                    format!("{:5}: {} {}{mark}", x.offset, x.mnemonic(), ops.join(" "))
                })
                .collect()
        } else {
            Vec::new()
        };
        methods.push(serde_json::json!({
            "name": cf.method_name(i),
            "descriptor": cf.method_descriptor(i),
            "access_flags": cf.methods[i].access_flags,
            "instructions": insns.len(),
            "arith8": count(CodepointKind::Arith8),
            "branch4": count(CodepointKind::Branch4),
            "branch2": count(CodepointKind::Branch2),
            "bipush": count(CodepointKind::OperandBipush),
            "iinc": count(CodepointKind::OperandIinc),
            "capacity": caps.iter().map(|(m, c)| (m.as_str().to_string(), *c)).collect::<std::collections::BTreeMap<_, _>>(),
            "listing": listing,
        }));
    }
    if cli.json {
        println!(
            "{}",
            json(&serde_json::json!({
                "class": cf.class_name(),
                "major_version": cf.major_version,
                "minor_version": cf.minor_version,
                "constant_pool_count": cf.constant_pool.count(),
                "methods": methods,
            }))
        );
        return Ok(());
    }
    println!(
        "class {} (version {}.{}, {} pool entries)",
        cf.class_name(),
        cf.major_version,
        cf.minor_version,
        cf.constant_pool.count()
    );
    println!(
        "{:<24} {:<28} {:>5} {:>6} {:>6} {:>7} {:>7} {:>6} {:>4} {:>7} {:>8} {:>8}",
        "method", "descriptor", "flags", "insns", "arith8", "branch4", "branch2", "bipush", "iinc", "replace", "operands",
        "combined"
    );
    for m in &methods {
        println!(
            "{:<24} {:<28} {:>5} {:>6} {:>6} {:>7} {:>7} {:>6} {:>4} {:>7} {:>8} {:>8}",
            m["name"].as_str().unwrap(),
            m["descriptor"].as_str().unwrap(),
            format!("{:04x}", m["access_flags"].as_u64().unwrap()),
            m["instructions"].to_string(),
            m["arith8"].to_string(),
            m["branch4"].to_string(),
            m["branch2"].to_string(),
            m["bipush"].to_string(),
            m["iinc"].to_string(),
            m["capacity"]["replace_opcodes"].to_string(),
            m["capacity"]["overwrite_operands"].to_string(),
            m["capacity"]["combined"].to_string(),
        );
        for line in m["listing"].as_array().unwrap() {
            println!("    {}", line.as_str().unwrap());
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn gen_dummy(
    cli: &Cli,
    file: &Path,
    bits: Option<usize>,
    name: &str,
    shape: DummyShape,
    seed: u64,
    output: Option<&Path>,
    emit_source: Option<&Path>,
    algorithm: Algorithm,
) -> Result<(), Failure> {
    if bits.is_none() && emit_source.is_none() {
        return Err(Failure::new(USAGE, "nothing to do: pass --bits and/or --emit-source"));
    }
    let mode = config(cli)?.mode;
    let spec = DummySpec { name: name.to_string(), capacity_bits: bits.unwrap_or(0), mode, shape, seed };
    let mut report = serde_json::json!({ "spec": spec });
    if bits.is_some() {
        let cf = load(file)?;
        let out = synthesize_dummy(&cf, &spec)?;
        let i = out.methods.len() - 1;
        let cap = capacity(&out, i, mode)?;
        let dest = output.unwrap_or(file);
        write(dest, &out.to_bytes()?)?;
        report["class_file"] = dest.display().to_string().into();
        report["capacity"] = cap.into();
        if !cli.json {
            println!("added private void {name}(int) to {}: {cap} bits ({mode})", dest.display());
        }
    }
    if let Some(dir) = emit_source {
        let bundle = emit_source_snippets(&spec, algorithm);
        let paths = bundle.write_to(dir).map_err(|e| Failure::new(IO, format!("{}: {e}", dir.display())))?;
        let paths: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
        if !cli.json {
            for p in &paths {
                println!("wrote {p}");
            }
        }
        report["snippets"] = paths.into();
    }
    if cli.json {
        println!("{}", json(&report));
    }
    Ok(())
}

fn embed_cmd(
    cli: &Cli,
    file: &Path,
    method: &str,
    descriptor: Option<&str>,
    message: &str,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let config = config(cli)?;
    let cf = load(file)?;
    let i = cf
        .method_index(method, descriptor)
        .ok_or_else(|| Failure::new(USAGE, format!("no method `{method}` in {}", file.display())))?;
    let (out, plan) = embed(&cf, i, message, &config)?;
    let dest = output.unwrap_or(file);
    write(dest, &out.to_bytes()?)?;
    if cli.json {
        println!("{}", plan.to_json());
        return Ok(());
    }
    println!(
        "{}.{}{}: {} of {} bits used ({}), {} sites rewritten",
        plan.class, plan.method, plan.descriptor, plan.required_bits, plan.capacity, plan.mode, plan.consumed_sites
    );
    for s in &plan.sites {
        println!("  pc {:5}  {:<10} -> {:<10} bits {}", s.pc, s.old_insn, s.new_insn, s.bits);
    }
    for w in &plan.warnings {
        eprintln!("warning: {w}");
    }
    println!("wrote {}", dest.display());
    Ok(())
}

fn extract(cli: &Cli, files: &[PathBuf], message: Option<&str>) -> Result<(), Failure> {
    let config = config(cli)?;
    let mut records = Vec::new();
    for f in files {
        let cf = load(f)?;
        records.extend(extraction_report(&f.display().to_string(), &cf, &config, message)?);
    }
    if cli.json {
        print!("{}", to_json_lines(&records));
        return Ok(());
    }
    for r in &records {
        let hit = if r.matches.is_empty() { String::new() } else { format!("  match at {:?}", r.matches) };
        println!("{} {}.{}{}: {} bits {:?}{hit}", r.file, r.class, r.method, r.descriptor, r.bit_length, r.text);
    }
    Ok(())
}

fn verify_cmd(cli: &Cli, files: &[PathBuf], message: &str) -> Result<(), Failure> {
    let config = config(cli)?;
    let data: Vec<(String, Vec<u8>)> =
        files.iter().map(|f| Ok((f.display().to_string(), read(f)?))).collect::<Result<_, Failure>>()?;
    let verdicts = verify(data.iter().map(|(n, b)| (n.as_str(), b.as_slice())), message, &config)?;
    let all = verdicts.iter().all(|(_, v)| v.is_found());
    if cli.json {
        let rows: Vec<_> =
            verdicts.iter().map(|(f, v)| serde_json::json!({ "file": f, "result": v })).collect();
        println!("{}", json(&serde_json::Value::Array(rows)));
    } else {
        for (f, v) in &verdicts {
            match v {
                dummymark::Verdict::Found { method, offset, .. } => {
                    println!("{f}: Found in {method} at bit {offset}")
                }
                dummymark::Verdict::NotFound { error: Some(e) } => println!("{f}: NotFound ({e})"),
                dummymark::Verdict::NotFound { error: None } => println!("{f}: NotFound"),
            }
        }
    }
    if all {
        Ok(())
    } else {
        Err(Failure::new(VERIFY, String::new()))
    }
}

fn attack_cmd(
    cli: &Cli,
    files: &[PathBuf],
    attacks: &[Attack],
    external: &[String],
    message: &str,
) -> Result<(), Failure> {
    let config = config(cli)?;
    config.keyed_bits(message)?;
    let mut list: Vec<Attack> = if attacks.is_empty() && external.is_empty() { Attack::builtin() } else { attacks.to_vec() };
    list.extend(external.iter().map(|c| Attack::External { command: c.clone() }));
    let corpus: Vec<(String, Vec<u8>)> =
        files.iter().map(|f| Ok((f.display().to_string(), read(f)?))).collect::<Result<_, Failure>>()?;
    let m = survival_matrix(&corpus, &list, message, &config);
    if cli.json {
        println!("{}", m.to_json());
    } else {
        print!("{}", m.to_text());
    }
    Ok(())
}

fn simulate(cli: &Cli, seed: u64, runs: u64, ticks: u64, algorithm: Option<Algorithm>, extra: usize) -> Result<(), Failure> {
    let shape = if extra == 0 { WorldShape::Listing } else { WorldShape::Extended { extra } };
    let world = PredicateWorld::new(shape);
    let groups: Vec<PredicateGroup> = match algorithm {
        Some(a) => vec![PredicateGroup::listing(a)],
        None => vec![PredicateGroup::listing(Algorithm::I), PredicateGroup::listing(Algorithm::II)],
    };
    let log = run_observation(&world, &groups, seed, runs, ticks);
    if cli.json {
        println!("{}", log.stats_json());
    } else {
        print!("{}", log.text());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Inspect { file, disasm } => inspect(cli, file, *disasm),
        Command::GenDummy { file, bits, name, shape, seed, output, emit_source, algorithm } => gen_dummy(
            cli,
            file,
            *bits,
            name,
            *shape,
            *seed,
            output.as_deref(),
            emit_source.as_deref(),
            *algorithm,
        ),
        Command::Embed { file, method, descriptor, message, output } => {
            embed_cmd(cli, file, method, descriptor.as_deref(), message, output.as_deref())
        }
        Command::Extract { files, message } => extract(cli, files, message.as_deref()),
        Command::Verify { files, message } => verify_cmd(cli, files, message),
        Command::Attack { files, attacks, external, message } => attack_cmd(cli, files, attacks, external, message),
        Command::Simulate { seed, runs, ticks, algorithm, extra_nodes } => {
            simulate(cli, *seed, *runs, *ticks, *algorithm, *extra_nodes)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
