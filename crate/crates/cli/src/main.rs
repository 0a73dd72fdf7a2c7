use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use veech_core::pipeline::{self, record_universe, NO_CANDIDATES};
use veech_core::render;
use veech_core::simulation::SimDescriptor;
use veech_core::triple::TripleMatch;
use veech_core::verify::verify_all;
use veech_core::{CosetPolicy, MarkedPair, Mat2, RunConfig, RunError, Scalar, StratumSig, SurfaceRecord};

const EXIT_NOT_COVERED: u8 = 2;
const EXIT_NO_SURFACES: u8 = 3;
const EXIT_BAD_CONFIG: u8 = 4;

#[derive(Parser)]
#[command(
    name = "veech",
    version,
    about = "Search for translation surfaces with given affine symmetries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Excluded directions of the group generated by the generators.
    Theta(RunArgs),
    /// Simulations at the first depth of the schedule.
    Sims(RunArgs),
    /// Possible triples at the first depth of the schedule.
    Triples(RunArgs),
    /// Full search; writes a report and one file per surface.
    Construct(RunArgs),
    /// Re-check the generators on a stored surface.
    Verify(VerifyArgs),
    /// Draw a stored artifact as SVG.
    Render(RenderArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Orders of the cone points, e.g. `2` or `1,1`.
    #[arg(long, default_value = "2")]
    stratum: String,
    /// Generator matrix `[[a,b],[c,d]]`; repeat for each generator.
    #[arg(long = "gen", required = true)]
    gens: Vec<String>,
    #[arg(long, default_value_t = 4)]
    theta_words: usize,
    #[arg(long, default_value = "4,6,8")]
    depths: String,
    #[arg(long, default_value_t = 8)]
    subset_cap: usize,
    #[arg(long, default_value_t = 4096)]
    candidate_limit: usize,
    /// Drop triples with an orbit point inside one of their balls.
    #[arg(long)]
    prune_balls: bool,
    #[arg(long, default_value = "identity")]
    coset_policy: String,
    /// Only pairs this short take part in the triple search.
    #[arg(long, default_value = "2")]
    triple_radius: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for compatibility; runs are always deterministic.
    #[arg(long)]
    seedless_deterministic: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// A surface file written by `construct`.
    #[arg(long)]
    surface: PathBuf,
    /// Generators to check instead of the ones stored in the file.
    #[arg(long = "gen")]
    gens: Vec<String>,
    /// Depth of the universe used for the check (default: one past the
    /// depth the surface was found at).
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Sims,
    Triple,
    Body,
    Surface,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(value_enum)]
    target: Target,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Which triple, body or simulation block to draw.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Half-width of the drawn region for `sims`.
    #[arg(long, default_value_t = 3.0)]
    radius: f64,
}

/// One simulation class as written by `sims`.
#[derive(Serialize, Deserialize)]
struct SimDump {
    rep: usize,
    aliases: Vec<usize>,
    distinctive: bool,
    descriptor: SimDescriptor,
    pairs: Vec<MarkedPair>,
}

#[derive(Serialize, Deserialize)]
struct SimFile {
    stratum: StratumSig,
    depth: usize,
    classes: Vec<SimDump>,
}

#[derive(Serialize, Deserialize)]
struct TripleFile {
    stratum: StratumSig,
    depth: usize,
    triples: Vec<TripleMatch>,
}

struct ConfigProblem(String);

fn parse_gens(gens: &[String]) -> Result<Vec<Mat2>, ConfigProblem> {
    gens.iter()
        .map(|g| {
            g.parse::<Mat2>()
                .map_err(|e| ConfigProblem(format!("bad generator {g:?}: {e}")))
        })
        .collect()
}

fn config(a: &RunArgs) -> Result<RunConfig, ConfigProblem> {
    let bad = |e: &dyn std::fmt::Display| ConfigProblem(e.to_string());
    let stratum: StratumSig = a.stratum.parse().map_err(|e| bad(&e))?;
    let gens = parse_gens(&a.gens)?;
    let depths = a
        .depths
        .split(',')
        .map(|d| d.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| bad(&e))?;
    let mut cfg = RunConfig::new(stratum, gens);
    cfg.theta_words = a.theta_words;
    cfg.depths = depths;
    cfg.subset_cap = a.subset_cap;
    cfg.candidate_limit = a.candidate_limit;
    cfg.prune_balls = a.prune_balls;
    cfg.coset_policy = a.coset_policy.parse::<CosetPolicy>().map_err(|e| bad(&e))?;
    cfg.triple_radius = a.triple_radius.parse::<Scalar>().map_err(|e| bad(&e))?;
    cfg.validate().map_err(|e| bad(&e))?;
    Ok(cfg)
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), text).with_context(|| format!("writing {name}"))
}

enum Outcome {
    Ok,
    Code(u8),
}

fn theta(cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome> {
    match pipeline::theta_stage(cfg) {
        Ok(d) => {
            println!("covered with words of length {} ({} words)", d.word_len, d.words);
            for v in &d.dirs {
                println!("{v}");
            }
            if let Some(dir) = out {
                let dirs: Vec<String> = d.dirs.iter().map(ToString::to_string).collect();
                write_json(
                    dir,
                    "theta.json",
                    &serde_json::json!({ "word_len": d.word_len, "directions": dirs }),
                )?;
                write_text(dir, "theta.svg", &render::render_directions(&d.dirs))?;
            }
            Ok(Outcome::Ok)
        }
        Err(RunError::NotCovered { word_len }) => {
            eprintln!("directions not covered with words of length at most {word_len}");
            Ok(Outcome::Code(EXIT_NOT_COVERED))
        }
        Err(e) => Err(e.into()),
    }
}

fn sims(cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome> {
    let th = match pipeline::theta_stage(cfg) {
        Ok(t) => t,
        Err(RunError::NotCovered { .. }) => return Ok(Outcome::Code(EXIT_NOT_COVERED)),
        Err(e) => return Err(e.into()),
    };
    let depth = cfg.depths[0];
    let mut cat = pipeline::catalog(cfg, &th);
    let classes = cat.classify(depth)?;
    let mut dump = Vec::new();
    for c in &classes {
        let pairs = cat.orbit(c.rep, depth)?.pairs_at(depth);
        dump.push(SimDump {
            rep: c.rep,
            aliases: c.aliases.clone(),
            distinctive: c.distinctive,
            descriptor: cat.descriptors[c.rep].clone(),
            pairs,
        });
    }
    println!(
        "{} descriptors, {} simulations, {} distinctive at depth {depth}",
        cat.descriptors.len(),
        classes.len(),
        classes.iter().filter(|c| c.distinctive).count()
    );
    if let Some(dir) = out {
        let file = SimFile {
            stratum: cfg.stratum.clone(),
            depth,
            classes: dump,
        };
        write_json(dir, "sims.json", &file)?;
        write_text(dir, "sims.svg", &render_sims(&file, 0, 3.0))?;
    }
    Ok(Outcome::Ok)
}

fn render_sims(file: &SimFile, start: usize, radius: f64) -> String {
    let layers: Vec<(String, Vec<MarkedPair>)> = file
        .classes
        .iter()
        .skip(start)
        .take(render::PALETTE.len())
        .enumerate()
        .map(|(k, c)| (render::PALETTE[k].to_string(), c.pairs.clone()))
        .collect();
    render::render_pairs(&file.stratum, &layers, radius)
}

fn triples(cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome> {
    let th = match pipeline::theta_stage(cfg) {
        Ok(t) => t,
        Err(RunError::NotCovered { .. }) => return Ok(Outcome::Code(EXIT_NOT_COVERED)),
        Err(e) => return Err(e.into()),
    };
    let depth = cfg.depths[0];
    let mut cat = pipeline::catalog(cfg, &th);
    let stage = pipeline::triple_stage(cfg, &mut cat, depth)?;
    println!(
        "{} triples at depth {depth} ({} refuted)",
        stage.matches.len(),
        stage.refuted
    );
    if let Some(dir) = out {
        write_json(
            dir,
            "triples.json",
            &TripleFile {
                stratum: cfg.stratum.clone(),
                depth,
                triples: stage.matches,
            },
        )?;
    }
    Ok(Outcome::Ok)
}

fn construct(cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome> {
    let res = match pipeline::run(cfg) {
        Ok(r) => r,
        Err(RunError::NotCovered { word_len }) => {
            eprintln!("directions not covered with words of length at most {word_len}");
            return Ok(Outcome::Code(EXIT_NOT_COVERED));
        }
        Err(e) => return Err(e.into()),
    };
    for d in &res.report.depths {
        println!(
            "depth {}: {} simulations, {} triples, {} candidates, {} verified, {} new",
            d.depth, d.distinctive, d.triples, d.candidates, d.verified, d.new_surfaces
        );
    }
    for (i, s) in res.surfaces.iter().enumerate() {
        println!(
            "surface {i}: area {} before rescale, scale {}, containment verified",
            s.pre_rescale.area, s.surface.applied_scale
        );
    }
    if let Some(dir) = out {
        write_json(dir, "report.json", &res.report)?;
        for (i, s) in res.surfaces.iter().enumerate() {
            write_json(dir, &format!("surface-{i:03}.json"), s)?;
        }
    }
    if res.surfaces.is_empty() {
        println!("{NO_CANDIDATES}");
        return Ok(Outcome::Code(EXIT_NO_SURFACES));
    }
    Ok(Outcome::Ok)
}

fn read_record(path: &Path) -> Result<SurfaceRecord> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let rec = read_record(&a.surface)?;
    let gens = if a.gens.is_empty() {
        rec.generators.clone()
    } else {
        match parse_gens(&a.gens) {
            Ok(g) => g,
            Err(ConfigProblem(msg)) => {
                eprintln!("{msg}");
                return Ok(Outcome::Code(EXIT_BAD_CONFIG));
            }
        }
    };
    let depth = a.depth.unwrap_or(rec.depth + 1);
    let universe = record_universe(&rec, depth)?;
    let report = verify_all(&rec.pre_rescale.stratum, &rec.pre_rescale, &gens, &universe, depth);
    for (g, st) in &report.generators {
        let status = if st.is_verified() { "Verified" } else { "Unknown" };
        println!("{g}: {status}");
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.verified { Outcome::Ok } else { Outcome::Code(1) })
}

fn render_cmd(a: &RenderArgs) -> Result<Outcome> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let svg = match a.target {
        Target::Sims => render_sims(&serde_json::from_str(&text)?, a.index, a.radius),
        Target::Triple => {
            let f: TripleFile = serde_json::from_str(&text)?;
            let Some(t) = f.triples.get(a.index) else {
                bail!("no triple {} in {}", a.index, a.input.display());
            };
            render::render_triple(&f.stratum, t)
        }
        Target::Body => {
            let rec: SurfaceRecord = serde_json::from_str(&text)?;
            let Some(b) = rec.pre_rescale.bodies.get(a.index) else {
                bail!("no body {}", a.index);
            };
            render::render_body(&rec.pre_rescale.stratum, b)
        }
        Target::Surface => render::render_surface(&read_record(&a.input)?.pre_rescale),
    };
    fs::write(&a.output, svg).with_context(|| format!("writing {}", a.output.display()))?;
    Ok(Outcome::Ok)
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Render(a) => render_cmd(a),
        Command::Theta(a) | Command::Sims(a) | Command::Triples(a) | Command::Construct(a) => {
            let cfg = match config(a) {
                Ok(c) => c,
                Err(ConfigProblem(msg)) => {
                    eprintln!("invalid config: {msg}");
                    return Ok(Outcome::Code(EXIT_BAD_CONFIG));
                }
            };
            let out = a.out.as_deref();
            match &cli.command {
                Command::Theta(_) => theta(&cfg, out),
                Command::Sims(_) => sims(&cfg, out),
                Command::Triples(_) => triples(&cfg, out),
                _ => construct(&cfg, out),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Code(c)) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
