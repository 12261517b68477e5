mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use radixtile::attractor::{
    build_cloud, default_depth, measure_estimate, rasterize_cloud, rasterize_exact,
    tiling_check_exact, write_pgm, write_sidecar, AttractorError, DEFAULT_SEED,
};
use radixtile::cycle_codec::{cycle_from_word, decode_d_c, encode_e_c, CodecError};
use radixtile::exact_linalg::{int_vec, is_expansive, IntVector, RatVector};
use radixtile::radix_system::{is_complete_digit_set, RadixSystem};
use radixtile::solenoid::{verify_corsum, SolenoidError};
use radixtile::spectrum::{analyze, check_hadamard, SpectrumError};
use serde_json::json;

use crate::config::SystemConfig;

const EXIT_CONFIG: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_UNDECIDED: u8 = 4;

/// Largest point cloud drawn by `attractor --method cloud`.
const CLOUD_CAP: usize = 4_000_000;

#[derive(Parser)]
#[command(
    name = "radixtile",
    version,
    about = "Matrix-radix number systems, attractors and tiling lattices"
)]
struct Cli {
    /// JSON system description.
    #[arg(short, long, global = true)]
    system: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Exact membership of sample points on a fine grid.
    Exact,
    /// Box counting of a point cloud.
    Cloud,
}

#[derive(Subcommand)]
enum Command {
    /// Checks expansivity, digit completeness and the dual digits.
    Validate,
    /// Encodes an integer point, optionally relative to a cycle.
    Encode {
        #[arg(short, long, allow_hyphen_values = true)]
        point: String,
        /// Label word of the cycle, e.g. `1;0`.
        #[arg(short, long)]
        cycle: Option<String>,
        #[arg(short = 'j', long, default_value_t = 0)]
        slot: usize,
    },
    /// Decodes a word `prefix|period` back to its point.
    Decode {
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
        #[arg(short, long)]
        cycle: Option<String>,
    },
    /// Lists the integer cycles.
    Cycles,
    /// Renders the attractor to a PGM image with a JSON sidecar.
    Attractor {
        #[arg(short, long, default_value_t = 256)]
        resolution: u32,
        /// Cloud depth; defaults to the resolution rule.
        #[arg(short, long)]
        depth: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Spectrum lattice, tiling lattice and a raster check of the tiling.
    Spectrum {
        #[arg(short, long, default_value_t = 256)]
        resolution: u32,
    },
    /// Checks the solenoid diagrams on random samples.
    Verify {
        #[arg(short, long)]
        cycle: String,
        #[arg(short = 'n', long, default_value_t = 100)]
        samples: usize,
        #[arg(short, long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn config_err(msg: impl ToString) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        msg: msg.to_string(),
    }
}

fn domain_err(msg: impl ToString) -> Failure {
    Failure {
        code: EXIT_DOMAIN,
        msg: msg.to_string(),
    }
}

fn undecided(msg: impl ToString) -> Failure {
    Failure {
        code: EXIT_UNDECIDED,
        msg: msg.to_string(),
    }
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        domain_err(e)
    }
}

impl From<SolenoidError> for Failure {
    fn from(e: SolenoidError) -> Self {
        match e {
            SolenoidError::MembershipUndecided => undecided(e),
            e => domain_err(e),
        }
    }
}

impl From<SpectrumError> for Failure {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::CountMismatch { .. } | SpectrumError::DimensionMismatch => config_err(e),
            e => domain_err(e),
        }
    }
}

impl From<AttractorError> for Failure {
    fn from(e: AttractorError) -> Self {
        domain_err(e)
    }
}

fn fmt_int(v: &IntVector) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_rat(v: &RatVector) -> String {
    format!(
        "({})",
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn parse_point(s: &str, dim: usize) -> Result<IntVector, Failure> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| domain_err(format!("point `{s}`: {e}")))?;
    if v.len() != dim {
        return Err(domain_err(format!(
            "point `{s}` has {} coordinates, need {dim}",
            v.len()
        )));
    }
    Ok(int_vec(&v))
}

fn load(cli: &Cli) -> Result<(SystemConfig, RadixSystem), Failure> {
    let path = cli
        .system
        .as_deref()
        .ok_or_else(|| config_err("--system <file> is required"))?;
    let cfg = SystemConfig::load(path).map_err(config_err)?;
    let s = cfg.system().map_err(config_err)?;
    Ok((cfg, s))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_validate(cli: &Cli) -> Result<(), Failure> {
    let path = cli
        .system
        .as_deref()
        .ok_or_else(|| config_err("--system <file> is required"))?;
    let cfg = SystemConfig::load(path).map_err(config_err)?;
    let a = cfg.matrix().map_err(config_err)?;
    let digits = cfg.digits().map_err(config_err)?;
    let expansive = is_expansive(&a).map_err(config_err)?;
    let for_at = is_complete_digit_set(&a.transpose(), &digits);
    let for_a = is_complete_digit_set(&a, &digits);
    let hadamard = match cfg.dual_digits().map_err(config_err)? {
        Some(l) => Some(check_hadamard(
            &cfg.dual_matrix().map_err(config_err)?,
            &digits,
            &l,
        )?),
        None => None,
    };
    let system = cfg.system();
    if cli.json {
        println!(
            "{}",
            json!({
                "valid": system.is_ok(),
                "error": system.as_ref().err(),
                "expansive": expansive,
                "complete_for_transpose": for_at,
                "complete_for_matrix": for_a,
                "hadamard": hadamard.as_ref().map(|h| json!({"unitary": h.unitary, "defect": h.defect, "fourier_distance": h.fourier_distance})),
                "escape_radius": system.as_ref().ok().map(|s| s.escape_radius()),
            })
        );
    } else {
        if let Some(n) = &cfg.name {
            println!("system: {n}");
        }
        println!("expansive: {}", yes(expansive));
        println!(
            "complete for Aᵀ: {}; complete for A: {}",
            yes(for_at),
            yes(for_a)
        );
        if let Some(h) = &hadamard {
            println!("hadamard: {} (defect {:.1e})", yes(h.unitary), h.defect);
        }
        if let Ok(s) = &system {
            println!("escape radius: {:.6}", s.escape_radius());
        }
    }
    match system {
        Ok(_) => Ok(()),
        Err(e) => Err(config_err(e)),
    }
}

fn cmd_encode(cli: &Cli, point: &str, cycle: Option<&str>, slot: usize) -> Result<(), Failure> {
    let (_, s) = load(cli)?;
    let k = parse_point(point, s.dim())?;
    let word = match cycle {
        None => s.encode_integer(&k),
        Some(c) => {
            let labels = s.parse_digits(c).map_err(domain_err)?;
            let cyc = cycle_from_word(&s, &labels)?;
            encode_e_c(&s, &cyc, &k, slot)?
        }
    };
    let text = s.render_word(&word);
    if cli.json {
        println!(
            "{}",
            json!({"point": fmt_int(&k), "slot": cycle.map(|_| slot), "word": text})
        );
    } else {
        println!("{text}");
    }
    Ok(())
}

fn cmd_decode(cli: &Cli, word: &str, cycle: Option<&str>) -> Result<(), Failure> {
    let (_, s) = load(cli)?;
    let w = s.parse_word(word).map_err(domain_err)?;
    let (k, j) = match cycle {
        None => (s.eval_finite(&w).map_err(domain_err)?, None),
        Some(c) => {
            let labels = s.parse_digits(c).map_err(domain_err)?;
            let cyc = cycle_from_word(&s, &labels)?;
            let (k, j) = decode_d_c(&s, &cyc, &w)?;
            (k, Some(j))
        }
    };
    if cli.json {
        println!("{}", json!({"k": fmt_int(&k), "j": j}));
    } else {
        match j {
            Some(j) => println!("k={} j={j}", fmt_int(&k)),
            None => println!("k={}", fmt_int(&k)),
        }
    }
    Ok(())
}

fn cmd_cycles(cli: &Cli) -> Result<(), Failure> {
    let (_, s) = load(cli)?;
    let cycles = s.integer_cycles();
    if cli.json {
        let list: Vec<_> = cycles
            .iter()
            .map(|(pts, w)| {
                json!({
                    "period": pts.len(),
                    "points": pts.iter().map(fmt_int).collect::<Vec<_>>(),
                    "word": s.render_word(w),
                })
            })
            .collect();
        println!("{}", json!({ "cycles": list }));
    } else {
        println!("{} cycles", cycles.len());
        for (pts, w) in &cycles {
            let p: Vec<String> = pts.iter().map(|v| format!("({})", fmt_int(v))).collect();
            println!(
                "period {}: {} word {}",
                pts.len(),
                p.join(" "),
                s.render_word(w)
            );
        }
    }
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn cmd_attractor(
    cli: &Cli,
    resolution: u32,
    depth: Option<usize>,
    out: &Path,
    method: Method,
    seed: u64,
) -> Result<(), Failure> {
    let (_, s) = load(cli)?;
    if resolution == 0 {
        return Err(domain_err("resolution must be positive"));
    }
    let raster = match method {
        Method::Exact => rasterize_exact(&s, resolution)?,
        Method::Cloud => {
            let n = depth.unwrap_or_else(|| default_depth(&s, resolution));
            rasterize_cloud(&build_cloud(&s, n, CLOUD_CAP, seed)?, resolution)
        }
    };
    write_pgm(&raster, out)?;
    let side = sidecar_path(out);
    write_sidecar(&raster, &side)?;
    let measure = measure_estimate(&raster);
    if cli.json {
        println!(
            "{}",
            json!({"image": out, "sidecar": side, "measure": measure, "dims": raster.meta().dims})
        );
    } else {
        println!("measure ≈ {measure:.4}");
        println!("wrote {} and {}", out.display(), side.display());
    }
    Ok(())
}

fn cmd_spectrum(cli: &Cli, resolution: u32) -> Result<(), Failure> {
    let (cfg, s) = load(cli)?;
    let l = cfg
        .dual_digits()
        .map_err(config_err)?
        .ok_or_else(|| config_err("spectrum needs `dual_digits` in the system file"))?;
    let a = cfg.dual_matrix().map_err(config_err)?;
    let rep = analyze(&a, s.digits(), &l)?;
    let tiling = tiling_check_exact(&s, &rep.tiling, resolution)?;
    let verdict = if tiling.certifies_tiling() {
        format!("tiles (multiplicity {:.2})", tiling.mean)
    } else {
        format!(
            "does not tile (mean multiplicity {:.2}, {:.1}% of cells covered once)",
            tiling.mean,
            100.0 * tiling.fraction_at(1)
        )
    };
    if cli.json {
        let cycles: Vec<_> = rep
            .cycles
            .iter()
            .map(|c| json!({"points": c.points.iter().map(fmt_rat).collect::<Vec<_>>(), "labels": c.labels}))
            .collect();
        println!(
            "{}",
            json!({
                "hadamard_defect": rep.hadamard.defect,
                "extreme_cycles": cycles,
                "spectrum": rep.spectrum.to_json(),
                "tiling_lattice": rep.tiling.to_json(),
                "tiling": tiling,
                "tiles": tiling.certifies_tiling(),
            })
        );
    } else {
        println!(
            "hadamard: {} (defect {:.1e})",
            yes(rep.hadamard.unitary),
            rep.hadamard.defect
        );
        println!("extreme cycles: {}", rep.cycles.len());
        for c in &rep.cycles {
            let p: Vec<String> = c.points.iter().map(fmt_rat).collect();
            println!("  {}", p.join(" "));
        }
        println!("Λ = {}", rep.spectrum.describe());
        println!("Γ = {}", rep.tiling.describe());
        println!("verdict: {verdict}");
    }
    if tiling.certifies_tiling() {
        Ok(())
    } else {
        Err(domain_err(
            "tiling lattice not certified by the raster check",
        ))
    }
}

fn cmd_verify(
    cli: &Cli,
    cycle: &str,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<(), Failure> {
    let (_, s) = load(cli)?;
    let labels = s.parse_digits(cycle).map_err(domain_err)?;
    let c = cycle_from_word(&s, &labels)?;
    let rep = verify_corsum(&s, &c, samples, depth, seed)?;
    if cli.json {
        println!(
            "{}",
            json!({
                "samples": rep.samples,
                "depth": rep.depth,
                "exact_max_deviation": rep.exact_max_deviation,
                "float_max_deviation": rep.float_max_deviation,
                "max_compatibility_defect": rep.max_compatibility_defect,
                "slot_shift_agreements": rep.slot_shift_agreements,
                "overlap_samples": rep.overlap_samples,
                "pass": rep.passes(),
            })
        );
    } else {
        println!("samples: {} at depth {}", rep.samples, rep.depth);
        println!("exact deviation: {}", rep.exact_max_deviation);
        println!("float deviation: {:.2e}", rep.float_max_deviation);
        println!(
            "slot shift agreements: {}/{}",
            rep.slot_shift_agreements, rep.samples
        );
        println!("verdict: {}", if rep.passes() { "pass" } else { "fail" });
    }
    if rep.passes() {
        Ok(())
    } else {
        Err(domain_err("diagram check failed"))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate => cmd_validate(cli),
        Command::Encode { point, cycle, slot } => cmd_encode(cli, point, cycle.as_deref(), *slot),
        Command::Decode { word, cycle } => cmd_decode(cli, word, cycle.as_deref()),
        Command::Cycles => cmd_cycles(cli),
        Command::Attractor {
            resolution,
            depth,
            out,
            method,
            seed,
        } => cmd_attractor(cli, *resolution, *depth, out, *method, *seed),
        Command::Spectrum { resolution } => cmd_spectrum(cli, *resolution),
        Command::Verify {
            cycle,
            samples,
            depth,
            seed,
        } => cmd_verify(cli, cycle, *samples, *depth, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
