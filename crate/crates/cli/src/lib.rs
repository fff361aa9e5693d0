//! `hilb2`: classify covers of Hilbert squares, inspect the finite
//! construction, run the property suite, and compute Hodge numbers.
//!
//! Exit codes: 0 success, 1 a property failed, 2 bad input, 3 a cap was
//! exceeded, 4 the deck group is not abelian.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hilb2_core::catalog::{keys, lookup};
use hilb2_core::fpgroup::{abelianization, parse_presentation, DEFAULT_COSET_CAP};
use hilb2_core::groups::parse_group_spec;
use hilb2_core::hilbcover::{construction_for, HilbError, Quotient};
use hilb2_core::hodge::{
    isv_pattern_check, isv_surface_check, symmetric_square_hodge, HodgeVector,
};
use hilb2_core::monodromy::{classify_hilb_covers, MonodromyError, SurfaceDescriptor};
use hilb2_core::permgroup::{GroupError, DEFAULT_GROUP_CAP};
use hilb2_core::verify::{run_suite, VerifyConfig};

pub const SCHEMA_VERSION: u32 = 1;
pub const CAP_ENV: &str = "HILB2_CAP";

pub const EXIT_OK: u8 = 0;
pub const EXIT_PROPERTY: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_NONABELIAN: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "hilb2",
    version,
    about = "Covers of Hilbert squares on finite models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Maximum number of cosets during enumeration.
    #[arg(long, global = true)]
    pub coset_cap: Option<usize>,
    /// Maximum order of any permutation group built.
    #[arg(long, global = true)]
    pub group_cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the covers of the Hilbert square of a surface.
    Classify {
        /// Presentation of the smooth-locus fundamental group, e.g. "< a | a^2 >".
        #[arg(long, conflicts_with_all = ["catalog", "input"])]
        presentation: Option<String>,
        /// Name of a built-in surface.
        #[arg(long, conflicts_with = "input")]
        catalog: Option<String>,
        /// JSON file holding a surface descriptor.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Build the finite model for a deck group and report its structure.
    Construct {
        /// Group spec such as Z4, Z2xZ2, S3, Q8.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        base_size: usize,
    },
    /// Run the property suite.
    Verify {
        /// Largest group order swept (1 keeps only the trivial group).
        #[arg(long, default_value_t = 12)]
        max_group_order: usize,
        #[arg(long, default_value_t = 3)]
        max_base_size: usize,
        /// Corrupt one computed fiber; the suite must then fail.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Hodge numbers h^[p],0 of the Hilbert square from those of the surface.
    Hodge {
        /// h^00,h^10,h^20 of the surface, comma separated.
        vector: String,
    },
}

/// Resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub format: Format,
    pub coset_cap: usize,
    pub group_cap: usize,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: u8, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn envelope(command: &str, results: Vec<Value>) -> String {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "results": results,
    });
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

fn resolve(cli: &Cli, env_cap: Option<String>) -> Result<RunConfig, Outcome> {
    let env = match env_cap {
        None => None,
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                return Err(Outcome::fail(
                    EXIT_PARSE,
                    format!("{CAP_ENV} must be a positive integer, got {s:?}"),
                ))
            }
        },
    };
    let pick = |flag: Option<usize>, default: usize| flag.or(env).unwrap_or(default);
    let config = RunConfig {
        format: cli.format,
        coset_cap: pick(cli.coset_cap, DEFAULT_COSET_CAP),
        group_cap: pick(cli.group_cap, DEFAULT_GROUP_CAP),
    };
    if config.coset_cap == 0 || config.group_cap == 0 {
        return Err(Outcome::fail(EXIT_PARSE, "caps must be positive"));
    }
    Ok(config)
}

/// Parses arguments and runs the command, reading the cap override from the
/// environment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var(CAP_ENV).ok())
}

pub fn run_with_env<I, T>(args: I, env_cap: Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_PARSE, text)
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let config = match resolve(&cli, env_cap) {
        Ok(c) => c,
        Err(o) => return o,
    };
    match &cli.command {
        Command::Classify {
            presentation,
            catalog,
            input,
        } => cmd_classify(
            &config,
            presentation.as_deref(),
            catalog.as_deref(),
            input.as_ref(),
        ),
        Command::Construct { group, base_size } => cmd_construct(&config, group, *base_size),
        Command::Verify {
            max_group_order,
            max_base_size,
            inject_fault,
        } => cmd_verify(&config, *max_group_order, *max_base_size, *inject_fault),
        Command::Hodge { vector } => cmd_hodge(&config, vector),
    }
}

fn load_surface(
    presentation: Option<&str>,
    catalog: Option<&str>,
    input: Option<&PathBuf>,
) -> Result<SurfaceDescriptor, Outcome> {
    if let Some(text) = presentation {
        let p = parse_presentation(text)
            .map_err(|e| Outcome::fail(EXIT_PARSE, format!("presentation: {e}")))?;
        return Ok(SurfaceDescriptor {
            name: "inline".into(),
            pi1_smooth: p,
            singular_points: vec![],
            hodge: HodgeVector::new(vec![1, 0, 0]),
        });
    }
    if let Some(key) = catalog {
        return lookup(key).map(|e| e.surface).ok_or_else(|| {
            Outcome::fail(
                EXIT_PARSE,
                format!(
                    "unknown catalog entry {key:?}; available: {}",
                    keys().join(", ")
                ),
            )
        });
    }
    if let Some(path) = input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text)
            .map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}: {e}", path.display())));
    }
    Err(Outcome::fail(
        EXIT_PARSE,
        "one of --presentation, --catalog or --input is required",
    ))
}

fn monodromy_failure(e: &MonodromyError) -> Outcome {
    let code = if e.is_cap_exceeded() {
        EXIT_CAP
    } else if matches!(
        e,
        MonodromyError::Hilb(HilbError::NonAbelianDeckGroup { .. })
    ) {
        EXIT_NONABELIAN
    } else {
        EXIT_PARSE
    };
    Outcome::fail(code, e.to_string())
}

pub fn cmd_classify(
    config: &RunConfig,
    presentation: Option<&str>,
    catalog: Option<&str>,
    input: Option<&PathBuf>,
) -> Outcome {
    let surface = match load_surface(presentation, catalog, input) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let rows = match classify_hilb_covers(&surface, config.group_cap) {
        Ok(r) => r,
        Err(e) => return monodromy_failure(&e),
    };
    let stdout = match config.format {
        Format::Json => envelope(
            "classify",
            rows.iter()
                .map(|r| {
                    json!({
                        "degree": r.hilb_cover.degree,
                        "subgroup_order": r.subgroup.order,
                        "deck_invariants": r.deck_invariants.torsion,
                        "galois": r.hilb_cover.galois,
                        "etale": r.hilb_cover.is_etale(),
                        "surface_ramification": r.surface_cover.ramification_labels,
                        "surface_cover": r.surface_cover,
                        "hilb_cover": r.hilb_cover,
                    })
                })
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            let ab = abelianization(&surface.pi1_smooth);
            writeln!(
                s,
                "surface {}: π₁ᵃᵇ = {ab}, {} covers of Hilb²",
                surface.name,
                rows.len()
            )
            .unwrap();
            writeln!(
                s,
                "{:<4}{:<8}{:<16}{:<8}branched over",
                "#", "degree", "deck group", "galois"
            )
            .unwrap();
            for (i, r) in rows.iter().enumerate() {
                let labels: Vec<&str> = r
                    .surface_cover
                    .ramification_labels
                    .iter()
                    .map(String::as_str)
                    .collect();
                writeln!(
                    s,
                    "{:<4}{:<8}{:<16}{:<8}{}",
                    i,
                    r.hilb_cover.degree,
                    r.deck_invariants.to_string(),
                    if r.hilb_cover.galois { "yes" } else { "no" },
                    if labels.is_empty() {
                        "-".to_string()
                    } else {
                        labels.join(",")
                    }
                )
                .unwrap();
            }
            s
        }
    };
    Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}

fn hilb_failure(e: &HilbError) -> Outcome {
    let code = match e {
        HilbError::Group(GroupError::CapExceeded { .. }) => EXIT_CAP,
        HilbError::NonAbelianDeckGroup { .. } => EXIT_NONABELIAN,
        _ => EXIT_PARSE,
    };
    Outcome::fail(code, e.to_string())
}

pub fn cmd_construct(config: &RunConfig, group: &str, base_size: usize) -> Outcome {
    let g = match parse_group_spec(group) {
        Ok(g) => g,
        Err(e) => return Outcome::fail(EXIT_PARSE, e.to_string()),
    };
    if base_size == 0 {
        return Outcome::fail(EXIT_PARSE, "--base-size must be at least 1");
    }
    if g.order() > config.group_cap {
        return Outcome::fail(
            EXIT_CAP,
            format!(
                "|G| = {} exceeds the group cap {}",
                g.order(),
                config.group_cap
            ),
        );
    }
    let c = match construction_for(&g, base_size, config.group_cap) {
        Ok(c) => c,
        Err(e) => return hilb_failure(&e),
    };
    if !g.is_abelian() {
        return Outcome::fail(
            EXIT_NONABELIAN,
            format!(
                "{group} is not abelian: the diagonal subgroup H is {} in J and the Hilbert-square cover is not defined",
                if c.h_is_normal() { "normal" } else { "not normal" }
            ),
        );
    }
    let h_fibers = c.xi_tilde_fibers().fiber_sizes();
    let k_fibers = c.quotient_fibers(Quotient::Antidiagonal).fiber_sizes();
    let fixed_h = c.fixed_components_under(Quotient::Diagonal);
    let fixed_k = c.fixed_components_under(Quotient::Antidiagonal);
    let elements = g.elements();

    let stdout = match config.format {
        Format::Json => {
            let fibers: Vec<Value> = (0..c.sym.len())
                .map(|p| {
                    json!({
                        "point": c.sym.label(p),
                        "big_fiber": c.preimage(p).map(|v| v.len()).unwrap_or(0),
                        "h_orbits": h_fibers[p],
                        "k_orbits": k_fibers[p],
                    })
                })
                .collect();
            let components: Vec<Value> = (0..c.d())
                .map(|i| {
                    json!({
                        "element": elements[i].to_string(),
                        "size": c.t_components[i].len(),
                        "fixed_by_h": fixed_h.contains(&i),
                        "fixed_by_k": fixed_k.contains(&i),
                    })
                })
                .collect();
            envelope(
                "construct",
                vec![json!({
                    "group": group,
                    "group_order": c.d(),
                    "base_size": base_size,
                    "j_order": c.j.order(),
                    "h_order": c.h.order(),
                    "k_order": c.k.order(),
                    "h_normal": c.h_is_normal(),
                    "k_normal": c.k_is_normal(),
                    "fibers": fibers,
                    "components": components,
                })],
            )
        }
        Format::Text => {
            let yes = |b: bool| if b { "yes" } else { "no" };
            let mut s = String::new();
            writeln!(
                s,
                "G = {group} (order {}), |B| = {base_size}, |Z| = {}",
                c.d(),
                c.z_count()
            )
            .unwrap();
            writeln!(
                s,
                "|J| = {}  |H| = {}  |K| = {}  H normal: {}  K normal: {}",
                c.j.order(),
                c.h.order(),
                c.k.order(),
                yes(c.h_is_normal()),
                yes(c.k_is_normal())
            )
            .unwrap();
            writeln!(
                s,
                "{:<10}{:<10}{:<10}K-orbits",
                "point", "Ξ-fiber", "H-orbits"
            )
            .unwrap();
            for p in 0..c.sym.len() {
                writeln!(
                    s,
                    "{:<10}{:<10}{:<10}{}",
                    c.sym.label(p),
                    c.preimage(p).map(|v| v.len()).unwrap_or(0),
                    h_fibers[p],
                    k_fibers[p]
                )
                .unwrap();
            }
            writeln!(s, "components T_g ({} points each):", c.z_count()).unwrap();
            for i in 0..c.d() {
                writeln!(
                    s,
                    "  g = {:<16} fixed by H: {:<4} fixed by K: {}",
                    elements[i].to_string(),
                    yes(fixed_h.contains(&i)),
                    yes(fixed_k.contains(&i))
                )
                .unwrap();
            }
            s
        }
    };
    Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}

pub fn cmd_verify(
    config: &RunConfig,
    max_group_order: usize,
    max_base_size: usize,
    inject_fault: bool,
) -> Outcome {
    if max_group_order == 0 || max_base_size == 0 {
        return Outcome::fail(EXIT_PARSE, "scales must be at least 1");
    }
    let vc = VerifyConfig {
        max_group_order,
        max_base_size,
        group_cap: config.group_cap,
        coset_cap: config.coset_cap,
        inject_fault,
    };
    let results = run_suite(&vc);
    let failed = results.iter().filter(|r| !r.passed).count();
    let stdout = match config.format {
        Format::Json => envelope(
            "verify",
            results
                .iter()
                .map(|r| serde_json::to_value(r).expect("json"))
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                if r.detail.is_empty() {
                    writeln!(s, "{status} {}", r.name).unwrap();
                } else {
                    writeln!(s, "{status} {} ({})", r.name, r.detail).unwrap();
                }
            }
            writeln!(s, "{} checks, {failed} failed", results.len()).unwrap();
            s
        }
    };
    Outcome {
        code: if failed == 0 { EXIT_OK } else { EXIT_PROPERTY },
        stdout,
        stderr: String::new(),
    }
}

pub fn parse_hodge_vector(text: &str) -> Result<HodgeVector, String> {
    let dims = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("not a nonnegative integer: {t:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if dims.len() != 3 {
        return Err(format!("expected 3 entries, got {}", dims.len()));
    }
    Ok(HodgeVector::new(dims))
}

pub fn cmd_hodge(config: &RunConfig, vector: &str) -> Outcome {
    let h = match parse_hodge_vector(vector) {
        Ok(h) => h,
        Err(e) => return Outcome::fail(EXIT_PARSE, e),
    };
    let square = symmetric_square_hodge(&h).expect("length checked");
    let surface_ok = isv_surface_check(&h).expect("length checked");
    let square_ok = isv_pattern_check(&square).expect("length checked");
    let yes = |b: bool| if b { "yes" } else { "no" };
    let stdout = match config.format {
        Format::Json => envelope(
            "hodge",
            vec![json!({
                "surface": h,
                "hilbert_square": square,
                "surface_passes": surface_ok,
                "isv": square_ok,
            })],
        ),
        Format::Text => format!(
            "{square} ISV: {}\nsurface {h}: h¹ = 0 and one 2-form: {}\n",
            yes(square_ok),
            yes(surface_ok)
        ),
    };
    Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let mut v = vec!["hilb2"];
        v.extend_from_slice(args);
        run_with_env(v, None)
    }

    #[test]
    fn hodge_outputs() {
        assert!(run_args(&["hodge", "1,0,1"])
            .stdout
            .starts_with("(1,0,1,0,1) ISV: yes\n"));
        assert!(run_args(&["hodge", "1,2,1"])
            .stdout
            .starts_with("(1,2,2,2,1) ISV: no\n"));
        assert!(run_args(&["hodge", "1,0,0"])
            .stdout
            .starts_with("(1,0,0,0,0) ISV: no\n"));
        let bad = run_args(&["hodge", "1,x,1"]);
        assert_eq!(bad.code, EXIT_PARSE);
        assert!(bad.stdout.is_empty());
    }

    #[test]
    fn env_cap_override() {
        let cli = Cli::try_parse_from(["hilb2", "hodge", "1,0,1"]).unwrap();
        let c = resolve(&cli, Some("77".into())).unwrap();
        assert_eq!((c.group_cap, c.coset_cap), (77, 77));
        let cli = Cli::try_parse_from(["hilb2", "--group-cap", "5", "hodge", "1,0,1"]).unwrap();
        assert_eq!(resolve(&cli, Some("77".into())).unwrap().group_cap, 5);
        assert_eq!(
            resolve(&cli, Some("x".into())).unwrap_err().code,
            EXIT_PARSE
        );
    }

    #[test]
    fn cap_exceeded_exit() {
        let o = run_args(&["--group-cap", "4", "classify", "--catalog", "cyclic-8"]);
        assert_eq!(o.code, EXIT_CAP, "{o:?}");
    }

    #[test]
    fn infinite_group_is_rejected() {
        let o = run_args(&["classify", "--presentation", "< a | >"]);
        assert_eq!(o.code, EXIT_PARSE);
        assert!(o.stderr.contains("free rank 1"));
    }
}
