//! Command-line front end: verification suites, coefficient tables, and
//! one-shot algebra operations over JSON.

use std::io::Read as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qfrob_core::cyclo::RootParams;
use qfrob_core::hyper::{HyperAlgebra, PrimeField};
use qfrob_core::pbw::{verify_fundamental_vanishing, UqContext};
use qfrob_core::report::{all_passed, Check};
use qfrob_core::serialize::{ClassicalData, PbwData, ScalarData, SmallTorusData};
use qfrob_core::suites::{run_suite, SuiteConfig, SUITE_NAMES};
use qfrob_core::torus::{kappa, kappa_prime, TorusContext};

#[derive(Parser)]
#[command(
    name = "qfrob",
    version,
    about = "Exact checks for the quantum Frobenius splitting of sl2 at a root of unity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a machine-readable report.
    Verify {
        /// Odd order of the root of unity, at least 3.
        #[arg(long)]
        l: u64,
        /// Odd prime for the modular suites (defaults to l when l is prime).
        #[arg(long)]
        p: Option<u64>,
        /// Comma-separated suite names; defaults to every suite the
        /// configuration supports.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        /// Seed for the randomized checks (QFROB_SEED overrides).
        #[arg(long)]
        seed: Option<u64>,
        /// Number of randomized samples per property.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Sweep every basis pair within the configured bounds instead of
        /// sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Emit coefficient tables.
    Table {
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Character tables of a Weyl module before and after contraction.
    Contract {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        l: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The polynomial identity report for one root order.
    Identities {
        #[arg(long)]
        l: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Normal-form product of two elements given as JSON on stdin:
    /// {"x": <element>, "y": <element>}.
    Mul {
        #[arg(long)]
        l: u64,
    },
    /// Image of a JSON element under the quantum Frobenius.
    Fr {
        #[arg(long)]
        l: u64,
    },
    /// Image of a JSON classical element under the splitting.
    Phi {
        #[arg(long)]
        l: u64,
    },
    /// The bracket-vanishing report behind the multiplicative splitting.
    VerifyVanishing {
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
    },
    /// The mu-idempotent table over F_p.
    MuTable {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Retraction and multiplicativity checks for the modular splitting.
    VerifyModularPhi {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Block decompositions: ideal ranks at the root of unity and the
    /// two-sided mu-blocks of the first Frobenius kernel.
    Blocks {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p: Option<u64>,
    },
}

#[derive(Subcommand)]
enum TableKind {
    /// Coordinates of kappa_n in the group-like and divided-power bases.
    Kappa {
        #[arg(long)]
        l: u64,
        /// Which idempotent; all of [0, l) when omitted.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Coordinates of kappa'_n in both bases.
    KappaPrime {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// mu_n^(r) over the binom(H, i) basis.
    Mu {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Expansion coefficients of K^m [K;c;t].
    Alpha {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 0)]
        t: u64,
        #[arg(long, default_value_t = 0)]
        c: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Serialize)]
struct Report {
    config: ReportConfig,
    checks: Vec<Check>,
    summary: Summary,
}

#[derive(Serialize)]
struct ReportConfig {
    l: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    suites: Vec<String>,
    seed: u64,
    samples: usize,
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn seed_from(cli_seed: Option<u64>) -> u64 {
    if let Ok(env_seed) = std::env::var("QFROB_SEED") {
        if let Ok(v) = env_seed.parse() {
            return v;
        }
    }
    cli_seed.unwrap_or(0x5eed)
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Verify {
            l,
            p,
            suite,
            seed,
            samples,
            exhaustive,
            output,
            format,
        } => {
            let p = p.or_else(|| qfrob_core::modp::is_prime(l).then_some(l));
            let suites = if suite.is_empty() {
                default_suites(l, p)
            } else {
                suite
            };
            let seed = seed_from(seed);
            let mut checks = Vec::new();
            for name in &suites {
                let mut cfg = SuiteConfig::new(l)
                    .with_seed(seed)
                    .with_samples(samples)
                    .with_exhaustive(exhaustive);
                if let Some(p) = p {
                    cfg = cfg.with_p(p);
                }
                checks.extend(run_suite(name, &cfg)?);
            }
            let ok = all_passed(&checks);
            let report = Report {
                config: ReportConfig {
                    l,
                    p,
                    suites,
                    seed,
                    samples,
                },
                summary: Summary {
                    total: checks.len(),
                    passed: checks.iter().filter(|c| c.passed()).count(),
                    failed: checks.iter().filter(|c| !c.passed()).count(),
                },
                checks,
            };
            let rendered = match format {
                Format::Json => serde_json::to_string_pretty(&report)?,
                Format::Text => render_checks_text(&report.checks),
                Format::Csv => render_checks_csv(&report.checks),
            };
            match output {
                Some(path) => std::fs::write(path, rendered)?,
                None => println!("{rendered}"),
            }
            Ok(ok)
        }
        Command::Table { kind } => {
            run_table(kind)?;
            Ok(true)
        }
        Command::Contract { m, l, format } => {
            let ring = RootParams::new(l)?;
            let module = qfrob_core::repr::weyl_module(&ring, m)?;
            let contracted = qfrob_core::repr::contract(&module)?;
            #[derive(Serialize)]
            struct ContractOut {
                l: u64,
                m: u32,
                dim_before: usize,
                dim_after: usize,
                character_before: Vec<i64>,
                character_after: Vec<i64>,
            }
            let out = ContractOut {
                l,
                m,
                dim_before: module.dim(),
                dim_after: contracted.dim(),
                character_before: module.character(),
                character_after: contracted.character(),
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
                _ => {
                    println!("V({m}) at l = {l}: dim {}", out.dim_before);
                    println!("  weights: {:?}", out.character_before);
                    println!("contracted: dim {}", out.dim_after);
                    println!("  weights: {:?}", out.character_after);
                }
            }
            Ok(true)
        }
        Command::Identities { l, format } => {
            let cfg = SuiteConfig::new(l);
            let checks = run_suite("identities", &cfg)?;
            let ok = all_passed(&checks);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&checks)?),
                _ => print!("{}", render_checks_text(&checks)),
            }
            Ok(ok)
        }
        Command::Mul { l } => {
            let ring = RootParams::new(l)?;
            let ctx = context(l, &ring);
            #[derive(serde::Deserialize)]
            struct Pair {
                x: PbwData,
                y: PbwData,
            }
            let pair: Pair = serde_json::from_str(&read_stdin()?)?;
            let x = pair.x.into_element(&ring)?;
            let y = pair.y.into_element(&ring)?;
            let product = x.mul(&ctx, &y)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&PbwData::from_element(l, &product))?
            );
            Ok(true)
        }
        Command::Fr { l } => {
            let ring = RootParams::new(l)?;
            let ctx = context(l, &ring);
            let data: PbwData = serde_json::from_str(&read_stdin()?)?;
            let x = data.into_element(&ring)?;
            let image = x.frobenius(&ctx)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&ClassicalData::from_element(l, &image))?
            );
            Ok(true)
        }
        Command::Phi { l } => {
            let ring = RootParams::new(l)?;
            let ctx = context(l, &ring);
            let data: ClassicalData = serde_json::from_str(&read_stdin()?)?;
            let x = data.into_element(&ring)?;
            let image = qfrob_core::pbw::phi(&ctx, &x)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&PbwData::from_element(l, &image))?
            );
            Ok(true)
        }
        Command::VerifyVanishing { l, a, b } => {
            let ring = RootParams::new(l)?;
            let ctx = context(l, &ring);
            let checks = verify_fundamental_vanishing(&ctx, a, b)?;
            println!("{}", serde_json::to_string_pretty(&checks)?);
            Ok(all_passed(&checks))
        }
        Command::MuTable { p, r, format } => {
            emit_mu_table(p, r, format)?;
            Ok(true)
        }
        Command::VerifyModularPhi { p, seed, samples } => {
            let cfg = SuiteConfig::new(p)
                .with_p(p)
                .with_seed(seed_from(seed))
                .with_samples(samples);
            let checks = run_suite("modular", &cfg)?;
            println!("{}", serde_json::to_string_pretty(&checks)?);
            Ok(all_passed(&checks))
        }
        Command::Blocks { l, p } => {
            let mut cfg = SuiteConfig::new(l);
            if let Some(p) = p {
                cfg = cfg.with_p(p);
            }
            let checks = run_suite("blocks", &cfg)?;
            println!("{}", serde_json::to_string_pretty(&checks)?);
            Ok(all_passed(&checks))
        }
    }
}

fn context(l: u64, ring: &Arc<RootParams>) -> Arc<UqContext> {
    let torus = TorusContext::new(ring.clone(), 12 * l as usize + 6);
    UqContext::new(torus, 8 * l as u32)
}

fn default_suites(l: u64, p: Option<u64>) -> Vec<String> {
    let mut names: Vec<String> = vec![
        "torus".into(),
        "splitting".into(),
        "vanishing".into(),
        "identities".into(),
        "hopf".into(),
        "contraction".into(),
        "blocks".into(),
    ];
    if p.is_some() {
        names.push("modular".into());
        if p == Some(l) {
            names.push("bridge".into());
        }
    }
    debug_assert!(names.iter().all(|n| SUITE_NAMES.contains(&n.as_str())));
    names
}

fn read_stdin() -> std::io::Result<String> {
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf)?;
    Ok(buf)
}

fn render_checks_text(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {}  ({})\n", c.name, c.statement));
        if let Some(w) = &c.witness {
            out.push_str(&format!("      witness: {w}\n"));
        }
    }
    out
}

fn render_checks_csv(checks: &[Check]) -> String {
    let mut out = String::from("name,status,statement\n");
    for c in checks {
        let status = if c.passed() { "pass" } else { "fail" };
        out.push_str(&format!(
            "{},{},\"{}\"\n",
            c.name,
            status,
            c.statement.replace('"', "'")
        ));
    }
    out
}

fn run_table(kind: TableKind) -> Result<(), Box<dyn std::error::Error>> {
    match kind {
        TableKind::Kappa { l, n, format } => {
            let ring = RootParams::new(l)?;
            let ns: Vec<i64> = match n {
                Some(n) => vec![n],
                None => (0..l as i64).collect(),
            };
            emit_idempotent_table(&ring, &ns, false, format)
        }
        TableKind::KappaPrime { l, n, format } => {
            let ring = RootParams::new(l)?;
            let ns: Vec<i64> = match n {
                Some(n) => vec![n],
                None => (0..2 * l as i64).collect(),
            };
            emit_idempotent_table(&ring, &ns, true, format)
        }
        TableKind::Mu { p, r, format } => emit_mu_table(p, r, format),
        TableKind::Alpha { l, m, t, c, format } => {
            let ring = RootParams::new(l)?;
            let coeffs = qfrob_core::identities::alpha_coefficients(&ring, m, t, c);
            #[derive(Serialize)]
            struct AlphaRow {
                delta: u8,
                t: u32,
                value: String,
                scalar: ScalarData,
            }
            let rows: Vec<AlphaRow> = coeffs
                .iter()
                .map(|((d, n), v)| AlphaRow {
                    delta: *d,
                    t: *n,
                    value: v.to_poly_string(),
                    scalar: ScalarData::from_scalar(v),
                })
                .collect();
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
                Format::Csv => {
                    println!("delta,t,value");
                    for r in rows {
                        println!("{},{},\"{}\"", r.delta, r.t, r.value);
                    }
                }
                Format::Text => {
                    for r in rows {
                        println!("K^{} [K;c;{}]: {}", r.delta, r.t, r.value);
                    }
                }
            }
            Ok(())
        }
    }
}

fn emit_idempotent_table(
    ring: &Arc<RootParams>,
    ns: &[i64],
    primed: bool,
    format: Format,
) -> Result<(), Box<dyn std::error::Error>> {
    let l = ring.l();
    let ctx = TorusContext::new(ring.clone(), 2 * l as usize);
    #[derive(Serialize)]
    struct IdempotentRow {
        n: i64,
        group_like: SmallTorusData,
        divided_power: Vec<(u8, u32, String, ScalarData)>,
    }
    let mut rows = Vec::new();
    for &n in ns {
        let x = if primed {
            kappa_prime(ring, n)
        } else {
            kappa(ring, n)
        };
        let big = ctx.small_to_big(&x)?;
        big.assert_dyadic()?;
        rows.push(IdempotentRow {
            n,
            group_like: SmallTorusData::from_element(l, &x),
            divided_power: big
                .coords
                .iter()
                .map(|(&(d, t), v)| (d, t, v.to_poly_string(), ScalarData::from_scalar(v)))
                .collect(),
        });
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        Format::Csv => {
            println!("n,delta,t,value");
            for row in &rows {
                for (d, t, s, _) in &row.divided_power {
                    println!("{},{},{},\"{}\"", row.n, d, t, s);
                }
            }
        }
        Format::Text => {
            for row in &rows {
                let tag = if primed { "kappa'" } else { "kappa" };
                println!("{tag}_{}:", row.n);
                for (d, t, s, _) in &row.divided_power {
                    let basis = if *d == 0 {
                        format!("[K;{t}]")
                    } else {
                        format!("K [K;{t}]")
                    };
                    println!("  {basis}: {s}");
                }
            }
        }
    }
    Ok(())
}

fn emit_mu_table(p: u64, r: u32, format: Format) -> Result<(), Box<dyn std::error::Error>> {
    qfrob_core::modp::check_odd_prime(p)?;
    let alg = HyperAlgebra::new(PrimeField(p), (p * p * p) as u32);
    let pr = p.pow(r);
    #[derive(Serialize)]
    struct MuRow {
        n: u64,
        coords: Vec<u64>,
    }
    let rows: Vec<MuRow> = (0..pr)
        .map(|n| MuRow {
            n,
            coords: alg
                .mu(n as i64, r)
                .coords
                .iter()
                .map(|v| v.value)
                .collect(),
        })
        .collect();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        Format::Csv => {
            println!("n,coords");
            for row in &rows {
                println!(
                    "{},\"{}\"",
                    row.n,
                    row.coords
                        .iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
        }
        Format::Text => {
            for row in &rows {
                let terms: Vec<String> = row
                    .coords
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(i, v)| format!("{v}*binom(H,{i})"))
                    .collect();
                println!("mu_{} = {}", row.n, terms.join(" + "));
            }
        }
    }
    Ok(())
}
