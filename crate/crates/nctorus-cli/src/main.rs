use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nctorus::complexes::{assemble_dims, group_twists, h0_components, h2_components, DimsReport};
use nctorus::crossed::Gamma;
use nctorus::numeric;
use nctorus::pairing::{self, PairingTable};
use nctorus::random;
use nctorus::verify::{self, Samples};

#[derive(Parser, Debug)]
#[command(
    name = "nctorus",
    version,
    about = "Exact cohomology and index pairings for noncommutative torus orbifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Group to process.
    #[arg(long, global = true, value_enum, default_value_t = GammaArg::All)]
    gamma: GammaArg,

    /// Window radius R for the constraint graphs.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(i64).range(3..))]
    window: i64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    format: Format,

    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = random::DEFAULT_SEED)]
    seed: u64,

    /// Directory for table and report files; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cross-check exact results through a floating-point homomorphism.
    #[arg(long, global = true)]
    numeric_check: bool,

    /// Smaller sample counts for the randomized suites.
    #[arg(long, global = true)]
    quick: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the exact verification battery.
    Verify,
    /// Component counts, invariant dimensions and assembled dimensions.
    Dims,
    /// Write the index pairing tables.
    Pair,
    /// Compare the tables with the printed values.
    Reconcile,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GammaArg {
    Z3,
    Z4,
    Z6,
    All,
}

impl GammaArg {
    fn groups(self) -> Vec<Gamma> {
        match self {
            GammaArg::Z3 => vec![Gamma::Z3],
            GammaArg::Z4 => vec![Gamma::Z4],
            GammaArg::Z6 => vec![Gamma::Z6],
            GammaArg::All => Gamma::CATALOGED.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Markdown,
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Markdown => "md",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

type CmdResult = Result<bool, String>;

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| format!("{}: {e}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn numeric_checks(cli: &Cli) -> Vec<verify::Check> {
    cli.gamma
        .groups()
        .into_iter()
        .map(|g| {
            let r = numeric::check_table(g, cli.seed);
            verify::Check {
                name: format!("numeric cross-check {g}"),
                passed: r.ok(),
                detail: format!(
                    "theta = {:.9}, max relative error {:.2e}",
                    r.theta,
                    r.max_error()
                ),
            }
        })
        .collect()
}

fn cmd_verify(cli: &Cli) -> CmdResult {
    let samples = if cli.quick {
        Samples::quick()
    } else {
        Samples::default()
    };
    let mut checks = verify::run(&cli.gamma.groups(), cli.window, cli.seed, samples);
    if cli.numeric_check {
        checks.extend(numeric_checks(cli));
    }
    if cli.format == Format::Json {
        println!(
            "{}",
            serde_json::to_string_pretty(
                &json!({ "seed": cli.seed, "window": cli.window, "checks": checks })
            )
            .unwrap()
        );
    } else {
        println!("seed {} window {}", cli.seed, cli.window);
        for c in &checks {
            println!(
                "{} {} ({})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
    }
    match checks.iter().find(|c| !c.passed) {
        Some(c) => {
            eprintln!("verification failed: {}", c.name);
            Ok(false)
        }
        None => Ok(true),
    }
}

fn dims_json(g: Gamma, window: i64, d: &DimsReport) -> serde_json::Value {
    let twists: Vec<_> = group_twists(g)
        .iter()
        .map(|t| {
            json!({
                "twist": t.label().tag(),
                "h0_components": h0_components(t, window).count(),
                "h2_components": h2_components(t, window).count(),
            })
        })
        .collect();
    let claimed = DimsReport::claimed(g);
    json!({
        "gamma": g.tag(),
        "window": window,
        "twists": twists,
        "computed": d,
        "claimed": claimed.map(|(h0, hc2, hp)| json!({ "h0": h0, "hc0": h0, "hc2": hc2, "hp_even": hp, "h1": 0, "h2": 1, "hp_odd": 0 })),
    })
}

fn opt(v: Option<usize>) -> String {
    v.map_or("?".to_string(), |x| x.to_string())
}

fn cmd_dims(cli: &Cli) -> CmdResult {
    let mut rng = random::rng(cli.seed);
    let samples = if cli.quick { 10 } else { Samples::default().h1 };
    let mut all_ok = true;
    let mut docs = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("gamma,quantity,computed,claimed\n");
    for g in cli.gamma.groups() {
        let h1_ok = group_twists(g)
            .iter()
            .filter(|t| !t.is_untwisted())
            .all(|t| verify::h1_round_trip(&mut rng, t, samples).passed);
        let d = assemble_dims(g, h1_ok).map_err(|e| e.to_string())?;
        let claimed = DimsReport::claimed(g);
        all_ok &= claimed.is_none_or(|c| c == (d.hc0, d.hc2, d.hp_even)) && d.hp_odd == Some(0);
        docs.push(dims_json(g, cli.window, &d));

        text.push_str(&format!("## {g} (window R = {})\n\n| twist | H0 components | H2 components | invariant dim |\n|---|---|---|---|\n", cli.window));
        for (t, (_, inv)) in group_twists(g).iter().zip(&d.h0_by_twist) {
            text.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                t.label().tag(),
                h0_components(t, cli.window).count(),
                h2_components(t, cli.window).count(),
                inv
            ));
        }
        let (c0, c2, cp) =
            claimed.map_or((None, None, None), |(a, b, c)| (Some(a), Some(b), Some(c)));
        let rows = [
            ("H0", Some(d.h0), c0),
            ("H1", d.h1, Some(0)),
            ("H2", Some(d.h2), Some(1)),
            ("HC0", Some(d.hc0), c0),
            ("HC1", d.hc1, Some(0)),
            ("HC2", Some(d.hc2), c2),
            ("HP_even", Some(d.hp_even), cp),
            ("HP_odd", d.hp_odd, Some(0)),
        ];
        text.push_str("\n| quantity | computed | claimed |\n|---|---|---|\n");
        for (name, ours, theirs) in rows {
            text.push_str(&format!("| {name} | {} | {} |\n", opt(ours), opt(theirs)));
            csv.push_str(&format!(
                "{},{name},{},{}\n",
                g.tag(),
                opt(ours),
                opt(theirs)
            ));
        }
        text.push('\n');
    }
    let out = match cli.format {
        Format::Markdown => text,
        Format::Csv => csv,
        Format::Json => serde_json::to_string_pretty(&docs).unwrap() + "\n",
    };
    match &cli.out {
        Some(dir) => write_file(
            dir,
            &format!("{}-dims.{}", gamma_tag(cli.gamma), cli.format.ext()),
            &out,
        )?,
        None => print!("{out}"),
    }
    Ok(all_ok)
}

fn gamma_tag(g: GammaArg) -> &'static str {
    match g {
        GammaArg::Z3 => "z3",
        GammaArg::Z4 => "z4",
        GammaArg::Z6 => "z6",
        GammaArg::All => "all",
    }
}

fn render(t: &PairingTable, f: Format) -> String {
    match f {
        Format::Markdown => t.to_markdown(),
        Format::Csv => t.to_csv(),
        Format::Json => serde_json::to_string_pretty(&t.to_json()).unwrap() + "\n",
    }
}

fn cmd_pair(cli: &Cli) -> CmdResult {
    let mut ok = true;
    for g in cli.gamma.groups() {
        let t = pairing::generate_table(g);
        let body = render(&t, cli.format);
        match &cli.out {
            Some(dir) => write_file(
                dir,
                &format!("{}-table.{}", g.tag().to_lowercase(), cli.format.ext()),
                &body,
            )?,
            None => println!("{body}"),
        }
    }
    if cli.numeric_check {
        for c in numeric_checks(cli) {
            eprintln!(
                "{} {} ({})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
            ok &= c.passed;
        }
    }
    Ok(ok)
}

fn cmd_reconcile(cli: &Cli) -> CmdResult {
    let mut ok = true;
    for g in cli.gamma.groups() {
        let r = pairing::reconcile(g);
        ok &= r.strict_failures().is_empty();
        let json = serde_json::to_string_pretty(&r.to_json()).unwrap() + "\n";
        match &cli.out {
            Some(dir) => {
                write_file(
                    dir,
                    &format!("{}-reconcile.json", g.tag().to_lowercase()),
                    &json,
                )?;
                print!("{}", r.diff());
            }
            None if cli.format == Format::Json => print!("{json}"),
            None => print!("{}", r.diff()),
        }
    }
    if cli.numeric_check {
        for c in numeric_checks(cli) {
            eprintln!(
                "{} {} ({})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
            ok &= c.passed;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify => cmd_verify(&cli),
        Command::Dims => cmd_dims(&cli),
        Command::Pair => cmd_pair(&cli),
        Command::Reconcile => cmd_reconcile(&cli),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
