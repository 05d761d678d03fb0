use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args};
use ubifim::datagen::{self, ExperimentPreset, GeneratorSpec, RNG_ALGORITHM};
use ubifim::fimi::write_fimi;

use crate::CliError;

#[derive(Args)]
#[command(group(ArgGroup::new("layout").required(true).args(["spec", "preset"])))]
pub struct GenerateArgs {
    /// Item groups as count:support pairs, e.g. "10:0.3,5:0.5,2:1.0"
    #[arg(long, value_name = "GROUPS")]
    spec: Option<String>,
    /// A stock experiment layout (FIM1..FIM5)
    #[arg(long, value_name = "NAME", value_parser = ExperimentPreset::from_str)]
    preset: Option<ExperimentPreset>,
    /// Number of transactions to generate
    #[arg(long, value_name = "N", default_value_t = 10_000)]
    transactions: usize,
    /// RNG seed; placements are a pure function of (seed, item index)
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,
    /// Where to write the FIMI-format dataset
    #[arg(long, value_name = "PATH")]
    output: PathBuf,
}

pub fn run(args: GenerateArgs) -> Result<(), CliError> {
    let groups = match (&args.spec, args.preset) {
        (Some(text), None) => {
            datagen::parse_groups(text).map_err(|e| CliError::usage(e.to_string()))?
        }
        (None, Some(preset)) => datagen::experiment_spec(preset).groups,
        _ => unreachable!("clap enforces exactly one of --spec/--preset"),
    };
    let spec = GeneratorSpec {
        groups,
        n_transactions: args.transactions,
        seed: args.seed,
    };
    let db = datagen::generate(&spec).map_err(|e| CliError::usage(e.to_string()))?;

    let file = File::create(&args.output)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", args.output.display())))?;
    write_fimi(&db, BufWriter::new(file))
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", args.output.display())))?;

    let n = db.n();
    println!("transactions={n}");
    println!("items={}", db.items().len());
    println!("seed={}", args.seed);
    println!("rng={RNG_ALGORITHM}");
    for &item in db.items() {
        let count = db.census_of(item);
        println!(
            "item={item} count={count} support={:.6}",
            count as f64 / n as f64
        );
    }
    let empty = db
        .transactions()
        .iter()
        .filter(|t| t.items.is_empty())
        .count();
    if empty > 0 {
        eprintln!(
            "warning: {empty} transaction(s) came out empty; the FIMI format cannot \
             represent them, so reloading {} yields {} transactions",
            args.output.display(),
            n - empty
        );
    }
    Ok(())
}
