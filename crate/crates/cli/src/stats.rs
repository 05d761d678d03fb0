use std::path::PathBuf;

use clap::Args;
use ubifim::ItemId;

use crate::{read_db, CliError};

#[derive(Args)]
pub struct StatsArgs {
    /// FIMI transaction file to summarize
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Number of histogram buckets over the support range [0, 1]
    #[arg(long, value_name = "K", default_value_t = 10)]
    buckets: usize,
}

pub fn run(args: StatsArgs) -> Result<(), CliError> {
    if args.buckets == 0 {
        return Err(CliError::usage("--buckets must be at least 1"));
    }
    let db = read_db(&args.input)?;
    let n = db.n();
    println!("transactions={n}");
    println!("items={}", db.items().len());

    // Highest support first; ties break toward the smaller id so the
    // table order is stable.
    let mut table: Vec<(ItemId, u64)> = db.items().iter().map(|&i| (i, db.census_of(i))).collect();
    table.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for (item, count) in &table {
        println!(
            "item={item} count={count} support={:.6}",
            *count as f64 / n as f64
        );
    }

    // Bucket i covers [i/K, (i+1)/K); the last bucket also takes 1.0.
    let k = args.buckets;
    let mut histogram = vec![0usize; k];
    for &(_, count) in &table {
        let support = count as f64 / n as f64;
        let bucket = ((support * k as f64) as usize).min(k - 1);
        histogram[bucket] += 1;
    }
    for (i, filled) in histogram.iter().enumerate() {
        let lo = i as f64 / k as f64;
        let hi = (i + 1) as f64 / k as f64;
        let close = if i + 1 == k { ']' } else { ')' };
        println!("bucket=[{lo:.6},{hi:.6}{close} items={filled}");
    }
    Ok(())
}
