//! `repulse bench`: wall-clock sampler timings over an (N, k) grid, plus the
//! log-log scaling fit of PDS cost against batch size.

use clap::Args as ClapArgs;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::common::{parse_usize_list, write_text};
use crate::errors::{input_err, CliResult};
use repulse_core::sampling::{Method, Radius, SamplerConfig, KDPP_MAX_POINTS};
use repulse_core::timing::{log_log_slope, mad_ns, median_ns, pds_bench_radius, time_draws};
use repulse_core::train::gen_sine_dataset;
use repulse_core::DistanceMetric;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Dataset sizes, comma-separated.
    #[arg(long, default_value = "10000,100000")]
    n_list: String,
    /// Batch sizes, comma-separated.
    #[arg(long, default_value = "50,100,200,400,800")]
    k_list: String,
    /// Timed repetitions per cell (one warm-up draw is discarded).
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Methods to time, comma-separated.
    #[arg(long, default_value = "random,vanilla_pds")]
    method_list: String,
    /// Output CSV path (columns: method, n, k, median_ns, mad_ns).
    #[arg(long)]
    out: PathBuf,
    /// Allow kdpp_bruteforce in the method list (exponential; N <= 20 only).
    #[arg(long, default_value_t = false)]
    include_kdpp: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn run(args: &Args) -> CliResult<()> {
    let n_list = parse_usize_list(&args.n_list, "--n-list")?;
    let k_list = parse_usize_list(&args.k_list, "--k-list")?;
    let methods: Vec<Method> = args
        .method_list
        .split(',')
        .map(|tok| tok.trim().parse::<Method>().map_err(Into::into))
        .collect::<CliResult<_>>()?;
    if methods.contains(&Method::KdppBruteforce) && !args.include_kdpp {
        return Err(input_err(
            "kdpp_bruteforce enumerates all subsets; pass --include-kdpp (and keep N <= 20) to time it",
        ));
    }
    eprintln!(
        "[config] bench n_list={n_list:?} k_list={k_list:?} reps={} methods={} seed={} out={}",
        args.reps,
        methods
            .iter()
            .map(Method::name)
            .collect::<Vec<_>>()
            .join(","),
        args.seed,
        args.out.display()
    );

    let mut out = String::from("method,n,k,median_ns,mad_ns\n");
    type SlopeCell = (Method, usize, Vec<(f64, f64)>);
    let mut slope_points: Vec<SlopeCell> = Vec::new();
    for &n in &n_list {
        let dataset = gen_sine_dataset(n, 0.1, 4)?;
        for &method in &methods {
            if method == Method::KdppBruteforce && n > KDPP_MAX_POINTS {
                return Err(input_err(format!(
                    "kdpp_bruteforce requires N <= {KDPP_MAX_POINTS}, got N = {n}"
                )));
            }
            let mut points = Vec::new();
            for &k in &k_list {
                if k > n {
                    continue;
                }
                // PDS cells use the coverage-based radius so batches fill to
                // k at every cell instead of saturating the box.
                let radius = if method.uses_radius() {
                    Radius::Fixed(pds_bench_radius(&dataset, k)?)
                } else {
                    Radius::Auto
                };
                let sampler = SamplerConfig::new(method, k).with_radius(radius).resolve(
                    &dataset,
                    DistanceMetric::Euclidean,
                    args.seed,
                )?;
                let timings = time_draws(&sampler, args.reps, args.seed)?;
                let median = median_ns(&timings);
                let mad = mad_ns(&timings);
                let _ = writeln!(out, "{method},{n},{k},{median},{mad}");
                points.push((k as f64, median as f64));
            }
            if points.len() >= 2 {
                slope_points.push((method, n, points));
            }
        }
    }
    for (method, n, points) in slope_points {
        let slope = log_log_slope(&points)?;
        println!("loglog_slope method={method} n={n} slope={slope:.3}");
    }
    write_text(&args.out, &out)
}
