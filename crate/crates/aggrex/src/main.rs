use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aggrex::bench::{
    emit_csv, emit_markdown, load_config, run_experiment, summarize, GroupBy, Method,
};
use aggrex::cep::{build_lp, extract_investments};
use aggrex::cluster::{
    cluster_clustering, initial_partition, kk_means, kmeans, level_correlation, FuzzyOpts,
    KmeansOpts,
};
use aggrex::features::build_day_elements;
use aggrex::instance::{generate_synthetic, load_instance, save_instance, SyntheticSpec};
use aggrex::select::{apply_plan, build_plan, dummy_selection, Strategy};
use aggrex::solve::{check_feasibility, read_lp_file, solve_lp, write_lp_file, SolveOpts};

#[derive(Parser)]
#[command(name = "aggrex", about = "Time aggregation toolkit for capacity expansion models", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance from a spec file
    Gen {
        /// Generator spec (TOML); omitted = defaults
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Inspect the day elements of an instance
    Features {
        #[arg(long)]
        instance: PathBuf,
        /// Print the per-day feature sums as CSV
        #[arg(long)]
        dump_sums: bool,
    },
    /// Select representative days and write the aggregated instance
    Select(SelectArgs),
    /// Build the capacity expansion LP and write it in LP format
    BuildLp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an LP file and print objective and investments
    Solve {
        #[arg(long)]
        lp: PathBuf,
    },
    /// Full-horizon reference solve of an instance
    Full {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run a benchmark experiment from a config file
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also print a markdown table to stdout
        #[arg(long)]
        markdown: bool,
    },
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    instance: PathBuf,
    /// dummy | k | cc | lc | kk
    #[arg(long, default_value = "k")]
    method: String,
    /// min | max | median | cmean | random | medianmaxmin
    #[arg(long, default_value = "median")]
    strategy: String,
    #[arg(long, default_value_t = 28)]
    clusters: usize,
    #[arg(long, default_value_t = 7)]
    outer_clusters: usize,
    #[arg(long, default_value_t = 4)]
    inner_clusters: usize,
    #[arg(long, conflicts_with = "non_weighted")]
    weighted: bool,
    #[arg(long)]
    non_weighted: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn run() -> Result<(), String> {
    match Cli::parse().command {
        Command::Gen { spec, seed, out } => {
            let spec = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    toml::from_str::<SyntheticSpec>(&text).map_err(|e| e.to_string())?
                }
                None => SyntheticSpec::default(),
            };
            let instance = generate_synthetic(&spec, seed).map_err(|e| e.to_string())?;
            save_instance(&instance, &out).map_err(|e| e.to_string())?;
            println!(
                "wrote {} ({} areas, {} hours)",
                out.display(),
                instance.areas.len(),
                instance.meta.horizon
            );
            Ok(())
        }
        Command::Features {
            instance,
            dump_sums,
        } => {
            let inst = load_instance(&instance).map_err(|e| e.to_string())?;
            let fs = build_day_elements(&inst);
            if dump_sums {
                print!("{}", fs.dump_sums_csv());
            } else {
                println!(
                    "{} days x {} series x {} hours",
                    fs.n_days,
                    fs.n_series(),
                    fs.day_length
                );
            }
            Ok(())
        }
        Command::Select(args) => {
            let inst = load_instance(&args.instance).map_err(|e| e.to_string())?;
            let n_days = inst.meta.horizon / inst.meta.day_length;
            let method: Method = args.method.parse()?;
            let plan = if method == Method::Dummy {
                dummy_selection(n_days, 13)
            } else {
                let fs = build_day_elements(&inst);
                let clustering = match method {
                    Method::Dummy => unreachable!(),
                    Method::K => kmeans(
                        &fs,
                        args.clusters,
                        &initial_partition(n_days, args.clusters),
                        KmeansOpts::default(),
                    ),
                    Method::Cc => cluster_clustering(
                        &fs,
                        args.outer_clusters,
                        args.inner_clusters,
                        KmeansOpts::default(),
                    ),
                    Method::Lc => level_correlation(
                        &fs,
                        args.outer_clusters,
                        args.inner_clusters,
                        FuzzyOpts::default(),
                    ),
                    Method::Kk => kk_means(
                        &fs,
                        args.outer_clusters,
                        args.inner_clusters,
                        KmeansOpts::default(),
                    ),
                };
                let strategy: Strategy = args.strategy.parse()?;
                build_plan(&fs, &clustering, args.weighted, strategy, args.seed)
            };
            let aggregated = apply_plan(&inst, &plan);
            save_instance(&aggregated, &args.out).map_err(|e| e.to_string())?;
            println!(
                "selected {} of {} days -> {}",
                plan.n_selected(),
                n_days,
                args.out.display()
            );
            Ok(())
        }
        Command::BuildLp { instance, out } => {
            let inst = load_instance(&instance).map_err(|e| e.to_string())?;
            let lp = build_lp(&inst).map_err(|e| e.to_string())?;
            write_lp_file(&lp, &out).map_err(|e| e.to_string())?;
            println!(
                "wrote {} ({} vars, {} constraints)",
                out.display(),
                lp.n_vars(),
                lp.n_constraints()
            );
            Ok(())
        }
        Command::Solve { lp } => {
            let problem = read_lp_file(&lp).map_err(|e| e.to_string())?;
            let sol = solve_lp(&problem, &SolveOpts::default()).map_err(|e| e.to_string())?;
            println!("status: {:?}", sol.status);
            println!("iterations: {}", sol.iterations);
            if sol.is_optimal() {
                check_feasibility(&problem, &sol.values, 1e-5)?;
                println!("objective: {:.6}", sol.objective);
            }
            Ok(())
        }
        Command::Full { instance } => {
            let inst = load_instance(&instance).map_err(|e| e.to_string())?;
            let lp = build_lp(&inst).map_err(|e| e.to_string())?;
            let started = std::time::Instant::now();
            let sol = solve_lp(&lp, &SolveOpts::default()).map_err(|e| e.to_string())?;
            let elapsed = started.elapsed().as_secs_f64();
            if !sol.is_optimal() {
                return Err(format!("solve ended with status {:?}", sol.status));
            }
            check_feasibility(&lp, &sol.values, 1e-5)?;
            let inv = extract_investments(&lp, &sol.values).map_err(|e| e.to_string())?;
            println!("objective: {:.6}", sol.objective);
            println!("solve time: {elapsed:.3} s");
            for (id, v) in &inv.entries {
                println!("invest {id}: {v:.6}");
            }
            Ok(())
        }
        Command::Bench {
            config,
            out,
            markdown,
        } => {
            let config = load_config(&config).map_err(|e| e.to_string())?;
            let report = run_experiment(&config).map_err(|e| e.to_string())?;
            std::fs::write(&out, emit_csv(&report)).map_err(|e| e.to_string())?;
            if markdown {
                println!("{}", emit_markdown(&report));
                for (group, label) in [
                    (GroupBy::Method, "method"),
                    (GroupBy::Strategy, "strategy"),
                    (GroupBy::Weighting, "weighting"),
                ] {
                    for (key, mean) in summarize(&report, group) {
                        println!("mean gap by {label} {key}: {:.1}%", mean * 100.0);
                    }
                }
            }
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
