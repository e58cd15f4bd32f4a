use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use sara_cli::bench::{bench_csv_header, run_benchmark};
use sara_cli::config::{MethodKind, SamplingKind, ScenarioConfig};
use sara_cli::imaging::{generate_imaging_scene, run_imaging_2d, ImagingConfig};
use sara_cli::records::StoredRecord;
use sara_cli::runner::{
    multi_csv_header, reconstruct_for_method, run_multi_target, run_single_target,
    single_csv_header, sweep_plan,
};
use sara_cli::{metrics_lines, METRICS_CSV_HEADER};
use sara_core::detection::{detect, DetectorConfig};
use sara_core::signal::{scan_scene, Scene2d};
use sara_core::{ScanMode, Scene};

#[derive(Parser)]
#[command(
    name = "sara",
    about = "Angular sampling, loss-less reconstruction and target detection for uniform arrays",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a scene file along the configured sampling plan.
    Scan {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Scene JSON: {"scatterers": [{"lad", "amp_re", "amp_im", "speed"}], "noise_power_db"}.
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        sampling: Option<SamplingKind>,
    },
    /// Upsample a stored scan record to the fine grid.
    Reconstruct {
        #[arg(long)]
        record: PathBuf,
        #[arg(long, value_enum, default_value = "sara-ar")]
        method: MethodKind,
        #[arg(long, default_value_t = 16)]
        upsample: usize,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a stored record and extract targets.
    Detect {
        #[arg(long)]
        record: PathBuf,
        #[arg(long, value_enum, default_value = "sara-ar")]
        method: MethodKind,
        #[arg(long, default_value_t = 16)]
        upsample: usize,
        /// Per-antenna noise power in dB used for the CFAR threshold.
        #[arg(long, allow_hyphen_values = true)]
        noise_db: f64,
        #[arg(long, default_value_t = 1e-3)]
        p_fa: f64,
        #[arg(long, default_value_t = 6.0)]
        kappa: f64,
        /// Output JSON-lines path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Single-target Monte Carlo: LAD RMSE, peak RMSE and the CRLB reference.
    McSingle {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum)]
        method: Vec<MethodKind>,
        #[arg(long, value_enum)]
        sampling: Option<SamplingKind>,
    },
    /// Multi-target Monte Carlo: false alarms, missed detections, LAD RMSE
    /// versus target spacing.
    McMulti {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum)]
        method: Vec<MethodKind>,
        #[arg(long, value_enum)]
        sampling: Option<SamplingKind>,
        /// Minimum LAD spacings to sweep.
        #[arg(long, value_delimiter = ',')]
        delta_lad: Vec<f64>,
    },
    /// 2D URA imaging: dense reference, coarse scan, reconstructions, errors.
    Image2d {
        /// 2D scene JSON; omit to generate a random one.
        #[arg(long)]
        scene: Option<PathBuf>,
        /// Number of random scatterers when generating a scene.
        #[arg(long, default_value_t = 5017)]
        generate: usize,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        upsample: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruction timing trend at fixed output size.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [16usize, 32, 64, 128])]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 256)]
        output_size: usize,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<ScenarioConfig> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            Ok(ScenarioConfig::from_json(&text)?)
        }
        None => Ok(ScenarioConfig::default()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn append_metrics(dir: &Path, lines: &[String]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join("metrics.csv");
    let mut file = if path.exists() {
        fs::OpenOptions::new().append(true).open(&path)?
    } else {
        let mut f = fs::File::create(&path)?;
        writeln!(f, "{METRICS_CSV_HEADER}")?;
        f
    };
    for line in lines {
        writeln!(file, "{line}")?;
    }
    Ok(())
}

fn configure_threads() {
    if let Ok(v) = std::env::var("SARA_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() -> Result<()> {
    configure_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::Scan { config, scene, out, seed, sampling } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.rng_seed = s;
            }
            if let Some(s) = sampling {
                cfg.sampling = s;
            }
            cfg.validate()?;
            let text = fs::read_to_string(&scene)
                .with_context(|| format!("reading scene {}", scene.display()))?;
            let scene = Scene::from_json(&text)?;
            let g = cfg.geometry()?;
            let scan_order = match cfg.mode {
                ScanMode::Monostatic => g.sum_coarray(),
                ScanMode::RxOnly => g,
            };
            let plan = sweep_plan(&scan_order, cfg.sampling)?;
            let record = scan_scene(&scene, &g, &plan, cfg.mode, cfg.scan_period_s, cfg.rng_seed)?;
            let stored = StoredRecord {
                geometry: g,
                mode: cfg.mode,
                plan: plan.clone(),
                scan_period: cfg.scan_period_s,
                record,
            };
            write_file(&out.join("plan.json"), &plan.to_json())?;
            write_file(&out.join("record.json"), &stored.to_json())?;
            println!("scanned {} directions -> {}", stored.record.entries.len(), out.display());
        }
        Command::Reconstruct { record, method, upsample, out } => {
            let stored = StoredRecord::from_json(&fs::read_to_string(&record)?)?;
            let resp = reconstruct_for_method(&stored.record, &stored.plan, upsample, method)?;
            let mut buf = Vec::new();
            resp.to_csv(&mut buf)?;
            write_file(&out, std::str::from_utf8(&buf)?)?;
            println!("reconstructed {} points -> {}", resp.len(), out.display());
        }
        Command::Detect { record, method, upsample, noise_db, p_fa, kappa, out } => {
            let stored = StoredRecord::from_json(&fs::read_to_string(&record)?)?;
            let resp = reconstruct_for_method(&stored.record, &stored.plan, upsample, method)?;
            let noise_power = 10f64.powf(noise_db / 10.0);
            let mut det_cfg =
                DetectorConfig::for_array(&stored.geometry, stored.mode, p_fa, noise_power)?;
            det_cfg.kappa = kappa;
            let report = detect(&resp, &det_cfg);
            write_file(&out, &(report.to_json_line() + "\n"))?;
            println!(
                "detected {} peak(s), zeta {:.4}, zeta' {:.4} -> {}",
                report.peaks.len(),
                report.zeta,
                report.zeta_prime,
                out.display()
            );
        }
        Command::McSingle { config, out, seed, trials, method, sampling } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.rng_seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if !method.is_empty() {
                cfg.methods = method;
            }
            if let Some(s) = sampling {
                cfg.sampling = s;
            }
            let rows = run_single_target(&cfg)?;
            let mut csv = String::from(single_csv_header());
            csv.push('\n');
            let mut long = Vec::new();
            for r in &rows {
                csv.push_str(&r.to_csv());
                csv.push('\n');
                let scenario = format!(
                    "single:n{}:{}:{}",
                    r.n_elements,
                    r.sampling.as_str(),
                    r.method.as_str()
                );
                long.extend(metrics_lines(
                    &scenario,
                    r.noise_db,
                    &[("lad_rmse", r.lad_rmse), ("peak_rmse", r.peak_rmse), ("crlb", r.crlb)],
                    r.trials,
                ));
            }
            write_file(&out.join("single_target.csv"), &csv)?;
            append_metrics(&out, &long)?;
            println!("{} rows -> {}", rows.len(), out.join("single_target.csv").display());
        }
        Command::McMulti { config, out, seed, trials, method, sampling, delta_lad } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.rng_seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if !method.is_empty() {
                cfg.methods = method;
            } else if cfg.methods.contains(&MethodKind::Absmax)
                || cfg.methods.contains(&MethodKind::SaraRed)
            {
                cfg.methods = vec![MethodKind::SaraAr, MethodKind::Cubic];
            }
            if let Some(s) = sampling {
                cfg.sampling = s;
            }
            if !delta_lad.is_empty() {
                cfg.delta_lad = delta_lad;
            }
            if cfg.delta_lad.is_empty() {
                let k = 2 * cfg.n_elements - 1;
                cfg.delta_lad = (1..=8).map(|i| i as f64 * 0.5 / k as f64).collect();
            }
            let rows = run_multi_target(&cfg)?;
            let mut csv = String::from(multi_csv_header());
            csv.push('\n');
            let mut long = Vec::new();
            for r in &rows {
                csv.push_str(&r.to_csv());
                csv.push('\n');
                let scenario = format!(
                    "multi:n{}:{}:{}:k{}:{}dB",
                    r.n_elements,
                    r.sampling.as_str(),
                    r.method.as_str(),
                    r.kappa,
                    r.noise_db
                );
                long.extend(metrics_lines(
                    &scenario,
                    r.delta_lad,
                    &[("p_fa", r.p_fa), ("p_md", r.p_md), ("lad_rmse", r.lad_rmse)],
                    r.trials,
                ));
            }
            write_file(&out.join("multi_target.csv"), &csv)?;
            append_metrics(&out, &long)?;
            println!("{} rows -> {}", rows.len(), out.join("multi_target.csv").display());
        }
        Command::Image2d { scene, generate, n, upsample, seed, out } => {
            let seed = seed.unwrap_or(1);
            let scene2d = match scene {
                Some(path) => Scene2d::from_json(
                    &fs::read_to_string(&path)
                        .with_context(|| format!("reading scene {}", path.display()))?,
                )?,
                None => generate_imaging_scene(generate, seed),
            };
            let cfg = ImagingConfig { n_elements: n, upsample, rng_seed: seed, ..Default::default() };
            let result = run_imaging_2d(&scene2d, &cfg)?;
            fs::create_dir_all(&out)?;
            for (name, grid) in [
                ("truth", &result.truth),
                ("dense_scan", &result.dense),
                ("coarse_scan", &result.sampled),
                ("sara", &result.sara),
                ("cubic", &result.cubic),
            ] {
                let mut buf = Vec::new();
                grid.to_csv(&mut buf)?;
                write_file(&out.join(format!("{name}.csv")), std::str::from_utf8(&buf)?)?;
            }
            let eps = format!(
                "method,normalized_rmse\nsara,{}\ncubic,{}\n",
                result.eps_sara, result.eps_cubic
            );
            write_file(&out.join("eps.csv"), &eps)?;
            println!(
                "eps_sara {:.3e}, eps_cubic {:.3}, grids -> {}",
                result.eps_sara,
                result.eps_cubic,
                out.display()
            );
        }
        Command::Bench { orders, output_size, reps, seed, out } => {
            if reps == 0 {
                bail!("reps must be positive");
            }
            let rows = run_benchmark(&orders, output_size, reps, seed.unwrap_or(1))?;
            let mut csv = String::from(bench_csv_header());
            csv.push('\n');
            for r in &rows {
                csv.push_str(&r.to_csv());
                csv.push('\n');
            }
            write_file(&out.join("bench.csv"), &csv)?;
            println!("{} rows -> {}", rows.len(), out.join("bench.csv").display());
        }
    }
    Ok(())
}
