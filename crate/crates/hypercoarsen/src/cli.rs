//! Command-line driver: argument types, subcommand implementations, and
//! the error-class → exit-code mapping. The binary in `src/bin` is a
//! thin wrapper around [`run`].

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::coarsen::{
    balanced_assign, coarsen, load_partition_file, CoarsenConfig, CoarseningResult, Partitioning,
};
use crate::embed::smooth_embed;
use crate::eval::{
    cut_preservation, kway_conductance, oracle_suite, phi_summary, run_baseline, BaselineKind,
    EvalReport, FileBisector, SpectralBisector,
};
use crate::hypergraph::{parse_hmetis, star_expand, write_hmetis};
use crate::report::Report;
use crate::{Error, Hypergraph, Result};

#[derive(Debug, Parser)]
#[command(
    name = "hypercoarsen",
    version,
    about = "Spectral hypergraph coarsening with strongly-local flow-based refinement"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coarsen a hypergraph; write the coarse .hgr, vertex map, and report.
    Coarsen(CoarsenArgs),
    /// Coarsen, then measure conductance and cut preservation.
    Eval(EvalArgs),
    /// Produce a balanced k-way partitioning via the coarsening pipeline.
    Partition(PartitionArgs),
    /// Run the bundled brute-force self-checks.
    Oracle(OracleArgs),
}

/// Parameters shared by the pipeline commands. Defaults mirror
/// [`CoarsenConfig::default`].
#[derive(Debug, Clone, Args)]
struct CommonArgs {
    /// Input hypergraph in hMETIS format.
    input: PathBuf,
    /// Target reduction ratio in (0,1): coarse size aims at (1−rr)·n.
    #[arg(long, default_value_t = 0.5)]
    rr: f64,
    /// Embedding dimension.
    #[arg(long, default_value_t = 25)]
    k: usize,
    /// Gauss–Seidel smoothing sweeps.
    #[arg(long, default_value_t = 10)]
    iters: usize,
    /// Locality parameter δ of the flow objective.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Refinement convergence threshold ε.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Work-partition count for parallel refinement (default: n/5000).
    #[arg(long)]
    parts: Option<usize>,
    /// Seed for every random stage.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker thread count (default: available parallelism). Never
    /// changes results, only speed.
    #[arg(long)]
    threads: Option<usize>,
    /// Merge identical coarse hyperedges, summing weights.
    #[arg(long)]
    dedup: bool,
    /// Drop coarse hyperedges with fewer than two pins.
    #[arg(long)]
    prune_singletons: bool,
    /// Externally computed partition (one part id per vertex line).
    /// Replaces the internal bisection stage it applies to.
    #[arg(long)]
    partition_file: Option<PathBuf>,
    /// Prefix for output files (default: the input path without `.hgr`).
    #[arg(long)]
    out_prefix: Option<PathBuf>,
}

#[derive(Debug, Parser)]
struct CoarsenArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Parser)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also partition into this many parts and report k-way conductance.
    #[arg(long)]
    nparts: Option<usize>,
    /// Imbalance budget (percent) for --nparts.
    #[arg(long, default_value_t = 5.0)]
    ubfactor: f64,
    /// Also run a reference coarsening at the same rr and report its Φ.
    #[arg(long, value_parser = parse_baseline)]
    baseline: Option<BaselineKind>,
}

#[derive(Debug, Parser)]
struct PartitionArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of parts.
    #[arg(long)]
    nparts: usize,
    /// Imbalance budget in percent: per-part capacity is
    /// floor((1 + ubfactor/100)·n/nparts).
    #[arg(long, default_value_t = 5.0)]
    ubfactor: f64,
}

#[derive(Debug, Parser)]
struct OracleArgs {
    /// Seed for the randomized check instances.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random instances per check.
    #[arg(long, default_value_t = 20)]
    instances: usize,
    /// Negative control: damage every flow gadget first; the suite must
    /// then detect the mismatch and fail.
    #[arg(long)]
    corrupt_gadget: bool,
}

fn parse_baseline(value: &str) -> std::result::Result<BaselineKind, String> {
    match value {
        "random" => Ok(BaselineKind::Random),
        "star" => Ok(BaselineKind::Star),
        "clique" => Ok(BaselineKind::Clique),
        other => Err(format!(
            "unknown baseline `{other}` (expected random, star, or clique)"
        )),
    }
}

/// Error class for the one-line diagnostic and the process exit code:
/// 2 = configuration, 3 = input/output, 4 = oracle mismatch.
pub fn error_class(err: &Error) -> (&'static str, i32) {
    match err {
        Error::Param { .. }
        | Error::Degenerate(_)
        | Error::CapacityOverflow
        | Error::OracleTooLarge { .. } => ("config", 2),
        Error::OracleMismatch(_) => ("oracle", 4),
        _ => ("io", 3),
    }
}

/// Run a parsed command line. The binary maps errors to exit codes via
/// [`error_class`].
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Coarsen(args) => cmd_coarsen(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Partition(args) => cmd_partition(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

impl CommonArgs {
    fn to_config(&self) -> Result<CoarsenConfig> {
        let config = CoarsenConfig {
            rr: self.rr,
            k: self.k,
            iters: self.iters,
            delta: self.delta,
            epsilon: self.epsilon,
            parts: self.parts,
            seed: self.seed,
            dedup: self.dedup,
            prune_singletons: self.prune_singletons,
            ..CoarsenConfig::default()
        };
        config.validate()?;
        Ok(config)
    }

    fn init_threads(&self) -> Result<()> {
        if let Some(threads) = self.threads {
            if threads == 0 {
                return Err(Error::param("threads", "thread count must be at least 1"));
            }
            // Ignore the error from configuring twice (tests call run()
            // repeatedly in one process).
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
        Ok(())
    }

    fn load_input(&self) -> Result<Hypergraph> {
        let text = fs::read_to_string(&self.input)?;
        parse_hmetis(&text)
    }

    fn load_partition(&self, n: usize) -> Result<Option<Partitioning>> {
        match &self.partition_file {
            None => Ok(None),
            Some(path) => {
                let text = fs::read_to_string(path)?;
                Ok(Some(load_partition_file(&text, n)?))
            }
        }
    }

    fn out_prefix(&self) -> PathBuf {
        match &self.out_prefix {
            Some(prefix) => prefix.clone(),
            None => self.input.with_extension(""),
        }
    }

    /// Configuration echo shared by every report. Execution-environment
    /// knobs (threads) and wall-clock times stay out of output files so
    /// identical configs yield byte-identical outputs.
    fn echo_into(&self, report: &mut Report, command: &str) {
        report.set("command", command);
        report.set(
            "input",
            self.input
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        );
        report.set("rr", self.rr);
        report.set("k", self.k);
        report.set("iters", self.iters);
        report.set("delta", self.delta);
        report.set("epsilon", self.epsilon);
        report.set(
            "parts",
            self.parts
                .map_or_else(|| "auto".into(), |p: usize| p.to_string()),
        );
        report.set("seed", self.seed);
        report.set("dedup", self.dedup);
        report.set("prune_singletons", self.prune_singletons);
    }

    /// In eval mode the external partition may describe either the
    /// original hypergraph or the coarse one; accept whichever fits.
    fn load_partition_any(
        &self,
        h: &Hypergraph,
        result: &CoarseningResult,
    ) -> Result<Option<Partitioning>> {
        let Some(path) = &self.partition_file else {
            return Ok(None);
        };
        let text = fs::read_to_string(path)?;
        load_partition_file(&text, h.vertex_count())
            .or_else(|_| load_partition_file(&text, result.coarse.vertex_count()))
            .map(Some)
    }

    /// One-line config stamp for `%`-comment headers of non-report files.
    fn stamp(&self, command: &str) -> String {
        format!(
            "% hypercoarsen {command} rr={} k={} iters={} delta={} epsilon={} parts={} seed={} dedup={} prune_singletons={}",
            self.rr,
            self.k,
            self.iters,
            self.delta,
            self.epsilon,
            self.parts.map_or_else(|| "auto".into(), |p: usize| p.to_string()),
            self.seed,
            self.dedup,
            self.prune_singletons,
        )
    }
}

/// Collects output files so a failure partway through leaves nothing
/// behind.
struct Outputs {
    written: Vec<PathBuf>,
}

impl Outputs {
    fn new() -> Self {
        Outputs {
            written: Vec::new(),
        }
    }

    fn write(&mut self, path: PathBuf, content: &str) -> Result<()> {
        if let Err(err) = fs::write(&path, content) {
            self.discard();
            return Err(err.into());
        }
        self.written.push(path);
        Ok(())
    }

    fn discard(&mut self) {
        for path in self.written.drain(..) {
            let _ = fs::remove_file(path);
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn vertex_map_text(stamp: &str, vertex_map: &[u32]) -> String {
    let mut out = String::with_capacity(stamp.len() + 2 * vertex_map.len() + 1);
    out.push_str(stamp);
    out.push('\n');
    for &c in vertex_map {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

fn coarsening_report(common: &CommonArgs, h: &Hypergraph, result: &CoarseningResult) -> Report {
    let mut report = Report::new();
    common.echo_into(&mut report, "coarsen");
    report.set("vertices", h.vertex_count());
    report.set("hyperedges", h.hyperedge_count());
    report.set("coarse_vertices", result.coarse.vertex_count());
    report.set("coarse_hyperedges", result.coarse.hyperedge_count());
    report.set_float(
        "reduction",
        1.0 - result.coarse.vertex_count() as f64 / h.vertex_count() as f64,
    );
    report.set("clusters", result.assignment.cluster_count());
    report.set_float("phi_avg", result.phi_avg);
    report
}

fn print_with_timings(report: &Report, timings: &[(&str, u64)]) {
    let mut full = report.clone();
    for &(key, ms) in timings {
        full.set(key, ms);
    }
    print!("{}", full.to_text());
}

fn cmd_coarsen(args: CoarsenArgs) -> Result<()> {
    let common = &args.common;
    common.init_threads()?;
    let mut config = common.to_config()?;
    let h = common.load_input()?;
    config.partitioning = common.load_partition(h.vertex_count())?;

    let result = coarsen(&h, &config)?;
    let report = coarsening_report(common, &h, &result);

    let prefix = common.out_prefix();
    let stamp = common.stamp("coarsen");
    let mut outputs = Outputs::new();
    outputs.write(
        with_suffix(&prefix, ".coarse.hgr"),
        &format!("{stamp}\n{}", write_hmetis(&result.coarse)),
    )?;
    outputs.write(
        with_suffix(&prefix, ".map"),
        &vertex_map_text(&stamp, &result.vertex_map),
    )?;
    outputs.write(with_suffix(&prefix, ".report"), &report.to_text())?;

    let t = &result.timings;
    print_with_timings(
        &report,
        &[
            ("embed_ms", t.embed_ms),
            ("seed_ms", t.seed_ms),
            ("partition_ms", t.partition_ms),
            ("refine_ms", t.refine_ms),
            ("contract_ms", t.contract_ms),
            ("total_ms", t.total_ms),
        ],
    );
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let common = &args.common;
    common.init_threads()?;
    let config = common.to_config()?;
    let h = common.load_input()?;
    let started = Instant::now();

    let result = coarsen(&h, &config)?;
    let phi = phi_summary(&h, &result.assignment)?;

    let fallback = SpectralBisector {
        k: config.k,
        iters: config.iters,
        seed: config.seed,
    };
    let external = common.load_partition_any(&h, &result)?;
    let cut = match external {
        Some(partitioning) => {
            let bisector = FileBisector {
                partitioning,
                fallback,
            };
            cut_preservation(&h, &result, &bisector)?
        }
        None => cut_preservation(&h, &result, &fallback)?,
    };

    let kway = match args.nparts {
        None => None,
        Some(nparts) => {
            let bip = star_expand(&h);
            let emb = smooth_embed(&bip, config.k, config.iters, config.seed)?;
            let parts = balanced_assign(&h, &emb, nparts, args.ubfactor, &config)?;
            Some((nparts, kway_conductance(&h, &parts)?))
        }
    };

    let baseline = match args.baseline {
        None => None,
        Some(kind) => {
            let reference = run_baseline(&h, kind, config.rr, config.seed)?;
            Some((kind, reference.phi_avg))
        }
    };

    let eval = EvalReport {
        delta: config.delta,
        phi,
        cut: Some(cut),
        kway_conductance: kway.map(|(_, value)| value),
        baseline,
        wall_ms: started.elapsed().as_millis() as u64,
    };

    let mut report = Report::new();
    common.echo_into(&mut report, "eval");
    report.set("vertices", h.vertex_count());
    report.set("coarse_vertices", result.coarse.vertex_count());
    if let Some((nparts, _)) = kway {
        report.set("nparts", nparts);
        report.set_float("ubfactor", args.ubfactor);
    }
    for (key, value) in eval.to_report().entries() {
        // delta was already echoed; wall clock goes to stdout only.
        if key != "delta" && key != "wall_ms" {
            report.set(key, value);
        }
    }

    let prefix = common.out_prefix();
    let mut outputs = Outputs::new();
    outputs.write(with_suffix(&prefix, ".report"), &report.to_text())?;
    outputs.write(with_suffix(&prefix, ".clusters.csv"), &eval.phi.to_csv())?;

    print_with_timings(&report, &[("wall_ms", eval.wall_ms)]);
    Ok(())
}

fn cmd_partition(args: PartitionArgs) -> Result<()> {
    let common = &args.common;
    common.init_threads()?;
    let mut config = common.to_config()?;
    let h = common.load_input()?;
    config.partitioning = common.load_partition(h.vertex_count())?;
    let started = Instant::now();

    let bip = star_expand(&h);
    let emb = smooth_embed(&bip, config.k, config.iters, config.seed)?;
    let parts = balanced_assign(&h, &emb, args.nparts, args.ubfactor, &config)?;
    let max_part = (0..parts.part_count() as u32)
        .map(|p| parts.part(p).len())
        .max()
        .unwrap_or(0);
    let kway = kway_conductance(&h, &parts);

    let mut report = Report::new();
    common.echo_into(&mut report, "partition");
    report.set("vertices", h.vertex_count());
    report.set("nparts", args.nparts);
    report.set_float("ubfactor", args.ubfactor);
    report.set("max_part_size", max_part);
    match kway {
        Ok(value) => report.set_float("kway_conductance", value),
        // Parts of isolated vertices have no conductance; report that
        // instead of failing the whole command.
        Err(Error::Degenerate(reason)) => report.set("kway_conductance", format!("n/a ({reason})")),
        Err(err) => return Err(err),
    }

    let stamp = common.stamp("partition");
    let mut lines = String::with_capacity(stamp.len() + 2 * h.vertex_count());
    lines.push_str(&stamp);
    lines.push('\n');
    for v in 0..h.vertex_count() as u32 {
        lines.push_str(&parts.part_of(v).to_string());
        lines.push('\n');
    }

    let prefix = common.out_prefix();
    let mut outputs = Outputs::new();
    outputs.write(with_suffix(&prefix, ".parts"), &lines)?;
    outputs.write(with_suffix(&prefix, ".report"), &report.to_text())?;

    print_with_timings(
        &report,
        &[("wall_ms", started.elapsed().as_millis() as u64)],
    );
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let report = oracle_suite(args.seed, args.instances, args.corrupt_gadget);
    print!("{}", report.to_text());
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        Err(Error::OracleMismatch(failed.join(", ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(error_class(&Error::param("rr", "bad")), ("config", 2));
        assert_eq!(error_class(&Error::Degenerate("x".into())), ("config", 2));
        assert_eq!(
            error_class(&Error::OracleTooLarge { n: 30, cap: 20 }),
            ("config", 2)
        );
        assert_eq!(
            error_class(&Error::OracleMismatch("flow".into())),
            ("oracle", 4)
        );
        assert_eq!(
            error_class(&Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "gone"
            ))),
            ("io", 3)
        );
        assert_eq!(error_class(&Error::Header("bad".into())), ("io", 3));
    }

    #[test]
    fn baseline_names_parse() {
        assert_eq!(parse_baseline("random").unwrap(), BaselineKind::Random);
        assert_eq!(parse_baseline("star").unwrap(), BaselineKind::Star);
        assert_eq!(parse_baseline("clique").unwrap(), BaselineKind::Clique);
        assert!(parse_baseline("metis").is_err());
    }

    #[test]
    fn suffix_helper_appends_without_touching_extensions() {
        assert_eq!(
            with_suffix(Path::new("runs/design"), ".map"),
            PathBuf::from("runs/design.map")
        );
        assert_eq!(
            with_suffix(Path::new("a.b"), ".coarse.hgr"),
            PathBuf::from("a.b.coarse.hgr")
        );
    }
}
