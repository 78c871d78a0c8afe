//! Command-line surface for the prismatoid workbench.
//!
//! Every command prints a short human report followed by a `key=value` block
//! for scripting, and signals its verdict through the exit status: 0 for a
//! positive verdict (valid / isomorphic / shellable / non-Hirsch / completed),
//! 1 for a clean negative verdict, 2 for usage, parse, or validation errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prismatoid::anneal::{
    anneal_run, inflate_walk, AnnealConfig, AnnealRun, Objective, Schedule, WidthConstraint,
};
use prismatoid::complex::SimplicialComplex;
use prismatoid::dstep::{build_nonhirsch_sphere, SphereCertificate};
use prismatoid::error::Error;
use prismatoid::io;
use prismatoid::iso::{find_isomorphism, find_prismatoid_isomorphism};
use prismatoid::prism::{CertificateKind, Prismatoid, ShellDirection, Sign};
use prismatoid::vertex::Face;

#[derive(Parser)]
#[command(
    name = "prismatoid",
    about = "Workbench for topological prismatoids: validation, flip search, non-Hirsch spheres",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a PRISMATOID or COMPLEX file and print its certificate
    Verify { file: String },
    /// f-vector, layer vector, width and excess of a prismatoid
    Stats { file: String },
    /// Incidence pattern of a prismatoid: arcs, reduced pattern, two-cycles
    Pattern { file: String },
    /// Check a facet order as a prismatoid shelling
    ShellCheck(ShellCheckArgs),
    /// Decide whether two files are isomorphic
    Iso(IsoArgs),
    /// Simulated-annealing search for small non-d-step prismatoids
    Anneal(AnnealArgs),
    /// Insertion-biased random walk growing a prismatoid
    Inflate(InflateArgs),
    /// Raise a non-d-step prismatoid to a non-Hirsch sphere
    Dstep(DstepArgs),
    /// Dual-graph diameter of a complex
    Diameter { file: String },
    /// Re-apply a flip trace to a prismatoid
    Replay(ReplayArgs),
}

#[derive(Args)]
struct ShellCheckArgs {
    file: String,
    /// File whose facet lines give the order to check (default: the input's own order)
    #[arg(long)]
    order: Option<String>,
    /// Base to shell away from
    #[arg(long, value_enum, default_value_t = DirectionFlag::Both)]
    direction: DirectionFlag,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionFlag {
    Plus,
    Minus,
    Both,
}

#[derive(Args)]
struct IsoArgs {
    file_a: String,
    file_b: String,
    /// Compare the underlying complexes only, ignoring base structure
    #[arg(long)]
    ignore_bases: bool,
}

#[derive(Args)]
struct AnnealArgs {
    file: String,
    /// Seed of the first chain; chain k uses seed + k
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 50_000)]
    iters: usize,
    #[arg(long, default_value_t = 1000.0)]
    t0: f64,
    #[arg(long, default_value_t = 0.9997)]
    rate: f64,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Exponent of the neighborhood-size power mean in the cost
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    power: f64,
    #[arg(long, default_value_t = 6)]
    min_width: u32,
    /// Independent chains to run
    #[arg(long, default_value_t = 1)]
    chains: usize,
    /// Ground-set size cap; 0 lifts the cap (default: the start's vertex count)
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Write the best state as a PRISMATOID file
    #[arg(long)]
    out: Option<String>,
    /// Write the best chain's accepted flips up to its best state; replaying
    /// them on the input reproduces the state written by --out
    #[arg(long)]
    trace: Option<String>,
    /// Write the merged (vertices, facets) visit histogram as CSV
    #[arg(long)]
    hist: Option<String>,
}

#[derive(Args)]
struct InflateArgs {
    file: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    steps: usize,
    /// Probability of proposing an insertion at each step
    #[arg(long, default_value_t = 1.0)]
    bias: f64,
    #[arg(long, default_value_t = 6)]
    min_width: u32,
    /// Write the inflated state as a PRISMATOID file
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DstepArgs {
    file: String,
    /// Write the final sphere as a COMPLEX file
    #[arg(long)]
    sphere: Option<String>,
    /// Write the step-by-step certificate
    #[arg(long)]
    certificate: Option<String>,
}

#[derive(Args)]
struct ReplayArgs {
    file: String,
    trace: String,
    /// Write the final state as a PRISMATOID file
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Verify { file } => cmd_verify(&file),
        Command::Stats { file } => cmd_stats(&file),
        Command::Pattern { file } => cmd_pattern(&file),
        Command::ShellCheck(args) => cmd_shell_check(&args),
        Command::Iso(args) => cmd_iso(&args),
        Command::Anneal(args) => cmd_anneal(&args),
        Command::Inflate(args) => cmd_inflate(&args),
        Command::Dstep(args) => cmd_dstep(&args),
        Command::Diameter { file } => cmd_diameter(&file),
        Command::Replay(args) => cmd_replay(&args),
    }
}

fn load_prismatoid(path: &str) -> Result<Prismatoid, Error> {
    let parsed = io::parse_prismatoid_str(&io::read_file(path)?)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.value)
}

fn load_any(path: &str) -> Result<io::AnyFile, Error> {
    let parsed = io::parse_any_str(&io::read_file(path)?)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.value)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn cmd_verify(path: &str) -> Result<bool, Error> {
    match load_any(path)? {
        io::AnyFile::Prismatoid(p) => {
            let cert = p.certify_non_dstep();
            let kind = match cert.kind {
                CertificateKind::PatternAcyclic => "pattern-acyclic",
                CertificateKind::WidthExceeds => "width-exceeds",
                CertificateKind::DStep => "d-step",
            };
            println!(
                "valid prismatoid: d={} dim={} vertices={} facets={}",
                p.d(),
                p.d() - 1,
                p.vertex_count(),
                p.facet_count()
            );
            println!(
                "width {} against d = {}: {} ({kind})",
                cert.width,
                cert.d,
                if cert.non_dstep { "non-d-step" } else { "d-step" },
            );
            println!("kind=prismatoid");
            println!("valid=true");
            println!("d={}", p.d());
            println!("vertices={}", p.vertex_count());
            println!("facets={}", p.facet_count());
            println!("width={}", cert.width);
            println!("non_dstep={}", cert.non_dstep);
            println!("certificate={kind}");
            Ok(true)
        }
        io::AnyFile::Complex(c) => {
            let boundary = c.pseudomanifold_boundary_ridges()?;
            println!(
                "valid complex: dim={} vertices={} facets={}",
                c.dim(),
                c.vertex_count(),
                c.facet_count()
            );
            println!(
                "pure pseudomanifold with {boundary} boundary ridges, euler characteristic {}",
                c.euler_characteristic()
            );
            println!("kind=complex");
            println!("valid=true");
            println!("dim={}", c.dim());
            println!("vertices={}", c.vertex_count());
            println!("facets={}", c.facet_count());
            println!("boundary_ridges={boundary}");
            println!("euler={}", c.euler_characteristic());
            Ok(true)
        }
    }
}

fn cmd_stats(path: &str) -> Result<bool, Error> {
    let p = load_prismatoid(path)?;
    let f = p.complex().f_vector();
    let layers = p.layer_vector();
    let width = p.width();
    println!(
        "d={} vertices={} facets={}",
        p.d(),
        p.vertex_count(),
        p.facet_count()
    );
    println!("f-vector ({})", join(&f, ","));
    println!("layers ({})", join(&layers, ","));
    match p.excess() {
        Some((num, den)) => println!("width {width}, excess {num}/{den}"),
        None => println!("width {width}"),
    }
    println!("f_vector={}", join(&f, ","));
    println!("layers={}", join(&layers, ","));
    println!("width={width}");
    if let Some((num, den)) = p.excess() {
        println!("excess={num}/{den}");
    }
    Ok(true)
}

fn arc_list(arcs: &std::collections::BTreeSet<(prismatoid::vertex::VertexId, prismatoid::vertex::VertexId)>) -> String {
    join(arcs.iter().map(|(a, b)| format!("{a}>{b}")), " ")
}

fn cmd_pattern(path: &str) -> Result<bool, Error> {
    let p = load_prismatoid(path)?;
    let pat = p.incidence_pattern();
    println!(
        "pattern on {}+{} vertices, {} arcs",
        pat.nodes_plus.len(),
        pat.nodes_minus.len(),
        pat.arcs.len()
    );
    println!(
        "reduced: {}+{} nodes, {} arcs, {} two-cycles",
        pat.reduced_plus.len(),
        pat.reduced_minus.len(),
        pat.reduced_arcs.len(),
        pat.two_cycles.len()
    );
    println!("nodes_plus={}", pat.nodes_plus);
    println!("nodes_minus={}", pat.nodes_minus);
    println!("arcs={}", arc_list(&pat.arcs));
    println!("reduced_plus={}", pat.reduced_plus);
    println!("reduced_minus={}", pat.reduced_minus);
    println!("reduced_arcs={}", arc_list(&pat.reduced_arcs));
    println!(
        "two_cycles={}",
        join(pat.two_cycles.iter().map(|(a, b)| format!("{a}<>{b}")), " ")
    );
    Ok(true)
}

fn cmd_shell_check(args: &ShellCheckArgs) -> Result<bool, Error> {
    let text = io::read_file(&args.file)?;
    let p = {
        let parsed = io::parse_prismatoid_str(&text)?;
        for w in &parsed.warnings {
            eprintln!("warning: {w}");
        }
        parsed.value
    };
    let order: Vec<Face> = match &args.order {
        Some(path) => io::facet_order_str(&io::read_file(path)?)?,
        None => io::facet_order_str(&text)?,
    };
    let directions = match args.direction {
        DirectionFlag::Plus => vec![ShellDirection::FromPlus],
        DirectionFlag::Minus => vec![ShellDirection::FromMinus],
        DirectionFlag::Both => vec![ShellDirection::FromPlus, ShellDirection::FromMinus],
    };
    let mut any_ok = false;
    for dir in directions {
        let report = p.check_shelling(&order, dir)?;
        match report.failing_step {
            None => println!("from {dir}: shelling of all {} facets", order.len()),
            Some(step) => println!("from {dir}: fails at step {step}"),
        }
        println!("ok_{dir}={}", report.ok);
        if let Some(step) = report.failing_step {
            println!("failing_step_{dir}={step}");
        }
        any_ok |= report.ok;
    }
    println!("shellable={any_ok}");
    Ok(any_ok)
}

fn cmd_iso(args: &IsoArgs) -> Result<bool, Error> {
    let a = load_any(&args.file_a)?;
    let b = load_any(&args.file_b)?;
    let mapping = match (&a, &b) {
        (io::AnyFile::Prismatoid(pa), io::AnyFile::Prismatoid(pb)) if !args.ignore_bases => {
            find_prismatoid_isomorphism(pa, pb, true)
        }
        _ => {
            let ca = match &a {
                io::AnyFile::Prismatoid(p) => p.complex(),
                io::AnyFile::Complex(c) => c,
            };
            let cb = match &b {
                io::AnyFile::Prismatoid(p) => p.complex(),
                io::AnyFile::Complex(c) => c,
            };
            find_isomorphism(ca, cb)
        }
    };
    match &mapping {
        Some(map) => {
            println!("isomorphic");
            println!("isomorphic=true");
            println!(
                "map={}",
                join(map.iter().map(|(k, v)| format!("{k}:{v}")), " ")
            );
        }
        None => {
            println!("not isomorphic");
            println!("isomorphic=false");
        }
    }
    Ok(mapping.is_some())
}

fn cmd_anneal(args: &AnnealArgs) -> Result<bool, Error> {
    let start = load_prismatoid(&args.file)?;
    let cap = match args.max_vertices {
        Some(0) => None,
        Some(n) => Some(n),
        None => Some(start.vertex_count()),
    };
    let configs: Vec<AnnealConfig> = (0..args.chains as u64)
        .map(|k| AnnealConfig {
            seed: args.seed + k,
            schedule: Schedule {
                t0: args.t0,
                rate: args.rate,
                iterations: args.iters,
            },
            objective: Objective {
                epsilon: args.epsilon,
                power: args.power,
            },
            constraint: WidthConstraint::Minimum(args.min_width),
            max_vertices: cap,
        })
        .collect();
    let results: Vec<Result<AnnealRun, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|config| {
                let start = &start;
                scope.spawn(move || anneal_run(start, config))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("chain panicked"))
            .collect()
    });
    let runs: Vec<AnnealRun> = results.into_iter().collect::<Result<_, _>>()?;

    let mut best_idx = 0;
    for (i, run) in runs.iter().enumerate() {
        println!(
            "seed {}: best {}v/{}f at step {} (width {}), final {}v/{}f, accepted {}",
            run.config.seed,
            run.best.vertices,
            run.best.facets,
            run.best.step,
            run.best.width,
            run.final_vertices,
            run.final_facets,
            run.accepted
        );
        let key = |r: &AnnealRun| (r.best.vertices, r.best.cost);
        if key(run) < key(&runs[best_idx]) {
            best_idx = i;
        }
    }
    let best_run = &runs[best_idx];
    let best = &best_run.best;
    println!(
        "best overall: {}v/{}f width {} from seed {}",
        best.vertices, best.facets, best.width, best_run.config.seed
    );
    println!("chains={}", args.chains);
    println!("iterations={}", args.iters);
    println!("best_vertices={}", best.vertices);
    println!("best_facets={}", best.facets);
    println!("best_width={}", best.width);
    println!("best_seed={}", best_run.config.seed);
    println!("best_step={}", best.step);
    println!(
        "accepted={}",
        join(runs.iter().map(|r| r.accepted), ",")
    );
    if let Some(path) = &args.out {
        io::write_file(path, &io::serialize_prismatoid(&best.prismatoid))?;
    }
    if let Some(path) = &args.trace {
        // The trace is a certificate for the emitted best state: replaying it
        // on the input reproduces that state exactly, so it is cut off at the
        // best step. If no flip improved on the start the trace is empty.
        let start_key = (start.vertex_count(), best_run.config.objective.cost(&start));
        let flips: Vec<_> = if (best.vertices, best.cost) < start_key {
            best_run
                .trace
                .iter()
                .take_while(|e| e.step <= best.step)
                .map(|e| e.flip.clone())
                .collect()
        } else {
            Vec::new()
        };
        io::write_file(path, &io::serialize_trace(&flips))?;
    }
    if let Some(path) = &args.hist {
        io::write_file(path, &io::format_histogram_csv(runs.iter().map(|r| &r.histogram)))?;
    }
    Ok(true)
}

fn cmd_inflate(args: &InflateArgs) -> Result<bool, Error> {
    let start = load_prismatoid(&args.file)?;
    let walk = inflate_walk(&start, args.steps, args.seed, args.bias, args.min_width)?;
    let p = &walk.prismatoid;
    println!(
        "inflated {}v/{}f to {}v/{}f in {} applied flips (width {})",
        start.vertex_count(),
        start.facet_count(),
        p.vertex_count(),
        p.facet_count(),
        walk.applied.len(),
        p.width()
    );
    println!("vertices={}", p.vertex_count());
    println!("facets={}", p.facet_count());
    println!("width={}", p.width());
    println!("applied={}", walk.applied.len());
    if let Some(path) = &args.out {
        io::write_file(path, &io::serialize_prismatoid(p))?;
    }
    Ok(true)
}

fn format_sphere_certificate(cert: &SphereCertificate) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "start vertices={} width={}\n",
        cert.start_vertices, cert.start_width
    ));
    for s in &cert.steps {
        out.push_str(&format!(
            "step {}: base={} apexes={},{} labels={},{} contracted={} n {}->{} dim {}->{} width {}->{} facets {}->{}\n",
            s.step,
            match s.chosen {
                Sign::Plus => "+",
                Sign::Minus => "-",
            },
            s.apexes.0,
            s.apexes.1,
            s.suspension_labels.0,
            s.suspension_labels.1,
            s.contracted,
            s.vertices_before,
            s.vertices_after,
            s.d_before - 1,
            s.d_after - 1,
            s.width_before,
            s.width_after,
            s.facets_before,
            s.facets_after,
        ));
    }
    out.push_str(&format!(
        "final N={} dim={} facets={} distance={} diameter={} hirsch_bound={} non_hirsch={}\n",
        cert.vertices,
        cert.dim,
        cert.facets,
        cert.distance,
        cert.diameter,
        cert.hirsch_bound,
        cert.non_hirsch
    ));
    out
}

fn cmd_dstep(args: &DstepArgs) -> Result<bool, Error> {
    let start = load_prismatoid(&args.file)?;
    let cert = build_nonhirsch_sphere(&start)?;
    for s in &cert.steps {
        println!(
            "step {}: dim {}->{} vertices {}->{} width {}->{} facets {}->{}",
            s.step,
            s.d_before - 1,
            s.d_after - 1,
            s.vertices_before,
            s.vertices_after,
            s.width_before,
            s.width_after,
            s.facets_before,
            s.facets_after
        );
    }
    println!(
        "sphere: {} vertices, dimension {}, {} facets",
        cert.vertices, cert.dim, cert.facets
    );
    println!(
        "dual distance {} between the simplex facets, diameter {}, Hirsch bound {}: {}",
        cert.distance,
        cert.diameter,
        cert.hirsch_bound,
        if cert.non_hirsch { "non-Hirsch" } else { "within the Hirsch bound" }
    );
    println!("steps={}", cert.steps.len());
    println!("N={}", cert.vertices);
    println!("D={}", cert.dim + 1);
    println!("dim={}", cert.dim);
    println!("facets={}", cert.facets);
    println!("distance={}", cert.distance);
    println!("diameter={}", cert.diameter);
    println!("hirsch_bound={}", cert.hirsch_bound);
    println!("non_hirsch={}", cert.non_hirsch);
    if let Some(path) = &args.sphere {
        io::write_file(path, &io::serialize_complex(&cert.sphere))?;
    }
    if let Some(path) = &args.certificate {
        io::write_file(path, &format_sphere_certificate(&cert))?;
    }
    Ok(cert.non_hirsch)
}

fn cmd_diameter(path: &str) -> Result<bool, Error> {
    let c: SimplicialComplex = match load_any(path)? {
        io::AnyFile::Complex(c) => c,
        io::AnyFile::Prismatoid(p) => p.complex().clone(),
    };
    match c.dual_diameter()? {
        Some(diam) => {
            println!(
                "dual diameter {diam} over {} facets",
                c.facet_count()
            );
            println!("diameter={diam}");
            println!("connected=true");
            Ok(true)
        }
        None => {
            println!("dual graph disconnected");
            println!("connected=false");
            Ok(false)
        }
    }
}

fn cmd_replay(args: &ReplayArgs) -> Result<bool, Error> {
    let mut p = load_prismatoid(&args.file)?;
    let flips = io::parse_trace_str(&io::read_file(&args.trace)?)?;
    for (i, flip) in flips.iter().enumerate() {
        p.apply_flip(flip).map_err(|e| Error::Io(format!(
            "trace step {i} does not apply: {e}"
        )))?;
    }
    println!(
        "replayed {} flips: {}v/{}f width {}",
        flips.len(),
        p.vertex_count(),
        p.facet_count(),
        p.width()
    );
    println!("applied={}", flips.len());
    println!("vertices={}", p.vertex_count());
    println!("facets={}", p.facet_count());
    println!("width={}", p.width());
    if let Some(path) = &args.out {
        io::write_file(path, &io::serialize_prismatoid(&p))?;
    }
    Ok(true)
}
