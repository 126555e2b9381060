//! Command-line front end: generate graphs, inspect them, route, schedule
//! entanglement and run the load simulation.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or invariant error.

use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vqlnet::entangle::{bootstrap_schedule, replenish_schedule, EntanglementLedger};
use vqlnet::graph::{diameter, eccentricity, AdjacencyView, VertexId};
use vqlnet::io;
use vqlnet::ring_router::ring_path;
use vqlnet::routing::trace_along;
use vqlnet::seed::{child_seed, rng_from};
use vqlnet::sim::{run_load_sim, SimConfig, SimRouting};
use vqlnet::sphere_router::{global_path, local_path, NeighborhoodSource};
use vqlnet::topo::Topology;
use vqlnet::{Error, RingTopology, SphereTopology};

#[derive(Parser)]
#[command(name = "vqlnet", version, about = "Virtual-quantum-link network toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a topology file.
    Gen {
        #[command(subcommand)]
        what: GenKind,
    },
    /// Counts, degrees, diameter and structural checks for a graph file.
    Stats { file: PathBuf },
    /// Shortest-path route between two vertices.
    Route {
        file: PathBuf,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[arg(long, value_enum)]
        mode: RouteMode,
        /// Seed for tie-breaking choices; required so runs are reproducible.
        #[arg(long)]
        seed: u64,
        /// Also print the entanglement swap performed at each interior node.
        #[arg(long)]
        trace: bool,
    },
    /// Print the routing label of a vertex (sphere graphs).
    Label {
        file: PathBuf,
        #[arg(long)]
        vertex: u32,
    },
    /// Schedule that entangles every link of a fresh graph; validated.
    Bootstrap {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Schedule that restores the given consumed links; validated.
    Replenish {
        file: PathBuf,
        /// Comma-separated edges, e.g. 0-1,4-12.
        #[arg(long)]
        consumed: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Collision-under-load sweep; CSV per sample plus a summary sidecar.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        pairs: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to the graph's native router (ring, or local on spheres).
        #[arg(long, value_enum)]
        mode: Option<RouteMode>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Ring {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
    Sphere {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteMode {
    Ring,
    Global,
    Local,
}

fn main() -> ExitCode {
    // Die quietly when stdout closes early, as under `vqlnet ... | head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are successful output, not usage errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen { what } => {
            let (topo, out) = match what {
                GenKind::Ring { n, out } => (Topology::Ring(RingTopology::new(n)?), out),
                GenKind::Sphere { k, out } => (Topology::Sphere(SphereTopology::build(k)?), out),
            };
            std::fs::write(&out, io::serialize_graph(&topo))?;
            println!("wrote {} graph to {}", topo.kind(), out.display());
            Ok(())
        }
        Command::Stats { file } => stats(&load(&file)?),
        Command::Route { file, from, to, mode, seed, trace } => {
            route(&load(&file)?, from, to, mode, seed, trace)
        }
        Command::Label { file, vertex } => {
            let topo = load(&file)?;
            let Topology::Sphere(sphere) = &topo else {
                return Err(Error::InvalidParameter(
                    "ring vertices use their numeric IDs; labels exist on sphere graphs".into(),
                ));
            };
            sphere.check_vertex(VertexId(vertex))?;
            let label = sphere.label(VertexId(vertex));
            println!("{vertex} | {}", label.render().replace('>', " > "));
            Ok(())
        }
        Command::Bootstrap { file, out } => {
            let topo = load(&file)?;
            let timeline = bootstrap_schedule(&topo)?;
            std::fs::write(&out, io::serialize_timeline(&timeline))?;
            println!("validated bootstrap schedule: {} steps", timeline.len());
            Ok(())
        }
        Command::Replenish { file, consumed, out } => {
            let topo = load(&file)?;
            let mut edges = Vec::new();
            for token in consumed.split(',') {
                edges.push(io::parse_edge_spec(token.trim())?);
            }
            let mut ledger = EntanglementLedger::fully_entangled(&topo);
            for &e in &edges {
                ledger.consume(e)?;
            }
            let timeline = replenish_schedule(&ledger, &edges)?;
            std::fs::write(&out, io::serialize_timeline(&timeline))?;
            println!("validated replenish schedule: {} steps", timeline.len());
            Ok(())
        }
        Command::Simulate { file, pairs, samples, seed, out, mode } => {
            let topo = load(&file)?;
            let routing = match (mode, &topo) {
                (None, Topology::Ring(_)) => SimRouting::Ring,
                (None, Topology::Sphere(_)) => SimRouting::SphereLocal,
                (Some(RouteMode::Ring), _) => SimRouting::Ring,
                (Some(RouteMode::Global), _) => SimRouting::SphereGlobal,
                (Some(RouteMode::Local), _) => SimRouting::SphereLocal,
            };
            let cfg = SimConfig { pairs, samples, seed, routing };
            let report = run_load_sim(&topo, &cfg)?;
            std::fs::write(&out, io::render_report_csv(&report))?;
            let summary = io::render_report_summary(&report, &topo);
            std::fs::write(sidecar(&out), &summary)?;
            print!("{summary}");
            Ok(())
        }
    }
}

fn load(file: &FsPath) -> Result<Topology, Error> {
    io::parse_graph(&std::fs::read_to_string(file)?)
}

fn sidecar(out: &FsPath) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".summary");
    PathBuf::from(name)
}

fn route(
    topo: &Topology,
    from: u32,
    to: u32,
    mode: RouteMode,
    seed: u64,
    trace: bool,
) -> Result<(), Error> {
    let (a, b) = (VertexId(from), VertexId(to));
    let mut rng = rng_from(child_seed(seed, from as u64, to as u64));
    let path = match (mode, topo) {
        (RouteMode::Ring, Topology::Ring(r)) => ring_path(a, b, r, &mut rng)?,
        (RouteMode::Global, Topology::Sphere(s)) => {
            let balls = NeighborhoodSource::on_demand();
            global_path(a, b, s, &balls, &mut rng)?
        }
        (RouteMode::Local, Topology::Sphere(s)) => {
            let balls = NeighborhoodSource::on_demand();
            local_path(a, b, s, &balls, &mut rng, Default::default())?
        }
        (RouteMode::Ring, _) => {
            return Err(Error::InvalidParameter("ring mode needs a ring graph".into()))
        }
        (_, Topology::Ring(_)) => {
            return Err(Error::InvalidParameter(
                "global and local modes need a sphere graph".into(),
            ))
        }
    };
    println!("{path}");
    if trace {
        let mut ledger = EntanglementLedger::fully_entangled(topo);
        let traced = trace_along(path, &mut ledger)?;
        for ev in traced.swap_events {
            println!("swap {} {} {}", ev.node, ev.left, ev.right);
        }
    }
    Ok(())
}

fn stats(topo: &Topology) -> Result<(), Error> {
    let mut checks: Vec<(&str, bool, String)> = Vec::new();
    match topo {
        Topology::Ring(r) => {
            println!("kind ring");
            println!("n {}", r.levels());
            println!("vertices {}", r.vertex_count());
            let n = r.levels();
            if r.vertex_count() <= 1 << 20 {
                let mut degree_hist = std::collections::BTreeMap::new();
                let mut edge_count = 0usize;
                for id in 0..r.vertex_count() as u32 {
                    let d = r.neighbors(VertexId(id)).len();
                    edge_count += d;
                    *degree_hist.entry(d).or_insert(0usize) += 1;
                }
                println!("edges {}", edge_count / 2);
                for (d, c) in &degree_hist {
                    println!("degree {d} {c}");
                }
                let max_degree = degree_hist.keys().max().copied().unwrap_or(0);
                checks.push((
                    "degree-bound",
                    max_degree <= 2 * n as usize,
                    format!("max degree {max_degree} <= {}", 2 * n),
                ));
                let cycle_ok = (0..r.vertex_count() as u32).all(|id| {
                    let next = VertexId((id + 1) % r.vertex_count() as u32);
                    r.contains_edge(VertexId(id), next)
                });
                checks.push(("physical-cycle", cycle_ok, "consecutive IDs linked".into()));
            } else {
                println!("edges skipped (graph too large to enumerate)");
            }
            print_diameter(topo, &mut checks, 2 * n - 1, "2n-1")?;
        }
        Topology::Sphere(s) => {
            let k = s.subdivisions();
            println!("kind sphere");
            println!("k {k}");
            println!("vertices {}", s.vertex_count());
            println!("edges {}", s.edges().len());
            let mut degree_hist = std::collections::BTreeMap::new();
            for v in s.vertices() {
                *degree_hist.entry(s.neighbors(v.id).len()).or_insert(0usize) += 1;
            }
            for (d, c) in &degree_hist {
                println!("degree {d} {c}");
            }
            let mut label_hist = std::collections::BTreeMap::new();
            for label in s.labels() {
                *label_hist.entry(label.len()).or_insert(0usize) += 1;
            }
            for (l, c) in &label_hist {
                println!("label-len {l} {c}");
            }

            checks.push((
                "vertex-count",
                s.vertex_count() == vqlnet::sphere::expected_vertex_count(k),
                format!("{} = 10*4^{k}+2", s.vertex_count()),
            ));
            checks.push((
                "edge-count",
                s.edges().len() == vqlnet::sphere::expected_total_edge_count(k),
                format!("{} = 10*4^{}-10", s.edges().len(), k + 1),
            ));
            let layers_ok = (0..=k).all(|i| {
                s.edges().iter().filter(|&&(_, l)| l == i).count()
                    == vqlnet::sphere::expected_layer_edge_count(i)
            });
            checks.push(("layer-edge-counts", layers_ok, "4^i*30 per layer".into()));
            let degrees_ok = s.vertices().iter().all(|v| {
                let d = s.neighbors(v.id).len() as u32;
                if v.layer == 0 { d == 5 * (k + 1) } else { d == 6 * (k - v.layer) + 6 }
            });
            checks.push(("degree-formulas", degrees_ok, "5(k+1) and 6(k-i)+6".into()));
            print_diameter(topo, &mut checks, 2 * k + 3, "2k+3")?;
        }
    }

    let mut failed = false;
    for (name, ok, detail) in checks {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("check {name} {verdict} ({detail})");
        failed |= !ok;
    }
    if failed {
        return Err(Error::InvalidParameter("structural checks failed".into()));
    }
    Ok(())
}

fn print_diameter(
    topo: &Topology,
    checks: &mut Vec<(&str, bool, String)>,
    bound: u32,
    bound_name: &str,
) -> Result<(), Error> {
    match diameter(topo) {
        Ok(d) => {
            println!("diameter {d} (exact)");
            checks.push(("diameter-bound", d <= bound, format!("{d} <= {bound_name}")));
            Ok(())
        }
        Err(Error::OverBudget { .. }) => {
            // Probe a handful of fixed vertices; the largest eccentricity is
            // a lower bound on the true diameter, not the exact value.
            if topo.vertex_count() <= 1 << 22 {
                let mut estimate = 0;
                let step = (topo.vertex_count() / 8).max(1);
                for probe in (0..topo.vertex_count()).step_by(step) {
                    estimate = estimate.max(eccentricity(topo, VertexId(probe as u32))?);
                }
                println!("diameter-estimate {estimate} (probe lower bound, not exact)");
            } else {
                println!("diameter skipped (graph too large, bound {bound_name} = {bound})");
            }
            Ok(())
        }
        Err(other) => Err(other),
    }
}
