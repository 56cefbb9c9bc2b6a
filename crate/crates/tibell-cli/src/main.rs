//! Command-line surface: classical bounds, spectral reports, polytope
//! pipelines, face dimensions, renormalization fixed points and the K4
//! tables, all over the exact-arithmetic library.

mod cache;
mod formats;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use formats::{fmt_rat, InequalityFile, Report};
use tibell::bell::{self, BellInequality, Method, Scenario};
use tibell::graph;
use tibell::scalar::Rat;
use tibell::{lp, poly, renorm, trop, verts};

#[derive(Parser)]
#[command(name = "tibell", about = "Exact toolkit for translation-invariant Bell inequalities")]
struct Cli {
    /// Thread-count hint; results are independent of it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classical bound of an inequality file at ring size N.
    Bound {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// 1, 2, 3 or all (assert agreement).
        #[arg(long, default_value = "all")]
        method: String,
        /// Print the thermodynamic bound (per-party limit) instead.
        #[arg(long)]
        thermo: bool,
    },
    /// Tropical spectral report: eigenvalue, eigenvector, critical graph,
    /// cyclicity and stabilization.
    Spectral {
        file: PathBuf,
        #[arg(long, default_value_t = 10000)]
        budget: usize,
    },
    /// Projected polytope pipelines (star polytope or finite N).
    Polytope {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        star: bool,
        #[arg(long)]
        facets: bool,
        #[arg(long)]
        classes: bool,
        /// Cap on points entering LP-based extreme-point filtering.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long)]
        rebuild_cache: bool,
    },
    /// Face dimension of the inequality on the projected polytope.
    FaceDim { file: PathBuf },
    /// Renormalization-invariant inequalities for a scenario.
    Renorm {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        single_body: bool,
        /// Cap on double-description intermediate rays.
        #[arg(long, default_value_t = 100000)]
        budget: usize,
        #[arg(long, default_value = "renorm-out")]
        out: PathBuf,
    },
    /// K4 error-set tables (I, II or III).
    Tables {
        #[arg(long)]
        which: String,
        #[arg(long)]
        rebuild_cache: bool,
    },
}

enum CliError {
    Input(String),
    Precondition(String),
    Budget(String),
}

impl CliError {
    fn exit(self) -> ! {
        let (code, msg) = match self {
            CliError::Input(m) => (1, m),
            CliError::Precondition(m) => (2, m),
            CliError::Budget(m) => (3, m),
        };
        eprintln!("error: {msg}");
        std::process::exit(code);
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = match cli.cmd {
        Cmd::Bound { file, n, method, thermo } => cmd_bound(&file, n, &method, thermo),
        Cmd::Spectral { file, budget } => cmd_spectral(&file, budget),
        Cmd::Polytope { m, r, n, star, facets, classes, budget, rebuild_cache } => {
            cmd_polytope(m, r, n, star, facets, classes, budget, rebuild_cache)
        }
        Cmd::FaceDim { file } => cmd_face_dim(&file),
        Cmd::Renorm { m, r, single_body, budget, out } => {
            cmd_renorm(m, r, single_body, budget, &out)
        }
        Cmd::Tables { which, rebuild_cache } => cmd_tables(&which, rebuild_cache),
    };
    if let Err(e) = result {
        e.exit();
    }
}

fn read_inequality(path: &PathBuf) -> Result<(InequalityFile, Vec<u8>), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input("inequality file is not UTF-8".into()))?;
    let file = InequalityFile::parse(&text).map_err(CliError::Input)?;
    Ok((file, bytes))
}

fn to_bell(file: &InequalityFile) -> BellInequality {
    BellInequality::new(Scenario::new(file.m, file.r), file.alpha.clone(), file.beta.clone())
}

fn cmd_bound(
    path: &PathBuf,
    n: Option<usize>,
    method: &str,
    thermo: bool,
) -> Result<(), CliError> {
    let (file, bytes) = read_inequality(path)?;
    let ineq = to_bell(&file);
    let mut report = Report::new(
        format!("bound --method {method}{}", if thermo { " --thermo" } else { "" }),
        &bytes,
    );
    if thermo {
        let lambda = bell::thermo_bound(&ineq);
        report.push(format!("thermo-bound {}", fmt_rat(&lambda)));
        print!("{}", report.render());
        return Ok(());
    }
    let n = n.ok_or_else(|| CliError::Input("--n is required without --thermo".into()))?;
    let methods: Vec<Method> = match method {
        "1" => vec![Method::One],
        "2" => vec![Method::Two],
        "3" => vec![Method::Three],
        "all" => vec![Method::One, Method::Two, Method::Three],
        other => return Err(CliError::Input(format!("unknown method '{other}'"))),
    };
    let mut beta: Option<Rat> = None;
    for m in methods {
        let b = bell::classical_bound(&ineq, n, m)
            .map_err(|e| CliError::Precondition(e.to_string()))?;
        if let Some(prev) = &beta {
            assert_eq!(*prev, b, "methods disagree");
        }
        beta = Some(b);
    }
    report.push(format!("n {n}"));
    report.push(format!("beta {}", fmt_rat(&beta.unwrap())));
    print!("{}", report.render());
    Ok(())
}

fn cmd_spectral(path: &PathBuf, budget: usize) -> Result<(), CliError> {
    let (file, bytes) = read_inequality(path)?;
    let ineq = to_bell(&file);
    let f = bell::build_f(&ineq);
    let mut report = Report::new("spectral".into(), &bytes);
    let stab = trop::stabilization(&f, budget).map_err(|e| match e {
        trop::TropError::BudgetExceeded { max_n } => {
            CliError::Budget(format!("stabilization not reached within {max_n} powers"))
        }
        other => CliError::Precondition(other.to_string()),
    })?;
    let v = trop::trop_eigenvector(&f).map_err(|e| CliError::Precondition(e.to_string()))?;
    let crit = trop::critical_graph(&f).map_err(|e| CliError::Precondition(e.to_string()))?;
    let cycles = graph::simple_cycles_capped(&crit, 1_000_000)
        .map_err(|e| CliError::Budget(e.to_string()))?;
    report.push(format!("lambda {}", fmt_rat(&stab.lambda)));
    let ev: Vec<String> = v.entries().iter().map(|x| format!("{x}")).collect();
    report.push(format!("eigenvector {}", ev.join(" ")));
    report.push(format!("sigma {}", stab.sigma));
    report.push(format!("n0 {}", stab.n0));
    report.push(format!("kleene-steps {}", stab.kleene_steps));
    report.push(format!("critical-cycles {}", cycles.len()));
    report.push("critical-graph".to_string());
    for line in formats::fmt_graph(&crit).lines() {
        report.push(format!("  {line}"));
    }
    print!("{}", report.render());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_polytope(
    m: usize,
    r: usize,
    n: Option<usize>,
    star: bool,
    facets: bool,
    classes: bool,
    budget: usize,
    rebuild_cache: bool,
) -> Result<(), CliError> {
    if m < 2 || r < 1 {
        return Err(CliError::Input("need m >= 2 and r >= 1".into()));
    }
    if star == n.is_some() {
        return Err(CliError::Input("give exactly one of --star and --n".into()));
    }
    let sc = Scenario::new(m, r);
    let g = sc.de_bruijn_graph();
    let gn = g.node_count();
    let echo = format!("polytope --m {m} --r {r}");
    let mut report = Report::new(echo.clone(), echo.as_bytes());

    if let Some(n_ring) = n {
        let es = cache::load_or_build(&g, rebuild_cache);
        let rep = verts::projected_p_n(sc, &es, n_ring);
        let projected = rep.projected_vertices.as_ref().unwrap();
        report.push(format!("n {n_ring}"));
        report.push(format!("pn-vertices {}", rep.vertices.len()));
        report.push(format!("projected-vertices {}", projected.len()));
        for v in projected {
            let coords: Vec<String> = v.iter().map(fmt_rat).collect();
            report.push(format!("vertex {}", coords.join(" ")));
        }
        print!("{}", report.render());
        return Ok(());
    }

    // Star polytope: project all simple cycles, then filter extreme points.
    let cycles = graph::simple_cycles_capped(&g, 2_000_000)
        .map_err(|e| CliError::Budget(e.to_string()))?;
    let mut vectors: Vec<Vec<Rat>> = cycles
        .iter()
        .map(|c| {
            let w = c.weight_matrix(gn);
            let l = c.len() as i64;
            let norm: Vec<Rat> =
                w.entries().iter().map(|&x| Rat::new(x.into(), l.into())).collect();
            verts::project_matrix(sc, &norm)
        })
        .collect();
    report.push(format!("cycles {}", cycles.len()));
    vectors.sort();
    vectors.dedup();
    report.push(format!("distinct-vectors {}", vectors.len()));
    if vectors.len() > budget {
        if facets || classes {
            return Err(CliError::Budget(format!(
                "{} candidate vectors exceed the extreme-point budget {budget}",
                vectors.len()
            )));
        }
        report.push("extreme-filter skipped (budget)".to_string());
        print!("{}", report.render());
        return Ok(());
    }
    let vertices: Vec<Vec<Rat>> = (0..vectors.len())
        .filter(|&i| {
            let others: Vec<&Vec<Rat>> =
                vectors.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
            !lp::in_convex_hull_fast(&others, &[], &vectors[i])
        })
        .map(|i| vectors[i].clone())
        .collect();
    report.push(format!("vertices {}", vertices.len()));
    for v in &vertices {
        let coords: Vec<String> = v.iter().map(fmt_rat).collect();
        report.push(format!("vertex {}", coords.join(" ")));
    }
    if facets || classes {
        let h = poly::hull(&poly::VRep { points: vertices.clone(), rays: Vec::new(), dim: sc.dim() })
            .map_err(|e| CliError::Precondition(e.to_string()))?;
        report.push(format!("facets {}", h.inequalities.len()));
        for (normal, offset) in &h.inequalities {
            let coords: Vec<String> = normal.iter().map(fmt_rat).collect();
            report.push(format!("facet {} >= {}", coords.join(" "), fmt_rat(offset)));
        }
        for (normal, offset) in &h.equations {
            let coords: Vec<String> = normal.iter().map(fmt_rat).collect();
            report.push(format!("equation {} = {}", coords.join(" "), fmt_rat(offset)));
        }
        if classes {
            let mut groups: BTreeMap<(Vec<Rat>, Rat), usize> = BTreeMap::new();
            for (normal, offset) in &h.inequalities {
                let ineq = BellInequality::new(sc, normal.clone(), Some(offset.clone()));
                let canon = bell::canonical_class(&ineq);
                *groups.entry((canon, offset.clone())).or_insert(0) += 1;
            }
            report.push(format!("classes {}", groups.len()));
            for ((canon, offset), count) in &groups {
                let coords: Vec<String> = canon.iter().map(fmt_rat).collect();
                report.push(format!(
                    "class size {count} alpha {} beta {}",
                    coords.join(" "),
                    fmt_rat(offset)
                ));
            }
        }
    }
    print!("{}", report.render());
    Ok(())
}

fn cmd_face_dim(path: &PathBuf) -> Result<(), CliError> {
    let (file, bytes) = read_inequality(path)?;
    let ineq = to_bell(&file);
    let fd = bell::face_dimension(&ineq).map_err(|e| CliError::Precondition(e.to_string()))?;
    let mut report = Report::new("face-dim".into(), &bytes);
    if fd.degenerate {
        report.push("degenerate true (critical graph is the full De Bruijn graph)".to_string());
    } else {
        report.push(format!("dim {}", fd.dim));
        report.push(format!("facet {}", fd.is_facet));
    }
    print!("{}", report.render());
    Ok(())
}

fn cmd_renorm(
    m: usize,
    r: usize,
    single_body: bool,
    budget: usize,
    out: &PathBuf,
) -> Result<(), CliError> {
    if m < 2 || r < 1 {
        return Err(CliError::Input("need m >= 2 and r >= 1".into()));
    }
    let sc = Scenario::new(m, r);
    let p = renorm::build_parametric(sc, single_body);
    let sol = renorm::solve_fixed_points(&p, budget).map_err(|e| match e {
        renorm::RenormError::BudgetExceeded { budget } => {
            CliError::Budget(format!("ray budget {budget} exceeded"))
        }
        other => CliError::Precondition(other.to_string()),
    })?;
    if !sol.complete {
        return Err(CliError::Budget(
            "ray computation incomplete within the budget; no faces emitted".into(),
        ));
    }
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", out.display())))?;
    let echo = format!("renorm --m {m} --r {r} --single-body {single_body}");
    let mut report = Report::new(echo.clone(), echo.as_bytes());
    report.push(format!("faces {}", sol.faces.len()));
    for (fi, face) in sol.faces.iter().enumerate() {
        for (ri, ray) in face.rays.iter().enumerate() {
            let (alpha, lambda) = p.alpha_lambda(ray);
            let mut annotations = BTreeMap::new();
            annotations.insert("renorm_invariant".to_string(), "true".to_string());
            annotations.insert("face".to_string(), fi.to_string());
            let file = InequalityFile { m, r, alpha, beta: Some(lambda), annotations };
            let path = out.join(format!("face{fi}-ray{ri}.ineq"));
            std::fs::write(&path, file.serialize())
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            report.push(format!("wrote {}", path.display()));
        }
    }
    print!("{}", report.render());
    Ok(())
}

fn cmd_tables(which: &str, rebuild_cache: bool) -> Result<(), CliError> {
    let sc = Scenario::new(2, 1);
    let g = sc.de_bruijn_graph();
    let es = cache::load_or_build(&g, rebuild_cache);
    let echo = format!("tables --which {which}");
    let mut report = Report::new(echo.clone(), echo.as_bytes());

    // Sizes grouped by (cycle length, residue), asserted uniform per group.
    let mut sizes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for ((ci, r), set) in &es.sets {
        sizes.entry((es.cycles[*ci].len(), *r)).or_default().push(set.members.len());
    }
    for counts in sizes.values() {
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "sizes must be uniform per class");
    }
    let lengths: Vec<usize> = {
        let mut ls: Vec<usize> = es.cycles.iter().map(|c| c.len()).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    };

    match which {
        "I" => {
            for &l in &lengths {
                let ncyc = es.cycles.iter().filter(|c| c.len() == l).count();
                let row: Vec<String> =
                    (0..l).map(|r| sizes[&(l, r)][0].to_string()).collect();
                report.push(format!("length {l} cycles {ncyc} sizes {}", row.join(" ")));
            }
        }
        "II" => {
            let star_cycles = star_vertex_cycles(sc, &es);
            for &l in &lengths {
                let idxs: Vec<usize> =
                    star_cycles.iter().copied().filter(|&ci| es.cycles[ci].len() == l).collect();
                let mut row: Vec<String> = Vec::new();
                for r in 0..l {
                    let counts: Vec<usize> = idxs
                        .iter()
                        .map(|&ci| verts::projected_error_count(sc, &es, ci, r))
                        .collect();
                    assert!(
                        counts.windows(2).all(|w| w[0] == w[1]),
                        "projected counts must be uniform per class"
                    );
                    row.push(counts[0].to_string());
                }
                report.push(format!("length {l} cycles {} sizes {}", idxs.len(), row.join(" ")));
            }
        }
        "III" => {
            let star_cycles = star_vertex_cycles(sc, &es);
            let period = lengths.iter().fold(1usize, |acc, &l| num_integer::lcm(acc, l));
            for residue in 0..period {
                let pn: usize = es
                    .cycles
                    .iter()
                    .enumerate()
                    .map(|(ci, c)| es.sets[&(ci, residue % c.len())].members.len())
                    .sum();
                let projected: usize = star_cycles
                    .iter()
                    .map(|&ci| {
                        verts::projected_error_count(sc, &es, ci, residue % es.cycles[ci].len())
                    })
                    .sum();
                report.push(format!("residue {residue} vertices {pn} projected {projected}"));
            }
        }
        other => return Err(CliError::Input(format!("unknown table '{other}'"))),
    }
    print!("{}", report.render());
    Ok(())
}

/// Cycle indices whose projection is a vertex of the projected star polytope.
fn star_vertex_cycles(sc: Scenario, es: &verts::GraphErrorSets) -> Vec<usize> {
    let gn = es.graph.node_count();
    let projected: Vec<Vec<Rat>> = es
        .cycles
        .iter()
        .map(|c| {
            let w = c.weight_matrix(gn);
            let l = c.len() as i64;
            let norm: Vec<Rat> =
                w.entries().iter().map(|&x| Rat::new(x.into(), l.into())).collect();
            verts::project_matrix(sc, &norm)
        })
        .collect();
    (0..es.cycles.len())
        .filter(|&i| {
            let others: Vec<&Vec<Rat>> = projected
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i && projected[j] != projected[i])
                .map(|(_, q)| q)
                .collect();
            !lp::in_convex_hull_fast(&others, &[], &projected[i])
        })
        .collect()
}
