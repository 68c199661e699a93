use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use limitcone::groups::{enumerate, hecke_relations, GroupSpec};
use limitcone::limits::{
    cone_hull, direction_cloud, furstenberg_cloud, parabolic_family, rotation_number, torus_orbit,
    zariski_check,
};
use limitcone::moebius::{schottky_powers, MoebiusElement};
use limitcone::numfield::FieldElement;
use limitcone::plot;
use limitcone::poly::Poly;
use limitcone::Error;

#[derive(Parser)]
#[command(
    name = "limitcone",
    version,
    about = "Limit sets of arithmetic Fuchsian groups acting on products of hyperbolic planes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    knobs: Knobs,
}

#[derive(Args, Clone, Debug)]
struct Knobs {
    /// Maximum word length.
    #[arg(long, global = true, default_value_t = 10)]
    depth: usize,
    /// Maximum number of enumerated elements.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Working precision of certified intervals.
    #[arg(long, global = true, default_value_t = 96, value_parser = clap::value_parser!(u32).range(1..))]
    bits: u32,
    /// Largest finite order recognised for elliptic elements.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
    order_bound: u32,
    /// Cells per side of the torus grid.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    grid: u64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory receiving every artifact of the run.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "LIMITCONE_THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Clone, Debug)]
struct Source {
    /// Builtin group: hecke:Q, tri-qinfinf:Q or pslz-diag:POLY.
    group: Option<String>,
    /// JSON group spec file, instead of a builtin.
    #[arg(long = "spec", value_name = "FILE")]
    spec: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group and print its field, generators and relations.
    Group(Source),
    /// Count elements per word length.
    Enumerate(Source),
    /// Translation-direction cone: report JSON, cloud CSV, ratio histogram SVG.
    Cone(Source),
    /// Attracting fixed points on the torus: CSV, summary JSON, scatter SVG.
    Furstenberg(Source),
    /// Zariski density check.
    Zariski(Source),
    /// Directions of n*tr_u*tr_v-style traces approaching a parabolic direction.
    ParabolicFamily {
        #[command(flatten)]
        source: Source,
        /// First trace, as a polynomial in the field generator x.
        #[arg(long, default_value = "4*x")]
        trace_u: String,
        #[arg(long, default_value = "4*x")]
        trace_v: String,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1000,10000,100000,1000000"
        )]
        n: Vec<u64>,
    },
    /// Ping-pong certificate that powers of two elements generate a free group.
    Schottky {
        #[command(flatten)]
        source: Source,
        /// First element, as a word in the generators.
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        /// Field embedding to work in (default: the identity embedding).
        #[arg(long)]
        embedding: Option<usize>,
        #[arg(long, default_value_t = 20)]
        max_power: u32,
        /// Random reduced words checked to be nontrivial.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Orbit of a rotation pair on the torus: discrepancy per checkpoint.
    TorusOrbit {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with = "alpha_word")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
        /// Elliptic word giving the first rotation number.
        #[arg(long, requires = "beta_word")]
        alpha_word: Option<String>,
        #[arg(long)]
        beta_word: Option<String>,
        #[arg(long, default_value_t = 2)]
        embedding: usize,
        /// Orbit length.
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
}

enum Failure {
    Core(Error),
    Io(String),
    Flag(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Core(e) => (e.kind(), e.to_string()),
            Failure::Io(m) => ("IoError", m.clone()),
            Failure::Flag(m) => ("BadFlag", m.clone()),
        };
        json!({ "schema": "1", "status": "error", "kind": kind, "message": message })
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Output {
    dir: Option<PathBuf>,
}

impl Output {
    fn new(dir: Option<PathBuf>) -> Run<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(|e| Failure::Io(format!("{}: {e}", d.display())))?;
        }
        Ok(Output { dir })
    }

    fn file(&self, name: &str, body: &str) -> Run<()> {
        match &self.dir {
            Some(d) => write(&d.join(name), body),
            None => Ok(()),
        }
    }

    /// Printed on stdout and also saved under `--out`.
    fn primary(&self, name: &str, body: &str) -> Run<()> {
        print!("{body}");
        self.file(name, body)
    }
}

fn write(path: &Path, body: &str) -> Run<()> {
    fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}

fn load(src: &Source) -> Run<GroupSpec> {
    match (&src.group, &src.spec) {
        (Some(_), Some(_)) => Err(Failure::Flag(
            "give either a builtin group or --spec, not both".into(),
        )),
        (None, None) => Err(Failure::Flag(
            "missing group (builtin name or --spec FILE)".into(),
        )),
        (Some(name), None) => Ok(GroupSpec::builtin(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let v: Value =
                serde_json::from_str(&text).map_err(|e| Error::BadSpec(e.to_string()))?;
            Ok(GroupSpec::from_json(&v)?)
        }
    }
}

/// Adds the run configuration to a JSON report.
fn stamp(mut v: Value, k: &Knobs, group: &str) -> Value {
    v["schema"] = json!("1");
    v["config"] = json!({
        "group": group,
        "depth": k.depth,
        "cap": k.cap,
        "bits": k.bits,
        "order_bound": k.order_bound,
        "grid": k.grid,
        "seed": k.seed,
    });
    v
}

fn field_element(spec: &GroupSpec, text: &str) -> Run<FieldElement> {
    Ok(FieldElement::from_poly(&spec.field, &Poly::parse(text)?))
}

fn run(cli: Cli) -> Run<()> {
    let k = cli.knobs;
    let out = Output::new(k.out.clone())?;
    let cap = k.cap as usize;
    let grid = k.grid as usize;
    match cli.command {
        Command::Group(src) => {
            let spec = load(&src)?;
            let mut v = spec.to_json();
            v["degree"] = json!(spec.field.degree());
            v["roots"] = json!((1..=spec.field.degree())
                .map(|i| spec.field.root_f64(i))
                .collect::<Vec<_>>());
            v["diagonal_by_construction"] = json!(spec.diagonal_by_construction);
            v["provenance"] = json!(spec.provenance);
            if let Some(q) = src
                .group
                .as_deref()
                .and_then(|g| g.strip_prefix("hecke:"))
                .and_then(|q| q.parse().ok())
            {
                if let Some((s2, stq)) = hecke_relations(&spec, q) {
                    v["relations"] = json!({ "S^2": s2, format!("(S*T)^{q}"): stq });
                }
            }
            out.primary("group.json", &pretty(&stamp(v, &k, &spec.label)))
        }
        Command::Enumerate(src) => {
            let spec = load(&src)?;
            let run = enumerate(&spec, k.depth, cap);
            let v = json!({
                "total": run.len(),
                "level_counts": run.level_counts,
                "truncated": run.truncated,
            });
            out.primary("enumerate.json", &pretty(&stamp(v, &k, &spec.label)))
        }
        Command::Cone(src) => {
            let spec = load(&src)?;
            let cloud = direction_cloud(&spec, k.depth, cap, k.bits)?;
            let report = cone_hull(&cloud.directions)?;
            out.file("cloud.csv", &cloud.to_csv())?;
            if !report.ratios.is_empty() {
                let title = format!("{} depth {}", spec.label, k.depth);
                if let Ok(svg) = plot::ratio_histogram(&report.ratios, 50, &title) {
                    out.file("cone_ratios.svg", &svg)?;
                }
            }
            out.primary(
                "cone.json",
                &pretty(&stamp(report.to_json(&cloud.meta), &k, &spec.label)),
            )
        }
        Command::Furstenberg(src) => {
            let spec = load(&src)?;
            let cloud = furstenberg_cloud(&spec, k.depth, cap, k.bits, grid)?;
            out.file(
                "furstenberg.json",
                &pretty(&stamp(cloud.summary_json(), &k, &spec.label)),
            )?;
            let pts: Vec<(f64, f64)> = cloud.points.iter().map(|p| (p[0], p[1])).collect();
            if let Ok(svg) = plot::torus_scatter(&pts, &format!("{} depth {}", spec.label, k.depth))
            {
                out.file("furstenberg.svg", &svg)?;
            }
            out.primary("furstenberg.csv", &cloud.to_csv())
        }
        Command::Zariski(src) => {
            let spec = load(&src)?;
            let rep = zariski_check(&spec, k.depth, cap)?;
            out.primary(
                "zariski.json",
                &pretty(&stamp(rep.to_json(), &k, &spec.label)),
            )
        }
        Command::ParabolicFamily {
            source,
            trace_u,
            trace_v,
            n,
        } => {
            let spec = load(&source)?;
            let u = field_element(&spec, &trace_u)?;
            let v = field_element(&spec, &trace_v)?;
            let rep = parabolic_family(&u, &v, &n, &spec.embeddings, k.bits)?;
            out.file(
                "parabolic.json",
                &pretty(&stamp(rep.to_json(), &k, &spec.label)),
            )?;
            out.primary("parabolic.csv", &rep.to_csv())
        }
        Command::Schottky {
            source,
            g,
            h,
            embedding,
            max_power,
            samples,
        } => {
            let spec = load(&source)?;
            let (ge, he) = (spec.eval_word(&g)?, spec.eval_word(&h)?);
            let i = embedding.unwrap_or(spec.embeddings[0]);
            let v = match schottky_powers(&ge, &he, i, max_power) {
                Ok(cert) => {
                    let trivial =
                        random_words_trivial(&cert.g_power, &cert.h_power, samples, k.seed);
                    let mut v = cert.to_json();
                    v["status"] = json!("found");
                    v["verified"] = json!(cert.verify(k.bits.max(64)));
                    v["random_words"] = json!(samples);
                    v["trivial_words"] = json!(trivial);
                    v
                }
                Err(Error::SchottkyNotFound(p)) => json!({ "status": "not-found", "max_power": p }),
                Err(e) => return Err(e.into()),
            };
            let mut v = stamp(v, &k, &spec.label);
            v["g"] = json!(g);
            v["h"] = json!(h);
            out.primary("schottky.json", &pretty(&v))
        }
        Command::TorusOrbit {
            source,
            alpha,
            beta,
            alpha_word,
            beta_word,
            embedding,
            n,
        } => {
            let (a, b) = match (alpha, beta, alpha_word, beta_word) {
                (Some(a), Some(b), _, _) => (a, b),
                (_, _, Some(wa), Some(wb)) => {
                    let spec = load(&source)?;
                    let rot = |w: &str| -> Run<f64> {
                        Ok(rotation_number(&spec.eval_word(w)?.trace(), embedding)?.mid_f64())
                    };
                    (rot(&wa)?, rot(&wb)?)
                }
                _ => {
                    return Err(Failure::Flag(
                        "give --alpha/--beta or --alpha-word/--beta-word".into(),
                    ))
                }
            };
            let point = |x: f64| {
                let q = num_rational::BigRational::from_float(x)
                    .ok_or_else(|| Failure::Flag("rotation numbers must be finite".into()));
                q.map(|q| limitcone::interval::Interval::new(q.clone(), q))
            };
            let mut csv = String::from("n,alpha,beta,discrepancy,statistic\n");
            let mut checkpoints: Vec<usize> =
                std::iter::successors(Some(10usize), |m| m.checked_mul(10))
                    .take_while(|&m| m < n)
                    .collect();
            checkpoints.push(n);
            for m in checkpoints {
                let cloud = torus_orbit(&point(a)?, &point(b)?, m, grid)?;
                csv.push_str(&format!(
                    "{m},{a:.12},{b:.12},{:.6},{:.6}\n",
                    cloud.discrepancy.unwrap_or(f64::NAN),
                    cloud.statistic
                ));
            }
            out.primary("torus_orbit.csv", &csv)
        }
    }
}

/// Number of random nonempty reduced words in `g, h` that evaluate to the identity.
fn random_words_trivial(
    g: &MoebiusElement,
    h: &MoebiusElement,
    samples: usize,
    seed: u64,
) -> usize {
    let gens = [g.clone(), g.inverse(), h.clone(), h.inverse()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .filter(|_| {
            let len = rng.gen_range(1..=8);
            let mut last: Option<usize> = None;
            let mut p = MoebiusElement::identity(g.field());
            for _ in 0..len {
                let k = loop {
                    let k = rng.gen_range(0..4);
                    if last != Some(k ^ 1) {
                        break k;
                    }
                };
                p = p.mul(&gens[k]);
                last = Some(k);
            }
            p.is_identity()
        })
        .count()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let msg = e.render().to_string();
            println!(
                "{}",
                Failure::Flag(msg.lines().next().unwrap_or("").to_string()).to_json()
            );
            return ExitCode::from(2);
        }
    };
    if let Some(t) = cli.knobs.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            println!("{}", f.to_json());
            ExitCode::FAILURE
        }
    }
}
