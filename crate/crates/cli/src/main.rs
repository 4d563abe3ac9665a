//! `bratteli`: command-line front end for the bratteli library.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use bratteli::dimgroup::{apply_morphism, k0_of_system};
use bratteli::io::{diagram_to_json, parse_diagram, parse_premorphism, premorphism_to_json};
use bratteli::matrix_form::{from_matrix_form, matrix_form_to_json, parse_matrix_form, to_matrix_form};
use bratteli::morphism::equivalent;
use bratteli::order::{is_cantor, is_properly_ordered, is_simple};
use bratteli::perron::perron_info;
use bratteli::vershik::{
    canonical_partition, check_tower_property, induced_map, orbit, path_rank, path_unrank, rebuild_diagram,
    tower_edge_set,
};
use bratteli::{
    BratteliDiagram, DimensionGroup, Element, EquivalenceVariant, Error, LevelSequence, OrderedBratteliDiagram,
    PathWord, Premorphism, RankWord, Verdict,
};

const PERRON_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "bratteli", version, about = "Ordered Bratteli diagrams, Vershik maps and dimension groups")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Levels examined by horizon-bounded predicates [default: per diagram]
    #[arg(long, global = true, env = "BRATTELI_HORIZON", value_parser = positive_usize)]
    horizon: Option<usize>,
    /// Search bound on target levels for equivalence
    #[arg(long, global = true, default_value_t = 16)]
    m_max: usize,
    /// Dead-band of the Perron positivity test
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_f64)]
    tol: f64,
    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print the evidence behind each certified verdict
    #[arg(long, global = true)]
    witness: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvertTarget {
    Json,
    MatrixForm,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a diagram, premorphism or matrix-form file
    Validate { file: PathBuf },
    /// Summarize a diagram: levels, multiplicity matrices, path counts
    Info { file: PathBuf },
    /// Telescope a diagram along a level sequence such as 0,2,4,...
    Telescope {
        file: PathBuf,
        #[arg(long)]
        levels: LevelSequence,
    },
    /// Decide one structural predicate
    Check {
        file: PathBuf,
        #[command(flatten)]
        predicate: Predicate,
    },
    /// Vershik successor or orbit of a path
    Vershik {
        file: PathBuf,
        /// Comma-separated edge ranks, optionally ending in @vertex
        #[arg(long, required_unless_present = "random", conflicts_with = "random")]
        path: Option<RankWord>,
        /// Start from a seeded random path of this length
        #[arg(long)]
        random: Option<usize>,
        /// Orbit length; 0 prints the successor only
        #[arg(long, default_value_t = 0)]
        steps: usize,
    },
    /// Kakutani-Rokhlin towers at a level, or the tower edge set between two levels
    Towers {
        file: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        fine: Option<usize>,
    },
    /// Check the commuting squares of a premorphism
    MorphismValidate {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Compose two premorphisms, first then second
    Compose { first: PathBuf, second: PathBuf },
    /// Decide equivalence of two premorphisms
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// subsequence, first, second or third
        #[arg(long, default_value = "second")]
        variant: EquivalenceVariant,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Image of a target path under the map induced by a premorphism
    InducedMap {
        file: PathBuf,
        #[arg(long)]
        path: RankWord,
    },
    /// Rebuild the diagram from its Kakutani-Rokhlin towers up to a depth
    Rebuild {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Ranks, connecting maps and unit of the dimension group
    Dimgroup {
        file: PathBuf,
        /// Last level shown [default: the stored levels]
        #[arg(long)]
        levels: Option<usize>,
        /// Also report the Perron eigenvalue and eigenvector of the period block
        #[arg(long)]
        stationary: bool,
    },
    /// Normal form, equality, positivity or unit-interval membership of an element
    #[command(group(ArgGroup::new("op").multiple(false)))]
    Element {
        file: PathBuf,
        /// An element written level:(a_1,...,a_k)
        element: Element,
        #[arg(long, group = "op")]
        equal: Option<Element>,
        #[arg(long, group = "op")]
        positive: bool,
        #[arg(long, group = "op")]
        in_scale: bool,
        /// Image under the dimension-group map of a premorphism file
        #[arg(long, group = "op")]
        apply: Option<PathBuf>,
    },
    /// Dimension group with unit of the Vershik system
    K0 { file: PathBuf },
    /// Graphviz rendering of the first levels
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Rewrite a diagram as canonical JSON or in matrix form
    Convert {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ConvertTarget::Json)]
        to: ConvertTarget,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Predicate {
    #[arg(long)]
    properly_ordered: bool,
    #[arg(long)]
    simple: bool,
    #[arg(long)]
    essentially_simple: bool,
    #[arg(long)]
    cantor: bool,
    #[arg(long)]
    tower_property: bool,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Outcome of one command: exit code, text lines and a JSON object.
struct Report {
    code: u8,
    lines: Vec<String>,
    json: Map<String, Value>,
}

impl Report {
    fn ok() -> Self {
        Report { code: 0, lines: Vec::new(), json: Map::new() }
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    fn field(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.json.insert(key.into(), v.into());
        self
    }

    /// Raw output, printed verbatim in either format.
    fn raw(text: String) -> Self {
        Report::ok().field("output", text.clone()).line(text.trim_end())
    }

    fn verdict<W: Display, C: Display>(v: &Verdict<W, C>, cfg: &RunConfig) -> Self {
        let (code, head, evidence) = match v {
            Verdict::Holds(w) => (0, "Holds".to_string(), Some(w.to_string())),
            Verdict::Fails(c) => (1, "Fails".to_string(), Some(c.to_string())),
            Verdict::UnknownUpTo(n) => (2, format!("UnknownUpTo({n})"), None),
        };
        let mut r = Report { code, ..Report::ok() }.line(head).field("verdict", v.label());
        if let Verdict::UnknownUpTo(n) = v {
            r = r.field("level", *n);
        }
        if let (true, Some(w)) = (cfg.witness, evidence) {
            r = r.line(format!("witness: {w}")).field("witness", w);
        }
        r
    }

    fn emit(&self, format: Format) {
        let mut out = std::io::stdout().lock();
        let _ = match format {
            Format::Text => self.lines.iter().try_for_each(|l| writeln!(out, "{l}")),
            Format::Json => {
                let s = serde_json::to_string_pretty(&Value::Object(self.json.clone())).expect("json values serialize");
                writeln!(out, "{s}")
            }
        };
    }
}

enum Kind {
    Diagram,
    MatrixForm,
    Premorphism,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn kind_of(text: &str) -> Kind {
    match serde_json::from_str::<Value>(text) {
        Ok(v) if v.get("levelMap").is_some() => Kind::Premorphism,
        Ok(v) if v.get("matrices").is_some() => Kind::MatrixForm,
        _ => Kind::Diagram,
    }
}

fn load_diagram(path: &Path) -> anyhow::Result<BratteliDiagram> {
    let text = read(path)?;
    let d = match kind_of(&text) {
        Kind::MatrixForm => from_matrix_form(&parse_matrix_form(&text)?)?,
        Kind::Diagram => parse_diagram(&text)?,
        Kind::Premorphism => return Err(anyhow!("{} holds a premorphism, not a diagram", path.display())),
    };
    Ok(d)
}

fn load_ordered(path: &Path) -> anyhow::Result<OrderedBratteliDiagram> {
    Ok(OrderedBratteliDiagram::new(load_diagram(path)?))
}

fn load_premorphism(path: &Path) -> anyhow::Result<Premorphism> {
    Ok(parse_premorphism(&read(path)?, path.parent())?)
}

fn horizon(cfg: &RunConfig, d: &BratteliDiagram) -> usize {
    cfg.horizon.unwrap_or_else(|| d.default_horizon())
}

fn ranks(d: &BratteliDiagram, p: &PathWord) -> anyhow::Result<String> {
    let r: Vec<String> = d.path_ranks(p)?.iter().map(usize::to_string).collect();
    Ok(r.join(","))
}

fn resolve_path(d: &BratteliDiagram, w: &RankWord) -> anyhow::Result<PathWord> {
    let end = match &w.end {
        Some(name) => Some(
            d.vertex_index(w.ranks.len(), name)?
                .ok_or_else(|| anyhow!("no vertex {name:?} at level {}", w.ranks.len()))?,
        ),
        None => None,
    };
    Ok(d.path_from_ranks(&w.ranks, end)?)
}

fn matrix_rows(m: &bratteli::IntMatrix) -> Value {
    Value::Array(
        m.to_rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect(),
    )
}

fn big_list(v: &[BigInt]) -> String {
    let s: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("({})", s.join(","))
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Validate { file } => {
            let text = read(file)?;
            let (kind, valid, report) = match kind_of(&text) {
                Kind::Premorphism => {
                    let f = parse_premorphism(&text, file.parent())?;
                    let n = cfg.horizon.or(f.depth()).unwrap_or_else(|| f.source().default_horizon());
                    let r = f.validate(n)?;
                    ("premorphism", r.is_valid(), r.to_string())
                }
                Kind::MatrixForm => {
                    let m = parse_matrix_form(&text)?;
                    m.validate()?;
                    let r = from_matrix_form(&m)?.validate();
                    ("matrix form", r.is_valid(), r.to_string())
                }
                Kind::Diagram => {
                    let r = parse_diagram(&text)?.validate();
                    ("diagram", r.is_valid(), r.to_string())
                }
            };
            let verdict = if valid { "valid" } else { "invalid" };
            Ok(Report { code: if valid { 0 } else { 1 }, ..Report::ok() }
                .line(format!("{kind}: {verdict}"))
                .lines_from(if valid { "" } else { &report })
                .field("kind", kind)
                .field("valid", valid)
                .field("report", report.clone()))
        }
        Command::Info { file } => {
            let d = load_diagram(file)?;
            let stored = d.presentation().stored_depth();
            let mut r = Report::ok()
                .line(format!("presentation: {}", d.presentation()))
                .line(format!("default horizon: {}", d.default_horizon()))
                .field("presentation", d.presentation().to_string())
                .field("defaultHorizon", d.default_horizon());
            let mut levels = Vec::new();
            for n in 0..=stored {
                let counts = d.root_path_counts(n)?;
                r = r.line(format!("level {n}: {} vertices, path counts {}", d.vertex_count(n)?, big_list(&counts)));
                let mut lvl = json!({"level": n, "vertices": d.vertex_names(n)?, "pathCounts": counts.iter().map(BigInt::to_string).collect::<Vec<_>>()});
                if n > 0 {
                    let m = d.multiplicity_matrix(n)?;
                    r = r.lines_from(&format!("M{n} =\n{m}"));
                    lvl["multiplicities"] = matrix_rows(&m);
                }
                levels.push(lvl);
            }
            Ok(r.field("levels", levels))
        }
        Command::Telescope { file, levels } => {
            Ok(Report::raw(diagram_to_json(&load_diagram(file)?.telescope(levels)?)))
        }
        Command::Check { file, predicate } => {
            let d = load_ordered(file)?;
            let n = horizon(cfg, d.base());
            let (name, r) = if predicate.properly_ordered {
                ("properly-ordered", Report::verdict(&is_properly_ordered(&d, n), cfg))
            } else if predicate.simple {
                ("simple", Report::verdict(&is_simple(d.base(), n), cfg))
            } else if predicate.essentially_simple {
                ("essentially-simple", Report::verdict(&d.is_essentially_simple(n), cfg))
            } else if predicate.cantor {
                ("cantor", Report::verdict(&is_cantor(d.base(), n), cfg))
            } else {
                let v = check_tower_property(&d, n)?
                    .map(|l| format!("checked through level {l}"), |p| format!("{:?}", p.edges()));
                ("tower-property", Report::verdict(&v, cfg))
            };
            Ok(r.field("predicate", name).field("horizon", n))
        }
        Command::Vershik { file, path, random, steps } => {
            let d = load_ordered(file)?;
            let start = match (path, random) {
                (Some(w), _) => resolve_path(d.base(), w)?,
                (None, Some(len)) => {
                    let heights = d.base().root_path_counts(*len)?;
                    let total: BigInt = heights.iter().sum();
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    let mut pick = BigInt::from(rng.gen::<u64>()) % &total;
                    let v = heights.iter().position(|h| {
                        if pick < *h {
                            true
                        } else {
                            pick -= h;
                            false
                        }
                    });
                    path_unrank(d.base(), *len, v.expect("pick lies below the total"), &pick)?
                }
                (None, None) => unreachable!("clap requires --path or --random"),
            };
            let o = orbit(&d, &start, (*steps).max(1))?;
            let shown = if *steps == 0 { &o.steps[1..] } else { &o.steps[..] };
            let mut r = Report::ok();
            let mut rows = Vec::new();
            for s in shown {
                let tower = d.base().vertex_name(s.path.len(), d.base().path_end(&s.path)?)?.to_string();
                let floor = path_rank(d.base(), &s.path)?;
                let word = ranks(d.base(), &s.path)?;
                let wrap = if s.wrapped { " (wrap)" } else { "" };
                r = r.line(format!("{word}  tower {tower} floor {floor}{wrap}"));
                rows.push(json!({"path": word, "tower": tower, "floor": floor.to_string(), "wrapped": s.wrapped}));
            }
            r = r.field("orbit", rows);
            if let Some(e) = &o.stopped {
                r = r.line(format!("NeedsDeeper: {e}")).field("verdict", "NeedsDeeper").field("message", e.to_string());
                r.code = 2;
            }
            Ok(r)
        }
        Command::Towers { file, level, fine } => {
            let d = load_ordered(file)?;
            let coarse = canonical_partition(&d, *level)?;
            match fine {
                None => {
                    let mut r = Report::ok();
                    let mut towers = Vec::new();
                    for t in coarse.towers() {
                        let floors: Vec<String> =
                            t.floors.iter().map(|p| ranks(d.base(), p)).collect::<anyhow::Result<_>>()?;
                        r = r.line(format!("tower {} (height {}): {}", t.name, t.height(), floors.join(" | ")));
                        towers.push(json!({"vertex": t.name, "height": t.height(), "floors": floors}));
                    }
                    Ok(r.field("level", *level).field("towers", towers))
                }
                Some(m) => {
                    let e = tower_edge_set(&coarse, &canonical_partition(&d, *m)?)?;
                    Ok(Report::raw(e.to_string()))
                }
            }
        }
        Command::MorphismValidate { file, depth } => {
            let f = load_premorphism(file)?;
            let n = depth.or(cfg.horizon).or(f.depth()).unwrap_or_else(|| f.source().default_horizon());
            let report = f.validate(n)?;
            let valid = report.is_valid();
            let text = report.to_string();
            Ok(Report { code: if valid { 0 } else { 1 }, ..Report::ok() }
                .lines_from(&text)
                .field("valid", valid)
                .field("checkedUpTo", n)
                .field("report", text.clone()))
        }
        Command::Compose { first, second } => {
            let (f, g) = (load_premorphism(first)?, load_premorphism(second)?);
            Ok(Report::raw(premorphism_to_json(&f.then(&g)?)))
        }
        Command::Equiv { first, second, variant, n_max } => {
            let (f, g) = (load_premorphism(first)?, load_premorphism(second)?);
            let n = n_max.or(f.depth()).or(cfg.horizon).unwrap_or_else(|| f.source().default_horizon());
            let v = equivalent(&f, &g, *variant, n, cfg.m_max)?;
            let v: Verdict<_, String> = v.map(|w| w, |never| match never {});
            Ok(Report::verdict(&v, cfg).field("nMax", n).field("mMax", cfg.m_max))
        }
        Command::InducedMap { file, path } => {
            let f = load_premorphism(file)?;
            let p = resolve_path(f.target().base(), path)?;
            let image = induced_map(&f, &p)?;
            let word = ranks(f.source().base(), &image)?;
            Ok(Report::ok().line(word.clone()).field("image", word))
        }
        Command::Rebuild { file, depth } => {
            Ok(Report::raw(diagram_to_json(rebuild_diagram(&load_ordered(file)?, *depth)?.base())))
        }
        Command::Dimgroup { file, levels, stationary } => {
            let d = load_diagram(file)?;
            let last = levels.unwrap_or_else(|| d.presentation().stored_depth());
            let perron = if *stationary { Some(perron_info(&d, PERRON_TOL)?) } else { None };
            let g = DimensionGroup::new(Arc::new(d));
            let mut r = Report::ok().line(format!("unit: {}", g.unit())).field("unit", g.unit().to_string());
            let mut rows = Vec::new();
            for n in 0..=last {
                r = r.line(format!("G_{n} = Z^{}", g.rank(n)?));
                let mut lvl = json!({"level": n, "rank": g.rank(n)?});
                if n < last {
                    let m = g.connecting_map(n)?;
                    r = r.lines_from(&format!("phi_{n} =\n{m}"));
                    lvl["connectingMap"] = matrix_rows(&m);
                }
                rows.push(lvl);
            }
            r = r.field("levels", rows);
            if let Some(p) = perron {
                r = r.lines_from(&p.to_string()).field(
                    "stationary",
                    json!({"lambda": p.lambda, "vector": p.vector, "residual": p.residual, "primitiveExponent": p.primitive_exponent}),
                );
            }
            Ok(r)
        }
        Command::Element { file, element, equal, positive, in_scale, apply } => {
            if let Some(path) = apply {
                let f = load_premorphism(path)?;
                let image = apply_morphism(&f, element)?;
                let g = DimensionGroup::new(Arc::new(f.target().base().clone()));
                let nf = g.normal_form(&image)?;
                return Ok(Report::ok().line(nf.to_string()).field("image", nf.to_string()));
            }
            let d = load_diagram(file)?;
            let n = horizon(cfg, &d);
            let info = if d.is_periodic() { perron_info(&d, PERRON_TOL).ok() } else { None };
            let g = DimensionGroup::new(Arc::new(d));
            if let Some(other) = equal {
                Ok(Report::verdict(&g.equal(element, other, n)?, cfg))
            } else if *positive {
                Ok(Report::verdict(&g.is_positive(element, n, info.as_ref(), cfg.tol)?, cfg))
            } else if *in_scale {
                Ok(Report::verdict(&g.in_scale(element, n, info.as_ref(), cfg.tol)?, cfg))
            } else {
                let nf = g.normal_form(element)?;
                Ok(Report::ok().line(nf.to_string()).field("normalForm", nf.to_string()))
            }
        }
        Command::K0 { file } => {
            let d = load_ordered(file)?;
            let n = horizon(cfg, d.base());
            let k = k0_of_system(&d, n)?;
            let mut r = Report::ok().line(format!("unit: {}", k.unit)).field("unit", k.unit.to_string());
            let mut rows = Vec::new();
            for l in 0..=d.base().presentation().stored_depth() {
                let u = k.unit_at(l)?;
                r = r.line(format!("G_{l} = Z^{}, unit {u}", k.group.rank(l)?));
                rows.push(json!({"level": l, "rank": k.group.rank(l)?, "unit": u.to_string()}));
            }
            Ok(r.field("levels", rows))
        }
        Command::ExportDot { file, depth } => {
            let d = load_diagram(file)?;
            let n = depth.unwrap_or_else(|| d.presentation().stored_depth());
            Ok(Report::raw(bratteli::dot::to_dot(&d, n)?))
        }
        Command::Convert { file, to } => {
            let d = load_diagram(file)?;
            Ok(Report::raw(match to {
                ConvertTarget::Json => diagram_to_json(&d),
                ConvertTarget::MatrixForm => matrix_form_to_json(&to_matrix_form(&d)?),
            }))
        }
    }
}

impl Report {
    fn lines_from(mut self, text: &str) -> Self {
        self.lines.extend(text.lines().filter(|l| !l.is_empty()).map(str::to_string));
        self
    }
}

fn error_report(e: &anyhow::Error) -> Report {
    match e.downcast_ref::<Error>() {
        Some(err @ Error::NeedsDeeper { .. }) => Report { code: 2, ..Report::ok() }
            .line(format!("NeedsDeeper: {err}"))
            .field("verdict", "NeedsDeeper")
            .field("message", err.to_string()),
        Some(err @ Error::NotCertified(_)) => Report { code: 2, ..Report::ok() }
            .line(format!("NotCertified: {err}"))
            .field("verdict", "NotCertified")
            .field("message", err.to_string()),
        _ => Report { code: 1, ..Report::ok() }.field("error", format!("{e:#}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let report = run(&cli).unwrap_or_else(|e| {
        if e.downcast_ref::<Error>().is_none_or(|err| !err.is_needs_deeper() && !matches!(err, Error::NotCertified(_)))
        {
            eprintln!("error: {e:#}");
        }
        error_report(&e)
    });
    report.emit(cli.config.format);
    ExitCode::from(report.code)
}
