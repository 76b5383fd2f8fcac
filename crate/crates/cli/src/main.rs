mod render;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fpgroups::{
    abelianization, hom_count, match_sieradski, sieradski, tietze_simplify, todd_coxeter, CosetResult, GroupError,
    PermError, Permutation, Presentation, DEFAULT_MAX_COSETS,
};
use johansson::diagram::Diagram;
use johansson::fan::{Fan, FanError};
use johansson::lift::{lift, LiftError};
use johansson::monodromy::{enumerate_reps, MonodromyError, MonodromyRep, RepReport};
use johansson::pi1::{build_complex, cell_presentation, dual_presentation, Pi1Error, TreeStrategy};
use serde_json::{json, Value};

use report::{Artifact, CliError, Format, Report};

#[derive(Parser)]
#[command(name = "johansson", version, about = "Branched covers of the trefoil from Johansson diagrams")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a fan or diagram file and run every validation.
    Validate { path: PathBuf },
    /// Lift a fan along a monodromy representation.
    Lift {
        fan: PathBuf,
        /// Image of the meridian, in cycle notation.
        #[arg(long)]
        m: String,
        /// Image of the dual generator `c`.
        #[arg(long)]
        c: Option<String>,
        /// Image of any other generator, as `name=(cycles)`.
        #[arg(long = "gen", value_name = "NAME=PERM")]
        gens: Vec<String>,
        /// Number of sheets; defaults to the largest point named.
        #[arg(short)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Presentation of the fundamental group of a diagram (or a fan's base diagram).
    Pi1 {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "cell")]
        method: Method,
        #[arg(long, value_enum, default_value = "none")]
        punctured: Punctured,
        #[arg(long, value_enum, default_value = "bfs")]
        tree: Tree,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transitive representations of a fan's group into S_n.
    Enumerate {
        fan: PathBuf,
        #[arg(short)]
        n: usize,
        /// One representative per conjugacy class.
        #[arg(long)]
        conjugacy: bool,
    },
    /// Invariants of a presentation file.
    Analyze {
        path: PathBuf,
        /// Run coset enumeration for the order.
        #[arg(long)]
        order: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Count homomorphisms into S_2 .. S_K.
        #[arg(long, value_name = "K")]
        homs: Option<usize>,
        /// Tietze-simplify first and analyze the result.
        #[arg(long)]
        simplify: bool,
        /// Where to write the simplified presentation.
        #[arg(long, requires = "simplify")]
        out: Option<PathBuf>,
    },
    /// Emit the Sieradski presentation S(n), or detect one.
    Sieradski {
        #[arg(short, conflicts_with = "match_path", required_unless_present = "match_path")]
        n: Option<usize>,
        #[arg(long = "match", value_name = "PATH")]
        match_path: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schematic SVG drawing of a diagram.
    Render {
        path: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cell,
    Dual,
}

#[derive(Clone, Copy, ValueEnum)]
enum Punctured {
    All,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tree {
    Bfs,
    Dfs,
}

enum Input {
    Fan(Fan),
    Diagram(Diagram),
}

fn parse_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {e}", path.display()))
}

fn fan_error(path: &Path, e: FanError) -> CliError {
    match e {
        FanError::Parse(p) => parse_error(path, p),
        other => CliError::Validation(format!("{}: {other}", path.display())),
    }
}

/// First keyword of the first non-comment line.
fn header(text: &str) -> Option<&str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty())?.split_whitespace().next()
}

fn read_model(r: &mut Report, path: &Path) -> Result<Input, CliError> {
    let text = r.read_input(path)?;
    match header(&text) {
        Some("fan") => Fan::parse(&text).map(Input::Fan).map_err(|e| fan_error(path, e)),
        Some("diagram") | None => Diagram::parse(&text).map(Input::Diagram).map_err(|e| parse_error(path, e)),
        Some(other) => Err(parse_error(path, format!("line 1: expected `fan` or `diagram`, found `{other}`"))),
    }
}

fn read_fan(r: &mut Report, path: &Path) -> Result<Fan, CliError> {
    let text = r.read_input(path)?;
    Fan::parse(&text).map_err(|e| fan_error(path, e))
}

fn read_diagram(r: &mut Report, path: &Path) -> Result<Diagram, CliError> {
    match read_model(r, path)? {
        Input::Diagram(d) => Ok(d),
        Input::Fan(f) => f.base_diagram().map_err(|e| fan_error(path, e)),
    }
}

fn read_presentation(r: &mut Report, path: &Path) -> Result<Presentation, CliError> {
    let text = r.read_input(path)?;
    Presentation::parse(&text).map_err(|e| parse_error(path, e))
}

fn flags(r: &RepReport) -> Value {
    json!({
        "relations": r.relations_ok,
        "transitive": r.transitive,
        "cyclic": r.cyclic,
        "locally_cyclic": r.locally_cyclic,
        "regular": r.regular,
    })
}

fn flag_names(r: &RepReport) -> String {
    let names: Vec<&str> = [(r.cyclic, "cyclic"), (r.locally_cyclic, "locally-cyclic"), (r.regular, "regular")]
        .into_iter()
        .filter_map(|(on, s)| on.then_some(s))
        .collect();
    if names.is_empty() {
        "irregular".into()
    } else {
        names.join(",")
    }
}

fn validate_diagram(r: &mut Report, d: &Diagram) -> Result<(), CliError> {
    let v = d.validate();
    r.set("kind", "diagram");
    r.set("name", d.name.clone());
    r.set("components", v.counts.components);
    r.set("curves", v.counts.curves);
    r.set("crossings", v.counts.crossings);
    r.set("faces", v.counts.faces);
    r.set("triplets", v.counts.triplets);
    r.set("marked", v.counts.marked);
    r.set("euler", v.euler.clone());
    r.set("issues", v.issues.iter().map(|i| Value::String(i.to_string())).collect::<Vec<_>>());
    if v.accepted() {
        r.set("accepted", true);
        Ok(())
    } else {
        r.set("accepted", false);
        Err(CliError::Validation(v.issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")))
    }
}

fn cmd_validate(r: &mut Report, path: &Path) -> Result<(), CliError> {
    match read_model(r, path)? {
        Input::Diagram(d) => validate_diagram(r, &d),
        Input::Fan(f) => {
            r.set("kind", "fan");
            r.set("name", f.name.clone());
            r.set("seam", f.seam);
            r.set("curves", f.curves.len());
            r.set("crossings", f.crossings.len());
            r.set("segments", f.segments.len());
            r.set("generators", f.generators().join(" "));
            r.set("warnings", f.warnings().into_iter().map(Value::String).collect::<Vec<_>>());
            let base = f.base_diagram().map_err(|e| fan_error(path, e))?;
            let v = base.validate();
            r.set("base_faces", v.counts.faces);
            r.set("base_triplets", v.counts.triplets);
            r.set("accepted", true);
            Ok(())
        }
    }
}

fn perm_error(name: &str, e: PermError) -> CliError {
    match e {
        PermError::Parse { .. } => CliError::Parse(format!("image of `{name}`: {e}")),
        _ => CliError::Rejected(format!("image of `{name}`: {e}")),
    }
}

fn monodromy_error(e: MonodromyError) -> CliError {
    match e {
        MonodromyError::DegreeTooLarge { .. } => CliError::Capacity(e.to_string()),
        MonodromyError::Perm { name, source } => perm_error(&name, source),
        other => CliError::Rejected(other.to_string()),
    }
}

fn lift_error(e: LiftError) -> CliError {
    match e {
        LiftError::Monodromy(m) => monodromy_error(m),
        LiftError::Rejected(why) => CliError::Rejected(why),
        other => CliError::Validation(other.to_string()),
    }
}

fn cmd_lift(
    r: &mut Report,
    fan_path: &Path,
    m: &str,
    c: Option<&str>,
    gens: &[String],
    n: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let fan = read_fan(r, fan_path)?;
    let mut given: Vec<(String, String)> = vec![(fan.meridian.clone(), m.to_string())];
    if let Some(c) = c {
        given.push(("c".into(), c.to_string()));
    }
    for g in gens {
        let (name, perm) = g.split_once('=').ok_or_else(|| CliError::Parse(format!("`--gen {g}`: expected NAME=PERM")))?;
        given.push((name.trim().to_string(), perm.trim().to_string()));
    }
    let mut degree = n.unwrap_or(0);
    if n.is_none() {
        for (name, text) in &given {
            degree = degree.max(Permutation::max_entry(text).map_err(|e| perm_error(name, e))?);
        }
        degree = degree.max(1);
    }
    let images = given
        .iter()
        .map(|(name, text)| Permutation::parse(text, degree).map(|p| (name.clone(), p)).map_err(|e| perm_error(name, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let rep = MonodromyRep::new(degree, images);
    let lifted = lift(&fan, &rep).map_err(lift_error)?;
    let d = &lifted.diagram;
    let v = d.validate();
    r.set("n", degree);
    r.set("representation", rep.describe());
    r.set("classification", flags(&lifted.report.classification));
    r.set("components", d.components.len());
    r.set("curves", v.counts.curves);
    r.set("crossings", v.counts.crossings);
    r.set("faces", v.counts.faces);
    r.set("triplets", v.counts.triplets);
    r.set("euler", v.euler.clone());
    r.set(
        "sheets",
        lifted
            .report
            .components
            .iter()
            .map(|c| {
                let s: Vec<String> = c.sheets.iter().map(ToString::to_string).collect();
                Value::String(format!("{} ({}) {} curves, {} crossings", c.name, s.join(" "), c.curves, c.crossings))
            })
            .collect::<Vec<_>>(),
    );
    r.artifact = Some(Artifact { text: d.to_text(), out });
    Ok(())
}

fn pi1_error(e: Pi1Error) -> CliError {
    CliError::Validation(e.to_string())
}

fn cmd_pi1(r: &mut Report, path: &Path, method: Method, punctured: Punctured, tree: Tree, out: Option<PathBuf>) -> Result<(), CliError> {
    let d = read_diagram(r, path)?;
    let p = match method {
        Method::Cell => {
            let cx = build_complex(&d).map_err(pi1_error)?;
            let faces = match punctured {
                Punctured::All => cx.marked_faces(),
                Punctured::None => Vec::new(),
            };
            let strategy = match tree {
                Tree::Bfs => TreeStrategy::Bfs,
                Tree::Dfs => TreeStrategy::Dfs,
            };
            let cp = cell_presentation(&cx, &faces, strategy).map_err(pi1_error)?;
            r.set("method", "cell");
            r.set("vertices", cx.vertices.len());
            r.set("edges", cx.edges.len());
            r.set("cells", cx.faces.len());
            r.set(
                "meridians",
                cp.meridians
                    .iter()
                    .map(|(id, w)| Value::String(format!("{id}: {}", cp.presentation.word_to_string(w))))
                    .collect::<Vec<_>>(),
            );
            cp.presentation
        }
        Method::Dual => {
            r.set("method", "dual");
            dual_presentation(&d).map_err(pi1_error)?
        }
    };
    r.set("generators", p.num_generators());
    r.set("relators", p.num_relators());
    r.set("abelianization", abelianization(&p).to_string());
    r.artifact = Some(Artifact { text: p.to_text(), out });
    Ok(())
}

fn cmd_enumerate(r: &mut Report, path: &Path, n: usize, conjugacy: bool) -> Result<(), CliError> {
    let fan = read_fan(r, path)?;
    let reps = enumerate_reps(&fan, n, conjugacy).map_err(monodromy_error)?;
    r.set("n", n);
    r.set("up_to_conjugacy", conjugacy);
    r.set("count", reps.len());
    r.set("cyclic", reps.iter().filter(|(_, c)| c.cyclic).count());
    r.set(
        "representations",
        reps.iter().map(|(rep, c)| Value::String(format!("{} [{}]", rep.describe(), flag_names(c)))).collect::<Vec<_>>(),
    );
    Ok(())
}

fn group_error(e: GroupError) -> CliError {
    match e {
        GroupError::Capacity(s) => CliError::Capacity(s),
        GroupError::InvalidN(_) => CliError::Validation(e.to_string()),
    }
}

fn cmd_analyze(
    r: &mut Report,
    path: &Path,
    order: bool,
    max_cosets: usize,
    homs: Option<usize>,
    simplify: bool,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut p = read_presentation(r, path)?;
    p.check().map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    r.set("name", p.name.clone());
    r.set("generators", p.num_generators());
    r.set("relators", p.num_relators());
    if simplify {
        p = tietze_simplify(&p);
        r.set("simplified_generators", p.num_generators());
        r.set("simplified_relators", p.num_relators());
        r.artifact = Some(Artifact { text: p.to_text(), out });
    }
    r.set("abelianization", abelianization(&p).to_string());
    if let Some(k) = homs {
        let mut counts = Vec::new();
        for d in 2..=k {
            counts.push(format!("S{d}={}", hom_count(&p, d).map_err(group_error)?));
        }
        r.set("homs", counts.join(" "));
    }
    if order {
        // coset enumeration does better on the simplified form
        let q = if simplify { p.clone() } else { tietze_simplify(&p) };
        match todd_coxeter(&q, max_cosets) {
            CosetResult::Finite(k) => r.set("order", k),
            CosetResult::Exceeded(k) => {
                r.set("order", format!("exceeded ({k} cosets)"));
                r.capacity = Some(format!("coset enumeration passed {max_cosets} cosets"));
            }
        }
    }
    Ok(())
}

fn cmd_sieradski(r: &mut Report, n: Option<usize>, match_path: Option<&Path>, out: Option<PathBuf>) -> Result<(), CliError> {
    match (n, match_path) {
        (Some(n), _) => {
            let p = sieradski(n).map_err(group_error)?;
            r.set("n", n);
            r.artifact = Some(Artifact { text: p.to_text(), out });
        }
        (None, Some(path)) => {
            let p = read_presentation(r, path)?;
            match match_sieradski(&p) {
                Some(n) => r.set("match", n),
                None => r.set("match", "none"),
            }
        }
        (None, None) => unreachable!("clap requires -n or --match"),
    }
    Ok(())
}

fn cmd_render(r: &mut Report, path: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let d = read_diagram(r, path)?;
    validate_diagram(r, &d)?;
    let st = d.structure().map_err(|issues| CliError::Validation(format!("{} structural issues", issues.len())))?;
    r.artifact = Some(Artifact { text: render::render_svg(&d, &st), out });
    Ok(())
}

fn run(r: &mut Report, command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { path } => cmd_validate(r, &path),
        Command::Lift { fan, m, c, gens, n, out } => cmd_lift(r, &fan, &m, c.as_deref(), &gens, n, out),
        Command::Pi1 { path, method, punctured, tree, out } => cmd_pi1(r, &path, method, punctured, tree, out),
        Command::Enumerate { fan, n, conjugacy } => cmd_enumerate(r, &fan, n, conjugacy),
        Command::Analyze { path, order, max_cosets, homs, simplify, out } => {
            cmd_analyze(r, &path, order, max_cosets, homs, simplify, out)
        }
        Command::Sieradski { n, match_path, out } => cmd_sieradski(r, n, match_path.as_deref(), out),
        Command::Render { path, out } => cmd_render(r, &path, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let mut report = Report::new(echo);
    let result = run(&mut report, cli.command);
    let error = result.err();
    if error.is_some() {
        report.artifact = None;
    }
    ExitCode::from(report.emit(cli.format, error.as_ref()))
}
