//! One function per subcommand; each returns its JSON value and rendering.

use std::time::{Duration, Instant};

use quartic_lines::bounds::{
    betti as betti_number, elkies_bound, lookup, table_report, ElkiesAssembly, ElkiesInput, IrrationalCase, Series,
    SeriesProfile, TableKind,
};
use quartic_lines::configs::{
    admissible_sets, bnd_witness, classify as classify_sets, pipeline as run_pipeline, ConfigSystem, PipelineOptions,
    SearchSpec, Strategy, WitnessScope,
};
use quartic_lines::configs::pipeline::survivor_dot;
use quartic_lines::enumeration::{enumerate_vectors, pairing_histogram, plus_norm, std_norm, VecQuery};
use quartic_lines::graph::GraphShape;
use quartic_lines::lattice::{class_from_coords, discriminant_group, find_class, ClassSelector, DiscClass, DualVector, Lattice};
use quartic_lines::rational::{parse as parse_rational, to_string as rat_string};
use quartic_lines::regress::{Regress, Status, CRITERIA};
use quartic_lines::tseries::{builtin_config, realizability_verdict, snf_analysis, Builtin, GroupForm, IncidenceMatrix};
use quartic_lines::Rational;
use serde_json::{json, Value};

use crate::{CliError, Format, Source};

pub struct Context {
    pub format: Option<Format>,
    pub extended: bool,
    pub scope: WitnessScope,
}

/// Result of a command: canonical JSON, the text actually printed, and run data.
pub struct Outcome {
    pub json: Value,
    pub rendered: String,
    pub matches_paper: Option<bool>,
    pub timings: Vec<(String, Duration)>,
    pub exit: u8,
}

impl Outcome {
    fn new(json: Value, rendered: String) -> Self {
        Outcome { json, rendered, matches_paper: None, timings: Vec::new(), exit: 0 }
    }
}

/// Renderers for the formats a command supports.
struct Renderings<'a> {
    default: Format,
    text: Option<&'a dyn Fn() -> String>,
    csv: Option<&'a dyn Fn() -> String>,
    dot: Option<&'a dyn Fn() -> String>,
}

impl Renderings<'_> {
    fn render(&self, ctx: &Context, json: &Value) -> Result<String, CliError> {
        let format = ctx.format.unwrap_or(self.default);
        let renderer = match format {
            Format::Json => return Ok(pretty(json)),
            Format::Text => self.text,
            Format::Csv => self.csv,
            Format::Dot => self.dot,
        };
        renderer
            .map(|f| f())
            .ok_or_else(|| CliError::Usage(format!("format {format:?} is not available for this command").to_lowercase()))
    }
}

fn pretty(json: &Value) -> String {
    serde_json::to_string_pretty(json).expect("json value serializes") + "\n"
}

fn rational(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("not a rational number: {s:?}")))
}

fn vector_strings(vs: &[DualVector]) -> Vec<Vec<String>> {
    vs.iter().map(DualVector::coord_strings).collect()
}

/// A lattice, one of its classes and the norm of the vectors asked for.
struct Selection {
    lattice: Lattice,
    class: DiscClass,
    norm: Rational,
    profile: Option<SeriesProfile>,
    kind: String,
}

impl Selection {
    fn vectors(&self) -> Result<Vec<DualVector>, CliError> {
        Ok(enumerate_vectors(&VecQuery { lattice: &self.lattice, cls: &self.class, q: self.norm })?)
    }

    fn describe(&self) -> Value {
        json!({
            "lattice": self.lattice.name,
            "class": self.kind,
            "class_coords": self.class.coords,
            "norm": rat_string(&self.norm),
        })
    }
}

fn profile_of(lattice: &Lattice) -> Option<SeriesProfile> {
    Series::ALL
        .iter()
        .map(|&s| SeriesProfile::of(s))
        .find(|p| p.lattice().is_ok_and(|l| l.gram == lattice.gram))
}

fn no_class(what: &str, lattice: &Lattice) -> CliError {
    quartic_lines::Error::NoSuchClass(format!("{what} in {}", lattice.name)).into()
}

fn select(source: &Source) -> Result<Selection, CliError> {
    let (lattice, profile) = match (&source.lattice, source.series) {
        (Some(desc), _) => {
            let lattice = Lattice::parse(desc)?;
            let profile = profile_of(&lattice);
            (lattice, profile)
        }
        (None, Some(series)) => {
            let profile = SeriesProfile::of(series);
            (profile.lattice()?, Some(profile))
        }
        (None, None) => return Err(CliError::Usage("either --lattice or --series is required".into())),
    };
    let norm = source.norm.as_deref().map(rational).transpose()?;
    let kind = source.class.to_ascii_lowercase();
    let eta_norm = Rational::new(-9, 4);
    let class = match kind.as_str() {
        "eta" => match &profile {
            Some(p) => p.eta_class(&lattice)?,
            None => find_class(&lattice, eta_norm, &ClassSelector::Canonical).ok_or_else(|| no_class("eta", &lattice))?,
        },
        "lambda" => {
            let found = match &profile {
                Some(p) => {
                    let eta = p.eta_class(&lattice)?;
                    p.lambda_class(&lattice, &eta)?
                }
                None => match find_class(&lattice, eta_norm, &ClassSelector::Canonical) {
                    Some(eta) => find_class(
                        &lattice,
                        norm.unwrap_or(Rational::new(-3, 4)),
                        &ClassSelector::PairedWith { partner: eta, value: Rational::new(-1, 4) },
                    ),
                    None => find_class(&lattice, norm.unwrap_or(Rational::from_integer(-1)), &ClassSelector::NonZero),
                },
            };
            found.ok_or_else(|| no_class("lambda", &lattice))?
        }
        "zero" => {
            let group = discriminant_group(&lattice);
            class_from_coords(&lattice, &group, &vec![0; group.invariant_factors.len()])
        }
        "nonzero" | "gamma" => {
            let q = norm.ok_or_else(|| CliError::Usage("--norm is required with --class nonzero".into()))?;
            find_class(&lattice, q, &ClassSelector::NonZero).ok_or_else(|| no_class("a nonzero class", &lattice))?
        }
        coords => {
            let group = discriminant_group(&lattice);
            let parsed: Vec<i64> = coords
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage(format!("unknown class {coords:?}")))?;
            if parsed.len() != group.invariant_factors.len() {
                return Err(CliError::Usage(format!(
                    "class needs {} coordinates for {}",
                    group.invariant_factors.len(),
                    lattice.name
                )));
            }
            class_from_coords(&lattice, &group, &parsed)
        }
    };
    let norm = norm.unwrap_or_else(|| if matches!(kind.as_str(), "eta" | "zero") { plus_norm(&class) } else { std_norm(&class) });
    Ok(Selection { lattice, class, norm, profile, kind })
}

pub fn lattice(ctx: &Context, desc: &str) -> Result<Outcome, CliError> {
    let lattice = Lattice::parse(desc)?;
    let json = serde_json::to_value(&lattice).expect("lattice serializes");
    let text = || {
        let group = discriminant_group(&lattice);
        let mut out = format!("{} (rank {}, determinant {})\n", lattice.name, lattice.rank(), lattice.determinant());
        for (label, row) in lattice.labels.iter().zip(&lattice.gram) {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            out.push_str(&format!("  {label:<6}{}\n", cells.join("")));
        }
        out.push_str(&format!("  discriminant group {:?}\n", group.invariant_factors));
        out
    };
    let rendered = Renderings { default: Format::Json, text: Some(&text), csv: None, dot: None }.render(ctx, &json)?;
    Ok(Outcome::new(json, rendered))
}

pub fn vectors(ctx: &Context, source: &Source, pairs: bool) -> Result<Outcome, CliError> {
    let sel = select(source)?;
    let vs = sel.vectors()?;
    let histogram = pairs.then(|| pairing_histogram(&sel.lattice, &vs, None));
    let mut json = sel.describe();
    json["count"] = json!(vs.len());
    json["vectors"] = json!(vector_strings(&vs));
    if let Some(h) = &histogram {
        json["pairs"] = h.iter().map(|(k, v)| (rat_string(k), json!(v))).collect::<serde_json::Map<_, _>>().into();
    }
    let text = || {
        let mut out = format!("{} vectors of norm {} in {} of {}\n", vs.len(), rat_string(&sel.norm), sel.class.describe(), sel.lattice.name);
        for v in &vs {
            out.push_str(&format!("  {v}\n"));
        }
        if let Some(h) = &histogram {
            for (value, count) in h {
                out.push_str(&format!("  pairing {}: {count}\n", rat_string(value)));
            }
        }
        out
    };
    let csv = || {
        let mut out = String::from("vector\n");
        for v in &vs {
            out.push_str(&format!("\"{v}\"\n"));
        }
        out
    };
    let rendered = Renderings { default: Format::Json, text: Some(&text), csv: Some(&csv), dot: None }.render(ctx, &json)?;
    Ok(Outcome::new(json, rendered))
}

pub fn bnd(ctx: &Context, source: &Source) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let sel = select(source)?;
    let vs = sel.vectors()?;
    let sys = ConfigSystem::new(sel.lattice.clone(), sel.norm, vs, Vec::new())?;
    let (size, witness) = bnd_witness(&sys, &SearchSpec::default());
    let graph = sys.graph(&witness);
    let shape = GraphShape::of(&graph).label(&graph);
    let members: Vec<DualVector> = witness.iter().map(|&i| sys.vectors[i].clone()).collect();
    let mut json = sel.describe();
    json["candidates"] = json!(sys.len());
    json["bnd"] = json!(size);
    json["witness"] = json!(vector_strings(&members));
    json["witness_shape"] = json!(shape);
    let text = || format!("{size}\n");
    let dot = || {
        let labels: Vec<String> = members.iter().map(|v| v.to_string()).collect();
        graph.to_dot(&format!("bnd {} {}", sel.lattice.name, sel.kind), Some(&labels))
    };
    let rendered = Renderings { default: Format::Text, text: Some(&text), csv: None, dot: Some(&dot) }.render(ctx, &json)?;
    let mut out = Outcome::new(json, rendered);
    out.timings.push(("search".into(), started.elapsed()));
    Ok(out)
}

pub fn classify(ctx: &Context, source: &Source, strategy: &str, min_size: Option<usize>) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let strategy: Strategy = strategy.parse().map_err(|e: quartic_lines::Error| CliError::Usage(e.to_string()))?;
    let sel = select(source)?;
    let sys = match (&sel.profile, sel.kind.as_str(), source.norm.is_none()) {
        (Some(p), "eta", true) => p.system()?,
        _ => ConfigSystem::new(sel.lattice.clone(), sel.norm, sel.vectors()?, Vec::new())?,
    };
    let mut spec = SearchSpec::from_strategy(&sys, strategy);
    if let Some(k) = min_size {
        spec = spec.with_min_size(k);
    }
    let sets = admissible_sets(&sys, &spec);
    let classes = classify_sets(&sys, &sets);
    let mut json = sel.describe();
    json["strategy"] = json!(format!("{strategy:?}"));
    json["sets"] = json!(sets.len());
    json["classes"] = classes
        .iter()
        .map(|c| {
            json!({
                "size": c.size,
                "shape": c.label,
                "dynkin": c.shape.dynkin,
                "count": c.count,
                "certificate": c.shape.certificate,
                "representative": c.representatives.first(),
            })
        })
        .collect();
    let text = || {
        let mut out = format!("{} admissible sets (one or more per Weyl orbit) in {} shapes\n", sets.len(), classes.len());
        for c in &classes {
            out.push_str(&format!("  |V| = {:>2}  {:<28} {} sets\n", c.size, c.label, c.count));
        }
        out
    };
    let csv = || {
        let mut out = String::from("size,shape,dynkin,count\n");
        for c in &classes {
            out.push_str(&format!("{},\"{}\",\"{}\",{}\n", c.size, c.label, c.shape.dynkin.clone().unwrap_or_default(), c.count));
        }
        out
    };
    let dot = || {
        classes
            .iter()
            .filter_map(|c| c.representatives.first().map(|rep| sys.graph(rep).to_dot(&format!("{} {}", c.size, c.label), None)))
            .collect::<Vec<_>>()
            .join("")
    };
    let rendered =
        Renderings { default: Format::Text, text: Some(&text), csv: Some(&csv), dot: Some(&dot) }.render(ctx, &json)?;
    let mut out = Outcome::new(json, rendered);
    out.timings.push(("search and classification".into(), started.elapsed()));
    Ok(out)
}

pub fn pipeline(ctx: &Context, series: Series) -> Result<Outcome, CliError> {
    let mut options = PipelineOptions::from_env(ctx.extended);
    options.scope = ctx.scope;
    let report = run_pipeline(series, &options)?;
    let json = serde_json::to_value(&report).expect("report serializes");
    let text = || report.to_text();
    let csv = || report.to_csv();
    let dot = || {
        report
            .survivors
            .iter()
            .map(|s| survivor_dot(series, s).unwrap_or_default())
            .collect::<Vec<_>>()
            .join("")
    };
    let rendered =
        Renderings { default: Format::Text, text: Some(&text), csv: Some(&csv), dot: Some(&dot) }.render(ctx, &json)?;
    let mut out = Outcome::new(json, rendered);
    out.timings = report.stages.iter().map(|s| (s.name.clone(), s.elapsed)).collect();
    Ok(out)
}

fn assembly_json(label: &str, a: &ElkiesAssembly) -> Value {
    json!({
        "source": label,
        "n": a.input.n,
        "tau1": rat_string(&a.input.tau1),
        "tau2": rat_string(&a.input.tau2),
        "exact": rat_string(&a.value.exact),
        "floor": a.value.floor,
        "set_aside": a.set_aside,
        "k_lines": a.k_lines,
        "total": a.total,
    })
}

pub fn elkies(
    ctx: &Context,
    n: Option<u32>,
    tau1: Option<&str>,
    tau2: Option<&str>,
    series: Option<Series>,
    case: Option<&str>,
) -> Result<Outcome, CliError> {
    let (json, headline) = match (n, series, case) {
        (Some(n), None, None) => {
            let tau = |t: Option<&str>| t.ok_or_else(|| CliError::Usage("--tau1 and --tau2 are required".into())).and_then(rational);
            let input = ElkiesInput::new(n, tau(tau1)?, tau(tau2)?)?;
            let value = elkies_bound(&input);
            let json = json!({
                "n": n,
                "tau1": rat_string(&input.tau1),
                "tau2": rat_string(&input.tau2),
                "exact": rat_string(&value.exact),
                "floor": value.floor,
            });
            (json, format!("{} ({})", value.floor, rat_string(&value.exact)))
        }
        (None, Some(series), None) => {
            let a = SeriesProfile::of(series).elkies()?;
            (assembly_json(series.name(), &a), a.total.to_string())
        }
        (None, None, Some(label)) => {
            let case = IrrationalCase::find(label)?;
            let a = case.elkies()?;
            (assembly_json(&case.label, &a), a.total.to_string())
        }
        _ => return Err(CliError::Usage("give exactly one of --n/--tau1/--tau2, --series or --case".into())),
    };
    let text = || format!("{headline}\n");
    let rendered = Renderings { default: Format::Text, text: Some(&text), csv: None, dot: None }.render(ctx, &json)?;
    Ok(Outcome::new(json, rendered))
}

pub fn betti(ctx: &Context, labels: &[String], irregularity: i64) -> Result<Outcome, CliError> {
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let b2 = betti_number(irregularity, &refs)?;
    let points = labels
        .iter()
        .map(|l| {
            let r = lookup(l)?;
            Ok(json!({"label": r.label, "milnor": r.milnor, "chi": r.chi, "mu_minus_chi": r.mu_minus_chi()}))
        })
        .collect::<Result<Vec<_>, quartic_lines::Error>>()?;
    let json = json!({"labels": labels, "irregularity": irregularity, "b2": b2, "points": points});
    let text = || format!("{b2}\n");
    let rendered = Renderings { default: Format::Text, text: Some(&text), csv: None, dot: None }.render(ctx, &json)?;
    Ok(Outcome::new(json, rendered))
}

fn load_config(config: &str) -> Result<IncidenceMatrix, CliError> {
    if let Ok(b) = config.parse::<Builtin>() {
        return Ok(builtin_config(b));
    }
    let path = std::path::Path::new(config);
    if !path.exists() {
        return Err(CliError::Usage(format!("{config:?} is neither a built-in configuration nor a file")));
    }
    let text = std::fs::read_to_string(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(config);
    Ok(IncidenceMatrix::parse(name, &text)?)
}

pub fn tseries(
    ctx: &Context,
    config: &str,
    analyze: bool,
    realize: bool,
    group: &str,
    max_modulus: u64,
) -> Result<Outcome, CliError> {
    let matrix = load_config(config)?;
    let system = matrix.system();
    let analyze = analyze || !realize;
    let groups: Vec<(String, GroupForm)> = if group.eq_ignore_ascii_case("all") {
        GroupForm::all().into_iter().map(|(l, g)| (l.to_string(), g)).collect()
    } else {
        vec![(group.to_string(), group.parse::<GroupForm>()?)]
    };
    let analysis = analyze.then(|| snf_analysis(&system));
    let verdicts: Vec<_> = if realize {
        groups.iter().map(|(_, g)| realizability_verdict(&system, *g, max_modulus)).collect()
    } else {
        Vec::new()
    };
    let mut json = json!({"config": matrix.name, "lines": matrix.len()});
    if let Some(a) = &analysis {
        json["analysis"] = serde_json::to_value(a).expect("analysis serializes");
    }
    if realize {
        json["max_modulus"] = json!(max_modulus);
        json["realizability"] = serde_json::to_value(&verdicts).expect("verdicts serialize");
    }
    let text = || {
        let mut out = format!("{} ({} lines)\n", matrix.name, matrix.len());
        if let Some(a) = &analysis {
            out.push_str(&format!(
                "  relations {}, rank {}, rank on sum zero {}, span rank {}\n  invariant factors {:?}\n",
                a.relations, a.rank, a.rank_on_sum_zero, a.span_rank, a.invariant_factors
            ));
            out.push_str(&format!("  kernel over Q {:?}\n  kernel mod 2 {:?}\n  kernel mod 3 {:?}\n", a.kernel_q, a.kernel_mod_2, a.kernel_mod_3));
        }
        for ((label, _), v) in groups.iter().zip(&verdicts) {
            out.push_str(&format!("  {label} ({}): {:?}\n", v.group, v.verdict));
            for rule in &v.rules {
                out.push_str(&format!("    {rule}\n"));
            }
            match &v.solution {
                Some(s) => out.push_str(&format!("    solution mod {}: {:?}\n", s.modulus, s.points)),
                None => out.push_str(&format!("    no solution with modulus 2..={max_modulus}\n")),
            }
        }
        out
    };
    let rendered = Renderings { default: Format::Text, text: Some(&text), csv: None, dot: None }.render(ctx, &json)?;
    Ok(Outcome::new(json, rendered))
}

pub fn report(ctx: &Context, table: &str) -> Result<Outcome, CliError> {
    let kind: TableKind = table.parse().map_err(|e: quartic_lines::Error| CliError::Usage(e.to_string()))?;
    let rep = table_report(kind)?;
    let json = serde_json::to_value(&rep).expect("table serializes");
    let csv = || rep.to_csv();
    let text = || {
        let mut out = format!("{:<12}", "row");
        for c in &rep.columns {
            out.push_str(&format!("{c:>12}"));
        }
        out.push('\n');
        for r in &rep.rows {
            out.push_str(&format!("{:<12}", r.label));
            for c in &r.cells {
                let mark = if c.matches_paper { "" } else if c.note.is_some() { "?" } else { "!" };
                out.push_str(&format!("{:>12}", format!("{}{mark}", c.computed)));
            }
            out.push('\n');
        }
        out
    };
    let rendered = Renderings { default: Format::Csv, text: Some(&text), csv: Some(&csv), dot: None }.render(ctx, &json)?;
    let mut out = Outcome::new(json, rendered);
    out.matches_paper = Some(rep.unexpected_mismatches().is_empty());
    Ok(out)
}

pub fn regress(ctx: &Context, criteria: &[usize]) -> Result<Outcome, CliError> {
    let ids: Vec<usize> = if criteria.is_empty() { (1..=CRITERIA.len()).collect() } else { criteria.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > CRITERIA.len()) {
        return Err(CliError::Usage(format!("no criterion {bad}; criteria are 1..={}", CRITERIA.len())));
    }
    let mut options = PipelineOptions::from_env(ctx.extended);
    options.scope = ctx.scope;
    let mut regress = Regress::new(options);
    let mut reports = Vec::new();
    for id in ids {
        let r = regress.criterion(id)?;
        eprintln!("{}", r.line());
        reports.push(r);
    }
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    let json = serde_json::to_value(&reports).expect("reports serialize");
    let text = || {
        let mut out = String::new();
        for r in &reports {
            out.push_str(&r.line());
            out.push('\n');
            for d in r.diff() {
                out.push_str(&d);
                out.push('\n');
            }
            for c in r.checks.iter().filter(|c| !c.passed && c.open_question.is_some()) {
                out.push_str(&format!(
                    "  criterion {} {}: expected {}, computed {} (open question)\n",
                    r.id, c.item, c.expected, c.computed
                ));
            }
        }
        out
    };
    let rendered = Renderings { default: Format::Text, text: Some(&text), csv: None, dot: None }.render(ctx, &json)?;
    let mut out = Outcome::new(json, rendered);
    out.timings = reports.iter().map(|r| (format!("criterion {}", r.id), r.elapsed)).collect();
    out.matches_paper = Some(!failed);
    out.exit = u8::from(failed);
    Ok(out)
}
