//! Search, filtering and classification for each series.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bits::Bits;
use super::classify::{dedupe, Equivalence};
use super::filters::{emax_with, series_filter_jstar, triangle_filter, Emax, WitnessScope};
use super::incidence::Incidence;
use super::search::{admissible_sets, k4_seeds, SearchSpec, SearchTasks, Strategy};
use super::system::ConfigSystem;
use crate::bounds::{Series, SeriesProfile};
use crate::graph::GraphShape;
use crate::tseries::{builtin_config, Builtin, IncidenceMatrix};
use crate::{Error, Result};

/// Environment variable naming the checkpoint directory.
pub const CHECKPOINT_ENV: &str = "QUARTIC_LINES_CHECKPOINT_DIR";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Run the long census stages.
    pub extended: bool,
    pub scope: WitnessScope,
    /// Where resumable census state is kept.
    pub checkpoint_dir: Option<PathBuf>,
}

impl PipelineOptions {
    /// Options with the checkpoint directory taken from [`CHECKPOINT_ENV`].
    pub fn from_env(extended: bool) -> Self {
        PipelineOptions {
            extended,
            scope: WitnessScope::Set,
            checkpoint_dir: std::env::var_os(CHECKPOINT_ENV).map(PathBuf::from),
        }
    }
}

/// One equivalence class of filtered sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    /// Number of `(−2)`-lines, the special line included.
    pub size: usize,
    pub shape: String,
    pub dynkin: Option<String>,
    pub emax_size: usize,
    pub total_with_k_lines: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell_cross: Option<bool>,
    /// Whether every single root of a nonempty `Ē` fails the triangle filter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub single_roots_fail: Option<bool>,
    pub certificate: String,
    pub members: Vec<usize>,
}

/// Candidate shapes before filtering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCount {
    pub size: usize,
    pub shape: String,
    pub dynkin: Option<String>,
    pub classes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell_cross: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub raw_sets: u64,
    pub classes: usize,
    pub survivors: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub min_size: usize,
    pub raw_sets: u64,
    pub classes: usize,
    pub by_size: BTreeMap<usize, usize>,
    pub tasks: usize,
    pub resumed_tasks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub series: String,
    pub equivalence: String,
    pub k_lines: usize,
    pub stages: Vec<Stage>,
    pub candidates: Vec<ShapeCount>,
    pub survivors: Vec<Survivor>,
    /// Distinct totals of the survivors, descending.
    pub totals: Vec<usize>,
    /// Largest total possible for sets below the enumerated sizes.
    pub unenumerated_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Census>,
    pub notes: Vec<String>,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["size", "shape", "dynkin", "emax_size", "total_with_k_lines", "name", "ell_cross"])
            .expect("in-memory write");
        for s in &self.survivors {
            w.write_record([
                s.size.to_string(),
                s.shape.clone(),
                s.dynkin.clone().unwrap_or_default(),
                s.emax_size.to_string(),
                s.total_with_k_lines.to_string(),
                s.name.clone().unwrap_or_default(),
                s.ell_cross.map(|b| b.to_string()).unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("series {} ({} equivalence)\n", self.series, self.equivalence);
        for st in &self.stages {
            out.push_str(&format!(
                "  stage {}: {} raw, {} classes, {} survive\n",
                st.name, st.raw_sets, st.classes, st.survivors
            ));
        }
        for s in &self.survivors {
            out.push_str(&format!(
                "  |V| = {:>2}  {:<24} Emax {:>2}  total {:>2}{}\n",
                s.size,
                s.shape,
                s.emax_size,
                s.total_with_k_lines,
                s.name.as_deref().map(|n| format!("  {n}")).unwrap_or_default()
            ));
        }
        let totals: Vec<String> = self.totals.iter().map(|t| t.to_string()).collect();
        out.push_str(&format!("  totals {{{}}}; below enumerated sizes at most {}\n", totals.join(", "), self.unenumerated_bound));
        if let Some(c) = &self.census {
            out.push_str(&format!("  census |V| >= {}: {} raw, {} classes {:?}\n", c.min_size, c.raw_sets, c.classes, c.by_size));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

fn candidate_shapes(sys: &ConfigSystem, classes: &[(Vec<usize>, Option<bool>, Vec<usize>)]) -> Vec<ShapeCount> {
    let mut map: BTreeMap<(std::cmp::Reverse<usize>, Option<bool>, String), ShapeCount> = BTreeMap::new();
    for (set, ell, core) in classes {
        let g = sys.graph(core);
        let shape = GraphShape::of(&g);
        map.entry((std::cmp::Reverse(set.len()), *ell, shape.certificate.clone()))
            .or_insert_with(|| ShapeCount { size: set.len(), shape: shape.label(&g), dynkin: shape.dynkin.clone(), classes: 0, ell_cross: *ell })
            .classes += 1;
    }
    map.into_values().collect()
}

struct Filtered {
    emax: Emax,
    passes: bool,
}

fn filter(sys: &ConfigSystem, set: &[usize], use_lambda: bool, scope: WitnessScope) -> Filtered {
    let emax = emax_with(sys, set, use_lambda);
    let passes = triangle_filter(sys, set, &emax.all_roots(sys), scope).passes;
    Filtered { emax, passes }
}

fn survivor(sys: &ConfigSystem, set: &[usize], core: &[usize], emax: &Emax, k_lines: usize) -> Survivor {
    let g = sys.graph(core);
    let shape = GraphShape::of(&g);
    Survivor {
        size: set.len(),
        shape: shape.label(&g),
        dynkin: shape.dynkin.clone(),
        emax_size: emax.len(),
        total_with_k_lines: set.len() + k_lines,
        name: None,
        ell_cross: None,
        single_roots_fail: None,
        certificate: shape.certificate,
        members: set.to_vec(),
    }
}

fn finish(mut report: PipelineReport) -> PipelineReport {
    report.survivors.sort_by(|a, b| {
        b.size
            .cmp(&a.size)
            .then_with(|| a.ell_cross.cmp(&b.ell_cross))
            .then_with(|| a.name.cmp(&b.name))
            .then_with(|| a.certificate.cmp(&b.certificate))
            .then_with(|| a.members.cmp(&b.members))
    });
    let mut totals: Vec<usize> = report.survivors.iter().map(|s| s.total_with_k_lines).collect();
    totals.sort_unstable_by(|a, b| b.cmp(a));
    totals.dedup();
    report.totals = totals;
    report
}

fn empty_report(series: Series, mode: Equivalence, k_lines: usize, unenumerated_bound: usize) -> PipelineReport {
    PipelineReport {
        series: series.name().to_string(),
        equivalence: format!("{mode:?}").to_lowercase(),
        k_lines,
        stages: Vec::new(),
        candidates: Vec::new(),
        survivors: Vec::new(),
        totals: Vec::new(),
        unenumerated_bound,
        census: None,
        notes: Vec::new(),
    }
}

/// Runs the search, the filters and the classification for a series.
pub fn pipeline(series: Series, options: &PipelineOptions) -> Result<PipelineReport> {
    let profile = SeriesProfile::of(series);
    let sys = profile.system()?;
    match series {
        Series::X => Ok(clique_pipeline(series, &sys, 14, profile.k_line_max, true, options)),
        Series::J => Ok(clique_pipeline(series, &sys, 13, profile.k_line_max, true, options)),
        Series::L => Ok(maximal_pipeline(series, &sys, profile.k_line_max, options)),
        Series::JStar => jstar_pipeline(&sys, profile.k_line_max, options),
        Series::T => t_pipeline(&sys, profile.k_line_max, options),
    }
}

/// All admissible sets from `min_size` on, filtered, then classified.
fn clique_pipeline(
    series: Series,
    sys: &ConfigSystem,
    min_size: usize,
    k_lines: usize,
    use_lambda: bool,
    options: &PipelineOptions,
) -> PipelineReport {
    let mode = Equivalence::Full;
    let mut report = empty_report(series, mode, k_lines, min_size - 1 + k_lines);
    let started = Instant::now();
    let sets = admissible_sets(sys, &SearchSpec::default().with_min_size(min_size));
    let passing: Vec<Vec<usize>> = sets
        .par_iter()
        .filter(|s| filter(sys, s, use_lambda, options.scope).passes)
        .cloned()
        .collect();
    let classes = dedupe(sys, &passing, mode);
    for set in &classes {
        let f = filter(sys, set, use_lambda, options.scope);
        report.survivors.push(survivor(sys, set, set, &f.emax, k_lines));
    }
    report.stages.push(Stage {
        name: format!("|V| >= {min_size}"),
        raw_sets: sets.len() as u64,
        classes: classes.len(),
        survivors: classes.len(),
        elapsed: started.elapsed(),
    });
    report.notes.push(format!("{} raw sets pass the filters before classification", passing.len()));
    finish(report)
}

/// Inclusion-maximal sets of the largest size, filtered and classified.
fn maximal_pipeline(series: Series, sys: &ConfigSystem, k_lines: usize, options: &PipelineOptions) -> PipelineReport {
    let mode = Equivalence::Full;
    let started = Instant::now();
    let bound = super::search::bnd(sys);
    let sets = admissible_sets(sys, &SearchSpec::from_strategy(sys, Strategy::ExhaustiveMaximal).with_min_size(bound));
    let classes = dedupe(sys, &sets, mode);
    let mut report = empty_report(series, mode, k_lines, bound - 1 + k_lines);
    run_filters(sys, &mut report, &format!("maximal |V| = {bound}"), sets.len() as u64, classes, true, options, started);
    finish(report)
}

#[allow(clippy::too_many_arguments)]
fn run_filters(
    sys: &ConfigSystem,
    report: &mut PipelineReport,
    stage: &str,
    raw: u64,
    classes: Vec<Vec<usize>>,
    use_lambda: bool,
    options: &PipelineOptions,
    started: Instant,
) {
    let tagged: Vec<(Vec<usize>, Option<bool>, Vec<usize>)> = classes.iter().map(|s| (s.clone(), None, s.clone())).collect();
    report.candidates.extend(candidate_shapes(sys, &tagged));
    let before = report.survivors.len();
    for set in &classes {
        let f = filter(sys, set, use_lambda, options.scope);
        if f.passes {
            report.survivors.push(survivor(sys, set, set, &f.emax, report.k_lines));
        }
    }
    report.stages.push(Stage {
        name: stage.to_string(),
        raw_sets: raw,
        classes: classes.len(),
        survivors: report.survivors.len() - before,
        elapsed: started.elapsed(),
    });
}

/// Index of the special line of `E8 ⊕ D1`: the candidate supported on `D1`.
pub fn ell_cross(sys: &ConfigSystem) -> Option<usize> {
    let rank = sys.lattice.rank();
    (0..sys.len()).find(|&i| sys.vectors[i].num[..rank - 1].iter().all(|&x| x == 0))
}

fn jstar_pipeline(sys: &ConfigSystem, k_lines: usize, options: &PipelineOptions) -> Result<PipelineReport> {
    let mode = Equivalence::Full;
    let ell = ell_cross(sys).ok_or_else(|| Error::Invalid("no special line in E8+D1".into()))?;
    let mut report = empty_report(Series::JStar, mode, k_lines, 0);

    let started = Instant::now();
    let min_with = 11;
    let with = admissible_sets(sys, &SearchSpec::default().with_seeds(vec![vec![ell]]).with_min_size(min_with));
    let with_classes = dedupe(sys, &with, mode);
    let core = |s: &[usize]| -> Vec<usize> { s.iter().copied().filter(|&x| x != ell).collect() };
    let tagged: Vec<_> = with_classes.iter().map(|s| (s.clone(), Some(true), core(s))).collect();
    report.candidates.extend(candidate_shapes(sys, &tagged));
    let mut kept = 0;
    for set in &with_classes {
        let e = emax_with(sys, set, true);
        let c = core(set);
        if series_filter_jstar(sys, &c, true, &e.all_roots(sys)) {
            let mut s = survivor(sys, set, &c, &e, k_lines);
            s.ell_cross = Some(true);
            report.survivors.push(s);
            kept += 1;
        }
    }
    report.stages.push(Stage {
        name: format!("with special line, |V| >= {min_with}"),
        raw_sets: with.len() as u64,
        classes: with_classes.len(),
        survivors: kept,
        elapsed: started.elapsed(),
    });

    let started = Instant::now();
    let forbid = Bits::singleton(ell);
    let free_bound = super::search::bnd_witness(sys, &SearchSpec { triangle_free: true, forbid, ..Default::default() }).0;
    let without = admissible_sets(
        sys,
        &SearchSpec::from_strategy(sys, Strategy::TriangleFree).with_forbid(forbid).with_min_size(free_bound),
    );
    let without_classes = dedupe(sys, &without, mode);
    let tagged: Vec<_> = without_classes.iter().map(|s| (s.clone(), Some(false), s.clone())).collect();
    report.candidates.extend(candidate_shapes(sys, &tagged));
    let mut kept = 0;
    for set in &without_classes {
        let e = emax_with(sys, set, true);
        if series_filter_jstar(sys, set, false, &e.all_roots(sys)) {
            let mut s = survivor(sys, set, set, &e, k_lines);
            s.ell_cross = Some(false);
            report.survivors.push(s);
            kept += 1;
        }
    }
    report.stages.push(Stage {
        name: format!("without special line, triangle-free |V| = {free_bound}"),
        raw_sets: without.len() as u64,
        classes: without_classes.len(),
        survivors: kept,
        elapsed: started.elapsed(),
    });
    report.unenumerated_bound = (min_with - 1 + k_lines).max(free_bound - 1 + k_lines);
    let _ = options;
    Ok(finish(report))
}

/// Members of the system forming the triples of an incidence matrix, the
/// rows read as the `λ`-vectors in order.
pub fn fixture_set(inc: &Incidence, matrix: &IncidenceMatrix) -> Option<Vec<usize>> {
    let index: HashMap<u16, usize> = (0..inc.len()).map(|i| (inc.block(i), i)).collect();
    let mut set: Vec<usize> = matrix
        .columns
        .iter()
        .map(|c| index.get(&c.iter().fold(0u16, |m, &p| m | 1 << p)).copied())
        .collect::<Option<_>>()?;
    set.sort_unstable();
    Some(set)
}

/// Names of the built-in fixtures keyed by their incidence keys.
fn fixture_keys(inc: &Incidence) -> Vec<(Vec<u16>, &'static str)> {
    Builtin::ALL
        .iter()
        .filter_map(|&b| fixture_set(inc, &builtin_config(b)).map(|s| (inc.key(&s), fixture_name(b))))
        .collect()
}

fn fixture_name(b: Builtin) -> &'static str {
    match b {
        Builtin::V16 => "V16",
        Builtin::V17 => "V17",
        Builtin::V19 => "V19",
        Builtin::UPrime16 => "U'16",
        Builtin::UDoublePrime16 => "U''16",
    }
}

/// Names the root-bearing survivors: a pair sharing size and `Ē` size is
/// `U'n`, `U''n` in member order, every other one is `Wn`.
fn name_with_roots(survivors: &mut [Survivor]) {
    let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, s) in survivors.iter().enumerate() {
        groups.entry((s.size, s.emax_size)).or_default().push(i);
    }
    for mut idx in groups.into_values() {
        idx.sort_by(|&a, &b| survivors[a].members.cmp(&survivors[b].members));
        let pair = idx.len() == 2;
        for (rank, &i) in idx.iter().enumerate() {
            let n = survivors[i].size;
            survivors[i].name = Some(match (pair, rank) {
                (true, 0) => format!("U'{n}"),
                (true, _) => format!("U''{n}"),
                _ => format!("W{n}"),
            });
        }
    }
}

fn t_pipeline(sys: &ConfigSystem, k_lines: usize, options: &PipelineOptions) -> Result<PipelineReport> {
    let inc = Incidence::from_system(sys).ok_or_else(|| Error::Invalid("A11 candidates are not a triple system".into()))?;
    let fixtures = fixture_keys(&inc);
    let mut report = empty_report(Series::T, Equivalence::Local, k_lines, 15 + k_lines);
    report.notes.push("roots are tested against the (-2)-line classes only".into());

    // |V| = 16 with no exceptional roots: every triangle needs a fourth line,
    // so the set contains K(4) or has no triangle.
    let started = Instant::now();
    let size = 16;
    let k4 = SearchSpec::default().with_seeds(k4_seeds(sys)).with_min_size(size).with_max_size(size);
    let free = SearchSpec { triangle_free: true, ..Default::default() }.with_min_size(size).with_max_size(size);
    let classes = Mutex::new(HashMap::<Vec<u16>, Vec<usize>>::new());
    let mut raw = 0u64;
    for spec in [&k4, &free] {
        let sets = admissible_sets(sys, spec);
        raw += sets.len() as u64;
        sets.par_iter().for_each(|s| insert_min(&mut classes.lock().expect("class lock"), inc.key(s), s));
    }
    let classes = classes.into_inner().expect("class lock");
    let mut kept = 0;
    let mut reps: Vec<Vec<usize>> = classes.into_values().collect();
    reps.sort();
    for set in &reps {
        if triangle_filter(sys, set, &[], options.scope).passes {
            let mut s = survivor(sys, set, set, &Emax::default(), k_lines);
            let key = inc.key(set);
            s.name = fixtures.iter().find(|(k, _)| *k == key).map(|(_, n)| n.to_string());
            report.survivors.push(s);
            kept += 1;
        }
    }
    report.stages.push(Stage {
        name: "|V| = 16 containing K(4) or triangle-free, no roots".into(),
        raw_sets: raw,
        classes: reps.len(),
        survivors: kept,
        elapsed: started.elapsed(),
    });

    if !options.extended {
        report.notes.push("the |V| >= 17 census runs only in extended mode".into());
        return Ok(finish(report));
    }
    let started = Instant::now();
    let (census, reps) = census(sys, &inc, 17, options.checkpoint_dir.as_deref())?;
    let filtered: Vec<(Vec<usize>, Filtered)> =
        reps.into_par_iter().map(|s| { let f = filter(sys, &s, false, options.scope); (s, f) }).filter(|(_, f)| f.passes).collect();
    let mut kept = 0;
    let mut rooted = Vec::new();
    for (set, f) in filtered {
        let mut s = survivor(sys, &set, &set, &f.emax, k_lines);
        if f.emax.is_empty() {
            let key = inc.key(&set);
            s.name = fixtures.iter().find(|(k, _)| *k == key).map(|(_, n)| n.to_string());
        } else {
            let roots = f.emax.all_roots(sys);
            s.single_roots_fail = Some(roots.iter().all(|&r| !triangle_filter(sys, &set, &[r], options.scope).passes));
        }
        if f.emax.is_empty() {
            report.survivors.push(s);
        } else {
            rooted.push(s);
        }
        kept += 1;
    }
    name_with_roots(&mut rooted);
    report.survivors.extend(rooted);
    report.stages.push(Stage {
        name: "|V| >= 17 census".into(),
        raw_sets: census.raw_sets,
        classes: census.classes,
        survivors: kept,
        elapsed: started.elapsed(),
    });
    report.census = Some(census);
    report.unenumerated_bound = 15 + k_lines;
    Ok(finish(report))
}

fn insert_min(map: &mut HashMap<Vec<u16>, Vec<usize>>, key: Vec<u16>, set: &[usize]) {
    match map.get_mut(&key) {
        Some(rep) if set < rep.as_slice() => *rep = set.to_vec(),
        Some(_) => {}
        None => {
            map.insert(key, set.to_vec());
        }
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CensusState {
    min_size: usize,
    tasks: usize,
    done: Vec<usize>,
    raw_sets: u64,
    classes: Vec<(Vec<u16>, Vec<usize>)>,
}

impl CensusState {
    fn path(dir: &Path, min_size: usize) -> PathBuf {
        dir.join(format!("t-census-{min_size}.json"))
    }

    fn load(dir: &Path, min_size: usize, tasks: usize) -> Result<Option<Self>> {
        let path = Self::path(dir, min_size);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        let state: CensusState = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        if state.min_size != min_size || state.tasks != tasks {
            log::warn!("ignoring checkpoint {} from a different search", path.display());
            return Ok(None);
        }
        Ok(Some(state))
    }

    fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let path = Self::path(dir, self.min_size);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec(self).map_err(|e| Error::Invalid(e.to_string()))?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

const CHECKPOINT_EVERY: Duration = Duration::from_secs(60);

struct CensusProgress {
    classes: HashMap<Vec<u16>, Vec<usize>>,
    done: Vec<usize>,
    raw: u64,
    saved: Instant,
}

/// All admissible sets of at least `min_size` members, as classes under
/// isomorphism of the triple systems, with the smallest member list of each.
/// Progress is saved to `checkpoint` and resumed from there.
pub fn census(
    sys: &ConfigSystem,
    inc: &Incidence,
    min_size: usize,
    checkpoint: Option<&Path>,
) -> Result<(Census, Vec<Vec<usize>>)> {
    let spec = SearchSpec::default().with_min_size(min_size);
    let mut shallow = Vec::new();
    let tasks = SearchTasks::new(sys, &spec, 4, &mut |s| shallow.push(s.to_vec()));
    let resumed = match checkpoint {
        Some(dir) => CensusState::load(dir, min_size, tasks.len())?,
        None => None,
    };
    let resumed_tasks = resumed.as_ref().map_or(0, |s| s.done.len());
    let mut progress = CensusProgress { classes: HashMap::new(), done: Vec::new(), raw: 0, saved: Instant::now() };
    if let Some(state) = resumed {
        progress.classes = state.classes.into_iter().collect();
        progress.done = state.done;
        progress.raw = state.raw_sets;
        log::info!("resuming census with {} of {} subtrees done", progress.done.len(), tasks.len());
    } else {
        progress.raw = shallow.len() as u64;
        for s in &shallow {
            insert_min(&mut progress.classes, inc.key(s), s);
        }
    }
    let done: std::collections::HashSet<usize> = progress.done.iter().copied().collect();
    let pending: Vec<usize> = (0..tasks.len()).filter(|i| !done.contains(i)).collect();
    let progress = Mutex::new(progress);
    let save = |p: &CensusProgress, dir: &Path| -> Result<()> {
        let mut classes: Vec<(Vec<u16>, Vec<usize>)> = p.classes.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        classes.sort();
        let mut done = p.done.clone();
        done.sort_unstable();
        CensusState { min_size, tasks: tasks.len(), done, raw_sets: p.raw, classes }.save(dir)
    };
    pending.par_iter().try_for_each(|&i| -> Result<()> {
        let mut local: HashMap<Vec<u16>, Vec<usize>> = HashMap::new();
        let mut raw = 0u64;
        tasks.run(i, &mut |s| {
            raw += 1;
            insert_min(&mut local, inc.key(s), s);
        });
        let mut p = progress.lock().expect("census lock");
        for (k, v) in local {
            insert_min(&mut p.classes, k, &v);
        }
        p.raw += raw;
        p.done.push(i);
        if let Some(dir) = checkpoint {
            if p.saved.elapsed() >= CHECKPOINT_EVERY {
                save(&p, dir)?;
                p.saved = Instant::now();
            }
        }
        Ok(())
    })?;
    let p = progress.into_inner().expect("census lock");
    if let Some(dir) = checkpoint {
        save(&p, dir)?;
    }
    let mut by_size = BTreeMap::new();
    for k in p.classes.keys() {
        *by_size.entry(k.len()).or_insert(0) += 1;
    }
    let mut reps: Vec<Vec<usize>> = p.classes.into_values().collect();
    reps.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let census = Census { min_size, raw_sets: p.raw, classes: reps.len(), by_size, tasks: tasks.len(), resumed_tasks };
    Ok((census, reps))
}

/// Graphviz rendering of a survivor's adjacency graph.
pub fn survivor_dot(series: Series, survivor: &Survivor) -> Result<String> {
    let sys = SeriesProfile::of(series).system()?;
    let labels: Vec<String> = survivor.members.iter().map(|&i| sys.vectors[i].to_string()).collect();
    let name = survivor.name.clone().unwrap_or_else(|| format!("{} {}", series.name(), survivor.shape));
    Ok(sys.graph(&survivor.members).to_dot(&name, Some(&labels)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::system::tests::a11_system_with_lambda;

    #[test]
    fn fixtures_embed_into_a11() {
        let sys = a11_system_with_lambda();
        let inc = Incidence::from_system(&sys).unwrap();
        let keys = fixture_keys(&inc);
        assert_eq!(keys.len(), 5);
        for b in Builtin::ALL {
            let set = fixture_set(&inc, &builtin_config(b)).unwrap();
            assert!(sys.is_admissible(&set), "{b:?}");
            assert!(emax_with(&sys, &set, false).is_empty(), "{b:?}");
            assert!(triangle_filter(&sys, &set, &[], WitnessScope::Set).passes, "{b:?}");
        }
        let distinct: std::collections::HashSet<_> = keys.iter().map(|(k, _)| k.clone()).collect();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn lambda_kills_every_a11_root() {
        let sys = a11_system_with_lambda();
        assert!(emax_with(&sys, &[], true).is_empty());
        assert_eq!(emax_with(&sys, &[], false).len(), sys.positive_root_count());
    }

    #[test]
    fn census_resumes_from_checkpoint() {
        let sys = a11_system_with_lambda();
        let inc = Incidence::from_system(&sys).unwrap();
        let dir = std::env::temp_dir().join(format!("census-test-{}", std::process::id()));
        let (fresh, reps) = census(&sys, &inc, 19, Some(&dir)).unwrap();
        assert_eq!(fresh.by_size.get(&20), Some(&5));
        let (again, reps2) = census(&sys, &inc, 19, Some(&dir)).unwrap();
        assert_eq!(again.resumed_tasks, again.tasks);
        assert_eq!((again.raw_sets, again.classes, reps2), (fresh.raw_sets, fresh.classes, reps));
        fs::remove_dir_all(dir).unwrap();
    }
}
