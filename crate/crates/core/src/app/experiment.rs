//! Grid orchestration: one morph per (graph, target, combo, seed) cell.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{ExperimentGrid, GridRecord};
use crate::anneal::{morph, CellInfo, MorphResult};
use crate::error::{Error, Result};
use crate::metrics::MetricSet;
use crate::shapes::TargetShape;

use super::config::{ExperimentPlan, LoadedGraph};
use super::render::render;

pub const RESULTS_CSV: &str = "results.csv";
pub const FAILURES_CSV: &str = "failures.csv";

/// Filesystem-safe stem `{graph}__{target}__{combo}__s{seed}`.
pub fn cell_stem(cell: &CellInfo) -> String {
    let clean = |s: &str| -> String {
        s.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
            .collect()
    };
    format!(
        "{}__{}__{}__s{}",
        clean(&cell.graph),
        clean(&cell.target),
        clean(&cell.combo),
        cell.seed
    )
}

/// Paths written for one cell.
#[derive(Debug, Clone)]
pub struct CellFiles {
    pub result: PathBuf,
    pub start_svg: PathBuf,
    pub final_svg: PathBuf,
}

impl CellFiles {
    pub fn new(dir: &Path, cell: &CellInfo) -> Self {
        let stem = cell_stem(cell);
        CellFiles {
            result: dir.join(format!("{stem}.json")),
            start_svg: dir.join(format!("{stem}_start.svg")),
            final_svg: dir.join(format!("{stem}_final.svg")),
        }
    }

    fn complete(&self) -> bool {
        self.result.is_file() && self.start_svg.is_file() && self.final_svg.is_file()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellFailure {
    pub graph: String,
    pub target: String,
    pub combo: String,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    /// Completed cells in plan order.
    pub grid: ExperimentGrid,
    pub failures: Vec<CellFailure>,
    pub computed: usize,
    pub skipped: usize,
}

struct Cell<'a> {
    graph: &'a LoadedGraph,
    target: &'a TargetShape,
    target_name: String,
    combo: MetricSet,
    seed: u64,
}

enum CellOutcome {
    Computed(GridRecord),
    Skipped(GridRecord),
    Failed(CellFailure),
}

pub fn write_result(path: &Path, result: &MorphResult) -> Result<()> {
    fs::write(path, result.to_json()?).map_err(|e| Error::io(path, e))
}

pub fn read_result(path: &Path) -> Result<MorphResult> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    MorphResult::from_json(&text)
}

fn run_cell(cell: &Cell<'_>, plan: &ExperimentPlan) -> CellOutcome {
    let info = CellInfo {
        graph: cell.graph.name.clone(),
        target: cell.target_name.clone(),
        combo: cell.combo.label(),
        seed: cell.seed,
    };
    let record = |percent: f64| GridRecord {
        graph: info.graph.clone(),
        target: info.target.clone(),
        combo: info.combo.clone(),
        seed: info.seed,
        percent,
    };
    let files = CellFiles::new(&plan.out_dir, &info);
    if !plan.force && files.complete() {
        if let Ok(prev) = read_result(&files.result) {
            if prev.cell.as_ref() == Some(&info) {
                return CellOutcome::Skipped(record(prev.summary.final_percent));
            }
        }
    }
    let attempt = || -> Result<f64> {
        let mut cfg = plan.anneal.clone();
        cfg.seed = cell.seed;
        cfg.trace_every = plan.trace_every;
        let g = cell.graph;
        let mut result = morph(&g.graph, &g.dist, &g.start, cell.target, cell.combo, &cfg)?;
        result.cell = Some(info.clone());
        render(&g.start, &g.graph, &files.start_svg, &plan.render)?;
        render(&result.final_drawing()?, &g.graph, &files.final_svg, &plan.render)?;
        write_result(&files.result, &result)?;
        Ok(result.summary.final_percent)
    };
    match attempt() {
        Ok(p) => CellOutcome::Computed(record(p)),
        Err(e) => CellOutcome::Failed(CellFailure {
            graph: info.graph.clone(),
            target: info.target.clone(),
            combo: info.combo.clone(),
            seed: info.seed,
            error: e.to_string(),
        }),
    }
}

#[cfg(feature = "parallel")]
fn run_cells(cells: &[Cell<'_>], plan: &ExperimentPlan) -> Result<Vec<CellOutcome>> {
    use rayon::prelude::*;
    let work = || cells.par_iter().map(|c| run_cell(c, plan)).collect();
    match plan.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map(|pool| pool.install(work))
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}"))),
        None => Ok(work()),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_cells(cells: &[Cell<'_>], plan: &ExperimentPlan) -> Result<Vec<CellOutcome>> {
    Ok(cells.iter().map(|c| run_cell(c, plan)).collect())
}

/// Runs every cell of `plan`, writing per-cell results, SVGs and a
/// consolidated `results.csv` under `plan.out_dir`.
///
/// Cells whose files already exist are read back instead of recomputed unless
/// `plan.force` is set. A failing cell is listed in `failures.csv` and does
/// not stop the others.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentOutcome> {
    plan.validate()?;
    let graphs = plan
        .graphs
        .iter()
        .map(|g| g.load(&plan.layout))
        .collect::<Result<Vec<_>>>()?;
    let mut targets = Vec::with_capacity(graphs.len());
    for g in &graphs {
        let resolved = plan
            .targets
            .iter()
            .map(|t| Ok((t.name(), t.resolve(g.graph.node_count(), &plan.shape_params)?)))
            .collect::<Result<Vec<_>>>()?;
        targets.push(resolved);
    }
    fs::create_dir_all(&plan.out_dir).map_err(|e| Error::io(&plan.out_dir, e))?;

    let mut cells = Vec::new();
    for (g, shapes) in graphs.iter().zip(&targets) {
        for (name, shape) in shapes {
            for &combo in &plan.combos {
                for k in 0..plan.seeds {
                    cells.push(Cell {
                        graph: g,
                        target: shape,
                        target_name: name.clone(),
                        combo,
                        seed: plan.anneal.seed.wrapping_add(k),
                    });
                }
            }
        }
    }

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let (mut computed, mut skipped) = (0, 0);
    for outcome in run_cells(&cells, plan)? {
        match outcome {
            CellOutcome::Computed(r) => {
                computed += 1;
                records.push(r);
            }
            CellOutcome::Skipped(r) => {
                skipped += 1;
                records.push(r);
            }
            CellOutcome::Failed(f) => failures.push(f),
        }
    }
    let grid = ExperimentGrid::new(records)?;
    grid.write_csv(&plan.out_dir.join(RESULTS_CSV))?;
    let failures_path = plan.out_dir.join(FAILURES_CSV);
    if failures.is_empty() {
        if failures_path.exists() {
            fs::remove_file(&failures_path).map_err(|e| Error::io(&failures_path, e))?;
        }
    } else {
        let mut wtr = csv::Writer::from_path(&failures_path)?;
        for f in &failures {
            wtr.serialize(f)?;
        }
        wtr.flush().map_err(|e| Error::io(&failures_path, e))?;
    }
    Ok(ExperimentOutcome {
        grid,
        failures,
        computed,
        skipped,
    })
}

/// Collects grid records from every result JSON in `dir` that carries cell
/// labels, sorted by file name.
pub fn load_results_dir(dir: &Path) -> Result<ExperimentGrid> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut records = Vec::new();
    for p in paths {
        let result = read_result(&p)?;
        if let Some(cell) = result.cell {
            records.push(GridRecord {
                graph: cell.graph,
                target: cell.target,
                combo: cell.combo,
                seed: cell.seed,
                percent: result.summary.final_percent,
            });
        }
    }
    if records.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no experiment result files in {}",
            dir.display()
        )));
    }
    ExperimentGrid::new(records)
}

