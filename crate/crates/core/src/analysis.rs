//! Nonparametric comparison of experiment outcomes.
//!
//! Friedman for the omnibus test over paired treatments, one-sided Wilcoxon
//! signed-rank for paired pairwise comparisons, one-sided Mann–Whitney U for
//! independent ones, Bonferroni across the pairwise cells. Small samples
//! (at most [`EXACT_LIMIT`] observations per side) use exact enumeration;
//! larger ones the normal approximation with tie and continuity corrections.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const EXACT_LIMIT: usize = 10;

/// Default significance level.
pub const ALPHA: f64 = 0.05;

fn stats_err(msg: impl Into<String>) -> Error {
    Error::Statistics(msg.into())
}

fn normal_sf(z: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("standard normal").sf(z)
}

/// Average ranks (1-based) and the sizes of tie groups.
pub fn average_ranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

fn tie_sum(ties: &[usize]) -> f64 {
    ties.iter().map(|&t| (t * t * t - t) as f64).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alternative {
    /// First sample tends to be larger.
    Greater,
    Less,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedmanResult {
    pub chi2: f64,
    pub p: f64,
}

/// Friedman test. `groups[t][b]` is treatment `t` in block `b`.
pub fn friedman(groups: &[Vec<f64>]) -> Result<FriedmanResult> {
    let k = groups.len();
    if k < 3 {
        return Err(stats_err(
            "Friedman needs at least three treatments; compare two with Wilcoxon",
        ));
    }
    let n = groups[0].len();
    if groups.iter().any(|g| g.len() != n) {
        return Err(stats_err("Friedman needs equally long treatment samples"));
    }
    if n < 2 {
        return Err(stats_err("Friedman needs at least two blocks"));
    }
    let mut rank_sums = vec![0.0; k];
    let mut ties_total = 0.0;
    for b in 0..n {
        let block: Vec<f64> = groups.iter().map(|g| g[b]).collect();
        let (ranks, ties) = average_ranks(&block);
        for (sum, r) in rank_sums.iter_mut().zip(ranks) {
            *sum += r;
        }
        ties_total += tie_sum(&ties);
    }
    let (nf, kf) = (n as f64, k as f64);
    let correction = 1.0 - ties_total / (nf * (kf * kf * kf - kf));
    if correction <= 0.0 {
        return Ok(FriedmanResult { chi2: 0.0, p: 1.0 });
    }
    let ss: f64 = rank_sums.iter().map(|r| r * r).sum();
    let chi2 = ((12.0 / (nf * kf * (kf + 1.0))) * ss - 3.0 * nf * (kf + 1.0)) / correction;
    let chi2 = chi2.max(0.0);
    let dist = ChiSquared::new(kf - 1.0).map_err(|e| stats_err(e.to_string()))?;
    Ok(FriedmanResult {
        chi2,
        p: dist.sf(chi2),
    })
}

/// Nonzero paired differences, their rank sum over positives, and the ranks.
fn signed_ranks(a: &[f64], b: &[f64]) -> Result<(f64, Vec<f64>, Vec<usize>)> {
    if a.len() != b.len() {
        return Err(stats_err("Wilcoxon needs paired samples of equal length"));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    if diffs.is_empty() {
        return Err(stats_err("all paired differences are zero"));
    }
    if diffs.len() < 5 {
        return Err(stats_err(format!(
            "Wilcoxon needs at least 5 nonzero differences, got {}",
            diffs.len()
        )));
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = average_ranks(&abs);
    let w_plus = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    Ok((w_plus, ranks, ties))
}

/// One-sided Wilcoxon signed-rank p-value for paired samples. Zero
/// differences are dropped.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alternative: Alternative) -> Result<f64> {
    let (w_plus, ranks, ties) = signed_ranks(a, b)?;
    let n = ranks.len();
    let total: f64 = ranks.iter().sum();
    // P(W+ <= w) for "less" equals P(W+ >= total - w) by sign symmetry
    let w = match alternative {
        Alternative::Greater => w_plus,
        Alternative::Less => total - w_plus,
    };
    if n <= EXACT_LIMIT {
        return Ok(signed_rank_exact_sf(&ranks, w));
    }
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_sum(&ties) / 48.0;
    Ok(normal_sf((w - mean - 0.5) / var.sqrt()))
}

/// `P(W+ >= w)` over all `2^n` sign assignments of `ranks`.
fn signed_rank_exact_sf(ranks: &[f64], w: f64) -> f64 {
    let n = ranks.len();
    let mut hits = 0u64;
    for mask in 0u64..(1 << n) {
        let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if s >= w - 1e-9 {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitneyResult {
    /// U statistic of the first sample.
    pub u: f64,
    pub p: f64,
}

/// One-sided Mann–Whitney U test for independent samples.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alternative: Alternative) -> Result<MannWhitneyResult> {
    if a.is_empty() || b.is_empty() {
        return Err(stats_err("Mann-Whitney needs two nonempty samples"));
    }
    let (n1, n2) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = average_ranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let u = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let (f1, f2) = (n1 as f64, n2 as f64);
    let stat = match alternative {
        Alternative::Greater => u,
        Alternative::Less => f1 * f2 - u,
    };
    let p = if n1 <= EXACT_LIMIT && n2 <= EXACT_LIMIT {
        // U_b = n1*n2 - U_a, and relabeling the samples maps one tail to the other
        let ranks_for_tail = match alternative {
            Alternative::Greater => ranks.clone(),
            Alternative::Less => ranks.iter().map(|r| (n1 + n2 + 1) as f64 - r).collect(),
        };
        rank_sum_exact_sf(&ranks_for_tail, n1, stat)
    } else {
        let nn = f1 + f2;
        let mean = f1 * f2 / 2.0;
        let var = f1 * f2 / 12.0 * ((nn + 1.0) - tie_sum(&ties) / (nn * (nn - 1.0)));
        if var <= 0.0 {
            1.0
        } else {
            normal_sf((stat - mean - 0.5) / var.sqrt())
        }
    };
    Ok(MannWhitneyResult { u, p })
}

/// `P(U >= u)` over all ways to choose which `n1` pooled ranks belong to the
/// first sample.
fn rank_sum_exact_sf(ranks: &[f64], n1: usize, u: f64) -> f64 {
    fn walk(ranks: &[f64], start: usize, left: usize, sum: f64, offset: f64, u: f64, hits: &mut u64, total: &mut u64) {
        if left == 0 {
            *total += 1;
            if sum - offset >= u - 1e-9 {
                *hits += 1;
            }
            return;
        }
        for i in start..=(ranks.len() - left) {
            walk(ranks, i + 1, left - 1, sum + ranks[i], offset, u, hits, total);
        }
    }
    let offset = (n1 * (n1 + 1)) as f64 / 2.0;
    let (mut hits, mut total) = (0, 0);
    walk(ranks, 0, n1, 0.0, offset, u, &mut hits, &mut total);
    hits as f64 / total as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adjusted {
    pub p: f64,
    pub reject: bool,
}

/// Bonferroni: `min(1, p * k)`, rejecting when strictly below `alpha`.
pub fn bonferroni(pvals: &[f64], alpha: f64) -> Vec<Adjusted> {
    let k = pvals.len() as f64;
    pvals
        .iter()
        .map(|&p| {
            let adj = (p * k).min(1.0);
            Adjusted {
                p: adj,
                reject: adj < alpha,
            }
        })
        .collect()
}

/// One finished experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub graph: String,
    pub target: String,
    pub combo: String,
    pub seed: u64,
    pub percent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Metric combination; paired over (graph, target, seed).
    Metric,
    /// Target shape; paired over (graph, combo, seed).
    Target,
    /// Graph; independent samples.
    Graph,
}

impl Axis {
    fn level(self, r: &GridRecord) -> &str {
        match self {
            Axis::Metric => &r.combo,
            Axis::Target => &r.target,
            Axis::Graph => &r.graph,
        }
    }

    fn block(self, r: &GridRecord) -> (String, String, u64) {
        match self {
            Axis::Metric => (r.graph.clone(), r.target.clone(), r.seed),
            Axis::Target => (r.graph.clone(), r.combo.clone(), r.seed),
            Axis::Graph => (r.target.clone(), r.combo.clone(), r.seed),
        }
    }

    pub fn is_paired(self) -> bool {
        !matches!(self, Axis::Graph)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Metric => "metric",
            Axis::Target => "target",
            Axis::Graph => "graph",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "metric" | "combo" | "metric-combo" => Ok(Axis::Metric),
            "target" | "shape" => Ok(Axis::Target),
            "graph" => Ok(Axis::Graph),
            other => Err(Error::InvalidParameter(format!("unknown axis `{other}`"))),
        }
    }
}

/// Final similarity percents over (graph, target, combo, seed) cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentGrid {
    records: Vec<GridRecord>,
}

impl ExperimentGrid {
    pub fn new(records: Vec<GridRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &records {
            if !r.percent.is_finite() {
                return Err(stats_err(format!(
                    "non-finite percent in cell {}/{}/{}/{}",
                    r.graph, r.target, r.combo, r.seed
                )));
            }
            if !seen.insert((&r.graph, &r.target, &r.combo, r.seed)) {
                return Err(stats_err(format!(
                    "duplicate cell {}/{}/{}/{}",
                    r.graph, r.target, r.combo, r.seed
                )));
            }
        }
        Ok(ExperimentGrid { records })
    }

    pub fn records(&self) -> &[GridRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Levels of `axis` in order of first appearance.
    pub fn levels(&self, axis: Axis) -> Vec<String> {
        let mut seen = HashSet::new();
        self.records
            .iter()
            .map(|r| axis.level(r))
            .filter(|l| seen.insert(*l))
            .map(str::to_string)
            .collect()
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let records = rdr.deserialize().collect::<std::result::Result<Vec<GridRecord>, _>>()?;
        ExperimentGrid::new(records)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        for r in &self.records {
            wtr.serialize(r)?;
        }
        wtr.flush().map_err(|e| Error::io(path, e))
    }

    /// Percents per level, keyed by block, for paired tests.
    fn paired_table(&self, axis: Axis) -> HashMap<String, BTreeMap<(String, String, u64), f64>> {
        let mut table: HashMap<String, BTreeMap<_, _>> = HashMap::new();
        for r in &self.records {
            table
                .entry(axis.level(r).to_string())
                .or_default()
                .insert(axis.block(r), r.percent);
        }
        table
    }

    /// Friedman over `axis`, using only blocks where every level is present.
    pub fn friedman(&self, axis: Axis) -> Result<FriedmanResult> {
        let levels = self.levels(axis);
        let table = self.paired_table(axis);
        let blocks: Vec<_> = table[&levels[0]]
            .keys()
            .filter(|b| levels.iter().all(|l| table[l].contains_key(*b)))
            .cloned()
            .collect();
        let groups: Vec<Vec<f64>> = levels
            .iter()
            .map(|l| blocks.iter().map(|b| table[l][b]).collect())
            .collect();
        friedman(&groups)
    }
}

/// Whether the row level is significantly greater (easier to fool) than the
/// column level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceMatrix {
    pub axis: Axis,
    pub levels: Vec<String>,
    pub p_raw: Vec<Vec<f64>>,
    pub p_adjusted: Vec<Vec<f64>>,
    pub significant: Vec<Vec<bool>>,
    pub alpha: f64,
    pub correction: String,
}

pub fn significance_matrix(grid: &ExperimentGrid, axis: Axis, alpha: f64) -> Result<SignificanceMatrix> {
    let levels = grid.levels(axis);
    let l = levels.len();
    if l < 2 {
        return Err(stats_err(format!("axis {axis} needs at least two levels")));
    }
    let mut p_raw = vec![vec![1.0; l]; l];
    if axis.is_paired() {
        let table = grid.paired_table(axis);
        for r in 0..l {
            for c in 0..l {
                if r == c {
                    continue;
                }
                let (row, col) = (&table[&levels[r]], &table[&levels[c]]);
                let (a, b): (Vec<f64>, Vec<f64>) = row
                    .iter()
                    .filter_map(|(k, v)| col.get(k).map(|w| (*v, *w)))
                    .unzip();
                if a.len() < 5 {
                    return Err(stats_err(format!(
                        "levels {} and {} share only {} paired blocks, need 5",
                        levels[r],
                        levels[c],
                        a.len()
                    )));
                }
                let nonzero = a.iter().zip(&b).filter(|(x, y)| x != y).count();
                p_raw[r][c] = if nonzero < 5 {
                    1.0
                } else {
                    wilcoxon_signed_rank(&a, &b, Alternative::Greater)?
                };
            }
        }
    } else {
        let mut samples: HashMap<&str, Vec<f64>> = HashMap::new();
        for rec in grid.records() {
            samples.entry(axis.level(rec)).or_default().push(rec.percent);
        }
        for r in 0..l {
            for c in 0..l {
                if r != c {
                    p_raw[r][c] = mann_whitney_u(
                        &samples[levels[r].as_str()],
                        &samples[levels[c].as_str()],
                        Alternative::Greater,
                    )?
                    .p;
                }
            }
        }
    }
    let off: Vec<(usize, usize)> = (0..l)
        .flat_map(|r| (0..l).filter(move |c| *c != r).map(move |c| (r, c)))
        .collect();
    let adjusted = bonferroni(&off.iter().map(|&(r, c)| p_raw[r][c]).collect::<Vec<_>>(), alpha);
    let mut p_adjusted = vec![vec![1.0; l]; l];
    let mut significant = vec![vec![false; l]; l];
    for (&(r, c), adj) in off.iter().zip(adjusted) {
        p_adjusted[r][c] = adj.p;
        significant[r][c] = adj.reject;
    }
    Ok(SignificanceMatrix {
        axis,
        levels,
        p_raw,
        p_adjusted,
        significant,
        alpha,
        correction: "bonferroni".into(),
    })
}

impl SignificanceMatrix {
    /// CSV with a `row` column followed by one column per level; cells hold
    /// the adjusted p-value and a `*` when significant.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for l in &self.levels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (r, level) in self.levels.iter().enumerate() {
            out.push_str(level);
            for c in 0..self.levels.len() {
                if r == c {
                    out.push_str(",-");
                } else {
                    let star = if self.significant[r][c] { "*" } else { "" };
                    out.push_str(&format!(",{:.6}{star}", self.p_adjusted[r][c]));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Heatmap: yellow for significant, gray otherwise, white diagonal.
    pub fn to_svg(&self) -> String {
        let cell = 40.0;
        let label = 110.0;
        let l = self.levels.len() as f64;
        let size = label + cell * l + 10.0;
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        );
        for (i, lev) in self.levels.iter().enumerate() {
            let pos = label + cell * (i as f64 + 0.5);
            s.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{pos:.1}\" font-size=\"11\" text-anchor=\"end\" dominant-baseline=\"middle\">{lev}</text>\n",
                label - 6.0
            ));
            s.push_str(&format!(
                "<text transform=\"translate({pos:.1},{:.1}) rotate(-60)\" font-size=\"11\">{lev}</text>\n",
                label - 6.0
            ));
        }
        for r in 0..self.levels.len() {
            for c in 0..self.levels.len() {
                let fill = if r == c {
                    "#ffffff"
                } else if self.significant[r][c] {
                    "#f2d21b"
                } else {
                    "#b0b0b0"
                };
                s.push_str(&format!(
                    "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{cell}\" height=\"{cell}\" fill=\"{fill}\" stroke=\"#404040\" stroke-width=\"0.5\"/>\n",
                    label + cell * c as f64,
                    label + cell * r as f64
                ));
            }
        }
        s.push_str("</svg>\n");
        s
    }
}
