//! Grid sweeps comparing recipe predictions against solver ground truth,
//! cell by cell, with a deterministic report.
//!
//! Each cell (q, a, b) gets a prediction first; partial predictions are
//! recorded as PARTIAL without consulting the solver, since there is
//! nothing to compare. Complete predictions are compared pair-for-pair
//! against the solved set: MATCH or MISMATCH. A solver that reports a
//! non-unique system yields AMBIGUOUS; any other cell failure yields ERROR
//! with the message in the warnings column. No cell outcome aborts the
//! sweep. MISMATCH is a finding, not a failure: the sweep exists to hunt
//! counterexamples.
//!
//! Output is byte-identical across runs and across worker counts: rows are
//! computed in any order, then sorted by (q, p, n, a, b); the per-row
//! time_ms column is pinned to 0 because wall times vary run to run, and
//! the one real timing lives in the report's unserialized wall_ms field
//! for the caller to log. Within one field context all cells share one
//! solver, so the H/G chains are built once.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::DiskCache;
use crate::error::{MzvError, Result};
use crate::ffield::FieldCtx;
use crate::recipes::{self, RecipeChoice};
use crate::solver::{ShufflePair, ShuffleSolver, SolveOptions};

/// One sweep request: the field contexts, the index grid, the recipe.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    /// Field contexts as (p, n) pairs; q = p^n.
    pub fields: Vec<(u64, usize)>,
    pub a_values: Vec<u64>,
    /// Inclusive b range, applied to every (field, a).
    pub b_min: u64,
    pub b_max: u64,
    pub recipe: RecipeChoice,
    /// Numeric confirmation depth passed to the solver.
    pub d_checks: u32,
    /// Worker threads; 0 and 1 both mean sequential.
    pub jobs: usize,
    /// Disk cache root shared by all field contexts.
    pub cache_dir: Option<PathBuf>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            fields: Vec::new(),
            a_values: Vec::new(),
            b_min: 2,
            b_max: 10,
            recipe: RecipeChoice::Auto,
            d_checks: 3,
            jobs: 1,
            cache_dir: None,
        }
    }
}

/// Cell outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MatchStatus {
    Match,
    Mismatch,
    Partial,
    Ambiguous,
    Error,
}

impl std::fmt::Display for MatchStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MatchStatus::Match => "MATCH",
            MatchStatus::Mismatch => "MISMATCH",
            MatchStatus::Partial => "PARTIAL",
            MatchStatus::Ambiguous => "AMBIGUOUS",
            MatchStatus::Error => "ERROR",
        };
        f.write_str(s)
    }
}

/// One grid cell's outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: u64,
    pub p: u64,
    pub n: usize,
    pub a: u64,
    pub b: u64,
    pub recipe: String,
    #[serde(rename = "match")]
    pub status: MatchStatus,
    pub n_terms: usize,
    /// Pinned to 0; see the module doc.
    pub time_ms: u64,
    pub warnings: Vec<String>,
    /// The solved pairs, present on compared cells; JSON only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pairs: Option<Vec<ShufflePair>>,
}

/// Totals, derived from the rows. compared = matched + mismatched;
/// partial cells are counted but excluded from the match percentage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub cells: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub partial: usize,
    pub ambiguous: usize,
    pub errors: usize,
    pub compared: usize,
    /// "100.00"-style string, "n/a" with nothing compared.
    pub match_pct: String,
}

/// A finished sweep: sorted rows plus totals. wall_ms is the one real
/// timing and is deliberately left out of the serialized forms.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
    #[serde(skip)]
    pub wall_ms: u64,
}

impl SweepReport {
    /// CSV with the fixed column set; warnings are semicolon-joined and
    /// comma-stripped so the line stays machine-splittable.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,p,n,a,b,recipe,match,n_terms,time_ms,warnings\n");
        for r in &self.rows {
            let warn = r
                .warnings
                .join("; ")
                .replace(',', ";")
                .replace('\n', " ");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.q, r.p, r.n, r.a, r.b, r.recipe, r.status, r.n_terms, r.time_ms, warn
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }
}

fn recipe_tag(choice: RecipeChoice) -> &'static str {
    match choice {
        RecipeChoice::Auto => "auto",
        RecipeChoice::Main => "main",
        RecipeChoice::Full => "full",
        RecipeChoice::Q4 => "q4",
        RecipeChoice::LargeIndex => "large-index",
    }
}

fn run_cell(solver: &ShuffleSolver, a: u64, b: u64, spec: &SweepSpec) -> SweepRow {
    let ctx = solver.ctx();
    let mut row = SweepRow {
        q: ctx.q(),
        p: ctx.p(),
        n: ctx.n(),
        a,
        b,
        recipe: recipe_tag(spec.recipe).to_string(),
        status: MatchStatus::Error,
        n_terms: 0,
        time_ms: 0,
        warnings: Vec::new(),
        pairs: None,
    };
    let pred = match recipes::predict(solver, a, b, spec.recipe, true) {
        Ok(pr) => pr,
        Err(e) => {
            row.warnings.push(format!("prediction failed: {e}"));
            return row;
        }
    };
    row.recipe = pred.recipe.clone();
    row.warnings = pred.warnings.clone();
    if pred.partial {
        row.status = MatchStatus::Partial;
        row.n_terms = pred.pairs.len();
        return row;
    }
    let opts = SolveOptions {
        d_checks: spec.d_checks,
        ..SolveOptions::default()
    };
    match solver.solve(a, b, &opts) {
        Ok(set) => {
            row.status = if set.pairs == pred.pairs {
                MatchStatus::Match
            } else {
                row.warnings.push(format!(
                    "prediction has {} terms, solver has {}",
                    pred.pairs.len(),
                    set.pairs.len()
                ));
                MatchStatus::Mismatch
            };
            row.n_terms = set.pairs.len();
            row.pairs = Some(set.pairs);
        }
        Err(e @ MzvError::NonUniqueSolution { .. }) => {
            row.status = MatchStatus::Ambiguous;
            row.n_terms = pred.pairs.len();
            row.warnings.push(format!("{e}"));
        }
        Err(e) => {
            row.n_terms = pred.pairs.len();
            row.warnings.push(format!("solver failed: {e}"));
        }
    }
    row
}

/// Runs the sweep; every grid cell produces exactly one row.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    let t0 = Instant::now();
    let mut fields = spec.fields.clone();
    fields.sort_unstable();
    fields.dedup();
    let mut a_values = spec.a_values.clone();
    a_values.sort_unstable();
    a_values.dedup();
    if fields.is_empty() || a_values.is_empty() || spec.b_min > spec.b_max {
        return Err(MzvError::InvalidIndex {
            detail: "empty sweep grid".into(),
        });
    }
    if spec.b_min == 0 || a_values[0] == 0 {
        return Err(MzvError::InvalidIndex {
            detail: "sweep grid needs a, b >= 1".into(),
        });
    }

    let mut rows: Vec<SweepRow> = Vec::new();
    for &(p, n) in &fields {
        let ctx = FieldCtx::new(p, n)?;
        let disk = match &spec.cache_dir {
            Some(dir) => Some(DiskCache::new(dir)?),
            None => None,
        };
        let solver = ShuffleSolver::with_cache(&ctx, disk);
        let mut cells: Vec<(u64, u64)> = Vec::new();
        for &a in &a_values {
            for b in spec.b_min..=spec.b_max {
                cells.push((a, b));
            }
        }
        let field_rows: Vec<SweepRow> = if spec.jobs > 1 {
            match rayon::ThreadPoolBuilder::new()
                .num_threads(spec.jobs)
                .build()
            {
                Ok(pool) => pool.install(|| {
                    cells
                        .par_iter()
                        .map(|&(a, b)| run_cell(&solver, a, b, spec))
                        .collect()
                }),
                // Row content is order-independent, so losing the pool
                // only costs parallelism.
                Err(_) => cells
                    .iter()
                    .map(|&(a, b)| run_cell(&solver, a, b, spec))
                    .collect(),
            }
        } else {
            cells
                .iter()
                .map(|&(a, b)| run_cell(&solver, a, b, spec))
                .collect()
        };
        rows.extend(field_rows);
    }
    rows.sort_by_key(|r| (r.q, r.p, r.n, r.a, r.b));

    let count = |s: MatchStatus| rows.iter().filter(|r| r.status == s).count();
    let matched = count(MatchStatus::Match);
    let mismatched = count(MatchStatus::Mismatch);
    let compared = matched + mismatched;
    let match_pct = if compared == 0 {
        "n/a".to_string()
    } else {
        format!("{:.2}", 100.0 * matched as f64 / compared as f64)
    };
    let summary = SweepSummary {
        cells: rows.len(),
        matched,
        mismatched,
        partial: count(MatchStatus::Partial),
        ambiguous: count(MatchStatus::Ambiguous),
        errors: count(MatchStatus::Error),
        compared,
        match_pct,
    };
    Ok(SweepReport {
        rows,
        summary,
        wall_ms: t0.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            fields: vec![(2, 1)],
            a_values: vec![2, 3],
            b_min: 2,
            b_max: 10,
            ..SweepSpec::default()
        }
    }

    #[test]
    fn covered_grid_matches_everywhere() {
        let report = run_sweep(&small_spec()).unwrap();
        assert_eq!(report.summary.cells, 18);
        assert_eq!(report.summary.matched, 18);
        assert_eq!(report.summary.mismatched, 0);
        assert_eq!(report.summary.match_pct, "100.00");
        let csv = report.to_csv();
        assert!(csv.starts_with("q,p,n,a,b,recipe,match,n_terms,time_ms,warnings\n"));
        assert_eq!(csv.lines().count(), 19);
    }

    #[test]
    fn worker_count_does_not_change_the_bytes() {
        let seq = run_sweep(&small_spec()).unwrap();
        let par = run_sweep(&SweepSpec {
            jobs: 3,
            ..small_spec()
        })
        .unwrap();
        assert_eq!(seq.to_csv(), par.to_csv());
        assert_eq!(
            serde_json::to_string(&seq.to_json()).unwrap(),
            serde_json::to_string(&par.to_json()).unwrap()
        );
    }

    #[test]
    fn uncovered_cells_come_back_partial_without_solving() {
        // Composite odd q has no increment rule for a = 4.
        let report = run_sweep(&SweepSpec {
            fields: vec![(3, 2)],
            a_values: vec![4],
            b_min: 2,
            b_max: 6,
            ..SweepSpec::default()
        })
        .unwrap();
        assert_eq!(report.summary.cells, 5);
        assert_eq!(report.summary.partial, 5);
        assert_eq!(report.summary.compared, 0);
        assert_eq!(report.summary.match_pct, "n/a");
        for row in &report.rows {
            assert_eq!(row.status, MatchStatus::Partial);
            assert!(row.pairs.is_none());
        }
    }

    #[test]
    fn forced_family_recipe_records_errors_per_cell() {
        // (2, b) almost never matches a large-index family over q = 3.
        let report = run_sweep(&SweepSpec {
            fields: vec![(3, 1)],
            a_values: vec![2],
            b_min: 5,
            b_max: 7,
            recipe: RecipeChoice::LargeIndex,
            ..SweepSpec::default()
        })
        .unwrap();
        assert_eq!(report.summary.cells, 3);
        assert!(report.summary.errors >= 2);
        for row in &report.rows {
            if row.status == MatchStatus::Error {
                assert!(row.warnings.iter().any(|w| w.contains("prediction failed")));
            }
        }
    }

    #[test]
    fn solved_rows_carry_even_second_indices() {
        let report = run_sweep(&SweepSpec {
            fields: vec![(3, 1)],
            a_values: vec![2, 3],
            b_min: 2,
            b_max: 9,
            ..SweepSpec::default()
        })
        .unwrap();
        let mut seen = 0;
        for row in &report.rows {
            if let Some(pairs) = &row.pairs {
                for pr in pairs {
                    assert_eq!((row.a + row.b - pr.aj) % 2, 0);
                    seen += 1;
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn empty_grids_are_rejected() {
        assert!(run_sweep(&SweepSpec::default()).is_err());
        assert!(run_sweep(&SweepSpec {
            fields: vec![(2, 1)],
            a_values: vec![2],
            b_min: 5,
            b_max: 4,
            ..SweepSpec::default()
        })
        .is_err());
    }
}
