//! Time-dependent versus classical (time-averaged) planning, seed by seed.

use std::io::Write;

use serde::Serialize;

use crate::model::{Instance, MultiLayerMatrix, Seconds, SolverParams};
use crate::solver::{solve, SolveError, SolveResult};

/// `H:MM`, rounded to the nearest minute.
pub fn format_hmm(seconds: Seconds) -> String {
    let sign = if seconds < 0 { "-" } else { "" };
    let minutes = (seconds.abs() + 30) / 60;
    format!("{sign}{}:{:02}", minutes / 60, minutes % 60)
}

fn gap_percent(value: Seconds, reference: Seconds) -> f64 {
    if reference == 0 {
        return 0.0;
    }
    100.0 * (value - reference) as f64 / reference as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub seed: u64,
    /// Cost of the tour planned on the multi-layer matrix.
    pub c_ml: Seconds,
    /// True (multi-layer) cost of the tour planned on the averaged matrix.
    pub c_2d: Seconds,
    /// Cost of that same tour as the averaged matrix prices it.
    pub c_2d_own: Seconds,
    /// `100 (c_ml - c_2d) / c_2d`.
    pub gap_percent: f64,
    /// `100 (c_ml - c_2d_own) / c_2d_own`.
    pub gap_own_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    fn mean(values: impl Iterator<Item = f64>) -> f64 {
        let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }

    /// Mean of the per-seed gaps.
    pub fn mean_gap_percent(&self) -> f64 {
        Self::mean(self.rows.iter().map(|r| r.gap_percent))
    }

    pub fn mean_gap_own_percent(&self) -> f64 {
        Self::mean(self.rows.iter().map(|r| r.gap_own_percent))
    }

    pub fn mean_c_ml(&self) -> f64 {
        Self::mean(self.rows.iter().map(|r| r.c_ml as f64))
    }

    pub fn mean_c_2d(&self) -> f64 {
        Self::mean(self.rows.iter().map(|r| r.c_2d as f64))
    }

    /// Gap between the mean costs, as opposed to the mean of the gaps.
    pub fn gap_of_means_percent(&self) -> f64 {
        let reference = self.mean_c_2d();
        if reference == 0.0 {
            0.0
        } else {
            100.0 * (self.mean_c_ml() - reference) / reference
        }
    }

    pub fn c_ml_range(&self) -> Option<(Seconds, Seconds)> {
        let min = self.rows.iter().map(|r| r.c_ml).min()?;
        let max = self.rows.iter().map(|r| r.c_ml).max()?;
        Some((min, max))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "seed",
            "c_ml_s",
            "c_2d_s",
            "c_2d_own_s",
            "c_ml",
            "c_2d",
            "gap_percent",
            "gap_own_percent",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.seed.to_string(),
                r.c_ml.to_string(),
                r.c_2d.to_string(),
                r.c_2d_own.to_string(),
                format_hmm(r.c_ml),
                format_hmm(r.c_2d),
                format!("{:.3}", r.gap_percent),
                format!("{:.3}", r.gap_own_percent),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Fixed-width table with a closing mean row.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "{:>6}  {:>6}  {:>6}  {:>8}  {:>10}\n",
            "seed", "C_ML", "C_2D", "gap %", "own-gap %"
        ));
        for r in &self.rows {
            s.push_str(&format!(
                "{:>6}  {:>6}  {:>6}  {:>8.3}  {:>10.3}\n",
                r.seed,
                format_hmm(r.c_ml),
                format_hmm(r.c_2d),
                r.gap_percent,
                r.gap_own_percent
            ));
        }
        s.push_str(&format!(
            "{:>6}  {:>6}  {:>6}  {:>8.3}  {:>10.3}\n",
            "mean",
            format_hmm(self.mean_c_ml().round() as Seconds),
            format_hmm(self.mean_c_2d().round() as Seconds),
            self.mean_gap_percent(),
            self.mean_gap_own_percent()
        ));
        if let Some((lo, hi)) = self.c_ml_range() {
            s.push_str(&format!("C_ML range {} .. {}\n", format_hmm(lo), format_hmm(hi)));
        }
        s
    }
}

/// Solves once per seed on the multi-layer matrix and on its average, and
/// prices both tours under the multi-layer matrix.
pub fn compare_seeds(
    instance: &Instance,
    matrix: &MultiLayerMatrix,
    params: &SolverParams,
    seeds: impl IntoIterator<Item = u64>,
) -> Result<CompareReport, SolveError> {
    let averaged = matrix.average();
    let mut rows = Vec::new();
    for seed in seeds {
        let p = params.with_seed(seed);
        let ml: SolveResult = solve(instance, matrix, &p)?;
        let flat: SolveResult = solve(instance, &averaged, &p)?;
        let c_2d = matrix.evaluate_route(&flat.best_route)?.total_cost;
        rows.push(CompareRow {
            seed,
            c_ml: ml.total_cost(),
            c_2d,
            c_2d_own: flat.total_cost(),
            gap_percent: gap_percent(ml.total_cost(), c_2d),
            gap_own_percent: gap_percent(ml.total_cost(), flat.total_cost()),
        });
    }
    Ok(CompareReport { rows })
}

/// `n_seeds` consecutive seeds starting at `params.seed`.
pub fn compare(
    instance: &Instance,
    matrix: &MultiLayerMatrix,
    params: &SolverParams,
    n_seeds: usize,
) -> Result<CompareReport, SolveError> {
    let start = params.seed;
    compare_seeds(instance, matrix, params, (0..n_seeds as u64).map(|i| start.wrapping_add(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Node;

    #[test]
    fn hmm_formatting() {
        assert_eq!(format_hmm(0), "0:00");
        assert_eq!(format_hmm(7 * 3600 + 25 * 60), "7:25");
        assert_eq!(format_hmm(7 * 3600 + 25 * 60 + 29), "7:25");
        assert_eq!(format_hmm(7 * 3600 + 25 * 60 + 30), "7:26");
        assert_eq!(format_hmm(-90), "-0:02");
    }

    #[test]
    fn identical_layers_give_zero_gaps() {
        let nodes = (0..6)
            .map(|id| Node { id, lat: 48.8 + id as f64 * 0.01, lon: 2.3, label: String::new() })
            .collect();
        let inst = Instance::new(nodes).unwrap();
        let m = MultiLayerMatrix::from_fn(6, 3, 600, |_, i, j| 100 + 7 * i as Seconds + 3 * j as Seconds).unwrap();
        let p = SolverParams { n_grasp: 4, n_improve: 4, l_delete: 2, ..SolverParams::default() };
        let report = compare(&inst, &m, &p, 3).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.rows.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![0, 1, 2]);
        for r in &report.rows {
            assert_eq!(r.gap_percent, 0.0);
            assert_eq!(r.c_2d, r.c_2d_own);
        }
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(1).unwrap().ends_with(",0.000,0.000"));
    }
}
