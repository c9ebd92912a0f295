//! Parameter sweeps over a state family, emitted as CSV.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{self, Measure};
use crate::optimizer::OptimizerConfig;
use crate::states::Family;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    /// Evenly spaced values; the last one is exactly `stop`.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: String,
    pub axis: String,
    pub grid: Grid,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub measures: Vec<Measure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer_config: Option<OptimizerConfig>,
    /// Free-form lines emitted as `#` comments above the header.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SweepSpec {
    pub fn family_at(&self, x: f64) -> Result<Family> {
        let mut map: BTreeMap<String, String> =
            self.fixed.iter().map(|(k, v)| (k.clone(), format!("{v:?}"))).collect();
        map.insert(self.axis.clone(), format!("{x:?}"));
        Family::from_parts(&self.family, None, &map)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.points < 2 {
            return Err(Error::usage(format!("sweep grid needs at least 2 points, got {}", self.grid.points)));
        }
        if !(self.grid.start.is_finite() && self.grid.stop.is_finite()) {
            return Err(Error::usage("sweep grid bounds must be finite"));
        }
        if self.measures.is_empty() {
            return Err(Error::usage("sweep needs at least one measure"));
        }
        if self.fixed.contains_key(&self.axis) {
            return Err(Error::usage(format!("'{}' is both the axis and a fixed binding", self.axis)));
        }
        let family = self.family_at(self.grid.start)?;
        if !family.params().contains_key(&self.axis) {
            return Err(Error::usage(format!("'{}' is not a parameter of family '{}'", self.axis, family.name())));
        }
        if let Some(c) = &self.optimizer_config {
            c.validate()?;
        }
        Ok(())
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec![self.axis.clone()];
        for m in &self.measures {
            cols.push(m.id().to_string());
            if *m == Measure::ConsonanceOpt {
                cols.push("consonance_opt_feasible".to_string());
            }
        }
        cols
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Value(f64),
    Flag(bool),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl SweepTable {
    /// Numeric column by name, `None` if absent.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[k] {
                    Cell::Value(v) => v,
                    Cell::Flag(b) => b as u8 as f64,
                })
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Value(v) => format_sig9(*v),
                Cell::Flag(b) => b.to_string(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Nine significant digits, `.` as the decimal point, trailing zeros removed.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..9).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, x)
    } else {
        return format!("{x:.8e}");
    };
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn row_at(spec: &SweepSpec, x: f64, config: &OptimizerConfig) -> Result<Vec<Cell>> {
    let family = spec.family_at(x)?;
    let state = family.state()?;
    let mut row = vec![Cell::Value(x)];
    for &m in &spec.measures {
        let r = measures::evaluate(m, Some(&family), &state, config)?;
        row.push(Cell::Value(r.value));
        if m == Measure::ConsonanceOpt {
            row.push(Cell::Flag(r.feasible.unwrap_or(false)));
        }
    }
    Ok(row)
}

/// One row per grid point in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let config = spec.optimizer_config.clone().unwrap_or_default();
    let rows = spec
        .grid
        .values()
        .into_par_iter()
        .map(|x| row_at(spec, x, &config))
        .collect::<Result<Vec<_>>>()?;
    let mut comments = vec![format!("family: {}", spec.family)];
    if !spec.fixed.is_empty() {
        let bindings: Vec<String> = spec.fixed.iter().map(|(k, v)| format!("{k}={}", format_sig9(*v))).collect();
        comments.push(format!("fixed: {}", bindings.join(",")));
    }
    if spec.measures.contains(&Measure::ConsonanceOpt) {
        comments.push(format!("seed: {}", config.seed));
        comments.push(format!("preset: {}", config.preset));
    }
    comments.extend(spec.notes.iter().cloned());
    Ok(SweepTable { comments, columns: spec.columns(), rows })
}

/// Built-in recipe names.
pub const RECIPES: [&str; 3] = ["fig2", "fig3", "fig4"];

/// Restarts used by the recipes' optimizer columns.
pub const RECIPE_RESTARTS: usize = 8;

/// Named sweep recipe. `seed` feeds the optimizer-backed columns.
pub fn recipe(name: &str, seed: u64) -> Result<SweepSpec> {
    let config = OptimizerConfig { seed, restarts: RECIPE_RESTARTS, ..Default::default() };
    let spec = match name {
        "fig2" => SweepSpec {
            family: "werner".into(),
            axis: "a".into(),
            grid: Grid { start: 0.0, stop: 1.0, points: 41 },
            fixed: BTreeMap::new(),
            measures: vec![
                Measure::ConsonanceCf,
                Measure::ConsonanceOpt,
                Measure::Discord,
                Measure::Concurrence,
                Measure::Eof,
            ],
            optimizer_config: Some(config),
            notes: vec!["recipe: fig2 (Werner state, measures versus a)".into()],
        },
        "fig3" => SweepSpec {
            family: "werner".into(),
            axis: "a".into(),
            grid: Grid { start: 0.0, stop: 1.0, points: 31 },
            fixed: BTreeMap::new(),
            measures: vec![Measure::ConsonanceCf, Measure::Concurrence, Measure::ConsonanceMinusConcurrence],
            optimizer_config: None,
            notes: vec![
                "recipe: fig3 (Werner state, consonance minus concurrence)".into(),
                "dissonance column omitted: it has no closed form here".into(),
            ],
        },
        "fig4" => SweepSpec {
            family: "two_param_2x3".into(),
            axis: "gamma".into(),
            grid: Grid { start: 0.0, stop: 0.79, points: 80 },
            fixed: BTreeMap::from([("beta".to_string(), 0.07)]),
            measures: vec![Measure::ConsonanceCf, Measure::ConsonanceOpt, Measure::Discord, Measure::Negativity],
            optimizer_config: Some(config),
            notes: vec!["recipe: fig4 (qubit-qutrit family, beta = 0.07, alpha = (1 - 3 beta - gamma)/2)".into()],
        },
        other => {
            return Err(Error::usage(format!("unknown recipe '{other}' (known: {})", RECIPES.join(", "))))
        }
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values_hit_endpoints() {
        let g = Grid { start: 0.0, stop: 1.0, points: 31 };
        let v = g.values();
        assert_eq!(v.len(), 31);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[30], 1.0);
        assert!((v[10] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig9(-0.262_483_183_763_734_4), "-0.262483184");
        assert_eq!(format_sig9(123.456), "123.456");
        assert_eq!(format_sig9(1e-7), "1.00000000e-7");
    }

    #[test]
    fn fig3_rows() {
        let t = run_sweep(&recipe("fig3", 0).unwrap()).unwrap();
        let diff = t.column("consonance_minus_concurrence").unwrap();
        assert!((diff[10] - 1.0 / 3.0).abs() < 1e-9);
        assert!(diff[30].abs() < 1e-9);
        let csv = t.to_csv_string().unwrap();
        assert!(csv.starts_with("# family: werner\n"));
        assert!(csv.contains("dissonance column omitted"));
        assert!(csv.contains("\na,consonance_cf,concurrence,consonance_minus_concurrence\n"));
    }

    #[test]
    fn fig4_binding_keeps_beta_fixed() {
        let spec = recipe("fig4", 0).unwrap();
        for g in spec.grid.values() {
            let f = spec.family_at(g).unwrap();
            assert!((f.params()["beta"] - 0.07).abs() < 1e-12);
        }
        let closed = SweepSpec { measures: vec![Measure::ConsonanceCf, Measure::Discord, Measure::Negativity], ..spec };
        let t = run_sweep(&closed).unwrap();
        let gamma = t.column("gamma").unwrap();
        let k = gamma.iter().position(|g| (g - 0.07).abs() < 1e-12).unwrap();
        for col in ["consonance_cf", "discord", "negativity"] {
            assert!(t.column(col).unwrap()[k].abs() < 1e-9, "{col}");
        }
    }

    #[test]
    fn invalid_specs() {
        let mut spec = recipe("fig3", 0).unwrap();
        spec.axis = "b".into();
        assert!(run_sweep(&spec).is_err());
        let mut spec = recipe("fig3", 0).unwrap();
        spec.grid.points = 1;
        assert!(matches!(run_sweep(&spec), Err(Error::Usage(_))));
        assert!(recipe("fig5", 0).is_err());
        let mut spec = recipe("fig3", 0).unwrap();
        spec.measures = vec![Measure::ConsonancePure];
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn optimizer_columns_carry_flags() {
        let spec = SweepSpec {
            family: "werner".into(),
            axis: "a".into(),
            grid: Grid { start: 0.2, stop: 0.8, points: 3 },
            fixed: BTreeMap::new(),
            measures: vec![Measure::ConsonanceOpt],
            optimizer_config: Some(OptimizerConfig { restarts: 1, max_evals: 2000, ..Default::default() }),
            notes: vec![],
        };
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.columns, ["a", "consonance_opt", "consonance_opt_feasible"]);
        let csv = t.to_csv_string().unwrap();
        assert!(csv.contains("# seed: 0\n"));
        assert_eq!(csv, run_sweep(&spec).unwrap().to_csv_string().unwrap());
        for row in &t.rows {
            assert_eq!(row[2], Cell::Flag(true));
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = recipe("fig4", 3).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"consonance_opt\""));
        let back: SweepSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
