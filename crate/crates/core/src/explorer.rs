//! Design-space sweeps over cantilever length and gap, feasibility
//! filtering and the length trade-off search.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::cantilever::{modal_params, CantileverGeometry, MaterialParams, StiffnessConvention};
use crate::design::{analyze, analyze_at, Design, DesignAnalysis};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::potential::{LennardJones, LennardJonesParams, CONTACT_FRACTION};
use crate::units::{MILLIKELVIN, NANOMETER};

/// Environment variable capping sweep parallelism; 0 or unset leaves the
/// rayon default.
pub const THREADS_ENV: &str = "AFQ_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    /// Cantilever lengths (m).
    pub lengths: Vec<f64>,
    /// Gaps in units of σ.
    pub gaps_sigma: Vec<f64>,
    pub width: f64,
    pub thickness: f64,
    pub material: MaterialParams,
    pub potential: LennardJonesParams,
    pub temperature: f64,
    pub convention: StiffnessConvention,
}

/// `points` evenly spaced values on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i == points - 1 {
                        hi
                    } else {
                        lo + step * i as f64
                    }
                })
                .collect()
        }
    }
}

impl SweepSpec {
    /// Silicon (10, 12) nm cantilevers over L ∈ [200, 800] nm and
    /// x/σ ∈ [1.15, 2.0] at 8 mK.
    pub fn anharmonicity_map(length_points: usize, gap_points: usize) -> Self {
        Self {
            lengths: linspace(200.0, 800.0, length_points)
                .into_iter()
                .map(|l| l * NANOMETER)
                .collect(),
            gaps_sigma: linspace(1.15, 2.0, gap_points),
            width: 10.0 * NANOMETER,
            thickness: 12.0 * NANOMETER,
            material: MaterialParams::silicon(),
            potential: LennardJonesParams::silicon(),
            temperature: 8.0 * MILLIKELVIN,
            convention: StiffnessConvention::Magnitude,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lengths.is_empty() || self.gaps_sigma.is_empty() {
            return Err(Error::InvalidParameter(
                "sweep grids must be non-empty".into(),
            ));
        }
        for (name, grid) in [("length", &self.lengths), ("gap", &self.gaps_sigma)] {
            if grid.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::InvalidParameter(format!(
                    "{name} grid must be strictly increasing"
                )));
            }
        }
        if let Some(&g) = self.gaps_sigma.iter().find(|&&g| !(g > CONTACT_FRACTION)) {
            return Err(Error::InvalidParameter(format!(
                "gap {g} sigma lies inside the contact region (<= {CONTACT_FRACTION} sigma)"
            )));
        }
        for &l in &self.lengths {
            ensure_positive("length", l)?;
        }
        ensure_positive("width", self.width)?;
        ensure_positive("thickness", self.thickness)?;
        ensure_non_negative("temperature", self.temperature)?;
        MaterialParams::new(self.material.young_modulus, self.material.density)?;
        LennardJonesParams::new(self.potential.epsilon, self.potential.sigma)?;
        Ok(())
    }

    fn design(&self, length: f64) -> Design {
        Design {
            geometry: CantileverGeometry {
                length,
                width: self.width,
                thickness: self.thickness,
            },
            material: self.material,
            potential: self.potential,
            gap: None,
            temperature: self.temperature,
            convention: self.convention,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    Ok,
    Contact,
    SnapIn,
    Failed,
}

impl RowFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::Contact => "contact",
            Self::SnapIn => "snap_in",
            Self::Failed => "failed",
        }
    }
}

/// One grid point. Flagged rows carry NaN for the quantities that could
/// not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub length: f64,
    pub gap: f64,
    pub gap_sigma: f64,
    pub omega_c: f64,
    pub omega_10: f64,
    pub eta_r: f64,
    pub eta: f64,
    pub delta_omega: f64,
    pub n_thermal: f64,
    pub x_zpf: f64,
    pub k_eff: f64,
    pub flag: RowFlag,
}

impl SweepRow {
    fn from_analysis(length: f64, gap_sigma: f64, a: &DesignAnalysis) -> Self {
        Self {
            length,
            gap: a.bias.gap,
            gap_sigma,
            omega_c: a.modal.omega_c,
            omega_10: a.spectrum.omega_10,
            eta_r: a.spectrum.eta_r,
            eta: a.spectrum.eta,
            delta_omega: a.delta_omega,
            n_thermal: a.n_thermal,
            x_zpf: a.bias.x_zpf,
            k_eff: a.bias.effective_stiffness,
            flag: RowFlag::Ok,
        }
    }

    fn flagged(length: f64, gap: f64, gap_sigma: f64, omega_c: f64, err: &Error) -> Self {
        let (flag, k_eff) = match *err {
            Error::Contact { .. } => (RowFlag::Contact, f64::NAN),
            Error::SnapIn { k_eff, .. } => (RowFlag::SnapIn, k_eff),
            _ => (RowFlag::Failed, f64::NAN),
        };
        Self {
            length,
            gap,
            gap_sigma,
            omega_c,
            omega_10: f64::NAN,
            eta_r: f64::NAN,
            eta: f64::NAN,
            delta_omega: f64::NAN,
            n_thermal: f64::NAN,
            x_zpf: f64::NAN,
            k_eff,
            flag,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.flag == RowFlag::Ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn sweep_row(spec: &SweepSpec, lj: &LennardJones, length: f64, gap_sigma: f64) -> SweepRow {
    let design = spec.design(length);
    let modal = modal_params(&design.geometry, &design.material);
    let gap = gap_sigma * spec.potential.sigma;
    match analyze_at(&modal, lj, gap, &design) {
        Ok(a) => SweepRow::from_analysis(length, gap_sigma, &a),
        Err(e) => SweepRow::flagged(length, gap, gap_sigma, modal.omega_c, &e),
    }
}

/// Runs `op` on a pool sized by [`THREADS_ENV`] when it is set to a
/// positive integer.
fn with_thread_cap<T: Send>(op: impl FnOnce() -> T + Send) -> Result<T> {
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if cap == 0 {
        return Ok(op());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cap)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(op))
}

/// Evaluates every (L, x) grid point. Rows come back in lexicographic
/// (L, x) order independent of scheduling.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let lj = LennardJones::new(spec.potential);
    let n_gap = spec.gaps_sigma.len();
    let total = spec.lengths.len() * n_gap;
    let rows = with_thread_cap(|| {
        (0..total)
            .into_par_iter()
            .map(|i| {
                sweep_row(
                    spec,
                    &lj,
                    spec.lengths[i / n_gap],
                    spec.gaps_sigma[i % n_gap],
                )
            })
            .collect()
    })?;
    Ok(SweepResult { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignConstraints {
    pub max_occupancy: f64,
    pub min_relative_anharmonicity: f64,
    /// Lower bound on ω₁₀ (rad/s).
    pub min_omega_10: Option<f64>,
}

impl DesignConstraints {
    pub fn max_occupancy(n: f64) -> Self {
        Self {
            max_occupancy: n,
            min_relative_anharmonicity: 0.0,
            min_omega_10: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_occupancy.is_nan() || self.max_occupancy < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "max_occupancy must be non-negative, got {}",
                self.max_occupancy
            )));
        }
        ensure_non_negative(
            "min_relative_anharmonicity",
            self.min_relative_anharmonicity,
        )?;
        if let Some(w) = self.min_omega_10 {
            ensure_non_negative("min_omega_10", w)?;
        }
        Ok(())
    }

    pub fn admits(&self, row: &SweepRow) -> bool {
        row.is_ok()
            && row.n_thermal <= self.max_occupancy
            && row.eta_r >= self.min_relative_anharmonicity
            && self.min_omega_10.is_none_or(|w| row.omega_10 >= w)
    }

    /// The constraints that tighten as L grows: occupancy and ω₁₀.
    fn admits_length(&self, row: &SweepRow) -> bool {
        row.is_ok()
            && row.n_thermal <= self.max_occupancy
            && self.min_omega_10.is_none_or(|w| row.omega_10 >= w)
    }
}

/// Rows meeting every constraint, best η_r first; ties fall back to
/// (L, x) order.
pub fn feasible_designs(result: &SweepResult, constraints: &DesignConstraints) -> SweepResult {
    let mut rows: Vec<SweepRow> = result
        .rows
        .iter()
        .filter(|r| constraints.admits(r))
        .copied()
        .collect();
    rows.sort_by(|a, b| {
        b.eta_r
            .total_cmp(&a.eta_r)
            .then(a.length.total_cmp(&b.length))
            .then(a.gap.total_cmp(&b.gap))
    });
    SweepResult { rows }
}

/// Length search bounds and granularity for [`optimize_length`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthSearch {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for LengthSearch {
    fn default() -> Self {
        Self {
            min: 200.0 * NANOMETER,
            max: 800.0 * NANOMETER,
            step: NANOMETER,
        }
    }
}

/// Largest cantilever length (on the search lattice) whose bias-point
/// design satisfies the constraints, with its figure-of-merit row.
///
/// Occupancy rises and ω₁₀ falls with L, so feasibility is a prefix of the
/// lattice and a binary search finds its end. η_r also rises with L, so
/// if the longest feasible cantilever misses the anharmonicity bound no
/// length can meet it.
pub fn optimize_length(
    base: &Design,
    constraints: &DesignConstraints,
    search: &LengthSearch,
) -> Result<(f64, SweepRow)> {
    constraints.validate()?;
    ensure_positive("length step", search.step)?;
    ensure_positive("minimum length", search.min)?;
    if search.max < search.min {
        return Err(Error::InvalidParameter("empty length search range".into()));
    }
    let gap = base.resolve_gap()?;
    let base = Design {
        gap: Some(gap),
        ..*base
    };
    let sigma = base.potential.sigma;
    let steps = ((search.max - search.min) / search.step + 1e-9).floor() as usize;
    let length_at = |i: usize| search.min + search.step * i as f64;
    let row_at = |i: usize| -> Result<SweepRow> {
        let l = length_at(i);
        let d = base.with_length(l);
        Ok(match analyze(&d) {
            Ok(a) => SweepRow::from_analysis(l, gap / sigma, &a),
            Err(e @ (Error::Contact { .. } | Error::SnapIn { .. })) => {
                let modal = modal_params(&d.geometry, &d.material);
                SweepRow::flagged(l, gap, gap / sigma, modal.omega_c, &e)
            }
            Err(e) => return Err(e),
        })
    };

    let first = row_at(0)?;
    if !constraints.admits_length(&first) {
        return Err(Error::Unsatisfiable(format!(
            "constraints fail already at the shortest length {:.1} nm (occupancy {:.4})",
            search.min / NANOMETER,
            first.n_thermal
        )));
    }
    let mut good = 0usize;
    let last = row_at(steps)?;
    if constraints.admits_length(&last) {
        good = steps;
    } else {
        let mut bad = steps;
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            if constraints.admits_length(&row_at(mid)?) {
                good = mid;
            } else {
                bad = mid;
            }
        }
    }
    let row = row_at(good)?;
    if row.eta_r < constraints.min_relative_anharmonicity {
        return Err(Error::Unsatisfiable(format!(
            "longest admissible length {:.1} nm reaches eta_r = {:.5}, below {}",
            length_at(good) / NANOMETER,
            row.eta_r,
            constraints.min_relative_anharmonicity
        )));
    }
    Ok((length_at(good), row))
}

pub const CSV_COLUMNS: [&str; 12] = [
    "length_m",
    "gap_m",
    "gap_over_sigma",
    "omega_c_rad_s",
    "omega_10_rad_s",
    "eta_r",
    "eta_rad_s",
    "delta_omega",
    "n_thermal",
    "x_zpf_m",
    "k_eff_n_per_m",
    "flag",
];

/// Scientific notation with 17 significant digits, enough to round-trip
/// any f64.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("csv output: {e}"))
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in &result.rows {
        let mut record: Vec<String> = [
            r.length,
            r.gap,
            r.gap_sigma,
            r.omega_c,
            r.omega_10,
            r.eta_r,
            r.eta,
            r.delta_omega,
            r.n_thermal,
            r.x_zpf,
            r.k_eff,
        ]
        .iter()
        .map(|&v| format_float(v))
        .collect();
        record.push(r.flag.as_str().to_string());
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidParameter(format!("csv output: {e}")))
}

/// Plot-ready three-column map: L (nm), x/σ, and one row quantity.
pub fn write_map_csv<W: Write>(
    result: &SweepResult,
    column: &str,
    value: impl Fn(&SweepRow) -> f64,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["length_nm", "gap_over_sigma", column])
        .map_err(csv_error)?;
    for r in &result.rows {
        w.write_record([
            format_float(r.length / NANOMETER),
            format_float(r.gap_sigma),
            format_float(value(r)),
        ])
        .map_err(csv_error)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidParameter(format!("csv output: {e}")))
}
