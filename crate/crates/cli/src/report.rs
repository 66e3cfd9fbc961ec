//! Human-readable, JSON and CSV renderings of a validated solution.

use offshore_sizing::model::{
    cost_breakdown, CostBreakdown, PerResource, Resource, ValidationReport,
};
use offshore_sizing::solver::SolverDiagnostics;
use offshore_sizing::{Scenario, Solution};
use serde::Serialize;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispatchRow {
    pub hour: usize,
    pub load: f64,
    /// Total output of each resource (units × per-unit kW).
    pub generation: PerResource<f64>,
    pub charge: f64,
    pub discharge: f64,
    pub curtail: f64,
    pub energy: f64,
    /// Stored energy over capacity; 0 without storage.
    pub soc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub region: String,
    pub counts: PerResource<u64>,
    pub e_bess: f64,
    pub total_cost: f64,
    pub breakdown: CostBreakdown<f64>,
    pub dispatch: Vec<DispatchRow>,
    pub diagnostics: SolverDiagnostics,
    pub max_violation: f64,
    pub objective_relative_error: f64,
}

impl Report {
    pub fn new(
        region: &str,
        scenario: &Scenario,
        solution: &Solution,
        validation: &ValidationReport,
    ) -> Self {
        let dispatch = solution
            .schedule
            .iter()
            .enumerate()
            .map(|(t, s)| DispatchRow {
                hour: t,
                load: scenario.load[t],
                generation: PerResource::from_fn(|r| {
                    *solution.counts.get(r) as f64 * scenario.generation.get(r)[t]
                }),
                charge: s.charge,
                discharge: s.discharge,
                curtail: s.curtail,
                energy: s.energy,
                soc: if solution.e_bess > 0.0 {
                    s.energy / solution.e_bess
                } else {
                    0.0
                },
            })
            .collect();
        Self {
            region: region.to_string(),
            counts: solution.counts,
            e_bess: solution.e_bess,
            total_cost: solution.objective,
            breakdown: cost_breakdown(&scenario.costs, &solution.counts, solution.e_bess),
            dispatch,
            diagnostics: solution.diagnostics.clone(),
            max_violation: validation
                .families
                .iter()
                .map(|f| f.max_violation)
                .fold(0.0, f64::max),
            objective_relative_error: validation.objective_relative,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => self.dispatch_csv(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = &self.diagnostics;
        let _ = writeln!(out, "Region: {}", self.region);
        let _ = writeln!(
            out,
            "Status: {} (gap {:.3e}, {} nodes, {} pivots)",
            status_label(d),
            d.gap,
            d.nodes,
            d.lp_iterations
        );
        let _ = writeln!(out, "\nUnits");
        for r in Resource::ALL {
            let _ = writeln!(
                out,
                "  {:<5}{:>14}",
                r.key().to_uppercase(),
                self.counts.get(r)
            );
        }
        let _ = writeln!(out, "  {:<5}{:>14.3} kWh", "BESS", self.e_bess);
        let _ = writeln!(out, "\nLifetime cost (USD)");
        let b = &self.breakdown;
        for (name, v) in [
            ("WEC", b.wec),
            ("TEC", b.tec),
            ("OWT", b.owt),
            ("FPV", b.fpv),
            ("BESS", b.bess),
        ] {
            let _ = writeln!(out, "  {name:<6}{v:>20.2}");
        }
        let _ = writeln!(out, "  {:<6}{:>20.2}", "Total", b.total);
        let _ = writeln!(
            out,
            "\nValidation: max violation {:.3e}, objective error {:.3e}",
            self.max_violation, self.objective_relative_error
        );
        let _ = writeln!(out, "\nDispatch (kW; energy in kWh)");
        let _ = writeln!(
            out,
            "{:>4} {:>11} {:>10} {:>10} {:>11} {:>10} {:>10} {:>10} {:>10} {:>11} {:>6}",
            "hour",
            "load",
            "wec",
            "tec",
            "owt",
            "fpv",
            "charge",
            "discharge",
            "curtail",
            "energy",
            "soc"
        );
        for r in &self.dispatch {
            let g = &r.generation;
            let _ = writeln!(
                out,
                "{:>4} {:>11.1} {:>10.1} {:>10.1} {:>11.1} {:>10.1} {:>10.1} {:>10.1} {:>10.1} {:>11.1} {:>6.3}",
                r.hour, r.load, g.wec, g.tec, g.owt, g.fpv, r.charge, r.discharge, r.curtail, r.energy, r.soc
            );
        }
        out
    }

    pub fn dispatch_csv(&self) -> String {
        let mut out = String::from("hour,load_kw,wec_kw,tec_kw,owt_kw,fpv_kw,charge_kw,discharge_kw,curtail_kw,energy_kwh,soc\n");
        for r in &self.dispatch {
            let g = &r.generation;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.hour,
                r.load,
                g.wec,
                g.tec,
                g.owt,
                g.fpv,
                r.charge,
                r.discharge,
                r.curtail,
                r.energy,
                r.soc
            );
        }
        out
    }
}

pub fn status_label(d: &SolverDiagnostics) -> String {
    serde_json::to_value(d.status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_else(|| format!("{:?}", d.status))
}

/// Text listing of every family above tolerance plus the objective discrepancy.
pub fn describe_validation(
    report: &ValidationReport,
    tol: &offshore_sizing::model::ValidationTolerance,
) -> String {
    let mut out = String::new();
    for f in &report.families {
        let flag = if f.max_violation <= tol.constraint {
            "ok"
        } else {
            "VIOLATED"
        };
        let step = f.worst_step.map_or(String::from("-"), |s| s.to_string());
        let _ = writeln!(
            out,
            "  {:<11} {:>12.3e}  step {:>3}  {flag}",
            f.family, f.max_violation, step
        );
    }
    let flag = if report.objective_ok(tol) {
        "ok"
    } else {
        "VIOLATED"
    };
    let _ = writeln!(
        out,
        "  objective   reported {:.6} recomputed {:.6} discrepancy {:.6e} (relative {:.3e})  {flag}",
        report.objective_reported,
        report.objective_recomputed,
        report.objective_discrepancy,
        report.objective_relative
    );
    out
}
