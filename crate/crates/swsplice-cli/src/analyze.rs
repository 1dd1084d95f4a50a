use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use swsplice::exact_core::{fmt_rational, qi};
use swsplice::plane_curve::NewtonPairs;
use swsplice::suspension::{averaged_alexander_check, SuspensionTower, DEFAULT_AVERAGE_BOUND};
use swsplice::{Error, Rational};

use crate::graph::read_graph;
use crate::{short, Exit};

/// Outcome of the averaged Alexander polynomial check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Averaged {
    Pass,
    Fail,
    /// Some `h̃_l ≠ 1`: the check does not apply.
    NotApplicable,
    /// Character group too large for the work bound.
    Skipped,
}

impl Averaged {
    fn label(self) -> &'static str {
        match self {
            Averaged::Pass => "PASS",
            Averaged::Fail => "FAIL",
            Averaged::NotApplicable => "N/A",
            Averaged::Skipped => "SKIPPED",
        }
    }
}

pub fn averaged_status(tower: &SuspensionTower) -> Result<Averaged, Error> {
    let t = &tower.skeleton;
    if (1..=t.s()).any(|l| t.h_tilde(l) != 1) {
        return Ok(Averaged::NotApplicable);
    }
    match averaged_alexander_check(t, DEFAULT_AVERAGE_BOUND) {
        Ok(r) if r.holds => Ok(Averaged::Pass),
        Ok(_) => Ok(Averaged::Fail),
        Err(Error::WorkBoundExceeded { .. }) => Ok(Averaged::Skipped),
        Err(e) => Err(e),
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn r(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

fn int(x: impl Into<BigInt>) -> Value {
    r(&qi(x))
}

pub struct Checks {
    pub conjecture: bool,
    pub swadd: bool,
    pub identity: bool,
    pub averaged: Averaged,
}

impl Checks {
    pub fn of(tower: &SuspensionTower) -> Result<Self, Error> {
        let top = tower.top();
        Ok(Checks {
            conjecture: qi(-8) * &top.sw0 == qi(top.sigma),
            swadd: tower.sw0.assembled == tower.sw0.additive,
            identity: tower.levels.iter().all(|l| l.identity_defect.is_zero()),
            averaged: averaged_status(tower)?,
        })
    }

    pub fn all_pass(&self) -> bool {
        self.conjecture && self.swadd && self.identity && self.averaged != Averaged::Fail
    }
}

/// The JSON report: keys `input`, `levels`, `checks`, `values`.
pub fn report(tower: &SuspensionTower, checks: &Checks, graph: Option<&str>) -> Value {
    let t = &tower.skeleton;
    let input = json!({
        "pairs": t.newton_pairs.to_string(),
        "n": int(t.n),
        "graph": graph,
    });
    let levels: Vec<Value> = tower
        .levels
        .iter()
        .map(|l| {
            json!({
                "l": int(l.l),
                "d": int(l.d),
                "h": int(l.h),
                "h_tilde": int(l.h_tilde),
                "h1_order": int(l.h1_order.clone()),
                "mu": int(l.mu.clone()),
                "sigma": int(l.sigma),
                "ddot": r(&l.ddot),
                "identity_defect": r(&l.identity_defect),
                "lambda_w": r(&l.lambda_w),
                "torsion": r(&l.torsion),
                "sw0": r(&l.sw0),
            })
        })
        .collect();
    let checks = json!({
        "conjecture": pass(checks.conjecture),
        "swadd": pass(checks.swadd),
        "identity": pass(checks.identity),
        "averaged_alexander": checks.averaged.label(),
    });
    let top = tower.top();
    let mut values = Map::new();
    values.insert("sw0".into(), r(&top.sw0));
    values.insert("sigma".into(), int(top.sigma));
    values.insert("lambda_w".into(), r(&top.lambda_w));
    values.insert("torsion".into(), r(&top.torsion));
    values.insert("h1_order".into(), int(top.h1_order.clone()));
    values.insert("mu".into(), int(top.mu.clone()));
    if let Some(k) = &tower.sw0.k2_plus_vertices {
        values.insert("k2_plus_vertices".into(), r(k));
    }
    if let Some(pg) = &tower.sw0.geometric_genus {
        values.insert("p_g".into(), r(pg));
    }
    json!({ "input": input, "levels": levels, "checks": checks, "values": Value::Object(values) })
}

fn print_human(tower: &SuspensionTower, checks: &Checks) {
    let t = &tower.skeleton;
    println!("pairs {}, n = {}", t.newton_pairs, t.n);
    let header = ["l", "d", "h", "h~", "|H1|", "mu", "sigma", "lambda_W", "T(1)", "sw0"];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for l in &tower.levels {
        rows.push(vec![
            l.l.to_string(),
            l.d.to_string(),
            l.h.to_string(),
            l.h_tilde.to_string(),
            l.h1_order.to_string(),
            l.mu.to_string(),
            l.sigma.to_string(),
            short(&l.lambda_w),
            short(&l.torsion),
            short(&l.sw0),
        ]);
    }
    let widths: Vec<usize> = (0..header.len()).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{:>w$}", c, w = w)).collect();
        println!("  {}", cells.join("  "));
    }
    let top = tower.top();
    println!("sw0 = {}", short(&top.sw0));
    println!("sigma = {}", top.sigma);
    if let (Some(k), Some(pg)) = (&tower.sw0.k2_plus_vertices, &tower.sw0.geometric_genus) {
        println!("K^2 + #V = {}", short(k));
        println!("p_g = {}", short(pg));
    }
    println!("conjecture (-8 sw0 = sigma): {}", pass(checks.conjecture));
    println!("swadd (T(1) - lambda_W/2 = sum d_k sw0): {}", pass(checks.swadd));
    println!("master identity (E_l = 0): {}", pass(checks.identity));
    println!("averaged Alexander polynomial: {}", checks.averaged.label());
}

pub fn run(pairs: &str, n: u64, graph: Option<&Path>, json_out: Option<&Path>) -> Result<(), Exit> {
    let np: NewtonPairs = pairs.parse()?;
    let g = graph.map(read_graph).transpose()?;
    let tower = SuspensionTower::new(&np, n, g.as_ref())?;
    let checks = Checks::of(&tower)?;
    print_human(&tower, &checks);
    if let Some(path) = json_out {
        let graph_name = graph.map(|p| p.display().to_string());
        let value = report(&tower, &checks, graph_name.as_deref());
        let text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
        std::fs::write(path, text + "\n")
            .map_err(|e| Exit::usage(format!("cannot write {}: {}", path.display(), e)))?;
    }
    if checks.all_pass() {
        Ok(())
    } else {
        Err(Exit { code: 3, message: format!("a check failed for pairs {} with n = {}", np, n) })
    }
}
