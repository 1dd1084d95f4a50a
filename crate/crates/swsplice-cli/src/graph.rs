use std::path::Path;

use clap::ValueEnum;
use swsplice::plumbing::{
    acampo_alexander, canonical_class_invariant, homology, intersection_matrix, parse_graph, torsion_sigma_can,
    PlumbingGraph,
};

use crate::{short, Exit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Det,
    Homology,
    Torsion,
    K2,
    Alexander,
}

pub fn read_graph(path: &Path) -> Result<PlumbingGraph, Exit> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Exit::usage(format!("cannot read {}: {}", path.display(), e)))?;
    parse_graph(&text).map_err(|e| {
        let mut exit = Exit::from(e);
        exit.message = format!("{}: {}", path.display(), exit.message);
        exit
    })
}

pub fn run(path: &Path, ops: &[Op]) -> Result<(), Exit> {
    let g = read_graph(path)?;
    for op in ops {
        let value = match op {
            Op::Det => intersection_matrix(&g)?.det.to_string(),
            Op::Homology => {
                let h = homology(&g)?;
                if h.invariant_factors.is_empty() {
                    "0".to_string()
                } else {
                    h.invariant_factors.iter().map(|d| format!("Z/{}", d)).collect::<Vec<_>>().join(" + ")
                }
            }
            Op::Torsion => short(&torsion_sigma_can(&g.without_arrows())?),
            Op::K2 => short(&canonical_class_invariant(&g.without_arrows())?),
            Op::Alexander => {
                let r = acampo_alexander(&g)?;
                match r.polynomial() {
                    Some(p) => p.to_string(),
                    None => binomial_text(r.binomial.factors()),
                }
            }
        };
        println!("{} = {}", name(*op), value);
    }
    Ok(())
}

fn name(op: Op) -> &'static str {
    match op {
        Op::Det => "det",
        Op::Homology => "homology",
        Op::Torsion => "torsion",
        Op::K2 => "k2",
        Op::Alexander => "alexander",
    }
}

fn binomial_text(factors: impl Iterator<Item = (u64, i64)>) -> String {
    let parts: Vec<String> = factors
        .map(|(m, e)| if e == 1 { format!("(t^{}-1)", m) } else { format!("(t^{}-1)^{}", m, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
