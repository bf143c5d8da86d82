use std::path::PathBuf;
use std::sync::Arc;

use serde_json::{json, Value};
use singer_core::hyperoval::{regular_hyperoval, t2star, translation_singer};
use singer_core::lattice::{
    abelianization_report, check_local_iso, export_presentation, gamma1, homology_metadata, local_data, ExportFormat,
    LatticeError, LocalData,
};
use singer_core::singer::{lift_eta, BLCandidate};
use singer_core::symplectic::build_wq;
use singer_core::Field;

use super::field;
use crate::args::{Format, Global, GqKind, LatticeCommand};
use crate::error::{compute, guard, CliError};
use crate::output::{document, to_value, Outcome};

pub fn run(g: &Global, cmd: &LatticeCommand) -> Result<Outcome, CliError> {
    let LatticeCommand::Emit(a) = cmd;
    let f = field(a.q)?;
    guard("Singer groups of order q³", (a.q as u64).pow(3), g.max_order)?;
    let (ia, ib) = if a.classic {
        (0, 0)
    } else {
        (a.singer_a.unwrap_or(0), a.singer_b.unwrap_or(0))
    };
    let (la, lb) = match a.gq {
        GqKind::Payne => payne_local(&f, a.line, ia, ib)?,
        GqKind::T2star => t2star_local(&f)?,
    };
    let format = g.format.unwrap_or(Format::Gap);
    let mut header = json!({
        "q": a.q,
        "gq": format!("{:?}", a.gq).to_lowercase(),
        "singer_a": ia,
        "singer_b": ib,
        "line": a.line,
        "stabilizer_profile": { "a": to_value(&la.profile), "b": to_value(&lb.profile) },
        "h2_metadata": to_value(&homology_metadata(&la.group, &lb.group)),
    });
    let matching = match check_local_iso(&la, &lb) {
        Ok(m) => m,
        Err(e @ LatticeError::NoMatching { .. }) => {
            header["status"] = json!("FAIL");
            header["witness"] = json!(e.to_string());
            let text = serde_json::to_string_pretty(&document("lattice emit", header)).expect("json") + "\n";
            return Ok(Outcome { text, failed: true });
        }
        Err(e) => return Err(compute(e)),
    };
    let p = gamma1(&la, &lb, &matching).map_err(compute)?;
    header["status"] = json!("PASS");
    header["matching"] = to_value(&matching);
    header["generators"] = json!(p.generators.len());
    header["relator_count"] = json!(p.relators.len());
    header["table_relators"] = json!(p.table_relators);
    header["commutator_relators"] = json!(p.commutator_relators);
    header["abelianization"] = abelianization_report(&p, la.group.order() - 1).map_or(Value::Null, |r| to_value(&r));
    let sidecar = serde_json::to_string_pretty(&document("lattice emit", header)).expect("json") + "\n";
    let export = match format {
        Format::Json => {
            return Ok(Outcome {
                text: sidecar,
                failed: false,
            })
        }
        Format::Gap => ExportFormat::Gap,
        Format::Magma => ExportFormat::Magma,
        Format::Plain => ExportFormat::Plain,
        other => {
            return Err(CliError::Usage(format!(
                "format {other:?} is not available for lattice emit"
            )))
        }
    };
    if let Some(path) = &g.output {
        let mut side = PathBuf::from(path);
        side.as_mut_os_string().push(".json");
        std::fs::write(side, &sidecar)?;
    }
    Ok(Outcome {
        text: export_presentation(&p, export).map_err(compute)?,
        failed: false,
    })
}

fn payne_local(f: &Arc<Field>, line: usize, ia: u64, ib: u64) -> Result<(LocalData, LocalData), CliError> {
    let w = build_wq(f).map_err(compute)?;
    let d = w.payne_derive().map_err(compute)?;
    let pts = w.derived_coordinates(&d).map_err(compute)?;
    let local = |idx: u64| -> Result<LocalData, CliError> {
        let cand = BLCandidate::from_index(f, line, idx).map_err(|e| CliError::Usage(e.to_string()))?;
        let rec = lift_eta(f, &cand).map_err(compute)?;
        local_data(&d, &rec.s_group, &pts, 0).map_err(compute)
    };
    Ok((local(ia)?, local(ib)?))
}

fn t2star_local(f: &Arc<Field>) -> Result<(LocalData, LocalData), CliError> {
    let model = t2star(&regular_hyperoval(f).map_err(|e| CliError::Usage(e.to_string()))?).map_err(compute)?;
    let s = translation_singer(f, 1).map_err(compute)?;
    let l = local_data(model.structure(), &s, model.points(), 0).map_err(compute)?;
    Ok((l.clone(), l))
}
