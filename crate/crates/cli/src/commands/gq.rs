use serde_json::json;
use singer_core::incidence::IncidenceStructure;
use singer_core::symplectic::build_wq;

use super::field;
use crate::args::{Format, Global, GqCommand, VerifyLevel};
use crate::error::{compute, guard, CliError};
use crate::output::{document, render, to_value, Outcome};

pub fn run(g: &Global, cmd: &GqCommand) -> Result<Outcome, CliError> {
    match cmd {
        GqCommand::Build(a) => build(g, a.q),
        GqCommand::Derive(a) => derive(g, a.q),
        GqCommand::Verify { input } => {
            let text = std::fs::read_to_string(input)?;
            let gq = IncidenceStructure::from_csv(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            guard("incidence structure", gq.npoints() as u64, g.max_order)?;
            let (doc, failed) = match gq.verify_gq() {
                Ok(cert) => (
                    json!({ "valid": true, "thick": cert.thick, "certificate": to_value(&cert) }),
                    false,
                ),
                Err(e) => (
                    json!({ "valid": false, "error": e.to_string(), "witness": format!("{e:?}") }),
                    true,
                ),
            };
            render(&document("gq verify", doc), g.format.unwrap_or(Format::Json), failed)
        }
    }
}

fn w_points(q: u64) -> u64 {
    (q.pow(4) - 1) / (q - 1)
}

fn build(g: &Global, q: u32) -> Result<Outcome, CliError> {
    let f = field(q)?;
    guard(format!("W({q})"), w_points(q as u64), g.max_order)?;
    let w = build_wq(&f).map_err(compute)?;
    if g.format == Some(Format::Csv) {
        return Ok(Outcome {
            text: w.structure().to_csv(),
            failed: false,
        });
    }
    let mut doc = json!({
        "q": q,
        "npoints": w.structure().npoints(),
        "nlines": w.structure().nlines(),
    });
    let mut failed = false;
    if g.verify_level != VerifyLevel::Off {
        let cert = w.certificate().map_err(compute)?;
        let regular = w.structure().is_regular_point(&cert, w.x()).map_err(compute)?;
        failed = (cert.s, cert.t) != (q as usize, q as usize) || !regular;
        doc["s"] = json!(cert.s);
        doc["t"] = json!(cert.t);
        doc["thick"] = json!(cert.thick);
        doc["base_point_regular"] = json!(regular);
        doc["certificate"] = to_value(&cert);
    }
    render(&document("gq build", doc), g.format.unwrap_or(Format::Json), failed)
}

fn derive(g: &Global, q: u32) -> Result<Outcome, CliError> {
    let f = field(q)?;
    guard(format!("W({q})"), w_points(q as u64), g.max_order)?;
    let w = build_wq(&f).map_err(compute)?;
    let d = w.payne_derive().map_err(compute)?;
    if g.format == Some(Format::Csv) {
        return Ok(Outcome {
            text: d.to_csv(),
            failed: false,
        });
    }
    let mut doc = json!({ "q": q, "npoints": d.npoints(), "nlines": d.nlines() });
    let mut failed = false;
    if g.verify_level != VerifyLevel::Off {
        let cert = d.verify_gq().map_err(compute)?;
        failed = (cert.s, cert.t) != (q as usize - 1, q as usize + 1);
        doc["s"] = json!(cert.s);
        doc["t"] = json!(cert.t);
        doc["certificate"] = to_value(&cert);
    }
    render(&document("gq derive", doc), g.format.unwrap_or(Format::Json), failed)
}
