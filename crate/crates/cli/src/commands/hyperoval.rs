use std::sync::Arc;

use serde_json::json;
use singer_core::hyperoval::{
    check_arc, elation_singer, payne_hyperoval, regular_hyperoval, swap_xy, t2star, translation, translation_hyperoval,
    translation_singer, Hyperoval, TranslationHyperplane, MAX_CERTIFY_Q,
};
use singer_core::matgroup::FinGroup;
use singer_core::{Field, FieldElem};

use super::{any_failed, field, ClaimRow};
use crate::args::{Format, Global, HyperovalCommand, HyperovalKindArg};
use crate::error::{compute, guard, CliError};
use crate::output::{document, render, Outcome};

pub fn run(g: &Global, cmd: &HyperovalCommand) -> Result<Outcome, CliError> {
    let HyperovalCommand::Build(a) = cmd;
    let f = field(a.q)?;
    guard("T₂* point set", (a.q as u64).pow(3), g.max_order)?;
    let h = build(&f, a.kind, a.k)?;
    let points: Vec<Vec<u32>> = h
        .points()
        .iter()
        .map(|p| p.iter().map(|c| c.encoding()).collect())
        .collect();
    let arc_ok = check_arc(&f, h.points()).is_ok();
    let mut rows = Vec::new();
    if a.verify {
        rows = verify_rows(&f, &h, a.kind, a.k)?;
    }
    let failed = !arc_ok || any_failed(&rows);
    let doc = document(
        "hyperoval build",
        json!({
            "q": a.q,
            "kind": format!("{:?}", h.kind()),
            "points": points,
            "no_three_collinear": arc_ok,
            "status": if failed { "FAIL" } else { "PASS" },
            "claims": rows,
        }),
    );
    render(&doc, g.format.unwrap_or(Format::Json), failed)
}

pub fn build(f: &Arc<Field>, kind: HyperovalKindArg, k: u32) -> Result<Hyperoval, CliError> {
    match kind {
        HyperovalKindArg::Regular => regular_hyperoval(f),
        HyperovalKindArg::Translation => translation_hyperoval(f, k),
        HyperovalKindArg::Payne => payne_hyperoval(f),
    }
    .map_err(|e| CliError::Usage(e.to_string()))
}

fn group_rows(q: u32, label: &str, group: &FinGroup) -> Vec<ClaimRow> {
    let q3 = (q as usize).pow(3);
    vec![
        ClaimRow::check(
            format!("{label}/order/q={q}"),
            "order q³",
            json!(q3),
            json!(group.order()),
        ),
        ClaimRow::check(
            format!("{label}/exponent/q={q}"),
            "exponent 4",
            json!(4),
            json!(group.exponent()),
        ),
    ]
}

/// Quadrangle certification and Singer-group properties for one hyperoval.
pub fn verify_rows(f: &Arc<Field>, h: &Hyperoval, kind: HyperovalKindArg, k: u32) -> Result<Vec<ClaimRow>, CliError> {
    let q = f.q();
    let model = t2star(h).map_err(compute)?;
    let mut rows = Vec::new();
    if q <= MAX_CERTIFY_Q {
        let cert = model.certify().map_err(compute)?;
        rows.push(ClaimRow::check(
            format!("t2star_order/q={q}"),
            "T₂*(ℋ) is a quadrangle of order (q − 1, q + 1)",
            json!([q - 1, q + 1]),
            json!([cert.s, cert.t]),
        ));
    } else {
        rows.push(ClaimRow::info(
            format!("t2star_order/q={q}"),
            "quadrangle certification skipped above q = 16",
            json!(null),
        ));
    }
    let group = match kind {
        HyperovalKindArg::Payne => {
            let s = elation_singer(h, &swap_xy(f), &TranslationHyperplane::digit_sum(f.h())).map_err(compute)?;
            let (o, z) = (FieldElem::ONE, FieldElem::ZERO);
            let g2 = s.g.mul(f, &s.g);
            rows.extend(group_rows(q, "elation_singer", &s.group));
            rows.push(ClaimRow::check(
                format!("elation_singer/g_squared/q={q}"),
                "g² is the translation by (1, 1, 0)",
                json!(true),
                json!(g2 == translation(f, o, o, z)),
            ));
            rows.push(ClaimRow::check(
                format!("elation_singer/translations/q={q}"),
                "|S ∩ T| = q³/2",
                json!((q as usize).pow(3) / 2),
                json!(s.translation_intersection),
            ));
            s.group
        }
        _ => {
            let kk = if kind == HyperovalKindArg::Regular { 1 } else { k };
            let s = translation_singer(f, kk).map_err(compute)?;
            rows.extend(group_rows(q, "translation_singer", &s));
            rows.push(ClaimRow::check(
                format!("translation_singer/center/q={q}"),
                "center of order q²",
                json!((q as usize).pow(2)),
                json!(s.center().order()),
            ));
            s
        }
    };
    let sharp = model.singer_certificate(&group);
    rows.push(
        ClaimRow::check(
            format!("singer_sharp/q={q}"),
            "sharply transitive on the points of T₂*(ℋ)",
            json!(true),
            json!(sharp.is_ok()),
        )
        .with_witness(json!(sharp.err().map(|e| e.to_string()))),
    );
    Ok(rows)
}
