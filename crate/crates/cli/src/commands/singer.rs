use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use singer_core::matgroup::{fingerprint_equal, GroupInvariants};
use singer_core::singer::{
    classify_abelian_quotients, enumerate_bl, explicit_total_count, lift_eta, prime_case_census, total_count,
    BLCandidate, SingerGroupRecord,
};
use singer_core::Field;

use super::{any_failed, field, ClaimRow};
use crate::args::{CensusArgs, Format, Global, SingerArgs, SingerCommand};
use crate::error::{compute, guard, CliError};
use crate::output::{document, render, to_value, Outcome};

pub fn run(g: &Global, cmd: &SingerCommand) -> Result<Outcome, CliError> {
    match cmd {
        SingerCommand::Enumerate(a) => enumerate(g, a, false),
        SingerCommand::Classify(a) => enumerate(g, a, true),
        SingerCommand::Census(a) => census(g, a),
    }
}

fn candidate_count(f: &Field) -> u64 {
    (f.p() as u64).saturating_pow(f.h() * f.h())
}

fn preflight(g: &Global, f: &Field) -> Result<(), CliError> {
    guard(
        format!("Singer groups of order q³ = {}", (f.q() as u64).pow(3)),
        (f.q() as u64).pow(3),
        g.max_order,
    )?;
    guard("B(ℓ) enumeration", candidate_count(f), g.max_order)
}

fn lift_records(f: &Arc<Field>, cands: &[BLCandidate]) -> Result<Vec<SingerGroupRecord>, CliError> {
    cands
        .par_iter()
        .map(|c| lift_eta(f, c))
        .collect::<Result<_, _>>()
        .map_err(compute)
}

/// Groups record indices into classes of indistinguishable fingerprints, in
/// order of first appearance.
fn fingerprint_classes(invs: &[GroupInvariants]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, inv) in invs.iter().enumerate() {
        match classes.iter_mut().find(|c| fingerprint_equal(&invs[c[0]], inv)) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

fn enumerate(g: &Global, a: &SingerArgs, classify: bool) -> Result<Outcome, CliError> {
    let f = field(a.q)?;
    preflight(g, &f)?;
    let cands = enumerate_bl(&f, a.line).map_err(compute)?;
    let records = lift_records(&f, &cands)?;
    let invs: Vec<GroupInvariants> = records
        .par_iter()
        .map(|r| r.invariants())
        .collect::<Result<_, _>>()
        .map_err(compute)?;
    let classes = fingerprint_classes(&invs);
    let multisets: BTreeSet<Vec<usize>> = records.iter().map(|r| r.commuting.multiset.clone()).collect();
    let summaries: Vec<_> = records.iter().map(|r| r.summary()).collect();
    let abelian: Vec<u64> = records
        .iter()
        .filter(|r| r.abelian_quotient)
        .map(|r| r.candidate.index)
        .collect();
    let summary = json!({
        "total": records.len(),
        "abelian_quotient_count": abelian.len(),
        "distinct_fingerprints": classes.len(),
        "distinct_commuting_multisets": multisets.len(),
    });
    let format = g.format.unwrap_or(Format::Json);
    if format == Format::Csv {
        let mut out =
            String::from("index,abelian_quotient,order,exponent,center_order,derived_order,class,commuting_dims\n");
        for s in &summaries {
            let dims: Vec<String> = s.commuting_dims.iter().map(usize::to_string).collect();
            let class = s.class.map(|c| c.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                s.index,
                s.abelian_quotient,
                s.order,
                s.exponent,
                s.center_order,
                s.derived_order,
                class,
                dims.join(" ")
            ));
        }
        return Ok(Outcome {
            text: out,
            failed: false,
        });
    }
    let body = if classify {
        let fingerprint_classes: Vec<Value> = classes
            .iter()
            .map(|c| json!({ "members": c.iter().map(|&i| records[i].candidate.index).collect::<Vec<_>>(), "invariants": to_value(&invs[c[0]]) }))
            .collect();
        json!({
            "q": a.q, "line": a.line, "summary": summary,
            "abelian_quotient_indices": abelian,
            "fingerprint_classes": fingerprint_classes,
            "commuting_multisets": multisets,
        })
    } else {
        json!({ "q": a.q, "line": a.line, "summary": summary, "records": summaries })
    };
    let name = if classify {
        "singer classify"
    } else {
        "singer enumerate"
    };
    render(&document(name, body), format, false)
}

/// Claim rows for the counting statements at one q.
pub fn census_rows(
    f: &Arc<Field>,
    line: usize,
    sample_size: Option<usize>,
    seed: u64,
) -> Result<Vec<ClaimRow>, CliError> {
    let q = f.q();
    let mut rows = Vec::new();
    let cands = enumerate_bl(f, line).map_err(compute)?;
    rows.push(ClaimRow::check(
        format!("bl_count/q={q}"),
        "|B(ℓ)| = p^{h²}",
        json!(candidate_count(f)),
        json!(cands.len()),
    ));
    let chosen: Vec<BLCandidate> = match sample_size {
        Some(n) if n < cands.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = sample(&mut rng, cands.len(), n).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| cands[i].clone()).collect()
        }
        _ => cands.clone(),
    };
    let results: Vec<(u64, Result<usize, String>)> = chosen
        .par_iter()
        .map(|c| {
            (
                c.index,
                lift_eta(f, c).map(|r| r.s_group.order()).map_err(|e| e.to_string()),
            )
        })
        .collect();
    let bad: Vec<Value> = results
        .iter()
        .filter(|(_, r)| r.as_ref().map_or(true, |&o| o != (q as usize).pow(3)))
        .map(|(i, r)| json!({ "index": i, "error": r.as_ref().err() }))
        .collect();
    rows.push(
        ClaimRow::check(
            format!("lift_validity/q={q}"),
            "every verified lift is sharply transitive of order q³",
            json!(chosen.len()),
            json!(chosen.len() - bad.len()),
        )
        .with_witness(json!({ "failures": bad, "sampled": sample_size.is_some() })),
    );
    let ab = classify_abelian_quotients(f, line).map_err(compute)?;
    let expected = if q % 2 == 1 { q as usize } else { 1 };
    rows.push(
        ClaimRow::check(
            format!("abelian_quotients/q={q}"),
            "abelian S/𝕊: q candidates for q odd, exactly one for q even",
            json!(expected),
            json!(ab.abelian),
        )
        .with_witness(json!({ "abelian_indices": ab.abelian_indices })),
    );
    if sample_size.is_none() && q <= 5 {
        let explicit = explicit_total_count(f).map_err(compute)?;
        rows.push(ClaimRow::check(
            format!("total_count/q={q}"),
            "(q+1)(p^{h²}−1) − ((q+1)(q−1))^{p mod 2} equals the explicit count over all lines",
            json!(total_count(f).to_string()),
            json!(explicit.to_string()),
        ));
    }
    Ok(rows)
}

pub fn prime_rows(p: u32) -> Result<Vec<ClaimRow>, CliError> {
    let c = prime_case_census(p).map_err(compute)?;
    let expected = json!({ "groups": p, "elementary_abelian": 1, "heisenberg_fingerprint": p - 1 });
    let observed = json!({ "groups": c.groups, "elementary_abelian": c.elementary_abelian, "heisenberg_fingerprint": c.heisenberg_fingerprint });
    Ok(vec![ClaimRow::check(
        format!("prime_case/p={p}"),
        "p lifts: one elementary abelian, p − 1 with the Heisenberg fingerprint",
        expected,
        observed,
    )
    .with_witness(to_value(&c))])
}

fn census(g: &Global, a: &CensusArgs) -> Result<Outcome, CliError> {
    let (rows, q) = if a.prime_case {
        let p =
            a.p.or(a.q)
                .ok_or_else(|| CliError::Usage("--prime-case needs --p".into()))?;
        if ![3, 5, 7].contains(&p) {
            return Err(CliError::Usage(format!(
                "prime-case census runs for p ∈ {{3, 5, 7}}, got {p}"
            )));
        }
        guard("Singer groups of order p³", (p as u64).pow(3), g.max_order)?;
        (prime_rows(p)?, p)
    } else {
        let q =
            a.q.ok_or_else(|| CliError::Usage("census needs --q or --prime-case --p".into()))?;
        let f = field(q)?;
        preflight(g, &f)?;
        (census_rows(&f, 0, a.sample, a.seed)?, q)
    };
    let failed = any_failed(&rows);
    let doc = document(
        "singer census",
        json!({ "q": q, "prime_case": a.prime_case, "sample": a.sample, "status": if failed { "FAIL" } else { "PASS" }, "claims": rows }),
    );
    render(&doc, g.format.unwrap_or(Format::Json), failed)
}
