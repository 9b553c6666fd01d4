//! Per-diagram report rows and their CSV and JSON encodings.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{bail, Context, Result};
use hypvol::bounds::{best_bound, evaluate, BoundName, BoundReport, EvaluationOptions};
use hypvol::diagram::LinkDiagram;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Which bounds to report, in canonical order.
pub fn parse_selection(spec: &str) -> Result<Vec<BoundName>> {
    if spec.trim() == "all" {
        return Ok(BoundName::ALL.to_vec());
    }
    let mut chosen = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let name: BoundName = part.parse()?;
        if !chosen.contains(&name) {
            chosen.push(name);
        }
    }
    if chosen.is_empty() {
        bail!("no bounds selected");
    }
    chosen.sort();
    Ok(chosen)
}

/// Reads `name,volume` records; a leading `name,volume` header is allowed.
pub fn read_reference(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.context("reading reference volumes")?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() != 2 {
            bail!("line {line}: expected `name,volume`, found {} fields", record.len());
        }
        let (name, value) = (&record[0], &record[1]);
        if i == 0 && name.eq_ignore_ascii_case("name") {
            continue;
        }
        let volume: f64 = value
            .parse()
            .with_context(|| format!("line {line}: volume `{value}` is not a number"))?;
        if !(volume.is_finite() && volume > 0.0) {
            bail!("line {line}: volume must be positive, got {volume}");
        }
        out.insert(name.to_string(), volume);
    }
    Ok(out)
}

/// Twist statistics as reported; absent when bigon chains are undefined.
#[derive(Debug, Clone, Serialize)]
pub struct TwistColumns {
    pub twist_number: usize,
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
    pub t4: usize,
    pub g5: usize,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub line: usize,
    pub name: String,
    pub crossings: usize,
    pub components: usize,
    pub twist: Option<TwistColumns>,
    pub faces: String,
    pub reports: Vec<BoundReport>,
    pub best: Option<(BoundName, f64)>,
    pub reference: Option<f64>,
}

impl Row {
    pub fn ratio(&self) -> Option<f64> {
        match (self.best, self.reference) {
            (Some((_, b)), Some(r)) => Some(b / r),
            _ => None,
        }
    }
}

pub fn build_row(
    line: usize,
    name: String,
    d: &LinkDiagram,
    selection: &[BoundName],
    options: &EvaluationOptions,
    reference: Option<f64>,
) -> Result<Row> {
    let eval = evaluate(d, options)?;
    let reports: Vec<BoundReport> = eval
        .reports
        .into_iter()
        .filter(|r| selection.contains(&r.name))
        .collect();
    let best = best_bound(&reports)
        .ok()
        .map(|r| (r.name, r.value.expect("applicable")));
    let twist = eval.twist.ok().map(|s| TwistColumns {
        twist_number: s.twist_number,
        t1: s.t(1),
        t2: s.t(2),
        t3: s.t(3),
        t4: s.t(4),
        g5: s.g(5),
    });
    Ok(Row {
        line,
        name,
        crossings: d.crossing_count(),
        components: d.component_count(),
        twist,
        faces: eval.faces.census(),
        reports,
        best,
        reference,
    })
}

/// Rounds to six significant digits and renders without trailing noise.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.5e}").parse().expect("formatted float parses");
    let magnitude = rounded.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{rounded:.decimals$}")
}

fn rounded(v: f64, full: bool) -> Value {
    let v = if full { v } else { sig6(v).parse().expect("sig6 output parses") };
    json!(v)
}

fn na(v: Option<String>) -> String {
    v.unwrap_or_else(|| "n/a".to_string())
}

pub fn write_csv<W: Write>(out: W, rows: &[Row], selection: &[BoundName]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["name", "c", "components", "t", "t_1", "t_2", "t_3", "t_4", "g_5", "faces"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(selection.iter().map(|b| b.as_str().to_string()));
    header.extend(["best_bound", "best_value", "reference", "ratio"].map(String::from));
    w.write_record(&header)?;
    for row in rows {
        let t = row.twist.as_ref();
        let mut rec = vec![
            row.name.clone(),
            row.crossings.to_string(),
            row.components.to_string(),
            na(t.map(|t| t.twist_number.to_string())),
            na(t.map(|t| t.t1.to_string())),
            na(t.map(|t| t.t2.to_string())),
            na(t.map(|t| t.t3.to_string())),
            na(t.map(|t| t.t4.to_string())),
            na(t.map(|t| t.g5.to_string())),
            row.faces.clone(),
        ];
        rec.extend(row.reports.iter().map(|r| na(r.value.map(sig6))));
        rec.push(na(row.best.map(|(b, _)| b.as_str().to_string())));
        rec.push(na(row.best.map(|(_, v)| sig6(v))));
        rec.push(na(row.reference.map(sig6)));
        rec.push(na(row.ratio().map(sig6)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut out: W, rows: &[Row], full: bool) -> Result<()> {
    let num = |v: Option<f64>| v.map_or(Value::Null, |v| rounded(v, full));
    let encoded: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut bounds = Map::new();
            for r in &row.reports {
                bounds.insert(
                    r.name.as_str().to_string(),
                    json!({
                        "value": num(r.value),
                        "applicable": r.applicable,
                        "reason": r.reason,
                        "citation": r.citation,
                    }),
                );
            }
            json!({
                "name": row.name,
                "line": row.line,
                "c": row.crossings,
                "components": row.components,
                "twist": row.twist,
                "faces": row.faces,
                "bounds": bounds,
                "best_bound": row.best.map(|(b, _)| b.as_str()),
                "best_value": num(row.best.map(|(_, v)| v)),
                "reference": num(row.reference),
                "ratio": num(row.ratio()),
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &encoded)?;
    writeln!(out)?;
    Ok(())
}
