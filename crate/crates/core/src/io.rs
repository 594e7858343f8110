//! File formats.
//!
//! * directions: JSON `[[a, b], ...]` or inline text such as `1,1; 2,-1` or `(1,1),(2,-1)`
//! * line sums: JSON `{"grid": [m, n], "directions": [[a, b], ...],
//!   "sums": {"a,b": {"c_min": c, "values": [...]}}}`
//! * images: CSV (one row per `q`), JSON `{"grid": [m, n], "values": [[...], ...]}`,
//!   binary PGM (lossy: rounded and clamped to `0..=255`)
//! * masks: plain PBM, `1` for set points
//! * free values: JSON `{"p,q": value, ...}`
//!
//! Values are written as JSON numbers when they are integers or floats and as
//! strings (`"p/q"`) otherwise; both forms are accepted on input.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};

use crate::error::{Result, TomoError};
use crate::grid::{validate_directions, DirectionSet, Grid, GridImage};
use crate::projector::LineSumTable;
use crate::value::Value;

fn parse_err(msg: impl Into<String>) -> TomoError {
    TomoError::Parse(msg.into())
}

/// Parses a direction list in either JSON or inline form.
pub fn parse_directions(text: &str) -> Result<Vec<(i64, i64)>> {
    let text = text.trim();
    if text.starts_with("[[") || text == "[]" {
        let raw: Vec<[i64; 2]> = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        return Ok(raw.into_iter().map(|[a, b]| (a, b)).collect());
    }
    let nums: Vec<i64> = text
        .split(|c: char| !(c.is_ascii_digit() || c == '-' || c == '+'))
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| parse_err(format!("bad integer {s:?} in direction list"))))
        .collect::<Result<_>>()?;
    if !nums.len().is_multiple_of(2) {
        return Err(parse_err("direction list has an odd number of components"));
    }
    Ok(nums.chunks(2).map(|c| (c[0], c[1])).collect())
}

pub fn directions_to_json(dirs: &DirectionSet) -> String {
    let raw: Vec<[i64; 2]> = dirs.directions().iter().map(|d| [d.a(), d.b()]).collect();
    serde_json::to_string(&raw).expect("plain data")
}

fn value_to_json<V: Value>(v: &V) -> Json {
    let s = v.to_string();
    if let Ok(i) = s.parse::<i64>() {
        return json!(i);
    }
    if !s.contains('/') {
        if let Some(n) = s.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
            return Json::Number(n);
        }
    }
    Json::String(s)
}

fn value_from_json<V: Value>(j: &Json) -> Result<V> {
    let s = match j {
        Json::String(s) => s.clone(),
        Json::Number(n) => n.to_string(),
        other => return Err(parse_err(format!("expected a number or string, got {other}"))),
    };
    V::parse_literal(&s).ok_or_else(|| parse_err(format!("bad value {s:?}")))
}

fn grid_from_json(j: &Json) -> Result<Grid> {
    let dims: [usize; 2] = serde_json::from_value(j.clone()).map_err(|e| parse_err(format!("grid: {e}")))?;
    Grid::new(dims[0], dims[1])
}

pub fn sums_to_json<V: Value>(table: &LineSumTable<V>) -> String {
    let mut sums = Map::new();
    for line in table.lines() {
        sums.insert(
            format!("{},{}", line.dir.a(), line.dir.b()),
            json!({ "c_min": line.c_min, "values": line.values.iter().map(value_to_json).collect::<Vec<_>>() }),
        );
    }
    let dirs: Vec<[i64; 2]> = table.directions().directions().iter().map(|d| [d.a(), d.b()]).collect();
    let doc = json!({ "grid": [table.grid().m(), table.grid().n()], "directions": dirs, "sums": sums });
    serde_json::to_string_pretty(&doc).expect("plain data")
}

pub fn sums_from_json<V: Value>(text: &str) -> Result<LineSumTable<V>> {
    let doc: Json = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let grid = grid_from_json(doc.get("grid").ok_or_else(|| parse_err("missing \"grid\""))?)?;
    let raw: Vec<[i64; 2]> = serde_json::from_value(doc.get("directions").cloned().unwrap_or(Json::Null))
        .map_err(|e| parse_err(format!("directions: {e}")))?;
    let dirs = validate_directions(&raw.iter().map(|&[a, b]| (a, b)).collect::<Vec<_>>())?;
    let sums = doc.get("sums").and_then(Json::as_object).ok_or_else(|| parse_err("missing \"sums\" object"))?;
    let mut parts = Vec::with_capacity(dirs.len());
    for dir in dirs.directions() {
        let entry = sums
            .get(&format!("{},{}", dir.a(), dir.b()))
            .ok_or_else(|| parse_err(format!("no sums for direction {dir}")))?;
        let c_min = entry.get("c_min").and_then(Json::as_i64).ok_or_else(|| parse_err("missing c_min"))?;
        let values = entry
            .get("values")
            .and_then(Json::as_array)
            .ok_or_else(|| parse_err("missing values"))?
            .iter()
            .map(value_from_json)
            .collect::<Result<Vec<V>>>()?;
        parts.push((c_min, values));
    }
    LineSumTable::from_parts(grid, &dirs, parts)
}

pub fn image_to_csv<V: Value>(img: &GridImage<V>) -> String {
    let m = img.grid().m();
    let mut out = String::new();
    for row in img.values().chunks(m) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn image_from_csv<V: Value>(text: &str) -> Result<GridImage<V>> {
    let rows: Vec<Vec<V>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|c| V::parse_literal(c).ok_or_else(|| parse_err(format!("bad value {:?}", c.trim()))))
                .collect()
        })
        .collect::<Result<_>>()?;
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(parse_err("CSV rows have different lengths"));
    }
    let grid = Grid::new(m, rows.len())?;
    GridImage::from_values(grid, rows.into_iter().flatten().collect())
}

pub fn image_to_json<V: Value>(img: &GridImage<V>) -> String {
    let rows: Vec<Vec<Json>> = img.values().chunks(img.grid().m()).map(|r| r.iter().map(value_to_json).collect()).collect();
    serde_json::to_string_pretty(&json!({ "grid": [img.grid().m(), img.grid().n()], "values": rows }))
        .expect("plain data")
}

pub fn image_from_json<V: Value>(text: &str) -> Result<GridImage<V>> {
    let doc: Json = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let grid = grid_from_json(doc.get("grid").ok_or_else(|| parse_err("missing \"grid\""))?)?;
    let rows = doc.get("values").and_then(Json::as_array).ok_or_else(|| parse_err("missing values"))?;
    let mut values = Vec::with_capacity(grid.area());
    for row in rows {
        for v in row.as_array().ok_or_else(|| parse_err("values must be an array of rows"))? {
            values.push(value_from_json(v)?);
        }
    }
    GridImage::from_values(grid, values)
}

/// Binary PGM with values rounded and clamped to `0..=255`.
pub fn image_to_pgm(grid: Grid, values: &[f64]) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", grid.m(), grid.n()).into_bytes();
    out.extend(values.iter().map(|v| v.round().clamp(0.0, 255.0) as u8));
    out
}

pub fn image_from_pgm<V: Value>(bytes: &[u8]) -> Result<GridImage<V>> {
    // Header: magic, width, height, maxval, separated by whitespace; comments start with '#'.
    let mut fields = Vec::new();
    let mut i = 0;
    while fields.len() < 4 {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if start == i {
            return Err(parse_err("truncated PGM header"));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
    }
    if fields[0] != "P5" {
        return Err(parse_err("only binary PGM (P5) is supported"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(format!("bad PGM header field {s:?}")));
    let (m, n, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
    if maxval > 255 {
        return Err(parse_err("16-bit PGM is not supported"));
    }
    let data = &bytes[(i + 1).min(bytes.len())..];
    let grid = Grid::new(m, n)?;
    if data.len() < grid.area() {
        return Err(parse_err("truncated PGM data"));
    }
    GridImage::from_values(grid, data[..grid.area()].iter().map(|&b| V::from_i64(b as i64)).collect())
}

/// Plain PBM of a row-major mask.
pub fn mask_to_pbm(grid: Grid, mask: &[bool]) -> String {
    let mut out = format!("P1\n{} {}\n", grid.m(), grid.n());
    for row in mask.chunks(grid.m()) {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn free_values_from_json<V: Value>(text: &str) -> Result<BTreeMap<(usize, usize), V>> {
    let doc: Map<String, Json> = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let mut out = BTreeMap::new();
    for (key, v) in &doc {
        let (p, q) = key.split_once(',').ok_or_else(|| parse_err(format!("free value key {key:?} is not \"p,q\"")))?;
        let p = p.trim().parse().map_err(|_| parse_err(format!("bad key {key:?}")))?;
        let q = q.trim().parse().map_err(|_| parse_err(format!("bad key {key:?}")))?;
        out.insert((p, q), value_from_json(v)?);
    }
    Ok(out)
}

pub fn free_values_to_json<V: Value>(free: &BTreeMap<(usize, usize), V>) -> String {
    let map: Map<String, Json> = free.iter().map(|(&(p, q), v)| (format!("{p},{q}"), value_to_json(v))).collect();
    serde_json::to_string_pretty(&Json::Object(map)).expect("plain data")
}
