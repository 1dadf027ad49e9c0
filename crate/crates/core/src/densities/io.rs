//! CSV and JSON density files.
//!
//! CSV: header `x,value[,weight]`, weight defaults to 1.
//! JSON: `{"support": [...], "values": [...], "weights": [...]}`, weights optional.
//! Floats are written in shortest round-trip form, so save → load is lossless.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Number, Value};

use super::DiscreteDensity;
use crate::error::{Error, Result};
use crate::scalar::{to_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityFormat {
    Csv,
    Json,
}

impl DensityFormat {
    /// Format implied by a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }
}

impl FromStr for DensityFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Parse(format!("unknown density format {:?}", other))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions<T> {
    /// Raise values below `eps` to `eps` instead of rejecting them.
    pub clamp_eps: Option<T>,
}

#[derive(Debug, Clone)]
pub struct Loaded<T: Scalar> {
    pub density: DiscreteDensity<T>,
    /// Number of values raised to the clamp floor.
    pub clamped: usize,
}

pub fn load_density<T: Scalar>(
    path: impl AsRef<Path>,
    format: DensityFormat,
    opts: LoadOptions<T>,
) -> Result<Loaded<T>> {
    let text = fs::read_to_string(path)?;
    parse_density(&text, format, opts)
}

pub fn parse_density<T: Scalar>(
    text: &str,
    format: DensityFormat,
    opts: LoadOptions<T>,
) -> Result<Loaded<T>> {
    let (support, raw, weights) = match format {
        DensityFormat::Csv => parse_csv(text)?,
        DensityFormat::Json => parse_json(text)?,
    };
    let mut clamped = 0;
    let mut values = Vec::with_capacity(raw.len());
    for (i, v) in raw.into_iter().enumerate() {
        match opts.clamp_eps {
            Some(eps) if !(v >= eps) => {
                clamped += 1;
                values.push(eps);
            }
            _ => {
                if !(v > T::zero()) {
                    return Err(Error::NonPositiveValue { row: i + 1 });
                }
                values.push(v);
            }
        }
    }
    let density = DiscreteDensity::new(support, values, weights)?;
    Ok(Loaded { density, clamped })
}

fn parse_scalar<T: Scalar>(s: &str, row: usize, col: &str) -> Result<T> {
    let v: T = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("row {}: bad {} {:?}", row, col, s)))?;
    if v.is_nan() {
        return Err(Error::Parse(format!("row {}: {} is NaN", row, col)));
    }
    Ok(v)
}

type Columns<T> = (Vec<String>, Vec<T>, Vec<T>);

fn parse_csv<T: Scalar>(text: &str) -> Result<Columns<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let has_weight = match names.as_slice() {
        ["x", "value"] => false,
        ["x", "value", "weight"] => true,
        _ => {
            return Err(Error::Parse(format!(
                "expected header x,value[,weight], got {}",
                names.join(",")
            )))
        }
    };
    let (mut support, mut values, mut weights) = (Vec::new(), Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let expected = if has_weight { 3 } else { 2 };
        if record.len() != expected {
            return Err(Error::Parse(format!(
                "row {}: expected {} fields",
                row, expected
            )));
        }
        support.push(record[0].to_string());
        values.push(parse_scalar(&record[1], row, "value")?);
        weights.push(if has_weight {
            parse_scalar(&record[2], row, "weight")?
        } else {
            T::one()
        });
    }
    Ok((support, values, weights))
}

fn json_scalar<T: Scalar>(v: &Value, row: usize, col: &str) -> Result<T> {
    v.as_f64()
        .and_then(T::from_f64)
        .ok_or_else(|| Error::Parse(format!("{}[{}] is not a number", col, row - 1)))
}

fn parse_json<T: Scalar>(text: &str) -> Result<Columns<T>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let array = |key: &str| -> Result<Option<&Vec<Value>>> {
        match doc.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Array(a)) => Ok(Some(a)),
            Some(_) => Err(Error::Parse(format!("{:?} must be an array", key))),
        }
    };
    let values_raw = array("values")?.ok_or_else(|| Error::Parse("missing \"values\"".into()))?;
    let support = match array("support")? {
        Some(labels) => labels
            .iter()
            .map(|l| match l {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                other => Err(Error::Parse(format!("bad support label {}", other))),
            })
            .collect::<Result<Vec<_>>>()?,
        None => (0..values_raw.len()).map(|i| i.to_string()).collect(),
    };
    let values = values_raw
        .iter()
        .enumerate()
        .map(|(i, v)| json_scalar(v, i + 1, "values"))
        .collect::<Result<Vec<T>>>()?;
    let weights = match array("weights")? {
        Some(w) => w
            .iter()
            .enumerate()
            .map(|(i, v)| json_scalar(v, i + 1, "weights"))
            .collect::<Result<Vec<T>>>()?,
        None => vec![T::one(); values.len()],
    };
    Ok((support, values, weights))
}

/// Serializes a density in the given format.
pub fn write_density<T: Scalar>(
    density: &DiscreteDensity<T>,
    format: DensityFormat,
) -> Result<String> {
    match format {
        DensityFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Parse(e.to_string());
            writer.write_record(["x", "value", "weight"]).map_err(io)?;
            for ((label, v), w) in density
                .support()
                .iter()
                .zip(density.values())
                .zip(density.weights())
            {
                writer
                    .write_record([label.clone(), v.to_string(), w.to_string()])
                    .map_err(io)?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| Error::Parse(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
        }
        DensityFormat::Json => {
            let num = |x: T| {
                Number::from_f64(to_f64(x))
                    .map(Value::Number)
                    .ok_or_else(|| Error::Parse(format!("non-finite value {}", x)))
            };
            let values = density
                .values()
                .iter()
                .map(|&v| num(v))
                .collect::<Result<Vec<_>>>()?;
            let weights = density
                .weights()
                .iter()
                .map(|&v| num(v))
                .collect::<Result<Vec<_>>>()?;
            let doc = json!({
                "support": density.support(),
                "values": values,
                "weights": weights,
            });
            serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

pub fn save_density<T: Scalar>(
    density: &DiscreteDensity<T>,
    path: impl AsRef<Path>,
    format: DensityFormat,
) -> Result<()> {
    fs::write(path, write_density(density, format)?)?;
    Ok(())
}
