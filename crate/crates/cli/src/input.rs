//! Parsing of GCM files, weight literals and root vectors.

use std::path::Path;

use kmq_core::rational::{self, Rational};
use kmq_core::{Error, Gcm, Result, RootVector, Weight};
use serde::Deserialize;
use serde_json::Value;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GcmFile {
    matrix: Vec<Vec<i64>>,
    #[serde(default)]
    symmetrizer: Option<Vec<Value>>,
}

fn rational_from_json(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(rational::int(i)),
            None => rational::parse(&n.to_string())
                .map_err(|_| Error::Parse(format!("{what}: {n} is not an integer; write fractions as \"p/q\""))),
        },
        Value::String(s) => rational::parse(s).map_err(|_| Error::Parse(format!("{what}: invalid rational {s:?}"))),
        other => Err(Error::Parse(format!("{what}: expected integer or \"p/q\" string, found {other}"))),
    }
}

pub fn parse_gcm_text(text: &str) -> Result<Gcm> {
    let file: GcmFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match file.symmetrizer {
        None => kmq_core::validate_gcm(file.matrix),
        Some(sym) => {
            let sym = sym
                .iter()
                .map(|v| rational_from_json(v, "symmetrizer"))
                .collect::<Result<Vec<_>>>()?;
            Gcm::with_symmetrizer(file.matrix, sym)
        }
    }
}

pub fn read_gcm(path: &Path) -> Result<Gcm> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_gcm_text(&text)
}

/// Accepts `{"coroot_values": [...], "d_value": r}`, the affine shorthand
/// `(α, h, n)` / `[α, h, n]` for rank-2 affine matrices, or a path to a file
/// holding either.
pub fn parse_weight(text: &str, gcm: &Gcm) -> Result<Weight> {
    let t = text.trim();
    if !t.starts_with(['{', '[', '(']) && Path::new(t).is_file() {
        let contents = std::fs::read_to_string(t).map_err(|e| Error::Parse(format!("cannot read {t}: {e}")))?;
        return parse_weight(&contents, gcm);
    }
    let w = if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        weight_from_object(&v)?
    } else {
        let inner = t.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let parts = inner
            .split(',')
            .map(|s| rational::parse(s.trim().trim_matches('"')))
            .collect::<Result<Vec<_>>>()?;
        let [a, h, n] = <[Rational; 3]>::try_from(parts)
            .map_err(|p| Error::Parse(format!("affine shorthand needs 3 entries (α, h, n), found {}", p.len())))?;
        if gcm.rank() != 2 || gcm.corank() != 1 {
            return Err(Error::Parse("the (α, h, n) shorthand applies to rank-2 affine matrices only".into()));
        }
        Weight::affine_triple(a, h, n)
    };
    gcm.check_weight(&w)?;
    Ok(w)
}

fn weight_from_object(v: &Value) -> Result<Weight> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("weight must be a JSON object".into()))?;
    for key in obj.keys() {
        if key != "coroot_values" && key != "d_value" {
            return Err(Error::Parse(format!("unknown weight field {key:?}")));
        }
    }
    let coroot = obj
        .get("coroot_values")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("coroot_values: missing or not an array".into()))?
        .iter()
        .map(|x| rational_from_json(x, "coroot_values"))
        .collect::<Result<Vec<_>>>()?;
    let scaling = match obj.get("d_value") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(xs)) => xs.iter().map(|x| rational_from_json(x, "d_value")).collect::<Result<Vec<_>>>()?,
        Some(x) => vec![rational_from_json(x, "d_value")?],
    };
    Ok(Weight::new(coroot, scaling))
}

/// `[1, 2]` or `1,2`.
pub fn parse_root(text: &str, gcm: &Gcm) -> Result<RootVector> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let coeffs = inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("invalid root coordinate {:?}", s.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    let beta = RootVector::new(coeffs);
    gcm.check_root(&beta)?;
    Ok(beta)
}
