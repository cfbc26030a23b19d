//! Text formats: permutations one per line, profiles as JSON, and two-column
//! CSV samples.
//!
//! Profile JSON maps each pattern string to its count as a decimal string,
//! so counts beyond 64 bits survive any JSON reader.

use std::io::Read;

use num_bigint::BigUint;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::perm::{patterns_of_size, Permutation, Profile};
use crate::stats::BivariateSample;

/// One permutation per nonempty line; `#` starts a comment line.
pub fn parse_permutations(text: &str) -> Result<Vec<Permutation>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

pub fn profile_to_json(profile: &Profile) -> Value {
    let mut map = Map::new();
    for (sigma, c) in profile.iter() {
        map.insert(sigma.to_pattern_string(), Value::String(c.to_string()));
    }
    Value::Object(map)
}

/// Inverse of [`profile_to_json`]; plain JSON integers are accepted too.
/// Patterns missing from the object count zero.
pub fn profile_from_json(value: &Value) -> Result<Profile> {
    let map = value.as_object().ok_or_else(|| Error::Format("profile must be a JSON object".into()))?;
    let k = map.keys().next().map_or(0, String::len);
    let patterns = patterns_of_size(k);
    let mut counts = vec![BigUint::default(); patterns.len()];
    for (key, v) in map {
        let sigma = Permutation::parse_pattern(key)?;
        if sigma.len() != k {
            return Err(Error::Format(format!("pattern {key} has size {}, expected {k}", sigma.len())));
        }
        let count = match v {
            Value::String(s) => s.parse::<BigUint>().ok(),
            Value::Number(n) => n.as_u64().map(BigUint::from),
            _ => None,
        }
        .ok_or_else(|| Error::Format(format!("count for {key} is not a nonnegative integer: {v}")))?;
        counts[sigma.lex_rank()] = count;
    }
    Ok(Profile::from_counts(k, counts))
}

/// Which CSV columns hold x and y, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CsvColumns {
    pub x: usize,
    pub y: usize,
}

impl Default for CsvColumns {
    fn default() -> Self {
        Self { x: 0, y: 1 }
    }
}

/// Reads a bivariate sample. A first row whose selected fields are not both
/// numbers is taken as a header and skipped.
pub fn read_csv_sample(reader: impl Read, columns: CsvColumns) -> Result<BivariateSample> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut pairs = Vec::new();
    for (row, record) in csv.records().enumerate() {
        let record = record.map_err(|e| Error::Format(format!("csv: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let field = |c: usize| -> Result<&str> {
            record
                .get(c)
                .ok_or_else(|| Error::Format(format!("row {} has no column {c}", row + 1)))
        };
        let (x, y) = (field(columns.x)?, field(columns.y)?);
        match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(x), Ok(y)) => pairs.push((x, y)),
            _ if row == 0 => continue,
            _ => return Err(Error::Format(format!("row {}: {x:?}, {y:?} are not both numbers", row + 1))),
        }
    }
    BivariateSample::new(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::k_profile_brute;

    #[test]
    fn permutation_lines() {
        let perms = parse_permutations("# two inputs\n2 3 6 4 7 5 1\n\n3,1,2\n").unwrap();
        assert_eq!(perms.len(), 2);
        assert_eq!(perms[1].to_pattern_string(), "312");
        assert!(parse_permutations("1 1").is_err());
        assert!(parse_permutations("1 x").is_err());
    }

    #[test]
    fn profile_round_trip() {
        let pi: Permutation = "2 3 6 4 7 5 1".parse().unwrap();
        let profile = k_profile_brute(&pi, 3).unwrap();
        let json = profile_to_json(&profile);
        assert_eq!(json["132"], Value::String("7".into()));
        assert_eq!(profile_from_json(&json).unwrap(), profile);
        let numeric: Value = serde_json::from_str(r#"{"12": 3, "21": "1"}"#).unwrap();
        assert_eq!(profile_from_json(&numeric).unwrap().counts(), &[BigUint::from(3u32), BigUint::from(1u32)]);
        assert!(profile_from_json(&serde_json::from_str(r#"{"12": -1}"#).unwrap()).is_err());
    }

    #[test]
    fn csv_headers_and_columns() {
        let with_header = "id,x,y\n1,0.1,5\n2,0.2,3\n3,0.3,4\n";
        let s = read_csv_sample(with_header.as_bytes(), CsvColumns { x: 1, y: 2 }).unwrap();
        assert_eq!(s.xs(), &[0.1, 0.2, 0.3]);
        assert_eq!(s.ys(), &[5.0, 3.0, 4.0]);
        let bare = read_csv_sample("1, 2\n3, 4\n".as_bytes(), CsvColumns::default()).unwrap();
        assert_eq!(bare.len(), 2);
        assert!(read_csv_sample("1,2\n3,oops\n".as_bytes(), CsvColumns::default()).is_err());
        assert!(read_csv_sample("1\n".as_bytes(), CsvColumns::default()).is_err());
        assert!(matches!(read_csv_sample("1,inf\n".as_bytes(), CsvColumns::default()), Err(Error::NonFinite)));
    }
}
