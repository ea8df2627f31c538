//! Delimited text formats: cheque lists and failure probabilities.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::Path;

use chequenet_core::{Cheque, CollateralNetwork, CustomerId};
use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::snapshot;

pub const CHEQUE_HEADER: [&str; 6] = [
    "cheque_id",
    "issuer_id",
    "recipient_id",
    "value_cents",
    "issue_date",
    "maturity_date",
];

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(false)
        .from_reader(input)
}

fn csv_error(origin: &str, err: csv::Error) -> Error {
    match err.position() {
        Some(pos) => Error::Record {
            origin: origin.to_string(),
            line: pos.line(),
            message: err.to_string(),
        },
        None => Error::Format {
            origin: origin.to_string(),
            message: err.to_string(),
        },
    }
}

fn column(headers: &csv::StringRecord, name: &str, origin: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::Format {
            origin: origin.to_string(),
            message: format!("missing column `{name}`"),
        })
}

fn parse_date(raw: &str, what: &str) -> std::result::Result<Option<String>, String> {
    if raw.is_empty() {
        return Ok(None);
    }
    NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .map(|d| Some(d.format("%Y-%m-%d").to_string()))
        .map_err(|_| format!("{what} `{raw}` is not an ISO-8601 date (YYYY-MM-DD)"))
}

/// Reads `cheque_id,issuer_id,recipient_id,value_cents,issue_date,maturity_date`.
/// The date columns may be absent or empty. Diagnostics carry the line number.
pub fn read_cheques<R: Read>(input: R, origin: &str) -> Result<Vec<Cheque>> {
    let mut rdr = reader(input);
    let headers = rdr.headers().map_err(|e| csv_error(origin, e))?.clone();
    if headers.is_empty() {
        return Err(Error::Format {
            origin: origin.to_string(),
            message: "empty network: no cheque records".into(),
        });
    }
    let id_col = column(&headers, "cheque_id", origin)?;
    let issuer_col = column(&headers, "issuer_id", origin)?;
    let recipient_col = column(&headers, "recipient_id", origin)?;
    let value_col = column(&headers, "value_cents", origin)?;
    let issue_col = headers.iter().position(|h| h == "issue_date");
    let maturity_col = headers.iter().position(|h| h == "maturity_date");

    let mut first_seen: HashMap<String, u64> = HashMap::new();
    let mut cheques = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(origin, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Record {
            origin: origin.to_string(),
            line,
            message,
        };
        let field = |ix: usize| record.get(ix).unwrap_or("");
        let (id, issuer, recipient) = (field(id_col), field(issuer_col), field(recipient_col));
        for (name, value) in [
            ("cheque_id", id),
            ("issuer_id", issuer),
            ("recipient_id", recipient),
        ] {
            if value.is_empty() {
                return Err(bad(format!("{name} is empty")));
            }
        }
        let raw_value = field(value_col);
        let value: i64 = raw_value
            .parse()
            .map_err(|_| bad(format!("value_cents `{raw_value}` is not an integer")))?;
        if value <= 0 {
            return Err(bad(format!("value_cents must be positive, got {value}")));
        }
        if issuer == recipient {
            return Err(bad(format!("issuer and recipient are both `{issuer}`")));
        }
        if let Some(prev) = first_seen.insert(id.to_string(), line) {
            return Err(bad(format!(
                "duplicate cheque id `{id}` (first on line {prev})"
            )));
        }
        let mut cheque = Cheque::new(id, issuer, recipient, value);
        cheque.issue_date = parse_date(issue_col.map_or("", field), "issue_date").map_err(bad)?;
        cheque.maturity_date =
            parse_date(maturity_col.map_or("", field), "maturity_date").map_err(bad)?;
        cheques.push(cheque);
    }
    if cheques.is_empty() {
        return Err(Error::Format {
            origin: origin.to_string(),
            message: "empty network: no cheque records".into(),
        });
    }
    Ok(cheques)
}

pub fn write_cheques<W: Write>(out: W, cheques: &[Cheque]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let fail = |e: csv::Error| Error::Format {
        origin: "output".into(),
        message: e.to_string(),
    };
    w.write_record(CHEQUE_HEADER).map_err(fail)?;
    for c in cheques {
        let value = c.value_cents.to_string();
        w.write_record([
            c.cheque_id.as_str(),
            c.issuer.as_str(),
            c.recipient.as_str(),
            value.as_str(),
            c.issue_date.as_deref().unwrap_or(""),
            c.maturity_date.as_deref().unwrap_or(""),
        ])
        .map_err(fail)?;
    }
    w.flush().map_err(|e| Error::io("output", e))
}

/// Reads `customer_id,p`.
pub fn read_probabilities<R: Read>(input: R, origin: &str) -> Result<BTreeMap<CustomerId, f64>> {
    let mut rdr = reader(input);
    let headers = rdr.headers().map_err(|e| csv_error(origin, e))?.clone();
    let id_col = column(&headers, "customer_id", origin)?;
    let p_col = column(&headers, "p", origin)?;
    let mut out = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(origin, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Record {
            origin: origin.to_string(),
            line,
            message,
        };
        let id = record.get(id_col).unwrap_or("");
        let raw = record.get(p_col).unwrap_or("");
        let p: f64 = raw
            .parse()
            .map_err(|_| bad(format!("p `{raw}` is not a number")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(bad(format!("p must lie in [0, 1], got {raw}")));
        }
        if out.insert(CustomerId::from(id), p).is_some() {
            return Err(bad(format!("duplicate customer `{id}`")));
        }
    }
    Ok(out)
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Loads a JSON snapshot (by `.json` extension) or a cheque CSV.
pub fn load_network(path: &Path) -> Result<CollateralNetwork> {
    let origin = path.display().to_string();
    let text = read_file(path)?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        snapshot::from_json(&text, &origin)
    } else {
        let cheques = read_cheques(text.as_bytes(), &origin)?;
        Ok(CollateralNetwork::from_cheques(&cheques)?)
    }
}
