//! One-semigroup-per-line report files: JSONL and CSV.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apery::Profile;
use crate::semigroup::NumericalSemigroup;
use crate::wilf::{report, Flag, FlagSet, WilfError, WilfReport};

pub const CSV_HEADER: [&str; 15] = [
    "gaps", "m", "c", "q", "rho", "g", "e", "L", "PL", "Dq", "W", "W0", "Csize", "profile", "flags",
];

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Malformed { row: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Jsonl,
    Csv,
}

/// A report keyed by its gap set, so the line alone identifies the semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub gaps: Vec<u32>,
    #[serde(flatten)]
    pub report: WilfReport,
}

impl ReportRecord {
    pub fn new(s: &NumericalSemigroup) -> Result<Self, WilfError> {
        Ok(Self::from_parts(s, report(s)?))
    }

    pub fn from_parts(s: &NumericalSemigroup, report: WilfReport) -> Self {
        ReportRecord {
            gaps: s.gaps(),
            report,
        }
    }

    pub fn semigroup(&self) -> NumericalSemigroup {
        NumericalSemigroup::from_gaps(&self.gaps).expect("record gaps come from a semigroup")
    }

    /// Canonical order: genus first, then gap sets lexicographically.
    pub fn sort_key(&self) -> (u32, &[u32]) {
        (self.report.g, &self.gaps)
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn split_u32(field: &str, row: usize) -> Result<Vec<u32>, RecordError> {
    if field.is_empty() {
        return Ok(Vec::new());
    }
    field
        .split(';')
        .map(|x| {
            x.parse().map_err(|_| RecordError::Malformed {
                row,
                message: format!("bad integer {x:?}"),
            })
        })
        .collect()
}

pub fn write_jsonl<'a, W: Write>(
    out: &mut W,
    records: impl IntoIterator<Item = &'a ReportRecord>,
) -> Result<(), RecordError> {
    for r in records {
        serde_json::to_writer(&mut *out, r).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<ReportRecord>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| RecordError::Json {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(out)
}

/// Streaming CSV writer; the header is written on construction.
pub struct CsvReportWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvReportWriter<W> {
    pub fn new(out: W) -> Result<Self, RecordError> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(CSV_HEADER)?;
        Ok(CsvReportWriter { inner })
    }

    pub fn write(&mut self, rec: &ReportRecord) -> Result<(), RecordError> {
        let r = &rec.report;
        let row = [
            join(&rec.gaps),
            r.m.to_string(),
            r.c.to_string(),
            r.q.to_string(),
            r.rho.to_string(),
            r.g.to_string(),
            r.e.to_string(),
            r.left_count.to_string(),
            r.p_left_count.to_string(),
            r.dq_count.to_string(),
            r.w.to_string(),
            r.w0.to_string(),
            r.c_size.to_string(),
            join(r.profile.entries()),
            join(r.flags.iter().map(Flag::name)),
        ];
        self.inner.write_record(&row)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W, RecordError> {
        self.inner.flush()?;
        self.inner
            .into_inner()
            .map_err(|e| RecordError::Io(e.into_error()))
    }
}

pub fn write_csv<'a, W: Write>(
    out: W,
    records: impl IntoIterator<Item = &'a ReportRecord>,
) -> Result<W, RecordError> {
    let mut w = CsvReportWriter::new(out)?;
    for r in records {
        w.write(r)?;
    }
    w.finish()
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<ReportRecord>, RecordError> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(RecordError::Malformed {
            row: 0,
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let n = i + 1;
        let int = |k: usize| -> Result<i64, RecordError> {
            row[k].parse().map_err(|_| RecordError::Malformed {
                row: n,
                message: format!("bad {} value {:?}", CSV_HEADER[k], &row[k]),
            })
        };
        let small = |k: usize| -> Result<u32, RecordError> {
            u32::try_from(int(k)?).map_err(|_| RecordError::Malformed {
                row: n,
                message: format!("{} out of range", CSV_HEADER[k]),
            })
        };
        let flags = if row[14].is_empty() {
            FlagSet::default()
        } else {
            row[14]
                .split(';')
                .map(|f| {
                    Flag::from_name(f).ok_or_else(|| RecordError::Malformed {
                        row: n,
                        message: format!("unknown flag {f:?}"),
                    })
                })
                .collect::<Result<FlagSet, _>>()?
        };
        out.push(ReportRecord {
            gaps: split_u32(&row[0], n)?,
            report: WilfReport {
                m: small(1)?,
                c: small(2)?,
                q: small(3)?,
                rho: small(4)?,
                g: small(5)?,
                e: small(6)?,
                left_count: small(7)?,
                p_left_count: small(8)?,
                dq_count: small(9)?,
                w: int(10)?,
                w0: int(11)?,
                c_size: small(12)?,
                profile: Profile(split_u32(&row[13], n)?),
                flags,
            },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ReportRecord> {
        [
            NumericalSemigroup::naturals(),
            NumericalSemigroup::from_generators(&[2, 5]).unwrap(),
            NumericalSemigroup::from_generators_with_tail(&[7, 11], 25).unwrap(),
            NumericalSemigroup::from_generators_with_tail(&[14, 22, 23], 56).unwrap(),
        ]
        .iter()
        .map(|s| ReportRecord::new(s).unwrap())
        .collect()
    }

    #[test]
    fn jsonl_schema_and_round_trip() {
        let recs = sample();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let last = text.lines().last().unwrap();
        let v: serde_json::Value = serde_json::from_str(last).unwrap();
        let offsets: Vec<usize> = CSV_HEADER
            .iter()
            .map(|k| last.find(&format!("\"{k}\":")).unwrap())
            .collect();
        assert!(offsets.windows(2).all(|w| w[0] < w[1]), "key order {last}");
        assert_eq!(v.as_object().unwrap().len(), CSV_HEADER.len());
        assert_eq!(v["W0"], -1);
        assert_eq!(v["profile"], serde_json::json!([2, 0, 3]));
        assert!(text
            .lines()
            .next()
            .unwrap()
            .starts_with(r#"{"gaps":[],"m":1,"#));
        assert_eq!(read_jsonl(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn csv_round_trip() {
        let recs = sample();
        let buf = write_csv(Vec::new(), &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("gaps,m,c,q,rho,g,e,L,PL,Dq,W,W0,Csize,profile,flags\n"));
        assert!(text.contains(",-1,0,2;0;3,"));
        assert_eq!(read_csv(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn malformed_inputs() {
        assert!(read_jsonl(&b"{\"gaps\":[1]}\n"[..]).is_err());
        assert!(read_csv(&b"a,b\n1,2\n"[..]).is_err());
        let bad =
            "gaps,m,c,q,rho,g,e,L,PL,Dq,W,W0,Csize,profile,flags\n1,x,2,1,0,1,2,1,1,1,0,0,0,,\n";
        assert!(read_csv(bad.as_bytes()).is_err());
    }

    #[test]
    fn replay_from_gaps() {
        for r in sample() {
            assert_eq!(ReportRecord::new(&r.semigroup()).unwrap(), r);
        }
    }
}
