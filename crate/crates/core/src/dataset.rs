// SPDX-License-Identifier: Apache-2.0
//! `n × p` binary observation matrices and their CSV form
//! (a comment line, then one `0`/`1` row per sample).

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Leading comment of written datasets.
pub const DATA_HEADER: &str = "# mvbdag data v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryDataset {
    n: usize,
    p: usize,
    values: Vec<u8>,
}

impl BinaryDataset {
    /// Row-major `values`; every entry must be 0 or 1.
    pub fn new(p: usize, values: Vec<u8>) -> Result<Self> {
        if p == 0 {
            if !values.is_empty() {
                return Err(Error::InvalidInput("values given for zero columns".into()));
            }
            return Ok(BinaryDataset { n: 0, p, values });
        }
        if !values.len().is_multiple_of(p) {
            return Err(Error::InvalidInput(format!(
                "{} values do not fill rows of width {p}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|&v| v > 1) {
            return Err(Error::Domain(format!(
                "entry ({}, {}) is {}, expected 0 or 1",
                pos / p,
                pos % p,
                values[pos]
            )));
        }
        Ok(BinaryDataset { n: values.len() / p, p, values })
    }

    pub fn empty(p: usize) -> Self {
        BinaryDataset { n: 0, p, values: Vec::new() }
    }

    pub fn from_rows<R: AsRef<[u8]>>(p: usize, rows: &[R]) -> Result<Self> {
        let mut values = Vec::with_capacity(rows.len() * p);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != p {
                return Err(Error::InvalidInput(format!("row {i} has {} entries, expected {p}", r.len())));
            }
            values.extend_from_slice(r);
        }
        Self::new(p, values)
    }

    pub(crate) fn from_masks(p: usize, masks: &[Subset]) -> Self {
        let mut values = Vec::with_capacity(masks.len() * p);
        for m in masks {
            values.extend((0..p).map(|j| m.contains(j) as u8));
        }
        BinaryDataset { n: masks.len(), p, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.values.chunks_exact(self.p.max(1)).take(self.n)
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.values[i * self.p + j]
    }

    /// Set of ones in row `i`; requires `p ≤ 64`.
    pub fn row_subset(&self, i: usize) -> Subset {
        debug_assert!(self.p <= 64);
        self.row(i)
            .iter()
            .enumerate()
            .fold(Subset::EMPTY, |s, (j, &v)| if v == 1 { s.with(j) } else { s })
    }

    /// Distinct rows with their multiplicities, sorted by configuration index.
    pub fn config_counts(&self) -> Result<Vec<(Subset, usize)>> {
        if self.p > 64 {
            return Err(Error::Capacity { what: "row encoding", max: 64, got: self.p });
        }
        let mut counts: BTreeMap<Subset, usize> = BTreeMap::new();
        for i in 0..self.n {
            *counts.entry(self.row_subset(i)).or_default() += 1;
        }
        Ok(counts.into_iter().collect())
    }

    /// Sample mean of each column.
    pub fn column_means(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.p];
        for row in self.rows() {
            for (s, &v) in sums.iter_mut().zip(row) {
                *s += v as f64;
            }
        }
        sums.iter().map(|s| if self.n == 0 { 0.0 } else { s / self.n as f64 }).collect()
    }

    pub fn read_csv_from<R: Read>(reader: R, origin: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut p = None;
        let mut values = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse {
                path: origin.to_path_buf(),
                line: e.position().map(|pos| pos.line()).unwrap_or(0),
                msg: e.to_string(),
            })?;
            let line = rec.position().map(|pos| pos.line()).unwrap_or(0);
            if rec.iter().all(str::is_empty) {
                continue;
            }
            let width = *p.get_or_insert(rec.len());
            if rec.len() != width {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line,
                    msg: format!("{} fields, expected {width}", rec.len()),
                });
            }
            for field in rec.iter() {
                let v = match field {
                    "0" => 0,
                    "1" => 1,
                    other => {
                        return Err(Error::Parse {
                            path: origin.to_path_buf(),
                            line,
                            msg: format!("'{other}' is not 0 or 1"),
                        })
                    }
                };
                values.push(v);
            }
        }
        match p {
            Some(p) => Self::new(p, values),
            None => Err(Error::Parse { path: origin.to_path_buf(), line: 0, msg: "no rows".into() }),
        }
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv_from(std::io::BufReader::new(file), path)
    }

    /// One row per sample after a `# mvbdag data v1 p=<p> n=<n>` comment.
    pub fn write_csv_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{DATA_HEADER} p={} n={}", self.p, self.n)?;
        let mut line = String::with_capacity(2 * self.p);
        for row in self.rows() {
            line.clear();
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push(if *v == 1 { '1' } else { '0' });
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        w.flush()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        crate::io::write_atomic(path, |w| self.write_csv_to(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_binary() {
        assert!(matches!(BinaryDataset::new(2, vec![0, 1, 2, 0]), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_round_trip() {
        let d = BinaryDataset::from_rows(3, &[[1u8, 0, 1], [0, 0, 0]]).unwrap();
        let mut buf = Vec::new();
        d.write_csv_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "# mvbdag data v1 p=3 n=2\n1,0,1\n0,0,0\n");
        let back = BinaryDataset::read_csv_from(buf.as_slice(), Path::new("mem")).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn parse_error_carries_line_number() {
        let text = "0,1\n1,1\n1,x\n";
        match BinaryDataset::read_csv_from(text.as_bytes(), Path::new("d.csv")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn counts_group_rows() {
        let d = BinaryDataset::from_rows(2, &[[1u8, 0], [1, 0], [0, 1]]).unwrap();
        let c = d.config_counts().unwrap();
        assert_eq!(c, vec![(Subset::from_indices([0]), 2), (Subset::from_indices([1]), 1)]);
    }
}
