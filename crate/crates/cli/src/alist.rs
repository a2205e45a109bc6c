//! MacKay's alist format for sparse parity-check matrices.
//!
//! ```text
//! n m
//! max_column_degree max_row_degree
//! column degrees (n values)
//! row degrees (m values)
//! n lines: 1-based row indices of each column
//! m lines: 1-based column indices of each row
//! ```
//!
//! Zero padding up to the maximum degree is accepted on read and never
//! written.

use std::fs;
use std::path::Path;

use syndrec_core::ldpc::SparseParityMatrix;

use crate::Error;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Alist {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as numbers, with its 1-based line number.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), Error> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| parse_err(i + 1, format!("expected an integer, found {tok:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((i + 1, nums));
        }
        Err(parse_err(self.last + 1, format!("unexpected end of file, expected {what}")))
    }

    fn exact(&mut self, count: usize, what: &str) -> Result<(usize, Vec<usize>), Error> {
        let (line, nums) = self.next_numbers(what)?;
        if nums.len() != count {
            return Err(parse_err(
                line,
                format!("expected {count} values for {what}, found {}", nums.len()),
            ));
        }
        Ok((line, nums))
    }
}

/// Reads an alist document.
pub fn parse(text: &str) -> Result<SparseParityMatrix, Error> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (_, dims) = lines.exact(2, "n m")?;
    let (n, m) = (dims[0], dims[1]);
    let (_, maxes) = lines.exact(2, "maximum degrees")?;
    let (max_col, max_row) = (maxes[0], maxes[1]);
    let (col_line, col_deg) = lines.exact(n, "column degrees")?;
    let (row_line, row_deg) = lines.exact(m, "row degrees")?;
    if col_deg.iter().copied().max().unwrap_or(0) > max_col {
        return Err(parse_err(col_line, "column degree exceeds the declared maximum"));
    }
    if row_deg.iter().copied().max().unwrap_or(0) > max_row {
        return Err(parse_err(row_line, "row degree exceeds the declared maximum"));
    }

    let mut read_lists = |count: usize, degrees: &[usize], bound: usize, what: &str| {
        let mut lists = Vec::with_capacity(count);
        for (k, &deg) in degrees.iter().enumerate() {
            let (line, nums) = lines.next_numbers(what)?;
            let entries: Vec<usize> = nums.iter().copied().filter(|&v| v != 0).collect();
            if nums[entries.len()..].iter().any(|&v| v != 0) {
                return Err(parse_err(line, "zero padding must come last"));
            }
            if entries.len() != deg {
                return Err(parse_err(
                    line,
                    format!("{what} {} has {} entries but degree {deg}", k + 1, entries.len()),
                ));
            }
            if let Some(&bad) = entries.iter().find(|&&v| v > bound) {
                return Err(parse_err(line, format!("index {bad} is out of range 1..={bound}")));
            }
            lists.push((line, entries.iter().map(|&v| v - 1).collect::<Vec<usize>>()));
        }
        Ok::<_, Error>(lists)
    };
    let cols = read_lists(n, &col_deg, m, "column")?;
    let rows = read_lists(m, &row_deg, n, "row")?;

    // Both halves must describe the same graph.
    let mut from_cols = vec![Vec::new(); m];
    for (i, (_, checks)) in cols.iter().enumerate() {
        for &j in checks {
            from_cols[j].push(i);
        }
    }
    for (j, (line, vars)) in rows.iter().enumerate() {
        let mut sorted = vars.clone();
        sorted.sort_unstable();
        if sorted != from_cols[j] {
            return Err(parse_err(
                *line,
                format!("row {} disagrees with the column lists", j + 1),
            ));
        }
    }
    let checks = rows.into_iter().map(|(_, vars)| vars).collect();
    SparseParityMatrix::from_checks(n, checks).map_err(|e| parse_err(1, e.to_string()))
}

/// Renders `matrix` as an alist document.
pub fn to_string(matrix: &SparseParityMatrix) -> String {
    let join = |v: &mut dyn Iterator<Item = usize>| -> String {
        v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", matrix.n(), matrix.m()));
    out.push_str(&format!(
        "{} {}\n",
        matrix.max_variable_degree(),
        matrix.max_check_degree()
    ));
    out.push_str(&join(&mut matrix.variables().map(<[usize]>::len)));
    out.push('\n');
    out.push_str(&join(&mut matrix.checks().map(<[usize]>::len)));
    out.push('\n');
    for col in matrix.variables() {
        out.push_str(&join(&mut col.iter().map(|&j| j + 1)));
        out.push('\n');
    }
    for row in matrix.checks() {
        out.push_str(&join(&mut row.iter().map(|&i| i + 1)));
        out.push('\n');
    }
    out
}

pub fn load(path: &Path) -> Result<SparseParityMatrix, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text).map_err(|e| e.in_file(path))
}

pub fn save(path: &Path, matrix: &SparseParityMatrix) -> Result<(), Error> {
    fs::write(path, to_string(matrix)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
