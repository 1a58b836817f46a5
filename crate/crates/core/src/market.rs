//! Matrix Market I/O: coordinate files for square sparse matrices, array
//! files for dense vectors. Indices are 1-based on disk and 0-based in
//! memory; values are emitted with 17 significant digits so a write/read
//! round trip is exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::{DenseVector, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

struct Header {
    format: &'static str,
    symmetry: Symmetry,
}

fn parse_header(line: &str) -> std::result::Result<Header, String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "%%MatrixMarket" {
        return Err("expected '%%MatrixMarket matrix <format> <field> <symmetry>'".into());
    }
    if fields[1] != "matrix" {
        return Err(format!("unsupported object '{}'", fields[1]));
    }
    let format = match fields[2] {
        "coordinate" => "coordinate",
        "array" => "array",
        other => return Err(format!("unsupported format '{other}'")),
    };
    if fields[3] != "real" {
        return Err(format!("unsupported field '{}', only real", fields[3]));
    }
    let symmetry = match fields[4] {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(format!("unsupported symmetry '{other}'")),
    };
    Ok(Header { format, symmetry })
}

struct Lines<R: BufRead> {
    reader: R,
    line_no: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(reader: R) -> Self {
        Self { reader, line_no: 0 }
    }

    /// Next non-comment, non-empty line.
    fn next_data(&mut self) -> Result<Option<(usize, String)>> {
        let mut buf = String::new();
        loop {
            buf.clear();
            self.line_no += 1;
            if self.reader.read_line(&mut buf)? == 0 {
                return Ok(None);
            }
            let trimmed = buf.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            return Ok(Some((self.line_no, trimmed.to_string())));
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn read_header<R: BufRead>(lines: &mut Lines<R>, path: &Path) -> Result<Header> {
    lines.line_no += 1;
    let mut first = String::new();
    if lines.reader.read_line(&mut first)? == 0 {
        return Err(parse_err(1, format!("{}: empty file", path.display())));
    }
    parse_header(&first).map_err(|m| parse_err(1, m))
}

/// Read a square sparse matrix from a coordinate-format file. Symmetric
/// storage is expanded to the full pattern; duplicate coordinates are
/// summed.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let mut lines = Lines::new(BufReader::new(File::open(path)?));
    let header = read_header(&mut lines, path)?;
    if header.format != "coordinate" {
        return Err(parse_err(1, "matrix files must use coordinate format"));
    }

    let (size_line_no, size_line) = lines
        .next_data()?
        .ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(parse_err(size_line_no, "size line must be 'rows cols nnz'"));
    }
    let nrows: usize = dims[0]
        .parse()
        .map_err(|_| parse_err(size_line_no, "cannot parse row count"))?;
    let ncols: usize = dims[1]
        .parse()
        .map_err(|_| parse_err(size_line_no, "cannot parse column count"))?;
    let nnz: usize = dims[2]
        .parse()
        .map_err(|_| parse_err(size_line_no, "cannot parse entry count"))?;
    if nrows != ncols {
        return Err(parse_err(
            size_line_no,
            format!("matrix must be square, got {nrows} x {ncols}"),
        ));
    }
    if nrows == 0 {
        return Err(parse_err(size_line_no, "dimension must be positive"));
    }

    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        let (line_no, line) = lines
            .next_data()?
            .ok_or_else(|| parse_err(lines.line_no + 1, "unexpected end of entries"))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(line_no, "entry must be 'row col value'"));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(line_no, "cannot parse row index"))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(line_no, "cannot parse column index"))?;
        let v: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(line_no, "cannot parse value"))?;
        if i == 0 || i > nrows || j == 0 || j > ncols {
            return Err(parse_err(
                line_no,
                format!("index ({i}, {j}) outside 1..={nrows}"),
            ));
        }
        if !v.is_finite() {
            return Err(parse_err(line_no, format!("non-finite value {v}")));
        }
        entries.push((i - 1, j - 1, v));
        if header.symmetry == Symmetry::Symmetric && i != j {
            entries.push((j - 1, i - 1, v));
        }
    }
    if lines.next_data()?.is_some() {
        return Err(parse_err(lines.line_no, "more entries than declared"));
    }

    SparseMatrix::from_triplets(nrows, ncols, &entries)
}

/// Write a matrix as general coordinate format with 17 significant digits.
pub fn write_matrix_market(a: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(out, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for (i, j, v) in a.iter() {
        writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v)?;
    }
    out.flush()?;
    Ok(())
}

/// Read a dense vector, either from a Matrix Market array file (n x 1) or
/// from bare one-value-per-line text.
pub fn read_vector(path: impl AsRef<Path>) -> Result<DenseVector> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut lines = Lines::new(reader);

    lines.line_no += 1;
    let mut first = String::new();
    if lines.reader.read_line(&mut first)? == 0 {
        return Err(parse_err(1, format!("{}: empty file", path.display())));
    }

    let mut values = Vec::new();
    let mut declared: Option<usize> = None;
    if first.trim_start().starts_with("%%MatrixMarket") {
        let header = parse_header(&first).map_err(|m| parse_err(1, m))?;
        if header.format != "array" {
            return Err(parse_err(1, "vector files must use array format"));
        }
        let (size_line_no, size_line) = lines
            .next_data()?
            .ok_or_else(|| parse_err(2, "missing size line"))?;
        let dims: Vec<&str> = size_line.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(parse_err(size_line_no, "size line must be 'rows cols'"));
        }
        let n: usize = dims[0]
            .parse()
            .map_err(|_| parse_err(size_line_no, "cannot parse row count"))?;
        let cols: usize = dims[1]
            .parse()
            .map_err(|_| parse_err(size_line_no, "cannot parse column count"))?;
        if cols != 1 {
            return Err(parse_err(size_line_no, "vector must have one column"));
        }
        declared = Some(n);
    } else {
        let trimmed = first.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('%') {
            let v: f64 = trimmed
                .parse()
                .map_err(|_| parse_err(1, "cannot parse value"))?;
            values.push(v);
        }
    }

    while let Some((line_no, line)) = lines.next_data()? {
        let v: f64 = line
            .parse()
            .map_err(|_| parse_err(line_no, "cannot parse value"))?;
        if !v.is_finite() {
            return Err(parse_err(line_no, format!("non-finite value {v}")));
        }
        values.push(v);
    }
    if let Some(n) = declared {
        if values.len() != n {
            return Err(parse_err(
                lines.line_no,
                format!("declared {n} values, found {}", values.len()),
            ));
        }
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "vector values",
        });
    }
    Ok(values)
}

/// Write a dense vector as a Matrix Market array file.
pub fn write_vector(v: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "%%MatrixMarket matrix array real general")?;
    writeln!(out, "{} 1", v.len())?;
    for x in v {
        writeln!(out, "{x:.16e}")?;
    }
    out.flush()?;
    Ok(())
}
