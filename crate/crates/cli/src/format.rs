//! Text formats used by the command-line interface.
//!
//! All files are plain UTF-8 text. Everything after a `#` on a line is a
//! comment, and blank lines are ignored. Four formats live here:
//!
//! * **Datasets** — one box per line: the `2d` coordinates `lo1 hi1 ... lod
//!   hid`, optionally followed by `2d` closure flags (`1` = endpoint included,
//!   `0` = excluded) in the same order. When the flags are omitted every
//!   interval defaults to open below and closed above. Infinite endpoints are
//!   written `inf` / `-inf`. The dimension comes from a leading `dim <d>`
//!   header or from the `--dim` flag.
//! * **Reductions** — the output of `reduce`: a `dim <d>` header, then one
//!   maximal intersection per line as coordinates, closure flags, a colon, and
//!   the 1-based indices of the boxes containing it. `--canonical` appends
//!   ` | ` and the canonical integer coordinates.
//! * **Containment matrices** — either the *support* format (`cliques <m>
//!   <n>` header, then row `j: i1 i2 ...` listing 1-based box indices) or the
//!   *dense* format (`m` comma-separated rows of `n` zeros and ones).
//! * **Fixtures** — expected canonical output for `check --expect`: one line
//!   per region, `lo1 hi1 ... lod hid : i1 i2 ...` in canonical integers with
//!   1-based box indices.
//!
//! Numeric literals on dataset lines keep their exact spelling: `reduce`
//! echoes back `2.50` rather than `2.5`. Only the tokens `inf` / `-inf` (or
//! `infinity`) denote infinities; literals that merely overflow, such as
//! `1e999`, are rejected, as is `nan`.

use std::fmt;
use std::io::Read;

use boxreduce::{
    AxisInterval, CanonicalMaximal, CliqueMatrix, ExtReal, MaximalIntersection, ObservationBox,
};
use thiserror::Error;

/// Failures surfaced to the user, each mapped to a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Reading or writing a file failed. Exit code 1.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// A file is malformed: bad tokens, wrong token counts, bad headers.
    /// Exit code 3.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    /// The input parsed but is semantically invalid (empty intervals,
    /// nested containment rows, bad mass vectors, ...). Exit code 4.
    #[error("{0}")]
    Validation(String),
    /// The exhaustive reference refused the instance as too large.
    /// Exit code 5.
    #[error("{0}")]
    OracleRefused(String),
    /// A cross-check found two reductions that disagree. Exit code 6.
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    /// The process exit code this error maps to. Code 2 is reserved for
    /// command-line usage errors, which the argument parser reports itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } => 3,
            CliError::Validation(_) => 4,
            CliError::OracleRefused(_) => 5,
            CliError::Mismatch(_) => 6,
        }
    }
}

/// A finite numeric literal that remembers exactly how it was written, so
/// output can echo the user's spelling (`2.50` stays `2.50`).
///
/// Comparisons use only the numeric value; `1.0` and `1.00` are the same
/// coordinate written two ways.
#[derive(Clone, Debug)]
pub struct Literal {
    pub value: f64,
    pub text: String,
}

impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Literal {
    /// Parses one endpoint token. Infinity spellings become the infinite
    /// variants; anything else must parse as a *finite* float, so `nan` and
    /// overflowing literals like `1e999` are rejected.
    pub fn parse_endpoint(token: &str) -> Option<ExtReal<Literal>> {
        match token.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => return Some(ExtReal::PosInf),
            "-inf" | "-infinity" => return Some(ExtReal::NegInf),
            _ => {}
        }
        let value: f64 = token.parse().ok()?;
        if !value.is_finite() {
            return None;
        }
        Some(ExtReal::Finite(Literal {
            value,
            text: token.to_string(),
        }))
    }
}

/// A parsed dataset: the boxes plus the dimension they share.
#[derive(Debug)]
pub struct Dataset {
    pub dim: usize,
    pub boxes: Vec<ObservationBox<Literal>>,
}

/// Reads a file, or standard input when `path` is `-`.
pub fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|source| CliError::Io {
                path: "<stdin>".to_string(),
                source,
            })?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })
    }
}

/// Writes to a file, or standard output when `path` is `None`.
pub fn write_output(path: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_error(path: &str, line: usize, message: String) -> CliError {
    CliError::Parse {
        path: path.to_string(),
        line,
        message,
    }
}

/// Parses a dataset. The dimension is taken from `dim_flag` when given;
/// otherwise the file must start with a `dim <d>` header. When both are
/// present they must agree.
pub fn parse_dataset(
    text: &str,
    path: &str,
    dim_flag: Option<usize>,
) -> Result<Dataset, CliError> {
    let mut dim = dim_flag;
    let mut boxes: Vec<ObservationBox<Literal>> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let lineno = index + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let first = tokens.next().expect("non-empty line has a first token");
        if first == "dim" {
            if !boxes.is_empty() {
                return Err(parse_error(
                    path,
                    lineno,
                    "`dim` header must come before the data lines".to_string(),
                ));
            }
            let value = tokens.next().ok_or_else(|| {
                parse_error(path, lineno, "`dim` header is missing its value".to_string())
            })?;
            if tokens.next().is_some() {
                return Err(parse_error(
                    path,
                    lineno,
                    "`dim` header has trailing tokens".to_string(),
                ));
            }
            let d: usize = value.parse().map_err(|_| {
                parse_error(path, lineno, format!("bad dimension `{value}`"))
            })?;
            if d == 0 {
                return Err(parse_error(path, lineno, "dimension must be positive".to_string()));
            }
            if let Some(expected) = dim {
                if expected != d {
                    return Err(parse_error(
                        path,
                        lineno,
                        format!("header says dim {d} but the dimension was already set to {expected}"),
                    ));
                }
            }
            dim = Some(d);
            continue;
        }
        let d = dim.ok_or_else(|| {
            parse_error(
                path,
                lineno,
                "dimension unknown: pass --dim or start the file with `dim <d>`".to_string(),
            )
        })?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 * d && tokens.len() != 4 * d {
            return Err(parse_error(
                path,
                lineno,
                format!(
                    "expected {} coordinates (optionally followed by {} closure flags), got {} tokens",
                    2 * d,
                    2 * d,
                    tokens.len()
                ),
            ));
        }
        let mut endpoints = Vec::with_capacity(2 * d);
        for token in &tokens[..2 * d] {
            let endpoint = Literal::parse_endpoint(token).ok_or_else(|| {
                parse_error(path, lineno, format!("bad coordinate `{token}`"))
            })?;
            endpoints.push(endpoint);
        }
        let mut flags = Vec::with_capacity(2 * d);
        if tokens.len() == 4 * d {
            for token in &tokens[2 * d..] {
                let flag = match *token {
                    "0" => false,
                    "1" => true,
                    _ => {
                        return Err(parse_error(
                            path,
                            lineno,
                            format!("bad closure flag `{token}` (expected 0 or 1)"),
                        ))
                    }
                };
                flags.push(flag);
            }
        } else {
            for _ in 0..d {
                flags.push(false); // lower endpoint excluded
                flags.push(true); // upper endpoint included
            }
        }
        let mut axes = Vec::with_capacity(d);
        let mut endpoints = endpoints.into_iter();
        for a in 0..d {
            let lower = endpoints.next().expect("2d endpoints were parsed");
            let upper = endpoints.next().expect("2d endpoints were parsed");
            axes.push(AxisInterval {
                lower,
                lower_closed: flags[2 * a],
                upper,
                upper_closed: flags[2 * a + 1],
            });
        }
        let rect = ObservationBox::new(axes)
            .map_err(|e| CliError::Validation(format!("{path}:{lineno}: {e}")))?;
        boxes.push(rect);
    }
    let dim = dim.ok_or_else(|| {
        parse_error(
            path,
            1,
            "dimension unknown: pass --dim or start the file with `dim <d>`".to_string(),
        )
    })?;
    if boxes.is_empty() {
        return Err(CliError::Validation(format!(
            "{path}: dataset contains no boxes"
        )));
    }
    Ok(Dataset { dim, boxes })
}

fn push_axis<T: fmt::Display>(line: &mut String, interval: &AxisInterval<T>) {
    use fmt::Write;
    write!(line, "{} {} ", interval.lower, interval.upper).expect("writing to a String");
}

fn push_flags<T>(line: &mut String, intervals: &[AxisInterval<T>]) {
    for interval in intervals {
        line.push_str(if interval.lower_closed { "1 " } else { "0 " });
        line.push_str(if interval.upper_closed { "1" } else { "0" });
        line.push(' ');
    }
}

/// Renders boxes in the dataset format, including the `dim` header and
/// explicit closure flags, so the result parses back to the same boxes.
pub fn write_dataset<T: fmt::Display + boxreduce::Coordinate>(boxes: &[ObservationBox<T>]) -> String {
    let mut out = String::new();
    if let Some(first) = boxes.first() {
        out.push_str(&format!("dim {}\n", first.dim()));
    }
    for rect in boxes {
        let mut line = String::new();
        for interval in rect.axes() {
            push_axis(&mut line, interval);
        }
        push_flags(&mut line, rect.axes());
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn push_clique(line: &mut String, clique: &[usize]) {
    use fmt::Write;
    for (pos, index) in clique.iter().enumerate() {
        if pos > 0 {
            line.push(' ');
        }
        write!(line, "{}", index + 1).expect("writing to a String");
    }
}

/// Renders the output of `reduce`: one maximal intersection per line as real
/// coordinates, closure flags, and the 1-based clique. With `canonical` the
/// canonical integer coordinates are appended after a `|`.
pub fn write_reduction(
    maximal: &[MaximalIntersection<Literal>],
    dim: usize,
    canonical: bool,
) -> String {
    use fmt::Write;
    let mut out = format!("dim {dim}\n");
    for item in maximal {
        let mut line = String::new();
        for interval in item.real.axes() {
            push_axis(&mut line, interval);
        }
        push_flags(&mut line, item.real.axes());
        line.push_str(": ");
        push_clique(&mut line, &item.canonical.clique);
        if canonical {
            line.push_str(" |");
            for interval in &item.canonical.intervals {
                write!(line, " {} {}", interval.lo, interval.hi).expect("writing to a String");
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Renders a containment matrix in the support format: a `cliques <m> <n>`
/// header, then one row per region listing the 1-based boxes that contain it.
pub fn write_support_cliques(matrix: &CliqueMatrix) -> String {
    use fmt::Write;
    let mut out = format!("cliques {} {}\n", matrix.num_regions(), matrix.num_boxes());
    for row in 0..matrix.num_regions() {
        write!(out, "{}:", row + 1).expect("writing to a String");
        for col in matrix.row_support(row) {
            write!(out, " {}", col + 1).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

/// Renders a containment matrix as dense comma-separated 0/1 rows.
pub fn write_dense_cliques(matrix: &CliqueMatrix) -> String {
    let mut out = String::new();
    for row in 0..matrix.num_regions() {
        let cells: Vec<&str> = (0..matrix.num_boxes())
            .map(|col| if matrix.contains(row, col) { "1" } else { "0" })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Parses a containment matrix, auto-detecting the format: a `cliques`
/// header means the support format, anything else is dense 0/1 CSV.
pub fn parse_cliques(text: &str, path: &str) -> Result<CliqueMatrix, CliError> {
    let mut lines = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if !line.is_empty() {
            lines.push((index + 1, line));
        }
    }
    let Some(&(first_lineno, first)) = lines.first() else {
        return Err(parse_error(path, 1, "containment matrix file is empty".to_string()));
    };
    let rows = if first.split_whitespace().next() == Some("cliques") {
        parse_support_rows(&lines, first_lineno, first, path)?
    } else {
        parse_dense_rows(&lines, path)?
    };
    let n = rows.0;
    CliqueMatrix::from_rows(n, rows.1)
        .map_err(|e| CliError::Validation(format!("{path}: {e}")))
}

fn parse_support_rows(
    lines: &[(usize, &str)],
    header_lineno: usize,
    header: &str,
    path: &str,
) -> Result<(usize, Vec<Vec<usize>>), CliError> {
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 {
        return Err(parse_error(
            path,
            header_lineno,
            "expected header `cliques <m> <n>`".to_string(),
        ));
    }
    let m: usize = tokens[1].parse().map_err(|_| {
        parse_error(path, header_lineno, format!("bad row count `{}`", tokens[1]))
    })?;
    let n: usize = tokens[2].parse().map_err(|_| {
        parse_error(path, header_lineno, format!("bad column count `{}`", tokens[2]))
    })?;
    let body = &lines[1..];
    if body.len() != m {
        return Err(parse_error(
            path,
            header_lineno,
            format!("header promises {m} rows but the file has {}", body.len()),
        ));
    }
    let mut rows = Vec::with_capacity(m);
    for (position, &(lineno, line)) in body.iter().enumerate() {
        let (label, rest) = line.split_once(':').ok_or_else(|| {
            parse_error(path, lineno, "expected `<row>: <boxes>`".to_string())
        })?;
        let row_number: usize = label.trim().parse().map_err(|_| {
            parse_error(path, lineno, format!("bad row label `{}`", label.trim()))
        })?;
        if row_number != position + 1 {
            return Err(parse_error(
                path,
                lineno,
                format!("row label {row_number} out of order (expected {})", position + 1),
            ));
        }
        let mut row = Vec::new();
        for token in rest.split_whitespace() {
            let index: usize = token.parse().map_err(|_| {
                parse_error(path, lineno, format!("bad box index `{token}`"))
            })?;
            if index == 0 {
                return Err(parse_error(
                    path,
                    lineno,
                    "box indices are 1-based; 0 is not a valid index".to_string(),
                ));
            }
            row.push(index - 1);
        }
        rows.push(row);
    }
    Ok((n, rows))
}

fn parse_dense_rows(
    lines: &[(usize, &str)],
    path: &str,
) -> Result<(usize, Vec<Vec<usize>>), CliError> {
    let mut rows = Vec::with_capacity(lines.len());
    let mut n = 0usize;
    for (position, &(lineno, line)) in lines.iter().enumerate() {
        let mut row = Vec::new();
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if position == 0 {
            n = cells.len();
        } else if cells.len() != n {
            return Err(parse_error(
                path,
                lineno,
                format!("expected {n} columns, got {}", cells.len()),
            ));
        }
        for (col, cell) in cells.iter().enumerate() {
            match *cell {
                "0" => {}
                "1" => row.push(col),
                _ => {
                    return Err(parse_error(
                        path,
                        lineno,
                        format!("bad cell `{cell}` (expected 0 or 1)"),
                    ))
                }
            }
        }
        rows.push(row);
    }
    Ok((n, rows))
}

/// Parses a mass vector: whitespace-separated floats, comments allowed.
/// Semantic checks (non-negativity, the sum) are left to the caller.
pub fn parse_alpha(text: &str, path: &str) -> Result<Vec<f64>, CliError> {
    let mut masses = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let lineno = index + 1;
        for token in strip_comment(raw).split_whitespace() {
            let value: f64 = token.parse().map_err(|_| {
                parse_error(path, lineno, format!("bad mass `{token}`"))
            })?;
            masses.push(value);
        }
    }
    if masses.is_empty() {
        return Err(parse_error(path, 1, "mass vector file is empty".to_string()));
    }
    Ok(masses)
}

/// Parses a `check --expect` fixture: one region per line, canonical integer
/// coordinates before the colon, 1-based box indices after it.
pub fn parse_fixture(text: &str, path: &str) -> Result<Vec<CanonicalMaximal>, CliError> {
    let mut regions = Vec::new();
    let mut dim: Option<usize> = None;
    for (index, raw) in text.lines().enumerate() {
        let lineno = index + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (coords, clique_part) = line.split_once(':').ok_or_else(|| {
            parse_error(path, lineno, "expected `<coords> : <boxes>`".to_string())
        })?;
        let mut values = Vec::new();
        for token in coords.split_whitespace() {
            let value: u32 = token.parse().map_err(|_| {
                parse_error(path, lineno, format!("bad canonical coordinate `{token}`"))
            })?;
            values.push(value);
        }
        if values.is_empty() || values.len() % 2 != 0 {
            return Err(parse_error(
                path,
                lineno,
                format!("expected an even number of coordinates, got {}", values.len()),
            ));
        }
        let d = values.len() / 2;
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(parse_error(
                    path,
                    lineno,
                    format!("expected {expected} axes as on earlier lines, got {d}"),
                ));
            }
            Some(_) => {}
        }
        let mut intervals = Vec::with_capacity(d);
        for a in 0..d {
            let (lo, hi) = (values[2 * a], values[2 * a + 1]);
            if lo >= hi {
                return Err(parse_error(
                    path,
                    lineno,
                    format!("empty canonical interval ({lo}, {hi}]"),
                ));
            }
            intervals.push(boxreduce::CanonicalInterval::new(lo, hi));
        }
        let mut clique = Vec::new();
        for token in clique_part.split_whitespace() {
            let value: usize = token.parse().map_err(|_| {
                parse_error(path, lineno, format!("bad box index `{token}`"))
            })?;
            if value == 0 {
                return Err(parse_error(
                    path,
                    lineno,
                    "box indices are 1-based; 0 is not a valid index".to_string(),
                ));
            }
            clique.push(value - 1);
        }
        if clique.is_empty() {
            return Err(parse_error(path, lineno, "empty clique".to_string()));
        }
        clique.sort_unstable();
        clique.dedup();
        regions.push(CanonicalMaximal { intervals, clique });
    }
    if regions.is_empty() {
        return Err(parse_error(path, 1, "fixture file is empty".to_string()));
    }
    Ok(regions)
}

/// Formats one canonical region with its 1-based clique for diagnostics,
/// e.g. `(2,3]x(2,5] : 1 2`.
pub fn region_label(region: &CanonicalMaximal) -> String {
    use fmt::Write;
    let mut out = String::new();
    for (pos, interval) in region.intervals.iter().enumerate() {
        if pos > 0 {
            out.push('x');
        }
        write!(out, "({},{}]", interval.lo, interval.hi).expect("writing to a String");
    }
    out.push_str(" :");
    for index in &region.clique {
        write!(out, " {}", index + 1).expect("writing to a String");
    }
    out
}
