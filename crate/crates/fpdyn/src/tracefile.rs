//! Line-oriented trace files.
//!
//! ```text
//! fpdyn v1 m=2 n=2 matrix=identity:2 policy=scripted seed=none
//! # epoch 1 t=2 T=1 G=1
//! 1 1 2
//! 2 2 2
//! ```
//!
//! Strategy indices and step numbers are 1-based. Inline matrices add
//! `entries=` with `m*n` comma-separated rationals in row-major order.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::iter::Peekable;
use std::slice;

use fpdyn_core::schedule::{Annotation, Phase};
use fpdyn_core::trace::{MatrixDescriptor, TraceHeader};
use fpdyn_core::{Choice, Trace};
use num_rational::BigRational;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// A parsed trace plus what the comments said about it.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub trace: Trace,
    /// Number of `# epoch` comment lines seen.
    pub epoch_comments: usize,
}

pub fn format_header(header: &TraceHeader) -> String {
    let matrix = match &header.matrix {
        MatrixDescriptor::Identity(n) => format!("identity:{n}"),
        MatrixDescriptor::Inline(_) => "inline".to_string(),
    };
    let seed = header.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    let mut line = format!(
        "fpdyn v1 m={} n={} matrix={matrix} policy={} seed={seed}",
        header.rows, header.cols, header.policy
    );
    if let MatrixDescriptor::Inline(entries) = &header.matrix {
        let list: Vec<String> = entries.iter().map(|x| x.to_string()).collect();
        line.push_str(" entries=");
        line.push_str(&list.join(","));
    }
    line
}

pub fn format_annotation(a: &Annotation) -> String {
    match a {
        Annotation::EpochStart { epoch, t, big_t, gap } => format!("# epoch {epoch} t={t} T={big_t} G={gap}"),
        Annotation::PhaseStart { phase, t } => {
            let p = match phase {
                Phase::A => "A",
                Phase::B => "B",
            };
            format!("# phase {p} t={t}")
        }
    }
}

/// Writes a trace. Each annotation goes right after the step it is stamped with.
pub fn write_steps<W: Write>(
    w: &mut W,
    header: &TraceHeader,
    steps: impl IntoIterator<Item = Choice>,
    annotations: &[Annotation],
) -> io::Result<()> {
    fn flush<W: Write>(w: &mut W, t: u64, notes: &mut Peekable<slice::Iter<Annotation>>) -> io::Result<()> {
        while let Some(a) = notes.next_if(|a| a.t() <= t) {
            writeln!(w, "{}", format_annotation(a))?;
        }
        Ok(())
    }
    writeln!(w, "{}", format_header(header))?;
    let mut notes = annotations.iter().peekable();
    let mut t = 0u64;
    flush(w, t, &mut notes)?;
    for c in steps {
        t += 1;
        writeln!(w, "{t} {} {}", c.row + 1, c.col + 1)?;
        flush(w, t, &mut notes)?;
    }
    Ok(())
}

pub fn write_trace<W: Write>(w: &mut W, trace: &Trace) -> io::Result<()> {
    write_steps(w, &trace.header, trace.steps.iter().copied(), &[])
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ParseError> {
    value
        .parse()
        .map_err(|_| syntax(line, format!("{key}: expected a positive integer, got {value:?}")))
}

pub fn parse_header(text: &str) -> Result<TraceHeader, ParseError> {
    let mut tokens = text.split(' ');
    if tokens.next() != Some("fpdyn") || tokens.next() != Some("v1") {
        return Err(syntax(1, "header must start with \"fpdyn v1\""));
    }
    let mut fields = BTreeMap::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| syntax(1, format!("expected key=value, got {tok:?}")))?;
        if !matches!(k, "m" | "n" | "matrix" | "policy" | "seed" | "entries") {
            return Err(syntax(1, format!("unknown header field {k:?}")));
        }
        if fields.insert(k, v).is_some() {
            return Err(syntax(1, format!("duplicate header field {k:?}")));
        }
    }
    let get = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| syntax(1, format!("missing header field {k:?}")))
    };
    let rows = parse_usize(1, "m", get("m")?)?;
    let cols = parse_usize(1, "n", get("n")?)?;
    if rows == 0 || cols == 0 {
        return Err(syntax(1, "matrix dimensions must be positive"));
    }
    let policy = get("policy")?;
    if policy.is_empty() {
        return Err(syntax(1, "empty policy name"));
    }
    let seed = match get("seed")? {
        "none" => None,
        s => Some(
            s.parse()
                .map_err(|_| syntax(1, format!("seed: expected u64 or none, got {s:?}")))?,
        ),
    };
    let matrix = match get("matrix")? {
        "inline" => {
            let list = get("entries")?;
            let entries = list
                .split(',')
                .map(|x| {
                    x.parse::<BigRational>()
                        .map_err(|_| syntax(1, format!("bad matrix entry {x:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if entries.len() != rows * cols {
                return Err(syntax(
                    1,
                    format!("expected {} entries, got {}", rows * cols, entries.len()),
                ));
            }
            MatrixDescriptor::Inline(entries)
        }
        m => {
            let n = m
                .strip_prefix("identity:")
                .ok_or_else(|| syntax(1, format!("matrix: expected identity:<n> or inline, got {m:?}")))?;
            let n = parse_usize(1, "matrix", n)?;
            if n != rows || n != cols {
                return Err(syntax(1, format!("identity:{n} does not match m={rows} n={cols}")));
            }
            if fields.contains_key("entries") {
                return Err(syntax(1, "entries given for an identity matrix"));
            }
            MatrixDescriptor::Identity(n)
        }
    };
    Ok(TraceHeader {
        rows,
        cols,
        matrix,
        policy: policy.to_string(),
        seed,
    })
}

fn parse_step(line: usize, text: &str, expected_t: u64, rows: usize, cols: usize) -> Result<Choice, ParseError> {
    let parts: Vec<&str> = text.split(' ').collect();
    let [t, i, j] = parts[..] else {
        return Err(syntax(line, "expected \"<t> <i> <j>\""));
    };
    let num = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| syntax(line, format!("not a number: {s:?}")))
    };
    let t = num(t)?;
    if t != expected_t {
        return Err(syntax(line, format!("expected step {expected_t}, got {t}")));
    }
    let index = |s: &str, bound: usize, who: &str| -> Result<usize, ParseError> {
        let k = num(s)?;
        if k == 0 || k > bound as u64 {
            return Err(syntax(line, format!("{who} index {k} outside 1..={bound}")));
        }
        Ok(k as usize - 1)
    };
    Ok(Choice::new(index(i, rows, "row")?, index(j, cols, "column")?))
}

/// Next LF-terminated line without its terminator; rejects CR before LF.
fn next_line<R: BufRead>(r: &mut R, buf: &mut String, line: usize) -> Result<bool, ParseError> {
    buf.clear();
    if r.read_line(buf)? == 0 {
        return Ok(false);
    }
    if buf.ends_with('\n') {
        buf.pop();
    }
    if buf.ends_with('\r') {
        return Err(syntax(line, "CRLF line ending"));
    }
    Ok(true)
}

pub fn read_trace<R: BufRead>(mut r: R) -> Result<TraceFile, ParseError> {
    let mut text = String::new();
    if !next_line(&mut r, &mut text, 1)? {
        return Err(syntax(1, "empty file"));
    }
    let header = parse_header(&text)?;
    let mut steps = Vec::new();
    let mut epoch_comments = 0;
    let mut line = 1;
    loop {
        line += 1;
        if !next_line(&mut r, &mut text, line)? {
            break;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if comment.trim_start().starts_with("epoch") {
                epoch_comments += 1;
            }
            continue;
        }
        if text != text.trim() || text.is_empty() {
            return Err(syntax(line, "blank line or stray whitespace"));
        }
        steps.push(parse_step(
            line,
            &text,
            steps.len() as u64 + 1,
            header.rows,
            header.cols,
        )?);
    }
    Ok(TraceFile {
        trace: Trace::new(header, steps),
        epoch_comments,
    })
}
