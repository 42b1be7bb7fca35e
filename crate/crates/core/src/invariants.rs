//! CCZ-invariant machinery: the generator matrix of the associated code,
//! the incidence matrix of the design built from all translates of the graph,
//! its GF(2) rank (the Γ-rank) and code exports for external tools.
//!
//! Points and blocks are indexed by bit concatenation with the first
//! coordinate in the high bits: point `(x, y)` is column `(x << n) | y` and
//! block `(a, b)` is row `(a << n) | b`.

use std::io::{BufRead, Write};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bitlinalg::{matrix_bytes, BitLinAlgError, BitMatrix, MemoryBudget, StreamingRank};
use crate::vbf::FunctionTable;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error(transparent)]
    LinAlg(#[from] BitLinAlgError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("code parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    InCore,
    OutOfCore,
}

impl RankMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMethod::InCore => "in-core",
            RankMethod::OutOfCore => "out-of-core",
        }
    }
}

/// How `gamma_rank` chooses its elimination engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// In-core when the matrix fits the budget, otherwise streaming with a warning.
    Auto,
    /// In-core or a budget error.
    InCore,
    /// Streaming elimination; the matrix is never materialized.
    OutOfCore,
}

#[derive(Clone, Debug)]
pub struct GammaRankReport {
    /// Descriptor of the function, as supplied by the caller.
    pub function: String,
    pub n: u32,
    pub gamma_rank: usize,
    pub matrix_dims: (usize, usize),
    pub elapsed: Duration,
    pub method: RankMethod,
    /// Set when `Auto` had to fall back to streaming.
    pub warning: Option<String>,
}

/// Generator matrix of the associated binary code: an all-ones row, then the
/// n bits of each input, then the n bits of its image (least significant bit
/// first). Column 0 is the input 0, column j >= 1 is the input u^j for the
/// field's primitive u, so the last column is u^(2^n - 1) = 1.
pub fn code_matrix(f: &FunctionTable) -> BitMatrix {
    let field = f.field();
    let n = f.n() as usize;
    let len = field.size();
    let mut m = BitMatrix::zeros(2 * n + 1, len);
    for j in 0..len {
        let x = if j == 0 {
            crate::gf2n::FieldElement::ZERO
        } else {
            field.prim_pow(j as i64)
        };
        let y = f.at(x);
        m.set(0, j, true);
        for k in 0..n {
            m.set(1 + k, j, (x.bits() >> k) & 1 == 1);
            m.set(1 + n + k, j, (y.bits() >> k) & 1 == 1);
        }
    }
    m
}

/// Set columns of incidence row `row`: the block `{(z + a, f(z) + b)}`.
pub fn incidence_row(f: &FunctionTable, row: usize) -> impl Iterator<Item = usize> + '_ {
    let n = f.n();
    let mask = (1usize << n) - 1;
    let a = row >> n;
    let b = row & mask;
    f.lut()
        .iter()
        .enumerate()
        .map(move |(z, &fz)| ((z ^ a) << n) | (fz as usize ^ b))
}

pub fn incidence_matrix(f: &FunctionTable, budget: &MemoryBudget) -> Result<BitMatrix, InvariantError> {
    let dim = 1usize << (2 * f.n());
    Ok(BitMatrix::build(dim, dim, budget, |r| incidence_row(f, r))?)
}

/// Γ-rank with the budget from the environment.
pub fn gamma_rank(f: &FunctionTable, function: &str, mode: RankMode) -> Result<GammaRankReport, InvariantError> {
    gamma_rank_with_budget(f, function, mode, &MemoryBudget::effective())
}

pub fn gamma_rank_with_budget(
    f: &FunctionTable,
    function: &str,
    mode: RankMode,
    budget: &MemoryBudget,
) -> Result<GammaRankReport, InvariantError> {
    let dim = 1usize << (2 * f.n());
    let needed = matrix_bytes(dim, dim);
    let start = Instant::now();
    let (method, warning) = match mode {
        RankMode::InCore => (RankMethod::InCore, None),
        RankMode::OutOfCore => (RankMethod::OutOfCore, None),
        RankMode::Auto if budget.check(needed).is_ok() => (RankMethod::InCore, None),
        RankMode::Auto => (
            RankMethod::OutOfCore,
            Some(format!(
                "incidence matrix needs {needed} bytes, over the {} byte budget; using out-of-core elimination",
                budget.bytes()
            )),
        ),
    };
    let gamma_rank = match method {
        RankMethod::InCore => incidence_matrix(f, budget)?.rank(),
        RankMethod::OutOfCore => {
            let mut acc = StreamingRank::new(dim);
            for r in 0..dim {
                acc.push_row(incidence_row(f, r))?;
            }
            acc.rank()
        }
    };
    Ok(GammaRankReport {
        function: function.to_string(),
        n: f.n(),
        gamma_rank,
        matrix_dims: (dim, dim),
        elapsed: start.elapsed(),
        method,
        warning,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeFormat {
    PlainBits,
    Script,
}

/// Writes the code generator matrix. `PlainBits` is one 0/1 line per row;
/// `Script` wraps the same rows in a computer-algebra template.
pub fn export_code<W: Write>(f: &FunctionTable, mut out: W, format: CodeFormat) -> Result<(), InvariantError> {
    let m = code_matrix(f);
    let rows: Vec<String> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| if m.get(r, c) { '1' } else { '0' }).collect())
        .collect();
    match format {
        CodeFormat::PlainBits => {
            for row in &rows {
                writeln!(out, "{row}")?;
            }
        }
        CodeFormat::Script => {
            writeln!(out, "// {}", f.field().header())?;
            writeln!(out, "F := GF(2);")?;
            writeln!(out, "V := VectorSpace(F, {});", m.cols())?;
            writeln!(out, "G := [")?;
            for (i, row) in rows.iter().enumerate() {
                let entries: Vec<String> = row.chars().map(|c| c.to_string()).collect();
                let sep = if i + 1 == rows.len() { "" } else { "," };
                writeln!(out, "  V![{}]{sep}", entries.join(","))?;
            }
            writeln!(out, "];")?;
            writeln!(out, "C := LinearCode(sub<V | G>);")?;
        }
    }
    Ok(())
}

/// Parses the plain-bits format back into a matrix.
pub fn parse_plain_bits<R: BufRead>(r: R) -> Result<BitMatrix, InvariantError> {
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(InvariantError::Parse {
                    line: i + 1,
                    msg: format!("unexpected character {c:?}"),
                }),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        if rows.first().is_some_and(|f| f.len() != row.len()) {
            return Err(InvariantError::Parse {
                line: i + 1,
                msg: "ragged row".into(),
            });
        }
        rows.push(row);
    }
    Ok(BitMatrix::from_bools(&rows))
}
