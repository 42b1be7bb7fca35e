//! Dense bit-packed GF(2) matrices and their rank.
//!
//! Rows are packed little-endian into `u64` words (column `j` is bit `j % 64`
//! of word `j / 64`) and padded to a whole number of words; padding bits are
//! always zero.
//!
//! Rank is computed by two cooperating engines, both checked against a
//! plain boolean elimination ([`BitMatrix::rank_reference`]):
//!
//! * Panel elimination ([`BitMatrix::rank_dense`]): pivots are searched
//!   inside a narrow panel of columns and kept reduced within it, then the
//!   trailing columns are updated with 8-row lookup tables (method of four
//!   Russians), one column chunk at a time so the tables stay cache resident.
//! * [`StreamingRank`]: rows arrive in batches and are reduced against a
//!   basis kept in reduced row echelon form. Each batch is then finished by
//!   panel elimination. Memory is proportional to rank x columns, not
//!   rows x columns, and the matrix never has to exist in memory.
//!
//! [`BitMatrix::rank`] streams the rows of a materialized matrix through
//! [`StreamingRank`], which is faster than the panel elimination on the
//! low-rank incidence matrices this crate targets.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

/// Default memory budget when `APNLAB_MEM_BUDGET_GIB` is unset.
pub const DEFAULT_BUDGET_GIB: f64 = 12.0;

pub const BUDGET_ENV: &str = "APNLAB_MEM_BUDGET_GIB";

#[derive(Debug, Error)]
pub enum BitLinAlgError {
    #[error("row {row}: column {col} out of range for {cols} columns")]
    ColumnOutOfRange { row: usize, col: usize, cols: usize },
    #[error("matrix needs {needed} bytes, budget is {budget} bytes")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("matrix dump parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Upper bound on bytes a single matrix may occupy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemoryBudget {
    bytes: u64,
}

impl MemoryBudget {
    pub fn from_gib(gib: f64) -> Self {
        MemoryBudget {
            bytes: (gib * (1u64 << 30) as f64) as u64,
        }
    }

    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    /// `APNLAB_MEM_BUDGET_GIB` when set and valid, otherwise 12 GiB.
    pub fn from_env() -> Self {
        let gib = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|g| *g > 0.0)
            .unwrap_or(DEFAULT_BUDGET_GIB);
        Self::from_gib(gib)
    }

    /// The configured budget, capped by the memory the OS reports available.
    pub fn effective() -> Self {
        let configured = Self::from_env();
        match available_memory_bytes() {
            Some(avail) if avail < configured.bytes => MemoryBudget { bytes: avail },
            _ => configured,
        }
    }

    pub fn check(&self, needed: u64) -> Result<(), BitLinAlgError> {
        if needed > self.bytes {
            Err(BitLinAlgError::BudgetExceeded {
                needed,
                budget: self.bytes,
            })
        } else {
            Ok(())
        }
    }
}

fn available_memory_bytes() -> Option<u64> {
    let text = std::fs::read_to_string("/proc/meminfo").ok()?;
    let line = text.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib * 1024)
}

#[inline]
pub fn words_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

/// Bytes needed to hold a `rows x cols` matrix.
pub fn matrix_bytes(rows: usize, cols: usize) -> u64 {
    rows as u64 * words_for(cols) as u64 * 8
}

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitMatrix({} x {})", self.rows, self.cols)
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Streams rows from `generator`, called once per row index in order and
    /// returning the set columns of that row.
    pub fn build<I, F>(
        rows: usize,
        cols: usize,
        budget: &MemoryBudget,
        mut generator: F,
    ) -> Result<Self, BitLinAlgError>
    where
        F: FnMut(usize) -> I,
        I: IntoIterator<Item = usize>,
    {
        budget.check(matrix_bytes(rows, cols))?;
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            let row = &mut m.data[r * m.stride..(r + 1) * m.stride];
            for c in generator(r) {
                if c >= cols {
                    return Err(BitLinAlgError::ColumnOutOfRange { row: r, col: c, cols });
                }
                row[c / 64] |= 1u64 << (c % 64);
            }
        }
        Ok(m)
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Words per row.
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        if v {
            *w |= 1u64 << (c % 64);
        } else {
            *w &= !(1u64 << (c % 64));
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// XOR row `src` into row `dst`.
    pub fn add_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.data[dst * self.stride..(dst + 1) * self.stride].fill(0);
            return;
        }
        let s = self.stride;
        let (d, sr) = if dst < src {
            let (a, b) = self.data.split_at_mut(src * s);
            (&mut a[dst * s..(dst + 1) * s], &b[..s])
        } else {
            let (a, b) = self.data.split_at_mut(dst * s);
            (&mut b[..s], &a[src * s..(src + 1) * s])
        };
        xor_into(d, sr);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        swap_row_range(&mut self.data, self.stride, a, b, 0);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let c = wi * 64 + bits.trailing_zeros() as usize;
                    t.data[c * t.stride + r / 64] |= 1u64 << (r % 64);
                    bits &= bits - 1;
                }
            }
        }
        t
    }

    /// GF(2) rank. Rows are fed in batches to [`StreamingRank`], so the
    /// extra memory is the basis plus one batch; the matrix is not modified.
    pub fn rank(&self) -> usize {
        let mut acc = StreamingRank::new(self.cols);
        for r in 0..self.rows {
            acc.push_words(self.row_words(r));
        }
        acc.rank()
    }

    /// Rank by panel elimination of a full copy of the matrix.
    pub fn rank_dense(&self) -> usize {
        let mut work = self.data.clone();
        echelonize(&mut work, self.rows, self.stride)
    }

    /// Rank by textbook elimination on a boolean matrix; the oracle every
    /// accelerated path is checked against.
    pub fn rank_reference(&self) -> usize {
        let mut m: Vec<Vec<bool>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect();
        naive_rank(&mut m)
    }

    /// Debug dump: `rows cols`, then one hex line per row with column 0 as
    /// the most significant bit of the first digit.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<(), BitLinAlgError> {
        writeln!(w, "{} {}", self.rows, self.cols)?;
        let digits = self.cols.div_ceil(4);
        let mut line = String::with_capacity(digits);
        for r in 0..self.rows {
            line.clear();
            for d in 0..digits {
                let mut nib = 0u32;
                for k in 0..4 {
                    let c = d * 4 + k;
                    if c < self.cols && self.get(r, c) {
                        nib |= 8 >> k;
                    }
                }
                line.push(char::from_digit(nib, 16).unwrap());
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_dump<R: BufRead>(r: R) -> Result<Self, BitLinAlgError> {
        let err = |line: usize, msg: &str| BitLinAlgError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| err(1, "missing header"))??;
        let mut it = header.split_whitespace().map(|t| t.parse::<usize>());
        let (rows, cols) = match (it.next(), it.next()) {
            (Some(Ok(r)), Some(Ok(c))) => (r, c),
            _ => return Err(err(1, "expected `rows cols`")),
        };
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            let line = lines.next().ok_or_else(|| err(r + 2, "missing row"))??;
            let line = line.trim();
            if line.len() != cols.div_ceil(4) {
                return Err(err(r + 2, "wrong row length"));
            }
            for (d, ch) in line.chars().enumerate() {
                let nib = ch.to_digit(16).ok_or_else(|| err(r + 2, "bad hex digit"))?;
                for k in 0..4 {
                    if nib & (8 >> k) != 0 {
                        let c = d * 4 + k;
                        if c >= cols {
                            return Err(err(r + 2, "padding bit set"));
                        }
                        m.set(r, c, true);
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Textbook Gaussian elimination over booleans.
pub fn naive_rank(m: &mut [Vec<bool>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c]) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && m[r][c] {
                for k in c..cols {
                    let v = m[rank][k];
                    m[r][k] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

// ---------------------------------------------------------------------------
// Word-level helpers.

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// XOR words `from..` of row `src` into row `dst`.
#[inline]
fn xor_rows(data: &mut [u64], stride: usize, dst: usize, src: usize, from: usize) {
    debug_assert_ne!(dst, src);
    let (d, s) = if dst < src {
        let (a, b) = data.split_at_mut(src * stride);
        (&mut a[dst * stride + from..(dst + 1) * stride], &b[from..stride])
    } else {
        let (a, b) = data.split_at_mut(dst * stride);
        (&mut b[from..stride], &a[src * stride + from..(src + 1) * stride])
    };
    xor_into(d, s);
}

#[inline]
fn swap_row_range(data: &mut [u64], stride: usize, a: usize, b: usize, from: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let (x, y) = data.split_at_mut(hi * stride);
    x[lo * stride + from..(lo + 1) * stride].swap_with_slice(&mut y[from..stride]);
}

#[inline]
fn bit(words: &[u64], c: usize) -> bool {
    (words[c / 64] >> (c % 64)) & 1 == 1
}

// ---------------------------------------------------------------------------
// In-core panel elimination.

/// Columns per panel, in words.
const PANEL_WORDS: usize = 4;
/// Trailing-update chunk width, in words.
const CHUNK_WORDS: usize = 256;
/// Basis reduction: chunk width and number of 8-row tables live at once.
const BASIS_CHUNK_WORDS: usize = 64;
const BASIS_GROUP_SET: usize = 16;
/// Rows processed per parallel task in the trailing update.
const ROW_BLOCK: usize = 512;

/// Builds the 2^k combination table of `k <= 8` source rows restricted to
/// `words` (a range inside each row), writing `2^k * width` words to `out`.
#[inline]
fn build_table(out: &mut [u64], sources: &[&[u64]], width: usize) {
    let k = sources.len();
    out[..width].fill(0);
    for e in 1..(1usize << k) {
        let low = e.trailing_zeros() as usize;
        let prev = e & (e - 1);
        let (done, rest) = out.split_at_mut(e * width);
        let dst = &mut rest[..width];
        dst.copy_from_slice(&done[prev * width..(prev + 1) * width]);
        xor_into(dst, sources[low]);
    }
}

/// Row-echelon reduces the `nrows x stride` word matrix in place and
/// returns its rank. The first `rank` rows then span the row space; rows
/// below are garbage.
fn echelonize(data: &mut [u64], nrows: usize, stride: usize) -> usize {
    let mut r = 0;
    let mut end = nrows;
    let mut w = 0;
    let mut since_sweep = 0;
    while w < stride && r < end {
        let pw = PANEL_WORDS.min(stride - w);
        let (piv_rows, piv_cols) = find_panel_pivots(data, stride, r, end, w, pw);
        let kbar = piv_rows.len();
        place_pivots(data, stride, r, &piv_rows, w);
        // Words left of the panel were skipped by earlier updates; they are
        // logically zero.
        for k in 0..kbar {
            data[(r + k) * stride..(r + k) * stride + w].fill(0);
        }
        if kbar > 0 && w + pw < stride && r + kbar < end {
            update_trailing(data, stride, r, kbar, &piv_cols, end, w, pw);
        }
        r += kbar;
        w += pw;
        since_sweep += 1;
        if since_sweep >= 8 {
            end = drop_zero_rows(data, stride, r, end, w);
            since_sweep = 0;
        }
    }
    r
}

/// Finds a maximal set of pivots in the panel `[w, w + pw)` among rows
/// `r..end`. Pivot rows are reduced against each other inside the panel
/// (each has zeros at the other pivot columns) with the same operations
/// applied to their full trailing rows. Non-pivot rows are untouched.
fn find_panel_pivots(
    data: &mut [u64],
    stride: usize,
    r: usize,
    end: usize,
    w: usize,
    pw: usize,
) -> (Vec<usize>, Vec<usize>) {
    let max_pivots = pw * 64;
    let mut piv_rows: Vec<usize> = Vec::new();
    let mut piv_cols: Vec<usize> = Vec::new();
    let mut piv_panel: Vec<[u64; PANEL_WORDS]> = Vec::new();
    let mut piv_mask = [0u64; PANEL_WORDS];
    let mut combo: Vec<usize> = Vec::new();
    for i in r..end {
        let base = i * stride + w;
        let mut v = [0u64; PANEL_WORDS];
        v[..pw].copy_from_slice(&data[base..base + pw]);
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        combo.clear();
        if (0..pw).any(|k| v[k] & piv_mask[k] != 0) {
            for (j, &c) in piv_cols.iter().enumerate() {
                if bit(&v, c) {
                    combo.push(j);
                }
            }
            for &j in &combo {
                for k in 0..pw {
                    v[k] ^= piv_panel[j][k];
                }
            }
        }
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        for &j in &combo {
            xor_rows(data, stride, i, piv_rows[j], w);
        }
        let lead = (0..pw).find(|&k| v[k] != 0).unwrap();
        let p = lead * 64 + v[lead].trailing_zeros() as usize;
        for j in 0..piv_rows.len() {
            if bit(&piv_panel[j], p) {
                for k in 0..pw {
                    piv_panel[j][k] ^= v[k];
                }
                xor_rows(data, stride, piv_rows[j], i, w);
            }
        }
        piv_mask[p / 64] |= 1u64 << (p % 64);
        piv_rows.push(i);
        piv_cols.push(p);
        piv_panel.push(v);
        if piv_rows.len() == max_pivots {
            break;
        }
    }
    (piv_rows, piv_cols)
}

/// Moves pivot `k` (currently at row `piv_rows[k]`) to row `r + k`.
fn place_pivots(data: &mut [u64], stride: usize, r: usize, piv_rows: &[usize], w: usize) {
    let mut pos_of: Vec<usize> = piv_rows.to_vec();
    let mut at: std::collections::HashMap<usize, usize> = piv_rows.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    for k in 0..piv_rows.len() {
        let target = r + k;
        let src = pos_of[k];
        if src == target {
            continue;
        }
        swap_row_range(data, stride, target, src, w);
        at.remove(&src);
        if let Some(k2) = at.remove(&target) {
            pos_of[k2] = src;
            at.insert(src, k2);
        }
        at.insert(target, k);
        pos_of[k] = target;
    }
}

#[allow(clippy::too_many_arguments)]
fn update_trailing(
    data: &mut [u64],
    stride: usize,
    r: usize,
    kbar: usize,
    piv_cols: &[usize],
    end: usize,
    w: usize,
    pw: usize,
) {
    let first = r + kbar;
    let ngroups = kbar.div_ceil(8);
    let (head, tail) = data.split_at_mut(first * stride);
    let tail = &mut tail[..(end - first) * stride];
    let pivots = &head[r * stride..];

    // Lookup keys come from the untouched panel words of each row.
    let mut keys = vec![0u8; (end - first) * ngroups];
    keys.par_chunks_mut(ngroups)
        .zip(tail.par_chunks(stride))
        .for_each(|(key, row)| {
            let panel = &row[w..w + pw];
            for (g, kb) in key.iter_mut().enumerate() {
                let mut byte = 0u8;
                for (t, &c) in piv_cols[g * 8..((g + 1) * 8).min(kbar)].iter().enumerate() {
                    byte |= (bit(panel, c) as u8) << t;
                }
                *kb = byte;
            }
        });

    let tw = w + pw;
    let mut tables = vec![0u64; ngroups * 256 * CHUNK_WORDS];
    let mut start = tw;
    while start < stride {
        let width = CHUNK_WORDS.min(stride - start);
        for g in 0..ngroups {
            let members: Vec<&[u64]> = (g * 8..((g + 1) * 8).min(kbar))
                .map(|k| &pivots[k * stride + start..k * stride + start + width])
                .collect();
            build_table(&mut tables[g * 256 * width..], &members, width);
        }
        let tables = &tables;
        tail.par_chunks_mut(stride * ROW_BLOCK)
            .zip(keys.par_chunks(ngroups * ROW_BLOCK))
            .for_each(|(rows, keys)| {
                let win = TableWindow {
                    stride,
                    start,
                    width,
                    key_stride: ngroups,
                    g0: 0,
                    ngroups,
                };
                apply_tables(rows, keys, tables, win)
            });
        start += width;
    }
}

/// Geometry shared by the table kernels: each row carries `key_stride` key
/// bytes, of which `g0..g0 + ngroups` select entries of the current tables,
/// which cover words `start..start + width`.
#[derive(Clone, Copy)]
struct TableWindow {
    stride: usize,
    start: usize,
    width: usize,
    key_stride: usize,
    g0: usize,
    ngroups: usize,
}

/// XORs into every row the table entries selected by its keys (entry 0 of
/// each table is zero).
fn apply_tables(rows: &mut [u64], keys: &[u8], tables: &[u64], win: TableWindow) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked above.
            unsafe { apply_tables_avx2(rows, keys, tables, win) };
            return;
        }
    }
    apply_tables_generic(rows, keys, tables, win);
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn apply_tables_avx2(rows: &mut [u64], keys: &[u8], tables: &[u64], win: TableWindow) {
    apply_tables_generic(rows, keys, tables, win);
}

#[inline(always)]
fn apply_tables_generic(rows: &mut [u64], keys: &[u8], tables: &[u64], win: TableWindow) {
    let TableWindow {
        stride,
        start,
        width,
        key_stride,
        g0,
        ngroups,
    } = win;
    let entry = |g: usize, k: u8| &tables[(g * 256 + k as usize) * width..][..width];
    for (row, key) in rows.chunks_exact_mut(stride).zip(keys.chunks_exact(key_stride)) {
        let key = &key[g0..g0 + ngroups];
        let dst = &mut row[start..start + width];
        let mut g = 0;
        while g + 4 <= ngroups {
            let (t0, t1, t2, t3) = (
                entry(g, key[g]),
                entry(g + 1, key[g + 1]),
                entry(g + 2, key[g + 2]),
                entry(g + 3, key[g + 3]),
            );
            for i in 0..width {
                dst[i] ^= t0[i] ^ t1[i] ^ t2[i] ^ t3[i];
            }
            g += 4;
        }
        while g < ngroups {
            xor_into(dst, entry(g, key[g]));
            g += 1;
        }
    }
}

/// Swaps rows that are zero from word `w` on past `end`; returns the new end.
fn drop_zero_rows(data: &mut [u64], stride: usize, r: usize, mut end: usize, w: usize) -> usize {
    if w >= stride {
        return end;
    }
    let mut i = r;
    while i < end {
        if data[i * stride + w..(i + 1) * stride].iter().all(|&x| x == 0) {
            end -= 1;
            swap_row_range(data, stride, i, end, w);
        } else {
            i += 1;
        }
    }
    end
}

// ---------------------------------------------------------------------------
// Streaming rank.

/// Rank of a row stream without materializing the matrix.
///
/// The basis is kept in reduced row echelon form: basis row `i` has a one at
/// `pivots[i]` and zeros at every other pivot column. Incoming rows are
/// buffered; a full buffer is reduced against the basis with lookup tables
/// keyed directly by its bits at the pivot columns, eliminated internally,
/// and the new pivots are cleared from the old basis rows. The basis lives in
/// fixed-size segments so growth never reallocates it wholesale.
pub struct StreamingRank {
    cols: usize,
    stride: usize,
    segments: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    batch: Vec<u64>,
    batch_rows: usize,
    batch_cap: usize,
}

/// Basis rows per segment.
const SEGMENT_ROWS: usize = 1024;

impl StreamingRank {
    pub fn new(cols: usize) -> Self {
        Self::with_batch(cols, 4096)
    }

    pub fn with_batch(cols: usize, batch_cap: usize) -> Self {
        let stride = words_for(cols);
        let batch_cap = batch_cap.max(1);
        StreamingRank {
            cols,
            stride,
            segments: Vec::new(),
            pivots: Vec::new(),
            batch: vec![0; batch_cap * stride],
            batch_rows: 0,
            batch_cap,
        }
    }

    /// Bytes currently held by the basis and the row buffer.
    pub fn memory_bytes(&self) -> u64 {
        let basis: usize = self.segments.iter().map(|s| s.capacity()).sum();
        ((basis + self.batch.capacity()) * 8) as u64
    }

    /// Estimated peak bytes for a stream whose rank is at most `rank`.
    pub fn estimate_bytes(cols: usize, rank: usize, batch_cap: usize) -> u64 {
        let stride = words_for(cols) as u64;
        let rows = rank.div_ceil(SEGMENT_ROWS) * SEGMENT_ROWS;
        (rows as u64 + 2 * batch_cap as u64) * stride * 8
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds a row given by its set columns.
    pub fn push_row<I: IntoIterator<Item = usize>>(&mut self, set_cols: I) -> Result<(), BitLinAlgError> {
        let base = self.batch_rows * self.stride;
        let row = &mut self.batch[base..base + self.stride];
        row.fill(0);
        for c in set_cols {
            if c >= self.cols {
                return Err(BitLinAlgError::ColumnOutOfRange {
                    row: self.batch_rows,
                    col: c,
                    cols: self.cols,
                });
            }
            row[c / 64] |= 1u64 << (c % 64);
        }
        self.commit_row();
        Ok(())
    }

    /// Adds a row given as packed words (length = words for `cols`).
    pub fn push_words(&mut self, words: &[u64]) {
        assert_eq!(words.len(), self.stride);
        let base = self.batch_rows * self.stride;
        self.batch[base..base + self.stride].copy_from_slice(words);
        self.commit_row();
    }

    fn commit_row(&mut self) {
        self.batch_rows += 1;
        if self.batch_rows == self.batch_cap {
            self.flush();
        }
    }

    /// Rank of everything pushed so far.
    pub fn rank(&mut self) -> usize {
        self.flush();
        self.pivots.len()
    }

    fn flush(&mut self) {
        if self.batch_rows == 0 {
            return;
        }
        let stride = self.stride;
        let nb = self.batch_rows;
        self.batch_rows = 0;
        let mut batch = std::mem::take(&mut self.batch);
        let rows = &mut batch[..nb * stride];

        if !self.pivots.is_empty() {
            let segments = &self.segments;
            let basis_row = |k: usize| {
                let seg = &segments[k / SEGMENT_ROWS];
                let off = (k % SEGMENT_ROWS) * stride;
                &seg[off..off + stride]
            };
            apply_rref_basis(rows, stride, basis_row, &self.pivots);
        }

        let k_new = echelonize(rows, nb, stride);
        if k_new > 0 {
            let new_rows = &mut rows[..k_new * stride];
            let new_pivots = make_rref(new_rows, stride);
            let new_rows = &*new_rows;
            let new_row = |k: usize| &new_rows[k * stride..(k + 1) * stride];
            for seg in &mut self.segments {
                apply_rref_basis(seg, stride, new_row, &new_pivots);
            }
            self.append(new_rows);
            self.pivots.extend_from_slice(&new_pivots);
        }
        self.batch = batch;
    }

    fn append(&mut self, mut rows: &[u64]) {
        let stride = self.stride;
        while !rows.is_empty() {
            if self.segments.last().is_none_or(|s| s.len() == SEGMENT_ROWS * stride) {
                self.segments.push(Vec::with_capacity(SEGMENT_ROWS * stride));
            }
            let seg = self.segments.last_mut().unwrap();
            let take = (SEGMENT_ROWS * stride - seg.len()).min(rows.len());
            seg.extend_from_slice(&rows[..take]);
            rows = &rows[take..];
        }
    }
}

/// Reduces every row of `rows` by a basis in reduced row echelon form whose
/// `k`-th row is `basis_row(k)`.
fn apply_rref_basis<'b, B>(rows: &mut [u64], stride: usize, basis_row: B, pivots: &[usize])
where
    B: Fn(usize) -> &'b [u64],
{
    let nrows = rows.len() / stride;
    let nb = pivots.len();
    let ngroups = nb.div_ceil(8);
    let mut keys = vec![0u8; nrows * ngroups];
    keys.par_chunks_mut(ngroups)
        .zip(rows.par_chunks(stride))
        .for_each(|(key, row)| {
            for (g, kb) in key.iter_mut().enumerate() {
                let mut byte = 0u8;
                for (t, &c) in pivots[g * 8..((g + 1) * 8).min(nb)].iter().enumerate() {
                    byte |= (bit(row, c) as u8) << t;
                }
                *kb = byte;
            }
        });
    let mut tables = vec![0u64; BASIS_GROUP_SET * 256 * BASIS_CHUNK_WORDS];
    let mut start = 0;
    while start < stride {
        let width = BASIS_CHUNK_WORDS.min(stride - start);
        let mut g0 = 0;
        while g0 < ngroups {
            let gcount = BASIS_GROUP_SET.min(ngroups - g0);
            for g in 0..gcount {
                let members: Vec<&[u64]> = ((g0 + g) * 8..((g0 + g + 1) * 8).min(nb))
                    .map(|k| &basis_row(k)[start..start + width])
                    .collect();
                build_table(&mut tables[g * 256 * width..], &members, width);
            }
            let tables = &tables;
            let win = TableWindow {
                stride,
                start,
                width,
                key_stride: ngroups,
                g0,
                ngroups: gcount,
            };
            rows.par_chunks_mut(stride * ROW_BLOCK)
                .zip(keys.par_chunks(ngroups * ROW_BLOCK))
                .for_each(|(block, keys)| apply_tables(block, keys, tables, win));
            g0 += gcount;
        }
        start += width;
    }
}

/// Turns linearly independent rows into reduced row echelon form (pivot =
/// lowest set column after reduction). Returns the pivot of each row.
fn make_rref(rows: &mut [u64], stride: usize) -> Vec<usize> {
    let k = rows.len() / stride;
    let mut pivots: Vec<usize> = Vec::with_capacity(k);
    for i in 0..k {
        // Clear the earlier pivots from row i.
        for j in 0..i {
            if bit(&rows[i * stride..(i + 1) * stride], pivots[j]) {
                xor_rows(rows, stride, i, j, 0);
            }
        }
        let row = &rows[i * stride..(i + 1) * stride];
        let lead = row.iter().position(|&x| x != 0).expect("rows are independent");
        let p = lead * 64 + row[lead].trailing_zeros() as usize;
        // Clear the new pivot from the earlier rows.
        for j in 0..i {
            if bit(&rows[j * stride..(j + 1) * stride], p) {
                xor_rows(rows, stride, j, i, 0);
            }
        }
        pivots.push(p);
    }
    pivots
}
