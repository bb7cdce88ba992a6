use crate::error::{Error, Result};
use crate::text::Lines;

/// Dense matrix over `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl SignedMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SignedMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SignedMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !(-1..=1).contains(&x) {
                    return Err(Error::invalid(format!("entry {x} is not in {{-1,0,1}}")));
                }
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i8) {
        debug_assert!((-1..=1).contains(&x));
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> SignedMatrix {
        let mut t = SignedMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Matrix-level counterparts of the spec edits; each appends at the end.
    pub fn with_row_duplicated(&self, i: usize) -> SignedMatrix {
        let mut rows = self.to_rows();
        rows.push(rows[i].clone());
        SignedMatrix::from_rows_unchecked(rows, self.cols)
    }

    pub fn with_column_duplicated(&self, j: usize) -> SignedMatrix {
        self.transpose().with_row_duplicated(j).transpose()
    }

    pub fn with_row_negated(&self, i: usize) -> SignedMatrix {
        let mut m = self.clone();
        for j in 0..self.cols {
            m.set(i, j, -self.get(i, j));
        }
        m
    }

    pub fn with_column_negated(&self, j: usize) -> SignedMatrix {
        let mut m = self.clone();
        for i in 0..self.rows {
            m.set(i, j, -self.get(i, j));
        }
        m
    }

    /// Appends a row with a single `+1` in column `j`.
    pub fn with_unit_row(&self, j: usize) -> SignedMatrix {
        let mut rows = self.to_rows();
        let mut unit = vec![0; self.cols];
        unit[j] = 1;
        rows.push(unit);
        SignedMatrix::from_rows_unchecked(rows, self.cols)
    }

    /// Appends a column with a single `+1` in row `i`.
    pub fn with_unit_column(&self, i: usize) -> SignedMatrix {
        self.transpose().with_unit_row(i).transpose()
    }

    fn from_rows_unchecked(rows: Vec<Vec<i8>>, cols: usize) -> SignedMatrix {
        SignedMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Parses `rows cols` followed by one line per row.
    pub fn parse(src: &str) -> Result<Self> {
        let mut lines = Lines::new(src, '#');
        let header = lines.next_line("header `rows cols`")?;
        header.expect_len(2, "header")?;
        let r: usize = header.parse(0, "row count")?;
        let c: usize = header.parse(1, "column count")?;
        let mut m = SignedMatrix::zeros(r, c);
        for i in 0..r {
            let line = lines.next_line("matrix row")?;
            line.expect_len(c, "matrix row")?;
            for j in 0..c {
                let x: i8 = line.parse(j, "entry")?;
                if !(-1..=1).contains(&x) {
                    return Err(line.error(j, format!("entry {x} is not in {{-1,0,1}}")));
                }
                m.set(i, j, x);
            }
        }
        lines.expect_end()?;
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}
