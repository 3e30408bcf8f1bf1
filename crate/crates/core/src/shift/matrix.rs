use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::ShiftError;

/// Square matrix of nonnegative integers presenting a subshift of finite type.
///
/// Entry `(i, j)` counts the edges from vertex `i` to vertex `j` of the
/// vertex graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl AdjacencyMatrix {
    pub fn new(n: usize, entries: Vec<u64>) -> Result<Self, ShiftError> {
        if n == 0 {
            return Err(ShiftError::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(ShiftError::ShapeMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self, ShiftError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(ShiftError::ShapeMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// True when every entry is 0 or 1, i.e. the matrix is a transition matrix.
    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(|&e| e <= 1)
    }

    /// `I - A` over the integers.
    pub fn identity_minus(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let diag = if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        };
                        diag - BigInt::from(self.get(i, j))
                    })
                    .collect()
            })
            .collect()
    }

    /// Number of points of period `k` of the shift, `tr(A^k)`.
    pub fn periodic_point_count(&self, k: usize) -> BigUint {
        assert!(k >= 1, "period must be positive");
        let n = self.n;
        let base: Vec<BigUint> = self.entries.iter().map(|&e| BigUint::from(e)).collect();
        let mut power = base.clone();
        for _ in 1..k {
            let mut next = vec![BigUint::zero(); n * n];
            for i in 0..n {
                for l in 0..n {
                    let a = &power[i * n + l];
                    if a.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let b = &base[l * n + j];
                        if !b.is_zero() {
                            next[i * n + j] += a * b;
                        }
                    }
                }
            }
            power = next;
        }
        (0..n).map(|i| power[i * n + i].clone()).sum()
    }

    /// Serialize in MAT v1: the dimension on the first line, then one row per line.
    pub fn to_mat(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_mat(text: &str) -> Result<Self, ShiftError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (lineno, header) = lines.next().ok_or(ShiftError::Parse {
            line: 1,
            message: "missing dimension line".into(),
        })?;
        let n: usize = header.trim().parse().map_err(|_| ShiftError::Parse {
            line: lineno + 1,
            message: format!("bad dimension `{}`", header.trim()),
        })?;
        let mut rows = Vec::with_capacity(n);
        for (lineno, line) in lines {
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u64>().map_err(|_| ShiftError::Parse {
                        line: lineno + 1,
                        message: format!("bad entry `{tok}`"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != n {
                return Err(ShiftError::Parse {
                    line: lineno + 1,
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(ShiftError::Parse {
                line: text.lines().count(),
                message: format!("expected {n} rows, found {}", rows.len()),
            });
        }
        Self::from_rows(&rows)
    }
}

impl fmt::Display for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_mat())
    }
}

impl FromStr for AdjacencyMatrix {
    type Err = ShiftError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_mat(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_counts_full_two_shift() {
        let a = AdjacencyMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        let counts: Vec<u64> = (1..=3)
            .map(|k| a.periodic_point_count(k).try_into().unwrap())
            .collect();
        assert_eq!(counts, vec![2, 4, 8]);
    }

    #[test]
    fn two_cycle_has_no_fixed_points() {
        let a = AdjacencyMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(a.periodic_point_count(1), BigUint::zero());
        assert_eq!(a.periodic_point_count(2), BigUint::from(2u32));
    }

    #[test]
    fn single_loop_counts_one() {
        let a = AdjacencyMatrix::from_rows(&[vec![1]]).unwrap();
        for k in 1..=8 {
            assert_eq!(a.periodic_point_count(k), BigUint::one());
        }
    }

    #[test]
    fn mat_parse_errors() {
        assert!(AdjacencyMatrix::parse_mat("").is_err());
        assert!(AdjacencyMatrix::parse_mat("2\n1 1\n").is_err());
        assert!(AdjacencyMatrix::parse_mat("2\n1 -1\n0 1\n").is_err());
        assert!(AdjacencyMatrix::parse_mat("0\n").is_err());
    }

    #[test]
    fn mat_text_is_stable() {
        let text = "3\n0 1 2\n3 4 5\n6 7 8\n";
        let a = AdjacencyMatrix::parse_mat(text).unwrap();
        assert_eq!(a.to_mat(), text);
    }
}
