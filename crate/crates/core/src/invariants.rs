//! Exact flow-equivalence invariants: the Parry–Sullivan number `det(I - A)`
//! and the Bowen–Franks group `coker(I - A)`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::shift::AdjacencyMatrix;

/// Smith normal form `D = U * M * V` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `d_1 | d_2 | ...`, length `min(rows, cols)`; zeros trail.
    pub diagonal: Vec<BigUint>,
    pub rank: usize,
    /// Free rank of the cokernel, `rows - rank`.
    pub free_rank: usize,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

type Matrix = Vec<Vec<BigInt>>;

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn swap_columns(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `row[dst] -= q * row[src]`
fn row_axpy(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    let source = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(&source) {
        *x -= q * y;
    }
}

/// `col[dst] -= q * col[src]`
fn col_axpy(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let delta = q * &row[src];
        row[dst] -= delta;
    }
}

/// Smallest nonzero `|entry|` in the lower-right block starting at `t`;
/// ties go to the lowest row, then the lowest column.
fn pivot(d: &Matrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => x.abs() < d[bi][bj].abs(),
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d: Matrix = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        'pivoting: while let Some((pi, pj)) = pivot(&d, t) {
            d.swap(t, pi);
            u.swap(t, pi);
            swap_columns(&mut d, t, pj);
            swap_columns(&mut v, t, pj);

            let p = d[t][t].clone();
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = &d[i][t] / &p;
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = &d[t][j] / &p;
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
            }
            let column_clear = (t + 1..rows).all(|i| d[i][t].is_zero());
            let row_clear = (t + 1..cols).all(|j| d[t][j].is_zero());
            if !(column_clear && row_clear) {
                continue;
            }
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !d[i][j].is_multiple_of(&p) {
                        // Fold row i into row t; the next pass shrinks the pivot.
                        row_axpy(&mut d, t, i, &-BigInt::one());
                        row_axpy(&mut u, t, i, &-BigInt::one());
                        continue 'pivoting;
                    }
                }
            }
            if p.is_negative() {
                for x in d[t].iter_mut() {
                    *x = -x.clone();
                }
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
            rank += 1;
            break;
        }
        if d[t][t].is_zero() {
            break;
        }
    }

    #[cfg(debug_assertions)]
    {
        let product = multiply(&multiply(&u, &m.to_vec()), &v);
        assert_eq!(product, d, "U * M * V must equal D");
    }

    let diagonal = (0..rows.min(cols))
        .map(|i| d[i][i].magnitude().clone())
        .collect();
    SmithForm {
        diagonal,
        rank,
        free_rank: rows - rank,
        u,
        v,
    }
}

impl SmithForm {
    /// Recomputes `U * M * V` and compares it with the diagonal.
    pub fn verify(&self, m: &[Vec<BigInt>]) -> bool {
        let product = multiply(&multiply(&self.u, &m.to_vec()), &self.v);
        product.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| {
                if i == j {
                    x.sign() != Sign::Minus && x.magnitude() == &self.diagonal[i]
                } else {
                    x.is_zero()
                }
            })
        }) && self
            .diagonal
            .windows(2)
            .all(|w| w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])))
    }

    /// The cokernel `Z^rows / M Z^cols`.
    pub fn cokernel(&self) -> AbelianGroup {
        let torsion = self
            .diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        AbelianGroup {
            torsion,
            free_rank: self.free_rank,
        }
    }
}

/// Finitely generated abelian group `Z^free_rank + Z/t_1 + ... + Z/t_s`
/// with `t_1 | t_2 | ...` and every `t_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub torsion: Vec<BigUint>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self {
            torsion: Vec::new(),
            free_rank: 0,
        }
    }

    /// The group `Z/c_1 + Z/c_2 + ...` in canonical form; `c_i = 0` gives `Z`.
    pub fn from_cyclic_factors(factors: &[BigUint]) -> Self {
        let n = factors.len();
        let m: Matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::from(factors[i].clone())
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        smith_normal_form(&m).cokernel()
    }

    pub fn canonicalize(&self) -> Self {
        let mut factors = self.torsion.clone();
        factors.extend(std::iter::repeat_n(BigUint::zero(), self.free_rank));
        Self::from_cyclic_factors(&factors)
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Product of the torsion coefficients.
    pub fn torsion_order(&self) -> BigUint {
        self.torsion.iter().product()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "torsion": self.torsion.iter().map(big_json).collect::<Vec<_>>(),
            "free_rank": self.free_rank,
        })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        f.write_str(&parts.join(" + "))
    }
}

/// Numbers that fit in 64 bits are emitted as JSON numbers, larger ones as strings.
pub(crate) fn big_json(x: impl fmt::Display) -> serde_json::Value {
    let text = x.to_string();
    if let Ok(v) = text.parse::<i64>() {
        json!(v)
    } else {
        json!(text)
    }
}

/// Fraction-free Bareiss determinant.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Matrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut previous = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &previous;
                a[i][j] = value;
            }
        }
        previous = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `det(I - A)`, signed.
pub fn parry_sullivan(a: &AdjacencyMatrix) -> BigInt {
    determinant(&a.identity_minus())
}

/// `coker(I - A)` in canonical form.
pub fn bowen_franks(a: &AdjacencyMatrix) -> AbelianGroup {
    smith_normal_form(&a.identity_minus()).cokernel()
}

/// Evidence that two shifts are not flow equivalent (or not conjugate).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "kebab-case")]
pub enum Certificate {
    ParrySullivan {
        left: String,
        right: String,
    },
    BowenFranks {
        left: String,
        right: String,
    },
    PeriodicPoints {
        period: usize,
        left: String,
        right: String,
    },
}

impl Certificate {
    /// Recomputes the witnessed invariant on both matrices.
    pub fn verify(&self, a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> bool {
        match self {
            Certificate::ParrySullivan { left, right } => {
                let (x, y) = (parry_sullivan(a), parry_sullivan(b));
                x != y && &x.to_string() == left && &y.to_string() == right
            }
            Certificate::BowenFranks { left, right } => {
                let (x, y) = (bowen_franks(a), bowen_franks(b));
                x != y && &x.to_string() == left && &y.to_string() == right
            }
            Certificate::PeriodicPoints {
                period,
                left,
                right,
            } => {
                let (x, y) = (
                    a.periodic_point_count(*period),
                    b.periodic_point_count(*period),
                );
                x != y && &x.to_string() == left && &y.to_string() == right
            }
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::ParrySullivan { left, right } => write!(f, "PS: {left} != {right}"),
            Certificate::BowenFranks { left, right } => write!(f, "BF: {left} != {right}"),
            Certificate::PeriodicPoints {
                period,
                left,
                right,
            } => {
                write!(f, "period-{period} points: {left} != {right}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantVerdict {
    Distinguished(Certificate),
    Inconclusive,
}

/// Compares PS, then BF. Agreement never certifies equivalence.
pub fn flow_equivalence_certificate(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> InvariantVerdict {
    let (x, y) = (parry_sullivan(a), parry_sullivan(b));
    if x != y {
        return InvariantVerdict::Distinguished(Certificate::ParrySullivan {
            left: x.to_string(),
            right: y.to_string(),
        });
    }
    let (x, y) = (bowen_franks(a), bowen_franks(b));
    if x != y {
        return InvariantVerdict::Distinguished(Certificate::BowenFranks {
            left: x.to_string(),
            right: y.to_string(),
        });
    }
    InvariantVerdict::Inconclusive
}

/// First period `k <= max_period` with differing periodic-point counts.
pub fn periodic_certificate(
    a: &AdjacencyMatrix,
    b: &AdjacencyMatrix,
    max_period: usize,
) -> InvariantVerdict {
    for period in 1..=max_period {
        let (x, y) = (
            a.periodic_point_count(period),
            b.periodic_point_count(period),
        );
        if x != y {
            return InvariantVerdict::Distinguished(Certificate::PeriodicPoints {
                period,
                left: x.to_string(),
                right: y.to_string(),
            });
        }
    }
    InvariantVerdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn diag(form: &SmithForm) -> Vec<u64> {
        form.diagonal
            .iter()
            .map(|d| d.try_into().unwrap())
            .collect()
    }

    fn adj(rows: &[&[u64]]) -> AdjacencyMatrix {
        AdjacencyMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn smith_examples() {
        let m = int_matrix(&[&[0, -1], &[-1, 0]]);
        let form = smith_normal_form(&m);
        assert_eq!(diag(&form), vec![1, 1]);
        assert!(form.verify(&m));
        assert_eq!(diag(&smith_normal_form(&int_matrix(&[&[0]]))), vec![0]);
        let m = int_matrix(&[&[2, 0], &[0, 3]]);
        assert_eq!(diag(&smith_normal_form(&m)), vec![1, 6]);
    }

    #[test]
    fn smith_rectangular() {
        let m = int_matrix(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let form = smith_normal_form(&m);
        assert_eq!(diag(&form), vec![2, 6, 12]);
        let m = int_matrix(&[&[1, 2, 3], &[4, 5, 6]]);
        let form = smith_normal_form(&m);
        assert_eq!(diag(&form), vec![1, 3]);
        assert_eq!(form.free_rank, 0);
        assert!(form.verify(&m));
    }

    #[test]
    fn parry_sullivan_examples() {
        assert_eq!(parry_sullivan(&adj(&[&[1, 1], &[1, 1]])), BigInt::from(-1));
        assert_eq!(parry_sullivan(&adj(&[&[1]])), BigInt::zero());
        assert_eq!(parry_sullivan(&adj(&[&[2]])), BigInt::from(-1));
    }

    #[test]
    fn bareiss_with_row_swap() {
        let m = int_matrix(&[&[0, 2, 1], &[3, 1, 0], &[1, 1, 1]]);
        // cofactor expansion along the first row: 0 - 2*(3-0) + 1*(3-1) = -4
        assert_eq!(determinant(&m), BigInt::from(-4));
    }

    #[test]
    fn bowen_franks_examples() {
        assert!(bowen_franks(&adj(&[&[1, 1], &[1, 1]])).is_trivial());
        let g = bowen_franks(&adj(&[&[3]]));
        assert_eq!(g.to_string(), "Z/2");
        let g = bowen_franks(&adj(&[&[1]]));
        assert_eq!((g.free_rank, g.torsion.len()), (1, 0));
    }

    #[test]
    fn canonical_group_is_idempotent() {
        let g = AbelianGroup::from_cyclic_factors(&[4u32, 6, 1, 0].map(BigUint::from));
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(g.canonicalize(), g);
    }

    #[test]
    fn certificates() {
        let two = adj(&[&[2]]);
        let one = adj(&[&[1]]);
        let full = adj(&[&[1, 1], &[1, 1]]);
        match flow_equivalence_certificate(&two, &one) {
            InvariantVerdict::Distinguished(c) => {
                assert_eq!(c.to_string(), "PS: -1 != 0");
                assert!(c.verify(&two, &one));
            }
            InvariantVerdict::Inconclusive => panic!("PS differs"),
        }
        assert_eq!(
            flow_equivalence_certificate(&two, &full),
            InvariantVerdict::Inconclusive
        );
        assert_eq!(
            flow_equivalence_certificate(&full, &full),
            InvariantVerdict::Inconclusive
        );
    }
}
