//! Sub-simplices of the standard simplex `Δ_n` as column-stochastic
//! matrices, and the barycentric subdivision matrices `G_σ`.
//!
//! A [`SimplexMatrix`] is a nonnegative `n×n` matrix whose columns each sum
//! to 1 and whose determinant is nonzero; its columns are the vertices of
//! the simplex `Con(M)`.

mod permutation;

pub use permutation::{Permutation, PermutationWord};

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::RationalPoint;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplexMatrix {
    n: usize,
    /// Row-major.
    entries: Vec<Rational>,
}

/// Result of a membership test: the barycentric coordinates solve
/// `M λ = P`, and the point is contained iff all of them are `>= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub contained: bool,
    pub barycentric: Vec<Rational>,
}

impl SimplexMatrix {
    /// Validates nonnegativity, unit column sums and a nonzero determinant.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row of length {} in a {n}x{n} matrix",
                r.len()
            )));
        }
        let m = SimplexMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        };
        if m.entries.iter().any(|e| e.is_negative()) {
            return Err(Error::InvalidMatrix("negative entry".into()));
        }
        for j in 0..n {
            let s: Rational = (0..n).map(|i| m.get(i, j).clone()).sum();
            if !s.is_one() {
                return Err(Error::InvalidMatrix(format!(
                    "column {} sums to {s}, not 1",
                    j + 1
                )));
            }
        }
        if m.determinant().is_zero() {
            return Err(Error::InvalidMatrix("singular matrix".into()));
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        SimplexMatrix { n, entries }
    }

    /// `G_n`: entry `(i, j)` is `1/j` for `i <= j` (1-based), else 0.
    pub fn barycentric_base(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for j in 0..n {
            let v = Rational::new(BigInt::one(), BigInt::from(j + 1));
            for i in 0..=j {
                entries[i * n + j] = v.clone();
            }
        }
        SimplexMatrix { n, entries }
    }

    /// `G_σ = P_σ G_n`, where `P_σ e_i = e_{σ(i)}`: row `σ(i)` of the
    /// result is row `i` of `G_n`.
    pub fn barycentric(sigma: &Permutation) -> Self {
        let n = sigma.n();
        let base = SimplexMatrix::barycentric_base(n);
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            let target = sigma.image(i);
            entries[target * n..(target + 1) * n].clone_from_slice(&base.entries[i * n..(i + 1) * n]);
        }
        SimplexMatrix { n, entries }
    }

    /// `G_{σ_1} ··· G_{σ_m}`; the empty word gives the identity.
    pub fn product_chain(word: &PermutationWord, n: usize) -> Result<Self> {
        let mut acc = SimplexMatrix::identity(n);
        for sigma in word.letters() {
            if sigma.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: sigma.n(),
                });
            }
            acc = acc.multiply(&SimplexMatrix::barycentric(sigma))?;
        }
        Ok(acc)
    }

    /// Simplex with vertices `(1-ε)P + ε e_i`: diameter `ε`, determinant
    /// `ε^{n-1}`, and it contains `P`.
    pub fn shrink_around(p: &RationalPoint, eps: &Rational) -> Result<Self> {
        if !p.on_simplex() {
            return Err(Error::InvalidParameter(format!("{p} is not on the simplex")));
        }
        if !eps.is_positive() || eps > &Rational::one() {
            return Err(Error::InvalidParameter(format!("ε = {eps} is outside (0, 1]")));
        }
        let n = p.dim();
        let keep = Rational::one() - eps;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            let base = &keep * &p.coords()[i];
            for j in 0..n {
                entries.push(if i == j { &base + eps } else { base.clone() });
            }
        }
        Ok(SimplexMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }

    /// Column `j` (zero-based) as a point of `Δ_n`.
    pub fn vertex(&self, j: usize) -> Result<RationalPoint> {
        if j >= self.n {
            return Err(Error::IndexOutOfRange { index: j, n: self.n });
        }
        Ok(RationalPoint::new(
            (0..self.n).map(|i| self.get(i, j).clone()).collect(),
        ))
    }

    pub fn vertices(&self) -> Vec<RationalPoint> {
        (0..self.n).map(|j| self.vertex(j).expect("in range")).collect()
    }

    /// `(1/n) M (1, ..., 1)^T`, the barycenter of `Con(M)`.
    pub fn center(&self) -> RationalPoint {
        let inv = Rational::new(BigInt::one(), BigInt::from(self.n));
        RationalPoint::new(
            self.rows()
                .map(|r| r.iter().sum::<Rational>() * &inv)
                .collect(),
        )
    }

    pub fn multiply(&self, other: &SimplexMatrix) -> Result<SimplexMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(SimplexMatrix { n, entries })
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self
            .rows()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Max over column pairs of the ∞-norm distance.
    pub fn diameter(&self) -> Rational {
        let n = self.n;
        let mut best = Rational::zero();
        for s in 0..n {
            for t in s + 1..n {
                for i in 0..n {
                    let d = (self.get(i, s) - self.get(i, t)).abs();
                    if d > best {
                        best = d;
                    }
                }
            }
        }
        best
    }

    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = pivot_row(&a, n, col, col) else {
                return Rational::zero();
            };
            if pivot != col {
                swap_rows(&mut a, n, pivot, col);
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                eliminate(&mut a, n, col, r, &p, None);
            }
        }
        det
    }

    /// Solves `M λ = P` exactly and reports whether `λ >= 0`. Points on a
    /// face (some `λ_i = 0`) count as contained.
    pub fn contains_point(&self, p: &RationalPoint) -> Result<Membership> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.dim(),
            });
        }
        let lambda = self.solve(p.coords())?;
        Ok(Membership {
            contained: lambda.iter().all(|l| !l.is_negative()),
            barycentric: lambda,
        })
    }

    /// Gaussian elimination with partial pivoting (largest magnitude).
    fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = pivot_row(&a, n, col, col)
                .ok_or_else(|| Error::InvalidMatrix("singular matrix".into()))?;
            if pivot != col {
                swap_rows(&mut a, n, pivot, col);
                b.swap(pivot, col);
            }
            let p = a[col * n + col].clone();
            for r in col + 1..n {
                eliminate(&mut a, n, col, r, &p, Some(&mut b));
            }
        }
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut s = b[i].clone();
            for j in i + 1..n {
                s -= &a[i * n + j] * &x[j];
            }
            x[i] = s / &a[i * n + i];
        }
        Ok(x)
    }

    /// Matrix text format: `n` lines of `n` rationals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in self.rows() {
            let line: Vec<String> = r.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| {
                l.split_whitespace()
                    .map(|t| {
                        parse_rational(t)
                            .ok_or_else(|| Error::parse(i + 1, format!("invalid entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SimplexMatrix::new(rows)
    }
}

fn pivot_row(a: &[Rational], n: usize, col: usize, from: usize) -> Option<usize> {
    (from..n)
        .filter(|&r| !a[r * n + col].is_zero())
        .max_by(|&r, &s| {
            a[r * n + col]
                .abs()
                .cmp(&a[s * n + col].abs())
                // prefer the earlier row on ties
                .then(s.cmp(&r))
        })
}

fn swap_rows(a: &mut [Rational], n: usize, r: usize, s: usize) {
    for j in 0..n {
        a.swap(r * n + j, s * n + j);
    }
}

fn eliminate(
    a: &mut [Rational],
    n: usize,
    col: usize,
    row: usize,
    pivot: &Rational,
    rhs: Option<&mut Vec<Rational>>,
) {
    let factor = &a[row * n + col] / pivot;
    if factor.is_zero() {
        return;
    }
    for j in col..n {
        let delta = &factor * &a[col * n + j];
        a[row * n + j] -= delta;
    }
    if let Some(b) = rhs {
        let delta = &factor * &b[col];
        b[row] -= delta;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[Rational]]) -> SimplexMatrix {
        SimplexMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn base_matrix_matches_display() {
        let g3 = SimplexMatrix::barycentric(&Permutation::identity(3));
        let expected = m(&[
            &[int(1), ratio(1, 2), ratio(1, 3)],
            &[int(0), ratio(1, 2), ratio(1, 3)],
            &[int(0), int(0), ratio(1, 3)],
        ]);
        assert_eq!(g3, expected);
        assert_eq!(g3.vertex(2).unwrap(), RationalPoint::simplex_center(3));
        assert_eq!(g3.determinant(), ratio(1, 6));
    }

    #[test]
    fn barycentric_matrices_are_distinct_and_valid() {
        let all: std::collections::HashSet<_> = Permutation::all(3)
            .iter()
            .map(SimplexMatrix::barycentric)
            .collect();
        assert_eq!(all.len(), 6);
        for g in &all {
            let rebuilt = SimplexMatrix::new(g.rows().map(|r| r.to_vec()).collect()).unwrap();
            assert_eq!(g.determinant().abs(), ratio(1, 6));
            assert_eq!(&rebuilt, g);
        }
    }

    #[test]
    fn chains() {
        let w: PermutationWord = "12,12".parse().unwrap();
        let gg = SimplexMatrix::product_chain(&w, 2).unwrap();
        assert_eq!(gg, m(&[&[int(1), ratio(3, 4)], &[int(0), ratio(1, 4)]]));
        assert_eq!(gg.vertex(1).unwrap(), RationalPoint::new(vec![ratio(3, 4), ratio(1, 4)]));
        assert_eq!(
            SimplexMatrix::product_chain(&PermutationWord::empty(), 3).unwrap(),
            SimplexMatrix::identity(3)
        );
        assert!(SimplexMatrix::product_chain(&w, 3).is_err());
    }

    #[test]
    fn diameters() {
        assert_eq!(SimplexMatrix::identity(4).diameter(), int(1));
        assert_eq!(SimplexMatrix::barycentric_base(3).diameter(), ratio(2, 3));
        let p = RationalPoint::new(vec![ratio(1, 5), ratio(3, 10), ratio(1, 2)]);
        let s = SimplexMatrix::shrink_around(&p, &ratio(1, 7)).unwrap();
        assert_eq!(s.diameter(), ratio(1, 7));
    }

    #[test]
    fn shrink_examples() {
        let half = RationalPoint::simplex_center(2);
        let s = SimplexMatrix::shrink_around(&half, &ratio(1, 4)).unwrap();
        assert_eq!(s, m(&[&[ratio(5, 8), ratio(3, 8)], &[ratio(3, 8), ratio(5, 8)]]));
        assert_eq!(
            SimplexMatrix::shrink_around(&half, &int(1)).unwrap(),
            SimplexMatrix::identity(2)
        );
        let s3 = SimplexMatrix::shrink_around(&RationalPoint::simplex_center(3), &ratio(1, 2)).unwrap();
        assert_eq!(s3.determinant(), ratio(1, 4));
        assert!(SimplexMatrix::shrink_around(&half, &int(0)).is_err());
        assert!(SimplexMatrix::shrink_around(&half, &ratio(3, 2)).is_err());
        let off = RationalPoint::new(vec![int(1), int(1)]);
        assert!(SimplexMatrix::shrink_around(&off, &ratio(1, 2)).is_err());
    }

    #[test]
    fn membership() {
        let g3 = SimplexMatrix::barycentric_base(3);
        let p = RationalPoint::new(vec![ratio(1, 2), ratio(1, 2), int(0)]);
        let mem = g3.contains_point(&p).unwrap();
        assert!(mem.contained);
        assert_eq!(mem.barycentric, vec![int(0), int(1), int(0)]);

        let q = RationalPoint::unit(3, 2);
        let mem = g3.contains_point(&q).unwrap();
        assert!(!mem.contained);
        assert_eq!(mem.barycentric, vec![int(0), int(-2), int(3)]);

        for j in 0..3 {
            let mem = g3.contains_point(&g3.vertex(j).unwrap()).unwrap();
            assert!(mem.contained);
            assert_eq!(mem.barycentric, RationalPoint::unit(3, j).into_coords());
        }
    }

    #[test]
    fn validation() {
        assert!(SimplexMatrix::new(vec![vec![int(1), int(1)], vec![int(0), int(0)]]).is_err());
        assert!(SimplexMatrix::new(vec![vec![int(2), int(0)], vec![int(-1), int(1)]]).is_err());
        assert!(SimplexMatrix::new(vec![vec![int(1)], vec![int(0)]]).is_err());
        assert!(SimplexMatrix::new(vec![vec![int(1), ratio(1, 2)], vec![int(0), ratio(1, 3)]]).is_err());
        assert!(SimplexMatrix::identity(2).vertex(2).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = SimplexMatrix::barycentric(&"213".parse().unwrap());
        let text = g.to_text();
        assert_eq!(text, "0 1/2 1/3\n1 1/2 1/3\n0 0 1/3\n");
        assert_eq!(SimplexMatrix::parse(&text).unwrap(), g);
        assert!(SimplexMatrix::parse("1 x\n0 1\n").unwrap_err().is_parse());
    }
}
