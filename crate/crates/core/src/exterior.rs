//! Exterior-algebra layer: Plücker coordinates (wedge products) of vectors
//! whose entries are polynomials, and Hermitian pairings under diagonal
//! coordinate metrics.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hermpoly::{HermPoly, Monomial, UniPoly};
use crate::scalar::Scalar;

/// Commutative ring of vector entries.
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Whether zero tests and exact division are reliable.
    const EXACT: bool;

    fn div_exact(&self, d: &Self) -> Option<Self>;
}

impl<F: Scalar> Ring for HermPoly<F> {
    const EXACT: bool = F::EXACT;
    fn div_exact(&self, d: &Self) -> Option<Self> {
        HermPoly::div_exact(self, d)
    }
}

impl<F: Scalar> Ring for UniPoly<F> {
    const EXACT: bool = F::EXACT;
    fn div_exact(&self, d: &Self) -> Option<Self> {
        UniPoly::div_exact(self, d)
    }
}

/// Vector of `n` ring elements; a local section of the trivial bundle.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyVector<R> {
    entries: Vec<R>,
}

impl<R> PolyVector<R> {
    pub fn new(entries: Vec<R>) -> Self {
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<R> {
        self.entries
    }

    pub fn map<S>(&self, f: impl FnMut(&R) -> S) -> PolyVector<S> {
        PolyVector { entries: self.entries.iter().map(f).collect() }
    }
}

impl<R: Ring> PolyVector<R> {
    pub fn zeros(n: usize) -> Self {
        Self { entries: vec![R::zero(); n] }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|e| e.clone() * c)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.clone() + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.clone() - b).collect() }
    }

    /// Kronecker product, first factor outermost.
    pub fn kron(&self, o: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.dim() * o.dim());
        for a in &self.entries {
            for b in &o.entries {
                entries.push(a.clone() * b);
            }
        }
        Self { entries }
    }
}

impl<F: Scalar> PolyVector<UniPoly<F>> {
    pub fn derivative(&self) -> Self {
        self.map(UniPoly::derivative)
    }

    pub fn to_herm(&self) -> PolyVector<HermPoly<F>> {
        self.map(UniPoly::to_herm)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(UniPoly::degree).max()
    }
}

impl<F: Scalar> PolyVector<HermPoly<F>> {
    pub fn diff(&self, var: crate::hermpoly::Var) -> Self {
        self.map(|e| e.diff(var))
    }
}

/// Position of a sorted `k`-subset of `{0, …, n−1}` among all `C(n, k)`
/// subsets in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PluckerIndex {
    subset: Vec<usize>,
}

impl PluckerIndex {
    pub fn new(subset: Vec<usize>, n: usize) -> Result<Self> {
        let increasing = subset.windows(2).all(|w| w[0] < w[1]);
        if !increasing || subset.last().is_some_and(|&l| l >= n) {
            return Err(Error::InvalidInput(format!("{subset:?} is not a sorted subset of 0..{n}")));
        }
        Ok(Self { subset })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// Lexicographic rank among the `C(n, k)` subsets.
    pub fn position(&self, n: usize) -> usize {
        let k = self.subset.len();
        let mut pos = 0;
        let mut prev = 0;
        for (i, &s) in self.subset.iter().enumerate() {
            for skipped in prev..s {
                pos += binomial(n - skipped - 1, k - i - 1);
            }
            prev = s + 1;
        }
        pos
    }

    pub fn from_position(mut pos: usize, n: usize, k: usize) -> Result<Self> {
        if pos >= binomial(n, k) {
            return Err(Error::IndexOutOfRange { index: pos, bound: binomial(n, k) });
        }
        let mut subset = Vec::with_capacity(k);
        let mut next = 0;
        for i in 0..k {
            loop {
                let block = binomial(n - next - 1, k - i - 1);
                if pos < block {
                    break;
                }
                pos -= block;
                next += 1;
            }
            subset.push(next);
            next += 1;
        }
        Ok(Self { subset })
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Determinant of a square matrix over a commutative ring.
///
/// Exact rings use fraction-free (Bareiss) elimination, which keeps every
/// intermediate entry a minor of the input. Inexact rings fall back to
/// cofactor expansion so no pivoting decision depends on a rounded zero test.
pub fn determinant<R: Ring>(m: &[Vec<R>]) -> R {
    let k = m.len();
    match k {
        0 => return R::one(),
        1 => return m[0][0].clone(),
        2 => return m[0][0].clone() * &m[1][1] - &(m[0][1].clone() * &m[1][0]),
        _ => {}
    }
    if !R::EXACT {
        return cofactor_det(m);
    }
    let mut a: Vec<Vec<R>> = m.to_vec();
    let mut sign = false;
    let mut prev = R::one();
    for p in 0..k - 1 {
        if a[p][p].is_zero() {
            let Some(swap) = (p + 1..k).find(|&r| !a[r][p].is_zero()) else {
                return R::zero();
            };
            a.swap(p, swap);
            sign = !sign;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let t = a[i][j].clone() * &a[p][p] - &(a[i][p].clone() * &a[p][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[p][p].clone();
    }
    let d = a[k - 1][k - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

fn cofactor_det<R: Ring>(m: &[Vec<R>]) -> R {
    let k = m.len();
    if k <= 2 {
        return determinant(m);
    }
    let mut acc = R::zero();
    for c in 0..k {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<R>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, e)| e.clone()).collect())
            .collect();
        let t = m[0][c].clone() * &cofactor_det(&minor);
        acc = if c % 2 == 0 { acc + &t } else { acc - &t };
    }
    acc
}

/// Plücker coordinates of `v_1 ∧ … ∧ v_k`: entry at subset `S` (lex order)
/// is the `k×k` minor of the stacked rows on columns `S`.
pub fn wedge<R: Ring>(vectors: &[PolyVector<R>], n: usize) -> Result<PolyVector<R>> {
    let k = vectors.len();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("cannot wedge {k} vectors in dimension {n}")));
    }
    if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
    }
    let entries = subsets(n, k)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Vec<R>> = vectors
                .iter()
                .map(|v| cols.iter().map(|&c| v.entries[c].clone()).collect())
                .collect();
            determinant(&sub)
        })
        .collect();
    Ok(PolyVector { entries })
}

/// Rank of a matrix over the coefficient field by Gaussian elimination.
/// Float fields treat entries below `1e-9` times the largest entry as zero.
pub fn matrix_rank<F: Scalar>(mut rows: Vec<Vec<F>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let scale = rows.iter().flatten().map(|c| c.to_c64().norm()).fold(0.0, f64::max);
    let tiny = |c: &F| if F::EXACT { c.is_zero() } else { c.to_c64().norm() <= 1e-9 * scale };
    let mut rank = 0;
    for c in 0..cols {
        let pivot = if F::EXACT {
            (rank..rows.len()).find(|&r| !rows[r][c].is_zero())
        } else {
            (rank..rows.len())
                .filter(|&r| !tiny(&rows[r][c]))
                .max_by(|&a, &b| rows[a][c].to_c64().norm().total_cmp(&rows[b][c].to_c64().norm()))
        };
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let inv = F::one() / rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = rows[r][c].mul_ref(&inv);
            for k in c..cols {
                let t = f.mul_ref(&rows[rank][k]);
                rows[r][k].sub_assign_ref(&t);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Diagonal Hermitian metric `⟨v, w⟩ = Σ λ_i v_i conj(w_i)` with positive
/// rational coordinate weights. A coordinate of weight `λ` stands for an
/// entry scaled by `√λ`, which lets curves such as `(1, √2 z, z²)` stay in
/// exact arithmetic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalMetric {
    weights: Vec<BigRational>,
}

impl DiagonalMetric {
    pub fn identity(n: usize) -> Self {
        Self { weights: vec![BigRational::one(); n] }
    }

    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight);
        }
        Ok(Self { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn is_identity(&self) -> bool {
        self.weights.iter().all(One::is_one)
    }

    /// Induced metric on `Λ^k`, in lexicographic Plücker order.
    pub fn wedge_power(&self, k: usize) -> Self {
        let weights = subsets(self.dim(), k)
            .into_iter()
            .map(|s| s.iter().map(|&i| self.weights[i].clone()).product())
            .collect();
        Self { weights }
    }

    pub fn tensor(&self, o: &Self) -> Self {
        let mut weights = Vec::with_capacity(self.dim() * o.dim());
        for a in &self.weights {
            for b in &o.weights {
                weights.push(a * b);
            }
        }
        Self { weights }
    }

    /// Metric seen through the coordinate permutation `new[i] = old[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { weights: perm.iter().map(|&p| self.weights[p].clone()).collect() }
    }

    pub fn pairing<F: Scalar>(
        &self,
        v: &PolyVector<HermPoly<F>>,
        w: &PolyVector<HermPoly<F>>,
    ) -> Result<HermPoly<F>> {
        if v.dim() != w.dim() {
            return Err(Error::DimensionMismatch { expected: v.dim(), found: w.dim() });
        }
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        let mut acc = HermPoly::zero();
        for ((a, b), lam) in v.entries.iter().zip(&w.entries).zip(&self.weights) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let t = a * &b.conj();
            acc = if lam.is_one() { acc + t } else { acc + t.scale(&F::from_rational(lam)) };
        }
        Ok(acc)
    }

    pub fn norm_square<F: Scalar>(&self, v: &PolyVector<HermPoly<F>>) -> Result<HermPoly<F>> {
        self.pairing(v, v)
    }

    /// `Σ λ_i |p_i(z)|²` for holomorphic entries, assembled directly from the
    /// coefficient matrix.
    pub fn hol_norm_square<F: Scalar>(&self, v: &PolyVector<UniPoly<F>>) -> Result<HermPoly<F>> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        let deg = v.max_degree().unwrap_or(0);
        let mut terms = Vec::new();
        for a in 0..=deg {
            for b in 0..=deg {
                let mut c = F::zero();
                for (p, lam) in v.entries.iter().zip(&self.weights) {
                    let (pa, pb) = (p.coeff(a), p.coeff(b));
                    if pa.is_zero() || pb.is_zero() {
                        continue;
                    }
                    let t = pa.mul_ref(&pb.conj());
                    if lam.is_one() {
                        c.add_assign_ref(&t);
                    } else {
                        c.add_assign_ref(&t.mul_ref(&F::from_rational(lam)));
                    }
                }
                terms.push((Monomial::new(a as u32, b as u32), c));
            }
        }
        Ok(HermPoly::from_terms(terms))
    }
}

/// `Σ v_i conj(v_i)` under the standard inner product.
pub fn norm_square<F: Scalar>(v: &PolyVector<HermPoly<F>>) -> HermPoly<F> {
    DiagonalMetric::identity(v.dim()).norm_square(v).expect("dimensions agree")
}

/// `Σ v_i conj(w_i)` under the standard inner product.
pub fn hermitian_pairing<F: Scalar>(
    v: &PolyVector<HermPoly<F>>,
    w: &PolyVector<HermPoly<F>>,
) -> Result<HermPoly<F>> {
    DiagonalMetric::identity(v.dim()).pairing(v, w)
}
