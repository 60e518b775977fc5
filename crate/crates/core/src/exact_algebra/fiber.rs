//! Exterior algebra on a single fibre `Λᵖ(ℝᵐ)` with exact rational entries.
//!
//! Basis elements are increasing index sets `I ⊂ {1..m}` in lexicographic
//! order, so the normal index `m` always sits last inside a subset and the
//! tangential/normal projections come out as diagonal 0/1 matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::value::{int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberBasis {
    m: usize,
    p: usize,
    elements: Vec<Vec<usize>>,
}

impl FiberBasis {
    pub fn new(m: usize, p: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::DimensionTooSmall {
                m,
                what: "fibre needs m >= 1",
            });
        }
        if p > m {
            return Err(Error::DegreeOutOfRange { m, p });
        }
        let mut elements = Vec::with_capacity(binomial(m, p) as usize);
        let mut current = Vec::with_capacity(p);
        subsets(1, m, p, &mut current, &mut elements);
        Ok(Self { m, p, elements })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        self.elements.binary_search_by(|e| e.as_slice().cmp(subset)).ok()
    }

    /// Whether basis element `i` contains the normal direction `e_m`.
    pub fn is_normal(&self, i: usize) -> bool {
        self.elements[i].last() == Some(&self.m)
    }
}

fn subsets(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for i in start..=m {
        if m - i + 1 < left {
            break;
        }
        cur.push(i);
        subsets(i + 1, m, left - 1, cur, out);
        cur.pop();
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Exact linear map `Λ^{p_dom} → Λ^{p_cod}`, stored densely (row = codomain).
#[derive(Clone, Debug, PartialEq)]
pub struct FiberOperator {
    domain: FiberBasis,
    codomain: FiberBasis,
    entries: Vec<Vec<Rational>>,
}

impl FiberOperator {
    pub fn zeros(domain: &FiberBasis, codomain: &FiberBasis) -> Self {
        assert_eq!(domain.m, codomain.m, "fibres of different dimension");
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            entries: vec![vec![Rational::zero(); domain.dim()]; codomain.dim()],
        }
    }

    pub fn identity(basis: &FiberBasis) -> Self {
        Self::scalar(basis, Rational::one())
    }

    pub fn scalar(basis: &FiberBasis, c: Rational) -> Self {
        let mut op = Self::zeros(basis, basis);
        for i in 0..basis.dim() {
            op.entries[i][i] = c.clone();
        }
        op
    }

    pub fn diagonal(basis: &FiberBasis, diag: impl Fn(usize) -> Rational) -> Self {
        let mut op = Self::zeros(basis, basis);
        for i in 0..basis.dim() {
            op.entries[i][i] = diag(i);
        }
        op
    }

    pub fn domain(&self) -> &FiberBasis {
        &self.domain
    }

    pub fn codomain(&self) -> &FiberBasis {
        &self.codomain
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> usize {
        self.codomain.dim()
    }

    pub fn cols(&self) -> usize {
        self.domain.dim()
    }

    pub fn is_square(&self) -> bool {
        self.domain == self.codomain
    }

    pub(crate) fn add_at(&mut self, row: usize, col: usize, value: &Rational) {
        self.entries[row][col] += value;
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square(), "trace of a non-square fibre operator");
        (0..self.rows()).fold(Rational::zero(), |acc, i| acc + &self.entries[i][i])
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for row in &mut out.entries {
            for x in row {
                *x = &*x * c;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }

    /// Trace of `self · other` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Rational {
        assert_eq!(self.domain, other.codomain);
        assert_eq!(self.codomain, other.domain);
        let mut acc = Rational::zero();
        for i in 0..self.rows() {
            for (k, a) in self.entries[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let b = &other.entries[k][i];
                if !b.is_zero() {
                    acc += a * b;
                }
            }
        }
        acc
    }
}

impl fmt::Display for FiberOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a FiberOperator> for &'a FiberOperator {
    type Output = FiberOperator;
    fn mul(self, rhs: &FiberOperator) -> FiberOperator {
        assert_eq!(self.domain, rhs.codomain, "composition of incompatible fibre operators");
        let mut out = FiberOperator::zeros(&rhs.domain, &self.codomain);
        for i in 0..self.rows() {
            for (k, a) in self.entries[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols() {
                    let b = &rhs.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a FiberOperator> for &'a FiberOperator {
    type Output = FiberOperator;
    fn add(self, rhs: &FiberOperator) -> FiberOperator {
        assert_eq!(self.domain, rhs.domain);
        assert_eq!(self.codomain, rhs.codomain);
        let mut out = self.clone();
        for (row, r) in out.entries.iter_mut().zip(&rhs.entries) {
            for (x, y) in row.iter_mut().zip(r) {
                *x += y;
            }
        }
        out
    }
}

impl<'a> Sub<&'a FiberOperator> for &'a FiberOperator {
    type Output = FiberOperator;
    fn sub(self, rhs: &FiberOperator) -> FiberOperator {
        self + &(-rhs)
    }
}

impl Neg for &FiberOperator {
    type Output = FiberOperator;
    fn neg(self) -> FiberOperator {
        self.scaled(&int(-1))
    }
}

/// Number of indices of `set` strictly below `i`; the shuffle sign of moving
/// `e_i` to its sorted slot is `(-1)^count`.
fn below(set: &[usize], i: usize) -> usize {
    set.iter().take_while(|&&j| j < i).count()
}

fn sign(count: usize) -> Rational {
    if count % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// Left exterior multiplication `ext(e_i): Λᵖ → Λᵖ⁺¹`.
pub fn ext(m: usize, p: usize, i: usize) -> Result<FiberOperator> {
    if p >= m {
        return Err(Error::DegreeOutOfRange { m, p: p + 1 });
    }
    let dom = FiberBasis::new(m, p)?;
    let cod = FiberBasis::new(m, p + 1)?;
    let mut op = FiberOperator::zeros(&dom, &cod);
    for (col, set) in dom.elements.iter().enumerate() {
        if set.contains(&i) {
            continue;
        }
        let pos = below(set, i);
        let mut target = set.clone();
        target.insert(pos, i);
        let row = cod.index_of(&target).expect("subset present in basis");
        op.entries[row][col] = sign(pos);
    }
    Ok(op)
}

/// Left interior multiplication `int(e_i): Λᵖ → Λᵖ⁻¹`, the adjoint of `ext(e_i)`.
pub fn int_mul(m: usize, p: usize, i: usize) -> Result<FiberOperator> {
    if p == 0 || p > m {
        return Err(Error::DegreeOutOfRange { m, p });
    }
    let dom = FiberBasis::new(m, p)?;
    let cod = FiberBasis::new(m, p - 1)?;
    let mut op = FiberOperator::zeros(&dom, &cod);
    for (col, set) in dom.elements.iter().enumerate() {
        if let Some(pos) = set.iter().position(|&j| j == i) {
            let mut target = set.clone();
            target.remove(pos);
            let row = cod.index_of(&target).expect("subset present in basis");
            op.entries[row][col] = sign(pos);
        }
    }
    Ok(op)
}

/// `ext(e_i) ∘ int(e_j)` on `Λᵖ`, the zero map when `p = 0`.
pub fn ext_int(m: usize, p: usize, i: usize, j: usize) -> Result<FiberOperator> {
    let basis = FiberBasis::new(m, p)?;
    if p == 0 {
        return Ok(FiberOperator::zeros(&basis, &basis));
    }
    Ok(&ext(m, p - 1, i)? * &int_mul(m, p, j)?)
}

/// `int(e_j) ∘ ext(e_i)` on `Λᵖ`, the zero map when `p = m`.
pub fn int_ext(m: usize, p: usize, j: usize, i: usize) -> Result<FiberOperator> {
    let basis = FiberBasis::new(m, p)?;
    if p == m {
        return Ok(FiberOperator::zeros(&basis, &basis));
    }
    Ok(&int_mul(m, p + 1, j)? * &ext(m, p, i)?)
}
