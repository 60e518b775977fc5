//! Mixed boundary operators `B_{χ,S}` on `Λᵖ` for Dirichlet, Neumann,
//! absolute and relative conditions.

use num_traits::{One, Zero};

use super::fiber::{FiberBasis, FiberOperator};
use super::sff::SecondFundamentalForm;
use super::value::{int, Rational};
use crate::conditions::BoundaryCondition;
use crate::error::{Error, Result};

/// Fibre data of one boundary condition: `χ`, `Π±`, `S` and the tangential
/// derivatives `χ_{;a}`, all acting on the same fibre.
///
/// For relative conditions on `Λᵖ` the record lives on `Λ^{m−p}`: the Hodge
/// star carries relative conditions to absolute ones on the dual degree.
#[derive(Clone, Debug)]
pub struct BoundaryOperators {
    pub bc: BoundaryCondition,
    pub chi: FiberOperator,
    pub pi_plus: FiberOperator,
    pub pi_minus: FiberOperator,
    pub s: FiberOperator,
    pub chi_deriv: Vec<FiberOperator>,
}

impl BoundaryOperators {
    pub fn basis(&self) -> &FiberBasis {
        self.chi.domain()
    }
}

/// `ext(e_i) int(e_j)` on `Λᵖ`, built directly from the action on basis
/// subsets (the matrix-product route lives in `fiber` and is cross-checked
/// in tests).
#[cfg(test)]
pub(crate) fn ext_int_direct(basis: &FiberBasis, i: usize, j: usize) -> FiberOperator {
    let mut op = FiberOperator::zeros(basis, basis);
    add_ext_int(&mut op, i, j, &Rational::one());
    op
}

/// `op += c · ext(e_i) int(e_j)`, in place.
fn add_ext_int(op: &mut FiberOperator, i: usize, j: usize, c: &Rational) {
    let basis = op.domain().clone();
    let neg = -c;
    for (col, set) in basis.elements().iter().enumerate() {
        let Some(pos_j) = set.iter().position(|&x| x == j) else {
            continue;
        };
        let mut reduced = set.clone();
        reduced.remove(pos_j);
        if reduced.contains(&i) {
            continue;
        }
        let pos_i = reduced.iter().take_while(|&&x| x < i).count();
        reduced.insert(pos_i, i);
        let row = basis.index_of(&reduced).expect("subset in basis");
        op.add_at(row, col, if (pos_j + pos_i) % 2 == 0 { c } else { &neg });
    }
}

pub fn build_fiber_operators(
    m: usize,
    p: usize,
    bc: BoundaryCondition,
    l: &SecondFundamentalForm,
) -> Result<BoundaryOperators> {
    if p > m {
        return Err(Error::DegreeOutOfRange { m, p });
    }
    if l.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m.saturating_sub(1),
            got: l.tangent_dim(),
        });
    }
    match bc {
        BoundaryCondition::Dirichlet | BoundaryCondition::Neumann => {
            let basis = FiberBasis::new(m, p)?;
            let id = FiberOperator::identity(&basis);
            let zero = FiberOperator::zeros(&basis, &basis);
            let (pi_plus, pi_minus) = if bc == BoundaryCondition::Neumann {
                (id.clone(), zero.clone())
            } else {
                (zero.clone(), id.clone())
            };
            Ok(BoundaryOperators {
                bc,
                chi: &pi_plus - &pi_minus,
                pi_plus,
                pi_minus,
                s: zero.clone(),
                chi_deriv: vec![zero; m - 1],
            })
        }
        BoundaryCondition::Absolute => absolute(m, p, l),
        BoundaryCondition::Relative => {
            let mut ops = absolute(m, m - p, l)?;
            ops.bc = BoundaryCondition::Relative;
            Ok(ops)
        }
    }
}

fn absolute(m: usize, p: usize, l: &SecondFundamentalForm) -> Result<BoundaryOperators> {
    let basis = FiberBasis::new(m, p)?;
    let pi_minus = FiberOperator::diagonal(&basis, |i| {
        if basis.is_normal(i) {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let pi_plus = &FiberOperator::identity(&basis) - &pi_minus;
    let chi = &pi_plus - &pi_minus;

    // S = −Π₊ ext(e_a) int(e_b) L_ab Π₊
    let mut inner = FiberOperator::zeros(&basis, &basis);
    for a in 0..m - 1 {
        for b in 0..m - 1 {
            let lab = l.get(a, b);
            if lab.is_zero() {
                continue;
            }
            add_ext_int(&mut inner, a + 1, b + 1, lab);
        }
    }
    let s = -&(&(&pi_plus * &inner) * &pi_plus);

    // χ_{;a} = 2 L_ab (ext(e_b) int(e_m) + ext(e_m) int(e_b))
    let chi_deriv = (0..m - 1)
        .map(|a| {
            let mut d = FiberOperator::zeros(&basis, &basis);
            for b in 0..m - 1 {
                let lab = l.get(a, b);
                if !lab.is_zero() {
                    let c = int(2) * lab;
                    add_ext_int(&mut d, b + 1, m, &c);
                    add_ext_int(&mut d, m, b + 1, &c);
                }
            }
            d
        })
        .collect();

    Ok(BoundaryOperators {
        bc: BoundaryCondition::Absolute,
        chi,
        pi_plus,
        pi_minus,
        s,
        chi_deriv,
    })
}
