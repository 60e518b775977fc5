use num_traits::Zero;
use rand::Rng;
use serde::{Serialize, Serializer};

use super::value::{int, Rational, RationalJson};
use crate::error::{Error, Result};

/// Second fundamental form `L_ab` at a boundary point of an `m`-manifold,
/// indexed by the `m − 1` tangential directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondFundamentalForm {
    m: usize,
    entries: Vec<Vec<Rational>>,
}

impl SecondFundamentalForm {
    pub fn new(m: usize, entries: Vec<Vec<Rational>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::DimensionTooSmall {
                m,
                what: "manifold dimension must be >= 1",
            });
        }
        let n = m - 1;
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: entries.len(),
            });
        }
        for a in 0..n {
            for b in 0..a {
                if entries[a][b] != entries[b][a] {
                    return Err(Error::NonSymmetric);
                }
            }
        }
        Ok(Self { m, entries })
    }

    pub fn zero(m: usize) -> Self {
        Self::scalar(m, Rational::zero())
    }

    /// `μ · id`, the umbilic form with principal curvature `μ`.
    pub fn scalar(m: usize, mu: Rational) -> Self {
        let n = m.saturating_sub(1);
        let entries = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| if a == b { mu.clone() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self { m: m.max(1), entries }
    }

    pub fn diagonal(m: usize, diag: &[Rational]) -> Result<Self> {
        let n = diag.len();
        let entries = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| if a == b { diag[a].clone() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self::new(m, entries)
    }

    /// Seeded random symmetric form: integer numerators in `[-9, 9]` over a
    /// denominator drawn from `[1, 4]`.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let n = m.saturating_sub(1);
        let mut entries = vec![vec![Rational::zero(); n]; n];
        for a in 0..n {
            for b in a..n {
                let num = rng.gen_range(-9i64..=9);
                let den = rng.gen_range(1i64..=4);
                let q = Rational::new(num.into(), den.into());
                entries[a][b] = q.clone();
                entries[b][a] = q;
            }
        }
        Self { m: m.max(1), entries }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of tangential directions, `m − 1`.
    pub fn tangent_dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, a: usize, b: usize) -> &Rational {
        &self.entries[a][b]
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// `κ = L_aa`.
    pub fn trace(&self) -> Rational {
        (0..self.tangent_dim()).fold(Rational::zero(), |acc, a| acc + &self.entries[a][a])
    }

    /// `L_aa L_bb`.
    pub fn trace_squared(&self) -> Rational {
        let k = self.trace();
        &k * &k
    }

    /// `L_ab L_ab`.
    pub fn norm_squared(&self) -> Rational {
        self.entries
            .iter()
            .flatten()
            .fold(Rational::zero(), |acc, x| acc + x * x)
    }

    /// `(m − 1) L_ab L_ab − L_aa L_bb`, the pointwise umbilicity defect.
    pub fn umbilic_defect(&self) -> Rational {
        int(self.tangent_dim() as i64) * self.norm_squared() - self.trace_squared()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }
}

impl Serialize for SecondFundamentalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<RationalJson>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(RationalJson::from).collect())
            .collect();
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use num_traits::Signed;

    #[test]
    fn rejects_asymmetric_and_misshaped() {
        let bad = vec![vec![int(1), int(2)], vec![int(3), int(1)]];
        assert_eq!(SecondFundamentalForm::new(3, bad), Err(Error::NonSymmetric));
        assert!(matches!(
            SecondFundamentalForm::new(3, vec![vec![int(1)]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invariants_of_diag_one_two() {
        let l = SecondFundamentalForm::diagonal(3, &[int(1), int(2)]).unwrap();
        assert_eq!(l.trace(), int(3));
        assert_eq!(l.trace_squared(), int(9));
        assert_eq!(l.norm_squared(), int(5));
        assert_eq!(l.umbilic_defect(), int(1));
    }

    #[test]
    fn random_forms_are_symmetric_small_rationals() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let l = SecondFundamentalForm::random(5, &mut rng);
            assert!(SecondFundamentalForm::new(5, l.entries().to_vec()).is_ok());
            for x in l.entries().iter().flatten() {
                assert!(x.abs() <= int(9));
                assert!(*x.denom() <= 4.into());
            }
        }
    }
}
