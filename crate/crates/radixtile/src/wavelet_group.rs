//! Exact arithmetic in `Z^d[A^-1]` and in the group `Z^d[A^-1] ⋊ Z`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exact_linalg::{int_add, IntMatrix, IntVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix is singular")]
    Singular,
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// The element `A^-n k`, with `n` reduced as far as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicLikeElement {
    exponent: u64,
    vec: IntVector,
}

impl DyadicLikeElement {
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn vec(&self) -> &IntVector {
        &self.vec
    }
}

/// `(j, b)` acting by `x -> A^j x + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub j: i64,
    pub b: DyadicLikeElement,
}

/// Fixed matrix `A` with its adjugate, shared by all group operations.
#[derive(Clone, Debug)]
pub struct GroupContext {
    a: IntMatrix,
    adj: IntMatrix,
    det: BigInt,
}

impl GroupContext {
    pub fn new(a: IntMatrix) -> Result<Self, GroupError> {
        let det = a.det();
        if det.is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(Self {
            adj: a.adjugate(),
            a,
            det,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    /// `A^-1 k` when it is integral.
    fn try_div(&self, k: &[BigInt]) -> Option<IntVector> {
        let v = self.adj.mul_vec(k);
        if v.iter().all(|x| (x % &self.det).is_zero()) {
            Some(v.into_iter().map(|x| x / &self.det).collect())
        } else {
            None
        }
    }

    /// Canonical form of `A^-n k`.
    pub fn element(&self, n: u64, k: IntVector) -> DyadicLikeElement {
        let mut n = n;
        let mut k = k;
        if k.iter().all(|x| x.is_zero()) {
            return DyadicLikeElement {
                exponent: 0,
                vec: k,
            };
        }
        while n > 0 {
            match self.try_div(&k) {
                Some(q) => {
                    k = q;
                    n -= 1;
                }
                None => break,
            }
        }
        DyadicLikeElement {
            exponent: n,
            vec: k,
        }
    }

    pub fn zero(&self) -> DyadicLikeElement {
        DyadicLikeElement {
            exponent: 0,
            vec: vec![BigInt::zero(); self.dim()],
        }
    }

    fn raise(&self, x: &DyadicLikeElement, n: u64) -> IntVector {
        // A^-m k = A^-n (A^(n-m) k)
        self.a.pow((n - x.exponent) as u32).mul_vec(&x.vec)
    }

    pub fn add(&self, x: &DyadicLikeElement, y: &DyadicLikeElement) -> DyadicLikeElement {
        let n = x.exponent.max(y.exponent);
        self.element(n, int_add(&self.raise(x, n), &self.raise(y, n)))
    }

    pub fn neg(&self, x: &DyadicLikeElement) -> DyadicLikeElement {
        DyadicLikeElement {
            exponent: x.exponent,
            vec: x.vec.iter().map(|v| -v).collect(),
        }
    }

    /// `A^power x`.
    pub fn scale_by_a(&self, x: &DyadicLikeElement, power: i64) -> DyadicLikeElement {
        if power >= 0 {
            let p = power as u64;
            if p <= x.exponent {
                self.element(x.exponent - p, x.vec.clone())
            } else {
                let v = self.a.pow((p - x.exponent) as u32).mul_vec(&x.vec);
                self.element(0, v)
            }
        } else {
            self.element(x.exponent + power.unsigned_abs(), x.vec.clone())
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            j: 0,
            b: self.zero(),
        }
    }

    /// The dilation `u = (1, 0)`.
    pub fn u(&self) -> GroupElement {
        GroupElement {
            j: 1,
            b: self.zero(),
        }
    }

    /// The translation `t_k = (0, k)`.
    pub fn t(&self, k: IntVector) -> GroupElement {
        GroupElement {
            j: 0,
            b: self.element(0, k),
        }
    }

    /// `(j, b)(k, c) = (j + k, A^j c + b)`.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        GroupElement {
            j: g.j + h.j,
            b: self.add(&self.scale_by_a(&h.b, g.j), &g.b),
        }
    }

    /// `(j, b)^-1 = (-j, -A^-j b)`.
    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        GroupElement {
            j: -g.j,
            b: self.neg(&self.scale_by_a(&g.b, -g.j)),
        }
    }

    pub fn pow(&self, g: &GroupElement, n: i64) -> GroupElement {
        let base = if n < 0 { self.inv(g) } else { g.clone() };
        (0..n.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(&acc, &base))
    }
}
