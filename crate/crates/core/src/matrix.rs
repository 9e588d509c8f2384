//! Exact rational matrices in `Sp(2N)` with the antidiagonal form.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::roots::Root;

/// A square matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    dim: usize,
    data: Vec<Rational64>,
}

impl QMatrix {
    pub fn zeros(dim: usize) -> Self {
        QMatrix {
            dim,
            data: vec![Rational64::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = QMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Rational64::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at 1-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Rational64 {
        self.data[(row - 1) * self.dim + (col - 1)]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Rational64) {
        self.data[(row - 1) * self.dim + (col - 1)] = v;
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = QMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.data[k * d + j];
                    if !b.is_zero() {
                        out.data[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> QMatrix {
        let d = self.dim;
        let mut out = QMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j];
            }
        }
        out
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<QMatrix> {
        let d = self.dim;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(d);
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !a.data[r * d + col].is_zero())
                .ok_or_else(|| Error::validation("singular matrix"))?;
            if pivot != col {
                for j in 0..d {
                    a.data.swap(pivot * d + j, col * d + j);
                    inv.data.swap(pivot * d + j, col * d + j);
                }
            }
            let p = a.data[col * d + col];
            for j in 0..d {
                a.data[col * d + j] /= p;
                inv.data[col * d + j] /= p;
            }
            for r in 0..d {
                if r == col {
                    continue;
                }
                let f = a.data[r * d + col];
                if f.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let (ac, ic) = (a.data[col * d + j], inv.data[col * d + j]);
                    a.data[r * d + j] -= f * ac;
                    inv.data[r * d + j] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    /// 1-based positions of nonzero entries of `self - I`.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let v = self.data[i * d + j] - if i == j { Rational64::one() } else { Rational64::zero() };
                if !v.is_zero() {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.support().is_empty()
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.data[i * self.dim + j].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Sign `s_k` of the form entry in row `k`.
fn form_sign(k: usize, n: usize) -> i64 {
    if k <= n {
        1
    } else {
        -1
    }
}

/// The antidiagonal form with `J[k][2N+1-k] = +1` for `k <= N`, `-1` after.
pub fn symplectic_form(n: usize) -> QMatrix {
    let mut j = QMatrix::zeros(2 * n);
    for k in 1..=2 * n {
        j.set(k, 2 * n + 1 - k, Rational64::from_integer(form_sign(k, n)));
    }
    j
}

/// Whether `g^T J g = J`.
pub fn preserves_form(g: &QMatrix) -> bool {
    let n = g.dim() / 2;
    let j = symplectic_form(n);
    g.transpose().mul(&j).mul(g) == j
}

/// An element of `Sp(2N)` known to be unipotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnipotentElement {
    pub matrix: QMatrix,
}

impl UnipotentElement {
    pub fn identity(n: usize) -> Self {
        UnipotentElement {
            matrix: QMatrix::identity(2 * n),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.dim() / 2
    }

    pub fn mul(&self, other: &UnipotentElement) -> UnipotentElement {
        UnipotentElement {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    /// Inverse via the form: `g^{-1} = -J g^T J`.
    pub fn inverse(&self) -> UnipotentElement {
        let j = symplectic_form(self.rank());
        let mut m = j.mul(&self.matrix.transpose()).mul(&j);
        for v in m.data.iter_mut() {
            *v = -*v;
        }
        UnipotentElement { matrix: m }
    }

    /// Roots at the nonzero off-diagonal entries of `g - I`, or an error
    /// naming a diagonal entry (which no root carries).
    pub fn root_support(&self) -> std::result::Result<BTreeSet<Root>, (usize, usize)> {
        let n = self.rank();
        let mut out = BTreeSet::new();
        for (r, c) in self.matrix.support() {
            match Root::at_position(r, c, n) {
                Some(root) => {
                    out.insert(root);
                }
                None => return Err((r, c)),
            }
        }
        Ok(out)
    }

    /// Entry read at the canonical position of `root`.
    pub fn coordinate(&self, root: &Root) -> Rational64 {
        let (r, c) = root.canonical_position(self.rank());
        self.matrix.get(r, c)
    }
}

/// `x_root(t) = I + t X` with `X` the root vector fixed by the form:
/// `X = E(k,l) - s_k s_l E(l',k')` for short roots, `E(k,k')` for long ones,
/// `(k,l)` the canonical position.
pub fn one_parameter_matrix(root: &Root, t: Rational64, n: usize) -> Result<UnipotentElement> {
    if root.max_index() > n {
        return Err(Error::validation(format!("{root} does not live in Sp({})", 2 * n)));
    }
    let mut m = QMatrix::identity(2 * n);
    if t.is_zero() {
        return Ok(UnipotentElement { matrix: m });
    }
    let (k, l) = root.canonical_position(n);
    m.set(k, l, t);
    let (kp, lp) = (2 * n + 1 - k, 2 * n + 1 - l);
    if (lp, kp) != (k, l) {
        let lambda = -form_sign(k, n) * form_sign(l, n);
        m.set(lp, kp, t * Rational64::from_integer(lambda));
    }
    Ok(UnipotentElement { matrix: m })
}

/// `x y x^{-1} y^{-1}`.
pub fn commutator(x: &UnipotentElement, y: &UnipotentElement) -> Result<UnipotentElement> {
    if x.rank() != y.rank() {
        return Err(Error::validation(format!("rank mismatch: {} vs {}", x.rank(), y.rank())));
    }
    Ok(x.mul(y).mul(&x.inverse()).mul(&y.inverse()))
}
