//! Positive parts of a finite-rank lattice, encoded as flags of primitive
//! integer linear forms.
//!
//! A positive part of `Z^d` is a subset `X` with `X u -X = Z^d`,
//! `X + X c X` and `X n -X` a subgroup; it is the nonnegative locus of a
//! group morphism into a totally ordered abelian group. Every such `X` is
//! `Pos(phi_1, ..., phi_r)` for a flag of forms, each nonzero on the common
//! kernel of the previous ones, evaluated lexicographically. This module
//! stores the canonical flag (echelon-reduced, primitive, positively
//! scaled), so equality of positive parts is equality of flags.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feas::{self, Separation};
use crate::linalg::{self, dot, is_zero_vec, make_primitive};

/// Labelled basis of the ambient lattice (the classes of `S` in the main
/// application, or abstract labels).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    labels: Vec<String>,
}

impl LatticeBasis {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Parse("a lattice basis needs at least one label".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::Parse(format!("duplicate basis label `{a}`")));
            }
        }
        Ok(LatticeBasis { labels })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Sign of a lattice point relative to a positive part: `Positive` for the
/// strict part `X+`, `Zero` for the subgroup `X n -X`, `Negative` for `-X+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: i64) -> Sign {
        match x.cmp(&0) {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// A positive part of `Z^dim` in canonical flag form.
///
/// The empty flag is the whole lattice. Flags of length `dim` are exactly
/// the total group orders on the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositivePart {
    dim: usize,
    flag: Vec<Vec<i64>>,
}

/// Canonicalizes one more form against an echelon flag: eliminate the pivot
/// coordinates of the stored forms (scaling only by positive amounts, so the
/// positive side is preserved), then reduce to a primitive vector.
fn reduce_against(flag: &[Vec<i64>], form: &[i64]) -> Vec<i64> {
    let mut f = form.to_vec();
    make_primitive(&mut f);
    for phi in flag {
        let p = phi.iter().position(|&x| x != 0).expect("stored forms are nonzero");
        if f[p] == 0 {
            continue;
        }
        let scale = phi[p].abs();
        let mult = if phi[p] > 0 { f[p] } else { -f[p] };
        for (fi, &pi) in f.iter_mut().zip(phi) {
            *fi = fi
                .checked_mul(scale)
                .and_then(|x| x.checked_sub(mult.checked_mul(pi)?))
                .expect("flag reduction overflow");
        }
        make_primitive(&mut f);
        debug_assert_eq!(f[p], 0);
    }
    f
}

impl PositivePart {
    /// The whole lattice (`Pos` of the empty flag).
    pub fn whole(dim: usize) -> Self {
        PositivePart { dim, flag: Vec::new() }
    }

    /// Builds the canonical flag from a list of integer forms.
    ///
    /// Forms are processed left to right; one that vanishes on the current
    /// kernel sublattice is dropped, the others are reduced to the canonical
    /// primitive representative. Positive rescaling of any input leaves the
    /// result unchanged.
    pub fn new(dim: usize, forms: &[Vec<i64>]) -> Result<Self> {
        let mut flag: Vec<Vec<i64>> = Vec::new();
        for form in forms {
            if form.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: form.len() });
            }
            if flag.len() == dim {
                break; // kernel is already zero
            }
            let f = reduce_against(&flag, form);
            if !is_zero_vec(&f) {
                flag.push(f);
            }
        }
        Ok(PositivePart { dim, flag })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The canonical flag of forms.
    pub fn flag(&self) -> &[Vec<i64>] {
        &self.flag
    }

    /// Lexicographic sign of `(phi_1(v), ..., phi_r(v))`; classifies `v`
    /// into `X+`, `X n -X` or `-X+`.
    pub fn sign_of(&self, v: &[i64]) -> Result<Sign> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        for phi in &self.flag {
            match Sign::of(dot(phi, v)) {
                Sign::Zero => continue,
                s => return Ok(s),
            }
        }
        Ok(Sign::Zero)
    }

    /// First form of the flag; `None` for the whole lattice.
    pub fn leading_form(&self) -> Option<&[i64]> {
        self.flag.first().map(|f| f.as_slice())
    }

    /// True iff the flag induces a total order (zero common kernel).
    pub fn is_total_order(&self) -> bool {
        self.flag.len() == self.dim
    }

    /// Restriction `X n Ker(phi_1)`, written in the coordinates of
    /// [`kernel_basis`] of the leading form.
    pub fn restrict_to_kernel(&self) -> Result<PositivePart> {
        let lead = self.flag.first().ok_or(Error::EmptyFlag)?;
        let kernel = linalg::kernel_of_form(lead);
        let composed: Vec<Vec<i64>> = self.flag[1..]
            .iter()
            .map(|phi| kernel.iter().map(|col| dot(phi, col)).collect())
            .collect();
        PositivePart::new(self.dim - 1, &composed)
    }

    /// Inverse of [`PositivePart::restrict_to_kernel`]: prepends `phi` to a flag given on
    /// the kernel sublattice of `phi` (in [`kernel_basis`] coordinates).
    pub fn fiber_insert(phi: &[i64], x_ker: &PositivePart) -> Result<PositivePart> {
        if is_zero_vec(phi) {
            return Err(Error::ZeroForm);
        }
        let dim = phi.len();
        if x_ker.dim != dim - 1 {
            return Err(Error::DimensionMismatch { expected: dim - 1, got: x_ker.dim });
        }
        let kernel = linalg::kernel_of_form(phi);
        let left_inv = left_inverse(&kernel, dim);
        let mut forms = vec![phi.to_vec()];
        for psi in &x_ker.flag {
            // psi' = psi . L satisfies psi'(K y) = psi(y).
            let lifted: Vec<i64> = (0..dim)
                .map(|j| (0..dim - 1).fold(0i64, |s, i| s + psi[i] * left_inv[i][j]))
                .collect();
            forms.push(lifted);
        }
        PositivePart::new(dim, &forms)
    }

    /// Pullback along an integer matrix `sigma` (rows x cols = target dim x
    /// source dim): the positive part `{v : sigma v in X}` of the source.
    pub fn pullback(&self, sigma: &[Vec<i64>]) -> Result<PositivePart> {
        if sigma.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: sigma.len() });
        }
        let source_dim = sigma.first().map_or(0, |r| r.len());
        if sigma.iter().any(|r| r.len() != source_dim) || (self.dim > 0 && source_dim == 0) {
            return Err(Error::Parse("ragged or empty pullback matrix".into()));
        }
        let composed: Vec<Vec<i64>> = self
            .flag
            .iter()
            .map(|phi| (0..source_dim).map(|j| (0..self.dim).fold(0i64, |s, i| s + phi[i] * sigma[i][j])).collect())
            .collect();
        PositivePart::new(source_dim, &composed)
    }

    /// Pullback along the reflection negating coordinate `idx`.
    pub fn reflect(&self, idx: usize) -> Result<PositivePart> {
        if idx >= self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: idx });
        }
        let mut sigma = linalg::identity(self.dim);
        sigma[idx][idx] = -1;
        self.pullback(&sigma)
    }

    /// Image of `X` in the quotient by the saturation of `span(E)`,
    /// for `X` vanishing on `E`. Coordinates are those of the complement
    /// basis from [`linalg::saturation_split`].
    pub fn quotient_restrict(&self, e: &[Vec<i64>]) -> Result<PositivePart> {
        for v in e {
            if self.sign_of(v)? != Sign::Zero {
                return Err(Error::Precondition(format!(
                    "quotient_restrict: X does not vanish on {v:?}"
                )));
            }
        }
        let split = linalg::saturation_split(self.dim, e);
        let composed: Vec<Vec<i64>> = self
            .flag
            .iter()
            .map(|phi| split.comp_basis.iter().map(|col| dot(phi, col)).collect())
            .collect();
        PositivePart::new(self.dim - split.rank, &composed)
    }
}

/// Deterministic integer basis of `Ker(phi) n Z^d` (columns). Shared by
/// [`PositivePart::restrict_to_kernel`] and [`PositivePart::fiber_insert`].
pub fn kernel_basis(phi: &[i64]) -> Vec<Vec<i64>> {
    linalg::kernel_of_form(phi)
}

/// Integer left inverse of a saturated column basis.
fn left_inverse(cols: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    // cols as a dim x k matrix; SNF has unit diagonal by saturation.
    let k = cols.len();
    let m: linalg::Mat = (0..dim).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let snf = linalg::smith_normal_form(&m);
    assert!(snf.rank == k && snf.diag.iter().take(k).all(|&d| d == 1), "basis is not saturated");
    // L = Q [I 0] P, a k x dim matrix.
    (0..k)
        .map(|i| {
            (0..dim)
                .map(|j| (0..k).fold(0i64, |s, l| s + snf.q[i][l] * snf.p[l][j]))
                .collect()
        })
        .collect()
}

/// Certificate for the emptiness question on `U(E) = {X : X n E = {}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UEmptiness {
    /// `U(E)` is empty: positive integers `r_i` on members of `E` with
    /// `sum r_i lambda_i = 0`.
    Empty { relation: Vec<(Vec<i64>, i64)> },
    /// `U(E)` is nonempty: an integer form strictly positive on all of `E`
    /// (so `Pos(-phi)` avoids `E`).
    Nonempty { witness: Vec<i64> },
}

/// Decides whether `U(E)` is empty, with an integer certificate either way.
pub fn u_empty(dim: usize, e: &[Vec<i64>]) -> Result<UEmptiness> {
    for v in e {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
    }
    Ok(match feas::separate(dim, e) {
        Separation::Witness(phi) => UEmptiness::Nonempty { witness: phi },
        Separation::Relation(rel) => UEmptiness::Empty {
            relation: rel.into_iter().map(|(i, c)| (e[i].clone(), c)).collect(),
        },
    })
}

/// Membership of `X` in the closure of `U(E)`, for finite `E` with
/// `U(E)` nonempty: holds iff no element of `E` is in the strict part of
/// `X`. Refuses `U(E) = {}`, where the closure formula is invalid.
pub fn in_closure_of_u(x: &PositivePart, e: &[Vec<i64>]) -> Result<bool> {
    match u_empty(x.dim(), e)? {
        UEmptiness::Empty { .. } => Err(Error::Precondition(
            "in_closure_of_u requires U(E) to be nonempty".into(),
        )),
        UEmptiness::Nonempty { .. } => {
            for v in e {
                if x.sign_of(v)? == Sign::Positive {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
