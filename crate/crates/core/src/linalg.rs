//! Small exact integer linear algebra: gcd normalization, Smith normal
//! form with transform matrices, kernel bases and saturation splits.
//!
//! Everything here works on row-major `Vec<Vec<i64>>` matrices. The inputs
//! in this crate are tiny (lattice ranks up to a handful), so no effort is
//! spent on asymptotics; overflow checks stay on in every profile.

pub type Mat = Vec<Vec<i64>>;

pub fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Divides a vector by the (positive) gcd of its entries. Zero stays zero.
pub fn make_primitive(v: &mut [i64]) {
    let g = v.iter().fold(0i64, |acc, &x| gcd(acc, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

pub fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x.checked_mul(y).expect("dot overflow")).fold(0i64, |s, t| {
        s.checked_add(t).expect("dot overflow")
    })
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// `rows × cols` product of row-major matrices.
pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = if n == 0 { 0 } else { a[0].len() };
    let m = if k == 0 { 0 } else { b[0].len() };
    assert!(b.len() == k, "shape mismatch in mat_mul");
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(0i64, |s, l| {
                        s.checked_add(a[i][l].checked_mul(b[l][j]).expect("mat_mul overflow"))
                            .expect("mat_mul overflow")
                    })
                })
                .collect()
        })
        .collect()
}

/// Applies a row-major matrix to a column vector.
pub fn mat_apply(a: &Mat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| dot(row, v)).collect()
}

/// Smith normal form `p * m * q = diag` with unimodular `p`, `q`.
///
/// `diag` entries are nonnegative and each divides the next; `rank` is the
/// number of nonzero entries. `p_inv` is maintained alongside `p` so that
/// saturation bases can be read off without a separate inversion.
pub struct Snf {
    pub p: Mat,
    pub p_inv: Mat,
    pub q: Mat,
    pub diag: Vec<i64>,
    pub rank: usize,
}

pub fn smith_normal_form(m: &Mat) -> Snf {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut b = m.clone();
    let mut p = identity(rows);
    let mut p_inv = identity(rows);
    let mut q = identity(cols);

    let swap_rows = |b: &mut Mat, p: &mut Mat, p_inv: &mut Mat, i: usize, j: usize| {
        b.swap(i, j);
        p.swap(i, j);
        for row in p_inv.iter_mut() {
            row.swap(i, j);
        }
    };
    let swap_cols = |b: &mut Mat, q: &mut Mat, i: usize, j: usize| {
        for row in b.iter_mut() {
            row.swap(i, j);
        }
        for row in q.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i += c * row_j
    let add_row = |b: &mut Mat, p: &mut Mat, p_inv: &mut Mat, i: usize, j: usize, c: i64| {
        for col in 0..cols {
            b[i][col] = b[i][col].checked_add(c.checked_mul(b[j][col]).unwrap()).unwrap();
        }
        for col in 0..rows {
            p[i][col] = p[i][col].checked_add(c.checked_mul(p[j][col]).unwrap()).unwrap();
        }
        for row in p_inv.iter_mut() {
            row[j] = row[j].checked_sub(c.checked_mul(row[i]).unwrap()).unwrap();
        }
    };
    // col_i += c * col_j
    let add_col = |b: &mut Mat, q: &mut Mat, i: usize, j: usize, c: i64| {
        for row in b.iter_mut() {
            row[i] = row[i].checked_add(c.checked_mul(row[j]).unwrap()).unwrap();
        }
        for row in q.iter_mut() {
            row[i] = row[i].checked_add(c.checked_mul(row[j]).unwrap()).unwrap();
        }
    };
    let negate_row = |b: &mut Mat, p: &mut Mat, p_inv: &mut Mat, i: usize| {
        for col in 0..cols {
            b[i][col] = -b[i][col];
        }
        for col in 0..rows {
            p[i][col] = -p[i][col];
        }
        for row in p_inv.iter_mut() {
            row[i] = -row[i];
        }
    };

    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        // Smallest nonzero pivot in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if b[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| b[i][j].abs() < b[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut b, &mut p, &mut p_inv, k, pi);
        swap_cols(&mut b, &mut q, k, pj);
        if b[k][k] < 0 {
            negate_row(&mut b, &mut p, &mut p_inv, k);
        }

        let mut clean = true;
        for i in k + 1..rows {
            if b[i][k] != 0 {
                let c = -(b[i][k] / b[k][k]);
                add_row(&mut b, &mut p, &mut p_inv, i, k, c);
                if b[i][k] != 0 {
                    clean = false;
                }
            }
        }
        for j in k + 1..cols {
            if b[k][j] != 0 {
                let c = -(b[k][j] / b[k][k]);
                add_col(&mut b, &mut q, j, k, c);
                if b[k][j] != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // pivot shrank; repeat with the remainder
        }

        // Divisibility: fold in any entry the pivot does not divide.
        let mut fixed = true;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if b[i][j] % b[k][k] != 0 {
                    add_row(&mut b, &mut p, &mut p_inv, k, i, 1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            k += 1;
        }
    }

    let diag: Vec<i64> = (0..n).map(|i| b[i][i]).collect();
    let rank = diag.iter().take_while(|&&d| d != 0).count();
    debug_assert!(diag.iter().skip(rank).all(|&d| d == 0));
    Snf { p, p_inv, q, diag, rank }
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    smith_normal_form(&rows.to_vec()).rank
}

/// Basis of the kernel lattice `{v : r . v = 0 for every row r}`.
///
/// Returns the basis as columns (each of length `dim`), sign-normalized so
/// the first nonzero entry of every column is positive. The kernel of a
/// saturated system is itself saturated, so these columns extend to a basis
/// of the ambient lattice.
pub fn kernel_of_rows(dim: usize, rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    for r in rows {
        assert_eq!(r.len(), dim, "kernel_of_rows: row length mismatch");
    }
    if rows.is_empty() {
        return (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    let snf = smith_normal_form(&rows.to_vec());
    let mut basis = Vec::new();
    for j in snf.rank..dim {
        let mut col: Vec<i64> = (0..dim).map(|i| snf.q[i][j]).collect();
        if let Some(&first) = col.iter().find(|&&x| x != 0) {
            if first < 0 {
                for x in col.iter_mut() {
                    *x = -*x;
                }
            }
        }
        basis.push(col);
    }
    basis
}

/// Kernel of a single nonzero form, as a `dim x (dim-1)` column basis.
pub fn kernel_of_form(form: &[i64]) -> Vec<Vec<i64>> {
    kernel_of_rows(form.len(), &[form.to_vec()])
}

/// Saturation data for the sublattice spanned by a set of vectors.
///
/// With `E` the given columns, the saturation is the lattice of all ambient
/// points with a positive multiple inside the span of `E`. The quotient by a
/// saturated sublattice is free, so it admits an integral complement.
pub struct SatSplit {
    /// Rank of the span.
    pub rank: usize,
    /// Columns spanning the saturation (length-`dim` each, `rank` of them).
    pub sat_basis: Vec<Vec<i64>>,
    /// Columns of a complement, mapped isomorphically onto the quotient.
    pub comp_basis: Vec<Vec<i64>>,
    /// Rows computing quotient coordinates: `v mod sat = quot_rows * v`.
    pub quot_rows: Vec<Vec<i64>>,
}

pub fn saturation_split(dim: usize, vectors: &[Vec<i64>]) -> SatSplit {
    for v in vectors {
        assert_eq!(v.len(), dim, "saturation_split: vector length mismatch");
    }
    if vectors.is_empty() {
        return SatSplit {
            rank: 0,
            sat_basis: vec![],
            comp_basis: (0..dim)
                .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
                .collect(),
            quot_rows: identity(dim),
        };
    }
    // Columns of `m` are the vectors: m is dim x n.
    let m: Mat = (0..dim)
        .map(|i| vectors.iter().map(|v| v[i]).collect())
        .collect();
    let snf = smith_normal_form(&m);
    let r = snf.rank;
    let sat_basis = (0..r)
        .map(|j| (0..dim).map(|i| snf.p_inv[i][j]).collect())
        .collect();
    let comp_basis = (r..dim)
        .map(|j| (0..dim).map(|i| snf.p_inv[i][j]).collect())
        .collect();
    let quot_rows = (r..dim).map(|i| snf.p[i].clone()).collect();
    SatSplit { rank: r, sat_basis, comp_basis, quot_rows }
}
