//! Column-stochastic matrices as morphisms of the Lawvere theory of convex
//! spaces, and the model `L` they induce on a convex space.
//!
//! An `n × m` matrix `A` is a morphism `[m] → [n]`. `L(A)` sends an
//! `n`-tuple `(x₁,…,xₙ)` to the `m`-tuple whose `k`-th entry is the
//! barycenter of `Σᵢ Aᵢₖ xᵢ`. Composition is contravariant:
//! `L(B·A) = L(A) ∘ L(B)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Error, Result};
use crate::giry::{barycenter, Dist};
use crate::kernel::{ConvexSpace, Law, LawReport, RandomElement};
use crate::random::random_coeff;
use crate::rational::{Coeff, Rational};

/// An exact column-stochastic matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct StoMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Coeff>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

impl TryFrom<RawMatrix> for StoMatrix {
    type Error = Error;
    fn try_from(r: RawMatrix) -> Result<Self> {
        sto_make(r.rows, r.cols, r.entries)
    }
}

impl From<StoMatrix> for RawMatrix {
    fn from(m: StoMatrix) -> Self {
        RawMatrix {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.into_iter().map(|r| r.into_iter().map(Coeff::into_value).collect()).collect(),
        }
    }
}

/// Validates shape, nonnegativity and unit column sums.
pub fn sto_make(rows: usize, cols: usize, entries: Vec<Vec<Rational>>) -> Result<StoMatrix> {
    if entries.len() != rows {
        return Err(validation!("expected {rows} rows, got {}", entries.len()));
    }
    for (i, row) in entries.iter().enumerate() {
        if row.len() != cols {
            return Err(validation!("row {i} has {} entries, expected {cols}", row.len()));
        }
        if let Some(k) = row.iter().position(Rational::is_negative) {
            return Err(validation!("negative entry {} at ({i}, {k})", row[k]));
        }
    }
    for k in 0..cols {
        let sum: Rational = entries.iter().map(|r| &r[k]).sum();
        if !sum.is_one() {
            return Err(validation!("column {k} sums to {sum}"));
        }
    }
    let entries = entries
        .into_iter()
        .map(|r| r.into_iter().map(|v| Coeff::try_from(v).expect("entry of a stochastic column")).collect())
        .collect();
    Ok(StoMatrix { rows, cols, entries })
}

impl StoMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, k: usize) -> &Coeff {
        &self.entries[i][k]
    }

    /// Column `k` as a probability vector over the rows.
    pub fn column(&self, k: usize) -> Vec<Coeff> {
        self.entries.iter().map(|r| r[k].clone()).collect()
    }

    pub fn identity(n: usize) -> StoMatrix {
        let entries = (0..n)
            .map(|i| (0..n).map(|k| if i == k { Coeff::one() } else { Coeff::zero() }).collect())
            .collect();
        StoMatrix { rows: n, cols: n, entries }
    }

    /// The matrix of a function `f : [m] → [n]`, with `A_{f(k),k} = 1`.
    pub fn from_function(n: usize, f: &[usize]) -> Result<StoMatrix> {
        if let Some(&bad) = f.iter().find(|&&v| v >= n) {
            return Err(domain!("function value {bad} outside [{n}]"));
        }
        let entries = (0..n)
            .map(|i| f.iter().map(|&fk| if fk == i { Coeff::one() } else { Coeff::zero() }).collect())
            .collect();
        Ok(StoMatrix { rows: n, cols: f.len(), entries })
    }

    /// `c_λ`, the `2 × 1` column `(λ, 1-λ)`.
    pub fn c_lambda(lambda: &Coeff) -> StoMatrix {
        StoMatrix { rows: 2, cols: 1, entries: vec![vec![lambda.clone()], vec![lambda.complement()]] }
    }

    /// `e`, the `1 × 2` all-ones matrix (diagonal).
    pub fn copy_e() -> StoMatrix {
        StoMatrix { rows: 1, cols: 2, entries: vec![vec![Coeff::one(), Coeff::one()]] }
    }

    /// `s`, the `2 × 2` swap.
    pub fn swap_s() -> StoMatrix {
        StoMatrix::from_function(2, &[1, 0]).expect("swap")
    }

    /// `∂`, the `1 × 0` matrix (deletion).
    pub fn delete_d() -> StoMatrix {
        StoMatrix { rows: 1, cols: 0, entries: vec![Vec::new()] }
    }

    /// The `(n₁+n₂) × n₁` matrix `(1; 0)` and the `(n₁+n₂) × n₂` matrix
    /// `(0; 1)`, whose images under `L` are the two projections.
    pub fn coproduct_inclusions(n1: usize, n2: usize) -> (StoMatrix, StoMatrix) {
        let left: Vec<usize> = (0..n1).collect();
        let right: Vec<usize> = (n1..n1 + n2).collect();
        (
            StoMatrix::from_function(n1 + n2, &left).expect("left inclusion"),
            StoMatrix::from_function(n1 + n2, &right).expect("right inclusion"),
        )
    }

    /// A random `rows × cols` matrix; each column normalizes small
    /// nonnegative integers with at least one positive entry.
    pub fn random(rng: &mut dyn RngCore, rows: usize, cols: usize) -> StoMatrix {
        assert!(rows > 0 || cols == 0, "a column needs at least one row");
        let mut raw = vec![vec![0i64; cols]; rows];
        for k in 0..cols {
            let mut total = 0;
            for row in raw.iter_mut() {
                row[k] = rng.gen_range(0..=4);
                total += row[k];
            }
            if total == 0 {
                raw[rng.gen_range(0..rows)][k] = 1;
            }
        }
        let totals: Vec<i64> = (0..cols).map(|k| raw.iter().map(|r| r[k]).sum()).collect();
        let entries = raw
            .into_iter()
            .map(|r| r.into_iter().zip(&totals).map(|(v, &t)| Coeff::of(v, t)).collect())
            .collect();
        StoMatrix { rows, cols, entries }
    }
}

impl fmt::Debug for StoMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(&self.entries).finish()
    }
}

/// The product `B·A` for `B : q × n` and `A : n × m`, i.e. the composite
/// morphism `[m] → [n] → [q]`.
pub fn sto_compose(b: &StoMatrix, a: &StoMatrix) -> Result<StoMatrix> {
    if b.cols != a.rows {
        return Err(domain!("cannot compose {}x{} with {}x{}", b.rows, b.cols, a.rows, a.cols));
    }
    let entries = (0..b.rows)
        .map(|i| {
            (0..a.cols)
                .map(|k| {
                    let v: Rational = (0..b.cols).map(|j| b.entries[i][j].value() * a.entries[j][k].value()).sum();
                    Coeff::try_from(v).expect("product of stochastic matrices")
                })
                .collect()
        })
        .collect();
    Ok(StoMatrix { rows: b.rows, cols: a.cols, entries })
}

/// Block-diagonal sum `A₁ ⊗ A₂`.
pub fn sto_tensor(a1: &StoMatrix, a2: &StoMatrix) -> StoMatrix {
    let rows = a1.rows + a2.rows;
    let cols = a1.cols + a2.cols;
    let mut entries = vec![vec![Coeff::zero(); cols]; rows];
    for i in 0..a1.rows {
        for k in 0..a1.cols {
            entries[i][k] = a1.entries[i][k].clone();
        }
    }
    for i in 0..a2.rows {
        for k in 0..a2.cols {
            entries[a1.rows + i][a1.cols + k] = a2.entries[i][k].clone();
        }
    }
    StoMatrix { rows, cols, entries }
}

/// `L(A)` computed from an explicit structure map `m`.
pub fn l_apply_with<E, M>(m: M, a: &StoMatrix, xs: &[E]) -> Result<Vec<E>>
where
    E: Clone + Ord,
    M: Fn(&Dist<E>) -> Result<E>,
{
    if xs.len() != a.rows {
        return Err(domain!("{} inputs for a matrix with {} rows", xs.len(), a.rows));
    }
    (0..a.cols)
        .map(|k| {
            let d = Dist::new(xs.iter().cloned().zip(a.column(k)))?;
            m(&d)
        })
        .collect()
}

/// `L(A)` with the barycenter derived from the space's binary operations.
pub fn l_apply<S: ConvexSpace + ?Sized>(space: &S, a: &StoMatrix, xs: &[S::Elem]) -> Result<Vec<S::Elem>> {
    for x in xs {
        space.check_member(x)?;
    }
    l_apply_with(|d| barycenter(space, d), a, xs)
}

/// Matrices and inputs of one Lawvere-side check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawvereCase<E> {
    pub matrices: Vec<StoMatrix>,
    pub tuple: Vec<E>,
}

/// Report type of the Lawvere-side checkers.
pub type LawvereReport<E> = LawReport<LawvereCase<E>, Vec<E>>;

fn case<E: Clone>(matrices: &[&StoMatrix], tuple: &[E]) -> LawvereCase<E> {
    LawvereCase { matrices: matrices.iter().map(|m| (*m).clone()).collect(), tuple: tuple.to_vec() }
}

fn random_tuple<S: RandomElement + ?Sized>(space: &S, rng: &mut dyn RngCore, n: usize) -> Vec<S::Elem> {
    (0..n).map(|_| space.random_element(rng)).collect()
}

/// For random stochastic `A`, `B` with dimensions in `1..=max_dim` and
/// random input tuples, checks `L(BA) = L(A) ∘ L(B)` and `L(1) = id`, and
/// product preservation three ways: coproduct inclusions map to
/// projections, `L(A₁⊗A₂)` is the product map, and a function matrix acts
/// by reindexing.
pub fn check_lawvere_functoriality<S: RandomElement + ?Sized>(
    space: &S,
    max_dim: usize,
    cases: usize,
    rng: &mut dyn RngCore,
) -> Result<LawvereReport<S::Elem>> {
    if max_dim == 0 {
        return Err(domain!("max_dim must be positive"));
    }
    let mut report = LawvereReport::new();
    let dim = |rng: &mut dyn RngCore| rng.gen_range(1..=max_dim);
    for _ in 0..cases {
        let (q, n, m) = (dim(rng), dim(rng), dim(rng));
        let b = StoMatrix::random(rng, q, n);
        let a = StoMatrix::random(rng, n, m);
        let xs = random_tuple(space, rng, q);
        let ba = sto_compose(&b, &a)?;
        let lhs = l_apply(space, &ba, &xs)?;
        let rhs = l_apply(space, &a, &l_apply(space, &b, &xs)?)?;
        report.record(Law::Functoriality, || case(&[&b, &a], &xs), lhs, rhs);

        let id = StoMatrix::identity(q);
        report.record(Law::IdentityPreservation, || case(&[&id], &xs), l_apply(space, &id, &xs)?, xs.clone());

        let (n1, n2) = (dim(rng), dim(rng));
        let ys = random_tuple(space, rng, n1 + n2);
        let (i1, i2) = StoMatrix::coproduct_inclusions(n1, n2);
        report.record(Law::ProductProjection, || case(&[&i1], &ys), l_apply(space, &i1, &ys)?, ys[..n1].to_vec());
        report.record(Law::ProductProjection, || case(&[&i2], &ys), l_apply(space, &i2, &ys)?, ys[n1..].to_vec());

        let (m1, m2) = (dim(rng), dim(rng));
        let a1 = StoMatrix::random(rng, n1, m1);
        let a2 = StoMatrix::random(rng, n2, m2);
        let t = sto_tensor(&a1, &a2);
        let lhs = l_apply(space, &t, &ys)?;
        let mut rhs = l_apply(space, &a1, &ys[..n1])?;
        rhs.extend(l_apply(space, &a2, &ys[n1..])?);
        report.record(Law::TensorToProduct, || case(&[&a1, &a2], &ys), lhs, rhs);

        let f: Vec<usize> = (0..m).map(|_| rng.gen_range(0..q)).collect();
        let fm = StoMatrix::from_function(q, &f)?;
        let lhs = l_apply(space, &fm, &xs)?;
        let rhs: Vec<S::Elem> = f.iter().map(|&i| xs[i].clone()).collect();
        report.record(Law::FinMapEmbedding, || case(&[&fm], &xs), lhs, rhs);
    }
    Ok(report)
}

/// Report type of [`check_correspondence_roundtrip`]: the inputs are a
/// formal combination and both sides are elements.
pub type RoundtripReport<E> = LawReport<Dist<E>, E>;

/// Checks the passage between binary operations, `L`, and structure maps:
///
/// * `cc(λ, x, y) = L(c_λ)(x, y)` with `L` built from the binary operations;
/// * `m(d) = L(A_d)(points of d)` where `m` is the native structure map when
///   the space has one, the derived barycenter otherwise, and `A_d` is the
///   weight column of `d`;
/// * the native structure map, if any, agrees with the derived barycenter.
pub fn check_correspondence_roundtrip<S: ConvexSpace + ?Sized>(
    space: &S,
    triples: &[(Coeff, S::Elem, S::Elem)],
    dists: &[Dist<S::Elem>],
) -> Result<RoundtripReport<S::Elem>> {
    let mut report = RoundtripReport::new();
    for (l, x, y) in triples {
        let direct = space.cc(l, x, y)?;
        let via_l = l_apply(space, &StoMatrix::c_lambda(l), &[x.clone(), y.clone()])?.remove(0);
        report.record(
            Law::CcRoundtrip,
            || Dist::new([(x.clone(), l.clone()), (y.clone(), l.complement())]).expect("two-point combination"),
            direct,
            via_l,
        );
    }
    let native = |d: &Dist<S::Elem>| -> Result<S::Elem> {
        match space.structure_map(d) {
            Some(v) => Ok(v),
            None => barycenter(space, d),
        }
    };
    for d in dists {
        for x in d.points() {
            space.check_member(x)?;
        }
        let (xs, ws): (Vec<S::Elem>, Vec<Rational>) =
            d.iter().map(|(x, w)| (x.clone(), w.value().clone())).unzip();
        let column = sto_make(ws.len(), 1, ws.into_iter().map(|w| vec![w]).collect())?;
        let direct = native(d)?;
        let via_l = l_apply_with(native, &column, &xs)?.remove(0);
        report.record(Law::StructureMapRoundtrip, || d.clone(), direct, via_l);
        if let Some(v) = space.structure_map(d) {
            report.record(Law::StructureMapAgreement, || d.clone(), v, barycenter(space, d)?);
        }
    }
    Ok(report)
}

/// Random inputs for [`check_correspondence_roundtrip`].
pub fn random_roundtrip_inputs<S: RandomElement + ?Sized>(
    space: &S,
    rng: &mut dyn RngCore,
    cases: usize,
) -> (Vec<(Coeff, S::Elem, S::Elem)>, Vec<Dist<S::Elem>>) {
    let triples = (0..cases)
        .map(|_| (random_coeff(rng), space.random_element(rng), space.random_element(rng)))
        .collect();
    let dists = (0..cases)
        .map(|_| {
            let k = rng.gen_range(1..=4);
            let pts = random_tuple(space, rng, k);
            crate::random::random_dist(rng, &pts, k)
        })
        .collect();
    (triples, dists)
}
