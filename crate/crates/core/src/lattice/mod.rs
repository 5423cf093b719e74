//! Even lattices given by Gram matrices, short-vector enumeration, weighted
//! theta series and the lattice VOA characters `η^d Z(v_{r,t})`.

mod character;
mod theta;

pub use character::{
    lattice_char_closed, lattice_char_zhu, lattice_state_round, theorem2_limit, LatticeCharacter,
};
pub use theta::{sector_char_closed, theta_weighted, theta_weighted_tk, SurdSeries, ThetaSeries};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{int_rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lattice {
    rank: usize,
    gram: Vec<Vec<i64>>,
}

impl Lattice {
    /// Validates symmetry, even diagonal and positive definiteness (exact
    /// leading principal minors via an LDLᵀ over the rationals).
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let d = gram.len();
        if d == 0 {
            return Err(Error::Lattice("rank must be positive".into()));
        }
        if gram.iter().any(|row| row.len() != d) {
            return Err(Error::Lattice("Gram matrix must be square".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Lattice(format!(
                        "Gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
            if gram[i][i] % 2 != 0 {
                return Err(Error::Lattice(format!(
                    "lattice is not even: diagonal entry {i} is {}",
                    gram[i][i]
                )));
            }
        }
        let pivots = exact_ldl_pivots(&gram);
        if let Some(i) = pivots.iter().position(|p| !p.is_positive()) {
            return Err(Error::Lattice(format!(
                "Gram matrix is not positive definite (pivot {i} is {})",
                pivots[i]
            )));
        }
        Ok(Self { rank: d, gram })
    }

    /// [`Lattice::new`] plus `det = 1`.
    pub fn new_unimodular(gram: Vec<Vec<i64>>) -> Result<Self> {
        let l = Self::new(gram)?;
        if !l.is_unimodular() {
            return Err(Error::Lattice(format!(
                "lattice is not unimodular (determinant {})",
                l.determinant()
            )));
        }
        Ok(l)
    }

    /// The E8 root lattice in a basis of simple roots: a chain `1 - 2 - ... - 7`
    /// with node 8 attached to node 3.
    pub fn e8() -> Self {
        let mut g = vec![vec![0i64; 8]; 8];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            g[i][j] = -1;
            g[j][i] = -1;
        };
        for i in 0..6 {
            link(i, i + 1);
        }
        link(2, 7);
        Self::new_unimodular(g).expect("E8 Cartan matrix is even unimodular")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Exact determinant (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> BigInt {
        let n = self.rank;
        let mut m: Vec<Vec<BigInt>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_one()
    }

    /// `xᵀ G y`.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let s: i64 = row.iter().zip(y).map(|(g, v)| g * v).sum();
            acc += x[i] * s;
        }
        acc
    }

    /// Plain text: the rank `d` on the first line, then `d` rows of integers.
    pub fn parse_gram(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let d: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty Gram file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the rank d".into()))?;
        let mut gram = Vec::with_capacity(d);
        for i in 0..d {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {d} rows, found {i}")))?;
            let row = line
                .split_whitespace()
                .map(|x| {
                    x.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad entry {x:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != d {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {d}",
                    row.len()
                )));
            }
            gram.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after the Gram matrix".into()));
        }
        Self::new(gram)
    }
}

impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_gram(s)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.rank)?;
        for row in &self.gram {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn exact_ldl_pivots(gram: &[Vec<i64>]) -> Vec<Rational> {
    let n = gram.len();
    let mut a: Vec<Vec<Rational>> = gram
        .iter()
        .map(|r| r.iter().map(|&x| int_rat(BigInt::from(x))).collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let piv = a[k][k].clone();
        pivots.push(piv.clone());
        if piv.is_zero() {
            break;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &piv;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    pivots
}

/// A lattice vector `α0` standing for the unit direction `a = α0/√norm0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionSpec {
    pub alpha0: Vec<i64>,
    pub norm0: i64,
}

impl DirectionSpec {
    pub fn new(lattice: &Lattice, alpha0: Vec<i64>) -> Result<Self> {
        if alpha0.len() != lattice.rank() {
            return Err(Error::Lattice(format!(
                "direction has {} coordinates, lattice rank is {}",
                alpha0.len(),
                lattice.rank()
            )));
        }
        if alpha0.iter().all(|&x| x == 0) {
            return Err(Error::Lattice("direction vector must be nonzero".into()));
        }
        let norm0 = lattice.inner(&alpha0, &alpha0);
        Ok(Self { alpha0, norm0 })
    }

    /// The first basis vector.
    pub fn first_basis_vector(lattice: &Lattice) -> Self {
        let mut v = vec![0; lattice.rank()];
        v[0] = 1;
        Self::new(lattice, v).expect("basis vectors are nonzero")
    }

    /// Parses `"1,0,0,0,0,0,0,0"`.
    pub fn parse(lattice: &Lattice, text: &str) -> Result<Self> {
        let v = text
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad direction entry {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lattice, v)
    }
}

/// All `α` with `⟨α,α⟩/2 <= max_half_norm`, sorted by half-norm then
/// coordinates.
///
/// Depth-first search on the LDLᵀ form `Σ_i D_i (x_i + Σ_{j>i} L_{ji} x_j)²`
/// with floating-point bounds widened by a safety margin; every leaf is
/// confirmed with an exact integer norm.
pub fn enumerate_vectors(lattice: &Lattice, max_half_norm: u64) -> Vec<(Vec<i64>, u64)> {
    let d = lattice.rank();
    let g: Vec<Vec<f64>> = lattice
        .gram()
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let mut l = vec![vec![0.0f64; d]; d];
    let mut diag = vec![0.0f64; d];
    for j in 0..d {
        diag[j] = g[j][j] - (0..j).map(|k| l[j][k] * l[j][k] * diag[k]).sum::<f64>();
        l[j][j] = 1.0;
        for i in j + 1..d {
            l[i][j] =
                (g[i][j] - (0..j).map(|k| l[i][k] * l[j][k] * diag[k]).sum::<f64>()) / diag[j];
        }
    }
    let bound = 2.0 * max_half_norm as f64;
    let eps = 1e-7 * (1.0 + bound);

    struct Search<'a> {
        lattice: &'a Lattice,
        l: Vec<Vec<f64>>,
        diag: Vec<f64>,
        bound: f64,
        eps: f64,
        max_norm: i64,
        x: Vec<i64>,
        out: Vec<(Vec<i64>, u64)>,
    }

    impl Search<'_> {
        fn go(&mut self, level: usize, partial: f64) {
            let d = self.x.len();
            let center: f64 = -(level + 1..d)
                .map(|j| self.l[j][level] * self.x[j] as f64)
                .sum::<f64>();
            let rem = self.bound - partial;
            if rem < -self.eps {
                return;
            }
            let radius = (rem.max(0.0) / self.diag[level]).sqrt();
            let lo = (center - radius - self.eps).ceil() as i64;
            let hi = (center + radius + self.eps).floor() as i64;
            for v in lo..=hi {
                self.x[level] = v;
                let dx = v as f64 - center;
                let next = partial + self.diag[level] * dx * dx;
                if next > self.bound + self.eps {
                    continue;
                }
                if level == 0 {
                    let norm = self.lattice.inner(&self.x, &self.x);
                    if norm <= self.max_norm {
                        self.out.push((self.x.clone(), (norm / 2) as u64));
                    }
                } else {
                    self.go(level - 1, next);
                }
            }
            self.x[level] = 0;
        }
    }

    let mut s = Search {
        lattice,
        l,
        diag,
        bound,
        eps,
        max_norm: 2 * max_half_norm as i64,
        x: vec![0; d],
        out: Vec::new(),
    };
    s.go(d - 1, 0.0);
    let mut out = s.out;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent count: box search over the first `d-1` coordinates using
    /// `|x_i| <= sqrt(2N (G^{-1})_{ii})`, last coordinate scanned in full.
    fn box_search(lattice: &Lattice, max_half_norm: u64) -> Vec<Vec<i64>> {
        let d = lattice.rank();
        let g: Vec<Vec<f64>> = lattice
            .gram()
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        // Gauss-Jordan inverse, diagonal only needed
        let mut a = g.clone();
        let mut inv: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        for c in 0..d {
            let p = a[c][c];
            for j in 0..d {
                a[c][j] /= p;
                inv[c][j] /= p;
            }
            for r in 0..d {
                if r != c {
                    let f = a[r][c];
                    for j in 0..d {
                        a[r][j] -= f * a[c][j];
                        inv[r][j] -= f * inv[c][j];
                    }
                }
            }
        }
        let b = 2.0 * max_half_norm as f64;
        let bounds: Vec<i64> = (0..d)
            .map(|i| ((b * inv[i][i]).sqrt() + 1e-6).floor() as i64)
            .collect();
        let mut out = Vec::new();
        let mut x = vec![0i64; d];
        fn rec(
            i: usize,
            x: &mut Vec<i64>,
            bounds: &[i64],
            lattice: &Lattice,
            max: i64,
            out: &mut Vec<Vec<i64>>,
        ) {
            let d = x.len();
            if i == d - 1 {
                // Q(v) = Q(x with x_last = 0) + 2 v ⟨e_last, x⟩ + G_last,last v²
                x[i] = 0;
                let q0 = lattice.inner(x, x);
                let g = &lattice.gram()[i];
                let s: i64 = g.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                for v in -bounds[i]..=bounds[i] {
                    if q0 + 2 * v * s + g[i] * v * v <= max {
                        x[i] = v;
                        out.push(x.clone());
                    }
                }
                x[i] = 0;
                return;
            }
            for v in -bounds[i]..=bounds[i] {
                x[i] = v;
                rec(i + 1, x, bounds, lattice, max, out);
            }
            x[i] = 0;
        }
        rec(
            0,
            &mut x,
            &bounds,
            lattice,
            2 * max_half_norm as i64,
            &mut out,
        );
        out.sort();
        out
    }

    #[test]
    fn e8_is_even_unimodular() {
        let e8 = Lattice::e8();
        assert_eq!(e8.rank(), 8);
        assert_eq!(e8.determinant(), BigInt::one());
    }

    #[test]
    fn rejects_bad_gram_matrices() {
        let z8: Vec<Vec<i64>> = (0..8)
            .map(|i| (0..8).map(|j| (i == j) as i64).collect())
            .collect();
        assert!(matches!(Lattice::new(z8), Err(Error::Lattice(msg)) if msg.contains("even")));
        assert!(Lattice::new(vec![vec![2, 3], vec![3, 2]]).is_err());
        assert!(Lattice::new(vec![vec![2, 1], vec![0, 2]]).is_err());
        let a2 = Lattice::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(a2.determinant(), BigInt::from(3));
        assert!(Lattice::new_unimodular(vec![vec![2, -1], vec![-1, 2]]).is_err());
    }

    #[test]
    fn gram_text_round_trip() {
        let e8 = Lattice::e8();
        assert_eq!(e8.to_string().parse::<Lattice>().unwrap(), e8);
        assert!("2\n1 0\n0 2\n".parse::<Lattice>().is_err());
        assert!("2\n2 0\n".parse::<Lattice>().is_err());
        assert!("x".parse::<Lattice>().is_err());
    }

    #[test]
    fn zero_bound_gives_origin() {
        let v = enumerate_vectors(&Lattice::e8(), 0);
        assert_eq!(v, vec![(vec![0; 8], 0)]);
    }

    #[test]
    fn e8_roots_match_box_search() {
        let e8 = Lattice::e8();
        let fp = enumerate_vectors(&e8, 1);
        assert_eq!(fp.len(), 241);
        let mut fp_vecs: Vec<Vec<i64>> = fp.into_iter().map(|(v, _)| v).collect();
        fp_vecs.sort();
        assert_eq!(fp_vecs, box_search(&e8, 1));
    }

    #[test]
    fn a2_shells_match_box_search() {
        let a2 = Lattice::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        for n in 0..6 {
            let mut fp: Vec<Vec<i64>> = enumerate_vectors(&a2, n)
                .into_iter()
                .map(|(v, _)| v)
                .collect();
            fp.sort();
            assert_eq!(fp, box_search(&a2, n), "N={n}");
        }
    }

    #[test]
    fn enumeration_is_closed_under_negation() {
        let e8 = Lattice::e8();
        let v = enumerate_vectors(&e8, 2);
        let set: std::collections::HashSet<Vec<i64>> = v.iter().map(|(x, _)| x.clone()).collect();
        assert_eq!(v.iter().filter(|(_, h)| *h == 2).count(), 2160);
        for (x, _) in &v {
            let neg: Vec<i64> = x.iter().map(|c| -c).collect();
            assert!(set.contains(&neg));
        }
        assert_eq!(v.len() % 2, 1);
    }

    #[test]
    fn direction_validation() {
        let e8 = Lattice::e8();
        assert_eq!(DirectionSpec::first_basis_vector(&e8).norm0, 2);
        assert!(DirectionSpec::new(&e8, vec![0; 8]).is_err());
        assert!(DirectionSpec::new(&e8, vec![1; 3]).is_err());
        let d = DirectionSpec::parse(&e8, "1,1,0,0,0,0,0,0").unwrap();
        assert_eq!(d.norm0, 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Even positive definite Gram matrices `2 BᵀB + 2I` of rank 2 or 3.
        fn arb_lattice() -> impl Strategy<Value = Lattice> {
            (2usize..=3)
                .prop_flat_map(|d| {
                    prop::collection::vec(-2i64..=2, d * d).prop_map(move |b| (d, b))
                })
                .prop_map(|(d, b)| {
                    let gram = (0..d)
                        .map(|i| {
                            (0..d)
                                .map(|j| {
                                    let btb: i64 =
                                        (0..d).map(|k| b[k * d + i] * b[k * d + j]).sum();
                                    2 * btb + if i == j { 2 } else { 0 }
                                })
                                .collect()
                        })
                        .collect();
                    Lattice::new(gram).unwrap()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn enumeration_matches_box_search(l in arb_lattice(), n in 0u64..=3) {
                let mut got: Vec<Vec<i64>> = enumerate_vectors(&l, n).into_iter().map(|(v, _)| v).collect();
                got.sort();
                let mut want = box_search(&l, n);
                want.sort();
                prop_assert_eq!(got, want);
            }

            #[test]
            fn enumeration_is_closed_under_negation(l in arb_lattice(), n in 0u64..=3) {
                let vs = enumerate_vectors(&l, n);
                let set: std::collections::BTreeSet<Vec<i64>> = vs.iter().map(|(v, _)| v.clone()).collect();
                prop_assert_eq!(set.len(), vs.len());
                prop_assert_eq!(vs.len() % 2, 1);
                for (v, h) in &vs {
                    let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                    prop_assert!(set.contains(&neg));
                    prop_assert_eq!(l.inner(v, v), 2 * *h as i64);
                }
            }

            #[test]
            fn theta_parity(l in arb_lattice(), s in 0u32..=5) {
                let d = DirectionSpec::first_basis_vector(&l);
                let th = theta_weighted(&l, &d, s, 4).series;
                if s % 2 == 1 {
                    prop_assert!(th.is_zero());
                } else {
                    let c0 = if s == 0 { 1 } else { 0 };
                    prop_assert_eq!(th.coeffs()[0].clone(), crate::exact_arith::rat(c0));
                }
            }
        }
    }
}
