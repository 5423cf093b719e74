//! The rank-one Heisenberg Fock space as the polynomial algebra on the
//! creation modes `h(-1), h(-2), ...`, with round-bracket modes `h(n)` and the
//! torus (square-bracket) modes `h[n] = Res_w h(w) log(1+w)^n`.
//!
//! Lattice sectors reuse [`FockState`] and carry the group-algebra factor
//! `e^α` separately, since it only enters through the scalar action of the
//! zero mode.

mod closed;
mod text;

pub use closed::{annihilate_h1_power, h1_power_closed, hermite_check, v_state_round};

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_arith::{log_power_coeffs, rat, Rational};

/// `h(-n_1) ... h(-n_k) 1`, stored as the parts sorted in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    parts: Vec<u32>,
}

impl Monomial {
    pub fn vacuum() -> Self {
        Self::default()
    }

    /// Parts must be positive.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(
                "monomial parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, part: u32) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    pub fn max_part(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub(crate) fn with_part(&self, part: u32) -> Self {
        let pos = self.parts.partition_point(|&p| p > part);
        let mut parts = self.parts.clone();
        parts.insert(pos, part);
        Self { parts }
    }

    pub(crate) fn without_part(&self, part: u32) -> Option<Self> {
        let pos = self.parts.iter().position(|&p| p == part)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Self { parts })
    }
}

/// Weight first, then parts lexicographically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite Rational combination of monomials; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FockState {
    terms: BTreeMap<Monomial, Rational>,
}

impl FockState {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(Monomial::vacuum(), rat(1))
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut s = Self::zero();
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_part(&self) -> u32 {
        self.terms.keys().map(Monomial::max_part).max().unwrap_or(0)
    }

    pub fn max_weight(&self) -> u64 {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Round-bracket mode `h(n)`: creation for `n < 0`, `n ∂/∂h(-n)` for
    /// `n > 0`, and zero for `n = 0` (trivial group-algebra factor).
    pub fn apply_round_mode(&self, n: i64) -> Self {
        let mut out = Self::zero();
        match n.cmp(&0) {
            Ordering::Less => {
                let part = n.unsigned_abs() as u32;
                for (m, c) in &self.terms {
                    out.add_term(m.with_part(part), c.clone());
                }
            }
            Ordering::Greater => {
                let part = n as u32;
                for (m, c) in &self.terms {
                    let mult = m.multiplicity(part);
                    if let Some(rest) = m.without_part(part) {
                        out.add_term(rest, c * rat(n * mult as i64));
                    }
                }
            }
            Ordering::Equal => {}
        }
        out
    }

    /// Square-bracket mode `h[n] = Σ_{m>=n} Coeff_{w^m}(log(1+w))^n · h(m)`.
    ///
    /// The sum is finite on any state: annihilation modes past the largest
    /// part act as zero. `h[0] = h(0)` goes through the round-bracket path.
    pub fn apply_square_mode(&self, n: i64) -> Self {
        if n == 0 {
            return self.apply_round_mode(0);
        }
        let top = self.max_part() as i64;
        if n > top {
            return Self::zero();
        }
        let coeffs = log_power_coeffs(n, (top - n) as usize);
        let mut out = Self::zero();
        for (j, c) in coeffs.iter().enumerate() {
            let m = n + j as i64;
            if m == 0 || c.is_zero() {
                continue;
            }
            out = out.add(&self.apply_round_mode(m).scale(c));
        }
        out
    }

    /// `h[-k_1] ... h[-k_m] 1`.
    pub fn from_square_word(word: &SquareWord) -> Self {
        word.indices()
            .iter()
            .rev()
            .fold(Self::vacuum(), |s, &k| s.apply_square_mode(-(k as i64)))
    }
}

/// `h[-k_1] ... h[-k_m] 1`; negative square modes commute, so the indices are
/// kept sorted in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareWord {
    indices: Vec<u32>,
}

impl SquareWord {
    pub fn new(mut indices: Vec<u32>) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::InvalidArgument(
                "square-bracket word entries must be >= 1".into(),
            ));
        }
        indices.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { indices })
    }

    /// `[r, 1, ..., 1]` with `t` ones.
    pub fn r_ones(r: u32, t: u32) -> Result<Self> {
        let mut v = vec![r];
        v.extend(std::iter::repeat(1).take(t as usize));
        Self::new(v)
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Square-bracket weight `Σ k_i`.
    pub fn weight(&self) -> u64 {
        self.indices.iter().map(|&k| k as u64).sum()
    }

    /// Parses `"3,1,1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let v = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad word entry {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }
}
