//! Image values.
//!
//! Reconstruction only ever adds and subtracts image values, so anything that
//! forms an abelian group under addition can be reconstructed. Two concrete
//! realizations ship with the crate: exact [`Rational`]s, used everywhere
//! correctness matters, and `f64`, used for benchmarks.
//!
//! [`Counted`] wraps another value type and tallies every operation performed
//! on it in thread-local counters, which is how the benchmark harness measures
//! basic operations without instrumenting the algorithm itself.

use std::cell::Cell;
use std::fmt;

use num::{BigInt, BigRational, Zero};
use serde::Serialize;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Element of an abelian group under addition.
pub trait Value: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;

    /// Image of an integer under the canonical map `Z -> Self`.
    fn from_i64(n: i64) -> Self;

    fn plus_assign(&mut self, rhs: &Self);

    fn minus_assign(&mut self, rhs: &Self);

    fn negated(&self) -> Self;

    fn is_zero(&self) -> bool;

    /// Parses an integer, a `p/q` fraction or (for floating types) a decimal.
    fn parse_literal(s: &str) -> Option<Self>;

    fn minus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.minus_assign(rhs);
        out
    }

    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.plus_assign(rhs);
        out
    }

    /// `n * self`, computed by double-and-add so only group operations are used.
    fn times(&self, n: i64) -> Self {
        let mut acc = Self::zero();
        let mut base = if n < 0 { self.negated() } else { self.clone() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc.plus_assign(&base);
            }
            k >>= 1;
            if k > 0 {
                let b = base.clone();
                base.plus_assign(&b);
            }
        }
        acc
    }
}

impl Value for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn plus_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn minus_assign(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn negated(&self) -> Self {
        -self
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn parse_literal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl Value for f64 {
    fn zero() -> Self {
        0.0
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn plus_assign(&mut self, rhs: &Self) {
        *self += *rhs;
    }

    fn minus_assign(&mut self, rhs: &Self) {
        *self -= *rhs;
    }

    fn negated(&self) -> Self {
        -*self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: f64 = num.trim().parse().ok()?;
            let den: f64 = den.trim().parse().ok()?;
            if den == 0.0 {
                return None;
            }
            return Some(num / den);
        }
        s.parse().ok()
    }
}

/// Converts an exact value to the nearest `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Tally of basic operations: additions, subtractions, multiplications,
/// divisions, comparisons and assignments.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCount {
    pub adds: u64,
    pub subs: u64,
    pub muls: u64,
    pub divs: u64,
    pub compares: u64,
    pub assigns: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.adds + self.subs + self.muls + self.divs + self.compares + self.assigns
    }
}

thread_local! {
    static COUNTS: Cell<OpCount> = const { Cell::new(OpCount {
        adds: 0, subs: 0, muls: 0, divs: 0, compares: 0, assigns: 0,
    }) };
}

fn bump(f: impl FnOnce(&mut OpCount)) {
    COUNTS.with(|c| {
        let mut v = c.get();
        f(&mut v);
        c.set(v);
    });
}

/// Resets this thread's operation counters to zero.
pub fn reset_op_count() {
    COUNTS.with(|c| c.set(OpCount::default()));
}

/// Current value of this thread's operation counters.
pub fn op_count() -> OpCount {
    COUNTS.with(|c| c.get())
}

/// A value that counts the operations performed on it.
///
/// Clones count as assignments; `plus_assign`/`minus_assign` count as one
/// arithmetic operation plus one assignment; zero tests and equality count as
/// comparisons.
#[derive(Debug)]
pub struct Counted<V>(pub V);

impl<V: Value> Counted<V> {
    pub fn into_inner(self) -> V {
        self.0
    }
}

impl<V: Value> Clone for Counted<V> {
    fn clone(&self) -> Self {
        bump(|c| c.assigns += 1);
        Counted(self.0.clone())
    }
}

impl<V: Value> PartialEq for Counted<V> {
    fn eq(&self, other: &Self) -> bool {
        bump(|c| c.compares += 1);
        self.0 == other.0
    }
}

impl<V: Value> fmt::Display for Counted<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl<V: Value> Value for Counted<V> {
    fn zero() -> Self {
        bump(|c| c.assigns += 1);
        Counted(V::zero())
    }

    fn from_i64(n: i64) -> Self {
        bump(|c| c.assigns += 1);
        Counted(V::from_i64(n))
    }

    fn plus_assign(&mut self, rhs: &Self) {
        bump(|c| {
            c.adds += 1;
            c.assigns += 1;
        });
        self.0.plus_assign(&rhs.0);
    }

    fn minus_assign(&mut self, rhs: &Self) {
        bump(|c| {
            c.subs += 1;
            c.assigns += 1;
        });
        self.0.minus_assign(&rhs.0);
    }

    fn negated(&self) -> Self {
        bump(|c| c.subs += 1);
        Counted(self.0.negated())
    }

    fn is_zero(&self) -> bool {
        bump(|c| c.compares += 1);
        self.0.is_zero()
    }

    fn parse_literal(s: &str) -> Option<Self> {
        V::parse_literal(s).map(Counted)
    }
}
