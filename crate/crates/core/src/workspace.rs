//! The inner-product space: scalars, vectors of `C^n`, labels and the
//! binding table that terms are evaluated against.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Scalar = Complex64;

/// Comparison tolerance: `|a - b| <= max(abs, rel * magnitude)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance {
        rel: 1e-9,
        abs: 1e-12,
    };

    pub fn bound(&self, magnitude: f64) -> f64 {
        f64::max(self.abs, self.rel * magnitude)
    }

    pub fn close(&self, a: Scalar, b: Scalar, magnitude: f64) -> bool {
        (a - b).norm() <= self.bound(magnitude)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

pub(crate) fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A vector of `C^n`. All components are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn new(components: Vec<Scalar>) -> Result<Self> {
        if let Some(i) = components.iter().position(|z| !is_finite(*z)) {
            return Err(Error::NonFinite(i));
        }
        Ok(Vector(components))
    }

    pub fn from_reals(components: &[f64]) -> Result<Self> {
        Vector::new(components.iter().map(|&r| Scalar::new(r, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(alloc::vec![Scalar::new(0.0, 0.0); dim])
    }

    /// The `i`-th standard basis vector of `C^dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v.0[i] = Scalar::new(1.0, 0.0);
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Scalar> {
        self.0
    }

    /// Componentwise conjugate.
    pub fn conj(&self) -> Vector {
        Vector(self.0.iter().map(|z| z.conj()).collect())
    }

    /// Largest component modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| f64::max(m, z.norm()))
    }

    pub fn approx_eq(&self, other: &Vector, tol: Tolerance) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let magnitude = f64::max(self.max_norm(), other.max_norm());
        self.iter()
            .zip(other.iter())
            .all(|(a, b)| tol.close(*a, *b, magnitude))
    }

    pub(crate) fn from_vec_unchecked(components: Vec<Scalar>) -> Self {
        Vector(components)
    }
}

impl core::ops::Index<usize> for Vector {
    type Output = Scalar;

    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Neumaier-compensated sum of `terms`.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - next) + t;
        } else {
            carry += (t - next) + sum;
        }
        sum = next;
    }
    sum + carry
}

/// `<x|y> = sum_i conj(x_i) * y_i`, conjugate-linear in `x`.
///
/// Real and imaginary parts are accumulated separately with compensated
/// summation. For `x == y` every imaginary term is exactly zero.
pub fn inner_product(x: &Vector, y: &Vector) -> Result<Scalar> {
    check_len(x.len(), y.len())?;
    let pairs = || x.iter().zip(y.iter());
    let re = compensated_sum(pairs().map(|(a, b)| a.re * b.re + a.im * b.im));
    let im = compensated_sum(pairs().map(|(a, b)| a.re * b.im - a.im * b.re));
    Ok(Scalar::new(re, im))
}

pub fn scale(a: Scalar, v: &Vector) -> Vector {
    Vector(v.iter().map(|z| a * z).collect())
}

/// A bindable identifier: ASCII letter followed by letters, digits or `_`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: &str) -> Result<Self> {
        if Label::is_valid(name) {
            Ok(Label(name.to_string()))
        } else {
            Err(Error::InvalidLabel(name.to_string()))
        }
    }

    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite-dimensional space `C^dim` with label bindings.
#[derive(Debug, Clone, PartialEq)]
pub struct Workspace {
    dim: usize,
    bindings: BTreeMap<Label, Vector>,
}

impl Workspace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Workspace {
            dim,
            bindings: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Binds `label` to `v`, replacing any previous binding.
    pub fn bind(mut self, label: Label, v: Vector) -> Result<Self> {
        self.bind_in_place(label, v)?;
        Ok(self)
    }

    pub fn bind_in_place(&mut self, label: Label, v: Vector) -> Result<()> {
        check_len(self.dim, v.len())?;
        self.bindings.insert(label, v);
        Ok(())
    }

    pub fn lookup(&self, label: &Label) -> Result<&Vector> {
        self.bindings
            .get(label)
            .ok_or_else(|| Error::UnboundLabel(label.clone()))
    }

    /// Bindings in label order.
    pub fn bindings(&self) -> impl Iterator<Item = (&Label, &Vector)> {
        self.bindings.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn v(components: &[(f64, f64)]) -> Vector {
        Vector::new(components.iter().map(|&(r, i)| c(r, i)).collect()).unwrap()
    }

    // Plain loop, no compensation.
    fn naive_inner(x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut acc = c(0.0, 0.0);
        for i in 0..x.len() {
            acc += x[i].conj() * y[i];
        }
        acc
    }

    #[test]
    fn inner_product_examples() {
        let e1 = v(&[(1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(inner_product(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(
            inner_product(&v(&[(0.0, 1.0)]), &v(&[(1.0, 0.0)])).unwrap(),
            c(0.0, -1.0)
        );

        let x = v(&[(1.0, 2.0), (3.0, 0.0)]);
        let y = v(&[(-1.0, 0.0), (0.0, 1.0)]);
        let expected = naive_inner(x.as_slice(), y.as_slice());
        assert_eq!(expected, c(-1.0, 5.0));
        assert_eq!(inner_product(&x, &y).unwrap(), expected);
    }

    #[test]
    fn inner_product_rejects_mismatched_lengths() {
        let err = inner_product(&Vector::zeros(2), &Vector::zeros(3)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn scale_examples() {
        let base = Vector::from_reals(&[2.0, 3.0]).unwrap();
        assert_eq!(scale(c(1.0, 0.0), &base), base);
        assert_eq!(scale(c(0.0, 0.0), &base), Vector::zeros(2));
        assert_eq!(
            scale(c(0.0, 1.0), &v(&[(1.0, 1.0), (2.0, 0.0)])),
            v(&[(-1.0, 1.0), (0.0, 2.0)])
        );
    }

    #[test]
    fn bind_and_rebind() {
        let x = Label::new("x").unwrap();
        let ws = Workspace::new(2)
            .unwrap()
            .bind(x.clone(), Vector::from_reals(&[1.0, 0.0]).unwrap())
            .unwrap();
        assert_eq!(
            ws.lookup(&x).unwrap(),
            &Vector::from_reals(&[1.0, 0.0]).unwrap()
        );
        let ws = ws
            .bind(x.clone(), Vector::from_reals(&[0.0, 1.0]).unwrap())
            .unwrap();
        assert_eq!(
            ws.lookup(&x).unwrap(),
            &Vector::from_reals(&[0.0, 1.0]).unwrap()
        );
        let err = ws
            .bind(x, Vector::from_reals(&[1.0, 0.0, 0.0]).unwrap())
            .unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn workspace_rejects_zero_dim_and_unbound() {
        assert_eq!(Workspace::new(0).unwrap_err(), Error::ZeroDimension);
        let ws = Workspace::new(1).unwrap();
        let q = Label::new("q").unwrap();
        assert_eq!(ws.lookup(&q).unwrap_err(), Error::UnboundLabel(q));
    }

    #[test]
    fn labels() {
        for ok in ["x", "x1", "psi_0", "Z"] {
            assert!(Label::new(ok).is_ok(), "{ok}");
        }
        for bad in ["", "1x", "_x", "x-y", "x y", "é"] {
            assert!(Label::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn vectors_reject_non_finite() {
        assert_eq!(
            Vector::new(alloc::vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err(),
            Error::NonFinite(1)
        );
        assert!(Vector::from_reals(&[f64::INFINITY]).is_err());
    }

    fn scalar() -> impl Strategy<Value = Scalar> {
        (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(r, i)| c(r, i))
    }

    fn vectors(n: usize, k: usize) -> impl Strategy<Value = Vec<Vector>> {
        proptest::collection::vec(
            proptest::collection::vec(scalar(), n).prop_map(|c| Vector::new(c).unwrap()),
            k,
        )
    }

    fn sized(k: usize) -> impl Strategy<Value = Vec<Vector>> {
        (1usize..6).prop_flat_map(move |n| vectors(n, k))
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(vs in sized(2)) {
            let xy = inner_product(&vs[0], &vs[1]).unwrap();
            let yx = inner_product(&vs[1], &vs[0]).unwrap();
            prop_assert!((xy.re - yx.re).abs() <= 1e-12);
            prop_assert!((xy.im + yx.im).abs() <= 1e-12);
        }

        #[test]
        fn positivity(vs in sized(1)) {
            let xx = inner_product(&vs[0], &vs[0]).unwrap();
            prop_assert_eq!(xx.im, 0.0);
            prop_assert!(xx.re >= 0.0);
        }

        #[test]
        fn linear_in_second_slot(vs in sized(3), a in scalar(), b in scalar()) {
            let (x, y, z) = (&vs[0], &vs[1], &vs[2]);
            let combo = Vector::new(
                y.iter().zip(z.iter()).map(|(p, q)| a * p + b * q).collect(),
            ).unwrap();
            let lhs = inner_product(x, &combo).unwrap();
            let rhs = a * inner_product(x, y).unwrap() + b * inner_product(x, z).unwrap();
            let magnitude = x.max_norm() * (a.norm() * y.max_norm() + b.norm() * z.max_norm())
                * x.len() as f64;
            prop_assert!(Tolerance::DEFAULT.close(lhs, rhs, magnitude), "{lhs} vs {rhs}");
        }

        #[test]
        fn scale_composes(vs in sized(1), a in scalar(), b in scalar()) {
            let lhs = scale(a, &scale(b, &vs[0]));
            let rhs = scale(a * b, &vs[0]);
            let tol = Tolerance { rel: 1e-12, abs: 1e-12 };
            prop_assert!(lhs.approx_eq(&rhs, tol));
        }
    }
}
