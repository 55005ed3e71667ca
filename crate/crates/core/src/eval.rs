//! Values of Dirac terms under dual ket semantics.
//!
//! A bra `<x|` denotes the functional `y -> <x|y>`. A vector ket `|y>`
//! denotes `y`; a function ket denotes `a -> a * y`. Concatenation combines
//! the values of its two halves according to which of them are functions:
//! composition (both), application (left only), scaling (right only) or a
//! plain product (neither). At least one factor of every product is a scalar.
//!
//! The kind of a term's value is fixed by its first and last characters:
//!
//! | first \ last | bra       | function ket | vector ket |
//! |--------------|-----------|--------------|------------|
//! | bra          | `FunHtoC` | `FunCtoC`    | `ScalarK`  |
//! | ket          | `FunHtoH` | `FunCtoH`    | `VectorK`  |
//!
//! Functions are stored extensionally: covectors for `H -> C`, matrices for
//! `H -> H`, and the image of `1` for maps out of `C`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::term::{DiracChar, Marking, Term, TermView};
use crate::workspace::{inner_product, scale, Scalar, Tolerance, Vector, Workspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueKind {
    ScalarK,
    VectorK,
    FunHtoC,
    FunHtoH,
    FunCtoC,
    FunCtoH,
}

/// Domain of a function value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    C,
    H,
}

impl ValueKind {
    /// Kind of a term starting with `first` and ending with `last`; `None`
    /// when `last` is an unmarked ket.
    pub fn of_shape(first: &DiracChar, last: &DiracChar) -> Option<ValueKind> {
        use ValueKind::*;
        let starts_with_bra = first.is_bra();
        let kind = match last {
            DiracChar::Bra(_) if starts_with_bra => FunHtoC,
            DiracChar::Bra(_) => FunHtoH,
            DiracChar::Ket(_, Marking::FunctionKet) if starts_with_bra => FunCtoC,
            DiracChar::Ket(_, Marking::FunctionKet) => FunCtoH,
            DiracChar::Ket(_, Marking::VectorKet) if starts_with_bra => ScalarK,
            DiracChar::Ket(_, Marking::VectorKet) => VectorK,
            DiracChar::Ket(_, Marking::Default) => return None,
        };
        Some(kind)
    }

    pub fn is_function(self) -> bool {
        self.domain().is_some()
    }

    pub fn domain(self) -> Option<Domain> {
        match self {
            ValueKind::ScalarK | ValueKind::VectorK => None,
            ValueKind::FunHtoC | ValueKind::FunHtoH => Some(Domain::H),
            ValueKind::FunCtoC | ValueKind::FunCtoH => Some(Domain::C),
        }
    }

    /// Scalar or scalar-valued function.
    pub fn is_scalar_valued(self) -> bool {
        matches!(
            self,
            ValueKind::ScalarK | ValueKind::FunHtoC | ValueKind::FunCtoC
        )
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ValueKind::ScalarK => "ScalarK",
            ValueKind::VectorK => "VectorK",
            ValueKind::FunHtoC => "FunHtoC",
            ValueKind::FunHtoH => "FunHtoH",
            ValueKind::FunCtoC => "FunCtoC",
            ValueKind::FunCtoH => "FunCtoH",
        };
        f.write_str(s)
    }
}

/// Square matrix over `C`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Scalar>,
}

impl Operator {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Operator {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Operator { dim, entries }
    }

    /// `u v^T`, i.e. entries `u_i * v_j`.
    pub fn outer(u: &Vector, v: &Vector) -> Result<Operator> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        Ok(Operator::from_fn(u.len(), |i, j| u[i] * v[j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.entries.chunks(self.dim)
    }

    fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    fn scaled(&self, a: Scalar) -> Operator {
        Operator {
            dim: self.dim,
            entries: self.entries.iter().map(|z| a * z).collect(),
        }
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        same_dim(self.dim, v.len())?;
        Ok(Vector::from_vec_unchecked(
            self.rows()
                .map(|row| plain_dot(row, v.as_slice()))
                .collect(),
        ))
    }

    fn compose(&self, other: &Operator) -> Result<Operator> {
        same_dim(self.dim, other.dim)?;
        let n = self.dim;
        Ok(Operator::from_fn(n, |i, j| {
            (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

// Bilinear, no conjugation: covector payloads already carry it.
fn plain_dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row vector times matrix.
fn covector_times(r: &Vector, m: &Operator) -> Result<Vector> {
    same_dim(m.dim, r.len())?;
    let n = m.dim;
    Ok(Vector::from_vec_unchecked(
        (0..n)
            .map(|j| (0..n).map(|i| r[i] * m.get(i, j)).sum())
            .collect(),
    ))
}

fn covector_apply(r: &Vector, y: &Vector) -> Result<Scalar> {
    same_dim(r.len(), y.len())?;
    Ok(plain_dot(r.as_slice(), y.as_slice()))
}

/// The value of a Dirac term.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    Vector(Vector),
    /// `y -> sum_i r_i * y_i`.
    FunHtoC(Vector),
    /// `y -> M y`.
    FunHtoH(Operator),
    /// `a -> s * a`.
    FunCtoC(Scalar),
    /// `a -> a * v`.
    FunCtoH(Vector),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Argument {
    Scalar(Scalar),
    Vector(Vector),
}

impl Value {
    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Scalar(_) => ValueKind::ScalarK,
            Value::Vector(_) => ValueKind::VectorK,
            Value::FunHtoC(_) => ValueKind::FunHtoC,
            Value::FunHtoH(_) => ValueKind::FunHtoH,
            Value::FunCtoC(_) => ValueKind::FunCtoC,
            Value::FunCtoH(_) => ValueKind::FunCtoH,
        }
    }

    fn components(&self) -> &[Scalar] {
        match self {
            Value::Scalar(s) | Value::FunCtoC(s) => core::slice::from_ref(s),
            Value::Vector(v) | Value::FunHtoC(v) | Value::FunCtoH(v) => v.as_slice(),
            Value::FunHtoH(m) => m.entries(),
        }
    }

    /// Largest modulus among the payload components.
    pub fn magnitude(&self) -> f64 {
        self.components()
            .iter()
            .fold(0.0, |m, z| f64::max(m, z.norm()))
    }

    /// Same kind and componentwise within `tol`, measured against the larger
    /// of the two payload magnitudes.
    pub fn approx_eq(&self, other: &Value, tol: Tolerance) -> bool {
        if self.kind() != other.kind() {
            return false;
        }
        let (a, b) = (self.components(), other.components());
        if a.len() != b.len() {
            return false;
        }
        let magnitude = f64::max(self.magnitude(), other.magnitude());
        a.iter().zip(b).all(|(x, y)| tol.close(*x, *y, magnitude))
    }

    /// Multiplies the value by a scalar.
    pub fn scaled(&self, a: Scalar) -> Value {
        match self {
            Value::Scalar(s) => Value::Scalar(a * s),
            Value::Vector(v) => Value::Vector(scale(a, v)),
            Value::FunHtoC(r) => Value::FunHtoC(scale(a, r)),
            Value::FunHtoH(m) => Value::FunHtoH(m.scaled(a)),
            Value::FunCtoC(s) => Value::FunCtoC(a * s),
            Value::FunCtoH(v) => Value::FunCtoH(scale(a, v)),
        }
    }
}

/// Value of the concatenation of two terms, given only their values.
///
/// Defined exactly when the left value's final character and the right
/// value's first character alternate, as witnessed by their kinds.
pub fn star(left: &Value, right: &Value) -> Result<Value> {
    use Value::*;
    let incompatible = || Error::IncompatibleKinds(left.kind(), right.kind());
    let value = match (left, right) {
        // Domain H on the left: the right side starts with a ket.
        (FunHtoC(r), Vector(y)) => Scalar(covector_apply(r, y)?),
        (FunHtoC(r), FunHtoH(m)) => FunHtoC(covector_times(r, m)?),
        (FunHtoC(r), FunCtoH(v)) => FunCtoC(covector_apply(r, v)?),
        (FunHtoH(m), Vector(y)) => Vector(m.apply(y)?),
        (FunHtoH(m), FunHtoH(n)) => FunHtoH(m.compose(n)?),
        (FunHtoH(m), FunCtoH(v)) => FunCtoH(m.apply(v)?),

        // Domain C on the left: the right side starts with a bra.
        (FunCtoC(s), Scalar(c)) => Scalar(s * c),
        (FunCtoC(s), FunCtoC(t)) => FunCtoC(s * t),
        (FunCtoC(s), FunHtoC(r)) => FunHtoC(scale(*s, r)),
        (FunCtoH(v), Scalar(c)) => Vector(scale(*c, v)),
        (FunCtoH(v), FunCtoC(t)) => FunCtoH(scale(*t, v)),
        (FunCtoH(v), FunHtoC(r)) => FunHtoH(Operator::outer(v, r)?),

        // Non-function on the left ends with a vector ket.
        (Scalar(c), Scalar(d)) => Scalar(c * d),
        (Scalar(c), FunHtoC(r)) => FunHtoC(scale(*c, r)),
        (Scalar(c), FunCtoC(t)) => FunCtoC(c * t),
        (Vector(v), Scalar(c)) => Vector(scale(*c, v)),
        (Vector(v), FunHtoC(r)) => FunHtoH(Operator::outer(v, r)?),
        (Vector(v), FunCtoC(t)) => FunCtoH(scale(*t, v)),

        _ => return Err(incompatible()),
    };
    Ok(value)
}

/// Applies a function value to an argument from its domain.
pub fn apply(value: &Value, arg: &Argument) -> Result<Value> {
    let kind = value.kind();
    let out = match (value, arg) {
        (Value::Scalar(_) | Value::Vector(_), _) => return Err(Error::NotAFunction(kind)),
        (Value::FunCtoC(s), Argument::Scalar(a)) => Value::Scalar(s * a),
        (Value::FunCtoH(v), Argument::Scalar(a)) => Value::Vector(scale(*a, v)),
        (Value::FunHtoC(r), Argument::Vector(y)) if r.len() == y.len() => {
            Value::Scalar(covector_apply(r, y)?)
        }
        (Value::FunHtoH(m), Argument::Vector(y)) if m.dim() == y.len() => {
            Value::Vector(m.apply(y)?)
        }
        _ => return Err(Error::DomainMismatch(kind)),
    };
    Ok(out)
}

/// Rule assigning markings to unmarked kets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// A ket is a vector iff it is the final character.
    FinalVector,
    /// A ket is a function iff it is the first character and the last
    /// character is a bra.
    FirstFunction,
    /// Every ket is a function.
    AllFunction,
    /// Every ket must already be marked.
    Explicit,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::FinalVector,
        Strategy::FirstFunction,
        Strategy::AllFunction,
        Strategy::Explicit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::FinalVector => "final-vector",
            Strategy::FirstFunction => "first-function",
            Strategy::AllFunction => "all-function",
            Strategy::Explicit => "explicit",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownStrategy;

impl fmt::Display for UnknownStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of final-vector, first-function, all-function, explicit")
    }
}

impl core::error::Error for UnknownStrategy {}

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or(UnknownStrategy)
    }
}

/// Marks every `Default` ket according to `strategy`. Explicit markings are
/// kept.
pub fn resolve_markings(term: &Term, strategy: Strategy) -> Result<Term> {
    let last = term.len() - 1;
    let ends_with_bra = term.last().is_bra();
    let mut unresolved = None;
    let resolved = term.map_markings(|pos, m| {
        if m != Marking::Default {
            return m;
        }
        let as_function = match strategy {
            Strategy::FinalVector => pos != last,
            Strategy::FirstFunction => pos == 0 && ends_with_bra,
            Strategy::AllFunction => true,
            Strategy::Explicit => {
                unresolved.get_or_insert(pos);
                return m;
            }
        };
        if as_function {
            Marking::FunctionKet
        } else {
            Marking::VectorKet
        }
    });
    match unresolved {
        Some(position) => Err(Error::UnresolvedMarking { position }),
        None => Ok(resolved),
    }
}

/// Kind of `eval(term, _, strategy)`, read off the first and last characters.
pub fn infer_kind(term: &Term, strategy: Strategy) -> Result<ValueKind> {
    let resolved = resolve_markings(term, strategy)?;
    ValueKind::of_shape(resolved.first(), resolved.last()).ok_or(Error::UnresolvedMarking {
        position: term.len() - 1,
    })
}

pub fn eval(term: &Term, ws: &Workspace, strategy: Strategy) -> Result<Value> {
    let resolved = resolve_markings(term, strategy)?;
    eval_marked(&resolved, ws, 0)
}

fn eval_marked(term: &Term, ws: &Workspace, offset: usize) -> Result<Value> {
    match term.view() {
        TermView::Leaf(c) => leaf_value(c, ws, offset),
        TermView::Concat(l, r) => {
            let left = eval_marked(l, ws, offset)?;
            let right = eval_marked(r, ws, offset + l.len())?;
            star(&left, &right)
        }
    }
}

/// Value of a single character: bras become covectors `conj(x)`.
pub fn leaf_value(c: &DiracChar, ws: &Workspace, position: usize) -> Result<Value> {
    let v = ws.lookup(c.label())?;
    match c {
        DiracChar::Bra(_) => Ok(Value::FunHtoC(v.conj())),
        DiracChar::Ket(_, Marking::VectorKet) => Ok(Value::Vector(v.clone())),
        DiracChar::Ket(_, Marking::FunctionKet) => Ok(Value::FunCtoH(v.clone())),
        DiracChar::Ket(_, Marking::Default) => Err(Error::UnresolvedMarking { position }),
    }
}

/// Closed-form value with every non-final ket read as a vector.
///
/// Bras and kets are paired up as `<x_i|y_i>` and multiplied into
/// `c = prod_i <x_i|y_i>`; the result is `c`, `c <x0|`, `c |y0>` or
/// `c |y0><x0|` depending on whether the term starts with a ket `|y0>` and
/// ends with a bra `<x0|`. Markings are ignored; a final ket is a vector.
pub fn normal_form(term: &Term, ws: &Workspace) -> Result<Value> {
    let chars = term.characters();
    let mut rest = &chars[..];
    let mut leading = None;
    if let [first @ DiracChar::Ket(..), tail @ ..] = rest {
        leading = Some(ws.lookup(first.label())?);
        rest = tail;
    }
    let mut trailing = None;
    if let [init @ .., last @ DiracChar::Bra(_)] = rest {
        trailing = Some(ws.lookup(last.label())?);
        rest = init;
    }
    let mut c = Scalar::new(1.0, 0.0);
    for pair in rest.chunks(2) {
        let x = ws.lookup(pair[0].label())?;
        let y = ws.lookup(pair[1].label())?;
        c *= inner_product(x, y)?;
    }
    let value = match (leading, trailing) {
        (None, None) => Value::Scalar(c),
        (None, Some(x0)) => Value::FunHtoC(scale(c, &x0.conj())),
        (Some(y0), None) => Value::Vector(scale(c, y0)),
        (Some(y0), Some(x0)) => Value::FunHtoH(Operator::outer(&scale(c, y0), &x0.conj())?),
    };
    Ok(value)
}

fn write_scalar(f: &mut fmt::Formatter<'_>, z: Scalar) -> fmt::Result {
    // `+ 0.0` folds negative zero.
    let re = z.re + 0.0;
    let im = z.im + 0.0;
    let sign = if im < 0.0 { '-' } else { '+' };
    write!(f, "{re}{sign}{}i", im.abs())
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Scalar]) -> fmt::Result {
    f.write_str("[")?;
    for (i, z) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_scalar(f, *z)?;
    }
    f.write_str("]")
}

/// Scalar literal in the `re+imi` form used by rendered values.
pub struct DisplayScalar(pub Scalar);

impl fmt::Display for DisplayScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_scalar(f, self.0)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => {
                f.write_str("scalar(")?;
                write_scalar(f, *s)?;
                f.write_str(")")
            }
            Value::Vector(v) => {
                f.write_str("vector")?;
                write_list(f, v.as_slice())
            }
            Value::FunHtoC(r) => {
                f.write_str("covector")?;
                write_list(f, r.as_slice())
            }
            Value::FunHtoH(m) => {
                f.write_str("operator[")?;
                for (i, row) in m.rows().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write_list(f, row)?;
                }
                f.write_str("]")
            }
            Value::FunCtoC(s) => {
                f.write_str("fun C->C(")?;
                write_scalar(f, *s)?;
                f.write_str(")")
            }
            Value::FunCtoH(v) => {
                f.write_str("fun C->H")?;
                write_list(f, v.as_slice())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_term;
    use crate::workspace::Label;
    use alloc::string::ToString;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn vec_of(parts: &[(f64, f64)]) -> Vector {
        Vector::new(parts.iter().map(|&(r, i)| c(r, i)).collect()).unwrap()
    }

    fn ws(bindings: &[(&str, Vector)]) -> Workspace {
        let dim = bindings[0].1.len();
        bindings
            .iter()
            .fold(Workspace::new(dim).unwrap(), |w, (l, v)| {
                w.bind(Label::new(l).unwrap(), v.clone()).unwrap()
            })
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn sample() -> Workspace {
        ws(&[
            ("x", vec_of(&[(1.0, 2.0), (0.5, -1.0)])),
            ("y", vec_of(&[(-1.0, 0.0), (0.0, 3.0)])),
            ("u", vec_of(&[(0.0, 1.0), (2.0, 0.0)])),
            ("v", vec_of(&[(1.5, 0.5), (-2.0, 1.0)])),
            ("w", vec_of(&[(0.25, 0.0), (1.0, 1.0)])),
        ])
    }

    fn lookup(w: &Workspace, l: &str) -> Vector {
        w.lookup(&Label::new(l).unwrap()).unwrap().clone()
    }

    fn ip(w: &Workspace, a: &str, b: &str) -> Scalar {
        inner_product(&lookup(w, a), &lookup(w, b)).unwrap()
    }

    fn close(a: &Value, b: &Value) -> bool {
        a.approx_eq(b, Tolerance::DEFAULT)
    }

    #[test]
    fn infer_kind_examples() {
        assert_eq!(
            infer_kind(&t("<x|y>"), Strategy::FinalVector).unwrap(),
            ValueKind::ScalarK
        );
        for s in Strategy::ALL {
            let term = if s == Strategy::Explicit {
                t("|y:v><x|")
            } else {
                t("|y><x|")
            };
            assert_eq!(infer_kind(&term, s).unwrap(), ValueKind::FunHtoH);
        }
        assert_eq!(
            infer_kind(&t("<x|y>"), Strategy::AllFunction).unwrap(),
            ValueKind::FunCtoC
        );
        assert_eq!(
            infer_kind(&t("<x|y>"), Strategy::Explicit).unwrap_err(),
            Error::UnresolvedMarking { position: 1 }
        );
    }

    #[test]
    fn kind_table_covers_all_six_shapes() {
        let cases = [
            ("<x|", ValueKind::FunHtoC),
            ("<x|y:f>", ValueKind::FunCtoC),
            ("<x|y:v>", ValueKind::ScalarK),
            ("|y:v><x|", ValueKind::FunHtoH),
            ("|y:f>", ValueKind::FunCtoH),
            ("|y:v>", ValueKind::VectorK),
        ];
        for (text, kind) in cases {
            assert_eq!(
                infer_kind(&t(text), Strategy::Explicit).unwrap(),
                kind,
                "{text}"
            );
            assert_eq!(
                eval(&t(text), &sample(), Strategy::Explicit)
                    .unwrap()
                    .kind(),
                kind
            );
        }
    }

    #[test]
    fn outer_product_applied_to_a_ket() {
        let w = sample();
        let got = eval(&t("|w><v|u>"), &w, Strategy::FinalVector).unwrap();
        let expected = Value::Vector(scale(ip(&w, "v", "u"), &lookup(&w, "w")));
        assert!(close(&got, &expected), "{got} vs {expected}");
    }

    #[test]
    fn worked_example_is_marking_independent() {
        let w = sample();
        let cd = ip(&w, "x", "y") * ip(&w, "u", "v");
        for m in ["v", "f"] {
            let term = t(&alloc::format!("(<x|y:{m}>)<u|v:v>"));
            let got = eval(&term, &w, Strategy::Explicit).unwrap();
            match got {
                Value::Scalar(s) => assert!((s - cd).norm() <= 1e-12, "{s} vs {cd}"),
                other => panic!("{other}"),
            }
        }
    }

    #[test]
    fn unit_vector_self_product() {
        let w = ws(&[("e", Vector::from_reals(&[1.0, 0.0]).unwrap())]);
        assert_eq!(
            eval(&t("<e|e>"), &w, Strategy::FinalVector).unwrap(),
            Value::Scalar(c(1.0, 0.0))
        );
    }

    #[test]
    fn star_examples() {
        let w = sample();
        let bra_x = Value::FunHtoC(lookup(&w, "x").conj());
        let y = Value::Vector(lookup(&w, "y"));
        assert_eq!(star(&bra_x, &y).unwrap(), Value::Scalar(ip(&w, "x", "y")));

        let v = lookup(&w, "v");
        let k = c(2.0, -1.0);
        assert_eq!(
            star(&Value::Vector(v.clone()), &Value::Scalar(k)).unwrap(),
            Value::Vector(scale(k, &v))
        );
        assert_eq!(
            star(&Value::Vector(v.clone()), &Value::Vector(v.clone())).unwrap_err(),
            Error::IncompatibleKinds(ValueKind::VectorK, ValueKind::VectorK)
        );

        // y = [1, i], x = [2, i]: entries y_i conj(x_j) = [[2, -i], [2i, 1]].
        let fy = Value::FunCtoH(vec_of(&[(1.0, 0.0), (0.0, 1.0)]));
        let bx = Value::FunHtoC(vec_of(&[(2.0, 0.0), (0.0, 1.0)]).conj());
        let expected = [[c(2.0, 0.0), c(0.0, -1.0)], [c(0.0, 2.0), c(1.0, 0.0)]];
        assert_eq!(
            star(&fy, &bx).unwrap(),
            Value::FunHtoH(Operator::from_fn(2, |i, j| expected[i][j]))
        );
    }

    // A value ends with a bra, a function ket or a vector ket, and starts with
    // a bra or a ket; `star` is defined exactly when the two sides alternate.
    #[test]
    fn star_domain_matches_alternation() {
        let w = sample();
        let samples = ["<x|y:v>", "|y:v>", "<x|", "|y:v><x|", "<x|y:f>", "|y:f>"].map(|s| {
            let term = t(s);
            (term.clone(), eval(&term, &w, Strategy::Explicit).unwrap())
        });
        let mut defined = 0;
        for (ta, a) in &samples {
            for (tb, b) in &samples {
                let alternates = ta.last().alternates_with(tb.first());
                let got = star(a, b);
                assert_eq!(got.is_ok(), alternates, "{ta} * {tb}");
                if alternates {
                    defined += 1;
                    let joined = Term::concat(ta.clone(), tb.clone()).unwrap();
                    let direct = eval(&joined, &w, Strategy::Explicit).unwrap();
                    assert!(close(&got.unwrap(), &direct));
                }
            }
        }
        assert_eq!(defined, 18);
    }

    #[test]
    fn apply_examples() {
        let w = sample();
        let comp = eval(&t("<x|y>"), &w, Strategy::AllFunction).unwrap();
        let one = Argument::Scalar(c(1.0, 0.0));
        let got = apply(&comp, &one).unwrap();
        assert!(close(&got, &Value::Scalar(ip(&w, "x", "y"))));

        let fy = eval(&t("|y:f>"), &w, Strategy::Explicit).unwrap();
        assert_eq!(apply(&fy, &one).unwrap(), Value::Vector(lookup(&w, "y")));

        assert_eq!(
            apply(&Value::Scalar(c(3.0, 0.0)), &one).unwrap_err(),
            Error::NotAFunction(ValueKind::ScalarK)
        );
        let bra = eval(&t("<x|"), &w, Strategy::Explicit).unwrap();
        assert_eq!(
            apply(&bra, &one).unwrap_err(),
            Error::DomainMismatch(ValueKind::FunHtoC)
        );
        let short = Argument::Vector(Vector::from_reals(&[1.0]).unwrap());
        assert_eq!(
            apply(&bra, &short).unwrap_err(),
            Error::DomainMismatch(ValueKind::FunHtoC)
        );
    }

    #[test]
    fn normal_form_examples() {
        let w = sample();
        let got = normal_form(&t("<x|y><u|v>"), &w).unwrap();
        assert!(close(
            &got,
            &Value::Scalar(ip(&w, "x", "y") * ip(&w, "u", "v"))
        ));

        let got = normal_form(&t("|w><x|y>"), &w).unwrap();
        assert!(close(
            &got,
            &Value::Vector(scale(ip(&w, "x", "y"), &lookup(&w, "w")))
        ));

        assert_eq!(
            normal_form(&t("|y>"), &w).unwrap(),
            Value::Vector(lookup(&w, "y"))
        );
        assert_eq!(
            normal_form(&t("<q|"), &w).unwrap_err(),
            Error::UnboundLabel(Label::new("q").unwrap())
        );
        for s in ["<x|", "<x|y><u|", "|w><v|", "|w><x|y><u|"] {
            let term = t(s);
            let a = normal_form(&term, &w).unwrap();
            let b = eval(&term, &w, Strategy::FinalVector).unwrap();
            assert!(close(&a, &b), "{s}: {a} vs {b}");
        }
    }

    fn markings(term: &Term) -> Vec<Option<Marking>> {
        term.characters().iter().map(DiracChar::marking).collect()
    }

    #[test]
    fn resolve_markings_examples() {
        use Marking::*;
        let r = resolve_markings(&t("|y><x|w>"), Strategy::FinalVector).unwrap();
        assert_eq!(markings(&r), vec![Some(FunctionKet), None, Some(VectorKet)]);

        let r = resolve_markings(&t("|y><x|y><x|"), Strategy::FirstFunction).unwrap();
        assert_eq!(
            markings(&r),
            vec![Some(FunctionKet), None, Some(VectorKet), None]
        );

        let r = resolve_markings(&t("<x|y>"), Strategy::FirstFunction).unwrap();
        assert_eq!(markings(&r), vec![None, Some(VectorKet)]);

        let r = resolve_markings(&t("|y><x|w>"), Strategy::AllFunction).unwrap();
        assert_eq!(
            markings(&r),
            vec![Some(FunctionKet), None, Some(FunctionKet)]
        );

        // Explicit markings survive every strategy.
        let r = resolve_markings(&t("|y:v><x|w:f>"), Strategy::FinalVector).unwrap();
        assert_eq!(markings(&r), vec![Some(VectorKet), None, Some(FunctionKet)]);

        assert_eq!(
            resolve_markings(&t("|y:v><x|w>"), Strategy::Explicit).unwrap_err(),
            Error::UnresolvedMarking { position: 2 }
        );
    }

    #[test]
    fn unbound_label_is_reported() {
        let w = sample();
        assert_eq!(
            eval(&t("<x|zz>"), &w, Strategy::FinalVector).unwrap_err(),
            Error::UnboundLabel(Label::new("zz").unwrap())
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(Value::Scalar(c(1.0, 0.0)).to_string(), "scalar(1+0i)");
        assert_eq!(Value::Scalar(c(-0.0, -0.0)).to_string(), "scalar(0+0i)");
        assert_eq!(Value::Scalar(c(0.5, -2.0)).to_string(), "scalar(0.5-2i)");
        assert_eq!(
            Value::Vector(vec_of(&[(1.0, 0.0), (0.0, 1.0)])).to_string(),
            "vector[1+0i, 0+1i]"
        );
        assert_eq!(
            Value::FunHtoC(vec_of(&[(1.0, -1.0)])).to_string(),
            "covector[1-1i]"
        );
        assert_eq!(
            Value::FunHtoH(Operator::from_fn(2, |i, j| c((i * 2 + j) as f64, 0.0))).to_string(),
            "operator[[0+0i, 1+0i], [2+0i, 3+0i]]"
        );
        assert_eq!(Value::FunCtoC(c(2.0, 1.0)).to_string(), "fun C->C(2+1i)");
        assert_eq!(
            Value::FunCtoH(vec_of(&[(1.0, 0.0), (2.0, 0.0)])).to_string(),
            "fun C->H[1+0i, 2+0i]"
        );
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("final_vector".parse::<Strategy>().is_err());
    }
}
