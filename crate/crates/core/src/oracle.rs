//! Reference interpreter for marked Dirac terms.
//!
//! Function values are kept as closures and concatenation is carried out
//! literally: `(f . g)(a) = f(g(a))`, `f(v)`, `(v . g)(a) = v * g(a)` and
//! `v * w`. Nothing here touches the extensional payloads of
//! [`crate::eval`]; the only shared pieces are the term tree and the
//! workspace bindings. [`materialize`] turns a closure into a payload by
//! probing it at `1` or on the standard basis.

use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::eval::{Domain, Operator, Value, ValueKind};
use crate::term::{DiracChar, Marking, Term, TermView};
use crate::workspace::{Scalar, Vector, Workspace};

/// A scalar or a vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Num {
    Scalar(Scalar),
    Vector(Vec<Scalar>),
}

type LinearMap = Rc<dyn Fn(Num) -> Result<Num>>;

#[derive(Clone)]
pub enum OracleValue {
    Num(Num),
    Map(Domain, LinearMap),
}

impl fmt::Debug for OracleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleValue::Num(n) => f.debug_tuple("Num").field(n).finish(),
            OracleValue::Map(d, _) => f.debug_tuple("Map").field(d).finish(),
        }
    }
}

impl OracleValue {
    /// Applies a map to an argument; `Num` values are not callable.
    pub fn call(&self, arg: Num) -> Result<Num> {
        match self {
            OracleValue::Map(_, f) => f(arg),
            OracleValue::Num(Num::Scalar(_)) => Err(Error::NotAFunction(ValueKind::ScalarK)),
            OracleValue::Num(Num::Vector(_)) => Err(Error::NotAFunction(ValueKind::VectorK)),
        }
    }
}

fn shape_error() -> Error {
    Error::IncompatibleKinds(ValueKind::VectorK, ValueKind::VectorK)
}

fn conj_dot(x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let mut acc = Scalar::new(0.0, 0.0);
    for i in 0..x.len() {
        acc += x[i].conj() * y[i];
    }
    Ok(acc)
}

fn times_scalar(v: &[Scalar], a: Scalar) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(v.len());
    for z in v {
        out.push(a * z);
    }
    out
}

/// Product of two nums, at least one of them a scalar.
fn multiply(a: &Num, b: &Num) -> Result<Num> {
    match (a, b) {
        (Num::Scalar(p), Num::Scalar(q)) => Ok(Num::Scalar(p * q)),
        (Num::Scalar(p), Num::Vector(v)) | (Num::Vector(v), Num::Scalar(p)) => {
            Ok(Num::Vector(times_scalar(v, *p)))
        }
        (Num::Vector(_), Num::Vector(_)) => Err(shape_error()),
    }
}

fn leaf(c: &DiracChar, ws: &Workspace, position: usize) -> Result<OracleValue> {
    let v: Vec<Scalar> = ws.lookup(c.label())?.as_slice().to_vec();
    Ok(match c {
        DiracChar::Bra(_) => OracleValue::Map(
            Domain::H,
            Rc::new(move |arg| match arg {
                Num::Vector(y) => Ok(Num::Scalar(conj_dot(&v, &y)?)),
                Num::Scalar(_) => Err(Error::DomainMismatch(ValueKind::FunHtoC)),
            }),
        ),
        DiracChar::Ket(_, Marking::VectorKet) => OracleValue::Num(Num::Vector(v)),
        DiracChar::Ket(_, Marking::FunctionKet) => OracleValue::Map(
            Domain::C,
            Rc::new(move |arg| match arg {
                Num::Scalar(a) => Ok(Num::Vector(times_scalar(&v, a))),
                Num::Vector(_) => Err(Error::DomainMismatch(ValueKind::FunCtoH)),
            }),
        ),
        DiracChar::Ket(_, Marking::Default) => return Err(Error::UnresolvedMarking { position }),
    })
}

fn combine(left: OracleValue, right: OracleValue) -> Result<OracleValue> {
    Ok(match (left, right) {
        (OracleValue::Map(_, f), OracleValue::Map(dom, g)) => {
            OracleValue::Map(dom, Rc::new(move |a| f(g(a)?)))
        }
        (OracleValue::Map(_, f), OracleValue::Num(n)) => OracleValue::Num(f(n)?),
        (OracleValue::Num(n), OracleValue::Map(dom, g)) => {
            OracleValue::Map(dom, Rc::new(move |a| multiply(&n, &g(a)?)))
        }
        (OracleValue::Num(p), OracleValue::Num(q)) => OracleValue::Num(multiply(&p, &q)?),
    })
}

/// Evaluates a fully marked term with closures.
pub fn oracle_eval(term: &Term, ws: &Workspace) -> Result<OracleValue> {
    go(term, ws, 0)
}

fn go(term: &Term, ws: &Workspace, offset: usize) -> Result<OracleValue> {
    match term.view() {
        TermView::Leaf(c) => leaf(c, ws, offset),
        TermView::Concat(l, r) => {
            let left = go(l, ws, offset)?;
            let right = go(r, ws, offset + l.len())?;
            combine(left, right)
        }
    }
}

fn basis(dim: usize, i: usize) -> Num {
    let mut v = alloc::vec![Scalar::new(0.0, 0.0); dim];
    v[i] = Scalar::new(1.0, 0.0);
    Num::Vector(v)
}

fn to_vector(v: Vec<Scalar>) -> Result<Vector> {
    Vector::new(v)
}

/// Converts an oracle value into an extensional [`Value`].
pub fn materialize(value: &OracleValue, ws: &Workspace) -> Result<Value> {
    match value {
        OracleValue::Num(Num::Scalar(s)) => Ok(Value::Scalar(*s)),
        OracleValue::Num(Num::Vector(v)) => Ok(Value::Vector(to_vector(v.clone())?)),
        OracleValue::Map(Domain::C, f) => match f(Num::Scalar(Scalar::new(1.0, 0.0)))? {
            Num::Scalar(s) => Ok(Value::FunCtoC(s)),
            Num::Vector(v) => Ok(Value::FunCtoH(to_vector(v)?)),
        },
        OracleValue::Map(Domain::H, f) => {
            let n = ws.dim();
            let images = (0..n).map(|i| f(basis(n, i))).collect::<Result<Vec<_>>>()?;
            if images.iter().all(|m| matches!(m, Num::Scalar(_))) {
                let row = images
                    .into_iter()
                    .map(|m| match m {
                        Num::Scalar(s) => s,
                        Num::Vector(_) => unreachable!(),
                    })
                    .collect();
                return Ok(Value::FunHtoC(to_vector(row)?));
            }
            // Column j is the image of e_j.
            let mut columns = Vec::with_capacity(n);
            for m in images {
                match m {
                    Num::Vector(col) if col.len() == n => columns.push(col),
                    _ => return Err(shape_error()),
                }
            }
            Ok(Value::FunHtoH(Operator::from_fn(n, |i, j| columns[j][i])))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval, Strategy};
    use crate::parser::parse_term;
    use crate::workspace::{Label, Tolerance};
    use alloc::vec;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn workspace() -> Workspace {
        Workspace::new(2)
            .unwrap()
            .bind(
                Label::new("x").unwrap(),
                Vector::new(vec![c(2.0, 0.0), c(0.0, 1.0)]).unwrap(),
            )
            .unwrap()
            .bind(
                Label::new("y").unwrap(),
                Vector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap(),
            )
            .unwrap()
            .bind(
                Label::new("e").unwrap(),
                Vector::from_reals(&[1.0, 0.0]).unwrap(),
            )
            .unwrap()
    }

    #[test]
    fn inner_product_is_a_plain_loop() {
        let ws = workspace();
        let v = oracle_eval(&parse_term("<x|y:v>").unwrap(), &ws).unwrap();
        // conj(2) * 1 + conj(i) * i = 2 + 1
        match v {
            OracleValue::Num(Num::Scalar(s)) => assert_eq!(s, c(3.0, 0.0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn function_ket_probes_to_its_vector() {
        let ws = workspace();
        let v = oracle_eval(&parse_term("|y:f>").unwrap(), &ws).unwrap();
        let y = vec![c(1.0, 0.0), c(0.0, 1.0)];
        assert_eq!(
            v.call(Num::Scalar(c(1.0, 0.0))).unwrap(),
            Num::Vector(y.clone())
        );
        assert_eq!(
            materialize(&v, &ws).unwrap(),
            Value::FunCtoH(Vector::new(y).unwrap())
        );
    }

    #[test]
    fn bra_materializes_to_conjugate_covector() {
        let ws = workspace();
        let v = oracle_eval(&parse_term("<e|").unwrap(), &ws).unwrap();
        assert_eq!(
            materialize(&v, &ws).unwrap(),
            Value::FunHtoC(Vector::from_reals(&[1.0, 0.0]).unwrap())
        );
    }

    #[test]
    fn outer_product_matrix() {
        // y = [1, i], x = [2, i]: entries y_i conj(x_j) = [[2, -i], [2i, 1]].
        let ws = workspace();
        let v = oracle_eval(&parse_term("|y:f><x|").unwrap(), &ws).unwrap();
        let expected = Operator::from_fn(2, |i, j| {
            [[c(2.0, 0.0), c(0.0, -1.0)], [c(0.0, 2.0), c(1.0, 0.0)]][i][j]
        });
        assert_eq!(
            materialize(&v, &ws).unwrap(),
            Value::FunHtoH(expected.clone())
        );
        let direct = eval(&parse_term("|y:f><x|").unwrap(), &ws, Strategy::Explicit).unwrap();
        assert!(direct.approx_eq(&Value::FunHtoH(expected), Tolerance::DEFAULT));
    }

    #[test]
    fn unmarked_and_unbound_are_rejected() {
        let ws = workspace();
        assert_eq!(
            oracle_eval(&parse_term("<x|y>").unwrap(), &ws).unwrap_err(),
            Error::UnresolvedMarking { position: 1 }
        );
        assert_eq!(
            oracle_eval(&parse_term("<x|q:v>").unwrap(), &ws).unwrap_err(),
            Error::UnboundLabel(Label::new("q").unwrap())
        );
    }
}
