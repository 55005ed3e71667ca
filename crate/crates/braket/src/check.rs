//! Property suites for the evaluator, run against seeded random workspaces.
//!
//! Every suite draws from its own random stream, so adding cases to one
//! suite never perturbs another, and reports the first counterexample it
//! finds. Suites take the evaluator as a parameter so a deliberately broken
//! one can be checked against them.

use std::fmt;

use braket_core::eval::leaf_value;
use braket_core::oracle::{materialize, oracle_eval, Num, OracleValue};
use braket_core::{
    all_parenthesizations, apply, infer_kind, inner_product, normal_form, parse_term, render,
    scale, star, Argument, DiracChar, Domain, Label, Marking, Result, Scalar, Strategy, Term,
    Tolerance, Value, Vector, Workspace, DEFAULT_PARENTHESIZATION_CAP,
};

use crate::gen::{Gen, Markings};
use crate::workspace_file::dump_workspace;

/// Evaluates a term against a workspace.
pub trait Evaluator {
    fn eval(&self, term: &Term, ws: &Workspace, strategy: Strategy) -> Result<Value>;
}

/// The library's clause-based evaluator.
pub struct Clauses;

impl Evaluator for Clauses {
    fn eval(&self, term: &Term, ws: &Workspace, strategy: Strategy) -> Result<Value> {
        braket_core::eval(term, ws, strategy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn cases(self) -> usize {
        match self {
            Level::Quick => 200,
            Level::Full => 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub case: usize,
    pub term: String,
    pub workspace: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub counterexample: Option<Counterexample>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.ok() { "pass" } else { "FAIL" };
        write!(
            f,
            "[{tag}] {}: {}/{} passed",
            self.name, self.passed, self.total
        )?;
        if let Some(cx) = &self.counterexample {
            writeln!(f)?;
            writeln!(f, "  first counterexample (case {}):", cx.case)?;
            writeln!(f, "    term: {}", cx.term)?;
            writeln!(f, "    workspace:")?;
            for line in cx.workspace.lines() {
                writeln!(f, "      {line}")?;
            }
            writeln!(f, "    expected: {}", cx.expected)?;
            write!(f, "    actual: {}", cx.actual)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        let passed = self.suites.iter().filter(|s| s.ok()).count();
        write!(f, "summary: {passed}/{} suites passed", self.suites.len())
    }
}

type CaseResult = std::result::Result<(), Counterexample>;

fn run_suite(
    name: &'static str,
    total: usize,
    mut case: impl FnMut(usize) -> CaseResult,
) -> SuiteResult {
    let mut passed = 0;
    let mut counterexample = None;
    for i in 0..total {
        match case(i) {
            Ok(()) => passed += 1,
            Err(cx) => {
                counterexample.get_or_insert(cx);
            }
        }
    }
    SuiteResult {
        name,
        passed,
        total,
        counterexample,
    }
}

fn show(v: &Result<Value>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn counterexample(
    case: usize,
    term: impl fmt::Display,
    ws: &Workspace,
    expected: impl Into<String>,
    actual: impl Into<String>,
) -> Counterexample {
    Counterexample {
        case,
        term: term.to_string(),
        workspace: dump_workspace(ws),
        expected: expected.into(),
        actual: actual.into(),
    }
}

/// `Ok` iff both evaluate and agree within the default tolerance.
fn agree(
    case: usize,
    term: impl fmt::Display,
    ws: &Workspace,
    expected: &Result<Value>,
    actual: &Result<Value>,
) -> CaseResult {
    match (expected, actual) {
        (Ok(a), Ok(b)) if a.approx_eq(b, Tolerance::DEFAULT) => Ok(()),
        _ => Err(counterexample(case, term, ws, show(expected), show(actual))),
    }
}

/// Conjugate symmetry and positivity of the inner product.
pub fn inner_product_axioms(gen: &mut Gen, cases: usize) -> SuiteResult {
    run_suite("inner-product-axioms", cases, |i| {
        let dim = gen.dim();
        let mut ws = gen.workspace(dim);
        let (x, y) = (gen.vector(dim), gen.vector(dim));
        ws.bind_in_place(Label::new("x").unwrap(), x.clone())
            .unwrap();
        ws.bind_in_place(Label::new("y").unwrap(), y.clone())
            .unwrap();
        let xy = inner_product(&x, &y).unwrap();
        let yx = inner_product(&y, &x).unwrap();
        let xx = inner_product(&x, &x).unwrap();
        let symmetric = (xy.re - yx.re).abs() <= 1e-12 && (xy.im + yx.im).abs() <= 1e-12;
        let positive = xx.im.abs() <= 1e-12 && xx.re >= -1e-12;
        if symmetric && positive {
            Ok(())
        } else {
            Err(counterexample(
                i,
                "<x|y> vs conj(<y|x>), <x|x>",
                &ws,
                format!("{xy} = conj({yx}), {xx} real and >= 0"),
                format!("symmetric: {symmetric}, positive: {positive}"),
            ))
        }
    })
}

/// Every parenthesization of a marked character sequence has one value.
/// Case `i` uses dimension `1 + i % 4` and length `2 + (i / 4) % 7`.
pub fn associativity(gen: &mut Gen, ev: &dyn Evaluator, cases: usize) -> SuiteResult {
    run_suite("associativity", cases, |i| {
        let dim = 1 + i % 4;
        let len = 2 + (i / 4) % 7;
        let ws = gen.workspace(dim);
        let start = gen.coin();
        let chars = gen.chars(len, start, Markings::Explicit);
        all_trees_agree(i, &chars, &ws, ev)
    })
}

fn all_trees_agree(
    case: usize,
    chars: &[DiracChar],
    ws: &Workspace,
    ev: &dyn Evaluator,
) -> CaseResult {
    let trees = all_parenthesizations(chars, DEFAULT_PARENTHESIZATION_CAP).map_err(|e| {
        counterexample(
            case,
            format!("{chars:?}"),
            ws,
            "parenthesizations",
            e.to_string(),
        )
    })?;
    let reference = ev.eval(&trees[0], ws, Strategy::Explicit);
    for t in &trees[1..] {
        let other = ev.eval(t, ws, Strategy::Explicit);
        agree(
            case,
            format!("{} vs {}", render(&trees[0]), render(t)),
            ws,
            &reference,
            &other,
        )?;
    }
    Ok(())
}

/// Associativity over every alternating sequence shape of length `1..=8`,
/// every explicit marking, and one random workspace per dimension `1..=4`.
pub fn exhaustive_associativity(gen: &mut Gen, ev: &dyn Evaluator) -> SuiteResult {
    let mut shapes = Vec::new();
    for len in 1..=DEFAULT_PARENTHESIZATION_CAP {
        for start_with_ket in [false, true] {
            let kets = (0..len).filter(|i| (i % 2 == 0) == start_with_ket).count();
            for mask in 0..(1u32 << kets) {
                shapes.push((len, start_with_ket, mask));
            }
        }
    }
    let workspaces: Vec<Workspace> = (1..=4).map(|d| gen.workspace(d)).collect();
    let total = shapes.len() * workspaces.len();
    run_suite("exhaustive-associativity", total, |i| {
        let (len, start_with_ket, mask) = shapes[i / workspaces.len()];
        let ws = &workspaces[i % workspaces.len()];
        let mut chars = gen.chars(len, start_with_ket, Markings::Unmarked);
        let mut bit = 0;
        for c in chars.iter_mut() {
            if let DiracChar::Ket(l, _) = c {
                let m = if mask & (1 << bit) != 0 {
                    Marking::FunctionKet
                } else {
                    Marking::VectorKet
                };
                *c = DiracChar::ket(l.clone(), m);
                bit += 1;
            }
        }
        all_trees_agree(i, &chars, ws, ev)
    })
}

/// All markings of the non-final kets give the same value, for each
/// marking of a final ket.
pub fn robustness(
    gen: &mut Gen,
    ev: &dyn Evaluator,
    cases: usize,
    max_nonfinal: usize,
) -> SuiteResult {
    run_suite("robustness", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let term = loop {
            let t = gen.term(1, 2 * max_nonfinal + 1, Markings::Unmarked);
            if nonfinal_kets(&t).len() <= max_nonfinal {
                break t;
            }
        };
        all_markings_agree(i, &term, &ws, ev)
    })
}

/// Positions of kets that are not the final character.
pub fn nonfinal_kets(term: &Term) -> Vec<usize> {
    let chars = term.characters();
    (0..chars.len().saturating_sub(1))
        .filter(|&p| chars[p].is_ket())
        .collect()
}

fn all_markings_agree(case: usize, term: &Term, ws: &Workspace, ev: &dyn Evaluator) -> CaseResult {
    let positions = nonfinal_kets(term);
    let last = term.len() - 1;
    let finals: &[Option<Marking>] = if term.last().is_ket() {
        &[Some(Marking::VectorKet), Some(Marking::FunctionKet)]
    } else {
        &[None]
    };
    for &final_marking in finals {
        let mut reference: Option<(Term, Result<Value>)> = None;
        for mask in 0..(1u32 << positions.len()) {
            let marked = term.map_markings(|p, m| {
                if p == last {
                    return final_marking.unwrap_or(m);
                }
                let bit = positions
                    .iter()
                    .position(|&q| q == p)
                    .expect("non-final ket");
                if mask & (1 << bit) != 0 {
                    Marking::FunctionKet
                } else {
                    Marking::VectorKet
                }
            });
            let value = ev.eval(&marked, ws, Strategy::Explicit);
            match &reference {
                None => reference = Some((marked, value)),
                Some((first, expected)) => agree(
                    case,
                    format!("{} vs {}", render(first), render(&marked)),
                    ws,
                    expected,
                    &value,
                )?,
            }
        }
    }
    Ok(())
}

/// The evaluated kind equals the kind read off the first and last characters.
pub fn kind_soundness(gen: &mut Gen, ev: &dyn Evaluator, cases: usize) -> SuiteResult {
    run_suite("kind-soundness", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let term = gen.term(1, 10, Markings::Mixed);
        for strategy in Strategy::ALL {
            let t = if strategy == Strategy::Explicit {
                gen.fill_markings(&term)
            } else {
                term.clone()
            };
            let inferred = infer_kind(&t, strategy);
            let actual = ev.eval(&t, &ws, strategy).map(|v| v.kind());
            if inferred.is_err() || inferred != actual {
                return Err(counterexample(
                    i,
                    format!("{} under {strategy}", render(&t)),
                    &ws,
                    format!("{inferred:?}"),
                    format!("{actual:?}"),
                ));
            }
        }
        Ok(())
    })
}

/// Final-vector and first-function resolutions give the same value.
pub fn strategy_agreement(gen: &mut Gen, ev: &dyn Evaluator, cases: usize) -> SuiteResult {
    run_suite("strategy-agreement", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let term = gen.term(1, 10, Markings::Mixed);
        let a = ev.eval(&term, &ws, Strategy::FinalVector);
        let b = ev.eval(&term, &ws, Strategy::FirstFunction);
        agree(i, render(&term), &ws, &a, &b)
    })
}

fn naive_inner(x: &Vector, y: &Vector) -> Scalar {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Closed-form normal form equals final-vector evaluation; for terms that
/// start with a bra and end with a ket it also equals the product of the
/// paired inner products, computed directly.
pub fn normal_form_agreement(
    gen: &mut Gen,
    ev: &dyn Evaluator,
    cases: usize,
    max_len: usize,
) -> SuiteResult {
    run_suite("normal-form", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let term = gen.term(1, max_len, Markings::Unmarked);
        let closed = normal_form(&term, &ws);
        let clauses = ev.eval(&term, &ws, Strategy::FinalVector);
        agree(i, render(&term), &ws, &closed, &clauses)?;
        if term.first().is_bra() && term.last().is_ket() {
            let chars = term.characters();
            let lookup = |c: &DiracChar| ws.lookup(c.label()).unwrap().clone();
            let product: Scalar = chars
                .chunks(2)
                .map(|p| naive_inner(&lookup(&p[0]), &lookup(&p[1])))
                .product();
            agree(i, render(&term), &ws, &Ok(Value::Scalar(product)), &closed)?;
        }
        Ok(())
    })
}

/// The closure oracle, materialized, equals the evaluator.
pub fn oracle_equivalence(
    gen: &mut Gen,
    ev: &dyn Evaluator,
    cases: usize,
    max_len: usize,
) -> SuiteResult {
    run_suite("oracle-equivalence", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let term = gen.term(1, max_len, Markings::Explicit);
        let oracle = oracle_eval(&term, &ws).and_then(|o| materialize(&o, &ws));
        let clauses = ev.eval(&term, &ws, Strategy::Explicit);
        agree(i, render(&term), &ws, &oracle, &clauses)
    })
}

fn num_value(n: Num) -> Value {
    match n {
        Num::Scalar(s) => Value::Scalar(s),
        Num::Vector(v) => Value::Vector(Vector::new(v).expect("finite")),
    }
}

/// Materialized maps agree with their closures on random arguments.
pub fn probing_consistency(gen: &mut Gen, cases: usize, probes: usize) -> SuiteResult {
    run_suite("probing-consistency", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let term = gen.term(1, 6, Markings::Explicit);
        let oracle = oracle_eval(&term, &ws).expect("marked and bound");
        let OracleValue::Map(domain, _) = &oracle else {
            return Ok(());
        };
        let domain = *domain;
        let value = materialize(&oracle, &ws).expect("materializes");
        for _ in 0..probes {
            let (num, arg) = match domain {
                Domain::C => {
                    let a = gen.scalar();
                    (Num::Scalar(a), Argument::Scalar(a))
                }
                Domain::H => {
                    let v = gen.vector(dim);
                    (Num::Vector(v.as_slice().to_vec()), Argument::Vector(v))
                }
            };
            let direct = oracle.call(num).map(num_value);
            let probed = apply(&value, &arg);
            agree(i, render(&term), &ws, &direct, &probed)?;
        }
        Ok(())
    })
}

/// Evaluating a concatenation equals starring the halves' values.
pub fn compositionality(gen: &mut Gen, ev: &dyn Evaluator, cases: usize) -> SuiteResult {
    run_suite("compositionality", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let left = gen.term(1, 5, Markings::Explicit);
        let right = gen.term_starting(left.last().is_bra(), 5, Markings::Explicit);
        let joined = Term::concat(left.clone(), right.clone()).expect("alternating");
        let whole = ev.eval(&joined, &ws, Strategy::Explicit);
        let parts = ev.eval(&left, &ws, Strategy::Explicit).and_then(|a| {
            ev.eval(&right, &ws, Strategy::Explicit)
                .and_then(|b| star(&a, &b))
        });
        agree(i, render(&joined), &ws, &parts, &whole)
    })
}

/// `(|w><v|)(v') = <v|v'> w`.
pub fn outer_product_identity(gen: &mut Gen, ev: &dyn Evaluator, cases: usize) -> SuiteResult {
    let term = parse_term("|w><v|").expect("valid");
    run_suite("outer-product-identity", cases, |i| {
        let dim = gen.dim();
        let (w, v, v2) = (gen.vector(dim), gen.vector(dim), gen.vector(dim));
        let ws = Workspace::new(dim)
            .and_then(|ws| ws.bind(Label::new("w")?, w.clone()))
            .and_then(|ws| ws.bind(Label::new("v")?, v.clone()))
            .and_then(|ws| ws.bind(Label::new("vp")?, v2.clone()))
            .expect("valid workspace");
        let applied = ev
            .eval(&term, &ws, Strategy::FinalVector)
            .and_then(|op| apply(&op, &Argument::Vector(v2.clone())));
        let expected = inner_product(&v, &v2).map(|c| Value::Vector(scale(c, &w)));
        agree(i, "(|w><v|)(vp)", &ws, &expected, &applied)
    })
}

/// Starring depends only on values: two differently built terms with equal
/// values give equal products with a third term.
pub fn star_well_defined(gen: &mut Gen, ev: &dyn Evaluator, cases: usize) -> SuiteResult {
    run_suite("star-well-defined", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let len = gen.in_range(1, 6);
        let start = gen.coin();
        let chars = gen.chars(len, start, Markings::Explicit);
        let s1 = gen.tree(&chars);
        let last = len - 1;
        let reshaped = gen.tree(&chars);
        let t1 = reshaped.map_markings(|p, m| {
            if p == last {
                m
            } else {
                gen.marking(Markings::Explicit)
            }
        });
        let s2 = gen.term_starting(s1.last().is_bra(), 5, Markings::Explicit);
        let with = |t: &Term| {
            ev.eval(t, &ws, Strategy::Explicit).and_then(|a| {
                ev.eval(&s2, &ws, Strategy::Explicit)
                    .and_then(|b| star(&a, &b))
            })
        };
        agree(
            i,
            format!(
                "({}) * ({}) vs ({}) * ({})",
                render(&s1),
                render(&s2),
                render(&t1),
                render(&s2)
            ),
            &ws,
            &with(&s1),
            &with(&t1),
        )
    })
}

/// `parse(render(t)) == t` for generated terms.
pub fn parser_round_trip(gen: &mut Gen, cases: usize) -> SuiteResult {
    let empty = Workspace::new(1).expect("positive");
    run_suite("parser-round-trip", cases, |i| {
        let term = gen.term(1, 10, Markings::Mixed);
        let text = render(&term);
        match parse_term(&text) {
            Ok(back) if back == term && render(&back) == text => Ok(()),
            other => Err(counterexample(
                i,
                &text,
                &empty,
                format!("{term:?}"),
                format!("{other:?}"),
            )),
        }
    })
}

/// Single characters evaluate to their leaf values.
pub fn leaf_values(gen: &mut Gen, ev: &dyn Evaluator, cases: usize) -> SuiteResult {
    run_suite("leaf-values", cases, |i| {
        let dim = gen.dim();
        let ws = gen.workspace(dim);
        let start = gen.coin();
        let c = gen.chars(1, start, Markings::Explicit).remove(0);
        let expected = leaf_value(&c, &ws, 0);
        let actual = ev.eval(&Term::leaf(c.clone()), &ws, Strategy::Explicit);
        agree(i, &c, &ws, &expected, &actual)
    })
}

/// Runs every suite at `level` with `seed`.
pub fn run_check(level: Level, seed: u64, ev: &dyn Evaluator) -> Report {
    let n = level.cases();
    let mut stream = 0u64;
    let mut next = || {
        stream += 1;
        Gen::with_stream(seed, stream)
    };
    let mut suites = vec![
        inner_product_axioms(&mut next(), n),
        leaf_values(&mut next(), ev, n),
        associativity(&mut next(), ev, n),
        robustness(&mut next(), ev, n, 5),
        kind_soundness(&mut next(), ev, n),
        strategy_agreement(&mut next(), ev, n),
        normal_form_agreement(&mut next(), ev, n, 10),
        oracle_equivalence(&mut next(), ev, n, 6),
        probing_consistency(&mut next(), n, 10),
        compositionality(&mut next(), ev, n),
        outer_product_identity(&mut next(), ev, n),
        star_well_defined(&mut next(), ev, n),
        parser_round_trip(&mut next(), n),
    ];
    if level == Level::Full {
        suites.push(exhaustive_associativity(&mut next(), ev));
    }
    Report { suites }
}
