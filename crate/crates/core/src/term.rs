//! Dirac characters and parenthesized Dirac terms.
//!
//! A [`Term`] is a binary concatenation tree whose left-to-right character
//! sequence alternates between kets and bras. The only way to build one is
//! through [`Term::leaf`] and [`Term::concat`], so every `Term` value is
//! alternating.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::workspace::Label;

/// Enumeration cap for [`all_parenthesizations`].
pub const DEFAULT_PARENTHESIZATION_CAP: usize = 8;

/// How a ket occurrence is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Marking {
    /// The vector itself.
    VectorKet,
    /// The map `a -> a * v` from scalars to vectors.
    FunctionKet,
    /// Not yet decided; a resolution strategy picks one.
    Default,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DiracChar {
    Bra(Label),
    Ket(Label, Marking),
}

impl DiracChar {
    pub fn bra(label: Label) -> Self {
        DiracChar::Bra(label)
    }

    pub fn ket(label: Label, marking: Marking) -> Self {
        DiracChar::Ket(label, marking)
    }

    pub fn is_ket(&self) -> bool {
        matches!(self, DiracChar::Ket(..))
    }

    pub fn is_bra(&self) -> bool {
        matches!(self, DiracChar::Bra(_))
    }

    pub fn label(&self) -> &Label {
        match self {
            DiracChar::Bra(l) | DiracChar::Ket(l, _) => l,
        }
    }

    pub fn marking(&self) -> Option<Marking> {
        match self {
            DiracChar::Bra(_) => None,
            DiracChar::Ket(_, m) => Some(*m),
        }
    }

    /// Whether `self` may be immediately followed by `next`.
    pub fn alternates_with(&self, next: &DiracChar) -> bool {
        self.is_ket() != next.is_ket()
    }
}

impl fmt::Display for DiracChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiracChar::Bra(l) => write!(f, "<{l}|"),
            DiracChar::Ket(l, Marking::Default) => write!(f, "|{l}>"),
            DiracChar::Ket(l, Marking::VectorKet) => write!(f, "|{l}:v>"),
            DiracChar::Ket(l, Marking::FunctionKet) => write!(f, "|{l}:f>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Leaf(DiracChar),
    Concat(Box<Term>, Box<Term>),
}

/// A nonempty alternating concatenation tree of Dirac characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    node: Node,
    len: usize,
}

/// Borrowed view of a term's top node.
#[derive(Debug, Clone, Copy)]
pub enum TermView<'a> {
    Leaf(&'a DiracChar),
    Concat(&'a Term, &'a Term),
}

impl Term {
    pub fn leaf(c: DiracChar) -> Term {
        Term {
            node: Node::Leaf(c),
            len: 1,
        }
    }

    pub fn concat(left: Term, right: Term) -> Result<Term> {
        let (l, r) = (left.last(), right.first());
        if !l.alternates_with(r) {
            return Err(Error::AlternationViolation {
                left: l.clone(),
                right: r.clone(),
            });
        }
        let len = left.len + right.len;
        Ok(Term {
            node: Node::Concat(Box::new(left), Box::new(right)),
            len,
        })
    }

    pub fn view(&self) -> TermView<'_> {
        match &self.node {
            Node::Leaf(c) => TermView::Leaf(c),
            Node::Concat(l, r) => TermView::Concat(l, r),
        }
    }

    /// Number of characters.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &DiracChar {
        let mut t = self;
        loop {
            match &t.node {
                Node::Leaf(c) => return c,
                Node::Concat(l, _) => t = l,
            }
        }
    }

    pub fn last(&self) -> &DiracChar {
        let mut t = self;
        loop {
            match &t.node {
                Node::Leaf(c) => return c,
                Node::Concat(_, r) => t = r,
            }
        }
    }

    /// Left-to-right character sequence.
    pub fn characters(&self) -> Vec<DiracChar> {
        let mut out = Vec::with_capacity(self.len);
        self.visit(&mut |c| out.push(c.clone()));
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a DiracChar)) {
        match &self.node {
            Node::Leaf(c) => f(c),
            Node::Concat(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    /// Replaces the marking of the ket at `position`, keeping the tree shape.
    pub fn remark(&self, position: usize, marking: Marking) -> Result<Term> {
        if position >= self.len {
            return Err(Error::OutOfRange {
                position,
                len: self.len,
            });
        }
        let mut out = self.clone();
        out.remark_in_place(position, marking)?;
        Ok(out)
    }

    fn remark_in_place(&mut self, position: usize, marking: Marking) -> Result<()> {
        match &mut self.node {
            Node::Leaf(DiracChar::Ket(_, m)) => {
                *m = marking;
                Ok(())
            }
            Node::Leaf(DiracChar::Bra(_)) => Err(Error::NotAKet { position }),
            Node::Concat(l, r) => {
                if position < l.len {
                    l.remark_in_place(position, marking)
                } else {
                    r.remark_in_place(position - l.len, marking)
                        .map_err(|_| Error::NotAKet { position })
                }
            }
        }
    }

    /// Rebuilds the term with every ket marking replaced by `f(position, marking)`.
    pub fn map_markings(&self, mut f: impl FnMut(usize, Marking) -> Marking) -> Term {
        fn go(t: &Term, offset: usize, f: &mut impl FnMut(usize, Marking) -> Marking) -> Term {
            match &t.node {
                Node::Leaf(DiracChar::Ket(l, m)) => {
                    Term::leaf(DiracChar::Ket(l.clone(), f(offset, *m)))
                }
                Node::Leaf(c) => Term::leaf(c.clone()),
                Node::Concat(l, r) => Term {
                    node: Node::Concat(
                        Box::new(go(l, offset, f)),
                        Box::new(go(r, offset + l.len, f)),
                    ),
                    len: t.len,
                },
            }
        }
        go(self, 0, &mut f)
    }

    /// Left-associated term over `chars`.
    pub fn from_characters(chars: &[DiracChar]) -> Result<Term> {
        let (head, rest) = chars.split_first().ok_or(Error::EmptySequence)?;
        rest.iter().try_fold(Term::leaf(head.clone()), |acc, c| {
            Term::concat(acc, Term::leaf(c.clone()))
        })
    }
}

fn check_alternation(chars: &[DiracChar]) -> Result<()> {
    for pair in chars.windows(2) {
        if !pair[0].alternates_with(&pair[1]) {
            return Err(Error::AlternationViolation {
                left: pair[0].clone(),
                right: pair[1].clone(),
            });
        }
    }
    Ok(())
}

/// Every binary concatenation tree over `chars`, `Catalan(n - 1)` of them.
pub fn all_parenthesizations(chars: &[DiracChar], cap: usize) -> Result<Vec<Term>> {
    if chars.is_empty() {
        return Err(Error::EmptySequence);
    }
    if chars.len() > cap {
        return Err(Error::CapExceeded {
            len: chars.len(),
            cap,
        });
    }
    check_alternation(chars)?;
    Ok(trees(chars))
}

fn trees(chars: &[DiracChar]) -> Vec<Term> {
    if chars.len() == 1 {
        return alloc::vec![Term::leaf(chars[0].clone())];
    }
    let mut out = Vec::new();
    for split in 1..chars.len() {
        let lefts = trees(&chars[..split]);
        let rights = trees(&chars[split..]);
        for l in &lefts {
            for r in &rights {
                let len = l.len + r.len;
                out.push(Term {
                    node: Node::Concat(Box::new(l.clone()), Box::new(r.clone())),
                    len,
                });
            }
        }
    }
    out
}
