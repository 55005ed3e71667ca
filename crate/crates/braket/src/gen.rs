//! Seeded random workspaces and terms for the property suites.

use braket_core::{DiracChar, Label, Marking, Scalar, Term, Vector, Workspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Labels bound in every generated workspace.
pub const LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// How generated kets are marked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Markings {
    /// Every ket `Default`.
    Unmarked,
    /// Every ket vector or function.
    Explicit,
    /// Any of the three.
    Mixed,
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `stream` under the same seed.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Gen { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn in_range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    /// Real and imaginary parts uniform in `[-1, 1]`.
    pub fn scalar(&mut self) -> Scalar {
        Scalar::new(
            self.rng.gen_range(-1.0..=1.0),
            self.rng.gen_range(-1.0..=1.0),
        )
    }

    pub fn vector(&mut self, dim: usize) -> Vector {
        Vector::new((0..dim).map(|_| self.scalar()).collect()).expect("finite")
    }

    pub fn dim(&mut self) -> usize {
        self.in_range(1, 4)
    }

    /// Workspace of dimension `dim` binding every name in [`LABELS`].
    pub fn workspace(&mut self, dim: usize) -> Workspace {
        let mut ws = Workspace::new(dim).expect("positive dimension");
        for name in LABELS {
            let v = self.vector(dim);
            ws.bind_in_place(Label::new(name).expect("valid"), v)
                .expect("matching dimension");
        }
        ws
    }

    pub fn label(&mut self) -> Label {
        Label::new(LABELS[self.below(LABELS.len())]).expect("valid")
    }

    pub fn marking(&mut self, mode: Markings) -> Marking {
        match mode {
            Markings::Unmarked => Marking::Default,
            Markings::Explicit => {
                if self.coin() {
                    Marking::VectorKet
                } else {
                    Marking::FunctionKet
                }
            }
            Markings::Mixed => {
                [Marking::Default, Marking::VectorKet, Marking::FunctionKet][self.below(3)]
            }
        }
    }

    /// Alternating sequence of `len` characters.
    pub fn chars(&mut self, len: usize, start_with_ket: bool, mode: Markings) -> Vec<DiracChar> {
        (0..len)
            .map(|i| {
                let label = self.label();
                if (i % 2 == 0) == start_with_ket {
                    DiracChar::ket(label, self.marking(mode))
                } else {
                    DiracChar::bra(label)
                }
            })
            .collect()
    }

    /// Uniformly random split points, recursively.
    pub fn tree(&mut self, chars: &[DiracChar]) -> Term {
        if chars.len() == 1 {
            return Term::leaf(chars[0].clone());
        }
        let k = self.in_range(1, chars.len() - 1);
        let left = self.tree(&chars[..k]);
        let right = self.tree(&chars[k..]);
        Term::concat(left, right).expect("alternating input")
    }

    pub fn term(&mut self, min_len: usize, max_len: usize, mode: Markings) -> Term {
        let len = self.in_range(min_len, max_len);
        let start = self.coin();
        let chars = self.chars(len, start, mode);
        self.tree(&chars)
    }

    /// Random term of length `1..=max_len` whose first character is a ket iff `ket`.
    pub fn term_starting(&mut self, ket: bool, max_len: usize, mode: Markings) -> Term {
        let len = self.in_range(1, max_len);
        let chars = self.chars(len, ket, mode);
        self.tree(&chars)
    }

    /// Replaces every `Default` marking with a random explicit one.
    pub fn fill_markings(&mut self, term: &Term) -> Term {
        term.map_markings(|_, m| match m {
            Marking::Default => self.marking(Markings::Explicit),
            m => m,
        })
    }
}
