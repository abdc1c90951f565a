//! Polynomials in two free variables `S`, `S*` and their evaluation on
//! truncated shifts.
//!
//! Words are arbitrary non-commutative products over the alphabet
//! `{S, S*}`; the empty word is the identity. Evaluation substitutes the
//! truncation matrix for `S` and its conjugate transpose for `S*`, exploits
//! the bidiagonal structure (O(N) per letter application), and sums terms
//! with their coefficients. Norms of the evaluated operators genuinely
//! depend on word order, which is why words are kept free rather than
//! reduced to `x^i y^j` monomials.

use num_complex::Complex64;

use crate::norm::{ComplexMatrix, LinOp};
use crate::shift::TruncatedShift;
use crate::{Error, Result};

/// One letter of a word: the shift or its adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    S,
    Star,
}

/// A finite linear combination of words over `{S, S*}`.
///
/// A word is stored left-to-right as written, so `[S, Star]` denotes the
/// operator `S S*` (the adjoint acts first on a vector).
#[derive(Clone, Debug, PartialEq)]
pub struct FreePolynomial {
    pub terms: Vec<(Vec<Letter>, Complex64)>,
}

impl FreePolynomial {
    pub fn new(terms: Vec<(Vec<Letter>, Complex64)>) -> Self {
        FreePolynomial { terms }
    }

    /// Maximum word length.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(w, _)| w.len()).max().unwrap_or(0)
    }

    /// Formal adjoint: words reversed with letters starred, coefficients
    /// conjugated, so that `eval(p.adjoint()) = eval(p)*`.
    pub fn adjoint(&self) -> FreePolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(word, coeff)| {
                let mut w: Vec<Letter> = word
                    .iter()
                    .rev()
                    .map(|l| match l {
                        Letter::S => Letter::Star,
                        Letter::Star => Letter::S,
                    })
                    .collect();
                w.shrink_to_fit();
                (w, coeff.conj())
            })
            .collect();
        FreePolynomial { terms }
    }

    /// Whether every word has the hereditary shape `S^i (S*)^j` (all plain
    /// letters before all starred ones).
    pub fn is_hereditary(&self) -> bool {
        self.terms.iter().all(|(word, _)| {
            let mut seen_star = false;
            for l in word {
                match l {
                    Letter::Star => seen_star = true,
                    Letter::S => {
                        if seen_star {
                            return false;
                        }
                    }
                }
            }
            true
        })
    }

    /// Whether every word uses only plain `S` letters (an analytic
    /// polynomial in the shift).
    pub fn is_analytic(&self) -> bool {
        self.terms
            .iter()
            .all(|(word, _)| word.iter().all(|l| *l == Letter::S))
    }

    /// The analytic word `S^k`.
    pub fn monomial(k: usize, coeff: f64) -> FreePolynomial {
        FreePolynomial::new(vec![(vec![Letter::S; k], Complex64::new(coeff, 0.0))])
    }

    /// Evaluate an analytic polynomial at a complex point.
    pub fn eval_scalar(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (word, coeff) in &self.terms {
            let mut m = Complex64::new(1.0, 0.0);
            for l in word {
                match l {
                    Letter::S => m *= z,
                    Letter::Star => m *= z.conj(),
                }
            }
            acc += coeff * m;
        }
        acc
    }

    /// Parse the term grammar: terms joined by `+`/`-`, each an optional
    /// coefficient, an optional `*` separator, and a word over `S` and `S*`;
    /// whitespace ignored. Examples: `SS*-S*S`, `1.5*SS*S - 2*S*`, `1`.
    pub fn parse(text: &str) -> Result<FreePolynomial> {
        let src: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::parse("empty free-polynomial expression"));
        }
        let mut terms = Vec::new();
        let mut i = 0usize;
        let mut sign = 1.0f64;
        // Leading sign.
        if src[0] == '+' || src[0] == '-' {
            sign = if src[0] == '-' { -1.0 } else { 1.0 };
            i = 1;
        }
        while i < src.len() {
            // Optional numeric coefficient.
            let start = i;
            while i < src.len() && (src[i].is_ascii_digit() || src[i] == '.' || src[i] == 'e' || src[i] == 'E') {
                // Allow exponent signs like 1e-3 only right after e/E.
                if (src[i] == 'e' || src[i] == 'E')
                    && i + 1 < src.len()
                    && (src[i + 1] == '+' || src[i + 1] == '-')
                    && i + 2 < src.len()
                    && src[i + 2].is_ascii_digit()
                {
                    i += 2;
                }
                i += 1;
            }
            let mut coeff = if start == i {
                1.0
            } else {
                let lit: String = src[start..i].iter().collect();
                lit.parse::<f64>()
                    .map_err(|_| Error::parse(format!("bad coefficient '{lit}'")))?
            };
            coeff *= sign;
            // Optional '*' separator between coefficient and word.
            if start != i && i < src.len() && src[i] == '*' && i + 1 < src.len() && src[i + 1] == 'S' {
                i += 1;
            }
            // Word letters.
            let mut word = Vec::new();
            while i < src.len() && src[i] == 'S' {
                if i + 1 < src.len() && src[i + 1] == '*' {
                    word.push(Letter::Star);
                    i += 2;
                } else {
                    word.push(Letter::S);
                    i += 1;
                }
            }
            if start == i && word.is_empty() {
                return Err(Error::parse(format!(
                    "unexpected character '{}' at position {i} in free polynomial",
                    src[i]
                )));
            }
            terms.push((word, Complex64::new(coeff, 0.0)));
            // Next sign or end.
            if i == src.len() {
                break;
            }
            match src[i] {
                '+' => sign = 1.0,
                '-' => sign = -1.0,
                c => {
                    return Err(Error::parse(format!(
                        "expected '+' or '-' between terms, got '{c}'"
                    )))
                }
            }
            i += 1;
            if i == src.len() {
                return Err(Error::parse("dangling sign at end of expression"));
            }
        }
        Ok(FreePolynomial { terms })
    }
}

impl std::fmt::Display for FreePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, (word, coeff)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)*", coeff.re, coeff.im)?;
            if word.is_empty() {
                write!(f, "1")?;
            }
            for l in word {
                match l {
                    Letter::S => write!(f, "S")?,
                    Letter::Star => write!(f, "S*")?,
                }
            }
        }
        Ok(())
    }
}

/// Apply one word to a vector: letters act right-to-left.
fn apply_word(shift: &TruncatedShift, word: &[Letter], x: &[Complex64], scratch: &mut [Complex64], out: &mut [Complex64]) {
    out.copy_from_slice(x);
    for l in word.iter().rev() {
        match l {
            Letter::S => shift.apply(out, scratch),
            Letter::Star => shift.apply_adjoint(out, scratch),
        }
        out.copy_from_slice(scratch);
    }
}

/// Evaluate `p(S, S*)` on the truncation as a dense `N x N` matrix.
///
/// Column `j` is the word-by-word image of the basis vector `e_j`; each
/// letter application is O(N), so the whole evaluation is
/// O(N^2 · total word length).
pub fn eval_free_poly(shift: &TruncatedShift, p: &FreePolynomial) -> ComplexMatrix {
    let n = shift.dim();
    let mut out = ComplexMatrix::zeros(n);
    let mut basis = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let mut image = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        basis.fill(Complex64::new(0.0, 0.0));
        basis[j] = Complex64::new(1.0, 0.0);
        let col = out.column_mut(j);
        for (word, coeff) in &p.terms {
            apply_word(shift, word, &basis, &mut scratch, &mut image);
            for (slot, v) in col.iter_mut().zip(&image) {
                *slot += coeff * v;
            }
        }
    }
    out
}

/// `p(S, S*)` as a matrix-free operator; used at truncation sizes where a
/// dense matrix no longer fits.
pub struct FreePolyOp<'a> {
    shift: &'a TruncatedShift,
    poly: &'a FreePolynomial,
    adjoint: FreePolynomial,
}

impl<'a> FreePolyOp<'a> {
    pub fn new(shift: &'a TruncatedShift, poly: &'a FreePolynomial) -> Self {
        FreePolyOp {
            shift,
            poly,
            adjoint: poly.adjoint(),
        }
    }

    fn apply_poly(&self, p: &FreePolynomial, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.shift.dim();
        let mut scratch = vec![Complex64::new(0.0, 0.0); n];
        let mut image = vec![Complex64::new(0.0, 0.0); n];
        y.fill(Complex64::new(0.0, 0.0));
        for (word, coeff) in &p.terms {
            apply_word(self.shift, word, x, &mut scratch, &mut image);
            for (slot, v) in y.iter_mut().zip(&image) {
                *slot += coeff * v;
            }
        }
    }
}

impl LinOp for FreePolyOp<'_> {
    fn dim(&self) -> usize {
        self.shift.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.apply_poly(self.poly, x, y);
    }

    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.apply_poly(&self.adjoint, x, y);
    }
}

/// Norm of `p(S, S*)` on the truncation without materializing the matrix.
pub fn free_poly_norm(shift: &TruncatedShift, p: &FreePolynomial, tol: f64) -> Result<f64> {
    let op = FreePolyOp::new(shift, p);
    crate::norm::operator_norm_op(&op, tol)
}
