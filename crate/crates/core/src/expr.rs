//! Constructor expressions for rings, free modules and builtin quantales.
//!
//! ```text
//! spec    := quantale | ring ('^' INT)?
//! quantale:= 'boolean(' INT ')' | 'chain(' INT ')'
//! ring    := factor (('x' | '×') factor)*
//! factor  := 'Z' INT | 'F' INT ('[x]/(x^2)')? | 'M2(' ring ')'
//!          | 'T2(F' INT ')' | '(' ring ')'
//! ```
//!
//! A bare ring denotes the regular module; `R^k` is the free module of
//! rank `k`. An underscore may separate `Z` or `F` from its index.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bounds::Bounds;
use crate::lattice::FiniteLattice;
use crate::module::FiniteModule;
use crate::quantale::{Mode, Quantale, Violation};
use crate::ring::{AlgebraError, FiniteRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at column {}: {message}", .pos + 1)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingExpr {
    Zn(usize),
    Fp(usize),
    /// `F_p[x]/(x^2)`
    DualNumbers(usize),
    Product(Vec<RingExpr>),
    Matrix2(Box<RingExpr>),
    /// Upper triangular 2x2 matrices over `F_p`.
    UpperTriangular2(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantaleExpr {
    /// Subsets of a `k`-set with intersection as product.
    Boolean(u32),
    /// An `n`-chain with meet as product.
    Chain(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Module { ring: RingExpr, rank: usize },
    Quantale(QuantaleExpr),
}

impl RingExpr {
    pub fn build(&self, bounds: &Bounds) -> Result<FiniteRing, AlgebraError> {
        match self {
            RingExpr::Zn(n) => FiniteRing::zn(*n, bounds),
            RingExpr::Fp(p) => FiniteRing::fp(*p, bounds),
            RingExpr::DualNumbers(p) => FiniteRing::dual_numbers(*p, bounds),
            RingExpr::Product(fs) => {
                let rings = fs.iter().map(|f| f.build(bounds)).collect::<Result<Vec<_>, _>>()?;
                FiniteRing::product(&rings, bounds)
            }
            RingExpr::Matrix2(base) => FiniteRing::matrix2(&base.build(bounds)?, bounds),
            RingExpr::UpperTriangular2(p) => FiniteRing::upper_triangular2(*p, bounds),
        }
    }
}

impl QuantaleExpr {
    pub fn build(&self) -> Result<Quantale, Violation> {
        let lattice = match *self {
            QuantaleExpr::Boolean(k) => FiniteLattice::boolean(k),
            QuantaleExpr::Chain(n) => FiniteLattice::chain(n),
        };
        Quantale::with_meet(Arc::new(lattice), Mode::Iq)
    }
}

impl Expr {
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut p = Parser { src: input, pos: 0 };
        p.skip_ws();
        let expr = if p.peek_word("boolean") || p.peek_word("chain") {
            Expr::Quantale(p.quantale()?)
        } else {
            let ring = p.ring()?;
            p.skip_ws();
            let rank = if p.eat("^") { p.int()? } else { 1 };
            if rank == 0 {
                return Err(p.error("module rank must be positive"));
            }
            Expr::Module { ring, rank }
        };
        p.skip_ws();
        if p.pos != input.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(expr)
    }

    /// The module an expression denotes, if it is not a quantale.
    pub fn build_module(&self, bounds: &Bounds) -> Option<Result<FiniteModule, AlgebraError>> {
        match self {
            Expr::Module { ring, rank } => Some(
                ring.build(bounds)
                    .and_then(|r| FiniteModule::free(Arc::new(r), *rank, bounds)),
            ),
            Expr::Quantale(_) => None,
        }
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Zn(n) => write!(f, "Z{n}"),
            RingExpr::Fp(p) => write!(f, "F{p}"),
            RingExpr::DualNumbers(p) => write!(f, "F{p}[x]/(x^2)"),
            RingExpr::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("x")?;
                    }
                    match x {
                        RingExpr::Product(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            RingExpr::Matrix2(base) => write!(f, "M2({base})"),
            RingExpr::UpperTriangular2(p) => write!(f, "T2(F{p})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Module { ring, rank: 1 } => write!(f, "{ring}"),
            Expr::Module { ring, rank } => write!(f, "{ring}^{rank}"),
            Expr::Quantale(QuantaleExpr::Boolean(k)) => write!(f, "boolean({k})"),
            Expr::Quantale(QuantaleExpr::Chain(n)) => write!(f, "chain({n})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn peek_word(&self, word: &str) -> bool {
        self.rest().starts_with(word)
    }

    fn int(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        let value = self.rest()[..digits]
            .parse()
            .map_err(|_| self.error("number too large"))?;
        self.pos += digits;
        Ok(value)
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        self.eat("_");
        self.int()
    }

    fn quantale(&mut self) -> Result<QuantaleExpr, ParseError> {
        if self.eat("boolean") {
            self.expect("(")?;
            let k = self.int()?;
            self.expect(")")?;
            let k = u32::try_from(k)
                .ok()
                .filter(|&k| k <= 8)
                .ok_or_else(|| self.error("boolean(k) needs k <= 8"))?;
            Ok(QuantaleExpr::Boolean(k))
        } else {
            self.expect("chain")?;
            self.expect("(")?;
            let n = self.int()?;
            self.expect(")")?;
            if n == 0 {
                return Err(self.error("chain(n) needs n >= 1"));
            }
            Ok(QuantaleExpr::Chain(n))
        }
    }

    fn ring(&mut self) -> Result<RingExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.eat("x") || self.eat("×") {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            RingExpr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<RingExpr, ParseError> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.ring()?;
            self.expect(")")?;
            Ok(inner)
        } else if self.eat("M2") {
            self.expect("(")?;
            let base = self.ring()?;
            self.expect(")")?;
            Ok(RingExpr::Matrix2(Box::new(base)))
        } else if self.eat("T2") {
            self.expect("(")?;
            self.expect("F")?;
            let p = self.index()?;
            self.expect(")")?;
            Ok(RingExpr::UpperTriangular2(p))
        } else if self.eat("Z") {
            Ok(RingExpr::Zn(self.index()?))
        } else if self.eat("F") {
            let p = self.index()?;
            if self.eat("[x]/(x^2)") || self.eat("[x]/(x²)") {
                Ok(RingExpr::DualNumbers(p))
            } else {
                Ok(RingExpr::Fp(p))
            }
        } else {
            Err(self.error("expected a ring: Zn, Fp, Fp[x]/(x^2), M2(..), T2(Fp) or (..)"))
        }
    }
}
