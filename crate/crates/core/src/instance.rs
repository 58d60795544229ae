use std::fmt;
use std::str::FromStr;

use crate::decoder::{build_code, CodeSpec, Support};
use crate::field::{Field, FieldTower, QuotientElem};
use crate::galois::FactorBase;
use crate::nt::{self, GroupOrderFactorization};
use crate::poly::DensePoly;
use crate::{Error, Result};

/// Where decoding happens: over GF(q) itself or over a helper GF(q^e).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Fq,
    Hf { e: usize },
}

impl Mode {
    pub fn e(&self) -> usize {
        match self {
            Mode::Fq => 1,
            Mode::Hf { e } => *e,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Fq => "fq",
            Mode::Hf { .. } => "hf",
        }
    }

    pub fn from_parts(name: &str, e: Option<usize>) -> Result<Self> {
        match (name, e) {
            ("fq", None | Some(1)) => Ok(Mode::Fq),
            ("fq", Some(e)) => Err(Error::Parse(format!(
                "mode fq takes no helper degree, got e = {e}"
            ))),
            ("hf", Some(e)) if e >= 2 => Ok(Mode::Hf { e }),
            ("hf", _) => Err(Error::Parse("mode hf needs a helper degree e >= 2".into())),
            _ => Err(Error::Parse(format!("unknown mode '{name}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::from_parts(s, None)
    }
}

/// Everything the collector and solver share: the field, the factorization
/// of its group order, the code and the factor base.
#[derive(Clone, Debug)]
pub struct Instance {
    pub tower: FieldTower,
    pub fact: GroupOrderFactorization,
    pub code: CodeSpec,
    pub base: FactorBase,
    pub mode: Mode,
}

impl Instance {
    /// Checks that `X` is primitive and builds the code for `mode`.
    pub fn new(tower: FieldTower, mode: Mode) -> Result<Self> {
        let fact = nt::factor_group_order(tower.q(), tower.h() as u32)?;
        Self::with_factorization(tower, mode, fact)
    }

    pub fn with_factorization(
        tower: FieldTower,
        mode: Mode,
        fact: GroupOrderFactorization,
    ) -> Result<Self> {
        if fact.order != tower.group_order() {
            return Err(Error::InvalidField(format!(
                "factorization of {} supplied for a group of order {}",
                fact.order,
                tower.group_order()
            )));
        }
        if let Some(witness) = tower.x_primitivity_witness(&fact)? {
            return Err(Error::NotPrimitive { witness });
        }
        let code = build_code(&tower, default_support(&tower, mode))?;
        let base = FactorBase::for_code(&code)?;
        let inst = Self {
            tower,
            fact,
            code,
            base,
            mode,
        };
        // Q | G or Q in the base would make relations degenerate
        if inst.g_element().is_zero() {
            return Err(Error::InvalidCode("G vanishes modulo Q".into()));
        }
        if let FactorBase::Orbits(b) = &inst.base {
            if b.by_minpoly(inst.tower.modulus()).is_some() {
                return Err(Error::InvalidCode(
                    "Q is itself a factor-base polynomial".into(),
                ));
            }
        }
        Ok(inst)
    }

    /// `q^h - 1`.
    pub fn order(&self) -> u64 {
        self.fact.order
    }

    /// The element of GF(q^h) a factor-base descriptor stands for.
    pub fn base_element(&self, desc: u64) -> Result<QuotientElem> {
        Ok(self.tower.ring().reduce(&self.base.poly(desc)?))
    }

    pub fn g_element(&self) -> QuotientElem {
        self.tower.ring().reduce(self.code.g_mod_q())
    }

    /// Descriptor whose base polynomial is `X`, if it is in the base. Its
    /// logarithm is 1 because the generator is `X`.
    pub fn x_descriptor(&self) -> Option<u64> {
        self.base.column(0).map(|_| 0)
    }

    /// `Π base(desc) mod Q`.
    pub fn locator_product(&self, roots: &[u64]) -> Result<QuotientElem> {
        let ring = self.tower.ring();
        let mut acc = ring.one();
        for &r in roots {
            acc = ring.mul(&acc, &self.base_element(r)?);
        }
        Ok(acc)
    }
}

/// Full GF(q) for `h >= 2`. When `h = 1` the root of `Q` is removed, since
/// `Q` must not vanish on the support.
pub fn default_support(tower: &FieldTower, mode: Mode) -> Support {
    match mode {
        Mode::Hf { e } if e >= 2 => Support::Field { e },
        _ if tower.h() == 1 => {
            let fp = tower.base();
            let q = tower.modulus();
            Support::Points(
                (0..fp.cardinality())
                    .filter(|&a| q.eval(fp, a) != 0)
                    .collect(),
            )
        }
        _ => Support::Field { e: 1 },
    }
}

/// Parses a polynomial in `X` with integer coefficients, e.g. `X^2+1`,
/// `3*X^5 - X + 4` or `2X`, reducing coefficients modulo `p`.
pub fn parse_poly(s: &str, p: u64) -> Result<DensePoly> {
    let bad = || Error::Parse(format!("cannot parse polynomial '{s}'"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut coeffs: Vec<u64> = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (neg, body) = match rest.as_bytes()[0] {
            b'-' => (true, &rest[1..]),
            b'+' => (false, &rest[1..]),
            _ => (false, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if term.is_empty() {
            return Err(bad());
        }
        let (coef, deg) = match term.find(['X', 'x']) {
            None => (term.parse::<u64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let c = term[..pos].trim_end_matches('*');
                let c = if c.is_empty() {
                    1
                } else {
                    c.parse::<u64>().map_err(|_| bad())?
                };
                let tail = &term[pos + 1..];
                let d = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .ok_or_else(bad)?
                        .parse::<usize>()
                        .map_err(|_| bad())?
                };
                (c, d)
            }
        };
        let c = coef % p;
        let c = if neg { (p - c) % p } else { c };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        coeffs[deg] = (coeffs[deg] + c) % p;
    }
    Ok(DensePoly::new(coeffs))
}
