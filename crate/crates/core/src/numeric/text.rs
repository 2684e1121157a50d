use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;
use thiserror::Error;

use super::{NumericError, QuadExt, QuadField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseQuadError {
    #[error("unexpected input at byte {pos} in {input:?}")]
    Syntax { input: String, pos: usize },
    #[error("empty expression")]
    Empty,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("mixed radicands {0} and {1}")]
    MixedRadicands(u64, u64),
    #[error(transparent)]
    Field(#[from] NumericError),
}

/// Canonical text form `a + b*sqrt(D)` in lowest terms. Zero parts are
/// omitted and a unit coefficient on the root is not printed.
impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.a(), self.b());
        if b.is_zero() {
            return write!(f, "{a}");
        }
        let d = self.radicand();
        let root = |f: &mut fmt::Formatter<'_>, coeff: &BigRational| {
            if coeff.is_one() {
                write!(f, "sqrt({d})")
            } else {
                write!(f, "{coeff}*sqrt({d})")
            }
        };
        if a.is_zero() {
            if b.is_negative() {
                write!(f, "-")?;
            }
            return root(f, &b.abs());
        }
        write!(f, "{a} {} ", if b.is_negative() { "-" } else { "+" })?;
        root(f, &b.abs())
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn error(&self) -> ParseQuadError {
        ParseQuadError::Syntax {
            input: self.src.to_string(),
            pos: self.pos,
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseQuadError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseQuadError> {
        self.skip_ws();
        let digits = self.src[self.pos..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return Err(self.error());
        }
        let n = self.src[self.pos..self.pos + digits]
            .parse()
            .map_err(|_| self.error())?;
        self.pos += digits;
        Ok(n)
    }

    fn rational(&mut self) -> Result<BigRational, ParseQuadError> {
        let num = self.integer()?;
        if self.eat("/") {
            let den = self.integer()?;
            if den.is_zero() {
                return Err(ParseQuadError::ZeroDenominator);
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn sqrt(&mut self) -> Result<u64, ParseQuadError> {
        self.expect("sqrt")?;
        self.expect("(")?;
        let n = self.integer()?;
        self.expect(")")?;
        u64::try_from(n).map_err(|_| self.error())
    }
}

/// Parses `a`, `p/q`, `c*sqrt(D)`, `sqrt(D)` and sums/differences of those.
/// The field is inferred: ℚ unless a root term appears.
impl FromStr for QuadExt {
    type Err = ParseQuadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { src: s, pos: 0 };
        if cur.peek().is_none() {
            return Err(ParseQuadError::Empty);
        }
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        let mut radicand: Option<u64> = None;
        let mut first = true;
        loop {
            let negative = if cur.eat("-") {
                true
            } else {
                let plus = cur.eat("+");
                if !first && !plus {
                    return Err(cur.error());
                }
                false
            };
            let (coeff, root) = match cur.peek() {
                Some('s') => (BigRational::one(), Some(cur.sqrt()?)),
                Some(c) if c.is_ascii_digit() => {
                    let q = cur.rational()?;
                    if cur.eat("*") {
                        (q, Some(cur.sqrt()?))
                    } else {
                        (q, None)
                    }
                }
                _ => return Err(cur.error()),
            };
            let coeff = if negative { -coeff } else { coeff };
            match root {
                None => a += coeff,
                Some(n) => {
                    let term = QuadExt::from_parts(BigRational::zero(), coeff, n)?;
                    if term.field().is_rational() {
                        a += term.a();
                    } else {
                        match radicand {
                            Some(r) if r != term.radicand() => {
                                return Err(ParseQuadError::MixedRadicands(r, term.radicand()))
                            }
                            _ => radicand = Some(term.radicand()),
                        }
                        b += term.b();
                    }
                }
            }
            first = false;
            if cur.peek().is_none() {
                break;
            }
        }
        match radicand {
            Some(d) => Ok(QuadExt::from_parts(a, b, d)?),
            None => Ok(QuadField::RATIONAL.rational(a)),
        }
    }
}

impl QuadExt {
    /// Parses and lifts into `field`.
    pub fn parse_in(field: QuadField, s: &str) -> Result<QuadExt, ParseQuadError> {
        Ok(s.parse::<QuadExt>()?.lift_into(field)?)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonRepr {
    a: (Number, Number),
    b: (Number, Number),
    #[serde(rename = "D")]
    d: u64,
}

fn to_number(n: &BigInt) -> Number {
    n.to_string()
        .parse()
        .expect("integer literal is a valid JSON number")
}

fn to_pair(q: &BigRational) -> (Number, Number) {
    (to_number(q.numer()), to_number(q.denom()))
}

fn from_pair<E: de::Error>(pair: &(Number, Number)) -> Result<BigRational, E> {
    let parse = |n: &Number| n.to_string().parse::<BigInt>().map_err(E::custom);
    let (num, den) = (parse(&pair.0)?, parse(&pair.1)?);
    if den.is_zero() {
        return Err(E::custom("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// JSON form `{"a":[num,den],"b":[num,den],"D":int}`; integers of any size.
impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        JsonRepr {
            a: to_pair(self.a()),
            b: to_pair(self.b()),
            d: self.radicand(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = JsonRepr::deserialize(deserializer)?;
        let a = from_pair::<D::Error>(&repr.a)?;
        let b = from_pair::<D::Error>(&repr.b)?;
        QuadExt::from_parts(a, b, repr.d).map_err(de::Error::custom)
    }
}
