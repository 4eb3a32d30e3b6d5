//! Text notation for addresses and itineraries.
//!
//! ```text
//! ADDRESS   := INT (SEP INT)* SEP? '(' INT (SEP INT)* ')' | '(' INT (SEP INT)* ')'
//! ITINERARY := ADDRESS | (INT (SEP INT)* SEP?)? '*'
//! SEP       := ',' | whitespace
//! ```

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::itinerary::Itinerary;
use crate::sequences::{EventuallyPeriodic, ExtAddress};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) -> bool {
        let rest = &self.text[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        rest.len() != trimmed.len()
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn at_int(&self) -> bool {
        let mut chars = self.text[self.pos..].chars();
        match chars.next() {
            Some(c) if c.is_ascii_digit() => true,
            Some('-' | '+') => chars.next().is_some_and(|c| c.is_ascii_digit()),
            _ => false,
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if !self.at_int() {
            return Err(self.error("expected an integer"));
        }
        self.pos += 1;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let literal = &self.text[start..self.pos];
        let value: i128 = literal.parse().map_err(|_| Error::Parse {
            offset: start,
            message: format!("integer {literal} is too large"),
        })?;
        i64::try_from(value).map_err(|_| Error::EntryOutOfRange(value))
    }

    /// Integers separated by `SEP`, stopping before `'('`, `')'` or `'*'`.
    /// Returns the list and whether a trailing separator was consumed.
    fn int_list(&mut self) -> Result<(Vec<i64>, bool)> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if !self.at_int() {
                return Ok((out, false));
            }
            out.push(self.int()?);
            let spaced = self.skip_ws();
            let comma = self.eat(',');
            if !(spaced || comma) {
                return Ok((out, false));
            }
            self.skip_ws();
            if !self.at_int() {
                return Ok((out, comma));
            }
        }
    }

    fn period(&mut self) -> Result<Vec<i64>> {
        if !self.eat('(') {
            return Err(self.error("expected '('"));
        }
        let (period, trailing) = self.int_list()?;
        if period.is_empty() {
            return Err(self.error("empty period"));
        }
        if trailing {
            return Err(self.error("separator before ')'"));
        }
        self.skip_ws();
        if !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        Ok(period)
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.text.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }
}

enum Parsed {
    Sequence(Vec<i64>, Vec<i64>),
    PreSingular(Vec<i64>),
}

fn parse(text: &str, allow_star: bool) -> Result<Parsed> {
    let mut cur = Cursor::new(text);
    let (prefix, _) = cur.int_list()?;
    cur.skip_ws();
    let parsed = match cur.peek() {
        Some('(') => Parsed::Sequence(prefix, cur.period()?),
        Some('*') if allow_star => {
            cur.eat('*');
            Parsed::PreSingular(prefix)
        }
        Some(')') => return Err(cur.error("unbalanced ')'")),
        None => return Err(cur.error("expected '(' before end of input")),
        _ => return Err(cur.error("unexpected character")),
    };
    cur.finish()?;
    Ok(parsed)
}

pub fn parse_address(text: &str) -> Result<ExtAddress> {
    match parse(text, false)? {
        Parsed::Sequence(pre, per) => ExtAddress::new(pre, per),
        Parsed::PreSingular(_) => unreachable!("'*' is rejected for addresses"),
    }
}

pub fn parse_itinerary(text: &str) -> Result<Itinerary> {
    match parse(text, true)? {
        Parsed::Sequence(pre, per) => Ok(Itinerary::Plain(EventuallyPeriodic::new(pre, per)?)),
        Parsed::PreSingular(prefix) => Ok(Itinerary::PreSingular(prefix)),
    }
}

impl FromStr for ExtAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_address(s)
    }
}

impl FromStr for Itinerary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_itinerary(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(pre: &[i64], per: &[i64]) -> ExtAddress {
        ExtAddress::new(pre.to_vec(), per.to_vec()).unwrap()
    }

    fn offset(e: Error) -> usize {
        match e {
            Error::Parse { offset, .. } => offset,
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn addresses() {
        assert_eq!(parse_address("0(1)").unwrap(), addr(&[0], &[1]));
        assert_eq!(parse_address("0 (0 1)").unwrap(), addr(&[0], &[0, 1]));
        assert_eq!(parse_address("-2,0(1)").unwrap(), addr(&[-2, 0], &[1]));
        assert_eq!(parse_address("(1,2)").unwrap(), addr(&[], &[1, 2]));
        assert_eq!(parse_address("  0, 1 , ( -3 , 4 )  ").unwrap(), addr(&[0, 1], &[-3, 4]));
        assert_eq!(parse_address("0,(1)").unwrap(), addr(&[0], &[1]));
        assert_eq!(parse_address("+1(2)").unwrap(), addr(&[1], &[2]));
    }

    #[test]
    fn address_errors() {
        assert_eq!(offset(parse_address("(1").unwrap_err()), 2);
        assert_eq!(offset(parse_address("0(1))").unwrap_err()), 4);
        assert_eq!(offset(parse_address("0").unwrap_err()), 1);
        assert_eq!(offset(parse_address("()").unwrap_err()), 1);
        assert_eq!(offset(parse_address("0,,(1)").unwrap_err()), 2);
        assert_eq!(offset(parse_address("0(1,)").unwrap_err()), 4);
        assert_eq!(offset(parse_address("0(1)2").unwrap_err()), 4);
        assert_eq!(offset(parse_address("*").unwrap_err()), 0);
        assert_eq!(offset(parse_address("0 x(1)").unwrap_err()), 2);
        assert!(matches!(parse_address("(99999999999999999999)"), Err(Error::EntryOutOfRange(_))));
        assert!(matches!(parse_address("(3000000000000000000)"), Err(Error::EntryOutOfRange(_))));
    }

    #[test]
    fn itineraries() {
        assert_eq!(parse_itinerary("*").unwrap(), Itinerary::star());
        assert_eq!(parse_itinerary("2, *").unwrap(), Itinerary::PreSingular(vec![2]));
        assert_eq!(parse_itinerary("1 -2 *").unwrap(), Itinerary::PreSingular(vec![1, -2]));
        assert_eq!(
            parse_itinerary("0(0,1)").unwrap(),
            Itinerary::Plain(EventuallyPeriodic::new(vec![0], vec![0, 1]).unwrap())
        );
        assert!(parse_itinerary("*,1").is_err());
        assert!(parse_itinerary("**").is_err());
    }

    #[test]
    fn display_round_trip() {
        for text in ["0(1)", "(0,1)", "-2,0(1)", "3,-1(2,0,5)"] {
            let a: ExtAddress = text.parse().unwrap();
            assert_eq!(a.to_string(), text);
        }
        for text in ["*", "2,*", "0,-1,*", "1(0)"] {
            let t: Itinerary = text.parse().unwrap();
            assert_eq!(t.to_string(), text);
        }
    }
}
