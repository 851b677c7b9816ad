//! Text names for test functions.
//!
//! ```text
//! mono:<k>                      x^(k alpha)
//! poly:<c0>,<c1>,...            sum_j c_j x^(j alpha)
//! series:(<k>,<c>);(<k>,<c>)    sum c x^(k alpha)
//! ml:<terms>                    Mittag-Leffler E_alpha(x^alpha) truncated to <terms> terms
//! ```
//!
//! The parsed form does not depend on `alpha`; it becomes an [`AlphaSeries`]
//! once a context is supplied.

use std::fmt;
use std::str::FromStr;

use crate::alpha_num::{gamma, AlphaContext};
use crate::error::{Error, Result};
use crate::fracpoly::AlphaSeries;

#[derive(Debug, Clone, PartialEq)]
pub enum SpecForm {
    Mono(f64),
    Poly(Vec<f64>),
    Series(Vec<(f64, f64)>),
    MittagLeffler(usize),
}

/// A parsed function name. Equality compares the parsed form, not the text.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    source: String,
    form: SpecForm,
}

impl PartialEq for FunctionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form
    }
}

impl FunctionSpec {
    pub fn from_form(form: SpecForm) -> Self {
        let source = format_form(&form);
        FunctionSpec { source, form }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn form(&self) -> &SpecForm {
        &self.form
    }

    /// `(grade, coefficient)` pairs for the given `alpha`.
    pub fn terms(&self, ctx: &AlphaContext) -> Result<Vec<(f64, f64)>> {
        Ok(match &self.form {
            SpecForm::Mono(k) => vec![(*k, 1.0)],
            SpecForm::Poly(cs) => cs.iter().enumerate().map(|(j, &c)| (j as f64, c)).collect(),
            SpecForm::Series(terms) => terms.clone(),
            SpecForm::MittagLeffler(n) => (0..*n)
                .map(|k| Ok((k as f64, 1.0 / gamma(1.0 + k as f64 * ctx.alpha())?)))
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_series(&self, ctx: &AlphaContext) -> Result<AlphaSeries> {
        AlphaSeries::from_terms(self.terms(ctx)?, *ctx)
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_form(&self.form))
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_function_spec(s)
    }
}

fn format_form(form: &SpecForm) -> String {
    match form {
        SpecForm::Mono(k) => format!("mono:{k}"),
        SpecForm::Poly(cs) => {
            let cs: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            format!("poly:{}", cs.join(","))
        }
        SpecForm::Series(terms) => {
            let ts: Vec<String> = terms.iter().map(|(k, c)| format!("({k},{c})")).collect();
            format!("series:{}", ts.join(";"))
        }
        SpecForm::MittagLeffler(n) => format!("ml:{n}"),
    }
}

pub fn parse_function_spec(text: &str) -> Result<FunctionSpec> {
    let mut p = Parser { text, pos: 0 };
    let form = p.spec()?;
    Ok(FunctionSpec {
        source: text.to_string(),
        form,
    })
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn error(&self, expected: impl Into<String>) -> Error {
        let found = match self.rest().chars().next() {
            Some(_) => self.rest().chars().take(12).collect(),
            None => "end of input".to_string(),
        };
        Error::Parse {
            position: self.pos,
            expected: expected.into(),
            found,
        }
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

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("'{token}'")))
        }
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn spec(&mut self) -> Result<SpecForm> {
        self.skip_ws();
        if self.rest().is_empty() {
            return Err(self.error("one of 'mono:', 'poly:', 'series:', 'ml:'"));
        }
        let form = if self.eat("mono:") {
            SpecForm::Mono(self.grade()?)
        } else if self.eat("poly:") {
            let mut cs = vec![self.coefficient()?];
            while self.eat(",") {
                cs.push(self.coefficient()?);
            }
            SpecForm::Poly(cs)
        } else if self.eat("series:") {
            let mut terms = vec![self.term()?];
            while self.eat(";") {
                terms.push(self.term()?);
            }
            SpecForm::Series(terms)
        } else if self.eat("ml:") {
            SpecForm::MittagLeffler(self.count()?)
        } else {
            return Err(self.error("one of 'mono:', 'poly:', 'series:', 'ml:'"));
        };
        self.end()?;
        Ok(form)
    }

    fn term(&mut self) -> Result<(f64, f64)> {
        self.expect("(")?;
        let k = self.grade()?;
        self.expect(",")?;
        let c = self.coefficient()?;
        self.expect(")")?;
        Ok((k, c))
    }

    fn number(&mut self) -> Result<(usize, f64)> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .char_indices()
            .take_while(|&(i, ch)| {
                ch.is_ascii_digit() || ch == '.' || ((ch == '+' || ch == '-') && (i == 0 || self.exponent_sign(i)))
                    || ch == 'e'
                    || ch == 'E'
            })
            .map(|(i, ch)| i + ch.len_utf8())
            .last()
            .unwrap_or(0);
        let token = &self.rest()[..len];
        match token.parse::<f64>() {
            Ok(v) => {
                self.pos += len;
                Ok((start, v))
            }
            Err(_) => Err(self.error("a number")),
        }
    }

    fn exponent_sign(&self, i: usize) -> bool {
        matches!(self.rest().as_bytes().get(i - 1), Some(b'e' | b'E'))
    }

    fn coefficient(&mut self) -> Result<f64> {
        let (start, v) = self.number()?;
        if !v.is_finite() {
            return Err(Error::Parse {
                position: start,
                expected: "a finite coefficient".into(),
                found: v.to_string(),
            });
        }
        Ok(v)
    }

    fn grade(&mut self) -> Result<f64> {
        let (start, v) = self.number()?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Parse {
                position: start,
                expected: "a finite nonnegative grade".into(),
                found: v.to_string(),
            });
        }
        Ok(v)
    }

    fn count(&mut self) -> Result<usize> {
        self.skip_ws();
        let len = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
        match self.rest()[..len].parse::<usize>() {
            Ok(n) if n >= 1 => {
                self.pos += len;
                Ok(n)
            }
            _ => Err(self.error("a positive term count")),
        }
    }
}
