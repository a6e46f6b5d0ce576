//! Arithmetic function identifiers: the five built-ins plus user tables.
//!
//! Built-ins map positive integers to nonnegative 64-bit integers, so value
//! equality is exact. `phi`, `sigma`, `tau` are multiplicative; `omega`
//! (distinct prime factors) is additive; `big_omega` (prime factors with
//! multiplicity) is completely additive.

use std::fmt;
use std::io::BufRead;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    /// Euler totient φ(n).
    Phi,
    /// Divisor sum σ(n).
    Sigma,
    /// Divisor count τ(n).
    Tau,
    /// Distinct prime factors ω(n).
    Omega,
    /// Prime factors with multiplicity Ω(n).
    BigOmega,
    /// User-supplied value table covering 1..=len contiguously.
    Custom(Arc<CustomTable>),
}

pub const BUILTIN_NAMES: [&str; 5] = ["phi", "sigma", "tau", "omega", "big_omega"];

impl Func {
    pub fn name(&self) -> &str {
        match self {
            Func::Phi => "phi",
            Func::Sigma => "sigma",
            Func::Tau => "tau",
            Func::Omega => "omega",
            Func::BigOmega => "big_omega",
            Func::Custom(t) => t.name(),
        }
    }

    /// Parse a built-in tag. `None` for anything else (the CLI falls back
    /// to treating the argument as a table path).
    pub fn parse_builtin(s: &str) -> Option<Func> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "phi" | "totient" => Some(Func::Phi),
            "sigma" => Some(Func::Sigma),
            "tau" => Some(Func::Tau),
            "omega" | "omega_distinct" => Some(Func::Omega),
            "big_omega" | "bigomega" | "omega_mult" => Some(Func::BigOmega),
            _ => None,
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, Func::Custom(_))
    }

    /// Smallest n with f(n) != 0: the additive built-ins vanish at 1.
    pub fn min_nonzero_arg(&self) -> u64 {
        match self {
            Func::Omega | Func::BigOmega => 2,
            _ => 1,
        }
    }

    pub fn custom(table: CustomTable) -> Func {
        Func::Custom(Arc::new(table))
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact values f(1..=len) for a user-supplied function. Queries outside
/// the covered range are domain errors, never extrapolated.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct CustomTable {
    name: String,
    values: Vec<u64>,
}

impl CustomTable {
    /// Build from (n, value) rows. Rows must cover 1..=len contiguously;
    /// gaps and duplicates are format errors.
    pub fn from_rows(name: impl Into<String>, rows: &[(u64, u64)]) -> Result<CustomTable> {
        let name = name.into();
        validate_table_name(&name)?;
        if rows.is_empty() {
            return Err(Error::format("table has no rows"));
        }
        let mut values = Vec::with_capacity(rows.len());
        for (i, &(n, v)) in rows.iter().enumerate() {
            let expect = i as u64 + 1;
            if n != expect {
                let what = if n <= expect { "duplicate or out-of-order" } else { "gap before" };
                return Err(Error::format(format!(
                    "table rows must cover 1..=len contiguously: {what} n = {n} (expected {expect})"
                )));
            }
            values.push(v);
        }
        Ok(CustomTable { name, values })
    }

    /// Read the `n,value` CSV form: UTF-8, header line, ascending n.
    pub fn from_csv(name: impl Into<String>, reader: impl BufRead) -> Result<CustomTable> {
        let mut rows = Vec::new();
        let mut lines = reader.lines().enumerate();
        match lines.next() {
            Some((_, line)) => {
                let header = line?;
                if header.trim() != "n,value" {
                    return Err(Error::format(format!(
                        "expected header 'n,value', got {:?}",
                        header.trim()
                    )));
                }
            }
            None => return Err(Error::format("empty table file")),
        }
        for (idx, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (n_str, v_str) = line
                .split_once(',')
                .ok_or_else(|| Error::format(format!("line {}: expected 'n,value'", idx + 1)))?;
            let n: u64 = n_str.trim().parse().map_err(|_| {
                Error::format(format!("line {}: bad n {:?}", idx + 1, n_str.trim()))
            })?;
            let v: u64 = v_str.trim().parse().map_err(|_| {
                Error::format(format!(
                    "line {}: value {:?} is not a 64-bit nonnegative integer",
                    idx + 1,
                    v_str.trim()
                ))
            })?;
            rows.push((n, v));
        }
        CustomTable::from_rows(name, &rows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Largest covered argument.
    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, n: u64) -> Result<u64> {
        if n == 0 || n > self.len() {
            return Err(Error::domain(format!(
                "custom table '{}' covers 1..={}, asked for {}",
                self.name,
                self.len(),
                n
            )));
        }
        Ok(self.values[(n - 1) as usize])
    }

    pub(crate) fn slice(&self, start: u64, len: usize) -> Result<&[u64]> {
        let end = start + len as u64 - 1;
        if start == 0 || end > self.len() {
            return Err(Error::domain(format!(
                "custom table '{}' covers 1..={}, asked for {}..={}",
                self.name,
                self.len(),
                start,
                end
            )));
        }
        Ok(&self.values[(start - 1) as usize..end as usize])
    }
}

// Table names land in CSV cells and file paths; keep them inert.
fn validate_table_name(name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::format("table name is empty"));
    }
    if !name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
    {
        return Err(Error::format(format!(
            "table name {name:?} may only contain ASCII alphanumerics, '_', '-', '.'"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_round_trip() {
        for name in BUILTIN_NAMES {
            let f = Func::parse_builtin(name).unwrap();
            assert_eq!(f.name(), name);
        }
        assert_eq!(Func::parse_builtin("nosuch"), None);
    }

    #[test]
    fn table_contiguity_enforced() {
        assert!(CustomTable::from_rows("t", &[(1, 1), (2, 1), (3, 1)]).is_ok());
        // gap at 2
        let err = CustomTable::from_rows("t", &[(1, 1), (3, 2)]).unwrap_err();
        assert!(matches!(err, Error::Format(_)), "{err}");
        // duplicate
        assert!(CustomTable::from_rows("t", &[(1, 1), (1, 2)]).is_err());
        // must start at 1
        assert!(CustomTable::from_rows("t", &[(2, 1)]).is_err());
        assert!(CustomTable::from_rows("t", &[]).is_err());
    }

    #[test]
    fn table_csv_parses() {
        let csv = "n,value\n1,5\n2,6\n3,7\n";
        let t = CustomTable::from_csv("t", csv.as_bytes()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.value(2).unwrap(), 6);
        assert!(t.value(4).is_err());
        assert!(t.value(0).is_err());

        assert!(CustomTable::from_csv("t", "x,y\n1,2\n".as_bytes()).is_err());
        // value outside 64 bits
        assert!(CustomTable::from_csv("t", "n,value\n1,18446744073709551616\n".as_bytes()).is_err());
        // negative value
        assert!(CustomTable::from_csv("t", "n,value\n1,-3\n".as_bytes()).is_err());
    }

    #[test]
    fn table_name_validated() {
        assert!(CustomTable::from_rows("ok-name_1.csv", &[(1, 1)]).is_ok());
        assert!(CustomTable::from_rows("bad,name", &[(1, 1)]).is_err());
        assert!(CustomTable::from_rows("", &[(1, 1)]).is_err());
    }
}
