//! Text forms for character tuples, as taken on the command line.
//!
//! A tuple is a comma-separated list of exponents `c_1,...,c_k`; for `p = 2`
//! an optional parallel list of sign bits `e_1,...,e_k` selects `chi(-1)`.

use std::sync::Arc;

use crate::character::Character;
use crate::error::{Error, Result};
use crate::jacobi::JacobiQuery;
use crate::unit_group::UnitGroupContext;

/// Longest tuple accepted from text.
pub const MAX_TUPLE_LEN: usize = 64;

fn split_list(s: &str) -> Result<Vec<&str>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty list"));
    }
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.len() > MAX_TUPLE_LEN {
        return Err(Error::invalid(format!(
            "list has {} entries, at most {MAX_TUPLE_LEN} allowed",
            items.len()
        )));
    }
    if items.iter().any(|t| t.is_empty()) {
        return Err(Error::invalid(format!("empty entry in list {s:?}")));
    }
    Ok(items)
}

pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    split_list(s)?
        .into_iter()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|e| Error::invalid(format!("bad integer {t:?}: {e}")))
        })
        .collect()
}

pub fn parse_sign_list(s: &str) -> Result<Vec<u8>> {
    split_list(s)?
        .into_iter()
        .map(|t| match t {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(Error::invalid(format!("sign bit must be 0 or 1, got {t:?}"))),
        })
        .collect()
}

/// Characters `(c_i, e_i)` on `ctx`; missing signs default to 0.
pub fn build_characters(
    ctx: &Arc<UnitGroupContext>,
    exponents: &[i64],
    signs: Option<&[u8]>,
) -> Result<Vec<Character>> {
    if let Some(signs) = signs {
        if signs.len() != exponents.len() {
            return Err(Error::invalid(format!(
                "{} exponents but {} sign bits",
                exponents.len(),
                signs.len()
            )));
        }
    }
    exponents
        .iter()
        .enumerate()
        .map(|(i, &c)| Character::new(ctx, c, signs.map_or(0, |s| s[i])))
        .collect()
}

/// Build `J_B(chi_1..chi_k, p^m)` from its text form.
pub fn parse_query(p: u64, m: u32, chars: &str, signs: Option<&str>, b: i64) -> Result<JacobiQuery> {
    let exponents = parse_int_list(chars)?;
    let signs = signs.map(parse_sign_list).transpose()?;
    let ctx = UnitGroupContext::new(p, m)?;
    JacobiQuery::new(build_characters(&ctx, &exponents, signs.as_deref())?, b)
}

/// `c_1;c_2;...` as written in sweep reports.
pub fn format_tuple<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("1,1").unwrap(), vec![1, 1]);
        assert_eq!(parse_int_list(" 3, -2 ,7 ").unwrap(), vec![3, -2, 7]);
        assert!(parse_int_list("").is_err());
        assert!(parse_int_list("1,,2").is_err());
        assert!(parse_int_list("1,x").is_err());
        assert!(parse_int_list("99999999999999999999").is_err());
        assert!(parse_int_list(&vec!["1"; MAX_TUPLE_LEN + 1].join(",")).is_err());
    }

    #[test]
    fn sign_lists() {
        assert_eq!(parse_sign_list("0,1").unwrap(), vec![0, 1]);
        assert!(parse_sign_list("2").is_err());
        assert!(parse_sign_list("01").is_err());
    }

    #[test]
    fn queries() {
        let q = parse_query(3, 2, "1,5", None, 9).unwrap();
        assert_eq!((q.k(), q.b(), q.n()), (2, 0, 2));
        let q = parse_query(2, 4, "1,3", Some("1,0"), 1).unwrap();
        assert_eq!(q.chars()[0].sign(), 1);
        assert!(parse_query(3, 2, "1,5", Some("0"), 1).is_err());
        assert!(parse_query(3, 2, "1", Some("1"), 1).is_err());
        assert!(parse_query(9, 2, "1", None, 1).is_err());
        assert!(matches!(
            parse_query(3, 40, "1", None, 1),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(parse_query(u64::MAX, 1, "1", None, 1).is_err());
    }

    #[test]
    fn tuples() {
        assert_eq!(format_tuple([1, 2, 3]), "1;2;3");
        assert_eq!(format_tuple(Vec::<u8>::new()), "");
    }
}
