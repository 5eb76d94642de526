//! Element counts of chemical formulas such as `CH4`, `ZnCl2` or `Ca(OH)2`.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot read formula {formula:?} at position {pos}: {message}")]
pub struct FormulaError {
    pub formula: String,
    pub pos: usize,
    pub message: &'static str,
}

/// Element symbol → count.
pub type AtomCounts = BTreeMap<String, u64>;

/// Parses element symbols (an uppercase letter and optional lowercase letters),
/// optional counts, and parenthesized groups with a multiplier.
pub fn parse_formula(formula: &str) -> Result<AtomCounts, FormulaError> {
    let chars: Vec<char> = formula.chars().collect();
    let err = |pos: usize, message: &'static str| FormulaError {
        formula: formula.to_string(),
        pos,
        message,
    };
    let mut stack: Vec<AtomCounts> = vec![AtomCounts::new()];
    let mut i = 0;
    let read_count = |i: &mut usize| -> u64 {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            1
        } else {
            chars[start..*i]
                .iter()
                .collect::<String>()
                .parse()
                .unwrap_or(u64::MAX)
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_uppercase() {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_lowercase() {
                i += 1;
            }
            let symbol: String = chars[start..i].iter().collect();
            let n = read_count(&mut i);
            if n == 0 {
                return Err(err(i, "zero count"));
            }
            *stack
                .last_mut()
                .expect("nonempty stack")
                .entry(symbol)
                .or_default() += n;
        } else if c == '(' {
            stack.push(AtomCounts::new());
            i += 1;
        } else if c == ')' {
            if stack.len() < 2 {
                return Err(err(i, "unmatched ')'"));
            }
            i += 1;
            let n = read_count(&mut i);
            let group = stack.pop().expect("checked depth");
            let top = stack.last_mut().expect("nonempty stack");
            for (k, v) in group {
                *top.entry(k).or_default() += v * n;
            }
        } else {
            return Err(err(i, "expected an element symbol"));
        }
    }
    if stack.len() != 1 {
        return Err(err(chars.len(), "unmatched '('"));
    }
    let counts = stack.pop().expect("one frame");
    if counts.is_empty() {
        return Err(err(0, "empty formula"));
    }
    Ok(counts)
}
