//! Symbolic names for stored symbols, e.g. `2a_2+b_0` or `ΣW^k_1`.

use crate::gf::{Elem, Field, Mat};

use super::{Family, SystemParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelStyle {
    /// One letter per message (`a`, `b`, ...), symbol subscripts starting at `base`.
    Letters { base: usize },
    /// `W^k_s` with 1-based message and symbol indices; a plain sum over all
    /// messages of the same symbol collapses to `ΣW^k_s`.
    Superscript,
}

impl LabelStyle {
    pub fn for_family(params: &SystemParams) -> LabelStyle {
        match params.family {
            Family::Joint2n2 => LabelStyle::Letters { base: 0 },
            _ if params.messages <= 26 => LabelStyle::Letters { base: 1 },
            _ => LabelStyle::Superscript,
        }
    }
}

/// Coefficient prefix: empty for one, the integer in prime fields, a power of
/// alpha otherwise.
pub fn coefficient(field: &Field, c: Elem) -> String {
    if c == Elem::ONE {
        String::new()
    } else if field.degree() == 1 {
        c.to_string()
    } else {
        match field.log(c) {
            Some(1) => "α".to_string(),
            Some(e) => format!("α^{e}"),
            None => "0".to_string(),
        }
    }
}

pub fn symbol_name(style: LabelStyle, message: usize, symbol: usize) -> String {
    match style {
        LabelStyle::Letters { base } => {
            let letter = (b'a' + message as u8) as char;
            format!("{letter}_{}", symbol + base)
        }
        LabelStyle::Superscript => format!("W^{}_{}", message + 1, symbol + 1),
    }
}

pub fn row_label(field: &Field, params: &SystemParams, row: &[Elem], style: LabelStyle) -> String {
    let l = params.message_len;
    let terms: Vec<(usize, Elem)> = row
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(col, &c)| (col, c))
        .collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    if style == LabelStyle::Superscript && terms.len() == params.messages && params.messages > 1 {
        let s = terms[0].0 % l;
        let is_sum = terms
            .iter()
            .enumerate()
            .all(|(k, &(col, c))| c == Elem::ONE && col == k * l + s);
        if is_sum {
            return format!("ΣW^k_{}", s + 1);
        }
    }
    terms
        .iter()
        .map(|&(col, c)| format!("{}{}", coefficient(field, c), symbol_name(style, col / l, col % l)))
        .collect::<Vec<_>>()
        .join("+")
}

pub fn row_labels(field: &Field, params: &SystemParams, g: &Mat, style: LabelStyle) -> Vec<String> {
    g.row_iter().map(|row| row_label(field, params, row, style)).collect()
}

pub fn code_labels(field: &Field, params: &SystemParams, generators: &[Mat], style: LabelStyle) -> Vec<Vec<String>> {
    generators
        .iter()
        .map(|g| row_labels(field, params, g, style))
        .collect()
}
