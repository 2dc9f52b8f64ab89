//! Abstract syntax of expressions and formulas, with parsers and printers.

mod alphabet;
pub(crate) mod binding;
mod expr;
mod formula;
mod parse;

pub(crate) use alphabet::is_identifier;
pub use alphabet::{Alphabet, Letter};
pub use expr::{Expr, ExprDisplay, Fixpoint};
pub use formula::Formula;
pub use parse::{
    parse_alphabet, parse_closed_expr, parse_closed_formula, parse_expr, parse_expr_document, parse_formula,
    parse_formula_document, Document, ParseError,
};
