mod ast;
pub mod bounds;
mod eval;
mod lexer;
mod parser;
pub mod poly;
mod pretty;
mod span;
mod validate;

pub use ast::*;
pub use bounds::Env;
pub use eval::{context_for, eval, evaluate, evaluate_both, mono_of};
pub use parser::{parse, parse_expr, parse_file, DEFAULT_ORDER};
pub use pretty::{expr as pretty_expr, pretty_print};
pub use span::Span;
pub use validate::{bindings, validate, Finding};
