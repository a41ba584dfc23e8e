//! Pulse-program text format (`.pprog`).
//!
//! ```text
//! # two-qubit drift program
//! group collective_pauli(2);
//! dt 0.01;
//! errors independent(2);
//! window drift_identity B=pauli(1,x) cycles=100;
//! ```
//!
//! Statements end with `;`, `#` starts a line comment. Constructors are
//! builtins (see [`crate::builtins`]) or names of operators supplied in a
//! registry.

mod ast;
mod compile;
mod diag;
mod flatten;
mod lexer;
mod parser;

pub use ast::{format_number, Arg, Ctor, Program, SchemeKw, WindowDecl};
pub use compile::{compile, load, validate, Compiled};
pub use diag::{Diagnostic, Severity, Span};
pub use flatten::{flatten, Event, EventKind, EventList, PulseRole};
pub use parser::{parse, parse_ctor, parse_with, Parsed, SourceMap, WindowSpans};

/// Canonical text: one statement per line, bindings in `P`, `A`/`B` order,
/// numbers with 17 significant digits unless integral.
pub fn serialize(program: &Program) -> String {
    let mut out = format!("group {};\ndt {};\n", program.group, format_number(program.dt));
    if !program.errors.is_empty() {
        let list: Vec<String> = program.errors.iter().map(Ctor::to_string).collect();
        out.push_str(&format!("errors {};\n", list.join(", ")));
    }
    for w in &program.windows {
        out.push_str("window ");
        out.push_str(w.scheme.keyword());
        if let Some(p) = &w.pulse {
            out.push_str(&format!(" P={p}"));
        }
        out.push_str(&format!(" {}={} cycles={};\n", w.scheme.hamiltonian_key(), w.hamiltonian, w.cycles));
    }
    out
}

/// Parse and re-serialize.
pub fn canonicalize(src: &str) -> Result<String, Diagnostic> {
    parse(src).map(|p| serialize(&p.program))
}
