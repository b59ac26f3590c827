//! The oracle must compute everything from metric components, Christoffel
//! symbols and jets, never through the form-based operators it is checked
//! against.

use std::fs;
use std::path::PathBuf;

fn source(module: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src").join(format!("{module}.rs"));
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Names of the free functions a module exports.
fn exported_functions(module: &str) -> Vec<String> {
    source(module)
        .lines()
        .filter_map(|l| l.strip_prefix("pub fn "))
        .map(|rest| rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect())
        .collect()
}

/// Identifiers immediately followed by `(` or a generic argument list.
fn called_identifiers(code: &str) -> Vec<String> {
    let chars: Vec<char> = code.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_alphabetic() || chars[i] == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut j = i;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            if j < chars.len() && (chars[j] == '(' || (chars[j] == ':' && chars.get(j + 2) == Some(&'<'))) {
                out.push(name);
            }
        } else {
            i += 1;
        }
    }
    out
}

#[test]
fn oracle_calls_no_form_operator() {
    let mut forbidden = Vec::new();
    for module in ["exterior", "lie", "elasticity"] {
        forbidden.extend(exported_functions(module));
    }
    assert!(forbidden.len() > 20, "harvested {forbidden:?}");

    let code = strip_comments(&source("oracle"));
    let mut calls = called_identifiers(&code);
    calls.retain(|c| forbidden.contains(c));
    assert!(calls.is_empty(), "oracle calls form operators: {calls:?}");
}

#[test]
fn oracle_imports_only_data_types_from_form_modules() {
    let code = strip_comments(&source("oracle"));
    for line in code.lines().filter(|l| l.trim_start().starts_with("use crate::")) {
        for module in ["exterior", "lie", "elasticity"] {
            if let Some(rest) = line.split(&format!("crate::{module}::")).nth(1) {
                let items = rest.trim_matches(|c| c == '{' || c == '}' || c == ';' || c == ' ');
                for item in items.split(',').map(str::trim) {
                    assert!(
                        item.chars().next().is_some_and(char::is_uppercase),
                        "oracle imports {item} from {module}"
                    );
                }
            }
        }
    }
}

#[test]
fn scanner_detects_a_planted_call() {
    let planted = "fn f() { let x = exterior::hodge_star(m, &a); }\n// curl(v) in a comment";
    let calls = called_identifiers(&strip_comments(planted));
    assert_eq!(calls, vec!["f".to_string(), "hodge_star".to_string()]);
}

#[test]
fn harness_scan_agrees() {
    let found = elastoforms::harness::suites::forbidden_oracle_calls(&source("oracle"));
    assert!(found.is_empty(), "{found:?}");
}
