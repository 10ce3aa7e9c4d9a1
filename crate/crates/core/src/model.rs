//! Line-oriented model files: variables, parameters, polynomial ODE
//! right-hand sides, conservation laws, and exact parameter values.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::poly::MultiPoly;
use crate::rat::{parse_rat, Rat};
use crate::textform::{parse_poly, ParseError};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}: {source}")]
    Expr {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate declaration of {name}")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: undeclared symbol {name}")]
    Undeclared { line: usize, name: String },
}

#[derive(Clone, Debug)]
pub struct ConservationLawDecl {
    /// Left-hand side, a polynomial in the state variables.
    pub lhs: MultiPoly,
    /// Name of the conserved-total parameter on the right-hand side.
    pub constant: String,
}

#[derive(Clone, Debug)]
pub struct ModelFile {
    pub name: String,
    pub vars: Vec<String>,
    pub params: Vec<String>,
    /// One right-hand side per variable, in `vars` order.
    pub odes: Vec<MultiPoly>,
    pub laws: Vec<ConservationLawDecl>,
    pub values: BTreeMap<String, Rat>,
}

impl ModelFile {
    /// Declared indeterminates: variables then parameters.
    pub fn table(&self) -> Vec<String> {
        let mut t = self.vars.clone();
        t.extend(self.params.iter().cloned());
        t
    }

    /// ODE right-hand sides with the bound parameter values substituted.
    pub fn odes_with_values(&self) -> Vec<MultiPoly> {
        self.odes.iter().map(|p| self.substitute_values(p)).collect()
    }

    pub fn substitute_values(&self, p: &MultiPoly) -> MultiPoly {
        let mut q = p.clone();
        for (name, value) in &self.values {
            q = q.substitute_rat(name, value);
        }
        q
    }

    /// Law polynomials `lhs - constant`, values substituted.
    pub fn law_polys(&self) -> Vec<MultiPoly> {
        self.laws
            .iter()
            .map(|law| {
                let table = self.table();
                let names: Vec<&str> = table.iter().map(|s| s.as_str()).collect();
                let rhs = MultiPoly::var(&names, &law.constant);
                self.substitute_values(&law.lhs.align_to(&table).sub(&rhs))
            })
            .collect()
    }

    /// Value-substituted steady-state system: every ODE right-hand side
    /// set to zero, followed by the conservation laws.
    pub fn steady_state_system(&self) -> Vec<MultiPoly> {
        let mut out = self.odes_with_values();
        out.extend(self.law_polys());
        out
    }

    /// The same system with each equation scaled by the lcm of its
    /// coefficient denominators: integer coefficients, no content division.
    pub fn steady_state_system_cleared(&self) -> Vec<MultiPoly> {
        self.steady_state_system()
            .iter()
            .map(|p| {
                let mut lcm = BigInt::one();
                for (_, c) in p.terms() {
                    lcm = lcm.lcm(c.denom());
                }
                p.mul_rat(&Rat::from_integer(lcm))
            })
            .collect()
    }

    /// Parameters that remain free after the value bindings.
    pub fn free_params(&self) -> Vec<String> {
        self.params
            .iter()
            .filter(|p| !self.values.contains_key(*p))
            .cloned()
            .collect()
    }
}

/// Parses the line-oriented model grammar.  `#` starts a comment.
pub fn parse_model(text: &str) -> Result<ModelFile, ModelError> {
    let mut name = String::new();
    let mut vars: Vec<String> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    let mut odes: BTreeMap<String, (usize, MultiPoly)> = BTreeMap::new();
    let mut laws: Vec<ConservationLawDecl> = Vec::new();
    let mut values: BTreeMap<String, Rat> = BTreeMap::new();

    let syntax = |line: usize, msg: &str| ModelError::Syntax { line, msg: msg.to_string() };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "model" => {
                if !name.is_empty() {
                    return Err(ModelError::Duplicate { line: line_no, name: "model".into() });
                }
                if rest.is_empty() {
                    return Err(syntax(line_no, "model needs a name"));
                }
                name = rest.to_string();
            }
            "vars" | "params" => {
                for sym in rest.split_whitespace() {
                    if vars.iter().any(|v| v == sym) || params.iter().any(|p| p == sym) {
                        return Err(ModelError::Duplicate { line: line_no, name: sym.into() });
                    }
                    if keyword == "vars" {
                        vars.push(sym.to_string());
                    } else {
                        params.push(sym.to_string());
                    }
                }
            }
            "ode" => {
                let (var, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line_no, "ode needs `var = expr`"))?;
                let var = var.trim();
                if !vars.iter().any(|v| v == var) {
                    return Err(ModelError::Undeclared { line: line_no, name: var.into() });
                }
                if odes.contains_key(var) {
                    return Err(ModelError::Duplicate { line: line_no, name: var.into() });
                }
                let table = table_of(&vars, &params);
                let names: Vec<&str> = table.iter().map(|s| s.as_str()).collect();
                let p = parse_poly(expr, &names)
                    .map_err(|source| ModelError::Expr { line: line_no, source })?;
                odes.insert(var.to_string(), (line_no, p));
            }
            "law" => {
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line_no, "law needs `expr = param`"))?;
                let constant = rhs.trim();
                if !params.iter().any(|p| p == constant) {
                    return Err(ModelError::Undeclared { line: line_no, name: constant.into() });
                }
                let table = table_of(&vars, &params);
                let names: Vec<&str> = table.iter().map(|s| s.as_str()).collect();
                let p = parse_poly(lhs, &names)
                    .map_err(|source| ModelError::Expr { line: line_no, source })?;
                laws.push(ConservationLawDecl { lhs: p, constant: constant.to_string() });
            }
            "value" => {
                let (param, value) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line_no, "value needs `param = rational`"))?;
                let param = param.trim();
                if !params.iter().any(|p| p == param) {
                    return Err(ModelError::Undeclared { line: line_no, name: param.into() });
                }
                if values.contains_key(param) {
                    return Err(ModelError::Duplicate { line: line_no, name: param.into() });
                }
                let q = parse_rat(value.trim())
                    .ok_or_else(|| syntax(line_no, "value must be an exact rational"))?;
                values.insert(param.to_string(), q);
            }
            other => {
                return Err(syntax(line_no, &format!("unknown directive {other:?}")));
            }
        }
    }

    // every variable needs an ODE, in declaration order
    let mut rhs = Vec::with_capacity(vars.len());
    for v in &vars {
        match odes.remove(v) {
            Some((_, p)) => rhs.push(p),
            None => {
                return Err(ModelError::Syntax {
                    line: 0,
                    msg: format!("variable {v} has no ode"),
                })
            }
        }
    }

    Ok(ModelFile { name, vars, params, odes: rhs, laws, values })
}

fn table_of(vars: &[String], params: &[String]) -> Vec<String> {
    let mut t = vars.to_vec();
    t.extend(params.iter().cloned());
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    const TINY: &str = "\
model tiny
vars x y
params k
ode x = k*y - x
ode y = x - k*y
law x + y = k
value k = 0.25
";

    #[test]
    fn parse_round_trip() {
        let m = parse_model(TINY).unwrap();
        assert_eq!(m.name, "tiny");
        assert_eq!(m.vars, vec!["x", "y"]);
        assert_eq!(m.values["k"], rat(1, 4));
        assert_eq!(m.odes.len(), 2);
        let subbed = m.odes_with_values();
        assert!(!subbed[0].contains_var("k"));
        assert_eq!(m.steady_state_system().len(), 3);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_model("model a\nvars x\nparams k\node x = q\n"),
            Err(ModelError::Expr { line: 4, .. })
        ));
        assert!(matches!(
            parse_model("model a\nvars x x\n"),
            Err(ModelError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            parse_model("model a\nvars x\nparams k\node x = x\nvalue k = hello\n"),
            Err(ModelError::Syntax { line: 5, .. })
        ));
        assert!(matches!(
            parse_model("model a\nvars x\n"),
            Err(ModelError::Syntax { line: 0, .. })
        ));
    }

    #[test]
    fn decimal_values_exact() {
        let m = parse_model("model a\nvars x\nparams k\node x = k*x\nvalue k = 0.02\n").unwrap();
        assert_eq!(m.values["k"], rat(1, 50));
    }
}
