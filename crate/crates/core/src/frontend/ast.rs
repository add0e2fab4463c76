//! Surface syntax tree for equations, with a canonical printer whose output
//! re-parses to a structurally identical tree.

use std::fmt;

use num_traits::{One, Signed};

use crate::kernel::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative rational literal (negative values appear as `Neg`).
    Num(Rat),
    /// Variable or parameter reference.
    Name(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Integer or rational exponent on a subexpression.
    Pow(Box<Expr>, Rat),
    Sqrt(Box<Expr>),
    Root(Box<Expr>, u32),
    /// Derivative of an unknown: sorted multi-index of independent-variable
    /// positions; empty means the unknown itself.
    Deriv { unknown: String, multi_index: Vec<usize> },
}

impl Expr {
    pub fn num_i(n: i64) -> Expr {
        if n < 0 {
            Expr::Neg(Box::new(Expr::Num(Rat::from_integer((-n).into()))))
        } else {
            Expr::Num(Rat::from_integer(n.into()))
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Neg(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn render_into(&self, out: &mut String, single_var: bool) {
        match self {
            Expr::Num(r) => {
                if r.denom().is_one() {
                    out.push_str(&r.numer().to_string());
                } else {
                    // rational literal rendered as a division
                    out.push_str(&format!("{}/{}", r.numer(), r.denom()));
                }
            }
            Expr::Name(n) => out.push_str(n),
            Expr::Add(a, b) => {
                self.child(a, 1, false, out, single_var);
                out.push_str(" + ");
                self.child(b, 1, true, out, single_var);
            }
            Expr::Sub(a, b) => {
                self.child(a, 1, false, out, single_var);
                out.push_str(" - ");
                self.child(b, 1, true, out, single_var);
            }
            Expr::Mul(a, b) => {
                self.child(a, 2, false, out, single_var);
                out.push('*');
                self.child(b, 2, true, out, single_var);
            }
            Expr::Div(a, b) => {
                self.child(a, 2, false, out, single_var);
                out.push('/');
                self.child(b, 2, true, out, single_var);
            }
            Expr::Neg(a) => {
                out.push('-');
                self.child(a, 2, true, out, single_var);
            }
            Expr::Pow(a, e) => {
                let needs_parens = a.precedence() < 4
                    || matches!(
                        **a,
                        Expr::Deriv { ref multi_index, .. } if !multi_index.is_empty()
                    );
                if needs_parens {
                    out.push('(');
                    a.render_into(out, single_var);
                    out.push(')');
                } else {
                    a.render_into(out, single_var);
                }
                out.push('^');
                if e.denom().is_one() && !e.is_negative() {
                    out.push_str(&e.numer().to_string());
                } else if e.denom().is_one() {
                    out.push_str(&format!("({})", e.numer()));
                } else {
                    out.push_str(&format!("({}/{})", e.numer(), e.denom()));
                }
            }
            Expr::Sqrt(a) => {
                out.push_str("sqrt(");
                a.render_into(out, single_var);
                out.push(')');
            }
            Expr::Root(a, k) => {
                out.push_str("root(");
                a.render_into(out, single_var);
                out.push_str(&format!(", {k})"));
            }
            Expr::Deriv {
                unknown,
                multi_index,
            } => {
                if multi_index.is_empty() {
                    out.push_str(unknown);
                    return;
                }
                // single-variable derivatives up to order 3 as primes
                if single_var && multi_index.iter().all(|&i| i == 0) && multi_index.len() <= 3 {
                    out.push_str(unknown);
                    for _ in 0..multi_index.len() {
                        out.push('\'');
                    }
                    return;
                }
                // diff(u, v, ...) with $k runs collapsed
                let mut parts: Vec<String> = Vec::new();
                let mut i = 0;
                while i < multi_index.len() {
                    let v = multi_index[i];
                    let mut run = 1;
                    while i + run < multi_index.len() && multi_index[i + run] == v {
                        run += 1;
                    }
                    if run == 1 {
                        parts.push(format!("@var{v}"));
                    } else {
                        parts.push(format!("@var{v}${run}"));
                    }
                    i += run;
                }
                out.push_str("diff(");
                out.push_str(unknown);
                out.push_str(", ");
                out.push_str(&parts.join(", "));
                out.push(')');
            }
        }
    }

    fn child(&self, c: &Expr, level: u8, is_right: bool, out: &mut String, single_var: bool) {
        let cp = c.precedence();
        let parens = cp < level || (cp == level && is_right);
        if parens {
            out.push('(');
            c.render_into(out, single_var);
            out.push(')');
        } else {
            c.render_into(out, single_var);
        }
    }

    /// Canonical text. Derivative variable placeholders `@varN` are replaced
    /// by the declared variable names.
    pub fn render(&self, var_names: &[String]) -> String {
        let mut s = String::new();
        self.render_into(&mut s, var_names.len() == 1);
        for (i, name) in var_names.iter().enumerate().rev() {
            s = s.replace(&format!("@var{i}"), name);
        }
        s
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render_into(&mut s, true);
        write!(f, "{s}")
    }
}
