//! Floating point evaluation of expression trees.

use super::{Expr, Func, Irr, JetVar, Symbol};
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub enum EvalError {
    Unbound(String),
    Domain(String),
    NonFinite(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Unbound(n) => write!(f, "unbound variable {n}"),
            EvalError::Domain(m) => write!(f, "domain error: {m}"),
            EvalError::NonFinite(m) => write!(f, "non-finite value in {m}"),
        }
    }
}

impl std::error::Error for EvalError {}

/// Bindings for symbols and jet coordinates.
#[derive(Debug, Clone, Default)]
pub struct Env {
    syms: BTreeMap<Symbol, f64>,
    jets: BTreeMap<JetVar, f64>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn sym(mut self, name: &str, v: f64) -> Self {
        self.set_sym(name, v);
        self
    }

    pub fn jet(mut self, base: &str, derivs: &[&str], v: f64) -> Self {
        self.set_jet(base, derivs, v);
        self
    }

    pub fn set_sym(&mut self, name: &str, v: f64) -> &mut Self {
        self.syms.insert(Symbol::new(name), v);
        self
    }

    pub fn set_jet(&mut self, base: &str, derivs: &[&str], v: f64) -> &mut Self {
        let jv = JetVar::new(
            Symbol::new(base),
            derivs.iter().map(|d| Symbol::new(d)).collect(),
        );
        self.set_jet_var(jv, v)
    }

    pub fn set_jet_var(&mut self, jv: JetVar, v: f64) -> &mut Self {
        self.jets.insert(jv, v);
        self
    }

    pub fn from_syms(pairs: &[(&str, f64)]) -> Self {
        let mut env = Env::new();
        for (n, v) in pairs {
            env.set_sym(n, *v);
        }
        env
    }

    pub fn get_sym(&self, name: &str) -> Option<f64> {
        self.syms.get(&Symbol::new(name)).copied()
    }
}

pub fn eval(e: &Expr, env: &Env) -> Result<f64, EvalError> {
    let v = eval_inner(e, env)?;
    if !v.is_finite() {
        return Err(EvalError::NonFinite(e.to_string()));
    }
    Ok(v)
}

fn eval_inner(e: &Expr, env: &Env) -> Result<f64, EvalError> {
    match e {
        Expr::Num(q) => q
            .to_f64()
            .ok_or_else(|| EvalError::NonFinite("rational constant".into())),
        Expr::Irr(Irr::Sqrt(n)) => Ok(n
            .to_f64()
            .ok_or_else(|| EvalError::NonFinite("surd".into()))?
            .sqrt()),
        Expr::Irr(Irr::Pi) => Ok(std::f64::consts::PI),
        Expr::Sym(s) => env
            .syms
            .get(s)
            .copied()
            .ok_or_else(|| EvalError::Unbound(s.to_string())),
        Expr::Jet(j) => env
            .jets
            .get(j)
            .copied()
            .ok_or_else(|| EvalError::Unbound(j.to_string())),
        Expr::Sum(items) => {
            let mut acc = 0.0;
            for it in items.iter() {
                acc += eval_inner(it, env)?;
            }
            Ok(acc)
        }
        Expr::Prod(items) => {
            let mut acc = 1.0;
            for it in items.iter() {
                acc *= eval_inner(it, env)?;
            }
            Ok(acc)
        }
        Expr::Pow(be) => {
            let b = eval_inner(&be.0, env)?;
            if let Some(k) = be.1.as_int() {
                if let Ok(k32) = i32::try_from(k) {
                    if b == 0.0 && k32 < 0 {
                        return Err(EvalError::Domain("zero to a negative power".into()));
                    }
                    return Ok(b.powi(k32));
                }
            }
            let ex = eval_inner(&be.1, env)?;
            if b == 0.0 && ex < 0.0 {
                return Err(EvalError::Domain("zero to a negative power".into()));
            }
            if b < 0.0 {
                if ex.fract() == 0.0 && ex.abs() < 2_147_483_647.0 {
                    return Ok(b.powi(ex as i32));
                }
                return Err(EvalError::Domain(
                    "negative base with fractional exponent".into(),
                ));
            }
            Ok(b.powf(ex))
        }
        Expr::Call(f, args) => {
            let a = eval_inner(&args[0], env)?;
            match f {
                Func::Exp => Ok(a.exp()),
                Func::Log => {
                    if a <= 0.0 {
                        Err(EvalError::Domain("log of a non-positive value".into()))
                    } else {
                        Ok(a.ln())
                    }
                }
                Func::Sqrt => {
                    if a < 0.0 {
                        Err(EvalError::Domain("sqrt of a negative value".into()))
                    } else {
                        Ok(a.sqrt())
                    }
                }
                Func::Sin => Ok(a.sin()),
                Func::Cos => Ok(a.cos()),
                Func::Sinh => Ok(a.sinh()),
                Func::Cosh => Ok(a.cosh()),
                Func::Tanh => Ok(a.tanh()),
                Func::Erf => Ok(crate::numerics::special::erf(a)),
            }
        }
    }
}
