//! Plain-text scenario files.
//!
//! The format is line oriented: `[section]` headers, `key = value` entries,
//! `#` starts a comment, blank lines are ignored. Section names may be
//! dotted (`[species.carbon]`); dotted families are looked up by prefix.
//! Values are kept verbatim so a key can hold either a constant (`eps =
//! 1/10`, exact rationals survive) or an expression in scenario variables
//! (`profile = -x`), and the consumer decides how to parse it.
//!
//! Generators round-trip through `[generator.<label>]` sections whose keys
//! are coordinate variables and whose values are coordinate expressions.

use crate::expr::eval::{eval, Env};
use crate::expr::parse;
use crate::jet::ModelSystem;
use crate::symmetry::Generator;
use std::fmt;
use std::path::Path;

#[derive(Clone, Debug)]
pub struct ScnError {
    /// 1-based source line, 0 when the error is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl ScnError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ScnError {
            line,
            message: message.into(),
        }
    }

    /// Error not tied to a source line (I/O, cross-key validation).
    pub fn general(message: impl Into<String>) -> Self {
        ScnError::new(0, message)
    }
}

impl fmt::Display for ScnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "scenario: {}", self.message)
        } else {
            write!(f, "scenario line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ScnError {}

#[derive(Clone, Debug)]
pub struct Section {
    pub name: String,
    pub line: usize,
    entries: Vec<(String, String, usize)>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, ScnError> {
        self.get(key).ok_or_else(|| {
            ScnError::new(self.line, format!("[{}] is missing `{key}`", self.name))
        })
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, _, l)| *l)
            .unwrap_or(self.line)
    }

    /// Parses the value as a constant expression and evaluates it, so
    /// `1/1836` stays exact until the final division.
    pub fn number(&self, key: &str) -> Result<f64, ScnError> {
        let src = self.require(key)?;
        let line = self.line_of(key);
        let e = parse::parse(src)
            .map_err(|e| ScnError::new(line, format!("`{key}`: {e}")))?;
        eval(&e, &Env::new())
            .map_err(|e| ScnError::new(line, format!("`{key}` is not a constant: {e:?}")))
    }

    pub fn number_or(&self, key: &str, default: f64) -> Result<f64, ScnError> {
        match self.get(key) {
            Some(_) => self.number(key),
            None => Ok(default),
        }
    }

    pub fn integer(&self, key: &str) -> Result<i64, ScnError> {
        let v = self.number(key)?;
        if v.fract() != 0.0 {
            return Err(ScnError::new(
                self.line_of(key),
                format!("`{key}` must be an integer, got {v}"),
            ));
        }
        Ok(v as i64)
    }

    pub fn keys(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v, _)| (k.as_str(), v.as_str()))
    }

    /// The part of a dotted section name after the first dot.
    pub fn suffix(&self) -> &str {
        match self.name.split_once('.') {
            Some((_, rest)) => rest,
            None => &self.name,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScnFile {
    pub sections: Vec<Section>,
}

impl ScnFile {
    pub fn parse(text: &str) -> Result<ScnFile, ScnError> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ScnError::new(lineno, "unterminated section header"))?
                    .trim();
                if name.is_empty() {
                    return Err(ScnError::new(lineno, "empty section name"));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(ScnError::new(lineno, format!("duplicate section [{name}]")));
                }
                sections.push(Section {
                    name: name.to_string(),
                    line: lineno,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ScnError::new(lineno, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(ScnError::new(lineno, "empty key or value"));
            }
            let sec = sections
                .last_mut()
                .ok_or_else(|| ScnError::new(lineno, "entry before any [section]"))?;
            if sec.entries.iter().any(|(k, _, _)| k == key) {
                return Err(ScnError::new(
                    lineno,
                    format!("duplicate key `{key}` in [{}]", sec.name),
                ));
            }
            sec.entries.push((key.to_string(), value.to_string(), lineno));
        }
        Ok(ScnFile { sections })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ScnFile, ScnError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScnError::general(format!("{}: {e}", path.display())))?;
        ScnFile::parse(&text)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require_section(&self, name: &str) -> Result<&Section, ScnError> {
        self.section(name)
            .ok_or_else(|| ScnError::general(format!("missing section [{name}]")))
    }

    pub fn with_prefix<'a>(&'a self, prefix: &str) -> Vec<&'a Section> {
        self.sections
            .iter()
            .filter(|s| s.name.starts_with(prefix))
            .collect()
    }
}

/// Reads a `[generator.<label>]` section: keys are variables of `sys`,
/// values their coordinate expressions.
pub fn generator_from_section(sec: &Section, sys: &ModelSystem) -> Result<Generator, ScnError> {
    let mut coords: Vec<(&str, &str)> = Vec::new();
    for (k, v) in sec.keys() {
        let sym = crate::expr::Symbol::new(k);
        if !sys.independents.contains(&sym) && !sys.dependents.contains(&sym) {
            return Err(ScnError::new(
                sec.line,
                format!("`{k}` is not a variable of {}", sys.name),
            ));
        }
        coords.push((k, v));
    }
    Ok(Generator::parsed(sec.suffix(), sys, &coords))
}

/// Renders a generator as a scenario section, one coordinate per line,
/// zero coordinates omitted.
pub fn generator_to_section(gen: &Generator, sys: &ModelSystem) -> String {
    let mut out = format!("[generator.{}]\n", gen.label);
    for i in &sys.independents {
        let xi = gen.xi(i);
        if !xi.is_zero() {
            out.push_str(&format!("{} = {}\n", i.name(), xi));
        }
    }
    for d in &sys.dependents {
        let eta = gen.eta(d);
        if !eta.is_zero() {
            out.push_str(&format!("{} = {}\n", d.name(), eta));
        }
    }
    out
}

/// Degree plan for a determining-equation run, from a `[detq]` section:
/// either one uniform `degree` or per-coordinate keys naming variables,
/// plus the expected solution-space dimension for self-checking.
#[derive(Clone, Debug)]
pub struct DetqConfig {
    pub uniform: Option<u32>,
    pub per_coordinate: Vec<(String, u32)>,
    pub expected_dim: Option<usize>,
}

impl DetqConfig {
    pub fn from_section(sec: &Section) -> Result<DetqConfig, ScnError> {
        let mut cfg = DetqConfig {
            uniform: None,
            per_coordinate: Vec::new(),
            expected_dim: None,
        };
        for (k, _) in sec.keys() {
            match k {
                "degree" => cfg.uniform = Some(sec.integer(k)? as u32),
                "expected_dim" => cfg.expected_dim = Some(sec.integer(k)? as usize),
                var => {
                    cfg.per_coordinate.push((var.to_string(), sec.integer(k)? as u32));
                }
            }
        }
        if cfg.uniform.is_none() && cfg.per_coordinate.is_empty() {
            return Err(ScnError::new(
                sec.line,
                "[detq] needs `degree` or per-coordinate degrees",
            ));
        }
        Ok(cfg)
    }

    /// The coordinate degrees for `sys`: a uniform degree covers every
    /// variable, per-coordinate entries override it.
    pub fn degrees(&self, sys: &ModelSystem) -> Result<Vec<(String, u32)>, ScnError> {
        let mut out: Vec<(String, u32)> = Vec::new();
        if let Some(d) = self.uniform {
            for v in sys.independents.iter().chain(sys.dependents.iter()) {
                out.push((v.name().to_string(), d));
            }
        }
        for (var, d) in &self.per_coordinate {
            let sym = crate::expr::Symbol::new(var);
            if !sys.independents.contains(&sym) && !sys.dependents.contains(&sym) {
                return Err(ScnError::general(format!(
                    "[detq] degree for `{var}`, not a variable of {}",
                    sys.name
                )));
            }
            match out.iter_mut().find(|(v, _)| v == var) {
                Some(slot) => slot.1 = *d,
                None => out.push((var.clone(), *d)),
            }
        }
        Ok(out)
    }

    /// Same plan with every degree forced to `d` and the dimension
    /// expectation dropped; used by the CLI override.
    pub fn override_uniform(&self, d: u32) -> DetqConfig {
        DetqConfig {
            uniform: Some(d),
            per_coordinate: Vec::new(),
            expected_dim: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::simplify::equivalent;

    #[test]
    fn sections_keys_and_comments_parse() {
        let f = ScnFile::parse(
            "# leading comment\n[hopf]\neps = 1/10  # trailing\nprofile = -x\n\n[species.c]\nZ = 6\n",
        )
        .unwrap();
        assert_eq!(f.sections.len(), 2);
        let h = f.section("hopf").unwrap();
        assert_eq!(h.number("eps").unwrap(), 0.1);
        assert_eq!(h.get("profile"), Some("-x"));
        assert_eq!(f.with_prefix("species.").len(), 1);
        assert_eq!(f.section("species.c").unwrap().suffix(), "c");
    }

    #[test]
    fn exact_rationals_survive_until_evaluation() {
        let f = ScnFile::parse("[plasma]\nme = 1/1836\n").unwrap();
        let v = f.section("plasma").unwrap().number("me").unwrap();
        assert_eq!(v, 1.0 / 1836.0);
    }

    #[test]
    fn malformed_input_reports_the_line() {
        assert_eq!(ScnFile::parse("x = 1\n").unwrap_err().line, 1);
        assert_eq!(ScnFile::parse("[a]\nnot an entry\n").unwrap_err().line, 2);
        assert_eq!(ScnFile::parse("[a]\nk = 1\nk = 2\n").unwrap_err().line, 3);
        assert!(ScnFile::parse("[a\n").is_err());
    }

    #[test]
    fn generators_round_trip_through_sections() {
        let sys = ModelSystem::new("m", &["z", "x", "eps"], &["u"])
            .with_frame("u_z", "-eps*u*u_x");
        let g = Generator::parsed("rg", &sys, &[("x", "z*u"), ("eps", "1")]);
        let text = generator_to_section(&g, &sys);
        let f = ScnFile::parse(&text).unwrap();
        let sec = f.with_prefix("generator.")[0];
        let back = generator_from_section(sec, &sys).unwrap();
        assert_eq!(back.label, "rg");
        for v in ["z", "x", "eps"] {
            let s = crate::expr::Symbol::new(v);
            assert!(equivalent(&g.xi(&s), &back.xi(&s)));
        }
        assert!(equivalent(&g.eta(&crate::expr::Symbol::new("u")), &back.eta(&crate::expr::Symbol::new("u"))));
    }

    #[test]
    fn generator_sections_reject_foreign_variables() {
        let sys = ModelSystem::new("m", &["z"], &["u"]);
        let f = ScnFile::parse("[generator.g]\nq = 1\n").unwrap();
        assert!(generator_from_section(&f.sections[0], &sys).is_err());
    }

    #[test]
    fn detq_config_expands_uniform_and_overrides() {
        let sys = ModelSystem::new("m", &["z", "x"], &["u"]);
        let f = ScnFile::parse("[detq]\ndegree = 2\nz = 0\nexpected_dim = 5\n").unwrap();
        let cfg = DetqConfig::from_section(f.section("detq").unwrap()).unwrap();
        let mut degs = cfg.degrees(&sys).unwrap();
        degs.sort();
        assert_eq!(
            degs,
            vec![
                ("u".to_string(), 2),
                ("x".to_string(), 2),
                ("z".to_string(), 0)
            ]
        );
        assert_eq!(cfg.expected_dim, Some(5));
        let forced = cfg.override_uniform(1);
        assert_eq!(forced.degrees(&sys).unwrap().len(), 3);
        assert_eq!(forced.expected_dim, None);
    }
}
