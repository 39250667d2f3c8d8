//! Parsers for the compact spec strings used across the command line and
//! the verification harness: Young functions (`power:2`,
//! `classp:2,4,min1`, `expm1t`, `conjugate-of:<spec>`), diagonal systems
//! (`diag:rule=-n,N=200,r=2`), scalar functions (`exp:1,1`, `const:1`,
//! `step:<csv path>`), and step-function CSV payloads.

use crate::diagsys::{DiagonalSystem, SpectrumRule, WeightSpec};
use crate::error::{Error, Result};
use crate::func::{SampledFunction, StepFunction};
use crate::numeric;
use crate::young::{self, ClassPSpec, Rho, YoungFunction};

/// Parse a Young-function spec string.
pub fn parse_phi(spec: &str) -> Result<YoungFunction> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("conjugate-of:") {
        let base = parse_phi(rest)?;
        return young::conjugate_numeric(&base, &numeric::log_grid(1e-9, 1e9, 433));
    }
    if spec == "expm1t" {
        return Ok(young::make_expm1t());
    }
    if let Some(rest) = spec.strip_prefix("power:") {
        let p: f64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in '{spec}'")))?;
        return young::make_power(p);
    }
    if let Some(rest) = spec.strip_prefix("classp:") {
        let mut parts = rest.splitn(3, ',');
        let p: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("missing p in '{spec}'")))?;
        let q: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("missing q in '{spec}'")))?;
        let rho = parse_rho(
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("missing rho in '{spec}'")))?,
        )?;
        return young::make_class_p(ClassPSpec::new(p, q, rho)?);
    }
    Err(Error::Parse(format!(
        "unknown Young function spec '{spec}' (expected power:p, classp:p,q,rho, expm1t, \
         or conjugate-of:<spec>)"
    )))
}

/// Parse a rho expression: `one`, `id`, `min1`, `log1p`,
/// `affine(a,b,rho1,rho2)`, `compose(rho1,rho2)`.
pub fn parse_rho(expr: &str) -> Result<Rho> {
    let expr = expr.trim();
    match expr {
        "one" => return Ok(Rho::One),
        "id" => return Ok(Rho::Id),
        "min1" => return Ok(Rho::Min1),
        "log1p" => return Ok(Rho::Log1p),
        _ => {}
    }
    if let Some(args) = call_args(expr, "affine") {
        let parts = split_top_level(args)?;
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "affine needs (a,b,rho1,rho2), got '{expr}'"
            )));
        }
        let a: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient '{}'", parts[0])))?;
        let b: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient '{}'", parts[1])))?;
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Parse("affine coefficients must be positive".into()));
        }
        return Ok(Rho::Affine {
            a,
            b,
            lhs: Box::new(parse_rho(parts[2])?),
            rhs: Box::new(parse_rho(parts[3])?),
        });
    }
    if let Some(args) = call_args(expr, "compose") {
        let parts = split_top_level(args)?;
        if parts.len() != 2 {
            return Err(Error::Parse(format!("compose needs (rho1,rho2), got '{expr}'")));
        }
        return Ok(Rho::Compose {
            outer: Box::new(parse_rho(parts[0])?),
            inner: Box::new(parse_rho(parts[1])?),
        });
    }
    Err(Error::Parse(format!(
        "unknown rho '{expr}' (expected one, id, min1, log1p, affine(a,b,r1,r2), \
         compose(r1,r2))"
    )))
}

fn call_args<'a>(expr: &'a str, name: &str) -> Option<&'a str> {
    expr.strip_prefix(name)?
        .strip_prefix('(')?
        .strip_suffix(')')
}

fn split_top_level(args: &str) -> Result<Vec<&str>> {
    let mut parts = vec![];
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in args.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced parens in '{args}'")))?
            }
            ',' if depth == 0 => {
                parts.push(&args[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parens in '{args}'")));
    }
    parts.push(&args[start..]);
    Ok(parts)
}

/// Parse a diagonal-system spec `diag:rule=<expr>,N=<int>,r=<real>
/// [,weights=default|w1;w2;...]` against the Young function that supplies
/// default weights.
pub fn parse_system(spec: &str, phi: &YoungFunction) -> Result<DiagonalSystem> {
    let rest = spec
        .trim()
        .strip_prefix("diag:")
        .ok_or_else(|| Error::Parse(format!("system spec must start with 'diag:', got '{spec}'")))?;
    let mut rule = None;
    let mut n_modes = None;
    let mut r = None;
    let mut weights = WeightSpec::Default;
    for field in rest.split(',') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{field}'")))?;
        match key.trim() {
            "rule" => rule = Some(parse_rule(value.trim())?),
            "N" => {
                n_modes = Some(value.trim().parse::<usize>().map_err(|_| {
                    Error::Parse(format!("bad mode count '{value}'"))
                })?)
            }
            "r" => {
                r = Some(value.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!("bad state exponent '{value}'"))
                })?)
            }
            "weights" => {
                let value = value.trim();
                if value != "default" {
                    let w: std::result::Result<Vec<f64>, _> =
                        value.split(';').map(|s| s.trim().parse::<f64>()).collect();
                    weights = WeightSpec::Explicit(w.map_err(|_| {
                        Error::Parse(format!("bad weight list '{value}'"))
                    })?);
                }
            }
            other => return Err(Error::Parse(format!("unknown system field '{other}'"))),
        }
    }
    let rule = rule.ok_or_else(|| Error::Parse("system spec needs rule=...".into()))?;
    let n_modes = n_modes.ok_or_else(|| Error::Parse("system spec needs N=...".into()))?;
    let r = r.ok_or_else(|| Error::Parse("system spec needs r=...".into()))?;
    DiagonalSystem::new(rule, n_modes, r, weights, phi)
}

/// Eigenvalue rules: `-n`, `-n^gamma`, `-log(1+n)`.
pub fn parse_rule(expr: &str) -> Result<SpectrumRule> {
    match expr {
        "-n" => Ok(SpectrumRule::NegPower { gamma: 1.0 }),
        "-log(1+n)" => Ok(SpectrumRule::NegLog),
        _ => {
            if let Some(g) = expr.strip_prefix("-n^") {
                let gamma: f64 = g
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rule exponent '{expr}'")))?;
                if !(gamma > 0.0) {
                    return Err(Error::Parse("rule exponent must be positive".into()));
                }
                Ok(SpectrumRule::NegPower { gamma })
            } else {
                Err(Error::Parse(format!(
                    "unknown rule '{expr}' (expected -n, -n^gamma, -log(1+n))"
                )))
            }
        }
    }
}

/// Parse a scalar function spec against a horizon `tau` (possibly
/// infinite): `exp:amplitude,sigma`, `const:c`, `step:<csv path>`.
pub fn parse_function(spec: &str, tau: f64) -> Result<SampledFunction> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("exp:") {
        let (a, s) = rest
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("exp needs amplitude,sigma: '{spec}'")))?;
        let amplitude: f64 =
            a.trim().parse().map_err(|_| Error::Parse(format!("bad amplitude '{a}'")))?;
        let sigma: f64 =
            s.trim().parse().map_err(|_| Error::Parse(format!("bad sigma '{s}'")))?;
        return SampledFunction::exp_decay(amplitude, sigma, 0.0, tau);
    }
    if let Some(rest) = spec.strip_prefix("const:") {
        let c: f64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad constant '{rest}'")))?;
        if !tau.is_finite() {
            return Err(Error::Parse(
                "a constant needs a finite horizon (use --tau)".into(),
            ));
        }
        return Ok(SampledFunction::Step(StepFunction::constant(c, 0.0, tau)));
    }
    if let Some(path) = spec.strip_prefix("step:") {
        let text = std::fs::read_to_string(path.trim())?;
        return Ok(SampledFunction::Step(parse_step_csv(&text)?));
    }
    Err(Error::Parse(format!(
        "unknown function spec '{spec}' (expected exp:amplitude,sigma, const:c, step:<csv>)"
    )))
}

/// Step functions travel as CSV `breakpoint,value` rows: row `i` holds the
/// value on `(b_i, b_{i+1})`; the final row closes the support and must
/// carry value 0 (or an empty field).
pub fn parse_step_csv(text: &str) -> Result<StepFunction> {
    let mut breaks = vec![];
    let mut values = vec![];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (b, v) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected 'breakpoint,value'", lineno + 1)))?;
        let b: f64 = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad breakpoint '{b}'", lineno + 1)))?;
        let v: f64 = if v.trim().is_empty() {
            0.0
        } else {
            v.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad value '{v}'", lineno + 1)))?
        };
        breaks.push(b);
        values.push(v);
    }
    if breaks.len() < 2 {
        return Err(Error::Parse("a step function needs at least two rows".into()));
    }
    let last = values.pop().unwrap();
    if last != 0.0 {
        return Err(Error::Parse(
            "the final CSV row closes the support and must carry value 0".into(),
        ));
    }
    StepFunction::new(breaks, values)
}

/// Serialize a step function back to the CSV interchange form.
pub fn step_to_csv(f: &StepFunction) -> String {
    let mut out = String::new();
    for (b, v) in f.breaks().iter().zip(f.values().iter()) {
        out.push_str(&format!("{b},{v}\n"));
    }
    out.push_str(&format!("{},0\n", f.breaks().last().unwrap()));
    out
}

/// Parse `inf` or a positive real horizon.
pub fn parse_tau(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    let tau: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad horizon '{s}'")))?;
    if !(tau > 0.0) {
        return Err(Error::Parse(format!("horizon must be positive, got {tau}")));
    }
    Ok(tau)
}

/// Key = value configuration files mirroring the command-line flags.
/// `#` starts a comment; later keys override earlier ones.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = vec![];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
