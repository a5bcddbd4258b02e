//! Scenario configuration: a line-based `key = value` format with a tiny
//! expression grammar for weights (primitive families combined with `*` and
//! `^` only, keeping gradients analytic).  q is always derived from the
//! balance relation and never accepted as input.

use conewsi::{ConvexCone, HomogeneousWeight};
use std::fmt;

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "{}", self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

/// Tasks a scenario can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    Validate,
    CheckC0,
    CheckC1,
    K0,
    Sharp,
    Verify,
    Necessity,
    SpectralGap,
    Ckn,
    Heisenberg,
    Transport,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Validate => "validate",
            Task::CheckC0 => "check_c0",
            Task::CheckC1 => "check_c1",
            Task::K0 => "k0",
            Task::Sharp => "sharp",
            Task::Verify => "verify",
            Task::Necessity => "necessity",
            Task::SpectralGap => "spectral_gap",
            Task::Ckn => "ckn",
            Task::Heisenberg => "heisenberg",
            Task::Transport => "transport",
        }
    }

    fn parse(s: &str) -> Option<Task> {
        Some(match s {
            "validate" => Task::Validate,
            "check_c0" => Task::CheckC0,
            "check_c1" => Task::CheckC1,
            "k0" => Task::K0,
            "sharp" => Task::Sharp,
            "verify" => Task::Verify,
            "necessity" => Task::Necessity,
            "spectral_gap" => Task::SpectralGap,
            "ckn" => Task::Ckn,
            "heisenberg" => Task::Heisenberg,
            "transport" => Task::Transport,
            _ => return None,
        })
    }
}

/// Numeric knobs with defaults; all randomized work keys off `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct Knobs {
    pub seed: u64,
    pub samples: usize,
    pub grid: usize,
    pub budget: usize,
    pub deltas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub shift_direction: Option<Vec<f64>>,
    pub region: Option<(Vec<f64>, Vec<f64>)>,
    pub ckn: Option<(usize, f64, f64, f64)>,
}

impl Default for Knobs {
    fn default() -> Self {
        Knobs {
            seed: 42,
            samples: 20_000,
            grid: 0, // 0 = resolution chosen by dimension at run time
            budget: 200,
            deltas: vec![4.0, 8.0, 16.0, 32.0, 64.0, 128.0],
            epsilons: (0..7).map(|k| 1e-20 * 1e-40f64.powi(k)).collect(),
            shift_direction: None,
            region: None,
            ckn: None,
        }
    }
}

/// A fully validated scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub cone: ConvexCone,
    pub omega: HomogeneousWeight,
    pub sigma: HomogeneousWeight,
    pub n: usize,
    pub p: f64,
    pub tau: f64,
    pub alpha: f64,
    pub tasks: Vec<Task>,
    pub knobs: Knobs,
}

// ---------------------------------------------------------------------
// Number / angle / list parsing helpers
// ---------------------------------------------------------------------

fn parse_number(s: &str, line: usize) -> Result<f64, ConfigError> {
    let t = s.trim();
    // Angles may use pi: "pi", "pi/2", "0.75pi", "-pi/4".
    if let Some(rest) = t.strip_suffix("pi") {
        let coef = if rest.is_empty() || rest == "-" {
            if rest == "-" {
                -1.0
            } else {
                1.0
            }
        } else {
            rest.parse::<f64>()
                .map_err(|_| err(line, format!("bad number {t:?}")))?
        };
        return Ok(coef * std::f64::consts::PI);
    }
    if let Some((head, tail)) = t.split_once('/') {
        if head.trim_end().ends_with("pi") || head.trim() == "pi" {
            let base = parse_number(head, line)?;
            let den: f64 = tail
                .trim()
                .parse()
                .map_err(|_| err(line, format!("bad number {t:?}")))?;
            return Ok(base / den);
        }
    }
    t.parse()
        .map_err(|_| err(line, format!("bad number {t:?}")))
}

fn parse_number_list(s: &str, line: usize) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|part| parse_number(part, line))
        .collect()
}

/// Splits `head(args)` into the name and raw argument text.
fn split_call(s: &str, line: usize) -> Result<(&str, &str), ConfigError> {
    let open = s
        .find('(')
        .ok_or_else(|| err(line, format!("expected '(' in {s:?}")))?;
    if !s.ends_with(')') {
        return Err(err(line, format!("expected ')' at the end of {s:?}")));
    }
    Ok((s[..open].trim(), &s[open + 1..s.len() - 1]))
}

// ---------------------------------------------------------------------
// Cone syntax:
//   full_space
//   orthant(1,1)               1 = coordinate forced positive, 0 = free
//   halfspaces((0,1),(1,0))    unit inward normals
//   sector(0, pi)              boundary angles, n = 2
// ---------------------------------------------------------------------

fn parse_cone(s: &str, n: usize, line: usize) -> Result<ConvexCone, ConfigError> {
    let t = s.trim();
    if t == "full_space" {
        return ConvexCone::full_space(n).map_err(|e| err(line, e.to_string()));
    }
    let (name, args) = split_call(t, line)?;
    match name {
        "orthant" => {
            let mask: Vec<bool> = args
                .split(',')
                .map(|p| match p.trim() {
                    "1" => Ok(true),
                    "0" => Ok(false),
                    other => Err(err(line, format!("orthant mask entries are 0/1, got {other:?}"))),
                })
                .collect::<Result<_, _>>()?;
            if mask.len() != n {
                return Err(err(line, format!("orthant mask has {} entries, n = {n}", mask.len())));
            }
            ConvexCone::orthant_product(mask).map_err(|e| err(line, e.to_string()))
        }
        "halfspaces" => {
            let normals = parse_tuple_list(args, line)?;
            ConvexCone::halfspace_intersection(n, normals).map_err(|e| err(line, e.to_string()))
        }
        "sector" => {
            let angles = parse_number_list(args, line)?;
            if angles.len() != 2 || n != 2 {
                return Err(err(line, "sector(start, end) requires n = 2".to_string()));
            }
            ConvexCone::planar_sector(angles[0], angles[1]).map_err(|e| err(line, e.to_string()))
        }
        other => Err(err(line, format!("unknown cone shape {other:?}"))),
    }
}

/// Parses "(a,b),(c,d),…" into vectors.
fn parse_tuple_list(s: &str, line: usize) -> Result<Vec<Vec<f64>>, ConfigError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => {
                if depth == 0 {
                    start = Some(i + 1);
                }
                depth += 1;
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| err(line, "unbalanced parentheses"))?;
                if depth == 0 {
                    let inner = &s[start.take().unwrap()..i];
                    out.push(parse_number_list(inner, line)?);
                }
            }
            _ => {}
        }
    }
    if depth != 0 || out.is_empty() {
        return Err(err(line, format!("expected tuples like (a,b) in {s:?}")));
    }
    Ok(out)
}

fn cone_to_text(cone: &ConvexCone) -> String {
    match cone {
        ConvexCone::FullSpace { .. } => "full_space".to_string(),
        ConvexCone::Orthant { positive } => {
            let mask: Vec<&str> = positive.iter().map(|&b| if b { "1" } else { "0" }).collect();
            format!("orthant({})", mask.join(","))
        }
        ConvexCone::HalfspaceIntersection { normals, .. } => {
            let parts: Vec<String> = normals
                .iter()
                .map(|nrm| {
                    let cs: Vec<String> = nrm.iter().map(|v| format!("{v}")).collect();
                    format!("({})", cs.join(","))
                })
                .collect();
            format!("halfspaces({})", parts.join(","))
        }
        ConvexCone::PlanarSector { start, end } => format!("sector({start}, {end})"),
    }
}

// ---------------------------------------------------------------------
// Weight expression grammar:
//   expr := term ('*' term)*
//   term := atom ('^' number)?
//   atom := constant(c) | monomial(e1,…,en) | radial(t) | sum(t)
//         | marcus_lopes(t) | '(' expr ')'
// ---------------------------------------------------------------------

struct WeightParser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    dim: usize,
}

impl<'a> WeightParser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ConfigError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(err(
                self.line,
                format!("expected {c:?} at column {} of weight expression", self.pos + 1),
            ))
        }
    }

    fn parse_expr(&mut self) -> Result<HomogeneousWeight, ConfigError> {
        let mut factors = vec![self.parse_term()?];
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                factors.push(self.parse_term()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            HomogeneousWeight::product(factors)
        })
    }

    fn parse_term(&mut self) -> Result<HomogeneousWeight, ConfigError> {
        let atom = self.parse_atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let num = self.parse_float()?;
            Ok(HomogeneousWeight::power(atom, num))
        } else {
            Ok(atom)
        }
    }

    fn parse_float(&mut self) -> Result<f64, ConfigError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || "+-.eE".contains(c) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| err(self.line, format!("bad exponent near column {start}")))
    }

    fn parse_atom(&mut self) -> Result<HomogeneousWeight, ConfigError> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.pos += 1;
            let inner = self.parse_expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let name = &self.src[start..self.pos];
        self.expect('(')?;
        let args_start = self.pos;
        let mut depth = 1usize;
        while let Some(c) = self.peek() {
            self.pos += c.len_utf8();
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(err(self.line, "unterminated weight family arguments"));
        }
        let args = &self.src[args_start..self.pos - 1];
        let nums = parse_number_list(args, self.line)?;
        match name {
            "constant" => {
                if nums.len() != 1 || !(nums[0] > 0.0) {
                    return Err(err(self.line, "constant(c) needs one positive value"));
                }
                Ok(HomogeneousWeight::constant(nums[0]))
            }
            "monomial" => {
                if nums.len() != self.dim {
                    return Err(err(
                        self.line,
                        format!("monomial needs {} exponents, got {}", self.dim, nums.len()),
                    ));
                }
                Ok(HomogeneousWeight::monomial(nums))
            }
            "radial" => {
                if nums.len() != 1 {
                    return Err(err(self.line, "radial(t) needs one value"));
                }
                Ok(HomogeneousWeight::radial_power(nums[0]))
            }
            "sum" => {
                if nums.len() != 1 {
                    return Err(err(self.line, "sum(t) needs one value"));
                }
                Ok(HomogeneousWeight::sum_power(nums[0]))
            }
            "marcus_lopes" => {
                if nums.len() != 1 {
                    return Err(err(self.line, "marcus_lopes(t) needs one value"));
                }
                Ok(HomogeneousWeight::marcus_lopes(nums[0]))
            }
            other => Err(err(self.line, format!("unknown weight family {other:?}"))),
        }
    }
}

pub fn parse_weight(s: &str, dim: usize, line: usize) -> Result<HomogeneousWeight, ConfigError> {
    let mut p = WeightParser {
        src: s,
        pos: 0,
        line,
        dim,
    };
    let w = p.parse_expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(err(line, format!("trailing input in weight expression {s:?}")));
    }
    Ok(w)
}

pub fn weight_to_text(w: &HomogeneousWeight) -> String {
    match w {
        HomogeneousWeight::Constant(c) => format!("constant({c})"),
        HomogeneousWeight::Monomial(e) => {
            let parts: Vec<String> = e.iter().map(|v| format!("{v}")).collect();
            format!("monomial({})", parts.join(","))
        }
        HomogeneousWeight::RadialPower(t) => format!("radial({t})"),
        HomogeneousWeight::SumPower(t) => format!("sum({t})"),
        HomogeneousWeight::MarcusLopes(t) => format!("marcus_lopes({t})"),
        HomogeneousWeight::Product(ws) => ws
            .iter()
            .map(weight_to_text)
            .collect::<Vec<_>>()
            .join(" * "),
        HomogeneousWeight::Power(base, s) => format!("({})^{s}", weight_to_text(base)),
    }
}

// ---------------------------------------------------------------------
// Top-level config
// ---------------------------------------------------------------------

/// Parses a scenario config; the first error carries its line number.
pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    let mut name = None;
    let mut cone_src: Option<(String, usize)> = None;
    let mut omega_src: Option<(String, usize)> = None;
    let mut sigma_src: Option<(String, usize)> = None;
    let mut n = None;
    let mut p = None;
    let mut tau = None;
    let mut alpha = None;
    let mut tasks: Option<(Vec<Task>, usize)> = None;
    let mut knobs = Knobs::default();

    for (idx, raw) in text.lines().enumerate() {
        let lno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(lno, format!("expected 'key = value', got {line:?}")))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "name" => name = Some(value.to_string()),
            "cone" => cone_src = Some((value.to_string(), lno)),
            "omega" => omega_src = Some((value.to_string(), lno)),
            "sigma" => sigma_src = Some((value.to_string(), lno)),
            "n" => {
                n = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| err(lno, format!("bad integer {value:?}")))?,
                )
            }
            "p" => p = Some(parse_number(value, lno)?),
            "tau" => tau = Some(parse_number(value, lno)?),
            "alpha" => alpha = Some(parse_number(value, lno)?),
            "q" => {
                return Err(err(
                    lno,
                    "q is derived from the balance relation and cannot be supplied",
                ))
            }
            "tasks" => {
                let mut list = Vec::new();
                for part in value.split(',') {
                    let t = part.trim();
                    if t.is_empty() {
                        continue;
                    }
                    list.push(
                        Task::parse(t).ok_or_else(|| err(lno, format!("unknown task {t:?}")))?,
                    );
                }
                tasks = Some((list, lno));
            }
            "seed" => {
                knobs.seed = value
                    .parse()
                    .map_err(|_| err(lno, format!("bad seed {value:?}")))?
            }
            "samples" => {
                knobs.samples = value
                    .parse()
                    .map_err(|_| err(lno, format!("bad sample count {value:?}")))?
            }
            "grid" => {
                knobs.grid = value
                    .parse()
                    .map_err(|_| err(lno, format!("bad grid resolution {value:?}")))?
            }
            "budget" => {
                knobs.budget = value
                    .parse()
                    .map_err(|_| err(lno, format!("bad budget {value:?}")))?
            }
            "deltas" => knobs.deltas = parse_number_list(value, lno)?,
            "epsilons" => knobs.epsilons = parse_number_list(value, lno)?,
            "shift_direction" => {
                let tuples = parse_tuple_list(value, lno)?;
                if tuples.len() != 1 {
                    return Err(err(lno, "shift_direction takes one tuple"));
                }
                knobs.shift_direction = Some(tuples[0].clone());
            }
            "region" => {
                let tuples = parse_tuple_list(value, lno)?;
                if tuples.len() != 2 {
                    return Err(err(lno, "region takes two tuples (lo), (hi)"));
                }
                knobs.region = Some((tuples[0].clone(), tuples[1].clone()));
            }
            "ckn" => {
                let nums = parse_tuple_list(value, lno)?;
                if nums.len() != 1 || nums[0].len() != 4 {
                    return Err(err(lno, "ckn takes one tuple (n, p, beta, gamma)"));
                }
                let t = &nums[0];
                knobs.ckn = Some((t[0] as usize, t[1], t[2], t[3]));
            }
            other => return Err(err(lno, format!("unknown key {other:?}"))),
        }
    }

    let n = n.ok_or_else(|| err(0, "missing key: n"))?;
    let p = p.ok_or_else(|| err(0, "missing key: p"))?;
    let tau = tau.ok_or_else(|| err(0, "missing key: tau"))?;
    let alpha = alpha.ok_or_else(|| err(0, "missing key: alpha"))?;
    let (cone_text, cone_line) = cone_src.ok_or_else(|| err(0, "missing key: cone"))?;
    let cone = parse_cone(&cone_text, n, cone_line)?;
    let (omega_text, omega_line) = omega_src.ok_or_else(|| err(0, "missing key: omega"))?;
    let omega = parse_weight(&omega_text, n, omega_line)?;
    let (sigma_text, sigma_line) = sigma_src.ok_or_else(|| err(0, "missing key: sigma"))?;
    let sigma = parse_weight(&sigma_text, n, sigma_line)?;

    // Degrees must match the declared exponents.
    if (omega.degree() - tau).abs() > 1e-9 * (1.0 + tau.abs()) {
        return Err(err(
            omega_line,
            format!("omega has degree {}, but tau = {tau}", omega.degree()),
        ));
    }
    if (sigma.degree() - alpha).abs() > 1e-9 * (1.0 + alpha.abs()) {
        return Err(err(
            sigma_line,
            format!("sigma has degree {}, but alpha = {alpha}", sigma.degree()),
        ));
    }
    if let Some(dir) = &knobs.shift_direction {
        if dir.len() != n {
            return Err(err(0, "shift_direction dimension differs from n"));
        }
    }

    let (task_list, _) = tasks.unwrap_or((Vec::new(), 0));
    Ok(Scenario {
        name: name.unwrap_or_else(|| "scenario".to_string()),
        cone,
        omega,
        sigma,
        n,
        p,
        tau,
        alpha,
        tasks: task_list,
        knobs,
    })
}

/// Canonical text form; `parse_config(emit_config(s))` reproduces `s`.
pub fn emit_config(s: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!("name = {}\n", s.name));
    out.push_str(&format!("n = {}\n", s.n));
    out.push_str(&format!("p = {}\n", s.p));
    out.push_str(&format!("tau = {}\n", s.tau));
    out.push_str(&format!("alpha = {}\n", s.alpha));
    out.push_str(&format!("cone = {}\n", cone_to_text(&s.cone)));
    out.push_str(&format!("omega = {}\n", weight_to_text(&s.omega)));
    out.push_str(&format!("sigma = {}\n", weight_to_text(&s.sigma)));
    if !s.tasks.is_empty() {
        let names: Vec<&str> = s.tasks.iter().map(|t| t.name()).collect();
        out.push_str(&format!("tasks = {}\n", names.join(", ")));
    }
    let d = Knobs::default();
    let k = &s.knobs;
    if k.seed != d.seed {
        out.push_str(&format!("seed = {}\n", k.seed));
    }
    if k.samples != d.samples {
        out.push_str(&format!("samples = {}\n", k.samples));
    }
    if k.grid != d.grid {
        out.push_str(&format!("grid = {}\n", k.grid));
    }
    if k.budget != d.budget {
        out.push_str(&format!("budget = {}\n", k.budget));
    }
    if k.deltas != d.deltas {
        let parts: Vec<String> = k.deltas.iter().map(|v| format!("{v}")).collect();
        out.push_str(&format!("deltas = {}\n", parts.join(", ")));
    }
    if k.epsilons != d.epsilons {
        let parts: Vec<String> = k.epsilons.iter().map(|v| format!("{v}")).collect();
        out.push_str(&format!("epsilons = {}\n", parts.join(", ")));
    }
    if let Some(dir) = &k.shift_direction {
        let parts: Vec<String> = dir.iter().map(|v| format!("{v}")).collect();
        out.push_str(&format!("shift_direction = ({})\n", parts.join(", ")));
    }
    if let Some((lo, hi)) = &k.region {
        let l: Vec<String> = lo.iter().map(|v| format!("{v}")).collect();
        let h: Vec<String> = hi.iter().map(|v| format!("{v}")).collect();
        out.push_str(&format!("region = ({}), ({})\n", l.join(", "), h.join(", ")));
    }
    if let Some((cn, cp, cb, cg)) = &k.ckn {
        out.push_str(&format!("ckn = ({cn}, {cp}, {cb}, {cg})\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASSICAL: &str = "\
name = classical
cone = full_space
omega = constant(1)
sigma = constant(1)
n = 3
p = 2
tau = 0
alpha = 0
tasks = validate, k0
";

    #[test]
    fn minimal_classical_config() {
        let s = parse_config(CLASSICAL).unwrap();
        assert_eq!(s.name, "classical");
        assert_eq!(s.n, 3);
        assert_eq!(s.tasks, vec![Task::Validate, Task::K0]);
        assert!(s.omega.is_constant());
    }

    #[test]
    fn heisenberg_config_derives_q4() {
        let text = "\
name = heisenberg-p2
cone = halfspaces((0,1))
omega = constant(1)
sigma = monomial(0, 1)
n = 2
p = 2
tau = 0
alpha = 1
tasks = validate, check_c0, k0
";
        let s = parse_config(text).unwrap();
        let exps = conewsi::validate_exponents(s.n, s.p, s.tau, s.alpha).unwrap();
        assert!((exps.q - 4.0).abs() < 1e-12);
        assert!((exps.n_a - 4.0).abs() < 1e-9);
    }

    #[test]
    fn q_cannot_be_supplied() {
        let text = format!("{CLASSICAL}q = 6\n");
        let e = parse_config(&text).unwrap_err();
        assert!(e.message.contains("derived"), "{e}");
        assert_eq!(e.line, 10);
    }

    #[test]
    fn unknown_keys_rejected_with_line() {
        let text = format!("{CLASSICAL}zzz = 1\n");
        let e = parse_config(&text).unwrap_err();
        assert_eq!(e.line, 10);
        assert!(e.message.contains("unknown key"), "{e}");
    }

    #[test]
    fn degree_mismatch_rejected() {
        let text = "\
name = bad
cone = orthant(1,1)
omega = monomial(1, 1)
sigma = constant(1)
n = 2
p = 2
tau = 1
alpha = 0
";
        let e = parse_config(text).unwrap_err();
        assert!(e.message.contains("degree"), "{e}");
        assert_eq!(e.line, 3);
    }

    #[test]
    fn weight_grammar_products_and_powers() {
        let w = parse_weight("(monomial(1,1))^0.5 * radial(-0.25)", 2, 1).unwrap();
        assert!((w.degree() - 0.75).abs() < 1e-12);
        let again = parse_weight(&weight_to_text(&w), 2, 1).unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn sector_accepts_pi() {
        let text = "\
name = halfplane
cone = sector(0, pi)
omega = monomial(0, 1)
sigma = monomial(0, 1)
n = 2
p = 1
tau = 1
alpha = 1
";
        let s = parse_config(text).unwrap();
        match s.cone {
            ConvexCone::PlanarSector { start, end } => {
                assert_eq!(start, 0.0);
                assert!((end - std::f64::consts::PI).abs() < 1e-15);
            }
            other => panic!("unexpected cone {other:?}"),
        }
    }

    #[test]
    fn round_trip_through_emit() {
        let text = "\
name = round-trip
cone = orthant(1,1)
omega = monomial(1,1)
sigma = (monomial(1,1))^0.5 * radial(1)
n = 2
p = 2
tau = 2
alpha = 2
tasks = validate, check_c0, k0, verify
seed = 7
samples = 5000
region = (0.25, 0.25), (1.75, 1.75)
ckn = (3, 2, 0, -0.5)
";
        let s = parse_config(text).unwrap();
        let emitted = emit_config(&s);
        let back = parse_config(&emitted).unwrap();
        assert_eq!(s, back);
    }
}
