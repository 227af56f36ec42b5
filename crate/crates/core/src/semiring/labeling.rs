//! Labeling functions and the labeling file format.
//!
//! ```text
//! # comment
//! semiring PROB # another comment
//! vars 2
//! 1 0.6 0.4
//! 2 0.3 0.7
//! ```

use std::fmt::Write as _;

use rand::{Rng, RngCore};
use thiserror::Error;

use super::{Builtin, Polynomial, SemiringDescriptor, SemiringError, SemiringParams, Value};
use crate::lit::{Literal, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabelError {
    #[error("literal {literal} is outside the labeled variables 1..={variable_count}")]
    OutOfRange { literal: Literal, variable_count: u32 },
    #[error("literal {literal} has no label: {semiring} labels positive literals only")]
    UnsupportedNegative { literal: Literal, semiring: String },
    #[error("variable {var} has no label for its negative literal")]
    MissingNegative { var: Var },
    #[error("variable {var}: {source}")]
    Carrier {
        var: Var,
        #[source]
        source: SemiringError,
    },
    #[error("{0}")]
    Config(String),
}

/// The labeling function α: one positive and at most one negative label per
/// variable `1..=variable_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeling {
    semiring: String,
    pos: Vec<Value>,
    neg: Vec<Option<Value>>,
}

impl Labeling {
    /// Validates labels against `desc`: every value must be in the carrier,
    /// and negative labels may be absent only for positive-only semirings.
    pub fn new(
        desc: &SemiringDescriptor,
        pos: Vec<Value>,
        neg: Vec<Option<Value>>,
    ) -> Result<Labeling, LabelError> {
        if pos.len() != neg.len() {
            return Err(LabelError::Config(format!(
                "{} positive labels but {} negative labels",
                pos.len(),
                neg.len()
            )));
        }
        for (i, (p, n)) in pos.iter().zip(&neg).enumerate() {
            let var = i as Var + 1;
            let carrier = |source| LabelError::Carrier { var, source };
            desc.check(p).map_err(carrier)?;
            match n {
                Some(n) => desc.check(n).map_err(carrier)?,
                None if desc.supports_negative_literals() => {
                    return Err(LabelError::MissingNegative { var })
                }
                None => {}
            }
        }
        Ok(Labeling {
            semiring: desc.name().to_string(),
            pos,
            neg,
        })
    }

    /// The parameter-free labelings: SAT (true/true), #SAT (1/1), SENS
    /// (x_v / 1−x_v), OBDD (v / ¬v), WHY ({v} / none), RA+ (x_v / none).
    pub fn canonical(desc: &SemiringDescriptor, n: u32) -> Result<Labeling, LabelError> {
        let mut pos = Vec::with_capacity(n as usize);
        let mut neg = Vec::with_capacity(n as usize);
        for v in 1..=n {
            let (p, q) = canonical_pair(desc, v)?;
            pos.push(p);
            neg.push(q);
        }
        Labeling::new(desc, pos, neg)
    }

    /// Labels derived from per-variable probabilities `probs[v-1]`: PROB, MPE
    /// and WMC use (p, 1−p); FUZZY uses (p, 1); GRAD uses (p, ±[v = k]) for
    /// its gradient index k.
    pub fn from_probabilities(desc: &SemiringDescriptor, probs: &[f64]) -> Result<Labeling, LabelError> {
        let mut pos = Vec::with_capacity(probs.len());
        let mut neg = Vec::with_capacity(probs.len());
        for (i, &p) in probs.iter().enumerate() {
            let v = i as Var + 1;
            let (a, b) = match desc.kind() {
                Some(Builtin::Prob | Builtin::Mpe | Builtin::Wmc) => (Value::Real(p), Value::Real(1.0 - p)),
                Some(Builtin::Fuzzy) => (Value::Real(p), Value::Real(1.0)),
                Some(Builtin::Grad) => grad_pair(desc, v, p),
                _ => {
                    return Err(LabelError::Config(format!(
                        "{} labels are not derived from probabilities",
                        desc.name()
                    )))
                }
            };
            pos.push(a);
            neg.push(Some(b));
        }
        Labeling::new(desc, pos, neg)
    }

    /// A random labeling of the shape each built-in task uses: probabilities
    /// in [0.01, 0.99] for PROB, MPE, GRAD and FUZZY; independent weights for
    /// WMC and kWEIGHT; path costs with α(¬v) = 0 (S-PATH) or ∞ (W-PATH); the
    /// canonical labeling for the rest.
    pub fn random(desc: &SemiringDescriptor, n: u32, rng: &mut dyn RngCore) -> Result<Labeling, LabelError> {
        let kind = desc
            .kind()
            .ok_or_else(|| LabelError::Config(format!("no random labeling for {}", desc.name())))?;
        let probs = |rng: &mut dyn RngCore| -> Vec<f64> { (0..n).map(|_| rng.gen_range(0.01..0.99)).collect() };
        match kind {
            Builtin::Prob | Builtin::Mpe | Builtin::Grad | Builtin::Fuzzy => {
                Labeling::from_probabilities(desc, &probs(rng))
            }
            Builtin::Wmc => {
                let pos = (0..n).map(|_| Value::Real(rng.gen_range(0.0..3.0))).collect();
                let neg = (0..n).map(|_| Some(Value::Real(rng.gen_range(0.0..3.0)))).collect();
                Labeling::new(desc, pos, neg)
            }
            Builtin::KWeight => {
                let k = desc.params().k.unwrap_or(0);
                let pos = (0..n).map(|_| Value::nat(rng.gen_range(0..=k))).collect();
                let neg = (0..n).map(|_| Some(Value::nat(rng.gen_range(0..=k)))).collect();
                Labeling::new(desc, pos, neg)
            }
            Builtin::ShortestPath | Builtin::WidestPath => {
                let other = if kind == Builtin::ShortestPath {
                    Value::nat(0)
                } else {
                    Value::infinity()
                };
                let pos = (0..n).map(|_| Value::nat(rng.gen_range(0..20))).collect();
                Labeling::new(desc, pos, vec![Some(other); n as usize])
            }
            _ => Labeling::canonical(desc, n),
        }
    }

    /// Replaces every absent negative label with e⊗, so that a negative
    /// literal contributes nothing to a product. Used to evaluate positive-only
    /// semirings on circuits that contain negative literals.
    pub fn with_neutral_negatives(&self, desc: &SemiringDescriptor) -> Labeling {
        let one = desc.one();
        Labeling {
            semiring: self.semiring.clone(),
            pos: self.pos.clone(),
            neg: self
                .neg
                .iter()
                .map(|n| Some(n.clone().unwrap_or_else(|| one.clone())))
                .collect(),
        }
    }

    pub fn semiring(&self) -> &str {
        &self.semiring
    }

    pub fn variable_count(&self) -> u32 {
        self.pos.len() as u32
    }

    pub fn pos(&self, v: Var) -> &Value {
        &self.pos[v as usize - 1]
    }

    pub fn neg(&self, v: Var) -> Option<&Value> {
        self.neg[v as usize - 1].as_ref()
    }

    /// α(literal).
    pub fn label(&self, literal: Literal) -> Result<&Value, LabelError> {
        let v = literal.var();
        if v == 0 || v > self.variable_count() {
            return Err(LabelError::OutOfRange {
                literal,
                variable_count: self.variable_count(),
            });
        }
        if literal.is_positive() {
            Ok(self.pos(v))
        } else {
            self.neg(v).ok_or_else(|| LabelError::UnsupportedNegative {
                literal,
                semiring: self.semiring.clone(),
            })
        }
    }
}

fn grad_pair(desc: &SemiringDescriptor, v: Var, p: f64) -> (Value, Value) {
    let d = if desc.grad_var() == Some(v) { 1.0 } else { 0.0 };
    (Value::Pair(p, d), Value::Pair(1.0 - p, -d))
}

fn canonical_pair(desc: &SemiringDescriptor, v: Var) -> Result<(Value, Option<Value>), LabelError> {
    Ok(match desc.kind() {
        Some(Builtin::Sat) => (Value::Bool(true), Some(Value::Bool(true))),
        Some(Builtin::Count) => (Value::nat(1), Some(Value::nat(1))),
        Some(Builtin::Sens) => {
            let x = Polynomial::var(v);
            let one_minus_x = Polynomial::one().add(&Polynomial::constant(-1.0).mul(&x));
            (Value::Poly(x), Some(Value::Poly(one_minus_x)))
        }
        Some(Builtin::Why) => (Value::set([v]), None),
        Some(Builtin::RaPlus) => (Value::Poly(Polynomial::var(v)), None),
        Some(Builtin::Obdd) => {
            let store = desc.store().expect("OBDD descriptors own a store");
            let mut s = store.lock().expect("diagram store poisoned");
            let x = s
                .mk_var(v)
                .map_err(|e| LabelError::Config(format!("OBDD label of variable {v}: {e}")))?;
            let nx = s.negate(x).expect("same store");
            (Value::Bdd(x), Some(Value::Bdd(nx)))
        }
        _ => {
            return Err(LabelError::Config(format!(
                "{} has no parameter-free labeling; supply weights",
                desc.name()
            )))
        }
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct LabelingFileError {
    pub line: usize,
    pub message: String,
}

fn file_err(line: usize, message: impl Into<String>) -> LabelingFileError {
    LabelingFileError {
        line,
        message: message.into(),
    }
}

/// Parses a labeling file into the semiring it names and the labeling.
///
/// Variables without a line get the canonical label when the semiring has one
/// (SAT, #SAT, SENS, OBDD, WHY, RA+). Values follow the grammar of
/// [`Value`]'s `Display`, plus: `x` for the variable's own indeterminate (SENS,
/// RA+), its singleton set (WHY) or its diagram (OBDD, with `~x` for the
/// negation); `-` for an absent negative label; and for GRAD a bare
/// probability `p`, read as `(p, ±[v = k])`.
pub fn parse_labeling(text: &str) -> Result<(SemiringDescriptor, Labeling), LabelingFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hl, header) = lines.next().ok_or_else(|| file_err(1, "missing `semiring` line"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("semiring") {
        return Err(file_err(hl, "first line must be `semiring <NAME> [params]`"));
    }
    let name = toks.next().ok_or_else(|| file_err(hl, "missing semiring name"))?;
    let mut params = SemiringParams::parse_tokens(toks).map_err(|m| file_err(hl, m))?;

    let (vl, vars_line) = lines.next().ok_or_else(|| file_err(hl + 1, "missing `vars <n>` line"))?;
    let n: u32 = match vars_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["vars", n] => n.parse().map_err(|_| file_err(vl, format!("bad variable count `{n}`")))?,
        _ => return Err(file_err(vl, "expected `vars <n>`")),
    };
    // Diagrams default to ascending order over the declared variables.
    if Builtin::from_name(name) == Some(Builtin::Obdd) && params.order.is_none() {
        params.order = Some((1..=n).collect());
    }
    let desc = SemiringDescriptor::builtin(name, &params).map_err(|e| file_err(hl, e.to_string()))?;

    let mut entries: Vec<Option<(Value, Option<Value>)>> = vec![None; n as usize];
    let mut last = vl;
    for (line, body) in lines {
        last = line;
        let toks: Vec<&str> = body.split_whitespace().collect();
        let [var, p, q] = toks.as_slice() else {
            return Err(file_err(line, "expected `<var> <pos-value> <neg-value>`"));
        };
        let v: Var = var
            .parse()
            .ok()
            .filter(|&v| v >= 1 && v <= n)
            .ok_or_else(|| file_err(line, format!("variable `{var}` out of range 1..={n}")))?;
        if entries[v as usize - 1].is_some() {
            return Err(file_err(line, format!("variable {v} labeled twice")));
        }
        let p = parse_value(&desc, p, v, false)
            .map_err(|m| file_err(line, m))?
            .ok_or_else(|| file_err(line, "`-` is only allowed for negative labels"))?;
        let q = parse_value(&desc, q, v, true).map_err(|m| file_err(line, m))?;
        for val in std::iter::once(&p).chain(q.as_ref()) {
            desc.check(val).map_err(|e| file_err(line, e.to_string()))?;
        }
        entries[v as usize - 1] = Some((p, q));
    }

    let mut pos = Vec::with_capacity(n as usize);
    let mut neg = Vec::with_capacity(n as usize);
    for (i, e) in entries.into_iter().enumerate() {
        let v = i as Var + 1;
        let (p, q) = match e {
            Some(e) => e,
            None => canonical_pair(&desc, v)
                .map_err(|_| file_err(last + 1, format!("variable {v} has no labels")))?,
        };
        pos.push(p);
        neg.push(q);
    }
    let lab = Labeling::new(&desc, pos, neg).map_err(|e| file_err(last, e.to_string()))?;
    Ok((desc, lab))
}

/// A `#` starts a comment at the beginning of a line or when followed by
/// whitespace, so that `semiring #SAT` still names the counting semiring.
fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && (line[..i].trim().is_empty() || bytes.get(i + 1).is_none_or(|c| c.is_ascii_whitespace())) {
            return &line[..i];
        }
    }
    line
}

fn parse_nat_inf(text: &str) -> Result<Value, String> {
    if text == "inf" {
        return Ok(Value::infinity());
    }
    text.parse::<u64>()
        .map(Value::nat)
        .map_err(|_| format!("expected a natural number or `inf`, found `{text}`"))
}

fn parse_real(text: &str) -> Result<f64, String> {
    text.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("expected a number, found `{text}`"))
}

/// Parses one label for variable `v` in the file grammar. `Ok(None)` is `-`.
pub fn parse_value(desc: &SemiringDescriptor, text: &str, v: Var, negative: bool) -> Result<Option<Value>, String> {
    if text == "-" {
        return if desc.supports_negative_literals() || !negative {
            Err(format!("{} needs a label here", desc.name()))
        } else {
            Ok(None)
        };
    }
    let kind = desc
        .kind()
        .ok_or_else(|| format!("no file syntax for {}", desc.name()))?;
    let value = match kind {
        Builtin::Sat => match text {
            "true" | "1" => Value::Bool(true),
            "false" | "0" => Value::Bool(false),
            _ => return Err(format!("expected `true` or `false`, found `{text}`")),
        },
        Builtin::Count | Builtin::KWeight => Value::nat(
            text.parse()
                .map_err(|_| format!("expected a natural number, found `{text}`"))?,
        ),
        Builtin::Wmc | Builtin::Prob | Builtin::Mpe | Builtin::Fuzzy => Value::Real(parse_real(text)?),
        Builtin::Sens | Builtin::RaPlus => Value::Poly(Polynomial::parse(text, Some(v))?),
        Builtin::Grad => match text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            Some(inner) => {
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| format!("expected `(a,b)`, found `{text}`"))?;
                Value::Pair(parse_real(a.trim())?, parse_real(b.trim())?)
            }
            None => {
                let d = if desc.grad_var() == Some(v) { 1.0 } else { 0.0 };
                Value::Pair(parse_real(text)?, if negative { -d } else { d })
            }
        },
        Builtin::ShortestPath | Builtin::WidestPath => parse_nat_inf(text)?,
        Builtin::Why => {
            if text == "x" {
                Value::set([v])
            } else {
                let inner = text
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| format!("expected a set `{{1,2}}`, found `{text}`"))?;
                let vars: Result<Vec<Var>, _> = inner
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| t.trim().parse::<Var>())
                    .collect();
                Value::set(vars.map_err(|_| format!("bad set `{text}`"))?)
            }
        }
        Builtin::Obdd => {
            let store = desc.store().expect("OBDD descriptors own a store");
            let mut s = store.lock().expect("diagram store poisoned");
            match text {
                "true" => s.one(),
                "false" => s.zero(),
                "x" => s.mk_var(v).map_err(|e| e.to_string())?,
                "~x" => {
                    let x = s.mk_var(v).map_err(|e| e.to_string())?;
                    s.negate(x).expect("same store")
                }
                _ => return Err(format!("expected `x`, `~x`, `true` or `false`, found `{text}`")),
            }
            .into()
        }
    };
    Ok(Some(value))
}

/// Writes `lab` in the labeling file format. OBDD labels must be a variable,
/// its negation or a constant.
pub fn write_labeling(desc: &SemiringDescriptor, lab: &Labeling) -> Result<String, String> {
    let mut out = String::new();
    let mut header = vec!["semiring".to_string(), desc.name().to_string()];
    header.extend(desc.params().to_tokens());
    writeln!(out, "{}", header.join(" ")).unwrap();
    writeln!(out, "vars {}", lab.variable_count()).unwrap();
    for v in 1..=lab.variable_count() {
        let p = format_label(desc, lab.pos(v), v)?;
        let q = match lab.neg(v) {
            Some(q) => format_label(desc, q, v)?,
            None => "-".to_string(),
        };
        writeln!(out, "{v} {p} {q}").unwrap();
    }
    Ok(out)
}

fn format_label(desc: &SemiringDescriptor, value: &Value, v: Var) -> Result<String, String> {
    let Value::Bdd(f) = value else {
        return Ok(value.to_string());
    };
    let store = desc.store().ok_or("diagram label without a store")?;
    let mut s = store.lock().expect("diagram store poisoned");
    if s.is_true(*f).map_err(|e| e.to_string())? {
        return Ok("true".into());
    }
    if s.is_false(*f).map_err(|e| e.to_string())? {
        return Ok("false".into());
    }
    let x = s.mk_var(v).map_err(|e| e.to_string())?;
    if *f == x {
        return Ok("x".into());
    }
    if *f == s.negate(x).expect("same store") {
        return Ok("~x".into());
    }
    Err(format!("label of variable {v} is not expressible in the file format"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn desc(name: &str, params: SemiringParams) -> SemiringDescriptor {
        SemiringDescriptor::builtin(name, &params).unwrap()
    }

    #[test]
    fn grad_labels() {
        let g = desc("grad", SemiringParams::with_grad_var(1));
        let lab = Labeling::from_probabilities(&g, &[0.6, 0.3]).unwrap();
        assert_eq!(lab.label(Literal::positive(1)).unwrap(), &Value::Pair(0.6, 1.0));
        assert_eq!(lab.label(Literal::negative(1)).unwrap(), &Value::Pair(0.4, -1.0));
        assert_eq!(lab.label(Literal::positive(2)).unwrap(), &Value::Pair(0.3, 0.0));
    }

    #[test]
    fn why_is_positive_only() {
        let w = desc("why", SemiringParams::default());
        let lab = Labeling::canonical(&w, 3).unwrap();
        assert_eq!(lab.label(Literal::positive(3)).unwrap(), &Value::set([3]));
        assert!(matches!(
            lab.label(Literal::negative(3)),
            Err(LabelError::UnsupportedNegative { .. })
        ));
        assert!(matches!(
            lab.label(Literal::positive(4)),
            Err(LabelError::OutOfRange { .. })
        ));
        let neutral = lab.with_neutral_negatives(&w);
        assert_eq!(neutral.label(Literal::negative(3)).unwrap(), &Value::set([]));
    }

    #[test]
    fn missing_negative_label_is_rejected() {
        let p = desc("prob", SemiringParams::default());
        assert_eq!(
            Labeling::new(&p, vec![Value::Real(0.5)], vec![None]),
            Err(LabelError::MissingNegative { var: 1 })
        );
        assert!(matches!(
            Labeling::new(&p, vec![Value::Bool(true)], vec![Some(Value::Real(0.5))]),
            Err(LabelError::Carrier { var: 1, .. })
        ));
    }

    #[test]
    fn parse_prob_file() {
        let (d, lab) = parse_labeling("# weights\nsemiring PROB\nvars 2\n1 0.6 0.4\n2 0.3 0.7 # b\n").unwrap();
        assert_eq!(d.kind(), Some(Builtin::Prob));
        assert_eq!(lab.pos(2), &Value::Real(0.3));
        assert_eq!(lab.neg(1), Some(&Value::Real(0.4)));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = parse_labeling("semiring PROB\nvars 2\n1 0.6 0.4\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_labeling("semiring PROB\nvars 1\n1 0.6\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_labeling("semiring FUZZY\nvars 1\n1 1.5 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_labeling("semiring kWEIGHT\nvars 1\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_labeling("semiring WHY\nvars 1\n1 {1} -\n1 {1} -\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_labeling("semiring PROB\nvars 1\n1 0.5 -\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn parse_special_tokens() {
        let (_, lab) = parse_labeling("semiring SENS\nvars 2\n1 x 1-x\n").unwrap();
        assert_eq!(lab.neg(1).unwrap().to_string(), "1-x1");
        assert_eq!(lab.pos(2).to_string(), "x2");
        let (_, lab) = parse_labeling("semiring WHY\nvars 2\n1 x -\n2 {2,5} -\n").unwrap();
        assert_eq!(lab.pos(1), &Value::set([1]));
        assert_eq!(lab.neg(2), None);
        let (d, lab) = parse_labeling("semiring GRAD grad_var=2\nvars 2\n1 0.6 0.4\n2 0.3 (0.7,-1)\n").unwrap();
        assert_eq!(d.grad_var(), Some(2));
        assert_eq!(lab.pos(2), &Value::Pair(0.3, 1.0));
        assert_eq!(lab.neg(1), Some(&Value::Pair(0.4, 0.0)));
        let (_, lab) = parse_labeling("semiring S-PATH\nvars 1\n1 5 inf\n").unwrap();
        assert_eq!(lab.neg(1), Some(&Value::infinity()));
        let (d, lab) = parse_labeling("semiring OBDD order=2,1\nvars 2\n1 ~x x\n").unwrap();
        let store = d.store().unwrap().lock().unwrap();
        assert_eq!(store.decision_count(*match lab.pos(1) {
            Value::Bdd(f) => f,
            _ => unreachable!(),
        }).unwrap(), 1);
    }

    #[test]
    fn write_then_parse_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = SemiringParams {
            k: Some(6),
            grad_var: Some(2),
            order: Some(vec![3, 1, 2]),
        };
        for b in Builtin::ALL {
            let d = desc(b.name(), params.clone());
            let lab = Labeling::random(&d, 3, &mut rng).unwrap();
            let text = write_labeling(&d, &lab).unwrap();
            let (d2, lab2) = parse_labeling(&text).unwrap();
            assert_eq!(d2.name(), d.name(), "{text}");
            if b == Builtin::Obdd {
                // Diagrams live in a fresh store; compare the text instead.
                assert_eq!(write_labeling(&d2, &lab2).unwrap(), text);
            } else {
                assert_eq!(lab2, lab, "{text}");
            }
        }
    }
}
