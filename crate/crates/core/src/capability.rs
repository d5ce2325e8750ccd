//! The group-facing layer: presentations of class-two exponent-p groups,
//! their commutator-relation subspace, and the capability decision.
//!
//! A presentation on generators `g_1..g_n` lists relators among the
//! commutators `[g_j, g_i]`; `[x_j, x_i]` corresponds to the basis vector
//! `v_ji` of `V(n)`. The group is capable iff the span of the relators is a
//! closed subspace.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::closure::closure;
use crate::error::{Error, Result};
use crate::linalg::{Fp, Subspace};
use crate::reduce::{
    block_is_closed, block_split, cancel_central, central_lines, dimension_tests, n4_dim5_rule,
    ReductionStep, ReductionTrace, StepKind,
};
use crate::spaces::SpaceContext;

/// Direct closure is always recomputed as a cross-check up to this dim V(n).
const CROSS_CHECK_MAX_DIM_V: usize = 21;

/// One term `c·[x_j, x_i]` with `j > i` (1-based) and `c` a residue mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coeff: u32,
    pub j: usize,
    pub i: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub p: Fp,
    pub n: usize,
    pub relators: Vec<Vec<Term>>,
}

impl Presentation {
    /// Builds and validates a presentation from `(coefficient, j, i)` terms.
    pub fn new(p: u64, n: usize, relators: &[&[(i64, usize, usize)]]) -> Result<Self> {
        let field = Fp::new(p)?;
        if n == 0 {
            return Err(Error::TooFewGenerators { n, min: 1 });
        }
        let mut out = Vec::with_capacity(relators.len());
        for rel in relators {
            let mut terms = Vec::with_capacity(rel.len());
            for &(c, j, i) in rel.iter() {
                if i == 0 || j > n {
                    return Err(Error::IndexOutOfRange {
                        index: j.max(i),
                        max: n,
                    });
                }
                if i >= j {
                    return Err(Error::Precondition(format!(
                        "bracket [{j},{i}] must have j > i"
                    )));
                }
                terms.push(Term {
                    coeff: field.reduce(c),
                    j,
                    i,
                });
            }
            out.push(terms);
        }
        Ok(Self {
            p: field,
            n,
            relators: out,
        })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.chars.next();
                Ok(())
            }
            Some(c) => Err(parse_err(
                self.line,
                format!("expected `{want}`, found `{c}`"),
            )),
            None => Err(parse_err(
                self.line,
                format!("expected `{want}`, found end of line"),
            )),
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some((_, c)) = self.chars.next_if(|(_, c)| c.is_ascii_digit()) {
            digits.push(c);
        }
        if digits.is_empty() {
            return Err(parse_err(self.line, "expected a number"));
        }
        digits
            .parse()
            .map_err(|_| parse_err(self.line, format!("number `{digits}` is too large")))
    }
}

fn parse_relator(body: &str, line: usize, field: Fp, n: usize) -> Result<Vec<Term>> {
    let p = field.modulus() as u64;
    let mut cur = Cursor {
        chars: body.char_indices().peekable(),
        line,
    };
    let mut terms = Vec::new();
    loop {
        let negative = match cur.peek() {
            None if terms.is_empty() => return Err(parse_err(line, "relator has no terms")),
            None => break,
            Some('+') => {
                cur.chars.next();
                false
            }
            Some('-') => {
                cur.chars.next();
                true
            }
            Some(_) if terms.is_empty() => false,
            Some(c) => return Err(parse_err(line, format!("expected `+` or `-`, found `{c}`"))),
        };
        let coeff = match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let c = cur.number()?;
                if c == 0 || c >= p {
                    return Err(parse_err(line, format!("coefficient {c} outside [1, {p})")));
                }
                cur.expect('*')?;
                c as u32
            }
            _ => 1,
        };
        cur.expect('[')?;
        let j = cur.number()? as usize;
        cur.expect(',')?;
        let i = cur.number()? as usize;
        cur.expect(']')?;
        if i >= j {
            return Err(parse_err(
                line,
                format!("bracket [{j},{i}] must have j > i"),
            ));
        }
        if i == 0 || j > n {
            return Err(parse_err(
                line,
                format!("bracket [{j},{i}] has an index outside 1..={n}"),
            ));
        }
        let coeff = if negative { field.neg(coeff) } else { coeff };
        terms.push(Term { coeff, j, i });
    }
    Ok(terms)
}

/// Parses the line-oriented presentation format:
///
/// ```text
/// # comment
/// p 5
/// n 4
/// rel [2,1] - [4,3]
/// rel 2*[3,1] + [4,2]
/// ```
pub fn parse(text: &str) -> Result<Presentation> {
    let mut field: Option<Fp> = None;
    let mut n: Option<usize> = None;
    let mut relators = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        match (key, field, n) {
            ("p", None, _) => {
                let value: u64 = rest
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid prime `{rest}`")))?;
                field =
                    Some(Fp::new(value).map_err(|_| {
                        parse_err(line, format!("p = {value} is not an odd prime"))
                    })?);
            }
            ("n", Some(_), None) => {
                let value: usize = rest
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid generator count `{rest}`")))?;
                if value == 0 {
                    return Err(parse_err(line, "generator count must be at least 1"));
                }
                n = Some(value);
            }
            ("rel", Some(f), Some(n)) => relators.push(parse_relator(rest, line, f, n)?),
            ("p", Some(_), _) | ("n", _, Some(_)) => {
                return Err(parse_err(line, format!("duplicate `{key}` line")))
            }
            (_, None, _) => return Err(parse_err(line, "first line must be `p <odd prime>`")),
            (_, Some(_), None) => {
                return Err(parse_err(line, "second line must be `n <generators>`"))
            }
            _ => return Err(parse_err(line, format!("unknown directive `{key}`"))),
        }
    }
    match (field, n) {
        (Some(p), Some(n)) => Ok(Presentation { p, n, relators }),
        (None, _) => Err(parse_err(last_line.max(1), "missing `p` line")),
        (Some(_), None) => Err(parse_err(last_line.max(1), "missing `n` line")),
    }
}

/// Parses a raw subspace of `V(n)`:
///
/// ```text
/// ambient 4
/// p 3
/// 1 0 0 0 0 0
/// 0 1 0 0 0 2
/// ```
///
/// `ambient` gives the generator count `n`; each row has `C(n, 2)`
/// coefficients in `v`-index order. The `p` line may be omitted when
/// `default_p` is supplied; a `p` line in the text takes precedence.
pub fn parse_raw_subspace(text: &str, default_p: Option<u64>) -> Result<(SpaceContext, Subspace)> {
    let mut n: Option<usize> = None;
    let mut p: Option<u64> = None;
    let mut rows: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let first = words.next().unwrap_or_default();
        match first {
            "ambient" | "p" => {
                let value = words
                    .next()
                    .and_then(|w| w.parse::<u64>().ok())
                    .ok_or_else(|| {
                        parse_err(line, format!("`{first}` needs a positive integer"))
                    })?;
                if words.next().is_some() {
                    return Err(parse_err(line, format!("trailing input after `{first}`")));
                }
                if first == "ambient" {
                    if n.is_some() {
                        return Err(parse_err(line, "duplicate `ambient` line"));
                    }
                    n = Some(value as usize);
                } else {
                    if !rows.is_empty() || p.is_some() {
                        return Err(parse_err(line, "`p` must precede the rows and appear once"));
                    }
                    Fp::new(value)
                        .map_err(|_| parse_err(line, format!("p = {value} is not an odd prime")))?;
                    p = Some(value);
                }
            }
            _ => {
                if n.is_none() {
                    return Err(parse_err(line, "first line must be `ambient <generators>`"));
                }
                let row = content
                    .split_whitespace()
                    .map(|w| w.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| parse_err(line, "rows must be whitespace-separated integers"))?;
                rows.push((line, row));
            }
        }
    }
    let n = n.ok_or_else(|| parse_err(last_line.max(1), "missing `ambient` line"))?;
    let p = p
        .or(default_p)
        .ok_or_else(|| parse_err(last_line.max(1), "no `p` line and no default prime"))?;
    let ctx = SpaceContext::new(p, n)?;
    let f = ctx.field();
    let mut vectors = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        if row.len() != ctx.dim_v() {
            return Err(parse_err(
                line,
                format!(
                    "row has {} entries, expected C({n},2) = {}",
                    row.len(),
                    ctx.dim_v()
                ),
            ));
        }
        vectors.push(row.into_iter().map(|c| f.reduce(c)).collect::<Vec<u32>>());
    }
    let x = Subspace::span(f, ctx.dim_v(), &vectors)?;
    Ok((ctx, x))
}

/// True when the first directive of `text` is `ambient`, i.e. the text is a
/// raw subspace rather than a presentation.
pub fn is_raw_subspace(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.split_whitespace().next() == Some("ambient"))
}

/// The relator span `X ⊆ V(n)`.
pub fn to_subspace(pres: &Presentation) -> Result<(SpaceContext, Subspace)> {
    let ctx = SpaceContext::with_field(pres.p, pres.n)?;
    let f = ctx.field();
    let mut rows = Vec::with_capacity(pres.relators.len());
    for rel in &pres.relators {
        let mut v = vec![0; ctx.dim_v()];
        for t in rel {
            let c = ctx.v_coord(t.j, t.i).ok_or(Error::IndexOutOfRange {
                index: t.j,
                max: pres.n,
            })?;
            v[c] = f.add(v[c], t.coeff);
        }
        rows.push(v);
    }
    let x = Subspace::span(f, ctx.dim_v(), &rows)?;
    Ok((ctx, x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    ClosedSubspace,
    NotClosed,
    CyclicNoncapable,
    N4Classification,
    DimensionSufficient,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::ClosedSubspace => "closed-subspace",
            Reason::NotClosed => "not-closed",
            Reason::CyclicNoncapable => "cyclic-noncapable",
            Reason::N4Classification => "n4-classification",
            Reason::DimensionSufficient => "dimension-sufficient",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub capable: bool,
    pub reason: Reason,
    pub n: usize,
    pub p: u32,
    #[serde(rename = "dim_X")]
    pub dim_x: usize,
    #[serde(rename = "dim_X_closure")]
    pub dim_x_closure: Option<usize>,
    #[serde(serialize_with = "serialize_steps")]
    pub trace: ReductionTrace,
    pub witness: Option<Vec<u32>>,
}

fn serialize_steps<S: Serializer>(
    t: &ReductionTrace,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    t.steps.serialize(s)
}

fn step(kind: StepKind, ctx: &SpaceContext, x: &Subspace, detail: String) -> ReductionStep {
    ReductionStep {
        kind,
        n: ctx.n(),
        dim_x: x.dim(),
        detail,
        u: None,
        partition: None,
    }
}

/// Outcome of the reduction pipeline alone, before any cross-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shortcut {
    pub capable: bool,
    pub reason: Reason,
    pub trace: ReductionTrace,
    /// Sum of `n - 1` over the cancellation steps; the closure of the
    /// original subspace is this much larger than that of the final one.
    pub cancelled_dims: usize,
}

/// The reduction pipeline: cancel central lines, then try a block split, the
/// dimension shortcuts, the `n = 4` rule, and finally a direct closure
/// computation on whatever is left.
pub fn shortcut_verdict(ctx: &SpaceContext, x: &Subspace) -> Result<Shortcut> {
    let mut trace = ReductionTrace::new(ctx, x);
    let mut cur_ctx = ctx.clone();
    let mut cur_x = x.clone();
    let mut cancelled_dims = 0;

    while cur_ctx.n() >= 3 {
        let lines = central_lines(&cur_ctx, &cur_x)?;
        let Some(u) = lines.basis_vectors().next().map(<[u32]>::to_vec) else {
            break;
        };
        let c = cancel_central(&cur_ctx, &cur_x, &u)?;
        let mut s = step(
            StepKind::CentralCancellation,
            &cur_ctx,
            &cur_x,
            format!(
                "central direction {u:?}; n {} -> {}, dim X {} -> {}",
                cur_ctx.n(),
                c.ctx.n(),
                cur_x.dim(),
                c.x.dim()
            ),
        );
        s.u = Some(u);
        trace.steps.push(s);
        cancelled_dims += cur_ctx.n() - 1;
        cur_ctx = c.ctx;
        cur_x = c.x;
    }
    trace.final_n = cur_ctx.n();
    trace.final_subspace = cur_x.clone();

    let (capable, reason) = decide_reduced(&cur_ctx, &cur_x, &mut trace)?;
    Ok(Shortcut {
        capable,
        reason,
        trace,
        cancelled_dims,
    })
}

/// [`shortcut_verdict`] plus a direct closure computation whenever
/// `dim V ≤ 21`, either for the input or for the reduced subspace. A
/// disagreement is reported as [`Error::Internal`].
pub fn decide_subspace(ctx: &SpaceContext, x: &Subspace) -> Result<Verdict> {
    let Shortcut {
        capable,
        reason,
        trace,
        cancelled_dims,
    } = shortcut_verdict(ctx, x)?;
    let cur_ctx = SpaceContext::with_field(ctx.field(), trace.final_n)?;
    let cur_x = &trace.final_subspace;

    let mut dim_x_closure = None;
    let mut witness = None;
    if ctx.dim_v() <= CROSS_CHECK_MAX_DIM_V {
        let direct = closure(ctx, x)?;
        if direct.closed != capable {
            return Err(Error::Internal(format!(
                "pipeline verdict {capable} disagrees with direct closure {}",
                direct.closed
            )));
        }
        dim_x_closure = Some(direct.x_closure.dim());
        witness = direct.witness;
    } else if cur_ctx.dim_v() <= CROSS_CHECK_MAX_DIM_V {
        let direct = closure(&cur_ctx, cur_x)?;
        if direct.closed != capable {
            return Err(Error::Internal(format!(
                "pipeline verdict {capable} disagrees with direct closure {}",
                direct.closed
            )));
        }
        dim_x_closure = Some(direct.x_closure.dim() + cancelled_dims);
    }

    Ok(Verdict {
        capable,
        reason,
        n: ctx.n(),
        p: ctx.p(),
        dim_x: x.dim(),
        dim_x_closure,
        trace,
        witness,
    })
}

fn decide_reduced(
    ctx: &SpaceContext,
    x: &Subspace,
    trace: &mut ReductionTrace,
) -> Result<(bool, Reason)> {
    let reason_for = |closed: bool| {
        if closed {
            Reason::ClosedSubspace
        } else {
            Reason::NotClosed
        }
    };

    if let Some(split) = block_split(ctx, x)? {
        let ci = block_is_closed(ctx, &split.i_set, &split.x_i)?;
        let cj = block_is_closed(ctx, &split.j_set, &split.x_j)?;
        let mut s = step(
            StepKind::BlockSplit,
            ctx,
            x,
            format!(
                "I = {:?} (dim X_I {}, closed {ci}), J = {:?} (dim X_J {}, closed {cj})",
                split.i_set,
                split.x_i.dim(),
                split.j_set,
                split.x_j.dim()
            ),
        );
        s.partition = Some((split.i_set.clone(), split.j_set.clone()));
        trace.steps.push(s);
        return Ok((ci && cj, reason_for(ci && cj)));
    }

    let tests = dimension_tests(ctx, x)?;
    if tests.sufficient_closed {
        trace.steps.push(step(
            StepKind::DimensionSufficient,
            ctx,
            x,
            format!(
                "dim X = {} and {}^2 < 4n = {}",
                x.dim(),
                x.dim(),
                4 * ctx.n()
            ),
        ));
        return Ok((true, Reason::DimensionSufficient));
    }

    if ctx.n() == 4 && x.dim() == 5 {
        let closed = n4_dim5_rule(ctx, x)?;
        trace.steps.push(step(
            StepKind::N4Dim5Rule,
            ctx,
            x,
            format!("n = 4, dim X = 5, central line present: {closed}"),
        ));
        return Ok((closed, Reason::N4Classification));
    }

    if !tests.necessary_capable {
        trace.steps.push(step(
            StepKind::DimensionNecessaryFail,
            ctx,
            x,
            format!(
                "rank [G,G] = {} but 2l + C(l,2) < rank G/Z(G) = {}",
                tests.ell, tests.n_reduced
            ),
        ));
        return Ok((false, Reason::NotClosed));
    }

    let r = closure(ctx, x)?;
    trace.steps.push(step(
        StepKind::DirectClosure,
        ctx,
        x,
        format!(
            "dim X* = {}, dim X** = {}",
            r.x_star.dim(),
            r.x_closure.dim()
        ),
    ));
    Ok((r.closed, reason_for(r.closed)))
}

/// Capability verdict for a presentation.
pub fn decide(pres: &Presentation) -> Result<Verdict> {
    if pres.n == 1 {
        return Ok(Verdict {
            capable: false,
            reason: Reason::CyclicNoncapable,
            n: 1,
            p: pres.p.modulus(),
            dim_x: 0,
            dim_x_closure: None,
            trace: ReductionTrace {
                steps: Vec::new(),
                p: pres.p.modulus(),
                final_n: 1,
                final_subspace: Subspace::zero(pres.p, 0),
            },
            witness: None,
        });
    }
    let (ctx, x) = to_subspace(pres)?;
    decide_subspace(&ctx, &x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Capable,
    CyclicNontrivial,
    ExtraSpecialP5,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Capable => "capable",
            Classification::CyclicNontrivial => "cyclic-nontrivial",
            Classification::ExtraSpecialP5 => "extra-special-p5",
        })
    }
}

/// The trichotomy for groups on at most four generators.
pub fn classify_4gen(pres: &Presentation) -> Result<Classification> {
    if pres.n > 4 {
        return Err(Error::Precondition(format!(
            "classification covers n <= 4, got n = {}",
            pres.n
        )));
    }
    if pres.n == 1 {
        return Ok(Classification::CyclicNontrivial);
    }
    let verdict = decide(pres)?;
    if verdict.capable {
        return Ok(Classification::Capable);
    }
    let (ctx, x) = to_subspace(pres)?;
    let ell = ctx.dim_v() - x.dim();
    if ctx.n() == 4 && x.dim() == 5 && ell == 1 && central_lines(&ctx, &x)?.is_zero() {
        Ok(Classification::ExtraSpecialP5)
    } else {
        Err(Error::Internal(format!(
            "non-capable group outside the classification: n = {}, dim X = {}",
            ctx.n(),
            x.dim()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXTRA_SPECIAL: &str =
        "p 5\nn 4\nrel [3,1]\nrel [4,1]\nrel [3,2]\nrel [4,2]\nrel [2,1] - [4,3]\n";

    #[test]
    fn parse_basic() {
        let pres = parse("p 5\nn 4\nrel [2,1] - [4,3]\n").unwrap();
        assert_eq!(pres.n, 4);
        assert_eq!(pres.p.modulus(), 5);
        assert_eq!(
            pres.relators,
            vec![vec![
                Term {
                    coeff: 1,
                    j: 2,
                    i: 1
                },
                Term {
                    coeff: 4,
                    j: 4,
                    i: 3
                }
            ]]
        );
    }

    #[test]
    fn parse_coefficients_and_comments() {
        let text = "# header\n\np 7   # prime\nn 3\nrel 3*[3,1] + 2 * [2,1]\nrel -[3,2]\n";
        let pres = parse(text).unwrap();
        assert_eq!(
            pres.relators[0][0],
            Term {
                coeff: 3,
                j: 3,
                i: 1
            }
        );
        assert_eq!(
            pres.relators[0][1],
            Term {
                coeff: 2,
                j: 2,
                i: 1
            }
        );
        assert_eq!(
            pres.relators[1][0],
            Term {
                coeff: 6,
                j: 3,
                i: 2
            }
        );
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("p 2\nn 2\n", 1),
            ("p 9\nn 2\n", 1),
            ("p 3\nn 2\nrel [1,2]\n", 3),
            ("p 3\nn 2\nrel [3,1]\n", 3),
            ("p 3\nn 2\nrel 3*[2,1]\n", 3),
            ("p 3\nn 2\nrel 0*[2,1]\n", 3),
            ("p 3\nn 2\nrel [2,1] [2,1]\n", 3),
            ("p 3\nn 2\nrel\n", 3),
            ("p 3\nn 2\nrel [2 1]\n", 3),
            ("n 2\np 3\n", 1),
            ("p 3\nrel [2,1]\n", 2),
            ("p 3\nn 2\nfoo\n", 3),
            ("p 3\n", 1),
            ("p 3\nn 0\n", 2),
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn to_subspace_examples() {
        let (_, x) = to_subspace(&parse("p 3\nn 3\n").unwrap()).unwrap();
        assert!(x.is_zero());
        let (ctx, x) =
            to_subspace(&parse("p 3\nn 3\nrel [2,1]\nrel [3,1]\nrel [3,2]\n").unwrap()).unwrap();
        assert_eq!(x, ctx.full_v());
        let (_, x) = to_subspace(&parse(EXTRA_SPECIAL).unwrap()).unwrap();
        assert_eq!(x.dim(), 5);
        assert!(to_subspace(&parse("p 3\nn 1\n").unwrap()).is_err());
    }

    #[test]
    fn raw_subspace_format() {
        let text = "# raw\nambient 4\np 3\n0 0 0 1 0 0\n1 0 0 0 0 -1\n";
        assert!(is_raw_subspace(text));
        assert!(!is_raw_subspace(EXTRA_SPECIAL));
        let (ctx, x) = parse_raw_subspace(text, None).unwrap();
        assert_eq!(ctx.n(), 4);
        assert_eq!(
            x,
            ctx.v_span(&[&[(1, 4, 1)], &[(1, 2, 1), (-1, 4, 3)]])
                .unwrap()
        );
        let (ctx, _) = parse_raw_subspace("ambient 3\n1 1 1\n", Some(5)).unwrap();
        assert_eq!(ctx.p(), 5);
        for (bad, line) in [
            ("ambient 3\n1 1\n", 2),
            ("ambient 3\n1 x 1\n", 2),
            ("1 0 0\n", 1),
            ("ambient 3\np 4\n", 2),
            ("ambient 3\n1 0 0\n", 2),
        ] {
            match parse_raw_subspace(bad, None) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{bad:?}"),
                other => panic!("{bad:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn decide_examples() {
        let free = decide(&parse("p 3\nn 2\n").unwrap()).unwrap();
        assert!(free.capable);

        let es = decide(&parse(EXTRA_SPECIAL).unwrap()).unwrap();
        assert!(!es.capable);
        assert_eq!(es.reason, Reason::N4Classification);
        assert_eq!(es.dim_x_closure, Some(6));
        assert!(es.witness.is_some());

        let cyclic = decide(&parse("p 3\nn 1\n").unwrap()).unwrap();
        assert!(!cyclic.capable);
        assert_eq!(cyclic.reason, Reason::CyclicNoncapable);
    }

    #[test]
    fn central_generator_reduces() {
        // x_1 central; K on x_2, x_3, x_4 with relator [4,3] - [3,2]
        let big = parse("p 5\nn 4\nrel [2,1]\nrel [3,1]\nrel [4,1]\nrel [4,3] - [3,2]\n").unwrap();
        let small = parse("p 5\nn 3\nrel [3,2] - [2,1]\n").unwrap();
        let vb = decide(&big).unwrap();
        assert_eq!(vb.capable, decide(&small).unwrap().capable);
        assert_eq!(vb.trace.steps[0].kind, StepKind::CentralCancellation);
        let (ctx, x) = to_subspace(&big).unwrap();
        let (rctx, rx) = vb.trace.replay(&ctx, &x).unwrap();
        assert_eq!(rctx.n(), vb.trace.final_n);
        assert_eq!(rx, vb.trace.final_subspace);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_4gen(&parse("p 3\nn 1\n").unwrap()).unwrap(),
            Classification::CyclicNontrivial
        );
        assert_eq!(
            classify_4gen(&parse(EXTRA_SPECIAL).unwrap()).unwrap(),
            Classification::ExtraSpecialP5
        );
        assert_eq!(
            classify_4gen(&parse("p 3\nn 3\nrel [2,1] + [3,2]\n").unwrap()).unwrap(),
            Classification::Capable
        );
        assert!(classify_4gen(&parse("p 3\nn 5\n").unwrap()).is_err());
    }

    #[test]
    fn verdict_json_field_order() {
        let v = decide(&parse(EXTRA_SPECIAL).unwrap()).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let keys = [
            "\"capable\"",
            "\"reason\"",
            "\"n\"",
            "\"p\"",
            "\"dim_X\"",
            "\"dim_X_closure\"",
            "\"trace\"",
            "\"witness\"",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(json.contains("\"reason\":\"n4-classification\""));
    }
}
