//! Line-oriented text formats for systems, relations, partitions and
//! extensional orders.
//!
//! ```text
//! system <name> <lts|mts|pmts|dts|alt-mts|alt-gts>
//! state <id> [nondet|prob]
//! trans <src> <label> <tgt> [count=<int>] [p=<num>/<den>]
//! end
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::model::{validate_system, Bundle, Kind, Partition, Relation, StateId, StateTag, System};
use crate::multiset::Multiset;
use crate::order::ExtensionalOrder;
use crate::rat::Rat;

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits a line into whitespace-separated tokens with 1-based columns,
/// dropping anything after `#`.
fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token { text: &line[s..i], column: line[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn parse_tag(tok: Token<'_>, line: usize) -> Result<StateTag> {
    match tok.text {
        "nondet" => Ok(StateTag::Nondet),
        "prob" => Ok(StateTag::Prob),
        other => Err(err(line, tok.column, format!("expected `nondet` or `prob`, found `{other}`"))),
    }
}

fn parse_rat(tok: Token<'_>, text: &str, line: usize) -> Result<Rat> {
    text.parse::<Rat>().map_err(|e| err(line, tok.column, e.to_string()))
}

/// Parses and validates one system.
pub fn parse_system(text: &str) -> Result<System> {
    let mut header: Option<(String, Kind)> = None;
    let mut ended = false;
    let mut steps: IndexMap<StateId, Bundle> = IndexMap::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let toks = tokenize(raw);
        let Some(&head) = toks.first() else { continue };
        if ended {
            return Err(err(ln, head.column, "content after `end`"));
        }
        match head.text {
            "system" => {
                if header.is_some() {
                    return Err(err(ln, head.column, "only one system per file"));
                }
                let [_, name, kind] = toks[..] else {
                    return Err(err(ln, head.column, "expected `system <name> <kind>`"));
                };
                let kind = kind.text.parse::<Kind>().map_err(|e| err(ln, kind.column, e))?;
                header = Some((name.text.to_string(), kind));
            }
            "state" | "trans" | "end" if header.is_none() => {
                return Err(err(ln, head.column, "expected `system <name> <kind>` first"));
            }
            "state" => {
                let kind = header.as_ref().map(|h| h.1).expect("header checked");
                let (id, tag) = match toks[..] {
                    [_, id] => match kind.default_tag() {
                        Some(tag) => (id, tag),
                        None => return Err(err(ln, id.column, format!("{kind} states need a `nondet` or `prob` tag"))),
                    },
                    [_, id, t] => {
                        let tag = parse_tag(t, ln)?;
                        if kind.default_tag().is_some_and(|d| d != tag) {
                            return Err(err(ln, t.column, format!("{kind} states cannot be `{}`", tag.name())));
                        }
                        (id, tag)
                    }
                    _ => return Err(err(ln, head.column, "expected `state <id> [nondet|prob]`")),
                };
                if steps.contains_key(id.text) {
                    return Err(err(ln, id.column, format!("duplicate state `{}`", id.text)));
                }
                steps.insert(id.text.to_string(), kind.empty_bundle(tag));
            }
            "trans" => {
                let kind = header.as_ref().map(|h| h.1).expect("header checked");
                if toks.len() < 4 {
                    return Err(err(ln, head.column, "expected `trans <src> <label> <tgt> [count=<int>] [p=<num>/<den>]`"));
                }
                let (src, label, tgt) = (toks[1], toks[2].text.to_string(), toks[3].text.to_string());
                let mut count: Option<(u64, Token<'_>)> = None;
                let mut prob: Option<(Rat, Token<'_>)> = None;
                for &opt in &toks[4..] {
                    if let Some(v) = opt.text.strip_prefix("count=") {
                        if count.is_some() {
                            return Err(err(ln, opt.column, "`count` given twice"));
                        }
                        let n = v
                            .parse::<u64>()
                            .ok()
                            .filter(|n| *n > 0)
                            .ok_or_else(|| err(ln, opt.column, format!("count must be a positive integer, found `{v}`")))?;
                        count = Some((n, opt));
                    } else if let Some(v) = opt.text.strip_prefix("p=") {
                        if prob.is_some() {
                            return Err(err(ln, opt.column, "`p` given twice"));
                        }
                        prob = Some((parse_rat(opt, v, ln)?, opt));
                    } else {
                        return Err(err(ln, opt.column, format!("unexpected `{}`", opt.text)));
                    }
                }
                let bundle = steps
                    .get_mut(src.text)
                    .ok_or_else(|| err(ln, src.column, format!("state `{}` is not declared", src.text)))?;
                let n = count.map_or(1, |c| c.0);
                let set_like = matches!(bundle, Bundle::Set(_) | Bundle::Dist(_));
                if let (Some((n, tok)), true) = (count, set_like) {
                    if n != 1 {
                        return Err(err(ln, tok.column, format!("{kind} transitions have no multiplicity")));
                    }
                }
                match (bundle, prob) {
                    (Bundle::Set(s), None) => {
                        if !s.insert((label, tgt)) {
                            return Err(err(ln, head.column, "duplicate transition"));
                        }
                    }
                    (Bundle::Ms(m), None) => m.insert((label, tgt), n),
                    (Bundle::M1(m), Some((p, _))) => m.insert((p, label, tgt), n),
                    (Bundle::Dist(d), Some((p, _))) => d.add((label, tgt), p),
                    (Bundle::Set(_) | Bundle::Ms(_), Some((_, tok))) => {
                        return Err(err(ln, tok.column, format!("`p` given on nondeterministic state `{}`", src.text)));
                    }
                    (Bundle::M1(_) | Bundle::Dist(_), None) => {
                        return Err(err(ln, head.column, format!("`p` required on probabilistic state `{}`", src.text)));
                    }
                }
            }
            "end" => {
                if toks.len() > 1 {
                    return Err(err(ln, toks[1].column, "unexpected text after `end`"));
                }
                ended = true;
            }
            other => return Err(err(ln, head.column, format!("unknown declaration `{other}`"))),
        }
    }
    let Some((name, kind)) = header else {
        return Err(err(last_line.max(1), 1, "missing `system` declaration"));
    };
    if !ended {
        return Err(err(last_line + 1, 1, "missing `end`"));
    }
    let sys = System::from_bundles(name, kind, steps);
    let diags = validate_system(&sys);
    if diags.is_empty() {
        Ok(sys)
    } else {
        Err(Error::Invalid(diags))
    }
}

/// Canonical text of a system: state declarations in order, then the
/// transitions of each state in bundle order.
pub fn render_system(sys: &System) -> String {
    let mut out = format!("system {} {}\n", sys.name, sys.kind);
    for (s, b) in sys.steps() {
        match sys.kind.default_tag() {
            Some(_) => writeln!(out, "state {s}"),
            None => writeln!(out, "state {s} {}", b.tag().name()),
        }
        .expect("write to String");
    }
    for (s, b) in sys.steps() {
        let mut line = |a: &str, x: &str, n: u64, p: Option<Rat>| {
            out.push_str(&format!("trans {s} {a} {x}"));
            if n != 1 {
                out.push_str(&format!(" count={n}"));
            }
            if let Some(p) = p {
                out.push_str(&format!(" p={p}"));
            }
            out.push('\n');
        };
        match b {
            Bundle::Set(set) => set.iter().for_each(|(a, x)| line(a, x, 1, None)),
            Bundle::Ms(m) => m.iter().for_each(|((a, x), &n)| line(a, x, n, None)),
            Bundle::M1(m) => m.iter().for_each(|((p, a, x), &n)| line(a, x, n, Some(*p))),
            Bundle::Dist(d) => d.iter().for_each(|((a, x), &p)| line(a, x, 1, Some(p))),
        }
    }
    out.push_str("end\n");
    out
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<Token<'_>>)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, tokenize(l))).filter(|(_, t)| !t.is_empty())
}

/// Parses `pair <l> <r>` lines into a relation over the given carriers.
pub fn parse_relation(text: &str, left: &BTreeSet<StateId>, right: &BTreeSet<StateId>) -> Result<Relation> {
    let mut rel = Relation::empty(left.clone(), right.clone());
    for (ln, toks) in lines(text) {
        match toks[..] {
            [Token { text: "pair", .. }, l, r] => {
                if !left.contains(l.text) {
                    return Err(err(ln, l.column, format!("unknown left state `{}`", l.text)));
                }
                if !right.contains(r.text) {
                    return Err(err(ln, r.column, format!("unknown right state `{}`", r.text)));
                }
                rel.insert(l.text, r.text)?;
            }
            _ => return Err(err(ln, toks[0].column, "expected `pair <left> <right>`")),
        }
    }
    Ok(rel)
}

pub fn render_relation(rel: &Relation) -> String {
    rel.iter().map(|(x, y)| format!("pair {x} {y}\n")).collect()
}

/// Parses `class <id>...` lines into a partition of `carrier`.
pub fn parse_partition(text: &str, carrier: &BTreeSet<StateId>) -> Result<Partition> {
    let mut classes = Vec::new();
    for (ln, toks) in lines(text) {
        if toks[0].text != "class" || toks.len() < 2 {
            return Err(err(ln, toks[0].column, "expected `class <id>...`"));
        }
        classes.push(toks[1..].iter().map(|t| t.text.to_string()).collect::<BTreeSet<_>>());
    }
    Partition::new(carrier, classes)
}

pub fn render_partition(p: &Partition) -> String {
    p.classes()
        .iter()
        .map(|c| format!("class {}\n", c.iter().cloned().collect::<Vec<_>>().join(" ")))
        .collect()
}

fn parse_item<'a>(tok: Token<'a>, ln: usize) -> Result<(&'a str, &'a str, u64, Option<Rat>)> {
    let (rest, p) = match tok.text.split_once('@') {
        Some((rest, p)) => (rest, Some(parse_rat(tok, p, ln)?)),
        None => (tok.text, None),
    };
    let (rest, n) = match rest.split_once('*') {
        Some((rest, n)) => {
            let n = n.parse::<u64>().ok().filter(|n| *n > 0);
            (rest, n.ok_or_else(|| err(ln, tok.column, "count must be a positive integer"))?)
        }
        None => (rest, 1),
    };
    let (a, x) = rest
        .split_once(':')
        .ok_or_else(|| err(ln, tok.column, format!("expected `label:state[*count][@p]`, found `{}`", tok.text)))?;
    Ok((a, x, n, p))
}

/// Parses an extensional order:
///
/// ```text
/// bundle <name> <set|ms|m1|dist> <label:state[*count][@p]>...
/// le <name> <name>
/// ```
///
/// Every declared bundle is in the universe and related to itself; the
/// listed pairs must already be transitive.
pub fn parse_order(text: &str) -> Result<ExtensionalOrder> {
    let mut named: BTreeMap<String, Bundle> = BTreeMap::new();
    let mut pairs = BTreeSet::new();
    for (ln, toks) in lines(text) {
        match toks[0].text {
            "bundle" if toks.len() >= 3 => {
                let (name, shape) = (toks[1], toks[2]);
                let items = toks[3..].iter().map(|t| parse_item(*t, ln)).collect::<Result<Vec<_>>>()?;
                let need_p = matches!(shape.text, "m1" | "dist");
                if items.iter().any(|it| it.3.is_some() != need_p) {
                    return Err(err(ln, shape.column, format!("`@p` is {} for `{}` bundles", if need_p { "required" } else { "not allowed" }, shape.text)));
                }
                let own = |s: &str| s.to_string();
                let bundle = match shape.text {
                    "set" => Bundle::Set(items.iter().map(|(a, x, _, _)| (own(a), own(x))).collect()),
                    "ms" => Bundle::Ms(items.iter().map(|(a, x, n, _)| ((own(a), own(x)), *n)).collect::<Multiset<_>>()),
                    "m1" => Bundle::M1(
                        items.iter().map(|(a, x, n, p)| ((p.expect("checked"), own(a), own(x)), *n)).collect(),
                    ),
                    "dist" => Bundle::Dist(items.iter().map(|(a, x, _, p)| ((own(a), own(x)), p.expect("checked"))).collect()),
                    other => return Err(err(ln, shape.column, format!("unknown bundle shape `{other}`"))),
                };
                if named.insert(name.text.to_string(), bundle).is_some() {
                    return Err(err(ln, name.column, format!("duplicate bundle `{}`", name.text)));
                }
            }
            "le" if toks.len() == 3 => {
                let get = |t: Token<'_>| {
                    named.get(t.text).cloned().ok_or_else(|| err(ln, t.column, format!("unknown bundle `{}`", t.text)))
                };
                pairs.insert((get(toks[1])?, get(toks[2])?));
            }
            _ => return Err(err(ln, toks[0].column, "expected `bundle <name> <shape> <items>...` or `le <name> <name>`")),
        }
    }
    let universe: BTreeSet<Bundle> = named.into_values().collect();
    pairs.extend(universe.iter().map(|b| (b.clone(), b.clone())));
    ExtensionalOrder::new(universe, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;
    use crate::samples;

    #[test]
    fn parses_s_x() {
        let sys = parse_system("system sx lts\nstate x\nstate x1\ntrans x a x1\nend").unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys, samples::s_x());
    }

    #[test]
    fn parses_count_and_probability_in_any_order() {
        let sys = parse_system("system pb pmts\nstate y\ntrans y a y p=1/2 count=2\nend\n").unwrap();
        assert_eq!(sys.step("y"), Some(&m1([(2, r(1, 2), "a", "y")])));
    }

    #[test]
    fn decimals_are_rejected() {
        let e = parse_system("system p pmts\nstate y\ntrans y a y p=0.5\nend").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, column: 13, message: "decimals not accepted; write 1/2".into() });
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("system s lts\nstate x\nstate x\nend", 3, 7),
            ("system s lts\nstate x\ntrans x a x count=2\nend", 3, 13),
            ("system s pmts\nstate x\ntrans x a x\nend", 3, 1),
            ("system s lts\nstate x\ntrans x a x p=1\nend", 3, 13),
            ("system s alt-mts\nstate x\nend", 2, 7),
            ("system s lts\n  bogus\nend", 2, 3),
            ("system s wts\nend", 1, 10),
            ("state x\n", 1, 1),
        ];
        for (text, line, column) in cases {
            match parse_system(text) {
                Err(Error::Parse { line: l, column: c, .. }) => assert_eq!((l, c), (line, column), "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn validation_failures_are_forwarded() {
        assert!(matches!(
            parse_system("system s pmts\nstate x\ntrans x a x p=1/2\nend"),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(parse_system("system s lts\nstate x\ntrans x a nowhere\nend"), Err(Error::Invalid(_))));
    }

    #[test]
    fn dts_lines_accumulate() {
        let sys = parse_system("system d dts\nstate x\ntrans x a x p=1/3\ntrans x a x p=2/3\nend").unwrap();
        assert_eq!(sys.step("x"), Some(&dist([(r(1, 1), "a", "x")])));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\nsystem sx lts # trailing\n\nstate x\nstate x1\ntrans x a x1\nend\n# done\n";
        assert_eq!(parse_system(text).unwrap(), samples::s_x());
    }

    #[test]
    fn render_round_trips() {
        for sys in [samples::s_y(), samples::s_x_ms(2), samples::pb(), samples::s_xp_m1(3), samples::s_yp()] {
            let text = render_system(&sys);
            assert_eq!(parse_system(&text).unwrap(), sys);
            assert_eq!(render_system(&parse_system(&text).unwrap()), text);
        }
        let alt = "system m alt-mts\nstate s nondet\nstate t prob\ntrans s a t count=2\ntrans t b s p=1\nend\n";
        assert_eq!(render_system(&parse_system(alt).unwrap()), alt);
    }

    #[test]
    fn relations_and_partitions() {
        let (c, d) = (samples::s_x(), samples::s_y());
        let rel = parse_relation("pair x y\n# c\npair x1 y1\npair x1 y2\n", &c.state_set(), &d.state_set()).unwrap();
        assert_eq!(rel, Relation::between(&c, &d, samples::R_XY).unwrap());
        assert_eq!(parse_relation(&render_relation(&rel), &c.state_set(), &d.state_set()).unwrap(), rel);
        assert!(matches!(parse_relation("pair x z\n", &c.state_set(), &d.state_set()), Err(Error::Parse { column: 8, .. })));

        let p = parse_partition("class y\nclass y1 y2\n", &d.state_set()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(parse_partition(&render_partition(&p), &d.state_set()).unwrap(), p);
        assert!(matches!(parse_partition("class y\n", &d.state_set()), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn order_files() {
        let text = "bundle one ms a:x1\nbundle two ms a:x1*2\nbundle three ms a:x1*3\nle one two\nle two three\nle one three\n";
        let ord = parse_order(text).unwrap();
        assert!(ord.le(&ms([(1, "a", "x1")]), &ms([(3, "a", "x1")])));
        assert!(!ord.le(&ms([(3, "a", "x1")]), &ms([(1, "a", "x1")])));
        let intransitive = "bundle one ms a:x1\nbundle two ms a:x1*2\nbundle three ms a:x1*3\nle one two\nle two three\n";
        assert!(matches!(parse_order(intransitive), Err(Error::InvalidOrder(_))));
        let prob = parse_order("bundle h m1 a:y*2@1/2\n").unwrap();
        assert!(prob.universe().contains(&m1([(2, r(1, 2), "a", "y")])));
        assert!(parse_order("bundle h m1 a:y\n").is_err());
    }
}
