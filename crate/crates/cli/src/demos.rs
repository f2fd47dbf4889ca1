//! Scripted walkthroughs of the reference scenarios.

use kmbc::change::{contract, remainders, revise};
use kmbc::logic::{parse, Formula, WorldSet};
use kmbc::measures::{kappa_h, kappa_s, kappa_s_worlds};
use kmbc::postulates::{check_iterated, Operator, Postulate};
use kmbc::prob::ProbDist;
use kmbc::rankings::dist_from_ranking;
use kmbc::scenarios::{abc_ranking, birds_dist, birds_kb, pets_dist, pq_dist, PQ_BELIEF, PQ_FIRST, PQ_SECOND};
use kmbc::{Error, Result};
use serde_json::{json, Value};

use crate::render;
use crate::{DemoName, Output, Style};

/// Labelled lines, printed as `label: value` or as a JSON list.
struct Script {
    name: &'static str,
    lines: Vec<(String, String)>,
}

impl Script {
    fn new(name: &'static str) -> Self {
        Script { name, lines: Vec::new() }
    }

    fn line(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.lines.push((label.into(), value.into()));
    }

    fn text(&self) -> String {
        let width = self.lines.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
        self.lines
            .iter()
            .map(|(l, v)| format!("{l}{}  {v}\n", " ".repeat(width - l.chars().count())))
            .collect()
    }

    fn json(&self) -> Value {
        let lines: Vec<Value> = self.lines.iter().map(|(l, v)| json!({ "label": l, "value": v })).collect();
        json!({ "demo": self.name, "lines": lines })
    }
}

pub(crate) fn run(name: DemoName, style: &Style) -> Result<Output> {
    let script = match name {
        DemoName::Birds => birds()?,
        DemoName::Ranking => ranking()?,
        DemoName::C2Counterexample => c2_counterexample()?,
        DemoName::Pets => pets()?,
    };
    Ok(style.emit(|| script.text(), || script.json()))
}

fn f(text: &str, d: &ProbDist) -> Result<Formula> {
    parse(text, d.alphabet())
}

fn worlds(d: &ProbDist, bits: &[&str]) -> Result<WorldSet> {
    WorldSet::parse(d.alphabet(), bits)
}

fn birds() -> Result<Script> {
    let mut s = Script::new("birds");
    let d = birds_dist();
    let kb = birds_kb();
    let sigma = d.alphabet();
    s.line("KB", kb.to_string());
    s.line("P(KB)", render::rational_both(&d.prob(&kb)?));
    s.line("κ_S(KB)", render::km(kappa_s(&kb, &d)?));
    s.line("κ_h(KB)", render::km(kappa_h(&kb)));
    let fly = f("f", &d)?;
    s.line("κ_S(f)", render::km(kappa_s(&fly, &d)?));
    s.line("[KB]⁺", render::worlds_text(&d.possible(&kb.models(sigma)?), sigma));
    let rs = remainders(&kb, &fly, &d)?;
    for (i, r) in rs.members().iter().enumerate() {
        let added = r.added.map(|w| sigma.world_bits(w)).unwrap_or_else(|| "-".into());
        s.line(
            format!("remainder {} (+{added})", i + 1),
            format!("P = {}, κ_S = {}", render::rational_both(&r.probability), render::km(kappa_s_worlds(&r.worlds, &d))),
        );
    }
    let c = contract(&kb, &fly, &d)?;
    s.line("KB ÷ f", c.result.to_string());
    s.line("worlds", render::worlds_text(&c.result_worlds, sigma));
    s.line(c.kind.symbol(), render::real(c.measure));
    Ok(s)
}

fn ranking() -> Result<Script> {
    let mut s = Script::new("ranking");
    let r = abc_ranking();
    let d = dist_from_ranking(&r);
    let sigma = d.alphabet();
    s.line("φ", r.phi().to_string());
    let mut rows: Vec<_> = sigma.worlds().collect();
    rows.sort_by_key(|&w| (r.rank(w), std::cmp::Reverse(sigma.world_bits(w))));
    for w in rows {
        let p = d.mass(w);
        let one = WorldSet::from_worlds(sigma.len(), [w]);
        s.line(
            format!("{} ({})", sigma.world_bits(w), sigma.render_world(w)),
            format!("rank {}, P = {}, κ_S = {}", r.rank(w), p, render::km(kappa_s_worlds(&one, &d))),
        );
    }
    let ab = f("a & b", &d)?;
    let c = contract(&ab, &f("b", &d)?, &d)?;
    s.line("(a & b) ÷ b", format!("{}  {}", c.result, render::worlds_text(&c.result_worlds, sigma)));
    s.line("L", render::real(c.measure));
    let v = revise(&ab, &f("~b", &d)?, &d)?;
    s.line("(a & b) ★ ~b", format!("{}  {}", v.result, render::worlds_text(&v.result_worlds, sigma)));
    s.line("R", render::real(v.measure));
    Ok(s)
}

fn c2_counterexample() -> Result<Script> {
    let mut s = Script::new("c2-counterexample");
    let d = pq_dist();
    let sigma = d.alphabet();
    let (phi, alpha, psi) = (f(PQ_BELIEF, &d)?, f(PQ_FIRST, &d)?, f(PQ_SECOND, &d)?);
    for bits in ["00", "01", "11", "10"] {
        let one = worlds(&d, &[bits])?;
        let w = sigma.parse_world(bits)?;
        s.line(
            format!("{bits} ({})", sigma.render_world(w)),
            format!("P = {}, κ_S = {}", render::rational_both(d.mass(w)), render::km(kappa_s_worlds(&one, &d))),
        );
    }
    s.line("φ", phi.to_string());
    s.line("α", alpha.to_string());
    s.line("ψ", psi.to_string());
    let once = revise(&phi, &psi, &d)?;
    let first = revise(&phi, &alpha, &d)?;
    let twice = revise(&first.result, &psi, &d)?;
    s.line("φ ★ ψ", render::worlds_text(&once.result_worlds, sigma));
    s.line("φ ★ α", render::worlds_text(&first.result_worlds, sigma));
    s.line("(φ ★ α) ★ ψ", render::worlds_text(&twice.result_worlds, sigma));
    let report = check_iterated(&Operator::KmRevision, &phi, &alpha, &psi, &d)?;
    let c2 = report
        .verdict(Postulate::C2)
        .ok_or_else(|| Error::Invariant("iterated report lacks C2".into()))?;
    let verdict = match &c2.witness {
        Some(w) => format!("violated: {}", w.detail),
        None => "holds".into(),
    };
    s.line(c2.label, verdict);
    Ok(s)
}

fn pets() -> Result<Script> {
    let mut s = Script::new("pets");
    let d = pets_dist();
    let sigma = d.alphabet();
    let not_p = f("~p", &d)?;
    let back = revise(&not_p, &f("~d", &d)?, &d)?;
    s.line("(~p) ★ ~d", render::worlds_text(&back.result_worlds, sigma));
    s.line("≡_P ~p", d.p_equiv(&back.result, &not_p)?.to_string());
    let first = revise(&not_p, &f("d", &d)?, &d)?;
    s.line("(~p) ★ d", render::worlds_text(&first.result_worlds, sigma));
    let twice = revise(&first.result, &f("~d", &d)?, &d)?;
    s.line("((~p) ★ d) ★ ~d", render::worlds_text(&twice.result_worlds, sigma));
    let expected = f("(~p & ~d & ~c) | (p & ~d & c)", &d)?;
    s.line(format!("≡_P {expected}"), d.p_equiv(&twice.result, &expected)?.to_string());
    Ok(s)
}
