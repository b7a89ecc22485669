//! Session files: named ring, ideal, and module declarations.
//!
//! ```text
//! ring R = F5[x,y]/(y^2 - x^3) order grevlex weights (2,3);
//! ideal p = (x - 1, y - 1);
//! module M = coker [[z, x+2*y],[x-2*y, -z]] degrees (0,0);
//! ```
//!
//! Objects bind to the ring named by a trailing `in R`, defaulting to the
//! most recently declared ring. The first syntax error is reported with
//! its position; there are no partial sessions.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ideal::Ideal;
use crate::module::{Matrix, PresentedModule};
use crate::monomial::MonomialOrder;
use crate::parse::{err_at, parse_poly_expr, tokenize, Tok, TokenStream};
use crate::poly::Poly;
use crate::ring::{polynomial_ring, quotient_ring, AmbientRing, Ring};
use std::collections::BTreeMap;

#[derive(Debug, Default)]
pub struct Session {
    pub rings: BTreeMap<String, Ring>,
    pub ideals: BTreeMap<String, (String, Ideal)>,
    pub modules: BTreeMap<String, (String, PresentedModule)>,
    pub decl_order: Vec<String>,
    pub last_ring: Option<String>,
}

impl Session {
    pub fn ring(&self, name: &str) -> Result<&Ring> {
        self.rings
            .get(name)
            .ok_or_else(|| unknown_name(name, self.rings.keys()))
    }

    pub fn the_ring(&self) -> Result<&Ring> {
        match &self.last_ring {
            Some(name) => self.ring(name),
            None => Err(Error::usage("session declares no ring".to_string())),
        }
    }

    pub fn ideal(&self, name: &str) -> Result<&Ideal> {
        self.ideals
            .get(name)
            .map(|(_, i)| i)
            .ok_or_else(|| unknown_name(name, self.ideals.keys()))
    }

    pub fn module(&self, name: &str) -> Result<&PresentedModule> {
        self.modules
            .get(name)
            .map(|(_, m)| m)
            .ok_or_else(|| unknown_name(name, self.modules.keys()))
    }

    fn check_fresh(&self, name: &str, pos: crate::parse::Pos) -> Result<()> {
        if self.rings.contains_key(name)
            || self.ideals.contains_key(name)
            || self.modules.contains_key(name)
        {
            return Err(err_at(pos, format!("duplicate declaration of `{name}`")));
        }
        Ok(())
    }

    /// Canonical text form; `parse_session` of the output reproduces the
    /// same session.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for name in &self.decl_order {
            if let Some(ring) = self.rings.get(name) {
                let amb = &ring.ambient;
                out.push_str(&format!("ring {name} = {}[{}]", amb.field.label(), amb.vars.join(",")));
                if !ring.defining_gens.is_empty() {
                    let gens: Vec<String> = ring
                        .defining_gens
                        .iter()
                        .map(|g| amb.poly_string(g))
                        .collect();
                    out.push_str(&format!("/({})", gens.join(", ")));
                }
                out.push_str(&format!(" order {}", amb.order.label()));
                if amb.weights.iter().any(|&w| w != 1) {
                    let ws: Vec<String> = amb.weights.iter().map(|w| w.to_string()).collect();
                    out.push_str(&format!(" weights ({})", ws.join(",")));
                }
                out.push_str(";\n");
            } else if let Some((ring_name, ideal)) = self.ideals.get(name) {
                let amb = &ideal.ring.ambient;
                let gens: Vec<String> = ideal.gens.iter().map(|g| amb.poly_string(g)).collect();
                out.push_str(&format!("ideal {name} = ({}) in {ring_name};\n", gens.join(", ")));
            } else if let Some((ring_name, module)) = self.modules.get(name) {
                let amb = &module.ring.ambient;
                let rows: Vec<String> = (0..module.rels.rows)
                    .map(|r| {
                        let entries: Vec<String> = (0..module.rels.cols)
                            .map(|c| amb.poly_string(module.rels.get(r, c)))
                            .collect();
                        format!("[{}]", entries.join(", "))
                    })
                    .collect();
                out.push_str(&format!("module {name} = coker [{}]", rows.join(",")));
                if let Some(d) = &module.degrees {
                    let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                    out.push_str(&format!(" degrees ({})", ds.join(",")));
                }
                out.push_str(&format!(" in {ring_name};\n"));
            }
        }
        out
    }
}

fn unknown_name<'a>(name: &str, known: impl Iterator<Item = &'a String>) -> Error {
    let known: Vec<&String> = known.collect();
    if known.is_empty() {
        Error::usage(format!("unknown name `{name}` (nothing declared)"))
    } else {
        let names: Vec<String> = known.iter().map(|s| s.to_string()).collect();
        Error::usage(format!(
            "unknown name `{name}`; declared names: {}",
            names.join(", ")
        ))
    }
}

/// Default monomial order used for ring declarations without an `order`
/// clause.
pub struct SessionOptions {
    pub default_order: MonomialOrder,
}

impl Default for SessionOptions {
    fn default() -> Self {
        SessionOptions { default_order: MonomialOrder::GrevLex }
    }
}

pub fn parse_session(text: &str) -> Result<Session> {
    parse_session_with(text, &SessionOptions::default())
}

pub fn parse_session_with(text: &str, opts: &SessionOptions) -> Result<Session> {
    let mut ts = TokenStream::new(tokenize(text)?);
    let mut session = Session::default();
    loop {
        if ts.at_eof() {
            break;
        }
        let (kw, pos) = ts.expect_ident("declaration keyword (ring, ideal, module)")?;
        match kw.as_str() {
            "ring" => parse_ring_decl(&mut ts, &mut session, opts)?,
            "ideal" => parse_ideal_decl(&mut ts, &mut session)?,
            "module" => parse_module_decl(&mut ts, &mut session)?,
            other => {
                return Err(err_at(
                    pos,
                    format!("expected `ring`, `ideal`, or `module`, found `{other}`"),
                ))
            }
        }
    }
    Ok(session)
}

fn parse_ring_decl(ts: &mut TokenStream, session: &mut Session, opts: &SessionOptions) -> Result<()> {
    let (name, npos) = ts.expect_ident("ring name")?;
    session.check_fresh(&name, npos)?;
    ts.expect(&Tok::Equals, "`=`")?;
    let (field_label, fpos) = ts.expect_ident("coefficient field (F<p> or Q)")?;
    let field = FieldSpec::parse_label(&field_label).map_err(|e| err_at(fpos, e.to_string()))?;
    ts.expect(&Tok::LBracket, "`[`")?;
    let mut vars = Vec::new();
    loop {
        let (v, vpos) = ts.expect_ident("variable name")?;
        if !v.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
            return Err(err_at(vpos, format!("variable `{v}` must start with a lowercase letter")));
        }
        if vars.contains(&v) {
            return Err(err_at(vpos, format!("duplicate variable `{v}`")));
        }
        vars.push(v);
        if !ts.eat(&Tok::Comma) {
            break;
        }
    }
    ts.expect(&Tok::RBracket, "`]`")?;
    let mut amb = AmbientRing::new(vars, field, opts.default_order.clone());
    // optional quotient
    let mut quotient_gens: Vec<Poly> = Vec::new();
    if ts.eat(&Tok::Slash) {
        ts.expect(&Tok::LParen, "`(`")?;
        loop {
            quotient_gens.push(parse_poly_expr(&amb, ts)?);
            if !ts.eat(&Tok::Comma) {
                break;
            }
        }
        ts.expect(&Tok::RParen, "`)`")?;
    }
    // optional order / weights clauses in either order
    loop {
        let t = ts.peek().clone();
        match &t.tok {
            Tok::Ident(w) if w == "order" => {
                ts.next();
                let (label, lpos) = ts.expect_ident("monomial order (grevlex or lex)")?;
                let order = MonomialOrder::parse_label(&label)
                    .ok_or_else(|| err_at(lpos, format!("unknown order `{label}`")))?;
                amb.order = order;
            }
            Tok::Ident(w) if w == "weights" => {
                ts.next();
                ts.expect(&Tok::LParen, "`(`")?;
                let mut ws = Vec::new();
                loop {
                    let t = ts.next();
                    match t.tok {
                        Tok::Int(n) if n > 0 => ws.push(n as u64),
                        _ => return Err(err_at(t.pos, "weights must be positive integers")),
                    }
                    if !ts.eat(&Tok::Comma) {
                        break;
                    }
                }
                ts.expect(&Tok::RParen, "`)`")?;
                if ws.len() != amb.nvars() {
                    return Err(err_at(t.pos, "one weight per variable"));
                }
                amb = amb.with_weights(ws);
            }
            _ => break,
        }
    }
    ts.expect(&Tok::Semi, "`;`")?;
    // quotient polynomials were parsed before order/weights clauses; they
    // are stored canonically, so re-normalize under the final order
    let quotient_gens: Vec<Poly> = quotient_gens
        .into_iter()
        .map(|p| amb.normalize(p.terms))
        .collect();
    let ring = if quotient_gens.iter().all(|g| g.is_zero()) {
        polynomial_ring(amb)
    } else {
        quotient_ring(amb, quotient_gens).map_err(|e| err_at(npos, e.to_string()))?
    };
    session.rings.insert(name.clone(), ring);
    session.decl_order.push(name.clone());
    session.last_ring = Some(name);
    Ok(())
}

fn bound_ring(ts: &mut TokenStream, session: &Session) -> Result<(String, Ring)> {
    let t = ts.peek().clone();
    if let Tok::Ident(w) = &t.tok {
        if w == "in" {
            ts.next();
            let (rname, rpos) = ts.expect_ident("ring name")?;
            let ring = session
                .ring(&rname)
                .map_err(|e| err_at(rpos, e.to_string()))?
                .clone();
            return Ok((rname, ring));
        }
    }
    match &session.last_ring {
        Some(rname) => Ok((rname.clone(), session.rings[rname].clone())),
        None => Err(err_at(t.pos, "no ring declared yet")),
    }
}

fn parse_ideal_decl(ts: &mut TokenStream, session: &mut Session) -> Result<()> {
    let (name, npos) = ts.expect_ident("ideal name")?;
    session.check_fresh(&name, npos)?;
    ts.expect(&Tok::Equals, "`=`")?;
    ts.expect(&Tok::LParen, "`(`")?;
    // generators are parsed against the bound ring;到 find it, scan ahead
    // is unnecessary because generators only need the ambient ring, and
    // `in R` follows the list. Parse with the default ring first.
    let probe = session.last_ring.clone();
    let mut gens_src: Vec<(usize, usize)> = Vec::new();
    let _ = (&probe, &mut gens_src);
    // simplest correct approach: remember token position, find the binding
    // ring by scanning to the matching `)`, then re-parse
    let start = ts.idx;
    let mut depth = 1usize;
    while depth > 0 {
        let t = ts.next();
        match t.tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Eof => return Err(err_at(t.pos, "unterminated ideal generator list")),
            _ => {}
        }
    }
    let (ring_name, ring) = bound_ring(ts, session)?;
    ts.expect(&Tok::Semi, "`;`")?;
    let end = ts.idx;
    let mut sub = TokenStream::new((start..end).map(|i| ts.token_at(i)).collect());
    let mut gens = Vec::new();
    loop {
        if matches!(sub.peek().tok, Tok::RParen) {
            sub.next();
            break;
        }
        gens.push(parse_poly_expr(&ring.ambient, &mut sub)?);
        if sub.eat(&Tok::Comma) {
            continue;
        }
        sub.expect(&Tok::RParen, "`)` or `,`")?;
        break;
    }
    let ideal = Ideal::new(&ring, gens);
    session.ideals.insert(name.clone(), (ring_name, ideal));
    session.decl_order.push(name);
    Ok(())
}

fn parse_module_decl(ts: &mut TokenStream, session: &mut Session) -> Result<()> {
    let (name, npos) = ts.expect_ident("module name")?;
    session.check_fresh(&name, npos)?;
    ts.expect(&Tok::Equals, "`=`")?;
    let (kw, kpos) = ts.expect_ident("`coker`")?;
    if kw != "coker" {
        return Err(err_at(kpos, format!("expected `coker`, found `{kw}`")));
    }
    ts.expect(&Tok::LBracket, "`[`")?;
    // scan to the matching `]`, bind the ring, then re-parse rows
    let start = ts.idx;
    let mut depth = 1usize;
    while depth > 0 {
        let t = ts.next();
        match t.tok {
            Tok::LBracket => depth += 1,
            Tok::RBracket => depth -= 1,
            Tok::Eof => return Err(err_at(t.pos, "unterminated matrix")),
            _ => {}
        }
    }
    // optional degrees clause
    let mut degrees: Option<Vec<i64>> = None;
    if let Tok::Ident(w) = &ts.peek().tok {
        if w == "degrees" {
            ts.next();
            ts.expect(&Tok::LParen, "`(`")?;
            let mut ds = Vec::new();
            loop {
                let neg = ts.eat(&Tok::Minus);
                let t = ts.next();
                match t.tok {
                    Tok::Int(n) => ds.push(if neg { -n } else { n }),
                    _ => return Err(err_at(t.pos, "degrees must be integers")),
                }
                if !ts.eat(&Tok::Comma) {
                    break;
                }
            }
            ts.expect(&Tok::RParen, "`)`")?;
            degrees = Some(ds);
        }
    }
    let (ring_name, ring) = bound_ring(ts, session)?;
    ts.expect(&Tok::Semi, "`;`")?;
    let end = ts.idx;
    let mut sub = TokenStream::new((start..end).map(|i| ts.token_at(i)).collect());
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    loop {
        if matches!(sub.peek().tok, Tok::RBracket) {
            sub.next();
            break;
        }
        sub.expect(&Tok::LBracket, "`[`")?;
        let mut row = Vec::new();
        if !matches!(sub.peek().tok, Tok::RBracket) {
            loop {
                row.push(parse_poly_expr(&ring.ambient, &mut sub)?);
                if !sub.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        sub.expect(&Tok::RBracket, "`]`")?;
        rows.push(row);
        if sub.eat(&Tok::Comma) {
            continue;
        }
    }
    if rows.is_empty() {
        return Err(err_at(npos, "module needs at least one generator row"));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(err_at(npos, "ragged relation matrix"));
    }
    let mut module = PresentedModule::new(&ring, rows.len(), Matrix::from_rows(rows));
    if let Some(d) = degrees {
        if d.len() != module.ngens {
            return Err(err_at(npos, "one degree per generator"));
        }
        module = module.with_degrees(d);
    }
    session.modules.insert(name.clone(), (ring_name, module));
    session.decl_order.push(name);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_cusp_session() {
        let text = "ring R = F5[x,y]/(y^2 - x^3) order grevlex weights (2,3);\n\
                    ideal p = (x - 1, y - 1);\n\
                    module M = coker [[x - 1, y - 1]];\n";
        let s = parse_session(text).unwrap();
        assert_eq!(s.rings.len(), 1);
        let r = s.ring("R").unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.is_graded());
        let p = s.ideal("p").unwrap();
        assert_eq!(p.gens.len(), 2);
        let m = s.module("M").unwrap();
        assert_eq!(m.ngens, 1);
        assert_eq!(m.rels.cols, 2);
    }

    #[test]
    fn session_render_roundtrips() {
        let text = "ring R = F5[x,y,z]/(x^2 + y^2 + z^2);\n\
                    module M = coker [[z, x+2*y],[x-2*y, -z]] degrees (0,0);\n";
        let s = parse_session(text).unwrap();
        let rendered = s.render();
        let s2 = parse_session(&rendered).unwrap();
        assert_eq!(rendered, s2.render());
    }

    #[test]
    fn missing_semicolon_is_an_error_with_position() {
        let text = "ring R = F5[x,y]";
        match parse_session(text) {
            Err(Error::Parse { line: 1, col: 17, .. }) => {}
            other => panic!("expected parse error at 1:17, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let text = "ring R = F5[x];\nideal R = (x);\n";
        assert!(parse_session(text).is_err());
    }

    #[test]
    fn objects_bind_to_named_rings() {
        let text = "ring A = F5[x];\nring B = F5[x,y];\nideal i = (x) in A;\n";
        let s = parse_session(text).unwrap();
        assert_eq!(s.ideal("i").unwrap().ring.nvars(), 1);
    }

    #[test]
    fn unknown_variable_in_module_matrix() {
        let text = "ring R = F5[x];\nmodule M = coker [[w]];\n";
        assert!(parse_session(text).is_err());
    }
}
