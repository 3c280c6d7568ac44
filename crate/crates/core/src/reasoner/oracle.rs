//! Exhaustive finite-model search, used to cross-check the tableau.
//!
//! The ontology is grounded over a domain `{0, .., k-1}` into a propositional
//! formula (Tseitin encoding, sequential counters for cardinalities) and
//! handed to a SAT solver. Data properties range over the literals that occur
//! in the ontology plus enough fresh values per datatype.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;
use varisat::{ExtendFormula, Lit, Solver};

use crate::model::Datatype;
use crate::owl::{canonical_lexical, Axiom, ClassExpr, Ontology, OwlLiteral};

/// Largest accepted domain size.
pub const MAX_BOUND: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("BOUND_TOO_LARGE: bound {bound} exceeds the enumeration budget (at most {max})")]
    BoundTooLarge { bound: u32, max: u32 },
    #[error("bound must be at least 1")]
    ZeroBound,
}

/// A finite interpretation over `{0, .., size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiniteModel {
    pub size: usize,
    pub classes: BTreeMap<String, BTreeSet<usize>>,
    pub roles: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub data: BTreeMap<String, BTreeSet<(usize, String)>>,
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {} element(s)", self.size)?;
        for (c, xs) in &self.classes {
            let xs: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{c}: {{{}}}", xs.join(", "))?;
        }
        for (r, ps) in &self.roles {
            let ps: Vec<String> = ps.iter().map(|(a, b)| format!("({a},{b})")).collect();
            writeln!(f, "{r}: {{{}}}", ps.join(", "))?;
        }
        for (q, vs) in &self.data {
            let vs: Vec<String> = vs.iter().map(|(a, v)| format!("({a},{v})")).collect();
            writeln!(f, "{q}: {{{}}}", vs.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Sat(FiniteModel),
    NoModelUpToBound(u32),
}

impl OracleResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleResult::Sat(_))
    }
}

/// Looks for a model of `o` with at least one instance of `concept`, trying
/// domain sizes 1 to `max_domain` in turn.
pub fn bounded_model_search(
    o: &Ontology,
    concept: &str,
    max_domain: u32,
) -> Result<OracleResult, OracleError> {
    if max_domain == 0 {
        return Err(OracleError::ZeroBound);
    }
    if max_domain > MAX_BOUND {
        return Err(OracleError::BoundTooLarge {
            bound: max_domain,
            max: MAX_BOUND,
        });
    }
    let universe = literal_universe(o);
    for k in 1..=max_domain as usize {
        let mut enc = Encoder::new(k, &universe);
        for ax in &o.axioms {
            enc.axiom(ax);
        }
        let goal = enc.lit(&ClassExpr::named(concept), 0);
        enc.solver.add_clause(&[goal]);
        if enc
            .solver
            .solve()
            .expect("solver runs without proof output")
        {
            return Ok(OracleResult::Sat(enc.extract()));
        }
    }
    Ok(OracleResult::NoModelUpToBound(max_domain))
}

fn literal_universe(o: &Ontology) -> Vec<(Datatype, String)> {
    let mut seen = BTreeSet::new();
    let mut max_card = 1;
    let mut stack: Vec<&ClassExpr> = Vec::new();
    for ax in &o.axioms {
        match ax {
            Axiom::SubClassOf(a, b) | Axiom::EquivalentClasses(a, b) => stack.extend([a, b]),
            Axiom::DisjointClasses(ops) => stack.extend(ops),
            Axiom::ObjectPropertyDomain(_, c)
            | Axiom::ObjectPropertyRange(_, c)
            | Axiom::DataPropertyDomain(_, c) => stack.push(c),
            _ => {}
        }
    }
    while let Some(c) = stack.pop() {
        match c {
            ClassExpr::IntersectionOf(ops) | ClassExpr::UnionOf(ops) => stack.extend(ops),
            ClassExpr::ComplementOf(inner) | ClassExpr::SomeValuesFrom(_, inner) => {
                stack.push(inner)
            }
            ClassExpr::DataHasValue(_, lit) => {
                if let Some(l) = canonical_lexical(lit.datatype, &lit.lexical) {
                    seen.insert((lit.datatype, l));
                }
            }
            ClassExpr::DataExactCardinality(n, _) => max_card = max_card.max(*n as usize + 1),
            _ => {}
        }
    }
    seen.insert((Datatype::Boolean, "true".into()));
    seen.insert((Datatype::Boolean, "false".into()));
    for dt in [Datatype::String, Datatype::Integer, Datatype::Decimal] {
        let mut added = 0;
        let mut i = 0u64;
        while added < max_card {
            let candidate = match dt {
                Datatype::String => format!("v{i}"),
                Datatype::Integer => (1000 + i).to_string(),
                _ => format!("{}.5", 1000 + i),
            };
            i += 1;
            if seen.insert((dt, candidate)) {
                added += 1;
            }
        }
    }
    seen.into_iter().collect()
}

struct Encoder<'u> {
    solver: Solver<'static>,
    k: usize,
    tru: Lit,
    universe: &'u [(Datatype, String)],
    classes: BTreeMap<String, Vec<Lit>>,
    roles: BTreeMap<String, Vec<Vec<Lit>>>,
    data: BTreeMap<String, Vec<Vec<Lit>>>,
    memo: HashMap<(ClassExpr, usize), Lit>,
}

impl<'u> Encoder<'u> {
    fn new(k: usize, universe: &'u [(Datatype, String)]) -> Self {
        let mut solver = Solver::new();
        let tru = solver.new_lit();
        solver.add_clause(&[tru]);
        Encoder {
            solver,
            k,
            tru,
            universe,
            classes: BTreeMap::new(),
            roles: BTreeMap::new(),
            data: BTreeMap::new(),
            memo: HashMap::new(),
        }
    }

    fn class(&mut self, name: &str) -> Vec<Lit> {
        if let Some(v) = self.classes.get(name) {
            return v.clone();
        }
        let v: Vec<Lit> = (0..self.k).map(|_| self.solver.new_lit()).collect();
        self.classes.insert(name.to_string(), v.clone());
        v
    }

    fn role(&mut self, name: &str) -> Vec<Vec<Lit>> {
        if let Some(v) = self.roles.get(name) {
            return v.clone();
        }
        let v: Vec<Vec<Lit>> = (0..self.k)
            .map(|_| (0..self.k).map(|_| self.solver.new_lit()).collect())
            .collect();
        self.roles.insert(name.to_string(), v.clone());
        v
    }

    fn dprop(&mut self, name: &str) -> Vec<Vec<Lit>> {
        if let Some(v) = self.data.get(name) {
            return v.clone();
        }
        let n = self.universe.len();
        let v: Vec<Vec<Lit>> = (0..self.k)
            .map(|_| (0..n).map(|_| self.solver.new_lit()).collect())
            .collect();
        self.data.insert(name.to_string(), v.clone());
        v
    }

    fn and(&mut self, lits: &[Lit]) -> Lit {
        match lits {
            [] => self.tru,
            [l] => *l,
            _ => {
                let t = self.solver.new_lit();
                let mut back = vec![t];
                for &l in lits {
                    self.solver.add_clause(&[!t, l]);
                    back.push(!l);
                }
                self.solver.add_clause(&back);
                t
            }
        }
    }

    fn or(&mut self, lits: &[Lit]) -> Lit {
        let negated: Vec<Lit> = lits.iter().map(|l| !*l).collect();
        !self.and(&negated)
    }

    /// Literal true iff at least `n` of `lits` are true.
    fn at_least(&mut self, lits: &[Lit], n: usize) -> Lit {
        if n == 0 {
            return self.tru;
        }
        if n > lits.len() {
            return !self.tru;
        }
        // counts[c] holds "at least c of the lits seen so far"
        let mut counts = vec![!self.tru; n + 1];
        counts[0] = self.tru;
        for &x in lits {
            for c in (1..=n).rev() {
                let carry = self.and(&[counts[c - 1], x]);
                counts[c] = self.or(&[counts[c], carry]);
            }
        }
        counts[n]
    }

    fn lit(&mut self, c: &ClassExpr, i: usize) -> Lit {
        if let Some(l) = self.memo.get(&(c.clone(), i)) {
            return *l;
        }
        let l = match c {
            ClassExpr::Named(n) => self.class(n)[i],
            ClassExpr::IntersectionOf(ops) => {
                let ls: Vec<Lit> = ops.iter().map(|o| self.lit(o, i)).collect();
                self.and(&ls)
            }
            ClassExpr::UnionOf(ops) => {
                let ls: Vec<Lit> = ops.iter().map(|o| self.lit(o, i)).collect();
                self.or(&ls)
            }
            ClassExpr::ComplementOf(inner) => !self.lit(inner, i),
            ClassExpr::SomeValuesFrom(p, filler) => {
                let r = self.role(p);
                let mut ls = Vec::new();
                for (j, &rij) in r[i].iter().enumerate() {
                    let f = self.lit(filler, j);
                    ls.push(self.and(&[rij, f]));
                }
                self.or(&ls)
            }
            ClassExpr::MinCardinality(n, p) => {
                let r = self.role(p);
                self.at_least(&r[i], *n as usize)
            }
            ClassExpr::MaxCardinality(n, p) => {
                let r = self.role(p);
                !self.at_least(&r[i], *n as usize + 1)
            }
            ClassExpr::ExactCardinality(n, p) => {
                let r = self.role(p);
                let lo = self.at_least(&r[i], *n as usize);
                let hi = self.at_least(&r[i], *n as usize + 1);
                self.and(&[lo, !hi])
            }
            ClassExpr::DataHasValue(q, lit) => match self.value_index(lit) {
                Some(v) => self.dprop(q)[i][v],
                None => !self.tru,
            },
            ClassExpr::DataExactCardinality(n, q) => {
                let d = self.dprop(q);
                let lo = self.at_least(&d[i], *n as usize);
                let hi = self.at_least(&d[i], *n as usize + 1);
                self.and(&[lo, !hi])
            }
        };
        self.memo.insert((c.clone(), i), l);
        l
    }

    fn value_index(&self, lit: &OwlLiteral) -> Option<usize> {
        let canon = canonical_lexical(lit.datatype, &lit.lexical)?;
        self.universe
            .iter()
            .position(|(dt, l)| *dt == lit.datatype && *l == canon)
    }

    fn axiom(&mut self, ax: &Axiom) {
        let k = self.k;
        match ax {
            Axiom::DeclareClass(c) => {
                self.class(c);
            }
            Axiom::DeclareObjectProperty(p) => {
                self.role(p);
            }
            Axiom::DeclareDataProperty(q) => {
                self.dprop(q);
            }
            Axiom::SubClassOf(a, b) => {
                for i in 0..k {
                    let (x, y) = (self.lit(a, i), self.lit(b, i));
                    self.solver.add_clause(&[!x, y]);
                }
            }
            Axiom::EquivalentClasses(a, b) => {
                for i in 0..k {
                    let (x, y) = (self.lit(a, i), self.lit(b, i));
                    self.solver.add_clause(&[!x, y]);
                    self.solver.add_clause(&[x, !y]);
                }
            }
            Axiom::DisjointClasses(ops) => {
                for i in 0..k {
                    let ls: Vec<Lit> = ops.iter().map(|o| self.lit(o, i)).collect();
                    for a in 0..ls.len() {
                        for b in a + 1..ls.len() {
                            self.solver.add_clause(&[!ls[a], !ls[b]]);
                        }
                    }
                }
            }
            Axiom::ObjectPropertyDomain(p, c) | Axiom::ObjectPropertyRange(p, c) => {
                let r = self.role(p);
                let domain = matches!(ax, Axiom::ObjectPropertyDomain(..));
                for (i, row) in r.iter().enumerate() {
                    for (j, &rij) in row.iter().enumerate() {
                        let x = self.lit(c, if domain { i } else { j });
                        self.solver.add_clause(&[!rij, x]);
                    }
                }
            }
            Axiom::DataPropertyDomain(q, c) => {
                let d = self.dprop(q);
                for (i, row) in d.iter().enumerate() {
                    let x = self.lit(c, i);
                    for &v in row {
                        self.solver.add_clause(&[!v, x]);
                    }
                }
            }
            Axiom::DataPropertyRange(q, dt) => {
                let d = self.dprop(q);
                for row in &d {
                    for (v, lit) in row.iter().enumerate() {
                        if self.universe[v].0 != *dt {
                            self.solver.add_clause(&[!*lit]);
                        }
                    }
                }
            }
        }
    }

    fn extract(&self) -> FiniteModel {
        let truth: BTreeSet<Lit> = self
            .solver
            .model()
            .unwrap_or_default()
            .into_iter()
            .collect();
        let holds = |l: &Lit| truth.contains(l);
        let mut m = FiniteModel {
            size: self.k,
            ..Default::default()
        };
        for (c, xs) in &self.classes {
            m.classes
                .insert(c.clone(), (0..self.k).filter(|i| holds(&xs[*i])).collect());
        }
        for (r, rel) in &self.roles {
            let pairs = (0..self.k)
                .flat_map(|i| (0..self.k).map(move |j| (i, j)))
                .filter(|(i, j)| holds(&rel[*i][*j]))
                .collect();
            m.roles.insert(r.clone(), pairs);
        }
        for (q, rel) in &self.data {
            let mut vals = BTreeSet::new();
            for (i, row) in rel.iter().enumerate() {
                for (v, lit) in row.iter().enumerate() {
                    if holds(lit) {
                        let (dt, lex) = &self.universe[v];
                        vals.insert((i, format!("\"{lex}\"^^{}", dt.xsd())));
                    }
                }
            }
            m.data.insert(q.clone(), vals);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> ClassExpr {
        ClassExpr::named(s)
    }

    #[test]
    fn cardinality_conflict_has_no_model() {
        let mut o = Ontology::new("http://t#");
        o.push(Axiom::SubClassOf(
            n("A"),
            ClassExpr::MinCardinality(2, "r".into()),
        ));
        o.push(Axiom::SubClassOf(
            n("A"),
            ClassExpr::MaxCardinality(1, "r".into()),
        ));
        assert_eq!(
            bounded_model_search(&o, "A", 4).unwrap(),
            OracleResult::NoModelUpToBound(4)
        );
    }

    #[test]
    fn lone_class_has_one_element_model() {
        let mut o = Ontology::new("http://t#");
        o.push(Axiom::DeclareClass("C".into()));
        match bounded_model_search(&o, "C", 1).unwrap() {
            OracleResult::Sat(m) => {
                assert_eq!(m.size, 1);
                assert_eq!(m.classes["C"], BTreeSet::from([0]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn needs_enough_elements() {
        let mut o = Ontology::new("http://t#");
        o.push(Axiom::SubClassOf(
            n("A"),
            ClassExpr::MinCardinality(2, "r".into()),
        ));
        o.push(Axiom::DisjointClasses(vec![n("A"), n("B")]));
        o.push(Axiom::ObjectPropertyRange("r".into(), n("B")));
        assert!(!bounded_model_search(&o, "A", 2).unwrap().is_sat());
        let OracleResult::Sat(m) = bounded_model_search(&o, "A", 3).unwrap() else {
            panic!()
        };
        assert_eq!(m.size, 3);
    }

    #[test]
    fn boolean_values_are_exhausted() {
        let mut o = Ontology::new("http://t#");
        o.push(Axiom::SubClassOf(
            n("A"),
            ClassExpr::DataExactCardinality(3, "f".into()),
        ));
        o.push(Axiom::DataPropertyRange("f".into(), Datatype::Boolean));
        assert!(!bounded_model_search(&o, "A", 2).unwrap().is_sat());
    }

    #[test]
    fn bound_limits() {
        let o = Ontology::new("http://t#");
        assert_eq!(
            bounded_model_search(&o, "A", 0),
            Err(OracleError::ZeroBound)
        );
        assert!(matches!(
            bounded_model_search(&o, "A", 99),
            Err(OracleError::BoundTooLarge { .. })
        ));
    }
}
