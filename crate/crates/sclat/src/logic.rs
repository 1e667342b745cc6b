//! Bounded decision procedures: the irreducible-count bound for generated
//! substructures, Tarskian evaluation, enumeration of finite bases up to
//! isomorphism, quantifier-free satisfiability, and decision of single-block
//! sentences over prime-determined completions.

use crate::asc::AscBase;
use crate::canon::canonical_labeled;
use crate::dim::Dim;
use crate::element::LatticeElement;
use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier, Sentence, Term};
use crate::poset::{bit, iter_bits, Mask, Poset};
use crate::scaled::{irreducibles_of_family, ScaledBase};
use num_bigint::BigUint;
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet};

// ---------------------------------------------------------------------------
// The bound on join-irreducibles of an n-generated base.

/// `mu(n, d) = 2^n + mu(2^(n+1), d-1)`, with `mu(n, d) = 0` for `d < 0`.
/// Errors out when an intermediate exponent makes the value unrepresentable.
pub fn mu(n: u64, d: i64) -> Result<BigUint> {
    fn rec(n: BigUint, d: i64) -> Result<BigUint> {
        if d < 0 {
            return Ok(BigUint::ZERO);
        }
        let exp = u64::try_from(&n)
            .ok()
            .filter(|&e| e <= 1 << 24)
            .ok_or_else(|| {
                Error::TooLarge("the bound exceeds any representable size".into())
            })?;
        let pow = BigUint::one() << exp;
        let next = BigUint::one() << (exp + 1);
        Ok(pow + rec(next, d - 1)?)
    }
    rec(BigUint::from(n), d)
}

/// `min(mu(n, d), cap + 1)` without materializing huge values.
pub fn mu_saturating(n: u64, d: i64, cap: u64) -> u64 {
    fn rec(n: u64, d: i64, lid: u64) -> u64 {
        if d < 0 {
            return 0;
        }
        let pow = if n >= 63 { lid } else { (1u64 << n).min(lid) };
        let next_n = if n >= 62 { u64::MAX } else { 2 * (1 << n) };
        pow.saturating_add(rec(next_n, d - 1, lid)).min(lid)
    }
    rec(n, d, cap.saturating_add(1))
}

// ---------------------------------------------------------------------------
// Evaluation

/// A base to evaluate in: plain, or atom-counted.
#[derive(Debug, Clone)]
pub enum ModelBase {
    Sc(ScaledBase),
    Asc(AscBase),
}

impl ModelBase {
    pub fn scaled(&self) -> &ScaledBase {
        match self {
            ModelBase::Sc(b) => b,
            ModelBase::Asc(b) => b.base(),
        }
    }

    pub fn asc(&self) -> Option<&AscBase> {
        match self {
            ModelBase::Sc(_) => None,
            ModelBase::Asc(b) => Some(b),
        }
    }

    pub fn canonical_form(&self) -> Vec<u8> {
        match self {
            ModelBase::Sc(b) => b.canonical_form(),
            ModelBase::Asc(b) => b.canonical_form(),
        }
    }
}

pub fn eval_term(
    base: &ScaledBase,
    assign: &BTreeMap<String, LatticeElement>,
    term: &Term,
) -> Result<LatticeElement> {
    let m = eval_term_m(base, &compile_assign(base, assign)?, &index_term(term, &vars_of(assign))?)?;
    Ok(base.elem(m))
}

/// Tarskian evaluation of a quantifier-free formula under an assignment.
pub fn eval_formula(
    model: &ModelBase,
    assign: &BTreeMap<String, LatticeElement>,
    f: &Formula,
) -> Result<bool> {
    if f.uses_at() && model.asc().is_none() {
        return Err(Error::Semantic(
            "At predicates need atom-count data on the base".into(),
        ));
    }
    let vars = vars_of(assign);
    let compiled = index_formula(f, &vars)?;
    let masks = compile_assign(model.scaled(), assign)?;
    eval_iformula(model.scaled(), model.asc(), &masks, &compiled)
}

fn vars_of(assign: &BTreeMap<String, LatticeElement>) -> Vec<String> {
    assign.keys().cloned().collect()
}

fn compile_assign(
    base: &ScaledBase,
    assign: &BTreeMap<String, LatticeElement>,
) -> Result<Vec<Mask>> {
    assign.values().map(|e| base.check_elem(e)).collect()
}

// Indexed mirror of the AST, for tight evaluation loops.
enum ITerm {
    Zero,
    One,
    Var(usize),
    Join(Box<ITerm>, Box<ITerm>),
    Meet(Box<ITerm>, Box<ITerm>),
    Diff(Box<ITerm>, Box<ITerm>),
    Comp(u32, Box<ITerm>),
}

enum IFormula {
    Eq(ITerm, ITerm),
    Le(ITerm, ITerm),
    AtK(u32, ITerm),
    Not(Box<IFormula>),
    And(Box<IFormula>, Box<IFormula>),
    Or(Box<IFormula>, Box<IFormula>),
}

fn index_term(t: &Term, vars: &[String]) -> Result<ITerm> {
    Ok(match t {
        Term::Zero => ITerm::Zero,
        Term::One => ITerm::One,
        Term::Var(v) => ITerm::Var(
            vars.iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::Semantic(format!("unbound variable {v}")))?,
        ),
        Term::Join(a, b) => ITerm::Join(
            Box::new(index_term(a, vars)?),
            Box::new(index_term(b, vars)?),
        ),
        Term::Meet(a, b) => ITerm::Meet(
            Box::new(index_term(a, vars)?),
            Box::new(index_term(b, vars)?),
        ),
        Term::Diff(a, b) => ITerm::Diff(
            Box::new(index_term(a, vars)?),
            Box::new(index_term(b, vars)?),
        ),
        Term::Comp(k, t) => ITerm::Comp(*k, Box::new(index_term(t, vars)?)),
    })
}

fn index_formula(f: &Formula, vars: &[String]) -> Result<IFormula> {
    Ok(match f {
        Formula::Eq(a, b) => IFormula::Eq(index_term(a, vars)?, index_term(b, vars)?),
        Formula::Le(a, b) => IFormula::Le(index_term(a, vars)?, index_term(b, vars)?),
        Formula::AtK(k, t) => IFormula::AtK(*k, index_term(t, vars)?),
        Formula::Not(g) => IFormula::Not(Box::new(index_formula(g, vars)?)),
        Formula::And(a, b) => IFormula::And(
            Box::new(index_formula(a, vars)?),
            Box::new(index_formula(b, vars)?),
        ),
        Formula::Or(a, b) => IFormula::Or(
            Box::new(index_formula(a, vars)?),
            Box::new(index_formula(b, vars)?),
        ),
    })
}

fn eval_term_m(base: &ScaledBase, assign: &[Mask], t: &ITerm) -> Result<Mask> {
    Ok(match t {
        ITerm::Zero => 0,
        ITerm::One => base.poset().full_mask(),
        ITerm::Var(i) => assign[*i],
        ITerm::Join(a, b) => eval_term_m(base, assign, a)? | eval_term_m(base, assign, b)?,
        ITerm::Meet(a, b) => eval_term_m(base, assign, a)? & eval_term_m(base, assign, b)?,
        ITerm::Diff(a, b) => base
            .poset()
            .diff_m(eval_term_m(base, assign, a)?, eval_term_m(base, assign, b)?),
        ITerm::Comp(k, t) => base.ck_m(eval_term_m(base, assign, t)?, *k),
    })
}

fn eval_iformula(
    base: &ScaledBase,
    asc: Option<&AscBase>,
    assign: &[Mask],
    f: &IFormula,
) -> Result<bool> {
    Ok(match f {
        IFormula::Eq(a, b) => eval_term_m(base, assign, a)? == eval_term_m(base, assign, b)?,
        IFormula::Le(a, b) => {
            eval_term_m(base, assign, a)? & !eval_term_m(base, assign, b)? == 0
        }
        IFormula::AtK(k, t) => {
            let asc = asc.ok_or_else(|| {
                Error::Semantic("At predicates need atom-count data on the base".into())
            })?;
            asc.asc_m(eval_term_m(base, assign, t)?) == *k
        }
        IFormula::Not(g) => !eval_iformula(base, asc, assign, g)?,
        IFormula::And(a, b) => {
            eval_iformula(base, asc, assign, a)? && eval_iformula(base, asc, assign, b)?
        }
        IFormula::Or(a, b) => {
            eval_iformula(base, asc, assign, a)? || eval_iformula(base, asc, assign, b)?
        }
    })
}

// ---------------------------------------------------------------------------
// Enumeration of bases up to isomorphism

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub d: u32,
    pub max_irr: usize,
    pub asc: bool,
    /// Allowed positive atom counts in asc mode (0 is always allowed).
    pub k_cap: BTreeSet<u32>,
}

impl EnumOptions {
    pub fn new(d: u32, max_irr: usize) -> EnumOptions {
        EnumOptions {
            d,
            max_irr,
            asc: false,
            k_cap: BTreeSet::new(),
        }
    }
}

/// Every labeled poset on at most `max_irr` points with strictly increasing
/// labels into `{0..d}`, up to isomorphism, each exactly once; in asc mode,
/// additionally every atom-count assignment drawn from the cap set. The
/// stream is deterministic: by point count, then canonical form.
pub fn enumerate_bases(opts: &EnumOptions) -> Result<Vec<ModelBase>> {
    let mut levels: Vec<Vec<ScaledBase>> = vec![vec![ScaledBase::trivial(opts.d)]];
    let mut total = 1usize;
    for _ in 1..=opts.max_irr {
        let prev = levels.last().unwrap();
        let mut seen: BTreeMap<Vec<u8>, ScaledBase> = BTreeMap::new();
        for b in prev {
            let p = b.poset();
            let fresh = format!("p{}", p.len());
            for s in p.all_downsets()? {
                let floor = iter_bits(s).map(|i| b.label(i) + 1).max().unwrap_or(0);
                for v in floor..=opts.d {
                    let mut names: Vec<String> = p.names().to_vec();
                    names.push(fresh.clone());
                    let mut pairs: Vec<(String, String)> = p.covers();
                    for i in iter_bits(p.maximals_mask(s)) {
                        pairs.push((p.name(i).to_string(), fresh.clone()));
                    }
                    let mut labels: BTreeMap<String, u32> = names
                        .iter()
                        .take(p.len())
                        .enumerate()
                        .map(|(i, n)| (n.clone(), b.label(i)))
                        .collect();
                    labels.insert(fresh.clone(), v);
                    let poset = Poset::new(&names, &pairs)?;
                    let grown = ScaledBase::new(poset, opts.d, &labels)?;
                    seen.entry(grown.canonical_form()).or_insert(grown);
                }
            }
        }
        total += seen.len();
        if total > 200_000 {
            return Err(Error::TooLarge(
                "base enumeration exceeded 200000 isomorphism classes; lower max-irr".into(),
            ));
        }
        if seen.is_empty() {
            break;
        }
        levels.push(seen.into_values().collect());
    }

    let mut out = Vec::new();
    for level in levels {
        for b in level {
            if !opts.asc {
                out.push(ModelBase::Sc(b));
                continue;
            }
            let p = b.poset();
            let atoms0: Vec<usize> = (0..p.len())
                .filter(|&i| p.below_mask(i) == bit(i) && b.label(i) == 0)
                .collect();
            let mut values: Vec<u32> = vec![0];
            values.extend(opts.k_cap.iter().copied().filter(|&k| k > 0));
            let mut seen: BTreeMap<Vec<u8>, AscBase> = BTreeMap::new();
            let mut stack = vec![0usize; atoms0.len()];
            loop {
                let weights: BTreeMap<String, u32> = atoms0
                    .iter()
                    .zip(&stack)
                    .map(|(&i, &vi)| (p.name(i).to_string(), values[vi]))
                    .collect();
                let asc = AscBase::new(b.clone(), &weights)?;
                seen.entry(asc.canonical_form()).or_insert(asc);
                // Next tuple in the cartesian product.
                let mut k = 0;
                loop {
                    if k == stack.len() {
                        break;
                    }
                    stack[k] += 1;
                    if stack[k] < values.len() {
                        break;
                    }
                    stack[k] = 0;
                    k += 1;
                }
                if k == stack.len() {
                    break;
                }
            }
            out.extend(seen.into_values().map(ModelBase::Asc));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Decision outcomes

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Sat,
    Unsat,
    True,
    False,
}

#[derive(Debug)]
pub struct WitnessData {
    pub base: ModelBase,
    /// Variable name -> maximal antichain of the witnessing element.
    pub assignment: Vec<(String, Vec<String>)>,
}

#[derive(Debug)]
pub struct DecisionOutcome {
    pub verdict: Verdict,
    pub witness: Option<WitnessData>,
    pub bound_used: usize,
    /// `false` marks bound-capped runs: a negative verdict only means "no
    /// witness up to the bound".
    pub exhaustive: bool,
}

#[derive(Debug, Clone)]
pub struct SatOptions {
    pub d: u32,
    pub bound_override: Option<usize>,
    /// Cap on the searched irreducible count (soundness is kept; a capped
    /// negative verdict reports exhaustive = false).
    pub irr_ceiling: usize,
    pub asc: bool,
    pub k_cap: Option<BTreeSet<u32>>,
}

impl SatOptions {
    pub fn new(d: u32) -> SatOptions {
        SatOptions {
            d,
            bound_override: None,
            irr_ceiling: 12,
            asc: false,
            k_cap: None,
        }
    }
}

fn default_k_cap(explicit: &Option<BTreeSet<u32>>, matrix: &Formula, prime_max: u32) -> BTreeSet<u32> {
    if let Some(k) = explicit {
        return k.clone();
    }
    let hi = matrix.max_at_index().max(prime_max) + 1;
    (0..=hi).collect()
}

/// Canonical form of the substructure generated by an assignment, with the
/// assigned elements pinned; the memo key that kills symmetric duplicates.
/// Also returns the generated irreducible count.
fn closure_canon(base: &ScaledBase, asc: Option<&AscBase>, assign: &[Mask]) -> (Vec<u8>, usize) {
    let family = base.sc_closure(assign);
    let irr = irreducibles_of_family(&family);
    let below: Vec<Mask> = irr
        .iter()
        .map(|&e| {
            irr.iter()
                .enumerate()
                .filter(|&(_, &f)| f & !e == 0)
                .fold(0, |acc, (j, _)| acc | bit(j))
        })
        .collect();
    let colors: Vec<Vec<u32>> = irr
        .iter()
        .map(|&e| {
            let label = match base.scdim_m(e) {
                Dim::Finite(v) => v,
                Dim::NegInf => unreachable!("irreducibles are non-zero"),
            };
            vec![label, asc.map_or(0, |a| a.asc_m(e))]
        })
        .collect();
    let marks: Vec<Mask> = assign
        .iter()
        .map(|&a| {
            irr.iter()
                .enumerate()
                .filter(|&(_, &f)| f & !a == 0)
                .fold(0, |acc, (j, _)| acc | bit(j))
        })
        .collect();
    (canonical_labeled(&below, &colors, &marks).bytes, irr.len())
}

struct Searcher<'a> {
    matrix: &'a IFormula,
    nvars: usize,
    mu_exceeds: bool,
    bound: usize,
    seen: BTreeSet<Vec<u8>>,
}

impl Searcher<'_> {
    fn search(&mut self, bases: &[ModelBase]) -> Result<Option<WitnessData>> {
        for model in bases {
            let base = model.scaled();
            let elems = base.poset().all_downsets()?;
            let mut assign = vec![0 as Mask; self.nvars];
            if self.search_rec(model, base, &elems, &mut assign, 0)? {
                let vars_named: Vec<(String, Vec<String>)> = (0..self.nvars)
                    .map(|i| {
                        let m = assign[i];
                        let maxs = base.poset().maximals_mask(m);
                        (format!("#{i}"), base.poset().names_from_mask(maxs))
                    })
                    .collect();
                return Ok(Some(WitnessData {
                    base: model.clone(),
                    assignment: vars_named,
                }));
            }
        }
        Ok(None)
    }

    fn search_rec(
        &mut self,
        model: &ModelBase,
        base: &ScaledBase,
        elems: &[Mask],
        assign: &mut Vec<Mask>,
        at: usize,
    ) -> Result<bool> {
        if at == self.nvars {
            let (key, irr_count) = closure_canon(base, model.asc(), assign);
            if !self.seen.insert(key) {
                return Ok(false);
            }
            if eval_iformula(base, model.asc(), assign, self.matrix)? {
                // Direct check of the generated-substructure bound.
                assert!(
                    self.mu_exceeds || irr_count <= self.bound,
                    "witness closure has {irr_count} irreducibles, above the bound"
                );
                return Ok(true);
            }
            return Ok(false);
        }
        for &e in elems {
            assign[at] = e;
            if self.search_rec(model, base, elems, assign, at + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Bounded satisfiability of a quantifier-free formula over finite bases:
/// a verified witness, or no model up to the searched bound (exhaustive
/// exactly when the bound reaches `mu(n, d)`).
pub fn sat_qf(matrix: &Formula, opts: &SatOptions) -> Result<DecisionOutcome> {
    if matrix.uses_at() && !opts.asc {
        return Err(Error::Semantic(
            "At predicates require asc mode (--asc)".into(),
        ));
    }
    let vars = matrix.free_vars();
    let n = vars.len();
    let mu_capped = mu_saturating(n as u64, opts.d as i64, opts.irr_ceiling as u64);
    let bound = opts
        .bound_override
        .unwrap_or_else(|| mu_capped.min(opts.irr_ceiling as u64) as usize);
    let covers_mu = mu_saturating(n as u64, opts.d as i64, bound as u64) <= bound as u64;

    let mut enum_opts = EnumOptions::new(opts.d, bound);
    enum_opts.asc = opts.asc;
    enum_opts.k_cap = default_k_cap(&opts.k_cap, matrix, 0);
    let bases = enumerate_bases(&enum_opts)?;

    let compiled = index_formula(matrix, &vars)?;
    let mut searcher = Searcher {
        matrix: &compiled,
        nvars: n,
        mu_exceeds: !covers_mu,
        bound,
        seen: BTreeSet::new(),
    };
    let witness = searcher.search(&bases)?;
    let found = witness.is_some();
    let witness = witness.map(|mut w| {
        for (i, (name, _)) in w.assignment.iter_mut().enumerate() {
            *name = vars[i].clone();
        }
        w
    });
    // A verified witness is unconditional; a miss is exhaustive only when
    // the whole mu-bound was searched (and no asc cap may bind).
    let exhaustive = found || (covers_mu && !opts.asc);
    if let Some(w) = &witness {
        let assign: BTreeMap<String, LatticeElement> = w
            .assignment
            .iter()
            .map(|(v, antichain)| {
                Ok((
                    v.clone(),
                    w.base.scaled().element(antichain)?,
                ))
            })
            .collect::<Result<_>>()?;
        assert!(
            eval_formula(&w.base, &assign, matrix)?,
            "witness must re-evaluate to true"
        );
    }
    Ok(DecisionOutcome {
        verdict: if found { Verdict::Sat } else { Verdict::Unsat },
        witness,
        bound_used: bound,
        exhaustive,
    })
}

#[derive(Debug, Clone)]
pub struct DecideOptions {
    pub sat: SatOptions,
}

impl DecideOptions {
    pub fn new(d: u32) -> DecideOptions {
        DecideOptions {
            sat: SatOptions::new(d),
        }
    }
}

/// Prime-substructure invariant used to match candidate bases to the given
/// completion.
fn prime_invariant(model: &ModelBase) -> Result<Vec<u8>> {
    match model {
        ModelBase::Sc(b) => Ok(b.prime_substructure()?.induced.base.canonical_form()),
        ModelBase::Asc(b) => b.completion_invariant(),
    }
}

/// Decides a single-block sentence over the completion determined by a prime
/// (empty-set-generated) base: TRUE exactly when some finite base whose
/// prime substructure matches satisfies the matrix within the bound.
/// Universal sentences are decided by negation.
pub fn decide_sentence(
    prime: &ModelBase,
    sentence: &Sentence,
    opts: &DecideOptions,
) -> Result<DecisionOutcome> {
    // The input must generate itself from the empty set.
    let prime_sub = prime.scaled().prime_substructure()?;
    let all = prime.scaled().poset().all_downsets()?;
    if prime_sub.family.len() != all.len() {
        let extra: Vec<String> = all
            .iter()
            .filter(|m| !prime_sub.family.contains(m))
            .take(4)
            .map(|&m| {
                let maxs = prime.scaled().poset().maximals_mask(m);
                format!("{:?}", prime.scaled().poset().names_from_mask(maxs))
            })
            .collect();
        return Err(Error::Refused(format!(
            "base is not generated by the empty set; elements outside the closure: {}",
            extra.join(", ")
        )));
    }
    let asc_mode = matches!(prime, ModelBase::Asc(_));
    if let ModelBase::Asc(a) = prime {
        if !a.is_standard() {
            return Err(Error::Refused(
                "standard-completion semantics requires a standard prime".into(),
            ));
        }
    }
    if sentence.matrix.uses_at() && !asc_mode {
        return Err(Error::Semantic(
            "At predicates require an atom-counted prime".into(),
        ));
    }

    let (negated, matrix) = match sentence.quantifier {
        Some(Quantifier::Forall) => (true, Formula::Not(Box::new(sentence.matrix.clone()))),
        _ => (false, sentence.matrix.clone()),
    };
    let vars = sentence.vars.clone();
    let n = vars.len();
    let d = opts.sat.d;
    let mu_capped = mu_saturating(n as u64, d as i64, opts.sat.irr_ceiling as u64);
    let bound = opts
        .sat
        .bound_override
        .unwrap_or_else(|| mu_capped.min(opts.sat.irr_ceiling as u64) as usize)
        .max(prime.scaled().poset().len());
    let covers_mu = mu_saturating(n as u64, d as i64, bound as u64) <= bound as u64;

    let prime_max_k = prime
        .asc()
        .map(|a| a.weights().iter().copied().max().unwrap_or(0))
        .unwrap_or(0);
    let mut enum_opts = EnumOptions::new(d, bound);
    enum_opts.asc = asc_mode;
    enum_opts.k_cap = default_k_cap(&opts.sat.k_cap, &sentence.matrix, prime_max_k);
    let want = prime_invariant(prime)?;
    let bases: Vec<ModelBase> = enumerate_bases(&enum_opts)?
        .into_iter()
        .filter(|b| prime_invariant(b).map(|inv| inv == want).unwrap_or(false))
        .collect();

    let compiled = index_formula(&matrix, &vars)?;
    let mut searcher = Searcher {
        matrix: &compiled,
        nvars: n,
        mu_exceeds: !covers_mu,
        bound,
        seen: BTreeSet::new(),
    };
    let witness = searcher.search(&bases)?.map(|mut w| {
        for (i, (name, _)) in w.assignment.iter_mut().enumerate() {
            *name = vars[i].clone();
        }
        w
    });
    let found = witness.is_some();
    let exists_exhaustive = found || (covers_mu && !asc_mode);
    let (verdict, exhaustive) = if negated {
        // A witness refutes the universal sentence.
        (
            if found { Verdict::False } else { Verdict::True },
            exists_exhaustive,
        )
    } else {
        (
            if found { Verdict::True } else { Verdict::False },
            exists_exhaustive,
        )
    };
    Ok(DecisionOutcome {
        verdict,
        witness,
        bound_used: bound,
        exhaustive,
    })
}

/// Elementary equivalence of the completions the two bases determine:
/// equality of prime invariants (atom-counted when both bases carry counts).
pub fn theory_equal(a: &ModelBase, b: &ModelBase) -> Result<bool> {
    match (a, b) {
        (ModelBase::Sc(_), ModelBase::Sc(_)) | (ModelBase::Asc(_), ModelBase::Asc(_)) => {
            Ok(prime_invariant(a)? == prime_invariant(b)?)
        }
        _ => Err(Error::Argument(
            "cannot compare an atom-counted base with a plain one".into(),
        )),
    }
}

/// The conjunction of all atomic facts of a prime base over fresh variables,
/// used by cross-checks: `decide = TRUE` implies `sat(matrix /\ diagram)`.
pub fn prime_diagram(base: &ScaledBase) -> Result<(Formula, Vec<String>)> {
    let elems = base.poset().all_downsets()?;
    let var = |i: usize| Term::Var(format!("e{i}"));
    let pos = |m: Mask| elems.iter().position(|&x| x == m).unwrap();
    let mut facts: Vec<Formula> = Vec::new();
    for (i, &a) in elems.iter().enumerate() {
        if a == 0 {
            facts.push(Formula::Eq(var(i), Term::Zero));
        }
        if a == base.poset().full_mask() {
            facts.push(Formula::Eq(var(i), Term::One));
        }
        for (j, &b) in elems.iter().enumerate() {
            if j > i {
                facts.push(Formula::Not(Box::new(Formula::Eq(var(i), var(j)))));
            }
            facts.push(Formula::Eq(
                Term::Join(Box::new(var(i)), Box::new(var(j))),
                var(pos(a | b)),
            ));
            facts.push(Formula::Eq(
                Term::Diff(Box::new(var(i)), Box::new(var(j))),
                var(pos(base.poset().diff_m(a, b))),
            ));
        }
        for k in 0..=base.d() {
            facts.push(Formula::Eq(
                Term::Comp(k, Box::new(var(i))),
                var(pos(base.ck_m(a, k))),
            ));
        }
    }
    let formula = facts
        .into_iter()
        .reduce(|x, y| Formula::And(Box::new(x), Box::new(y)))
        .expect("at least one element");
    let vars = (0..elems.len()).map(|i| format!("e{i}")).collect();
    Ok((formula, vars))
}
