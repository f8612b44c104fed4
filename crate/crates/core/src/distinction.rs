//! Decision procedures for sigma-distinction of unitary representations.
//!
//! Two independent routes reach a verdict:
//!
//! * [`is_distinguished`] evaluates the sigma-induced criterion directly on
//!   the Tadic multiset.
//! * [`inductive_checker`] splits off the generic part, walks the rigid part
//!   down its highest shifted derivatives, and only ever applies the generic
//!   criterion ([`is_distinguished_generic`]), which decides self-duality by
//!   explicit pairing instead of comparing whole multisets.
//!
//! Every verdict comes with a [`ProofTrace`] naming the rule applied at each
//! step.

use std::fmt;

use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::derivative::{highest_shifted_derivative, is_generic, split_rigid_generic};
use crate::error::{Error, Result};
use crate::segment::Segment;
use crate::unitary::{Factor, SpehFactor, UnitaryRep};

pub const TRACE_VERSION: u32 = 1;

/// Rule tokens are frozen; tooling matches on the serialized names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    /// Unitary representations: distinguished iff sigma-induced.
    #[serde(rename = "THM-UNITDIST")]
    UnitaryDistinction,
    /// Segment `St(rho,l)` is distinguished iff rho is `(sigma, eta^(l-1))`-distinguished.
    #[serde(rename = "PROP-DISCRDIST")]
    DiscreteSeries,
    /// `u(D,k)` is distinguished iff `D` is.
    #[serde(rename = "COR-SPEHDIST")]
    SpehReduction,
    /// `D` distinguished iff `D_+` is `(sigma, eta)`-distinguished.
    #[serde(rename = "COR-ALTERNATION")]
    Alternation,
    /// Generic unitary representations: distinguished iff sigma-induced.
    #[serde(rename = "THM-DISTGEN")]
    GenericDistinction,
    /// Rigid representations: sigma-induced iff the highest shifted derivative is.
    #[serde(rename = "LEM-DERNIER")]
    DerivativeReduction,
    #[serde(rename = "DEF-SIGMA-INDUCED")]
    SigmaInduced,
    /// Distinguished representations satisfy `pi^v = pi^sigma`.
    #[serde(rename = "PROP-SELFDUAL-NECESSARY")]
    SelfDualNecessary,
}

impl Rule {
    pub fn token(self) -> &'static str {
        match self {
            Rule::UnitaryDistinction => "THM-UNITDIST",
            Rule::DiscreteSeries => "PROP-DISCRDIST",
            Rule::SpehReduction => "COR-SPEHDIST",
            Rule::Alternation => "COR-ALTERNATION",
            Rule::GenericDistinction => "THM-DISTGEN",
            Rule::DerivativeReduction => "LEM-DERNIER",
            Rule::SigmaInduced => "DEF-SIGMA-INDUCED",
            Rule::SelfDualNecessary => "PROP-SELFDUAL-NECESSARY",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofTrace {
    pub rule: Rule,
    pub verdict: bool,
    pub subject: String,
    pub children: Vec<ProofTrace>,
}

#[derive(Serialize)]
struct TraceDocument<'a> {
    version: u32,
    #[serde(rename = "traceVersion")]
    trace_version: u32,
    #[serde(flatten)]
    root: &'a ProofTrace,
}

impl ProofTrace {
    fn leaf(rule: Rule, verdict: bool, subject: String) -> ProofTrace {
        ProofTrace {
            rule,
            verdict,
            subject,
            children: Vec::new(),
        }
    }

    /// Node whose verdict is the conjunction of its children.
    fn all(rule: Rule, subject: String, children: Vec<ProofTrace>) -> ProofTrace {
        ProofTrace {
            rule,
            verdict: children.iter().all(|c| c.verdict),
            subject,
            children,
        }
    }

    /// Versioned JSON document with stable key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.document()).expect("trace serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("trace serialization cannot fail")
    }

    fn document(&self) -> TraceDocument<'_> {
        TraceDocument {
            version: 1,
            trace_version: TRACE_VERSION,
            root: self,
        }
    }

    /// Depth-first iterator over all nodes.
    pub fn nodes(&self) -> Vec<&ProofTrace> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let node = out[i];
            out.extend(node.children.iter());
            i += 1;
        }
        out
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let mark = if self.verdict { "yes" } else { "no " };
        writeln!(f, "{:indent$}[{mark}] {} {}", "", self.rule, self.subject, indent = 2 * depth)?;
        for child in &self.children {
            child.write_tree(f, depth + 1)?;
        }
        Ok(())
    }
}

/// Indented tree, one node per line.
impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

fn segment_leaf(segment: &Segment, alphabet: &Alphabet) -> ProofTrace {
    let verdict = segment.distinguished(alphabet).unwrap_or(false);
    ProofTrace::leaf(Rule::DiscreteSeries, verdict, segment.display(alphabet).to_string())
}

fn speh_node(speh: &SpehFactor, alphabet: &Alphabet) -> ProofTrace {
    let subject = Factor::Speh(speh.clone()).display(alphabet).to_string();
    ProofTrace::all(Rule::SpehReduction, subject, vec![segment_leaf(speh.segment(), alphabet)])
}

/// Sigma-induced criterion: `pi` is sigma-self-dual and every sigma-self-dual
/// Speh factor of odd multiplicity is built on a distinguished segment.
/// Complementary factors only enter through self-duality.
pub fn is_sigma_induced(rep: &UnitaryRep, alphabet: &Alphabet) -> ProofTrace {
    let mut children = vec![ProofTrace::leaf(
        Rule::SelfDualNecessary,
        rep.is_sigma_self_dual(alphabet),
        rep.display(alphabet).to_string(),
    )];
    for (factor, mult) in rep.factors() {
        if let Factor::Speh(speh) = factor {
            if mult % 2 == 1 && speh.is_sigma_self_dual(alphabet) {
                children.push(speh_node(speh, alphabet));
            }
        }
    }
    ProofTrace::all(Rule::SigmaInduced, rep.display(alphabet).to_string(), children)
}

/// Trace-free form of [`is_sigma_induced`].
pub fn sigma_induced(rep: &UnitaryRep, alphabet: &Alphabet) -> bool {
    rep.is_sigma_self_dual(alphabet)
        && rep.factors().iter().all(|(factor, mult)| match factor {
            Factor::Speh(speh) if mult % 2 == 1 && speh.is_sigma_self_dual(alphabet) => {
                speh.segment().distinguished(alphabet).unwrap_or(false)
            }
            _ => true,
        })
}

/// Main verdict: a unitary representation is distinguished iff it is sigma-induced.
pub fn is_distinguished(rep: &UnitaryRep, alphabet: &Alphabet) -> ProofTrace {
    let induced = is_sigma_induced(rep, alphabet);
    ProofTrace::all(
        Rule::UnitaryDistinction,
        rep.display(alphabet).to_string(),
        vec![induced],
    )
}

/// Trace-free form of [`is_distinguished`].
pub fn distinguished(rep: &UnitaryRep, alphabet: &Alphabet) -> bool {
    sigma_induced(rep, alphabet)
}

/// Generic criterion, for representations whose factors all have `k = 1`.
///
/// Each factor not fixed by `sigma o dual` must meet its partner with equal
/// multiplicity; each fixed Speh factor of odd multiplicity must sit on a
/// distinguished segment.
pub fn is_distinguished_generic(rep: &UnitaryRep, alphabet: &Alphabet) -> Result<ProofTrace> {
    if let Some((f, _)) = rep.factors().iter().find(|(f, _)| f.k() != 1) {
        return Err(Error::NotGeneric(f.display(alphabet).to_string()));
    }
    Ok(generic_criterion(rep, alphabet))
}

fn generic_criterion(rep: &UnitaryRep, alphabet: &Alphabet) -> ProofTrace {
    let mut children = Vec::new();
    for (factor, mult) in rep.factors() {
        let partner = factor.sigma_dual(alphabet);
        if partner == *factor {
            if let Factor::Speh(speh) = factor {
                if mult % 2 == 1 {
                    children.push(speh_node(speh, alphabet));
                }
            }
            continue;
        }
        let partner_mult = rep.multiplicity(&partner);
        if partner < *factor && partner_mult > 0 {
            // already paired when the partner was visited
            continue;
        }
        children.push(ProofTrace::leaf(
            Rule::SelfDualNecessary,
            partner_mult == *mult,
            format!(
                "{} x {}",
                factor.display(alphabet),
                partner.display(alphabet)
            ),
        ));
    }
    ProofTrace::all(Rule::GenericDistinction, rep.display(alphabet).to_string(), children)
}

/// Independent decision procedure following the induction on the rigid part.
///
/// Checks self-duality, then splits `pi = pi_rigid x pi_generic`; the generic
/// part is judged by the generic criterion and the rigid part is replaced by
/// its highest shifted derivative and judged again, until nothing rigid is
/// left.
pub fn inductive_checker(rep: &UnitaryRep, alphabet: &Alphabet) -> ProofTrace {
    let mut children = vec![ProofTrace::leaf(
        Rule::SelfDualNecessary,
        rep.is_sigma_self_dual(alphabet),
        rep.display(alphabet).to_string(),
    )];
    children.extend(reduce(rep, alphabet));
    ProofTrace::all(Rule::UnitaryDistinction, rep.display(alphabet).to_string(), children)
}

fn reduce(rep: &UnitaryRep, alphabet: &Alphabet) -> Vec<ProofTrace> {
    let (rigid, generic) = split_rigid_generic(rep);
    let mut out = Vec::new();
    if !generic.is_empty() || rigid.is_empty() {
        debug_assert!(is_generic(&generic));
        out.push(generic_criterion(&generic, alphabet));
    }
    if !rigid.is_empty() {
        let derived = highest_shifted_derivative(&rigid);
        out.push(ProofTrace::all(
            Rule::DerivativeReduction,
            rigid.display(alphabet).to_string(),
            reduce(&derived, alphabet),
        ));
    }
    out
}

/// The two irreducible subquotients of `pi(u(D,k), 1/2)`:
/// `(u(D_-,k) x u(D_+,k), u(D,k-1) x u(D,k+1))`, trivial factors dropped.
pub fn end_of_complementary_series(delta: &Segment, k: i64) -> Result<(UnitaryRep, UnitaryRep)> {
    let base = SpehFactor::new(delta.clone(), k)?;
    if k < 2 {
        return Err(Error::BadMultiplier { k, min: 2 });
    }
    let k = base.k();
    let up = delta.up()?;
    let down = delta.down()?;
    let mut first = vec![Factor::Speh(SpehFactor::new(up, i64::from(k))?)];
    if !down.is_trivial() {
        first.push(Factor::Speh(SpehFactor::new(down, i64::from(k))?));
    }
    let second = [k - 1, k + 1]
        .into_iter()
        .filter_map(|j| base.with_k(j).map(Factor::Speh));
    Ok((
        UnitaryRep::from_factors(first),
        UnitaryRep::from_factors(second),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dichotomy {
    #[serde(rename = "SIGMA")]
    Sigma,
    #[serde(rename = "ETA")]
    Eta,
}

impl fmt::Display for Dichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dichotomy::Sigma => "SIGMA",
            Dichotomy::Eta => "ETA",
        })
    }
}

/// A sigma-self-dual Speh factor is either sigma-distinguished or
/// `(sigma, eta)`-distinguished, never both.
pub fn dichotomy(speh: &SpehFactor, alphabet: &Alphabet) -> Result<Dichotomy> {
    if !speh.is_sigma_self_dual(alphabet) {
        return Err(Error::NotSelfDual(
            Factor::Speh(speh.clone()).display(alphabet).to_string(),
        ));
    }
    if speh.segment().distinguished(alphabet)? {
        Ok(Dichotomy::Sigma)
    } else {
        Ok(Dichotomy::Eta)
    }
}

/// `(sigma, eta)`-distinction of a segment of length >= 2 through the
/// segment one step shorter.
pub fn segment_eta_trace(segment: &Segment, alphabet: &Alphabet) -> Result<ProofTrace> {
    let verdict = segment.eta_distinguished(alphabet)?;
    let mut children = Vec::new();
    let shorter = segment.down()?;
    if !shorter.is_trivial() {
        children.push(segment_leaf(&shorter, alphabet));
    }
    Ok(ProofTrace {
        rule: Rule::Alternation,
        verdict,
        subject: segment.display(alphabet).to_string(),
        children,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::testing::fixture;
    use crate::unitary::ComplementaryFactor;

    fn speh(a: &Alphabet, id: &str, l: u32, k: i64) -> Factor {
        Factor::Speh(SpehFactor::new(Segment::st(a.rho(id).unwrap(), l), k).unwrap())
    }

    fn rep(fs: impl IntoIterator<Item = Factor>) -> UnitaryRep {
        UnitaryRep::from_factors(fs)
    }

    #[test]
    fn sigma_induced_examples() {
        let a = fixture();
        let yes = rep([speh(&a, "r0", 3, 2)]);
        assert!(is_sigma_induced(&yes, &a).verdict);
        let pair = rep([speh(&a, "t", 1, 1), speh(&a, "ts", 1, 1)]);
        assert!(is_sigma_induced(&pair, &a).verdict);
        let no = rep([speh(&a, "r0", 2, 1)]);
        let trace = is_sigma_induced(&no, &a);
        assert!(!trace.verdict);
        assert!(trace
            .nodes()
            .iter()
            .any(|n| n.rule == Rule::DiscreteSeries && !n.verdict));
        // even multiplicity lifts the segment condition
        assert!(is_sigma_induced(&no.product(&no), &a).verdict);
    }

    #[test]
    fn distinguished_examples() {
        let a = fixture();
        let yes = is_distinguished(&rep([speh(&a, "r0", 3, 4)]), &a);
        assert!(yes.verdict);
        assert_eq!(yes.rule, Rule::UnitaryDistinction);
        assert!(!is_distinguished(&rep([speh(&a, "r0", 2, 4)]), &a).verdict);
        assert!(is_distinguished(&UnitaryRep::empty(), &a).verdict);
        assert!(distinguished(&UnitaryRep::empty(), &a));
    }

    #[test]
    fn generic_examples() {
        let a = fixture();
        let t = is_distinguished_generic(&rep([speh(&a, "r0", 1, 1)]), &a).unwrap();
        assert!(t.verdict);
        assert_eq!(t.rule, Rule::GenericDistinction);
        assert!(!is_distinguished_generic(&rep([speh(&a, "t", 1, 1)]), &a).unwrap().verdict);
        assert!(matches!(
            is_distinguished_generic(&rep([speh(&a, "r0", 2, 2)]), &a),
            Err(Error::NotGeneric(_))
        ));
        let unbalanced = rep([speh(&a, "t", 1, 1), speh(&a, "t", 1, 1), speh(&a, "ts", 1, 1)]);
        assert!(!is_distinguished_generic(&unbalanced, &a).unwrap().verdict);
    }

    #[test]
    fn inductive_examples() {
        let a = fixture();
        let t = inductive_checker(&rep([speh(&a, "r0", 3, 2)]), &a);
        assert!(t.verdict);
        let lemma = t
            .children
            .iter()
            .find(|c| c.rule == Rule::DerivativeReduction)
            .expect("derivative step");
        assert_eq!(lemma.subject, "u(St(r0,3),2)");
        assert_eq!(lemma.children[0].rule, Rule::GenericDistinction);
        assert_eq!(lemma.children[0].subject, "u(St(r0,3),1)");

        assert!(!inductive_checker(&rep([speh(&a, "r0", 2, 2)]), &a).verdict);
    }

    #[test]
    fn end_of_series_examples() {
        let a = fixture();
        let r0 = a.rho("r0").unwrap();
        let (pa, pb) = end_of_complementary_series(&Segment::st(r0, 2), 2).unwrap();
        assert_eq!(pa, rep([speh(&a, "r0", 1, 2), speh(&a, "r0", 3, 2)]));
        assert_eq!(pb, rep([speh(&a, "r0", 2, 1), speh(&a, "r0", 2, 3)]));

        let (pa, pb) = end_of_complementary_series(&Segment::st(r0, 1), 2).unwrap();
        assert_eq!(pa, rep([speh(&a, "r0", 2, 2)]));
        assert_eq!(pb, rep([speh(&a, "r0", 1, 1), speh(&a, "r0", 1, 3)]));

        assert_eq!(
            end_of_complementary_series(&Segment::st(r0, 1), 1),
            Err(Error::BadMultiplier { k: 1, min: 2 })
        );
        assert!(matches!(
            end_of_complementary_series(&Segment::new(r0, 1, rat(1, 2)), 2),
            Err(Error::NonUnitarySegment { .. })
        ));
    }

    #[test]
    fn dichotomy_examples() {
        let a = fixture();
        let f = |id, l, k| SpehFactor::new(Segment::st(a.rho(id).unwrap(), l), k).unwrap();
        assert_eq!(dichotomy(&f("r0", 1, 3), &a), Ok(Dichotomy::Sigma));
        assert_eq!(dichotomy(&f("r0", 2, 3), &a), Ok(Dichotomy::Eta));
        assert!(matches!(dichotomy(&f("t", 1, 2), &a), Err(Error::NotSelfDual(_))));
    }

    #[test]
    fn complementary_factors_need_only_self_duality() {
        let a = fixture();
        // St(r0,2) is not distinguished, but pi(u(St(r0,2),1),1/4) is
        let c = Factor::Complementary(
            ComplementaryFactor::new(Segment::st(a.rho("r0").unwrap(), 2), 1, rat(1, 4)).unwrap(),
        );
        let r = rep([c]);
        assert!(is_distinguished(&r, &a).verdict);
        assert!(inductive_checker(&r, &a).verdict);
    }

    #[test]
    fn trace_json_shape() {
        let a = fixture();
        let json = is_distinguished(&rep([speh(&a, "r0", 1, 1)]), &a).to_json();
        assert!(json.starts_with(
            r#"{"version":1,"traceVersion":1,"rule":"THM-UNITDIST","verdict":true,"subject":"u(St(r0,1),1)","children":["#
        ));
    }

    #[test]
    fn eta_trace() {
        let a = fixture();
        let s = Segment::st(a.rho("r0").unwrap(), 2);
        let t = segment_eta_trace(&s, &a).unwrap();
        assert!(t.verdict);
        assert!(t.children[0].verdict);
    }
}
