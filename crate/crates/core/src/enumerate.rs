//! Bounded exhaustive universes and the cross-check harness.
//!
//! [`enumerate`] lists every canonical unitary representation within a
//! [`UniverseSpec`]; [`cross_check`] evaluates every rule of the calculator
//! over that list and reports counterexamples.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::derivative::{derivative_ladder, highest_shifted_derivative, split_rigid_generic};
use crate::distinction::{
    dichotomy, distinguished, end_of_complementary_series, inductive_checker, is_distinguished,
    sigma_induced, Dichotomy,
};
use crate::dsl::{evaluate, print_canonical};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, in_open_unit_half, Exponent};
use crate::segment::Segment;
use crate::unitary::{ComplementaryFactor, Factor, SpehFactor, UnitaryRep};

/// Bounds of an exhaustive universe.
#[derive(Debug, Clone)]
pub struct UniverseSpec {
    pub alphabet: Alphabet,
    pub max_degree: u64,
    pub max_k: u32,
    pub alpha_grid: Vec<Exponent>,
}

impl UniverseSpec {
    /// Validates the bounds; the alpha grid is sorted and deduplicated.
    pub fn new(
        alphabet: Alphabet,
        max_degree: u64,
        max_k: u32,
        mut alpha_grid: Vec<Exponent>,
    ) -> Result<UniverseSpec> {
        if let Some(bad) = alpha_grid.iter().find(|a| !in_open_unit_half(a)) {
            return Err(Error::AlphaOutOfRange(*bad));
        }
        if max_k < 1 {
            return Err(Error::BadMultiplier {
                k: i64::from(max_k),
                min: 1,
            });
        }
        alpha_grid.sort();
        alpha_grid.dedup();
        Ok(UniverseSpec {
            alphabet,
            max_degree,
            max_k,
            alpha_grid,
        })
    }

    /// Every factor of degree <= `max_degree`, in canonical order.
    pub fn factors(&self) -> Vec<Factor> {
        let mut out = Vec::new();
        for rho in self.alphabet.rhos() {
            for length in 1.. {
                let seg = Segment::st(rho, length);
                if seg.degree() > self.max_degree {
                    break;
                }
                for k in 1..=self.max_k {
                    let speh = SpehFactor::new(seg.clone(), i64::from(k)).expect("unitary segment");
                    if speh.degree() > self.max_degree {
                        break;
                    }
                    for &alpha in &self.alpha_grid {
                        let c = ComplementaryFactor::from_base(speh.clone(), alpha)
                            .expect("grid validated");
                        if c.degree() <= self.max_degree {
                            out.push(Factor::Complementary(c));
                        }
                    }
                    out.push(Factor::Speh(speh));
                }
            }
        }
        out.sort();
        out
    }

    /// Unitary segments `St(rho, l)` of degree <= `max_degree`.
    pub fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        for rho in self.alphabet.rhos() {
            for length in 1.. {
                let seg = Segment::st(rho, length);
                if seg.degree() > self.max_degree {
                    break;
                }
                out.push(seg);
            }
        }
        out
    }
}

/// Every canonical representation of the universe, each exactly once, sorted
/// by degree and then by factor list.
pub fn enumerate(spec: &UniverseSpec) -> Vec<UnitaryRep> {
    let factors = spec.factors();
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(&factors, 0, spec.max_degree, &mut current, &mut out);
    out.sort();
    out
}

// `factors` is sorted by degree first, so once a factor no longer fits in
// the budget none of the later ones do.
fn extend(
    factors: &[Factor],
    start: usize,
    budget: u64,
    current: &mut Vec<Factor>,
    out: &mut Vec<UnitaryRep>,
) {
    out.push(UnitaryRep::from_factors(current.iter().cloned()));
    for i in start..factors.len() {
        let d = factors[i].degree();
        if d > budget {
            break;
        }
        current.push(factors[i].clone());
        extend(factors, i, budget - d, current, out);
        current.pop();
    }
}

/// Brute-force check that the factors of `rep` can be perfectly matched,
/// each with a factor equal to its `sigma o dual` image. A factor fixed by
/// `sigma o dual` may be matched with itself.
pub fn matching_oracle(rep: &UnitaryRep, alphabet: &Alphabet) -> bool {
    let factors: Vec<&Factor> = rep.iter().collect();
    let mut used = vec![false; factors.len()];
    search_matching(&factors, &mut used, alphabet)
}

fn search_matching(factors: &[&Factor], used: &mut [bool], alphabet: &Alphabet) -> bool {
    let Some(i) = used.iter().position(|u| !u) else {
        return true;
    };
    let target = factors[i].sigma_dual(alphabet);
    used[i] = true;
    if target == *factors[i] && search_matching(factors, used, alphabet) {
        used[i] = false;
        return true;
    }
    for j in i + 1..factors.len() {
        if !used[j] && *factors[j] == target {
            used[j] = true;
            let found = search_matching(factors, used, alphabet);
            used[j] = false;
            if found {
                used[i] = false;
                return true;
            }
        }
    }
    used[i] = false;
    false
}

const MAX_RECORDED_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub instances: u64,
    #[serde(rename = "failureCount")]
    pub failure_count: u64,
    /// The first few counterexamples, in enumeration order.
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecSummary {
    pub alphabet: Vec<String>,
    #[serde(rename = "maxDegree")]
    pub max_degree: u64,
    #[serde(rename = "maxK")]
    pub max_k: u32,
    #[serde(rename = "alphaGrid")]
    pub alpha_grid: Vec<String>,
    #[serde(rename = "universeSize")]
    pub universe_size: u64,
    #[serde(rename = "injectedParityFlip", skip_serializing_if = "Option::is_none")]
    pub injected_parity_flip: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub version: u32,
    pub spec: SpecSummary,
    pub properties: Vec<PropertyReport>,
}

impl CrossCheckReport {
    pub fn counterexamples(&self) -> u64 {
        self.properties.iter().map(|p| p.failure_count).sum()
    }

    pub fn success(&self) -> bool {
        self.counterexamples() == 0
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

impl fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "universe: {} representations (max degree {}, max k {}, alpha grid {{{}}})",
            self.spec.universe_size,
            self.spec.max_degree,
            self.spec.max_k,
            self.spec.alpha_grid.join(", ")
        )?;
        if let Some(id) = &self.spec.injected_parity_flip {
            writeln!(f, "injected bug: parity of `{id}` flipped on the engine side")?;
        }
        for p in &self.properties {
            let status = if p.passed() { "PASS" } else { "FAIL" };
            write!(f, "{status} {} ({} instances", p.name, p.instances)?;
            if p.passed() {
                writeln!(f, ")")?;
            } else {
                writeln!(f, ", {} counterexamples)", p.failure_count)?;
                for failure in &p.failures {
                    writeln!(f, "    {failure}")?;
                }
            }
        }
        write!(f, "{} counterexamples", self.counterexamples())
    }
}

/// Accumulates instances and counterexamples of one property. Failures are
/// keyed by a sequence number so parallel runs report deterministically.
#[derive(Default)]
struct Tally {
    instances: u64,
    failure_count: u64,
    failures: Vec<(u64, String)>,
}

impl Tally {
    fn check(&mut self, seq: u64, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push((seq, describe()));
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.failure_count += other.failure_count;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|(seq, _)| *seq);
        self.failures.truncate(MAX_RECORDED_FAILURES);
        self
    }

    fn finish(self, name: &'static str) -> PropertyReport {
        PropertyReport {
            name,
            instances: self.instances,
            failure_count: self.failure_count,
            failures: self.failures.into_iter().map(|(_, s)| s).collect(),
        }
    }
}

/// Options for [`cross_check`].
#[derive(Debug, Clone, Default)]
pub struct CrossCheckOptions {
    /// Flip the parity of this symbol for the engine side only: the main
    /// verdict and segment distinction read the corrupted table while the
    /// independent oracles read the declared one. A sound harness must then
    /// report counterexamples.
    pub inject_parity_flip: Option<String>,
}

/// Runs every exhaustive property over `enumerate(spec)`.
pub fn cross_check(spec: &UniverseSpec, options: &CrossCheckOptions) -> Result<CrossCheckReport> {
    let reference = &spec.alphabet;
    let mutated;
    let engine = match &options.inject_parity_flip {
        Some(id) => {
            mutated = reference.with_flipped_parity(id)?;
            &mutated
        }
        None => reference,
    };
    let universe = enumerate(spec);
    let checker = Checker {
        spec,
        universe: &universe,
        reference,
        engine,
    };

    let mut properties = Vec::new();
    properties.extend(checker.per_rep());
    properties.push(checker.langlands_uniqueness());
    properties.extend(checker.pairs());
    properties.extend(checker.segments());
    properties.push(checker.end_of_series());

    let summary = SpecSummary {
        alphabet: reference.symbols().iter().map(|s| s.id.clone()).collect(),
        max_degree: spec.max_degree,
        max_k: spec.max_k,
        alpha_grid: spec.alpha_grid.iter().map(fmt_rational).collect(),
        universe_size: universe.len() as u64,
        injected_parity_flip: options.inject_parity_flip.clone(),
    };
    Ok(CrossCheckReport {
        version: 1,
        spec: summary,
        properties,
    })
}

struct Checker<'a> {
    spec: &'a UniverseSpec,
    universe: &'a [UnitaryRep],
    reference: &'a Alphabet,
    engine: &'a Alphabet,
}

const PER_REP: [&str; 14] = [
    "inductive-checker-agreement",
    "necessary-self-duality",
    "matching-oracle",
    "involution-laws",
    "canonical-idempotence",
    "text-round-trip",
    "langlands-data",
    "self-dual-completion",
    "derivative-degree",
    "derivative-ladder",
    "rigid-generic-split",
    "derivative-preserves-sigma-induced",
    "speh-reduction",
    "uniform-product-implication",
];

impl Checker<'_> {
    fn show(&self, rep: &UnitaryRep) -> String {
        print_canonical(rep, self.reference)
    }

    fn per_rep(&self) -> Vec<PropertyReport> {
        let tallies = self
            .universe
            .par_iter()
            .enumerate()
            .fold(
                || (0..PER_REP.len()).map(|_| Tally::default()).collect::<Vec<_>>(),
                |mut t, (seq, rep)| {
                    self.check_rep(seq as u64, rep, &mut t);
                    t
                },
            )
            .reduce(
                || (0..PER_REP.len()).map(|_| Tally::default()).collect(),
                |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
            );
        tallies
            .into_iter()
            .zip(PER_REP)
            .map(|(t, name)| t.finish(name))
            .collect()
    }

    fn check_rep(&self, seq: u64, rep: &UnitaryRep, t: &mut [Tally]) {
        let (reference, engine) = (self.reference, self.engine);
        let main = is_distinguished(rep, engine);
        let inductive = inductive_checker(rep, reference);
        t[0].check(seq, main.verdict == inductive.verdict, || {
            format!(
                "{}: theorem says {}, inductive checker says {}",
                self.show(rep),
                main.verdict,
                inductive.verdict
            )
        });

        let self_dual = rep.is_sigma_self_dual(engine);
        t[1].check(seq, !main.verdict || self_dual, || {
            format!("{}: distinguished but not sigma-self-dual", self.show(rep))
        });

        let matched = matching_oracle(rep, reference);
        t[2].check(seq, matched == self_dual, || {
            format!("{}: matching {matched}, self-dual {self_dual}", self.show(rep))
        });

        let dual = rep.dual(engine);
        let sigma = rep.sigma(engine);
        let laws = dual.dual(engine) == *rep
            && sigma.sigma(engine) == *rep
            && dual.sigma(engine) == sigma.dual(engine)
            && dual.degree() == rep.degree()
            && sigma.degree() == rep.degree();
        t[3].check(seq, laws, || format!("{}: involution law broken", self.show(rep)));

        t[4].check(
            seq,
            UnitaryRep::from_factors(rep.iter().cloned()) == *rep,
            || format!("{}: not canonical", self.show(rep)),
        );

        let text = print_canonical(rep, reference);
        let back = evaluate(&text, reference);
        t[5].check(seq, back.as_ref() == Ok(rep), || {
            format!("{text}: re-parsed as {back:?}")
        });

        let ld = rep.langlands_data();
        let ld_ok = ld.windows(2).all(|w| w[0].center() >= w[1].center())
            && ld.iter().map(Segment::degree).sum::<u64>() == rep.degree()
            && ld.iter().all(|s| !s.is_trivial());
        t[6].check(seq, ld_ok, || format!("{}: bad Langlands data", self.show(rep)));

        let completed = rep.product(&rep.dual(engine).sigma(engine));
        t[7].check(seq, completed.is_sigma_self_dual(engine), || {
            format!("{}: pi x sigma(dual(pi)) not self-dual", self.show(rep))
        });

        let hsd = highest_shifted_derivative(rep);
        let generic = rep.max_k() <= 1;
        let deg_ok = (rep.is_empty() || hsd.degree() < rep.degree()) && (hsd.is_empty() == generic);
        t[8].check(seq, deg_ok, || {
            format!("{}: derivative {} violates degree laws", self.show(rep), self.show(&hsd))
        });

        let ladder = derivative_ladder(rep);
        let ladder_ok =
            ladder.len() == 1 + rep.max_k() as usize && ladder.last().is_some_and(UnitaryRep::is_empty);
        t[9].check(seq, ladder_ok, || {
            format!("{}: ladder of length {}", self.show(rep), ladder.len())
        });

        let (rigid, gen) = split_rigid_generic(rep);
        let split_ok = rigid.product(&gen) == *rep
            && rigid.factors().iter().all(|(f, _)| f.k() >= 2)
            && gen.factors().iter().all(|(f, _)| f.k() == 1);
        t[10].check(seq, split_ok, || format!("{}: bad split", self.show(rep)));

        if !rep.is_empty() && rep.factors().iter().all(|(f, _)| f.k() >= 2) {
            let before = sigma_induced(rep, engine);
            let after = sigma_induced(&hsd, engine);
            t[11].check(seq, before == after, || {
                format!("{}: sigma-induced {before}, derivative {after}", self.show(rep))
            });
        }

        if let [(Factor::Speh(speh), 1)] = rep.factors() {
            let seg = speh.segment().distinguished(reference).unwrap_or(false);
            t[12].check(seq, main.verdict == seg, || {
                format!("{}: verdict {} but segment {seg}", self.show(rep), main.verdict)
            });
        }

        let ks: Vec<u32> = rep.factors().iter().map(|(f, _)| f.k()).collect();
        let uniform = !rep.is_empty()
            && rep.factors().iter().all(|(f, _)| f.is_speh())
            && ks.iter().all(|&k| k == ks[0]);
        if uniform {
            let flattened: UnitaryRep = rep.iter().map(|f| f.with_k(1).expect("k >= 1")).collect();
            let ok = !main.verdict || distinguished(&flattened, engine);
            t[13].check(seq, ok, || {
                format!("{}: distinguished but {} is not", self.show(rep), self.show(&flattened))
            });
        }
    }

    /// Distinct representations have distinct Langlands data.
    fn langlands_uniqueness(&self) -> PropertyReport {
        let mut t = Tally::default();
        let mut seen: HashMap<Vec<Segment>, usize> = HashMap::with_capacity(self.universe.len());
        for (i, rep) in self.universe.iter().enumerate() {
            let mut key = rep.langlands_data();
            key.sort();
            let clash = seen.insert(key, i);
            t.check(i as u64, clash.is_none(), || {
                format!(
                    "{} and {} share Langlands data",
                    self.show(&self.universe[clash.unwrap()]),
                    self.show(rep)
                )
            });
        }
        t.finish("langlands-uniqueness")
    }

    /// Pairwise laws over all pairs with combined degree <= max degree.
    fn pairs(&self) -> Vec<PropertyReport> {
        let engine = self.engine;
        let max = self.spec.max_degree;
        // universe is sorted by degree: prefix[d] = number of reps of degree <= d
        let prefix: Vec<usize> = (0..=max)
            .map(|d| self.universe.partition_point(|r| r.degree() <= d))
            .collect();
        let derivs: Vec<UnitaryRep> = self.universe.par_iter().map(highest_shifted_derivative).collect();
        let verdicts: Vec<bool> = self.universe.par_iter().map(|r| distinguished(r, engine)).collect();
        let n = self.universe.len() as u64;

        let (commute, products, closure) = self
            .universe
            .par_iter()
            .enumerate()
            .fold(
                || (Tally::default(), Tally::default(), Tally::default()),
                |(mut commute, mut products, mut closure), (i, a)| {
                    let end = prefix[(max - a.degree()) as usize];
                    for j in i..end {
                        let b = &self.universe[j];
                        let seq = i as u64 * n + j as u64;
                        let ab = a.product(b);
                        let lhs = highest_shifted_derivative(&ab);
                        let rhs = derivs[i].product(&derivs[j]);
                        commute.check(seq, lhs == rhs, || {
                            format!("({}) x ({}): hsd does not commute with product", self.show(a), self.show(b))
                        });
                        let ba = b.product(a);
                        let laws = ab == ba
                            && ab.degree() == a.degree() + b.degree()
                            && a.product(&UnitaryRep::empty()) == *a;
                        products.check(seq, laws, || {
                            format!("({}) x ({}): product law broken", self.show(a), self.show(b))
                        });
                        if verdicts[i] && verdicts[j] {
                            closure.check(seq, distinguished(&ab, engine), || {
                                format!(
                                    "({}) x ({}): factors distinguished, product is not",
                                    self.show(a),
                                    self.show(b)
                                )
                            });
                        }
                    }
                    (commute, products, closure)
                },
            )
            .reduce(
                || (Tally::default(), Tally::default(), Tally::default()),
                |a, b| (a.0.merge(b.0), a.1.merge(b.1), a.2.merge(b.2)),
            );
        vec![
            commute.finish("derivative-product-commutation"),
            products.finish("product-laws"),
            closure.finish("product-closure"),
        ]
    }

    fn segments(&self) -> Vec<PropertyReport> {
        let (reference, engine) = (self.reference, self.engine);
        let mut alternation = Tally::default();
        let mut exclusive = Tally::default();
        let mut involutions = Tally::default();
        let mut dichotomies = Tally::default();
        for (i, seg) in self.spec.segments().iter().enumerate() {
            let seq = i as u64;
            let show = || seg.display(reference).to_string();
            let sigma_dist = seg.distinguished(engine).expect("non-trivial");
            let up = seg.up().expect("non-trivial");
            let eta_up = up.eta_distinguished(reference).expect("non-trivial");
            alternation.check(seq, sigma_dist == eta_up, || {
                format!("{}: distinguished {sigma_dist}, successor eta-distinguished {eta_up}", show())
            });

            if seg.is_sigma_self_dual(reference) {
                let eta = seg.eta_distinguished(reference).expect("non-trivial");
                exclusive.check(seq, sigma_dist != eta, || {
                    format!("{}: sigma {sigma_dist}, eta {eta}", show())
                });
                for k in 1..=self.spec.max_k {
                    let speh = SpehFactor::new(seg.clone(), i64::from(k)).expect("unitary");
                    let verdict = distinguished(&UnitaryRep::single(Factor::Speh(speh.clone())), engine);
                    let d = dichotomy(&speh, reference);
                    dichotomies.check(seq, (d == Ok(Dichotomy::Sigma)) == verdict, || {
                        format!("u({},{k}): dichotomy {d:?}, verdict {verdict}", show())
                    });
                }
            }

            let d = seg.dual(reference);
            let s = seg.sigma(reference);
            let laws = d.dual(reference) == *seg
                && s.sigma(reference) == *seg
                && d.sigma(reference) == s.dual(reference)
                && d.degree() == seg.degree()
                && s.degree() == seg.degree()
                && d.length() == seg.length()
                && (!sigma_dist || s.dual(reference) == *seg);
            involutions.check(seq, laws, || format!("{}: segment involution law broken", show()));
        }
        vec![
            alternation.finish("alternation"),
            exclusive.finish("segment-dichotomy"),
            dichotomies.finish("speh-dichotomy"),
            involutions.finish("segment-involutions"),
        ]
    }

    /// Both subquotients of `pi(u(D,k),1/2)` have degree `2k deg(D)`; for a
    /// distinguished `D` the second is distinguished and the first is not.
    fn end_of_series(&self) -> PropertyReport {
        let engine = self.engine;
        let mut t = Tally::default();
        let mut seq = 0;
        for seg in self.spec.segments() {
            for k in 2..=i64::from(self.spec.max_k) {
                seq += 1;
                let (a, b) = end_of_complementary_series(&seg, k).expect("valid input");
                let expected = 2 * k as u64 * seg.degree();
                let mut ok = a.degree() == expected && b.degree() == expected;
                if seg.distinguished(engine).expect("non-trivial") {
                    ok &= distinguished(&b, engine) && !distinguished(&a, engine);
                }
                t.check(seq, ok, || {
                    format!(
                        "{} k={k}: ({}, {})",
                        seg.display(self.reference),
                        self.show(&a),
                        self.show(&b)
                    )
                });
            }
        }
        t.finish("end-of-complementary-series")
    }
}
