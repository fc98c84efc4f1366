//! Normalizers of transformation monoids in the symmetric group, the
//! product `SG`, and the comparison of semigroup properties between `S`
//! and `SG`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::monoid::{GreenStructure, TransMonoid, Verdict};
use crate::perm::{Permutation, Transformation};

/// Largest degree for the full symmetric-group sweep.
pub const MAX_NORMALIZER_DEGREE: usize = 8;

pub const REPORT_VERSION: u32 = 1;

/// Cap on discrepancy pairs listed per relation.
const DISCREPANCY_CAP: usize = 16;

/// `g⁻¹·t·g`.
pub fn conjugate(t: &Transformation, g: &Permutation) -> Result<Transformation> {
    if t.degree() != g.degree() {
        return Err(Error::DegreeMismatch { left: t.degree(), right: g.degree() });
    }
    Ok(conj(t, g))
}

fn conj(t: &Transformation, g: &Permutation) -> Transformation {
    let g = g.as_transformation();
    let mut images = vec![0; t.degree()];
    // (x g) ↦ (x t) g
    for x in 0..t.degree() {
        images[g.apply(x)] = g.apply(t.apply(x));
    }
    Transformation::new(images).expect("conjugate of a valid map")
}

fn normalizes(s: &TransMonoid, g: &Permutation) -> bool {
    s.generators().iter().all(|t| s.contains(&conj(t, g)))
}

/// Per-point invariant preserved by every normalizing permutation: the
/// sorted multiset over `s ∈ S` of (rank, kernel class size of `x`,
/// preimage size of `x`, whether `s` fixes `x`).
fn point_signatures(s: &TransMonoid) -> Vec<Vec<(u8, u8, u8, bool)>> {
    let n = s.degree();
    let mut sig = vec![Vec::with_capacity(s.len()); n];
    for t in s.elements() {
        let mut fibre = vec![0u8; n];
        for x in 0..n {
            fibre[t.apply(x)] += 1;
        }
        let rank = fibre.iter().filter(|&&c| c > 0).count() as u8;
        for (x, entry) in sig.iter_mut().enumerate() {
            entry.push((rank, fibre[t.apply(x)], fibre[x], t.apply(x) == x));
        }
    }
    for entry in &mut sig {
        entry.sort_unstable();
    }
    sig
}

fn check_normalizer_degree(n: usize) -> Result<()> {
    if n > MAX_NORMALIZER_DEGREE {
        return Err(Error::UnsupportedDegree(n));
    }
    Ok(())
}

/// All permutations mapping each point to a point of equal signature.
fn signature_candidates(class: &[usize]) -> Vec<Permutation> {
    fn extend(x: usize, class: &[usize], used: &mut [bool], images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        let n = class.len();
        if x == n {
            out.push(Permutation::new(images.clone()).expect("bijection"));
            return;
        }
        for y in 0..n {
            if !used[y] && class[y] == class[x] {
                used[y] = true;
                images.push(y);
                extend(x + 1, class, used, images, out);
                images.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(0, class, &mut vec![false; class.len()], &mut Vec::new(), &mut out);
    out
}

fn group_of(n: usize, mut elements: Vec<Permutation>) -> PermGroup {
    elements.sort();
    PermGroup::from_closed_elements(n, elements).with_small_generators()
}

/// `{g ∈ S_n : g⁻¹ s g ∈ S for every generator s}`. Since conjugation is
/// injective and `S` finite, this is the normalizer.
pub fn normalizer_in_symmetric(s: &TransMonoid) -> Result<PermGroup> {
    let n = s.degree();
    check_normalizer_degree(n)?;
    let sig = point_signatures(s);
    let mut distinct: Vec<&Vec<_>> = sig.iter().collect();
    distinct.sort();
    distinct.dedup();
    let class: Vec<usize> = sig.iter().map(|v| distinct.binary_search(&v).unwrap()).collect();
    let elements = signature_candidates(&class).into_par_iter().filter(|g| normalizes(s, g)).collect();
    Ok(group_of(n, elements))
}

/// Reference sweep over all of `S_n` without pruning.
pub fn normalizer_unpruned(s: &TransMonoid) -> Result<PermGroup> {
    let n = s.degree();
    check_normalizer_degree(n)?;
    let elements = signature_candidates(&vec![0; n]).into_par_iter().filter(|g| normalizes(s, g)).collect();
    Ok(group_of(n, elements))
}

/// The monoid `SG`, checked equal to `⟨S, G⟩`.
pub fn sg_product(s: &TransMonoid, g: &PermGroup, limit: usize) -> Result<TransMonoid> {
    if s.degree() != g.degree() {
        return Err(Error::DegreeMismatch { left: s.degree(), right: g.degree() });
    }
    let gens = if g.generators().len() <= 16 { g.generators().to_vec() } else { g.small_generators() };
    if !gens.iter().all(|h| normalizes(s, h)) {
        return Err(Error::NotNormalizing);
    }
    let products: HashSet<Transformation> =
        s.elements().iter().flat_map(|a| g.elements().iter().map(move |h| a.then(&h.as_transformation()))).collect();
    let mut all = s.generators().to_vec();
    all.extend(gens.iter().map(Permutation::as_transformation));
    let generated = TransMonoid::froidure_pin(s.degree(), &all, limit)?;
    if generated.len() != products.len() || !generated.elements().iter().all(|t| products.contains(t)) {
        let witness = generated
            .elements()
            .iter()
            .find(|t| !products.contains(t))
            .map_or_else(|| format!("|<S,G>|={} |SG|={}", generated.len(), products.len()), |t| t.to_string());
        return Err(Error::LawViolated { law: "<S,G> = SG".into(), witness });
    }
    Ok(generated)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Asserted,
    Observed,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Asserted => "asserted",
            Law::Observed => "observed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRow {
    #[serde(rename = "S")]
    pub s: bool,
    #[serde(rename = "SG")]
    pub sg: bool,
    pub law: Law,
    pub witness: Option<String>,
}

/// Comparison of a Green relation of `S` with that of `SG` restricted to `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Restriction {
    pub equal: bool,
    pub law: Law,
    pub discrepancy_count: usize,
    /// Pairs related in `SG` but not in `S`, least indices first.
    pub discrepancies: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub version: u32,
    pub degree: usize,
    pub s_order: usize,
    pub sg_order: usize,
    pub normalizer_order: usize,
    pub normalizer_generators: Vec<String>,
    pub exponent: usize,
    pub idempotents_equal: bool,
    pub properties: BTreeMap<String, PropertyRow>,
    pub restrictions: BTreeMap<String, Restriction>,
    /// Pairs `(a, f)` with `a ∈ S`, `f` idempotent in `SG`, related in `SG`.
    pub idempotent_lemma_pairs: BTreeMap<String, usize>,
    pub notes: Vec<String>,
}

impl fmt::Display for TransferReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "degree={} |S|={} |G|={} |SG|={} exponent(G)={}",
            self.degree, self.s_order, self.normalizer_order, self.sg_order, self.exponent
        )?;
        writeln!(f, "normalizer=<{}>", self.normalizer_generators.join(", "))?;
        writeln!(f, "idempotents_equal={}", self.idempotents_equal)?;
        for (name, row) in &self.properties {
            write!(f, "{name}: S={} SG={} law={}", row.s, row.sg, row.law)?;
            if let Some(w) = &row.witness {
                write!(f, " witness={w}")?;
            }
            writeln!(f)?;
        }
        for (name, r) in &self.restrictions {
            write!(f, "restriction {name}: equal={} law={} discrepancies={}", r.equal, r.law, r.discrepancy_count)?;
            for [a, b] in &r.discrepancies {
                write!(f, " ({a},{b})")?;
            }
            writeln!(f)?;
        }
        for (name, count) in &self.idempotent_lemma_pairs {
            writeln!(f, "idempotent lemma {name}: {count} pairs checked")?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

fn violation(law: &str, witness: String) -> Error {
    Error::LawViolated { law: law.into(), witness }
}

/// Builds the report, returning `LawViolated` as soon as an asserted law fails.
pub fn transfer_report(s: &TransMonoid, limit: usize) -> Result<TransferReport> {
    let g = normalizer_in_symmetric(s)?;
    transfer_report_with(s, &g, limit)
}

/// As [`transfer_report`] with a precomputed normalizer.
pub fn transfer_report_with(s: &TransMonoid, g: &PermGroup, limit: usize) -> Result<TransferReport> {
    let sg = sg_product(s, g, limit)?;
    let exponent = g.exponent();
    let mut properties = BTreeMap::new();
    let mut notes = Vec::new();

    let mut row = |name: &str, vs: Verdict, vsg: Verdict, law: Law, violated: bool| -> Result<()> {
        let witness = vs
            .witness
            .map(|w| format!("S:{}", s.describe(&w)))
            .or(vsg.witness.map(|w| format!("SG:{}", sg.describe(&w))));
        if law == Law::Asserted && violated {
            return Err(violation(name, witness.clone().unwrap_or_default()));
        }
        properties.insert(name.to_string(), PropertyRow { s: vs.holds, sg: vsg.holds, law, witness });
        Ok(())
    };

    let (rs, rsg) = (s.is_regular(), sg.is_regular());
    row("regular", rs, rsg, Law::Asserted, rs.holds != rsg.holds)?;
    let (cs, csg) = (s.is_completely_regular(), sg.is_completely_regular());
    row("completely_regular", cs, csg, Law::Asserted, cs.holds != csg.holds)?;
    let (is, isg) = (s.is_inverse(), sg.is_inverse());
    row("inverse", is, isg, Law::Asserted, isg.holds && !is.holds)?;
    let (ks, ksg) = (s.is_clifford(), sg.is_clifford());
    row("clifford", ks, ksg, Law::Asserted, ksg.holds && !ks.holds)?;
    let (qs, qsg) = (s.has_all_square_roots(), sg.has_all_square_roots());
    row("square_roots", qs, qsg, Law::Asserted, qsg.holds && !qs.holds)?;
    let intra_law = if exponent <= 2 { Law::Asserted } else { Law::Observed };
    let (ns, nsg) = (s.is_intra_regular(), sg.is_intra_regular());
    row("intra_regular", ns, nsg, intra_law, nsg.holds && !ns.holds)?;
    let (cms, cmsg) = (s.is_r_commutative(), sg.is_r_commutative());
    row("r_commutative", cms, cmsg, Law::Observed, false)?;
    let (abs, absg) =
        (abundant_in(&sg, (0..s.len()).map(|i| sg.index_of(s.element(i)).unwrap())), abundant_in(&sg, 0..sg.len()));
    row("abundant_in_sg", abs, absg, Law::Observed, false)?;
    notes.push("abundance is tested relative to SG only, not over all oversemigroups".into());
    if exponent > 2 {
        notes.push(format!("intra-regular transfer not asserted: exponent(G) = {exponent}"));
    }

    let e_s: HashSet<&Transformation> = s.idempotents().into_iter().map(|i| s.element(i)).collect();
    let e_sg: HashSet<&Transformation> = sg.idempotents().into_iter().map(|i| sg.element(i)).collect();
    let idempotents_equal = e_s == e_sg;
    if !idempotents_equal {
        let extra = e_sg.difference(&e_s).next().or(e_s.difference(&e_sg).next()).unwrap();
        return Err(violation("E(S) = E(SG)", extra.to_string()));
    }

    let embed: Vec<usize> = (0..s.len()).map(|i| sg.index_of(s.element(i)).expect("S ⊆ SG")).collect();
    let (gs, gsg) = (s.green(), sg.green());
    let mut restrictions = BTreeMap::new();
    let mut idempotent_lemma_pairs = BTreeMap::new();
    type Classes = fn(&GreenStructure) -> &Vec<u32>;
    let relations: [(&str, Classes, bool); 4] = [
        ("R", |g| &g.r_class, true),
        ("L", |g| &g.l_class, true),
        ("H", |g| &g.h_class, true),
        ("J", |g| &g.j_class, false),
    ];
    for (name, classes, lemma) in relations {
        let (cs, csg) = (classes(gs), classes(gsg));
        let mut count = 0;
        let mut listed = Vec::new();
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                if csg[embed[a]] == csg[embed[b]] && cs[a] != cs[b] {
                    count += 1;
                    if listed.len() < DISCREPANCY_CAP {
                        listed.push([s.element(a).to_string(), s.element(b).to_string()]);
                    }
                }
            }
        }
        let law = if lemma && rs.holds { Law::Asserted } else { Law::Observed };
        if law == Law::Asserted && count > 0 {
            return Err(violation(&format!("{name}_S = {name}_SG restricted to S for regular S"), listed[0].join(",")));
        }
        restrictions.insert(
            name.to_string(),
            Restriction { equal: count == 0, law, discrepancy_count: count, discrepancies: listed },
        );

        if lemma {
            // a ∈ S related in SG to an idempotent f: f ∈ S and a related to f in S
            let mut pairs = 0;
            for (a, &ea) in embed.iter().enumerate() {
                for f in sg.idempotents() {
                    if csg[ea] != csg[f] {
                        continue;
                    }
                    pairs += 1;
                    let in_s = s.index_of(sg.element(f));
                    if in_s.is_none_or(|fs| cs[fs] != cs[a]) {
                        return Err(violation(
                            &format!("idempotent {name}-lemma"),
                            format!("a={} f={}", s.element(a), sg.element(f)),
                        ));
                    }
                }
            }
            idempotent_lemma_pairs.insert(name.to_string(), pairs);
        }
    }

    Ok(TransferReport {
        version: REPORT_VERSION,
        degree: s.degree(),
        s_order: s.len(),
        sg_order: sg.len(),
        normalizer_order: g.order(),
        normalizer_generators: g.generators().iter().map(ToString::to_string).collect(),
        exponent,
        idempotents_equal,
        properties,
        restrictions,
        idempotent_lemma_pairs,
        notes,
    })
}

/// Every listed element of `m` is R-related and L-related to idempotents of `m`.
fn abundant_in(m: &TransMonoid, members: impl Iterator<Item = usize>) -> Verdict {
    let green = m.green();
    let mut r_has = vec![false; green.r_count];
    let mut l_has = vec![false; green.l_count];
    for e in m.idempotents() {
        r_has[green.r_class[e] as usize] = true;
        l_has[green.l_class[e] as usize] = true;
    }
    let mut bad = None;
    for x in members {
        if !r_has[green.r_class[x] as usize] || !l_has[green.l_class[x] as usize] {
            bad = Some(x);
            break;
        }
    }
    Verdict { holds: bad.is_none(), witness: bad.map(crate::monoid::Witness::Element) }
}
