//! Serializable verdict reports for groups and monoids.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::factorization::{is_strongly_factorizable, units};
use crate::group::PermGroup;
use crate::monoid::{TransMonoid, Verdict};

pub const PROPERTY_REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub version: u32,
    pub subject: String,
    pub degree: usize,
    pub order: usize,
    pub properties: BTreeMap<String, PropertyVerdict>,
    pub values: BTreeMap<String, String>,
}

impl PropertyReport {
    fn new(subject: &str, degree: usize, order: usize) -> Self {
        Self {
            version: PROPERTY_REPORT_VERSION,
            subject: subject.to_string(),
            degree,
            order,
            properties: BTreeMap::new(),
            values: BTreeMap::new(),
        }
    }

    fn flag(&mut self, name: &str, holds: bool, witness: Option<String>) {
        self.properties.insert(name.to_string(), PropertyVerdict { holds, witness });
    }

    fn value(&mut self, name: &str, value: impl ToString) {
        self.values.insert(name.to_string(), value.to_string());
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} degree={} order={}", self.subject, self.degree, self.order)?;
        for (name, value) in &self.values {
            writeln!(f, "{name}={value}")?;
        }
        for (name, v) in &self.properties {
            write!(f, "{name}={}", v.holds)?;
            if let Some(w) = &v.witness {
                write!(f, " witness={w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn render_blocks(blocks: &[Vec<usize>]) -> String {
    let parts: Vec<String> = blocks
        .iter()
        .map(|b| format!("{{{}}}", b.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    parts.join("")
}

pub fn group_report(subject: &str, g: &PermGroup) -> PropertyReport {
    let n = g.degree();
    let mut r = PropertyReport::new(subject, n, g.order());
    let t = g.transitivity_degree();
    r.value("transitivity_degree", t);
    r.value("homogeneity_degree", g.homogeneity_degree());
    r.value("exponent", g.exponent());
    r.value("orbit_lengths", format!("{:?}", g.point_orbits().iter().map(Vec::len).collect::<Vec<_>>()));
    r.value("generators", g.generators().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    r.flag("transitive", g.is_transitive(), None);
    let p = g.is_primitive();
    r.flag("primitive", p.primitive, p.blocks.map(|b| render_blocks(&b.blocks())));
    for k in 1..=t.min(n - 1) {
        r.flag(&format!("generously_{k}_transitive"), g.is_generously_k_transitive(k).unwrap_or(false), None);
        r.flag(&format!("{k}_primitive"), g.is_k_primitive(k).unwrap_or(false), None);
    }
    r
}

pub fn monoid_report(subject: &str, m: &TransMonoid) -> PropertyReport {
    let mut r = PropertyReport::new(subject, m.degree(), m.len());
    let green = m.green();
    r.value("idempotents", m.idempotents().len());
    r.value("units", units(m).order());
    r.value("r_classes", green.r_count);
    r.value("l_classes", green.l_count);
    r.value("h_classes", green.h_count);
    r.value("j_classes", green.j_count);
    let mut put = |name: &str, v: Verdict| r.flag(name, v.holds, v.witness.map(|w| m.describe(&w)));
    put("regular", m.is_regular());
    put("completely_regular", m.is_completely_regular());
    put("inverse", m.is_inverse());
    put("clifford", m.is_clifford());
    put("intra_regular", m.is_intra_regular());
    put("square_roots", m.has_all_square_roots());
    put("sqrt_in_cyclic", m.sqrt_in_cyclic_check());
    put("union_of_odd_groups", m.is_union_of_odd_groups());
    put("r_commutative", m.is_r_commutative());
    let f = is_strongly_factorizable(m);
    r.flag("strongly_factorizable", f.holds, f.witness.map(|w| w.to_string()));
    r
}
