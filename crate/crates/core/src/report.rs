//! Serializable records emitted by the command-line front end.
//!
//! Every record is wrapped in an [`Envelope`] carrying the schema tag, and
//! every record parses back into its own type.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::disc_form::{
    discriminant_form, format_rational, signed_rep_mod2, DiscElement, DiscIsometry,
    FiniteQuadraticForm,
};
use crate::error::{Error, Result};
use crate::hperp::{disc_group_omega1, perp_gram, PolarizationData};
use crate::lattice::GramLattice;
use crate::moduli::{
    galois_group, image_status, normality, DivisorReport, GaloisGroup, NormalityVerdict,
};
use crate::reflection::{
    classify_reflection, enumerate_ramification_classes, induced_disc_matrix, ReflectionClass,
    SymbolicPerpVector,
};

pub const SCHEMA: &str = "heegner-lab/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    pub command: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, body: T) -> Self {
        Envelope {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// How reflection classes are keyed, recorded in every enumeration output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitMetadata {
    pub orbit_key: String,
    /// distinct classes with the same label are assumed to give distinct divisors
    pub distinct_divisor_assumption: bool,
}

impl Default for OrbitMetadata {
    fn default() -> Self {
        OrbitMetadata {
            orbit_key: "(beta_sq, beta_star) modulo {±id, ±s}".to_string(),
            distinct_divisor_assumption: true,
        }
    }
}

fn small(x: &num_bigint::BigInt, what: &'static str) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow(what))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub label: String,
    pub rank: usize,
    pub signature: [usize; 2],
    pub determinant: i64,
    pub even: bool,
    pub unimodular: bool,
    pub gram: Vec<Vec<i64>>,
    pub elementary_divisors: Vec<u64>,
    pub disc_form: FiniteQuadraticForm,
}

pub fn lattice_report(lattice: &GramLattice) -> Result<LatticeReport> {
    let gram = lattice
        .gram()
        .to_i64_rows()
        .ok_or(Error::Overflow("gram entry"))?;
    let even = (0..gram.len()).all(|i| gram[i][i] % 2 == 0);
    let (p, n) = lattice.signature();
    let disc = discriminant_form(lattice)?;
    Ok(LatticeReport {
        label: lattice.label().to_string(),
        rank: lattice.rank(),
        signature: [p, n],
        determinant: small(&lattice.determinant(), "determinant")?,
        even,
        unimodular: lattice.is_unimodular(),
        gram,
        elementary_divisors: disc.form().orders().to_vec(),
        disc_form: disc.form().clone(),
    })
}

/// A_{h⊥} for one polarization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HperpReport {
    pub t: u64,
    pub d: u64,
    pub gamma: u64,
    pub c: u64,
    pub b: u64,
    #[serde(rename = "B")]
    pub block: [[i64; 2]; 2],
    pub omega: u64,
    /// "split" (generators k̄₁, k̄₂) or "smith"
    pub presentation: String,
    pub disc_orders: Vec<u64>,
    pub q_gen: Vec<String>,
    /// coordinates of k̄₁ in the presentation
    pub k1: DiscElement,
}

pub fn hperp_report(pol: &PolarizationData) -> Result<HperpReport> {
    let (form, presentation, k1) = if pol.omega() == 1 {
        let split = disc_group_omega1(pol)?;
        (split.form().clone(), "split", split.k1())
    } else {
        let perp = perp_gram(pol, 0)?;
        let disc = perp.disc_form()?;
        let (k1, _) = perp.glue_generator()?;
        (disc.form().clone(), "smith", k1)
    };
    Ok(HperpReport {
        t: pol.t,
        d: pol.d,
        gamma: pol.gamma,
        c: pol.c,
        b: pol.b,
        block: pol.block_gram(),
        omega: pol.omega(),
        presentation: presentation.to_string(),
        disc_orders: form.orders().to_vec(),
        q_gen: form
            .q_gen()
            .iter()
            .map(|q| format_rational(&signed_rep_mod2(q)))
            .collect(),
        k1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub t: u64,
    pub d: u64,
    pub gamma: u64,
    pub c: u64,
    #[serde(flatten)]
    pub verdict: NormalityVerdict,
}

pub fn normality_report(
    t: u64,
    d: u64,
    gamma: u64,
    c: Option<u64>,
    budget: u64,
) -> Result<NormalityReport> {
    let pol = PolarizationData::new(t, d, gamma, c)?;
    Ok(NormalityReport {
        t,
        d,
        gamma,
        c: pol.c,
        verdict: normality(t, d, gamma, Some(pol.c), budget)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub t: u64,
    pub d: u64,
    pub beta: SymbolicPerpVector,
    pub class: ReflectionClass,
    /// action on Z/2d × Z/2t, rows reduced modulo 2d and 2t
    pub induced_matrix: DiscIsometry,
}

pub fn classify_report(t: u64, d: u64, beta: &SymbolicPerpVector) -> Result<ClassifyReport> {
    Ok(ClassifyReport {
        t,
        d,
        beta: *beta,
        class: classify_reflection(t, d, beta)?,
        induced_matrix: induced_disc_matrix(t, d, beta)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub m: u64,
    pub t: u64,
    pub d: u64,
    pub gamma: u64,
    pub metadata: OrbitMetadata,
    pub classes: Vec<ReflectionClass>,
    /// admissible (beta_sq, beta_star) pairs without a witness in the box
    pub unwitnessed: Vec<(i64, DiscElement)>,
}

pub fn enumerate_report(m: u64, d: u64, budget: u64) -> Result<EnumerateReport> {
    let e = enumerate_ramification_classes(m, d, budget)?;
    Ok(EnumerateReport {
        m,
        t: e.t,
        d,
        gamma: 1,
        metadata: OrbitMetadata::default(),
        classes: e.classes,
        unwitnessed: e.unwitnessed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    #[serde(flatten)]
    pub class: ReflectionClass,
    /// index into the Galois group's coset representatives
    pub coset: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub m: u64,
    pub d: u64,
    pub gamma: u64,
    pub c: u64,
    pub normality: NormalityVerdict,
    pub galois_group: GaloisGroup,
    pub metadata: OrbitMetadata,
    /// nontrivial reflection classes (γ = 1 only)
    pub classes: Vec<ClassEntry>,
    /// period-image annotations (m = 2, γ = 1 only)
    pub divisors: Option<Vec<DivisorReport>>,
}

pub fn analyze_report(
    m: u64,
    d: u64,
    gamma: u64,
    c: Option<u64>,
    budget: u64,
) -> Result<AnalyzeReport> {
    if m < 2 {
        return Err(Error::Unsupported(format!(
            "m = {m}: K3^[m] type needs m >= 2"
        )));
    }
    let t = m - 1;
    let pol = PolarizationData::new(t, d, gamma, c)?;
    let verdict = normality(t, d, gamma, Some(pol.c), budget)?;
    let group = galois_group(m, d, gamma, Some(pol.c), budget)?;
    let mut classes = Vec::new();
    let mut divisors = None;
    if gamma == 1 {
        let e = enumerate_ramification_classes(m, d, budget)?;
        let form = disc_group_omega1(&pol)?.form().clone();
        for cls in &e.classes {
            let g = induced_disc_matrix(t, d, &cls.witness)?;
            classes.push(ClassEntry {
                class: cls.clone(),
                coset: group.coset_index(&form, &g),
            });
        }
        if m == 2 {
            divisors = Some(
                e.classes
                    .iter()
                    .map(|cls| image_status(d, cls))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    Ok(AnalyzeReport {
        m,
        d,
        gamma,
        c: pol.c,
        normality: verdict,
        galois_group: group,
        metadata: OrbitMetadata::default(),
        classes,
        divisors,
    })
}
