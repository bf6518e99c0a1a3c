//! The canonical amino-acid table and its class-partition validators.
//!
//! The twenty amino acids split into two synthetase classes of ten. The
//! split is not arbitrary: it divides every side-chain property group
//! equally, and within each group the class-I members are heavier on
//! average. [`validate_partition`] checks those regularities on any table,
//! so constructed counterexamples (mutated tables) can demonstrate that
//! each check actually constrains the data.
//!
//! [`alphabet_summary`] connects alphabet sizes to the query-count
//! arithmetic of [`crate::search`]: one query distinguishes 4 items, two
//! about 10.5, three about 20.2 — matching the 4-letter base alphabet, the
//! 10-member class alphabet, and the 20-amino-acid (plus STOP) alphabet.
//! A structural annotation row records the lower bound of 9 backbone
//! orientations per peptide unit (10 with the cis option) from
//! [`crate::lattice`].

use crate::lattice::STAR_ANGLES_DEG;
use crate::search::database_size_for_queries;
use thiserror::Error;

/// Errors raised by table validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeTableError {
    /// The partition checks are defined on the full 20-record table.
    #[error("partition validation needs exactly 20 records, got {found}")]
    WrongRecordCount { found: usize },
}

/// Side-chain (R-group) property classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RGroupProperty {
    /// Hydrophobic side chains.
    NonPolar,
    /// Uncharged hydrophilic side chains.
    Polar,
    /// Negatively charged side chains.
    Negative,
    /// Positively charged side chains.
    Positive,
    /// Ring-bearing (aromatic) side chains.
    Ring,
}

impl RGroupProperty {
    /// All property groups in canonical table order.
    pub const ALL: [RGroupProperty; 5] = [
        RGroupProperty::NonPolar,
        RGroupProperty::Polar,
        RGroupProperty::Negative,
        RGroupProperty::Positive,
        RGroupProperty::Ring,
    ];

    /// Stable lower-case label for exports.
    pub fn label(&self) -> &'static str {
        match self {
            RGroupProperty::NonPolar => "non-polar",
            RGroupProperty::Polar => "polar",
            RGroupProperty::Negative => "negative-charge",
            RGroupProperty::Positive => "positive-charge",
            RGroupProperty::Ring => "ring",
        }
    }
}

/// The two aminoacyl-synthetase classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynthetaseClass {
    /// The heavier partner within each property group.
    I,
    /// The lighter partner within each property group.
    II,
}

impl SynthetaseClass {
    /// Stable roman-numeral label for exports.
    pub fn label(&self) -> &'static str {
        match self {
            SynthetaseClass::I => "I",
            SynthetaseClass::II => "II",
        }
    }
}

/// One row of the canonical table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AminoAcidRecord {
    /// Three-letter code, e.g. `"Gly"`.
    pub code3: &'static str,
    /// Full name, e.g. `"Glycine"`.
    pub name: &'static str,
    /// Side-chain property group.
    pub property: RGroupProperty,
    /// Molecular weight in daltons.
    pub mol_wt: f64,
    /// Synthetase class.
    pub class: SynthetaseClass,
}

const fn record(
    code3: &'static str,
    name: &'static str,
    property: RGroupProperty,
    mol_wt: f64,
    class: SynthetaseClass,
) -> AminoAcidRecord {
    AminoAcidRecord {
        code3,
        name,
        property,
        mol_wt,
        class,
    }
}

use RGroupProperty::{Negative, NonPolar, Polar, Positive, Ring};
use SynthetaseClass::{I, II};

/// The canonical twenty amino acids, grouped by side-chain property.
pub const CANONICAL_TABLE: [AminoAcidRecord; 20] = [
    record("Gly", "Glycine", NonPolar, 75.0, II),
    record("Ala", "Alanine", NonPolar, 89.0, II),
    record("Pro", "Proline", NonPolar, 115.0, II),
    record("Val", "Valine", NonPolar, 117.0, I),
    record("Leu", "Leucine", NonPolar, 131.0, I),
    record("Ile", "Isoleucine", NonPolar, 131.0, I),
    record("Ser", "Serine", Polar, 105.0, II),
    record("Thr", "Threonine", Polar, 119.0, II),
    record("Asn", "Asparagine", Polar, 132.0, II),
    record("Cys", "Cysteine", Polar, 121.0, I),
    record("Met", "Methionine", Polar, 149.0, I),
    record("Gln", "Glutamine", Polar, 146.0, I),
    record("Asp", "Aspartate", Negative, 133.0, II),
    record("Glu", "Glutamate", Negative, 147.0, I),
    record("Lys", "Lysine", Positive, 146.0, II),
    record("Arg", "Arginine", Positive, 174.0, I),
    record("His", "Histidine", Ring, 155.0, II),
    record("Phe", "Phenylalanine", Ring, 165.0, II),
    record("Tyr", "Tyrosine", Ring, 181.0, I),
    record("Trp", "Tryptophan", Ring, 204.0, I),
];

/// The embedded canonical table; constant and identical across calls.
pub fn canonical_table() -> &'static [AminoAcidRecord; 20] {
    &CANONICAL_TABLE
}

/// Class membership counts and mean weights within one property group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyGroupStats {
    /// The side-chain property group.
    pub property: RGroupProperty,
    /// Records in synthetase class I.
    pub class_one_count: usize,
    /// Records in synthetase class II.
    pub class_two_count: usize,
    /// Mean molecular weight of the class-I members, if any.
    pub class_one_mean_wt: Option<f64>,
    /// Mean molecular weight of the class-II members, if any.
    pub class_two_mean_wt: Option<f64>,
}

/// Outcome of the four named partition checks plus the per-group numbers
/// behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    /// (a) Exactly ten records per synthetase class.
    pub class_balance: bool,
    /// (b) Every property group splits equally between the classes.
    pub per_property_balance: bool,
    /// (c) Within every populated property group, the class-I mean weight
    /// strictly exceeds the class-II mean weight.
    pub heavier_class_one: bool,
    /// (d) Both sulphur-bearing amino acids (Cys, Met) sit in class I.
    pub sulphur_in_class_one: bool,
    /// Per-group counts and means, in [`RGroupProperty::ALL`] order.
    pub group_stats: Vec<PropertyGroupStats>,
}

impl PartitionReport {
    /// True when all four named checks pass.
    pub fn all_pass(&self) -> bool {
        self.class_balance
            && self.per_property_balance
            && self.heavier_class_one
            && self.sulphur_in_class_one
    }
}

/// Runs the four partition checks on a 20-record table.
///
/// The checks express the partition's regularities: (a) a 10/10 class
/// split, (b) an equal split inside every property group, (c) heavier
/// class-I means per group — only an aggregate statement, since e.g.
/// Cys (121, class I) is lighter than Asn (132, class II) — and (d) the
/// two sulphur amino acids both in class I.
pub fn validate_partition(records: &[AminoAcidRecord]) -> Result<PartitionReport, CodeTableError> {
    if records.len() != 20 {
        return Err(CodeTableError::WrongRecordCount {
            found: records.len(),
        });
    }

    let group_stats: Vec<PropertyGroupStats> = RGroupProperty::ALL
        .iter()
        .map(|&property| {
            let mut counts = [0usize; 2];
            let mut sums = [0.0f64; 2];
            for r in records.iter().filter(|r| r.property == property) {
                let side = match r.class {
                    SynthetaseClass::I => 0,
                    SynthetaseClass::II => 1,
                };
                counts[side] += 1;
                sums[side] += r.mol_wt;
            }
            let mean = |side: usize| (counts[side] > 0).then(|| sums[side] / counts[side] as f64);
            PropertyGroupStats {
                property,
                class_one_count: counts[0],
                class_two_count: counts[1],
                class_one_mean_wt: mean(0),
                class_two_mean_wt: mean(1),
            }
        })
        .collect();

    let class_one_total: usize = group_stats.iter().map(|g| g.class_one_count).sum();
    let class_two_total: usize = group_stats.iter().map(|g| g.class_two_count).sum();

    let per_property_balance = group_stats
        .iter()
        .all(|g| g.class_one_count == g.class_two_count);

    let heavier_class_one = group_stats
        .iter()
        .filter(|g| g.class_one_count + g.class_two_count > 0)
        .all(|g| match (g.class_one_mean_wt, g.class_two_mean_wt) {
            (Some(one), Some(two)) => one > two,
            _ => false,
        });

    let sulphur: Vec<&AminoAcidRecord> = records
        .iter()
        .filter(|r| r.code3 == "Cys" || r.code3 == "Met")
        .collect();
    let sulphur_in_class_one =
        sulphur.len() == 2 && sulphur.iter().all(|r| r.class == SynthetaseClass::I);

    Ok(PartitionReport {
        class_balance: class_one_total == 10 && class_two_total == 10,
        per_property_balance,
        heavier_class_one,
        sulphur_in_class_one,
        group_stats,
    })
}

/// An alphabet size implied by a query budget, with its reading.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSignalCount {
    /// Query budget, or `None` for the structural annotation row.
    pub queries: Option<u32>,
    /// Exact distinguishable-alphabet size for that budget, if any.
    pub exact_n: Option<f64>,
    /// Nearest integer alphabet size (the annotation row carries the
    /// structural lower bound instead).
    pub rounded_alphabet: u32,
    /// What the alphabet corresponds to.
    pub interpretation: String,
}

/// The alphabet size pinned down by a `q`-query search budget.
pub fn signal_count_for_queries(q: u32) -> CodeSignalCount {
    let exact = database_size_for_queries(q);
    let interpretation = match q {
        1 => "nucleotide bases".to_string(),
        2 => "doublet code / one amino-acid class".to_string(),
        3 => "triplet code amino acids; 21 with STOP".to_string(),
        _ => String::new(),
    };
    CodeSignalCount {
        queries: Some(q),
        exact_n: Some(exact),
        rounded_alphabet: exact.round() as u32,
        interpretation,
    }
}

/// The three query-budget rows linking search arithmetic to the genetic
/// alphabets, plus the structural lower-bound annotation row.
pub fn alphabet_summary() -> Vec<CodeSignalCount> {
    let orientations = (STAR_ANGLES_DEG.len() * STAR_ANGLES_DEG.len()) as u32;
    let mut rows: Vec<CodeSignalCount> = (1..=3).map(signal_count_for_queries).collect();
    rows.push(CodeSignalCount {
        queries: None,
        exact_n: None,
        rounded_alphabet: orientations,
        interpretation: format!(
            "structural lower bound: {orientations} backbone orientations per unit ({} with the cis option)",
            orientations + 1
        ),
    });
    rows
}
