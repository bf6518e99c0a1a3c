//! Polypeptide backbones on the diamond lattice.
//!
//! The backbone is abstracted to uniform nearest-neighbour steps on the
//! diamond lattice (a face-centred-cubic lattice with a two-point basis).
//! Each peptide unit contributes two rotatable steps, chosen from the three
//! non-backtracking continuations at each step — the staggered torsions
//! −60°, +60° and 180°, spaced 120° apart. That yields nine orientations per
//! unit, or eighteen when the rigid peptide bond is allowed to switch from
//! trans to cis: the cis option replaces the unit's first continuation set
//! with the eclipsed alternative (0°, +120°, −120°), a local switch from the
//! cubic to the hexagonal stacking.
//!
//! Cis steps leave the integer lattice (their coordinates pick up thirds),
//! so chain positions are exact rationals; self-avoidance checks are
//! therefore exact with no floating-point tolerance. Trans-only chains can
//! be mapped back to labelled lattice sites.
//!
//! The module also discretizes continuous Ramachandran angle pairs onto the
//! nine-point star grid `{−60°, 60°, 180°}²` under the toroidal metric.

use num::rational::Ratio;
use num::ToPrimitive;
use std::collections::HashSet;
use thiserror::Error;

/// Exact rational coordinate (denominators are powers of three).
pub type Frac = Ratio<i128>;

/// Exact position or bond vector in cubic coordinates (bond length `√3`).
pub type LatticeVector = [Frac; 3];

/// Torsion angles of the staggered continuation set, indexed 0, 1, 2.
pub const STAR_ANGLES_DEG: [f64; 3] = [-60.0, 60.0, 180.0];

/// Default guard on enumeration size (9^(n−1) grows fast).
pub const DEFAULT_UNIT_CAP: usize = 12;

/// Errors raised by chain building, enumeration, and discretization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    /// Torsion indices address one of three continuations.
    #[error("torsion index {index} must be 0, 1, or 2")]
    InvalidTorsionIndex { index: u8 },
    /// The chain revisited an occupied site.
    #[error("chain self-intersects at ({}, {}, {})", .site[0], .site[1], .site[2])]
    Collision { site: LatticeVector },
    /// Enumeration needs at least one unit.
    #[error("chain must contain at least one unit")]
    EmptyChain,
    /// Desk-scale resource guard.
    #[error("{n_units} units exceed the enumeration cap of {cap}")]
    CapExceeded { n_units: usize, cap: usize },
    /// Cis steps leave the diamond lattice; only trans-only chains embed.
    #[error("position {index} lies off the diamond lattice")]
    OffLattice { index: usize },
    /// Angles must be finite degrees.
    #[error("angles must be finite, got ({phi_deg}, {psi_deg})")]
    NonFiniteAngle { phi_deg: f64, psi_deg: f64 },
    /// Parallel enumeration needs at least one worker.
    #[error("thread count must be at least 1")]
    InvalidThreadCount,
}

/// The two interpenetrating sublattices of the diamond structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sublattice {
    /// Sites whose cubic coordinates are all even.
    A,
    /// Sites whose cubic coordinates are all odd.
    B,
}

/// A diamond-lattice site: face-centred-cubic cell plus basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiamondSite {
    /// Coefficients of the primitive vectors (0,2,2), (2,0,2), (2,2,0).
    pub cell: [i32; 3],
    /// Which of the two basis points the site occupies.
    pub sublattice: Sublattice,
}

impl DiamondSite {
    /// Cubic integer coordinates; nearest-neighbour bonds have length `√3`.
    pub fn position(&self) -> [i64; 3] {
        let [c1, c2, c3] = self.cell.map(i64::from);
        let base = [2 * (c2 + c3), 2 * (c1 + c3), 2 * (c1 + c2)];
        match self.sublattice {
            Sublattice::A => base,
            Sublattice::B => [base[0] + 1, base[1] + 1, base[2] + 1],
        }
    }

    /// The four nearest neighbours, all on the opposite sublattice.
    ///
    /// From an A site the bond vectors are (1,1,1), (1,−1,−1), (−1,1,−1)
    /// and (−1,−1,1) — the four all-odd directions with an even number of
    /// minus signs — and their negatives from a B site. Any two bonds at a
    /// site meet at the tetrahedral angle arccos(−1/3).
    pub fn neighbours(&self) -> [DiamondSite; 4] {
        let [c1, c2, c3] = self.cell;
        match self.sublattice {
            Sublattice::A => [
                DiamondSite {
                    cell: [c1, c2, c3],
                    sublattice: Sublattice::B,
                },
                DiamondSite {
                    cell: [c1 - 1, c2, c3],
                    sublattice: Sublattice::B,
                },
                DiamondSite {
                    cell: [c1, c2 - 1, c3],
                    sublattice: Sublattice::B,
                },
                DiamondSite {
                    cell: [c1, c2, c3 - 1],
                    sublattice: Sublattice::B,
                },
            ],
            Sublattice::B => [
                DiamondSite {
                    cell: [c1, c2, c3],
                    sublattice: Sublattice::A,
                },
                DiamondSite {
                    cell: [c1 + 1, c2, c3],
                    sublattice: Sublattice::A,
                },
                DiamondSite {
                    cell: [c1, c2 + 1, c3],
                    sublattice: Sublattice::A,
                },
                DiamondSite {
                    cell: [c1, c2, c3 + 1],
                    sublattice: Sublattice::A,
                },
            ],
        }
    }
}

/// Whether the rigid peptide bond of a unit is trans or cis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Omega {
    /// Staggered continuation set (−60°, +60°, 180°) — the common case.
    #[default]
    Trans,
    /// Eclipsed continuation set (0°, +120°, −120°) for the unit's first
    /// step — the hexagonal-stacking switch.
    Cis,
}

/// Discrete orientation of one peptide unit: two torsion indices plus the
/// peptide-bond isomer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionChoice {
    phi_index: u8,
    psi_index: u8,
    omega: Omega,
}

impl TorsionChoice {
    /// Validates that both torsion indices address a continuation.
    pub fn new(phi_index: u8, psi_index: u8, omega: Omega) -> Result<Self, LatticeError> {
        for index in [phi_index, psi_index] {
            if index > 2 {
                return Err(LatticeError::InvalidTorsionIndex { index });
            }
        }
        Ok(Self {
            phi_index,
            psi_index,
            omega,
        })
    }

    /// First-step torsion index (0 → −60°, 1 → +60°, 2 → 180°).
    pub fn phi_index(&self) -> u8 {
        self.phi_index
    }

    /// Second-step torsion index.
    pub fn psi_index(&self) -> u8 {
        self.psi_index
    }

    /// Peptide-bond isomer.
    pub fn omega(&self) -> Omega {
        self.omega
    }
}

fn v_add(a: &LatticeVector, b: &LatticeVector) -> LatticeVector {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn v_sub(a: &LatticeVector, b: &LatticeVector) -> LatticeVector {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &LatticeVector, b: &LatticeVector) -> LatticeVector {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &LatticeVector, b: &LatticeVector) -> Frac {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn int_vec(x: i128, y: i128, z: i128) -> LatticeVector {
    [
        Frac::from_integer(x),
        Frac::from_integer(y),
        Frac::from_integer(z),
    ]
}

/// The three staggered continuations of the frame (`b_pp`, `b_prev`) —
/// the two bonds preceding the new step — indexed by torsion angle
/// −60°, +60°, 180°.
fn staggered(b_pp: &LatticeVector, b_prev: &LatticeVector) -> [LatticeVector; 3] {
    let c = cross(b_prev, b_pp);
    let half = Frac::new(1, 2);
    let minus_sixty = [
        (b_prev[0] - b_pp[0] + c[0]) * half,
        (b_prev[1] - b_pp[1] + c[1]) * half,
        (b_prev[2] - b_pp[2] + c[2]) * half,
    ];
    let plus_sixty = [
        (b_prev[0] - b_pp[0] - c[0]) * half,
        (b_prev[1] - b_pp[1] - c[1]) * half,
        (b_prev[2] - b_pp[2] - c[2]) * half,
    ];
    [minus_sixty, plus_sixty, *b_pp]
}

/// The three eclipsed continuations: each staggered candidate rotated +60°
/// about `b_prev`, mapping torsion indices 0, 1, 2 to 0°, +120°, −120°.
fn eclipsed(b_pp: &LatticeVector, b_prev: &LatticeVector) -> [LatticeVector; 3] {
    staggered(b_pp, b_prev).map(|v| {
        let c = cross(b_prev, &v);
        let d = dot(b_prev, &v);
        let sixth = Frac::new(1, 6);
        let three = Frac::from_integer(3);
        [
            (three * v[0] + three * c[0] + d * b_prev[0]) * sixth,
            (three * v[1] + three * c[1] + d * b_prev[1]) * sixth,
            (three * v[2] + three * c[2] + d * b_prev[2]) * sixth,
        ]
    })
}

/// Fixed canonical seed segment: the first peptide unit, pinned so counts
/// are per rotational-translational equivalence class.
fn seed_positions() -> Vec<LatticeVector> {
    vec![int_vec(0, 0, 0), int_vec(1, 1, 1), int_vec(0, 2, 2)]
}

/// A self-avoiding backbone: one torsion choice per unit after the first,
/// plus the exact positions they trace out (two steps per unit).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainConformation {
    choices: Vec<TorsionChoice>,
    positions: Vec<LatticeVector>,
}

impl ChainConformation {
    /// An empty chain; the first extension lays down the canonical seed.
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of peptide units (a chain of `n` units spans `2n + 1` sites).
    pub fn units(&self) -> usize {
        if self.positions.is_empty() {
            0
        } else {
            self.choices.len() + 1
        }
    }

    /// Torsion choices, one per unit after the first.
    pub fn choices(&self) -> &[TorsionChoice] {
        &self.choices
    }

    /// Exact backbone positions in cubic coordinates (bond length `√3`).
    pub fn positions(&self) -> &[LatticeVector] {
        &self.positions
    }

    /// Maps a trans-only chain back to labelled diamond-lattice sites.
    ///
    /// Fails with [`LatticeError::OffLattice`] as soon as a position has a
    /// fractional or mixed-parity coordinate (any chain with a cis step).
    pub fn sites(&self) -> Result<Vec<DiamondSite>, LatticeError> {
        self.positions
            .iter()
            .enumerate()
            .map(|(index, p)| {
                let off = LatticeError::OffLattice { index };
                let mut ints = [0i128; 3];
                for (slot, coord) in ints.iter_mut().zip(p) {
                    if !coord.is_integer() {
                        return Err(off.clone());
                    }
                    *slot = coord.to_integer();
                }
                let odd = ints.map(|x| x.rem_euclid(2));
                let (sublattice, even_part) = match odd {
                    [0, 0, 0] => (Sublattice::A, ints),
                    [1, 1, 1] => (Sublattice::B, ints.map(|x| x - 1)),
                    _ => return Err(off),
                };
                let h = even_part.map(|x| x / 2);
                let doubled = [h[1] + h[2] - h[0], h[0] + h[2] - h[1], h[0] + h[1] - h[2]];
                let mut cell = [0i32; 3];
                for (slot, d) in cell.iter_mut().zip(doubled) {
                    if d.rem_euclid(2) != 0 {
                        return Err(off.clone());
                    }
                    *slot = i32::try_from(d / 2).map_err(|_| off.clone())?;
                }
                Ok(DiamondSite { cell, sublattice })
            })
            .collect()
    }
}

/// Appends one peptide unit (two lattice steps) selected by `choice`.
///
/// Extending an empty chain lays down the fixed seed segment and ignores the
/// torsion indices — the first unit has no predecessor to rotate against.
/// Self-intersection is reported with the offending site.
pub fn extend_chain(
    conf: &ChainConformation,
    choice: TorsionChoice,
) -> Result<ChainConformation, LatticeError> {
    if conf.positions.is_empty() {
        return Ok(ChainConformation {
            choices: Vec::new(),
            positions: seed_positions(),
        });
    }
    let occupied: HashSet<&LatticeVector> = conf.positions.iter().collect();
    let k = conf.positions.len();
    let b_prev = v_sub(&conf.positions[k - 1], &conf.positions[k - 2]);
    let b_pp = v_sub(&conf.positions[k - 2], &conf.positions[k - 3]);

    let first_set = match choice.omega {
        Omega::Trans => staggered(&b_pp, &b_prev),
        Omega::Cis => eclipsed(&b_pp, &b_prev),
    };
    let d1 = first_set[choice.phi_index as usize];
    let p1 = v_add(&conf.positions[k - 1], &d1);
    if occupied.contains(&p1) {
        return Err(LatticeError::Collision { site: p1 });
    }
    let d2 = staggered(&b_prev, &d1)[choice.psi_index as usize];
    let p2 = v_add(&p1, &d2);
    if p2 == p1 || occupied.contains(&p2) {
        return Err(LatticeError::Collision { site: p2 });
    }

    let mut extended = conf.clone();
    extended.choices.push(choice);
    extended.positions.push(p1);
    extended.positions.push(p2);
    Ok(extended)
}

/// Depth-first enumeration core. Visits every self-avoiding continuation in
/// lexicographic (phi, psi, omega) order and returns the subtree count.
fn enumerate_rec(
    positions: &mut Vec<LatticeVector>,
    occupied: &mut HashSet<LatticeVector>,
    choices: &mut Vec<TorsionChoice>,
    units_done: usize,
    target: usize,
    allow_cis: bool,
    visitor: &mut Option<&mut dyn FnMut(&ChainConformation)>,
) -> u64 {
    if units_done == target {
        if let Some(visit) = visitor {
            visit(&ChainConformation {
                choices: choices.clone(),
                positions: positions.clone(),
            });
        }
        return 1;
    }
    let k = positions.len();
    let b_prev = v_sub(&positions[k - 1], &positions[k - 2]);
    let b_pp = v_sub(&positions[k - 2], &positions[k - 3]);
    let trans_set = staggered(&b_pp, &b_prev);
    let cis_set = allow_cis.then(|| eclipsed(&b_pp, &b_prev));

    let mut count = 0;
    for phi in 0..3u8 {
        for psi in 0..3u8 {
            for omega in [Omega::Trans, Omega::Cis] {
                let first_set = match omega {
                    Omega::Trans => &trans_set,
                    Omega::Cis => match &cis_set {
                        Some(set) => set,
                        None => continue,
                    },
                };
                let d1 = first_set[phi as usize];
                let last = positions[positions.len() - 1];
                let p1 = v_add(&last, &d1);
                if occupied.contains(&p1) {
                    continue;
                }
                let d2 = staggered(&b_prev, &d1)[psi as usize];
                let p2 = v_add(&p1, &d2);
                if occupied.contains(&p2) {
                    continue;
                }
                positions.push(p1);
                positions.push(p2);
                occupied.insert(p1);
                occupied.insert(p2);
                choices.push(TorsionChoice {
                    phi_index: phi,
                    psi_index: psi,
                    omega,
                });
                count += enumerate_rec(
                    positions,
                    occupied,
                    choices,
                    units_done + 1,
                    target,
                    allow_cis,
                    visitor,
                );
                choices.pop();
                occupied.remove(&p2);
                occupied.remove(&p1);
                positions.pop();
                positions.pop();
            }
        }
    }
    count
}

fn check_enumeration_size(n_units: usize, cap: usize) -> Result<(), LatticeError> {
    if n_units == 0 {
        return Err(LatticeError::EmptyChain);
    }
    if n_units > cap {
        return Err(LatticeError::CapExceeded { n_units, cap });
    }
    Ok(())
}

/// Counts all self-avoiding conformations of `n_units` peptide units.
///
/// The seed is fixed, so the count is per rotational-translational
/// equivalence class: `count(1) = 1`, and without collisions the bound is
/// `9^(n−1)` (`18^(n−1)` with cis continuations).
pub fn count_conformations(n_units: usize, allow_cis: bool) -> Result<u64, LatticeError> {
    visit_conformations(n_units, allow_cis, |_| {})
}

/// Like [`count_conformations`] but with an explicit cap override.
pub fn count_conformations_with_cap(
    n_units: usize,
    allow_cis: bool,
    cap: usize,
) -> Result<u64, LatticeError> {
    check_enumeration_size(n_units, cap)?;
    let mut positions = seed_positions();
    let mut occupied: HashSet<LatticeVector> = positions.iter().copied().collect();
    let mut none: Option<&mut dyn FnMut(&ChainConformation)> = None;
    Ok(enumerate_rec(
        &mut positions,
        &mut occupied,
        &mut Vec::new(),
        1,
        n_units,
        allow_cis,
        &mut none,
    ))
}

/// Streams every self-avoiding conformation to `visit` in deterministic
/// lexicographic order of torsion choices, returning the total count.
pub fn visit_conformations(
    n_units: usize,
    allow_cis: bool,
    mut visit: impl FnMut(&ChainConformation),
) -> Result<u64, LatticeError> {
    check_enumeration_size(n_units, DEFAULT_UNIT_CAP)?;
    let mut positions = seed_positions();
    let mut occupied: HashSet<LatticeVector> = positions.iter().copied().collect();
    let mut visitor: Option<&mut dyn FnMut(&ChainConformation)> = Some(&mut visit);
    Ok(enumerate_rec(
        &mut positions,
        &mut occupied,
        &mut Vec::new(),
        1,
        n_units,
        allow_cis,
        &mut visitor,
    ))
}

/// Counts conformations with the first-choice subtrees partitioned across
/// up to `threads` workers. The sum is identical to the sequential count.
pub fn count_conformations_parallel(
    n_units: usize,
    allow_cis: bool,
    threads: usize,
) -> Result<u64, LatticeError> {
    if threads == 0 {
        return Err(LatticeError::InvalidThreadCount);
    }
    check_enumeration_size(n_units, DEFAULT_UNIT_CAP)?;
    if threads == 1 || n_units <= 2 {
        return count_conformations(n_units, allow_cis);
    }

    // One job per first-unit torsion choice; each explores its own subtree.
    let seed = extend_chain(&ChainConformation::new(), TorsionChoice::default())?;
    let mut jobs = Vec::new();
    for phi in 0..3u8 {
        for psi in 0..3u8 {
            for omega in [Omega::Trans, Omega::Cis] {
                if omega == Omega::Cis && !allow_cis {
                    continue;
                }
                let choice = TorsionChoice {
                    phi_index: phi,
                    psi_index: psi,
                    omega,
                };
                // No collision is possible at two units.
                jobs.push(extend_chain(&seed, choice)?);
            }
        }
    }

    let workers = threads.min(jobs.len());
    let chunk = jobs.len().div_ceil(workers);
    let total = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|batch| {
                scope.spawn(move || {
                    batch
                        .iter()
                        .map(|prefix| {
                            let mut positions = prefix.positions().to_vec();
                            let mut occupied: HashSet<LatticeVector> =
                                positions.iter().copied().collect();
                            let mut choices = prefix.choices().to_vec();
                            let mut none: Option<&mut dyn FnMut(&ChainConformation)> = None;
                            enumerate_rec(
                                &mut positions,
                                &mut occupied,
                                &mut choices,
                                2,
                                n_units,
                                allow_cis,
                                &mut none,
                            )
                        })
                        .sum::<u64>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).sum()
    });
    Ok(total)
}

/// Cartesian coordinates of a conformation with the given physical bond
/// length (the exact lattice has bond length `√3`).
pub fn conformation_to_coordinates(conf: &ChainConformation, bond_length: f64) -> Vec<[f64; 3]> {
    let scale = bond_length / 3.0_f64.sqrt();
    conf.positions()
        .iter()
        .map(|p| p.map(|c| c.to_f64().expect("small rational") * scale))
        .collect()
}

/// Minimal XYZ-format block for molecular viewers; every backbone site is
/// written as a carbon atom.
pub fn to_xyz_block(conf: &ChainConformation, bond_length: f64) -> String {
    let coords = conformation_to_coordinates(conf, bond_length);
    let mut out = format!("{}\nbackbone of {} units\n", coords.len(), conf.units());
    for [x, y, z] in coords {
        out.push_str(&format!("C {x:.6} {y:.6} {z:.6}\n"));
    }
    out
}

/// A continuous torsion-angle pair in degrees, wrapped to (−180°, 180°].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamachandranPoint {
    phi_deg: f64,
    psi_deg: f64,
}

fn wrap_deg(angle: f64) -> f64 {
    let r = angle.rem_euclid(360.0);
    if r > 180.0 {
        r - 360.0
    } else {
        r
    }
}

impl RamachandranPoint {
    /// Wraps arbitrary finite angles into the periodic fundamental domain.
    pub fn new(phi_deg: f64, psi_deg: f64) -> Result<Self, LatticeError> {
        if !(phi_deg.is_finite() && psi_deg.is_finite()) {
            return Err(LatticeError::NonFiniteAngle { phi_deg, psi_deg });
        }
        Ok(Self {
            phi_deg: wrap_deg(phi_deg),
            psi_deg: wrap_deg(psi_deg),
        })
    }

    /// First torsion angle in (−180°, 180°].
    pub fn phi_deg(&self) -> f64 {
        self.phi_deg
    }

    /// Second torsion angle in (−180°, 180°].
    pub fn psi_deg(&self) -> f64 {
        self.psi_deg
    }
}

/// A star-grid assignment: the nearest discrete orientation and how far the
/// continuous point sits from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarAssignment {
    /// Nearest star point as a (trans) torsion choice.
    pub choice: TorsionChoice,
    /// Toroidal distance to that star: the larger of the two circular
    /// distances, at most 60°.
    pub distance_deg: f64,
}

/// Circular distance between two angles in degrees, in [0°, 180°].
fn circular_distance_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

fn nearest_star_index(angle_deg: f64) -> (u8, f64) {
    let mut best = 0u8;
    let mut best_distance = circular_distance_deg(angle_deg, STAR_ANGLES_DEG[0]);
    for (index, star) in STAR_ANGLES_DEG.iter().enumerate().skip(1) {
        let distance = circular_distance_deg(angle_deg, *star);
        if distance < best_distance {
            best = index as u8;
            best_distance = distance;
        }
    }
    (best, best_distance)
}

/// Assigns a continuous angle pair to the nearest of the nine star points
/// under the max-of-circular-distances toroidal metric.
///
/// Stars sit 120° apart on each axis, so each axis has a unique nearest
/// star except exactly at a midpoint; ties break toward the smaller index,
/// which equals the lexicographically smallest (phi, psi) pair globally.
/// The distance never exceeds 60°, the Voronoi radius of the grid.
pub fn discretize_angles(point: RamachandranPoint) -> StarAssignment {
    let (phi_index, phi_distance) = nearest_star_index(point.phi_deg);
    let (psi_index, psi_distance) = nearest_star_index(point.psi_deg);
    StarAssignment {
        choice: TorsionChoice {
            phi_index,
            psi_index,
            omega: Omega::Trans,
        },
        distance_deg: phi_distance.max(psi_distance),
    }
}
