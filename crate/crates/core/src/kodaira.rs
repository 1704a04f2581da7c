//! Kodaira fibers of `y² = x³ + B(t)`, Shioda–Tate bookkeeping and the embedded
//! classification data for the surfaces that occur in the family.

use std::fmt;

use serde::Serialize;

use crate::algebra::{factor, Place};
use crate::surface::JZeroModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FiberType {
    I0,
    I(u32),
    II,
    III,
    IV,
    I0Star,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RootLattice {
    A(u32),
    D(u32),
    E(u32),
}

impl RootLattice {
    pub fn rank(&self) -> u32 {
        match *self {
            RootLattice::A(n) | RootLattice::D(n) | RootLattice::E(n) => n,
        }
    }
}

impl fmt::Display for RootLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLattice::A(n) => write!(f, "A{n}"),
            RootLattice::D(n) => write!(f, "D{n}"),
            RootLattice::E(n) => write!(f, "E{n}"),
        }
    }
}

/// Group of simple components, as invariant factors (`[]` is trivial).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ComponentGroup(pub Vec<u32>);

impl fmt::Display for ComponentGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl FiberType {
    /// Type of a minimal `y² = x³ + B` with `0 ≤ v(B) < 6` (characteristic > 3).
    pub fn from_j_zero_valuation(v: i64) -> Option<Self> {
        Some(match v {
            0 => FiberType::I0,
            1 => FiberType::II,
            2 => FiberType::IV,
            3 => FiberType::I0Star,
            4 => FiberType::IVStar,
            5 => FiberType::IIStar,
            _ => return None,
        })
    }

    pub fn euler(&self) -> u32 {
        match *self {
            FiberType::I0 => 0,
            FiberType::I(n) => n,
            FiberType::II => 2,
            FiberType::III => 3,
            FiberType::IV => 4,
            FiberType::I0Star => 6,
            FiberType::IStar(n) => n + 6,
            FiberType::IVStar => 8,
            FiberType::IIIStar => 9,
            FiberType::IIStar => 10,
        }
    }

    pub fn components(&self) -> u32 {
        match *self {
            FiberType::I0 | FiberType::II => 1,
            FiberType::I(n) => n,
            FiberType::III => 2,
            FiberType::IV => 3,
            FiberType::I0Star => 5,
            FiberType::IStar(n) => n + 5,
            FiberType::IVStar => 7,
            FiberType::IIIStar => 8,
            FiberType::IIStar => 9,
        }
    }

    pub fn root_lattice(&self) -> Option<RootLattice> {
        match *self {
            FiberType::I0 | FiberType::II | FiberType::I(1) => None,
            FiberType::I(n) => Some(RootLattice::A(n - 1)),
            FiberType::III => Some(RootLattice::A(1)),
            FiberType::IV => Some(RootLattice::A(2)),
            FiberType::I0Star => Some(RootLattice::D(4)),
            FiberType::IStar(n) => Some(RootLattice::D(4 + n)),
            FiberType::IVStar => Some(RootLattice::E(6)),
            FiberType::IIIStar => Some(RootLattice::E(7)),
            FiberType::IIStar => Some(RootLattice::E(8)),
        }
    }

    pub fn component_group(&self) -> ComponentGroup {
        ComponentGroup(match *self {
            FiberType::I0 | FiberType::II | FiberType::IIStar => vec![],
            FiberType::I(n) if n <= 1 => vec![],
            FiberType::I(n) => vec![n],
            FiberType::III | FiberType::IIIStar => vec![2],
            FiberType::IV | FiberType::IVStar => vec![3],
            FiberType::I0Star => vec![2, 2],
            FiberType::IStar(n) if n % 2 == 0 => vec![2, 2],
            FiberType::IStar(_) => vec![4],
        })
    }

    pub fn is_good(&self) -> bool {
        *self == FiberType::I0
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::I0 => write!(f, "I0"),
            FiberType::I(n) => write!(f, "I{n}"),
            FiberType::II => write!(f, "II"),
            FiberType::III => write!(f, "III"),
            FiberType::IV => write!(f, "IV"),
            FiberType::I0Star => write!(f, "I0*"),
            FiberType::IStar(n) => write!(f, "I{n}*"),
            FiberType::IVStar => write!(f, "IV*"),
            FiberType::IIIStar => write!(f, "III*"),
            FiberType::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KodairaFiber {
    pub place: Place,
    pub fiber_type: FiberType,
    /// `v(B)` in the minimal chart at the place.
    pub valuation: i64,
}

impl KodairaFiber {
    pub fn degree(&self) -> usize {
        self.place.degree()
    }

    pub fn euler(&self) -> u32 {
        self.fiber_type.euler()
    }

    pub fn components(&self) -> u32 {
        self.fiber_type.components()
    }

    pub fn root_lattice(&self) -> Option<RootLattice> {
        self.fiber_type.root_lattice()
    }

    pub fn component_group(&self) -> ComponentGroup {
        self.fiber_type.component_group()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KodairaError {
    #[error("model is not minimal at {place} (v(B) = {valuation})")]
    NonMinimal { place: String, valuation: i64 },
    #[error("Euler numbers sum to {0}, not a multiple of 12")]
    ChiNotIntegral(u32),
    #[error("Euler budget gives chi = {budget} but the model at infinity gives {model}")]
    ChiMismatch { budget: u32, model: u32 },
}

/// Fiber at `place`, `None` for good reduction. Infinity is read in the twisted chart.
pub fn tate_at_place(model: &JZeroModel, place: &Place) -> Result<Option<KodairaFiber>, KodairaError> {
    let valuation = match place {
        Place::Infinity(_) => model.infinity_valuation(),
        Place::Finite(_) => model.b().valuation(place).expect("B ≠ 0"),
    };
    let fiber_type = FiberType::from_j_zero_valuation(valuation)
        .ok_or_else(|| KodairaError::NonMinimal { place: place.to_string(), valuation })?;
    Ok((!fiber_type.is_good()).then(|| KodairaFiber { place: place.clone(), fiber_type, valuation }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationReport {
    pub surface: String,
    pub chi: u32,
    pub fibers: Vec<KodairaFiber>,
}

impl FibrationReport {
    /// Trivial lattice over the algebraic closure: a degree-`d` place counts `d` times.
    pub fn trivial_lattice(&self) -> Vec<RootLattice> {
        let mut out: Vec<RootLattice> = self
            .fibers
            .iter()
            .filter_map(|f| f.root_lattice().map(|l| (l, f.degree())))
            .flat_map(|(l, d)| std::iter::repeat_n(l, d))
            .collect();
        out.sort();
        out
    }

    pub fn trivial_lattice_rank(&self) -> u32 {
        self.trivial_lattice().iter().map(RootLattice::rank).sum()
    }

    /// Geometric fiber types with multiplicity, sorted.
    pub fn geometric_fibers(&self) -> Vec<FiberType> {
        let mut out: Vec<FiberType> = self
            .fibers
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.fiber_type, f.degree()))
            .collect();
        out.sort();
        out
    }

    pub fn euler_sum(&self) -> u32 {
        self.fibers.iter().map(|f| f.degree() as u32 * f.euler()).sum()
    }
}

/// Bad fibers at every closed point of `P¹` over the model's coefficient field.
pub fn fiber_configuration(model: &JZeroModel, surface: impl Into<String>) -> Result<FibrationReport, KodairaError> {
    let b = model.b();
    let mut places: Vec<Place> = factor(b.num())
        .into_iter()
        .chain(factor(b.den()))
        .map(|(pi, _)| Place::Finite(pi))
        .collect();
    places.push(Place::Infinity(model.field()));
    let mut fibers = Vec::new();
    for place in &places {
        if let Some(fiber) = tate_at_place(model, place)? {
            fibers.push(fiber);
        }
    }
    let report = FibrationReport { surface: surface.into(), chi: 0, fibers };
    let total = report.euler_sum();
    if !total.is_multiple_of(12) {
        return Err(KodairaError::ChiNotIntegral(total));
    }
    let chi = total / 12;
    if chi != model.infinity_twist() {
        return Err(KodairaError::ChiMismatch { budget: chi, model: model.infinity_twist() });
    }
    Ok(FibrationReport { chi, ..report })
}

/// Finitely generated abelian group `Z^rank ⊕ Π Z/n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MwGroup {
    pub rank: u32,
    pub torsion: Vec<u32>,
}

impl MwGroup {
    pub const fn new(rank: u32, torsion: Vec<u32>) -> Self {
        MwGroup { rank, torsion }
    }
}

impl fmt::Display for MwGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// An imported classification fact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedGroup {
    pub group: MwGroup,
    pub source: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported configuration: chi = {chi}, T = {lattice}")]
pub struct UnsupportedConfiguration {
    pub chi: u32,
    pub lattice: String,
}

const OGUISO_SHIODA: &str = "Oguiso-Shioda classification of rational elliptic surfaces";
const EXTREMAL_K3: &str = "Shimada-Zhang list of extremal elliptic K3 surfaces; rank 0 from rk = 6 over the closure";
const KUWATA_MW: &str = "Mordell-Weil group of the Kuwata surface over the closure: Z^6 + Z/3";

fn lattice_label(t: &[RootLattice]) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
}

/// `MW` over `F̄_q`, from the embedded table keyed by `(χ, T)`.
pub fn geometric_mw(report: &FibrationReport) -> Result<ClassifiedGroup, UnsupportedConfiguration> {
    use RootLattice::{A, D, E};
    let t = report.trivial_lattice();
    let found = match (report.chi, t.as_slice()) {
        (1, [A(2), E(6)]) => Some((MwGroup::new(0, vec![3]), OGUISO_SHIODA)),
        (1, [A(2), D(4)]) => Some((MwGroup::new(2, vec![]), OGUISO_SHIODA)),
        (1, [A(2), A(2), A(2)]) => Some((MwGroup::new(2, vec![3]), OGUISO_SHIODA)),
        (2, [A(2), E(8), E(8)]) => Some((MwGroup::new(0, vec![]), EXTREMAL_K3)),
        (2, [A(2), A(2), A(2), A(2), A(2), A(2)]) => Some((MwGroup::new(6, vec![3]), KUWATA_MW)),
        _ => None,
    };
    found
        .map(|(group, source)| ClassifiedGroup { group, source })
        .ok_or_else(|| UnsupportedConfiguration { chi: report.chi, lattice: lattice_label(&t) })
}

/// `ρ = 2 + rank T + rank MW`.
pub fn shioda_tate_rho(trivial_lattice: &[RootLattice], mw: &MwGroup) -> u32 {
    2 + trivial_lattice.iter().map(RootLattice::rank).sum::<u32>() + mw.rank
}

/// Expected row for `E_j`: geometric fibers, trivial lattice, `MW(Ē_j)`, `ρ(Ē_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceRow {
    pub j: u8,
    pub fibers: Vec<FiberType>,
    pub lattice: Vec<RootLattice>,
    pub mw: MwGroup,
    pub rho: u32,
}

/// Published rows for `j ∈ {0, 1, 2, 5}`.
pub fn expected_rows() -> Vec<SurfaceRow> {
    use FiberType::*;
    use RootLattice::{A, D, E};
    let row = |j, mut fibers: Vec<FiberType>, lattice: Vec<RootLattice>, mw, rho| {
        fibers.sort();
        SurfaceRow { j, fibers, lattice, mw, rho }
    };
    vec![
        row(0, vec![IV, IVStar], vec![A(2), E(6)], MwGroup::new(0, vec![3]), 10),
        row(1, vec![II, IV, I0Star], vec![A(2), D(4)], MwGroup::new(2, vec![]), 10),
        row(2, vec![IV, IV, IV], vec![A(2), A(2), A(2)], MwGroup::new(2, vec![3]), 10),
        row(5, vec![IV, IIStar, IIStar], vec![A(2), E(8), E(8)], MwGroup::new(0, vec![]), 20),
    ]
}
