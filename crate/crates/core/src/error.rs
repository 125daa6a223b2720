use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("schema has no characteristics")]
    EmptySchema,
    #[error("characteristic `{0}` has an empty range")]
    EmptyRange(String),
    #[error("characteristic `{0}` appears more than once")]
    DuplicateCharacteristic(String),
    #[error("reference level of characteristic `{0}` is not in its range")]
    ReferenceOutOfRange(String),
    #[error("importance order is not a permutation of the {0} characteristics")]
    BadImportanceOrder(usize),
    #[error("event space has no atoms")]
    NoAtoms,
    #[error("duplicate atom id `{0}`")]
    DuplicateAtom(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("range of characteristic `{0}` differs from the values its atoms take")]
    RangeMismatch(String),
    #[error("atom `{atom}` has value `{value}` outside the range of `{characteristic}`")]
    ValueOutOfRange {
        atom: String,
        characteristic: String,
        value: String,
    },
    #[error("profile has {found} values, expected {expected}")]
    ProfileLengthMismatch { expected: usize, found: usize },
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("atom index {index} lies outside a frame of {frame} atoms")]
    AtomOutOfFrame { index: usize, frame: usize },
    #[error("negative mass {0}")]
    NegativeMass(f64),
    #[error("mass assigned to the empty set")]
    EmptyFocalSet,
    #[error("masses sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("dense lattice over {atoms} atoms exceeds the cap of {cap}")]
    LatticeTooLarge { atoms: usize, cap: usize },
    #[error("all probability sits on events resembling nothing foreseen")]
    AllMassUnforeseeable,
    #[error("utility table covers {found} atoms, expected {expected}")]
    MissingUtility { expected: usize, found: usize },
    #[error("unknown decision `{0}`")]
    UnknownDecision(String),
    #[error("utility table has no decisions")]
    NoDecisions,
    #[error("expected a normalized commonality vector")]
    KindMismatch,
    #[error("oracle enumeration over {atoms} atoms exceeds the cap of {cap}")]
    SpaceTooLarge { atoms: usize, cap: usize },
}

impl Error {
    /// Stable diagnostic code, the variant name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySchema => "EmptySchema",
            Error::EmptyRange(_) => "EmptyRange",
            Error::DuplicateCharacteristic(_) => "DuplicateCharacteristic",
            Error::ReferenceOutOfRange(_) => "ReferenceOutOfRange",
            Error::BadImportanceOrder(_) => "BadImportanceOrder",
            Error::NoAtoms => "NoAtoms",
            Error::DuplicateAtom(_) => "DuplicateAtom",
            Error::UnknownAtom(_) => "UnknownAtom",
            Error::RangeMismatch(_) => "RangeMismatch",
            Error::ValueOutOfRange { .. } => "ValueOutOfRange",
            Error::ProfileLengthMismatch { .. } => "ProfileLengthMismatch",
            Error::EmptySubset => "EmptySubset",
            Error::AtomOutOfFrame { .. } => "AtomOutOfFrame",
            Error::NegativeMass(_) => "NegativeMass",
            Error::EmptyFocalSet => "EmptyFocalSet",
            Error::NotNormalized(_) => "NotNormalized",
            Error::NonFinite(_) => "NonFinite",
            Error::LatticeTooLarge { .. } => "LatticeTooLarge",
            Error::AllMassUnforeseeable => "AllMassUnforeseeable",
            Error::MissingUtility { .. } => "MissingUtility",
            Error::UnknownDecision(_) => "UnknownDecision",
            Error::NoDecisions => "NoDecisions",
            Error::KindMismatch => "KindMismatch",
            Error::SpaceTooLarge { .. } => "SpaceTooLarge",
        }
    }
}
