//! The equivalence hierarchy: shift equivalence, power conjugacy over the
//! rationals, necessary conditions and obstructions, and certificates for
//! equivalence of the associated dimension groups.

mod certificate;
mod conditions;
mod conjugacy;
mod obstruction;
mod shift;

pub use certificate::{
    build_cstar_certificate, unit_preservation_check, CStarCertificate, CertificateOptions, Precondition,
};
pub use conditions::{
    field_and_prime_conditions, intertwiner_conditions, FieldPrimeReport, IntertwinerReport, ModuleProbe,
};
pub use conjugacy::{powers_conjugate_over_q, rational_conjugator, ConjugacyReport};
pub use obstruction::{is_cyclotomic, no_power_conjugacy_obstruction, FactorEvidence, Obstruction, ObstructionKind};
pub use shift::{
    check_shift_equivalence, companion_rigidity, scaled_companion, ShiftEquivalence, ShiftSearch,
    DEFAULT_COEFFICIENT_BOUND,
};
