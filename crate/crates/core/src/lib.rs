//! Constructions and checks for finite linear spaces acted on by groups of
//! Lie type.
//!
//! * [`gf`]: arithmetic in GF(p^k).
//! * [`matrep`]: matrix groups over finite fields and their projective actions.
//! * [`permgroup`]: permutation groups (Schreier–Sims, orbits, Sylow, normalizers).
//! * [`designs`]: incidence structures, the Hermitian and Ree unitals.
//! * [`weyl`]: root systems, Weyl groups, Poincaré polynomials and the
//!   divisibility scans over prime powers.

pub mod designs;
pub mod gf;
pub mod matrep;
pub mod permgroup;
pub mod weyl;

pub use designs::{Flag, IncidenceStructure, SpaceParams};
pub use gf::{FieldCtx, FieldElem};
pub use matrep::{FormKind, FormSpec, Matrix, ProjPoint};
pub use permgroup::{Perm, PermGroup};
pub use weyl::{IntPoly, LemmaReport, RootSystem, WeylData};
