//! The case studies: model systems, admitted generators, boundary data,
//! and closed-form reference values, loadable from plain-text scenario
//! files.

pub mod file;
pub mod hopf;
pub mod optics;
pub mod plasma;

pub use file::{DetqConfig, ScnError, ScnFile, Section};
pub use hopf::{HopfError, HopfScenario};
pub use optics::{BeamProfile, OpticsError, OpticsScenario};
pub use plasma::{IonSpecies, PlasmaScenario, PopId, PopParams};

/// A loaded scenario of any kind, dispatched on the leading section name.
#[derive(Clone, Debug)]
pub enum Scenario {
    Hopf(HopfScenario),
    Optics(OpticsScenario),
    Plasma(PlasmaScenario),
}

impl Scenario {
    pub fn from_scn(f: &ScnFile) -> Result<Scenario, ScnError> {
        if f.section("hopf").is_some() {
            return Ok(Scenario::Hopf(HopfScenario::from_file(f)?));
        }
        if f.section("optics").is_some() {
            return Ok(Scenario::Optics(OpticsScenario::from_file(f)?));
        }
        if f.section("plasma").is_some() {
            return Ok(Scenario::Plasma(PlasmaScenario::from_file(f)?));
        }
        Err(ScnError::general(
            "no [hopf], [optics], or [plasma] section found",
        ))
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Scenario, ScnError> {
        Scenario::from_scn(&ScnFile::load(path)?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Hopf(_) => "hopf",
            Scenario::Optics(_) => "optics",
            Scenario::Plasma(_) => "plasma",
        }
    }
}
