use crate::plmap::Interval;
use crate::rational::Rat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0} is outside the domain [0,1]")]
    OutOfDomain(Rat),
    #[error("breakpoint list is not a valid homeomorphism of [0,1]: {0}")]
    InvalidBreakpoints(String),
    #[error("map does not fix the ends of {0}")]
    EndsNotFixed(Interval),
    #[error("{0} is not a group orbital here")]
    NotGroupOrbital(Interval),
    #[error("{0} is not an orbital of any given element")]
    NotElementOrbital(Interval),
    #[error("slope-pair lattice is {0}, not cyclic")]
    LatticeNotCyclic(&'static str),
    #[error("slope pair of the element is not a power of the controller's pair")]
    NotControllerPower,
    #[error("no ball element maps to the lattice generator within radius {0}")]
    RadiusExhausted(usize),
    #[error("enumeration cap of {0} elements exceeded")]
    CapExceeded(usize),
    #[error("transition-chain obstruction between orbitals {0} and {1}")]
    TransitionChainObstruction(Interval, Interval),
    #[error("termination budget of {0} leading-orbital shrinks exhausted")]
    BudgetExhausted(usize),
    #[error("no ball element found with orbital {0} (radius too small?)")]
    NoMatchingElement(Interval),
    #[error("generator has {0} orbitals, expected exactly one")]
    MultiOrbitalGenerator(usize),
    #[error("imbalance witness found on orbital {0}")]
    ImbalanceFound(Interval),
    #[error("two generators share the orbital {0} after conjugation")]
    SharedOrbital(Interval),
    #[error("conjugating into the fundamental domain would cross its left end {0}")]
    FundamentalDomainCrossing(Rat),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
