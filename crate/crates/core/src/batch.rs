//! Corpus sweeps. Each instance is independent, so sweeps run through
//! [`Execution`] and produce per-instance results in input order.
//!
//! Randomised checks seed a fresh generator per instance from the sweep seed
//! and the instance index, so results do not depend on the execution mode.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bridge::{lattice_to_efg, simplify_efg, verify_isomorphism, BridgeError};
use crate::efg::{explore, verify_propp, EfgError, EfgInstance, ExploreOptions, ProppFailure};
use crate::exec::Execution;
use crate::lattice::Lattice;
use crate::poset::{isomorphism, PosetError};

/// Random predecessor paths sampled per configuration in path-independence
/// checks.
pub const PATH_SAMPLES: usize = 10;

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Outcome of building and certifying the game for one lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundTrip {
    pub configs: usize,
    pub simple: bool,
}

/// Lattice to game, explore, certify.
pub fn round_trip(l: &Lattice) -> Result<RoundTrip, BridgeError> {
    let game = lattice_to_efg(l)?;
    let space = explore(
        &game,
        ExploreOptions {
            max_edges: usize::MAX,
        },
    )?;
    verify_isomorphism(l, &space)?;
    Ok(RoundTrip {
        configs: space.len(),
        simple: space.is_simple(),
    })
}

pub fn round_trips(lattices: &[Lattice], exec: Execution) -> Vec<Result<RoundTrip, BridgeError>> {
    exec.map_slice(lattices, round_trip)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BirkhoffFailure {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("filters of the irreducibles are not isomorphic to the lattice")]
    NotIsomorphic,
}

/// `filters(J(l)) ≅ l`.
pub fn birkhoff_round_trip(l: &Lattice, max_elements: usize) -> Result<(), BirkhoffFailure> {
    let rebuilt = l.induced_order().filter_lattice(max_elements)?;
    isomorphism(rebuilt.base(), l.base())
        .map(|_| ())
        .ok_or(BirkhoffFailure::NotIsomorphic)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameFailure {
    #[error(transparent)]
    Efg(#[from] EfgError),
    #[error(transparent)]
    Propp(#[from] ProppFailure),
    #[error("initial configuration is not the unique maximum")]
    InitialNotMaximum,
}

/// Summary of the checks on one game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameReport {
    pub configs: usize,
    pub simple: bool,
    /// Configurations with two or more incoming steps whose shot multiset
    /// was re-derived along sampled paths.
    pub multi_parent_configs: usize,
}

/// Explores `e` and checks that the configuration order is acyclic, has the
/// initial configuration as its unique maximum, is a distributive lattice,
/// and that shot multisets are path independent on `samples` random paths.
pub fn check_game(
    e: &EfgInstance,
    opts: ExploreOptions,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<GameReport, GameFailure> {
    let space = explore(e, opts)?;
    let order = space.space_order()?;
    if order.maximal_elements() != [0] {
        return Err(GameFailure::InitialNotMaximum);
    }
    verify_propp(&space)?;
    let multi_parent_configs = space.check_path_independence(samples, rng)?;
    Ok(GameReport {
        configs: space.len(),
        simple: space.is_simple(),
        multi_parent_configs,
    })
}

pub fn check_games(
    games: &[EfgInstance],
    opts: ExploreOptions,
    seed: u64,
    exec: Execution,
) -> Vec<Result<GameReport, GameFailure>> {
    exec.map_range(games.len(), |i| {
        check_game(&games[i], opts, PATH_SAMPLES, &mut instance_rng(seed, i))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplifyFailure {
    #[error(transparent)]
    Bridge(#[from] BridgeError),
    #[error("simplified game is not simple")]
    NotSimple,
    #[error("simplified space is not isomorphic to the original")]
    NotIsomorphic,
    #[error("simplifying twice changed the space")]
    NotIdempotent,
}

/// Simplifies `e` twice and compares all three configuration orders.
pub fn check_simplify(e: &EfgInstance, opts: ExploreOptions) -> Result<usize, SimplifyFailure> {
    let unbounded = ExploreOptions {
        max_edges: usize::MAX,
    };
    let original = explore(e, opts).map_err(BridgeError::from)?;
    let once = simplify_efg(e, opts)?;
    let once_space = explore(&once.game, unbounded).map_err(BridgeError::from)?;
    if !once_space.is_simple() {
        return Err(SimplifyFailure::NotSimple);
    }
    let twice = simplify_efg(&once.game, unbounded)?;
    let twice_space = explore(&twice.game, unbounded).map_err(BridgeError::from)?;

    let order = |s: &crate::efg::ConfigSpace| s.space_order().map_err(BridgeError::from);
    let (o0, o1, o2) = (order(&original)?, order(&once_space)?, order(&twice_space)?);
    if isomorphism(&o0, &o1).is_none() {
        return Err(SimplifyFailure::NotIsomorphic);
    }
    if isomorphism(&o1, &o2).is_none() {
        return Err(SimplifyFailure::NotIdempotent);
    }
    Ok(original.len())
}

pub fn check_simplifications(
    games: &[EfgInstance],
    opts: ExploreOptions,
    exec: Execution,
) -> Vec<Result<usize, SimplifyFailure>> {
    exec.map_slice(games, |e| check_simplify(e, opts))
}
