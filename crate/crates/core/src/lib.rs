//! Counting integers whose prime factorization has a prescribed exponent
//! shape, with and without distinct primes, together with the matching
//! asymptotic estimates and their constants.
//!
//! ```
//! use shapecount::{count_shape, Mode, PrimeTable, Shape};
//!
//! let table = PrimeTable::build(1000).unwrap();
//! let shape: Shape = "1,3".parse().unwrap();
//! assert_eq!(count_shape(100, &shape, Mode::Pi, &table).unwrap().count, 5);
//! ```

pub mod asymptotics;
pub mod cli;
pub mod constants;
pub mod error;
pub mod exact;
pub mod primes;
pub mod report;
pub mod shapes;

pub use asymptotics::{equivalent_form, estimate_count, landau_main_term, EstimateBreakdown};
pub use constants::{
    annihilating_split, constant_as_product, prime_zeta, series_constant, shape_constant,
    uniqueness_condition, ConstantMethod, SeriesConstant,
};
pub use error::{Error, Result};
pub use exact::{
    count_pi_k, count_shape, count_sigma_k, enumerate_beta, hyperbola_bounds, required_prime_bound,
    BoundsPair, CountResult,
};
pub use primes::{build_table, factorize, prime_count, Factorization, PrimeTable};
pub use report::{ComparisonRow, CSV_HEADER};
pub use shapes::{member, normalize, Mode, Shape, ShapeSignature};
