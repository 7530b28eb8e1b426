//! Incomplete-Gamma series solutions of the confluent Heun equations.
//!
//! A solution `u` of one of the four confluent Heun equations
//!
//! ```text
//! P(z) u'' + B(z) u' + (αz − q) u = 0
//! ```
//!
//! is obtained from the Frobenius series of the weighted derivative
//! `v = e^{Λ(z)} u'`, integrated term by term into upper incomplete Gamma
//! functions `Γ(a; t)`.  The crate is organised in layers:
//!
//! - [`numerics`]: complex special functions (Γ, incomplete Γ, ₁F₁),
//!   polynomial and rational-function arithmetic, polynomial roots, quadrature.
//! - [`equations`]: the four confluent equations, the general Heun equation,
//!   derivation of the equation satisfied by `v`, indicial exponents and the
//!   closed-form special cases.
//! - [`recurrence`]: the eleven expansion schemes and their multi-term
//!   coefficient recurrences, exponents, reductions and two-term closed forms.
//! - [`expansion`]: the assembled, evaluable Gamma series.
//! - [`termination`]: right-hand termination (finite-sum solutions).
//! - [`oracle`]: independent checks (Runge–Kutta integration, power-series
//!   residuals, series-vs-integrator comparison).
//!
//! All math is generic over the real type through [`Real`]; `f64` aliases are
//! provided at the crate root.
//!
//! ```
//! use heun_gamma::{ConfluentHeun64, Complex64, SchemeId, RecurrenceScheme};
//! use heun_gamma::expansion::assemble;
//!
//! let c = |x: f64| Complex64::new(x, 0.0);
//! let eq = ConfluentHeun64::sche(c(0.3), c(0.4), c(0.5), c(0.6), c(0.2));
//! let scheme = RecurrenceScheme::new(SchemeId::ScheIOrigin);
//! let mut series = assemble(&eq, &scheme, c(0.0), 40).unwrap();
//! series.fix_constant().unwrap();
//! let val = series.evaluate(c(0.1)).unwrap();
//! assert!(val.u.norm().is_finite());
//! ```

pub mod equations;
pub mod error;
pub mod expansion;
pub mod numerics;
pub mod oracle;
pub mod recurrence;
pub mod termination;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use numerics::Real;

pub use equations::{ConfluentHeun, GeneralHeun, RationalOperator, Variant, WeightSpec};
pub use expansion::GammaSeries;
pub use numerics::{Polynomial, RationalFunction};
pub use recurrence::{CoefficientSequence, RecurrenceRelation, RecurrenceScheme, SchemeId};

pub type Complex64 = Complex<f64>;
pub type Complex32 = Complex<f32>;
pub type Polynomial64 = Polynomial<f64>;
pub type ConfluentHeun64 = ConfluentHeun<f64>;
pub type GammaSeries64 = GammaSeries<f64>;
pub type RecurrenceScheme64 = RecurrenceScheme<f64>;
