//! hullforge: ideal (convex-hull) formulations for convex epigraphs with
//! indicator variables under combinatorial constraints.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`combinatorics`] represents indicator constraint sets `Q`, enumerates
//!   them at desk scale, builds the conflict graph and derives exact facet
//!   families for `conv(Q \ {0})`.
//! - [`funcs`] is the one-dimensional convex function algebra (values,
//!   derivatives, conjugates, closed perspectives, supporting-hyperplane cuts).
//! - [`hulls`] assembles relaxation models realizing the hull descriptions:
//!   the connected case, the disjunctive extended formulation for
//!   disconnected conflict graphs, the separable case and the facet-block
//!   extended formulation.
//! - [`solver`] is a desk-scale cutting-plane solver: bounded-variable
//!   revised simplex plus Kelley outer approximation with perspective
//!   gradient cuts and eigenvector cuts for PSD blocks.
//! - [`oracle`] minimizes linear objectives over the mixed-integer set
//!   exactly by enumeration and certifies hull tightness.
//! - [`sdpreg`] and [`logit`] are the least-squares and logistic-regression
//!   experiment pipelines built on top of the above.

pub mod combinatorics;
pub mod funcs;
pub mod hulls;
pub mod logit;
pub mod oracle;
pub mod rational;
pub mod rng;
pub mod sdpreg;
pub mod solver;
