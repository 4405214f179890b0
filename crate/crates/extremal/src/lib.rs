//! Graded Lie algebras generated by extremal elements over a simple graph.
//!
//! The engine is generic over the scalar type through [`field::Field`]; the
//! two supported instantiations are exact rationals and odd prime fields
//! with a runtime modulus. The aliases below pick the concrete engines.

pub mod chevalley;
pub mod commands;
pub mod dynkin;
pub mod field;
pub mod generic;
pub mod graph;
pub mod lf;
pub mod linalg;
pub mod sandwich;
pub mod word;

pub use field::{Field, FieldSpec, Fp};
pub use graph::SimpleGraph;
pub use num_rational::BigRational;

pub type RationalSandwich = sandwich::SandwichAlgebra<BigRational>;
pub type PrimeSandwich = sandwich::SandwichAlgebra<Fp>;
pub type RationalChevalley = chevalley::ChevalleyAlgebra<BigRational>;
pub type PrimeChevalley = chevalley::ChevalleyAlgebra<Fp>;
pub type RationalParameters = lf::ParameterSet<BigRational>;
pub type PrimeParameters = lf::ParameterSet<Fp>;
