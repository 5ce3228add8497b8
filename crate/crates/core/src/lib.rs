//! Combinatorial decision engine for generic global rigidity of periodic
//! (fixed-lattice) bar-joint frameworks in the plane, driven by Γ-labeled
//! quotient graphs with gains in Z^k for k ∈ {0, 1, 2}.

pub mod blocks;
pub mod bruteforce;
pub mod doc;
pub mod gaingraph;
pub mod oracle;
pub mod sparsity;
pub mod verdict;
