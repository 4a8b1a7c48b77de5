//! Exact finite computations around representation growth: enumerated
//! congruence quotients, word-map fiber counts and zeta special values,
//! polygraph degenerations of Lie structure constants, monomial pushforward
//! densities and point counts of graph varieties.

pub mod charzeta;
pub mod exact;
pub mod liepipe;
pub mod localring;
pub mod modgroup;
pub mod padicpush;
pub mod polygraph;
pub mod report;
pub mod varcount;
pub mod verify;
pub mod wordmap;
