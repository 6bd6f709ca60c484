pub mod calculus;
pub mod chevalley;
pub mod par;
pub mod ring;
pub mod roots;
pub mod subgroups;
