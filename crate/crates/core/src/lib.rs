pub mod algebra;
pub mod cli;
pub mod determinant;
pub mod error;
pub mod haar;
pub mod modular;
pub mod moments;
pub mod n2;
pub mod painleve;
pub mod roots;
pub mod special;
