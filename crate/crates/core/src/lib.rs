pub mod numkit;
pub mod dfao;
pub mod factbuild;
pub mod witness;
pub mod cli;
