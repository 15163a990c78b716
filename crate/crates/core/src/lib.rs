pub mod certificate;
pub mod charpoly;
pub mod checks;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod qstruct;
pub mod rea;
pub mod ring;
pub mod tensor;
