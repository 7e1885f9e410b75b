pub mod coeff;
pub mod corpus;
pub mod oracle;
pub mod parser;
pub mod reduce;
pub mod render;
pub mod scalar;
pub mod tensor;
pub mod wigner;
