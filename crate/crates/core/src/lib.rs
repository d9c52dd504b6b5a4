pub mod crystal;
pub mod kashiwara;
pub mod pairing;
pub mod qalgebra;
pub mod qcoeff;
pub mod report;
pub mod verma;
