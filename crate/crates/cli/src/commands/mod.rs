pub mod bench;
pub mod gen_data;
pub mod mingling;
pub mod plot;
pub mod sample;
pub mod train;
pub mod variance;
