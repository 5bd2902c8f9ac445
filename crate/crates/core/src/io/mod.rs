//! Reading and writing the toolkit's text formats: sequence files, FASTA
//! with residue-class encoding, TOML run and model configurations, and
//! CSV/plain-text result tables.

mod config;
mod fasta;
mod sequences;
mod tables;

pub use config::{ModelFile, RunConfig};
pub use fasta::{encode_fasta, parse_fasta, FastaRecord, ResidueClasses};
pub use sequences::{format_sequences, parse_sequences, read_sequences, write_sequences};
pub use tables::{
    coords_csv, matrix_csv, partition_csv, rejection_csv, sweep_csv, text_tables,
};
