//! Experiment harness (filled in below).
