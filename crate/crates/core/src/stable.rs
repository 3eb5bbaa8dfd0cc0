//! Stable-path simulation (filled in below).
