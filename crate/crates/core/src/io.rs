//! Serialization formats (filled in below).
