//! Strategy registry (filled in below).
