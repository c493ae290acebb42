//! SL(2,R) representations (stub).
