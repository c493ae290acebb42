//! Pressure and Manhattan curves (stub).
