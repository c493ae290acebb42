//! Monte-Carlo estimators (stub).
