//! Hosts the `acceptance` test target. Kept in its own package so it runs
//! after every other test binary in the workspace.
