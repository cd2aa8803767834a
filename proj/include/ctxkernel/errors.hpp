#pragma once

#include <stdexcept>
#include <string>

namespace ctxk {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// simcore
struct invalid_circuit_error : error {
    using error::error;
};
struct invalid_observable_error : error {
    using error::error;
};

// harness / witnesses
struct undefined_estimate_error : error {
    using error::error;
};
struct incomplete_design_error : error {
    using error::error;
};
struct invalid_plan_error : error {
    using error::error;
};

// infostats
struct invalid_query_error : error {
    using error::error;
};
struct undefined_test_error : error {
    using error::error;
};
struct degenerate_stratum_error : error {
    using error::error;
};

// fits
struct rank_deficient_error : error {
    using error::error;
};

// eraser
struct undefined_distinguishability_error : error {
    using error::error;
};

} // namespace ctxk
