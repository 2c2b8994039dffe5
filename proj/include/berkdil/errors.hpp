#pragma once

#include <stdexcept>
#include <string>

namespace berkdil {

/** Bad or inconsistent user input.  The CLI maps these to exit code 2. */
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadInput : ValidationError {
    // `field` names the offending input field (dotted path into the JSON).
    explicit BadInput(const std::string& field, const std::string& what)
        : ValidationError(field + ": " + what), field(field) {}
    std::string field;
};

struct NoRootExists : ValidationError { using ValidationError::ValidationError; };
struct DegenerateFixedPoints : ValidationError { using ValidationError::ValidationError; };
struct NotClusteredInPairs : ValidationError { using ValidationError::ValidationError; };
struct TooFewPoints : ValidationError { using ValidationError::ValidationError; };
struct SizeMismatch : ValidationError { using ValidationError::ValidationError; };
struct NotSeparated : ValidationError { using ValidationError::ValidationError; };
struct OptimalityNotAsserted : ValidationError { using ValidationError::ValidationError; };
struct NoInfinityInS : ValidationError { using ValidationError::ValidationError; };
struct NoInfinityLeaf : ValidationError { using ValidationError::ValidationError; };
struct LeafDistanceInfinite : ValidationError { using ValidationError::ValidationError; };
struct PoleHit : ValidationError { using ValidationError::ValidationError; };
struct HypothesesUnmet : ValidationError { using ValidationError::ValidationError; };

/** Working precision cannot decide the requested quantity.  Exit code 3. */
struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Iteration cap reached without certified stabilization.  Exit code 3. */
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace berkdil
