#pragma once

#include <stdexcept>
#include <string>

namespace esjs {

/// Input data is unusable for the requested operation (empty sample, support
/// violation, malformed CSV row).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative routine failed to converge or produced a degenerate result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace esjs
