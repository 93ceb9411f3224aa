#pragma once

#include <stdexcept>
#include <string>

namespace driftmon {

// Invalid input data (malformed CSV, bad config values, degenerate datasets).
// The CLI maps this to exit code 2; contract violations stay std::invalid_argument.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace driftmon
