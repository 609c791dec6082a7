#pragma once

#include <stdexcept>
#include <string>

namespace equifair {

// Error taxonomy mirrors the CLI exit codes: validation/schema (2),
// degenerate data (3), unseen modality (4), I/O (5).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegeneracyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnknownModalityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace equifair
