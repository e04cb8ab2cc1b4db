#pragma once

#include <stdexcept>
#include <string>

namespace pdegen {

/// Configuration or precondition violation (bad grid, bad parameter range).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A solver produced an inadmissible state (negative density/pressure/height,
/// NaN/Inf). The offending sample is rejected, never stored.
struct SampleRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// I/O failure (missing file, truncated file, HDF5 error).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pdegen
