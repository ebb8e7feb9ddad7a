#pragma once

#include <stdexcept>
#include <string>

namespace ecomplex {

/// Bad configuration or usage. The CLI maps this to exit code 1.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or degenerate data: violated preconditions, empty samples,
/// unparseable inputs past the error budget. CLI exit code 2.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ecomplex
