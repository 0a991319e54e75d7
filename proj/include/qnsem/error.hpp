#pragma once

#include <stdexcept>
#include <string>

namespace qnsem {

// Malformed input or a violated structural invariant. The CLI maps this to
// exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Default tolerance for approximate equality; QNSEM_TOL overrides it in the CLI.
inline constexpr double kDefaultTol = 1e-9;

}  // namespace qnsem
