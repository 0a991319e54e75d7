#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qnsem/error.hpp"
#include "qnsem/json_io.hpp"

namespace qnsem {

/// One expected/computed comparison. Numeric checks carry |expected -
/// computed|; structural ones carry a count of mismatches.
struct DemoCheck {
    std::string name;
    std::string expected;
    std::string computed;
    double residual = 0.0;
    double threshold = 0.0;
    bool ok() const { return residual <= threshold; }
};

struct DemoSection {
    std::string name;
    std::string claim;
    std::vector<DemoCheck> checks;
    bool ok() const;
};

struct DemoReport {
    double tol = kDefaultTol;
    std::uint64_t seed = 0;
    std::vector<DemoSection> sections;
    bool ok() const;
    std::size_t failed_checks() const;
};

struct DemoOptions {
    double tol = kDefaultTol;
    std::uint64_t seed = 0;
    std::size_t rexpansion_samples = 10000;
    std::size_t sweep_trials = 1000;  // per dimension
};

/// Reproduces every worked example and runs the seeded property sweeps.
DemoReport run_paper_demo(const DemoOptions& options = {});

Json to_json(const DemoReport& r);
std::string to_text(const DemoReport& r);

}  // namespace qnsem
