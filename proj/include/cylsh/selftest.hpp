// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cylsh {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      ///< measured quantity
    double threshold = 0.0;  ///< pass when value <= threshold
};

/// Quick invariant suite: frame tightness, matched adjoints, gradient
/// against finite differences and Bregman nonnegativity on small grids.
std::vector<CheckResult> run_selftest(std::uint64_t seed = 1);

}  // namespace cylsh
