#pragma once

#include <string>
#include <vector>

namespace helmspec {

struct SelfTestResult {
    std::string name;
    bool passed;
    std::string detail;
};

// Closed-form sanity cases across all modules.
std::vector<SelfTestResult> run_selftest();

}  // namespace helmspec
