#pragma once

#include <span>
#include <vector>

namespace helmspec {

// A transformed entry. Invalid entries (vanishing second difference) keep the
// fallback value s_{j+2}, i.e. the transform without its correction term.
struct ShanksEntry {
    double value = 0.0;
    bool valid = true;
};

std::vector<ShanksEntry> shanks_once(std::span<const double> seq);
std::vector<ShanksEntry> shanks_once(std::span<const ShanksEntry> seq);

struct ShanksTable {
    std::vector<double> sequence;
    std::vector<std::vector<ShanksEntry>> levels;  // levels[k-1] is s^(k)

    // Deepest valid entry (last entry of the deepest level that has one).
    double best_estimate() const;
    int invalid_count() const;
};

ShanksTable shanks_table(std::span<const double> seq, int max_levels);

}  // namespace helmspec
