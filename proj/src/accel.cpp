#include "helmspec/accel.hpp"

#include <cmath>

#include "helmspec/errors.hpp"

namespace helmspec {

std::vector<ShanksEntry> shanks_once(std::span<const ShanksEntry> seq) {
    if (seq.size() < 3) fail(ErrorCode::TooShort, "Shanks transform needs at least three terms");
    std::vector<ShanksEntry> out;
    out.reserve(seq.size() - 2);
    for (std::size_t j = 0; j + 2 < seq.size(); ++j) {
        const double s0 = seq[j].value, s1 = seq[j + 1].value, s2 = seq[j + 2].value;
        const double d1 = s2 - s1;
        const double d2 = (s2 - s1) - (s1 - s0);
        ShanksEntry e{s2, seq[j].valid && seq[j + 1].valid && seq[j + 2].valid};
        if (std::abs(d2) < 1e-14 * std::abs(s1) || d2 == 0.0) {
            e.valid = false;
        } else {
            e.value = s2 - d1 * d1 / d2;
            if (!std::isfinite(e.value)) {
                e.value = s2;
                e.valid = false;
            }
        }
        out.push_back(e);
    }
    return out;
}

std::vector<ShanksEntry> shanks_once(std::span<const double> seq) {
    std::vector<ShanksEntry> in;
    in.reserve(seq.size());
    for (double v : seq) in.push_back({v, true});
    return shanks_once(std::span<const ShanksEntry>(in));
}

ShanksTable shanks_table(std::span<const double> seq, int max_levels) {
    if (seq.size() < 3) fail(ErrorCode::TooShort, "Shanks table needs at least three terms");
    ShanksTable t;
    t.sequence.assign(seq.begin(), seq.end());
    std::vector<ShanksEntry> cur;
    for (double v : seq) cur.push_back({v, true});
    for (int k = 0; k < max_levels && cur.size() >= 3; ++k) {
        cur = shanks_once(std::span<const ShanksEntry>(cur));
        t.levels.push_back(cur);
    }
    return t;
}

double ShanksTable::best_estimate() const {
    for (auto lvl = levels.rbegin(); lvl != levels.rend(); ++lvl)
        for (auto e = lvl->rbegin(); e != lvl->rend(); ++e)
            if (e->valid) return e->value;
    return sequence.empty() ? 0.0 : sequence.back();
}

int ShanksTable::invalid_count() const {
    int n = 0;
    for (const auto& lvl : levels)
        for (const auto& e : lvl) n += e.valid ? 0 : 1;
    return n;
}

}  // namespace helmspec
