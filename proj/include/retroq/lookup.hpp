#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace retroq {

/// Alice's sign table eps_j^(l) in {+1, -1}, row j = outcome, column l = axis.
/// Row j answers every possible axis query for outcome j.
struct LookupTable {
    int num_outcomes = 0;  // K
    int num_axes = 0;      // m
    std::vector<int> signs;  // row major, size K * m, entries +1 or -1

    LookupTable() = default;

    LookupTable(int outcomes, int axes, std::vector<int> s)
        : num_outcomes(outcomes), num_axes(axes), signs(std::move(s)) {
        if (outcomes < 1 || axes < 1)
            throw std::invalid_argument("LookupTable: need at least one outcome and one axis");
        if (signs.size() != static_cast<std::size_t>(outcomes) * axes)
            throw std::invalid_argument("LookupTable: sign count must equal K * m");
        for (int v : signs)
            if (v != 1 && v != -1)
                throw std::invalid_argument("LookupTable: signs must be +1 or -1");
    }

    int sign(int j, int l) const {
        if (j < 0 || j >= num_outcomes)
            throw std::out_of_range("LookupTable: outcome index out of range");
        if (l < 0 || l >= num_axes)
            throw std::out_of_range("LookupTable: axis index out of range");
        return signs[static_cast<std::size_t>(j) * num_axes + l];
    }

    /// Outcome indices j with eps_j^(l) = eta; the partition S_eta(n_l).
    std::vector<int> support(int l, int eta) const {
        if (eta != 1 && eta != -1)
            throw std::invalid_argument("LookupTable: eta must be +1 or -1");
        std::vector<int> out;
        for (int j = 0; j < num_outcomes; ++j)
            if (sign(j, l) == eta) out.push_back(j);
        return out;
    }

    /// S_{+1}(n_l) and S_{-1}(n_l) partition {0..K-1} by construction; this
    /// confirms the set view and the sign view agree.
    bool partitions_consistent() const {
        for (int l = 0; l < num_axes; ++l) {
            const auto plus = support(l, 1);
            const auto minus = support(l, -1);
            if (plus.size() + minus.size() != static_cast<std::size_t>(num_outcomes)) return false;
        }
        return true;
    }
};

/// Pure retrodiction: Alice's answer for axis l after observing outcome j.
inline int retrodict(const LookupTable& table, int j, int l) { return table.sign(j, l); }

}  // namespace retroq
