#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace hermblock {

struct CertificateItem {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
};

// One named inequality with per-index (or per-norm) margins.
// passed <=> min margin >= -tolerance, where tolerance has already been
// scaled by the input's operator norm (so pass/fail is scale free while
// the margins stay in the input's units).
struct CertificateReport {
    std::string name;
    double tolerance = 0.0;
    bool passed = false;
    std::vector<CertificateItem> items;
    std::string context;

    double min_margin() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& it : items) {
            m = std::min(m, it.margin);
        }
        return m;
    }

    void finalize() {
        passed = items.empty() ? true : min_margin() >= -tolerance;
    }
};

}  // namespace hermblock
