#include "raretail/trend.hpp"

#include <algorithm>
#include <cmath>

namespace raretail {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "Consistent";
        case Verdict::Inconsistent: return "Inconsistent";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

void classify_trend(TrendReport& report, const TrendOptions& opts) {
    report.last_k = opts.last_k;
    const int n = static_cast<int>(report.ratios.size());
    if (n < opts.last_k) {
        report.verdict = Verdict::Inconclusive;
        report.note = report.note.empty() ? "grid too short" : report.note;
        return;
    }
    const double scale = report.target == 0.0 ? 1.0 : std::abs(report.target);
    auto dev = [&](int i) { return std::abs(report.ratios[i] - report.target) / scale; };
    auto slack = [&](int i) {
        if (report.stderrs.empty()) return 0.0;
        return opts.z * report.stderrs[i] / scale;
    };

    double maxdev = 0.0;
    bool confident_fail = false, all_pass = true, monotone = true;
    for (int i = n - opts.last_k; i < n; ++i) {
        const double d = dev(i);
        maxdev = std::max(maxdev, d);
        if (d - slack(i) > opts.tol) confident_fail = true;
        if (d > opts.tol || slack(i) > opts.tol) all_pass = false;
        if (opts.require_monotone && i > n - opts.last_k) {
            if (d > dev(i - 1) + slack(i) + slack(i - 1) + 1e-12) monotone = false;
        }
    }
    report.max_dev_last_k = maxdev;
    if (confident_fail)
        report.verdict = Verdict::Inconsistent;
    else if (all_pass && monotone)
        report.verdict = Verdict::Consistent;
    else
        report.verdict = Verdict::Inconclusive;
}

void classify_bounded(TrendReport& report, int last_k, double spread_tol) {
    report.last_k = last_k;
    const int n = static_cast<int>(report.ratios.size());
    if (n < last_k) {
        report.verdict = Verdict::Inconclusive;
        report.note = report.note.empty() ? "grid too short" : report.note;
        return;
    }
    double lo = report.ratios[n - last_k], hi = lo;
    for (int i = n - last_k; i < n; ++i) {
        lo = std::min(lo, report.ratios[i]);
        hi = std::max(hi, report.ratios[i]);
    }
    report.max_dev_last_k = lo > 0.0 ? hi / lo - 1.0 : std::numeric_limits<double>::infinity();
    report.verdict =
        (lo > 0.0 && hi / lo - 1.0 <= spread_tol) ? Verdict::Consistent : Verdict::Inconsistent;
}

}  // namespace raretail
