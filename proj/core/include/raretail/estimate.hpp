#pragma once

namespace raretail {

enum class Method { Crude, Splitting, Analytic };

const char* to_string(Method m);

// A probability estimate with its uncertainty. zero_hit marks "nothing
// observed": the value is 0 and ci_hi carries the rule-of-three bound, so
// downstream ratios can tell measured-small from unmeasured.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_effective = 0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    Method method = Method::Crude;
    bool zero_hit = false;
};

Estimate analytic_estimate(double value);

}  // namespace raretail
