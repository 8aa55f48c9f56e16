#include "raretail/counting.hpp"

#include <algorithm>
#include <cmath>

namespace raretail {

namespace {
constexpr long kArrivalGuard = 10'000'000;
}

CountingProcess CountingProcess::renewal(const ScalarLaw& inter, std::string label) {
    CountingProcess cp;
    cp.law_ = [inter](long) { return inter; };
    cp.label_ = label.empty() ? "renewal " + inter.describe() : std::move(label);
    cp.iid_ = true;
    return cp;
}

CountingProcess CountingProcess::poisson(double rate) {
    CountingProcess cp = renewal(ScalarLaw::exponential(rate), "poisson");
    cp.analytic_lambda_ = [rate](double t) { return rate * t; };
    return cp;
}

CountingProcess CountingProcess::deterministic(double spacing) {
    CountingProcess cp = renewal(ScalarLaw::degenerate(spacing), "deterministic");
    cp.analytic_lambda_ = [spacing](double t) { return std::floor(t / spacing); };
    return cp;
}

CountingProcess CountingProcess::cycling(std::vector<ScalarLaw> pattern, std::string label) {
    if (pattern.empty()) throw std::invalid_argument("cycling: empty pattern");
    CountingProcess cp;
    const auto laws = std::make_shared<std::vector<ScalarLaw>>(std::move(pattern));
    cp.law_ = [laws](long i) { return (*laws)[(i - 1) % laws->size()]; };
    cp.label_ = label.empty() ? "cycling" : std::move(label);
    cp.iid_ = laws->size() == 1;
    return cp;
}

CountingProcess CountingProcess::delayed() const {
    CountingProcess cp;
    const LawFn parent = law_;
    cp.law_ = [parent](long i) { return parent(i + 1); };
    cp.label_ = label_ + "*";
    cp.iid_ = iid_;
    if (iid_) cp.analytic_lambda_ = analytic_lambda_;  // same law sequence when iid
    return cp;
}

CountingSample simulate_counting(const CountingProcess& cp, double t, RngStream& rng) {
    CountingSample out;
    if (t < 0.0) throw std::invalid_argument("simulate_counting: need t >= 0");
    double clock = 0.0;
    for (long i = 1;; ++i) {
        clock += cp.law(i).sample(rng);
        if (clock > t) break;
        out.epochs.push_back(clock);
        if (++out.count >= kArrivalGuard)
            throw ArrivalOverflowError("simulate_counting: arrival guard exceeded");
    }
    return out;
}

long simulate_count_capped(const CountingProcess& cp, double t, RngStream& rng, long cap) {
    double clock = 0.0;
    long n = 0;
    for (long i = 1; n < cap; ++i) {
        clock += cp.law(i).sample(rng);
        if (clock > t) break;
        ++n;
    }
    return n;
}

MeanEstimate2 lambda_mean(const CountingProcess& cp, double t, long budget,
                          const EngineConfig& cfg) {
    MeanEstimate2 out;
    if (cp.has_analytic_lambda()) {
        out.value = cp.analytic_lambda(t);
        out.analytic = true;
        return out;
    }
    out.n = std::max<long>(budget, 2);
    double sum = 0.0, sumsq = 0.0;
    const std::uint64_t base = compose_id(stream_id(cfg.module_tag, 0), 0x1A3BDAULL);
    for (long i = 0; i < out.n; ++i) {
        RngStream rng(cfg.seed, compose_id(base, static_cast<std::uint64_t>(i)));
        const double n_t = static_cast<double>(simulate_count_capped(cp, t, rng, kArrivalGuard));
        sum += n_t;
        sumsq += n_t * n_t;
    }
    out.value = sum / static_cast<double>(out.n);
    out.std_error = std::sqrt(std::max(0.0, sumsq / out.n - out.value * out.value) /
                              static_cast<double>(out.n));
    return out;
}

LlnReport check_lln(const CountingProcess& cp, const std::vector<double>& t_grid,
                    std::vector<double> deltas, long budget, const EngineConfig& cfg) {
    if (deltas.empty()) deltas = {0.1, 0.05};
    LlnReport out;
    out.deltas = deltas;
    const long n = std::max<long>(budget, 100);
    for (double delta : deltas) {
        TrendReport r;
        r.target = 0.0;
        for (double t : t_grid) {
            const MeanEstimate2 lam = lambda_mean(cp, t, std::min<long>(n, 20'000), cfg);
            if (lam.value <= 0.0) throw std::invalid_argument("check_lln: lambda(t) = 0 on grid");
            long hits = 0;
            const std::uint64_t base =
                compose_id(stream_id(cfg.module_tag, 1), 0x11BBULL, static_cast<std::uint64_t>(t * 64));
            for (long i = 0; i < n; ++i) {
                RngStream rng(cfg.seed, compose_id(base, static_cast<std::uint64_t>(i)));
                const double n_t =
                    static_cast<double>(simulate_count_capped(cp, t, rng, kArrivalGuard));
                if (std::abs(n_t / lam.value - 1.0) > delta) ++hits;
            }
            const double p = static_cast<double>(hits) / static_cast<double>(n);
            r.grid.push_back(t);
            r.ratios.push_back(p);
            r.stderrs.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(n)));
        }
        // toward zero: non-increasing within CI slack and clearly below the start
        bool decreasing = true;
        for (std::size_t i = 1; i < r.ratios.size(); ++i) {
            const double slack = 1.96 * (r.stderrs[i] + r.stderrs[i - 1]);
            if (r.ratios[i] > r.ratios[i - 1] + slack + 1e-12) decreasing = false;
        }
        const bool shrunk =
            !r.ratios.empty() && r.ratios.back() <= 0.5 * std::max(r.ratios.front(), 1e-12) +
            1.96 * r.stderrs.back();
        r.verdict = decreasing && shrunk ? Verdict::Consistent : Verdict::Inconsistent;
        r.max_dev_last_k = r.ratios.empty() ? 0.0 : r.ratios.back();
        out.per_delta.push_back(std::move(r));
    }
    out.verdict = Verdict::Consistent;
    for (const auto& r : out.per_delta)
        if (r.verdict != Verdict::Consistent) out.verdict = Verdict::Inconsistent;
    return out;
}

namespace {

// exact weighted Poisson tail: sum_{n > m} (1+eps)^n e^{-lam} lam^n / n!
double poisson_weighted_tail(double lam, double eps, long m) {
    const double l1 = std::log1p(eps);
    double sum = 0.0;
    // log of term at n
    auto log_term = [&](double n) {
        return -lam + n * std::log(lam) - std::lgamma(n + 1.0) + n * l1;
    };
    const double n_peak = lam * (1.0 + eps);
    const long n_hi = static_cast<long>(std::ceil(std::max(n_peak * 3.0 + 50.0,
                                                           static_cast<double>(m) + 50.0)));
    for (long n = m + 1; n <= n_hi; ++n) {
        const double lt = log_term(static_cast<double>(n));
        if (lt > 700.0) return std::numeric_limits<double>::infinity();
        sum += std::exp(lt);
    }
    // geometric remainder: term ratio lam(1+eps)/n < 1 past n_hi
    const double rho = lam * (1.0 + eps) / static_cast<double>(n_hi + 1);
    if (rho < 1.0) sum += std::exp(log_term(static_cast<double>(n_hi + 1))) / (1.0 - rho);
    return sum;
}

}  // namespace

LightTailResult check_light_tail(const CountingProcess& cp, double t, double delta, double eps,
                                 long n_cap, long budget, const EngineConfig& cfg) {
    if (delta <= 0.0 || eps <= 0.0)
        throw std::invalid_argument("check_light_tail: need delta > 0, eps > 0");
    LightTailResult out;
    const MeanEstimate2 lam = lambda_mean(cp, t, std::min<long>(budget, 20'000), cfg);
    const long m = static_cast<long>(std::floor((1.0 + delta) * lam.value));
    out.cutoff = m;
    if (cp.iid() && cp.law(1).family() == Family::Exponential) {
        out.analytic = true;
        out.value = poisson_weighted_tail(lam.value, eps, m);
        return out;
    }
    if (cp.iid() && cp.law(1).family() == Family::Degenerate) {
        // point mass at floor(t / spacing) <= m, so the tail sum vanishes
        out.analytic = true;
        const long n_t = static_cast<long>(std::floor(t / cp.law(1).param(0)));
        out.value = n_t > m ? std::pow(1.0 + eps, n_t) : 0.0;
        return out;
    }
    // Monte Carlo histogram up to n_cap
    std::vector<double> hist(static_cast<std::size_t>(n_cap) + 1, 0.0);
    const long n = std::max<long>(budget, 100);
    const std::uint64_t base =
        compose_id(stream_id(cfg.module_tag, 2), 0x117ULL, static_cast<std::uint64_t>(t * 64));
    long overflow = 0;
    for (long i = 0; i < n; ++i) {
        RngStream rng(cfg.seed, compose_id(base, static_cast<std::uint64_t>(i)));
        const long c = simulate_count_capped(cp, t, rng, n_cap);
        if (c >= n_cap)
            ++overflow;
        else
            hist[static_cast<std::size_t>(c)] += 1.0;
    }
    if (overflow > 0) out.ok = false;  // histogram cannot resolve the weighted tail
    double sum = 0.0;
    for (long k = m + 1; k < n_cap; ++k)
        sum += std::pow(1.0 + eps, static_cast<double>(k)) * hist[static_cast<std::size_t>(k)] /
               static_cast<double>(n);
    out.value = sum;
    // ratio-test remainder from the top of the histogram
    double last = 0.0, prev = 0.0;
    for (long k = n_cap - 1; k > m; --k) {
        const double term = std::pow(1.0 + eps, static_cast<double>(k)) *
                            hist[static_cast<std::size_t>(k)] / static_cast<double>(n);
        if (term > 0.0) {
            if (last == 0.0)
                last = term;
            else if (prev == 0.0)
                prev = term;
            else
                break;
        }
    }
    if (last > 0.0 && prev > last) {
        const double rho = last / prev;
        if (rho < 1.0) out.remainder = last * rho / (1.0 - rho);
    }
    return out;
}

TrendReport light_tail_trend(const CountingProcess& cp, const std::vector<double>& t_grid,
                             double delta, double eps, long n_cap, long budget,
                             const EngineConfig& cfg) {
    TrendReport r;
    r.target = 0.0;
    bool all_ok = true;
    for (double t : t_grid) {
        const LightTailResult lt = check_light_tail(cp, t, delta, eps, n_cap, budget, cfg);
        all_ok = all_ok && lt.ok;
        r.grid.push_back(t);
        r.ratios.push_back(lt.value);
    }
    if (!all_ok) {
        r.verdict = Verdict::Inconclusive;
        r.note = "histogram underflow";
        return r;
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < r.ratios.size(); ++i)
        if (r.ratios[i] > r.ratios[i - 1] * 1.05 + 1e-12) decreasing = false;
    const bool shrunk = !r.ratios.empty() &&
                        r.ratios.back() <= 0.5 * std::max(r.ratios.front(), 1e-300);
    r.verdict = decreasing && shrunk ? Verdict::Consistent : Verdict::Inconsistent;
    if (!r.ratios.empty() && r.ratios.back() == 0.0 && r.ratios.front() == 0.0)
        r.verdict = Verdict::Consistent;  // identically zero along the grid
    r.max_dev_last_k = r.ratios.empty() ? 0.0 : r.ratios.back();
    return r;
}

}  // namespace raretail
