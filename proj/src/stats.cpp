#include "canarypack/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "canarypack/errors.hpp"

namespace canarypack {

namespace {

double log_binomial_pmf(int B, int i, double log_p, double log_q) {
    return std::lgamma(static_cast<double>(B) + 1.0) -
           std::lgamma(static_cast<double>(i) + 1.0) -
           std::lgamma(static_cast<double>(B - i) + 1.0) +
           static_cast<double>(i) * log_p + static_cast<double>(B - i) * log_q;
}

std::string trim_trailing_zeros(std::string digits) {
    if (digits.find('.') == std::string::npos) return digits;
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    if (!digits.empty() && digits.back() == '.') digits.pop_back();
    return digits;
}

std::string fixed_digits(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

} // namespace

void validate(const FprQuery& q) {
    if (q.B < 1) throw ConfigError("B: must be at least 1");
    if (q.K < 2) throw ConfigError("K: must be at least 2");
    if (q.tau < 0 || q.tau > q.B) throw ConfigError("tau: must lie in 0..B");
}

double binomial_tail(const FprQuery& q) {
    validate(q);
    if (q.tau == 0) return 1.0;

    const double log_p = -std::log(static_cast<double>(q.K));
    const double log_q = std::log1p(-1.0 / static_cast<double>(q.K));

    std::vector<double> log_terms;
    log_terms.reserve(static_cast<std::size_t>(q.B - q.tau + 1));
    for (int i = q.tau; i <= q.B; ++i)
        log_terms.push_back(log_binomial_pmf(q.B, i, log_p, log_q));

    const double log_max = *std::max_element(log_terms.begin(), log_terms.end());
    std::sort(log_terms.begin(), log_terms.end());
    double scaled_sum = 0.0;
    for (double t : log_terms) scaled_sum += std::exp(t - log_max);

    return std::min(1.0, std::exp(log_max) * scaled_sum);
}

double kl_bernoulli(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("kl_bernoulli: x must lie in [0,1]");
    if (!(y > 0.0 && y < 1.0)) throw ConfigError("kl_bernoulli: y must lie strictly in (0,1)");
    double d = 0.0;
    if (x > 0.0) d += x * std::log(x / y);
    if (x < 1.0) d += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
    return d;
}

double chernoff_bound(const FprQuery& q) {
    validate(q);
    // Valid domain: tau >= B/K, i.e. tau*K >= B in exact integer arithmetic.
    if (static_cast<long long>(q.tau) * q.K < q.B)
        throw ConfigError("chernoff_bound: bound valid only for tau >= B/K");
    const double divergence =
        kl_bernoulli(static_cast<double>(q.tau) / static_cast<double>(q.B),
                     1.0 / static_cast<double>(q.K));
    const double bound = std::exp(-static_cast<double>(q.B) * divergence);
    return std::clamp(bound, 0.0, 1.0);
}

int min_backdoors_for_fpr(int K, double target_fpr) {
    if (K < 2) throw ConfigError("K: must be at least 2");
    if (!(target_fpr > 0.0 && target_fpr < 1.0))
        throw ConfigError("target_fpr: must lie strictly in (0,1)");

    // K^-b <= target_fpr, checked as target_fpr * K^b >= 1 without forming K^-b.
    auto reaches = [&](int b) {
        double acc = target_fpr;
        for (int j = 0; j < b; ++j) {
            acc *= static_cast<double>(K);
            if (acc >= 1.0) return true;
        }
        return acc >= 1.0;
    };

    int b = std::max(1, static_cast<int>(std::ceil(-std::log(target_fpr) /
                                                   std::log(static_cast<double>(K)))));
    while (!reaches(b)) ++b;
    while (b > 1 && reaches(b - 1)) --b;
    return b;
}

std::vector<FprRow> fpr_table(int B, int K) {
    validate(FprQuery{B, K, 0});
    std::vector<FprRow> rows;
    rows.reserve(static_cast<std::size_t>(B) + 1);
    for (int tau = 0; tau <= B; ++tau) {
        FprRow row;
        row.tau = tau;
        row.exact = binomial_tail(FprQuery{B, K, tau});
        if (static_cast<long long>(tau) * K >= B)
            row.bound = chernoff_bound(FprQuery{B, K, tau});
        rows.push_back(row);
    }
    return rows;
}

std::string format_probability(double p) {
    if (!(p >= 0.0)) return "nan";
    p = std::min(p, 1.0);
    if (p == 0.0) return "0";

    if (p >= 1e-4) {
        const double x = p * 100.0;
        // Bare form for exact powers of ten: 100%, 10%, 1%, 0.1%, 0.01%.
        for (int e = 2; e >= -2; --e) {
            const double mark = std::pow(10.0, e);
            if (std::abs(x - mark) <= 1e-9 * mark)
                return (e >= 0 ? fixed_digits(mark, 0) : fixed_digits(mark, -e)) + "%";
        }
        const int decimals = 2 - static_cast<int>(std::floor(std::log10(x)));
        return fixed_digits(x, std::max(decimals, 0)) + "%";
    }

    int exponent = static_cast<int>(std::floor(std::log10(p)));
    double mantissa = p / std::pow(10.0, exponent);
    std::string digits = fixed_digits(mantissa, 1);
    if (digits == "10.0") {
        ++exponent;
        digits = "1.0";
    }
    return trim_trailing_zeros(digits) + "e" + std::to_string(exponent);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw ConfigError("gamma_q: need a > 0 and x >= 0");
    if (x == 0.0) return 1.0;

    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    constexpr double eps = 1e-15;
    constexpr int max_iterations = 10000;

    if (x < a + 1.0) {
        // Series for the lower function P(a,x); Q = 1 - P.
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n <= max_iterations; ++n) {
            term *= x / (a + static_cast<double>(n));
            sum += term;
            if (term < sum * eps) break;
        }
        return 1.0 - sum * std::exp(log_prefactor);
    }

    // Modified Lentz continued fraction for Q(a,x) directly.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_iterations; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double factor = d * c;
        h *= factor;
        if (std::abs(factor - 1.0) < eps) break;
    }
    return std::clamp(std::exp(log_prefactor) * h, 0.0, 1.0);
}

double chi_square_sf(double statistic, int df) {
    if (df < 1) throw ConfigError("chi_square_sf: df must be positive");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(static_cast<double>(df) / 2.0, statistic / 2.0);
}

} // namespace canarypack
