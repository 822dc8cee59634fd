#include <doctest.h>

#include <cmath>

#include "canarypack/errors.hpp"
#include "canarypack/stats.hpp"
#include "rational_oracle.hpp"

using namespace canarypack;

namespace {

double log_pmf(int B, int i, double p) {
    return std::lgamma(B + 1.0) - std::lgamma(i + 1.0) - std::lgamma(B - i + 1.0) +
           i * std::log(p) + (B - i) * std::log1p(-p);
}

} // namespace

TEST_CASE("binomial tail matches published table values") {
    struct Cell {
        int B, K, tau;
        double expected;  // frozen from the exact rational oracle
    };
    // Spot values also appearing in the reported-results tables.
    const Cell cells[] = {
        {8, 10, 8, 1e-8},          {8, 10, 7, 7.3e-7},
        {8, 10, 1, 0.56953279},    {6, 10, 6, 1e-6},
        {6, 10, 4, 1.27e-3},       {6, 7, 6, 8.499859752314087e-6},
        {2, 10, 1, 0.19},          {2, 10, 2, 0.01},
        {4, 10, 1, 0.3439},        {8, 7, 8, 1.7346652555743034e-7},
        {8, 10, 4, 5.02435e-3},    {1, 10, 1, 0.1},
    };
    for (const Cell& c : cells) {
        const double tail = binomial_tail(FprQuery{c.B, c.K, c.tau});
        CHECK(tail == doctest::Approx(c.expected).epsilon(1e-12));
        CHECK(oracle::within_relative(tail, oracle::binomial_tail_exact(c.B, c.K, c.tau), 1e-12));
    }
}

TEST_CASE("binomial tail agrees with the exact rational oracle for B <= 20") {
    for (int B = 1; B <= 20; ++B)
        for (int K : {2, 3, 5, 7, 10, 13, 26})
            for (int tau = 0; tau <= B; ++tau) {
                const double tail = binomial_tail(FprQuery{B, K, tau});
                CAPTURE(B);
                CAPTURE(K);
                CAPTURE(tau);
                CHECK(oracle::within_relative(tail, oracle::binomial_tail_exact(B, K, tau), 1e-12));
            }
}

TEST_CASE("binomial tail endpoints and monotonicity") {
    CHECK(binomial_tail(FprQuery{8, 10, 0}) == 1.0);
    CHECK(binomial_tail(FprQuery{12, 4, 12}) ==
          doctest::Approx(std::pow(4.0, -12)).epsilon(1e-12));
    for (int B : {1, 3, 8, 20, 64}) {
        for (int K : {2, 10, 26}) {
            double previous = 2.0;
            for (int tau = 0; tau <= B; ++tau) {
                const double tail = binomial_tail(FprQuery{B, K, tau});
                CHECK(tail <= previous);
                // Strict decrease wherever the removed mass is representable
                // at double precision (e.g. 1 - 2^-64 rounds to 1 exactly).
                if (tau >= 1 && std::exp(log_pmf(B, tau - 1, 1.0 / K)) > previous * 1e-12)
                    CHECK(tail < previous);
                previous = tail;
            }
        }
    }
}

TEST_CASE("binomial tail complement identity") {
    for (int B : {5, 8, 20})
        for (int K : {2, 7, 10})
            for (int tau = 1; tau <= B; ++tau) {
                double lower = 0.0;
                for (int i = 0; i < tau; ++i) lower += std::exp(log_pmf(B, i, 1.0 / K));
                CHECK(binomial_tail(FprQuery{B, K, tau}) + lower == doctest::Approx(1.0).epsilon(1e-14));
            }
}

TEST_CASE("binomial tail rejects bad queries") {
    CHECK_THROWS_AS(binomial_tail(FprQuery{0, 10, 0}), ConfigError);
    CHECK_THROWS_AS(binomial_tail(FprQuery{4, 1, 2}), ConfigError);
    CHECK_THROWS_AS(binomial_tail(FprQuery{4, 10, 5}), ConfigError);
    CHECK_THROWS_AS(binomial_tail(FprQuery{4, 10, -1}), ConfigError);
}

TEST_CASE("Bernoulli KL divergence") {
    for (double x : {0.01, 0.1, 0.5, 0.9, 0.99}) CHECK(kl_bernoulli(x, x) == 0.0);
    CHECK(kl_bernoulli(1.0, 0.1) == doctest::Approx(std::log(10.0)).epsilon(1e-15));
    CHECK(kl_bernoulli(0.0, 0.1) == doctest::Approx(-std::log1p(-0.1)).epsilon(1e-15));
    // ln(5/3), evaluated by hand: 0.5 ln 5 + 0.5 ln(5/9) = 0.5 ln(25/9)
    CHECK(kl_bernoulli(0.5, 0.1) == doctest::Approx(0.5108256237659907).epsilon(1e-13));
    CHECK_THROWS_AS(kl_bernoulli(0.5, 0.0), ConfigError);
    CHECK_THROWS_AS(kl_bernoulli(0.5, 1.0), ConfigError);
    CHECK_THROWS_AS(kl_bernoulli(1.5, 0.5), ConfigError);
}

TEST_CASE("Chernoff bound") {
    // tau = B: bound equals the exact tail K^-B since D(1||1/K) = ln K.
    CHECK(chernoff_bound(FprQuery{8, 10, 8}) == doctest::Approx(1e-8).epsilon(1e-12));
    // tau = B/K exactly: divergence zero, bound one.
    CHECK(chernoff_bound(FprQuery{10, 5, 2}) == doctest::Approx(1.0).epsilon(1e-15));
    // Derived pair: bound ~1.68e-2 dominates the exact tail ~5.02e-3.
    const double bound = chernoff_bound(FprQuery{8, 10, 4});
    CHECK(bound == doctest::Approx(1.6796159999999994e-2).epsilon(1e-10));
    CHECK(binomial_tail(FprQuery{8, 10, 4}) <= bound);
    CHECK_THROWS_WITH_AS(chernoff_bound(FprQuery{8, 10, 0}),
                         doctest::Contains("valid only for tau >= B/K"), ConfigError);
}

TEST_CASE("bound dominates the exact tail (sampled grid)") {
    for (int B : {1, 2, 5, 8, 13, 20})
        for (int K : {2, 3, 7, 10, 26})
            for (int tau = (B + K - 1) / K; tau <= B; ++tau) {
                CAPTURE(B);
                CAPTURE(K);
                CAPTURE(tau);
                CHECK(binomial_tail(FprQuery{B, K, tau}) <=
                      chernoff_bound(FprQuery{B, K, tau}) + 1e-15);
            }
}

TEST_CASE("min backdoors for a target FPR") {
    CHECK(min_backdoors_for_fpr(10, 1e-8) == 8);
    CHECK(min_backdoors_for_fpr(10, 1e-6) == 6);
    CHECK(min_backdoors_for_fpr(7, 1e-5) == 6);  // 7^-6 ~ 8.5e-6 <= 1e-5 < 7^-5
    CHECK(min_backdoors_for_fpr(10, 0.5) == 1);
    // Direct-check property on a grid: returned B reaches the target, B-1 does not.
    for (int K : {2, 3, 7, 10, 26})
        for (double fpr : {0.3, 1e-2, 1e-4, 1e-9, 1e-15}) {
            const int B = min_backdoors_for_fpr(K, fpr);
            CHECK(-B * std::log(static_cast<double>(K)) <= std::log(fpr) + 1e-9);
            if (B > 1)
                CHECK(-(B - 1) * std::log(static_cast<double>(K)) > std::log(fpr) - 1e-9);
        }
    CHECK_THROWS_AS(min_backdoors_for_fpr(1, 1e-3), ConfigError);
    CHECK_THROWS_AS(min_backdoors_for_fpr(10, 0.0), ConfigError);
    CHECK_THROWS_AS(min_backdoors_for_fpr(10, 1.0), ConfigError);
}

TEST_CASE("fpr table") {
    const auto rows = fpr_table(2, 10);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].exact == 1.0);
    CHECK(rows[1].exact == doctest::Approx(0.19).epsilon(1e-12));
    CHECK(rows[2].exact == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(!rows[0].bound.has_value());
    CHECK(rows[1].bound.has_value());

    const auto rows47 = fpr_table(6, 7);
    CHECK(rows47[1].exact == doctest::Approx(0.603430543396034).epsilon(1e-12));

    // Monotone non-increasing in tau.
    for (int B : {4, 8})
        for (int K : {7, 10}) {
            const auto table = fpr_table(B, K);
            for (std::size_t i = 1; i < table.size(); ++i)
                CHECK(table[i].exact <= table[i - 1].exact);
        }
}

TEST_CASE("probability display convention") {
    CHECK(format_probability(1.0) == "100%");
    CHECK(format_probability(0.1) == "10%");
    CHECK(format_probability(0.01) == "1%");
    CHECK(format_probability(1e-4) == "0.01%");
    CHECK(format_probability(0.19) == "19.0%");
    CHECK(format_probability(0.56953279) == "57.0%");
    CHECK(format_probability(0.3439) == "34.4%");
    CHECK(format_probability(1.27e-3) == "0.127%");
    CHECK(format_probability(0.0204081632653061) == "2.04%");
    CHECK(format_probability(1e-8) == "1e-8");
    CHECK(format_probability(7.3e-7) == "7.3e-7");
    CHECK(format_probability(8.499859752314087e-6) == "8.5e-6");
    CHECK(format_probability(2.341e-5) == "2.3e-5");
    CHECK(format_probability(0.0) == "0");
}

TEST_CASE("regularized upper incomplete gamma") {
    // Reference values from an independent scientific library.
    CHECK(gamma_q(0.5, 1.0) == doctest::Approx(1.572992070502811e-1).epsilon(1e-12));
    CHECK(gamma_q(3.0, 2.5) == doctest::Approx(5.438131158833297e-1).epsilon(1e-12));
    CHECK(gamma_q(4.0, 18.0) == doctest::Approx(1.756016664565365e-5).epsilon(1e-10));
    CHECK(gamma_q(2.5, 0.3) == doctest::Approx(9.880032427940937e-1).epsilon(1e-12));
    CHECK(gamma_q(10.0, 10.0) == doctest::Approx(4.579297144718523e-1).epsilon(1e-12));
    CHECK(gamma_q(1.0, 0.0) == 1.0);
    CHECK_THROWS_AS(gamma_q(0.0, 1.0), ConfigError);

    CHECK(chi_square_sf(22.458, 6) == doctest::Approx(9.9989300366e-4).epsilon(1e-8));
    CHECK(chi_square_sf(10.828, 1) == doctest::Approx(9.9976571958e-4).epsilon(1e-8));
    CHECK(chi_square_sf(26.124, 8) == doctest::Approx(1.0001899774e-3).epsilon(1e-8));
}
