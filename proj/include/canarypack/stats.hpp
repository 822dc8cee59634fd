#pragma once

#include <optional>
#include <string>
#include <vector>

namespace canarypack {

// False-positive-rate arithmetic for the activation count of an uncontaminated
// model, which is Binomial(B, 1/K) by construction. All functions are pure.

struct FprQuery {
    int B = 0;    // number of planted triggers, >= 1
    int K = 0;    // number of output subspaces, >= 2
    int tau = 0;  // activation threshold, 0..B
};

void validate(const FprQuery& q);

// Pr[X >= tau] for X ~ Binomial(B, 1/K), evaluated in log space via lgamma
// with the terms summed smallest-first. Relative error <= 1e-12 against exact
// rational arithmetic for B <= 20 (and far beyond in practice).
double binomial_tail(const FprQuery& q);

// Bernoulli KL divergence D(x||y) = x ln(x/y) + (1-x) ln((1-x)/(1-y)), with
// 0 ln 0 = 0 and D(1||y) = -ln y. y must lie strictly inside (0, 1).
double kl_bernoulli(double x, double y);

// Chernoff-Hoeffding upper bound exp(-B * D(tau/B || 1/K)) on the tail, valid
// for tau >= B/K; smaller tau raises ConfigError.
double chernoff_bound(const FprQuery& q);

// Smallest B with K^-B <= target_fpr: the trigger count needed so that an
// all-activated verdict carries at most the requested false positive rate.
int min_backdoors_for_fpr(int K, double target_fpr);

struct FprRow {
    int tau = 0;
    double exact = 1.0;
    std::optional<double> bound;  // absent for tau < B/K
};

// Rows tau = 0..B of the exact tail and (where defined) the Chernoff bound.
std::vector<FprRow> fpr_table(int B, int K);

// Display convention for probabilities: percent at >= 1e-4 (bare for exact
// powers of ten: "100%", "10%", "0.01%"; otherwise three significant digits:
// "19.0%", "0.127%"), scientific below ("7.3e-7", "2.34e-5").
std::string format_probability(double p);

// Regularized upper incomplete gamma Q(a, x); survival function machinery for
// the chi-square checks in the simulation module.
double gamma_q(double a, double x);

// Chi-square survival probability with df degrees of freedom.
double chi_square_sf(double statistic, int df);

} // namespace canarypack
