#pragma once

// Log-likelihood to conditional entropy, AIC correction, Akaike weights,
// noise fractions, ranking, and predictive adjustments for logged objectives.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "objsel/error.hpp"
#include "objsel/likelihoods.hpp"
#include "objsel/summation.hpp"

namespace objsel {

enum class EntropyBase { bits, nats };

constexpr std::string_view to_string(EntropyBase b) noexcept { return b == EntropyBase::bits ? "bits" : "nats"; }

/// Multiplier converting bits to the given unit.
constexpr double bits_to(EntropyBase b) noexcept { return b == EntropyBase::bits ? 1.0 : std::numbers::ln2; }

/// -loglik / (n ln 2), bits per observation.
inline double conditional_entropy_bits(double loglik_nats, std::size_t n) {
    detail::require(n >= 1, ErrorCode::ZeroSampleCount, "entropy needs at least one observation");
    return -loglik_nats / (static_cast<double>(n) * std::numbers::ln2);
}

/// (-loglik + k) / (n ln 2). Pass only the objective's parameter count when the
/// model is held fixed; the model's own count is a shared constant.
inline double aic_adjusted_entropy(double loglik_nats, std::size_t n, int k) {
    detail::require(n >= 1, ErrorCode::ZeroSampleCount, "entropy needs at least one observation");
    detail::require(k >= 0, ErrorCode::InvalidArgument, "parameter count must be non-negative");
    return (-loglik_nats + static_cast<double>(k)) / (static_cast<double>(n) * std::numbers::ln2);
}

/// AIC numerator in nats, -loglik + k.
inline double aic(double loglik_nats, int k) { return -loglik_nats + static_cast<double>(k); }

/// w_i = x^{-H_i} / sum_j x^{-H_j}, with entropies expressed in the unit of `base`.
/// Infinite entropies get weight 0.
inline std::vector<double> akaike_weights(std::span<const double> entropies, EntropyBase base = EntropyBase::bits) {
    detail::require(!entropies.empty(), ErrorCode::EmptyInput, "no entropies to weight");
    double h_min = std::numeric_limits<double>::infinity();
    for (double h : entropies) {
        detail::require(!std::isnan(h) && h != -std::numeric_limits<double>::infinity(), ErrorCode::InvalidArgument,
                        "entropies must be finite or +infinity");
        h_min = std::min(h_min, h);
    }
    detail::require(std::isfinite(h_min), ErrorCode::NoFiniteEntropy, "every entropy is infinite");
    const double log_x = base == EntropyBase::bits ? std::numbers::ln2 : 1.0;
    std::vector<double> w(entropies.size());
    CompensatedSum total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::isfinite(entropies[i]) ? std::exp(-(entropies[i] - h_min) * log_x) : 0.0;
        total.add(w[i]);
    }
    const double z = total.value();
    for (double& wi : w) wi /= z;
    return w;
}

/// Share of an objective's bits that exceed the best objective's: (H_i - H_best) / H_i.
inline double noise_fraction(double h_i, double h_best) {
    detail::require(h_best > 0 && h_i >= h_best, ErrorCode::OrderingViolation,
                    "noise fraction needs H_i >= H_best > 0, got H_i=" + std::to_string(h_i) +
                        " H_best=" + std::to_string(h_best));
    return (h_i - h_best) / h_i;
}

struct EntropyEstimate {
    std::string objective;
    std::string description;
    int k = 1;
    double h_bits = 0.0;      // +inf for zero-likelihood rows
    double h_adj_bits = 0.0;
    double loglik_nats = 0.0;
    std::size_t n_eval = 0;
    std::size_t n_excluded = 0;
    std::size_t n_clamped = 0;
    bool in_sample = false;
};

inline EntropyEstimate estimate_entropy(const FittedObjective& f) {
    EntropyEstimate e;
    e.objective = f.spec.name;
    e.description = f.spec.description;
    e.k = f.spec.k;
    e.loglik_nats = f.loglik_nats;
    e.n_eval = f.n_eval;
    e.n_excluded = f.n_excluded;
    e.n_clamped = f.n_clamped;
    e.in_sample = f.in_sample;
    if (f.zero_likelihood()) {
        e.h_bits = e.h_adj_bits = std::numeric_limits<double>::infinity();
    } else {
        e.h_bits = conditional_entropy_bits(f.loglik_nats, f.n_eval);
        e.h_adj_bits = aic_adjusted_entropy(f.loglik_nats, f.n_eval, f.spec.k);
    }
    return e;
}

struct ReportRow {
    EntropyEstimate estimate;
    double score_bits = 0.0;  // entropy used for ranking: adjusted or raw
    double weight = 0.0;
    int rank = 0;
    std::optional<double> noise_fraction;  // absent when undefined (best H <= 0, infinite H)
};

struct EntropyReport {
    std::vector<ReportRow> rows;  // ascending by score, rank 1 first
    EntropyBase base = EntropyBase::bits;
    bool aic_adjusted = false;
};

/// Sorts ascending by entropy (AIC-adjusted when requested), breaking ties by
/// fewer parameters and then by name, and attaches weights and noise fractions.
inline EntropyReport rank_objectives(std::vector<EntropyEstimate> estimates, EntropyBase base = EntropyBase::bits,
                                     bool use_adjusted = false) {
    detail::require(!estimates.empty(), ErrorCode::EmptyInput, "no estimates to rank");
    EntropyReport rep;
    rep.base = base;
    rep.aic_adjusted = use_adjusted;
    for (auto& e : estimates) {
        ReportRow r;
        r.score_bits = use_adjusted ? e.h_adj_bits : e.h_bits;
        r.estimate = std::move(e);
        rep.rows.push_back(std::move(r));
    }
    std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.score_bits != b.score_bits) return a.score_bits < b.score_bits;
        if (a.estimate.k != b.estimate.k) return a.estimate.k < b.estimate.k;
        return a.estimate.objective < b.estimate.objective;
    });

    std::vector<double> scores;
    scores.reserve(rep.rows.size());
    for (const auto& r : rep.rows) scores.push_back(r.score_bits * bits_to(base));
    const auto w = akaike_weights(scores, base);
    const double best = rep.rows.front().score_bits;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        auto& r = rep.rows[i];
        r.weight = w[i];
        r.rank = static_cast<int>(i) + 1;
        if (best > 0 && std::isfinite(r.score_bits)) r.noise_fraction = noise_fraction(r.score_bits, best);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Predictive adjustments
// ---------------------------------------------------------------------------

/// Mean of a lognormal with the given median and log-scale sigma: median * exp(sigma^2 / 2).
inline double adjust_expectation_lognormal(double median, double sigma) {
    detail::require(median > 0, ErrorCode::NonPositiveMedian, "median must be positive");
    detail::require(sigma >= 0, ErrorCode::NegativeSigma, "sigma must be non-negative");
    return median * std::exp(0.5 * sigma * sigma);
}

/// Two-sided standard-normal quantile for a central coverage level (1.959964 at 0.95).
inline double coverage_z(double coverage) {
    detail::require(coverage > 0 && coverage < 1, ErrorCode::InvalidCoverage, "coverage must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * coverage);
}

enum class IntervalStyle { multiplicative, additive };

struct PredictionInterval {
    double low = 0.0;
    double high = 0.0;
};

/// multiplicative: (center / exp(sigma z), center * exp(sigma z)), center is the median.
/// additive:       (center - sigma z, center + sigma z), center is the expectation.
inline PredictionInterval prediction_interval(double center, double sigma, double coverage, IntervalStyle style) {
    detail::require(sigma >= 0, ErrorCode::NegativeSigma, "sigma must be non-negative");
    const double z = coverage_z(coverage);
    if (style == IntervalStyle::multiplicative) {
        detail::require(center > 0, ErrorCode::NonPositiveMedian, "multiplicative intervals need a positive center");
        const double f = std::exp(sigma * z);
        return {center / f, center * f};
    }
    return {center - sigma * z, center + sigma * z};
}

struct PredictiveAdjustment {
    double median = 0.0;
    double sigma = 0.0;
    double coverage = 0.95;
    double expectation = 0.0;
    PredictionInterval multiplicative;  // around the median
    PredictionInterval additive;        // around the expectation
};

inline PredictiveAdjustment adjust_prediction(double median, double sigma, double coverage) {
    PredictiveAdjustment a{median, sigma, coverage, adjust_expectation_lognormal(median, sigma), {}, {}};
    a.multiplicative = prediction_interval(median, sigma, coverage, IntervalStyle::multiplicative);
    a.additive = prediction_interval(a.expectation, sigma, coverage, IntervalStyle::additive);
    return a;
}

}  // namespace objsel
