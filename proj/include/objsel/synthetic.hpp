#pragma once

// Ground-truth generator: paired series whose errors come from a known family,
// so the selection pipeline can be checked against the objective that matches it.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "objsel/data.hpp"
#include "objsel/error.hpp"
#include "objsel/likelihoods.hpp"
#include "objsel/random.hpp"

namespace objsel {

enum class ErrorFamily { additive_normal, additive_laplace, multiplicative_lognormal, multiplicative_log_laplace };

constexpr std::string_view to_string(ErrorFamily f) noexcept {
    switch (f) {
        case ErrorFamily::additive_normal: return "normal";
        case ErrorFamily::additive_laplace: return "laplace";
        case ErrorFamily::multiplicative_lognormal: return "lognormal";
        case ErrorFamily::multiplicative_log_laplace: return "loglaplace";
    }
    return "unknown";
}

inline ErrorFamily parse_error_family(std::string_view s) {
    for (auto f : {ErrorFamily::additive_normal, ErrorFamily::additive_laplace, ErrorFamily::multiplicative_lognormal,
                   ErrorFamily::multiplicative_log_laplace})
        if (to_string(f) == s) return f;
    detail::fail(ErrorCode::InvalidArgument,
                 "unknown error family '" + std::string(s) + "'; valid: normal, laplace, lognormal, loglaplace");
}

struct SyntheticModel {
    ErrorFamily family = ErrorFamily::additive_normal;
    double scale = 1.0;             // sigma, b, sigma_log or b_log
    double zero_rate = 0.0;         // p: independent chance of zeroing observed, and of zeroing predicted
    double base_median = 1.0;       // lognormal base-flow median
    double base_log_sigma = 1.0;    // lognormal base-flow log-scale
    double location_spread = 0.0;   // log-scale spread of per-location median multipliers
    std::size_t n_per_location = 1000;
    std::size_t locations = 1;
    std::uint64_t seed = 0;
};

struct SyntheticTruth {
    std::string optimal_objective;  // catalog name matching the generator
    BaseFamily error_family = BaseFamily::normal;
    double scale = 0.0;
    double zero_rate = 0.0;
};

struct SyntheticData {
    Dataset dataset;
    SyntheticTruth truth;
};

inline void validate_model(const SyntheticModel& m) {
    detail::require(m.scale > 0 && std::isfinite(m.scale), ErrorCode::InvalidModel, "error scale must be positive");
    detail::require(m.zero_rate >= 0 && m.zero_rate < 1, ErrorCode::InvalidModel, "zero rate must lie in [0, 1)");
    detail::require(m.base_median > 0 && std::isfinite(m.base_median), ErrorCode::InvalidModel,
                    "base-flow median must be positive");
    detail::require(m.base_log_sigma >= 0 && m.location_spread >= 0, ErrorCode::InvalidModel,
                    "base-flow spreads must be non-negative");
    detail::require(m.n_per_location >= 1 && m.locations >= 1, ErrorCode::InvalidModel, "counts must be at least 1");
}

inline SyntheticTruth synthetic_truth(const SyntheticModel& m) {
    SyntheticTruth t;
    t.scale = m.scale;
    t.zero_rate = m.zero_rate;
    const bool zi = m.zero_rate > 0;
    switch (m.family) {
        case ErrorFamily::additive_normal:
            t.optimal_objective = "MSE";
            t.error_family = BaseFamily::normal;
            break;
        case ErrorFamily::additive_laplace:
            t.optimal_objective = "MAE";
            t.error_family = BaseFamily::laplace;
            break;
        case ErrorFamily::multiplicative_lognormal:
            t.optimal_objective = zi ? "ZMSLE" : "MSLE";
            t.error_family = BaseFamily::normal;
            break;
        case ErrorFamily::multiplicative_log_laplace:
            t.optimal_objective = zi ? "ZMALE" : "MALE";
            t.error_family = BaseFamily::laplace;
            break;
    }
    return t;
}

/// Draws predicted = true base flow and observed = predicted perturbed by the
/// error family; then zeroes observed and predicted independently with
/// probability zero_rate. Each location draws from its own derived stream.
inline SyntheticData generate(const SyntheticModel& m) {
    validate_model(m);
    std::vector<PairedSeries> raw;
    raw.reserve(m.locations);
    for (std::size_t l = 0; l < m.locations; ++l) {
        rng::Engine eng(rng::derive_seed(m.seed, l + 1));
        PairedSeries s;
        s.location_id = "L" + std::to_string(l + 1);
        s.observed.reserve(m.n_per_location);
        s.predicted.reserve(m.n_per_location);
        const double median =
            m.base_median * (m.location_spread > 0 ? std::exp(m.location_spread * rng::standard_normal(eng)) : 1.0);
        for (std::size_t i = 0; i < m.n_per_location; ++i) {
            const double pred = median * std::exp(m.base_log_sigma * rng::standard_normal(eng));
            double obs = pred;
            switch (m.family) {
                case ErrorFamily::additive_normal: obs = pred + m.scale * rng::standard_normal(eng); break;
                case ErrorFamily::additive_laplace: obs = pred + rng::laplace(eng, m.scale); break;
                case ErrorFamily::multiplicative_lognormal:
                    obs = pred * std::exp(m.scale * rng::standard_normal(eng));
                    break;
                case ErrorFamily::multiplicative_log_laplace: obs = pred * std::exp(rng::laplace(eng, m.scale)); break;
            }
            double p = pred;
            if (m.zero_rate > 0) {
                if (rng::bernoulli(eng, m.zero_rate)) obs = 0.0;
                if (rng::bernoulli(eng, m.zero_rate)) p = 0.0;
            }
            s.observed.push_back(obs);
            s.predicted.push_back(p);
        }
        raw.push_back(std::move(s));
    }
    return {validate_dataset(std::move(raw)), synthetic_truth(m)};
}

/// Differential entropy in bits of the zero-centred error density.
///   normal: 0.5 log2(2 pi e sigma^2)   laplace: log2(2 e b)   uniform on [-a, a]: log2(2a)
inline double analytic_entropy(BaseFamily family, double scale) {
    detail::require(scale > 0, ErrorCode::NonPositiveScale, "scale must be positive");
    switch (family) {
        case BaseFamily::normal:
            return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * scale * scale);
        case BaseFamily::laplace: return std::log2(2.0 * std::numbers::e * scale);
        case BaseFamily::uniform: return std::log2(2.0 * scale);
    }
    return 0.0;
}

}  // namespace objsel
