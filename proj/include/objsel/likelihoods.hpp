#pragma once

// Objective catalog, maximum-likelihood fitting of each objective's scale and
// zero-state rate, and total log-likelihood evaluation in nats.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "objsel/data.hpp"
#include "objsel/error.hpp"
#include "objsel/summation.hpp"
#include "objsel/transforms.hpp"

namespace objsel {

enum class BaseFamily { normal, laplace, uniform };

constexpr std::string_view to_string(BaseFamily f) noexcept {
    switch (f) {
        case BaseFamily::normal: return "normal";
        case BaseFamily::laplace: return "laplace";
        case BaseFamily::uniform: return "uniform";
    }
    return "unknown";
}

struct ObjectiveSpec {
    std::string name;
    std::string description;
    TransformKind transform = TransformKind::identity;
    BaseFamily family = BaseFamily::normal;
    bool zero_inflated = false;
    int k = 1;

    friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

/// Throws InvalidArgument unless k matches the zero-inflation flag and zero
/// inflation sits on a positive-domain transform.
inline void validate_spec(const ObjectiveSpec& spec) {
    detail::require(spec.k == (spec.zero_inflated ? 2 : 1), ErrorCode::InvalidArgument,
                    "objective " + spec.name + " has k=" + std::to_string(spec.k) + " inconsistent with its zero-inflation flag");
    detail::require(!spec.zero_inflated || requires_positive_domain(spec.transform), ErrorCode::InvalidArgument,
                    "zero-inflated objective " + spec.name + " needs a positive-domain transform");
}

/// The ten catalog objectives, in the order they are conventionally tabulated.
inline const std::vector<ObjectiveSpec>& objective_catalog() {
    using TK = TransformKind;
    using BF = BaseFamily;
    static const std::vector<ObjectiveSpec> catalog{
        {"MSPE", "mean squared percent error", TK::reciprocal, BF::normal, false, 1},
        {"U", "uniformly distributed error", TK::identity, BF::uniform, false, 1},
        {"MSE", "mean squared error", TK::identity, BF::normal, false, 1},
        {"NSE", "normalized squared error", TK::location_scale, BF::normal, false, 1},
        {"MAE", "mean absolute error", TK::identity, BF::laplace, false, 1},
        {"MSLE", "mean squared log error", TK::natural_log, BF::normal, false, 1},
        {"MARE", "mean absolute square root error", TK::square_root, BF::laplace, false, 1},
        {"ZMSLE", "zero-inflated MSLE", TK::natural_log, BF::normal, true, 2},
        {"MALE", "mean absolute log error", TK::natural_log, BF::laplace, false, 1},
        {"ZMALE", "zero-inflated MALE", TK::natural_log, BF::laplace, true, 2},
    };
    return catalog;
}

inline std::string catalog_names() {
    std::string out;
    for (const auto& s : objective_catalog()) {
        if (!out.empty()) out += ", ";
        out += s.name;
    }
    return out;
}

inline const ObjectiveSpec& find_objective(std::string_view name) {
    for (const auto& s : objective_catalog())
        if (s.name == name) return s;
    detail::fail(ErrorCode::UnknownObjective,
                 "unknown objective '" + std::string(name) + "'; valid names: " + catalog_names());
}

/// Resolves a list of names; a single "all" selects the whole catalog.
inline std::vector<ObjectiveSpec> select_objectives(std::span<const std::string> names) {
    if (names.empty() || (names.size() == 1 && names[0] == "all")) return objective_catalog();
    std::vector<ObjectiveSpec> out;
    for (const auto& n : names) {
        const auto& s = find_objective(n);
        if (std::none_of(out.begin(), out.end(), [&](const ObjectiveSpec& o) { return o.name == s.name; }))
            out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scale fitting (maximum likelihood)
// ---------------------------------------------------------------------------

/// Sufficient statistics of a residual set for all three base families.
struct ResidualSummary {
    CompensatedSum sum_sq;
    CompensatedSum sum_abs;
    double max_abs = 0.0;
    std::size_t count = 0;

    void add(double r) {
        sum_sq.add(r * r);
        sum_abs.add(std::fabs(r));
        max_abs = std::max(max_abs, std::fabs(r));
        ++count;
    }

    static ResidualSummary of(std::span<const double> residuals) {
        ResidualSummary s;
        for (double r : residuals) s.add(r);
        return s;
    }
};

namespace detail {

inline void require_nonempty(std::size_t n) {
    require(n > 0, ErrorCode::EmptyEvaluationSet, "no residuals to fit");
}

inline void require_positive_scale(double s, std::string_view what) {
    require(s > 0 && std::isfinite(s), ErrorCode::NonPositiveScale,
            std::string(what) + " must be positive and finite, got " + std::to_string(s));
}

inline double fit_scale(BaseFamily f, const ResidualSummary& rs) {
    require_nonempty(rs.count);
    const double n = static_cast<double>(rs.count);
    double scale = 0.0;
    switch (f) {
        case BaseFamily::normal: scale = std::sqrt(rs.sum_sq.value() / n); break;
        case BaseFamily::laplace: scale = rs.sum_abs.value() / n; break;
        case BaseFamily::uniform: scale = rs.max_abs; break;
    }
    require(scale > 0, ErrorCode::DegenerateScale, "all residuals are zero; the " +
                                                        std::string(to_string(f)) + " scale is degenerate");
    return scale;
}

inline double loglik_base(BaseFamily f, const ResidualSummary& rs, double scale) {
    const double n = static_cast<double>(rs.count);
    switch (f) {
        case BaseFamily::normal:
            require_positive_scale(scale, "sigma");
            return -n * std::log(scale) - 0.5 * n * std::log(2.0 * std::numbers::pi) -
                   rs.sum_sq.value() / (2.0 * scale * scale);
        case BaseFamily::laplace:
            require_positive_scale(scale, "b");
            return -n * std::log(2.0 * scale) - rs.sum_abs.value() / scale;
        case BaseFamily::uniform:
            require_positive_scale(scale, "a");
            if (rs.max_abs > scale) return -std::numeric_limits<double>::infinity();
            return -n * std::log(scale);
    }
    return 0.0;
}

}  // namespace detail

/// sigma = sqrt(mean r^2)
inline double fit_scale_normal(std::span<const double> residuals) {
    return detail::fit_scale(BaseFamily::normal, ResidualSummary::of(residuals));
}

/// b = mean |r|
inline double fit_scale_laplace(std::span<const double> residuals) {
    return detail::fit_scale(BaseFamily::laplace, ResidualSummary::of(residuals));
}

/// a = max |r|
inline double fit_uniform_bound(std::span<const double> residuals) {
    return detail::fit_scale(BaseFamily::uniform, ResidualSummary::of(residuals));
}

/// rho = n1 / (n1 + n2)
inline double fit_binomial_rate(std::size_t n1, std::size_t n2) {
    detail::require(n1 + n2 > 0, ErrorCode::NoZeroState, "no zero-state pairs to estimate the zero-state rate");
    return static_cast<double>(n1) / static_cast<double>(n1 + n2);
}

inline double fit_binomial_rate(const ZeroPartition& p) { return fit_binomial_rate(p.n1(), p.n2()); }

// ---------------------------------------------------------------------------
// Log-likelihoods (nats)
// ---------------------------------------------------------------------------

/// Value returned when the data fall outside the fitted support.
inline constexpr double kZeroLikelihood = -std::numeric_limits<double>::infinity();

inline bool is_zero_likelihood(double loglik) noexcept { return loglik == kZeroLikelihood; }

inline double loglik_normal(std::span<const double> residuals, double sigma) {
    return detail::loglik_base(BaseFamily::normal, ResidualSummary::of(residuals), sigma);
}

inline double loglik_laplace(std::span<const double> residuals, double b) {
    return detail::loglik_base(BaseFamily::laplace, ResidualSummary::of(residuals), b);
}

/// -n ln(a) when every |r| <= a, otherwise kZeroLikelihood.
inline double loglik_uniform(std::span<const double> residuals, double a) {
    return detail::loglik_base(BaseFamily::uniform, ResidualSummary::of(residuals), a);
}

/// n1 ln(rho) + n2 ln(1 - rho) with 0 ln 0 = 0.
inline double loglik_binomial(std::size_t n1, std::size_t n2, double rho) {
    detail::require(rho >= 0 && rho <= 1, ErrorCode::InvalidProbability,
                    "rho must lie in [0, 1], got " + std::to_string(rho));
    const auto term = [](std::size_t count, double p) {
        if (count == 0) return 0.0;
        return static_cast<double>(count) * std::log(p);
    };
    return term(n1, rho) + term(n2, 1.0 - rho);
}

// ---------------------------------------------------------------------------
// Objective evaluation
// ---------------------------------------------------------------------------

struct FittedParams {
    double scale = 0.0;           // sigma, b (transformed units) or a (original units)
    std::optional<double> rho;    // zero-inflated objectives with a seen zero state
};

struct FittedObjective {
    ObjectiveSpec spec;
    FittedParams params;
    double loglik_nats = 0.0;
    std::size_t n_eval = 0;
    std::size_t n_excluded = 0;  // zero-state pairs outside a non-zero-inflated positive-domain objective
    std::size_t n_clamped = 0;   // positive pairs whose prediction was raised to the threshold
    bool in_sample = false;

    bool zero_likelihood() const noexcept { return is_zero_likelihood(loglik_nats); }
};

namespace detail {

struct EvaluationSummary {
    ResidualSummary residuals;
    CompensatedSum log_jacobian;
    std::size_t n1 = 0, n2 = 0;
    std::size_t n_excluded = 0;
    std::size_t n_clamped = 0;
};

/// One pass over the pairs an objective applies to. Identity-like transforms use
/// every pair; positive-domain transforms use n3, with predictions clamped up to
/// the threshold, and either count the zero state (zero-inflated) or exclude it.
inline EvaluationSummary summarize(const ObjectiveSpec& spec, const Dataset& data, const ZeroPartition& part,
                                   const std::shared_ptr<const LocationStats>& stats) {
    validate_spec(spec);
    EvaluationSummary out;
    const Transform t = Transform::of(spec.transform, stats);
    if (!requires_positive_domain(spec.transform)) {
        for (std::size_t l = 0; l < data.location_count(); ++l) {
            const auto s = data.series(l);
            const BoundTransform b = t.bind(s.location_id);
            for (std::size_t i = 0; i < s.observed.size(); ++i) {
                out.residuals.add(b.value(s.observed[i]) - b.value(s.predicted[i]));
                out.log_jacobian.add(b.log_abs_derivative(s.observed[i]));
            }
        }
        return out;
    }
    const BoundTransform b = t.bind({});
    const auto obs = data.observed();
    const auto pred = data.predicted();
    for (std::size_t i : part.positive) {
        double yhat = pred[i];
        if (yhat <= part.threshold) {
            yhat = part.threshold;
            ++out.n_clamped;
        }
        out.residuals.add(b.value(obs[i]) - b.value(yhat));
        out.log_jacobian.add(b.log_abs_derivative(obs[i]));
    }
    if (spec.zero_inflated) {
        out.n1 = part.n1();
        out.n2 = part.n2();
    } else {
        out.n_excluded = part.zero_state();
    }
    return out;
}

inline void require_stats_cover(const ObjectiveSpec& spec, const std::shared_ptr<const LocationStats>& stats) {
    if (spec.transform == TransformKind::location_scale)
        require(stats != nullptr, ErrorCode::DomainViolation,
                "objective " + spec.name + " needs per-location statistics");
}

}  // namespace detail

/// Fits the objective's parameters on `train`.
inline FittedParams fit_objective(const ObjectiveSpec& spec, const Dataset& train, const ZeroPartition& part,
                                  const std::shared_ptr<const LocationStats>& stats = nullptr) {
    detail::require_stats_cover(spec, stats);
    const auto sum = detail::summarize(spec, train, part, stats);
    FittedParams p;
    if (sum.residuals.count > 0 || !spec.zero_inflated) p.scale = detail::fit_scale(spec.family, sum.residuals);
    if (spec.zero_inflated && sum.n1 + sum.n2 > 0) p.rho = fit_binomial_rate(sum.n1, sum.n2);
    if (spec.zero_inflated && sum.residuals.count == 0 && sum.n1 + sum.n2 == 0)
        detail::fail(ErrorCode::EmptyEvaluationSet, "objective " + spec.name + " has nothing to fit");
    return p;
}

/// Scores frozen parameters on `test`. Total log-likelihood is the base family on
/// transformed residuals, plus the summed log-Jacobian over test observations, plus
/// the binomial zero-state term for zero-inflated objectives.
inline FittedObjective score_objective(const ObjectiveSpec& spec, const FittedParams& params, const Dataset& test,
                                       const ZeroPartition& part,
                                       const std::shared_ptr<const LocationStats>& stats = nullptr) {
    detail::require_stats_cover(spec, stats);
    const auto sum = detail::summarize(spec, test, part, stats);
    FittedObjective out;
    out.spec = spec;
    out.params = params;
    out.n_excluded = sum.n_excluded;
    out.n_clamped = sum.n_clamped;
    out.n_eval = sum.residuals.count + sum.n1 + sum.n2;
    detail::require(out.n_eval > 0, ErrorCode::EmptyEvaluationSet,
                    "objective " + spec.name + " has no pairs to evaluate");

    double ll = 0.0;
    if (sum.residuals.count > 0) {
        ll = detail::loglik_base(spec.family, sum.residuals, params.scale);
        if (!is_zero_likelihood(ll)) ll += sum.log_jacobian.value();
    }
    if (spec.zero_inflated && sum.n1 + sum.n2 > 0) {
        // A rate fitted without zero-state pairs gives the zero state no support.
        const double l0 = params.rho ? loglik_binomial(sum.n1, sum.n2, *params.rho) : kZeroLikelihood;
        ll = std::isfinite(l0) ? ll + l0 : kZeroLikelihood;
    }
    out.loglik_nats = ll;
    return out;
}

/// Fits on `train` and scores on `test`.
inline FittedObjective evaluate_objective(const ObjectiveSpec& spec, const Dataset& train,
                                          const ZeroPartition& train_part, const Dataset& test,
                                          const ZeroPartition& test_part,
                                          const std::shared_ptr<const LocationStats>& stats = nullptr) {
    auto fitted = score_objective(spec, fit_objective(spec, train, train_part, stats), test, test_part, stats);
    fitted.in_sample = (&train == &test) || (train == test);
    return fitted;
}

/// In-sample evaluation: fit and score on the same data.
inline FittedObjective evaluate_objective(const ObjectiveSpec& spec, const Dataset& data, const ZeroPartition& part,
                                          const std::shared_ptr<const LocationStats>& stats = nullptr) {
    auto fitted = score_objective(spec, fit_objective(spec, data, part, stats), data, part, stats);
    fitted.in_sample = true;
    return fitted;
}

}  // namespace objsel
