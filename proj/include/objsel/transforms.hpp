#pragma once

// Change of variables: v(y), ln|v'(y)| and the summed log-Jacobian that turns a
// likelihood on transformed residuals into a likelihood on the original data.

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "objsel/data.hpp"
#include "objsel/error.hpp"
#include "objsel/summation.hpp"

namespace objsel {

enum class TransformKind { identity, natural_log, square_root, reciprocal, location_scale };

constexpr std::string_view to_string(TransformKind k) noexcept {
    switch (k) {
        case TransformKind::identity: return "identity";
        case TransformKind::natural_log: return "natural-log";
        case TransformKind::square_root: return "square-root";
        case TransformKind::reciprocal: return "reciprocal";
        case TransformKind::location_scale: return "per-location-scale";
    }
    return "unknown";
}

constexpr bool requires_positive_domain(TransformKind k) noexcept {
    return k == TransformKind::natural_log || k == TransformKind::square_root ||
           k == TransformKind::reciprocal;
}

/// A transform resolved for one location: per-location scales are already looked up.
class BoundTransform {
public:
    constexpr BoundTransform(TransformKind kind, double sigma_o = 1.0) : kind_(kind), sigma_o_(sigma_o) {}

    TransformKind kind() const noexcept { return kind_; }

    double value(double y) const {
        check(y);
        switch (kind_) {
            case TransformKind::identity: return y;
            case TransformKind::natural_log: return std::log(y);
            case TransformKind::square_root: return std::sqrt(y);
            case TransformKind::reciprocal: return 1.0 / y;
            case TransformKind::location_scale: return y / sigma_o_;
        }
        return y;
    }

    double inverse(double v) const {
        switch (kind_) {
            case TransformKind::identity: return v;
            case TransformKind::natural_log: return std::exp(v);
            case TransformKind::square_root: return v * v;
            case TransformKind::reciprocal: return 1.0 / v;
            case TransformKind::location_scale: return v * sigma_o_;
        }
        return v;
    }

    /// ln|v'(y)|; signs inside the derivative vanish under the absolute value.
    double log_abs_derivative(double y) const {
        check(y);
        switch (kind_) {
            case TransformKind::identity: return 0.0;
            case TransformKind::natural_log: return -std::log(y);
            case TransformKind::square_root: return -std::log(2.0 * std::sqrt(y));
            case TransformKind::reciprocal: return -2.0 * std::log(y);
            case TransformKind::location_scale: return -std::log(sigma_o_);
        }
        return 0.0;
    }

private:
    void check(double y) const {
        if (requires_positive_domain(kind_) && !(y > 0))
            detail::fail(ErrorCode::DomainViolation,
                         std::string(to_string(kind_)) + " transform needs y > 0, got " + std::to_string(y));
    }

    TransformKind kind_;
    double sigma_o_;
};

/// Transform descriptor. Per-location-scale transforms share ownership of the
/// location statistics they divide by.
class Transform {
public:
    static Transform identity() { return Transform(TransformKind::identity); }
    static Transform natural_log() { return Transform(TransformKind::natural_log); }
    static Transform square_root() { return Transform(TransformKind::square_root); }
    static Transform reciprocal() { return Transform(TransformKind::reciprocal); }
    static Transform location_scale(std::shared_ptr<const LocationStats> stats) {
        detail::require(stats != nullptr, ErrorCode::DomainViolation, "per-location-scale needs statistics");
        Transform t(TransformKind::location_scale);
        t.stats_ = std::move(stats);
        return t;
    }
    static Transform location_scale(LocationStats stats) {
        return location_scale(std::make_shared<const LocationStats>(std::move(stats)));
    }

    /// Builds a transform of the given kind; `stats` is only consulted for location_scale.
    static Transform of(TransformKind kind, std::shared_ptr<const LocationStats> stats = nullptr) {
        if (kind == TransformKind::location_scale) return location_scale(std::move(stats));
        return Transform(kind);
    }

    TransformKind kind() const noexcept { return kind_; }

    BoundTransform bind(std::string_view location) const {
        if (kind_ != TransformKind::location_scale) return BoundTransform(kind_);
        const double s = stats_->at(location).sigma_o;
        detail::require(s > 0, ErrorCode::DomainViolation,
                        "location '" + std::string(location) + "' has zero observed standard deviation");
        return BoundTransform(kind_, s);
    }

private:
    explicit Transform(TransformKind k) : kind_(k) {}

    TransformKind kind_;
    std::shared_ptr<const LocationStats> stats_;
};

/// Elementwise v(y) for values belonging to one location.
inline std::vector<double> apply(const Transform& t, std::span<const double> values,
                                 std::string_view location = {}) {
    const BoundTransform b = t.bind(location);
    std::vector<double> out;
    out.reserve(values.size());
    for (double y : values) out.push_back(b.value(y));
    return out;
}

/// Elementwise v(y) over a dataset's observed values, in flat order.
inline std::vector<double> apply_observed(const Transform& t, const Dataset& data) {
    std::vector<double> out;
    out.reserve(data.n_total());
    for (std::size_t l = 0; l < data.location_count(); ++l) {
        const auto s = data.series(l);
        const BoundTransform b = t.bind(s.location_id);
        for (double y : s.observed) out.push_back(b.value(y));
    }
    return out;
}

/// Sum of ln|v'(y_i)| in nats over observed values from one location.
inline double log_jacobian_sum(const Transform& t, std::span<const double> observed,
                               std::string_view location = {}) {
    const BoundTransform b = t.bind(location);
    if (t.kind() == TransformKind::identity) return 0.0;
    CompensatedSum s;
    for (double y : observed) s.add(b.log_abs_derivative(y));
    return s.value();
}

/// Sum of ln|v'(y_i)| over every observed value in a dataset, series by series.
inline double log_jacobian_sum(const Transform& t, const Dataset& data) {
    CompensatedSum s;
    for (std::size_t l = 0; l < data.location_count(); ++l) {
        const auto sv = data.series(l);
        const BoundTransform b = t.bind(sv.location_id);
        for (double y : sv.observed) s.add(b.log_abs_derivative(y));
    }
    return s.value();
}

}  // namespace objsel
