#pragma once

// Observed/predicted evidence: validated datasets, zero-state partitioning,
// per-location statistics and train/test splitting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "objsel/error.hpp"
#include "objsel/random.hpp"
#include "objsel/summation.hpp"

namespace objsel {

/// Default zero-flow threshold in m^3/s (0.01 ft^3/s).
inline constexpr double kDefaultZeroThreshold = 0.0028;

/// Raw input for one location. `timestamps` is either empty or parallel to the values.
struct PairedSeries {
    std::string location_id;
    std::vector<double> observed;
    std::vector<double> predicted;
    std::vector<std::string> timestamps;
};

struct SeriesView {
    std::string_view location_id;
    std::size_t offset = 0;  // flat index of the first pair
    std::span<const double> observed;
    std::span<const double> predicted;
};

/// Immutable, validated collection of paired series. Pairs are addressed by a flat
/// index running over the series in insertion order.
class Dataset {
public:
    Dataset() = default;

    std::size_t n_total() const noexcept { return observed_.size(); }
    std::size_t location_count() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return observed_.empty(); }
    bool has_timestamps() const noexcept { return !timestamps_.empty(); }

    std::span<const double> observed() const noexcept { return observed_; }
    std::span<const double> predicted() const noexcept { return predicted_; }
    std::span<const std::string> timestamps() const noexcept { return timestamps_; }
    std::span<const std::string> location_ids() const noexcept { return ids_; }

    SeriesView series(std::size_t loc) const {
        const std::size_t b = offsets_[loc], e = offsets_[loc + 1];
        return {ids_[loc], b, std::span(observed_).subspan(b, e - b),
                std::span(predicted_).subspan(b, e - b)};
    }

    /// Location index owning flat index `i`.
    std::size_t location_of(std::size_t i) const {
        auto it = std::upper_bound(offsets_.begin(), offsets_.end(), i);
        return static_cast<std::size_t>(it - offsets_.begin()) - 1;
    }

    /// Pairs at the given ascending flat indices, keeping location grouping and order.
    /// Locations left without pairs are dropped.
    Dataset subset(std::span<const std::size_t> sorted_indices) const {
        Dataset out;
        out.observed_.reserve(sorted_indices.size());
        out.predicted_.reserve(sorted_indices.size());
        std::size_t loc = 0;
        bool open = false;
        for (std::size_t i : sorted_indices) {
            const std::size_t l = location_of(i);
            if (!open || l != loc) {
                if (open) out.offsets_.push_back(out.observed_.size());
                out.ids_.push_back(ids_[l]);
                loc = l;
                open = true;
            }
            out.observed_.push_back(observed_[i]);
            out.predicted_.push_back(predicted_[i]);
            if (has_timestamps()) out.timestamps_.push_back(timestamps_[i]);
        }
        if (open) out.offsets_.push_back(out.observed_.size());
        return out;
    }

    /// Dataset holding a single location.
    Dataset location(std::size_t loc) const {
        std::vector<std::size_t> idx(offsets_[loc + 1] - offsets_[loc]);
        std::iota(idx.begin(), idx.end(), offsets_[loc]);
        return subset(idx);
    }

    std::vector<PairedSeries> to_series() const {
        std::vector<PairedSeries> out;
        out.reserve(ids_.size());
        for (std::size_t l = 0; l < ids_.size(); ++l) {
            const auto b = static_cast<std::ptrdiff_t>(offsets_[l]);
            const auto e = static_cast<std::ptrdiff_t>(offsets_[l + 1]);
            PairedSeries s{ids_[l], {observed_.begin() + b, observed_.begin() + e},
                           {predicted_.begin() + b, predicted_.begin() + e}, {}};
            if (has_timestamps()) s.timestamps.assign(timestamps_.begin() + b, timestamps_.begin() + e);
            out.push_back(std::move(s));
        }
        return out;
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    friend Dataset validate_dataset(std::vector<PairedSeries> raw);

    std::vector<std::string> ids_;
    std::vector<std::size_t> offsets_{0};
    std::vector<double> observed_;
    std::vector<double> predicted_;
    std::vector<std::string> timestamps_;  // empty unless every series carries them
};

inline Dataset validate_dataset(std::vector<PairedSeries> raw) {
    detail::require(!raw.empty(), ErrorCode::EmptyInput, "no series supplied");
    Dataset d;
    std::unordered_set<std::string> seen;
    bool all_timestamps = true;
    for (const auto& s : raw) {
        detail::require(seen.insert(s.location_id).second, ErrorCode::DuplicateLocation,
                        "location '" + s.location_id + "' appears more than once");
        detail::require(s.observed.size() == s.predicted.size(), ErrorCode::LengthMismatch,
                        "location '" + s.location_id + "' has " + std::to_string(s.observed.size()) +
                            " observed and " + std::to_string(s.predicted.size()) + " predicted values");
        detail::require(!s.observed.empty(), ErrorCode::EmptyInput,
                        "location '" + s.location_id + "' has no pairs");
        detail::require(s.timestamps.empty() || s.timestamps.size() == s.observed.size(),
                        ErrorCode::LengthMismatch,
                        "location '" + s.location_id + "' has a partial timestamp column");
        for (std::size_t i = 0; i < s.observed.size(); ++i) {
            detail::require(std::isfinite(s.observed[i]) && std::isfinite(s.predicted[i]),
                            ErrorCode::NonFiniteValue,
                            "location '" + s.location_id + "' pair " + std::to_string(i) + " is not finite");
        }
        all_timestamps = all_timestamps && !s.timestamps.empty();
    }
    for (auto& s : raw) {
        d.ids_.push_back(std::move(s.location_id));
        d.observed_.insert(d.observed_.end(), s.observed.begin(), s.observed.end());
        d.predicted_.insert(d.predicted_.end(), s.predicted.begin(), s.predicted.end());
        if (all_timestamps)
            d.timestamps_.insert(d.timestamps_.end(), std::make_move_iterator(s.timestamps.begin()),
                                 std::make_move_iterator(s.timestamps.end()));
        d.offsets_.push_back(d.observed_.size());
    }
    return d;
}

// ---------------------------------------------------------------------------
// Zero-state partition
// ---------------------------------------------------------------------------

/// Index sets over a dataset's flat indices, each ascending.
///   zero_correct   (n1): observed <= threshold, predicted <= threshold
///   zero_incorrect (n2): observed <= threshold, predicted >  threshold
///   positive       (n3): observed >  threshold
/// `clamped` lists the members of n3 whose prediction is at or below the threshold.
struct ZeroPartition {
    double threshold = kDefaultZeroThreshold;
    std::vector<std::size_t> zero_correct;
    std::vector<std::size_t> zero_incorrect;
    std::vector<std::size_t> positive;
    std::vector<std::size_t> clamped;

    std::size_t n1() const noexcept { return zero_correct.size(); }
    std::size_t n2() const noexcept { return zero_incorrect.size(); }
    std::size_t n3() const noexcept { return positive.size(); }
    std::size_t zero_state() const noexcept { return n1() + n2(); }
};

inline ZeroPartition partition_zero_state(const Dataset& data, double threshold) {
    detail::require(threshold > 0 && std::isfinite(threshold), ErrorCode::NonPositiveThreshold,
                    "zero-state threshold must be positive, got " + std::to_string(threshold));
    ZeroPartition p;
    p.threshold = threshold;
    const auto obs = data.observed();
    const auto pred = data.predicted();
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i] <= threshold) {
            (pred[i] <= threshold ? p.zero_correct : p.zero_incorrect).push_back(i);
        } else {
            p.positive.push_back(i);
            if (pred[i] <= threshold) p.clamped.push_back(i);
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Per-location statistics
// ---------------------------------------------------------------------------

struct LocationMoments {
    double mean = 0.0;
    double sigma_o = 0.0;  // population standard deviation of observed
    std::size_t count = 0;
};

class LocationStats {
public:
    using Map = std::map<std::string, LocationMoments, std::less<>>;

    LocationStats() = default;
    explicit LocationStats(Map m) : by_location_(std::move(m)) {}

    const LocationMoments& at(std::string_view loc) const {
        auto it = by_location_.find(loc);
        detail::require(it != by_location_.end(), ErrorCode::DomainViolation,
                        "no statistics for location '" + std::string(loc) + "'");
        return it->second;
    }
    bool contains(std::string_view loc) const { return by_location_.find(loc) != by_location_.end(); }
    const Map& entries() const noexcept { return by_location_; }
    std::size_t size() const noexcept { return by_location_.size(); }

private:
    Map by_location_;
};

inline LocationMoments moments_of(std::span<const double> values) {
    LocationMoments m;
    m.count = values.size();
    if (values.empty()) return m;
    const double n = static_cast<double>(values.size());
    m.mean = compensated_sum(values) / n;
    CompensatedSum ss;
    for (double v : values) ss.add((v - m.mean) * (v - m.mean));
    m.sigma_o = std::sqrt(ss.value() / n);
    return m;
}

inline LocationStats location_stats(const Dataset& data) {
    LocationStats::Map m;
    for (std::size_t l = 0; l < data.location_count(); ++l) {
        const auto s = data.series(l);
        m.emplace(std::string(s.location_id), moments_of(s.observed));
    }
    return LocationStats(std::move(m));
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

enum class SplitMode { none, random_fraction, by_location, by_time };

struct SplitSpec {
    SplitMode mode = SplitMode::none;
    double test_fraction = 0.0;
    std::uint64_t seed = 0;
};

struct SplitResult {
    Dataset train;
    Dataset test;
    bool in_sample = false;
};

namespace detail {

inline std::size_t rounded_share(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

inline SplitResult split_by_mask(const Dataset& data, const std::vector<bool>& is_test) {
    std::vector<std::size_t> tr, te;
    for (std::size_t i = 0; i < is_test.size(); ++i) (is_test[i] ? te : tr).push_back(i);
    require(!tr.empty() && !te.empty(), ErrorCode::DegenerateSplit,
            "split leaves " + std::to_string(tr.size()) + " train and " + std::to_string(te.size()) +
                " test pairs");
    return {data.subset(tr), data.subset(te), false};
}

}  // namespace detail

inline SplitResult split(const Dataset& data, const SplitSpec& spec) {
    if (spec.mode == SplitMode::none) return {data, data, true};

    detail::require(spec.test_fraction > 0 && spec.test_fraction < 1, ErrorCode::InvalidSplit,
                    "test fraction must lie in (0, 1), got " + std::to_string(spec.test_fraction));
    rng::Engine eng(rng::derive_seed(spec.seed, static_cast<std::uint64_t>(spec.mode)));
    const std::size_t n = data.n_total();
    std::vector<bool> is_test(n, false);

    switch (spec.mode) {
        case SplitMode::random_fraction: {
            const std::size_t k = detail::rounded_share(spec.test_fraction, n);
            detail::require(k >= 1 && k < n, ErrorCode::DegenerateSplit,
                            "test fraction " + std::to_string(spec.test_fraction) + " of " +
                                std::to_string(n) + " pairs leaves an empty partition");
            for (std::size_t i : rng::sample_without_replacement(eng, n, k)) is_test[i] = true;
            break;
        }
        case SplitMode::by_location: {
            const std::size_t nl = data.location_count();
            const std::size_t k = detail::rounded_share(spec.test_fraction, nl);
            detail::require(k >= 1 && k < nl, ErrorCode::DegenerateSplit,
                            "test fraction " + std::to_string(spec.test_fraction) + " of " +
                                std::to_string(nl) + " locations leaves an empty partition");
            for (std::size_t l : rng::sample_without_replacement(eng, nl, k)) {
                const auto s = data.series(l);
                for (std::size_t i = 0; i < s.observed.size(); ++i) is_test[s.offset + i] = true;
            }
            break;
        }
        case SplitMode::by_time: {
            detail::require(data.has_timestamps(), ErrorCode::MissingTimestamp,
                            "time split requires a timestamp column");
            const auto ts = data.timestamps();
            // Latest fraction of each location's record is held out.
            for (std::size_t l = 0; l < data.location_count(); ++l) {
                const auto s = data.series(l);
                std::vector<std::size_t> order(s.observed.size());
                std::iota(order.begin(), order.end(), s.offset);
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
                const std::size_t k = detail::rounded_share(spec.test_fraction, order.size());
                for (std::size_t j = order.size() - k; j < order.size(); ++j) is_test[order[j]] = true;
            }
            break;
        }
        case SplitMode::none:
            break;
    }
    return detail::split_by_mask(data, is_test);
}

}  // namespace objsel
