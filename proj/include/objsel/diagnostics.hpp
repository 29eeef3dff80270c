#pragma once

// Entropy convergence versus sample size, and location-wise entropy
// correlation across objectives.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "objsel/data.hpp"
#include "objsel/error.hpp"
#include "objsel/information.hpp"
#include "objsel/likelihoods.hpp"
#include "objsel/parallel.hpp"
#include "objsel/random.hpp"
#include "objsel/summation.hpp"

namespace objsel {

struct ConvergenceOptions {
    double threshold = kDefaultZeroThreshold;
    bool with_replacement = false;
    unsigned threads = 1;
    /// Per-location statistics for scale-normalized objectives; computed from the
    /// full dataset when absent so subsamples share one normalization.
    std::shared_ptr<const LocationStats> stats;
};

struct ConvergenceCurve {
    std::string objective;
    std::vector<std::size_t> sizes;
    std::vector<std::vector<double>> entropies;   // [size][replicate], bits
    double reference_bits = 0.0;
    std::vector<std::vector<double>> abs_errors;  // [size][replicate]

    double median_abs_error(std::size_t size_idx) const {
        auto v = abs_errors.at(size_idx);
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size() / 2;
        return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    }
};

/// In-sample entropy on seeded subsamples of each size. The reference is the mean
/// entropy over the five largest sizes (all sizes when fewer than five).
inline ConvergenceCurve convergence_curve(const Dataset& data, const ObjectiveSpec& spec,
                                          std::span<const std::size_t> sizes, std::size_t replicates,
                                          std::uint64_t seed, ConvergenceOptions opt = {}) {
    detail::require(!sizes.empty(), ErrorCode::InvalidArgument, "no sample sizes given");
    detail::require(replicates >= 1, ErrorCode::InvalidArgument, "replicates must be at least 1");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        detail::require(sizes[i] >= 1, ErrorCode::InvalidArgument, "sample sizes must be positive");
        detail::require(i == 0 || sizes[i] > sizes[i - 1], ErrorCode::InvalidArgument,
                        "sample sizes must be strictly increasing");
        detail::require(sizes[i] <= data.n_total(), ErrorCode::SizeExceedsData,
                        "sample size " + std::to_string(sizes[i]) + " exceeds " + std::to_string(data.n_total()) +
                            " available pairs");
    }
    if (!opt.stats && spec.transform == TransformKind::location_scale)
        opt.stats = std::make_shared<const LocationStats>(location_stats(data));

    ConvergenceCurve c;
    c.objective = spec.name;
    c.sizes.assign(sizes.begin(), sizes.end());
    c.entropies.assign(sizes.size(), std::vector<double>(replicates));

    parallel_for(sizes.size() * replicates, opt.threads, [&](std::size_t unit) {
        const std::size_t si = unit / replicates, r = unit % replicates;
        rng::Engine eng(rng::derive_seed(seed, si + 1, r + 1));
        auto idx = opt.with_replacement ? rng::sample_with_replacement(eng, data.n_total(), sizes[si])
                                        : rng::sample_without_replacement(eng, data.n_total(), sizes[si]);
        std::sort(idx.begin(), idx.end());
        const Dataset sub = data.subset(idx);
        const auto part = partition_zero_state(sub, opt.threshold);
        const auto fitted = evaluate_objective(spec, sub, part, opt.stats);
        c.entropies[si][r] = estimate_entropy(fitted).h_bits;
    });

    const std::size_t n_ref = std::min<std::size_t>(5, sizes.size());
    CompensatedSum ref;
    for (std::size_t si = sizes.size() - n_ref; si < sizes.size(); ++si)
        for (double h : c.entropies[si]) ref.add(h);
    c.reference_bits = ref.value() / static_cast<double>(n_ref * replicates);

    c.abs_errors = c.entropies;
    for (auto& row : c.abs_errors)
        for (double& h : row) h = std::fabs(h - c.reference_bits);
    return c;
}

/// Pearson correlation of two equally long samples.
inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size(), ErrorCode::LengthMismatch, "correlation inputs differ in length");
    detail::require(x.size() >= 2, ErrorCode::InvalidArgument, "correlation needs at least two points");
    const double n = static_cast<double>(x.size());
    const double mx = compensated_sum(x) / n, my = compensated_sum(y) / n;
    CompensatedSum sxy, sxx, syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    detail::require(sxx.value() > 0 && syy.value() > 0, ErrorCode::ZeroVariance, "a correlation input is constant");
    return std::clamp(sxy.value() / std::sqrt(sxx.value() * syy.value()), -1.0, 1.0);
}

using Cell = std::optional<double>;

/// Pairwise-complete correlation between columns. The diagonal is 1; pairs with
/// fewer than two shared rows or a constant column are left empty.
inline std::vector<std::vector<Cell>> correlation_matrix(const std::vector<std::vector<Cell>>& columns) {
    const std::size_t m = columns.size();
    std::vector<std::vector<Cell>> out(m, std::vector<Cell>(m));
    for (std::size_t a = 0; a < m; ++a) {
        out[a][a] = 1.0;
        for (std::size_t b = a + 1; b < m; ++b) {
            std::vector<double> x, y;
            const std::size_t rows = std::min(columns[a].size(), columns[b].size());
            for (std::size_t r = 0; r < rows; ++r) {
                if (columns[a][r] && columns[b][r]) {
                    x.push_back(*columns[a][r]);
                    y.push_back(*columns[b][r]);
                }
            }
            if (x.size() < 2) continue;
            try {
                out[a][b] = out[b][a] = pearson_correlation(x, y);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ZeroVariance) throw;
            }
        }
    }
    return out;
}

struct EntropyMatrix {
    std::vector<std::string> locations;
    std::vector<std::string> objectives;
    std::vector<std::vector<Cell>> cells;        // [location][objective], bits
    std::vector<std::vector<Cell>> correlation;  // [objective][objective]

    std::vector<Cell> column(std::size_t obj) const {
        std::vector<Cell> c;
        c.reserve(cells.size());
        for (const auto& row : cells) c.push_back(row[obj]);
        return c;
    }
};

/// Fits and scores every objective in-sample at each location on its own. Cells
/// whose fit fails, or that evaluate fewer than two pairs, stay empty.
inline EntropyMatrix per_location_entropy(const Dataset& data, std::span<const ObjectiveSpec> specs,
                                          double threshold = kDefaultZeroThreshold, unsigned threads = 1) {
    EntropyMatrix m;
    m.locations.assign(data.location_ids().begin(), data.location_ids().end());
    for (const auto& s : specs) m.objectives.push_back(s.name);
    m.cells.assign(data.location_count(), std::vector<Cell>(specs.size()));

    parallel_for(data.location_count(), threads, [&](std::size_t l) {
        const Dataset sub = data.location(l);
        const auto part = partition_zero_state(sub, threshold);
        const auto stats = std::make_shared<const LocationStats>(location_stats(sub));
        for (std::size_t j = 0; j < specs.size(); ++j) {
            try {
                const auto f = evaluate_objective(specs[j], sub, part, stats);
                if (f.n_eval >= 2 && !f.zero_likelihood()) m.cells[l][j] = estimate_entropy(f).h_bits;
            } catch (const Error&) {
            }
        }
    });

    std::vector<std::vector<Cell>> cols;
    for (std::size_t j = 0; j < specs.size(); ++j) cols.push_back(m.column(j));
    m.correlation = correlation_matrix(cols);
    return m;
}

}  // namespace objsel
