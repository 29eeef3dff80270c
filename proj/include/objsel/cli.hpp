#pragma once

// Subcommand implementations behind the `objsel` tool. Each run_* function
// validates its configuration, does the work and returns the serialized output,
// so the tool itself only handles argument parsing and writing.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "objsel/data.hpp"
#include "objsel/diagnostics.hpp"
#include "objsel/error.hpp"
#include "objsel/information.hpp"
#include "objsel/io.hpp"
#include "objsel/likelihoods.hpp"
#include "objsel/parallel.hpp"
#include "objsel/synthetic.hpp"

namespace objsel {

enum class OutputFormat { table, csv, json };

inline OutputFormat parse_format(std::string_view s) {
    if (s == "table") return OutputFormat::table;
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    detail::fail(ErrorCode::InvalidArgument, "unknown format '" + std::string(s) + "'; valid: table, csv, json");
}

inline EntropyBase parse_base(std::string_view s) {
    if (s == "bits" || s == "2") return EntropyBase::bits;
    if (s == "nats" || s == "e") return EntropyBase::nats;
    detail::fail(ErrorCode::InvalidArgument, "unknown entropy base '" + std::string(s) + "'; valid: bits, nats");
}

inline bool parse_on_off(std::string_view s) {
    if (s == "on") return true;
    if (s == "off") return false;
    detail::fail(ErrorCode::InvalidArgument, "expected on or off, got '" + std::string(s) + "'");
}

/// none | random:<frac> | location:<frac> | time:<frac>
inline SplitSpec parse_split(std::string_view s, std::uint64_t seed) {
    SplitSpec spec;
    spec.seed = seed;
    if (s == "none") return spec;
    const auto colon = s.find(':');
    detail::require(colon != std::string_view::npos, ErrorCode::InvalidSplit,
                    "split must be none, random:<frac>, location:<frac> or time:<frac>");
    const auto mode = s.substr(0, colon);
    if (mode == "random")
        spec.mode = SplitMode::random_fraction;
    else if (mode == "location")
        spec.mode = SplitMode::by_location;
    else if (mode == "time")
        spec.mode = SplitMode::by_time;
    else
        detail::fail(ErrorCode::InvalidSplit, "unknown split mode '" + std::string(mode) + "'");
    const auto frac = detail::parse_double(s.substr(colon + 1));
    detail::require(frac && *frac > 0 && *frac < 1, ErrorCode::InvalidSplit, "split fraction must lie in (0, 1)");
    spec.test_fraction = *frac;
    return spec;
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    for (auto f : detail::split_fields(s))
        if (!f.empty()) out.emplace_back(f);
    return out;
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

struct RunConfig {
    std::string input;
    double threshold = kDefaultZeroThreshold;
    std::vector<std::string> objectives{"all"};
    SplitSpec split;
    EntropyBase base = EntropyBase::bits;
    bool aic = true;
    OutputFormat format = OutputFormat::table;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: OBJSEL_THREADS or machine parallelism
    std::string from_entropies;  // debug path: "NAME=H,..." bypasses fitting
};

inline void validate_config(const RunConfig& cfg) {
    detail::require(cfg.threshold > 0 && std::isfinite(cfg.threshold), ErrorCode::InvalidArgument,
                    "threshold must be positive");
    detail::require(!cfg.input.empty() || !cfg.from_entropies.empty(), ErrorCode::InvalidArgument,
                    "an --input file is required");
    select_objectives(cfg.objectives);
}

/// Fits and scores each objective under the configured split, then ranks them.
/// Per-location statistics come from the full dataset, before splitting.
inline EntropyReport rank_dataset(const Dataset& data, const RunConfig& cfg) {
    const auto specs = select_objectives(cfg.objectives);
    const auto parts = split(data, cfg.split);
    const auto stats = std::make_shared<const LocationStats>(location_stats(data));
    const auto train_part = partition_zero_state(parts.train, cfg.threshold);
    const auto test_part = parts.in_sample ? train_part : partition_zero_state(parts.test, cfg.threshold);

    std::vector<EntropyEstimate> estimates(specs.size());
    parallel_for(specs.size(), resolve_thread_cap(cfg.threads), [&](std::size_t i) {
        try {
            const auto fitted =
                parts.in_sample ? evaluate_objective(specs[i], parts.train, train_part, stats)
                                : evaluate_objective(specs[i], parts.train, train_part, parts.test, test_part, stats);
            estimates[i] = estimate_entropy(fitted);
        } catch (const Error& e) {
            throw Error(e.code(), "objective " + specs[i].name + ": " + e.what());
        }
    });
    return rank_objectives(std::move(estimates), cfg.base, cfg.aic);
}

/// Entropies supplied directly as "NAME=H" pairs, or bare values in catalog order.
inline std::vector<EntropyEstimate> parse_entropies(std::string_view text) {
    std::vector<EntropyEstimate> out;
    const auto items = split_list(text);
    const auto& cat = objective_catalog();
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto eq = items[i].find('=');
        std::string name;
        std::string value;
        if (eq == std::string::npos) {
            detail::require(i < cat.size(), ErrorCode::InvalidArgument, "more entropies than catalog objectives");
            name = cat[i].name;
            value = items[i];
        } else {
            name = items[i].substr(0, eq);
            value = items[i].substr(eq + 1);
        }
        const auto& spec = find_objective(name);
        const auto h = detail::parse_double(value);
        detail::require(h.has_value(), ErrorCode::InvalidArgument, "cannot parse entropy '" + value + "'");
        EntropyEstimate e;
        e.objective = spec.name;
        e.description = spec.description;
        e.k = spec.k;
        e.h_bits = e.h_adj_bits = *h;
        out.push_back(std::move(e));
    }
    detail::require(!out.empty(), ErrorCode::InvalidArgument, "no entropies supplied");
    return out;
}

namespace detail {

inline std::string fixed2(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string pad(std::string s, std::size_t w, bool left = false) {
    if (s.size() >= w) return s;
    return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

inline nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline nlohmann::json json_cell(const std::optional<double>& v) { return v ? json_number(*v) : nlohmann::json(); }

inline std::string csv_cell(const std::optional<double>& v) { return v ? format_exact(*v) : std::string(); }

}  // namespace detail

inline std::string format_report(const EntropyReport& rep, OutputFormat fmt) {
    const double unit = bits_to(rep.base);
    const std::string u(to_string(rep.base));
    std::ostringstream os;
    switch (fmt) {
        case OutputFormat::table: {
            os << detail::pad("Objective", 10, true) << detail::pad("Description", 34, true) << detail::pad("k", 3)
               << detail::pad("H (" + u + ")", 12) << detail::pad("Weight", 8) << detail::pad("Rank", 6)
               << detail::pad("Noise", 7) << detail::pad("Excluded", 10) << '\n';
            for (const auto& r : rep.rows) {
                const auto& e = r.estimate;
                os << detail::pad(e.objective, 10, true) << detail::pad(e.description, 34, true)
                   << detail::pad(std::to_string(e.k), 3) << detail::pad(detail::fixed2(r.score_bits * unit), 12)
                   << detail::pad(detail::fixed2(r.weight), 8) << detail::pad(std::to_string(r.rank), 6)
                   << detail::pad(r.noise_fraction ? detail::fixed2(*r.noise_fraction) : "-", 7)
                   << detail::pad(std::to_string(e.n_excluded), 10) << '\n';
            }
            if (!rep.rows.empty() && rep.rows.front().estimate.n_eval > 0) {
                os << "# " << (rep.rows.front().estimate.in_sample ? "in-sample" : "out-of-sample") << " evaluation; "
                   << (rep.aic_adjusted ? "AIC-adjusted entropies" : "unadjusted entropies") << '\n';
            }
            break;
        }
        case OutputFormat::csv: {
            os << "objective,description,k,H_" << u << ",H_aic_" << u << ",weight,rank,noise_fraction,loglik_nats,"
               << "n_eval,excluded,clamped,in_sample\n";
            for (const auto& r : rep.rows) {
                const auto& e = r.estimate;
                os << e.objective << ',' << e.description << ',' << e.k << ',' << format_exact(e.h_bits * unit) << ','
                   << format_exact(e.h_adj_bits * unit) << ',' << format_exact(r.weight) << ',' << r.rank << ','
                   << detail::csv_cell(r.noise_fraction) << ',' << format_exact(e.loglik_nats) << ',' << e.n_eval
                   << ',' << e.n_excluded << ',' << e.n_clamped << ',' << (e.in_sample ? "true" : "false") << '\n';
            }
            break;
        }
        case OutputFormat::json: {
            nlohmann::json j;
            j["base"] = u;
            j["aic_adjusted"] = rep.aic_adjusted;
            j["rows"] = nlohmann::json::array();
            for (const auto& r : rep.rows) {
                const auto& e = r.estimate;
                j["rows"].push_back({{"objective", e.objective},
                                     {"description", e.description},
                                     {"k", e.k},
                                     {"H", detail::json_number(e.h_bits * unit)},
                                     {"H_aic", detail::json_number(e.h_adj_bits * unit)},
                                     {"weight", r.weight},
                                     {"rank", r.rank},
                                     {"noise_fraction", detail::json_cell(r.noise_fraction)},
                                     {"loglik_nats", detail::json_number(e.loglik_nats)},
                                     {"n_eval", e.n_eval},
                                     {"excluded", e.n_excluded},
                                     {"clamped", e.n_clamped},
                                     {"in_sample", e.in_sample}});
            }
            os << j.dump(2) << '\n';
            break;
        }
    }
    return os.str();
}

inline std::string run_rank(const RunConfig& cfg) {
    validate_config(cfg);
    if (!cfg.from_entropies.empty())
        return format_report(rank_objectives(parse_entropies(cfg.from_entropies), cfg.base, false), cfg.format);
    return format_report(rank_dataset(load_csv(cfg.input), cfg), cfg.format);
}

// ---------------------------------------------------------------------------
// convergence
// ---------------------------------------------------------------------------

struct ConvergenceConfig {
    std::string input;
    double threshold = kDefaultZeroThreshold;
    std::vector<std::string> objectives{"all"};
    std::vector<std::size_t> sizes;
    std::size_t replicates = 5;
    bool bootstrap = false;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::csv;
    unsigned threads = 0;
};

inline std::vector<ConvergenceCurve> convergence_curves(const Dataset& data, const ConvergenceConfig& cfg) {
    const auto specs = select_objectives(cfg.objectives);
    ConvergenceOptions opt;
    opt.threshold = cfg.threshold;
    opt.with_replacement = cfg.bootstrap;
    opt.threads = resolve_thread_cap(cfg.threads);
    opt.stats = std::make_shared<const LocationStats>(location_stats(data));
    std::vector<ConvergenceCurve> out;
    for (const auto& s : specs) {
        try {
            out.push_back(convergence_curve(data, s, cfg.sizes, cfg.replicates, cfg.seed, opt));
        } catch (const Error& e) {
            throw Error(e.code(), "objective " + s.name + ": " + e.what());
        }
    }
    return out;
}

inline std::string format_convergence(const std::vector<ConvergenceCurve>& curves, OutputFormat fmt) {
    std::ostringstream os;
    switch (fmt) {
        case OutputFormat::table:
            os << detail::pad("Objective", 10, true) << detail::pad("Size", 10) << detail::pad("Median |err|", 14)
               << detail::pad("Reference", 12) << '\n';
            for (const auto& c : curves)
                for (std::size_t i = 0; i < c.sizes.size(); ++i)
                    os << detail::pad(c.objective, 10, true) << detail::pad(std::to_string(c.sizes[i]), 10)
                       << detail::pad(detail::fixed2(c.median_abs_error(i)), 14)
                       << detail::pad(detail::fixed2(c.reference_bits), 12) << '\n';
            break;
        case OutputFormat::csv:
            os << "objective,size,replicate,H_bits,abs_error,reference_bits\n";
            for (const auto& c : curves)
                for (std::size_t i = 0; i < c.sizes.size(); ++i)
                    for (std::size_t r = 0; r < c.entropies[i].size(); ++r)
                        os << c.objective << ',' << c.sizes[i] << ',' << r << ',' << format_exact(c.entropies[i][r])
                           << ',' << format_exact(c.abs_errors[i][r]) << ',' << format_exact(c.reference_bits) << '\n';
            break;
        case OutputFormat::json: {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& c : curves)
                j.push_back({{"objective", c.objective},
                             {"sizes", c.sizes},
                             {"entropies_bits", c.entropies},
                             {"reference_bits", c.reference_bits},
                             {"abs_errors", c.abs_errors}});
            os << j.dump(2) << '\n';
            break;
        }
    }
    return os.str();
}

inline std::string run_convergence(const ConvergenceConfig& cfg) {
    detail::require(!cfg.input.empty(), ErrorCode::InvalidArgument, "an --input file is required");
    detail::require(!cfg.sizes.empty(), ErrorCode::InvalidArgument, "--sizes is required");
    select_objectives(cfg.objectives);
    return format_convergence(convergence_curves(load_csv(cfg.input), cfg), cfg.format);
}

// ---------------------------------------------------------------------------
// correlate
// ---------------------------------------------------------------------------

struct CorrelateConfig {
    std::string input;
    double threshold = kDefaultZeroThreshold;
    std::vector<std::string> objectives{"all"};
    bool cells = false;  // emit the per-location entropy matrix instead of correlations
    OutputFormat format = OutputFormat::csv;
    unsigned threads = 0;
};

inline std::string format_entropy_matrix(const EntropyMatrix& m, OutputFormat fmt, bool cells) {
    std::ostringstream os;
    const std::size_t k = m.objectives.size();
    switch (fmt) {
        case OutputFormat::table:
            if (cells) {
                os << detail::pad("Location", 12, true);
                for (const auto& o : m.objectives) os << detail::pad(o, 8);
                os << '\n';
                for (std::size_t l = 0; l < m.locations.size(); ++l) {
                    os << detail::pad(m.locations[l], 12, true);
                    for (const auto& c : m.cells[l]) os << detail::pad(c ? detail::fixed2(*c) : "-", 8);
                    os << '\n';
                }
            } else {
                os << detail::pad("", 8, true);
                for (const auto& o : m.objectives) os << detail::pad(o, 8);
                os << '\n';
                for (std::size_t a = 0; a < k; ++a) {
                    os << detail::pad(m.objectives[a], 8, true);
                    for (const auto& c : m.correlation[a]) os << detail::pad(c ? detail::fixed2(*c) : "-", 8);
                    os << '\n';
                }
            }
            break;
        case OutputFormat::csv:
            if (cells) {
                os << "location_id,objective,H_bits\n";
                for (std::size_t l = 0; l < m.locations.size(); ++l)
                    for (std::size_t j = 0; j < k; ++j)
                        os << m.locations[l] << ',' << m.objectives[j] << ',' << detail::csv_cell(m.cells[l][j]) << '\n';
            } else {
                os << "objective_a,objective_b,correlation\n";
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b)
                        os << m.objectives[a] << ',' << m.objectives[b] << ','
                           << detail::csv_cell(m.correlation[a][b]) << '\n';
            }
            break;
        case OutputFormat::json: {
            nlohmann::json j;
            j["objectives"] = m.objectives;
            j["locations"] = m.locations;
            auto grid = [](const std::vector<std::vector<Cell>>& g) {
                nlohmann::json out = nlohmann::json::array();
                for (const auto& row : g) {
                    nlohmann::json r = nlohmann::json::array();
                    for (const auto& c : row) r.push_back(detail::json_cell(c));
                    out.push_back(r);
                }
                return out;
            };
            j["correlation"] = grid(m.correlation);
            j["entropy_bits"] = grid(m.cells);
            os << j.dump(2) << '\n';
            break;
        }
    }
    return os.str();
}

inline std::string run_correlate(const CorrelateConfig& cfg) {
    detail::require(!cfg.input.empty(), ErrorCode::InvalidArgument, "an --input file is required");
    const auto specs = select_objectives(cfg.objectives);
    detail::require(specs.size() >= 2, ErrorCode::NeedTwoObjectives,
                    "correlation compares objectives; select at least two");
    const auto data = load_csv(cfg.input);
    return format_entropy_matrix(per_location_entropy(data, specs, cfg.threshold, resolve_thread_cap(cfg.threads)),
                                 cfg.format, cfg.cells);
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

inline std::string run_synth(const SyntheticModel& model) { return to_csv(generate(model).dataset); }

// ---------------------------------------------------------------------------
// adjust
// ---------------------------------------------------------------------------

struct AdjustConfig {
    double median = 0.0;
    double sigma = 0.0;
    double coverage = 0.95;
    OutputFormat format = OutputFormat::table;
};

inline std::string run_adjust(const AdjustConfig& cfg) {
    const auto a = adjust_prediction(cfg.median, cfg.sigma, cfg.coverage);
    const double z = coverage_z(cfg.coverage);
    std::ostringstream os;
    switch (cfg.format) {
        case OutputFormat::table: {
            char buf[512];
            std::snprintf(buf, sizeof buf,
                          "median        %.4f\nsigma         %.4f\ncoverage      %.4f\nz             %.4f\n"
                          "expectation   %.4f\nmultiplicative [%.4f, %.4f]\nadditive       [%.4f, %.4f]\n",
                          a.median, a.sigma, a.coverage, z, a.expectation, a.multiplicative.low,
                          a.multiplicative.high, a.additive.low, a.additive.high);
            os << buf;
            break;
        }
        case OutputFormat::csv:
            os << "median,sigma,coverage,z,expectation,mult_low,mult_high,add_low,add_high\n"
               << format_exact(a.median) << ',' << format_exact(a.sigma) << ',' << format_exact(a.coverage) << ','
               << format_exact(z) << ',' << format_exact(a.expectation) << ',' << format_exact(a.multiplicative.low)
               << ',' << format_exact(a.multiplicative.high) << ',' << format_exact(a.additive.low) << ','
               << format_exact(a.additive.high) << '\n';
            break;
        case OutputFormat::json: {
            nlohmann::json j{{"median", a.median},
                             {"sigma", a.sigma},
                             {"coverage", a.coverage},
                             {"z", z},
                             {"expectation", a.expectation},
                             {"multiplicative", {{"low", a.multiplicative.low}, {"high", a.multiplicative.high}}},
                             {"additive", {{"low", a.additive.low}, {"high", a.additive.high}}}};
            os << j.dump(2) << '\n';
            break;
        }
    }
    return os.str();
}

}  // namespace objsel
