// objsel: rank objective functions by conditional entropy.
//
//   objsel rank        --input data.csv [--objectives all] [--split none|random:F|location:F|time:F]
//   objsel convergence --input data.csv --sizes 100,1000,10000 [--replicates 5]
//   objsel correlate   --input data.csv [--objectives all] [--cells]
//   objsel synth       --family loglaplace --scale 0.5 --n 1000 --seed 1 --out synth.csv
//   objsel adjust      --median 10 --sigma 0.5 [--coverage 0.95]
//
// Exit codes: 0 success, 1 usage error, 2 data or domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "objsel/cli.hpp"

namespace {

int write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return 2;
    }
    out << text;
    return out.good() ? 0 : 2;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : objsel::split_list(text)) {
        const auto v = objsel::detail::parse_double(item);
        objsel::detail::require(v && *v >= 1 && *v == static_cast<double>(static_cast<std::size_t>(*v)),
                                objsel::ErrorCode::InvalidArgument, "invalid sample size '" + item + "'");
        out.push_back(static_cast<std::size_t>(*v));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Select objective functions by conditional entropy (bits per observation)"};
    app.require_subcommand(1);

    std::string input, out_path, objectives = "all", split = "none", base = "bits", aic = "on", format;
    double threshold = objsel::kDefaultZeroThreshold;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    const auto add_common = [&](CLI::App* sub, bool with_input) {
        if (with_input) {
            sub->add_option("--input", input, "CSV with location_id,observed,predicted[,timestamp]");
            sub->add_option("--threshold", threshold, "zero-state threshold in flow units")
                ->capture_default_str();
            sub->add_option("--objectives", objectives, "comma-separated catalog names, or all")
                ->capture_default_str();
            sub->add_option("--threads", threads, "worker cap (default: $OBJSEL_THREADS or all cores)");
        }
        sub->add_option("--format", format, "table, csv or json");
        sub->add_option("--out", out_path, "output file (default stdout)");
    };

    auto* rank = app.add_subcommand("rank", "rank objectives by conditional entropy and Akaike weight");
    add_common(rank, true);
    std::string from_entropies;
    rank->add_option("--split", split, "none, random:<frac>, location:<frac> or time:<frac>")->capture_default_str();
    rank->add_option("--seed", seed, "split seed")->capture_default_str();
    rank->add_option("--base", base, "bits or nats")->capture_default_str();
    rank->add_option("--aic", aic, "AIC adjustment on or off")->capture_default_str();
    rank->add_option("--from-entropies", from_entropies, "debug: rank given entropies NAME=H,... instead of fitting");

    auto* conv = app.add_subcommand("convergence", "entropy error versus sample size");
    add_common(conv, true);
    std::string sizes;
    std::size_t replicates = 5;
    bool bootstrap = false;
    conv->add_option("--sizes", sizes, "comma-separated increasing sample sizes")->required();
    conv->add_option("--replicates", replicates, "subsamples per size")->capture_default_str();
    conv->add_option("--seed", seed, "subsampling seed")->capture_default_str();
    conv->add_flag("--bootstrap", bootstrap, "sample with replacement");

    auto* corr = app.add_subcommand("correlate", "location-wise entropy correlation between objectives");
    add_common(corr, true);
    bool cells = false;
    corr->add_flag("--cells", cells, "emit the per-location entropy matrix");

    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset with a known error family");
    add_common(synth, false);
    objsel::SyntheticModel model;
    std::string family = "normal";
    synth->add_option("--family", family, "normal, laplace, lognormal or loglaplace")->capture_default_str();
    synth->add_option("--scale", model.scale, "error scale")->capture_default_str();
    synth->add_option("--zero-rate", model.zero_rate, "chance of zeroing observed, and independently predicted")
        ->capture_default_str();
    synth->add_option("--median", model.base_median, "base-flow median")->capture_default_str();
    synth->add_option("--log-sigma", model.base_log_sigma, "base-flow log-scale")->capture_default_str();
    synth->add_option("--location-spread", model.location_spread, "log-scale spread of location medians")
        ->capture_default_str();
    synth->add_option("--n", model.n_per_location, "pairs per location")->capture_default_str();
    synth->add_option("--locations", model.locations, "number of locations")->capture_default_str();
    synth->add_option("--seed", model.seed, "generator seed")->capture_default_str();

    auto* adjust = app.add_subcommand("adjust", "expectation and prediction interval from a logged objective");
    add_common(adjust, false);
    objsel::AdjustConfig adj;
    adjust->add_option("--median", adj.median, "median prediction")->required();
    adjust->add_option("--sigma", adj.sigma, "log-scale sigma")->required();
    adjust->add_option("--coverage", adj.coverage, "central coverage level")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        std::string text;
        if (*rank) {
            objsel::RunConfig cfg;
            cfg.input = input;
            cfg.threshold = threshold;
            cfg.objectives = objsel::split_list(objectives);
            cfg.seed = seed;
            cfg.split = objsel::parse_split(split, seed);
            cfg.base = objsel::parse_base(base);
            cfg.aic = objsel::parse_on_off(aic);
            cfg.format = objsel::parse_format(format.empty() ? "table" : format);
            cfg.threads = threads;
            cfg.from_entropies = from_entropies;
            text = objsel::run_rank(cfg);
        } else if (*conv) {
            objsel::ConvergenceConfig cfg;
            cfg.input = input;
            cfg.threshold = threshold;
            cfg.objectives = objsel::split_list(objectives);
            cfg.sizes = parse_sizes(sizes);
            cfg.replicates = replicates;
            cfg.bootstrap = bootstrap;
            cfg.seed = seed;
            cfg.format = objsel::parse_format(format.empty() ? "csv" : format);
            cfg.threads = threads;
            text = objsel::run_convergence(cfg);
        } else if (*corr) {
            objsel::CorrelateConfig cfg;
            cfg.input = input;
            cfg.threshold = threshold;
            cfg.objectives = objsel::split_list(objectives);
            cfg.cells = cells;
            cfg.format = objsel::parse_format(format.empty() ? "csv" : format);
            cfg.threads = threads;
            text = objsel::run_correlate(cfg);
        } else if (*synth) {
            model.family = objsel::parse_error_family(family);
            text = objsel::run_synth(model);
        } else if (*adjust) {
            adj.format = objsel::parse_format(format.empty() ? "table" : format);
            text = objsel::run_adjust(adj);
        }
        return write_output(text, out_path);
    } catch (const objsel::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return objsel::is_usage_error(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
