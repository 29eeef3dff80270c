#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "objsel/information.hpp"
#include "objsel/synthetic.hpp"

using namespace objsel;
using Catch::Approx;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& err) {
        return err.code();
    }
    FAIL("expected objsel::Error");
    return ErrorCode::InvalidArgument;
}

std::string best_in_sample(const Dataset& d) {
    const auto part = partition_zero_state(d, kDefaultZeroThreshold);
    const auto stats = std::make_shared<const LocationStats>(location_stats(d));
    std::vector<EntropyEstimate> est;
    for (const auto& spec : objective_catalog()) est.push_back(estimate_entropy(evaluate_objective(spec, d, part, stats)));
    return rank_objectives(est).rows.front().estimate.objective;
}

}  // namespace

TEST_CASE("analytic entropy examples", "[synthetic]") {
    CHECK(analytic_entropy(BaseFamily::normal, 1.0) == Approx(2.0471).margin(5e-5));
    CHECK(analytic_entropy(BaseFamily::laplace, 1.0) == Approx(2.4427).margin(5e-5));
    CHECK(analytic_entropy(BaseFamily::uniform, 0.5) == Approx(0.0).margin(1e-15));
    CHECK(code_of([] { analytic_entropy(BaseFamily::normal, 0.0); }) == ErrorCode::NonPositiveScale);
}

TEST_CASE("additive-normal residual spread matches sigma", "[synthetic][montecarlo]") {
    SyntheticModel m;
    m.n_per_location = 20'000;
    m.seed = 12;
    const auto d = generate(m).dataset;
    double ss = 0;
    for (std::size_t i = 0; i < d.n_total(); ++i) {
        const double r = d.observed()[i] - d.predicted()[i];
        ss += r * r;
    }
    const double sd = std::sqrt(ss / d.n_total());
    // standard error of the sample standard deviation is sigma / sqrt(2n)
    CHECK(std::fabs(sd - 1.0) <= 3.0 / std::sqrt(2.0 * d.n_total()));
}

TEST_CASE("the generator's matching objective wins", "[synthetic][montecarlo]") {
    SyntheticModel m;
    m.family = ErrorFamily::multiplicative_log_laplace;
    m.scale = 0.5;
    m.n_per_location = 5000;
    m.seed = 21;
    const auto plain = generate(m);
    CHECK(plain.truth.optimal_objective == "MALE");
    CHECK(best_in_sample(plain.dataset) == "MALE");

    m.zero_rate = 0.02;
    const auto inflated = generate(m);
    CHECK(inflated.truth.optimal_objective == "ZMALE");
    CHECK(best_in_sample(inflated.dataset) == "ZMALE");

    m.family = ErrorFamily::multiplicative_lognormal;
    m.zero_rate = 0.0;
    CHECK(best_in_sample(generate(m).dataset) == "MSLE");
}

TEST_CASE("zero inflation populates every zero-state cell", "[synthetic]") {
    SyntheticModel m;
    m.family = ErrorFamily::multiplicative_lognormal;
    m.zero_rate = 0.3;
    m.n_per_location = 2000;
    m.seed = 5;
    const auto p = partition_zero_state(generate(m).dataset, kDefaultZeroThreshold);
    CHECK(p.n1() > 0);
    CHECK(p.n2() > 0);
    CHECK(p.n3() > 0);
    CHECK_FALSE(p.clamped.empty());
}

TEST_CASE("generation is seed-deterministic", "[synthetic][property]") {
    SyntheticModel m;
    m.family = ErrorFamily::multiplicative_log_laplace;
    m.zero_rate = 0.1;
    m.locations = 4;
    m.location_spread = 1.0;
    m.n_per_location = 300;
    m.seed = 99;
    CHECK(generate(m).dataset == generate(m).dataset);
    auto other = m;
    other.seed = 100;
    CHECK_FALSE(generate(other).dataset == generate(m).dataset);
    CHECK(generate(m).dataset.location_ids()[3] == "L4");
}

TEST_CASE("invalid models are rejected", "[synthetic]") {
    SyntheticModel m;
    m.scale = 0;
    CHECK(code_of([&] { generate(m); }) == ErrorCode::InvalidModel);
    m = {};
    m.zero_rate = 1.0;
    CHECK(code_of([&] { generate(m); }) == ErrorCode::InvalidModel);
    m = {};
    m.n_per_location = 0;
    CHECK(code_of([&] { generate(m); }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { parse_error_family("gamma"); }) == ErrorCode::InvalidArgument);
    CHECK(parse_error_family("loglaplace") == ErrorFamily::multiplicative_log_laplace);
}
