#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "objsel/likelihoods.hpp"
#include "objsel/random.hpp"
#include "objsel/transforms.hpp"

using namespace objsel;
using Catch::Approx;

namespace {

constexpr double e = std::numbers::e;

std::shared_ptr<const LocationStats> stats_with_sigma(double sigma) {
    LocationStats::Map m;
    m["A"] = LocationMoments{0.0, sigma, 2};
    return std::make_shared<const LocationStats>(std::move(m));
}

// log-density of a lognormal with log-median mu and log-scale sigma
double lognormal_logpdf(double y, double mu, double sigma) {
    const double z = (std::log(y) - mu) / sigma;
    return -std::log(y * sigma * std::sqrt(2.0 * std::numbers::pi)) - 0.5 * z * z;
}

}  // namespace

TEST_CASE("apply examples", "[transforms]") {
    const auto logged = objsel::apply(Transform::natural_log(), std::vector<double>{1, e, e * e});
    CHECK(logged[0] == Approx(0.0).margin(1e-15));
    CHECK(logged[1] == Approx(1.0));
    CHECK(logged[2] == Approx(2.0));
    CHECK(objsel::apply(Transform::square_root(), std::vector<double>{4})[0] == 2.0);
    CHECK(objsel::apply(Transform::reciprocal(), std::vector<double>{4})[0] == 0.25);
    const auto scaled = objsel::apply(Transform::location_scale(stats_with_sigma(2.0)), std::vector<double>{2, 4}, "A");
    CHECK(scaled == std::vector<double>{1, 2});
    CHECK(objsel::apply(Transform::identity(), std::vector<double>{-3})[0] == -3.0);
}

TEST_CASE("apply rejects values outside the domain", "[transforms]") {
    for (auto t : {Transform::natural_log(), Transform::square_root(), Transform::reciprocal()}) {
        CHECK_THROWS_AS(objsel::apply(t, std::vector<double>{0.0}), Error);
        CHECK_THROWS_AS(objsel::apply(t, std::vector<double>{-1.0}), Error);
    }
    try {
        objsel::apply(Transform::location_scale(stats_with_sigma(0.0)), std::vector<double>{1}, "A");
        FAIL("zero sigma accepted");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::DomainViolation);
    }
}

TEST_CASE("log_jacobian_sum examples", "[transforms]") {
    CHECK(log_jacobian_sum(Transform::natural_log(), std::vector<double>{1, e, e * e}) == Approx(-3.0));
    CHECK(log_jacobian_sum(Transform::square_root(), std::vector<double>{4}) == Approx(-1.3862943611).epsilon(1e-10));
    CHECK(log_jacobian_sum(Transform::identity(), std::vector<double>{-5, 0, 7}) == 0.0);
    CHECK(log_jacobian_sum(Transform::reciprocal(), std::vector<double>{e}) == Approx(-2.0));
    CHECK(log_jacobian_sum(Transform::location_scale(stats_with_sigma(2.0)), std::vector<double>{1, 9}, "A") ==
          Approx(-2.0 * std::log(2.0)));
}

TEST_CASE("normal likelihood on logs plus Jacobian equals the lognormal density sum", "[transforms][property]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        rng::Engine eng(seed);
        const double sigma = 0.2 + rng::uniform_open(eng);
        std::vector<double> y, yhat, r;
        for (int i = 0; i < 500; ++i) {
            const double pred = std::exp(2.0 * rng::standard_normal(eng));
            const double obs = pred * std::exp(sigma * rng::standard_normal(eng));
            y.push_back(obs);
            yhat.push_back(pred);
            r.push_back(std::log(obs) - std::log(pred));
        }
        const double via_transform =
            loglik_normal(r, sigma) + log_jacobian_sum(Transform::natural_log(), y);
        double oracle = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) oracle += lognormal_logpdf(y[i], std::log(yhat[i]), sigma);
        REQUIRE(via_transform == Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("inverse recovers inputs", "[transforms][property]") {
    rng::Engine eng(7);
    for (auto kind : {TransformKind::identity, TransformKind::natural_log, TransformKind::square_root,
                      TransformKind::reciprocal, TransformKind::location_scale}) {
        const BoundTransform b(kind, 3.7);
        for (int i = 0; i < 1000; ++i) {
            const double y = std::exp(6.0 * (rng::uniform_open(eng) - 0.5));
            REQUIRE(b.inverse(b.value(y)) == Approx(y).epsilon(1e-12));
        }
    }
}

TEST_CASE("log_jacobian_sum is additive over concatenation", "[transforms][property]") {
    rng::Engine eng(11);
    std::vector<double> a, b;
    for (int i = 0; i < 300; ++i) a.push_back(std::exp(rng::standard_normal(eng)));
    for (int i = 0; i < 700; ++i) b.push_back(std::exp(rng::standard_normal(eng)));
    std::vector<double> ab(a);
    ab.insert(ab.end(), b.begin(), b.end());
    for (auto t : {Transform::natural_log(), Transform::square_root(), Transform::reciprocal()}) {
        REQUIRE(log_jacobian_sum(t, ab) ==
                Approx(log_jacobian_sum(t, a) + log_jacobian_sum(t, b)).epsilon(1e-12));
    }
}

TEST_CASE("dataset-level helpers bind per-location scales", "[transforms]") {
    const auto d = validate_dataset({{"A", {2, 4}, {1, 1}, {}}, {"B", {3, 9}, {1, 1}, {}}});
    const auto stats = std::make_shared<const LocationStats>(location_stats(d));
    const auto t = Transform::location_scale(stats);
    const auto v = apply_observed(t, d);
    CHECK(v[0] == Approx(2.0));  // sigma_A = 1
    CHECK(v[2] == Approx(1.0));  // sigma_B = 3
    CHECK(log_jacobian_sum(t, d) == Approx(-2.0 * std::log(3.0)));
}
