#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "fkh/gamma.hpp"

using namespace fkh;

namespace {
// rows of a small csv, skipping the header
std::vector<std::vector<double>> load_csv(const std::string& name) {
    std::ifstream in(std::string(FKH_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}
}  // namespace

TEST_CASE("gamma: known identities") {
    CHECK(gamma_fn(0.5) == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(gamma_fn(1.5) == Catch::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(gamma_fn(1.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == Catch::Approx(24.0).epsilon(1e-14));
    // reflection: Gamma(-0.5) = -2 sqrt(pi)
    CHECK(gamma_fn(-0.5) == Catch::Approx(-2.0 * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("gamma: poles are reported") {
    CHECK_THROWS_AS(gamma_fn(0.0), numerical_error);
    CHECK_THROWS_AS(gamma_fn(-3.0), numerical_error);
    CHECK_THROWS_AS(digamma_fn(-1.0), numerical_error);
}

TEST_CASE("gamma: recurrence property") {
    Rng rng(41);
    for (int i = 0; i < 200; ++i) {
        double s = rng.uniform(0.05, 20.0);
        CHECK(gamma_fn(s + 1.0) == Catch::Approx(s * gamma_fn(s)).epsilon(1e-13));
    }
}

TEST_CASE("digamma: known values") {
    const double euler = 0.57721566490153286;
    CHECK(digamma_fn(1.0) == Catch::Approx(-euler).epsilon(1e-12));
    CHECK(digamma_fn(2.0) == Catch::Approx(1.0 - euler).epsilon(1e-12));
    CHECK(digamma_fn(0.5) == Catch::Approx(-euler - 2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("digamma: recurrence and reflection properties") {
    Rng rng(47);
    for (int i = 0; i < 200; ++i) {
        double s = rng.uniform(0.05, 15.0);
        CHECK(digamma_fn(s + 1.0) == Catch::Approx(digamma_fn(s) + 1.0 / s).margin(1e-11));
    }
    for (int i = 0; i < 100; ++i) {
        double s = rng.uniform(0.05, 0.45);
        CHECK(digamma_fn(1.0 - s) - digamma_fn(s) ==
              Catch::Approx(M_PI / std::tan(M_PI * s)).epsilon(1e-11));
    }
}

TEST_CASE("gamma/digamma: golden table") {
    for (const auto& row : load_csv("gamma_golden.csv")) {
        INFO("s = " << row[0]);
        CHECK(gamma_fn(row[0]) == Catch::Approx(row[1]).epsilon(2e-13));
        CHECK(digamma_fn(row[0]) == Catch::Approx(row[2]).epsilon(1e-11).margin(1e-11));
    }
}
