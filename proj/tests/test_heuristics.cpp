#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eigenlab/heuristics.hpp"
#include "eigenlab/spectrum.hpp"

using namespace eigenlab;

namespace {

// reference values evaluated to 30 digits with an independent multiprecision library
constexpr double kP0Trivial = 0.288788095086602421;    // (2)_inf
constexpr double kRatio = 0.419422441795107598;        // (2)_inf / (4)_inf
constexpr double kP22_11 = 0.0699037402991845996;      // P_{2,2}([1,1])
constexpr double kU1M1Trivial = 0.629133662692661397;  // P^(1)_{1,2}([])
constexpr double kM2U1_11 = 0.0360441160917670592;   // P^(1)_{2,2}([1,1]) closed example
constexpr double kM2U2Trivial = 0.786417078365826746;    // P^(2)_{2,2}([]) closed example

DistTable point_mass(const GroupType& g, std::uint64_t q) {
    DistTable t;
    t.q = q;
    t.coeffs[g] = {1, 0.0};
    return t;
}

}  // namespace

TEST_CASE("closed forms at level 0, 1, 2") {
    CHECK(p_closed(0, 2, {}).value == doctest::Approx(kP0Trivial).epsilon(1e-12));
    CHECK(p_closed(0, 2, {1}).value == doctest::Approx(kP0Trivial).epsilon(1e-12));
    CHECK(p_closed(0, 2, {1, 1}).value == doctest::Approx(kP0Trivial / 6).epsilon(1e-12));
    CHECK(p_closed(1, 2, {}).value == doctest::Approx(kRatio).epsilon(1e-12));
    CHECK(p_closed(1, 2, {1}).value == doctest::Approx(kRatio / 2).epsilon(1e-12));
    CHECK(p_closed(2, 2, {1, 1}).value == doctest::Approx(kP22_11).epsilon(1e-12));
    CHECK(p_closed(1, 2, {}).err <= 1e-12);
    CHECK(closed_prefactor(0, 3).value == doctest::Approx(0.560126077927948945).epsilon(1e-12));
}

TEST_CASE("truncated weights") {
    CHECK(weight_w(1, {1}, 2) == mpq_class(1, 2));
    CHECK(weight_w(0, {1}, 2) == 0);
    CHECK(weight_w(1, {1, 1}, 2) == 0);
    CHECK(weight_w(std::nullopt, {1, 1}, 2) == mpq_class(1, 6));
    CHECK(weight_w(2, {1, 1}, 2) == poch_finite(2, 2) / 6);
    CHECK(weight_w(0, {}, 3) == 1);
}

TEST_CASE("one u step on point masses") {
    auto t = u_step(point_mass({1}, 2), 4, 2);
    CHECK(t.coeffs.at({}).coeff == mpq_class(1, 2));
    CHECK(t.coeffs.at({1}).coeff == mpq_class(1, 2));
    CHECK(t.u_level == 1);

    t = u_step(point_mass({1, 1}, 2), 4, 2);
    CHECK(t.coeffs.at({1}).coeff == mpq_class(3, 4));
    CHECK(t.coeffs.at({1, 1}).coeff == mpq_class(1, 4));

    // Z/4: y = 0 keeps Z/4, y = 2 gives Z/2, the two generators give 0
    t = u_step(point_mass({2}, 2), 4, 2);
    CHECK(t.coeffs.at({}).coeff == mpq_class(1, 2));
    CHECK(t.coeffs.at({1}).coeff == mpq_class(1, 4));
    CHECK(t.coeffs.at({2}).coeff == mpq_class(1, 4));

    CHECK_THROWS_AS(u_step(point_mass({1}, 2), 4, 3), std::invalid_argument);
}

TEST_CASE("u steps preserve mass and carry the tail") {
    auto base = base_table(1, 3, 6);
    const auto mass = base.coeff_mass();
    auto t = u_step(base, 6, 3);
    CHECK(t.coeff_mass() == mass);
    CHECK(t.tail >= base.tail);
    t = u_step(t, 6, 3);
    CHECK(t.coeff_mass() == mass);
    CHECK(t.mass().value + t.tail >= 1.0 - 1e-12);
}

TEST_CASE("level-0 and level-1 u-probabilities") {
    CHECK(u_closed(1, 2, 1, {}).value == doctest::Approx(kU1M1Trivial).epsilon(1e-12));
    // P^(u)_0 for the trivial group: (q)_inf / (q)_u
    CHECK(u_closed(0, 2, 2, {}).value == doctest::Approx(kP0Trivial / (0.5 * 0.75)).epsilon(1e-12));
    CHECK(u_closed(0, 3, 0, {1}).value == doctest::Approx(p_closed(0, 3, {1}).value).epsilon(1e-12));
    CHECK(u_closed(1, 2, 0, {2, 1}).value == doctest::Approx(p_closed(1, 2, {2, 1}).value).epsilon(1e-12));
    const auto rec = u_step(base_table(0, 2, 12), 12, 2);
    CHECK(std::fabs(rec.entry({1}).value - u_closed(0, 2, 1, {1}).value) <= rec.tail + 1e-12);
}

TEST_CASE("level-2 predictions reproduce the closed examples") {
    const auto t = predict(2, 2, 1, 8);
    CHECK(std::fabs(t.entry({1, 1}).value - kM2U1_11) < 1e-3);
    CHECK(std::fabs(t.entry({1, 1}).value - 0.036044) < 1e-3);
    const auto t2 = predict(2, 2, 2, 12);
    CHECK(std::fabs(t2.entry({}).value - kM2U2Trivial) < 1e-3);
    CHECK(t2.u_level == 2);
    CHECK_THROWS_AS(predict(2, 3, 1, 6), std::invalid_argument);
    CHECK_THROWS_AS(predict(4, 1, 1, 6), std::invalid_argument);
}

TEST_CASE("prediction from an empirical base") {
    const auto rep = exhaustive_spectrum(GroupSpec(2, 1, 1, 1));
    const auto t = predict(2, 1, 0, 4, &rep);
    CHECK(t.entry({1}).value == doctest::Approx(p_closed(1, 2, {1}).value).epsilon(1e-12));
    const auto m3 = mc_spectrum(GroupSpec(2, 3, 3, 1), 400, 1, 1);
    const auto t3 = predict(2, 3, 1, 6, &m3);
    CHECK(t3.m == 3);
    CHECK(t3.coeff_mass() == 1);
    const auto from = table_from_report(m3, 1);
    CHECK(from.tail > 0.0);
}

TEST_CASE("rank distribution") {
    CHECK(rank_probability_m1(2, 0, 0).value == doctest::Approx(kRatio).epsilon(1e-12));
    CHECK(rank_probability_m1(2, 0, 1).value == doctest::Approx(kRatio).epsilon(1e-12));
    for (int u = 0; u <= 1; ++u) {
        double sum = 0;
        for (int r = 0; r <= 12; ++r)
            sum += rank_probability_m1(2, u, r).value;
        CHECK(sum >= 0.999);
        CHECK(sum <= 1.0 + 1e-12);
    }
}

TEST_CASE("Hall identity") {
    auto res = check_hall(std::nullopt, {1}, {1}, 2, 2);
    CHECK(res.lhs == 1);
    CHECK(res.rhs == 1);
    CHECK(sgn(res.residual) == 0);
    res = check_hall(1, {1}, {1}, 2, 2);
    CHECK(sgn(res.residual) == 0);
    CHECK(res.rhs == mpq_class(1, 4));
    SubgroupCensusCache cache(3);
    for (const auto& z : enumerate_types(2))
        for (const auto& g : enumerate_types(2))
            for (WeightLevel k : {WeightLevel{0}, WeightLevel{1}, WeightLevel{3}, WeightLevel{}})
                CHECK(sgn(check_hall(k, z, g, 3, 4, &cache).residual) == 0);
    CHECK_THROWS_AS(check_hall(1, {1}, {1}, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_hall(1, {1}, {1}, 4, 2), std::invalid_argument);
}

TEST_CASE("cyclic-quotient lemma") {
    auto res = check_lemma_m1({}, 1, 2, 12);
    CHECK(res.lhs == 1);
    CHECK(sgn(res.residual) == 0);
    res = check_lemma_m1({1}, 2, 2, 12);
    CHECK(res.rhs == mpq_class(7, 24));
    CHECK(res.holds());
    res = check_lemma_m1({1}, 1, 2, 3);
    CHECK(res.lhs == mpq_class(11, 16));
    CHECK(res.rhs == mpq_class(3, 4));
    CHECK(res.holds());
    CHECK_THROWS_AS(check_lemma_m1({1}, 0, 2, 3), std::invalid_argument);
}

TEST_CASE("CL-weight sum") {
    const auto res = check_weight_sum(2, 12);
    CHECK(std::fabs(res.partial.get_d() - 3.462746) < 0.01);
    CHECK(res.target.value == doctest::Approx(1.0 / kP0Trivial).epsilon(1e-12));
    CHECK(check_weight_sum(2, 4).residual > res.residual);
}
