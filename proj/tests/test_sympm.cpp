#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "eigenlab/sympm.hpp"

using namespace eigenlab;

namespace {

std::vector<RMatrix> members(const GroupSpec& spec) {
    std::vector<RMatrix> out;
    enumerate(spec, [&](const RMatrix& h) {
        out.push_back(h);
        return true;
    });
    return out;
}

// membership written out from the definition: h^T J h - J has every entry divisible by p^m
bool member_oracle(const RMatrix& h, const GroupSpec& spec) {
    const auto ring = spec.ring();
    const std::size_t d = spec.dim();
    const std::size_t n = d / 2;
    auto form = [&](std::size_t i, std::size_t j) -> std::int64_t {
        if (i < n && j == i + n)
            return 1;
        if (i >= n && j == i - n)
            return -1;
        return 0;
    };
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            std::int64_t s = 0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    s += static_cast<std::int64_t>(h(i, a)) * form(i, j) * static_cast<std::int64_t>(h(j, b));
            s -= form(a, b);
            const auto mod = static_cast<std::int64_t>(ring.power(spec.m));
            if (((s % mod) + mod) % mod != 0)
                return false;
        }
    return local_snf(h).back() == 0;
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(GroupSpec(4, 1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupSpec(2, 1, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupSpec(2, 0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupSpec(2, 1, 0, 0), std::invalid_argument);
    CHECK(GroupSpec(2, 3, 1, 2).dim() == 4);
}

TEST_CASE("order formulas") {
    CHECK(gl_order(2, 2) == 6);
    CHECK(gl_order(3, 2) == 48);
    CHECK(sp_order(2, 1) == 6);
    CHECK(sp_order(2, 2) == 720);
    CHECK(sp_order(3, 2) == 51840);
    CHECK(order(GroupSpec(2, 1, 0, 1)) == 6);
    CHECK(order(GroupSpec(3, 1, 0, 1)) == 48);
    CHECK(order(GroupSpec(2, 2, 1, 1)) == 96);
    CHECK(order(GroupSpec(2, 2, 2, 1)) == 48);
    CHECK(order(GroupSpec(2, 1, 1, 2)) == 720);
    CHECK(order(GroupSpec(2, 2, 0, 1)) == 96);
    CHECK(order(GroupSpec(2, 3, 2, 1)) == mpz_class(16) * order(GroupSpec(2, 2, 2, 1)));
}

TEST_CASE("enumeration agrees with the order and the membership definition") {
    for (std::uint64_t p : {2u, 3u})
        for (int f = 1; f <= 2; ++f)
            for (int m = 0; m <= f; ++m) {
                GroupSpec spec(p, f, m, 1);
                const auto all = members(spec);
                CHECK(order(spec) == all.size());
                std::set<std::vector<std::uint64_t>> distinct;
                for (const auto& h : all) {
                    CHECK(member_oracle(h, spec));
                    distinct.insert({h.entries().begin(), h.entries().end()});
                }
                CHECK(distinct.size() == all.size());
            }
}

TEST_CASE("groups form a decreasing chain and are closed") {
    const auto g0 = members(GroupSpec(2, 2, 0, 1));
    const auto g1 = members(GroupSpec(2, 2, 1, 1));
    const auto g2 = members(GroupSpec(2, 2, 2, 1));
    for (const auto& h : g2)
        CHECK(contains(h, GroupSpec(2, 2, 1, 1)));
    for (const auto& h : g1)
        CHECK(contains(h, GroupSpec(2, 2, 0, 1)));
    std::size_t in_g1 = 0;
    for (const auto& h : g0)
        in_g1 += contains(h, GroupSpec(2, 2, 1, 1));
    CHECK(in_g1 == g1.size());

    const GroupSpec s1(2, 2, 1, 1);
    for (std::size_t i = 0; i < g1.size(); i += 7)
        for (std::size_t j = 0; j < g1.size(); j += 5) {
            CHECK(contains(g1[i] * g1[j], s1));
            const auto inv = inverse(g1[i]);
            CHECK(g1[i] * inv == RMatrix::identity(s1.ring(), 2));
            CHECK(contains(inv, s1));
        }
}

TEST_CASE("enumeration guard and early stop") {
    CHECK(candidate_count(GroupSpec(2, 1, 1, 1)) == 16);
    CHECK_THROWS_AS(enumerate(GroupSpec(2, 3, 1, 2), [](const RMatrix&) { return true; }), std::length_error);
    int seen = 0;
    enumerate(GroupSpec(3, 1, 1, 1), [&](const RMatrix&) { return ++seen < 5; });
    CHECK(seen == 5);
    CHECK_THROWS_AS(inverse(RMatrix::zero(RingSpec(2, 1), 2)), std::domain_error);
}

TEST_CASE("sampler returns members and is reproducible") {
    const GroupSpec specs[] = {{2, 3, 0, 2}, {2, 3, 1, 2}, {2, 3, 2, 2}, {2, 3, 3, 2}, {3, 2, 1, 3}, {5, 1, 1, 2}};
    for (const auto& spec : specs) {
        Sampler a(spec, 99), b(spec, 99), c(spec, 100);
        bool differs = false;
        for (int i = 0; i < 50; ++i) {
            const auto x = a.draw();
            CHECK(member_oracle(x, spec));
            CHECK(x == b.draw());
            differs = differs || !(x == c.draw());
        }
        CHECK(differs);
        CHECK(sample_uniform(spec, 5) == sample_uniform(spec, 5));
    }
    CHECK(hash64(1, 0) != hash64(1, 1));
    CHECK(hash64(1, 0) == hash64(1, 0));
}

TEST_CASE("sampler self-test") {
    const auto rep = sampler_selftest(GroupSpec(2, 1, 0, 1), 6000, 0.99, 3);
    CHECK(rep.dof == 5);
    CHECK(rep.critical == doctest::Approx(15.0863).epsilon(1e-4));
    CHECK(rep.pass);
    const auto rep3 = sampler_selftest(GroupSpec(3, 1, 0, 1), 48000, 0.99, 3);
    CHECK(rep3.pass);
    CHECK_THROWS_AS(sampler_selftest(GroupSpec(2, 1, 1, 1), 0, 0.99), std::invalid_argument);
    CHECK_THROWS_AS(sampler_selftest(GroupSpec(2, 1, 1, 1), 10, 1.5), std::invalid_argument);
}
