#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "eigenlab/pgroups.hpp"

using namespace eigenlab;

namespace {

// Type of a subgroup-closed set from its element-order counts:
// log_p #{x : p^j x = 0} - log_p #{x : p^{j-1} x = 0} = #{parts >= j}.
GroupType type_from_counts(const std::vector<std::uint64_t>& killed_by, std::uint64_t p) {
    std::vector<int> at_least;
    for (std::size_t j = 1; j < killed_by.size(); ++j) {
        std::uint64_t ratio = killed_by[j] / killed_by[j - 1];
        int r = 0;
        while (ratio > 1) {
            ratio /= p;
            ++r;
        }
        if (r == 0)
            break;
        at_least.push_back(r);
    }
    std::vector<int> parts;
    for (int i = 0; !at_least.empty() && i < at_least[0]; ++i) {
        int len = 0;
        for (int c : at_least)
            len += c > i;
        parts.push_back(len);
    }
    return GroupType::from_unsorted(parts);
}

std::vector<bool> span_of(const ExplicitGroup& h, const std::vector<std::uint64_t>& gens) {
    std::vector<bool> in(h.order(), false);
    std::vector<std::uint64_t> stack = {0};
    in[0] = true;
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (auto g : gens) {
            auto y = h.add(x, g);
            if (!in[y]) {
                in[y] = true;
                stack.push_back(y);
            }
        }
    }
    return in;
}

int max_exponent(const ExplicitGroup& h) { return h.type().exponent(); }

GroupType sub_type(const ExplicitGroup& h, const std::vector<bool>& s) {
    std::vector<std::uint64_t> killed(max_exponent(h) + 2, 0);
    for (std::uint64_t x = 0; x < h.order(); ++x)
        if (s[x])
            for (int j = h.order_exponent(x); j < static_cast<int>(killed.size()); ++j)
                ++killed[j];
    return type_from_counts(killed, h.p());
}

GroupType quotient_by(const ExplicitGroup& h, const std::vector<bool>& s) {
    std::uint64_t s_size = 0;
    for (bool b : s)
        s_size += b;
    std::vector<std::uint64_t> killed(max_exponent(h) + 2, 0);
    for (std::uint64_t x = 0; x < h.order(); ++x) {
        std::uint64_t px = x;
        for (int j = 0; j < static_cast<int>(killed.size()); ++j) {
            if (s[px])
                ++killed[j];
            px = h.scale(px, h.p());
        }
    }
    for (auto& k : killed)
        k /= s_size;
    return type_from_counts(killed, h.p());
}

// every endomorphism is fixed by the images of the generators; count the bijective ones
std::uint64_t brute_aut(const GroupType& g, std::uint64_t p) {
    ExplicitGroup h(g, p);
    const auto& parts = g.parts();
    std::vector<std::vector<std::uint64_t>> choices(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::uint64_t x = 0; x < h.order(); ++x)
            if (h.order_exponent(x) <= parts[i])
                choices[i].push_back(x);
    std::vector<std::size_t> pick(parts.size(), 0);
    std::uint64_t count = 0;
    while (true) {
        std::vector<bool> hit(h.order(), false);
        std::uint64_t distinct = 0;
        for (std::uint64_t x = 0; x < h.order(); ++x) {
            const auto c = h.coordinates(x);
            std::uint64_t img = 0;
            for (std::size_t i = 0; i < parts.size(); ++i)
                img = h.add(img, h.scale(choices[i][pick[i]], c[i]));
            if (!hit[img]) {
                hit[img] = true;
                ++distinct;
            }
        }
        count += distinct == h.order();
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].size())
            pick[i++] = 0;
        if (i == pick.size())
            break;
    }
    return count;
}

}  // namespace

TEST_CASE("group type syntax and ordering") {
    CHECK(GroupType::parse("[2,1]") == GroupType{2, 1});
    CHECK(GroupType::parse("[]").trivial());
    CHECK(GroupType::parse(" [ 3 , 1 ] ") == GroupType{3, 1});
    CHECK_THROWS_AS(GroupType::parse("[1,3]"), std::invalid_argument);
    CHECK_THROWS_AS(GroupType::parse("2,1"), std::invalid_argument);
    CHECK_THROWS_AS(GroupType::parse("[1,a]"), std::invalid_argument);
    CHECK_THROWS_AS(GroupType({1, 2}), std::invalid_argument);
    CHECK(GroupType::from_unsorted({1, 0, 3}) == GroupType{3, 1});
    CHECK(GroupType{3, 1}.to_string() == "[3,1]");
    CHECK(GroupType::cyclic(0).trivial());
    const auto types = enumerate_types(3);
    std::vector<std::string> names;
    for (const auto& t : types)
        names.push_back(t.to_string());
    CHECK(names == std::vector<std::string>{"[]", "[1]", "[2]", "[1,1]", "[3]", "[2,1]", "[1,1,1]"});
}

TEST_CASE("partition counts") {
    const int expected[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int w = 0; w <= 10; ++w)
        CHECK(partitions_of(w).size() == static_cast<std::size_t>(expected[w]));
    CHECK(enumerate_types(10).size() == 139);
}

TEST_CASE("order and ranks") {
    GroupType g{3, 1, 1};
    CHECK(group_order(g, 2) == 32);
    CHECK(power_rank(g, 1) == 3);
    CHECK(power_rank(g, 2) == 1);
    CHECK(power_rank(g, 4) == 0);
}

TEST_CASE("automorphism counts match brute force") {
    CHECK(aut_order({2, 1}, 2) == 8);
    CHECK(aut_order({1, 1}, 2) == 6);
    CHECK(aut_order({1, 1}, 3) == 48);
    CHECK(aut_order({}, 5) == 1);
    CHECK(aut_order({1, 1, 1}, 2) == 168);
    for (const auto& g : enumerate_types(4))
        CHECK_MESSAGE(aut_order(g, 2) == brute_aut(g, 2), g.to_string());
    for (const auto& g : enumerate_types(3))
        CHECK_MESSAGE(aut_order(g, 3) == brute_aut(g, 3), g.to_string());
    CHECK(aut_order({3, 2}, 2) == brute_aut({3, 2}, 2));
    CHECK(aut_order({4, 1}, 2) == brute_aut({4, 1}, 2));
}

TEST_CASE("quotient types") {
    const std::vector<std::uint64_t> y1 = {1, 0};
    CHECK(quotient_type({2, 1}, y1, 2) == GroupType{1});
    const std::vector<std::uint64_t> y2 = {2, 1};
    CHECK(quotient_type({2, 1}, y2, 2) == GroupType{2});
    const std::vector<std::uint64_t> zero = {0, 0};
    CHECK(quotient_type({2, 1}, zero, 2) == GroupType{2, 1});
    const std::vector<std::vector<std::uint64_t>> gens = {{1, 0}, {0, 1}};
    CHECK(quotient_type({2, 1}, gens, 2).trivial());
    const std::vector<std::uint64_t> bad = {1};
    CHECK_THROWS_AS(quotient_type({2, 1}, bad, 2), std::invalid_argument);
}

TEST_CASE("cyclic quotient census matches explicit cosets") {
    for (std::uint64_t p : {2u, 3u}) {
        for (const auto& h : enumerate_types(p == 2 ? 6 : 4)) {
            ExplicitGroup eh(h, p);
            if (eh.order() > 256)
                continue;
            std::map<GroupType, std::map<int, std::uint64_t>> brute;
            for (std::uint64_t y = 0; y < eh.order(); ++y) {
                const auto q = quotient_by(eh, span_of(eh, {y}));
                ++brute[q][eh.order_exponent(y)];
                const auto coords = eh.coordinates(y);
                CHECK(quotient_type(h, coords, p) == q);
            }
            const auto census = cyclic_quotient_census(h, p);
            std::uint64_t total = 0;
            REQUIRE(census.size() == brute.size());
            for (const auto& [g, by_n] : census) {
                for (const auto& [n, c] : by_n) {
                    CHECK(c == brute[g][n]);
                    total += c.get_ui();
                }
                const auto direct = count_cyclic_quotients(h, g, p);
                std::map<int, std::uint64_t> expect(brute[g].begin(), brute[g].end());
                CHECK(direct == expect);
            }
            CHECK(total == eh.order());
        }
    }
}

TEST_CASE("subgroup census matches two-generator brute force") {
    for (std::uint64_t p : {2u, 3u}) {
        for (const auto& h : enumerate_types(6)) {
            if (h.rank() > 2)
                continue;
            ExplicitGroup eh(h, p);
            if (eh.order() > 64)
                continue;
            std::set<std::vector<bool>> subs;
            for (std::uint64_t a = 0; a < eh.order(); ++a)
                for (std::uint64_t b = a; b < eh.order(); ++b)
                    subs.insert(span_of(eh, {a, b}));
            SubgroupCensus brute;
            for (const auto& s : subs)
                ++brute[{sub_type(eh, s), quotient_by(eh, s)}];
            CHECK_MESSAGE(subgroup_census(h, p, h.weight()) == brute, h.to_string());
        }
    }
}

TEST_CASE("subgroup/quotient duality") {
    for (std::uint64_t p : {2u, 3u})
        for (const auto& h : enumerate_types(6)) {
            if (group_order(h, p) > 64)
                continue;
            const auto census = subgroup_census(h, p, h.weight());
            std::uint64_t total = 0;
            for (const auto& [key, c] : census) {
                CHECK(c == count_subgroups_iso_with_quotient(h, key.second, key.first, p));
                CHECK(key.first.weight() + key.second.weight() == h.weight());
                total += c;
            }
            CHECK(total >= static_cast<std::uint64_t>(h.weight() + 1));
        }
    CHECK(count_subgroups_iso_with_quotient({1, 1}, {1}, {1}, 2) == 3);
    CHECK(count_subgroups_iso_with_quotient({2}, {1}, {1}, 2) == 1);
    CHECK(count_subgroups_iso_with_quotient({1, 1}, {2}, {}, 2) == 0);
}

TEST_CASE("explicit group arithmetic") {
    ExplicitGroup g({2, 1}, 3);
    CHECK(g.order() == 27);
    const std::vector<std::uint64_t> c = {4, 2};
    const auto x = g.index(c);
    CHECK(g.coordinates(x) == c);
    CHECK(g.order_exponent(x) == 2);
    CHECK(g.scale(x, 3) == g.index(std::vector<std::uint64_t>{3, 0}));
    CHECK(g.add(x, g.scale(x, 8)) == 0);
    CHECK_THROWS_AS(ExplicitGroup({10, 10}, 3), std::length_error);
    CHECK_THROWS_AS(count_cyclic_quotients({10, 10}, {}, 3), std::length_error);
}
