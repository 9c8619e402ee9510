#include "eigenlab/pgroups.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "eigenlab/residue_linalg.hpp"

namespace eigenlab {

GroupType::GroupType(std::initializer_list<int> parts) : GroupType(std::vector<int>(parts)) {}

GroupType::GroupType(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0)
            throw std::invalid_argument("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw std::invalid_argument("partition parts must be weakly decreasing");
    }
    weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

GroupType GroupType::from_unsorted(std::vector<int> parts) {
    if (std::ranges::any_of(parts, [](int x) { return x < 0; }))
        throw std::invalid_argument("negative partition part");
    std::erase(parts, 0);
    std::ranges::sort(parts, std::greater<>{});
    return GroupType(std::move(parts));
}

GroupType GroupType::cyclic(int n) {
    if (n < 0)
        throw std::invalid_argument("cyclic exponent must be >= 0");
    return n == 0 ? GroupType{} : GroupType{n};
}

GroupType GroupType::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        throw std::invalid_argument("group type must look like [2,1] or []: '" + std::string(text) + "'");
    text = trim(text.substr(1, text.size() - 2));
    std::vector<int> parts;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto token = trim(text.substr(0, comma));
        int value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            throw std::invalid_argument("bad partition part '" + std::string(token) + "'");
        parts.push_back(value);
        if (comma == std::string_view::npos)
            break;
        text = text.substr(comma + 1);
        if (trim(text).empty())
            throw std::invalid_argument("trailing comma in group type");
    }
    return GroupType(std::move(parts));
}

std::string GroupType::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(parts_[i]);
    }
    return s + ']';
}

std::strong_ordering operator<=>(const GroupType& a, const GroupType& b) {
    if (auto c = a.weight_ <=> b.weight_; c != 0)
        return c;
    // reverse lexicographic: [2] before [1,1]
    return std::lexicographical_compare_three_way(b.parts_.begin(), b.parts_.end(), a.parts_.begin(),
                                                  a.parts_.end());
}

mpz_class group_order(const GroupType& g, std::uint64_t p) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(g.weight()));
    return r;
}

int power_rank(const GroupType& g, int k) {
    if (k < 1)
        throw std::invalid_argument("power_rank: k must be >= 1");
    return static_cast<int>(std::ranges::count_if(g.parts(), [k](int l) { return l >= k; }));
}

namespace {

mpz_class upow(std::uint64_t base, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, static_cast<unsigned long>(e));
    return r;
}

}  // namespace

mpz_class aut_order(const GroupType& g, std::uint64_t q) {
    if (q < 2)
        throw std::invalid_argument("aut_order: q must be >= 2");
    // Parts in ascending order e_1 <= ... <= e_r; d_k / c_k are the last /
    // first (1-based) positions holding the value e_k.
    std::vector<int> e(g.parts().rbegin(), g.parts().rend());
    const long r = static_cast<long>(e.size());
    mpz_class result = 1;
    for (long k = 0; k < r; ++k) {
        long d = k, c = k;
        while (d + 1 < r && e[d + 1] == e[k])
            ++d;
        while (c > 0 && e[c - 1] == e[k])
            --c;
        const long dk = d + 1, ck = c + 1;
        result *= upow(q, dk) - upow(q, k);
        result *= upow(q, static_cast<long>(e[k]) * (r - dk));
        result *= upow(q, static_cast<long>(e[k] - 1) * (r - ck + 1));
    }
    return result;
}

std::vector<GroupType> partitions_of(int weight) {
    if (weight < 0)
        throw std::invalid_argument("partition weight must be >= 0");
    std::vector<GroupType> out;
    std::vector<int> current;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            rec(remaining - part, part);
            current.pop_back();
        }
    };
    rec(weight, weight);
    return out;
}

std::vector<GroupType> enumerate_types(int max_weight) {
    if (max_weight < 0)
        throw std::invalid_argument("max_weight must be >= 0");
    std::vector<GroupType> out;
    for (int w = 0; w <= max_weight; ++w) {
        auto ps = partitions_of(w);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
}

namespace {

// p-adic valuation of a positive integer known to be a power of p.
int log_p_exact(const mpz_class& d, std::uint64_t p) {
    mpz_class x = d;
    int e = 0;
    while (x > 1) {
        if (!mpz_divisible_ui_p(x.get_mpz_t(), p))
            throw std::logic_error("invariant factor is not a power of p");
        x /= static_cast<unsigned long>(p);
        ++e;
    }
    return e;
}

}  // namespace

GroupType quotient_type(const GroupType& h, std::span<const std::vector<std::uint64_t>> gens, std::uint64_t p) {
    const auto r = static_cast<std::size_t>(h.rank());
    for (const auto& gen : gens)
        if (gen.size() != r)
            throw std::invalid_argument("generator has wrong number of coordinates");
    if (r == 0)
        return {};
    IntMatrix rel(r, std::vector<mpz_class>(r + gens.size()));
    for (std::size_t i = 0; i < r; ++i) {
        const auto modulus = upow(p, h.parts()[i]);
        rel[i][i] = modulus;
        for (std::size_t j = 0; j < gens.size(); ++j) {
            if (mpz_class(static_cast<unsigned long>(gens[j][i])) >= modulus)
                throw std::out_of_range("generator coordinate outside [0, p^l_i)");
            rel[i][r + j] = static_cast<unsigned long>(gens[j][i]);
        }
    }
    std::vector<int> parts;
    for (const auto& d : integer_snf(std::move(rel)))
        parts.push_back(log_p_exact(d, p));
    return GroupType::from_unsorted(std::move(parts));
}

GroupType quotient_type(const GroupType& h, std::span<const std::uint64_t> y, std::uint64_t p) {
    std::vector<std::vector<std::uint64_t>> gens{{y.begin(), y.end()}};
    return quotient_type(h, std::span<const std::vector<std::uint64_t>>(gens), p);
}

CyclicQuotientCensus cyclic_quotient_census(const GroupType& h, std::uint64_t p) {
    const auto& parts = h.parts();
    const auto r = parts.size();
    CyclicQuotientCensus census;
    std::vector<int> v(r, 0);  // valuation of each coordinate, v_i in [0, l_i]
    for (;;) {
        // representative y_i = p^{v_i} (zero when v_i = l_i) and the class size
        std::vector<std::uint64_t> y(r);
        mpz_class count = 1;
        int n = 0;
        for (std::size_t i = 0; i < r; ++i) {
            if (v[i] == parts[i]) {
                y[i] = 0;
            } else {
                y[i] = upow(p, v[i]).get_ui();
                count *= upow(p, parts[i] - v[i]) - upow(p, parts[i] - v[i] - 1);
                n = std::max(n, parts[i] - v[i]);
            }
        }
        census[quotient_type(h, std::span<const std::uint64_t>(y), p)][n] += count;

        std::size_t i = 0;
        while (i < r && v[i] == parts[i])
            v[i++] = 0;
        if (i == r)
            break;
        ++v[i];
    }
    return census;
}

std::map<int, std::uint64_t> count_cyclic_quotients(const GroupType& h, const GroupType& g, std::uint64_t p,
                                                    std::uint64_t bound) {
    if (group_order(h, p) > bound)
        throw std::length_error("count_cyclic_quotients: |H| exceeds the enumeration bound");
    std::map<int, std::uint64_t> out;
    auto census = cyclic_quotient_census(h, p);
    if (auto it = census.find(g); it != census.end())
        for (const auto& [n, c] : it->second)
            out[n] = c.get_ui();
    return out;
}

ExplicitGroup::ExplicitGroup(GroupType type, std::uint64_t p, std::uint64_t bound)
    : type_(std::move(type)), p_(p) {
    if (!is_prime(p))
        throw std::invalid_argument("explicit groups need a prime p");
    if (group_order(type_, p) > bound)
        throw std::length_error("group order exceeds the enumeration bound");
    for (int l : type_.parts()) {
        moduli_.push_back(upow(p, l).get_ui());
        order_ *= moduli_.back();
    }
}

std::vector<std::uint64_t> ExplicitGroup::coordinates(std::uint64_t index) const {
    std::vector<std::uint64_t> c(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        c[i] = index % moduli_[i];
        index /= moduli_[i];
    }
    return c;
}

std::uint64_t ExplicitGroup::index(std::span<const std::uint64_t> coords) const {
    std::uint64_t idx = 0;
    for (std::size_t i = moduli_.size(); i-- > 0;)
        idx = idx * moduli_[i] + coords[i] % moduli_[i];
    return idx;
}

std::uint64_t ExplicitGroup::add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t idx = 0, stride = 1;
    for (auto m : moduli_) {
        idx += ((a % m + b % m) % m) * stride;
        a /= m;
        b /= m;
        stride *= m;
    }
    return idx;
}

std::uint64_t ExplicitGroup::scale(std::uint64_t a, std::uint64_t k) const {
    std::uint64_t idx = 0, stride = 1;
    for (auto m : moduli_) {
        idx += ((a % m) * (k % m) % m) * stride;
        a /= m;
        stride *= m;
    }
    return idx;
}

int ExplicitGroup::order_exponent(std::uint64_t a) const {
    int best = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        auto x = a % moduli_[i];
        a /= moduli_[i];
        int e = type_.parts()[i];
        while (x != 0 && e > 0 && x % p_ == 0) {
            x /= p_;
            --e;
        }
        if (x == 0)
            e = 0;
        best = std::max(best, e);
    }
    return best;
}

namespace {

struct BitsetHash {
    std::size_t operator()(const std::vector<std::uint64_t>& words) const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (auto w : words)
            h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

struct Subgroup {
    std::vector<std::uint64_t> bits;
    std::vector<std::uint64_t> elements;
    std::vector<std::uint64_t> gens;  // element indices
};

GroupType type_from_orders(const ExplicitGroup& grp, const std::vector<std::uint64_t>& elements) {
    // #{s : p^k s = 0} = p^{sum_i min(l_i, k)} recovers the conjugate partition
    std::vector<std::uint64_t> by_exp(static_cast<std::size_t>(grp.type().exponent()) + 1, 0);
    for (auto s : elements)
        ++by_exp[static_cast<std::size_t>(grp.order_exponent(s))];
    std::vector<int> log_counts;
    std::uint64_t cumulative = 0;
    for (auto c : by_exp) {
        cumulative += c;
        int e = 0;
        for (auto x = cumulative; x > 1; x /= grp.p())
            ++e;
        log_counts.push_back(e);
    }
    std::vector<int> conj;  // conj[k-1] = #{parts >= k}
    for (std::size_t k = 1; k < log_counts.size(); ++k)
        if (int c = log_counts[k] - log_counts[k - 1]; c > 0)
            conj.push_back(c);
    std::vector<int> parts;
    if (!conj.empty())
        for (int i = 0; i < conj.front(); ++i)
            parts.push_back(static_cast<int>(std::ranges::count_if(conj, [i](int c) { return c > i; })));
    return GroupType(std::move(parts));
}

}  // namespace

SubgroupCensus subgroup_census(const GroupType& h, std::uint64_t p, int max_order_exponent, std::uint64_t bound) {
    ExplicitGroup grp(h, p, bound);
    const auto order = grp.order();
    const std::size_t words = (order + 63) / 64;
    SubgroupCensus census;
    auto record = [&](const Subgroup& s) {
        std::vector<std::vector<std::uint64_t>> gens;
        for (auto g : s.gens)
            gens.push_back(grp.coordinates(g));
        auto quotient = quotient_type(h, std::span<const std::vector<std::uint64_t>>(gens), p);
        ++census[{type_from_orders(grp, s.elements), quotient}];
    };

    Subgroup trivial{std::vector<std::uint64_t>(words, 0), {0}, {}};
    trivial.bits[0] = 1;
    std::vector<Subgroup> layer{trivial};
    record(trivial);
    std::uint64_t layer_order = 1;
    for (int level = 1; level <= max_order_exponent && layer_order * p <= order; ++level) {
        // every subgroup of order p^level is S + <x> for some S of order
        // p^(level-1) and x outside S with p x in S
        std::unordered_set<std::vector<std::uint64_t>, BitsetHash> seen;
        std::vector<Subgroup> next;
        for (const auto& s : layer) {
            // x' in (S + <x>) \ S generates the same extension
            std::vector<std::uint64_t> covered = s.bits;
            for (std::uint64_t x = 0; x < order; ++x) {
                if (covered[x / 64] >> (x % 64) & 1)
                    continue;
                auto px = grp.scale(x, p);
                if (!(s.bits[px / 64] >> (px % 64) & 1))
                    continue;
                Subgroup t{s.bits, {}, s.gens};
                t.elements.reserve(s.elements.size() * p);
                std::uint64_t shift = 0;
                for (std::uint64_t j = 0; j < p; ++j) {
                    for (auto e : s.elements) {
                        auto y = grp.add(e, shift);
                        t.bits[y / 64] |= std::uint64_t{1} << (y % 64);
                        t.elements.push_back(y);
                    }
                    shift = grp.add(shift, x);
                }
                for (std::size_t w = 0; w < words; ++w)
                    covered[w] |= t.bits[w];
                if (!seen.insert(t.bits).second)
                    continue;
                t.gens.push_back(x);
                next.push_back(std::move(t));
            }
        }
        for (const auto& t : next)
            record(t);
        layer = std::move(next);
        layer_order *= p;
    }
    return census;
}

std::uint64_t count_subgroups_iso_with_quotient(const GroupType& h, const GroupType& z, const GroupType& g,
                                                std::uint64_t p, std::uint64_t bound) {
    if (group_order(h, p) > bound)
        throw std::length_error("count_subgroups_iso_with_quotient: |H| exceeds the enumeration bound");
    if (z.weight() + g.weight() != h.weight())
        return 0;
    auto census = subgroup_census(h, p, z.weight(), bound);
    auto it = census.find({z, g});
    return it == census.end() ? 0 : it->second;
}

}  // namespace eigenlab
