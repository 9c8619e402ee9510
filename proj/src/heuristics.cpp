#include "eigenlab/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "eigenlab/residue_linalg.hpp"
#include "eigenlab/spectrum.hpp"

namespace eigenlab {

namespace {

constexpr double kRoundUp = 1.0 + 8 * std::numeric_limits<double>::epsilon();

mpz_class zpow(std::uint64_t q, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), q, static_cast<unsigned long>(e));
    return r;
}

long binom2(long r) { return r * (r - 1) / 2; }

// double that is >= the rational
double upper_double(const mpq_class& x) {
    double d = x.get_d();
    return d >= 0 ? d * kRoundUp + std::numeric_limits<double>::denorm_min() : d / kRoundUp;
}

void require_prime(std::uint64_t p, const char* what) {
    if (!is_prime(p))
        throw std::invalid_argument(std::string(what) + ": p=" + std::to_string(p) + " must be prime");
}

}  // namespace

ApproxValue DistTable::entry(const GroupType& g) const {
    auto it = coeffs.find(g);
    if (it == coeffs.end())
        return ApproxValue::exact(0.0);
    auto c = ApproxValue::from_rational(it->second.coeff);
    c.err += it->second.coeff_err;
    return scale * c;
}

std::map<GroupType, ApproxValue> DistTable::entries() const {
    std::map<GroupType, ApproxValue> out;
    for (const auto& [g, e] : coeffs)
        out.emplace(g, entry(g));
    return out;
}

mpq_class DistTable::coeff_mass() const {
    mpq_class s = 0;
    for (const auto& [g, e] : coeffs)
        s += e.coeff;
    return s;
}

ApproxValue DistTable::mass() const {
    double err = 0.0;
    for (const auto& [g, e] : coeffs)
        err += e.coeff_err;
    auto c = ApproxValue::from_rational(coeff_mass());
    c.err += err * kRoundUp;
    return scale * c;
}

ApproxValue closed_prefactor(int m, std::uint64_t q, double eps) {
    if (m < 0 || m > 2)
        throw std::domain_error("no closed formula for P_{m,q} with m=" + std::to_string(m));
    // each factor gets a third of the budget; the quotient at most doubles it
    const double share = eps / 6;
    auto pq = poch_infinite(q, share);
    if (m == 0)
        return pq;
    if (q > std::numeric_limits<std::uint32_t>::max())
        throw std::overflow_error("q^2 overflows");
    return pq / poch_infinite(q * q, share);
}

mpq_class p_closed_coefficient(int m, std::uint64_t q, const GroupType& g) {
    const mpq_class aut(aut_order(g, q));
    const long r = power_rank(g, 1);
    switch (m) {
    case 0:
        return 1 / aut;
    case 1:
        return poch_finite(q, static_cast<int>(r)) * mpq_class(zpow(q, binom2(r))) / aut;
    case 2: {
        const long s = power_rank(g, 2);
        const long t = (r - s) / 2;
        return poch_finite(q, static_cast<int>(r - s)) * poch_finite(q, static_cast<int>(s)) *
               mpq_class(zpow(q, binom2(r) + binom2(s))) / (poch_finite(q * q, static_cast<int>(t)) * aut);
    }
    default:
        throw std::domain_error("no closed formula for P_{m,q} with m=" + std::to_string(m));
    }
}

ApproxValue p_closed(int m, std::uint64_t q, const GroupType& g, double eps) {
    auto coeff = p_closed_coefficient(m, q, g);  // validates m
    // scale error is multiplied by coeff <= 1
    return closed_prefactor(m, q, eps / 2) * coeff;
}

mpq_class weight_w(WeightLevel k, const GroupType& g, std::uint64_t q) {
    const mpq_class aut(aut_order(g, q));
    if (!k)
        return 1 / aut;
    if (*k < 0)
        throw std::invalid_argument("weight_w: k must be >= 0");
    const int r = g.rank();
    if (*k < r)
        return 0;
    return poch_finite(q, *k) / (poch_finite(q, *k - r) * aut);
}

DistTable base_table(int m, std::uint64_t q, int max_weight, double eps) {
    DistTable t;
    t.q = q;
    t.m = m;
    t.u_level = 0;
    t.scale = closed_prefactor(m, q, eps);
    for (const auto& g : enumerate_types(max_weight))
        t.coeffs[g] = {p_closed_coefficient(m, q, g), 0.0};
    t.tail = std::max(0.0, (1.0 - t.mass().lower()) * kRoundUp);
    return t;
}

DistTable table_from_report(const SpectrumReport& report, int max_weight) {
    if (report.total == 0)
        throw std::invalid_argument("table_from_report: empty report");
    DistTable t;
    t.q = report.spec.p;
    t.m = report.spec.m;
    t.u_level = 0;
    for (const auto& g : enumerate_types(max_weight))
        t.coeffs[g] = {0, 0.0};
    mpq_class outside = 0;
    for (const auto& [g, c] : report.counts) {
        mpq_class freq(mpz_class(static_cast<unsigned long>(c)), mpz_class(static_cast<unsigned long>(report.total)));
        freq.canonicalize();
        if (g.weight() > max_weight)
            outside += freq;
        else
            t.coeffs[g].coeff = freq;
    }
    t.tail = upper_double(outside);
    return t;
}

DistTable u_step(const DistTable& t, int max_weight, std::uint64_t p) {
    require_prime(p, "u_step");
    if (t.q != p)
        throw std::invalid_argument("u_step: table is over q=" + std::to_string(t.q) + ", not p=" +
                                    std::to_string(p));
    DistTable out;
    out.q = t.q;
    out.m = t.m;
    out.u_level = t.u_level + 1;
    out.scale = t.scale;
    out.tail = t.tail;
    for (const auto& g : enumerate_types(max_weight))
        out.coeffs[g] = {0, 0.0};

    for (const auto& [h, e] : t.coeffs) {
        if (h.weight() > max_weight) {
            out.tail += t.entry(h).upper() * kRoundUp;
            continue;
        }
        if (sgn(e.coeff) == 0 && e.coeff_err == 0)
            continue;
        const mpz_class order = group_order(h, p);
        for (const auto& [g, by_order] : cyclic_quotient_census(h, p)) {
            mpz_class count = 0;
            for (const auto& [n, c] : by_order)
                count += c;
            mpq_class frac(count, order);
            frac.canonicalize();
            auto& dst = out.coeffs[g];
            dst.coeff += e.coeff * frac;
            dst.coeff_err += e.coeff_err * upper_double(frac);
        }
    }
    return out;
}

mpq_class u_closed_coefficient(int m, std::uint64_t q, int u, const GroupType& g) {
    if (u < 0)
        throw std::invalid_argument("u_closed: u must be >= 0");
    const mpq_class aut(aut_order(g, q));
    const mpq_class gu(zpow(q, static_cast<long>(g.weight()) * u));
    const auto qu = poch_finite(q, u);
    switch (m) {
    case 0:
        return 1 / (qu * gu * aut);
    case 1: {
        const long r = g.rank();
        return poch_finite(q * q, u) * poch_finite(q, static_cast<int>(r) + u) * mpq_class(zpow(q, binom2(r))) /
               (qu * qu * gu * aut);
    }
    default:
        throw std::domain_error("no closed formula for P^(u)_{m,q} with m=" + std::to_string(m) +
                                "; use the recursion");
    }
}

ApproxValue u_closed(int m, std::uint64_t q, int u, const GroupType& g, double eps) {
    auto coeff = u_closed_coefficient(m, q, u, g);
    return closed_prefactor(m, q, eps / (2 * std::max(1.0, coeff.get_d()))) * coeff;
}

DistTable predict(std::uint64_t p, int m, int u, int max_weight, const SpectrumReport* base, double eps) {
    require_prime(p, "predict");
    if (m < 0)
        throw std::invalid_argument("predict: m must be >= 0");
    if (u < 0)
        throw std::invalid_argument("predict: u must be >= 0");
    if (m <= 1) {
        DistTable t;
        t.q = p;
        t.m = m;
        t.u_level = u;
        t.scale = closed_prefactor(m, p, eps);
        for (const auto& g : enumerate_types(max_weight))
            t.coeffs[g] = {u_closed_coefficient(m, p, u, g), 0.0};
        t.tail = std::max(0.0, (1.0 - t.mass().lower()) * kRoundUp);
        return t;
    }
    DistTable t;
    if (m == 2) {
        t = base_table(2, p, max_weight, eps);
    } else {
        if (!base)
            throw std::invalid_argument("predict: m >= 3 has no closed formula; pass a spectrum report as base");
        if (base->spec.p != p || base->spec.m != m)
            throw std::invalid_argument("predict: base report is for " + base->spec.to_string());
        t = table_from_report(*base, max_weight);
    }
    for (int i = 0; i < u; ++i)
        t = u_step(t, max_weight, p);
    return t;
}

ApproxValue rank_probability_m1(std::uint64_t p, int u, int r, double eps) {
    if (u < 0 || r < 0)
        throw std::invalid_argument("rank_probability_m1: u and r must be >= 0");
    const long rr = r;
    const mpq_class coeff = poch_finite(p * p, u) /
                            (poch_finite(p, u) * mpq_class(zpow(p, rr * (rr + 1) / 2 + rr * u)) * poch_finite(p, r));
    return closed_prefactor(1, p, eps / std::max(1.0, 2 * coeff.get_d())) * coeff;
}

std::uint64_t SubgroupCensusCache::count(const GroupType& h, const GroupType& z, const GroupType& g) {
    if (z.weight() + g.weight() != h.weight())
        return 0;
    std::lock_guard lock(mutex_);
    auto it = cache_.find(h);
    if (it == cache_.end() || it->second.first < z.weight())
        it = cache_.insert_or_assign(h, std::pair{z.weight(), subgroup_census(h, p_, z.weight())}).first;
    const auto& census = it->second.second;
    auto hit = census.find({z, g});
    return hit == census.end() ? 0 : hit->second;
}

bool IdentityCheck::holds() const { return residual <= mpq_class(tail_bound); }

IdentityCheck check_hall(WeightLevel k, const GroupType& z, const GroupType& g, std::uint64_t q, int max_weight,
                         SubgroupCensusCache* cache) {
    require_prime(q, "check_hall");
    const int w = z.weight() + g.weight();
    if (max_weight < w)
        throw std::invalid_argument("check_hall: max_weight must be >= weight(z) + weight(g)");
    SubgroupCensusCache local(q);
    if (!cache)
        cache = &local;
    if (cache->p() != q)
        throw std::invalid_argument("check_hall: census cache is for another prime");

    IdentityCheck out;
    out.lhs = 0;
    for (const auto& h : partitions_of(w)) {
        const auto wk = weight_w(k, h, q);
        if (sgn(wk) == 0)
            continue;
        const auto c = cache->count(h, z, g);
        if (c == 0)
            continue;
        // w_k(H) already carries the 1/|Aut H| factor
        out.lhs += wk * mpq_class(mpz_class(static_cast<unsigned long>(c)));
    }
    out.rhs = weight_w(k, z, q) * weight_w(k, g, q);
    out.residual = abs(out.lhs - out.rhs);
    out.tail_bound = 0.0;
    return out;
}

IdentityCheck check_lemma_m1(const GroupType& g, int u, std::uint64_t q, int max_exponent) {
    require_prime(q, "check_lemma_m1");
    if (u < 1)
        throw std::invalid_argument("check_lemma_m1: u must be >= 1");
    if (max_exponent < 0)
        throw std::invalid_argument("check_lemma_m1: max_exponent must be >= 0");
    const int r = g.rank();
    const mpq_class g_aut(aut_order(g, q));
    const mpq_class gu(zpow(q, static_cast<long>(g.weight()) * u));

    IdentityCheck out;
    out.lhs = 0;
    // all H with exactly r parts, each in [1, max_exponent]
    std::vector<int> parts;
    std::function<void(int)> rec = [&](int max_part) {
        if (static_cast<int>(parts.size()) == r) {
            const GroupType h(parts);
            if (h.weight() < g.weight())
                return;
            auto census = cyclic_quotient_census(h, q);
            auto it = census.find(g);
            if (it == census.end())
                return;
            mpz_class count = 0;
            for (const auto& [n, c] : it->second)
                count += c;
            const mpq_class hu(zpow(q, static_cast<long>(h.weight()) * u));
            out.lhs += mpq_class(count) / (hu * mpq_class(aut_order(h, q)));
            return;
        }
        for (int part = max_part; part >= 1; --part) {
            parts.push_back(part);
            rec(part);
            parts.pop_back();
        }
    };
    rec(max_exponent);

    const mpz_class qr = zpow(q, r), qu = zpow(q, u);
    out.rhs = mpq_class(qr * qu - 1, qr * (qu - 1)) / (gu * g_aut);
    out.rhs.canonicalize();
    out.residual = abs(out.lhs - out.rhs);
    if (r > 0) {
        const long n0 = std::max(1, max_exponent + 1 - g.exponent());
        mpq_class tail = (1 - mpq_class(1, qr)) / (mpq_class(zpow(q, u * n0)) * (1 - mpq_class(1, qu)) * gu * g_aut);
        tail.canonicalize();
        out.tail_bound = upper_double(tail);
    }
    return out;
}

WeightSumCheck check_weight_sum(std::uint64_t p, int max_weight, double eps) {
    require_prime(p, "check_weight_sum");
    WeightSumCheck out;
    out.partial = 0;
    for (const auto& g : enumerate_types(max_weight))
        out.partial += 1 / mpq_class(aut_order(g, p));
    out.target = ApproxValue::exact(1.0) / poch_infinite(p, eps / 16);
    out.residual = std::fabs(out.partial.get_d() - out.target.value) + out.target.err;
    return out;
}

}  // namespace eigenlab
