#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>

#include <gmpxx.h>

#include "eigenlab/pgroups.hpp"
#include "eigenlab/qseries.hpp"

namespace eigenlab {

struct SpectrumReport;

/// Cut-off k of the weights w_k; std::nullopt stands for k = infinity.
using WeightLevel = std::optional<int>;

/// Exact coefficient of one table entry; the entry is scale * (coeff +/- coeff_err).
struct DistEntry {
    mpq_class coeff;
    double coeff_err = 0.0;
};

/// Truncated distribution on group types.  Every entry shares one
/// approximate factor `scale` (a ratio of infinite q-Pochhammer products) and
/// keeps an exact rational coefficient, so the u-recursion runs in exact
/// arithmetic.  `tail` bounds the mass carried by types outside `coeffs`.
struct DistTable {
    std::uint64_t q = 2;
    int m = -1;  // -1 when the base distribution is not a P_m
    int u_level = 0;
    ApproxValue scale = ApproxValue::exact(1.0);
    std::map<GroupType, DistEntry> coeffs;
    double tail = 0.0;

    ApproxValue entry(const GroupType& g) const;
    std::map<GroupType, ApproxValue> entries() const;
    /// Sum of all entries.
    ApproxValue mass() const;
    /// Exact sum of coefficients.
    mpq_class coeff_mass() const;
};

/// Prefactor shared by every P_{m,q}(G): (q)_inf for m = 0, (q)_inf/(q^2)_inf for m = 1, 2.
ApproxValue closed_prefactor(int m, std::uint64_t q, double eps = kDefaultEps);
/// P_{m,q}(G) divided by closed_prefactor(m, q).
mpq_class p_closed_coefficient(int m, std::uint64_t q, const GroupType& g);
/// Limit proportion P_{m,q}(G) of elements of the m-th symplectic group with
/// ker(g - 1) = G; closed forms exist for m in {0, 1, 2}.
ApproxValue p_closed(int m, std::uint64_t q, const GroupType& g, double eps = kDefaultEps);

/// w_k(G) = (q)_k / ((q)_{k-r} |Aut G|) for k >= r, 0 below; 1/|Aut G| at infinity.
mpq_class weight_w(WeightLevel k, const GroupType& g, std::uint64_t q);

/// P_{m,q} on all types of weight <= max_weight; tail = 1 - (certified lower bound of the mass).
DistTable base_table(int m, std::uint64_t q, int max_weight, double eps = kDefaultEps);

/// Empirical distribution of a spectrum report; types heavier than max_weight go to the tail.
DistTable table_from_report(const SpectrumReport& report, int max_weight);

/// One step of P^(u)(G) = sum_H sum_{y in H, H/<y> = G} P^(u-1)(H)/|H| over
/// the types of weight <= max_weight.  Quotients never outweigh H, so the
/// step is mass preserving on the support and the input tail carries over.
DistTable u_step(const DistTable& t, int max_weight, std::uint64_t p);

/// P^(u)_{m,q}(G) divided by closed_prefactor(m, q), for m in {0, 1}.
mpq_class u_closed_coefficient(int m, std::uint64_t q, int u, const GroupType& g);
ApproxValue u_closed(int m, std::uint64_t q, int u, const GroupType& g, double eps = kDefaultEps);

/// P^(u)_{m,p} on all types of weight <= max_weight: closed forms for m <= 1,
/// P_{2,p} followed by u recursion steps for m = 2, and the empirical base
/// distribution of `base` for m >= 3.
DistTable predict(std::uint64_t p, int m, int u, int max_weight, const SpectrumReport* base = nullptr,
                  double eps = kDefaultEps);

/// Probability of p-rank r under P^(u)_{1,p}.
ApproxValue rank_probability_m1(std::uint64_t p, int u, int r, double eps = kDefaultEps);

/// Memoized subgroup censuses of explicit groups.  Safe for concurrent use.
class SubgroupCensusCache {
public:
    explicit SubgroupCensusCache(std::uint64_t p) : p_(p) {}
    std::uint64_t p() const { return p_; }
    /// Census of subgroups of order <= p^max_order_exponent (possibly more).
    std::uint64_t count(const GroupType& h, const GroupType& z, const GroupType& g);

private:
    std::uint64_t p_;
    std::mutex mutex_;
    std::map<GroupType, std::pair<int, SubgroupCensus>> cache_;
};

struct IdentityCheck {
    mpq_class lhs;
    mpq_class rhs;
    mpq_class residual;  // |lhs - rhs|
    double tail_bound = 0.0;
    /// residual <= tail_bound (exact comparison).
    bool holds() const;
};

/// sum_H w_k(H) #{H_1 <= H : H_1 = Z, H/H_1 = G}  versus  w_k(Z) w_k(G), with w_k(H)
/// carrying the single factor 1/|Aut H|.
/// Only |H| = |Z||G| contributes, so the sum is finite; max_weight must reach
/// weight(Z) + weight(G) and the reported tail is then 0 for every k.
IdentityCheck check_hall(WeightLevel k, const GroupType& z, const GroupType& g, std::uint64_t q, int max_weight,
                         SubgroupCensusCache* cache = nullptr);

/// sum over H of p-rank r = rank(G) and exponent <= p^max_exponent of
/// #{y : H/<y> = G} / (|H|^u |Aut H|)  versus  (q^{r+u}-1)/(q^r (q^u-1)) / (|G|^u |Aut G|).
/// Omitted H need |<y>| >= q^{max_exponent + 1 - exponent(G)}, which bounds the tail geometrically.
IdentityCheck check_lemma_m1(const GroupType& g, int u, std::uint64_t q, int max_exponent);

struct WeightSumCheck {
    mpq_class partial;   // sum_{weight <= W} 1/|Aut G|
    ApproxValue target;  // 1/(p)_inf
    double residual = 0.0;
};

WeightSumCheck check_weight_sum(std::uint64_t p, int max_weight, double eps = kDefaultEps);

}  // namespace eigenlab
