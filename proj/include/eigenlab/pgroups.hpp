#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace eigenlab {

/// Finite abelian p-group  Z/p^l_1 + ... + Z/p^l_r  labelled by its partition
/// l_1 >= ... >= l_r > 0.  The empty partition is the trivial group.
///
/// Ordering is by weight, then reverse-lexicographic: [], [1], [2], [1,1], [3], ...
class GroupType {
public:
    GroupType() = default;
    GroupType(std::initializer_list<int> parts);
    explicit GroupType(std::vector<int> parts);

    /// Sorts and drops zero parts; negative parts are rejected.
    static GroupType from_unsorted(std::vector<int> parts);
    /// Parses "[2,1]" / "[]"; whitespace around numbers is allowed.
    static GroupType parse(std::string_view text);
    /// Cyclic group Z/p^n (trivial for n = 0).
    static GroupType cyclic(int n);

    const std::vector<int>& parts() const { return parts_; }
    int weight() const { return weight_; }
    int rank() const { return static_cast<int>(parts_.size()); }
    /// Largest part (log_p of the exponent), 0 for the trivial group.
    int exponent() const { return parts_.empty() ? 0 : parts_.front(); }
    bool trivial() const { return parts_.empty(); }

    std::string to_string() const;

    friend bool operator==(const GroupType& a, const GroupType& b) { return a.parts_ == b.parts_; }
    friend std::strong_ordering operator<=>(const GroupType& a, const GroupType& b);

private:
    std::vector<int> parts_;
    int weight_ = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationBound = 1'000'000;

mpz_class group_order(const GroupType& g, std::uint64_t p);

/// #{i : l_i >= k}; k = 1 is the p-rank, k = 2 the p^2-rank.
int power_rank(const GroupType& g, int k);

/// |Aut(G)| for G = sum Z/p^l_i.  The formula only depends on the residue
/// field size, so q may be any integer >= 2 (prime powers for module cases).
mpz_class aut_order(const GroupType& g, std::uint64_t q);

/// All partitions of weight <= max_weight, in GroupType order.
std::vector<GroupType> enumerate_types(int max_weight);
/// Partitions of exactly the given weight, reverse-lexicographic.
std::vector<GroupType> partitions_of(int weight);

/// Type of H / <y> for y given by coordinates in the standard generators of H.
GroupType quotient_type(const GroupType& h, std::span<const std::uint64_t> y, std::uint64_t p);
/// Type of H / <y_1, ..., y_k>.
GroupType quotient_type(const GroupType& h, std::span<const std::vector<std::uint64_t>> gens,
                        std::uint64_t p);

/// Census of cyclic quotients: quotient type -> (n -> #{y : |<y>| = p^n, H/<y> = G}).
using CyclicQuotientCensus = std::map<GroupType, std::map<int, mpz_class>>;

/// Computed class by class: scaling each coordinate of y by a unit is an
/// automorphism of H, so the quotient type depends only on the valuation
/// vector of y.  Works for groups far larger than any element enumeration.
CyclicQuotientCensus cyclic_quotient_census(const GroupType& h, std::uint64_t p);

/// n -> #{y in H : |<y>| = p^n, H/<y> = g}.  Guarded by the enumeration bound on |H|.
std::map<int, std::uint64_t> count_cyclic_quotients(const GroupType& h, const GroupType& g, std::uint64_t p,
                                                    std::uint64_t bound = kDefaultEnumerationBound);

/// (subgroup type, quotient type) -> number of subgroups, over all subgroups
/// of H with order <= p^max_order_exponent.  Explicit lattice enumeration.
using SubgroupCensus = std::map<std::pair<GroupType, GroupType>, std::uint64_t>;
SubgroupCensus subgroup_census(const GroupType& h, std::uint64_t p, int max_order_exponent,
                               std::uint64_t bound = kDefaultEnumerationBound);

/// #{H_1 <= H : H_1 = z, H/H_1 = g}.
std::uint64_t count_subgroups_iso_with_quotient(const GroupType& h, const GroupType& z, const GroupType& g,
                                                std::uint64_t p,
                                                std::uint64_t bound = kDefaultEnumerationBound);

/// Elements of an explicit finite abelian p-group, indexed 0 .. order-1 by
/// mixed radix over the coordinates (first coordinate least significant).
class ExplicitGroup {
public:
    ExplicitGroup(GroupType type, std::uint64_t p, std::uint64_t bound = kDefaultEnumerationBound);

    const GroupType& type() const { return type_; }
    std::uint64_t p() const { return p_; }
    std::uint64_t order() const { return order_; }
    std::span<const std::uint64_t> moduli() const { return moduli_; }

    std::vector<std::uint64_t> coordinates(std::uint64_t index) const;
    std::uint64_t index(std::span<const std::uint64_t> coords) const;
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t scale(std::uint64_t a, std::uint64_t k) const;
    /// log_p of the order of an element.
    int order_exponent(std::uint64_t a) const;

private:
    GroupType type_;
    std::uint64_t p_;
    std::vector<std::uint64_t> moduli_;
    std::uint64_t order_ = 1;
};

}  // namespace eigenlab
