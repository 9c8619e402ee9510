#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include <gmpxx.h>

#include "eigenlab/residue_linalg.hpp"

namespace eigenlab {

/// Names the group Sp^(m)_{2n}(Z/p^f) = { h in GL_2n(Z/p^f) : h^T J h = J mod p^m }.
/// m = 0 is GL_2n, m = f is the full symplectic group.
struct GroupSpec {
    std::uint64_t p;
    int f;
    int m;
    int n;

    GroupSpec(std::uint64_t p, int f, int m, int n);

    RingSpec ring() const { return RingSpec(p, f); }
    std::size_t dim() const { return static_cast<std::size_t>(2 * n); }
    std::string to_string() const;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// J_n = [[0, 1_n], [-1_n, 0]].
RMatrix standard_form(const RingSpec& ring, int n);

bool contains(const RMatrix& h, const GroupSpec& spec);

/// Inverse over Z/p^f via the Smith witnesses; throws std::domain_error for singular input.
RMatrix inverse(const RMatrix& a);

mpz_class gl_order(std::uint64_t q, int d);
mpz_class sp_order(std::uint64_t q, int n);
mpz_class order(const GroupSpec& spec);

inline constexpr std::uint64_t kDefaultCandidateBound = std::uint64_t{1} << 24;

/// Number of candidate matrices an exhaustive scan has to visit, p^{f (2n)^2};
/// saturates at UINT64_MAX.
std::uint64_t candidate_count(const GroupSpec& spec);

/// Streams every member to `visit` in lexicographic entry order.  Returning
/// false from the visitor stops the scan.  Throws std::length_error when the
/// candidate count exceeds `bound`.
void enumerate(const GroupSpec& spec, const std::function<bool(const RMatrix&)>& visit,
               std::uint64_t bound = kDefaultCandidateBound);

/// Mixes a base seed with a worker index (splitmix64 finalizer).
std::uint64_t hash64(std::uint64_t seed, std::uint64_t index);

/// Exactly uniform sampler on Sp^(m)_{2n}(Z/p^f).  Every stage draws
/// uniformly from a fiber of constant size:
///   1. Sp_2n(F_p) by symplectic Gram-Schmidt: e uniform among the p^{2k}-1
///      nonzero vectors of the current complement (dim 2k), a partner v with
///      <e,v> = 1 uniform among its p^{2k-1} solutions.
///   2. each level Sp(Z/p^{k+1}) -> Sp(Z/p^k) for k < m: a fixed symplectic
///      lift times 1 + p^k X, X uniform among the p^{2n^2+n} matrices with J X
///      symmetric mod p.
///   3. Z/p^m -> Z/p^f: add p^m U, U uniform, p^{4n^2(f-m)} choices.
/// For m = 0, stages 1-2 are replaced by rejection sampling of GL_2n(F_p).
class Sampler {
public:
    Sampler(GroupSpec spec, std::uint64_t seed);

    const GroupSpec& spec() const { return spec_; }
    RMatrix draw();

private:
    std::uint64_t below(std::uint64_t bound);
    std::vector<std::uint64_t> draw_symplectic_mod_p();
    std::vector<std::uint64_t> draw_gl_mod_p();
    void lift_level(std::vector<std::uint64_t>& h, int k);

    GroupSpec spec_;
    std::mt19937_64 engine_;
};

RMatrix sample_uniform(const GroupSpec& spec, std::uint64_t seed);

struct SelftestReport {
    double chi2 = 0.0;
    std::uint64_t dof = 0;
    double critical = 0.0;
    bool pass = false;
};

/// Chi-square goodness of fit of `samples` draws against the uniform
/// distribution on the enumerated group; passes iff chi2 is below the
/// `significance` quantile.
SelftestReport sampler_selftest(const GroupSpec& spec, std::uint64_t samples, double significance,
                                std::uint64_t seed = 1);

}  // namespace eigenlab
