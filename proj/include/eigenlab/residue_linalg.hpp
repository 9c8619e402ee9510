#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace eigenlab {

class GroupType;

/// The ring Z/p^f.  Residues are held in 64-bit words, so the modulus is
/// capped at 2^31 (products of two residues never overflow).
class RingSpec {
public:
    static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

    RingSpec(std::uint64_t p, int f);

    std::uint64_t p() const { return p_; }
    int f() const { return f_; }
    std::uint64_t modulus() const { return modulus_; }

    /// p^k for 0 <= k <= f.
    std::uint64_t power(int k) const;

    /// p-adic valuation of a residue; zero reports f.
    int valuation(std::uint64_t x) const;

    std::uint64_t reduce(std::int64_t x) const;
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % modulus_; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + modulus_ - b) % modulus_; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % modulus_; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : modulus_ - a; }

    /// Inverse of a unit (valuation 0).  Throws std::domain_error otherwise.
    std::uint64_t unit_inverse(std::uint64_t a) const;

    friend bool operator==(const RingSpec&, const RingSpec&) = default;

private:
    std::uint64_t p_;
    int f_;
    std::uint64_t modulus_;
};

bool is_prime(std::uint64_t n);

/// Square matrix over Z/p^f, row-major.
class RMatrix {
public:
    RMatrix(RingSpec ring, std::size_t dim);
    RMatrix(RingSpec ring, std::size_t dim, std::vector<std::uint64_t> entries);
    RMatrix(RingSpec ring, std::size_t dim, std::span<const std::int64_t> entries);

    static RMatrix identity(RingSpec ring, std::size_t dim);
    static RMatrix zero(RingSpec ring, std::size_t dim) { return RMatrix(ring, dim); }
    static RMatrix diagonal(RingSpec ring, std::span<const std::int64_t> diag);

    const RingSpec& ring() const { return ring_; }
    std::size_t dim() const { return dim_; }
    std::span<const std::uint64_t> entries() const { return entries_; }

    std::uint64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    void set(std::size_t i, std::size_t j, std::int64_t value) { entries_[i * dim_ + j] = ring_.reduce(value); }

    RMatrix operator*(const RMatrix& rhs) const;
    RMatrix operator+(const RMatrix& rhs) const;
    RMatrix operator-(const RMatrix& rhs) const;
    RMatrix transpose() const;

    /// Same residues read in a ring Z/p^g with g >= f (an arbitrary lift).
    RMatrix lift(const RingSpec& larger) const;
    /// Reduction into Z/p^g with g <= f.
    RMatrix reduce(const RingSpec& smaller) const;

    std::string to_string() const;

    friend bool operator==(const RMatrix&, const RMatrix&) = default;

private:
    RingSpec ring_;
    std::size_t dim_;
    std::vector<std::uint64_t> entries_;
};

/// Smith form over Z/p^f together with the transformation witnesses:
/// left * a * right == diag(p^v_1, ..., p^v_d) with v ascending.
struct LocalSnf {
    std::vector<int> valuations;
    RMatrix left;
    RMatrix right;
};

std::vector<int> local_snf(const RMatrix& a);
LocalSnf local_snf_with_transform(const RMatrix& a);

/// Partition of ker(x -> a x) on (Z/p^f)^d.
GroupType kernel_type(const RMatrix& a);

bool is_invertible(const RMatrix& a);

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Smith invariants d_1 | d_2 | ... of a rectangular integer matrix, min(rows, cols) of them.
std::vector<mpz_class> integer_snf(IntMatrix a);

}  // namespace eigenlab
