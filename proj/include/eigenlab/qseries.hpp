#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace eigenlab {

inline constexpr double kDefaultEps = 1e-12;

/// A real number known up to a certified absolute error: the true value lies
/// in [value - err, value + err].  Arithmetic propagates the bound and adds a
/// few ulps for the floating-point rounding of the result.
struct ApproxValue {
    double value = 0.0;
    double err = 0.0;

    static ApproxValue exact(double v) { return {v, 0.0}; }
    /// Nearest double to a rational, with err covering the conversion.
    static ApproxValue from_rational(const mpq_class& x);

    double lower() const { return value - err; }
    double upper() const { return value + err; }
    bool contains(double x) const { return lower() <= x && x <= upper(); }

    ApproxValue operator-() const { return {-value, err}; }
    friend ApproxValue operator+(const ApproxValue& a, const ApproxValue& b);
    friend ApproxValue operator-(const ApproxValue& a, const ApproxValue& b);
    friend ApproxValue operator*(const ApproxValue& a, const ApproxValue& b);
    /// Throws std::domain_error unless |b| is bounded away from zero.
    friend ApproxValue operator/(const ApproxValue& a, const ApproxValue& b);
    friend ApproxValue operator*(const ApproxValue& a, const mpq_class& b);

    std::string to_string() const;
};

/// (q)_r = prod_{i=1}^{r} (1 - q^{-i}), exactly.
mpq_class poch_finite(std::uint64_t q, int r);

/// (q)_inf within eps.  Truncating at N leaves a factor in
/// [1 - q^{-N}/(q-1), 1], so N is the first index with P_N q^{-N}/(q-1) < eps.
ApproxValue poch_infinite(std::uint64_t q, double eps = kDefaultEps);

/// Truncation index poch_infinite uses for the given q and eps.
int poch_truncation_index(std::uint64_t q, double eps);

}  // namespace eigenlab
