#include "eigenlab/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace eigenlab {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

// bound on the rounding of one floating-point operation producing r
double rounding(double r) { return 2.0 * kUlp * std::fabs(r) + std::numeric_limits<double>::denorm_min(); }

}  // namespace

ApproxValue ApproxValue::from_rational(const mpq_class& x) {
    double v = x.get_d();
    return {v, rounding(v)};
}

ApproxValue operator+(const ApproxValue& a, const ApproxValue& b) {
    double v = a.value + b.value;
    return {v, a.err + b.err + rounding(v)};
}

ApproxValue operator-(const ApproxValue& a, const ApproxValue& b) {
    double v = a.value - b.value;
    return {v, a.err + b.err + rounding(v)};
}

ApproxValue operator*(const ApproxValue& a, const ApproxValue& b) {
    double v = a.value * b.value;
    double e = std::fabs(a.value) * b.err + std::fabs(b.value) * a.err + a.err * b.err;
    return {v, e + rounding(v)};
}

ApproxValue operator/(const ApproxValue& a, const ApproxValue& b) {
    const double mag = std::fabs(b.value);
    if (!(mag > b.err))
        throw std::domain_error("division by an interval containing zero");
    double v = a.value / b.value;
    // |a/b - a'/b'| <= (|a| e_b + |b| e_a) / (|b| (|b| - e_b))
    double e = (std::fabs(a.value) * b.err + mag * a.err) / (mag * (mag - b.err));
    return {v, e + rounding(v)};
}

ApproxValue operator*(const ApproxValue& a, const mpq_class& b) { return a * ApproxValue::from_rational(b); }

std::string ApproxValue::to_string() const {
    std::ostringstream os;
    os.precision(12);
    os << value << " +/- ";
    os.precision(2);
    os << err;
    return os.str();
}

mpq_class poch_finite(std::uint64_t q, int r) {
    if (q < 2)
        throw std::invalid_argument("poch_finite: q must be >= 2");
    if (r < 0)
        throw std::invalid_argument("poch_finite: r must be >= 0");
    mpz_class num = 1, den = 1, qi = 1;
    for (int i = 1; i <= r; ++i) {
        qi *= static_cast<unsigned long>(q);
        num *= qi - 1;
        den *= qi;
    }
    mpq_class out(num, den);
    out.canonicalize();
    return out;
}

int poch_truncation_index(std::uint64_t q, double eps) {
    if (q < 2)
        throw std::invalid_argument("poch_infinite: q must be >= 2");
    if (!(eps > 0))
        throw std::invalid_argument("poch_infinite: eps must be positive");
    // P_N <= 1, so q^{-N}/(q-1) < eps/2 suffices and leaves room for rounding
    const double lq = std::log(static_cast<double>(q));
    int n = static_cast<int>(std::ceil((std::log(2.0 / eps) - std::log(static_cast<double>(q - 1))) / lq));
    return std::max(n, 1) + 1;
}

ApproxValue poch_infinite(std::uint64_t q, double eps) {
    const int n = poch_truncation_index(q, eps);
    const mpq_class partial = poch_finite(q, n);
    mpz_class qn;
    mpz_ui_pow_ui(qn.get_mpz_t(), q, static_cast<unsigned long>(n));
    // true value in [partial * (1 - tail), partial]
    const mpq_class tail(mpz_class(1), qn * static_cast<unsigned long>(q - 1));
    const mpq_class lo = partial * (1 - tail);
    const mpq_class mid = (partial + lo) / 2;
    const mpq_class half = (partial - lo) / 2;
    auto out = ApproxValue::from_rational(mid);
    out.err += half.get_d() * (1 + 4 * kUlp);
    if (!(out.err <= eps))
        throw std::logic_error("poch_infinite: certified bound exceeds eps");
    return out;
}

}  // namespace eigenlab
