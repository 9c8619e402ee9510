#include "eigenlab/residue_linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "eigenlab/pgroups.hpp"

namespace eigenlab {

bool is_prime(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

RingSpec::RingSpec(std::uint64_t p, int f) : p_(p), f_(f), modulus_(1) {
    if (!is_prime(p))
        throw std::invalid_argument("ring characteristic p=" + std::to_string(p) + " is not prime");
    if (f < 1)
        throw std::invalid_argument("ring exponent f must be >= 1");
    for (int i = 0; i < f; ++i) {
        modulus_ *= p;
        if (modulus_ > kMaxModulus)
            throw std::overflow_error("modulus p^f exceeds 2^31");
    }
}

std::uint64_t RingSpec::power(int k) const {
    if (k < 0 || k > f_)
        throw std::out_of_range("power exponent outside [0, f]");
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i)
        r *= p_;
    return r;
}

int RingSpec::valuation(std::uint64_t x) const {
    x %= modulus_;
    if (x == 0)
        return f_;
    int v = 0;
    while (x % p_ == 0) {
        x /= p_;
        ++v;
    }
    return v;
}

std::uint64_t RingSpec::reduce(std::int64_t x) const {
    auto m = static_cast<std::int64_t>(modulus_);
    auto r = x % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

std::uint64_t RingSpec::unit_inverse(std::uint64_t a) const {
    std::int64_t r0 = static_cast<std::int64_t>(modulus_), r1 = static_cast<std::int64_t>(a % modulus_);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        auto q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
        std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
    }
    if (r0 != 1)
        throw std::domain_error("residue is not a unit");
    return reduce(s0);
}

RMatrix::RMatrix(RingSpec ring, std::size_t dim) : ring_(ring), dim_(dim), entries_(dim * dim, 0) {
    if (dim == 0)
        throw std::invalid_argument("matrix dimension must be positive");
}

RMatrix::RMatrix(RingSpec ring, std::size_t dim, std::vector<std::uint64_t> entries)
    : ring_(ring), dim_(dim), entries_(std::move(entries)) {
    if (dim == 0 || entries_.size() != dim * dim)
        throw std::invalid_argument("entry count does not match dimension");
    for (auto& e : entries_)
        e %= ring_.modulus();
}

RMatrix::RMatrix(RingSpec ring, std::size_t dim, std::span<const std::int64_t> entries)
    : ring_(ring), dim_(dim), entries_(dim * dim) {
    if (dim == 0 || entries.size() != dim * dim)
        throw std::invalid_argument("entry count does not match dimension");
    std::ranges::transform(entries, entries_.begin(), [&](std::int64_t x) { return ring_.reduce(x); });
}

RMatrix RMatrix::identity(RingSpec ring, std::size_t dim) {
    RMatrix r(ring, dim);
    for (std::size_t i = 0; i < dim; ++i)
        r.entries_[i * dim + i] = 1 % ring.modulus();
    return r;
}

RMatrix RMatrix::diagonal(RingSpec ring, std::span<const std::int64_t> diag) {
    RMatrix r(ring, diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
        r.set(i, i, diag[i]);
    return r;
}

RMatrix RMatrix::operator*(const RMatrix& rhs) const {
    if (!(ring_ == rhs.ring_) || dim_ != rhs.dim_)
        throw std::invalid_argument("matrix product: ring or dimension mismatch");
    RMatrix out(ring_, dim_);
    const auto m = ring_.modulus();
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = 0; k < dim_; ++k) {
            auto a = entries_[i * dim_ + k];
            if (a == 0)
                continue;
            const auto* row = &rhs.entries_[k * dim_];
            auto* dst = &out.entries_[i * dim_];
            for (std::size_t j = 0; j < dim_; ++j)
                dst[j] = (dst[j] + a * row[j]) % m;
        }
    }
    return out;
}

RMatrix RMatrix::operator+(const RMatrix& rhs) const {
    if (!(ring_ == rhs.ring_) || dim_ != rhs.dim_)
        throw std::invalid_argument("matrix sum: ring or dimension mismatch");
    RMatrix out(ring_, dim_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = ring_.add(entries_[i], rhs.entries_[i]);
    return out;
}

RMatrix RMatrix::operator-(const RMatrix& rhs) const {
    if (!(ring_ == rhs.ring_) || dim_ != rhs.dim_)
        throw std::invalid_argument("matrix difference: ring or dimension mismatch");
    RMatrix out(ring_, dim_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = ring_.sub(entries_[i], rhs.entries_[i]);
    return out;
}

RMatrix RMatrix::transpose() const {
    RMatrix out(ring_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            out.entries_[j * dim_ + i] = entries_[i * dim_ + j];
    return out;
}

RMatrix RMatrix::lift(const RingSpec& larger) const {
    if (larger.p() != ring_.p() || larger.f() < ring_.f())
        throw std::invalid_argument("lift target must be Z/p^g with g >= f");
    return RMatrix(larger, dim_, entries_);
}

RMatrix RMatrix::reduce(const RingSpec& smaller) const {
    if (smaller.p() != ring_.p() || smaller.f() > ring_.f())
        throw std::invalid_argument("reduction target must be Z/p^g with g <= f");
    return RMatrix(smaller, dim_, entries_);
}

std::string RMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < dim_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < dim_; ++j)
            os << (j ? "," : "") << (*this)(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

namespace {

// Valuation pivoting on a working copy.  Row operations are mirrored into
// `left` and column operations into `right` when those are non-null.
std::vector<int> reduce_local(std::vector<std::uint64_t> a, const RingSpec& ring, std::size_t d,
                              std::vector<std::uint64_t>* left, std::vector<std::uint64_t>* right) {
    const auto m = ring.modulus();
    auto at = [&](std::size_t i, std::size_t j) -> std::uint64_t& { return a[i * d + j]; };
    auto swap_rows = [&](std::vector<std::uint64_t>& mat, std::size_t r1, std::size_t r2) {
        for (std::size_t j = 0; j < d; ++j)
            std::swap(mat[r1 * d + j], mat[r2 * d + j]);
    };
    auto swap_cols = [&](std::vector<std::uint64_t>& mat, std::size_t c1, std::size_t c2) {
        for (std::size_t i = 0; i < d; ++i)
            std::swap(mat[i * d + c1], mat[i * d + c2]);
    };
    // row_dst -= c * row_src
    auto axpy_rows = [&](std::vector<std::uint64_t>& mat, std::size_t dst, std::size_t src, std::uint64_t c) {
        const auto nc = (m - c % m) % m;
        for (std::size_t j = 0; j < d; ++j)
            mat[dst * d + j] = (mat[dst * d + j] + nc * mat[src * d + j]) % m;
    };
    auto axpy_cols = [&](std::vector<std::uint64_t>& mat, std::size_t dst, std::size_t src, std::uint64_t c) {
        const auto nc = (m - c % m) % m;
        for (std::size_t i = 0; i < d; ++i)
            mat[i * d + dst] = (mat[i * d + dst] + nc * mat[i * d + src]) % m;
    };

    std::vector<int> vals(d, ring.f());
    for (std::size_t k = 0; k < d; ++k) {
        int best = ring.f();
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < d && best > 0; ++i)
            for (std::size_t j = k; j < d; ++j) {
                int v = ring.valuation(at(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0)
                        break;
                }
            }
        if (best == ring.f())
            break;  // remaining block is zero
        if (bi != k) {
            swap_rows(a, k, bi);
            if (left)
                swap_rows(*left, k, bi);
        }
        if (bj != k) {
            swap_cols(a, k, bj);
            if (right)
                swap_cols(*right, k, bj);
        }
        const auto pv = ring.power(best);
        // normalize the unit cofactor so the pivot is exactly p^v
        const auto unit = at(k, k) / pv;
        if (unit != 1) {
            const auto inv = ring.unit_inverse(unit);
            for (std::size_t j = 0; j < d; ++j)
                at(k, j) = at(k, j) * inv % m;
            if (left)
                for (std::size_t j = 0; j < d; ++j)
                    (*left)[k * d + j] = (*left)[k * d + j] * inv % m;
        }
        for (std::size_t i = k + 1; i < d; ++i) {
            if (auto x = at(i, k); x != 0) {
                const auto c = x / pv;
                axpy_rows(a, i, k, c);
                if (left)
                    axpy_rows(*left, i, k, c);
            }
        }
        for (std::size_t j = k + 1; j < d; ++j) {
            if (auto x = at(k, j); x != 0) {
                const auto c = x / pv;
                axpy_cols(a, j, k, c);
                if (right)
                    axpy_cols(*right, j, k, c);
            }
        }
        vals[k] = best;
    }
    return vals;
}

}  // namespace

std::vector<int> local_snf(const RMatrix& a) {
    return reduce_local({a.entries().begin(), a.entries().end()}, a.ring(), a.dim(), nullptr, nullptr);
}

LocalSnf local_snf_with_transform(const RMatrix& a) {
    const auto d = a.dim();
    auto id = RMatrix::identity(a.ring(), d);
    std::vector<std::uint64_t> left(id.entries().begin(), id.entries().end());
    std::vector<std::uint64_t> right = left;
    auto vals = reduce_local({a.entries().begin(), a.entries().end()}, a.ring(), d, &left, &right);
    return {std::move(vals), RMatrix(a.ring(), d, std::move(left)), RMatrix(a.ring(), d, std::move(right))};
}

GroupType kernel_type(const RMatrix& a) {
    auto vals = local_snf(a);
    return GroupType::from_unsorted(std::move(vals));
}

bool is_invertible(const RMatrix& a) {
    auto vals = local_snf(a);
    return std::ranges::all_of(vals, [](int v) { return v == 0; });
}

std::vector<mpz_class> integer_snf(IntMatrix a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a.front().size() : 0;
    for (const auto& row : a)
        if (row.size() != cols)
            throw std::invalid_argument("integer_snf: ragged matrix");
    const std::size_t n = std::min(rows, cols);
    std::vector<mpz_class> inv;
    inv.reserve(n);

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (sgn(a[i][j]) != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == rows) {
                inv.resize(n, mpz_class(0));
                return inv;
            }
            std::swap(a[t], a[pi]);
            for (auto& row : a)
                std::swap(row[t], row[pj]);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (sgn(a[i][t]) == 0)
                    continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t j = t; j < cols; ++j)
                    a[i][j] -= q * a[t][j];
                clean = clean && sgn(a[i][t]) == 0;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (sgn(a[t][j]) == 0)
                    continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t i = t; i < rows; ++i)
                    a[i][j] -= q * a[i][t];
                clean = clean && sgn(a[t][j]) == 0;
            }
            if (!clean)
                continue;
            // pivot must divide the whole trailing block
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == rows)
                break;
            for (std::size_t j = t; j < cols; ++j)
                a[t][j] += a[bad][j];
        }
        inv.push_back(abs(a[t][t]));
    }
    return inv;
}

}  // namespace eigenlab
