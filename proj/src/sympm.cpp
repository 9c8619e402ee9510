#include "eigenlab/sympm.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace eigenlab {

GroupSpec::GroupSpec(std::uint64_t p_, int f_, int m_, int n_) : p(p_), f(f_), m(m_), n(n_) {
    if (!is_prime(p))
        throw std::invalid_argument("p=" + std::to_string(p) + " is not prime");
    if (f < 1)
        throw std::invalid_argument("f must be >= 1");
    if (m < 0 || m > f)
        throw std::invalid_argument("m must satisfy 0 <= m <= f (got m=" + std::to_string(m) +
                                    ", f=" + std::to_string(f) + ")");
    if (n < 1)
        throw std::invalid_argument("n must be >= 1");
    (void)ring();  // modulus range check
}

std::string GroupSpec::to_string() const {
    std::ostringstream os;
    os << "(p=" << p << ",f=" << f << ",m=" << m << ",n=" << n << ")";
    return os.str();
}

RMatrix standard_form(const RingSpec& ring, int n) {
    const auto d = static_cast<std::size_t>(2 * n);
    RMatrix j(ring, d);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        j.set(i, i + n, 1);
        j.set(i + n, i, -1);
    }
    return j;
}

bool contains(const RMatrix& h, const GroupSpec& spec) {
    if (!(h.ring() == spec.ring()) || h.dim() != spec.dim())
        throw std::invalid_argument("matrix does not match group " + spec.to_string());
    if (!is_invertible(h.reduce(RingSpec(spec.p, 1))))
        return false;
    if (spec.m == 0)
        return true;
    const auto j = standard_form(h.ring(), spec.n);
    const auto defect = h.transpose() * j * h - j;
    const auto pm = h.ring().power(spec.m);
    for (auto x : defect.entries())
        if (x % pm != 0)
            return false;
    return true;
}

RMatrix inverse(const RMatrix& a) {
    auto snf = local_snf_with_transform(a);
    for (int v : snf.valuations)
        if (v != 0)
            throw std::domain_error("matrix is not invertible");
    // U a V = 1  =>  a^{-1} = V U
    return snf.right * snf.left;
}

mpz_class gl_order(std::uint64_t q, int d) {
    mpz_class qd, qi = 1, out = 1;
    mpz_ui_pow_ui(qd.get_mpz_t(), q, static_cast<unsigned long>(d));
    for (int i = 0; i < d; ++i) {
        out *= qd - qi;
        qi *= static_cast<unsigned long>(q);
    }
    return out;
}

mpz_class sp_order(std::uint64_t q, int n) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), q, static_cast<unsigned long>(n) * static_cast<unsigned long>(n));
    mpz_class q2i = 1;
    for (int i = 1; i <= n; ++i) {
        q2i *= static_cast<unsigned long>(q * q);
        out *= q2i - 1;
    }
    return out;
}

namespace {

mpz_class qpow(std::uint64_t q, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), q, static_cast<unsigned long>(e));
    return r;
}

// |Sp_2n(Z/p^f)|
mpz_class sp_order_local(std::uint64_t q, int n, int f) {
    return qpow(q, static_cast<long>(2 * n * n + n) * (f - 1)) * sp_order(q, n);
}

}  // namespace

mpz_class order(const GroupSpec& spec) {
    const long n2 = static_cast<long>(spec.n) * spec.n;
    if (spec.m == 0)
        return qpow(spec.p, 4 * n2 * (spec.f - 1)) * gl_order(spec.p, 2 * spec.n);
    if (spec.m == spec.f)
        return sp_order_local(spec.p, spec.n, spec.f);
    return qpow(spec.p, 4 * n2 * (spec.f - spec.m)) * sp_order_local(spec.p, spec.n, spec.m);
}

std::uint64_t candidate_count(const GroupSpec& spec) {
    const auto cells = spec.dim() * spec.dim() * static_cast<std::size_t>(spec.f);
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < cells; ++i) {
        if (c > std::numeric_limits<std::uint64_t>::max() / spec.p)
            return std::numeric_limits<std::uint64_t>::max();
        c *= spec.p;
    }
    return c;
}

void enumerate(const GroupSpec& spec, const std::function<bool(const RMatrix&)>& visit, std::uint64_t bound) {
    if (candidate_count(spec) > bound)
        throw std::length_error("enumeration of " + spec.to_string() + " exceeds the candidate bound");
    const auto ring = spec.ring();
    const auto cells = spec.dim() * spec.dim();
    std::vector<std::uint64_t> entries(cells, 0);
    for (;;) {
        RMatrix h(ring, spec.dim(), entries);
        if (contains(h, spec) && !visit(h))
            return;
        // odometer with the last entry fastest
        std::size_t i = cells;
        while (i > 0) {
            --i;
            if (++entries[i] < ring.modulus())
                break;
            entries[i] = 0;
            if (i == 0)
                return;
        }
    }
}

std::uint64_t hash64(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Sampler::Sampler(GroupSpec spec, std::uint64_t seed) : spec_(spec), engine_(seed) {}

std::uint64_t Sampler::below(std::uint64_t bound) {
    // unbiased: reject the low residue class that would overweight small values
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r < threshold);
    return r % bound;
}

namespace {

struct ModP {
    std::uint64_t p;
    std::size_t n;  // half dimension

    // <x, y> = x^T J y
    std::uint64_t form(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) const {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s = (s + x[i] * y[n + i] + (p - x[n + i]) * y[i]) % p;
        return s;
    }

    // x - sum_i (<x,f_i> e_i - <x,e_i> f_i)
    void project(std::vector<std::uint64_t>& x, const std::vector<std::vector<std::uint64_t>>& es,
                 const std::vector<std::vector<std::uint64_t>>& fs) const {
        const auto orig = x;
        for (std::size_t k = 0; k < es.size(); ++k) {
            const auto a = form(orig, fs[k]);
            const auto b = form(orig, es[k]);
            for (std::size_t i = 0; i < 2 * n; ++i)
                x[i] = (x[i] + (p - a) * es[k][i] + b * fs[k][i]) % p;
        }
    }
};

}  // namespace

std::vector<std::uint64_t> Sampler::draw_symplectic_mod_p() {
    const std::size_t n = static_cast<std::size_t>(spec_.n), d = 2 * n;
    const ModP ctx{spec_.p, n};
    std::vector<std::vector<std::uint64_t>> es, fs;
    std::vector<std::uint64_t> x(d);
    auto uniform_in_complement = [&] {
        for (auto& c : x)
            c = below(spec_.p);
        ctx.project(x, es, fs);
    };
    for (std::size_t k = 0; k < n; ++k) {
        do {
            uniform_in_complement();
        } while (std::ranges::all_of(x, [](auto c) { return c == 0; }));
        auto e = x;
        do {
            uniform_in_complement();
        } while (ctx.form(e, x) != 1);
        es.push_back(std::move(e));
        fs.push_back(x);
    }
    std::vector<std::uint64_t> h(d * d);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < d; ++i) {
            h[i * d + k] = es[k][i];
            h[i * d + n + k] = fs[k][i];
        }
    return h;
}

std::vector<std::uint64_t> Sampler::draw_gl_mod_p() {
    const auto d = spec_.dim();
    const RingSpec field(spec_.p, 1);
    std::vector<std::uint64_t> h(d * d);
    for (;;) {
        for (auto& c : h)
            c = below(spec_.p);
        if (is_invertible(RMatrix(field, d, h)))
            return h;
    }
}

void Sampler::lift_level(std::vector<std::uint64_t>& h, int k) {
    const auto d = spec_.dim();
    const auto n = static_cast<std::size_t>(spec_.n);
    const auto p = spec_.p;
    const RingSpec next(p, k + 1);
    const auto pk = next.power(k);
    const RMatrix hl(next, d, h);
    const auto j = standard_form(next, spec_.n);
    const auto defect = hl.transpose() * j * hl - j;  // = p^k E, E alternating mod p

    // T with T - T^T = -E (strict lower part of -E) plus a uniform symmetric matrix
    std::vector<std::int64_t> t(d * d, 0);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            if (r > c)
                t[r * d + c] = static_cast<std::int64_t>((p - (defect(r, c) / pk) % p) % p);
        }
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = r; c < d; ++c) {
            auto s = static_cast<std::int64_t>(below(p));
            t[r * d + c] += s;
            if (c != r)
                t[c * d + r] += s;
        }
    // X = -J T, so J X = T; h <- h (1 + p^k X)
    std::vector<std::int64_t> step(d * d, 0);
    for (std::size_t r = 0; r < d; ++r) {
        // row r of -J: (-J)_{r, r+n} = -1 for r < n, (-J)_{r, r-n} = 1 for r >= n
        const std::size_t src = r < n ? r + n : r - n;
        const std::int64_t sign = r < n ? -1 : 1;
        for (std::size_t c = 0; c < d; ++c)
            step[r * d + c] = sign * t[src * d + c] * static_cast<std::int64_t>(pk);
    }
    for (std::size_t r = 0; r < d; ++r)
        step[r * d + r] += 1;
    const auto lifted = hl * RMatrix(next, d, std::span<const std::int64_t>(step));
    h.assign(lifted.entries().begin(), lifted.entries().end());
}

RMatrix Sampler::draw() {
    const auto d = spec_.dim();
    std::vector<std::uint64_t> h;
    int level = 1;
    if (spec_.m == 0) {
        h = draw_gl_mod_p();
    } else {
        h = draw_symplectic_mod_p();
        for (; level < spec_.m; ++level)
            lift_level(h, level);
    }
    const auto ring = spec_.ring();
    const auto base = ring.power(level);
    const auto fiber = ring.modulus() / base;
    for (auto& c : h)
        c += base * below(fiber);
    return RMatrix(ring, d, std::move(h));
}

RMatrix sample_uniform(const GroupSpec& spec, std::uint64_t seed) { return Sampler(spec, seed).draw(); }

SelftestReport sampler_selftest(const GroupSpec& spec, std::uint64_t samples, double significance,
                                std::uint64_t seed) {
    if (samples == 0)
        throw std::invalid_argument("insufficient samples");
    if (!(significance > 0 && significance < 1))
        throw std::invalid_argument("significance must lie in (0, 1)");
    std::map<std::vector<std::uint64_t>, std::size_t> index;
    enumerate(spec, [&](const RMatrix& h) {
        index.emplace(std::vector<std::uint64_t>(h.entries().begin(), h.entries().end()), index.size());
        return true;
    });
    std::vector<std::uint64_t> observed(index.size(), 0);
    Sampler sampler(spec, seed);
    for (std::uint64_t s = 0; s < samples; ++s) {
        auto h = sampler.draw();
        auto it = index.find(std::vector<std::uint64_t>(h.entries().begin(), h.entries().end()));
        if (it == index.end())
            throw std::logic_error("sampler produced a non-member of " + spec.to_string());
        ++observed[it->second];
    }
    SelftestReport rep;
    const double expected = static_cast<double>(samples) / static_cast<double>(index.size());
    for (auto o : observed) {
        const double diff = static_cast<double>(o) - expected;
        rep.chi2 += diff * diff / expected;
    }
    rep.dof = index.size() - 1;
    if (rep.dof == 0) {
        rep.pass = true;
        return rep;
    }
    boost::math::chi_squared dist(static_cast<double>(rep.dof));
    rep.critical = boost::math::quantile(dist, significance);
    rep.pass = rep.chi2 < rep.critical;
    return rep;
}

}  // namespace eigenlab
