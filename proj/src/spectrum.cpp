#include "eigenlab/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "eigenlab/heuristics.hpp"

namespace eigenlab {

double SpectrumReport::frequency(const GroupType& g) const {
    if (total == 0)
        return 0.0;
    auto it = counts.find(g);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

GroupType fixed_space_type(const RMatrix& g) { return kernel_type(g - RMatrix::identity(g.ring(), g.dim())); }

SpectrumReport exhaustive_spectrum(const GroupSpec& spec, std::uint64_t bound) {
    SpectrumReport rep{spec, SpectrumMode::exhaustive, {}, 0, std::nullopt, 1};
    enumerate(
        spec,
        [&](const RMatrix& g) {
            ++rep.counts[fixed_space_type(g)];
            ++rep.total;
            return true;
        },
        bound);
    return rep;
}

SpectrumReport mc_spectrum(const GroupSpec& spec, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    if (samples == 0)
        throw std::invalid_argument("mc_spectrum: samples must be >= 1");
    if (workers == 0)
        throw std::invalid_argument("mc_spectrum: workers must be >= 1");

    std::vector<std::map<GroupType, std::uint64_t>> partial(workers);
    auto run = [&](unsigned w) {
        const std::uint64_t share = samples / workers + (w < samples % workers ? 1 : 0);
        Sampler sampler(spec, hash64(seed, w));
        auto& counts = partial[w];
        for (std::uint64_t s = 0; s < share; ++s)
            ++counts[fixed_space_type(sampler.draw())];
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
    }

    SpectrumReport rep{spec, SpectrumMode::montecarlo, {}, samples, seed, workers};
    for (const auto& counts : partial)
        for (const auto& [g, c] : counts)
            rep.counts[g] += c;
    return rep;
}

SpectrumReport merge(const SpectrumReport& a, const SpectrumReport& b) {
    if (!(a.spec == b.spec))
        throw std::invalid_argument("merge: reports describe different groups");
    if (a.mode != b.mode)
        throw std::invalid_argument("merge: reports have different modes");
    SpectrumReport out = a;
    for (const auto& [g, c] : b.counts)
        out.counts[g] += c;
    out.total += b.total;
    if (a.seed != b.seed)
        out.seed.reset();
    out.workers = a.workers + b.workers;
    return out;
}

std::vector<TheoryVerdict> compare_to_theory(const SpectrumReport& report, double tol_sigma, double tol_abs,
                                             std::span<const GroupType> groups) {
    const auto& spec = report.spec;
    if (spec.m > 2)
        throw std::domain_error("no closed form for P_{m,q} with m >= 3");
    if (report.total == 0)
        throw std::invalid_argument("compare_to_theory: empty report");

    std::vector<GroupType> targets(groups.begin(), groups.end());
    if (targets.empty()) {
        for (const auto& [g, c] : report.counts)
            if (g.exponent() <= spec.f - 1)
                targets.push_back(g);
    }
    std::vector<TheoryVerdict> out;
    for (const auto& g : targets) {
        if (g.exponent() > spec.f - 1)
            throw std::invalid_argument("type " + g.to_string() + " is not annihilated by p^(f-1)");
        TheoryVerdict v;
        v.group = g;
        v.observed = report.frequency(g);
        v.predicted = p_closed(spec.m, spec.p, g);
        const double pr = v.predicted.value;
        v.se = report.mode == SpectrumMode::exhaustive
                   ? 0.0
                   : std::sqrt(pr * (1 - pr) / static_cast<double>(report.total));
        const double diff = v.observed - pr;
        v.z = v.se > 0 ? diff / v.se : (diff == 0 ? 0.0 : std::copysign(INFINITY, diff));
        v.pass = std::fabs(diff) <= tol_sigma * v.se + tol_abs + v.predicted.err;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace eigenlab
