#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "eigenlab/pgroups.hpp"
#include "eigenlab/qseries.hpp"
#include "eigenlab/sympm.hpp"

namespace eigenlab {

enum class SpectrumMode { exhaustive, montecarlo };

/// Counts of ker(g - 1) types over a group, either over every element or over
/// uniform samples.
struct SpectrumReport {
    GroupSpec spec;
    SpectrumMode mode = SpectrumMode::montecarlo;
    std::map<GroupType, std::uint64_t> counts;
    std::uint64_t total = 0;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;

    double frequency(const GroupType& g) const;
};

/// Kernel type of g - 1.
GroupType fixed_space_type(const RMatrix& g);

SpectrumReport exhaustive_spectrum(const GroupSpec& spec, std::uint64_t bound = kDefaultCandidateBound);

/// `samples` uniform draws split over `workers` independent samplers; worker i
/// draws ceil-or-floor(samples / workers) elements with seed hash64(seed, i).
/// The result depends only on (spec, samples, seed, workers).
SpectrumReport mc_spectrum(const GroupSpec& spec, std::uint64_t samples, std::uint64_t seed, unsigned workers = 1);

/// Adds counts; specs and modes must agree.
SpectrumReport merge(const SpectrumReport& a, const SpectrumReport& b);

struct TheoryVerdict {
    GroupType group;
    double observed = 0.0;
    ApproxValue predicted;
    double se = 0.0;
    double z = 0.0;
    bool pass = false;
};

/// Compares observed frequencies with the limit distribution P_{m,p}.
/// Exhaustive reports carry no sampling error, so only tol_abs applies there.
/// With `groups` empty, every observed type of exponent <= f-1 is compared;
/// explicitly requested types must satisfy that bound too.
std::vector<TheoryVerdict> compare_to_theory(const SpectrumReport& report, double tol_sigma, double tol_abs,
                                             std::span<const GroupType> groups = {});

}  // namespace eigenlab
