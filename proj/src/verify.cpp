#include "eigenlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "eigenlab/heuristics.hpp"
#include "eigenlab/pgroups.hpp"
#include "eigenlab/qseries.hpp"
#include "eigenlab/spectrum.hpp"
#include "eigenlab/sympm.hpp"

namespace eigenlab::verify {

bool SuiteResult::pass() const {
    if (!within_budget() || checks.empty())
        return false;
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

int recursion_max_weight(std::uint64_t q) { return q == 2 ? 12 : 8; }

namespace {

std::string fmt(double x, int precision = 9) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

std::string level_name(WeightLevel k) { return k ? std::to_string(*k) : std::string("inf"); }

void suite_orders(std::vector<Check>& out, const Options&) {
    for (std::uint64_t p : {2u, 3u})
        for (int f = 1; f <= 2; ++f)
            for (int m = 0; m <= f; ++m) {
                GroupSpec spec(p, f, m, 1);
                std::uint64_t counted = 0;
                enumerate(spec, [&](const RMatrix&) {
                    ++counted;
                    return true;
                });
                const auto formula = order(spec);
                out.push_back({"order " + spec.to_string(), formula == counted,
                               "formula " + formula.get_str() + ", enumerated " + std::to_string(counted)});
            }
}

void suite_sampler(std::vector<Check>& out, const Options& opt) {
    const GroupSpec specs[] = {{2, 1, 1, 1}, {3, 1, 1, 1}, {2, 2, 1, 1}, {2, 2, 2, 1}};
    for (const auto& spec : specs) {
        const auto elements = order(spec).get_ui();
        const auto rep = sampler_selftest(spec, 1000 * elements, 0.99, opt.seed);
        out.push_back({"uniformity " + spec.to_string(), rep.pass,
                       "chi2 " + fmt(rep.chi2, 6) + " < " + fmt(rep.critical, 6) + " (dof " +
                           std::to_string(rep.dof) + ", " + std::to_string(1000 * elements) + " samples)"});
    }
}

void suite_spectrum(std::vector<Check>& out, const Options& opt) {
    const std::vector<GroupType> groups = {{}, {1}, {2}, {1, 1}, {2, 1}, {1, 1, 1}};
    for (int m = 0; m <= 2; ++m) {
        GroupSpec spec(2, 3, m, 8);
        const auto rep = mc_spectrum(spec, 200'000, opt.seed, opt.workers);
        for (const auto& v : compare_to_theory(rep, 4.0, 0.01, groups))
            out.push_back({"P_{" + std::to_string(m) + ",2}(" + v.group.to_string() + ") at " + spec.to_string(),
                           v.pass,
                           "observed " + fmt(v.observed, 6) + ", predicted " + fmt(v.predicted.value, 6) +
                               ", z " + fmt(v.z, 3)});
    }
}

void suite_hall(std::vector<Check>& out, const Options&) {
    const auto types = enumerate_types(3);
    const WeightLevel levels[] = {0, 1, 2, std::nullopt};
    for (std::uint64_t q : {2u, 3u}) {
        SubgroupCensusCache cache(q);
        for (const auto& k : levels) {
            int checked = 0;
            mpq_class worst = 0;
            double worst_tail = 0;
            bool ok = true;
            for (const auto& z : types)
                for (const auto& g : types) {
                    auto res = check_hall(k, z, g, q, z.weight() + g.weight(), &cache);
                    ++checked;
                    if (res.residual > worst)
                        worst = res.residual;
                    worst_tail = std::max(worst_tail, res.tail_bound);
                    if (k)
                        ok = ok && sgn(res.residual) == 0;
                    else
                        ok = ok && res.holds() && res.residual.get_d() < 1e-6;
                }
            out.push_back({"hall k=" + level_name(k) + " q=" + std::to_string(q), ok,
                           std::to_string(checked) + " pairs, max residual " + worst.get_str() + ", tail " +
                               fmt(worst_tail)});
        }
    }
}

void suite_lemma(std::vector<Check>& out, const Options&) {
    const std::vector<GroupType> groups = {{}, {1}, {1, 1}};
    for (std::uint64_t q : {2u, 3u})
        for (int u = 1; u <= 2; ++u)
            for (const auto& g : groups) {
                auto res = check_lemma_m1(g, u, q, 12);
                const bool ok = res.holds() && res.tail_bound < 1e-3 && res.lhs <= res.rhs;
                out.push_back({"lemma g=" + g.to_string() + " u=" + std::to_string(u) + " q=" + std::to_string(q), ok,
                               "lhs " + fmt(res.lhs.get_d(), 12) + ", rhs " + fmt(res.rhs.get_d(), 12) +
                                   ", residual " + fmt(res.residual.get_d(), 3) + " <= tail " +
                                   fmt(res.tail_bound, 3)});
            }
}

void suite_level(std::vector<Check>& out, int m) {
    for (std::uint64_t q : {2u, 3u}) {
        const int w = recursion_max_weight(q);
        auto table = base_table(m, q, w);
        for (int u = 1; u <= 2; ++u) {
            table = u_step(table, w, q);
            bool ok = true;
            double worst = 0, worst_bound = 0;
            int checked = 0;
            for (const auto& g : enumerate_types(5)) {
                const auto rec = table.entry(g);
                const auto closed = u_closed(m, q, u, g);
                const double bound = rec.err + closed.err + table.tail;
                const double diff = std::fabs(rec.value - closed.value);
                ok = ok && diff <= bound && bound <= 1e-3;
                worst = std::max(worst, diff);
                worst_bound = std::max(worst_bound, bound);
                ++checked;
            }
            out.push_back({"P^(" + std::to_string(u) + ")_{" + std::to_string(m) + "," + std::to_string(q) +
                               "} recursion vs closed form",
                           ok,
                           std::to_string(checked) + " types, max |diff| " + fmt(worst, 3) + ", max err+tail " +
                               fmt(worst_bound, 3) + " (support weight <= " + std::to_string(w) + ")"});
        }
    }
}

void suite_m2_examples(std::vector<Check>& out, const Options&) {
    const std::uint64_t p = 2;
    const int w = recursion_max_weight(p);
    const auto u1 = predict(p, 2, 1, w);
    const auto u2 = predict(p, 2, 2, w);
    const auto prefactor = closed_prefactor(1, p);  // (p)_inf / (p^2)_inf

    auto report = [&](const std::string& name, const ApproxValue& rec, const ApproxValue& formula, double tail) {
        const double diff = std::fabs(rec.value - formula.value);
        out.push_back({name, diff <= 1e-3,
                       "recursion " + fmt(rec.value, 9) + ", formula " + fmt(formula.value, 9) + ", |diff| " +
                           fmt(diff, 3) + ", tail " + fmt(tail, 3)});
    };

    // (p)_inf/(p^2)_inf (p^3+p^2-1)/(p^7 (p-1))
    const mpq_class c11(p * p * p + p * p - 1, (1u << 7) * (p - 1));
    report("P^(1)_{2,2}([1,1])", u1.entry({1, 1}), prefactor * c11, u1.tail);
    // (p^4)_1 (p)_inf / ((p)_1 (p^2)_inf)
    report("P^(2)_{2,2}([])", u2.entry({}), prefactor * (poch_finite(p * p * p * p, 1) / poch_finite(p, 1)),
           u2.tail);
    // cyclic groups at u = 1 follow the level-1 formula
    for (int k = 1; k <= 3; ++k)
        report("P^(1)_{2,2}([" + std::to_string(k) + "])", u1.entry(GroupType::cyclic(k)),
               u_closed(1, p, 1, GroupType::cyclic(k)), u1.tail);
}

void suite_rank(std::vector<Check>& out, const Options&) {
    for (int u = 0; u <= 1; ++u) {
        ApproxValue sum = ApproxValue::exact(0.0);
        for (int r = 0; r <= 12; ++r)
            sum = sum + rank_probability_m1(2, u, r);
        const bool ok = sum.value >= 0.999 && sum.value <= 1.0 + sum.err;
        out.push_back({"sum_{r<=12} rank probability, p=2 u=" + std::to_string(u), ok,
                       "sum " + fmt(sum.value, 15) + " +/- " + fmt(sum.err, 2)});
    }
    const int w = recursion_max_weight(2);
    const auto table = predict(2, 1, 0, w);
    std::map<int, ApproxValue> by_rank;
    for (const auto& [g, v] : table.entries()) {
        auto [it, inserted] = by_rank.try_emplace(g.rank(), v);
        if (!inserted)
            it->second = it->second + v;
    }
    for (const auto& [r, grouped] : by_rank) {
        const auto formula = rank_probability_m1(2, 0, r);
        const double diff = std::fabs(grouped.value - formula.value);
        const double bound = 1e-6 + table.tail + grouped.err + formula.err;
        out.push_back({"rank " + std::to_string(r) + " mass of P_{1,2}", diff <= bound,
                       "grouped " + fmt(grouped.value, 12) + ", formula " + fmt(formula.value, 12) + ", |diff| " +
                           fmt(diff, 3) + " <= " + fmt(bound, 3)});
    }
}

void suite_weights(std::vector<Check>& out, const Options&) {
    const auto res = check_weight_sum(2, 12);
    const double partial = res.partial.get_d();
    out.push_back({"sum_{weight<=12} 1/|Aut G|, p=2", res.residual < 0.01 && std::fabs(partial - 3.462746) < 0.01,
                   "partial " + fmt(partial, 9) + ", 1/(2)_inf " + fmt(res.target.value, 9) + ", residual " +
                       fmt(res.residual, 3)});
}

struct SuiteDef {
    double budget;
    std::function<void(std::vector<Check>&, const Options&)> body;
};

const std::map<std::string, SuiteDef>& registry() {
    static const std::map<std::string, SuiteDef> defs = {
        {"orders", {10, suite_orders}},
        {"sampler", {60, suite_sampler}},
        {"spectrum", {600, suite_spectrum}},
        {"hall", {60, suite_hall}},
        {"lemma", {60, suite_lemma}},
        {"level0", {300, [](auto& out, const Options&) { suite_level(out, 0); }}},
        {"level1", {300, [](auto& out, const Options&) { suite_level(out, 1); }}},
        {"m2-examples", {300, suite_m2_examples}},
        {"rank", {60, suite_rank}},
        {"weights", {10, suite_weights}},
    };
    return defs;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"orders", "sampler", "spectrum", "hall",   "lemma",
                                                   "level0", "level1",  "m2-examples", "rank", "weights"};
    return names;
}

SuiteResult run_suite(const std::string& name, const Options& options) {
    const auto& defs = registry();
    auto it = defs.find(name);
    if (it == defs.end())
        throw std::invalid_argument("unknown suite '" + name + "'");
    SuiteResult res{name, {}, 0.0, it->second.budget};
    const auto start = std::chrono::steady_clock::now();
    it->second.body(res.checks, options);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace eigenlab::verify
