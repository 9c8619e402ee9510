#include "eigenlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "eigenlab/heuristics.hpp"
#include "eigenlab/json_io.hpp"
#include "eigenlab/spectrum.hpp"
#include "eigenlab/sympm.hpp"
#include "eigenlab/verify.hpp"

namespace eigenlab::cli {

unsigned default_workers() {
    if (const char* env = std::getenv("EIGENLAB_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1)
                return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Params {
    std::uint64_t p = 2;
    int f = 1;
    int m = 0;
    int n = 1;
    int u = 0;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::optional<int> max_weight;
    double eps = kDefaultEps;
    std::string format = "json";
    std::string output;
    std::string base;
    std::uint64_t limit = 0;
    int steps = 1;
    bool exhaustive = false;
    std::vector<std::string> suites;
    std::vector<std::string> groups;
    double tol_sigma = 4.0;
    double tol_abs = 0.01;
};

int default_max_weight(std::uint64_t p) {
    if (p == 2)
        return 12;
    if (p == 3)
        return 8;
    return 5;
}

void add_spec_options(CLI::App* cmd, Params& prm) {
    cmd->add_option("--p", prm.p, "prime p")->required();
    cmd->add_option("--f", prm.f, "ring exponent f, ring is Z/p^f")->required();
    cmd->add_option("--m", prm.m, "form is preserved modulo p^m (0 <= m <= f)")->required();
    cmd->add_option("--n", prm.n, "matrices are 2n x 2n")->required();
}

void emit(const Params& prm, const std::string& text, std::ostream& out) {
    if (prm.output.empty())
        out << text;
    else
        write_text_file(prm.output, text);
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

std::string matrix_line(const RMatrix& h) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < h.dim(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < h.dim(); ++j)
            row.push_back(h(i, j));
        rows.push_back(std::move(row));
    }
    return rows.dump();
}

std::string table_text(const DistTable& t, const std::string& format) {
    return format == "csv" ? table_to_csv(t) : dump(table_to_json(t));
}

int cmd_order(const Params& prm, std::ostream& out) {
    out << order(GroupSpec(prm.p, prm.f, prm.m, prm.n)).get_str() << "\n";
    return kExitOk;
}

int cmd_enumerate(const Params& prm, std::ostream& out, std::ostream& err) {
    const GroupSpec spec(prm.p, prm.f, prm.m, prm.n);
    std::uint64_t emitted = 0;
    bool truncated = false;
    enumerate(spec, [&](const RMatrix& h) {
        if (prm.limit && emitted == prm.limit) {
            truncated = true;
            return false;
        }
        out << matrix_line(h) << "\n";
        ++emitted;
        return true;
    });
    if (truncated)
        err << "warning: output truncated after " << emitted << " of " << order(spec).get_str()
            << " elements (--limit)\n";
    return kExitOk;
}

int cmd_spectrum(const Params& prm, std::ostream& out) {
    const GroupSpec spec(prm.p, prm.f, prm.m, prm.n);
    const auto rep = prm.exhaustive ? exhaustive_spectrum(spec) : mc_spectrum(spec, prm.samples, prm.seed, prm.workers);
    emit(prm, dump(report_to_json(rep)), out);
    return kExitOk;
}

int cmd_predict(const Params& prm, std::ostream& out) {
    DistTable t;
    if (!prm.base.empty()) {
        const auto rep = report_from_json(read_json_file(prm.base));
        const int w = prm.max_weight.value_or(default_max_weight(rep.spec.p));
        if (rep.spec.p != prm.p || rep.spec.m != prm.m)
            throw std::invalid_argument("--base report is for " + rep.spec.to_string() + ", not p=" +
                                        std::to_string(prm.p) + " m=" + std::to_string(prm.m));
        t = table_from_report(rep, w);
        for (int i = 0; i < prm.u; ++i)
            t = u_step(t, w, prm.p);
    } else {
        t = predict(prm.p, prm.m, prm.u, prm.max_weight.value_or(default_max_weight(prm.p)), nullptr, prm.eps);
    }
    emit(prm, table_text(t, prm.format), out);
    return kExitOk;
}

int cmd_uprob(const Params& prm, std::ostream& out) {
    auto t = table_from_json(read_json_file(prm.base));
    const int w = prm.max_weight.value_or(default_max_weight(t.q));
    for (int i = 0; i < prm.steps; ++i)
        t = u_step(t, w, t.q);
    emit(prm, table_text(t, prm.format), out);
    return kExitOk;
}

int cmd_compare(const Params& prm, std::ostream& out) {
    const auto rep = report_from_json(read_json_file(prm.base));
    std::vector<GroupType> groups;
    for (const auto& s : prm.groups)
        groups.push_back(GroupType::parse(s));
    const auto verdicts = compare_to_theory(rep, prm.tol_sigma, prm.tol_abs, groups);
    ordered_json doc;
    doc["spec"] = report_to_json(rep)["spec"];
    doc["total"] = rep.total;
    ordered_json rows = ordered_json::array();
    bool all = true;
    for (const auto& v : verdicts) {
        rows.push_back({{"group", v.group.to_string()},
                        {"observed", v.observed},
                        {"se", v.se},
                        {"predicted", {{"value", v.predicted.value}, {"err", v.predicted.err}}},
                        {"z", v.z},
                        {"pass", v.pass}});
        all = all && v.pass;
    }
    doc["verdicts"] = std::move(rows);
    doc["pass"] = all;
    emit(prm, dump(doc), out);
    return all ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const Params& prm, std::ostream& out) {
    std::vector<std::string> suites = prm.suites;
    if (suites.empty())
        suites = verify::suite_names();
    const verify::Options opt{prm.workers, prm.seed};
    bool all = true;
    for (const auto& name : suites) {
        const auto res = verify::run_suite(name, opt);
        for (const auto& c : res.checks)
            out << (c.pass ? "PASS" : "FAIL") << "  [" << name << "] " << c.name << ": " << c.detail << "\n";
        std::ostringstream secs;
        secs << std::fixed << std::setprecision(2) << res.seconds;
        out << (res.pass() ? "PASS" : "FAIL") << "  suite " << name << " (" << res.checks.size() << " checks, "
            << secs.str() << " s of " << res.budget_seconds << " s budget)\n";
        all = all && res.pass();
    }
    return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Params prm;
    prm.workers = default_workers();

    CLI::App app{"Kernel spectra of m-th symplectic groups over Z/p^f and Cohen-Lenstra style predictions"};
    app.name("eigenlab");
    app.require_subcommand(1, 1);

    auto* order_cmd = app.add_subcommand("order", "print the group order");
    add_spec_options(order_cmd, prm);

    auto* enum_cmd = app.add_subcommand("enumerate", "stream every element as one JSON row list per line");
    add_spec_options(enum_cmd, prm);
    enum_cmd->add_option("--limit", prm.limit, "stop after this many elements (0 = no limit)");

    auto* spec_cmd = app.add_subcommand("spectrum", "kernel type counts of g - 1 as a JSON report");
    add_spec_options(spec_cmd, prm);
    spec_cmd->add_option("--samples", prm.samples, "Monte Carlo sample count");
    spec_cmd->add_option("--seed", prm.seed, "base seed");
    spec_cmd->add_option("--workers", prm.workers, "worker threads (default EIGENLAB_WORKERS or all cores)");
    spec_cmd->add_flag("--exhaustive", prm.exhaustive, "count over every element instead of sampling");
    spec_cmd->add_option("--output", prm.output, "write the report here instead of stdout");

    auto* pred_cmd = app.add_subcommand("predict", "P^(u)_{m,p} as a table");
    pred_cmd->add_option("--p", prm.p, "prime p")->required();
    pred_cmd->add_option("--m", prm.m, "level m")->required();
    pred_cmd->add_option("--u", prm.u, "unit rank u");
    pred_cmd->add_option("--max-weight", prm.max_weight, "support: all types of weight <= this");
    pred_cmd->add_option("--base", prm.base, "spectrum report used as the u = 0 distribution");
    pred_cmd->add_option("--eps", prm.eps, "error budget for infinite products");
    pred_cmd->add_option("--format", prm.format, "json (canonical) or csv (lossy view: group,value,err rows, no tail or metadata)")
        ->check(CLI::IsMember({"json", "csv"}));
    pred_cmd->add_option("--output", prm.output, "write the table here instead of stdout");

    auto* uprob_cmd = app.add_subcommand("uprob", "apply the u recursion to a table");
    uprob_cmd->add_option("--base", prm.base, "input table (JSON)")->required();
    uprob_cmd->add_option("--steps", prm.steps, "number of recursion steps")->check(CLI::NonNegativeNumber);
    uprob_cmd->add_option("--max-weight", prm.max_weight, "support: all types of weight <= this");
    uprob_cmd->add_option("--format", prm.format, "json (canonical) or csv (lossy view: group,value,err rows, no tail or metadata)")
        ->check(CLI::IsMember({"json", "csv"}));
    uprob_cmd->add_option("--output", prm.output, "write the table here instead of stdout");

    auto* cmp_cmd = app.add_subcommand("compare", "compare a spectrum report with P_{m,p}");
    cmp_cmd->add_option("--base", prm.base, "spectrum report (JSON)")->required();
    cmp_cmd->add_option("--group", prm.groups, "group type to compare, e.g. [1,1]; repeatable, default all observed")
        ->allow_extra_args(false);
    cmp_cmd->add_option("--tol-sigma", prm.tol_sigma, "allowed standard errors");
    cmp_cmd->add_option("--tol-abs", prm.tol_abs, "allowed absolute deviation");
    cmp_cmd->add_option("--output", prm.output, "write the verdicts here instead of stdout");

    auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
    verify_cmd->add_option("--suite", prm.suites, "suite names (default all)")
        ->check(CLI::IsMember(verify::suite_names()));
    verify_cmd->add_option("--workers", prm.workers, "worker threads for sampling suites");
    verify_cmd->add_option("--seed", prm.seed, "base seed for sampling suites");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (prm.workers == 0) {
        err << "error: --workers must be >= 1\n";
        return kExitUsage;
    }

    try {
        if (order_cmd->parsed())
            return cmd_order(prm, out);
        if (enum_cmd->parsed())
            return cmd_enumerate(prm, out, err);
        if (spec_cmd->parsed())
            return cmd_spectrum(prm, out);
        if (pred_cmd->parsed())
            return cmd_predict(prm, out);
        if (uprob_cmd->parsed())
            return cmd_uprob(prm, out);
        if (cmp_cmd->parsed())
            return cmd_compare(prm, out);
        if (verify_cmd->parsed())
            return cmd_verify(prm, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace eigenlab::cli
