#include "eigenlab/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eigenlab {

ordered_json report_to_json(const SpectrumReport& report) {
    ordered_json doc;
    doc["spec"] = {{"p", report.spec.p}, {"f", report.spec.f}, {"m", report.spec.m}, {"n", report.spec.n}};
    doc["mode"] = report.mode == SpectrumMode::exhaustive ? "exhaustive" : "montecarlo";
    doc["total"] = report.total;
    doc["seed"] = report.seed ? ordered_json(*report.seed) : ordered_json(nullptr);
    doc["workers"] = report.workers;
    ordered_json counts = ordered_json::object();
    for (const auto& [g, c] : report.counts)
        counts[g.to_string()] = c;
    doc["counts"] = std::move(counts);
    return doc;
}

SpectrumReport report_from_json(const ordered_json& doc) {
    try {
        const auto& s = doc.at("spec");
        GroupSpec spec(s.at("p").get<std::uint64_t>(), s.at("f").get<int>(), s.at("m").get<int>(),
                       s.at("n").get<int>());
        SpectrumReport rep{spec, SpectrumMode::montecarlo, {}, doc.at("total").get<std::uint64_t>(), std::nullopt,
                           doc.value("workers", 1u)};
        const auto mode = doc.at("mode").get<std::string>();
        if (mode == "exhaustive")
            rep.mode = SpectrumMode::exhaustive;
        else if (mode != "montecarlo")
            throw std::invalid_argument("unknown mode '" + mode + "'");
        if (doc.contains("seed") && !doc.at("seed").is_null())
            rep.seed = doc.at("seed").get<std::uint64_t>();
        std::uint64_t sum = 0;
        for (const auto& [key, value] : doc.at("counts").items()) {
            const auto c = value.get<std::uint64_t>();
            rep.counts[GroupType::parse(key)] += c;
            sum += c;
        }
        if (sum != rep.total)
            throw std::invalid_argument("counts sum to " + std::to_string(sum) + ", total is " +
                                        std::to_string(rep.total));
        return rep;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed spectrum report: ") + e.what());
    }
}

ordered_json table_to_json(const DistTable& table) {
    ordered_json doc;
    doc["q"] = table.q;
    doc["u"] = table.u_level;
    doc["m"] = table.m >= 0 ? ordered_json(table.m) : ordered_json(nullptr);
    ordered_json entries = ordered_json::object();
    for (const auto& [g, v] : table.entries())
        entries[g.to_string()] = {{"value", v.value}, {"err", v.err}};
    doc["entries"] = std::move(entries);
    doc["tail"] = table.tail;
    return doc;
}

DistTable table_from_json(const ordered_json& doc) {
    try {
        DistTable t;
        t.q = doc.at("q").get<std::uint64_t>();
        t.u_level = doc.at("u").get<int>();
        t.m = doc.contains("m") && !doc.at("m").is_null() ? doc.at("m").get<int>() : -1;
        t.tail = doc.at("tail").get<double>();
        if (!(t.tail >= 0))
            throw std::invalid_argument("tail must be nonnegative");
        for (const auto& [key, value] : doc.at("entries").items()) {
            const double v = value.at("value").get<double>();
            const double err = value.value("err", 0.0);
            if (!(v >= 0) || !(err >= 0))
                throw std::invalid_argument("entry " + key + " must be nonnegative");
            t.coeffs[GroupType::parse(key)] = {mpq_class(v), err};
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed distribution table: ") + e.what());
    }
}

std::string table_to_csv(const DistTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "group,value,err\n";
    for (const auto& [g, v] : table.entries())
        os << '"' << g.to_string() << "\"," << v.value << ',' << v.err << '\n';
    return os.str();
}

ordered_json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path.string());
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace eigenlab
