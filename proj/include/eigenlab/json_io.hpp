#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "eigenlab/heuristics.hpp"
#include "eigenlab/spectrum.hpp"

namespace eigenlab {

using ordered_json = nlohmann::ordered_json;

/// {"spec":{"p":..,"f":..,"m":..,"n":..}, "mode":"montecarlo", "total":.., "seed":..,
///  "workers":.., "counts":{"[]":.., "[1]":..}} with counts in GroupType order.
ordered_json report_to_json(const SpectrumReport& report);
/// Throws std::invalid_argument on schema violations (including counts not summing to total).
SpectrumReport report_from_json(const ordered_json& doc);

/// {"q":.., "u":.., "m":.., "entries":{"[]":{"value":..,"err":..}, ..}, "tail":..}
ordered_json table_to_json(const DistTable& table);
/// Entries become exact coefficients under a unit scale; err is kept per entry.
DistTable table_from_json(const ordered_json& doc);

/// group,value,err rows in GroupType order.
std::string table_to_csv(const DistTable& table);

ordered_json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace eigenlab
