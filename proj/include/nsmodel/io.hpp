#pragma once

#include <string>

#include "json.hpp"
#include "nsmodel/clark.hpp"
#include "nsmodel/graph.hpp"

namespace nsmodel {

using Json = nlohmann::ordered_json;

// %.17g; non-finite values become "nan"/"inf" in CSV and null in JSON.
std::string format_double(double x);

// Serialiser that writes every float with 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);

Json params_json(const ModelParams& p);
Json measure_json(const ClarkMeasure& m);
std::string measure_csv(const ClarkMeasure& m);

std::string sweep_csv(const SweepResult& s);
Json sweep_json(const SweepResult& s);

void write_file(const std::string& path, const std::string& content);

}  // namespace nsmodel
