#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mla/fraccalc.hpp"
#include "mla/ggbm.hpp"
#include "mla/montecarlo.hpp"

namespace mla::io {

using Json = nlohmann::ordered_json;

// Shortest decimal text that round-trips a double ("%.17g"), locale-independent.
std::string format_number(double v);

// RFC 4180: quoted when the field holds a comma, quote, CR or LF; quotes doubled.
std::string csv_field(std::string_view s);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& t);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const Table& t);
void write_json(const std::filesystem::path& path, const Json& j);

// "<path>.json" next to a CSV file.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

// Columns x,value.
Table to_table(const SampledFunction& f);

// Header t_1..t_k, one row per path.
Table to_table(const PathEnsemble& p);
Json metadata(const PathEnsemble& p);

Json params_json(const FracParams& p);

// {value, stderr, n_samples, seed, params}
Json to_json(const MCEstimate& e, const Json& params);

// Reads a two-column x,value CSV on a uniform grid (header optional).
SampledFunction read_sampled_csv(const std::filesystem::path& path);

}  // namespace mla::io
