#include "mla/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "mla/error.hpp"

namespace mla::io {

std::string format_number(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + csv_field(t.header[i]);
    out += "\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw InvalidArgument("io", "to_csv: row width differs from the header");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
        out += "\n";
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("io", "cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw NumericError("io", "write to " + path.string() + " failed");
}

void write_csv(const std::filesystem::path& path, const Table& t) { write_text(path, to_csv(t)); }

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    auto p = csv;
    p += ".json";
    return p;
}

Table to_table(const SampledFunction& f) {
    Table t{{"x", "value"}, {}};
    t.rows.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) t.rows.push_back({f.x(i), f.values[i]});
    return t;
}

Table to_table(const PathEnsemble& p) {
    Table t;
    for (std::size_t k = 0; k < p.times.size(); ++k) t.header.push_back("t_" + std::to_string(k + 1));
    t.rows.resize(static_cast<std::size_t>(p.samples.rows()));
    for (Eigen::Index r = 0; r < p.samples.rows(); ++r) {
        auto& row = t.rows[static_cast<std::size_t>(r)];
        row.resize(p.times.size());
        for (Eigen::Index c = 0; c < p.samples.cols(); ++c) row[static_cast<std::size_t>(c)] = p.samples(r, c);
    }
    return t;
}

Json metadata(const PathEnsemble& p) {
    return Json{{"alpha", p.alpha}, {"beta", p.beta}, {"seed", p.seed}, {"n_paths", p.samples.rows()}, {"times", p.times}};
}

Json params_json(const FracParams& p) { return Json{{"alpha", p.alpha}, {"beta", p.beta}}; }

Json to_json(const MCEstimate& e, const Json& params) {
    return Json{{"value", e.value}, {"stderr", e.std_error}, {"n_samples", e.n_samples}, {"seed", e.seed}, {"params", params}};
}

SampledFunction read_sampled_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("io", "cannot open " + path.string());
    std::vector<double> xs, vs;
    std::string line;
    auto parse = [](std::string_view s, double& out) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
        const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
        return r.ec == std::errc() && r.ptr == s.data() + s.size();
    };
    for (std::size_t n = 1; std::getline(f, line); ++n) {
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        double x = 0.0, v = 0.0;
        if (comma == std::string::npos || !parse(std::string_view(line).substr(0, comma), x) ||
            !parse(std::string_view(line).substr(comma + 1), v)) {
            if (xs.empty() && n == 1) continue;  // header
            throw InvalidArgument("io", path.string() + ":" + std::to_string(n) + ": expected two numeric columns");
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 2) throw InvalidArgument("io", path.string() + ": need at least two rows");
    const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::abs(xs[i] - (xs.front() + step * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(xs[i])))
            throw InvalidArgument("io", path.string() + ": x column is not a uniform grid");
    return SampledFunction(xs.front(), step, std::move(vs));
}

}  // namespace mla::io
