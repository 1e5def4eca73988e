#include "growthsde/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace growthsde::io {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

void write_meta(std::ofstream& out, const Meta& meta) {
    for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
}

}  // namespace

void write_ensemble_csv(const std::string& path,
                        const core::PathEnsemble& ensemble, const Meta& meta) {
    auto out = open_out(path);
    write_meta(out, meta);
    const auto times = ensemble.grid.times();
    for (std::size_t k = 0; k < times.size(); ++k)
        out << (k ? "," : "") << format_double(times[k]);
    out << "\n";
    for (std::size_t i = 0; i < ensemble.n_paths; ++i) {
        const auto row = ensemble.row(i);
        for (std::size_t k = 0; k < row.size(); ++k)
            out << (k ? "," : "") << format_double(row[k]);
        out << "\n";
    }
}

void write_density_csv(const std::string& path, const core::DensityCurve& curve,
                       const Meta& meta) {
    auto out = open_out(path);
    write_meta(out, meta);
    out << "x,f\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i)
        out << format_double(curve.x[i]) << "," << format_double(curve.f[i])
            << "\n";
}

std::string law_to_json(const core::AnalyticLaw& law) {
    nlohmann::json j;
    j["family"] = law.name();
    j["params"] = law.params;
    return j.dump(2);
}

void write_law_json(const std::string& path, const core::AnalyticLaw& law) {
    auto out = open_out(path);
    out << law_to_json(law) << "\n";
}

}  // namespace growthsde::io
