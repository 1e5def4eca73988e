#pragma once

#include <map>
#include <string>

#include "growthsde/density.hpp"
#include "growthsde/grid.hpp"
#include "growthsde/law.hpp"

namespace growthsde::io {

using Meta = std::map<std::string, std::string>;

// CSV with '#'-prefixed metadata lines, a header row of t-values, then one
// row per path.  Doubles are printed with %.17g so files are byte-stable.
void write_ensemble_csv(const std::string& path,
                        const core::PathEnsemble& ensemble, const Meta& meta);

// columns x, f
void write_density_csv(const std::string& path, const core::DensityCurve& curve,
                       const Meta& meta);

std::string law_to_json(const core::AnalyticLaw& law);
void write_law_json(const std::string& path, const core::AnalyticLaw& law);

std::string format_double(double v);

}  // namespace growthsde::io
