// CSV and JSON artifact writers/readers. All numbers are rendered with 17
// significant digits so files round-trip doubles exactly.
#pragma once

#include <filesystem>
#include <string>

#include "cmae/eigen_iteration.hpp"

namespace cmae {

std::string format_g17(double v);

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<IterationRecord>& history);

// Full grid: "x,y,value" rows; radial: "s,value" rows, in domain node order.
void write_field_csv(const std::filesystem::path& path, const ScalarField2D& field);
void write_field_csv(const std::filesystem::path& path, const RadialProfile& field);

// Rebuilds a field from its CSV against the given domain; the coordinates
// must match the domain's node order exactly.
ScalarField2D read_field_csv(const std::filesystem::path& path,
                             std::shared_ptr<const GridDomain> grid);
RadialProfile read_field_csv(const std::filesystem::path& path,
                             std::shared_ptr<const RadialDomain> dom);

void write_openq_csv(const std::filesystem::path& path, const OpenQuestionReport& report,
                     DomainMode mode);

}  // namespace cmae
