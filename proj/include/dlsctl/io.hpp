#pragma once

// Trajectory CSV, SVG plots and the flat key = value configuration format.

#include "dlsctl/simulation.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace dlsctl {

inline constexpr std::string_view kCsvHeader = "t,x1,x2,v1,v2,u,f2,du";

// One header line, then one row per sample with 17 significant digits.
void write_csv(const Trajectory& trajectory, std::ostream& out);
void write_csv(const Trajectory& trajectory, const std::filesystem::path& path);

[[nodiscard]] Trajectory read_csv(std::istream& in);
[[nodiscard]] Trajectory read_csv(const std::filesystem::path& path);

// Two stacked panels: (a) x1, x2 against t, (b) the control u against t.
void write_svg(const Trajectory& trajectory, std::ostream& out, std::string_view title = {});
void write_svg(const Trajectory& trajectory, const std::filesystem::path& path, std::string_view title = {});

void write_config(const SimulationConfig& config, std::ostream& out);
void write_config(const SimulationConfig& config, const std::filesystem::path& path);

// Unknown keys and malformed values raise ConfigurationError; absent keys keep defaults.
[[nodiscard]] SimulationConfig read_config(std::istream& in);
[[nodiscard]] SimulationConfig read_config(const std::filesystem::path& path);

} // namespace dlsctl
