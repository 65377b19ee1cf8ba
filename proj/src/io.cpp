#include "dlsctl/io.hpp"

#include "dlsctl/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace dlsctl {

namespace {

std::string format_double(double value) {
    std::array<char, 32> buffer{};
    const int n = std::snprintf(buffer.data(), buffer.size(), "%.17g", value);
    return {buffer.data(), static_cast<std::size_t>(n)};
}

std::string format_fixed(double value, int digits = 2) {
    std::array<char, 48> buffer{};
    const int n = std::snprintf(buffer.data(), buffer.size(), "%.*f", digits, value);
    return {buffer.data(), static_cast<std::size_t>(n)};
}

double parse_double(std::string_view text, std::string_view what) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ConfigurationError("cannot parse '" + std::string(text) + "' as a number for " + std::string(what));
    }
    return value;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

void finish(std::ostream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// ---------------------------------------------------------------------------
// SVG helpers
// ---------------------------------------------------------------------------

struct Series {
    const std::vector<double>* values;
    const char* color;
    const char* label;
};

struct Panel {
    double top;
    double height;
};

constexpr double kWidth = 900.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr std::size_t kMaxBuckets = 1500;

// Min/max per pixel-sized bucket so the envelope survives decimation.
std::vector<std::size_t> decimate(const std::vector<double>& y) {
    std::vector<std::size_t> keep;
    if (y.size() <= 2 * kMaxBuckets) {
        keep.resize(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            keep[i] = i;
        }
        return keep;
    }
    const double bucket = static_cast<double>(y.size()) / kMaxBuckets;
    for (std::size_t b = 0; b < kMaxBuckets; ++b) {
        const auto lo = static_cast<std::size_t>(b * bucket);
        const auto hi = std::min(y.size(), static_cast<std::size_t>((b + 1) * bucket));
        if (lo >= hi) {
            continue;
        }
        const auto [mn, mx] = std::minmax_element(y.begin() + static_cast<long>(lo), y.begin() + static_cast<long>(hi));
        const auto i_min = static_cast<std::size_t>(mn - y.begin());
        const auto i_max = static_cast<std::size_t>(mx - y.begin());
        keep.push_back(std::min(i_min, i_max));
        if (i_min != i_max) {
            keep.push_back(std::max(i_min, i_max));
        }
    }
    return keep;
}

void draw_panel(std::ostream& out, const Trajectory& traj, const Panel& panel, const std::vector<Series>& series,
                const char* caption) {
    const double t0 = traj.t.front();
    const double t1 = traj.t.back() > t0 ? traj.t.back() : t0 + 1.0;
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& s : series) {
        const auto [mn, mx] = std::minmax_element(s.values->begin(), s.values->end());
        lo = std::min(lo, *mn);
        hi = std::max(hi, *mx);
    }
    if (hi - lo < 1e-12) {
        hi += 0.5;
        lo -= 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double plot_w = kWidth - kLeft - kRight;
    const auto px = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * plot_w; };
    const auto py = [&](double y) { return panel.top + (hi - y) / (hi - lo) * panel.height; };

    out << "<g>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << panel.top << "\" width=\"" << plot_w << "\" height=\""
        << panel.height << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (lo < 0.0 && hi > 0.0) {
        out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_w << "\" y1=\"" << format_fixed(py(0.0))
            << "\" y2=\"" << format_fixed(py(0.0)) << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double t = t0 + (t1 - t0) * i / 4.0;
        out << "<text x=\"" << format_fixed(px(t)) << "\" y=\"" << panel.top + panel.height + 16
            << "\" font-size=\"11\" text-anchor=\"middle\">" << format_fixed(t, 0) << "</text>\n";
        const double y = lo + (hi - lo) * i / 4.0;
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << format_fixed(py(y) + 4) << "\" font-size=\"11\" "
            << "text-anchor=\"end\">" << format_fixed(y, 3) << "</text>\n";
    }
    out << "<text x=\"" << kLeft << "\" y=\"" << panel.top - 6 << "\" font-size=\"13\">" << caption << "</text>\n";

    double legend_x = kLeft + plot_w - 10.0;
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
        out << "<text x=\"" << legend_x << "\" y=\"" << panel.top - 6 << "\" font-size=\"12\" fill=\"" << it->color
            << "\" text-anchor=\"end\">" << it->label << "</text>\n";
        legend_x -= 40.0;
    }
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i : decimate(*s.values)) {
            out << format_fixed(px(traj.t[i])) << ',' << format_fixed(py((*s.values)[i])) << ' ';
        }
        out << "\"/>\n";
    }
    out << "</g>\n";
}

// ---------------------------------------------------------------------------
// Config keys
// ---------------------------------------------------------------------------

const char* target_kind_name(TargetProfile::Kind kind) {
    switch (kind) {
    case TargetProfile::Kind::zero:
        return "zero";
    case TargetProfile::Kind::constant:
        return "constant";
    case TargetProfile::Kind::sine:
        return "sine";
    }
    return "zero";
}

TargetProfile::Kind parse_target_kind(std::string_view text) {
    if (text == "zero") {
        return TargetProfile::Kind::zero;
    }
    if (text == "constant") {
        return TargetProfile::Kind::constant;
    }
    if (text == "sine") {
        return TargetProfile::Kind::sine;
    }
    throw ConfigurationError("unknown target_kind '" + std::string(text) + "'");
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw ConfigurationError("cannot parse '" + std::string(text) + "' as a boolean");
}

std::optional<double> parse_optional(std::string_view text, std::string_view key) {
    if (text == "none" || text.empty()) {
        return std::nullopt;
    }
    return parse_double(text, key);
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string("none");
}

} // namespace

void write_csv(const Trajectory& trajectory, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        out << format_double(trajectory.t[i]) << ',' << format_double(trajectory.x1[i]) << ','
            << format_double(trajectory.x2[i]) << ',' << format_double(trajectory.v1[i]) << ','
            << format_double(trajectory.v2[i]) << ',' << format_double(trajectory.u[i]) << ','
            << format_double(trajectory.f2[i]) << ',' << format_double(trajectory.du[i]) << '\n';
    }
}

void write_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_csv(trajectory, out);
    finish(out, path);
}

Trajectory read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader) {
        throw ConfigurationError("CSV header must be '" + std::string(kCsvHeader) + "'");
    }
    Trajectory trajectory;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) {
            continue;
        }
        std::array<double, 8> row{};
        std::string_view rest = line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (c + 1 == row.size())) {
                throw ConfigurationError("CSV line " + std::to_string(line_number) + " must have 8 fields");
            }
            row[c] = parse_double(rest.substr(0, comma), "CSV field");
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        trajectory.push_row(row[0], row[1], row[2], row[3], row[4], row[5], row[6], row[7]);
    }
    return trajectory;
}

Trajectory read_csv(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    return read_csv(in);
}

void write_svg(const Trajectory& trajectory, std::ostream& out, std::string_view title) {
    if (trajectory.empty()) {
        throw ConfigurationError("cannot plot an empty trajectory");
    }
    constexpr double kPanelHeight = 260.0;
    constexpr double kHeight = 2 * kPanelHeight + 140.0;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
        out << "<text x=\"" << kWidth / 2 << "\" y=\"18\" font-size=\"14\" text-anchor=\"middle\">" << title
            << "</text>\n";
    }
    draw_panel(out, trajectory, {40.0, kPanelHeight},
               {{&trajectory.x1, "#1f77b4", "x1"}, {&trajectory.x2, "#d62728", "x2"}}, "(a) system response");
    draw_panel(out, trajectory, {40.0 + kPanelHeight + 60.0, kPanelHeight}, {{&trajectory.u, "#2ca02c", "u"}},
               "(b) control input u");
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8 << "\" font-size=\"12\" "
        << "text-anchor=\"middle\">t</text>\n";
    out << "</svg>\n";
}

void write_svg(const Trajectory& trajectory, const std::filesystem::path& path, std::string_view title) {
    auto out = open_for_write(path);
    write_svg(trajectory, out, title);
    finish(out, path);
}

void write_config(const SimulationConfig& config, std::ostream& out) {
    out << "preset_name = " << config.preset_name << '\n';
    out << "omega = " << format_double(config.params.omega) << '\n';
    out << "epsilon = " << format_double(config.params.epsilon) << '\n';
    out << "alpha = " << format_double(config.params.alpha) << '\n';
    out << "zeta = " << format_double(config.params.zeta) << '\n';
    out << "lambda = " << format_double(config.control.lambda) << '\n';
    out << "b = " << format_double(config.control.b) << '\n';
    out << "u0 = " << format_double(config.control.u0) << '\n';
    out << "u_min = " << format_optional(config.control.u_min) << '\n';
    out << "u_max = " << format_optional(config.control.u_max) << '\n';
    out << "target_kind = " << target_kind_name(config.control.target.kind) << '\n';
    out << "target_amplitude = " << format_double(config.control.target.amplitude) << '\n';
    out << "target_frequency = " << format_double(config.control.target.frequency) << '\n';
    out << "h = " << format_double(config.h) << '\n';
    out << "t_end = " << format_double(config.t_end) << '\n';
    out << "t0 = " << format_double(config.initial.t) << '\n';
    out << "x1 = " << format_double(config.initial.x(0)) << '\n';
    out << "x2 = " << format_double(config.initial.x(1)) << '\n';
    out << "v1 = " << format_double(config.initial.v(0)) << '\n';
    out << "v2 = " << format_double(config.initial.v(1)) << '\n';
    out << "control_enabled = " << (config.control_enabled ? "true" : "false") << '\n';
    out << "output_stride = " << config.output_stride << '\n';
}

void write_config(const SimulationConfig& config, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_config(config, out);
    finish(out, path);
}

SimulationConfig read_config(std::istream& in) {
    SimulationConfig config;
    using Setter = std::function<void(std::string_view)>;
    const auto number = [](double& field, std::string_view key) {
        return Setter([&field, key](std::string_view v) { field = parse_double(v, key); });
    };
    const std::map<std::string, Setter, std::less<>> setters{
        {"preset_name", [&](std::string_view v) { config.preset_name = std::string(v); }},
        {"omega", number(config.params.omega, "omega")},
        {"epsilon", number(config.params.epsilon, "epsilon")},
        {"alpha", number(config.params.alpha, "alpha")},
        {"zeta", number(config.params.zeta, "zeta")},
        {"lambda", number(config.control.lambda, "lambda")},
        {"b", number(config.control.b, "b")},
        {"u0", number(config.control.u0, "u0")},
        {"u_min", [&](std::string_view v) { config.control.u_min = parse_optional(v, "u_min"); }},
        {"u_max", [&](std::string_view v) { config.control.u_max = parse_optional(v, "u_max"); }},
        {"target_kind", [&](std::string_view v) { config.control.target.kind = parse_target_kind(v); }},
        {"target_amplitude", number(config.control.target.amplitude, "target_amplitude")},
        {"target_frequency", number(config.control.target.frequency, "target_frequency")},
        {"h", number(config.h, "h")},
        {"t_end", number(config.t_end, "t_end")},
        {"t0", number(config.initial.t, "t0")},
        {"x1", [&](std::string_view v) { config.initial.x(0) = parse_double(v, "x1"); }},
        {"x2", [&](std::string_view v) { config.initial.x(1) = parse_double(v, "x2"); }},
        {"v1", [&](std::string_view v) { config.initial.v(0) = parse_double(v, "v1"); }},
        {"v2", [&](std::string_view v) { config.initial.v(1) = parse_double(v, "v2"); }},
        {"control_enabled", [&](std::string_view v) { config.control_enabled = parse_bool(v); }},
        {"output_stride",
         [&](std::string_view v) {
             std::size_t stride = 0;
             const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), stride);
             if (ec != std::errc{} || end != v.data() + v.size()) {
                 throw ConfigurationError("cannot parse output_stride '" + std::string(v) + "'");
             }
             config.output_stride = stride;
         }},
    };

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigurationError("config line " + std::to_string(line_number) + " lacks '='");
        }
        const std::string_view key = trim(text.substr(0, eq));
        const auto setter = setters.find(key);
        if (setter == setters.end()) {
            throw ConfigurationError("unknown config key '" + std::string(key) + "'");
        }
        setter->second(trim(text.substr(eq + 1)));
    }
    return config;
}

SimulationConfig read_config(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    return read_config(in);
}

} // namespace dlsctl
