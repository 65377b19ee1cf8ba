#include "dlsctl/errors.hpp"
#include "dlsctl/experiment.hpp"
#include "dlsctl/io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dlsctl;
using namespace dlsctl::testing_support;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

SimulationConfig short_config(double t_end) {
    auto cfg = preset_config("fig2");
    cfg.t_end = t_end;
    cfg.output_stride = 1;
    return cfg;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "dlsctl_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST(Csv, HeaderAndRowCount) {
    const auto run = simulate(short_config(0.03));
    std::ostringstream out;
    write_csv(run.trajectory, out);
    const auto lines = lines_of(out.str());
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[0], kCsvHeader);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), 7);
    }
}

TEST(Csv, RoundTripIsBitExact) {
    const auto run = simulate(short_config(2.0));
    std::stringstream buffer;
    write_csv(run.trajectory, buffer);
    const auto back = read_csv(buffer);
    EXPECT_EQ(back, run.trajectory);

    const auto path = scratch("roundtrip.csv");
    write_csv(run.trajectory, path);
    EXPECT_EQ(read_csv(path), run.trajectory);
}

TEST(Csv, ExtremeValuesRoundTrip) {
    Trajectory traj;
    traj.push_row(0.0, 1e-300, -1e300, 0.1, 1.0 / 3.0, -0.0, 5e-324, 123456789.123456789);
    std::stringstream buffer;
    write_csv(traj, buffer);
    const auto back = read_csv(buffer);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back, traj);
}

TEST(Csv, MalformedInputRaises) {
    std::istringstream wrong_header("a,b,c\n1,2,3\n");
    EXPECT_THROW((void)read_csv(wrong_header), ConfigurationError);
    std::istringstream short_row(std::string(kCsvHeader) + "\n1,2,3\n");
    EXPECT_THROW((void)read_csv(short_row), ConfigurationError);
    std::istringstream junk(std::string(kCsvHeader) + "\n1,2,3,4,5,6,7,x\n");
    EXPECT_THROW((void)read_csv(junk), ConfigurationError);
}

TEST(Csv, UnwritablePathRaises) {
    Trajectory traj;
    traj.push_row(0, 0, 0, 0, 0, 0, 0, 0);
    EXPECT_THROW(write_csv(traj, std::filesystem::path("/nonexistent_dir/sub/x.csv")), IoError);
    EXPECT_THROW((void)read_csv(std::filesystem::path("/nonexistent_dir/x.csv")), IoError);
}

TEST(Svg, WellFormedWithBothPanels) {
    const auto run = simulate(short_config(20.0));
    std::ostringstream out;
    write_svg(run.trajectory, out, "fig2");
    const auto svg = out.str();
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("(a) system response"), std::string::npos);
    EXPECT_NE(svg.find("(b) control input u"), std::string::npos);
    EXPECT_NE(svg.find("x1"), std::string::npos);
    EXPECT_NE(svg.find("x2"), std::string::npos);
    EXPECT_EQ(std::count(svg.begin(), svg.end(), '<'), std::count(svg.begin(), svg.end(), '>'));
    EXPECT_GE(static_cast<int>(std::count(svg.begin(), svg.end(), '\n')), 5);
}

TEST(Svg, EmptyTrajectoryRaises) {
    std::ostringstream out;
    EXPECT_THROW(write_svg(Trajectory{}, out), ConfigurationError);
}

TEST(Config, PresetRoundTrip) {
    for (const auto& name : preset_names()) {
        const auto cfg = preset_config(name);
        std::stringstream buffer;
        write_config(cfg, buffer);
        EXPECT_EQ(read_config(buffer), cfg) << name;
    }
}

TEST(Config, RandomRoundTrip) {
    auto rng = make_rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        SimulationConfig cfg;
        cfg.params = {uniform(rng, 0.1, 3), uniform(rng, 0, 0.9), uniform(rng, 0, 3), uniform(rng, 0, 0.5)};
        cfg.control.lambda = uniform(rng, 0, 10);
        cfg.control.b = uniform(rng, -1, 1);
        cfg.control.u0 = uniform(rng, -1, 1);
        if (trial % 3 == 0) {
            cfg.control.u_min = -2.0;
            cfg.control.u_max = uniform(rng, 1, 2);
        }
        if (trial % 2 == 1) {
            cfg.control.target = {TargetProfile::Kind::sine, uniform(rng, 0, 1), uniform(rng, 0.1, 2)};
        }
        cfg.h = uniform(rng, 1e-4, 0.05);
        cfg.t_end = uniform(rng, 1, 300);
        cfg.initial = {random_vector(rng, 2), random_vector(rng, 2), uniform(rng, -1, 1)};
        cfg.control_enabled = trial % 4 != 0;
        cfg.preset_name = "random" + std::to_string(trial);
        cfg.output_stride = static_cast<std::size_t>(trial % 7);
        std::stringstream buffer;
        write_config(cfg, buffer);
        EXPECT_EQ(read_config(buffer), cfg);
    }
}

TEST(Config, FileRoundTrip) {
    const auto cfg = preset_config("fig5");
    const auto path = scratch("fig5.cfg");
    write_config(cfg, path);
    EXPECT_EQ(read_config(path), cfg);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    std::istringstream unknown("omega = 1\nmystery = 3\n");
    EXPECT_THROW((void)read_config(unknown), ConfigurationError);
    std::istringstream bad("omega = abc\n");
    EXPECT_THROW((void)read_config(bad), ConfigurationError);
    std::istringstream comments("# comment\n\nlambda = 2.5\n");
    EXPECT_EQ(read_config(comments).control.lambda, 2.5);
}
