#include "dlsctl/analysis.hpp"
#include "dlsctl/errors.hpp"
#include "dlsctl/experiment.hpp"
#include "dlsctl/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dlsctl;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Presets, SharedParameters) {
    ASSERT_EQ(preset_names().size(), 5u);
    for (const auto& name : preset_names()) {
        const auto cfg = preset_config(name);
        EXPECT_EQ(cfg.params.omega, 1.0);
        EXPECT_EQ(cfg.params.epsilon, 0.1);
        EXPECT_EQ(cfg.params.alpha, 1.5);
        EXPECT_EQ(cfg.params.zeta, 0.025);
        EXPECT_EQ(cfg.control.u0, 0.025);
        EXPECT_EQ(cfg.initial.x, Eigen::Vector2d(1.0, 0.1));
        EXPECT_EQ(cfg.initial.v, Eigen::Vector2d::Zero());
        EXPECT_EQ(cfg.t_end, 200.0);
        EXPECT_EQ(cfg.preset_name, name);
    }
    EXPECT_FALSE(preset_config("fig1").control_enabled);
    EXPECT_EQ(preset_config("fig2").h, 0.01);
    EXPECT_EQ(preset_config("fig2").control.lambda, 1.0);
    EXPECT_EQ(preset_config("fig3").h, 0.001);
    EXPECT_EQ(preset_config("fig3").control.lambda, 1.0);
    EXPECT_EQ(preset_config("fig4").control.lambda, 10.0);
    EXPECT_EQ(preset_config("fig5").control.lambda, 0.1);
}

TEST(Presets, UnknownNameRaises) { EXPECT_THROW((void)preset_config("fig9"), UsageError); }

TEST(Presets, UncontrolledRunHoldsU) {
    const auto run = run_preset("fig1");
    for (double u : run.result.trajectory.u) {
        EXPECT_EQ(u, 0.025);
    }
    EXPECT_FALSE(run.summary.suppression_ratio.has_value());
    EXPECT_EQ(run.summary.max_control_deviation, 0.0);
}

TEST(Presets, SmallLambdaIsMoreAggressive) {
    const auto fig3 = run_preset("fig3");
    const auto fig5 = run_preset("fig5");
    EXPECT_GT(fig5.summary.max_control_deviation, fig3.summary.max_control_deviation);
}

TEST(Presets, ControlSuppressesLateBeats) {
    const auto fig2 = run_preset("fig2");
    ASSERT_TRUE(fig2.summary.suppression_ratio.has_value());
    EXPECT_LT(*fig2.summary.suppression_ratio, 1.0);
    EXPECT_EQ(fig2.summary.fallback_count, 0u);
}

TEST(Presets, OutputFilesAreReproducible) {
    const auto base = std::filesystem::temp_directory_path() / "dlsctl_experiment_tests";
    const auto a = run_preset("fig2", base / "a");
    const auto b = run_preset("fig2", base / "b");
    ASSERT_TRUE(std::filesystem::exists(a.csv_path));
    ASSERT_TRUE(std::filesystem::exists(a.svg_path));
    ASSERT_TRUE(std::filesystem::exists(a.config_path));
    EXPECT_EQ(slurp(a.csv_path), slurp(b.csv_path));
    EXPECT_EQ(slurp(a.svg_path), slurp(b.svg_path));
    EXPECT_EQ(read_csv(a.csv_path), a.result.trajectory);
    EXPECT_EQ(read_config(a.config_path), preset_config("fig2"));
}

TEST(Sweep, SingleCellReproducesPreset) {
    SweepSpec spec;
    spec.steps = {0.01};
    spec.lambdas = {1.0};
    const auto rows = run_sweep(spec);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].diverged);
    EXPECT_EQ(rows[0].summary, run_preset("fig2").summary);
}

TEST(Sweep, LockModeReproducesPresetPair) {
    SweepSpec spec;
    spec.steps = {0.01, 0.001};
    spec.lambda0 = 0.01;
    const auto rows = run_sweep(spec);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].lambda, 1.0);
    EXPECT_DOUBLE_EQ(rows[1].lambda, 10.0);
    EXPECT_EQ(rows[0].summary, run_preset("fig2").summary);
    EXPECT_EQ(rows[1].summary.max_envelope_x2_late, run_preset("fig4").summary.max_envelope_x2_late);
}

TEST(Sweep, GridOrderAndThreadedAgreement) {
    SweepSpec spec;
    spec.base.t_end = 60.0;
    spec.steps = {0.01, 0.005};
    spec.lambdas = {0.1, 1.0, 10.0};
    const auto sequential = run_sweep(spec);
    ASSERT_EQ(sequential.size(), 6u);
    for (std::size_t i = 0; i < sequential.size(); ++i) {
        EXPECT_EQ(sequential[i].h, spec.steps[i / 3]);
        EXPECT_EQ(sequential[i].lambda, spec.lambdas[i % 3]);
        EXPECT_FALSE(sequential[i].diverged);
        EXPECT_TRUE(std::isfinite(sequential[i].summary.max_envelope_x2_late) ||
                    sequential[i].summary.max_envelope_x2_late == 0.0);
    }
    spec.workers = 3;
    const auto threaded = run_sweep(spec);
    ASSERT_EQ(threaded.size(), sequential.size());
    for (std::size_t i = 0; i < threaded.size(); ++i) {
        EXPECT_EQ(threaded[i].summary, sequential[i].summary);
    }
    std::ostringstream out;
    write_sweep_csv(sequential, out);
    const auto text = out.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

TEST(Sweep, DivergentCellIsFlagged) {
    SweepSpec spec;
    spec.steps = {0.5, 0.01};
    spec.lambdas = {1.0};
    spec.base.t_end = 2000.0;
    const auto rows = run_sweep(spec);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].diverged);
    EXPECT_FALSE(rows[0].error.empty());
    EXPECT_FALSE(rows[1].diverged);
}
