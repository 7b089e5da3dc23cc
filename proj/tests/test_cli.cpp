#include "dayahead/cli/commands.hpp"
#include "dayahead/cli/csv.hpp"
#include "dayahead/cli/synth.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dayahead;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("dayahead_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        core::set_warning_sink([this](const std::string& m) { warnings_.push_back(m); });
    }
    void TearDown() override {
        core::set_warning_sink(nullptr);
        fs::remove_all(dir_);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    std::vector<std::string> warnings_;
};

std::string expect_error(const std::string& csv) {
    std::istringstream in(csv);
    try {
        cli::read_csv(in, "bad.csv");
    } catch (const DataError& e) {
        return e.what();
    }
    ADD_FAILURE() << "no DataError for:\n" << csv;
    return {};
}

} // namespace

TEST(Csv, ReadsTwoKpis) {
    std::istringstream in("timestamp,cpu,mem\n"
                          "2024-01-01T00:00:00,1.5,10\n"
                          "2024-01-01T00:05:00,2.5,11\n"
                          "2024-01-01T00:10:00Z,3.5,12\n"
                          "2024-01-01T00:15:00+00:00,4.5,13\n");
    const auto s = cli::read_csv(in);
    EXPECT_EQ(s.n(), 4u);
    EXPECT_EQ(s.p(), 2u);
    EXPECT_EQ(s.dim_names(), (std::vector<std::string>{"cpu", "mem"}));
    EXPECT_EQ(s.at(2, 0), 3.5);
    EXPECT_EQ(s.at(3, 1), 13.0);
    EXPECT_EQ(s.timestamps()[1] - s.timestamps()[0], 300);
}

TEST(Csv, ParseErrorsNameTheProblem) {
    auto msg = expect_error("timestamp,cpu,mem\n2024-01-01T00:00:00,1,2\n2024-01-01T00:05:00,3,\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("mem"), std::string::npos) << msg;

    msg = expect_error("timestamp,cpu\n2024-01-01T00:05:00,1\n2024-01-01T00:00:00,2\n");
    EXPECT_NE(msg.find("increasing"), std::string::npos) << msg;

    msg = expect_error("timestamp,cpu\n2024-01-01T00:00:00,1\n2024-01-01T00:05:00,2\n2024-01-01T00:20:00,3\n");
    EXPECT_NE(msg.find("interval"), std::string::npos) << msg;

    expect_error("timestamp,cpu\n2024-01-01T00:00:00,abc\n");
    expect_error("timestamp,cpu\nyesterday,1\n");
    expect_error("timestamp,cpu\n2024-01-01T00:00:00,nan\n");
    expect_error("");
}

TEST(Csv, TimestampRoundTrip) {
    EXPECT_EQ(cli::parse_timestamp("2024-01-01T00:00:00"), 1704067200);
    EXPECT_EQ(cli::parse_timestamp("2024-01-01T02:00:00+02:00"), 1704067200);
    EXPECT_EQ(cli::format_timestamp(1704067200 + 86399), "2024-01-01T23:59:59Z");
    EXPECT_EQ(cli::parse_timestamp("2024-01-01 00:00:00"), 1704067200);
}

TEST_F(TempDir, WriteReadRoundTrip) {
    cli::SynthOptions o;
    o.profile = cli::SynthProfile::PlantedK;
    o.days = 3;
    o.h = 10;
    o.dims = 2;
    o.noise = 0.3;
    o.seed = 4;
    const auto s = cli::generate(o).series;
    cli::write_csv_file(path("s.csv"), s);
    const auto back = cli::ingest_csv(path("s.csv"));
    ASSERT_EQ(back.n(), s.n());
    EXPECT_EQ(back.timestamps(), s.timestamps());
    EXPECT_EQ(back.dim_names(), s.dim_names());
    for (std::size_t i = 0; i < s.values().size(); ++i) {
        EXPECT_NEAR(back.values()[i], s.values()[i], 1e-11 * std::max(1.0, std::abs(s.values()[i])));
    }
}

TEST(Synth, Deterministic) {
    cli::SynthOptions o;
    o.profile = cli::SynthProfile::PlantedK;
    o.days = 20;
    o.h = 24;
    o.dims = 3;
    o.noise = 0.2;
    o.seed = 77;
    std::ostringstream a, b;
    cli::write_csv(a, cli::generate(o).series);
    cli::write_csv(b, cli::generate(o).series);
    EXPECT_EQ(a.str(), b.str());
    o.seed = 78;
    std::ostringstream c;
    cli::write_csv(c, cli::generate(o).series);
    EXPECT_NE(a.str(), c.str());
}

TEST(Synth, WeeklyGivesPointEight) {
    cli::SynthOptions o;
    o.days = 70;
    o.h = 24;
    const auto data = cli::generate(o);
    EXPECT_EQ(data.day_labels[0], 0u);
    EXPECT_EQ(data.day_labels[5], 1u);
    const auto model = forecaster::train(data.series, 2, 24, 0);
    const std::size_t ha = clustering::assign(
        model.clusters, core::apply_norm(core::split_days(data.series, 24)[0], model.norm));
    EXPECT_NEAR(model.transitions.probs[ha][ha], 0.8, 1e-12);
}

TEST(Synth, PlantedKIsRecoveredBySelection) {
    cli::SynthOptions o;
    o.profile = cli::SynthProfile::PlantedK;
    o.k = 3;
    o.days = 60;
    o.h = 16;
    o.seed = 5;
    const auto series = cli::generate(o).series;
    const auto split = eval::chrono_split(series, {}, 16);
    const auto sel = forecaster::select_k(split.train, split.validation, {2, 6}, 16, 0);
    EXPECT_EQ(sel.best_k, 3u);
}

TEST(Synth, RejectsBadOptions) {
    cli::SynthOptions o;
    o.days = 0;
    EXPECT_THROW(cli::generate(o), ConfigError);
    EXPECT_THROW(cli::parse_profile("monthly"), ConfigError);
}

TEST(RunConfig, Validation) {
    cli::RunConfig c;
    EXPECT_NO_THROW(c.validate());
    c.k_min = 5;
    c.k_max = 4;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.mode = "both";
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.methods = "dayahead,prophet";
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(cli::parse_split("0.7,0.2"), ConfigError);
    EXPECT_THROW(cli::parse_split("0.7,0.2,0.2"), ConfigError);
    const auto s = cli::parse_split("0.6,0.2,0.2");
    EXPECT_DOUBLE_EQ(s.valid_frac, 0.2);
}

namespace {

cli::RunConfig synth_config(const std::string& dir, const std::string& profile, std::size_t dims) {
    cli::RunConfig c;
    c.output_dir = dir;
    c.output = dir + "/data.csv";
    c.profile = profile;
    c.days = 40;
    c.h = 12;
    c.dims = dims;
    c.noise = 0.1;
    c.seed = 3;
    return c;
}

} // namespace

TEST_F(TempDir, TrainThenForecast) {
    auto c = synth_config(dir_.string(), "weekly", 2);
    c.input = cli::cmd_synth(c);
    c.k_max = 6;
    const auto model = cli::cmd_train(c);
    EXPECT_TRUE(fs::exists(c.model_path()));

    const auto series = cli::ingest_csv(c.input);
    cli::write_csv_file(path("day.csv"), series.slice(39 * 12, 40 * 12));
    c.input = path("day.csv");
    const auto out = cli::cmd_forecast(c);
    const auto expected = core::denorm(model.clusters.centroid_day(out.forecast.predicted_cluster), model.norm);
    const auto written = cli::ingest_csv(out.csv_path);
    ASSERT_EQ(written.n(), 12u);
    for (std::size_t i = 0; i < expected.values().size(); ++i) {
        EXPECT_NEAR(written.values()[i], expected.values()[i], 1e-9 * std::max(1.0, std::abs(expected.values()[i])));
    }
    const auto& ts = series.timestamps();
    EXPECT_EQ(written.timestamps().front(), ts.back() + (ts[1] - ts[0]));
    EXPECT_NE(slurp(out.json_path).find("predicted_cluster"), std::string::npos);

    cli::write_csv_file(path("short.csv"), series.slice(0, 11));
    c.input = path("short.csv");
    EXPECT_THROW(cli::cmd_forecast(c), GeometryError);
}

TEST_F(TempDir, TrainingIsDeterministic) {
    auto c = synth_config(dir_.string(), "planted-k", 1);
    c.input = cli::cmd_synth(c);
    c.k_max = 5;
    c.model = path("a.json");
    cli::cmd_train(c);
    c.model = path("b.json");
    cli::cmd_train(c);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(TempDir, TrainRejectsTooFewDays) {
    auto c = synth_config(dir_.string(), "planted-k", 1);
    c.days = 2;
    c.synth_k = 2;
    c.input = cli::cmd_synth(c);
    EXPECT_THROW(cli::cmd_train(c), InsufficientDataError);
}

TEST_F(TempDir, EvaluateModes) {
    auto c = synth_config(dir_.string(), "planted-k", 3);
    c.input = cli::cmd_synth(c);
    c.methods = "dayahead,meanday,omniscient";
    c.mode = "univariate";
    auto report = cli::cmd_evaluate(c);
    EXPECT_EQ(report.datasets.size(), 3u);
    EXPECT_TRUE(fs::exists(path("report.json")));
    EXPECT_TRUE(fs::exists(path("report.txt")));
    EXPECT_TRUE(fs::exists(path("errors.csv")));
    EXPECT_EQ(eval::report_to_json(eval::report_from_json(slurp(path("report.json")))) + "\n",
              slurp(path("report.json")));

    c.mode = "multivariate";
    report = cli::cmd_evaluate(c);
    ASSERT_EQ(report.datasets.size(), 1u);
    EXPECT_EQ(report.datasets[0].p, 3u);

    warnings_.clear();
    report = cli::cmd_compare(c);
    EXPECT_TRUE(fs::exists(path("compare.json")));
    EXPECT_EQ(report.datasets.size(), 4u);
    // Default k range exceeds the training days, so it is clamped with a warning.
    EXPECT_FALSE(warnings_.empty());
}

#ifdef DAYAHEAD_CLI_PATH
namespace {

int run(const std::string& args, const std::string& log) {
    const std::string cmd = std::string("\"") + DAYAHEAD_CLI_PATH + "\" " + args + " > \"" + log + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return status == 0 ? 0 : 1;
}

} // namespace

TEST_F(TempDir, BinaryEndToEnd) {
    const std::string d = dir_.string();
    ASSERT_EQ(run("synth --profile weekly --days 35 --h 8 --noise 0.05 --seed 1 --output " + d + "/w.csv",
                  path("synth.log")),
              0)
        << slurp(path("synth.log"));
    ASSERT_EQ(run("train --input " + d + "/w.csv --h 8 --k-min 2 --k-max 2 --output-dir " + d, path("train.log")), 0)
        << slurp(path("train.log"));
    EXPECT_NE(slurp(path("train.log")).find("trained k=2"), std::string::npos);

    write("run.ini", "input = " + d + "/w.csv\nh = 8\nk-max = 5\nmethods = dayahead,meanday\noutput-dir = " + d +
                         "\n");
    ASSERT_EQ(run("evaluate --config " + path("run.ini"), path("eval.log")), 0) << slurp(path("eval.log"));
    const auto table = slurp(path("eval.log"));
    EXPECT_NE(table.find("dayahead"), std::string::npos) << table;
    EXPECT_NE(table.find("meanday"), std::string::npos) << table;

    EXPECT_NE(run("evaluate --input " + d + "/missing.csv --h 8", path("err.log")), 0);
    EXPECT_NE(slurp(path("err.log")).find("missing.csv"), std::string::npos);
    EXPECT_NE(run("evaluate --input " + d + "/w.csv --h 8 --methods lstm", path("err2.log")), 0);
}
#endif
