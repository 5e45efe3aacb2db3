#include <catch2/catch_amalgamated.hpp>

#include "petdse/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace petdse;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("petdse_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

const std::string kTargets = std::string(PETDSE_DATA_DIR) + "/reference_targets.csv";

}  // namespace

TEST_CASE("sweep of one topology writes one row per feasible point", "[cli]")
{
    const auto dir = scratch("trad");
    const auto r = cli({"sweep", "--topology", "hybrid-traditional", "--m-min", "1", "--m-max", "2", "--step",
                        "0.25", "--out", dir.string(), "--formats", "csv"});
    REQUIRE(r.code == kExitOk);
    const auto csv = slurp(dir / "sweep_hybrid-traditional.csv");
    CHECK(count_lines(csv) == 1 + 4);
    CHECK(count_lines(slurp(dir / "infeasible.csv")) == 1 + 1);
    CHECK_FALSE(fs::exists(dir / "fig5_volume.svg"));
    CHECK(fs::exists(dir / "run_manifest.csv"));
}

TEST_CASE("default sweep writes every artifact", "[cli]")
{
    const auto dir = scratch("default");
    const auto r = cli({"sweep", "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    for (const char* f : {"sweep_hybrid-traditional.csv", "sweep_hybrid-sbb.csv", "sweep_full-bridge.csv",
                          "infeasible.csv", "fig5_volume.svg", "fig6_cost.svg", "fig7_losses.svg",
                          "run_manifest.csv"}) {
        INFO(f);
        CHECK(fs::exists(dir / f));
    }
    const auto manifest = slurp(dir / "run_manifest.csv");
    CHECK(manifest.find("grid_points,121\n") != std::string::npos);
    CHECK(r.out.find("hybrid-sbb:") != std::string::npos);
}

TEST_CASE("serial and parallel sweeps write identical files", "[cli]")
{
    const auto a = scratch("par");
    const auto b = scratch("ser");
    REQUIRE(cli({"sweep", "--out", a.string()}).code == kExitOk);
    REQUIRE(cli({"sweep", "--out", b.string(), "--serial"}).code == kExitOk);
    for (const auto& entry : fs::directory_iterator(a)) {
        INFO(entry.path().filename().string());
        CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
}

TEST_CASE("sweep with an empty feasible set exits 3", "[cli]")
{
    const auto dir = scratch("empty");
    const auto r = cli({"sweep", "--m-min", "3", "--topology", "half-bridge", "--out", dir.string()});
    CHECK(r.code == kExitInfeasible);
    CHECK(r.err.find("half-bridge") != std::string::npos);
}

TEST_CASE("sweep argument errors exit 2", "[cli]")
{
    const auto dir = scratch("bad");
    CHECK(cli({"sweep", "--step", "0", "--out", dir.string()}).code == kExitConfig);
    CHECK(cli({"sweep", "--topology", "nowhere", "--out", dir.string()}).code == kExitConfig);
    CHECK(cli({"sweep", "--formats", "pdf", "--out", dir.string()}).code == kExitConfig);
    CHECK(cli({"sweep", "--config", "/nonexistent.ini"}).code == kExitConfig);
    CHECK(cli({"sweep", "--no-such-flag"}).code == kExitConfig);
    CHECK(cli({}).code == kExitConfig);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("design report at hybrid-sbb m = 3", "[cli]")
{
    const auto r = cli({"design", "--topology", "hybrid-sbb", "--m", "3", "--kv"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("n_dc_units=4\n") != std::string::npos);
    CHECK(r.out.find("n_dc_units_fraction=1/3\n") != std::string::npos);
    const auto text = cli({"design", "--topology", "hybrid-sbb", "--m", "3"});
    CHECK(text.out.find("1/3") != std::string::npos);
}

TEST_CASE("infeasible design point exits 3", "[cli]")
{
    const auto r = cli({"design", "--topology", "hybrid-traditional", "--m", "2.5"});
    CHECK(r.code == kExitInfeasible);
    CHECK(r.err.find("exceeds m_max=2") != std::string::npos);
    CHECK(cli({"design", "--topology", "full-bridge", "--m", "12"}).code == kExitInfeasible);
    CHECK(cli({"design", "--topology", "nowhere", "--m", "2"}).code == kExitConfig);
}

TEST_CASE("baseline design reports unit ratios", "[cli]")
{
    const auto r = cli({"design", "--topology", "half-bridge", "--m", "1", "--kv"});
    REQUIRE(r.code == kExitOk);
    for (const char* key : {"mmc_cost_ratio", "mmc_volume_ratio", "dcdc_cost_ratio", "dcdc_volume_ratio",
                            "total_cost_ratio", "total_volume_ratio"}) {
        INFO(key);
        CHECK(r.out.find(std::string(key) + "=1\n") != std::string::npos);
    }
}

TEST_CASE("compare windows", "[cli]")
{
    const auto def = cli({"compare"});
    CHECK(def.code == kExitOk);
    CHECK(def.out.find("hybrid-traditional") != std::string::npos);

    const auto beyond = cli({"compare", "--window", "5:6"});
    CHECK(beyond.code == kExitOk);
    CHECK(beyond.out.find("hybrid-traditional") != std::string::npos);

    CHECK(cli({"compare", "--window", "2:2"}).code == kExitOk);
    CHECK(cli({"compare", "--window", "20:21"}).code == kExitInfeasible);
    CHECK(cli({"compare", "--window", "2:1"}).code == kExitConfig);
    CHECK(cli({"compare", "--window", "abc"}).code == kExitConfig);
}

TEST_CASE("calibrate against the shipped targets", "[cli]")
{
    const auto dir = scratch("cal");
    const auto r = cli({"calibrate", "--targets", kTargets, "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(fs::exists(dir / "calibrated_coefficients.ini"));
    CHECK(count_lines(slurp(dir / "residuals.csv")) == 1 + 22);
    CHECK(fs::exists(dir / "run_manifest.csv"));
}

TEST_CASE("calibrate with one target and with none", "[cli]")
{
    const auto dir = scratch("cal_edge");
    {
        std::ofstream(dir / "one.csv") << "m,metric,target\n3,total_volume,0.8\n";
        std::ofstream(dir / "none.csv") << "m,metric,target\n";
    }
    CHECK(cli({"calibrate", "--targets", (dir / "one.csv").string(), "--out", dir.string(), "--starts", "4"}).code ==
          kExitOk);
    CHECK(cli({"calibrate", "--targets", (dir / "none.csv").string(), "--out", dir.string()}).code == kExitConfig);
    CHECK(cli({"calibrate"}).code == kExitConfig);
}

TEST_CASE("calibrate exits 4 when targets cannot be met", "[cli]")
{
    const auto dir = scratch("cal_bad");
    // The same design point cannot have two different cost ratios.
    { std::ofstream(dir / "t.csv") << "m,metric,target\n3,total_cost,0.5\n3,total_cost,1.5\n"; }
    CHECK(cli({"calibrate", "--targets", (dir / "t.csv").string(), "--out", dir.string(), "--starts", "2"}).code ==
          kExitResidual);
}
