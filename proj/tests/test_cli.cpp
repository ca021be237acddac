#include <doctest.h>

#include "qmeas/cli/commands.hpp"
#include "qmeas/cli/manifest.hpp"
#include "qmeas/instances.hpp"
#include "qmeas/serialize.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

using namespace qmeas;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("qmeas_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path path = dir / "config.json";
    std::ofstream out(path);
    out << text;
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Tiny CSV reader: '#' lines are metadata, the first ordinary line is the
/// header, the rest are rows.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name) return static_cast<int>(c);
        return -1;
    }
};

CsvTable read_csv(const fs::path& path) {
    CsvTable table;
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header_seen) {
            table.columns = cells;
            header_seen = true;
        } else {
            table.rows.push_back(cells);
        }
    }
    return table;
}

const std::string kPsConfig = R"({
  "system": {
    "dimension": 2,
    "psi": [[1, 0], [1, 0]],
    "operator": {"projector_basis": [[[1, 0], [0, 0]]]}
  },
  "pointer": {"n_points": 1024, "q_range": [-20, 20], "sigma": 1.0},
  "sweep": {"gamma": [0.5]},
  "outputs": {"directory": "unused"}
})";

cli::CommandOptions options_for(const fs::path& config, const fs::path& out,
                                std::uint64_t seed = 1) {
    cli::CommandOptions opt;
    opt.config_path = config;
    opt.out_dir = out;
    opt.seed = seed;
    return opt;
}

} // namespace

TEST_CASE("cmd_ps writes profiles, means and a manifest") {
    const fs::path dir = fresh_dir("ps");
    const fs::path config = write_config(dir, kPsConfig);
    std::ostringstream log;
    const int code = cli::cmd_ps(options_for(config, dir / "out"), log);
    CHECK(code == 0);
    CHECK(fs::exists(dir / "out" / "ps_profile_0.csv"));
    CHECK(fs::exists(dir / "out" / "ps_means.csv"));
    CHECK(fs::exists(dir / "out" / "run_manifest.json"));

    const CsvTable means = read_csv(dir / "out" / "ps_means.csv");
    REQUIRE(means.rows.size() == 1);
    const double mean_q = std::stod(means.rows[0][means.column("mean_q")]);
    const double mean_p = std::stod(means.rows[0][means.column("mean_p")]);
    CHECK(mean_q == doctest::Approx(0.5 * 0.5).epsilon(1e-9)); // gamma <A>
    CHECK(std::abs(mean_p) < 1e-12);
}

TEST_CASE("cmd_ps flags an invalid projector basis as a config error") {
    const fs::path dir = fresh_dir("ps_bad_basis");
    const std::string bad = R"({
      "system": {
        "dimension": 2,
        "psi": [[1, 0], [0, 0]],
        "operator": {"projector_basis": [[[1, 0], [1, 0]], [[2, 0], [2, 0]]]}
      },
      "sweep": {"gamma": [0.5]}
    })";
    const fs::path config = write_config(dir, bad);
    std::ostringstream log;
    const int code = cli::cmd_ps(options_for(config, dir / "out"), log);
    CHECK(code == 1);
    CHECK(log.str().find("projector_basis") != std::string::npos);
}

TEST_CASE("cmd_ps requires a projector for the exact closed forms") {
    const fs::path dir = fresh_dir("ps_nonproj");
    const std::string hermitian = R"({
      "system": {
        "dimension": 2,
        "psi": [[1, 0], [0, 0]],
        "operator": {"hermitian_matrix": [[[0.3, 0], [0.4, -0.2]], [[0.4, 0.2], [-0.5, 0]]]}
      },
      "sweep": {"gamma": [0.5]}
    })";
    const fs::path config = write_config(dir, hermitian);
    std::ostringstream log;
    CHECK(cli::cmd_ps(options_for(config, dir / "out"), log) == 1);
    CHECK(log.str().find("not a projector") != std::string::npos);
}

TEST_CASE("cmd_pps reports mean_q = gamma when A_w = 1") {
    const fs::path dir = fresh_dir("pps_unit");
    const std::string cfg = R"({
      "system": {
        "dimension": 2,
        "psi": [[1, 0], [0, 0]],
        "psi_f": [[1, 0], [0, 0]],
        "operator": {"projector_basis": [[[1, 0], [0, 0]]]}
      },
      "sweep": {"gamma": [0.1, 0.2, 0.3]},
      "outputs": {"directory": "unused"}
    })";
    const fs::path config = write_config(dir, cfg);
    std::ostringstream log;
    CHECK(cli::cmd_pps(options_for(config, dir / "out"), log) == 0);

    const CsvTable means = read_csv(dir / "out" / "pps_means.csv");
    REQUIRE(means.rows.size() == 3);
    for (const auto& row : means.rows) {
        const double gamma = std::stod(row[means.column("gamma")]);
        const double mean_q = std::stod(row[means.column("mean_q")]);
        CHECK(mean_q == doctest::Approx(gamma).epsilon(1e-9));
    }
}

TEST_CASE("cmd_pps summary reports the complex weak value") {
    const fs::path dir = fresh_dir("pps_half");
    const std::string cfg = R"({
      "system": {
        "dimension": 2,
        "psi": [[1, 0], [1, 0]],
        "psi_f": [[1, 0], [0, 1]],
        "operator": {"projector_basis": [[[1, 0], [0, 0]]]}
      },
      "sweep": {"gamma": [0.05]}
    })";
    const fs::path config = write_config(dir, cfg);
    std::ostringstream log;
    CHECK(cli::cmd_pps(options_for(config, dir / "out"), log) == 0);

    const auto summary =
        nlohmann::json::parse(read_file(dir / "out" / "pps_summary.json"));
    REQUIRE(summary["rows"].size() == 1);
    CHECK(summary["rows"][0]["a_w_re"].get<double>() == doctest::Approx(0.5));
    CHECK(summary["rows"][0]["a_w_im"].get<double>() == doctest::Approx(0.5));
    CHECK(summary["rows"][0]["n"].get<double>() > 0.0);
}

TEST_CASE("cmd_pps fails with a diagnostic on orthogonal post-selection") {
    const fs::path dir = fresh_dir("pps_orth");
    const std::string cfg = R"({
      "system": {
        "dimension": 2,
        "psi": [[1, 0], [0, 0]],
        "psi_f": [[0, 0], [1, 0]],
        "operator": {"projector_basis": [[[1, 0], [0, 0]]]}
      },
      "sweep": {"gamma": [0.1]}
    })";
    const fs::path config = write_config(dir, cfg);
    std::ostringstream log;
    CHECK(cli::cmd_pps(options_for(config, dir / "out"), log) == 3);
    CHECK(log.str().find("overlap") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical CSV outputs") {
    const fs::path dir = fresh_dir("determinism");
    const fs::path config = write_config(dir, kPsConfig);
    std::ostringstream log;
    CHECK(cli::cmd_ps(options_for(config, dir / "a", 7), log) == 0);
    CHECK(cli::cmd_ps(options_for(config, dir / "b", 7), log) == 0);
    for (const char* name : {"ps_profile_0.csv", "ps_means.csv"})
        CHECK(read_file(dir / "a" / name) == read_file(dir / "b" / name));
}

TEST_CASE("manifest lists every output exactly once and hashes the config") {
    const fs::path dir = fresh_dir("manifest");
    const std::string text = kPsConfig;
    const fs::path config = write_config(dir, text);
    std::ostringstream log;
    CHECK(cli::cmd_ps(options_for(config, dir / "out", 9), log) == 0);

    const auto manifest =
        nlohmann::json::parse(read_file(dir / "out" / "run_manifest.json"));
    CHECK(manifest["config_hash"].get<std::string>() == cli::fnv1a_hex(text));
    CHECK(manifest["seed"].get<std::uint64_t>() == 9);

    std::map<std::string, int> listed;
    for (const auto& entry : manifest["outputs"])
        listed[entry.get<std::string>()]++;
    for (const auto& [name, count] : listed) CHECK(count == 1);

    std::map<std::string, int> on_disk;
    for (const auto& entry : fs::directory_iterator(dir / "out")) {
        const std::string name = entry.path().filename().string();
        if (name != "run_manifest.json") on_disk[name]++;
    }
    CHECK(listed.size() == on_disk.size());
    for (const auto& [name, count] : on_disk) CHECK(listed.count(name) == 1);
}

TEST_CASE("cmd_sensitivity emits the predicted deltas and flags M = p") {
    const fs::path dir = fresh_dir("sensitivity_ps");
    const std::string cfg = R"({
      "system": {
        "dimension": 2,
        "psi": [[1, 0], [1, 0]],
        "operator": {"projector_basis": [[[1, 0], [0, 0]]]}
      },
      "sweep": {"gamma": [0.1]},
      "observables": ["q", "p"]
    })";
    const fs::path config = write_config(dir, cfg);
    std::ostringstream log;
    CHECK(cli::cmd_sensitivity(options_for(config, dir / "out", 5), log) == 0);

    const CsvTable q_table = read_csv(dir / "out" / "sensitivity_q.csv");
    REQUIRE(q_table.rows.size() == 1);
    CHECK(std::stod(q_table.rows[0][q_table.column("delta_mean_a")]) ==
          doctest::Approx(10.0).epsilon(1e-9));
    CHECK(std::stod(q_table.rows[0][q_table.column("delta_gamma")]) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(q_table.rows[0][q_table.column("status")] == "ok");

    const CsvTable p_table = read_csv(dir / "out" / "sensitivity_p.csv");
    REQUIRE(p_table.rows.size() == 1);
    CHECK(p_table.rows[0][p_table.column("status")] == "undefined_sensitivity");

    // monte-carlo comparison for the PS instance
    const auto mc = nlohmann::json::parse(read_file(dir / "out" / "mc_comparison.json"));
    REQUIRE(mc["rows"].size() == 1);
    for (const auto& check : mc["rows"][0]["checks"])
        CHECK(check["rel_diff"].get<double>() < 0.1);
}

TEST_CASE("cmd_sensitivity reports the Im A_w accuracy diagnostic for pps") {
    const fs::path dir = fresh_dir("sensitivity_pps");
    const std::string cfg = R"({
      "system": {
        "dimension": 2,
        "psi": [[1, 0], [1, 0]],
        "psi_f": [[1, 0], [0, 1]],
        "operator": {"projector_basis": [[[1, 0], [0, 0]]]}
      },
      "sweep": {"gamma": [0.05]},
      "observables": ["q"]
    })";
    const fs::path config = write_config(dir, cfg);
    std::ostringstream log;
    CHECK(cli::cmd_sensitivity(options_for(config, dir / "out", 5), log) == 0);

    const auto mc = nlohmann::json::parse(read_file(dir / "out" / "mc_comparison.json"));
    REQUIRE(mc["rows"].size() == 1);
    CHECK(mc["rows"][0].contains("im_aw_accuracy_term"));
    CHECK(mc["rows"][0].contains("im_aw_accuracy_effect"));
    const CsvTable q_table = read_csv(dir / "out" / "sensitivity_q.csv");
    CHECK(std::stod(q_table.rows[0][q_table.column("delta_re_aw")]) ==
          doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("cmd_verify runs the randomized suite and reports success") {
    const fs::path dir = fresh_dir("verify");
    cli::CommandOptions opt;
    opt.out_dir = dir / "out";
    opt.seed = 3;
    opt.verify_instances = 10;
    std::ostringstream log;
    CHECK(cli::cmd_verify(opt, log) == 0);
    CHECK(log.str().find("[PASS]") != std::string::npos);
    CHECK(log.str().find("[FAIL]") == std::string::npos);
    CHECK(fs::exists(dir / "out" / "verify_report.json"));
}

TEST_CASE("missing config file is a config error") {
    std::ostringstream log;
    cli::CommandOptions opt;
    opt.config_path = "/nonexistent/config.json";
    CHECK(cli::cmd_ps(opt, log) == 1);
}

TEST_CASE("pointer state CSV export carries the full wavefunction") {
    const fs::path dir = fresh_dir("pointer_csv");
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = phased_gaussian(grid, 0.0, 1.0, 0.5, 0.0);
    write_pointer_csv(dir / "state.csv", phi);

    const CsvTable table = read_csv(dir / "state.csv");
    REQUIRE(table.columns ==
            std::vector<std::string>({"q", "re_phi", "im_phi", "abs2_phi"}));
    REQUIRE(static_cast<int>(table.rows.size()) == grid.n());
    const std::string text = read_file(dir / "state.csv");
    CHECK(text.find("# n_points=1024") != std::string::npos);
    for (int j : {0, 512, 1023}) {
        const auto& row = table.rows[j];
        CHECK(std::stod(row[0]) == doctest::Approx(grid.q(j)).epsilon(1e-15));
        CHECK(std::stod(row[1]) ==
              doctest::Approx(phi.amplitudes()[j].real()).epsilon(1e-15));
        CHECK(std::stod(row[2]) ==
              doctest::Approx(phi.amplitudes()[j].imag()).epsilon(1e-15));
        CHECK(std::stod(row[3]) ==
              doctest::Approx(std::norm(phi.amplitudes()[j])).epsilon(1e-15));
    }
}

TEST_CASE("states and operators round-trip through their JSON form") {
    Rng rng(71);
    for (int i = 0; i < 10; ++i) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const SystemState psi = random_state(rng, dim);
        const SystemState back = state_from_json(state_to_json(psi), "roundtrip");
        // the constructor renormalizes, so the round-trip is exact only up to
        // one division by a norm of 1 + O(eps)
        CHECK((psi.amplitudes() - back.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);

        const SystemOperator h = random_hermitian(rng, dim);
        const Matrix m = matrix_from_json(operator_to_json(h), "roundtrip");
        CHECK((h.matrix() - m).cwiseAbs().maxCoeff() == 0.0);
    }
}
