#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "axeuler/kernel.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "axeuler");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = axeuler::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(AXEULER_TEST_TMPDIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"norms", "/nonexistent.csv"}).code == 2);
  const auto bad = invoke({"kernel", "--s-max", "1.5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error") != std::string::npos);
}

TEST_CASE("kernel table") {
  const auto r = invoke({"kernel", "--s-min", "0.5", "--s-max", "0.9", "--s-count", "3"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].rfind("0.5,", 0) == 0);
  const double closed = std::stod(rows[1].substr(rows[1].find(',') + 1));
  CHECK(closed == doctest::Approx(axeuler::kernel::h_closed(0.5)).epsilon(1e-15));
  CHECK(closed == doctest::Approx(0.9388841).epsilon(1e-7));
}

TEST_CASE("norms of an indicator field") {
  const auto dir = scratch("norms");
  // Nodes r = 1, 3 and z = -0.5, 0.5; the r = 1 cells carry weight r^2 h_r h_z = 2 each.
  write_file(dir / "f.csv", "r,z,value\n1,-0.5,1\n1,0.5,1\n3,-0.5,0\n3,0.5,0\n");
  const auto r = invoke({"norms", "--p", "2", "--q", "1", (dir / "f.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "2,1,4.0\n");
  const auto weak = invoke({"norms", "--p", "2", "--q", "inf", (dir / "f.csv").string()});
  REQUIRE(weak.code == 0);
  CHECK(weak.out.rfind("2,inf,", 0) == 0);
  write_file(dir / "bad.csv", "r,z,value\n1,-0.5,1\n1,0.5,oops\n");
  const auto bad = invoke({"norms", (dir / "bad.csv").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 3") != std::string::npos);
}

TEST_CASE("reconstruct a zero field") {
  const auto dir = scratch("recon");
  write_file(dir / "w.csv", "r,z,value\n0.25,-0.5,0\n0.25,0.5,0\n0.75,-0.5,0\n0.75,0.5,0\n0.25,0,0\n");
  CHECK(invoke({"reconstruct", (dir / "w.csv").string()}).code == 2);
  write_file(dir / "w.csv", "r,z,value\n0.25,-0.5,0\n0.25,0.5,0\n0.75,-0.5,0\n0.75,0.5,0\n");
  const auto r = invoke({"reconstruct", "-o", (dir / "u.csv").string(), (dir / "w.csv").string()});
  REQUIRE(r.code == 0);
  std::ifstream in(dir / "u.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = lines(ss.str());
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "r,z,ur,uz");
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].substr(rows[k].size() - 4) == ",0,0");
}

TEST_CASE("simulate writes diagnostics with a constant l21") {
  const auto dir = scratch("sim");
  nlohmann::json cfg = {{"dimension", 4},
                        {"grid", {{"r_max", 2.5}, {"z_min", -2}, {"z_max", 2}, {"nr", 25}, {"nz", 40}}},
                        {"preset", "single-ring"},
                        {"dt", 0.05},
                        {"t_end", 0.2},
                        {"diagnostics_every", 1},
                        {"snapshot_every", 2},
                        {"envelope_constant", 0.16},
                        {"out_dir", "out"}};
  write_file(dir / "cfg.json", cfg.dump());
  const auto r = invoke({"simulate", "--config", (dir / "cfg.json").string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "out" / "particles_0.csv"));
  CHECK(fs::exists(dir / "out" / "particles_2.csv"));
  std::ifstream in(dir / "out" / "diagnostics.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = lines(ss.str());
  REQUIRE(rows.size() == 6);
  auto column = [](const std::string& row, int k) {
    std::istringstream is(row);
    std::string cell;
    for (int i = 0; i <= k; ++i) std::getline(is, cell, ',');
    return cell;
  };
  for (std::size_t k = 2; k < rows.size(); ++k) CHECK(column(rows[k], 2) == column(rows[1], 2));

  cfg["initial_csv"] = "x.csv";
  write_file(dir / "cfg.json", cfg.dump());
  CHECK(invoke({"simulate", "--config", (dir / "cfg.json").string()}).code == 2);
  cfg.erase("initial_csv");
  cfg["dt"] = -1.0;
  write_file(dir / "cfg.json", cfg.dump());
  CHECK(invoke({"simulate", "--config", (dir / "cfg.json").string()}).code == 2);
}

TEST_CASE("verify subcommand") {
  const auto r = invoke({"verify", "--lemma", "h-bounds"});
  CHECK(r.code == 0);
  CHECK(r.out.find("h-bounds") != std::string::npos);
  const auto a = invoke({"verify", "--lemma", "kernel", "--json"});
  const auto b = invoke({"verify", "--lemma", "kernel", "--json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(nlohmann::json::parse(a.out)["checks"].size() == 1);
  CHECK(invoke({"verify", "--lemma", "nonsense"}).code == 2);
}
