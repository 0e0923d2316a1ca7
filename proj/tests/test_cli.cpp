#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// stderr is folded into out when merge_err is set.
Run run(const std::string& args, bool merge_err = false) {
  const std::string cmd = std::string("'") + XIBERGMAN_CLI_PATH + "' " + args + (merge_err ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("xibergman_cli_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("compute prints the kernel as JSON") {
  const Run r = run("compute --domain disk --xi '0:1' --p 2 --z 0");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK_THAT(j.at("result").at("K").get<double>(), WithinRel(0.3183098862, 1e-9));
  CHECK(j.at("command") == "compute");
  CHECK(j.at("seed") == 42);
  CHECK(j.at("domain").at("shape") == "disk");
}

TEST_CASE("compute at p = 1.5 and CSV output") {
  const Run r = run("compute --domain disk --xi '1:1' --p 1.5 --z 0 --format csv --seed 7");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("# seed=7"));
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][4] == "K");
  CHECK_THAT(std::stod(rows[1][4]), WithinRel(0.5570423008, 1e-8));
  CHECK(rows[1].back() == "ok");
}

TEST_CASE("higher kernel and off-diagonal") {
  const Run h = run("compute --domain disk --H 'z1^2' --p 2 --z 0");
  REQUIRE(h.code == 0);
  CHECK_THAT(json::parse(h.out).at("result").at("K").get<double>(), WithinRel(12.0 / 3.14159265358979, 1e-9));
  const Run o = run("compute --domain disk --xi '0:1' --p 2 --z 0.5 --pole 0");
  REQUIRE(o.code == 0);
  const json v = json::parse(o.out).at("off_diagonal").at("value");
  CHECK_THAT(v[0].get<double>(), WithinRel(0.318309886184, 1e-11));
}

TEST_CASE("configuration errors exit with 1 and name the field") {
  const Run r = run("compute --domain disk --xi '0:1' --z 0", true);
  CHECK(r.code == 1);
  CHECK_THAT(r.out, ContainsSubstring("'p'"));
  const Run bad = run("compute --domain disk --xi '0:1' --p 2 --z 2", true);
  CHECK(bad.code == 1);
  CHECK_THAT(bad.out, ContainsSubstring("'z'"));
  const Run shape = run("compute --domain square --xi '0:1' --p 2 --z 0", true);
  CHECK(shape.code == 1);
  CHECK_THAT(shape.out, ContainsSubstring("'domain'"));
  CHECK(run("compute --domain disk --xi '0:1' --H 'z1' --p 2 --z 0").code == 1);
  CHECK(run("bogus").code == 1);
  CHECK(run("compute --unknown 3").code == 1);
}

TEST_CASE("non-convex runs exit with 2") {
  CHECK(run("compute --domain disk --xi '0:1' --p 0.5 --z 0.2").code == 2);
}

TEST_CASE("sweep on the balanced disk is constant") {
  const Run r = run("sweep --domain disk --xi '0:1' --p 2 --a-grid=-2:0:0.25 --degree 8");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0][2] == "scaled");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK_THAT(std::stod(rows[i][2]), WithinRel(0.318309886184, 1e-9));
}

TEST_CASE("sweep with an off-center pole is monotone") {
  const Run r = run("sweep --domain disk --xi '0:1' --p 2 --pole 0.5 --a-grid=-2:0:0.5 --degree 24 --format json");
  REQUIRE(r.code == 0);
  const json rows = json::parse(r.out).at("table").at("rows");
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].at("scaled").get<double>() >= rows[i - 1].at("scaled").get<double>());
}

TEST_CASE("sweep rejects a positive grid point") {
  const Run r = run("sweep --domain disk --xi '0:1' --p 2 --a-grid=-1,0.1", true);
  CHECK(r.code == 1);
  CHECK_THAT(r.out, ContainsSubstring("a-grid"));
}

TEST_CASE("verify") {
  const Run ok = run("verify --suite algebra --format json");
  REQUIRE(ok.code == 0);
  const json j = json::parse(ok.out);
  CHECK(j.at("seed") == 42);
  CHECK(run("verify --suite nonsense").code == 1);
  const Run q = run("verify --suite quadrature");
  CHECK(q.code == 0);
  CHECK_THAT(q.out, ContainsSubstring("PASS"));
}

TEST_CASE("config files mirror the flags") {
  const auto cfg = temp_file("cfg.json", R"({"domain": "disk", "xi": "1:1", "p": 1.5, "z": "0", "seed": 9})");
  const Run r = run("compute --config '" + cfg.string() + "'");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("seed") == 9);
  CHECK_THAT(j.at("result").at("K").get<double>(), WithinRel(0.5570423008, 1e-8));
  // Flags override the file.
  const Run o = run("compute --config '" + cfg.string() + "' --p 2");
  CHECK_THAT(json::parse(o.out).at("result").at("K").get<double>(), WithinRel(2.0 / 3.14159265358979, 1e-9));
  const auto bad = temp_file("bad.json", R"({"colour": 1})");
  const Run b = run("compute --config '" + bad.string() + "'", true);
  CHECK(b.code == 1);
  CHECK_THAT(b.out, ContainsSubstring("colour"));
}

TEST_CASE("output is deterministic and honours --out") {
  const std::string args = "compute --domain disk --xi '0:1;1:0.5' --p 1.5 --z 0.2+0.1i";
  const Run a = run(args);
  const Run b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto path = std::filesystem::temp_directory_path() / "xibergman_cli_out.json";
  std::filesystem::remove(path);
  CHECK(run(args + " --out '" + path.string() + "'").code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == a.out);
}
