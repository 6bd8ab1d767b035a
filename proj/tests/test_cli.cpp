#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cumbia/cli.hpp"
#include "cumbia/embedding.hpp"
#include "cumbia/io.hpp"

using namespace cumbia;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cumbia");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Runs the built executable; returns its exit status and captured stderr.
Result run_binary(const std::string& args, const fs::path& dir) {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = std::string(CUMBIA_CLI_PATH) + " " + args + " > /dev/null 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, "", io::read_file(err_path)};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& file) const { return (path / file).string(); }
};

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("synth is byte-identical for a fixed seed") {
  TempDir dir("cumbia_cli_synth");
  REQUIRE(run({"synth", "--seed", "7", "--n", "12", "--p", "40", "--n-planted", "3", "--p-planted", "5",
               "--out", dir / "a.csv", "--labels", dir / "a.labels.csv"})
              .code == 0);
  REQUIRE(run({"synth", "--seed", "7", "--n", "12", "--p", "40", "--n-planted", "3", "--p-planted", "5",
               "--out", dir / "b.csv"})
              .code == 0);
  CHECK(io::read_file(dir / "a.csv") == io::read_file(dir / "b.csv"));
  CHECK(lines(io::read_file(dir / "a.csv")) == 13);
  CHECK(lines(io::read_file(dir / "a.labels.csv")) == 53);
  const auto m = nlohmann::ordered_json::parse(io::read_file(dir / "a.csv.manifest.json"));
  CHECK(m["seed"] == 7);
  CHECK(m["outputs"].size() == 2);
}

TEST_CASE("cumbia writes N+p rows with the requested coordinates") {
  TempDir dir("cumbia_cli_embed");
  REQUIRE(run({"synth", "--seed", "1", "--n", "10", "--p", "25", "--n-planted", "3", "--p-planted", "4",
               "--out", dir / "x.csv", "--labels", dir / "groups.csv"})
              .code == 0);
  const auto before = io::read_file(dir / "x.csv");
  const auto r = run({"cumbia", "--in", dir / "x.csv", "--out", dir / "e.csv", "--plot", "--labels",
                      dir / "groups.csv", "--diss-out", dir / "d.csv"});
  REQUIRE(r.code == 0);
  const auto text = io::read_file(dir / "e.csv");
  CHECK(lines(text) == 36);
  CHECK(text.substr(0, text.find('\n')) == "object_label,kind,coord_1,coord_2,coord_3");
  CHECK(lines(io::read_file(dir / "e.csv.spectrum.txt")) == 35);
  CHECK(lines(io::read_file(dir / "d.csv")) == 36);
  CHECK(io::read_file(dir / "e.csv.svg").find("<svg") != std::string::npos);
  CHECK(io::read_file(dir / "x.csv") == before);

  SUBCASE("rerunning the recorded argv reproduces every output") {
    const auto m = nlohmann::ordered_json::parse(io::read_file(dir / "e.csv.manifest.json"));
    CHECK(m["input"]["sha256"] == io::sha256_hex(before));
    std::vector<std::string> argv = m["argv"].get<std::vector<std::string>>();
    std::map<std::string, std::string> first;
    for (const auto& o : m["outputs"]) {
      first[o["path"]] = io::read_file(o["path"].get<std::string>());
      CHECK(o["sha256"] == io::sha256_hex(first[o["path"]]));
      fs::remove(o["path"].get<std::string>());
    }
    REQUIRE(run(argv).code == 0);
    for (const auto& [path, contents] : first) CHECK(io::read_file(path) == contents);
    CHECK(io::read_file(dir / "e.csv.manifest.json") == m.dump(2) + '\n');
  }
}

TEST_CASE("pca at alpha = 1 recombines to the input") {
  TempDir dir("cumbia_cli_pca");
  REQUIRE(run({"synth", "--seed", "3", "--n", "8", "--p", "6", "--n-planted", "2", "--p-planted", "2",
               "--out", dir / "x.csv"})
              .code == 0);
  REQUIRE(run({"pca", "--in", dir / "x.csv", "--out", dir / "b.csv", "--s", "full", "--alpha", "1"}).code == 0);
  const auto x = load_table(dir / "x.csv");
  // Rows: header, samples, then variables; columns: label, kind, coordinates.
  std::istringstream text(io::read_file(dir / "b.csv"));
  std::string line;
  std::getline(text, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(text, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::getline(fields, cell, ',');
    std::getline(fields, cell, ',');
    rows.emplace_back();
    while (std::getline(fields, cell, ',')) rows.back().push_back(std::stod(cell));
  }
  REQUIRE(rows.size() == 14);
  MatrixXd g(8, static_cast<Eigen::Index>(rows[0].size())), h(6, g.cols());
  for (Eigen::Index i = 0; i < 14; ++i)
    for (Eigen::Index k = 0; k < g.cols(); ++k)
      (i < 8 ? g(i, k) : h(i - 8, k)) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  CHECK((g * h.transpose() - x.values()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("preprocess, scree and shave") {
  TempDir dir("cumbia_cli_misc");
  REQUIRE(run({"synth", "--seed", "5", "--n", "16", "--p", "60", "--n-planted", "4", "--p-planted", "8",
               "--out", dir / "x.csv", "--labels", dir / "groups.csv"})
              .code == 0);
  SUBCASE("z-score then select by t statistic") {
    const auto r = run({"preprocess", "--in", dir / "x.csv", "--out", dir / "z.csv", "--zscore", "--groups",
                        dir / "groups.csv", "--target", "planted", "--top", "10", "--select-order", "before-zscore"});
    REQUIRE(r.code == 0);
    const auto z = load_table(dir / "z.csv");
    CHECK(z.variables() == 10);
    CHECK(z.values().colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("selection with z-scoring needs an explicit order") {
    const auto r = run({"preprocess", "--in", dir / "x.csv", "--out", dir / "z.csv", "--zscore", "--groups",
                        dir / "groups.csv", "--target", "planted"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--select-order") != std::string::npos);
  }
  SUBCASE("log2 on signed data drops everything") {
    const auto r = run({"preprocess", "--in", dir / "x.csv", "--out", dir / "z.csv", "--log2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("no variables survive") != std::string::npos);
  }
  SUBCASE("scree in both modes") {
    REQUIRE(run({"scree", "--in", dir / "x.csv", "--out", dir / "c.csv", "--plot"}).code == 0);
    CHECK(lines(io::read_file(dir / "c.csv")) == 77);
    CHECK(fs::exists(dir / "c.csv.svg"));
    REQUIRE(run({"scree", "--in", dir / "x.csv", "--out", dir / "p.csv", "--method", "pca"}).code == 0);
    CHECK(lines(io::read_file(dir / "p.csv")) == 17);
  }
  SUBCASE("shave trace") {
    REQUIRE(run({"shave", "--in", dir / "x.csv", "--out", dir / "t.csv", "--biclusters", "2"}).code == 0);
    const auto text = io::read_file(dir / "t.csv");
    CHECK(text.rfind(io::trace_header(), 0) == 0);
    CHECK(text.find("\n0,0,16,60,") != std::string::npos);
    CHECK(text.find("\n1,0,") != std::string::npos);
    const auto m = nlohmann::ordered_json::parse(io::read_file(dir / "t.csv.manifest.json"));
    CHECK(m["final_biclusters"].size() == 2);
  }
}

TEST_CASE("errors exit with status 1 and a one-line message") {
  TempDir dir("cumbia_cli_errors");
  std::ofstream(dir / "ragged.csv") << "id,a,b\ns1,1,2\ns2,3\n";
  std::ofstream(dir / "ok.csv") << "id,a,b\ns1,1,2\ns2,3,5\n";

  auto r = run({"cumbia", "--in", dir / "ok.csv", "--out", dir / "e.csv", "--bogus"});
  CHECK(r.code == 1);
  r = run({"cumbia", "--in", dir / "absent.csv", "--out", dir / "e.csv"});
  CHECK(r.code == 1);
  r = run({"cumbia", "--in", dir / "ragged.csv", "--out", dir / "e.csv"});
  CHECK(r.code == 1);
  CHECK(r.err == "error: line 3: expected 3 fields, found 2\n");
  r = run({"cumbia", "--in", dir / "ok.csv", "--out", dir / "e.csv", "--s", "5"});
  CHECK(r.code == 1);
  r = run({"cumbia", "--in", dir / "ok.csv", "--out", dir / "e.csv", "--component-x", "4", "--plot"});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(dir / "e.csv"));
  CHECK(run({}).code == 1);

  SUBCASE("the executable reports the same codes") {
    auto b = run_binary("cumbia --in " + (dir / "ragged.csv") + " --out " + (dir / "e.csv"), dir.path);
    CHECK(b.code == 1);
    CHECK(lines(b.err) == 1);
    b = run_binary("cumbia --nope", dir.path);
    CHECK(b.code == 1);
    b = run_binary("cumbia --in " + (dir / "ok.csv") + " --out " + (dir / "e.csv") + " --k 1", dir.path);
    CHECK(b.code == 0);
    CHECK(fs::exists(dir / "e.csv"));
  }
}
