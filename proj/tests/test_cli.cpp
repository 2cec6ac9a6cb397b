#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hgclust/config.hpp"
#include "hgclust/extract.hpp"
#include "hgclust/io.hpp"

using namespace hgclust;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("hgclust_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(HGCLUST_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_capture(const std::string& args, std::string& out) {
  const std::string cmd = std::string(HGCLUST_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  out.clear();
  while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string body(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate then cluster recovers the planted partition") {
  TempDir dir("roundtrip");
  const std::string out = dir.path.string();
  REQUIRE(run("generate --sizes 10,10,10 --p 0.9 --q 0.05 --seed 3 --out " + out) == 0);
  CHECK(fs::exists(dir / "hypergraph.txt"));
  CHECK(fs::exists(dir / "truth.txt"));
  const auto meta = Json::parse(slurp(dir / "generate.json"));
  CHECK(meta.contains("config"));
  const double lambda = meta["lambda_mid"].get<double>();

  REQUIRE(run("cluster --input " + (dir / "hypergraph.txt") + " --k 3 --lambda " + format_double(lambda) +
              " --truth " + (dir / "truth.txt") + " --out " + out) == 0);
  const Partition est = load_partition(dir / "partition.txt");
  CHECK(misclustering_error(est, load_partition(dir / "truth.txt")) == 0.0);
  const auto diag = Json::parse(slurp(dir / "diagnostics.json"));
  CHECK(diag.contains("objective"));
  CHECK(diag.contains("integrality_gap"));
  CHECK(diag["err"].get<double>() == 0.0);

  REQUIRE(run("cluster --input " + (dir / "hypergraph.txt") + " --k 3 --auto --out " + out) == 0);
  CHECK(misclustering_error(load_partition(dir / "partition.txt"), load_partition(dir / "truth.txt")) == 0.0);
}

TEST_CASE("k = 1 gives the all-one partition") {
  TempDir dir("k1");
  const std::string out = dir.path.string();
  REQUIRE(run("generate --sizes 8 --p 0.5 --q 0.5 --seed 1 --out " + out) == 0);
  REQUIRE(run("cluster --input " + (dir / "hypergraph.txt") + " --k 1 --lambda 0.5 --out " + out) == 0);
  CHECK(load_partition(dir / "partition.txt").labels() == std::vector<int>(8, 1));
}

TEST_CASE("malformed input exits 2 and writes nothing") {
  TempDir dir("malformed");
  {
    std::ofstream bad(dir / "bad.txt");
    bad << "5 3 1\n0 1 9 0.5\n";
  }
  CHECK(run("cluster --input " + (dir / "bad.txt") + " --k 2 --lambda 1 --out " + dir.path.string()) == 2);
  CHECK_FALSE(fs::exists(dir / "partition.txt"));
  CHECK_FALSE(fs::exists(dir / "diagnostics.json"));
  CHECK(run("tune --input " + (dir / "missing.txt")) == 2);
}

TEST_CASE("configuration errors exit 4") {
  TempDir dir("config");
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"trails": 2})";
  }
  CHECK(run("bench --config " + (dir / "bad.json") + " --out " + dir.path.string()) == 4);
  CHECK(run("generate --sizes 0,3 --out " + dir.path.string()) == 4);
  CHECK(run("cluster --input x --k 2 --lambda 1 --auto") == 4);
  CHECK(run("no-such-command") == 4);
}

TEST_CASE("tune prints the estimate as JSON") {
  TempDir dir("tune");
  REQUIRE(run("generate --sizes 10,10,10 --p 0.9 --q 0.05 --seed 5 --out " + dir.path.string()) == 0);
  std::string out;
  REQUIRE(run_capture("tune --input " + (dir / "hypergraph.txt"), out) == 0);
  const auto j = Json::parse(out);
  for (const char* key : {"k_hat", "s_hat", "p_minus_hat", "q_plus_hat", "lambda_hat"}) CHECK(j.contains(key));
  CHECK(j["k_hat"].get<int>() == 3);
}

TEST_CASE("bench CSV embeds its config and reruns byte-identically") {
  TempDir dir("bench");
  {
    std::ofstream cfg(dir / "bench.json");
    cfg << R"({"ns": [24], "ps": [10], "trials": 2, "seed": 9})";
  }
  const std::string args = "bench --config " + (dir / "bench.json") + " --out " + dir.path.string();
  REQUIRE(run(args) == 0);
  const std::string first = slurp(dir / "bench.csv");
  CHECK(first.rfind("# config: {", 0) == 0);
  CHECK(slurp(dir / "bench_crtmle.svg").find("<!-- config:") != std::string::npos);
  REQUIRE(run(args) == 0);
  CHECK(slurp(dir / "bench.csv") == first);
  const auto header_end = body(first).find('\n');
  CHECK(body(first).substr(0, header_end) == "algorithm,n,p,q,k,sizes,trial,seed,err,runtime_ms,iterations,converged");

  {
    std::ofstream cfg(dir / "empty.json");
    cfg << R"({"trials": 0})";
  }
  REQUIRE(run("bench --config " + (dir / "empty.json") + " --out " + dir.path.string()) == 0);
  CHECK(body(slurp(dir / "bench.csv")) == "algorithm,n,p,q,k,sizes,trial,seed,err,runtime_ms,iterations,converged\n");
}

TEST_CASE("oracle, concentration and subspace subcommands") {
  TempDir dir("misc");
  const std::string out = dir.path.string();
  REQUIRE(run("generate --sizes 3,3 --p 0.9 --q 0.05 --seed 7 --out " + out) == 0);
  std::string json;
  REQUIRE(run_capture("oracle --input " + (dir / "hypergraph.txt") + " --k 2 --mode mle --p 0.9 --q 0.05 --out " +
                          out,
                      json) == 0);
  CHECK(fs::exists(dir / "oracle_partition.txt"));
  CHECK(Json::parse(json).contains("labels"));

  REQUIRE(run("concentration --ns 20 --trials 2 --out " + out) == 0);
  const std::string conc = slurp(dir / "concentration.csv");
  CHECK(body(conc).rfind("n,d,mu,trial,deviation,ratio\n", 0) == 0);

  REQUIRE(run("subspace --sizes 4,4,4 --trials 1 --out " + out) == 0);
  CHECK(body(slurp(dir / "subspace.csv")).rfind("trial,seed,lambda,crtmle_err,spectral_err\n", 0) == 0);
  CHECK(body(slurp(dir / "points.csv")).rfind("x,y,z,label\n", 0) == 0);
}

}
