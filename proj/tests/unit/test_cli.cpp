#include <doctest.h>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "dplab/cli/bench.hpp"
#include "dplab/cli/commands.hpp"
#include "dplab/image_io.hpp"
#include "support.hpp"

using namespace dplab;
namespace fs = std::filesystem;

namespace {

int invoke(std::initializer_list<std::string> args, std::string* err_text = nullptr) {
  std::vector<std::string> store{"dplab"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : store) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const fs::path& p) {
  const auto s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::size_t count_ext(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

}  // namespace

TEST_CASE("gen writes images and manifest reproducibly") {
  test::TempDir dir("gen");
  const auto a = (dir / "a").string();
  const auto b = (dir / "b").string();
  REQUIRE(invoke({"gen", "--count", "3", "--size", "32", "--seed", "4", "--out", a}) == 0);
  REQUIRE(invoke({"gen", "--count", "3", "--size", "32", "--seed", "4", "--out", b}) == 0);
  CHECK(count_ext(a, ".dplf") == 3);
  CHECK(count_ext(a, ".pgm") == 3);
  CHECK(count_lines(fs::path(a) / "manifest.csv") == 4);
  CHECK(slurp(fs::path(a) / "manifest.csv").rfind("id,path,size,seed\n", 0) == 0);
  CHECK(slurp(fs::path(a) / "phantom_0002.dplf") == slurp(fs::path(b) / "phantom_0002.dplf"));
  CHECK(load_raw(fs::path(a) / "phantom_0000.dplf").width() == 32);

  CHECK(invoke({"gen", "--count", "0", "--out", a}) == cli::kExitUsage);
  CHECK(invoke({"gen", "--count", "2", "--size", "3", "--out", a}) == cli::kExitUsage);
  CHECK(invoke({"gen", "--out", a}) == cli::kExitUsage);
  CHECK(invoke({"frobnicate"}) == cli::kExitUsage);
}

TEST_CASE("corrupt, denoise and eval pipeline") {
  test::TempDir dir("pipe");
  const auto clean = (dir / "clean").string();
  const auto noisy = (dir / "noisy").string();
  REQUIRE(invoke({"gen", "--count", "2", "--size", "32", "--out", clean}) == 0);
  REQUIRE(invoke({"corrupt", "--noise", "gaussian", "--seed", "1", "--in", clean, "--out", noisy}) == 0);
  const auto pairs = slurp(fs::path(noisy) / "pairs.csv");
  CHECK(pairs.rfind("id,clean,noisy,noise,params,seed\n", 0) == 0);
  CHECK(pairs.find("mean=0;var=0.005") != std::string::npos);
  CHECK(count_ext(noisy, ".dplf") == 2);

  const auto same = (dir / "same").string();
  REQUIRE(invoke({"corrupt", "--noise", "gaussian", "--param", "var=0", "--in", clean, "--out", same}) == 0);
  CHECK(load_raw(fs::path(same) / "phantom_0001_gaussian.dplf") ==
        load_raw(fs::path(clean) / "phantom_0001.dplf"));
  CHECK(invoke({"corrupt", "--noise", "salt", "--in", clean, "--out", same}) == cli::kExitUsage);
  CHECK(invoke({"corrupt", "--noise", "gaussian", "--param", "loc=1", "--in", clean, "--out", same}) ==
        cli::kExitUsage);

  const auto den = (dir / "den").string();
  REQUIRE(invoke({"denoise", "--algo", "median", "--in", noisy, "--out", den}) == 0);
  CHECK(count_ext(den, ".dplf") == 2);
  CHECK(count_lines(fs::path(den) / "timings.csv") == 3);
  std::string err;
  CHECK(invoke({"denoise", "--algo", "magic", "--in", noisy, "--out", den}, &err) == cli::kExitUsage);
  CHECK(err.find("median") != std::string::npos);

  const auto csv = (dir / "m.csv").string();
  const auto manifest = (fs::path(noisy) / "pairs.csv").string();
  REQUIRE(invoke({"eval", "--pairs", manifest, "--csv", csv, "--denoised", den, "--label", "median"}) == 0);
  const auto report = slurp(csv);
  CHECK(report.rfind("image_id,algorithm,noise,mse,psnr_db,ssim\n", 0) == 0);
  // Two images times (median, noisy) plus two aggregates.
  CHECK(count_lines(csv) == 7);
  REQUIRE(invoke({"eval", "--pairs", manifest, "--csv", csv, "--algo", "median"}) == 0);
  CHECK(slurp(csv) == report);
}

TEST_CASE("train writes artifacts and rejects incompatible sizes") {
  test::TempDir dir("train");
  const auto clean = (dir / "clean").string();
  const auto noisy = (dir / "noisy").string();
  REQUIRE(invoke({"gen", "--count", "3", "--size", "16", "--out", clean}) == 0);
  REQUIRE(invoke({"corrupt", "--noise", "speckle", "--in", clean, "--out", noisy}) == 0);
  const auto manifest = (fs::path(noisy) / "pairs.csv").string();
  const auto a = (dir / "a").string();
  const auto b = (dir / "b").string();
  for (const auto& out : {a, b}) {
    REQUIRE(invoke({"train", "--data", manifest, "--iters", "4", "--batch", "2", "--depth", "1", "--base", "4",
                    "--seed", "3", "--out", out}) == 0);
  }
  CHECK(fs::exists(fs::path(a) / "model.dplw"));
  CHECK(fs::exists(fs::path(a) / "val_metrics.csv"));
  CHECK(count_lines(fs::path(a) / "loss.csv") == 5);
  CHECK(slurp(fs::path(a) / "loss.csv") == slurp(fs::path(b) / "loss.csv"));
  CHECK(slurp(fs::path(a) / "model.dplw") == slurp(fs::path(b) / "model.dplw"));

  const auto csv = (dir / "e.csv").string();
  CHECK(invoke({"eval", "--pairs", manifest, "--csv", csv, "--checkpoint", (fs::path(a) / "model.dplw").string(),
                "--depth", "1", "--base", "4"}) == 0);
  CHECK(invoke({"eval", "--pairs", manifest, "--csv", csv, "--checkpoint", (fs::path(a) / "model.dplw").string(),
                "--depth", "1", "--base", "8"}) == cli::kExitIncompatible);

  std::string err;
  CHECK(invoke({"train", "--data", manifest, "--depth", "6", "--out", a}, &err) == cli::kExitIncompatible);
  CHECK(err.find("16") != std::string::npos);
  CHECK(invoke({"train", "--data", manifest, "--model", "gan", "--out", a}) == cli::kExitUsage);
  CHECK(invoke({"train", "--data", manifest, "--batch", "0", "--out", a}) == cli::kExitUsage);
}

TEST_CASE("bench config parsing") {
  std::istringstream ok(
      "seed = 5\n# comment\n[data]\ncount = 3\nsize = 16\n[noise]\nfamilies = gaussian, speckle\n"
      "[noise:speckle]\nvar = 0.02\n[algorithms]\nlist = mean, noisy\n[param:mean]\nradius = 2\n");
  const auto cfg = cli::parse_bench_config(ok);
  CHECK(cfg.seed == 5);
  CHECK(cfg.count == 3);
  REQUIRE(cfg.noises.size() == 2);
  CHECK(std::get<SpeckleParams>(cfg.noises[1].params).var == 0.02);
  CHECK(cfg.algorithms == std::vector<std::string>{"mean", "noisy"});

  for (const char* bad : {"[colours]\nred = 1\n", "[data]\nshape = 3\n", "[noise]\nfamilies = pink\n",
                          "[algorithms]\nlist = magic\n", "[data]\ncount = many\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(cli::parse_bench_config(in), cli::UsageError);
  }
}

TEST_CASE("bench tables are reproducible") {
  test::TempDir dir("bench");
  {
    std::ofstream cfg(dir / "bench.ini");
    cfg << "seed = 9\n[data]\ncount = 3\nsize = 16\n[noise]\nfamilies = gaussian, awgn\n"
           "[algorithms]\nlist = noisy, mean, median\n";
  }
  const auto config = (dir / "bench.ini").string();
  REQUIRE(invoke({"bench", "--config", config, "--out", (dir / "r1").string()}) == 0);
  REQUIRE(invoke({"bench", "--config", config, "--out", (dir / "run_two").string()}) == 0);
  const auto table = slurp(dir / "r1/results_psnr.csv");
  CHECK(table.rfind("algorithm,gaussian,awgn\n", 0) == 0);
  CHECK(count_lines(dir / "r1/results_psnr.csv") == 4);
  CHECK(count_lines(dir / "r1/results_ssim.csv") == 4);
  CHECK(table == slurp(dir / "run_two/results_psnr.csv"));
  CHECK(slurp(dir / "r1/results_detail.csv") == slurp(dir / "run_two/results_detail.csv"));
  CHECK(invoke({"bench", "--config", (dir / "missing.ini").string()}) == cli::kExitUsage);
}
