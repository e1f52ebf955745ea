#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run kit(const std::string& args) {
  std::string cmd = std::string(ABSORB_KIT) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string demo(const std::string& name) { return std::string(DEMO_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("absorb_cli_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Cli, DivideCheck) {
  EXPECT_EQ(kit("divide check " + demo("k7.txt") + " --q 3").code, 0);
  EXPECT_EQ(kit("divide check " + demo("k6.txt") + " --q 3").code, 1);
  auto r = kit("divide check --params 7,3,2,1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(kit("divide check --params 8,3,2,1").code, 1);
}

TEST(Cli, CoverSolve) {
  auto r = kit("cover solve " + demo("k7.txt") + " --q 3 --count 100");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "count=30"));
  auto none = kit("cover solve " + demo("k4_minus_edge.txt") + " --q 3");
  EXPECT_EQ(none.code, 1);
  EXPECT_TRUE(has(none.out, "NONE (exhaustive)"));
}

TEST(Cli, IntegralSolve) {
  auto r = kit("integral solve " + demo("c6.txt") + " --q 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "verified=true"));
}

TEST(Cli, Gadgets) {
  auto r = kit("gadget anti --edge 0,1 --q 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "completes_to_clique=true"));
  auto d = scratch("absorber");
  auto a = kit("--out " + d.string() + " gadget absorber " + demo("triangle.txt") + " --q 3");
  EXPECT_EQ(a.code, 0);
  EXPECT_TRUE(fs::exists(d / "a.txt"));
  EXPECT_TRUE(fs::exists(d / "d1.txt"));
  EXPECT_TRUE(fs::exists(d / "d2.txt"));
}

TEST(Cli, OmniRoundTrip) {
  auto d = scratch("omni");
  EXPECT_EQ(kit("omni build-1d --m 6 --q 3 --out " + (d / "one").string()).code, 0);
  auto v = kit("omni verify " + (d / "one").string());
  EXPECT_EQ(v.code, 0);
  EXPECT_TRUE(has(v.out, "tested=22"));
  EXPECT_TRUE(has(v.out, "failures=0"));
  EXPECT_TRUE(has(kit("omni refinedness " + (d / "one").string()).out, "within_bound=true"));
  EXPECT_EQ(kit("omni build-small " + demo("two_triangles.txt") + " --q 3 --out " + (d / "two").string()).code, 0);
  EXPECT_TRUE(has(kit("omni verify " + (d / "two").string()).out, "tested=4"));
  EXPECT_EQ(kit("omni build-1d --m 3 --q 3").code, 3);
}

TEST(Cli, Embed) {
  auto d = scratch("embed");
  auto r = kit("--out " + d.string() + " embed --system " + demo("system.txt") + " --host " + demo("k30.txt") +
               " --seed 3 --budget 100");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(d / "image.txt"));
  EXPECT_EQ(kit("embed --system " + demo("system.txt") + " --host " + demo("k4_minus_edge.txt") + " --budget 5").code, 2);
}

TEST(Cli, LinearProgram) {
  auto d = scratch("lp");
  auto r = kit("--out " + d.string() + " lp solve " + demo("k4_minus_edge.txt") + " --q 3");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r.out, "certificate_verified=true"));
  EXPECT_TRUE(fs::exists(d / "farkas.txt"));
  auto f = kit("--json lp solve " + demo("k5.txt") + " --q 3");
  EXPECT_EQ(f.code, 0);
  EXPECT_TRUE(has(f.out, "\"feasible\": true"));
}

TEST(Cli, NibbleAndPipeline) {
  EXPECT_EQ(kit("--seed 2 nibble run " + demo("k30.txt") + " --q 3").code, 0);
  auto d = scratch("pipe");
  auto p = kit("--out " + d.string() + " pipeline --n 9");
  EXPECT_EQ(p.code, 0);
  EXPECT_TRUE(has(p.out, "verified=true"));
  EXPECT_TRUE(fs::exists(d / "5_design.txt"));
  EXPECT_EQ(kit("verify " + (d / "5_design.txt").string()).code, 0);
  EXPECT_EQ(kit("pipeline --n 6").code, 3);
  EXPECT_EQ(kit("pipeline --n 49").code, 2);
}

TEST(Cli, ErrorsAndDeterminism) {
  EXPECT_EQ(kit("").code, 3);
  EXPECT_EQ(kit("divide check /nonexistent.txt --q 3").code, 3);
  EXPECT_EQ(kit("cover solve " + demo("k12.txt") + " --q 3 --budget 5").code, 2);
  auto a = scratch("det_a"), b = scratch("det_b");
  kit("--seed 11 --out " + a.string() + " pipeline --n 13");
  kit("--seed 11 --out " + b.string() + " pipeline --n 13");
  for (const auto& f : fs::directory_iterator(a)) EXPECT_EQ(slurp(f.path()), slurp(b / f.path().filename()));
}
