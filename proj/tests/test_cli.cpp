#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string &args) {
  const std::string cmd = std::string(NCWL_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE *p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string corpus(const std::string &file) { return std::string(NCWL_CORPUS_DIR) + "/" + file; }

fs::path scratch(const std::string &name) {
  auto dir = fs::temp_directory_path() / "ncwl-cli-test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, CompareExitCodes) {
  auto nc = run("compare " + corpus("c6.txt") + " " + corpus("2c3.txt") + " --method nc1wl");
  EXPECT_EQ(nc.code, 1);
  EXPECT_EQ(nc.out, "DISTINGUISHED iter=1\n");
  auto wl = run("compare " + corpus("c6.txt") + " " + corpus("2c3.txt") + " --method 1wl");
  EXPECT_EQ(wl.code, 0);
  EXPECT_EQ(wl.out.rfind("NOT-DISTINGUISHED", 0), 0u);
  auto tsv = run("--format tsv compare " + corpus("c8.txt") + " " + corpus("2c4.txt") +
                 " --method 3wl");
  EXPECT_EQ(tsv.code, 1);
  EXPECT_EQ(tsv.out.rfind("DISTINGUISHED\t", 0), 0u);
}

TEST(Cli, ErrorsExitTwo) {
  EXPECT_EQ(run("compare /nonexistent/a.txt " + corpus("c6.txt")).code, 2);
  EXPECT_EQ(run("compare " + corpus("c6.txt") + " " + corpus("2c3.txt") + " --method 5wl").code, 2);
  EXPECT_EQ(run("bogus-command").code, 2);
  EXPECT_EQ(run("").code, 2);
  auto bad = scratch("bad.txt");
  std::ofstream(bad) << "3 2\n0 1\n0 1\n";
  EXPECT_EQ(run("stats " + bad.string()).code, 2);
}

TEST(Cli, KwlCapIsAnError) {
  auto big = scratch("c40.txt");
  {
    std::ofstream f(big);
    f << "40 40\n";
    for (int i = 0; i < 40; ++i) f << i << ' ' << (i + 1) % 40 << '\n';
  }
  EXPECT_EQ(run("refine " + big.string() + " --method 3wl").code, 2);
  EXPECT_EQ(run("refine " + big.string() + " --method 3wl --k-cap 40").code, 0);
}

TEST(Cli, Refine) {
  auto r = run("refine " + corpus("p4.txt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("iter 0: classes=1 hist=0:4\n"), std::string::npos);
  EXPECT_NE(r.out.find("converged at iteration 2 with 2 classes"), std::string::npos);
}

TEST(Cli, Stats) {
  auto r = run("stats " + corpus("k3.txt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "n=3 m=3 T=1 sum_nc=3 avg_nc=1 max_nc=1 max_deg=2 membound=3\n");
  auto t = run("--format tsv stats " + corpus("c6.txt"));
  EXPECT_EQ(t.out, "n\tm\tT\tsum_nc\tavg_nc\tmax_nc\tmax_deg\tmembound\n6\t6\t0\t0\t0\t0\t2\t0\n");
}

TEST(Cli, UnionRoundTrips) {
  auto r = run("union " + corpus("k3.txt") + " " + corpus("k3.txt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# second graph offset 3\n6 6\n", 0), 0u);
  auto path = scratch("union.txt");
  std::ofstream(path) << r.out;
  auto s = run("stats " + path.string());
  EXPECT_EQ(s.out.rfind("n=6 m=6 T=2 ", 0), 0u);
}

TEST(Cli, Suite) {
  auto r = run("suite --random-pairs 60 --seed 3");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
  auto d = run("suite --random-pairs 10 --corpus " + std::string(NCWL_CORPUS_DIR));
  EXPECT_EQ(d.code, 0);

  auto dir = scratch("broken-corpus");
  fs::create_directories(dir);
  std::ofstream(dir / "manifest.txt") << "x | a.txt | b.txt | 1wl=n\n";
  EXPECT_EQ(run("suite --corpus " + dir.string()).code, 2);
}

TEST(Cli, CodecCheck) {
  auto r = run("codec-check");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_NE(r.out.find("injective"), std::string::npos);
  EXPECT_EQ(run("codec-check --base 4").code, 2);
  EXPECT_EQ(run("codec-check --alphabet 1000 --max-card 8").code, 2);
}

TEST(Cli, GnnEmbedParamsRoundTrip) {
  auto params = scratch("params.json");
  auto a = run("gnn-embed " + corpus("c6.txt") + " --dim 4 --seed 5 --params-out " +
               params.string());
  EXPECT_EQ(a.code, 0);
  std::ifstream in(params);
  auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("num_labels"), 1);
  EXPECT_EQ(j.at("layers").size(), 2u);
  auto b = run("gnn-embed " + corpus("c6.txt") + " --params " + params.string());
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto other = run("gnn-embed " + corpus("2c3.txt") + " --params " + params.string());
  EXPECT_NE(a.out, other.out);
  auto gin = run("gnn-embed " + corpus("2c3.txt") + " --gin --params " + params.string());
  EXPECT_EQ(gin.code, 0);
}

TEST(Cli, Help) {
  auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
}

}  // namespace
