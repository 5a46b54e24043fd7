#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "gramlab/cache.hpp"
#include "gramlab/cli.hpp"
#include "gramlab/error.hpp"
#include "gramlab/gram.hpp"
#include "gramlab/zeros.hpp"

using namespace gramlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("gramlab_test_" + std::to_string(rd()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gramlab");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_main(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("snap_to_gram") {
  const auto [lo, hi] = snap_to_gram(1000.0, 1100.0);
  CHECK(lo <= 1000.0);
  CHECK(hi >= 1100.0);
  CHECK(lo == gram_point(last_gram_index_at_or_below(1000.0)).t);
  CHECK(snap_to_gram(10.0, 20.0).first == 10.0);
}

TEST_CASE("cache fills, is idempotent and resumes") {
  TempDir d1;
  TempDir d2;
  ZeroCache full(d1.path);
  CHECK(full.ensure(3000.0, 3400.0) == 1);
  const auto before = snapshot(d1.path);
  CHECK(ZeroCache(d1.path).ensure(3000.0, 3400.0) == 0);
  CHECK(snapshot(d1.path) == before);

  ZeroCache part(d2.path);
  CHECK(part.ensure(3000.0, 3150.0) == 1);
  CHECK(ZeroCache(d2.path).ensure(3000.0, 3400.0) == 1);
  CHECK(ZeroCache(d2.path).segments().size() == 2);
  CHECK(census_to_string(ZeroCache(d2.path).load()) == census_to_string(ZeroCache(d1.path).load()));

  // Downward extension keeps segments ordered.
  CHECK(ZeroCache(d2.path).ensure(2800.0, 3000.0) == 1);
  const ZeroCache reopened(d2.path);
  CHECK(reopened.segments().front().t_lo < 2800.0);
  CHECK(reopened.load().audit_passed);
}

TEST_CASE("cache segments round trip byte for byte") {
  TempDir d;
  ZeroCache cache(d.path);
  cache.ensure(4000.0, 4100.0);
  const fs::path seg = d.path / cache.segments().front().file;
  const std::string text = slurp(seg);
  std::istringstream in(text);
  CHECK(census_to_string(read_census(in)) == text);
}

TEST_CASE("corrupt caches are reported, not repaired") {
  TempDir d;
  ZeroCache(d.path).ensure(4000.0, 4100.0);
  const ZeroCache cache(d.path);
  const fs::path seg = d.path / cache.segments().front().file;
  const std::string good = slurp(seg);

  SUBCASE("bad header") {
    std::ofstream(seg, std::ios::trunc) << "# other format\n";
    CHECK_THROWS_AS(ZeroCache(d.path).load(), CacheError);
    CHECK(slurp(seg) == "# other format\n");
  }
  SUBCASE("non-monotone ordinates") {
    std::istringstream in(good);
    std::vector<std::string> rows;
    for (std::string l; std::getline(in, l);) rows.push_back(l);
    auto tail = [](const std::string& r) { return r.substr(r.find(',')); };
    const std::string a = rows[3];
    const std::string b = rows[4];
    rows[3] = "0" + tail(b);
    rows[4] = "1" + tail(a);
    std::ofstream out(seg, std::ios::trunc);
    for (const auto& r : rows) out << r << '\n';
    out.close();
    CHECK_THROWS_AS(ZeroCache(d.path).load(), CacheError);
  }
  SUBCASE("broken manifest") {
    std::ofstream(d.path / "manifest.json", std::ios::trunc) << "{\"format\": ";
    CHECK_THROWS_AS(ZeroCache{d.path}, CacheError);
  }
  SUBCASE("missing segment") {
    fs::remove(seg);
    CHECK_THROWS_AS(ZeroCache(d.path).load(), CacheError);
  }
}

TEST_CASE("uncovered ranges ask for a zeros run") {
  TempDir d;
  const ZeroCache empty(d.path);
  CHECK_THROWS_WITH_AS(empty.load_covering(100.0, 200.0), doctest::Contains("run zeros first"), CacheError);
  ZeroCache(d.path).ensure(100.0, 200.0);
  CHECK_THROWS_WITH_AS(ZeroCache(d.path).load_covering(100.0, 300.0), doctest::Contains("run zeros first"),
                       CacheError);
}

TEST_CASE("argument parsing") {
  std::ostringstream sink;
  const auto cfg = parse_args({"gramlab", "classify", "--t-lo", "1000"}, sink);
  REQUIRE(cfg);
  CHECK(cfg->command == Command::classify);
  CHECK(cfg->t_hi == 2000.0);
  CHECK(cfg->format == OutputFormat::csv);

  CHECK_THROWS_AS(parse_args({"gramlab", "zeros"}, sink), ArgumentError);
  CHECK_THROWS_AS(parse_args({"gramlab", "dance", "--t-lo", "100"}, sink), ArgumentError);
  CHECK_THROWS_AS(parse_args({"gramlab", "zeros", "--t-lo", "100", "--t-hi", "50"}, sink), ArgumentError);
  CHECK_THROWS_AS(parse_args({"gramlab", "zeros", "--t-lo", "100", "--threads", "0"}, sink), ArgumentError);
  CHECK_THROWS_AS(parse_args({"gramlab", "moments", "--t-lo", "100", "--m", "9"}, sink), ArgumentError);
  CHECK_THROWS_AS(parse_args({"gramlab", "zeros", "--t-lo", "100", "--format", "xml"}, sink), ArgumentError);
  CHECK_FALSE(parse_args({"gramlab", "--help"}, sink));
}

TEST_CASE("CLI exit codes") {
  TempDir d;
  const std::string cache = d.path.string();
  CHECK(cli({"zeros", "--t-hi", "100", "--cache", cache}).code == kExitArgument);
  CHECK(cli({"zeros", "--t-lo", "5", "--t-hi", "20", "--cache", cache}).code == kExitArgument);
  CHECK(cli({"classify", "--t-lo", "100", "--t-hi", "200", "--cache", cache}).code == kExitCache);
  fs::create_directories(d.path);
  std::ofstream(d.path / "manifest.json") << "not json";
  CHECK(cli({"classify", "--t-lo", "100", "--t-hi", "200", "--cache", cache}).code == kExitCache);
}

TEST_CASE("CLI classify on the first fifteen Gram intervals") {
  TempDir d;
  const std::string cache = d.path.string();
  const std::string g15 = fmt_double(gram_point(15).t);
  REQUIRE(cli({"zeros", "--t-lo", "10", "--t-hi", g15, "--cache", cache}).code == kExitOk);
  const Run r = cli({"classify", "--t-lo", "10", "--t-hi", g15, "--cache", cache, "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["n_g"] == 15);
  CHECK(j["histogram"] == nlohmann::json::array({{1, 15}}));
  CHECK(j["failure_proportion"] == 0.0);
}

TEST_CASE("CLI zeros is idempotent and thread independent") {
  TempDir d1;
  TempDir d8;
  const std::vector<std::string> base = {"zeros", "--t-lo", "20000", "--t-hi", "20600"};
  auto with = [&](const TempDir& d, const char* threads) {
    auto args = base;
    args.insert(args.end(), {"--cache", d.path.string(), "--threads", threads});
    return args;
  };
  const Run a = cli(with(d1, "1"));
  REQUIRE(a.code == kExitOk);
  const auto files = snapshot(d1.path);
  const Run again = cli(with(d1, "1"));
  CHECK(again.out == a.out);
  CHECK(snapshot(d1.path) == files);
  const Run b = cli(with(d8, "8"));
  CHECK(b.out == a.out);
  CHECK(snapshot(d8.path) == files);

  auto report_args = [&](const TempDir& d, const char* threads) {
    return std::vector<std::string>{"report", "--t-lo", "20000", "--t-hi", "20600", "--cache", d.path.string(),
                                    "--threads", threads, "--format", "json"};
  };
  const Run r1 = cli(report_args(d1, "1"));
  const Run r8 = cli(report_args(d8, "8"));
  REQUIRE(r1.code == kExitOk);
  CHECK(r1.out == r8.out);
  CHECK(nlohmann::json::parse(r1.out)["failure_proportion"].get<double>() > 0.0);
}

TEST_CASE("CLI moments and gram output") {
  TempDir d;
  const std::string cache = d.path.string();
  REQUIRE(cli({"zeros", "--t-lo", "5000", "--t-hi", "5200", "--cache", cache}).code == kExitOk);
  const Run m = cli({"moments", "--t-lo", "5000", "--t-hi", "5100", "--h", "0.5", "--m", "2", "--cache", cache});
  REQUIRE(m.code == kExitOk);
  CHECK(m.out.rfind("T,H,h,m,value,quad_error,leading_term,ratio\n", 0) == 0);
  const Run far = cli({"moments", "--t-lo", "5000", "--t-hi", "5300", "--cache", cache});
  CHECK(far.code == kExitCache);
  CHECK(far.err.find("run zeros first") != std::string::npos);

  const Run g = cli({"gram", "--t-lo", "17", "--t-hi", "24", "--format", "json"});
  REQUIRE(g.code == kExitOk);
  const auto j = nlohmann::json::parse(g.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["n"] == 0);
}

TEST_CASE("CLI writes --out atomically") {
  TempDir d;
  fs::create_directories(d.path);
  const fs::path out = d.path / "gram.csv";
  REQUIRE(cli({"gram", "--t-lo", "100", "--t-hi", "120", "--out", out.string()}).code == kExitOk);
  CHECK(slurp(out).rfind("n,t,residual\n", 0) == 0);
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}
