#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "synthetic.hpp"
#include "wassdict/cli.hpp"
#include "wassdict/error.hpp"
#include "wassdict/transport.hpp"

using namespace wassdict;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("wassdict_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path write_ensemble(const fs::path& dir, const testing::LabeledEnsemble& e) {
  const fs::path ens = dir / "ensemble";
  fs::create_directories(ens);
  std::ofstream labels(dir / "labels.csv");
  for (std::size_t n = 0; n < e.members.size(); ++n) {
    write_diagram(e.members[n], ens / (e.members[n].label() + ".pd"));
    labels << e.members[n].label() << ',' << e.classes[n] << '\n';
  }
  return ens;
}

}  // namespace

TEST_CASE("help and usage errors") {
  const Run help = run({"--help"});
  CHECK(help.code == cli::kSuccess);
  CHECK(help.out.find("learn") != std::string::npos);
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"learn"}).code == cli::kUsageError);
  CHECK(run({"frobnicate"}).code == cli::kUsageError);
  CHECK(run({"learn", "x", "--no-such-option"}).code == cli::kUsageError);
}

TEST_CASE("missing input directory") {
  const Run r = run({"matrix", "/no/such/dir"});
  CHECK(r.code == cli::kDataError);
  CHECK(r.err.find("/no/such/dir") != std::string::npos);
}

TEST_CASE("ingest orders by file name and names bad files") {
  TempDir tmp;
  const PersistenceDiagram x({{0.1, 0.4, PairType::MinSaddle}}, 0, 1, "");
  write_diagram(x.with_label("bee"), tmp.path / "b.pd");
  SUBCASE("one file") { CHECK(cli::ingest_ensemble(tmp.path).size() == 1); }
  SUBCASE("sorted, stem as fallback label") {
    write_diagram(x, tmp.path / "a.pd");
    std::ofstream(tmp.path / "notes.txt") << "ignored\n";
    const auto e = cli::ingest_ensemble(tmp.path);
    REQUIRE(e.size() == 2);
    CHECK(e[0].label() == "a");
    CHECK(e[1].label() == "bee");
  }
  SUBCASE("invalid file") {
    std::ofstream(tmp.path / "c.pd") << "#pd v1 fmin=0 fmax=1 label=c\n0.5 0.2 ms\n";
    try {
      cli::ingest_ensemble(tmp.path);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("c.pd") != std::string::npos);
    }
    CHECK(run({"matrix", tmp.path.string()}).code == cli::kDataError);
  }
  SUBCASE("empty directory") {
    fs::remove(tmp.path / "b.pd");
    CHECK_THROWS_AS(cli::ingest_ensemble(tmp.path), DataError);
  }
}

TEST_CASE("end to end") {
  TempDir tmp;
  const auto e = testing::three_clusters(71, 2);
  const fs::path ens = write_ensemble(tmp.path, e);
  const std::string model = (tmp.path / "model.wd").string();
  const std::string trace = (tmp.path / "energy.csv").string();

  const Run learn = run({"--threads", "1", "learn", ens.string(), "-m", "3", "-o", model,
                         "--trace", trace, "--max-iterations", "5"});
  REQUIRE(learn.code == cli::kSuccess);
  CHECK(fs::exists(model));
  const std::string energy = slurp(trace);
  CHECK(energy.rfind("scale_tau,iteration,wallclock_s,E_D\n", 0) == 0);

  const Run dist = run({"distance", (ens / "member_00.pd").string(), (ens / "member_03.pd").string()});
  CHECK(dist.code == cli::kSuccess);
  CHECK(std::stod(dist.out) == doctest::Approx(wasserstein_distance(e.members[0], e.members[3])));

  const Run matrix = run({"matrix", ens.string()});
  CHECK(matrix.code == cli::kSuccess);
  CHECK(matrix.out.rfind("member_00,member_01,", 0) == 0);

  const Run bary = run({"barycenter", (ens / "member_00.pd").string(),
                        (ens / "member_01.pd").string(), "--weights", "1,0"});
  CHECK(bary.code == cli::kSuccess);
  std::istringstream bary_text(bary.out);
  CHECK(wasserstein_distance(parse_diagram(bary_text, "b"), e.members[0]) < 1e-9);

  const Run recon = run({"reconstruct", model, "-n", "1"});
  CHECK(recon.code == cli::kSuccess);
  CHECK(run({"reconstruct", model, "-n", "99"}).code == cli::kDataError);

  const Run embed = run({"embed", model});
  CHECK(embed.code == cli::kSuccess);
  CHECK(embed.out.rfind("label,x,y,lambda_1,lambda_2,lambda_3\n", 0) == 0);

  const Run eval = run({"eval", model, ens.string(), "--labels",
                        (tmp.path / "labels.csv").string(), "--cluster-consistency"});
  REQUIRE(eval.code == cli::kSuccess);
  const auto scores = nlohmann::json::parse(eval.out);
  CHECK(scores["layout"]["nmi"].get<double>() >= 0.0);
  CHECK(scores["cluster_consistency"]["clusters"].get<int>() == 3);
  CHECK(scores["reconstruction_error"]["per_member"].size() == e.members.size());

  const Run compress = run({"compress", ens.string(), "-m", "3", "--factor", "1000"});
  CHECK(compress.code == cli::kDataError);
  CHECK(compress.err.find("smaller factor") != std::string::npos);
}

TEST_CASE("learn is repeatable on one thread") {
  TempDir tmp;
  const fs::path ens = write_ensemble(tmp.path, testing::three_clusters(72, 2));
  std::string first;
  for (int k = 0; k < 2; ++k) {
    const fs::path out = tmp.path / ("model" + std::to_string(k) + ".wd");
    REQUIRE(run({"--threads", "1", "--seed", "3", "learn", ens.string(), "-o", out.string(),
                 "--max-iterations", "4"})
                .code == cli::kSuccess);
    if (k == 0)
      first = slurp(out);
    else
      CHECK(slurp(out) == first);
  }
}
