#include <sstream>

#include "doctest.h"
#include "wassdict/diagram.hpp"
#include "wassdict/error.hpp"

using namespace wassdict;

namespace {

PersistenceDiagram ms_diagram(std::vector<Point> pts, double lo = -10, double hi = 10) {
  std::vector<PersistencePair> pairs;
  for (Point p : pts) pairs.emplace_back(p.birth, p.death, PairType::MinSaddle);
  return PersistenceDiagram(std::move(pairs), lo, hi, "x");
}

}  // namespace

TEST_CASE("diagonal projection is the midpoint") {
  CHECK(diagonal_projection(Point{1, 3}) == Point{2, 2});
  CHECK(diagonal_projection(Point{0, 0}) == Point{0, 0});
  CHECK(diagonal_projection(Point{-2, 4}) == Point{1, 1});
  const PersistencePair p = diagonal_projection(PersistencePair(1, 3, PairType::SaddleMax));
  CHECK(p.is_diagonal());
  CHECK(p.type() == PairType::SaddleMax);
  CHECK(p.birth() == 2.0);
}

TEST_CASE("threshold keeps pairs at or above tau times the range") {
  const auto x = ms_diagram({{0, 1}, {1, 3}, {2, 7}}, 0, 10);
  CHECK(threshold(x, 0.0).size() == 3);
  const auto kept = threshold(x, 0.2);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].persistence() == 2.0);
  CHECK(kept[1].persistence() == 5.0);
  CHECK(threshold(x, 1.0).empty());
  CHECK(kept.label() == "x");
  CHECK_THROWS_AS(threshold(x, 1.5), std::invalid_argument);
}

TEST_CASE("pairwise augmentation appends the other side's projections") {
  SUBCASE("one point against nothing") {
    auto [a, b] = augment_pairwise(ms_diagram({{1, 3}}), ms_diagram({}));
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    CHECK(b[0].is_diagonal());
    CHECK(b[0].point() == Point{2, 2});
  }
  SUBCASE("empty inputs") {
    auto [a, b] = augment_pairwise(ms_diagram({}), ms_diagram({}));
    CHECK(a.empty());
    CHECK(b.empty());
  }
  SUBCASE("two against one") {
    auto [a, b] = augment_pairwise(ms_diagram({{0, 2}, {1, 5}}), ms_diagram({{0, 4}}));
    REQUIRE(a.size() == 3);
    REQUIRE(b.size() == 3);
    CHECK(a[2].point() == Point{2, 2});
    CHECK(b[1].point() == Point{1, 1});
    CHECK(b[2].point() == Point{3, 3});
    CHECK(b[1].is_diagonal());
  }
}

TEST_CASE("diagram text roundtrip") {
  std::vector<PersistencePair> pairs{{0.1, 0.7, PairType::MinSaddle},
                                     {0.2, 0.3, PairType::SaddleSaddle},
                                     {1.0 / 3.0, 0.9, PairType::SaddleMax}};
  const PersistenceDiagram x(pairs, 0.0, 1.0, "member");
  std::stringstream s;
  format_diagram(s, x);
  CHECK(parse_diagram(s, "mem") == x);

  std::stringstream empty("#pd v1 fmin=0 fmax=1 label=e\n");
  const auto e = parse_diagram(empty, "e");
  CHECK(e.empty());
  CHECK(e.label() == "e");
}

TEST_CASE("diagram parse errors name the line") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::stringstream s(text);
    try {
      parse_diagram(s, "t");
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("#pd v1 fmin=0 fmax=1 label=a\n0.1 0.5 ms\n0.6 0.4 ss\n") == 3);
  CHECK(line_of("0.1 0.5 ms\n") == 1);
  CHECK(line_of("#pd v1 fmin=0 fmax=1 label=a\n0.1 x ms\n") == 2);
  CHECK(line_of("#pd v1 fmin=0 fmax=1 label=a\n0.1 0.5 xx\n") == 2);
  CHECK(line_of("#pd v1 fmin=0 fmax=1 label=a\n0.1 1.5 ms\n") == 2);
}

TEST_CASE("split and rebuild by type") {
  std::vector<PersistencePair> pairs{{0.1, 0.7, PairType::MinSaddle},
                                     {0.2, 0.3, PairType::SaddleSaddle},
                                     {0.4, 0.4, PairType::SaddleMax}};
  const PersistenceDiagram x(pairs, 0.0, 1.0);
  const TypedPoints t = split_by_type(x);
  CHECK(t.total_size() == 2);
  CHECK(t[PairType::SaddleMax].empty());
  CHECK(x.off_diagonal_count() == 2);
  CHECK(to_diagram(t, 0.0, 1.0).size() == 2);
}
