#include "thermsense/roi.hpp"

#include <doctest.h>

using namespace thermsense;

TEST_CASE("parse and format") {
  CHECK(parse_roi("10,20,30,40") == Roi{10, 20, 30, 40});
  CHECK(format_roi(Roi{1, 2, 3, 4}) == "1,2,3,4");
  CHECK_THROWS_AS(parse_roi("1,2,3"), RoiError);
  CHECK_THROWS_AS(parse_roi("1,2,3,4,5"), RoiError);
  CHECK_THROWS_AS(parse_roi("a,2,3,4"), RoiError);
  CHECK_THROWS_AS(parse_roi("1,2,1,1"), RoiError);
  CHECK_THROWS_AS(parse_roi(""), RoiError);
}

TEST_CASE("bounds errors name the violated edge") {
  auto edge_of = [](Roi r) {
    try {
      check_roi(r, 160, 120);
    } catch (const RoiError& e) {
      return e.edge();
    }
    return RoiError::Edge::none;
  };
  CHECK(edge_of({-1, 0, 4, 4}) == RoiError::Edge::left);
  CHECK(edge_of({0, -3, 4, 4}) == RoiError::Edge::top);
  CHECK(edge_of({158, 0, 4, 4}) == RoiError::Edge::right);
  CHECK(edge_of({0, 118, 4, 4}) == RoiError::Edge::bottom);
  CHECK(edge_of({200, 200, 4, 4}) == RoiError::Edge::right);
  CHECK(edge_of({156, 116, 4, 4}) == RoiError::Edge::none);
  CHECK_THROWS_AS(check_roi({0, 0, 1, 3}, 160, 120), RoiError);
  CHECK(roi_fits({0, 0, 2, 2}, 160, 120));
}
