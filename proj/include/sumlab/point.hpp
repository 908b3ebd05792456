#pragma once

#include "sumlab/rational.hpp"

#include <compare>
#include <string>

namespace sumlab {

struct Point2 {
  Rat x = 0, y = 0;
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
  bool operator<(const Point2& o) const { return x < o.x || (x == o.x && y < o.y); }
};

inline std::string to_string(const Point2& p) { return "(" + to_string(p.x) + "," + to_string(p.y) + ")"; }

}  // namespace sumlab
