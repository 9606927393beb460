#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rocstream {

// Two-class label. Higher scores are supposed to indicate class 2.
enum class Label : std::uint8_t { Class1 = 1, Class2 = 2 };

// Pair of per-class counts. This is the single currency of the library:
// point weights, cumulative subtree counts, ROC coordinates and hull
// coordinate differences are all CountPairs. Components are kept in 64-bit
// words; the structures are sized for up to 2^31 data points in total.
struct CountPair {
  std::int64_t c1 = 0;
  std::int64_t c2 = 0;

  constexpr CountPair operator+(const CountPair& o) const { return {c1 + o.c1, c2 + o.c2}; }
  constexpr CountPair operator-(const CountPair& o) const { return {c1 - o.c1, c2 - o.c2}; }
  CountPair& operator+=(const CountPair& o) {
    c1 += o.c1;
    c2 += o.c2;
    return *this;
  }
  CountPair& operator-=(const CountPair& o) {
    c1 -= o.c1;
    c2 -= o.c2;
    return *this;
  }
  constexpr bool operator==(const CountPair& o) const { return c1 == o.c1 && c2 == o.c2; }
  constexpr bool operator!=(const CountPair& o) const { return !(*this == o); }

  constexpr bool is_zero() const { return c1 == 0 && c2 == 0; }
  // Component-wise >=; the precondition for subtracting `o` from *this.
  constexpr bool covers(const CountPair& o) const { return c1 >= o.c1 && c2 >= o.c2; }
  constexpr std::int64_t total() const { return c1 + c2; }
};

// A hull vertex in non-normalized ROC coordinates (cumulative counts).
// The first component is treated as the vertical axis throughout.
using RocPoint = CountPair;

struct DataPoint {
  double score = 0.0;
  Label label = Label::Class1;
};

inline CountPair label_weight(Label l) {
  return l == Label::Class1 ? CountPair{1, 0} : CountPair{0, 1};
}

inline CountPair point_weight(const DataPoint& z) { return label_weight(z.label); }

// cross(a, b) = a1*b2 - a2*b1, exact in 128 bits. With the first coordinate
// vertical, cross(a, b) > 0 means slope(a) > slope(b) for vectors with
// non-negative components (vertical = +infinity compares as expected).
inline __int128 cross(const CountPair& a, const CountPair& b) {
  return static_cast<__int128>(a.c1) * b.c2 - static_cast<__int128>(a.c2) * b.c1;
}

inline int slope_cmp(const CountPair& a, const CountPair& b) {
  const __int128 c = cross(a, b);
  return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

class NonFiniteScoreError : public std::invalid_argument {
 public:
  NonFiniteScoreError() : std::invalid_argument("score must be finite") {}
};

class ScoreNotFoundError : public std::invalid_argument {
 public:
  explicit ScoreNotFoundError(double s)
      : std::invalid_argument("no points at score " + std::to_string(s)) {}
};

class InsufficientWeightError : public std::invalid_argument {
 public:
  explicit InsufficientWeightError(double s)
      : std::invalid_argument("removal exceeds stored weight at score " + std::to_string(s)) {}
};

class DegenerateHullError : public std::logic_error {
 public:
  DegenerateHullError() : std::logic_error("bridge requires two non-empty hulls") {}
};

class NoAccumulatorError : public std::logic_error {
 public:
  NoAccumulatorError() : std::logic_error("no node scalar registered on the hull index") {}
};

class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

class NonConvexInputError : public std::invalid_argument {
 public:
  NonConvexInputError() : std::invalid_argument("polyline slopes must be non-increasing") {}
};

class ZeroDifferenceError : public std::invalid_argument {
 public:
  ZeroDifferenceError() : std::invalid_argument("coordinate difference must be non-zero") {}
};

// Scores are keyed by their exact 64-bit value. -0.0 folds into +0.0 so the
// order is total; NaN and infinities are rejected.
inline double normalize_score(double s) {
  if (!std::isfinite(s)) throw NonFiniteScoreError{};
  return s == 0.0 ? 0.0 : s;
}

}  // namespace rocstream
