#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rocstream/auc_maintainer.hpp"
#include "rocstream/hmeasure.hpp"
#include "rocstream/roc_hull_index.hpp"
#include "rocstream/types.hpp"

namespace rocstream {

enum class Mode { Cumulative, Sliding };
enum class OutputFormat { Csv, Jsonl };

struct PriorsSpec {
  bool empirical = true;
  double p1 = 0.5;
  double p2 = 0.5;
};

struct RunConfig {
  Mode mode = Mode::Cumulative;
  std::size_t window = 0;  // sliding only, >= 2
  bool want_auc = true;
  bool want_h = false;
  bool want_happrox = false;
  double epsilon = 0.1;
  BetaParams params;
  PriorsSpec priors;
  std::size_t report_every = 1;
  bool baseline = false;
};

struct MetricReport {
  std::int64_t step = 0;
  std::int64_t n = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::optional<double> auc;
  std::optional<double> h_exact;
  std::optional<double> h_approx;
  std::int64_t update_micros = 0;
  std::optional<std::int64_t> baseline_micros;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when --baseline finds the dynamic and recomputed values apart.
class BaselineMismatchError : public std::runtime_error {
 public:
  explicit BaselineMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// External label tokens for the two classes ("1"/"2" unless remapped).
struct LabelMap {
  std::string class1 = "1";
  std::string class2 = "2";
};

// Parses one "score,label" line. Throws ParseError on malformed numbers,
// non-finite scores or unknown label tokens.
DataPoint parse_line(std::string_view line, const LabelMap& labels);

// Checks invariants and applies the routing rules: exact H requires
// empirical priors, so explicit priors turn an exact-H request into an
// approximate one. Throws ConfigError.
RunConfig validated(RunConfig cfg);

// Feeds points one at a time; maintains the AUC statistic and, when an
// H variant is requested, the dynamic hull. Sliding mode evicts the point
// that fell out of the window before adding the new one counts as one step.
class StreamEvaluator {
 public:
  explicit StreamEvaluator(RunConfig cfg);

  // Processes one point. Returns a report on every report_every-th step.
  std::optional<MetricReport> push(const DataPoint& z);

  const RunConfig& config() const { return cfg_; }
  std::int64_t steps() const { return step_; }
  CountPair totals() const { return auc_.totals(); }

 private:
  MetricReport make_report();

  RunConfig cfg_;
  bool need_hull_ = false;
  bool retain_points_ = false;
  AucMaintainer auc_;
  RocHullIndex hull_;
  std::deque<DataPoint> retained_;  // current window (sliding) or full stream
  std::int64_t step_ = 0;
  std::chrono::nanoseconds update_ns_{0};
};

void write_csv_header(std::ostream& os);
void write_report_csv(std::ostream& os, const MetricReport& r);
void write_report_jsonl(std::ostream& os, const MetricReport& r);

}  // namespace rocstream
