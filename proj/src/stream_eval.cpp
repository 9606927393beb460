#include "rocstream/stream_eval.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "rocstream/oracles.hpp"

namespace rocstream {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

DataPoint parse_line(std::string_view line, const LabelMap& labels) {
  const std::string_view trimmed = trim(line);
  const std::size_t comma = trimmed.find(',');
  if (comma == std::string_view::npos) throw ParseError("expected 'score,label'");
  const std::string_view score_text = trim(trimmed.substr(0, comma));
  const std::string_view label_text = trim(trimmed.substr(comma + 1));
  if (label_text.find(',') != std::string_view::npos) throw ParseError("too many fields");

  double score = 0.0;
  const auto [ptr, ec] =
      std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
  if (ec != std::errc{} || ptr != score_text.data() + score_text.size())
    throw ParseError("malformed score '" + std::string(score_text) + "'");
  if (!std::isfinite(score)) throw ParseError("non-finite score '" + std::string(score_text) + "'");

  Label label;
  if (label_text == labels.class1)
    label = Label::Class1;
  else if (label_text == labels.class2)
    label = Label::Class2;
  else
    throw ParseError("unknown label token '" + std::string(label_text) + "'");
  return DataPoint{normalize_score(score), label};
}

RunConfig validated(RunConfig cfg) {
  if (cfg.mode == Mode::Sliding && cfg.window < 2)
    throw ConfigError("sliding mode requires --window >= 2");
  if (cfg.report_every < 1) throw ConfigError("--report-every must be positive");
  if (!cfg.want_auc && !cfg.want_h && !cfg.want_happrox)
    throw ConfigError("at least one metric must be requested");
  if ((cfg.want_happrox) && !(cfg.epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
  try {
    validate(cfg.params);
    if (!cfg.priors.empirical) validate(Priors{cfg.priors.p1, cfg.priors.p2});
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  // The exact decomposition only holds for priors estimated from the window
  // itself; explicit priors route exact-H requests to the approximation.
  if (cfg.want_h && !cfg.priors.empirical) {
    cfg.want_h = false;
    cfg.want_happrox = true;
  }
  return cfg;
}

StreamEvaluator::StreamEvaluator(RunConfig cfg) : cfg_(validated(std::move(cfg))) {
  need_hull_ = cfg_.want_h || cfg_.want_happrox;
  retain_points_ = cfg_.mode == Mode::Sliding || cfg_.baseline;
  if (cfg_.want_h) register_h_accumulator(hull_, cfg_.params);
}

std::optional<MetricReport> StreamEvaluator::push(const DataPoint& z) {
  const auto t0 = std::chrono::steady_clock::now();
  const CountPair w = point_weight(z);
  auc_.add(z.score, w);
  if (need_hull_) hull_.insert(z.score, w);
  if (retain_points_) retained_.push_back(z);
  if (cfg_.mode == Mode::Sliding && retained_.size() > cfg_.window) {
    const DataPoint old = retained_.front();
    retained_.pop_front();
    const CountPair ow = point_weight(old);
    auc_.remove(old.score, ow);
    if (need_hull_) hull_.remove(old.score, ow);
  }
  update_ns_ += std::chrono::steady_clock::now() - t0;

  ++step_;
  if (step_ % static_cast<std::int64_t>(cfg_.report_every) != 0) return std::nullopt;
  return make_report();
}

MetricReport StreamEvaluator::make_report() {
  MetricReport r;
  r.step = step_;
  const CountPair n = auc_.totals();
  r.n = n.total();
  r.n1 = n.c1;
  r.n2 = n.c2;

  const auto t0 = std::chrono::steady_clock::now();
  if (cfg_.want_auc) r.auc = auc_.auc();
  if (cfg_.want_h) r.h_exact = exact_h(hull_, cfg_.params);
  if (cfg_.want_happrox && n.c1 > 0 && n.c2 > 0) {
    const Priors pi = cfg_.priors.empirical
                          ? Priors{static_cast<double>(n.c1) / static_cast<double>(n.total()),
                                   static_cast<double>(n.c2) / static_cast<double>(n.total())}
                          : Priors{cfg_.priors.p1, cfg_.priors.p2};
    r.h_approx = approx_h(hull_, pi, cfg_.params, cfg_.epsilon);
  }
  update_ns_ += std::chrono::steady_clock::now() - t0;
  r.update_micros = std::chrono::duration_cast<std::chrono::microseconds>(update_ns_).count();
  update_ns_ = {};

  if (cfg_.baseline) {
    const std::vector<DataPoint> pts(retained_.begin(), retained_.end());
    const auto b0 = std::chrono::steady_clock::now();
    std::optional<double> base_auc;
    std::optional<double> base_h;
    if (cfg_.want_auc) base_auc = oracles::offline_auc(pts);
    if (cfg_.want_h) base_h = oracles::offline_h(pts, std::nullopt, cfg_.params);
    const auto b1 = std::chrono::steady_clock::now();
    r.baseline_micros = std::chrono::duration_cast<std::chrono::microseconds>(b1 - b0).count();

    if (cfg_.want_auc && base_auc.has_value() != r.auc.has_value())
      throw BaselineMismatchError("AUC definedness diverged at step " + std::to_string(step_));
    if (base_auc && std::fabs(*base_auc - *r.auc) > 1e-12)
      throw BaselineMismatchError("AUC diverged at step " + std::to_string(step_));
    if (cfg_.want_h) {
      if (base_h.has_value() != r.h_exact.has_value())
        throw BaselineMismatchError("H definedness diverged at step " + std::to_string(step_));
      if (base_h && std::fabs(*base_h - *r.h_exact) >
                        1e-9 * std::max(1.0, std::fabs(*base_h)))
        throw BaselineMismatchError("H diverged at step " + std::to_string(step_));
    }
    if (cfg_.want_happrox && r.h_approx) {
      // The approximation must underestimate and respect the eps guarantee.
      const std::optional<Priors> pi =
          cfg_.priors.empirical ? std::nullopt
                                : std::optional<Priors>(Priors{cfg_.priors.p1, cfg_.priors.p2});
      const std::optional<double> exact = oracles::offline_h(pts, pi, cfg_.params);
      if (exact) {
        if (*r.h_approx > *exact + 1e-12 ||
            std::fabs(*exact - *r.h_approx) > cfg_.epsilon * (1.0 - *exact) + 1e-9)
          throw BaselineMismatchError("approximate H out of bounds at step " +
                                      std::to_string(step_));
      }
    }
  }
  return r;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv_header(std::ostream& os) {
  os << "step,n,n1,n2,auc,h_exact,h_approx,update_micros,baseline_micros\n";
}

void write_report_csv(std::ostream& os, const MetricReport& r) {
  os << r.step << ',' << r.n << ',' << r.n1 << ',' << r.n2 << ',';
  if (r.auc) os << format_double(*r.auc);
  os << ',';
  if (r.h_exact) os << format_double(*r.h_exact);
  os << ',';
  if (r.h_approx) os << format_double(*r.h_approx);
  os << ',' << r.update_micros << ',';
  if (r.baseline_micros) os << *r.baseline_micros;
  os << '\n';
}

void write_report_jsonl(std::ostream& os, const MetricReport& r) {
  nlohmann::json j;
  j["step"] = r.step;
  j["n"] = r.n;
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["auc"] = r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr);
  j["h_exact"] = r.h_exact ? nlohmann::json(*r.h_exact) : nlohmann::json(nullptr);
  j["h_approx"] = r.h_approx ? nlohmann::json(*r.h_approx) : nlohmann::json(nullptr);
  j["update_micros"] = r.update_micros;
  j["baseline_micros"] =
      r.baseline_micros ? nlohmann::json(*r.baseline_micros) : nlohmann::json(nullptr);
  os << j.dump() << '\n';
}

}  // namespace rocstream
