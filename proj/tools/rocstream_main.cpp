#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rocstream/stream_eval.hpp"

namespace {

using namespace rocstream;

// Exit codes: 0 ok, 1 config error, 2 parse error, 3 I/O error,
// 4 baseline verification failure.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kParseError = 2;
constexpr int kIoError = 3;
constexpr int kBaselineError = 4;

struct CliOptions {
  std::string input;
  std::string output;
  std::string mode = "cumulative";
  std::size_t window = 0;
  std::string metrics = "auc";
  double epsilon = 0.1;
  double alpha = 2.0;
  double beta = 2.0;
  std::string priors = "empirical";
  std::size_t report_every = 1;
  bool baseline = false;
  std::string format = "csv";
  bool has_header = false;
  std::string label_map;
};

RunConfig build_config(const CliOptions& opt) {
  RunConfig cfg;
  if (opt.mode == "cumulative")
    cfg.mode = Mode::Cumulative;
  else if (opt.mode == "sliding")
    cfg.mode = Mode::Sliding;
  else
    throw ConfigError("--mode must be cumulative or sliding");
  cfg.window = opt.window;

  cfg.want_auc = cfg.want_h = cfg.want_happrox = false;
  std::stringstream ms(opt.metrics);
  std::string token;
  while (std::getline(ms, token, ',')) {
    if (token == "auc")
      cfg.want_auc = true;
    else if (token == "h")
      cfg.want_h = true;
    else if (token == "happrox")
      cfg.want_happrox = true;
    else
      throw ConfigError("unknown metric '" + token + "' (expected auc, h, happrox)");
  }

  cfg.epsilon = opt.epsilon;
  cfg.params = BetaParams{opt.alpha, opt.beta};
  if (opt.priors == "empirical") {
    cfg.priors.empirical = true;
  } else {
    const std::size_t comma = opt.priors.find(',');
    if (comma == std::string::npos)
      throw ConfigError("--priors must be 'empirical' or 'P1,P2'");
    try {
      cfg.priors.empirical = false;
      cfg.priors.p1 = std::stod(opt.priors.substr(0, comma));
      cfg.priors.p2 = std::stod(opt.priors.substr(comma + 1));
    } catch (const std::exception&) {
      throw ConfigError("--priors must be 'empirical' or 'P1,P2'");
    }
  }
  cfg.report_every = opt.report_every;
  cfg.baseline = opt.baseline;
  return validated(cfg);
}

LabelMap build_label_map(const std::string& spec) {
  LabelMap map;
  if (spec.empty()) return map;
  // "1=pos,2=neg": external tokens for class 1 and class 2.
  std::stringstream ss(spec);
  std::string part;
  bool saw1 = false;
  bool saw2 = false;
  while (std::getline(ss, part, ',')) {
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("--label-map entries must look like 1=token");
    const std::string cls = part.substr(0, eq);
    const std::string token = part.substr(eq + 1);
    if (token.empty()) throw ConfigError("--label-map token must be non-empty");
    if (cls == "1") {
      map.class1 = token;
      saw1 = true;
    } else if (cls == "2") {
      map.class2 = token;
      saw2 = true;
    } else {
      throw ConfigError("--label-map classes must be 1 or 2");
    }
  }
  if (!saw1 || !saw2) throw ConfigError("--label-map must remap both classes");
  if (map.class1 == map.class2) throw ConfigError("--label-map tokens must differ");
  return map;
}

int run(const CliOptions& opt) {
  RunConfig cfg;
  LabelMap labels;
  try {
    cfg = build_config(opt);
    labels = build_label_map(opt.label_map);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (!opt.input.empty() && opt.input != "-") {
    file_in.open(opt.input);
    if (!file_in) {
      std::cerr << "i/o error: cannot open input '" << opt.input << "'\n";
      return kIoError;
    }
    in = &file_in;
  }

  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!opt.output.empty() && opt.output != "-") {
    file_out.open(opt.output);
    if (!file_out) {
      std::cerr << "i/o error: cannot open output '" << opt.output << "'\n";
      return kIoError;
    }
    out = &file_out;
  }

  const OutputFormat format = opt.format == "jsonl" ? OutputFormat::Jsonl : OutputFormat::Csv;
  if (opt.format != "csv" && opt.format != "jsonl") {
    std::cerr << "config error: --format must be csv or jsonl\n";
    return kConfigError;
  }

  StreamEvaluator eval(cfg);
  if (format == OutputFormat::Csv) write_csv_header(*out);

  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(*in, line)) {
      ++line_no;
      if (line_no == 1 && opt.has_header) continue;
      if (line.empty() || line == "\r") continue;
      DataPoint z;
      try {
        z = parse_line(line, labels);
      } catch (const ParseError& e) {
        std::cerr << "parse error at line " << line_no << ": " << e.what() << '\n';
        return kParseError;
      }
      if (const auto report = eval.push(z)) {
        if (format == OutputFormat::Csv)
          write_report_csv(*out, *report);
        else
          write_report_jsonl(*out, *report);
      }
    }
  } catch (const BaselineMismatchError& e) {
    std::cerr << "baseline verification failed: " << e.what() << '\n';
    return kBaselineError;
  }
  if (in->bad()) {
    std::cerr << "i/o error: failed reading input\n";
    return kIoError;
  }
  out->flush();
  if (out->fail()) {
    std::cerr << "i/o error: failed writing output\n";
    return kIoError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Streaming classifier evaluation: exact AUC and H-measure maintained "
      "incrementally over cumulative or sliding-window score streams"};
  CliOptions opt;

  app.add_option("input", opt.input, "CSV input path ('-' for stdin), lines of score,label")
      ->required();
  app.add_option("--mode", opt.mode, "cumulative or sliding")->capture_default_str();
  app.add_option("--window", opt.window, "window size for sliding mode (>= 2)");
  app.add_option("--metrics", opt.metrics, "comma list from auc,h,happrox")
      ->capture_default_str();
  app.add_option("--epsilon", opt.epsilon, "approximation guarantee for happrox")
      ->capture_default_str();
  app.add_option("--alpha", opt.alpha, "beta-weight alpha")->capture_default_str();
  app.add_option("--beta", opt.beta, "beta-weight beta")->capture_default_str();
  app.add_option("--priors", opt.priors, "'empirical' or explicit 'P1,P2'")
      ->capture_default_str();
  app.add_option("--report-every", opt.report_every, "emit a report every K steps")
      ->capture_default_str();
  app.add_flag("--baseline", opt.baseline,
               "recompute metrics from scratch at each report and verify agreement");
  app.add_option("--format", opt.format, "csv or jsonl")->capture_default_str();
  app.add_flag("--has-header", opt.has_header, "skip the first input line");
  app.add_option("--label-map", opt.label_map, "label tokens, e.g. 1=pos,2=neg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kConfigError;
  }
  return run(opt);
}
