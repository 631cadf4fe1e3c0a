#include "rentropy/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rentropy/bench.hpp"
#include "rentropy/csv.hpp"
#include "rentropy/info_measures.hpp"
#include "rentropy/kernel_gram.hpp"
#include "rentropy/lanczos.hpp"
#include "rentropy/mixture.hpp"
#include "rentropy/sketch.hpp"
#include "rentropy/types.hpp"

namespace rentropy {

namespace {

struct CommonOpts {
  std::string input;
  long long n = 0;
  long long d = 10;
  double alpha = 2.0;
  std::string method = "exact";
  int sketches = 100;
  int degree = 30;
  int clusters = 0;
  int rank = 0;
  std::string kernel = "gaussian";
  double sigma = 1.0;
  double shift = 1.0;
  int poly_degree = 2;
  std::uint64_t seed = 0;
  double delta = 0.1;
  double epsilon = 0.3;
  std::string output;
  std::string format = "csv";
  std::string vars;
  std::string target;
};

Method parse_method(const std::string& name) {
  if (name == "exact") return Method::Exact;
  if (name == "integer") return Method::Integer;
  if (name == "taylor") return Method::Taylor;
  if (name == "chebyshev") return Method::Chebyshev;
  if (name == "lanczos") return Method::Lanczos;
  throw std::invalid_argument("unknown method: " + name);
}

KernelSpec parse_kernel(const CommonOpts& opt) {
  KernelSpec spec;
  spec.family = opt.kernel == "polynomial" ? KernelFamily::Polynomial : KernelFamily::Gaussian;
  spec.sigma = opt.sigma;
  spec.shift = opt.shift;
  spec.degree = opt.poly_degree;
  validate_kernel(spec);
  return spec;
}

// "a:b" half-open column range; "a" alone is the single column a.
std::pair<Index, Index> parse_range(const std::string& text, Index d) {
  const auto colon = text.find(':');
  Index lo = 0, hi = 0;
  try {
    if (colon == std::string::npos) {
      lo = std::stoll(text);
      hi = lo + 1;
    } else {
      lo = std::stoll(text.substr(0, colon));
      hi = std::stoll(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed column range: " + text);
  }
  if (lo < 0 || hi <= lo || hi > d) {
    throw std::invalid_argument("column range out of bounds: " + text);
  }
  return {lo, hi};
}

std::vector<std::pair<Index, Index>> parse_ranges(const std::string& text, Index d) {
  std::vector<std::pair<Index, Index>> ranges;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) ranges.push_back(parse_range(part, d));
  }
  if (ranges.empty()) throw std::invalid_argument("empty column range list: " + text);
  return ranges;
}

SampleSet columns(const SampleSet& data, std::pair<Index, Index> range) {
  SampleSet out;
  out.x = data.x.middleCols(range.first, range.second - range.first);
  return out;
}

SampleSet load_or_generate(const CommonOpts& opt) {
  if (!opt.input.empty()) return load_samples_file(opt.input);
  if (opt.n > 0) return generate_mixture(opt.n, opt.d, opt.seed);
  throw std::invalid_argument("need --input FILE or --n N for synthetic mixture data");
}

int effective_sketches(const CommonOpts& opt, Method method) {
  if (opt.sketches > 0) return opt.sketches;
  // --sketches 0 derives the count from the trace-accuracy parameters
  return method == Method::Lanczos ? quadrature_sketch_count(opt.epsilon, opt.delta)
                                   : hutchinson_sketch_count(opt.epsilon, opt.delta);
}

MeasureRequest build_request(const CommonOpts& opt, const SampleSet& data,
                             bool need_target) {
  const Method method = parse_method(opt.method);
  const bool blr = opt.clusters > 0 || opt.rank > 0;
  if (blr && method == Method::Exact) {
    throw std::invalid_argument("--clusters/--rank select the block low-rank operator, "
                                "which has no exact backend");
  }
  const KernelSpec kernel = parse_kernel(opt);

  MeasureRequest req;
  req.method = method;
  req.representation = blr ? Representation::BlockLowRank : Representation::Dense;
  req.clusters = opt.clusters;
  req.lowrank = opt.rank;
  req.config.alpha = opt.alpha;
  req.config.sketches = effective_sketches(opt, method);
  req.config.degree = opt.degree;
  req.config.seed = opt.seed;
  req.config.delta = opt.delta;
  req.config.epsilon = opt.epsilon;

  std::vector<std::pair<Index, Index>> target_range;
  if (!opt.target.empty()) {
    target_range = parse_ranges(opt.target, data.d());
    if (target_range.size() != 1) throw std::invalid_argument("--target takes a single range");
    req.target = Variable{columns(data, target_range.front()), kernel};
  } else if (need_target) {
    throw std::invalid_argument("this measure needs --target COLS");
  }

  if (!opt.vars.empty()) {
    for (const auto& range : parse_ranges(opt.vars, data.d())) {
      req.variables.push_back(Variable{columns(data, range), kernel});
    }
  } else if (!target_range.empty()) {
    // default variable set: every column outside the target range
    const auto [lo, hi] = target_range.front();
    SampleSet rest;
    rest.x.resize(data.n(), data.d() - (hi - lo));
    Index at = 0;
    for (Index j = 0; j < data.d(); ++j) {
      if (j >= lo && j < hi) continue;
      rest.x.col(at++) = data.x.col(j);
    }
    if (rest.x.cols() == 0) throw std::invalid_argument("target covers every column");
    req.variables.push_back(Variable{std::move(rest), kernel});
  } else {
    req.variables.push_back(Variable{data, kernel});
  }
  return req;
}

class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Wall time goes to stderr, not into the payload: repeated runs with the
// same flags must produce byte-identical stdout.
void emit_estimate(const CommonOpts& opt, const char* measure, const EntropyEstimate& est) {
  std::cerr << measure << " estimator time: " << est.elapsed_s << " s\n";
  OutputTarget out(opt.output);
  if (opt.format == "json") {
    nlohmann::ordered_json obj;
    obj["measure"] = measure;
    obj["method"] = est.method;
    obj["alpha"] = est.alpha;
    obj["s"] = est.sketches;
    obj["m"] = est.degree;
    obj["c"] = opt.clusters;
    obj["k"] = opt.rank;
    obj["seed"] = opt.seed;
    obj["bits"] = est.bits;
    for (const TermRecord& term : est.terms) obj["terms"][term.label] = term.bits;
    out.stream() << obj.dump(2) << '\n';
    return;
  }
  out.stream() << "measure,method,alpha,s,m,c,k,seed,bits\n"
               << measure << ',' << est.method << ',' << format_double(est.alpha) << ','
               << est.sketches << ',' << est.degree << ',' << opt.clusters << ',' << opt.rank
               << ',' << opt.seed << ',' << format_double(est.bits) << '\n';
}

void run_gram(const CommonOpts& opt, const std::string& dump_path) {
  const SampleSet data = load_or_generate(opt);
  const KernelSpec kernel = parse_kernel(opt);
  const GramMatrix gram = build_gram(data, kernel);

  double off_min = 1.0, off_max = 0.0;
  const Index n = gram.n();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      off_min = std::min(off_min, gram.g(i, j));
      off_max = std::max(off_max, gram.g(i, j));
    }
  }
  const double trace = gram.g.diagonal().sum();

  OutputTarget out(opt.output);
  if (opt.format == "json") {
    nlohmann::ordered_json obj;
    obj["n"] = n;
    obj["d"] = data.d();
    obj["kernel"] = kernel.name();
    obj["trace"] = trace;
    obj["diagonal"] = 1.0 / static_cast<double>(n);
    obj["off_min"] = off_min;
    obj["off_max"] = off_max;
    out.stream() << obj.dump(2) << '\n';
  } else {
    out.stream() << "key,value\n"
                 << "n," << n << '\n'
                 << "d," << data.d() << '\n'
                 << "kernel," << kernel.name() << '\n'
                 << "trace," << format_double(trace) << '\n'
                 << "diagonal," << format_double(1.0 / static_cast<double>(n)) << '\n'
                 << "off_min," << format_double(off_min) << '\n'
                 << "off_max," << format_double(off_max) << '\n';
  }
  if (!dump_path.empty()) {
    std::ofstream dump(dump_path);
    if (!dump) throw std::runtime_error("cannot open dump file: " + dump_path);
    write_matrix_csv(dump, gram.g);
  }
}

void run_select(const CommonOpts& opt, long long label_col, int count) {
  if (opt.input.empty()) throw std::invalid_argument("select needs --input FILE");
  const SampleSet table = load_samples_file(opt.input);
  const Index d = table.d();
  if (d < 2) throw std::invalid_argument("select needs at least one feature plus the label column");
  const Index label = label_col < 0 ? d - 1 : static_cast<Index>(label_col);
  if (label >= d) throw std::invalid_argument("label column out of range");

  SampleSet features;
  features.x.resize(table.n(), d - 1);
  Index at = 0;
  for (Index j = 0; j < d; ++j) {
    if (j == label) continue;
    features.x.col(at++) = table.x.col(j);
  }
  SampleSet labels;
  labels.x = table.x.col(label);

  MeasureRequest tmpl = build_request(opt, features, false);
  tmpl.variables = {Variable{SampleSet{}, parse_kernel(opt)}};

  const std::vector<Index> order = greedy_feature_selection(features, labels, count, tmpl);

  OutputTarget out(opt.output);
  if (opt.format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < order.size(); ++i) {
      arr.push_back({{"step", i}, {"feature", order[i]}});
    }
    out.stream() << arr.dump(2) << '\n';
  } else {
    out.stream() << "step,feature\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
      out.stream() << i << ',' << order[i] << '\n';
    }
  }
}

struct BenchOpts {
  long long n = 2000;
  long long d = 10;
  std::vector<double> alphas{2.0};
  std::vector<std::string> methods{"chebyshev"};
  int s_start = 20, s_stop = 200, s_step = 20;
  int degree = 30;
  int lanczos_degree = 15;
  std::vector<int> clusters;
  std::vector<int> ranks;
  int trials = 100;
  std::uint64_t seed = 0;
  std::string kernel = "gaussian";
  double sigma = 1.0;
  double shift = 1.0;
  int poly_degree = 2;
  std::string output;
  std::string format = "csv";
};

void run_bench(const BenchOpts& opt) {
  BenchmarkSpec spec;
  spec.n = opt.n;
  spec.d = opt.d;
  CommonOpts kopt;
  kopt.kernel = opt.kernel;
  kopt.sigma = opt.sigma;
  kopt.shift = opt.shift;
  kopt.poly_degree = opt.poly_degree;
  spec.kernel = parse_kernel(kopt);
  spec.alphas = opt.alphas;
  spec.methods.clear();
  for (const std::string& m : opt.methods) spec.methods.push_back(parse_method(m));
  spec.s_start = opt.s_start;
  spec.s_stop = opt.s_stop;
  spec.s_step = opt.s_step;
  spec.degree_taylor = opt.degree;
  spec.degree_chebyshev = opt.degree;
  spec.degree_lanczos = opt.lanczos_degree;
  spec.clusters = opt.clusters;
  spec.ranks = opt.ranks;
  spec.trials = opt.trials;
  spec.master_seed = opt.seed;

  for (Method m : spec.methods) {
    if (m == Method::Exact && !spec.clusters.empty()) {
      throw std::invalid_argument("exact method cannot run on the block low-rank grid");
    }
  }

  OutputTarget out(opt.output);
  if (opt.format == "json") {
    const std::vector<BenchmarkRecord> records = run_benchmark(spec);
    write_records_json(out.stream(), records);
  } else {
    run_benchmark(spec, &out.stream());
  }
}

void add_kernel_flags(CLI::App* sub, CommonOpts& opt) {
  sub->add_option("--kernel", opt.kernel, "kernel family")
      ->check(CLI::IsMember({"gaussian", "polynomial"}))
      ->capture_default_str();
  sub->add_option("--sigma", opt.sigma, "gaussian kernel width")->capture_default_str();
  sub->add_option("--shift", opt.shift, "polynomial kernel shift")->capture_default_str();
  sub->add_option("--poly-degree", opt.poly_degree, "polynomial kernel degree")
      ->capture_default_str();
}

void add_data_flags(CLI::App* sub, CommonOpts& opt) {
  sub->add_option("--input", opt.input, "CSV of samples, one row per sample");
  sub->add_option("--n", opt.n, "synthetic mixture sample count (when no --input)");
  sub->add_option("--d", opt.d, "synthetic mixture dimension")->capture_default_str();
}

void add_estimator_flags(CLI::App* sub, CommonOpts& opt) {
  sub->add_option("--alpha", opt.alpha, "Renyi order")->capture_default_str();
  sub->add_option("--method", opt.method, "entropy backend")
      ->check(CLI::IsMember({"exact", "integer", "taylor", "chebyshev", "lanczos"}))
      ->capture_default_str();
  sub->add_option("--sketches", opt.sketches,
                  "sketch vectors; 0 derives the count from --epsilon/--delta")
      ->capture_default_str();
  sub->add_option("--degree", opt.degree, "polynomial degree / Lanczos steps")
      ->capture_default_str();
  sub->add_option("--clusters", opt.clusters, "block low-rank cluster count (enables blr)");
  sub->add_option("--rank", opt.rank, "block low-rank off-diagonal rank (enables blr)");
  sub->add_option("--seed", opt.seed, "master RNG seed")->capture_default_str();
  sub->add_option("--delta", opt.delta, "failure probability for derived sketch counts")
      ->capture_default_str();
  sub->add_option("--epsilon", opt.epsilon, "trace accuracy for derived sketch counts")
      ->capture_default_str();
}

void add_output_flags(CLI::App* sub, CommonOpts& opt) {
  sub->add_option("--output", opt.output, "write to this file instead of stdout");
  sub->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"matrix-free Renyi entropy toolkit"};
  app.require_subcommand(1);

  CommonOpts gram_opt;
  std::string gram_dump;
  CLI::App* gram = app.add_subcommand("gram", "normalized Gram matrix statistics");
  add_data_flags(gram, gram_opt);
  add_kernel_flags(gram, gram_opt);
  add_output_flags(gram, gram_opt);
  gram->add_option("--seed", gram_opt.seed, "seed for synthetic data")->capture_default_str();
  gram->add_option("--dump", gram_dump, "also write the full Gram matrix CSV here");
  gram->callback([&]() { run_gram(gram_opt, gram_dump); });

  CommonOpts ent_opt;
  CLI::App* ent = app.add_subcommand("entropy", "Renyi entropy of one or more variables");
  add_data_flags(ent, ent_opt);
  add_kernel_flags(ent, ent_opt);
  add_estimator_flags(ent, ent_opt);
  add_output_flags(ent, ent_opt);
  ent->add_option("--vars", ent_opt.vars, "column ranges a:b, comma separated (joint entropy)");
  ent->callback([&]() {
    const SampleSet data = load_or_generate(ent_opt);
    const MeasureRequest req = build_request(ent_opt, data, false);
    emit_estimate(ent_opt, "entropy", entropy(req));
  });

  CommonOpts mi_opt;
  CLI::App* mi = app.add_subcommand("mi", "mutual information I(variables; target)");
  add_data_flags(mi, mi_opt);
  add_kernel_flags(mi, mi_opt);
  add_estimator_flags(mi, mi_opt);
  add_output_flags(mi, mi_opt);
  mi->add_option("--vars", mi_opt.vars, "variable column ranges (default: all non-target)");
  mi->add_option("--target", mi_opt.target, "target column range a:b")->required();
  mi->callback([&]() {
    const SampleSet data = load_or_generate(mi_opt);
    const MeasureRequest req = build_request(mi_opt, data, true);
    emit_estimate(mi_opt, "mi", mutual_information(req));
  });

  CommonOpts tc_opt;
  CLI::App* tc = app.add_subcommand("tc", "total correlation of two or more variables");
  add_data_flags(tc, tc_opt);
  add_kernel_flags(tc, tc_opt);
  add_estimator_flags(tc, tc_opt);
  add_output_flags(tc, tc_opt);
  tc->add_option("--vars", tc_opt.vars, "variable column ranges, at least two")->required();
  tc->callback([&]() {
    const SampleSet data = load_or_generate(tc_opt);
    const MeasureRequest req = build_request(tc_opt, data, false);
    emit_estimate(tc_opt, "tc", total_correlation(req));
  });

  CommonOpts sel_opt;
  long long label_col = -1;
  int sel_count = 1;
  CLI::App* sel = app.add_subcommand("select", "greedy mutual-information feature selection");
  add_data_flags(sel, sel_opt);
  add_kernel_flags(sel, sel_opt);
  add_estimator_flags(sel, sel_opt);
  add_output_flags(sel, sel_opt);
  sel->add_option("--label-col", label_col, "label column index (default: last)");
  sel->add_option("--count", sel_count, "features to select")->capture_default_str();
  sel->callback([&]() { run_select(sel_opt, label_col, sel_count); });

  BenchOpts bench_opt;
  CLI::App* bench = app.add_subcommand("bench", "MRE benchmark grid on mixture data");
  bench->add_option("--n", bench_opt.n, "sample count")->capture_default_str();
  bench->add_option("--d", bench_opt.d, "dimension")->capture_default_str();
  bench->add_option("--alpha", bench_opt.alphas, "Renyi orders (repeatable)");
  bench->add_option("--method", bench_opt.methods, "methods (repeatable)")
      ->check(CLI::IsMember({"exact", "integer", "taylor", "chebyshev", "lanczos"}));
  bench->add_option("--s-start", bench_opt.s_start, "")->capture_default_str();
  bench->add_option("--s-stop", bench_opt.s_stop, "")->capture_default_str();
  bench->add_option("--s-step", bench_opt.s_step, "")->capture_default_str();
  bench->add_option("--degree", bench_opt.degree, "Taylor/Chebyshev degree")
      ->capture_default_str();
  bench->add_option("--lanczos-degree", bench_opt.lanczos_degree, "Lanczos steps")
      ->capture_default_str();
  bench->add_option("--clusters", bench_opt.clusters, "block low-rank cluster grid");
  bench->add_option("--rank", bench_opt.ranks, "block low-rank rank grid");
  bench->add_option("--trials", bench_opt.trials, "trials per grid point")
      ->capture_default_str();
  bench->add_option("--seed", bench_opt.seed, "master seed")->capture_default_str();
  bench->add_option("--kernel", bench_opt.kernel, "kernel family")
      ->check(CLI::IsMember({"gaussian", "polynomial"}))
      ->capture_default_str();
  bench->add_option("--sigma", bench_opt.sigma, "gaussian width")->capture_default_str();
  bench->add_option("--shift", bench_opt.shift, "polynomial shift")->capture_default_str();
  bench->add_option("--poly-degree", bench_opt.poly_degree, "polynomial degree")
      ->capture_default_str();
  bench->add_option("--output", bench_opt.output, "CSV/JSON destination");
  bench->add_option("--format", bench_opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bench->callback([&]() { run_bench(bench_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rentropy
