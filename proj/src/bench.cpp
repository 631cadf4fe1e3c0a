#include "rentropy/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <istream>
#include <memory>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "rentropy/block_lowrank.hpp"
#include "rentropy/csv.hpp"
#include "rentropy/exact_oracle.hpp"
#include "rentropy/kernel_gram.hpp"
#include "rentropy/mixture.hpp"
#include "rentropy/operators.hpp"

namespace rentropy {

void BenchmarkSpec::validate() const {
  if (n < 2 || d < 1) throw std::invalid_argument("benchmark needs n >= 2 and d >= 1");
  validate_kernel(kernel);
  if (alphas.empty()) throw std::invalid_argument("alpha list must be non-empty");
  if (methods.empty()) throw std::invalid_argument("method list must be non-empty");
  if (s_start < 1 || s_step < 1 || s_stop < s_start) {
    throw std::invalid_argument("sketch range must be non-empty with positive step");
  }
  if (degree_taylor < 1 || degree_chebyshev < 1 || degree_lanczos < 1) {
    throw std::invalid_argument("polynomial degrees must be positive");
  }
  if (trials < 1) throw std::invalid_argument("trial count must be positive");
  if (clusters.empty() != ranks.empty()) {
    throw std::invalid_argument("cluster and rank grids must be given together");
  }
  for (int c : clusters) {
    if (c < 1 || c > n) throw std::invalid_argument("cluster count out of range");
  }
  for (int k : ranks) {
    if (k < 1) throw std::invalid_argument("rank must be positive");
  }
}

std::vector<int> BenchmarkSpec::sketch_grid() const {
  std::vector<int> grid;
  for (int s = s_start; s <= s_stop; s += s_step) grid.push_back(s);
  return grid;
}

int BenchmarkSpec::degree_for(Method m) const {
  switch (m) {
    case Method::Taylor: return degree_taylor;
    case Method::Chebyshev: return degree_chebyshev;
    case Method::Lanczos: return degree_lanczos;
    case Method::Exact:
    case Method::Integer: return 0;
  }
  return 0;
}

namespace {

void write_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_double(*v);
}

}  // namespace

void write_record_csv(std::ostream& out, const BenchmarkRecord& rec) {
  out << rec.method << ',' << format_double(rec.alpha) << ',' << rec.s << ',' << rec.m << ','
      << rec.c << ',' << rec.k << ',' << rec.seed << ',';
  write_optional(out, rec.estimate);
  out << ',';
  write_optional(out, rec.exact);
  out << ',';
  write_optional(out, rec.rel_error);
  out << ',' << format_double(rec.time_s) << '\n';
}

void write_records_csv(std::ostream& out, const std::vector<BenchmarkRecord>& recs) {
  out << kBenchCsvHeader << '\n';
  for (const BenchmarkRecord& rec : recs) write_record_csv(out, rec);
}

void write_records_json(std::ostream& out, const std::vector<BenchmarkRecord>& recs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BenchmarkRecord& rec : recs) {
    nlohmann::ordered_json obj;
    obj["method"] = rec.method;
    obj["alpha"] = rec.alpha;
    obj["s"] = rec.s;
    obj["m"] = rec.m;
    obj["c"] = rec.c;
    obj["k"] = rec.k;
    obj["seed"] = rec.seed;
    if (rec.estimate) obj["estimate"] = *rec.estimate; else obj["estimate"] = nullptr;
    if (rec.exact) obj["exact"] = *rec.exact; else obj["exact"] = nullptr;
    if (rec.rel_error) obj["rel_error"] = *rec.rel_error; else obj["rel_error"] = nullptr;
    obj["time_s"] = rec.time_s;
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

std::vector<BenchmarkRecord> parse_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty benchmark CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kBenchCsvHeader) throw std::runtime_error("unexpected benchmark CSV header: " + line);

  std::vector<BenchmarkRecord> recs;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    f.push_back(cur);
    if (f.size() != 11) throw std::runtime_error("benchmark CSV row has wrong field count");
    BenchmarkRecord rec;
    rec.method = f[0];
    rec.alpha = std::strtod(f[1].c_str(), nullptr);
    rec.s = std::atoi(f[2].c_str());
    rec.m = std::atoi(f[3].c_str());
    rec.c = std::atoi(f[4].c_str());
    rec.k = std::atoi(f[5].c_str());
    rec.seed = std::strtoull(f[6].c_str(), nullptr, 10);
    if (!f[7].empty()) rec.estimate = std::strtod(f[7].c_str(), nullptr);
    if (!f[8].empty()) rec.exact = std::strtod(f[8].c_str(), nullptr);
    if (!f[9].empty()) rec.rel_error = std::strtod(f[9].c_str(), nullptr);
    rec.time_s = std::strtod(f[10].c_str(), nullptr);
    recs.push_back(std::move(rec));
  }
  return recs;
}

namespace {

double timed_exact_bits(const GramMatrix& gram, double alpha, double& time_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const double bits = exact_entropy(gram, alpha);
  time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return bits;
}

void finish_record(BenchmarkRecord& rec, double exact_bits) {
  rec.exact = exact_bits;
  if (rec.estimate && exact_bits != 0.0) {
    rec.rel_error = std::abs(*rec.estimate - exact_bits) / std::abs(exact_bits);
  }
}

void emit(std::vector<BenchmarkRecord>& out, std::ostream* csv, BenchmarkRecord rec) {
  if (csv) {
    write_record_csv(*csv, rec);
    csv->flush();
  }
  out.push_back(std::move(rec));
}

}  // namespace

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkSpec& spec, std::ostream* csv_stream) {
  spec.validate();

  const SampleSet data = generate_mixture(spec.n, spec.d, spec.master_seed);

  auto t0 = std::chrono::steady_clock::now();
  const GramMatrix gram = build_gram(data, spec.kernel);
  std::cerr << "gram build (" << spec.n << "x" << spec.n << "): "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
            << " s\n";

  t0 = std::chrono::steady_clock::now();
  const Spectrum spectrum = eigen_spectrum(gram);
  std::cerr << "oracle eigendecomposition: "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
            << " s\n";

  std::vector<double> exact_bits(spec.alphas.size());
  for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
    exact_bits[a] = exact_entropy(spectrum, spec.alphas[a]);
  }

  const DenseOperator dense(gram);
  struct BlrPoint {
    int c, k;
    std::unique_ptr<BlockLowRank> op;
  };
  std::vector<BlrPoint> blr_points;
  for (int c : spec.clusters) {
    for (int k : spec.ranks) {
      t0 = std::chrono::steady_clock::now();
      auto op = std::make_unique<BlockLowRank>(
          build_block_lowrank(data, spec.kernel, c, k, spec.master_seed));
      std::cerr << "block low-rank build (c=" << c << ", k=" << k << "): "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                << " s\n";
      blr_points.push_back({c, k, std::move(op)});
    }
  }

  if (csv_stream) *csv_stream << kBenchCsvHeader << '\n';
  std::vector<BenchmarkRecord> records;

  auto run_point = [&](Method method, double alpha, double exact_a, int s, int m,
                       const SpectralOperator& op, int c, int k) {
    for (int t = 0; t < spec.trials; ++t) {
      BenchmarkRecord rec;
      rec.method = method_name(method);
      if (c > 0) rec.method += "+blr";
      rec.alpha = alpha;
      rec.s = s;
      rec.m = m;
      rec.c = c;
      rec.k = k;
      rec.seed = spec.master_seed + static_cast<std::uint64_t>(t);
      try {
        EstimatorConfig cfg;
        cfg.alpha = alpha;
        cfg.sketches = s;
        cfg.degree = m > 0 ? m : cfg.degree;
        cfg.seed = rec.seed;
        const EntropyEstimate est = operator_entropy(op, method, cfg);
        rec.estimate = est.bits;
        rec.time_s = est.elapsed_s;
      } catch (const NumericError&) {
      } catch (const std::invalid_argument&) {
      }
      finish_record(rec, exact_a);
      emit(records, csv_stream, std::move(rec));
    }
  };

  for (Method method : spec.methods) {
    for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
      const double alpha = spec.alphas[a];
      if (method == Method::Exact) {
        // deterministic method: the sketch grid does not apply
        for (int t = 0; t < spec.trials; ++t) {
          BenchmarkRecord rec;
          rec.method = "exact";
          rec.alpha = alpha;
          rec.seed = spec.master_seed + static_cast<std::uint64_t>(t);
          rec.estimate = timed_exact_bits(gram, alpha, rec.time_s);
          finish_record(rec, exact_bits[a]);
          emit(records, csv_stream, std::move(rec));
        }
        continue;
      }
      const int m = spec.degree_for(method);
      for (int s : spec.sketch_grid()) {
        run_point(method, alpha, exact_bits[a], s, m, dense, 0, 0);
        for (const BlrPoint& point : blr_points) {
          run_point(method, alpha, exact_bits[a], s, m, *point.op, point.c, point.k);
        }
      }
    }
  }
  return records;
}

}  // namespace rentropy
