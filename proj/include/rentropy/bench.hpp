#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rentropy/info_measures.hpp"
#include "rentropy/types.hpp"

namespace rentropy {

// Grid for the MRE/SD harness on mixture data. Dense rows always run; when
// clusters/ranks are non-empty, every (c, k) pair additionally runs the
// non-exact methods through the block low-rank operator.
struct BenchmarkSpec {
  Index n = 2000;
  Index d = 10;
  KernelSpec kernel;
  std::vector<double> alphas{2.0};
  std::vector<Method> methods{Method::Chebyshev};
  int s_start = 20;
  int s_stop = 200;
  int s_step = 20;
  int degree_taylor = 30;
  int degree_chebyshev = 30;
  int degree_lanczos = 15;
  std::vector<int> clusters;
  std::vector<int> ranks;
  int trials = 100;
  std::uint64_t master_seed = 0;

  void validate() const;
  std::vector<int> sketch_grid() const;
  int degree_for(Method m) const;
};

struct BenchmarkRecord {
  std::string method;
  double alpha = 0.0;
  int s = 0;
  int m = 0;
  int c = 0;  // 0 = dense
  int k = 0;
  std::uint64_t seed = 0;
  std::optional<double> estimate;   // bits; empty when the trial failed
  std::optional<double> exact;      // bits
  std::optional<double> rel_error;  // |estimate-exact|/|exact|
  double time_s = 0.0;
};

inline constexpr const char* kBenchCsvHeader = "method,alpha,s,m,c,k,seed,estimate,exact,rel_error,time_s";

void write_record_csv(std::ostream& out, const BenchmarkRecord& rec);
void write_records_csv(std::ostream& out, const std::vector<BenchmarkRecord>& recs);
void write_records_json(std::ostream& out, const std::vector<BenchmarkRecord>& recs);
std::vector<BenchmarkRecord> parse_records_csv(std::istream& in);

// Runs the full grid, K trials per point with trial seeds master_seed+t.
// The oracle spectrum is computed once and reused for every row. Rows are
// streamed to csv_stream (with header) as they complete when it is non-null.
// Backend failures are recorded as rows with empty estimate/rel_error.
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkSpec& spec,
                                           std::ostream* csv_stream = nullptr);

}  // namespace rentropy
