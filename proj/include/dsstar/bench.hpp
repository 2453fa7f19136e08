#pragma once

#include "dsstar/qap.hpp"
#include "dsstar/relaxation.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dsstar {

struct BenchConfig {
  std::vector<int> sizes;
  int instances_per_size = 200;
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::ds_plus, Method::ds_plusplus, Method::ds_star};
  SolveOptions solve{};
  /// Empty means no file output.
  std::string output_path;
  /// 0 means hardware concurrency, further capped by DS_STAR_THREADS.
  int threads = 0;

  /// Throws std::invalid_argument on sizes < 2, instances < 1 or no methods.
  void validate() const;
};

/// W = (M + M^T) / 2 with M uniform in (-1, 1), n^2 x n^2, c = 0.
QapInstance gen_random_instance(int n, std::uint64_t seed);

/// Seed of instance `index` at size n under a base seed.
std::uint64_t instance_seed(std::uint64_t base, int n, int index);

struct NormalizedBounds {
  std::vector<double> lowers;
  std::vector<double> uppers;
};

/// Lowers divided by |max(lowers)| and uppers by |min(uppers)|, independently.
/// Empty when either divisor is zero.
std::optional<NormalizedBounds> normalize_bounds(const std::vector<double>& lowers, const std::vector<double>& uppers);

struct BenchRow {
  int n = 0;
  std::uint64_t seed = 0;
  Method method = Method::ds_star;
  double lower = 0.0;
  double upper = 0.0;
  double norm_lower = 0.0;
  double norm_upper = 0.0;
  bool normalized = false;
  bool certified = false;
  bool pf_fallback = false;
  bool eig_warning = false;
  double secs_delta = 0.0;
  double secs_fw = 0.0;
  double secs_total = 0.0;
};

/// Mean and standard deviation of every numeric column over one (n, method)
/// group; flags are averaged as 0/1.  Unnormalised instances are left out of
/// the normalised columns.
struct BenchSummary {
  int n = 0;
  Method method = Method::ds_star;
  int count = 0;
  BenchRow mean;
  BenchRow stddev;
  double certified_rate = 0.0;
  double fallback_rate = 0.0;
};

struct BenchReport {
  /// Ordered by (n, instance, method).
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summaries;
  /// Instances left out of the normalised statistics.
  int skipped = 0;
};

/// Worker count actually used for a requested count (0 = hardware).
int worker_count(int requested);

BenchReport run_benchmark(const BenchConfig& config);

void write_bench_csv(const BenchReport& report, std::ostream& out);

}  // namespace dsstar
