#include "dsstar/bench.hpp"

#include "dsstar/nullspace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace dsstar {

void BenchConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("bench: no sizes given");
  for (int n : sizes)
    if (n < 2) throw std::invalid_argument("bench: sizes must be at least 2");
  if (instances_per_size < 1) throw std::invalid_argument("bench: need at least one instance per size");
  if (methods.empty()) throw std::invalid_argument("bench: empty method list");
  if (solve.pf_steps < 1) throw std::invalid_argument("bench: pf_steps must be at least 1");
  solve.delta.validate();
}

QapInstance gen_random_instance(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random_instance: n must be at least 2");
  std::mt19937_64 rng(seed);
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  return QapInstance::dense(random_symmetric(dim, rng), Vector::Zero(dim));
}

std::uint64_t instance_seed(std::uint64_t base, int n, int index) {
  // splitmix64 over the packed triple
  std::uint64_t z = base ^ (static_cast<std::uint64_t>(n) << 40) ^ static_cast<std::uint64_t>(index);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::optional<NormalizedBounds> normalize_bounds(const std::vector<double>& lowers, const std::vector<double>& uppers) {
  if (lowers.empty() || uppers.empty()) return std::nullopt;
  const double lo = std::abs(*std::max_element(lowers.begin(), lowers.end()));
  const double up = std::abs(*std::min_element(uppers.begin(), uppers.end()));
  if (!(lo > 0.0) || !(up > 0.0)) return std::nullopt;
  NormalizedBounds out;
  for (double v : lowers) out.lowers.push_back(v / lo);
  for (double v : uppers) out.uppers.push_back(v / up);
  return out;
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("DS_STAR_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

namespace {

struct Task {
  int n;
  int index;
};

void summarise(BenchReport& report, const std::vector<int>& sizes, const std::vector<Method>& methods) {
  for (int n : sizes)
    for (Method m : methods) {
      BenchSummary s;
      s.n = n;
      s.method = m;
      std::vector<const BenchRow*> all, normed;
      for (const auto& r : report.rows)
        if (r.n == n && r.method == m) {
          all.push_back(&r);
          if (r.normalized) normed.push_back(&r);
        }
      s.count = static_cast<int>(all.size());
      const auto stat = [](const std::vector<const BenchRow*>& rows, auto field, double& mean, double& sd) {
        mean = sd = 0.0;
        if (rows.empty()) return;
        for (const auto* r : rows) mean += field(*r);
        mean /= static_cast<double>(rows.size());
        if (rows.size() > 1) {
          for (const auto* r : rows) sd += (field(*r) - mean) * (field(*r) - mean);
          sd = std::sqrt(sd / static_cast<double>(rows.size() - 1));
        }
      };
      stat(all, [](const BenchRow& r) { return r.lower; }, s.mean.lower, s.stddev.lower);
      stat(all, [](const BenchRow& r) { return r.upper; }, s.mean.upper, s.stddev.upper);
      stat(normed, [](const BenchRow& r) { return r.norm_lower; }, s.mean.norm_lower, s.stddev.norm_lower);
      stat(normed, [](const BenchRow& r) { return r.norm_upper; }, s.mean.norm_upper, s.stddev.norm_upper);
      stat(all, [](const BenchRow& r) { return r.secs_delta; }, s.mean.secs_delta, s.stddev.secs_delta);
      stat(all, [](const BenchRow& r) { return r.secs_fw; }, s.mean.secs_fw, s.stddev.secs_fw);
      stat(all, [](const BenchRow& r) { return r.secs_total; }, s.mean.secs_total, s.stddev.secs_total);
      double unused = 0.0;
      stat(all, [](const BenchRow& r) { return r.certified ? 1.0 : 0.0; }, s.certified_rate, unused);
      stat(all, [](const BenchRow& r) { return r.pf_fallback ? 1.0 : 0.0; }, s.fallback_rate, unused);
      report.summaries.push_back(s);
    }
}

}  // namespace

BenchReport run_benchmark(const BenchConfig& config) {
  config.validate();
  std::vector<Task> tasks;
  for (int n : config.sizes)
    for (int i = 0; i < config.instances_per_size; ++i) tasks.push_back({n, i});

  const std::size_t m = config.methods.size();
  std::vector<BenchRow> rows(tasks.size() * m);
  std::vector<char> skipped(tasks.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        const Task task = tasks[t];
        const std::uint64_t seed = instance_seed(config.seed, task.n, task.index);
        const QapInstance inst = gen_random_instance(task.n, seed);
        const NullBasis basis = NullBasis::orthonormal(task.n);
        std::vector<double> lowers, uppers;
        for (std::size_t k = 0; k < m; ++k) {
          const BoundsReport b = solve(inst, basis, config.methods[k], config.solve);
          BenchRow& r = rows[t * m + k];
          r.n = task.n;
          r.seed = seed;
          r.method = config.methods[k];
          r.lower = b.lower;
          r.upper = b.upper;
          r.certified = b.certified_global;
          r.pf_fallback = b.pf_fallback;
          r.eig_warning = b.eig_warning;
          r.secs_delta = b.secs_delta;
          r.secs_fw = b.secs_fw;
          r.secs_total = b.secs_total;
          lowers.push_back(b.lower);
          uppers.push_back(b.upper);
        }
        if (auto nb = normalize_bounds(lowers, uppers)) {
          for (std::size_t k = 0; k < m; ++k) {
            rows[t * m + k].norm_lower = nb->lowers[k];
            rows[t * m + k].norm_upper = nb->uppers[k];
            rows[t * m + k].normalized = true;
          }
        } else {
          skipped[t] = 1;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks.size());
        return;
      }
    }
  };

  const int workers = std::min<int>(worker_count(config.threads), static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  BenchReport report;
  report.rows = std::move(rows);
  for (std::size_t t = 0; t < tasks.size(); ++t)
    if (skipped[t]) {
      ++report.skipped;
      std::cerr << "bench: instance n=" << tasks[t].n << " #" << tasks[t].index
                << " has a zero extreme bound; left out of normalised statistics\n";
    }
  summarise(report, config.sizes, config.methods);
  return report;
}

void write_bench_csv(const BenchReport& report, std::ostream& out) {
  out << "n,seed,method,lower,upper,norm_lower,norm_upper,certified,pf_fallback,secs_delta,secs_fw,secs_total\n";
  out << std::setprecision(17);
  for (const auto& r : report.rows) {
    out << r.n << ',' << r.seed << ',' << to_string(r.method) << ',' << r.lower << ',' << r.upper << ',';
    if (r.normalized)
      out << r.norm_lower << ',' << r.norm_upper;
    else
      out << ',';
    out << ',' << (r.certified ? 1 : 0) << ',' << (r.pf_fallback ? 1 : 0) << ',' << r.secs_delta << ',' << r.secs_fw
        << ',' << r.secs_total << '\n';
  }
  for (const auto& s : report.summaries) {
    const auto line = [&](const char* tag, const BenchRow& v, double cert, double fb) {
      out << s.n << ',' << tag << ',' << to_string(s.method) << ',' << v.lower << ',' << v.upper << ',' << v.norm_lower
          << ',' << v.norm_upper << ',' << cert << ',' << fb << ',' << v.secs_delta << ',' << v.secs_fw << ','
          << v.secs_total << '\n';
    };
    line("mean", s.mean, s.certified_rate, s.fallback_rate);
    line("std", s.stddev, 0.0, 0.0);
  }
}

}  // namespace dsstar
