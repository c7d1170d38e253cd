#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mesh.hpp"

namespace sph {

namespace {

template <typename T>
BasicMesh<T> random_mesh(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.9, -0.1);
  std::vector<T> elems(n * n * n);
  for (auto& e : elems) e = static_cast<T>(dist(rng));
  return BasicMesh<T>::from_elements({n, n, n}, std::move(elems));
}

// x = x*x + x*2, every operation returning a fresh mesh
template <typename T>
void kernel_algebraic(BasicMesh<T>& x) {
  x = add(mul_elem(x, x), mul_scalar(x, T(2)));
}

// the same update with one explicit temporary and in-place operations
template <typename T>
void kernel_mutating(BasicMesh<T>& x) {
  BasicMesh<T> temp1 = x;
  temp1.umult(T(2));
  x.umult_elem(x);
  x.uplus(temp1);
}

template <typename T, typename Kernel>
double time_run(BasicMesh<T> x, std::uint64_t iters, Kernel k) {
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < iters; ++i) k(x);
  auto t1 = std::chrono::steady_clock::now();
  if (!all_finite(x)) throw error(errc::runtime, "kernel diverged");
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

template <typename T, typename Kernel>
double median_ms(const BasicMesh<T>& init, std::uint64_t iters, int reps, Kernel k) {
  std::vector<double> times;
  times.reserve(reps);
  for (int r = 0; r < reps; ++r) times.push_back(time_run(init, iters, k));
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

template <typename T>
std::vector<BenchRow> run_rows(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (std::size_t n : cfg.sizes) {
    const std::uint64_t elems = static_cast<std::uint64_t>(n) * n * n;
    BenchRow row;
    row.size = n;
    row.iterations = std::max<std::uint64_t>(1, cfg.total_updates / elems);
    BasicMesh<T> init = random_mesh<T>(n, cfg.seed);
    row.algebraic_ms =
        median_ms(init, row.iterations, cfg.repetitions, kernel_algebraic<T>);
    row.mutating_ms =
        median_ms(init, row.iterations, cfg.repetitions, kernel_mutating<T>);
    row.ratio = row.algebraic_ms / row.mutating_ms;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string BenchReport::table() const {
  std::ostringstream os;
  os << "size      iterations   algebraic_ms   mutating_ms   ratio\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu^3 %14llu %14.2f %13.2f %7.2f\n", r.size,
                  static_cast<unsigned long long>(r.iterations), r.algebraic_ms,
                  r.mutating_ms, r.ratio);
    os << buf;
  }
  os << "precision: " << precision << "\n";
  return os.str();
}

std::string BenchReport::to_json() const {
  nlohmann::json j;
  j["precision"] = precision;
  for (const auto& r : rows) {
    nlohmann::json row;
    row["size"] = r.size;
    row["iterations"] = r.iterations;
    row["algebraic_ms"] = r.algebraic_ms;
    row["mutating_ms"] = r.mutating_ms;
    row["ratio"] = r.ratio;
    j["rows"].push_back(row);
  }
  return j.dump(2);
}

BenchReport run_bench(const BenchConfig& cfg) {
  BenchReport rep;
  if (cfg.use_double) {
    rep.rows = run_rows<double>(cfg);
    rep.precision = "double";
  } else {
    rep.rows = run_rows<float>(cfg);
    rep.precision = "float";
  }
  return rep;
}

}  // namespace sph
