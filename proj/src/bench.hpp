#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sph {

struct BenchConfig {
  std::vector<std::size_t> sizes = {8, 64};  // cubic edge lengths
  std::uint64_t total_updates = 16777216;    // element updates per timed run
  int repetitions = 5;                       // timing is the median of these
  bool use_double = false;                   // override the compiled real type
  std::uint64_t seed = 0x5eedf00d;
};

struct BenchRow {
  std::size_t size = 0;
  std::uint64_t iterations = 0;
  double algebraic_ms = 0;  // median wall time, x = x*x + x*2 via pure ops
  double mutating_ms = 0;   // median wall time, same update via in-place ops
  double ratio = 0;         // algebraic / mutating
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string precision;  // "float" or "double"

  std::string table() const;
  std::string to_json() const;
};

/// Times the quadratic update kernel in its algebraic form (fresh mesh
/// per operation) against the self-mutating form (one temporary), with
/// identical per-element arithmetic. Initial data is drawn from
/// (-0.9, -0.1) so the map x -> x^2 + 2x stays bounded.
BenchReport run_bench(const BenchConfig& cfg);

}  // namespace sph
