#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rem/egraph.hpp"
#include "rem/ematch.hpp"
#include "rem/pattern.hpp"

namespace rem {

struct BenchRecord {
  std::string pattern;
  std::string engine;  ///< "gj", "gj-noindex" or "em"
  std::uint64_t egraph_nodes = 0;
  std::uint64_t result_count = 0;
  std::uint64_t time_ns = 0;
  std::uint64_t index_time_ns = 0;
  std::uint64_t intersection_steps = 0;
  std::uint64_t candidates = 0;

  friend auto operator==(const BenchRecord &, const BenchRecord &) -> bool = default;
};

inline constexpr const char *kBenchCsvHeader =
    "pattern,engine,egraph_nodes,result_count,time_ns,index_time_ns,intersection_steps,candidates";

void write_csv(std::ostream &out, std::span<const BenchRecord> records);
/// Parses what write_csv produced. Throws ParseError.
auto read_csv(std::istream &in) -> std::vector<BenchRecord>;

/**
 * Runs every pattern under every engine `repeat` times and keeps the fastest
 * run. Generic join starts each run with an empty trie cache; its fastest run
 * is reported twice, as "gj" (with index build time) and "gj-noindex"
 * (without). Database conversion is done once, outside the timed region.
 * Throws EngineDisagreement if the engines' match sets differ.
 */
auto bench(const EGraph &egraph, std::span<const Pattern> patterns, std::span<const Engine> engines,
           std::size_t repeat) -> std::vector<BenchRecord>;

}  // namespace rem
