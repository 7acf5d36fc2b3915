#include "rem/bench.hpp"

#include <chrono>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>

#include "rem/baseline.hpp"
#include "rem/error.hpp"

namespace rem {

namespace {

auto quote(const std::string &field) -> std::string {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits one record, which may span several physical lines inside quotes.
auto read_record(std::istream &in, std::vector<std::string> &fields) -> bool {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  if (quoted) throw ParseError("unterminated quoted CSV field", 0);
  fields.push_back(std::move(field));
  return true;
}

auto to_u64(const std::string &s) -> std::uint64_t {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ParseError("expected an unsigned integer, got '" + s + "'", 0);
  return v;
}

auto elapsed_ns(std::chrono::steady_clock::time_point t0) -> std::uint64_t {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count());
}

}  // namespace

void write_csv(std::ostream &out, std::span<const BenchRecord> records) {
  out << kBenchCsvHeader << '\n';
  for (const auto &r : records) {
    out << quote(r.pattern) << ',' << quote(r.engine) << ',' << r.egraph_nodes << ',' << r.result_count << ','
        << r.time_ns << ',' << r.index_time_ns << ',' << r.intersection_steps << ',' << r.candidates << '\n';
  }
}

auto read_csv(std::istream &in) -> std::vector<BenchRecord> {
  std::vector<std::string> fields;
  if (!read_record(in, fields)) throw ParseError("empty CSV", 0);
  std::string header;
  for (std::size_t i = 0; i < fields.size(); ++i) header += (i ? "," : "") + fields[i];
  if (header != kBenchCsvHeader) throw ParseError("unexpected CSV header '" + header + "'", 0);

  std::vector<BenchRecord> records;
  while (read_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 8) throw ParseError("expected 8 CSV fields, got " + std::to_string(fields.size()), 0);
    BenchRecord r;
    r.pattern = fields[0];
    r.engine = fields[1];
    r.egraph_nodes = to_u64(fields[2]);
    r.result_count = to_u64(fields[3]);
    r.time_ns = to_u64(fields[4]);
    r.index_time_ns = to_u64(fields[5]);
    r.intersection_steps = to_u64(fields[6]);
    r.candidates = to_u64(fields[7]);
    records.push_back(std::move(r));
  }
  return records;
}

auto bench(const EGraph &egraph, std::span<const Pattern> patterns, std::span<const Engine> engines,
           std::size_t repeat) -> std::vector<BenchRecord> {
  if (repeat == 0) throw Error("repeat must be at least 1");
  if (engines.empty()) throw Error("no engines selected");
  RelationalMatcher matcher(egraph);
  matcher.database();
  const auto nodes = static_cast<std::uint64_t>(egraph.num_nodes());

  std::vector<BenchRecord> records;
  for (const auto &p : patterns) {
    std::optional<MatchSet> reference;
    const char *reference_engine = nullptr;
    for (auto engine : engines) {
      MatchOptions options;
      options.engine = engine;
      BenchRecord best;
      best.time_ns = std::numeric_limits<std::uint64_t>::max();
      std::optional<MatchSet> result;
      for (std::size_t r = 0; r < repeat; ++r) {
        matcher.cache().clear();
        auto t0 = std::chrono::steady_clock::now();
        auto m = matcher.match(p, options);
        auto t = elapsed_ns(t0);
        if (t < best.time_ns) {
          best.time_ns = t;
          best.index_time_ns = engine == Engine::GenericJoin ? matcher.cache().total_build_ns() : 0;
          best.intersection_steps = m.counters.intersection_steps;
          best.candidates = m.counters.candidates;
        }
        if (!result) result = std::move(m);
      }
      best.pattern = p.to_string();
      best.engine = to_string(engine);
      best.egraph_nodes = nodes;
      result->normalize();
      best.result_count = result->size();
      if (!reference) {
        reference = std::move(result);
        reference_engine = to_string(engine);
      } else if (!reference->same_rows_as(*result)) {
        std::string diff;
        auto lines = reference->symmetric_difference(*result);
        for (std::size_t i = 0; i < lines.size() && i < 20; ++i) diff += "\n  " + lines[i];
        if (lines.size() > 20) diff += "\n  ... (" + std::to_string(lines.size() - 20) + " more)";
        throw EngineDisagreement("engines " + std::string(reference_engine) + " and " + to_string(engine) +
                                 " disagree on " + p.to_string() + " (- only " + reference_engine + ", + only " +
                                 to_string(engine) + "):" + diff);
      }

      records.push_back(best);
      if (engine == Engine::GenericJoin) {
        auto noindex = best;
        noindex.engine = "gj-noindex";
        noindex.time_ns = best.time_ns - std::min(best.time_ns, best.index_time_ns);
        records.push_back(noindex);
      }
    }
  }
  return records;
}

}  // namespace rem
